//! Property tests over randomly chosen small specs: structural invariants
//! that must hold for every group the engine can build.

use grouplab::constructions::{derived, eval_construction, Construction, EvalOutcome};
use grouplab::group::{as_group, center, centralizer, quotient};
use grouplab::iso::fingerprint;
use grouplab::spec::GroupSpec;
use grouplab::{Caps, Ctx};
use proptest::prelude::*;

const POOL: &[&str] = &[
    "C1", "C2", "C6", "C8", "C12", "C15", "E2^2", "E2^3", "E3^2", "C4 x C2", "C4 x C4",
    "Dih3", "Dih4", "Dih5", "Dih6", "Q8", "Dic3", "Q16", "S3", "S4", "A4", "He3", "SL23",
    "U8", "U15", "U16", "wr2(C2)", "wr2(C3)", "sd#1(C3, C2)", "sd#1(C5, C4)",
];

fn build(s: &str) -> grouplab::group::FiniteGroup {
    GroupSpec::parse(s).unwrap().build(&Caps::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn subgroup_construction_orders_divide(idx in 0..POOL.len()) {
        let g = build(POOL[idx]);
        let ctx = Ctx::new(Caps::default());
        for f in [Construction::Z, Construction::D, Construction::Phi, Construction::F, Construction::M] {
            if let EvalOutcome::Group(fg) = eval_construction(f, &g, &ctx).unwrap() {
                prop_assert_eq!(g.order() % fg.order(), 0, "|{}(G)| must divide |G|", f);
            }
        }
    }

    #[test]
    fn abelianization_is_abelian(idx in 0..POOL.len()) {
        let g = build(POOL[idx]);
        let q = quotient(&g, &derived(&g)).unwrap();
        prop_assert!(q.is_abelian());
    }

    #[test]
    fn center_is_centralizer_of_whole(idx in 0..POOL.len()) {
        let g = build(POOL[idx]);
        let z = center(&g);
        let c = centralizer(&g, &grouplab::group::Subgroup::whole(&g));
        prop_assert_eq!(z, c);
    }

    #[test]
    fn reified_subgroups_satisfy_lagrange(idx in 0..POOL.len()) {
        let g = build(POOL[idx]);
        let ctx = Ctx::new(Caps::default());
        let lat = ctx.lattice_of(&g).unwrap();
        for s in &lat.subgroups {
            prop_assert_eq!(g.order() % s.size(), 0);
            let k = as_group(&g, s);
            prop_assert_eq!(k.order(), s.size());
        }
    }

    #[test]
    fn fingerprint_is_isomorphism_invariant_under_relabeling(idx in 0..POOL.len(), seed in 0u64..1000) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let g = build(POOL[idx]);
        let n = g.order();
        // conjugate the table by a random relabeling that fixes the identity
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut perm: Vec<u16> = (1..n as u16).collect();
        perm.shuffle(&mut rng);
        perm.insert(0, 0);
        let mut inv = vec![0u16; n];
        for (i, &p) in perm.iter().enumerate() {
            inv[p as usize] = i as u16;
        }
        let mut table = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = perm[g.mul(inv[a], inv[b]) as usize];
            }
        }
        let (h, _) = grouplab::group::FiniteGroup::from_table_checked(n, table, "relabeled".into(), 256).unwrap();
        prop_assert_eq!(fingerprint(&g), fingerprint(&h));
        prop_assert!(grouplab::iso::find_isomorphism(&g, &h).is_some());
    }
}
