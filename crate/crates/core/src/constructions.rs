//! The constructions f(H): center, derived subgroup, Frattini subgroup,
//! Fitting subgroup, Chermak-Delgado subgroup and lattice, automorphism and
//! inner automorphism groups, with a single dispatch point so the
//! realisability engine is generic in f.

use crate::error::{GroupError, Result};
use crate::group::{
    as_group, centralizer, closure, Elem, FiniteGroup, Subgroup,
};
use crate::iso::{enumerate_automorphisms, compose_perm};
use crate::lattice::{is_nilpotent, prime_divisors, sylow_subgroups, SubgroupLattice};
use crate::{Caps, Ctx};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

pub use crate::group::center;

/// Derived subgroup: closure of the set of all commutators.
pub fn derived(g: &FiniteGroup) -> Subgroup {
    let mut comms: Vec<Elem> = Vec::with_capacity(g.order());
    for a in g.elements() {
        for b in g.elements() {
            comms.push(g.commutator(a, b));
        }
    }
    comms.sort_unstable();
    comms.dedup();
    closure(g, &comms)
}

/// Frattini subgroup: intersection of all maximal subgroups (the whole group
/// when there are none, i.e. only for the trivial group).
pub fn frattini(g: &FiniteGroup, lat: &SubgroupLattice) -> Subgroup {
    let mut acc = Subgroup::whole(g);
    for &mi in &lat.maximal_ids {
        acc = acc.intersection(&lat.subgroups[mi]);
    }
    acc
}

/// p-group shortcut Φ(G) = G′·Gᵖ, kept as an independent oracle for the
/// maximal-intersection route. Only valid when |G| is a prime power.
pub fn frattini_pgroup_shortcut(g: &FiniteGroup) -> Option<Subgroup> {
    let primes = prime_divisors(g.order());
    if g.order() == 1 {
        return Some(Subgroup::whole(g));
    }
    if primes.len() != 1 {
        return None;
    }
    let p = primes[0] as u32;
    let mut seed: Vec<Elem> = derived(g).elems().to_vec();
    for a in g.elements() {
        // a^p
        let mut x = 0 as Elem;
        for _ in 0..p {
            x = g.mul(x, a);
        }
        seed.push(x);
    }
    Some(closure(g, &seed))
}

/// Fitting subgroup: join of all normal nilpotent subgroups. Fitting's
/// theorem guarantees the join is itself nilpotent; that is re-verified and a
/// violation reported as an internal inconsistency.
pub fn fitting(g: &FiniteGroup, lat: &SubgroupLattice) -> Result<Subgroup> {
    let mut acc = Subgroup::trivial(g.order());
    for &ni in &lat.normal_ids {
        let k = &lat.subgroups[ni];
        if is_nilpotent(&as_group(g, k)) {
            acc = crate::group::join(g, &acc, k);
        }
    }
    if !is_nilpotent(&as_group(g, &acc)) {
        return Err(GroupError::Internal(
            "join of normal nilpotent subgroups is not nilpotent".into(),
        ));
    }
    Ok(acc)
}

/// Cross-check route for the Fitting subgroup: the join over primes p of the
/// p-core O_p(G) (intersection of the Sylow p-subgroups).
pub fn fitting_via_pcores(g: &FiniteGroup, lat: &SubgroupLattice) -> Subgroup {
    let mut acc = Subgroup::trivial(g.order());
    for p in prime_divisors(g.order()) {
        let sylows = sylow_subgroups(g, lat, p);
        let mut core = Subgroup::whole(g);
        for s in sylows {
            core = core.intersection(s);
        }
        acc = crate::group::join(g, &acc, &core);
    }
    acc
}

/// The set of subgroups attaining the maximal Chermak-Delgado measure
/// m_H(K) = |K|·|C_H(K)|, with the measure value.
#[derive(Debug, Clone)]
pub struct CdLattice {
    pub max_measure: u64,
    /// Indices into the parent lattice's subgroup list, ascending.
    pub member_ids: Vec<usize>,
}

impl CdLattice {
    pub fn members<'a>(&self, lat: &'a SubgroupLattice) -> Vec<&'a Subgroup> {
        self.member_ids.iter().map(|&i| &lat.subgroups[i]).collect()
    }
}

/// Evaluate the Chermak-Delgado measure on every subgroup, keep the maximizers.
pub fn cd_lattice(g: &FiniteGroup, lat: &SubgroupLattice) -> CdLattice {
    let measures: Vec<u64> = lat
        .subgroups
        .iter()
        .map(|k| k.size() as u64 * centralizer(g, k).size() as u64)
        .collect();
    let max_measure = *measures.iter().max().expect("lattice is never empty");
    let member_ids = (0..lat.subgroups.len())
        .filter(|&i| measures[i] == max_measure)
        .collect();
    CdLattice {
        max_measure,
        member_ids,
    }
}

/// The Chermak-Delgado subgroup M(H): the unique minimal member of CD(H),
/// computed as the intersection of all members and verified to be a member.
pub fn chermak_delgado_subgroup(
    g: &FiniteGroup,
    lat: &SubgroupLattice,
    cd: &CdLattice,
) -> Result<Subgroup> {
    let mut acc = Subgroup::whole(g);
    for &mi in &cd.member_ids {
        acc = acc.intersection(&lat.subgroups[mi]);
    }
    let id = lat.index_of(&acc).ok_or_else(|| {
        GroupError::Internal("intersection of CD members is not an enumerated subgroup".into())
    })?;
    if !cd.member_ids.contains(&id) {
        return Err(GroupError::Internal(
            "intersection of CD members is not itself a CD member".into(),
        ));
    }
    Ok(acc)
}

/// Why an automorphism group came back without a full table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AutCap {
    /// Fully enumerated and (if small enough) materialized.
    Complete,
    /// Enumeration skipped or aborted: candidate-image preflight or the map
    /// cap was exceeded. The order is unknown.
    MapCapExceeded,
}

/// The automorphism group of a base group: the list of automorphism
/// permutations, the Cayley table on automorphism indices (when within the
/// table cap), and the locations of the inner automorphisms.
#[derive(Debug, Clone)]
pub struct AutGroup {
    pub base_order: usize,
    /// Sorted automorphism permutations; index 0 is the identity map.
    pub automorphisms: Vec<Vec<Elem>>,
    /// Cayley table on automorphism indices under composition, if within cap.
    pub table_group: Option<FiniteGroup>,
    /// Indices of the conjugation automorphisms.
    pub inner_ids: Vec<usize>,
    pub cap: AutCap,
}

impl AutGroup {
    /// |Aut|, when enumeration completed.
    pub fn aut_order(&self) -> Option<usize> {
        match self.cap {
            AutCap::Complete => Some(self.automorphisms.len()),
            AutCap::MapCapExceeded => None,
        }
    }

    /// The subgroup of the table group formed by the inner automorphisms.
    pub fn inner_subgroup(&self) -> Option<Subgroup> {
        let t = self.table_group.as_ref()?;
        Some(Subgroup::from_elems(
            t.order(),
            self.inner_ids.iter().map(|&i| i as Elem).collect(),
        ))
    }
}

/// Enumerate Aut(g) by backtracking over images of the greedy generating
/// sequence. Cap overruns are recorded in the result, not raised, so callers
/// that only need partial information can proceed.
pub fn automorphism_group(g: &FiniteGroup, caps: &Caps) -> AutGroup {
    let (autos, complete) = enumerate_automorphisms(g, caps);
    if !complete {
        return AutGroup {
            base_order: g.order(),
            automorphisms: Vec::new(),
            table_group: None,
            inner_ids: Vec::new(),
            cap: AutCap::MapCapExceeded,
        };
    }
    let index: HashMap<&[Elem], usize> = autos
        .iter()
        .enumerate()
        .map(|(i, p)| (p.as_slice(), i))
        .collect();
    // inner automorphisms: conjugation by each element
    let mut inner_ids: Vec<usize> = g
        .elements()
        .map(|x| {
            let perm: Vec<Elem> = g.elements().map(|a| g.conj(x, a)).collect();
            *index
                .get(perm.as_slice())
                .expect("conjugation is an automorphism")
        })
        .collect();
    inner_ids.sort_unstable();
    inner_ids.dedup();

    let m = autos.len();
    let table_group = if m <= caps.aut_table_cap {
        let mut table = vec![0 as Elem; m * m];
        for i in 0..m {
            for j in 0..m {
                let comp = compose_perm(&autos[i], &autos[j]);
                table[i * m + j] = index[comp.as_slice()] as Elem;
            }
        }
        Some(FiniteGroup::from_table_trusted(
            m,
            table,
            format!("Aut({})", g.spec()),
        ))
    } else {
        None
    };
    AutGroup {
        base_order: g.order(),
        automorphisms: autos,
        table_group,
        inner_ids,
        cap: AutCap::Complete,
    }
}

/// Inner automorphism group as a subgroup of the Aut table group.
pub fn inner_automorphisms(g: &FiniteGroup, aut: &AutGroup) -> Result<Subgroup> {
    let sub = aut.inner_subgroup().ok_or_else(|| {
        GroupError::CapExceeded(format!(
            "Aut({}) has no materialized table group",
            g.spec()
        ))
    })?;
    debug_assert_eq!(
        sub.size(),
        g.order() / crate::group::center(g).size(),
        "|Inn| must equal |G| / |Z(G)|"
    );
    Ok(sub)
}

/// Construction tags: the f in "f-realisable".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Construction {
    Z,
    D,
    Phi,
    F,
    M,
    Aut,
    Inn,
}

impl Construction {
    pub const ALL: [Construction; 7] = [
        Construction::Z,
        Construction::D,
        Construction::Phi,
        Construction::F,
        Construction::M,
        Construction::Aut,
        Construction::Inn,
    ];

    pub fn parse(s: &str) -> Result<Construction> {
        match s {
            "Z" => Ok(Construction::Z),
            "D" => Ok(Construction::D),
            "Phi" => Ok(Construction::Phi),
            "F" => Ok(Construction::F),
            "M" => Ok(Construction::M),
            "Aut" => Ok(Construction::Aut),
            "Inn" => Ok(Construction::Inn),
            _ => Err(GroupError::SpecParse(format!(
                "unknown construction tag '{}' (expected Z, D, Phi, F, M, Aut or Inn)",
                s
            ))),
        }
    }

    /// Subgroup-valued constructions (f(H) ≤ H), for which |f(H)| divides |H|.
    pub fn is_monotone(&self) -> bool {
        !matches!(self, Construction::Aut | Construction::Inn)
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Construction::Z => "Z",
            Construction::D => "D",
            Construction::Phi => "Phi",
            Construction::F => "F",
            Construction::M => "M",
            Construction::Aut => "Aut",
            Construction::Inn => "Inn",
        };
        f.write_str(s)
    }
}

/// Outcome of evaluating f(H): the resulting group, or an explicit cap marker
/// carrying |Aut(H)| when enumeration finished but the table did not fit.
pub enum EvalOutcome {
    Group(FiniteGroup),
    AutCapped { aut_order: Option<usize> },
}

impl EvalOutcome {
    pub fn group(self) -> Option<FiniteGroup> {
        match self {
            EvalOutcome::Group(g) => Some(g),
            EvalOutcome::AutCapped { .. } => None,
        }
    }
}

/// Single dispatch point for f, reifying subgroup results via `as_group` so
/// "G ≅ f(H)" is uniform across all tags.
pub fn eval_construction(f: Construction, h: &FiniteGroup, ctx: &Ctx) -> Result<EvalOutcome> {
    let sub = |k: Subgroup| -> Result<EvalOutcome> { Ok(EvalOutcome::Group(as_group(h, &k))) };
    match f {
        Construction::Z => sub(center(h)),
        Construction::D => sub(derived(h)),
        Construction::Phi => {
            let lat = ctx.lattice_of(h)?;
            sub(frattini(h, &lat))
        }
        Construction::F => {
            let lat = ctx.lattice_of(h)?;
            sub(fitting(h, &lat)?)
        }
        Construction::M => {
            let lat = ctx.lattice_of(h)?;
            let cd = cd_lattice(h, &lat);
            sub(chermak_delgado_subgroup(h, &lat, &cd)?)
        }
        Construction::Aut => {
            let aut = ctx.aut_of(h);
            aut_outcome(&aut, |t| t.clone())
        }
        Construction::Inn => {
            let aut = ctx.aut_of(h);
            aut_outcome(&aut, |t| {
                let inner = Subgroup::from_elems(
                    t.order(),
                    aut.inner_ids.iter().map(|&i| i as Elem).collect(),
                );
                as_group(t, &inner)
            })
        }
    }
}

fn aut_outcome(
    aut: &Arc<AutGroup>,
    f: impl FnOnce(&FiniteGroup) -> FiniteGroup,
) -> Result<EvalOutcome> {
    match &aut.table_group {
        Some(t) => Ok(EvalOutcome::Group(f(t))),
        None => Ok(EvalOutcome::AutCapped {
            aut_order: aut.aut_order(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{is_normal, join, quotient};
    use crate::iso::{find_isomorphism, fingerprint};
    use crate::lattice::all_subgroups;
    use crate::spec::GroupSpec;

    fn build(s: &str) -> FiniteGroup {
        GroupSpec::parse(s).unwrap().build(&Caps::default()).unwrap()
    }

    fn lat(g: &FiniteGroup) -> SubgroupLattice {
        all_subgroups(g, &Caps::default()).unwrap()
    }

    #[test]
    fn center_examples() {
        assert_eq!(center(&build("C4 x C5")).size(), 20);
        assert_eq!(center(&build("S3")).size(), 1);
        assert_eq!(center(&build("Q8")).size(), 2);
        assert_eq!(center(&build("Dih6")).size(), 2);
    }

    #[test]
    fn derived_examples() {
        assert_eq!(derived(&build("C8 x C9")).size(), 1);
        let s4 = build("S4");
        let d = derived(&s4);
        assert_eq!(d.size(), 12);
        assert!(find_isomorphism(&as_group(&s4, &d), &build("A4")).is_some());
        let sl = build("SL23");
        let dsl = derived(&sl);
        assert_eq!(dsl.size(), 8);
        assert!(find_isomorphism(&as_group(&sl, &dsl), &build("Q8")).is_some());
    }

    #[test]
    fn s4_commutator_closure_has_size_12() {
        let g = build("S4");
        let mut comms = Vec::new();
        for a in g.elements() {
            for b in g.elements() {
                comms.push(g.commutator(a, b));
            }
        }
        let c = closure(&g, &comms);
        assert_eq!(c.size(), 12);
    }

    #[test]
    fn frattini_examples() {
        let c8 = build("C8");
        let f = frattini(&c8, &lat(&c8));
        assert_eq!(f.size(), 4);
        assert!(find_isomorphism(&as_group(&c8, &f), &build("C4")).is_some());

        let e8 = build("E2^3");
        assert_eq!(frattini(&e8, &lat(&e8)).size(), 1);

        let s4 = build("S4");
        assert_eq!(frattini(&s4, &lat(&s4)).size(), 1);

        let t = build("C1");
        assert_eq!(frattini(&t, &lat(&t)).size(), 1);
    }

    #[test]
    fn frattini_shortcut_agrees_on_p_groups() {
        for s in ["C8", "Q8", "Dih4", "E2^3", "C4 x C2", "He3", "C9", "Dih8", "Q16"] {
            let g = build(s);
            let l = lat(&g);
            assert_eq!(
                frattini(&g, &l),
                frattini_pgroup_shortcut(&g).unwrap(),
                "Frattini routes disagree on {}",
                s
            );
        }
        assert!(frattini_pgroup_shortcut(&build("C6")).is_none());
    }

    #[test]
    fn fitting_examples() {
        let s3 = build("S3");
        assert_eq!(fitting(&s3, &lat(&s3)).unwrap().size(), 3);
        let s4 = build("S4");
        let f = fitting(&s4, &lat(&s4)).unwrap();
        assert_eq!(f.size(), 4);
        assert!(find_isomorphism(&as_group(&s4, &f), &build("E2^2")).is_some());
        // nilpotent groups are their own Fitting subgroup
        for s in ["Q8", "C12", "He3"] {
            let g = build(s);
            assert_eq!(fitting(&g, &lat(&g)).unwrap().size(), g.order());
        }
    }

    #[test]
    fn fitting_pcore_route_agrees() {
        for s in ["S3", "S4", "A4", "Dih6", "Dic3", "SL23", "Q8", "C12"] {
            let g = build(s);
            let l = lat(&g);
            assert_eq!(fitting(&g, &l).unwrap(), fitting_via_pcores(&g, &l), "{}", s);
        }
    }

    #[test]
    fn cd_lattice_of_abelian_is_whole() {
        let a = build("C6 x C2");
        let l = lat(&a);
        let cd = cd_lattice(&a, &l);
        assert_eq!(cd.max_measure, (a.order() * a.order()) as u64);
        assert_eq!(cd.member_ids.len(), 1);
        assert_eq!(l.subgroups[cd.member_ids[0]].size(), a.order());
    }

    #[test]
    fn cd_lattice_of_q8() {
        let g = build("Q8");
        let l = lat(&g);
        let cd = cd_lattice(&g, &l);
        assert_eq!(cd.max_measure, 16);
        // members: center, the three cyclics of order 4, and Q8 itself
        let mut sizes: Vec<usize> = cd.members(&l).iter().map(|s| s.size()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![2, 4, 4, 4, 8]);
        let m = chermak_delgado_subgroup(&g, &l, &cd).unwrap();
        assert_eq!(m, center(&g));
    }

    #[test]
    fn cd_lattice_of_s3() {
        // m(1)=6, m(A3)=9, m(<refl>)=4, m(S3)=6
        let g = build("S3");
        let l = lat(&g);
        let cd = cd_lattice(&g, &l);
        assert_eq!(cd.max_measure, 9);
        assert_eq!(cd.member_ids.len(), 1);
        let m = chermak_delgado_subgroup(&g, &l, &cd).unwrap();
        assert_eq!(m.size(), 3);
    }

    #[test]
    fn cd_duality_closure() {
        for s in ["Q8", "S3", "Dih4", "S4", "Dic3", "He3"] {
            let g = build(s);
            let l = lat(&g);
            let cd = cd_lattice(&g, &l);
            for k in cd.members(&l) {
                let c = centralizer(&g, k);
                let ci = l.index_of(&c).unwrap();
                assert!(cd.member_ids.contains(&ci), "CD({}) not closed under duality", s);
                assert_eq!(
                    c.size() as u64 * centralizer(&g, &c).size() as u64,
                    cd.max_measure
                );
                assert_eq!(&centralizer(&g, &c), k, "double centralizer on CD member");
            }
        }
    }

    #[test]
    fn cd_members_closed_under_meet_join_and_modular_law() {
        for s in ["Q8", "Dih4", "S4"] {
            let g = build(s);
            let l = lat(&g);
            let cd = cd_lattice(&g, &l);
            let members = cd.members(&l);
            for a in &members {
                for b in &members {
                    let meet = a.intersection(b);
                    let jn = join(&g, a, b);
                    assert!(cd.member_ids.contains(&l.index_of(&meet).unwrap()));
                    assert!(cd.member_ids.contains(&l.index_of(&jn).unwrap()));
                    // modular law: a ≤ c ⟹ a ∨ (b ∧ c) = (a ∨ b) ∧ c
                    for c in &members {
                        if a.is_subset_of(c) {
                            let lhs = join(&g, a, &b.intersection(c));
                            let rhs = join(&g, a, b).intersection(c);
                            assert_eq!(lhs, rhs, "modular law fails in CD({})", s);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn aut_of_cyclic_is_units() {
        let caps = Caps::default();
        for n in [3u32, 5, 8, 12, 15] {
            let g = build(&format!("C{}", n));
            let aut = automorphism_group(&g, &caps);
            let t = aut.table_group.as_ref().unwrap();
            let u = build(&format!("U{}", n));
            assert_eq!(t.order(), u.order());
            assert!(find_isomorphism(t, &u).is_some(), "Aut(C{}) vs U{}", n, n);
        }
    }

    #[test]
    fn aut_orders_of_small_groups() {
        let caps = Caps::default();
        assert_eq!(automorphism_group(&build("E2^2"), &caps).aut_order(), Some(6));
        assert_eq!(automorphism_group(&build("Q8"), &caps).aut_order(), Some(24));
        assert_eq!(automorphism_group(&build("C1"), &caps).aut_order(), Some(1));
        assert_eq!(automorphism_group(&build("S3"), &caps).aut_order(), Some(6));
    }

    #[test]
    fn aut_cap_reported_for_large_elementary_abelian() {
        let caps = Caps::default();
        let aut = automorphism_group(&build("E2^5"), &caps);
        assert_eq!(aut.cap, AutCap::MapCapExceeded);
        assert_eq!(aut.aut_order(), None);
    }

    #[test]
    fn inner_automorphisms_examples() {
        let caps = Caps::default();
        let abelian = build("C4 x C3");
        let aut = automorphism_group(&abelian, &caps);
        assert_eq!(inner_automorphisms(&abelian, &aut).unwrap().size(), 1);

        let q8 = build("Q8");
        let aut = automorphism_group(&q8, &caps);
        let inn = inner_automorphisms(&q8, &aut).unwrap();
        assert_eq!(inn.size(), 4);
        let t = aut.table_group.as_ref().unwrap();
        let inn_group = as_group(t, &inn);
        assert_eq!(inn_group.exponent(), 2);
        assert!(is_normal(t, &inn));

        let d6 = build("Dih3");
        let aut = automorphism_group(&d6, &caps);
        assert_eq!(inner_automorphisms(&d6, &aut).unwrap().size(), 6);
    }

    #[test]
    fn automorphisms_are_closed_and_fix_identity() {
        let caps = Caps::default();
        let g = build("Dih4");
        let aut = automorphism_group(&g, &caps);
        let index: std::collections::HashMap<&[Elem], usize> = aut
            .automorphisms
            .iter()
            .enumerate()
            .map(|(i, p)| (p.as_slice(), i))
            .collect();
        for p in &aut.automorphisms {
            assert_eq!(p[0], 0);
            for a in g.elements() {
                for b in g.elements() {
                    assert_eq!(
                        p[g.mul(a, b) as usize],
                        g.mul(p[a as usize], p[b as usize])
                    );
                }
            }
            // closed under composition with every other automorphism
            for q in &aut.automorphisms {
                assert!(index.contains_key(compose_perm(p, q).as_slice()));
            }
        }
        assert_eq!(aut.automorphisms[0], (0..g.order() as Elem).collect::<Vec<_>>());
    }

    #[test]
    fn characteristic_subgroups_are_aut_invariant() {
        let caps = Caps::default();
        for s in ["S4", "Q8", "Dih6", "Dic3", "C12"] {
            let g = build(s);
            let l = lat(&g);
            let aut = automorphism_group(&g, &caps);
            for k in [derived(&g), frattini(&g, &l), fitting(&g, &l).unwrap()] {
                assert!(is_normal(&g, &k));
                for p in &aut.automorphisms {
                    let image: Vec<Elem> = k.elems().iter().map(|&e| p[e as usize]).collect();
                    let image = Subgroup::from_elems(g.order(), image);
                    assert_eq!(image, k, "characteristic subgroup moved in {}", s);
                }
            }
        }
    }

    #[test]
    fn abelianization_is_abelian() {
        for s in ["S4", "Q8", "SL23", "Dih5", "He3", "A4"] {
            let g = build(s);
            let q = quotient(&g, &derived(&g)).unwrap();
            assert!(q.is_abelian(), "{}/D({}) not abelian", s, s);
        }
    }

    #[test]
    fn eval_construction_dispatch() {
        let ctx = Ctx::default();
        let s4 = build("S4");
        let d = eval_construction(Construction::D, &s4, &ctx)
            .unwrap()
            .group()
            .unwrap();
        assert!(find_isomorphism(&d, &build("A4")).is_some());

        let a = build("C4 x C2");
        let z = eval_construction(Construction::Z, &a, &ctx)
            .unwrap()
            .group()
            .unwrap();
        assert!(find_isomorphism(&z, &a).is_some());

        let h = build("C8 x C4");
        let phi = eval_construction(Construction::Phi, &h, &ctx)
            .unwrap()
            .group()
            .unwrap();
        assert!(find_isomorphism(&phi, &build("C4 x C2")).is_some());

        let q8 = build("Q8");
        let aut = eval_construction(Construction::Aut, &q8, &ctx)
            .unwrap()
            .group()
            .unwrap();
        assert!(find_isomorphism(&aut, &build("S4")).is_some());
        let inn = eval_construction(Construction::Inn, &q8, &ctx)
            .unwrap()
            .group()
            .unwrap();
        assert!(find_isomorphism(&inn, &build("E2^2")).is_some());
    }

    #[test]
    fn center_contained_in_fitting_and_m() {
        for s in ["S4", "Q8", "Dih4", "Dic3", "He3", "C12", "S3"] {
            let g = build(s);
            let l = lat(&g);
            let z = center(&g);
            assert!(z.is_subset_of(&fitting(&g, &l).unwrap()));
            let cd = cd_lattice(&g, &l);
            let m = chermak_delgado_subgroup(&g, &l, &cd).unwrap();
            assert!(z.is_subset_of(&m), "Z not inside M for {}", s);
            // M(H) is abelian
            assert!(as_group(&g, &m).is_abelian());
        }
    }

    #[test]
    fn aut_order_divisible_by_inn_order() {
        let caps = Caps::default();
        for s in ["Q8", "S4", "Dih5", "He3", "Dic3"] {
            let g = build(s);
            let aut = automorphism_group(&g, &caps);
            let inn = g.order() / crate::group::center(&g).size();
            assert_eq!(aut.automorphisms.len() % inn, 0, "{}", s);
            assert_eq!(aut.inner_ids.len(), inn, "{}", s);
        }
    }

    #[test]
    fn aut_of_cyclic_has_totient_order() {
        let caps = Caps::default();
        for n in [2u32, 6, 9, 10, 16, 20] {
            let g = build(&format!("C{}", n));
            let aut = automorphism_group(&g, &caps);
            let u = build(&format!("U{}", n));
            assert_eq!(aut.aut_order(), Some(u.order()));
        }
    }

    #[test]
    fn fingerprints_of_eval_results_are_stable() {
        let ctx = Ctx::default();
        let g = build("SL23");
        let a = eval_construction(Construction::D, &g, &ctx).unwrap().group().unwrap();
        let b = eval_construction(Construction::D, &g, &ctx).unwrap().group().unwrap();
        assert_eq!(fingerprint(&a), fingerprint(&b));
        assert_eq!(a.table(), b.table());
    }
}
