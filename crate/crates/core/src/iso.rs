//! Isomorphism testing by backtracking over generator images, cheap invariant
//! fingerprints for pruning, and homomorphism enumeration into automorphism
//! groups (used to enumerate semidirect-product actions).

use crate::constructions::derived;
use crate::error::{GroupError, Result};
use crate::group::{Elem, FiniteGroup};
use crate::Caps;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

const UNDEF: Elem = Elem::MAX;

/// Cheap isomorphism-invariant vector; equality is necessary (never
/// sufficient) for isomorphism. Deliberately excludes anything that needs the
/// subgroup lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fingerprint {
    pub order: usize,
    pub abelian: bool,
    pub exponent: u32,
    /// Sorted (element order, count) pairs; counts sum to `order`.
    pub element_order_histogram: Vec<(u32, u32)>,
    pub center_order: usize,
    pub derived_order: usize,
    pub conjugacy_class_count: usize,
    /// Sorted (element order, class size, count) triples over conjugacy classes.
    pub class_profile: Vec<(u32, u32, u32)>,
}

pub fn fingerprint(g: &FiniteGroup) -> Fingerprint {
    let mut hist: HashMap<u32, u32> = HashMap::new();
    for e in g.elements() {
        *hist.entry(g.order_of(e)).or_insert(0) += 1;
    }
    let mut histogram: Vec<(u32, u32)> = hist.into_iter().collect();
    histogram.sort_unstable();
    // element conjugacy classes
    let n = g.order();
    let mut seen = vec![false; n];
    let mut classes = 0usize;
    let mut profile: HashMap<(u32, u32), u32> = HashMap::new();
    for a in g.elements() {
        if seen[a as usize] {
            continue;
        }
        classes += 1;
        let mut size = 0u32;
        for x in g.elements() {
            let c = g.conj(x, a) as usize;
            if !seen[c] {
                seen[c] = true;
                size += 1;
            }
        }
        *profile.entry((g.order_of(a), size)).or_insert(0) += 1;
    }
    let mut class_profile: Vec<(u32, u32, u32)> =
        profile.into_iter().map(|((o, s), c)| (o, s, c)).collect();
    class_profile.sort_unstable();
    Fingerprint {
        order: n,
        abelian: g.is_abelian(),
        exponent: g.exponent(),
        element_order_histogram: histogram,
        center_order: crate::group::center(g).size(),
        derived_order: derived(g).size(),
        conjugacy_class_count: classes,
        class_profile,
    }
}

/// An explicit isomorphism between two concrete groups.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Isomorphism {
    /// `map[a]` is the image in the target of source element `a`.
    pub map: Vec<Elem>,
}

impl Isomorphism {
    /// Post-hoc verification of the homomorphism property and bijectivity.
    pub fn verify(&self, a: &FiniteGroup, b: &FiniteGroup) -> bool {
        if a.order() != b.order() || self.map.len() != a.order() || self.map[0] != 0 {
            return false;
        }
        let mut seen = vec![false; b.order()];
        for &v in &self.map {
            if (v as usize) >= b.order() || seen[v as usize] {
                return false;
            }
            seen[v as usize] = true;
        }
        a.elements().all(|x| {
            a.elements().all(|y| {
                self.map[a.mul(x, y) as usize] == b.mul(self.map[x as usize], self.map[y as usize])
            })
        })
    }
}

/// Partial injective map state for the backtracking search.
#[derive(Clone)]
struct State {
    map: Vec<Elem>,
    pre: Vec<Elem>,
    known: Vec<Elem>,
}

impl State {
    fn seeded(a_order: usize, b_order: usize) -> State {
        let mut st = State {
            map: vec![UNDEF; a_order],
            pre: vec![UNDEF; b_order],
            known: Vec::with_capacity(a_order),
        };
        st.map[0] = 0;
        st.pre[0] = 0;
        st.known.push(0);
        st
    }
}

/// Extend the partial map with `s ↦ t` and saturate under products. Every
/// newly forced pair must match element orders and respect injectivity.
fn assign(a: &FiniteGroup, b: &FiniteGroup, st: &mut State, s: Elem, t: Elem) -> bool {
    let mut queue = vec![(s, t)];
    while let Some((s, t)) = queue.pop() {
        let cur = st.map[s as usize];
        if cur != UNDEF {
            if cur == t {
                continue;
            }
            return false;
        }
        if a.order_of(s) != b.order_of(t) || st.pre[t as usize] != UNDEF {
            return false;
        }
        st.map[s as usize] = t;
        st.pre[t as usize] = s;
        st.known.push(s);
        for i in 0..st.known.len() {
            let u = st.known[i];
            let fu = st.map[u as usize];
            queue.push((a.mul(s, u), b.mul(t, fu)));
            queue.push((a.mul(u, s), b.mul(fu, t)));
        }
    }
    true
}

/// Per-element conjugation invariant tuple: (element order, conjugacy class
/// size, centralizer order, number of square roots, class size of the square,
/// number of commuting involutions). Any isomorphism must map an element onto
/// one with the same tuple, which prunes the image candidates far harder than
/// element order alone, especially in 2-groups.
type ElemInvariant = (u32, u32, u32, u32, u32, u32);

fn element_invariants(g: &FiniteGroup) -> Vec<ElemInvariant> {
    let n = g.order();
    let mut sqrts = vec![0u32; n];
    for y in g.elements() {
        sqrts[g.mul(y, y) as usize] += 1;
    }
    let mut class_size = vec![0u32; n];
    let mut seen = vec![false; n];
    for a in g.elements() {
        if seen[a as usize] {
            continue;
        }
        let mut class = Vec::new();
        for x in g.elements() {
            let c = g.conj(x, a);
            if !seen[c as usize] {
                seen[c as usize] = true;
                class.push(c);
            }
        }
        for &c in &class {
            class_size[c as usize] = class.len() as u32;
        }
    }
    let involutions: Vec<Elem> = g.elements().filter(|&x| g.order_of(x) == 2).collect();
    g.elements()
        .map(|a| {
            let cent = g.elements().filter(|&x| g.mul(x, a) == g.mul(a, x)).count() as u32;
            let comm_inv = involutions
                .iter()
                .filter(|&&x| g.mul(x, a) == g.mul(a, x))
                .count() as u32;
            (
                g.order_of(a),
                class_size[a as usize],
                cent,
                sqrts[a as usize],
                class_size[g.mul(a, a) as usize],
                comm_inv,
            )
        })
        .collect()
}

/// Core search: enumerate isomorphisms `a → b` in deterministic order
/// (candidate images ascending). Stops after `limit` hits; returns whether the
/// search ran to exhaustion.
fn search_isomorphisms(
    a: &FiniteGroup,
    b: &FiniteGroup,
    gens: &[Elem],
    inv_a: &[ElemInvariant],
    inv_b: &[ElemInvariant],
    limit: usize,
    out: &mut Vec<Vec<Elem>>,
) -> bool {
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        a: &FiniteGroup,
        b: &FiniteGroup,
        gens: &[Elem],
        inv_a: &[ElemInvariant],
        inv_b: &[ElemInvariant],
        level: usize,
        st: &State,
        limit: usize,
        out: &mut Vec<Vec<Elem>>,
    ) -> bool {
        if out.len() >= limit {
            return false;
        }
        if level == gens.len() {
            debug_assert_eq!(st.known.len(), a.order());
            out.push(st.map.clone());
            return out.len() < limit;
        }
        let g = gens[level];
        let want = inv_a[g as usize];
        for t in b.elements() {
            if inv_b[t as usize] != want || st.pre[t as usize] != UNDEF {
                continue;
            }
            let mut next = st.clone();
            if assign(a, b, &mut next, g, t) {
                if !recurse(a, b, gens, inv_a, inv_b, level + 1, &next, limit, out) {
                    return false;
                }
            }
        }
        true
    }
    let st = State::seeded(a.order(), b.order());
    recurse(a, b, gens, inv_a, inv_b, 0, &st, limit, out)
}

/// Find one isomorphism, or `None` after exhaustion. Fingerprints gate the
/// search; the returned map is re-verified.
pub fn find_isomorphism(a: &FiniteGroup, b: &FiniteGroup) -> Option<Isomorphism> {
    if a.order() != b.order() {
        return None;
    }
    if fingerprint(a) != fingerprint(b) {
        return None;
    }
    let inv_a = element_invariants(a);
    let inv_b = element_invariants(b);
    // cheap non-isomorphism gate: the invariant multisets must agree
    let mut ma = inv_a.clone();
    let mut mb = inv_b.clone();
    ma.sort_unstable();
    mb.sort_unstable();
    if ma != mb {
        return None;
    }
    let gens = a.generating_sequence();
    let mut out = Vec::new();
    search_isomorphisms(a, b, &gens, &inv_a, &inv_b, 1, &mut out);
    let iso = Isomorphism { map: out.pop()? };
    debug_assert!(iso.verify(a, b));
    Some(iso)
}

/// Enumerate all automorphisms of `g` (isomorphisms `g → g`), up to the map
/// cap. The preflight estimate is the product of order-matching candidate
/// counts over the generating sequence.
pub(crate) fn enumerate_automorphisms(
    g: &FiniteGroup,
    caps: &Caps,
) -> (Vec<Vec<Elem>>, bool /* complete */) {
    let gens = g.generating_sequence();
    let mut estimate = 1u128;
    for &gen in &gens {
        let want = g.order_of(gen);
        let c = g.elements().filter(|&x| g.order_of(x) == want).count();
        estimate = estimate.saturating_mul(c as u128);
        if estimate > caps.aut_map_cap as u128 {
            return (Vec::new(), false);
        }
    }
    let inv = element_invariants(g);
    let mut out = Vec::new();
    let complete = search_isomorphisms(g, g, &gens, &inv, &inv, caps.aut_map_cap + 1, &mut out);
    if !complete || out.len() > caps.aut_map_cap {
        return (Vec::new(), false);
    }
    out.sort_unstable();
    (out, true)
}

/// Partition concrete groups into isomorphism classes. Returns
/// `(representative index, member indices)` pairs; the representative is the
/// first member in input order.
pub fn iso_class_representatives(groups: &[FiniteGroup]) -> Vec<(usize, Vec<usize>)> {
    let mut classes: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut by_fp: HashMap<Fingerprint, Vec<usize>> = HashMap::new();
    for (i, g) in groups.iter().enumerate() {
        let fp = fingerprint(g);
        let bucket = by_fp.entry(fp).or_default();
        let mut found = None;
        for &class_idx in bucket.iter() {
            let rep = classes[class_idx].0;
            if find_isomorphism(&groups[rep], g).is_some() {
                found = Some(class_idx);
                break;
            }
        }
        match found {
            Some(ci) => classes[ci].1.push(i),
            None => {
                bucket.push(classes.len());
                classes.push((i, vec![i]));
            }
        }
    }
    classes
}

// --- homomorphism enumeration into a permutation list ---

/// A list of automorphism permutations treated as a group by composition,
/// with index lookup and element orders.
pub struct PermGroup {
    pub perms: Vec<Vec<Elem>>,
    index: HashMap<Vec<Elem>, usize>,
    pub orders: Vec<u32>,
    pub gens: Vec<usize>,
}

impl PermGroup {
    pub fn new(perms: Vec<Vec<Elem>>) -> PermGroup {
        let index: HashMap<Vec<Elem>, usize> =
            perms.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let deg = perms.first().map(|p| p.len()).unwrap_or(0);
        let identity: Vec<Elem> = (0..deg as Elem).collect();
        let id_idx = index[&identity];
        debug_assert_eq!(id_idx, 0, "permutation list must be sorted with identity first");
        let mut orders = vec![0u32; perms.len()];
        for (i, p) in perms.iter().enumerate() {
            let mut cur = p.clone();
            let mut k = 1u32;
            while cur != identity {
                cur = compose_perm(p, &cur);
                k += 1;
            }
            orders[i] = k;
        }
        // greedy generating set
        let mut gens: Vec<usize> = Vec::new();
        let mut reached = vec![false; perms.len()];
        reached[0] = true;
        let mut reached_count = 1usize;
        for cand in 1..perms.len() {
            if reached[cand] {
                continue;
            }
            gens.push(cand);
            // close under products with the new generator set
            let mut frontier: Vec<usize> = (0..perms.len()).filter(|&i| reached[i]).collect();
            while let Some(x) = frontier.pop() {
                for &gi in &gens {
                    let y = index[&compose_perm(&perms[gi], &perms[x])];
                    if !reached[y] {
                        reached[y] = true;
                        reached_count += 1;
                        frontier.push(y);
                    }
                    let z = index[&compose_perm(&perms[x], &perms[gi])];
                    if !reached[z] {
                        reached[z] = true;
                        reached_count += 1;
                        frontier.push(z);
                    }
                }
            }
            if reached_count == perms.len() {
                break;
            }
        }
        PermGroup {
            perms,
            index,
            orders,
            gens,
        }
    }

    pub fn len(&self) -> usize {
        self.perms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perms.is_empty()
    }

    pub fn compose(&self, i: usize, j: usize) -> usize {
        self.index[&compose_perm(&self.perms[i], &self.perms[j])]
    }

    pub fn inverse(&self, i: usize) -> usize {
        let p = &self.perms[i];
        let mut inv = vec![0 as Elem; p.len()];
        for (x, &y) in p.iter().enumerate() {
            inv[y as usize] = x as Elem;
        }
        self.index[&inv]
    }

    /// Minimal index per conjugacy class, ascending.
    pub fn conjugacy_class_minima(&self) -> Vec<usize> {
        let m = self.len();
        let mut class_min = vec![usize::MAX; m];
        let mut minima = Vec::new();
        let mut visited = vec![false; m];
        for start in 0..m {
            if visited[start] {
                continue;
            }
            let mut orbit = vec![start];
            visited[start] = true;
            let mut qi = 0;
            let mut mn = start;
            while qi < orbit.len() {
                let x = orbit[qi];
                for &gi in &self.gens {
                    let gx = self.compose(gi, x);
                    let y = self.compose(gx, self.inverse(gi));
                    if !visited[y] {
                        visited[y] = true;
                        mn = mn.min(y);
                        orbit.push(y);
                    }
                }
                qi += 1;
            }
            for &x in &orbit {
                class_min[x] = mn;
            }
            minima.push(mn);
        }
        minima.sort_unstable();
        minima
    }
}

pub fn compose_perm(a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    // (a ∘ b)(x) = a(b(x))
    b.iter().map(|&x| a[x as usize]).collect()
}

/// Result of enumerating the homomorphisms `K → Aut(N)`, each given as a full
/// action table (one permutation of N per element of K).
pub struct ActionEnum {
    pub actions: Vec<Vec<Vec<Elem>>>,
    pub capped: bool,
}

/// Enumerate homomorphisms from `k` into the permutation group `auts`
/// (deterministic order). The image of the first generator only ranges over
/// conjugacy-class minima: conjugating an action by a fixed automorphism gives
/// an isomorphic semidirect product, so this prunes duplicates without losing
/// isomorphism classes.
pub fn enumerate_actions_into(
    k: &FiniteGroup,
    auts: &PermGroup,
    budget: usize,
) -> ActionEnum {
    let gens = k.generating_sequence();
    let mut homs: Vec<Vec<u32>> = Vec::new(); // k element -> aut index
    let mut capped = false;

    // partial map saturation without injectivity
    fn assign_hom(
        k: &FiniteGroup,
        auts: &PermGroup,
        map: &mut Vec<u32>,
        known: &mut Vec<Elem>,
        s: Elem,
        t: u32,
    ) -> bool {
        let mut queue = vec![(s, t)];
        while let Some((s, t)) = queue.pop() {
            let cur = map[s as usize];
            if cur != u32::MAX {
                if cur == t {
                    continue;
                }
                return false;
            }
            map[s as usize] = t;
            known.push(s);
            for i in 0..known.len() {
                let u = known[i];
                let fu = map[u as usize];
                queue.push((k.mul(s, u), auts.compose(t as usize, fu as usize) as u32));
                queue.push((k.mul(u, s), auts.compose(fu as usize, t as usize) as u32));
            }
        }
        true
    }

    struct Rec<'a> {
        k: &'a FiniteGroup,
        auts: &'a PermGroup,
        gens: &'a [Elem],
        budget: usize,
        homs: Vec<Vec<u32>>,
        capped: bool,
        class_minima: Vec<usize>,
    }

    impl Rec<'_> {
        fn go(&mut self, level: usize, map: &Vec<u32>, known: &Vec<Elem>) {
            if self.capped {
                return;
            }
            if level == self.gens.len() {
                if self.homs.len() >= self.budget {
                    self.capped = true;
                    return;
                }
                self.homs.push(map.clone());
                return;
            }
            let g = self.gens[level];
            let want = self.k.order_of(g);
            let candidates: Vec<usize> = if level == 0 {
                self.class_minima
                    .iter()
                    .copied()
                    .filter(|&i| want % self.auts.orders[i] == 0)
                    .collect()
            } else {
                (0..self.auts.len())
                    .filter(|&i| want % self.auts.orders[i] == 0)
                    .collect()
            };
            for t in candidates {
                let mut m2 = map.clone();
                let mut k2 = known.clone();
                if assign_hom(self.k, self.auts, &mut m2, &mut k2, g, t as u32) {
                    self.go(level + 1, &m2, &k2);
                }
            }
        }
    }

    let mut map = vec![u32::MAX; k.order()];
    let mut known = Vec::new();
    map[0] = 0;
    known.push(0);
    if gens.is_empty() {
        homs.push(map);
    } else {
        let mut rec = Rec {
            k,
            auts,
            gens: &gens,
            budget,
            homs: Vec::new(),
            capped: false,
            class_minima: auts.conjugacy_class_minima(),
        };
        rec.go(0, &map, &known);
        homs = rec.homs;
        capped = rec.capped;
    }

    let actions = homs
        .into_iter()
        .map(|m| {
            m.into_iter()
                .map(|ai| auts.perms[ai as usize].clone())
                .collect()
        })
        .collect();
    ActionEnum { actions, capped }
}

/// The i-th action in the deterministic enumeration of homomorphisms from `k`
/// into `Aut(n)`; this is the meaning of the `sd#<i>(N, K)` spec form.
pub fn nth_action(
    n: &FiniteGroup,
    k: &FiniteGroup,
    i: usize,
    caps: &Caps,
) -> Result<Vec<Vec<Elem>>> {
    let (perms, complete) = enumerate_automorphisms(n, caps);
    if !complete {
        return Err(GroupError::CapExceeded(format!(
            "Aut({}) enumeration exceeded the map cap",
            n.spec()
        )));
    }
    let pg = PermGroup::new(perms);
    let en = enumerate_actions_into(k, &pg, caps.action_budget);
    en.actions.into_iter().nth(i).ok_or_else(|| {
        GroupError::SpecParse(format!(
            "sd#{}: only {} actions exist for this (N, K) pair",
            i,
            if en.capped { "a capped number of" } else { "fewer" }
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::GroupSpec;

    fn build(s: &str) -> FiniteGroup {
        GroupSpec::parse(s).unwrap().build(&Caps::default()).unwrap()
    }

    #[test]
    fn fingerprint_distinguishes_order_4_groups() {
        let c4 = fingerprint(&build("C4"));
        let k4 = fingerprint(&build("E2^2"));
        assert_ne!(c4, k4);
        assert_eq!(c4.element_order_histogram, vec![(1, 1), (2, 1), (4, 2)]);
        assert_eq!(k4.element_order_histogram, vec![(1, 1), (2, 3)]);
    }

    #[test]
    fn fingerprint_distinguishes_q8_from_dih4() {
        let q8 = fingerprint(&build("Q8"));
        let d8 = fingerprint(&build("Dih4"));
        assert_ne!(q8.element_order_histogram, d8.element_order_histogram);
        // Q8 has one involution, Dih4 has five
        assert!(q8.element_order_histogram.contains(&(2, 1)));
        assert!(d8.element_order_histogram.contains(&(2, 5)));
    }

    #[test]
    fn fingerprint_invariant_on_isomorphic_builds() {
        assert_eq!(fingerprint(&build("Q8")), fingerprint(&build("Dic2")));
        assert_eq!(fingerprint(&build("C8 x C3")), fingerprint(&build("C24")));
    }

    #[test]
    fn identity_isomorphism_on_cyclic_6() {
        let a = build("C6");
        let iso = find_isomorphism(&a, &a).unwrap();
        assert!(iso.verify(&a, &a));
    }

    #[test]
    fn units_8_is_klein_four() {
        let u = build("U8");
        let k4 = build("E2^2");
        let iso = find_isomorphism(&u, &k4).unwrap();
        assert!(iso.verify(&u, &k4));
    }

    #[test]
    fn c4_not_isomorphic_to_klein_four() {
        assert!(find_isomorphism(&build("C4"), &build("E2^2")).is_none());
    }

    #[test]
    fn symmetry_of_find_isomorphism() {
        let pairs = [
            ("S3", "Dih3"),
            ("Dih4", "Q8"),
            ("C6", "C3 x C2"),
            ("A4", "Dih6"),
            ("Dic3", "C12"),
        ];
        for (x, y) in pairs {
            let (a, b) = (build(x), build(y));
            assert_eq!(
                find_isomorphism(&a, &b).is_some(),
                find_isomorphism(&b, &a).is_some(),
                "symmetry failed for ({}, {})",
                x,
                y
            );
        }
    }

    #[test]
    fn iso_classes_of_list() {
        let groups = vec![build("C4"), build("E2^2"), build("C4"), build("U5")];
        let classes = iso_class_representatives(&groups);
        assert_eq!(classes.len(), 2);
        assert_eq!(classes[0], (0, vec![0, 2, 3]));
        assert_eq!(classes[1], (1, vec![1]));
    }

    #[test]
    fn action_enumeration_c2_on_c3_gives_dihedral() {
        let caps = Caps::default();
        let n = build("C3");
        let k = build("C2");
        let (perms, complete) = enumerate_automorphisms(&n, &caps);
        assert!(complete);
        assert_eq!(perms.len(), 2);
        let pg = PermGroup::new(perms);
        let en = enumerate_actions_into(&k, &pg, caps.action_budget);
        assert!(!en.capped);
        assert_eq!(en.actions.len(), 2); // trivial and inversion
        let d = crate::spec::semidirect_product(&n, &k, &en.actions[1], &caps).unwrap();
        assert!(find_isomorphism(&d, &build("Dih3")).is_some());
    }

    #[test]
    fn sl23_arises_as_q8_semidirect_c3() {
        let caps = Caps::default();
        let n = build("Q8");
        let k = build("C3");
        let (perms, complete) = enumerate_automorphisms(&n, &caps);
        assert!(complete);
        assert_eq!(perms.len(), 24); // Aut(Q8) ≅ S4
        let pg = PermGroup::new(perms);
        let en = enumerate_actions_into(&k, &pg, caps.action_budget);
        let hit = en.actions.iter().any(|action| {
            crate::spec::semidirect_product(&n, &k, action, &caps)
                .ok()
                .map(|g| {
                    derived(&g).size() == 8
                        && find_isomorphism(&g, &build("SL23")).is_some()
                })
                .unwrap_or(false)
        });
        assert!(hit);
    }
}
