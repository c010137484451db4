//! Complete subgroup lattice enumeration and classification, plus the
//! series-based structure tests that only need commutator machinery.

use crate::error::{GroupError, Result};
use crate::group::{
    closure, conjugate_subgroup, join, Elem, FiniteGroup, Subgroup,
};
use crate::Caps;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// All subgroups of a group, sorted by (size, member list), with maximality,
/// normality and conjugacy-class structure.
#[derive(Debug, Clone)]
pub struct SubgroupLattice {
    pub parent_order: usize,
    pub subgroups: Vec<Subgroup>,
    pub maximal_ids: Vec<usize>,
    pub normal_ids: Vec<usize>,
    /// Orbits of the conjugation action on the subgroup list.
    pub conjugacy_classes: Vec<Vec<usize>>,
    /// Inverse of `conjugacy_classes`: class index per subgroup.
    pub class_of: Vec<usize>,
}

impl SubgroupLattice {
    pub fn whole_id(&self) -> usize {
        self.subgroups.len() - 1
    }

    pub fn index_of(&self, k: &Subgroup) -> Option<usize> {
        self.subgroups
            .binary_search_by(|s| (s.size(), s.elems()).cmp(&(k.size(), k.elems())))
            .ok()
    }

    pub fn is_normal_id(&self, id: usize) -> bool {
        self.conjugacy_classes[self.class_of[id]].len() == 1
    }

    /// One representative subgroup id per conjugacy class.
    pub fn class_representatives(&self) -> Vec<usize> {
        self.conjugacy_classes.iter().map(|c| c[0]).collect()
    }
}

/// Enumerate every subgroup: seed with all distinct cyclic subgroups, then
/// close under join-with-a-cyclic-seed until a fixed point. Every subgroup is
/// a join of cyclic subgroups, so one-seed-at-a-time joins reach all of them.
pub fn all_subgroups(g: &FiniteGroup, caps: &Caps) -> Result<SubgroupLattice> {
    let mut index: HashMap<Subgroup, usize> = HashMap::new();
    let mut list: Vec<Subgroup> = Vec::new();
    let push = |s: Subgroup, list: &mut Vec<Subgroup>, index: &mut HashMap<Subgroup, usize>| {
        if !index.contains_key(&s) {
            index.insert(s.clone(), list.len());
            list.push(s);
        }
    };
    push(Subgroup::trivial(g.order()), &mut list, &mut index);
    let mut seeds: Vec<Subgroup> = Vec::new();
    for e in g.elements() {
        let c = closure(g, &[e]);
        if !index.contains_key(&c) {
            push(c.clone(), &mut list, &mut index);
            seeds.push(c);
        }
    }
    let mut i = 0;
    while i < list.len() {
        let current = list[i].clone();
        if current.size() < g.order() {
            for c in &seeds {
                if c.is_subset_of(&current) {
                    continue;
                }
                let j = join(g, &current, c);
                if !index.contains_key(&j) {
                    if list.len() >= caps.subgroup_cap {
                        return Err(GroupError::CapExceeded(format!(
                            "subgroup count exceeds {}",
                            caps.subgroup_cap
                        )));
                    }
                    index.insert(j.clone(), list.len());
                    list.push(j);
                }
            }
        }
        i += 1;
    }
    if index.get(&Subgroup::whole(g)).is_none() {
        // only possible for the trivial group, whose whole group is the trivial subgroup
        debug_assert_eq!(g.order(), 1);
    }
    list.sort_by(|a, b| (a.size(), a.elems()).cmp(&(b.size(), b.elems())));

    let lookup: HashMap<&Subgroup, usize> =
        list.iter().enumerate().map(|(i, s)| (s, i)).collect();

    // conjugacy classes: orbits under conjugation by group generators
    let gens = g.generating_sequence();
    let m = list.len();
    let mut class_of = vec![usize::MAX; m];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for start in 0..m {
        if class_of[start] != usize::MAX {
            continue;
        }
        let cid = classes.len();
        let mut orbit = vec![start];
        class_of[start] = cid;
        let mut qi = 0;
        while qi < orbit.len() {
            let cur = orbit[qi];
            for &x in &gens {
                let conj = conjugate_subgroup(g, &list[cur], x);
                let &j = lookup
                    .get(&conj)
                    .expect("conjugate of an enumerated subgroup must be enumerated");
                if class_of[j] == usize::MAX {
                    class_of[j] = cid;
                    orbit.push(j);
                }
            }
            qi += 1;
        }
        orbit.sort_unstable();
        classes.push(orbit);
    }
    let normal_ids: Vec<usize> = (0..m)
        .filter(|&i| classes[class_of[i]].len() == 1)
        .collect();

    // maximal subgroups: proper, not strictly contained in a proper subgroup
    let mut maximal_ids = Vec::new();
    for i in 0..m {
        let s = &list[i];
        if s.size() == g.order() {
            continue;
        }
        let mut is_max = true;
        for t in list.iter().rev() {
            if t.size() <= s.size() || t.size() == g.order() {
                continue;
            }
            if t.size() % s.size() == 0 && s.is_subset_of(t) {
                is_max = false;
                break;
            }
        }
        if is_max {
            maximal_ids.push(i);
        }
    }

    Ok(SubgroupLattice {
        parent_order: g.order(),
        subgroups: list,
        maximal_ids,
        normal_ids,
        conjugacy_classes: classes,
        class_of,
    })
}

/// Maximal subgroups as a list.
pub fn maximal_subgroups<'a>(lat: &'a SubgroupLattice) -> Vec<&'a Subgroup> {
    lat.maximal_ids.iter().map(|&i| &lat.subgroups[i]).collect()
}

/// `[a, b]`-closure of a pair of subgroups: the subgroup generated by all
/// commutators with one argument in each.
pub fn commutator_subgroup(g: &FiniteGroup, a: &Subgroup, b: &Subgroup) -> Subgroup {
    let mut comms: Vec<Elem> = Vec::new();
    for &x in a.elems() {
        for &y in b.elems() {
            comms.push(g.commutator(x, y));
        }
    }
    closure(g, &comms)
}

/// Lower-central-series nilpotency test: iterate `γ ← [G, γ]` from the whole
/// group; nilpotent iff the series hits the trivial subgroup.
pub fn is_nilpotent(g: &FiniteGroup) -> bool {
    let whole = Subgroup::whole(g);
    let mut gamma = whole.clone();
    loop {
        let next = commutator_subgroup(g, &whole, &gamma);
        if next.size() == 1 {
            return true;
        }
        if next.size() == gamma.size() {
            return false;
        }
        gamma = next;
    }
}

/// Sylow p-subgroups, read off the full lattice (largest p-power order).
pub fn sylow_subgroups<'a>(
    g: &FiniteGroup,
    lat: &'a SubgroupLattice,
    p: usize,
) -> Vec<&'a Subgroup> {
    let mut pk = 1usize;
    while g.order() % (pk * p) == 0 {
        pk *= p;
    }
    lat.subgroups.iter().filter(|s| s.size() == pk).collect()
}

/// Prime divisors of n, ascending.
pub fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Serializable lattice image (also the `subgroups` JSON dump format).
#[derive(Serialize, Deserialize)]
pub struct LatticeDump {
    pub parent_order: usize,
    pub subgroups: Vec<Vec<Elem>>,
    pub maximal: Vec<usize>,
    pub normal: Vec<usize>,
    pub class_of: Vec<usize>,
}

impl From<&SubgroupLattice> for LatticeDump {
    fn from(lat: &SubgroupLattice) -> Self {
        LatticeDump {
            parent_order: lat.parent_order,
            subgroups: lat.subgroups.iter().map(|s| s.elems().to_vec()).collect(),
            maximal: lat.maximal_ids.clone(),
            normal: lat.normal_ids.clone(),
            class_of: lat.class_of.clone(),
        }
    }
}

impl LatticeDump {
    pub fn rebuild(&self, order: usize) -> Option<SubgroupLattice> {
        if self.parent_order != order {
            return None;
        }
        let subgroups: Vec<Subgroup> = self
            .subgroups
            .iter()
            .map(|e| Subgroup::from_elems(order, e.clone()))
            .collect();
        let nclasses = self.class_of.iter().max().map(|&m| m + 1).unwrap_or(0);
        let mut classes = vec![Vec::new(); nclasses];
        for (i, &c) in self.class_of.iter().enumerate() {
            classes.get_mut(c)?.push(i);
        }
        Some(SubgroupLattice {
            parent_order: order,
            subgroups,
            maximal_ids: self.maximal.clone(),
            normal_ids: self.normal.clone(),
            conjugacy_classes: classes,
            class_of: self.class_of.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::is_normal;
    use crate::spec::GroupSpec;

    fn build(s: &str) -> FiniteGroup {
        GroupSpec::parse(s).unwrap().build(&Caps::default()).unwrap()
    }

    fn lattice(g: &FiniteGroup) -> SubgroupLattice {
        all_subgroups(g, &Caps::default()).unwrap()
    }

    #[test]
    fn cyclic_prime_has_two_subgroups() {
        for p in [2u32, 3, 5, 7, 13] {
            let g = build(&format!("C{}", p));
            let lat = lattice(&g);
            assert_eq!(lat.subgroups.len(), 2);
            assert_eq!(lat.maximal_ids.len(), 1);
            assert_eq!(lat.subgroups[lat.maximal_ids[0]].size(), 1);
        }
    }

    #[test]
    fn q8_has_six_subgroups() {
        // oracle: brute-force subset check over all 2^8 subsets
        let g = build("Q8");
        let n = g.order();
        let mut count = 0;
        for mask in 0u32..(1 << n) {
            if mask & 1 == 0 {
                continue;
            }
            let elems: Vec<Elem> = (0..n as Elem).filter(|&e| mask >> e & 1 == 1).collect();
            let closed = elems.iter().all(|&a| {
                elems.iter().all(|&b| elems.contains(&g.mul(a, b)))
            });
            if closed {
                count += 1;
            }
        }
        assert_eq!(count, 6);
        let lat = lattice(&g);
        assert_eq!(lat.subgroups.len(), 6);
        let sizes: Vec<usize> = lat.subgroups.iter().map(|s| s.size()).collect();
        assert_eq!(sizes, vec![1, 2, 4, 4, 4, 8]);
        // three maximal subgroups, each of order 4
        assert_eq!(lat.maximal_ids.len(), 3);
        assert!(lat.maximal_ids.iter().all(|&i| lat.subgroups[i].size() == 4));
        // all subgroups of Q8 are normal
        assert_eq!(lat.normal_ids.len(), 6);
    }

    #[test]
    fn s4_has_thirty_subgroups_in_eleven_classes() {
        let g = build("S4");
        let lat = lattice(&g);
        assert_eq!(lat.subgroups.len(), 30);
        assert_eq!(lat.conjugacy_classes.len(), 11);
        // order-2 subgroups split into the transposition class (6) and the
        // double-transposition class (3)
        let mut order2: Vec<usize> = lat
            .conjugacy_classes
            .iter()
            .filter(|c| lat.subgroups[c[0]].size() == 2)
            .map(|c| c.len())
            .collect();
        order2.sort_unstable();
        assert_eq!(order2, vec![3, 6]);
    }

    #[test]
    fn cyclic_12_maximal_sizes() {
        let g = build("C12");
        let lat = lattice(&g);
        let mut sizes: Vec<usize> = lat
            .maximal_ids
            .iter()
            .map(|&i| lat.subgroups[i].size())
            .collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![4, 6]);
    }

    #[test]
    fn enumerated_subgroups_are_closed_and_verified() {
        let g = build("Dih6");
        let lat = lattice(&g);
        for s in &lat.subgroups {
            assert_eq!(&closure(&g, s.elems()), s);
            assert_eq!(g.order() % s.size(), 0);
        }
    }

    #[test]
    fn lattice_closed_under_meet_and_join_sampled() {
        let g = build("S4");
        let lat = lattice(&g);
        let m = lat.subgroups.len();
        for (i, j) in crate::group::sample_pairs(m, 200, 7) {
            let meet = lat.subgroups[i].intersection(&lat.subgroups[j]);
            assert!(lat.index_of(&meet).is_some(), "meet not in lattice");
            let jn = join(&g, &lat.subgroups[i], &lat.subgroups[j]);
            assert!(lat.index_of(&jn).is_some(), "join not in lattice");
        }
    }

    #[test]
    fn every_proper_subgroup_lies_in_a_maximal_one() {
        for s in ["Dih4", "C12", "A4", "Q8"] {
            let g = build(s);
            let lat = lattice(&g);
            for (i, sub) in lat.subgroups.iter().enumerate() {
                if sub.size() == g.order() {
                    continue;
                }
                let covered = lat.maximal_ids.iter().any(|&mi| {
                    i == mi || sub.is_subset_of(&lat.subgroups[mi])
                });
                assert!(covered);
            }
        }
    }

    #[test]
    fn normality_flags_match_direct_check() {
        let g = build("Dih3");
        let lat = lattice(&g);
        for (i, s) in lat.subgroups.iter().enumerate() {
            assert_eq!(lat.is_normal_id(i), is_normal(&g, s));
        }
        // reflection subgroups of Dih3 are not normal
        let refl_classes: Vec<&Vec<usize>> = lat
            .conjugacy_classes
            .iter()
            .filter(|c| lat.subgroups[c[0]].size() == 2)
            .collect();
        assert_eq!(refl_classes.len(), 1);
        assert_eq!(refl_classes[0].len(), 3);
    }

    #[test]
    fn abelian_groups_have_singleton_classes() {
        let g = build("C4 x C2");
        let lat = lattice(&g);
        assert!(lat.conjugacy_classes.iter().all(|c| c.len() == 1));
        assert_eq!(lat.normal_ids.len(), lat.subgroups.len());
    }

    #[test]
    fn nilpotency_examples() {
        assert!(is_nilpotent(&build("C12")));
        assert!(is_nilpotent(&build("Q8")));
        assert!(is_nilpotent(&build("He3")));
        assert!(!is_nilpotent(&build("S3")));
        assert!(!is_nilpotent(&build("Dih3")));
        assert!(!is_nilpotent(&build("A4")));
        assert!(!is_nilpotent(&build("SL23")));
    }

    #[test]
    fn nilpotency_agrees_with_sylow_criterion() {
        for s in [
            "C1", "C6", "Dih3", "Q8", "Dic3", "A4", "S4", "C12", "Dih6", "He3", "C4 x C2",
            "SL23", "Dih8", "C3 x C3",
        ] {
            let g = build(s);
            let lat = lattice(&g);
            let sylow_all_normal = prime_divisors(g.order()).iter().all(|&p| {
                let sy = sylow_subgroups(&g, &lat, p);
                sy.len() == 1 && is_normal(&g, sy[0])
            });
            assert_eq!(is_nilpotent(&g), sylow_all_normal, "group {}", s);
        }
    }

    #[test]
    fn trivial_group_lattice() {
        let g = build("C1");
        let lat = lattice(&g);
        assert_eq!(lat.subgroups.len(), 1);
        assert!(lat.maximal_ids.is_empty());
    }
}
