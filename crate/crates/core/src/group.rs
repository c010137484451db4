//! Concrete finite groups as dense multiplication tables, plus elementwise
//! primitives (closure, centralizer, quotient, subgroup reification).

use crate::bitset::BitSet;
use crate::error::{GroupError, Result};
use rand::{Rng, SeedableRng};
use sha2::{Digest, Sha256};

/// Element id: an index in `[0, n)`. Id 0 is always the identity.
pub type Elem = u16;

/// How associativity was checked when a table came from outside.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AssocCheck {
    /// Full cubic loop over all triples.
    Exhaustive,
    /// Randomized sampling of this many triples (orders above the exhaustive limit).
    Sampled(u64),
    /// Table produced by a constructor; associative by construction.
    ByConstruction,
}

/// A finite group of order `n` given by its full Cayley table.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    order: usize,
    /// Flat row-major table: `table[a * order + b] = a · b`.
    table: Vec<Elem>,
    inverses: Vec<Elem>,
    element_orders: Vec<u32>,
    spec: String,
}

impl FiniteGroup {
    /// Wrap a table produced by one of our constructors. The table is trusted
    /// to be associative; identity position and Latin-square structure are
    /// still verified (cheap, quadratic).
    pub fn from_table_trusted(order: usize, table: Vec<Elem>, spec: String) -> Self {
        let g = Self::assemble(order, table, spec).expect("constructor produced invalid table");
        g
    }

    /// Validate a table from outside (file ingest). Runs the full invariant
    /// suite including the associativity check, which is exhaustive up to
    /// `assoc_exhaustive_limit` and sampled above it.
    pub fn from_table_checked(
        order: usize,
        table: Vec<Elem>,
        spec: String,
        assoc_exhaustive_limit: usize,
    ) -> Result<(Self, AssocCheck)> {
        let g = Self::assemble(order, table, spec)?;
        let mode = g.check_associativity(assoc_exhaustive_limit)?;
        Ok((g, mode))
    }

    fn assemble(order: usize, table: Vec<Elem>, spec: String) -> Result<Self> {
        if order == 0 || table.len() != order * order {
            return Err(GroupError::InvalidTable(format!(
                "table size {} does not match order {}",
                table.len(),
                order
            )));
        }
        let n = order;
        for (i, &v) in table.iter().enumerate() {
            if v as usize >= n {
                return Err(GroupError::InvalidTable(format!(
                    "entry {} at position {} out of range",
                    v, i
                )));
            }
        }
        // identity at id 0
        for a in 0..n {
            if table[a * n] as usize != a || table[a] as usize != a {
                return Err(GroupError::InvalidTable(
                    "id 0 is not a two-sided identity".into(),
                ));
            }
        }
        // Latin square
        let mut seen_row = vec![false; n];
        let mut seen_col = vec![false; n];
        for a in 0..n {
            seen_row.iter_mut().for_each(|x| *x = false);
            seen_col.iter_mut().for_each(|x| *x = false);
            for b in 0..n {
                let r = table[a * n + b] as usize;
                let c = table[b * n + a] as usize;
                if seen_row[r] || seen_col[c] {
                    return Err(GroupError::InvalidTable(format!(
                        "row or column {} is not a permutation",
                        a
                    )));
                }
                seen_row[r] = true;
                seen_col[c] = true;
            }
        }
        // inverses
        let mut inverses = vec![0 as Elem; n];
        for a in 0..n {
            let mut found = false;
            for b in 0..n {
                if table[a * n + b] == 0 {
                    if table[b * n + a] != 0 {
                        return Err(GroupError::InvalidTable(format!(
                            "one-sided inverse at element {}",
                            a
                        )));
                    }
                    inverses[a] = b as Elem;
                    found = true;
                    break;
                }
            }
            if !found {
                return Err(GroupError::InvalidTable(format!("element {} has no inverse", a)));
            }
        }
        // element orders
        let mut element_orders = vec![0u32; n];
        for a in 0..n {
            let mut x = a as Elem;
            let mut k = 1u32;
            while x != 0 {
                x = table[x as usize * n + a];
                k += 1;
                if k as usize > n {
                    return Err(GroupError::InvalidTable(format!(
                        "element {} has order exceeding the group order",
                        a
                    )));
                }
            }
            if n % k as usize != 0 {
                return Err(GroupError::InvalidTable(format!(
                    "element order {} of element {} does not divide {}",
                    k, a, n
                )));
            }
            element_orders[a] = k;
        }
        Ok(FiniteGroup {
            order,
            table,
            inverses,
            element_orders,
            spec,
        })
    }

    fn check_associativity(&self, exhaustive_limit: usize) -> Result<AssocCheck> {
        let n = self.order;
        if n <= exhaustive_limit {
            for a in 0..n as Elem {
                for b in 0..n as Elem {
                    let ab = self.mul(a, b);
                    for c in 0..n as Elem {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            return Err(GroupError::InvalidTable(format!(
                                "associativity fails at ({}, {}, {})",
                                a, b, c
                            )));
                        }
                    }
                }
            }
            Ok(AssocCheck::Exhaustive)
        } else {
            let total = (n as u64).pow(3);
            let samples = total.min(1_000_000);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..samples {
                let a = rng.gen_range(0..n) as Elem;
                let b = rng.gen_range(0..n) as Elem;
                let c = rng.gen_range(0..n) as Elem;
                if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                    return Err(GroupError::InvalidTable(format!(
                        "associativity fails at ({}, {}, {})",
                        a, b, c
                    )));
                }
            }
            Ok(AssocCheck::Sampled(samples))
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverses[a as usize]
    }

    /// Multiplicative order of element `a`.
    #[inline]
    pub fn order_of(&self, a: Elem) -> u32 {
        self.element_orders[a as usize]
    }

    /// `g a g⁻¹`.
    #[inline]
    pub fn conj(&self, g: Elem, a: Elem) -> Elem {
        self.mul(self.mul(g, a), self.inv(g))
    }

    /// `[a, b] = a⁻¹ b⁻¹ a b`.
    #[inline]
    pub fn commutator(&self, a: Elem, b: Elem) -> Elem {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn spec(&self) -> &str {
        &self.spec
    }

    pub fn set_spec(&mut self, spec: String) {
        self.spec = spec;
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order;
        (0..n as Elem).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn exponent(&self) -> u32 {
        self.element_orders.iter().fold(1u32, |e, &o| lcm(e, o))
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.order as Elem).into_iter()
    }

    pub fn table(&self) -> &[Elem] {
        &self.table
    }

    /// Stable 64-bit digest of the table, used as a cache key.
    pub fn table_hash(&self) -> u64 {
        let mut h = Sha256::new();
        h.update((self.order as u64).to_le_bytes());
        for &e in &self.table {
            h.update(e.to_le_bytes());
        }
        let d = h.finalize();
        u64::from_le_bytes(d[..8].try_into().unwrap())
    }

    /// Greedy generating sequence: repeatedly append the element outside the
    /// current closure whose addition grows the closure the most (smallest id
    /// on ties). Short sequences keep isomorphism backtracking shallow.
    pub fn generating_sequence(&self) -> Vec<Elem> {
        let mut gens = Vec::new();
        let mut cl = closure(self, &[]);
        while cl.size() < self.order {
            let mut best: Option<(usize, Elem, Subgroup)> = None;
            for x in 0..self.order as Elem {
                if cl.contains(x) {
                    continue;
                }
                gens.push(x);
                let grown = closure(self, &gens);
                gens.pop();
                if grown.size() == self.order {
                    best = Some((grown.size(), x, grown));
                    break; // can't do better, and smallest id wins ties
                }
                if best.as_ref().is_none_or(|(s, _, _)| grown.size() > *s) {
                    best = Some((grown.size(), x, grown));
                }
            }
            let (_, x, grown) = best.expect("closure smaller than group but no element outside");
            gens.push(x);
            cl = grown;
        }
        gens
    }
}

fn lcm(a: u32, b: u32) -> u32 {
    a / gcd(a, b) * b
}

pub(crate) fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A subset of a parent group's ids, closed under the parent multiplication.
/// Operations that need the parent take it as an explicit argument.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subgroup {
    members: BitSet,
    elems: Vec<Elem>,
}

impl Subgroup {
    pub(crate) fn from_members(members: BitSet) -> Self {
        let elems = members.iter().map(|i| i as Elem).collect();
        Subgroup { members, elems }
    }

    pub fn from_elems(parent_order: usize, mut elems: Vec<Elem>) -> Self {
        elems.sort_unstable();
        elems.dedup();
        let mut members = BitSet::new(parent_order);
        for &e in &elems {
            members.insert(e as usize);
        }
        Subgroup { members, elems }
    }

    pub fn whole(parent: &FiniteGroup) -> Self {
        Self::from_elems(parent.order(), parent.elements().collect())
    }

    pub fn trivial(parent_order: usize) -> Self {
        Self::from_elems(parent_order, vec![0])
    }

    pub fn size(&self) -> usize {
        self.elems.len()
    }

    pub fn contains(&self, e: Elem) -> bool {
        self.members.contains(e as usize)
    }

    pub fn elems(&self) -> &[Elem] {
        &self.elems
    }

    pub fn members(&self) -> &BitSet {
        &self.members
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.members.is_subset_of(&other.members)
    }

    /// Set intersection. The intersection of two subgroups is a subgroup.
    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        let mut m = self.members.clone();
        m.intersect_with(&other.members);
        Subgroup::from_members(m)
    }
}

/// Smallest subgroup of `parent` containing `seed`, by worklist product
/// saturation. The identity is always included.
pub fn closure(parent: &FiniteGroup, seed: &[Elem]) -> Subgroup {
    let n = parent.order();
    let mut members = BitSet::new(n);
    let mut elems: Vec<Elem> = Vec::with_capacity(seed.len() + 1);
    members.insert(0);
    elems.push(0);
    for &s in seed {
        if !members.contains(s as usize) {
            members.insert(s as usize);
            elems.push(s);
        }
    }
    let mut i = 0;
    while i < elems.len() {
        let a = elems[i];
        for j in 0..=i {
            let b = elems[j];
            for p in [parent.mul(a, b), parent.mul(b, a)] {
                if !members.contains(p as usize) {
                    members.insert(p as usize);
                    elems.push(p);
                }
            }
        }
        i += 1;
    }
    elems.sort_unstable();
    Subgroup { members, elems }
}

/// Join of a subgroup with extra elements, reusing the closure worklist.
pub fn join(parent: &FiniteGroup, a: &Subgroup, b: &Subgroup) -> Subgroup {
    if b.is_subset_of(a) {
        return a.clone();
    }
    if a.is_subset_of(b) {
        return b.clone();
    }
    let mut seed: Vec<Elem> = a.elems().to_vec();
    seed.extend_from_slice(b.elems());
    closure(parent, &seed)
}

/// `{x : xk = kx for all k in K}`.
pub fn centralizer(parent: &FiniteGroup, k: &Subgroup) -> Subgroup {
    let elems: Vec<Elem> = parent
        .elements()
        .filter(|&x| k.elems().iter().all(|&y| parent.mul(x, y) == parent.mul(y, x)))
        .collect();
    Subgroup::from_elems(parent.order(), elems)
}

/// The center `Z(G)`, i.e. the centralizer of the whole group.
pub fn center(parent: &FiniteGroup) -> Subgroup {
    centralizer(parent, &Subgroup::whole(parent))
}

/// True iff `gKg⁻¹ = K` for all `g`.
pub fn is_normal(parent: &FiniteGroup, k: &Subgroup) -> bool {
    parent
        .elements()
        .all(|g| k.elems().iter().all(|&x| k.contains(parent.conj(g, x))))
}

/// Image of `k` under conjugation by `g`.
pub fn conjugate_subgroup(parent: &FiniteGroup, k: &Subgroup, g: Elem) -> Subgroup {
    let elems: Vec<Elem> = k.elems().iter().map(|&x| parent.conj(g, x)).collect();
    Subgroup::from_elems(parent.order(), elems)
}

/// Quotient group on coset blocks; the coset of the identity gets id 0 and
/// each block is represented by its minimal element id.
pub fn quotient(parent: &FiniteGroup, nrm: &Subgroup) -> Result<FiniteGroup> {
    if !is_normal(parent, nrm) {
        return Err(GroupError::NotNormal);
    }
    let n = parent.order();
    // coset_min[x] = minimal element of xN
    let mut coset_min = vec![Elem::MAX; n];
    for x in parent.elements() {
        let mut m = Elem::MAX;
        for &k in nrm.elems() {
            m = m.min(parent.mul(x, k));
        }
        coset_min[x as usize] = m;
    }
    let mut reps: Vec<Elem> = coset_min.clone();
    reps.sort_unstable();
    reps.dedup();
    let mut index_of = vec![Elem::MAX; n];
    for (i, &r) in reps.iter().enumerate() {
        index_of[r as usize] = i as Elem;
    }
    let q = reps.len();
    let mut table = vec![0 as Elem; q * q];
    for (i, &a) in reps.iter().enumerate() {
        for (j, &b) in reps.iter().enumerate() {
            table[i * q + j] = index_of[coset_min[parent.mul(a, b) as usize] as usize];
        }
    }
    Ok(FiniteGroup::from_table_trusted(
        q,
        table,
        format!("({})/N{}", parent.spec(), nrm.size()),
    ))
}

/// Reify a subgroup as a standalone group: its elements renumbered in
/// ascending id order, which keeps the identity at 0.
pub fn as_group(parent: &FiniteGroup, k: &Subgroup) -> FiniteGroup {
    let elems = k.elems();
    let m = elems.len();
    let mut index_of = vec![Elem::MAX; parent.order()];
    for (i, &e) in elems.iter().enumerate() {
        index_of[e as usize] = i as Elem;
    }
    let mut table = vec![0 as Elem; m * m];
    for i in 0..m {
        for j in 0..m {
            table[i * m + j] = index_of[parent.mul(elems[i], elems[j]) as usize];
        }
    }
    FiniteGroup::from_table_trusted(m, table, format!("sub{}({})", m, parent.spec()))
}

/// Random (but seeded) sampling helper used by validation passes.
pub fn sample_pairs(n: usize, count: usize, seed: u64) -> Vec<(usize, usize)> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
        .collect()
}
