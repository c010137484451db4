//! The candidate catalog: per order, every group reachable by the constructor
//! algebra, deduplicated up to isomorphism, with a per-order completeness
//! certificate. Orders 1..15 are verified against the known classification
//! counts; everything above is flagged constructible-only.

use crate::error::{GroupError, Result};
use crate::group::FiniteGroup;
use crate::iso::{
    enumerate_actions_into, enumerate_automorphisms, find_isomorphism, fingerprint, Fingerprint,
    PermGroup,
};
use crate::spec::{ActionSource, GroupSpec};
use crate::Caps;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::path::Path;
use std::sync::Arc;
use std::sync::Mutex;

/// Known number of isomorphism classes per order 1..=15.
pub const CLASS_COUNTS_UP_TO_15: [usize; 15] = [1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5, 1, 2, 1];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Completeness {
    /// Verified to contain every isomorphism class of this order.
    Complete,
    /// Only what the constructor algebra reaches (possibly with caps hit).
    ConstructibleOnly,
}

/// Which constructor families the catalog builder uses. All on by default.
#[derive(Clone, Debug)]
pub struct FamilyToggles {
    pub cyclic: bool,
    pub abelian: bool,
    pub units: bool,
    pub dihedral: bool,
    pub dicyclic: bool,
    pub symmetric: bool,
    pub alternating: bool,
    pub heisenberg: bool,
    pub sl23: bool,
    pub wreath: bool,
    pub products: bool,
    pub semidirect: bool,
}

impl Default for FamilyToggles {
    fn default() -> Self {
        FamilyToggles {
            cyclic: true,
            abelian: true,
            units: true,
            dihedral: true,
            dicyclic: true,
            symmetric: true,
            alternating: true,
            heisenberg: true,
            sl23: true,
            wreath: true,
            products: true,
            semidirect: true,
        }
    }
}

#[derive(Debug)]
pub struct CatalogEntry {
    pub spec: GroupSpec,
    pub group: FiniteGroup,
    pub fingerprint: Fingerprint,
}

#[derive(Debug)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
    pub max_order: usize,
    /// completeness[o - 1] is the certificate for order o.
    pub completeness: Vec<Completeness>,
    /// Human-readable notes about caps hit during the build.
    pub notes: Vec<String>,
}

impl Catalog {
    pub fn entries_of_order(&self, order: usize) -> impl Iterator<Item = &CatalogEntry> {
        self.entries.iter().filter(move |e| e.group.order() == order)
    }

    pub fn is_complete_at(&self, order: usize) -> bool {
        order >= 1
            && order <= self.max_order
            && self.completeness[order - 1] == Completeness::Complete
    }

    /// View of the catalog restricted to orders ≤ `max_order`.
    pub fn slice(&self, max_order: usize) -> Catalog {
        let max_order = max_order.min(self.max_order);
        Catalog {
            entries: self
                .entries
                .iter()
                .filter(|e| e.group.order() <= max_order)
                .map(|e| CatalogEntry {
                    spec: e.spec.clone(),
                    group: e.group.clone(),
                    fingerprint: e.fingerprint.clone(),
                })
                .collect(),
            max_order,
            completeness: self.completeness[..max_order].to_vec(),
            notes: self.notes.clone(),
        }
    }
}

/// Euler totients for 1..=limit by sieve.
fn totient_sieve(limit: usize) -> Vec<usize> {
    let mut phi: Vec<usize> = (0..=limit).collect();
    for p in 2..=limit {
        if phi[p] == p {
            let mut k = p;
            while k <= limit {
                phi[k] -= phi[k] / p;
                k += p;
            }
        }
    }
    phi
}

fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn rec(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        let mut part = max.min(n);
        while part >= 1 {
            cur.push(part);
            rec(n - part, part, cur, out);
            cur.pop();
            part -= 1;
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

fn factorize(mut n: usize) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Abelian groups of order n as lists of cyclic prime-power factors,
/// descending; the all-single-part type (the cyclic group) is skipped.
fn abelian_types(n: usize) -> Vec<Vec<u64>> {
    let facs = factorize(n);
    let per_prime: Vec<Vec<Vec<u32>>> = facs.iter().map(|&(_, e)| partitions(e)).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; facs.len()];
    loop {
        let mut factors: Vec<u64> = Vec::new();
        for (i, &(p, _)) in facs.iter().enumerate() {
            for &part in &per_prime[i][idx[i]] {
                factors.push((p as u64).pow(part));
            }
        }
        factors.sort_unstable_by(|a, b| b.cmp(a));
        if factors.len() > facs.len() {
            out.push(factors);
        }
        // odometer
        let mut i = 0;
        loop {
            if i == facs.len() {
                return out;
            }
            idx[i] += 1;
            if idx[i] < per_prime[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

fn product_spec(factors: &[u64]) -> GroupSpec {
    let mut it = factors.iter();
    let first = GroupSpec::Cyclic(*it.next().expect("nonempty factor list") as u32);
    it.fold(first, |acc, &f| {
        GroupSpec::Product(Box::new(acc), Box::new(GroupSpec::Cyclic(f as u32)))
    })
}

struct Builder<'a> {
    caps: &'a Caps,
    /// Aut permutation groups per table hash; None when enumeration capped.
    aut_cache: Mutex<HashMap<u64, Option<Arc<PermGroup>>>>,
}

impl Builder<'_> {
    fn aut_perms(&self, g: &FiniteGroup) -> Option<Arc<PermGroup>> {
        let key = g.table_hash();
        if let Some(v) = self.aut_cache.lock().unwrap().get(&key) {
            return v.clone();
        }
        let (perms, complete) = enumerate_automorphisms(g, self.caps);
        let value = if complete {
            Some(Arc::new(PermGroup::new(perms)))
        } else {
            None
        };
        self.aut_cache
            .lock()
            .unwrap()
            .entry(key)
            .or_insert(value)
            .clone()
    }
}

/// Generate the catalog of all constructible groups of order ≤ `max_order`,
/// deduplicated up to isomorphism, orders processed ascending so products and
/// semidirect products can draw on smaller entries.
pub fn build_catalog(
    max_order: usize,
    families: &FamilyToggles,
    caps: &Caps,
) -> Result<Catalog> {
    if max_order > caps.order_cap {
        return Err(GroupError::OrderCap {
            order: max_order,
            cap: caps.order_cap,
        });
    }
    // units groups U_m with φ(m) ≤ max_order; φ(m) ≥ sqrt(m/2) bounds the scan
    let units_scan = (2 * max_order * max_order).max(64);
    let phi = totient_sieve(units_scan);
    let mut units_by_order: Vec<Vec<usize>> = vec![Vec::new(); max_order + 1];
    if families.units {
        for m in 1..=units_scan {
            let o = phi[m].max(1);
            if o <= max_order {
                units_by_order[o].push(m);
            }
        }
    }

    let builder = Builder {
        caps,
        aut_cache: Mutex::new(HashMap::new()),
    };

    let mut entries: Vec<CatalogEntry> = Vec::new();
    let mut by_order: Vec<Vec<usize>> = vec![Vec::new(); max_order + 1];
    let mut completeness = vec![Completeness::ConstructibleOnly; max_order];
    let mut notes: Vec<String> = Vec::new();

    for n in 1..=max_order {
        let order_t0 = std::time::Instant::now();
        let mut caps_hit_at_order = false;
        // --- stage 1: direct constructor families ---
        let mut specs: Vec<GroupSpec> = Vec::new();
        if families.cyclic {
            specs.push(GroupSpec::Cyclic(n as u32));
        }
        if families.abelian {
            for t in abelian_types(n) {
                specs.push(product_spec(&t));
            }
        }
        for &m in &units_by_order[n] {
            specs.push(GroupSpec::Units(m as u32));
        }
        if families.dihedral && n % 2 == 0 && n / 2 >= 3 {
            specs.push(GroupSpec::Dihedral((n / 2) as u32));
        }
        if families.dicyclic && n % 4 == 0 && n / 4 >= 2 {
            specs.push(GroupSpec::Dicyclic((n / 4) as u32));
        }
        if families.symmetric {
            let mut f = 1usize;
            for m in 2..=10u32 {
                f *= m as usize;
                if f == n && m >= 3 {
                    specs.push(GroupSpec::Symmetric(m));
                }
                if f > n {
                    break;
                }
            }
        }
        if families.alternating {
            let mut f = 1usize;
            for m in 2..=10u32 {
                f *= m as usize;
                if f == 2 * n && m >= 4 {
                    specs.push(GroupSpec::Alternating(m));
                }
                if f > 2 * n {
                    break;
                }
            }
        }
        if families.heisenberg {
            for p in 2..=16u32 {
                if crate::spec::is_prime(p) && (p as usize).pow(3) == n {
                    specs.push(GroupSpec::Heisenberg(p));
                }
            }
        }
        if families.sl23 && n == 24 {
            specs.push(GroupSpec::Sl23);
        }
        if families.wreath {
            for m in 1..=max_order {
                if 2 * m * m == n {
                    for &ei in &by_order[m] {
                        specs.push(GroupSpec::Wreath2(Box::new(entries[ei].spec.clone())));
                    }
                }
            }
        }
        if families.products {
            for d in 2..n {
                if n % d != 0 || d > n / d {
                    continue;
                }
                for &ai in &by_order[d] {
                    for &bi in &by_order[n / d] {
                        specs.push(GroupSpec::Product(
                            Box::new(entries[ai].spec.clone()),
                            Box::new(entries[bi].spec.clone()),
                        ));
                    }
                }
            }
        }

        let built: Vec<(GroupSpec, FiniteGroup, Fingerprint)> = specs
            .into_par_iter()
            .map(|s| {
                let g = s.build(caps)?;
                let fp = fingerprint(&g);
                Ok::<_, GroupError>((s, g, fp))
            })
            .collect::<Result<Vec<_>>>()?;

        let mut candidates = built;

        // --- stage 2: semidirect products over enumerated actions ---
        if families.semidirect && n > 3 {
            let mut pairs: Vec<(usize, usize)> = Vec::new(); // (N entry, K entry)
            for d in 2..n {
                if n % d != 0 || n / d < 2 {
                    continue;
                }
                for &ni in &by_order[d] {
                    for &ki in &by_order[n / d] {
                        pairs.push((ni, ki));
                    }
                }
            }
            // share Aut enumeration across pairs with the same N
            let mut n_indices: Vec<usize> = pairs.iter().map(|&(ni, _)| ni).collect();
            n_indices.sort_unstable();
            n_indices.dedup();
            let auts: Vec<Option<Arc<PermGroup>>> = n_indices
                .par_iter()
                .map(|&ni| builder.aut_perms(&entries[ni].group))
                .collect();
            let aut_of: HashMap<usize, Option<Arc<PermGroup>>> =
                n_indices.into_iter().zip(auts).collect();

            #[allow(clippy::type_complexity)]
            let results: Vec<(Vec<(GroupSpec, FiniteGroup, Fingerprint)>, bool)> = pairs
                .par_iter()
                .map(|&(ni, ki)| {
                    let ng = &entries[ni].group;
                    let kg = &entries[ki].group;
                    let Some(pg) = aut_of[&ni].clone() else {
                        return (Vec::new(), true); // Aut capped: constructions lost
                    };
                    let pair_t0 = std::time::Instant::now();
                    let en = enumerate_actions_into(kg, &pg, caps.action_budget);
                    // Dedupe within the pair right away: different actions very
                    // often give isomorphic extensions, and dropping them here
                    // keeps the order-wide dedupe batch small.
                    let mut local: HashMap<Fingerprint, Vec<usize>> = HashMap::new();
                    let mut out: Vec<(GroupSpec, FiniteGroup, Fingerprint)> = Vec::new();
                    'actions: for (ai, action) in en.actions.iter().enumerate() {
                        if ai == 0 {
                            continue; // trivial action: already covered by products
                        }
                        let g = crate::spec::semidirect_product(ng, kg, action, caps)
                            .expect("enumerated action must be valid");
                        let fp = fingerprint(&g);
                        let bucket = local.entry(fp.clone()).or_default();
                        for &oi in bucket.iter() {
                            if find_isomorphism(&out[oi].1, &g).is_some() {
                                continue 'actions;
                            }
                        }
                        let spec = GroupSpec::Semidirect(
                            Box::new(entries[ni].spec.clone()),
                            Box::new(entries[ki].spec.clone()),
                            ActionSource::Ordinal(ai),
                        );
                        bucket.push(out.len());
                        out.push((spec, g, fp));
                    }
                    if std::env::var_os("GROUPLAB_CATALOG_TRACE").is_some()
                        && pair_t0.elapsed().as_secs_f64() > 2.0
                    {
                        eprintln!(
                            "  pair sd({}, {}): {} actions -> {} kept, {:.2}s",
                            entries[ni].spec,
                            entries[ki].spec,
                            en.actions.len(),
                            out.len(),
                            pair_t0.elapsed().as_secs_f64()
                        );
                    }
                    (out, en.capped)
                })
                .collect();
            for ((cands, capped), &(ni, ki)) in results.into_iter().zip(&pairs) {
                if capped {
                    caps_hit_at_order = true;
                    notes.push(format!(
                        "order {}: cap hit enumerating actions for sd({}, {})",
                        n, entries[ni].spec, entries[ki].spec
                    ));
                }
                candidates.extend(cands);
            }
        }

        for (spec, group, fp) in dedupe_batch(candidates) {
            by_order[n].push(entries.len());
            entries.push(CatalogEntry {
                spec,
                group,
                fingerprint: fp,
            });
        }

        if std::env::var_os("GROUPLAB_CATALOG_TRACE").is_some() {
            eprintln!(
                "order {:>3}: {:>4} classes, {:.2}s",
                n,
                by_order[n].len(),
                order_t0.elapsed().as_secs_f64()
            );
        }

        // --- completeness certificate ---
        if n <= 15 {
            let expected = CLASS_COUNTS_UP_TO_15[n - 1];
            let got = by_order[n].len();
            if got != expected {
                return Err(GroupError::Internal(format!(
                    "catalog completeness gate failed at order {}: found {} classes, expected {}",
                    n, got, expected
                )));
            }
            if !caps_hit_at_order {
                completeness[n - 1] = Completeness::Complete;
            }
        }
    }

    Ok(Catalog {
        entries,
        max_order,
        completeness,
        notes,
    })
}

/// One-batch isomorphism dedupe: bucket by fingerprint, then within each
/// bucket repeatedly take the earliest candidate as class representative and
/// strike out everything isomorphic to it. Buckets and the strike-out passes
/// run in parallel; output keeps the original candidate order, so specs pushed
/// first (the direct named families) win over equivalent semidirect specs.
fn dedupe_batch(
    candidates: Vec<(GroupSpec, FiniteGroup, Fingerprint)>,
) -> Vec<(GroupSpec, FiniteGroup, Fingerprint)> {
    let mut buckets: HashMap<Fingerprint, Vec<(usize, GroupSpec, FiniteGroup, Fingerprint)>> =
        HashMap::new();
    for (i, (spec, group, fp)) in candidates.into_iter().enumerate() {
        buckets
            .entry(fp.clone())
            .or_default()
            .push((i, spec, group, fp));
    }
    let bucket_list: Vec<_> = buckets.into_values().collect();
    let trace = std::env::var_os("GROUPLAB_CATALOG_TRACE").is_some();
    let tests = std::sync::atomic::AtomicUsize::new(0);
    let mut reps: Vec<(usize, GroupSpec, FiniteGroup, Fingerprint)> = bucket_list
        .into_par_iter()
        .flat_map(|mut pending| {
            let bucket_size = pending.len();
            let t0 = std::time::Instant::now();
            let mut kept = Vec::new();
            while !pending.is_empty() {
                let rep = pending.remove(0);
                tests.fetch_add(pending.len(), std::sync::atomic::Ordering::Relaxed);
                pending = pending
                    .into_par_iter()
                    .filter(|c| find_isomorphism(&rep.2, &c.2).is_none())
                    .collect();
                kept.push(rep);
            }
            if trace && t0.elapsed().as_secs_f64() > 1.0 {
                eprintln!(
                    "  bucket: {} cands -> {} classes, {:.2}s ({})",
                    bucket_size,
                    kept.len(),
                    t0.elapsed().as_secs_f64(),
                    kept[0].1
                );
            }
            kept
        })
        .collect();
    if trace {
        let t = tests.load(std::sync::atomic::Ordering::Relaxed);
        if t > 0 {
            eprintln!("  dedupe: {} iso tests", t);
        }
    }
    reps.sort_unstable_by_key(|r| r.0);
    reps.into_iter().map(|(_, s, g, f)| (s, g, f)).collect()
}

// --- on-disk catalog cache ---

#[derive(Serialize, Deserialize)]
struct IndexEntry {
    spec: String,
    order: usize,
    table_hash: String,
    file: String,
    fingerprint: Fingerprint,
}

#[derive(Serialize, Deserialize)]
struct CatalogIndex {
    max_order: usize,
    completeness: Vec<Completeness>,
    notes: Vec<String>,
    entries: Vec<IndexEntry>,
}

/// Persist the catalog: one .mt file per entry plus an index JSON.
pub fn save_catalog(cat: &Catalog, dir: &Path) -> Result<()> {
    let entries_dir = dir.join("entries");
    std::fs::create_dir_all(&entries_dir)?;
    let mut index = CatalogIndex {
        max_order: cat.max_order,
        completeness: cat.completeness.clone(),
        notes: cat.notes.clone(),
        entries: Vec::new(),
    };
    for (i, e) in cat.entries.iter().enumerate() {
        let file = format!("entries/{:05}.mt", i);
        std::fs::write(dir.join(&file), crate::ingest::write_mt(&e.group))?;
        index.entries.push(IndexEntry {
            spec: e.spec.to_string(),
            order: e.group.order(),
            table_hash: format!("{:016x}", e.group.table_hash()),
            file,
            fingerprint: e.fingerprint.clone(),
        });
    }
    std::fs::write(
        dir.join("index.json"),
        serde_json::to_string_pretty(&index)?,
    )?;
    Ok(())
}

/// Load a previously saved catalog if it covers `max_order`. Entries are
/// re-validated on ingest.
pub fn load_catalog(dir: &Path, max_order: usize, caps: &Caps) -> Result<Option<Catalog>> {
    let index_path = dir.join("index.json");
    if !index_path.exists() {
        return Ok(None);
    }
    let index: CatalogIndex = serde_json::from_str(&std::fs::read_to_string(index_path)?)?;
    if index.max_order < max_order {
        return Ok(None);
    }
    let mut entries = Vec::new();
    for ie in index.entries {
        if ie.order > max_order {
            continue;
        }
        let (mut group, _) = crate::ingest::read_mt(&dir.join(&ie.file), caps)?;
        group.set_spec(ie.spec.clone());
        if format!("{:016x}", group.table_hash()) != ie.table_hash {
            return Err(GroupError::Malformed(format!(
                "catalog entry {} does not match its recorded table hash",
                ie.file
            )));
        }
        let spec = GroupSpec::parse(&ie.spec)?;
        entries.push(CatalogEntry {
            spec,
            group,
            fingerprint: ie.fingerprint,
        });
    }
    Ok(Some(Catalog {
        entries,
        max_order,
        completeness: index.completeness[..max_order].to_vec(),
        notes: index.notes,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partitions_of_four() {
        let p = partitions(4);
        assert_eq!(p.len(), 5);
        assert!(p.contains(&vec![2, 2]));
        assert!(p.contains(&vec![1, 1, 1, 1]));
    }

    #[test]
    fn abelian_types_of_eight() {
        // besides C8: [4,2] and [2,2,2]
        let t = abelian_types(8);
        assert_eq!(t, vec![vec![4, 2], vec![2, 2, 2]]);
    }

    #[test]
    fn catalog_to_8_has_fourteen_classes() {
        let cat = build_catalog(8, &FamilyToggles::default(), &Caps::default()).unwrap();
        assert_eq!(cat.entries.len(), 14);
        for o in 1..=8 {
            assert!(cat.is_complete_at(o));
        }
        assert_eq!(cat.entries_of_order(8).count(), 5);
    }

    #[test]
    fn catalog_order_12_slice() {
        let cat = build_catalog(12, &FamilyToggles::default(), &Caps::default()).unwrap();
        let twelve: Vec<&CatalogEntry> = cat.entries_of_order(12).collect();
        assert_eq!(twelve.len(), 5);
        // C12, C6xC2, A4, Dih6, Dic3 up to isomorphism
        let caps = Caps::default();
        for want in ["C12", "C6 x C2", "A4", "Dih6", "Dic3"] {
            let w = GroupSpec::parse(want).unwrap().build(&caps).unwrap();
            assert!(
                twelve
                    .iter()
                    .any(|e| find_isomorphism(&e.group, &w).is_some()),
                "no catalog entry isomorphic to {}",
                want
            );
        }
    }

    #[test]
    fn catalog_max_order_1() {
        let cat = build_catalog(1, &FamilyToggles::default(), &Caps::default()).unwrap();
        assert_eq!(cat.entries.len(), 1);
        assert_eq!(cat.entries[0].group.order(), 1);
    }

    #[test]
    fn catalog_entries_pairwise_nonisomorphic() {
        let cat = build_catalog(16, &FamilyToggles::default(), &Caps::default()).unwrap();
        for i in 0..cat.entries.len() {
            for j in i + 1..cat.entries.len() {
                if cat.entries[i].group.order() != cat.entries[j].group.order() {
                    continue;
                }
                assert!(
                    find_isomorphism(&cat.entries[i].group, &cat.entries[j].group).is_none(),
                    "{} and {} are isomorphic",
                    cat.entries[i].spec,
                    cat.entries[j].spec
                );
            }
        }
    }

    #[test]
    fn catalog_save_load_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let caps = Caps::default();
        let cat = build_catalog(10, &FamilyToggles::default(), &caps).unwrap();
        save_catalog(&cat, dir.path()).unwrap();
        let loaded = load_catalog(dir.path(), 10, &caps).unwrap().unwrap();
        assert_eq!(loaded.entries.len(), cat.entries.len());
        for (a, b) in loaded.entries.iter().zip(&cat.entries) {
            assert_eq!(a.group.table(), b.group.table());
            assert_eq!(a.spec, b.spec);
        }
        // a smaller slice also loads
        let sliced = load_catalog(dir.path(), 6, &caps).unwrap().unwrap();
        assert!(sliced.entries.iter().all(|e| e.group.order() <= 6));
    }

    #[test]
    fn sd_ordinal_specs_rebuild_identically() {
        let caps = Caps::default();
        let cat = build_catalog(12, &FamilyToggles::default(), &caps).unwrap();
        for e in &cat.entries {
            if matches!(e.spec, GroupSpec::Semidirect(..)) {
                let rebuilt = e.spec.build(&caps).unwrap();
                assert_eq!(rebuilt.table(), e.group.table(), "spec {}", e.spec);
            }
        }
    }
}
