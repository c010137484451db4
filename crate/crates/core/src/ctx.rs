//! Resource caps and the shared computation context (caches).

use crate::constructions::{automorphism_group, AutGroup};
use crate::error::Result;
use crate::group::FiniteGroup;
use crate::lattice::{all_subgroups, LatticeDump, SubgroupLattice};
use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};

/// Resource caps. Every bound the engine observes lives here so that runs are
/// reproducible and caps are overridable from the CLI.
#[derive(Clone, Debug)]
pub struct Caps {
    /// Maximum group order any constructor will produce.
    pub order_cap: usize,
    /// Orders up to this get the full cubic associativity loop on ingest.
    pub assoc_exhaustive_limit: usize,
    /// Maximum number of automorphisms enumerated before giving up.
    pub aut_map_cap: usize,
    /// Maximum automorphism count for which a Cayley table is materialized.
    pub aut_table_cap: usize,
    /// Maximum number of subgroups enumerated per lattice.
    pub subgroup_cap: usize,
    /// Maximum homomorphisms enumerated per semidirect (N, K) pair.
    pub action_budget: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            order_cap: 768,
            assoc_exhaustive_limit: 256,
            aut_map_cap: 100_000,
            aut_table_cap: 2048,
            subgroup_cap: 1_000_000,
            action_budget: 10_000,
        }
    }
}

/// Shared context: caps plus write-once caches for lattices and automorphism
/// groups, keyed by table hash. When `cache_dir` is set, lattices are also
/// persisted to disk under `<dir>/lattices/`.
pub struct Ctx {
    pub caps: Caps,
    pub cache_dir: Option<PathBuf>,
    lattices: Mutex<HashMap<u64, Arc<SubgroupLattice>>>,
    auts: Mutex<HashMap<u64, Arc<AutGroup>>>,
}

impl Ctx {
    pub fn new(caps: Caps) -> Self {
        Ctx {
            caps,
            cache_dir: None,
            lattices: Mutex::new(HashMap::new()),
            auts: Mutex::new(HashMap::new()),
        }
    }

    pub fn with_cache_dir(mut self, dir: PathBuf) -> Self {
        self.cache_dir = Some(dir);
        self
    }

    /// Subgroup lattice of `g`, computed once per table hash.
    pub fn lattice_of(&self, g: &FiniteGroup) -> Result<Arc<SubgroupLattice>> {
        let key = g.table_hash();
        if let Some(l) = self.lattices.lock().unwrap().get(&key) {
            return Ok(l.clone());
        }
        if let Some(l) = self.load_lattice(key, g) {
            self.lattices.lock().unwrap().insert(key, l.clone());
            return Ok(l);
        }
        let lat = Arc::new(all_subgroups(g, &self.caps)?);
        self.store_lattice(key, &lat);
        self.lattices
            .lock()
            .unwrap()
            .entry(key)
            .or_insert_with(|| lat.clone());
        Ok(lat)
    }

    /// Automorphism group of `g`, computed once per table hash. Cap overruns
    /// are carried inside the result, not raised.
    pub fn aut_of(&self, g: &FiniteGroup) -> Arc<AutGroup> {
        let key = g.table_hash();
        if let Some(a) = self.auts.lock().unwrap().get(&key) {
            return a.clone();
        }
        let aut = Arc::new(automorphism_group(g, &self.caps));
        self.auts
            .lock()
            .unwrap()
            .entry(key)
            .or_insert_with(|| aut.clone())
            .clone()
    }

    fn lattice_path(&self, key: u64) -> Option<PathBuf> {
        self.cache_dir
            .as_ref()
            .map(|d| d.join("lattices").join(format!("{:016x}.json", key)))
    }

    fn load_lattice(&self, key: u64, g: &FiniteGroup) -> Option<Arc<SubgroupLattice>> {
        let path = self.lattice_path(key)?;
        let data = std::fs::read_to_string(path).ok()?;
        let dump: LatticeDump = serde_json::from_str(&data).ok()?;
        dump.rebuild(g.order()).map(Arc::new)
    }

    fn store_lattice(&self, key: u64, lat: &SubgroupLattice) {
        if let Some(path) = self.lattice_path(key) {
            if let Some(parent) = path.parent() {
                let _ = std::fs::create_dir_all(parent);
            }
            if let Ok(json) = serde_json::to_string(&LatticeDump::from(lat)) {
                let _ = std::fs::write(path, json);
            }
        }
    }
}

impl Default for Ctx {
    fn default() -> Self {
        Ctx::new(Caps::default())
    }
}
