//! The inverse engine: search a catalog for groups H with f(H) ≅ G, check the
//! three conditions of complete f-realisability, and evaluate the Frattini
//! realisability criterion Inn(G) ⊆ Φ(Aut(G)).

use crate::catalog::Catalog;
use crate::constructions::{
    eval_construction, frattini, Construction, EvalOutcome,
};
use crate::ctx::Ctx;
use crate::error::{GroupError, Result};
use crate::group::{as_group, center, quotient, FiniteGroup};
use crate::iso::{find_isomorphism, fingerprint, iso_class_representatives};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    True,
    False,
    Unknown,
}

impl Verdict {
    pub fn is_true(self) -> bool {
        self == Verdict::True
    }
}

/// A catalog entry that could not be evaluated because of a resource cap.
#[derive(Clone, Debug, Serialize)]
pub struct Skip {
    pub spec: String,
    pub order: usize,
    pub reason: String,
}

/// Result of `find_realisations`: every catalog H with f(H) ≅ g, plus the
/// entries a cap prevented us from deciding.
#[derive(Debug, Serialize)]
pub struct Realisations {
    pub target: String,
    pub construction: Construction,
    pub max_order: usize,
    /// Witness specs, ascending by (order, spec).
    pub witnesses: Vec<String>,
    pub skips: Vec<Skip>,
    /// Orders 1..=complete_prefix are certified to be fully covered by the
    /// catalog; above that the search is corroboration over constructibles.
    pub complete_prefix: usize,
    #[serde(skip)]
    pub witness_indices: Vec<usize>,
}

fn complete_prefix(catalog: &Catalog) -> usize {
    let mut k = 0;
    while k < catalog.max_order && catalog.is_complete_at(k + 1) {
        k += 1;
    }
    k
}

/// Evaluate f(h), with an Inn fallback through h/Z(h) when the Aut table is
/// capped (the two are isomorphic, so no information is lost).
fn eval_with_fallback(
    f: Construction,
    h: &FiniteGroup,
    ctx: &Ctx,
) -> Result<EvalOutcome> {
    let out = eval_construction(f, h, ctx)?;
    if f == Construction::Inn {
        if let EvalOutcome::AutCapped { .. } = out {
            return Ok(EvalOutcome::Group(quotient(h, &center(h))?));
        }
    }
    Ok(out)
}

/// All catalog entries H with f(H) ≅ g, in ascending (order, spec) order.
/// Cap-blocked entries are recorded as skips, never silently dropped.
pub fn find_realisations(
    g: &FiniteGroup,
    f: Construction,
    catalog: &Catalog,
    ctx: &Ctx,
) -> Result<Realisations> {
    let target_fp = fingerprint(g);
    enum Outcome {
        Hit,
        Miss,
        Skip(String),
    }
    let results: Vec<Outcome> = catalog
        .entries
        .par_iter()
        .map(|e| {
            // subgroup-valued f cannot grow the group
            if f.is_monotone()
                && (e.group.order() < g.order() || e.group.order() % g.order() != 0)
            {
                return Ok(Outcome::Miss);
            }
            match eval_with_fallback(f, &e.group, ctx)? {
                EvalOutcome::Group(fh) => {
                    if fingerprint(&fh) != target_fp {
                        return Ok(Outcome::Miss);
                    }
                    if find_isomorphism(g, &fh).is_some() {
                        Ok(Outcome::Hit)
                    } else {
                        Ok(Outcome::Miss)
                    }
                }
                EvalOutcome::AutCapped { aut_order } => {
                    // a known |Aut| different from |g| is a definite negative
                    if aut_order == Some(g.order()) || aut_order.is_none() {
                        Ok(Outcome::Skip(match aut_order {
                            Some(m) => format!("Aut table for {} (order {}) exceeds the table cap", e.spec, m),
                            None => format!("Aut({}) enumeration exceeds the map cap", e.spec),
                        }))
                    } else {
                        Ok(Outcome::Miss)
                    }
                }
            }
        })
        .collect::<Result<Vec<_>>>()?;

    let mut hits: Vec<usize> = Vec::new();
    let mut skips = Vec::new();
    for (i, o) in results.into_iter().enumerate() {
        match o {
            Outcome::Hit => hits.push(i),
            Outcome::Miss => {}
            Outcome::Skip(reason) => skips.push(Skip {
                spec: catalog.entries[i].spec.to_string(),
                order: catalog.entries[i].group.order(),
                reason,
            }),
        }
    }
    hits.sort_by(|&a, &b| {
        let (ea, eb) = (&catalog.entries[a], &catalog.entries[b]);
        (ea.group.order(), ea.spec.to_string()).cmp(&(eb.group.order(), eb.spec.to_string()))
    });
    skips.sort_by(|a, b| (a.order, &a.spec).cmp(&(b.order, &b.spec)));
    Ok(Realisations {
        target: g.spec().to_string(),
        construction: f,
        max_order: catalog.max_order,
        witnesses: hits
            .iter()
            .map(|&i| catalog.entries[i].spec.to_string())
            .collect(),
        skips,
        complete_prefix: complete_prefix(catalog),
        witness_indices: hits,
    })
}

/// A matched pair in condition (ii): a subgroup iso-class of g together with
/// the subgroup of h whose f-image realizes it.
#[derive(Clone, Debug, Serialize)]
pub struct ConditionWitness {
    /// Order of the matched subgroup class of g and the elements of a
    /// representative.
    pub g_subgroup_order: usize,
    pub g_subgroup_elems: Vec<u16>,
    /// Elements of the witnessing subgroup H₁ ≤ h.
    pub h_subgroup_elems: Vec<u16>,
    /// Isomorphism from the reified G₁ onto f(H₁), as an element map.
    pub isomorphism: Vec<u16>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionFailure {
    pub subgroup_order: usize,
    pub subgroup_elems: Vec<u16>,
    pub detail: String,
}

/// Report for the three conditions of complete f-realisability:
/// (i) f(h) ≅ g; (ii) every subgroup iso-class of g arises as f(H₁) for some
/// H₁ ≤ h; (iii) every f(H₁) is isomorphic to a subgroup of g.
#[derive(Debug, Serialize)]
pub struct RealisabilityReport {
    pub construction: Construction,
    pub target: String,
    pub witness: String,
    pub verdict_i: Verdict,
    pub verdict_ii: Verdict,
    pub verdict_iii: Verdict,
    pub witnesses_ii: Vec<ConditionWitness>,
    pub failures_ii: Vec<ConditionFailure>,
    pub failures_iii: Vec<ConditionFailure>,
    pub skips: Vec<Skip>,
}

impl RealisabilityReport {
    pub fn all_true(&self) -> bool {
        self.verdict_i.is_true() && self.verdict_ii.is_true() && self.verdict_iii.is_true()
    }
}

/// Check conditions (i)–(iii) for the pair (g, h). Condition (ii) quantifies
/// over subgroup iso-class representatives of g and (iii) over conjugacy-class
/// representatives of h's subgroups: isomorphic G₁ are interchangeable in (ii)
/// and conjugate H₁ have isomorphic f-images in (iii). A cap on any subgroup
/// makes the affected verdicts Unknown, never True.
pub fn check_completely_realisable(
    g: &FiniteGroup,
    h: &FiniteGroup,
    f: Construction,
    ctx: &Ctx,
) -> Result<RealisabilityReport> {
    let mut skips: Vec<Skip> = Vec::new();

    // (i)
    let verdict_i = match eval_with_fallback(f, h, ctx)? {
        EvalOutcome::Group(fh) => {
            if find_isomorphism(g, &fh).is_some() {
                Verdict::True
            } else {
                Verdict::False
            }
        }
        EvalOutcome::AutCapped { aut_order } => match aut_order {
            Some(m) if m != g.order() => Verdict::False,
            _ => {
                skips.push(Skip {
                    spec: h.spec().to_string(),
                    order: h.order(),
                    reason: "Aut cap while evaluating condition (i)".into(),
                });
                Verdict::Unknown
            }
        },
    };

    // subgroup iso-class representatives of g
    let lat_g = ctx.lattice_of(g)?;
    let g_reps: Vec<(usize, FiniteGroup)> = {
        let class_reps: Vec<usize> = lat_g.class_representatives();
        let reified: Vec<FiniteGroup> = class_reps
            .iter()
            .map(|&i| as_group(g, &lat_g.subgroups[i]))
            .collect();
        iso_class_representatives(&reified)
            .into_iter()
            .map(|(rep, _)| (class_reps[rep], reified[rep].clone()))
            .collect()
    };

    // f over conjugacy-class representatives of h's subgroups
    let lat_h = ctx.lattice_of(h)?;
    let h_reps: Vec<usize> = lat_h.class_representatives();
    let h_images: Vec<(usize, Option<FiniteGroup>)> = h_reps
        .par_iter()
        .map(|&hi| {
            let h1 = as_group(h, &lat_h.subgroups[hi]);
            let img = match eval_with_fallback(f, &h1, ctx)? {
                EvalOutcome::Group(fh1) => Some(fh1),
                EvalOutcome::AutCapped { .. } => None,
            };
            Ok::<_, GroupError>((hi, img))
        })
        .collect::<Result<Vec<_>>>()?;
    for (hi, img) in &h_images {
        if img.is_none() {
            skips.push(Skip {
                spec: format!("subgroup of {} on {:?}", h.spec(), lat_h.subgroups[*hi].elems()),
                order: lat_h.subgroups[*hi].size(),
                reason: "Aut cap while evaluating f on a subgroup of h".into(),
            });
        }
    }
    let any_h_skip = h_images.iter().any(|(_, img)| img.is_none());

    // (ii)
    let mut witnesses_ii = Vec::new();
    let mut failures_ii = Vec::new();
    for (gi, g1) in &g_reps {
        let mut matched = false;
        for (hi, img) in &h_images {
            let Some(fh1) = img else { continue };
            if let Some(iso) = find_isomorphism(g1, fh1) {
                witnesses_ii.push(ConditionWitness {
                    g_subgroup_order: lat_g.subgroups[*gi].size(),
                    g_subgroup_elems: lat_g.subgroups[*gi].elems().to_vec(),
                    h_subgroup_elems: lat_h.subgroups[*hi].elems().to_vec(),
                    isomorphism: iso.map,
                });
                matched = true;
                break;
            }
        }
        if !matched {
            failures_ii.push(ConditionFailure {
                subgroup_order: lat_g.subgroups[*gi].size(),
                subgroup_elems: lat_g.subgroups[*gi].elems().to_vec(),
                detail: format!(
                    "no subgroup of {} has f-image isomorphic to this subgroup of {}",
                    h.spec(),
                    g.spec()
                ),
            });
        }
    }
    let verdict_ii = if failures_ii.is_empty() {
        Verdict::True
    } else if any_h_skip {
        Verdict::Unknown
    } else {
        Verdict::False
    };

    // (iii): every computed f(H₁) must be isomorphic to some subgroup of g
    let mut failures_iii = Vec::new();
    for (hi, img) in &h_images {
        let Some(fh1) = img else { continue };
        if !g_reps
            .iter()
            .any(|(_, g1)| find_isomorphism(g1, fh1).is_some())
        {
            failures_iii.push(ConditionFailure {
                subgroup_order: lat_h.subgroups[*hi].size(),
                subgroup_elems: lat_h.subgroups[*hi].elems().to_vec(),
                detail: format!(
                    "f-image (order {}) is not isomorphic to any subgroup of {}",
                    fh1.order(),
                    g.spec()
                ),
            });
        }
    }
    let verdict_iii = if !failures_iii.is_empty() {
        Verdict::False
    } else if any_h_skip {
        Verdict::Unknown
    } else {
        Verdict::True
    };

    Ok(RealisabilityReport {
        construction: f,
        target: g.spec().to_string(),
        witness: h.spec().to_string(),
        verdict_i,
        verdict_ii,
        verdict_iii,
        witnesses_ii,
        failures_ii,
        failures_iii,
        skips,
    })
}

/// Verdict of the criterion Inn(G) ⊆ Φ(Aut(G)), which characterizes the groups
/// arising as Frattini subgroups.
#[derive(Debug, Serialize)]
pub struct FrattiniCriterion {
    pub holds: bool,
    pub aut_order: usize,
    pub inn_order: usize,
    pub phi_aut_order: usize,
}

pub fn frattini_criterion(g: &FiniteGroup, ctx: &Ctx) -> Result<FrattiniCriterion> {
    let aut = ctx.aut_of(g);
    let table = aut.table_group.as_ref().ok_or_else(|| {
        GroupError::CapExceeded(format!(
            "Aut({}) table not materializable within caps",
            g.spec()
        ))
    })?;
    let inn = aut.inner_subgroup().expect("table group implies inner subgroup");
    let lat = ctx.lattice_of(table)?;
    let phi = frattini(table, &lat);
    Ok(FrattiniCriterion {
        holds: inn.members().is_subset_of(phi.members()),
        aut_order: table.order(),
        inn_order: inn.size(),
        phi_aut_order: phi.size(),
    })
}

/// Search result of `find_complete_realisations`: the witnesses that pass all
/// three conditions, plus every report and the inherited skips.
#[derive(Debug, Serialize)]
pub struct CompleteRealisations {
    pub target: String,
    pub construction: Construction,
    pub max_order: usize,
    pub complete_prefix: usize,
    pub passing: Vec<String>,
    pub reports: Vec<RealisabilityReport>,
    pub skips: Vec<Skip>,
}

/// Filter `find_realisations` candidates through `check_completely_realisable`.
pub fn find_complete_realisations(
    g: &FiniteGroup,
    f: Construction,
    catalog: &Catalog,
    ctx: &Ctx,
) -> Result<CompleteRealisations> {
    let base = find_realisations(g, f, catalog, ctx)?;
    let mut reports = Vec::new();
    let mut passing = Vec::new();
    for &i in &base.witness_indices {
        let e = &catalog.entries[i];
        let report = check_completely_realisable(g, &e.group, f, ctx)?;
        if report.all_true() {
            passing.push(e.spec.to_string());
        }
        reports.push(report);
    }
    Ok(CompleteRealisations {
        target: g.spec().to_string(),
        construction: f,
        max_order: catalog.max_order,
        complete_prefix: base.complete_prefix,
        passing,
        reports,
        skips: base.skips,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build_catalog, FamilyToggles};
    use crate::spec::GroupSpec;
    use crate::Caps;

    fn build(s: &str) -> FiniteGroup {
        GroupSpec::parse(s).unwrap().build(&Caps::default()).unwrap()
    }

    #[test]
    fn d_realisations_of_a4_include_s4() {
        let ctx = Ctx::new(Caps::default());
        let cat = build_catalog(24, &FamilyToggles::default(), &Caps::default()).unwrap();
        let r = find_realisations(&build("A4"), Construction::D, &cat, &ctx).unwrap();
        assert!(r.witnesses.iter().any(|w| w == "S4"), "{:?}", r.witnesses);
        assert!(r.skips.is_empty());
    }

    #[test]
    fn trivial_group_realises_itself_under_z() {
        let ctx = Ctx::new(Caps::default());
        let cat = build_catalog(2, &FamilyToggles::default(), &Caps::default()).unwrap();
        let r = find_realisations(&build("C1"), Construction::Z, &cat, &ctx).unwrap();
        // Z(C2) = C2 ≠ C1, so only the trivial group qualifies at max order 2
        assert_eq!(r.witnesses, vec!["C1"]);
    }

    #[test]
    fn a4_s4_completely_d_realisable() {
        let ctx = Ctx::new(Caps::default());
        let report =
            check_completely_realisable(&build("A4"), &build("S4"), Construction::D, &ctx)
                .unwrap();
        assert!(report.all_true(), "{:?}", report);
        assert!(report.failures_ii.is_empty() && report.failures_iii.is_empty());
    }

    #[test]
    fn c2sq_c8_completely_aut_realisable() {
        let ctx = Ctx::new(Caps::default());
        let report =
            check_completely_realisable(&build("E2^2"), &build("C8"), Construction::Aut, &ctx)
                .unwrap();
        assert!(report.all_true(), "{:?}", report);
    }

    #[test]
    fn verdict_ii_false_iff_failures_nonempty() {
        // Z(Dih4) = C2 but Dih4 has a C4 subgroup that is the center of no
        // subgroup of C2 x C2, so (C4-in-Dih4, C2 x C2, Z) must fail (ii)
        let ctx = Ctx::new(Caps::default());
        let report =
            check_completely_realisable(&build("Dih4"), &build("E2^2"), Construction::Z, &ctx)
                .unwrap();
        assert_eq!(report.verdict_i, Verdict::False);
        assert_eq!(report.verdict_ii, Verdict::False);
        assert!(!report.failures_ii.is_empty());
        assert!(report.skips.is_empty());
    }

    #[test]
    fn frattini_criterion_q8_false_with_sizes() {
        let ctx = Ctx::new(Caps::default());
        let c = frattini_criterion(&build("Q8"), &ctx).unwrap();
        assert!(!c.holds);
        assert_eq!(c.aut_order, 24);
        assert_eq!(c.inn_order, 4);
        assert_eq!(c.phi_aut_order, 1);
    }

    #[test]
    fn frattini_criterion_abelian_true() {
        let ctx = Ctx::new(Caps::default());
        for s in ["C1", "C6", "E2^2", "C9"] {
            let c = frattini_criterion(&build(s), &ctx).unwrap();
            assert!(c.holds, "criterion should hold for abelian {}", s);
            assert_eq!(c.inn_order, 1);
        }
    }

    #[test]
    fn complete_aut_realisations_of_c2cubed_include_c24() {
        let ctx = Ctx::new(Caps::default());
        let cat = build_catalog(24, &FamilyToggles::default(), &Caps::default()).unwrap();
        let r =
            find_complete_realisations(&build("E2^3"), Construction::Aut, &cat, &ctx).unwrap();
        let c24 = build("C8 x C3");
        let hit = r.passing.iter().any(|w| {
            let g = GroupSpec::parse(w).unwrap().build(&Caps::default()).unwrap();
            find_isomorphism(&g, &c24).is_some()
        });
        assert!(hit, "expected a witness isomorphic to C24 in {:?}", r.passing);
    }

    #[test]
    fn trivial_target_complete_under_every_f() {
        let ctx = Ctx::new(Caps::default());
        let cat = build_catalog(4, &FamilyToggles::default(), &Caps::default()).unwrap();
        let g = build("C1");
        for f in Construction::ALL {
            let r = find_complete_realisations(&g, f, &cat, &ctx).unwrap();
            assert!(
                r.passing.contains(&"C1".to_string()),
                "f = {} should admit the trivial witness",
                f
            );
        }
    }

    #[test]
    fn inn_fallback_matches_quotient() {
        // E2^5 has an Aut too large to enumerate, but Inn must still evaluate
        let ctx = Ctx::new(Caps::default());
        let g = build("E2^5");
        let out = eval_with_fallback(Construction::Inn, &g, &ctx).unwrap();
        match out {
            EvalOutcome::Group(inn) => assert_eq!(inn.order(), 1),
            EvalOutcome::AutCapped { .. } => panic!("Inn fallback did not engage"),
        }
    }
}
