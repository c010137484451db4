//! Claims runner: the expected values live in a JSON manifest (data, not
//! code), and every claim is checked end-to-end against the engine at a
//! chosen scale. Each outcome is PASS, FAIL or UNKNOWN — caps surface as
//! UNKNOWN, never as silent success.

use crate::catalog::{build_catalog, load_catalog, save_catalog, Catalog, FamilyToggles};
use crate::constructions::{
    cd_lattice, chermak_delgado_subgroup, eval_construction, frattini, frattini_pgroup_shortcut,
    fitting, fitting_via_pcores, Construction, EvalOutcome,
};
use crate::ctx::Ctx;
use crate::error::{GroupError, Result};
use crate::group::{as_group, center, centralizer, join, sample_pairs, Elem, FiniteGroup, Subgroup};
use crate::iso::{find_isomorphism, fingerprint};
use crate::realis::{
    check_completely_realisable, find_complete_realisations, find_realisations,
    frattini_criterion, Verdict,
};
use crate::spec::GroupSpec;
use crate::Caps;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::Path;
use std::time::Instant;

pub const CLAIMS_JSON: &str = include_str!("../assets/claims.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    Small,
    Full,
}

impl Scale {
    pub fn parse(s: &str) -> Result<Scale> {
        match s {
            "small" => Ok(Scale::Small),
            "full" => Ok(Scale::Full),
            _ => Err(GroupError::SpecParse(format!(
                "unknown scale '{}' (expected small or full)",
                s
            ))),
        }
    }
}

/// A number that may differ between the small and full scales.
#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(untagged)]
pub enum ScaledNum {
    Uniform(usize),
    PerScale { small: usize, full: usize },
}

impl ScaledNum {
    pub fn at(self, scale: Scale) -> usize {
        match self {
            ScaledNum::Uniform(n) => n,
            ScaledNum::PerScale { small, full } => match scale {
                Scale::Small => small,
                Scale::Full => full,
            },
        }
    }
}

fn default_true_verdict() -> String {
    "True".to_string()
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClaimKind {
    /// Aut(h) ≅ expect, as concrete tables.
    AutIso { h: String, expect: String },
    /// f(h) ≅ expect.
    ConstructionIso {
        f: String,
        h: String,
        expect: String,
    },
    /// check_completely_realisable(g, h, f) produces the expected verdicts;
    /// optionally require a condition-(ii) failure isomorphic to a named group.
    CompleteCheck {
        g: String,
        h: String,
        f: String,
        #[serde(default = "default_true_verdict")]
        expect_i: String,
        #[serde(default = "default_true_verdict")]
        expect_ii: String,
        #[serde(default = "default_true_verdict")]
        expect_iii: String,
        #[serde(default)]
        failure_ii_iso: Option<String>,
    },
    /// find_realisations over the catalog with witness-set constraints.
    Search {
        target: String,
        f: String,
        max_order: ScaledNum,
        #[serde(default)]
        must_contain: Vec<String>,
        #[serde(default)]
        none_below: Option<usize>,
        #[serde(default)]
        expect_empty: bool,
    },
    /// find_complete_realisations expecting no passing witness.
    CompleteSearch {
        target: String,
        f: String,
        max_order: ScaledNum,
        expect_empty: bool,
    },
    /// Aut(H) ≅ target over cyclic C_n (n ≤ cyclic_max) plus the catalog up to
    /// catalog_max; the witness iso-classes must equal the expected list.
    AutTargetScan {
        target: String,
        cyclic_max: ScaledNum,
        catalog_max: usize,
        expect: Vec<String>,
    },
    /// No H in the same domain has Aut(H) cyclic of odd order > 1.
    AutOddCyclicScan {
        cyclic_max: ScaledNum,
        catalog_max: usize,
    },
    /// No catalog H up to catalog_max has Aut(H) ≅ target; Aut caps are
    /// tolerated as recorded skips when allow_skips is set.
    AutTargetEmpty {
        target: String,
        catalog_max: ScaledNum,
        #[serde(default)]
        allow_skips: bool,
    },
    /// For every abelian A with |A| ≤ max_abelian: D(A ≀ C2) ≅ A and the
    /// complete-D check on (A, A ≀ C2) is all-true.
    WreathScan { max_abelian: ScaledNum },
    /// Inn(g) ⊆ Φ(Aut(g)) matches the expected verdict (and sizes, if given).
    FrattiniCriterionCheck {
        g: String,
        expect: bool,
        #[serde(default)]
        inn_order: Option<usize>,
        #[serde(default)]
        phi_aut_order: Option<usize>,
    },
    /// Every catalog g with a Φ-witness in the catalog satisfies the criterion.
    FrattiniOnlyIfScan { catalog_max: ScaledNum },
    /// Chermak-Delgado invariants over every catalog group up to catalog_max.
    CdSuite { catalog_max: ScaledNum },
    /// find_isomorphism agrees with an all-bijections brute force on every
    /// same-order pair of catalog groups up to catalog_max.
    IsoBruteforce { catalog_max: usize },
    /// Φ via maximal-subgroup intersection agrees with H′Hᵖ on every p-group.
    PhiRoutes { catalog_max: ScaledNum },
    /// Fitting via normal-nilpotent join agrees with the p-core product.
    FittingRoutes { catalog_max: ScaledNum },
    /// Per-order class counts at orders 1..15 match the classification.
    CatalogGate { catalog_max: usize },
}

#[derive(Clone, Debug, Deserialize)]
pub struct Claim {
    pub id: String,
    pub criterion: u32,
    #[serde(flatten)]
    pub kind: ClaimKind,
}

#[derive(Deserialize)]
struct Manifest {
    claims: Vec<Claim>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ClaimStatus {
    Pass,
    Fail,
    Unknown,
}

impl fmt::Display for ClaimStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClaimStatus::Pass => "PASS",
            ClaimStatus::Fail => "FAIL",
            ClaimStatus::Unknown => "UNKNOWN",
        })
    }
}

#[derive(Debug, Serialize)]
pub struct ClaimOutcome {
    pub id: String,
    pub criterion: u32,
    pub status: ClaimStatus,
    pub detail: String,
    pub seconds: f64,
}

pub fn parse_manifest(json: &str) -> Result<Vec<Claim>> {
    let m: Manifest = serde_json::from_str(json)?;
    Ok(m.claims)
}

/// Largest catalog order the claim touches at the given scale (0 = none).
pub fn catalog_need(claim: &Claim, scale: Scale) -> usize {
    match &claim.kind {
        ClaimKind::AutIso { .. }
        | ClaimKind::ConstructionIso { .. }
        | ClaimKind::CompleteCheck { .. }
        | ClaimKind::FrattiniCriterionCheck { .. } => 0,
        ClaimKind::Search { max_order, .. }
        | ClaimKind::CompleteSearch { max_order, .. } => max_order.at(scale),
        ClaimKind::AutTargetScan { catalog_max, .. } => *catalog_max,
        ClaimKind::AutOddCyclicScan { catalog_max, .. } => *catalog_max,
        ClaimKind::AutTargetEmpty { catalog_max, .. } => catalog_max.at(scale),
        ClaimKind::WreathScan { max_abelian } => max_abelian.at(scale),
        ClaimKind::FrattiniOnlyIfScan { catalog_max }
        | ClaimKind::CdSuite { catalog_max }
        | ClaimKind::PhiRoutes { catalog_max }
        | ClaimKind::FittingRoutes { catalog_max } => catalog_max.at(scale),
        ClaimKind::IsoBruteforce { catalog_max } | ClaimKind::CatalogGate { catalog_max } => {
            *catalog_max
        }
    }
}

/// Run (a filtered subset of) the manifest claims at the given scale. The
/// catalog is built (or loaded from `catalog_dir`) once at the largest needed
/// order and sliced per claim.
pub fn run_claims(
    claims: &[Claim],
    scale: Scale,
    ctx: &Ctx,
    catalog_dir: Option<&Path>,
) -> Result<Vec<ClaimOutcome>> {
    let needed = claims
        .iter()
        .map(|c| catalog_need(c, scale))
        .max()
        .unwrap_or(0);
    let master = if needed > 0 {
        Some(provide_catalog(needed, ctx, catalog_dir)?)
    } else {
        None
    };
    run_claims_with_catalog(claims, scale, ctx, master.as_ref())
}

/// Like `run_claims`, but against an already-built catalog (which must cover
/// the largest order any claim needs).
pub fn run_claims_with_catalog(
    claims: &[Claim],
    scale: Scale,
    ctx: &Ctx,
    master: Option<&Catalog>,
) -> Result<Vec<ClaimOutcome>> {
    let mut outcomes = Vec::new();
    for claim in claims {
        let t0 = Instant::now();
        let need = catalog_need(claim, scale);
        if need > 0 && master.map_or(true, |m| m.max_order < need) {
            return Err(GroupError::Internal(format!(
                "claim {} needs a catalog up to order {}",
                claim.id, need
            )));
        }
        let cat = master.map(|m| m.slice(need.max(1)));
        let (status, detail) = match run_claim(claim, scale, ctx, cat.as_ref()) {
            Ok(sd) => sd,
            Err(GroupError::CapExceeded(msg)) => (ClaimStatus::Unknown, format!("cap: {}", msg)),
            Err(e) => (ClaimStatus::Fail, format!("error: {}", e)),
        };
        outcomes.push(ClaimOutcome {
            id: claim.id.clone(),
            criterion: claim.criterion,
            status,
            detail,
            seconds: t0.elapsed().as_secs_f64(),
        });
    }
    Ok(outcomes)
}

pub fn provide_catalog(
    max_order: usize,
    ctx: &Ctx,
    catalog_dir: Option<&Path>,
) -> Result<Catalog> {
    if let Some(dir) = catalog_dir {
        if let Some(cat) = load_catalog(dir, max_order, &ctx.caps)? {
            return Ok(cat);
        }
    }
    let cat = build_catalog(max_order, &FamilyToggles::default(), &ctx.caps)?;
    if let Some(dir) = catalog_dir {
        save_catalog(&cat, dir)?;
    }
    Ok(cat)
}

fn build_spec(s: &str, caps: &Caps) -> Result<FiniteGroup> {
    GroupSpec::parse(s)?.build(caps)
}

fn verdict_of(s: &str) -> Result<Verdict> {
    match s {
        "True" => Ok(Verdict::True),
        "False" => Ok(Verdict::False),
        "Unknown" => Ok(Verdict::Unknown),
        _ => Err(GroupError::Malformed(format!(
            "manifest verdict '{}' (expected True, False or Unknown)",
            s
        ))),
    }
}

fn is_cyclic(g: &FiniteGroup) -> bool {
    g.exponent() == g.order() as u32
}

fn run_claim(
    claim: &Claim,
    scale: Scale,
    ctx: &Ctx,
    cat: Option<&Catalog>,
) -> Result<(ClaimStatus, String)> {
    let caps = &ctx.caps;
    match &claim.kind {
        ClaimKind::AutIso { h, expect } => {
            let hg = build_spec(h, caps)?;
            let eg = build_spec(expect, caps)?;
            let aut = ctx.aut_of(&hg);
            let Some(table) = aut.table_group.as_ref() else {
                return Ok((ClaimStatus::Unknown, format!("Aut({}) table capped", h)));
            };
            if find_isomorphism(table, &eg).is_some() {
                Ok((
                    ClaimStatus::Pass,
                    format!("Aut({}) has order {} and is isomorphic to {}", h, table.order(), expect),
                ))
            } else {
                Ok((
                    ClaimStatus::Fail,
                    format!("Aut({}) has order {}, not isomorphic to {}", h, table.order(), expect),
                ))
            }
        }
        ClaimKind::ConstructionIso { f, h, expect } => {
            let f = Construction::parse(f)?;
            let hg = build_spec(h, caps)?;
            let eg = build_spec(expect, caps)?;
            match eval_construction(f, &hg, ctx)? {
                EvalOutcome::Group(fh) => {
                    if find_isomorphism(&fh, &eg).is_some() {
                        Ok((ClaimStatus::Pass, format!("{}({}) ≅ {}", f, h, expect)))
                    } else {
                        Ok((
                            ClaimStatus::Fail,
                            format!("{}({}) has order {}, not isomorphic to {}", f, h, fh.order(), expect),
                        ))
                    }
                }
                EvalOutcome::AutCapped { .. } => {
                    Ok((ClaimStatus::Unknown, format!("{}({}) capped", f, h)))
                }
            }
        }
        ClaimKind::CompleteCheck {
            g,
            h,
            f,
            expect_i,
            expect_ii,
            expect_iii,
            failure_ii_iso,
        } => {
            let f = Construction::parse(f)?;
            let gg = build_spec(g, caps)?;
            let hg = build_spec(h, caps)?;
            let report = check_completely_realisable(&gg, &hg, f, ctx)?;
            let want = (
                verdict_of(expect_i)?,
                verdict_of(expect_ii)?,
                verdict_of(expect_iii)?,
            );
            let got = (report.verdict_i, report.verdict_ii, report.verdict_iii);
            if got != want {
                return Ok((
                    ClaimStatus::Fail,
                    format!("verdicts (i,ii,iii) = {:?}, expected {:?}", got, want),
                ));
            }
            if let Some(spec) = failure_ii_iso {
                let want_iso = build_spec(spec, caps)?;
                let hit = report.failures_ii.iter().any(|fl| {
                    let sub = Subgroup::from_elems(gg.order(), fl.subgroup_elems.clone());
                    find_isomorphism(&as_group(&gg, &sub), &want_iso).is_some()
                });
                if !hit {
                    return Ok((
                        ClaimStatus::Fail,
                        format!("no condition-(ii) failure isomorphic to {}", spec),
                    ));
                }
            }
            Ok((
                ClaimStatus::Pass,
                format!(
                    "verdicts {:?} as expected; {} witnesses, {} failures",
                    got,
                    report.witnesses_ii.len(),
                    report.failures_ii.len()
                ),
            ))
        }
        ClaimKind::Search {
            target,
            f,
            max_order,
            must_contain,
            none_below,
            expect_empty,
        } => {
            let cat = cat.expect("search claim requires a catalog");
            let f = Construction::parse(f)?;
            let tg = build_spec(target, caps)?;
            let r = find_realisations(&tg, f, cat, ctx)?;
            if *expect_empty {
                if !r.witnesses.is_empty() {
                    return Ok((
                        ClaimStatus::Fail,
                        format!("expected no witnesses, found {:?}", r.witnesses),
                    ));
                }
                let status = if r.skips.is_empty() {
                    ClaimStatus::Pass
                } else {
                    ClaimStatus::Unknown
                };
                return Ok((
                    status,
                    format!(
                        "no witness ≤ {} ({} skips; orders ≤ {} certified complete)",
                        max_order.at(scale),
                        r.skips.len(),
                        r.complete_prefix
                    ),
                ));
            }
            for w in must_contain {
                if !r.witnesses.contains(w) {
                    return Ok((
                        ClaimStatus::Fail,
                        format!("witness {} missing from {:?}", w, r.witnesses),
                    ));
                }
            }
            if let Some(bound) = none_below {
                for w in &r.witnesses {
                    let o = build_spec(w, caps)?.order();
                    if o < *bound {
                        return Ok((
                            ClaimStatus::Fail,
                            format!("witness {} has order {} < {}", w, o, bound),
                        ));
                    }
                }
            }
            Ok((
                ClaimStatus::Pass,
                format!("witnesses: {:?} ({} skips)", r.witnesses, r.skips.len()),
            ))
        }
        ClaimKind::CompleteSearch {
            target,
            f,
            max_order,
            expect_empty,
        } => {
            let cat = cat.expect("complete-search claim requires a catalog");
            let f = Construction::parse(f)?;
            let tg = build_spec(target, caps)?;
            let r = find_complete_realisations(&tg, f, cat, ctx)?;
            if *expect_empty {
                if !r.passing.is_empty() {
                    return Ok((
                        ClaimStatus::Fail,
                        format!("expected no passing witness, found {:?}", r.passing),
                    ));
                }
                let status = if r.skips.is_empty() && r.reports.iter().all(|rep| {
                    rep.verdict_i != Verdict::Unknown
                        && rep.verdict_ii != Verdict::Unknown
                        && rep.verdict_iii != Verdict::Unknown
                }) {
                    ClaimStatus::Pass
                } else {
                    ClaimStatus::Unknown
                };
                Ok((
                    status,
                    format!(
                        "no passing witness ≤ {}; {} realisations checked, {} skips, orders ≤ {} certified complete",
                        max_order.at(scale),
                        r.reports.len(),
                        r.skips.len(),
                        r.complete_prefix
                    ),
                ))
            } else {
                Ok((
                    ClaimStatus::Pass,
                    format!("passing witnesses: {:?}", r.passing),
                ))
            }
        }
        ClaimKind::AutTargetScan {
            target,
            cyclic_max,
            catalog_max,
            expect,
        } => {
            let cat = cat.expect("aut scan requires a catalog");
            let tg = build_spec(target, caps)?;
            let mut witnesses: Vec<(String, FiniteGroup)> = Vec::new();
            let mut skips = 0usize;
            let mut consider = |spec: String, h: FiniteGroup| -> Result<()> {
                let aut = ctx.aut_of(&h);
                match aut.aut_order() {
                    Some(m) if m != tg.order() => return Ok(()),
                    Some(_) => {}
                    None => {
                        skips += 1;
                        return Ok(());
                    }
                }
                let Some(table) = aut.table_group.as_ref() else {
                    skips += 1;
                    return Ok(());
                };
                if find_isomorphism(table, &tg).is_none() {
                    return Ok(());
                }
                if witnesses
                    .iter()
                    .all(|(_, w)| find_isomorphism(w, &h).is_none())
                {
                    witnesses.push((spec, h));
                }
                Ok(())
            };
            for n in 1..=cyclic_max.at(scale) as u32 {
                let spec = format!("C{}", n);
                consider(spec.clone(), build_spec(&spec, caps)?)?;
            }
            for e in cat.entries.iter().filter(|e| e.group.order() <= *catalog_max) {
                consider(e.spec.to_string(), e.group.clone())?;
            }
            let found: Vec<String> = witnesses.iter().map(|(s, _)| s.clone()).collect();
            let mut missing = Vec::new();
            for want in expect {
                let wg = build_spec(want, caps)?;
                if !witnesses.iter().any(|(_, h)| find_isomorphism(h, &wg).is_some()) {
                    missing.push(want.clone());
                }
            }
            if missing.is_empty() && witnesses.len() == expect.len() && skips == 0 {
                Ok((
                    ClaimStatus::Pass,
                    format!("witness classes with Aut ≅ {}: {:?}", target, found),
                ))
            } else {
                Ok((
                    ClaimStatus::Fail,
                    format!(
                        "found {:?}, expected {:?} (missing {:?}, {} skips)",
                        found, expect, missing, skips
                    ),
                ))
            }
        }
        ClaimKind::AutOddCyclicScan {
            cyclic_max,
            catalog_max,
        } => {
            let cat = cat.expect("aut scan requires a catalog");
            let mut hits: Vec<String> = Vec::new();
            let mut skips = 0usize;
            let mut consider = |spec: String, h: &FiniteGroup| {
                let aut = ctx.aut_of(h);
                match aut.aut_order() {
                    Some(m) if m % 2 == 0 || m == 1 => {}
                    Some(_) => match aut.table_group.as_ref() {
                        Some(t) if is_cyclic(t) => hits.push(spec),
                        Some(_) => {}
                        None => skips += 1,
                    },
                    None => skips += 1,
                }
            };
            for n in 1..=cyclic_max.at(scale) as u32 {
                let spec = format!("C{}", n);
                consider(spec.clone(), &build_spec(&spec, caps)?);
            }
            for e in cat.entries.iter().filter(|e| e.group.order() <= *catalog_max) {
                consider(e.spec.to_string(), &e.group);
            }
            if !hits.is_empty() {
                Ok((
                    ClaimStatus::Fail,
                    format!("groups with Aut cyclic of odd order > 1: {:?}", hits),
                ))
            } else if skips > 0 {
                Ok((ClaimStatus::Unknown, format!("{} entries skipped", skips)))
            } else {
                Ok((
                    ClaimStatus::Pass,
                    "no group in the domain has Aut cyclic of odd order > 1".into(),
                ))
            }
        }
        ClaimKind::AutTargetEmpty {
            target,
            catalog_max,
            allow_skips,
        } => {
            let cat = cat.expect("aut scan requires a catalog");
            let tg = build_spec(target, caps)?;
            let mut hits: Vec<String> = Vec::new();
            let mut skips = 0usize;
            for e in cat
                .entries
                .iter()
                .filter(|e| e.group.order() <= catalog_max.at(scale))
            {
                let aut = ctx.aut_of(&e.group);
                match aut.aut_order() {
                    Some(m) if m != tg.order() => continue,
                    Some(_) => {}
                    None => {
                        skips += 1;
                        continue;
                    }
                }
                match aut.table_group.as_ref() {
                    Some(t) => {
                        if find_isomorphism(t, &tg).is_some() {
                            hits.push(e.spec.to_string());
                        }
                    }
                    None => skips += 1,
                }
            }
            if !hits.is_empty() {
                Ok((
                    ClaimStatus::Fail,
                    format!("found Aut(H) ≅ {} for H ∈ {:?}", target, hits),
                ))
            } else if skips > 0 && !allow_skips {
                Ok((ClaimStatus::Unknown, format!("{} entries skipped", skips)))
            } else {
                Ok((
                    ClaimStatus::Pass,
                    format!(
                        "no constructible H ≤ {} with Aut(H) ≅ {} ({} entries skipped under Aut caps — corroboration)",
                        catalog_max.at(scale),
                        target,
                        skips
                    ),
                ))
            }
        }
        ClaimKind::WreathScan { max_abelian } => {
            let cat = cat.expect("wreath scan requires a catalog");
            let mut checked = 0usize;
            for e in cat
                .entries
                .iter()
                .filter(|e| e.group.order() <= max_abelian.at(scale) && e.group.is_abelian())
            {
                let wr = GroupSpec::Wreath2(Box::new(e.spec.clone()));
                let h = wr.build(caps)?;
                let d = as_group(&h, &crate::constructions::derived(&h));
                if find_isomorphism(&d, &e.group).is_none() {
                    return Ok((
                        ClaimStatus::Fail,
                        format!("D({}) has order {}, expected ≅ {}", wr, d.order(), e.spec),
                    ));
                }
                let report = check_completely_realisable(&e.group, &h, Construction::D, ctx)?;
                if !report.all_true() {
                    return Ok((
                        ClaimStatus::Fail,
                        format!(
                            "complete-D check on ({}, {}) gave ({:?}, {:?}, {:?})",
                            e.spec, wr, report.verdict_i, report.verdict_ii, report.verdict_iii
                        ),
                    ));
                }
                checked += 1;
            }
            Ok((
                ClaimStatus::Pass,
                format!(
                    "all {} abelian groups of order ≤ {} are completely D-realisable via A ≀ C2",
                    checked,
                    max_abelian.at(scale)
                ),
            ))
        }
        ClaimKind::FrattiniCriterionCheck {
            g,
            expect,
            inn_order,
            phi_aut_order,
        } => {
            let gg = build_spec(g, caps)?;
            let c = frattini_criterion(&gg, ctx)?;
            if c.holds != *expect {
                return Ok((
                    ClaimStatus::Fail,
                    format!("criterion holds = {}, expected {}", c.holds, expect),
                ));
            }
            if let Some(n) = inn_order {
                if c.inn_order != *n {
                    return Ok((
                        ClaimStatus::Fail,
                        format!("|Inn| = {}, expected {}", c.inn_order, n),
                    ));
                }
            }
            if let Some(n) = phi_aut_order {
                if c.phi_aut_order != *n {
                    return Ok((
                        ClaimStatus::Fail,
                        format!("|Φ(Aut)| = {}, expected {}", c.phi_aut_order, n),
                    ));
                }
            }
            Ok((
                ClaimStatus::Pass,
                format!(
                    "criterion {} (|Aut| = {}, |Inn| = {}, |Φ(Aut)| = {})",
                    c.holds, c.aut_order, c.inn_order, c.phi_aut_order
                ),
            ))
        }
        ClaimKind::FrattiniOnlyIfScan { catalog_max } => {
            let cat = cat.expect("scan requires a catalog");
            let max = catalog_max.at(scale);
            // Φ images of every catalog group, computed once
            let mut images: Vec<FiniteGroup> = Vec::new();
            for e in cat.entries.iter().filter(|e| e.group.order() <= max) {
                let lat = ctx.lattice_of(&e.group)?;
                images.push(as_group(&e.group, &frattini(&e.group, &lat)));
            }
            let mut witnessed = 0usize;
            let mut unknown = 0usize;
            for e in cat.entries.iter().filter(|e| e.group.order() <= max) {
                let fp = fingerprint(&e.group);
                let has_witness = images.iter().any(|img| {
                    fingerprint(img) == fp && find_isomorphism(img, &e.group).is_some()
                });
                if !has_witness {
                    continue;
                }
                witnessed += 1;
                match frattini_criterion(&e.group, ctx) {
                    Ok(c) => {
                        if !c.holds {
                            return Ok((
                                ClaimStatus::Fail,
                                format!(
                                    "{} is a Φ-image but Inn ⊄ Φ(Aut) (|Inn| = {}, |Φ(Aut)| = {})",
                                    e.spec, c.inn_order, c.phi_aut_order
                                ),
                            ));
                        }
                    }
                    Err(GroupError::CapExceeded(_)) => unknown += 1,
                    Err(e) => return Err(e),
                }
            }
            if unknown > 0 {
                Ok((
                    ClaimStatus::Unknown,
                    format!("{} Φ-witnessed groups, {} criterion evaluations capped", witnessed, unknown),
                ))
            } else {
                Ok((
                    ClaimStatus::Pass,
                    format!(
                        "criterion holds for all {} Φ-witnessed groups in the catalog ≤ {}",
                        witnessed, max
                    ),
                ))
            }
        }
        ClaimKind::CdSuite { catalog_max } => {
            let cat = cat.expect("suite requires a catalog");
            let max = catalog_max.at(scale);
            let mut groups = 0usize;
            for e in cat.entries.iter().filter(|e| e.group.order() <= max) {
                let h = &e.group;
                let lat = ctx.lattice_of(h)?;
                let cd = cd_lattice(h, &lat);
                let m = chermak_delgado_subgroup(h, &lat, &cd)?;
                let fail = |msg: String| Ok((ClaimStatus::Fail, format!("{}: {}", e.spec, msg)));
                if !as_group(h, &m).is_abelian() {
                    return fail("M(H) is not abelian".into());
                }
                if !center(h).members().is_subset_of(m.members()) {
                    return fail("Z(H) ⊄ M(H)".into());
                }
                let aut = ctx.aut_of(h);
                for a in &aut.automorphisms {
                    let image: Vec<Elem> = m.elems().iter().map(|&x| a[x as usize]).collect();
                    if &Subgroup::from_elems(h.order(), image) != &m {
                        return fail("M(H) is not automorphism-invariant".into());
                    }
                }
                // duality closure: K ∈ CD ⟹ C_H(K) ∈ CD and C_H(C_H(K)) = K
                for &ki in &cd.member_ids {
                    let k = &lat.subgroups[ki];
                    let c = centralizer(h, k);
                    let ci = lat
                        .index_of(&c)
                        .ok_or_else(|| GroupError::Internal("centralizer not in lattice".into()))?;
                    if !cd.member_ids.contains(&ci) {
                        return fail("CD lattice not closed under centralizers".into());
                    }
                    if &centralizer(h, &c) != k {
                        return fail("CD duality C(C(K)) = K violated".into());
                    }
                }
                // modular-law spot checks inside CD
                let ids = &cd.member_ids;
                for (i, j) in sample_pairs(ids.len(), 30, h.table_hash()) {
                    let (x, y) = (&lat.subgroups[ids[i]], &lat.subgroups[ids[j]]);
                    let meet = x.intersection(y);
                    let jn = join(h, x, y);
                    let mi = lat.index_of(&meet).unwrap();
                    let ji = lat.index_of(&jn).unwrap();
                    if !ids.contains(&mi) || !ids.contains(&ji) {
                        return fail("CD lattice not closed under meet/join".into());
                    }
                    for &zi in ids.iter().take(8) {
                        let z = &lat.subgroups[zi];
                        if !x.is_subset_of(z) {
                            continue;
                        }
                        let lhs = join(h, x, &y.intersection(z));
                        let rhs = join(h, x, y).intersection(z);
                        if lhs != rhs {
                            return fail("modular law fails in the CD lattice".into());
                        }
                    }
                }
                if h.is_abelian() {
                    if cd.member_ids != vec![lat.whole_id()] {
                        return fail("CD(A) ≠ {A} for abelian A".into());
                    }
                    for k in &lat.subgroups {
                        let kg = as_group(h, k);
                        let klat = ctx.lattice_of(&kg)?;
                        let kcd = cd_lattice(&kg, &klat);
                        let km = chermak_delgado_subgroup(&kg, &klat, &kcd)?;
                        if km.size() != kg.order() {
                            return fail(format!(
                                "M(K) ≠ K for a subgroup K of order {}",
                                kg.order()
                            ));
                        }
                    }
                }
                groups += 1;
            }
            Ok((
                ClaimStatus::Pass,
                format!("all CD invariants hold across {} catalog groups ≤ {}", groups, max),
            ))
        }
        ClaimKind::IsoBruteforce { catalog_max } => {
            let cat = cat.expect("brute-force claim requires a catalog");
            let entries: Vec<_> = cat
                .entries
                .iter()
                .filter(|e| e.group.order() <= *catalog_max)
                .collect();
            let mut pairs = 0usize;
            for i in 0..entries.len() {
                for j in i..entries.len() {
                    let (a, b) = (&entries[i].group, &entries[j].group);
                    if a.order() != b.order() {
                        continue;
                    }
                    let fast = find_isomorphism(a, b).is_some();
                    let brute = brute_force_isomorphic(a, b);
                    if fast != brute {
                        return Ok((
                            ClaimStatus::Fail,
                            format!(
                                "disagreement on ({}, {}): backtracking {} vs brute force {}",
                                entries[i].spec, entries[j].spec, fast, brute
                            ),
                        ));
                    }
                    pairs += 1;
                }
            }
            Ok((
                ClaimStatus::Pass,
                format!("backtracking matches all-bijections brute force on {} pairs", pairs),
            ))
        }
        ClaimKind::PhiRoutes { catalog_max } => {
            let cat = cat.expect("route claim requires a catalog");
            let max = catalog_max.at(scale);
            let mut checked = 0usize;
            for e in cat.entries.iter().filter(|e| e.group.order() <= max) {
                let Some(shortcut) = frattini_pgroup_shortcut(&e.group) else {
                    continue; // not a p-group
                };
                let lat = ctx.lattice_of(&e.group)?;
                let via_maximal = frattini(&e.group, &lat);
                if via_maximal != shortcut {
                    return Ok((
                        ClaimStatus::Fail,
                        format!(
                            "{}: maximal-intersection Φ (order {}) ≠ H′Hᵖ (order {})",
                            e.spec,
                            via_maximal.size(),
                            shortcut.size()
                        ),
                    ));
                }
                checked += 1;
            }
            Ok((
                ClaimStatus::Pass,
                format!("both Φ routes agree on {} p-groups ≤ {}", checked, max),
            ))
        }
        ClaimKind::FittingRoutes { catalog_max } => {
            let cat = cat.expect("route claim requires a catalog");
            let max = catalog_max.at(scale);
            let mut checked = 0usize;
            for e in cat.entries.iter().filter(|e| e.group.order() <= max) {
                let lat = ctx.lattice_of(&e.group)?;
                let a = fitting(&e.group, &lat)?;
                let b = fitting_via_pcores(&e.group, &lat);
                if a != b {
                    return Ok((
                        ClaimStatus::Fail,
                        format!(
                            "{}: normal-nilpotent-join F (order {}) ≠ p-core product (order {})",
                            e.spec,
                            a.size(),
                            b.size()
                        ),
                    ));
                }
                checked += 1;
            }
            Ok((
                ClaimStatus::Pass,
                format!("both Fitting routes agree on {} groups ≤ {}", checked, max),
            ))
        }
        ClaimKind::CatalogGate { catalog_max } => {
            let cat = cat.expect("gate requires a catalog");
            let counts: Vec<usize> = (1..=*catalog_max)
                .map(|o| cat.entries_of_order(o).count())
                .collect();
            let expected = &crate::catalog::CLASS_COUNTS_UP_TO_15[..*catalog_max];
            if counts != expected {
                return Ok((
                    ClaimStatus::Fail,
                    format!("per-order counts {:?}, expected {:?}", counts, expected),
                ));
            }
            if !(1..=*catalog_max).all(|o| cat.is_complete_at(o)) {
                return Ok((
                    ClaimStatus::Fail,
                    "an order ≤ 15 lost its completeness certificate".into(),
                ));
            }
            Ok((
                ClaimStatus::Pass,
                format!("class counts at orders 1..{} match the classification", catalog_max),
            ))
        }
    }
}

/// Existence of an isomorphism by enumerating every bijection that fixes the
/// identity (oracle for the backtracking search; factorial cost).
pub fn brute_force_isomorphic(a: &FiniteGroup, b: &FiniteGroup) -> bool {
    if a.order() != b.order() {
        return false;
    }
    let n = a.order();
    if n == 1 {
        return true;
    }
    let mut map: Vec<Elem> = vec![0; n];
    let mut used = vec![false; n];
    used[0] = true;
    fn rec(
        a: &FiniteGroup,
        b: &FiniteGroup,
        map: &mut Vec<Elem>,
        used: &mut Vec<bool>,
        pos: usize,
    ) -> bool {
        let n = a.order();
        if pos == n {
            for x in 0..n as Elem {
                for y in 0..n as Elem {
                    if map[a.mul(x, y) as usize] != b.mul(map[x as usize], map[y as usize]) {
                        return false;
                    }
                }
            }
            return true;
        }
        for t in 1..n as Elem {
            if used[t as usize] {
                continue;
            }
            map[pos] = t;
            used[t as usize] = true;
            // partial consistency against already-mapped prefix
            let consistent = (0..pos as Elem).all(|x| {
                let p = a.mul(x, pos as Elem);
                let q = a.mul(pos as Elem, x);
                ((p as usize) > pos || map[p as usize] == b.mul(map[x as usize], t))
                    && ((q as usize) > pos || map[q as usize] == b.mul(t, map[x as usize]))
            });
            if consistent && rec(a, b, map, used, pos + 1) {
                return true;
            }
            used[t as usize] = false;
        }
        false
    }
    rec(a, b, &mut map, &mut used, 1)
}
