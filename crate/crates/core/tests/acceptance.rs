//! Acceptance gate: one test per criterion, each running its claims from the
//! manifest at full scale and printing a PASS/FAIL line. The shared catalog is
//! built once for the whole binary.

use grouplab::catalog::Catalog;
use grouplab::verify::{
    catalog_need, parse_manifest, provide_catalog, run_claims_with_catalog, Claim, ClaimStatus,
    Scale, CLAIMS_JSON,
};
use grouplab::{Caps, Ctx};
use std::sync::OnceLock;

struct Shared {
    ctx: Ctx,
    claims: Vec<Claim>,
    catalog: Option<Catalog>,
}

static SHARED: OnceLock<Shared> = OnceLock::new();

fn shared() -> &'static Shared {
    SHARED.get_or_init(|| {
        let ctx = Ctx::new(Caps::default());
        let claims = parse_manifest(CLAIMS_JSON).expect("manifest parses");
        let needed = claims
            .iter()
            .map(|c| catalog_need(c, Scale::Full))
            .max()
            .unwrap_or(0);
        let catalog = if needed > 0 {
            Some(provide_catalog(needed, &ctx, None).expect("catalog builds"))
        } else {
            None
        };
        Shared {
            ctx,
            claims,
            catalog,
        }
    })
}

fn run_criterion(n: u32) {
    let s = shared();
    let subset: Vec<Claim> = s
        .claims
        .iter()
        .filter(|c| c.criterion == n)
        .cloned()
        .collect();
    assert!(!subset.is_empty(), "no claims tagged for criterion {}", n);
    let outcomes =
        run_claims_with_catalog(&subset, Scale::Full, &s.ctx, s.catalog.as_ref()).unwrap();
    let ok = outcomes.iter().all(|o| o.status == ClaimStatus::Pass);
    println!(
        "criterion {:>2}: {}",
        n,
        if ok { "PASS" } else { "FAIL" }
    );
    for o in &outcomes {
        println!("  [{}] {} ({:.1}s): {}", o.status, o.id, o.seconds, o.detail);
    }
    assert!(
        ok,
        "criterion {} has non-passing claims: {}",
        n,
        outcomes
            .iter()
            .filter(|o| o.status != ClaimStatus::Pass)
            .map(|o| format!("[{}] {}: {}", o.status, o.id, o.detail))
            .collect::<Vec<_>>()
            .join("; ")
    );
}

#[test]
fn criterion_01_aut_witnesses() {
    run_criterion(1);
}

#[test]
fn criterion_02_complete_aut_checks() {
    run_criterion(2);
}

#[test]
fn criterion_03_aut_classification_scan() {
    run_criterion(3);
}

#[test]
fn criterion_04_derived_s4() {
    run_criterion(4);
}

#[test]
fn criterion_05_abelian_wreath_scale() {
    run_criterion(5);
}

#[test]
fn criterion_06_split_verdict_a5() {
    run_criterion(6);
}

#[test]
fn criterion_07_q8_integrals() {
    run_criterion(7);
}

#[test]
fn criterion_08_frattini_lifts() {
    run_criterion(8);
}

#[test]
fn criterion_09_frattini_criterion() {
    run_criterion(9);
}

#[test]
fn criterion_10_chermak_delgado_suite() {
    run_criterion(10);
}

#[test]
fn criterion_11_oracle_equivalence() {
    run_criterion(11);
}

#[test]
fn criterion_12_catalog_completeness_gate() {
    run_criterion(12);
}
