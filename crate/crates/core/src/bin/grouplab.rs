use clap::{Parser, Subcommand, ValueEnum};
use grouplab::catalog::Completeness;
use grouplab::constructions::{
    cd_lattice, chermak_delgado_subgroup, derived, fitting, frattini, Construction,
};
use grouplab::group::{as_group, center};
use grouplab::iso::fingerprint;
use grouplab::realis::{find_complete_realisations, find_realisations, frattini_criterion};
use grouplab::spec::GroupSpec;
use grouplab::verify::{parse_manifest, provide_catalog, run_claims, ClaimStatus, Scale, CLAIMS_JSON};
use grouplab::{Caps, Ctx, GroupError};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_NEGATIVE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAP: u8 = 3;
const EXIT_NEGATIVE_WITH_SKIPS: u8 = 4;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Parser)]
#[command(
    name = "grouplab",
    version,
    about = "Finite-group computation kernel and realisability search"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Output format
    #[arg(long, global = true, value_enum, default_value = "table")]
    format: Format,
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Catalog cache directory
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,
    /// Largest group order the engine will materialize
    #[arg(long, global = true)]
    order_cap: Option<usize>,
    /// Largest order checked for associativity exhaustively
    #[arg(long, global = true)]
    assoc_exhaustive_limit: Option<usize>,
    /// Automorphism enumeration map cap
    #[arg(long, global = true)]
    aut_map_cap: Option<usize>,
    /// Largest |Aut| materialized as a Cayley table
    #[arg(long, global = true)]
    aut_table_cap: Option<usize>,
    /// Subgroup enumeration cap
    #[arg(long, global = true)]
    subgroup_cap: Option<usize>,
    /// Homomorphism enumeration budget per (N, K) pair
    #[arg(long, global = true)]
    action_budget: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a group and print its basic invariants
    Show { spec: String },
    /// Automorphism group summary
    Aut { spec: String },
    /// Subgroup lattice summary (json format dumps the lattice)
    Subgroups { spec: String },
    /// Chermak-Delgado lattice and minimal member
    Cd { spec: String },
    /// Search the catalog for H with f(H) isomorphic to the target
    Search {
        #[arg(long)]
        target: String,
        #[arg(long)]
        f: String,
        #[arg(long)]
        max_order: usize,
    },
    /// Search for completely f-realisable witnesses of the target
    Complete {
        #[arg(long)]
        target: String,
        #[arg(long)]
        f: String,
        #[arg(long)]
        max_order: usize,
    },
    /// Evaluate the Frattini realisability criterion Inn(G) ⊆ Φ(Aut(G))
    Criterion { spec: String },
    /// Build (and optionally cache) the catalog up to an order
    Catalog {
        #[arg(long)]
        max_order: usize,
    },
    /// Run the claims manifest end-to-end
    VerifyPaper {
        #[arg(long, default_value = "small")]
        scale: String,
        /// Run only the claim with this id
        #[arg(long)]
        only: Option<String>,
    },
}

fn caps_from(cli: &Cli) -> Caps {
    let mut caps = Caps::default();
    if let Some(v) = cli.order_cap {
        caps.order_cap = v;
    }
    if let Some(v) = cli.assoc_exhaustive_limit {
        caps.assoc_exhaustive_limit = v;
    }
    if let Some(v) = cli.aut_map_cap {
        caps.aut_map_cap = v;
    }
    if let Some(v) = cli.aut_table_cap {
        caps.aut_table_cap = v;
    }
    if let Some(v) = cli.subgroup_cap {
        caps.subgroup_cap = v;
    }
    if let Some(v) = cli.action_budget {
        caps.action_budget = v;
    }
    caps
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e);
            let code = match e {
                GroupError::OrderCap { .. } | GroupError::CapExceeded(_) => EXIT_CAP,
                _ => EXIT_USAGE,
            };
            ExitCode::from(code)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, GroupError> {
    let caps = caps_from(cli);
    let ctx = Ctx::new(caps.clone());
    let json = cli.format == Format::Json;
    match &cli.cmd {
        Cmd::Show { spec } => {
            let g = GroupSpec::parse(spec)?.build(&caps)?;
            let fp = fingerprint(&g);
            let lat = ctx.lattice_of(&g)?;
            let z = center(&g);
            let d = derived(&g);
            let phi = frattini(&g, &lat);
            let fit = fitting(&g, &lat)?;
            let cd = cd_lattice(&g, &lat);
            let m = chermak_delgado_subgroup(&g, &lat, &cd)?;
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "spec": g.spec(),
                        "order": g.order(),
                        "abelian": g.is_abelian(),
                        "exponent": g.exponent(),
                        "element_order_histogram": fp.element_order_histogram,
                        "conjugacy_classes": fp.conjugacy_class_count,
                        "center_order": z.size(),
                        "derived_order": d.size(),
                        "frattini_order": phi.size(),
                        "fitting_order": fit.size(),
                        "cd_minimal_order": m.size(),
                        "cd_members": cd.member_ids.len(),
                        "table_hash": format!("{:016x}", g.table_hash()),
                    }))?
                );
            } else {
                println!("spec             {}", g.spec());
                println!("order            {}", g.order());
                println!("abelian          {}", g.is_abelian());
                println!("exponent         {}", g.exponent());
                println!("|Z(G)|           {}", z.size());
                println!("|D(G)|           {}", d.size());
                println!("|Phi(G)|         {}", phi.size());
                println!("|F(G)|           {}", fit.size());
                println!("|M(G)|           {}", m.size());
                println!("CD members       {}", cd.member_ids.len());
                println!("subgroups        {}", lat.subgroups.len());
            }
            Ok(EXIT_OK)
        }
        Cmd::Aut { spec } => {
            let g = GroupSpec::parse(spec)?.build(&caps)?;
            let aut = ctx.aut_of(&g);
            match aut.aut_order() {
                None => {
                    println!("Aut({}): enumeration exceeds the map cap", g.spec());
                    Ok(EXIT_CAP)
                }
                Some(n) => {
                    let (abelian, inn) = match aut.table_group.as_ref() {
                        Some(t) => (
                            Some(t.is_abelian()),
                            aut.inner_subgroup().map(|s| s.size()),
                        ),
                        None => (None, None),
                    };
                    if json {
                        println!(
                            "{}",
                            serde_json::to_string_pretty(&json!({
                                "spec": g.spec(),
                                "aut_order": n,
                                "table_materialized": aut.table_group.is_some(),
                                "abelian": abelian,
                                "inn_order": inn,
                            }))?
                        );
                    } else {
                        println!("|Aut({})| = {}", g.spec(), n);
                        if let Some(a) = abelian {
                            println!("abelian          {}", a);
                        }
                        if let Some(i) = inn {
                            println!("|Inn|            {}", i);
                        }
                        if aut.table_group.is_none() {
                            println!("(table exceeds the table cap)");
                        }
                    }
                    Ok(EXIT_OK)
                }
            }
        }
        Cmd::Subgroups { spec } => {
            let g = GroupSpec::parse(spec)?.build(&caps)?;
            let lat = ctx.lattice_of(&g)?;
            if json {
                let dump = grouplab::lattice::LatticeDump::from(lat.as_ref());
                println!("{}", serde_json::to_string_pretty(&dump)?);
            } else {
                println!("subgroups        {}", lat.subgroups.len());
                println!("conjugacy classes {}", lat.conjugacy_classes.len());
                println!("normal           {}", lat.normal_ids.len());
                println!("maximal          {}", lat.maximal_ids.len());
                let mut by_size: Vec<(usize, usize)> = Vec::new();
                for s in &lat.subgroups {
                    match by_size.iter_mut().find(|(sz, _)| *sz == s.size()) {
                        Some((_, c)) => *c += 1,
                        None => by_size.push((s.size(), 1)),
                    }
                }
                for (sz, c) in by_size {
                    println!("  order {:>4}: {}", sz, c);
                }
            }
            Ok(EXIT_OK)
        }
        Cmd::Cd { spec } => {
            let g = GroupSpec::parse(spec)?.build(&caps)?;
            let lat = ctx.lattice_of(&g)?;
            let cd = cd_lattice(&g, &lat);
            let m = chermak_delgado_subgroup(&g, &lat, &cd)?;
            let sizes: Vec<usize> = cd
                .member_ids
                .iter()
                .map(|&i| lat.subgroups[i].size())
                .collect();
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "spec": g.spec(),
                        "max_measure": cd.max_measure,
                        "member_orders": sizes,
                        "minimal_member_order": m.size(),
                        "minimal_member_abelian": as_group(&g, &m).is_abelian(),
                    }))?
                );
            } else {
                println!("max measure      {}", cd.max_measure);
                println!("members          {} (orders {:?})", sizes.len(), sizes);
                println!("M(G) order       {}", m.size());
            }
            Ok(EXIT_OK)
        }
        Cmd::Search {
            target,
            f,
            max_order,
        } => {
            let g = GroupSpec::parse(target)?.build(&caps)?;
            let f = Construction::parse(f)?;
            let cat = provide_catalog(*max_order, &ctx, cli.catalog.as_deref())?;
            let r = find_realisations(&g, f, &cat.slice(*max_order), &ctx)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&r)?);
            } else {
                for w in &r.witnesses {
                    println!("{}", w);
                }
                for s in &r.skips {
                    eprintln!("skipped {} (order {}): {}", s.spec, s.order, s.reason);
                }
                eprintln!(
                    "{} witness(es) ≤ {}; orders ≤ {} certified complete",
                    r.witnesses.len(),
                    max_order,
                    r.complete_prefix
                );
            }
            Ok(if !r.witnesses.is_empty() {
                EXIT_OK
            } else if r.skips.is_empty() {
                EXIT_NEGATIVE
            } else {
                EXIT_NEGATIVE_WITH_SKIPS
            })
        }
        Cmd::Complete {
            target,
            f,
            max_order,
        } => {
            let g = GroupSpec::parse(target)?.build(&caps)?;
            let f = Construction::parse(f)?;
            let cat = provide_catalog(*max_order, &ctx, cli.catalog.as_deref())?;
            let r = find_complete_realisations(&g, f, &cat.slice(*max_order), &ctx)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&r)?);
            } else {
                for w in &r.passing {
                    println!("{}", w);
                }
                eprintln!(
                    "{} completely-realising witness(es) among {} realisations ≤ {}; {} skips",
                    r.passing.len(),
                    r.reports.len(),
                    max_order,
                    r.skips.len()
                );
            }
            let any_unknown = !r.skips.is_empty()
                || r.reports.iter().any(|rep| {
                    rep.verdict_i == grouplab::realis::Verdict::Unknown
                        || rep.verdict_ii == grouplab::realis::Verdict::Unknown
                        || rep.verdict_iii == grouplab::realis::Verdict::Unknown
                });
            Ok(if !r.passing.is_empty() {
                EXIT_OK
            } else if any_unknown {
                EXIT_NEGATIVE_WITH_SKIPS
            } else {
                EXIT_NEGATIVE
            })
        }
        Cmd::Criterion { spec } => {
            let g = GroupSpec::parse(spec)?.build(&caps)?;
            let c = frattini_criterion(&g, &ctx)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&c)?);
            } else {
                println!(
                    "Inn ⊆ Φ(Aut): {} (|Aut| = {}, |Inn| = {}, |Φ(Aut)| = {})",
                    c.holds, c.aut_order, c.inn_order, c.phi_aut_order
                );
            }
            Ok(if c.holds { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Cmd::Catalog { max_order } => {
            let cat = provide_catalog(*max_order, &ctx, cli.catalog.as_deref())?;
            if json {
                let per_order: Vec<_> = (1..=*max_order)
                    .map(|o| {
                        json!({
                            "order": o,
                            "classes": cat.entries_of_order(o).count(),
                            "complete": cat.is_complete_at(o),
                        })
                    })
                    .collect();
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "max_order": cat.max_order,
                        "entries": cat.entries.len(),
                        "per_order": per_order,
                        "notes": cat.notes,
                    }))?
                );
            } else {
                println!("{} entries up to order {}", cat.entries.len(), cat.max_order);
                for o in 1..=*max_order {
                    let n = cat.entries_of_order(o).count();
                    if n == 0 {
                        continue;
                    }
                    let flag = match cat.completeness[o - 1] {
                        Completeness::Complete => "complete",
                        Completeness::ConstructibleOnly => "constructible",
                    };
                    println!("  order {:>4}: {:>4} classes ({})", o, n, flag);
                }
                for n in &cat.notes {
                    eprintln!("note: {}", n);
                }
            }
            Ok(EXIT_OK)
        }
        Cmd::VerifyPaper { scale, only } => {
            let scale = Scale::parse(scale)?;
            let mut claims = parse_manifest(CLAIMS_JSON)?;
            if let Some(id) = only {
                claims.retain(|c| &c.id == id);
                if claims.is_empty() {
                    return Err(GroupError::SpecParse(format!("no claim with id '{}'", id)));
                }
            }
            let outcomes = run_claims(&claims, scale, &ctx, cli.catalog.as_deref())?;
            let mut fails = 0usize;
            if json {
                println!("{}", serde_json::to_string_pretty(&outcomes)?);
                fails = outcomes
                    .iter()
                    .filter(|o| o.status == ClaimStatus::Fail)
                    .count();
            } else {
                for o in &outcomes {
                    println!(
                        "[{}] criterion {:>2} {} ({:.1}s): {}",
                        o.status, o.criterion, o.id, o.seconds, o.detail
                    );
                    if o.status == ClaimStatus::Fail {
                        fails += 1;
                    }
                }
                let unknowns = outcomes
                    .iter()
                    .filter(|o| o.status == ClaimStatus::Unknown)
                    .count();
                println!(
                    "{} claims: {} passed, {} failed, {} unknown",
                    outcomes.len(),
                    outcomes.len() - fails - unknowns,
                    fails,
                    unknowns
                );
            }
            Ok(if fails == 0 { EXIT_OK } else { EXIT_NEGATIVE })
        }
    }
}
