//! Command-line front end: profile analysis, mechanism synthesis, theorem
//! verification, and report emission. Reports are JSON by default; `--pretty`
//! switches to an indented human-readable rendering.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use matchsym::generalized::{
    all_generalized_matchings, container_gen, embed_phi, is_pareto_gen, is_stable_gen,
    GeneralizedProfile, GeneralizedSpace,
};
use matchsym::matching::{blocking_pairs, delta, envy_total, gale_shapley};
use matchsym::mechanism::{c_u, resolve_at, synthesize, MechanismTable, Selector, Synthesis};
use matchsym::profile::{orbit_transversal, profile_count, ProfileSpace};
use matchsym::witness::{run_theorem_suite, SuiteStatus, TheoremId};
use matchsym::{Matching, MechanismId, PermGroup, Permutation, PreferenceProfile, Side};

#[derive(Parser)]
#[command(
    name = "matchsym",
    version,
    about = "Exact two-sided matching mechanisms under permutation symmetry"
)]
struct Cli {
    /// Worker threads for profile scans (default: MATCHSYM_JOBS, then all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Human-readable output instead of JSON
    #[arg(long, global = true)]
    pretty: bool,

    /// Write the report to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ProfileArg {
    /// Path to a profile file ("n=<k>" then one "<z>: <ranking>" line each)
    #[arg(long)]
    profile: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Stabilizer, mechanism sets and envy table of one profile
    Analyze {
        #[command(flatten)]
        profile: ProfileArg,
        /// Symmetry group: gstar | g | gw | gm | trivial | "(1 2);(3 4)..."
        #[arg(long, default_value = "gstar")]
        group: String,
    },
    /// The U-stabilizer of a profile
    Stabilizer {
        #[command(flatten)]
        profile: ProfileArg,
        #[arg(long, default_value = "gstar")]
        group: String,
    },
    /// The container C^U(p): matchings commuting with the stabilizer
    Cu {
        #[command(flatten)]
        profile: ProfileArg,
        #[arg(long, default_value = "gstar")]
        group: String,
    },
    /// Deferred acceptance with the chosen proposing side
    Gs {
        #[command(flatten)]
        profile: ProfileArg,
        /// Proposing side: women | men
        #[arg(long)]
        side: String,
    },
    /// Evaluate a named mechanism, a synthesized table, or a lazily resolved
    /// symmetric refinement on a profile
    Mech {
        #[command(flatten)]
        profile: ProfileArg,
        /// Mechanism id (TO, ST, PO, WPO, MO, GS, GS_w, GS_m, SE, ES)
        #[arg(long, conflicts_with_all = ["table", "group"])]
        mechanism: Option<String>,
        /// Path to a mechanism table file
        #[arg(long, conflicts_with = "group")]
        table: Option<PathBuf>,
        /// Lazy mode: symmetry group for on-demand orbit resolution
        /// (needed for n >= 4, where no full transversal is built)
        #[arg(long, requires = "constraint")]
        group: Option<String>,
        /// Lazy mode: constraint mechanism id
        #[arg(long, requires = "group")]
        constraint: Option<String>,
        /// Lazy mode selector: lex | min-envy | wpo-sym
        #[arg(long, default_value = "lex")]
        selector: String,
        /// Matching for the wpo-sym selector
        #[arg(long)]
        phi: Option<String>,
    },
    /// Synthesize a resolute U-symmetric refinement over an orbit transversal
    Synth {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        group: String,
        /// Constraint mechanism the refinement must stay inside
        #[arg(long, default_value = "TO")]
        constraint: String,
        /// Selector: lex | min-envy | wpo-sym
        #[arg(long, default_value = "lex")]
        selector: String,
        /// Matching for the wpo-sym selector (default: (1 n+1)(2 n+2)...)
        #[arg(long)]
        phi: Option<String>,
        /// Write the synthesized table to this file
        #[arg(long)]
        out_table: Option<PathBuf>,
    },
    /// Run one theorem verification suite
    Verify {
        /// Theorem id: T2, T3, T4, T6, T7, T8, T9-support
        #[arg(long)]
        theorem: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Orbit partition of the individuals under a group
    Orbits {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        group: String,
    },
    /// Profile-space counts and, for n <= 3, orbit counts under a group
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        group: Option<String>,
        /// List this many profiles from the lexicographic stream
        #[arg(long)]
        limit: Option<u64>,
    },
    /// Outside-option model commands
    #[command(subcommand)]
    Gen(GenCommand),
}

#[derive(Subcommand)]
enum GenCommand {
    /// Count and list the generalized matchings
    Matchings {
        #[arg(long)]
        n: usize,
    },
    /// Stability/Pareto analysis of a generalized profile
    Analyze {
        #[arg(long)]
        profile: PathBuf,
        #[arg(long, default_value = "gstar")]
        group: String,
    },
    /// Embed an ordinary profile into the outside-option model
    Embed {
        #[arg(long)]
        profile: PathBuf,
    },
    /// Exploratory container scan over the generalized profile space (n=2);
    /// reports observations only, no existence claim
    Explore {
        #[arg(long)]
        n: usize,
    },
}

enum Outcome {
    Report(Value),
    /// A report plus the refuted-invariant signal (exit code 2).
    Refuted(Value),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let jobs = cli.jobs.or_else(|| {
        std::env::var("MATCHSYM_JOBS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(k) = jobs {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build_global();
    }
    match run(&cli.command) {
        Ok(outcome) => {
            let (value, code) = match outcome {
                Outcome::Report(v) => (v, ExitCode::SUCCESS),
                Outcome::Refuted(v) => (v, ExitCode::from(2)),
            };
            let rendered = if cli.pretty {
                render_pretty(&value)
            } else {
                let mut s = serde_json::to_string_pretty(&value).expect("report serializes");
                s.push('\n');
                s
            };
            match &cli.out {
                Some(path) => {
                    if let Err(e) = fs::write(path, rendered) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(1);
                    }
                }
                None => print!("{rendered}"),
            }
            code
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(command: &Command) -> Result<Outcome, String> {
    match command {
        Command::Analyze { profile, group } => analyze(profile, group),
        Command::Stabilizer { profile, group } => stabilizer(profile, group),
        Command::Cu { profile, group } => container(profile, group),
        Command::Gs { profile, side } => gs(profile, side),
        Command::Mech {
            profile,
            mechanism,
            table,
            group,
            constraint,
            selector,
            phi,
        } => mech(
            profile,
            mechanism.as_deref(),
            table.as_deref(),
            group.as_deref(),
            constraint.as_deref(),
            selector,
            phi.as_deref(),
        ),
        Command::Synth {
            n,
            group,
            constraint,
            selector,
            phi,
            out_table,
        } => synth(
            *n,
            group,
            constraint,
            selector,
            phi.as_deref(),
            out_table.as_deref(),
        ),
        Command::Verify { theorem, n, seed } => verify(theorem, *n, *seed),
        Command::Orbits { n, group } => orbits(*n, group),
        Command::Enumerate { n, group, limit } => enumerate(*n, group.as_deref(), *limit),
        Command::Gen(genc) => match genc {
            GenCommand::Matchings { n } => gen_matchings(*n),
            GenCommand::Analyze { profile, group } => gen_analyze(profile, group),
            GenCommand::Embed { profile } => gen_embed(profile),
            GenCommand::Explore { n } => gen_explore(*n),
        },
    }
}

fn fail<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn load_profile(path: &std::path::Path) -> Result<PreferenceProfile, String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    PreferenceProfile::parse(&text).map_err(fail)
}

fn parse_group(n: usize, spec: &str) -> Result<PermGroup, String> {
    match spec.trim().to_ascii_lowercase().as_str() {
        "gstar" | "g*" => return Ok(PermGroup::gstar(n)),
        "g" => return Ok(PermGroup::whole_g(n)),
        "gw" | "g_w" => return Ok(PermGroup::g_w(n)),
        "gm" | "g_m" => return Ok(PermGroup::g_m(n)),
        "trivial" | "id" => return Ok(PermGroup::trivial(n)),
        _ => {}
    }
    let gens = spec
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| Permutation::parse(n, s))
        .collect::<matchsym::Result<Vec<_>>>()
        .map_err(fail)?;
    for g in &gens {
        if !g.is_in_gstar() {
            return Err(format!(
                "generator {g} does not preserve the partition {{W, M}}"
            ));
        }
    }
    PermGroup::generate(n, &gens).map_err(fail)
}

fn matching_entry(p: &PreferenceProfile, m: &Matching) -> Value {
    json!({
        "matching": m.to_string(),
        "delta": delta(p, m),
        "e": envy_total(p, m),
    })
}

fn mechanism_report(p: &PreferenceProfile, id: MechanismId) -> Value {
    let set = id.evaluate(p);
    Value::Array(set.iter().map(|m| matching_entry(p, m)).collect())
}

fn group_value(u: &PermGroup) -> Value {
    json!({
        "order": u.order(),
        "generators": u.generating_set().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
    })
}

fn analyze(profile: &ProfileArg, group: &str) -> Result<Outcome, String> {
    let p = load_profile(&profile.profile)?;
    let u = parse_group(p.n(), group)?;
    let stab = p.stabilizer(&u).map_err(fail)?;
    let container = c_u(&p, &u).map_err(fail)?;
    let mut mechanisms = serde_json::Map::new();
    for id in MechanismId::ALL {
        mechanisms.insert(id.to_string(), mechanism_report(&p, id));
    }
    Ok(Outcome::Report(json!({
        "command": "analyze",
        "n": p.n(),
        "profile": p.inline(),
        "group": group_value(&u),
        "stabilizer": stab.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
        "stabilizer_order": stab.order(),
        "container": container.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
        "mechanisms": Value::Object(mechanisms),
    })))
}

fn stabilizer(profile: &ProfileArg, group: &str) -> Result<Outcome, String> {
    let p = load_profile(&profile.profile)?;
    let u = parse_group(p.n(), group)?;
    let stab = p.stabilizer(&u).map_err(fail)?;
    Ok(Outcome::Report(json!({
        "command": "stabilizer",
        "n": p.n(),
        "profile": p.inline(),
        "group": group_value(&u),
        "stabilizer": stab.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
        "stabilizer_order": stab.order(),
        "semiregular": stab.is_semiregular(),
    })))
}

fn container(profile: &ProfileArg, group: &str) -> Result<Outcome, String> {
    let p = load_profile(&profile.profile)?;
    let u = parse_group(p.n(), group)?;
    let stab = p.stabilizer(&u).map_err(fail)?;
    let container = c_u(&p, &u).map_err(fail)?;
    Ok(Outcome::Report(json!({
        "command": "cu",
        "n": p.n(),
        "profile": p.inline(),
        "group": group_value(&u),
        "stabilizer_order": stab.order(),
        "container": container.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
        "container_empty": container.is_empty(),
    })))
}

fn gs(profile: &ProfileArg, side: &str) -> Result<Outcome, String> {
    let p = load_profile(&profile.profile)?;
    let side: Side = side.parse().map_err(fail)?;
    let m = gale_shapley(&p, side);
    Ok(Outcome::Report(json!({
        "command": "gs",
        "n": p.n(),
        "profile": p.inline(),
        "side": match side { Side::Women => "women", Side::Men => "men" },
        "matching": m.to_string(),
        "delta": delta(&p, &m),
        "e": envy_total(&p, &m),
        "blocking_pairs": blocking_pairs(&p, &m),
    })))
}

fn parse_selector(n: usize, selector: &str, phi: Option<&str>) -> Result<Selector, String> {
    match selector.to_ascii_lowercase().as_str() {
        "lex" | "lexmin" => Ok(Selector::LexMin),
        "min-envy" | "minenvy" => Ok(Selector::MinEnvy),
        "wpo-sym" | "wposym" => {
            let phi = match phi {
                Some(s) => Matching::parse(n, s).map_err(fail)?,
                None => Matching::canonical_least(n),
            };
            Ok(Selector::WpoSymmetric(phi))
        }
        other => Err(format!("unknown selector {other:?}")),
    }
}

#[allow(clippy::too_many_arguments)]
fn mech(
    profile: &ProfileArg,
    mechanism: Option<&str>,
    table: Option<&std::path::Path>,
    group: Option<&str>,
    constraint: Option<&str>,
    selector: &str,
    phi: Option<&str>,
) -> Result<Outcome, String> {
    let p = load_profile(&profile.profile)?;
    match (mechanism, table, group, constraint) {
        (Some(id), None, None, None) => {
            let id: MechanismId = id.parse().map_err(fail)?;
            Ok(Outcome::Report(json!({
                "command": "mech",
                "n": p.n(),
                "profile": p.inline(),
                "mechanism": id.to_string(),
                "matchings": mechanism_report(&p, id),
            })))
        }
        (None, Some(path), None, None) => {
            let text = fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let table = MechanismTable::load(&text).map_err(fail)?;
            let m = table.evaluate(&p).map_err(fail)?;
            Ok(Outcome::Report(json!({
                "command": "mech",
                "n": p.n(),
                "profile": p.inline(),
                "mechanism": format!("table:{}", path.display()),
                "group": group_value(table.group()),
                "orbit_count": table.len(),
                "matchings": [matching_entry(&p, &m)],
            })))
        }
        (None, None, Some(spec), Some(constraint)) => {
            let u = parse_group(p.n(), spec)?;
            let constraint: MechanismId = constraint.parse().map_err(fail)?;
            let selector = parse_selector(p.n(), selector, phi)?;
            let resolved = resolve_at(&u, &constraint, &selector, &p).map_err(fail)?;
            let mut report = json!({
                "command": "mech",
                "n": p.n(),
                "profile": p.inline(),
                "mechanism": format!("lazy:{constraint}"),
                "group": group_value(&u),
            });
            match resolved {
                Some(m) => report["matchings"] = json!([matching_entry(&p, &m)]),
                None => {
                    report["matchings"] = json!([]);
                    report["orbit_infeasible"] =
                        json!("constraint and container do not meet on this orbit");
                }
            }
            Ok(Outcome::Report(report))
        }
        _ => Err("pass exactly one of --mechanism, --table, or --group with --constraint".into()),
    }
}

fn synth(
    n: usize,
    group: &str,
    constraint: &str,
    selector: &str,
    phi: Option<&str>,
    out_table: Option<&std::path::Path>,
) -> Result<Outcome, String> {
    let u = parse_group(n, group)?;
    let constraint: MechanismId = constraint.parse().map_err(fail)?;
    let selector = parse_selector(n, selector, phi)?;
    match synthesize(&u, &constraint, &selector, n).map_err(fail)? {
        Synthesis::Table(table) => {
            let text = table.to_text();
            let mut report = json!({
                "command": "synth",
                "n": n,
                "result": "synthesized",
                "constraint": constraint.to_string(),
                "group": group_value(&u),
                "orbit_count": table.len(),
            });
            match out_table {
                Some(path) => {
                    fs::write(path, &text)
                        .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
                    report["table_file"] = json!(path.display().to_string());
                }
                None => {
                    report["table"] = json!(text);
                }
            }
            Ok(Outcome::Report(report))
        }
        Synthesis::Infeasible { witness } => Ok(Outcome::Report(json!({
            "command": "synth",
            "n": n,
            "result": "infeasible",
            "constraint": constraint.to_string(),
            "group": group_value(&u),
            "witness_profile": witness.inline(),
            "witness_container": c_u(&witness, &u)
                .map_err(fail)?
                .iter()
                .map(|m| m.to_string())
                .collect::<Vec<_>>(),
        }))),
    }
}

fn verify(theorem: &str, n: usize, seed: u64) -> Result<Outcome, String> {
    let id: TheoremId = theorem.parse().map_err(fail)?;
    let report = run_theorem_suite(id, n, seed);
    let refuted = report.status == SuiteStatus::Refuted;
    let value = serde_json::to_value(&report).map_err(fail)?;
    if refuted {
        Ok(Outcome::Refuted(value))
    } else {
        Ok(Outcome::Report(value))
    }
}

fn orbits(n: usize, group: &str) -> Result<Outcome, String> {
    let u = parse_group(n, group)?;
    Ok(Outcome::Report(json!({
        "command": "orbits",
        "n": n,
        "group": group_value(&u),
        "within_g": u.within_g(),
        "within_gstar": u.within_gstar(),
        "semiregular": u.is_semiregular(),
        "orbits": u.orbits(),
    })))
}

fn enumerate(n: usize, group: Option<&str>, limit: Option<u64>) -> Result<Outcome, String> {
    let total = profile_count(n);
    let mut report = json!({
        "command": "enumerate",
        "n": n,
        "profiles": total.to_string(),
    });
    if let Some(limit) = limit {
        let space = ProfileSpace::new(n).map_err(fail)?;
        let take = limit.min(space.count());
        let listed: Vec<String> = (0..take).map(|i| space.get(i).inline()).collect();
        report["listed"] = json!(listed);
    }
    if let Some(spec) = group {
        let u = parse_group(n, spec)?;
        report["group"] = group_value(&u);
        if n <= 3 {
            let reps = orbit_transversal(&u, n).map_err(fail)?;
            report["orbit_count"] = json!(reps.len());
        } else {
            report["orbit_count"] = json!(format!(
                "exhaustive transversal refused for n={n} ({total} profiles)"
            ));
        }
    }
    Ok(Outcome::Report(report))
}

fn gen_matchings(n: usize) -> Result<Outcome, String> {
    let all = all_generalized_matchings(n);
    Ok(Outcome::Report(json!({
        "command": "gen matchings",
        "n": n,
        "count": all.len(),
        "matchings": all.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
    })))
}

fn gen_analyze(path: &std::path::Path, group: &str) -> Result<Outcome, String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let p = GeneralizedProfile::parse(&text).map_err(fail)?;
    let u = parse_group(p.n(), group)?;
    let stab = p.stabilizer(&u).map_err(fail)?;
    let all = all_generalized_matchings(p.n());
    let stable: Vec<String> = all
        .iter()
        .filter(|m| is_stable_gen(&p, m))
        .map(|m| m.to_string())
        .collect();
    let pareto: Vec<String> = all
        .iter()
        .filter(|m| is_pareto_gen(&p, m))
        .map(|m| m.to_string())
        .collect();
    Ok(Outcome::Report(json!({
        "command": "gen analyze",
        "n": p.n(),
        "group": group_value(&u),
        "stabilizer_order": stab.order(),
        "stable": stable,
        "pareto": pareto,
    })))
}

fn gen_embed(path: &std::path::Path) -> Result<Outcome, String> {
    let p = load_profile(path)?;
    let pbar = embed_phi(&p);
    Ok(Outcome::Report(json!({
        "command": "gen embed",
        "n": p.n(),
        "profile": p.inline(),
        "embedded": pbar.to_text(),
    })))
}

fn gen_explore(n: usize) -> Result<Outcome, String> {
    let space = GeneralizedSpace::new(n).map_err(fail)?;
    let gstar = PermGroup::gstar(n);
    let mut empty = 0u64;
    let mut min_size = usize::MAX;
    let mut nontrivial_stabs = 0u64;
    for p in space.iter() {
        let container = container_gen(&p, &gstar).map_err(fail)?;
        min_size = min_size.min(container.len());
        if container.is_empty() {
            empty += 1;
        }
        if p.stabilizer(&gstar).map_err(fail)?.order() > 1 {
            nontrivial_stabs += 1;
        }
    }
    Ok(Outcome::Report(json!({
        "command": "gen explore",
        "n": n,
        "profiles_scanned": space.count(),
        "empty_containers": empty,
        "min_container_size": min_size,
        "profiles_with_nontrivial_stabilizer": nontrivial_stabs,
        "note": "exploratory scan only; the identity always commutes, so emptiness never occurs and no existence conclusion is drawn",
    })))
}

/// Minimal indented text rendering of the JSON report.
fn render_pretty(value: &Value) -> String {
    let mut out = String::new();
    fn walk(value: &Value, indent: usize, out: &mut String) {
        let pad = "  ".repeat(indent);
        match value {
            Value::Object(map) => {
                for (k, v) in map {
                    match v {
                        Value::Object(_) | Value::Array(_) => {
                            out.push_str(&format!("{pad}{k}:\n"));
                            walk(v, indent + 1, out);
                        }
                        _ => out.push_str(&format!("{pad}{k}: {}\n", scalar(v))),
                    }
                }
            }
            Value::Array(items) => {
                for v in items {
                    match v {
                        Value::Object(_) | Value::Array(_) => {
                            out.push_str(&format!("{pad}-\n"));
                            walk(v, indent + 1, out);
                        }
                        _ => out.push_str(&format!("{pad}- {}\n", scalar(v))),
                    }
                }
            }
            _ => out.push_str(&format!("{pad}{}\n", scalar(value))),
        }
    }
    fn scalar(v: &Value) -> String {
        match v {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        }
    }
    walk(value, 0, &mut out);
    out
}
