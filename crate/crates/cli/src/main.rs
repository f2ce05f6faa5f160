//! `pfc8`: command-line front end of the order-8 pointed fusion category
//! classifier. Every command prints JSON (or the requested report format) on
//! stdout; contract violations print a JSON error object on stderr and exit 1.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pfc_core::cohomology::{cohomology_cached, cohomology_group, Coefficients};
use pfc_core::groups::{automorphisms, FiniteGroup, Order8};
use pfc_core::linalg::MAX_EXP;
use pfc_core::morita::{enumerate_edges, identify, morita_partition, omega_subgroup, quotient_by_name, quotient_groups};
use pfc_core::orbits::{equivalence_census, orbit_table};
use pfc_core::report::{build_report, compute_all, to_csv, to_json, to_markdown, ReportConfig};
use pfc_core::Error;

#[derive(Parser)]
#[command(name = "pfc8", version, about = "Classify pointed fusion categories Vect(H, η) with |H| = 8")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Precision 2^k of the torus denominators used by the cohomology solver.
    #[arg(long, global = true, default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..=40))]
    max_denominator_exp: u32,
    /// Directory for cached cohomology computations.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Re-run redundant internal checks (automorphism counts, edge witnesses).
    #[arg(long, global = true)]
    verify: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Catalog groups.
    Groups {
        #[command(subcommand)]
        action: GroupsAction,
    },
    /// Invariant factors of H^n(G, Z) or H^n(G, C*).
    Cohomology {
        /// Catalog or quotient name (e.g. D8, Z4xZ2), or a JSON group file.
        #[arg(long)]
        group: String,
        #[arg(long)]
        degree: usize,
        #[arg(long, value_enum, default_value_t = CoeffArg::Torus)]
        coeffs: CoeffArg,
    },
    /// Aut(H)-orbits on H^3(H, C*).
    Orbits {
        #[arg(long)]
        group: String,
    },
    /// The subgroup Ω(H; A) of H^3(H, C*) for a normal abelian subgroup A.
    Omega {
        #[arg(long)]
        group: String,
        /// Element indices of A, comma separated.
        #[arg(long, value_delimiter = ',')]
        subgroup: Vec<usize>,
    },
    /// Tensor or weak Morita classification.
    Classify {
        #[arg(value_enum)]
        kind: ClassifyKind,
    },
    /// Twisted Drinfeld doubles.
    Doubles {
        #[command(subcommand)]
        action: DoublesAction,
    },
    /// Full classification report.
    Report {
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GroupsAction {
    /// The five groups of order 8 and the quotient groups used as K.
    List,
}

#[derive(Subcommand)]
enum DoublesAction {
    /// Commutativity of D^η(H) per Morita class.
    Census,
}

#[derive(Clone, Copy, ValueEnum)]
enum CoeffArg {
    Int,
    Torus,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassifyKind {
    Tensor,
    Morita,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Md,
    Csv,
}

/// A contract violation reported as `{"error": {"kind", "message"}}`.
struct Failure {
    kind: &'static str,
    message: String,
}

impl<E: Into<Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        let e = e.into();
        Failure { kind: e.kind(), message: e.to_string() }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure { kind: "invalid-input", message: message.into() }
}

fn load_group(name: &str) -> Result<FiniteGroup, Failure> {
    if let Some(g) = Order8::from_name(name) {
        return Ok(g.group());
    }
    if let Ok(g) = quotient_by_name(name) {
        return Ok(g);
    }
    let text = std::fs::read_to_string(name).map_err(|_| invalid(format!("unknown group {name:?} (not a catalog name or readable file)")))?;
    Ok(FiniteGroup::from_json(&text).map_err(Error::from)?)
}

fn group_summary(g: &FiniteGroup) -> Value {
    json!({
        "name": g.name(),
        "order": g.order(),
        "abelian": g.is_abelian(),
        "aut_order": automorphisms(g).len(),
        "element_orders": g.order_statistics(),
        "table_hash": g.table_hash(),
    })
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let k = cli.global.max_denominator_exp;
    let value = match &cli.command {
        Command::Groups { action: GroupsAction::List } => {
            let catalog: Vec<Value> = Order8::ALL.iter().map(|g| group_summary(&g.group())).collect();
            let quotients: Vec<Value> = quotient_groups().iter().filter(|g| g.order() < 8).map(group_summary).collect();
            json!({ "catalog": catalog, "quotients": quotients })
        }
        Command::Cohomology { group, degree, coeffs } => {
            let g = load_group(group)?;
            let c = match coeffs {
                CoeffArg::Int => Coefficients::Integer,
                CoeffArg::Torus => Coefficients::Torus { exp: k },
            };
            if k + 3 > MAX_EXP {
                return Err(invalid(format!("--max-denominator-exp {k} leaves no headroom below 2^{MAX_EXP}")));
            }
            let h = match &cli.global.cache_dir {
                Some(dir) => cohomology_cached(dir, &g, *degree, &c, k)?,
                None => cohomology_group(&g, *degree, &c, k)?,
            };
            json!({
                "group": g.name(),
                "degree": degree,
                "coefficients": c.label(),
                "k": k,
                "invariant_factors": h.invariant_factors,
                "order": h.order(),
            })
        }
        Command::Orbits { group } => {
            let g = load_group(group)?;
            let t = orbit_table(&g)?;
            if cli.global.verify && t.sizes().iter().sum::<usize>() as u64 != t.h3.order() {
                return Err(Failure { kind: "verification", message: "orbit sizes do not cover H^3".into() });
            }
            json!({
                "group": g.name(),
                "aut_order": t.aut_order,
                "h3": t.h3.invariant_factors,
                "orbits": t.orbits,
            })
        }
        Command::Omega { group, subgroup } => {
            let g = load_group(group)?;
            let mut sub = subgroup.clone();
            sub.sort_unstable();
            sub.dedup();
            if sub.iter().any(|&x| x >= g.order()) {
                return Err(invalid("subgroup element out of range"));
            }
            if g.closure(&sub) != sub {
                return Err(invalid(format!("{sub:?} is not a subgroup of {}", g.name())));
            }
            if !g.is_normal(&sub) || !g.is_abelian_subset(&sub) {
                return Err(invalid(format!("{sub:?} is not a normal abelian subgroup of {}", g.name())));
            }
            if g.order() != 8 {
                return Err(Failure { kind: "unsupported", message: "Ω is computed for groups of order 8".into() });
            }
            let (h, phi) = identify(&g)?;
            let mut image: Vec<usize> = sub.iter().map(|&x| phi.apply(x)).collect();
            image.sort_unstable();
            let elements = omega_subgroup(h, &image)?;
            json!({
                "group": g.name(),
                "catalog_group": h.name(),
                "subgroup": image,
                "order": elements.len(),
                "elements": elements,
            })
        }
        Command::Classify { kind: ClassifyKind::Tensor } => {
            let census = equivalence_census()?;
            json!({ "count": census.classes.len(), "classes": census.classes })
        }
        Command::Classify { kind: ClassifyKind::Morita } => {
            let census = equivalence_census()?;
            let edges = enumerate_edges(&census)?;
            if cli.global.verify {
                for e in &edges {
                    pfc_core::morita::validate_edge(&census, e)?;
                }
            }
            let p = morita_partition(&census, &edges);
            let classes: Vec<Value> = p
                .classes
                .iter()
                .map(|c| json!({ "id": c.id, "members": c.members, "groups": c.signature(&census), "witnesses": c.witnesses }))
                .collect();
            json!({ "count": p.count(), "edge_count": edges.len(), "classes": classes })
        }
        Command::Doubles { action: DoublesAction::Census } => {
            let comp = compute_all()?;
            json!({
                "commutative": comp.doubles.commutative.len(),
                "noncommutative": comp.doubles.noncommutative.len(),
                "classes": comp.doubles,
            })
        }
        Command::Report { format, out } => {
            let config = ReportConfig { k, threads: rayon::current_num_threads(), verify: cli.global.verify };
            let comp = compute_all()?;
            let report = build_report(&config, &comp)?;
            let text = match format {
                Format::Json => to_json(&report),
                Format::Md => to_markdown(&report),
                Format::Csv => to_csv(&report),
            };
            return match out {
                Some(path) => {
                    std::fs::write(path, &text).map_err(|e| invalid(format!("cannot write {}: {e}", path.display())))?;
                    Ok(json!({ "written": path, "bytes": text.len() }).to_string())
                }
                None => Ok(text),
            };
        }
    };
    Ok(serde_json::to_string_pretty(&value).expect("JSON output"))
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    if let Some(n) = cli.global.threads {
        if n == 0 {
            eprintln!("{}", json!({ "error": { "kind": "invalid-input", "message": "--threads must be positive" } }));
            return ExitCode::from(1);
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().expect("thread pool is configured once");
    }
    match run(&cli) {
        Ok(text) => {
            println!("{text}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("{}", json!({ "error": { "kind": f.kind, "message": f.message } }));
            ExitCode::from(1)
        }
    }
}
