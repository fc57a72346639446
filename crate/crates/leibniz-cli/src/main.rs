//! Command-line front end for the Leibniz algebra workbench.
//!
//! Exit codes: 0 success, 1 a verification command found a violation,
//! 2 usage/parse/constraint errors, 3 inconclusive verdicts (Undecided,
//! NotFound, Unmatched). Results go to stdout, diagnostics to stderr.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use leibniz_core::algebra::{AlgebraTable, CheckResult};
use leibniz_core::catalog::{self, FamilyParams};
use leibniz_core::census;
use leibniz_core::classify::{self, Verdict};
use leibniz_core::fingerprint::fingerprint;
use leibniz_core::iso::{search_isomorphism, SearchOutcome};
use leibniz_core::jsonio;
use leibniz_core::structure;
use leibniz_core::{Budget, Error};

const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_UNDECIDED: u8 = 3;

#[derive(Parser)]
#[command(name = "leibniz-lab", version, about = "Exact workbench for small Leibniz algebras")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct TableArgs {
    /// Structure-constant table as JSON.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Catalog family id instead of a file.
    #[arg(long)]
    family: Option<String>,
    /// Family parameters, e.g. "gamma=2,mu3=-1/2".
    #[arg(long, default_value = "")]
    params: String,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct BudgetArgs {
    /// Node budget for bounded searches (env LEIBNIZ_LAB_BUDGET overrides
    /// the default).
    #[arg(long)]
    budget: Option<u64>,
    /// Seed for the randomized falsification branch.
    #[arg(long, default_value = "0")]
    seed: u64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Verify the Leibniz identity (and report the antisymmetry scan).
    Check(TableArgs),
    /// Series, solvability, nilpotency, annihilators.
    Invariants(TableArgs),
    /// Derivation space basis and dimension.
    Der(TableArgs),
    /// Maximal nilpotent ideal and the quotient complement.
    Nilradical(TableArgs),
    /// Catalog access.
    Catalog {
        #[command(subcommand)]
        sub: CatalogCmd,
    },
    /// Classify a table against the catalog.
    Classify {
        #[command(flatten)]
        table: TableArgs,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Search for an explicit isomorphism between two tables.
    Iso {
        /// One or two table files; with one file, --family/--params name
        /// the second table.
        #[arg(long, num_args = 1)]
        input: Vec<PathBuf>,
        #[arg(long)]
        family: Option<String>,
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Pairwise non-isomorphism census over the sample grid.
    Census {
        /// Grid file (JSON array of {"family", "params"}); defaults to the
        /// built-in sample grid.
        #[arg(long)]
        grid: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Basis-independent invariant vector.
    Fingerprint(TableArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(match e {
                Error::Parse(_)
                | Error::UnknownFamily(_)
                | Error::ConstraintViolation { .. }
                | Error::DimensionMismatch(_)
                | Error::Invalid(_) => EXIT_USAGE,
                _ => EXIT_VIOLATION,
            })
        }
    }
}

fn budget_from(args: &BudgetArgs) -> Budget {
    let default = std::env::var("LEIBNIZ_LAB_BUDGET")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(Budget::default().nodes);
    Budget::with_nodes(args.budget.unwrap_or(default))
}

fn load_table(args: &TableArgs) -> Result<AlgebraTable, Error> {
    match (&args.input, &args.family) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Invalid(format!("cannot read {}: {}", path.display(), e)))?;
            jsonio::parse_table_str(&text)
        }
        (None, Some(id)) => catalog::instantiate(id, &catalog::parse_params(&args.params)?),
        _ => Err(Error::Invalid("provide exactly one of --input or --family".into())),
    }
}

fn emit(format: Format, value: &serde_json::Value, text: impl FnOnce() -> String) {
    match format {
        Format::Json => println!("{}", serde_json::to_string(value).unwrap()),
        Format::Text => println!("{}", text()),
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.cmd {
        Cmd::Check(args) => {
            let t = load_table(&args)?;
            let result = t.leibniz_check();
            let lie = t.is_lie();
            let value = match &result {
                CheckResult::Pass => json!({
                    "leibniz": "pass",
                    "lie": lie.is_lie(),
                }),
                CheckResult::Fail { witness, defect } => json!({
                    "leibniz": "fail",
                    "witness": [witness.0, witness.1, witness.2],
                    "defect": defect.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                }),
            };
            emit(args.format, &value, || match &result {
                CheckResult::Pass => format!("leibniz: pass\nlie: {}", lie.is_lie()),
                CheckResult::Fail { witness, .. } => {
                    format!("leibniz: fail at triple {:?}", witness)
                }
            });
            Ok(if result.passed() { ExitCode::SUCCESS } else { ExitCode::from(EXIT_VIOLATION) })
        }
        Cmd::Invariants(args) => {
            let t = load_table(&args)?;
            let lc = structure::lower_central_series(&t);
            let dc = structure::derived_series(&t);
            let right = structure::right_annihilator(&t);
            let left = structure::left_annihilator(&t);
            let value = json!({
                "dim": t.dim(),
                "lower_central": jsonio::series_to_json(&lc),
                "derived": jsonio::series_to_json(&dc),
                "nilpotent": lc.reaches_zero(),
                "solvable": dc.reaches_zero(),
                "dim_square": t.square().dim(),
                "dim_right_annihilator": right.dim(),
                "dim_left_annihilator": left.dim(),
                "lie": t.is_lie().is_lie(),
            });
            emit(args.format, &value, || {
                format!(
                    "dim:                {}\nlower central dims: {:?} (index {})\nderived dims:       {:?} (index {})\nnilpotent:          {}\nsolvable:           {}\ndim L^2:            {}\ndim right ann:      {}\ndim left ann:       {}\nlie:                {}",
                    t.dim(),
                    lc.dims,
                    lc.index.map_or("infinite".into(), |i| i.to_string()),
                    dc.dims,
                    dc.index.map_or("infinite".into(), |i| i.to_string()),
                    lc.reaches_zero(),
                    dc.reaches_zero(),
                    t.square().dim(),
                    right.dim(),
                    left.dim(),
                    t.is_lie().is_lie(),
                )
            });
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Der(args) => {
            let t = load_table(&args)?;
            let d = structure::derivation_space(&t);
            let value = jsonio::derivations_to_json(&d);
            emit(args.format, &value, || format!("dim Der: {}", d.dim()));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Nilradical(args) => {
            let t = load_table(&args)?;
            let nr = structure::nilradical(&t)?;
            let complement = nr.complement_basis();
            let restriction = t.restrict_to(&nr)?;
            let value = json!({
                "dim": nr.dim(),
                "basis": classify::subspace_json(&nr),
                "complement": complement.iter().map(|v| v.iter().map(|s| s.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "restriction": jsonio::table_to_json(&restriction),
            });
            emit(args.format, &value, || {
                format!("nilradical dim: {}\nbasis rows: {:?}", nr.dim(), nr.basis().iter().map(|r| r.iter().map(|s| s.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>())
            });
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Catalog { sub } => run_catalog(sub),
        Cmd::Classify { table, budget } => {
            let t = load_table(&table)?;
            let b = budget_from(&budget);
            let r = classify::classify(&t, b)?;
            let value = r.to_json();
            emit(table.format, &value, || match &r.verdict {
                Verdict::Matched { family, canonical_params, .. } => {
                    let params: Vec<String> =
                        canonical_params.iter().map(|(k, v)| format!("{}={}", k, v)).collect();
                    format!("matched: {} [{}]", family, params.join(","))
                }
                Verdict::NonSolvable { family, .. } => format!("non-solvable: {}", family),
                Verdict::OutOfScopeNilpotent => "out of scope: 4-dimensional nilpotent".into(),
                Verdict::Unmatched { report } => format!("unmatched: {}", report),
            });
            Ok(match r.verdict {
                Verdict::Unmatched { .. } => ExitCode::from(EXIT_UNDECIDED),
                _ => ExitCode::SUCCESS,
            })
        }
        Cmd::Iso { input, family, params, format, budget } => {
            let (a, b) = match (input.len(), &family) {
                (2, None) => {
                    let load = |p: &PathBuf| -> Result<AlgebraTable, Error> {
                        let text = std::fs::read_to_string(p).map_err(|e| {
                            Error::Invalid(format!("cannot read {}: {}", p.display(), e))
                        })?;
                        jsonio::parse_table_str(&text)
                    };
                    (load(&input[0])?, load(&input[1])?)
                }
                (1, Some(id)) => {
                    let text = std::fs::read_to_string(&input[0]).map_err(|e| {
                        Error::Invalid(format!("cannot read {}: {}", input[0].display(), e))
                    })?;
                    let a = jsonio::parse_table_str(&text)?;
                    let b = catalog::instantiate(id, &catalog::parse_params(&params)?)?;
                    (a, b)
                }
                (0, Some(_)) => {
                    return Err(Error::Invalid("iso needs at least one --input table".into()))
                }
                _ => {
                    return Err(Error::Invalid(
                        "iso takes two --input files, or one --input plus --family".into(),
                    ))
                }
            };
            let out = search_isomorphism(&a, &b, budget_from(&budget));
            let (value, text, code) = match &out {
                SearchOutcome::Found(cert) => (
                    json!({"verdict": "found", "certificate": classify::matrix_json(&cert.p)}),
                    "isomorphic: certificate found".to_string(),
                    ExitCode::SUCCESS,
                ),
                SearchOutcome::Incompatible(component) => (
                    json!({"verdict": "incompatible", "component": component}),
                    format!("not isomorphic: {} differs", component),
                    ExitCode::from(EXIT_VIOLATION),
                ),
                SearchOutcome::NotFound => (
                    json!({"verdict": "not_found"}),
                    "inconclusive: no certificate within budget".to_string(),
                    ExitCode::from(EXIT_UNDECIDED),
                ),
            };
            emit(format, &value, || text);
            Ok(code)
        }
        Cmd::Census { grid, format, budget } => {
            let grid_entries = match grid {
                Some(path) => {
                    let text = std::fs::read_to_string(&path).map_err(|e| {
                        Error::Invalid(format!("cannot read {}: {}", path.display(), e))
                    })?;
                    parse_grid(&text)?
                }
                None => census::default_grid(),
            };
            let report = census::census(&grid_entries, budget_from(&budget), budget.seed);
            match format {
                Format::Json => println!("{}", serde_json::to_string(&report.to_json()).unwrap()),
                Format::Text => {
                    let s = &report.summary;
                    println!(
                        "entries: {}\npairs: {}\ndistinct: {}\nisomorphic: {}\nundecided: {}",
                        s.entries, s.pairs, s.distinct, s.isomorphic, s.undecided
                    );
                    for f in report.findings() {
                        println!("finding: {} ~ {}", f.pair[0], f.pair[1]);
                    }
                }
            }
            Ok(if report.summary.undecided > 0 {
                ExitCode::from(EXIT_UNDECIDED)
            } else {
                ExitCode::SUCCESS
            })
        }
        Cmd::Fingerprint(args) => {
            let t = load_table(&args)?;
            let fp = fingerprint(&t);
            let value = serde_json::to_value(&fp).unwrap();
            emit(args.format, &value, || format!("{:#?}", fp));
            Ok(ExitCode::SUCCESS)
        }
    }
}

#[derive(Subcommand)]
enum CatalogCmd {
    /// List all family ids with dimensions and parameters.
    List {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Show a family's template, constraint, and claimed profile.
    Show {
        id: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Instantiate a family at concrete parameters (table JSON to stdout).
    Instantiate {
        id: String,
        #[arg(long, default_value = "")]
        params: String,
    },
    /// Verify a catalog entry against its claimed profile.
    Verify {
        id: String,
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn run_catalog(sub: CatalogCmd) -> Result<ExitCode, Error> {
    match sub {
        CatalogCmd::List { format } => {
            let families = catalog::list_families();
            match format {
                Format::Json => {
                    let v: Vec<_> = families
                        .iter()
                        .map(|f| {
                            json!({
                                "id": f.id,
                                "dim": f.dim,
                                "params": f.params,
                                "constraint": f.constraint.to_text(),
                            })
                        })
                        .collect();
                    println!("{}", serde_json::to_string(&v).unwrap());
                }
                Format::Text => {
                    for f in families {
                        let dim = if f.dim == 0 { "n".to_string() } else { f.dim.to_string() };
                        println!("{:<16} dim {:<2} params [{}]", f.id, dim, f.params.join(","));
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        CatalogCmd::Show { id, format } => {
            let f = catalog::family(&id)?;
            let value = json!({
                "id": f.id,
                "dim": f.dim,
                "labels": f.labels,
                "params": f.params,
                "constraint": f.constraint.to_text(),
                "claimed": {
                    "solvable": f.claimed.solvable,
                    "nilpotent": f.claimed.nilpotent,
                    "nilradical_dim": f.claimed.nilradical_dim,
                    "nilradical_family": f.claimed.nilradical_family,
                    "der_dim": f.claimed.der_dim,
                },
                "grid_size": f.grid().len(),
            });
            emit(format, &value, || format!("{}", serde_json::to_string_pretty(&value).unwrap()));
            Ok(ExitCode::SUCCESS)
        }
        CatalogCmd::Instantiate { id, params } => {
            let p = catalog::parse_params(&params)?;
            let t = catalog::instantiate(&id, &p)?;
            println!("{}", serde_json::to_string(&jsonio::table_to_json(&t)).unwrap());
            Ok(ExitCode::SUCCESS)
        }
        CatalogCmd::Verify { id, params, format } => {
            let p = catalog::parse_params(&params)?;
            let report = catalog::verify_entry(&id, &p)?;
            let value = serde_json::to_value(&report).unwrap();
            emit(format, &value, || {
                let mut lines = vec![format!("family {} {:?}", report.family, report.params)];
                for c in &report.checks {
                    lines.push(format!(
                        "  {:<18} {} ({})",
                        c.name,
                        if c.passed { "pass" } else { "FAIL" },
                        c.detail
                    ));
                }
                lines.join("\n")
            });
            Ok(if report.passed { ExitCode::SUCCESS } else { ExitCode::from(EXIT_VIOLATION) })
        }
    }
}

fn parse_grid(text: &str) -> Result<Vec<(String, FamilyParams)>, Error> {
    #[derive(serde::Deserialize)]
    struct GridEntry {
        family: String,
        #[serde(default)]
        params: BTreeMap<String, String>,
    }
    let entries: Vec<GridEntry> =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("grid JSON: {}", e)))?;
    entries
        .into_iter()
        .map(|e| {
            let params = e
                .params
                .iter()
                .map(|(k, v)| Ok((k.clone(), leibniz_core::parse_scalar(v)?)))
                .collect::<Result<FamilyParams, Error>>()?;
            Ok((e.family, params))
        })
        .collect()
}
