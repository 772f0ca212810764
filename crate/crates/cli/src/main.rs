use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use knotkhi::catalog::Catalog;
use knotkhi::floer::{self, KhiPrediction};
use knotkhi::skein::{self, SkeinResolver};
use knotkhi::su2::{self, SolverConfig};
use knotkhi::verify::{self, Check};
use knotkhi::poly::bigint_to_json;
use knotkhi::{Diagram, LaurentPoly, SkeinTriple};

#[derive(Parser)]
#[command(name = "knotkhi", version, about = "Knot polynomials and instanton knot homology predictions")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Input {
    /// PD code, e.g. "[[1,5,2,4],[3,1,4,6],[5,3,6,2]]"
    #[arg(long, group = "input")]
    pd: Option<String>,
    /// Braid word, e.g. "1 1 1"
    #[arg(long, group = "input")]
    braid: Option<String>,
    /// Knot name from the bundled table, e.g. 3_1
    #[arg(long, group = "input")]
    name: Option<String>,
    #[arg(long, default_value_t = 12)]
    max_crossings: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Alexander polynomial with Conway's normalization
    Alexander(Input),
    /// Conway polynomial
    Conway(Input),
    /// Predicted Euler characteristics of KHI and derived data
    KhiTable(Input),
    /// Fibered verdict from Alexander data and the Seifert genus bound
    Fibered(Input),
    /// Knot determinant |Δ(-1)|
    Detk(Input),
    /// Lower bound Σ|a_j| for the rank of KHI
    RankBound(Input),
    /// Count SU(2) representations sending a meridian to i
    Reps {
        #[command(flatten)]
        input: Input,
        /// Fibonacci-sphere points per free axis
        #[arg(long, default_value_t = 24)]
        grid: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = SolverConfig::default().seed)]
        seed: u64,
        #[arg(long, default_value_t = SolverConfig::default().starts)]
        starts: usize,
    },
    /// Check the normalized skein identity at one crossing, or all of them
    SkeinVerify {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        crossing: Option<usize>,
        /// Also check the case-split identities for the unnormalized χ
        #[arg(long)]
        triangle: bool,
    },
    /// Property sweep over a catalog
    Verify {
        /// JSON-lines catalog; defaults to the bundled table
        #[arg(long)]
        catalog: Option<PathBuf>,
        /// Checks to leave out (oracle, normalization, determinant, genus, fibered, skein, triangle)
        #[arg(long, value_delimiter = ',')]
        skip: Vec<String>,
        /// Run every check over every catalog entry (the default)
        #[arg(long)]
        sweep: bool,
    },
}

/// Rendered text, JSON, and whether every verification passed.
struct Report {
    text: String,
    json: Value,
    ok: bool,
}

impl Report {
    fn ok((text, json): (String, Value)) -> Self {
        Self { text, json, ok: true }
    }
}

/// Bad input; exits with status 2.
struct InputError(String);

type Outcome = Result<Report, InputError>;

fn input_error(e: impl ToString) -> InputError {
    InputError(e.to_string())
}

impl Input {
    fn diagram(&self) -> Result<(String, Diagram), InputError> {
        let (label, d) = match (&self.pd, &self.braid, &self.name) {
            (Some(pd), _, _) => (pd.clone(), Diagram::parse_pd(pd).map_err(input_error)?),
            (_, Some(b), _) => (b.clone(), Diagram::parse_braid(b).map_err(input_error)?),
            (_, _, Some(n)) => {
                let cat = Catalog::bundled();
                let rec = cat.get(n).map_err(input_error)?;
                (n.clone(), rec.diagram().map_err(input_error)?)
            }
            _ => return Err(InputError("one of --pd, --braid or --name is required".into())),
        };
        if d.crossing_count() > self.max_crossings {
            return Err(InputError(format!(
                "{} crossings exceeds --max-crossings {}",
                d.crossing_count(),
                self.max_crossings
            )));
        }
        Ok((label, d))
    }
}

fn poly_output(label: &str, key: &str, p: &LaurentPoly) -> (String, Value) {
    (p.to_string(), json!({ "input": label, key: p.to_json() }))
}

fn render_prediction(p: &KhiPrediction) -> String {
    let mut s = String::new();
    writeln!(s, "alexander: {}", p.alexander).unwrap();
    if p.is_link() {
        writeln!(s, "components: {} (table lists the coefficients of χ = -q^{{r-1}}Δ)", p.components).unwrap();
    }
    let table: Vec<String> = p.eigen_table.iter().map(|(j, c)| format!("{j}: {c}")).collect();
    writeln!(s, "eigen table: {{{}}}", table.join(", ")).unwrap();
    writeln!(s, "normalized chi: {}", p.normalized_chi).unwrap();
    writeln!(s, "rank lower bound: {}", p.rank_lower_bound).unwrap();
    writeln!(s, "determinant: {}", p.determinant).unwrap();
    if let Some((lo, hi)) = p.genus_bracket {
        writeln!(s, "genus bracket: [{lo}, {hi}]").unwrap();
    }
    if let Some(f) = &p.fibered {
        write!(s, "fibered: {:?}", f.verdict).unwrap();
    }
    s.trim_end().to_string()
}

fn run(cmd: &Command) -> Outcome {
    match cmd {
        Command::Alexander(i) => {
            let (label, d) = i.diagram()?;
            Ok(Report::ok(poly_output(&label, "alexander", &skein::alexander(&d))))
        }
        Command::Conway(i) => {
            let (label, d) = i.diagram()?;
            Ok(Report::ok(poly_output(&label, "conway", &skein::conway(&d))))
        }
        Command::KhiTable(i) => {
            let (label, d) = i.diagram()?;
            let p = floer::khi_table(&d);
            let mut v = p.to_json();
            v["input"] = json!(label);
            Ok(Report::ok((render_prediction(&p), v)))
        }
        Command::Fibered(i) => {
            let (label, d) = i.diagram()?;
            let f = floer::fibered_check(&d).map_err(input_error)?;
            let text = format!(
                "{:?} (deg Δ = {}, seifert bound = {}, leading coefficient {}, monic: {})",
                f.verdict, f.alexander_degree, f.seifert_bound, f.leading_coeff, f.monic
            );
            let mut v = f.to_json();
            v["input"] = json!(label);
            Ok(Report::ok((text, v)))
        }
        Command::Detk(i) => {
            let (label, d) = i.diagram()?;
            let det = floer::determinant(&skein::alexander(&d));
            Ok(Report::ok((det.to_string(), json!({ "input": label, "determinant": bigint_to_json(&det) }))))
        }
        Command::RankBound(i) => {
            let (label, d) = i.diagram()?;
            let b = floer::rank_lower_bound(&skein::alexander(&d));
            Ok(Report::ok((b.to_string(), json!({ "input": label, "rank_lower_bound": bigint_to_json(&b) }))))
        }
        Command::Reps { input, grid, tol, seed, starts } => {
            let (label, d) = input.diagram()?;
            let cfg = SolverConfig {
                grid: *grid,
                tol: *tol,
                seed: *seed,
                starts: *starts,
                max_crossings: input.max_crossings,
                ..Default::default()
            };
            let delta = skein::alexander(&d);
            let e = su2::enumerate_reps(&d, &delta, &cfg).map_err(input_error)?;
            let cor = su2::check_counting_corollaries(&e.count, &delta);
            let c = &e.count;
            let mut text = format!(
                "n = {} irreducible orbits, n' = {} binary dihedral (predicted {}), degenerate {}, reducible {}\n\
                 dim bound 1 + 2n = {}, rank lower bound {}: {}\n\
                 converged {}/{} starts, complete: {}",
                c.n_irreducible_orbits,
                c.n_binary_dihedral,
                c.predicted_n_binary_dihedral,
                c.n_degenerate,
                c.n_reducible,
                c.dim_bound,
                cor.rank_lower_bound,
                if cor.bound_holds { "holds" } else { "violated" },
                c.converged,
                c.starts,
                c.complete,
            );
            if cor.criterion_fires {
                write!(
                    text,
                    "\n|det| = {} < {} = Σ|a_j|: not alternating; non-binary-dihedral or degenerate orbit found: {}",
                    cor.determinant, cor.rank_lower_bound, cor.found_exotic_or_degenerate
                )
                .unwrap();
            }
            let mut v = e.to_json();
            v["input"] = json!(label);
            v["corollaries"] = cor.to_json();
            if !c.complete {
                text.push_str("\nenumeration incomplete");
            }
            Ok(Report { text, json: v, ok: c.complete })
        }
        Command::SkeinVerify { input, crossing, triangle } => {
            let (label, d) = input.diagram()?;
            let triples = match crossing {
                Some(k) => vec![SkeinTriple::at(&d, *k).map_err(input_error)?],
                None => SkeinTriple::all(&d),
            };
            if triples.is_empty() {
                return Err(InputError("diagram has no crossings".into()));
            }
            let mut resolver = SkeinResolver::default();
            let mut text = String::new();
            let mut reports = Vec::new();
            let mut ok = true;
            for t in &triples {
                let r = skein::skein_verify_with(t, &mut resolver);
                ok &= r.passed;
                writeln!(
                    text,
                    "crossing {}: χ̃₊ = {}, χ̃₋ = {}, χ̃₀ = {}: {}",
                    t.site,
                    r.chi_tilde_plus,
                    r.chi_tilde_minus,
                    r.chi_tilde_zero,
                    if r.passed { "pass" } else { "FAIL" }
                )
                .unwrap();
                let mut v = json!({
                    "site": t.site,
                    "chi_tilde_plus": r.chi_tilde_plus.to_json(),
                    "chi_tilde_minus": r.chi_tilde_minus.to_json(),
                    "chi_tilde_zero": r.chi_tilde_zero.to_json(),
                    "passed": r.passed,
                });
                if *triangle {
                    let tr = floer::triangle_check_with(t, &mut resolver);
                    ok &= tr.passed;
                    writeln!(
                        text,
                        "  {:?}: residual {} ({}), with the χ₀ sign reversed: {}",
                        tr.case,
                        tr.residual,
                        if tr.passed { "pass" } else { "FAIL" },
                        tr.flipped_residual
                    )
                    .unwrap();
                    v["triangle"] = tr.to_json();
                }
                reports.push(v);
            }
            let text = text.trim_end().to_string();
            let v = json!({ "input": label, "passed": ok, "crossings": reports });
            Ok(Report { text, json: v, ok })
        }
        Command::Verify { catalog, skip, sweep: _ } => {
            let cat = match catalog {
                Some(p) => Catalog::load(p).map_err(input_error)?,
                None => Catalog::bundled(),
            };
            let mut checks = Check::ALL.to_vec();
            for s in skip {
                let c = Check::from_name(s).ok_or_else(|| InputError(format!("unknown check `{s}`")))?;
                checks.retain(|x| *x != c);
            }
            let report = verify::sweep(&cat, &checks);
            Ok(Report { text: report.to_string(), json: report.to_json(), ok: report.passed() })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(r) => {
            match cli.format {
                Format::Text => println!("{}", r.text),
                Format::Json => println!("{}", serde_json::to_string_pretty(&r.json).expect("valid JSON")),
            }
            if r.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
