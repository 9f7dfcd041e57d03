use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use ptekit::designs::{self, DesignInstance, Point, SearchOptions};
use ptekit::fano;
use ptekit::linalg::{format_rational, int, parse_rational, parse_rational_list, serde_points};
use ptekit::n2::{self, ConjugationBasis, DecomposeOptions, N2Element};
use ptekit::perm::Permutation;
use ptekit::pte::{self, PteSolution};
use ptekit::quadform::{self, QuadraticForm};
use ptekit::{Error, Matrix, Rational};

use crate::report::{RunReport, Status};

#[derive(Debug, Parser)]
#[command(
    name = "ptekit",
    version,
    about = "Exact tools for degree-2 PTE solutions, N2(n) and rational ellipsoidal designs"
)]
pub struct Cli {
    /// Print the run report as JSON on stdout.
    #[arg(long, global = true)]
    pub json: bool,

    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Write the main result (matrix, solution, point set) to this file as JSON.
    #[arg(short = 'o', long = "output", global = true)]
    pub output: Option<PathBuf>,

    /// Report wall-clock time (adds `elapsed_ms` to the JSON report).
    #[arg(long, global = true)]
    pub timing: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every power-sum identity of a PTE solution file.
    VerifyPte { file: PathBuf },
    /// Row-reduce [A B] of a solution file.
    Normalize { file: PathBuf },
    /// Run the Fano-plane example end to end.
    DemoFano {
        /// Perturb one entry of Y before running (negative control).
        #[arg(long)]
        perturb: bool,
    },
    /// The group N2(n).
    #[command(subcommand)]
    N2(N2Command),
    /// Rational quadratic forms.
    #[command(subcommand)]
    Qf(QfCommand),
    /// Ellipsoidal designs.
    #[command(subcommand)]
    Design(DesignCommand),
}

#[derive(Debug, Subcommand)]
pub enum N2Command {
    /// Test M M^T = I and M 1 = 1.
    Check { matrix: PathBuf },
    /// Build (I + S)^{-1} (I - S) R.
    Cayley {
        #[arg(long)]
        skew: PathBuf,
        /// 0-indexed image sequence, e.g. "2,0,1"; identity when omitted.
        #[arg(long)]
        perm: Option<String>,
    },
    /// Find a Cayley certificate (S, R).
    Decompose {
        matrix: PathBuf,
        /// Permutations tried in lexicographic order before random ones.
        #[arg(long, default_value_t = 40_320)]
        lex_budget: usize,
        #[arg(long, default_value_t = 20_000)]
        random_tries: usize,
    },
    /// Conjugate to diag(1, B') and print B'.
    ToBlock { matrix: PathBuf },
    /// Lift B' back to N2(n).
    FromBlock {
        block: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Random element from a random Cayley certificate.
    Random {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum QfCommand {
    /// diag[1, 3, .., n(n-1)/2], or diag[2, 6, .., n(n-1)] with --prime.
    Paper {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        prime: bool,
    },
    /// Test M^T Q M = Q.
    Member {
        matrix: PathBuf,
        #[arg(long)]
        form: PathBuf,
    },
    /// Similarity of diag[1, 3, .., n(n-1)/2] to the identity form.
    Schoenberg {
        #[arg(long)]
        n: u64,
    },
    /// Check g^T Q1 g = a Q2.
    Witness {
        q1: PathBuf,
        q2: PathBuf,
        g: PathBuf,
        #[arg(long, default_value = "1")]
        scale: String,
    },
}

#[derive(Debug, Args)]
pub struct FormArgs {
    /// Gram matrix file.
    #[arg(long, conflicts_with = "paper_form_n")]
    form: Option<PathBuf>,
    /// Use diag[1, 3, .., n(n-1)/2] for this n.
    #[arg(long)]
    paper_form_n: Option<usize>,
    /// Radius r of x^T Q x = r.
    #[arg(long, default_value = "1")]
    r: String,
}

#[derive(Debug, Subcommand)]
pub enum DesignCommand {
    /// Exact strength test of an instance file.
    Verify { instance: PathBuf },
    /// Size of a tight t-design in dimension n.
    TightSize {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
    },
    /// Rational points on x^T Q x = r by chords through a base point.
    Points {
        #[command(flatten)]
        form: FormArgs,
        /// Comma-separated base point; searched for when omitted.
        #[arg(long)]
        base: Option<String>,
        #[arg(long, default_value_t = 2)]
        height: u64,
    },
    /// Bounded search for tight designs in a point pool.
    Search {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long)]
        t: usize,
        /// Point pool file; enumerated from a base point when omitted.
        #[arg(long)]
        pool: Option<PathBuf>,
        /// Comma-separated base point for the enumerated pool.
        #[arg(long)]
        base: Option<String>,
        /// Direction height for the enumerated pool.
        #[arg(long, default_value_t = 1)]
        height: u64,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
}

type Outcome = std::result::Result<RunReport, String>;

fn err(e: Error) -> String {
    e.to_string()
}

fn read_json<T: DeserializeOwned>(path: &Path) -> std::result::Result<T, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_output<T: Serialize>(
    path: Option<&PathBuf>,
    value: &T,
) -> std::result::Result<(), String> {
    if let Some(path) = path {
        let text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
        std::fs::write(path, text + "\n").map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(())
}

/// A point set file: either a bare list of points or `{"points": [...]}`.
#[derive(Deserialize)]
#[serde(untagged)]
enum PointsFile {
    Wrapped {
        #[serde(with = "serde_points")]
        points: Vec<Point>,
    },
    Bare(#[serde(with = "serde_points")] Vec<Point>),
}

#[derive(Serialize)]
struct PointsOut<'a> {
    #[serde(with = "serde_points")]
    points: &'a [Point],
}

pub fn dispatch(cli: &Cli) -> RunReport {
    let start = Instant::now();
    let verb = verb_name(&cli.command);
    let mut report = run(cli).unwrap_or_else(|msg| RunReport::error(&verb, msg));
    report.elapsed = start.elapsed();
    report
}

fn verb_name(cmd: &Command) -> String {
    match cmd {
        Command::VerifyPte { .. } => "verify-pte".into(),
        Command::Normalize { .. } => "normalize".into(),
        Command::DemoFano { .. } => "demo-fano".into(),
        Command::N2(c) => format!(
            "n2 {}",
            match c {
                N2Command::Check { .. } => "check",
                N2Command::Cayley { .. } => "cayley",
                N2Command::Decompose { .. } => "decompose",
                N2Command::ToBlock { .. } => "to-block",
                N2Command::FromBlock { .. } => "from-block",
                N2Command::Random { .. } => "random",
            }
        ),
        Command::Qf(c) => format!(
            "qf {}",
            match c {
                QfCommand::Paper { .. } => "paper",
                QfCommand::Member { .. } => "member",
                QfCommand::Schoenberg { .. } => "schoenberg",
                QfCommand::Witness { .. } => "witness",
            }
        ),
        Command::Design(c) => format!(
            "design {}",
            match c {
                DesignCommand::Verify { .. } => "verify",
                DesignCommand::TightSize { .. } => "tight-size",
                DesignCommand::Points { .. } => "points",
                DesignCommand::Search { .. } => "search",
            }
        ),
    }
}

fn run(cli: &Cli) -> Outcome {
    let verb = verb_name(&cli.command);
    let out = cli.output.as_ref();
    match &cli.command {
        Command::VerifyPte { file } => {
            let sol: PteSolution = read_json(file)?;
            let rep = sol.verify();
            let (status, summary) = match &rep.violation {
                None => (
                    Status::Ok,
                    format!(
                        "ok: degree-{} solution in dimension {} with {} points ({} identities, disjoint: {})",
                        sol.degree(),
                        sol.dimension(),
                        sol.size(),
                        rep.identities_checked,
                        rep.disjoint
                    ),
                ),
                Some(v) => (Status::Violation, format!("violation: {v}")),
            };
            Ok(RunReport::new(&verb, status, summary, json!(rep)))
        }
        Command::Normalize { file } => {
            let sol: PteSolution = read_json(file)?;
            let norm = pte::normalize(&sol).map_err(err)?;
            write_output(out, &norm.solution)?;
            let check = norm.solution.verify();
            let status = if check.holds {
                Status::Ok
            } else {
                Status::Violation
            };
            let summary = format!(
                "A' = {}\nB' = {}\npivot columns {:?}{}",
                norm.solution.a(),
                norm.solution.b(),
                norm.pivot_columns,
                if norm.pivots_in_b {
                    " (pivots inside B)"
                } else {
                    ""
                }
            );
            Ok(RunReport::new(
                &verb,
                status,
                summary,
                json!({
                    "solution": norm.solution,
                    "pivot_columns": norm.pivot_columns,
                    "pivots_in_b": norm.pivots_in_b,
                    "verify": check,
                }),
            ))
        }
        Command::DemoFano { perturb } => {
            let sol = fano::solution();
            let mut y = sol.b().clone();
            if *perturb {
                y[(0, 0)] += int(1);
            }
            let rep = fano::run_pipeline(sol.a(), &y);
            let lines: Vec<String> = rep
                .stages
                .iter()
                .map(|s| format!("{:<10} {:?}", s.name, s.status).to_lowercase())
                .collect();
            let mut summary = lines.join("\n");
            let status = match rep.first_failure() {
                None => Status::Ok,
                Some(stage) => {
                    summary.push_str(&format!("\n{}", stage.detail));
                    Status::Violation
                }
            };
            Ok(RunReport::new(&verb, status, summary, json!(rep)))
        }
        Command::N2(c) => run_n2(&verb, c, cli),
        Command::Qf(c) => run_qf(&verb, c, out),
        Command::Design(c) => run_design(&verb, c, out),
    }
}

fn element_details(e: &N2Element) -> Value {
    json!({ "matrix": e.matrix(), "certificate": e.certificate() })
}

fn run_n2(verb: &str, cmd: &N2Command, cli: &Cli) -> Outcome {
    let out = cli.output.as_ref();
    match cmd {
        N2Command::Check { matrix } => {
            let m: Matrix = read_json(matrix)?;
            match n2::membership(&m).map_err(err)? {
                None => Ok(RunReport::new(
                    verb,
                    Status::Ok,
                    format!("member of N2({})", m.rows()),
                    json!({ "member": true }),
                )),
                Some(fail) => Ok(RunReport::new(
                    verb,
                    Status::Violation,
                    format!("not a member: {fail}"),
                    json!({ "member": false, "failure": fail }),
                )),
            }
        }
        N2Command::Cayley { skew, perm } => {
            let s: Matrix = read_json(skew)?;
            let r = match perm {
                Some(p) => Permutation::parse(p).map_err(err)?,
                None => Permutation::identity(s.rows()),
            };
            let e = n2::cayley(&s, &r).map_err(err)?;
            write_output(out, e.matrix())?;
            Ok(RunReport::new(
                verb,
                Status::Ok,
                e.matrix().to_string(),
                element_details(&e),
            ))
        }
        N2Command::Decompose {
            matrix,
            lex_budget,
            random_tries,
        } => {
            let m: Matrix = read_json(matrix)?;
            let e = N2Element::new(m).map_err(err)?;
            let opts = DecomposeOptions {
                lex_budget: *lex_budget,
                random_tries: *random_tries,
                seed: cli.seed,
            };
            match n2::cayley_decompose(&e, &opts) {
                Ok(cert) => {
                    write_output(out, &cert)?;
                    Ok(RunReport::new(
                        verb,
                        Status::Ok,
                        format!("S = {}\nR = {}", cert.skew, cert.perm),
                        json!(cert),
                    ))
                }
                Err(Error::DecomposeExhausted { tried }) => Ok(RunReport::new(
                    verb,
                    Status::Violation,
                    format!("no Cayley certificate after {tried} permutations"),
                    json!({ "tried": tried, "matrix": e.matrix() }),
                )),
                Err(e) => Err(err(e)),
            }
        }
        N2Command::ToBlock { matrix } => {
            let m: Matrix = read_json(matrix)?;
            let e = N2Element::new(m).map_err(err)?;
            let basis = ConjugationBasis::standard(e.size()).map_err(err)?;
            match n2::to_block(&e, &basis) {
                Ok(block) => {
                    write_output(out, &block)?;
                    Ok(RunReport::new(
                        verb,
                        Status::Ok,
                        block.to_string(),
                        json!({ "block": block, "q_prime": basis.q_prime() }),
                    ))
                }
                Err(e @ Error::BlockStructure(_)) => Ok(RunReport::new(
                    verb,
                    Status::Violation,
                    e.to_string(),
                    json!({ "error": e.to_string() }),
                )),
                Err(e) => Err(err(e)),
            }
        }
        N2Command::FromBlock { block, n } => {
            let b: Matrix = read_json(block)?;
            let basis = ConjugationBasis::standard(*n).map_err(err)?;
            if b.rows() + 1 != *n || !b.is_square() {
                return Err(format!(
                    "block is {}x{}, expected {}x{} for n = {n}",
                    b.rows(),
                    b.cols(),
                    n.saturating_sub(1),
                    n.saturating_sub(1)
                ));
            }
            match n2::from_block(&b, &basis) {
                Ok(e) => {
                    write_output(out, e.matrix())?;
                    Ok(RunReport::new(
                        verb,
                        Status::Ok,
                        e.matrix().to_string(),
                        element_details(&e),
                    ))
                }
                Err(Error::NotMember(msg)) => {
                    let lhs = b
                        .transpose()
                        .matmul(basis.q_prime())
                        .and_then(|m| m.matmul(&b))
                        .map_err(err)?;
                    Ok(RunReport::new(
                        verb,
                        Status::Violation,
                        format!("{msg}: B'^T Q' B' = {lhs}, Q' = {}", basis.q_prime()),
                        json!({ "lhs": lhs, "q_prime": basis.q_prime() }),
                    ))
                }
                Err(e) => Err(err(e)),
            }
        }
        N2Command::Random { n } => {
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let e = n2::random_element(*n, &mut rng).map_err(err)?;
            write_output(out, e.matrix())?;
            Ok(RunReport::new(
                verb,
                Status::Ok,
                e.matrix().to_string(),
                element_details(&e),
            ))
        }
    }
}

fn run_qf(verb: &str, cmd: &QfCommand, out: Option<&PathBuf>) -> Outcome {
    match cmd {
        QfCommand::Paper { n, prime } => {
            let q = if *prime {
                quadform::paper_form_prime(*n)
            } else {
                quadform::paper_form(*n)
            }
            .map_err(err)?;
            write_output(out, q.gram())?;
            Ok(RunReport::new(
                verb,
                Status::Ok,
                q.gram().to_string(),
                json!({ "form": q }),
            ))
        }
        QfCommand::Member { matrix, form } => {
            let m: Matrix = read_json(matrix)?;
            let q: QuadraticForm = read_json(form)?;
            let holds = quadform::in_orthogonal_group(&m, &q).map_err(err)?;
            if holds {
                Ok(RunReport::new(
                    verb,
                    Status::Ok,
                    "M^T Q M = Q",
                    json!({ "member": true }),
                ))
            } else {
                let lhs = m
                    .transpose()
                    .matmul(q.gram())
                    .and_then(|x| x.matmul(&m))
                    .map_err(err)?;
                Ok(RunReport::new(
                    verb,
                    Status::Violation,
                    format!("M^T Q M = {lhs} != Q = {}", q.gram()),
                    json!({ "member": false, "lhs": lhs, "form": q }),
                ))
            }
        }
        QfCommand::Schoenberg { n } => {
            let clause = quadform::schoenberg_similar_to_identity(*n).map_err(err)?;
            let summary = match clause {
                Some(c) => format!("similar: clause {c}"),
                None => "not similar: no clause holds".to_string(),
            };
            Ok(RunReport::new(
                verb,
                Status::Ok,
                summary,
                json!({ "n": n, "similar": clause.is_some(), "clause": clause }),
            ))
        }
        QfCommand::Witness { q1, q2, g, scale } => {
            let q1: QuadraticForm = read_json(q1)?;
            let q2: QuadraticForm = read_json(q2)?;
            let g: Matrix = read_json(g)?;
            let a = parse_rational(scale).map_err(err)?;
            let holds = quadform::equivalence_witness_check(&q1, &q2, &g, &a).map_err(err)?;
            let lhs = g
                .transpose()
                .matmul(q1.gram())
                .and_then(|x| x.matmul(&g))
                .map_err(err)?;
            let rhs = q2.gram().scale(&a);
            let details =
                json!({ "holds": holds, "lhs": lhs, "rhs": rhs, "scale": format_rational(&a) });
            if holds {
                Ok(RunReport::new(verb, Status::Ok, "g^T Q1 g = a Q2", details))
            } else {
                Ok(RunReport::new(
                    verb,
                    Status::Violation,
                    format!("g^T Q1 g = {lhs} != a Q2 = {rhs}"),
                    details,
                ))
            }
        }
    }
}

fn load_form(args: &FormArgs) -> std::result::Result<(QuadraticForm, Rational), String> {
    let form = match (&args.form, args.paper_form_n) {
        (Some(path), None) => read_json::<QuadraticForm>(path)?,
        (None, Some(n)) => quadform::paper_form(n).map_err(err)?,
        _ => return Err("give exactly one of --form or --paper-form-n".into()),
    };
    let r = parse_rational(&args.r).map_err(err)?;
    Ok((form, r))
}

fn base_point(
    form: &QuadraticForm,
    r: &Rational,
    base: &Option<String>,
) -> std::result::Result<Point, String> {
    match base {
        Some(text) => parse_rational_list(text).map_err(err),
        None => designs::find_base_point(form, r, 3, 2_000_000)
            .ok_or_else(|| "no rational base point of height <= 3 found; pass --base".to_string()),
    }
}

fn run_design(verb: &str, cmd: &DesignCommand, out: Option<&PathBuf>) -> Outcome {
    match cmd {
        DesignCommand::Verify { instance } => {
            let inst: DesignInstance = read_json(instance)?;
            let rep = designs::verify_design(&inst);
            let summary = match rep.failing_degree {
                None => format!(
                    "{}-design with {} points; pair sums {:?}",
                    inst.strength(),
                    inst.points().len(),
                    rep.pair_sums
                ),
                Some(k) => format!(
                    "violation: degree-{k} pair sum is {}, expected 0",
                    rep.pair_sums.last().map(String::as_str).unwrap_or("?")
                ),
            };
            let status = if rep.holds {
                Status::Ok
            } else {
                Status::Violation
            };
            Ok(RunReport::new(verb, status, summary, json!(rep)))
        }
        DesignCommand::TightSize { n, t } => {
            let size = designs::tight_size(*n, *t).map_err(err)?;
            Ok(RunReport::new(
                verb,
                Status::Ok,
                size.to_string(),
                json!({ "n": n, "t": t, "size": size.to_string() }),
            ))
        }
        DesignCommand::Points { form, base, height } => {
            let (q, r) = load_form(form)?;
            let base = base_point(&q, &r, base)?;
            let pts = designs::enumerate_rational_points(&q, &r, &base, *height).map_err(err)?;
            write_output(out, &PointsOut { points: &pts })?;
            let text: Vec<Vec<String>> = pts
                .iter()
                .map(|p| p.iter().map(format_rational).collect())
                .collect();
            let summary = format!("{} rational points (height bound {height})", pts.len());
            Ok(RunReport::new(
                verb,
                Status::Ok,
                summary,
                json!({ "base": base.iter().map(format_rational).collect::<Vec<_>>(), "count": pts.len(), "points": text }),
            ))
        }
        DesignCommand::Search {
            form,
            t,
            pool,
            base,
            height,
            budget,
            workers,
        } => {
            let (q, r) = load_form(form)?;
            let pool = match pool {
                Some(path) => match read_json::<PointsFile>(path)? {
                    PointsFile::Wrapped { points } | PointsFile::Bare(points) => points,
                },
                None => {
                    let base = base_point(&q, &r, base)?;
                    designs::enumerate_rational_points(&q, &r, &base, *height).map_err(err)?
                }
            };
            let opts = SearchOptions {
                budget: *budget,
                workers: *workers,
            };
            let outcome = designs::search_tight_designs(&q, &r, *t, &pool, &opts).map_err(err)?;
            write_output(out, &outcome.designs)?;
            let rep = &outcome.report;
            let summary = format!(
                "{} tight {t}-design(s) of size {} in a pool of {}; {} nodes, {} pruned{}",
                rep.hits,
                rep.target_size,
                rep.pool_size,
                rep.nodes_visited,
                rep.pruned,
                if rep.budget_exhausted {
                    ", budget exhausted"
                } else {
                    ""
                }
            );
            Ok(RunReport::new(
                verb,
                Status::Ok,
                summary,
                json!({ "report": rep, "designs": outcome.designs }),
            ))
        }
    }
}
