//! Subcommands. Every command returns its exit code and the JSON written to
//! stdout; failures before a verdict is reached become exit code 2.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use livsic_core::abelian::{self, Alpha, CohomologySolution, Degenerate, SolveOutcome, ViolationWitness};
use livsic_core::lattice::LatticeReport;
use livsic_core::matrix::Mat;
use livsic_core::nonabelian::{
    self, AdMode, DistortionReport, DistortionVerdict, MatrixCocycle, MatrixOutcome, MatrixResiduals, MatrixWitness,
};
use livsic_core::random;
use livsic_core::sft::{admissible_words, enumerate_periodic_orbits, validate_sft};
use livsic_core::skew::{
    check_transitivity, enumerate_trivial_class_orbits, frobenius_class, ClassTag, FrobeniusClassTag, NonTransitivity,
    SkewSystem, TransitivityVerdict,
};
use livsic_core::{Limits, Rational, Word};

use crate::document::{
    self, float_value, matrix_value, parse_block_map, parse_matrix, parse_rational, rational_value, word_key, Cocycle,
    Solution, SolutionDocument, SystemDocument,
};
use crate::error::CliError;

pub const TOOL: &str = concat!("livsic ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Parser)]
#[command(name = "livsic", version, about = "Cohomological equations for skew products of subshifts of finite type", color = clap::ColorChoice::Never)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Rational,
    Matrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    So2,
    Unipotent,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that the system document is well formed and the shift irreducible.
    Validate { system: PathBuf },
    /// Decide transitivity of the skew product.
    CheckTransitivity { system: PathBuf },
    /// List primitive periodic orbits with their Frobenius classes.
    Orbits {
        system: PathBuf,
        #[arg(long)]
        max_period: usize,
        #[arg(long)]
        trivial_only: bool,
    },
    /// Check that the cocycle vanishes on every closed lift.
    VerifyVanishing {
        system: PathBuf,
        #[arg(long)]
        max_period: usize,
        #[arg(long, default_value_t = nonabelian::SOLUTION_TOL)]
        tol: f64,
    },
    /// Solve for the transfer function and homomorphism.
    Solve {
        system: PathBuf,
        #[arg(long, default_value_t = nonabelian::SOLUTION_TOL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a solution document against the system's cocycle.
    VerifySolution {
        system: PathBuf,
        #[arg(long)]
        solution: PathBuf,
        #[arg(long, default_value_t = nonabelian::SOLUTION_TOL)]
        tol: f64,
    },
    /// Replace the system's cocycle by one built from `u` and `alpha`.
    Generate {
        system: PathBuf,
        #[arg(long, conflicts_with = "random", required_unless_present = "random")]
        u: Option<PathBuf>,
        #[arg(long)]
        random: bool,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        block_length: usize,
        #[arg(long, value_enum, default_value_t = Kind::Rational)]
        kind: Kind,
        #[arg(long, value_enum)]
        family: Option<Family>,
    },
    /// Estimate the distortion constants of a matrix cocycle.
    Distortion {
        system: PathBuf,
        #[arg(long)]
        depth: usize,
        #[arg(long, conflicts_with = "ambient")]
        algebra: Option<PathBuf>,
        #[arg(long)]
        ambient: bool,
    },
    /// Check the bunching inequality `theta > threshold`.
    CheckDistortion {
        system: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, default_value_t = 10)]
        depth: usize,
        #[arg(long, conflicts_with = "ambient")]
        algebra: Option<PathBuf>,
        #[arg(long)]
        ambient: bool,
        #[arg(long, default_value_t = nonabelian::DISTORTION_TOL)]
        tol: f64,
    },
}

/// Exit code and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs one invocation. `args[0]` is the program name. `env` supplies the
/// cap overrides.
pub fn run(args: &[String], env: impl Fn(&str) -> Option<String>) -> Output {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
                    if e.exit_code() == 0 =>
                {
                    Output { code: 0, stdout: e.to_string(), stderr: String::new() }
                }
                _ => failure(&CliError::usage(e.to_string().trim_end())),
            };
        }
    };
    let result = limits_from_env(&env).and_then(|limits| {
        let ctx = Context { args: args[1..].to_vec(), limits };
        ctx.dispatch(cli.command)
    });
    match result {
        Ok((code, value)) => Output { code, stdout: document::render(&value), stderr: String::new() },
        Err(e) => failure(&e),
    }
}

fn failure(e: &CliError) -> Output {
    Output { code: 2, stdout: String::new(), stderr: document::render(&e.to_value()) }
}

pub fn limits_from_env(env: impl Fn(&str) -> Option<String>) -> Result<Limits, CliError> {
    let mut limits = Limits::default();
    for (var, slot) in [("LIVSIC_MAX_STATES", &mut limits.max_states), ("LIVSIC_MAX_PERIOD", &mut limits.max_period)] {
        if let Some(text) = env(var) {
            *slot = text.trim().parse().map_err(|_| CliError::usage(format!("{var} must be a non-negative integer, got {text:?}")))?;
        }
    }
    Ok(limits)
}

struct Context {
    args: Vec<String>,
    limits: Limits,
}

type CmdResult = Result<(i32, Value), CliError>;

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(&path.display().to_string(), &e))
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    serde_json::from_str(&read(path)?).map_err(|e| CliError::parse(format!("{}: invalid JSON: {e}", path.display()), ""))
}

impl Context {
    fn dispatch(&self, command: Command) -> CmdResult {
        match command {
            Command::Validate { system } => self.validate(&system),
            Command::CheckTransitivity { system } => self.check_transitivity(&system),
            Command::Orbits { system, max_period, trivial_only } => self.orbits(&system, max_period, trivial_only),
            Command::VerifyVanishing { system, max_period, tol } => self.verify_vanishing(&system, max_period, tol),
            Command::Solve { system, tol, out } => self.solve(&system, tol, out.as_deref()),
            Command::VerifySolution { system, solution, tol } => self.verify_solution(&system, &solution, tol),
            Command::Generate { system, u, random: _, alpha, seed, block_length, kind, family } => {
                self.generate(&system, u.as_deref(), &alpha, seed, block_length, kind, family)
            }
            Command::Distortion { system, depth, algebra, ambient } => {
                let (_, report) = self.distortion_report(&system, depth, algebra.as_deref(), ambient)?;
                Ok((0, distortion_value(&report)))
            }
            Command::CheckDistortion { system, theta, depth, algebra, ambient, tol } => {
                self.check_distortion(&system, theta, depth, algebra.as_deref(), ambient, tol)
            }
        }
    }

    fn load(&self, path: &Path) -> Result<SystemDocument, CliError> {
        SystemDocument::parse(&read(path)?, &self.limits)
    }

    fn load_with_cocycle(&self, path: &Path) -> Result<(SystemDocument, Cocycle), CliError> {
        let doc = self.load(path)?;
        let c = doc.cocycle.clone().ok_or_else(|| CliError::parse("this command needs a cocycle", "/cocycle"))?;
        Ok((doc, c))
    }

    fn provenance(&self, seed: Option<u64>) -> Value {
        json!({ "tool": TOOL, "command": self.args, "seed": seed })
    }

    fn validate(&self, path: &Path) -> CmdResult {
        let doc = self.load(path)?;
        let report = validate_sft(doc.system.sft())?;
        let group = match doc.system.group() {
            livsic_core::group::Group::Finite(g) => json!({ "type": "finite", "order": g.order(), "elements": g.names() }),
            livsic_core::group::Group::FreeAbelian { rank } => json!({ "type": "free_abelian", "rank": rank }),
        };
        let cocycle = match &doc.cocycle {
            None => Value::Null,
            Some(Cocycle::Rational(f)) => json!({ "kind": "rational", "range": f.range(), "values": f.values().len() }),
            Some(Cocycle::Matrix(f)) => json!({
                "kind": "matrix",
                "range": f.values().range(),
                "values": f.values().values().len(),
                "dimension": f.dim(),
                "algebra": f.algebra().map(|a| a.len()),
            }),
        };
        Ok((
            0,
            json!({
                "valid": true,
                "sft": { "k": report.alphabet_size, "irreducible": report.irreducible, "period": report.period, "aperiodic": report.aperiodic },
                "group": group,
                "cocycle": cocycle,
            }),
        ))
    }

    fn check_transitivity(&self, path: &Path) -> CmdResult {
        let doc = self.load(path)?;
        Ok(match check_transitivity(&doc.system, &self.limits)? {
            TransitivityVerdict::Transitive => (0, json!({ "verdict": "transitive" })),
            TransitivityVerdict::NotTransitive(nt) => {
                (1, json!({ "verdict": "not_transitive", "certificate": nontransitivity_value(&doc.system, &nt, 1, &self.limits)? }))
            }
            TransitivityVerdict::Unknown(ev) => (
                0,
                json!({
                    "verdict": "unknown",
                    "evidence": {
                        "probe_depth": ev.probe_depth,
                        "probed_orbits": ev.probed_orbits,
                        "probed_lattice": lattice_value(&ev.probed_lattice),
                        "zero_in_interior": ev.zero_in_interior,
                    },
                }),
            ),
        })
    }

    fn orbits(&self, path: &Path, max_period: usize, trivial_only: bool) -> CmdResult {
        let doc = self.load(path)?;
        let system = &doc.system;
        let list: Vec<(Word, FrobeniusClassTag)> = if trivial_only {
            enumerate_trivial_class_orbits(system, max_period, &self.limits)?.into_iter().map(|(o, t)| (o.word().clone(), t)).collect()
        } else {
            enumerate_periodic_orbits(system.sft(), max_period, &self.limits)?
                .into_iter()
                .map(|o| frobenius_class(system, &o).map(|t| (o.word().clone(), t)))
                .collect::<Result<_, _>>()?
        };
        let orbits: Vec<Value> = list
            .iter()
            .map(|(w, tag)| json!({ "word": word_key(w), "period": w.len(), "class": class_value(system, tag) }))
            .collect();
        Ok((0, json!({ "max_period": max_period, "trivial_only": trivial_only, "count": orbits.len(), "orbits": orbits })))
    }

    fn verify_vanishing(&self, path: &Path, max_period: usize, tol: f64) -> CmdResult {
        let (doc, c) = self.load_with_cocycle(path)?;
        let witness = match &c {
            Cocycle::Rational(f) => abelian::verify_vanishing(&doc.system, f, max_period, &self.limits)?.map(|w| witness_value(&w)),
            Cocycle::Matrix(f) => nonabelian::verify_matrix_vanishing(&doc.system, f, max_period, tol, &self.limits)?
                .map(|w| matrix_witness_value(&w, tol)),
        };
        Ok(match witness {
            None => (0, json!({ "status": "ok", "max_period": max_period })),
            Some(w) => (1, json!({ "status": "violation", "max_period": max_period, "witness": w })),
        })
    }

    fn solve(&self, path: &Path, tol: f64, out: Option<&Path>) -> CmdResult {
        let (doc, c) = self.load_with_cocycle(path)?;
        let system = &doc.system;
        let seed = doc.raw.pointer("/provenance/seed").and_then(Value::as_u64);
        let solved = |solution: Solution, certification: Value, degenerate: Option<Value>| -> CmdResult {
            let mut extra = Map::new();
            extra.insert("certification".into(), certification);
            extra.insert("provenance".into(), self.provenance(seed));
            if let Some(d) = degenerate {
                extra.insert("degenerate".into(), d);
            }
            let value = SolutionDocument { solution, extra }.to_value(system.group());
            if let Some(p) = out {
                std::fs::write(p, document::render(&value)).map_err(|e| CliError::io(&p.display().to_string(), &e))?;
            }
            Ok((0, value))
        };
        match &c {
            Cocycle::Rational(f) => match abelian::solve(system, f, &self.limits)? {
                SolveOutcome::Solved(s) => {
                    let cert = self.rational_certification(system, f, &s)?;
                    solved(Solution::Rational(s), cert, None)
                }
                SolveOutcome::Degenerate(Degenerate::Underdetermined { solution, free_alpha, cycle_lattice }) => {
                    let cert = self.rational_certification(system, f, &solution)?;
                    let d = json!({
                        "reason": "underdetermined",
                        "free_alpha": free_alpha.iter().map(|i| format!("e{}", i + 1)).collect::<Vec<_>>(),
                        "cycle_lattice": lattice_value(&cycle_lattice),
                    });
                    solved(Solution::Rational(solution), cert, Some(d))
                }
                SolveOutcome::Degenerate(Degenerate::Inconsistent { block_length, circulation, weight }) => Ok((
                    1,
                    json!({
                        "status": "inconsistent",
                        "block_length": block_length,
                        "circulation": circulation.iter().map(|(w, m)| json!({ "edge": word_key(w), "multiplicity": m.to_string() })).collect::<Vec<_>>(),
                        "weight": rational_value(&weight),
                    }),
                )),
                SolveOutcome::Violation(w) => Ok((1, json!({ "status": "violation", "witness": witness_value(&w) }))),
                SolveOutcome::NotTransitive(nt) => Ok((
                    1,
                    json!({ "status": "not_transitive", "certificate": nontransitivity_value(system, &nt, f.block_length(), &self.limits)? }),
                )),
            },
            Cocycle::Matrix(f) => match nonabelian::solve_matrix_finite(system, f, tol, &self.limits)? {
                MatrixOutcome::Solved(s) => {
                    let report = nonabelian::verify_matrix_solution(system, f, &s, tol, &self.limits)?;
                    let cert = json!({
                        "certified": report.certified(),
                        "exact": false,
                        "residuals": residuals_value(&report.residuals),
                        "tolerance": float_value(tol),
                    });
                    solved(Solution::Matrix(s), cert, None)
                }
                MatrixOutcome::Violation(w) => Ok((1, json!({ "status": "violation", "witness": matrix_witness_value(&w, tol) }))),
                MatrixOutcome::NotTransitive(nt) => Ok((
                    1,
                    json!({ "status": "not_transitive", "certificate": nontransitivity_value(system, &nt, f.block_length(), &self.limits)? }),
                )),
                MatrixOutcome::NoCentralShift { spread, residuals } => Ok((
                    1,
                    json!({
                        "status": "no_central_shift",
                        "spread": float_value(spread),
                        "residuals": residuals_value(&residuals),
                        "tolerance": float_value(tol),
                    }),
                )),
            },
        }
    }

    fn rational_certification(
        &self,
        system: &SkewSystem,
        f: &livsic_core::cocycle::RationalCocycle,
        s: &CohomologySolution,
    ) -> Result<Value, CliError> {
        let report = abelian::verify_solution(system, f, s, &self.limits)?;
        let max = report.edges.iter().map(|e| num_traits::Signed::abs(&e.residual)).max().unwrap_or_default();
        Ok(json!({ "certified": report.certified(), "exact": true, "max_residual": rational_value(&max) }))
    }

    fn verify_solution(&self, path: &Path, solution: &Path, tol: f64) -> CmdResult {
        let (doc, c) = self.load_with_cocycle(path)?;
        let system = &doc.system;
        let sol = SolutionDocument::parse(&read(solution)?, system)?;
        match (&c, &sol.solution) {
            (Cocycle::Rational(f), Solution::Rational(s)) => {
                let report = abelian::verify_solution(system, f, s, &self.limits)?;
                let value = json!({
                    "certified": report.certified(),
                    "shape": report.shape,
                    "edges": report.edges.iter().map(|e| json!({ "edge": word_key(&e.edge), "residual": rational_value(&e.residual) })).collect::<Vec<_>>(),
                    "homomorphism": pairs_value(system, report.homomorphism.iter().map(|&(a, b)| (a, b, None))),
                });
                Ok((if report.certified() { 0 } else { 1 }, value))
            }
            (Cocycle::Matrix(f), Solution::Matrix(s)) => {
                let report = nonabelian::verify_matrix_solution(system, f, s, tol, &self.limits)?;
                let group = system.group().as_finite()?;
                let value = json!({
                    "certified": report.certified(),
                    "shape": report.shape,
                    "edges": report.edges.iter().map(|(w, r)| json!({ "edge": word_key(w), "residual": float_value(*r) })).collect::<Vec<_>>(),
                    "homomorphism": pairs_value(system, report.homomorphism.iter().map(|&(a, b, r)| (a, b, Some(r)))),
                    "centrality": report.centrality.iter().map(|(g, w, r)| json!({ "element": group.name(*g), "word": word_key(w), "residual": float_value(*r) })).collect::<Vec<_>>(),
                    "residuals": residuals_value(&report.residuals),
                    "tolerance": float_value(tol),
                });
                Ok((if report.certified() { 0 } else { 1 }, value))
            }
            _ => Err(CliError::parse("solution kind does not match the cocycle kind", "/kind")),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn generate(
        &self,
        path: &Path,
        u_path: Option<&Path>,
        alpha: &str,
        seed: u64,
        block_length: usize,
        kind: Kind,
        family: Option<Family>,
    ) -> CmdResult {
        let doc = self.load(path)?;
        let system = &doc.system;
        let k = system.sft().alphabet_size();
        let mut rng = random::rng(seed);
        let cocycle = match kind {
            Kind::Rational => {
                let (r, u) = match u_path {
                    Some(p) => parse_block_map(&read_json(p)?, "", k, parse_rational)?,
                    None => (block_length, random::potential(&mut rng, system.sft(), block_length)?),
                };
                let alpha = parse_rational_alpha(alpha, system, &mut rng)?;
                Cocycle::Rational(abelian::generate_cocycle(system, r, &u, &alpha, &self.limits)?)
            }
            Kind::Matrix => {
                let group = system.group().as_finite()?;
                let (r, u) = match u_path {
                    Some(p) => parse_block_map(&read_json(p)?, "", k, parse_matrix)?,
                    None => match family {
                        Some(Family::So2) => (block_length, random::so2_potential(&mut rng, system.sft(), block_length)?),
                        Some(Family::Unipotent) => (block_length, random::unipotent_potential(&mut rng, system.sft(), block_length)?),
                        None => return Err(CliError::usage("--random with --kind matrix needs --family")),
                    },
                };
                let dim = u.values().next().map_or(0, Mat::dim);
                let alpha = match alpha {
                    "identity" => (0..group.order()).map(|_| Mat::identity(dim)).collect(),
                    "random" => match family {
                        Some(Family::Unipotent) => random::unipotent_alpha(group),
                        _ if dim == 2 => random::so2_alpha(&mut rng, group),
                        _ => (0..group.order()).map(|_| Mat::identity(dim)).collect(),
                    },
                    spec => {
                        let i: usize = spec
                            .strip_prefix("character:")
                            .and_then(|s| s.parse().ok())
                            .ok_or_else(|| CliError::usage(format!("bad --alpha {spec:?}: expected identity, random or character:<i>")))?;
                        let chars = group.circle_characters();
                        let chi = chars.get(i).ok_or_else(|| CliError::usage(format!("character index {i} out of range (group has {})", chars.len())))?;
                        if dim != 2 {
                            return Err(CliError::core(&livsic_core::Error::DimensionMismatch { expected: 2, found: dim }));
                        }
                        chi.iter().map(|&(n, d)| Mat::rotation2(2.0 * std::f64::consts::PI * n as f64 / d as f64)).collect()
                    }
                };
                let c = nonabelian::generate_matrix_cocycle(system, r, &u, &alpha, nonabelian::SOLUTION_TOL, &self.limits)?;
                let algebra = match family {
                    Some(Family::So2) => Some(nonabelian::so2_algebra()),
                    Some(Family::Unipotent) => Some(nonabelian::heisenberg_algebra()),
                    None => None,
                };
                Cocycle::Matrix(MatrixCocycle::new(c.values().clone(), algebra, document::ALGEBRA_TOL)?)
            }
        };
        let mut value = doc.with_cocycle(&cocycle);
        value["provenance"] = self.provenance(Some(seed));
        Ok((0, value))
    }

    fn distortion_report(&self, path: &Path, depth: usize, algebra: Option<&Path>, ambient: bool) -> Result<(SystemDocument, DistortionReport), CliError> {
        let (doc, c) = self.load_with_cocycle(path)?;
        let Cocycle::Matrix(mut f) = c else {
            return Err(CliError::parse("distortion needs a matrix cocycle", "/cocycle/kind"));
        };
        if let Some(p) = algebra {
            let basis = document::parse_algebra(&read_json(p)?, "")?;
            f = MatrixCocycle::new(f.values().clone(), Some(basis), document::ALGEBRA_TOL)?;
        }
        let mode = if ambient || f.algebra().is_none() { AdMode::Ambient } else { AdMode::Declared };
        let report = nonabelian::estimate_distortion(&f, depth, mode, &self.limits)?;
        Ok((doc, report))
    }

    fn check_distortion(&self, path: &Path, theta: f64, depth: usize, algebra: Option<&Path>, ambient: bool, tol: f64) -> CmdResult {
        let (_, report) = self.distortion_report(path, depth, algebra, ambient)?;
        let verdict = nonabelian::check_distortion_assumption(&report, theta, tol);
        let (code, name) = match verdict {
            DistortionVerdict::Satisfied => (0, "satisfied"),
            DistortionVerdict::Violated => (1, "violated"),
            DistortionVerdict::Marginal => (1, "marginal"),
        };
        Ok((
            code,
            json!({
                "verdict": name,
                "theta": float_value(theta),
                "threshold": float_value(report.threshold),
                "gap": float_value(theta - report.threshold),
                "tolerance": float_value(tol),
                "report": distortion_value(&report),
            }),
        ))
    }
}

/// `--alpha` for rational cocycles: `random`, or comma-separated rationals
/// (one per coordinate of `Z^d`; any number of zeros for finite groups).
fn parse_rational_alpha(spec: &str, system: &SkewSystem, rng: &mut random::SeededRng) -> Result<Alpha, CliError> {
    if spec == "random" {
        return Ok(random::alpha(rng, system.group()));
    }
    let values = spec
        .split(',')
        .map(|p| p.trim().parse::<Rational>().map_err(|_| CliError::usage(format!("bad rational {p:?} in --alpha"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Alpha::Linear(values))
}

fn witness_value(w: &ViolationWitness) -> Value {
    json!({
        "orbit": word_key(w.orbit.word()),
        "repetitions": w.repetitions,
        "period": w.period(),
        "word": word_key(&w.word()),
        "sum": rational_value(&w.sum),
    })
}

fn matrix_witness_value(w: &MatrixWitness, tol: f64) -> Value {
    json!({
        "orbit": word_key(w.orbit.word()),
        "repetitions": w.repetitions,
        "period": w.period(),
        "word": word_key(&w.word()),
        "product": matrix_value(&w.product),
        "distance": float_value(w.distance),
        "tolerance": float_value(tol),
    })
}

fn residuals_value(r: &MatrixResiduals) -> Value {
    json!({
        "reconstruction": float_value(r.reconstruction),
        "homomorphism": float_value(r.homomorphism),
        "centrality": float_value(r.centrality),
    })
}

fn lattice_value(l: &LatticeReport) -> Value {
    json!({ "rank": l.rank, "full": l.full, "divisors": l.divisors.iter().map(|d| d.to_string()).collect::<Vec<_>>() })
}

fn pairs_value(system: &SkewSystem, pairs: impl Iterator<Item = (usize, usize, Option<f64>)>) -> Value {
    let names = |i: usize| match system.group() {
        livsic_core::group::Group::Finite(g) => g.name(i).to_string(),
        _ => i.to_string(),
    };
    Value::Array(
        pairs
            .map(|(a, b, r)| {
                let mut v = json!({ "a": names(a), "b": names(b) });
                if let Some(r) = r {
                    v["residual"] = float_value(r);
                }
                v
            })
            .collect(),
    )
}

fn class_value(system: &SkewSystem, tag: &FrobeniusClassTag) -> Value {
    match (&tag.class, system.group()) {
        (ClassTag::Class(c), livsic_core::group::Group::Finite(g)) => json!({
            "representative": g.name(c.representative),
            "members": c.members.iter().map(|&m| g.name(m)).collect::<Vec<_>>(),
            "trivial": tag.trivial,
        }),
        (ClassTag::Vector(v), _) => json!({ "vector": v, "trivial": tag.trivial }),
        _ => unreachable!("class tags match their group"),
    }
}

/// Certificate of non-transitivity. Unreachable vertices are reported as
/// `(block, element)` with blocks of length `r`.
fn nontransitivity_value(system: &SkewSystem, nt: &NonTransitivity, r: usize, limits: &Limits) -> Result<Value, CliError> {
    Ok(match nt {
        NonTransitivity::Unreachable { from, to } => {
            let group = system.group().as_finite()?;
            let blocks = admissible_words(system.sft(), r, limits.max_states)?;
            json!({
                "kind": "unreachable",
                "block_length": r,
                "from": document::vertex_value(&blocks, group, *from),
                "to": document::vertex_value(&blocks, group, *to),
            })
        }
        NonTransitivity::ProperCycleLattice(l) => json!({ "kind": "proper_cycle_lattice", "lattice": lattice_value(l) }),
        NonTransitivity::Drift { functional, min_cycle_mean } => json!({
            "kind": "drift",
            "functional": functional.iter().map(rational_value).collect::<Vec<_>>(),
            "min_cycle_mean": rational_value(min_cycle_mean),
        }),
    })
}

fn distortion_value(r: &DistortionReport) -> Value {
    let seq = |s: &[f64]| Value::Array(s.iter().map(|&x| float_value(x)).collect());
    json!({
        "depth": r.depth,
        "mode": match r.mode { AdMode::Declared => "declared", AdMode::Ambient => "ambient" },
        "mu_s": float_value(r.mu_s),
        "mu_u": float_value(r.mu_u),
        "mu_s_upper": float_value(r.mu_s_upper),
        "mu_u_upper": float_value(r.mu_u_upper),
        "mu_s_sequence": seq(&r.mu_s_sequence),
        "mu_u_sequence": seq(&r.mu_u_sequence),
        "threshold": float_value(r.threshold),
    })
}
