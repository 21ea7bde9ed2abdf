//! Batch front end: one JSON request in, one versioned JSON report out.
//!
//! Exit codes: 0 success, 1 domain error or failed check, 2 I/O or parse error.

use crate::affine::LarsKind;
use crate::affine::{lars_contains, AffineRoot, AffinisationSpec, Weight};
use crate::autnorm::{
    root_map, standardize, verify_certificate, OperatorSpec, Orders, RootMapReport, StandardizationCertificate,
    VerificationReport,
};
use crate::energy::{
    character_of, min_energy_slanted, twisted_min_energy_with_certificate, Character, EnergyOptions, EnergyReport,
};
use crate::loopalg::{bracket, identity_checks, phi_hat, DoubleExtElement, LoopContext};
use crate::rootdata::Functional;
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::path::PathBuf;

pub const SCHEMA: &str = "v1";

#[derive(Debug, Parser)]
#[command(name = "affinisation", version, about = "Exact computations for twisted affinisations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Standardize a finite-order operator and verify the certificate.
    Normalize,
    /// List the affine roots of a spec in a mode window.
    Roots,
    /// Tabulate the root map of an operator's certificate.
    MapRoots,
    /// Check bracket preservation and Weyl group coincidence.
    CheckIsom,
    /// Check the bracket identities of a standard affinisation on seeded triples.
    BracketCheck,
    /// Minimal energy of a weight on a (slanted) standard affinisation.
    MinEnergy,
    /// Minimal energy for a twisted affinisation given by an operator.
    TwistedEnergy,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Normalize => "normalize",
            Command::Roots => "roots",
            Command::MapRoots => "map-roots",
            Command::CheckIsom => "check-isom",
            Command::BracketCheck => "bracket-check",
            Command::MinEnergy => "min-energy",
            Command::TwistedEnergy => "twisted-energy",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Request JSON; read from stdin when omitted.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Report JSON; written to stdout when omitted.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Lattice bound of the brute-force orbit oracle.
    #[arg(long, global = true, default_value_t = 10)]
    pub bound: i64,
    /// Mode window `|n| ≤ window`; each command has its own default.
    #[arg(long, global = true)]
    pub window: Option<i64>,
    /// Seed for sampled elements.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for orbit searches.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

impl Default for Options {
    fn default() -> Self {
        Options { input: None, output: None, bound: 10, window: None, seed: 0, jobs: None }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("I/O error: {0}")]
    Io(String),
    #[error("malformed input at {0}")]
    Parse(String),
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Io(_) | CliError::Parse(_) => 2,
        }
    }
}

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

/// A report with the request echoed back.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report<T> {
    pub schema: String,
    pub command: String,
    pub passed: bool,
    pub input: Value,
    pub result: T,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OperatorRequest {
    operator: OperatorSpec,
    #[serde(default)]
    nu: Functional,
    #[serde(default)]
    nu_prime: Functional,
    lambda: Option<Weight>,
    pairs: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecRequest {
    spec: AffinisationSpec,
    lambda: Option<Weight>,
    chi: Option<Character>,
    #[serde(default)]
    nu_prime: Functional,
    triples: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizeResult {
    pub certificate: StandardizationCertificate,
    pub verification: VerificationReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootsResult {
    pub window: i64,
    pub count: usize,
    pub roots: Vec<AffineRoot>,
}

/// The parts of a certificate that the energy and root reports depend on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateSummary {
    pub lars: LarsKind,
    pub rank: usize,
    pub mu: Functional,
    pub exponents: Vec<i64>,
    pub orders: Orders,
}

impl From<&StandardizationCertificate> for CertificateSummary {
    fn from(c: &StandardizationCertificate) -> Self {
        CertificateSummary {
            lars: c.lars,
            rank: c.rank,
            mu: c.mu.clone(),
            exponents: c.exponents.clone(),
            orders: c.orders,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapRootsResult {
    pub certificate: CertificateSummary,
    pub root_map: RootMapReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckIsomResult {
    pub certificate: CertificateSummary,
    pub pairs: usize,
    pub bracket_failures: usize,
    pub cartan_failures: usize,
    pub weyl_coincidence: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BracketCheckResult {
    pub lars: LarsKind,
    pub dim: usize,
    pub triples: usize,
    pub antisymmetry_failures: usize,
    pub jacobi_failures: usize,
    pub invariance_failures: usize,
    pub derivation_skew_failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyResult {
    pub character: Character,
    pub report: EnergyReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwistedEnergyResult {
    pub certificate: CertificateSummary,
    pub report: EnergyReport,
}

fn parse<T: DeserializeOwned>(input: &str) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(input);
    serde_path_to_error::deserialize(de).map_err(|e| CliError::Parse(format!("{}: {}", e.path(), e.inner())))
}

fn require<T>(x: Option<T>, field: &str) -> Result<T, CliError> {
    x.ok_or_else(|| CliError::Parse(format!("{field}: missing field `{field}`")))
}

fn certify(op: &OperatorSpec) -> Result<StandardizationCertificate, CliError> {
    op.validate().map_err(domain)?;
    standardize(op).map_err(domain)
}

fn report<T: Serialize>(cmd: Command, passed: bool, input: Value, result: T) -> Result<(Value, bool), CliError> {
    let r = Report { schema: SCHEMA.into(), command: cmd.name().into(), passed, input, result };
    Ok((serde_json::to_value(r).map_err(|e| CliError::Io(e.to_string()))?, passed))
}

fn window_modes(w: i64) -> Vec<i64> {
    (-w..=w).collect()
}

/// Runs one command on the request text. Returns the report and whether
/// all of its checks passed.
pub fn execute(cmd: Command, input: &str, opts: &Options) -> Result<(Value, bool), CliError> {
    let echo: Value = parse(input)?;
    let energy_opts = EnergyOptions { bound: opts.bound, oracle: true };
    match cmd {
        Command::Normalize => {
            let req: OperatorRequest = parse(input)?;
            let cert = certify(&req.operator)?;
            let verification = verify_certificate(&req.operator, &cert);
            report(cmd, verification.passed, echo, NormalizeResult { certificate: cert, verification })
        }
        Command::Roots => {
            let req: SpecRequest = parse(input)?;
            req.spec.validate().map_err(domain)?;
            let w = opts.window.unwrap_or(2);
            let mut roots = Vec::new();
            for n in -w..=w {
                if n != 0 && lars_contains(req.spec.lars, &AffineRoot::imaginary(n), &req.spec.base).map_err(domain)? {
                    roots.push(AffineRoot::imaginary(n));
                }
                for a in req.spec.finite_roots() {
                    let r = AffineRoot::new(a, n);
                    if lars_contains(req.spec.lars, &r, &req.spec.base).map_err(domain)? {
                        roots.push(r);
                    }
                }
            }
            roots.sort();
            report(cmd, true, echo, RootsResult { window: w, count: roots.len(), roots })
        }
        Command::MapRoots => {
            let req: OperatorRequest = parse(input)?;
            let cert = certify(&req.operator)?;
            let w = opts.window.unwrap_or(4 * cert.orders.phi as i64);
            let rm = root_map(&cert, &req.nu, w).map_err(domain)?;
            report(cmd, rm.passed(), echo, MapRootsResult { certificate: (&cert).into(), root_map: rm })
        }
        Command::CheckIsom => {
            let req: OperatorRequest = parse(input)?;
            let cert = certify(&req.operator)?;
            let src = cert.source_context(&req.nu).map_err(domain)?;
            let dst = cert.target_context(&req.nu).map_err(domain)?;
            let modes = window_modes(opts.window.unwrap_or(cert.orders.phi as i64));
            let pairs = req.pairs.unwrap_or(20);
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            let map = |x: &DoubleExtElement| phi_hat(&cert, &src.spec, &dst.spec, x).map_err(domain);
            let (mut bracket_failures, mut cartan_failures) = (0, 0);
            for _ in 0..pairs {
                let a = cert.random_source_element(&req.operator, &mut rng, &modes, 0.4);
                let b = cert.random_source_element(&req.operator, &mut rng, &modes, 0.4);
                let lhs = map(&bracket(&src, &a, &b).map_err(domain)?)?;
                let rhs = bracket(&dst, &map(&a)?, &map(&b)?).map_err(domain)?;
                bracket_failures += (lhs != rhs) as usize;
                let h = src.random_cartan(&mut rng);
                cartan_failures += (map(&h)? != h) as usize;
            }
            let rm = root_map(&cert, &req.nu, 4 * cert.orders.phi as i64).map_err(domain)?;
            let result = CheckIsomResult {
                certificate: (&cert).into(),
                pairs,
                bracket_failures,
                cartan_failures,
                weyl_coincidence: rm.reflections_match,
            };
            let passed = bracket_failures == 0 && cartan_failures == 0 && rm.reflections_match;
            report(cmd, passed, echo, result)
        }
        Command::BracketCheck => {
            let req: SpecRequest = parse(input)?;
            req.spec.validate().map_err(domain)?;
            let ctx = LoopContext::standard(req.spec.clone(), 4).map_err(domain)?;
            let modes = window_modes(opts.window.unwrap_or(3));
            let triples = req.triples.unwrap_or(100);
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            let mut fails = [0usize; 4];
            for _ in 0..triples {
                let mut gen = || ctx.random_element(&mut rng, &modes, 0.3);
                let (a, b, c) = (gen(), gen(), gen());
                let r = identity_checks(&ctx, &a, &b, &c).map_err(domain)?;
                for (f, ok) in fails.iter_mut().zip([r.antisymmetry, r.jacobi, r.invariance, r.derivation_skew]) {
                    *f += (!ok) as usize;
                }
            }
            let result = BracketCheckResult {
                lars: req.spec.lars,
                dim: ctx.dim(),
                triples,
                antisymmetry_failures: fails[0],
                jacobi_failures: fails[1],
                invariance_failures: fails[2],
                derivation_skew_failures: fails[3],
            };
            report(cmd, fails.iter().all(|&f| f == 0), echo, result)
        }
        Command::MinEnergy => {
            let req: SpecRequest = parse(input)?;
            req.spec.validate().map_err(domain)?;
            let lam = require(req.lambda, "lambda")?;
            let slant = req.spec.total_slant();
            let chi = req.chi.unwrap_or_else(|| character_of(&slant, &req.nu_prime, crate::rational::q(0)));
            let rep = min_energy_slanted(&req.spec.unslanted(), &slant, &lam, &chi, energy_opts).map_err(domain)?;
            let ok = rep.method_agreement != Some(false);
            report(cmd, ok, echo, EnergyResult { character: chi, report: rep })
        }
        Command::TwistedEnergy => {
            let req: OperatorRequest = parse(input)?;
            let lam = require(req.lambda, "lambda")?;
            let cert = certify(&req.operator)?;
            let rep = twisted_min_energy_with_certificate(&cert, &lam, &req.nu, &req.nu_prime, energy_opts)
                .map_err(domain)?;
            let ok = rep.method_agreement != Some(false);
            report(cmd, ok, echo, TwistedEnergyResult { certificate: (&cert).into(), report: rep })
        }
    }
}

/// Reads the request, runs the command, writes the report; returns the exit code.
pub fn run(cli: &Cli) -> i32 {
    if let Some(j) = cli.opts.jobs {
        // Fails only if a pool already exists, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global();
    }
    let input = match &cli.opts.input {
        Some(p) => std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => std::io::read_to_string(std::io::stdin()).map_err(|e| CliError::Io(e.to_string())),
    };
    let result = input.and_then(|text| execute(cli.command, &text, &cli.opts));
    match result {
        Ok((value, passed)) => {
            let mut text = serde_json::to_string_pretty(&value).expect("report serializes");
            text.push('\n');
            let written = match &cli.opts.output {
                Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            match written {
                Err(e) => {
                    eprintln!("error: {e}");
                    e.exit_code()
                }
                Ok(()) if passed => 0,
                Ok(()) => {
                    eprintln!("error: {} reported failed checks", cli.command.name());
                    1
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
