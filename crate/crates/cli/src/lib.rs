//! Experiment dispatch, parameter parsing and report writing for the `qlift` binary.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use qlift_core::blockenc::BlockEncoding;
use qlift_core::channels::DensityOperator;
use qlift_core::circuit::Circuit;
use qlift_core::mat::{op_norm, ComplexMatrix};
use qlift_core::primitives::{dme_error, dme_required_steps, DmeConfig};
use qlift_core::random::{random_density, seeded_rng};
use qlift_core::reductions::{
    ampl_est_tester, bound_calculator, entropy_reduction, gibbs_tester, hamsim_tester, lifting_tester,
    phase_est_tester, search_to_gibbs, spectrum_wrapper, tightness_tester, BoundInput, Check, DisInstance,
    ExperimentReport, GibbsVariant, InnerTester, LiftMode, CSV_HEADER,
};
use qlift_core::stats::derive_seed;
use qlift_core::suite::{verify_all, DEFAULT_CONSTRUCTOR_INSTANCES};

/// Every runnable id with its accepted `--param` keys.
pub const EXPERIMENTS: &[(&str, &[&str], &str)] = &[
    ("list", &[], "print experiment ids"),
    ("verify_all", &["instances"], "randomized contract sweep over every construction"),
    ("lifting", &["epsilon", "mode", "circuit"], "query tester run on sample-built oracles"),
    ("tightness", &["epsilon"], "amplitude-estimation discriminator"),
    ("ampl_est", &["epsilon"], "amplitude-estimation tester"),
    ("gibbs", &["beta", "variant"], "Gibbs-sampling tester"),
    ("entropy", &["delta", "q"], "entropy reduction through the purification reflection"),
    ("hamsim", &["t", "epsilon"], "Hamiltonian-simulation tester"),
    ("phase_est", &["delta", "m"], "phase-estimation tester"),
    ("spectrum", &["q", "state", "qubits"], "spectrum wrapper on a ½ρ encoding"),
    ("search_gibbs", &["n"], "search embedded as Gibbs sampling"),
    ("bounds", &["family", "value"], "sample and query lower bounds for a family"),
    ("dme", &["t", "delta", "dim"], "density matrix exponentiation calibration"),
    ("all", &[], "every tester with default parameters"),
];

pub const DEFAULT_OUT_DIR: &str = "qlift-out";
pub const OUT_DIR_ENV: &str = "QLIFT_OUT_DIR";

#[derive(Debug)]
pub enum CliError {
    /// Bad id, key or value; exit status 2.
    Config(String),
    /// Failed to write reports; exit status 2.
    Io(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl From<qlift_core::Error> for CliError {
    fn from(e: qlift_core::Error) -> Self {
        match e {
            qlift_core::Error::Io(m) => CliError::Io(m),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub experiment: String,
    pub params: BTreeMap<String, String>,
    pub seed: u64,
    pub trials: usize,
    pub out: PathBuf,
    pub only: Vec<String>,
}

/// One finished experiment: its record file contents and summary rows.
#[derive(Clone, Debug)]
pub struct Record {
    pub id: String,
    pub text: String,
    pub rows: Vec<String>,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct RunSummary {
    pub records: Vec<Record>,
    pub written: Vec<PathBuf>,
}

impl RunSummary {
    pub fn pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.pass() {
            0
        } else {
            1
        }
    }
}

/// Splits `key=value`.
pub fn parse_param(s: &str) -> Result<(String, String), String> {
    match s.split_once('=') {
        Some((k, v)) if !k.is_empty() && !v.is_empty() => Ok((k.trim().to_string(), v.trim().to_string())),
        _ => Err(format!("expected key=value, got {s:?}")),
    }
}

/// Reads `0.25`, `1/32`, `pi`, `2pi` or `2*pi`.
pub fn parse_number(s: &str) -> Result<f64, CliError> {
    let bad = || CliError::Config(format!("cannot read {s:?} as a number"));
    let t = s.trim().to_ascii_lowercase();
    if let Some((a, b)) = t.split_once('/') {
        let (a, b) = (parse_number(a)?, parse_number(b)?);
        return if b == 0.0 { Err(bad()) } else { Ok(a / b) };
    }
    if let Some(head) = t.strip_suffix("pi") {
        let head = head.trim_end_matches('*');
        let k = if head.is_empty() { 1.0 } else { head.parse::<f64>().map_err(|_| bad())? };
        return Ok(k * PI);
    }
    t.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(bad)
}

struct Params<'a>(&'a BTreeMap<String, String>);

impl Params<'_> {
    fn number(&self, key: &str, default: f64) -> Result<f64, CliError> {
        self.0.get(key).map_or(Ok(default), |v| parse_number(v))
    }

    fn count(&self, key: &str, default: usize) -> Result<usize, CliError> {
        match self.0.get(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| CliError::Config(format!("{key} must be a non-negative integer, got {v:?}"))),
        }
    }

    fn word(&self, key: &str, default: &str) -> String {
        self.0.get(key).cloned().unwrap_or_else(|| default.to_string())
    }
}

/// Rejects unknown ids and keys before any computation.
pub fn validate(cfg: &RunConfig) -> Result<(), CliError> {
    let Some((_, keys, _)) = EXPERIMENTS.iter().find(|(id, _, _)| *id == cfg.experiment) else {
        return Err(CliError::Config(format!("unknown experiment {:?}; try `list`", cfg.experiment)));
    };
    for k in cfg.params.keys() {
        if !keys.contains(&k.as_str()) {
            return Err(CliError::Config(format!("experiment {} takes no parameter {k:?}", cfg.experiment)));
        }
    }
    if !cfg.only.is_empty() && cfg.experiment != "verify_all" {
        return Err(CliError::Config("--only applies to verify_all".into()));
    }
    if cfg.trials == 0 && !matches!(cfg.experiment.as_str(), "list" | "verify_all" | "bounds") {
        return Err(CliError::Config("--trials must be positive".into()));
    }
    Ok(())
}

pub fn list_text() -> String {
    let mut s = String::new();
    for (id, keys, about) in EXPERIMENTS {
        let _ = writeln!(s, "{id:<13} {about}");
        if !keys.is_empty() {
            let _ = writeln!(s, "{:<13}   params: {}", "", keys.join(", "));
        }
    }
    s
}

fn from_report(r: ExperimentReport, id: &str) -> Record {
    Record { id: id.into(), pass: r.verdict(), rows: r.csv_rows(), text: r.to_text() }
}

fn run_one(id: &str, cfg: &RunConfig) -> Result<Record, CliError> {
    let p = Params(&cfg.params);
    let (trials, seed) = (cfg.trials, cfg.seed);
    let record = match id {
        "verify_all" => {
            let n = p.count("instances", DEFAULT_CONSTRUCTOR_INSTANCES)?;
            let r = verify_all(seed, &cfg.only, n)?;
            Record { id: id.into(), pass: r.verdict(), rows: r.csv_rows(), text: r.to_text() }
        }
        "lifting" => {
            let eps = p.number("epsilon", 1.0 / 32.0)?;
            let mode = match p.word("mode", "perturbed").as_str() {
                "perturbed" => LiftMode::Perturbed,
                "exact" => LiftMode::Exact,
                m => return Err(CliError::Config(format!("mode must be exact or perturbed, got {m:?}"))),
            };
            let inner = match cfg.params.get("circuit") {
                Some(path) => InnerTester::Circuit(Circuit::parse(&fs::read_to_string(path)?)?),
                None => InnerTester::AeDiscriminator { epsilon: eps },
            };
            from_report(lifting_tester(&DisInstance::tightness(eps)?, &inner, mode, trials, seed)?, id)
        }
        "tightness" => from_report(tightness_tester(p.number("epsilon", 1.0 / 32.0)?, trials, seed)?, id),
        "ampl_est" => from_report(ampl_est_tester(p.number("epsilon", 1.0 / 32.0)?, trials, seed)?, id),
        "gibbs" => {
            let variant = match p.word("variant", "plain").as_str() {
                "plain" => GibbsVariant::Plain,
                "sqrt" => GibbsVariant::Sqrt,
                v => return Err(CliError::Config(format!("variant must be plain or sqrt, got {v:?}"))),
            };
            from_report(gibbs_tester(p.number("beta", 8.0)?, variant, trials, seed)?, id)
        }
        "entropy" => from_report(entropy_reduction(p.number("delta", 1.0 / 16.0)?, p.count("q", 12)?, seed)?, id),
        "hamsim" => from_report(hamsim_tester(p.number("t", 2.0 * PI)?, p.number("epsilon", 0.1)?, trials, seed)?, id),
        "phase_est" => {
            let m = cfg.params.get("m").map(|_| p.count("m", 0)).transpose()?;
            from_report(phase_est_tester(p.number("delta", 1.0 / 16.0)?, m, trials, seed)?, id)
        }
        "spectrum" => spectrum(&p, seed)?,
        "search_gibbs" => from_report(search_to_gibbs(p.count("n", 4)?, trials, seed)?, id),
        "bounds" => bounds(&p)?,
        "dme" => dme(&p, seed)?,
        other => return Err(CliError::Config(format!("unknown experiment {other:?}"))),
    };
    Ok(record)
}

/// `½ρ` for `ρ = I/8` on two qubits, or a seeded full-rank state scaled to `‖ρ‖ = ¼`.
fn spectrum(p: &Params, seed: u64) -> Result<Record, CliError> {
    let q = p.count("q", 9)?;
    let rho = match p.word("state", "eighth").as_str() {
        "eighth" => ComplexMatrix::identity(4).scale_real(1.0 / 8.0),
        "random" => {
            let qubits = p.count("qubits", 3)?;
            if !(1..=4).contains(&qubits) {
                return Err(CliError::Config(format!("qubits must be in 1..=4, got {qubits}")));
            }
            let dim = 1 << qubits;
            let s = random_density(dim, dim, &mut seeded_rng(derive_seed(seed, 1)));
            s.mat().scale_real(0.25 / op_norm(s.mat()))
        }
        s => return Err(CliError::Config(format!("state must be eighth or random, got {s:?}"))),
    };
    let u = BlockEncoding::dilation_encode(&rho.scale_real(0.5), 1.0)?;
    let (_, mut report) = spectrum_wrapper(&u, q, seed)?;
    report.param("state", p.word("state", "eighth"));
    Ok(from_report(report, "spectrum"))
}

fn bounds(p: &Params) -> Result<Record, CliError> {
    let family = p.word("family", "gibbs");
    let input = match family.as_str() {
        "gibbs" => BoundInput::Gibbs { beta: p.number("value", 8.0)? },
        "hamsim" => BoundInput::Hamsim { t: p.number("value", 2.0 * PI)? },
        "phase_est" => BoundInput::PhaseEst { delta: p.number("value", 1.0 / 16.0)? },
        "tightness" => BoundInput::Tightness { epsilon: p.number("value", 1.0 / 32.0)? },
        "entropy" => BoundInput::Entropy { delta: p.number("value", 1.0 / 16.0)? },
        f => return Err(CliError::Config(format!("unknown bound family {f:?}"))),
    };
    let b = bound_calculator(&input)?;
    let pass = b.parameter_bound.as_ref().is_none_or(|pb| pb.holds);
    let text = format!("experiment bounds\n{}verdict {}\n", b.to_text(), if pass { "pass" } else { "fail" });
    let row = format!("bounds,{family},{:.6e},,{:.6e},{}", b.gamma, b.sample_lower_bound, if pass { "pass" } else { "fail" });
    Ok(Record { id: "bounds".into(), text, rows: vec![row], pass })
}

/// Required step count against the calibrated one, on a seeded state.
fn dme(p: &Params, seed: u64) -> Result<Record, CliError> {
    let t = p.number("t", 1.0)?;
    let delta = p.number("delta", 0.1)?;
    let dim = p.count("dim", 2)?;
    if !matches!(dim, 2 | 4) {
        return Err(CliError::Config(format!("dim must be 2 or 4, got {dim}")));
    }
    let rho: DensityOperator = random_density(dim, dim, &mut seeded_rng(derive_seed(seed, 2)));
    let cfg = DmeConfig::calibrated(t, delta)?;
    let err = dme_error(&rho, &cfg, seed)?;
    let needed = dme_required_steps(&rho, t, delta, seed)?;
    let mut r = ExperimentReport::new("dme", seed, 0);
    r.param("t", t);
    r.param("delta", delta);
    r.param("dim", dim);
    r.param("calibrated_steps", cfg.steps);
    r.param("required_steps", needed);
    r.checks.push(Check::at_most("error_at_calibrated_steps", err, delta));
    r.checks.push(Check::at_most("required_steps", needed as f64, cfg.steps as f64));
    Ok(from_report(r, "dme"))
}

/// Writes `contents` next to `path` and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("report");
    let tmp = dir.join(format!(".{name}.tmp.{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        CliError::Io(e.to_string())
    })
}

/// Ids run by `all`: every tester at its default parameters.
pub const ALL_TESTERS: [&str; 11] = [
    "lifting",
    "tightness",
    "ampl_est",
    "gibbs",
    "entropy",
    "hamsim",
    "phase_est",
    "spectrum",
    "search_gibbs",
    "bounds",
    "dme",
];

/// Runs the configured experiment and writes `<id>.txt` files plus `summary.csv`.
pub fn run(cfg: &RunConfig) -> Result<RunSummary, CliError> {
    validate(cfg)?;
    let ids: Vec<&str> = match cfg.experiment.as_str() {
        "list" => return Ok(RunSummary { records: Vec::new(), written: Vec::new() }),
        "all" => ALL_TESTERS.to_vec(),
        id => vec![id],
    };
    let mut records = Vec::new();
    for id in ids {
        records.push(run_one(id, cfg)?);
    }
    let mut written = Vec::new();
    let mut csv = format!("{CSV_HEADER}\n");
    for r in &records {
        let path = cfg.out.join(format!("{}.txt", r.id));
        write_atomic(&path, &r.text)?;
        written.push(path);
        for row in &r.rows {
            csv.push_str(row);
            csv.push('\n');
        }
    }
    let summary = cfg.out.join("summary.csv");
    write_atomic(&summary, &csv)?;
    written.push(summary);
    Ok(RunSummary { records, written })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers() {
        assert_eq!(parse_number("1/32").unwrap(), 1.0 / 32.0);
        assert!((parse_number("2pi").unwrap() - 2.0 * PI).abs() < 1e-15);
        assert!((parse_number("2*pi").unwrap() - 2.0 * PI).abs() < 1e-15);
        assert_eq!(parse_number("8").unwrap(), 8.0);
        assert!(parse_number("abc").is_err());
        assert!(parse_number("1/0").is_err());
    }

    #[test]
    fn params() {
        assert_eq!(parse_param("beta=8").unwrap(), ("beta".into(), "8".into()));
        assert!(parse_param("beta").is_err());
        assert!(parse_param("=3").is_err());
    }

    fn config(experiment: &str, params: &[(&str, &str)]) -> RunConfig {
        RunConfig {
            experiment: experiment.into(),
            params: params.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
            seed: 7,
            trials: 2000,
            out: PathBuf::from("unused"),
            only: Vec::new(),
        }
    }

    #[test]
    fn validation_happens_first() {
        assert!(matches!(validate(&config("nope", &[])), Err(CliError::Config(_))));
        assert!(matches!(validate(&config("gibbs", &[("temperature", "3")])), Err(CliError::Config(_))));
        assert!(validate(&config("gibbs", &[("beta", "8")])).is_ok());
        let mut c = config("gibbs", &[]);
        c.only = vec!["up_scale".into()];
        assert!(validate(&c).is_err());
    }

    #[test]
    fn every_listed_id_dispatches() {
        for id in ALL_TESTERS {
            assert!(EXPERIMENTS.iter().any(|(e, _, _)| *e == id));
        }
        assert_eq!(list_text().lines().filter(|l| !l.starts_with(' ')).count(), EXPERIMENTS.len());
    }
}
