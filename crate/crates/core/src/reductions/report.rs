use std::fmt::Write as _;

use crate::stats::{standard_error, wilson_interval};
use crate::tolerances::{INEQUALITY_SLACK, WILSON_CONFIDENCE};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    AtLeast,
    AtMost,
}

impl Direction {
    fn token(self) -> &'static str {
        match self {
            Direction::AtLeast => "at_least",
            Direction::AtMost => "at_most",
        }
    }
}

/// Acceptance statistics of one instance.
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceOutcome {
    pub instance: String,
    pub accepted: usize,
    pub trials: usize,
    /// Exact acceptance probability of the simulated tester.
    pub predicted: f64,
    /// How `predicted` was obtained.
    pub basis: String,
    pub threshold: f64,
    pub direction: Direction,
}

impl InstanceOutcome {
    pub fn frequency(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.accepted as f64 / self.trials as f64
        }
    }

    pub fn interval(&self) -> (f64, f64) {
        wilson_interval(self.accepted, self.trials, WILSON_CONFIDENCE)
    }

    /// The whole Wilson interval lies on the required side of the threshold.
    pub fn passes(&self) -> bool {
        let (lo, hi) = self.interval();
        match self.direction {
            Direction::AtLeast => lo >= self.threshold,
            Direction::AtMost => hi <= self.threshold,
        }
    }

    /// Whether `p` lies inside the Wilson interval.
    pub fn consistent_with(&self, p: f64) -> bool {
        let (lo, hi) = self.interval();
        lo <= p && p <= hi
    }
}

/// A deterministic inequality checked alongside the sampled statistics.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub direction: Direction,
}

impl Check {
    pub fn at_most(name: &str, value: f64, bound: f64) -> Self {
        Self { name: name.into(), value, bound, direction: Direction::AtMost }
    }

    pub fn at_least(name: &str, value: f64, bound: f64) -> Self {
        Self { name: name.into(), value, bound, direction: Direction::AtLeast }
    }

    pub fn passes(&self) -> bool {
        match self.direction {
            Direction::AtMost => self.value <= self.bound + INEQUALITY_SLACK,
            Direction::AtLeast => self.value >= self.bound - INEQUALITY_SLACK,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentReport {
    pub tester: String,
    pub seed: u64,
    pub trials: usize,
    pub params: Vec<(String, String)>,
    pub instances: Vec<InstanceOutcome>,
    pub checks: Vec<Check>,
    pub queries: u64,
    pub samples: u64,
}

pub const CSV_HEADER: &str = "tester,instance,frequency,predicted,threshold,verdict";

fn verdict_word(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

impl ExperimentReport {
    pub fn new(tester: &str, seed: u64, trials: usize) -> Self {
        Self {
            tester: tester.into(),
            seed,
            trials,
            params: Vec::new(),
            instances: Vec::new(),
            checks: Vec::new(),
            queries: 0,
            samples: 0,
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.params.push((key.into(), value.to_string()));
    }

    pub fn instance(&self, name: &str) -> Option<&InstanceOutcome> {
        self.instances.iter().find(|i| i.instance == name)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Every instance clears its threshold and every check holds.
    pub fn verdict(&self) -> bool {
        self.instances.iter().all(InstanceOutcome::passes) && self.checks.iter().all(Check::passes)
    }

    /// `(f_yes − f_no)/√(se_yes² + se_no²)`, or `None` without both instances.
    pub fn gap_sigma(&self) -> Option<f64> {
        let (y, n) = (self.instance("yes")?, self.instance("no")?);
        let se = (standard_error(y.frequency(), y.trials).powi(2) + standard_error(n.frequency(), n.trials).powi(2))
            .sqrt()
            .max(1e-12);
        Some((y.frequency() - n.frequency()) / se)
    }

    /// One key per line; instance and check blocks indented below their header.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "tester {}", self.tester);
        let _ = writeln!(s, "seed {}", self.seed);
        let _ = writeln!(s, "trials {}", self.trials);
        for (k, v) in &self.params {
            let _ = writeln!(s, "param {k} {v}");
        }
        for i in &self.instances {
            let (lo, hi) = i.interval();
            let _ = writeln!(s, "instance {}", i.instance);
            let _ = writeln!(s, "  accepted {}", i.accepted);
            let _ = writeln!(s, "  frequency {:.6}", i.frequency());
            let _ = writeln!(s, "  interval {lo:.6} {hi:.6}");
            let _ = writeln!(s, "  predicted {:.6}", i.predicted);
            let _ = writeln!(s, "  basis {}", i.basis);
            let _ = writeln!(s, "  threshold {:.6}", i.threshold);
            let _ = writeln!(s, "  direction {}", i.direction.token());
            let _ = writeln!(s, "  verdict {}", verdict_word(i.passes()));
        }
        for c in &self.checks {
            let _ = writeln!(s, "check {}", c.name);
            let _ = writeln!(s, "  value {:.9e}", c.value);
            let _ = writeln!(s, "  bound {:.9e}", c.bound);
            let _ = writeln!(s, "  direction {}", c.direction.token());
            let _ = writeln!(s, "  verdict {}", verdict_word(c.passes()));
        }
        let _ = writeln!(s, "ledger queries {}", self.queries);
        let _ = writeln!(s, "ledger samples {}", self.samples);
        let _ = writeln!(s, "verdict {}", verdict_word(self.verdict()));
        s
    }

    /// Summary rows without the header; checks appear with an empty prediction.
    pub fn csv_rows(&self) -> Vec<String> {
        let mut rows: Vec<String> = self
            .instances
            .iter()
            .map(|i| {
                format!(
                    "{},{},{:.6},{:.6},{:.6},{}",
                    self.tester,
                    i.instance,
                    i.frequency(),
                    i.predicted,
                    i.threshold,
                    verdict_word(i.passes())
                )
            })
            .collect();
        rows.extend(self.checks.iter().map(|c| {
            format!("{},{},{:.6e},,{:.6e},{}", self.tester, c.name, c.value, c.bound, verdict_word(c.passes()))
        }));
        rows
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(CSV_HEADER);
        s.push('\n');
        for r in self.csv_rows() {
            s.push_str(&r);
            s.push('\n');
        }
        s
    }
}
