use crate::channels::sample_lower_bound_dis;
use crate::error::Result;

use super::DisInstance;

/// A concrete instance, or a tester family with its parameter.
#[derive(Clone, Debug)]
pub enum BoundInput {
    Instance(DisInstance),
    Gibbs { beta: f64 },
    Hamsim { t: f64 },
    PhaseEst { delta: f64 },
    Tightness { epsilon: f64 },
    Entropy { delta: f64 },
}

/// `γ ≤ bound` for a family's parameter map, checked on the concrete instance.
#[derive(Clone, Debug, PartialEq)]
pub struct ParameterBound {
    pub family: String,
    pub expression: String,
    pub parameter: f64,
    pub bound: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundRecord {
    pub gamma: f64,
    /// `1/(72γ)` copies.
    pub sample_lower_bound: f64,
    /// `1/√γ`, the query scale up to logarithmic factors.
    pub query_scale: f64,
    pub parameter_bound: Option<ParameterBound>,
}

impl BoundRecord {
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "gamma {:.9}\nsample_lower_bound {:.9}\nquery_scale {:.9}\n",
            self.gamma, self.sample_lower_bound, self.query_scale
        );
        if let Some(p) = &self.parameter_bound {
            s.push_str(&format!(
                "family {}\n  expression {}\n  parameter {:.9}\n  bound {:.9}\n  holds {}\n",
                p.family, p.expression, p.parameter, p.bound, p.holds
            ));
        }
        s
    }
}

pub fn bound_calculator(input: &BoundInput) -> Result<BoundRecord> {
    let pi2 = std::f64::consts::PI.powi(2);
    let (instance, family) = match input {
        BoundInput::Instance(i) => (i.clone(), None),
        BoundInput::Gibbs { beta } => (DisInstance::gibbs(*beta)?, Some(("gibbs", "16/β²", *beta, 16.0 / (beta * beta)))),
        BoundInput::Hamsim { t } => (DisInstance::hamsim(*t)?, Some(("hamsim", "4π²/t²", *t, 4.0 * pi2 / (t * t)))),
        BoundInput::PhaseEst { delta } => {
            (DisInstance::phase(*delta)?, Some(("phase_est", "64δ²", *delta, 64.0 * delta * delta)))
        }
        BoundInput::Tightness { epsilon } => {
            (DisInstance::tightness(*epsilon)?, Some(("tightness", "256ε²", *epsilon, 256.0 * epsilon * epsilon)))
        }
        BoundInput::Entropy { delta } => (DisInstance::entropy(*delta)?, Some(("entropy", "2Δ", *delta, 2.0 * delta))),
    };
    let sample_lower_bound = sample_lower_bound_dis(&instance.rho, &instance.sigma)?;
    let gamma = instance.gamma;
    let parameter_bound = family.map(|(name, expr, parameter, bound)| ParameterBound {
        family: name.into(),
        expression: expr.into(),
        parameter,
        bound,
        holds: gamma <= bound + 1e-12,
    });
    Ok(BoundRecord { gamma, sample_lower_bound, query_scale: 1.0 / gamma.sqrt(), parameter_bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn gibbs_and_tightness_share_gamma() {
        let g = bound_calculator(&BoundInput::Gibbs { beta: 8.0 }).unwrap();
        let want = 1.0 - (1.0 - 16.0f64 / 64.0).sqrt();
        assert!((g.gamma - want).abs() < 1e-12);
        let p = g.parameter_bound.unwrap();
        assert!(p.holds && (p.bound - 0.25).abs() < 1e-15);
        let t = bound_calculator(&BoundInput::Tightness { epsilon: 1.0 / 32.0 }).unwrap();
        assert!((t.gamma - 0.133_97).abs() < 1e-5);
        assert!((t.sample_lower_bound - 1.0 / (72.0 * t.gamma)).abs() < 1e-12);
    }

    #[test]
    fn hamsim_bound_at_two_pi() {
        let r = bound_calculator(&BoundInput::Hamsim { t: 2.0 * std::f64::consts::PI }).unwrap();
        let p = r.parameter_bound.unwrap();
        assert!((p.bound - 1.0).abs() < 1e-12 && p.holds);
    }

    #[test]
    fn every_family_map_holds() {
        for input in [
            BoundInput::PhaseEst { delta: 1.0 / 16.0 },
            BoundInput::Entropy { delta: 1.0 / 16.0 },
            BoundInput::Gibbs { beta: 4.0 },
            BoundInput::Tightness { epsilon: 1.0 / 64.0 },
        ] {
            assert!(bound_calculator(&input).unwrap().parameter_bound.unwrap().holds);
        }
    }

    #[test]
    fn degenerate_pair_rejected() {
        let i = DisInstance::gibbs(8.0).unwrap().null().unwrap();
        assert!(matches!(bound_calculator(&BoundInput::Instance(i)), Err(Error::DegenerateInstance(_))));
    }
}
