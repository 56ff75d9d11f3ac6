//! Bounded parity polynomials in the Chebyshev basis: rectangle approximants,
//! positive-power approximants, the algebra that turns them into up-scaling
//! polynomials, and grid certification of their range conditions.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use rand::Rng;
use statrs::function::erf::{erf, erfc_inv};

use crate::error::{Error, Result};
use crate::random::seeded_rng;
use crate::tolerances::{CERT_GRID, CERT_RANDOM, CERT_SLACK, COEFF_ZERO, PARITY_TOL};

const CERT_SEED: u64 = 0xC0FF_1CE5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
    None,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
            Parity::None => "none",
        })
    }
}

/// Construction parameters, kept so certification can re-check the range conditions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PolyParams {
    /// Plateau on `|x| ≤ t − δ′`, floor on `|x| ≥ t + δ′`.
    Rectangle { delta_prime: f64, eps_prime: f64, t: f64 },
    /// `|p(x) − ½x^c| ≤ ε` on `[δ, 1]`.
    PositivePower { delta: f64, eps: f64, c: f64 },
    None,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialApprox {
    coeffs: Vec<f64>,
    parity: Parity,
    sup_bound: f64,
    params: PolyParams,
}

/// Outcome of re-checking a polynomial on the certification point set.
#[derive(Clone, Debug, PartialEq)]
pub struct Certification {
    pub passed: bool,
    pub sup: f64,
    pub failures: Vec<String>,
}

fn detect_parity(c: &[f64]) -> Parity {
    let odd_zero = c.iter().skip(1).step_by(2).all(|x| x.abs() <= PARITY_TOL);
    let even_zero = c.iter().step_by(2).all(|x| x.abs() <= PARITY_TOL);
    match (odd_zero, even_zero) {
        (true, _) => Parity::Even,
        (false, true) => Parity::Odd,
        _ => Parity::None,
    }
}

fn clenshaw(c: &[f64], x: f64) -> f64 {
    let (mut b1, mut b2) = (0.0, 0.0);
    for &ck in c.iter().skip(1).rev() {
        let b0 = 2.0 * x * b1 - b2 + ck;
        b2 = b1;
        b1 = b0;
    }
    x * b1 - b2 + c.first().copied().unwrap_or(0.0)
}

/// The 10⁴ first-kind Chebyshev nodes followed by 10³ seeded uniform points.
pub fn certification_points() -> &'static [f64] {
    static PTS: OnceLock<Vec<f64>> = OnceLock::new();
    PTS.get_or_init(|| {
        let mut pts = chebyshev_grid(CERT_GRID);
        let mut rng = seeded_rng(CERT_SEED);
        pts.extend((0..CERT_RANDOM).map(|_| rng.random_range(-1.0..=1.0)));
        pts
    })
}

pub fn chebyshev_grid(n: usize) -> Vec<f64> {
    (0..n).map(|j| (PI * (j as f64 + 0.5) / n as f64).cos()).collect()
}

/// Chebyshev coefficients of the degree `n − 1` interpolant of `f` on `[a, b]`.
pub fn chebyshev_interpolate(f: impl Fn(f64) -> f64, n: usize, a: f64, b: f64) -> Vec<f64> {
    let vals: Vec<f64> = chebyshev_grid(n)
        .iter()
        .map(|&x| f(0.5 * (b - a) * x + 0.5 * (a + b)))
        .collect();
    // cos(πk(2j+1)/(2n)) read from a table indexed mod 4n
    let table: Vec<f64> = (0..4 * n).map(|m| (PI * m as f64 / (2 * n) as f64).cos()).collect();
    let mut c = vec![0.0; n];
    for (k, ck) in c.iter_mut().enumerate() {
        let mut s = 0.0;
        for (j, v) in vals.iter().enumerate() {
            s += v * table[(k * (2 * j + 1)) % (4 * n)];
        }
        *ck = 2.0 * s / n as f64;
    }
    c[0] *= 0.5;
    c
}

impl PolynomialApprox {
    /// Wraps raw coefficients; parity is detected and the sup bound measured on the
    /// certification points.
    pub fn from_coeffs(coeffs: Vec<f64>) -> Self {
        let mut coeffs: Vec<f64> =
            coeffs.into_iter().map(|x| if x.abs() < COEFF_ZERO { 0.0 } else { x }).collect();
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        let parity = detect_parity(&coeffs);
        let mut p = Self { coeffs, parity, sup_bound: 0.0, params: PolyParams::None };
        p.sup_bound = p.measured_sup();
        p
    }

    fn with_params(mut self, params: PolyParams) -> Self {
        self.params = params;
        self
    }

    /// The identity polynomial `x`.
    pub fn identity() -> Self {
        Self::from_coeffs(vec![0.0, 1.0])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn sup_bound(&self) -> f64 {
        self.sup_bound
    }

    pub fn params(&self) -> PolyParams {
        self.params
    }

    pub fn eval(&self, x: f64) -> f64 {
        clenshaw(&self.coeffs, x)
    }

    fn measured_sup(&self) -> f64 {
        certification_points()
            .iter()
            .map(|&x| self.eval(x).abs())
            .fold(0.0, f64::max)
    }

    /// Degree divided by `(1/δ)·ln(1/ε)`, the implementation constant of the degree bound.
    pub fn degree_constant(&self) -> Option<f64> {
        let (delta, eps) = match self.params {
            PolyParams::Rectangle { delta_prime, eps_prime, .. } => (delta_prime, eps_prime),
            PolyParams::PositivePower { delta, eps, .. } => (delta, eps),
            PolyParams::None => return None,
        };
        Some(self.degree() as f64 / ((1.0 / delta) * (1.0 / eps).ln()))
    }

    /// Writes the header line and one coefficient per line.
    pub fn to_text(&self) -> String {
        let params = match self.params {
            PolyParams::Rectangle { delta_prime, eps_prime, t } => {
                format!("rectangle {delta_prime:.16e} {eps_prime:.16e} {t:.16e}")
            }
            PolyParams::PositivePower { delta, eps, c } => {
                format!("positive_power {delta:.16e} {eps:.16e} {c:.16e}")
            }
            PolyParams::None => "none".to_string(),
        };
        let mut out = format!(
            "degree {} parity {} sup {:.16e} params {}\n",
            self.degree(),
            self.parity,
            self.sup_bound,
            params
        );
        for c in &self.coeffs {
            out.push_str(&format!("{c:.16e}\n"));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("polynomial file: {m}"));
        let mut lines = text.lines();
        let header: Vec<&str> = lines.next().ok_or_else(|| bad("empty"))?.split_whitespace().collect();
        if header.len() < 8 || header[0] != "degree" || header[2] != "parity" || header[4] != "sup" {
            return Err(bad("malformed header"));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad(s));
        let degree: usize = header[1].parse().map_err(|_| bad(header[1]))?;
        let parity = match header[3] {
            "even" => Parity::Even,
            "odd" => Parity::Odd,
            "none" => Parity::None,
            other => return Err(bad(other)),
        };
        let sup_bound = num(header[5])?;
        let params = match &header[7..] {
            ["rectangle", a, b, c] => {
                PolyParams::Rectangle { delta_prime: num(a)?, eps_prime: num(b)?, t: num(c)? }
            }
            ["positive_power", a, b, c] => {
                PolyParams::PositivePower { delta: num(a)?, eps: num(b)?, c: num(c)? }
            }
            ["none"] => PolyParams::None,
            _ => return Err(bad("params")),
        };
        let coeffs = lines
            .filter(|l| !l.trim().is_empty())
            .map(|l| num(l.trim()))
            .collect::<Result<Vec<f64>>>()?;
        if coeffs.len() != degree + 1 {
            return Err(bad("coefficient count does not match degree"));
        }
        Ok(Self { coeffs, parity, sup_bound, params })
    }
}

/// Re-checks parity, the sup bound and the construction's range conditions on
/// the certification points.
pub fn certify(p: &PolynomialApprox) -> Certification {
    let mut failures = Vec::new();
    match p.parity {
        Parity::Even => {
            if p.coeffs.iter().skip(1).step_by(2).any(|c| c.abs() > PARITY_TOL) {
                failures.push("odd coefficient in even polynomial".to_string());
            }
        }
        Parity::Odd => {
            if p.coeffs.iter().step_by(2).any(|c| c.abs() > PARITY_TOL) {
                failures.push("even coefficient in odd polynomial".to_string());
            }
        }
        Parity::None => {}
    }
    let mut sup: f64 = 0.0;
    for &x in certification_points() {
        let v = p.eval(x);
        sup = sup.max(v.abs());
        if let Some(msg) = range_violation(&p.params, x, v, CERT_SLACK) {
            if failures.len() < 8 {
                failures.push(msg);
            }
        }
    }
    if sup > p.sup_bound + CERT_SLACK {
        failures.push(format!("sup {sup:.3e} exceeds declared bound {:.3e}", p.sup_bound));
    }
    Certification { passed: failures.is_empty(), sup, failures }
}

fn range_violation(params: &PolyParams, x: f64, v: f64, s: f64) -> Option<String> {
    match *params {
        PolyParams::Rectangle { delta_prime, eps_prime, t } => {
            if v.abs() > 1.0 + s {
                return Some(format!("|P({x:.6})| = {:.6} > 1", v.abs()));
            }
            if x.abs() <= t - delta_prime && !(1.0 - eps_prime - s..=1.0 + s).contains(&v) {
                return Some(format!("plateau value P({x:.6}) = {v:.9}"));
            }
            if x.abs() >= t + delta_prime && !(-s..=eps_prime + s).contains(&v) {
                return Some(format!("floor value P({x:.6}) = {v:.9}"));
            }
            None
        }
        PolyParams::PositivePower { delta, eps, c } => {
            if v.abs() > 1.0 + s {
                return Some(format!("|p({x:.6})| = {:.6} > 1", v.abs()));
            }
            if x.abs() >= delta {
                let err = (v - 0.5 * x.abs().powf(c)).abs();
                if err > eps + s {
                    return Some(format!("power error {err:.3e} at {x:.6}"));
                }
            }
            None
        }
        PolyParams::None => None,
    }
}

type CacheKey = (u8, u64, u64, u64);

fn cache() -> &'static Mutex<HashMap<CacheKey, PolynomialApprox>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, PolynomialApprox>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn memoized(
    key: CacheKey,
    build: impl FnOnce() -> Result<PolynomialApprox>,
) -> Result<PolynomialApprox> {
    if let Some(p) = cache().lock().expect("cache poisoned").get(&key) {
        return Ok(p.clone());
    }
    let p = build()?;
    cache().lock().expect("cache poisoned").insert(key, p.clone());
    Ok(p)
}

/// Smallest degree (by bisection over the admissible range) whose truncation passes `ok`.
fn bisect_degree(lo: usize, hi: usize, step: usize, ok: impl Fn(usize) -> bool) -> Option<usize> {
    if !ok(hi) {
        return None;
    }
    let (mut bad, mut good) = (lo, hi);
    if ok(lo) {
        return Some(lo);
    }
    while good - bad > step {
        let mid = bad + ((good - bad) / step / 2).max(1) * step;
        if ok(mid) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    Some(good)
}

/// Even polynomial that is close to 1 on `|x| ≤ t − δ′` and close to 0 on `|x| ≥ t + δ′`.
///
/// Built from a difference of scaled error functions, interpolated at Chebyshev
/// nodes, projected onto even parity and truncated at the smallest certifying degree.
pub fn rectangle_poly(delta_prime: f64, eps_prime: f64, t: f64) -> Result<PolynomialApprox> {
    let open = |v: f64| v > 0.0 && v < 0.5;
    if !open(delta_prime) || !open(eps_prime) || !(t > delta_prime && t < 1.0 - delta_prime) {
        return Err(Error::ParameterOutOfRange(format!(
            "rectangle needs δ′, ε′ ∈ (0, ½) and t ∈ (δ′, 1 − δ′); got δ′ = {delta_prime}, ε′ = {eps_prime}, t = {t}"
        )));
    }
    let key = (0, delta_prime.to_bits(), eps_prime.to_bits(), t.to_bits());
    memoized(key, || build_rectangle(delta_prime, eps_prime, t))
}

fn build_rectangle(delta_prime: f64, eps_prime: f64, t: f64) -> Result<PolynomialApprox> {
    let k = erfc_inv(eps_prime / 4.0) / delta_prime;
    let g = |x: f64| {
        eps_prime / 4.0 + (1.0 - eps_prime / 2.0) * 0.5 * (erf(k * (x + t)) - erf(k * (x - t)))
    };
    let n = ((8.0 * k).ceil() as usize + 64).next_power_of_two();
    let mut c = chebyshev_interpolate(g, n, -1.0, 1.0);
    for ck in c.iter_mut().skip(1).step_by(2) {
        *ck = 0.0;
    }
    let params = PolyParams::Rectangle { delta_prime, eps_prime, t };
    let grid = chebyshev_grid(CERT_GRID);
    let passes = |d: usize, pts: &[f64]| {
        let cd = &c[..=d];
        pts.iter().all(|&x| range_violation(&params, x, clenshaw(cd, x), 0.0).is_none())
    };
    let top = if (n - 1) % 2 == 0 { n - 1 } else { n - 2 };
    let mut d = bisect_degree(0, top, 2, |d| passes(d, &grid)).ok_or_else(|| {
        Error::ConstructionFailed(format!("rectangle δ′ = {delta_prime}, ε′ = {eps_prime} never certifies"))
    })?;
    loop {
        let p = PolynomialApprox::from_coeffs(c[..=d].to_vec()).with_params(params);
        if certify(&p).passed {
            return Ok(p);
        }
        d += 2;
        if d > top {
            return Err(Error::ConstructionFailed("rectangle certification failed".into()));
        }
    }
}

/// Even polynomial with `|p(x) − ½|x|^c| ≤ ε` on `δ ≤ |x| ≤ 1` and `|p| ≤ 1` on `[−1, 1]`.
///
/// Interpolates `½y^{c/2}` in `y = x²` on `[δ², 1]`, truncates in `y`, then re-expands
/// in the Chebyshev basis of `x`.
pub fn positive_power_poly(delta: f64, eps: f64, c: f64) -> Result<PolynomialApprox> {
    let open = |v: f64| v > 0.0 && v < 0.5;
    if !open(delta) || !open(eps) || !(c > 0.0 && c < 1.0) {
        return Err(Error::ParameterOutOfRange(format!(
            "positive power needs δ, ε ∈ (0, ½) and c ∈ (0, 1); got δ = {delta}, ε = {eps}, c = {c}"
        )));
    }
    let key = (1, delta.to_bits(), eps.to_bits(), c.to_bits());
    memoized(key, || build_positive_power(delta, eps, c))
}

fn build_positive_power(delta: f64, eps: f64, c: f64) -> Result<PolynomialApprox> {
    let lo = delta * delta;
    let s0 = (1.0 + lo) / (1.0 - lo);
    let rate = (s0 + (s0 * s0 - 1.0).sqrt()).ln();
    // generous node count: high interpolant coefficients must decay before the
    // truncation point because |x| < δ evaluates them outside [δ², 1]
    let n = (4 * ((10.0 / eps).ln() / rate).ceil() as usize).clamp(1024, 8192);
    let cy = chebyshev_interpolate(|y| 0.5 * y.max(0.0).powf(c / 2.0), n, lo, 1.0);
    let to_s = move |x: f64| (2.0 * x * x - (1.0 + lo)) / (1.0 - lo);
    let params = PolyParams::PositivePower { delta, eps, c };
    let grid = chebyshev_grid(CERT_GRID);
    let passes = |m: usize| {
        let cm = &cy[..=m];
        grid.iter().all(|&x| range_violation(&params, x, clenshaw(cm, to_s(x)), 0.0).is_none())
    };
    let mut m = (1..n / 2).find(|&m| passes(m)).ok_or_else(|| {
        Error::ConstructionFailed(format!("positive power δ = {delta}, ε = {eps} never certifies"))
    })?;
    loop {
        let cm = cy[..=m].to_vec();
        let mut cx = chebyshev_interpolate(|x| clenshaw(&cm, to_s(x)), 2 * m + 2, -1.0, 1.0);
        cx.truncate(2 * m + 1);
        for ck in cx.iter_mut().skip(1).step_by(2) {
            *ck = 0.0;
        }
        let p = PolynomialApprox::from_coeffs(cx).with_params(params);
        if certify(&p).passed {
            return Ok(p);
        }
        m += 1;
        if m >= n / 2 {
            return Err(Error::ConstructionFailed("positive power certification failed".into()));
        }
    }
}

/// `s·p`, failing if the result can exceed 1 in magnitude.
pub fn scale_poly(p: &PolynomialApprox, s: f64) -> Result<PolynomialApprox> {
    let q = PolynomialApprox::from_coeffs(p.coeffs.iter().map(|c| c * s).collect());
    if q.sup_bound > 1.0 + CERT_SLACK {
        return Err(Error::BoundExceeded(q.sup_bound));
    }
    Ok(q)
}

/// `x·p` via `x·T_n = ½(T_{n+1} + T_{n−1})`.
pub fn mul_by_x(p: &PolynomialApprox) -> Result<PolynomialApprox> {
    let c = &p.coeffs;
    let mut out = vec![0.0; c.len() + 1];
    for (n, &cn) in c.iter().enumerate() {
        if n == 0 {
            out[1] += cn;
        } else {
            out[n + 1] += 0.5 * cn;
            out[n - 1] += 0.5 * cn;
        }
    }
    let q = PolynomialApprox::from_coeffs(out);
    if q.sup_bound > 1.0 + CERT_SLACK {
        return Err(Error::BoundExceeded(q.sup_bound));
    }
    Ok(q)
}

/// Even and odd parts `(p(x) ± p(−x))/2`.
pub fn split_parity(p: &PolynomialApprox) -> (PolynomialApprox, PolynomialApprox) {
    let pick = |keep_even: bool| {
        p.coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| if (k % 2 == 0) == keep_even { c } else { 0.0 })
            .collect::<Vec<f64>>()
    };
    (PolynomialApprox::from_coeffs(pick(true)), PolynomialApprox::from_coeffs(pick(false)))
}

/// Chebyshev coefficients of `p(x)/x` for odd `p`, by back-substitution through
/// `x·T_0 = T_1`, `x·T_n = ½(T_{n+1} + T_{n−1})`.
pub fn divide_by_x(p: &PolynomialApprox) -> Result<Vec<f64>> {
    if p.parity != Parity::Odd {
        return Err(Error::NoParity);
    }
    let f = &p.coeffs;
    let d = f.len() - 1;
    let mut q = vec![0.0; d.max(1)];
    // (x q)_m = ½q_{m+1} + ½q_{m−1} (m ≥ 2), (x q)_1 = q_0 + ½q_2
    for m in (2..=d).rev() {
        let above = if m + 1 < q.len() { q[m + 1] } else { 0.0 };
        q[m - 1] = 2.0 * f[m] - above;
    }
    let q2 = if q.len() > 2 { q[2] } else { 0.0 };
    q[0] = f.get(1).copied().unwrap_or(0.0) - 0.5 * q2;
    Ok(q)
}

/// Clenshaw evaluation of a raw Chebyshev series.
pub fn eval_series(c: &[f64], x: f64) -> f64 {
    clenshaw(c, x)
}

/// The up-scaling polynomial `(α/β)·x·P(x)` built on the rectangle with
/// `δ′ = (β−1)/(2α)` and `t = (β+1)/(2α)`.
pub fn upscale_poly(alpha: f64, beta: f64, eps_prime: f64) -> Result<PolynomialApprox> {
    let p = rectangle_poly((beta - 1.0) / (2.0 * alpha), eps_prime, (beta + 1.0) / (2.0 * alpha))?;
    scale_poly(&mul_by_x(&p)?, alpha / beta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_polynomial() {
        let p = PolynomialApprox::identity();
        assert_eq!(p.parity(), Parity::Odd);
        assert!((p.eval(0.3) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn clenshaw_matches_monomial_expansion() {
        let mut rng = seeded_rng(3);
        let coeffs: Vec<f64> = (0..=12).map(|_| rng.random_range(-1.0..1.0)).collect();
        let p = PolynomialApprox::from_coeffs(coeffs.clone());
        // T_n via the three-term recurrence, summed directly
        for &x in &[-0.9, -0.2, 0.0, 0.37, 0.99] {
            let (mut t0, mut t1) = (1.0, x);
            let mut s = coeffs[0] + coeffs[1] * x;
            for c in &coeffs[2..] {
                let t2 = 2.0 * x * t1 - t0;
                s += c * t2;
                t0 = t1;
                t1 = t2;
            }
            assert!((p.eval(x) - s).abs() < 1e-12);
        }
    }

    #[test]
    fn rectangle_certifies() {
        let p = rectangle_poly(0.2, 0.1, 0.5).unwrap();
        assert_eq!(p.parity(), Parity::Even);
        assert!(certify(&p).passed);
        let v0 = p.eval(0.0);
        assert!((0.9..=1.0).contains(&v0));
        let vt = p.eval(0.5);
        assert!((0.0..=1.0).contains(&vt));
    }

    #[test]
    fn rectangle_degree_grows_with_precision() {
        let degrees: Vec<usize> = [1e-1, 1e-2, 1e-3, 1e-4]
            .iter()
            .map(|&e| rectangle_poly(0.2, e, 0.5).unwrap().degree())
            .collect();
        assert!(degrees.windows(2).all(|w| w[0] <= w[1]), "{degrees:?}");
    }

    #[test]
    fn positive_power_sqrt() {
        let p = positive_power_poly(0.25, 0.01, 0.5).unwrap();
        assert_eq!(p.parity(), Parity::Even);
        assert!(certify(&p).passed);
        assert!((p.eval(1.0) - 0.5).abs() <= 0.01);
        let worst = (0..1000)
            .map(|i| 0.25 + 0.75 * i as f64 / 999.0)
            .map(|x| (p.eval(x) - 0.5 * x.sqrt()).abs())
            .fold(0.0, f64::max);
        assert!(worst <= 0.01 + 1e-9);
    }

    #[test]
    fn corrupted_coefficient_fails_certification() {
        let mut p = rectangle_poly(0.2, 0.1, 0.5).unwrap();
        p.coeffs[2] += 0.3;
        assert!(!certify(&p).passed);
    }

    #[test]
    fn parity_algebra() {
        let p = rectangle_poly(0.2, 0.1, 0.5).unwrap();
        let q = mul_by_x(&p).unwrap();
        assert_eq!(q.parity(), Parity::Odd);
        let z = scale_poly(&p, 0.0).unwrap();
        assert_eq!(z.degree(), 0);
        assert_eq!(z.eval(0.4), 0.0);
        assert!(matches!(scale_poly(&p, 3.0), Err(Error::BoundExceeded(_))));
    }

    #[test]
    fn upscale_polynomial_is_linear_near_zero() {
        let (alpha, beta, eps) = (4.0, 2.0, 0.05);
        let r = upscale_poly(alpha, beta, eps).unwrap();
        for i in 0..=200 {
            let x = -1.0 / alpha + 2.0 / alpha * i as f64 / 200.0;
            assert!((r.eval(x) - alpha / beta * x).abs() <= eps / beta + 1e-9);
        }
        assert!(r.sup_bound() <= 1.0 + 1e-9);
    }

    #[test]
    fn text_round_trip() {
        let p = positive_power_poly(0.25, 0.01, 0.5).unwrap();
        let q = PolynomialApprox::from_text(&p.to_text()).unwrap();
        assert_eq!(p, q);
        assert!(PolynomialApprox::from_text("degree x").is_err());
    }

    #[test]
    fn division_by_x_inverts_multiplication() {
        let p = rectangle_poly(0.2, 0.1, 0.5).unwrap();
        let q = mul_by_x(&p).unwrap();
        let back = divide_by_x(&q).unwrap();
        for &x in &[-0.7, 0.0, 0.001, 0.5, 1.0] {
            assert!((eval_series(&back, x) - p.eval(x)).abs() < 1e-12);
        }
        let (e, o) = split_parity(&q);
        assert_eq!(o.parity(), Parity::Odd);
        assert!(e.coeffs().iter().all(|&c| c == 0.0));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(rectangle_poly(0.5, 0.1, 0.5), Err(Error::ParameterOutOfRange(_))));
        assert!(matches!(positive_power_poly(0.25, 0.01, 1.0), Err(Error::ParameterOutOfRange(_))));
    }
}
