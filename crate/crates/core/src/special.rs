//! Special functions: log-gamma, gamma ratios, Kummer U, the exponential
//! integral and unsigned Stirling numbers of the first kind.

use crate::error::{PolyaError, Result};
use crate::quadrature::{integrate_breakpoints, Tolerance};

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(PolyaError::Domain(format!("log_gamma needs x > 0, got {x}")));
    }
    Ok(lgamma(x))
}

/// `ln Γ(x)`, panicking outside the domain. For internal use on arguments
/// that are positive by construction.
pub(crate) fn lgamma(x: f64) -> f64 {
    debug_assert!(x > 0.0, "lgamma({x})");
    if x == 1.0 || x == 2.0 {
        return 0.0;
    }
    statrs::function::gamma::ln_gamma(x)
}

/// `ln Γ(x + s) − ln Γ(x)` for `x > 0`, `x + s > 0`.
///
/// For large `x` the two log-gamma values are huge and nearly equal, so the
/// difference is taken from the Stirling series directly.
pub fn ln_gamma_ratio(x: f64, s: f64) -> f64 {
    if x < 40.0 || x + s < 40.0 {
        return lgamma(x + s) - lgamma(x);
    }
    let y = x + s;
    // (y - 1/2) ln y - (x - 1/2) ln x - s, rewritten to avoid cancellation
    let main = (x - 0.5) * (s / x).ln_1p() + s * y.ln() - s;
    let corr = |z: f64| {
        let z2 = z * z;
        1.0 / (12.0 * z) - 1.0 / (360.0 * z * z2) + 1.0 / (1260.0 * z * z2 * z2)
    };
    main + corr(y) - corr(x)
}

/// Rising factorial `x (x+1) ... (x+k-1)`.
pub fn rising(x: f64, k: u32) -> f64 {
    (0..k).map(|j| x + j as f64).product()
}

/// Confluent hypergeometric function of the second kind, evaluated from
/// `U(a,b,z) = Γ(a)^{-1} ∫_0^∞ e^{-zt} t^{a-1} (1+t)^{b-a-1} dt`.
///
/// Requires `a > 0` and `z > 0`. The integral is taken in `r = ln t`, where
/// the integrand is smooth and its width does not depend on the scale of `z`,
/// relative to its peak and over the range within 50 e-folds of it.
pub fn kummer_u(a: f64, b: f64, z: f64) -> Result<f64> {
    if !(a > 0.0) || !(z > 0.0) || !b.is_finite() || !a.is_finite() || !z.is_finite() {
        return Err(PolyaError::Domain(format!("kummer_u needs a > 0, z > 0 (a={a}, b={b}, z={z})")));
    }
    let tol = Tolerance { abs: 0.0, rel: 1e-13, max_segments: 4000 };
    let c = b - a - 1.0;
    // ln(1 + e^r) without overflow
    let softplus = |r: f64| if r > 30.0 { r + (-r).exp().ln_1p() } else { r.exp().ln_1p() };
    let h = |r: f64| a * r - z * r.exp() + c * softplus(r);
    let slope = |r: f64| a - z * r.exp() + c / (1.0 + (-r).exp());
    let start = (1.0 / z).ln().min(0.0);
    let mut peak = h(start);
    let walk = |dir: f64, peak: &mut f64| -> Result<Vec<f64>> {
        let mut points = Vec::new();
        let (mut r, mut step) = (start, 1.0);
        for _ in 0..200 {
            r += dir * step;
            let v = h(r);
            *peak = peak.max(v);
            points.push(r);
            if v < *peak - 50.0 && dir * slope(r) < 0.0 {
                return Ok(points);
            }
            step = (step * 1.5).min(64.0);
        }
        Err(PolyaError::Quadrature { tolerance: tol.rel, estimate: f64::INFINITY })
    };
    let left = walk(-1.0, &mut peak)?;
    let right = walk(1.0, &mut peak)?;
    let mut points: Vec<f64> = left.into_iter().rev().collect();
    points.push(start);
    points.extend(right);
    let value = integrate_breakpoints(|r: f64| (h(r) - peak).exp(), &points, tol)?.value;
    Ok((peak - lgamma(a)).exp() * value)
}

/// Exponential integral `E_1(x) = ∫_x^∞ e^{-t}/t dt` for `x > 0`
/// (power series below 1, continued fraction above).
pub fn exp_integral_e1(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(PolyaError::Domain(format!("E1 needs x > 0, got {x}")));
    }
    const EULER: f64 = 0.577_215_664_901_532_9;
    if x <= 1.0 {
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..200 {
            term *= -x / k as f64;
            let add = term / k as f64;
            sum += add;
            if add.abs() < 1e-17 * sum.abs().max(1e-300) {
                break;
            }
        }
        return Ok(-EULER - x.ln() - sum);
    }
    // modified Lentz on the continued fraction
    let tiny = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..1000 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    Ok(h * (-x).exp())
}

/// Unsigned Stirling numbers of the first kind `[k i]`, `i = 1..=k`, i.e. the
/// coefficients of `x^i` in the rising factorial `x (x+1) ... (x+k-1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StirlingRow {
    pub k: u32,
    coefficients: Vec<u64>,
}

impl StirlingRow {
    /// `[k i]` for `1 <= i <= k`, zero otherwise.
    pub fn get(&self, i: u32) -> u64 {
        if i == 0 || i > self.k {
            0
        } else {
            self.coefficients[(i - 1) as usize]
        }
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coefficients
    }
}

/// Exact row `k` of the unsigned Stirling triangle, `1 <= k <= 20`.
pub fn stirling_first_unsigned(k: u32) -> Result<StirlingRow> {
    if k == 0 {
        return Err(PolyaError::InvalidParameter("stirling row needs k >= 1".into()));
    }
    if k > 20 {
        return Err(PolyaError::Overflow(format!("stirling row {k} exceeds 64-bit range")));
    }
    // row[i] = [m i] for i = 0..=m
    let mut row = vec![0u64, 1];
    for m in 1..k {
        let mut next = vec![0u64; row.len() + 1];
        for (i, slot) in next.iter_mut().enumerate().skip(1) {
            let left = row.get(i - 1).copied().unwrap_or(0);
            let stay = row.get(i).copied().unwrap_or(0);
            *slot = stay
                .checked_mul(u64::from(m))
                .and_then(|v| v.checked_add(left))
                .ok_or_else(|| PolyaError::Overflow(format!("stirling row {k}")))?;
        }
        row = next;
    }
    Ok(StirlingRow { k, coefficients: row[1..].to_vec() })
}
