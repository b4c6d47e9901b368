//! The UL family: laws on `(0, ρ)` with density
//! `u(x) = c x^{v−1} exp(−v Φ(x))`, where `A(x) = Σ a_k x^k` has radius of
//! convergence `ρ` and `Φ(x) = Σ a_k x^k / k`.
//!
//! Two coefficient shapes are supported: finitely many coefficients
//! (`ρ = ∞`) and the geometric sequence `a_k = β α^{−k}` (`ρ = α`), for which
//! `Z/α ~ Beta(v, vβ + 1)`.

use std::sync::OnceLock;

use rand::Rng;
use rand_distr::{Beta, Distribution};
use serde::{Deserialize, Serialize};

use crate::bias::SampleBatch;
use crate::error::{PolyaError, Result};
use crate::interarrival::{make_interarrival, InterArrivalDescriptor, InterArrivalSpec, PowerLaw};
use crate::moments::{estimate_limit_moments, MomentEstimate, MomentKind, StdErrorMethod};
use crate::quadrature::{integrate, integrate_breakpoints, Tolerance};
use crate::rng::{derive_seed, map_streams};
use crate::special::lgamma;
use crate::stats::ks_two_sample;
use crate::urn::{scaled_white, simulate_urn, UrnConfig};

/// Moments cached at construction.
pub const CACHED_MOMENTS: usize = 12;
// Integration stops where the integrand has dropped by this many e-folds.
const TAIL_EFOLDS: f64 = 60.0;
const QUAD: Tolerance = Tolerance { abs: 0.0, rel: 1e-12, max_segments: 4000 };
const SAMPLE_CHUNK: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Coefficients {
    /// `a[0] = a_1, a[1] = a_2, ...`.
    Polynomial {
        a: Vec<f64>,
    },
    Geometric {
        alpha: f64,
        beta: f64,
    },
}

/// JSON form of a [`ULSpec`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ULDescriptor {
    pub v: f64,
    pub coefficients: Coefficients,
}

#[derive(Debug, Clone)]
pub struct ULSpec {
    v: f64,
    coefficients: Coefficients,
    /// `ln ∫ x^{v−1} exp(−vΦ(x)) dx`.
    log_norm: f64,
    /// `μ_0, ..., μ_12`.
    moments: Vec<f64>,
    sampler: OnceLock<Result<InverseCdf>>,
}

impl ULSpec {
    pub fn new(v: f64, coefficients: Coefficients) -> Result<Self> {
        if !(v > 0.0) || !v.is_finite() {
            return Err(PolyaError::InvalidParameter(format!("v must be positive, got {v}")));
        }
        match &coefficients {
            Coefficients::Polynomial { a } => {
                if a.iter().any(|x| !(*x >= 0.0) || !x.is_finite()) {
                    return Err(PolyaError::InvalidParameter("coefficients must be finite and >= 0".into()));
                }
                if !a.iter().any(|x| *x > 0.0) {
                    return Err(PolyaError::InvalidParameter("some coefficient must be positive".into()));
                }
            }
            Coefficients::Geometric { alpha, beta } => {
                if !(*alpha > 0.0 && alpha.is_finite() && *beta > 0.0 && beta.is_finite()) {
                    return Err(PolyaError::InvalidParameter("geometric coefficients need alpha, beta > 0".into()));
                }
            }
        }
        let mut spec = Self { v, coefficients, log_norm: 0.0, moments: Vec::new(), sampler: OnceLock::new() };
        spec.log_norm = spec.log_moment_integral(0.0)?;
        spec.moments = (0..=CACHED_MOMENTS).map(|k| spec.moment_by_quadrature(k as f64)).collect::<Result<_>>()?;
        Ok(spec)
    }

    pub fn polynomial(v: f64, a: &[f64]) -> Result<Self> {
        Self::new(v, Coefficients::Polynomial { a: a.to_vec() })
    }

    pub fn geometric(v: f64, alpha: f64, beta: f64) -> Result<Self> {
        Self::new(v, Coefficients::Geometric { alpha, beta })
    }

    pub fn from_descriptor(d: &ULDescriptor) -> Result<Self> {
        Self::new(d.v, d.coefficients.clone())
    }

    pub fn descriptor(&self) -> ULDescriptor {
        ULDescriptor { v: self.v, coefficients: self.coefficients.clone() }
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn coefficients(&self) -> &Coefficients {
        &self.coefficients
    }

    /// Radius of convergence of `A`.
    pub fn rho(&self) -> f64 {
        match self.coefficients {
            Coefficients::Polynomial { .. } => f64::INFINITY,
            Coefficients::Geometric { alpha, .. } => alpha,
        }
    }

    /// `a_k` for `k >= 1`.
    pub fn a(&self, k: usize) -> f64 {
        assert!(k >= 1, "coefficients start at a_1");
        match &self.coefficients {
            Coefficients::Polynomial { a } => a.get(k - 1).copied().unwrap_or(0.0),
            Coefficients::Geometric { alpha, beta } => beta * alpha.powi(-(k as i32)),
        }
    }

    /// `A(x)`.
    pub fn series_a(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        Ok(self.series_a_unchecked(x))
    }

    /// `Φ(x) = ∫_0^x A(t)/t dt`.
    pub fn phi(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        Ok(self.phi_unchecked(x))
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        if !(x >= 0.0) || x >= self.rho() {
            return Err(PolyaError::Domain(format!("x = {x} outside [0, {})", self.rho())));
        }
        Ok(())
    }

    fn series_a_unchecked(&self, x: f64) -> f64 {
        match &self.coefficients {
            Coefficients::Polynomial { a } => a.iter().rev().fold(0.0, |acc, &c| (acc + c) * x),
            Coefficients::Geometric { alpha, beta } => beta * x / (alpha - x),
        }
    }

    fn phi_unchecked(&self, x: f64) -> f64 {
        match &self.coefficients {
            Coefficients::Polynomial { a } => {
                a.iter().enumerate().rev().fold(0.0, |acc, (i, &c)| (acc + c / (i + 1) as f64) * x)
            }
            Coefficients::Geometric { alpha, beta } => -beta * (-x / alpha).ln_1p(),
        }
    }

    /// The normalising constant `c`.
    pub fn normalizing_constant(&self) -> f64 {
        (-self.log_norm).exp()
    }

    pub fn log_density(&self, x: f64) -> f64 {
        if !(x > 0.0) || x >= self.rho() {
            return f64::NEG_INFINITY;
        }
        -self.log_norm + (self.v - 1.0) * x.ln() - self.v * self.phi_unchecked(x)
    }

    /// `u(x)`, zero outside `(0, ρ)`.
    pub fn density(&self, x: f64) -> f64 {
        self.log_density(x).exp()
    }

    /// `μ_k = E Z^k`; cached for `k <= 12`, otherwise by quadrature.
    pub fn moment(&self, k: usize) -> Result<f64> {
        match self.moments.get(k) {
            Some(&m) => Ok(m),
            None => self.moment_by_quadrature(k as f64),
        }
    }

    /// Cached `μ_0..=μ_12`.
    pub fn moments(&self) -> &[f64] {
        &self.moments
    }

    fn moment_by_quadrature(&self, k: f64) -> Result<f64> {
        Ok((self.log_moment_integral(k)? - self.log_norm).exp())
    }

    /// `ln ∫_0^ρ x^{v−1+k} exp(−vΦ(x)) dx`.
    fn log_moment_integral(&self, k: f64) -> Result<f64> {
        let p = self.v - 1.0 + k;
        match self.coefficients {
            Coefficients::Polynomial { .. } => {
                let (shift, value) = self.polynomial_integral(p)?;
                Ok(shift + value.ln())
            }
            Coefficients::Geometric { alpha, beta } => {
                // x = α y: α^{p+1} ∫_0^1 y^p (1−y)^{vβ} dy
                let value = unit_beta_integral(p, self.v * beta, |_| 1.0)?;
                Ok((p + 1.0) * alpha.ln() + value.ln())
            }
        }
    }

    /// Peak of `p ln x − vΦ(x)` (where `A(x) = p/v`), or the scale where
    /// `vΦ(x) = 1` when `p <= 0`.
    fn reference_point(&self, p: f64) -> f64 {
        let target = |x: f64| {
            if p > 0.0 {
                self.v * self.series_a_unchecked(x) - p
            } else {
                self.v * self.phi_unchecked(x) - 1.0
            }
        };
        let mut hi = 1.0;
        while target(hi) < 0.0 {
            hi *= 2.0;
        }
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if target(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 * hi {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    /// Point beyond which `x^p exp(−vΦ)` is below `e^{−60}` of its reference value.
    fn upper_limit(&self, p: f64) -> f64 {
        let h = |x: f64| p * x.ln() - self.v * self.phi_unchecked(x);
        let x0 = self.reference_point(p);
        let h0 = h(x0);
        let mut x = x0;
        loop {
            x *= 1.25;
            if h(x) < h0 - TAIL_EFOLDS && self.series_a_unchecked(x) * self.v > p {
                return x;
            }
        }
    }

    /// `(shift, I)` with `∫_0^∞ x^p exp(−vΦ(x)) dx = e^{shift} I`.
    fn polynomial_integral(&self, p: f64) -> Result<(f64, f64)> {
        let h = |x: f64| p * x.ln() - self.v * self.phi_unchecked(x);
        let x0 = self.reference_point(p);
        let shift = if p > 0.0 { h(x0) } else { 0.0 };
        let upper = self.upper_limit(p);
        // [0, x0] with x = s^{1/(p+1)} so the integrand is bounded at 0
        let q = p + 1.0;
        let left = integrate(
            |s: f64| {
                if s <= 0.0 {
                    return (-shift).exp() / q;
                }
                let x = s.powf(1.0 / q);
                (-self.v * self.phi_unchecked(x) - shift).exp() / q
            },
            0.0,
            x0.powf(q),
            QUAD,
        )?;
        let mut points = vec![x0];
        let mut x = x0;
        while x < upper {
            x = (x * 1.5).min(upper);
            points.push(x);
        }
        let right = integrate_breakpoints(|x: f64| (h(x) - shift).exp(), &points, QUAD)?;
        Ok((shift, left.value + right.value))
    }

    /// `|∫ u − 1|` computed along an independent route (the tabulated CDF
    /// in the variable `y = x^v`).
    pub fn normalization_error(&self) -> Result<f64> {
        let table = self.inverse_cdf()?;
        Ok((table.raw_total - 1.0).abs())
    }

    /// `μ_k − v/(v+k) Σ_{l=1}^{L} a_l μ_{k+l}`; for geometric coefficients the
    /// omitted terms `l > L` are evaluated separately as `tail`.
    pub fn moment_recursion_residual(&self, k: usize, truncation: usize) -> Result<RecursionResidual> {
        let v = self.v;
        let factor = v / (v + k as f64);
        let terms = match &self.coefficients {
            Coefficients::Polynomial { a } => a.len(),
            Coefficients::Geometric { .. } => truncation.max(1),
        };
        let mut sum = 0.0;
        for l in 1..=terms {
            let al = self.a(l);
            if al > 0.0 {
                sum += al * self.moment(k + l)?;
            }
        }
        let truncated = self.moment(k)? - factor * sum;
        let tail = match self.coefficients {
            Coefficients::Polynomial { .. } => 0.0,
            Coefficients::Geometric { beta, .. } => factor * self.geometric_tail(k, terms, beta)?,
        };
        Ok(RecursionResidual { k, truncation: terms, truncated, tail, residual: truncated - tail })
    }

    /// `Σ_{l>L} a_l μ_{k+l} = β E[Z^k (Z/α)^{L+1} / (1 − Z/α)]`.
    fn geometric_tail(&self, k: usize, l_max: usize, beta: f64) -> Result<f64> {
        let Coefficients::Geometric { alpha, .. } = self.coefficients else { unreachable!() };
        let p = self.v - 1.0 + k as f64;
        let m = (l_max + 1) as f64;
        // x = α y; (1−y)^{vβ} / (1−y) leaves exponent vβ − 1 > −1
        let value = unit_beta_integral(p, self.v * beta - 1.0, |y| y.powf(m))?;
        Ok(beta * ((p + 1.0) * alpha.ln() - self.log_norm).exp() * value)
    }

    /// `ψ_k = a_k μ_k`, checked to sum to one within `1e-8`.
    pub fn psi(&self) -> Result<PsiDistribution> {
        match &self.coefficients {
            Coefficients::Polynomial { a } => {
                let probs: Vec<(usize, f64)> = a
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c > 0.0)
                    .map(|(i, &c)| Ok((i + 1, c * self.moment(i + 1)?)))
                    .collect::<Result<_>>()?;
                let total: f64 = probs.iter().map(|p| p.1).sum();
                if (total - 1.0).abs() > 1e-8 {
                    return Err(PolyaError::Normalization(format!("psi sums to {total}")));
                }
                PsiDistribution::finite(&probs)
            }
            Coefficients::Geometric { beta, .. } => {
                // Σψ_k = 1 is the k = 0 recursion identity
                let check = self.moment_recursion_residual(0, CACHED_MOMENTS)?;
                if check.residual.abs() > 1e-8 {
                    return Err(PolyaError::Normalization(format!("psi sums to {}", 1.0 - check.residual)));
                }
                Ok(PsiDistribution::shifted_power_law(*beta, self.v))
            }
        }
    }

    /// Law of `θ Z`: `a_k ↦ θ^{−k} a_k`.
    pub fn scale(&self, theta: f64) -> Result<Self> {
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(PolyaError::InvalidParameter(format!("theta must be positive, got {theta}")));
        }
        let coefficients = match &self.coefficients {
            Coefficients::Polynomial { a } => Coefficients::Polynomial {
                a: a.iter().enumerate().map(|(i, c)| c * theta.powi(-(i as i32 + 1))).collect(),
            },
            Coefficients::Geometric { alpha, beta } => Coefficients::Geometric { alpha: alpha * theta, beta: *beta },
        };
        Self::new(self.v, coefficients)
    }

    fn inverse_cdf(&self) -> Result<&InverseCdf> {
        self.sampler.get_or_init(|| InverseCdf::build(self)).as_ref().map_err(Clone::clone)
    }

    /// Tabulated CDF (interpolation error below `1e-8`).
    pub fn cdf(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Ok(0.0);
        }
        if x >= self.rho() {
            return Ok(1.0);
        }
        Ok(self.inverse_cdf()?.cdf(x.powf(self.v)))
    }

    /// `P(Z >= x)` by direct quadrature of the density.
    pub fn survival(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Ok(1.0);
        }
        if x >= self.rho() {
            return Ok(0.0);
        }
        let v = self.v;
        match self.coefficients {
            Coefficients::Polynomial { .. } => {
                let p = v - 1.0;
                let upper = self.upper_limit(p).max(x * 2.0);
                let lx = self.log_density(x);
                let mut points = vec![x];
                let mut t = x;
                while t < upper {
                    t = (t * 1.25).min(upper);
                    points.push(t);
                }
                // scaled by u(x) so that far tails keep their relative precision
                let rel = integrate_breakpoints(|t: f64| (self.log_density(t) - lx).exp(), &points, QUAD)?;
                Ok(rel.value * lx.exp())
            }
            Coefficients::Geometric { alpha, beta } => {
                // 1 − t/α = r^{1/(vβ+1)} on [x, α)
                let q = v * beta + 1.0;
                let r_max = (1.0 - x / alpha).powf(q);
                let est = integrate(
                    |r: f64| {
                        let t = alpha * (1.0 - r.powf(1.0 / q));
                        if t <= 0.0 {
                            return 0.0;
                        }
                        ((v - 1.0) * t.ln() - self.log_norm).exp() * alpha / q
                    },
                    0.0,
                    r_max,
                    QUAD,
                )?;
                Ok(est.value)
            }
        }
    }

    /// `N` i.i.d. draws by inverse transform; chunk `i` uses stream `i`.
    pub fn sample(&self, count: usize, seed: u64, label: &str) -> Result<SampleBatch> {
        let table = self.inverse_cdf()?;
        let chunks = count.div_ceil(SAMPLE_CHUNK);
        let values: Vec<f64> = map_streams(seed, chunks, |i, rng| {
            let len = SAMPLE_CHUNK.min(count - i as usize * SAMPLE_CHUNK);
            (0..len).map(|_| table.sample(rng)).collect::<Vec<_>>()
        })
        .into_iter()
        .flatten()
        .collect();
        SampleBatch::new(values, seed, label)
    }

    /// One draw, for callers that manage their own streams.
    pub fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<f64> {
        Ok(self.inverse_cdf()?.sample(rng))
    }

    /// `inf_ℓ (c/ℓ)(v a_ℓ/ℓ)^{−(v+m)/ℓ} Γ((v+m)/ℓ)` over `ℓ` with `a_ℓ > 0`
    /// (the first 64 for geometric coefficients).
    pub fn moment_upper_bound(&self, m: usize) -> f64 {
        let v = self.v;
        let ls: Vec<usize> = match &self.coefficients {
            Coefficients::Polynomial { a } => (1..=a.len()).filter(|&l| a[l - 1] > 0.0).collect(),
            Coefficients::Geometric { .. } => (1..=64).collect(),
        };
        ls.into_iter()
            .map(|l| {
                let lf = l as f64;
                let s = (v + m as f64) / lf;
                (-self.log_norm - lf.ln() - s * (v * self.a(l) / lf).ln() + lgamma(s)).exp()
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Check `P(Z >= x) <= C_α u(x)` with `C_α = P(Z >= α)/u(α)` on `points`
    /// equally spaced `x` in `(α, x_max]`, where `x_max` is far in the tail.
    pub fn mills_check(&self, alpha: f64, points: usize) -> Result<MillsReport> {
        if !(alpha > 0.0) || alpha >= self.rho() {
            return Err(PolyaError::InvalidParameter(format!("alpha = {alpha} outside (0, rho)")));
        }
        let c_alpha = self.survival(alpha)? / self.density(alpha);
        let x_max = match self.coefficients {
            Coefficients::Polynomial { .. } => {
                let p = self.v - 1.0;
                let x0 = self.reference_point(p.max(1e-3)).max(alpha);
                let h = |x: f64| self.log_density(x);
                let mut x = x0;
                while h(x) > h(x0) - 30.0 {
                    x *= 1.1;
                }
                x.max(alpha * 2.0)
            }
            Coefficients::Geometric { alpha: rho, .. } => alpha + 0.999 * (rho - alpha),
        };
        let mut worst: f64 = 0.0;
        let mut grid = Vec::with_capacity(points);
        for i in 1..=points {
            let x = alpha + (x_max - alpha) * i as f64 / points as f64;
            let tail = self.survival(x)?;
            let bound = c_alpha * self.density(x);
            worst = worst.max(tail / bound);
            grid.push((x, tail, bound));
        }
        Ok(MillsReport { alpha, c_alpha, worst_ratio: worst, holds: worst <= 1.0 + 1e-9, grid })
    }
}

/// `∫_0^1 y^p (1−y)^q h(y) dy` for `p, q > −1` and smooth bounded `h`; the
/// endpoint powers are removed by substitution on each half.
fn unit_beta_integral(p: f64, q: f64, h: impl Fn(f64) -> f64) -> Result<f64> {
    let (pp, qq) = (p + 1.0, q + 1.0);
    let left = integrate(
        |s: f64| {
            let y = s.powf(1.0 / pp);
            (1.0 - y).powf(q) * h(y)
        },
        0.0,
        0.5f64.powf(pp),
        QUAD,
    )?;
    let right = integrate(
        |r: f64| {
            let y = 1.0 - r.powf(1.0 / qq);
            y.powf(p) * h(y)
        },
        0.0,
        0.5f64.powf(qq),
        QUAD,
    )?;
    Ok(left.value / pp + right.value / qq)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecursionResidual {
    pub k: usize,
    pub truncation: usize,
    /// `μ_k − v/(v+k) Σ_{l<=L} a_l μ_{k+l}`.
    pub truncated: f64,
    /// `v/(v+k) Σ_{l>L} a_l μ_{k+l}`; zero for finitely many coefficients.
    pub tail: f64,
    /// `truncated − tail`.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MillsReport {
    pub alpha: f64,
    pub c_alpha: f64,
    /// `max_x P(Z >= x) / (C_α u(x))` over the grid.
    pub worst_ratio: f64,
    pub holds: bool,
    /// `(x, P(Z >= x), C_α u(x))`.
    pub grid: Vec<(f64, f64, f64)>,
}

/// A law on the positive integers used as the bias index distribution.
#[derive(Debug, Clone)]
pub enum PsiDistribution {
    /// `(k, ψ_k)` with `ψ_k > 0`.
    Finite { probs: Vec<(usize, f64)>, thresholds: Vec<f64> },
    /// `ψ_k = π_{k−1}` with `π` the power law of parameters `(β, w)`, the
    /// ψ of the geometric coefficients.
    ShiftedPowerLaw { beta: f64, w: f64, law: Box<PowerLaw> },
}

impl PsiDistribution {
    pub fn finite(probs: &[(usize, f64)]) -> Result<Self> {
        let mut probs: Vec<(usize, f64)> = probs.iter().copied().filter(|p| p.1 > 0.0).collect();
        if probs.is_empty() || probs.iter().any(|p| p.0 == 0 || !p.1.is_finite()) {
            return Err(PolyaError::InvalidParameter("psi needs positive indices and mass".into()));
        }
        probs.sort_by_key(|p| p.0);
        let total: f64 = probs.iter().map(|p| p.1).sum();
        let mut acc = 0.0;
        let thresholds = probs
            .iter()
            .map(|p| {
                acc += p.1;
                acc / total
            })
            .collect();
        Ok(Self::Finite { probs, thresholds })
    }

    pub fn delta(k: usize) -> Self {
        Self::finite(&[(k, 1.0)]).expect("valid point mass")
    }

    pub fn shifted_power_law(beta: f64, w: f64) -> Self {
        Self::ShiftedPowerLaw { beta, w, law: Box::new(PowerLaw::new(1.0, beta, w)) }
    }

    pub fn pmf(&self, k: usize) -> f64 {
        match self {
            Self::Finite { probs, .. } => probs.iter().find(|p| p.0 == k).map_or(0.0, |p| p.1),
            Self::ShiftedPowerLaw { law, .. } => {
                if k == 0 {
                    0.0
                } else {
                    law.pmf(k as u64 - 1)
                }
            }
        }
    }

    /// `Σ_k ψ_k` (exactly one for the power-law form).
    pub fn total(&self) -> f64 {
        match self {
            Self::Finite { probs, .. } => probs.iter().map(|p| p.1).sum(),
            Self::ShiftedPowerLaw { .. } => 1.0,
        }
    }

    /// Smallest set `{1..=K}` (or listed support) carrying at least `mass`.
    pub fn support_for_mass(&self, mass: f64) -> Vec<usize> {
        match self {
            Self::Finite { probs, .. } => probs.iter().map(|p| p.0).collect(),
            Self::ShiftedPowerLaw { law, .. } => {
                let mut k = 1;
                let mut acc = 0.0;
                let mut out = Vec::new();
                while acc < mass {
                    acc += law.pmf(k as u64 - 1);
                    out.push(k);
                    k += 1;
                }
                out
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        match self {
            Self::Finite { probs, thresholds } => {
                let u: f64 = rng.random();
                let idx = thresholds.partition_point(|&t| t <= u).min(probs.len() - 1);
                probs[idx].0
            }
            Self::ShiftedPowerLaw { law, .. } => law.sample(rng) as usize + 1,
        }
    }
}

/// Piecewise cubic Hermite table of `G(y) = P(Z^v <= y)`, whose derivative
/// `g(y) = (c/v) exp(−vΦ(y^{1/v}))` is bounded even when `v < 1`.
#[derive(Debug, Clone)]
struct InverseCdf {
    v: f64,
    y: Vec<f64>,
    g_cum: Vec<f64>,
    g: Vec<f64>,
    /// Unnormalised total mass, `c ∫ x^{v−1} exp(−vΦ)` along this route.
    raw_total: f64,
}

const CDF_TOLERANCE: f64 = 1e-8;
const CDF_MAX_NODES: usize = 200_000;

impl InverseCdf {
    fn build(spec: &ULSpec) -> Result<Self> {
        let v = spec.v;
        let c = spec.normalizing_constant();
        let y_max = match spec.coefficients {
            Coefficients::Polynomial { .. } => spec.upper_limit(v - 1.0).powf(v),
            Coefficients::Geometric { alpha, .. } => alpha.powf(v),
        };
        let rho = spec.rho();
        let g = move |y: f64| {
            let x = y.powf(1.0 / v);
            if x >= rho {
                0.0
            } else {
                c / v * (-v * spec.phi_unchecked(x)).exp()
            }
        };
        let seg_integral = |a: f64, b: f64| -> Result<f64> {
            Ok(integrate(g, a, b, Tolerance { abs: 1e-15, rel: 1e-13, max_segments: 2000 })?.value)
        };
        let initial = 128;
        let mut stack: Vec<(f64, f64)> = (0..initial)
            .rev()
            .map(|i| (y_max * i as f64 / initial as f64, y_max * (i + 1) as f64 / initial as f64))
            .collect();
        let mut ys = vec![0.0];
        let mut cum = vec![0.0];
        let mut gs = vec![g(0.0)];
        while let Some((a, b)) = stack.pop() {
            let (ga, gb) = (g(a), g(b));
            let mid = 0.5 * (a + b);
            let left = seg_integral(a, mid)?;
            let right = seg_integral(mid, b)?;
            let h = b - a;
            // Hermite value at the midpoint relative to G(a)
            let hermite_mid = 0.5 * (left + right) + h / 8.0 * (ga - gb);
            let converged = (hermite_mid - left).abs() < CDF_TOLERANCE || h < 1e-14 * y_max.max(1.0);
            if !converged && ys.len() + stack.len() < CDF_MAX_NODES {
                stack.push((mid, b));
                stack.push((a, mid));
                continue;
            }
            let base = *cum.last().expect("non-empty");
            ys.push(b);
            cum.push(base + left + right);
            gs.push(gb);
        }
        let raw_total = *cum.last().expect("non-empty");
        for (value, slope) in cum.iter_mut().zip(gs.iter_mut()) {
            *value /= raw_total;
            *slope /= raw_total;
        }
        Ok(Self { v, y: ys, g_cum: cum, g: gs, raw_total })
    }

    fn hermite(&self, i: usize, y: f64) -> f64 {
        let (y0, y1) = (self.y[i], self.y[i + 1]);
        let h = y1 - y0;
        let t = (y - y0) / h;
        let (t2, t3) = (t * t, t * t * t);
        (2.0 * t3 - 3.0 * t2 + 1.0) * self.g_cum[i]
            + (t3 - 2.0 * t2 + t) * h * self.g[i]
            + (-2.0 * t3 + 3.0 * t2) * self.g_cum[i + 1]
            + (t3 - t2) * h * self.g[i + 1]
    }

    fn hermite_slope(&self, i: usize, y: f64) -> f64 {
        let (y0, y1) = (self.y[i], self.y[i + 1]);
        let h = y1 - y0;
        let t = (y - y0) / h;
        let t2 = t * t;
        ((6.0 * t2 - 6.0 * t) * self.g_cum[i] + (6.0 * t - 6.0 * t2) * self.g_cum[i + 1]) / h
            + (3.0 * t2 - 4.0 * t + 1.0) * self.g[i]
            + (3.0 * t2 - 2.0 * t) * self.g[i + 1]
    }

    fn cdf(&self, y: f64) -> f64 {
        let last = *self.y.last().expect("non-empty");
        if y >= last {
            return 1.0;
        }
        let i = self.y.partition_point(|&t| t <= y).saturating_sub(1);
        self.hermite(i, y).clamp(0.0, 1.0)
    }

    /// Solve `G(y) = u` and return `x = y^{1/v}`.
    fn invert(&self, u: f64) -> f64 {
        let i = self.g_cum.partition_point(|&c| c <= u).clamp(1, self.y.len() - 1) - 1;
        let (mut lo, mut hi) = (self.y[i], self.y[i + 1]);
        let (c0, c1) = (self.g_cum[i], self.g_cum[i + 1]);
        let mut y = if c1 > c0 { lo + (hi - lo) * ((u - c0) / (c1 - c0)).clamp(0.0, 1.0) } else { lo };
        for _ in 0..60 {
            let f = self.hermite(i, y) - u;
            if f > 0.0 {
                hi = y;
            } else {
                lo = y;
            }
            let slope = self.hermite_slope(i, y);
            let mut next = if slope > 0.0 { y - f / slope } else { f64::NAN };
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - y).abs() <= 1e-15 * y.abs().max(1e-300) || hi - lo <= 1e-15 * hi {
                y = next;
                break;
            }
            y = next;
        }
        y.max(0.0).powf(1.0 / self.v)
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        // u in (0, 1] so the draw is never exactly zero
        let u = 1.0 - rng.random::<f64>();
        let x = self.invert(u);
        if x > 0.0 {
            x
        } else {
            f64::MIN_POSITIVE
        }
    }
}

/// `a_k = π_{k−1} / m_k(1, b+w−1, π)` with `v = b + w − 1`. The estimates must
/// come from the urn started with one black and `b + w − 1` white balls.
pub fn ul_from_urn_limit(
    b: u64,
    w: u64,
    pi: &InterArrivalSpec,
    estimates: &[MomentEstimate],
    kind: MomentKind,
) -> Result<ULSpec> {
    if b == 0 || w == 0 {
        return Err(PolyaError::InvalidParameter("need b, w >= 1".into()));
    }
    let atoms =
        pi.atoms().ok_or_else(|| PolyaError::InvalidParameter("limit construction needs finite-support pi".into()))?;
    let top = atoms.iter().map(|a| a.0).max().expect("non-empty") as usize + 1;
    let mut a = vec![0.0; top];
    for (value, prob) in atoms {
        let k = value as usize + 1;
        let m = estimates.iter().find(|e| e.k as usize == k).ok_or(PolyaError::MissingMoment(k))?.value(kind);
        a[k - 1] = prob / m;
    }
    ULSpec::polynomial((b + w - 1) as f64, &a)
}

/// The reference suite: Exp(1), Gamma(3, rate 3), half-gaussian, the
/// two-coefficient law `(v, a_1, a_2) = (2, 1, 1)` and `a_k = 1` with `v = 1`
/// (`Z ~ Beta(1, 2)`).
pub fn suite_specs() -> Result<Vec<(&'static str, ULSpec)>> {
    Ok(vec![
        ("exp", ULSpec::polynomial(1.0, &[1.0])?),
        ("gamma3", ULSpec::polynomial(3.0, &[1.0])?),
        ("half-gaussian", ULSpec::polynomial(1.0, &[0.0, 1.0])?),
        ("two-point", ULSpec::polynomial(2.0, &[1.0, 1.0])?),
        ("geometric", ULSpec::geometric(1.0, 1.0, 1.0)?),
    ])
}

/// Inputs of the end-to-end limit check: estimate `m_k(1, b+w−1, π)`, build
/// the UL law, mix with `B ~ Beta(w, b−1)` and compare with scaled urn draws.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitCheckConfig {
    pub b: u64,
    pub w: u64,
    pub pi: InterArrivalDescriptor,
    /// Horizon and arrival paths for the moment estimates.
    pub moment_n: u64,
    pub moment_paths: usize,
    /// Horizon and number of urn paths (also the limit sample size).
    pub n: u64,
    pub paths: usize,
    pub kind: MomentKind,
    /// Largest accepted KS statistic.
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitCheckReport {
    pub estimates: Vec<MomentEstimate>,
    pub spec: ULDescriptor,
    pub exponent: f64,
    pub ks: f64,
    pub p_value: f64,
    pub threshold: f64,
    pub passed: bool,
    pub urn_mean: f64,
    pub limit_mean: f64,
}

/// Scaled urn values and limit draws of [`limit_check`], in path order.
pub struct LimitSamples {
    pub urn: Vec<f64>,
    pub limit: Vec<f64>,
}

pub fn limit_check(config: &LimitCheckConfig, seed: u64) -> Result<(LimitCheckReport, LimitSamples)> {
    let pi = make_interarrival(&config.pi)?;
    let atoms =
        pi.atoms().ok_or_else(|| PolyaError::InvalidParameter("limit construction needs finite-support pi".into()))?;
    let k_max = atoms.iter().map(|a| a.0).max().expect("non-empty") as u32 + 1;
    let estimates = estimate_limit_moments(
        k_max,
        1,
        config.b + config.w - 1,
        &pi,
        config.moment_n,
        config.moment_paths,
        derive_seed(seed, "moments"),
        StdErrorMethod::Clt,
    )?;
    let spec = ul_from_urn_limit(config.b, config.w, &pi, &estimates, config.kind)?;
    let z = spec.sample(config.paths, derive_seed(seed, "limit"), "limit")?;
    let limit: Vec<f64> = if config.b > 1 {
        let mix = Beta::new(config.w as f64, (config.b - 1) as f64)
            .map_err(|e| PolyaError::InvalidParameter(e.to_string()))?;
        let factors: Vec<f64> =
            map_streams(derive_seed(seed, "mixing"), config.paths.div_ceil(SAMPLE_CHUNK), |i, rng| {
                let len = SAMPLE_CHUNK.min(config.paths - i as usize * SAMPLE_CHUNK);
                (0..len).map(|_| mix.sample(rng)).collect::<Vec<_>>()
            })
            .into_iter()
            .flatten()
            .collect();
        z.values.iter().zip(&factors).map(|(z, b)| z * b).collect()
    } else {
        z.values
    };
    let urn_config = UrnConfig::new(config.b, config.w, pi.clone(), config.n)?;
    let mean = pi.mean();
    let urn: Vec<f64> = map_streams(derive_seed(seed, "urn"), config.paths, |_, rng| {
        scaled_white(simulate_urn(&urn_config, rng).white, config.n, mean)
    });
    let (ks, p_value) = ks_two_sample(&urn, &limit)?;
    let avg = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let report = LimitCheckReport {
        estimates,
        spec: spec.descriptor(),
        exponent: mean.scaling_exponent(),
        ks,
        p_value,
        threshold: config.threshold,
        passed: ks < config.threshold,
        urn_mean: avg(&urn),
        limit_mean: avg(&limit),
    };
    Ok((report, LimitSamples { urn, limit }))
}

pub fn series_a(spec: &ULSpec, x: f64) -> Result<f64> {
    spec.series_a(x)
}

pub fn phi(spec: &ULSpec, x: f64) -> Result<f64> {
    spec.phi(x)
}

pub fn normalizing_constant(spec: &ULSpec) -> f64 {
    spec.normalizing_constant()
}

pub fn density(spec: &ULSpec, x: f64) -> f64 {
    spec.density(x)
}

pub fn moment(spec: &ULSpec, k: usize) -> Result<f64> {
    spec.moment(k)
}

pub fn moment_recursion_residual(spec: &ULSpec, k: usize, truncation: usize) -> Result<RecursionResidual> {
    spec.moment_recursion_residual(k, truncation)
}

pub fn psi_from_ul(spec: &ULSpec) -> Result<PsiDistribution> {
    spec.psi()
}

pub fn scale_ul(spec: &ULSpec, theta: f64) -> Result<ULSpec> {
    spec.scale(theta)
}

pub fn sample_ul(spec: &ULSpec, count: usize, seed: u64) -> Result<SampleBatch> {
    spec.sample(count, seed, "ul")
}

pub fn moment_upper_bound(spec: &ULSpec, m: usize) -> f64 {
    spec.moment_upper_bound(m)
}

pub fn mills_check(spec: &ULSpec, alpha: f64, points: usize) -> Result<MillsReport> {
    spec.mills_check(alpha, points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::{empirical_moments, ks_vs_cdf};
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn exp1() -> ULSpec {
        ULSpec::polynomial(1.0, &[1.0]).unwrap()
    }

    #[test]
    fn series_and_phi() {
        let s = exp1();
        assert_eq!(s.series_a(2.0).unwrap(), 2.0);
        assert_eq!(s.phi(2.0).unwrap(), 2.0);
        let g = ULSpec::geometric(1.0, 1.0, 1.0).unwrap();
        assert!((g.series_a(0.5).unwrap() - 1.0).abs() < 1e-15);
        assert!((g.phi(0.5).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert_eq!(g.series_a(0.0).unwrap(), 0.0);
        assert_eq!(g.phi(0.0).unwrap(), 0.0);
        assert!(matches!(g.phi(1.0), Err(PolyaError::Domain(_))));
        let p = ULSpec::polynomial(2.0, &[1.0, 3.0, 0.5]).unwrap();
        assert!((p.phi(2.0).unwrap() - (2.0 + 1.5 * 4.0 + 0.5 * 8.0 / 3.0)).abs() < 1e-13);
    }

    #[test]
    fn normalizing_constants() {
        assert!(rel(exp1().normalizing_constant(), 1.0) < 1e-12);
        for w in [2.0, 3.0, 5.0] {
            let s = ULSpec::polynomial(w, &[1.0]).unwrap();
            let want = (w * w.ln() - lgamma(w)).exp();
            assert!(rel(s.normalizing_constant(), want) < 1e-11, "w={w}");
        }
        let g = ULSpec::geometric(1.0, 1.0, 1.0).unwrap();
        assert!(rel(g.normalizing_constant(), 2.0) < 1e-11);
        // v < 1: Gamma(1/2, rate 1/2)
        let h = ULSpec::polynomial(0.5, &[1.0]).unwrap();
        let want = (0.5 * 0.5f64.ln() - lgamma(0.5)).exp();
        assert!(rel(h.normalizing_constant(), want) < 1e-11);
    }

    #[test]
    fn densities() {
        assert!(rel(exp1().density(1.0), (-1.0f64).exp()) < 1e-12);
        let g = ULSpec::geometric(1.0, 1.0, 1.0).unwrap();
        assert!(rel(g.density(0.5), 1.0) < 1e-11);
        assert_eq!(g.density(1.0), 0.0);
        assert_eq!(g.density(1.5), 0.0);
        assert_eq!(exp1().density(-1.0), 0.0);
    }

    #[test]
    fn moments_match_closed_forms() {
        let s = exp1();
        let mut fact = 1.0;
        for k in 0..=12 {
            if k > 0 {
                fact *= k as f64;
            }
            assert!(rel(s.moment(k).unwrap(), fact) < 1e-11, "k={k}");
        }
        let hg = ULSpec::polynomial(1.0, &[0.0, 2.0]).unwrap();
        assert!(rel(hg.moment(1).unwrap(), 1.0 / PI.sqrt()) < 1e-11);
        // Beta(v, vβ+1) scaled by α
        let (v, alpha, beta) = (1.5, 2.0, 0.7);
        let g = ULSpec::geometric(v, alpha, beta).unwrap();
        for k in 1..=14usize {
            let kf = k as f64;
            let want = alpha.powf(kf)
                * (lgamma(v + kf) + lgamma(v * beta + v + 1.0) - lgamma(v) - lgamma(v * beta + v + 1.0 + kf)).exp();
            assert!(rel(g.moment(k).unwrap(), want) < 1e-10, "k={k}");
        }
    }

    #[test]
    fn recursion_residuals() {
        let s = exp1();
        let r = s.moment_recursion_residual(2, 0).unwrap();
        assert!(r.residual.abs() < 1e-10);
        for spec in [ULSpec::polynomial(2.0, &[1.0, 1.0]).unwrap(), ULSpec::polynomial(0.7, &[0.3, 0.0, 2.0]).unwrap()]
        {
            for k in 0..=6 {
                let r = spec.moment_recursion_residual(k, 0).unwrap();
                assert!(r.residual.abs() < 1e-9, "k={k} residual {}", r.residual);
            }
        }
        let g = ULSpec::geometric(1.0, 1.0, 1.0).unwrap();
        for k in 0..=6 {
            let r = g.moment_recursion_residual(k, 20).unwrap();
            assert!(r.tail > 0.0);
            assert!(r.residual.abs() < 1e-8, "k={k}: {r:?}");
        }
        // heavier tail when vβ < 1
        let g = ULSpec::geometric(0.5, 1.0, 0.8).unwrap();
        let r = g.moment_recursion_residual(0, 12).unwrap();
        assert!(r.residual.abs() < 1e-8, "{r:?}");
    }

    #[test]
    fn psi_laws() {
        let psi = exp1().psi().unwrap();
        assert!((psi.pmf(1) - 1.0).abs() < 1e-11);
        let b = ULSpec::polynomial(2.0, &[1.0, 1.0]).unwrap().psi().unwrap();
        assert!((b.total() - 1.0).abs() < 1e-10);
        let g = ULSpec::geometric(1.0, 1.0, 1.0).unwrap();
        let psi = g.psi().unwrap();
        // ψ_k = E Z^k for Beta(1,2) = 2/((k+1)(k+2))
        for k in 1..=6 {
            assert!(rel(psi.pmf(k), 2.0 / ((k + 1) * (k + 2)) as f64) < 1e-12);
            assert!(rel(psi.pmf(k), g.a(k) * g.moment(k).unwrap()) < 1e-10);
        }
    }

    #[test]
    fn psi_is_scale_invariant() {
        let s = ULSpec::polynomial(2.0, &[1.0, 0.5]).unwrap();
        let t = s.scale(3.0).unwrap();
        let (p, q) = (s.psi().unwrap(), t.psi().unwrap());
        for k in 1..=2 {
            assert!((p.pmf(k) - q.pmf(k)).abs() < 1e-10);
        }
    }

    #[test]
    fn scaling_moves_moments() {
        let s = exp1();
        let t = s.scale(2.0).unwrap();
        assert!(matches!(t.coefficients(), Coefficients::Polynomial { a } if (a[0] - 0.5).abs() < 1e-15));
        for k in 1..=4 {
            assert!(rel(t.moment(k).unwrap(), 2f64.powi(k as i32) * s.moment(k).unwrap()) < 1e-8);
        }
        let g = ULSpec::geometric(1.0, 1.0, 2.0).unwrap().scale(0.5).unwrap();
        assert_eq!(g.rho(), 0.5);
        let same = s.scale(1.0).unwrap();
        assert_eq!(same.coefficients(), s.coefficients());
    }

    #[test]
    fn normalization_route_is_independent() {
        for spec in [
            exp1(),
            ULSpec::polynomial(3.0, &[1.0]).unwrap(),
            ULSpec::polynomial(1.0, &[0.0, 2.0]).unwrap(),
            ULSpec::polynomial(0.4, &[1.0, 0.2]).unwrap(),
            ULSpec::geometric(1.0, 1.0, 1.0).unwrap(),
            ULSpec::geometric(2.0, 1.0, 0.3).unwrap(),
        ] {
            let err = spec.normalization_error().unwrap();
            assert!(err < 1e-8, "{:?}: {err}", spec.descriptor());
        }
    }

    #[test]
    fn tabulated_cdf_accuracy() {
        let s = exp1();
        for x in [0.01, 0.5, 1.0, 3.0, 10.0] {
            assert!((s.cdf(x).unwrap() - (1.0 - (-x).exp())).abs() < 1e-8);
        }
        let g = ULSpec::geometric(1.0, 1.0, 1.0).unwrap();
        for x in [0.1, 0.5, 0.9, 0.999] {
            let want = 1.0 - (1.0 - x) * (1.0 - x);
            assert!((g.cdf(x).unwrap() - want).abs() < 1e-8, "x={x}");
        }
    }

    #[test]
    fn survival_by_quadrature() {
        let s = exp1();
        for x in [0.5, 5.0, 30.0] {
            assert!(rel(s.survival(x).unwrap(), (-x).exp()) < 1e-10);
        }
        let g = ULSpec::geometric(1.0, 1.0, 1.0).unwrap();
        assert!(rel(g.survival(0.5).unwrap(), 0.25) < 1e-10);
    }

    #[test]
    fn exponential_samples_pass_ks() {
        let batch = exp1().sample(100_000, 11, "exp").unwrap();
        let (d, _) = ks_vs_cdf(&batch.values, |x| 1.0 - (-x).exp()).unwrap();
        assert!(d < 0.006, "ks {d}");
    }

    #[test]
    fn sample_means() {
        let g = ULSpec::geometric(1.0, 1.0, 1.0).unwrap();
        let batch = g.sample(50_000, 3, "beta").unwrap();
        let m = &empirical_moments(&batch.values, 1).unwrap()[0];
        assert!((m.mean - 1.0 / 3.0).abs() < 4.0 * m.se);
        let gam = ULSpec::polynomial(3.0, &[1.0]).unwrap();
        let batch = gam.sample(50_000, 4, "gamma").unwrap();
        let m = &empirical_moments(&batch.values, 1).unwrap()[0];
        assert!((m.mean - 1.0).abs() < 4.0 * m.se);
    }

    #[test]
    fn sample_is_deterministic_and_thread_independent() {
        let s = ULSpec::polynomial(2.0, &[1.0, 1.0]).unwrap();
        let a = crate::rng::with_threads(1, || s.sample(10_000, 5, "x").unwrap());
        let b = crate::rng::with_threads(3, || s.sample(10_000, 5, "x").unwrap());
        assert_eq!(a.values, b.values);
    }

    #[test]
    fn moment_bounds() {
        assert!(rel(exp1().moment_upper_bound(2), 2.0) < 1e-11);
        for w in [1.0, 2.0, 4.0] {
            let s = ULSpec::polynomial(w, &[1.0]).unwrap();
            for m in 1..=8 {
                assert!(s.moment(m).unwrap() <= s.moment_upper_bound(m) * (1.0 + 1e-10));
            }
        }
        let b = ULSpec::polynomial(2.0, &[1.0, 1.0]).unwrap();
        for m in 1..=8 {
            assert!(b.moment(m).unwrap() <= b.moment_upper_bound(m));
        }
    }

    #[test]
    fn mills_ratio() {
        let r = exp1().mills_check(1.0, 100).unwrap();
        assert!((r.c_alpha - 1.0).abs() < 1e-10);
        assert!(r.holds);
        assert!((r.worst_ratio - 1.0).abs() < 1e-8);
        for spec in [ULSpec::polynomial(2.0, &[1.0, 1.0]).unwrap(), ULSpec::geometric(1.0, 1.0, 1.0).unwrap()] {
            for alpha in [0.5, 0.9] {
                assert!(spec.mills_check(alpha, 100).unwrap().holds);
            }
        }
    }

    #[test]
    fn from_urn_limit() {
        let est = |k: u32, m: f64| MomentEstimate {
            k,
            n: 1,
            paths: 1,
            factorial: m,
            raw: m,
            std_error: 0.0,
            raw_std_error: 0.0,
        };
        let pi = InterArrivalSpec::finite(&[(0, 0.5), (1, 0.5)]).unwrap();
        let spec = ul_from_urn_limit(1, 2, &pi, &[est(1, 2.0), est(2, 5.0)], MomentKind::Raw).unwrap();
        assert_eq!(spec.v(), 2.0);
        assert!((spec.a(1) - 0.25).abs() < 1e-15 && (spec.a(2) - 0.1).abs() < 1e-15);
        let missing = ul_from_urn_limit(1, 2, &pi, &[est(1, 2.0)], MomentKind::Raw);
        assert!(matches!(missing, Err(PolyaError::MissingMoment(2))));
        let d2 = InterArrivalSpec::deterministic(1).unwrap();
        let spec = ul_from_urn_limit(1, 1, &d2, &[est(2, 2.0)], MomentKind::Raw).unwrap();
        assert_eq!(spec.a(1), 0.0);
        assert_eq!(spec.a(2), 0.5);
        assert!(ul_from_urn_limit(1, 1, &InterArrivalSpec::geometric(0.5, 1).unwrap(), &[], MomentKind::Raw).is_err());
    }

    #[test]
    fn invalid_specs() {
        assert!(ULSpec::polynomial(0.0, &[1.0]).is_err());
        assert!(ULSpec::polynomial(1.0, &[0.0, 0.0]).is_err());
        assert!(ULSpec::polynomial(1.0, &[-1.0, 2.0]).is_err());
        assert!(ULSpec::geometric(1.0, 0.0, 1.0).is_err());
        assert!(exp1().scale(0.0).is_err());
    }
}
