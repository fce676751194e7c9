//! One-dimensional quadrature.
//!
//! * [`adaptive_integrate`]: globally adaptive 21-point Gauss–Kronrod with
//!   QUADPACK-style error estimates. Integrable endpoint singularities are
//!   handled by bisection.
//! * [`gauss_legendre`] / [`GaussRule`]: fixed rules used for composite
//!   panels, where a rule that does not change between calls is needed.
//! * [`integrate_oscillatory_tail`]: ∫₀^U (1 − K(τ)) τ^{−1−2α} dτ for the
//!   kernel family K ∈ {cos, J₀, j₀}, including U = ∞.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::special;

/// Tolerances for [`adaptive_integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-13,
            max_subdivisions: 1 << 16,
        }
    }
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(rel_tol > 0.0) || !(abs_tol > 0.0) || max_subdivisions < 1 {
            return Err(Error::invalid(format!(
                "quadrature tolerances must be positive and max_subdivisions >= 1 \
                 (got rel {rel_tol}, abs {abs_tol}, max {max_subdivisions})"
            )));
        }
        Ok(Self {
            rel_tol,
            abs_tol,
            max_subdivisions,
        })
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }
}

/// Integral value with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_386_115,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// 10-point Gauss weights for the odd-indexed Kronrod nodes
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Single 21-point Gauss–Kronrod panel: (value, error estimate).
pub fn gauss_kronrod21<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_g = 0.0;
    let mut res_k = WGK[10] * fc;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err)
}

/// Globally adaptive Gauss–Kronrod integration of `f` over [a, b].
///
/// Returns the estimate once its error is ≤ max(abs_tol, rel_tol·|I|).
/// Running out of subdivisions yields [`Error::NotConverged`] carrying the
/// best estimate.
pub fn adaptive_integrate<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    if !(a.is_finite() && b.is_finite()) || a >= b {
        return Err(Error::invalid(format!(
            "integration limits must be finite with a < b (got [{a}, {b}])"
        )));
    }
    let (value, error) = gauss_kronrod21(f, a, b);
    if !value.is_finite() {
        return Err(Error::invalid(format!(
            "integrand is not finite on [{a}, {b}]"
        )));
    }
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, value, error });
    let mut total = value;
    let mut total_err = error;
    // panels too narrow to split keep contributing here
    let mut frozen_value = 0.0;
    let mut frozen_err = 0.0;
    let mut subdivisions = 1usize;

    loop {
        let tol = spec.abs_tol.max(spec.rel_tol * total.abs());
        if total_err <= tol {
            // re-sum to shed incremental drift before accepting
            let (v, e) = heap.iter().fold((frozen_value, frozen_err), |(v, e), p| {
                (v + p.value, e + p.error)
            });
            total = v;
            total_err = e;
            if total_err <= spec.abs_tol.max(spec.rel_tol * total.abs()) {
                return Ok(Estimate {
                    value: total,
                    error: total_err,
                });
            }
        }
        if subdivisions >= spec.max_subdivisions {
            return Err(Error::NotConverged {
                estimate: total,
                error: total_err,
                subdivisions,
            });
        }
        let Some(worst) = heap.pop() else {
            return Err(Error::NotConverged {
                estimate: total,
                error: total_err,
                subdivisions,
            });
        };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            frozen_value += worst.value;
            frozen_err += worst.error;
            continue;
        }
        let (v1, e1) = gauss_kronrod21(f, worst.a, mid);
        let (v2, e2) = gauss_kronrod21(f, mid, worst.b);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
        subdivisions += 1;
    }
}

/// Nodes and weights of the n-point Gauss–Legendre rule on [−1, 1],
/// nodes in increasing order.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = special::legendre_p(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = special::legendre_p(n, x);
        dp = if d.is_finite() { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// A fixed Gauss–Legendre rule, reusable across panels.
#[derive(Debug, Clone)]
pub struct GaussRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussRule {
    pub fn new(order: usize) -> Self {
        let (nodes, weights) = gauss_legendre(order);
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes and weights mapped to [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (c + h * x, h * w))
    }

    pub fn integrate<F: Fn(f64) -> f64 + ?Sized>(&self, f: &F, a: f64, b: f64) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }

    /// Composite rule over `panels` equal panels of [a, b].
    pub fn composite_nodes(&self, a: f64, b: f64, panels: usize) -> Vec<(f64, f64)> {
        let width = (b - a) / panels as f64;
        (0..panels)
            .flat_map(|k| {
                let lo = a + k as f64 * width;
                let hi = if k + 1 == panels { b } else { lo + width };
                self.mapped(lo, hi).collect::<Vec<_>>()
            })
            .collect()
    }
}

/// Wynn's ε-algorithm applied to a sequence of partial sums; returns the
/// most advanced even-column estimate.
pub fn wynn_epsilon(partial_sums: &[f64]) -> f64 {
    let n = partial_sums.len();
    if n == 0 {
        return 0.0;
    }
    let mut prev = vec![0.0; n + 1];
    let mut cur = partial_sums.to_vec();
    let mut best = partial_sums[n - 1];
    for k in 1..n {
        let len = cur.len() - 1;
        let mut next = Vec::with_capacity(len);
        for j in 0..len {
            let d = cur[j + 1] - cur[j];
            if d == 0.0 {
                // the column has converged exactly
                return if k % 2 == 1 { cur[j + 1] } else { best };
            }
            next.push(prev[j + 1] + 1.0 / d);
        }
        prev = cur;
        cur = next;
        if k % 2 == 0 {
            if let Some(&v) = cur.last() {
                if v.is_finite() {
                    best = v;
                }
            }
        }
    }
    best
}

/// Radial kernels K of the dispersion integrals in 1, 2 and 3 dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kernel {
    /// cos τ (one dimension)
    Cosine,
    /// J₀(τ) (two dimensions)
    BesselJ0,
    /// j₀(τ) = sin τ / τ (three dimensions)
    SphericalJ0,
}

impl Kernel {
    pub fn eval(self, tau: f64) -> f64 {
        match self {
            Kernel::Cosine => tau.cos(),
            Kernel::BesselJ0 => special::j0(tau),
            Kernel::SphericalJ0 => special::sph_jn(0, tau),
        }
    }

    /// 1 − K(τ), accurate near τ = 0.
    pub fn deficit(self, tau: f64) -> f64 {
        match self {
            Kernel::Cosine => special::one_minus_cos(tau),
            Kernel::BesselJ0 => special::one_minus_j0(tau),
            Kernel::SphericalJ0 => special::one_minus_sph_j0(tau),
        }
    }

    /// lim_{τ→0} (1 − K(τ))/τ².
    pub fn curvature(self) -> f64 {
        match self {
            Kernel::Cosine => 0.5,
            Kernel::BesselJ0 => 0.25,
            Kernel::SphericalJ0 => 1.0 / 6.0,
        }
    }

    /// (1 − K(τ))/τ², a smooth even function.
    pub fn deficit_over_square(self, tau: f64) -> f64 {
        if tau == 0.0 {
            self.curvature()
        } else {
            self.deficit(tau) / (tau * tau)
        }
    }

    /// Ratio cₘ/cₘ₋₁ of the power-series coefficients of K(τ) = Σ (−1)ᵐ cₘ τ^{2m}.
    pub fn series_ratio(self, m: usize) -> f64 {
        let mf = m as f64;
        match self {
            Kernel::Cosine => 1.0 / ((2.0 * mf - 1.0) * (2.0 * mf)),
            Kernel::BesselJ0 => 1.0 / (4.0 * mf * mf),
            Kernel::SphericalJ0 => 1.0 / ((2.0 * mf) * (2.0 * mf + 1.0)),
        }
    }

    /// k-th positive zero, k ≥ 1.
    pub fn zero(self, k: usize) -> f64 {
        let kf = k as f64;
        match self {
            Kernel::Cosine => (kf - 0.5) * PI,
            Kernel::SphericalJ0 => kf * PI,
            Kernel::BesselJ0 => {
                // McMahon's expansion refined by Newton (J₀′ = −J₁)
                let beta = (kf - 0.25) * PI;
                let b8 = 8.0 * beta;
                let mut z = beta + 1.0 / b8 - 124.0 / (3.0 * b8.powi(3))
                    + 120_928.0 / (15.0 * b8.powi(5));
                for _ in 0..3 {
                    z += special::j0(z) / special::j1(z);
                }
                z
            }
        }
    }

    /// Index of the first zero ≥ x.
    pub fn first_zero_index_from(self, x: f64) -> usize {
        let guess = match self {
            Kernel::Cosine => (x / PI + 0.5).ceil(),
            Kernel::SphericalJ0 => (x / PI).ceil(),
            Kernel::BesselJ0 => (x / PI + 0.25).ceil(),
        }
        .max(1.0) as usize;
        let mut k = guess.saturating_sub(1).max(1);
        while self.zero(k) < x {
            k += 1;
        }
        k
    }
}

/// ∫₀^upper (1 − K(τ)) τ^{−1−2α} dτ for finite `upper`.
///
/// [0, min(upper, 1)] is integrated in the variable u = τ^{2−2α}, which
/// turns the τ^{1−2α} endpoint behaviour into a bounded integrand; the rest
/// is split at consecutive kernel zeros.
pub fn deficit_integral(kind: Kernel, alpha: f64, upper: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    check_alpha(alpha)?;
    if !(upper >= 0.0) || !upper.is_finite() {
        return Err(Error::invalid(format!("upper limit must be finite and >= 0 (got {upper})")));
    }
    if upper == 0.0 {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    let head_end = upper.min(1.0);
    let q = 2.0 - 2.0 * alpha;
    let p = 1.0 / q;
    let head = adaptive_integrate(
        &|u: f64| kind.deficit_over_square(u.powf(p)),
        0.0,
        head_end.powf(q),
        spec,
    )?;
    let mut value = head.value / q;
    let mut error = head.error / q;
    if upper > 1.0 {
        let integrand = |tau: f64| kind.deficit(tau) * tau.powf(-1.0 - 2.0 * alpha);
        let mut lo = 1.0;
        let mut k = kind.first_zero_index_from(1.0 + 1e-12);
        loop {
            let hi = kind.zero(k).min(upper);
            if hi > lo {
                let piece = adaptive_integrate(&integrand, lo, hi, spec)?;
                value += piece.value;
                error += piece.error;
            }
            if hi >= upper {
                break;
            }
            lo = hi;
            k += 1;
        }
    }
    Ok(Estimate { value, error })
}

/// Default split point between the directly integrated range and the
/// accelerated tail.
pub fn default_tail_split(alpha: f64) -> f64 {
    (1e3_f64).max(50.0 / (2.0 * alpha))
}

const TAIL_MAX_TERMS: usize = 400;
const TAIL_MIN_TERMS: usize = 12;

/// ∫₀^upper (1 − K(τ)) τ^{−1−2α} dτ, `upper` possibly `f64::INFINITY`.
///
/// For an infinite upper limit the integral is split at the first kernel
/// zero T beyond [`default_tail_split`]: the constant part of the tail is
/// T^{−2α}/(2α) exactly, and ∫_T^∞ K(τ) τ^{−1−2α} dτ is summed over
/// inter-zero intervals with Wynn's ε acceleration.
pub fn integrate_oscillatory_tail(kind: Kernel, alpha: f64, upper: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let spec = QuadratureSpec::default().with_rel_tol(1e-12).with_abs_tol(1e-15);
    if upper.is_finite() {
        return Ok(deficit_integral(kind, alpha, upper, &spec)?.value);
    }
    if upper != f64::INFINITY {
        return Err(Error::invalid(format!("invalid upper limit {upper}")));
    }
    let mut k = kind.first_zero_index_from(default_tail_split(alpha));
    let split = kind.zero(k);
    let head = deficit_integral(kind, alpha, split, &spec)?.value;
    let constant_tail = split.powf(-2.0 * alpha) / (2.0 * alpha);

    let oscillating = |tau: f64| kind.eval(tau) * tau.powf(-1.0 - 2.0 * alpha);
    let term_spec = QuadratureSpec::default().with_rel_tol(1e-13).with_abs_tol(1e-18);
    let mut partial_sums = Vec::with_capacity(64);
    let mut sum = 0.0;
    let mut lo = split;
    let mut last_estimate = f64::NAN;
    let mut agreeing = 0;
    while partial_sums.len() < TAIL_MAX_TERMS {
        k += 1;
        let hi = kind.zero(k);
        sum += adaptive_integrate(&oscillating, lo, hi, &term_spec)?.value;
        partial_sums.push(sum);
        lo = hi;
        if partial_sums.len() >= TAIL_MIN_TERMS {
            let window = &partial_sums[partial_sums.len().saturating_sub(40)..];
            let estimate = wynn_epsilon(window);
            let scale = constant_tail.abs().max(f64::MIN_POSITIVE);
            if (estimate - last_estimate).abs() <= 1e-13 * scale {
                agreeing += 1;
                if agreeing >= 2 {
                    return Ok(head + constant_tail - estimate);
                }
            } else {
                agreeing = 0;
            }
            last_estimate = estimate;
        }
    }
    Err(Error::TailNotConverged { partial_sums })
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "singularity exponent alpha must lie in (0, 1) (got {alpha})"
        )))
    }
}
