use std::f64::consts::PI;

use peridyn::dispersion::{high_freq_closed_form, Dimension, MaterialParams};
use peridyn::quadrature::{adaptive_integrate, integrate_oscillatory_tail, GaussRule, Kernel, QuadratureSpec};
use peridyn::special;
use proptest::prelude::*;

/// Brute-force value of ∫₀^∞ (1 − K(τ)) τ^{−1−2α} dτ: term-wise integrated
/// power series on [0, 1], Gauss–Legendre on [1, T] with T = 10⁶, and the
/// leading asymptotic form of the remainder beyond T.
fn brute_force_tail(kind: Kernel, alpha: f64) -> f64 {
    let kernel = |t: f64| match kind {
        Kernel::Cosine => t.cos(),
        Kernel::BesselJ0 => special::j0(t),
        Kernel::SphericalJ0 => t.sin() / t,
    };
    // cₘ with 1 − K(τ) = Σ (−1)^{m+1} cₘ τ^{2m}
    let mut head = 0.0;
    let mut c = 1.0;
    for m in 1..30usize {
        let mf = m as f64;
        c *= match kind {
            Kernel::Cosine => 1.0 / ((2.0 * mf - 1.0) * 2.0 * mf),
            Kernel::BesselJ0 => 1.0 / (4.0 * mf * mf),
            Kernel::SphericalJ0 => 1.0 / (2.0 * mf * (2.0 * mf + 1.0)),
        };
        let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
        head += sign * c / (2.0 * mf - 2.0 * alpha);
    }
    let big_t = 1e6;
    let rule = GaussRule::new(10);
    let panels = 500_000;
    let body: f64 = (0..panels)
        .map(|k| {
            let a = 1.0 + (big_t - 1.0) * k as f64 / panels as f64;
            let b = 1.0 + (big_t - 1.0) * (k + 1) as f64 / panels as f64;
            rule.integrate(&|t: f64| (1.0 - kernel(t)) * t.powf(-1.0 - 2.0 * alpha), a, b)
        })
        .sum();
    let mut rest = big_t.powf(-2.0 * alpha) / (2.0 * alpha);
    if kind == Kernel::Cosine {
        rest += big_t.sin() * big_t.powf(-1.0 - 2.0 * alpha);
    }
    head + body + rest
}

#[test]
fn tail_at_half_matches_brute_force() {
    let cases = [
        (Kernel::BesselJ0, 1.0),
        (Kernel::Cosine, PI / 2.0),
        (Kernel::SphericalJ0, PI / 4.0),
    ];
    for (kind, exact) in cases {
        let lib = integrate_oscillatory_tail(kind, 0.5, f64::INFINITY).unwrap();
        let oracle = brute_force_tail(kind, 0.5);
        assert!((oracle - exact).abs() < 1e-8, "{kind:?}: oracle {oracle}");
        assert!((lib - oracle).abs() < 1e-8, "{kind:?}: {lib} vs {oracle}");
    }
}

#[test]
fn gamma_forms_match_brute_force() {
    for alpha in [0.1, 0.3, 0.7, 0.9] {
        let params = MaterialParams::unit(alpha).unwrap();
        for dim in Dimension::ALL {
            let oracle = dim.prefactor() * brute_force_tail(dim.kernel(), alpha);
            let closed = high_freq_closed_form(dim, &params).unwrap();
            assert!(((closed - oracle) / oracle).abs() < 1e-6, "{dim} alpha {alpha}: {closed} vs {oracle}");
            let lib = dim.prefactor() * integrate_oscillatory_tail(dim.kernel(), alpha, f64::INFINITY).unwrap();
            assert!(((lib - oracle) / oracle).abs() < 1e-7, "{dim} alpha {alpha}: {lib} vs {oracle}");
        }
    }
}

#[test]
fn known_form_on_finite_range() {
    let f = |t: f64| special::one_minus_cos(t) / (t * t);
    let spec = QuadratureSpec::default();
    let v = integrate_oscillatory_tail(Kernel::Cosine, 0.5, 1e4).unwrap();
    assert!((v - PI / 2.0).abs() < 1e-3);
    let direct: f64 = (0..10_000)
        .map(|k| adaptive_integrate(&f, k as f64, (k + 1) as f64, &spec).unwrap().value)
        .sum();
    assert!((v - direct).abs() < 1e-9);
}

#[test]
fn tail_increases_through_zeros() {
    for kind in [Kernel::Cosine, Kernel::BesselJ0, Kernel::SphericalJ0] {
        let full = integrate_oscillatory_tail(kind, 0.3, f64::INFINITY).unwrap();
        let mut prev = 0.0;
        for k in [1usize, 3, 10, 30, 100] {
            let v = integrate_oscillatory_tail(kind, 0.3, kind.zero(k)).unwrap();
            assert!(v > prev && v < full, "{kind:?} zero {k}");
            prev = v;
        }
    }
}

#[test]
fn spec_validation() {
    assert!(QuadratureSpec::new(0.0, 1e-10, 10).is_err());
    assert!(QuadratureSpec::new(1e-10, -1.0, 10).is_err());
    assert!(QuadratureSpec::new(1e-10, 1e-10, 0).is_err());
    assert!(integrate_oscillatory_tail(Kernel::Cosine, 1.0, 10.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn linearity(alpha in 0.05f64..0.95, c in prop::sample::select(vec![-2.0, 0.5])) {
        let f = |t: f64| t.powf(1.0 - 2.0 * alpha) * (3.0 * t).cos();
        let g = |t: f64| c * f(t);
        let spec = QuadratureSpec::default();
        let a = adaptive_integrate(&f, 0.0, 2.0, &spec).unwrap();
        let b = adaptive_integrate(&g, 0.0, 2.0, &spec).unwrap();
        let slack = c.abs() * a.error + b.error + 4.0 * f64::EPSILON * (c * a.value).abs();
        prop_assert!((b.value - c * a.value).abs() <= slack);
    }

    #[test]
    fn additivity(split in 0.1f64..3.9, alpha in 0.05f64..0.95) {
        let f = |t: f64| special::one_minus_j0(t) * t.powf(-1.0 - 2.0 * alpha);
        let spec = QuadratureSpec::default();
        let whole = adaptive_integrate(&f, 0.0, 4.0, &spec).unwrap();
        let left = adaptive_integrate(&f, 0.0, split, &spec).unwrap();
        let right = adaptive_integrate(&f, split, 4.0, &spec).unwrap();
        let slack = whole.error + left.error + right.error + 4.0 * f64::EPSILON * whole.value.abs();
        prop_assert!((left.value + right.value - whole.value).abs() <= slack);
    }
}
