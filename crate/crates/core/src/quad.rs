//! Adaptive Gauss-Kronrod quadrature for smooth, mildly oscillatory
//! complex-valued integrands.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// 15-point Kronrod nodes on [0, 1] side (symmetric), with the embedded
/// 7-point Gauss rule. Standard G7K15 constants.
const XGK: [f64; 8] = [
    0.991_455_371_120_813,
    0.949_107_912_342_759,
    0.864_864_423_359_769,
    0.741_531_185_599_394,
    0.586_087_235_467_691,
    0.405_845_151_377_397,
    0.207_784_955_007_898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529,
    0.063_092_092_629_979,
    0.104_790_010_322_250,
    0.140_653_259_715_525,
    0.169_004_726_639_267,
    0.190_350_578_064_785,
    0.204_432_940_075_298,
    0.209_482_141_084_728,
];
const WG: [f64; 4] = [
    0.129_484_966_168_870,
    0.279_705_391_489_277,
    0.381_830_050_505_119,
    0.417_959_183_673_469,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let half = 0.5 * (b - a);
    let center = 0.5 * (a + b);
    let mut kronrod = Complex64::new(0.0, 0.0);
    let mut gauss = Complex64::new(0.0, 0.0);
    for (i, &x) in XGK.iter().enumerate() {
        let (fl, fr);
        if x == 0.0 {
            fl = f(center);
            kronrod += WGK[i] * fl;
            gauss += WG[3] * fl;
            continue;
        }
        fl = f(center - half * x);
        fr = f(center + half * x);
        kronrod += WGK[i] * (fl + fr);
        if i % 2 == 1 {
            gauss += WG[i / 2] * (fl + fr);
        }
    }
    kronrod *= half;
    gauss *= half;
    let diff = (kronrod - gauss).norm();
    // QUADPACK-style sharpening of the raw |K - G| estimate.
    let err = if diff == 0.0 {
        0.0
    } else {
        diff * (200.0 * diff / kronrod.norm().max(diff)).powf(1.5).min(1.0)
    };
    (kronrod, err.max(diff * 1e-6))
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: Complex64,
    /// Conservative absolute error bound.
    pub error_bound: f64,
    pub panels: usize,
}

/// Integrate `f` over `[a, b]` until the summed error bound drops below
/// `rel_tol * |I|` (or an absolute floor for near-zero results). Errors out
/// with the achieved estimate and bound after `max_panels` refinements.
pub fn integrate<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    max_panels: usize,
) -> Result<QuadResult> {
    let (v, e) = gk15(&f, a, b);
    let mut panels = vec![Panel {
        a,
        b,
        value: v,
        error: e,
    }];
    loop {
        let total: Complex64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.error).sum();
        let scale = panels
            .iter()
            .map(|p| p.value.norm())
            .sum::<f64>()
            .max(total.norm());
        if err <= rel_tol * total.norm().max(scale * 1e-3) || err == 0.0 {
            return Ok(QuadResult {
                value: total,
                error_bound: err,
                panels: panels.len(),
            });
        }
        if panels.len() >= max_panels {
            return Err(Error::Numerical {
                message: format!(
                    "quadrature did not converge to rel tol {rel_tol:e} after {} panels",
                    panels.len()
                ),
                estimate: total.norm(),
                bound: err,
            });
        }
        // Split the worst panel.
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("non-empty");
        let p = panels.swap_remove(worst);
        let m = 0.5 * (p.a + p.b);
        let (v1, e1) = gk15(&f, p.a, m);
        let (v2, e2) = gk15(&f, m, p.b);
        panels.push(Panel {
            a: p.a,
            b: m,
            value: v1,
            error: e1,
        });
        panels.push(Panel {
            a: m,
            b: p.b,
            value: v2,
            error: e2,
        });
    }
}

/// Real-valued convenience wrapper.
pub fn integrate_real<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    max_panels: usize,
) -> Result<(f64, f64)> {
    let r = integrate(|x| Complex64::new(f(x), 0.0), a, b, rel_tol, max_panels)?;
    Ok((r.value.re, r.error_bound))
}

/// Trapezoidal rule over a sampled grid (strictly increasing abscissae).
pub fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    let mut acc = 0.0;
    for i in 1..x.len() {
        acc += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let (v, _) = integrate_real(|x| 3.0 * x * x, 0.0, 2.0, 1e-12, 64).unwrap();
        assert!((v - 8.0).abs() < 1e-12);
    }

    #[test]
    fn oscillatory_complex_exponential() {
        // int_0^1 exp(i w x) dx = (exp(i w) - 1) / (i w)
        let w = 45.0;
        let r = integrate(
            |x| Complex64::new(0.0, w * x).exp(),
            0.0,
            1.0,
            1e-11,
            256,
        )
        .unwrap();
        let exact = (Complex64::new(0.0, w).exp() - 1.0) / Complex64::new(0.0, w);
        assert!((r.value - exact).norm() < 1e-10, "err {}", (r.value - exact).norm());
        assert!((r.value - exact).norm() <= r.error_bound.max(1e-12));
    }

    #[test]
    fn sine_integral() {
        let (v, e) = integrate_real(|x| x.sin(), 0.0, PI, 1e-12, 64).unwrap();
        assert!((v - 2.0).abs() < 1e-11, "v={v} e={e}");
    }

    #[test]
    fn halving_tolerance_stays_within_prior_bound() {
        let f = |x: f64| Complex64::new((10.0 * x).cos() / (1.0 + x * x), 0.0);
        let loose = integrate(f, 0.0, 3.0, 1e-6, 256).unwrap();
        let tight = integrate(f, 0.0, 3.0, 5e-7, 256).unwrap();
        assert!((loose.value - tight.value).norm() <= loose.error_bound.max(1e-15));
    }

    #[test]
    fn non_convergence_reports_estimate_and_bound() {
        // Too few panels allowed for a nastily oscillatory integrand.
        let err = integrate(
            |x| Complex64::new(0.0, 4000.0 * x).exp(),
            0.0,
            1.0,
            1e-13,
            4,
        )
        .unwrap_err();
        match err {
            Error::Numerical { bound, .. } => assert!(bound > 0.0),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn trapezoid_linear_exact() {
        let x: Vec<f64> = (0..=10).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        assert!((trapezoid(&x, &y) - 110.0).abs() < 1e-12);
    }
}
