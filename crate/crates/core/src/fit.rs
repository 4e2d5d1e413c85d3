//! Least-squares width fits for symmetric transverse profiles.

use crate::error::{Error, Result};

/// Golden-section maximization of a unimodal function on [lo, hi].
pub(crate) fn golden_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// A fitted single-width profile model.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct ProfileFit {
    pub amplitude: f64,
    /// Gaussian: 1/e^2 intensity radius. Lorentzian: half width at half max.
    pub width: f64,
    /// Sum of squared residuals at the optimum.
    pub ssr: f64,
}

fn fit_width<M: Fn(f64, f64) -> f64>(x: &[f64], y: &[f64], model: M) -> Result<ProfileFit> {
    if x.len() != y.len() || x.len() < 4 {
        return Err(Error::domain("profile fit needs at least 4 samples"));
    }
    let span = x.last().unwrap() - x[0];
    let (lo, hi) = (span * 1e-4, span * 20.0);
    // Amplitude is linear for fixed width, so profile it out analytically.
    let ssr_at = |w: f64| -> (f64, f64) {
        let mut sfy = 0.0;
        let mut sff = 0.0;
        for (&xi, &yi) in x.iter().zip(y) {
            let fi = model(xi, w);
            sfy += fi * yi;
            sff += fi * fi;
        }
        let a = if sff > 0.0 { sfy / sff } else { 0.0 };
        let ssr: f64 = x
            .iter()
            .zip(y)
            .map(|(&xi, &yi)| {
                let r = yi - a * model(xi, w);
                r * r
            })
            .sum();
        (ssr, a)
    };
    // Search on log-width for scale robustness.
    let (lw, neg) = golden_max(|lw: f64| -ssr_at(lw.exp()).0, lo.ln(), hi.ln(), 1e-10);
    let w = lw.exp();
    let (ssr, a) = ssr_at(w);
    debug_assert!((neg + ssr).abs() <= 1e-9 * (1.0 + ssr));
    Ok(ProfileFit {
        amplitude: a,
        width: w,
        ssr,
    })
}

/// Fit `a * exp(-2 x^2 / w^2)` and return (a, w, ssr).
pub fn fit_gaussian_profile(x: &[f64], y: &[f64]) -> Result<ProfileFit> {
    fit_width(x, y, |xi, w| (-2.0 * xi * xi / (w * w)).exp())
}

/// Fit `a / (1 + (x / g)^2)` and return (a, g, ssr).
pub fn fit_lorentzian_profile(x: &[f64], y: &[f64]) -> Result<ProfileFit> {
    fit_width(x, y, |xi, g| 1.0 / (1.0 + (xi / g) * (xi / g)))
}
