//! Crystal dispersion: wavevectors, thermal poling-period expansion and the
//! type-0 quasi-phase-matching mismatch.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sellmeier::SellmeierSet;

/// Relative tolerance for the CW energy-conservation precondition
/// `1/lp = 1/ls + 1/li`.
pub const ENERGY_CONSERVATION_RTOL: f64 = 1e-9;

/// Quadratic thermal expansion of the poling period.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct ThermalExpansion {
    /// Linear coefficient (1/K).
    pub alpha: f64,
    /// Quadratic coefficient (1/K^2).
    pub beta: f64,
}

impl ThermalExpansion {
    /// Standard KTP values.
    pub fn ktp() -> Self {
        ThermalExpansion {
            alpha: 6.7e-6,
            beta: 11e-9,
        }
    }

    pub fn none() -> Self {
        ThermalExpansion {
            alpha: 0.0,
            beta: 0.0,
        }
    }
}

/// Crystal geometry, poling, operating temperature and dispersion data.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CrystalSpec {
    /// Crystal length (m).
    pub length_m: f64,
    /// Poling period at the reference temperature (m).
    pub poling_period_m: f64,
    /// Operating temperature (deg C).
    pub temperature_c: f64,
    pub sellmeier: SellmeierSet,
    pub expansion: ThermalExpansion,
    /// Effective nonlinearity (pm/V). Metadata only; intensities are relative.
    pub d_eff_pm_per_v: f64,
    /// Reference temperature for the poling period (deg C).
    pub reference_temperature_c: f64,
}

impl CrystalSpec {
    pub fn new(
        length_m: f64,
        poling_period_m: f64,
        temperature_c: f64,
        sellmeier: SellmeierSet,
        expansion: ThermalExpansion,
        d_eff_pm_per_v: f64,
        reference_temperature_c: f64,
    ) -> Result<Self> {
        if length_m <= 0.0 {
            return Err(Error::domain("crystal length must be positive"));
        }
        if poling_period_m <= 0.0 {
            return Err(Error::domain("poling period must be positive"));
        }
        let spec = CrystalSpec {
            length_m,
            poling_period_m,
            temperature_c,
            sellmeier,
            expansion,
            d_eff_pm_per_v,
            reference_temperature_c,
        };
        // The set must stay physical across its own band at the operating T.
        let (lo, hi) = spec.sellmeier.valid_band_um;
        for i in 0..=32 {
            let lam = (lo + (hi - lo) * i as f64 / 32.0) * 1e-6;
            spec.sellmeier.index(lam, temperature_c)?;
        }
        Ok(spec)
    }

    /// A ppKTP crystal with the default calibrated z-axis set, 3.425 um
    /// poling and d_eff = 12 pm/V.
    pub fn ppktp(length_m: f64, temperature_c: f64) -> Self {
        CrystalSpec::new(
            length_m,
            3.425e-6,
            temperature_c,
            SellmeierSet::ktp_z_anchored(),
            ThermalExpansion::ktp(),
            12.0,
            25.0,
        )
        .expect("built-in ppKTP spec is valid")
    }

    pub fn with_temperature(&self, t_c: f64) -> Self {
        let mut s = self.clone();
        s.temperature_c = t_c;
        s
    }

    pub fn with_length(&self, length_m: f64) -> Self {
        let mut s = self.clone();
        s.length_m = length_m;
        s
    }
}

/// Wavevector magnitude inside the crystal with its defining fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wavevector {
    /// |k| = 2 pi n / lambda (rad/m).
    pub magnitude: f64,
    /// Vacuum wavelength (m).
    pub wavelength_vacuum_m: f64,
    pub refractive_index: f64,
}

/// Extraordinary index n_z(lambda, T) from the crystal's dispersion set.
pub fn refractive_index(spec: &CrystalSpec, lambda_m: f64, t_c: f64) -> Result<f64> {
    spec.sellmeier.index(lambda_m, t_c)
}

/// Intracrystal wavevector at vacuum wavelength `lambda_m`.
pub fn wavevector(spec: &CrystalSpec, lambda_m: f64, t_c: f64) -> Result<Wavevector> {
    let n = refractive_index(spec, lambda_m, t_c)?;
    Ok(Wavevector {
        magnitude: 2.0 * PI * n / lambda_m,
        wavelength_vacuum_m: lambda_m,
        refractive_index: n,
    })
}

/// Poling period at temperature `t_c`:
/// `L(T) = L0 (1 + alpha dT + beta dT^2)`.
pub fn poling_period(spec: &CrystalSpec, t_c: f64) -> f64 {
    let dt = t_c - spec.reference_temperature_c;
    spec.poling_period_m * (1.0 + spec.expansion.alpha * dt + spec.expansion.beta * dt * dt)
}

/// Idler vacuum wavelength conjugate to `lambda_s_m` under a CW pump at
/// `lambda_p_m`.
pub fn idler_wavelength(lambda_p_m: f64, lambda_s_m: f64) -> Result<f64> {
    if lambda_s_m <= lambda_p_m {
        return Err(Error::domain(
            "signal wavelength must exceed the pump wavelength",
        ));
    }
    Ok(1.0 / (1.0 / lambda_p_m - 1.0 / lambda_s_m))
}

fn check_energy_conservation(lambda_p_m: f64, lambda_s_m: f64, lambda_i_m: f64) -> Result<()> {
    let lhs = 1.0 / lambda_p_m;
    let rhs = 1.0 / lambda_s_m + 1.0 / lambda_i_m;
    if ((lhs - rhs) / lhs).abs() > ENERGY_CONSERVATION_RTOL {
        return Err(Error::precondition(format!(
            "energy conservation violated: 1/lp = {lhs:e}, 1/ls + 1/li = {rhs:e}"
        )));
    }
    Ok(())
}

/// Longitudinal mismatch `kp - ks cos(ts) - ki cos(ti) - 2 pi / poling(T)`.
/// The collinear case is the `cos = 1` reduction, so both share one code
/// path (bit-for-bit).
pub(crate) fn longitudinal_mismatch(
    k_p: f64,
    k_s: f64,
    k_i: f64,
    grating: f64,
    cos_s: f64,
    cos_i: f64,
) -> f64 {
    k_p - k_s * cos_s - k_i * cos_i - grating
}

/// Collinear QPM phase mismatch `dk = kp - ks - ki - 2 pi / poling(T)` in
/// rad/m. Wavelengths are vacuum values; signal and idler must satisfy
/// energy conservation with the pump.
pub fn phase_mismatch(
    spec: &CrystalSpec,
    lambda_p_m: f64,
    lambda_s_m: f64,
    lambda_i_m: f64,
    t_c: f64,
) -> Result<f64> {
    check_energy_conservation(lambda_p_m, lambda_s_m, lambda_i_m)?;
    let k_p = wavevector(spec, lambda_p_m, t_c)?.magnitude;
    let k_s = wavevector(spec, lambda_s_m, t_c)?.magnitude;
    let k_i = wavevector(spec, lambda_i_m, t_c)?.magnitude;
    let grating = 2.0 * PI / poling_period(spec, t_c);
    Ok(longitudinal_mismatch(k_p, k_s, k_i, grating, 1.0, 1.0))
}

/// Temperature at which the degenerate collinear mismatch crosses zero,
/// found by bisection on `[t_lo, t_hi]`. Returns `None` when the mismatch
/// does not change sign on the bracket.
pub fn degeneracy_temperature(
    spec: &CrystalSpec,
    lambda_p_m: f64,
    t_lo: f64,
    t_hi: f64,
) -> Result<Option<f64>> {
    let deg = 2.0 * lambda_p_m;
    let f = |t: f64| phase_mismatch(spec, lambda_p_m, deg, deg, t);
    let (mut a, mut b) = (t_lo, t_hi);
    let (mut fa, fb) = (f(a)?, f(b)?);
    if fa == 0.0 {
        return Ok(Some(a));
    }
    if fb == 0.0 {
        return Ok(Some(b));
    }
    if fa.signum() == fb.signum() {
        return Ok(None);
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(Some(m));
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
        if b - a < 1e-9 {
            break;
        }
    }
    Ok(Some(0.5 * (a + b)))
}
