//! Named, swappable dispersion coefficient sets.
//!
//! A set evaluates the refractive index as
//!
//! ```text
//! n^2(lambda) = constant
//!             + sum_i  b_i * lambda^2 / (lambda^2 - c_i)     (resonances)
//!             + sum_j  d_j / (lambda^2 - e_j)                (absolute resonances)
//!             + lambda2 * lambda^2
//! n(lambda, T) = sqrt(n^2) + dn1(lambda) * dT + dn2(lambda) * dT^2
//! ```
//!
//! with `lambda` in micrometers and `dT = T - thermal.reference_c`. The
//! thermal polynomials follow the usual inverse-power form
//! `dn(lambda) = sum_m coeff[m] / lambda^m`.
//!
//! Three KTP z-axis sets ship with the crate; arbitrary sets load from JSON.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One `b * l2 / (l2 - c)` term.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct Resonance {
    pub b: f64,
    /// Pole position in um^2.
    pub c: f64,
}

/// One `d / (l2 - e)` term.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct AbsResonance {
    pub d: f64,
    /// Pole position in um^2.
    pub e: f64,
}

/// Thermal dispersion polynomial, `dn = n1(lambda)*dT + n2(lambda)*dT^2`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ThermalDispersion {
    /// Reference temperature (deg C) at which the base Sellmeier holds.
    pub reference_c: f64,
    /// Coefficients of `1/lambda^m`, m = 0..; units 1/K.
    pub dn_dt: Vec<f64>,
    /// Coefficients of `1/lambda^m`, m = 0..; units 1/K^2.
    pub d2n_dt2: Vec<f64>,
}

impl ThermalDispersion {
    /// Zero correction: index becomes temperature independent.
    pub fn none() -> Self {
        ThermalDispersion {
            reference_c: 25.0,
            dn_dt: vec![],
            d2n_dt2: vec![],
        }
    }

    fn poly(coeffs: &[f64], lambda_um: f64) -> f64 {
        let mut acc = 0.0;
        let mut inv = 1.0;
        for &c in coeffs {
            acc += c * inv;
            inv /= lambda_um;
        }
        acc
    }

    /// Index correction at `lambda_um`, temperature `t_c`.
    pub fn delta_n(&self, lambda_um: f64, t_c: f64) -> f64 {
        let dt = t_c - self.reference_c;
        Self::poly(&self.dn_dt, lambda_um) * dt + Self::poly(&self.d2n_dt2, lambda_um) * dt * dt
    }

    /// Analytic dn/dT at `lambda_um`, temperature `t_c`.
    pub fn dn_dt(&self, lambda_um: f64, t_c: f64) -> f64 {
        let dt = t_c - self.reference_c;
        Self::poly(&self.dn_dt, lambda_um) + 2.0 * Self::poly(&self.d2n_dt2, lambda_um) * dt
    }
}

/// A named dispersion set for one crystal axis.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SellmeierSet {
    pub name: String,
    pub axis: String,
    pub constant: f64,
    #[serde(default)]
    pub resonances: Vec<Resonance>,
    #[serde(default)]
    pub absolute_resonances: Vec<AbsResonance>,
    /// Coefficient of the bare lambda^2 term (usually negative).
    #[serde(default)]
    pub lambda2: f64,
    pub thermal: ThermalDispersion,
    /// Validity band [lo, hi] in micrometers.
    pub valid_band_um: (f64, f64),
}

impl SellmeierSet {
    /// n^2 at the reference temperature, `lambda_um` in micrometers.
    fn n_squared(&self, lambda_um: f64) -> f64 {
        let l2 = lambda_um * lambda_um;
        let mut n2 = self.constant + self.lambda2 * l2;
        for r in &self.resonances {
            n2 += r.b * l2 / (l2 - r.c);
        }
        for r in &self.absolute_resonances {
            n2 += r.d / (l2 - r.e);
        }
        n2
    }

    /// Refractive index at vacuum wavelength `lambda_m` (meters) and
    /// temperature `t_c` (deg C).
    pub fn index(&self, lambda_m: f64, t_c: f64) -> Result<f64> {
        let lambda_um = lambda_m * 1e6;
        let (lo, hi) = self.valid_band_um;
        if !(lambda_um >= lo && lambda_um <= hi) {
            return Err(Error::domain(format!(
                "wavelength {:.4} um outside the valid band [{}, {}] um of set '{}'",
                lambda_um, lo, hi, self.name
            )));
        }
        if !(0.0..=200.0).contains(&t_c) {
            return Err(Error::domain(format!(
                "temperature {} C outside the supported range [0, 200] C",
                t_c
            )));
        }
        let n2 = self.n_squared(lambda_um);
        if n2 <= 1.0 {
            return Err(Error::domain(format!(
                "set '{}' yields n^2 = {} <= 1 at {} um",
                self.name, n2, lambda_um
            )));
        }
        Ok(n2.sqrt() + self.thermal.delta_n(lambda_um, t_c))
    }

    /// KTP z-axis set calibrated against type-0 QPM data for commercial
    /// 3.425 um ppKTP (405.1 nm pump): degenerate collinear matching near
    /// 28.6 C, 796/825 nm separation at 29.3 C with ~4.9 nm lobes at
    /// L = 30 mm. Two-pole flux-KTP form plus an auxiliary IR resonance;
    /// thermal dispersion per Emanueli-Arie. This is the default set.
    pub fn ktp_z_anchored() -> Self {
        SellmeierSet {
            name: "ktp-z-anchored".into(),
            axis: "z".into(),
            constant: 2.160_259_943_473_904_7,
            resonances: vec![
                Resonance {
                    b: 1.18431,
                    c: 0.049_677_039_710_304_43,
                },
                Resonance {
                    b: 0.6603,
                    c: 100.00507,
                },
                Resonance {
                    b: 0.066_945_261_050_507_27,
                    c: 2.1,
                },
            ],
            absolute_resonances: vec![],
            lambda2: -9.68956e-3,
            thermal: Self::emanueli_arie_z(),
            valid_band_um: (0.35, 1.1),
        }
    }

    /// Literal flux-grown KTP z-axis two-pole fit (Fradkin-style
    /// coefficients), Emanueli-Arie thermal terms.
    pub fn ktp_z_f99() -> Self {
        SellmeierSet {
            name: "ktp-z-f99".into(),
            axis: "z".into(),
            constant: 2.12725,
            resonances: vec![
                Resonance {
                    b: 1.18431,
                    c: 0.0514852,
                },
                Resonance {
                    b: 0.6603,
                    c: 100.00507,
                },
            ],
            absolute_resonances: vec![],
            lambda2: -9.68956e-3,
            thermal: Self::emanueli_arie_z(),
            valid_band_um: (0.35, 1.1),
        }
    }

    /// KTP z-axis fit of Fan et al. (1987), Emanueli-Arie thermal terms.
    pub fn ktp_z_fan87() -> Self {
        SellmeierSet {
            name: "ktp-z-fan87".into(),
            axis: "z".into(),
            constant: 3.3134,
            resonances: vec![],
            absolute_resonances: vec![AbsResonance {
                d: 0.05694,
                e: 0.05658,
            }],
            lambda2: -0.01682,
            thermal: Self::emanueli_arie_z(),
            valid_band_um: (0.35, 1.1),
        }
    }

    /// Emanueli-Arie thermal dispersion polynomial for the KTP z axis.
    fn emanueli_arie_z() -> ThermalDispersion {
        ThermalDispersion {
            reference_c: 25.0,
            dn_dt: vec![9.9587e-6, 9.9228e-6, -8.9603e-6, 4.1010e-6],
            d2n_dt2: vec![-1.1882e-8, 10.459e-8, -9.8136e-8, 3.1481e-8],
        }
    }

    /// Look up one of the bundled sets by name.
    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "ktp-z-anchored" => Some(Self::ktp_z_anchored()),
            "ktp-z-f99" => Some(Self::ktp_z_f99()),
            "ktp-z-fan87" => Some(Self::ktp_z_fan87()),
            _ => None,
        }
    }

    /// Parse a set from its JSON document.
    pub fn from_json(doc: &str) -> Result<Self> {
        serde_json::from_str(doc).map_err(|e| Error::parse(format!("sellmeier set: {e}")))
    }

    /// Serialize to JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sellmeier set serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anchored_index_near_184_at_810nm() {
        // Oracle: direct evaluation of the calibrated coefficients.
        let set = SellmeierSet::ktp_z_anchored();
        let n = set.index(810e-9, 25.0).unwrap();
        assert!((n - 1.84).abs() < 0.01, "n = {n}");
        assert!((n - 1.844031).abs() < 2e-4, "n = {n}");
    }

    #[test]
    fn published_sets_hit_handbook_anchors() {
        // Fan et al. values at 1064/532 nm are tabulated to 4 decimals.
        let fan = SellmeierSet::ktp_z_fan87();
        let n1064 = fan.index(1.0642e-6, 25.0).unwrap();
        let n532 = fan.index(0.5321e-6, 25.0).unwrap();
        assert!((n1064 - 1.8297).abs() < 5e-4, "n(1064) = {n1064}");
        assert!((n532 - 1.8869).abs() < 5e-4, "n(532) = {n532}");
    }

    #[test]
    fn zero_thermal_terms_give_temperature_independent_index() {
        let mut set = SellmeierSet::ktp_z_anchored();
        set.thermal = ThermalDispersion::none();
        let a = set.index(810e-9, 25.0).unwrap();
        let b = set.index(810e-9, 95.0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn thermal_slope_matches_finite_difference() {
        // First-order check: n(l, T + d) - n(l, T) ~ d * dn/dT, d = 0.01 K.
        let set = SellmeierSet::ktp_z_anchored();
        let d = 0.01;
        for &t in &[25.0, 35.0, 60.0] {
            let fd = (set.index(810e-9, t + d).unwrap() - set.index(810e-9, t).unwrap()) / d;
            let an = set.thermal.dn_dt(0.810, t + d / 2.0);
            assert!((fd - an).abs() < 1e-11, "T={t}: fd={fd:e} an={an:e}");
        }
    }

    #[test]
    fn out_of_band_wavelength_is_domain_error() {
        let set = SellmeierSet::ktp_z_anchored();
        let err = set.index(1.3e-6, 25.0).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("0.35") && msg.contains("1.1"), "{msg}");
    }

    #[test]
    fn index_above_one_across_band_and_temperatures() {
        for set in [
            SellmeierSet::ktp_z_anchored(),
            SellmeierSet::ktp_z_f99(),
            SellmeierSet::ktp_z_fan87(),
        ] {
            for i in 0..=100 {
                let lam = 0.35e-6 + (1.1e-6 - 0.35e-6) * i as f64 / 100.0;
                for &t in &[0.0, 25.0, 200.0] {
                    let n = set.index(lam, t).unwrap();
                    assert!(n > 1.0, "{}: n({lam:e}, {t}) = {n}", set.name);
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let set = SellmeierSet::ktp_z_anchored();
        let parsed = SellmeierSet::from_json(&set.to_json()).unwrap();
        assert_eq!(set, parsed);
    }

    #[test]
    fn custom_json_document_loads() {
        let doc = r#"{
            "name": "custom", "axis": "z",
            "constant": 2.0,
            "resonances": [{"b": 1.0, "c": 0.05}],
            "lambda2": -0.01,
            "thermal": {"reference_c": 25.0, "dn_dt": [1e-6], "d2n_dt2": []},
            "valid_band_um": [0.4, 1.0]
        }"#;
        let set = SellmeierSet::from_json(doc).unwrap();
        assert!(set.index(0.8e-6, 30.0).unwrap() > 1.0);
    }
}
