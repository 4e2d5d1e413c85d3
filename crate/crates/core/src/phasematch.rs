//! Collinear spectra, temperature tuning, lobe widths, far-field
//! emission-angle maps and temperature-integrated intensities.

use std::f64::consts::PI;

use crate::dispersion::{
    idler_wavelength, longitudinal_mismatch, phase_mismatch, poling_period, wavevector,
    CrystalSpec,
};
use crate::error::{Error, Result};
use crate::quad::trapezoid;
use crate::scan::{linspace, Axis, ScanMeta, SpectralScan};

/// Default signal-side scan band (nm), matching the detection band around
/// the 810 nm degeneracy.
pub const DEFAULT_SIGNAL_BAND_NM: (f64, f64) = (770.0, 850.0);

/// sinc^2 with the removable singularity handled exactly.
pub fn sinc_sq(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        let s = x.sin() / x;
        s * s
    }
}

/// Intensity of one longitudinal mode: sinc^2(dk L / 2).
fn lobe_intensity(dk: f64, length_m: f64) -> f64 {
    sinc_sq(0.5 * dk * length_m)
}

/// Raw (unnormalized) collinear sinc^2 intensities over a signal-wavelength
/// grid in nm. The idler follows by energy conservation.
pub fn collinear_intensities(
    spec: &CrystalSpec,
    lambda_p_m: f64,
    lambda_grid_nm: &[f64],
) -> Result<Vec<f64>> {
    let t = spec.temperature_c;
    let k_p = wavevector(spec, lambda_p_m, t)?.magnitude;
    let grating = 2.0 * PI / poling_period(spec, t);
    lambda_grid_nm
        .iter()
        .map(|&nm| {
            let ls = nm * 1e-9;
            let li = idler_wavelength(lambda_p_m, ls)?;
            let k_s = wavevector(spec, ls, t)?.magnitude;
            let k_i = wavevector(spec, li, t)?.magnitude;
            let dk = longitudinal_mismatch(k_p, k_s, k_i, grating, 1.0, 1.0);
            Ok(lobe_intensity(dk, spec.length_m))
        })
        .collect()
}

/// Normalized collinear spectrum over a signal-wavelength grid (nm).
pub fn collinear_spectrum(
    spec: &CrystalSpec,
    lambda_p_m: f64,
    lambda_grid_nm: &[f64],
) -> Result<SpectralScan> {
    let raw = collinear_intensities(spec, lambda_p_m, lambda_grid_nm)?;
    SpectralScan::normalized(
        Axis::new("wavelength", "nm", lambda_grid_nm.to_vec())?,
        None,
        raw,
        ScanMeta::from_spec(spec, lambda_p_m),
    )
}

/// One collinear QPM solution at a given temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TuningPoint {
    pub temperature_c: f64,
    pub signal_nm: f64,
    pub idler_nm: f64,
    /// True when no split solution exists and the spectrum sits at the
    /// degenerate wavelength 2 lambda_p.
    pub degenerate: bool,
}

/// Per-temperature tuning result; `point` is `None` when no collinear QPM
/// solution falls inside the scanned signal band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TuningEntry {
    pub temperature_c: f64,
    pub point: Option<TuningPoint>,
}

/// Coarse-scan step for bracketing the split root (nm).
const ROOT_SCAN_STEP_NM: f64 = 0.05;
/// Bisection bracket target (m); about 1e-12 nm.
const ROOT_BRACKET_M: f64 = 1e-21;

fn split_root(
    spec: &CrystalSpec,
    lambda_p_m: f64,
    t_c: f64,
    band_lo_nm: f64,
) -> Result<Option<f64>> {
    let deg = 2.0 * lambda_p_m;
    let f = |ls: f64| -> Result<f64> {
        let li = idler_wavelength(lambda_p_m, ls)?;
        phase_mismatch(spec, lambda_p_m, ls, li, t_c)
    };
    // Walk down from degeneracy looking for a sign change (dk is maximal at
    // degeneracy, so the root is the first crossing).
    let step = ROOT_SCAN_STEP_NM * 1e-9;
    let mut x0 = deg;
    if f(x0)? < 0.0 {
        return Ok(None);
    }
    loop {
        let x1 = (x0 - step).max(band_lo_nm * 1e-9);
        if x1 >= x0 {
            return Ok(None);
        }
        let f1 = f(x1)?;
        if f1 <= 0.0 {
            // Bisect on [x1, x0].
            let (mut a, mut b) = (x1, x0);
            let mut fa = f1;
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if m <= a || m >= b || b - a <= ROOT_BRACKET_M {
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
            }
            return Ok(Some(0.5 * (a + b)));
        }
        if x1 <= band_lo_nm * 1e-9 {
            return Ok(None);
        }
        x0 = x1;
    }
}

/// Collinear QPM wavelengths for each temperature in `t_grid_c`, searching
/// the default signal band.
pub fn tuning_curve(
    spec: &CrystalSpec,
    lambda_p_m: f64,
    t_grid_c: &[f64],
) -> Result<Vec<TuningEntry>> {
    tuning_curve_in_band(spec, lambda_p_m, t_grid_c, DEFAULT_SIGNAL_BAND_NM.0)
}

/// As [`tuning_curve`] with an explicit lower signal-band edge (nm).
pub fn tuning_curve_in_band(
    spec: &CrystalSpec,
    lambda_p_m: f64,
    t_grid_c: &[f64],
    band_lo_nm: f64,
) -> Result<Vec<TuningEntry>> {
    let deg = 2.0 * lambda_p_m;
    t_grid_c
        .iter()
        .map(|&t| {
            let dk_deg = phase_mismatch(spec, lambda_p_m, deg, deg, t)?;
            let entry = if dk_deg <= 0.0 {
                // No split solution; the spectrum peaks at/near degeneracy.
                TuningEntry {
                    temperature_c: t,
                    point: Some(TuningPoint {
                        temperature_c: t,
                        signal_nm: deg * 1e9,
                        idler_nm: deg * 1e9,
                        degenerate: true,
                    }),
                }
            } else {
                match split_root(spec, lambda_p_m, t, band_lo_nm)? {
                    Some(ls) => {
                        let li = idler_wavelength(lambda_p_m, ls)?;
                        TuningEntry {
                            temperature_c: t,
                            point: Some(TuningPoint {
                                temperature_c: t,
                                signal_nm: ls * 1e9,
                                idler_nm: li * 1e9,
                                degenerate: false,
                            }),
                        }
                    }
                    // Split exists but leaves the band: non-phase-matched here.
                    None => TuningEntry {
                        temperature_c: t,
                        point: None,
                    },
                }
            };
            Ok(entry)
        })
        .collect()
}

/// One detected lobe of a 1-D scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LobeWidth {
    /// Axis value at the lobe peak.
    pub center: f64,
    /// Full width at half the lobe's own maximum, in axis units.
    pub fwhm: f64,
    pub peak_value: f64,
    /// Interpolated half-maximum crossings.
    pub left: f64,
    pub right: f64,
}

/// Minimum peak height relative to the scan maximum.
const LOBE_HEIGHT_THRESHOLD: f64 = 0.5;
/// Minimum topographic prominence relative to the scan maximum.
const LOBE_PROMINENCE: f64 = 0.1;

/// Detect lobes (local maxima above half the global maximum with prominence
/// at least 0.1) and report their linear-interpolated half-maximum widths,
/// highest lobe first.
pub fn fwhm(scan: &SpectralScan) -> Result<Vec<LobeWidth>> {
    if scan.axis2.is_some() {
        return Err(Error::domain("fwhm expects a 1-D scan"));
    }
    let v = &scan.values;
    let x = &scan.axis1.values;
    let n = v.len();
    let global = v.iter().copied().fold(0.0_f64, f64::max);

    let mut lobes = Vec::new();
    for i in 1..n - 1 {
        if !(v[i] > v[i - 1] && v[i] >= v[i + 1]) {
            continue;
        }
        if v[i] < LOBE_HEIGHT_THRESHOLD * global {
            continue;
        }
        // Topographic prominence: lowest col toward the nearest higher ground
        // on each side (or the scan edge).
        let mut left_col = v[i];
        let mut j = i;
        while j > 0 {
            j -= 1;
            left_col = left_col.min(v[j]);
            if v[j] > v[i] {
                break;
            }
        }
        let mut right_col = v[i];
        let mut j = i;
        while j < n - 1 {
            j += 1;
            right_col = right_col.min(v[j]);
            if v[j] > v[i] {
                break;
            }
        }
        let prominence = v[i] - left_col.max(right_col);
        if prominence < LOBE_PROMINENCE * global {
            continue;
        }

        let half = 0.5 * v[i];
        // Left crossing.
        let mut li = i;
        while li > 0 && v[li - 1] > half {
            li -= 1;
        }
        let left = if li == 0 {
            x[0]
        } else {
            let (x0, x1, y0, y1) = (x[li - 1], x[li], v[li - 1], v[li]);
            x0 + (half - y0) / (y1 - y0) * (x1 - x0)
        };
        // Right crossing.
        let mut ri = i;
        while ri < n - 1 && v[ri + 1] > half {
            ri += 1;
        }
        let right = if ri == n - 1 {
            x[n - 1]
        } else {
            let (x0, x1, y0, y1) = (x[ri], x[ri + 1], v[ri], v[ri + 1]);
            x0 + (half - y0) / (y1 - y0) * (x1 - x0)
        };
        lobes.push(LobeWidth {
            center: x[i],
            fwhm: right - left,
            peak_value: v[i],
            left,
            right,
        });
    }
    if lobes.is_empty() {
        return Err(Error::domain("no resolvable peak"));
    }
    lobes.sort_by(|a, b| {
        b.peak_value
            .total_cmp(&a.peak_value)
            .then(a.center.total_cmp(&b.center))
    });
    Ok(lobes)
}

/// Emission-angle map plus its wavelength-integrated radial profile.
#[derive(Debug, Clone)]
pub struct AngleMapResult {
    /// Normalized intensity over (external angle, wavelength).
    pub map: SpectralScan,
    /// Normalized wavelength-integrated intensity per external angle.
    pub radial_profile: SpectralScan,
    /// External angle (mrad) at which the radial profile peaks.
    pub peak_external_angle_mrad: f64,
}

/// Raw sinc^2 intensities over (external angle, signal wavelength), stored
/// row-major with the angle as the slow index. External angles map to
/// internal ones through small-angle refraction with the signal-band index.
pub fn angle_map_raw(
    spec: &CrystalSpec,
    lambda_p_m: f64,
    t_c: f64,
    theta_grid_mrad: &[f64],
    lambda_grid_nm: &[f64],
) -> Result<Vec<f64>> {
    if theta_grid_mrad.iter().any(|&t| !(0.0..=100.0).contains(&t)) {
        return Err(Error::precondition(
            "external angles must lie within [0, 100] mrad",
        ));
    }
    let k_p = wavevector(spec, lambda_p_m, t_c)?.magnitude;
    let grating = 2.0 * PI / poling_period(spec, t_c);
    let n_band = wavevector(spec, 2.0 * lambda_p_m, t_c)?.refractive_index;

    // Per-wavelength kinematics are angle independent.
    let mut ks = Vec::with_capacity(lambda_grid_nm.len());
    let mut ki = Vec::with_capacity(lambda_grid_nm.len());
    for &nm in lambda_grid_nm {
        let ls = nm * 1e-9;
        let li = idler_wavelength(lambda_p_m, ls)?;
        ks.push(wavevector(spec, ls, t_c)?.magnitude);
        ki.push(wavevector(spec, li, t_c)?.magnitude);
    }

    let mut out = Vec::with_capacity(theta_grid_mrad.len() * lambda_grid_nm.len());
    for &th_mrad in theta_grid_mrad {
        let theta_int = th_mrad * 1e-3 / n_band;
        let sin_s = theta_int.sin();
        let cos_s = theta_int.cos();
        for j in 0..lambda_grid_nm.len() {
            // Transverse momentum conservation fixes the idler angle.
            let sin_i = ks[j] * sin_s / ki[j];
            if sin_i.abs() > 1.0 {
                out.push(0.0);
                continue;
            }
            let cos_i = (1.0 - sin_i * sin_i).sqrt();
            let dkz = longitudinal_mismatch(k_p, ks[j], ki[j], grating, cos_s, cos_i);
            out.push(lobe_intensity(dkz, spec.length_m));
        }
    }
    Ok(out)
}

/// Far-field emission map at temperature `t_c` over external angles (mrad)
/// and signal wavelengths (nm).
pub fn emission_angle_map(
    spec: &CrystalSpec,
    lambda_p_m: f64,
    t_c: f64,
    theta_grid_mrad: &[f64],
    lambda_grid_nm: &[f64],
) -> Result<AngleMapResult> {
    let raw = angle_map_raw(spec, lambda_p_m, t_c, theta_grid_mrad, lambda_grid_nm)?;
    let spec_at_t = spec.with_temperature(t_c);
    let meta = ScanMeta::from_spec(&spec_at_t, lambda_p_m);

    let n_lam = lambda_grid_nm.len();
    let profile_raw: Vec<f64> = (0..theta_grid_mrad.len())
        .map(|i| trapezoid(lambda_grid_nm, &raw[i * n_lam..(i + 1) * n_lam]))
        .collect();
    let peak = theta_grid_mrad[profile_raw
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("non-empty profile")];

    let map = SpectralScan::normalized(
        Axis::new("external angle", "mrad", theta_grid_mrad.to_vec())?,
        Some(Axis::new("wavelength", "nm", lambda_grid_nm.to_vec())?),
        raw,
        meta.clone(),
    )?;
    let radial_profile = SpectralScan::normalized(
        Axis::new("external angle", "mrad", theta_grid_mrad.to_vec())?,
        None,
        profile_raw,
        meta,
    )?;
    Ok(AngleMapResult {
        map,
        radial_profile,
        peak_external_angle_mrad: peak,
    })
}

/// Default grids for the temperature-intensity integral.
const TEMP_INTENSITY_THETA_MRAD: (f64, f64, usize) = (0.0, 60.0, 121);
const TEMP_INTENSITY_LAMBDA_NM: (f64, f64, usize) = (760.0, 860.0, 201);

/// Total far-field intensity versus temperature: the angle map integrated
/// over wavelength and (ring-weighted) angle, normalized over the scan.
/// The ring weight `theta dtheta` mirrors summing camera pixels over the
/// azimuthally symmetric far field.
pub fn temperature_intensity(
    spec: &CrystalSpec,
    lambda_p_m: f64,
    t_grid_c: &[f64],
) -> Result<SpectralScan> {
    let th = linspace(
        TEMP_INTENSITY_THETA_MRAD.0,
        TEMP_INTENSITY_THETA_MRAD.1,
        TEMP_INTENSITY_THETA_MRAD.2,
    );
    let lam = linspace(
        TEMP_INTENSITY_LAMBDA_NM.0,
        TEMP_INTENSITY_LAMBDA_NM.1,
        TEMP_INTENSITY_LAMBDA_NM.2,
    );
    temperature_intensity_with_grids(spec, lambda_p_m, t_grid_c, &th, &lam)
}

/// As [`temperature_intensity`] with explicit integration grids.
pub fn temperature_intensity_with_grids(
    spec: &CrystalSpec,
    lambda_p_m: f64,
    t_grid_c: &[f64],
    theta_grid_mrad: &[f64],
    lambda_grid_nm: &[f64],
) -> Result<SpectralScan> {
    let n_lam = lambda_grid_nm.len();
    let mut totals = Vec::with_capacity(t_grid_c.len());
    for &t in t_grid_c {
        let raw = angle_map_raw(spec, lambda_p_m, t, theta_grid_mrad, lambda_grid_nm)?;
        let ring: Vec<f64> = (0..theta_grid_mrad.len())
            .map(|i| {
                theta_grid_mrad[i] * trapezoid(lambda_grid_nm, &raw[i * n_lam..(i + 1) * n_lam])
            })
            .collect();
        totals.push(trapezoid(theta_grid_mrad, &ring));
    }
    SpectralScan::normalized(
        Axis::new("temperature", "C", t_grid_c.to_vec())?,
        None,
        totals,
        ScanMeta::from_spec(spec, lambda_p_m),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scan::linspace;

    const LP: f64 = 405.143e-9;

    fn spec() -> CrystalSpec {
        CrystalSpec::ppktp(0.030, 29.3)
    }

    #[test]
    fn sinc_handles_zero_exactly() {
        assert_eq!(sinc_sq(0.0), 1.0);
        assert!((sinc_sq(1.391_557) - 0.5).abs() < 1e-5);
    }

    #[test]
    fn spectrum_peaks_at_degeneracy_when_matched_there() {
        // At the degeneracy temperature the mismatch root sits at 2 lp.
        let t_deg = crate::dispersion::degeneracy_temperature(&spec(), LP, 20.0, 40.0)
            .unwrap()
            .unwrap();
        let s = spec().with_temperature(t_deg);
        let grid = linspace(770.0, 850.0, 1601);
        let scan = collinear_spectrum(&s, LP, &grid).unwrap();
        let peak_nm = scan.axis1.values[scan.max_position()];
        assert!((peak_nm - 2.0 * LP * 1e9).abs() < 0.2, "peak at {peak_nm}");
    }

    #[test]
    fn separated_lobes_at_operating_temperature() {
        // Oracle: calibrated set puts lobes at 796.000/825.095 nm with
        // widths 4.746/5.095 nm for L = 30 mm at 29.3 C.
        let grid = linspace(770.0, 850.0, 1601);
        let scan = collinear_spectrum(&spec(), LP, &grid).unwrap();
        let lobes = fwhm(&scan).unwrap();
        assert_eq!(lobes.len(), 2, "{lobes:?}");
        let mut by_pos = lobes.clone();
        by_pos.sort_by(|a, b| a.center.total_cmp(&b.center));
        assert!((by_pos[0].center - 796.0).abs() < 0.3, "{:?}", by_pos[0]);
        assert!((by_pos[1].center - 825.1).abs() < 0.3, "{:?}", by_pos[1]);
        assert!((by_pos[0].fwhm - 4.75).abs() < 0.15, "{:?}", by_pos[0]);
        assert!((by_pos[1].fwhm - 5.09).abs() < 0.15, "{:?}", by_pos[1]);
    }

    #[test]
    fn fwhm_length_scaling_in_separated_regime() {
        // Both lengths fully separated at 31 C; widths scale ~ 1/L.
        let grid = linspace(760.0, 870.0, 2201);
        let w = |len: f64| {
            let s = CrystalSpec::ppktp(len, 31.0);
            let scan = collinear_spectrum(&s, LP, &grid).unwrap();
            let mut lobes = fwhm(&scan).unwrap();
            lobes.sort_by(|a, b| a.center.total_cmp(&b.center));
            lobes[0].fwhm
        };
        let ratio = w(0.010) / w(0.030);
        assert!((ratio - 3.0).abs() < 0.45, "ratio {ratio}");
    }

    #[test]
    fn fwhm_recovers_analytic_gaussian_width() {
        let w = 12.0;
        let x0 = 810.0;
        let grid = linspace(790.0, 830.0, 241);
        let vals: Vec<f64> = grid
            .iter()
            .map(|&x| (-4.0 * 2.0_f64.ln() * (x - x0) * (x - x0) / (w * w)).exp())
            .collect();
        let scan = SpectralScan::normalized(
            Axis::new("wavelength", "nm", grid).unwrap(),
            None,
            vals,
            ScanMeta::from_spec(&spec(), LP),
        )
        .unwrap();
        let lobes = fwhm(&scan).unwrap();
        assert_eq!(lobes.len(), 1);
        assert!((lobes[0].fwhm - w).abs() / w < 0.005, "{:?}", lobes[0]);
    }

    #[test]
    fn fwhm_two_identical_lobes_equal_widths() {
        let grid = linspace(0.0, 100.0, 1001);
        let lobe = |x: f64, c: f64| (-(x - c) * (x - c) / 18.0).exp();
        let vals: Vec<f64> = grid.iter().map(|&x| lobe(x, 30.0) + lobe(x, 70.0)).collect();
        let scan = SpectralScan::normalized(
            Axis::new("x", "nm", grid).unwrap(),
            None,
            vals,
            ScanMeta::from_spec(&spec(), LP),
        )
        .unwrap();
        let lobes = fwhm(&scan).unwrap();
        assert_eq!(lobes.len(), 2);
        assert!((lobes[0].fwhm - lobes[1].fwhm).abs() < 1e-6);
    }

    #[test]
    fn fwhm_rejects_flat_scan() {
        let grid = linspace(0.0, 10.0, 11);
        let vals = vec![1.0; 11];
        let scan = SpectralScan::normalized(
            Axis::new("x", "nm", grid).unwrap(),
            None,
            vals,
            ScanMeta::from_spec(&spec(), LP),
        )
        .unwrap();
        assert!(fwhm(&scan).unwrap_err().to_string().contains("no resolvable"));
    }

    #[test]
    fn tuning_curve_branches() {
        let s = spec();
        let entries = tuning_curve(&s, LP, &[27.0, 28.0, 29.3, 30.0, 31.0]).unwrap();
        // Below the degeneracy temperature: degenerate branch.
        for e in &entries[..2] {
            let p = e.point.unwrap();
            assert!(p.degenerate, "{e:?}");
            assert!((p.signal_nm - 810.286).abs() < 1e-6);
        }
        // Above: split, signal decreasing / idler increasing with T.
        let split: Vec<TuningPoint> = entries[2..].iter().map(|e| e.point.unwrap()).collect();
        for p in &split {
            assert!(!p.degenerate);
            assert!(p.signal_nm <= p.idler_nm);
        }
        assert!(split[0].signal_nm > split[1].signal_nm);
        assert!(split[1].signal_nm > split[2].signal_nm);
        assert!(split[0].idler_nm < split[1].idler_nm);
        assert!(split[1].idler_nm < split[2].idler_nm);
        // Oracle: the split sits at 796.000/825.094 nm at 29.3 C.
        assert!((split[0].signal_nm - 796.0).abs() < 0.05, "{:?}", split[0]);
        assert!((split[0].idler_nm - 825.094).abs() < 0.05, "{:?}", split[0]);
    }

    #[test]
    fn tuning_roots_satisfy_mismatch_tolerance() {
        let s = spec();
        let entries = tuning_curve(&s, LP, &[29.0, 29.3, 30.0, 32.0]).unwrap();
        for e in entries {
            let p = e.point.unwrap();
            assert!(!p.degenerate);
            let dk = phase_mismatch(
                &s,
                LP,
                p.signal_nm * 1e-9,
                idler_wavelength(LP, p.signal_nm * 1e-9).unwrap(),
                e.temperature_c,
            )
            .unwrap();
            assert!(dk.abs() < 1e-6, "dk = {dk:e} at {}", e.temperature_c);
        }
    }

    #[test]
    fn tuning_out_of_band_reports_unmatched() {
        // At 35 C the signal root lies below 770 nm.
        let entries = tuning_curve(&spec(), LP, &[35.0]).unwrap();
        assert!(entries[0].point.is_none(), "{entries:?}");
    }

    #[test]
    fn angle_map_zero_angle_column_matches_collinear_bitwise() {
        let s = spec();
        let lam = linspace(780.0, 840.0, 121);
        let theta = linspace(0.0, 30.0, 31);
        let raw = angle_map_raw(&s, LP, s.temperature_c, &theta, &lam).unwrap();
        let collinear = collinear_intensities(&s, LP, &lam).unwrap();
        for j in 0..lam.len() {
            assert_eq!(raw[j], collinear[j], "mismatch at {}", lam[j]);
        }
    }

    #[test]
    fn angle_map_collinear_peak_above_threshold_ring_below() {
        let s = spec();
        let lam = linspace(760.0, 860.0, 201);
        let theta = linspace(0.0, 60.0, 121);
        // Above the collinear threshold (~28.6 C): peak at zero angle.
        let above = emission_angle_map(&s, LP, 29.3, &theta, &lam).unwrap();
        assert_eq!(above.peak_external_angle_mrad, 0.0);
        // Below: annular emission peaks off axis.
        let below = emission_angle_map(&s, LP, 27.5, &theta, &lam).unwrap();
        assert!(
            below.peak_external_angle_mrad >= 5.0,
            "ring peak at {}",
            below.peak_external_angle_mrad
        );
    }

    #[test]
    fn temperature_intensity_trends() {
        let s = spec();
        let t_grid = linspace(25.0, 35.0, 21);
        let scan = temperature_intensity(&s, LP, &t_grid).unwrap();
        // Normalization contract.
        assert!(scan.values.iter().copied().fold(0.0_f64, f64::max) == 1.0);
        // Decreasing with T above the separation temperature.
        let i0 = t_grid.iter().position(|&t| t >= 29.3).unwrap();
        for i in i0..t_grid.len() - 1 {
            assert!(
                scan.values[i + 1] < scan.values[i],
                "not decreasing at T={}",
                t_grid[i]
            );
        }
        // Peak sits below the full-separation temperature.
        let peak_t = t_grid[scan.max_position()];
        assert!(peak_t < 29.3, "peak at {peak_t}");
    }

    #[test]
    fn angle_rejects_large_angles() {
        let s = spec();
        let err = angle_map_raw(&s, LP, 29.3, &[0.0, 150.0], &[800.0, 810.0]).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }
}
