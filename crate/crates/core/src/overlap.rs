//! Collinear Gaussian-mode two-photon overlap amplitude, band-integrated
//! pair intensity, waist sweeps and far-field profile synthesis.
//!
//! The amplitude of a pair emitted into collinear fundamental Gaussian
//! modes of waists (wp, ws, wi), all focused at the crystal center, is
//!
//! ```text
//! phi = (wp ws wi / sqrt(lp ls li)) *
//!       int_{-L/2}^{L/2} exp(i dPhi z) / (qs* qi* + qp qi* + qp qs*) dz
//! q_a = w_a^2 + 2 i z / k_a
//! ```
//!
//! with `dPhi` the collinear QPM mismatch evaluated from intracrystal
//! wavevectors. The mode wavevectors `k_a` entering `q_a` default to the
//! vacuum values `2 pi / lambda_a`; the measured waist-dependence of
//! commercial sources follows that convention, and the intracrystal
//! alternative stays available through [`OverlapModel`].

use num_complex::Complex64;

use crate::dispersion::{idler_wavelength, phase_mismatch, CrystalSpec};
use crate::error::{Error, Result};
use crate::fit::{fit_gaussian_profile, fit_lorentzian_profile, golden_max, ProfileFit};
use crate::quad::{integrate, trapezoid, QuadResult};
use crate::scan::{linspace, logspace, Axis, ScanMeta, SpectralScan};

/// Wavevector convention for the complex mode parameters `q_a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ModeWavevectors {
    /// `k_a = 2 pi / lambda_a` (vacuum). Default.
    #[default]
    Vacuum,
    /// `k_a = 2 pi n(lambda_a, T) / lambda_a`.
    Intracrystal,
}

/// Numerical controls for the overlap integrals.
#[derive(Debug, Clone, Copy)]
pub struct OverlapModel {
    pub mode_wavevectors: ModeWavevectors,
    /// Relative tolerance of the adaptive z-quadrature.
    pub quad_rel_tol: f64,
    pub max_panels: usize,
}

impl Default for OverlapModel {
    fn default() -> Self {
        OverlapModel {
            mode_wavevectors: ModeWavevectors::default(),
            quad_rel_tol: 1e-9,
            max_panels: 256,
        }
    }
}

/// Beam waists (1/e^2 intensity radii at the crystal center), in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaistTriple {
    pub pump_m: f64,
    pub signal_m: f64,
    pub idler_m: f64,
}

impl WaistTriple {
    pub fn new(pump_m: f64, signal_m: f64, idler_m: f64) -> Result<Self> {
        if pump_m <= 0.0 || signal_m <= 0.0 || idler_m <= 0.0 {
            return Err(Error::domain("waists must be positive"));
        }
        Ok(WaistTriple {
            pump_m,
            signal_m,
            idler_m,
        })
    }

    /// Signal and idler share one waist.
    pub fn symmetric(pump_m: f64, collect_m: f64) -> Result<Self> {
        Self::new(pump_m, collect_m, collect_m)
    }
}

/// Diagnostic denominator coefficients recorded alongside an overlap result.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct OverlapCoefficients {
    /// `4 (kp - ks - ki) / (kp ks ki)`
    pub a: f64,
    /// `2 ((wp^2+ws^2)/ki - (ws^2+wi^2)/kp - (wi^2+wp^2)/ks)`
    pub b: f64,
    /// `wp^2 ws^2 + ws^2 wi^2 + wi^2 wp^2`
    pub c: f64,
}

/// Kinematic bundle for one (signal, idler) pair at the crystal temperature.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PairKinematics {
    pub lambda_p: f64,
    pub lambda_s: f64,
    pub lambda_i: f64,
    /// Mode wavevectors entering the q parameters.
    pub kp: f64,
    pub ks: f64,
    pub ki: f64,
    /// Collinear QPM mismatch (intracrystal, incl. grating), rad/m.
    pub delta_phi: f64,
}

pub(crate) fn pair_kinematics(
    spec: &CrystalSpec,
    model: &OverlapModel,
    lambda_p_m: f64,
    lambda_s_m: f64,
    lambda_i_m: f64,
) -> Result<PairKinematics> {
    let t = spec.temperature_c;
    let delta_phi = phase_mismatch(spec, lambda_p_m, lambda_s_m, lambda_i_m, t)?;
    let two_pi = 2.0 * std::f64::consts::PI;
    let (kp, ks, ki) = match model.mode_wavevectors {
        ModeWavevectors::Vacuum => (
            two_pi / lambda_p_m,
            two_pi / lambda_s_m,
            two_pi / lambda_i_m,
        ),
        ModeWavevectors::Intracrystal => (
            crate::dispersion::wavevector(spec, lambda_p_m, t)?.magnitude,
            crate::dispersion::wavevector(spec, lambda_s_m, t)?.magnitude,
            crate::dispersion::wavevector(spec, lambda_i_m, t)?.magnitude,
        ),
    };
    Ok(PairKinematics {
        lambda_p: lambda_p_m,
        lambda_s: lambda_s_m,
        lambda_i: lambda_i_m,
        kp,
        ks,
        ki,
        delta_phi,
    })
}

impl PairKinematics {
    fn prefactor(&self, w: &WaistTriple) -> f64 {
        w.pump_m * w.signal_m * w.idler_m
            / (self.lambda_p * self.lambda_s * self.lambda_i).sqrt()
    }

    pub(crate) fn coefficients(&self, w: &WaistTriple) -> OverlapCoefficients {
        let (wp2, ws2, wi2) = (
            w.pump_m * w.pump_m,
            w.signal_m * w.signal_m,
            w.idler_m * w.idler_m,
        );
        OverlapCoefficients {
            a: 4.0 * (self.kp - self.ks - self.ki) / (self.kp * self.ks * self.ki),
            b: 2.0 * ((wp2 + ws2) / self.ki - (ws2 + wi2) / self.kp - (wi2 + wp2) / self.ks),
            c: wp2 * ws2 + ws2 * wi2 + wi2 * wp2,
        }
    }

    /// The z-integrand `exp(i dPhi z) / D(z)`.
    fn integrand(&self, w: &WaistTriple, z: f64) -> Complex64 {
        let qp = Complex64::new(w.pump_m * w.pump_m, 2.0 * z / self.kp);
        let qs_c = Complex64::new(w.signal_m * w.signal_m, -2.0 * z / self.ks);
        let qi_c = Complex64::new(w.idler_m * w.idler_m, -2.0 * z / self.ki);
        let denom = qs_c * qi_c + qp * qi_c + qp * qs_c;
        Complex64::new(0.0, self.delta_phi * z).exp() / denom
    }

    pub(crate) fn amplitude(
        &self,
        w: &WaistTriple,
        length_m: f64,
        model: &OverlapModel,
    ) -> Result<QuadResult> {
        let half = 0.5 * length_m;
        let pref = self.prefactor(w);
        let mut r = integrate(
            |z| self.integrand(w, z),
            -half,
            half,
            model.quad_rel_tol,
            model.max_panels,
        )?;
        r.value *= pref;
        r.error_bound *= pref;
        Ok(r)
    }
}

/// Complex overlap amplitude for one (signal, idler) pair, default model.
pub fn overlap_amplitude(
    spec: &CrystalSpec,
    lambda_p_m: f64,
    lambda_s_m: f64,
    lambda_i_m: f64,
    waists: &WaistTriple,
) -> Result<Complex64> {
    overlap_amplitude_with(
        spec,
        &OverlapModel::default(),
        lambda_p_m,
        lambda_s_m,
        lambda_i_m,
        waists,
    )
    .map(|r| r.value)
}

/// As [`overlap_amplitude`] with explicit model controls, returning the
/// quadrature result (value + error bound).
pub fn overlap_amplitude_with(
    spec: &CrystalSpec,
    model: &OverlapModel,
    lambda_p_m: f64,
    lambda_s_m: f64,
    lambda_i_m: f64,
    waists: &WaistTriple,
) -> Result<QuadResult> {
    let kin = pair_kinematics(spec, model, lambda_p_m, lambda_s_m, lambda_i_m)?;
    kin.amplitude(waists, spec.length_m, model)
}

/// Band-integrated pair intensity with the recorded peak amplitude and
/// denominator coefficients at the dominant wavelength.
#[derive(Debug, Clone, Copy)]
pub struct OverlapResult {
    /// Amplitude at the strongest grid point.
    pub amplitude: Complex64,
    /// Trapezoidal integral of |phi|^2 over the wavelength grid.
    pub intensity: f64,
    /// Coefficients evaluated at the strongest grid point.
    pub coefficients: OverlapCoefficients,
    /// Set when fewer than 50 grid points sample the dominant lobe.
    pub grid_warning: bool,
}

/// Minimum λ-grid size accepted by [`pair_intensity`].
pub const MIN_PAIR_GRID_POINTS: usize = 200;
/// Minimum sample count across the dominant lobe before warning.
const MIN_LOBE_POINTS: usize = 50;

/// Band-integrated pair intensity over `lambda_grid_nm` (signal side).
pub fn pair_intensity(
    spec: &CrystalSpec,
    lambda_p_m: f64,
    waists: &WaistTriple,
    lambda_grid_nm: &[f64],
) -> Result<OverlapResult> {
    pair_intensity_with(spec, &OverlapModel::default(), lambda_p_m, waists, lambda_grid_nm)
}

/// As [`pair_intensity`] with explicit model controls.
pub fn pair_intensity_with(
    spec: &CrystalSpec,
    model: &OverlapModel,
    lambda_p_m: f64,
    waists: &WaistTriple,
    lambda_grid_nm: &[f64],
) -> Result<OverlapResult> {
    if lambda_grid_nm.len() < MIN_PAIR_GRID_POINTS {
        return Err(Error::precondition(format!(
            "pair intensity needs at least {MIN_PAIR_GRID_POINTS} wavelength samples, got {}",
            lambda_grid_nm.len()
        )));
    }
    if lambda_grid_nm.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::precondition("wavelength grid must be strictly increasing"));
    }
    let mut best = (0usize, -1.0_f64, Complex64::new(0.0, 0.0));
    let mut sq = Vec::with_capacity(lambda_grid_nm.len());
    for (i, &nm) in lambda_grid_nm.iter().enumerate() {
        let ls = nm * 1e-9;
        let li = idler_wavelength(lambda_p_m, ls)?;
        let kin = pair_kinematics(spec, model, lambda_p_m, ls, li)?;
        let amp = kin.amplitude(waists, spec.length_m, model)?.value;
        let v = amp.norm_sqr();
        if v > best.1 {
            best = (i, v, amp);
        }
        sq.push(v);
    }
    let intensity = trapezoid(lambda_grid_nm, &sq);

    // Count contiguous samples at or above half the peak around the argmax.
    let half = 0.5 * best.1;
    let mut lobe_points = 1usize;
    let mut i = best.0;
    while i > 0 && sq[i - 1] >= half {
        i -= 1;
        lobe_points += 1;
    }
    let mut i = best.0;
    while i + 1 < sq.len() && sq[i + 1] >= half {
        i += 1;
        lobe_points += 1;
    }

    let ls = lambda_grid_nm[best.0] * 1e-9;
    let li = idler_wavelength(lambda_p_m, ls)?;
    let kin = pair_kinematics(spec, model, lambda_p_m, ls, li)?;
    Ok(OverlapResult {
        amplitude: best.2,
        intensity,
        coefficients: kin.coefficients(waists),
        grid_warning: lobe_points < MIN_LOBE_POINTS,
    })
}

/// Default signal-band grid for waist sweeps: fine enough that the
/// narrowest (plane-wave-limit) lobes keep >50 samples.
pub fn default_sweep_grid() -> Vec<f64> {
    linspace(770.0, 850.0, 1201)
}

/// Signal-waist handling for the pump sweep.
#[derive(Debug, Clone, Copy)]
pub enum SignalWaistMode {
    /// Fixed signal (= idler) waist in meters.
    Fixed(f64),
    /// Golden-section maximization of the pair intensity over the signal
    /// waist within [lo, hi] meters at every pump waist.
    Optimized { lo_m: f64, hi_m: f64 },
}

impl SignalWaistMode {
    pub fn optimized_default() -> Self {
        SignalWaistMode::Optimized {
            lo_m: 5e-6,
            hi_m: 300e-6,
        }
    }
}

fn intensity_symmetric(
    spec: &CrystalSpec,
    model: &OverlapModel,
    lambda_p_m: f64,
    wp_m: f64,
    ws_m: f64,
    grid: &[f64],
) -> Result<f64> {
    let waists = WaistTriple::symmetric(wp_m, ws_m)?;
    Ok(pair_intensity_with(spec, model, lambda_p_m, &waists, grid)?.intensity)
}

/// Normalized pair intensity versus pump waist (um grid).
pub fn sweep_pump_waist(
    spec: &CrystalSpec,
    lambda_p_m: f64,
    wp_grid_um: &[f64],
    mode: SignalWaistMode,
) -> Result<SpectralScan> {
    sweep_pump_waist_with(spec, &OverlapModel::default(), lambda_p_m, wp_grid_um, mode)
}

/// As [`sweep_pump_waist`] with explicit model controls.
pub fn sweep_pump_waist_with(
    spec: &CrystalSpec,
    model: &OverlapModel,
    lambda_p_m: f64,
    wp_grid_um: &[f64],
    mode: SignalWaistMode,
) -> Result<SpectralScan> {
    if wp_grid_um.iter().any(|&w| !(5.0..=200.0).contains(&w)) {
        return Err(Error::precondition(
            "pump waist grid must lie within [5, 200] um",
        ));
    }
    let grid = default_sweep_grid();
    let mut raw = Vec::with_capacity(wp_grid_um.len());
    for &wp_um in wp_grid_um {
        let wp = wp_um * 1e-6;
        let p = match mode {
            SignalWaistMode::Fixed(ws_m) => {
                intensity_symmetric(spec, model, lambda_p_m, wp, ws_m, &grid)?
            }
            SignalWaistMode::Optimized { lo_m, hi_m } => {
                // Unimodal in ws; golden section is accurate and cheap.
                let f = |ws: f64| {
                    intensity_symmetric(spec, model, lambda_p_m, wp, ws, &grid).unwrap_or(0.0)
                };
                golden_max(f, lo_m, hi_m, 1e-8).1
            }
        };
        raw.push(p);
    }
    SpectralScan::normalized(
        Axis::new("pump waist", "um", wp_grid_um.to_vec())?,
        None,
        raw,
        ScanMeta::from_spec(spec, lambda_p_m),
    )
}

/// Normalized pair intensity versus the shared signal/idler waist (um grid)
/// at a fixed pump waist.
pub fn sweep_signal_waist(
    spec: &CrystalSpec,
    lambda_p_m: f64,
    wp_m: f64,
    ws_grid_um: &[f64],
) -> Result<SpectralScan> {
    sweep_signal_waist_with(spec, &OverlapModel::default(), lambda_p_m, wp_m, ws_grid_um)
}

/// As [`sweep_signal_waist`] with explicit model controls.
pub fn sweep_signal_waist_with(
    spec: &CrystalSpec,
    model: &OverlapModel,
    lambda_p_m: f64,
    wp_m: f64,
    ws_grid_um: &[f64],
) -> Result<SpectralScan> {
    if ws_grid_um.iter().any(|&w| !(5.0..=300.0).contains(&w)) {
        return Err(Error::precondition(
            "signal waist grid must lie within [5, 300] um",
        ));
    }
    let grid = default_sweep_grid();
    let mut raw = Vec::with_capacity(ws_grid_um.len());
    for &ws_um in ws_grid_um {
        raw.push(intensity_symmetric(
            spec,
            model,
            lambda_p_m,
            wp_m,
            ws_um * 1e-6,
            &grid,
        )?);
    }
    SpectralScan::normalized(
        Axis::new("signal waist", "um", ws_grid_um.to_vec())?,
        None,
        raw,
        ScanMeta::from_spec(spec, lambda_p_m),
    )
}

/// A weighted set of signal-waist components.
#[derive(Debug, Clone, PartialEq)]
pub struct WaistDistribution {
    pub waists_m: Vec<f64>,
    /// Non-negative weights, normalized to sum 1.
    pub weights: Vec<f64>,
}

impl WaistDistribution {
    pub fn new(waists_m: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if waists_m.is_empty() {
            return Err(Error::domain("waist distribution is empty"));
        }
        if waists_m.len() != weights.len() {
            return Err(Error::domain("waists and weights differ in length"));
        }
        if waists_m.iter().any(|&w| w <= 0.0) {
            return Err(Error::domain("waists must be positive"));
        }
        if weights.iter().any(|&w| w < 0.0 || !w.is_finite()) {
            return Err(Error::domain("weights must be finite and non-negative"));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::domain("weights sum to zero"));
        }
        Ok(WaistDistribution {
            waists_m,
            weights: weights.into_iter().map(|w| w / total).collect(),
        })
    }

    /// Single component with unit weight.
    pub fn delta(waist_m: f64) -> Result<Self> {
        Self::new(vec![waist_m], vec![1.0])
    }
}

/// Number of log-spaced signal-waist samples used for distribution-based
/// synthesis (far field, coupling).
pub const DISTRIBUTION_POINTS: usize = 64;

/// Signal-waist distribution generated by a fixed pump waist: pair
/// intensities sampled at 64 log-spaced waists in [5, 300] um.
pub fn signal_waist_distribution(
    spec: &CrystalSpec,
    lambda_p_m: f64,
    wp_m: f64,
) -> Result<WaistDistribution> {
    signal_waist_distribution_with(spec, &OverlapModel::default(), lambda_p_m, wp_m)
}

/// As [`signal_waist_distribution`] with explicit model controls.
pub fn signal_waist_distribution_with(
    spec: &CrystalSpec,
    model: &OverlapModel,
    lambda_p_m: f64,
    wp_m: f64,
) -> Result<WaistDistribution> {
    let ws_um = logspace(5.0, 300.0, DISTRIBUTION_POINTS);
    let scan = sweep_signal_waist_with(spec, model, lambda_p_m, wp_m, &ws_um)?;
    WaistDistribution::new(ws_um.iter().map(|w| w * 1e-6).collect(), scan.values)
}

/// Far-field transverse profile with its Gaussian and Lorentzian fits.
#[derive(Debug, Clone)]
pub struct FarFieldProfile {
    pub profile: SpectralScan,
    pub gaussian: ProfileFit,
    pub lorentzian: ProfileFit,
}

/// Synthesize the transverse intensity profile a camera records at
/// `distance_m` behind the crystal: an incoherent sum of the distribution's
/// Gaussian components, each propagated to width
/// `w(z) = ws sqrt(1 + (z/zR)^2)` and weighted by its pair intensity.
pub fn far_field_profile(
    spec: &CrystalSpec,
    lambda_p_m: f64,
    wp_m: f64,
    distance_m: f64,
    x_grid_mm: &[f64],
) -> Result<FarFieldProfile> {
    let dist = signal_waist_distribution(spec, lambda_p_m, wp_m)?;
    far_field_from_distribution(
        &dist,
        2.0 * lambda_p_m,
        distance_m,
        x_grid_mm,
        ScanMeta::from_spec(spec, lambda_p_m),
    )
}

/// As [`far_field_profile`] for a caller-supplied waist distribution and
/// propagation wavelength.
pub fn far_field_from_distribution(
    dist: &WaistDistribution,
    lambda_m: f64,
    distance_m: f64,
    x_grid_mm: &[f64],
    meta: ScanMeta,
) -> Result<FarFieldProfile> {
    if distance_m <= 0.0 {
        return Err(Error::precondition("propagation distance must be positive"));
    }
    let mut profile = vec![0.0; x_grid_mm.len()];
    for (&ws, &weight) in dist.waists_m.iter().zip(&dist.weights) {
        let zr = std::f64::consts::PI * ws * ws / lambda_m;
        let w_far = ws * (1.0 + (distance_m / zr) * (distance_m / zr)).sqrt();
        // Peak scales with power over area.
        let peak = weight / (w_far * w_far);
        for (p, &x_mm) in profile.iter_mut().zip(x_grid_mm) {
            let x = x_mm * 1e-3;
            *p += peak * (-2.0 * x * x / (w_far * w_far)).exp();
        }
    }
    let scan = SpectralScan::normalized(
        Axis::new("x", "mm", x_grid_mm.to_vec())?,
        None,
        profile,
        meta,
    )?;
    let gaussian = fit_gaussian_profile(&scan.axis1.values, &scan.values)?;
    let lorentzian = fit_lorentzian_profile(&scan.axis1.values, &scan.values)?;
    Ok(FarFieldProfile {
        profile: scan,
        gaussian,
        lorentzian,
    })
}
