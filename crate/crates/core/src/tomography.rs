//! Two-qubit state tomography: projective setting sets, Poisson count
//! simulation, maximum-likelihood reconstruction and parametric bootstrap.

use std::io::Read;

use nalgebra::{DMatrix, SMatrix, SVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::entanglement::{
    chsh, fidelity, Analyzer, BellKind, DensityMatrix, Matrix4c, MeasurementSetting, Vector4c,
};
use crate::error::{Error, Result};

/// A named projective setting.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSetting {
    pub label: String,
    pub setting: MeasurementSetting,
}

/// One measured (setting, count) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct TomographyEntry {
    pub label: String,
    pub setting: MeasurementSetting,
    pub count: u64,
}

/// A complete tomography data set.
#[derive(Debug, Clone, PartialEq)]
pub struct TomographyCounts {
    pub entries: Vec<TomographyEntry>,
    /// Acquisition scale: expected counts are `scale * p(setting)`.
    pub scale: f64,
}

fn lin(theta: f64) -> Analyzer {
    Analyzer::Linear(theta)
}

fn analyzer_by_letter(c: char) -> Analyzer {
    use std::f64::consts::FRAC_PI_4;
    match c {
        'H' => lin(0.0),
        'V' => lin(2.0 * FRAC_PI_4),
        'D' => lin(FRAC_PI_4),
        'A' => lin(-FRAC_PI_4),
        'R' => Analyzer::RightCircular,
        'L' => Analyzer::LeftCircular,
        other => panic!("unknown analyzer letter {other}"),
    }
}

fn settings_from_letters(pairs: &[&str]) -> Vec<LabeledSetting> {
    pairs
        .iter()
        .map(|s| {
            let mut ch = s.chars();
            let a = analyzer_by_letter(ch.next().unwrap());
            let b = analyzer_by_letter(ch.next().unwrap());
            LabeledSetting {
                label: (*s).to_string(),
                setting: MeasurementSetting { a, b },
            }
        })
        .collect()
}

/// The standard 16-projector tomography set.
pub fn james_16_settings() -> Vec<LabeledSetting> {
    settings_from_letters(&[
        "HH", "HV", "VV", "VH", "RH", "RV", "DV", "DH", "DR", "DD", "RD", "HD", "VD", "VL", "HL",
        "RL",
    ])
}

/// Overcomplete 36-projector set: all pairs from {H, V, D, A, R, L}.
pub fn overcomplete_36_settings() -> Vec<LabeledSetting> {
    let letters = ['H', 'V', 'D', 'A', 'R', 'L'];
    let mut out = Vec::with_capacity(36);
    for a in letters {
        for b in letters {
            out.push(LabeledSetting {
                label: format!("{a}{b}"),
                setting: MeasurementSetting {
                    a: analyzer_by_letter(a),
                    b: analyzer_by_letter(b),
                },
            });
        }
    }
    out
}

/// Poisson-sample counts for a state under the given settings,
/// deterministic per seed.
pub fn simulate_counts(
    rho: &DensityMatrix,
    settings: &[LabeledSetting],
    scale: f64,
    seed: u64,
) -> Result<TomographyCounts> {
    if scale <= 0.0 {
        return Err(Error::precondition("count scale must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries = settings
        .iter()
        .map(|ls| {
            let mu = scale * ls.setting.probability(rho).max(0.0);
            let count = if mu < 1e-12 {
                0
            } else {
                Poisson::new(mu)
                    .map_err(|e| Error::Numerical {
                        message: format!("poisson({mu}): {e}"),
                        estimate: mu,
                        bound: f64::NAN,
                    })?
                    .sample(&mut rng) as u64
            };
            Ok(TomographyEntry {
                label: ls.label.clone(),
                setting: ls.setting,
                count,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TomographyCounts { entries, scale })
}

/// Expected (noise-free) counts rounded to integers, for round-trip checks.
pub fn expected_counts(
    rho: &DensityMatrix,
    settings: &[LabeledSetting],
    scale: f64,
) -> TomographyCounts {
    let entries = settings
        .iter()
        .map(|ls| TomographyEntry {
            label: ls.label.clone(),
            setting: ls.setting,
            count: (scale * ls.setting.probability(rho).max(0.0)).round() as u64,
        })
        .collect();
    TomographyCounts { entries, scale }
}

/// Result of a maximum-likelihood reconstruction.
#[derive(Debug, Clone)]
pub struct MleResult {
    pub rho: DensityMatrix,
    pub converged: bool,
    pub iterations: usize,
    /// Infinity norm of the final (count-normalized) gradient.
    pub gradient_norm: f64,
    /// Final Poisson negative log-likelihood (unnormalized, up to constants).
    pub nll: f64,
}

const MLE_GRAD_TOL: f64 = 1e-8;
const MLE_MAX_ITER: usize = 10_000;
const P_EPSILON: f64 = 1e-12;

/// Lower-triangular factor from 16 real parameters.
fn factor_from_params(t: &[f64; 16]) -> Matrix4c {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let mut m = Matrix4c::zeros();
    m[(0, 0)] = c(t[0], 0.0);
    m[(1, 1)] = c(t[1], 0.0);
    m[(2, 2)] = c(t[2], 0.0);
    m[(3, 3)] = c(t[3], 0.0);
    m[(1, 0)] = c(t[4], t[5]);
    m[(2, 0)] = c(t[6], t[7]);
    m[(2, 1)] = c(t[8], t[9]);
    m[(3, 0)] = c(t[10], t[11]);
    m[(3, 1)] = c(t[12], t[13]);
    m[(3, 2)] = c(t[14], t[15]);
    m
}

/// (row, col, imaginary?) of each parameter slot.
const PARAM_SLOTS: [(usize, usize, bool); 16] = [
    (0, 0, false),
    (1, 1, false),
    (2, 2, false),
    (3, 3, false),
    (1, 0, false),
    (1, 0, true),
    (2, 0, false),
    (2, 0, true),
    (2, 1, false),
    (2, 1, true),
    (3, 0, false),
    (3, 0, true),
    (3, 1, false),
    (3, 1, true),
    (3, 2, false),
    (3, 2, true),
];

fn density_from_params(t: &[f64; 16]) -> (Matrix4c, f64) {
    let tm = factor_from_params(t);
    let sigma = tm.adjoint() * tm;
    let s = sigma.trace().re;
    (sigma, s)
}

struct Objective<'a> {
    psi: Vec<Vector4c>,
    counts: Vec<f64>,
    total: f64,
    _marker: std::marker::PhantomData<&'a ()>,
}

impl Objective<'_> {
    /// Count-normalized Poisson NLL and its analytic gradient.
    fn eval(&self, t: &[f64; 16], grad: Option<&mut [f64; 16]>) -> f64 {
        let tm = factor_from_params(t);
        // w_nu = T psi_nu, p_raw = |w|^2, s = tr(T^dag T).
        let s: f64 = tm.iter().map(|z| z.norm_sqr()).sum();
        let n = self.psi.len();
        let mut p = Vec::with_capacity(n);
        let mut w_all = Vec::with_capacity(n);
        for psi in &self.psi {
            let w = tm * psi;
            let praw: f64 = w.iter().map(|z| z.norm_sqr()).sum();
            p.push(praw / s + P_EPSILON);
            w_all.push(w);
        }
        let sum_p: f64 = p.iter().sum();
        // Profile out the acquisition scale: N_hat = sum(n) / sum(p).
        let n_hat = self.total / sum_p;
        let mut nll = 0.0;
        for (&pi, &ni) in p.iter().zip(&self.counts) {
            nll += n_hat * pi - ni * (n_hat * pi).ln();
        }
        if let Some(g) = grad {
            for (m, &(r, cidx, imaginary)) in PARAM_SLOTS.iter().enumerate() {
                let kappa = if imaginary {
                    Complex64::new(0.0, 1.0)
                } else {
                    Complex64::new(1.0, 0.0)
                };
                // d s / d t_m = 2 Re(kappa conj(T[r,c])).
                let ds = 2.0 * (kappa * tm[(r, cidx)].conj()).re;
                let mut acc = 0.0;
                for ((psi, w), (&pi, &ni)) in self
                    .psi
                    .iter()
                    .zip(&w_all)
                    .zip(p.iter().zip(&self.counts))
                {
                    // d p_raw / d t_m = 2 Re(kappa conj(w[r]) psi[c]).
                    let dpraw = 2.0 * (kappa * w[r].conj() * psi[cidx]).re;
                    let dp = (dpraw - (pi - P_EPSILON) * ds) / s;
                    acc += (n_hat - ni / pi) * dp;
                }
                g[m] = acc / self.total;
            }
        }
        nll / self.total
    }
}

/// Verify the settings span the 16-dimensional Hermitian operator space.
fn check_informationally_complete(settings: &[&MeasurementSetting]) -> Result<()> {
    if settings.len() < 16 {
        return Err(Error::Precondition(format!(
            "tomography needs at least 16 settings, got {}",
            settings.len()
        )));
    }
    let mut rows = DMatrix::<f64>::zeros(settings.len(), 16);
    for (k, s) in settings.iter().enumerate() {
        let p = s.projector();
        let mut col = 0;
        for i in 0..4 {
            rows[(k, col)] = p[(i, i)].re;
            col += 1;
        }
        for i in 0..4 {
            for j in (i + 1)..4 {
                rows[(k, col)] = p[(i, j)].re;
                rows[(k, col + 1)] = p[(i, j)].im;
                col += 2;
            }
        }
    }
    let svd = rows.svd(false, false);
    let smax = svd.singular_values.iter().copied().fold(0.0_f64, f64::max);
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&x| x > 1e-9 * smax)
        .count();
    if rank < 16 {
        return Err(Error::Precondition(format!(
            "settings are not informationally complete (rank {rank} < 16)"
        )));
    }
    Ok(())
}

/// Maximum-likelihood reconstruction: BFGS on the 16-parameter triangular
/// factor of `rho = T^dag T / tr(T^dag T)` against the Poisson likelihood.
/// The output satisfies the density-matrix invariants by construction.
pub fn tomography_mle(counts: &TomographyCounts) -> Result<MleResult> {
    let settings: Vec<&MeasurementSetting> = counts.entries.iter().map(|e| &e.setting).collect();
    check_informationally_complete(&settings)?;
    let total: f64 = counts.entries.iter().map(|e| e.count as f64).sum();
    if total <= 0.0 {
        return Err(Error::precondition("all tomography counts are zero"));
    }
    let obj = Objective {
        psi: counts.entries.iter().map(|e| e.setting.state_vector()).collect(),
        counts: counts.entries.iter().map(|e| e.count as f64).collect(),
        total,
        _marker: std::marker::PhantomData,
    };

    // Start from the maximally mixed state.
    let mut t = [0.0_f64; 16];
    t[0] = 0.5;
    t[1] = 0.5;
    t[2] = 0.5;
    t[3] = 0.5;

    let mut grad = [0.0_f64; 16];
    let mut f = obj.eval(&t, Some(&mut grad));
    let mut h = SMatrix::<f64, 16, 16>::identity();
    let mut iterations = 0;
    let mut converged = false;

    while iterations < MLE_MAX_ITER {
        let gnorm = grad.iter().fold(0.0_f64, |a, &g| a.max(g.abs()));
        if gnorm < MLE_GRAD_TOL {
            converged = true;
            break;
        }
        iterations += 1;

        let g_vec = SVector::<f64, 16>::from_column_slice(&grad);
        let mut dir = -(h * g_vec);
        if dir.dot(&g_vec) >= 0.0 {
            // Reset a corrupted curvature estimate.
            h = SMatrix::identity();
            dir = -g_vec;
        }

        // Backtracking Armijo line search.
        let slope = g_vec.dot(&dir);
        let mut alpha = 1.0_f64;
        let mut accepted = false;
        let mut t_new = t;
        let mut f_new = f;
        for _ in 0..50 {
            for (i, v) in t_new.iter_mut().enumerate() {
                *v = t[i] + alpha * dir[i];
            }
            f_new = obj.eval(&t_new, None);
            if f_new <= f + 1e-4 * alpha * slope {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if !accepted {
            break;
        }

        let mut grad_new = [0.0_f64; 16];
        let f_check = obj.eval(&t_new, Some(&mut grad_new));
        debug_assert!((f_check - f_new).abs() <= 1e-12 * (1.0 + f_new.abs()));

        // BFGS inverse-Hessian update.
        let s_vec = SVector::<f64, 16>::from_iterator(
            t_new.iter().zip(&t).map(|(a, b)| a - b),
        );
        let y_vec = SVector::<f64, 16>::from_iterator(
            grad_new.iter().zip(&grad).map(|(a, b)| a - b),
        );
        let sy = s_vec.dot(&y_vec);
        if sy > 1e-14 * s_vec.norm() * y_vec.norm() {
            let rho_b = 1.0 / sy;
            let i16 = SMatrix::<f64, 16, 16>::identity();
            let left = i16 - rho_b * s_vec * y_vec.transpose();
            h = left * h * left.transpose() + rho_b * s_vec * s_vec.transpose();
        }

        t = t_new;
        f = f_new;
        grad = grad_new;
    }

    let gradient_norm = grad.iter().fold(0.0_f64, |a, &g| a.max(g.abs()));
    let (sigma, s) = density_from_params(&t);
    let rho_m = sigma / Complex64::new(s, 0.0);
    // Symmetrize away the last bits of floating asymmetry.
    let rho_m = (rho_m + rho_m.adjoint()) * Complex64::new(0.5, 0.0);
    let rho = DensityMatrix::new(rho_m)?;
    Ok(MleResult {
        rho,
        converged,
        iterations,
        gradient_norm,
        nll: f * total,
    })
}

/// Summary of a parametric bootstrap.
#[derive(Debug, Clone, Copy)]
pub struct BootstrapStats {
    /// Metric at the reconstruction from the observed counts.
    pub point: f64,
    pub mean: f64,
    pub std_dev: f64,
    pub resamples: usize,
}

/// Parametric bootstrap of an arbitrary metric of the reconstructed state:
/// counts are re-drawn as Poisson around the observed values.
pub fn bootstrap_metric<F: Fn(&DensityMatrix) -> f64>(
    counts: &TomographyCounts,
    resamples: usize,
    seed: u64,
    metric: F,
) -> Result<BootstrapStats> {
    if resamples < 2 {
        return Err(Error::precondition("need at least two resamples"));
    }
    let point = metric(&tomography_mle(counts)?.rho);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vals = Vec::with_capacity(resamples);
    for _ in 0..resamples {
        let entries = counts
            .entries
            .iter()
            .map(|e| {
                let count = if e.count == 0 {
                    0
                } else {
                    Poisson::new(e.count as f64)
                        .expect("positive mean")
                        .sample(&mut rng) as u64
                };
                TomographyEntry {
                    label: e.label.clone(),
                    setting: e.setting,
                    count,
                }
            })
            .collect();
        let resampled = TomographyCounts {
            entries,
            scale: counts.scale,
        };
        vals.push(metric(&tomography_mle(&resampled)?.rho));
    }
    let mean = vals.iter().sum::<f64>() / vals.len() as f64;
    let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (vals.len() - 1) as f64;
    Ok(BootstrapStats {
        point,
        mean,
        std_dev: var.sqrt(),
        resamples,
    })
}

/// Bootstrap error bar on the Bell-state fidelity (200 resamples by
/// convention).
pub fn bootstrap_fidelity(
    counts: &TomographyCounts,
    target: BellKind,
    resamples: usize,
    seed: u64,
) -> Result<BootstrapStats> {
    bootstrap_metric(counts, resamples, seed, |rho| fidelity(rho, target))
}

/// Bootstrap error bar on the CHSH value at fixed analyzer pairs.
pub fn bootstrap_chsh(
    counts: &TomographyCounts,
    pairs: &[(f64, f64); 4],
    resamples: usize,
    seed: u64,
) -> Result<BootstrapStats> {
    bootstrap_metric(counts, resamples, seed, |rho| chsh(rho, pairs))
}

/// CSV header for tomography counts.
pub const TOMOGRAPHY_HEADER: &str = "setting_label,theta_A_deg,theta_B_deg,basis_flags,count";

fn analyzer_to_fields(a: &Analyzer) -> (f64, &'static str) {
    match a {
        Analyzer::Linear(theta) => (theta.to_degrees(), "lin"),
        Analyzer::RightCircular => (0.0, "rcp"),
        Analyzer::LeftCircular => (0.0, "lcp"),
    }
}

fn analyzer_from_fields(theta_deg: f64, flag: &str) -> Result<Analyzer> {
    match flag {
        "lin" => Ok(Analyzer::Linear(theta_deg.to_radians())),
        "rcp" => Ok(Analyzer::RightCircular),
        "lcp" => Ok(Analyzer::LeftCircular),
        other => Err(Error::parse(format!("unknown basis flag '{other}'"))),
    }
}

/// Render tomography counts as CSV.
pub fn write_tomography_csv(counts: &TomographyCounts) -> String {
    let mut out = format!("{TOMOGRAPHY_HEADER}\n");
    for e in &counts.entries {
        let (ta, fa) = analyzer_to_fields(&e.setting.a);
        let (tb, fb) = analyzer_to_fields(&e.setting.b);
        out.push_str(&format!(
            "{},{},{},{}|{},{}\n",
            e.label, ta, tb, fa, fb, e.count
        ));
    }
    out
}

/// Parse tomography counts from CSV. The scale is taken as the largest
/// per-setting count sum over a complete basis, or simply the maximum count
/// times 2 as a fallback; reconstruction itself does not depend on it.
pub fn read_tomography_csv<R: Read>(reader: R) -> Result<TomographyCounts> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::parse(format!("tomography: {e}")))?
        .clone();
    let got: Vec<&str> = headers.iter().collect();
    let expected: Vec<&str> = TOMOGRAPHY_HEADER.split(',').collect();
    if got != expected {
        return Err(Error::parse(format!(
            "tomography: expected header '{TOMOGRAPHY_HEADER}', got '{}'",
            got.join(",")
        )));
    }
    let mut entries = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(|e| Error::parse(format!("tomography: {e}")))?;
        if row.len() != 5 {
            return Err(Error::parse("tomography: rows need 5 columns"));
        }
        let ta: f64 = row[1]
            .parse()
            .map_err(|e| Error::parse(format!("tomography theta_A: {e}")))?;
        let tb: f64 = row[2]
            .parse()
            .map_err(|e| Error::parse(format!("tomography theta_B: {e}")))?;
        let flags: Vec<&str> = row[3].split('|').collect();
        if flags.len() != 2 {
            return Err(Error::parse("tomography: basis_flags must be 'fa|fb'"));
        }
        let count: u64 = row[4]
            .parse()
            .map_err(|e| Error::parse(format!("tomography count: {e}")))?;
        entries.push(TomographyEntry {
            label: row[0].to_string(),
            setting: MeasurementSetting {
                a: analyzer_from_fields(ta, flags[0])?,
                b: analyzer_from_fields(tb, flags[1])?,
            },
            count,
        });
    }
    let scale = entries.iter().map(|e| e.count).max().unwrap_or(1).max(1) as f64 * 2.0;
    Ok(TomographyCounts { entries, scale })
}

/// Deterministic helper: counts with expected values for a Bell state.
pub fn noiseless_bell_counts(kind: BellKind, scale: f64) -> TomographyCounts {
    expected_counts(&crate::entanglement::bell_state(kind), &james_16_settings(), scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entanglement::{bell_state, canonical_chsh_settings, werner_state};

    #[test]
    fn james_set_is_complete_and_distinct() {
        let s = james_16_settings();
        assert_eq!(s.len(), 16);
        let refs: Vec<&MeasurementSetting> = s.iter().map(|l| &l.setting).collect();
        check_informationally_complete(&refs).unwrap();
        let s36 = overcomplete_36_settings();
        assert_eq!(s36.len(), 36);
        let refs: Vec<&MeasurementSetting> = s36.iter().map(|l| &l.setting).collect();
        check_informationally_complete(&refs).unwrap();
    }

    #[test]
    fn incomplete_settings_rejected() {
        // 16 copies of the same projector have rank 1.
        let one = MeasurementSetting::linear(0.0, 0.0);
        let refs: Vec<&MeasurementSetting> = (0..16).map(|_| &one).collect();
        assert!(check_informationally_complete(&refs).is_err());
    }

    #[test]
    fn simulation_is_deterministic_per_seed() {
        let rho = bell_state(BellKind::PhiPlus);
        let s = james_16_settings();
        let a = simulate_counts(&rho, &s, 1e5, 42).unwrap();
        let b = simulate_counts(&rho, &s, 1e5, 42).unwrap();
        assert_eq!(a, b);
        let c = simulate_counts(&rho, &s, 1e5, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn simulated_counts_follow_poisson_scaling() {
        let rho = bell_state(BellKind::PhiPlus);
        let s = james_16_settings();
        // HH has p = 0.5; relative fluctuation shrinks ~1/sqrt(N p).
        for (scale, tol) in [(1e4, 0.05), (1e6, 0.005)] {
            let counts = simulate_counts(&rho, &s, scale, 7).unwrap();
            let hh = counts.entries.iter().find(|e| e.label == "HH").unwrap();
            let rel = (hh.count as f64 - 0.5 * scale).abs() / (0.5 * scale);
            assert!(rel < 4.0 * tol, "scale {scale}: rel {rel}");
        }
        // Orthogonal setting: expected zero.
        let counts = simulate_counts(&rho, &s, 1e5, 7).unwrap();
        let hv = counts.entries.iter().find(|e| e.label == "HV").unwrap();
        assert!(hv.count < 10, "HV counts {}", hv.count);
    }

    #[test]
    fn mle_noiseless_round_trip() {
        let counts = noiseless_bell_counts(BellKind::PhiPlus, 1e7);
        let r = tomography_mle(&counts).unwrap();
        let f = fidelity(&r.rho, BellKind::PhiPlus);
        assert!(f >= 0.999, "fidelity {f} after {} iterations", r.iterations);
        r.rho.validate().unwrap();
    }

    #[test]
    fn mle_poisson_round_trip() {
        let rho = bell_state(BellKind::PhiPlus);
        let counts = simulate_counts(&rho, &james_16_settings(), 1e5, 2024).unwrap();
        let r = tomography_mle(&counts).unwrap();
        let f = fidelity(&r.rho, BellKind::PhiPlus);
        assert!(f >= 0.99, "fidelity {f}");
        r.rho.validate().unwrap();
    }

    #[test]
    fn mle_recovers_werner_state() {
        let rho = werner_state(0.8).unwrap();
        let counts = simulate_counts(&rho, &overcomplete_36_settings(), 2e5, 5).unwrap();
        let r = tomography_mle(&counts).unwrap();
        let f = fidelity(&r.rho, BellKind::PhiPlus);
        assert!((f - 0.85).abs() < 0.02, "Werner(0.8) fidelity {f}");
        // CHSH of the reconstruction close to 2 sqrt(2) * 0.8.
        let s = chsh(&r.rho, &canonical_chsh_settings());
        assert!((s - 2.263).abs() < 0.05, "S = {s}");
    }

    #[test]
    fn mle_output_always_physical() {
        // Heavily corrupted counts still give a physical state.
        let mut counts = simulate_counts(
            &bell_state(BellKind::PhiPlus),
            &james_16_settings(),
            1e3,
            1,
        )
        .unwrap();
        counts.entries[0].count = 0;
        counts.entries[5].count = 12345;
        let r = tomography_mle(&counts).unwrap();
        r.rho.validate().unwrap();
    }

    #[test]
    fn zero_counts_rejected() {
        let mut counts = noiseless_bell_counts(BellKind::PhiPlus, 1e5);
        for e in &mut counts.entries {
            e.count = 0;
        }
        assert!(tomography_mle(&counts).is_err());
    }

    #[test]
    fn bootstrap_reports_scaled_errors() {
        let rho = bell_state(BellKind::PhiPlus);
        let counts = simulate_counts(&rho, &james_16_settings(), 2e4, 11).unwrap();
        let stats = bootstrap_fidelity(&counts, BellKind::PhiPlus, 24, 99).unwrap();
        assert!(stats.point > 0.98, "{stats:?}");
        assert!(stats.std_dev > 0.0 && stats.std_dev < 0.05, "{stats:?}");
        // Determinism.
        let again = bootstrap_fidelity(&counts, BellKind::PhiPlus, 24, 99).unwrap();
        assert_eq!(stats.std_dev, again.std_dev);
    }

    #[test]
    fn csv_round_trip_preserves_settings() {
        let counts = simulate_counts(
            &werner_state(0.9).unwrap(),
            &james_16_settings(),
            1e4,
            3,
        )
        .unwrap();
        let csv = write_tomography_csv(&counts);
        let back = read_tomography_csv(csv.as_bytes()).unwrap();
        assert_eq!(back.entries, counts.entries);
        let r = tomography_mle(&back).unwrap();
        r.rho.validate().unwrap();
    }
}
