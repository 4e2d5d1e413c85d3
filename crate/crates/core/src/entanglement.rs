//! Two-qubit polarization states: Bell/Werner density matrices, projective
//! polarization correlations, visibilities and CHSH combinations.
//!
//! Basis order is {HH, HV, VH, VV}. An analyzer angle is the linear
//! polarizer orientation from H; D/A are +-45 degrees, R/L the circular
//! states (R = (H - iV)/sqrt(2)).

use nalgebra::{SMatrix, SVector};
use num_complex::Complex64;
use serde_json::json;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type Matrix4c = SMatrix<C64, 4, 4>;
pub type Vector4c = SVector<C64, 4>;
pub type Vector2c = SVector<C64, 2>;

const HERMITICITY_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const PSD_TOL: f64 = -1e-10;

/// Validated 4x4 two-qubit density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: Matrix4c,
}

impl DensityMatrix {
    /// Build with invariant checks (Hermitian, unit trace, PSD).
    pub fn new(m: Matrix4c) -> Result<Self> {
        let dm = DensityMatrix { m };
        dm.validate()?;
        Ok(dm)
    }

    /// Pure state from a normalized 4-vector.
    pub fn from_pure(v: &Vector4c) -> Result<Self> {
        let norm: f64 = v.iter().map(|c| c.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::domain("state vector is not normalized"));
        }
        Self::new(v * v.adjoint())
    }

    pub fn matrix(&self) -> &Matrix4c {
        &self.m
    }

    pub fn validate(&self) -> Result<()> {
        let dev = self.hermiticity_deviation();
        if dev > HERMITICITY_TOL {
            return Err(Error::domain(format!(
                "density matrix not Hermitian (deviation {dev:e})"
            )));
        }
        let tr = self.trace_real();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::domain(format!("density matrix trace {tr} != 1")));
        }
        let min = self.min_eigenvalue();
        if min < PSD_TOL {
            return Err(Error::domain(format!(
                "density matrix not positive semidefinite (min eigenvalue {min:e})"
            )));
        }
        Ok(())
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev = 0.0_f64;
        for i in 0..4 {
            for j in 0..4 {
                dev = dev.max((self.m[(i, j)] - self.m[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn trace_real(&self) -> f64 {
        (0..4).map(|i| self.m[(i, i)].re).sum()
    }

    /// Smallest eigenvalue via the real symmetric embedding
    /// [[Re, -Im], [Im, Re]] of the Hermitian matrix.
    pub fn min_eigenvalue(&self) -> f64 {
        let mut big = SMatrix::<f64, 8, 8>::zeros();
        for i in 0..4 {
            for j in 0..4 {
                let z = self.m[(i, j)];
                big[(i, j)] = z.re;
                big[(i + 4, j + 4)] = z.re;
                big[(i + 4, j)] = z.im;
                big[(i, j + 4)] = -z.im;
            }
        }
        let eig = big.symmetric_eigen();
        eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Purity Tr(rho^2).
    pub fn purity(&self) -> f64 {
        (self.m * self.m).trace().re
    }

    /// JSON document: matrix as [re, im] pairs plus an invariant report.
    pub fn to_json_value(&self) -> serde_json::Value {
        let rows: Vec<Vec<[f64; 2]>> = (0..4)
            .map(|i| (0..4).map(|j| [self.m[(i, j)].re, self.m[(i, j)].im]).collect())
            .collect();
        json!({
            "basis": ["HH", "HV", "VH", "VV"],
            "matrix": rows,
            "checks": {
                "hermiticity_deviation": self.hermiticity_deviation(),
                "trace": self.trace_real(),
                "min_eigenvalue": self.min_eigenvalue(),
                "purity": self.purity(),
            },
        })
    }

    pub fn from_json_value(v: &serde_json::Value) -> Result<Self> {
        let rows = v
            .get("matrix")
            .and_then(|m| m.as_array())
            .ok_or_else(|| Error::parse("density matrix JSON lacks 'matrix'"))?;
        if rows.len() != 4 {
            return Err(Error::parse("density matrix must have 4 rows"));
        }
        let mut m = Matrix4c::zeros();
        for (i, row) in rows.iter().enumerate() {
            let cells = row
                .as_array()
                .filter(|c| c.len() == 4)
                .ok_or_else(|| Error::parse("density matrix rows need 4 cells"))?;
            for (j, cell) in cells.iter().enumerate() {
                let pair = cell
                    .as_array()
                    .filter(|p| p.len() == 2)
                    .ok_or_else(|| Error::parse("cells must be [re, im]"))?;
                m[(i, j)] = C64::new(
                    pair[0].as_f64().unwrap_or(f64::NAN),
                    pair[1].as_f64().unwrap_or(f64::NAN),
                );
            }
        }
        Self::new(m)
    }
}

/// Maximally entangled target states (|HH> +- |VV>)/sqrt(2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellKind {
    PhiPlus,
    PhiMinus,
}

impl BellKind {
    pub fn state_vector(&self) -> Vector4c {
        let a = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let s = match self {
            BellKind::PhiPlus => a,
            BellKind::PhiMinus => -a,
        };
        Vector4c::new(a, C64::new(0.0, 0.0), C64::new(0.0, 0.0), s)
    }
}

/// Pure Bell-state density matrix.
pub fn bell_state(kind: BellKind) -> DensityMatrix {
    DensityMatrix::from_pure(&kind.state_vector()).expect("Bell state is physical")
}

/// Werner state `V |Phi+><Phi+| + (1 - V) I / 4`.
pub fn werner_state(visibility: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&visibility) {
        return Err(Error::domain("Werner visibility must lie in [0, 1]"));
    }
    let phi = bell_state(BellKind::PhiPlus);
    let m = phi.matrix() * C64::new(visibility, 0.0)
        + Matrix4c::identity() * C64::new((1.0 - visibility) / 4.0, 0.0);
    DensityMatrix::new(m)
}

/// One polarization analyzer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Analyzer {
    /// Linear polarizer at this angle (radians) from H.
    Linear(f64),
    /// R = (H - iV)/sqrt(2).
    RightCircular,
    /// L = (H + iV)/sqrt(2).
    LeftCircular,
}

impl Analyzer {
    pub fn jones(&self) -> Vector2c {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        match *self {
            Analyzer::Linear(theta) => {
                Vector2c::new(C64::new(theta.cos(), 0.0), C64::new(theta.sin(), 0.0))
            }
            Analyzer::RightCircular => Vector2c::new(C64::new(r, 0.0), C64::new(0.0, -r)),
            Analyzer::LeftCircular => Vector2c::new(C64::new(r, 0.0), C64::new(0.0, r)),
        }
    }

    /// Orthogonal analyzer (transmitted -> rejected port).
    pub fn orthogonal(&self) -> Analyzer {
        match *self {
            Analyzer::Linear(theta) => Analyzer::Linear(theta + std::f64::consts::FRAC_PI_2),
            Analyzer::RightCircular => Analyzer::LeftCircular,
            Analyzer::LeftCircular => Analyzer::RightCircular,
        }
    }
}

/// A pair of analyzers, one per arm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementSetting {
    pub a: Analyzer,
    pub b: Analyzer,
}

impl MeasurementSetting {
    pub fn linear(theta_a: f64, theta_b: f64) -> Self {
        MeasurementSetting {
            a: Analyzer::Linear(theta_a),
            b: Analyzer::Linear(theta_b),
        }
    }

    /// Two-qubit state |a> kron |b>.
    pub fn state_vector(&self) -> Vector4c {
        let a = self.a.jones();
        let b = self.b.jones();
        Vector4c::new(
            a[0] * b[0],
            a[0] * b[1],
            a[1] * b[0],
            a[1] * b[1],
        )
    }

    /// Rank-1 projector onto the setting.
    pub fn projector(&self) -> Matrix4c {
        let v = self.state_vector();
        v * v.adjoint()
    }

    /// Coincidence probability Tr(rho Pi).
    pub fn probability(&self, rho: &DensityMatrix) -> f64 {
        let v = self.state_vector();
        (v.adjoint() * rho.matrix() * v)[(0, 0)].re
    }
}

/// Polarization-correlation fringe at fixed analyzer A.
#[derive(Debug, Clone)]
pub struct CorrelationCurve {
    pub theta_a_rad: f64,
    pub theta_b_rad: Vec<f64>,
    /// Raw coincidence probabilities.
    pub probabilities: Vec<f64>,
    /// Probabilities normalized to a maximum of 1.
    pub normalized: Vec<f64>,
    /// (max - min) / (max + min) of the raw fringe.
    pub visibility: f64,
}

/// Scan analyzer B with A fixed and report the fringe plus visibility.
pub fn correlation_curve(
    rho: &DensityMatrix,
    theta_a_rad: f64,
    theta_b_grid_rad: &[f64],
) -> Result<CorrelationCurve> {
    if theta_b_grid_rad.len() < 2 {
        return Err(Error::precondition("need at least two analyzer angles"));
    }
    let probabilities: Vec<f64> = theta_b_grid_rad
        .iter()
        .map(|&tb| MeasurementSetting::linear(theta_a_rad, tb).probability(rho))
        .collect();
    let max = probabilities.iter().copied().fold(f64::MIN, f64::max);
    let min = probabilities.iter().copied().fold(f64::MAX, f64::min);
    if max <= 0.0 {
        return Err(Error::domain("correlation fringe is identically zero"));
    }
    let visibility = (max - min) / (max + min);
    let normalized = probabilities.iter().map(|p| p / max).collect();
    Ok(CorrelationCurve {
        theta_a_rad,
        theta_b_rad: theta_b_grid_rad.to_vec(),
        probabilities,
        normalized,
        visibility,
    })
}

/// Correlation coefficient E(a, b) from the four projective coincidence
/// probabilities of a setting and its orthogonal complements.
pub fn correlation_coefficient(rho: &DensityMatrix, setting: &MeasurementSetting) -> f64 {
    let a = setting.a;
    let b = setting.b;
    let p = |x: Analyzer, y: Analyzer| MeasurementSetting { a: x, b: y }.probability(rho);
    let (ao, bo) = (a.orthogonal(), b.orthogonal());
    p(a, b) + p(ao, bo) - p(a, bo) - p(ao, b)
}

/// The canonical CHSH analyzer pairs (a, b), (a, b'), (a', b), (a', b').
pub fn canonical_chsh_settings() -> [(f64, f64); 4] {
    use std::f64::consts::PI;
    [
        (0.0, PI / 8.0),
        (0.0, 3.0 * PI / 8.0),
        (PI / 4.0, PI / 8.0),
        (PI / 4.0, 3.0 * PI / 8.0),
    ]
}

/// CHSH combination `|E(a,b) - E(a,b') + E(a',b) + E(a',b')|` for four
/// analyzer-angle pairs in that order.
pub fn chsh(rho: &DensityMatrix, pairs: &[(f64, f64); 4]) -> f64 {
    let e = |p: (f64, f64)| {
        correlation_coefficient(rho, &MeasurementSetting::linear(p.0, p.1))
    };
    (e(pairs[0]) - e(pairs[1]) + e(pairs[2]) + e(pairs[3])).abs()
}

/// CHSH estimate from fringe visibilities, `S = 2 sqrt(2) mean(V)`, with
/// first-order Poisson error propagation when per-basis count totals are
/// supplied (`sigma_V = sqrt((1 - V^2)/N)`).
pub fn chsh_from_visibility(
    visibilities: &[f64],
    count_totals: Option<&[f64]>,
) -> Result<(f64, Option<f64>)> {
    if visibilities.is_empty() {
        return Err(Error::precondition("need at least one visibility"));
    }
    if visibilities.iter().any(|v| !(0.0..=1.0).contains(v)) {
        return Err(Error::precondition("visibilities must lie in [0, 1]"));
    }
    let mean = visibilities.iter().sum::<f64>() / visibilities.len() as f64;
    let s = 2.0 * std::f64::consts::SQRT_2 * mean;
    let sigma = match count_totals {
        None => None,
        Some(totals) => {
            if totals.len() != visibilities.len() {
                return Err(Error::precondition(
                    "count totals must match the visibility list",
                ));
            }
            if totals.iter().any(|&n| n <= 0.0) {
                return Err(Error::precondition("count totals must be positive"));
            }
            let var: f64 = visibilities
                .iter()
                .zip(totals)
                .map(|(&v, &n)| (1.0 - v * v) / n)
                .sum();
            // S = (sqrt(2)/2) * sum(V_k) for 4 settings.
            let scale = 2.0 * std::f64::consts::SQRT_2 / visibilities.len() as f64;
            Some(scale * var.sqrt())
        }
    };
    Ok((s, sigma))
}

/// Fidelity `<Phi| rho |Phi>` with a pure Bell target.
pub fn fidelity(rho: &DensityMatrix, target: BellKind) -> f64 {
    let v = target.state_vector();
    (v.adjoint() * rho.matrix() * v)[(0, 0)].re
}
