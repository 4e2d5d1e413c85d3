//! Sampled 1-D/2-D intensity scans with axis metadata and CSV/JSON export.

use serde::{Deserialize, Serialize};

use crate::dispersion::CrystalSpec;
use crate::error::{Error, Result};

/// A labeled, strictly increasing sample grid.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Axis {
    pub label: String,
    pub unit: String,
    pub values: Vec<f64>,
}

impl Axis {
    pub fn new(label: impl Into<String>, unit: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::domain("axis needs at least two samples"));
        }
        if values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::domain("axis grid must be strictly increasing"));
        }
        Ok(Axis {
            label: label.into(),
            unit: unit.into(),
            values,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Evenly spaced grid helper.
pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    assert!(points >= 2, "need at least two points");
    let step = (hi - lo) / (points - 1) as f64;
    (0..points)
        .map(|i| {
            if i == points - 1 {
                hi
            } else {
                lo + step * i as f64
            }
        })
        .collect()
}

/// Log-spaced grid helper.
pub fn logspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    assert!(points >= 2 && lo > 0.0 && hi > lo);
    let ratio = (hi / lo).ln() / (points - 1) as f64;
    (0..points)
        .map(|i| {
            if i == points - 1 {
                hi
            } else {
                lo * (ratio * i as f64).exp()
            }
        })
        .collect()
}

/// Snapshot of the crystal and pump under which a scan was produced.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ScanMeta {
    pub crystal_length_mm: f64,
    pub poling_period_um: f64,
    pub temperature_c: f64,
    pub sellmeier_set: String,
    pub pump_nm: f64,
}

impl ScanMeta {
    pub fn from_spec(spec: &CrystalSpec, lambda_p_m: f64) -> Self {
        ScanMeta {
            crystal_length_mm: spec.length_m * 1e3,
            poling_period_um: spec.poling_period_m * 1e6,
            temperature_c: spec.temperature_c,
            sellmeier_set: spec.sellmeier.name.clone(),
            pump_nm: lambda_p_m * 1e9,
        }
    }
}

/// Normalized non-negative intensity samples over one or two axes.
/// Values are stored row-major with axis1 as the slow index.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SpectralScan {
    pub axis1: Axis,
    pub axis2: Option<Axis>,
    pub values: Vec<f64>,
    pub metadata: ScanMeta,
}

impl SpectralScan {
    /// Build a normalized scan from raw non-negative samples. Errors if the
    /// scan is identically zero or sized inconsistently.
    pub fn normalized(
        axis1: Axis,
        axis2: Option<Axis>,
        mut raw: Vec<f64>,
        metadata: ScanMeta,
    ) -> Result<Self> {
        let expect = axis1.len() * axis2.as_ref().map_or(1, Axis::len);
        if raw.len() != expect {
            return Err(Error::domain(format!(
                "value count {} does not match grid size {expect}",
                raw.len()
            )));
        }
        if raw.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::domain("scan values must be finite and non-negative"));
        }
        let max = raw.iter().copied().fold(0.0_f64, f64::max);
        if max == 0.0 {
            return Err(Error::domain("scan is identically zero"));
        }
        for v in &mut raw {
            *v /= max;
        }
        Ok(SpectralScan {
            axis1,
            axis2,
            values: raw,
            metadata,
        })
    }

    /// Value at index `i` of a 1-D scan.
    pub fn value(&self, i: usize) -> f64 {
        self.values[i]
    }

    /// Value at `(i, j)` of a 2-D scan (axis1 index `i`).
    pub fn value2(&self, i: usize, j: usize) -> f64 {
        let n2 = self.axis2.as_ref().expect("2-D scan").len();
        self.values[i * n2 + j]
    }

    pub fn max_position(&self) -> usize {
        self.values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .expect("non-empty scan")
    }

    /// CSV rendering: header row with axis labels and units, one row per
    /// grid point, LF line endings, '.' decimals.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        match &self.axis2 {
            None => {
                out.push_str(&format!(
                    "{} [{}],intensity\n",
                    self.axis1.label, self.axis1.unit
                ));
                for (x, v) in self.axis1.values.iter().zip(&self.values) {
                    out.push_str(&format!("{x},{v}\n"));
                }
            }
            Some(ax2) => {
                out.push_str(&format!(
                    "{} [{}],{} [{}],intensity\n",
                    self.axis1.label, self.axis1.unit, ax2.label, ax2.unit
                ));
                for (i, x) in self.axis1.values.iter().enumerate() {
                    for (j, y) in ax2.values.iter().enumerate() {
                        out.push_str(&format!("{x},{y},{}\n", self.value2(i, j)));
                    }
                }
            }
        }
        out
    }

    /// JSON rendering with stable key order.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scan serializes")
    }

    pub fn from_json(doc: &str) -> Result<Self> {
        serde_json::from_str(doc).map_err(|e| Error::parse(format!("scan: {e}")))
    }
}
