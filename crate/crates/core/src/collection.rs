//! Collection optics: Gaussian-beam propagation through lens trains,
//! single-mode coupling of the photon waist distribution, and the counting
//! arithmetic (heralding efficiency, spectral brightness, source reports).

use std::f64::consts::PI;
use std::io::Read;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::overlap::WaistDistribution;

/// Waist of a beam focused by a lens with the input waist at the front
/// focal plane: `w0 = M^2 lambda f / (pi w_in)`.
pub fn focused_waist(w_in_m: f64, focal_m: f64, lambda_m: f64, m_squared: f64) -> f64 {
    m_squared * lambda_m * focal_m / (PI * w_in_m)
}

/// A Gaussian beam described by its waist and waist location along the axis.
/// Positions are relative to the current reference plane (positive =
/// downstream).
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct GaussianBeam {
    pub wavelength_m: f64,
    pub waist_radius_m: f64,
    pub waist_position_m: f64,
    pub m_squared: f64,
}

impl GaussianBeam {
    pub fn new(
        wavelength_m: f64,
        waist_radius_m: f64,
        waist_position_m: f64,
        m_squared: f64,
    ) -> Result<Self> {
        if wavelength_m <= 0.0 || waist_radius_m <= 0.0 {
            return Err(Error::domain("wavelength and waist must be positive"));
        }
        if m_squared < 1.0 {
            return Err(Error::domain("M^2 must be at least 1"));
        }
        Ok(GaussianBeam {
            wavelength_m,
            waist_radius_m,
            waist_position_m,
            m_squared,
        })
    }

    /// Rayleigh range `pi w^2 / (M^2 lambda)`.
    pub fn rayleigh_range_m(&self) -> f64 {
        PI * self.waist_radius_m * self.waist_radius_m / (self.m_squared * self.wavelength_m)
    }
}

/// One element of an optical train.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub enum TrainElement {
    FreeSpace { length_m: f64 },
    ThinLens { focal_length_m: f64 },
}

/// Ordered sequence of propagation elements.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
pub struct OpticalTrain(pub Vec<TrainElement>);

impl OpticalTrain {
    pub fn validate(&self) -> Result<()> {
        for e in &self.0 {
            match *e {
                TrainElement::FreeSpace { length_m } => {
                    if length_m < 0.0 {
                        return Err(Error::domain("free-space lengths must be non-negative"));
                    }
                }
                TrainElement::ThinLens { focal_length_m } => {
                    if focal_length_m == 0.0 {
                        return Err(Error::domain("focal lengths must be nonzero"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Concatenate two trains.
    pub fn then(&self, other: &OpticalTrain) -> OpticalTrain {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        OpticalTrain(v)
    }
}

/// Result of a propagation, with a numerical-regime flag for collapsing
/// waists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Propagated {
    pub beam: GaussianBeam,
    /// Set when the output waist falls below 0.1 um.
    pub waist_warning: bool,
}

/// Propagate a beam through a train via the complex beam parameter
/// `q = (z - z0) + i zR`: free space adds its length, a thin lens applies
/// `1/q' = 1/q - 1/f`. The output beam is referenced to the train's exit
/// plane.
pub fn propagate(beam: &GaussianBeam, train: &OpticalTrain) -> Result<Propagated> {
    train.validate()?;
    let mut q = Complex64::new(-beam.waist_position_m, beam.rayleigh_range_m());
    for e in &train.0 {
        match *e {
            TrainElement::FreeSpace { length_m } => q += length_m,
            TrainElement::ThinLens { focal_length_m } => {
                q = 1.0 / (1.0 / q - 1.0 / focal_length_m);
            }
        }
    }
    let z_r = q.im;
    if z_r <= 0.0 {
        return Err(Error::Numerical {
            message: "beam parameter degenerated (non-positive Rayleigh range)".into(),
            estimate: z_r,
            bound: f64::INFINITY,
        });
    }
    let waist = (beam.m_squared * beam.wavelength_m * z_r / PI).sqrt();
    let out = GaussianBeam {
        wavelength_m: beam.wavelength_m,
        waist_radius_m: waist,
        waist_position_m: -q.re,
        m_squared: beam.m_squared,
    };
    Ok(Propagated {
        beam: out,
        waist_warning: waist < 0.1e-6,
    })
}

/// Back-propagated collection-mode waist at the crystal for a fiber mode
/// imaged by collimator `f_c` and collimation lens `f'`: the f-f telescope
/// gives `w_c = w_fiber * f' / f_c` independent of wavelength.
pub fn collection_mode_waist(fiber_mfr_m: f64, collimator_f_m: f64, collimation_f_m: f64) -> f64 {
    fiber_mfr_m * collimation_f_m / collimator_f_m
}

/// Power coupling of two co-focused fundamental Gaussians of waists `w1`,
/// `w2`: `(2 w1 w2 / (w1^2 + w2^2))^2`.
pub fn mode_overlap(w1_m: f64, w2_m: f64) -> f64 {
    let r = 2.0 * w1_m * w2_m / (w1_m * w1_m + w2_m * w2_m);
    r * r
}

/// Weight-averaged single-mode coupling efficiency of a photon waist
/// distribution against a collection mode of waist `collection_waist_m`.
pub fn coupling_efficiency(dist: &WaistDistribution, collection_waist_m: f64) -> Result<f64> {
    if collection_waist_m <= 0.0 {
        return Err(Error::domain("collection waist must be positive"));
    }
    Ok(dist
        .waists_m
        .iter()
        .zip(&dist.weights)
        .map(|(&w, &p)| p * mode_overlap(w, collection_waist_m))
        .sum())
}

/// Single/coincidence counting record with channel constants.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CountRecord {
    pub label: String,
    /// Signal singles (counts/s).
    pub c_s: f64,
    /// Idler singles (counts/s).
    pub c_i: f64,
    /// Coincidences (counts/s).
    pub c_c: f64,
    pub pump_power_mw: f64,
    pub bandwidth_nm: f64,
    /// Channel transmissions.
    pub t_s: f64,
    pub t_i: f64,
    /// Detector efficiencies.
    pub d_s: f64,
    pub d_i: f64,
}

impl CountRecord {
    pub fn validate(&self) -> Result<()> {
        if self.c_s < 0.0 || self.c_i < 0.0 || self.c_c < 0.0 {
            return Err(Error::domain("counts must be non-negative"));
        }
        if self.c_c > self.c_s.min(self.c_i) {
            return Err(Error::domain(format!(
                "record '{}': coincidences exceed the smaller singles rate",
                self.label
            )));
        }
        for (name, v) in [
            ("T_s", self.t_s),
            ("T_i", self.t_i),
            ("D_s", self.d_s),
            ("D_i", self.d_i),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::domain(format!(
                    "record '{}': {name} = {v} outside [0, 1]",
                    self.label
                )));
            }
        }
        Ok(())
    }
}

/// Heralding efficiency `C_c / sqrt(C_s C_i)`.
pub fn heralding_efficiency(rec: &CountRecord) -> Result<f64> {
    rec.validate()?;
    if rec.c_s <= 0.0 || rec.c_i <= 0.0 {
        return Err(Error::domain("singles rates must be positive"));
    }
    Ok(rec.c_c / (rec.c_s * rec.c_i).sqrt())
}

/// Result of removing channel/detector constants from the heralding
/// efficiency via `eta_h = sqrt(T_s T_i eta_s eta_i D_s D_i)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeraldingDecomposition {
    /// Product eta_s * eta_i (always available).
    pub eta_product: f64,
    /// Per-arm efficiencies when equal coupling is assumed.
    pub eta_s: Option<f64>,
    pub eta_i: Option<f64>,
    /// Set when the inferred efficiency exceeds 1 (inconsistent T/D inputs);
    /// values are returned unclamped.
    pub inconsistent: bool,
}

/// Solve the heralding relation for the fiber-coupling efficiencies.
pub fn decompose_heralding(rec: &CountRecord, assume_equal: bool) -> Result<HeraldingDecomposition> {
    if rec.t_s <= 0.0 || rec.t_i <= 0.0 || rec.d_s <= 0.0 || rec.d_i <= 0.0 {
        return Err(Error::domain("transmissions and efficiencies must be positive"));
    }
    let eta_h = heralding_efficiency(rec)?;
    let eta_product = eta_h * eta_h / (rec.t_s * rec.t_i * rec.d_s * rec.d_i);
    let (eta_s, eta_i) = if assume_equal {
        let e = eta_product.sqrt();
        (Some(e), Some(e))
    } else {
        (None, None)
    };
    Ok(HeraldingDecomposition {
        eta_product,
        eta_s,
        eta_i,
        inconsistent: eta_product > 1.0,
    })
}

/// Spectral brightness `C_c / (dlambda * P_p)` in MHz/mW/nm.
pub fn spectral_brightness(rec: &CountRecord) -> Result<f64> {
    if rec.pump_power_mw <= 0.0 || rec.bandwidth_nm <= 0.0 {
        return Err(Error::domain("pump power and bandwidth must be positive"));
    }
    Ok(rec.c_c / (rec.bandwidth_nm * rec.pump_power_mw) / 1e6)
}

/// One row of a source comparison report.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SourceReportRow {
    pub label: String,
    pub bandwidth_nm: f64,
    /// MHz/mW/nm.
    pub brightness: f64,
    /// Definition (i): C_c / C_s.
    pub eta_h_ratio: f64,
    /// Definition (ii): C_c / sqrt(C_s C_i).
    pub eta_h_geometric: f64,
    /// Flagged from the record label (multimode-fiber rows).
    pub non_smf: bool,
}

/// Brightness/heralding comparison across labeled records, brightest first.
pub fn source_report(records: &[CountRecord]) -> Result<Vec<SourceReportRow>> {
    let mut rows = Vec::with_capacity(records.len());
    for rec in records {
        rec.validate()?;
        rows.push(SourceReportRow {
            label: rec.label.clone(),
            bandwidth_nm: rec.bandwidth_nm,
            brightness: spectral_brightness(rec)?,
            eta_h_ratio: if rec.c_s > 0.0 { rec.c_c / rec.c_s } else { 0.0 },
            eta_h_geometric: heralding_efficiency(rec)?,
            non_smf: rec.label.to_lowercase().contains("mmf"),
        });
    }
    rows.sort_by(|a, b| b.brightness.total_cmp(&a.brightness));
    Ok(rows)
}

/// CSV header for count-record ingestion.
pub const COUNT_RECORD_HEADER: &str = "label,C_s,C_i,C_c,P_p_mW,dlambda_nm,T_s,T_i,D_s,D_i";

/// Read count records from CSV with the documented column set.
pub fn read_count_records<R: Read>(reader: R) -> Result<Vec<CountRecord>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::parse(format!("count records: {e}")))?
        .clone();
    let expected: Vec<&str> = COUNT_RECORD_HEADER.split(',').collect();
    let got: Vec<&str> = headers.iter().collect();
    if got != expected {
        return Err(Error::parse(format!(
            "count records: expected header '{COUNT_RECORD_HEADER}', got '{}'",
            got.join(",")
        )));
    }
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(|e| Error::parse(format!("count records: {e}")))?;
        let num = |i: usize| -> Result<f64> {
            row.get(i)
                .ok_or_else(|| Error::parse("count records: short row"))?
                .parse::<f64>()
                .map_err(|e| Error::parse(format!("count records: column {i}: {e}")))
        };
        let rec = CountRecord {
            label: row.get(0).unwrap_or("").to_string(),
            c_s: num(1)?,
            c_i: num(2)?,
            c_c: num(3)?,
            pump_power_mw: num(4)?,
            bandwidth_nm: num(5)?,
            t_s: num(6)?,
            t_i: num(7)?,
            d_s: num(8)?,
            d_i: num(9)?,
        };
        rec.validate()?;
        out.push(rec);
    }
    Ok(out)
}

/// Render a report as CSV.
pub fn render_report_csv(rows: &[SourceReportRow]) -> String {
    let mut out =
        String::from("label,dlambda_nm,B_MHz_mW_nm,eta_h_ratio,eta_h_geometric,non_smf\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.label, r.bandwidth_nm, r.brightness, r.eta_h_ratio, r.eta_h_geometric, r.non_smf
        ));
    }
    out
}

/// Render a report as an aligned text table.
pub fn render_report_table(rows: &[SourceReportRow]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<28} {:>10} {:>14} {:>10} {:>10} {:>8}\n",
        "label", "dl [nm]", "B [MHz/mW/nm]", "eta_h(i)", "eta_h(ii)", "fiber"
    ));
    for r in rows {
        out.push_str(&format!(
            "{:<28} {:>10.3} {:>14.4} {:>10.4} {:>10.4} {:>8}\n",
            r.label,
            r.bandwidth_nm,
            r.brightness,
            r.eta_h_ratio,
            r.eta_h_geometric,
            if r.non_smf { "MMF" } else { "SMF" }
        ));
    }
    out
}
