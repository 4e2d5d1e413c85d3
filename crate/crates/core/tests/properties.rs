//! Property-based invariants across the numerical modules.

use proptest::prelude::*;

use spdc_core::collection::{
    coupling_efficiency, heralding_efficiency, propagate, spectral_brightness, CountRecord,
    GaussianBeam, OpticalTrain, TrainElement,
};
use spdc_core::dispersion::{idler_wavelength, CrystalSpec};
use spdc_core::entanglement::{bell_state, fidelity, werner_state, BellKind, Matrix4c};
use spdc_core::overlap::{overlap_amplitude_with, OverlapModel, WaistTriple, WaistDistribution};
use spdc_core::phasematch::collinear_intensities;
use spdc_core::scan::linspace;
use spdc_core::tomography::{james_16_settings, tomography_mle, TomographyCounts, TomographyEntry};

const LP: f64 = 405.143e-9;

fn spec() -> CrystalSpec {
    CrystalSpec::ppktp(0.030, 29.3)
}

#[test]
fn spectrum_invariant_under_relabeling() {
    // The sinc^2 value at a signal wavelength equals the value at its
    // conjugate mapped back onto a dense grid.
    let s = spec();
    let grid = linspace(788.0, 833.0, 22_501);
    let vals = collinear_intensities(&s, LP, &grid).unwrap();
    let step = grid[1] - grid[0];
    let mut checked = 0;
    for (i, &nm) in grid.iter().enumerate().step_by(50) {
        let conj_nm = idler_wavelength(LP, nm * 1e-9).unwrap() * 1e9;
        if conj_nm <= grid[0] || conj_nm >= *grid.last().unwrap() {
            continue;
        }
        let pos = (conj_nm - grid[0]) / step;
        let j = pos.floor() as usize;
        let frac = pos - j as f64;
        let interp = vals[j] * (1.0 - frac) + vals[j + 1] * frac;
        assert!(
            (interp - vals[i]).abs() < 1e-6,
            "relabel mismatch at {nm} nm: {} vs {}",
            vals[i],
            interp
        );
        checked += 1;
    }
    assert!(checked > 300, "only {checked} points checked");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn quadrature_monotone_convergence(
        wp in 12e-6..90e-6_f64,
        ws in 12e-6..90e-6_f64,
        det in -8.0..8.0_f64,
    ) {
        // Halving the tolerance never moves the amplitude by more than the
        // prior error bound.
        let s = spec();
        let w = WaistTriple::symmetric(wp, ws).unwrap();
        let ls = (796.0 + det) * 1e-9;
        let li = idler_wavelength(LP, ls).unwrap();
        let loose = overlap_amplitude_with(
            &s,
            &OverlapModel { quad_rel_tol: 1e-6, ..OverlapModel::default() },
            LP, ls, li, &w,
        ).unwrap();
        let tight = overlap_amplitude_with(
            &s,
            &OverlapModel { quad_rel_tol: 5e-7, ..OverlapModel::default() },
            LP, ls, li, &w,
        ).unwrap();
        let moved = (loose.value - tight.value).norm();
        prop_assert!(
            moved <= loose.error_bound.max(1e-14 * loose.value.norm()),
            "moved {moved:e} vs bound {:e}", loose.error_bound
        );
    }

    #[test]
    fn coupling_scale_invariance(
        w1 in 5e-6..80e-6_f64,
        w2 in 5e-6..80e-6_f64,
        w3 in 5e-6..80e-6_f64,
        wc in 5e-6..80e-6_f64,
        scale in 0.2..5.0_f64,
        p1 in 0.01..1.0_f64,
        p2 in 0.01..1.0_f64,
        p3 in 0.01..1.0_f64,
    ) {
        let d1 = WaistDistribution::new(vec![w1, w2, w3], vec![p1, p2, p3]).unwrap();
        let d2 = WaistDistribution::new(
            vec![w1 * scale, w2 * scale, w3 * scale],
            vec![p1, p2, p3],
        ).unwrap();
        let a = coupling_efficiency(&d1, wc).unwrap();
        let b = coupling_efficiency(&d2, wc * scale).unwrap();
        prop_assert!((a - b).abs() < 1e-12, "{a} vs {b}");
    }

    #[test]
    fn propagation_composes(
        waist in 5e-6..2e-3_f64,
        pos in -0.5..0.5_f64,
        d1 in 0.0..0.6_f64,
        f1 in 0.02..0.5_f64,
        d2 in 0.0..0.6_f64,
        f2 in 0.02..0.5_f64,
        negate in proptest::bool::ANY,
    ) {
        let beam = GaussianBeam::new(810e-9, waist, pos, 1.0).unwrap();
        let focal2 = if negate { -f2 } else { f2 };
        let t1 = OpticalTrain(vec![
            TrainElement::FreeSpace { length_m: d1 },
            TrainElement::ThinLens { focal_length_m: f1 },
        ]);
        let t2 = OpticalTrain(vec![
            TrainElement::FreeSpace { length_m: d2 },
            TrainElement::ThinLens { focal_length_m: focal2 },
        ]);
        let joint = propagate(&beam, &t1.then(&t2)).unwrap().beam;
        let staged = propagate(&propagate(&beam, &t1).unwrap().beam, &t2).unwrap().beam;
        prop_assert!(
            (joint.waist_radius_m - staged.waist_radius_m).abs()
                <= 1e-12 * joint.waist_radius_m.max(1e-9)
        );
        prop_assert!(
            (joint.waist_position_m - staged.waist_position_m).abs()
                <= 1e-12 * (1.0 + joint.waist_position_m.abs())
        );
    }

    #[test]
    fn heralding_stays_in_unit_interval(
        c_c in 0.0..1e6_f64,
        extra_s in 0.0..1e6_f64,
        extra_i in 0.0..1e6_f64,
    ) {
        let rec = CountRecord {
            label: "prop".into(),
            c_s: c_c + extra_s + 1.0,
            c_i: c_c + extra_i + 1.0,
            c_c,
            pump_power_mw: 0.01,
            bandwidth_nm: 4.9,
            t_s: 0.65,
            t_i: 0.70,
            d_s: 0.55,
            d_i: 0.51,
        };
        let eta = heralding_efficiency(&rec).unwrap();
        prop_assert!((0.0..=1.0).contains(&eta), "{eta}");
    }

    #[test]
    fn brightness_exactly_linear(
        c_c in 1.0..1e8_f64,
        p in 0.001..10.0_f64,
        dl in 0.1..20.0_f64,
        k in 1.5..4.0_f64,
    ) {
        let base = CountRecord {
            label: "prop".into(),
            c_s: c_c * 4.0,
            c_i: c_c * 4.0,
            c_c,
            pump_power_mw: p,
            bandwidth_nm: dl,
            t_s: 1.0,
            t_i: 1.0,
            d_s: 1.0,
            d_i: 1.0,
        };
        let b0 = spectral_brightness(&base).unwrap();
        let scaled_counts = CountRecord { c_c: k * c_c, c_s: 4.0 * k * c_c, c_i: 4.0 * k * c_c, ..base.clone() };
        prop_assert!((spectral_brightness(&scaled_counts).unwrap() - k * b0).abs() <= 1e-12 * k * b0);
        let scaled_power = CountRecord { pump_power_mw: k * p, ..base.clone() };
        prop_assert!((spectral_brightness(&scaled_power).unwrap() - b0 / k).abs() <= 1e-12 * b0);
        let scaled_band = CountRecord { bandwidth_nm: k * dl, ..base };
        prop_assert!((spectral_brightness(&scaled_band).unwrap() - b0 / k).abs() <= 1e-12 * b0);
    }

    #[test]
    fn fidelity_linear_in_state(a in 0.0..1.0_f64, v in 0.0..1.0_f64) {
        let r1 = bell_state(BellKind::PhiPlus);
        let r2 = werner_state(v).unwrap();
        let mixed = spdc_core::entanglement::DensityMatrix::new(
            r1.matrix() * num_complex::Complex64::new(a, 0.0)
                + r2.matrix() * num_complex::Complex64::new(1.0 - a, 0.0),
        ).unwrap();
        let lhs = fidelity(&mixed, BellKind::PhiPlus);
        let rhs = a * fidelity(&r1, BellKind::PhiPlus) + (1.0 - a) * fidelity(&r2, BellKind::PhiPlus);
        prop_assert!((lhs - rhs).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn mle_output_physical_for_arbitrary_counts(seed_counts in proptest::collection::vec(0u64..5000, 16)) {
        // Any non-degenerate count vector reconstructs to a physical state.
        prop_assume!(seed_counts.iter().sum::<u64>() > 0);
        let settings = james_16_settings();
        let entries: Vec<TomographyEntry> = settings
            .iter()
            .zip(&seed_counts)
            .map(|(ls, &count)| TomographyEntry {
                label: ls.label.clone(),
                setting: ls.setting,
                count,
            })
            .collect();
        let counts = TomographyCounts { entries, scale: 5000.0 };
        let r = tomography_mle(&counts).unwrap();
        prop_assert!(r.rho.validate().is_ok());
        let _ = Matrix4c::identity();
    }
}
