//! Lines of curvature on the truncated catenoid.

use std::f64::consts::PI;

use spacelike_core::catalog;
use spacelike_core::field::CurvatureField;
use spacelike_core::lines::{line_field, trace, trace_residual, trace_through, Family, Sense, StopReason, TraceConfig};
use spacelike_core::Param;

fn seeds(n: usize) -> Vec<Param> {
    (0..n)
        .map(|k| {
            let t = (k as f64 + 0.5) / n as f64;
            Param::new(0.5 + t, t * 2.0 * PI / 3.0)
        })
        .collect()
}

#[test]
fn traces_run_boundary_to_boundary() {
    let cat = catalog::truncated_catenoid(1.0, (0.5, 1.5), 2.0 * PI / 3.0).unwrap();
    let config = TraceConfig::for_domain(cat.patch.domain());
    for family in [Family::First, Family::Second] {
        for s in seeds(10) {
            let t = trace_through(&cat.patch, s, family, &config).unwrap();
            assert_eq!(t.stop, StopReason::Boundary);
            let lambda2 = cat.patch.forms(s).unwrap().first.uu;
            assert!(trace_residual(&cat.patch, &t).unwrap() <= 1e-6 * lambda2);
        }
    }
}

#[test]
fn reversal_retraces_the_curve() {
    let cat = catalog::truncated_catenoid(1.0, (0.5, 1.5), 2.0 * PI / 3.0).unwrap();
    let config = TraceConfig::for_domain(cat.patch.domain());
    for s in seeds(5) {
        let fwd = trace(&cat.patch, s, Family::First, Sense::Forward, &config).unwrap();
        let back = trace(&cat.patch, fwd.end(), Family::First, Sense::Backward, &config).unwrap();
        // the reverse trace passes back through the seed
        let miss = back.points.iter().map(|p| p.distance(s)).fold(f64::INFINITY, f64::min);
        assert!(miss < 2.0 * config.step, "{miss}");
    }
}

#[test]
fn families_are_orthogonal() {
    let cat = catalog::truncated_catenoid(1.0, (0.5, 1.5), 2.0 * PI / 3.0).unwrap();
    for p in cat.patch.domain().grid(9) {
        let forms = cat.patch.forms(p).unwrap();
        let (d1, d2) = line_field(&forms, 1e-8).unwrap().unwrap();
        let cos = forms.first.apply(d1, d2) / (forms.first.norm(d1) * forms.first.norm(d2));
        assert!(cos.abs() <= 1e-4);
    }
}
