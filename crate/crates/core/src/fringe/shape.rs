//! Model-free fringe shape: peak, valley and steepest-slope readings.
//!
//! For the fringe `A[1 + e^{−ΓT} cos((ω − ℰ)T)]` the min/max ratio is
//! `(1 − e^{−ΓT})/(1 + e^{−ΓT})` and the slope-point/peak ratio is
//! `1/(1 + e^{−ΓT})`, independent of `A` and `ℰ`.

use serde::{Deserialize, Serialize};

use super::scan::FringeScan;
use crate::error::{Error, Result};

/// Minimum samples per fringe period `2π/T`.
pub const MIN_POINTS_PER_PERIOD: usize = 25;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapeMetrics {
    pub peak_omega_rad_s: f64,
    pub peak_value: f64,
    pub min_omega_rad_s: f64,
    pub min_value: f64,
    pub min_max_ratio: f64,
    pub slope_omega_rad_s: f64,
    pub slope_value: f64,
    pub slope_point_ratio: f64,
    /// `(max − min)/(max + min)`; equals `e^{−ΓT}` for the model fringe.
    pub contrast: f64,
}

/// Vertex of the parabola through three points with distinct abscissae.
fn parabola_vertex(p0: (f64, f64), p1: (f64, f64), p2: (f64, f64)) -> Option<(f64, f64)> {
    let (x0, y0) = p0;
    let (x1, y1) = p1;
    let (x2, y2) = p2;
    // y = a (x − x1)² + b (x − x1) + y1
    let (h0, h2) = (x0 - x1, x2 - x1);
    let (d0, d2) = (y0 - y1, y2 - y1);
    let det = h0 * h2 * (h0 - h2);
    if det == 0.0 {
        return None;
    }
    let a = (d0 * h2 - d2 * h0) / det;
    let b = (d2 * h0 * h0 - d0 * h2 * h2) / det;
    if a == 0.0 {
        return None;
    }
    let dx = -b / (2.0 * a);
    // A vertex outside the bracket means the samples are not bracketing an extremum.
    if !(x0.min(x2) <= x1 + dx && x1 + dx <= x0.max(x2)) {
        return None;
    }
    Some((x1 + dx, y1 + b * dx + a * dx * dx))
}

/// Quadratic interpolation through the three samples nearest `x`.
fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let n = xs.len();
    if n < 3 {
        return ys[xs.iter().position(|&v| v >= x).unwrap_or(n - 1)];
    }
    let i = xs.partition_point(|&v| v < x).clamp(1, n - 2);
    let (x0, x1, x2) = (xs[i - 1], xs[i], xs[i + 1]);
    let l0 = (x - x1) * (x - x2) / ((x0 - x1) * (x0 - x2));
    let l1 = (x - x0) * (x - x2) / ((x1 - x0) * (x1 - x2));
    let l2 = (x - x0) * (x - x1) / ((x2 - x0) * (x2 - x1));
    ys[i - 1] * l0 + ys[i] * l1 + ys[i + 1] * l2
}

/// Refines a sample extremum at `i` with a parabola through its neighbours.
fn refine(xs: &[f64], ys: &[f64], i: usize) -> (f64, f64) {
    if i == 0 || i + 1 == xs.len() {
        return (xs[i], ys[i]);
    }
    parabola_vertex(
        (xs[i - 1], ys[i - 1]),
        (xs[i], ys[i]),
        (xs[i + 1], ys[i + 1]),
    )
    .unwrap_or((xs[i], ys[i]))
}

/// Checks that the grid spans a full period with enough samples per period.
pub fn check_grid(omegas: &[f64], ramsey_time_s: f64) -> Result<()> {
    if !(ramsey_time_s > 0.0) || !ramsey_time_s.is_finite() {
        return Err(Error::InvalidInput(format!(
            "ramsey_time_s must be positive, got {ramsey_time_s}"
        )));
    }
    let n = omegas.len();
    let period = std::f64::consts::TAU / ramsey_time_s;
    let span = if n >= 2 {
        omegas[n - 1] - omegas[0]
    } else {
        0.0
    };
    if span < period * (1.0 - 1e-12) {
        return Err(Error::GridTooNarrow { span, period });
    }
    let per_period = (n - 1) as f64 * period / span;
    if per_period < MIN_POINTS_PER_PERIOD as f64 * (1.0 - 1e-9) {
        let required_points = (span / period * MIN_POINTS_PER_PERIOD as f64).ceil() as usize + 1;
        return Err(Error::GridTooCoarse {
            per_period,
            required: MIN_POINTS_PER_PERIOD,
            required_points,
        });
    }
    Ok(())
}

/// Index of the best sample by `better` within `radius` of `at`.
fn extremum(
    xs: &[f64],
    ys: &[f64],
    at: f64,
    radius: f64,
    better: impl Fn(f64, f64) -> bool,
) -> usize {
    let mut best: Option<usize> = None;
    for i in 0..xs.len() {
        if (xs[i] - at).abs() <= radius && best.is_none_or(|b| better(ys[i], ys[b])) {
            best = Some(i);
        }
    }
    best.unwrap_or_else(|| {
        let i = xs.partition_point(|&v| v < at);
        i.min(xs.len() - 1)
    })
}

pub fn shape_metrics(scan: &FringeScan) -> Result<ShapeMetrics> {
    let t = scan.ramsey_time_s();
    let (xs, ys) = (scan.omegas(), scan.pe());
    check_grid(xs, t)?;
    let n = xs.len();

    // The fringe is periodic in ω; read the peak nearest the grid centre and
    // the valley and flank within half a period of it.
    let half = std::f64::consts::PI / t;
    let centre = 0.5 * (xs[0] + xs[n - 1]);
    let argmax = extremum(xs, ys, centre, half, |a, b| a > b);
    let (peak_x, peak_y) = refine(xs, ys, argmax);
    let argmin = extremum(xs, ys, peak_x, half * (1.0 + 1e-9), |a, b| a < b);
    let (min_x, min_y) = refine(xs, ys, argmin);
    let peak_y = peak_y.max(ys[argmax]);
    let min_y = min_y.min(ys[argmin]).max(0.0);
    if !(peak_y > 0.0) {
        return Err(Error::InvalidInput("fringe is identically zero".into()));
    }

    let slope = |i: usize| ((ys[i + 1] - ys[i - 1]) / (xs[i + 1] - xs[i - 1])).abs();
    let mut best: Option<usize> = None;
    for i in 1..n - 1 {
        if (xs[i] - peak_x).abs() <= half && best.is_none_or(|b| slope(i) > slope(b)) {
            best = Some(i);
        }
    }
    let i = best.ok_or_else(|| Error::InvalidInput("no interior sample near the peak".into()))?;
    let slope_x = if i >= 2 && i + 2 < n {
        parabola_vertex(
            (xs[i - 1], slope(i - 1)),
            (xs[i], slope(i)),
            (xs[i + 1], slope(i + 1)),
        )
        .map_or(xs[i], |v| v.0)
    } else {
        xs[i]
    };
    let slope_y = interpolate(xs, ys, slope_x);

    Ok(ShapeMetrics {
        peak_omega_rad_s: peak_x,
        peak_value: peak_y,
        min_omega_rad_s: min_x,
        min_value: min_y,
        min_max_ratio: min_y / peak_y,
        slope_omega_rad_s: slope_x,
        slope_value: slope_y,
        slope_point_ratio: slope_y / peak_y,
        contrast: (peak_y - min_y) / (peak_y + min_y),
    })
}

/// Predicted `(min/max, slope/peak)` ratios for a given `ΓT`.
pub fn predicted_ratios(gamma_t: f64) -> (f64, f64) {
    let c = (-gamma_t).exp();
    ((1.0 - c) / (1.0 + c), 1.0 / (1.0 + c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fringe::scan::{linear_grid, scan_fringe, FringeSource};
    use crate::ramsey::{FringeParams, RamseyConfig};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn scan(gamma: f64, eshift: f64, points: usize, span: f64) -> Result<FringeScan> {
        let cfg = RamseyConfig::with_pulse_area(FRAC_PI_2, 1.0, 1e-3, 0.0).unwrap();
        let p = FringeParams::new(gamma, eshift, FRAC_PI_2).unwrap();
        let grid = linear_grid(0.0, span, points).unwrap();
        scan_fringe(&FringeSource::Params(p), &cfg, &grid, None)
    }

    #[test]
    fn parabola_exact_on_quadratics() {
        let f = |x: f64| -2.0 * (x - 0.3).powi(2) + 1.5;
        let v = parabola_vertex((0.0, f(0.0)), (0.4, f(0.4)), (1.1, f(1.1))).unwrap();
        assert!((v.0 - 0.3).abs() < 1e-14 && (v.1 - 1.5).abs() < 1e-14);
    }

    #[test]
    fn unit_gamma_t_ratios() {
        let s = scan(1.0, 0.0, 2001, 4.0 * PI).unwrap();
        let m = shape_metrics(&s).unwrap();
        let (mm, sp) = predicted_ratios(1.0);
        assert!((mm - 0.4621).abs() < 1e-4 && (sp - 0.7311).abs() < 1e-4);
        assert!((m.min_max_ratio - mm).abs() < 1e-6, "{}", m.min_max_ratio);
        assert!(
            (m.slope_point_ratio - sp).abs() < 1e-6,
            "{}",
            m.slope_point_ratio
        );
        assert!((m.contrast - (-1.0f64).exp()).abs() < 1e-6);
    }

    #[test]
    fn ideal_fringe_ratios() {
        let m = shape_metrics(&scan(0.0, 0.0, 2001, 4.0 * PI).unwrap()).unwrap();
        assert!(m.min_max_ratio.abs() < 1e-9);
        assert!((m.slope_point_ratio - 0.5).abs() < 1e-6);
    }

    #[test]
    fn peak_tracks_shift_off_grid() {
        let m = shape_metrics(&scan(0.2, 0.123, 1001, 4.0 * PI).unwrap()).unwrap();
        assert!(
            (m.peak_omega_rad_s - 0.123).abs() < 1e-5,
            "{}",
            m.peak_omega_rad_s
        );
    }

    #[test]
    fn coarse_grid_reports_needed_points() {
        match shape_metrics(&scan(1.0, 0.0, 21, 4.0 * PI).unwrap()) {
            Err(Error::GridTooCoarse {
                required,
                required_points,
                ..
            }) => {
                assert_eq!(required, 25);
                assert_eq!(required_points, 51);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn narrow_grid_refused() {
        assert!(matches!(
            shape_metrics(&scan(1.0, 0.0, 200, PI).unwrap()),
            Err(Error::GridTooNarrow { .. })
        ));
    }

    #[test]
    fn minimum_density_is_close() {
        let s = scan(1.0, 0.0, 51, 4.0 * PI).unwrap();
        let m = shape_metrics(&s).unwrap();
        let (mm, sp) = predicted_ratios(1.0);
        assert!((m.min_max_ratio - mm).abs() < 5e-3);
        assert!((m.slope_point_ratio - sp).abs() < 5e-3);
    }
}
