use crate::error::{Error, Result};

/// Errors at or below this are roundoff and stay out of fits.
pub const ERROR_FLOOR: f64 = 1e-12;

/// Ordinary least-squares line through `(ln x, ln y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Standard error of the slope; `None` with only two points.
    pub slope_stderr: Option<f64>,
    pub points_used: usize,
}

/// Fits `ln y = intercept + slope ln x` over the points with `y > floor`.
pub fn fit_loglog(points: &[(f64, f64)], floor: f64) -> Result<LogLogFit> {
    let used: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(x, y)| y > floor && x > 0.0)
        .map(|&(x, y)| (x.ln(), y.ln()))
        .collect();
    let n = used.len();
    if n < 2 {
        return Err(Error::DegenerateFit(format!(
            "{n} of {} points lie above the floor {floor:e}; use a larger t or a lower order",
            points.len()
        )));
    }
    let nf = n as f64;
    let mx = used.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = used.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = used.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = used.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = used.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all abscissae coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = used
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - sse / syy };
    let slope_stderr = (n > 2).then(|| (sse / (nf - 2.0) / sxx).sqrt());
    Ok(LogLogFit {
        slope,
        intercept,
        r_squared,
        slope_stderr,
        points_used: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let pts: Vec<(f64, f64)> = [4.0f64, 8.0, 16.0, 32.0]
            .iter()
            .map(|&n| (n, 3.0 * n.powf(-2.0)))
            .collect();
        let fit = fit_loglog(&pts, ERROR_FLOOR).unwrap();
        assert!((fit.slope + 2.0).abs() < 1e-12);
        assert!((fit.intercept - 3f64.ln()).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert!(fit.slope_stderr.unwrap() < 1e-7);
    }

    #[test]
    fn matches_hand_computed_regression() {
        // ln-space points (0,0), (1,1), (2,3): slope 1.5, intercept -1/6.
        let e = std::f64::consts::E;
        let pts = [(1.0, 1.0), (e, e), (e * e, e.powi(3))];
        let fit = fit_loglog(&pts, 0.0).unwrap();
        assert!((fit.slope - 1.5).abs() < 1e-12);
        assert!((fit.intercept + 1.0 / 6.0).abs() < 1e-12);
        // SSE = 1/6, Sxx = 2, Syy = 14/3.
        assert!((fit.r_squared - (1.0 - (1.0 / 6.0) / (14.0 / 3.0))).abs() < 1e-12);
        assert!((fit.slope_stderr.unwrap() - (1.0f64 / 12.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn floor_exclusion_and_degeneracy() {
        let pts = [(1.0, 1e-3), (2.0, 1e-13), (4.0, 0.0)];
        assert!(matches!(
            fit_loglog(&pts, ERROR_FLOOR),
            Err(Error::DegenerateFit(_))
        ));
        let two = [(1.0, 1e-2), (2.0, 2.5e-3), (4.0, 1e-14)];
        let fit = fit_loglog(&two, ERROR_FLOOR).unwrap();
        assert_eq!(fit.points_used, 2);
        assert!(fit.slope_stderr.is_none());
        assert!((fit.slope + 2.0).abs() < 1e-12);
    }
}
