//! The square-sequence check and the `B1` scaling experiment.

use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;

use super::lambda::dyadic_window;
use super::spectral::{b1, column_set};
use crate::error::{Error, Result};
use crate::family::{HeckeChar, HeckeFamily, IdealCharacter};
use crate::ring::{enumerate_ideals, Ideal, IdealFilter};

/// `sum_{a ~ M} |sum_{b ~ N} lambda_b chi_b(a)|^2` with `lambda_b = weight` on squares.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareSequenceReport {
    pub m: f64,
    pub n: f64,
    pub squares: Vec<Ideal>,
    pub rows: usize,
    pub value: f64,
    /// `value / (M N)`.
    pub ratio: f64,
    /// `value / (|lambda|^2 M N)`.
    pub normalized_ratio: f64,
    /// No square lies in the window.
    pub degenerate: bool,
}

fn is_square(a: &Ideal) -> bool {
    a.factors().iter().all(|(_, e)| e % 2 == 0)
}

/// Rows are all ideals `a ~ M`; columns are the square ideals `b ~ N` prime to `c`, each with
/// its primitive character.
pub fn square_sequence_check(m: f64, n: f64, weight: f64, family: &HeckeFamily) -> Result<SquareSequenceReport> {
    if !(m >= 1.0 && n >= 1.0) {
        return Err(Error::Domain(format!("need M, N >= 1, got M={m}, N={n}")));
    }
    let field = family.field_id();
    let (nlo, nhi) = dyadic_window(n);
    let squares: Vec<Ideal> =
        enumerate_ideals(field, nlo, nhi, &IdealFilter::coprime(family.modulus())).into_iter().filter(is_square).collect();
    let chars: Vec<HeckeChar> = squares.iter().map(|b| HeckeChar::new(family, b)).collect::<Result<_>>()?;
    let (mlo, mhi) = dyadic_window(m);
    let rows = enumerate_ideals(field, mlo, mhi, &IdealFilter::none());
    let terms: Vec<f64> = rows
        .par_iter()
        .map(|a| {
            let mut inner = Complex64::new(0.0, 0.0);
            for chi in &chars {
                inner += chi.value(a)?.to_complex() * weight;
            }
            Ok(inner.norm_sqr())
        })
        .collect::<Result<_>>()?;
    let value: f64 = terms.iter().sum();
    let norm_sq = weight * weight * squares.len() as f64;
    Ok(SquareSequenceReport {
        m,
        n,
        rows: rows.len(),
        degenerate: squares.is_empty(),
        ratio: value / (m * n),
        normalized_ratio: if norm_sq > 0.0 { value / (norm_sq * m * n) } else { 0.0 },
        squares,
        value,
    })
}

/// Parameters of a `B1` grid.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentGrid {
    pub m_list: Vec<f64>,
    pub n_list: Vec<f64>,
    /// `K = k_fraction * M`, used only to flag the admissible window.
    pub k_fraction: f64,
    pub epsilon: f64,
    pub slope_threshold: f64,
    /// Largest admissible Gram dimension.
    pub max_dimension: usize,
}

impl ExperimentGrid {
    /// The diagonal grid `M = N` over the given sizes.
    pub fn diagonal(sizes: &[f64]) -> Self {
        ExperimentGrid {
            m_list: sizes.to_vec(),
            n_list: sizes.to_vec(),
            k_fraction: 0.5,
            epsilon: 0.1,
            slope_threshold: 1.2,
            max_dimension: 20_000,
        }
    }
}

/// One computed grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct GridPoint {
    pub m: f64,
    pub n: f64,
    pub rows: usize,
    pub cols: usize,
    pub b1: f64,
    pub iterations: usize,
    pub residual: f64,
    /// `B1 / (M + N)`.
    pub ratio: f64,
    /// `N^2 M^{-1} (MN)^eps <= K <= M (MN)^{-eps}` for the grid's `K`.
    pub k_in_window: bool,
}

/// Least-squares line through `(log N, log B1(N, N))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root mean square of the fit residuals.
    pub residual: f64,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingReport {
    pub points: Vec<GridPoint>,
    pub fit: Option<LogFit>,
    pub pass: Option<bool>,
    /// Grid points skipped for exceeding the dimension cap.
    pub skipped: Vec<(f64, f64)>,
}

impl ScalingReport {
    pub fn partial(&self) -> bool {
        !self.skipped.is_empty()
    }
}

pub fn fit_log_log(xy: &[(f64, f64)]) -> Option<LogFit> {
    let pts: Vec<(f64, f64)> = xy.iter().filter(|(x, y)| *x > 0.0 && *y > 0.0).map(|(x, y)| (x.ln(), y.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum::<f64>() / k).sqrt();
    Some(LogFit { slope, intercept, residual, points: pts.len() })
}

/// `B1` over the grid, the diagonal log-log fit and the ratio table.
pub fn scaling_experiment(grid: &ExperimentGrid, family: &HeckeFamily) -> Result<ScalingReport> {
    let mut points = Vec::new();
    let mut skipped = Vec::new();
    for &m in &grid.m_list {
        for &n in &grid.n_list {
            let dims = column_set(family, m).len().max(column_set(family, n).len());
            if dims > grid.max_dimension {
                skipped.push((m, n));
                continue;
            }
            let s = b1(m, n, family)?;
            let k = grid.k_fraction * m;
            let e = (m * n).powf(grid.epsilon);
            points.push(GridPoint {
                m,
                n,
                rows: s.rows.len(),
                cols: s.cols.len(),
                b1: s.top_eigenvalue,
                iterations: s.iterations,
                residual: s.residual,
                ratio: s.top_eigenvalue / (m + n),
                k_in_window: n * n / m * e <= k && k <= m / e,
            });
        }
    }
    let diag: Vec<(f64, f64)> = points.iter().filter(|p| p.m == p.n).map(|p| (p.n, p.b1)).collect();
    let fit = fit_log_log(&diag);
    let pass = fit.map(|f| f.slope <= grid.slope_threshold);
    Ok(ScalingReport { points, fit, pass, skipped })
}

/// `B1(M1, N) <= 4 B1(M2, N)` with `M2 = ceil(8 M1 log(2 M1 N))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonotonicityInstance {
    pub m1: f64,
    pub m2: f64,
    pub n: f64,
    pub b1_small: f64,
    pub b1_large: f64,
    pub holds: bool,
}

pub fn monotonicity_check(m1: f64, n: f64, family: &HeckeFamily) -> Result<MonotonicityInstance> {
    let m2 = (8.0 * m1 * (2.0 * m1 * n).ln()).ceil().max(m1);
    let small = b1(m1, n, family)?.top_eigenvalue;
    let large = b1(m2, n, family)?.top_eigenvalue;
    Ok(MonotonicityInstance { m1, m2, n, b1_small: small, b1_large: large, holds: small <= 4.0 * large })
}

pub const B1_GRID_COLUMNS: &str = "field,c,M,N,rows,cols,B1,iters,residual";

/// Rows of `b1_grid.csv` (without the file header line).
pub fn b1_grid_csv(report: &ScalingReport, family: &HeckeFamily) -> String {
    let mut out = String::new();
    out.push_str(B1_GRID_COLUMNS);
    out.push('\n');
    for p in &report.points {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{:e},{},{:e}",
            family.field_id(),
            family.modulus(),
            p.m,
            p.n,
            p.rows,
            p.cols,
            p.b1,
            p.iterations,
            p.residual
        );
    }
    out
}

/// The human-readable fit summary.
pub fn scaling_fit_text(report: &ScalingReport) -> String {
    let mut out = String::new();
    match report.fit {
        Some(f) => {
            let _ = writeln!(out, "slope = {:.6}", f.slope);
            let _ = writeln!(out, "intercept = {:.6}", f.intercept);
            let _ = writeln!(out, "fit_residual = {:.6e}", f.residual);
            let _ = writeln!(out, "points = {}", f.points);
        }
        None => out.push_str("slope = n/a (fewer than two diagonal points)\n"),
    }
    match report.pass {
        Some(p) => {
            let _ = writeln!(out, "pass = {p}");
        }
        None => out.push_str("pass = n/a\n"),
    }
    out.push_str("M,N,B1,B1/(M+N),K_in_window\n");
    for p in &report.points {
        let _ = writeln!(out, "{},{},{:e},{:.6},{}", p.m, p.n, p.b1, p.ratio, p.k_in_window);
    }
    if report.partial() {
        let _ = writeln!(out, "partial = true ({} points above the dimension cap)", report.skipped.len());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::FamilyOptions;
    use crate::ring::FieldId;

    #[test]
    fn fit_recovers_a_power_law() {
        let xy: Vec<(f64, f64)> = [8.0, 16.0, 32.0].iter().map(|&x: &f64| (x, 3.0 * x.powf(1.1))).collect();
        let f = fit_log_log(&xy).unwrap();
        assert!((f.slope - 1.1).abs() < 1e-12 && f.residual < 1e-12);
        assert!(fit_log_log(&xy[..1]).is_none());
    }

    #[test]
    fn empty_grid_has_only_the_header() {
        let fam = HeckeFamily::build(&FamilyOptions::new(FieldId::Q)).unwrap();
        let r = scaling_experiment(&ExperimentGrid::diagonal(&[]), &fam).unwrap();
        assert_eq!(b1_grid_csv(&r, &fam), format!("{B1_GRID_COLUMNS}\n"));
        assert!(r.fit.is_none());
    }

    #[test]
    fn no_squares_below_four() {
        let fam = HeckeFamily::build(&FamilyOptions::new(FieldId::Q)).unwrap();
        let r = square_sequence_check(8.0, 2.0, 1.0, &fam).unwrap();
        assert!(r.degenerate && r.value == 0.0);
    }
}
