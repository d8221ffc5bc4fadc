//! The norms `B1`, `B2`, `B3` as largest eigenvalues of exact `{-1, 0, 1}` Gram problems.

use num_complex::Complex64;
use rayon::prelude::*;

use super::lambda::{dyadic_window, LambdaSeq};
use crate::analytic::TestFunction;
use crate::error::{Error, Result};
use crate::family::{HeckeFamily, RClass};
use crate::ring::{enumerate_ideals, ideal_gcd, squarefree_part_coprime, Ideal, IdealFilter};

const MAX_ITERATIONS: usize = 200_000;
const EIGEN_TOL: f64 = 1e-10;
const CERTIFICATE_TOL: f64 = 1e-9;

/// Result of a power iteration: value, unit vector, iterations used and `|A v - value v|`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
}

/// The fixed second start vector, entries in `[-1, 1)`.
fn scrambled_start(dim: usize) -> Vec<f64> {
    (0..dim)
        .map(|i| {
            let h = (i as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15) >> 11;
            2.0 * (h as f64 / (1u64 << 53) as f64) - 1.0
        })
        .collect()
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn run_power(apply: &(dyn Fn(&[f64]) -> Vec<f64> + Sync), start: Vec<f64>) -> Result<EigenPair> {
    let n0 = dot(&start, &start).sqrt();
    let mut v: Vec<f64> = start.iter().map(|x| x / n0).collect();
    let mut prev = f64::NAN;
    let mut residual = f64::INFINITY;
    for it in 1..=MAX_ITERATIONS {
        let w = apply(&v);
        let value = dot(&v, &w);
        let wn = dot(&w, &w).sqrt();
        residual = w.iter().zip(&v).map(|(a, b)| (a - value * b).powi(2)).sum::<f64>().sqrt();
        if wn == 0.0 {
            return Ok(EigenPair { value: 0.0, vector: v, iterations: it, residual: 0.0 });
        }
        if (value - prev).abs() <= EIGEN_TOL * value.abs() && residual <= CERTIFICATE_TOL * value.abs() {
            return Ok(EigenPair { value, vector: v, iterations: it, residual });
        }
        prev = value;
        v = w.iter().map(|x| x / wn).collect();
    }
    Err(Error::NonConvergence { iterations: MAX_ITERATIONS, residual })
}

/// Largest eigenvalue of a positive semidefinite operator by power iteration, started from the
/// all-ones vector and from a fixed scrambled vector; the larger Rayleigh quotient is kept.
pub fn power_iteration(dim: usize, apply: &(dyn Fn(&[f64]) -> Vec<f64> + Sync)) -> Result<EigenPair> {
    if dim == 0 {
        return Ok(EigenPair { value: 0.0, vector: Vec::new(), iterations: 0, residual: 0.0 });
    }
    let a = run_power(apply, vec![1.0; dim])?;
    let b = run_power(apply, scrambled_start(dim))?;
    let iterations = a.iterations + b.iterations;
    let best = if b.value > a.value * (1.0 + 1e-12) { b } else { a };
    Ok(EigenPair { iterations, ..best })
}

/// A `{-1, 0, 1}` matrix `[chi_b(a)]` with its top singular data.
#[derive(Clone, Debug)]
pub struct GramSpectrum {
    pub rows: Vec<Ideal>,
    pub cols: Vec<Ideal>,
    pub matrix: Vec<Vec<i8>>,
    /// Largest eigenvalue of `A* A`.
    pub top_eigenvalue: f64,
    pub attaining_vector: LambdaSeq,
    pub iterations: usize,
    /// `|A* A v - top_eigenvalue v|` for the unit vector `v`.
    pub residual: f64,
}

impl GramSpectrum {
    /// `A* A v`.
    pub fn apply_gram(&self, v: &[f64]) -> Vec<f64> {
        gram_apply(&self.matrix, self.cols.len(), v)
    }
}

/// `A^T A v` with a fixed reduction order.
fn gram_apply(m: &[Vec<i8>], cols: usize, v: &[f64]) -> Vec<f64> {
    let u: Vec<f64> = m.par_iter().map(|row| row.iter().zip(v).map(|(a, x)| *a as f64 * x).sum()).collect();
    (0..cols).into_par_iter().map(|j| m.iter().zip(&u).map(|(row, x)| row[j] as f64 * x).sum()).collect()
}

/// `chi_b(a)` for every row `a` and column `b`.
pub fn character_matrix(family: &HeckeFamily, rows: &[Ideal], cols: &[Ideal]) -> Result<Vec<Vec<i8>>> {
    rows.par_iter()
        .map(|a| {
            cols.iter()
                .map(|b| {
                    let v = family.chi_eval(b, a)?;
                    v.as_sign().ok_or_else(|| Error::AxiomViolation(format!("chi_{b}({a}) = {v} is not real")))
                })
                .collect()
        })
        .collect()
}

fn check_sizes(m: f64, n: f64) -> Result<()> {
    if !(m >= 1.0 && n >= 1.0) {
        return Err(Error::Domain(format!("need M, N >= 1, got M={m}, N={n}")));
    }
    Ok(())
}

/// Squarefree ideals prime to `c` with norm in `(N, 2N]`.
pub fn column_set(family: &HeckeFamily, n: f64) -> Vec<Ideal> {
    let (lo, hi) = dyadic_window(n);
    enumerate_ideals(family.field_id(), lo, hi, &IdealFilter::squarefree_coprime(family.modulus()))
}

fn spectrum(family: &HeckeFamily, n: f64, rows: Vec<Ideal>, cols: Vec<Ideal>) -> Result<GramSpectrum> {
    if rows.is_empty() || cols.is_empty() {
        return Ok(GramSpectrum {
            rows,
            cols,
            matrix: Vec::new(),
            top_eigenvalue: 0.0,
            attaining_vector: LambdaSeq::real(family, n, Vec::new())?,
            iterations: 0,
            residual: 0.0,
        });
    }
    let matrix = character_matrix(family, &rows, &cols)?;
    let width = cols.len();
    let pair = power_iteration(width, &|v: &[f64]| gram_apply(&matrix, width, v))?;
    let attaining_vector = LambdaSeq::real(family, n, cols.iter().cloned().zip(pair.vector.iter().copied()).collect())?;
    Ok(GramSpectrum {
        rows,
        cols,
        matrix,
        top_eigenvalue: pair.value,
        attaining_vector,
        iterations: pair.iterations,
        residual: pair.residual,
    })
}

/// `B1(M, N)`: squarefree rows `a ~ M` and columns `b ~ N`, all prime to `c`.
pub fn b1(m: f64, n: f64, family: &HeckeFamily) -> Result<GramSpectrum> {
    check_sizes(m, n)?;
    spectrum(family, n, column_set(family, m), column_set(family, n))
}

/// Rows of `B2`: every `a ~ M` prime to `c` with `s(a) > K`, squarefree or not.
pub fn b2_rows(family: &HeckeFamily, m: f64, k: f64) -> Vec<Ideal> {
    let (lo, hi) = dyadic_window(m);
    enumerate_ideals(family.field_id(), lo, hi, &IdealFilter::coprime(family.modulus()))
        .into_iter()
        .filter(|a| squarefree_part_coprime(a, family.modulus()) as f64 > k)
        .collect()
}

/// `B2(M, N, K)`.
pub fn b2(m: f64, n: f64, k: f64, family: &HeckeFamily) -> Result<GramSpectrum> {
    check_sizes(m, n)?;
    if k < 0.0 {
        return Err(Error::Domain(format!("need K >= 0, got {k}")));
    }
    spectrum(family, n, b2_rows(family, m, k), column_set(family, n))
}

/// Ideals `a` prime to `c` with `s(a) > K` and `W(N a / M) != 0`, with their weights.
fn weighted_rows(family: &HeckeFamily, m: f64, k: f64, w: &TestFunction) -> Vec<(Ideal, f64)> {
    let (lo, hi) = w.support();
    let (nlo, nhi) = ((lo * m).floor().max(0.0) as u64, (hi * m).ceil() as u64);
    enumerate_ideals(family.field_id(), nlo, nhi, &IdealFilter::coprime(family.modulus()))
        .into_iter()
        .filter(|a| squarefree_part_coprime(a, family.modulus()) as f64 > k)
        .map(|a| {
            let v = w.eval(a.norm() as f64 / m);
            (a, v)
        })
        .filter(|(_, v)| *v != 0.0)
        .collect()
}

fn sign(family: &HeckeFamily, b: &Ideal, a: &Ideal) -> Result<f64> {
    let v = family.chi_eval(b, a)?;
    v.as_sign().map(f64::from).ok_or_else(|| Error::AxiomViolation(format!("chi_{b}({a}) = {v} is not real")))
}

/// `Sigma3`: the double sum over pairs `(b1, b2) = g` in class `g_class`, with the weighted
/// `a`-sum restricted to `s(a) > K`.
#[allow(clippy::too_many_arguments)]
pub fn sigma3(
    m: f64,
    k: f64,
    g_ideal: &Ideal,
    g_class: RClass,
    lambda: &LambdaSeq,
    w: &TestFunction,
    family: &HeckeFamily,
) -> Result<f64> {
    let rows = weighted_rows(family, m, k, w);
    let support: Vec<&(Ideal, Complex64)> = lambda
        .entries()
        .iter()
        .filter(|(b, v)| *v != Complex64::new(0.0, 0.0) && (family.class_of(b) == Ok(g_class)))
        .collect();
    let mut total = Complex64::new(0.0, 0.0);
    for (b1, l1) in &support {
        for (b2, l2) in &support {
            if ideal_gcd(b1, b2) != *g_ideal {
                continue;
            }
            let mut inner = 0.0;
            for (a, wt) in &rows {
                inner += wt * sign(family, b1, a)? * sign(family, b2, a)?;
            }
            total += l1 * l2.conj() * inner;
        }
    }
    Ok(total.re)
}

/// The real symmetric form of `Sigma3` for one class.
#[derive(Clone, Debug)]
pub struct ClassForm {
    pub class: RClass,
    pub index: Vec<Ideal>,
    pub matrix: Vec<Vec<f64>>,
    /// Spectral radius of `matrix`.
    pub radius: f64,
    pub iterations: usize,
    pub residual: f64,
}

/// `B3` over all classes.
#[derive(Clone, Debug)]
pub struct B3Report {
    pub value: f64,
    pub classes: Vec<ClassForm>,
}

fn mat_apply(q: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    q.par_iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// `B3(M, N, K, g)`: the largest spectral radius over classes of the `Sigma3` form on
/// `{b ~ N : g | b, [b] = class}`, found by power iteration on `Q^2`.
pub fn b3(m: f64, n: f64, k: f64, g_ideal: &Ideal, w: &TestFunction, family: &HeckeFamily) -> Result<B3Report> {
    check_sizes(m, n)?;
    let rows = weighted_rows(family, m, k, w);
    let cols: Vec<Ideal> = column_set(family, n).into_iter().filter(|b| g_ideal.divides(b)).collect();
    let signs: Vec<Vec<f64>> = cols
        .par_iter()
        .map(|b| rows.iter().map(|(a, _)| sign(family, b, a)).collect::<Result<Vec<f64>>>())
        .collect::<Result<_>>()?;
    let mut classes = Vec::new();
    for class in 0..family.group_order() as RClass {
        let picked: Vec<usize> = (0..cols.len()).filter(|&j| family.class_of(&cols[j]) == Ok(class)).collect();
        let matrix: Vec<Vec<f64>> = picked
            .iter()
            .map(|&i| {
                picked
                    .iter()
                    .map(|&j| {
                        if ideal_gcd(&cols[i], &cols[j]) != *g_ideal {
                            return 0.0;
                        }
                        rows.iter().enumerate().map(|(r, (_, wt))| wt * signs[i][r] * signs[j][r]).sum()
                    })
                    .collect()
            })
            .collect();
        let dim = picked.len();
        let pair = power_iteration(dim, &|v: &[f64]| mat_apply(&matrix, &mat_apply(&matrix, v)))?;
        classes.push(ClassForm {
            class,
            index: picked.iter().map(|&j| cols[j].clone()).collect(),
            radius: pair.value.max(0.0).sqrt(),
            matrix,
            iterations: pair.iterations,
            residual: pair.residual,
        });
    }
    let value = classes.iter().map(|c| c.radius).fold(0.0, f64::max);
    Ok(B3Report { value, classes })
}
