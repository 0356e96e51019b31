//! Regression numerics: ordinary least squares, linear contrasts and
//! logistic regression by iteratively reweighted least squares.
//!
//! Standard errors are the textbook ones (`s²(XᵀX)⁻¹` and inverse Fisher
//! information); no robust or longitudinal corrections are applied.

mod design;
mod linalg;
mod logistic;

use serde::{Deserialize, Serialize};

pub use design::{build_asymmetry_design, AsymmetryColumns, AsymmetryDesignOptions, ASYMMETRY_COLUMNS};
pub use logistic::{logistic_irls, log_likelihood, IrlsOptions, SEPARATION_THRESHOLD};

use crate::scalar::dot;
use crate::{Error, Real, Result};
use linalg::Qr;

/// Row-major design matrix with named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix<T> {
    rows: usize,
    names: Vec<String>,
    data: Vec<T>,
}

impl<T: Real> DesignMatrix<T> {
    pub fn from_rows(names: Vec<String>, rows: Vec<Vec<T>>) -> Result<Self> {
        let cols = names.len();
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in &rows {
            Error::check_len(cols, row.len())?;
            data.extend_from_slice(row);
        }
        Ok(Self { rows: rows.len(), names, data })
    }

    /// Columns given as equal-length vectors; with `intercept` a leading
    /// column of ones named `intercept` is prepended.
    pub fn from_columns(intercept: bool, columns: Vec<(String, Vec<T>)>) -> Result<Self> {
        let rows = columns.first().map(|(_, c)| c.len()).unwrap_or(0);
        for (_, c) in &columns {
            Error::check_len(rows, c.len())?;
        }
        let mut names = Vec::with_capacity(columns.len() + 1);
        if intercept {
            names.push("intercept".to_string());
        }
        names.extend(columns.iter().map(|(n, _)| n.clone()));
        let cols = names.len();
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            if intercept {
                data.push(T::one());
            }
            data.extend(columns.iter().map(|(_, c)| c[i]));
        }
        Ok(Self { rows, names, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn row(&self, i: usize) -> &[T] {
        let c = self.cols();
        &self.data[i * c..(i + 1) * c]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.data[i * self.cols() + j]).collect()
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    /// `X b`.
    pub fn mul_vec(&self, b: &[T]) -> Vec<T> {
        (0..self.rows).map(|i| dot(self.row(i), b)).collect()
    }

    /// Keeps the rows for which `keep` is true, in order.
    pub fn select_rows(&self, keep: impl Fn(usize) -> bool) -> Self {
        let mut data = Vec::new();
        let mut rows = 0;
        for i in 0..self.rows {
            if keep(i) {
                data.extend_from_slice(self.row(i));
                rows += 1;
            }
        }
        Self { rows, names: self.names.clone(), data }
    }

    fn check_fit_shape(&self, y_len: usize) -> Result<()> {
        Error::check_len(self.rows, y_len)?;
        if self.rows <= self.cols() {
            return Err(Error::InsufficientData { rows: self.rows, columns: self.cols() });
        }
        Ok(())
    }
}

/// Coefficients with their covariance and per-coefficient test statistics
/// (`t` for least squares, `z` for logistic regression).
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionFit<T> {
    pub names: Vec<String>,
    pub coefficients: Vec<T>,
    pub covariance: Vec<Vec<T>>,
    pub standard_errors: Vec<T>,
    pub statistics: Vec<T>,
    /// Residual degrees of freedom (least squares only).
    pub dof: Option<usize>,
    pub converged: bool,
    /// Logistic fit diverged towards complete separation.
    pub separated: bool,
    pub iterations: usize,
    /// `y − X b` for least squares fits.
    pub residuals: Option<Vec<T>>,
}

impl<T: Real> RegressionFit<T> {
    fn assemble(names: Vec<String>, coefficients: Vec<T>, covariance: Vec<Vec<T>>) -> Self {
        let standard_errors: Vec<T> = (0..coefficients.len()).map(|k| covariance[k][k].max(T::zero()).sqrt()).collect();
        let statistics = coefficients.iter().zip(&standard_errors).map(|(&b, &s)| ratio(b, s)).collect();
        Self {
            names,
            coefficients,
            covariance,
            standard_errors,
            statistics,
            dof: None,
            converged: true,
            separated: false,
            iterations: 0,
            residuals: None,
        }
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// `estimate ± z · SE` for coefficient `k`.
    pub fn wald_interval(&self, k: usize, z: T) -> (T, T) {
        let half = z * self.standard_errors[k];
        (self.coefficients[k] - half, self.coefficients[k] + half)
    }

    pub fn rss(&self) -> Option<T> {
        self.residuals.as_ref().map(|r| dot(r, r))
    }

    pub fn to_record(&self) -> FitRecord {
        let conv = |v: &[T]| v.iter().map(|x| x.as_f64()).collect();
        FitRecord {
            names: self.names.clone(),
            estimates: conv(&self.coefficients),
            standard_errors: conv(&self.standard_errors),
            statistics: conv(&self.statistics),
            dof: self.dof,
            converged: self.converged,
            separated: self.separated,
            iterations: self.iterations,
        }
    }
}

/// Serialisable summary of a fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRecord {
    pub names: Vec<String>,
    pub estimates: Vec<f64>,
    pub standard_errors: Vec<f64>,
    pub statistics: Vec<f64>,
    pub dof: Option<usize>,
    pub converged: bool,
    pub separated: bool,
    pub iterations: usize,
}

/// Estimate over standard error, defined as zero when both vanish.
fn ratio<T: Real>(est: T, se: T) -> T {
    if se == T::zero() {
        if est == T::zero() {
            T::zero()
        } else {
            est.signum() * T::infinity()
        }
    } else {
        est / se
    }
}

/// Ordinary least squares via Householder QR.
///
/// Covariance is `s²(XᵀX)⁻¹` with `s² = RSS / (rows − cols)`, and the
/// statistics are `t` values on that many degrees of freedom.
pub fn ols<T: Real>(x: &DesignMatrix<T>, y: &[T]) -> Result<RegressionFit<T>> {
    x.check_fit_shape(y.len())?;
    let qr = Qr::new(x.rows(), x.cols(), x.data());
    qr.check_rank(x.names())?;
    let coefficients = qr.solve(y);
    let fitted = x.mul_vec(&coefficients);
    let residuals: Vec<T> = y.iter().zip(&fitted).map(|(&a, &b)| a - b).collect();
    let dof = x.rows() - x.cols();
    let s2 = dot(&residuals, &residuals) / T::of(dof as f64);
    let covariance = qr
        .gram_inverse()
        .into_iter()
        .map(|row| row.into_iter().map(|v| v * s2).collect())
        .collect();
    let mut fit = RegressionFit::assemble(x.names().to_vec(), coefficients, covariance);
    fit.dof = Some(dof);
    fit.residuals = Some(residuals);
    Ok(fit)
}

/// Linear combination `cᵀb` of the coefficients, with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contrast<T> {
    pub estimate: T,
    pub standard_error: T,
    pub statistic: T,
}

pub fn contrast<T: Real>(fit: &RegressionFit<T>, c: &[T]) -> Result<Contrast<T>> {
    Error::check_len(fit.coefficients.len(), c.len())?;
    let estimate = dot(c, &fit.coefficients);
    let var: T = fit.covariance.iter().zip(c).map(|(row, &ci)| ci * dot(row, c)).sum();
    let standard_error = var.max(T::zero()).sqrt();
    Ok(Contrast { estimate, standard_error, statistic: ratio(estimate, standard_error) })
}
