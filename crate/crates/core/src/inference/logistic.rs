use super::linalg::Qr;
use super::{DesignMatrix, RegressionFit};
use crate::scalar::{dot, inv_logit};
use crate::{Error, Real, Result};

/// Coefficient magnitude beyond which a logistic fit is treated as diverging
/// under separation; `σ(30)` is 1 to double precision.
pub const SEPARATION_THRESHOLD: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IrlsOptions {
    pub max_iter: usize,
    /// Convergence when the largest absolute coefficient change falls below this.
    pub tol: f64,
}

impl Default for IrlsOptions {
    fn default() -> Self {
        Self { max_iter: 50, tol: 1e-10 }
    }
}

/// Bernoulli log-likelihood with logit link at coefficients `beta`.
pub fn log_likelihood<T: Real>(x: &DesignMatrix<T>, y: &[T], beta: &[T]) -> T {
    (0..x.rows())
        .map(|i| {
            let eta = dot(x.row(i), beta);
            // log(1 + e^η) computed stably
            let softplus = if eta > T::zero() { eta + (-eta).exp().ln_1p() } else { eta.exp().ln_1p() };
            y[i] * eta - softplus
        })
        .sum()
}

/// Logistic regression by iteratively reweighted least squares (Newton's
/// method on the log-likelihood). Each iteration solves the weighted
/// least-squares problem for the Newton step through QR of `W^½ X`.
///
/// The covariance is the inverse Fisher information `(XᵀWX)⁻¹` at the final
/// estimate and the statistics are Wald `z` values. Divergence under
/// separation is reported through `separated` instead of an error.
pub fn logistic_irls<T: Real>(x: &DesignMatrix<T>, y: &[T], opts: IrlsOptions) -> Result<RegressionFit<T>> {
    x.check_fit_shape(y.len())?;
    if y.iter().any(|&v| v != T::zero() && v != T::one()) {
        return Err(Error::argument("logistic response must be 0/1"));
    }
    Qr::new(x.rows(), x.cols(), x.data()).check_rank(x.names())?;

    let (n, k) = (x.rows(), x.cols());
    let tiny = T::epsilon() * T::epsilon();
    let threshold = T::of(SEPARATION_THRESHOLD);
    let mut beta = vec![T::zero(); k];
    let mut converged = false;
    let mut separated = false;
    let mut iterations = 0;

    while iterations < opts.max_iter {
        iterations += 1;
        let (sqrt_w, resid) = working_quantities(x, y, &beta);
        if sqrt_w.iter().all(|&s| s * s <= tiny) {
            separated = true;
            break;
        }
        let weighted = weighted_design(x, &sqrt_w);
        let qr = Qr::new(n, k, &weighted);
        if qr.check_rank(x.names()).is_err() {
            separated = true;
            break;
        }
        // Newton step δ solves (XᵀWX) δ = Xᵀ(y − μ); as least squares on W^½X
        // the right-hand side is (y − μ) / W^½.
        let rhs: Vec<T> = resid
            .iter()
            .zip(&sqrt_w)
            .map(|(&r, &s)| if s > T::zero() { r / s } else { T::zero() })
            .collect();
        let step = qr.solve(&rhs);
        let change = step.iter().fold(T::zero(), |m, d| m.max(d.abs()));
        for (b, d) in beta.iter_mut().zip(&step) {
            *b = *b + *d;
        }
        if beta.iter().any(|b| !b.is_finite() || b.abs() > threshold) {
            separated = true;
            break;
        }
        if change < T::of(opts.tol) {
            converged = true;
            break;
        }
    }

    let (sqrt_w, _) = working_quantities(x, y, &beta);
    let covariance = Qr::new(n, k, &weighted_design(x, &sqrt_w)).gram_inverse();
    let mut fit = RegressionFit::assemble(x.names().to_vec(), beta, covariance);
    fit.converged = converged && !separated;
    fit.separated = separated;
    fit.iterations = iterations;
    Ok(fit)
}

/// `(√w, y − μ)` at `beta`, with `w = μ(1 − μ)`.
fn working_quantities<T: Real>(x: &DesignMatrix<T>, y: &[T], beta: &[T]) -> (Vec<T>, Vec<T>) {
    (0..x.rows())
        .map(|i| {
            let mu = inv_logit(dot(x.row(i), beta));
            ((mu * (T::one() - mu)).sqrt(), y[i] - mu)
        })
        .unzip()
}

fn weighted_design<T: Real>(x: &DesignMatrix<T>, sqrt_w: &[T]) -> Vec<T> {
    let k = x.cols();
    let mut out = x.data().to_vec();
    for (i, &s) in sqrt_w.iter().enumerate() {
        for v in &mut out[i * k..(i + 1) * k] {
            *v = *v * s;
        }
    }
    out
}
