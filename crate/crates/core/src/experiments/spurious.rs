use rand::Rng;
use rand_distr::StandardNormal;

use crate::inference::{ols, DesignMatrix};
use crate::{Error, Result};

fn check_unit(name: &str, v: f64) -> Result<()> {
    if (-1.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::argument(format!("{name} = {v} must lie in [-1, 1]")))
    }
}

/// Standardised coefficient of `Y_j(t−1)` on `Y_i(t)` produced by latent
/// homophily alone in the linear-Gaussian model: the product of the
/// trait-to-outcome path for `j`, the trait correlation across the tie, and
/// the trait-to-outcome path for `i`.
pub fn spurious_coefficient(rho_jy: f64, rho_xx: f64, rho_xy: f64) -> Result<f64> {
    check_unit("rho_jy", rho_jy)?;
    check_unit("rho_xx", rho_xx)?;
    check_unit("rho_xy", rho_xy)?;
    Ok(rho_jy * rho_xx * rho_xy)
}

/// Simulates `n` linked pairs from the structural model
///
/// ```text
/// X_j ~ N(0, 1)
/// X_i = rho_xx·X_j + √(1 − rho_xx²)·e₁
/// Y_j = rho_jy·X_j + √(1 − rho_jy²)·e₂
/// Y_i = rho_xy·X_i + √(1 − rho_xy²)·e₃
/// ```
///
/// with no path from `Y_j` to `Y_i`, and returns the least-squares slope of
/// standardised `Y_i` on standardised `Y_j`.
pub fn simulate_spurious_coefficient<R: Rng + ?Sized>(
    rho_jy: f64,
    rho_xx: f64,
    rho_xy: f64,
    n: usize,
    rng: &mut R,
) -> Result<f64> {
    spurious_coefficient(rho_jy, rho_xx, rho_xy)?;
    if n < 3 {
        return Err(Error::InsufficientData { rows: n, columns: 2 });
    }
    let mut normal = || -> f64 { rng.sample(StandardNormal) };
    let resid = |rho: f64| (1.0 - rho * rho).sqrt();
    let (mut yj, mut yi) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for _ in 0..n {
        let xj = normal();
        let xi = rho_xx * xj + resid(rho_xx) * normal();
        yj.push(rho_jy * xj + resid(rho_jy) * normal());
        yi.push(rho_xy * xi + resid(rho_xy) * normal());
    }
    let x = DesignMatrix::from_columns(true, vec![("y_j_lag".to_string(), standardize(&yj))])?;
    let fit = ols(&x, &standardize(&yi))?;
    Ok(fit.coefficients[1])
}

fn standardize(v: &[f64]) -> Vec<f64> {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    let sd = (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    v.iter().map(|x| (x - m) / sd).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::substream;
    use proptest::prelude::*;

    #[test]
    fn boundary_values() {
        assert_eq!(spurious_coefficient(0.0, 0.7, -0.3).unwrap(), 0.0);
        assert_eq!(spurious_coefficient(1.0, 1.0, 1.0).unwrap(), 1.0);
        assert!((spurious_coefficient(0.8, -0.5, 0.6).unwrap() + 0.24).abs() < 1e-15);
        assert!(spurious_coefficient(1.1, 0.0, 0.0).is_err());
        assert!(spurious_coefficient(0.0, f64::NAN, 0.0).is_err());
    }

    #[test]
    fn simulation_recovers_the_product() {
        let got = simulate_spurious_coefficient(0.8, -0.5, 0.6, 100_000, &mut substream(11, 0)).unwrap();
        assert!((got + 0.24).abs() < 0.03, "{got}");
    }

    proptest! {
        #[test]
        fn odd_and_multilinear(a in -1.0f64..=1.0, b in -1.0f64..=1.0, c in -1.0f64..=1.0, t in 0.0f64..=1.0, a2 in -1.0f64..=1.0) {
            let f = |a, b, c| spurious_coefficient(a, b, c).unwrap();
            prop_assert_eq!(f(-a, b, c), -f(a, b, c));
            prop_assert_eq!(f(a, -b, c), -f(a, b, c));
            prop_assert_eq!(f(a, b, -c), -f(a, b, c));
            let mix = t * a + (1.0 - t) * a2;
            prop_assert!((f(mix, b, c) - (t * f(a, b, c) + (1.0 - t) * f(a2, b, c))).abs() < 1e-12);
        }
    }
}
