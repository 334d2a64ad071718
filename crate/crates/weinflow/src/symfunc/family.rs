//! The catalog of curvature functions.
//!
//! Every member is symmetric, positively homogeneous of degree one, concave
//! on its cone, and normalized by its value at (1, ..., 1). Internally each
//! one reduces to one of two engines: a k-th root of sigma_k or a ratio
//! sigma_k / sigma_{k-1}, so derivative formulas live in exactly two places.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

use super::cone::ConeSpec;
use super::poly::{binomial, elem, elem_excl};
use super::CurvatureVector;

/// Catalog identifier, carrying the order parameter where one exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Mean curvature sigma_1. Defined on the Garding cone of order 1; does
    /// not vanish on the positive cone's boundary, which the certification
    /// suite flags.
    Sigma1,
    /// sigma_k^(1/k) on the Garding cone of order k.
    SigmaKRoot { k: usize },
    /// Gauss curvature root sigma_n^(1/n) on the positive cone.
    GaussRoot,
    /// Harmonic mean n-fold ratio sigma_n / sigma_{n-1} on the positive cone,
    /// up to the catalog's normalization 1/n at the ones vector.
    HarmonicMean,
    /// Ratio sigma_k / sigma_{k-1} on the Garding cone of order k.
    Quotient { k: usize },
}

#[derive(Debug, Clone, Copy)]
enum Engine {
    Root { k: usize },
    Ratio { k: usize },
}

/// A catalog function instantiated at a fixed dimension, together with its
/// cone, normalization, and boundary behavior.
#[derive(Debug, Clone)]
pub struct CurvatureFunction {
    family: Family,
    n: usize,
    cone: ConeSpec,
    engine: Engine,
    normalization: f64,
    boundary_vanishing: bool,
}

impl CurvatureFunction {
    pub fn new(family: Family, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Argument("dimension n must be >= 1".into()));
        }
        let (engine, cone, normalization, boundary_vanishing) = match family {
            Family::Sigma1 => (
                Engine::Ratio { k: 1 },
                ConeSpec::garding(1, n)?,
                n as f64,
                false,
            ),
            Family::SigmaKRoot { k } => {
                if k == 0 || k > n {
                    return Err(Error::Argument(format!(
                        "sigma_k_root order k = {k} must satisfy 1 <= k <= n = {n}"
                    )));
                }
                (
                    Engine::Root { k },
                    ConeSpec::garding(k, n)?,
                    binomial(n, k).powf(1.0 / k as f64),
                    true,
                )
            }
            Family::GaussRoot => (Engine::Root { k: n }, ConeSpec::positive(n), 1.0, true),
            Family::HarmonicMean => (
                Engine::Ratio { k: n },
                ConeSpec::positive(n),
                1.0 / n as f64,
                true,
            ),
            Family::Quotient { k } => {
                if k == 0 || k > n {
                    return Err(Error::Argument(format!(
                        "quotient order k = {k} must satisfy 1 <= k <= n = {n}"
                    )));
                }
                (
                    Engine::Ratio { k },
                    ConeSpec::garding(k, n)?,
                    (n - k + 1) as f64 / k as f64,
                    true,
                )
            }
        };
        Ok(Self {
            family,
            n,
            cone,
            engine,
            normalization,
            boundary_vanishing,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cone(&self) -> &ConeSpec {
        &self.cone
    }

    /// F at the ones vector, in closed form.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// Whether F tends to 0 along the boundary-vanishing ladder of its cone.
    pub fn boundary_vanishing(&self) -> bool {
        self.boundary_vanishing
    }

    /// CLI-facing token, e.g. "sigma_k_root:2".
    pub fn name(&self) -> String {
        match self.family {
            Family::Sigma1 => "sigma1".to_string(),
            Family::SigmaKRoot { k } => format!("sigma_k_root:{k}"),
            Family::GaussRoot => "gauss_root".to_string(),
            Family::HarmonicMean => "harmonic_mean".to_string(),
            Family::Quotient { k } => format!("quotient:{k}"),
        }
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(Error::Argument(format!(
                "{} is instantiated at n = {}, got {} curvatures",
                self.name(),
                self.n,
                len
            )));
        }
        Ok(())
    }

    fn check_admissible(&self, kappa: &[f64]) -> Result<()> {
        let (inside, margin) = self.cone.contains(kappa);
        if !inside {
            return Err(Error::Admissibility {
                margin,
                detail: format!(
                    "{:?} outside {} cone of {}",
                    kappa,
                    self.cone.label(),
                    self.name()
                ),
            });
        }
        Ok(())
    }

    /// F(kappa). Errors if kappa leaves the admissible cone.
    pub fn evaluate(&self, kappa: &CurvatureVector) -> Result<f64> {
        self.check_dim(kappa.n())?;
        self.check_admissible(kappa.as_slice())?;
        Ok(self.raw_value(kappa.as_slice()))
    }

    /// F without the admissibility check, defined on the closed cone.
    /// Used by boundary ladders and failure diagnostics; on the boundary the
    /// root engine clamps sigma_k at zero so rounding cannot produce NaN.
    pub fn raw_value(&self, kappa: &[f64]) -> f64 {
        match self.engine {
            Engine::Root { k } => elem(kappa, k as i64).max(0.0).powf(1.0 / k as f64),
            Engine::Ratio { k } => {
                let k = k as i64;
                elem(kappa, k) / elem(kappa, k - 1)
            }
        }
    }

    /// Partial derivatives dF/dkappa_i, aligned with the ascending entries of
    /// `kappa`. Strictly positive and non-increasing on the cone.
    pub fn gradient(&self, kappa: &CurvatureVector) -> Result<Vec<f64>> {
        self.check_dim(kappa.n())?;
        self.check_admissible(kappa.as_slice())?;
        let ks = kappa.as_slice();
        let grad = match self.engine {
            Engine::Root { k } => {
                let s = elem(ks, k as i64);
                let c = s.powf(1.0 / k as f64 - 1.0) / k as f64;
                (0..self.n)
                    .map(|i| c * elem_excl(ks, k as i64 - 1, &[i]))
                    .collect()
            }
            Engine::Ratio { k } => {
                let k = k as i64;
                let p = elem(ks, k);
                let q = elem(ks, k - 1);
                (0..self.n)
                    .map(|i| {
                        let pi = elem_excl(ks, k - 1, &[i]);
                        let qi = elem_excl(ks, k - 2, &[i]);
                        (pi * q - p * qi) / (q * q)
                    })
                    .collect()
            }
        };
        Ok(grad)
    }

    /// Second derivatives d^2 F / dkappa_i dkappa_j as a dense symmetric
    /// matrix, aligned with the ascending entries of `kappa`.
    pub fn hessian(&self, kappa: &CurvatureVector) -> Result<DMatrix<f64>> {
        self.check_dim(kappa.n())?;
        self.check_admissible(kappa.as_slice())?;
        let ks = kappa.as_slice();
        let n = self.n;
        let mut h = DMatrix::zeros(n, n);
        match self.engine {
            Engine::Root { k } => {
                let kf = k as f64;
                let s = elem(ks, k as i64);
                let a = (1.0 / kf) * (1.0 / kf - 1.0) * s.powf(1.0 / kf - 2.0);
                let b = s.powf(1.0 / kf - 1.0) / kf;
                let p: Vec<f64> = (0..n)
                    .map(|i| elem_excl(ks, k as i64 - 1, &[i]))
                    .collect();
                for i in 0..n {
                    for j in 0..n {
                        let mut v = a * p[i] * p[j];
                        if i != j {
                            v += b * elem_excl(ks, k as i64 - 2, &[i, j]);
                        }
                        h[(i, j)] = v;
                    }
                }
            }
            Engine::Ratio { k } => {
                let k = k as i64;
                let p = elem(ks, k);
                let q = elem(ks, k - 1);
                let q2 = q * q;
                let pd: Vec<f64> = (0..n).map(|i| elem_excl(ks, k - 1, &[i])).collect();
                let qd: Vec<f64> = (0..n).map(|i| elem_excl(ks, k - 2, &[i])).collect();
                for i in 0..n {
                    for j in 0..n {
                        let (pij, qij) = if i == j {
                            (0.0, 0.0)
                        } else {
                            (
                                elem_excl(ks, k - 2, &[i, j]),
                                elem_excl(ks, k - 3, &[i, j]),
                            )
                        };
                        h[(i, j)] = pij / q - (pd[i] * qd[j] + pd[j] * qd[i]) / q2
                            - p * qij / q2
                            + 2.0 * p * qd[i] * qd[j] / (q2 * q);
                    }
                }
            }
        }
        Ok(h)
    }
}
