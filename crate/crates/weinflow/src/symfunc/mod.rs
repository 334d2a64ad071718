//! Symmetric-function calculus on principal curvatures.
//!
//! Everything in this module works on the eigenvalues themselves: the
//! catalog of curvature functions ([`CurvatureFunction`]), their admissible
//! cones ([`ConeSpec`]), first and second derivatives in the eigenframe
//! including the divided-difference terms that appear when differentiating a
//! spectral function twice ([`hessian_quadratic_form`],
//! [`tensor_first_derivative`]), the off-diagonal pinching bound used by the
//! curvature estimates ([`lemma_bound_pair`]), and a sampling certification
//! suite for the structural hypotheses ([`assumption_suite`]).

mod cone;
mod family;
mod poly;
mod suite;
mod tensor;

pub use cone::{ConeKind, ConeSpec};
pub use family::{CurvatureFunction, Family};
pub use poly::{binomial, elem, elem_all, elem_excl};
pub use suite::{
    assumption_suite, lemma_check, CertificationReport, CheckResult, LemmaSweep,
};
pub use tensor::{
    hessian_quadratic_form, lemma_bound_pair, tensor_first_derivative, SymmetricTensorPair,
    COALESCENCE_REL_TOL,
};

use crate::error::{Error, Result};

/// A vector of principal curvatures, canonicalized to ascending order.
///
/// All catalog functions are symmetric, so the sorted representative is used
/// everywhere; this makes permutation invariance of every downstream
/// computation structural rather than numerical.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureVector {
    vals: Vec<f64>,
}

impl CurvatureVector {
    /// Sorts the entries ascending. Rejects empty or non-finite input.
    pub fn new(mut vals: Vec<f64>) -> Result<Self> {
        if vals.is_empty() {
            return Err(Error::Argument("curvature vector must have n >= 1".into()));
        }
        if vals.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("curvature vector entry".into()));
        }
        vals.sort_by(|a, b| a.partial_cmp(b).expect("finite entries compare"));
        Ok(Self { vals })
    }

    pub fn n(&self) -> usize {
        self.vals.len()
    }

    /// Entries in ascending order.
    pub fn as_slice(&self) -> &[f64] {
        &self.vals
    }

    pub fn min(&self) -> f64 {
        self.vals[0]
    }

    pub fn max(&self) -> f64 {
        *self.vals.last().unwrap()
    }

    pub fn norm(&self) -> f64 {
        self.vals.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}
