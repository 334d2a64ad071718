//! Second-derivative calculus of curvature functions in the eigenframe, and
//! the reduction from tensor arguments (metric plus shape tensor) to
//! eigenvalue arguments.
//!
//! Differentiating a symmetric eigenvalue function twice produces two kinds
//! of terms: the plain Hessian in the eigenvalues against the diagonal of the
//! perturbation, and divided differences (F_i - F_j)/(kappa_i - kappa_j)
//! against the off-diagonal entries. Near an eigenvalue crossing the divided
//! difference is replaced by its limit F_ii - F_ij, which keeps the quadratic
//! form continuous across the crossing.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

use super::family::CurvatureFunction;
use super::CurvatureVector;

/// Pairs closer than this, relative to max(1, |kappa|), take the coalescent
/// limit of the divided difference.
pub const COALESCENCE_REL_TOL: f64 = 1e-7;

/// A positive-definite metric together with a symmetric second fundamental
/// form, diagonalized once on construction.
///
/// The generalized problem h x = kappa g x is reduced by the Cholesky factor
/// of g to an ordinary symmetric eigenproblem; eigenvectors are returned
/// g-orthonormal and eigenvalues ascending, matching [`CurvatureVector`]
/// order.
#[derive(Debug, Clone)]
pub struct SymmetricTensorPair {
    eigenvalues: Vec<f64>,
    /// Columns are the g-orthonormal principal directions.
    eigenvectors: DMatrix<f64>,
}

fn require_symmetric(m: &DMatrix<f64>, what: &str) -> Result<()> {
    let scale = 1.0 + m.amax();
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            if (m[(i, j)] - m[(j, i)]).abs() > 1e-12 * scale {
                return Err(Error::Validation(format!(
                    "{what} is not symmetric at ({i},{j}): {} vs {}",
                    m[(i, j)],
                    m[(j, i)]
                )));
            }
        }
    }
    Ok(())
}

impl SymmetricTensorPair {
    pub fn new(g: &DMatrix<f64>, h: &DMatrix<f64>) -> Result<Self> {
        let n = g.nrows();
        if n == 0 || g.ncols() != n || h.nrows() != n || h.ncols() != n {
            return Err(Error::Argument(
                "metric and shape tensor must be square of equal size".into(),
            ));
        }
        if g.iter().chain(h.iter()).any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("tensor entry".into()));
        }
        require_symmetric(g, "metric")?;
        require_symmetric(h, "shape tensor")?;
        let chol = g.clone().cholesky().ok_or_else(|| {
            Error::Degenerate("metric is not positive definite".into())
        })?;
        let l_inv = chol
            .l()
            .try_inverse()
            .ok_or_else(|| Error::Degenerate("metric factor is singular".into()))?;
        // reduce h x = kappa g x to the ordinary problem (L^-1 h L^-T) y =
        // kappa y with x = L^-T y; symmetrize to shed rounding skew
        let mut a = &l_inv * h * l_inv.transpose();
        let at = a.transpose();
        a = (a + at) * 0.5;
        let eig = a.symmetric_eigen();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| {
            eig.eigenvalues[i]
                .partial_cmp(&eig.eigenvalues[j])
                .expect("finite eigenvalues")
        });
        let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let mut eigenvectors = DMatrix::zeros(n, n);
        for (col, &i) in order.iter().enumerate() {
            eigenvectors.set_column(col, &(l_inv.transpose() * eig.eigenvectors.column(i)));
        }
        Ok(Self {
            eigenvalues,
            eigenvectors,
        })
    }

    /// Ascending eigenvalues of the shape tensor against the metric.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// g-orthonormal eigenvector columns, aligned with `eigenvalues`.
    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    pub fn principal_curvatures(&self) -> Result<CurvatureVector> {
        CurvatureVector::new(self.eigenvalues.clone())
    }
}

/// dF/dh_ij in the coordinates of the original tensors: sum over principal
/// directions of F_a x_a x_a^T. Valid across eigenvalue crossings since F is
/// continuously differentiable as a tensor function.
pub fn tensor_first_derivative(
    f: &CurvatureFunction,
    pair: &SymmetricTensorPair,
) -> Result<DMatrix<f64>> {
    let kappa = pair.principal_curvatures()?;
    let grad = f.gradient(&kappa)?;
    let n = kappa.n();
    let mut out = DMatrix::zeros(n, n);
    for (a, &ga) in grad.iter().enumerate().take(n) {
        let xa = pair.eigenvectors().column(a);
        out += ga * xa * xa.transpose();
    }
    Ok(out)
}

/// (F_i - F_j)/(kappa_i - kappa_j), switching to the limit F_ii - F_ij when
/// the pair has coalesced to within the relative tolerance.
fn divided_difference(
    kappa: &[f64],
    grad: &[f64],
    hess: &DMatrix<f64>,
    i: usize,
    j: usize,
    threshold: f64,
) -> f64 {
    let gap = kappa[i] - kappa[j];
    if gap.abs() <= threshold {
        hess[(i, i)] - hess[(i, j)]
    } else {
        (grad[i] - grad[j]) / gap
    }
}

fn coalescence_threshold(kappa: &CurvatureVector) -> f64 {
    COALESCENCE_REL_TOL * kappa.norm().max(1.0)
}

fn require_eta(eta: &DMatrix<f64>, n: usize) -> Result<()> {
    if eta.nrows() != n || eta.ncols() != n {
        return Err(Error::Argument(format!(
            "perturbation must be {n}x{n}, got {}x{}",
            eta.nrows(),
            eta.ncols()
        )));
    }
    if eta.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("perturbation entry".into()));
    }
    require_symmetric(eta, "perturbation")
}

/// The second derivative of F as a tensor function, contracted twice with a
/// symmetric perturbation `eta` expressed in the eigenframe:
///
///   Q(eta) = sum_ij F_ij eta_ii eta_jj
///          + sum_{i != j} (F_i - F_j)/(kappa_i - kappa_j) eta_ij^2.
///
/// Concavity of F on its cone makes Q non-positive.
pub fn hessian_quadratic_form(
    f: &CurvatureFunction,
    kappa: &CurvatureVector,
    eta: &DMatrix<f64>,
) -> Result<f64> {
    let n = kappa.n();
    require_eta(eta, n)?;
    let grad = f.gradient(kappa)?;
    let hess = f.hessian(kappa)?;
    let ks = kappa.as_slice();
    let threshold = coalescence_threshold(kappa);
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            q += hess[(i, j)] * eta[(i, i)] * eta[(j, j)];
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let dd = divided_difference(ks, &grad, &hess, i, j, threshold);
                q += dd * eta[(i, j)] * eta[(i, j)];
            }
        }
    }
    Ok(q)
}

/// Both sides of the off-diagonal pinching bound
///
///   sum_{i != j} (F_i - F_j)/(kappa_i - kappa_j) eta_ij^2
///     <= 2/(kappa_n - kappa_1) * sum_i (F_n - F_i) eta_{n i}^2,
///
/// returned as (lhs, rhs). Requires the extreme curvatures to be separated;
/// interior coalescent pairs are handled by the divided-difference limit.
/// For n = 2 the two sides agree identically.
pub fn lemma_bound_pair(
    f: &CurvatureFunction,
    kappa: &CurvatureVector,
    eta: &DMatrix<f64>,
) -> Result<(f64, f64)> {
    let n = kappa.n();
    require_eta(eta, n)?;
    let ks = kappa.as_slice();
    let threshold = coalescence_threshold(kappa);
    let spread = ks[n - 1] - ks[0];
    if spread <= threshold {
        return Err(Error::Degenerate(format!(
            "extreme curvatures coalesce (spread {spread:.3e}); the bound's right side is undefined"
        )));
    }
    let grad = f.gradient(kappa)?;
    let hess = f.hessian(kappa)?;
    let mut lhs = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let dd = divided_difference(ks, &grad, &hess, i, j, threshold);
                lhs += dd * eta[(i, j)] * eta[(i, j)];
            }
        }
    }
    let top = n - 1;
    let mut rhs = 0.0;
    for i in 0..top {
        rhs += (grad[top] - grad[i]) * eta[(top, i)] * eta[(top, i)];
    }
    rhs *= 2.0 / spread;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symfunc::family::Family;
    use nalgebra::dmatrix;

    fn kv(v: &[f64]) -> CurvatureVector {
        CurvatureVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn diagonal_pair_recovers_scaled_eigenvalues() {
        let g = dmatrix![1.0, 0.0; 0.0, 4.0];
        let h = dmatrix![2.0, 0.0; 0.0, 4.0];
        let pair = SymmetricTensorPair::new(&g, &h).unwrap();
        let ev = pair.eigenvalues();
        assert!((ev[0] - 1.0).abs() < 1e-14);
        assert!((ev[1] - 2.0).abs() < 1e-14);
        // g-orthonormality of the columns
        let x = pair.eigenvectors();
        let gram = x.transpose() * &g * x;
        assert!((gram - DMatrix::identity(2, 2)).amax() < 1e-12);
    }

    #[test]
    fn rotated_pair_matches_hand_computation() {
        // rotate diag(1,3) by 30 degrees, keep g = I
        let c = (3.0f64).sqrt() / 2.0;
        let s = 0.5;
        let r = dmatrix![c, -s; s, c];
        let h = &r * dmatrix![1.0, 0.0; 0.0, 3.0] * r.transpose();
        let g = DMatrix::identity(2, 2);
        let pair = SymmetricTensorPair::new(&g, &h).unwrap();
        assert!((pair.eigenvalues()[0] - 1.0).abs() < 1e-12);
        assert!((pair.eigenvalues()[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_indefinite_metric_and_asymmetry() {
        let bad_g = dmatrix![1.0, 0.0; 0.0, -1.0];
        let h = DMatrix::identity(2, 2);
        assert!(SymmetricTensorPair::new(&bad_g, &h).is_err());
        let g = DMatrix::identity(2, 2);
        let bad_h = dmatrix![1.0, 0.5; 0.1, 1.0];
        assert!(SymmetricTensorPair::new(&g, &bad_h).is_err());
    }

    #[test]
    fn first_derivative_of_the_gauss_root() {
        let f = CurvatureFunction::new(Family::GaussRoot, 2).unwrap();
        let g = DMatrix::identity(2, 2);
        let h = dmatrix![1.0, 0.0; 0.0, 2.0];
        let pair = SymmetricTensorPair::new(&g, &h).unwrap();
        let d = tensor_first_derivative(&f, &pair).unwrap();
        // F = sqrt(k1 k2), F_1 = k2 / (2 F), F_2 = k1 / (2 F)
        let root2 = (2.0f64).sqrt();
        assert!((d[(0, 0)] - 1.0 / root2).abs() < 1e-13);
        assert!((d[(1, 1)] - 1.0 / (2.0 * root2)).abs() < 1e-13);
        assert!(d[(0, 1)].abs() < 1e-13);
    }

    #[test]
    fn quadratic_form_diagonal_direction_at_the_umbilic_point() {
        let f = CurvatureFunction::new(Family::GaussRoot, 2).unwrap();
        let k = kv(&[1.0, 1.0]);
        let eta = dmatrix![1.0, 0.0; 0.0, -1.0];
        let q = hessian_quadratic_form(&f, &k, &eta).unwrap();
        assert!((q - (-1.0)).abs() < 1e-14, "q = {q}");
    }

    #[test]
    fn quadratic_form_offdiagonal_direction_uses_the_coalescent_limit() {
        let f = CurvatureFunction::new(Family::GaussRoot, 2).unwrap();
        let k = kv(&[1.0, 1.0]);
        let eta = dmatrix![0.0, 1.0; 1.0, 0.0];
        // limit F_11 - F_12 = -1/4 - 1/4 = -1/2, counted for both (1,2) and (2,1)
        let q = hessian_quadratic_form(&f, &k, &eta).unwrap();
        assert!((q - (-1.0)).abs() < 1e-14, "q = {q}");
    }

    #[test]
    fn quadratic_form_is_continuous_across_a_crossing() {
        let f = CurvatureFunction::new(Family::HarmonicMean, 3).unwrap();
        let eta = dmatrix![0.0, 1.0, 0.3; 1.0, 0.0, -0.2; 0.3, -0.2, 0.0];
        let base = kv(&[1.0, 1.0, 2.0]);
        let q0 = hessian_quadratic_form(&f, &base, &eta).unwrap();
        let nearby = kv(&[1.0, 1.0 + 0.5e-7, 2.0]);
        let q1 = hessian_quadratic_form(&f, &nearby, &eta).unwrap();
        assert!((q0 - q1).abs() < 1e-6 * q0.abs().max(1.0), "{q0} vs {q1}");
    }

    #[test]
    fn pinching_bound_is_an_identity_for_two_curvatures() {
        let eta = dmatrix![0.0, 1.0; 1.0, 0.0];
        let gauss = CurvatureFunction::new(Family::GaussRoot, 2).unwrap();
        let k = kv(&[1.0, 2.0]);
        let (lhs, rhs) = lemma_bound_pair(&gauss, &k, &eta).unwrap();
        let expect = -1.0 / (2.0f64).sqrt();
        assert!((lhs - expect).abs() < 1e-15, "lhs = {lhs}");
        assert!((lhs - rhs).abs() < 1e-15);

        let harm = CurvatureFunction::new(Family::HarmonicMean, 2).unwrap();
        let (lhs, rhs) = lemma_bound_pair(&harm, &k, &eta).unwrap();
        assert!((lhs - (-2.0 / 3.0)).abs() < 1e-15, "lhs = {lhs}");
        assert!((lhs - rhs).abs() < 1e-15);
    }

    #[test]
    fn pinching_bound_rejects_a_fully_coalesced_spectrum() {
        let f = CurvatureFunction::new(Family::GaussRoot, 2).unwrap();
        let k = kv(&[1.0, 1.0]);
        let eta = dmatrix![0.0, 1.0; 1.0, 0.0];
        assert!(lemma_bound_pair(&f, &k, &eta).is_err());
    }
}
