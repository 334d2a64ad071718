//! Admissible cones for curvature functions.

use crate::error::{Error, Result};

use super::poly::elem;

/// Which open symmetric cone the function is defined on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeKind {
    /// All entries strictly positive.
    Positive,
    /// Garding cone of order k: sigma_1, ..., sigma_k all strictly positive.
    Garding { k: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConeSpec {
    kind: ConeKind,
    n: usize,
}

impl ConeSpec {
    pub fn positive(n: usize) -> Self {
        Self {
            kind: ConeKind::Positive,
            n,
        }
    }

    pub fn garding(k: usize, n: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::Argument(format!(
                "Garding cone order k = {k} must satisfy 1 <= k <= n = {n}"
            )));
        }
        Ok(Self {
            kind: ConeKind::Garding { k },
            n,
        })
    }

    pub fn kind(&self) -> ConeKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Membership with a signed margin: the minimum over the cone's defining
    /// inequalities (entries for the positive cone, sigma_1..sigma_k for a
    /// Garding cone). Positive margin means strict interior.
    pub fn contains(&self, kappa: &[f64]) -> (bool, f64) {
        let margin = match self.kind {
            ConeKind::Positive => kappa.iter().cloned().fold(f64::INFINITY, f64::min),
            ConeKind::Garding { k } => (1..=k as i64)
                .map(|j| elem(kappa, j))
                .fold(f64::INFINITY, f64::min),
        };
        (margin > 0.0, margin)
    }

    /// Whether the cone coincides with the positive cone as a set.
    pub fn is_positive_equivalent(&self) -> bool {
        match self.kind {
            ConeKind::Positive => true,
            ConeKind::Garding { k } => k == self.n,
        }
    }

    /// The value t for which (1, ..., 1, t) sits on the cone boundary, with
    /// every other defining inequality still strict. Used to anchor the
    /// boundary-vanishing ladder.
    ///
    /// For the positive cone this is 0. For a Garding cone of order k the
    /// binding constraint is sigma_k(1,...,1,t) = binom(n-1,k) +
    /// binom(n-1,k-1) t, which vanishes at t = -(n-k)/k; the lower-order
    /// sigmas vanish at strictly smaller t, so they stay positive there.
    pub fn ones_boundary_anchor(&self) -> f64 {
        match self.kind {
            ConeKind::Positive => 0.0,
            ConeKind::Garding { k } => -((self.n - k) as f64) / k as f64,
        }
    }

    pub fn label(&self) -> String {
        match self.kind {
            ConeKind::Positive => "positive".to_string(),
            ConeKind::Garding { k } => format!("garding({k})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positive_cone_margin_is_min_entry() {
        let c = ConeSpec::positive(3);
        let (inside, m) = c.contains(&[0.5, 2.0, 3.0]);
        assert!(inside);
        assert_eq!(m, 0.5);
        let (inside, m) = c.contains(&[-0.1, 2.0, 3.0]);
        assert!(!inside);
        assert_eq!(m, -0.1);
    }

    #[test]
    fn garding_cone_admits_one_negative_entry() {
        // (-0.2, 1, 1): sigma_1 = 1.8, sigma_2 = 1 - 0.4 = 0.6 > 0
        let c = ConeSpec::garding(2, 3).unwrap();
        let (inside, m) = c.contains(&[-0.2, 1.0, 1.0]);
        assert!(inside);
        assert!((m - 0.6).abs() < 1e-15);
        // (-1, 1, 1): sigma_2 = -1 < 0
        let (inside, _) = c.contains(&[-1.0, 1.0, 1.0]);
        assert!(!inside);
    }

    #[test]
    fn garding_order_n_equals_positive_as_a_set() {
        let g = ConeSpec::garding(3, 3).unwrap();
        let p = ConeSpec::positive(3);
        for kappa in [
            vec![1.0, 2.0, 3.0],
            vec![-0.5, 1.0, 1.0],
            vec![0.0, 1.0, 1.0],
            vec![-1.0, -1.0, 5.0],
        ] {
            assert_eq!(g.contains(&kappa).0, p.contains(&kappa).0, "{kappa:?}");
        }
        assert!(g.is_positive_equivalent());
        assert!(!ConeSpec::garding(2, 3).unwrap().is_positive_equivalent());
    }

    #[test]
    fn boundary_anchor_lies_on_the_boundary() {
        for (k, n) in [(1usize, 2usize), (2, 3), (2, 5), (3, 5)] {
            let c = ConeSpec::garding(k, n).unwrap();
            let t = c.ones_boundary_anchor();
            let mut kappa = vec![1.0; n];
            kappa[n - 1] = t;
            let sk = elem(&kappa, k as i64);
            assert!(sk.abs() < 1e-12, "sigma_k at anchor = {sk}");
            for j in 1..k as i64 {
                assert!(elem(&kappa, j) > 0.0);
            }
            // just inside: strictly admissible
            kappa[n - 1] = t + 1e-6;
            assert!(c.contains(&kappa).0);
        }
        assert_eq!(ConeSpec::positive(4).ones_boundary_anchor(), 0.0);
    }
}
