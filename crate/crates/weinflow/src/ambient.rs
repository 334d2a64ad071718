//! Warped-product ambient spaces N = [r_lo, r_hi] x S^n with metric
//! ds^2 = dr^2 + theta(r)^2 dsigma^2, and the convex radial potential the
//! monitors use.
//!
//! Three closed-form warps are built in (euclidean theta = r, spherical cap
//! theta = sin r below the equator, hyperbolic theta = sinh r), plus a
//! user-supplied warp given as a knot table with two derivatives, evaluated
//! by two-point quintic Hermite interpolation so value, slope, and curvature
//! come from one polynomial per interval.
//!
//! The potential chi solves chi' = theta, which makes its ambient Hessian
//! equal theta' times the metric; its strong-convexity constant over the
//! domain is c0 = min theta'. Nodes of the flow monitor shift by a multiple
//! of chi, so chi is evaluated pointwise alongside the warp.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmbientKind {
    Euclidean,
    Sphere,
    Hyperbolic,
    Custom,
}

/// Knot table for a custom warp: radius, theta, theta', theta'', chi.
/// chi must satisfy chi' = theta; both curves are interpolated with the
/// quintic two-point scheme, so the consistency is exact at knots and
/// O(h^4) between them.
#[derive(Debug, Clone)]
pub struct WarpTable {
    rs: Vec<f64>,
    theta: Vec<f64>,
    dtheta: Vec<f64>,
    ddtheta: Vec<f64>,
    chi: Vec<f64>,
    c0: f64,
}

impl WarpTable {
    /// Rows are (r, theta, theta', theta'', chi), strictly increasing in r.
    /// `c0` is the caller-certified lower bound for theta' on the domain.
    pub fn new(rows: &[(f64, f64, f64, f64, f64)], c0: f64) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::Argument("warp table needs at least two rows".into()));
        }
        if c0 <= 0.0 || !c0.is_finite() {
            return Err(Error::Argument(format!(
                "convexity constant c0 = {c0} must be positive and finite"
            )));
        }
        let mut t = Self {
            rs: Vec::new(),
            theta: Vec::new(),
            dtheta: Vec::new(),
            ddtheta: Vec::new(),
            chi: Vec::new(),
            c0,
        };
        for &(r, th, dth, ddth, chi) in rows {
            for v in [r, th, dth, ddth, chi] {
                if !v.is_finite() {
                    return Err(Error::NonFinite("warp table entry".into()));
                }
            }
            if let Some(&prev) = t.rs.last() {
                if r <= prev {
                    return Err(Error::Argument(format!(
                        "warp table radii must increase strictly: {prev} then {r}"
                    )));
                }
            }
            if th <= 0.0 {
                return Err(Error::Argument(format!("warp theta({r}) = {th} must be positive")));
            }
            if dth < c0 {
                return Err(Error::Argument(format!(
                    "warp theta'({r}) = {dth} undercuts the declared c0 = {c0}"
                )));
            }
            t.rs.push(r);
            t.theta.push(th);
            t.dtheta.push(dth);
            t.ddtheta.push(ddth);
            t.chi.push(chi);
        }
        Ok(t)
    }

    pub fn r_first(&self) -> f64 {
        self.rs[0]
    }

    pub fn r_last(&self) -> f64 {
        *self.rs.last().unwrap()
    }

    fn interval(&self, r: f64) -> usize {
        // last knot owns the right endpoint
        match self.rs.binary_search_by(|x| x.partial_cmp(&r).unwrap()) {
            Ok(i) => i.min(self.rs.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.rs.len() - 2),
        }
    }

    /// theta, theta', theta'' at r from one quintic per interval.
    fn theta_at(&self, r: f64) -> (f64, f64, f64) {
        let i = self.interval(r);
        quintic_hermite(
            r,
            self.rs[i],
            self.rs[i + 1],
            [self.theta[i], self.dtheta[i], self.ddtheta[i]],
            [self.theta[i + 1], self.dtheta[i + 1], self.ddtheta[i + 1]],
        )
    }

    /// chi, chi', chi'' at r; the quintic is built from chi' = theta,
    /// chi'' = theta'.
    fn chi_at(&self, r: f64) -> (f64, f64, f64) {
        let i = self.interval(r);
        quintic_hermite(
            r,
            self.rs[i],
            self.rs[i + 1],
            [self.chi[i], self.theta[i], self.dtheta[i]],
            [self.chi[i + 1], self.theta[i + 1], self.dtheta[i + 1]],
        )
    }
}

/// Two-point Taylor (quintic Hermite) interpolation: matches value, first,
/// and second derivative at both ends. Returns (p, p', p'') at x.
fn quintic_hermite(x: f64, x0: f64, x1: f64, lo: [f64; 3], hi: [f64; 3]) -> (f64, f64, f64) {
    // Newton form on the confluent node list [x0,x0,x0,x1,x1,x1]
    let z = [x0, x0, x0, x1, x1, x1];
    // divided-difference table seeded with repeated-node derivatives
    let dd = [
        [lo[0], hi[0]],
        [lo[1], hi[1]],
        [lo[2] / 2.0, hi[2] / 2.0],
    ];
    let h = x1 - x0;
    // order-1..5 differences across the junction
    let f01 = (dd[0][1] - dd[0][0]) / h;
    let c0 = dd[0][0];
    let c1 = dd[1][0];
    let c2 = dd[2][0];
    let d3 = (f01 - dd[1][0]) / h; // [x0,x0,x1]
    let d3b = (dd[1][1] - f01) / h; // [x0,x1,x1]
    let c3 = (d3 - dd[2][0]) / h; // [x0,x0,x0,x1]
    let d4 = (d3b - d3) / h; // [x0,x0,x1,x1]
    let d4b = (dd[2][1] - d3b) / h; // [x0,x1,x1,x1]
    let c4 = (d4 - c3) / h; // [x0,x0,x0,x1,x1]
    let c5 = ((d4b - d4) / h - c4) / h; // all six nodes
    let coef = [c0, c1, c2, c3, c4, c5];
    let mut p = coef[5];
    let mut dp = 0.0;
    let mut ddp = 0.0;
    for i in (0..5).rev() {
        let t = x - z[i];
        ddp = ddp * t + 2.0 * dp;
        dp = dp * t + p;
        p = p * t + coef[i];
    }
    (p, dp, ddp)
}

/// The convex potential evaluated at one radius. The two Hessian components
/// are the restrictions of the ambient Hessian to radial and tangential
/// planes; `margin` is their minimum minus the certified constant c0 and
/// must stay nonnegative on the domain.
#[derive(Debug, Clone, Copy)]
pub struct ChiEval {
    pub value: f64,
    pub radial_derivative: f64,
    pub hessian_radial: f64,
    pub hessian_tangential: f64,
    pub margin: f64,
}

/// The ambient space: a warp on a radial interval, with the derived
/// quantities every other module consumes.
#[derive(Debug, Clone)]
pub struct WarpedProductSpace {
    kind: AmbientKind,
    r_lo: f64,
    r_hi: f64,
    table: Option<WarpTable>,
}

impl WarpedProductSpace {
    fn validate_interval(r_lo: f64, r_hi: f64) -> Result<()> {
        if !r_lo.is_finite() || !r_hi.is_finite() {
            return Err(Error::NonFinite("domain endpoint".into()));
        }
        if r_lo <= 0.0 {
            return Err(Error::Argument(format!(
                "r_lo = {r_lo} must be positive; the radial coordinate degenerates at 0"
            )));
        }
        if r_hi <= r_lo {
            return Err(Error::Argument(format!(
                "domain [{r_lo}, {r_hi}] must have positive length"
            )));
        }
        Ok(())
    }

    pub fn euclidean(r_lo: f64, r_hi: f64) -> Result<Self> {
        Self::validate_interval(r_lo, r_hi)?;
        Ok(Self {
            kind: AmbientKind::Euclidean,
            r_lo,
            r_hi,
            table: None,
        })
    }

    /// Spherical cap; the domain must stay strictly below the equator so the
    /// warp keeps a positive slope and chi stays strongly convex.
    pub fn sphere(r_lo: f64, r_hi: f64) -> Result<Self> {
        Self::validate_interval(r_lo, r_hi)?;
        if r_hi >= FRAC_PI_2 {
            return Err(Error::Argument(format!(
                "spherical domain must satisfy r_hi < pi/2, got {r_hi}"
            )));
        }
        Ok(Self {
            kind: AmbientKind::Sphere,
            r_lo,
            r_hi,
            table: None,
        })
    }

    pub fn hyperbolic(r_lo: f64, r_hi: f64) -> Result<Self> {
        Self::validate_interval(r_lo, r_hi)?;
        Ok(Self {
            kind: AmbientKind::Hyperbolic,
            r_lo,
            r_hi,
            table: None,
        })
    }

    /// Custom warp; the table must cover [r_lo, r_hi].
    pub fn custom(table: WarpTable, r_lo: f64, r_hi: f64) -> Result<Self> {
        Self::validate_interval(r_lo, r_hi)?;
        if table.r_first() > r_lo || table.r_last() < r_hi {
            return Err(Error::Argument(format!(
                "warp table covers [{}, {}] but the domain is [{r_lo}, {r_hi}]",
                table.r_first(),
                table.r_last()
            )));
        }
        Ok(Self {
            kind: AmbientKind::Custom,
            r_lo,
            r_hi,
            table: Some(table),
        })
    }

    pub fn kind(&self) -> AmbientKind {
        self.kind
    }

    pub fn r_lo(&self) -> f64 {
        self.r_lo
    }

    pub fn r_hi(&self) -> f64 {
        self.r_hi
    }

    pub fn label(&self) -> &'static str {
        match self.kind {
            AmbientKind::Euclidean => "euclidean",
            AmbientKind::Sphere => "sphere",
            AmbientKind::Hyperbolic => "hyperbolic",
            AmbientKind::Custom => "custom",
        }
    }

    pub fn contains(&self, r: f64) -> bool {
        r.is_finite() && r >= self.r_lo && r <= self.r_hi
    }

    /// Errors with the offending radius when r leaves the domain; a hair of
    /// slack absorbs boundary roundoff.
    pub fn check_domain(&self, r: f64) -> Result<()> {
        let slack = 1e-12 * (1.0 + r.abs());
        if !r.is_finite() || r < self.r_lo - slack || r > self.r_hi + slack {
            return Err(Error::Domain {
                r,
                lo: self.r_lo,
                hi: self.r_hi,
            });
        }
        Ok(())
    }

    /// theta, theta', theta'' at radius r.
    pub fn theta(&self, r: f64) -> Result<(f64, f64, f64)> {
        self.check_domain(r)?;
        Ok(match self.kind {
            AmbientKind::Euclidean => (r, 1.0, 0.0),
            AmbientKind::Sphere => (r.sin(), r.cos(), -r.sin()),
            AmbientKind::Hyperbolic => (r.sinh(), r.cosh(), r.sinh()),
            AmbientKind::Custom => self.table.as_ref().unwrap().theta_at(r),
        })
    }

    /// Principal curvature of the centered slice {r = const}, theta'/theta.
    pub fn slice_curvature(&self, r: f64) -> Result<f64> {
        let (th, dth, _) = self.theta(r)?;
        Ok(dth / th)
    }

    /// Sectional curvatures of planes containing / orthogonal to the radial
    /// direction: (-theta''/theta, (1 - theta'^2)/theta^2).
    pub fn sectional(&self, r: f64) -> Result<(f64, f64)> {
        let (th, dth, ddth) = self.theta(r)?;
        Ok((-ddth / th, (1.0 - dth * dth) / (th * th)))
    }

    /// The convex potential at radius r: value, radial derivative, both
    /// Hessian components, and the slack over the certified constant.
    pub fn chi_eval(&self, r: f64) -> Result<ChiEval> {
        self.check_domain(r)?;
        let (value, dchi, ddchi) = match self.kind {
            AmbientKind::Euclidean => (0.5 * r * r, r, 1.0),
            AmbientKind::Sphere => (-r.cos(), r.sin(), r.cos()),
            AmbientKind::Hyperbolic => (r.cosh(), r.sinh(), r.cosh()),
            AmbientKind::Custom => self.table.as_ref().unwrap().chi_at(r),
        };
        let (th, dth, _) = self.theta(r)?;
        // the ambient Hessian of a radial function splits into the plain
        // second derivative on radial planes and chi' theta'/theta on
        // tangential ones
        let hessian_radial = ddchi;
        let hessian_tangential = dchi * dth / th;
        let margin = hessian_radial.min(hessian_tangential) - self.convexity_constant();
        Ok(ChiEval {
            value,
            radial_derivative: dchi,
            hessian_radial,
            hessian_tangential,
            margin,
        })
    }

    /// Samples chi_eval across the domain (endpoints included) and returns
    /// the smallest Hessian slack over the certified constant; a negative
    /// slack fails with the offending radius. Custom warps are certified
    /// this way at configuration time.
    pub fn certify_convexity(&self, samples: usize) -> Result<f64> {
        let m = samples.max(2);
        let mut worst = f64::INFINITY;
        for i in 0..m {
            let r = self.r_lo + (self.r_hi - self.r_lo) * i as f64 / (m - 1) as f64;
            let eval = self.chi_eval(r)?;
            if eval.margin < 0.0 {
                return Err(Error::Validation(format!(
                    "potential convexity fails at r = {r}: Hessian floor {} undercuts c0 = {}",
                    eval.margin + self.convexity_constant(),
                    self.convexity_constant()
                )));
            }
            worst = worst.min(eval.margin);
        }
        Ok(worst)
    }

    /// Strong-convexity constant of chi over the domain: the minimum of
    /// theta'. Each closed-form warp has a monotone slope, so the minimum
    /// sits at a domain endpoint.
    pub fn convexity_constant(&self) -> f64 {
        match self.kind {
            AmbientKind::Euclidean => 1.0,
            AmbientKind::Sphere => self.r_hi.cos(),
            AmbientKind::Hyperbolic => self.r_lo.cosh(),
            AmbientKind::Custom => self.table.as_ref().unwrap().c0,
        }
    }
}
