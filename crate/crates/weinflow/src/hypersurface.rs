//! Discretized graph hypersurfaces over a round base, in the three
//! rotationally reduced classes the flow integrates: a centered slice
//! (umbilic, any dimension), a closed curve over S^1, and an axisymmetric
//! surface over S^2 described by its meridian profile.
//!
//! A hypersurface is the radial graph r = u(angle). Derivatives are centered
//! second-order differences; the curve is periodic, while the axisymmetric
//! profile uses ghost reflection at the poles, which enforces the smooth-pole
//! condition u' = 0 there. Principal curvatures follow the warped-product
//! graph formulas
//!
//!   kappa_profile = (-theta u'' + theta^2 theta' + 2 theta' u'^2)
//!                   / (u'^2 + theta^2)^(3/2),
//!   kappa_rotation = (theta theta' - u' cot(angle)) / (v theta^2),
//!
//! with theta = theta(u) and the gradient factor v = sqrt(u'^2 + theta^2) /
//! theta; at the poles u' cot(angle) tends to u'' and the two curvatures
//! coincide, so both are set to the common limit there.

use crate::ambient::{AmbientKind, WarpedProductSpace};
use crate::error::{Error, Result};
use crate::symfunc::{CurvatureFunction, CurvatureVector};
use nalgebra::DMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceClass {
    /// Centered slice {r = u}; all principal curvatures equal theta'/theta.
    /// One degree of freedom, n of them reported.
    Umbilic { n: usize },
    /// Closed curve r = u(phi) over S^1; one principal curvature.
    Curve,
    /// Axisymmetric surface r = u(polar angle) over S^2; two principal
    /// curvatures (meridian profile and rotation).
    Axisymmetric,
}

impl SurfaceClass {
    pub fn label(&self) -> &'static str {
        match self {
            SurfaceClass::Umbilic { .. } => "umbilic",
            SurfaceClass::Curve => "curve",
            SurfaceClass::Axisymmetric => "axisymmetric",
        }
    }
}

/// Geometry of one node: graph data, gradient factor, radial support, and
/// the principal curvatures.
#[derive(Debug, Clone)]
pub struct NodeGeometry {
    /// Base-point angle of the node (0 for the umbilic class).
    pub angle: f64,
    pub u: f64,
    pub du: f64,
    pub ddu: f64,
    /// Warp and its slope evaluated at u.
    pub theta: f64,
    pub dtheta: f64,
    /// Graph gradient factor sqrt(u'^2 + theta^2)/theta >= 1.
    pub v: f64,
    /// Radial support <unit radial field, unit normal> = theta /
    /// sqrt(u'^2 + theta^2); computed from its own formula rather than as
    /// 1/v, so the product identity v * vtilde = 1 is a genuine check.
    pub vtilde: f64,
    /// Induced metric in graph coordinates, m x m with m the number of
    /// principal curvatures. At the axisymmetric poles, where the azimuthal
    /// coordinate degenerates, the pair (g, h) is given in an orthonormal
    /// tangent frame instead.
    pub g: DMatrix<f64>,
    /// Second fundamental form in the same frame as `g`; the generalized
    /// eigenvalues of (h, g) are the entries of `kappa`.
    pub h: DMatrix<f64>,
    /// Unit normal components: nu[0] is the radial part, the rest are the
    /// angular parts in graph coordinates.
    pub nu: Vec<f64>,
    pub kappa: CurvatureVector,
}

/// Per-node geometry for a whole profile, with the extremes the flow and the
/// monitors consume.
#[derive(Debug, Clone)]
pub struct GeometryReport {
    pub nodes: Vec<NodeGeometry>,
}

impl GeometryReport {
    pub fn kappa_min(&self) -> f64 {
        self.nodes
            .iter()
            .map(|n| n.kappa.min())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn kappa_max(&self) -> f64 {
        self.nodes
            .iter()
            .map(|n| n.kappa.max())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn vtilde_min(&self) -> f64 {
        self.nodes
            .iter()
            .map(|n| n.vtilde)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn u_min(&self) -> f64 {
        self.nodes.iter().map(|n| n.u).fold(f64::INFINITY, f64::min)
    }

    pub fn u_max(&self) -> f64 {
        self.nodes
            .iter()
            .map(|n| n.u)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Debug, Clone)]
pub struct GraphHypersurface {
    class: SurfaceClass,
    space: WarpedProductSpace,
    nodes: usize,
}

impl GraphHypersurface {
    pub fn umbilic(space: WarpedProductSpace, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Argument("umbilic dimension n must be >= 1".into()));
        }
        Ok(Self {
            class: SurfaceClass::Umbilic { n },
            space,
            nodes: 1,
        })
    }

    pub fn curve(space: WarpedProductSpace, nodes: usize) -> Result<Self> {
        if nodes < 8 {
            return Err(Error::Argument(format!(
                "curve grid needs at least 8 nodes, got {nodes}"
            )));
        }
        Ok(Self {
            class: SurfaceClass::Curve,
            space,
            nodes,
        })
    }

    pub fn axisymmetric(space: WarpedProductSpace, nodes: usize) -> Result<Self> {
        if nodes < 9 {
            return Err(Error::Argument(format!(
                "axisymmetric grid needs at least 9 nodes pole to pole, got {nodes}"
            )));
        }
        Ok(Self {
            class: SurfaceClass::Axisymmetric,
            space,
            nodes,
        })
    }

    pub fn class(&self) -> SurfaceClass {
        self.class
    }

    pub fn space(&self) -> &WarpedProductSpace {
        &self.space
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    /// Number of principal curvatures per node.
    pub fn curvature_dimension(&self) -> usize {
        match self.class {
            SurfaceClass::Umbilic { n } => n,
            SurfaceClass::Curve => 1,
            SurfaceClass::Axisymmetric => 2,
        }
    }

    /// Angular grid spacing; 2 pi / N around the circle, pi / (N - 1) pole
    /// to pole. The umbilic class has no grid and reports 1.
    pub fn parameter_step(&self) -> f64 {
        match self.class {
            SurfaceClass::Umbilic { .. } => 1.0,
            SurfaceClass::Curve => 2.0 * std::f64::consts::PI / self.nodes as f64,
            SurfaceClass::Axisymmetric => std::f64::consts::PI / (self.nodes - 1) as f64,
        }
    }

    pub fn angle(&self, i: usize) -> f64 {
        match self.class {
            SurfaceClass::Umbilic { .. } => 0.0,
            _ => i as f64 * self.parameter_step(),
        }
    }

    fn check_profile(&self, u: &[f64]) -> Result<()> {
        if u.len() != self.nodes {
            return Err(Error::Argument(format!(
                "profile has {} values, grid has {} nodes",
                u.len(),
                self.nodes
            )));
        }
        if u.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("profile value".into()));
        }
        Ok(())
    }

    /// Full geometry of the profile; errors if any node leaves the ambient
    /// domain or produces a non-finite quantity.
    pub fn geometry(&self, u: &[f64]) -> Result<GeometryReport> {
        self.check_profile(u)?;
        let mut nodes = Vec::with_capacity(self.nodes);
        match self.class {
            SurfaceClass::Umbilic { n } => {
                let r = u[0];
                let (th, dth, _) = self.space.theta(r)?;
                let k = dth / th;
                let mut nu = vec![0.0; n + 1];
                nu[0] = 1.0;
                nodes.push(NodeGeometry {
                    angle: 0.0,
                    u: r,
                    du: 0.0,
                    ddu: 0.0,
                    theta: th,
                    dtheta: dth,
                    v: 1.0,
                    vtilde: 1.0,
                    g: DMatrix::identity(n, n) * (th * th),
                    h: DMatrix::identity(n, n) * (th * dth),
                    nu,
                    kappa: CurvatureVector::new(vec![k; n])?,
                });
            }
            SurfaceClass::Curve => {
                let h = self.parameter_step();
                let n = self.nodes;
                for i in 0..n {
                    let um = u[(i + n - 1) % n];
                    let up = u[(i + 1) % n];
                    let du = (up - um) / (2.0 * h);
                    let ddu = (up - 2.0 * u[i] + um) / (h * h);
                    nodes.push(self.node_geometry(self.angle(i), u[i], du, ddu, None)?);
                }
            }
            SurfaceClass::Axisymmetric => {
                let h = self.parameter_step();
                let n = self.nodes;
                for i in 0..n {
                    // ghost reflection across each pole
                    let um = if i == 0 { u[1] } else { u[i - 1] };
                    let up = if i == n - 1 { u[n - 2] } else { u[i + 1] };
                    let du = (up - um) / (2.0 * h);
                    let ddu = (up - 2.0 * u[i] + um) / (h * h);
                    let pole = i == 0 || i == n - 1;
                    nodes.push(self.node_geometry(
                        self.angle(i),
                        u[i],
                        du,
                        ddu,
                        Some(pole),
                    )?);
                }
            }
        }
        Ok(GeometryReport { nodes })
    }

    /// Geometry of one node from its graph jet. `rotational` is None for the
    /// curve class, Some(at_pole) for the axisymmetric class.
    fn node_geometry(
        &self,
        angle: f64,
        u: f64,
        du: f64,
        ddu: f64,
        rotational: Option<bool>,
    ) -> Result<NodeGeometry> {
        let (th, dth, _) = self.space.theta(u)?;
        let slope = (du * du + th * th).sqrt();
        let v = slope / th;
        let vtilde = th / slope;
        let kappa_profile =
            (-th * ddu + th * th * dth + 2.0 * dth * du * du) / (slope * slope * slope);
        // profile entries of the coordinate tensor pair; h_11 / g_11 is
        // kappa_profile again, written without the 1/theta clearing
        let g11 = du * du + th * th;
        let h11 = (-ddu + th * dth + 2.0 * (dth / th) * du * du) / v;
        let (g, h, kappa) = match rotational {
            None => (
                DMatrix::from_element(1, 1, g11),
                DMatrix::from_element(1, 1, h11),
                vec![kappa_profile],
            ),
            Some(at_pole) => {
                if at_pole {
                    // u' cot(angle) -> u'' in the smooth-pole limit, which
                    // makes the two curvatures agree; u' is already 0 here,
                    // and the coordinate frame degenerates, so the tensor
                    // pair is reported in an orthonormal frame
                    let k = (th * dth - ddu) / (th * th);
                    (
                        DMatrix::identity(2, 2),
                        DMatrix::identity(2, 2) * k,
                        vec![k, k],
                    )
                } else {
                    let sin = angle.sin();
                    let cos = angle.cos();
                    let kappa_rot = (th * dth - du * cos / sin) / (v * th * th);
                    let mut g = DMatrix::zeros(2, 2);
                    g[(0, 0)] = g11;
                    g[(1, 1)] = th * th * sin * sin;
                    let mut h = DMatrix::zeros(2, 2);
                    h[(0, 0)] = h11;
                    h[(1, 1)] = (th * dth * sin * sin - sin * cos * du) / v;
                    (g, h, vec![kappa_profile, kappa_rot])
                }
            }
        };
        if kappa.iter().any(|x| !x.is_finite()) || !v.is_finite() {
            return Err(Error::NonFinite(format!(
                "curvature at angle {angle}, u = {u}"
            )));
        }
        let mut nu = vec![0.0; 1 + kappa.len()];
        nu[0] = 1.0 / v;
        nu[1] = -du / (th * th * v);
        Ok(NodeGeometry {
            angle,
            u,
            du,
            ddu,
            theta: th,
            dtheta: dth,
            v,
            vtilde,
            g,
            h,
            nu,
            kappa: CurvatureVector::new(kappa)?,
        })
    }
}

/// Cone margin and prescribed-curvature residual extremes of a computed
/// geometry: the margin is the worst distance of any node's curvature vector
/// to the boundary of the defining cone, and the residual is F(kappa) - f
/// per node (total extension of F, so nodes outside the cone still report).
pub fn admissibility(
    report: &GeometryReport,
    function: &CurvatureFunction,
    f_values: &[f64],
) -> Result<(f64, f64, f64)> {
    if f_values.len() != report.nodes.len() {
        return Err(Error::Argument(format!(
            "{} target values for {} nodes",
            f_values.len(),
            report.nodes.len()
        )));
    }
    let mut margin = f64::INFINITY;
    let mut res_min = f64::INFINITY;
    let mut res_max = f64::NEG_INFINITY;
    for (node, &f) in report.nodes.iter().zip(f_values) {
        let (_, m) = function.cone().contains(node.kappa.as_slice());
        margin = margin.min(m);
        let r = function.raw_value(node.kappa.as_slice()) - f;
        res_min = res_min.min(r);
        res_max = res_max.max(r);
    }
    Ok((margin, res_min, res_max))
}

/// Independent curvature check through Cartesian coordinates: embeds the
/// graph in the plane (curve) or in 3-space as a surface of revolution
/// (axisymmetric), differences the embedding, and applies the classical
/// parametric curvature formulas. Only the euclidean ambient family embeds
/// this way; test plumbing, not used by the flow.
pub fn curvature_oracle_cartesian(
    surface: &GraphHypersurface,
    u: &[f64],
) -> Result<Vec<CurvatureVector>> {
    if surface.space().kind() != AmbientKind::Euclidean {
        return Err(Error::Argument(format!(
            "cartesian curvature oracle requires the euclidean family, got {}",
            surface.space().label()
        )));
    }
    surface.check_profile(u)?;
    let h = surface.parameter_step();
    let n = surface.nodes();
    match surface.class() {
        SurfaceClass::Umbilic { .. } => Err(Error::Argument(
            "cartesian curvature oracle needs a discretized profile, not a slice".into(),
        )),
        SurfaceClass::Curve => {
            let xy: Vec<(f64, f64)> = (0..n)
                .map(|i| {
                    let p = surface.angle(i);
                    (u[i] * p.cos(), u[i] * p.sin())
                })
                .collect();
            (0..n)
                .map(|i| {
                    let (xm, ym) = xy[(i + n - 1) % n];
                    let (x0, y0) = xy[i];
                    let (xp, yp) = xy[(i + 1) % n];
                    let dx = (xp - xm) / (2.0 * h);
                    let dy = (yp - ym) / (2.0 * h);
                    let ddx = (xp - 2.0 * x0 + xm) / (h * h);
                    let ddy = (yp - 2.0 * y0 + ym) / (h * h);
                    let k = (dx * ddy - dy * ddx) / (dx * dx + dy * dy).powf(1.5);
                    CurvatureVector::new(vec![k])
                })
                .collect()
        }
        SurfaceClass::Axisymmetric => {
            // meridian (rho, z) = (u sin t, u cos t); rho is odd and z even
            // across each pole, fixing the ghost values
            let rz: Vec<(f64, f64)> = (0..n)
                .map(|i| {
                    let t = surface.angle(i);
                    (u[i] * t.sin(), u[i] * t.cos())
                })
                .collect();
            (0..n)
                .map(|i| {
                    let (rm, zm) = if i == 0 {
                        (-rz[1].0, rz[1].1)
                    } else {
                        rz[i - 1]
                    };
                    let (rp, zp) = if i == n - 1 {
                        (-rz[n - 2].0, rz[n - 2].1)
                    } else {
                        rz[i + 1]
                    };
                    let (r0, z0) = rz[i];
                    let dr = (rp - rm) / (2.0 * h);
                    let dz = (zp - zm) / (2.0 * h);
                    let ddr = (rp - 2.0 * r0 + rm) / (h * h);
                    let ddz = (zp - 2.0 * z0 + zm) / (h * h);
                    let speed2 = dr * dr + dz * dz;
                    let k_mer = (dz * ddr - dr * ddz) / speed2.powf(1.5);
                    let k_rot = if i == 0 || i == n - 1 {
                        // rho -> 0: l'Hopital gives -z''/(rho' |rho'|),
                        // which the meridian formula already equals here
                        k_mer
                    } else {
                        -dz / (r0 * speed2.sqrt())
                    };
                    CurvatureVector::new(vec![k_mer, k_rot])
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn euclid(r_hi: f64) -> WarpedProductSpace {
        WarpedProductSpace::euclidean(0.05, r_hi).unwrap()
    }

    #[test]
    fn centered_slices_are_exactly_umbilic_in_every_class() {
        let spaces = [
            WarpedProductSpace::euclidean(0.1, 3.0).unwrap(),
            WarpedProductSpace::sphere(0.1, 1.5).unwrap(),
            WarpedProductSpace::hyperbolic(0.1, 3.0).unwrap(),
        ];
        for space in spaces {
            let r0 = 0.9;
            let expect = space.slice_curvature(r0).unwrap();
            let curve = GraphHypersurface::curve(space.clone(), 64).unwrap();
            let rep = curve.geometry(&vec![r0; 64]).unwrap();
            for node in &rep.nodes {
                assert!((node.kappa.max() - expect).abs() < 1e-14, "{}", space.label());
                assert!((node.v - 1.0).abs() < 1e-15);
                assert!((node.vtilde - 1.0).abs() < 1e-15);
            }
            let axi = GraphHypersurface::axisymmetric(space.clone(), 65).unwrap();
            let rep = axi.geometry(&vec![r0; 65]).unwrap();
            for node in &rep.nodes {
                assert!((node.kappa.min() - expect).abs() < 1e-13);
                assert!((node.kappa.max() - expect).abs() < 1e-13);
            }
            let umb = GraphHypersurface::umbilic(space, 3).unwrap();
            let rep = umb.geometry(&[r0]).unwrap();
            assert_eq!(rep.nodes[0].kappa.n(), 3);
            assert!((rep.nodes[0].kappa.max() - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn off_center_circle_has_unit_curvature() {
        // circle of radius 1 centered at distance 0.3: u = 0.3 cos(phi) +
        // sqrt(1 - 0.09 sin^2(phi))
        let n = 512;
        let surf = GraphHypersurface::curve(euclid(2.0), n).unwrap();
        let u: Vec<f64> = (0..n)
            .map(|i| {
                let p = 2.0 * PI * i as f64 / n as f64;
                0.3 * p.cos() + (1.0 - 0.09 * p.sin() * p.sin()).sqrt()
            })
            .collect();
        let rep = surf.geometry(&u).unwrap();
        for node in &rep.nodes {
            assert!(
                (node.kappa.max() - 1.0).abs() < 1e-4,
                "kappa = {} at {}",
                node.kappa.max(),
                node.angle
            );
        }
    }

    #[test]
    fn ellipse_curvature_at_the_axis_ends() {
        // x^2/4 + y^2 = 1; kappa = a/b^2 = 2 at the major end, b/a^2 = 1/4
        // at the minor end
        let n = 4096;
        let (a, b) = (2.0, 1.0);
        let surf = GraphHypersurface::curve(euclid(3.0), n).unwrap();
        let u: Vec<f64> = (0..n)
            .map(|i| {
                let p = 2.0 * PI * i as f64 / n as f64;
                a * b / ((b * p.cos()).powi(2) + (a * p.sin()).powi(2)).sqrt()
            })
            .collect();
        let rep = surf.geometry(&u).unwrap();
        assert!((rep.nodes[0].kappa.max() - 2.0).abs() < 1e-4);
        assert!((rep.nodes[n / 4].kappa.max() - 0.25).abs() < 1e-6);
    }

    #[test]
    fn a_dent_drives_the_curvature_negative() {
        let n = 256;
        let surf = GraphHypersurface::curve(euclid(2.0), n).unwrap();
        let u: Vec<f64> = (0..n)
            .map(|i| {
                let p = 2.0 * PI * i as f64 / n as f64;
                1.0 - 0.3 * (-(p - PI) * (p - PI) / 0.01).exp()
            })
            .collect();
        let rep = surf.geometry(&u).unwrap();
        assert!(rep.kappa_min() < 0.0, "kappa_min = {}", rep.kappa_min());
        assert!(rep.kappa_max() > 0.0);
    }

    #[test]
    fn curvature_is_equivariant_under_grid_rotation() {
        let n = 128;
        let surf = GraphHypersurface::curve(euclid(2.0), n).unwrap();
        let profile = |p: f64| 1.0 + 0.1 * (2.0 * p).cos() + 0.05 * (3.0 * p).sin();
        let u: Vec<f64> = (0..n)
            .map(|i| profile(2.0 * PI * i as f64 / n as f64))
            .collect();
        let shift = 17;
        let u_rot: Vec<f64> = (0..n).map(|i| u[(i + shift) % n]).collect();
        let rep = surf.geometry(&u).unwrap();
        let rep_rot = surf.geometry(&u_rot).unwrap();
        for i in 0..n {
            let a = rep.nodes[(i + shift) % n].kappa.max();
            let b = rep_rot.nodes[i].kappa.max();
            assert!((a - b).abs() <= 1e-12, "node {i}: {a} vs {b}");
        }
    }

    #[test]
    fn support_product_identity_holds_on_a_generic_profile() {
        let n = 96;
        let surf = GraphHypersurface::curve(euclid(2.0), n).unwrap();
        let u: Vec<f64> = (0..n)
            .map(|i| 1.0 + 0.2 * (2.0 * PI * i as f64 / n as f64).cos())
            .collect();
        let rep = surf.geometry(&u).unwrap();
        for node in &rep.nodes {
            assert!((node.v * node.vtilde - 1.0).abs() < 1e-14);
            assert!(node.v >= 1.0);
            assert!(node.vtilde <= 1.0 && node.vtilde > 0.0);
        }
    }

    #[test]
    fn curve_curvature_converges_at_second_order() {
        // smooth profile, fine-grid reference on coincident nodes
        let profile = |p: f64| 1.0 + 0.15 * (2.0 * p).cos();
        let reference = 8192usize;
        let surf_ref = GraphHypersurface::curve(euclid(2.0), reference).unwrap();
        let u_ref: Vec<f64> = (0..reference)
            .map(|i| profile(2.0 * PI * i as f64 / reference as f64))
            .collect();
        let rep_ref = surf_ref.geometry(&u_ref).unwrap();
        let err_at = |n: usize| -> f64 {
            let surf = GraphHypersurface::curve(euclid(2.0), n).unwrap();
            let u: Vec<f64> = (0..n)
                .map(|i| profile(2.0 * PI * i as f64 / n as f64))
                .collect();
            let rep = surf.geometry(&u).unwrap();
            let stride = reference / n;
            (0..n)
                .map(|i| {
                    (rep.nodes[i].kappa.max() - rep_ref.nodes[i * stride].kappa.max()).abs()
                })
                .fold(0.0, f64::max)
        };
        let e1 = err_at(128);
        let e2 = err_at(256);
        let ratio = e1 / e2;
        assert!(
            (3.5..=4.5).contains(&ratio),
            "doubling ratio {ratio} (errors {e1}, {e2})"
        );
    }

    #[test]
    fn axisymmetric_offset_sphere_is_umbilic_with_radius_curvature() {
        // sphere of radius 1 centered at height 0.3 on the axis:
        // u = 0.3 cos(t) + sqrt(1 - 0.09 sin^2(t)), t the polar angle
        let n = 257;
        let surf = GraphHypersurface::axisymmetric(euclid(2.0), n).unwrap();
        let u: Vec<f64> = (0..n)
            .map(|i| {
                let t = PI * i as f64 / (n - 1) as f64;
                0.3 * t.cos() + (1.0 - 0.09 * t.sin() * t.sin()).sqrt()
            })
            .collect();
        let rep = surf.geometry(&u).unwrap();
        for node in &rep.nodes {
            assert!(
                (node.kappa.min() - 1.0).abs() < 2e-4,
                "kappa_min = {} at angle {}",
                node.kappa.min(),
                node.angle
            );
            assert!(
                (node.kappa.max() - 1.0).abs() < 2e-4,
                "kappa_max = {} at angle {}",
                node.kappa.max(),
                node.angle
            );
        }
    }

    #[test]
    fn axisymmetric_poles_are_umbilic_by_construction() {
        let n = 129;
        let surf = GraphHypersurface::axisymmetric(euclid(3.0), n).unwrap();
        let u: Vec<f64> = (0..n)
            .map(|i| {
                let t = PI * i as f64 / (n - 1) as f64;
                1.0 + 0.2 * (2.0 * t).cos()
            })
            .collect();
        let rep = surf.geometry(&u).unwrap();
        for i in [0, n - 1] {
            let k = &rep.nodes[i].kappa;
            assert_eq!(k.min(), k.max(), "pole node {i}");
        }
        // neighbors stay close to the pole value
        let pole = rep.nodes[0].kappa.max();
        let near = rep.nodes[1].kappa.max();
        assert!((pole - near).abs() < 0.05, "{pole} vs {near}");
    }

    #[test]
    fn axisymmetric_curvature_converges_at_second_order() {
        let profile = |t: f64| 1.0 + 0.15 * (2.0 * t).cos();
        let reference = 4097usize;
        let space = euclid(2.0);
        let surf_ref = GraphHypersurface::axisymmetric(space.clone(), reference).unwrap();
        let u_ref: Vec<f64> = (0..reference)
            .map(|i| profile(PI * i as f64 / (reference - 1) as f64))
            .collect();
        let rep_ref = surf_ref.geometry(&u_ref).unwrap();
        let err_at = |n: usize| -> f64 {
            let surf = GraphHypersurface::axisymmetric(space.clone(), n).unwrap();
            let u: Vec<f64> = (0..n)
                .map(|i| profile(PI * i as f64 / (n - 1) as f64))
                .collect();
            let rep = surf.geometry(&u).unwrap();
            let stride = (reference - 1) / (n - 1);
            (0..n)
                .map(|i| {
                    let a = &rep.nodes[i].kappa;
                    let b = &rep_ref.nodes[i * stride].kappa;
                    (a.min() - b.min()).abs().max((a.max() - b.max()).abs())
                })
                .fold(0.0, f64::max)
        };
        let e1 = err_at(129);
        let e2 = err_at(257);
        let ratio = e1 / e2;
        assert!(
            (3.5..=4.5).contains(&ratio),
            "doubling ratio {ratio} (errors {e1}, {e2})"
        );
    }

    #[test]
    fn profiles_outside_the_domain_are_rejected() {
        let surf = GraphHypersurface::curve(euclid(1.5), 16).unwrap();
        let mut u = vec![1.0; 16];
        u[3] = 1.7;
        match surf.geometry(&u) {
            Err(Error::Domain { r, .. }) => assert_eq!(r, 1.7),
            other => panic!("expected domain error, got {other:?}"),
        }
    }

    #[test]
    fn tensor_pair_eigenvalues_reproduce_the_curvatures() {
        use crate::symfunc::SymmetricTensorPair;
        let n = 64;
        let sphere = WarpedProductSpace::sphere(0.05, 1.5).unwrap();
        let curve = GraphHypersurface::curve(sphere.clone(), n).unwrap();
        let u: Vec<f64> = (0..n)
            .map(|i| 0.8 + 0.1 * (3.0 * 2.0 * PI * i as f64 / n as f64).cos())
            .collect();
        let axi = GraphHypersurface::axisymmetric(sphere.clone(), n + 1).unwrap();
        let w: Vec<f64> = (0..=n)
            .map(|i| 0.8 + 0.1 * (2.0 * PI * i as f64 / n as f64).cos())
            .collect();
        let umb = GraphHypersurface::umbilic(sphere, 4).unwrap();
        for rep in [
            curve.geometry(&u).unwrap(),
            axi.geometry(&w).unwrap(),
            umb.geometry(&[0.7]).unwrap(),
        ] {
            for node in &rep.nodes {
                let pair = SymmetricTensorPair::new(&node.g, &node.h).unwrap();
                let eig = pair.principal_curvatures().unwrap();
                for (a, b) in eig.as_slice().iter().zip(node.kappa.as_slice()) {
                    assert!((a - b).abs() < 1e-12 * (1.0 + b.abs()), "{a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn normal_components_are_unit_and_match_the_support() {
        let n = 96;
        let surf = GraphHypersurface::curve(euclid(2.0), n).unwrap();
        let u: Vec<f64> = (0..n)
            .map(|i| 1.0 + 0.25 * (2.0 * 2.0 * PI * i as f64 / n as f64).sin())
            .collect();
        let rep = surf.geometry(&u).unwrap();
        for node in &rep.nodes {
            // ambient norm: |nu|^2 = (nu^0)^2 + theta^2 sigma_ij nu^i nu^j
            let norm2 = node.nu[0] * node.nu[0]
                + node.theta * node.theta * node.nu[1] * node.nu[1];
            assert!((norm2 - 1.0).abs() < 1e-14);
            assert!((node.nu[0] - node.vtilde).abs() < 1e-15);
            let v2 = 1.0 + (node.du / node.theta).powi(2);
            assert!((node.v * node.v - v2).abs() < 1e-14);
        }
    }

    #[test]
    fn admissibility_reports_stationary_and_offset_residuals() {
        use crate::symfunc::Family;
        let n = 32;
        let surf = GraphHypersurface::curve(euclid(2.0), n).unwrap();
        let rep = surf.geometry(&vec![1.0; n]).unwrap();
        let f1 = CurvatureFunction::new(Family::Sigma1, 1).unwrap();
        let (margin, lo, hi) = admissibility(&rep, &f1, &vec![1.0; n]).unwrap();
        assert_eq!(margin, 1.0);
        assert_eq!((lo, hi), (0.0, 0.0));

        let umb = GraphHypersurface::umbilic(euclid(2.0), 2).unwrap();
        let rep = umb.geometry(&[1.0]).unwrap();
        let gauss = CurvatureFunction::new(Family::GaussRoot, 2).unwrap();
        let (margin, lo, hi) = admissibility(&rep, &gauss, &[0.5]).unwrap();
        assert_eq!(margin, 1.0);
        assert!((lo - 0.5).abs() < 1e-15 && (hi - 0.5).abs() < 1e-15);
    }

    #[test]
    fn admissibility_flags_a_dented_curve() {
        use crate::symfunc::Family;
        let n = 256;
        let surf = GraphHypersurface::curve(euclid(2.0), n).unwrap();
        let u: Vec<f64> = (0..n)
            .map(|i| {
                let p = 2.0 * PI * i as f64 / n as f64;
                1.0 - 0.3 * (-(p - PI) * (p - PI) / 0.01).exp()
            })
            .collect();
        let rep = surf.geometry(&u).unwrap();
        let f1 = CurvatureFunction::new(Family::Sigma1, 1).unwrap();
        let (margin, lo, hi) = admissibility(&rep, &f1, &vec![0.0; n]).unwrap();
        assert!(margin < 0.0, "margin = {margin}");
        assert!(lo < 0.0 && hi > 0.0);
    }

    #[test]
    fn cartesian_oracle_on_circle_sphere_and_ellipse() {
        let n = 256;
        let surf = GraphHypersurface::curve(euclid(2.0), n).unwrap();
        let kappa = curvature_oracle_cartesian(&surf, &vec![1.3; n]).unwrap();
        for k in &kappa {
            assert!((k.max() - 1.0 / 1.3).abs() < 1e-3 / 1.3);
        }

        let m = 257;
        let surf = GraphHypersurface::axisymmetric(euclid(3.0), m).unwrap();
        let kappa = curvature_oracle_cartesian(&surf, &vec![2.0; m]).unwrap();
        for k in &kappa {
            assert!((k.min() - 0.5).abs() < 1e-4, "{}", k.min());
            assert!((k.max() - 0.5).abs() < 1e-4, "{}", k.max());
        }

        let n = 4096;
        let (a, b) = (2.0f64, 1.0f64);
        let surf = GraphHypersurface::curve(euclid(3.0), n).unwrap();
        let u: Vec<f64> = (0..n)
            .map(|i| {
                let p = 2.0 * PI * i as f64 / n as f64;
                a * b / ((b * p.cos()).powi(2) + (a * p.sin()).powi(2)).sqrt()
            })
            .collect();
        let kappa = curvature_oracle_cartesian(&surf, &u).unwrap();
        assert!((kappa[0].max() - 2.0).abs() < 1e-3);
        assert!((kappa[n / 4].max() - 0.25).abs() < 1e-4);
    }

    #[test]
    fn graph_and_oracle_curvatures_agree_at_second_order() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..3 {
            let coef: Vec<(f64, f64, f64)> = (1..=4)
                .map(|k| {
                    (
                        k as f64,
                        rng.gen_range(-0.012..0.012),
                        rng.gen_range(-0.012..0.012),
                    )
                })
                .collect();
            let profile = |p: f64| {
                1.0 + coef
                    .iter()
                    .map(|(k, a, b)| a * (k * p).cos() + b * (k * p).sin())
                    .sum::<f64>()
            };
            let err_at = |n: usize| -> f64 {
                let surf = GraphHypersurface::curve(euclid(2.0), n).unwrap();
                let u: Vec<f64> = (0..n)
                    .map(|i| profile(2.0 * PI * i as f64 / n as f64))
                    .collect();
                let rep = surf.geometry(&u).unwrap();
                let oracle = curvature_oracle_cartesian(&surf, &u).unwrap();
                (0..n)
                    .map(|i| (rep.nodes[i].kappa.max() - oracle[i].max()).abs())
                    .fold(0.0, f64::max)
            };
            let ratio = err_at(128) / err_at(256);
            assert!(
                (3.5..=4.5).contains(&ratio),
                "doubling ratio {ratio}"
            );
        }
    }

    #[test]
    fn oracle_rejects_unsupported_inputs() {
        let hyp = WarpedProductSpace::hyperbolic(0.1, 2.0).unwrap();
        let surf = GraphHypersurface::curve(hyp, 16).unwrap();
        assert!(matches!(
            curvature_oracle_cartesian(&surf, &[1.0; 16]),
            Err(Error::Argument(_))
        ));
        let umb = GraphHypersurface::umbilic(euclid(2.0), 2).unwrap();
        assert!(matches!(
            curvature_oracle_cartesian(&umb, &[1.0]),
            Err(Error::Argument(_))
        ));
    }
}
