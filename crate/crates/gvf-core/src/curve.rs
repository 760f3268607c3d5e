//! Implicit plane curves: the desired path is the zero level set of a C²
//! function `phi`, and the signed value of `phi` doubles as the tracking
//! error. Curves expose `phi`, its gradient and Hessian analytically;
//! [`fd_validate`] cross-checks those derivatives against central
//! differences for user-supplied curves.

use alloc::vec::Vec;

use crate::math::{scalar, Aabb, Mat2, Vec2};
use crate::{Error, Result};

/// An implicit curve `{ p : phi(p) = 0 }` with analytic first and second
/// derivatives. `phi` must be C² and regular (nonvanishing gradient) on the
/// band `{ |phi| <= c_star }`.
///
/// Evaluations are pure; implementations are immutable after construction and
/// safe to share across threads.
pub trait ImplicitCurve {
    fn phi(&self, p: Vec2) -> f64;
    fn grad(&self, p: Vec2) -> Vec2;
    fn hessian(&self, p: Vec2) -> Mat2;

    /// Regularity bound: the gradient is guaranteed nonzero wherever
    /// `|phi| <= c_star`. Supplied by the user, validated by sampling.
    fn c_star(&self) -> f64;

    /// Typical on-path gradient magnitude; scales degeneracy thresholds.
    fn grad_scale(&self) -> f64 {
        1.0
    }

    /// Axis-aligned box enclosing the band `{ |phi| <= c }`, when one is
    /// known. Used as a default sampling region.
    fn band_hint(&self, c: f64) -> Option<Aabb> {
        let _ = c;
        None
    }
}

/// Signed level-set error `e(p) = phi(p)`; the sign is preserved.
pub fn eval_error(curve: &dyn ImplicitCurve, p: Vec2) -> f64 {
    curve.phi(p)
}

/// Normal to the level set through `p`: `n(p) = ∇phi(p)`. May be zero at
/// critical points; callers enforce regularity.
pub fn normal(curve: &dyn ImplicitCurve, p: Vec2) -> Vec2 {
    curve.grad(p)
}

/// Tangent to the level set through `p`: `τ = E·n` with E = [[0,1],[-1,0]].
/// Traversal direction is reversed by negating E; see [`crate::gvf::Direction`].
pub fn tangent(curve: &dyn ImplicitCurve, p: Vec2) -> Vec2 {
    curve.grad(p).rot_cw()
}

/// Straight line as a signed-distance level set (meters).
#[derive(Debug, Clone, Copy)]
pub struct Line {
    point: Vec2,
    normal: Vec2,
    c_star: f64,
}

impl Line {
    /// Line through `point` with travel direction `direction_angle` (radians
    /// from the x-axis). The unit normal is chosen so that the tangent `E·n`
    /// equals the direction vector.
    pub fn through(point: Vec2, direction_angle: f64) -> Result<Line> {
        if !point.is_finite() || !direction_angle.is_finite() {
            return Err(Error::NonFiniteInput);
        }
        let normal = Vec2::new(-scalar::sin(direction_angle), scalar::cos(direction_angle));
        Ok(Line { point, normal, c_star: f64::INFINITY })
    }

    pub fn with_c_star(mut self, c_star: f64) -> Self {
        self.c_star = c_star;
        self
    }
}

impl ImplicitCurve for Line {
    fn phi(&self, p: Vec2) -> f64 {
        self.normal.dot(p - self.point)
    }

    fn grad(&self, _p: Vec2) -> Vec2 {
        self.normal
    }

    fn hessian(&self, _p: Vec2) -> Mat2 {
        Mat2::ZERO
    }

    fn c_star(&self) -> f64 {
        self.c_star
    }

    fn band_hint(&self, c: f64) -> Option<Aabb> {
        // The band is an unbounded strip; hint a window around the anchor
        // point generous enough for sampling chores.
        let half = c.max(1.0) + 500.0;
        Aabb::centered(self.point, Vec2::new(half, half)).ok()
    }
}

/// Circle as the quadratic level set `phi = ‖p − c‖² − r²` (m²).
#[derive(Debug, Clone, Copy)]
pub struct Circle {
    center: Vec2,
    radius: f64,
    c_star: f64,
}

impl Circle {
    pub fn new(center: Vec2, radius: f64) -> Result<Circle> {
        if !center.is_finite() || !radius.is_finite() {
            return Err(Error::NonFiniteInput);
        }
        if radius <= 0.0 {
            return Err(Error::NonPositiveAxis);
        }
        // Gradient vanishes only at the center, where phi = -r²; stay just
        // inside that level by default.
        Ok(Circle { center, radius, c_star: 0.99 * radius * radius })
    }

    pub fn with_c_star(mut self, c_star: f64) -> Self {
        self.c_star = c_star;
        self
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn center(&self) -> Vec2 {
        self.center
    }
}

impl ImplicitCurve for Circle {
    fn phi(&self, p: Vec2) -> f64 {
        (p - self.center).norm_sq() - self.radius * self.radius
    }

    fn grad(&self, p: Vec2) -> Vec2 {
        2.0 * (p - self.center)
    }

    fn hessian(&self, _p: Vec2) -> Mat2 {
        Mat2::new(2.0, 0.0, 0.0, 2.0)
    }

    fn c_star(&self) -> f64 {
        self.c_star
    }

    fn grad_scale(&self) -> f64 {
        2.0 * self.radius
    }

    fn band_hint(&self, c: f64) -> Option<Aabb> {
        let r2 = self.radius * self.radius + c.max(0.0);
        let half = scalar::sqrt(r2) * 1.01;
        Aabb::centered(self.center, Vec2::new(half, half)).ok()
    }
}

/// Rotated ellipse parameters.
#[derive(Debug, Clone, Copy)]
pub struct EllipseParams {
    /// Center `h` in the navigation frame (m).
    pub center: Vec2,
    /// Semi-axis along the rotated x-axis (m), positive.
    pub semi_axis_a: f64,
    /// Semi-axis along the rotated y-axis (m), positive.
    pub semi_axis_b: f64,
    /// Rotation of the ellipse axes from the navigation frame (rad).
    pub rotation: f64,
}

/// Rotated ellipse with the dimensionless level function
///
/// ```text
/// phi(p) = ((dx·cos α − dy·sin α)/a)² + ((dx·sin α + dy·cos α)/b)² − 1
/// ```
///
/// where `(dx, dy) = p − h`. The gradient vanishes only at `p = h`, where
/// `phi = −1`.
#[derive(Debug, Clone, Copy)]
pub struct Ellipse {
    params: EllipseParams,
    cos_a: f64,
    sin_a: f64,
    // Constant Hessian 2·JᵀJ of the quadratic form.
    hess: Mat2,
    c_star: f64,
}

impl Ellipse {
    pub fn new(params: EllipseParams) -> Result<Ellipse> {
        if !params.center.is_finite()
            || !params.semi_axis_a.is_finite()
            || !params.semi_axis_b.is_finite()
            || !params.rotation.is_finite()
        {
            return Err(Error::NonFiniteInput);
        }
        if params.semi_axis_a <= 0.0 || params.semi_axis_b <= 0.0 {
            return Err(Error::NonPositiveAxis);
        }
        let (a, b) = (params.semi_axis_a, params.semi_axis_b);
        let ca = scalar::cos(params.rotation);
        let sa = scalar::sin(params.rotation);
        // J maps p − h to rotated, axis-normalized coordinates.
        let (jxx, jxy) = (ca / a, -sa / a);
        let (jyx, jyy) = (sa / b, ca / b);
        let hess = Mat2::new(
            2.0 * (jxx * jxx + jyx * jyx),
            2.0 * (jxx * jxy + jyx * jyy),
            2.0 * (jxy * jxx + jyy * jyx),
            2.0 * (jxy * jxy + jyy * jyy),
        );
        Ok(Ellipse { params, cos_a: ca, sin_a: sa, hess, c_star: 0.99 })
    }

    pub fn with_c_star(mut self, c_star: f64) -> Self {
        self.c_star = c_star;
        self
    }

    pub fn params(&self) -> &EllipseParams {
        &self.params
    }

    fn rotated(&self, p: Vec2) -> (f64, f64) {
        let d = p - self.params.center;
        let xr = (d.x * self.cos_a - d.y * self.sin_a) / self.params.semi_axis_a;
        let yr = (d.x * self.sin_a + d.y * self.cos_a) / self.params.semi_axis_b;
        (xr, yr)
    }
}

impl ImplicitCurve for Ellipse {
    fn phi(&self, p: Vec2) -> f64 {
        let (xr, yr) = self.rotated(p);
        xr * xr + yr * yr - 1.0
    }

    fn grad(&self, p: Vec2) -> Vec2 {
        let (xr, yr) = self.rotated(p);
        let (a, b) = (self.params.semi_axis_a, self.params.semi_axis_b);
        Vec2::new(
            2.0 * (xr * self.cos_a / a + yr * self.sin_a / b),
            2.0 * (-xr * self.sin_a / a + yr * self.cos_a / b),
        )
    }

    fn hessian(&self, _p: Vec2) -> Mat2 {
        self.hess
    }

    fn c_star(&self) -> f64 {
        self.c_star
    }

    fn grad_scale(&self) -> f64 {
        2.0 / self.params.semi_axis_a.min(self.params.semi_axis_b)
    }

    fn band_hint(&self, c: f64) -> Option<Aabb> {
        if c < 0.0 {
            return None;
        }
        // Level |phi| <= c is contained in the ellipse scaled by sqrt(1+c);
        // half-extents are the exact bounding box of that rotated ellipse.
        let s = scalar::sqrt(1.0 + c);
        let (a, b) = (s * self.params.semi_axis_a, s * self.params.semi_axis_b);
        let hx = scalar::sqrt(a * a * self.cos_a * self.cos_a + b * b * self.sin_a * self.sin_a);
        let hy = scalar::sqrt(a * a * self.sin_a * self.sin_a + b * b * self.cos_a * self.cos_a);
        Aabb::centered(self.params.center, Vec2::new(hx * 1.01, hy * 1.01)).ok()
    }
}

/// User-defined curve from three callables (`phi`, `∇phi`, `H(phi)`).
/// Run [`fd_validate`] on it before trusting the derivatives.
#[derive(Debug, Clone)]
pub struct FnCurve<P, G, H>
where
    P: Fn(Vec2) -> f64,
    G: Fn(Vec2) -> Vec2,
    H: Fn(Vec2) -> Mat2,
{
    phi: P,
    grad: G,
    hessian: H,
    c_star: f64,
    grad_scale: f64,
}

impl<P, G, H> FnCurve<P, G, H>
where
    P: Fn(Vec2) -> f64,
    G: Fn(Vec2) -> Vec2,
    H: Fn(Vec2) -> Mat2,
{
    pub fn new(phi: P, grad: G, hessian: H, c_star: f64) -> Self {
        FnCurve { phi, grad, hessian, c_star, grad_scale: 1.0 }
    }

    pub fn with_grad_scale(mut self, grad_scale: f64) -> Self {
        self.grad_scale = grad_scale;
        self
    }
}

impl<P, G, H> ImplicitCurve for FnCurve<P, G, H>
where
    P: Fn(Vec2) -> f64,
    G: Fn(Vec2) -> Vec2,
    H: Fn(Vec2) -> Mat2,
{
    fn phi(&self, p: Vec2) -> f64 {
        (self.phi)(p)
    }

    fn grad(&self, p: Vec2) -> Vec2 {
        (self.grad)(p)
    }

    fn hessian(&self, p: Vec2) -> Mat2 {
        (self.hessian)(p)
    }

    fn c_star(&self) -> f64 {
        self.c_star
    }

    fn grad_scale(&self) -> f64 {
        self.grad_scale
    }
}

/// Outcome of [`fd_validate`]: worst relative derivative errors over the
/// probe set, plus any probes where `phi` evaluated non-finite.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub max_grad_rel_err: f64,
    pub max_hessian_rel_err: f64,
    /// Worst off-diagonal Hessian mismatch relative to the largest entry.
    pub max_hessian_asymmetry: f64,
    pub worst_grad_point: Option<Vec2>,
    pub worst_hessian_point: Option<Vec2>,
    pub non_finite_points: Vec<Vec2>,
    pub probes_checked: usize,
}

impl ValidationReport {
    /// True when both derivative errors are below `tol` and every probe
    /// evaluated finite.
    pub fn passes(&self, tol: f64) -> bool {
        self.max_grad_rel_err < tol
            && self.max_hessian_rel_err < tol
            && self.non_finite_points.is_empty()
    }
}

// Relative-error denominators never drop below this, so exact zeros (a line's
// Hessian) report zero error instead of 0/0.
const REL_ERR_FLOOR: f64 = 1e-9;

/// Cross-check a curve's analytic gradient against central differences of
/// `phi`, and its Hessian against the central-difference Jacobian of the
/// analytic gradient, over the given probe points with step `h`.
pub fn fd_validate(
    curve: &dyn ImplicitCurve,
    probes: &[Vec2],
    h: f64,
) -> Result<ValidationReport> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::NonPositiveStep);
    }
    let mut report = ValidationReport {
        max_grad_rel_err: 0.0,
        max_hessian_rel_err: 0.0,
        max_hessian_asymmetry: 0.0,
        worst_grad_point: None,
        worst_hessian_point: None,
        non_finite_points: Vec::new(),
        probes_checked: 0,
    };
    let ex = Vec2::new(h, 0.0);
    let ey = Vec2::new(0.0, h);
    for &p in probes {
        if !p.is_finite() {
            report.non_finite_points.push(p);
            continue;
        }
        let fxp = curve.phi(p + ex);
        let fxm = curve.phi(p - ex);
        let fyp = curve.phi(p + ey);
        let fym = curve.phi(p - ey);
        if !(fxp.is_finite() && fxm.is_finite() && fyp.is_finite() && fym.is_finite()) {
            report.non_finite_points.push(p);
            continue;
        }
        let grad_fd = Vec2::new((fxp - fxm) / (2.0 * h), (fyp - fym) / (2.0 * h));
        let grad_an = curve.grad(p);
        if !grad_an.is_finite() {
            report.non_finite_points.push(p);
            continue;
        }
        let gerr = (grad_an - grad_fd).norm() / grad_fd.norm().max(REL_ERR_FLOOR);
        if gerr > report.max_grad_rel_err {
            report.max_grad_rel_err = gerr;
            report.worst_grad_point = Some(p);
        }

        // Hessian column j = d(grad)/dx_j by central differences of grad.
        let gxp = curve.grad(p + ex);
        let gxm = curve.grad(p - ex);
        let gyp = curve.grad(p + ey);
        let gym = curve.grad(p - ey);
        if !(gxp.is_finite() && gxm.is_finite() && gyp.is_finite() && gym.is_finite()) {
            report.non_finite_points.push(p);
            continue;
        }
        let cx = (gxp - gxm) * (1.0 / (2.0 * h));
        let cy = (gyp - gym) * (1.0 / (2.0 * h));
        let hess_fd = Mat2::new(cx.x, cy.x, cx.y, cy.y);
        let hess_an = curve.hessian(p);
        if !hess_an.is_finite() {
            report.non_finite_points.push(p);
            continue;
        }
        let herr = (hess_an - hess_fd).max_abs() / hess_fd.max_abs().max(REL_ERR_FLOOR);
        if herr > report.max_hessian_rel_err {
            report.max_hessian_rel_err = herr;
            report.worst_hessian_point = Some(p);
        }
        let asym = hess_an.asymmetry();
        if asym > report.max_hessian_asymmetry {
            report.max_hessian_asymmetry = asym;
        }
        report.probes_checked += 1;
    }
    Ok(report)
}
