//! Special-relativity primitives for massive spin-1/2 particles.
//!
//! Units: the particle mass is 1, so every momentum is `p / m` and every
//! energy is `E / m`. Four-vectors are ordered `(E, px, py, pz)`.

use nalgebra::{Matrix2, Matrix3, Matrix4, Vector3, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KinematicsError {
    #[error("rapidity must be finite and non-negative, got {0}")]
    InvalidRapidity(f64),
    #[error("boost axis must be a finite non-zero vector, got ({0}, {1}, {2})")]
    InvalidAxis(f64, f64, f64),
    #[error("composed transformation is not a boost times a rotation (orthogonality defect {0:.3e})")]
    NotARotation(f64),
}

/// Spatial momentum of a particle, in units of its mass.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ThreeMomentum {
    pub px: f64,
    pub py: f64,
    pub pz: f64,
}

impl ThreeMomentum {
    pub const ZERO: ThreeMomentum = ThreeMomentum { px: 0.0, py: 0.0, pz: 0.0 };

    pub const fn new(px: f64, py: f64, pz: f64) -> Self {
        Self { px, py, pz }
    }

    pub fn norm_squared(&self) -> f64 {
        self.px * self.px + self.py * self.py + self.pz * self.pz
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn dot(&self, other: &ThreeMomentum) -> f64 {
        self.px * other.px + self.py * other.py + self.pz * other.pz
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.px * s, self.py * s, self.pz * s)
    }

    pub fn is_finite(&self) -> bool {
        self.px.is_finite() && self.py.is_finite() && self.pz.is_finite()
    }

    pub fn to_vector(self) -> Vector3<f64> {
        Vector3::new(self.px, self.py, self.pz)
    }

    pub fn from_vector(v: &Vector3<f64>) -> Self {
        Self::new(v.x, v.y, v.z)
    }

    /// The on-shell four-momentum `(E, p)`.
    pub fn four_vector(&self) -> Vector4<f64> {
        Vector4::new(energy(self), self.px, self.py, self.pz)
    }
}

impl Add for ThreeMomentum {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.px + rhs.px, self.py + rhs.py, self.pz + rhs.pz)
    }
}

impl Sub for ThreeMomentum {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.px - rhs.px, self.py - rhs.py, self.pz - rhs.pz)
    }
}

impl Neg for ThreeMomentum {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.px, -self.py, -self.pz)
    }
}

impl fmt::Display for ThreeMomentum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.px, self.py, self.pz)
    }
}

/// Relativistic energy `sqrt(1 + |p|^2)`.
pub fn energy(p: &ThreeMomentum) -> f64 {
    (1.0 + p.norm_squared()).sqrt()
}

/// A pure Lorentz boost: rapidity plus a unit direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoostSpec {
    rapidity: f64,
    axis: [f64; 3],
}

impl BoostSpec {
    /// The axis is normalized on construction.
    pub fn new(rapidity: f64, axis: [f64; 3]) -> Result<Self, KinematicsError> {
        if !rapidity.is_finite() || rapidity < 0.0 {
            return Err(KinematicsError::InvalidRapidity(rapidity));
        }
        let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        if !n.is_finite() || n == 0.0 {
            return Err(KinematicsError::InvalidAxis(axis[0], axis[1], axis[2]));
        }
        Ok(Self {
            rapidity,
            axis: [axis[0] / n, axis[1] / n, axis[2] / n],
        })
    }

    /// Boost along +z, the only geometry used by the scenario presets.
    pub fn along_z(rapidity: f64) -> Result<Self, KinematicsError> {
        Self::new(rapidity, [0.0, 0.0, 1.0])
    }

    /// The boost taking a particle at rest to momentum `p`.
    pub fn to_momentum(p: &ThreeMomentum) -> Result<Self, KinematicsError> {
        let n = p.norm();
        if n == 0.0 {
            return Self::along_z(0.0);
        }
        Self::new(n.asinh(), [p.px, p.py, p.pz])
    }

    pub fn rapidity(&self) -> f64 {
        self.rapidity
    }

    pub fn axis(&self) -> Vector3<f64> {
        Vector3::new(self.axis[0], self.axis[1], self.axis[2])
    }

    pub fn gamma(&self) -> f64 {
        self.rapidity.cosh()
    }
}

/// The 4x4 Lorentz matrix of a pure boost acting on `(E, p)`.
///
/// For a +z boost this is the familiar `cosh`/`sinh` block in the `(t, z)`
/// corner with the transverse block left as the identity.
pub fn boost_matrix(b: &BoostSpec) -> Matrix4<f64> {
    let (ch, sh) = (b.rapidity.cosh(), b.rapidity.sinh());
    let n = b.axis;
    let mut m = Matrix4::identity();
    m[(0, 0)] = ch;
    for i in 0..3 {
        m[(0, i + 1)] = sh * n[i];
        m[(i + 1, 0)] = sh * n[i];
        for j in 0..3 {
            m[(i + 1, j + 1)] += (ch - 1.0) * n[i] * n[j];
        }
    }
    m
}

/// Minkowski metric `diag(1, -1, -1, -1)`.
pub fn minkowski_metric() -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::new(1.0, -1.0, -1.0, -1.0))
}

/// Spatial part of the boosted on-shell four-momentum.
pub fn boost_momentum(b: &BoostSpec, p: &ThreeMomentum) -> ThreeMomentum {
    let out = boost_matrix(b) * p.four_vector();
    ThreeMomentum::new(out[1], out[2], out[3])
}

/// Thomas-Wigner rotation angle for two boosts of rapidities `xi1`, `xi2`
/// separated by angle `theta`: `tan(w/2) = sin(theta) / (cos(theta) + D)`.
///
/// `D = sqrt((g1+1)/(g1-1) * (g2+1)/(g2-1))` is evaluated as
/// `coth(xi1/2) coth(xi2/2)`, which is the same quantity without the
/// cancellation in `g - 1` at small rapidity. A zero rapidity returns 0.
pub fn wigner_angle(xi1: f64, xi2: f64, theta: f64) -> f64 {
    if xi1 <= 0.0 || xi2 <= 0.0 {
        return 0.0;
    }
    let d = 1.0 / ((0.5 * xi1).tanh() * (0.5 * xi2).tanh());
    2.0 * theta.sin().atan2(theta.cos() + d)
}

/// Rotation left over after composing two boosts, `B2 B1 = R B3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositionRotation {
    pub angle: f64,
    /// `None` when the boosts are collinear and the axis is undefined.
    pub axis: Option<Vector3<f64>>,
}

/// Independent route to the Wigner angle: multiply the two boost matrices,
/// strip the residual pure boost and read the angle and axis off the
/// remaining spatial rotation.
///
/// The axis is reported for the rotation of the frame, so it points along
/// `v2 x v1`.
pub fn wigner_angle_from_composition(
    b1: &BoostSpec,
    b2: &BoostSpec,
) -> Result<CompositionRotation, KinematicsError> {
    let collinear = b1.rapidity == 0.0
        || b2.rapidity == 0.0
        || b1.axis().cross(&b2.axis()).norm() < 1e-15;
    if collinear {
        return Ok(CompositionRotation { angle: 0.0, axis: None });
    }

    let (l1, l2) = (boost_matrix(b1), boost_matrix(b2));
    let m = l2 * l1;
    // e0^T M = e0^T B3 because R leaves the time axis alone, so the first
    // row of M is the four-velocity of the residual boost.
    let u = Vector4::new(m[(0, 0)], m[(0, 1)], m[(0, 2)], m[(0, 3)]);
    let residual_inverse = boost_from_four_velocity(&Vector4::new(u[0], -u[1], -u[2], -u[3]));
    let r4 = m * residual_inverse;

    let r: Matrix3<f64> = r4.fixed_view::<3, 3>(1, 1).into_owned();
    let mut defect = (r.transpose() * r - Matrix3::identity()).amax();
    for i in 1..4 {
        defect = defect.max(r4[(0, i)].abs()).max(r4[(i, 0)].abs());
    }
    defect = defect.max((r4[(0, 0)] - 1.0).abs());
    // 1e-9, widened to the rounding floor of the product: nearly opposite
    // boosts cancel entries of size |B1| |B2| down to a small M.
    let scale = l1.amax() * l2.amax();
    if defect > 1e-9_f64.max(16.0 * f64::EPSILON * scale * scale) {
        return Err(KinematicsError::NotARotation(defect));
    }

    // Active rotation by w about n has axial part 2 sin(w) n.
    let axial = Vector3::new(
        r[(2, 1)] - r[(1, 2)],
        r[(0, 2)] - r[(2, 0)],
        r[(1, 0)] - r[(0, 1)],
    );
    let angle = axial.norm().atan2(r.trace() - 1.0);
    let axis = if axial.norm() > 0.0 {
        // frame rotation is the inverse of the active one
        Some(-axial / axial.norm())
    } else {
        None
    };
    Ok(CompositionRotation { angle, axis })
}

fn boost_from_four_velocity(u: &Vector4<f64>) -> Matrix4<f64> {
    let mut m = Matrix4::identity();
    m[(0, 0)] = u[0];
    for i in 1..4 {
        m[(0, i)] = u[i];
        m[(i, 0)] = u[i];
        for j in 1..4 {
            m[(i, j)] += u[i] * u[j] / (1.0 + u[0]);
        }
    }
    m
}

/// A 2x2 spin-1/2 representation matrix of a rotation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinorRotation(pub Matrix2<Complex64>);

impl SpinorRotation {
    pub fn identity() -> Self {
        Self(Matrix2::identity())
    }

    pub fn matrix(&self) -> &Matrix2<Complex64> {
        &self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    /// Largest entry of `U^dagger U - 1`.
    pub fn unitarity_defect(&self) -> f64 {
        (self.0.adjoint() * self.0 - Matrix2::identity())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn determinant(&self) -> Complex64 {
        self.0.determinant()
    }

    /// Components of `U = a0 1 - i a.sigma`.
    fn pauli_components(&self) -> (f64, Vector3<f64>) {
        let u = &self.0;
        let a0 = 0.5 * (u[(0, 0)].re + u[(1, 1)].re);
        let ax = -0.5 * (u[(0, 1)].im + u[(1, 0)].im);
        let ay = 0.5 * (u[(1, 0)].re - u[(0, 1)].re);
        let az = 0.5 * (u[(1, 1)].im - u[(0, 0)].im);
        (a0, Vector3::new(ax, ay, az))
    }

    /// SO(3) rotation angle in `[0, pi]`, from `atan2` of the off-diagonal
    /// (Pauli) part against the diagonal part.
    pub fn angle(&self) -> f64 {
        let (a0, a) = self.pauli_components();
        2.0 * a.norm().atan2(a0.abs())
    }

    /// Unit rotation axis, `None` for the identity.
    pub fn axis(&self) -> Option<Vector3<f64>> {
        let (a0, a) = self.pauli_components();
        let n = a.norm();
        if n < 1e-300 {
            None
        } else {
            Some(a * (a0.signum() / n))
        }
    }
}

/// Spin-1/2 Wigner rotation `U(W(L, p))` for a boost of rapidity `xi`
/// along +z acting on a particle of momentum `p`.
///
/// ```text
/// U = [[ a,            b (px - i py) ],
///      [ -b (px + i py), a           ]]
/// a = sqrt((E+1)/(E'+1)) (cosh(xi/2) + pz/(E+1) sinh(xi/2))
/// b = sinh(xi/2) / sqrt((E+1)(E'+1)),    E' = E cosh(xi) + pz sinh(xi)
/// ```
///
/// Negative `xi` is accepted and gives the inverse boost.
pub fn wigner_unitary(xi: f64, p: &ThreeMomentum) -> SpinorRotation {
    let (alpha, beta) = wigner_coefficients(xi, p);
    let c = |re: f64, im: f64| Complex64::new(re, im);
    SpinorRotation(Matrix2::new(
        c(alpha, 0.0),
        c(beta * p.px, -beta * p.py),
        c(-beta * p.px, -beta * p.py),
        c(alpha, 0.0),
    ))
}

/// `(alpha, beta)` of the +z Wigner unitary.
pub fn wigner_coefficients(xi: f64, p: &ThreeMomentum) -> (f64, f64) {
    let e = energy(p);
    let e_boosted = e * xi.cosh() + p.pz * xi.sinh();
    let (ch, sh) = ((0.5 * xi).cosh(), (0.5 * xi).sinh());
    let alpha = ((e + 1.0) / (e_boosted + 1.0)).sqrt() * (ch + p.pz / (e + 1.0) * sh);
    let beta = sh / ((e + 1.0) * (e_boosted + 1.0)).sqrt();
    (alpha, beta)
}

/// Wigner unitary for a boost along an arbitrary axis: rotate coordinates
/// so the boost points along +z, apply the +z form, rotate back.
pub fn wigner_unitary_along(b: &BoostSpec, p: &ThreeMomentum) -> SpinorRotation {
    let n = b.axis();
    let z = Vector3::z();
    let k = n.cross(&z);
    let (q, d) = if k.norm() < 1e-15 {
        if n.z > 0.0 {
            (Matrix3::identity(), Matrix2::identity())
        } else {
            // half turn about x maps -z to +z
            (rotation_matrix(&Vector3::x(), std::f64::consts::PI), spinor_of_rotation(&Vector3::x(), std::f64::consts::PI))
        }
    } else {
        let axis = k / k.norm();
        let phi = n.dot(&z).clamp(-1.0, 1.0).acos();
        (rotation_matrix(&axis, phi), spinor_of_rotation(&axis, phi))
    };
    let p_rot = ThreeMomentum::from_vector(&(q * p.to_vector()));
    let u = wigner_unitary(b.rapidity, &p_rot);
    SpinorRotation(d.adjoint() * u.0 * d)
}

/// Rodrigues rotation matrix about a unit axis.
pub fn rotation_matrix(axis: &Vector3<f64>, angle: f64) -> Matrix3<f64> {
    nalgebra::Rotation3::from_axis_angle(&nalgebra::Unit::new_unchecked(*axis), angle).into_inner()
}

/// SU(2) element `cos(a/2) 1 - i sin(a/2) n.sigma`.
pub fn spinor_of_rotation(axis: &Vector3<f64>, angle: f64) -> Matrix2<Complex64> {
    let (c, s) = ((0.5 * angle).cos(), (0.5 * angle).sin());
    let (nx, ny, nz) = (axis.x, axis.y, axis.z);
    Matrix2::new(
        Complex64::new(c, -s * nz),
        Complex64::new(-s * ny, -s * nx),
        Complex64::new(s * ny, -s * nx),
        Complex64::new(c, s * nz),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn energy_values() {
        assert_eq!(energy(&ThreeMomentum::ZERO), 1.0);
        let p = ThreeMomentum::new(0.0, 0.0, 1.0_f64.sinh());
        assert!((energy(&p) - 1.0_f64.cosh()).abs() < 1e-14);
        assert!((energy(&ThreeMomentum::new(0.0, 0.0, 1.1752)) - 1.5431).abs() < 1e-4);
        let big = ThreeMomentum::new(17.13, 0.0, -98.5);
        assert!((energy(&big) - 100.0).abs() < 0.05);
    }

    #[test]
    fn z_boost_matrix_layout() {
        let b = BoostSpec::along_z(1.0).unwrap();
        let m = boost_matrix(&b);
        assert!((m[(0, 0)] - 1.0_f64.cosh()).abs() < 1e-15);
        assert!((m[(3, 3)] - 1.0_f64.cosh()).abs() < 1e-15);
        assert!((m[(0, 3)] - 1.0_f64.sinh()).abs() < 1e-15);
        assert!((m[(3, 0)] - 1.0_f64.sinh()).abs() < 1e-15);
        for i in 1..3 {
            for j in 0..4 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert_eq!(m[(i, j)], expect);
            }
        }
        assert_eq!(boost_matrix(&BoostSpec::new(0.0, [1.0, 2.0, 3.0]).unwrap()), Matrix4::identity());
    }

    #[test]
    fn boost_matrix_preserves_metric() {
        let eta = minkowski_metric();
        for &(xi, axis) in &[(0.3, [1.0, 0.0, 0.0]), (2.0, [1.0, -2.0, 0.5]), (6.5, [0.0, 0.0, 1.0])] {
            let m = boost_matrix(&BoostSpec::new(xi, axis).unwrap());
            let defect = (m.transpose() * eta * m - eta).amax();
            assert!(defect < 1e-9 * (xi as f64).cosh().powi(2), "defect {defect}");
            assert!((m.determinant() - 1.0).abs() < 1e-12 * (xi as f64).cosh().powi(4));
        }
    }

    #[test]
    fn boosted_rest_particle() {
        let b = BoostSpec::along_z(1.7).unwrap();
        let p = boost_momentum(&b, &ThreeMomentum::ZERO);
        assert!(p.px.abs() < 1e-15 && p.py.abs() < 1e-15);
        assert!((p.pz - 1.7_f64.sinh()).abs() < 1e-13);
        let q = ThreeMomentum::new(1.0, -2.0, 3.0);
        assert_eq!(boost_momentum(&BoostSpec::along_z(0.0).unwrap(), &q), q);
    }

    #[test]
    fn boosted_energy_matches_closed_form() {
        let p = ThreeMomentum::new(0.4, -1.3, 2.2);
        let xi = 1.9;
        let out = boost_momentum(&BoostSpec::along_z(xi).unwrap(), &p);
        let expect = energy(&p) * xi.cosh() + p.pz * xi.sinh();
        assert!((energy(&out) - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn rejects_bad_boosts() {
        assert!(BoostSpec::along_z(-1.0).is_err());
        assert!(BoostSpec::along_z(f64::NAN).is_err());
        assert!(BoostSpec::new(1.0, [0.0, 0.0, 0.0]).is_err());
        let b = BoostSpec::new(1.0, [3.0, 0.0, 4.0]).unwrap();
        assert!((b.axis().norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn collinear_boosts_have_no_rotation() {
        assert_eq!(wigner_angle(2.0, 3.0, 0.0), 0.0);
        assert_eq!(wigner_angle(0.0, 3.0, 1.0), 0.0);
        let b1 = BoostSpec::new(1.0, [1.0, 1.0, 0.0]).unwrap();
        let b2 = BoostSpec::new(2.5, [2.0, 2.0, 0.0]).unwrap();
        let r = wigner_angle_from_composition(&b1, &b2).unwrap();
        assert_eq!(r.angle, 0.0);
        assert!(r.axis.is_none());
    }

    #[test]
    fn near_opposite_fast_boosts_approach_half_turn() {
        let w = wigner_angle(12.0, 12.0, 3.10);
        assert!(w.to_degrees() > 175.0, "{}", w.to_degrees());
        assert!(w < PI);
    }

    #[test]
    fn large_angle_geometry_matches_quoted_radians() {
        // |p| = 100, xi = 6.5, theta = 2.967 rad; quoted as ~2.81 rad.
        let w = wigner_angle(100.0_f64.asinh(), 6.5, 2.967);
        assert!((w - 2.81).abs() < 1.0_f64.to_radians(), "{}", w.to_degrees());
    }

    #[test]
    fn composition_axis_is_v2_cross_v1() {
        let b1 = BoostSpec::new(1.2, [1.0, 0.0, 0.0]).unwrap();
        let b2 = BoostSpec::new(0.8, [0.3, 1.0, 0.0]).unwrap();
        let r = wigner_angle_from_composition(&b1, &b2).unwrap();
        let expected = b2.axis().cross(&b1.axis()).normalize();
        assert!((r.axis.unwrap() - expected).norm() < 1e-10);
    }

    #[test]
    fn composition_agrees_with_half_tan_formula_on_one_point() {
        let theta: f64 = 2.0;
        let b1 = BoostSpec::new(1.5, [1.0, 0.0, 0.0]).unwrap();
        let b2 = BoostSpec::new(3.0, [theta.cos(), theta.sin(), 0.0]).unwrap();
        let r = wigner_angle_from_composition(&b1, &b2).unwrap();
        assert!((r.angle - wigner_angle(1.5, 3.0, theta)).abs() < 1e-10);
    }

    #[test]
    fn wigner_unitary_trivial_cases() {
        let p = ThreeMomentum::new(3.0, -1.0, 2.0);
        let u = wigner_unitary(0.0, &p);
        assert!((u.0 - Matrix2::identity()).camax() < 1e-15);
        let collinear = wigner_unitary(4.0, &ThreeMomentum::new(0.0, 0.0, -7.0));
        assert!((collinear.0 - Matrix2::identity()).camax() < 1e-12);
        assert_eq!(collinear.angle(), 0.0);
    }

    #[test]
    fn wigner_unitary_large_angle_anchor() {
        let p = ThreeMomentum::new(17.13, 0.0, -98.5);
        let u = wigner_unitary(6.5, &p);
        assert!(u.unitarity_defect() < 1e-12);
        let (a, b) = wigner_coefficients(6.5, &p);
        let omega = 2.0 * (b * p.px).atan2(a);
        assert!((u.angle() - omega).abs() < 1e-12);
        assert!((omega - 2.81).abs() < 1.0_f64.to_radians());
        let axis = u.axis().unwrap();
        assert!(axis.x.abs() < 1e-15 && axis.z.abs() < 1e-15);
    }

    #[test]
    fn unitary_angle_matches_boost_composition() {
        // W(L, p) is the rotation in L * L(p); all three routes agree.
        for &(p, xi) in &[
            (ThreeMomentum::new(17.13, 0.0, -98.5), 6.5),
            (ThreeMomentum::new(3.0, 0.0, 0.0), 1.3),
            (ThreeMomentum::new(0.5, -2.0, 4.0), 2.2),
        ] {
            let from_unitary = wigner_unitary(xi, &p).angle();
            let carrier = BoostSpec::to_momentum(&p).unwrap();
            let boost = BoostSpec::along_z(xi).unwrap();
            let composed = wigner_angle_from_composition(&carrier, &boost).unwrap().angle;
            let theta = (p.pz / p.norm()).acos();
            let formula = wigner_angle(p.norm().asinh(), xi, theta);
            assert!((from_unitary - formula).abs() < 1e-9, "{from_unitary} vs {formula}");
            // The 4x4 product carries entries of order cosh(xi1) cosh(xi2).
            let floor = 1e-9_f64.max(16.0 * f64::EPSILON * (carrier.gamma() * boost.gamma()).powi(2));
            assert!((composed - formula).abs() < floor, "{composed} vs {formula}");
        }
    }

    #[test]
    fn arbitrary_axis_unitary_reduces_to_z_form() {
        let p = ThreeMomentum::new(0.7, 1.1, -0.4);
        let b = BoostSpec::along_z(1.4).unwrap();
        let u = wigner_unitary_along(&b, &p);
        assert!((u.0 - wigner_unitary(1.4, &p).0).camax() < 1e-14);

        // Same angle as the composition oracle for an x boost.
        let bx = BoostSpec::new(1.4, [1.0, 0.0, 0.0]).unwrap();
        let ux = wigner_unitary_along(&bx, &p);
        assert!(ux.unitarity_defect() < 1e-12);
        let carrier = BoostSpec::to_momentum(&p).unwrap();
        let composed = wigner_angle_from_composition(&carrier, &bx).unwrap();
        assert!((ux.angle() - composed.angle).abs() < 1e-10);
    }

    #[test]
    fn inverse_boost_undoes_wigner_rotation() {
        let p = ThreeMomentum::new(2.0, 1.0, -3.0);
        let xi = 2.4;
        let forward = wigner_unitary(xi, &p);
        let boosted = boost_momentum(&BoostSpec::along_z(xi).unwrap(), &p);
        let back = wigner_unitary(-xi, &boosted);
        assert!((back.0 * forward.0 - Matrix2::identity()).camax() < 1e-12);
    }
}
