//! Two-qubit spin states: Bell states, Wootters concurrence and the
//! Bell-tetrahedron coordinates of Bell-diagonal states.
//!
//! Basis order is `|00>, |01>, |10>, |11>` with the first qubit belonging to
//! the first particle and `|0>` the spin-up state along z.

use nalgebra::{Matrix2, Matrix4, SymmetricEigen, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpinError {
    #[error("matrix is not Hermitian (defect {0:.3e})")]
    NotHermitian(f64),
    #[error("trace {0} differs from 1")]
    BadTrace(f64),
    #[error("eigenvalue {0:.3e} outside [0, 1]")]
    BadSpectrum(f64),
    #[error("state vector has zero norm")]
    ZeroVector,
}

pub const HERMITICITY_TOLERANCE: f64 = 1e-10;
pub const TRACE_TOLERANCE: f64 = 1e-9;
pub const SPECTRUM_TOLERANCE: f64 = 1e-9;
pub const BELL_DIAGONAL_TOLERANCE: f64 = 1e-6;

/// A validated 4x4 density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState(Matrix4<Complex64>);

impl TwoQubitState {
    pub fn new(rho: Matrix4<Complex64>) -> Result<Self, SpinError> {
        let herm = (rho - rho.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm > HERMITICITY_TOLERANCE {
            return Err(SpinError::NotHermitian(herm));
        }
        let tr = rho.trace().re;
        if (tr - 1.0).abs() > TRACE_TOLERANCE {
            return Err(SpinError::BadTrace(tr));
        }
        let eig = hermitian_eigenvalues(&rho);
        for &e in eig.iter() {
            if e < -SPECTRUM_TOLERANCE || e > 1.0 + SPECTRUM_TOLERANCE {
                return Err(SpinError::BadSpectrum(e));
            }
        }
        Ok(Self(rho))
    }

    /// Symmetrizes, clamps the spectrum to `[0, 1]` and rebuilds. For
    /// quadrature output whose trace has already been checked.
    pub fn from_noisy(rho: &Matrix4<Complex64>) -> Self {
        let h = (rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = SymmetricEigen::new(h);
        let v = eig.eigenvectors;
        let d = Matrix4::from_diagonal(&eig.eigenvalues.map(|e| Complex64::new(e.clamp(0.0, 1.0), 0.0)));
        let out = &v * d * v.adjoint();
        Self((out + out.adjoint()) * Complex64::new(0.5, 0.0))
    }

    pub fn pure(psi: &Vector4<Complex64>) -> Result<Self, SpinError> {
        let n = psi.norm();
        if n == 0.0 {
            return Err(SpinError::ZeroVector);
        }
        let v = psi / Complex64::new(n, 0.0);
        Ok(Self(v * v.adjoint()))
    }

    pub fn maximally_mixed() -> Self {
        Self(Matrix4::identity() * Complex64::new(0.25, 0.0))
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix4<Complex64> {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        let e = hermitian_eigenvalues(&self.0);
        [e[0], e[1], e[2], e[3]]
    }

    /// Convex combination `w * self + (1 - w) * other`.
    pub fn mix(&self, other: &TwoQubitState, w: f64) -> Self {
        Self(self.0 * Complex64::new(w, 0.0) + other.0 * Complex64::new(1.0 - w, 0.0))
    }

    /// `(U x V) rho (U x V)^dagger`.
    pub fn local_unitary(&self, u: &Matrix2<Complex64>, v: &Matrix2<Complex64>) -> Self {
        let uv = u.kronecker(v);
        Self(&uv * self.0 * uv.adjoint())
    }
}

fn hermitian_eigenvalues(m: &Matrix4<Complex64>) -> Vector4<f64> {
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    SymmetricEigen::new(h).eigenvalues
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [BellState::PhiPlus, BellState::PhiMinus, BellState::PsiPlus, BellState::PsiMinus];

    pub fn vector(&self) -> Vector4<Complex64> {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let z = Complex64::new(0.0, 0.0);
        match self {
            BellState::PhiPlus => Vector4::new(h, z, z, h),
            BellState::PhiMinus => Vector4::new(h, z, z, -h),
            BellState::PsiPlus => Vector4::new(z, h, h, z),
            BellState::PsiMinus => Vector4::new(z, h, -h, z),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BellState::PhiPlus => "phi+",
            BellState::PhiMinus => "phi-",
            BellState::PsiPlus => "psi+",
            BellState::PsiMinus => "psi-",
        }
    }

    /// Vertex of the Bell tetrahedron.
    pub fn vertex(&self) -> TVector {
        match self {
            BellState::PhiPlus => TVector::new(1.0, -1.0, 1.0),
            BellState::PhiMinus => TVector::new(-1.0, 1.0, 1.0),
            BellState::PsiPlus => TVector::new(1.0, 1.0, -1.0),
            BellState::PsiMinus => TVector::new(-1.0, -1.0, -1.0),
        }
    }
}

impl fmt::Display for BellState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BellState {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "phi+" | "phi_plus" | "phiplus" => Ok(BellState::PhiPlus),
            "phi-" | "phi_minus" | "phiminus" => Ok(BellState::PhiMinus),
            "psi+" | "psi_plus" | "psiplus" => Ok(BellState::PsiPlus),
            "psi-" | "psi_minus" | "psiminus" => Ok(BellState::PsiMinus),
            _ => Err(format!("unknown Bell state '{s}' (expected phi+, phi-, psi+ or psi-)")),
        }
    }
}

pub fn bell_state(kind: BellState) -> TwoQubitState {
    let v = kind.vector();
    TwoQubitState(v * v.adjoint())
}

pub fn pauli() -> [Matrix2<Complex64>; 3] {
    let o = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    [
        Matrix2::new(o, one, one, o),
        Matrix2::new(o, -i, i, o),
        Matrix2::new(one, o, o, -one),
    ]
}

fn spin_flip_operator() -> Matrix4<Complex64> {
    let sy = pauli()[1];
    sy.kronecker(&sy)
}

fn hermitian_sqrt(m: &Matrix4<Complex64>) -> Matrix4<Complex64> {
    let eig = SymmetricEigen::new(*m);
    let v = eig.eigenvectors;
    let d = Matrix4::from_diagonal(&eig.eigenvalues.map(|e| Complex64::new(e.max(0.0).sqrt(), 0.0)));
    &v * d * v.adjoint()
}

/// Wootters' concurrence `max(0, l1 - l2 - l3 - l4)`.
pub fn concurrence(rho: &TwoQubitState) -> f64 {
    wootters_margin(rho).clamp(0.0, 1.0)
}

/// `l1 - l2 - l3 - l4` before the `max(0, .)`; negative inside the
/// separable set. The `l_i` are the square roots of the eigenvalues of
/// `rho rho~`, obtained from the Hermitian similar matrix
/// `sqrt(rho) rho~ sqrt(rho)`.
///
/// For nearly rank-deficient states the absolute accuracy is about
/// `sqrt(eps)`, set by the square roots of rounding-level eigenvalues.
pub fn wootters_margin(rho: &TwoQubitState) -> f64 {
    let r = rho.matrix();
    let yy = spin_flip_operator();
    let flipped = &yy * r.conjugate() * &yy;
    let s = hermitian_sqrt(r);
    let m = &s * flipped * &s;
    let mut l: Vec<f64> = hermitian_eigenvalues(&m).iter().map(|&e| e.max(0.0).sqrt()).collect();
    l.sort_by(|a, b| b.total_cmp(a));
    l[0] - l[1] - l[2] - l[3]
}

/// Diagonal correlations `(t_xx, t_yy, t_zz)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TVector {
    pub xx: f64,
    pub yy: f64,
    pub zz: f64,
}

impl TVector {
    pub const fn new(xx: f64, yy: f64, zz: f64) -> Self {
        Self { xx, yy, zz }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.xx, self.yy, self.zz]
    }

    pub fn norm(&self) -> f64 {
        self.distance(&TVector::default())
    }

    pub fn distance(&self, other: &TVector) -> f64 {
        ((self.xx - other.xx).powi(2) + (self.yy - other.yy).powi(2) + (self.zz - other.zz).powi(2)).sqrt()
    }

    pub fn l1_norm(&self) -> f64 {
        self.xx.abs() + self.yy.abs() + self.zz.abs()
    }
}

impl fmt::Display for TVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.4}, {:.4}, {:.4})", self.xx, self.yy, self.zz)
    }
}

/// Coefficients of `rho = (1 + r.s x 1 + 1 x s.s + sum t_ij s_i x s_j) / 4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliDecomposition {
    pub r: [f64; 3],
    pub s: [f64; 3],
    pub t: [[f64; 3]; 3],
}

fn expectation(rho: &Matrix4<Complex64>, op: &Matrix4<Complex64>) -> f64 {
    (rho * op).trace().re
}

pub fn pauli_decomposition(rho: &TwoQubitState) -> PauliDecomposition {
    let s = pauli();
    let id = Matrix2::<Complex64>::identity();
    let m = rho.matrix();
    let mut out = PauliDecomposition {
        r: [0.0; 3],
        s: [0.0; 3],
        t: [[0.0; 3]; 3],
    };
    for i in 0..3 {
        out.r[i] = expectation(m, &s[i].kronecker(&id));
        out.s[i] = expectation(m, &id.kronecker(&s[i]));
        for j in 0..3 {
            out.t[i][j] = expectation(m, &s[i].kronecker(&s[j]));
        }
    }
    out
}

pub fn t_vector(rho: &TwoQubitState) -> TVector {
    let s = pauli();
    let m = rho.matrix();
    let t = |i: usize| expectation(m, &s[i].kronecker(&s[i]));
    TVector::new(t(0), t(1), t(2))
}

/// Largest of `|r_i|`, `|s_i|` and the off-diagonal `|t_ij|`.
pub fn bell_diagonal_deviation(rho: &TwoQubitState) -> f64 {
    let d = pauli_decomposition(rho);
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        worst = worst.max(d.r[i].abs()).max(d.s[i].abs());
        for j in 0..3 {
            if i != j {
                worst = worst.max(d.t[i][j].abs());
            }
        }
    }
    worst
}

pub fn is_bell_diagonal(rho: &TwoQubitState, tol: f64) -> bool {
    bell_diagonal_deviation(rho) < tol
}

/// `|t_xx| + |t_yy| + |t_zz| <= 1`: the separable octahedron. Only
/// meaningful for Bell-diagonal states.
pub fn in_separable_octahedron(t: &TVector) -> bool {
    t.l1_norm() <= 1.0 + 1e-9
}

/// One sample of a rapidity sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitPoint {
    pub xi: f64,
    pub concurrence: f64,
    /// Signed Wootters quantity, used to interpolate zero crossings.
    pub margin: f64,
    pub t: TVector,
    pub bell_diagonal: bool,
    pub bell_deviation: f64,
    /// Past the rapidity up to which the scenario's numbers are trusted.
    pub beyond_validation: bool,
    pub rho: TwoQubitState,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn bell_t_vectors() {
        for b in BellState::ALL {
            let t = t_vector(&bell_state(b));
            assert!(t.distance(&b.vertex()) < 1e-15, "{b}: {t}");
        }
        assert_eq!(BellState::PhiPlus.vertex(), TVector::new(1.0, -1.0, 1.0));
        assert_eq!(BellState::PsiMinus.vertex(), TVector::new(-1.0, -1.0, -1.0));
        assert_eq!(BellState::PhiMinus.vertex(), TVector::new(-1.0, 1.0, 1.0));
    }

    #[test]
    fn bell_states_are_orthonormal() {
        for a in BellState::ALL {
            for b in BellState::ALL {
                let ip = a.vector().dotc(&b.vector());
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((ip - c(expect, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn concurrence_reference_values() {
        for b in BellState::ALL {
            assert!((concurrence(&bell_state(b)) - 1.0).abs() < 1e-12);
        }
        let up_up = TwoQubitState::pure(&Vector4::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0))).unwrap();
        assert!(concurrence(&up_up).abs() < 1e-12);
        // Werner-type mixture: max(0, (3p - 1)/2) at p = 1/2.
        let werner = bell_state(BellState::PhiPlus).mix(&TwoQubitState::maximally_mixed(), 0.5);
        assert!((concurrence(&werner) - 0.25).abs() < 1e-10);
    }

    #[test]
    fn werner_concurrence_against_direct_eigensolve() {
        // Brute force: general eigensolve of the non-Hermitian rho * rho~,
        // through its real 8x8 embedding [[Re, -Im], [Im, Re]] whose
        // spectrum lists every eigenvalue together with its conjugate.
        for &p in &[0.2, 0.4, 0.6, 0.9] {
            let rho = bell_state(BellState::PsiPlus).mix(&TwoQubitState::maximally_mixed(), p);
            let yy = spin_flip_operator();
            let prod = rho.matrix() * (yy * rho.matrix().conjugate() * yy);
            let mut real = nalgebra::SMatrix::<f64, 8, 8>::zeros();
            for i in 0..4 {
                for j in 0..4 {
                    let z = prod[(i, j)];
                    real[(i, j)] = z.re;
                    real[(i + 4, j + 4)] = z.re;
                    real[(i, j + 4)] = -z.im;
                    real[(i + 4, j)] = z.im;
                }
            }
            let mut ev: Vec<f64> = real.complex_eigenvalues().iter().map(|z| z.re).collect();
            ev.sort_by(|a, b| b.total_cmp(a));
            let mut l: Vec<f64> = ev.iter().step_by(2).map(|e| e.max(0.0).sqrt()).collect();
            l.sort_by(|a, b| b.total_cmp(a));
            let brute = (l[0] - l[1] - l[2] - l[3]).max(0.0);
            let analytic = ((3.0 * p - 1.0) / 2.0).max(0.0);
            assert!((brute - analytic).abs() < 1e-10);
            assert!((concurrence(&rho) - analytic).abs() < 1e-10);
        }
    }

    #[test]
    fn t_vector_of_mixtures() {
        assert!(t_vector(&TwoQubitState::maximally_mixed()).norm() < 1e-15);
        let a = bell_state(BellState::PhiPlus);
        let b = bell_state(BellState::PsiPlus);
        let t = t_vector(&a.mix(&b, 0.3));
        let (ta, tb) = (t_vector(&a), t_vector(&b));
        assert!((t.xx - (0.3 * ta.xx + 0.7 * tb.xx)).abs() < 1e-15);
        assert!((t.yy - (0.3 * ta.yy + 0.7 * tb.yy)).abs() < 1e-15);
        assert!((t.zz - (0.3 * ta.zz + 0.7 * tb.zz)).abs() < 1e-15);
    }

    #[test]
    fn bell_diagonal_detection() {
        for b in BellState::ALL {
            assert!(is_bell_diagonal(&bell_state(b), BELL_DIAGONAL_TOLERANCE));
        }
        assert!(is_bell_diagonal(&TwoQubitState::maximally_mixed(), BELL_DIAGONAL_TOLERANCE));
        let up_up = TwoQubitState::pure(&Vector4::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0))).unwrap();
        assert!(!is_bell_diagonal(&up_up, BELL_DIAGONAL_TOLERANCE));
    }

    #[test]
    fn octahedron_membership() {
        assert!(in_separable_octahedron(&TVector::new(0.0, 0.0, 0.0)));
        assert!(!in_separable_octahedron(&TVector::new(1.0, -1.0, 1.0)));
        assert!(in_separable_octahedron(&TVector::new(0.0, -1.0, 0.0)));
    }

    #[test]
    fn validation_rejects_non_states() {
        let mut m = Matrix4::<Complex64>::identity() * c(0.25, 0.0);
        m[(0, 1)] = c(0.1, 0.0);
        assert!(matches!(TwoQubitState::new(m), Err(SpinError::NotHermitian(_))));
        let m = Matrix4::<Complex64>::identity() * c(0.3, 0.0);
        assert!(matches!(TwoQubitState::new(m), Err(SpinError::BadTrace(_))));
        let m = Matrix4::from_diagonal(&Vector4::new(c(1.5, 0.0), c(-0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0)));
        assert!(matches!(TwoQubitState::new(m), Err(SpinError::BadSpectrum(_))));
        assert!(TwoQubitState::new(*bell_state(BellState::PsiMinus).matrix()).is_ok());
    }

    #[test]
    fn noisy_matrices_are_cleaned() {
        let mut m = *bell_state(BellState::PhiPlus).matrix();
        m[(0, 3)] += c(1e-12, 1e-12);
        let clean = TwoQubitState::from_noisy(&m);
        assert!(TwoQubitState::new(*clean.matrix()).is_ok());
        assert!(clean.eigenvalues().iter().all(|&e| e >= -1e-15));
    }
}
