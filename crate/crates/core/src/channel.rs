//! The spin channel induced by a boost on a two-particle wavepacket.
//!
//! After the change of variables `p -> Lambda p` the reduced spin state is
//!
//! ```text
//! rho' = int dmu_p dmu_q |f(p, q)|^2 (U_p x U_q) rho (U_p x U_q)^dagger
//! ```
//!
//! with `U_p = U(W(Lambda, p))`. Writing `f = sum_k c_k A_k(p) B_k(q)`, the
//! 6-D integral splits into products of 3-D single-particle transfer
//! superoperators `K_kl`, one per term pair.

use crate::kinematics::wigner_unitary;
use crate::momentum::{
    factor_tables, model_amplitude, normalize, MomentumError, MomentumModel, Particle, ParticleGrid, QuadratureGrid,
};
use crate::reduce::deterministic_sum;
use crate::spin::TwoQubitState;
use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error("boosted trace {trace:.9} deviates from 1 at xi = {xi} (grid under-resolved)")]
    TraceDefect { xi: f64, trace: f64 },
    #[error("rapidity {0} is not finite")]
    BadRapidity(f64),
    #[error("direct quadrature needs {0} node pairs, above the limit of {DIRECT_PAIR_LIMIT}")]
    Oversized(usize),
    #[error(transparent)]
    Momentum(#[from] MomentumError),
}

pub const TRACE_GUARD: f64 = 1e-6;
pub const DIRECT_PAIR_LIMIT: usize = 10_000_000;

/// Single-particle superoperator `X -> sum_p w A_k A_l U X U^dagger`,
/// acting on column-vectorized 2x2 operators (`vec(X)[i + 2j] = X[i, j]`).
#[derive(Debug, Clone, PartialEq)]
pub struct TransferOperator {
    pub matrix: Matrix4<Complex64>,
    pub k: usize,
    pub l: usize,
    /// `sum_p w A_k A_l`, the trace scaling of the map.
    pub weight: f64,
}

impl TransferOperator {
    pub fn apply(&self, x: &Matrix2<Complex64>) -> Matrix2<Complex64> {
        unvec(&(self.matrix * vec2(x)))
    }
}

fn vec2(x: &Matrix2<Complex64>) -> nalgebra::Vector4<Complex64> {
    nalgebra::Vector4::new(x[(0, 0)], x[(1, 0)], x[(0, 1)], x[(1, 1)])
}

fn unvec(v: &nalgebra::Vector4<Complex64>) -> Matrix2<Complex64> {
    Matrix2::new(v[0], v[2], v[1], v[3])
}

/// `conj(U) x U`, the superoperator of `X -> U X U^dagger`.
pub fn conjugation_superoperator(u: &Matrix2<Complex64>) -> Matrix4<Complex64> {
    u.conjugate().kronecker(u)
}

/// Builds `K_kl` from tabulated amplitudes on one particle's nodes.
pub fn transfer_operator(grid: &ParticleGrid, amp_k: &[f64], amp_l: &[f64], xi: f64, k: usize, l: usize) -> TransferOperator {
    let matrix = deterministic_sum(grid.len(), Matrix4::zeros(), |i| {
        let w = grid.weights[i] * amp_k[i] * amp_l[i];
        if w == 0.0 {
            return Matrix4::zeros();
        }
        let u = wigner_unitary(xi, &grid.nodes[i]);
        conjugation_superoperator(&u.0) * Complex64::new(w, 0.0)
    });
    TransferOperator {
        matrix,
        k,
        l,
        weight: grid.weighted_overlap(amp_k, amp_l),
    }
}

/// `(K1 x K2)(rho)` for a two-qubit operator, with particle 1 the first qubit.
pub fn apply_product(k1: &Matrix4<Complex64>, k2: &Matrix4<Complex64>, rho: &Matrix4<Complex64>) -> Matrix4<Complex64> {
    let mut out = Matrix4::zeros();
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                for d in 0..2 {
                    let r = rho[(2 * a + b, 2 * c + d)];
                    if r == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let col1 = a + 2 * c;
                    let col2 = b + 2 * d;
                    for a2 in 0..2 {
                        for c2 in 0..2 {
                            let f1 = k1[(a2 + 2 * c2, col1)] * r;
                            for b2 in 0..2 {
                                for d2 in 0..2 {
                                    out[(2 * a2 + b2, 2 * c2 + d2)] += f1 * k2[(b2 + 2 * d2, col2)];
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// One weighted term `c_k c_l K1_kl x K2_kl` of the channel.
#[derive(Debug, Clone)]
pub struct ChannelTerm {
    pub coefficient: f64,
    pub first: Arc<TransferOperator>,
    pub second: Arc<TransferOperator>,
}

/// The full two-qubit channel at one rapidity.
#[derive(Debug, Clone)]
pub struct SpinChannel {
    pub xi: f64,
    pub terms: Vec<ChannelTerm>,
    pub normalization: f64,
}

impl SpinChannel {
    /// Applies the channel without cleanup.
    pub fn apply_raw(&self, rho: &Matrix4<Complex64>) -> Matrix4<Complex64> {
        let mut out = Matrix4::zeros();
        for t in &self.terms {
            out += apply_product(&t.first.matrix, &t.second.matrix, rho) * Complex64::new(t.coefficient, 0.0);
        }
        out / Complex64::new(self.normalization, 0.0)
    }
}

type CacheKey = (Particle, usize, usize, u64);

/// A normalized model on a fixed grid, with memoized transfer operators.
#[derive(Debug)]
pub struct Simulator {
    model: MomentumModel,
    grid: QuadratureGrid,
    tables_first: Vec<Vec<f64>>,
    tables_second: Vec<Vec<f64>>,
    cache: Mutex<HashMap<CacheKey, Arc<TransferOperator>>>,
}

impl Simulator {
    /// Normalizes the model on `grid` unless it already carries `N`.
    pub fn new(mut model: MomentumModel, grid: QuadratureGrid) -> Result<Self, ChannelError> {
        if model.normalization().is_none() {
            normalize(&mut model, &grid)?;
        }
        let tables_first = factor_tables(&model, &grid, Particle::First);
        let tables_second = factor_tables(&model, &grid, Particle::Second);
        Ok(Self {
            model,
            grid,
            tables_first,
            tables_second,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn model(&self) -> &MomentumModel {
        &self.model
    }

    pub fn grid(&self) -> &QuadratureGrid {
        &self.grid
    }

    pub fn transfer(&self, particle: Particle, k: usize, l: usize, xi: f64) -> Arc<TransferOperator> {
        // K_kl = K_lk for real amplitudes.
        let (k, l) = (k.min(l), k.max(l));
        let key = (particle, k, l, xi.to_bits());
        if let Some(op) = self.cache.lock().unwrap().get(&key) {
            return op.clone();
        }
        let tables = match particle {
            Particle::First => &self.tables_first,
            Particle::Second => &self.tables_second,
        };
        let op = Arc::new(transfer_operator(self.grid.particle(particle), &tables[k], &tables[l], xi, k, l));
        self.cache.lock().unwrap().entry(key).or_insert(op).clone()
    }

    pub fn channel(&self, xi: f64) -> Result<SpinChannel, ChannelError> {
        if !xi.is_finite() {
            return Err(ChannelError::BadRapidity(xi));
        }
        let terms = self.model.terms();
        let mut out = Vec::with_capacity(terms.len() * terms.len());
        for k in 0..terms.len() {
            for l in 0..terms.len() {
                out.push(ChannelTerm {
                    coefficient: terms[k].coefficient * terms[l].coefficient,
                    first: self.transfer(Particle::First, k, l, xi),
                    second: self.transfer(Particle::Second, k, l, xi),
                });
            }
        }
        Ok(SpinChannel {
            xi,
            terms: out,
            normalization: self.model.normalization().unwrap_or(1.0),
        })
    }

    /// Boosted spin state before symmetrization and clamping.
    pub fn boost_raw(&self, rho: &TwoQubitState, xi: f64) -> Result<Matrix4<Complex64>, ChannelError> {
        Ok(self.channel(xi)?.apply_raw(rho.matrix()))
    }

    pub fn boost(&self, rho: &TwoQubitState, xi: f64) -> Result<TwoQubitState, ChannelError> {
        finalize(&self.boost_raw(rho, xi)?, xi)
    }

    pub fn clear_cache(&self) {
        self.cache.lock().unwrap().clear();
    }

    pub fn cached_operators(&self) -> usize {
        self.cache.lock().unwrap().len()
    }
}

fn finalize(raw: &Matrix4<Complex64>, xi: f64) -> Result<TwoQubitState, ChannelError> {
    let trace = raw.trace().re;
    if !trace.is_finite() || (trace - 1.0).abs() > TRACE_GUARD {
        return Err(ChannelError::TraceDefect { xi, trace });
    }
    Ok(TwoQubitState::from_noisy(raw))
}

/// Factorized boost of a spin state. Builds a one-shot [`Simulator`]; use
/// that type directly for sweeps.
pub fn boost_spin_state(
    model: &MomentumModel,
    rho: &TwoQubitState,
    xi: f64,
    grid: &QuadratureGrid,
) -> Result<TwoQubitState, ChannelError> {
    Simulator::new(model.clone(), grid.clone())?.boost(rho, xi)
}

/// Unfactorized 6-D quadrature over every node pair. Oracle for small grids.
pub fn boost_spin_state_direct_raw(
    model: &MomentumModel,
    rho: &TwoQubitState,
    xi: f64,
    grid: &QuadratureGrid,
) -> Result<Matrix4<Complex64>, ChannelError> {
    if !xi.is_finite() {
        return Err(ChannelError::BadRapidity(xi));
    }
    let (gp, gq) = (&grid.first, &grid.second);
    let pairs = gp.len().saturating_mul(gq.len());
    if pairs > DIRECT_PAIR_LIMIT {
        return Err(ChannelError::Oversized(pairs));
    }
    let mut model = model.clone();
    if model.normalization().is_none() {
        normalize(&mut model, grid)?;
    }
    let uq: Vec<Matrix2<Complex64>> = gq.nodes.iter().map(|q| wigner_unitary(xi, q).0).collect();
    let r = *rho.matrix();
    Ok(deterministic_sum(gp.len(), Matrix4::zeros(), |i| {
        let p = &gp.nodes[i];
        let up = wigner_unitary(xi, p).0;
        let mut acc = Matrix4::zeros();
        for (j, q) in gq.nodes.iter().enumerate() {
            let f = model_amplitude(&model, p, q);
            let w = gp.weights[i] * gq.weights[j] * f * f;
            if w == 0.0 {
                continue;
            }
            let u = up.kronecker(&uq[j]);
            acc += (u * r * u.adjoint()) * Complex64::new(w, 0.0);
        }
        acc
    }))
}

pub fn boost_spin_state_direct(
    model: &MomentumModel,
    rho: &TwoQubitState,
    xi: f64,
    grid: &QuadratureGrid,
) -> Result<TwoQubitState, ChannelError> {
    finalize(&boost_spin_state_direct_raw(model, rho, xi, grid)?, xi)
}

/// Largest entrywise modulus of `a - b`.
pub fn max_entry_distance(a: &Matrix4<Complex64>, b: &Matrix4<Complex64>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
