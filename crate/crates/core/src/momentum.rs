//! Gaussian momentum wavefunctions and the momentum-space quadrature they
//! are integrated on.
//!
//! Every model is a sum of product terms `sum_k A_k(p) B_k(q)`, where each
//! `A_k` / `B_k` is a plain sum of Gaussian lobes. Product families have a
//! single term; the entangled family has two correlated terms.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

use crate::kinematics::{energy, ThreeMomentum};
use crate::reduce::deterministic_sum;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MomentumError {
    #[error("gaussian width must be finite and positive, got {0}")]
    InvalidWidth(f64),
    #[error("lobe center {0} is not finite")]
    InvalidCenter(ThreeMomentum),
    #[error("{kind} expects {expected} lobe centers per particle, got {p} and {q}")]
    Arity {
        kind: ModelKind,
        expected: usize,
        p: usize,
        q: usize,
    },
    #[error("{0}")]
    Geometry(String),
    #[error("quadrature needs at least 2 nodes per axis, got {0}")]
    TooFewNodes(usize),
    #[error("truncation radius {0} sigma under-covers the wavepacket (minimum 3)")]
    TruncationTooSmall(f64),
    #[error("raw norm {0:e} is degenerate; grid misses the wavepacket")]
    DegenerateNorm(f64),
}

/// One Gaussian component `exp(-|p - p0|^2 / (4 sigma^2))`.
///
/// The squared amplitude is a normal density with per-axis standard
/// deviation `sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianLobe {
    pub center: ThreeMomentum,
    pub sigma: f64,
}

impl GaussianLobe {
    pub fn new(center: ThreeMomentum, sigma: f64) -> Result<Self, MomentumError> {
        if !sigma.is_finite() || sigma <= 0.0 {
            return Err(MomentumError::InvalidWidth(sigma));
        }
        if !center.is_finite() {
            return Err(MomentumError::InvalidCenter(center));
        }
        Ok(Self { center, sigma })
    }

    pub fn amplitude(&self, p: &ThreeMomentum) -> f64 {
        lobe_amplitude(self, p)
    }
}

pub fn lobe_amplitude(lobe: &GaussianLobe, p: &ThreeMomentum) -> f64 {
    let d2 = (*p - lobe.center).norm_squared();
    (-d2 / (4.0 * lobe.sigma * lobe.sigma)).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    /// One lobe per particle, `q0 = -p0`.
    Eprb,
    /// One lobe per particle, both on the z axis.
    AxisCentered,
    /// Two lobes per particle in a single product.
    SumTwoLobes,
    /// Four lobes per particle in a single product.
    CrossFourLobes,
    /// `g(p,p0) g(q,q0) + g(p,p0') g(q,q0')`.
    EntangledPhiPlus,
}

impl ModelKind {
    pub const ALL: [ModelKind; 5] = [
        ModelKind::Eprb,
        ModelKind::AxisCentered,
        ModelKind::SumTwoLobes,
        ModelKind::CrossFourLobes,
        ModelKind::EntangledPhiPlus,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::Eprb => "eprb",
            ModelKind::AxisCentered => "axis-centered",
            ModelKind::SumTwoLobes => "sum-two-lobes",
            ModelKind::CrossFourLobes => "cross-four-lobes",
            ModelKind::EntangledPhiPlus => "entangled-phi-plus",
        }
    }

    /// Lobe centers expected per particle.
    pub fn arity(&self) -> usize {
        match self {
            ModelKind::Eprb | ModelKind::AxisCentered => 1,
            ModelKind::SumTwoLobes | ModelKind::EntangledPhiPlus => 2,
            ModelKind::CrossFourLobes => 4,
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase();
        let kind = match key.as_str() {
            "eprb" => ModelKind::Eprb,
            "axis-centered" | "axis" => ModelKind::AxisCentered,
            "sum-two-lobes" | "fsigma" => ModelKind::SumTwoLobes,
            "cross-four-lobes" | "fcross" => ModelKind::CrossFourLobes,
            "entangled-phi-plus" | "entangled" => ModelKind::EntangledPhiPlus,
            _ => {
                let names: Vec<_> = ModelKind::ALL.iter().map(|k| k.name()).collect();
                return Err(format!("unknown model '{s}' (expected one of: {})", names.join(", ")));
            }
        };
        Ok(kind)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Particle {
    First,
    Second,
}

/// `coefficient * A(p) * B(q)` with `A`, `B` sums of lobes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductTerm {
    pub coefficient: f64,
    pub p_lobes: Vec<GaussianLobe>,
    pub q_lobes: Vec<GaussianLobe>,
}

impl ProductTerm {
    pub fn lobes(&self, particle: Particle) -> &[GaussianLobe] {
        match particle {
            Particle::First => &self.p_lobes,
            Particle::Second => &self.q_lobes,
        }
    }

    /// Sum of the lobe amplitudes at `p`, added in sorted order so the
    /// result does not depend on how mirror-image lobes are listed.
    pub fn factor(&self, particle: Particle, p: &ThreeMomentum) -> f64 {
        let mut v: Vec<f64> = self.lobes(particle).iter().map(|l| l.amplitude(p)).collect();
        v.sort_by(f64::total_cmp);
        v.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentumModel {
    kind: ModelKind,
    sigma: f64,
    p_centers: Vec<ThreeMomentum>,
    q_centers: Vec<ThreeMomentum>,
    terms: Vec<ProductTerm>,
    normalization: Option<f64>,
}

impl MomentumModel {
    /// Builds a model from its lobe centers.
    ///
    /// Mirror partners are listed explicitly, so the scenario convention of
    /// reflecting only the transverse part (`(+-17.13, 0, -98.5)`) and a
    /// literal `+-p0` are both expressible.
    pub fn from_centers(
        kind: ModelKind,
        p_centers: Vec<ThreeMomentum>,
        q_centers: Vec<ThreeMomentum>,
        sigma: f64,
    ) -> Result<Self, MomentumError> {
        let n = kind.arity();
        if p_centers.len() != n || q_centers.len() != n {
            return Err(MomentumError::Arity {
                kind,
                expected: n,
                p: p_centers.len(),
                q: q_centers.len(),
            });
        }
        let lobe = |c: &ThreeMomentum| GaussianLobe::new(*c, sigma);
        let p_lobes = p_centers.iter().map(lobe).collect::<Result<Vec<_>, _>>()?;
        let q_lobes = q_centers.iter().map(lobe).collect::<Result<Vec<_>, _>>()?;

        match kind {
            ModelKind::Eprb => {
                let defect = (p_centers[0] + q_centers[0]).norm();
                if defect > 1e-12 * (1.0 + p_centers[0].norm()) {
                    return Err(MomentumError::Geometry(format!(
                        "eprb needs opposite centers, got {} and {}",
                        p_centers[0], q_centers[0]
                    )));
                }
            }
            ModelKind::AxisCentered => {
                for c in p_centers.iter().chain(&q_centers) {
                    if c.px != 0.0 || c.py != 0.0 {
                        return Err(MomentumError::Geometry(format!(
                            "axis-centered lobe {c} is off the z axis"
                        )));
                    }
                }
            }
            _ => {}
        }

        let terms = if kind == ModelKind::EntangledPhiPlus {
            p_lobes
                .iter()
                .zip(&q_lobes)
                .map(|(a, b)| ProductTerm {
                    coefficient: 1.0,
                    p_lobes: vec![*a],
                    q_lobes: vec![*b],
                })
                .collect()
        } else {
            vec![ProductTerm {
                coefficient: 1.0,
                p_lobes,
                q_lobes,
            }]
        };

        Ok(Self {
            kind,
            sigma,
            p_centers,
            q_centers,
            terms,
            normalization: None,
        })
    }

    pub fn eprb(p0: ThreeMomentum, sigma: f64) -> Result<Self, MomentumError> {
        Self::from_centers(ModelKind::Eprb, vec![p0], vec![-p0], sigma)
    }

    /// Both particles share the same center on the z axis.
    pub fn axis_centered(pz: f64, sigma: f64) -> Result<Self, MomentumError> {
        let c = ThreeMomentum::new(0.0, 0.0, pz);
        Self::from_centers(ModelKind::AxisCentered, vec![c], vec![c], sigma)
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn terms(&self) -> &[ProductTerm] {
        &self.terms
    }

    pub fn centers(&self, particle: Particle) -> &[ThreeMomentum] {
        match particle {
            Particle::First => &self.p_centers,
            Particle::Second => &self.q_centers,
        }
    }

    /// `N`, once [`normalize`] has run.
    pub fn normalization(&self) -> Option<f64> {
        self.normalization
    }

    pub fn set_normalization(&mut self, n: f64) {
        self.normalization = Some(n);
    }

    /// Lobe combination without the `N^{-1/2}` prefactor.
    pub fn raw_amplitude(&self, p: &ThreeMomentum, q: &ThreeMomentum) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coefficient * t.factor(Particle::First, p) * t.factor(Particle::Second, q))
            .sum()
    }
}

/// `N^{-1/2} f(p, q)`; an unnormalized model is evaluated with `N = 1`.
pub fn model_amplitude(model: &MomentumModel, p: &ThreeMomentum, q: &ThreeMomentum) -> f64 {
    let n = model.normalization.unwrap_or(1.0);
    model.raw_amplitude(p, q) / n.sqrt()
}

/// Uniform midpoint grid over one particle's bounding box.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleGrid {
    pub lower: [f64; 3],
    pub upper: [f64; 3],
    pub spacing: [f64; 3],
    pub axes: [Vec<f64>; 3],
    /// Row-major over (x, y, z).
    pub nodes: Vec<ThreeMomentum>,
    /// `dp^3 / (2 E(p))` at each node.
    pub weights: Vec<f64>,
}

impl ParticleGrid {
    fn covering(centers: &[ThreeMomentum], sigma: f64, n: usize, truncation: f64) -> Self {
        let reach = truncation * sigma;
        let coord = |c: &ThreeMomentum, i: usize| [c.px, c.py, c.pz][i];
        let mut lower = [0.0; 3];
        let mut upper = [0.0; 3];
        let mut spacing = [0.0; 3];
        let mut axes: [Vec<f64>; 3] = Default::default();
        for i in 0..3 {
            let lo = centers.iter().map(|c| coord(c, i)).fold(f64::INFINITY, f64::min) - reach;
            let hi = centers.iter().map(|c| coord(c, i)).fold(f64::NEG_INFINITY, f64::max) + reach;
            let h = (hi - lo) / n as f64;
            lower[i] = lo;
            upper[i] = hi;
            spacing[i] = h;
            axes[i] = (0..n).map(|j| lo + (j as f64 + 0.5) * h).collect();
        }
        let cell = spacing[0] * spacing[1] * spacing[2];
        let mut nodes = Vec::with_capacity(n * n * n);
        for &x in &axes[0] {
            for &y in &axes[1] {
                for &z in &axes[2] {
                    nodes.push(ThreeMomentum::new(x, y, z));
                }
            }
        }
        let weights = nodes.iter().map(|p| cell / (2.0 * energy(p))).collect();
        Self {
            lower,
            upper,
            spacing,
            axes,
            nodes,
            weights,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `sum_i w_i a(i) b(i)` in a fixed reduction order.
    pub fn weighted_overlap(&self, a: &[f64], b: &[f64]) -> f64 {
        deterministic_sum(self.len(), 0.0, |i| self.weights[i] * a[i] * b[i])
    }
}

/// Tensor-product midpoint quadrature for both particles.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    pub nodes_per_axis: usize,
    pub truncation: f64,
    pub first: ParticleGrid,
    pub second: ParticleGrid,
}

impl QuadratureGrid {
    pub fn particle(&self, particle: Particle) -> &ParticleGrid {
        match particle {
            Particle::First => &self.first,
            Particle::Second => &self.second,
        }
    }
}

pub const DEFAULT_NODES_PER_AXIS: usize = 41;
pub const DEFAULT_TRUNCATION: f64 = 5.0;

/// One bounding box per particle covering every lobe center by
/// `truncation * sigma`, sampled at `nodes_per_axis` cell midpoints.
pub fn build_grid(
    model: &MomentumModel,
    nodes_per_axis: usize,
    truncation: f64,
) -> Result<QuadratureGrid, MomentumError> {
    if nodes_per_axis < 2 {
        return Err(MomentumError::TooFewNodes(nodes_per_axis));
    }
    if !truncation.is_finite() || truncation < 3.0 {
        return Err(MomentumError::TruncationTooSmall(truncation));
    }
    let sigma = model.sigma();
    Ok(QuadratureGrid {
        nodes_per_axis,
        truncation,
        first: ParticleGrid::covering(model.centers(Particle::First), sigma, nodes_per_axis, truncation),
        second: ParticleGrid::covering(model.centers(Particle::Second), sigma, nodes_per_axis, truncation),
    })
}

/// `A_k` for every term, tabulated on one particle's nodes.
pub fn factor_tables(model: &MomentumModel, grid: &QuadratureGrid, particle: Particle) -> Vec<Vec<f64>> {
    let g = grid.particle(particle);
    model
        .terms()
        .iter()
        .map(|t| g.nodes.iter().map(|p| t.factor(particle, p)).collect())
        .collect()
}

/// Discretized `int dmu_p dmu_q |f|^2` without the `1/N` factor.
///
/// The double sum factorizes over term pairs:
/// `sum_kl c_k c_l (sum_p w A_k A_l)(sum_q w B_k B_l)`.
pub fn raw_norm(model: &MomentumModel, grid: &QuadratureGrid) -> f64 {
    let a = factor_tables(model, grid, Particle::First);
    let b = factor_tables(model, grid, Particle::Second);
    let terms = model.terms();
    let mut total = 0.0;
    for k in 0..terms.len() {
        for l in 0..terms.len() {
            let c = terms[k].coefficient * terms[l].coefficient;
            total += c * grid.first.weighted_overlap(&a[k], &a[l]) * grid.second.weighted_overlap(&b[k], &b[l]);
        }
    }
    total
}

/// Computes and stores `N` so the discretized norm on `grid` is 1.
pub fn normalize(model: &mut MomentumModel, grid: &QuadratureGrid) -> Result<f64, MomentumError> {
    let raw = raw_norm(model, grid);
    if !raw.is_finite() || raw < 1e-300 {
        return Err(MomentumError::DegenerateNorm(raw));
    }
    model.set_normalization(raw);
    Ok(raw)
}

/// Discretized norm of the model as currently normalized.
pub fn discrete_norm(model: &MomentumModel, grid: &QuadratureGrid) -> f64 {
    raw_norm(model, grid) / model.normalization().unwrap_or(1.0)
}
