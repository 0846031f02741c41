//! Named boost scenarios, rotation-type classification and rapidity sweeps.

use crate::channel::{ChannelError, Simulator};
use crate::kinematics::{wigner_angle, wigner_unitary, KinematicsError, ThreeMomentum};
use crate::momentum::{build_grid, MomentumError, MomentumModel, ModelKind, DEFAULT_NODES_PER_AXIS, DEFAULT_TRUNCATION};
use crate::spin::{
    bell_diagonal_deviation, bell_state, concurrence, t_vector, wootters_margin, BellState, OrbitPoint,
    BELL_DIAGONAL_TOLERANCE,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScenarioError {
    #[error("unknown scenario '{name}'; available presets: {}", available.join(", "))]
    UnknownPreset { name: String, available: Vec<String> },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Momentum(#[from] MomentumError),
    #[error(transparent)]
    Kinematics(#[from] KinematicsError),
    #[error("at xi = {xi}: {source}")]
    Channel { xi: f64, source: ChannelError },
}

impl From<ChannelError> for ScenarioError {
    fn from(e: ChannelError) -> Self {
        match e {
            ChannelError::Momentum(m) => ScenarioError::Momentum(m),
            other => ScenarioError::Channel { xi: f64::NAN, source: other },
        }
    }
}

/// Largest rapidity any scenario may sweep to.
pub const MAX_XI: f64 = 7.0;
/// Concurrence values below this are reported as exactly 0.
pub const CONCURRENCE_FLOOR: f64 = 1e-6;

/// `count` evenly spaced samples on `[min, max]`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Schedule {
    pub const fn new(min: f64, max: f64, count: usize) -> Self {
        Self { min, max, count }
    }

    pub fn validate(&self, what: &str) -> Result<(), ScenarioError> {
        if !self.min.is_finite() || !self.max.is_finite() {
            return Err(ScenarioError::InvalidConfig(format!("{what} range must be finite")));
        }
        if self.min > self.max {
            return Err(ScenarioError::InvalidConfig(format!(
                "{what} range is reversed ({} > {})",
                self.min, self.max
            )));
        }
        if self.count == 0 {
            return Err(ScenarioError::InvalidConfig(format!("{what} needs at least one sample")));
        }
        if self.count == 1 && self.min != self.max {
            return Err(ScenarioError::InvalidConfig(format!(
                "{what} with a single sample needs min == max"
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| if i + 1 == self.count { self.max } else { self.min + i as f64 * step })
            .collect()
    }
}

impl Default for Schedule {
    /// 66 samples on `[0, 6.5]`, a spacing of 0.1.
    fn default() -> Self {
        Self::new(0.0, 6.5, 66)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub nodes_per_axis: usize,
    pub truncation: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            nodes_per_axis: DEFAULT_NODES_PER_AXIS,
            truncation: DEFAULT_TRUNCATION,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub name: String,
    pub kind: ModelKind,
    pub p_centers: Vec<ThreeMomentum>,
    pub q_centers: Vec<ThreeMomentum>,
    pub sigma: f64,
    /// Widths the scenario is usually studied at; `sigma` is the first.
    pub sigmas: Vec<f64>,
    pub boost_axis: [f64; 3],
    pub schedule: Schedule,
    pub grid: GridSpec,
    pub spin_state: BellState,
    /// Rapidity beyond which points are flagged as outside the trusted range.
    pub validated_xi_max: Option<f64>,
}

impl ScenarioConfig {
    pub fn build_model(&self) -> Result<MomentumModel, ScenarioError> {
        self.validate()?;
        Ok(MomentumModel::from_centers(
            self.kind,
            self.p_centers.clone(),
            self.q_centers.clone(),
            self.sigma,
        )?)
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.boost_axis != [0.0, 0.0, 1.0] {
            return Err(ScenarioError::InvalidConfig(format!(
                "scenarios boost along +z, got axis {:?}",
                self.boost_axis
            )));
        }
        self.schedule.validate("xi")?;
        if self.schedule.min < 0.0 {
            return Err(ScenarioError::InvalidConfig(format!(
                "rapidities must be non-negative, got {}",
                self.schedule.min
            )));
        }
        if self.schedule.max > MAX_XI {
            return Err(ScenarioError::InvalidConfig(format!(
                "xi_max {} exceeds {MAX_XI}",
                self.schedule.max
            )));
        }
        if self.grid.nodes_per_axis < 2 {
            return Err(MomentumError::TooFewNodes(self.grid.nodes_per_axis).into());
        }
        if !self.grid.truncation.is_finite() || self.grid.truncation < 3.0 {
            return Err(MomentumError::TruncationTooSmall(self.grid.truncation).into());
        }
        Ok(())
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn with_nodes(mut self, nodes: usize) -> Self {
        self.grid.nodes_per_axis = nodes;
        self
    }

    pub fn with_schedule(mut self, schedule: Schedule) -> Self {
        self.schedule = schedule;
        self
    }
}

const X0: f64 = 17.13;
const Z0: f64 = -98.5;

fn p(x: f64, y: f64, z: f64) -> ThreeMomentum {
    ThreeMomentum::new(x, y, z)
}

fn x_pair() -> Vec<ThreeMomentum> {
    vec![p(X0, 0.0, Z0), p(-X0, 0.0, Z0)]
}

fn y_pair() -> Vec<ThreeMomentum> {
    vec![p(0.0, X0, Z0), p(0.0, -X0, Z0)]
}

fn cross(pz: f64, r: f64) -> Vec<ThreeMomentum> {
    vec![p(0.0, r, pz), p(0.0, -r, pz), p(r, 0.0, pz), p(-r, 0.0, pz)]
}

struct PresetDef {
    name: &'static str,
    summary: &'static str,
}

const PRESETS: &[PresetDef] = &[
    PresetDef { name: "eprb", summary: "back-to-back lobes at (+-17.13, 0, 0)" },
    PresetDef { name: "fsigma-ri1", summary: "two x-z lobes for particle 1, one axial lobe for particle 2" },
    PresetDef { name: "fsigma-rii", summary: "two x-z lobes for both particles" },
    PresetDef { name: "fsigma-rij", summary: "y-z lobes for particle 1, x-z lobes for particle 2" },
    PresetDef { name: "axis-p4", summary: "shared axial lobe at (0, 0, 4)" },
    PresetDef { name: "axis-0", summary: "shared lobe at the origin" },
    PresetDef { name: "axis-m4", summary: "shared axial lobe at (0, 0, -4)" },
    PresetDef { name: "axis-extreme", summary: "shared axial lobe at (0, 0, -98.5), wide packets" },
    PresetDef { name: "fcross-large", summary: "four lobes per particle at large momentum" },
    PresetDef { name: "fcross-axis-m4", summary: "four narrow lobes at radius 3 around (0, 0, -4)" },
    PresetDef { name: "fcross-axis-0", summary: "four narrow lobes at radius 3 around the origin" },
    PresetDef { name: "fcross-axis-p4", summary: "four narrow lobes at radius 3 around (0, 0, 4)" },
    PresetDef { name: "ent-rii", summary: "entangled momenta, y-z lobes for both particles" },
    PresetDef { name: "ent-rij", summary: "entangled momenta, y-z lobes paired with x-z lobes" },
];

/// `(name, one-line description)` of every preset.
pub fn preset_names() -> Vec<(&'static str, &'static str)> {
    PRESETS.iter().map(|d| (d.name, d.summary)).collect()
}

pub fn preset(name: &str) -> Result<ScenarioConfig, ScenarioError> {
    let key = match name.trim() {
        "fcross-axis-model" => "fcross-axis-m4",
        other => other,
    };
    use ModelKind::*;
    let (kind, pc, qc, sigmas, validated) = match key {
        "eprb" => (Eprb, vec![p(X0, 0.0, 0.0)], vec![p(-X0, 0.0, 0.0)], vec![1.0, 2.0, 4.0], None),
        "fsigma-ri1" => (SumTwoLobes, x_pair(), vec![p(0.0, 0.0, Z0); 2], vec![1.0], Some(4.8)),
        "fsigma-rii" => (SumTwoLobes, x_pair(), x_pair(), vec![1.0, 4.0], None),
        "fsigma-rij" => (SumTwoLobes, y_pair(), x_pair(), vec![1.0], None),
        "axis-p4" => (AxisCentered, vec![p(0.0, 0.0, 4.0)], vec![p(0.0, 0.0, 4.0)], vec![1.0], None),
        "axis-0" => (AxisCentered, vec![p(0.0, 0.0, 0.0)], vec![p(0.0, 0.0, 0.0)], vec![1.0], None),
        "axis-m4" => (AxisCentered, vec![p(0.0, 0.0, -4.0)], vec![p(0.0, 0.0, -4.0)], vec![1.0, 4.0], None),
        "axis-extreme" => (
            AxisCentered,
            vec![p(0.0, 0.0, Z0)],
            vec![p(0.0, 0.0, Z0)],
            vec![1.0, 2.0, 4.0, 8.0],
            None,
        ),
        "fcross-large" => {
            let lobes = [y_pair(), x_pair()].concat();
            (CrossFourLobes, lobes.clone(), lobes, vec![1.0], None)
        }
        "fcross-axis-m4" => (CrossFourLobes, cross(-4.0, 3.0), cross(-4.0, 3.0), vec![0.25], None),
        "fcross-axis-0" => (CrossFourLobes, cross(0.0, 3.0), cross(0.0, 3.0), vec![0.25], None),
        "fcross-axis-p4" => (CrossFourLobes, cross(4.0, 3.0), cross(4.0, 3.0), vec![0.25], None),
        "ent-rii" => (EntangledPhiPlus, y_pair(), y_pair(), vec![1.0], None),
        "ent-rij" => (EntangledPhiPlus, y_pair(), x_pair(), vec![1.0], None),
        _ => {
            return Err(ScenarioError::UnknownPreset {
                name: name.to_string(),
                available: PRESETS.iter().map(|d| d.name.to_string()).collect(),
            })
        }
    };
    Ok(ScenarioConfig {
        name: key.to_string(),
        kind,
        p_centers: pc,
        q_centers: qc,
        sigma: sigmas[0],
        sigmas,
        boost_axis: [0.0, 0.0, 1.0],
        schedule: Schedule::default(),
        grid: GridSpec::default(),
        spin_state: BellState::PhiPlus,
        validated_xi_max: validated,
    })
}

/// Rotation a z-boost induces on one particle's spin, read off its lobe
/// centers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SingleRotation {
    /// Lobes on the boost axis.
    Identity,
    /// Lobes in the y-z plane.
    AboutX,
    /// Lobes in the x-z plane.
    AboutY,
    Mixed,
}

impl fmt::Display for SingleRotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SingleRotation::Identity => "1",
            SingleRotation::AboutX => "R_X",
            SingleRotation::AboutY => "R_Y",
            SingleRotation::Mixed => "mixed",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RotationClass {
    /// `1 x 1`
    Trivial,
    /// `R x 1` or `1 x R`
    OneSided,
    /// `R_i x R_i`
    SameAxis,
    /// `R_i x R_j`, `i != j`
    CrossAxis,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RotationType {
    pub class: RotationClass,
    pub first: SingleRotation,
    pub second: SingleRotation,
}

impl fmt::Display for RotationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.class == RotationClass::Mixed {
            return write!(f, "mixed ({} x {})", self.first, self.second);
        }
        write!(f, "{} x {}", self.first, self.second)
    }
}

fn lobe_rotation(c: &ThreeMomentum) -> SingleRotation {
    match (c.px == 0.0, c.py == 0.0) {
        (true, true) => SingleRotation::Identity,
        (true, false) => SingleRotation::AboutX,
        (false, true) => SingleRotation::AboutY,
        (false, false) => SingleRotation::Mixed,
    }
}

fn particle_rotation(centers: &[ThreeMomentum]) -> SingleRotation {
    let mut kinds = centers.iter().map(lobe_rotation);
    let first = kinds.next().unwrap_or(SingleRotation::Identity);
    if kinds.all(|k| k == first) {
        first
    } else {
        SingleRotation::Mixed
    }
}

pub fn rotation_type(config: &ScenarioConfig) -> RotationType {
    use SingleRotation::*;
    let first = particle_rotation(&config.p_centers);
    let second = particle_rotation(&config.q_centers);
    let class = match (first, second) {
        (Mixed, _) | (_, Mixed) => RotationClass::Mixed,
        (Identity, Identity) => RotationClass::Trivial,
        (Identity, _) | (_, Identity) => RotationClass::OneSided,
        (a, b) if a == b => RotationClass::SameAxis,
        _ => RotationClass::CrossAxis,
    };
    RotationType { class, first, second }
}

/// Boosted state, concurrence and t-vector at every scheduled rapidity, in
/// rapidity order.
pub fn orbit(config: &ScenarioConfig) -> Result<Vec<OrbitPoint>, ScenarioError> {
    let model = config.build_model()?;
    let grid = build_grid(&model, config.grid.nodes_per_axis, config.grid.truncation)?;
    let sim = Simulator::new(model, grid)?;
    orbit_with(&sim, config)
}

/// [`orbit`] on a prepared simulator, e.g. one normalized on another grid.
pub fn orbit_with(sim: &Simulator, config: &ScenarioConfig) -> Result<Vec<OrbitPoint>, ScenarioError> {
    config.validate()?;
    let rho0 = bell_state(config.spin_state);
    config
        .schedule
        .values()
        .into_par_iter()
        .map(|xi| {
            let rho = sim.boost(&rho0, xi).map_err(|source| ScenarioError::Channel { xi, source })?;
            let c = concurrence(&rho);
            let deviation = bell_diagonal_deviation(&rho);
            Ok(OrbitPoint {
                xi,
                concurrence: if c < CONCURRENCE_FLOOR { 0.0 } else { c },
                margin: wootters_margin(&rho),
                t: t_vector(&rho),
                bell_diagonal: deviation < BELL_DIAGONAL_TOLERANCE,
                bell_deviation: deviation,
                beyond_validation: config.validated_xi_max.is_some_and(|m| xi > m + 1e-9),
                rho,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossingDirection {
    /// Entangled to separable.
    Falling,
    /// Separable to entangled.
    Rising,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroCrossing {
    pub xi: f64,
    pub direction: CrossingDirection,
}

/// Sign changes of the Wootters quantity, linearly interpolated between the
/// bracketing samples.
pub fn zero_crossings(points: &[OrbitPoint]) -> Vec<ZeroCrossing> {
    let mut out = Vec::new();
    for w in points.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let direction = if a.margin > 0.0 && b.margin <= 0.0 {
            CrossingDirection::Falling
        } else if a.margin <= 0.0 && b.margin > 0.0 {
            CrossingDirection::Rising
        } else {
            continue;
        };
        let xi = a.xi + (b.xi - a.xi) * a.margin / (a.margin - b.margin);
        out.push(ZeroCrossing { xi, direction });
    }
    out
}

/// First entangled-to-separable crossing.
pub fn zero_crossing(points: &[OrbitPoint]) -> Option<f64> {
    zero_crossings(points)
        .into_iter()
        .find(|c| c.direction == CrossingDirection::Falling)
        .map(|c| c.xi)
}

/// Sample closest to `xi`.
pub fn nearest_point(points: &[OrbitPoint], xi: f64) -> Option<&OrbitPoint> {
    points.iter().min_by(|a, b| (a.xi - xi).abs().total_cmp(&(b.xi - xi).abs()))
}

/// Points with `lo <= xi <= hi`, up to sampling round-off.
pub fn points_in(points: &[OrbitPoint], lo: f64, hi: f64) -> impl Iterator<Item = &OrbitPoint> {
    points.iter().filter(move |p| p.xi >= lo - 1e-9 && p.xi <= hi + 1e-9)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwrPoint {
    pub xi: f64,
    pub theta: f64,
    pub omega: f64,
}

/// `wigner_angle(xi, xi, theta)` over a rapidity by boost-angle grid, rows
/// in rapidity order.
pub fn twr_surface(xi: &Schedule, theta: &Schedule) -> Result<Vec<TwrPoint>, ScenarioError> {
    xi.validate("xi")?;
    theta.validate("theta")?;
    if xi.min < 0.0 {
        return Err(ScenarioError::InvalidConfig(format!("rapidities must be non-negative, got {}", xi.min)));
    }
    if theta.min < 0.0 || theta.max > PI + 1e-12 {
        return Err(ScenarioError::InvalidConfig(format!(
            "theta range [{}, {}] leaves [0, pi]",
            theta.min, theta.max
        )));
    }
    let thetas = theta.values();
    Ok(xi
        .values()
        .into_iter()
        .flat_map(|x| {
            thetas.iter().map(move |&t| TwrPoint {
                xi: x,
                theta: t,
                omega: wigner_angle(x, x, t.min(PI)),
            })
        })
        .collect())
}

/// Momenta sampled across an axis-centered packet at different depths.
pub fn twr_sample_momenta() -> Vec<(String, ThreeMomentum)> {
    [p(3.0, 0.0, 0.0), p(3.0, 0.0, -4.0), p(3.0, 0.0, -98.0), p(8.0, 0.0, -98.0)]
        .into_iter()
        .map(|m| (format!("({},{},{})", m.px, m.py, m.pz), m))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwrCurve {
    pub label: String,
    pub momentum: ThreeMomentum,
    /// `(xi, omega)` pairs.
    pub points: Vec<(f64, f64)>,
}

/// Spin rotation angle of a particle at each momentum under a z-boost.
pub fn twr_samples(momenta: &[(String, ThreeMomentum)], xi: &Schedule) -> Result<Vec<TwrCurve>, ScenarioError> {
    xi.validate("xi")?;
    let xs = xi.values();
    Ok(momenta
        .iter()
        .map(|(label, m)| TwrCurve {
            label: label.clone(),
            momentum: *m,
            points: xs.iter().map(|&x| (x, wigner_unitary(x, m).angle())).collect(),
        })
        .collect())
}
