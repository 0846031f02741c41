//! Scenario resolution: preset names, flat `key = value` files and command
//! line overrides.
//!
//! A config file holds one `key = value` pair per line; `#` starts a
//! comment. Recognised keys:
//!
//! ```text
//! model          = fsigma-rii            # preset name or model kind
//! sigma_over_m   = 4
//! p_centers      = (17.13, 0, -98.5); (-17.13, 0, -98.5)
//! q_centers      = (17.13, 0, -98.5); (-17.13, 0, -98.5)
//! xi_max         = 6.5
//! xi_samples     = 66
//! nodes_per_axis = 41
//! truncation     = 5
//! spin_state     = phi+
//! ```
//!
//! When `model` names a preset, the other keys adjust it. When it names a
//! model kind (`eprb`, `axis-centered`, `sum-two-lobes`, `cross-four-lobes`,
//! `entangled-phi-plus`), both center lists are required. `eprb` is both,
//! and means the preset.

use crate::error::CliError;
use boostlab::scenarios::{preset_names, GridSpec};
use boostlab::{preset, BellState, ModelKind, ScenarioConfig, Schedule, ThreeMomentum};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

pub const KEYS: [&str; 9] = [
    "model",
    "sigma_over_m",
    "p_centers",
    "q_centers",
    "xi_max",
    "xi_samples",
    "nodes_per_axis",
    "truncation",
    "spin_state",
];

/// Values given on the command line; each wins over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub sigma: Option<f64>,
    pub nodes: Option<usize>,
    pub truncation: Option<f64>,
    pub xi_max: Option<f64>,
    pub xi_samples: Option<usize>,
    pub spin: Option<BellState>,
}

/// Parsed but not yet resolved config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FileConfig {
    pub model: Option<String>,
    pub sigma_over_m: Option<f64>,
    pub p_centers: Option<Vec<ThreeMomentum>>,
    pub q_centers: Option<Vec<ThreeMomentum>>,
    pub xi_max: Option<f64>,
    pub xi_samples: Option<usize>,
    pub nodes_per_axis: Option<usize>,
    pub truncation: Option<f64>,
    pub spin_state: Option<BellState>,
}

fn bad(line: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("line {line}: {msg}"))
}

fn number<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T, CliError> {
    v.parse().map_err(|_| bad(line, format!("{key} expects a number, got '{v}'")))
}

/// `(x, y, z); (x, y, z)`; parentheses are optional.
pub fn parse_centers(v: &str) -> Result<Vec<ThreeMomentum>, String> {
    v.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            let inner = s.trim_start_matches('(').trim_end_matches(')');
            let parts: Vec<f64> = inner
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|_| format!("cannot read momentum '{s}'"))?;
            match parts[..] {
                [x, y, z] => Ok(ThreeMomentum::new(x, y, z)),
                _ => Err(format!("momentum '{s}' needs three components")),
            }
        })
        .collect()
}

pub fn parse_file(text: &str) -> Result<FileConfig, CliError> {
    let mut seen = BTreeMap::new();
    let mut cfg = FileConfig::default();
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| bad(n, format!("expected 'key = value', got '{line}'")))?;
        let (key, value) = (key.trim(), value.trim());
        if let Some(first) = seen.insert(key.to_string(), n) {
            return Err(bad(n, format!("{key} already set on line {first}")));
        }
        match key {
            "model" => cfg.model = Some(value.to_string()),
            "sigma_over_m" => cfg.sigma_over_m = Some(number(n, key, value)?),
            "p_centers" => cfg.p_centers = Some(parse_centers(value).map_err(|e| bad(n, e))?),
            "q_centers" => cfg.q_centers = Some(parse_centers(value).map_err(|e| bad(n, e))?),
            "xi_max" => cfg.xi_max = Some(number(n, key, value)?),
            "xi_samples" => cfg.xi_samples = Some(number(n, key, value)?),
            "nodes_per_axis" => cfg.nodes_per_axis = Some(number(n, key, value)?),
            "truncation" => cfg.truncation = Some(number(n, key, value)?),
            "spin_state" => cfg.spin_state = Some(value.parse().map_err(|e| bad(n, e))?),
            _ => return Err(bad(n, format!("unknown key '{key}' (expected one of: {})", KEYS.join(", ")))),
        }
    }
    Ok(cfg)
}

fn is_preset(name: &str) -> bool {
    preset(name).is_ok()
}

/// Builds the scenario a file describes. `stem` names scenarios that are
/// not based on a preset.
pub fn from_file(file: &FileConfig, stem: &str) -> Result<ScenarioConfig, CliError> {
    let model = file
        .model
        .as_deref()
        .ok_or_else(|| CliError::Config("config file must set 'model'".into()))?;
    let mut cfg = if is_preset(model) {
        let mut cfg = preset(model)?;
        if let Some(p) = &file.p_centers {
            cfg.p_centers = p.clone();
        }
        if let Some(q) = &file.q_centers {
            cfg.q_centers = q.clone();
        }
        cfg
    } else {
        let kind: ModelKind = model.parse().map_err(|e: String| {
            let presets: Vec<_> = preset_names().into_iter().map(|(n, _)| n).collect();
            CliError::Config(format!("{e}; or a preset: {}", presets.join(", ")))
        })?;
        let (Some(p), Some(q)) = (&file.p_centers, &file.q_centers) else {
            return Err(CliError::Config(format!("model kind '{kind}' needs both p_centers and q_centers")));
        };
        ScenarioConfig {
            name: stem.to_string(),
            kind,
            p_centers: p.clone(),
            q_centers: q.clone(),
            sigma: 1.0,
            sigmas: vec![1.0],
            boost_axis: [0.0, 0.0, 1.0],
            schedule: Schedule::default(),
            grid: GridSpec::default(),
            spin_state: BellState::PhiPlus,
            validated_xi_max: None,
        }
    };
    let o = Overrides {
        sigma: file.sigma_over_m,
        nodes: file.nodes_per_axis,
        truncation: file.truncation,
        xi_max: file.xi_max,
        xi_samples: file.xi_samples,
        spin: file.spin_state,
    };
    apply(&mut cfg, &o);
    Ok(cfg)
}

pub fn apply(cfg: &mut ScenarioConfig, o: &Overrides) {
    if let Some(s) = o.sigma {
        cfg.sigma = s;
    }
    if let Some(n) = o.nodes {
        cfg.grid.nodes_per_axis = n;
    }
    if let Some(t) = o.truncation {
        cfg.grid.truncation = t;
    }
    if let Some(m) = o.xi_max {
        cfg.schedule.max = m;
    }
    if let Some(c) = o.xi_samples {
        cfg.schedule.count = c;
    }
    if let Some(b) = o.spin {
        cfg.spin_state = b;
    }
}

/// Resolves `source` as an existing file, else as a preset name.
pub fn resolve(source: &str, overrides: &Overrides) -> Result<ScenarioConfig, CliError> {
    let path = Path::new(source);
    let mut cfg = if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{source}: {e}")))?;
        let file = parse_file(&text).map_err(|e| CliError::Config(format!("{source}: {e}")))?;
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("custom");
        from_file(&file, stem)?
    } else {
        preset(source)?
    };
    apply(&mut cfg, overrides);
    cfg.validate()?;
    Ok(cfg)
}

fn centers(list: &[ThreeMomentum]) -> String {
    list.iter()
        .map(|p| format!("({}, {}, {})", p.px, p.py, p.pz))
        .collect::<Vec<_>>()
        .join("; ")
}

/// Fixed-order text of everything that determines a run's numbers. Floats
/// use the shortest representation that round-trips.
pub fn canonical_text(cfg: &ScenarioConfig) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "scenario = {}", cfg.name);
    let _ = writeln!(s, "model = {}", cfg.kind);
    let _ = writeln!(s, "sigma_over_m = {}", cfg.sigma);
    let _ = writeln!(s, "p_centers = {}", centers(&cfg.p_centers));
    let _ = writeln!(s, "q_centers = {}", centers(&cfg.q_centers));
    let _ = writeln!(s, "boost_axis = ({}, {}, {})", cfg.boost_axis[0], cfg.boost_axis[1], cfg.boost_axis[2]);
    let _ = writeln!(s, "xi_min = {}", cfg.schedule.min);
    let _ = writeln!(s, "xi_max = {}", cfg.schedule.max);
    let _ = writeln!(s, "xi_samples = {}", cfg.schedule.count);
    let _ = writeln!(s, "nodes_per_axis = {}", cfg.grid.nodes_per_axis);
    let _ = writeln!(s, "truncation = {}", cfg.grid.truncation);
    let _ = writeln!(s, "spin_state = {}", cfg.spin_state);
    s
}

pub fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}
