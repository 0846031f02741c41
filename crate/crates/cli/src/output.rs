//! CSV tables, gnuplot scripts and the run manifest.

use crate::error::CliError;
use boostlab::scenarios::{GridSpec, TwrCurve, TwrPoint};
use boostlab::{BellState, OrbitPoint, Schedule};
use serde::Serialize;
use std::fs;
use std::path::{Path, PathBuf};

/// 12 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.11e}")
}

fn write_csv<const N: usize>(path: &Path, header: [&str; N], rows: impl IntoIterator<Item = [String; N]>) -> Result<(), CliError> {
    let csv_err = |source| CliError::Csv { path: path.to_path_buf(), source };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn write_orbit_csv(path: &Path, points: &[OrbitPoint]) -> Result<(), CliError> {
    write_csv(
        path,
        ["xi", "concurrence", "t_xx", "t_yy", "t_zz", "bell_diagonal"],
        points.iter().map(|p| {
            [
                num(p.xi),
                num(p.concurrence),
                num(p.t.xx),
                num(p.t.yy),
                num(p.t.zz),
                p.bell_diagonal.to_string(),
            ]
        }),
    )
}

pub fn write_twr_surface_csv(path: &Path, points: &[TwrPoint]) -> Result<(), CliError> {
    write_csv(
        path,
        ["xi", "theta", "omega"],
        points.iter().map(|p| [num(p.xi), num(p.theta), num(p.omega)]),
    )
}

pub fn write_twr_samples_csv(path: &Path, curves: &[TwrCurve]) -> Result<(), CliError> {
    write_csv(
        path,
        ["momentum", "xi", "omega"],
        curves
            .iter()
            .flat_map(|c| c.points.iter().map(|&(xi, w)| [c.label.clone(), num(xi), num(w)])),
    )
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn concurrence_script(scenario: &str) -> String {
    format!(
        "set datafile separator ','\n\
         set terminal png size 900,600\n\
         set output 'concurrence.png'\n\
         set title '{scenario}'\n\
         set xlabel 'rapidity xi'\n\
         set ylabel 'concurrence'\n\
         set yrange [0:1.05]\n\
         set grid\n\
         plot 'orbit.csv' skip 1 using 1:2 with linespoints pointtype 7 pointsize 0.6 notitle\n"
    )
}

/// t-space trajectory inside the tetrahedron spanned by the Bell vertices,
/// with the starting point marked.
pub fn orbit_script(scenario: &str) -> String {
    let mut vertices = String::new();
    // Walk that traverses all six edges.
    for b in [
        BellState::PhiPlus,
        BellState::PhiMinus,
        BellState::PsiPlus,
        BellState::PhiPlus,
        BellState::PsiMinus,
        BellState::PhiMinus,
        BellState::PsiPlus,
        BellState::PsiMinus,
    ] {
        let v = b.vertex();
        vertices.push_str(&format!("{} {} {}\n", v.xx, v.yy, v.zz));
    }
    format!(
        "set datafile separator ','\n\
         set terminal png size 800,800\n\
         set output 'orbit.png'\n\
         set title '{scenario}'\n\
         set xlabel 't_xx'\n\
         set ylabel 't_yy'\n\
         set zlabel 't_zz'\n\
         set xrange [-1:1]\n\
         set yrange [-1:1]\n\
         set zrange [-1:1]\n\
         set view equal xyz\n\
         $tetrahedron << EOD\n\
         {vertices}EOD\n\
         splot $tetrahedron using 1:2:3 with lines linecolor 'gray' notitle, \\\n\
         \x20     'orbit.csv' skip 1 using 3:4:5 with linespoints pointtype 7 pointsize 0.6 title 'orbit', \\\n\
         \x20     'orbit.csv' skip 1 every ::0::0 using 3:4:5 with points pointtype 5 pointsize 1.5 title 'xi = min'\n"
    )
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub scenario: String,
    pub config_sha256: String,
    /// The hashed text itself, so the hash can be recomputed.
    pub config: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    pub schedule: Schedule,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_schedule: Option<Schedule>,
    pub threads: usize,
    pub wall_time_seconds: f64,
    pub outputs: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, scenario: &str, config: String) -> Self {
        Self {
            tool: "boostlab",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            scenario: scenario.to_string(),
            config_sha256: crate::config::sha256_hex(&config),
            config,
            grid: None,
            schedule: Schedule::default(),
            theta_schedule: None,
            threads: rayon::current_num_threads(),
            wall_time_seconds: 0.0,
            outputs: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf, CliError> {
        let path = dir.join("manifest.json");
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        write_text(&path, &text)?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_carry_twelve_significant_digits() {
        assert_eq!(num(1.0), "1.00000000000e0");
        assert_eq!(num(-0.123456789012345), "-1.23456789012e-1");
        assert_eq!(num(0.0), "0.00000000000e0");
    }

    #[test]
    fn labels_with_commas_are_quoted() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        let curve = TwrCurve {
            label: "(3,0,0)".into(),
            momentum: boostlab::ThreeMomentum::new(3.0, 0.0, 0.0),
            points: vec![(0.0, 0.0)],
        };
        write_twr_samples_csv(&path, &[curve]).unwrap();
        let text = fs::read_to_string(path).unwrap();
        assert_eq!(text, "momentum,xi,omega\n\"(3,0,0)\",0.00000000000e0,0.00000000000e0\n");
    }

    #[test]
    fn orbit_script_walks_every_tetrahedron_edge() {
        let s = orbit_script("x");
        assert_eq!(s.matches("\n").count(), s.lines().count());
        let block: Vec<_> = s.split("EOD\n").nth(1).unwrap().lines().collect();
        assert_eq!(block.len(), 8);
        assert_eq!(block[0], block[3]);
    }
}
