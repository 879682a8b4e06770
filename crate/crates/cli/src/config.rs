//! Plain-text key=value scenario configuration.
//!
//! Recognized keys: `system.kind`, `system.omega`, `system.alpha`,
//! `system.beta`, `system.lambda`, `state.kind`, `state.q0`, `state.p0`,
//! `state.gamma`, `state.w`, `sim.hbar`, `time.start`, `time.end`,
//! `time.samples`, `output.columns`. Lines starting with `#` and blank
//! lines are ignored.

use crate::error::CliError;
use std::collections::HashMap;
use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub enum SystemKind {
    Quadratic { omega: f64, alpha: f64, beta: f64 },
    Quartic { lambda: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateKind {
    Coherent { q0: f64, p0: f64 },
    Squeezed { q0: f64, p0: f64, gamma: f64 },
    QuarticCoherent { q0: f64, p0: f64, w: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub start: f64,
    pub end: f64,
    pub samples: usize,
}

impl TimeGrid {
    pub fn times(&self) -> Vec<f64> {
        let n = self.samples;
        (0..n)
            .map(|i| self.start + (self.end - self.start) * i as f64 / (n - 1) as f64)
            .collect()
    }
}

/// Trace columns the simulate command can emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column {
    T,
    MeanQ,
    MeanP,
    VarQ,
    VarP,
    Product,
    HeisenbergOk,
}

impl Column {
    pub const ALL: [Column; 7] = [
        Column::T,
        Column::MeanQ,
        Column::MeanP,
        Column::VarQ,
        Column::VarP,
        Column::Product,
        Column::HeisenbergOk,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Column::T => "t",
            Column::MeanQ => "mean_Q",
            Column::MeanP => "mean_P",
            Column::VarQ => "var_Q",
            Column::VarP => "var_P",
            Column::Product => "product",
            Column::HeisenbergOk => "heisenberg_ok",
        }
    }

    fn parse(s: &str) -> Option<Column> {
        Column::ALL.iter().copied().find(|c| c.name() == s)
    }
}

/// One simulation scenario: system, initial state, ħ and time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub system: SystemKind,
    pub state: StateKind,
    pub hbar: f64,
    pub time: TimeGrid,
    pub columns: Vec<Column>,
}

impl Scenario {
    pub fn state_moments(&self, hbar: f64) -> (f64, f64, f64, f64) {
        match self.state {
            StateKind::Coherent { q0, p0 } => (q0, p0, hbar / 2.0, hbar / 2.0),
            StateKind::Squeezed { q0, p0, gamma } => {
                (q0, p0, hbar / (2.0 * gamma), hbar * gamma / 2.0)
            }
            StateKind::QuarticCoherent { q0, p0, w } => (q0, p0, hbar * w / 2.0, hbar / (2.0 * w)),
        }
    }
}

struct RawConfig {
    entries: HashMap<String, (String, usize)>,
}

impl RawConfig {
    fn take(&mut self, key: &str) -> Option<(String, usize)> {
        self.entries.remove(key)
    }

    fn f64_opt(&mut self, key: &str) -> Result<Option<f64>, CliError> {
        match self.take(key) {
            None => Ok(None),
            Some((raw, line)) => raw
                .parse::<f64>()
                .map(Some)
                .map_err(|_| CliError::config(line, format!("{key}: expected a number, got `{raw}`"))),
        }
    }

    fn f64_or(&mut self, key: &str, default: f64) -> Result<f64, CliError> {
        Ok(self.f64_opt(key)?.unwrap_or(default))
    }

    fn f64_required(&mut self, key: &str) -> Result<f64, CliError> {
        self.f64_opt(key)?
            .ok_or_else(|| CliError::config(0, format!("missing required key `{key}`")))
    }
}

/// Parse a scenario configuration file.
pub fn parse_file(path: &Path) -> Result<Scenario, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(0, format!("cannot read {}: {e}", path.display())))?;
    parse_str(&text)
}

pub fn parse_str(text: &str) -> Result<Scenario, CliError> {
    let mut entries = HashMap::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::config(line_no, format!("expected `key = value`, got `{line}`"))
        })?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if entries.insert(key.clone(), (value, line_no)).is_some() {
            return Err(CliError::config(line_no, format!("duplicate key `{key}`")));
        }
    }
    let mut raw = RawConfig { entries };

    let system = match raw.take("system.kind") {
        Some((kind, line)) => match kind.as_str() {
            "quadratic" => SystemKind::Quadratic {
                omega: raw.f64_required("system.omega")?,
                alpha: raw.f64_or("system.alpha", 0.0)?,
                beta: raw.f64_or("system.beta", 0.0)?,
            },
            "quartic" => SystemKind::Quartic {
                lambda: raw.f64_required("system.lambda")?,
            },
            other => {
                return Err(CliError::config(
                    line,
                    format!("system.kind must be `quadratic` or `quartic`, got `{other}`"),
                ))
            }
        },
        None => return Err(CliError::config(0, "missing required key `system.kind`".into())),
    };

    let state = match raw.take("state.kind") {
        Some((kind, line)) => {
            let q0 = raw.f64_or("state.q0", 0.0)?;
            let p0 = raw.f64_or("state.p0", 0.0)?;
            match kind.as_str() {
                "coherent" => StateKind::Coherent { q0, p0 },
                "squeezed" => StateKind::Squeezed {
                    q0,
                    p0,
                    gamma: raw.f64_required("state.gamma")?,
                },
                "quartic_coherent" => StateKind::QuarticCoherent {
                    q0,
                    p0,
                    w: raw.f64_required("state.w")?,
                },
                other => {
                    return Err(CliError::config(
                        line,
                        format!(
                            "state.kind must be `coherent`, `squeezed` or `quartic_coherent`, got `{other}`"
                        ),
                    ))
                }
            }
        }
        None => return Err(CliError::config(0, "missing required key `state.kind`".into())),
    };

    let hbar = raw.f64_or("sim.hbar", 1.0)?;
    if !(hbar > 0.0) {
        return Err(CliError::config(0, format!("sim.hbar must be positive, got {hbar}")));
    }

    let start = raw.f64_required("time.start")?;
    let end = raw.f64_required("time.end")?;
    let samples = match raw.take("time.samples") {
        Some((raw_v, line)) => raw_v.parse::<usize>().map_err(|_| {
            CliError::config(line, format!("time.samples: expected an integer, got `{raw_v}`"))
        })?,
        None => return Err(CliError::config(0, "missing required key `time.samples`".into())),
    };
    if samples < 2 {
        return Err(CliError::config(0, format!("time.samples must be >= 2, got {samples}")));
    }
    if !(end > start) {
        return Err(CliError::config(
            0,
            format!("time.end ({end}) must exceed time.start ({start})"),
        ));
    }

    let columns = match raw.take("output.columns") {
        None => Column::ALL.to_vec(),
        Some((raw_v, line)) => {
            let mut cols = Vec::new();
            for name in raw_v.split(',') {
                let name = name.trim();
                let col = Column::parse(name).ok_or_else(|| {
                    CliError::config(line, format!("unknown column `{name}`"))
                })?;
                cols.push(col);
            }
            if cols.is_empty() {
                return Err(CliError::config(line, "output.columns is empty".into()));
            }
            cols
        }
    };

    if let Some(key) = raw.entries.keys().next() {
        let line = raw.entries[key].1;
        return Err(CliError::config(line, format!("unknown key `{key}`")));
    }

    Ok(Scenario {
        system,
        state,
        hbar,
        time: TimeGrid { start, end, samples },
        columns,
    })
}
