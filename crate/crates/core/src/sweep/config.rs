//! Flat `key = value` sweep configuration with dotted keys.
//!
//! ```text
//! # Markovian dephasing time sweep
//! grid.x.name  = t
//! grid.x.start = 0
//! grid.x.stop  = 20
//! grid.x.count = 201
//! fixed.T      = 0.5
//! fixed.omega  = 1
//! fixed.delta0 = -2
//! channel.kind = dephasing
//! channel.tau  = 0.1
//! channel.mu   = 0.6
//! estimate     = T, delta0
//! format       = csv
//! ```
//!
//! Every key can be overridden from the command line with `--key value`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use crate::channels::KernelForm;
use crate::error::{Error, Result};
use crate::model::Axis;

/// A scalar that can be swept or fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Param {
    Temperature,
    Omega,
    Delta0,
    Time,
    Strength,
    Kappa,
    Mu,
    Tau,
    Rate,
}

impl Param {
    pub const ALL: [Param; 9] = [
        Param::Temperature,
        Param::Omega,
        Param::Delta0,
        Param::Time,
        Param::Strength,
        Param::Kappa,
        Param::Mu,
        Param::Tau,
        Param::Rate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Param::Temperature => "T",
            Param::Omega => "omega",
            Param::Delta0 => "delta0",
            Param::Time => "t",
            Param::Strength => "s",
            Param::Kappa => "kappa",
            Param::Mu => "mu",
            Param::Tau => "tau",
            Param::Rate => "v",
        }
    }

    pub fn parse(s: &str) -> Option<Param> {
        Param::ALL.into_iter().find(|p| p.name() == s)
    }

    /// Parameters that only describe the channel.
    pub fn is_channel_param(self) -> bool {
        !matches!(self, Param::Temperature | Param::Omega | Param::Delta0)
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChannelKind {
    None,
    Dephasing,
    AmplitudeDamping,
    PhaseFlip,
    PhaseDamping,
    CorrelatedPauli,
}

impl ChannelKind {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "none" => Self::None,
            "dephasing" => Self::Dephasing,
            "ad" => Self::AmplitudeDamping,
            "pf" => Self::PhaseFlip,
            "pd" => Self::PhaseDamping,
            "correlated_pauli" => Self::CorrelatedPauli,
            _ => return None,
        })
    }
}

/// An output column.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Column {
    VarSim(Axis),
    VarInd(Axis),
    Gamma,
    Fisher(Axis, Axis),
    TraceResidual,
    MinEigenvalue,
    CommutatorNorm,
    Flags,
}

impl Column {
    /// Every column in canonical order.
    pub fn all() -> Vec<Column> {
        let mut out: Vec<Column> = Axis::ALL.iter().map(|&a| Column::VarSim(a)).collect();
        out.extend(Axis::ALL.iter().map(|&a| Column::VarInd(a)));
        out.push(Column::Gamma);
        for (i, &a) in Axis::ALL.iter().enumerate() {
            for &b in &Axis::ALL[i..] {
                out.push(Column::Fisher(a, b));
            }
        }
        out.extend([
            Column::TraceResidual,
            Column::MinEigenvalue,
            Column::CommutatorNorm,
            Column::Flags,
        ]);
        out
    }

    /// Columns that say something for the given estimated axes.
    pub fn defaults_for(estimate: &[Axis]) -> Vec<Column> {
        Column::all()
            .into_iter()
            .filter(|c| match *c {
                Column::VarSim(a) | Column::VarInd(a) => estimate.contains(&a),
                Column::Fisher(a, b) => estimate.contains(&a) && estimate.contains(&b),
                _ => true,
            })
            .collect()
    }

    pub fn name(self) -> String {
        match self {
            Column::VarSim(a) => format!("var_{}_sim", a.tag()),
            Column::VarInd(a) => format!("var_{}_ind", a.tag()),
            Column::Gamma => "gamma".into(),
            Column::Fisher(a, b) => format!("F_{}{}", a.tag(), b.tag()),
            Column::TraceResidual => "trace_residual".into(),
            Column::MinEigenvalue => "min_eigenvalue".into(),
            Column::CommutatorNorm => "commutator_norm".into(),
            Column::Flags => "flags".into(),
        }
    }

    pub fn parse(s: &str) -> Option<Column> {
        Column::all().into_iter().find(|c| c.name() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxisSpec {
    pub param: Param,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl AxisSpec {
    /// Evenly spaced points; the last one is exactly `stop`.
    pub fn values(&self) -> Vec<f64> {
        let n = self.count;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    /// Outer axis first.
    pub axes: Vec<AxisSpec>,
    /// Non-swept parameter values, from `fixed.*` and `channel.*`.
    pub fixed: BTreeMap<Param, f64>,
    pub channel: ChannelKind,
    pub kernel: KernelForm,
    pub pauli_probs: Option<[f64; 4]>,
    pub estimate: Vec<Axis>,
    pub outputs: Vec<Column>,
    pub format: Format,
    pub workers: usize,
    pub output: Option<PathBuf>,
}

fn cfg_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| cfg_err(format!("line {}: expected `key = value`, got `{line}`", n + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// Turns `--key value` and `--key=value` arguments into pairs.
pub fn parse_overrides(args: &[String]) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        let key = arg
            .strip_prefix("--")
            .ok_or_else(|| cfg_err(format!("unexpected argument `{arg}`; overrides look like --channel.tau 5")))?;
        if let Some((k, v)) = key.split_once('=') {
            out.push((k.to_string(), v.to_string()));
        } else {
            let v = it.next().ok_or_else(|| cfg_err(format!("missing value for --{key}")))?;
            out.push((key.to_string(), v.clone()));
        }
    }
    Ok(out)
}

impl SweepConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_pairs(parse_pairs(&text)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_pairs(parse_pairs(text)?)
    }

    /// Builds a config; later pairs override earlier ones with the same key.
    pub fn from_pairs(pairs: Vec<(String, String)>) -> Result<Self> {
        let mut map: BTreeMap<String, String> = BTreeMap::new();
        for (k, v) in pairs {
            map.insert(k, v);
        }
        let num = |key: &str, v: &str| -> Result<f64> {
            v.parse::<f64>()
                .map_err(|_| cfg_err(format!("{key}: expected a number, got `{v}`")))
        };

        let mut axes = Vec::new();
        let mut fixed = BTreeMap::new();
        let mut fixed_source: BTreeMap<Param, String> = BTreeMap::new();
        let mut pauli = [None; 4];
        let mut channel = ChannelKind::None;
        let mut kernel = KernelForm::Normalized;
        let mut estimate = vec![Axis::Temperature, Axis::Delta0];
        let mut outputs = None;
        let mut format = Format::Csv;
        let mut workers = 1;
        let mut output = None;

        for grid in ["x", "y"] {
            let prefix = format!("grid.{grid}.");
            let keys: Vec<&String> = map.keys().filter(|k| k.starts_with(&prefix)).collect();
            if keys.is_empty() {
                continue;
            }
            let get = |field: &str| {
                map.get(&format!("{prefix}{field}"))
                    .ok_or_else(|| cfg_err(format!("{prefix}{field} is required")))
            };
            let name = get("name")?;
            let param = Param::parse(name).ok_or_else(|| cfg_err(format!("{prefix}name: unknown parameter `{name}`")))?;
            let start = num(&format!("{prefix}start"), get("start")?)?;
            let stop = num(&format!("{prefix}stop"), get("stop")?)?;
            let count_s = get("count")?;
            let count: usize = count_s
                .parse()
                .map_err(|_| cfg_err(format!("{prefix}count: expected an integer, got `{count_s}`")))?;
            if count < 2 {
                return Err(cfg_err(format!("{prefix}count must be at least 2, got {count}")));
            }
            for k in keys {
                let field = &k[prefix.len()..];
                if !["name", "start", "stop", "count"].contains(&field) {
                    return Err(cfg_err(format!("unknown key `{k}`")));
                }
            }
            axes.push(AxisSpec {
                param,
                start,
                stop,
                count,
            });
        }
        if axes.len() == 2 && axes[0].param == axes[1].param {
            return Err(cfg_err(format!("grid.x and grid.y both sweep `{}`", axes[0].param)));
        }
        if !map.contains_key("grid.x.name") && !axes.is_empty() {
            return Err(cfg_err("grid.y is set without grid.x"));
        }

        for (key, value) in &map {
            if key.starts_with("grid.") {
                continue;
            }
            if let Some(name) = key.strip_prefix("fixed.") {
                let param = Param::parse(name).ok_or_else(|| cfg_err(format!("unknown key `{key}`")))?;
                insert_fixed(&mut fixed, &mut fixed_source, param, num(key, value)?, key)?;
                continue;
            }
            if let Some(name) = key.strip_prefix("channel.") {
                match name {
                    "kind" => {
                        channel = ChannelKind::parse(value)
                            .ok_or_else(|| cfg_err(format!("channel.kind: unknown channel `{value}`")))?
                    }
                    "kernel" => {
                        kernel = KernelForm::parse(value)
                            .ok_or_else(|| cfg_err(format!("channel.kernel: expected normalized or printed, got `{value}`")))?
                    }
                    "p0" | "p1" | "p2" | "p3" => {
                        let i = name[1..].parse::<usize>().unwrap_or(0);
                        pauli[i] = Some(num(key, value)?);
                    }
                    _ => {
                        let param = Param::parse(name)
                            .filter(|p| p.is_channel_param())
                            .ok_or_else(|| cfg_err(format!("unknown key `{key}`")))?;
                        insert_fixed(&mut fixed, &mut fixed_source, param, num(key, value)?, key)?;
                    }
                }
                continue;
            }
            match key.as_str() {
                "estimate" => {
                    estimate = split_list(value)
                        .map(|s| Axis::parse(s).ok_or_else(|| cfg_err(format!("estimate: unknown parameter `{s}`"))))
                        .collect::<Result<Vec<_>>>()?;
                }
                "outputs" => {
                    outputs = Some(
                        split_list(value)
                            .map(|s| Column::parse(s).ok_or_else(|| cfg_err(format!("outputs: unknown column `{s}`"))))
                            .collect::<Result<Vec<_>>>()?,
                    );
                }
                "format" => {
                    format = match value.as_str() {
                        "csv" => Format::Csv,
                        "json" => Format::Json,
                        _ => return Err(cfg_err(format!("format: expected csv or json, got `{value}`"))),
                    }
                }
                "workers" => {
                    workers = value
                        .parse()
                        .ok()
                        .filter(|&w: &usize| w >= 1)
                        .ok_or_else(|| cfg_err(format!("workers: expected a positive integer, got `{value}`")))?
                }
                "output" => output = Some(PathBuf::from(value)),
                _ => return Err(cfg_err(format!("unknown key `{key}`"))),
            }
        }

        if estimate.is_empty() {
            return Err(cfg_err("estimate must name at least one of T, delta0, omega"));
        }
        for (i, a) in estimate.iter().enumerate() {
            if estimate[..i].contains(a) {
                return Err(cfg_err(format!("estimate lists `{a}` twice")));
            }
        }
        for ax in &axes {
            if let Some(src) = fixed_source.get(&ax.param) {
                return Err(cfg_err(format!("`{}` is swept and also set by {src}", ax.param)));
            }
        }

        let pauli_probs = match pauli {
            [None, None, None, None] => None,
            [Some(a), Some(b), Some(c), Some(d)] => Some([a, b, c, d]),
            _ => return Err(cfg_err("channel.p0 .. channel.p3 must be given together")),
        };
        if channel == ChannelKind::CorrelatedPauli && pauli_probs.is_none() {
            return Err(cfg_err("correlated_pauli needs channel.p0 .. channel.p3"));
        }

        let cfg = SweepConfig {
            axes,
            fixed,
            channel,
            kernel,
            pauli_probs,
            outputs: outputs.unwrap_or_else(|| Column::defaults_for(&estimate)),
            estimate,
            format,
            workers,
            output,
        };
        cfg.check_complete()?;
        Ok(cfg)
    }

    fn defines(&self, p: Param) -> bool {
        self.fixed.contains_key(&p) || self.axes.iter().any(|a| a.param == p)
    }

    /// Every value the channel and model need must be defined somewhere.
    fn check_complete(&self) -> Result<()> {
        for p in [Param::Temperature, Param::Omega, Param::Delta0] {
            if !self.defines(p) {
                return Err(cfg_err(format!("`{p}` is neither swept nor set with fixed.{p}")));
            }
        }
        let need = |ps: &[Param]| ps.iter().all(|&p| self.defines(p));
        let ok = match self.channel {
            ChannelKind::None => true,
            ChannelKind::Dephasing => need(&[Param::Kappa]) || need(&[Param::Time, Param::Tau, Param::Mu]),
            ChannelKind::AmplitudeDamping | ChannelKind::PhaseFlip | ChannelKind::PhaseDamping => {
                need(&[Param::Strength]) || need(&[Param::Rate, Param::Time])
            }
            ChannelKind::CorrelatedPauli => need(&[Param::Mu]),
        };
        if !ok {
            let hint = match self.channel {
                ChannelKind::Dephasing => "kappa, or t with channel.tau and channel.mu",
                ChannelKind::CorrelatedPauli => "channel.mu",
                _ => "s, or t with channel.v",
            };
            return Err(cfg_err(format!("channel needs {hint}")));
        }
        Ok(())
    }

    /// Parameter names in output order: swept axes, then the rest in canonical order.
    pub fn param_columns(&self) -> Vec<Param> {
        let mut out: Vec<Param> = self.axes.iter().map(|a| a.param).collect();
        for p in Param::ALL {
            if !out.contains(&p) && self.fixed.contains_key(&p) {
                out.push(p);
            }
        }
        out
    }

    pub fn point_count(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }
}

fn insert_fixed(
    fixed: &mut BTreeMap<Param, f64>,
    source: &mut BTreeMap<Param, String>,
    param: Param,
    value: f64,
    key: &str,
) -> Result<()> {
    if let Some(prev) = source.get(&param) {
        return Err(cfg_err(format!("`{param}` is set by both {prev} and {key}")));
    }
    fixed.insert(param, value);
    source.insert(param, key.to_string());
    Ok(())
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|s| !s.is_empty())
}
