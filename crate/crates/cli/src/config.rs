use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, ValueEnum};
use genus_core::classgroup::SearchBound;
use genus_core::QuadraticOrder;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

/// Input problems: bad flags, config files or discriminants. Exit status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Table => "table",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    /// Three-engine L-series comparison plus genus numbers.
    Lseries,
    /// Weber formula and wide genus numbers against class groups only.
    GenusNumbers,
}

impl Check {
    fn name(self) -> &'static str {
        match self {
            Check::Lseries => "lseries",
            Check::GenusNumbers => "genus-numbers",
        }
    }
}

/// Flags shared by every subcommand. Unset flags fall back to the config
/// file, then to defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Discriminant D of the order.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub disc: Option<i64>,
    /// Fundamental discriminant D_K.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub dk: Option<i64>,
    /// Conductor f (default 1).
    #[arg(long, global = true)]
    pub f: Option<i64>,
    /// Truncation length N of the Dirichlet series.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Evaluation point s > 1; repeatable.
    #[arg(long, global = true)]
    pub s: Vec<f64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Initial box radius when searching a class for a represented prime.
    #[arg(long, global = true)]
    pub search_bound: Option<i64>,
    /// key=value configuration file.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub dmin: Option<i64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub dmax: Option<i64>,
    #[arg(long, global = true, value_enum)]
    pub check: Option<Check>,
    /// Corrupt the brute-force coefficient a_K (harness self-test).
    #[arg(long, global = true, hide = true)]
    pub inject_mismatch: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: &'static str,
    pub disc: Option<i64>,
    pub dk: Option<i64>,
    pub f: Option<i64>,
    pub n: usize,
    pub s: Vec<f64>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub jobs: usize,
    pub search_bound: i64,
    pub dmin: Option<i64>,
    pub dmax: Option<i64>,
    pub check: Check,
    pub inject_mismatch: Option<usize>,
}

impl RunConfig {
    pub const DEFAULT_N: usize = 1000;
    pub const DEFAULT_S: f64 = 2.0;

    pub fn resolve(command: &'static str, flags: &Flags) -> Result<Self> {
        let file = match &flags.config {
            Some(path) => read_config_file(path)?,
            None => BTreeMap::new(),
        };
        let mut keys: Vec<&String> = file.keys().collect();
        keys.retain(|k| !KNOWN_KEYS.contains(&k.as_str()));
        if let Some(k) = keys.first() {
            return Err(usage(format!("unknown config key '{k}'")));
        }
        let get = |key: &str| file.get(key).map(String::as_str);

        let s = if !flags.s.is_empty() {
            flags.s.clone()
        } else if let Some(v) = get("s") {
            v.split(',')
                .map(|x| parse_value::<f64>("s", x.trim()))
                .collect::<Result<_>>()?
        } else {
            vec![Self::DEFAULT_S]
        };
        let config = Self {
            command,
            disc: pick(flags.disc, get("disc"), "disc")?,
            dk: pick(flags.dk, get("dk"), "dk")?,
            f: pick(flags.f, get("f"), "f")?,
            n: pick(flags.n, get("n"), "n")?.unwrap_or(Self::DEFAULT_N),
            s,
            format: match flags.format {
                Some(f) => f,
                None => match get("format") {
                    Some(v) => Format::from_str(v, true).map_err(|_| usage(format!("bad format '{v}'")))?,
                    None => Format::Table,
                },
            },
            out: flags.out.clone().or_else(|| get("out").map(PathBuf::from)),
            jobs: pick(flags.jobs, get("jobs"), "jobs")?.unwrap_or(1),
            search_bound: pick(flags.search_bound, get("search-bound"), "search-bound")?
                .unwrap_or(SearchBound::default().initial),
            dmin: pick(flags.dmin, get("dmin"), "dmin")?,
            dmax: pick(flags.dmax, get("dmax"), "dmax")?,
            check: match flags.check {
                Some(c) => c,
                None => match get("check") {
                    Some(v) => Check::from_str(v, true).map_err(|_| usage(format!("bad check '{v}'")))?,
                    None => Check::Lseries,
                },
            },
            inject_mismatch: flags.inject_mismatch,
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            bail!(usage("--n must be at least 1"));
        }
        if let Some(&s) = self.s.iter().find(|s| s.is_nan() || **s <= 1.0) {
            bail!(usage(format!("evaluation point s = {s} must exceed 1")));
        }
        if self.jobs == 0 {
            bail!(usage("--jobs must be at least 1"));
        }
        if self.search_bound < 1 {
            bail!(usage("--search-bound must be at least 1"));
        }
        Ok(())
    }

    pub fn search(&self) -> SearchBound {
        SearchBound {
            initial: self.search_bound,
            ..SearchBound::default()
        }
    }

    /// The order named by `--disc` or `--dk`/`--f`.
    pub fn order(&self) -> Result<QuadraticOrder> {
        let from_disc = self
            .disc
            .map(|d| QuadraticOrder::from_discriminant(d).map_err(|e| usage(e.to_string())))
            .transpose()?;
        let from_field = self
            .dk
            .map(|d_k| QuadraticOrder::new(d_k, self.f.unwrap_or(1)).map_err(|e| usage(e.to_string())))
            .transpose()?;
        match (from_disc, from_field) {
            (Some(a), Some(b)) if a != b => Err(usage(format!(
                "--disc {} disagrees with --dk {} --f {}",
                a.discriminant(),
                b.fundamental_discriminant(),
                b.conductor()
            ))),
            (Some(a), _) => {
                if self.f.is_some_and(|f| f != a.conductor()) {
                    return Err(usage("--f disagrees with the conductor of --disc"));
                }
                Ok(a)
            }
            (None, Some(b)) => Ok(b),
            (None, None) => Err(usage("pass --disc D or --dk D_K [--f f]")),
        }
    }

    /// `[dmin, dmax]`; a missing end mirrors the other.
    pub fn range(&self) -> Result<(i64, i64)> {
        match (self.dmin, self.dmax) {
            (Some(lo), Some(hi)) => Ok((lo, hi)),
            (Some(lo), None) => Ok((lo, lo.abs())),
            (None, Some(hi)) => Ok((-hi.abs(), hi)),
            (None, None) => Err(usage("pass --dmin and/or --dmax")),
        }
    }

    pub fn to_json(&self) -> Value {
        let int = |v: Option<i64>| v.map_or(Value::Null, |x| Value::String(x.to_string()));
        json!({
            "command": self.command,
            "disc": int(self.disc),
            "dk": int(self.dk),
            "f": int(self.f),
            "n": self.n.to_string(),
            "s": self.s.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            "format": self.format.name(),
            "jobs": self.jobs.to_string(),
            "search_bound": self.search_bound.to_string(),
            "dmin": int(self.dmin),
            "dmax": int(self.dmax),
            "check": self.check.name(),
            "inject_mismatch": self.inject_mismatch.map_or(Value::Null, |k| Value::String(k.to_string())),
        })
    }
}

const KNOWN_KEYS: [&str; 12] = [
    "disc", "dk", "f", "n", "s", "format", "out", "jobs", "search-bound", "dmin", "dmax", "check",
];

fn parse_value<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| usage(format!("bad value '{v}' for config key '{key}'")))
}

fn pick<T: std::str::FromStr>(flag: Option<T>, file: Option<&str>, key: &str) -> Result<Option<T>> {
    match (flag, file) {
        (Some(v), _) => Ok(Some(v)),
        (None, Some(v)) => parse_value(key, v).map(Some),
        (None, None) => Ok(None),
    }
}

/// `key = value` per line; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("config line {}: expected key=value", i + 1)))?;
        out.insert(k.trim().replace('_', "-"), v.trim().to_string());
    }
    Ok(out)
}

fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config file {}", path.display()))
        .map_err(|e| usage(format!("{e:#}")))?;
    parse_config(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}
