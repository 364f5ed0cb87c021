use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::experiments::hosts::{HostFamily, Scaling};
use crate::packing::{SearchParams, DEFAULT_RESTARTS, EXACT_HAMILTON_CAP};
use crate::process::default_d;
use crate::spectral::RmParams;

const KEYS: &[&str] = &[
    "host", "n", "q", "blocks", "block_matrix", "exponent", "scaling", "c", "k", "trials", "seed", "budget",
    "restarts", "exact_cap", "attempts", "D", "beta", "theta", "samples", "max_tail_fraction", "i", "scale",
    "alpha", "gamma", "b", "pairs", "starts", "out", "json",
];

/// Flat `key = value` file; `#` starts a comment.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, (usize, String)>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Parse { line: lineno, msg: format!("expected key = value, got '{line}'") });
            };
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(Error::Parse { line: lineno, msg: format!("unknown key '{key}'") });
            }
            if value.is_empty() {
                return Err(Error::Parse { line: lineno, msg: format!("empty value for '{key}'") });
            }
            if let Some((first, _)) = entries.insert(key.to_string(), (lineno, value.to_string())) {
                return Err(Error::Parse { line: lineno, msg: format!("'{key}' already set on line {first}") });
            }
        }
        Ok(Self { entries })
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.entries.insert(key.to_string(), (0, value.into()));
    }

    fn line(&self, key: &str) -> usize {
        self.entries.get(key).map_or(0, |e| e.0)
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|e| e.1.as_str())
    }

    fn bad(&self, key: &str, msg: impl std::fmt::Display) -> Error {
        match self.line(key) {
            0 => Error::Config(format!("{key}: {msg}")),
            line => Error::Parse { line, msg: format!("{key}: {msg}") },
        }
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|e| self.bad(key, format!("'{v}': {e}"))),
        }
    }

    fn get_or<T: FromStr>(&self, key: &str, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        Ok(self.get(key)?.unwrap_or(default))
    }

    fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: std::fmt::Display,
    {
        let Some(v) = self.raw(key) else { return Ok(None) };
        v.split(',')
            .map(|s| s.trim().parse().map_err(|e| self.bad(key, format!("'{s}': {e}"))))
            .collect::<Result<Vec<T>>>()
            .map(Some)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub host: HostFamily,
    pub sizes: Vec<usize>,
    pub ks: Vec<usize>,
    pub scaling: Scaling,
    pub trials: u64,
    pub seed: u64,
    pub search: SearchParams,
    pub attempts: usize,
    /// Truncation depth of `H`; `None` means the default for `k`.
    pub d: Option<usize>,
    pub beta: f64,
    pub theta: f64,
    pub samples: usize,
    pub max_tail_fraction: f64,
    pub rm: Option<RmParams>,
    pub i: usize,
    pub scale: f64,
    pub pairs: usize,
    pub starts: usize,
    pub out: Option<PathBuf>,
    pub json: bool,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_raw(&RawConfig::parse(text)?)
    }

    pub fn from_raw(raw: &RawConfig) -> Result<Self> {
        let host = match raw.raw("host").unwrap_or("complete") {
            "complete" => HostFamily::Complete,
            "paley" => HostFamily::Paley {
                q: raw.get("q")?.ok_or_else(|| raw.bad("host", "paley host needs q"))?,
            },
            "block" => {
                let sizes = raw.list("blocks")?.ok_or_else(|| raw.bad("host", "block host needs blocks"))?;
                let text = raw.raw("block_matrix").ok_or_else(|| raw.bad("host", "block host needs block_matrix"))?;
                let matrix = text
                    .split(';')
                    .map(|row| {
                        row.split(',')
                            .map(|s| s.trim().parse::<f64>().map_err(|e| raw.bad("block_matrix", format!("'{s}': {e}"))))
                            .collect::<Result<Vec<f64>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                HostFamily::Block { sizes, matrix }
            }
            "power-law" => HostFamily::PowerLaw { exponent: raw.get_or("exponent", 2.5)? },
            other => return Err(raw.bad("host", format!("unknown host '{other}'"))),
        };
        host.validate().map_err(|e| raw.bad("host", e))?;

        let sizes = match (raw.list("n")?, host.fixed_n()) {
            (Some(ns), Some(m)) if ns.iter().any(|&n| n != m) => {
                return Err(raw.bad("n", format!("{} host fixes n = {m}", host.name())));
            }
            (Some(ns), _) => ns,
            (None, Some(m)) => vec![m],
            (None, None) => return Err(Error::Config("n is required for this host".into())),
        };
        if sizes.is_empty() || sizes.iter().any(|&n| n < 2) {
            return Err(raw.bad("n", "every size must be at least 2"));
        }
        let ks: Vec<usize> = raw.list("k")?.unwrap_or_else(|| vec![1]);
        if ks.is_empty() || ks.contains(&0) {
            return Err(raw.bad("k", "k must be positive"));
        }

        let scaling = match raw.raw("scaling").unwrap_or("rows") {
            "none" => Scaling::None,
            "rm1" => Scaling::Rm1,
            "rows" => Scaling::Rows { c: raw.get_or("c", 0.0)? },
            other => return Err(raw.bad("scaling", format!("unknown scaling '{other}'"))),
        };

        let trials: u64 = raw.get_or("trials", 100)?;
        if trials == 0 {
            return Err(raw.bad("trials", "trials must be at least 1"));
        }

        let rm = match (raw.get::<f64>("alpha")?, raw.get::<f64>("gamma")?, raw.get::<f64>("b")?) {
            (Some(a), Some(g), Some(b)) => Some(RmParams::new(a, g, b).map_err(|e| raw.bad("alpha", e))?),
            (None, None, None) => None,
            _ => return Err(Error::Config("alpha, gamma and b must be given together".into())),
        };

        let unit = |key: &str, x: f64| {
            if x > 0.0 && x <= 1.0 {
                Ok(x)
            } else {
                Err(raw.bad(key, format!("{x} must lie in (0, 1]")))
            }
        };
        let i = raw.get_or("i", 1usize)?;
        if !(1..=2).contains(&i) {
            return Err(raw.bad("i", "i must be 1 or 2"));
        }
        let scale: f64 = raw.get_or("scale", 1.0 / 3.0)?;
        if !(scale >= 0.0 && scale.is_finite()) {
            return Err(raw.bad("scale", "scale must be nonnegative"));
        }
        let theta: f64 = raw.get_or("theta", 20.0)?;
        if !(theta > 0.0) {
            return Err(raw.bad("theta", "theta must be positive"));
        }

        Ok(Self {
            host,
            sizes,
            ks,
            scaling,
            trials,
            seed: raw.get_or("seed", 0)?,
            search: SearchParams {
                budget: raw.get("budget")?,
                restarts: raw.get_or("restarts", DEFAULT_RESTARTS)?,
                exact_cap: raw.get_or("exact_cap", EXACT_HAMILTON_CAP)?,
            },
            attempts: raw.get_or("attempts", 8)?,
            d: raw.get("D")?,
            beta: unit("beta", raw.get_or("beta", 0.1)?)?,
            theta,
            samples: raw.get_or("samples", 2000)?,
            max_tail_fraction: unit("max_tail_fraction", raw.get_or("max_tail_fraction", 0.1)?)?,
            rm,
            i,
            scale,
            pairs: raw.get_or("pairs", 200)?,
            starts: raw.get_or("starts", 100)?,
            out: raw.raw("out").map(PathBuf::from),
            json: raw.get_or("json", false)?,
        })
    }

    pub fn d_for(&self, k: usize) -> usize {
        self.d.unwrap_or_else(|| default_d(k))
    }

    /// Every knob that affects results, sorted by key. Output paths are left
    /// out so reruns into different files stay identical.
    pub fn header(&self) -> Vec<(String, String)> {
        let join = |xs: &[usize]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let mut h = BTreeMap::new();
        h.insert("host", self.host.name().to_string());
        match &self.host {
            HostFamily::Paley { q } => {
                h.insert("q", q.to_string());
            }
            HostFamily::Block { sizes, matrix } => {
                h.insert("blocks", join(sizes));
                let rows: Vec<String> =
                    matrix.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")).collect();
                h.insert("block_matrix", rows.join(";"));
            }
            HostFamily::PowerLaw { exponent } => {
                h.insert("exponent", exponent.to_string());
            }
            HostFamily::Complete => {}
        }
        h.insert("n", join(&self.sizes));
        h.insert("k", join(&self.ks));
        h.insert("scaling", self.scaling.name().to_string());
        if let Scaling::Rows { c } = self.scaling {
            h.insert("c", c.to_string());
        }
        h.insert("trials", self.trials.to_string());
        h.insert("seed", self.seed.to_string());
        h.insert("budget", self.search.budget.map_or("n^2".to_string(), |b| b.to_string()));
        h.insert("restarts", self.search.restarts.to_string());
        h.insert("exact_cap", self.search.exact_cap.to_string());
        h.insert("attempts", self.attempts.to_string());
        h.insert("D", self.d.map_or("default".to_string(), |d| d.to_string()));
        h.insert("beta", self.beta.to_string());
        h.insert("theta", self.theta.to_string());
        h.insert("samples", self.samples.to_string());
        h.insert("max_tail_fraction", self.max_tail_fraction.to_string());
        if let Some(rm) = &self.rm {
            h.insert("alpha", rm.alpha.to_string());
            h.insert("gamma", rm.gamma.to_string());
            h.insert("b", rm.b.to_string());
        }
        h.insert("i", self.i.to_string());
        h.insert("scale", self.scale.to_string());
        h.insert("pairs", self.pairs.to_string());
        h.insert("starts", self.starts.to_string());
        h.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }
}
