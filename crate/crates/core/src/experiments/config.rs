use serde::Serialize;

use crate::curves::admissible_multiplicities;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SigmaChoice {
    Random,
    Special,
}

impl std::str::FromStr for SigmaChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "random" => Ok(SigmaChoice::Random),
            "special" | "sigma0" => Ok(SigmaChoice::Special),
            other => Err(Error::InvalidInput(format!(
                "sigma must be `random` or `special`, got `{}`",
                other
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::InvalidInput(format!(
                "format must be `json` or `csv`, got `{}`",
                other
            ))),
        }
    }
}

/// A fixed multiplicity, or every admissible one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MSelect {
    Fixed(usize),
    All,
}

impl Serialize for MSelect {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            MSelect::Fixed(m) => s.serialize_u64(*m as u64),
            MSelect::All => s.serialize_str("all"),
        }
    }
}

impl std::str::FromStr for MSelect {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("all") {
            return Ok(MSelect::All);
        }
        s.parse()
            .map(MSelect::Fixed)
            .map_err(|_| Error::InvalidInput(format!("m must be an integer or `all`, got `{}`", s)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub p_list: Vec<u64>,
    pub k: usize,
    pub d_range: (usize, usize),
    pub m: MSelect,
    pub trials: usize,
    pub seed: u64,
    pub sigma: SigmaChoice,
    pub format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_path: Option<String>,
    /// Never serialized: reports must not depend on the worker count.
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidInput("trials must be at least 1".into()));
        }
        if self.p_list.is_empty() {
            return Err(Error::InvalidInput("no characteristic given".into()));
        }
        if self.k == 0 {
            return Err(Error::InvalidInput("extension degree must be at least 1".into()));
        }
        let (lo, hi) = self.d_range;
        if lo == 0 || lo > hi {
            return Err(Error::InvalidInput(format!("bad degree range {}..{}", lo, hi)));
        }
        if let MSelect::Fixed(m) = self.m {
            for &p in &self.p_list {
                for d in lo..=hi {
                    if m > d || (d - m) as u64 % p != 0 {
                        return Err(Error::BadCongruence { d, m, p });
                    }
                }
            }
        }
        Ok(())
    }

    /// `(p, d, m)` in grid order.
    pub fn grid(&self) -> Vec<(u64, usize, usize)> {
        let mut out = Vec::new();
        for &p in &self.p_list {
            for d in self.d_range.0..=self.d_range.1 {
                match self.m {
                    MSelect::Fixed(m) => out.push((p, d, m)),
                    MSelect::All => {
                        out.extend(admissible_multiplicities(p, d).into_iter().map(|m| (p, d, m)))
                    }
                }
            }
        }
        out
    }
}

/// Comma-separated list of integers.
pub fn parse_list(s: &str) -> Result<Vec<u64>> {
    let out: Vec<u64> = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| Error::InvalidInput(format!("`{}` is not a non-negative integer", t)))
        })
        .collect::<Result<_>>()?;
    if out.is_empty() {
        return Err(Error::InvalidInput("empty list".into()));
    }
    Ok(out)
}

/// `7`, `3..8` or `3-8` (inclusive).
pub fn parse_range(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::InvalidInput(format!("bad range `{}`", s));
    let s = s.trim();
    let (lo, hi) = match s.split_once("..").or_else(|| s.split_once('-')) {
        Some((a, b)) => (a.trim(), b.trim_start_matches('=').trim()),
        None => (s, s),
    };
    let lo: usize = lo.parse().map_err(|_| bad())?;
    let hi: usize = hi.parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}
