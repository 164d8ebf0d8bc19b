use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::config::SigmaChoice;
use super::report::{BoundaryRate, CensusRow, CheckClass, CheckResult, Report, TrialKey};
use super::verify::make_boundary;
use super::{degree_for_bits, field, trial_rng, trial_seed, with_pool};
use crate::certificate::Certificate;
use crate::dp::{expected_cusp_count, sample_general_fiber, FamilySpec};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusConfig {
    pub p_list: Vec<u64>,
    /// Each `p` uses the least `k` with `p^k >= 2^ext_bits`.
    pub ext_bits: u32,
    pub d_max: usize,
    pub trials: usize,
    pub seed: u64,
    pub sigma: SigmaChoice,
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl CensusConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidInput("trials must be at least 1".into()));
        }
        if self.p_list.is_empty() {
            return Err(Error::InvalidInput("no characteristic given".into()));
        }
        if self.ext_bits == 0 || self.ext_bits > 40 {
            return Err(Error::InvalidInput(format!("ext must lie in 1..=40, got {}", self.ext_bits)));
        }
        Ok(())
    }

    /// Degrees `d` with `d >= p`, `d >= 3` and `d <= d_max`.
    pub fn degrees(&self, p: u64) -> std::ops::RangeInclusive<usize> {
        (p as usize).max(3)..=self.d_max
    }
}

/// Distinct roots of `P` for `samples` boundaries drawn per `p`.
pub fn boundary_census(
    p_list: &[u64],
    ext_bits: u32,
    samples: usize,
    seed: u64,
    sigma: SigmaChoice,
) -> Result<Vec<BoundaryRate>> {
    let mut out = Vec::new();
    for &p in p_list {
        let k = degree_for_bits(p, ext_bits);
        let f = field(p, k)?;
        let mut counts = Vec::with_capacity(samples);
        for trial in 0..samples {
            let mut rng = trial_rng(seed, "boundary", p, k, 0, 0, trial);
            let b = make_boundary(&f, sigma, &mut rng)?;
            counts.push(b.boundary_cusp_census()?.count);
        }
        out.push(BoundaryRate::new(p, k, counts));
    }
    Ok(out)
}

pub fn run_census(config: &CensusConfig) -> Result<Report> {
    config.validate()?;
    let mut fields = Vec::new();
    let mut tasks = Vec::new();
    for &p in &config.p_list {
        let k = degree_for_bits(p, config.ext_bits);
        fields.push((p, field(p, k)?));
        for d in config.degrees(p) {
            for trial in 0..config.trials {
                tasks.push(TrialKey { p, k, d, m: d - p as usize, trial });
            }
        }
    }
    let rows: Vec<(CensusRow, Vec<CheckResult>)> = with_pool(config.threads, || {
        tasks
            .par_iter()
            .map(|key| {
                let f = &fields.iter().find(|(q, _)| *q == key.p).expect("field built").1;
                census_trial(f, *key, config)
            })
            .collect()
    })?;
    let mut census = Vec::with_capacity(rows.len());
    let mut results = Vec::new();
    for (row, checks) in rows {
        census.push(row);
        results.extend(checks);
    }
    let boundary = boundary_census(&config.p_list, config.ext_bits, config.trials, config.seed, config.sigma)?;
    let echo = serde_json::to_value(config).expect("config serializes");
    Ok(Report::new(echo, results, census, boundary))
}

fn census_trial(
    f: &crate::field::GaloisField,
    key: TrialKey,
    config: &CensusConfig,
) -> (CensusRow, Vec<CheckResult>) {
    let seed = trial_seed(config.seed, "census", key.p, key.k, key.d, key.m, key.trial);
    let mut rng = trial_rng(config.seed, "census", key.p, key.k, key.d, key.m, key.trial);
    let expected = expected_cusp_count(key.p, key.d);
    let mut row = CensusRow {
        p: key.p,
        k: key.k,
        d: key.d,
        m: key.m,
        seed,
        pi_nonzero: None,
        cusp_count: None,
        expected,
        tangent_cone_ordinary: None,
        total_space_smooth_at_cusps: None,
    };
    let mut checks = Vec::new();
    let sampled = make_boundary(f, config.sigma, &mut rng).and_then(|b| {
        let spec = Arc::new(FamilySpec::sample(b, key.d, &mut rng)?);
        sample_general_fiber(&spec, &mut rng)
    });
    let general = match sampled {
        Ok(g) => g,
        Err(e) => {
            checks.push(key.error("general_fiber", CheckClass::Genericity, &e));
            return (row, checks);
        }
    };
    let (fiber, cusp) = (&general.fiber, &general.cusp);
    row.pi_nonzero = Some(!fiber.pi().is_zero());
    row.cusp_count = Some(cusp.count);
    checks.push(key.identity("cusp_image", fiber.cusp_image_certificates(cusp)));
    match fiber.total_space_smoothness_at_cusps(cusp) {
        Ok(s) => {
            row.total_space_smooth_at_cusps = Some(s.smooth_at_cusps);
            checks.push(key.identity(
                "smoothness",
                Ok(Certificate::new("smoothness", format!("gcd degree {}", s.gcd_degree))),
            ));
        }
        Err(e) => checks.push(key.error("smoothness", CheckClass::Identity, &e)),
    }
    match fiber.tangent_cone_at_str() {
        Ok(cone) => {
            row.tangent_cone_ordinary = Some(cone.ordinary);
            checks.push(key.identity(
                "tangent_cone",
                Ok(Certificate::new("tangent_cone", format!("multiplicity {}", cone.multiplicity))),
            ));
        }
        Err(e) => checks.push(key.error("tangent_cone", CheckClass::Identity, &e)),
    }
    (row, checks)
}
