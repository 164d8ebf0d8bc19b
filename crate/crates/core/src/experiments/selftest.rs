use std::sync::Arc;

use super::report::{CheckClass, Report, TrialKey};
use super::{field, trial_rng};
use crate::curves::{admissible_multiplicities, CurveParams};
use crate::dp::{delta_identity, FamilySpec, FiberParams};
use crate::error::Result;
use crate::field::Fe;
use crate::poly::UniPoly;
use crate::strange::{BoundarySpec, SigmaMode};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SelftestOptions {
    /// Restrict to one characteristic (2 or 3).
    pub p: Option<u64>,
    /// Explicit `σ_1, ..., σ_{p-1}` encodings in place of the standard boundary.
    pub sigma: Option<Vec<u64>>,
    pub seed: u64,
}

/// Smallest extension used for each characteristic.
fn extension(p: u64) -> usize {
    if p == 2 {
        5
    } else {
        3
    }
}

/// Identity suites at `p ∈ {2, 3}`, `d <= p + 3`, in small fields.
pub fn run_selftest(opts: &SelftestOptions) -> Result<Report> {
    let ps: Vec<u64> = match opts.p {
        Some(p) if p == 2 || p == 3 => vec![p],
        Some(p) => {
            return Err(crate::error::Error::InvalidInput(format!(
                "selftest runs at p = 2 or 3, got {}",
                p
            )))
        }
        None => vec![2, 3],
    };
    let mut results = Vec::new();
    for p in ps {
        let k = extension(p);
        let f = field(p, k)?;
        let key = |d: usize, m: usize, trial: usize| TrialKey { p, k, d, m, trial };
        let mode = match &opts.sigma {
            Some(enc) => SigmaMode::Explicit(
                enc.iter().map(|&e| f.element(e)).collect::<Result<Vec<Fe>>>()?,
            ),
            None => SigmaMode::Special,
        };
        let boundary = match BoundarySpec::new(&f, mode) {
            Ok(b) => Arc::new(b),
            Err(e) => {
                results.push(key(0, 0, 0).error("boundary", CheckClass::Identity, &e));
                continue;
            }
        };
        results.push(key(0, 0, 0).identity("frobenius_factorization", boundary.frobenius_factorization_check()));

        if boundary.is_special() {
            let mut rng = trial_rng(opts.seed, "sigma0", p, k, 1, 0, 0);
            let v = UniPoly::linear(&f, f.sample(&mut rng), f.sample_nonzero(&mut rng));
            let w = UniPoly::linear(&f, f.sample(&mut rng), f.sample_nonzero(&mut rng));
            results.push(key(0, 0, 0).identity("sigma0_derivative", boundary.sigma0_derivative_check(&v, &w)));
        }

        for d in 1..=p as usize + 3 {
            for m in admissible_multiplicities(p, d) {
                if m == d {
                    continue;
                }
                let mut rng = trial_rng(opts.seed, "tangent", p, k, d, m, 0);
                let outcome = CurveParams::random(boundary.clone(), d, m, false, &mut rng)
                    .and_then(|c| c.tangent_factorization_check());
                results.push(key(d, m, 0).identity("tangent_factorization", outcome));
            }
        }

        for d in p as usize..=p as usize + 3 {
            let m = d - p as usize;
            results.push(key(d, m, 0).identity("delta_identity", delta_identity(p, d)));
            let mut rng = trial_rng(opts.seed, "family", p, k, d, m, 0);
            let spec = match FamilySpec::sample(boundary.clone(), d, &mut rng) {
                Ok(s) => Arc::new(s),
                Err(e) => {
                    results.push(key(d, m, 0).error("family_sample", CheckClass::Identity, &e));
                    continue;
                }
            };
            results.push(key(d, m, 0).identity("gradient", spec.gradient_check()));
            let fibers = [
                FiberParams::random(spec.clone(), &mut rng),
                FiberParams::degenerate(spec.clone(), &mut rng),
            ];
            for (trial, fiber) in fibers.iter().enumerate() {
                results.push(key(d, m, trial).identity("psi_pullback", fiber.psi_pullback_zero()));
            }
        }
    }
    let config = serde_json::json!({
        "p": opts.p,
        "sigma": opts.sigma,
        "seed": opts.seed,
    });
    Ok(Report::new(config, results, Vec::new(), Vec::new()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_selftest_passes() {
        let r = run_selftest(&SelftestOptions::default()).unwrap();
        assert!(r.identity_ok(), "{:?}", r.results.iter().filter(|c| !c.pass).collect::<Vec<_>>());
        for name in [
            "frobenius_factorization",
            "gradient",
            "tangent_factorization",
            "psi_pullback",
            "sigma0_derivative",
            "delta_identity",
        ] {
            assert!(r.results.iter().any(|c| c.check_name == name), "{}", name);
        }
    }

    #[test]
    fn bad_normalization_is_reported() {
        let opts = SelftestOptions { p: Some(3), sigma: Some(vec![2, 1]), seed: 0 };
        let r = run_selftest(&opts).unwrap();
        assert!(!r.identity_ok());
        assert!(r.results[0].detail.starts_with("BadNormalization"));
    }

    #[test]
    fn subset_by_characteristic() {
        let r = run_selftest(&SelftestOptions { p: Some(2), ..Default::default() }).unwrap();
        assert!(r.results.iter().all(|c| c.p == 2));
        assert!(run_selftest(&SelftestOptions { p: Some(5), ..Default::default() }).is_err());
    }
}
