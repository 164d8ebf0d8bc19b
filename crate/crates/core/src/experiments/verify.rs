use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;

use super::config::{RunConfig, SigmaChoice};
use super::report::{CheckClass, CheckResult, Report, TrialKey};
use super::{field, trial_rng, with_pool};
use crate::certificate::Certificate;
use crate::curves::{contact_certificate, projectively_equal, CurveParams};
use crate::dp::{
    delta_identity, expected_cusp_count, implicitization_oracle, sample_general_fiber,
    FamilySpec, FiberParams,
};
use crate::error::{Error, Result};
use crate::field::{Fe, GaloisField};
use crate::poly::UniPoly;
use crate::strange::{BoundarySpec, SigmaMode, StrangePoint};

/// Implicitization is only attempted up to this degree.
const IMPLICITIZE_MAX_D: usize = 6;

pub(crate) fn make_boundary<R: Rng + ?Sized>(
    f: &GaloisField,
    sigma: SigmaChoice,
    rng: &mut R,
) -> Result<Arc<BoundarySpec>> {
    Ok(Arc::new(match sigma {
        SigmaChoice::Special => BoundarySpec::new(f, SigmaMode::Special)?,
        SigmaChoice::Random => BoundarySpec::random(f, rng)?,
    }))
}

pub fn run_verify(config: &RunConfig) -> Result<Report> {
    config.validate()?;
    let mut fields = Vec::new();
    for &p in &config.p_list {
        fields.push((p, field(p, config.k)?));
    }
    let tasks: Vec<(u64, usize, usize, usize)> = config
        .grid()
        .into_iter()
        .flat_map(|(p, d, m)| (0..config.trials).map(move |t| (p, d, m, t)))
        .collect();
    let results: Vec<CheckResult> = with_pool(config.threads, || {
        tasks
            .par_iter()
            .flat_map_iter(|&(p, d, m, trial)| {
                let f = &fields.iter().find(|(q, _)| *q == p).expect("field built").1;
                let key = TrialKey { p, k: config.k, d, m, trial };
                run_trial(f, key, config.seed, config.sigma)
            })
            .collect()
    })?;
    let echo = serde_json::to_value(config).expect("config serializes");
    Ok(Report::new(echo, results, Vec::new(), Vec::new()))
}

fn run_trial(f: &GaloisField, key: TrialKey, seed: u64, sigma: SigmaChoice) -> Vec<CheckResult> {
    let mut rng = trial_rng(seed, "verify", key.p, key.k, key.d, key.m, key.trial);
    let mut out = Vec::new();
    let boundary = match make_boundary(f, sigma, &mut rng) {
        Ok(b) => b,
        Err(e) => {
            out.push(key.error("boundary", CheckClass::Identity, &e));
            return out;
        }
    };
    curve_suite(&boundary, key, &mut rng, &mut out);
    if key.m == key.d {
        out.push(key.result("cusp_suite", CheckClass::Identity, true, "line cover"));
    } else if key.d >= key.p as usize && key.m == key.d - key.p as usize {
        dp_suite(&boundary, key, &mut rng, &mut out);
    }
    out
}

fn curve_suite<R: Rng + ?Sized>(
    boundary: &Arc<BoundarySpec>,
    key: TrialKey,
    rng: &mut R,
    out: &mut Vec<CheckResult>,
) {
    let f = boundary.field().clone();
    let params = match CurveParams::random(boundary.clone(), key.d, key.m, false, rng) {
        Ok(c) => c,
        Err(e) => {
            out.push(key.error("binomial", CheckClass::Identity, &e));
            return;
        }
    };
    let built = match params.build() {
        Ok(b) => {
            out.push(key.identity("binomial", Ok(Certificate::new("binomial", "all relations hold"))));
            b
        }
        Err(e) => {
            out.push(key.error("binomial", CheckClass::Identity, &e));
            return;
        }
    };
    out.push(key.identity("contact", contact_certificate(boundary, &built.x)));
    if key.m == key.d {
        return;
    }
    out.push(key.identity("tangent", params.tangent_factorization_check()));
    out.push(key.identity("strangeness", params.strangeness_certificate(&built)));

    // Every root of M is sent to str.
    let str_pt = StrangePoint.coords();
    let off: Vec<Fe> = params
        .a()
        .iter()
        .map(|&a| f.neg(a))
        .filter(|&t0| !projectively_equal(&f, &built.x.eval(t0), &str_pt))
        .collect();
    out.push(key.identity(
        "multiplicity",
        if off.is_empty() {
            Ok(Certificate::new("multiplicity", format!("{} branches through str", key.m)))
        } else {
            Err(Error::certificate("multiplicity", format!("t = {:?} misses str", off)))
        },
    ));
    let mult = params.multiplicity_at_str();
    let g = built.x.x0().gcd(built.x.x1()).degree().unwrap_or(0);
    out.push(key.genericity(
        "str_ordinary",
        g == key.m && mult.ordinary,
        format!("deg gcd(x0, x1) = {}, ordinary = {}", g, mult.ordinary),
    ));

    let lambda = f.sample_nonzero(rng);
    let c = f.sample(rng);
    out.push(key.identity("reparameterize", reparameterize_check(&params, &built.x.0, lambda, c)));
}

fn reparameterize_check(params: &CurveParams, x: &[UniPoly; 3], lambda: Fe, c: Fe) -> Result<Certificate> {
    let moved = params.reparameterize(lambda, c)?.build()?;
    for i in 0..3 {
        let expect = x[i].compose_affine(lambda, c)?;
        if moved.x.0[i] != expect {
            return Err(Error::identity(
                "reparameterization",
                format!("x{} differs by {}", i, moved.x.0[i].sub(&expect)),
            ));
        }
    }
    Ok(Certificate::new("reparameterize", format!("lambda={} c={}", lambda, c)))
}

fn dp_suite<R: Rng + ?Sized>(
    boundary: &Arc<BoundarySpec>,
    key: TrialKey,
    rng: &mut R,
    out: &mut Vec<CheckResult>,
) {
    out.push(key.identity("delta", delta_identity(key.p, key.d)));
    let spec = match FamilySpec::sample(boundary.clone(), key.d, rng) {
        Ok(s) => Arc::new(s),
        Err(e) => {
            out.push(key.error("family_sample", CheckClass::Genericity, &e));
            return;
        }
    };
    out.push(key.identity("gradient", spec.gradient_check()));

    let random = FiberParams::random(spec.clone(), rng);
    let degenerate = FiberParams::degenerate(spec.clone(), rng);
    out.push(key.identity("psi_pullback", random.psi_pullback_zero()));
    out.push(key.identity("psi_pullback_degenerate", degenerate.psi_pullback_zero()));
    for (name, fiber) in [("classification", &random), ("classification_degenerate", &degenerate)] {
        out.push(key.identity(
            name,
            fiber.singularity_classification().map(|r| {
                Certificate::new(
                    name,
                    format!(
                        "sing Delta {}, pi = 0 {}, str singular {:?}",
                        r.class1_points, r.class2_points, r.str_singular
                    ),
                )
            }),
        ));
    }

    let general = match sample_general_fiber(&spec, rng) {
        Ok(g) => {
            out.push(key.genericity("general_fiber", true, format!("pi={}", g.fiber.pi())));
            g
        }
        Err(e) => {
            out.push(key.error("general_fiber", CheckClass::Genericity, &e));
            out.push(key.genericity("cusp_count", false, "no general fiber"));
            return;
        }
    };
    let (fiber, cusp) = (&general.fiber, &general.cusp);
    let expected = expected_cusp_count(key.p, key.d);
    out.push(key.genericity(
        "cusp_count",
        cusp.count == expected,
        format!("observed {} expected {}", cusp.count, expected),
    ));
    out.push(key.identity("cusp_image", fiber.cusp_image_certificates(cusp)));
    if boundary.is_special() {
        out.push(key.identity("special_cusp", fiber.special_cusp_checks()));
    }
    match fiber.total_space_smoothness_at_cusps(cusp) {
        Ok(s) => {
            out.push(key.identity(
                "smoothness",
                Ok(Certificate::new("smoothness", format!("gcd degree {}", s.gcd_degree))),
            ));
            if key.m > 1 {
                out.push(key.genericity(
                    "smooth_at_cusps",
                    s.smooth_at_cusps,
                    format!("gcd(C, D, E) degree {}", s.gcd_degree),
                ));
            }
        }
        Err(e) => out.push(key.error("smoothness", CheckClass::Identity, &e)),
    }
    match fiber.tangent_cone_at_str() {
        Ok(cone) => {
            out.push(key.identity(
                "tangent_cone",
                Ok(Certificate::new("tangent_cone", format!("multiplicity {}", cone.multiplicity))),
            ));
            out.push(key.genericity(
                "tangent_cone_ordinary",
                cone.ordinary,
                format!("cone {}", cone.cone),
            ));
        }
        Err(e) => out.push(key.error("tangent_cone", CheckClass::Identity, &e)),
    }
    if key.d <= IMPLICITIZE_MAX_D {
        out.push(key.identity(
            "implicitization",
            implicitization_oracle(fiber).and_then(|ok| {
                if ok {
                    Ok(Certificate::new("implicitization", "Psi divides the resultant"))
                } else {
                    Err(Error::certificate("implicitization", "Psi does not divide the resultant"))
                }
            }),
        ));
    }
}
