use serde::Serialize;

use super::config::SigmaChoice;
use super::field;
use super::verify::make_boundary;
use crate::curves::{contact_certificate, interpolate, projectively_equal};
use crate::error::{Error, Result};
use crate::field::{Fe, GaloisField};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointCheck {
    pub line: usize,
    pub point: [u64; 3],
    pub t: u64,
    pub on_curve: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InterpolationReport {
    pub field: String,
    pub boundary: String,
    pub d: usize,
    pub m: usize,
    pub a: Vec<u64>,
    pub vroot: Vec<u64>,
    pub wroot: Vec<u64>,
    pub contact: String,
    pub points: Vec<PointCheck>,
}

impl InterpolationReport {
    pub fn all_pass(&self) -> bool {
        self.points.iter().all(|c| c.on_curve)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Parses `x0,x1,x2` rows of element encodings; blank lines and lines
/// starting with `#` are skipped. Returns each point with its line number.
pub fn parse_points(text: &str, f: &GaloisField) -> Result<Vec<(usize, [Fe; 3])>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let record = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(trimmed.as_bytes())
            .records()
            .next()
            .transpose()
            .map_err(|e| Error::InvalidInput(format!("line {}: {}", line, e)))?
            .unwrap_or_default();
        if record.len() != 3 {
            return Err(Error::InvalidInput(format!(
                "line {}: expected 3 fields, found {}",
                line,
                record.len()
            )));
        }
        let mut pt = [Fe::ZERO; 3];
        for (slot, field) in pt.iter_mut().zip(record.iter()) {
            let n: u64 = field.parse().map_err(|_| {
                Error::InvalidInput(format!("line {}: `{}` is not an element encoding", line, field))
            })?;
            *slot = f
                .element(n)
                .map_err(|e| Error::InvalidInput(format!("line {}: {}", line, e)))?;
        }
        out.push((line, pt));
    }
    if out.is_empty() {
        return Err(Error::InvalidInput("points file has no points".into()));
    }
    Ok(out)
}

/// Interpolates an `m = 0` curve through the points of `text`.
/// A boundary point is reported with its file line number.
pub fn run_interpolate(text: &str, p: u64, k: usize, sigma: SigmaChoice, seed: u64) -> Result<InterpolationReport> {
    let f = field(p, k)?;
    let parsed = parse_points(text, &f)?;
    let lines: Vec<usize> = parsed.iter().map(|(l, _)| *l).collect();
    let points: Vec<[Fe; 3]> = parsed.iter().map(|(_, pt)| *pt).collect();
    let mut rng = super::trial_rng(seed, "interpolate", p, k, 0, 0, 0);
    let boundary = make_boundary(&f, sigma, &mut rng)?;
    let interp = interpolate(&boundary, &points, seed).map_err(|e| match e {
        Error::PointOnBoundary { line: Some(i) } => Error::PointOnBoundary { line: Some(lines[i - 1]) },
        other => other,
    })?;
    let built = interp.params.build()?;
    let contact = contact_certificate(&boundary, &built.x)?;
    let mut checks = Vec::new();
    for (line, pt) in lines.iter().zip(&points) {
        let hit = interp
            .points
            .iter()
            .position(|u| projectively_equal(&f, u, pt))
            .expect("every point has a representative");
        let t0 = interp.nodes[hit];
        checks.push(PointCheck {
            line: *line,
            point: pt.map(Fe::encoding),
            t: t0.encoding(),
            on_curve: projectively_equal(&f, pt, &built.x.eval(t0)),
        });
    }
    let enc = |v: &[Fe]| v.iter().map(|c| c.encoding()).collect::<Vec<_>>();
    Ok(InterpolationReport {
        field: f.header(),
        boundary: boundary.encode(),
        d: interp.params.d(),
        m: interp.params.m(),
        a: enc(interp.params.a()),
        vroot: enc(interp.params.vroot()),
        wroot: enc(interp.params.wroot()),
        contact: contact.detail,
        points: checks,
    })
}
