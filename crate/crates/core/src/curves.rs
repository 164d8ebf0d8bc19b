//! A1-curves `t -> (M V^p : M W^p : M σ^{1/p}(V, W) - 1)` and their certificates.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::certificate::Certificate;
use crate::error::{Error, Result};
use crate::field::{Fe, GaloisField};
use crate::poly::{sylvester_resultant, MultiPoly, RingUniPoly, UniPoly};
use crate::strange::BoundarySpec;

/// Base fields up to this order are scanned completely by the strangeness check.
pub const FULL_SCAN_LIMIT: u64 = 1 << 12;
const STRANGENESS_SAMPLES: usize = 256;
const INTERPOLATION_RETRIES: usize = 32;

/// Parameters stored as p-th roots: `M = ∏ (t + a_i)`, `V = Σ vroot_j t^j`,
/// `W = Σ wroot_j t^j`.
#[derive(Clone, Debug)]
pub struct CurveParams {
    boundary: Arc<BoundarySpec>,
    d: usize,
    m: usize,
    a: Vec<Fe>,
    vroot: Vec<Fe>,
    wroot: Vec<Fe>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamTriple {
    pub m_poly: UniPoly,
    pub v: UniPoly,
    pub w: UniPoly,
}

/// `u_i = M V^{p-i} W^i` for `i = 0..=p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZCoords(pub Vec<UniPoly>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XCoords(pub [UniPoly; 3]);

impl XCoords {
    pub fn x0(&self) -> &UniPoly {
        &self.0[0]
    }

    pub fn x1(&self) -> &UniPoly {
        &self.0[1]
    }

    pub fn x2(&self) -> &UniPoly {
        &self.0[2]
    }

    /// Largest coordinate degree; 0 for a constant map.
    pub fn realized_degree(&self) -> usize {
        self.0.iter().filter_map(UniPoly::degree).max().unwrap_or(0)
    }

    pub fn eval(&self, t: Fe) -> [Fe; 3] {
        [self.0[0].eval(t), self.0[1].eval(t), self.0[2].eval(t)]
    }
}

#[derive(Clone, Debug)]
pub struct BuiltCurve {
    pub triple: ParamTriple,
    pub z: ZCoords,
    pub x: XCoords,
    /// Realized degree below `d`.
    pub degenerate: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrMultiplicity {
    pub m_realized: usize,
    pub directions: Vec<(Fe, Fe)>,
    pub ordinary: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InseparableCheck {
    pub inseparable: bool,
    pub constant: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PointLift {
    pub v: Fe,
    pub w: Fe,
    pub lambda: Fe,
}

#[derive(Clone, Debug)]
pub struct Interpolation {
    pub params: CurveParams,
    pub nodes: Vec<Fe>,
    /// Representatives of the input points after projective de-duplication.
    pub points: Vec<[Fe; 3]>,
}

impl CurveParams {
    pub fn new(
        boundary: Arc<BoundarySpec>,
        d: usize,
        m: usize,
        a: Vec<Fe>,
        vroot: Vec<Fe>,
        wroot: Vec<Fe>,
    ) -> Result<Self> {
        let p = boundary.p();
        if d == 0 {
            return Err(Error::InvalidInput("contact degree must be at least 1".into()));
        }
        if m > d || (d - m) as u64 % p != 0 {
            return Err(Error::BadCongruence { d, m, p });
        }
        let n = (d - m) / p as usize + 1;
        if a.len() != m || vroot.len() != n || wroot.len() != n {
            return Err(Error::InvalidInput(format!(
                "expected {} roots and {} coefficients for V and W",
                m, n
            )));
        }
        let f = boundary.field();
        if a.iter()
            .chain(&vroot)
            .chain(&wroot)
            .any(|c| f.element(c.encoding()).is_err())
        {
            return Err(Error::InvalidInput("parameter outside field".into()));
        }
        Ok(CurveParams {
            boundary,
            d,
            m,
            a,
            vroot,
            wroot,
        })
    }

    /// Uniformly random parameters with `a_m = 0` when `normalize` is set.
    pub fn random<R: Rng + ?Sized>(
        boundary: Arc<BoundarySpec>,
        d: usize,
        m: usize,
        normalize: bool,
        rng: &mut R,
    ) -> Result<Self> {
        let p = boundary.p() as usize;
        if m > d || (d - m) % p != 0 {
            return Err(Error::BadCongruence { d, m, p: p as u64 });
        }
        let f = boundary.field().clone();
        let n = (d - m) / p + 1;
        let mut a: Vec<Fe> = (0..m).map(|_| f.sample(rng)).collect();
        if normalize && m > 0 {
            a[m - 1] = Fe::ZERO;
        }
        let vroot = (0..n).map(|_| f.sample(rng)).collect();
        let wroot = (0..n).map(|_| f.sample(rng)).collect();
        Self::new(boundary, d, m, a, vroot, wroot)
    }

    pub fn boundary(&self) -> &Arc<BoundarySpec> {
        &self.boundary
    }

    pub fn field(&self) -> &GaloisField {
        self.boundary.field()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn a(&self) -> &[Fe] {
        &self.a
    }

    pub fn vroot(&self) -> &[Fe] {
        &self.vroot
    }

    pub fn wroot(&self) -> &[Fe] {
        &self.wroot
    }

    pub fn is_degenerate(&self) -> bool {
        self.vroot.last().is_some_and(|c| c.is_zero())
            && self.wroot.last().is_some_and(|c| c.is_zero())
    }

    pub fn triple(&self) -> ParamTriple {
        let f = self.field();
        let mut m_poly = UniPoly::one(f);
        for &ai in &self.a {
            m_poly = m_poly.mul(&UniPoly::linear(f, ai, Fe::ONE));
        }
        ParamTriple {
            m_poly,
            v: UniPoly::new(f, self.vroot.clone()),
            w: UniPoly::new(f, self.wroot.clone()),
        }
    }

    pub fn build(&self) -> Result<BuiltCurve> {
        let f = self.field();
        let p = self.boundary.p();
        let triple = self.triple();
        let ParamTriple { m_poly, v, w } = &triple;
        let vp: Vec<UniPoly> = (0..=p).map(|e| v.pow(e)).collect();
        let wp: Vec<UniPoly> = (0..=p).map(|e| w.pow(e)).collect();
        let u: Vec<UniPoly> = (0..=p as usize)
            .map(|i| m_poly.mul(&vp[p as usize - i]).mul(&wp[i]))
            .collect();
        check_binomial_relations(&u)?;
        let x2 = m_poly
            .mul(&self.boundary.sigma_root_eval(v, w))
            .sub(&UniPoly::one(f));
        let x = XCoords([u[0].clone(), u[p as usize].clone(), x2]);
        let degenerate = x.realized_degree() < self.d;
        Ok(BuiltCurve {
            triple,
            z: ZCoords(u),
            x,
            degenerate,
        })
    }

    /// `x'_i(t) = x_i(λ t + c)`: roots become `(a_i + c) / λ`, `V, W` are
    /// composed and scaled by the p-th root of `λ^m`.
    pub fn reparameterize(&self, lambda: Fe, c: Fe) -> Result<Self> {
        let f = self.field();
        if lambda.is_zero() {
            return Err(Error::ZeroScale);
        }
        let a = self
            .a
            .iter()
            .map(|&ai| f.div(f.add(ai, c), lambda))
            .collect::<Result<Vec<_>>>()?;
        let beta = f.pth_root(f.pow(lambda, self.m as u64));
        let n = self.vroot.len();
        let transform = |coeffs: &[Fe]| -> Result<Vec<Fe>> {
            let moved = UniPoly::new(f, coeffs.to_vec())
                .compose_affine(lambda, c)?
                .scale(beta);
            Ok((0..n).map(|i| moved.coeff(i)).collect())
        };
        Self::new(
            self.boundary.clone(),
            self.d,
            self.m,
            a,
            transform(&self.vroot)?,
            transform(&self.wroot)?,
        )
    }

    /// Multiplicity of the image at `str` and the branch tangent directions
    /// `(V(-a_i)^p : W(-a_i)^p)`.
    pub fn multiplicity_at_str(&self) -> StrMultiplicity {
        let f = self.field();
        let ParamTriple { v, w, .. } = self.triple();
        let directions: Vec<(Fe, Fe)> = self
            .a
            .iter()
            .map(|&ai| {
                let t0 = f.neg(ai);
                (f.frobenius(v.eval(t0)), f.frobenius(w.eval(t0)))
            })
            .collect();
        let mut ordinary = directions.iter().all(|&(x, y)| !(x.is_zero() && y.is_zero()));
        for i in 0..self.a.len() {
            for j in i + 1..self.a.len() {
                let (p, q) = (directions[i], directions[j]);
                let cross = f.sub(f.mul(p.0, q.1), f.mul(p.1, q.0));
                if self.a[i] == self.a[j] || cross.is_zero() {
                    ordinary = false;
                }
            }
        }
        StrMultiplicity {
            m_realized: self.m,
            directions,
            ordinary,
        }
    }

    /// `M' + M^2 (σ^{1/p}(V, W))'`.
    pub fn cusp_factor(&self) -> UniPoly {
        let ParamTriple { m_poly, v, w } = self.triple();
        let s = self.boundary.sigma_root_eval(&v, &w);
        m_poly
            .derivative()
            .add(&m_poly.mul(&m_poly).mul(&s.derivative()))
    }

    /// The tangent-line determinant factors as `K (W^p X0 - V^p X1)`.
    pub fn tangent_factorization_check(&self) -> Result<Certificate> {
        let f = self.field().clone();
        let p = self.boundary.p();
        let built = self.build()?;
        let [x0, x1, x2] = &built.x.0;
        let cof = tangent_cofactors(&built.x);
        let det = ring_linear_form(&f, &cof)?;
        let k = self.cusp_factor();
        let ParamTriple { v, w, .. } = &built.triple;
        let factored = ring_linear_form(
            &f,
            &[
                k.mul(&w.pow(p)),
                k.mul(&v.pow(p)).neg(),
                UniPoly::zero(&f),
            ],
        )?;
        if det != factored {
            return Err(Error::identity(
                "tangent determinant factorization",
                format!("x = ({}, {}, {})", x0, x1, x2),
            ));
        }
        Ok(Certificate::new(
            "tangent_factorization",
            format!("deg K = {}", k.degree().map_or(-1, |d| d as i64)),
        ))
    }

    /// At smooth points off `str` the tangent line has no `x2` term.
    pub fn strangeness_certificate(&self, built: &BuiltCurve) -> Result<Certificate> {
        let f = self.field();
        let k = self.cusp_factor();
        let cof = tangent_cofactors(&built.x);
        let points: Vec<Fe> = if f.order() <= FULL_SCAN_LIMIT {
            f.elements().collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(f.order());
            (0..STRANGENESS_SAMPLES).map(|_| f.sample(&mut rng)).collect()
        };
        let (mut checked, mut skipped) = (0usize, 0usize);
        for t0 in points {
            let pt = built.x.eval(t0);
            if k.eval(t0).is_zero() || (pt[0].is_zero() && pt[1].is_zero()) {
                skipped += 1;
                continue;
            }
            let line = [cof[0].eval(t0), cof[1].eval(t0), cof[2].eval(t0)];
            let incidence = (0..3).fold(Fe::ZERO, |acc, i| f.add(acc, f.mul(line[i], pt[i])));
            if !line[2].is_zero()
                || (line[0].is_zero() && line[1].is_zero())
                || !incidence.is_zero()
            {
                return Err(Error::certificate(
                    "strangeness",
                    format!("t0 = {} gives tangent line {:?}", t0, line),
                ));
            }
            checked += 1;
        }
        Ok(Certificate::new(
            "strangeness",
            format!("checked {} smooth points, skipped {}", checked, skipped),
        ))
    }
}

fn check_binomial_relations(u: &[UniPoly]) -> Result<()> {
    let n = u.len();
    for s in 0..=2 * (n - 1) {
        let mut reference: Option<(usize, usize, UniPoly)> = None;
        for i in 0..n {
            let j = match s.checked_sub(i) {
                Some(j) if j < n && i <= j => j,
                _ => continue,
            };
            let prod = u[i].mul(&u[j]);
            match &reference {
                None => reference = Some((i, j, prod)),
                Some((i0, j0, r)) => {
                    if *r != prod {
                        return Err(Error::identity(
                            "binomial relation",
                            format!("u{} u{} != u{} u{}", i0, j0, i, j),
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Coefficients of `X0, X1, X2` in `det[(X); x(t); x'(t)]`.
fn tangent_cofactors(x: &XCoords) -> [UniPoly; 3] {
    let [x0, x1, x2] = &x.0;
    let (d0, d1, d2) = (x0.derivative(), x1.derivative(), x2.derivative());
    [
        x1.mul(&d2).sub(&x2.mul(&d1)),
        x0.mul(&d2).sub(&x2.mul(&d0)).neg(),
        x0.mul(&d1).sub(&x1.mul(&d0)),
    ]
}

/// `Σ_j cof_j(t) X_j` as a polynomial in t over `k[X0, X1, X2]`.
fn ring_linear_form(f: &GaloisField, cof: &[UniPoly; 3]) -> Result<RingUniPoly> {
    let len = cof.iter().map(|c| c.coeffs().len()).max().unwrap_or(0);
    let coeffs = (0..len)
        .map(|i| {
            MultiPoly::from_terms(
                f,
                3,
                (0..3).map(|j| {
                    let mut e = vec![0u32; 3];
                    e[j] = 1;
                    (e, cof[j].coeff(i))
                }),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    RingUniPoly::new(f, 3, coeffs)
}

/// `Δ(x(t))` is exactly 1: the curve meets the boundary only at infinity.
/// Contact order there is `p` times the realized degree.
pub fn contact_certificate(boundary: &BoundarySpec, x: &XCoords) -> Result<Certificate> {
    let pulled = boundary.delta().pullback(&x.0)?;
    if pulled != UniPoly::one(boundary.field()) {
        return Err(Error::identity("contact", pulled.sub(&UniPoly::one(boundary.field()))));
    }
    Ok(Certificate::new(
        "contact",
        format!("contact order {}", boundary.p() as usize * x.realized_degree()),
    ))
}

/// True iff every coordinate lies in `k[t^p]`.
pub fn inseparable_cover_check(x: &XCoords) -> InseparableCheck {
    InseparableCheck {
        inseparable: x.0.iter().all(UniPoly::is_frobenius_image),
        constant: x.0.iter().all(UniPoly::is_constant),
    }
}

/// `(v^p, w^p, σ^{1/p}(v, w) - 1)`.
pub fn pushforward(boundary: &BoundarySpec, v: Fe, w: Fe) -> [Fe; 3] {
    let f = boundary.field();
    [
        f.frobenius(v),
        f.frobenius(w),
        f.sub(boundary.sigma_root_at(v, w), Fe::ONE),
    ]
}

/// Lifts an interior point so that `pushforward(v, w) = λ α`.
pub fn lift_point(boundary: &BoundarySpec, alpha: &[Fe; 3]) -> Result<PointLift> {
    let f = boundary.field();
    let delta = boundary.delta_at(alpha);
    if delta.is_zero() {
        return Err(Error::PointOnBoundary { line: None });
    }
    let lambda = f.pth_root(f.inv(delta)?);
    Ok(PointLift {
        v: f.pth_root(f.mul(lambda, alpha[0])),
        w: f.pth_root(f.mul(lambda, alpha[1])),
        lambda,
    })
}

/// Projective equality of two nonzero triples.
pub fn projectively_equal(f: &GaloisField, a: &[Fe; 3], b: &[Fe; 3]) -> bool {
    (0..3).all(|i| {
        (i + 1..3).all(|j| f.mul(a[i], b[j]) == f.mul(a[j], b[i]))
    }) && a.iter().any(|c| !c.is_zero())
        && b.iter().any(|c| !c.is_zero())
}

/// An `m = 0` curve through the given interior points.
pub fn interpolate(
    boundary: &Arc<BoundarySpec>,
    points: &[[Fe; 3]],
    seed: u64,
) -> Result<Interpolation> {
    let f = boundary.field().clone();
    let p = boundary.p() as usize;
    if points.is_empty() {
        return Err(Error::InvalidInput("no points to interpolate".into()));
    }
    let mut unique: Vec<[Fe; 3]> = Vec::new();
    let mut lifts = Vec::new();
    for (idx, pt) in points.iter().enumerate() {
        if pt.iter().all(|c| c.is_zero()) {
            return Err(Error::InvalidInput(format!("point {} is (0, 0, 0)", idx + 1)));
        }
        if unique.iter().any(|u| projectively_equal(&f, u, pt)) {
            continue;
        }
        let lift = lift_point(boundary, pt).map_err(|e| match e {
            Error::PointOnBoundary { .. } => Error::PointOnBoundary { line: Some(idx + 1) },
            other => other,
        })?;
        unique.push(*pt);
        lifts.push(lift);
    }
    let n = unique.len() + usize::from(unique.len() == 1);
    if n as u64 > f.order() {
        return Err(Error::NotEnoughNodes(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..INTERPOLATION_RETRIES {
        let nodes = f.sample_distinct(&mut rng, n, false)?;
        let mut vs: Vec<Fe> = lifts.iter().map(|l| l.v).collect();
        let mut ws: Vec<Fe> = lifts.iter().map(|l| l.w).collect();
        if lifts.len() < n {
            vs.push(f.sample(&mut rng));
            ws.push(f.sample(&mut rng));
        }
        let v = UniPoly::interpolate(&f, &nodes, &vs)?;
        let w = UniPoly::interpolate(&f, &nodes, &ws)?;
        let deg = v.degree().unwrap_or(0).max(w.degree().unwrap_or(0));
        if deg < 1 {
            continue;
        }
        let pad = |q: &UniPoly| (0..=deg).map(|i| q.coeff(i)).collect::<Vec<_>>();
        let params = CurveParams::new(boundary.clone(), p * deg, 0, Vec::new(), pad(&v), pad(&w))?;
        let built = params.build()?;
        for (pt, &t0) in unique.iter().zip(&nodes) {
            if !projectively_equal(&f, pt, &built.x.eval(t0)) {
                return Err(Error::identity(
                    "interpolated curve passes through point",
                    format!("{:?} at t = {}", pt, t0),
                ));
            }
        }
        return Ok(Interpolation {
            params,
            nodes,
            points: unique,
        });
    }
    Err(Error::NotEnoughNodes(n))
}

/// `Res_t(x_p X_j - x_j X_p, x_p X_k - x_k X_p)` with `p` the coordinate of
/// largest degree. The result vanishes on the image but may carry extra factors.
pub fn implicitize(x: &XCoords) -> Result<MultiPoly> {
    if x.0.iter().all(UniPoly::is_constant) {
        return Err(Error::ConstantMap);
    }
    let f = x.0[0].field().clone();
    let pivot = (0..3)
        .max_by_key(|&i| (x.0[i].degree().map_or(-1, |d| d as i64), std::cmp::Reverse(i)))
        .unwrap();
    let others: Vec<usize> = (0..3).filter(|&i| i != pivot).collect();
    let pencil = |j: usize| -> Result<RingUniPoly> {
        let mut cof = [UniPoly::zero(&f), UniPoly::zero(&f), UniPoly::zero(&f)];
        cof[j] = x.0[pivot].clone();
        cof[pivot] = x.0[j].neg();
        ring_linear_form(&f, &cof)
    };
    sylvester_resultant(&pencil(others[0])?, &pencil(others[1])?)
}

/// Multiplicities `m` with `0 <= m <= d` and `m ≡ d (mod p)`.
pub fn admissible_multiplicities(p: u64, d: usize) -> Vec<usize> {
    (0..=d).filter(|&m| (d - m) as u64 % p == 0).collect()
}

/// Number of free parameters `m + 2((d - m)/p + 1)`.
pub fn parameter_count(p: u64, d: usize, m: usize) -> usize {
    m + 2 * ((d - m) / p as usize + 1)
}

/// `p * dim = 2d + (p - 2) m`, kept integral.
pub fn dimension_times_p(p: u64, d: usize, m: usize) -> i64 {
    2 * d as i64 + (p as i64 - 2) * m as i64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strange::SigmaMode;

    fn boundary(p: u64, k: usize, mode: SigmaMode) -> Arc<BoundarySpec> {
        let f = GaloisField::new(p, k, 3).unwrap();
        Arc::new(BoundarySpec::new(&f, mode).unwrap())
    }

    #[test]
    fn line_cover_has_constant_v_w() {
        let b = boundary(3, 2, SigmaMode::Special);
        let f = b.field().clone();
        let params = CurveParams::new(b.clone(), 2, 2, vec![Fe(1), Fe(5)], vec![Fe(2)], vec![Fe(7)]).unwrap();
        let built = params.build().unwrap();
        let m_poly = &built.triple.m_poly;
        let (v, w) = (Fe(2), Fe(7));
        for i in 0..=3u64 {
            let c = f.mul(f.pow(v, 3 - i), f.pow(w, i));
            assert_eq!(built.z.0[i as usize], m_poly.scale(c));
        }
        assert!(!built.degenerate);
        contact_certificate(&b, &built.x).unwrap();
        params.tangent_factorization_check().unwrap();
    }

    #[test]
    fn conic_case_unfolds() {
        let b = boundary(2, 4, SigmaMode::Special);
        let f = b.field().clone();
        let params = CurveParams::new(b.clone(), 2, 0, vec![], vec![Fe(3), Fe(9)], vec![Fe(6), Fe(1)]).unwrap();
        let built = params.build().unwrap();
        let v = UniPoly::new(&f, vec![Fe(3), Fe(9)]);
        let w = UniPoly::new(&f, vec![Fe(6), Fe(1)]);
        assert_eq!(*built.x.x2(), v.mul(&w).sub(&UniPoly::one(&f)));
        // V^2 W^2 + (VW - 1)^2 = 1 in characteristic 2
        let direct = v.pow(2).mul(&w.pow(2)).add(&v.mul(&w).sub(&UniPoly::one(&f)).pow(2));
        assert_eq!(direct, UniPoly::one(&f));
        contact_certificate(&b, &built.x).unwrap();
    }

    #[test]
    fn simplest_degree_p_curve() {
        let b = boundary(5, 1, SigmaMode::Random(8));
        let f = b.field().clone();
        let params = CurveParams::new(b.clone(), 5, 0, vec![], vec![Fe::ZERO, Fe::ONE], vec![Fe::ONE, Fe::ZERO]).unwrap();
        let built = params.build().unwrap();
        let t = UniPoly::t(&f);
        let one = UniPoly::one(&f);
        assert_eq!(*built.x.x0(), t.pow(5));
        assert_eq!(*built.x.x1(), one);
        assert_eq!(*built.x.x2(), b.sigma_root_eval(&t, &one).sub(&one));
    }

    #[test]
    fn bad_congruence() {
        let b = boundary(3, 1, SigmaMode::Special);
        let err = CurveParams::new(b, 4, 0, vec![], vec![Fe(1), Fe(1)], vec![Fe(1), Fe(1)]);
        assert_eq!(err.unwrap_err(), Error::BadCongruence { d: 4, m: 0, p: 3 });
    }

    #[test]
    fn degenerate_flag() {
        let b = boundary(3, 2, SigmaMode::Special);
        let params = CurveParams::new(b.clone(), 4, 1, vec![Fe(2)], vec![Fe(1), Fe::ZERO], vec![Fe(4), Fe::ZERO]).unwrap();
        assert!(params.is_degenerate());
        let built = params.build().unwrap();
        assert!(built.degenerate);
        contact_certificate(&b, &built.x).unwrap();
    }

    #[test]
    fn contact_and_tangent_on_random_params() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for (p, k) in [(2u64, 3usize), (3, 2), (5, 1)] {
            let b = boundary(p, k, SigmaMode::Random(p));
            for d in 1..=8 {
                for m in admissible_multiplicities(p, d) {
                    let params = CurveParams::random(b.clone(), d, m, false, &mut rng).unwrap();
                    let built = params.build().unwrap();
                    contact_certificate(&b, &built.x).unwrap();
                    params.tangent_factorization_check().unwrap();
                    params.strangeness_certificate(&built).unwrap();
                }
            }
        }
    }

    #[test]
    fn multiplicity_examples() {
        let b = boundary(3, 2, SigmaMode::Special);
        let f = b.field().clone();
        let zero = CurveParams::new(b.clone(), 3, 0, vec![], vec![Fe(1), Fe(2)], vec![Fe(3), Fe(1)]).unwrap();
        let mult = zero.multiplicity_at_str();
        assert_eq!(mult.m_realized, 0);
        assert!(mult.directions.is_empty());
        let two = CurveParams::new(b.clone(), 5, 2, vec![Fe(1), Fe(4)], vec![Fe(1), Fe(2)], vec![Fe(3), Fe(1)]).unwrap();
        let mult = two.multiplicity_at_str();
        let (v, w) = (UniPoly::new(&f, vec![Fe(1), Fe(2)]), UniPoly::new(&f, vec![Fe(3), Fe(1)]));
        let dir = |a: Fe| (f.frobenius(v.eval(f.neg(a))), f.frobenius(w.eval(f.neg(a))));
        assert_eq!(mult.directions, vec![dir(Fe(1)), dir(Fe(4))]);
        let cross = f.sub(f.mul(mult.directions[0].0, mult.directions[1].1), f.mul(mult.directions[0].1, mult.directions[1].0));
        assert_eq!(mult.ordinary, !cross.is_zero());
        let repeated = CurveParams::new(b, 5, 2, vec![Fe(4), Fe(4)], vec![Fe(1), Fe(2)], vec![Fe(3), Fe(1)]).unwrap();
        assert!(!repeated.multiplicity_at_str().ordinary);
    }

    #[test]
    fn reparameterization() {
        let b = boundary(3, 2, SigmaMode::Random(2));
        let f = b.field().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let params = CurveParams::random(b.clone(), 3, 0, false, &mut rng).unwrap();
        let same = params.reparameterize(Fe::ONE, Fe::ZERO).unwrap();
        assert_eq!(same.build().unwrap().x, params.build().unwrap().x);
        let (lambda, c) = (f.from_int(2), f.from_int(1));
        let moved = params.reparameterize(lambda, c).unwrap().build().unwrap().x;
        let orig = params.build().unwrap().x;
        for i in 0..3 {
            assert_eq!(moved.0[i], orig.0[i].compose_affine(lambda, c).unwrap());
        }
        assert_eq!(params.reparameterize(Fe::ZERO, c).unwrap_err(), Error::ZeroScale);

        let params = CurveParams::random(b.clone(), 7, 4, false, &mut rng).unwrap();
        let (l1, c1, l2, c2) = (Fe(5), Fe(3), Fe(7), Fe(8));
        let twice = params.reparameterize(l1, c1).unwrap().reparameterize(l2, c2).unwrap();
        // t -> l2 t + c2, then l1 (.) + c1
        let composed = params
            .reparameterize(f.mul(l1, l2), f.add(f.mul(l1, c2), c1))
            .unwrap();
        assert_eq!(twice.build().unwrap().x, composed.build().unwrap().x);
    }

    #[test]
    fn inseparable_detection() {
        let b = boundary(3, 1, SigmaMode::Special);
        let f = b.field().clone();
        let t3 = UniPoly::monomial(&f, Fe::ONE, 3);
        let frob = XCoords([t3.clone(), t3.add(&UniPoly::one(&f)), t3.pow(2)]);
        assert_eq!(inseparable_cover_check(&frob), InseparableCheck { inseparable: true, constant: false });
        let params = CurveParams::new(b.clone(), 3, 0, vec![], vec![Fe(1), Fe(1)], vec![Fe(2), Fe(1)]).unwrap();
        let x = params.build().unwrap().x;
        assert!(!x.x2().is_frobenius_image());
        assert!(!inseparable_cover_check(&x).inseparable);
        let constant = XCoords([UniPoly::zero(&f), UniPoly::zero(&f), UniPoly::one(&f)]);
        assert_eq!(inseparable_cover_check(&constant), InseparableCheck { inseparable: true, constant: true });
    }

    #[test]
    fn lifting_points() {
        let b = boundary(5, 3, SigmaMode::Random(1));
        let f = b.field().clone();
        let lift = lift_point(&b, &[Fe::ZERO, Fe::ZERO, Fe::ONE]).unwrap();
        assert_eq!((lift.v, lift.w), (Fe::ZERO, Fe::ZERO));
        assert_eq!(f.frobenius(lift.lambda), f.neg(Fe::ONE));
        let err = lift_point(&b, &[Fe::ONE, Fe::ZERO, Fe::ZERO]).unwrap_err();
        assert_eq!(err, Error::PointOnBoundary { line: None });
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut done = 0;
        while done < 20 {
            let alpha = [f.sample(&mut rng), f.sample(&mut rng), f.sample(&mut rng)];
            if b.delta_at(&alpha).is_zero() {
                continue;
            }
            let l = lift_point(&b, &alpha).unwrap();
            let pushed = pushforward(&b, l.v, l.w);
            for i in 0..3 {
                assert_eq!(pushed[i], f.mul(l.lambda, alpha[i]));
            }
            done += 1;
        }
    }

    #[test]
    fn interpolation_through_points() {
        let b = boundary(3, 2, SigmaMode::Special);
        let f = b.field().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut pts = Vec::new();
        while pts.len() < 2 {
            let alpha = [f.sample(&mut rng), f.sample(&mut rng), Fe::ONE];
            if !b.delta_at(&alpha).is_zero() && !pts.iter().any(|q| projectively_equal(&f, q, &alpha)) {
                pts.push(alpha);
            }
        }
        let out = interpolate(&b, &pts, 4).unwrap();
        assert_eq!(out.params.d(), 3);
        let x = out.params.build().unwrap().x;
        contact_certificate(&b, &x).unwrap();
        for pt in &pts {
            assert!(f.elements().any(|t0| projectively_equal(&f, pt, &x.eval(t0))));
        }
        let single = interpolate(&b, &pts[..1], 4).unwrap();
        assert!(single.params.d() >= 3);
        let scaled = [f.mul(Fe(2), pts[0][0]), f.mul(Fe(2), pts[0][1]), f.mul(Fe(2), pts[0][2])];
        let dup = interpolate(&b, &[pts[0], scaled, pts[1]], 4).unwrap();
        assert_eq!(dup.points.len(), 2);
        let err = interpolate(&b, &[pts[0], [Fe::ONE, Fe::ZERO, Fe::ZERO]], 4).unwrap_err();
        assert_eq!(err, Error::PointOnBoundary { line: Some(2) });
    }

    #[test]
    fn implicitization_examples() {
        let f = GaloisField::new(5, 1, 0).unwrap();
        let t = UniPoly::t(&f);
        let x = XCoords([t.clone(), t.pow(2), UniPoly::one(&f)]);
        let r = implicitize(&x).unwrap();
        assert!(r.pullback(&x.0).unwrap().is_zero());
        let v = |i| MultiPoly::var(&f, 3, i);
        let conic = v(0).pow(2).sub(&v(1).mul(&v(2)));
        assert!(conic.divides(&r).unwrap());
        let constant = XCoords([UniPoly::one(&f), UniPoly::one(&f), UniPoly::zero(&f)]);
        assert_eq!(implicitize(&constant).unwrap_err(), Error::ConstantMap);

        let b = boundary(3, 2, SigmaMode::Special);
        let params = CurveParams::new(b, 2, 2, vec![Fe(1), Fe(2)], vec![Fe(2)], vec![Fe(5)]).unwrap();
        let x = params.build().unwrap().x;
        let r = implicitize(&x).unwrap();
        assert!(r.pullback(&x.0).unwrap().is_zero());
        let g = params.field().clone();
        let line = MultiPoly::var(&g, 3, 0)
            .scale(g.frobenius(Fe(5)))
            .sub(&MultiPoly::var(&g, 3, 1).scale(g.frobenius(Fe(2))));
        // Both pencils share the roots of M, which contributes X0^m.
        let mut rest = r.clone();
        let mut power = 0;
        while let Some(q) = rest.exact_div(&line).unwrap() {
            rest = q;
            power += 1;
        }
        assert_eq!(power, 2);
        let x0sq = MultiPoly::var(&g, 3, 0).pow(2);
        let c = rest.exact_div(&x0sq).unwrap().expect("X0^2 cofactor");
        assert!(c.as_constant().is_some_and(|c| !c.is_zero()), "leftover {}", c);
    }

    #[test]
    fn combinatorics() {
        for p in [2u64, 3, 5, 7, 11] {
            for d in 0..=50usize {
                let ms = admissible_multiplicities(p, d);
                assert_eq!(ms.len(), d / p as usize + 1);
                for m in ms {
                    let count = parameter_count(p, d, m) as i64;
                    assert_eq!(p as i64 * (count - 2), dimension_times_p(p, d, m));
                }
            }
        }
    }
}
