//! The `m = d - p` component: the surface `Ψ = L1^d - (-1)^d π^p Δ ℒ`, its
//! gradient, cusps of its fibers and the singularities of the total space.

use std::sync::{Arc, OnceLock};

use rand::Rng;

use crate::certificate::Certificate;
use crate::curves::{CurveParams, ParamTriple, XCoords};
use crate::error::{Error, Result};
use crate::field::{Fe, GaloisField};
use crate::poly::{binary_form_root_count, MultiPoly, UniPoly};
use crate::strange::BoundarySpec;

pub const SAMPLE_RETRIES: usize = 64;

/// Variables of the family ring.
pub const X0: usize = 0;
pub const X1: usize = 1;
pub const X2: usize = 2;
pub const B0: usize = 3;
pub const B1: usize = 4;
pub const C0: usize = 5;
pub const C1: usize = 6;

#[derive(Debug)]
pub struct FamilySpec {
    boundary: Arc<BoundarySpec>,
    d: usize,
    a_fixed: Vec<Fe>,
    /// `e[k] = e_k(-a_1^p, ..., -a_{m-1}^p)`, `e[0] = 1`.
    e: Vec<Fe>,
    family: OnceLock<(MultiPoly, Vec<MultiPoly>)>,
}

/// `ℒ`, `𝒟`, `ℰ` and `Ψ` over whatever ring `L0`, `L1` live in.
#[derive(Clone, Debug)]
pub struct PsiParts {
    pub script_l: MultiPoly,
    pub script_d: MultiPoly,
    pub script_e: MultiPoly,
    pub psi: MultiPoly,
}

#[derive(Clone, Debug)]
pub struct FiberParams {
    spec: Arc<FamilySpec>,
    broot: [Fe; 2],
    croot: [Fe; 2],
    b: [Fe; 2],
    c: [Fe; 2],
    pi: Fe,
}

#[derive(Clone, Debug)]
pub struct CuspData {
    pub k_poly: UniPoly,
    pub radical: UniPoly,
    pub count: usize,
    pub expected_degree: usize,
    pub degree_exact: bool,
    /// `gcd(C, M) != 1`: a cusp parameter sits on a branch through `str`.
    pub collides_with_str: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularityReport {
    pub class1_points: usize,
    pub class2_points: usize,
    pub str_on_curve: bool,
    /// `Some(true)` when the total space is singular at `str`.
    pub str_singular: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentCone {
    pub cone: MultiPoly,
    pub multiplicity: usize,
    pub ordinary: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smoothness {
    pub smooth_at_cusps: bool,
    pub gcd_degree: usize,
}

#[derive(Clone, Debug)]
pub struct GeneralFiber {
    pub fiber: FiberParams,
    pub cusp: CuspData,
}

/// `e_k` of the given values, `k = 0..=n`.
pub fn elementary_symmetric(f: &GaloisField, values: &[Fe]) -> Vec<Fe> {
    let mut e = vec![Fe::ONE];
    for &v in values {
        e.push(Fe::ZERO);
        for k in (1..e.len()).rev() {
            e[k] = f.add(e[k], f.mul(v, e[k - 1]));
        }
    }
    e
}

/// Builds `ℒ`, `𝒟`, `ℰ`, `Ψ` from `L0`, `L1`, `π^p`, `Δ` in a common ring.
pub fn assemble_psi(
    l0: &MultiPoly,
    l1: &MultiPoly,
    pi_p: &MultiPoly,
    delta: &MultiPoly,
    e: &[Fe],
    d: usize,
    m: usize,
) -> PsiParts {
    let f = l0.field().clone();
    let arity = l0.arity();
    let s = if d % 2 == 0 { pi_p.clone() } else { pi_p.neg() };
    let top = m.max(1);
    let l0p: Vec<MultiPoly> = (0..=top).map(|i| l0.pow(i as u64)).collect();
    let l1p: Vec<MultiPoly> = (0..=d).map(|i| l1.pow(i as u64)).collect();
    let int = |n: usize| f.from_int(n as i64);

    let mut script_l = l0p[m].clone();
    for k in 1..m {
        script_l = script_l.add(&l0p[m - k].mul(&l1p[k]).scale(e[k]));
    }

    let mut tail = MultiPoly::zero(&f, arity);
    for k in 1..m {
        tail = tail.add(&l0p[m - k].mul(&l1p[k - 1]).scale(f.mul(int(k), e[k])));
    }
    let script_d = l1p[d - 1].scale(int(d)).sub(&s.mul(delta).mul(&tail));

    let script_e = if m == 0 {
        MultiPoly::zero(&f, arity)
    } else {
        let mut acc = l0p[m - 1].scale(int(m));
        for k in 1..m {
            acc = acc.add(&l0p[m - k - 1].mul(&l1p[k]).scale(f.mul(int(m - k), e[k])));
        }
        acc
    };

    let psi = l1p[d].sub(&s.mul(delta).mul(&script_l));
    PsiParts {
        script_l,
        script_d,
        script_e,
        psi,
    }
}

impl FamilySpec {
    pub fn new(boundary: Arc<BoundarySpec>, d: usize, a_fixed: Vec<Fe>) -> Result<Self> {
        let p = boundary.p() as usize;
        if d < p {
            return Err(Error::InvalidInput(format!("need d >= p, got d = {}", d)));
        }
        let m = d - p;
        let f = boundary.field().clone();
        if a_fixed.len() != m.saturating_sub(1) {
            return Err(Error::InvalidInput(format!(
                "expected {} fixed roots, got {}",
                m.saturating_sub(1),
                a_fixed.len()
            )));
        }
        if a_fixed.iter().any(|a| a.is_zero()) {
            return Err(Error::InvalidInput("fixed roots must be nonzero".into()));
        }
        for i in 0..a_fixed.len() {
            if a_fixed[i + 1..].contains(&a_fixed[i]) {
                return Err(Error::InvalidInput("fixed roots must be distinct".into()));
            }
        }
        let neg_pows: Vec<Fe> = a_fixed.iter().map(|&a| f.neg(f.frobenius(a))).collect();
        let e = elementary_symmetric(&f, &neg_pows);
        if m > 1 && e[1].is_zero() {
            return Err(Error::InvalidInput("e_1 vanishes".into()));
        }
        Ok(FamilySpec {
            boundary,
            d,
            a_fixed,
            e,
            family: OnceLock::new(),
        })
    }

    /// Random fixed roots meeting the invariants.
    pub fn sample<R: Rng + ?Sized>(
        boundary: Arc<BoundarySpec>,
        d: usize,
        rng: &mut R,
    ) -> Result<Self> {
        let p = boundary.p() as usize;
        let n = d.saturating_sub(p).saturating_sub(1);
        let f = boundary.field().clone();
        if n as u64 >= f.order() {
            return Err(Error::GenericityExhausted {
                condition: "distinct nonzero fixed roots".into(),
                attempts: 0,
            });
        }
        for _ in 0..SAMPLE_RETRIES {
            let a: Vec<Fe> = (0..n).map(|_| f.sample_nonzero(rng)).collect();
            if let Ok(spec) = Self::new(boundary.clone(), d, a) {
                return Ok(spec);
            }
        }
        Err(Error::GenericityExhausted {
            condition: "distinct nonzero fixed roots with e_1 != 0".into(),
            attempts: SAMPLE_RETRIES,
        })
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
        self.d - self.boundary.p() as usize
    }

    pub fn a_fixed(&self) -> &[Fe] {
        &self.a_fixed
    }

    pub fn e(&self) -> &[Fe] {
        &self.e
    }

    /// `Ψ` in `(x0, x1, x2, b0, b1, c0, c1)`.
    pub fn family_parts(&self) -> PsiParts {
        let f = self.field();
        let v = |i| MultiPoly::var(f, 7, i);
        let l0 = v(C0).mul(&v(X0)).sub(&v(B0).mul(&v(X1)));
        let l1 = v(C1).mul(&v(X0)).sub(&v(B1).mul(&v(X1)));
        let pi = v(B1).mul(&v(C0)).sub(&v(B0).mul(&v(C1)));
        let delta = self
            .boundary
            .delta()
            .embed(7, &[X0, X1, X2])
            .expect("arity 3 into 7");
        assemble_psi(&l0, &l1, &pi.pow(self.boundary.p()), &delta, &self.e, self.d, self.m())
    }

    /// Family `Ψ` and its seven partials, computed once.
    pub fn family_psi(&self) -> &(MultiPoly, Vec<MultiPoly>) {
        self.family.get_or_init(|| {
            let psi = self.family_parts().psi;
            let grad = psi.gradient();
            (psi, grad)
        })
    }

    /// Direct partials of the family `Ψ` against
    /// `𝒟 ∇L1 - s ℒ ∇Δ - s Δ ℰ ∇L0`.
    pub fn gradient_check(&self) -> Result<Certificate> {
        let f = self.field().clone();
        let v = |i| MultiPoly::var(&f, 7, i);
        let zero = MultiPoly::zero(&f, 7);
        let parts = self.family_parts();
        let (_, direct) = self.family_psi();
        let pi = v(B1).mul(&v(C0)).sub(&v(B0).mul(&v(C1)));
        let pi_p = pi.pow(self.boundary.p());
        let s = if self.d % 2 == 0 { pi_p } else { pi_p.neg() };
        let delta = self.boundary.delta().embed(7, &[X0, X1, X2])?;
        let grad_l0 = [v(C0), v(B0).neg(), zero.clone(), v(X1).neg(), zero.clone(), v(X0), zero.clone()];
        let grad_l1 = [v(C1), v(B1).neg(), zero.clone(), zero.clone(), v(X1).neg(), zero.clone(), v(X0)];
        let grad_delta = [
            delta.partial(X0)?,
            delta.partial(X1)?,
            zero.clone(),
            zero.clone(),
            zero.clone(),
            zero.clone(),
            zero.clone(),
        ];
        let s_l = s.mul(&parts.script_l);
        let s_delta_e = s.mul(&delta).mul(&parts.script_e);
        const NAMES: [&str; 7] = ["x0", "x1", "x2", "b0", "b1", "c0", "c1"];
        for i in 0..7 {
            let closed = parts
                .script_d
                .mul(&grad_l1[i])
                .sub(&s_l.mul(&grad_delta[i]))
                .sub(&s_delta_e.mul(&grad_l0[i]));
            let residual = direct[i].sub(&closed);
            if !residual.is_zero() {
                return Err(Error::identity(&format!("gradient entry {}", NAMES[i]), residual));
            }
        }
        Ok(Certificate::new(
            "gradient",
            format!("p={} d={} m={}: 7 entries exact", self.boundary.p(), self.d, self.m()),
        ))
    }
}

impl FiberParams {
    pub fn new(spec: Arc<FamilySpec>, broot: [Fe; 2], croot: [Fe; 2]) -> Self {
        let f = spec.field().clone();
        let b = [f.frobenius(broot[0]), f.frobenius(broot[1])];
        let c = [f.frobenius(croot[0]), f.frobenius(croot[1])];
        let pi = f.sub(f.mul(b[1], c[0]), f.mul(b[0], c[1]));
        FiberParams {
            spec,
            broot,
            croot,
            b,
            c,
            pi,
        }
    }

    pub fn random<R: Rng + ?Sized>(spec: Arc<FamilySpec>, rng: &mut R) -> Self {
        let f = spec.field().clone();
        let mut draw = || [f.sample(rng), f.sample(rng)];
        let (broot, croot) = (draw(), draw());
        Self::new(spec, broot, croot)
    }

    /// A fiber with `π = 0`: `croot` proportional to `broot`.
    pub fn degenerate<R: Rng + ?Sized>(spec: Arc<FamilySpec>, rng: &mut R) -> Self {
        let f = spec.field().clone();
        let broot = [f.sample(rng), f.sample(rng)];
        let mu = f.sample(rng);
        Self::new(spec, broot, [f.mul(mu, broot[0]), f.mul(mu, broot[1])])
    }

    /// A random fiber whose line `L1 = 0` passes through `point`.
    pub fn through_point<R: Rng + ?Sized>(
        spec: Arc<FamilySpec>,
        point: &[Fe; 3],
        rng: &mut R,
    ) -> Result<Self> {
        let f = spec.field().clone();
        let (b1, c1) = if point[0].is_zero() {
            if point[1].is_zero() {
                (f.sample(rng), f.sample(rng))
            } else {
                (Fe::ZERO, f.sample_nonzero(rng))
            }
        } else {
            let b1 = f.sample_nonzero(rng);
            (b1, f.div(f.mul(b1, point[1]), point[0])?)
        };
        let broot = [f.sample(rng), f.pth_root(b1)];
        let croot = [f.sample(rng), f.pth_root(c1)];
        Ok(Self::new(spec, broot, croot))
    }

    pub fn spec(&self) -> &Arc<FamilySpec> {
        &self.spec
    }

    pub fn field(&self) -> &GaloisField {
        self.spec.field()
    }

    pub fn broot(&self) -> [Fe; 2] {
        self.broot
    }

    pub fn croot(&self) -> [Fe; 2] {
        self.croot
    }

    pub fn b(&self) -> [Fe; 2] {
        self.b
    }

    pub fn c(&self) -> [Fe; 2] {
        self.c
    }

    pub fn pi(&self) -> Fe {
        self.pi
    }

    /// `(-1)^d π^p`.
    pub fn s(&self) -> Fe {
        let f = self.field();
        let pi_p = f.frobenius(self.pi);
        if self.spec.d % 2 == 0 {
            pi_p
        } else {
            f.neg(pi_p)
        }
    }

    /// `L_k = c_k x0 - b_k x1`.
    pub fn line(&self, k: usize) -> MultiPoly {
        let f = self.field();
        MultiPoly::var(f, 3, X0)
            .scale(self.c[k])
            .sub(&MultiPoly::var(f, 3, X1).scale(self.b[k]))
    }

    pub fn parts(&self) -> PsiParts {
        let f = self.field();
        let pi_p = MultiPoly::constant(f, 3, f.frobenius(self.pi));
        assemble_psi(
            &self.line(0),
            &self.line(1),
            &pi_p,
            self.spec.boundary.delta(),
            &self.spec.e,
            self.spec.d,
            self.spec.m(),
        )
    }

    pub fn psi(&self) -> MultiPoly {
        self.parts().psi
    }

    /// All roots `a_1..a_m` with the normalization `a_m = 0`.
    pub fn roots(&self) -> Vec<Fe> {
        let mut a = self.spec.a_fixed.clone();
        if self.spec.m() > 0 {
            a.push(Fe::ZERO);
        }
        a
    }

    /// The curve `t -> (M V^p : M W^p : M σ^{1/p}(V, W) - 1)` of this fiber.
    pub fn curve_params(&self) -> CurveParams {
        CurveParams::new(
            self.spec.boundary.clone(),
            self.spec.d,
            self.spec.m(),
            self.roots(),
            self.broot.to_vec(),
            self.croot.to_vec(),
        )
        .expect("fiber parameters are admissible")
    }

    fn point7(&self, x: &[Fe; 3]) -> [Fe; 7] {
        [x[0], x[1], x[2], self.b[0], self.b[1], self.c[0], self.c[1]]
    }

    /// Family gradient at `(x, b, c)`.
    pub fn gradient_at(&self, x: &[Fe; 3]) -> Result<Vec<Fe>> {
        let pt = self.point7(x);
        self.spec
            .family_psi()
            .1
            .iter()
            .map(|g| g.eval(&pt))
            .collect()
    }

    /// `Ψ(x(t)) = 0`, with `(L0 - a^p L1)(x(t)) = π M (t + a)^p`,
    /// `L1(x(t))^d = (-1)^d π^d M^d` and `Δ(x(t)) = 1` along the way.
    pub fn psi_pullback_zero(&self) -> Result<Certificate> {
        let f = self.field().clone();
        let params = self.curve_params();
        let built = params.build()?;
        let x = &built.x.0;
        let m_poly = &built.triple.m_poly;
        let (l0, l1) = (self.line(0), self.line(1));
        for &a in &self.roots() {
            let lhs = l0.sub(&l1.scale(f.frobenius(a))).pullback(x)?;
            let rhs = m_poly
                .mul(&UniPoly::linear(&f, a, Fe::ONE).pow(f.characteristic()))
                .scale(self.pi);
            if lhs != rhs {
                return Err(Error::identity("(L0 - a^p L1) pullback", lhs.sub(&rhs)));
            }
        }
        let d = self.spec.d as u64;
        let lhs = l1.pullback(x)?.pow(d);
        let sign = if d % 2 == 0 { Fe::ONE } else { f.neg(Fe::ONE) };
        let rhs = m_poly.pow(d).scale(f.mul(sign, f.pow(self.pi, d)));
        if lhs != rhs {
            return Err(Error::identity("L1 pullback power", lhs.sub(&rhs)));
        }
        let delta = self.spec.boundary.delta().pullback(x)?;
        if delta != UniPoly::one(&f) {
            return Err(Error::identity("Delta pullback", delta));
        }
        let psi = self.psi();
        // product form L1^d - s Δ ∏ (L0 - a_j^p L1) against the e_k expansion
        let mut prod = MultiPoly::one(&f, 3);
        for &a in &self.roots() {
            prod = prod.mul(&l0.sub(&l1.scale(f.frobenius(a))));
        }
        let product_form = l1
            .pow(d)
            .sub(&self.spec.boundary.delta().mul(&prod).scale(self.s()));
        if product_form != psi {
            return Err(Error::identity("product form of Psi", product_form.sub(&psi)));
        }
        let pulled = psi.pullback(x)?;
        if !pulled.is_zero() {
            return Err(Error::identity("Psi pullback", pulled));
        }
        Ok(Certificate::new(
            "psi_pullback",
            format!("pi={} exact", self.pi),
        ))
    }

    /// Classes of total-space singularities along this fiber: singular points of
    /// `Δ` on the curve, points over `π = 0`, and `str`.
    pub fn singularity_classification(&self) -> Result<SingularityReport> {
        let f = self.field().clone();
        let m = self.spec.m();
        let psi = self.psi();
        let l1 = self.line(1);
        let mismatch = |what: String| Error::ClassificationMismatch(what);
        let is_zero = |g: &[Fe]| g.iter().all(|c| c.is_zero());

        let mut class1 = 0;
        for s in self.spec.boundary.singular_points()? {
            if !l1.eval(&s)?.is_zero() {
                continue;
            }
            if !psi.eval(&s)?.is_zero() {
                return Err(mismatch(format!("{:?} on L1 = 0 but not on the curve", s)));
            }
            if !is_zero(&self.gradient_at(&s)?) {
                return Err(mismatch(format!("gradient nonzero at singular point {:?}", s)));
            }
            class1 += 1;
        }

        let mut class2 = 0;
        if self.pi.is_zero() {
            let base = if self.b[1].is_zero() && self.c[1].is_zero() {
                [Fe::ONE, Fe::ZERO]
            } else {
                [self.b[1], self.c[1]]
            };
            for z in [Fe::ZERO, Fe::ONE, f.from_int(2)] {
                let pt = [base[0], base[1], z];
                if !psi.eval(&pt)?.is_zero() {
                    return Err(mismatch(format!("{:?} on L1 = 0 but not on the curve", pt)));
                }
                if !is_zero(&self.gradient_at(&pt)?) {
                    return Err(mismatch(format!("gradient nonzero at {:?} with pi = 0", pt)));
                }
                class2 += 1;
            }
        }

        let str_pt = [Fe::ZERO, Fe::ZERO, Fe::ONE];
        let str_on_curve = psi.eval(&str_pt)?.is_zero();
        let mut str_singular = None;
        if str_on_curve {
            let g = self.gradient_at(&str_pt)?;
            if m > 1 || self.pi.is_zero() {
                if !is_zero(&g) {
                    return Err(mismatch(format!("gradient at str is {:?}", g)));
                }
                str_singular = Some(true);
            } else if m == 1 {
                let s = self.s();
                let mut expect = vec![Fe::ZERO; 7];
                expect[X0] = f.mul(s, self.c[0]);
                expect[X1] = f.neg(f.mul(s, self.b[0]));
                if g != expect {
                    return Err(mismatch(format!("gradient at str is {:?}", g)));
                }
                str_singular = Some(is_zero(&g));
            }
        } else if m > 0 {
            return Err(mismatch("str not on a curve with m > 0".into()));
        } else if self.pi.is_zero() {
            return Err(mismatch("str off the curve although pi = 0".into()));
        }
        Ok(SingularityReport {
            class1_points: class1,
            class2_points: class2,
            str_on_curve,
            str_singular,
        })
    }

    /// `K = M' + M^2 (σ^{1/p}(V, W))'`, its radical and the number of cusps.
    /// `None` when `π = 0` (the curve covers a line).
    pub fn cusp_polynomial(&self) -> Result<Option<CuspData>> {
        if self.pi.is_zero() {
            return Ok(None);
        }
        let params = self.curve_params();
        let k_poly = params.cusp_factor();
        let p = self.spec.boundary.p() as usize;
        let expected_degree = 2 * self.spec.d - p - 2;
        let degree_exact = k_poly.degree() == Some(expected_degree);
        if k_poly.degree().is_some_and(|dk| dk > expected_degree) {
            return Err(Error::identity(
                "deg K <= 2d - p - 2",
                format!("deg K = {:?}", k_poly.degree()),
            ));
        }
        let radical = k_poly.squarefree_part()?;
        let count = radical.degree().unwrap_or(0);
        let m_poly = params.triple().m_poly;
        let collides_with_str = radical.gcd(&m_poly).degree() != Some(0);
        Ok(Some(CuspData {
            k_poly,
            radical,
            count,
            expected_degree,
            degree_exact,
            collides_with_str,
        }))
    }

    /// Special boundary only: `K = M' - π^{1/p} M^2 (V - W)^{p-2}`, and for
    /// `p = 2` also `K = ((M')^{1/2} - π^{1/4} M)^2`.
    pub fn special_cusp_checks(&self) -> Result<Certificate> {
        if !self.spec.boundary.is_special() {
            return Err(Error::InvalidInput("boundary is not the special one".into()));
        }
        let f = self.field().clone();
        let p = f.characteristic();
        let params = self.curve_params();
        let ParamTriple { m_poly, v, w } = params.triple();
        let k_poly = params.cusp_factor();
        let root_pi = f.pth_root(self.pi);
        let special = m_poly
            .derivative()
            .sub(&m_poly.mul(&m_poly).mul(&v.sub(&w).pow(p - 2)).scale(root_pi));
        if special != k_poly {
            return Err(Error::identity("special cusp equation", special.sub(&k_poly)));
        }
        if p == 2 {
            let half = m_poly
                .derivative()
                .pth_root()
                .ok_or_else(|| Error::identity("M' in k[t^2]", m_poly.derivative()))?;
            let inner = half.sub(&m_poly.scale(f.pth_root(root_pi)));
            if inner.mul(&inner) != k_poly {
                return Err(Error::identity("char 2 square form", inner.mul(&inner).sub(&k_poly)));
            }
        }
        Ok(Certificate::new("special_cusp", format!("pi={}", self.pi)))
    }

    /// The radical `C` of `K` divides the pulled-back partials of `Ψ` and every
    /// Wronskian `x_i' x_j - x_j' x_i`; `Ψ(x(t)) = 0`.
    pub fn cusp_image_certificates(&self, cusp: &CuspData) -> Result<Certificate> {
        if self.pi.is_zero() || cusp.collides_with_str {
            return Err(Error::InvalidInput(
                "needs pi != 0 and cusps away from str".into(),
            ));
        }
        let built = self.curve_params().build()?;
        let x = &built.x.0;
        let psi = self.psi();
        let c = &cusp.radical;
        for i in 0..3 {
            let pulled = psi.partial(i)?.pullback(x)?;
            if !c.divides(&pulled)? {
                return Err(Error::certificate(
                    "cusp image (i)",
                    format!("C does not divide d/dx{} Psi", i),
                ));
            }
        }
        for i in 0..3 {
            for j in i + 1..3 {
                let wr = x[i].derivative().mul(&x[j]).sub(&x[j].derivative().mul(&x[i]));
                if !c.divides(&wr)? {
                    return Err(Error::certificate(
                        "cusp image (ii)",
                        format!("C does not divide Wronskian ({}, {})", i, j),
                    ));
                }
            }
        }
        let pulled = psi.pullback(x)?;
        if !pulled.is_zero() {
            return Err(Error::certificate("cusp image (iii)", format!("Psi pullback {}", pulled)));
        }
        Ok(Certificate::new(
            "cusp_image",
            format!("{} cusps certified", cusp.count),
        ))
    }

    /// For `m >= 1` the total space is smooth at the cusps iff
    /// `gcd(C, D, E) = 1` with `D`, `E` the pulled-back `𝒟`, `ℰ`; this is forced
    /// for `m = 1`. For `m = 0` every cusp lies over `Sing Δ`: `C | P(x0, x1)`.
    pub fn total_space_smoothness_at_cusps(&self, cusp: &CuspData) -> Result<Smoothness> {
        if self.pi.is_zero() {
            return Err(Error::InvalidInput("needs pi != 0".into()));
        }
        let built = self.curve_params().build()?;
        let x = &built.x.0;
        let c = &cusp.radical;
        let m = self.spec.m();
        if m == 0 {
            let pulled = self.spec.boundary.p_form().pullback(&x[..2])?;
            if !c.divides(&pulled)? {
                return Err(Error::certificate(
                    "cusps over Sing Delta",
                    format!("C = {} does not divide P(x0, x1)", c),
                ));
            }
            return Ok(Smoothness {
                smooth_at_cusps: cusp.count == 0,
                gcd_degree: cusp.count,
            });
        }
        let parts = self.parts();
        let dd = parts.script_d.pullback(x)?;
        let ee = parts.script_e.pullback(x)?;
        let g = c.gcd(&dd.gcd(&ee));
        let gcd_degree = g.degree().unwrap_or(0);
        if m == 1 && gcd_degree != 0 {
            return Err(Error::certificate(
                "smooth total space (m = 1)",
                format!("gcd(C, D, E) = {}", g),
            ));
        }
        Ok(Smoothness {
            smooth_at_cusps: gcd_degree == 0,
            gcd_degree,
        })
    }

    /// Lowest part of `Ψ(x0, x1, 1)` equals `(-1)^d π^p ℒ`, of degree `m`.
    pub fn tangent_cone_at_str(&self) -> Result<TangentCone> {
        if self.pi.is_zero() {
            return Err(Error::InvalidInput("needs pi != 0".into()));
        }
        let f = self.field().clone();
        let m = self.spec.m();
        let affine = self.psi().specialize(&[None, None, Some(Fe::ONE)])?;
        let low = affine.lowest_part()?;
        let expect = self.parts().script_l.scale(self.s());
        if low != expect {
            return Err(Error::ConeMismatch(format!("lowest part {} vs {}", low, expect)));
        }
        let degree = low.total_degree().unwrap_or(0) as usize;
        if degree != m {
            return Err(Error::ConeMismatch(format!("degree {} but m = {}", degree, m)));
        }
        let cone = MultiPoly::from_terms(
            &f,
            2,
            low.terms().map(|(mono, c)| (vec![mono.0[0], mono.0[1]], c)),
        )?;
        let (count, deg) = binary_form_root_count(&cone)?;
        Ok(TangentCone {
            cone,
            multiplicity: degree,
            ordinary: count == deg,
        })
    }

    /// Point at infinity of the curve, `(b1 : c1 : σ^{1/p}(b1^{1/p}, c1^{1/p}))`.
    pub fn infinity_point(&self) -> [Fe; 3] {
        [
            self.b[1],
            self.c[1],
            self.spec.boundary.sigma_root_at(self.broot[1], self.croot[1]),
        ]
    }

    /// The point at infinity is a smooth point of `Δ`.
    pub fn infinity_avoids_singular_boundary(&self) -> Result<bool> {
        Ok(!self
            .spec
            .boundary
            .p_form()
            .eval(&[self.b[1], self.c[1]])?
            .is_zero())
    }
}

/// Rejection-samples a fiber with `π != 0`, infinity off `Sing Δ`, exact
/// `deg K` and cusps off the branches through `str`.
pub fn sample_general_fiber<R: Rng + ?Sized>(
    spec: &Arc<FamilySpec>,
    rng: &mut R,
) -> Result<GeneralFiber> {
    const CONDITIONS: [&str; 4] = [
        "pi != 0",
        "infinity avoids Sing Delta",
        "deg K = 2d - p - 2",
        "gcd(C, M) = 1",
    ];
    let mut failures = [0usize; 4];
    for _ in 0..SAMPLE_RETRIES {
        let fiber = FiberParams::random(spec.clone(), rng);
        if fiber.pi.is_zero() {
            failures[0] += 1;
            continue;
        }
        if !fiber.infinity_avoids_singular_boundary()? {
            failures[1] += 1;
            continue;
        }
        let cusp = fiber.cusp_polynomial()?.expect("pi != 0");
        if !cusp.degree_exact {
            failures[2] += 1;
            continue;
        }
        if cusp.collides_with_str {
            failures[3] += 1;
            continue;
        }
        return Ok(GeneralFiber { fiber, cusp });
    }
    let worst = (0..4).max_by_key(|&i| failures[i]).unwrap();
    Err(Error::GenericityExhausted {
        condition: CONDITIONS[worst].into(),
        attempts: SAMPLE_RETRIES,
    })
}

/// Cusps on a general fiber: `d - 2` for `p = 2`, else `2d - p - 2`.
pub fn expected_cusp_count(p: u64, d: usize) -> usize {
    if p == 2 {
        d - 2
    } else {
        2 * d - p as usize - 2
    }
}

/// `(d-1)(d-2)/2 - m(m-1)/2 = (p-1)(2d-p-2)/2` with `m = d - p`.
pub fn delta_identity(p: u64, d: usize) -> Result<Certificate> {
    let (p, d) = (p as i128, d as i128);
    if d < p {
        return Err(Error::InvalidInput(format!("need d >= p, got d = {}", d)));
    }
    let m = d - p;
    let lhs2 = (d - 1) * (d - 2) - m * (m - 1);
    let rhs2 = (p - 1) * (2 * d - p - 2);
    if lhs2 % 2 != 0 || rhs2 % 2 != 0 || lhs2 != rhs2 {
        return Err(Error::identity(
            "delta invariant count",
            format!("{}/2 vs {}/2", lhs2, rhs2),
        ));
    }
    Ok(Certificate::new(
        "delta_identity",
        format!("p={} d={}: {}", p, d, lhs2 / 2),
    ))
}

/// `Ψ` divides the resultant of the fiber's parameterization.
pub fn implicitization_oracle(fiber: &FiberParams) -> Result<bool> {
    let x: XCoords = fiber.curve_params().build()?.x;
    let r = crate::curves::implicitize(&x)?;
    fiber.psi().divides(&r)
}
