//! The strange boundary curve `Δ = σ(x0, x1) - x2^p` and its companions.

use rand::SeedableRng;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::certificate::Certificate;
use crate::error::{Error, Result};
use crate::field::{Fe, GaloisField};
use crate::poly::{binary_form_root_count, MultiPoly, UniPoly};

/// The strange point `(0 : 0 : 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StrangePoint;

impl StrangePoint {
    pub fn coords(self) -> [Fe; 3] {
        [Fe::ZERO, Fe::ZERO, Fe::ONE]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SigmaMode {
    Random(u64),
    Special,
    /// `σ_1, ..., σ_{p-1}`.
    Explicit(Vec<Fe>),
}

#[derive(Clone, Debug)]
pub struct BoundarySpec {
    field: GaloisField,
    special: bool,
    /// `sigma[i - 1] = σ_i`.
    sigma: Vec<Fe>,
    sigma_root: Vec<Fe>,
    delta: MultiPoly,
    p_form: MultiPoly,
}

#[derive(Clone, Debug)]
pub struct BoundaryCensus {
    pub p_form: MultiPoly,
    pub count: usize,
    pub separable: bool,
}

impl BoundarySpec {
    pub fn new(field: &GaloisField, mode: SigmaMode) -> Result<Self> {
        let p = field.characteristic() as usize;
        match mode {
            SigmaMode::Special => Self::from_sigma(field, vec![Fe::ONE; p - 1], true),
            SigmaMode::Random(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                Self::random(field, &mut rng)
            }
            SigmaMode::Explicit(list) => {
                if list.len() != p - 1 {
                    return Err(Error::InvalidInput(format!(
                        "expected {} sigma coefficients, got {}",
                        p - 1,
                        list.len()
                    )));
                }
                if list[0] != Fe::ONE || list[p - 2] != Fe::ONE {
                    return Err(Error::BadNormalization(format!(
                        "sigma_1 = {}, sigma_{} = {}",
                        list[0],
                        p - 1,
                        list[p - 2]
                    )));
                }
                if list.iter().any(|&c| field.element(c.encoding()).is_err()) {
                    return Err(Error::InvalidInput("sigma coefficient outside field".into()));
                }
                let special = list.iter().all(|&c| c == Fe::ONE);
                Self::from_sigma(field, list, special)
            }
        }
    }

    /// Interior coefficients `σ_2..σ_{p-2}` drawn uniformly.
    pub fn random<R: Rng + ?Sized>(field: &GaloisField, rng: &mut R) -> Result<Self> {
        let p = field.characteristic() as usize;
        let mut sigma = vec![Fe::ONE; p - 1];
        for c in sigma.iter_mut().take(p.saturating_sub(2)).skip(1) {
            *c = field.sample(rng);
        }
        let special = sigma.iter().all(|&c| c == Fe::ONE);
        Self::from_sigma(field, sigma, special)
    }

    fn from_sigma(field: &GaloisField, sigma: Vec<Fe>, special: bool) -> Result<Self> {
        let p = field.characteristic() as u32;
        let mut delta_terms = Vec::new();
        let mut p_terms = Vec::new();
        for (idx, &s) in sigma.iter().enumerate() {
            let i = idx as u32 + 1;
            delta_terms.push((vec![i, p - i, 0], s));
            p_terms.push((
                vec![i - 1, p - i - 1],
                field.mul(field.from_int(i as i64), s),
            ));
        }
        delta_terms.push((vec![0, 0, p], field.neg(Fe::ONE)));
        let delta = MultiPoly::from_terms(field, 3, delta_terms)?;
        let p_form = MultiPoly::from_terms(field, 2, p_terms)?;
        let sigma_root = sigma.iter().map(|&s| field.pth_root(s)).collect();
        let spec = BoundarySpec {
            field: field.clone(),
            special,
            sigma,
            sigma_root,
            delta,
            p_form,
        };
        spec.check_partials()?;
        Ok(spec)
    }

    fn check_partials(&self) -> Result<()> {
        let f = &self.field;
        let p3 = self.p_form.embed(3, &[0, 1])?;
        let x0 = MultiPoly::var(f, 3, 0);
        let x1 = MultiPoly::var(f, 3, 1);
        let r0 = self.delta.partial(0)?.sub(&x1.mul(&p3));
        if !r0.is_zero() {
            return Err(Error::identity("d/dx0 Delta = x1 P", r0));
        }
        let r1 = self.delta.partial(1)?.add(&x0.mul(&p3));
        if !r1.is_zero() {
            return Err(Error::identity("d/dx1 Delta = -x0 P", r1));
        }
        Ok(())
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn p(&self) -> u64 {
        self.field.characteristic()
    }

    pub fn is_special(&self) -> bool {
        self.special
    }

    pub fn sigma(&self) -> &[Fe] {
        &self.sigma
    }

    pub fn sigma_root(&self) -> &[Fe] {
        &self.sigma_root
    }

    /// `Δ` in `(x0, x1, x2)`.
    pub fn delta(&self) -> &MultiPoly {
        &self.delta
    }

    /// `P` in `(x0, x1)`.
    pub fn p_form(&self) -> &MultiPoly {
        &self.p_form
    }

    /// `σ(a, b)` at field values.
    pub fn sigma_at(&self, a: Fe, b: Fe) -> Fe {
        let f = &self.field;
        let p = self.p();
        self.sigma.iter().enumerate().fold(Fe::ZERO, |acc, (idx, &s)| {
            let i = idx as u64 + 1;
            f.add(acc, f.mul(s, f.mul(f.pow(a, i), f.pow(b, p - i))))
        })
    }

    pub fn delta_at(&self, x: &[Fe; 3]) -> Fe {
        let f = &self.field;
        f.sub(self.sigma_at(x[0], x[1]), f.pow(x[2], self.p()))
    }

    /// `Σ σ_i^{1/p} V^i W^{p-i}`.
    pub fn sigma_root_eval(&self, v: &UniPoly, w: &UniPoly) -> UniPoly {
        let f = &self.field;
        let p = self.p();
        let vp: Vec<UniPoly> = (0..=p).map(|e| v.pow(e)).collect();
        let wp: Vec<UniPoly> = (0..=p).map(|e| w.pow(e)).collect();
        let mut acc = UniPoly::zero(f);
        for (idx, &r) in self.sigma_root.iter().enumerate() {
            let i = idx + 1;
            acc = acc.add(&vp[i].mul(&wp[p as usize - i]).scale(r));
        }
        acc
    }

    /// Same form at field values.
    pub fn sigma_root_at(&self, a: Fe, b: Fe) -> Fe {
        let f = &self.field;
        let p = self.p();
        self.sigma_root
            .iter()
            .enumerate()
            .fold(Fe::ZERO, |acc, (idx, &r)| {
                let i = idx as u64 + 1;
                f.add(acc, f.mul(r, f.mul(f.pow(a, i), f.pow(b, p - i))))
            })
    }

    /// `σ(z0^p, z1^p) - (σ^{1/p}(z0, z1) - z2)^p = z2^p` in `(z0, z1, z2)`.
    pub fn frobenius_factorization_check(&self) -> Result<Certificate> {
        let f = &self.field;
        let p = self.p() as u32;
        let mut lhs_terms = Vec::new();
        let mut root_terms = Vec::new();
        for (idx, (&s, &r)) in self.sigma.iter().zip(&self.sigma_root).enumerate() {
            let i = idx as u32 + 1;
            lhs_terms.push((vec![i * p, (p - i) * p, 0], s));
            root_terms.push((vec![i, p - i, 0], r));
        }
        let sigma_frob = MultiPoly::from_terms(f, 3, lhs_terms)?;
        let root_form = MultiPoly::from_terms(f, 3, root_terms)?;
        let z2 = MultiPoly::var(f, 3, 2);
        let lhs = sigma_frob.sub(&root_form.sub(&z2).pow(p as u64));
        let residual = lhs.sub(&z2.pow(p as u64));
        if !residual.is_zero() {
            return Err(Error::identity("frobenius factorization", residual));
        }
        Ok(Certificate::new(
            "frobenius_factorization",
            format!("p={} exact", p),
        ))
    }

    /// Distinct projective roots of `P`. General boundaries have `p - 2`.
    pub fn boundary_cusp_census(&self) -> Result<BoundaryCensus> {
        let p = self.p() as usize;
        let (count, degree) = binary_form_root_count(&self.p_form)?;
        if degree != p - 2 {
            return Err(Error::identity(
                "deg P = p - 2",
                format!("degree {}", degree),
            ));
        }
        Ok(BoundaryCensus {
            p_form: self.p_form.clone(),
            count,
            separable: count == p - 2,
        })
    }

    /// For the special boundary and linear `V`, `W`:
    /// `(σ0^{1/p}(V, W))' = -π^{1/p} (V - W)^{p-2}`.
    pub fn sigma0_derivative_check(&self, v: &UniPoly, w: &UniPoly) -> Result<Certificate> {
        if !self.special {
            return Err(Error::InvalidInput("boundary is not the special one".into()));
        }
        if v.degree().unwrap_or(0) > 1 || w.degree().unwrap_or(0) > 1 {
            return Err(Error::InvalidInput("V and W must be linear".into()));
        }
        let f = &self.field;
        let p = self.p();
        let b = [f.frobenius(v.coeff(0)), f.frobenius(v.coeff(1))];
        let c = [f.frobenius(w.coeff(0)), f.frobenius(w.coeff(1))];
        let pi = f.sub(f.mul(b[1], c[0]), f.mul(b[0], c[1]));
        let lhs = self.sigma_root_eval(v, w).derivative();
        let rhs = v.sub(w).pow(p - 2).scale(f.neg(f.pth_root(pi)));
        if lhs != rhs {
            return Err(Error::identity("sigma0 derivative", lhs.sub(&rhs)));
        }
        Ok(Certificate::new("sigma0_derivative", format!("pi={}", pi)))
    }

    /// Base-field points of `Sing Δ`: `(r : 1 : σ(r, 1)^{1/p})` with `P(r, 1) = 0`.
    pub fn singular_points(&self) -> Result<Vec<[Fe; 3]>> {
        let f = &self.field;
        if self.p() == 2 {
            return Ok(Vec::new());
        }
        let affine = self
            .p_form
            .specialize(&[None, Some(Fe::ONE)])?
            .to_univariate(0)?;
        Ok(affine
            .roots_in_field()?
            .into_iter()
            .map(|r| [r, Fe::ONE, f.pth_root(self.sigma_at(r, Fe::ONE))])
            .collect())
    }

    /// `"p;k;sigma=σ_2,...,σ_{p-2}"`.
    pub fn encode(&self) -> String {
        let p = self.p() as usize;
        let interior: Vec<String> = self
            .sigma
            .iter()
            .take(p.saturating_sub(2))
            .skip(1)
            .map(|c| c.encoding().to_string())
            .collect();
        format!(
            "{};{};sigma={}",
            p,
            self.field.degree(),
            interior.join(",")
        )
    }

    pub fn decode(field: &GaloisField, s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("malformed boundary encoding `{}`", s));
        let mut parts = s.split(';');
        let p: u64 = parts.next().and_then(|x| x.trim().parse().ok()).ok_or_else(bad)?;
        let k: usize = parts.next().and_then(|x| x.trim().parse().ok()).ok_or_else(bad)?;
        let list = parts
            .next()
            .and_then(|x| x.trim().strip_prefix("sigma="))
            .ok_or_else(bad)?;
        if parts.next().is_some() || p != field.characteristic() || k != field.degree() {
            return Err(bad());
        }
        let mut sigma = vec![Fe::ONE];
        if !list.is_empty() {
            for item in list.split(',') {
                let enc: u64 = item.trim().parse().map_err(|_| bad())?;
                sigma.push(field.element(enc)?);
            }
        }
        if p >= 3 {
            sigma.push(Fe::ONE);
        }
        Self::new(field, SigmaMode::Explicit(sigma))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn boundary(p: u64, k: usize, mode: SigmaMode) -> BoundarySpec {
        let f = GaloisField::new(p, k, 1).unwrap();
        BoundarySpec::new(&f, mode).unwrap()
    }

    #[test]
    fn conic_in_char_two() {
        let b = boundary(2, 3, SigmaMode::Random(5));
        let f = b.field().clone();
        let x = |i| MultiPoly::var(&f, 3, i);
        assert_eq!(*b.delta(), x(0).mul(&x(1)).sub(&x(2).pow(2)));
        assert!(b.is_special());
        let census = b.boundary_cusp_census().unwrap();
        assert_eq!(census.count, 0);
        assert!(census.p_form.as_constant().is_some_and(|c| !c.is_zero()));
    }

    #[test]
    fn special_cubic() {
        let b = boundary(3, 1, SigmaMode::Special);
        let f = b.field().clone();
        let x = |i| MultiPoly::var(&f, 3, i);
        let expect = x(0)
            .pow(2)
            .mul(&x(1))
            .add(&x(0).mul(&x(1).pow(2)))
            .sub(&x(2).pow(3));
        assert_eq!(*b.delta(), expect);
        let y = |i| MultiPoly::var(&f, 2, i);
        let census = b.boundary_cusp_census().unwrap();
        assert_eq!(census.p_form, y(1).sub(&y(0)));
        assert_eq!(census.count, 1);
        assert!(census.separable);
    }

    #[test]
    fn explicit_quintic_and_normalization() {
        let f = GaloisField::new(5, 2, 0).unwrap();
        let (s2, s3) = (Fe(7), Fe(13));
        let b = BoundarySpec::new(&f, SigmaMode::Explicit(vec![Fe::ONE, s2, s3, Fe::ONE])).unwrap();
        assert_eq!(b.delta().coeff(&[2, 3, 0]), s2);
        assert_eq!(b.delta().coeff(&[3, 2, 0]), s3);
        let err = BoundarySpec::new(&f, SigmaMode::Explicit(vec![Fe(2), s2, s3, Fe::ONE]));
        assert!(matches!(err, Err(Error::BadNormalization(_))));
        let err = BoundarySpec::new(&f, SigmaMode::Explicit(vec![Fe::ONE, s2, s3, Fe(3)]));
        assert!(matches!(err, Err(Error::BadNormalization(_))));
    }

    #[test]
    fn delta_at_str_is_minus_one() {
        for p in [2u64, 3, 5, 7] {
            let b = boundary(p, 2, SigmaMode::Random(p));
            let f = b.field();
            assert_eq!(b.delta_at(&StrangePoint.coords()), f.neg(Fe::ONE));
        }
    }

    #[test]
    fn sigma_root_examples() {
        let f = GaloisField::new(3, 2, 9).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let b = BoundarySpec::random(&f, &mut rng).unwrap();
        let v = UniPoly::new(&f, vec![f.sample(&mut rng), f.sample(&mut rng), Fe::ONE]);
        let w = UniPoly::new(&f, vec![f.sample(&mut rng), f.sample(&mut rng), Fe(4)]);
        let r = b.sigma_root_eval(&v, &w);
        // (Σ r_i V^i W^{p-i})^p against σ evaluated on (V^p, W^p) by direct pullback.
        let sigma = b.delta().add(&MultiPoly::var(&f, 3, 2).pow(3));
        let direct = sigma
            .pullback(&[v.pow(3), w.pow(3), UniPoly::zero(&f)])
            .unwrap();
        assert_eq!(r.pow(3), direct);
        let same = b.sigma_root_eval(&v, &v);
        let s11 = b.sigma_root_at(Fe::ONE, Fe::ONE);
        assert_eq!(same, v.pow(3).scale(s11));

        let f2 = GaloisField::new(2, 4, 0).unwrap();
        let b2 = BoundarySpec::new(&f2, SigmaMode::Special).unwrap();
        let v2 = UniPoly::linear(&f2, Fe(3), Fe(5));
        let w2 = UniPoly::linear(&f2, Fe(7), Fe(1));
        assert_eq!(b2.sigma_root_eval(&v2, &w2), v2.mul(&w2));
    }

    #[test]
    fn frobenius_factorization_holds() {
        for (p, k) in [(2u64, 3usize), (3, 2), (5, 2), (7, 1)] {
            for seed in 0..10 {
                let b = boundary(p, k, SigmaMode::Random(seed));
                b.frobenius_factorization_check().unwrap();
            }
        }
        boundary(3, 2, SigmaMode::Special)
            .frobenius_factorization_check()
            .unwrap();
    }

    #[test]
    fn general_boundaries_have_separable_p() {
        for p in [5u64, 7, 11] {
            let good = (0..20)
                .filter(|&s| boundary(p, 2, SigmaMode::Random(s)).boundary_cusp_census().unwrap().separable)
                .count();
            assert!(good >= 18, "p={} separable {}/20", p, good);
        }
    }

    #[test]
    fn sigma0_derivative() {
        for (p, k) in [(2u64, 4usize), (3, 3), (5, 2)] {
            let f = GaloisField::new(p, k, 2).unwrap();
            let b = BoundarySpec::new(&f, SigmaMode::Special).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(p);
            for _ in 0..5 {
                let v = UniPoly::linear(&f, f.sample(&mut rng), f.sample(&mut rng));
                let w = UniPoly::linear(&f, f.sample(&mut rng), f.sample(&mut rng));
                b.sigma0_derivative_check(&v, &w).unwrap();
                b.sigma0_derivative_check(&v, &v).unwrap();
            }
        }
        let f = GaloisField::new(5, 1, 0).unwrap();
        let b = BoundarySpec::new(&f, SigmaMode::Random(3)).unwrap();
        if !b.is_special() {
            let v = UniPoly::t(&f);
            assert!(b.sigma0_derivative_check(&v, &v).is_err());
        }
    }

    #[test]
    fn singular_points_are_singular() {
        let b = boundary(5, 2, SigmaMode::Random(11));
        let grads: Vec<MultiPoly> = b.delta().gradient();
        for s in b.singular_points().unwrap() {
            assert!(b.delta_at(&s).is_zero());
            for g in &grads {
                assert!(g.eval(&s).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn encoding_round_trip() {
        for p in [2u64, 3, 5, 7] {
            let b = boundary(p, 2, SigmaMode::Random(p + 1));
            let s = b.encode();
            let back = BoundarySpec::decode(b.field(), &s).unwrap();
            assert_eq!(back.sigma(), b.sigma());
        }
        assert_eq!(boundary(3, 2, SigmaMode::Special).encode(), "3;2;sigma=");
    }
}
