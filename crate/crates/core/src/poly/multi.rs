use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Fe, GaloisField};
use crate::poly::UniPoly;

/// Exponent vector ordered by graded-lex: total degree first, then lexicographic.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(arity: usize) -> Self {
        Monomial(vec![0; arity])
    }

    pub fn var(arity: usize, i: usize) -> Self {
        let mut e = vec![0; arity];
        e[i] = 1;
        Monomial(e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Self) -> Self {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn divides(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn div(&self, other: &Self) -> Self {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in `arity` variables over GF(p^k). No zero coefficients are stored.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    field: GaloisField,
    arity: usize,
    terms: BTreeMap<Monomial, Fe>,
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{i}")?,
                    _ => write!(f, "*x{i}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

impl MultiPoly {
    pub fn zero(field: &GaloisField, arity: usize) -> Self {
        MultiPoly {
            field: field.clone(),
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &GaloisField, arity: usize, c: Fe) -> Self {
        let mut p = Self::zero(field, arity);
        p.add_term(Monomial::one(arity), c);
        p
    }

    pub fn one(field: &GaloisField, arity: usize) -> Self {
        Self::constant(field, arity, Fe::ONE)
    }

    /// The variable `x_i`.
    pub fn var(field: &GaloisField, arity: usize, i: usize) -> Self {
        let mut p = Self::zero(field, arity);
        p.add_term(Monomial::var(arity, i), Fe::ONE);
        p
    }

    /// Builds from `(exponents, coefficient)` pairs; repeated monomials are summed.
    pub fn from_terms(
        field: &GaloisField,
        arity: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, Fe)>,
    ) -> Result<Self> {
        let mut p = Self::zero(field, arity);
        for (e, c) in terms {
            if e.len() != arity {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    got: e.len(),
                });
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, Fe)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> Fe {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .copied()
            .unwrap_or(Fe::ZERO)
    }

    /// Constant term, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Fe> {
        match self.terms.len() {
            0 => Some(Fe::ZERO),
            1 => {
                let (m, &c) = self.terms.iter().next().unwrap();
                (m.total_degree() == 0).then_some(c)
            }
            _ => None,
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::total_degree)
    }

    /// Largest term under graded-lex.
    pub fn leading_term(&self) -> Option<(&Monomial, Fe)> {
        self.terms.iter().next_back().map(|(m, &c)| (m, c))
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::total_degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    fn add_term(&mut self, m: Monomial, c: Fe) {
        if c.is_zero() {
            return;
        }
        let f = &self.field;
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let s = f.add(*existing, c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::MixedFields);
        }
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: other.arity,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add(other))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul(other))
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.arity, other.arity);
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        MultiPoly {
            field: f.clone(),
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(m, &c)| (m.clone(), f.neg(c)))
                .collect(),
        }
    }

    pub fn scale(&self, c: Fe) -> Self {
        if c.is_zero() {
            return Self::zero(&self.field, self.arity);
        }
        let f = &self.field;
        MultiPoly {
            field: f.clone(),
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(m, &x)| (m.clone(), f.mul(x, c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.arity, other.arity);
        let f = &self.field;
        let mut out = Self::zero(f, self.arity);
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                out.add_term(ma.mul(mb), f.mul(ca, cb));
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut result = Self::one(&self.field, self.arity);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Formal partial derivative with respect to `x_i`.
    pub fn partial(&self, i: usize) -> Result<Self> {
        if i >= self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: i + 1,
            });
        }
        let f = &self.field;
        let mut out = Self::zero(f, self.arity);
        for (m, &c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.0[i] -= 1;
            out.add_term(dm, f.mul(c, f.from_int(e as i64)));
        }
        Ok(out)
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.arity).map(|i| self.partial(i).unwrap()).collect()
    }

    pub fn eval(&self, point: &[Fe]) -> Result<Fe> {
        if point.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: point.len(),
            });
        }
        let f = &self.field;
        let mut acc = Fe::ZERO;
        for (m, &c) in &self.terms {
            let mut term = c;
            for (&x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    term = f.mul(term, f.pow(x, e as u64));
                }
            }
            acc = f.add(acc, term);
        }
        Ok(acc)
    }

    /// Substitutes constants for some variables (`None` keeps the variable).
    pub fn specialize(&self, values: &[Option<Fe>]) -> Result<Self> {
        if values.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: values.len(),
            });
        }
        let f = &self.field;
        let mut out = Self::zero(f, self.arity);
        for (m, &c) in &self.terms {
            let mut coef = c;
            let mut exps = m.0.clone();
            for (i, v) in values.iter().enumerate() {
                if let Some(x) = v {
                    coef = f.mul(coef, f.pow(*x, exps[i] as u64));
                    exps[i] = 0;
                }
            }
            out.add_term(Monomial(exps), coef);
        }
        Ok(out)
    }

    /// Re-embeds into a larger ring: variable `i` becomes variable `map[i]`.
    pub fn embed(&self, arity: usize, map: &[usize]) -> Result<Self> {
        if map.len() != self.arity || map.iter().any(|&j| j >= arity) {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: map.len(),
            });
        }
        let mut out = Self::zero(&self.field, arity);
        for (m, &c) in &self.terms {
            let mut e = vec![0u32; arity];
            for (i, &j) in map.iter().enumerate() {
                e[j] += m.0[i];
            }
            out.add_term(Monomial(e), c);
        }
        Ok(out)
    }

    /// `F(subs_0(t), ..., subs_{n-1}(t))`.
    pub fn pullback(&self, subs: &[UniPoly]) -> Result<UniPoly> {
        if subs.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: subs.len(),
            });
        }
        if subs.iter().any(|s| *s.field() != self.field) {
            return Err(Error::MixedFields);
        }
        let f = &self.field;
        let mut max_exp = vec![0u32; self.arity];
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                max_exp[i] = max_exp[i].max(e);
            }
        }
        let powers: Vec<Vec<UniPoly>> = subs
            .iter()
            .zip(&max_exp)
            .map(|(s, &top)| {
                let mut v = vec![UniPoly::one(f)];
                for _ in 0..top {
                    let next = v.last().unwrap().mul(s);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc = UniPoly::zero(f);
        for (m, &c) in &self.terms {
            let mut term = UniPoly::constant(f, c);
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&powers[i][e as usize]);
                }
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Sum of the terms of minimal total degree.
    pub fn lowest_part(&self) -> Result<Self> {
        let low = self
            .terms
            .keys()
            .next()
            .ok_or(Error::ZeroPolynomial)?
            .total_degree();
        let mut out = Self::zero(&self.field, self.arity);
        for (m, &c) in self.terms.range(..) {
            if m.total_degree() != low {
                break;
            }
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    /// Exact quotient `self / divisor` by graded-lex reduction, or `None` if the
    /// divisor does not divide.
    pub fn exact_div(&self, divisor: &Self) -> Result<Option<Self>> {
        self.check(divisor)?;
        let (lm, lc) = divisor.leading_term().ok_or(Error::DivisionByZero)?;
        let f = &self.field;
        let lc_inv = f.inv(lc)?;
        let lm = lm.clone();
        let mut rem = self.clone();
        let mut quot = Self::zero(f, self.arity);
        while let Some((m, c)) = rem.leading_term() {
            if !lm.divides(m) {
                // For a single divisor the leading term of the remainder is final.
                return Ok(None);
            }
            let qm = m.div(&lm);
            let qc = f.mul(c, lc_inv);
            for (dm, &dc) in &divisor.terms {
                rem.add_term(dm.mul(&qm), f.neg(f.mul(dc, qc)));
            }
            quot.add_term(qm, qc);
        }
        Ok(Some(quot))
    }

    /// True iff `self` divides `other`.
    pub fn divides(&self, other: &Self) -> Result<bool> {
        Ok(other.exact_div(self)?.is_some())
    }

    /// Univariate polynomial in `x_var` obtained when all other variables are
    /// already absent. Used for binary forms after dehomogenizing.
    pub fn to_univariate(&self, var: usize) -> Result<UniPoly> {
        let f = &self.field;
        let mut coeffs = Vec::new();
        for (m, &c) in &self.terms {
            if m.0.iter().enumerate().any(|(i, &e)| i != var && e != 0) {
                return Err(Error::InvalidInput(
                    "polynomial depends on more than one variable".into(),
                ));
            }
            let e = m.0[var] as usize;
            if coeffs.len() <= e {
                coeffs.resize(e + 1, Fe::ZERO);
            }
            coeffs[e] = c;
        }
        Ok(UniPoly::new(f, coeffs))
    }
}

/// Distinct projective roots of a binary form `F(x, y)` given as a bivariate
/// MultiPoly, counted over the algebraic closure. Returns `(count, degree)`.
pub fn binary_form_root_count(form: &MultiPoly) -> Result<(usize, usize)> {
    if form.arity() != 2 {
        return Err(Error::ArityMismatch {
            expected: 2,
            got: form.arity(),
        });
    }
    if form.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !form.is_homogeneous() {
        return Err(Error::InvalidInput("binary form must be homogeneous".into()));
    }
    let deg = form.total_degree().unwrap() as usize;
    // chart y = 1
    let affine = form.specialize(&[None, Some(Fe::ONE)])?.to_univariate(0)?;
    let finite = affine.distinct_root_count()?;
    // the point (1 : 0) is a root iff the x^deg coefficient vanishes
    let mut top = vec![0u32; 2];
    top[0] = deg as u32;
    let at_infinity = form.coeff(&top).is_zero();
    Ok((finite + usize::from(at_infinity), deg))
}
