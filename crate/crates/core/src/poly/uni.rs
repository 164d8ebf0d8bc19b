use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Fe, GaloisField};

/// Fields up to this order are searched exhaustively for roots.
pub const EXHAUSTIVE_ROOT_LIMIT: u64 = 1 << 16;

/// Dense univariate polynomial over GF(p^k); `coeffs[i]` multiplies `t^i`.
/// The zero polynomial has no coefficients and `degree() == None`.
#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly {
    field: GaloisField,
    coeffs: Vec<Fe>,
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*t")?,
                _ => write!(f, "{c}*t^{i}")?,
            }
        }
        Ok(())
    }
}

impl UniPoly {
    pub fn new(field: &GaloisField, mut coeffs: Vec<Fe>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &GaloisField) -> Self {
        Self::new(field, Vec::new())
    }

    pub fn one(field: &GaloisField) -> Self {
        Self::constant(field, Fe::ONE)
    }

    pub fn constant(field: &GaloisField, c: Fe) -> Self {
        Self::new(field, vec![c])
    }

    /// `t`
    pub fn t(field: &GaloisField) -> Self {
        Self::new(field, vec![Fe::ZERO, Fe::ONE])
    }

    /// `c * t^n`
    pub fn monomial(field: &GaloisField, c: Fe, n: usize) -> Self {
        let mut coeffs = vec![Fe::ZERO; n + 1];
        coeffs[n] = c;
        Self::new(field, coeffs)
    }

    /// `a + b t`
    pub fn linear(field: &GaloisField, a: Fe, b: Fe) -> Self {
        Self::new(field, vec![a, b])
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).copied().unwrap_or(Fe::ZERO)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading_coeff(&self) -> Fe {
        self.coeffs.last().copied().unwrap_or(Fe::ZERO)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
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
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| f.add(self.coeff(i), other.coeff(i)))
            .collect();
        Self::new(f, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| f.sub(self.coeff(i), other.coeff(i)))
            .collect();
        Self::new(f, coeffs)
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        Self::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn scale(&self, c: Fe) -> Self {
        let f = &self.field;
        Self::new(f, self.coeffs.iter().map(|&x| f.mul(x, c)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Self::zero(f);
        }
        let mut out = vec![Fe::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Self::new(f, out)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut result = Self::one(&self.field);
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

    /// Raises to the p-th power via Frobenius on coefficients: `(sum c_i t^i)^p = sum c_i^p t^(ip)`.
    pub fn frobenius_power(&self) -> Self {
        let f = &self.field;
        let p = f.characteristic() as usize;
        let mut coeffs = vec![Fe::ZERO; self.degree().map_or(0, |d| d * p + 1)];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * p] = f.frobenius(c);
        }
        Self::new(f, coeffs)
    }

    /// Euclidean division `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn divrem(&self, divisor: &Self) -> Result<(Self, Self)> {
        self.check(divisor)?;
        let f = &self.field;
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lc_inv = f.inv(divisor.leading_coeff())?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(f), self.clone()));
        }
        let mut quot = vec![Fe::ZERO; rem.len() - dd];
        for top in (dd..rem.len()).rev() {
            let c = rem[top];
            if c.is_zero() {
                continue;
            }
            let factor = f.mul(c, lc_inv);
            quot[top - dd] = factor;
            for (j, &dj) in divisor.coeffs.iter().enumerate() {
                rem[top - dd + j] = f.sub(rem[top - dd + j], f.mul(factor, dj));
            }
        }
        rem.truncate(dd);
        Ok((Self::new(f, quot), Self::new(f, rem)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.divrem(divisor)?.1)
    }

    /// Exact quotient, or `None` when `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &Self) -> Result<Option<Self>> {
        let (q, r) = self.divrem(divisor)?;
        Ok(r.is_zero().then_some(q))
    }

    pub fn divides(&self, other: &Self) -> Result<bool> {
        Ok(other.rem(self)?.is_zero())
    }

    /// Scales to leading coefficient 1; zero stays zero.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self
            .field
            .inv(self.leading_coeff())
            .expect("nonzero leading coefficient");
        self.scale(inv)
    }

    /// Monic gcd; `gcd(f, 0) = monic(f)`.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(f.from_int(i as i64), c))
            .collect();
        Self::new(f, coeffs)
    }

    pub fn eval(&self, x: Fe) -> Fe {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(Fe::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// True when every exponent with nonzero coefficient is a multiple of p.
    pub fn is_frobenius_image(&self) -> bool {
        let p = self.field.characteristic() as usize;
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| c.is_zero() || i % p == 0)
    }

    /// For `self = g(t^p)`, returns the polynomial whose p-th power is `self`,
    /// i.e. `sum c_(ip)^(1/p) t^i`. `None` if `self` is not in `k[t^p]`.
    pub fn pth_root(&self) -> Option<Self> {
        if !self.is_frobenius_image() {
            return None;
        }
        let f = &self.field;
        let p = f.characteristic() as usize;
        let coeffs = self
            .coeffs
            .iter()
            .step_by(p)
            .map(|&c| f.pth_root(c))
            .collect();
        Some(Self::new(f, coeffs))
    }

    /// Radical: product of the distinct monic irreducible factors.
    pub fn squarefree_part(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(self.radical())
    }

    fn radical(&self) -> Self {
        let f = &self.field;
        if self.degree() == Some(0) {
            return Self::one(f);
        }
        let d = self.derivative();
        if d.is_zero() {
            // self = g(t^p) = (g^(1/p))^p over a perfect field.
            let root = self.pth_root().expect("zero derivative implies k[t^p]");
            return root.radical();
        }
        let g = self.gcd(&d);
        // self / g carries every root whose multiplicity is prime to p; roots with
        // multiplicity divisible by p survive only in g.
        let head = self.exact_div(&g).unwrap().unwrap().monic();
        let mut rest = g;
        loop {
            let shared = rest.gcd(&head);
            if shared.degree() == Some(0) {
                break;
            }
            rest = rest.exact_div(&shared).unwrap().unwrap();
        }
        if rest.degree() == Some(0) {
            return head;
        }
        head.mul(&rest.radical()).monic()
    }

    /// Number of distinct roots in the algebraic closure.
    pub fn distinct_root_count(&self) -> Result<usize> {
        Ok(self.squarefree_part()?.degree().unwrap_or(0))
    }

    /// True iff the polynomial has no repeated roots (`gcd(f, f') = 1`).
    pub fn is_separable(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// `f(lambda t + c)`.
    pub fn compose_affine(&self, lambda: Fe, c: Fe) -> Result<Self> {
        let f = &self.field;
        if lambda.is_zero() {
            return Err(Error::ZeroScale);
        }
        let inner = Self::linear(f, c, lambda);
        let mut acc = Self::zero(f);
        for &coef in self.coeffs.iter().rev() {
            acc = acc.mul(&inner).add(&Self::constant(f, coef));
        }
        Ok(acc)
    }

    /// General composition `self(inner(t))`.
    pub fn compose(&self, inner: &Self) -> Self {
        let f = &self.field;
        let mut acc = Self::zero(f);
        for &coef in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&Self::constant(f, coef));
        }
        acc
    }

    /// Lagrange interpolation through `(xs[i], ys[i])`; nodes must be distinct.
    pub fn interpolate(field: &GaloisField, xs: &[Fe], ys: &[Fe]) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::InvalidInput("node and value counts differ".into()));
        }
        let f = field;
        let mut acc = Self::zero(f);
        for (i, (&xi, &yi)) in xs.iter().zip(ys).enumerate() {
            let mut basis = Self::one(f);
            let mut denom = Fe::ONE;
            for (j, &xj) in xs.iter().enumerate() {
                if j != i {
                    basis = basis.mul(&Self::linear(f, f.neg(xj), Fe::ONE));
                    denom = f.mul(denom, f.sub(xi, xj));
                }
            }
            acc = acc.add(&basis.scale(f.div(yi, denom)?));
        }
        Ok(acc)
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, mut e: u128, modulus: &Self) -> Result<Self> {
        let f = &self.field;
        let mut result = Self::one(f).rem(modulus)?;
        let mut base = self.rem(modulus)?;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).rem(modulus)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(modulus)?;
            }
        }
        Ok(result)
    }

    /// Roots by evaluating at every field element; refuses large fields.
    pub fn roots_exhaustive(&self) -> Result<Vec<Fe>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let q = self.field.order();
        if q > EXHAUSTIVE_ROOT_LIMIT {
            return Err(Error::FieldTooLarge(q));
        }
        Ok(self
            .field
            .elements()
            .filter(|&x| self.eval(x).is_zero())
            .collect())
    }

    /// Distinct roots lying in the base field, sorted by encoding.
    ///
    /// Small fields are searched exhaustively. Larger ones first isolate the split
    /// part `gcd(f, t^q - t)` and then split it by random equal-degree splitting.
    pub fn roots_in_field(&self) -> Result<Vec<Fe>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let q = self.field.order();
        if q <= EXHAUSTIVE_ROOT_LIMIT {
            return self.roots_exhaustive();
        }
        let f = &self.field;
        let t = Self::t(f);
        let monic = self.monic();
        if monic.degree() == Some(0) {
            return Ok(Vec::new());
        }
        let tq = t.pow_mod(q as u128, &monic)?;
        let split = monic.gcd(&tq.sub(&t));
        let mut roots = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0f_2007);
        split_linear(&split, &mut rng, &mut roots);
        roots.sort();
        Ok(roots)
    }
}

/// Splits a monic product of distinct linear factors into its roots.
fn split_linear<R: Rng>(g: &UniPoly, rng: &mut R, out: &mut Vec<Fe>) {
    let f = g.field();
    match g.degree() {
        None | Some(0) => return,
        Some(1) => {
            out.push(f.neg(g.coeff(0)));
            return;
        }
        _ => {}
    }
    let q = f.order();
    let p = f.characteristic();
    loop {
        let a = f.sample_nonzero(rng);
        let h = if p == 2 {
            // Trace map: sum_{i<k} (a t)^(2^i) mod g.
            let mut acc = UniPoly::linear(f, Fe::ZERO, a).rem(g).unwrap();
            let mut term = acc.clone();
            for _ in 1..f.degree() {
                term = term.mul(&term).rem(g).unwrap();
                acc = acc.add(&term);
            }
            acc
        } else {
            UniPoly::linear(f, a, Fe::ONE)
                .pow_mod(((q - 1) / 2) as u128, g)
                .unwrap()
                .sub(&UniPoly::one(f))
        };
        let d = g.gcd(&h);
        let dd = d.degree().unwrap_or(0);
        if dd > 0 && Some(dd) < g.degree() {
            let other = g.exact_div(&d).unwrap().unwrap().monic();
            split_linear(&d, rng, out);
            split_linear(&other, rng, out);
            return;
        }
    }
}
