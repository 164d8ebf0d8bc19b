//! Exact arithmetic in GF(p^k).
//!
//! Elements are stored as their base-p encoding `N = sum c_i p^i`, where `c_i` are
//! the power-basis coordinates modulo the field's defining polynomial. The encoding
//! doubles as the textual/serialized form, so `Fe` is a plain `Copy` integer and the
//! field object carries all structure. Fields with at most [`TABLE_LIMIT`] elements
//! precompute exp/log/Zech tables; larger ones fall back to coordinate arithmetic.

mod prime_poly;

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Largest field order for which log tables are built.
pub const TABLE_LIMIT: u64 = 1 << 20;
/// Largest supported characteristic.
pub const MAX_CHARACTERISTIC: u64 = 101;
/// Largest supported extension degree.
pub const MAX_DEGREE: usize = 32;

/// A field element in base-p encoding. Only meaningful together with its field.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fe(pub(crate) u64);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    /// The base-p integer encoding.
    pub fn encoding(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
    /// `zech[n] = log(1 + g^n)`, or `u32::MAX` when `1 + g^n = 0`.
    zech: Vec<u32>,
    /// Multiplier taking `log x` to `log x^(1/p)` modulo q - 1.
    root_mult: u64,
}

struct FieldInner {
    p: u64,
    k: usize,
    q: u64,
    seed: u64,
    modulus: Vec<u64>,
    tables: Option<Tables>,
}

/// Descriptor of GF(p^k). Cheap to clone; all clones share the same tables.
#[derive(Clone)]
pub struct GaloisField(Arc<FieldInner>);

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for GaloisField {}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.header())
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn inv_mod_u64(a: u64, m: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    old_s.rem_euclid(m as i128) as u64
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

impl GaloisField {
    /// Builds GF(p^k) with a seeded, deterministic irreducible modulus.
    ///
    /// For k = 1 the modulus is `t` and the field is Z/p with the usual residues.
    pub fn new(p: u64, k: usize, seed: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > MAX_CHARACTERISTIC || k == 0 || k > MAX_DEGREE {
            return Err(Error::Overflow { p, k });
        }
        let q = (p as u128).checked_pow(k as u32).filter(|&q| q <= 1u128 << 63);
        let q = match q {
            Some(q) => q as u64,
            None => return Err(Error::Overflow { p, k }),
        };
        let modulus = if k == 1 {
            vec![0, 1]
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            loop {
                let mut f: Vec<u64> = (0..k).map(|_| rng.random_range(0..p)).collect();
                if f[0] == 0 {
                    continue;
                }
                f.push(1);
                if prime_poly::is_irreducible(&f, p) {
                    break f;
                }
            }
        };
        let mut inner = FieldInner {
            p,
            k,
            q,
            seed,
            modulus,
            tables: None,
        };
        if q <= TABLE_LIMIT {
            inner.tables = Some(build_tables(&inner));
        }
        Ok(GaloisField(Arc::new(inner)))
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    pub fn degree(&self) -> usize {
        self.0.k
    }

    pub fn order(&self) -> u64 {
        self.0.q
    }

    pub fn seed(&self) -> u64 {
        self.0.seed
    }

    /// Coefficients c0..ck of the monic defining polynomial.
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    /// `GF(p^k);modulus=c0,...,ck`
    pub fn header(&self) -> String {
        let coeffs: Vec<String> = self.0.modulus.iter().map(|c| c.to_string()).collect();
        format!("GF({}^{});modulus={}", self.0.p, self.0.k, coeffs.join(","))
    }

    pub fn has_tables(&self) -> bool {
        self.0.tables.is_some()
    }

    /// Parses a base-p encoding, rejecting values outside [0, q).
    pub fn element(&self, encoding: u64) -> Result<Fe> {
        if encoding < self.0.q {
            Ok(Fe(encoding))
        } else {
            Err(Error::InvalidInput(format!(
                "element encoding {encoding} out of range for {}",
                self.header()
            )))
        }
    }

    /// Image of an integer under Z -> Z/p -> GF(p^k).
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.0.p as i64) as u64)
    }

    /// Power-basis coordinates (length k).
    pub fn coords(&self, x: Fe) -> Vec<u64> {
        let mut out = vec![0u64; self.0.k];
        let mut n = x.0;
        for c in out.iter_mut() {
            *c = n % self.0.p;
            n /= self.0.p;
        }
        out
    }

    pub fn from_coords(&self, coords: &[u64]) -> Result<Fe> {
        if coords.len() != self.0.k || coords.iter().any(|&c| c >= self.0.p) {
            return Err(Error::InvalidInput("bad coordinate vector".into()));
        }
        Ok(Fe(self.encode(coords)))
    }

    fn encode(&self, digits: &[u64]) -> u64 {
        digits.iter().rev().fold(0u64, |acc, &d| acc * self.0.p + d)
    }

    fn decode_into(&self, mut n: u64, out: &mut [u64]) {
        let p = self.0.p;
        if p == 2 {
            for (i, c) in out.iter_mut().enumerate() {
                *c = (n >> i) & 1;
            }
            return;
        }
        for c in out.iter_mut() {
            *c = n % p;
            n /= p;
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.0.q).map(Fe)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.0.p == 2 {
            return Fe(a.0 ^ b.0);
        }
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        if let Some(t) = &self.0.tables {
            let n = self.0.q - 1;
            let la = t.log[a.0 as usize] as u64;
            let lb = t.log[b.0 as usize] as u64;
            let diff = (lb + n - la) % n;
            let z = t.zech[diff as usize];
            if z == u32::MAX {
                return Fe::ZERO;
            }
            return Fe(t.exp[((la + z as u64) % n) as usize] as u64);
        }
        self.add_digits(a, b)
    }

    fn add_digits(&self, a: Fe, b: Fe) -> Fe {
        let p = self.0.p;
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u64;
        let mut place = 1u64;
        while x > 0 || y > 0 {
            let d = (x % p + y % p) % p;
            out += d * place;
            x /= p;
            y /= p;
            place = place.wrapping_mul(p);
        }
        Fe(out)
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        if self.0.p == 2 || a.0 == 0 {
            return a;
        }
        if let Some(t) = &self.0.tables {
            let n = self.0.q - 1;
            let la = t.log[a.0 as usize] as u64;
            return Fe(t.exp[((la + n / 2) % n) as usize] as u64);
        }
        let p = self.0.p;
        let mut x = a.0;
        let mut out = 0u64;
        let mut place = 1u64;
        while x > 0 {
            let d = (p - x % p) % p;
            out += d * place;
            x /= p;
            place = place.wrapping_mul(p);
        }
        Fe(out)
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        if let Some(t) = &self.0.tables {
            let n = self.0.q - 1;
            let s = t.log[a.0 as usize] as u64 + t.log[b.0 as usize] as u64;
            return Fe(t.exp[(s % n) as usize] as u64);
        }
        self.mul_digits(a, b)
    }

    fn mul_digits(&self, a: Fe, b: Fe) -> Fe {
        let k = self.0.k;
        let p = self.0.p;
        let mut da = [0u64; MAX_DEGREE];
        let mut db = [0u64; MAX_DEGREE];
        self.decode_into(a.0, &mut da[..k]);
        self.decode_into(b.0, &mut db[..k]);
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..k {
            if da[i] == 0 {
                continue;
            }
            for j in 0..k {
                prod[i + j] += da[i] * db[j];
            }
        }
        for c in prod[..2 * k - 1].iter_mut() {
            *c %= p;
        }
        let m = &self.0.modulus;
        for top in (k..2 * k - 1).rev() {
            let c = prod[top] % p;
            if c == 0 {
                continue;
            }
            for j in 0..k {
                prod[top - k + j] = (prod[top - k + j] + (p - c) * m[j]) % p;
            }
            prod[top] = 0;
        }
        Fe(self.encode(&prod[..k]))
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        if let Some(t) = &self.0.tables {
            let n = self.0.q - 1;
            let la = t.log[a.0 as usize] as u64;
            return Ok(Fe(t.exp[((n - la) % n) as usize] as u64));
        }
        Ok(self.pow(a, self.0.q - 2))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.0 == 0 {
            return Fe::ZERO;
        }
        if let Some(t) = &self.0.tables {
            let n = self.0.q - 1;
            let la = t.log[a.0 as usize] as u64;
            return Fe(t.exp[mul_mod_u64(la, e % n, n) as usize] as u64);
        }
        let mut result = Fe::ONE;
        let mut base = a;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(base, base);
            }
        }
        result
    }

    /// x -> x^p
    pub fn frobenius(&self, a: Fe) -> Fe {
        self.pow(a, self.0.p)
    }

    /// The unique y with y^p = x, namely x^(p^(k-1)).
    pub fn pth_root(&self, a: Fe) -> Fe {
        if a.0 == 0 {
            return a;
        }
        if let Some(t) = &self.0.tables {
            let n = self.0.q - 1;
            let la = t.log[a.0 as usize] as u64;
            return Fe(t.exp[mul_mod_u64(la, t.root_mult, n) as usize] as u64);
        }
        let mut y = a;
        for _ in 1..self.0.k {
            y = self.frobenius(y);
        }
        y
    }

    /// Uniform element.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        Fe(rng.random_range(0..self.0.q))
    }

    pub fn sample_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        Fe(rng.random_range(1..self.0.q))
    }

    /// `n` pairwise-distinct uniform elements (optionally all nonzero), in sampling order.
    pub fn sample_distinct<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        n: usize,
        nonzero: bool,
    ) -> Result<Vec<Fe>> {
        let available = if nonzero { self.0.q - 1 } else { self.0.q };
        if n as u64 > available {
            return Err(Error::NotEnoughElements {
                requested: n as u64,
                available,
            });
        }
        let lo = u64::from(nonzero);
        if (n as u64) * 2 > available {
            // Dense request: partial Fisher-Yates over the whole range.
            let mut pool: Vec<u64> = (lo..self.0.q).collect();
            for i in 0..n {
                let j = rng.random_range(i..pool.len());
                pool.swap(i, j);
            }
            return Ok(pool[..n].iter().map(|&v| Fe(v)).collect());
        }
        let mut seen = HashSet::with_capacity(n);
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let v = rng.random_range(lo..self.0.q);
            if seen.insert(v) {
                out.push(Fe(v));
            }
        }
        Ok(out)
    }

    /// Wraps a raw element together with this field.
    pub fn wrap(&self, value: Fe) -> FieldElement {
        FieldElement {
            field: self.clone(),
            value,
        }
    }
}

fn build_tables(inner: &FieldInner) -> Tables {
    let probe = GaloisField(Arc::new(FieldInner {
        p: inner.p,
        k: inner.k,
        q: inner.q,
        seed: inner.seed,
        modulus: inner.modulus.clone(),
        tables: None,
    }));
    let q = inner.q;
    let n = q - 1;
    let factors = prime_factors(n);
    let generator = (1..q)
        .map(Fe)
        .find(|&g| factors.iter().all(|&r| probe.pow(g, n / r) != Fe::ONE))
        .expect("multiplicative group of a finite field is cyclic");
    let mut exp = Vec::with_capacity(n as usize);
    let mut log = vec![0u32; q as usize];
    let mut x = Fe::ONE;
    for i in 0..n {
        exp.push(x.0 as u32);
        log[x.0 as usize] = i as u32;
        x = probe.mul_digits(x, generator);
    }
    let zech = (0..n)
        .map(|i| {
            let s = if inner.p == 2 {
                Fe(exp[i as usize] as u64 ^ 1)
            } else {
                probe.add_digits(Fe(exp[i as usize] as u64), Fe::ONE)
            };
            if s.0 == 0 {
                u32::MAX
            } else {
                log[s.0 as usize]
            }
        })
        .collect();
    // x^(1/p) = x^(p^-1 mod q-1); gcd(p, q-1) = 1 always.
    let root_mult = if n == 1 { 1 } else { inv_mod_u64(inner.p % n, n) };
    Tables {
        exp,
        log,
        zech,
        root_mult,
    }
}

/// A field element bundled with its field; arithmetic checks that operands agree.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: GaloisField,
    value: Fe,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value.0)
    }
}

impl FieldElement {
    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn value(&self) -> Fe {
        self.value
    }

    pub fn coords(&self) -> Vec<u64> {
        self.field.coords(self.value)
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.field.wrap(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.field.wrap(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.field.wrap(self.field.mul(self.value, other.value)))
    }

    pub fn neg(&self) -> Self {
        self.field.wrap(self.field.neg(self.value))
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(self.field.wrap(self.field.inv(self.value)?))
    }

    pub fn pow(&self, e: u64) -> Self {
        self.field.wrap(self.field.pow(self.value, e))
    }

    pub fn frobenius(&self) -> Self {
        self.field.wrap(self.field.frobenius(self.value))
    }

    pub fn pth_root(&self) -> Self {
        self.field.wrap(self.field.pth_root(self.value))
    }
}
