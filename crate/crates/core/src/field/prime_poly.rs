//! Dense polynomials over the prime field Z/p, used only to pick and test the
//! defining modulus of an extension field. Coefficients are little-endian.

pub(crate) fn trim(f: &mut Vec<u64>) {
    while f.last() == Some(&0) {
        f.pop();
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p is prime, so a^(p-2) is the inverse.
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

/// Remainder of `f` modulo the monic polynomial `g`.
pub(crate) fn rem_monic(mut f: Vec<u64>, g: &[u64], p: u64) -> Vec<u64> {
    let dg = g.len() - 1;
    trim(&mut f);
    while f.len() > dg {
        let top = f.len() - 1;
        let c = f[top];
        if c != 0 {
            let shift = top - dg;
            for (j, &gj) in g.iter().enumerate() {
                f[shift + j] = (f[shift + j] + (p - c) * gj) % p;
            }
        }
        f.pop();
        trim(&mut f);
    }
    f
}

pub(crate) fn mul_mod(a: &[u64], b: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai * bj) % p;
        }
    }
    rem_monic(out, g, p)
}

pub(crate) fn pow_mod(base: &[u64], mut e: u64, g: &[u64], p: u64) -> Vec<u64> {
    let mut result = rem_monic(vec![1], g, p);
    let mut b = rem_monic(base.to_vec(), g, p);
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(&result, &b, g, p);
        }
        e >>= 1;
        if e > 0 {
            b = mul_mod(&b, &b, g, p);
        }
    }
    result
}

pub(crate) fn gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let lc_inv = inv_mod(*b.last().unwrap(), p);
        let monic: Vec<u64> = b.iter().map(|c| c * lc_inv % p).collect();
        let r = rem_monic(a, &monic, p);
        a = monic;
        b = r;
    }
    a
}

/// Ben-Or irreducibility test: a monic `f` of degree k is irreducible over Z/p
/// iff gcd(x^(p^i) - x, f) = 1 for every 1 <= i <= k/2.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let k = f.len() - 1;
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    let x = vec![0, 1];
    let mut xp = x.clone();
    for _ in 1..=k / 2 {
        xp = pow_mod(&xp, p, f, p);
        let mut diff = xp.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        trim(&mut diff);
        let g = gcd(f.to_vec(), diff, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}
