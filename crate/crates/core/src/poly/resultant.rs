use crate::error::{Error, Result};
use crate::field::GaloisField;
use crate::poly::MultiPoly;

/// Univariate polynomial in an elimination variable whose coefficients are
/// multivariate polynomials of a common arity. `coeffs[i]` multiplies `t^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingUniPoly {
    field: GaloisField,
    arity: usize,
    coeffs: Vec<MultiPoly>,
}

impl RingUniPoly {
    pub fn new(field: &GaloisField, arity: usize, mut coeffs: Vec<MultiPoly>) -> Result<Self> {
        if let Some(c) = coeffs.iter().find(|c| c.arity() != arity) {
            return Err(Error::ArityMismatch {
                expected: arity,
                got: c.arity(),
            });
        }
        if coeffs.iter().any(|c| c.field() != field) {
            return Err(Error::MixedFields);
        }
        while coeffs.last().is_some_and(MultiPoly::is_zero) {
            coeffs.pop();
        }
        Ok(RingUniPoly {
            field: field.clone(),
            arity,
            coeffs,
        })
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[MultiPoly] {
        &self.coeffs
    }

    pub fn arity(&self) -> usize {
        self.arity
    }
}

/// Determinant of the Sylvester matrix of `a` and `b` with respect to the
/// elimination variable, by fraction-free (Bareiss) elimination over the
/// coefficient ring.
pub fn sylvester_resultant(a: &RingUniPoly, b: &RingUniPoly) -> Result<MultiPoly> {
    if a.field != b.field {
        return Err(Error::MixedFields);
    }
    if a.arity != b.arity {
        return Err(Error::ArityMismatch {
            expected: a.arity,
            got: b.arity,
        });
    }
    let (m, n) = match (a.degree(), b.degree()) {
        (Some(m), Some(n)) if m >= 1 && n >= 1 => (m, n),
        _ => return Err(Error::DegenerateDegrees),
    };
    let size = m + n;
    let zero = MultiPoly::zero(&a.field, a.arity);
    let mut mat = vec![vec![zero.clone(); size]; size];
    for row in 0..n {
        for (j, c) in a.coeffs.iter().rev().enumerate() {
            mat[row][row + j] = c.clone();
        }
    }
    for row in 0..m {
        for (j, c) in b.coeffs.iter().rev().enumerate() {
            mat[n + row][row + j] = c.clone();
        }
    }
    bareiss_determinant(mat)
}

/// Fraction-free determinant; every division is exact in the coefficient ring.
pub fn bareiss_determinant(mut mat: Vec<Vec<MultiPoly>>) -> Result<MultiPoly> {
    let size = mat.len();
    let field = mat[0][0].field().clone();
    let arity = mat[0][0].arity();
    let mut negate = false;
    let mut prev = MultiPoly::one(&field, arity);
    for k in 0..size {
        if mat[k][k].is_zero() {
            match (k + 1..size).find(|&i| !mat[i][k].is_zero()) {
                Some(i) => {
                    mat.swap(k, i);
                    negate = !negate;
                }
                None => return Ok(MultiPoly::zero(&field, arity)),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let num = mat[i][j].mul(&mat[k][k]).sub(&mat[i][k].mul(&mat[k][j]));
                mat[i][j] = num.exact_div(&prev)?.ok_or_else(|| {
                    Error::identity("bareiss exact division", "nonzero remainder")
                })?;
            }
            mat[i][k] = MultiPoly::zero(&field, arity);
        }
        prev = mat[k][k].clone();
    }
    let det = mat[size - 1][size - 1].clone();
    Ok(if negate { det.neg() } else { det })
}
