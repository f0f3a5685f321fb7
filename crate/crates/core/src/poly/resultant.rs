//! Sylvester resultants (fraction-free Bareiss elimination), Euclidean
//! resultants over a field, and squarefree parts.

use super::{BiPoly, UniPoly, Var};
use crate::error::{Error, Result};
use crate::field::FieldElem;

/// Integral domain with exact division, enough for Bareiss elimination.
pub trait ExactRing: Clone {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn add_elem(&self, o: &Self) -> Self;
    fn sub_elem(&self, o: &Self) -> Self;
    fn mul_elem(&self, o: &Self) -> Self;
    fn neg_elem(&self) -> Self;
    fn div_exact(&self, o: &Self) -> Result<Self>;
}

impl ExactRing for UniPoly {
    fn zero_like(&self) -> Self {
        UniPoly::zero(self.ctx())
    }
    fn one_like(&self) -> Self {
        UniPoly::one(self.ctx())
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_elem(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_elem(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_elem(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_elem(&self) -> Self {
        -self
    }
    fn div_exact(&self, o: &Self) -> Result<Self> {
        self.exact_div(o)
    }
}

impl ExactRing for BiPoly {
    fn zero_like(&self) -> Self {
        BiPoly::zero(self.ctx())
    }
    fn one_like(&self) -> Self {
        BiPoly::one(self.ctx())
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_elem(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_elem(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_elem(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_elem(&self) -> Self {
        -self
    }
    fn div_exact(&self, o: &Self) -> Result<Self> {
        self.exact_div(o)
    }
}

/// Determinant of a square matrix by fraction-free Bareiss elimination.
pub fn bareiss_det<R: ExactRing>(mut m: Vec<Vec<R>>) -> Result<R> {
    let n = m.len();
    assert!(
        n > 0 && m.iter().all(|r| r.len() == n),
        "square matrix required"
    );
    let mut negate = false;
    let mut prev = m[0][0].one_like();
    for k in 0..n - 1 {
        if m[k][k].is_zero_elem() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero_elem()) else {
                return Ok(m[0][0].zero_like());
            };
            m.swap(k, r);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j]
                    .mul_elem(&m[k][k])
                    .sub_elem(&m[i][k].mul_elem(&m[k][j]));
                m[i][j] = num.div_exact(&prev)?;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    Ok(if negate { d.neg_elem() } else { d })
}

/// Sylvester matrix of `a`, `b` given by coefficient lists (lowest first).
pub fn sylvester<R: ExactRing>(a: &[R], b: &[R]) -> Vec<Vec<R>> {
    let da = a.len() - 1;
    let db = b.len() - 1;
    let n = da + db;
    let zero = a[0].zero_like();
    let mut m = vec![vec![zero; n]; n];
    for r in 0..db {
        for (i, c) in a.iter().rev().enumerate() {
            m[r][r + i] = c.clone();
        }
    }
    for r in 0..da {
        for (i, c) in b.iter().rev().enumerate() {
            m[db + r][r + i] = c.clone();
        }
    }
    m
}

/// Resultant of two polynomials over `R` given as coefficient lists.
pub fn resultant_generic<R: ExactRing>(a: &[R], b: &[R]) -> Result<R> {
    let trim = |v: &[R]| {
        let mut v = v.to_vec();
        while v.last().is_some_and(|c| c.is_zero_elem()) {
            v.pop();
        }
        v
    };
    let (a, b) = (trim(a), trim(b));
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::Degree(
            "resultant needs positive degree in the eliminated variable".into(),
        ));
    }
    bareiss_det(sylvester(&a, &b))
}

/// `Res_var(f, g)` as a polynomial in the remaining variable.
pub fn resultant(f: &BiPoly, g: &BiPoly, eliminate: Var) -> Result<UniPoly> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    resultant_generic(&f.coeffs_in(eliminate), &g.coeffs_in(eliminate))
}

/// Resultant over a field via the Euclidean remainder sequence. Uses the
/// convention `Res(a, b) = lc(a)^deg(b) * prod b(alpha)` over roots of `a`.
pub fn resultant_euclid(a: &UniPoly, b: &UniPoly) -> FieldElem {
    let f = a.ctx().clone();
    if a.is_zero() || b.is_zero() {
        return FieldElem::ZERO;
    }
    let mut a = a.clone();
    let mut b = b.clone();
    let mut acc = FieldElem::ONE;
    loop {
        let da = a.deg() as u128;
        let db = b.deg() as u128;
        if db == 0 {
            return f.mul(acc, f.pow(b.lc(), da));
        }
        if da == 0 {
            return f.mul(acc, f.pow(a.lc(), db));
        }
        let r = a.rem(&b).expect("nonzero divisor");
        if r.is_zero() {
            return FieldElem::ZERO;
        }
        let dr = r.deg() as u128;
        if (da * db) % 2 == 1 {
            acc = f.neg(acc);
        }
        acc = f.mul(acc, f.pow(b.lc(), da - dr));
        a = b;
        b = r;
    }
}

/// Coefficient-wise `p`-th root of a polynomial in `x^p`.
fn pth_root(f: &UniPoly) -> UniPoly {
    let ctx = f.ctx();
    let p = ctx.p() as usize;
    let root_exp = (ctx.p() as u128).pow(ctx.k() - 1);
    let coeffs = f
        .coeffs()
        .iter()
        .step_by(p)
        .map(|&c| ctx.pow(c, root_exp))
        .collect();
    UniPoly::new(ctx, coeffs)
}

/// Product of the distinct monic irreducible factors of `f`.
pub fn squarefree_part(f: &UniPoly) -> Result<UniPoly> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let f = f.monic();
    if f.is_constant() {
        return Ok(UniPoly::one(f.ctx()));
    }
    let d = f.derivative();
    if d.is_zero() {
        return squarefree_part(&pth_root(&f));
    }
    let g = f.gcd(&d);
    let w = f.exact_div(&g)?;
    let mut h = g;
    loop {
        let c = h.gcd(&w);
        if c.is_constant() {
            break;
        }
        h = h.exact_div(&c)?;
    }
    let rest = if h.is_constant() {
        UniPoly::one(f.ctx())
    } else {
        squarefree_part(&pth_root(&h))?
    };
    Ok((&w * &rest).monic())
}
