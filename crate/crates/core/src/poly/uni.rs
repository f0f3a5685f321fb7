use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem, FieldHom};

/// Dense univariate polynomial, lowest degree first, no trailing zeros.
#[derive(Clone)]
pub struct UniPoly {
    ctx: Arc<FieldCtx>,
    coeffs: Vec<FieldElem>,
}

impl PartialEq for UniPoly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Eq for UniPoly {}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format("x"))
    }
}

impl UniPoly {
    pub fn new(ctx: &Arc<FieldCtx>, mut coeffs: Vec<FieldElem>) -> UniPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly {
            ctx: ctx.clone(),
            coeffs,
        }
    }

    pub fn zero(ctx: &Arc<FieldCtx>) -> UniPoly {
        UniPoly::new(ctx, Vec::new())
    }

    pub fn one(ctx: &Arc<FieldCtx>) -> UniPoly {
        UniPoly::constant(ctx, FieldElem::ONE)
    }

    pub fn constant(ctx: &Arc<FieldCtx>, c: FieldElem) -> UniPoly {
        UniPoly::new(ctx, vec![c])
    }

    /// `c * x^n`
    pub fn monomial(ctx: &Arc<FieldCtx>, c: FieldElem, n: usize) -> UniPoly {
        let mut v = vec![FieldElem::ZERO; n + 1];
        v[n] = c;
        UniPoly::new(ctx, v)
    }

    pub fn x(ctx: &Arc<FieldCtx>) -> UniPoly {
        UniPoly::monomial(ctx, FieldElem::ONE, 1)
    }

    /// Prime-field integer coefficients, lowest degree first.
    pub fn from_ints(ctx: &Arc<FieldCtx>, c: &[i64]) -> UniPoly {
        UniPoly::new(ctx, c.iter().map(|&v| ctx.from_int(v)).collect())
    }

    /// `x - a`
    pub fn linear(ctx: &Arc<FieldCtx>, a: FieldElem) -> UniPoly {
        UniPoly::new(ctx, vec![ctx.neg(a), FieldElem::ONE])
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).copied().unwrap_or(FieldElem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with `deg 0 = -1`.
    pub fn deg(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn lc(&self) -> FieldElem {
        self.coeffs.last().copied().unwrap_or(FieldElem::ZERO)
    }

    /// Order of vanishing at 0; `None` for the zero polynomial.
    pub fn low_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn eval(&self, a: FieldElem) -> FieldElem {
        let f = &self.ctx;
        self.coeffs
            .iter()
            .rev()
            .fold(FieldElem::ZERO, |acc, &c| f.add(f.mul(acc, a), c))
    }

    pub fn scale(&self, c: FieldElem) -> UniPoly {
        let f = &self.ctx;
        UniPoly::new(
            &self.ctx,
            self.coeffs.iter().map(|&a| f.mul(a, c)).collect(),
        )
    }

    pub fn shift(&self, n: usize) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![FieldElem::ZERO; n];
        v.extend_from_slice(&self.coeffs);
        UniPoly::new(&self.ctx, v)
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self
            .ctx
            .inv(self.lc())
            .expect("nonzero leading coefficient");
        self.scale(inv)
    }

    pub fn derivative(&self) -> UniPoly {
        let f = &self.ctx;
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(c, f.from_int(i as i64)))
            .collect();
        UniPoly::new(&self.ctx, v)
    }

    pub fn pow(&self, mut e: u64) -> UniPoly {
        let mut base = self.clone();
        let mut acc = UniPoly::one(&self.ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn div_rem(&self, d: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = &self.ctx;
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return Ok((UniPoly::zero(&self.ctx), self.clone()));
        }
        let inv = f.inv(d.lc())?;
        let mut r = self.coeffs.clone();
        let mut q = vec![FieldElem::ZERO; r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = f.mul(r[i + dd], inv);
            q[i] = c;
            if c.is_zero() {
                continue;
            }
            for (j, &dj) in d.coeffs.iter().enumerate() {
                r[i + j] = f.sub(r[i + j], f.mul(c, dj));
            }
        }
        r.truncate(dd);
        Ok((UniPoly::new(&self.ctx, q), UniPoly::new(&self.ctx, r)))
    }

    pub fn rem(&self, d: &UniPoly) -> Result<UniPoly> {
        Ok(self.div_rem(d)?.1)
    }

    /// Division that must leave no remainder.
    pub fn exact_div(&self, d: &UniPoly) -> Result<UniPoly> {
        let (q, r) = self.div_rem(d)?;
        if !r.is_zero() {
            return Err(Error::Internal(format!(
                "{self:?} is not divisible by {d:?}"
            )));
        }
        Ok(q)
    }

    pub fn divides(&self, other: &UniPoly) -> bool {
        other
            .div_rem(self)
            .map(|(_, r)| r.is_zero())
            .unwrap_or(false)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `g = s*self + t*other`, `g` monic.
    pub fn ext_gcd(&self, other: &UniPoly) -> (UniPoly, UniPoly, UniPoly) {
        let ctx = &self.ctx;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (UniPoly::one(ctx), UniPoly::zero(ctx));
        let (mut t0, mut t1) = (UniPoly::zero(ctx), UniPoly::one(ctx));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1).expect("nonzero divisor");
            let s = &s0 - &(&q * &s1);
            let t = &t0 - &(&q * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = ctx.inv(r0.lc()).expect("nonzero");
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn mulmod(&self, other: &UniPoly, m: &UniPoly) -> UniPoly {
        (self * other).rem(m).expect("nonzero modulus")
    }

    pub fn powmod(&self, mut e: u128, m: &UniPoly) -> UniPoly {
        let mut base = self.rem(m).expect("nonzero modulus");
        let mut acc = UniPoly::one(&self.ctx).rem(m).expect("nonzero modulus");
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(&base, m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mulmod(&base, m);
            }
        }
        acc
    }

    /// `self(g(x))`
    pub fn compose(&self, g: &UniPoly) -> UniPoly {
        self.coeffs
            .iter()
            .rev()
            .fold(UniPoly::zero(&self.ctx), |acc, &c| {
                &(&acc * g) + &UniPoly::constant(&self.ctx, c)
            })
    }

    /// Pushes coefficients through a field homomorphism.
    pub fn map_coeffs(&self, hom: &FieldHom) -> UniPoly {
        UniPoly::new(
            hom.dst(),
            self.coeffs.iter().map(|&c| hom.apply(c)).collect(),
        )
    }

    /// Reinterpret over another context with the same encoding (caller
    /// guarantees compatibility, e.g. identical fields).
    pub fn with_ctx(&self, ctx: &Arc<FieldCtx>) -> UniPoly {
        UniPoly::new(ctx, self.coeffs.clone())
    }

    pub fn format(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let f = &self.ctx;
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = f.format(c);
            let cs = if cs.contains('+') {
                format!("({cs})")
            } else {
                cs
            };
            terms.push(match (i, cs.as_str()) {
                (0, _) => cs.clone(),
                (1, "1") => var.to_string(),
                (1, _) => format!("{cs}*{var}"),
                (_, "1") => format!("{var}^{i}"),
                _ => format!("{cs}*{var}^{i}"),
            });
        }
        terms.join(" + ")
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, o: &UniPoly) -> UniPoly {
        let f = &self.ctx;
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n).map(|i| f.add(self.coeff(i), o.coeff(i))).collect();
        UniPoly::new(&self.ctx, v)
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, o: &UniPoly) -> UniPoly {
        let f = &self.ctx;
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n).map(|i| f.sub(self.coeff(i), o.coeff(i))).collect();
        UniPoly::new(&self.ctx, v)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        let f = &self.ctx;
        UniPoly::new(&self.ctx, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero(&self.ctx);
        }
        let f = &self.ctx;
        let mut v = vec![FieldElem::ZERO; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                v[i + j] = f.add(v[i + j], f.mul(a, b));
            }
        }
        UniPoly::new(&self.ctx, v)
    }
}

macro_rules! owned_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                &self + &o
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                &self - &o
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, o: $t) -> $t {
                &self * &o
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}

pub(crate) use owned_ops;

owned_ops!(UniPoly);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;

    #[test]
    fn division_identity() {
        let f = build_field(5, 1).unwrap();
        let a = UniPoly::from_ints(&f, &[1, 2, 3, 4, 1]);
        let b = UniPoly::from_ints(&f, &[2, 0, 1]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.deg() < b.deg());
    }

    #[test]
    fn ext_gcd_bezout() {
        let f = build_field(7, 1).unwrap();
        let a = &UniPoly::from_ints(&f, &[1, 1]) * &UniPoly::from_ints(&f, &[3, 0, 1]);
        let b = &UniPoly::from_ints(&f, &[1, 1]) * &UniPoly::from_ints(&f, &[2, 5]);
        let (g, s, t) = a.ext_gcd(&b);
        assert_eq!(g, UniPoly::from_ints(&f, &[1, 1]));
        assert_eq!(&(&s * &a) + &(&t * &b), g);
    }

    #[test]
    fn frobenius_on_polynomials() {
        let f = build_field(3, 2).unwrap();
        let a = UniPoly::new(&f, vec![f.generator(), f.one(), f.from_int(2)]);
        let cubed = a.pow(3);
        let expected = UniPoly::new(
            &f,
            vec![
                f.pow(f.generator(), 3),
                f.zero(),
                f.zero(),
                f.one(),
                f.zero(),
                f.zero(),
                f.from_int(2),
            ],
        );
        assert_eq!(cubed, expected);
    }
}
