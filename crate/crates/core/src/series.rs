//! Truncated Laurent series in a local parameter `t` with absolute
//! precision tracking.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};
use crate::poly::{BiPoly, UniPoly};

/// Precision of an exact series.
pub const EXACT: i64 = i64::MAX / 4;

/// `sum_{i} coeffs[i] t^{start + i} + O(t^prec)`.
#[derive(Clone)]
pub struct Laurent {
    ctx: Arc<FieldCtx>,
    start: i64,
    coeffs: Vec<FieldElem>,
    prec: i64,
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .take(6)
            .map(|(i, &c)| format!("{}*t^{}", self.ctx.format(c), self.start + i as i64))
            .collect();
        if self.prec >= EXACT {
            write!(f, "{}", terms.join(" + "))
        } else {
            write!(f, "{} + O(t^{})", terms.join(" + "), self.prec)
        }
    }
}

impl Laurent {
    pub fn new(ctx: &Arc<FieldCtx>, start: i64, coeffs: Vec<FieldElem>, prec: i64) -> Laurent {
        let mut s = Laurent {
            ctx: ctx.clone(),
            start,
            coeffs,
            prec,
        };
        s.normalize();
        s
    }

    pub fn zero(ctx: &Arc<FieldCtx>, prec: i64) -> Laurent {
        Laurent::new(ctx, 0, Vec::new(), prec)
    }

    pub fn constant(ctx: &Arc<FieldCtx>, c: FieldElem) -> Laurent {
        Laurent::new(ctx, 0, vec![c], EXACT)
    }

    /// `c t^n`, exact.
    pub fn monomial(ctx: &Arc<FieldCtx>, c: FieldElem, n: i64) -> Laurent {
        Laurent::new(ctx, n, vec![c], EXACT)
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => {
                self.coeffs.clear();
                self.start = 0;
            }
            Some(i) => {
                self.coeffs.drain(..i);
                self.start += i as i64;
            }
        }
        if self.prec < EXACT {
            let keep = (self.prec - self.start).max(0) as usize;
            self.coeffs.truncate(keep);
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.start = 0;
        }
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec >= EXACT
    }

    /// Order of the series if some coefficient below the precision is nonzero.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.start)
    }

    /// Lower bound on the order: the valuation, or the precision if the
    /// series is zero to the known precision.
    fn order_bound(&self) -> i64 {
        self.valuation().unwrap_or(self.prec)
    }

    pub fn leading_coeff(&self) -> Option<FieldElem> {
        self.coeffs.first().copied()
    }

    pub fn coeff(&self, n: i64) -> FieldElem {
        if n < self.start {
            return FieldElem::ZERO;
        }
        self.coeffs
            .get((n - self.start) as usize)
            .copied()
            .unwrap_or(FieldElem::ZERO)
    }

    /// True when the series is zero to its known precision.
    pub fn is_zero_to_precision(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn truncate(&self, prec: i64) -> Laurent {
        Laurent::new(
            &self.ctx,
            self.start,
            self.coeffs.clone(),
            self.prec.min(prec),
        )
    }

    pub fn add(&self, o: &Laurent) -> Laurent {
        let f = &self.ctx;
        let prec = self.prec.min(o.prec);
        if self.coeffs.is_empty() {
            return o.truncate(prec);
        }
        if o.coeffs.is_empty() {
            return self.truncate(prec);
        }
        let start = self.start.min(o.start);
        let end_a = self.start + self.coeffs.len() as i64;
        let end_b = o.start + o.coeffs.len() as i64;
        let end = end_a.max(end_b).min(prec);
        let coeffs = (start..end.max(start))
            .map(|n| f.add(self.coeff(n), o.coeff(n)))
            .collect();
        Laurent::new(f, start, coeffs, prec)
    }

    pub fn neg(&self) -> Laurent {
        let f = &self.ctx;
        Laurent::new(
            f,
            self.start,
            self.coeffs.iter().map(|&c| f.neg(c)).collect(),
            self.prec,
        )
    }

    pub fn sub(&self, o: &Laurent) -> Laurent {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: FieldElem) -> Laurent {
        let f = &self.ctx;
        let prec = if c.is_zero() { EXACT } else { self.prec };
        Laurent::new(
            f,
            self.start,
            self.coeffs.iter().map(|&v| f.mul(v, c)).collect(),
            prec,
        )
    }

    pub fn mul(&self, o: &Laurent) -> Laurent {
        let f = &self.ctx;
        let (va, vb) = (self.order_bound(), o.order_bound());
        let prec = sat_add(va, o.prec).min(sat_add(vb, self.prec));
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return Laurent::zero(f, prec);
        }
        let start = self.start + o.start;
        let full = self.coeffs.len() + o.coeffs.len() - 1;
        let len = if prec >= EXACT {
            full
        } else {
            ((prec - start).max(0) as usize).min(full)
        };
        let mut coeffs = vec![FieldElem::ZERO; len];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= len {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                coeffs[i + j] = f.add(coeffs[i + j], f.mul(a, b));
            }
        }
        Laurent::new(f, start, coeffs, prec)
    }

    pub fn pow(&self, mut e: u64) -> Laurent {
        let mut base = self.clone();
        let mut acc = Laurent::constant(&self.ctx, FieldElem::ONE);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Substitutes `t -> t^k` (k >= 1).
    pub fn inflate(&self, k: i64) -> Laurent {
        let f = &self.ctx;
        let mut coeffs = vec![FieldElem::ZERO; (self.coeffs.len().max(1) - 1) * k as usize + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * k as usize] = c;
        }
        if self.coeffs.is_empty() {
            coeffs.clear();
        }
        let prec = if self.prec >= EXACT {
            EXACT
        } else {
            self.prec * k
        };
        Laurent::new(f, self.start * k, coeffs, prec)
    }

    /// Multiplicative inverse with `rel` terms of relative precision when
    /// `self` is exact.
    pub fn inv(&self, rel: usize) -> Result<Laurent> {
        let v = self.valuation().ok_or(Error::Precision(rel))?;
        let f = &self.ctx;
        let rel = if self.prec >= EXACT {
            rel
        } else {
            (self.prec - v) as usize
        };
        let u0 = f.inv(self.coeffs[0])?;
        let mut w = vec![FieldElem::ZERO; rel];
        if rel > 0 {
            w[0] = u0;
        }
        for k in 1..rel {
            let mut s = FieldElem::ZERO;
            for i in 1..=k.min(self.coeffs.len() - 1) {
                s = f.add(s, f.mul(self.coeffs[i], w[k - i]));
            }
            w[k] = f.neg(f.mul(s, u0));
        }
        Ok(Laurent::new(f, -v, w, -v + rel as i64))
    }

    /// Evaluates a univariate polynomial at this series.
    pub fn eval_poly(&self, p: &UniPoly) -> Laurent {
        let f = &self.ctx;
        p.coeffs()
            .iter()
            .rev()
            .fold(Laurent::zero(f, EXACT), |acc, &c| {
                acc.mul(self).add(&Laurent::constant(f, c))
            })
    }
}

/// `sum c x^i y^j` at the series `(x, y)`.
pub fn eval_bipoly(p: &BiPoly, x: &Laurent, y: &Laurent) -> Laurent {
    let f = p.ctx();
    let mut out = Laurent::zero(f, EXACT);
    // Horner in x over polynomials in y
    for coeff in p.coeffs_in(crate::poly::Var::X).iter().rev() {
        out = out.mul(x).add(&y.eval_poly(coeff));
    }
    out
}

fn sat_add(a: i64, b: i64) -> i64 {
    if a >= EXACT || b >= EXACT {
        EXACT
    } else {
        (a + b).min(EXACT)
    }
}

/// `e`-th root `w` of a series `a` with `a(0) = c^e`, normalized by `w(0) = c`.
/// `e` must be invertible in the field. The result has `n` terms.
pub fn nth_root(a: &Laurent, e: u64, c: FieldElem, n: usize) -> Result<Laurent> {
    let f = a.ctx().clone();
    if a.valuation() != Some(0) || f.pow(c, e as u128) != a.coeff(0) {
        return Err(Error::Internal("root of a non-unit series".into()));
    }
    // (w + d t^k)^e = w^e + e c^{e-1} d t^k + ...
    let denom = f.mul(f.pow(c, (e - 1) as u128), f.from_int(e as i64));
    let mut w = vec![c];
    for k in 1..n {
        let cur = Laurent::new(&f, 0, w.clone(), k as i64 + 1).pow(e);
        let resid = f.sub(a.coeff(k as i64), cur.coeff(k as i64));
        w.push(f.div(resid, denom)?);
    }
    Ok(Laurent::new(&f, 0, w, n as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;

    #[test]
    fn product_precision_is_tracked() {
        let f = build_field(5, 1).unwrap();
        let a = Laurent::new(&f, -2, vec![f.one(), f.one()], 3);
        let b = Laurent::new(&f, 1, vec![f.from_int(2)], 4);
        let c = a.mul(&b);
        assert_eq!(c.valuation(), Some(-1));
        assert_eq!(c.precision(), 2);
    }

    #[test]
    fn inverse_round_trip() {
        let f = build_field(7, 1).unwrap();
        let a = Laurent::new(&f, 1, vec![f.from_int(3), f.one(), f.from_int(5)], EXACT);
        let inv = a.inv(10).unwrap();
        let prod = a.mul(&inv);
        assert_eq!(prod.valuation(), Some(0));
        assert_eq!(prod.coeff(0), f.one());
        for k in 1..9 {
            assert!(prod.coeff(k).is_zero());
        }
    }

    #[test]
    fn nth_root_recovers_power() {
        let f = build_field(3, 2).unwrap();
        let base = Laurent::new(&f, 0, vec![f.one(), f.generator(), f.from_int(2)], EXACT);
        let a = base.pow(4);
        let r = nth_root(&a, 4, f.one(), 12).unwrap();
        let back = r.pow(4);
        for k in 0..12 {
            assert_eq!(back.coeff(k), a.coeff(k));
        }
    }
}
