use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::uni::owned_ops;
use super::UniPoly;
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem, FieldHom};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
}

impl Var {
    pub fn other(self) -> Var {
        match self {
            Var::X => Var::Y,
            Var::Y => Var::X,
        }
    }
}

/// Sparse bivariate polynomial: `(i, j) -> c` for `c * x^i * y^j`.
#[derive(Clone)]
pub struct BiPoly {
    ctx: Arc<FieldCtx>,
    terms: BTreeMap<(u32, u32), FieldElem>,
}

impl PartialEq for BiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for BiPoly {}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format(("x", "y")))
    }
}

impl BiPoly {
    pub fn zero(ctx: &Arc<FieldCtx>) -> BiPoly {
        BiPoly {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ctx: &Arc<FieldCtx>, c: FieldElem) -> BiPoly {
        BiPoly::monomial(ctx, c, 0, 0)
    }

    pub fn one(ctx: &Arc<FieldCtx>) -> BiPoly {
        BiPoly::constant(ctx, FieldElem::ONE)
    }

    pub fn monomial(ctx: &Arc<FieldCtx>, c: FieldElem, i: u32, j: u32) -> BiPoly {
        let mut p = BiPoly::zero(ctx);
        p.add_term(i, j, c);
        p
    }

    pub fn x(ctx: &Arc<FieldCtx>) -> BiPoly {
        BiPoly::monomial(ctx, FieldElem::ONE, 1, 0)
    }

    pub fn y(ctx: &Arc<FieldCtx>) -> BiPoly {
        BiPoly::monomial(ctx, FieldElem::ONE, 0, 1)
    }

    /// `(coefficient, i, j)` triples with prime-field integer coefficients.
    pub fn from_terms(ctx: &Arc<FieldCtx>, terms: &[(i64, u32, u32)]) -> BiPoly {
        let mut p = BiPoly::zero(ctx);
        for &(c, i, j) in terms {
            p.add_term(i, j, ctx.from_int(c));
        }
        p
    }

    /// Embeds a univariate polynomial as a polynomial in `var`.
    pub fn from_uni(u: &UniPoly, var: Var) -> BiPoly {
        let mut p = BiPoly::zero(u.ctx());
        for (i, &c) in u.coeffs().iter().enumerate() {
            match var {
                Var::X => p.add_term(i as u32, 0, c),
                Var::Y => p.add_term(0, i as u32, c),
            }
        }
        p
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), FieldElem)> + '_ {
        self.terms.iter().map(|(&k, &v)| (k, v))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, i: u32, j: u32) -> FieldElem {
        self.terms.get(&(i, j)).copied().unwrap_or(FieldElem::ZERO)
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        let f = &self.ctx;
        let e = self.terms.entry((i, j)).or_insert(FieldElem::ZERO);
        *e = f.add(*e, c);
        if e.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&(i, j)| i == 0 && j == 0)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    pub fn degree_in(&self, var: Var) -> Option<u32> {
        self.terms
            .keys()
            .map(|&(i, j)| if var == Var::X { i } else { j })
            .max()
    }

    /// Lex-leading term with `x > y`.
    pub fn leading_term(&self) -> Option<((u32, u32), FieldElem)> {
        self.terms.iter().next_back().map(|(&k, &v)| (k, v))
    }

    pub fn scale(&self, c: FieldElem) -> BiPoly {
        let f = &self.ctx;
        let mut p = BiPoly::zero(&self.ctx);
        for (&(i, j), &v) in &self.terms {
            p.add_term(i, j, f.mul(v, c));
        }
        p
    }

    pub fn mul_monomial(&self, c: FieldElem, a: u32, b: u32) -> BiPoly {
        let f = &self.ctx;
        let mut p = BiPoly::zero(&self.ctx);
        for (&(i, j), &v) in &self.terms {
            p.add_term(i + a, j + b, f.mul(v, c));
        }
        p
    }

    pub fn pow(&self, mut e: u64) -> BiPoly {
        let mut base = self.clone();
        let mut acc = BiPoly::one(&self.ctx);
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

    pub fn eval(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        let f = &self.ctx;
        f.sum(
            self.terms
                .iter()
                .map(|(&(i, j), &c)| f.mul(c, f.mul(f.pow(x, i as u128), f.pow(y, j as u128)))),
        )
    }

    /// Substitute a value for `var`, leaving a polynomial in the other one.
    pub fn eval_var(&self, var: Var, a: FieldElem) -> UniPoly {
        let f = &self.ctx;
        let mut coeffs: Vec<FieldElem> = Vec::new();
        for (&(i, j), &c) in &self.terms {
            let (e_sub, e_keep) = if var == Var::X { (i, j) } else { (j, i) };
            let v = f.mul(c, f.pow(a, e_sub as u128));
            if coeffs.len() <= e_keep as usize {
                coeffs.resize(e_keep as usize + 1, FieldElem::ZERO);
            }
            coeffs[e_keep as usize] = f.add(coeffs[e_keep as usize], v);
        }
        UniPoly::new(&self.ctx, coeffs)
    }

    /// Coefficients as a polynomial in `var` over `K[other]`, lowest first.
    pub fn coeffs_in(&self, var: Var) -> Vec<UniPoly> {
        let n = self.degree_in(var).map_or(0, |d| d as usize + 1);
        let mut raw: Vec<Vec<FieldElem>> = vec![Vec::new(); n];
        for (&(i, j), &c) in &self.terms {
            let (e_var, e_other) = if var == Var::X { (i, j) } else { (j, i) };
            let slot = &mut raw[e_var as usize];
            if slot.len() <= e_other as usize {
                slot.resize(e_other as usize + 1, FieldElem::ZERO);
            }
            slot[e_other as usize] = c;
        }
        raw.into_iter()
            .map(|v| UniPoly::new(&self.ctx, v))
            .collect()
    }

    /// Inverse of [`coeffs_in`](Self::coeffs_in).
    pub fn from_coeffs_in(ctx: &Arc<FieldCtx>, var: Var, coeffs: &[UniPoly]) -> BiPoly {
        let mut p = BiPoly::zero(ctx);
        for (e_var, u) in coeffs.iter().enumerate() {
            for (e_other, &c) in u.coeffs().iter().enumerate() {
                let (i, j) = if var == Var::X {
                    (e_var as u32, e_other as u32)
                } else {
                    (e_other as u32, e_var as u32)
                };
                p.add_term(i, j, c);
            }
        }
        p
    }

    /// Converts to a univariate polynomial when only `var` occurs.
    pub fn to_uni(&self, var: Var) -> Option<UniPoly> {
        let other_free = self
            .terms
            .keys()
            .all(|&(i, j)| if var == Var::X { j == 0 } else { i == 0 });
        if !other_free {
            return None;
        }
        Some(self.eval_var(var.other(), FieldElem::ZERO))
    }

    pub fn partial(&self, var: Var) -> BiPoly {
        let f = &self.ctx;
        let mut p = BiPoly::zero(&self.ctx);
        for (&(i, j), &c) in &self.terms {
            match var {
                Var::X if i > 0 => p.add_term(i - 1, j, f.mul(c, f.from_int(i as i64))),
                Var::Y if j > 0 => p.add_term(i, j - 1, f.mul(c, f.from_int(j as i64))),
                _ => {}
            }
        }
        p
    }

    /// `self(sx, sy)` for polynomial substitutions.
    pub fn substitute(&self, sx: &BiPoly, sy: &BiPoly) -> BiPoly {
        let mut xp: Vec<BiPoly> = vec![BiPoly::one(&self.ctx)];
        let mut yp: Vec<BiPoly> = vec![BiPoly::one(&self.ctx)];
        let mut out = BiPoly::zero(&self.ctx);
        for (&(i, j), &c) in &self.terms {
            while xp.len() <= i as usize {
                let next = &xp[xp.len() - 1] * sx;
                xp.push(next);
            }
            while yp.len() <= j as usize {
                let next = &yp[yp.len() - 1] * sy;
                yp.push(next);
            }
            out = &out + &(&xp[i as usize] * &yp[j as usize]).scale(c);
        }
        out
    }

    /// Exact division via lex-order reduction; errors if not divisible.
    pub fn exact_div(&self, d: &BiPoly) -> Result<BiPoly> {
        let ((a, b), lc) = d.leading_term().ok_or(Error::DivisionByZero)?;
        let f = &self.ctx;
        let inv = f.inv(lc)?;
        let mut rem = self.clone();
        let mut q = BiPoly::zero(&self.ctx);
        while let Some(((i, j), c)) = rem.leading_term() {
            if i < a || j < b {
                return Err(Error::Internal("bivariate division is not exact".into()));
            }
            let t = f.mul(c, inv);
            q.add_term(i - a, j - b, t);
            let nt = f.neg(t);
            for (&(di, dj), &dc) in &d.terms {
                rem.add_term(di + i - a, dj + j - b, f.mul(dc, nt));
            }
        }
        Ok(q)
    }

    pub fn map_coeffs(&self, hom: &FieldHom) -> BiPoly {
        let mut p = BiPoly::zero(hom.dst());
        for (&(i, j), &c) in &self.terms {
            p.add_term(i, j, hom.apply(c));
        }
        p
    }

    pub fn format(&self, vars: (&str, &str)) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let f = &self.ctx;
        let mut parts = Vec::new();
        for (&(i, j), &c) in self.terms.iter().rev() {
            let mut mono = Vec::new();
            if i > 0 {
                mono.push(if i == 1 {
                    vars.0.to_string()
                } else {
                    format!("{}^{i}", vars.0)
                });
            }
            if j > 0 {
                mono.push(if j == 1 {
                    vars.1.to_string()
                } else {
                    format!("{}^{j}", vars.1)
                });
            }
            let cs = f.format(c);
            let cs = if cs.contains('+') {
                format!("({cs})")
            } else {
                cs
            };
            if mono.is_empty() {
                parts.push(cs);
            } else if cs == "1" {
                parts.push(mono.join("*"));
            } else {
                parts.push(format!("{cs}*{}", mono.join("*")));
            }
        }
        parts.join(" + ")
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, o: &BiPoly) -> BiPoly {
        let mut p = self.clone();
        for (&(i, j), &c) in &o.terms {
            p.add_term(i, j, c);
        }
        p
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, o: &BiPoly) -> BiPoly {
        let f = &self.ctx;
        let mut p = self.clone();
        for (&(i, j), &c) in &o.terms {
            p.add_term(i, j, f.neg(c));
        }
        p
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        self.scale(self.ctx.neg(FieldElem::ONE))
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, o: &BiPoly) -> BiPoly {
        let f = &self.ctx;
        let mut acc: BTreeMap<(u32, u32), FieldElem> = BTreeMap::new();
        for (&(i, j), &a) in &self.terms {
            for (&(k, l), &b) in &o.terms {
                let e = acc.entry((i + k, j + l)).or_insert(FieldElem::ZERO);
                *e = f.add(*e, f.mul(a, b));
            }
        }
        acc.retain(|_, v| !v.is_zero());
        BiPoly {
            ctx: self.ctx.clone(),
            terms: acc,
        }
    }
}

owned_ops!(BiPoly);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;

    #[test]
    fn coeffs_in_round_trip() {
        let f = build_field(5, 1).unwrap();
        let p = BiPoly::from_terms(&f, &[(1, 3, 0), (2, 1, 2), (4, 0, 5), (1, 0, 0)]);
        for var in [Var::X, Var::Y] {
            assert_eq!(BiPoly::from_coeffs_in(&f, var, &p.coeffs_in(var)), p);
        }
    }

    #[test]
    fn exact_division_recovers_factor() {
        let f = build_field(3, 2).unwrap();
        let a = BiPoly::from_terms(&f, &[(1, 2, 1), (2, 0, 3), (1, 1, 0)]);
        let b = BiPoly::from_terms(&f, &[(1, 1, 1), (1, 0, 0), (2, 0, 2)]);
        let prod = &a * &b;
        assert_eq!(prod.exact_div(&b).unwrap(), a);
        assert_eq!(prod.exact_div(&a).unwrap(), b);
        let off = &prod + &BiPoly::one(&f);
        assert!(off.exact_div(&b).is_err());
    }

    #[test]
    fn substitution_matches_evaluation() {
        let f = build_field(7, 1).unwrap();
        let p = BiPoly::from_terms(&f, &[(1, 2, 1), (3, 0, 3), (5, 1, 0)]);
        let sx = BiPoly::from_terms(&f, &[(1, 1, 0), (2, 0, 1)]);
        let sy = BiPoly::from_terms(&f, &[(1, 0, 2), (1, 0, 0)]);
        let s = p.substitute(&sx, &sy);
        for a in 0..7 {
            for b in 0..7 {
                let (a, b) = (f.from_int(a), f.from_int(b));
                assert_eq!(s.eval(a, b), p.eval(sx.eval(a, b), sy.eval(a, b)));
            }
        }
    }
}
