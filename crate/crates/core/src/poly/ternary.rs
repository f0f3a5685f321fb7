use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::{BiPoly, UniPoly};
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem, FieldHom};

/// Affine chart of the projective plane: the coordinate set to 1.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Chart {
    X,
    Y,
    Z,
}

/// Homogeneous polynomial `F(X, Y, Z)` of a fixed degree.
#[derive(Clone)]
pub struct TernaryForm {
    ctx: Arc<FieldCtx>,
    degree: u32,
    /// `(i, j) -> c` for `c X^i Y^j Z^{degree - i - j}`.
    terms: BTreeMap<(u32, u32), FieldElem>,
}

impl PartialEq for TernaryForm {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.terms == other.terms
    }
}

impl Eq for TernaryForm {}

impl fmt::Debug for TernaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format())
    }
}

/// Pads every monomial of `f` with `Z` up to degree `d`.
pub fn homogenize(f: &BiPoly, d: u32) -> Result<TernaryForm> {
    let deg = f.total_degree().unwrap_or(0);
    if deg > d {
        return Err(Error::Degree(format!(
            "cannot homogenize a degree-{deg} polynomial to degree {d}"
        )));
    }
    let mut terms = BTreeMap::new();
    for ((i, j), c) in f.terms() {
        terms.insert((i, j), c);
    }
    Ok(TernaryForm {
        ctx: f.ctx().clone(),
        degree: d,
        terms,
    })
}

/// Restricts `form` to the affine chart where `chart` is 1. The two remaining
/// coordinates keep their cyclic order: `Z`-chart gives `(X, Y)`,
/// `Y`-chart gives `(X, Z)`, `X`-chart gives `(Y, Z)`.
pub fn dehomogenize(form: &TernaryForm, chart: Chart) -> BiPoly {
    let mut p = BiPoly::zero(&form.ctx);
    for (&(i, j), &c) in &form.terms {
        let k = form.degree - i - j;
        match chart {
            Chart::Z => p.add_term(i, j, c),
            Chart::Y => p.add_term(i, k, c),
            Chart::X => p.add_term(j, k, c),
        }
    }
    p
}

impl TernaryForm {
    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// `(i, j, k, c)` for `c X^i Y^j Z^k`.
    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, u32, FieldElem)> + '_ {
        self.terms
            .iter()
            .map(|(&(i, j), &c)| (i, j, self.degree - i - j, c))
    }

    pub fn from_terms(
        ctx: &Arc<FieldCtx>,
        degree: u32,
        terms: &[(FieldElem, u32, u32, u32)],
    ) -> Result<TernaryForm> {
        let mut out = BTreeMap::new();
        for &(c, i, j, k) in terms {
            if i + j + k != degree {
                return Err(Error::Degree("inhomogeneous term".into()));
            }
            if c.is_zero() {
                continue;
            }
            let e: &mut FieldElem = out.entry((i, j)).or_insert(FieldElem::ZERO);
            *e = ctx.add(*e, c);
        }
        out.retain(|_, v| !v.is_zero());
        Ok(TernaryForm {
            ctx: ctx.clone(),
            degree,
            terms: out,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, pt: [FieldElem; 3]) -> FieldElem {
        let f = &self.ctx;
        f.sum(self.terms().map(|(i, j, k, c)| {
            f.mul(
                c,
                f.mul(
                    f.pow(pt[0], i as u128),
                    f.mul(f.pow(pt[1], j as u128), f.pow(pt[2], k as u128)),
                ),
            )
        }))
    }

    /// Partial derivative in coordinate 0, 1 or 2.
    pub fn partial(&self, coord: usize) -> TernaryForm {
        let f = &self.ctx;
        let mut terms = Vec::new();
        for (i, j, k, c) in self.terms() {
            let e = [i, j, k][coord];
            if e == 0 {
                continue;
            }
            let mut ex = [i, j, k];
            ex[coord] -= 1;
            terms.push((f.mul(c, f.from_int(e as i64)), ex[0], ex[1], ex[2]));
        }
        if self.degree == 0 {
            return TernaryForm::from_terms(&self.ctx, 0, &[]).expect("empty form");
        }
        TernaryForm::from_terms(&self.ctx, self.degree - 1, &terms).expect("homogeneous")
    }

    /// `F(P + t D)` as a polynomial in `t`.
    pub fn restrict_to_line(&self, base: [FieldElem; 3], dir: [FieldElem; 3]) -> UniPoly {
        let ctx = &self.ctx;
        let coord = |i: usize| UniPoly::new(ctx, vec![base[i], dir[i]]);
        let (cx, cy, cz) = (coord(0), coord(1), coord(2));
        let mut out = UniPoly::zero(ctx);
        for (i, j, k, c) in self.terms() {
            let t = &(&cx.pow(i as u64) * &cy.pow(j as u64)) * &cz.pow(k as u64);
            out = &out + &t.scale(c);
        }
        out
    }

    /// Binary form `F(X, Y, 0)` as a polynomial in `Y/X` plus the power of
    /// `X` dividing it: returns coefficients `[c_0, ..., c_d]` of `X^{d-j} Y^j`.
    pub fn at_infinity(&self) -> Vec<FieldElem> {
        let mut v = vec![FieldElem::ZERO; self.degree as usize + 1];
        for (i, j, k, c) in self.terms() {
            if k == 0 {
                debug_assert_eq!(i + j, self.degree);
                v[j as usize] = c;
            }
        }
        v
    }

    /// Scales so that the largest monomial has coefficient 1.
    pub fn normalized(&self) -> TernaryForm {
        let Some((_, &lc)) = self.terms.iter().next_back() else {
            return self.clone();
        };
        let inv = self.ctx.inv(lc).expect("nonzero");
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = self.ctx.mul(*v, inv);
        }
        out
    }

    pub fn map_coeffs(&self, hom: &FieldHom) -> TernaryForm {
        TernaryForm {
            ctx: hom.dst().clone(),
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(&k, &v)| (k, hom.apply(v)))
                .collect(),
        }
    }

    /// Pulls coefficients back through `hom`; `None` if some coefficient is
    /// outside the image.
    pub fn pull_coeffs(&self, hom: &FieldHom) -> Option<TernaryForm> {
        let mut terms = BTreeMap::new();
        for (&k, &v) in &self.terms {
            terms.insert(k, hom.preimage(v)?);
        }
        Some(TernaryForm {
            ctx: hom.src().clone(),
            degree: self.degree,
            terms,
        })
    }

    pub fn format(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let f = &self.ctx;
        let mut parts = Vec::new();
        for (i, j, k, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let mut mono = Vec::new();
            for (name, e) in [("X", i), ("Y", j), ("Z", k)] {
                match e {
                    0 => {}
                    1 => mono.push(name.to_string()),
                    e => mono.push(format!("{name}^{e}")),
                }
            }
            let cs = f.format(c);
            let cs = if cs.contains('+') {
                format!("({cs})")
            } else {
                cs
            };
            parts.push(match (mono.is_empty(), cs.as_str()) {
                (true, _) => cs,
                (false, "1") => mono.join("*"),
                (false, _) => format!("{cs}*{}", mono.join("*")),
            });
        }
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;
    use proptest::prelude::*;

    #[test]
    fn homogenize_elliptic_cubic() {
        let f = build_field(3, 1).unwrap();
        let p = BiPoly::from_terms(&f, &[(1, 0, 2), (-1, 3, 0), (-1, 1, 0)]);
        let h = homogenize(&p, 3).unwrap();
        let expected = TernaryForm::from_terms(
            &f,
            3,
            &[
                (f.one(), 0, 2, 1),
                (f.from_int(-1), 3, 0, 0),
                (f.from_int(-1), 1, 0, 2),
            ],
        )
        .unwrap();
        assert_eq!(h, expected);
    }

    #[test]
    fn homogenize_with_padding() {
        // y^m - x^q - x to degree q + 1 for (q, m) = (5, 3)
        let f = build_field(5, 1).unwrap();
        let p = BiPoly::from_terms(&f, &[(1, 0, 3), (-1, 5, 0), (-1, 1, 0)]);
        let h = homogenize(&p, 6).unwrap();
        let expected = TernaryForm::from_terms(
            &f,
            6,
            &[
                (f.one(), 0, 3, 3),
                (f.from_int(-1), 5, 0, 1),
                (f.from_int(-1), 1, 0, 5),
            ],
        )
        .unwrap();
        assert_eq!(h, expected);
        assert!(homogenize(&p, 4).is_err());
    }

    #[test]
    fn restriction_to_line_matches_pointwise() {
        let f = build_field(7, 1).unwrap();
        let p = BiPoly::from_terms(&f, &[(1, 0, 2), (-1, 3, 0), (2, 1, 1)]);
        let h = homogenize(&p, 3).unwrap();
        let base = [f.from_int(1), f.from_int(2), f.from_int(3)];
        let dir = [f.from_int(4), f.from_int(0), f.from_int(5)];
        let u = h.restrict_to_line(base, dir);
        for t in f.elements() {
            let pt = [0, 1, 2].map(|i| f.add(base[i], f.mul(t, dir[i])));
            assert_eq!(u.eval(t), h.eval(pt));
        }
    }

    proptest! {
        #[test]
        fn dehomogenize_inverts_homogenize(
            terms in proptest::collection::vec((0i64..5, 0u32..6, 0u32..6), 1..8),
            extra in 0u32..3,
        ) {
            let f = build_field(5, 1).unwrap();
            let p = BiPoly::from_terms(&f, &terms);
            let d = p.total_degree().unwrap_or(0) + extra;
            let h = homogenize(&p, d).unwrap();
            prop_assert_eq!(dehomogenize(&h, Chart::Z), p);
        }
    }
}
