//! Elements of the function field `K(C)` of a curve `y^e = h(x)`, kept in
//! the canonical form `sum_{i<e} n_i(x) y^i / d(x)`.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::branch::Place;
use crate::curve::{Curve, Kummer};
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};
use crate::poly::{bareiss_det, BiPoly, UniPoly, Var};
use crate::series::Laurent;

#[derive(Clone)]
pub struct FFElem {
    curve: Curve,
    /// `num[i]` is the coefficient of `y^i`, `i < e`.
    num: Vec<UniPoly>,
    /// Monic, coprime to the content of `num`.
    den: UniPoly,
}

impl PartialEq for FFElem {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.curve, &other.curve) && self.num == other.num && self.den == other.den
    }
}

impl Eq for FFElem {}

impl fmt::Debug for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format())
    }
}

fn model(curve: &Curve) -> Result<&Kummer> {
    curve
        .kummer_model()
        .ok_or_else(|| Error::InvalidParameters("function field needs a model y^e = h(x)".into()))
}

impl FFElem {
    fn build(curve: &Curve, num: Vec<UniPoly>, den: UniPoly) -> Result<FFElem> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let ctx = curve.ctx();
        let mut g = den.clone();
        for n in &num {
            if g.is_constant() {
                break;
            }
            g = g.gcd(n);
        }
        let (mut num, mut den) = if g.is_constant() {
            (num, den)
        } else {
            (
                num.iter()
                    .map(|n| n.exact_div(&g))
                    .collect::<Result<Vec<_>>>()?,
                den.exact_div(&g)?,
            )
        };
        if num.iter().all(|n| n.is_zero()) {
            den = UniPoly::one(ctx);
        }
        let lc_inv = ctx.inv(den.lc())?;
        if lc_inv != FieldElem::ONE {
            den = den.scale(lc_inv);
            for n in num.iter_mut() {
                *n = n.scale(lc_inv);
            }
        }
        Ok(FFElem {
            curve: curve.clone(),
            num,
            den,
        })
    }

    /// Reduces `sum c_{ij} x^i y^j` by `y^e = h(x)`.
    fn reduce(curve: &Curve, p: &BiPoly) -> Result<Vec<UniPoly>> {
        let k = model(curve)?;
        let e = k.e as usize;
        let ctx = curve.ctx();
        let mut out = vec![UniPoly::zero(ctx); e];
        for (j, c) in p.coeffs_in(Var::Y).into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let t = &c * &k.h.pow((j / e) as u64);
            out[j % e] = &out[j % e] + &t;
        }
        Ok(out)
    }

    pub fn from_poly(curve: &Curve, p: &BiPoly) -> Result<FFElem> {
        let num = Self::reduce(curve, p)?;
        FFElem::build(curve, num, UniPoly::one(curve.ctx()))
    }

    /// Normal form of `num / den`.
    pub fn from_fraction(curve: &Curve, num: &BiPoly, den: &BiPoly) -> Result<FFElem> {
        let d = FFElem::from_poly(curve, den)?;
        FFElem::from_poly(curve, num)?.div(&d)
    }

    pub fn constant(curve: &Curve, c: FieldElem) -> FFElem {
        FFElem::from_uni(curve, &UniPoly::constant(curve.ctx(), c))
    }

    pub fn one(curve: &Curve) -> FFElem {
        FFElem::constant(curve, FieldElem::ONE)
    }

    pub fn zero(curve: &Curve) -> FFElem {
        FFElem::constant(curve, FieldElem::ZERO)
    }

    pub fn from_uni(curve: &Curve, p: &UniPoly) -> FFElem {
        FFElem::from_poly(curve, &BiPoly::from_uni(p, Var::X)).expect("curve has a model")
    }

    pub fn x(curve: &Curve) -> FFElem {
        FFElem::from_uni(curve, &UniPoly::x(curve.ctx()))
    }

    pub fn y(curve: &Curve) -> FFElem {
        FFElem::from_poly(curve, &BiPoly::y(curve.ctx())).expect("curve has a model")
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        self.curve.ctx()
    }

    pub fn numerator_coeffs(&self) -> &[UniPoly] {
        &self.num
    }

    pub fn denominator(&self) -> &UniPoly {
        &self.den
    }

    /// Numerator as a polynomial in `x, y`.
    pub fn numerator(&self) -> BiPoly {
        BiPoly::from_coeffs_in(self.ctx(), Var::Y, &self.num)
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|n| n.is_zero())
    }

    /// Constant value if the element lies in `K`.
    pub fn as_constant(&self) -> Option<FieldElem> {
        if self.num.iter().skip(1).any(|n| !n.is_zero())
            || !self.den.is_constant()
            || !self.num[0].is_constant()
        {
            return None;
        }
        Some(self.num[0].coeff(0))
    }

    fn same_curve(&self, o: &FFElem) -> Result<()> {
        if Arc::ptr_eq(&self.curve, &o.curve) {
            Ok(())
        } else {
            Err(Error::InvalidParameters(
                "elements of different function fields".into(),
            ))
        }
    }

    pub fn add(&self, o: &FFElem) -> Result<FFElem> {
        self.same_curve(o)?;
        let num = self
            .num
            .iter()
            .zip(&o.num)
            .map(|(a, b)| &(a * &o.den) + &(b * &self.den))
            .collect();
        FFElem::build(&self.curve, num, &self.den * &o.den)
    }

    pub fn neg(&self) -> FFElem {
        FFElem {
            curve: self.curve.clone(),
            num: self.num.iter().map(|n| -n).collect(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &FFElem) -> Result<FFElem> {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: FieldElem) -> FFElem {
        let num = self.num.iter().map(|n| n.scale(c)).collect();
        FFElem::build(&self.curve, num, self.den.clone()).expect("nonzero denominator")
    }

    fn mul_num(&self, a: &[UniPoly], b: &[UniPoly]) -> Vec<UniPoly> {
        let k = self.curve.kummer_model().expect("checked at construction");
        let e = a.len();
        let ctx = self.ctx();
        let mut lo = vec![UniPoly::zero(ctx); e];
        let mut hi = vec![UniPoly::zero(ctx); e];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let t = ai * bj;
                if i + j < e {
                    lo[i + j] = &lo[i + j] + &t;
                } else {
                    hi[i + j - e] = &hi[i + j - e] + &t;
                }
            }
        }
        lo.iter().zip(&hi).map(|(l, h)| l + &(h * &k.h)).collect()
    }

    pub fn mul(&self, o: &FFElem) -> Result<FFElem> {
        self.same_curve(o)?;
        let num = self.mul_num(&self.num, &o.num);
        FFElem::build(&self.curve, num, &self.den * &o.den)
    }

    pub fn pow(&self, mut e: u64) -> Result<FFElem> {
        let mut base = self.clone();
        let mut acc = FFElem::one(&self.curve);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Multiplicative inverse via the adjugate of the multiplication matrix
    /// on the basis `1, y, ..., y^{e-1}` of `K(C)/K(x)`.
    pub fn inv(&self) -> Result<FFElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let k = model(&self.curve)?;
        let e = self.num.len();
        let ctx = self.ctx();
        let support: Vec<usize> = (0..e).filter(|&i| !self.num[i].is_zero()).collect();
        if let [i] = support[..] {
            // (n y^i)^{-1} = y^{e-i} / (n h) for i > 0
            let mut num = vec![UniPoly::zero(ctx); e];
            if i == 0 {
                num[0] = self.den.clone();
                return FFElem::build(&self.curve, num, self.num[0].clone());
            }
            num[e - i] = self.den.clone();
            return FFElem::build(&self.curve, num, &self.num[i] * &k.h);
        }
        // column j holds the coordinates of N * y^j
        let mut cols = Vec::with_capacity(e);
        let mut cur = self.num.clone();
        for _ in 0..e {
            cols.push(cur.clone());
            let mut shifted = vec![UniPoly::zero(ctx); e];
            shifted[1..e].clone_from_slice(&cur[..(e - 1)]);
            shifted[0] = &cur[e - 1] * &k.h;
            cur = shifted;
        }
        let matrix = |replace: Option<usize>| -> Vec<Vec<UniPoly>> {
            (0..e)
                .map(|r| {
                    (0..e)
                        .map(|c| match replace {
                            Some(j) if j == c => {
                                if r == 0 {
                                    UniPoly::one(ctx)
                                } else {
                                    UniPoly::zero(ctx)
                                }
                            }
                            _ => cols[c][r].clone(),
                        })
                        .collect()
                })
                .collect()
        };
        let det = bareiss_det(matrix(None))?;
        if det.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let adj: Vec<UniPoly> = (0..e)
            .map(|j| bareiss_det(matrix(Some(j))).map(|m| &m * &self.den))
            .collect::<Result<_>>()?;
        FFElem::build(&self.curve, adj, det)
    }

    pub fn div(&self, o: &FFElem) -> Result<FFElem> {
        self.mul(&o.inv()?)
    }

    /// `p(self)` for a univariate polynomial `p`.
    pub fn eval_uni(p: &UniPoly, at: &FFElem) -> Result<FFElem> {
        let mut acc = FFElem::zero(&at.curve);
        for &c in p.coeffs().iter().rev() {
            acc = acc.mul(at)?.add(&FFElem::constant(&at.curve, c))?;
        }
        Ok(acc)
    }

    /// `P(a, b)` for a bivariate polynomial, Horner in `y` over polynomials
    /// in `x`.
    pub fn eval_bi(p: &BiPoly, a: &FFElem, b: &FFElem) -> Result<FFElem> {
        let mut acc = FFElem::zero(&a.curve);
        for c in p.coeffs_in(Var::Y).iter().rev() {
            acc = acc.mul(b)?.add(&FFElem::eval_uni(c, a)?)?;
        }
        Ok(acc)
    }

    /// `self(x <- a, y <- b)`, with `a, b` on the source curve.
    pub fn substitute(&self, a: &FFElem, b: &FFElem) -> Result<FFElem> {
        let n = FFElem::eval_bi(&self.numerator(), a, b)?;
        let d = FFElem::eval_uni(&self.den, a)?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        n.div(&d)
    }

    /// Value at an affine point `(x0, y0)` where the denominator is nonzero.
    pub fn eval_at(&self, x0: FieldElem, y0: FieldElem) -> Option<FieldElem> {
        let f = self.ctx();
        let d = self.den.eval(x0);
        if d.is_zero() {
            return None;
        }
        let n = self.numerator().eval(x0, y0);
        f.div(n, d).ok()
    }

    /// `(num, den)` series along the branch of `place`.
    pub fn series_parts(&self, place: &Place) -> (Laurent, Laurent) {
        let b = place.branch();
        (b.eval(&self.numerator()), b.x.eval_poly(&self.den))
    }

    /// Valuation at `place`, stable under precision doubling.
    pub fn valuation(&self, place: &Place) -> Result<i64> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let num = self.numerator();
        let vn = place.stable_order(|b| Ok(b.eval(&num)))?;
        let vd = place.stable_order(|b| Ok(b.x.eval_poly(&self.den)))?;
        Ok(vn - vd)
    }

    /// Valuation and leading coefficient at `place`.
    pub fn leading(&self, place: &Place) -> Result<(i64, FieldElem)> {
        let v = self.valuation(place)?;
        let f = self.ctx();
        let num = self.numerator();
        let mut p = place.clone();
        loop {
            let (n, d) = (p.branch().eval(&num), p.branch().x.eval_poly(&self.den));
            if let (Some(vn), Some(vd)) = (n.valuation(), d.valuation()) {
                if vn - vd == v {
                    return Ok((
                        v,
                        f.div(
                            n.leading_coeff().expect("nonzero"),
                            d.leading_coeff().expect("nonzero"),
                        )?,
                    ));
                }
            }
            p = p.refine(p.precision() * 2)?;
        }
    }

    /// Random element with small numerator and denominator degrees.
    pub fn random<R: Rng + ?Sized>(curve: &Curve, deg: usize, rng: &mut R) -> FFElem {
        let ctx = curve.ctx();
        let e = curve.kummer_model().expect("model").e as usize;
        let rand_poly =
            |rng: &mut R| UniPoly::new(ctx, (0..=deg).map(|_| ctx.random(rng)).collect());
        let num = (0..e).map(|_| rand_poly(rng)).collect();
        let mut den = rand_poly(rng);
        if den.is_zero() {
            den = UniPoly::one(ctx);
        }
        FFElem::build(curve, num, den).expect("nonzero denominator")
    }

    pub fn format(&self) -> String {
        let n = self.numerator().format(("x", "y"));
        if self.den.deg() == 0 {
            n
        } else {
            format!("({n})/({})", self.den.format("x"))
        }
    }
}
