//! Local parametrizations of unibranch points, places and valuations.

use std::fmt;
use std::sync::Arc;

use crate::curve::{Curve, PlaneCurve, ProjPoint};
use crate::error::{Error, Result};
use crate::field::{find_roots, FieldCtx, FieldElem};
use crate::linalg::Matrix;
use crate::poly::{dehomogenize, BiPoly, Chart, UniPoly, Var};
use crate::series::{eval_bipoly, nth_root, Laurent, EXACT};

/// Largest precision tried before giving up on a valuation.
pub const PRECISION_CAP: usize = 4096;

/// Truncated affine parametrization `(x(t), y(t))` of one branch.
#[derive(Clone, Debug)]
pub struct BranchExpansion {
    pub center: ProjPoint,
    pub x: Laurent,
    pub y: Laurent,
    pub precision: usize,
}

impl BranchExpansion {
    /// `F(x(t), y(t))` for the affine equation of `curve`.
    pub fn residual(&self, curve: &PlaneCurve) -> Laurent {
        eval_bipoly(curve.affine(), &self.x, &self.y)
    }

    pub fn eval(&self, p: &BiPoly) -> Laurent {
        eval_bipoly(p, &self.x, &self.y)
    }
}

/// Lower convex hull of the support of `p`, from the vertex on the `y`-axis
/// side to the one on the `x`-axis side.
pub fn newton_polygon(p: &BiPoly) -> Vec<(u32, u32)> {
    let mut pts: Vec<(u32, u32)> = p.terms().map(|(k, _)| k).collect();
    pts.sort();
    pts.dedup_by_key(|pt| pt.0);
    let mut hull: Vec<(u32, u32)> = Vec::new();
    for pt in pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 as i64 - a.0 as i64) * (pt.1 as i64 - a.1 as i64)
                - (b.1 as i64 - a.1 as i64) * (pt.0 as i64 - a.0 as i64);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    // only the descending part faces the origin
    let lowest = hull.iter().map(|v| v.1).min().unwrap_or(0);
    let cut = hull.iter().position(|v| v.1 == lowest).map_or(0, |i| i + 1);
    hull.truncate(cut);
    hull
}

/// True when the origin is a point of `p = 0` with a single branch: either
/// `p` has a linear term, or its Newton polygon is one edge from `(0, a)` to
/// `(b, 0)` with `gcd(a, b) = 1`.
pub fn unibranch_certificate(p: &BiPoly) -> bool {
    if !p.coeff(0, 0).is_zero() {
        return false;
    }
    if !p.coeff(1, 0).is_zero() || !p.coeff(0, 1).is_zero() {
        return true;
    }
    let hull = newton_polygon(p);
    match hull.as_slice() {
        [(0, a), (b, 0)] => gcd(*a as u64, *b as u64) == 1,
        _ => false,
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Chart polynomial of `curve` with `center` moved to the origin.
pub fn local_equation(curve: &PlaneCurve, center: &ProjPoint) -> BiPoly {
    let ctx = curve.ctx();
    let [x, y, z] = center.coords();
    let (chart, u0, w0) = if !z.is_zero() {
        (Chart::Z, x, y)
    } else if !y.is_zero() {
        (Chart::Y, x, z)
    } else {
        (Chart::X, y, z)
    };
    let g = dehomogenize(curve.form(), chart);
    let su = &BiPoly::x(ctx) + &BiPoly::constant(ctx, u0);
    let sw = &BiPoly::y(ctx) + &BiPoly::constant(ctx, w0);
    g.substitute(&su, &sw)
}

/// Expands the branch of `curve` at `center` with `n` terms of relative
/// precision.
pub fn branch_expand(curve: &PlaneCurve, center: &ProjPoint, n: usize) -> Result<BranchExpansion> {
    if !curve.contains(center) {
        return Err(Error::NotOnCurve(center.format(curve.ctx())));
    }
    if !unibranch_certificate(&local_equation(curve, center)) {
        return Err(Error::MultiBranch(format!(
            "{} on {}",
            center.format(curve.ctx()),
            curve.family().name()
        )));
    }
    let n = n.max(1);
    match (curve.kummer_model(), center.xy()) {
        (Some(_), Some((x0, y0))) => kummer_affine(curve, x0, y0, n),
        (Some(_), None) => kummer_infinity(curve, center, n),
        (None, Some((x0, y0))) => smooth_affine(curve.affine(), x0, y0, n),
        (None, None) => Err(Error::MultiBranch(
            "points at infinity need a Kummer model".into(),
        )),
    }
}

fn kummer_affine(
    curve: &PlaneCurve,
    x0: FieldElem,
    y0: FieldElem,
    n: usize,
) -> Result<BranchExpansion> {
    let ctx = curve.ctx();
    let k = curve.kummer_model().expect("checked");
    let center = ProjPoint::affine(x0, y0);
    if !y0.is_zero() {
        let x = Laurent::new(ctx, 0, vec![x0, FieldElem::ONE], EXACT);
        let hx = x.eval_poly(&k.h);
        let y = nth_root(&hx, k.e as u64, y0, n)?;
        return Ok(BranchExpansion {
            center,
            x,
            y,
            precision: n,
        });
    }
    // h(x0 + u) = t^e with h'(x0) != 0
    let shifted = k.h.compose(&UniPoly::new(ctx, vec![x0, FieldElem::ONE]));
    let h1 = shifted.coeff(1);
    if h1.is_zero() {
        return Err(Error::MultiBranch("repeated root of h".into()));
    }
    let h1_inv = ctx.inv(h1)?;
    let higher = UniPoly::new(ctx, {
        let mut c = shifted.coeffs().to_vec();
        c[0] = FieldElem::ZERO;
        c[1] = FieldElem::ZERO;
        c
    });
    let target = Laurent::monomial(ctx, FieldElem::ONE, k.e as i64);
    let u = fixed_point(ctx, n, |u| {
        target
            .sub(&u.eval_poly(&higher))
            .scale(h1_inv)
            .truncate(n as i64)
    })?;
    let x = u.add(&Laurent::constant(ctx, x0));
    let y = Laurent::monomial(ctx, FieldElem::ONE, 1);
    Ok(BranchExpansion {
        center,
        x,
        y,
        precision: n,
    })
}

fn kummer_infinity(curve: &PlaneCurve, center: &ProjPoint, n: usize) -> Result<BranchExpansion> {
    let ctx = curve.ctx();
    let k = curve.kummer_model().expect("checked");
    let d = k.h.deg() as u32;
    if gcd(k.e as u64, d as u64) != 1 {
        return Err(Error::MultiBranch("several places at infinity".into()));
    }
    let lc = k.h.lc();
    let roots = find_roots(&UniPoly::new(ctx, {
        let mut c = vec![FieldElem::ZERO; k.e as usize + 1];
        c[0] = ctx.neg(lc);
        c[k.e as usize] = FieldElem::ONE;
        c
    }))?;
    let c = *roots
        .first()
        .ok_or_else(|| Error::Internal("leading coefficient has no e-th root".into()))?;
    // h~(s) = s^d h(1/s) / lc, then W^e = h~(t^e)
    let rev: Vec<FieldElem> =
        k.h.coeffs()
            .iter()
            .rev()
            .map(|&v| ctx.mul(v, ctx.inv(lc).expect("nonzero")))
            .collect();
    let hs = Laurent::new(ctx, 0, rev, EXACT).inflate(k.e as i64);
    let w = nth_root(&hs, k.e as u64, FieldElem::ONE, n)?;
    let x = Laurent::monomial(ctx, FieldElem::ONE, -(k.e as i64));
    let y = w.mul(&Laurent::monomial(ctx, c, -(d as i64)));
    Ok(BranchExpansion {
        center: *center,
        x,
        y,
        precision: n,
    })
}

/// Implicit-function expansion at a smooth affine point of `f = 0`.
fn smooth_affine(f: &BiPoly, x0: FieldElem, y0: FieldElem, n: usize) -> Result<BranchExpansion> {
    let ctx = f.ctx();
    let g = f.substitute(
        &(&BiPoly::x(ctx) + &BiPoly::constant(ctx, x0)),
        &(&BiPoly::y(ctx) + &BiPoly::constant(ctx, y0)),
    );
    let (gu, gw) = (g.coeff(1, 0), g.coeff(0, 1));
    let center = ProjPoint::affine(x0, y0);
    let solve_second = |g: &BiPoly, c: FieldElem| -> Result<Laurent> {
        let c_inv = ctx.inv(c)?;
        let mut rest = g.clone();
        rest.add_term(0, 1, ctx.neg(c));
        let t = Laurent::monomial(ctx, FieldElem::ONE, 1);
        fixed_point(ctx, n, |w| {
            eval_bipoly(&rest, &t, w)
                .scale(ctx.neg(c_inv))
                .truncate(n as i64)
        })
    };
    let t = Laurent::monomial(ctx, FieldElem::ONE, 1);
    let (u, w) = if !gw.is_zero() {
        (t, solve_second(&g, gw)?)
    } else if !gu.is_zero() {
        let swapped = BiPoly::from_coeffs_in(ctx, Var::Y, &g.coeffs_in(Var::X));
        (solve_second(&swapped, gu)?, t)
    } else {
        return Err(Error::MultiBranch(
            "singular affine point without a Kummer model".into(),
        ));
    };
    Ok(BranchExpansion {
        center,
        x: u.add(&Laurent::constant(ctx, x0)),
        y: w.add(&Laurent::constant(ctx, y0)),
        precision: n,
    })
}

/// Iterates `u <- step(u)` from `0` until stable.
fn fixed_point(
    ctx: &Arc<FieldCtx>,
    n: usize,
    step: impl Fn(&Laurent) -> Laurent,
) -> Result<Laurent> {
    let mut u = step(&Laurent::zero(ctx, n as i64));
    for _ in 0..=n + 1 {
        let next = step(&u);
        if same_coeffs(&next, &u, n as i64) {
            return Ok(next);
        }
        u = next;
    }
    Err(Error::Precision(n))
}

fn same_coeffs(a: &Laurent, b: &Laurent, upto: i64) -> bool {
    let lo = a.valuation().unwrap_or(0).min(b.valuation().unwrap_or(0));
    (lo..upto).all(|k| a.coeff(k) == b.coeff(k))
}

/// A point of the smooth model: a unibranch center with its expansion.
#[derive(Clone)]
pub struct Place {
    curve: Curve,
    label: String,
    branch: BranchExpansion,
}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}@{}",
            self.label,
            self.branch.center.format(self.curve.ctx())
        )
    }
}

impl Place {
    pub fn new(
        curve: &Curve,
        center: ProjPoint,
        label: impl Into<String>,
        n: usize,
    ) -> Result<Place> {
        Ok(Place {
            curve: curve.clone(),
            label: label.into(),
            branch: branch_expand(curve, &center, n)?,
        })
    }

    /// Default precision `4 d`.
    pub fn at(curve: &Curve, center: ProjPoint, label: impl Into<String>) -> Result<Place> {
        Place::new(curve, center, label, 4 * curve.degree() as usize)
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn center(&self) -> ProjPoint {
        self.branch.center
    }

    pub fn branch(&self) -> &BranchExpansion {
        &self.branch
    }

    pub fn precision(&self) -> usize {
        self.branch.precision
    }

    /// Same place expanded to precision `n`.
    pub fn refine(&self, n: usize) -> Result<Place> {
        Ok(Place {
            curve: self.curve.clone(),
            label: self.label.clone(),
            branch: branch_expand(&self.curve, &self.branch.center, n)?,
        })
    }

    /// Order of the series `eval(branch)`, doubling the precision until the
    /// order is known and agrees with the order at twice that precision.
    pub fn stable_order(&self, eval: impl Fn(&BranchExpansion) -> Result<Laurent>) -> Result<i64> {
        let mut n = self.precision().max(1);
        let mut place = self.clone();
        loop {
            if let Some(v) = eval(&place.branch)?.valuation() {
                let check = place.refine(2 * n)?;
                if eval(&check.branch)?.valuation() == Some(v) {
                    return Ok(v);
                }
            }
            n *= 2;
            if n > PRECISION_CAP {
                return Err(Error::Precision(PRECISION_CAP));
            }
            place = place.refine(n)?;
        }
    }

    /// Valuation of a polynomial function.
    pub fn valuation_poly(&self, p: &BiPoly) -> Result<i64> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        self.stable_order(|b| Ok(b.eval(p)))
    }
}

/// Intersection multiplicity at `point` of `curve` and the line
/// `l[0] X + l[1] Y + l[2] Z = 0`.
pub fn intersection_multiplicity(
    curve: &PlaneCurve,
    line: [FieldElem; 3],
    point: &ProjPoint,
) -> Result<u32> {
    let ctx = curve.ctx();
    let c = point.coords();
    if !curve.contains(point) {
        return Err(Error::NotOnCurve(point.format(ctx)));
    }
    if !ctx.sum((0..3).map(|i| ctx.mul(line[i], c[i]))).is_zero() {
        return Err(Error::NotOnCurve(format!(
            "{} is off the line",
            point.format(ctx)
        )));
    }
    if line.iter().all(|v| v.is_zero()) {
        return Err(Error::InvalidParameters("zero line".into()));
    }
    let mut m = Matrix::zeros(1, 3);
    for (i, &v) in line.iter().enumerate() {
        m.set(0, i, v);
    }
    let dir = m
        .nullspace(ctx)
        .into_iter()
        .find(|d| {
            // not proportional to the point
            let cross = [(0, 1), (0, 2), (1, 2)];
            cross
                .iter()
                .any(|&(i, j)| !ctx.sub(ctx.mul(d[i], c[j]), ctx.mul(d[j], c[i])).is_zero())
        })
        .ok_or_else(|| Error::Internal("line direction".into()))?;
    let restricted = curve.form().restrict_to_line(c, [dir[0], dir[1], dir[2]]);
    restricted
        .low_order()
        .map(|v| v as u32)
        .ok_or_else(|| Error::Degree("the line is a component of the curve".into()))
}
