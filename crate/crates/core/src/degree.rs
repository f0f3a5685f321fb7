//! `[K(C) : K(t)]` by an eliminant and by counting generic fibers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{build_field, embed, FieldCtx, FieldElem, FieldHom};
use crate::function_field::FFElem;
use crate::poly::{bareiss_det, resultant_euclid, squarefree_part, BiPoly, UniPoly, Var};

/// Number of random fibers sampled by the counting method.
pub const FIBER_SAMPLES: usize = 5;

/// Both computations of an extension degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeWitness {
    pub eliminant: usize,
    pub fiber: usize,
    /// `(p, k)` of the field the fibers were counted in.
    pub oracle_field: (u32, u32),
}

/// `[K(C) : K(t)]`; errors unless both methods agree.
pub fn extension_degree(t: &FFElem, seed: u64) -> Result<usize> {
    extension_degree_witness(t, seed).map(|w| w.eliminant)
}

pub fn extension_degree_witness(t: &FFElem, seed: u64) -> Result<DegreeWitness> {
    let eliminant = degree_by_eliminant(t)?;
    let (fiber, hom) = degree_by_fibers(t, seed)?;
    if eliminant != fiber {
        return Err(Error::MethodDisagreement { eliminant, fiber });
    }
    Ok(DegreeWitness {
        eliminant,
        fiber,
        oracle_field: (hom.dst().p(), hom.dst().k()),
    })
}

/// `R(x, T) = Res_y(y^e - h, N - T d) = det(M_N - T d I)`, where `M_N` is the
/// multiplication matrix of `N` over `K(x)`. After removing the content in
/// `T`, `deg_x R = [K(C) : K(x, t)] [K(x, t) : K(t)]`.
pub fn eliminant(t: &FFElem) -> Result<BiPoly> {
    let curve = t.curve();
    let ctx = curve.ctx();
    let k = curve
        .kummer_model()
        .ok_or_else(|| Error::InvalidParameters("eliminant needs a model y^e = h(x)".into()))?;
    let e = k.e as usize;
    let mut cols: Vec<Vec<UniPoly>> = Vec::with_capacity(e);
    let mut cur = t.numerator_coeffs().to_vec();
    for _ in 0..e {
        cols.push(cur.clone());
        let mut next = vec![UniPoly::zero(ctx); e];
        next[1..e].clone_from_slice(&cur[..(e - 1)]);
        next[0] = &cur[e - 1] * &k.h;
        cur = next;
    }
    let td = BiPoly::from_uni(t.denominator(), Var::X).mul_monomial(FieldElem::ONE, 0, 1);
    let m: Vec<Vec<BiPoly>> = (0..e)
        .map(|r| {
            (0..e)
                .map(|c| {
                    let entry = BiPoly::from_uni(&cols[c][r], Var::X);
                    if r == c {
                        &entry - &td
                    } else {
                        entry
                    }
                })
                .collect()
        })
        .collect();
    bareiss_det(m)
}

pub fn degree_by_eliminant(t: &FFElem) -> Result<usize> {
    let r = eliminant(t)?;
    if r.is_zero() {
        return Err(Error::Internal("eliminant vanished".into()));
    }
    let parts: Vec<UniPoly> = r
        .coeffs_in(Var::Y)
        .into_iter()
        .filter(|c| !c.is_zero())
        .collect();
    let content = parts
        .iter()
        .skip(1)
        .fold(parts[0].clone(), |acc, c| acc.gcd(c));
    let deg = parts
        .iter()
        .map(|c| c.deg() - content.deg())
        .max()
        .unwrap_or(0);
    if deg <= 0 {
        return Err(Error::ConstantFunction);
    }
    Ok(deg as usize)
}

/// Smallest `F_{p^{kj}}` over `ctx = F_{p^k}` with at least `min_size`
/// elements, with the embedding.
pub fn oracle_field(ctx: &std::sync::Arc<FieldCtx>, min_size: u64) -> Result<FieldHom> {
    let mut j = 1;
    while (ctx.p() as u128).pow(ctx.k() * j) < min_size as u128 {
        j += 1;
    }
    let big = build_field(ctx.p() as u64, ctx.k() * j)?;
    embed(ctx, &big)
}

/// Newton interpolation through `(z_i, v_i)`.
fn interpolate(f: &std::sync::Arc<FieldCtx>, pts: &[(FieldElem, FieldElem)]) -> Result<UniPoly> {
    let n = pts.len();
    let mut coef: Vec<FieldElem> = pts.iter().map(|p| p.1).collect();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = f.sub(coef[i], coef[i - 1]);
            let den = f.sub(pts[i].0, pts[i - j].0);
            coef[i] = f.div(num, den)?;
        }
    }
    let mut out = UniPoly::constant(f, coef[n - 1]);
    for i in (0..n - 1).rev() {
        out = &(&out * &UniPoly::new(f, vec![f.neg(pts[i].0), FieldElem::ONE]))
            + &UniPoly::constant(f, coef[i]);
    }
    Ok(out)
}

/// `Res_y(a(z, y), b(z, y))` as a polynomial in `z`, by evaluation at
/// `bound + 1` points. Both inputs must have constant leading coefficient
/// in `y`.
fn resultant_by_interpolation(a: &BiPoly, b: &BiPoly, bound: usize) -> Result<UniPoly> {
    let f = a.ctx();
    if f.size() <= bound as u64 {
        return Err(Error::Internal(
            "oracle field too small for interpolation".into(),
        ));
    }
    let pts: Vec<(FieldElem, FieldElem)> = f
        .elements()
        .take(bound + 1)
        .map(|z| {
            (
                z,
                resultant_euclid(&a.eval_var(Var::X, z), &b.eval_var(Var::X, z)),
            )
        })
        .collect();
    interpolate(f, &pts)
}

fn has_constant_y_lead(p: &BiPoly) -> bool {
    p.coeffs_in(Var::Y).last().is_some_and(|c| c.deg() == 0)
}

/// Maximum over random `t0` of the number of affine curve points with
/// `t = t0` and nonzero denominator, in a field with at least `100 d^2`
/// elements.
pub fn degree_by_fibers(t: &FFElem, seed: u64) -> Result<(usize, FieldHom)> {
    if t.as_constant().is_some() {
        return Err(Error::ConstantFunction);
    }
    let curve = t.curve();
    let d = curve.degree() as u64;
    let hom = oracle_field(curve.ctx(), 100 * d * d)?;
    let big = hom.dst().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = curve.affine().map_coeffs(&hom);
    let num = t.numerator().map_coeffs(&hom);
    let den = BiPoly::from_uni(&t.denominator().map_coeffs(&hom), Var::X);
    let mut best = 0usize;
    let mut done = 0;
    let mut attempts = 0;
    while done < FIBER_SAMPLES {
        attempts += 1;
        if attempts > 20 * FIBER_SAMPLES {
            return Err(Error::Internal("no generic fiber found".into()));
        }
        let c = big.random_nonzero(&mut rng);
        let t0 = big.random(&mut rng);
        // z = x + c y
        let sx = &BiPoly::x(&big) - &BiPoly::y(&big).scale(c);
        let sy = BiPoly::y(&big);
        let g = &num - &den.scale(t0);
        let (ft, gt, dt) = (
            f.substitute(&sx, &sy),
            g.substitute(&sx, &sy),
            den.substitute(&sx, &sy),
        );
        if !has_constant_y_lead(&ft) || !has_constant_y_lead(&gt) {
            continue;
        }
        let tf = ft.total_degree().unwrap_or(0) as usize;
        let tg = gt.total_degree().unwrap_or(0) as usize;
        let p = resultant_by_interpolation(&ft, &gt, tf * tg)?;
        if p.is_zero() {
            continue;
        }
        let sq = squarefree_part(&p)?;
        let mut count = sq.deg().max(0) as usize;
        if dt.degree_in(Var::Y).unwrap_or(0) > 0 {
            let td = dt.total_degree().unwrap_or(0) as usize;
            let q = resultant_by_interpolation(&ft, &dt, tf * td)?;
            count -= sq.gcd(&q).deg().max(0) as usize;
        }
        best = best.max(count);
        done += 1;
    }
    Ok((best, hom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{make_curve, Family};

    #[test]
    fn degrees_of_coordinate_functions() {
        let f = build_field(3, 2).unwrap();
        let c = make_curve(&f, Family::Fm { q: 3, m: 2 }).unwrap();
        let inv_y = FFElem::y(&c).inv().unwrap();
        assert_eq!(extension_degree(&inv_y, 0).unwrap(), 3);
        assert_eq!(extension_degree(&FFElem::x(&c), 0).unwrap(), 2);

        let g = make_curve(&build_field(2, 4).unwrap(), Family::Gr { q: 2, r: 2 }).unwrap();
        assert_eq!(extension_degree(&FFElem::x(&g), 0).unwrap(), 5);

        let e = make_curve(&f, Family::Em { q: 3, m: 2 }).unwrap();
        assert_eq!(extension_degree(&FFElem::y(&e), 0).unwrap(), 4);
    }

    #[test]
    fn constant_is_rejected() {
        let f = build_field(5, 1).unwrap();
        let c = make_curve(&f, Family::Fm { q: 5, m: 2 }).unwrap();
        let k = FFElem::constant(&c, f.from_int(3));
        assert!(matches!(
            degree_by_eliminant(&k),
            Err(Error::ConstantFunction)
        ));
        assert!(matches!(
            degree_by_fibers(&k, 0),
            Err(Error::ConstantFunction)
        ));
    }

    #[test]
    fn rational_function_degree() {
        // x^s / y on F_m has degree q
        let f = build_field(5, 2).unwrap();
        let c = make_curve(&f, Family::Fm { q: 5, m: 3 }).unwrap();
        let g = FFElem::x(&c).pow(2).unwrap().div(&FFElem::y(&c)).unwrap();
        let w = extension_degree_witness(&g, 7).unwrap();
        assert_eq!((w.eliminant, w.fiber), (5, 5));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let f = build_field(7, 1).unwrap();
        let p = UniPoly::from_ints(&f, &[3, 0, 5, 1]);
        let pts: Vec<_> = f.elements().take(5).map(|z| (z, p.eval(z))).collect();
        assert_eq!(interpolate(&f, &pts).unwrap(), p);
    }
}
