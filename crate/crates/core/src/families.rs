//! The groups and birational maps attached to the three curve families.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::constants::{make_gb, FamilyConstants, Mode};
use crate::curve::{make_curve, Curve, Family, PlaneCurve};
use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::function_field::FFElem;
use crate::group::AutGroup;
use crate::maps::RatMap;
use crate::poly::{BiPoly, UniPoly, Var};
use std::sync::Arc;

/// Which of the three constructions a group belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Theorem {
    /// Translations `(x + lambda, y)` on `F_m`.
    T1a,
    /// Scalings `(zeta x, y)` on `E_m`.
    T1b,
    /// Scalings `(x, zeta y)` on `G_r`.
    T2,
}

/// The family curve over the constant field.
pub fn family_curve(k: &FamilyConstants, theorem: Theorem) -> Result<Curve> {
    let q = k.q;
    let family = match (theorem, k.mode) {
        (Theorem::T1a, Mode::Fm { m }) => Family::Fm { q, m },
        (Theorem::T1b, Mode::Fm { m }) => Family::Em { q, m },
        (Theorem::T2, Mode::Gr { r }) => Family::Gr { q, r },
        _ => {
            return Err(Error::InvalidParameters(format!(
                "{theorem:?} needs other constants"
            )))
        }
    };
    make_curve(&k.field, family)
}

fn check_curve(curve: &Curve, want: fn(&Family) -> bool, what: &str) -> Result<()> {
    if want(&curve.family()) {
        Ok(())
    } else {
        Err(Error::InvalidParameters(format!(
            "expected {what}, got {}",
            curve.family().name()
        )))
    }
}

fn affine_map(
    curve: &Curve,
    name: String,
    u: FFElem,
    v: FFElem,
    ui: FFElem,
    vi: FFElem,
) -> Result<RatMap> {
    RatMap::new(name, curve, u, v)?.with_inverse(ui, vi)
}

/// `G_1` for the given construction, each element checked as a self-map
/// with its inverse.
pub fn make_g1(theorem: Theorem, curve: &Curve, k: &FamilyConstants) -> Result<AutGroup> {
    let f = &k.field;
    let x = FFElem::x(curve);
    let y = FFElem::y(curve);
    let mut elems = Vec::new();
    match theorem {
        Theorem::T1a => {
            check_curve(curve, |c| matches!(c, Family::Fm { .. }), "F_m")?;
            for &l in &k.lambda_set {
                let s = FFElem::constant(curve, l);
                let name = format!("x+{}", f.format(l));
                elems.push(affine_map(
                    curve,
                    name,
                    x.add(&s)?,
                    y.clone(),
                    x.sub(&s)?,
                    y.clone(),
                )?);
            }
        }
        Theorem::T1b => {
            check_curve(curve, |c| matches!(c, Family::Em { .. }), "E_m")?;
            for &z in &k.zeta_set {
                let zi = f.inv(z)?;
                let name = format!("{}x", f.format(z));
                elems.push(affine_map(
                    curve,
                    name,
                    x.scale(z),
                    y.clone(),
                    x.scale(zi),
                    y.clone(),
                )?);
            }
        }
        Theorem::T2 => {
            check_curve(curve, |c| matches!(c, Family::Gr { .. }), "G_r")?;
            for &z in &k.zeta_r_set {
                let zi = f.inv(z)?;
                let name = format!("{}y", f.format(z));
                elems.push(affine_map(
                    curve,
                    name,
                    x.clone(),
                    y.scale(z),
                    x.clone(),
                    y.scale(zi),
                )?);
            }
        }
    }
    let want = elems.len();
    let g = AutGroup::new("G1", curve, elems)?;
    if g.order() != want {
        return Err(Error::Verification("G1 has repeated elements".into()));
    }
    Ok(g)
}

/// `alpha = (1/x, y/x^s)` on `F_m`; it is its own inverse.
pub fn make_alpha(curve: &Curve) -> Result<RatMap> {
    check_curve(curve, |c| matches!(c, Family::Fm { .. }), "F_m")?;
    let s = curve.family().s().expect("F_m has s");
    let x = FFElem::x(curve);
    let u = x.inv()?;
    let v = FFElem::y(curve).div(&x.pow(s)?)?;
    affine_map(curve, "alpha".into(), u.clone(), v.clone(), u, v)
}

/// `beta = ((x + l(x-1)) / (1 + l(x-1)), y / (1 + l(x-1))^s)` on `E_m`,
/// together with the reduced numerator
/// `y^m - (x + l(x-1))^{q+1} + (1 + l(x-1))^{q+1}` (zero when `beta` maps
/// the curve to itself).
pub fn make_beta(curve: &Curve, lambda: FieldElem) -> Result<(RatMap, UniPoly)> {
    check_curve(curve, |c| matches!(c, Family::Em { .. }), "E_m")?;
    let Family::Em { q, .. } = curve.family() else {
        unreachable!()
    };
    let ctx = curve.ctx();
    let f = ctx.as_ref();
    if lambda.is_zero()
        || lambda == FieldElem::ONE
        || !f.add(f.pow(lambda, q as u128), lambda).is_zero()
    {
        return Err(Error::InvalidParameters(
            "lambda must satisfy lambda^q + lambda = 0, lambda != 0, 1".into(),
        ));
    }
    let s = curve.family().s().expect("E_m has s");
    let xm1 = UniPoly::new(ctx, vec![f.neg(FieldElem::ONE), FieldElem::ONE]);
    let lxm1 = xm1.scale(lambda);
    let h = &curve.kummer_model().expect("family curve").h;
    let numerator =
        &(h - &(&UniPoly::x(ctx) + &lxm1).pow(q + 1)) + &(&UniPoly::one(ctx) + &lxm1).pow(q + 1);

    let x = FFElem::x(curve);
    let y = FFElem::y(curve);
    let one = FFElem::one(curve);
    let side = |sign: FieldElem| -> Result<(FFElem, FFElem)> {
        let l = x.sub(&one)?.scale(f.mul(sign, lambda));
        let d = one.add(&l)?;
        Ok((x.add(&l)?.div(&d)?, y.div(&d.pow(s)?)?))
    };
    let (u, v) = side(FieldElem::ONE)?;
    let (ui, vi) = side(f.neg(FieldElem::ONE))?;
    Ok((affine_map(curve, "beta".into(), u, v, ui, vi)?, numerator))
}

/// `gamma = (g_b(y) + c + x, y + b)` on `G_r`, with inverse
/// `(-g_b(y) + c' + x, y - b)`.
pub fn make_gamma(curve: &Curve, k: &FamilyConstants) -> Result<RatMap> {
    check_curve(curve, |c| matches!(c, Family::Gr { .. }), "G_r")?;
    let Mode::Gr { r } = k.mode else {
        return Err(Error::InvalidParameters("gamma needs G_r constants".into()));
    };
    let (Some(b), Some(c), Some(cp)) = (k.b, k.c, k.c_prime) else {
        return Err(Error::InvalidParameters("b, c, c' missing".into()));
    };
    let x = FFElem::x(curve);
    let y = FFElem::y(curve);
    let gb = FFElem::eval_uni(&make_gb(&k.field, k.q, r, b), &y)?;
    let kc = |a| FFElem::constant(curve, a);
    let u = gb.add(&kc(c))?.add(&x)?;
    let v = y.add(&kc(b))?;
    let ui = gb.neg().add(&kc(cp))?.add(&x)?;
    let vi = y.sub(&kc(b))?;
    affine_map(curve, "gamma".into(), u, v, ui, vi)
}

/// Properties (1)-(4) of `g_b`: `g_{-b} = -g_b`; `g_b(-a) = -g_b(a)`;
/// `g_b(y + a) = g_b(y) + g_b(a)`; `g_b^q + g_b = b y^{q^r} + b^{q^r} y`.
/// (2) and (3) are checked in a formal variable and on `samples` random
/// field values.
pub fn check_gb_properties(k: &FamilyConstants, samples: usize, seed: u64) -> Result<[bool; 4]> {
    let Mode::Gr { r } = k.mode else {
        return Err(Error::InvalidParameters("g_b needs G_r constants".into()));
    };
    let b =
        k.b.ok_or_else(|| Error::InvalidParameters("b missing".into()))?;
    let f = &k.field;
    let q = k.q;
    let gb = make_gb(f, q, r, b);
    let neg_y = UniPoly::new(f, vec![FieldElem::ZERO, f.neg(FieldElem::ONE)]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let p1 = make_gb(f, q, r, f.neg(b)) == gb.scale(f.neg(FieldElem::ONE));

    let p2 = gb.compose(&neg_y) == gb.scale(f.neg(FieldElem::ONE))
        && (0..samples).all(|_| {
            let a = f.random(&mut rng);
            gb.eval(f.neg(a)) == f.neg(gb.eval(a))
        });

    // g_b(y + a) in K[y, a], with a in the X slot
    let ya = &BiPoly::y(f) + &BiPoly::x(f);
    let mut lhs = BiPoly::zero(f);
    for (i, &c) in gb.coeffs().iter().enumerate() {
        if !c.is_zero() {
            lhs = &lhs + &ya.pow(i as u64).scale(c);
        }
    }
    let rhs = &BiPoly::from_uni(&gb, Var::Y) + &BiPoly::from_uni(&gb, Var::X);
    let p3 = lhs == rhs
        && (0..samples).all(|_| {
            let (a, t) = (f.random(&mut rng), f.random(&mut rng));
            gb.eval(f.add(t, a)) == f.add(gb.eval(t), gb.eval(a))
        });

    let qr = q.pow(r);
    let target =
        &UniPoly::monomial(f, b, qr as usize) + &UniPoly::monomial(f, f.pow(b, qr as u128), 1);
    let p4 = &gb.pow(q) + &gb == target;
    Ok([p1, p2, p3, p4])
}

/// The three stages `F_m -> y^m = x^q + x + 1 -> y^m = x^{q+1} + x^q + x -> E_m`.
#[derive(Clone, Debug)]
pub struct Lemma1Chain {
    pub stages: Vec<RatMap>,
    pub composite: RatMap,
    /// `(1/x)^{q+1} + (1/x)^q + 1/x = (y/x^s)^m` on the middle curve.
    pub mid_identity: bool,
    pub inverse_verified: bool,
}

pub fn lemma1_chain(fm: &Curve, k: &FamilyConstants) -> Result<Lemma1Chain> {
    check_curve(fm, |c| matches!(c, Family::Fm { .. }), "F_m")?;
    let Family::Fm { q, m } = fm.family() else {
        unreachable!()
    };
    let s = fm.family().s().expect("F_m has s");
    let ctx = fm.ctx();
    let xu = UniPoly::x(ctx);
    let one = UniPoly::one(ctx);
    let bar: Curve = Arc::new(PlaneCurve::kummer(
        m as u32,
        &(&xu.pow(q) + &xu) + &one,
        Family::Other,
    )?);
    let c3: Curve = Arc::new(PlaneCurve::kummer(
        m as u32,
        &(&xu.pow(q + 1) + &xu.pow(q)) + &xu,
        Family::Other,
    )?);
    let em = make_curve(ctx, Family::Em { q, m })?;

    let a = FFElem::constant(fm, k.a_root);
    let s1 = RatMap::new("x-a", &bar, FFElem::x(fm).sub(&a)?, FFElem::y(fm))?.with_inverse(
        FFElem::x(&bar).add(&FFElem::constant(&bar, k.a_root))?,
        FFElem::y(&bar),
    )?;

    let inv_pair = |c: &Curve| -> Result<(FFElem, FFElem)> {
        let x = FFElem::x(c);
        Ok((x.inv()?, FFElem::y(c).div(&x.pow(s)?)?))
    };
    let (u2, v2) = inv_pair(&bar)?;
    let (u2i, v2i) = inv_pair(&c3)?;
    let mid_identity = {
        let lhs = u2.pow(q + 1)?.add(&u2.pow(q)?)?.add(&u2)?;
        lhs == v2.pow(m)?
    };
    let s2 = RatMap::new("(1/x, y/x^s)", &c3, u2, v2)?.with_inverse(u2i, v2i)?;

    let kone = |c: &Curve| FFElem::constant(c, FieldElem::ONE);
    let s3 = RatMap::new("x+1", &em, FFElem::x(&c3).add(&kone(&c3))?, FFElem::y(&c3))?
        .with_inverse(FFElem::x(&em).sub(&kone(&em))?, FFElem::y(&em))?;

    let composite = s3.compose(&s2.compose(&s1)?)?.renamed("F_m -> E_m");
    let back = composite.inverse()?;
    let inverse_verified =
        back.compose(&composite)?.is_identity() && composite.compose(&back)?.is_identity();
    Ok(Lemma1Chain {
        stages: vec![s1, s2, s3],
        composite,
        mid_identity,
        inverse_verified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{make_family_constants, DEFAULT_EXT_CAP};
    use crate::curve::ProjPoint;

    fn fm(q_p: u64, n: u32, m: u64) -> FamilyConstants {
        make_family_constants(q_p, n, Mode::Fm { m }, DEFAULT_EXT_CAP).unwrap()
    }

    #[test]
    fn g1_orders() {
        let k = fm(3, 1, 2);
        let c = family_curve(&k, Theorem::T1a).unwrap();
        assert_eq!(make_g1(Theorem::T1a, &c, &k).unwrap().order(), 3);
        let e = family_curve(&k, Theorem::T1b).unwrap();
        let g = make_g1(Theorem::T1b, &e, &k).unwrap();
        assert_eq!(g.order(), 4);
        let one = ProjPoint::affine(FieldElem::ONE, FieldElem::ZERO);
        let mut orb: Vec<_> = g
            .elements()
            .iter()
            .map(|s| s.image_of_point(one).unwrap())
            .collect();
        orb.sort();
        orb.dedup();
        assert_eq!(orb.len(), 4);
        let kg = make_family_constants(2, 1, Mode::Gr { r: 2 }, DEFAULT_EXT_CAP).unwrap();
        let gr = family_curve(&kg, Theorem::T2).unwrap();
        assert_eq!(make_g1(Theorem::T2, &gr, &kg).unwrap().order(), 5);
        assert!(make_g1(Theorem::T2, &c, &k).is_err());
    }

    #[test]
    fn alpha_identity() {
        let k = fm(3, 1, 2);
        let c = family_curve(&k, Theorem::T1a).unwrap();
        let a = make_alpha(&c).unwrap();
        assert!(a.compose(&a).unwrap().is_identity());
        let (u, v) = a.components();
        let lhs = u.pow(3).unwrap().add(u).unwrap();
        assert_eq!(lhs, v.pow(2).unwrap());
    }

    #[test]
    fn beta_numerator_vanishes() {
        let k = fm(3, 1, 2);
        let e = family_curve(&k, Theorem::T1b).unwrap();
        for &l in k.lambda_set.iter().filter(|l| !l.is_zero()) {
            let (b, num) = make_beta(&e, l).unwrap();
            assert!(num.is_zero());
            assert!(b.has_inverse());
        }
        assert!(make_beta(&e, FieldElem::ZERO).is_err());
    }

    #[test]
    fn gamma_and_gb() {
        for (p, r) in [(2u64, 2u32), (2, 3), (3, 2)] {
            let k = make_family_constants(p, 1, Mode::Gr { r }, DEFAULT_EXT_CAP).unwrap();
            let c = family_curve(&k, Theorem::T2).unwrap();
            let g = make_gamma(&c, &k).unwrap();
            assert!(g.inverse().unwrap().compose(&g).unwrap().is_identity());
            assert_eq!(check_gb_properties(&k, 20, 1).unwrap(), [true; 4]);
        }
    }

    #[test]
    fn gb_properties_detect_a_bad_b() {
        let mut k = make_family_constants(3, 1, Mode::Gr { r: 2 }, DEFAULT_EXT_CAP).unwrap();
        // a b outside the solution space of b = -b^{q^4}
        let bad = k.field.elements().find(|&b| {
            let f = &k.field;
            !b.is_zero() && b != f.neg(f.pow(b, 81))
        });
        k.b = bad;
        assert!(!check_gb_properties(&k, 20, 1).unwrap()[3]);
    }

    #[test]
    fn lemma1_chain_small() {
        for (p, n, m) in [(3u64, 1u32, 2u64), (5, 1, 2)] {
            let k = fm(p, n, m);
            let c = family_curve(&k, Theorem::T1a).unwrap();
            let chain = lemma1_chain(&c, &k).unwrap();
            assert!(chain.mid_identity && chain.inverse_verified);
            assert_eq!(chain.stages.len(), 3);
            assert!(matches!(
                chain.composite.target().family(),
                Family::Em { .. }
            ));
        }
    }
}
