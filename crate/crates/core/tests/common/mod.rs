#![allow(dead_code)]

use galois_points::branch::Place;
use galois_points::constants::{make_family_constants, Mode, DEFAULT_EXT_CAP};
use galois_points::curve::{Curve, ProjPoint};
use galois_points::field::FieldElem;
use galois_points::families::{family_curve, make_alpha, make_g1, Theorem};
use galois_points::function_field::FFElem;
use galois_points::group::{conjugate, AutGroup, Side};
use galois_points::maps::RatMap;
use galois_points::poly::{BiPoly, Var};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `(p, n, m)` with `q = p^n`.
pub const THM1_GRID: [(u64, u32, u64); 6] =
    [(3, 1, 2), (5, 1, 2), (5, 1, 3), (7, 1, 2), (7, 1, 4), (2, 3, 3)];
/// `(p, n, r)`.
pub const THM2_GRID: [(u64, u32, u32); 3] = [(2, 1, 2), (2, 1, 3), (3, 1, 2)];

/// `F_m` with `G1`, `alpha` and `G2 = alpha^-1 G1 alpha`.
pub struct Setup {
    pub curve: Curve,
    pub g1: AutGroup,
    pub g2: AutGroup,
    pub alpha: RatMap,
}

pub fn setup(p: u64, n: u32, m: u64) -> Setup {
    let k = make_family_constants(p, n, Mode::Fm { m }, DEFAULT_EXT_CAP).unwrap();
    let curve = family_curve(&k, Theorem::T1a).unwrap();
    let g1 = make_g1(Theorem::T1a, &curve, &k).unwrap();
    let alpha = make_alpha(&curve).unwrap();
    let g2 = conjugate(&g1, &alpha, Side::InverseLeft, "G2").unwrap();
    Setup { curve, g1, g2, alpha }
}

/// The small setups the property checks draw from.
pub fn small_setups() -> Vec<Setup> {
    vec![setup(3, 1, 2), setup(5, 1, 3), setup(2, 3, 3)]
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn maps(s: &Setup) -> Vec<&RatMap> {
    s.g1.elements()
        .iter()
        .chain(s.g2.elements())
        .chain([&s.alpha])
        .collect()
}

/// Rebuilding an element from its own numerator and denominator gives it
/// back unchanged, as does multiplying by `b / b`.
pub fn normal_form_idempotent(s: &Setup, seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let a = FFElem::random(&s.curve, 3, &mut r);
    let den = BiPoly::from_uni(a.denominator(), Var::X);
    let again = FFElem::from_fraction(&s.curve, &a.numerator(), &den).map_err(|e| e.to_string())?;
    if again != a {
        return Err(format!("{a:?} renormalised to {again:?}"));
    }
    let b = FFElem::random(&s.curve, 2, &mut r);
    if b.is_zero() {
        return Ok(());
    }
    let ab = a.mul(&b).and_then(|t| t.div(&b)).map_err(|e| e.to_string())?;
    if ab != a {
        return Err(format!("(a*b)/b = {ab:?} for a = {a:?}"));
    }
    Ok(())
}

/// `(g o h)^* f = h^* (g^* f)`.
pub fn pullback_contravariant(s: &Setup, seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let ms = maps(s);
    let g = ms[(seed as usize) % ms.len()];
    let h = ms[(seed as usize / ms.len()) % ms.len()];
    let f = FFElem::random(&s.curve, 2, &mut r);
    let gh = g.compose(h).map_err(|e| e.to_string())?;
    let lhs = gh.pullback(&f).map_err(|e| e.to_string())?;
    let rhs = g
        .pullback(&f)
        .and_then(|t| h.pullback(&t))
        .map_err(|e| e.to_string())?;
    if lhs != rhs {
        return Err(format!("{} o {} on {f:?}", g.name(), h.name()));
    }
    Ok(())
}

/// The order read off a branch at precision `n` is unchanged at `2n`.
pub fn valuation_stable(s: &Setup, seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let f = FFElem::random(&s.curve, 2, &mut r);
    if f.is_zero() {
        return Ok(());
    }
    let centers = [ProjPoint::y_vertex(), ProjPoint::affine(FieldElem::ZERO, FieldElem::ZERO)];
    let center = centers[(seed as usize) % centers.len()];
    let place = Place::at(&s.curve, center, "P").map_err(|e| e.to_string())?;
    let order = |pl: &Place| {
        let (num, den) = f.series_parts(pl);
        match (num.valuation(), den.valuation()) {
            (Some(a), Some(b)) => Some(a - b),
            _ => None,
        }
    };
    let v = f.valuation(&place).map_err(|e| e.to_string())?;
    let n = place.precision();
    let fine = place.refine(2 * n).map_err(|e| e.to_string())?;
    match (order(&place), order(&fine)) {
        (Some(a), Some(b)) if a != b => Err(format!("order {a} at {n}, {b} at {}", 2 * n)),
        (_, Some(b)) if b != v => Err(format!("order {b} at {} but valuation {v}", 2 * n)),
        (_, Some(_)) => Ok(()),
        (_, None) => Err(format!("order of {f:?} unknown at precision {}", 2 * n)),
    }
}

/// Every row and column of the multiplication table is a permutation.
pub fn latin_square(g: &AutGroup) -> Result<(), String> {
    let t = g.table();
    let n = g.order();
    for i in 0..n {
        let mut row: Vec<usize> = t[i].clone();
        let mut col: Vec<usize> = (0..n).map(|j| t[j][i]).collect();
        row.sort_unstable();
        col.sort_unstable();
        if row != (0..n).collect::<Vec<_>>() || col != (0..n).collect::<Vec<_>>() {
            return Err(format!("{}: row or column {i} repeats", g.name()));
        }
    }
    Ok(())
}

/// `alpha o alpha` is the identity and `alpha` is its own inverse witness.
pub fn alpha_involution(s: &Setup) -> Result<(), String> {
    let aa = s.alpha.compose(&s.alpha).map_err(|e| e.to_string())?;
    if !aa.is_identity() {
        return Err("alpha o alpha is not the identity".into());
    }
    let inv = s.alpha.inverse().map_err(|e| e.to_string())?;
    if inv.components() != s.alpha.components() {
        return Err("alpha^-1 differs from alpha".into());
    }
    Ok(())
}
