//! Plane models `(f : g : 1)` of a curve, projections from points of the
//! plane and Galois certificates.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::branch::{local_equation, Place};
use crate::curve::{Curve, Family, PlaneCurve, ProjPoint};
use crate::degree::{extension_degree, extension_degree_witness, DegreeWitness};
use crate::error::{Error, Result};
use crate::field::{find_roots, FieldElem};
use crate::function_field::FFElem;
use crate::group::AutGroup;
use crate::linalg::Matrix;
use crate::maps::RatMap;
use crate::poly::{squarefree_part, TernaryForm, UniPoly};

/// Number of source points pushed onto the image as a sanity check.
pub const SAMPLE_POINTS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointClass {
    InnerSmooth,
    InnerSingular,
    Outer,
}

/// Multiplicity of `pt` on `curve`: the lowest total degree of the local
/// equation, 0 off the curve.
pub fn multiplicity(curve: &PlaneCurve, pt: &ProjPoint) -> u32 {
    if !curve.contains(pt) {
        return 0;
    }
    let loc = local_equation(curve, pt);
    loc.terms().map(|((i, j), _)| i + j).min().unwrap_or(0)
}

pub fn classify_point(image: &PlaneCurve, pt: &ProjPoint) -> PointClass {
    if !image.contains(pt) {
        PointClass::Outer
    } else if image.is_singular_at(pt) {
        PointClass::InnerSingular
    } else {
        PointClass::InnerSmooth
    }
}

/// Polynomial part `N` of `f = N / d`, and `d`, as elements of `K(C)`.
fn split(f: &FFElem) -> (FFElem, FFElem) {
    let c = f.curve();
    (
        FFElem::from_poly(c, &f.numerator()).expect("polynomial"),
        FFElem::from_uni(c, f.denominator()),
    )
}

fn powers(a: &FFElem, n: u32) -> Result<Vec<FFElem>> {
    let mut out = vec![FFElem::one(a.curve())];
    for i in 0..n as usize {
        out.push(out[i].mul(a)?);
    }
    Ok(out)
}

/// Kernel of `(i, j) -> N_f^i d_f^{k-i} N_g^j d_g^{k-j}` over `i + j <= k`,
/// written in the coefficient basis `x^a y^b`.
fn relations(
    pf: &[Vec<FFElem>; 2],
    pg: &[Vec<FFElem>; 2],
    k: u32,
) -> Result<(Vec<(u32, u32)>, Vec<Vec<FieldElem>>)> {
    let ctx = pf[0][0].ctx().clone();
    let mut cols: Vec<(u32, u32)> = Vec::new();
    let mut vecs: Vec<BTreeMap<(usize, usize), FieldElem>> = Vec::new();
    let mut rows: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for i in 0..=k {
        let a = pf[0][i as usize].mul(&pf[1][(k - i) as usize])?;
        for j in 0..=(k - i) {
            let prod = a.mul(&pg[0][j as usize])?.mul(&pg[1][(k - j) as usize])?;
            if prod.denominator().deg() != 0 {
                return Err(Error::Internal(
                    "product of polynomials has a denominator".into(),
                ));
            }
            let dinv = ctx.inv(prod.denominator().lc())?;
            let mut v = BTreeMap::new();
            for (b, n) in prod.numerator_coeffs().iter().enumerate() {
                for (a_, &c) in n.coeffs().iter().enumerate() {
                    if !c.is_zero() {
                        let len = rows.len();
                        rows.entry((a_, b)).or_insert(len);
                        v.insert((a_, b), ctx.mul(c, dinv));
                    }
                }
            }
            cols.push((i, j));
            vecs.push(v);
        }
    }
    let mut m = Matrix::zeros(rows.len(), cols.len());
    for (c, v) in vecs.iter().enumerate() {
        for (key, &val) in v {
            m.set(rows[key], c, val);
        }
    }
    Ok((cols, m.nullspace(&ctx)))
}

/// The lowest-degree form `G` with `G(f, g, 1) = 0`, by linear algebra on
/// the monomials of degree `k = 1, 2, ...` up to `max_degree`.
pub fn implicitize(f: &FFElem, g: &FFElem, max_degree: u32) -> Result<TernaryForm> {
    if !Arc::ptr_eq(f.curve(), g.curve()) {
        return Err(Error::InvalidParameters(
            "functions on different curves".into(),
        ));
    }
    let ctx = f.ctx().clone();
    let (nf, df) = split(f);
    let (ng, dg) = split(g);
    let pf = [powers(&nf, max_degree)?, powers(&df, max_degree)?];
    let pg = [powers(&ng, max_degree)?, powers(&dg, max_degree)?];
    for k in 1..=max_degree {
        let (cols, kernel) = relations(&pf, &pg, k)?;
        match kernel.len() {
            0 => continue,
            1 => {
                let terms: Vec<_> = cols
                    .iter()
                    .zip(&kernel[0])
                    .map(|(&(i, j), &c)| (c, i, j, k - i - j))
                    .collect();
                return Ok(TernaryForm::from_terms(&ctx, k, &terms)?.normalized());
            }
            _ => {
                return Err(Error::Degree(format!(
                    "f and g satisfy {} independent relations of degree {k}",
                    kernel.len()
                )))
            }
        }
    }
    Err(Error::Degree(format!(
        "no relation of degree <= {max_degree}"
    )))
}

/// `(f : g : 1)` with its image.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub map: RatMap,
    pub image: Curve,
    pub degree: u32,
    /// `[K(C) : K(f)]`.
    pub degree_f: usize,
    /// `deg_Y G`, which is `[K(f, g) : K(f)]`.
    pub degree_y: u32,
    pub birational: bool,
    /// Source points checked to land on the image.
    pub samples_on_image: usize,
}

fn affine_points(curve: &Curve, want: usize) -> Result<Vec<(FieldElem, FieldElem)>> {
    let ctx = curve.ctx();
    let k = curve
        .kummer_model()
        .ok_or_else(|| Error::InvalidParameters("sampling needs a model y^e = h(x)".into()))?;
    let mut out = Vec::new();
    for x0 in ctx.elements() {
        let mut c = vec![FieldElem::ZERO; k.e as usize + 1];
        c[0] = ctx.neg(k.h.eval(x0));
        c[k.e as usize] = FieldElem::ONE;
        for y0 in find_roots(&UniPoly::new(ctx, c))? {
            out.push((x0, y0));
            if out.len() == want {
                return Ok(out);
            }
        }
    }
    Ok(out)
}

/// Builds the image of `(f : g : 1)` and checks birationality: the map is
/// birational onto its image exactly when `deg_Y G = [K(C) : K(f)]`.
pub fn build_embedding(
    name: &str,
    f: &FFElem,
    g: &FFElem,
    max_degree: u32,
    seed: u64,
) -> Result<Embedding> {
    let form = implicitize(f, g, max_degree)?;
    let degree = form.degree();
    let degree_y = form.terms().map(|(_, j, _, _)| j).max().unwrap_or(0);
    let image: Curve = Arc::new(PlaneCurve::from_form(form, Family::Image));
    let map = RatMap::new(name, &image, f.clone(), g.clone())?;
    let degree_f = extension_degree(f, seed)?;
    let mut samples_on_image = 0;
    for (x0, y0) in affine_points(f.curve(), SAMPLE_POINTS)? {
        if let (Some(a), Some(b)) = (f.eval_at(x0, y0), g.eval_at(x0, y0)) {
            if !image.contains(&ProjPoint::affine(a, b)) {
                return Err(Error::Verification(format!(
                    "{name} sends a point off its image"
                )));
            }
            samples_on_image += 1;
        }
    }
    Ok(Embedding {
        map,
        birational: degree_y as usize == degree_f,
        image,
        degree,
        degree_f,
        degree_y,
        samples_on_image,
    })
}

/// `t = L_1(f, g, 1) / L_2(f, g, 1)` where `L_1, L_2` span the lines
/// through `center`.
pub fn base_function(emb: &Embedding, center: &ProjPoint) -> Result<FFElem> {
    let ctx = emb.image.ctx();
    let mut m = Matrix::zeros(1, 3);
    for (i, &c) in center.coords().iter().enumerate() {
        m.set(0, i, c);
    }
    let basis = m.nullspace(ctx);
    let (f, g) = emb.map.components();
    let one = FFElem::one(f.curve());
    let lin = |l: &[FieldElem]| -> Result<FFElem> {
        f.scale(l[0]).add(&g.scale(l[1]))?.add(&one.scale(l[2]))
    };
    lin(&basis[0])?.div(&lin(&basis[1])?)
}

/// `e_P` of `t`: `v_P(t - t(P))`, or `-v_P(t)` at a pole.
pub fn ramification_index(t: &FFElem, place: &Place) -> Result<i64> {
    let (v, lc) = t.leading(place)?;
    match v {
        0 => t.sub(&FFElem::constant(t.curve(), lc))?.valuation(place),
        v => Ok(v.abs()),
    }
}

/// Evidence that projection from `center` is Galois.
#[derive(Clone, Debug, Serialize)]
pub struct GaloisCertificate {
    pub center: String,
    pub class: PointClass,
    pub base_function: String,
    /// `t` agrees with the projection from `center`.
    pub base_matches: bool,
    pub group: Option<String>,
    pub group_order: usize,
    pub elements_distinct: bool,
    /// Names of elements that move `t`.
    pub moved_by: Vec<String>,
    pub degree: Option<DegreeWitness>,
    /// `d - mult(center)`.
    pub projection_degree: u32,
    /// `e_P(t)` at the place over an inner center.
    pub ramification: Option<i64>,
    pub certified: bool,
}

/// Certifies `center` with base function `t` and group `group`. For inner
/// centers, `place` is the source place over the center, which must be
/// totally ramified.
pub fn galois_certify(
    emb: &Embedding,
    center: &ProjPoint,
    t: &FFElem,
    group: Option<&AutGroup>,
    place: Option<&Place>,
    seed: u64,
) -> Result<GaloisCertificate> {
    let ctx = emb.image.ctx();
    let class = classify_point(&emb.image, center);
    let base_matches = base_function(emb, center)? == *t;
    let projection_degree = emb.degree - multiplicity(&emb.image, center);
    let degree = Some(extension_degree_witness(t, seed)?);
    let mut moved_by = Vec::new();
    let mut elements_distinct = false;
    if let Some(g) = group {
        for s in g.elements() {
            if s.pullback(t)? != *t {
                moved_by.push(s.name().to_string());
            }
        }
        let mut seen: Vec<&RatMap> = Vec::new();
        for s in g.elements() {
            if !seen.contains(&s) {
                seen.push(s);
            }
        }
        elements_distinct = seen.len() == g.order();
    }
    let ramification = match (class, place) {
        (PointClass::Outer, _) | (_, None) => None,
        (_, Some(p)) => Some(ramification_index(t, p)?),
    };
    let order = group.map_or(0, |g| g.order());
    let certified = class != PointClass::InnerSingular
        && base_matches
        && group.is_some()
        && elements_distinct
        && moved_by.is_empty()
        && degree.as_ref().is_some_and(|d| d.eliminant == order)
        && order == projection_degree as usize
        && (class == PointClass::Outer || ramification == Some(projection_degree as i64));
    Ok(GaloisCertificate {
        center: center.format(ctx),
        class,
        base_function: t.format(),
        base_matches,
        group: group.map(|g| g.name().to_string()),
        group_order: order,
        elements_distinct,
        moved_by,
        degree,
        projection_degree,
        ramification,
        certified,
    })
}

/// Points of `image` on the line `Z = 0`, and whether they are all defined
/// over the constant field.
pub fn points_at_infinity(image: &PlaneCurve) -> Result<(Vec<ProjPoint>, bool)> {
    let ctx = image.ctx();
    let bin = image.form().at_infinity();
    let mut pts = Vec::new();
    let mut expected = 0usize;
    // (0 : 1 : 0) lies on the curve iff the Y^d coefficient vanishes
    if bin.last().is_some_and(|c| c.is_zero()) {
        pts.push(ProjPoint::y_vertex());
        expected += 1;
    }
    // F(1, T, 0)
    let p = UniPoly::new(ctx, bin);
    if p.is_zero() {
        return Err(Error::Degree("the line Z = 0 is a component".into()));
    }
    let sq = squarefree_part(&p)?;
    let roots = find_roots(&sq)?;
    expected += sq.deg().max(0) as usize;
    for r in roots {
        pts.push(ProjPoint::new(ctx, [FieldElem::ONE, r, FieldElem::ZERO])?);
    }
    pts.sort();
    Ok((pts.clone(), pts.len() == expected))
}

/// Tangent line at a smooth point, from the gradient of the form.
pub fn tangent_line(image: &PlaneCurve, pt: &ProjPoint) -> Result<[FieldElem; 3]> {
    let grad = [0, 1, 2].map(|i| image.form().partial(i).eval(pt.coords()));
    if grad.iter().all(|g| g.is_zero()) {
        return Err(Error::InvalidParameters(format!(
            "{} is singular",
            pt.format(image.ctx())
        )));
    }
    Ok(grad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{make_family_constants, FamilyConstants, Mode, DEFAULT_EXT_CAP};
    use crate::families::{family_curve, make_alpha, make_g1, Theorem};
    use crate::group::{conjugate, Side};

    fn phi(p: u64, m: u64) -> (FamilyConstants, Curve, Embedding) {
        let k = make_family_constants(p, 1, Mode::Fm { m }, DEFAULT_EXT_CAP).unwrap();
        let c = family_curve(&k, Theorem::T1a).unwrap();
        let s = c.family().s().unwrap();
        let y = FFElem::y(&c);
        let f = y.inv().unwrap();
        let g = FFElem::x(&c).pow(s).unwrap().div(&y).unwrap();
        let emb = build_embedding("phi", &f, &g, 16, 0).unwrap();
        (k, c, emb)
    }

    #[test]
    fn phi_image_has_degree_q_plus_one() {
        let (_, c, emb) = phi(3, 2);
        assert_eq!(emb.degree, 4);
        assert!(emb.birational);
        assert!(emb.samples_on_image > 0);
        let inf = Place::at(&c, ProjPoint::y_vertex(), "P_inf").unwrap();
        let o = Place::at(
            &c,
            ProjPoint::affine(FieldElem::ZERO, FieldElem::ZERO),
            "P_0",
        )
        .unwrap();
        assert_eq!(emb.map.image_of_place(&inf).unwrap(), ProjPoint::y_vertex());
        assert_eq!(emb.map.image_of_place(&o).unwrap(), ProjPoint::x_vertex());
        assert_eq!(
            classify_point(&emb.image, &ProjPoint::y_vertex()),
            PointClass::InnerSmooth
        );
        let off = ProjPoint::affine(FieldElem::ONE, FieldElem::ONE);
        if !emb.image.contains(&off) {
            assert_eq!(classify_point(&emb.image, &off), PointClass::Outer);
        }
    }

    #[test]
    fn certificates_at_the_vertices() {
        let (k, c, emb) = phi(3, 2);
        let g1 = make_g1(Theorem::T1a, &c, &k).unwrap();
        let g2 = conjugate(&g1, &make_alpha(&c).unwrap(), Side::InverseLeft, "G2").unwrap();
        let inf = Place::at(&c, ProjPoint::y_vertex(), "P_inf").unwrap();
        let o = Place::at(
            &c,
            ProjPoint::affine(FieldElem::ZERO, FieldElem::ZERO),
            "P_0",
        )
        .unwrap();
        let t1 = base_function(&emb, &ProjPoint::y_vertex()).unwrap();
        assert_eq!(t1, FFElem::y(&c).inv().unwrap());
        let cert =
            galois_certify(&emb, &ProjPoint::y_vertex(), &t1, Some(&g1), Some(&inf), 0).unwrap();
        assert!(cert.certified, "{cert:?}");
        assert_eq!(cert.projection_degree, 3);
        assert_eq!(cert.ramification, Some(3));
        let t2 = base_function(&emb, &ProjPoint::x_vertex()).unwrap();
        let cert2 =
            galois_certify(&emb, &ProjPoint::x_vertex(), &t2, Some(&g2), Some(&o), 0).unwrap();
        assert!(cert2.certified, "{cert2:?}");
        // the wrong group moves t
        let bad =
            galois_certify(&emb, &ProjPoint::x_vertex(), &t2, Some(&g1), Some(&o), 0).unwrap();
        assert!(!bad.certified);
    }

    #[test]
    fn tangent_at_the_flex() {
        let (_, _, emb) = phi(5, 3);
        let pt = ProjPoint::y_vertex();
        let l = tangent_line(&emb.image, &pt).unwrap();
        let i = crate::branch::intersection_multiplicity(&emb.image, l, &pt).unwrap();
        assert_eq!(i, 6);
        let (pts, split) = points_at_infinity(&emb.image).unwrap();
        assert!(split);
        assert!(pts.contains(&pt));
    }

    #[test]
    fn ramification_of_a_generic_place() {
        let (_, c, _) = phi(5, 2);
        let pt = affine_points(&c, 30)
            .unwrap()
            .into_iter()
            .find(|&(x, y)| !x.is_zero() && !y.is_zero())
            .unwrap();
        let place = Place::at(&c, ProjPoint::affine(pt.0, pt.1), "Q").unwrap();
        assert_eq!(ramification_index(&FFElem::x(&c), &place).unwrap(), 1);
    }
}
