//! Projective plane curves, their points and singular loci.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{find_roots, FieldCtx, FieldElem, FieldHom};
use crate::poly::{dehomogenize, homogenize, resultant, BiPoly, Chart, TernaryForm, UniPoly, Var};

/// Which family a curve belongs to, with its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `y^m = x^q + x` with `m | q + 1`, `2 <= m < q`.
    Fm {
        q: u64,
        m: u64,
    },
    /// `y^{q^r + 1} = x^q + x` with `r >= 2`.
    Gr {
        q: u64,
        r: u32,
    },
    /// `y^m = x^{q+1} - 1`.
    Em {
        q: u64,
        m: u64,
    },
    Image,
    Other,
}

impl Family {
    /// `s = (q + 1) / m` for the `F_m` and `E_m` families.
    pub fn s(&self) -> Option<u64> {
        match *self {
            Family::Fm { q, m } | Family::Em { q, m } => Some((q + 1) / m),
            _ => None,
        }
    }

    pub fn name(&self) -> String {
        match *self {
            Family::Fm { q, m } => format!("F_{m}(q={q})"),
            Family::Gr { q, r } => format!("G_{r}(q={q})"),
            Family::Em { q, m } => format!("E_{m}(q={q})"),
            Family::Image => "image".into(),
            Family::Other => "curve".into(),
        }
    }
}

/// Affine model `y^e = h(x)` with `p` not dividing `e`.
#[derive(Clone, Debug)]
pub struct Kummer {
    pub e: u32,
    pub h: UniPoly,
}

pub struct PlaneCurve {
    ctx: Arc<FieldCtx>,
    form: TernaryForm,
    affine: BiPoly,
    family: Family,
    kummer: Option<Kummer>,
}

pub type Curve = Arc<PlaneCurve>;

impl fmt::Debug for PlaneCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.family.name(), self.form.format())
    }
}

/// `q` as a power of `p`, or an error.
fn check_prime_power(p: u32, q: u64) -> Result<()> {
    let mut v = q;
    while v > 1 && v % p as u64 == 0 {
        v /= p as u64;
    }
    if v != 1 || q < p as u64 {
        return Err(Error::InvalidParameters(format!(
            "q = {q} is not a power of {p}"
        )));
    }
    Ok(())
}

/// Checks the family constraints.
pub fn validate_family(p: u32, family: &Family) -> Result<()> {
    match *family {
        Family::Fm { q, m } | Family::Em { q, m } => {
            check_prime_power(p, q)?;
            if m == 0 || (q + 1) % m != 0 {
                return Err(Error::InvalidParameters(format!(
                    "m = {m} does not divide q + 1 = {}",
                    q + 1
                )));
            }
            if m < 2 || m >= q {
                return Err(Error::InvalidParameters(format!(
                    "need 2 <= m < q, got m = {m}, q = {q}"
                )));
            }
            Ok(())
        }
        Family::Gr { q, r } => {
            check_prime_power(p, q)?;
            if r < 2 {
                return Err(Error::InvalidParameters(format!("need r >= 2, got {r}")));
            }
            if q.checked_pow(r).is_none_or(|v| v > u32::MAX as u64) {
                return Err(Error::InvalidParameters("q^r is too large".into()));
            }
            Ok(())
        }
        Family::Image | Family::Other => Ok(()),
    }
}

/// Builds a family curve over `ctx`.
pub fn make_curve(ctx: &Arc<FieldCtx>, family: Family) -> Result<Curve> {
    validate_family(ctx.p(), &family)?;
    let x = UniPoly::x(ctx);
    let one = UniPoly::one(ctx);
    let (e, h) = match family {
        Family::Fm { q, m } => (m as u32, &x.pow(q) + &x),
        Family::Gr { q, r } => (q.pow(r) as u32 + 1, &x.pow(q) + &x),
        Family::Em { q, m } => (m as u32, &x.pow(q + 1) - &one),
        _ => {
            return Err(Error::InvalidParameters("not a family curve".into()));
        }
    };
    Ok(Arc::new(PlaneCurve::kummer(e, h, family)?))
}

impl PlaneCurve {
    /// The closure of `y^e = h(x)` in the plane.
    pub fn kummer(e: u32, h: UniPoly, family: Family) -> Result<PlaneCurve> {
        let ctx = h.ctx().clone();
        if e == 0 || e % ctx.p() == 0 || h.deg() < 1 {
            return Err(Error::InvalidParameters(
                "y^e = h(x) needs p not dividing e and deg h >= 1".into(),
            ));
        }
        let affine = &BiPoly::monomial(&ctx, FieldElem::ONE, 0, e) - &BiPoly::from_uni(&h, Var::X);
        let d = e.max(h.deg() as u32);
        let form = homogenize(&affine, d)?;
        Ok(PlaneCurve {
            ctx,
            form,
            affine,
            family,
            kummer: Some(Kummer { e, h }),
        })
    }

    /// A curve given only by its form.
    pub fn from_form(form: TernaryForm, family: Family) -> PlaneCurve {
        PlaneCurve {
            ctx: form.ctx().clone(),
            affine: dehomogenize(&form, Chart::Z),
            form,
            family,
            kummer: None,
        }
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn form(&self) -> &TernaryForm {
        &self.form
    }

    pub fn degree(&self) -> u32 {
        self.form.degree()
    }

    /// Dehomogenization in the `Z = 1` chart.
    pub fn affine(&self) -> &BiPoly {
        &self.affine
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn kummer_model(&self) -> Option<&Kummer> {
        self.kummer.as_ref()
    }

    pub fn contains(&self, pt: &ProjPoint) -> bool {
        self.form.eval(pt.coords()).is_zero()
    }

    pub fn is_singular_at(&self, pt: &ProjPoint) -> bool {
        self.contains(pt) && (0..3).all(|i| self.form.partial(i).eval(pt.coords()).is_zero())
    }

    /// The same curve with coefficients pushed through `hom`.
    pub fn map_coeffs(&self, hom: &FieldHom) -> PlaneCurve {
        PlaneCurve {
            ctx: hom.dst().clone(),
            form: self.form.map_coeffs(hom),
            affine: self.affine.map_coeffs(hom),
            family: self.family,
            kummer: self.kummer.as_ref().map(|k| Kummer {
                e: k.e,
                h: k.h.map_coeffs(hom),
            }),
        }
    }
}

/// A point of the projective plane, scaled so that `Z = 1` when `Z != 0`
/// and otherwise the first nonzero coordinate is 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct ProjPoint([FieldElem; 3]);

impl ProjPoint {
    pub fn new(ctx: &FieldCtx, c: [FieldElem; 3]) -> Result<ProjPoint> {
        let pivot = if !c[2].is_zero() {
            c[2]
        } else {
            *c.iter()
                .find(|v| !v.is_zero())
                .ok_or(Error::InvalidParameters("(0:0:0) is not a point".into()))?
        };
        let inv = ctx.inv(pivot)?;
        Ok(ProjPoint(c.map(|v| ctx.mul(v, inv))))
    }

    pub fn affine(x: FieldElem, y: FieldElem) -> ProjPoint {
        ProjPoint([x, y, FieldElem::ONE])
    }

    /// `(0:1:0)`.
    pub fn y_vertex() -> ProjPoint {
        ProjPoint([FieldElem::ZERO, FieldElem::ONE, FieldElem::ZERO])
    }

    /// `(1:0:0)`.
    pub fn x_vertex() -> ProjPoint {
        ProjPoint([FieldElem::ONE, FieldElem::ZERO, FieldElem::ZERO])
    }

    pub fn coords(&self) -> [FieldElem; 3] {
        self.0
    }

    pub fn is_at_infinity(&self) -> bool {
        self.0[2].is_zero()
    }

    /// Affine coordinates when `Z != 0`.
    pub fn xy(&self) -> Option<(FieldElem, FieldElem)> {
        (!self.is_at_infinity()).then_some((self.0[0], self.0[1]))
    }

    pub fn map(&self, hom: &FieldHom) -> ProjPoint {
        ProjPoint(self.0.map(|v| hom.apply(v)))
    }

    pub fn format(&self, ctx: &FieldCtx) -> String {
        let c: Vec<String> = self.0.iter().map(|&v| ctx.format(v)).collect();
        format!("({})", c.join(":"))
    }
}

/// All points over `hom.dst()` where the form and its partials vanish.
pub fn singular_locus(curve: &PlaneCurve, hom: &FieldHom) -> Result<Vec<ProjPoint>> {
    let big = hom.dst();
    let form = curve.form.map_coeffs(hom);
    let partials: Vec<TernaryForm> = (0..3).map(|i| form.partial(i)).collect();
    let is_sing =
        |c: [FieldElem; 3]| form.eval(c).is_zero() && partials.iter().all(|g| g.eval(c).is_zero());
    let mut out = Vec::new();

    let f = dehomogenize(&form, Chart::Z);
    let fx = f.partial(Var::X);
    let fy = f.partial(Var::Y);
    for x0 in singular_abscissae(&f, &[&fx, &fy])? {
        let fibre: Vec<UniPoly> = [&f, &fx, &fy]
            .iter()
            .map(|g| g.eval_var(Var::X, x0))
            .filter(|g| !g.is_zero())
            .collect();
        let Some(first) = fibre.first() else {
            return Err(Error::Degree("the curve contains a vertical line".into()));
        };
        let g = fibre
            .iter()
            .skip(1)
            .fold(first.clone(), |acc, h| acc.gcd(h));
        if g.is_constant() {
            continue;
        }
        for y0 in find_roots(&g)? {
            let c = [x0, y0, FieldElem::ONE];
            if is_sing(c) {
                out.push(ProjPoint(c));
            }
        }
    }

    let inf = form.at_infinity();
    if inf.iter().all(|c| c.is_zero()) {
        return Err(Error::Degree("the line Z = 0 is a component".into()));
    }
    for y0 in find_roots(&UniPoly::new(big, inf.clone()))? {
        let c = [FieldElem::ONE, y0, FieldElem::ZERO];
        if is_sing(c) {
            out.push(ProjPoint(c));
        }
    }
    if inf.last().is_some_and(|c| c.is_zero()) && is_sing(ProjPoint::y_vertex().0) {
        out.push(ProjPoint::y_vertex());
    }
    out.sort();
    Ok(out)
}

/// Values `x0` over which a common zero of `f` and the `others` may lie.
fn singular_abscissae(f: &BiPoly, others: &[&BiPoly]) -> Result<Vec<FieldElem>> {
    let ctx = f.ctx();
    let mut acc: Option<UniPoly> = None;
    let mut push = |g: UniPoly| {
        acc = Some(match acc.take() {
            None => g,
            Some(a) => a.gcd(&g),
        });
    };
    if f.degree_in(Var::Y).unwrap_or(0) == 0 {
        push(f.to_uni(Var::X).expect("no y"));
    }
    for g in others {
        if g.is_zero() {
            continue;
        }
        if g.degree_in(Var::Y).unwrap_or(0) == 0 {
            push(g.to_uni(Var::X).expect("no y"));
        } else if f.degree_in(Var::Y).unwrap_or(0) > 0 {
            let r = resultant(f, g, Var::Y)?;
            if !r.is_zero() {
                push(r);
            }
        }
    }
    match acc {
        Some(a) if a.is_zero() => Ok(ctx.elements().collect()),
        Some(a) if a.is_constant() => Ok(Vec::new()),
        Some(a) => find_roots(&a),
        None => Ok(ctx.elements().collect()),
    }
}
