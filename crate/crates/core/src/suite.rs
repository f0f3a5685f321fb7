//! Per-construction check suites and the JSON report.

use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::branch::{intersection_multiplicity, Place};
use crate::constants::{make_family_constants, validate, FamilyConstants, Mode, DEFAULT_EXT_CAP};
use crate::curve::{Curve, ProjPoint};
use crate::embedding::{
    base_function, build_embedding, classify_point, galois_certify, points_at_infinity,
    ramification_index, tangent_line, Embedding, GaloisCertificate, PointClass,
};
use crate::error::{Error, Result};
use crate::families::{
    check_gb_properties, family_curve, lemma1_chain, make_alpha, make_beta, make_g1, make_gamma,
    Theorem,
};
use crate::field::FieldElem;
use crate::function_field::FFElem;
use crate::group::{conjugate, group_intersection, orbit, verify_fixed_field, AutGroup, Side};

/// Random values per property in the `g_b` checks.
const GB_SAMPLES: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Selector {
    Thm1a,
    Thm1b,
    Thm2,
    Lemma1,
    Prop1,
    All,
}

impl FromStr for Selector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Selector> {
        Ok(match s {
            "thm1a" => Selector::Thm1a,
            "thm1b" => Selector::Thm1b,
            "thm2" => Selector::Thm2,
            "lemma1" => Selector::Lemma1,
            "prop1" => Selector::Prop1,
            "all" => Selector::All,
            _ => return Err(Error::InvalidParameters(format!("unknown selector {s}"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub p: u64,
    pub n: u32,
    pub m: Option<u64>,
    pub r: Option<u32>,
    pub check: Selector,
    pub seed: u64,
    pub ext_cap: u32,
    /// Initial branch precision; `None` uses `4 d`.
    pub precision: Option<usize>,
    /// Record wall-clock milliseconds (breaks byte-identical reruns).
    pub timings: bool,
}

impl RunConfig {
    pub fn new(p: u64, n: u32, check: Selector) -> RunConfig {
        RunConfig {
            p,
            n,
            m: None,
            r: None,
            check,
            seed: 0,
            ext_cap: DEFAULT_EXT_CAP,
            precision: None,
            timings: false,
        }
    }

    pub fn with_m(mut self, m: u64) -> RunConfig {
        self.m = Some(m);
        self
    }

    pub fn with_r(mut self, r: u32) -> RunConfig {
        self.r = Some(r);
        self
    }

    pub fn mode(&self) -> Result<Mode> {
        let needs_r = self.check == Selector::Thm2;
        match (self.m, self.r) {
            (Some(m), None) if !needs_r => Ok(Mode::Fm { m }),
            (None, Some(r)) if needs_r || self.check == Selector::All => Ok(Mode::Gr { r }),
            (Some(_), Some(_)) => Err(Error::InvalidParameters(
                "give exactly one of m and r".into(),
            )),
            _ if needs_r => Err(Error::InvalidParameters("thm2 needs r".into())),
            _ => Err(Error::InvalidParameters(format!(
                "{:?} needs m",
                self.check
            ))),
        }
    }

    /// Parameter checks done before any computation.
    pub fn validate(&self) -> Result<Mode> {
        let mode = self.mode()?;
        let q = validate(self.p, self.n, mode)?;
        if self.check == Selector::Prop1 && mode == (Mode::Fm { m: 2 }) && q == 3 {
            return Err(Error::InvalidParameters(
                "the exclusions need (q, m) != (3, 2)".into(),
            ));
        }
        if self.ext_cap == 0 {
            return Err(Error::InvalidParameters("ext-cap must be positive".into()));
        }
        Ok(mode)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Rests on facts outside the engine; reported, never failing.
    External,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub anchor: String,
    pub status: Status,
    pub witness: Value,
    pub millis: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub config: RunConfig,
    /// `[p, k]` of the constant field.
    pub constant_field: Option<[u64; 2]>,
    pub checks: Vec<Check>,
    pub verdict: Status,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.verdict == Status::Pass
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// JSON with sorted keys.
    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("report serializes");
        serde_json::to_string_pretty(&v).expect("value serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::External => "EXT ",
            };
            out.push_str(&format!("{tag}  {:width$}  {}\n", c.name, c.anchor));
        }
        out.push_str(&format!(
            "verdict: {}\n",
            if self.passed() { "pass" } else { "fail" }
        ));
        out
    }
}

struct Recorder {
    checks: Vec<Check>,
    timings: bool,
}

impl Recorder {
    /// Runs `f`, which yields a value, a pass flag and a witness.
    fn build<T>(
        &mut self,
        name: &str,
        anchor: &str,
        f: impl FnOnce() -> Result<(T, bool, Value)>,
    ) -> Option<T> {
        let start = Instant::now();
        let (out, status, witness) = match f() {
            Ok((v, ok, w)) => (Some(v), if ok { Status::Pass } else { Status::Fail }, w),
            Err(e) => (None, Status::Fail, json!({ "error": e.to_string() })),
        };
        self.checks.push(Check {
            name: name.into(),
            anchor: anchor.into(),
            status,
            witness,
            millis: if self.timings {
                start.elapsed().as_millis() as u64
            } else {
                0
            },
        });
        out
    }

    fn check(
        &mut self,
        name: &str,
        anchor: &str,
        f: impl FnOnce() -> Result<(bool, Value)>,
    ) -> bool {
        self.build(name, anchor, || f().map(|(ok, w)| ((), ok, w)))
            .is_some()
            && self.checks.last().is_some_and(|c| c.status == Status::Pass)
    }

    fn external(&mut self, name: &str, anchor: &str, note: &str) {
        self.checks.push(Check {
            name: name.into(),
            anchor: anchor.into(),
            status: Status::External,
            witness: json!({ "note": note }),
            millis: 0,
        });
    }
}

struct Ctx<'a> {
    cfg: &'a RunConfig,
    k: FamilyConstants,
}

impl Ctx<'_> {
    fn place(&self, c: &Curve, pt: ProjPoint, label: &str) -> Result<Place> {
        match self.cfg.precision {
            Some(n) => Place::new(c, pt, label, n),
            None => Place::at(c, pt, label),
        }
    }

    fn fmt(&self, a: FieldElem) -> String {
        self.k.field.format(a)
    }

    fn pt(&self, p: &ProjPoint) -> String {
        p.format(&self.k.field)
    }

    fn pts(&self, ps: &[ProjPoint]) -> Vec<String> {
        ps.iter().map(|p| self.pt(p)).collect()
    }
}

fn cert_json(c: &GaloisCertificate) -> Value {
    serde_json::to_value(c).expect("certificate serializes")
}

fn group_check(
    rec: &mut Recorder,
    name: &str,
    anchor: &str,
    want: usize,
    f: impl FnOnce() -> Result<AutGroup>,
) -> Option<AutGroup> {
    rec.build(name, anchor, || {
        let g = f()?;
        let ok = g.order() == want;
        let names: Vec<&str> = g.elements().iter().map(|e| e.name()).collect();
        Ok((
            g.clone(),
            ok,
            json!({ "order": g.order(), "expected": want, "elements": names }),
        ))
    })
}

fn fixed_field_check(
    rec: &mut Recorder,
    name: &str,
    anchor: &str,
    g: &AutGroup,
    t: &FFElem,
    seed: u64,
) -> bool {
    rec.check(name, anchor, || {
        let r = verify_fixed_field(g, t, seed)?;
        Ok((r.holds, serde_json::to_value(&r).expect("serializes")))
    })
}

/// Picks the first candidate generating the fixed field of `g`.
fn pick_generator(
    rec: &mut Recorder,
    name: &str,
    anchor: &str,
    g: &AutGroup,
    cands: Vec<(&str, FFElem)>,
    seed: u64,
) -> Option<FFElem> {
    rec.build(name, anchor, || {
        let mut tried = Vec::new();
        for (label, t) in cands {
            let r = verify_fixed_field(g, &t, seed)?;
            let w = serde_json::to_value(&r).expect("serializes");
            if r.holds {
                return Ok((
                    Some(t),
                    true,
                    json!({ "chosen": label, "report": w, "rejected": tried }),
                ));
            }
            tried.push(json!({ "candidate": label, "report": w }));
        }
        Ok((None, false, json!({ "rejected": tried })))
    })
    .flatten()
}

fn embedding_check(
    rec: &mut Recorder,
    name: &str,
    f: &FFElem,
    g: &FFElem,
    want: u32,
    seed: u64,
) -> Option<Embedding> {
    rec.build(
        &format!("{name} image degree"),
        "deg image = target, deg_Y G = [K(C) : K(f)]",
        || {
            let e = build_embedding(name, f, g, want, seed)?;
            let ok = e.degree == want && e.birational;
            let w = json!({
                "degree": e.degree,
                "expected": want,
                "degree_f": e.degree_f,
                "degree_y": e.degree_y,
                "birational": e.birational,
                "samples_on_image": e.samples_on_image,
                "form": e.image.form().format(),
            });
            Ok((e, ok, w))
        },
    )
}

/// `sigma(P) = P` for every element of `fixers`, `sigma(P) != P` for every
/// non-identity element of `movers`.
fn separation(fixers: &AutGroup, movers: &AutGroup, pt: ProjPoint) -> Result<bool> {
    let fixed = fixers
        .elements()
        .iter()
        .map(|s| s.image_of_point(pt))
        .collect::<Result<Vec<_>>>()?;
    let moved = movers.elements()[1..]
        .iter()
        .map(|s| s.image_of_point(pt))
        .collect::<Result<Vec<_>>>()?;
    Ok(fixed.iter().all(|p| *p == pt) && moved.iter().all(|p| *p != pt))
}

fn thm1a(cx: &Ctx, rec: &mut Recorder) -> Option<()> {
    let k = &cx.k;
    let seed = cx.cfg.seed;
    let q = k.q;
    let c = rec.build("curve F_m", "y^m = x^q + x", || {
        let c = family_curve(k, Theorem::T1a)?;
        Ok((
            c.clone(),
            true,
            json!({ "form": c.form().format(), "degree": c.degree() }),
        ))
    })?;
    let Mode::Fm { m } = k.mode else { return None };
    let s = c.family().s()?;
    let x = FFElem::x(&c);
    let y = FFElem::y(&c);

    let alpha = rec.build(
        "alpha identity",
        "(1/x)^q + 1/x = (x^q + x)/x^{q+1} = y^m/x^{sm}, alpha o alpha = id",
        || {
            let a = make_alpha(&c)?;
            let (u, v) = a.components();
            let lhs = u.pow(q)?.add(u)?;
            let mid = y.pow(m)?.div(&x.pow(s * m)?)?;
            let ok = lhs == mid && v.pow(m)? == mid && a.compose(&a)?.is_identity();
            Ok((a.clone(), ok, json!({ "alpha": format!("{a:?}") })))
        },
    )?;
    let g1 = group_check(
        rec,
        "G1 order",
        "G1 = {x -> x + lambda : lambda^q + lambda = 0}, |G1| = q",
        q as usize,
        || make_g1(Theorem::T1a, &c, k),
    )?;
    let g2 = group_check(
        rec,
        "G2 order",
        "G2 = alpha^-1 G1 alpha",
        q as usize,
        || conjugate(&g1, &alpha, Side::InverseLeft, "G2"),
    )?;
    rec.check("G1 and G2 intersect trivially", "G1 cap G2 = {id}", || {
        let i = group_intersection(&g1, &g2);
        Ok((
            i.len() == 1 && i[0].is_identity(),
            json!({ "common": i.len() }),
        ))
    });

    let origin = ProjPoint::affine(FieldElem::ZERO, FieldElem::ZERO);
    let p_inf = cx.place(&c, ProjPoint::y_vertex(), "P_inf").ok()?;
    let p_0 = cx.place(&c, origin, "P_0").ok()?;
    rec.check(
        "alpha swaps P_0 and P_inf",
        "alpha(P_0) = P_inf, alpha(P_inf) = P_0",
        || {
            let a = alpha.image_of_place(&p_0)?;
            let b = alpha.image_of_place(&p_inf)?;
            Ok((
                a == ProjPoint::y_vertex() && b == origin,
                json!({ "alpha(P_0)": cx.pt(&a), "alpha(P_inf)": cx.pt(&b) }),
            ))
        },
    );
    rec.check("orbit W", "{P_inf} + G1 P_0 = W = {P_0} + G2 P_inf", || {
        let mut w: Vec<ProjPoint> = k
            .lambda_set
            .iter()
            .map(|&l| ProjPoint::affine(l, FieldElem::ZERO))
            .collect();
        w.push(ProjPoint::y_vertex());
        w.sort();
        let mut left = orbit(&g1, &p_0)?;
        left.push(ProjPoint::y_vertex());
        left.sort();
        let mut right = orbit(&g2, &p_inf)?;
        right.push(origin);
        right.sort();
        let ok = left == w && right == w;
        Ok((
            ok,
            json!({ "W": cx.pts(&w), "left": cx.pts(&left), "right": cx.pts(&right) }),
        ))
    });

    let t1 = y.inv().ok()?;
    let t2 = x.pow(s).ok()?.div(&y).ok()?;
    fixed_field_check(rec, "fixed field of G1", "K(C)^G1 = K(1/y)", &g1, &t1, seed);
    fixed_field_check(
        rec,
        "fixed field of G2",
        "K(C)^G2 = K(x^s/y)",
        &g2,
        &t2,
        seed,
    );

    let emb = embedding_check(rec, "phi", &t1, &t2, q as u32 + 1, seed)?;
    let (a, b) = (
        emb.map.image_of_place(&p_inf).ok()?,
        emb.map.image_of_place(&p_0).ok()?,
    );
    rec.check(
        "two distinct inner points",
        "phi(P_inf) = (0:1:0), phi(P_0) = (1:0:0), both smooth on the image",
        || {
            let (ca, cb) = (
                classify_point(&emb.image, &a),
                classify_point(&emb.image, &b),
            );
            let ok = a == ProjPoint::y_vertex()
                && b == ProjPoint::x_vertex()
                && ca == PointClass::InnerSmooth
                && cb == PointClass::InnerSmooth;
            Ok((
                ok,
                json!({ "phi(P_inf)": cx.pt(&a), "phi(P_0)": cx.pt(&b), "classes": [ca, cb] }),
            ))
        },
    );
    rec.check(
        "Galois point phi(P_inf)",
        "K(C)^G1 = K(t), |G1| = deg pi = d - 1",
        || {
            let cert = galois_certify(&emb, &a, &t1, Some(&g1), Some(&p_inf), seed)?;
            Ok((
                cert.certified && cert.class == PointClass::InnerSmooth,
                cert_json(&cert),
            ))
        },
    );
    rec.check(
        "Galois point phi(P_0)",
        "K(C)^G2 = K(t), |G2| = deg pi = d - 1",
        || {
            let cert = galois_certify(&emb, &b, &t2, Some(&g2), Some(&p_0), seed)?;
            Ok((
                cert.certified && cert.class == PointClass::InnerSmooth,
                cert_json(&cert),
            ))
        },
    );
    Some(())
}

fn lemma1(cx: &Ctx, rec: &mut Recorder) -> Option<()> {
    let k = &cx.k;
    let c = family_curve(k, Theorem::T1a).ok()?;
    let Mode::Fm { m } = k.mode else { return None };
    let chain = rec.build("lemma 1 chain", "F_m -> y^m = x^q + x + 1 -> y^m = x^{q+1} + x^q + x -> E_m", || {
        let ch = lemma1_chain(&c, k)?;
        let names: Vec<&str> = ch.stages.iter().map(|s| s.name()).collect();
        let ok = ch.inverse_verified && ch.stages.len() == 3;
        Ok((ch.clone(), ok, json!({ "stages": names, "a": cx.fmt(k.a_root), "inverse_verified": ch.inverse_verified })))
    })?;
    rec.check(
        "lemma 1 first stage",
        "a^q + a = 1, (x - a)^q + (x - a) + 1 = x^q + x",
        || {
            let t = chain.stages[0].target();
            let ok = t.kummer_model().is_some_and(|km| {
                let f = &k.field;
                km.e as u64 == m
                    && km.h.coeff(0) == FieldElem::ONE
                    && km.h.coeff(1) == FieldElem::ONE
                    && km.h.coeff(k.q as usize) == FieldElem::ONE
                    && km.h.coeffs().iter().filter(|c| !c.is_zero()).count() == 3
                    && f.add(f.pow(k.a_root, k.q as u128), k.a_root) == FieldElem::ONE
            });
            Ok((ok, json!({ "curve": t.form().format() })))
        },
    );
    rec.check(
        "lemma 1 middle identity",
        "(1/x)^{q+1} + (1/x)^q + 1/x = (x^q + x + 1)/x^{q+1} = (y/x^s)^m",
        || Ok((chain.mid_identity, json!({}))),
    );
    rec.check("lemma 1 target", "E_m: y^m = x^{q+1} - 1", || {
        let t = chain.composite.target();
        Ok((
            matches!(t.family(), crate::curve::Family::Em { .. }),
            json!({ "curve": t.form().format() }),
        ))
    });
    Some(())
}

fn thm1b(cx: &Ctx, rec: &mut Recorder) -> Option<()> {
    let k = &cx.k;
    let seed = cx.cfg.seed;
    let q = k.q;
    let f = &k.field;
    let c = rec.build("curve E_m", "y^m = x^{q+1} - 1", || {
        let c = family_curve(k, Theorem::T1b)?;
        Ok((
            c.clone(),
            true,
            json!({ "form": c.form().format(), "degree": c.degree() }),
        ))
    })?;
    let s = c.family().s()?;
    let lambda = *k
        .lambda_set
        .iter()
        .find(|&&l| !l.is_zero() && l != FieldElem::ONE)?;
    let beta = rec.build(
        "beta numerator identity",
        "y^m - (x + l(x-1))^{q+1} + (1 + l(x-1))^{q+1} = 0",
        || {
            let (b, num) = make_beta(&c, lambda)?;
            Ok((
                b,
                num.is_zero(),
                json!({ "lambda": cx.fmt(lambda), "numerator": num.format("x") }),
            ))
        },
    )?;
    rec.check(
        "beta inverse",
        "beta^-1 = ((x - l(x-1))/(1 - l(x-1)), y/(1 - l(x-1))^s)",
        || {
            let bi = beta.inverse()?;
            Ok((
                bi.compose(&beta)?.is_identity() && beta.compose(&bi)?.is_identity(),
                json!({ "beta^-1": format!("{bi:?}") }),
            ))
        },
    );

    let one = ProjPoint::affine(FieldElem::ONE, FieldElem::ZERO);
    let mut xset: Vec<ProjPoint> = k
        .zeta_set
        .iter()
        .map(|&z| ProjPoint::affine(z, FieldElem::ZERO))
        .collect();
    xset.sort();
    let g1 = group_check(
        rec,
        "G1 order",
        "G1 = {x -> zeta x : zeta^{q+1} = 1}, |G1| = q + 1",
        q as usize + 1,
        || make_g1(Theorem::T1b, &c, k),
    )?;
    let images = |g: &AutGroup| -> Result<Vec<ProjPoint>> {
        let mut v = g
            .elements()
            .iter()
            .map(|s| s.image_of_point(one))
            .collect::<Result<Vec<_>>>()?;
        v.sort();
        Ok(v)
    };
    rec.check("G1 transitive on X", "G1 (1:0:1) = X, |X| = q + 1", || {
        let o = images(&g1)?;
        Ok((
            o == xset && xset.len() == q as usize + 1,
            json!({ "X": cx.pts(&xset), "orbit": cx.pts(&o) }),
        ))
    });
    rec.check("beta permutes X", "beta(X) = X", || {
        let mut v = xset
            .iter()
            .map(|&p| beta.image_of_point(p))
            .collect::<Result<Vec<_>>>()?;
        v.sort();
        Ok((v == xset, json!({ "beta(X)": cx.pts(&v) })))
    });
    let g2 = group_check(
        rec,
        "G2 order",
        "G2 = beta G1 beta^-1",
        q as usize + 1,
        || conjugate(&g1, &beta, Side::InverseRight, "G2"),
    )?;
    rec.check("G1 and G2 intersect trivially", "beta(0:w:1) fixed by G2, moved by G1 \\ {id}, w^m = -1", || {
        let w = *k.omega_set.first().ok_or_else(|| Error::Internal("no omega".into()))?;
        let bp = beta.image_of_point(ProjPoint::affine(FieldElem::ZERO, w))?;
        let one_minus = f.sub(FieldElem::ONE, lambda);
        let expect = ProjPoint::affine(
            f.div(lambda, f.sub(lambda, FieldElem::ONE))?,
            f.div(w, f.pow(one_minus, s as u128))?,
        );
        let sep = separation(&g2, &g1, bp)?;
        let common = group_intersection(&g1, &g2).len();
        Ok((bp == expect && sep && common == 1, json!({ "omega": cx.fmt(w), "beta(P)": cx.pt(&bp), "separated": sep, "common": common })))
    });
    rec.check("orbit of (1:0:1)", "G1 (1:0:1) = X = G2 (1:0:1)", || {
        let (a, b) = (images(&g1)?, images(&g2)?);
        Ok((
            a == xset && b == xset,
            json!({ "G1": cx.pts(&a), "G2": cx.pts(&b) }),
        ))
    });

    let y = FFElem::y(&c);
    fixed_field_check(rec, "fixed field of G1", "K(C)^G1 = K(y)", &g1, &y, seed);
    let binv = beta.inverse().ok()?;
    let gen = pick_generator(
        rec,
        "fixed field of G2",
        "K(C)^G2 = K(y o beta^-1)",
        &g2,
        vec![
            ("y o beta^-1", binv.pullback(&y).ok()?),
            ("y o beta", beta.pullback(&y).ok()?),
        ],
        seed,
    )?;
    let (f1, f2) = (y.inv().ok()?, gen.inv().ok()?);
    let emb = embedding_check(rec, "psi", &f1, &f2, q as u32 + 1, seed)?;
    outer_pair(rec, &emb, &g1, &g2, seed);
    Some(())
}

/// Certifies `(0:1:0)` with `G1` and `(1:0:0)` with `G2` as outer points.
fn outer_pair(rec: &mut Recorder, emb: &Embedding, g1: &AutGroup, g2: &AutGroup, seed: u64) {
    let (a, b) = (ProjPoint::y_vertex(), ProjPoint::x_vertex());
    rec.check(
        "two distinct outer points",
        "(0:1:0), (1:0:0) off the image",
        || {
            let (ca, cb) = (
                classify_point(&emb.image, &a),
                classify_point(&emb.image, &b),
            );
            Ok((
                ca == PointClass::Outer && cb == PointClass::Outer && a != b,
                json!({ "classes": [ca, cb] }),
            ))
        },
    );
    for (pt, g, label) in [(a, g1, "(0:1:0)"), (b, g2, "(1:0:0)")] {
        rec.check(
            &format!("Galois point {label}"),
            "K(C)^G = K(t), |G| = deg pi = d",
            || {
                let t = base_function(emb, &pt)?;
                let cert = galois_certify(emb, &pt, &t, Some(g), None, seed)?;
                Ok((
                    cert.certified && cert.class == PointClass::Outer,
                    cert_json(&cert),
                ))
            },
        );
    }
}

fn thm2(cx: &Ctx, rec: &mut Recorder) -> Option<()> {
    let k = &cx.k;
    let seed = cx.cfg.seed;
    let q = k.q;
    let Mode::Gr { r } = k.mode else { return None };
    let qr = q.pow(r);
    let c = rec.build("curve G_r", "y^{q^r+1} = x^q + x", || {
        let c = family_curve(k, Theorem::T2)?;
        Ok((
            c.clone(),
            true,
            json!({ "form": c.form().format(), "degree": c.degree() }),
        ))
    })?;
    rec.check(
        "constants b, c, c'",
        "b = (-1)^{r-1} b^{q^{2r}}, c^q + c = b^{q^r+1}, c' = -c + g_b(b)",
        || {
            k.verify()?;
            let w = json!({
                "b": k.b.map(|v| cx.fmt(v)),
                "c": k.c.map(|v| cx.fmt(v)),
                "c'": k.c_prime.map(|v| cx.fmt(v)),
            });
            Ok((true, w))
        },
    );
    rec.check("g_b properties", "g_{-b} = -g_b; g_b(-a) = -g_b(a); g_b(y+a) = g_b(y) + g_b(a); g_b^q + g_b = b y^{q^r} + b^{q^r} y", || {
        let props = check_gb_properties(k, GB_SAMPLES, seed)?;
        Ok((props.iter().all(|&b| b), json!({ "properties": props })))
    });
    let gamma = rec.build(
        "gamma identity",
        "(y+b)^{q^r+1} = (g_b(y)+c+x)^q + (g_b(y)+c+x)",
        || {
            let g = make_gamma(&c, k)?;
            let (u, v) = g.components();
            let ok = v.pow(qr + 1)? == u.pow(q)?.add(u)?;
            Ok((g.clone(), ok, json!({ "gamma": format!("{g:?}") })))
        },
    )?;
    rec.check(
        "gamma inverse",
        "gamma^-1 = (-g_b(y) + c' + x, y - b)",
        || {
            let gi = gamma.inverse()?;
            Ok((
                gi.compose(&gamma)?.is_identity() && gamma.compose(&gi)?.is_identity(),
                json!({ "gamma^-1": format!("{gi:?}") }),
            ))
        },
    );
    let g1 = group_check(
        rec,
        "G1 order",
        "G1 = {y -> zeta y : zeta^{q^r+1} = 1}",
        qr as usize + 1,
        || make_g1(Theorem::T2, &c, k),
    )?;
    let g2 = group_check(
        rec,
        "G2 order",
        "G2 = gamma G1 gamma^-1",
        qr as usize + 1,
        || conjugate(&g1, &gamma, Side::InverseRight, "G2"),
    )?;
    rec.check("G1 and G2 intersect trivially", "gamma(R) = (c + a : b : 1) fixed by G2, moved by G1 \\ {id}", || {
        let f = &k.field;
        let a = k.lambda_set[0];
        let gr = gamma.image_of_point(ProjPoint::affine(a, FieldElem::ZERO))?;
        let (b, cc) = (k.b.expect("verified"), k.c.expect("verified"));
        let expect = ProjPoint::affine(f.add(cc, a), b);
        let sep = separation(&g2, &g1, gr)?;
        let common = group_intersection(&g1, &g2).len();
        Ok((gr == expect && sep && common == 1, json!({ "alpha": cx.fmt(a), "gamma(R)": cx.pt(&gr), "separated": sep, "common": common })))
    });
    let q_inf = cx.place(&c, ProjPoint::x_vertex(), "Q_inf").ok()?;
    rec.check("divisor condition", "sum_G1 sigma(Q_inf) = (q^r+1) Q_inf = sum_G2 tau(Q_inf)", || {
        let want = vec![ProjPoint::x_vertex(); qr as usize + 1];
        let (a, b) = (orbit(&g1, &q_inf)?, orbit(&g2, &q_inf)?);
        Ok((a == want && b == want, json!({ "multiplicity": [a.len(), b.len()], "point": cx.pt(&ProjPoint::x_vertex()) })))
    });

    let x = FFElem::x(&c);
    fixed_field_check(rec, "fixed field of G1", "K(C)^G1 = K(x)", &g1, &x, seed);
    let ginv = gamma.inverse().ok()?;
    let gen = pick_generator(
        rec,
        "fixed field of G2",
        "K(C)^G2 = K(x o gamma^-1)",
        &g2,
        vec![
            ("x o gamma^-1", ginv.pullback(&x).ok()?),
            ("x o gamma", gamma.pullback(&x).ok()?),
        ],
        seed,
    )?;
    let emb = embedding_check(rec, "xi", &x, &gen, qr as u32 + 1, seed)?;
    outer_pair(rec, &emb, &g1, &g2, seed);
    Some(())
}

fn prop1(cx: &Ctx, rec: &mut Recorder) -> Option<()> {
    let k = &cx.k;
    let seed = cx.cfg.seed;
    let q = k.q;
    let Mode::Fm { m } = k.mode else { return None };
    let c = family_curve(k, Theorem::T1a).ok()?;
    let s = c.family().s()?;
    let f = &k.field;
    let y = FFElem::y(&c);
    let x = FFElem::x(&c);
    let t1 = y.inv().ok()?;
    let t2 = x.pow(s).ok()?.div(&y).ok()?;
    let emb = embedding_check(rec, "phi", &t1, &t2, q as u32 + 1, seed)?;
    let p_inf = cx.place(&c, ProjPoint::y_vertex(), "P_inf").ok()?;
    let w_places: Vec<(FieldElem, Place)> = k
        .lambda_set
        .iter()
        .map(|&l| Ok((l, cx.place(&c, ProjPoint::affine(l, FieldElem::ZERO), "Q")?)))
        .collect::<Result<_>>()
        .ok()?;

    rec.check("phi(W) on Z = 0", "phi(W) = image cap {Z = 0}", || {
        let mut img = vec![emb.map.image_of_place(&p_inf)?];
        for (_, p) in &w_places {
            img.push(emb.map.image_of_place(p)?);
        }
        img.sort();
        img.dedup();
        let (line, split) = points_at_infinity(&emb.image)?;
        Ok((
            split && img == line,
            json!({ "phi(W)": cx.pts(&img), "image cap Z=0": cx.pts(&line), "split": split }),
        ))
    });
    rec.check(
        "tangent multiplicity at phi(P_inf)",
        "I(image, T, phi(P_inf)) = q + 1",
        || {
            let pt = ProjPoint::y_vertex();
            let l = tangent_line(&emb.image, &pt)?;
            let i = intersection_multiplicity(&emb.image, l, &pt)?;
            let line: Vec<String> = l.iter().map(|&v| cx.fmt(v)).collect();
            Ok((
                i as u64 == q + 1,
                json!({ "tangent": line, "multiplicity": i, "expected": q + 1 }),
            ))
        },
    );
    rec.check("valuation of 1/y at P_inf", "v_{P_inf}(1/y) = q", || {
        let v = t1.valuation(&p_inf)?;
        Ok((v == q as i64, json!({ "valuation": v })))
    });
    rec.check(
        "ramification at phi(Q)",
        "e(Q) = v_Q((x^s - l^s)/y) = m - 1 < q for l^{q-1} = -1",
        || {
            let mut rows = Vec::new();
            let mut ok = true;
            for (l, place) in w_places.iter().filter(|(l, _)| !l.is_zero()) {
                let center = emb.map.image_of_place(place)?;
                let t = base_function(&emb, &center)?;
                let expect = x
                    .pow(s)?
                    .sub(&FFElem::constant(&c, f.pow(*l, s as u128)))?
                    .div(&y)?;
                let e = ramification_index(&t, place)?;
                let cert = galois_certify(&emb, &center, &t, None, Some(place), seed)?;
                let row_ok = t == expect && e == m as i64 - 1 && (e as u64) < q && !cert.certified;
                ok &= row_ok;
                rows.push(json!({
                    "lambda": cx.fmt(*l),
                    "center": cx.pt(&center),
                    "e": e,
                    "projection_degree": cert.projection_degree,
                    "certified": cert.certified,
                }));
            }
            Ok((ok && !rows.is_empty(), json!({ "points": rows })))
        },
    );
    rec.external(
        "remaining exclusions",
        "Sylow subgroup and Weierstrass semigroup steps",
        "externally justified, not machine-checked",
    );
    Some(())
}

/// Runs the selected suites. Configuration errors are returned; check
/// failures are recorded in the report.
pub fn run(cfg: &RunConfig) -> Result<Report> {
    let mode = cfg.validate()?;
    let mut rec = Recorder {
        checks: Vec::new(),
        timings: cfg.timings,
    };
    let k = rec.build(
        "constants",
        "lambda^q + lambda = 0, zeta^{q+1} = 1, a^q + a = 1, w^m = -1",
        || {
            let k = make_family_constants(cfg.p, cfg.n, mode, cfg.ext_cap)?;
            let w = json!({
                "field": [k.field.p(), k.field.k()],
                "lambda": k.lambda_set.len(),
                "zeta": k.zeta_set.len(),
            });
            let ok = k.lambda_set.len() as u64 == k.q && k.zeta_set.len() as u64 == k.q + 1;
            Ok((k, ok, w))
        },
    );
    let constant_field = k.as_ref().map(|k| [k.field.p() as u64, k.field.k() as u64]);
    if let Some(k) = k {
        let cx = Ctx { cfg, k };
        let q = cx.k.q;
        let sel = cfg.check;
        let fm = matches!(mode, Mode::Fm { .. });
        if fm && matches!(sel, Selector::Thm1a | Selector::All) {
            thm1a(&cx, &mut rec);
        }
        if fm && matches!(sel, Selector::Lemma1 | Selector::All) {
            lemma1(&cx, &mut rec);
        }
        if fm && matches!(sel, Selector::Thm1b | Selector::All) {
            thm1b(&cx, &mut rec);
        }
        let excluded = mode == (Mode::Fm { m: 2 }) && q == 3;
        if fm && (sel == Selector::Prop1 || (sel == Selector::All && !excluded)) {
            prop1(&cx, &mut rec);
        }
        if !fm {
            thm2(&cx, &mut rec);
        }
    }
    let verdict = if rec.checks.iter().any(|c| c.status == Status::Fail) {
        Status::Fail
    } else {
        Status::Pass
    };
    Ok(Report {
        config: cfg.clone(),
        constant_field,
        checks: rec.checks,
        verdict,
    })
}

/// One row of the sweep matrix.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepEntry {
    pub config: RunConfig,
    /// `pass`, `fail` or `rejected`.
    pub outcome: String,
    pub error: Option<String>,
    pub report: Option<Report>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepReport {
    pub entries: Vec<SweepEntry>,
    pub verdict: Status,
}

impl SweepReport {
    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("report serializes");
        serde_json::to_string_pretty(&v).expect("value serializes")
    }
}

/// Runs every configuration in parallel; rejected tuples do not affect the
/// others.
pub fn sweep(grid: &[RunConfig]) -> SweepReport {
    let entries: Vec<SweepEntry> = grid
        .par_iter()
        .map(|cfg| match run(cfg) {
            Ok(r) => SweepEntry {
                config: cfg.clone(),
                outcome: if r.passed() { "pass" } else { "fail" }.into(),
                error: None,
                report: Some(r),
            },
            Err(e) => SweepEntry {
                config: cfg.clone(),
                outcome: "rejected".into(),
                error: Some(e.to_string()),
                report: None,
            },
        })
        .collect();
    let verdict = if entries.iter().all(|e| e.outcome == "pass") {
        Status::Pass
    } else {
        Status::Fail
    };
    SweepReport { entries, verdict }
}

/// Parses `p n m|r selector` lines; `#` starts a comment. The third field
/// is `r` for `thm2` and `m` otherwise, unless written as `m=..` or `r=..`.
pub fn parse_grid(text: &str, base: &RunConfig) -> Result<Vec<RunConfig>> {
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |what: &str| Error::InvalidParameters(format!("grid line {}: {what}", no + 1));
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 4 {
            return Err(bad("expected `p n m|r selector`"));
        }
        let p = f[0].parse().map_err(|_| bad("p"))?;
        let n = f[1].parse().map_err(|_| bad("n"))?;
        let check: Selector = f[3].parse()?;
        let mut cfg = RunConfig {
            p,
            n,
            m: None,
            r: None,
            check,
            ..base.clone()
        };
        let (key, val) = match f[2].split_once('=') {
            Some((k, v)) => (k, v),
            None if check == Selector::Thm2 => ("r", f[2]),
            None => ("m", f[2]),
        };
        match key {
            "m" => cfg.m = Some(val.parse().map_err(|_| bad("m"))?),
            "r" => cfg.r = Some(val.parse().map_err(|_| bad("r"))?),
            _ => return Err(bad("third field must be m or r")),
        }
        out.push(cfg);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(RunConfig::new(3, 1, Selector::Thm1a)
            .with_m(2)
            .validate()
            .is_ok());
        assert!(RunConfig::new(2, 2, Selector::Thm1a)
            .with_m(2)
            .validate()
            .is_err());
        assert!(RunConfig::new(3, 1, Selector::Prop1)
            .with_m(2)
            .validate()
            .is_err());
        assert!(RunConfig::new(3, 1, Selector::Thm2)
            .with_m(2)
            .validate()
            .is_err());
        assert!(RunConfig::new(3, 1, Selector::Thm2)
            .with_r(1)
            .validate()
            .is_err());
        assert!(RunConfig::new(3, 1, Selector::All)
            .with_r(2)
            .validate()
            .is_ok());
    }

    #[test]
    fn grid_parsing() {
        let base = RunConfig::new(0, 0, Selector::All);
        let g = parse_grid(
            "# header\n3 1 2 thm1a\n2 1 2 thm2  # r\n5 1 r=3 all\n",
            &base,
        )
        .unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g[0].m, Some(2));
        assert_eq!(g[1].r, Some(2));
        assert_eq!(g[2].r, Some(3));
        assert!(parse_grid("3 1 thm1a", &base).is_err());
        assert!(parse_grid("", &base).unwrap().is_empty());
    }

    #[test]
    fn thm1a_smallest() {
        let r = run(&RunConfig::new(3, 1, Selector::Thm1a).with_m(2)).unwrap();
        assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn report_is_deterministic() {
        let cfg = RunConfig::new(2, 1, Selector::Thm2).with_r(2);
        let a = run(&cfg).unwrap();
        assert!(a.passed(), "{}", a.to_text());
        assert_eq!(a.to_json(), run(&cfg).unwrap().to_json());
    }

    #[test]
    fn sweep_isolates_rejections() {
        let grid = vec![
            RunConfig::new(3, 1, Selector::Lemma1).with_m(2),
            RunConfig::new(2, 2, Selector::Thm1a).with_m(2),
        ];
        let s = sweep(&grid);
        assert_eq!(s.entries[0].outcome, "pass");
        assert_eq!(s.entries[1].outcome, "rejected");
        assert_eq!(sweep(&[]).verdict, Status::Pass);
    }
}
