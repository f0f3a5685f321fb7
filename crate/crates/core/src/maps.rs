//! Rational maps between curves, given by the pullbacks of the target
//! coordinates.

use std::fmt;
use std::sync::Arc;

use crate::branch::Place;
use crate::curve::{Curve, ProjPoint};
use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::function_field::FFElem;
use crate::series::Laurent;

/// `(x, y) -> (u, v)` from `source` to `target`, where `u, v` lie in
/// `K(source)`.
#[derive(Clone)]
pub struct RatMap {
    name: String,
    target: Curve,
    u: FFElem,
    v: FFElem,
    inverse: Option<(FFElem, FFElem)>,
}

impl fmt::Debug for RatMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: (x, y) -> ({}, {})",
            self.name,
            self.u.format(),
            self.v.format()
        )
    }
}

impl PartialEq for RatMap {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.target, &other.target) && self.u == other.u && self.v == other.v
    }
}

impl RatMap {
    /// Checks that the target equation pulls back to zero.
    pub fn new(name: impl Into<String>, target: &Curve, u: FFElem, v: FFElem) -> Result<RatMap> {
        let name = name.into();
        if !Arc::ptr_eq(u.curve(), v.curve()) {
            return Err(Error::InvalidParameters(
                "components on different curves".into(),
            ));
        }
        let rel = FFElem::eval_bi(target.affine(), &u, &v)?;
        if !rel.is_zero() {
            return Err(Error::Verification(format!(
                "{name} does not map onto {}",
                target.family().name()
            )));
        }
        Ok(RatMap {
            name,
            target: target.clone(),
            u,
            v,
            inverse: None,
        })
    }

    pub fn identity(curve: &Curve) -> RatMap {
        RatMap {
            name: "id".into(),
            target: curve.clone(),
            u: FFElem::x(curve),
            v: FFElem::y(curve),
            inverse: Some((FFElem::x(curve), FFElem::y(curve))),
        }
    }

    /// Attaches `(a, b)` in `K(target)` as the inverse and checks both
    /// compositions.
    pub fn with_inverse(mut self, a: FFElem, b: FFElem) -> Result<RatMap> {
        let inv = RatMap::new(
            format!("{}^-1", self.name),
            self.source(),
            a.clone(),
            b.clone(),
        )?;
        let there = self.compose(&inv)?;
        let back = inv.compose(&self)?;
        if !there.is_identity() || !back.is_identity() {
            return Err(Error::Verification(format!(
                "inverse of {} fails",
                self.name
            )));
        }
        self.inverse = Some((a, b));
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> RatMap {
        self.name = name.into();
        self
    }

    pub fn source(&self) -> &Curve {
        self.u.curve()
    }

    pub fn target(&self) -> &Curve {
        &self.target
    }

    pub fn components(&self) -> (&FFElem, &FFElem) {
        (&self.u, &self.v)
    }

    pub fn has_inverse(&self) -> bool {
        self.inverse.is_some()
    }

    pub fn is_identity(&self) -> bool {
        Arc::ptr_eq(self.source(), &self.target)
            && self.u == FFElem::x(&self.target)
            && self.v == FFElem::y(&self.target)
    }

    /// `f o self` for `f` in `K(target)`.
    pub fn pullback(&self, f: &FFElem) -> Result<FFElem> {
        if !Arc::ptr_eq(f.curve(), &self.target) {
            return Err(Error::InvalidParameters(
                "pullback of a function on another curve".into(),
            ));
        }
        f.substitute(&self.u, &self.v)
    }

    /// `self o other` (apply `other` first).
    pub fn compose(&self, other: &RatMap) -> Result<RatMap> {
        if !Arc::ptr_eq(self.source(), &other.target) {
            return Err(Error::InvalidParameters("maps do not compose".into()));
        }
        let u = other.pullback(&self.u)?;
        let v = other.pullback(&self.v)?;
        // (self o other)^-1 = other^-1 o self^-1
        let inverse = match (&self.inverse, &other.inverse) {
            (Some((a, b)), Some((oa, ob))) => Some((oa.substitute(a, b)?, ob.substitute(a, b)?)),
            _ => None,
        };
        Ok(RatMap {
            name: format!("{}*{}", self.name, other.name),
            target: self.target.clone(),
            u,
            v,
            inverse,
        })
    }

    /// The inverse map from the attached witness.
    pub fn inverse(&self) -> Result<RatMap> {
        let (a, b) = self.inverse.clone().ok_or_else(|| {
            Error::InvalidParameters(format!("{} has no inverse witness", self.name))
        })?;
        Ok(RatMap {
            name: format!("{}^-1", self.name),
            target: self.source().clone(),
            u: a,
            v: b,
            inverse: Some((self.u.clone(), self.v.clone())),
        })
    }

    /// Image of a place: the limit of `(u : v : 1)` along its branch.
    pub fn image_of_place(&self, place: &Place) -> Result<ProjPoint> {
        project_limit(&[&self.u, &self.v], place)
    }

    /// Image of a unibranch point of the source.
    pub fn image_of_point(&self, pt: ProjPoint) -> Result<ProjPoint> {
        if let Some((x0, y0)) = pt.xy() {
            if let (Some(a), Some(b)) = (self.u.eval_at(x0, y0), self.v.eval_at(x0, y0)) {
                return Ok(ProjPoint::affine(a, b));
            }
        }
        self.image_of_place(&Place::at(self.source(), pt, "pt")?)
    }
}

/// Limit of `(f_0 : f_1 : 1)` along the branch of `place`.
pub fn project_limit(fs: &[&FFElem; 2], place: &Place) -> Result<ProjPoint> {
    let ctx = place.curve().ctx().clone();
    let mut lead: Vec<(i64, FieldElem)> = Vec::with_capacity(3);
    for f in fs {
        lead.push(if f.is_zero() {
            (i64::MAX, FieldElem::ZERO)
        } else {
            f.leading(place)?
        });
    }
    lead.push((0, FieldElem::ONE));
    let vmin = lead.iter().map(|l| l.0).min().expect("three entries");
    let coords = [0, 1, 2].map(|i| {
        if lead[i].0 == vmin {
            lead[i].1
        } else {
            FieldElem::ZERO
        }
    });
    ProjPoint::new(&ctx, coords)
}

/// Series of `f` along a place, as `num / den` truncated.
pub fn series_of(f: &FFElem, place: &Place) -> Result<Laurent> {
    let (n, d) = f.series_parts(place);
    Ok(n.mul(&d.inv(place.precision())?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{make_curve, Family};
    use crate::field::build_field;

    #[test]
    fn alpha_is_an_involution_with_witness() {
        let f = build_field(3, 2).unwrap();
        let c = make_curve(&f, Family::Fm { q: 3, m: 2 }).unwrap();
        let x = FFElem::x(&c);
        let y = FFElem::y(&c);
        let u = x.inv().unwrap();
        let v = y.div(&x.pow(2).unwrap()).unwrap();
        let alpha = RatMap::new("alpha", &c, u.clone(), v.clone())
            .unwrap()
            .with_inverse(u, v)
            .unwrap();
        assert!(alpha.compose(&alpha).unwrap().is_identity());
        assert_eq!(alpha.pullback(&x.inv().unwrap()).unwrap(), x);
        // alpha swaps P_0 and P_inf
        let o = ProjPoint::affine(FieldElem::ZERO, FieldElem::ZERO);
        assert_eq!(alpha.image_of_point(o).unwrap(), ProjPoint::y_vertex());
        assert_eq!(alpha.image_of_point(ProjPoint::y_vertex()).unwrap(), o);
    }

    #[test]
    fn non_maps_are_rejected() {
        let f = build_field(5, 1).unwrap();
        let c = make_curve(&f, Family::Fm { q: 5, m: 2 }).unwrap();
        let x = FFElem::x(&c);
        let bad = RatMap::new("bad", &c, x.clone(), x);
        assert!(matches!(bad, Err(Error::Verification(_))));
    }

    #[test]
    fn composition_carries_inverse() {
        let f = build_field(3, 2).unwrap();
        let c = make_curve(&f, Family::Fm { q: 3, m: 2 }).unwrap();
        let lam = f
            .elements()
            .find(|&l| !l.is_zero() && f.add(f.pow(l, 3), l).is_zero())
            .unwrap();
        let x = FFElem::x(&c);
        let y = FFElem::y(&c);
        let shift = FFElem::constant(&c, lam);
        let t = RatMap::new("t", &c, x.add(&shift).unwrap(), y.clone())
            .unwrap()
            .with_inverse(x.sub(&shift).unwrap(), y.clone())
            .unwrap();
        let tt = t.compose(&t).unwrap();
        let back = tt.inverse().unwrap().compose(&tt).unwrap();
        assert!(back.is_identity());
    }
}
