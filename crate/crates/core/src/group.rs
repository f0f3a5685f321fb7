//! Finite groups of birational self-maps of a curve.

use serde::Serialize;

use crate::branch::Place;
use crate::curve::{Curve, ProjPoint};
use crate::degree::{extension_degree_witness, DegreeWitness};
use crate::error::{Error, Result};
use crate::function_field::FFElem;
use crate::maps::RatMap;

/// Elements (identity first) with a verified composition table.
#[derive(Clone, Debug)]
pub struct AutGroup {
    name: String,
    elements: Vec<RatMap>,
    /// `table[i][j]` is the index of `elements[i] o elements[j]`.
    table: Vec<Vec<usize>>,
}

/// Which conjugate to form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `h^-1 G h`
    InverseLeft,
    /// `h G h^-1`
    InverseRight,
}

impl AutGroup {
    /// Builds the table and checks closure, identity, inverses (Latin
    /// square) and associativity.
    pub fn new(name: impl Into<String>, curve: &Curve, elements: Vec<RatMap>) -> Result<AutGroup> {
        let name = name.into();
        let mut elems = vec![RatMap::identity(curve)];
        for e in elements {
            if !std::sync::Arc::ptr_eq(e.source(), curve)
                || !std::sync::Arc::ptr_eq(e.target(), curve)
            {
                return Err(Error::InvalidParameters(format!(
                    "{} is not a self-map",
                    e.name()
                )));
            }
            if !elems.contains(&e) {
                elems.push(e);
            }
        }
        let n = elems.len();
        let mut table = vec![vec![0usize; n]; n];
        for i in 0..n {
            for j in 0..n {
                let c = elems[i].compose(&elems[j])?;
                table[i][j] = elems.iter().position(|e| *e == c).ok_or_else(|| {
                    Error::Verification(format!("{name} is not closed under composition"))
                })?;
            }
        }
        let g = AutGroup {
            name,
            elements: elems,
            table,
        };
        g.check_table()?;
        Ok(g)
    }

    fn check_table(&self) -> Result<()> {
        let n = self.order();
        let fail = |what: &str| Err(Error::Verification(format!("{}: {what}", self.name)));
        for i in 0..n {
            if self.table[0][i] != i || self.table[i][0] != i {
                return fail("identity");
            }
            let mut row = vec![false; n];
            let mut col = vec![false; n];
            for j in 0..n {
                row[self.table[i][j]] = true;
                col[self.table[j][i]] = true;
            }
            if !row.iter().all(|&b| b) || !col.iter().all(|&b| b) {
                return fail("table is not a Latin square");
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.table[a][b];
                for c in 0..n {
                    if self.table[ab][c] != self.table[a][self.table[b][c]] {
                        return fail("composition is not associative");
                    }
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[RatMap] {
        &self.elements
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn curve(&self) -> &Curve {
        self.elements[0].source()
    }

    pub fn contains(&self, m: &RatMap) -> bool {
        self.elements.contains(m)
    }
}

/// `h^-1 G h` or `h G h^-1`; `h` needs an inverse witness.
pub fn conjugate(
    g: &AutGroup,
    h: &RatMap,
    side: Side,
    name: impl Into<String>,
) -> Result<AutGroup> {
    let hi = h.inverse()?;
    let (left, right) = match side {
        Side::InverseLeft => (&hi, h),
        Side::InverseRight => (h, &hi),
    };
    let curve = right.source().clone();
    let elems = g
        .elements()
        .iter()
        .map(|s| left.compose(&s.compose(right)?))
        .collect::<Result<Vec<_>>>()?;
    let out = AutGroup::new(name, &curve, elems)?;
    if out.order() != g.order() {
        return Err(Error::Verification("conjugation changed the order".into()));
    }
    Ok(out)
}

/// Elements common to both groups.
pub fn group_intersection(a: &AutGroup, b: &AutGroup) -> Vec<RatMap> {
    a.elements()
        .iter()
        .filter(|e| b.contains(e))
        .cloned()
        .collect()
}

/// `[sigma(P) for sigma in G]`, as a sorted multiset of centers.
pub fn orbit(g: &AutGroup, place: &Place) -> Result<Vec<ProjPoint>> {
    let mut out = g
        .elements()
        .iter()
        .map(|s| s.image_of_place(place))
        .collect::<Result<Vec<_>>>()?;
    out.sort();
    Ok(out)
}

/// Evidence that `K(C)^G = K(t)`.
#[derive(Clone, Debug, Serialize)]
pub struct FixedFieldReport {
    pub group: String,
    pub order: usize,
    pub generator: String,
    /// Names of elements that move `t`.
    pub moved_by: Vec<String>,
    pub degree: DegreeWitness,
    pub holds: bool,
}

/// Every element fixes `t` and `[K(C) : K(t)] = |G|`.
pub fn verify_fixed_field(g: &AutGroup, t: &FFElem, seed: u64) -> Result<FixedFieldReport> {
    let mut moved_by = Vec::new();
    for s in g.elements() {
        if s.pullback(t)? != *t {
            moved_by.push(s.name().to_string());
        }
    }
    let degree = extension_degree_witness(t, seed)?;
    Ok(FixedFieldReport {
        group: g.name().to_string(),
        order: g.order(),
        generator: t.format(),
        holds: moved_by.is_empty() && degree.eliminant == g.order(),
        moved_by,
        degree,
    })
}
