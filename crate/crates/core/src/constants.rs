//! The constants `lambda, zeta, a, omega, b, c, c'` over the smallest
//! suitable field `F_{q^K}`.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{build_field, find_roots, solve_additive, AdditivePoly, FieldCtx, FieldElem};
use crate::poly::UniPoly;

/// Default cap on the degree of the constant field over `F_p`.
pub const DEFAULT_EXT_CAP: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Mode {
    Fm { m: u64 },
    Gr { r: u32 },
}

#[derive(Clone, Debug)]
pub struct FamilyConstants {
    pub field: Arc<FieldCtx>,
    pub p: u64,
    pub n: u32,
    pub q: u64,
    pub mode: Mode,
    /// Roots of `T^q + T`.
    pub lambda_set: Vec<FieldElem>,
    /// Roots of `T^{q+1} - 1`.
    pub zeta_set: Vec<FieldElem>,
    /// Roots of `T^{q^r+1} - 1` (`G_r` mode only).
    pub zeta_r_set: Vec<FieldElem>,
    /// A root of `T^q + T - 1`.
    pub a_root: FieldElem,
    /// Roots of `T^m + 1` (`F_m` mode only).
    pub omega_set: Vec<FieldElem>,
    pub b: Option<FieldElem>,
    pub c: Option<FieldElem>,
    pub c_prime: Option<FieldElem>,
}

/// Parameter check shared by the constants and the curves.
pub fn validate(p: u64, n: u32, mode: Mode) -> Result<u64> {
    if !crate::field::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if n == 0 {
        return Err(Error::InvalidParameters("n must be positive".into()));
    }
    let q = p
        .checked_pow(n)
        .filter(|&q| q < 1 << 16)
        .ok_or_else(|| Error::InvalidParameters("q is too large".into()))?;
    let family = match mode {
        Mode::Fm { m } => crate::curve::Family::Fm { q, m },
        Mode::Gr { r } => crate::curve::Family::Gr { q, r },
    };
    crate::curve::validate_family(p as u32, &family)?;
    Ok(q)
}

/// `g_b(y) = sum_{i<r} (-1)^i b^{q^{i+r}} y^{q^i}`.
pub fn make_gb(f: &Arc<FieldCtx>, q: u64, r: u32, b: FieldElem) -> UniPoly {
    let mut coeffs = vec![FieldElem::ZERO; q.pow(r - 1) as usize + 1];
    for i in 0..r {
        let c = f.pow(b, (q as u128).pow(i + r));
        coeffs[q.pow(i) as usize] = if i % 2 == 0 { c } else { f.neg(c) };
    }
    UniPoly::new(f, coeffs)
}

fn roots_of_unity(f: &Arc<FieldCtx>, order: u64) -> Result<Vec<FieldElem>> {
    let mut c = vec![FieldElem::ZERO; order as usize + 1];
    c[0] = f.neg(FieldElem::ONE);
    c[order as usize] = FieldElem::ONE;
    find_roots(&UniPoly::new(f, c))
}

/// `(b, c)` with `b != 0`, `b = (-1)^{r-1} b^{q^{2r}}`, `c != 0` and
/// `c^q + c = b^{q^r+1}`, scanning `b` in encoding order.
fn find_b_c(f: &FieldCtx, n: u32, q: u64, r: u32) -> Result<Option<(FieldElem, FieldElem)>> {
    let sign = if r % 2 == 1 {
        FieldElem::ONE
    } else {
        f.neg(FieldElem::ONE)
    };
    // b^{q^{2r}} - sign^{-1} b = 0, and sign = sign^{-1}
    let cond = AdditivePoly::new(vec![(FieldElem::ONE, 2 * r * n), (f.neg(sign), 0)]);
    let tr = AdditivePoly::trace_like(n);
    for b in solve_additive(&cond, FieldElem::ZERO, f)? {
        if b.is_zero() {
            continue;
        }
        let rhs = f.pow(b, q.pow(r) as u128 + 1);
        if let Some(&c) = solve_additive(&tr, rhs, f)?.iter().find(|c| !c.is_zero()) {
            return Ok(Some((b, c)));
        }
    }
    Ok(None)
}

/// Finds every constant over the smallest `F_{q^K}` that contains them, with
/// `K` doubled until the search succeeds or `p^{nK}` passes `ext_cap`.
pub fn make_family_constants(p: u64, n: u32, mode: Mode, ext_cap: u32) -> Result<FamilyConstants> {
    let q = validate(p, n, mode)?;
    let mut big_k = match mode {
        Mode::Fm { .. } => 2,
        Mode::Gr { r } if p != 2 && r % 2 == 0 => 4 * r,
        Mode::Gr { r } => 2 * r,
    };
    loop {
        let k = n * big_k;
        if k > ext_cap {
            return Err(Error::ExtensionCap(ext_cap));
        }
        let f = build_field(p, k)?;
        let bc = match mode {
            Mode::Gr { r } => match find_b_c(&f, n, q, r)? {
                Some(bc) => Some(bc),
                None => {
                    big_k *= 2;
                    continue;
                }
            },
            Mode::Fm { .. } => None,
        };
        let tr = AdditivePoly::trace_like(n);
        let lambda_set = solve_additive(&tr, FieldElem::ZERO, &f)?;
        let a_root = *solve_additive(&tr, FieldElem::ONE, &f)?
            .first()
            .ok_or_else(|| Error::Internal("no root of T^q + T - 1".into()))?;
        let zeta_set = roots_of_unity(&f, q + 1)?;
        let (zeta_r_set, omega_set) = match mode {
            Mode::Gr { r } => (roots_of_unity(&f, q.pow(r) + 1)?, Vec::new()),
            Mode::Fm { m } => {
                let mut c = vec![FieldElem::ZERO; m as usize + 1];
                c[0] = FieldElem::ONE;
                c[m as usize] = FieldElem::ONE;
                (Vec::new(), find_roots(&UniPoly::new(&f, c))?)
            }
        };
        let c_prime = match (mode, bc) {
            (Mode::Gr { r }, Some((b, c))) => Some(f.add(f.neg(c), make_gb(&f, q, r, b).eval(b))),
            _ => None,
        };
        let out = FamilyConstants {
            p,
            n,
            q,
            mode,
            lambda_set,
            zeta_set,
            zeta_r_set,
            a_root,
            omega_set,
            b: bc.map(|v| v.0),
            c: bc.map(|v| v.1),
            c_prime,
            field: f,
        };
        out.verify()?;
        return Ok(out);
    }
}

impl FamilyConstants {
    pub fn field_degree(&self) -> u32 {
        self.field.k()
    }

    /// Re-checks every defining relation by substitution.
    pub fn verify(&self) -> Result<()> {
        let f = &self.field;
        let q = self.q as u128;
        let fail = |what: &str| {
            Err(Error::Verification(format!(
                "constant check failed: {what}"
            )))
        };
        if self.lambda_set.len() as u64 != self.q
            || self
                .lambda_set
                .iter()
                .any(|&l| !f.add(f.pow(l, q), l).is_zero())
        {
            return fail("lambda^q + lambda = 0");
        }
        if self.zeta_set.len() as u64 != self.q + 1
            || self
                .zeta_set
                .iter()
                .any(|&z| f.pow(z, q + 1) != FieldElem::ONE)
        {
            return fail("zeta^{q+1} = 1");
        }
        if f.add(f.pow(self.a_root, q), self.a_root) != FieldElem::ONE {
            return fail("a^q + a = 1");
        }
        match self.mode {
            Mode::Fm { m } => {
                if self.omega_set.is_empty()
                    || self
                        .omega_set
                        .iter()
                        .any(|&w| !f.add(f.pow(w, m as u128), FieldElem::ONE).is_zero())
                {
                    return fail("omega^m + 1 = 0");
                }
            }
            Mode::Gr { r } => {
                let qr = self.q.pow(r) as u128;
                if self.zeta_r_set.len() as u128 != qr + 1
                    || self
                        .zeta_r_set
                        .iter()
                        .any(|&z| f.pow(z, qr + 1) != FieldElem::ONE)
                {
                    return fail("zeta^{q^r+1} = 1");
                }
                let (Some(b), Some(c), Some(cp)) = (self.b, self.c, self.c_prime) else {
                    return fail("b, c, c' missing");
                };
                let sign = if r % 2 == 1 {
                    FieldElem::ONE
                } else {
                    f.neg(FieldElem::ONE)
                };
                if b.is_zero() || b != f.mul(sign, f.pow(b, q.pow(2 * r))) {
                    return fail("b = (-1)^{r-1} b^{q^{2r}}");
                }
                if c.is_zero() || f.add(f.pow(c, q), c) != f.pow(b, qr + 1) {
                    return fail("c^q + c = b^{q^r+1}");
                }
                if cp != f.add(f.neg(c), make_gb(f, self.q, r, b).eval(b)) {
                    return fail("c' = -c + g_b(b)");
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fm_constants_live_in_fq2() {
        let c = make_family_constants(3, 1, Mode::Fm { m: 2 }, DEFAULT_EXT_CAP).unwrap();
        assert_eq!(c.field.size(), 9);
        assert_eq!(c.lambda_set.len(), 3);
        assert_eq!(c.zeta_set.len(), 4);
        let f = &c.field;
        assert_eq!(f.add(f.pow(c.a_root, 3), c.a_root), f.one());
    }

    #[test]
    fn gr_constants() {
        let c = make_family_constants(2, 1, Mode::Gr { r: 2 }, DEFAULT_EXT_CAP).unwrap();
        assert_eq!(c.field.size(), 16);
        let f = &c.field;
        let b = c.b.unwrap();
        assert_eq!(f.pow(b, 15), f.one());
        assert_eq!(c.zeta_r_set.len(), 5);
        let c3 = make_family_constants(3, 1, Mode::Gr { r: 2 }, DEFAULT_EXT_CAP).unwrap();
        assert_eq!(c3.field.size(), 6561);
        assert!(make_family_constants(2, 1, Mode::Gr { r: 3 }, DEFAULT_EXT_CAP).is_ok());
    }

    #[test]
    fn rejected_parameters() {
        assert!(make_family_constants(3, 1, Mode::Fm { m: 3 }, DEFAULT_EXT_CAP).is_err());
        assert!(make_family_constants(4, 1, Mode::Fm { m: 2 }, DEFAULT_EXT_CAP).is_err());
        assert!(matches!(
            make_family_constants(3, 1, Mode::Gr { r: 2 }, 4),
            Err(Error::ExtensionCap(4))
        ));
    }

    #[test]
    fn gb_for_q2_r2() {
        let c = make_family_constants(2, 1, Mode::Gr { r: 2 }, DEFAULT_EXT_CAP).unwrap();
        let f = &c.field;
        let b = c.b.unwrap();
        let g = make_gb(f, 2, 2, b);
        // b^4 y + b^8 y^2 in characteristic 2
        assert_eq!(
            g,
            UniPoly::new(f, vec![FieldElem::ZERO, f.pow(b, 4), f.pow(b, 8)])
        );
    }
}
