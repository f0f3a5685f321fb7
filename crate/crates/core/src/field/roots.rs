use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::FieldElem;
use crate::error::{Error, Result};
use crate::poly::UniPoly;

/// Fields with at most this many elements are searched exhaustively.
pub const SCAN_LIMIT: u64 = 1 << 20;

/// Distinct roots of `f` in its coefficient field, sorted by encoding.
pub fn find_roots(f: &UniPoly) -> Result<Vec<FieldElem>> {
    if f.ctx().size() <= SCAN_LIMIT {
        find_roots_scan(f)
    } else {
        find_roots_split(f)
    }
}

pub fn find_roots_scan(f: &UniPoly) -> Result<Vec<FieldElem>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(f.ctx()
        .elements()
        .filter(|&a| f.eval(a).is_zero())
        .collect())
}

/// Root finding by `gcd(f, x^Q - x)` followed by equal-degree splitting.
pub fn find_roots_split(f: &UniPoly) -> Result<Vec<FieldElem>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let ctx = f.ctx().clone();
    if f.is_constant() {
        return Ok(Vec::new());
    }
    let f = f.monic();
    let x = UniPoly::x(&ctx);
    let xq = x.powmod(ctx.size() as u128, &f);
    let g = f.gcd(&(&xq - &x));
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut roots = Vec::new();
    let mut stack = vec![g];
    while let Some(h) = stack.pop() {
        match h.degree() {
            None | Some(0) => {}
            Some(1) => roots.push(ctx.neg(h.coeff(0))),
            Some(_) => {
                let d = split_once(&h, &mut rng);
                let e = h.exact_div(&d)?;
                stack.push(d);
                stack.push(e);
            }
        }
    }
    roots.sort();
    roots.dedup();
    if roots.iter().any(|&r| !f.eval(r).is_zero()) {
        return Err(Error::Internal("root failed re-evaluation".into()));
    }
    Ok(roots)
}

/// A proper factor of a squarefree product of distinct linear factors.
fn split_once(h: &UniPoly, rng: &mut ChaCha8Rng) -> UniPoly {
    let ctx = h.ctx().clone();
    let deg = h.degree().unwrap_or(0);
    loop {
        let delta = ctx.random(rng);
        let shifted = UniPoly::new(&ctx, vec![delta, ctx.one()]);
        let probe = if ctx.p() == 2 {
            // absolute trace of delta*x
            let a = UniPoly::new(&ctx, vec![FieldElem::ZERO, ctx.random_nonzero(rng)]);
            let mut acc = a.rem(h).expect("nonzero modulus");
            let mut term = acc.clone();
            for _ in 1..ctx.k() {
                term = term.mulmod(&term, h);
                acc = &acc + &term;
            }
            acc
        } else {
            let pw = shifted.powmod(((ctx.size() - 1) / 2) as u128, h);
            &pw - &UniPoly::one(&ctx)
        };
        let d = h.gcd(&probe);
        if let Some(dd) = d.degree() {
            if dd > 0 && dd < deg {
                return d;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;

    #[test]
    fn fourth_roots_of_unity_in_f9() {
        let f = build_field(3, 2).unwrap();
        // zeta^4 - 1
        let p = UniPoly::from_ints(&f, &[-1, 0, 0, 0, 1]);
        let roots = find_roots(&p).unwrap();
        let scan: Vec<_> = f.elements().filter(|&a| f.pow(a, 4) == f.one()).collect();
        assert_eq!(roots.len(), 4);
        assert_eq!(roots, scan);
    }

    #[test]
    fn x2_plus_1_has_no_roots_over_f3() {
        let f = build_field(3, 1).unwrap();
        let p = UniPoly::from_ints(&f, &[1, 0, 1]);
        assert!(find_roots(&p).unwrap().is_empty());
        assert!(find_roots_split(&p).unwrap().is_empty());
    }

    #[test]
    fn linear_has_its_root() {
        let f = build_field(2, 5).unwrap();
        let c = f.elem(17).unwrap();
        assert_eq!(find_roots(&UniPoly::linear(&f, c)).unwrap(), vec![c]);
    }

    #[test]
    fn zero_polynomial_is_rejected() {
        let f = build_field(5, 1).unwrap();
        assert_eq!(find_roots(&UniPoly::zero(&f)), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn scan_and_split_agree() {
        for &(p, k) in &[(2u64, 10u32), (3, 6), (5, 4), (7, 3)] {
            let f = build_field(p, k).unwrap();
            let polys = [
                UniPoly::from_ints(&f, &[-1, 0, 0, 0, 0, 0, 0, 0, 1]),
                UniPoly::from_ints(&f, &[1, 1, 0, 1, 0, 0, 1]),
                &UniPoly::from_ints(&f, &[0, 1, 1]).pow(3) * &UniPoly::from_ints(&f, &[2, 1]),
            ];
            for poly in &polys {
                assert_eq!(
                    find_roots_scan(poly).unwrap(),
                    find_roots_split(poly).unwrap()
                );
            }
        }
    }
}
