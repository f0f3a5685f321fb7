use super::{build_field, FieldCtx, FieldElem};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// `L(T) = sum_i a_i T^{p^{e_i}}`, stored as `(a_i, e_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditivePoly {
    pub terms: Vec<(FieldElem, u32)>,
}

impl AdditivePoly {
    pub fn new(terms: Vec<(FieldElem, u32)>) -> AdditivePoly {
        AdditivePoly { terms }
    }

    /// `T^{q} + T` with `q = p^n`.
    pub fn trace_like(n: u32) -> AdditivePoly {
        AdditivePoly::new(vec![(FieldElem::ONE, n), (FieldElem::ONE, 0)])
    }

    pub fn eval(&self, f: &FieldCtx, t: FieldElem) -> FieldElem {
        f.sum(self.terms.iter().map(|&(a, e)| {
            let mut v = t;
            for _ in 0..e {
                v = f.frobenius(v);
            }
            f.mul(a, v)
        }))
    }
}

/// Largest solution set `solve_additive` will enumerate.
const MAX_SOLUTIONS: u64 = 1 << 24;

/// All `T` in `f` with `L(T) = rhs`, sorted by encoding. `L` is treated as an
/// `F_p`-linear operator on the coefficient basis `1, z, ..., z^{k-1}`.
pub fn solve_additive(l: &AdditivePoly, rhs: FieldElem, f: &FieldCtx) -> Result<Vec<FieldElem>> {
    let k = f.k() as usize;
    let fp = build_field(f.p() as u64, 1)?;
    let mut m = Matrix::zeros(k, k);
    let mut basis = FieldElem::ONE;
    for col in 0..k {
        let img = f.digits(l.eval(f, basis));
        for (row, &d) in img.iter().enumerate() {
            m.set(row, col, FieldElem(d));
        }
        basis = f.mul(
            basis,
            if k == 1 {
                FieldElem::ONE
            } else {
                f.generator()
            },
        );
    }
    let b: Vec<FieldElem> = f.digits(rhs).into_iter().map(FieldElem).collect();
    let Some((x0, kernel)) = m.solve(&fp, &b) else {
        return Ok(Vec::new());
    };
    let count = (f.p() as u64)
        .checked_pow(kernel.len() as u32)
        .filter(|&c| c <= MAX_SOLUTIONS)
        .ok_or_else(|| Error::Internal("additive solution set too large to enumerate".into()))?;
    let mut out = Vec::with_capacity(count as usize);
    let mut coeffs = vec![0u32; kernel.len()];
    for _ in 0..count {
        let mut v: Vec<u32> = x0.iter().map(|e| e.0).collect();
        for (c, kv) in coeffs.iter().zip(&kernel) {
            for (vi, &ki) in v.iter_mut().zip(kv) {
                *vi = ((*vi as u64 + *c as u64 * ki.0 as u64) % f.p() as u64) as u32;
            }
        }
        out.push(f.from_digits(&v));
        for c in coeffs.iter_mut() {
            *c += 1;
            if *c < f.p() {
                break;
            }
            *c = 0;
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scan(l: &AdditivePoly, rhs: FieldElem, f: &FieldCtx) -> Vec<FieldElem> {
        f.elements().filter(|&t| l.eval(f, t) == rhs).collect()
    }

    #[test]
    fn t3_plus_t_over_f9() {
        let f = build_field(3, 2).unwrap();
        let l = AdditivePoly::trace_like(1);
        let sols = solve_additive(&l, f.zero(), &f).unwrap();
        assert_eq!(sols.len(), 3);
        assert_eq!(sols, scan(&l, f.zero(), &f));
        // the nonzero solutions square to -1
        for s in sols.iter().filter(|s| !s.is_zero()) {
            assert_eq!(f.mul(*s, *s), f.from_int(-1));
        }
    }

    #[test]
    fn kernel_of_tq_plus_t_has_q_elements() {
        for &(p, n) in &[(2u64, 1u32), (2, 2), (3, 1), (5, 1), (7, 1), (2, 3)] {
            let f = build_field(p, 2 * n).unwrap();
            let sols = solve_additive(&AdditivePoly::trace_like(n), f.zero(), &f).unwrap();
            assert_eq!(sols.len() as u64, p.pow(n));
        }
    }

    #[test]
    fn artin_schreier_over_f16() {
        let f = build_field(2, 4).unwrap();
        let l = AdditivePoly::trace_like(1);
        for b in f.elements().filter(|&b| f.pow(b, 15) == f.one()) {
            let rhs = f.pow(b, 5);
            let sols = solve_additive(&l, rhs, &f).unwrap();
            assert_eq!(sols.len(), 2);
            assert_eq!(sols, scan(&l, rhs, &f));
        }
    }

    #[test]
    fn matches_scan_on_small_fields() {
        for &(p, k) in &[(2u64, 8u32), (3, 5), (5, 3)] {
            let f = build_field(p, k).unwrap();
            let l = AdditivePoly::new(vec![(f.generator(), 2), (f.one(), 1), (f.from_int(-1), 0)]);
            for rhs in f.elements().step_by(17) {
                assert_eq!(solve_additive(&l, rhs, &f).unwrap(), scan(&l, rhs, &f));
            }
        }
    }
}
