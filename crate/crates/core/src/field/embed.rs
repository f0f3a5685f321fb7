use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use super::{find_roots, FieldCtx, FieldElem};
use crate::error::{Error, Result};
use crate::poly::UniPoly;

/// Ring homomorphism `src -> dst` fixing `F_p`, determined by the image of
/// the generator of `src`.
#[derive(Clone)]
pub struct FieldHom {
    src: Arc<FieldCtx>,
    dst: Arc<FieldCtx>,
    /// `basis[i]` is the image of `z^i`.
    basis: Vec<FieldElem>,
    inverse: Arc<OnceLock<HashMap<FieldElem, FieldElem>>>,
}

impl std::fmt::Debug for FieldHom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FieldHom({:?} -> {:?})", self.src, self.dst)
    }
}

pub fn embed(src: &Arc<FieldCtx>, dst: &Arc<FieldCtx>) -> Result<FieldHom> {
    if src.p() != dst.p() || dst.k() % src.k() != 0 {
        return Err(Error::NoEmbedding {
            src_p: src.p(),
            src_k: src.k(),
            dst_p: dst.p(),
            dst_k: dst.k(),
        });
    }
    let image_of_gen = if src.k() == 1 {
        FieldElem::ONE
    } else if Arc::ptr_eq(src, dst) || **src == **dst {
        dst.generator()
    } else {
        let modulus: Vec<FieldElem> = src.modulus().iter().map(|&c| FieldElem(c)).collect();
        let m = UniPoly::new(dst, modulus);
        *find_roots(&m)?
            .first()
            .ok_or_else(|| Error::Internal("modulus has no root in the overfield".into()))?
    };
    let mut basis = Vec::with_capacity(src.k() as usize);
    let mut cur = FieldElem::ONE;
    for _ in 0..src.k() {
        basis.push(cur);
        cur = dst.mul(cur, image_of_gen);
    }
    Ok(FieldHom {
        src: src.clone(),
        dst: dst.clone(),
        basis,
        inverse: Arc::new(OnceLock::new()),
    })
}

impl FieldHom {
    pub fn src(&self) -> &Arc<FieldCtx> {
        &self.src
    }

    pub fn dst(&self) -> &Arc<FieldCtx> {
        &self.dst
    }

    pub fn apply(&self, a: FieldElem) -> FieldElem {
        if self.src.k() == 1 {
            return a;
        }
        let d = &self.dst;
        let digits = self.src.digits(a);
        d.sum(
            digits
                .iter()
                .zip(&self.basis)
                .filter(|(&c, _)| c != 0)
                .map(|(&c, &b)| d.mul(d.from_int(c as i64), b)),
        )
    }

    /// Preimage of `b`, if `b` lies in the image.
    pub fn preimage(&self, b: FieldElem) -> Option<FieldElem> {
        let table = self
            .inverse
            .get_or_init(|| self.src.elements().map(|a| (self.apply(a), a)).collect());
        table.get(&b).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn check_hom(h: &FieldHom) {
        let (s, d) = (h.src(), h.dst());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let a = s.random(&mut rng);
            let b = s.random(&mut rng);
            assert_eq!(h.apply(s.add(a, b)), d.add(h.apply(a), h.apply(b)));
            assert_eq!(h.apply(s.mul(a, b)), d.mul(h.apply(a), h.apply(b)));
        }
    }

    #[test]
    fn prime_field_into_f9_is_identity() {
        let f3 = build_field(3, 1).unwrap();
        let f9 = build_field(3, 2).unwrap();
        let h = embed(&f3, &f9).unwrap();
        for a in f3.elements() {
            assert_eq!(h.apply(a), a);
        }
        check_hom(&h);
    }

    #[test]
    fn f4_into_f16_sends_generator_to_a_root() {
        let f4 = build_field(2, 2).unwrap();
        let f16 = build_field(2, 4).unwrap();
        let h = embed(&f4, &f16).unwrap();
        let g = h.apply(f4.generator());
        let m: Vec<FieldElem> = f4.modulus().iter().map(|&c| FieldElem(c)).collect();
        assert!(UniPoly::new(&f16, m).eval(g).is_zero());
        check_hom(&h);
        for a in f4.elements() {
            assert_eq!(h.preimage(h.apply(a)), Some(a));
        }
    }

    #[test]
    fn self_embedding_is_identity() {
        let f = build_field(5, 2).unwrap();
        let h = embed(&f, &f).unwrap();
        for a in f.elements() {
            assert_eq!(h.apply(a), a);
        }
    }

    #[test]
    fn larger_towers_are_homomorphic() {
        for &(p, k1, k2) in &[(2u64, 6u32, 18u32), (3, 8, 16), (7, 2, 6)] {
            let a = build_field(p, k1).unwrap();
            let b = build_field(p, k2).unwrap();
            check_hom(&embed(&a, &b).unwrap());
        }
    }

    #[test]
    fn rejects_non_divisible_degrees() {
        let a = build_field(2, 3).unwrap();
        let b = build_field(2, 4).unwrap();
        assert!(matches!(embed(&a, &b), Err(Error::NoEmbedding { .. })));
    }
}
