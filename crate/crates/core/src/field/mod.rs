//! Finite fields `F_{p^k}` presented as `F_p[z]/(modulus)`.
//!
//! Elements are stored as their coefficient vector packed into a base-`p`
//! integer: `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`, where `c_i` is the
//! coefficient of `z^i`. The prime field is therefore `0..p`.

mod additive;
mod embed;
mod roots;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;

use crate::error::{Error, Result};

pub use additive::{solve_additive, AdditivePoly};
pub use embed::{embed, FieldHom};
pub use roots::{find_roots, find_roots_scan, find_roots_split, SCAN_LIMIT};

/// Default cap on the number of field elements.
pub const DEFAULT_FIELD_CAP: u64 = 1 << 32;

/// Fields up to this size get exp/log (and Zech) tables.
const TABLE_LIMIT: u64 = 1 << 20;

/// An element of some [`FieldCtx`]. Carries no context; all arithmetic goes
/// through the owning field.
#[derive(Copy, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem(pub(crate) u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    /// The packed base-`p` encoding.
    pub fn raw(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
    /// `zech[d] = log(1 + g^d)`, `NONE` when `1 + g^d = 0`. Odd `p` only.
    zech: Vec<u32>,
}

const NONE: u32 = u32::MAX;

pub struct FieldCtx {
    p: u32,
    k: u32,
    size: u64,
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.p, self.k, self.modulus)
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Builds `F_{p^k}` with the default size cap.
pub fn build_field(p: u64, k: u32) -> Result<Arc<FieldCtx>> {
    build_field_capped(p, k, DEFAULT_FIELD_CAP)
}

/// Builds `F_{p^k}`, reusing a process-wide cache. The modulus is the
/// lexicographically smallest monic irreducible of degree `k` (coefficients
/// compared from `z^{k-1}` downwards), so construction is deterministic.
pub fn build_field_capped(p: u64, k: u32, cap: u64) -> Result<Arc<FieldCtx>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k == 0 {
        return Err(Error::InvalidParameters(
            "extension degree must be >= 1".into(),
        ));
    }
    let cap = cap.min(DEFAULT_FIELD_CAP);
    let size = (p as u128).checked_pow(k).unwrap_or(u128::MAX);
    if size > cap as u128 {
        return Err(Error::FieldTooLarge { p, k, cap });
    }
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32), Arc<FieldCtx>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(f) = cache.lock().expect("field cache poisoned").get(&(p, k)) {
        return Ok(f.clone());
    }
    let ctx = Arc::new(FieldCtx::new(p as u32, k, size as u64));
    cache
        .lock()
        .expect("field cache poisoned")
        .entry((p, k))
        .or_insert_with(|| ctx.clone());
    Ok(ctx)
}

impl FieldCtx {
    fn new(p: u32, k: u32, size: u64) -> FieldCtx {
        let modulus = if k == 1 {
            vec![0, 1]
        } else {
            smallest_irreducible(p, k)
        };
        let mut ctx = FieldCtx {
            p,
            k,
            size,
            modulus,
            tables: None,
        };
        if k > 1 && size <= TABLE_LIMIT {
            ctx.tables = Some(ctx.build_tables());
        }
        ctx
    }

    fn build_tables(&self) -> Tables {
        let n1 = (self.size - 1) as usize;
        let factors = prime_factors(n1 as u64);
        let g = (2..self.size as u32)
            .map(FieldElem)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&r| self.slow_pow(g, n1 as u64 / r) != FieldElem::ONE)
            })
            .expect("multiplicative group is cyclic");
        let mut exp = vec![0u32; n1];
        let mut log = vec![0u32; self.size as usize];
        let mut cur = FieldElem::ONE;
        for (i, e) in exp.iter_mut().enumerate() {
            *e = cur.0;
            log[cur.0 as usize] = i as u32;
            cur = self.slow_mul(cur, g);
        }
        let mut zech = Vec::new();
        if self.p != 2 {
            zech = exp
                .iter()
                .map(|&e| {
                    let s = self.digit_add(FieldElem(e), FieldElem::ONE);
                    if s.is_zero() {
                        NONE
                    } else {
                        log[s.0 as usize]
                    }
                })
                .collect();
        }
        Tables { exp, log, zech }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    /// Coefficients of the modulus, lowest degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem::ZERO
    }

    pub fn one(&self) -> FieldElem {
        FieldElem::ONE
    }

    /// The class of `z`; equals 0 in a prime field (modulus `z`).
    pub fn generator(&self) -> FieldElem {
        if self.k == 1 {
            FieldElem::ZERO
        } else {
            FieldElem(self.p)
        }
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> FieldElem {
        FieldElem(n.rem_euclid(self.p as i64) as u32)
    }

    /// Element with the given raw encoding; `None` when out of range.
    pub fn elem(&self, raw: u64) -> Option<FieldElem> {
        (raw < self.size).then_some(FieldElem(raw as u32))
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.size).map(|v| FieldElem(v as u32))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        FieldElem(rng.gen_range(0..self.size) as u32)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        FieldElem(rng.gen_range(1..self.size) as u32)
    }

    pub fn digits(&self, a: FieldElem) -> Vec<u32> {
        let mut v = a.0 as u64;
        let mut out = vec![0u32; self.k as usize];
        for d in out.iter_mut() {
            *d = (v % self.p as u64) as u32;
            v /= self.p as u64;
        }
        out
    }

    pub fn from_digits(&self, digits: &[u32]) -> FieldElem {
        let mut v = 0u64;
        for &d in digits.iter().rev() {
            v = v * self.p as u64 + (d % self.p) as u64;
        }
        FieldElem(v as u32)
    }

    fn digit_add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let p = self.p as u64;
        let (mut x, mut y) = (a.0 as u64, b.0 as u64);
        let mut out = 0u64;
        let mut place = 1u64;
        while x > 0 || y > 0 {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place *= p;
        }
        FieldElem(out as u32)
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.p == 2 {
            return FieldElem(a.0 ^ b.0);
        }
        if self.k == 1 {
            return FieldElem(((a.0 as u64 + b.0 as u64) % self.p as u64) as u32);
        }
        if let Some(t) = &self.tables {
            if a.0 == 0 {
                return b;
            }
            if b.0 == 0 {
                return a;
            }
            let n1 = t.exp.len() as u64;
            let la = t.log[a.0 as usize] as u64;
            let lb = t.log[b.0 as usize] as u64;
            let z = t.zech[((lb + n1 - la) % n1) as usize];
            if z == NONE {
                return FieldElem::ZERO;
            }
            return FieldElem(t.exp[((la + z as u64) % n1) as usize]);
        }
        self.digit_add(a, b)
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if self.p == 2 || a.0 == 0 {
            return a;
        }
        if self.k == 1 {
            return FieldElem(self.p - a.0);
        }
        if let Some(t) = &self.tables {
            let n1 = t.exp.len() as u64;
            let la = t.log[a.0 as usize] as u64;
            return FieldElem(t.exp[((la + n1 / 2) % n1) as usize]);
        }
        let p = self.p as u64;
        let mut x = a.0 as u64;
        let mut out = 0u64;
        let mut place = 1u64;
        while x > 0 {
            out += ((p - x % p) % p) * place;
            x /= p;
            place *= p;
        }
        FieldElem(out as u32)
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem::ZERO;
        }
        if self.k == 1 {
            return FieldElem(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32);
        }
        if let Some(t) = &self.tables {
            let n1 = t.exp.len() as u64;
            let s = t.log[a.0 as usize] as u64 + t.log[b.0 as usize] as u64;
            return FieldElem(t.exp[(s % n1) as usize]);
        }
        self.slow_mul(a, b)
    }

    /// Schoolbook product of coefficient vectors reduced by the modulus.
    fn slow_mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let p = self.p as u64;
        let k = self.k as usize;
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for i in (k..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..k {
                let m = self.modulus[j] as u64;
                prod[i - k + j] = (prod[i - k + j] + (p - c) * m) % p;
            }
        }
        let d: Vec<u32> = prod[..k].iter().map(|&v| v as u32).collect();
        self.from_digits(&d)
    }

    fn slow_pow(&self, a: FieldElem, mut e: u64) -> FieldElem {
        let mut base = a;
        let mut acc = FieldElem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.slow_mul(acc, base);
            }
            base = self.slow_mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn pow(&self, a: FieldElem, e: u128) -> FieldElem {
        if e == 0 {
            return FieldElem::ONE;
        }
        if a.0 == 0 {
            return FieldElem::ZERO;
        }
        let n1 = (self.size - 1) as u128;
        let e = ((e - 1) % n1) as u64 + 1;
        if let Some(t) = &self.tables {
            let l = t.log[a.0 as usize] as u128 * e as u128;
            return FieldElem(t.exp[(l % n1) as usize]);
        }
        let mut base = a;
        let mut acc = FieldElem::ONE;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        if let Some(t) = &self.tables {
            let n1 = t.exp.len();
            let l = t.log[a.0 as usize] as usize;
            return Ok(FieldElem(t.exp[(n1 - l) % n1]));
        }
        Ok(self.pow(a, (self.size - 2) as u128))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn frobenius(&self, a: FieldElem) -> FieldElem {
        self.pow(a, self.p as u128)
    }

    pub fn sum<I: IntoIterator<Item = FieldElem>>(&self, it: I) -> FieldElem {
        it.into_iter()
            .fold(FieldElem::ZERO, |acc, x| self.add(acc, x))
    }

    /// True when `a` lies in the subfield `F_{p^d}` (requires `d | k`).
    pub fn in_subfield(&self, a: FieldElem, d: u32) -> bool {
        self.pow(a, (self.p as u128).pow(d)) == a
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: FieldElem) -> Result<u64> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut n = self.size - 1;
        for r in prime_factors(n) {
            while n % r == 0 && self.pow(a, (n / r) as u128) == FieldElem::ONE {
                n /= r;
            }
        }
        Ok(n)
    }

    pub fn format(&self, a: FieldElem) -> String {
        if self.k == 1 {
            return a.0.to_string();
        }
        let d = self.digits(a);
        let terms: Vec<String> = d
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "z".to_string(),
                (1, c) => format!("{c}z"),
                (i, 1) => format!("z^{i}"),
                (i, c) => format!("{c}z^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

// --- small dense polynomials over F_p used for modulus selection ---

fn fp_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn fp_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    fp_trim(&mut r);
    let dm = m.len() - 1;
    let inv_lc = fp_inv(m[dm], p);
    while r.len() > dm {
        let c = r[r.len() - 1] * inv_lc % p;
        let shift = r.len() - 1 - dm;
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + (p - c) * mi % p) % p;
        }
        fp_trim(&mut r);
    }
    r
}

fn fp_inv(a: u64, p: u64) -> u64 {
    let mut e = p - 2;
    let mut base = a % p;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

fn fp_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    fp_rem(&prod, m, p)
}

fn fp_powmod(a: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut base = fp_rem(a, m, p);
    let mut acc = vec![1u64];
    while e > 0 {
        if e & 1 == 1 {
            acc = fp_mulmod(&acc, &base, m, p);
        }
        base = fp_mulmod(&base, &base, m, p);
        e >>= 1;
    }
    acc
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    fp_trim(&mut a);
    fp_trim(&mut b);
    while !b.is_empty() {
        let r = fp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Rabin's irreducibility test for a monic `f` of degree `k` over `F_p`.
pub(crate) fn is_irreducible_fp(f: &[u64], p: u64) -> bool {
    let k = (f.len() - 1) as u64;
    let x = vec![0u64, 1];
    // frob[i] = x^{p^i} mod f
    let mut frob = vec![fp_rem(&x, f, p)];
    for i in 0..k as usize {
        let next = fp_powmod(&frob[i], p, f, p);
        frob.push(next);
    }
    let xr = fp_rem(&x, f, p);
    if frob[k as usize] != xr {
        return false;
    }
    for r in prime_factors(k) {
        let mut h = frob[(k / r) as usize].clone();
        h.resize(h.len().max(2), 0);
        h[1] = (h[1] + p - 1) % p;
        fp_trim(&mut h);
        let g = fp_gcd(f, &h, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

fn smallest_irreducible(p: u32, k: u32) -> Vec<u32> {
    let p64 = p as u64;
    let limit = p64.pow(k);
    for low in 0..limit {
        let mut f = Vec::with_capacity(k as usize + 1);
        let mut v = low;
        for _ in 0..k {
            f.push(v % p64);
            v /= p64;
        }
        f.push(1);
        if f[0] == 0 {
            continue;
        }
        if is_irreducible_fp(&f, p64) {
            return f.into_iter().map(|c| c as u32).collect();
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Independent check: trial division by every monic polynomial of degree
    /// 1..=k/2.
    fn irreducible_by_trial_division(f: &[u64], p: u64) -> bool {
        let k = f.len() - 1;
        for d in 1..=k / 2 {
            for low in 0..p.pow(d as u32) {
                let mut g = Vec::new();
                let mut v = low;
                for _ in 0..d {
                    g.push(v % p);
                    v /= p;
                }
                g.push(1);
                if fp_rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn prime_field_uses_linear_modulus() {
        let f = build_field(3, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.size(), 3);
        assert_eq!(f.mul(f.from_int(2), f.from_int(2)), f.one());
    }

    #[test]
    fn f16_modulus_is_first_irreducible_in_lex_order() {
        let f = build_field(2, 4).unwrap();
        // enumerate monic quartics over F_2 in lex order, keep the first irreducible
        let expected = (0..16u64)
            .map(|low| {
                let mut c: Vec<u64> = (0..4).map(|i| (low >> i) & 1).collect();
                c.push(1);
                c
            })
            .find(|c| irreducible_by_trial_division(c, 2))
            .unwrap();
        let got: Vec<u64> = f.modulus().iter().map(|&c| c as u64).collect();
        assert_eq!(got, expected);
        assert_eq!(got, vec![1, 1, 0, 0, 1]);
    }

    #[test]
    fn rabin_agrees_with_trial_division() {
        for &(p, k) in &[(2u64, 5usize), (3, 4), (5, 3)] {
            for low in 0..p.pow(k as u32) {
                let mut f: Vec<u64> = Vec::new();
                let mut v = low;
                for _ in 0..k {
                    f.push(v % p);
                    v /= p;
                }
                f.push(1);
                assert_eq!(
                    is_irreducible_fp(&f, p),
                    irreducible_by_trial_division(&f, p),
                    "p={p} f={f:?}"
                );
            }
        }
    }

    #[test]
    fn construction_is_deterministic() {
        let a = FieldCtx::new(3, 5, 243);
        let b = FieldCtx::new(3, 5, 243);
        assert_eq!(a.modulus(), b.modulus());
    }

    #[test]
    fn frobenius_identity_in_f9() {
        let f = build_field(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let a = f.random(&mut rng);
            assert_eq!(f.pow(a, 9), a);
        }
    }

    #[test]
    fn frobenius_fixes_exactly_the_prime_field() {
        for &(p, k) in &[(2u64, 6u32), (3, 4), (5, 2), (7, 2), (2, 1)] {
            let f = build_field(p, k).unwrap();
            let fixed = f.elements().filter(|&a| f.frobenius(a) == a).count();
            assert_eq!(fixed as u64, p);
        }
    }

    #[test]
    fn table_and_slow_paths_agree() {
        let f = build_field(3, 5).unwrap();
        let slow = FieldCtx {
            p: 3,
            k: 5,
            size: 243,
            modulus: f.modulus.clone(),
            tables: None,
        };
        for a in f.elements() {
            for b in f.elements().step_by(7) {
                assert_eq!(f.mul(a, b), slow.mul(a, b));
                assert_eq!(f.add(a, b), slow.add(a, b));
                assert_eq!(f.neg(a), slow.neg(a));
            }
        }
    }

    #[test]
    fn field_axioms_on_large_untabled_field() {
        let f = build_field(3, 14).unwrap();
        assert!(f.tables.is_none());
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let a = f.random_nonzero(&mut rng);
            let b = f.random(&mut rng);
            let c = f.random(&mut rng);
            assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
            assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            assert_eq!(f.add(b, f.neg(b)), f.zero());
            assert_eq!(f.pow(a, f.size() as u128), a);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(build_field(4, 2).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(
            build_field(2, 40),
            Err(Error::FieldTooLarge { .. })
        ));
        assert!(matches!(
            build_field_capped(3, 5, 100),
            Err(Error::FieldTooLarge { .. })
        ));
    }
}
