//! Exact arithmetic in prime fields `F_p` and their extensions `F_{p^k}`.
//!
//! Elements are stored as a compact index `Σ c_i p^i` of their coefficient
//! vector in the polynomial basis `1, t, ..., t^{k-1}`. Addition goes through
//! a full table, multiplication through discrete log/exp tables.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field order the table-driven arithmetic accepts.
pub const MAX_ORDER: u32 = 4096;

/// An element of `F_{p^k}`, encoded as the integer `Σ c_i p^i`.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fe(pub u16);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Characteristic, degree and defining polynomial of a finite field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldParams {
    pub p: u32,
    pub k: u32,
    /// Monic modulus, little-endian coefficients, length `k + 1`.
    pub modulus: Vec<u32>,
}

impl FieldParams {
    /// The lexicographically least monic irreducible polynomial of degree `k`:
    /// lower coefficients are enumerated by increasing `Σ c_i p^i`.
    pub fn new(p: u32, k: u32) -> Result<FieldParams> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(Error::InvalidField("extension degree must be >= 1".into()));
        }
        let q = p.checked_pow(k).filter(|&q| q <= MAX_ORDER).ok_or_else(|| {
            Error::InvalidField(format!("field of order {p}^{k} exceeds {MAX_ORDER}"))
        })?;
        for code in 0..q {
            let mut poly = digits(code, p, k as usize);
            poly.push(1);
            if is_irreducible(&poly, p) {
                return Ok(FieldParams { p, k, modulus: poly });
            }
        }
        unreachable!("an irreducible polynomial exists in every degree")
    }

    pub fn order(&self) -> u32 {
        self.p.pow(self.k)
    }
}

/// Arithmetic tables for one finite field.
pub struct Field {
    params: FieldParams,
    q: u32,
    add: Vec<u16>,
    neg: Vec<u16>,
    /// `log[x]` for nonzero `x`.
    log: Vec<u16>,
    /// `exp[i] = g^i` for `i < 2(q-1)`.
    exp: Vec<u16>,
    frob: Vec<u16>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.params.p, self.params.k)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.params == other.params
    }
}

impl Field {
    pub fn new(p: u32, k: u32) -> Result<Arc<Field>> {
        Ok(Arc::new(Field::from_params(FieldParams::new(p, k)?)?))
    }

    pub fn prime(p: u32) -> Result<Arc<Field>> {
        Field::new(p, 1)
    }

    pub fn from_params(params: FieldParams) -> Result<Field> {
        let p = params.p;
        let k = params.k as usize;
        if params.modulus.len() != k + 1 || params.modulus[k] != 1 {
            return Err(Error::InvalidField("modulus must be monic of degree k".into()));
        }
        if !is_irreducible(&params.modulus, p) {
            return Err(Error::InvalidField("modulus is reducible".into()));
        }
        let q = params.order();
        let qs = q as usize;
        let mut add = vec![0u16; qs * qs];
        let mut neg = vec![0u16; qs];
        for a in 0..q {
            let da = digits(a, p, k);
            for b in 0..q {
                let db = digits(b, p, k);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = undigits(&s, p) as u16;
            }
            let n: Vec<u32> = da.iter().map(|x| (p - x) % p).collect();
            neg[a as usize] = undigits(&n, p) as u16;
        }
        // Find a primitive element by brute force.
        let mul_poly = |a: u32, b: u32| -> u32 {
            let r = poly_mulmod(&digits(a, p, k), &digits(b, p, k), &params.modulus, p);
            undigits(&r, p)
        };
        let mut exp = Vec::new();
        let mut log = vec![0u16; qs];
        for g in 1..q {
            let mut seq = Vec::with_capacity(qs);
            let mut x = 1u32;
            loop {
                seq.push(x as u16);
                x = mul_poly(x, g);
                if x == 1 {
                    break;
                }
            }
            if seq.len() == qs - 1 {
                exp = seq;
                break;
            }
        }
        for (i, &x) in exp.iter().enumerate() {
            log[x as usize] = i as u16;
        }
        let doubled: Vec<u16> = exp.iter().chain(exp.iter()).copied().collect();
        let mut field = Field { params, q, add, neg, log, exp: doubled, frob: vec![0; qs] };
        for a in 0..q {
            field.frob[a as usize] = field.pow(Fe(a as u16), p as u64).0;
        }
        Ok(field)
    }

    pub fn params(&self) -> &FieldParams {
        &self.params
    }

    pub fn p(&self) -> u32 {
        self.params.p
    }

    pub fn k(&self) -> u32 {
        self.params.k
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        Fe(self.add[a.0 as usize * self.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        Fe(self.exp[self.log[a.0 as usize] as usize + self.log[b.0 as usize] as usize])
    }

    /// `a + b*c`.
    #[inline]
    pub fn mul_add(&self, a: Fe, b: Fe, c: Fe) -> Fe {
        self.add(a, self.mul(b, c))
    }

    pub fn inv(&self, a: Fe) -> Option<Fe> {
        if a.is_zero() {
            return None;
        }
        let l = self.log[a.0 as usize] as usize;
        Some(Fe(self.exp[(self.q as usize - 1 - l) % (self.q as usize - 1)]))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Option<Fe> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.is_zero() {
            return Fe::ZERO;
        }
        let l = self.log[a.0 as usize] as u64;
        let m = (self.q - 1) as u64;
        Fe(self.exp[((l * (e % m)) % m) as usize])
    }

    /// `x ↦ x^p`.
    #[inline]
    pub fn frobenius(&self, a: Fe) -> Fe {
        Fe(self.frob[a.0 as usize])
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fe {
        let p = self.params.p as i64;
        Fe(n.rem_euclid(p) as u16)
    }

    /// Inverse of `from_int` on the prime subfield.
    pub fn to_prime(&self, a: Fe) -> Option<u32> {
        (u32::from(a.0) < self.params.p).then_some(u32::from(a.0))
    }

    pub fn is_in_prime_subfield(&self, a: Fe) -> bool {
        u32::from(a.0) < self.params.p
    }

    pub fn coeffs(&self, a: Fe) -> Vec<u32> {
        digits(u32::from(a.0), self.params.p, self.params.k as usize)
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Result<Fe> {
        if c.len() > self.params.k as usize || c.iter().any(|&x| x >= self.params.p) {
            return Err(Error::Parse(format!(
                "coefficient vector {c:?} does not describe an element of {self:?}"
            )));
        }
        Ok(Fe(undigits(c, self.params.p) as u16))
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.q).map(|x| Fe(x as u16))
    }

    /// All `λ` with `λ^p - λ = c`, in increasing encoding order.
    pub fn artin_schreier_roots(&self, c: Fe) -> Vec<Fe> {
        self.elements()
            .filter(|&x| self.sub(self.frobenius(x), x) == c)
            .collect()
    }

    /// Roots in this field of `a x^2 + b x + c`, not all of `a, b, c` zero.
    pub fn quadratic_roots(&self, a: Fe, b: Fe, c: Fe) -> Vec<Fe> {
        self.elements()
            .filter(|&x| {
                let v = self.add(self.mul(self.add(self.mul(a, x), b), x), c);
                v.is_zero()
            })
            .collect()
    }

    /// Embedding of `self` into `other` sending the generator `t` to the
    /// least root of `self`'s modulus in `other`. Returns the image table.
    pub fn embedding_into(&self, other: &Field) -> Option<Vec<Fe>> {
        if self.params.p != other.params.p || !other.params.k.is_multiple_of(self.params.k) {
            return None;
        }
        let modulus = &self.params.modulus;
        let eval = |x: Fe| {
            let mut acc = Fe::ZERO;
            for &c in modulus.iter().rev() {
                acc = other.add(other.mul(acc, x), other.from_int(c as i64));
            }
            acc
        };
        let root = other.elements().find(|&x| eval(x).is_zero())?;
        let table = self
            .elements()
            .map(|a| {
                let mut acc = Fe::ZERO;
                for &c in self.coeffs(a).iter().rev() {
                    acc = other.add(other.mul(acc, root), other.from_int(c as i64));
                }
                acc
            })
            .collect();
        Some(table)
    }

    /// Serialization as a coefficient vector, e.g. `[2,1]` for `2 + t`.
    pub fn format(&self, a: Fe) -> String {
        let c = self.coeffs(a);
        let body: Vec<String> = c.iter().map(|x| x.to_string()).collect();
        format!("[{}]", body.join(","))
    }

    /// Accepts a bare integer (prime subfield) or a bracketed coefficient vector.
    pub fn parse(&self, s: &str) -> Result<Fe> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let coeffs = inner
                .split(',')
                .map(|t| t.trim())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<u32>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
                .collect::<Result<Vec<u32>>>()?;
            self.from_coeffs(&coeffs)
        } else {
            let n: i64 = s.parse().map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
            Ok(self.from_int(n))
        }
    }
}

/// `C(a, b) mod p` via base-`p` digits.
pub fn lucas_binom(mut a: u64, mut b: u64, p: u32) -> u32 {
    let p64 = p as u64;
    let mut acc = 1u64;
    while b > 0 {
        let (ad, bd) = (a % p64, b % p64);
        if bd > ad {
            return 0;
        }
        acc = acc * small_binom(ad, bd, p64) % p64;
        a /= p64;
        b /= p64;
    }
    acc as u32
}

fn small_binom(a: u64, b: u64, p: u64) -> u64 {
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..b {
        num = num * ((a - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    num * modinv(den, p) % p
}

fn modinv(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    r
}

/// `C(a, b) mod p` for an arbitrary integer top `a`.
pub fn binom_mod_p(a: i64, b: u64, p: u32) -> u32 {
    if a >= 0 {
        lucas_binom(a as u64, b, p)
    } else {
        // C(-n, b) = (-1)^b C(n + b - 1, b)
        let n = (-a) as u64;
        let v = lucas_binom(n + b - 1, b, p);
        if b % 2 == 1 {
            (p - v) % p
        } else {
            v
        }
    }
}

pub fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn digits(mut x: u32, p: u32, k: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        out.push(x % p);
        x /= p;
    }
    out
}

fn undigits(c: &[u32], p: u32) -> u32 {
    c.iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    v
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let mut r = poly_rem(&prod, m, p);
    r.resize(m.len() - 1, 0);
    r
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = modinv(m[dm] as u64, p as u64) as u32;
    while r.len() > dm && !(r.len() == 1 && r[0] == 0) {
        let dr = r.len() - 1;
        let c = r[dr] * lead_inv % p;
        for i in 0..=dm {
            let idx = dr - dm + i;
            r[idx] = (r[idx] + p * p - c * m[i] % p) % p;
        }
        r = trim(r);
        if r.len() - 1 < dm {
            break;
        }
    }
    r
}

/// Irreducibility by trial division against every monic polynomial of degree
/// at most half the degree.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let poly = trim(poly.to_vec());
    let d = poly.len() - 1;
    if d == 0 {
        return false;
    }
    for deg in 1..=d / 2 {
        for code in 0..p.pow(deg as u32) {
            let mut divisor = digits(code, p, deg);
            divisor.push(1);
            let r = poly_rem(&poly, &divisor, p);
            if r.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn exact_binom(a: u64, b: u64) -> u128 {
        if b > a {
            return 0;
        }
        let mut r: u128 = 1;
        for i in 0..b {
            r = r * (a - i) as u128 / (i + 1) as u128;
        }
        r
    }

    #[test]
    fn lucas_matches_factorials() {
        assert_eq!(lucas_binom(4, 2, 2), 0);
        assert_eq!(lucas_binom(7, 3, 5), 0);
        for p in [2u32, 3, 5] {
            for a in 0..=64u64 {
                assert_eq!(lucas_binom(a, 0, p), 1);
                for b in 0..=64u64 {
                    let want = (exact_binom(a, b) % p as u128) as u32;
                    assert_eq!(lucas_binom(a, b, p), want, "C({a},{b}) mod {p}");
                }
            }
        }
    }

    #[test]
    fn negative_binomials() {
        // C(-1, b) = (-1)^b
        assert_eq!(binom_mod_p(-1, 3, 5), 4);
        assert_eq!(binom_mod_p(-2, 2, 5), 3);
    }

    #[test]
    fn least_moduli() {
        assert_eq!(FieldParams::new(3, 2).unwrap().modulus, vec![1, 0, 1]);
        assert_eq!(FieldParams::new(2, 2).unwrap().modulus, vec![1, 1, 1]);
        assert_eq!(FieldParams::new(2, 3).unwrap().modulus, vec![1, 1, 0, 1]);
        assert!(FieldParams::new(4, 1).is_err());
    }

    #[test]
    fn field_axioms_random() {
        for (p, k) in [(2, 1), (2, 2), (3, 1), (3, 2), (5, 1), (5, 2), (2, 4), (3, 3)] {
            let f = Field::new(p, k).unwrap();
            let q = f.order() as u16;
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            for _ in 0..10_000 {
                let a = Fe(rng.gen_range(0..q));
                let b = Fe(rng.gen_range(0..q));
                let c = Fe(rng.gen_range(0..q));
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                assert_eq!(f.add(a, f.add(b, c)), f.add(f.add(a, b), c));
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                assert_eq!(f.add(a, f.neg(a)), Fe::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Fe::ONE);
                }
                assert_eq!(f.frobenius(f.mul(a, b)), f.mul(f.frobenius(a), f.frobenius(b)));
            }
        }
    }

    #[test]
    fn frobenius_fixes_prime_field_and_has_order_k() {
        let f = Field::new(3, 2).unwrap();
        for a in f.elements() {
            if f.is_in_prime_subfield(a) {
                assert_eq!(f.frobenius(a), a);
            }
            let mut x = a;
            for _ in 0..f.k() {
                x = f.frobenius(x);
            }
            assert_eq!(x, a);
        }
    }

    #[test]
    fn artin_schreier_counts() {
        for p in [2, 3, 5] {
            for k in 1..=2 {
                let f = Field::new(p, k).unwrap();
                let zero_roots = f.artin_schreier_roots(Fe::ZERO);
                assert_eq!(zero_roots.len(), p as usize);
                assert!(zero_roots.iter().all(|&x| f.is_in_prime_subfield(x)));
                for c in f.elements() {
                    let roots = f.artin_schreier_roots(c);
                    assert!(roots.is_empty() || roots.len() == p as usize);
                    for &x in &roots {
                        for &y in &roots {
                            assert!(f.is_in_prime_subfield(f.sub(x, y)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn artin_schreier_brute_force_f9() {
        let f = Field::new(3, 2).unwrap();
        // The image of λ ↦ λ^3 - λ is an F_3-subspace of index 3; anything
        // outside it has no roots.
        let image: Vec<Fe> = f.elements().map(|x| f.sub(f.frobenius(x), x)).collect();
        let missing = f.elements().find(|c| !image.contains(c)).unwrap();
        assert!(f.artin_schreier_roots(missing).is_empty());
        // λ^3 - λ = 1 has no root in F_9.
        assert!(f.artin_schreier_roots(Fe::ONE).is_empty());
    }

    #[test]
    fn chi_h_one_p2_roots_in_f4() {
        let f = Field::new(2, 2).unwrap();
        let roots = f.artin_schreier_roots(Fe::ONE);
        assert_eq!(roots.len(), 2);
        assert!(roots.iter().all(|&x| !f.is_in_prime_subfield(x)));
    }

    #[test]
    fn format_and_parse() {
        let f = Field::new(3, 2).unwrap();
        let x = f.parse("[2,1]").unwrap();
        assert_eq!(f.format(x), "[2,1]");
        assert_eq!(f.parse("-1").unwrap(), f.from_int(2));
        assert!(f.parse("[3]").is_err());
        assert!(f.parse("[1,1,1]").is_err());
    }

    #[test]
    fn embedding_is_a_ring_map() {
        let small = Field::new(3, 1).unwrap();
        let big = Field::new(3, 2).unwrap();
        let emb = small.embedding_into(&big).unwrap();
        for a in small.elements() {
            for b in small.elements() {
                assert_eq!(emb[small.mul(a, b).0 as usize], big.mul(emb[a.0 as usize], emb[b.0 as usize]));
            }
        }
        let f4 = Field::new(2, 2).unwrap();
        let f16 = Field::new(2, 4).unwrap();
        let emb = f4.embedding_into(&f16).unwrap();
        for a in f4.elements() {
            for b in f4.elements() {
                assert_eq!(emb[f4.add(a, b).0 as usize], f16.add(emb[a.0 as usize], emb[b.0 as usize]));
                assert_eq!(emb[f4.mul(a, b).0 as usize], f16.mul(emb[a.0 as usize], emb[b.0 as usize]));
            }
        }
        assert!(f4.embedding_into(&Field::new(2, 3).unwrap()).is_none());
    }
}
