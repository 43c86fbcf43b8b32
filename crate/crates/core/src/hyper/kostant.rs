//! Structure constants from Kostant's straightening formulas in the integral
//! form of `U(sl₂)`.
//!
//! With `B(k) = binom(h; k)` the rules used are
//!
//! * `f^(b) e^(a) = Σ_t e^(a−t) binom(−h−a−b+2t; t) f^(b−t)`,
//! * `P(h) e^(a) = e^(a) P(h+2a)` and `f^(a) P(h) = P(h+2a) f^(a)`,
//! * `e^(a) e^(b) = C(a+b, a) e^(a+b)` and likewise for `f`.
//!
//! A torus polynomial is handled through its values at `h = 0, 1, ...`,
//! whose forward differences are its coordinates in the `binom(h; l)` basis.
//!
//! `Di(G_r)` is read off modulo `p`. For `U^[r]_χ` the product is computed in
//! the `Z_(p)`-algebra `A` generated by divided powers of order `< P = p^{r+1}`,
//! whose basis is `e^(i) E^a · B(k) H^b · f^(j) F^c` (`i, k, j < P`) with
//! `E = (e^(p^r))^p`, `H = B(p^r)^p − B(p^r)`, `F = (f^(p^r))^p`. Reducing
//! modulo `p` and replacing `E, H, F` by `χ(e)^p, χ(h)^p, χ(f)^p` gives the
//! multiplication of `U^[r]_χ`. Rational coordinates are carried as
//! fixed-point residues modulo `p^K`.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::gf::{Fe, Field};

use super::algebra::{dp_generators, AlgebraKind, DividedPowerMonomial, StructureConstantAlgebra};
use super::pchar::PCharacter;

/// Binomial coefficients `C(x, k)` modulo `m` for `|x| ≤ xmax`, `k ≤ kmax`.
struct BinomTable {
    m: u64,
    kmax: usize,
    /// `table[n][k] = C(n, k) mod m` for `0 ≤ n ≤ nmax`.
    table: Vec<Vec<u64>>,
}

impl BinomTable {
    fn new(m: u64, nmax: usize, kmax: usize) -> BinomTable {
        let mut table = vec![vec![0u64; kmax + 1]; nmax + 1];
        for n in 0..=nmax {
            table[n][0] = 1 % m;
            for k in 1..=kmax.min(n) {
                table[n][k] = (table[n - 1][k - 1] + table[n - 1][k]) % m;
            }
        }
        BinomTable { m, kmax, table }
    }

    /// `C(x, k)` with `C(x, k) = (−1)^k C(k − x − 1, k)` for negative `x`.
    fn get(&self, x: i64, k: usize) -> u64 {
        debug_assert!(k <= self.kmax);
        if x >= 0 {
            let x = x as usize;
            if k > x {
                0
            } else {
                self.table[x][k]
            }
        } else {
            let n = (k as i64 - x - 1) as usize;
            let v = self.table[n][k];
            if k % 2 == 1 && v != 0 {
                self.m - v
            } else {
                v
            }
        }
    }
}

#[inline]
fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Torus factors `B_{2u}(k1) · binom(−h−u−w; t) · B_{2w}(k2)` converted into
/// output coordinates, indexed by `(k1, k2, u, w, t)`.
struct TorusTable {
    n: usize,
    entries: Vec<Vec<(u16, u64)>>,
}

impl TorusTable {
    fn key(&self, k1: usize, k2: usize, u: usize, w: usize, t: usize) -> usize {
        let n = self.n;
        (((k1 * n + k2) * n + u) * n + w) * n + t
    }

    /// `convert` maps the `binom(h; l)` coordinates (length `deg + 1`) to sparse
    /// output coordinates.
    fn build(
        n: usize,
        binom: &BinomTable,
        mut convert: impl FnMut(&[u64]) -> Result<Vec<(u16, u64)>>,
    ) -> Result<TorusTable> {
        let m = binom.m;
        let mut tab = TorusTable { n, entries: vec![Vec::new(); n.pow(5)] };
        let mut vals = Vec::with_capacity(3 * n);
        for k1 in 0..n {
            for k2 in 0..n {
                for t in 0..n {
                    for u in 0..n - t {
                        for w in 0..n - t {
                            let d = k1 + k2 + t + 1;
                            vals.clear();
                            for h in 0..d as i64 {
                                let a = binom.get(h + 2 * u as i64, k1);
                                let b = binom.get(-h - (u + w) as i64, t);
                                let c = binom.get(h + 2 * w as i64, k2);
                                vals.push(mulmod(mulmod(a, b, m), c, m));
                            }
                            // forward differences in place: vals[l] = Δ^l V(0)
                            for l in 1..d {
                                for h in (l..d).rev() {
                                    vals[h] = (vals[h] + m - vals[h - 1]) % m;
                                }
                            }
                            let key = tab.key(k1, k2, u, w, t);
                            tab.entries[key] = convert(&vals)?;
                        }
                    }
                }
            }
        }
        Ok(tab)
    }

    fn get(&self, k1: usize, k2: usize, u: usize, w: usize, t: usize) -> &[(u16, u64)] {
        &self.entries[self.key(k1, k2, u, w, t)]
    }
}

fn check_level(p: u32, levels: u32, max_dim: u64) -> Result<u32> {
    let n = p
        .checked_pow(levels)
        .filter(|&n| (n as u64).pow(3) <= max_dim)
        .ok_or_else(|| Error::Precondition(format!("p^{levels} too large for p = {p}")))?;
    Ok(n)
}

/// `Di(G_r)` in the basis `e^(i) binom(h;k) f^(j)`, `0 ≤ i,k,j < p^r`.
pub fn build_di_gr(r: u32, field: Arc<Field>) -> Result<StructureConstantAlgebra> {
    let p = field.p();
    let n = check_level(p, r, 729 * 8)? as usize;
    let pm = p as u64;
    let binom = BinomTable::new(pm, 4 * n + 2, n.max(1));
    let torus = TorusTable::build(n, &binom, |y| {
        let mut out = Vec::new();
        for (l, &c) in y.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if l >= n {
                return Err(Error::NotClosed(format!("binom(h;{l}) appears in a product inside Di(G_{r})")));
            }
            out.push((l as u16, c));
        }
        Ok(out)
    })?;
    let pair_binom = BinomTable::new(pm, 2 * n, 2 * n);
    let nn = n as u32;
    let basis = super::algebra::box_basis([nn; 3]);
    let fld = field.clone();
    let mut failure = None;
    let alg = StructureConstantAlgebra::assemble(
        AlgebraKind::DiGr { r },
        format!("DiGr(p={p},r={r})"),
        field.clone(),
        [nn; 3],
        &dp_generators(p, [r; 3]),
        |a, b| {
            let (x, y) = (basis[a], basis[b]);
            let (i1, k1, j1) = (x.i as usize, x.k as usize, x.j as usize);
            let (i2, k2, j2) = (y.i as usize, y.k as usize, y.j as usize);
            let mut acc: HashMap<usize, u64> = HashMap::new();
            for t in 0..=j1.min(i2) {
                let (u, w) = (i2 - t, j1 - t);
                let (ne, nf) = (i1 + u, w + j2);
                let ce = pair_binom.get(ne as i64, i1);
                let cf = pair_binom.get(nf as i64, j2);
                let c = ce * cf % pm;
                if c == 0 {
                    continue;
                }
                if ne >= n || nf >= n {
                    failure = Some(Error::NotClosed(format!("divided power overflow in Di(G_{r})")));
                    continue;
                }
                for &(l, v) in torus.get(k1, k2, u, w, t) {
                    let idx = (ne * n + l as usize) * n + nf;
                    *acc.entry(idx).or_insert(0) += c * v;
                }
            }
            acc.into_iter()
                .filter_map(|(idx, v)| {
                    let v = v % pm;
                    (v != 0).then(|| (idx, fld.from_int(v as i64)))
                })
                .collect()
        },
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(alg)
}

fn p_valuation(x: &BigInt, p: &BigInt) -> u32 {
    let mut v = 0;
    let mut x = x.clone();
    while !x.is_zero() && (&x % p).is_zero() {
        x /= p;
        v += 1;
    }
    v
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    let (g, x, _) = ext_gcd(a as i128, m as i128);
    assert_eq!(g, 1, "unit expected");
    x.rem_euclid(m as i128) as u64
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Residue modulo `m` of a rational with denominator prime to `p`.
fn rational_mod(x: &BigRational, m: u64) -> u64 {
    let mb = BigInt::from(m);
    let num = x.numer().mod_floor(&mb).to_u64().unwrap();
    let den = x.denom().mod_floor(&mb).to_u64().unwrap();
    mulmod(num, mod_inverse(den, m), m)
}

fn big_binom(n: i64, k: usize) -> BigInt {
    // generalized binomial for any integer n
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k as i64 {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// Coordinates of `binom(h; l)` (`l < 3P`) in the basis `B(k) H^b` (`k < P`,
/// `b ≤ 2`, column index `b·P + k`), scaled by `p^v`; returns the scaled
/// matrix and `v`.
fn torus_change_of_basis(p: u32, r: u32) -> (Vec<Vec<BigRational>>, u32) {
    let big_p = p.pow(r + 1) as usize;
    let pr = p.pow(r) as usize;
    let d = 3 * big_p;
    // G[l][col] = coefficient of binom(h;l) in basis element col
    let mut g = vec![vec![BigInt::zero(); d]; d];
    for b in 0..3usize {
        for k in 0..big_p {
            let col = b * big_p + k;
            let mut vals: Vec<BigInt> = (0..d as i64)
                .map(|h| {
                    let bp = big_binom(h, pr);
                    let hh = num_traits::pow(bp.clone(), p as usize) - bp;
                    big_binom(h, k) * num_traits::pow(hh, b)
                })
                .collect();
            for l in 1..d {
                for h in (l..d).rev() {
                    vals[h] = &vals[h] - &vals[h - 1];
                }
            }
            for l in 0..d {
                g[l][col] = vals[l].clone();
            }
        }
    }
    // invert G over Q
    let mut a: Vec<Vec<BigRational>> = g
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<BigRational> = row.iter().map(|x| BigRational::from_integer(x.clone())).collect();
            r.extend((0..d).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for col in 0..d {
        let piv = (col..d).find(|&r| !a[r][col].is_zero()).expect("torus basis change is invertible");
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        let prow = a[col].clone();
        for (rr, row) in a.iter_mut().enumerate() {
            if rr != col && !row[col].is_zero() {
                let c = row[col].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x = &*x - &c * y;
                }
            }
        }
    }
    let inv: Vec<Vec<BigRational>> = a.into_iter().map(|row| row[d..].to_vec()).collect();
    let pb = BigInt::from(p);
    let mut v = 0;
    for row in &inv {
        for x in row {
            if !x.is_zero() {
                let need = p_valuation(x.denom(), &pb) as i64 - p_valuation(x.numer(), &pb) as i64;
                v = v.max(need.max(0) as u32);
            }
        }
    }
    let scale = BigRational::from_integer(num_traits::pow(pb, v as usize));
    let scaled = inv.into_iter().map(|row| row.into_iter().map(|x| x * &scale).collect()).collect();
    (scaled, v)
}

/// Precision exponent `K` with `p^K < 2^32`.
fn precision(p: u32) -> u32 {
    let mut k = 0;
    let mut m: u64 = 1;
    while m * p as u64 <= u32::MAX as u64 {
        m *= p as u64;
        k += 1;
    }
    k
}

/// `U^[r]_χ` in the basis `e^(i) binom(h;k) f^(j)`, `0 ≤ i,k,j < p^{r+1}`.
pub fn build_u_r_chi(r: u32, chi: PCharacter, field: Arc<Field>) -> Result<StructureConstantAlgebra> {
    let p = field.p();
    let big_p = check_level(p, r + 1, 729 * 8)? as usize;
    let pr = p.pow(r) as usize;
    let kprec = precision(p);
    let m = (p as u64).pow(kprec);
    let pb = BigInt::from(p);

    let (tmat, vt) = torus_change_of_basis(p, r);
    let v0 = vt + 2;
    if v0 + 1 > kprec {
        return Err(Error::Precondition(format!("p-adic precision {kprec} too small for scale {v0}")));
    }
    let d = 3 * big_p;
    let tmod: Vec<Vec<u64>> = tmat.iter().map(|row| row.iter().map(|x| rational_mod(x, m)).collect()).collect();

    // κ(n) = M·C(n, P) with M = P!/(p^r!)^p; scaled factors for the e/f parts
    let fact = |n: usize| -> BigInt { (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i)) };
    let m_e = fact(big_p) / num_traits::pow(fact(pr), p as usize);
    debug_assert_eq!(p_valuation(&m_e, &pb), 1);
    let scale_ef: Vec<u64> = (0..2 * big_p)
        .map(|n| {
            if n < big_p {
                p as u64
            } else {
                let kappa = &m_e * big_binom(n as i64, big_p) / &pb;
                mod_inverse(kappa.mod_floor(&BigInt::from(m)).to_u64().unwrap(), m)
            }
        })
        .collect();

    let binom = BinomTable::new(m, 4 * big_p + 2, big_p);
    let torus = TorusTable::build(big_p, &binom, |y| {
        let mut out = Vec::new();
        for (row_idx, row) in tmod.iter().enumerate() {
            let mut s = 0u64;
            for (l, &c) in y.iter().enumerate() {
                if c != 0 && row[l] != 0 {
                    s = (s + mulmod(row[l], c, m)) % m;
                }
            }
            if s != 0 {
                out.push((row_idx as u16, s));
            }
        }
        Ok(out)
    })?;
    debug_assert_eq!(tmod.len(), d);
    let pair_binom = BinomTable::new(m, 2 * big_p, 2 * big_p);
    let pv0 = (p as u64).pow(v0);

    // χ-weights of the central overflow: E ↦ χ(e)^p, H ↦ χ(h)^p, F ↦ χ(f)^p
    let ce_p = field.frobenius(chi.e);
    let ch_p = field.frobenius(chi.h);
    let cf_p = field.frobenius(chi.f);
    let h_pows = [Fe::ONE, ch_p, field.mul(ch_p, ch_p)];

    let nb = big_p as u32;
    let basis = super::algebra::box_basis([nb; 3]);
    let fld = field.clone();
    let mut failure: Option<Error> = None;
    let mut acc = vec![0u64; 12 * big_p * big_p * big_p];
    let mut touched: Vec<usize> = Vec::new();
    let alg = StructureConstantAlgebra::assemble(
        AlgebraKind::UrChi { r, chi },
        format!("UrChi(p={p},r={r},chi={})", chi.format(&field)),
        field.clone(),
        [nb; 3],
        &dp_generators(p, [r + 1; 3]),
        |a, b| {
            let (x, y) = (basis[a], basis[b]);
            let (i1, k1, j1) = (x.i as usize, x.k as usize, x.j as usize);
            let (i2, k2, j2) = (y.i as usize, y.k as usize, y.j as usize);
            touched.clear();
            for t in 0..=j1.min(i2) {
                let (u, w) = (i2 - t, j1 - t);
                let (ne, nf) = (i1 + u, w + j2);
                let ce = mulmod(pair_binom.get(ne as i64, i1), scale_ef[ne], m);
                let cf = mulmod(pair_binom.get(nf as i64, j2), scale_ef[nf], m);
                let c = mulmod(ce, cf, m);
                if c == 0 {
                    continue;
                }
                let (ei, ea) = (ne % big_p, ne / big_p);
                let (fj, fc) = (nf % big_p, nf / big_p);
                for &(col, v) in torus.get(k1, k2, u, w, t) {
                    // key layout: ((((ea·P + ei)·3P + col)·2 + fc)·P + fj)
                    let key = (((ea * big_p + ei) * d + col as usize) * 2 + fc) * big_p + fj;
                    if acc[key] == 0 {
                        touched.push(key);
                    }
                    acc[key] = (acc[key] + mulmod(c, v, m)) % m;
                }
            }
            let mut out: HashMap<usize, Fe> = HashMap::new();
            touched.sort_unstable();
            touched.dedup();
            for &key in &touched {
                let v = std::mem::take(&mut acc[key]);
                if v == 0 {
                    continue;
                }
                if !v.is_multiple_of(pv0) {
                    failure.get_or_insert_with(|| {
                        Error::StructureViolation(format!(
                            "non-integral coordinate in the product {} * {}",
                            basis_label(x),
                            basis_label(y)
                        ))
                    });
                    continue;
                }
                let c = (v / pv0) % p as u64;
                if c == 0 {
                    continue;
                }
                let fj = key % big_p;
                let rest = key / big_p;
                let fc = rest % 2;
                let rest = rest / 2;
                let col = rest % d;
                let rest = rest / d;
                let ei = rest % big_p;
                let ea = rest / big_p;
                let (tb, tk) = (col / big_p, col % big_p);
                let mut coef = fld.from_int(c as i64);
                if ea == 1 {
                    coef = fld.mul(coef, ce_p);
                }
                if fc == 1 {
                    coef = fld.mul(coef, cf_p);
                }
                coef = fld.mul(coef, h_pows[tb]);
                if coef.is_zero() {
                    continue;
                }
                let idx = (ei * big_p + tk) * big_p + fj;
                let slot = out.entry(idx).or_insert(Fe::ZERO);
                *slot = fld.add(*slot, coef);
            }
            out.into_iter().collect()
        },
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(alg)
}

fn basis_label(m: DividedPowerMonomial) -> String {
    format!("e^({}) h^[{}] f^({})", m.i, m.k, m.j)
}

/// The subalgebra of `U^[r]_χ` spanned by monomials with `f`-exponent `< p^r`.
pub fn build_uhat_b(parent: &StructureConstantAlgebra) -> Result<StructureConstantAlgebra> {
    let AlgebraKind::UrChi { r, chi } = parent.kind() else {
        return Err(Error::Precondition("Borel-type subalgebra needs a U^[r]_chi parent".into()));
    };
    let p = parent.p();
    let big_p = p.pow(r + 1);
    let pr = p.pow(r);
    parent.sub_box(
        AlgebraKind::UhatB { r, chi },
        format!("UhatB(p={p},r={r},chi={})", chi.format(parent.field())),
        [big_p, big_p, pr],
        &dp_generators(p, [r + 1, r + 1, r]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generalized_binomials() {
        let t = BinomTable::new(1_000_003, 40, 10);
        for x in -10i64..=20 {
            for k in 0..=10usize {
                let want = big_binom(x, k).mod_floor(&BigInt::from(1_000_003)).to_u64().unwrap();
                assert_eq!(t.get(x, k), want, "C({x},{k})");
            }
        }
        assert!(big_binom(-1, 3) < BigInt::zero());
    }

    #[test]
    fn torus_basis_change_has_small_denominators() {
        for (p, r) in [(2, 0), (2, 1), (3, 0), (3, 1), (5, 0)] {
            let (_, v) = torus_change_of_basis(p, r);
            assert!(v + 3 <= precision(p), "p={p} r={r} v={v}");
        }
    }
}
