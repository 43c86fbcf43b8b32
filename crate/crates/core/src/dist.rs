//! Distributions on `SL₂` from first principles: linear functionals on the
//! coordinate ring vanishing on a power of the augmentation ideal, multiplied
//! through the comultiplication.
//!
//! Local coordinates at the identity are `t = a − 1`, `b`, `c`; the
//! determinant relation gives `u = d − 1 = (bc − t)/(1 + t)` as a power series.
//!
//! The divided-power basis is read off in big-cell coordinates
//! `g = U(x)·T(s)·L(y)` with `U(x) = [[1,x],[0,1]]`, `T(s) = diag(s, 1/s)`,
//! `L(y) = [[1,0],[y,1]]`, `τ = s − 1`: the functional dual to `x^i τ^k y^j`
//! is exactly `e^(i)·binom(h;k)·f^(j)`. In those coordinates the group law is
//!
//! ```text
//! x'' = x₁ + s₁² x₂ / D,   s'' = s₁ s₂ / D,   y'' = y₂ + s₂² y₁ / D,   D = 1 + y₁ x₂,
//! ```
//!
//! which yields closed-form structure constants (see [`oracle_structure_constants`]).

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{lucas_binom, Fe, Field};
use crate::hyper::DividedPowerMonomial;
use crate::linalg::Matrix;

/// Monomials of total degree `≤ n` in three variables, ordered by degree.
#[derive(Clone, Debug)]
pub struct Monomials {
    pub n: usize,
    exps: Vec<[u32; 3]>,
    deg: Vec<u32>,
    index: HashMap<[u32; 3], usize>,
    mul: Vec<u32>,
}

const NONE: u32 = u32::MAX;

impl Monomials {
    pub fn new(n: usize) -> Monomials {
        let mut exps = Vec::new();
        for d in 0..=n as u32 {
            for a in (0..=d).rev() {
                for b in (0..=d - a).rev() {
                    exps.push([a, b, d - a - b]);
                }
            }
        }
        let deg: Vec<u32> = exps.iter().map(|e| e.iter().sum()).collect();
        let index: HashMap<[u32; 3], usize> = exps.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let dim = exps.len();
        let mut mul = vec![NONE; dim * dim];
        for a in 0..dim {
            for b in 0..dim {
                if (deg[a] + deg[b]) as usize <= n {
                    let e = [exps[a][0] + exps[b][0], exps[a][1] + exps[b][1], exps[a][2] + exps[b][2]];
                    mul[a * dim + b] = index[&e] as u32;
                }
            }
        }
        Monomials { n, exps, deg, index, mul }
    }

    pub fn dim(&self) -> usize {
        self.exps.len()
    }

    pub fn exps(&self, i: usize) -> [u32; 3] {
        self.exps[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.deg[i] as usize
    }

    pub fn index(&self, e: [u32; 3]) -> Option<usize> {
        self.index.get(&e).copied()
    }

    #[inline]
    fn mul_idx(&self, a: usize, b: usize) -> Option<usize> {
        let m = self.mul[a * self.dim() + b];
        (m != NONE).then_some(m as usize)
    }

    fn var(&self, v: usize) -> Vec<Fe> {
        let mut e = [0; 3];
        e[v] = 1;
        let mut s = vec![Fe::ZERO; self.dim()];
        if let Some(i) = self.index(e) {
            s[i] = Fe::ONE;
        }
        s
    }

    fn one(&self) -> Vec<Fe> {
        let mut s = vec![Fe::ZERO; self.dim()];
        s[0] = Fe::ONE;
        s
    }

    /// Truncated product of two series.
    fn smul(&self, f: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
        let mut out = vec![Fe::ZERO; self.dim()];
        for (i, &x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                if let Some(k) = self.mul_idx(i, j) {
                    out[k] = f.add(out[k], f.mul(x, y));
                }
            }
        }
        out
    }

    fn sadd(&self, f: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
        a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
    }

    fn ssub(&self, f: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
        a.iter().zip(b).map(|(&x, &y)| f.sub(x, y)).collect()
    }

    /// `1 / (1 + z)` for `z` without constant term.
    fn inv_one_plus(&self, f: &Field, z: &[Fe]) -> Vec<Fe> {
        debug_assert!(z[0].is_zero());
        let neg: Vec<Fe> = z.iter().map(|&x| f.neg(x)).collect();
        let mut term = self.one();
        let mut acc = self.one();
        for _ in 0..self.n {
            term = self.smul(f, &term, &neg);
            acc = self.sadd(f, &acc, &term);
        }
        acc
    }

    /// All monomials `v0^a v1^b v2^c` of degree `≤ n`, for series `v`.
    fn monomial_values(&self, f: &Field, v: &[Vec<Fe>; 3]) -> Vec<Vec<Fe>> {
        let dim = self.dim();
        let mut vals: Vec<Vec<Fe>> = Vec::with_capacity(dim);
        for m in 0..dim {
            let e = self.exps[m];
            if m == 0 {
                vals.push(self.one());
                continue;
            }
            let var = (0..3).find(|&i| e[i] > 0).unwrap();
            let mut prev = e;
            prev[var] -= 1;
            let pi = self.index[&prev];
            let next = self.smul(f, &vals[pi], &v[var]);
            vals.push(next);
        }
        vals
    }
}

/// `Σ c · m1 ⊗ m2` with `deg m1 + deg m2 ≤ n`.
type TensorSeries = Vec<(u32, u32, Fe)>;

/// The coordinate ring of `SL₂` truncated modulo `I^{n+1}`, in coordinates
/// `t^i b^j c^k`, with its comultiplication truncated at total bidegree `n`.
#[derive(Clone, Debug)]
pub struct TruncatedCoordinateRing {
    pub field: Arc<Field>,
    pub mon: Monomials,
    /// `u = d − 1` as a series in `t, b, c`.
    pub u_series: Vec<Fe>,
    comult: Vec<TensorSeries>,
}

/// `build_truncated_ring`: the coordinate ring modulo `I^{n+1}` with `Δ`.
pub fn build_truncated_ring(n: usize, field: Arc<Field>) -> Result<TruncatedCoordinateRing> {
    if n < 1 {
        return Err(Error::Precondition("truncation order must be at least 1".into()));
    }
    let mon = Monomials::new(n);
    let f = &*field;
    let (t, b, c) = (mon.var(0), mon.var(1), mon.var(2));
    // u = (bc − t) / (1 + t)
    let bc_t = mon.ssub(f, &mon.smul(f, &b, &c), &t);
    let u = mon.smul(f, &bc_t, &mon.inv_one_plus(f, &t));
    let dim = mon.dim();
    let sp = |s: &[Fe]| -> Vec<(u32, Fe)> {
        s.iter().enumerate().filter(|x| !x.1.is_zero()).map(|(i, &c)| (i as u32, c)).collect()
    };
    let idx = |e: [u32; 3]| mon.index(e).unwrap() as u32;
    let (i1, it, ib, ic) = (0u32, idx([1, 0, 0]), idx([0, 1, 0]), idx([0, 0, 1]));
    let one = Fe::ONE;
    // Δ(t) = t⊗1 + 1⊗t + t⊗t + b⊗c
    let dt: TensorSeries = vec![(it, i1, one), (i1, it, one), (it, it, one), (ib, ic, one)];
    // Δ(b) = b⊗1 + 1⊗b + t⊗b + b⊗u
    let mut db: TensorSeries = vec![(ib, i1, one), (i1, ib, one), (it, ib, one)];
    db.extend(sp(&u).into_iter().filter(|&(m, _)| mon.degree(m as usize) < n).map(|(m, x)| (ib, m, x)));
    // Δ(c) = c⊗1 + 1⊗c + c⊗t + u⊗c
    let mut dc: TensorSeries = vec![(ic, i1, one), (i1, ic, one), (ic, it, one)];
    dc.extend(sp(&u).into_iter().filter(|&(m, _)| mon.degree(m as usize) < n).map(|(m, x)| (m, ic, x)));
    let gens = [dt, db, dc];

    let mut comult: Vec<TensorSeries> = Vec::with_capacity(dim);
    let mut acc = vec![Fe::ZERO; dim * dim];
    let mut touched: Vec<usize> = Vec::new();
    for m in 0..dim {
        let e = mon.exps(m);
        if m == 0 {
            comult.push(vec![(0, 0, Fe::ONE)]);
            continue;
        }
        let var = (0..3).find(|&i| e[i] > 0).unwrap();
        let mut prev = e;
        prev[var] -= 1;
        let pi = mon.index(prev).unwrap();
        touched.clear();
        for &(a1, a2, x) in &gens[var] {
            let da = mon.degree(a1 as usize) + mon.degree(a2 as usize);
            for &(b1, b2, y) in &comult[pi] {
                if da + mon.degree(b1 as usize) + mon.degree(b2 as usize) > n {
                    continue;
                }
                let m1 = mon.mul_idx(a1 as usize, b1 as usize).unwrap();
                let m2 = mon.mul_idx(a2 as usize, b2 as usize).unwrap();
                let key = m1 * dim + m2;
                if acc[key].is_zero() {
                    touched.push(key);
                }
                acc[key] = f.add(acc[key], f.mul(x, y));
            }
        }
        touched.sort_unstable();
        touched.dedup();
        let mut out = Vec::new();
        for &key in &touched {
            let v = std::mem::take(&mut acc[key]);
            if !v.is_zero() {
                out.push(((key / dim) as u32, (key % dim) as u32, v));
            }
        }
        comult.push(out);
    }
    Ok(TruncatedCoordinateRing { field, mon, u_series: u, comult })
}

impl TruncatedCoordinateRing {
    pub fn n(&self) -> usize {
        self.mon.n
    }

    pub fn dim(&self) -> usize {
        self.mon.dim()
    }

    /// `Δ(m)` for a basis monomial.
    pub fn comult(&self, m: usize) -> &[(u32, u32, Fe)] {
        &self.comult[m]
    }

    /// `(Δ⊗id)Δ = (id⊗Δ)Δ` on every basis monomial, in the triple tensor
    /// truncated at total degree `n`.
    pub fn check_coassociativity(&self) -> Result<()> {
        let f = &*self.field;
        let n = self.n();
        let deg = |m: u32| self.mon.degree(m as usize);
        for m in 0..self.dim() {
            let mut left: HashMap<(u32, u32, u32), Fe> = HashMap::new();
            let mut right: HashMap<(u32, u32, u32), Fe> = HashMap::new();
            for &(m1, m2, c) in self.comult(m) {
                for &(a, b, d) in self.comult(m1 as usize) {
                    if deg(a) + deg(b) + deg(m2) <= n {
                        let s = left.entry((a, b, m2)).or_insert(Fe::ZERO);
                        *s = f.add(*s, f.mul(c, d));
                    }
                }
                for &(a, b, d) in self.comult(m2 as usize) {
                    if deg(m1) + deg(a) + deg(b) <= n {
                        let s = right.entry((m1, a, b)).or_insert(Fe::ZERO);
                        *s = f.add(*s, f.mul(c, d));
                    }
                }
            }
            left.retain(|_, v| !v.is_zero());
            right.retain(|_, v| !v.is_zero());
            if left != right {
                return Err(Error::AxiomFailure(format!("coassociativity fails on {:?}", self.mon.exps(m))));
            }
        }
        Ok(())
    }

    /// The counit `ε`, which is evaluation at the identity.
    pub fn counit(&self) -> Distribution {
        let mut coords = vec![Fe::ZERO; self.dim()];
        coords[0] = Fe::ONE;
        Distribution { order: 0, coords }
    }

    /// Values of the big-cell coordinate monomials `x^i τ^k y^j` as series
    /// in `t, b, c`, indexed like the ring basis via `(i, k, j)`.
    pub fn big_cell_functions(&self) -> Vec<Vec<Fe>> {
        let f = &*self.field;
        let mon = &self.mon;
        // d = 1 + u, x = b/d, τ = 1/d − 1, y = c/d
        let inv_d = mon.inv_one_plus(f, &self.u_series);
        let x = mon.smul(f, &mon.var(1), &inv_d);
        let tau = mon.ssub(f, &inv_d, &mon.one());
        let y = mon.smul(f, &mon.var(2), &inv_d);
        mon.monomial_values(f, &[x, tau, y])
    }

    /// Ring monomials `t^α b^β c^γ` as series in `x, τ, y`.
    fn ring_monomials_in_big_cell(&self) -> Vec<Vec<Fe>> {
        let f = &*self.field;
        let mon = &self.mon;
        // s = 1 + τ, t = τ + xy/s, b = x/s, c = y/s
        let (x, tau, y) = (mon.var(0), mon.var(1), mon.var(2));
        let inv_s = mon.inv_one_plus(f, &tau);
        let t = mon.sadd(f, &tau, &mon.smul(f, &mon.smul(f, &x, &y), &inv_s));
        let b = mon.smul(f, &x, &inv_s);
        let c = mon.smul(f, &y, &inv_s);
        mon.monomial_values(f, &[t, b, c])
    }
}

/// A functional on the truncated coordinate ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distribution {
    pub order: usize,
    pub coords: Vec<Fe>,
}

impl Distribution {
    pub fn eval(&self, m: usize) -> Fe {
        self.coords[m]
    }

    /// `δ(1)`.
    pub fn augmentation(&self) -> Fe {
        self.coords[0]
    }

    pub fn sub(&self, other: &Distribution, f: &Field) -> Distribution {
        Distribution {
            order: self.order.max(other.order),
            coords: self.coords.iter().zip(&other.coords).map(|(&a, &b)| f.sub(a, b)).collect(),
        }
    }

    pub fn scale(&self, c: Fe, f: &Field) -> Distribution {
        Distribution { order: self.order, coords: self.coords.iter().map(|&a| f.mul(a, c)).collect() }
    }

    /// Smallest `d` such that the functional vanishes on all monomials of
    /// degree `> d`.
    pub fn effective_order(&self, ring: &TruncatedCoordinateRing) -> usize {
        (0..self.coords.len())
            .filter(|&m| !self.coords[m].is_zero())
            .map(|m| ring.mon.degree(m))
            .max()
            .unwrap_or(0)
    }
}

/// `δμ = (δ ⊗ μ) ∘ Δ`.
pub fn dist_product(ring: &TruncatedCoordinateRing, x: &Distribution, y: &Distribution) -> Result<Distribution> {
    let need = x.order + y.order;
    if need > ring.n() {
        return Err(Error::TruncationOverflow { need, have: ring.n() });
    }
    let f = &*ring.field;
    let coords = (0..ring.dim())
        .map(|m| {
            if ring.mon.degree(m) > need {
                return Fe::ZERO;
            }
            ring.comult(m).iter().fold(Fe::ZERO, |acc, &(m1, m2, c)| {
                let a = x.coords[m1 as usize];
                if a.is_zero() {
                    return acc;
                }
                let b = y.coords[m2 as usize];
                if b.is_zero() {
                    return acc;
                }
                f.add(acc, f.mul(c, f.mul(a, b)))
            })
        })
        .collect();
    Ok(Distribution { order: need, coords })
}

/// The labeled divided-power basis `e^(i) binom(h;k) f^(j)` of `Di_n`.
#[derive(Clone, Debug)]
pub struct DividedPowerBasis {
    pub labels: Vec<DividedPowerMonomial>,
    pub dists: Vec<Distribution>,
    index: HashMap<DividedPowerMonomial, usize>,
    /// `x^i τ^k y^j` as series in the ring coordinates, by label index.
    big_cell: Vec<Vec<Fe>>,
}

impl DividedPowerBasis {
    pub fn get(&self, m: DividedPowerMonomial) -> Option<&Distribution> {
        self.index.get(&m).map(|&i| &self.dists[i])
    }

    /// Coordinates of a functional in the divided-power basis: the
    /// coefficient of `e^(i) binom(h;k) f^(j)` is its value on `x^i τ^k y^j`.
    pub fn coordinates(&self, ring: &TruncatedCoordinateRing, d: &Distribution) -> Vec<(DividedPowerMonomial, Fe)> {
        let f = &*ring.field;
        self.labels
            .iter()
            .zip(&self.big_cell)
            .filter_map(|(&lab, series)| {
                let v = series
                    .iter()
                    .zip(&d.coords)
                    .fold(Fe::ZERO, |acc, (&s, &c)| f.add(acc, f.mul(s, c)));
                (!v.is_zero()).then_some((lab, v))
            })
            .collect()
    }
}

/// Identifies `e^(i) binom(h;k) f^(j)` (`i + k + j ≤ n`) as functionals and
/// certifies the divided-power axioms, the Chevalley normalization and the
/// basis property.
pub fn identify_divided_powers(ring: &TruncatedCoordinateRing) -> Result<DividedPowerBasis> {
    let f = &*ring.field;
    let mon = &ring.mon;
    let n = ring.n();
    let in_big_cell = ring.ring_monomials_in_big_cell();
    let big_cell = ring.big_cell_functions();
    let mut labels = Vec::new();
    let mut dists = Vec::new();
    let mut big = Vec::new();
    for g in 0..mon.dim() {
        let [i, k, j] = mon.exps(g);
        // value on ring monomial m = coefficient of x^i τ^k y^j in m
        let coords: Vec<Fe> = in_big_cell.iter().map(|s| s[g]).collect();
        labels.push(DividedPowerMonomial::new(i, k, j));
        dists.push(Distribution { order: (i + k + j) as usize, coords });
        big.push(big_cell[g].clone());
    }
    let index = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let basis = DividedPowerBasis { labels, dists, index, big_cell: big };

    // counit
    if basis.get(DividedPowerMonomial::new(0, 0, 0)).unwrap() != &ring.counit() {
        return Err(Error::AxiomFailure("e^(0) is not the counit".into()));
    }
    // Chevalley normalization: e(b) = 1, h(t) = 1, f(c) = 1, other first-order values 0
    let firsts = [
        (DividedPowerMonomial::new(1, 0, 0), [0, 1, 0]),
        (DividedPowerMonomial::new(0, 1, 0), [1, 0, 0]),
        (DividedPowerMonomial::new(0, 0, 1), [0, 0, 1]),
    ];
    if n >= 1 {
        for (lab, hit) in firsts {
            let d = basis.get(lab).unwrap();
            for v in 0..3 {
                let mut e = [0u32; 3];
                e[v] = 1;
                let want = if e == hit { Fe::ONE } else { Fe::ZERO };
                if d.eval(mon.index(e).unwrap()) != want {
                    return Err(Error::AxiomFailure(format!("{lab:?} is not normalized on the Chevalley basis")));
                }
            }
        }
    }
    // coproduct axiom for the three families: δ_l(m1 m2) = Σ δ_i(m1) δ_{l−i}(m2)
    for fam in 0..3 {
        let lab = |l: u32| {
            let mut e = [0u32; 3];
            e[fam] = l;
            DividedPowerMonomial::new(e[0], e[1], e[2])
        };
        for l in 0..=n as u32 {
            let dl = basis.get(lab(l)).unwrap();
            for m1 in 0..mon.dim() {
                for m2 in 0..mon.dim() {
                    let Some(m) = mon.mul_idx(m1, m2) else { continue };
                    let rhs = (0..=l).fold(Fe::ZERO, |acc, i| {
                        let a = basis.get(lab(i)).unwrap().eval(m1);
                        let b = basis.get(lab(l - i)).unwrap().eval(m2);
                        f.add(acc, f.mul(a, b))
                    });
                    if dl.eval(m) != rhs {
                        return Err(Error::AxiomFailure(format!("coproduct of {:?}", lab(l))));
                    }
                }
            }
        }
    }
    // divided-power products for e and f: x^(a) x^(b) = C(a+b, a) x^(a+b)
    for fam in [0usize, 2] {
        let lab = |l: u32| {
            let mut e = [0u32; 3];
            e[fam] = l;
            DividedPowerMonomial::new(e[0], e[1], e[2])
        };
        for a in 0..=n as u32 {
            for b in 0..=(n as u32 - a) {
                let prod = dist_product(ring, basis.get(lab(a)).unwrap(), basis.get(lab(b)).unwrap())?;
                let c = f.from_int(lucas_binom((a + b) as u64, a as u64, f.p()) as i64);
                if prod.coords != basis.get(lab(a + b)).unwrap().scale(c, f).coords {
                    return Err(Error::AxiomFailure(format!("{:?} * {:?}", lab(a), lab(b))));
                }
            }
        }
    }
    // basis property
    let m = Matrix::from_rows(&basis.dists.iter().map(|d| d.coords.clone()).collect::<Vec<_>>());
    if m.rank(f) != mon.dim() {
        return Err(Error::AxiomFailure("ordered monomials are not a basis of Di_n".into()));
    }
    Ok(basis)
}

/// Structure constants of `Di(G_r)` in the ordered basis `(i, k, j)`,
/// `0 ≤ i,k,j < p^r`, as `(a, b, e, c)` with `b_a b_b = Σ c b_e`; basis index
/// is `(i·p^r + k)·p^r + j`.
///
/// Closed form from the big-cell group law: for `α = (a_x, a_τ, a_y)`,
/// `β = (b_x, b_τ, b_y)` and `γ = (g1, g2, g3)` put `u = g1 − a_x`,
/// `v = g3 − b_y`, `m = a_y − v = b_x − u ≥ 0`; then
/// `c = C(g1,u) C(g3,v) (−1)^m Δ^{g2}F(0)` with
/// `F(l) = C(u+v+l+m−1, m) C(2u+l, a_τ) C(2v+l, b_τ)` and `Δ` the forward
/// difference. Products landing outside the box are reported as errors.
pub fn oracle_structure_constants(r: u32, field: &Field) -> Result<Vec<(usize, usize, usize, Fe)>> {
    let p = field.p();
    let n = p.pow(r) as usize;
    let pm = p as i64;
    let binom = |a: i64, b: i64| -> i64 {
        if a < 0 || b < 0 || b > a {
            0
        } else {
            lucas_binom(a as u64, b as u64, p) as i64
        }
    };
    let idx = |i: usize, k: usize, j: usize| (i * n + k) * n + j;
    let mut out = Vec::new();
    let mut vals: Vec<i64> = Vec::new();
    for a in 0..n * n * n {
        let (ax, at, ay) = (a / (n * n), (a / n) % n, a % n);
        for b in 0..n * n * n {
            let (bx, bt, by) = (b / (n * n), (b / n) % n, b % n);
            let mut terms: HashMap<usize, i64> = HashMap::new();
            for u in 0..=bx {
                let m = bx - u;
                if m > ay {
                    continue;
                }
                let v = ay - m;
                let (g1, g3) = (ax + u, by + v);
                let c13 = binom(g1 as i64, u as i64) * binom(g3 as i64, v as i64) % pm;
                if c13 == 0 {
                    continue;
                }
                let sign_m = if m % 2 == 0 { 1 } else { pm - 1 };
                let deg = m + at + bt;
                vals.clear();
                for l in 0..=deg {
                    let cm = if u + v + l == 0 {
                        i64::from(m == 0)
                    } else {
                        binom((u + v + l + m - 1) as i64, m as i64)
                    };
                    vals.push(cm * binom((2 * u + l) as i64, at as i64) % pm * binom((2 * v + l) as i64, bt as i64) % pm);
                }
                // vals[g2] becomes Δ^{g2} F(0)
                for l in 1..vals.len() {
                    for h in (l..vals.len()).rev() {
                        vals[h] = (vals[h] - vals[h - 1]).rem_euclid(pm);
                    }
                }
                for (g2, &dv) in vals.iter().enumerate() {
                    let c = c13 * sign_m % pm * dv % pm;
                    if c == 0 {
                        continue;
                    }
                    if g1 >= n || g2 >= n || g3 >= n {
                        return Err(Error::NotClosed(format!(
                            "({ax},{at},{ay}) * ({bx},{bt},{by}) reaches ({g1},{g2},{g3})"
                        )));
                    }
                    *terms.entry(idx(g1, g2, g3)).or_insert(0) += c;
                }
            }
            let mut t: Vec<(usize, i64)> = terms.into_iter().map(|(e, c)| (e, c % pm)).filter(|x| x.1 != 0).collect();
            t.sort_unstable();
            out.extend(t.into_iter().map(|(e, c)| (a, b, e, field.from_int(c))));
        }
    }
    Ok(out)
}

/// The same tensor computed through the truncated coordinate ring:
/// functional products via `Δ`, re-expanded in the divided-power basis.
/// `pairs` restricts the computation to the given `(a, b)` index pairs.
pub fn oracle_structure_constants_via_ring(
    r: u32,
    field: Arc<Field>,
    pairs: Option<&[(usize, usize)]>,
) -> Result<Vec<(usize, usize, usize, Fe)>> {
    let p = field.p();
    let n = p.pow(r) as usize;
    let lab = |a: usize| DividedPowerMonomial::new((a / (n * n)) as u32, ((a / n) % n) as u32, (a % n) as u32);
    let all: Vec<(usize, usize)>;
    let pairs = match pairs {
        Some(p) => p,
        None => {
            all = (0..n * n * n).flat_map(|a| (0..n * n * n).map(move |b| (a, b))).collect();
            &all
        }
    };
    // a product of orders a and b needs the ring truncated at a + b
    let ord = |a: usize| a / (n * n) + (a / n) % n + a % n;
    let order = pairs.iter().map(|&(a, b)| ord(a) + ord(b)).max().unwrap_or(0);
    let ring = build_truncated_ring(order.max(1), field.clone())?;
    let basis = identify_divided_powers(&ring)?;
    let mut out = Vec::new();
    for &(a, b) in pairs {
        let prod = dist_product(&ring, basis.get(lab(a)).unwrap(), basis.get(lab(b)).unwrap())?;
        let mut t = Vec::new();
        for (g, c) in basis.coordinates(&ring, &prod) {
            let (g1, g2, g3) = (g.i as usize, g.k as usize, g.j as usize);
            if g1 >= n || g2 >= n || g3 >= n {
                return Err(Error::NotClosed(format!("{:?} * {:?} reaches {g:?}", lab(a), lab(b))));
            }
            t.push(((g1 * n + g2) * n + g3, c));
        }
        t.sort_unstable();
        out.extend(t.into_iter().map(|(e, c)| (a, b, e, c)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn ring_dimensions() {
        let f = Field::prime(2).unwrap();
        for n in 1..=6 {
            let ring = build_truncated_ring(n, f.clone()).unwrap();
            assert_eq!(ring.dim() as u64, binom(n as u64 + 3, 3));
        }
        assert_eq!(build_truncated_ring(1, f.clone()).unwrap().dim(), 4);
        assert_eq!(build_truncated_ring(2, f).unwrap().dim(), 10);
    }

    #[test]
    fn coassociative_up_to_eight() {
        for p in [2u32, 3] {
            let ring = build_truncated_ring(8, Field::prime(p).unwrap()).unwrap();
            ring.check_coassociativity().unwrap();
        }
    }

    #[test]
    fn determinant_relation_holds() {
        // (1+t)(1+u) − bc = 1 in the truncated ring
        let f = Field::prime(5).unwrap();
        let ring = build_truncated_ring(6, f.clone()).unwrap();
        let mon = &ring.mon;
        let t = mon.var(0);
        let bc = mon.smul(&f, &mon.var(1), &mon.var(2));
        let a = mon.sadd(&f, &mon.one(), &t);
        let d = mon.sadd(&f, &mon.one(), &ring.u_series);
        let det = mon.ssub(&f, &mon.smul(&f, &a, &d), &bc);
        assert_eq!(det, mon.one());
    }

    #[test]
    fn counit_is_two_sided_unit() {
        let f = Field::prime(3).unwrap();
        let ring = build_truncated_ring(4, f).unwrap();
        let basis = identify_divided_powers(&ring).unwrap();
        let eps = ring.counit();
        for d in &basis.dists {
            if d.order <= 4 {
                assert_eq!(dist_product(&ring, d, &eps).unwrap().coords, d.coords);
                assert_eq!(dist_product(&ring, &eps, d).unwrap().coords, d.coords);
            }
        }
    }

    #[test]
    fn sl2_brackets_from_functionals() {
        for p in [2u32, 3, 5] {
            let f = Field::prime(p).unwrap();
            let ring = build_truncated_ring(2, f.clone()).unwrap();
            let basis = identify_divided_powers(&ring).unwrap();
            let e = basis.get(DividedPowerMonomial::new(1, 0, 0)).unwrap();
            let h = basis.get(DividedPowerMonomial::new(0, 1, 0)).unwrap();
            let ff = basis.get(DividedPowerMonomial::new(0, 0, 1)).unwrap();
            let br = |x: &Distribution, y: &Distribution| {
                let a = dist_product(&ring, x, y).unwrap();
                let b = dist_product(&ring, y, x).unwrap();
                a.sub(&b, &f)
            };
            let ef = br(e, ff);
            assert_eq!(ef.coords, h.coords);
            assert_eq!(br(h, e).coords, e.scale(f.from_int(2), &f).coords);
            assert_eq!(br(h, ff).coords, ff.scale(f.from_int(-2), &f).coords);
            // brackets drop the order by one and kill 1
            assert!(ef.effective_order(&ring) <= 1);
            assert!(ef.augmentation().is_zero());
            // e·e = 2 e^(2)
            let ee = dist_product(&ring, e, e).unwrap();
            let e2 = basis.get(DividedPowerMonomial::new(2, 0, 0)).unwrap();
            assert_eq!(ee.coords, e2.scale(f.from_int(2), &f).coords);
        }
    }

    #[test]
    fn primitive_elements_span_sl2() {
        // Di_1^+ is spanned by e, h, f
        let f = Field::prime(3).unwrap();
        let ring = build_truncated_ring(1, f).unwrap();
        let basis = identify_divided_powers(&ring).unwrap();
        let firsts: Vec<_> = basis.dists.iter().filter(|d| d.order == 1).collect();
        assert_eq!(firsts.len(), 3);
        assert!(firsts.iter().all(|d| d.augmentation().is_zero()));
    }

    #[test]
    fn closed_form_matches_ring_route() {
        for p in [2u32, 3] {
            let f = Field::prime(p).unwrap();
            let closed = oracle_structure_constants(1, &f).unwrap();
            let pairs: Vec<(usize, usize)> = if p == 2 {
                (0..8).flat_map(|a| (0..8).map(move |b| (a, b))).collect()
            } else {
                // all products with a generator on the left, plus a diagonal sample
                let gens = [9usize, 3, 1];
                let mut v: Vec<(usize, usize)> = gens.iter().flat_map(|&g| (0..27).map(move |b| (g, b))).collect();
                v.extend((0..27).map(|a| (a, 26 - a)));
                v.sort_unstable();
                v.dedup();
                v
            };
            let ring = oracle_structure_constants_via_ring(1, f.clone(), Some(&pairs)).unwrap();
            let want: Vec<_> = closed.into_iter().filter(|&(a, b, _, _)| pairs.contains(&(a, b))).collect();
            let mut got = ring;
            got.sort_by_key(|x| pairs.iter().position(|&q| q == (x.0, x.1)).unwrap());
            let mut want_sorted = want;
            want_sorted.sort_by_key(|x| pairs.iter().position(|&q| q == (x.0, x.1)).unwrap());
            assert_eq!(got, want_sorted, "p={p}");
        }
    }

    #[test]
    fn closed_form_has_unit() {
        let f = Field::prime(3).unwrap();
        let t = oracle_structure_constants(1, &f).unwrap();
        for b in 0..27 {
            assert!(t.contains(&(0, b, b, Fe::ONE)));
            assert!(t.contains(&(b, 0, b, Fe::ONE)));
        }
    }
}
