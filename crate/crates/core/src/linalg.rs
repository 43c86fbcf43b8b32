//! Dense exact linear algebra over `F_q`, plus MeatAxe-style machinery for
//! modules over structure-constant algebras: spinning, irreducibility tests,
//! Hom-spaces, composition factors and isomorphism tests.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf::{Fe, Field};
use crate::hyper::StructureConstantAlgebra;

/// Default seed for every randomized search.
pub const DEFAULT_SEED: u64 = 0xC0FFEE;

/// Exhaustive irreducibility search is used only below this many vectors.
pub const EXHAUSTIVE_LIMIT: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Fe>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![Fe::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Fe::ONE);
        }
        m
    }

    pub fn scalar(n: usize, c: Fe) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, c);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Fe>]) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Fe) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Fe] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Fe>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// `Some(c)` when the matrix is `c·I`.
    pub fn as_scalar(&self) -> Option<Fe> {
        if self.rows != self.cols {
            return None;
        }
        let c = if self.rows == 0 { Fe::ZERO } else { self.get(0, 0) };
        for i in 0..self.rows {
            for j in 0..self.cols {
                let want = if i == j { c } else { Fe::ZERO };
                if self.get(i, j) != want {
                    return None;
                }
            }
        }
        Some(c)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix, f: &Field) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                let orow = other.row(l);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    if !b.is_zero() {
                        *d = f.add(*d, f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix, f: &Field) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix, f: &Field) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: Fe, f: &Field) -> Matrix {
        let data = self.data.iter().map(|&a| f.mul(a, c)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Matrix, c: Fe, f: &Field) {
        if c.is_zero() {
            return;
        }
        for (d, &b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *d = f.add(*d, f.mul(c, b));
            }
        }
    }

    pub fn pow(&self, e: u64, f: &Field) -> Matrix {
        let mut result = Matrix::identity(self.rows);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base, f);
            }
            base = base.mul(&base, f);
            e >>= 1;
        }
        result
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Matrix, f: &Field) -> Matrix {
        let mut out = Matrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, f.mul(a, other.get(k, l)));
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Fe], f: &Field) -> Vec<Fe> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Fe::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    pub fn rank(&self, f: &Field) -> usize {
        rref(self, f).rank
    }

    pub fn inverse(&self, f: &Field) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, Fe::ONE);
        }
        let red = rref(&aug, f);
        if red.pivots.len() < n || red.pivots[n - 1] >= n {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, red.matrix.get(i, n + j));
            }
        }
        Some(inv)
    }

    pub fn is_invertible(&self, f: &Field) -> bool {
        self.rows == self.cols && self.rank(f) == self.rows
    }
}

/// Reduced row-echelon form with its rank and pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Gauss–Jordan elimination; the pivot in each column is the first nonzero
/// entry at or below the current row.
pub fn rref(m: &Matrix, f: &Field) -> Rref {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        let Some(pr) = (row..a.rows).find(|&r| !a.get(r, col).is_zero()) else {
            continue;
        };
        if pr != row {
            for j in 0..a.cols {
                a.data.swap(pr * a.cols + j, row * a.cols + j);
            }
        }
        let inv = f.inv(a.get(row, col)).expect("nonzero pivot");
        for j in col..a.cols {
            let v = a.get(row, j);
            a.set(row, j, f.mul(v, inv));
        }
        let pivot_row: Vec<Fe> = a.row(row).to_vec();
        for r in 0..a.rows {
            if r == row {
                continue;
            }
            let c = a.get(r, col);
            if c.is_zero() {
                continue;
            }
            let nc = f.neg(c);
            for j in col..a.cols {
                let pv = pivot_row[j];
                if !pv.is_zero() {
                    let cur = a.get(r, j);
                    a.set(r, j, f.add(cur, f.mul(nc, pv)));
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    Rref { matrix: a, rank: pivots.len(), pivots }
}

/// Basis of `{x : m x = 0}`.
pub fn nullspace(m: &Matrix, f: &Field) -> Vec<Vec<Fe>> {
    let red = rref(m, f);
    let pivot_set: Vec<bool> = {
        let mut s = vec![false; m.cols];
        for &p in &red.pivots {
            s[p] = true;
        }
        s
    };
    let mut out = Vec::new();
    for free in (0..m.cols).filter(|&c| !pivot_set[c]) {
        let mut v = vec![Fe::ZERO; m.cols];
        v[free] = Fe::ONE;
        for (r, &pc) in red.pivots.iter().enumerate() {
            v[pc] = f.neg(red.matrix.get(r, free));
        }
        out.push(v);
    }
    out
}

/// An echelonized subspace of `F_q^n`, grown one vector at a time.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub n: usize,
    rows: Vec<Vec<Fe>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(n: usize) -> Echelon {
        Echelon { n, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<Fe>] {
        &self.rows
    }

    /// Reduce `v` against the current rows.
    pub fn reduce(&self, v: &mut [Fe], f: &Field) {
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if c.is_zero() {
                continue;
            }
            let nc = f.neg(c);
            for (x, &y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x = f.add(*x, f.mul(nc, y));
                }
            }
        }
    }

    pub fn contains(&self, v: &[Fe], f: &Field) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w, f);
        w.iter().all(|x| x.is_zero())
    }

    /// Adds `v` if it is independent; returns the reduced, normalized row.
    pub fn insert(&mut self, v: &[Fe], f: &Field) -> Option<Vec<Fe>> {
        let mut w = v.to_vec();
        self.reduce(&mut w, f);
        let pc = w.iter().position(|x| !x.is_zero())?;
        let inv = f.inv(w[pc]).unwrap();
        for x in w.iter_mut() {
            *x = f.mul(*x, inv);
        }
        // keep fully reduced so coordinates are easy to read off
        for row in self.rows.iter_mut() {
            let c = row[pc];
            if !c.is_zero() {
                let nc = f.neg(c);
                for (x, &y) in row.iter_mut().zip(&w) {
                    if !y.is_zero() {
                        *x = f.add(*x, f.mul(nc, y));
                    }
                }
            }
        }
        self.rows.push(w.clone());
        self.pivots.push(pc);
        Some(w)
    }

    /// Coordinates of `v` with respect to the stored basis, if `v` lies in it.
    pub fn coordinates(&self, v: &[Fe], f: &Field) -> Option<Vec<Fe>> {
        let coords: Vec<Fe> = self.pivots.iter().map(|&pc| v[pc]).collect();
        let mut w = v.to_vec();
        for (row, &c) in self.rows.iter().zip(&coords) {
            if c.is_zero() {
                continue;
            }
            let nc = f.neg(c);
            for (x, &y) in w.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x = f.add(*x, f.mul(nc, y));
                }
            }
        }
        w.iter().all(|x| x.is_zero()).then_some(coords)
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
}

/// Smallest subspace containing `seeds` that is invariant under all `gens`.
pub fn spin_many(gens: &[&Matrix], seeds: &[Vec<Fe>], f: &Field) -> Echelon {
    let n = seeds.first().map_or(0, |s| s.len());
    let mut ech = Echelon::new(n);
    let mut queue: Vec<Vec<Fe>> = Vec::new();
    for s in seeds {
        if let Some(w) = ech.insert(s, f) {
            queue.push(w);
        }
    }
    while let Some(v) = queue.pop() {
        for g in gens {
            let gv = g.apply(&v, f);
            if let Some(w) = ech.insert(&gv, f) {
                queue.push(w);
                if ech.dim() == n {
                    return ech;
                }
            }
        }
    }
    ech
}

/// A finite-dimensional left module, given by one matrix per algebra basis
/// element.
#[derive(Clone, Debug)]
pub struct Representation {
    pub algebra: Arc<StructureConstantAlgebra>,
    pub dim: usize,
    pub action: Vec<Matrix>,
}

impl Representation {
    pub fn field(&self) -> &Field {
        self.algebra.field()
    }

    /// Matrices of the algebra generators.
    pub fn gens(&self) -> Vec<&Matrix> {
        self.algebra.generators().iter().map(|&g| &self.action[g]).collect()
    }

    /// Extends generator matrices to every basis element through the
    /// algebra's generator words.
    pub fn from_generators(algebra: Arc<StructureConstantAlgebra>, gens: &[Matrix]) -> Representation {
        let f = algebra.field_arc();
        let dim = gens.first().map_or(0, |g| g.rows);
        let n = algebra.dim();
        let gen_pos: Vec<Option<usize>> = {
            let mut v = vec![None; n];
            for (slot, &g) in algebra.generators().iter().enumerate() {
                v[g] = Some(slot);
            }
            v
        };
        let mut words: Vec<Option<Matrix>> = vec![None; n];
        for b in algebra.word_order() {
            let m = match algebra.word_tail(b) {
                None => Matrix::identity(dim),
                Some((g, tail)) => {
                    let gm = &gens[gen_pos[g].expect("word letter is a generator")];
                    gm.mul(words[tail].as_ref().expect("tail computed first"), &f)
                }
            };
            words[b] = Some(m);
        }
        let words: Vec<Matrix> = words.into_iter().map(|w| w.unwrap()).collect();
        let action = (0..n)
            .map(|b| {
                let mut acc = Matrix::zeros(dim, dim);
                for &(w, c) in algebra.word_expansion(b) {
                    acc.add_scaled(&words[w], c, &f);
                }
                acc
            })
            .collect();
        Representation { algebra, dim, action }
    }

    /// Checks `ρ(a)ρ(b) = Σ c_ab^e ρ(e)`: for every generator `a` and every
    /// basis `b` (which suffices), plus `samples` random pairs; `None` means
    /// every pair.
    pub fn check_structure(&self, samples: Option<usize>, seed: u64) -> Result<()> {
        let alg = &self.algebra;
        let f = alg.field();
        let n = alg.dim();
        if self.action.len() != n {
            return Err(Error::StructureViolation("action length != algebra dimension".into()));
        }
        if self.action[alg.unit()] != Matrix::identity(self.dim) {
            return Err(Error::StructureViolation("unit does not act as identity".into()));
        }
        let check = |a: usize, b: usize| -> Result<()> {
            let lhs = self.action[a].mul(&self.action[b], f);
            let mut rhs = Matrix::zeros(self.dim, self.dim);
            for &(e, c) in alg.product(a, b) {
                rhs.add_scaled(&self.action[e as usize], c, f);
            }
            if lhs != rhs {
                return Err(Error::StructureViolation(format!(
                    "{} * {} on a {}-dimensional module",
                    alg.basis_label(a),
                    alg.basis_label(b),
                    self.dim
                )));
            }
            Ok(())
        };
        for &g in alg.generators() {
            for b in 0..n {
                check(g, b)?;
            }
        }
        match samples {
            None => {
                for a in 0..n {
                    for b in 0..n {
                        check(a, b)?;
                    }
                }
            }
            Some(s) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..s {
                    check(rng.gen_range(0..n), rng.gen_range(0..n))?;
                }
            }
        }
        Ok(())
    }

    /// The submodule spanned by `basis` (assumed invariant), in those coordinates.
    pub fn submodule(&self, sub: &Echelon) -> Representation {
        let f = self.field();
        let d = sub.dim();
        let action = self
            .action
            .iter()
            .map(|m| {
                let mut out = Matrix::zeros(d, d);
                for (j, v) in sub.basis().iter().enumerate() {
                    let img = m.apply(v, f);
                    let coords = sub.coordinates(&img, f).expect("subspace is invariant");
                    for (i, c) in coords.into_iter().enumerate() {
                        out.set(i, j, c);
                    }
                }
                out
            })
            .collect();
        Representation { algebra: self.algebra.clone(), dim: d, action }
    }

    /// The quotient by an invariant subspace; the quotient basis is the
    /// standard vectors at the non-pivot positions of `sub`.
    pub fn quotient(&self, sub: &Echelon) -> Representation {
        let f = self.field();
        let mut is_pivot = vec![false; self.dim];
        for &p in sub.pivots() {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.dim).filter(|&i| !is_pivot[i]).collect();
        let d = free.len();
        let action = self
            .action
            .iter()
            .map(|m| {
                let mut out = Matrix::zeros(d, d);
                for (j, &fj) in free.iter().enumerate() {
                    let mut img: Vec<Fe> = (0..self.dim).map(|i| m.get(i, fj)).collect();
                    sub.reduce(&mut img, f);
                    for (i, &fi) in free.iter().enumerate() {
                        out.set(i, j, img[fi]);
                    }
                }
                out
            })
            .collect();
        Representation { algebra: self.algebra.clone(), dim: d, action }
    }

    pub fn direct_sum(&self, other: &Representation) -> Representation {
        let d = self.dim + other.dim;
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| {
                let mut m = Matrix::zeros(d, d);
                for i in 0..a.rows {
                    for j in 0..a.cols {
                        m.set(i, j, a.get(i, j));
                    }
                }
                for i in 0..b.rows {
                    for j in 0..b.cols {
                        m.set(self.dim + i, self.dim + j, b.get(i, j));
                    }
                }
                m
            })
            .collect();
        Representation { algebra: self.algebra.clone(), dim: d, action }
    }

    /// `g⁻¹ ρ g` for every basis element.
    pub fn conjugate(&self, g: &Matrix) -> Option<Representation> {
        let f = self.field();
        let gi = g.inverse(f)?;
        let action = self.action.iter().map(|a| gi.mul(a, f).mul(g, f)).collect();
        Some(Representation { algebra: self.algebra.clone(), dim: self.dim, action })
    }

    /// Restriction along the inclusion of `sub` into this module's algebra,
    /// matching basis monomials.
    pub fn restrict(&self, sub: &Arc<StructureConstantAlgebra>) -> Result<Representation> {
        let map = self.algebra.embedding_indices(sub).ok_or_else(|| {
            Error::Precondition(format!("{} is not a basis subalgebra of {}", sub.label(), self.algebra.label()))
        })?;
        let action = map.iter().map(|&i| self.action[i].clone()).collect();
        Ok(Representation { algebra: sub.clone(), dim: self.dim, action })
    }

    /// Regular left module of the algebra.
    pub fn regular(algebra: Arc<StructureConstantAlgebra>) -> Representation {
        let n = algebra.dim();
        let action = (0..n)
            .map(|a| {
                let mut m = Matrix::zeros(n, n);
                for b in 0..n {
                    for &(e, c) in algebra.product(a, b) {
                        m.set(e as usize, b, c);
                    }
                }
                m
            })
            .collect();
        Representation { algebra, dim: n, action }
    }
}

/// Basis of the smallest submodule containing `v`.
pub fn spin(rep: &Representation, v: &[Fe]) -> Result<Echelon> {
    if v.iter().all(|x| x.is_zero()) {
        return Err(Error::ZeroSeed);
    }
    Ok(spin_many(&rep.gens(), &[v.to_vec()], rep.field()))
}

#[derive(Clone, Debug, PartialEq)]
pub enum Irreducibility {
    Irreducible,
    /// `witness` generates a proper nonzero submodule.
    Reducible { witness: Vec<Fe> },
}

impl Irreducibility {
    pub fn is_irreducible(&self) -> bool {
        matches!(self, Irreducibility::Irreducible)
    }
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize, q: u32) -> Vec<Fe> {
    loop {
        let v: Vec<Fe> = (0..n).map(|_| Fe(rng.gen_range(0..q) as u16)).collect();
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

/// A nonzero vector of the submodule `{m : <w, m> = 0 for w in dual_sub}`.
fn annihilator_vector(dual_sub: &Echelon, f: &Field) -> Vec<Fe> {
    let m = Matrix::from_rows(dual_sub.basis());
    nullspace(&m, f).into_iter().next().expect("proper dual submodule")
}

/// Irreducibility by Norton's criterion on random algebra elements, falling
/// back to an exhaustive spin over projective points when that is small.
pub fn is_irreducible(rep: &Representation, seed: u64) -> Result<Irreducibility> {
    let n = rep.dim;
    if n == 0 {
        return Err(Error::Precondition("zero-dimensional module".into()));
    }
    if n == 1 {
        return Ok(Irreducibility::Irreducible);
    }
    let f = rep.field();
    let q = f.order();
    let gens = rep.gens();
    let gens_t: Vec<Matrix> = gens.iter().map(|g| g.transpose()).collect();
    let gens_t_ref: Vec<&Matrix> = gens_t.iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nbasis = rep.action.len();
    for attempt in 0..64 {
        // random spin
        let v = random_vec(&mut rng, n, q);
        let sub = spin_many(&gens, std::slice::from_ref(&v), f);
        if sub.dim() < n {
            return Ok(Irreducibility::Reducible { witness: v });
        }
        // random algebra element: a few basis actions and a generator product
        let mut a = Matrix::zeros(n, n);
        for _ in 0..3 + attempt % 4 {
            let c = Fe(rng.gen_range(1..q) as u16);
            a.add_scaled(&rep.action[rng.gen_range(0..nbasis)], c, f);
        }
        let g1 = gens[rng.gen_range(0..gens.len())];
        let g2 = gens[rng.gen_range(0..gens.len())];
        a.add_scaled(&g1.mul(g2, f), Fe(rng.gen_range(0..q) as u16), f);
        for shift in f.elements() {
            let b = a.sub(&Matrix::scalar(n, shift), f);
            let null = nullspace(&b, f);
            if null.is_empty() {
                continue;
            }
            let v = &null[0];
            let sub = spin_many(&gens, std::slice::from_ref(v), f);
            if sub.dim() < n {
                return Ok(Irreducibility::Reducible { witness: v.clone() });
            }
            if null.len() == 1 {
                let w = nullspace(&b.transpose(), f).remove(0);
                let dsub = spin_many(&gens_t_ref, &[w], f);
                if dsub.dim() < n {
                    return Ok(Irreducibility::Reducible { witness: annihilator_vector(&dsub, f) });
                }
                return Ok(Irreducibility::Irreducible);
            }
        }
    }
    exhaustive_irreducible(rep)
}

/// Spins every projective point; only below [`EXHAUSTIVE_LIMIT`].
pub fn exhaustive_irreducible(rep: &Representation) -> Result<Irreducibility> {
    let n = rep.dim;
    let f = rep.field();
    let q = f.order() as u64;
    let total = q.checked_pow(n as u32).unwrap_or(u64::MAX);
    if total > EXHAUSTIVE_LIMIT {
        return Err(Error::Inconclusive(format!(
            "no Norton certificate and q^dim = {q}^{n} exceeds the exhaustive limit"
        )));
    }
    let gens = rep.gens();
    // normalized vectors: first nonzero coordinate equal to one
    for lead in 0..n {
        let rest = n - lead - 1;
        for code in 0..q.pow(rest as u32) {
            let mut v = vec![Fe::ZERO; n];
            v[lead] = Fe::ONE;
            let mut c = code;
            for x in v.iter_mut().skip(lead + 1) {
                *x = Fe((c % q) as u16);
                c /= q;
            }
            if spin_many(&gens, &[v.clone()], f).dim() < n {
                return Ok(Irreducibility::Reducible { witness: v });
            }
        }
    }
    Ok(Irreducibility::Irreducible)
}

/// All module maps `φ : source → target`, as `target.dim × source.dim` matrices.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub basis: Vec<Matrix>,
    pub source_dim: usize,
    pub target_dim: usize,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn combination(&self, coeffs: &[Fe], f: &Field) -> Matrix {
        let mut m = Matrix::zeros(self.target_dim, self.source_dim);
        for (b, &c) in self.basis.iter().zip(coeffs) {
            m.add_scaled(b, c, f);
        }
        m
    }
}

/// Solves `φ ρ_P(g) = ρ_M(g) φ` for all generators `g`.
pub fn hom_space(source: &Representation, target: &Representation) -> Result<HomSpace> {
    if source.algebra.label() != target.algebra.label() {
        return Err(Error::Precondition("modules over different algebras".into()));
    }
    Ok(hom_space_gens(&source.gens(), &target.gens(), source.dim, target.dim, source.field()))
}

/// Maps `φ` (`dm × dp`) with `φ a_g = b_g φ` for paired generator matrices.
/// Dimensions are explicit so that an algebra without generators works.
pub fn hom_space_gens(src: &[&Matrix], tgt: &[&Matrix], dp: usize, dm: usize, f: &Field) -> HomSpace {
    let unknowns = dm * dp;
    let mut rows: Vec<Vec<Fe>> = Vec::new();
    for (a, b) in src.iter().zip(tgt) {
        for i in 0..dm {
            for l in 0..dp {
                let mut eq = vec![Fe::ZERO; unknowns];
                for j in 0..dp {
                    let c = a.get(j, l);
                    if !c.is_zero() {
                        eq[i * dp + j] = f.add(eq[i * dp + j], c);
                    }
                }
                for m in 0..dm {
                    let c = b.get(i, m);
                    if !c.is_zero() {
                        eq[m * dp + l] = f.sub(eq[m * dp + l], c);
                    }
                }
                if eq.iter().any(|x| !x.is_zero()) {
                    rows.push(eq);
                }
            }
        }
    }
    let basis_vecs = if rows.is_empty() {
        (0..unknowns)
            .map(|i| {
                let mut v = vec![Fe::ZERO; unknowns];
                v[i] = Fe::ONE;
                v
            })
            .collect()
    } else {
        let sys = Matrix::from_rows(&rows);
        nullspace(&sys, f)
    };
    let basis = basis_vecs
        .into_iter()
        .map(|v| Matrix { rows: dm, cols: dp, data: v })
        .collect();
    HomSpace { basis, source_dim: dp, target_dim: dm }
}

/// True iff an invertible module map exists.
pub fn are_isomorphic(a: &Representation, b: &Representation, seed: u64) -> Result<bool> {
    if a.dim != b.dim {
        return Ok(false);
    }
    let hom = hom_space(a, b)?;
    Ok(find_invertible(&hom, a.field(), seed).is_some())
}

pub fn find_invertible(hom: &HomSpace, f: &Field, seed: u64) -> Option<Matrix> {
    if hom.dim() == 0 || hom.source_dim != hom.target_dim {
        return None;
    }
    for m in &hom.basis {
        if m.is_invertible(f) {
            return Some(m.clone());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tries = (f.order() as usize) * hom.source_dim.max(1);
    for _ in 0..tries {
        let coeffs: Vec<Fe> = (0..hom.dim()).map(|_| Fe(rng.gen_range(0..f.order()) as u16)).collect();
        let m = hom.combination(&coeffs, f);
        if m.is_invertible(f) {
            return Some(m);
        }
    }
    None
}

/// One irreducible factor together with its multiplicity.
#[derive(Clone, Debug)]
pub struct Factor {
    pub module: Representation,
    pub multiplicity: usize,
}

/// Recursive chop into irreducible pieces (with repetition).
pub fn chop(rep: &Representation, seed: u64) -> Result<Vec<Representation>> {
    let mut out = Vec::new();
    let mut stack = vec![rep.clone()];
    let mut round = 0u64;
    while let Some(m) = stack.pop() {
        round += 1;
        match is_irreducible(&m, seed.wrapping_add(round))? {
            Irreducibility::Irreducible => out.push(m),
            Irreducibility::Reducible { witness } => {
                let sub = spin(&m, &witness)?;
                stack.push(m.submodule(&sub));
                stack.push(m.quotient(&sub));
            }
        }
    }
    Ok(out)
}

/// Groups pieces up to isomorphism, ordered by dimension then first appearance.
pub fn group_factors(pieces: Vec<Representation>, seed: u64) -> Result<Vec<Factor>> {
    let mut groups: Vec<Factor> = Vec::new();
    for m in pieces {
        let mut found = false;
        for g in groups.iter_mut() {
            if are_isomorphic(&g.module, &m, seed)? {
                g.multiplicity += 1;
                found = true;
                break;
            }
        }
        if !found {
            groups.push(Factor { module: m, multiplicity: 1 });
        }
    }
    groups.sort_by_key(|g| g.module.dim);
    Ok(groups)
}

pub fn composition_factors(rep: &Representation, seed: u64) -> Result<Vec<Factor>> {
    group_factors(chop(rep, seed)?, seed)
}

/// Dimension/multiplicity signature of a factor list, matched up to isomorphism.
pub fn same_factors(a: &[Factor], b: &[Factor], seed: u64) -> Result<bool> {
    if a.len() != b.len() {
        return Ok(false);
    }
    let mut used = vec![false; b.len()];
    for fa in a {
        let mut hit = false;
        for (j, fb) in b.iter().enumerate() {
            if !used[j] && fa.multiplicity == fb.multiplicity && are_isomorphic(&fa.module, &fb.module, seed)? {
                used[j] = true;
                hit = true;
                break;
            }
        }
        if !hit {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A minimal submodule found by spinning `seed_vec` and chopping downward.
pub fn minimal_submodule(rep: &Representation, seed_vec: &[Fe], seed: u64) -> Result<Representation> {
    let mut cur = rep.submodule(&spin(rep, seed_vec)?);
    let mut round = 0;
    loop {
        round += 1;
        match is_irreducible(&cur, seed.wrapping_add(round))? {
            Irreducibility::Irreducible => return Ok(cur),
            Irreducibility::Reducible { witness } => {
                let sub = spin(&cur, &witness)?;
                cur = cur.submodule(&sub);
            }
        }
    }
}

/// For a module whose restriction to `sub` is isotypic, the simple
/// constituent of that restriction.
pub fn simple_socle_component(
    rep: &Representation,
    sub: &Arc<StructureConstantAlgebra>,
    seed: u64,
) -> Result<Representation> {
    let res = rep.restrict(sub)?;
    let mut e0 = vec![Fe::ZERO; rep.dim];
    e0[0] = Fe::ONE;
    let simple = minimal_submodule(&res, &e0, seed)?;
    let hom = hom_space(&simple, &res)?;
    if hom.dim() * simple.dim != res.dim {
        return Err(Error::NotIsotypic(format!(
            "Hom(P, M) has dimension {} but dim M / dim P = {}/{}",
            hom.dim(),
            res.dim,
            simple.dim
        )));
    }
    // the images of a Hom basis must fill M for a semisimple isotypic restriction
    let f = rep.field();
    let mut ech = Echelon::new(rep.dim);
    for phi in &hom.basis {
        for j in 0..phi.cols {
            let col: Vec<Fe> = (0..phi.rows).map(|i| phi.get(i, j)).collect();
            ech.insert(&col, f);
        }
    }
    if ech.dim() != rep.dim {
        return Err(Error::NotIsotypic("images of Hom(P, M) do not span M".into()));
    }
    Ok(simple)
}

/// Irreducible quotients of `rep` among `candidates`: `S` is a quotient iff
/// `Hom(rep, S) ≠ 0`. Returns `(candidate index, dim Hom)` pairs.
pub fn quotient_multiplicities(rep: &Representation, candidates: &[Representation]) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for (i, s) in candidates.iter().enumerate() {
        let d = hom_space(rep, s)?.dim();
        if d > 0 {
            out.push((i, d));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f3() -> Arc<Field> {
        Field::prime(3).unwrap()
    }

    #[test]
    fn rref_identity_and_zero() {
        let f = f3();
        let id = Matrix::identity(4);
        let r = rref(&id, &f);
        assert_eq!(r.matrix, id);
        assert_eq!(r.rank, 4);
        let z = Matrix::zeros(3, 5);
        let r = rref(&z, &f);
        assert_eq!(r.rank, 0);
        assert_eq!(r.matrix, z);
    }

    #[test]
    fn nullspace_is_kernel() {
        let f = f3();
        let m = Matrix::from_rows(&[
            vec![Fe(1), Fe(2), Fe(0), Fe(1)],
            vec![Fe(2), Fe(1), Fe(0), Fe(2)],
        ]);
        let ns = nullspace(&m, &f);
        assert_eq!(ns.len(), 4 - m.rank(&f));
        for v in ns {
            assert!(m.apply(&v, &f).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let f = f3();
        let m = Matrix::from_rows(&[vec![Fe(1), Fe(1)], vec![Fe(0), Fe(2)]]);
        let inv = m.inverse(&f).unwrap();
        assert_eq!(m.mul(&inv, &f), Matrix::identity(2));
        assert!(Matrix::zeros(2, 2).inverse(&f).is_none());
    }

    proptest! {
        #[test]
        fn rank_of_transpose(data in proptest::collection::vec(0u16..3, 400)) {
            let f = f3();
            let m = Matrix { rows: 20, cols: 20, data: data.into_iter().map(Fe).collect() };
            prop_assert_eq!(m.rank(&f), m.transpose().rank(&f));
        }

        #[test]
        fn echelon_coordinates_reconstruct(data in proptest::collection::vec(0u16..3, 30)) {
            let f = f3();
            let rows: Vec<Vec<Fe>> = data.chunks(6).map(|c| c.iter().map(|&x| Fe(x)).collect()).collect();
            let mut ech = Echelon::new(6);
            for r in &rows { ech.insert(r, &f); }
            for r in &rows {
                let c = ech.coordinates(r, &f).unwrap();
                let mut back = vec![Fe::ZERO; 6];
                for (b, &ci) in ech.basis().iter().zip(&c) {
                    for (x, &y) in back.iter_mut().zip(b) { *x = f.add(*x, f.mul(ci, y)); }
                }
                prop_assert_eq!(&back, r);
            }
        }
    }
}
