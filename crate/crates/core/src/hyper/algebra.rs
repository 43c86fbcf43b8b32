use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Fe, Field};

use super::pchar::PCharacter;

/// Exponent triple `(i, k, j)` of an ordered PBW monomial.
///
/// In a divided-power basis it stands for `e^(i)·binom(h; k)·f^(j)`, in a
/// power basis for `e^i·h^k·f^j`. Monomials compare lexicographically.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DividedPowerMonomial {
    pub i: u32,
    pub k: u32,
    pub j: u32,
}

impl DividedPowerMonomial {
    pub const fn new(i: u32, k: u32, j: u32) -> Self {
        DividedPowerMonomial { i, k, j }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum BasisKind {
    /// `e^(i) binom(h;k) f^(j)`
    DividedPower,
    /// `e^i h^k f^j`
    Power,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum AlgebraKind {
    DiGr { r: u32 },
    UrChi { r: u32, chi: PCharacter },
    UgChi { chi: PCharacter },
    UhatB { r: u32, chi: PCharacter },
}

impl AlgebraKind {
    pub fn chi(&self) -> Option<PCharacter> {
        match *self {
            AlgebraKind::DiGr { .. } => None,
            AlgebraKind::UrChi { chi, .. } | AlgebraKind::UgChi { chi } | AlgebraKind::UhatB { chi, .. } => Some(chi),
        }
    }

    pub fn basis_kind(&self) -> BasisKind {
        match self {
            AlgebraKind::UgChi { .. } => BasisKind::Power,
            _ => BasisKind::DividedPower,
        }
    }
}

/// A finite-dimensional associative algebra given by a monomial basis and a
/// sparse multiplication tensor `b_a · b_b = Σ c_ab^e b_e`.
pub struct StructureConstantAlgebra {
    kind: AlgebraKind,
    name: String,
    field: Arc<Field>,
    basis: Vec<DividedPowerMonomial>,
    /// Per-coordinate exclusive bounds; the basis is the full box, in
    /// lexicographic order.
    bounds: [u32; 3],
    offsets: Vec<u32>,
    terms: Vec<(u16, Fe)>,
    unit: usize,
    generators: Vec<usize>,
    tails: Vec<Option<(usize, usize)>>,
    word_order: Vec<usize>,
    expansion: Vec<Vec<(usize, Fe)>>,
}

impl fmt::Debug for StructureConstantAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (dim {})", self.name, self.dim())
    }
}

/// Base-`p` digits, least significant first.
pub(crate) fn digits_of(mut n: u32, p: u32) -> Vec<u32> {
    let mut out = Vec::new();
    while n > 0 {
        out.push(n % p);
        n /= p;
    }
    out
}

fn lowest_digit_power(n: u32, p: u32) -> u32 {
    let mut q = 1;
    while (n / q).is_multiple_of(p) {
        q *= p;
    }
    q
}

impl StructureConstantAlgebra {
    /// Assembles an algebra from a product rule on the box basis
    /// `[0,b0) × [0,b1) × [0,b2)`, then derives generator words.
    ///
    /// `generators` lists monomials; every basis monomial must factor as a
    /// word in them (see [`Self::word_tail`]).
    pub(crate) fn assemble(
        kind: AlgebraKind,
        name: String,
        field: Arc<Field>,
        bounds: [u32; 3],
        generators: &[DividedPowerMonomial],
        mut product: impl FnMut(usize, usize) -> Vec<(usize, Fe)>,
    ) -> Result<StructureConstantAlgebra> {
        let basis = box_basis(bounds);
        let n = basis.len();
        if n > u16::MAX as usize {
            return Err(Error::Precondition(format!("algebra dimension {n} too large")));
        }
        let mut offsets = Vec::with_capacity(n * n + 1);
        let mut terms = Vec::new();
        offsets.push(0u32);
        for a in 0..n {
            for b in 0..n {
                let mut t = product(a, b);
                t.retain(|x| !x.1.is_zero());
                t.sort_by_key(|x| x.0);
                terms.extend(t.into_iter().map(|(e, c)| (e as u16, c)));
                offsets.push(terms.len() as u32);
            }
        }
        Self::from_parts(kind, name, field, bounds, offsets, terms, generators)
    }

    pub(crate) fn from_parts(
        kind: AlgebraKind,
        name: String,
        field: Arc<Field>,
        bounds: [u32; 3],
        offsets: Vec<u32>,
        terms: Vec<(u16, Fe)>,
        generators: &[DividedPowerMonomial],
    ) -> Result<StructureConstantAlgebra> {
        let basis = box_basis(bounds);
        let mut alg = StructureConstantAlgebra {
            kind,
            name,
            field,
            basis,
            bounds,
            offsets,
            terms,
            unit: 0,
            generators: Vec::new(),
            tails: Vec::new(),
            word_order: Vec::new(),
            expansion: Vec::new(),
        };
        alg.generators = generators
            .iter()
            .map(|m| alg.index_of(*m).ok_or_else(|| Error::Precondition(format!("generator {m:?} outside basis"))))
            .collect::<Result<_>>()?;
        alg.build_words()?;
        Ok(alg)
    }

    fn build_words(&mut self) -> Result<()> {
        let p = self.field.p();
        let n = self.dim();
        let power = self.kind.basis_kind() == BasisKind::Power;
        let letters = |m: DividedPowerMonomial| -> u32 {
            if power {
                m.i + m.k + m.j
            } else {
                [m.i, m.k, m.j].iter().map(|&x| digits_of(x, p).iter().sum::<u32>()).sum()
            }
        };
        let mut tails = vec![None; n];
        for (b, &m) in self.basis.iter().enumerate() {
            let step = |x: u32| if power { 1 } else { lowest_digit_power(x, p) };
            let (letter, tail) = if m.i > 0 {
                let s = step(m.i);
                (DividedPowerMonomial::new(s, 0, 0), DividedPowerMonomial::new(m.i - s, m.k, m.j))
            } else if m.k > 0 {
                let s = step(m.k);
                (DividedPowerMonomial::new(0, s, 0), DividedPowerMonomial::new(0, m.k - s, m.j))
            } else if m.j > 0 {
                let s = step(m.j);
                (DividedPowerMonomial::new(0, 0, s), DividedPowerMonomial::new(0, 0, m.j - s))
            } else {
                continue;
            };
            let g = self.index_of(letter).filter(|g| self.generators.contains(g)).ok_or_else(|| {
                Error::StructureViolation(format!("{} needs a missing generator", self.basis_label(b)))
            })?;
            tails[b] = Some((g, self.index_of(tail).expect("tail in box")));
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&b| (letters(self.basis[b]), b));
        self.tails = tails;
        self.word_order = order;
        self.unit = self.index_of(DividedPowerMonomial::new(0, 0, 0)).unwrap();

        // word values inside the algebra
        let f = self.field.clone();
        let mut word_vals: Vec<Vec<(usize, Fe)>> = vec![Vec::new(); n];
        for &b in &self.word_order {
            word_vals[b] = match self.tails[b] {
                None => vec![(self.unit, Fe::ONE)],
                Some((g, tail)) => {
                    let mut acc = vec![Fe::ZERO; n];
                    for &(t, c) in &word_vals[tail] {
                        for &(e, d) in self.product(g, t) {
                            let e = e as usize;
                            acc[e] = f.add(acc[e], f.mul(c, d));
                        }
                    }
                    sparse(&acc)
                }
            };
        }
        // triangular inversion: basis = combination of words
        let mut expansion: Vec<Vec<(usize, Fe)>> = vec![Vec::new(); n];
        for b in 0..n {
            let w = &word_vals[b];
            let lead = w.iter().find(|x| x.0 == b).map(|x| x.1).unwrap_or(Fe::ZERO);
            if lead.is_zero() || w.iter().any(|x| x.0 > b) {
                return Err(Error::StructureViolation(format!(
                    "generator word of {} is not unitriangular",
                    self.basis_label(b)
                )));
            }
            let inv = f.inv(lead).unwrap();
            let mut acc = vec![Fe::ZERO; n];
            acc[b] = inv;
            for &(b2, c) in w {
                if b2 == b {
                    continue;
                }
                let coef = f.neg(f.mul(c, inv));
                for &(w2, d) in &expansion[b2] {
                    acc[w2] = f.add(acc[w2], f.mul(coef, d));
                }
            }
            expansion[b] = sparse(&acc);
        }
        self.expansion = expansion;
        Ok(())
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn label(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn field_arc(&self) -> Arc<Field> {
        self.field.clone()
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[DividedPowerMonomial] {
        &self.basis
    }

    pub fn bounds(&self) -> [u32; 3] {
        self.bounds
    }

    pub fn index_of(&self, m: DividedPowerMonomial) -> Option<usize> {
        let [bi, bk, bj] = self.bounds;
        (m.i < bi && m.k < bk && m.j < bj).then(|| ((m.i * bk + m.k) * bj + m.j) as usize)
    }

    pub fn basis_label(&self, idx: usize) -> String {
        let m = self.basis[idx];
        match self.kind.basis_kind() {
            BasisKind::DividedPower => format!("e^({}) h^[{}] f^({})", m.i, m.k, m.j),
            BasisKind::Power => format!("e^{} h^{} f^{}", m.i, m.k, m.j),
        }
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// Sparse product of two basis elements.
    pub fn product(&self, a: usize, b: usize) -> &[(u16, Fe)] {
        let n = self.dim();
        let s = self.offsets[a * n + b] as usize;
        let e = self.offsets[a * n + b + 1] as usize;
        &self.terms[s..e]
    }

    pub fn nnz(&self) -> usize {
        self.terms.len()
    }

    /// Every nonzero structure constant as `(a, b, e, c)`.
    pub fn structure_tensor(&self) -> impl Iterator<Item = (usize, usize, usize, Fe)> + '_ {
        let n = self.dim();
        (0..n).flat_map(move |a| {
            (0..n).flat_map(move |b| self.product(a, b).iter().map(move |&(e, c)| (a, b, e as usize, c)))
        })
    }

    /// `(first letter, tail)` with `b = letter · tail` as words; `None` for the unit.
    pub fn word_tail(&self, b: usize) -> Option<(usize, usize)> {
        self.tails[b]
    }

    /// Basis indices ordered so that every tail precedes its word.
    pub fn word_order(&self) -> impl Iterator<Item = usize> + '_ {
        self.word_order.iter().copied()
    }

    /// `b = Σ c · word(b')` as `(b', c)` pairs.
    pub fn word_expansion(&self, b: usize) -> &[(usize, Fe)] {
        &self.expansion[b]
    }

    pub fn basis_vector(&self, b: usize) -> Vec<Fe> {
        let mut v = vec![Fe::ZERO; self.dim()];
        v[b] = Fe::ONE;
        v
    }

    /// Product of two dense elements.
    pub fn mul(&self, x: &[Fe], y: &[Fe]) -> Vec<Fe> {
        let f = &self.field;
        let n = self.dim();
        let mut out = vec![Fe::ZERO; n];
        for (a, &xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, &yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                let c = f.mul(xa, yb);
                for &(e, d) in self.product(a, b) {
                    let e = e as usize;
                    out[e] = f.add(out[e], f.mul(c, d));
                }
            }
        }
        out
    }

    pub fn check_unit(&self) -> Result<()> {
        let u = self.unit;
        for b in 0..self.dim() {
            let want = [(b as u16, Fe::ONE)];
            if self.product(u, b) != want || self.product(b, u) != want {
                return Err(Error::AxiomFailure(format!("unit law fails at {}", self.basis_label(b))));
            }
        }
        Ok(())
    }

    /// `(ab)c = a(bc)` on every triple (`None`) or on `samples` seeded triples.
    pub fn check_associativity(&self, samples: Option<usize>, seed: u64) -> Result<usize> {
        let n = self.dim();
        let f = &self.field;
        let assoc = |a: usize, b: usize, c: usize| -> Result<()> {
            let mut left = vec![Fe::ZERO; n];
            for &(e, x) in self.product(a, b) {
                for &(g, y) in self.product(e as usize, c) {
                    let g = g as usize;
                    left[g] = f.add(left[g], f.mul(x, y));
                }
            }
            let mut right = vec![Fe::ZERO; n];
            for &(e, x) in self.product(b, c) {
                for &(g, y) in self.product(a, e as usize) {
                    let g = g as usize;
                    right[g] = f.add(right[g], f.mul(x, y));
                }
            }
            if left != right {
                return Err(Error::AxiomFailure(format!(
                    "associativity fails on ({}, {}, {})",
                    self.basis_label(a),
                    self.basis_label(b),
                    self.basis_label(c)
                )));
            }
            Ok(())
        };
        match samples {
            None => {
                for a in 0..n {
                    for b in 0..n {
                        for c in 0..n {
                            assoc(a, b, c)?;
                        }
                    }
                }
                Ok(n * n * n)
            }
            Some(s) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..s {
                    assoc(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
                }
                Ok(s)
            }
        }
    }

    /// Indices in `self` of the basis monomials of `sub`, when `sub` is a
    /// subalgebra spanned by a subset of the same kind of monomials.
    pub fn embedding_indices(&self, sub: &StructureConstantAlgebra) -> Option<Vec<usize>> {
        if sub.kind.basis_kind() != self.kind.basis_kind() || sub.field.params() != self.field.params() {
            return None;
        }
        let map: Option<Vec<usize>> = sub.basis.iter().map(|&m| self.index_of(m)).collect();
        let map = map?;
        // the structure constants must agree on the sub-basis
        let n = sub.dim();
        for a in 0..n {
            for b in 0..n {
                let mine: Vec<(u16, Fe)> =
                    sub.product(a, b).iter().map(|&(e, c)| (map[e as usize] as u16, c)).collect();
                if self.product(map[a], map[b]) != mine.as_slice() {
                    return None;
                }
            }
        }
        Some(map)
    }

    /// Sub-box `[0,b0) × [0,b1) × [0,b2)` as its own algebra; fails when a
    /// product leaves the box.
    pub(crate) fn sub_box(
        &self,
        kind: AlgebraKind,
        name: String,
        bounds: [u32; 3],
        generators: &[DividedPowerMonomial],
    ) -> Result<StructureConstantAlgebra> {
        let sub_basis = box_basis(bounds);
        let map: Vec<usize> = sub_basis
            .iter()
            .map(|&m| self.index_of(m).ok_or_else(|| Error::NotClosed(format!("{m:?} outside parent"))))
            .collect::<Result<_>>()?;
        let mut back = vec![usize::MAX; self.dim()];
        for (s, &t) in map.iter().enumerate() {
            back[t] = s;
        }
        let mut offsets = vec![0u32];
        let mut terms = Vec::new();
        for &a in &map {
            for &b in &map {
                for &(e, c) in self.product(a, b) {
                    let s = back[e as usize];
                    if s == usize::MAX {
                        return Err(Error::NotClosed(format!(
                            "{} * {} has a term {}",
                            self.basis_label(a),
                            self.basis_label(b),
                            self.basis_label(e as usize)
                        )));
                    }
                    terms.push((s as u16, c));
                }
                offsets.push(terms.len() as u32);
            }
        }
        StructureConstantAlgebra::from_parts(kind, name, self.field.clone(), bounds, offsets, terms, generators)
    }
}

pub(crate) fn box_basis(bounds: [u32; 3]) -> Vec<DividedPowerMonomial> {
    let mut v = Vec::with_capacity((bounds[0] * bounds[1] * bounds[2]) as usize);
    for i in 0..bounds[0] {
        for k in 0..bounds[1] {
            for j in 0..bounds[2] {
                v.push(DividedPowerMonomial::new(i, k, j));
            }
        }
    }
    v
}

pub(crate) fn sparse(v: &[Fe]) -> Vec<(usize, Fe)> {
    v.iter().enumerate().filter(|x| !x.1.is_zero()).map(|(i, &c)| (i, c)).collect()
}

/// Generators `x^(p^s)` for the given per-coordinate level counts.
pub(crate) fn dp_generators(p: u32, levels: [u32; 3]) -> Vec<DividedPowerMonomial> {
    let mut g = Vec::new();
    for s in 0..levels[0] {
        g.push(DividedPowerMonomial::new(p.pow(s), 0, 0));
    }
    for s in 0..levels[1] {
        g.push(DividedPowerMonomial::new(0, p.pow(s), 0));
    }
    for s in 0..levels[2] {
        g.push(DividedPowerMonomial::new(0, 0, p.pow(s)));
    }
    g
}

