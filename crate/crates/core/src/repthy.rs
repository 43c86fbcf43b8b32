//! Modules over `Di(G_r)`, `U_χ(sl₂)` and `U^[r]_χ`: simples through Steinberg
//! tensor products, baby and teenage Verma modules, the Hom-space action that
//! recovers the `U_χ(sl₂)` factor, and enumeration of irreducibles.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{binom_mod_p, lucas_binom, Fe, Field};
use crate::hyper::{
    build_di_gr, build_u_chi_g, build_u_r_chi, classify_pchar, conjugate_to_standard, CenterData, ChiClass,
    DividedPowerMonomial, PCharacter, StructureConstantAlgebra,
};
use crate::linalg::{
    are_isomorphic, composition_factors, hom_space, is_irreducible, Echelon, Matrix, Representation,
    DEFAULT_SEED,
};

/// Sampled pairs added to the generator-by-basis structure check.
pub const STRUCTURE_SAMPLES: usize = 64;

/// A weight `λ(h)`, with its integer label when it is one of `0..p^r`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorusWeight {
    pub value: Fe,
    pub restricted_label: Option<u32>,
}

/// Action of the divided powers `e^(a)`, `binom(h;k)`, `f^(a)` (`a, k < bound`)
/// on a rational `SL₂`-module. Tensor products and Frobenius twists are
/// computed family by family from `Δ x^(a) = Σ x^(i) ⊗ x^(a−i)`, which holds
/// for all three families.
#[derive(Clone, Debug)]
pub struct RationalModule {
    pub dim: usize,
    pub bound: usize,
    e: Vec<Matrix>,
    h: Vec<Matrix>,
    f: Vec<Matrix>,
}

impl RationalModule {
    pub fn trivial(bound: usize) -> RationalModule {
        let fam = (0..bound)
            .map(|a| if a == 0 { Matrix::identity(1) } else { Matrix::zeros(1, 1) })
            .collect::<Vec<_>>();
        RationalModule { dim: 1, bound, e: fam.clone(), h: fam.clone(), f: fam }
    }

    /// The Weyl module of highest weight `λ` with basis `v_m = f^(m) v_0`:
    /// `e^(a) v_m = C(λ−m+a, a) v_{m−a}`, `f^(a) v_m = C(m+a, a) v_{m+a}`,
    /// `binom(h;k) v_m = binom(λ−2m; k) v_m`. Simple for `λ < p`.
    pub fn weyl(lambda: u32, bound: usize, field: &Field) -> RationalModule {
        let p = field.p();
        let d = lambda as usize + 1;
        let c = |n: u64, k: u64| field.from_int(lucas_binom(n, k, p) as i64);
        let mut e = Vec::with_capacity(bound);
        let mut h = Vec::with_capacity(bound);
        let mut f = Vec::with_capacity(bound);
        for a in 0..bound {
            let mut me = Matrix::zeros(d, d);
            let mut mh = Matrix::zeros(d, d);
            let mut mf = Matrix::zeros(d, d);
            for m in 0..d {
                if a <= m {
                    me.set(m - a, m, c((lambda as usize - m + a) as u64, a as u64));
                }
                if m + a < d {
                    mf.set(m + a, m, c((m + a) as u64, a as u64));
                }
                let w = lambda as i64 - 2 * m as i64;
                mh.set(m, m, field.from_int(binom_mod_p(w, a as u64, p) as i64));
            }
            e.push(me);
            h.push(mh);
            f.push(mf);
        }
        RationalModule { dim: d, bound, e, h, f }
    }

    pub fn tensor(&self, other: &RationalModule, field: &Field) -> RationalModule {
        let bound = self.bound.min(other.bound);
        let fam = |x: &[Matrix], y: &[Matrix]| -> Vec<Matrix> {
            (0..bound)
                .map(|a| {
                    let mut acc = Matrix::zeros(self.dim * other.dim, self.dim * other.dim);
                    for i in 0..=a {
                        if x[i].is_zero() || y[a - i].is_zero() {
                            continue;
                        }
                        acc = acc.add(&x[i].kron(&y[a - i], field), field);
                    }
                    acc
                })
                .collect()
        };
        RationalModule {
            dim: self.dim * other.dim,
            bound,
            e: fam(&self.e, &other.e),
            h: fam(&self.h, &other.h),
            f: fam(&self.f, &other.f),
        }
    }

    /// Pullback along Frobenius: `x^(a)` acts as `x^(a/p)` when `p | a`,
    /// and as zero otherwise.
    pub fn frobenius_twist(&self, p: usize) -> RationalModule {
        let bound = self.bound * p;
        let fam = |x: &[Matrix]| -> Vec<Matrix> {
            (0..bound)
                .map(|a| if a % p == 0 { x[a / p].clone() } else { Matrix::zeros(self.dim, self.dim) })
                .collect()
        };
        RationalModule { dim: self.dim, bound, e: fam(&self.e), h: fam(&self.h), f: fam(&self.f) }
    }

    /// `L(d_0) ⊗ L(d_1)^[1] ⊗ …` with `bound ≥ p^{digits.len()}`.
    pub fn steinberg_product(digits: &[u32], bound: usize, field: &Field) -> RationalModule {
        let p = field.p() as usize;
        match digits.split_first() {
            None => RationalModule::trivial(bound),
            Some((&d0, rest)) => {
                let inner = RationalModule::steinberg_product(rest, bound.div_ceil(p), field).frobenius_twist(p);
                RationalModule::weyl(d0, bound, field).tensor(&inner, field)
            }
        }
    }

    /// The induced module over a divided-power algebra (`Di(G_r)`) whose
    /// basis box fits in `bound`; every basis monomial acts as
    /// `e^(i)·binom(h;k)·f^(j)`.
    pub fn representation(&self, alg: Arc<StructureConstantAlgebra>) -> Result<Representation> {
        let field = alg.field_arc();
        if alg.bounds().iter().any(|&b| b as usize > self.bound) {
            return Err(Error::Precondition("module does not carry enough divided powers".into()));
        }
        let action = alg
            .basis()
            .iter()
            .map(|m| {
                self.e[m.i as usize]
                    .mul(&self.h[m.k as usize], &field)
                    .mul(&self.f[m.j as usize], &field)
            })
            .collect();
        let rep = Representation { algebra: alg, dim: self.dim, action };
        rep.check_structure(Some(STRUCTURE_SAMPLES), DEFAULT_SEED)?;
        Ok(rep)
    }
}

/// `L_1(λ)` over `Di(G_1)`, `0 ≤ λ < p`.
pub fn simple_l1(lambda: u32, di1: Arc<StructureConstantAlgebra>) -> Result<Representation> {
    let p = di1.p();
    if lambda >= p {
        return Err(Error::Precondition(format!("weight {lambda} is not below p = {p}")));
    }
    RationalModule::weyl(lambda, p as usize, di1.field()).representation(di1)
}

/// Pulls a `Di(G_{r−1})`-module back to `Di(G_r)` along the Frobenius map
/// `e^(i) binom(h;k) f^(j) ↦ e^(i/p) binom(h;k/p) f^(j/p)` (zero unless `p`
/// divides all three). The result is certified against the structure
/// constants, which checks that the map is multiplicative.
pub fn frobenius_twist(rep: &Representation, target: Arc<StructureConstantAlgebra>) -> Result<Representation> {
    let p = target.p();
    let src = &rep.algebra;
    let action = target
        .basis()
        .iter()
        .map(|m| {
            if m.i % p == 0 && m.k % p == 0 && m.j % p == 0 {
                let img = DividedPowerMonomial::new(m.i / p, m.k / p, m.j / p);
                src.index_of(img).map(|i| rep.action[i].clone()).ok_or_else(|| {
                    Error::Precondition(format!("{img:?} is missing from {}", src.label()))
                })
            } else {
                Ok(Matrix::zeros(rep.dim, rep.dim))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let out = Representation { algebra: target, dim: rep.dim, action };
    out.check_structure(Some(STRUCTURE_SAMPLES), DEFAULT_SEED)
        .map_err(|e| Error::Certification(format!("Frobenius map is not an algebra map: {e}")))?;
    Ok(out)
}

/// `L_r(λ)` for `λ = Σ d_i p^i`, as a Steinberg tensor product.
pub fn simple_lr(digits: &[u32], di_r: Arc<StructureConstantAlgebra>) -> Result<Representation> {
    let p = di_r.p();
    if digits.iter().any(|&d| d >= p) {
        return Err(Error::Precondition(format!("digits {digits:?} out of range for p = {p}")));
    }
    let bound = di_r.bounds()[0] as usize;
    if bound != (p as usize).pow(digits.len() as u32) {
        return Err(Error::Precondition("digit count does not match the level".into()));
    }
    RationalModule::steinberg_product(digits, bound, di_r.field()).representation(di_r)
}

/// All digit strings of length `r`, ordered by `Σ d_i p^i`.
pub fn digit_strings(p: u32, r: u32) -> Vec<Vec<u32>> {
    (0..p.pow(r))
        .map(|mut n| {
            (0..r)
                .map(|_| {
                    let d = n % p;
                    n /= p;
                    d
                })
                .collect()
        })
        .collect()
}

/// A `Di(G_r)`-simple `P = L_r(λ)` with its extension `P̃ = L_{r+1}(λ)`
/// (digit string padded by `0`).
#[derive(Clone, Debug)]
pub struct ExtendedSimple {
    pub digits: Vec<u32>,
    pub base: Representation,
    pub extension: Representation,
}

impl ExtendedSimple {
    pub fn new(digits: &[u32], di_r: Arc<StructureConstantAlgebra>, di_r1: Arc<StructureConstantAlgebra>) -> Result<Self> {
        let bound = di_r1.bounds()[0] as usize;
        let module = RationalModule::steinberg_product(digits, bound, di_r1.field());
        let extension = module.representation(di_r1)?;
        let base = extension.restrict(&di_r)?;
        base.check_structure(Some(STRUCTURE_SAMPLES), DEFAULT_SEED)?;
        Ok(ExtendedSimple { digits: digits.to_vec(), base, extension })
    }

    pub fn dim(&self) -> usize {
        self.base.dim
    }

    pub fn highest_weight(&self, p: u32) -> u32 {
        self.digits.iter().rev().fold(0, |acc, &d| acc * p + d)
    }
}

/// `Λ_χ = {λ : λ^p − λ = χ(h)^p}`, sorted by element code. Requires `χ(e) = 0`
/// and a field containing all `p` solutions.
pub fn lambda_chi(chi: &PCharacter, field: &Field) -> Result<Vec<TorusWeight>> {
    if !chi.e.is_zero() {
        return Err(Error::Precondition("chi(e) must vanish; conjugate first".into()));
    }
    let mut roots = field.artin_schreier_roots(field.frobenius(chi.h));
    if roots.len() != field.p() as usize {
        return Err(Error::Precondition(format!(
            "only {} of the {} weights lie in F_{}; enlarge the field",
            roots.len(),
            field.p(),
            field.order()
        )));
    }
    roots.sort_unstable();
    Ok(roots
        .into_iter()
        .map(|value| TorusWeight { value, restricted_label: field.to_prime(value) })
        .collect())
}

/// The dot action of the nontrivial Weyl group element, `λ ↦ −λ − 2`.
pub fn dot_action(lambda: Fe, field: &Field) -> Fe {
    field.sub(field.neg(lambda), field.from_int(2))
}

/// `Z_χ(λ)` with basis `v_j = f^j v_0`, `j < p`: `e v_0 = 0`, `h v_0 = λ v_0`,
/// and `f v_{p−1} = χ(f)^p v_0`.
pub fn baby_verma(lambda: &TorusWeight, ug: Arc<StructureConstantAlgebra>) -> Result<Representation> {
    let field = ug.field_arc();
    let chi = ug.kind().chi().ok_or_else(|| Error::Precondition("expected U_chi(g)".into()))?;
    if !chi.e.is_zero() {
        return Err(Error::Precondition("chi(e) must vanish".into()));
    }
    let f = &*field;
    let lam = lambda.value;
    if f.sub(f.frobenius(lam), lam) != f.frobenius(chi.h) {
        return Err(Error::Precondition("weight is not in Lambda_chi".into()));
    }
    let p = f.p() as usize;
    let mut me = Matrix::zeros(p, p);
    let mut mh = Matrix::zeros(p, p);
    let mut mf = Matrix::zeros(p, p);
    for j in 0..p {
        let jf = f.from_int(j as i64);
        mh.set(j, j, f.sub(lam, f.mul(f.from_int(2), jf)));
        if j > 0 {
            // e f^j v = j (λ − j + 1) f^{j−1} v
            let c = f.mul(jf, f.add(f.sub(lam, jf), Fe::ONE));
            me.set(j - 1, j, c);
        }
        if j + 1 < p {
            mf.set(j + 1, j, Fe::ONE);
        } else {
            mf.set(0, j, f.frobenius(chi.f));
        }
    }
    let rep = Representation::from_generators(ug, &[me, mh, mf]);
    rep.check_structure(None, DEFAULT_SEED)?;
    Ok(rep)
}

/// Everything needed to work with one `χ` at one level: the field, the
/// conjugation into `χ(e) = 0` form, `Λ_χ`, the algebras and the
/// `Di(G_r)`-simples with their extensions.
#[derive(Debug)]
pub struct ChiContext {
    pub p: u32,
    pub r: u32,
    pub field: Arc<Field>,
    /// The input character, embedded into `field`.
    pub chi_input: PCharacter,
    /// `g` with `g·χ_input = chi`.
    pub conjugator: Matrix,
    pub chi: PCharacter,
    pub class: ChiClass,
    pub lambdas: Vec<TorusWeight>,
    pub ur: Arc<StructureConstantAlgebra>,
    pub ug: Arc<StructureConstantAlgebra>,
    pub di_r: Arc<StructureConstantAlgebra>,
    pub di_r1: Arc<StructureConstantAlgebra>,
    pub simples: Vec<ExtendedSimple>,
}

/// The smallest extension `F_{p^{km}}`, `m ∈ {1, 2, p, 2p}`, over which `χ`
/// conjugates into `χ(e) = 0` form and `Λ_χ` has `p` elements.
pub fn setup_field(chi: &PCharacter, base: &Arc<Field>) -> Result<(Arc<Field>, PCharacter, Matrix, PCharacter)> {
    let p = base.p();
    for m in [1, 2, p, 2 * p] {
        let Ok(field) = Field::new(p, base.k() * m) else { continue };
        let Some(map) = base.embedding_into(&field) else { continue };
        let chi_b = chi.embed(&map);
        let Some((g, std)) = conjugate_to_standard(&chi_b, &field) else { continue };
        if field.artin_schreier_roots(field.frobenius(std.h)).len() == p as usize {
            return Ok((field, chi_b, g, std));
        }
    }
    Err(Error::Precondition(format!(
        "no supported extension of F_{} splits chi = {}",
        base.order(),
        chi.format(base)
    )))
}

impl ChiContext {
    pub fn new(r: u32, chi: &PCharacter, base: &Arc<Field>) -> Result<ChiContext> {
        let (field, chi_input, conjugator, std) = setup_field(chi, base)?;
        let p = field.p();
        let lambdas = lambda_chi(&std, &field)?;
        let ur = Arc::new(build_u_r_chi(r, std, field.clone())?);
        let ug = Arc::new(build_u_chi_g(std, field.clone())?);
        let di_r = Arc::new(build_di_gr(r, field.clone())?);
        let di_r1 = Arc::new(build_di_gr(r + 1, field.clone())?);
        let simples = digit_strings(p, r)
            .iter()
            .map(|d| ExtendedSimple::new(d, di_r.clone(), di_r1.clone()))
            .collect::<Result<Vec<_>>>()?;
        Ok(ChiContext {
            p,
            r,
            class: classify_pchar(&std, &field),
            field,
            chi_input,
            conjugator,
            chi: std,
            lambdas,
            ur,
            ug,
            di_r,
            di_r1,
            simples,
        })
    }

    /// Index of the Steinberg module `St_r` (all digits `p − 1`).
    pub fn steinberg_index(&self) -> usize {
        self.simples.len() - 1
    }

    fn level_r_index(&self, alg: &StructureConstantAlgebra, slot: usize) -> usize {
        let pr = self.p.pow(self.r);
        let mut e = [0u32; 3];
        e[slot] = pr;
        alg.index_of(DividedPowerMonomial::new(e[0], e[1], e[2])).expect("level-r generator")
    }

    /// `P̃ ⊗ N` over `U^[r]_χ`: generators of level `< r` act as `ρ_P̃(g) ⊗ 1`,
    /// level-`r` generators `x^(p^r)` as `ρ_P̃(x^(p^r)) ⊗ 1 + 1 ⊗ ρ_N(x)`. The
    /// rest of the basis acts through generator words; the result is certified
    /// on every generator-by-basis product, which determines all structure
    /// constants.
    pub fn build_tensor_module(&self, ptilde: &ExtendedSimple, n: &Representation) -> Result<Representation> {
        if n.algebra.label() != self.ug.label() {
            return Err(Error::Precondition("N must be a module over this U_chi(g)".into()));
        }
        let f = &*self.field;
        let pr = self.p.pow(self.r);
        let dp = ptilde.dim();
        let id_n = Matrix::identity(n.dim);
        let id_p = Matrix::identity(dp);
        let gens = self
            .ur
            .generators()
            .iter()
            .map(|&g| {
                let m = self.ur.basis()[g];
                let idx = self.di_r1.index_of(m).expect("generator lies in Di(G_{r+1})");
                let mut out = ptilde.extension.action[idx].kron(&id_n, f);
                let top = [m.i, m.k, m.j].iter().position(|&x| x == pr);
                if let Some(slot) = top {
                    let ng = &n.action[n.algebra.generators()[slot]];
                    out = out.add(&id_p.kron(ng, f), f);
                }
                out
            })
            .collect::<Vec<_>>();
        let rep = Representation::from_generators(self.ur.clone(), &gens);
        rep.check_structure(Some(STRUCTURE_SAMPLES), DEFAULT_SEED)?;
        Ok(rep)
    }

    /// `Z^r_χ(P, λ) = P̃ ⊗ Z_χ(λ)`.
    pub fn teenage_verma(&self, p_index: usize, lambda_index: usize) -> Result<Representation> {
        let z = baby_verma(&self.lambdas[lambda_index], self.ug.clone())?;
        self.build_tensor_module(&self.simples[p_index], &z)
    }

    pub fn baby_verma(&self, lambda_index: usize) -> Result<Representation> {
        baby_verma(&self.lambdas[lambda_index], self.ug.clone())
    }

    /// `Hom_{G_r}(P, M)` with `(x·φ) = ρ_M(x^(p^r)) φ − φ ρ_P̃(x^(p^r))` for
    /// `x = e, h, f`, certified as a `U_χ(sl₂)`-module: the sl₂ and p-th power
    /// relations are checked as matrix identities, then against every
    /// structure constant.
    pub fn hom_g_action(&self, m: &Representation, ptilde: &ExtendedSimple) -> Result<Representation> {
        let f = &*self.field;
        let res = m.restrict(&self.di_r)?;
        let hom = hom_space(&ptilde.base, &res)?;
        let d = hom.dim();
        if d == 0 {
            return Err(Error::NotIsotypic("Hom(P, M) is zero".into()));
        }
        let mut ech = Echelon::new(m.dim * ptilde.dim());
        for phi in &hom.basis {
            ech.insert(&phi.data, f);
        }
        let mut mats = Vec::with_capacity(3);
        for slot in 0..3 {
            let xm = &m.action[self.level_r_index(&self.ur, slot)];
            let xp = &ptilde.extension.action[self.level_r_index(&self.di_r1, slot)];
            let mut a = Matrix::zeros(d, d);
            for (col, phi) in hom.basis.iter().enumerate() {
                let img = xm.mul(phi, f).sub(&phi.mul(xp, f), f);
                let coords = ech.coordinates(&img.data, f).ok_or_else(|| {
                    Error::Certification("x·φ left the space of Di(G_r)-maps".into())
                })?;
                for (row, c) in coords.into_iter().enumerate() {
                    a.set(row, col, c);
                }
            }
            mats.push(a);
        }
        certify_restricted_action(&mats[0], &mats[1], &mats[2], &self.chi, f)?;
        let n = Representation::from_generators(self.ug.clone(), &mats);
        n.check_structure(None, DEFAULT_SEED)
            .map_err(|e| Error::Certification(format!("Hom-space action: {e}")))?;
        Ok(n)
    }

    /// `Ψ_χ(M) = (P, Hom_{G_r}(P, M))` for irreducible `M`.
    pub fn psi_chi(&self, m: &Representation) -> Result<SteinbergPair> {
        let f = &*self.field;
        let res = m.restrict(&self.di_r)?;
        let mut found = None;
        for (i, s) in self.simples.iter().enumerate() {
            let hom = hom_space(&s.base, &res)?;
            if hom.dim() == 0 {
                continue;
            }
            if found.is_some() {
                return Err(Error::NotIsotypic("two distinct Di(G_r)-simples occur in M".into()));
            }
            if hom.dim() * s.dim() != m.dim {
                return Err(Error::NotIsotypic(format!(
                    "dim Hom(P, M) = {} but dim M / dim P = {}/{}",
                    hom.dim(),
                    m.dim,
                    s.dim()
                )));
            }
            let mut ech = Echelon::new(m.dim);
            for phi in &hom.basis {
                for j in 0..phi.cols {
                    let col: Vec<Fe> = (0..phi.rows).map(|r| phi.get(r, j)).collect();
                    ech.insert(&col, f);
                }
            }
            if ech.dim() != m.dim {
                return Err(Error::NotIsotypic("images of Hom(P, M) do not span M".into()));
            }
            found = Some(i);
        }
        let pi = found.ok_or_else(|| Error::NotIsotypic("no Di(G_r)-simple maps into M".into()))?;
        let n = self.hom_g_action(m, &self.simples[pi])?;
        Ok(SteinbergPair { p_index: pi, p_digits: self.simples[pi].digits.clone(), p_dim: self.simples[pi].dim(), n, m: m.clone() })
    }

    /// Irreducible quotients of `z`: composition factors `S` with
    /// `Hom(z, S) ≠ 0`, up to isomorphism, paired with `dim Hom(z, S)` and
    /// `dim End(S)`.
    pub fn irreducible_quotients(&self, z: &Representation, seed: u64) -> Result<Vec<(Representation, usize, usize)>> {
        let mut out = Vec::new();
        for fac in composition_factors(z, seed)? {
            let d = hom_space(z, &fac.module)?.dim();
            if d > 0 {
                let end = hom_space(&fac.module, &fac.module)?.dim();
                out.push((fac.module, d, end));
            }
        }
        Ok(out)
    }

    /// Irreducible `U_χ(sl₂)`-modules, as quotients of baby Verma modules.
    pub fn irreducibles_ug(&self, seed: u64) -> Result<Vec<(usize, Representation)>> {
        let mut classes: Vec<(usize, Representation)> = Vec::new();
        for li in 0..self.lambdas.len() {
            let z = self.baby_verma(li)?;
            for (s, _, _) in self.irreducible_quotients(&z, seed)? {
                if !contains_iso(classes.iter().map(|c| &c.1), &s, seed)? {
                    classes.push((li, s));
                }
            }
        }
        Ok(classes)
    }

    /// Irreducible `U^[r]_χ`-modules, collected as irreducible quotients of
    /// all teenage Verma modules and decomposed through `Ψ_χ`.
    pub fn enumerate_irreducibles(&self, seed: u64) -> Result<Enumeration> {
        let ug_classes = self.irreducibles_ug(seed)?;
        let mut classes: Vec<IrreducibleClass> = Vec::new();
        for pi in 0..self.simples.len() {
            for li in 0..self.lambdas.len() {
                let z = self.teenage_verma(pi, li)?;
                for (s, _, _) in self.irreducible_quotients(&z, seed)? {
                    if contains_iso(classes.iter().map(|c| &c.pair.m), &s, seed)? {
                        continue;
                    }
                    let pair = self.psi_chi(&s)?;
                    let n_class = position_iso(ug_classes.iter().map(|c| &c.1), &pair.n, seed)?
                        .ok_or_else(|| Error::Certification("Hom-space module is not a known U_chi(g)-simple".into()))?;
                    classes.push(IrreducibleClass { witness: (pi, li), n_class, pair });
                }
            }
        }
        let expected = self.simples.len() * ug_classes.len();
        Ok(Enumeration { count_matches: classes.len() == expected, expected, ug_classes, classes })
    }

    /// The unique irreducible quotient of `z`, when there is one.
    pub fn simple_head(&self, z: &Representation, seed: u64) -> Result<Head> {
        let q = self.irreducible_quotients(z, seed)?;
        match q.as_slice() {
            [(s, hom, end)] if hom == end => Ok(Head::Unique(s.clone())),
            _ => Ok(Head::NotUnique { classes: q.len(), multiplicities: q.iter().map(|x| x.1 / x.2.max(1)).collect() }),
        }
    }

    /// Central characters of an irreducible `M` with pair `(P, N)`.
    pub fn central_character_check(&self, pair: &SteinbergPair, center: &CenterData) -> Result<CentralReport> {
        let f = &*self.field;
        let m = &pair.m;
        let mut fingerprint = Vec::with_capacity(center.full_center_basis.len());
        for z in &center.full_center_basis {
            let mut acc = Matrix::zeros(m.dim, m.dim);
            for (b, &c) in z.iter().enumerate() {
                if !c.is_zero() {
                    acc.add_scaled(&m.action[b], c, f);
                }
            }
            let s = acc
                .as_scalar()
                .ok_or_else(|| Error::Certification("a central element acts by a non-scalar".into()))?;
            fingerprint.push(s);
        }
        let p = self.p as u64;
        let p_scalar = |x: &Matrix, shift: bool| -> Result<Fe> {
            let mut y = x.pow(p, f);
            if shift {
                y = y.sub(x, f);
            }
            y.as_scalar().ok_or_else(|| Error::Certification("p-th power is not scalar".into()))
        };
        let mut on_m = [Fe::ZERO; 3];
        let mut on_n = [Fe::ZERO; 3];
        for slot in 0..3 {
            on_m[slot] = p_scalar(&m.action[self.level_r_index(&self.ur, slot)], slot == 1)?;
            on_n[slot] = p_scalar(&pair.n.action[self.ug.generators()[slot]], slot == 1)?;
        }
        let chi_values = [f.frobenius(self.chi.e), f.frobenius(self.chi.h), f.frobenius(self.chi.f)];
        let max_dim = (self.p as usize).pow(self.r + 1);
        Ok(CentralReport {
            fingerprint,
            p_center_on_m: on_m,
            p_center_on_n: on_n,
            diagram_commutes: on_m == on_n && on_m == chi_values,
            pseudo_azumaya: m.dim == max_dim,
        })
    }
}

/// `E, H, F` satisfy `[E,F] = H`, `[H,E] = 2E`, `[H,F] = −2F`,
/// `E^p = χ(e)^p`, `F^p = χ(f)^p`, `H^p − H = χ(h)^p`.
pub fn certify_restricted_action(e: &Matrix, h: &Matrix, fm: &Matrix, chi: &PCharacter, f: &Field) -> Result<()> {
    let n = e.rows;
    let br = |a: &Matrix, b: &Matrix| a.mul(b, f).sub(&b.mul(a, f), f);
    let fail = |what: &str| Err(Error::Certification(format!("relation {what} fails")));
    if br(e, fm) != *h {
        return fail("[e,f] = h");
    }
    if br(h, e) != e.scale(f.from_int(2), f) {
        return fail("[h,e] = 2e");
    }
    if br(h, fm) != fm.scale(f.from_int(-2), f) {
        return fail("[h,f] = -2f");
    }
    let p = f.p() as u64;
    if e.pow(p, f) != Matrix::scalar(n, f.frobenius(chi.e)) {
        return fail("e^p = chi(e)^p");
    }
    if fm.pow(p, f) != Matrix::scalar(n, f.frobenius(chi.f)) {
        return fail("f^p = chi(f)^p");
    }
    if h.pow(p, f).sub(h, f) != Matrix::scalar(n, f.frobenius(chi.h)) {
        return fail("h^p - h = chi(h)^p");
    }
    Ok(())
}

fn position_iso<'a>(
    it: impl Iterator<Item = &'a Representation>,
    s: &Representation,
    seed: u64,
) -> Result<Option<usize>> {
    for (i, x) in it.enumerate() {
        if are_isomorphic(x, s, seed)? {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

fn contains_iso<'a>(it: impl Iterator<Item = &'a Representation>, s: &Representation, seed: u64) -> Result<bool> {
    Ok(position_iso(it, s, seed)?.is_some())
}

/// `(P, N, M)` with `M ≅ P̃ ⊗ N`.
#[derive(Clone, Debug)]
pub struct SteinbergPair {
    pub p_index: usize,
    pub p_digits: Vec<u32>,
    pub p_dim: usize,
    pub n: Representation,
    pub m: Representation,
}

#[derive(Clone, Debug)]
pub struct IrreducibleClass {
    /// `(P index, λ index)` of a teenage Verma module having this quotient.
    pub witness: (usize, usize),
    /// Index of `N` among the enumerated `U_χ(sl₂)`-simples.
    pub n_class: usize,
    pub pair: SteinbergPair,
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    pub ug_classes: Vec<(usize, Representation)>,
    pub classes: Vec<IrreducibleClass>,
    pub expected: usize,
    pub count_matches: bool,
}

impl Enumeration {
    pub fn dims(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.pair.m.dim).collect()
    }
}

#[derive(Clone, Debug)]
pub enum Head {
    Unique(Representation),
    NotUnique { classes: usize, multiplicities: Vec<usize> },
}

#[derive(Clone, Debug, Serialize)]
pub struct CentralReport {
    pub fingerprint: Vec<Fe>,
    pub p_center_on_m: [Fe; 3],
    pub p_center_on_n: [Fe; 3],
    pub diagram_commutes: bool,
    pub pseudo_azumaya: bool,
}

/// Dimensions of the irreducible modules of `alg` up to isomorphism, read off
/// a chop of the regular module. Practical only for small algebras.
pub fn irreducible_dimensions(alg: Arc<StructureConstantAlgebra>, seed: u64) -> Result<Vec<usize>> {
    let reg = Representation::regular(alg);
    let mut dims: Vec<usize> = composition_factors(&reg, seed)?.iter().map(|f| f.module.dim).collect();
    dims.sort_unstable();
    Ok(dims)
}

/// Irreducibility of a module, mapping an inconclusive result to an error.
pub fn certified_irreducible(rep: &Representation, seed: u64) -> Result<bool> {
    Ok(is_irreducible(rep, seed)?.is_irreducible())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn di(r: u32, p: u32) -> Arc<StructureConstantAlgebra> {
        Arc::new(build_di_gr(r, Field::prime(p).unwrap()).unwrap())
    }

    #[test]
    fn l1_dimensions_and_steinberg() {
        for p in [2u32, 3, 5] {
            let d = di(1, p);
            for l in 0..p {
                let m = simple_l1(l, d.clone()).unwrap();
                assert_eq!(m.dim, l as usize + 1);
                assert!(certified_irreducible(&m, 1).unwrap());
            }
            assert!(simple_l1(p, d).is_err());
        }
    }

    #[test]
    fn twist_kills_low_torus_generator() {
        let d1 = di(1, 3);
        let d2 = di(2, 3);
        let l = simple_l1(1, d1).unwrap();
        let t = frobenius_twist(&l, d2.clone()).unwrap();
        assert_eq!(t.dim, 2);
        let h1 = d2.index_of(DividedPowerMonomial::new(0, 1, 0)).unwrap();
        assert!(t.action[h1].is_zero());
        let triv = frobenius_twist(&simple_l1(0, di(1, 3)).unwrap(), d2).unwrap();
        assert_eq!(triv.dim, 1);
    }

    #[test]
    fn lr_classes_pairwise_distinct() {
        for (p, r) in [(2u32, 1u32), (2, 2), (3, 1), (3, 2)] {
            let d = di(r, p);
            let mods: Vec<_> = digit_strings(p, r).iter().map(|s| simple_lr(s, d.clone()).unwrap()).collect();
            assert_eq!(mods.len(), p.pow(r) as usize);
            for (i, a) in mods.iter().enumerate() {
                assert!(certified_irreducible(a, 7).unwrap());
                for b in &mods[i + 1..] {
                    assert!(!are_isomorphic(a, b, 7).unwrap());
                }
            }
            assert_eq!(mods.last().unwrap().dim, p.pow(r) as usize);
        }
        let m = simple_lr(&[1, 1], di(2, 3)).unwrap();
        assert_eq!(m.dim, 4);
    }

    #[test]
    fn lambda_chi_counts() {
        let f2 = Field::prime(2).unwrap();
        let chi = PCharacter::new(Fe(0), Fe(1), Fe(0));
        assert!(lambda_chi(&chi, &f2).is_err());
        let f4 = Field::new(2, 2).unwrap();
        let l = lambda_chi(&chi, &f4).unwrap();
        assert_eq!(l.len(), 2);
        assert!(l.iter().all(|w| w.restricted_label.is_none()));
        let f3 = Field::prime(3).unwrap();
        let zero = lambda_chi(&PCharacter::ZERO, &f3).unwrap();
        assert_eq!(zero.iter().map(|w| w.restricted_label).collect::<Vec<_>>(), vec![Some(0), Some(1), Some(2)]);
    }

    #[test]
    fn dot_action_is_involution() {
        let f = Field::prime(5).unwrap();
        for x in f.elements() {
            assert_eq!(dot_action(dot_action(x, &f), &f), x);
        }
    }

    #[test]
    fn baby_verma_steinberg_irreducible() {
        let f = Field::prime(3).unwrap();
        let ug = Arc::new(build_u_chi_g(PCharacter::ZERO, f).unwrap());
        let lam = TorusWeight { value: Fe(2), restricted_label: Some(2) };
        let z = baby_verma(&lam, ug.clone()).unwrap();
        assert!(certified_irreducible(&z, 3).unwrap());
        let lam1 = TorusWeight { value: Fe(1), restricted_label: Some(1) };
        assert!(!certified_irreducible(&baby_verma(&lam1, ug).unwrap(), 3).unwrap());
    }
}
