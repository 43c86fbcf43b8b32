//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion.
//!
//! Expected values (dimension formulas, Steinberg dimension products, dot-orbit
//! partitions, Frobenius twists of the character) are computed here from first
//! principles rather than read back from the library.

use std::collections::BTreeSet;
use std::io::Write;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hyperdef::dist::oracle_structure_constants;
use hyperdef::hyper::{build_di_gr, build_u_r_chi, center, conjugate_pchar, DividedPowerMonomial, PCharacter};
use hyperdef::linalg::{are_isomorphic, is_irreducible, Matrix, Representation, DEFAULT_SEED};
use hyperdef::repthy::{certify_restricted_action, irreducible_dimensions, setup_field, ChiContext, Enumeration, Head};
use hyperdef::verify::CheckParams;
use hyperdef::{Fe, Field};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn lib<T>(r: hyperdef::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Criteria that cannot hold as literally stated, with the reason. The run
/// still evaluates them and prints FAIL; the test only requires that the
/// failure is exactly the documented one.
const UNATTAINABLE: &[(u32, &str)] = &[(
    7,
    "at p = 2 the trace form on sl2 is degenerate; every nonzero chi with chi(h) = 0 has a \
     1-dimensional U_chi(sl2)-module (e, h, f acting by chi(e), 0, chi(f)), so p does not divide dim N",
)];

const CELLS: [(u32, u32); 4] = [(2, 0), (2, 1), (3, 0), (3, 1)];

struct ChiRun {
    p: u32,
    r: u32,
    chi: PCharacter,
    base: Arc<Field>,
    ctx: ChiContext,
    en: Enumeration,
}

fn grid_runs() -> Vec<ChiRun> {
    let mut out = Vec::new();
    for (p, r) in CELLS {
        let base = Field::prime(p).unwrap();
        for chi in CheckParams::default_cell(p, r).chis {
            let ctx = ChiContext::new(r, &chi, &base).unwrap();
            let en = ctx.enumerate_irreducibles(DEFAULT_SEED).unwrap();
            out.push(ChiRun { p, r, chi, base: base.clone(), ctx, en });
        }
    }
    out
}

fn steinberg_digits(p: u32, r: u32) -> Vec<u32> {
    vec![p - 1; r as usize]
}

/// Divided-power element `x^(n)` in slot `0 = e`, `1 = binom(h; n)`, `2 = f`.
fn dp_index(alg: &hyperdef::hyper::StructureConstantAlgebra, slot: usize, n: u32) -> usize {
    let mut e = [0u32; 3];
    e[slot] = n;
    alg.index_of(DividedPowerMonomial::new(e[0], e[1], e[2])).unwrap()
}

/// `x^p` for `e, f` and `x^p − x` for the torus part, required to be scalar.
fn p_scalar(m: &Matrix, slot: usize, f: &Field) -> Option<Fe> {
    let mut y = m.pow(u64::from(f.p()), f);
    if slot == 1 {
        y = y.sub(m, f);
    }
    y.as_scalar()
}

fn frob(x: Fe, f: &Field) -> Fe {
    f.pow(x, u64::from(f.p()))
}

fn chi_slots(chi: &PCharacter) -> [Fe; 3] {
    [chi.e, chi.h, chi.f]
}

// ---------------------------------------------------------------------------

fn c1_dimension() -> Outcome {
    let mut checked = 0;
    for (p, r) in [(2u32, 0u32), (2, 1), (3, 0), (3, 1), (5, 0)] {
        let f = Field::prime(p).unwrap();
        let want = (p as usize).pow(3 * (r + 1));
        for chi in CheckParams::default_cell(p, r).chis {
            let alg = lib(build_u_r_chi(r, chi, f.clone()))?;
            ensure!(alg.dim() == want, "p={p} r={r} chi={}: dim {} != {want}", chi.format(&f), alg.dim());
            lib(alg.check_unit())?;
            let exhaustive = want <= 27;
            let triples = lib(alg.check_associativity(if exhaustive { None } else { Some(100_000) }, DEFAULT_SEED))?;
            if exhaustive {
                ensure!(triples == want.pow(3), "p={p} r={r}: {triples} triples, expected all {}", want.pow(3));
            } else {
                ensure!(triples >= 100_000, "p={p} r={r}: only {triples} sampled triples");
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} algebras with dim p^(3(r+1)), unital and associative"))
}

fn c2_oracle() -> Outcome {
    let mut n = 0;
    for p in [2u32, 3] {
        let f = Field::prime(p).unwrap();
        for r in 0..=2u32 {
            let dim = (p as usize).pow(3 * r);
            if dim > 729 {
                continue;
            }
            let alg = lib(build_di_gr(r, f.clone()))?;
            ensure!(alg.dim() == dim, "Di(G_{r}) at p={p} has dim {}", alg.dim());
            let mut oracle = lib(oracle_structure_constants(r, &f))?;
            oracle.sort_unstable_by_key(|t| (t.0, t.1, t.2));
            let mine: Vec<_> = alg.structure_tensor().collect();
            ensure!(mine == oracle, "Di(G_{r}) at p={p} differs from the oracle tensor");
            n += 1;
        }
        for r in 0..=2u32 {
            if (p as usize).pow(3 * (r + 1)) > 729 {
                continue;
            }
            let u0 = lib(build_u_r_chi(r, PCharacter::ZERO, f.clone()))?;
            let d1 = lib(build_di_gr(r + 1, f.clone()))?;
            ensure!(u0.structure_tensor().eq(d1.structure_tensor()), "U^[{r}]_0 != Di(G_{}) at p={p}", r + 1);
            n += 1;
        }
    }
    Ok(format!("{n} tensor comparisons exact"))
}

fn c3_centrality() -> Outcome {
    let mut n = 0;
    for (p, r) in CELLS.into_iter().chain([(5, 0)]) {
        let f = Field::prime(p).unwrap();
        let top = p.pow(r);
        for chi in CheckParams::default_cell(p, r).chis {
            let alg = Arc::new(lib(build_u_r_chi(r, chi, f.clone()))?);
            let reg = Representation::regular(alg.clone());
            let want = chi_slots(&chi).map(|x| frob(x, &f));
            for slot in 0..3 {
                let g = dp_index(&alg, slot, top);
                let s = p_scalar(&reg.action[g], slot, &f)
                    .ok_or_else(|| format!("p={p} r={r}: p-th power in slot {slot} is not central scalar"))?;
                ensure!(s == want[slot], "p={p} r={r} chi={}: slot {slot} gives {} not chi^p", chi.format(&f), f.format(s));
            }
            if alg.dim() <= 729 {
                let c = lib(center(&alg))?;
                ensure!(c.p_center_scalars == Some(want), "center data disagrees at p={p} r={r}");
            }
            n += 1;
        }
    }
    Ok(format!("p-th power relations reduce to chi^p on all three generators in {n} algebras"))
}

fn c4_steinberg_zero() -> Outcome {
    let f = Field::prime(3).unwrap();
    let ctx = lib(ChiContext::new(1, &PCharacter::ZERO, &f))?;
    let en = lib(ctx.enumerate_irreducibles(DEFAULT_SEED))?;
    ensure!(en.classes.len() == 9, "{} classes, expected 9", en.classes.len());
    let mut got = en.dims();
    got.sort_unstable();
    let mut want: Vec<usize> = (0..3).flat_map(|a| (0..3).map(move |b| (a + 1) * (b + 1))).collect();
    want.sort_unstable();
    ensure!(got == want, "dims {got:?}, expected {want:?}");
    for (i, c) in en.classes.iter().enumerate() {
        let back = lib(ctx.psi_chi(&c.pair.m))?;
        ensure!(back.p_index == c.pair.p_index, "class {i}: Psi gives a different P");
        ensure!(lib(are_isomorphic(&back.n, &c.pair.n, DEFAULT_SEED))?, "class {i}: Psi(M) has the wrong N");
        let phi = lib(ctx.build_tensor_module(&ctx.simples[back.p_index], &back.n))?;
        ensure!(lib(are_isomorphic(&phi, &c.pair.m, DEFAULT_SEED))?, "class {i}: Phi(Psi(M)) != M");
        for (j, d) in en.classes.iter().enumerate().skip(i + 1) {
            ensure!(!lib(are_isomorphic(&c.pair.m, &d.pair.m, DEFAULT_SEED))?, "classes {i} and {j} coincide");
        }
    }
    Ok(format!("9 classes with dims {got:?}; Psi and Phi are mutually inverse"))
}

fn c5_regular() -> Outcome {
    let f = Field::prime(3).unwrap();
    // regular semisimple: h^2 + 4ef != 0
    let ss = PCharacter::new(Fe::ZERO, Fe::ONE, Fe::ZERO);
    let ctx = lib(ChiContext::new(1, &ss, &f))?;
    ensure!(ctx.lambdas.len() == 3, "|Lambda_chi| = {}", ctx.lambdas.len());
    let mut vermas = Vec::new();
    for pi in 0..ctx.simples.len() {
        for li in 0..ctx.lambdas.len() {
            let z = lib(ctx.teenage_verma(pi, li))?;
            ensure!(z.dim == 3 * ctx.simples[pi].dim(), "Z(P{pi}, l{li}) has dim {}", z.dim);
            ensure!(lib(is_irreducible(&z, DEFAULT_SEED))?.is_irreducible(), "Z(P{pi}, l{li}) is reducible");
            vermas.push(z);
        }
    }
    ensure!(vermas.len() == 9, "{} teenage Vermas", vermas.len());
    for a in 0..vermas.len() {
        for b in a + 1..vermas.len() {
            ensure!(!lib(are_isomorphic(&vermas[a], &vermas[b], DEFAULT_SEED))?, "semisimple: Vermas {a} and {b} isomorphic");
        }
    }
    let mut ss_dims: Vec<usize> = vermas.iter().map(|z| z.dim).collect();
    ss_dims.sort_unstable();

    // regular nilpotent: chi(e) = chi(h) = 0, chi(f) != 0
    let nil = PCharacter::new(Fe::ZERO, Fe::ZERO, Fe::ONE);
    let ctx = lib(ChiContext::new(1, &nil, &f))?;
    let fl = &*ctx.field;
    let lam: Vec<Fe> = ctx.lambdas.iter().map(|l| l.value).collect();
    let related = |a: usize, b: usize| lam[a] == lam[b] || lam[a] == fl.sub(fl.neg(lam[b]), fl.from_int(2));
    let mut orbits: BTreeSet<Vec<usize>> = BTreeSet::new();
    for a in 0..lam.len() {
        orbits.insert((0..lam.len()).filter(|&b| related(a, b)).collect());
    }
    ensure!(orbits.len() == 2, "{} dot-orbits on Lambda_chi, expected 2", orbits.len());
    let mut heads: Vec<(usize, usize, Representation)> = Vec::new();
    let mut zs = Vec::new();
    for pi in 0..ctx.simples.len() {
        for li in 0..lam.len() {
            let z = lib(ctx.teenage_verma(pi, li))?;
            match lib(ctx.simple_head(&z, DEFAULT_SEED))? {
                Head::Unique(h) => heads.push((pi, li, h)),
                Head::NotUnique { classes, .. } => return Err(format!("nilpotent: Z(P{pi}, l{li}) has {classes} head classes")),
            }
            zs.push((pi, li, z));
        }
    }
    for (i, (pa, la, za)) in zs.iter().enumerate() {
        for (pb, lb, zb) in zs.iter().skip(i + 1) {
            let want = pa == pb && related(*la, *lb);
            ensure!(
                lib(are_isomorphic(za, zb, DEFAULT_SEED))? == want,
                "nilpotent: Z(P{pa}, l{la}) ~ Z(P{pb}, l{lb}) should be {want}"
            );
        }
    }
    let mut reps: Vec<&Representation> = Vec::new();
    for (_, _, h) in &heads {
        let mut seen = false;
        for r in &reps {
            if lib(are_isomorphic(r, h, DEFAULT_SEED))? {
                seen = true;
                break;
            }
        }
        if !seen {
            reps.push(h);
        }
    }
    ensure!(reps.len() == 6, "{} head classes at regular nilpotent chi, expected 6", reps.len());
    let en = lib(ctx.enumerate_irreducibles(DEFAULT_SEED))?;
    ensure!(en.classes.len() == 6, "enumeration finds {} classes", en.classes.len());
    Ok(format!("semisimple: 9 irreducible, pairwise distinct, dims {ss_dims:?}; nilpotent: unique heads, 2 lambda-classes, 6 classes"))
}

fn c6_maxdim(runs: &[ChiRun]) -> Outcome {
    let mut notes = Vec::new();
    for (p, r) in CELLS {
        let target = (p as usize).pow(r + 1);
        let cell: Vec<&ChiRun> = runs.iter().filter(|x| x.p == p && x.r == r).collect();
        let max = cell.iter().flat_map(|x| x.en.dims()).max().unwrap_or(0);
        ensure!(max == target, "p={p} r={r}: max dim {max} != {target}");
        let st = steinberg_digits(p, r);
        for x in &cell {
            for c in &x.en.classes {
                if c.pair.m.dim == target {
                    ensure!(c.pair.p_digits == st, "p={p} r={r}: max-dim module with P digits {:?}", c.pair.p_digits);
                }
            }
            if x.ctx.class.regular {
                ensure!(
                    x.en.dims().contains(&target),
                    "p={p} r={r}: regular chi={} does not attain {target}",
                    x.chi.format(&x.base)
                );
            }
        }
        let zero_attains = cell.iter().any(|x| x.chi.is_zero() && x.en.dims().contains(&target));
        notes.push(format!("p={p} r={r} max {target}{}", if zero_attains { " (also at chi=0)" } else { "" }));
    }
    Ok(notes.join("; "))
}

fn c7_premet(runs: &[ChiRun]) -> Outcome {
    let mut violations = Vec::new();
    let mut n = 0;
    for x in runs.iter().filter(|x| !x.chi.is_zero()) {
        for c in &x.en.classes {
            n += 1;
            if c.pair.n.dim % x.p as usize != 0 {
                violations.push(format!("p={} r={} chi={} dim N={}", x.p, x.r, x.chi.format(&x.base), c.pair.n.dim));
            }
        }
    }
    if violations.is_empty() {
        Ok(format!("p | dim N for {n} pairs"))
    } else {
        Err(format!("{} of {n} pairs violate p | dim N: {}", violations.len(), violations.join(", ")))
    }
}

fn c8_hom_action(runs: &[ChiRun]) -> Outcome {
    let mut n = 0;
    for x in runs {
        let f = &*x.ctx.field;
        for (i, c) in x.en.classes.iter().enumerate() {
            let hom = lib(x.ctx.hom_g_action(&c.pair.m, &x.ctx.simples[c.pair.p_index]))?;
            ensure!(hom.dim == c.pair.n.dim, "p={} r={} class {i}: Hom has dim {}", x.p, x.r, hom.dim);
            let g = hom.gens();
            lib(certify_restricted_action(g[0], g[1], g[2], &x.ctx.chi, f))?;
            n += 1;
        }
    }
    Ok(format!("{n} Hom-spaces certified as U_chi(sl2)-modules"))
}

fn c9_verma(runs: &[ChiRun]) -> Outcome {
    let (mut pairs, mut witnessed) = (0, 0);
    for x in runs {
        let ctx = &x.ctx;
        for pi in 0..ctx.simples.len() {
            for li in 0..ctx.lambdas.len() {
                let z = lib(ctx.teenage_verma(pi, li))?;
                let hom = lib(ctx.hom_g_action(&z, &ctx.simples[pi]))?;
                let baby = lib(ctx.baby_verma(li))?;
                ensure!(lib(are_isomorphic(&hom, &baby, DEFAULT_SEED))?, "p={} r={}: Hom(P{pi}, Z) != Z(l{li})", x.p, x.r);
                // heads of Z^r correspond to P~ (x) heads of Z
                let top = lib(ctx.irreducible_quotients(&z, DEFAULT_SEED))?;
                let low = lib(ctx.irreducible_quotients(&baby, DEFAULT_SEED))?;
                ensure!(top.len() == low.len(), "p={} r={}: head counts differ at (P{pi}, l{li})", x.p, x.r);
                for (q, _, _) in &low {
                    let lifted = lib(ctx.build_tensor_module(&ctx.simples[pi], q))?;
                    let mut found = false;
                    for (t, _, _) in &top {
                        if lib(are_isomorphic(t, &lifted, DEFAULT_SEED))? {
                            found = true;
                            break;
                        }
                    }
                    ensure!(found, "p={} r={}: a head of Z(l{li}) does not lift to a head of Z^r(P{pi})", x.p, x.r);
                }
                pairs += 1;
            }
        }
        for (i, c) in x.en.classes.iter().enumerate() {
            let (pi, li) = c.witness;
            let z = lib(ctx.teenage_verma(pi, li))?;
            let mut found = false;
            for (q, _, _) in lib(ctx.irreducible_quotients(&z, DEFAULT_SEED))? {
                if lib(are_isomorphic(&q, &c.pair.m, DEFAULT_SEED))? {
                    found = true;
                    break;
                }
            }
            ensure!(found, "p={} r={}: class {i} is not a quotient of its witness", x.p, x.r);
            witnessed += 1;
        }
    }
    Ok(format!("{pairs} (P, lambda) pairs; {witnessed} classes witnessed as teenage Verma quotients"))
}

fn c10_central(runs: &[ChiRun]) -> Outcome {
    let mut n = 0;
    for x in runs {
        let ctx = &x.ctx;
        let f = &*ctx.field;
        let cd = lib(center(&ctx.ur))?;
        let top = x.p.pow(x.r);
        let want = chi_slots(&ctx.chi).map(|c| frob(c, f));
        for (i, c) in x.en.classes.iter().enumerate() {
            let rep = lib(ctx.central_character_check(&c.pair, &cd))?;
            ensure!(rep.diagram_commutes, "p={} r={} class {i}: diagram does not commute", x.p, x.r);
            for slot in 0..3 {
                let on_m = p_scalar(&c.pair.m.action[dp_index(&ctx.ur, slot, top)], slot, f);
                let on_n = p_scalar(&c.pair.n.action[dp_index(&ctx.ug, slot, 1)], slot, f);
                ensure!(on_m == Some(want[slot]) && on_n == on_m, "p={} r={} class {i}: slot {slot} mismatch", x.p, x.r);
            }
            let max = c.pair.m.dim == (x.p as usize).pow(x.r + 1);
            ensure!(rep.pseudo_azumaya == max, "p={} r={} class {i}: flag inconsistent with dimension", x.p, x.r);
            if max {
                ensure!(c.pair.p_digits == steinberg_digits(x.p, x.r), "flagged module is not over St_r");
            }
            n += 1;
        }
    }
    Ok(format!("{n} irreducibles with commuting central-character diagram"))
}

fn random_sl2(rng: &mut ChaCha8Rng, f: &Field) -> Matrix {
    let q = f.order();
    loop {
        let a = Fe(rng.gen_range(1..q) as u16);
        let b = Fe(rng.gen_range(0..q) as u16);
        let c = Fe(rng.gen_range(0..q) as u16);
        let d = f.div(f.add(Fe::ONE, f.mul(b, c)), a).unwrap();
        let g = Matrix::from_rows(&[vec![a, b], vec![c, d]]);
        if f.sub(f.mul(a, d), f.mul(b, c)) == Fe::ONE {
            return g;
        }
    }
}

fn c11_orbit() -> Outcome {
    let mut n = 0;
    for p in [2u32, 3] {
        let f = Field::prime(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED ^ 0x0b17);
        let dims = |c: &PCharacter| -> Result<Vec<usize>, String> {
            let (big, c_big, _, _) = lib(setup_field(c, &f))?;
            let alg = lib(build_u_r_chi(0, c_big, big))?;
            lib(irreducible_dimensions(Arc::new(alg), DEFAULT_SEED))
        };
        for chi in CheckParams::default_cell(p, 0).chis {
            let mine = dims(&chi)?;
            for _ in 0..3 {
                let g = random_sl2(&mut rng, &f);
                let gchi = lib(conjugate_pchar(&chi, &g, &f))?;
                if p > 2 {
                    // h^2 + 4ef is conjugation invariant
                    let inv = |c: &PCharacter| f.add(f.mul(c.h, c.h), f.mul(f.from_int(4), f.mul(c.e, c.f)));
                    ensure!(inv(&gchi) == inv(&chi), "p={p}: conjugation changed the invariant");
                }
                let theirs = dims(&gchi)?;
                ensure!(theirs == mine, "p={p} chi={} vs g.chi={}: {mine:?} != {theirs:?}", chi.format(&f), gchi.format(&f));
                n += 1;
            }
        }
    }
    Ok(format!("{n} conjugate pairs with equal dimension multisets"))
}

#[test]
fn acceptance() {
    let runs = grid_runs();
    let results: Vec<(u32, &str, Outcome)> = vec![
        (1, "PBW dimension and associativity", c1_dimension()),
        (2, "oracle equivalence", c2_oracle()),
        (3, "centrality of p-th power elements", c3_centrality()),
        (4, "Steinberg bijection at chi = 0", c4_steinberg_zero()),
        (5, "regular chi classification", c5_regular()),
        (6, "maximal dimension", c6_maxdim(&runs)),
        (7, "divisibility of dim N by p", c7_premet(&runs)),
        (8, "p-character of Hom-spaces", c8_hom_action(&runs)),
        (9, "Verma correspondence", c9_verma(&runs)),
        (10, "central-character diagram", c10_central(&runs)),
        (11, "orbit invariance", c11_orbit()),
    ];
    // written straight to stderr so the lines survive the harness's output capture
    let mut err = std::io::stderr().lock();
    let mut unexpected = Vec::new();
    for (n, name, res) in &results {
        match res {
            Ok(detail) => writeln!(err, "criterion {n:>2} PASS  {name}: {detail}").unwrap(),
            Err(why) => {
                writeln!(err, "criterion {n:>2} FAIL  {name}: {why}").unwrap();
                match UNATTAINABLE.iter().find(|u| u.0 == *n) {
                    Some((_, reason)) => writeln!(err, "             known: {reason}").unwrap(),
                    None => unexpected.push(*n),
                }
            }
        }
    }
    assert!(unexpected.is_empty(), "criteria failed: {unexpected:?}");
    // a documented failure must stay confined to its stated cause
    if let Some((_, Err(why))) = results.iter().find(|r| r.0 == 7).map(|r| (r.0, &r.2)) {
        let detail = why.split_once(": ").map_or("", |x| x.1);
        assert!(detail.split(", ").all(|v| v.starts_with("p=2 ")), "divisibility fails beyond p = 2: {why}");
    }
}
