//! Maximal vectors, composition series, the simple-module catalog and
//! isomorphism tests for restricted modules given as matrices.

mod module;

pub use module::*;

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cartan::{n_generators, RestrictedAlgebra, Weight};
use crate::dividedpowers::{apply_derivation, DPElement};
use crate::induction::{build_induced, z_label, InducedModule};
use crate::primefield::{Echelon, FpMatrix};
use crate::Error;

/// Upper bound on projective points tried when every basis vector of a
/// maximal-vector space generates the whole module.
const MAX_PROJECTIVE_POINTS: u64 = 20_000;

/// Generator sets of Ĥ: `nil` generates N, `spin` generates Ĥ modulo the torus.
pub fn hhat_acting(alg: &RestrictedAlgebra) -> Acting<'_> {
    let nil: Vec<Vec<u32>> = n_generators(alg).into_iter().map(|(_, c)| c).collect();
    let mut spin = nil.clone();
    for name in ["Y", "dx'", "dy"] {
        spin.push(alg.named_coords(name).expect("named element of Ĥ"));
    }
    Acting { alg, spin, nil }
}

/// Generator sets of W(1;1) with basis slot j playing `x^(j)∂`: maximality
/// means annihilation by `x^(j)∂` for `j >= 2`.
pub fn witt_acting(w: &RestrictedAlgebra) -> Acting<'_> {
    let nil: Vec<Vec<u32>> = (2..w.dim()).map(|j| w.unit(j)).collect();
    let spin: Vec<Vec<u32>> = (0..w.dim()).filter(|&j| j != 1).map(|j| w.unit(j)).collect();
    Acting { alg: w, spin, nil }
}

/// Named weights ω₀ = (p-1,p-1), ω₁ = (0,p-1), ω₂ = (0,0).
pub fn omega(p: u32, k: u8) -> Weight {
    match k {
        0 => (p - 1, p - 1),
        1 => (0, p - 1),
        _ => (0, 0),
    }
}

/// `λ₁ - λ₂ = 1` or λ one of ω₀, ω₁, ω₂.
pub fn is_exceptional(p: u32, w: Weight) -> bool {
    (w.0 + p - w.1) % p == 1 || (0..3).any(|k| omega(p, k) == w)
}

/// Reduces signed weight components into `[0, p)`.
pub fn normalize(p: u32, w: (i64, i64)) -> Weight {
    let p = p as i64;
    (w.0.rem_euclid(p) as u32, w.1.rem_euclid(p) as u32)
}

/// Representative of the isomorphism class labelled by `w`, using
/// `L(a,b) ≅ L(a,b+1)` when `a - b = 1` and `(a,b) ≠ ω₁`.
pub fn canonical_class(p: u32, w: Weight) -> Weight {
    if (w.0 + p - w.1) % p == 1 && w != omega(p, 1) {
        (w.0, (w.1 + 1) % p)
    } else {
        w
    }
}

/// A proper submodule found by spinning a maximal vector.
pub struct ProperSpin {
    pub weight: Weight,
    pub vector: Vec<u32>,
    pub span: Subspace,
}

fn projective_points(p: u32, d: usize) -> Result<Vec<Vec<u32>>, Error> {
    let count = (0..d as u32).map(|k| (p as u64).pow(k)).sum::<u64>();
    if count > MAX_PROJECTIVE_POINTS {
        return Err(Error::InvalidInput(format!(
            "maximal-vector space of dimension {d} is too large to enumerate"
        )));
    }
    let mut out = Vec::new();
    for lead in 0..d {
        let free = d - lead - 1;
        for n in 0..(p as u64).pow(free as u32) {
            let mut v = vec![0; d];
            v[lead] = 1;
            let mut r = n;
            for slot in v.iter_mut().skip(lead + 1) {
                *slot = (r % p as u64) as u32;
                r /= p as u64;
            }
            out.push(v);
        }
    }
    Ok(out)
}

fn combine_basis(m: &MatrixModule, basis: &[Vec<u32>], c: &[u32]) -> Vec<u32> {
    let f = m.field();
    let mut v = vec![0; m.dim()];
    for (b, &k) in basis.iter().zip(c) {
        if k == 0 {
            continue;
        }
        for (x, &y) in v.iter_mut().zip(b) {
            *x = f.mul_add(*x, k, y);
        }
    }
    v
}

/// Searches for a maximal vector that generates a proper nonzero submodule.
/// Weights are visited in decreasing lexicographic order. Every basis vector
/// of a maximal-vector space is tried first; if all of them generate `M`, the
/// remaining projective points of that space are tried as well, since a
/// proper submodule may be generated by a combination only.
pub fn find_proper(m: &MatrixModule, gens: &PreparedGens) -> Result<Option<ProperSpin>, Error> {
    let maxv = m.maximal_vectors(gens);
    if maxv.is_empty() {
        return Err(Error::Invariant(format!("{} has no maximal vector", m.label())));
    }
    for (w, basis) in maxv.iter().rev() {
        for v in basis {
            let s = m.spin(gens, std::slice::from_ref(v))?;
            if s.dim() < m.dim() {
                return Ok(Some(ProperSpin { weight: *w, vector: v.clone(), span: s }));
            }
        }
        if basis.len() >= 2 {
            for c in projective_points(m.p(), basis.len())? {
                if c.iter().filter(|&&x| x != 0).count() < 2 {
                    continue;
                }
                let v = combine_basis(m, basis, &c);
                let s = m.spin(gens, std::slice::from_ref(&v))?;
                if s.dim() < m.dim() {
                    return Ok(Some(ProperSpin { weight: *w, vector: v, span: s }));
                }
            }
        }
    }
    Ok(None)
}

/// As [`find_proper`] but visiting weights in random order and trying random
/// combinations first.
pub fn find_proper_random<R: Rng>(
    m: &MatrixModule,
    gens: &PreparedGens,
    rng: &mut R,
) -> Result<Option<ProperSpin>, Error> {
    let mut maxv = m.maximal_vectors(gens);
    if maxv.is_empty() {
        return Err(Error::Invariant(format!("{} has no maximal vector", m.label())));
    }
    maxv.shuffle(rng);
    for (w, basis) in &maxv {
        for _ in 0..4 {
            let c: Vec<u32> = (0..basis.len()).map(|_| rng.gen_range(0..m.p())).collect();
            if c.iter().all(|&x| x == 0) {
                continue;
            }
            let v = combine_basis(m, basis, &c);
            let s = m.spin(gens, std::slice::from_ref(&v))?;
            if s.dim() < m.dim() {
                return Ok(Some(ProperSpin { weight: *w, vector: v, span: s }));
            }
        }
    }
    find_proper(m, gens)
}

/// Whether `m` is nonzero and every maximal vector generates it.
pub fn is_simple(m: &MatrixModule, acting: &Acting) -> Result<bool, Error> {
    if m.dim() == 0 {
        return Ok(false);
    }
    let gens = PreparedGens::new(acting, m);
    Ok(find_proper(m, &gens)?.is_none())
}

/// Weights carrying a maximal vector.
pub fn max_weights(m: &MatrixModule, acting: &Acting) -> Vec<Weight> {
    let gens = PreparedGens::new(acting, m);
    m.maximal_vectors(&gens).into_iter().map(|(w, _)| w).collect()
}

/// One composition factor: its weight label and dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Factor {
    pub weight: Weight,
    pub dim: usize,
}

/// Factors listed from the bottom of the series to the top.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompositionSeries {
    pub factors: Vec<Factor>,
}

impl CompositionSeries {
    pub fn total(&self) -> usize {
        self.factors.iter().map(|f| f.dim).sum()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.dim).collect()
    }

    /// Factors sorted by weight, then dimension.
    pub fn sorted(&self) -> Vec<Factor> {
        let mut v = self.factors.clone();
        v.sort();
        v
    }

    /// Multiset of isomorphism classes, with aliases resolved.
    pub fn classes(&self, p: u32) -> BTreeMap<Factor, usize> {
        let mut out = BTreeMap::new();
        for f in &self.factors {
            let key = Factor { weight: canonical_class(p, f.weight), dim: f.dim };
            *out.entry(key).or_insert(0) += 1;
        }
        out
    }
}

fn label_simple(m: &MatrixModule, gens: &PreparedGens, hint: Option<Weight>) -> Weight {
    let ws: Vec<Weight> = m.maximal_vectors(gens).into_iter().map(|(w, _)| w).collect();
    match hint {
        Some(h) if ws.contains(&h) => h,
        _ => *ws.last().expect("simple module has a maximal vector"),
    }
}

/// Called on each simple factor with the label hint inherited from the
/// maximal vector that produced it.
type OnSimple<'f> = dyn FnMut(&MatrixModule, &PreparedGens, Option<Weight>) + 'f;

fn series_rec<R: Rng>(
    m: &MatrixModule,
    acting: &Acting,
    hint: Option<Weight>,
    rng: &mut Option<&mut R>,
    on_simple: &mut OnSimple<'_>,
) -> Result<(), Error> {
    if m.dim() == 0 {
        return Ok(());
    }
    let gens = PreparedGens::new(acting, m);
    let found = match rng {
        Some(r) => find_proper_random(m, &gens, *r)?,
        None => find_proper(m, &gens)?,
    };
    match found {
        None => {
            on_simple(m, &gens, hint);
            Ok(())
        }
        Some(ps) => {
            let sub = m.submodule(acting.alg, &ps.span, format!("sub of {}", m.label()))?;
            let quo = m.quotient(acting.alg, &ps.span, format!("quotient of {}", m.label()))?;
            series_rec(&sub, acting, Some(ps.weight), rng, on_simple)?;
            series_rec(&quo, acting, hint, rng, on_simple)
        }
    }
}

/// Composition series by repeatedly splitting off the submodule generated by
/// a maximal vector. A simple factor is labelled by `hint` when that weight
/// carries a maximal vector of the factor, and otherwise by its largest
/// maximal-vector weight.
pub fn composition_series(
    m: &MatrixModule,
    acting: &Acting,
    hint: Option<Weight>,
) -> Result<CompositionSeries, Error> {
    let mut out = Vec::new();
    let mut push = |s: &MatrixModule, g: &PreparedGens, h: Option<Weight>| {
        out.push(Factor { weight: label_simple(s, g, h), dim: s.dim() });
    };
    series_rec::<rand_chacha::ChaCha8Rng>(m, acting, hint, &mut None, &mut push)?;
    Ok(CompositionSeries { factors: out })
}

/// As [`composition_series`] with randomized maximal-vector choices.
pub fn composition_series_random<R: Rng>(
    m: &MatrixModule,
    acting: &Acting,
    hint: Option<Weight>,
    rng: &mut R,
) -> Result<CompositionSeries, Error> {
    let mut out = Vec::new();
    let mut push = |s: &MatrixModule, g: &PreparedGens, h: Option<Weight>| {
        out.push(Factor { weight: label_simple(s, g, h), dim: s.dim() });
    };
    series_rec(m, acting, hint, &mut Some(rng), &mut push)?;
    Ok(CompositionSeries { factors: out })
}

/// Dimension and sorted maximal-vector weights of a module: for simple
/// modules this determines the isomorphism class in every case considered.
pub type Signature = (usize, Vec<Weight>);

/// Signatures of the composition factors, bottom to top.
pub fn factor_signatures(m: &MatrixModule, acting: &Acting) -> Result<Vec<Signature>, Error> {
    let mut out = Vec::new();
    let mut push = |s: &MatrixModule, g: &PreparedGens, _: Option<Weight>| {
        let ws = s.maximal_vectors(g).into_iter().map(|(w, _)| w).collect();
        out.push((s.dim(), ws));
    };
    series_rec::<rand_chacha::ChaCha8Rng>(m, acting, None, &mut None, &mut push)?;
    Ok(out)
}

/// Composition series of `Z(λ)`, labelled with λ at the top.
pub fn induced_series(alg: &RestrictedAlgebra, lambda: Weight) -> Result<CompositionSeries, Error> {
    let z = build_induced(alg, lambda)?;
    composition_series(&z.module, &hhat_acting(alg), Some(z.lambda()))
}

/// Simple quotient of a module with a unique maximal submodule, such as an
/// induced module: quotients by proper spins until nothing proper is left.
pub fn head(m: &MatrixModule, acting: &Acting) -> Result<MatrixModule, Error> {
    let mut cur = m.clone();
    loop {
        let gens = PreparedGens::new(acting, &cur);
        match find_proper(&cur, &gens)? {
            None => return Ok(cur),
            Some(ps) => {
                let label = format!("head of {}", m.label());
                cur = cur.quotient(acting.alg, &ps.span, label)?;
            }
        }
    }
}

/// A class of simple restricted Ĥ-modules.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub weight: Weight,
    pub dim: usize,
    pub aliases: Vec<Weight>,
    pub realization: String,
}

/// The simple restricted Ĥ-modules `L(λ)`, computed as heads of all `Z(λ)`
/// and grouped by dimension together with maximal-vector weights. Each class
/// is represented by the λ with `λ₁ - λ₂ ≠ 1` or `λ = ω₁`.
pub fn catalog(alg: &RestrictedAlgebra) -> Result<Vec<CatalogEntry>, Error> {
    let p = alg.p();
    let weights: Vec<Weight> = (0..p).flat_map(|a| (0..p).map(move |b| (a, b))).collect();
    let acting = hhat_acting(alg);
    let heads: Vec<(Weight, usize, Vec<Weight>, bool)> = weights
        .par_iter()
        .map(|&w| {
            let z = build_induced(alg, w)?;
            let h = head(&z.module, &acting)?;
            let simple = h.dim() == z.module.dim();
            Ok((w, h.dim(), max_weights(&h, &acting), simple))
        })
        .collect::<Result<_, Error>>()?;
    let mut groups: BTreeMap<(usize, Vec<Weight>), Vec<(Weight, bool)>> = BTreeMap::new();
    for (w, dim, mw, simple) in heads {
        groups.entry((dim, mw)).or_default().push((w, simple));
    }
    let mut out = Vec::new();
    for ((dim, _), members) in groups {
        let reps: Vec<&(Weight, bool)> = members
            .iter()
            .filter(|(w, _)| (w.0 + p - w.1) % p != 1 || *w == omega(p, 1))
            .collect();
        if reps.len() != 1 {
            return Err(Error::Invariant(format!(
                "class of dimension {dim} has {} representatives among {:?}",
                reps.len(),
                members.iter().map(|m| m.0).collect::<Vec<_>>()
            )));
        }
        let (rep, simple) = *reps[0];
        let zl = z_label(rep);
        out.push(CatalogEntry {
            weight: rep,
            dim,
            aliases: members.iter().map(|m| m.0).filter(|w| *w != rep).collect(),
            realization: if simple { zl } else { format!("head of {zl}") },
        });
    }
    out.sort_by_key(|e| e.weight);
    Ok(out)
}

/// The one-dimensional trivial module, with PBW tag `1 ⊗ m`.
pub fn trivial_module(alg: &RestrictedAlgebra) -> Result<MatrixModule, Error> {
    let actions = (0..alg.dim()).map(|_| SparseMat::zero(1, 1)).collect();
    let tags = PbwTags { base_dim: 1, entries: vec![PbwTag { exps: vec![0, 0], i: 1 }] };
    MatrixModule::new(alg.p(), "L(0,0)", vec![(0, 0)], actions, Some(tags))
}

/// An explicit realization of the simple module `L(λ)` for a catalog
/// representative λ: `Z(λ)` itself when λ is not exceptional, the trivial
/// module for ω₂, `Z(ω₀)` modulo its top vector, and the submodule of `Z(ω₂)`
/// generated by `∂_y ⊗ m` for ω₁.
pub fn realize_simple(alg: &RestrictedAlgebra, lambda: Weight) -> Result<MatrixModule, Error> {
    let p = alg.p();
    let acting = hhat_acting(alg);
    let label = format!("L({},{})", lambda.0, lambda.1);
    if lambda == omega(p, 2) {
        return trivial_module(alg);
    }
    if lambda == omega(p, 0) {
        let z = build_induced(alg, lambda)?;
        let gens = PreparedGens::new(&acting, &z.module);
        let top = unit(z.module.dim(), z.index(p - 1, p - 1, 1));
        let s = z.module.spin(&gens, &[top])?;
        return z.module.quotient(alg, &s, label);
    }
    if lambda == omega(p, 1) {
        let z = build_induced(alg, omega(p, 2))?;
        let gens = PreparedGens::new(&acting, &z.module);
        let v = unit(z.module.dim(), z.index(0, 1, 1));
        let s = z.module.spin(&gens, &[v])?;
        return z.module.submodule(alg, &s, label);
    }
    if is_exceptional(p, lambda) {
        return Err(Error::InvalidInput(format!("{lambda:?} is not a catalog representative")));
    }
    Ok(build_induced(alg, lambda)?.module.with_label(label))
}

/// Dimension and maximal-vector weights agree. Both inputs must be simple.
pub fn iso_test(m1: &MatrixModule, m2: &MatrixModule, acting: &Acting) -> Result<bool, Error> {
    for m in [m1, m2] {
        if !is_simple(m, acting)? {
            return Err(Error::InvalidInput(format!("{} is not simple", m.label())));
        }
    }
    Ok(m1.dim() == m2.dim() && max_weights(m1, acting) == max_weights(m2, acting))
}

/// A nonzero module map `T: M1 → M2`, found by spinning a maximal vector `u`
/// of `M1` alongside every candidate image in the maximal-vector space of `M2`
/// of the same weight. Requires `M1` to be generated by `u`, which holds when
/// `M1` is simple. The result is checked against every basis action.
pub fn intertwiner(m1: &MatrixModule, m2: &MatrixModule, acting: &Acting) -> Result<Option<FpMatrix>, Error> {
    let f = m1.field();
    let g1 = PreparedGens::new(acting, m1);
    let g2 = PreparedGens::new(acting, m2);
    let Some((w, u)) = m1.maximal_vectors(&g1).into_iter().next() else {
        return Err(Error::Invariant(format!("{} has no maximal vector", m1.label())));
    };
    let Some((_, cands)) = m2.maximal_vectors(&g2).into_iter().find(|(w2, _)| *w2 == w) else {
        return Ok(None);
    };
    let (d1, d2, k) = (m1.dim(), m2.dim(), cands.len());
    let mut tracker = Echelon::new(f, 2 * d1);
    let mut xs: Vec<Vec<u32>> = Vec::new();
    let mut ys: Vec<Vec<Vec<u32>>> = Vec::new();
    let mut constraints = Echelon::new(f, k);
    let mut queue = std::collections::VecDeque::new();
    queue.push_back((u[0].clone(), cands.clone()));
    while let Some((x, y)) = queue.pop_front() {
        if xs.len() == d1 && x.iter().all(|&c| c == 0) && y.iter().all(|v| v.iter().all(|&c| c == 0)) {
            continue;
        }
        let idx = xs.len();
        let mut row = x.clone();
        row.extend(std::iter::repeat_n(0, d1));
        if idx < d1 {
            row[d1 + idx] = 1;
        }
        let mut red = row.clone();
        tracker.reduce(&mut red);
        if red[..d1].iter().all(|&c| c == 0) {
            // The tracking part t records x + Σ t_j x_j = 0, so T must satisfy
            // y + Σ t_j y_j = 0.
            let mut rel = vec![vec![0u32; d2]; k];
            for (kk, rk) in rel.iter_mut().enumerate() {
                for (r, &yv) in rk.iter_mut().zip(&y[kk]) {
                    *r = yv;
                }
            }
            for (j, yj) in ys.iter().enumerate() {
                let t = red[d1 + j];
                if t == 0 {
                    continue;
                }
                for kk in 0..k {
                    for (r, &yv) in rel[kk].iter_mut().zip(&yj[kk]) {
                        *r = f.mul_add(*r, t, yv);
                    }
                }
            }
            for i in 0..d2 {
                let eq: Vec<u32> = (0..k).map(|kk| rel[kk][i]).collect();
                constraints.insert(&eq);
            }
            continue;
        }
        tracker.insert(&row);
        xs.push(x.clone());
        ys.push(y.clone());
        for ((_, a1), (_, a2)) in g1.spin.iter().zip(&g2.spin) {
            let ny: Vec<Vec<u32>> = y.iter().map(|v| a2.apply(f, v)).collect();
            queue.push_back((a1.apply(f, &x), ny));
        }
    }
    if xs.len() != d1 {
        return Err(Error::Invariant(format!("{} is not generated by its maximal vector", m1.label())));
    }
    let mut cons = FpMatrix::zeros(f, constraints.rank().max(1), k);
    for (i, r) in constraints.rows().iter().enumerate() {
        for (j, &c) in r.iter().enumerate() {
            cons.set(i, j, c);
        }
    }
    let sols = cons.nullspace();
    let Some(c) = sols.first() else {
        return Ok(None);
    };
    // Columns T(x_j); T = Y X^{-1}.
    let mut aug = FpMatrix::zeros(f, d1, 2 * d1);
    for (j, x) in xs.iter().enumerate() {
        for i in 0..d1 {
            aug.set(i, j, x[i]);
        }
        aug.set(j, d1 + j, 1);
    }
    let (r, rank, _) = aug.rref();
    if rank < d1 {
        return Err(Error::Invariant("spun vectors are dependent".into()));
    }
    let mut xinv = FpMatrix::zeros(f, d1, d1);
    for i in 0..d1 {
        for j in 0..d1 {
            xinv.set(i, j, r.get(i, d1 + j));
        }
    }
    let mut ymat = FpMatrix::zeros(f, d2, d1);
    for (j, yj) in ys.iter().enumerate() {
        for i in 0..d2 {
            let mut s = 0;
            for kk in 0..k {
                s = f.mul_add(s, c[kk], yj[kk][i]);
            }
            ymat.set(i, j, s);
        }
    }
    let t = ymat.mul(&xinv);
    for b in 0..acting.alg.dim() {
        let r1 = m1.action(b).to_dense(f);
        let r2 = m2.action(b).to_dense(f);
        if t.mul(&r1) != r2.mul(&t) {
            return Err(Error::Invariant(format!(
                "intertwiner fails to commute with {}",
                acting.alg.label(b)
            )));
        }
    }
    Ok(Some(t))
}

/// Simple modules of equal dimension are isomorphic exactly when a nonzero
/// module map exists between them.
pub fn iso_by_intertwiner(m1: &MatrixModule, m2: &MatrixModule, acting: &Acting) -> Result<bool, Error> {
    if m1.dim() != m2.dim() {
        return Ok(false);
    }
    Ok(match intertwiner(m1, m2, acting)? {
        Some(t) => t.rank() == m1.dim(),
        None => false,
    })
}

/// `O(2;(1,1))/(k·1)` with Ĥ acting by derivations. Basis `x^(a)y^(b)`,
/// `(a,b) ≠ (0,0)`, of weight `(a,b)`.
pub fn build_o_module(alg: &RestrictedAlgebra) -> Result<MatrixModule, Error> {
    let p = alg.p();
    let monos: Vec<(u32, u32)> =
        (0..p).flat_map(|a| (0..p).map(move |b| (a, b))).filter(|&m| m != (0, 0)).collect();
    let index = |a: u32, b: u32| (a * p + b) as usize - 1;
    let mut actions = Vec::with_capacity(alg.dim());
    for d in alg.basis() {
        let mut cols = Vec::with_capacity(monos.len());
        for &(a, b) in &monos {
            let img = apply_derivation(d, &DPElement::monomial(p, a, b, 1));
            let mut col: Vec<(u32, u32)> = img
                .terms()
                .filter(|(m, _)| (m.a, m.b) != (0, 0))
                .map(|(m, c)| (index(m.a, m.b) as u32, c))
                .collect();
            col.sort_unstable();
            cols.push(col);
        }
        actions.push(SparseMat { rows: monos.len(), cols });
    }
    MatrixModule::new(p, "O/(k·1)", monos.clone(), actions, None)
}

/// Shapes of maximal vectors in induced modules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Shape {
    /// `1 ⊗ m_{n+1}`.
    Top,
    /// `∂_y ⊗ m` when `n = 0`.
    DyTop,
    /// `∂_x'^{p-1} ∂_y^{p-1} ⊗ m` when `n = 0`.
    Corner,
    /// `∂_x' ⊗ m_2 + ∂_y ⊗ m_1` when `n = 1`.
    V,
    /// `∂_x'∂_y ⊗ m_2 + ∂_y² ⊗ m_1` when `n = 1`.
    W,
}

fn shape_vector(z: &InducedModule, s: Shape) -> Option<Vec<u32>> {
    let p = z.p();
    let n = z.n();
    let mut v = vec![0; z.module.dim()];
    match (s, n) {
        (Shape::Top, _) => v[z.index(0, 0, n + 1)] = 1,
        (Shape::DyTop, 0) => v[z.index(0, 1, 1)] = 1,
        (Shape::Corner, 0) => v[z.index(p - 1, p - 1, 1)] = 1,
        (Shape::V, 1) => {
            v[z.index(1, 0, 2)] = 1;
            v[z.index(0, 1, 1)] = 1;
        }
        (Shape::W, 1) => {
            v[z.index(1, 1, 2)] = 1;
            v[z.index(0, 2, 1)] = 1;
        }
        _ => return None,
    }
    Some(v)
}

/// The allowed shape a vector is proportional to, if any.
pub fn classify_shape(z: &InducedModule, v: &[u32]) -> Option<Shape> {
    let f = z.module.field();
    let allowed: &[Shape] = match z.n() {
        0 => &[Shape::Top, Shape::DyTop, Shape::Corner],
        1 => &[Shape::Top, Shape::V, Shape::W],
        _ => &[Shape::Top],
    };
    let lead = v.iter().position(|&x| x != 0)?;
    for &s in allowed {
        let sv = shape_vector(z, s)?;
        if sv[lead] == 0 {
            continue;
        }
        let k = f.mul(v[lead], f.inv(sv[lead]).expect("nonzero"));
        if sv.iter().zip(v).all(|(&a, &b)| f.mul(a, k) == b) {
            return Some(s);
        }
    }
    None
}

/// Maximal-vector spaces of `Z(λ)`, each classified: `Err` if some space is
/// not one-dimensional or its vector has no allowed shape.
pub fn maximal_shapes(z: &InducedModule, acting: &Acting) -> Result<Vec<(Weight, Shape)>, Error> {
    let gens = PreparedGens::new(acting, &z.module);
    let mut out = Vec::new();
    for (w, basis) in z.module.maximal_vectors(&gens) {
        if basis.len() != 1 {
            return Err(Error::Invariant(format!(
                "{}: maximal space of weight {w:?} has dimension {}",
                z.module.label(),
                basis.len()
            )));
        }
        let s = classify_shape(z, &basis[0]).ok_or_else(|| {
            Error::Invariant(format!("{}: maximal vector of weight {w:?} has no known shape", z.module.label()))
        })?;
        out.push((w, s));
    }
    Ok(out)
}

/// Submodules generated by single maximal vectors: their weights, dimensions
/// and the inclusions among them (pairs `(i, j)` with `S_i ⊂ S_j`).
pub struct SpinLattice {
    pub nodes: Vec<(Weight, usize)>,
    pub inclusions: Vec<(usize, usize)>,
}

pub fn maximal_spin_lattice(m: &MatrixModule, acting: &Acting) -> Result<SpinLattice, Error> {
    let gens = PreparedGens::new(acting, m);
    let mut spans: Vec<(Weight, Subspace)> = Vec::new();
    for (w, basis) in m.maximal_vectors(&gens) {
        let points = projective_points(m.p(), basis.len())?;
        for c in points {
            let v = combine_basis(m, &basis, &c);
            spans.push((w, m.spin(&gens, std::slice::from_ref(&v))?));
        }
    }
    let contains = |a: &Subspace, b: &Subspace| {
        b.spaces.iter().all(|(w, e)| {
            e.rows().iter().all(|r| a.spaces.get(w).is_some_and(|ea| ea.contains(r)))
        })
    };
    // Merge equal spans.
    let mut uniq: Vec<(Weight, Subspace)> = Vec::new();
    for (w, s) in spans {
        if !uniq.iter().any(|(_, u)| u.dim() == s.dim() && contains(u, &s)) {
            uniq.push((w, s));
        }
    }
    let mut inclusions = Vec::new();
    for i in 0..uniq.len() {
        for j in 0..uniq.len() {
            if i != j && uniq[i].1.dim() < uniq[j].1.dim() && contains(&uniq[j].1, &uniq[i].1) {
                inclusions.push((i, j));
            }
        }
    }
    Ok(SpinLattice { nodes: uniq.iter().map(|(w, s)| (*w, s.dim())).collect(), inclusions })
}

/// Weights sorted into a set, for comparisons.
pub fn weight_set(ws: &[Weight]) -> BTreeSet<Weight> {
    ws.iter().copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::build_hhat;

    fn w(p: u32, a: i64, b: i64) -> Weight {
        normalize(p, (a, b))
    }

    #[test]
    fn exceptional_weights() {
        let p = 5;
        let count = (0..p).flat_map(|a| (0..p).map(move |b| (a, b))).filter(|&x| is_exceptional(p, x)).count();
        // p weights with a - b = 1, plus ω₀, ω₂ (ω₁ already has a - b = 1).
        assert_eq!(count, p as usize + 2);
    }

    #[test]
    fn spin_examples() {
        let p = 5;
        let alg = build_hhat(p).unwrap();
        let acting = hhat_acting(&alg);
        let z = build_induced(&alg, (0, 0)).unwrap();
        let gens = PreparedGens::new(&acting, &z.module);
        let v = unit(25, z.index(0, 1, 1));
        assert_eq!(z.module.spin(&gens, &[v]).unwrap().dim(), 24);
        let z = build_induced(&alg, (4, 4)).unwrap();
        let gens = PreparedGens::new(&acting, &z.module);
        let v = unit(25, z.index(4, 4, 1));
        assert_eq!(z.module.spin(&gens, &[v]).unwrap().dim(), 1);
        let z = build_induced(&alg, (2, 2)).unwrap();
        let gens = PreparedGens::new(&acting, &z.module);
        let v = unit(25, z.index(0, 1, 1));
        assert_eq!(z.module.spin(&gens, &[v]).unwrap().dim(), 25);
    }

    #[test]
    fn quotient_of_corner_is_simple() {
        let p = 5;
        let alg = build_hhat(p).unwrap();
        let acting = hhat_acting(&alg);
        let z = build_induced(&alg, (4, 4)).unwrap();
        let gens = PreparedGens::new(&acting, &z.module);
        let s = z.module.spin(&gens, &[unit(25, z.index(4, 4, 1))]).unwrap();
        let q = z.module.quotient(&alg, &s, "q").unwrap();
        assert_eq!(q.dim(), 24);
        q.check_homomorphism(&alg).unwrap();
        assert!(is_simple(&q, &acting).unwrap());
        let zero = z.module.quotient(&alg, &Subspace::new(&z.module), "same").unwrap();
        assert_eq!(zero.dim(), 25);
    }

    #[test]
    fn series_of_small_induced_modules() {
        let p = 5;
        let alg = build_hhat(p).unwrap();
        let s = induced_series(&alg, (0, 0)).unwrap();
        assert_eq!(
            s.factors,
            vec![Factor { weight: w(p, 0, -1), dim: 24 }, Factor { weight: (0, 0), dim: 1 }]
        );
        let s = induced_series(&alg, (3, 2)).unwrap();
        assert_eq!(s.factors, vec![Factor { weight: (2, 2), dim: 25 }, Factor { weight: (3, 2), dim: 25 }]);
    }

    #[test]
    fn o_module_is_simple_and_restricted() {
        let p = 5;
        let alg = build_hhat(p).unwrap();
        let acting = hhat_acting(&alg);
        let o = build_o_module(&alg).unwrap();
        assert_eq!(o.dim(), 24);
        o.check_homomorphism(&alg).unwrap();
        o.check_restricted(&alg).unwrap();
        assert!(is_simple(&o, &acting).unwrap());
        assert!(max_weights(&o, &acting).contains(&(4, 4)));
    }

    #[test]
    fn gamma_lies_in_the_span_of_v() {
        // In Z(-1,-2), Ĥ·γ ⊆ Ĥ⟨v⟩ for γ = ∂_x'^{p-1}∂_y^{p-2} ⊗ m_2 and
        // v = ∂_x' ⊗ m_2 + ∂_y ⊗ m_1.
        let p = 5;
        let alg = build_hhat(p).unwrap();
        let acting = hhat_acting(&alg);
        let z = build_induced(&alg, w(p, -1, -2)).unwrap();
        let gens = PreparedGens::new(&acting, &z.module);
        let mut v = vec![0; z.module.dim()];
        v[z.index(1, 0, 2)] = 1;
        v[z.index(0, 1, 1)] = 1;
        let s = z.module.spin(&gens, &[v]).unwrap();
        let gamma = unit(z.module.dim(), z.index(p - 1, p - 2, 2));
        for k in 0..alg.dim() {
            let img = z.module.act(k, &gamma);
            if img.iter().all(|&x| x == 0) {
                continue;
            }
            let (wt, l) = z.module.to_local(&img).unwrap();
            assert!(s.spaces.get(&wt).is_some_and(|e| e.contains(&l)), "{}", alg.label(k));
        }
    }

    #[test]
    fn intertwiner_finds_identity_class() {
        let p = 5;
        let alg = build_hhat(p).unwrap();
        let acting = hhat_acting(&alg);
        let o = build_o_module(&alg).unwrap();
        assert!(iso_by_intertwiner(&o, &o, &acting).unwrap());
    }
}
