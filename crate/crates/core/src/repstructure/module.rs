//! Matrix representations with a torus-weight basis, weight-local subspaces,
//! spinning, quotients, submodules and maximal vectors.

use std::collections::{BTreeMap, VecDeque};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cartan::{RestrictedAlgebra, Weight};
use crate::primefield::{Echelon, Fp, FpMatrix};
use crate::Error;

/// Column-compressed sparse matrix over F_p. Column `j` lists `(row, value)`
/// with rows increasing and values nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseMat {
    pub rows: usize,
    pub cols: Vec<Vec<(u32, u32)>>,
}

impl SparseMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMat { rows, cols: vec![Vec::new(); cols] }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn from_dense(m: &FpMatrix) -> Self {
        let mut cols = vec![Vec::new(); m.cols()];
        for (j, col) in cols.iter_mut().enumerate() {
            for i in 0..m.rows() {
                let v = m.get(i, j);
                if v != 0 {
                    col.push((i as u32, v));
                }
            }
        }
        SparseMat { rows: m.rows(), cols }
    }

    pub fn to_dense(&self, field: Fp) -> FpMatrix {
        let mut m = FpMatrix::zeros(field, self.rows, self.ncols());
        for (j, col) in self.cols.iter().enumerate() {
            for &(i, v) in col {
                m.set(i as usize, j, v);
            }
        }
        m
    }

    /// Builds a column from a dense vector.
    pub fn column_from_dense(v: &[u32]) -> Vec<(u32, u32)> {
        v.iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(i, &x)| (i as u32, x))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    pub fn apply(&self, f: Fp, v: &[u32]) -> Vec<u32> {
        let mut out = vec![0; self.rows];
        for (j, &c) in v.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for &(i, a) in &self.cols[j] {
                let slot = &mut out[i as usize];
                *slot = f.mul_add(*slot, c, a);
            }
        }
        out
    }

    /// `sum_k c_k M_k` over matrices of equal shape.
    pub fn linear_combination(f: Fp, terms: &[(u32, &SparseMat)]) -> SparseMat {
        let (rows, ncols) = match terms.first() {
            Some((_, m)) => (m.rows, m.ncols()),
            None => return SparseMat::zero(0, 0),
        };
        let mut acc = vec![0u32; rows];
        let mut touched = Vec::new();
        let mut cols = Vec::with_capacity(ncols);
        for j in 0..ncols {
            for &(c, m) in terms {
                if c == 0 {
                    continue;
                }
                for &(i, a) in &m.cols[j] {
                    let slot = &mut acc[i as usize];
                    if *slot == 0 {
                        touched.push(i);
                    }
                    *slot = f.mul_add(*slot, c, a);
                }
            }
            touched.sort_unstable();
            touched.dedup();
            let mut col = Vec::new();
            for &i in &touched {
                let v = std::mem::take(&mut acc[i as usize]);
                if v != 0 {
                    col.push((i, v));
                }
            }
            touched.clear();
            cols.push(col);
        }
        SparseMat { rows, cols }
    }
}

/// PBW position of a basis vector of an induced module: exponents of the
/// complement elements and the 1-based index of the inducing-module basis
/// vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PbwTag {
    pub exps: Vec<u32>,
    pub i: u32,
}

/// PBW tags for every basis vector, together with the inducing dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PbwTags {
    pub base_dim: u32,
    pub entries: Vec<PbwTag>,
}

/// A finite-dimensional representation given by one sparse matrix per basis
/// element of the acting algebra. Every basis vector is a torus weight vector.
#[derive(Clone, Debug)]
pub struct MatrixModule {
    field: Fp,
    label: String,
    weights: Vec<Weight>,
    actions: Vec<SparseMat>,
    tags: Option<PbwTags>,
    spaces: BTreeMap<Weight, Vec<usize>>,
    local: Vec<usize>,
}

impl MatrixModule {
    pub fn new(
        p: u32,
        label: impl Into<String>,
        weights: Vec<Weight>,
        actions: Vec<SparseMat>,
        tags: Option<PbwTags>,
    ) -> Result<Self, Error> {
        let field = Fp::new(p)?;
        let dim = weights.len();
        for a in &actions {
            if a.rows != dim || a.ncols() != dim {
                return Err(Error::InvalidInput("action matrix has the wrong shape".into()));
            }
        }
        if let Some(t) = &tags {
            if t.entries.len() != dim {
                return Err(Error::InvalidInput("tag count differs from dimension".into()));
            }
        }
        let mut spaces: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
        let mut local = vec![0; dim];
        for (i, w) in weights.iter().enumerate() {
            let s = spaces.entry(*w).or_default();
            local[i] = s.len();
            s.push(i);
        }
        Ok(MatrixModule { field, label: label.into(), weights, actions, tags, spaces, local })
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn actions(&self) -> &[SparseMat] {
        &self.actions
    }

    pub fn action(&self, k: usize) -> &SparseMat {
        &self.actions[k]
    }

    pub fn tags(&self) -> Option<&PbwTags> {
        self.tags.as_ref()
    }

    pub fn weight_spaces(&self) -> &BTreeMap<Weight, Vec<usize>> {
        &self.spaces
    }

    pub fn weight_space_dim(&self, w: Weight) -> usize {
        self.spaces.get(&w).map_or(0, |s| s.len())
    }

    /// Position of basis vector `i` inside its weight space.
    pub fn local_index(&self, i: usize) -> usize {
        self.local[i]
    }

    /// `sum_k c_k rho(b_k)`.
    pub fn combine(&self, coords: &[u32]) -> SparseMat {
        let terms: Vec<(u32, &SparseMat)> = coords
            .iter()
            .zip(&self.actions)
            .filter(|(c, _)| **c != 0)
            .map(|(c, m)| (*c, m))
            .collect();
        if terms.is_empty() {
            return SparseMat::zero(self.dim(), self.dim());
        }
        SparseMat::linear_combination(self.field, &terms)
    }

    pub fn act(&self, k: usize, v: &[u32]) -> Vec<u32> {
        self.actions[k].apply(self.field, v)
    }

    /// Splits a weight-homogeneous vector into its weight and local coordinates.
    pub fn to_local(&self, v: &[u32]) -> Result<(Weight, Vec<u32>), Error> {
        let mut weight = None;
        for (i, &c) in v.iter().enumerate() {
            if c != 0 {
                match weight {
                    None => weight = Some(self.weights[i]),
                    Some(w) if w != self.weights[i] => {
                        return Err(Error::InvalidInput("vector is not a weight vector".into()))
                    }
                    _ => {}
                }
            }
        }
        let w = weight.ok_or_else(|| Error::InvalidInput("zero vector".into()))?;
        let idx = &self.spaces[&w];
        Ok((w, idx.iter().map(|&i| v[i]).collect()))
    }

    pub fn to_global(&self, w: Weight, local: &[u32]) -> Vec<u32> {
        let mut v = vec![0; self.dim()];
        if let Some(idx) = self.spaces.get(&w) {
            for (&i, &c) in idx.iter().zip(local) {
                v[i] = c;
            }
        }
        v
    }

    /// Applies `m` (a weight-homogeneous operator of weight `shift`) to a
    /// local vector of weight `w`, returning the local image at `w + shift`.
    fn apply_local(&self, m: &SparseMat, shift: Weight, w: Weight, local: &[u32]) -> (Weight, Vec<u32>) {
        let f = self.field;
        let target = add_weight(self.p(), w, shift);
        let mut out = vec![0; self.weight_space_dim(target)];
        let idx = &self.spaces[&w];
        for (&j, &c) in idx.iter().zip(local) {
            if c == 0 {
                continue;
            }
            for &(i, a) in &m.cols[j] {
                debug_assert_eq!(self.weights[i as usize], target);
                let slot = &mut out[self.local[i as usize]];
                *slot = f.mul_add(*slot, c, a);
            }
        }
        (target, out)
    }

    /// Checks that every action matrix shifts weights by the weight of its
    /// algebra basis element, so the basis really is a weight basis.
    pub fn check_weights(&self, alg: &RestrictedAlgebra) -> Result<(), Error> {
        for (k, m) in self.actions.iter().enumerate() {
            let shift = alg.weight(k);
            for (j, col) in m.cols.iter().enumerate() {
                let target = add_weight(self.p(), self.weights[j], shift);
                if col.iter().any(|&(i, _)| self.weights[i as usize] != target) {
                    return Err(Error::Invariant(format!(
                        "{}: action of {} does not shift weights correctly",
                        self.label,
                        alg.label(k)
                    )));
                }
            }
        }
        Ok(())
    }

    /// `[rho(b_i), rho(b_j)] = rho([b_i, b_j])` for all pairs, column by column.
    pub fn check_homomorphism(&self, alg: &RestrictedAlgebra) -> Result<(), Error> {
        let f = self.field;
        let n = alg.dim();
        for i in 0..n {
            for j in (i + 1)..n {
                let sc = alg.structure_constants(i, j);
                let mut coords = vec![0; n];
                for &(k, c) in sc {
                    coords[k as usize] = c;
                }
                let rhs = self.combine(&coords);
                for col in 0..self.dim() {
                    let e = unit(self.dim(), col);
                    let a = self.act(i, &self.act(j, &e));
                    let b = self.act(j, &self.act(i, &e));
                    let lhs: Vec<u32> = a.iter().zip(&b).map(|(x, y)| f.sub(*x, *y)).collect();
                    if lhs != rhs.apply(f, &e) {
                        return Err(Error::Invariant(format!(
                            "{}: bracket [{}, {}] not preserved",
                            self.label,
                            alg.label(i),
                            alg.label(j)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Homomorphism property tested on random vectors for random pairs.
    pub fn check_homomorphism_random<R: Rng>(
        &self,
        alg: &RestrictedAlgebra,
        rng: &mut R,
        samples: usize,
    ) -> Result<(), Error> {
        let f = self.field;
        let n = alg.dim();
        for _ in 0..samples {
            let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let v: Vec<u32> = (0..self.dim()).map(|_| rng.gen_range(0..self.p())).collect();
            let a = self.act(i, &self.act(j, &v));
            let b = self.act(j, &self.act(i, &v));
            let lhs: Vec<u32> = a.iter().zip(&b).map(|(x, y)| f.sub(*x, *y)).collect();
            let coords = alg.bracket(&alg.unit(i), &alg.unit(j));
            if lhs != self.combine(&coords).apply(f, &v) {
                return Err(Error::Invariant(format!(
                    "{}: bracket [{}, {}] not preserved",
                    self.label,
                    alg.label(i),
                    alg.label(j)
                )));
            }
        }
        Ok(())
    }

    /// `rho(b)^p = rho(b^[p])` for every basis element, on every basis vector.
    pub fn check_restricted(&self, alg: &RestrictedAlgebra) -> Result<(), Error> {
        let p = self.p();
        for k in 0..alg.dim() {
            let target = self.combine(alg.p_map(k));
            for col in 0..self.dim() {
                let mut v = unit(self.dim(), col);
                for _ in 0..p {
                    v = self.act(k, &v);
                }
                if v != target.apply(self.field, &unit(self.dim(), col)) {
                    return Err(Error::Invariant(format!(
                        "{}: rho({})^p differs from rho of its p-th power",
                        self.label,
                        alg.label(k)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Subspace spanned by the given weight-homogeneous vectors.
    pub fn span(&self, vectors: &[Vec<u32>]) -> Result<Subspace, Error> {
        let mut s = Subspace::new(self);
        for v in vectors {
            let (w, l) = self.to_local(v)?;
            s.insert(w, &l);
        }
        Ok(s)
    }

    /// Smallest submodule containing the weight-homogeneous `seeds`, obtained
    /// by closing under `gens` and then verified against every basis action.
    pub fn spin(&self, gens: &PreparedGens, seeds: &[Vec<u32>]) -> Result<Subspace, Error> {
        let mut s = Subspace::new(self);
        let mut queue = VecDeque::new();
        for v in seeds {
            if v.iter().all(|&x| x == 0) {
                continue;
            }
            let (w, l) = self.to_local(v)?;
            if s.insert(w, &l) {
                queue.push_back((w, l));
            }
        }
        while let Some((w, l)) = queue.pop_front() {
            for (shift, m) in &gens.spin {
                let (t, img) = self.apply_local(m, *shift, w, &l);
                if img.iter().any(|&x| x != 0) && s.insert(t, &img) {
                    queue.push_back((t, img));
                }
            }
        }
        self.check_invariant(gens.alg, &s)?;
        Ok(s)
    }

    /// Whether `s` is stable under every basis action.
    pub fn check_invariant(&self, alg: &RestrictedAlgebra, s: &Subspace) -> Result<(), Error> {
        for (w, e) in &s.spaces {
            for row in e.rows() {
                for k in 0..self.actions.len() {
                    let (t, img) = self.apply_local(&self.actions[k], alg.weight(k), *w, row);
                    if img.iter().all(|&x| x == 0) {
                        continue;
                    }
                    let ok = s.spaces.get(&t).is_some_and(|et| et.contains(&img));
                    if !ok {
                        return Err(Error::NotClosed(format!(
                            "{}: subspace not stable under {}",
                            self.label,
                            alg.label(k)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `M / S`, with basis the non-pivot coordinates of each weight space.
    pub fn quotient(&self, alg: &RestrictedAlgebra, s: &Subspace, label: impl Into<String>) -> Result<MatrixModule, Error> {
        self.check_invariant(alg, s)?;
        let empty = Echelon::new(self.field, 0);
        let mut new_index = vec![usize::MAX; self.dim()];
        let mut weights = Vec::new();
        let mut kept = Vec::new();
        for (w, idx) in &self.spaces {
            let e = s.spaces.get(w);
            for (l, &g) in idx.iter().enumerate() {
                if e.is_some_and(|e| e.is_pivot(l)) {
                    continue;
                }
                new_index[g] = weights.len();
                weights.push(*w);
                kept.push(g);
            }
        }
        let mut actions = Vec::with_capacity(self.actions.len());
        for (k, m) in self.actions.iter().enumerate() {
            let shift = alg.weight(k);
            let mut cols = Vec::with_capacity(kept.len());
            for &g in &kept {
                let w = self.weights[g];
                let mut l = vec![0; self.weight_space_dim(w)];
                l[self.local[g]] = 1;
                let (t, mut img) = self.apply_local(m, shift, w, &l);
                let e = s.spaces.get(&t).unwrap_or(&empty);
                if e.width() == img.len() {
                    e.reduce(&mut img);
                }
                let idx = self.spaces.get(&t);
                let mut col: Vec<(u32, u32)> = Vec::new();
                for (pos, &c) in img.iter().enumerate() {
                    if c != 0 {
                        let gi = idx.expect("weight present")[pos];
                        col.push((new_index[gi] as u32, c));
                    }
                }
                col.sort_unstable();
                cols.push(col);
            }
            actions.push(SparseMat { rows: kept.len(), cols });
        }
        let tags = self.tags.as_ref().map(|t| PbwTags {
            base_dim: t.base_dim,
            entries: kept.iter().map(|&g| t.entries[g].clone()).collect(),
        });
        MatrixModule::new(self.p(), label, weights, actions, tags)
    }

    /// The submodule `S` with basis the reduced rows of each weight space.
    pub fn submodule(&self, alg: &RestrictedAlgebra, s: &Subspace, label: impl Into<String>) -> Result<MatrixModule, Error> {
        self.check_invariant(alg, s)?;
        let mut weights = Vec::new();
        let mut basis: Vec<(Weight, usize)> = Vec::new();
        let mut offset: BTreeMap<Weight, usize> = BTreeMap::new();
        for (w, e) in &s.spaces {
            offset.insert(*w, weights.len());
            for r in 0..e.rank() {
                weights.push(*w);
                basis.push((*w, r));
            }
        }
        let mut actions = Vec::with_capacity(self.actions.len());
        for (k, m) in self.actions.iter().enumerate() {
            let shift = alg.weight(k);
            let mut cols = Vec::with_capacity(basis.len());
            for &(w, r) in &basis {
                let row = &s.spaces[&w].rows()[r];
                let (t, img) = self.apply_local(m, shift, w, row);
                let mut col = Vec::new();
                if img.iter().any(|&x| x != 0) {
                    let c = s.spaces[&t].coords(&img).ok_or_else(|| {
                        Error::NotClosed(format!("{}: image left the submodule", self.label))
                    })?;
                    for (pos, &v) in c.iter().enumerate() {
                        if v != 0 {
                            col.push(((offset[&t] + pos) as u32, v));
                        }
                    }
                }
                cols.push(col);
            }
            actions.push(SparseMat { rows: basis.len(), cols });
        }
        let tags = self.tags.as_ref().and_then(|t| {
            let mut entries = Vec::with_capacity(basis.len());
            for &(w, r) in &basis {
                let row = &s.spaces[&w].rows()[r];
                if row.iter().filter(|&&x| x != 0).count() != 1 {
                    return None;
                }
                let piv = s.spaces[&w].pivots()[r];
                entries.push(t.entries[self.spaces[&w][piv]].clone());
            }
            Some(PbwTags { base_dim: t.base_dim, entries })
        });
        MatrixModule::new(self.p(), label, weights, actions, tags)
    }

    /// For every weight with a nonzero solution, a basis of the vectors of
    /// that weight annihilated by all `gens.nil`.
    pub fn maximal_vectors(&self, gens: &PreparedGens) -> Vec<(Weight, Vec<Vec<u32>>)> {
        let mut out = Vec::new();
        for (&w, idx) in &self.spaces {
            let d = idx.len();
            let mut rows: Vec<Vec<u32>> = Vec::new();
            for (shift, m) in &gens.nil {
                let t = add_weight(self.p(), w, *shift);
                let td = self.weight_space_dim(t);
                if td == 0 {
                    continue;
                }
                let mut block = vec![vec![0u32; d]; td];
                for (l, &g) in idx.iter().enumerate() {
                    for &(i, a) in &m.cols[g] {
                        block[self.local[i as usize]][l] = a;
                    }
                }
                rows.extend(block);
            }
            let null = if rows.is_empty() {
                (0..d).map(|l| unit(d, l)).collect()
            } else {
                let mat = FpMatrix::from_reduced_rows(self.field, d, &rows);
                mat.nullspace()
            };
            if !null.is_empty() {
                out.push((w, null.iter().map(|l| self.to_global(w, l)).collect()));
            }
        }
        out
    }
}

pub fn add_weight(p: u32, a: Weight, b: Weight) -> Weight {
    ((a.0 + b.0) % p, (a.1 + b.1) % p)
}

pub fn unit(n: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// A subspace stored weight space by weight space in local coordinates.
#[derive(Clone, Debug)]
pub struct Subspace {
    field: Fp,
    widths: BTreeMap<Weight, usize>,
    pub spaces: BTreeMap<Weight, Echelon>,
}

impl Subspace {
    pub fn new(m: &MatrixModule) -> Self {
        Subspace {
            field: m.field,
            widths: m.spaces.iter().map(|(w, s)| (*w, s.len())).collect(),
            spaces: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, w: Weight, local: &[u32]) -> bool {
        let width = self.widths[&w];
        let field = self.field;
        self.spaces.entry(w).or_insert_with(|| Echelon::new(field, width)).insert(local)
    }

    pub fn dim(&self) -> usize {
        self.spaces.values().map(|e| e.rank()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }
}

/// Homogeneous generator matrices of one module, precomputed once.
pub struct PreparedGens<'a> {
    pub alg: &'a RestrictedAlgebra,
    /// Generators of the acting algebra used to spin submodules.
    pub spin: Vec<(Weight, SparseMat)>,
    /// Generators whose common kernel on a weight vector defines maximality.
    pub nil: Vec<(Weight, SparseMat)>,
}

impl<'a> PreparedGens<'a> {
    pub fn new(acting: &Acting<'a>, m: &MatrixModule) -> Self {
        let prep = |list: &[Vec<u32>]| {
            list.iter()
                .map(|c| (acting.shift(c), m.combine(c)))
                .collect::<Vec<_>>()
        };
        PreparedGens { alg: acting.alg, spin: prep(&acting.spin), nil: prep(&acting.nil) }
    }
}

/// The acting algebra together with the generator sets used for spinning and
/// for testing maximality.
#[derive(Clone, Debug)]
pub struct Acting<'a> {
    pub alg: &'a RestrictedAlgebra,
    pub spin: Vec<Vec<u32>>,
    pub nil: Vec<Vec<u32>>,
}

impl<'a> Acting<'a> {
    /// Weight of a homogeneous coordinate vector.
    pub fn shift(&self, c: &[u32]) -> Weight {
        let k = c.iter().position(|&x| x != 0).expect("nonzero generator");
        let w = self.alg.weight(k);
        debug_assert!(c
            .iter()
            .enumerate()
            .all(|(j, &x)| x == 0 || self.alg.weight(j) == w));
        w
    }
}
