//! The Jacobson-Witt algebra W(2;(1,1)), the Hamiltonian subalgebra H inside
//! it, the p-envelope Ĥ = H + k(x∂_x + y∂_y), its filtration, the nilpotent
//! subalgebra N, the generating sets, and the Witt subalgebra W(1;1).
//!
//! Brackets and p-th powers are computed operationally by composing
//! derivations on O(2;(1,1)), never from a closed-form commutator table.

use std::collections::BTreeMap;
use std::fmt;

use crate::dividedpowers::{apply_derivation, DPElement, DPMonomial};
use crate::primefield::{Echelon, Fp, FpMatrix};
use crate::Error;

/// Torus weight `(x∂_x-eigenvalue, y∂_y-eigenvalue)` with entries in `[0, p)`.
pub type Weight = (u32, u32);

/// `f ∂_x + g ∂_y` with `f, g` in O(2;(1,1)).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Derivation {
    pub fx: DPElement,
    pub fy: DPElement,
}

impl Derivation {
    pub fn new(fx: DPElement, fy: DPElement) -> Self {
        assert_eq!(fx.p(), fy.p(), "mixed moduli");
        Derivation { fx, fy }
    }

    pub fn zero(p: u32) -> Self {
        Self::new(DPElement::zero(p), DPElement::zero(p))
    }

    pub fn p(&self) -> u32 {
        self.fx.p()
    }

    pub fn dx(p: u32) -> Self {
        Self::term_x(p, 0, 0, 1)
    }

    pub fn dy(p: u32) -> Self {
        Self::term_y(p, 0, 0, 1)
    }

    /// `c x^(a) y^(b) ∂_x`.
    pub fn term_x(p: u32, a: u32, b: u32, c: i64) -> Self {
        Self::new(DPElement::monomial(p, a, b, c), DPElement::zero(p))
    }

    /// `c x^(a) y^(b) ∂_y`.
    pub fn term_y(p: u32, a: u32, b: u32, c: i64) -> Self {
        Self::new(DPElement::zero(p), DPElement::monomial(p, a, b, c))
    }

    pub fn is_zero(&self) -> bool {
        self.fx.is_zero() && self.fy.is_zero()
    }

    pub fn add(&self, o: &Derivation) -> Derivation {
        Self::new(self.fx.add(&o.fx), self.fy.add(&o.fy))
    }

    pub fn sub(&self, o: &Derivation) -> Derivation {
        Self::new(self.fx.sub(&o.fx), self.fy.sub(&o.fy))
    }

    pub fn scale(&self, c: u32) -> Derivation {
        Self::new(self.fx.scale(c), self.fy.scale(c))
    }

    pub fn apply(&self, u: &DPElement) -> DPElement {
        apply_derivation(self, u)
    }

    /// Commutator of the two operators, read back as a derivation through its
    /// values on `x` and `y`.
    pub fn bracket(&self, o: &Derivation) -> Derivation {
        let fx = self.apply(&o.fx).sub(&o.apply(&self.fx));
        let fy = self.apply(&o.fy).sub(&o.apply(&self.fy));
        Self::new(fx, fy)
    }

    /// Torus weight if every term has the same one. `x^(a)y^(b)∂_x` has
    /// weight `(a-1, b)` and `x^(a)y^(b)∂_y` has weight `(a, b-1)`.
    pub fn weight(&self) -> Option<Weight> {
        let p = self.p() as i64;
        let f = |a: i64, b: i64| (a.rem_euclid(p) as u32, b.rem_euclid(p) as u32);
        let mut ws = self
            .fx
            .terms()
            .map(|(m, _)| f(m.a as i64 - 1, m.b as i64))
            .chain(self.fy.terms().map(|(m, _)| f(m.a as i64, m.b as i64 - 1)));
        let first = ws.next()?;
        if ws.all(|w| w == first) {
            Some(first)
        } else {
            None
        }
    }

    /// Filtration depth: the least grading degree `a + b - 1` among the terms.
    pub fn depth(&self) -> Option<i32> {
        let dx = self.fx.min_degree();
        let dy = self.fy.min_degree();
        dx.into_iter().chain(dy).min().map(|d| d as i32 - 1)
    }

    /// The p-fold composite operator, read back as a derivation. The
    /// composite is compared with the derivation on every monomial, so a
    /// non-derivation result is reported rather than silently truncated.
    pub fn p_power(&self) -> Result<Derivation, Error> {
        let p = self.p();
        let image = |u: &DPElement| {
            let mut v = u.clone();
            for _ in 0..p {
                v = self.apply(&v);
            }
            v
        };
        let res = Derivation::new(
            image(&DPElement::monomial(p, 1, 0, 1)),
            image(&DPElement::monomial(p, 0, 1, 1)),
        );
        for a in 0..p {
            for b in 0..p {
                let m = DPElement::monomial(p, a, b, 1);
                if image(&m) != res.apply(&m) {
                    return Err(Error::Invariant(format!(
                        "p-th power of {self} is not a derivation (fails on {})",
                        DPMonomial::new(a, b)
                    )));
                }
            }
        }
        Ok(res)
    }

    /// Operator matrix on O(2;(1,1)) in the monomial order `a * p + b`.
    pub fn operator(&self) -> FpMatrix {
        let p = self.p();
        let n = (p * p) as usize;
        let field = Fp::new(p).expect("prime");
        let mut m = FpMatrix::zeros(field, n, n);
        for col in 0..n {
            let (a, b) = (col as u32 / p, col as u32 % p);
            let img = self.apply(&DPElement::monomial(p, a, b, 1));
            for (mono, c) in img.terms() {
                m.set((mono.a * p + mono.b) as usize, col, c);
            }
        }
        m
    }

    /// Flat coefficient vector: the ∂_x part, then the ∂_y part.
    pub fn to_vec(&self) -> Vec<u32> {
        let mut v = self.fx.to_dense();
        v.extend(self.fy.to_dense());
        v
    }

    pub fn from_vec(p: u32, v: &[u32]) -> Derivation {
        let half = (p * p) as usize;
        Self::new(DPElement::from_dense(p, &v[..half]), DPElement::from_dense(p, &v[half..]))
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let field = Fp::new(self.p()).expect("prime");
        let terms = self
            .fy
            .terms()
            .map(|(m, c)| (m, c, "dy"))
            .chain(self.fx.terms().map(|(m, c)| (m, c, "dx")));
        for (i, (m, c, d)) in terms.enumerate() {
            let s = field.signed(c);
            if i == 0 {
                if s < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if s < 0 { "-" } else { "+" })?;
            }
            let mag = s.unsigned_abs();
            if mag != 1 {
                write!(f, "{mag}")?;
            }
            if m.a + m.b > 0 {
                write!(f, "{m}")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// Sparse coordinate vector `(index, coefficient)`.
pub type SparseCoords = Vec<(u32, u32)>;

/// A finite-dimensional restricted Lie algebra of derivations with an ordered
/// basis, structure constants, p-map and per-basis torus data.
#[derive(Clone, Debug)]
pub struct RestrictedAlgebra {
    field: Fp,
    basis: Vec<Derivation>,
    labels: Vec<String>,
    sc: Vec<SparseCoords>,
    p_map: Vec<Vec<u32>>,
    weights: Vec<Weight>,
    depth: Vec<i32>,
    named: BTreeMap<String, Derivation>,
    solver: Echelon,
}

impl RestrictedAlgebra {
    /// Validates independence, bracket closure and p-map closure of `basis`.
    /// Every basis element must be a torus weight vector.
    pub fn from_basis(
        p: u32,
        basis: Vec<Derivation>,
        labels: Vec<String>,
        named: BTreeMap<String, Derivation>,
    ) -> Result<Self, Error> {
        let field = Fp::new(p)?;
        let n = basis.len();
        assert_eq!(labels.len(), n);
        let width = 2 * (p * p) as usize;
        let mut solver = Echelon::new(field, width + n);
        for (k, d) in basis.iter().enumerate() {
            let mut row = d.to_vec();
            row.extend((0..n).map(|j| u32::from(j == k)));
            if !solver.insert(&row) || solver.pivots().last().copied().unwrap_or(0) >= width {
                return Err(Error::InvalidInput(format!("basis element {d} is dependent")));
            }
        }
        let mut weights = Vec::with_capacity(n);
        let mut depth = Vec::with_capacity(n);
        for d in &basis {
            weights.push(d.weight().ok_or_else(|| {
                Error::InvalidInput(format!("basis element {d} is not a weight vector"))
            })?);
            depth.push(d.depth().expect("nonzero basis element"));
        }
        let mut alg = RestrictedAlgebra {
            field,
            basis,
            labels,
            sc: vec![Vec::new(); n * n],
            p_map: Vec::new(),
            weights,
            depth,
            named,
            solver,
        };
        for i in 0..n {
            for j in (i + 1)..n {
                let b = alg.basis[i].bracket(&alg.basis[j]);
                let c = alg.coords(&b).ok_or_else(|| {
                    Error::NotClosed(format!("[{}, {}] = {b}", alg.basis[i], alg.basis[j]))
                })?;
                let neg: Vec<u32> = c.iter().map(|&x| field.neg(x)).collect();
                alg.sc[i * n + j] = sparse(&c);
                alg.sc[j * n + i] = sparse(&neg);
            }
        }
        let mut p_map = Vec::with_capacity(n);
        for d in &alg.basis {
            let q = d.p_power()?;
            p_map.push(
                alg.coords(&q)
                    .ok_or_else(|| Error::NotClosed(format!("({d})^[p] = {q}")))?,
            );
        }
        alg.p_map = p_map;
        Ok(alg)
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Derivation] {
        &self.basis
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn weight(&self, i: usize) -> Weight {
        self.weights[i]
    }

    pub fn depth(&self, i: usize) -> i32 {
        self.depth[i]
    }

    /// Coordinates of `[b_i, b_j]`.
    pub fn structure_constants(&self, i: usize, j: usize) -> &[(u32, u32)] {
        &self.sc[i * self.dim() + j]
    }

    /// Coordinates of `b_i^[p]`.
    pub fn p_map(&self, i: usize) -> &[u32] {
        &self.p_map[i]
    }

    /// Coordinates of a derivation in the basis, if it lies in the span.
    pub fn coords(&self, d: &Derivation) -> Option<Vec<u32>> {
        let width = 2 * (self.p() * self.p()) as usize;
        let mut row = d.to_vec();
        row.extend(std::iter::repeat_n(0, self.dim()));
        self.solver.reduce(&mut row);
        if row[..width].iter().any(|&x| x != 0) {
            return None;
        }
        Some(row[width..].iter().map(|&x| self.field.neg(x)).collect())
    }

    pub fn element(&self, coords: &[u32]) -> Derivation {
        let mut d = Derivation::zero(self.p());
        for (b, &c) in self.basis.iter().zip(coords) {
            if c != 0 {
                d = d.add(&b.scale(c));
            }
        }
        d
    }

    pub fn unit(&self, i: usize) -> Vec<u32> {
        (0..self.dim()).map(|j| u32::from(i == j)).collect()
    }

    /// Bracket of two coordinate vectors through the structure constants.
    pub fn bracket(&self, u: &[u32], v: &[u32]) -> Vec<u32> {
        let f = self.field;
        let n = self.dim();
        let mut out = vec![0; n];
        for (i, &a) in u.iter().enumerate().filter(|(_, a)| **a != 0) {
            for (j, &b) in v.iter().enumerate().filter(|(_, b)| **b != 0) {
                let ab = f.mul(a, b);
                for &(k, c) in &self.sc[i * n + j] {
                    let slot = &mut out[k as usize];
                    *slot = f.mul_add(*slot, ab, c);
                }
            }
        }
        out
    }

    pub fn named(&self, name: &str) -> Result<&Derivation, Error> {
        self.named.get(name).ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn named_coords(&self, name: &str) -> Result<Vec<u32>, Error> {
        let d = self.named(name)?;
        self.coords(d)
            .ok_or_else(|| Error::NotInSpan(format!("{name} = {d}")))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.named.keys().map(|s| s.as_str())
    }

    /// Deterministic text table of structure constants and p-map values.
    pub fn dump_structure_constants(&self) -> String {
        let mut s = format!("# p={} dim={}\n", self.p(), self.dim());
        for (i, l) in self.labels.iter().enumerate() {
            s.push_str(&format!("b {i} {l}\n"));
        }
        let n = self.dim();
        for i in 0..n {
            for j in (i + 1)..n {
                let c = &self.sc[i * n + j];
                if c.is_empty() {
                    continue;
                }
                let terms: Vec<String> = c.iter().map(|(k, v)| format!("{k}:{v}")).collect();
                s.push_str(&format!("[{i},{j}] {}\n", terms.join(" ")));
            }
        }
        for i in 0..n {
            let terms: Vec<String> =
                sparse(&self.p_map[i]).iter().map(|(k, v)| format!("{k}:{v}")).collect();
            s.push_str(&format!("p {i} {}\n", terms.join(" ")));
        }
        s
    }
}

fn sparse(v: &[u32]) -> SparseCoords {
    v.iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| (i as u32, c))
        .collect()
}

/// A subspace of a restricted algebra, given by the row space of `coords`.
#[derive(Clone, Debug)]
pub struct SubalgebraSpan<'a> {
    pub parent: &'a RestrictedAlgebra,
    pub coords: FpMatrix,
    pub is_subalgebra: bool,
}

impl<'a> SubalgebraSpan<'a> {
    /// Row-reduces `rows` and records whether the span is bracket-closed.
    pub fn new(parent: &'a RestrictedAlgebra, rows: &[Vec<u32>]) -> Self {
        let mut e = Echelon::new(parent.field(), parent.dim());
        for r in rows {
            e.insert(r);
        }
        let basis = e.rows().to_vec();
        let mut closed = true;
        'outer: for (i, u) in basis.iter().enumerate() {
            for v in &basis[i + 1..] {
                if !e.contains(&parent.bracket(u, v)) {
                    closed = false;
                    break 'outer;
                }
            }
        }
        SubalgebraSpan {
            parent,
            coords: FpMatrix::from_reduced_rows(parent.field(), parent.dim(), &basis),
            is_subalgebra: closed,
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.rows()
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut e = Echelon::new(self.parent.field(), self.parent.dim());
        for r in self.coords.row_vecs() {
            e.insert(&r);
        }
        e.contains(v)
    }

    pub fn elements(&self) -> Vec<Derivation> {
        self.coords.row_vecs().iter().map(|r| self.parent.element(r)).collect()
    }

    /// Whether `[self, other] ⊆ target`.
    pub fn bracket_within(&self, other: &SubalgebraSpan, target: &SubalgebraSpan) -> bool {
        let a = self.coords.row_vecs();
        let b = other.coords.row_vecs();
        a.iter().all(|u| b.iter().all(|v| target.contains(&self.parent.bracket(u, v))))
    }
}

/// W(2;(1,1)): all `x^(a)y^(b)∂_x`, then all `x^(a)y^(b)∂_y`.
pub fn build_w2(p: u32) -> Result<RestrictedAlgebra, Error> {
    Fp::new(p)?;
    let mut basis = Vec::new();
    for part in 0..2 {
        for a in 0..p {
            for b in 0..p {
                basis.push(if part == 0 {
                    Derivation::term_x(p, a, b, 1)
                } else {
                    Derivation::term_y(p, a, b, 1)
                });
            }
        }
    }
    let labels = basis.iter().map(|d| d.to_string()).collect();
    RestrictedAlgebra::from_basis(p, basis, labels, BTreeMap::new())
}

/// `y^(j-1)∂_x - x^(p-1)y^(j)∂_y` (the first family of the H basis).
pub fn h_family_one(p: u32, j: u32) -> Derivation {
    let lead = if j == 0 {
        Derivation::zero(p)
    } else {
        Derivation::term_x(p, 0, j - 1, 1)
    };
    lead.sub(&Derivation::term_y(p, p - 1, j, 1))
}

/// `x^(i-1)y^(j)∂_y - x^(i)y^(j-1)∂_x` (the second family of the H basis).
pub fn h_family_two(p: u32, i: u32, j: u32) -> Derivation {
    let lead = Derivation::term_y(p, i - 1, j, 1);
    if j == 0 {
        lead
    } else {
        lead.sub(&Derivation::term_x(p, i, j - 1, 1))
    }
}

/// The p² spanning derivations of H listed in the standard realisation.
pub fn h_basis(p: u32) -> Vec<Derivation> {
    let mut out: Vec<Derivation> = (0..p).map(|j| h_family_one(p, j)).collect();
    for i in 1..p {
        for j in 0..p {
            out.push(h_family_two(p, i, j));
        }
    }
    out
}

/// The simple algebra H as a subspace of W(2;(1,1)). Fails if the span is not
/// p²-dimensional or not closed, which would indicate a bracket bug.
pub fn build_h(w2: &RestrictedAlgebra) -> Result<SubalgebraSpan<'_>, Error> {
    let p = w2.p();
    let rows: Vec<Vec<u32>> = h_basis(p)
        .iter()
        .map(|d| w2.coords(d).expect("W2 spans everything"))
        .collect();
    let span = SubalgebraSpan::new(w2, &rows);
    if span.dim() != (p * p) as usize {
        return Err(Error::Invariant(format!("dim H = {} != p^2", span.dim())));
    }
    if !span.is_subalgebra {
        return Err(Error::NotClosed("H is not bracket closed".into()));
    }
    Ok(span)
}

/// Named elements of Ĥ.
pub fn named_elements(p: u32) -> BTreeMap<String, Derivation> {
    let mut m = BTreeMap::new();
    let xdx = Derivation::term_x(p, 1, 0, 1);
    let ydy = Derivation::term_y(p, 0, 1, 1);
    m.insert("dx'".into(), h_family_one(p, 1));
    m.insert("dy".into(), Derivation::dy(p));
    m.insert("xdx".into(), xdx.clone());
    m.insert("ydy".into(), ydy.clone());
    m.insert("H".into(), xdx.sub(&ydy));
    m.insert("T".into(), xdx.add(&ydy));
    m.insert("h".into(), ydy.sub(&xdx));
    m.insert("X".into(), Derivation::term_y(p, 1, 0, 1));
    m.insert("Y".into(), h_family_one(p, 2));
    m.insert("A".into(), h_family_two(p, 1, 2));
    m.insert("B".into(), h_family_two(p, 2, 1));
    m.insert("C".into(), h_family_one(p, 3));
    m.insert("D".into(), h_family_two(p, 3, 1));
    m.insert("F".into(), h_family_two(p, 2, p - 1));
    m.insert("J".into(), h_family_two(p, p - 1, p - 1));
    m.insert("L".into(), h_family_two(p, 1, p - 1));
    m.insert("x^(p-1)dy".into(), Derivation::term_y(p, p - 1, 0, 1));
    m.insert("x^(2)dy".into(), Derivation::term_y(p, 2, 0, 1));
    m
}

/// Ĥ with basis order ∂_x', ∂_y, x∂_x, y∂_y, X, Y, then Ĥ_(1) by depth.
/// Every element of `h` is checked to lie in the result.
pub fn build_p_envelope(h: &SubalgebraSpan) -> Result<RestrictedAlgebra, Error> {
    let p = h.parent.p();
    let named = named_elements(p);
    let mut basis: Vec<Derivation> = ["dx'", "dy", "xdx", "ydy", "X", "Y"]
        .iter()
        .map(|n| named[*n].clone())
        .collect();
    let mut rest: Vec<(i32, u32, u32, u32, Derivation)> = Vec::new();
    rest.push((p as i32 - 2, 0, 0, 0, Derivation::term_y(p, p - 1, 0, 1)));
    for j in 3..p {
        let d = h_family_one(p, j);
        rest.push((d.depth().unwrap(), 1, 0, j, d));
    }
    for i in 1..p {
        for j in 0..p {
            if i + j >= 3 {
                let d = h_family_two(p, i, j);
                rest.push((d.depth().unwrap(), 2, i, j, d));
            }
        }
    }
    rest.sort_by_key(|(d, fam, i, j, _)| (*d, *fam, *i, *j));
    basis.extend(rest.into_iter().map(|r| r.4));
    let labels = basis.iter().map(|d| d.to_string()).collect();
    let alg = RestrictedAlgebra::from_basis(p, basis, labels, named)?;
    if alg.dim() != (p * p + 1) as usize {
        return Err(Error::Invariant(format!("dim Ĥ = {}", alg.dim())));
    }
    for d in h.elements() {
        if alg.coords(&d).is_none() {
            return Err(Error::Invariant(format!("{d} from H is missing from Ĥ")));
        }
    }
    Ok(alg)
}

/// Convenience: W(2;(1,1)) → H → Ĥ.
pub fn build_hhat(p: u32) -> Result<RestrictedAlgebra, Error> {
    let w2 = build_w2(p)?;
    let h = build_h(&w2)?;
    build_p_envelope(&h)
}

/// Ĥ_(n): span of basis elements of depth at least `n`.
pub fn filtration_component(alg: &RestrictedAlgebra, n: i32) -> SubalgebraSpan<'_> {
    let rows: Vec<Vec<u32>> =
        (0..alg.dim()).filter(|&i| alg.depth(i) >= n).map(|i| alg.unit(i)).collect();
    SubalgebraSpan::new(alg, &rows)
}

/// Image in 𝔤𝔩₂ of an element of Ĥ_(0): x∂_x, y∂_y, X, Y go to E11, E22,
/// E12, E21 and Ĥ_(1) goes to zero. Relies on the basis order of
/// [`build_p_envelope`].
pub fn gl2_projection(alg: &RestrictedAlgebra, coords: &[u32]) -> Result<[[u32; 2]; 2], Error> {
    if coords[0] != 0 || coords[1] != 0 {
        return Err(Error::InvalidInput("element is not in Ĥ_(0)".into()));
    }
    debug_assert!(alg.depth(5) == 0 && alg.depth(6) >= 1);
    Ok([[coords[2], coords[4]], [coords[5], coords[3]]])
}

/// Smallest bracket-closed subspace containing `gens`.
pub fn spin_subalgebra<'a>(alg: &'a RestrictedAlgebra, gens: &[Vec<u32>]) -> SubalgebraSpan<'a> {
    let mut span = Echelon::new(alg.field(), alg.dim());
    let mut elems: Vec<Vec<u32>> = Vec::new();
    for g in gens {
        if span.insert(g) {
            elems.push(g.clone());
        }
    }
    let mut i = 0;
    while i < elems.len() {
        for j in 0..i {
            let b = alg.bracket(&elems[i], &elems[j]);
            if span.insert(&b) {
                elems.push(b);
            }
        }
        i += 1;
    }
    SubalgebraSpan {
        parent: alg,
        coords: FpMatrix::from_reduced_rows(alg.field(), alg.dim(), span.rows()),
        is_subalgebra: true,
    }
}

/// N = Ĥ_(1) ⊕ kX.
pub fn n_subalgebra(alg: &RestrictedAlgebra) -> SubalgebraSpan<'_> {
    let mut rows: Vec<Vec<u32>> =
        (0..alg.dim()).filter(|&i| alg.depth(i) >= 1).map(|i| alg.unit(i)).collect();
    rows.push(alg.named_coords("X").expect("X in Ĥ"));
    SubalgebraSpan::new(alg, &rows)
}

fn named_list(alg: &RestrictedAlgebra, names: &[&str]) -> Vec<(String, Vec<u32>)> {
    names
        .iter()
        .map(|n| (n.to_string(), alg.named_coords(n).expect("named element in Ĥ")))
        .collect()
}

/// Generators of N: X, x^(p-1)∂_y, A, C, and J when p = 5.
pub fn n_generators(alg: &RestrictedAlgebra) -> Vec<(String, Vec<u32>)> {
    let mut names = vec!["X", "x^(p-1)dy", "A", "C"];
    if alg.p() == 5 {
        names.push("J");
    }
    named_list(alg, &names)
}

/// The four-element set without the p = 5 correction.
pub fn n_generators_without_j(alg: &RestrictedAlgebra) -> Vec<(String, Vec<u32>)> {
    named_list(alg, &["X", "x^(p-1)dy", "A", "C"])
}

/// Lie-algebra generators of Ĥ: the N generators together with Y, ∂_x',
/// ∂_y, x∂_x - y∂_y and x∂_x + y∂_y.
pub fn lie_generators(alg: &RestrictedAlgebra) -> Vec<(String, Vec<u32>)> {
    let mut out = n_generators(alg);
    out.extend(named_list(alg, &["Y", "dx'", "dy", "H", "T"]));
    out
}

/// The Witt subalgebra W(1;1) inside Ĥ, with basis ∂_y and
/// `y^(j)∂_y - x y^(j-1)∂_x` playing the roles `x^(j)∂`.
#[derive(Clone, Debug)]
pub struct WittSubalgebra {
    /// W as a restricted algebra in its own right, basis slot j = role x^(j)∂.
    pub alg: RestrictedAlgebra,
    /// Coordinates of each role in the ambient Ĥ basis.
    pub in_parent: Vec<Vec<u32>>,
}

pub fn build_w1_subalgebra(hhat: &RestrictedAlgebra) -> Result<WittSubalgebra, Error> {
    let p = hhat.p();
    let basis: Vec<Derivation> = (0..p)
        .map(|j| if j == 0 { Derivation::dy(p) } else { h_family_two(p, 1, j) })
        .collect();
    let labels = (0..p)
        .map(|j| match j {
            0 => "d".to_string(),
            1 => "xd".to_string(),
            _ => format!("x^({j})d"),
        })
        .collect();
    let in_parent = basis
        .iter()
        .map(|d| hhat.coords(d).ok_or_else(|| Error::NotInSpan(d.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    let alg = RestrictedAlgebra::from_basis(p, basis, labels, BTreeMap::new())?;
    Ok(WittSubalgebra { alg, in_parent })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hh(p: u32) -> RestrictedAlgebra {
        build_hhat(p).unwrap()
    }

    #[test]
    fn w2_dimension_and_sample_brackets() {
        let w2 = build_w2(5).unwrap();
        assert_eq!(w2.dim(), 50);
        let b = Derivation::dx(5).bracket(&Derivation::term_y(5, 2, 0, 1));
        assert_eq!(b, Derivation::term_y(5, 1, 0, 1));
        let b = Derivation::term_y(5, 0, 1, 1).bracket(&Derivation::dy(5));
        assert_eq!(b, Derivation::dy(5).scale(4));
    }

    #[test]
    fn bracket_agrees_with_operator_commutator() {
        let p = 5;
        let d = h_family_two(p, 2, 3);
        let e = h_family_one(p, 2);
        let lhs = d.bracket(&e).operator();
        let rhs = d.operator().mul(&e.operator()).sub(&e.operator().mul(&d.operator()));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn hamiltonian_dimensions() {
        let w2 = build_w2(5).unwrap();
        let h = build_h(&w2).unwrap();
        assert_eq!(h.dim(), 25);
        let hhat = build_p_envelope(&h).unwrap();
        assert_eq!(hhat.dim(), 26);
    }

    #[test]
    fn named_brackets() {
        let p = 7;
        let a = hh(p);
        let n = |s: &str| a.named(s).unwrap().clone();
        assert_eq!(n("X").bracket(&n("A")), n("B").scale(2));
        assert_eq!(n("H").bracket(&n("X")), n("X").scale(2));
        assert_eq!(n("H").bracket(&n("Y")), n("Y").scale(p - 2));
        assert_eq!(n("X").bracket(&n("Y")), n("H"));
    }

    #[test]
    fn p_map_facts() {
        for p in [5, 7] {
            let dy = Derivation::dy(p);
            assert!(dy.p_power().unwrap().is_zero());
            let e = Derivation::dx(p).scale(p - 1).add(&Derivation::term_y(p, p - 1, 1, 1));
            assert_eq!(e.p_power().unwrap(), Derivation::term_y(p, 0, 1, 1));
            let dxp = h_family_one(p, 1);
            assert_eq!(dxp.p_power().unwrap(), Derivation::term_y(p, 0, 1, p as i64 - 1));
            let xdx = Derivation::term_x(p, 1, 0, 1);
            assert_eq!(xdx.p_power().unwrap(), xdx);
            // single non-toral terms of non-negative degree are p-nilpotent
            for d in [
                Derivation::term_x(p, 2, 1, 1),
                Derivation::term_y(p, 1, 0, 1),
                Derivation::term_x(p, 0, 1, 1),
                Derivation::term_y(p, 3, 2, 1),
            ] {
                assert!(d.p_power().unwrap().is_zero(), "{d}");
            }
        }
    }

    #[test]
    fn filtration_dimensions() {
        for p in [5, 7] {
            let a = hh(p);
            let n = (p * p) as usize;
            assert_eq!(filtration_component(&a, -1).dim(), n + 1);
            assert_eq!(filtration_component(&a, -3).dim(), n + 1);
            assert_eq!(filtration_component(&a, 0).dim(), n - 1);
            assert_eq!(filtration_component(&a, 1).dim(), n - 5);
            let h0 = filtration_component(&a, 0);
            let h1 = filtration_component(&a, 1);
            assert!(h0.is_subalgebra && h1.is_subalgebra);
            assert!(h0.bracket_within(&h1, &h1));
        }
    }

    #[test]
    fn gl2_projection_on_representatives() {
        let a = hh(5);
        let x = a.named_coords("X").unwrap();
        let y = a.named_coords("Y").unwrap();
        assert_eq!(gl2_projection(&a, &x).unwrap(), [[0, 1], [0, 0]]);
        let yx = a.bracket(&y, &x);
        assert_eq!(gl2_projection(&a, &yx).unwrap(), [[4, 0], [0, 1]]);
        assert!(gl2_projection(&a, &a.named_coords("dy").unwrap()).is_err());
        let c = a.named_coords("C").unwrap();
        assert_eq!(gl2_projection(&a, &c).unwrap(), [[0, 0], [0, 0]]);
    }

    #[test]
    fn witt_subalgebra_roles() {
        let a = hh(5);
        let w = build_w1_subalgebra(&a).unwrap();
        assert_eq!(w.alg.dim(), 5);
        let d = w.alg.basis()[0].clone();
        let xd = w.alg.basis()[1].clone();
        assert_eq!(d.bracket(&xd), d);
        assert!(d.p_power().unwrap().is_zero());
    }
}
