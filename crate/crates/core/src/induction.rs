//! Induced modules by PBW straightening.
//!
//! A module induced from a subalgebra with complement `e_0, …, e_{c-1}` has
//! basis `e_0^{a_0} ⋯ e_{c-1}^{a_{c-1}} ⊗ m_i` with `0 <= a_t < p`. The
//! engine computes `b · (e^a ⊗ m)` for every basis element `b` by peeling off
//! the leftmost factor: `b e_u w = e_u (b w) + [b, e_u] w`, and reduces
//! `e_t^p` to `e_t^[p]`. For Ĥ the complement is `∂_x', ∂_y` and the
//! inducing module is a simple restricted 𝔤𝔩₂-module `L₀(λ)`.

use std::collections::BTreeMap;

use crate::cartan::{RestrictedAlgebra, Weight};
use crate::dividedpowers::binom_mod;
use crate::primefield::{Fp, FpMatrix};
use crate::repstructure::{MatrixModule, PbwTag, PbwTags, SparseMat};
use crate::Error;

/// Slots of the 𝔤𝔩₂ representatives in the Ĥ basis.
const SLOT_XDX: usize = 2;
const SLOT_YDY: usize = 3;
const SLOT_X: usize = 4;
const SLOT_Y: usize = 5;

/// A simple restricted 𝔤𝔩₂-module with basis `m_1, …, m_{n+1}`, where `m_{n+1}`
/// is the highest weight vector of weight λ and `n ≡ λ₁ - λ₂` lies in `[0, p)`.
#[derive(Clone, Debug)]
pub struct Gl2Module {
    field: Fp,
    lambda: Weight,
    n: u32,
    x: FpMatrix,
    y: FpMatrix,
    xdx: FpMatrix,
    ydy: FpMatrix,
}

impl Gl2Module {
    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn lambda(&self) -> Weight {
        self.lambda
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n as usize + 1
    }

    /// Torus weight of `m_i` (1-based).
    pub fn weight(&self, i: u32) -> Weight {
        let f = self.field;
        let s = self.n + 1 - i;
        (f.sub(self.lambda.0, s % self.p()), f.add(self.lambda.1, s % self.p()))
    }

    pub fn x(&self) -> &FpMatrix {
        &self.x
    }

    pub fn y(&self) -> &FpMatrix {
        &self.y
    }

    pub fn xdx(&self) -> &FpMatrix {
        &self.xdx
    }

    pub fn ydy(&self) -> &FpMatrix {
        &self.ydy
    }

    /// `[rho(X), rho(Y)] = rho(x∂_x - y∂_y)`, `rho(X)^p = rho(Y)^p = 0` and the
    /// torus acts by idempotent-power (toral) matrices.
    pub fn check(&self) -> Result<(), Error> {
        let p = self.p() as u64;
        let comm = self.x.mul(&self.y).sub(&self.y.mul(&self.x));
        let ok = comm == self.xdx.sub(&self.ydy)
            && self.x.pow(p).is_zero()
            && self.y.pow(p).is_zero()
            && self.xdx.pow(p) == self.xdx
            && self.ydy.pow(p) == self.ydy;
        if ok {
            Ok(())
        } else {
            Err(Error::Invariant(format!("L0{:?} is not a restricted gl2-module", self.lambda)))
        }
    }
}

/// `L₀(λ)` with `X m_i = m_{i+1}` and `Y m_i = (i-1)(n-i+2) m_{i-1}`.
pub fn gl2_simple(p: u32, lambda: Weight) -> Result<Gl2Module, Error> {
    let field = Fp::new(p)?;
    let lambda = (lambda.0 % p, lambda.1 % p);
    let n = field.sub(lambda.0, lambda.1);
    let d = n as usize + 1;
    let mut x = FpMatrix::zeros(field, d, d);
    let mut y = FpMatrix::zeros(field, d, d);
    let mut xdx = FpMatrix::zeros(field, d, d);
    let mut ydy = FpMatrix::zeros(field, d, d);
    let mut m = Gl2Module { field, lambda, n, x: x.clone(), y: y.clone(), xdx: xdx.clone(), ydy: ydy.clone() };
    for i in 1..=d as u32 {
        let c = (i - 1) as usize;
        if i <= n {
            x.set(c + 1, c, 1);
        }
        if i >= 2 {
            let coef = field.from_i64((i as i64 - 1) * (n as i64 - i as i64 + 2));
            y.set(c - 1, c, coef);
        }
        let w = m.weight(i);
        xdx.set(c, c, w.0);
        ydy.set(c, c, w.1);
    }
    m.x = x;
    m.y = y;
    m.xdx = xdx;
    m.ydy = ydy;
    Ok(m)
}

/// Inducing data for the generic engine.
pub struct Induction<'a> {
    pub alg: &'a RestrictedAlgebra,
    /// Basis indices of the complement, in PBW order.
    pub complement: Vec<usize>,
    /// Action of each basis element on the inducing module; `None` acts as zero.
    /// Entries for complement elements are ignored.
    pub base: Vec<Option<SparseMat>>,
    pub base_weights: Vec<Weight>,
}

#[derive(Clone)]
enum Slot {
    Todo,
    Busy,
    Done(Vec<(u32, u32)>),
}

struct Engine<'a> {
    data: &'a Induction<'a>,
    field: Fp,
    p: u32,
    d: usize,
    dim: usize,
    comp_pos: Vec<Option<usize>>,
    memo: Vec<Slot>,
}

type Acc = BTreeMap<u32, u32>;

impl<'a> Engine<'a> {
    fn new(data: &'a Induction<'a>) -> Self {
        let p = data.alg.p();
        let d = data.base_weights.len();
        let dim = (p as usize).pow(data.complement.len() as u32) * d;
        let mut comp_pos = vec![None; data.alg.dim()];
        for (t, &k) in data.complement.iter().enumerate() {
            comp_pos[k] = Some(t);
        }
        Engine {
            data,
            field: data.alg.field(),
            p,
            d,
            dim,
            comp_pos,
            memo: vec![Slot::Todo; data.alg.dim() * dim],
        }
    }

    fn decode(&self, col: usize) -> (Vec<u32>, usize) {
        let c = self.data.complement.len();
        let mut exps = vec![0; c];
        let mut rest = col / self.d;
        for t in (0..c).rev() {
            exps[t] = (rest % self.p as usize) as u32;
            rest /= self.p as usize;
        }
        (exps, col % self.d)
    }

    fn encode(&self, exps: &[u32], i: usize) -> usize {
        let mut idx = 0usize;
        for &a in exps {
            idx = idx * self.p as usize + a as usize;
        }
        idx * self.d + i
    }

    fn add_into(&self, acc: &mut Acc, v: &[(u32, u32)], c: u32) {
        for &(j, x) in v {
            let slot = acc.entry(j).or_insert(0);
            *slot = self.field.mul_add(*slot, c, x);
        }
    }

    /// `b_k · (e^a ⊗ m_i)` for the basis vector `col`.
    fn act(&mut self, k: usize, col: usize) -> Result<Vec<(u32, u32)>, Error> {
        let key = k * self.dim + col;
        match &self.memo[key] {
            Slot::Done(v) => return Ok(v.clone()),
            Slot::Busy => {
                return Err(Error::Invariant(format!(
                    "straightening of {} on basis vector {col} does not terminate",
                    self.data.alg.label(k)
                )))
            }
            Slot::Todo => {}
        }
        self.memo[key] = Slot::Busy;
        let v = self.compute(k, col)?;
        self.memo[key] = Slot::Done(v.clone());
        Ok(v)
    }

    fn compute(&mut self, k: usize, col: usize) -> Result<Vec<(u32, u32)>, Error> {
        let (mut exps, i) = self.decode(col);
        let u = exps.iter().position(|&a| a > 0);
        if let Some(t) = self.comp_pos[k] {
            if u.is_none_or(|u| t <= u) {
                if u != Some(t) || exps[t] + 1 < self.p {
                    exps[t] += 1;
                    return Ok(vec![(self.encode(&exps, i) as u32, 1)]);
                }
                // e_t^p = e_t^[p]
                exps[t] = 0;
                let low = self.encode(&exps, i);
                let pm: Vec<(u32, u32)> = sparse(self.data.alg.p_map(k));
                return self.act_coords(&pm, low);
            }
        }
        let Some(u) = u else {
            let mut out = Vec::new();
            if let Some(m) = &self.data.base[k] {
                for &(j, c) in &m.cols[i] {
                    out.push((self.encode(&exps, j as usize) as u32, c));
                }
            }
            return Ok(out);
        };
        let e = self.data.complement[u];
        exps[u] -= 1;
        let low = self.encode(&exps, i);
        let inner = self.act(k, low)?;
        let mut acc = Acc::new();
        for (j, c) in inner {
            let img = self.act(e, j as usize)?;
            self.add_into(&mut acc, &img, c);
        }
        let sc = self.data.alg.structure_constants(k, e).to_vec();
        let comm = self.act_coords(&sc, low)?;
        self.add_into(&mut acc, &comm, 1);
        Ok(finish(acc))
    }

    fn act_coords(&mut self, coords: &[(u32, u32)], col: usize) -> Result<Vec<(u32, u32)>, Error> {
        let mut acc = Acc::new();
        for &(j, c) in coords {
            let img = self.act(j as usize, col)?;
            self.add_into(&mut acc, &img, c);
        }
        Ok(finish(acc))
    }
}

fn finish(acc: Acc) -> Vec<(u32, u32)> {
    acc.into_iter().filter(|&(_, c)| c != 0).collect()
}

fn sparse(v: &[u32]) -> Vec<(u32, u32)> {
    v.iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(j, &c)| (j as u32, c))
        .collect()
}

/// Deep recursion in the straightening needs more stack than worker threads
/// get by default.
const ENGINE_STACK: usize = 256 << 20;

/// Builds the induced module as explicit matrices.
pub fn induce(data: &Induction<'_>, label: &str) -> Result<MatrixModule, Error> {
    let alg = data.alg;
    let p = alg.p();
    let (actions, dim) = std::thread::scope(|s| {
        std::thread::Builder::new()
            .stack_size(ENGINE_STACK)
            .spawn_scoped(s, || -> Result<(Vec<SparseMat>, usize), Error> {
                let mut eng = Engine::new(data);
                let dim = eng.dim;
                let mut actions = Vec::with_capacity(alg.dim());
                for k in 0..alg.dim() {
                    let mut cols = Vec::with_capacity(dim);
                    for col in 0..dim {
                        cols.push(eng.act(k, col)?);
                    }
                    actions.push(SparseMat { rows: dim, cols });
                }
                Ok((actions, dim))
            })
            .expect("spawn engine thread")
            .join()
            .expect("engine thread panicked")
    })?;
    let eng = Engine::new(data);
    let mut weights = Vec::with_capacity(dim);
    let mut entries = Vec::with_capacity(dim);
    for col in 0..dim {
        let (exps, i) = eng.decode(col);
        let mut w = data.base_weights[i];
        for (t, &a) in exps.iter().enumerate() {
            let s = alg.weight(data.complement[t]);
            w = ((w.0 + a * s.0) % p, (w.1 + a * s.1) % p);
        }
        weights.push(w);
        entries.push(PbwTag { exps, i: i as u32 + 1 });
    }
    let tags = PbwTags { base_dim: data.base_weights.len() as u32, entries };
    MatrixModule::new(p, label, weights, actions, Some(tags))
}

/// Canonical label `Z(a,b)` with representatives in `[0, p)`.
pub fn z_label(lambda: Weight) -> String {
    format!("Z({},{})", lambda.0, lambda.1)
}

/// `Z(λ) = u(Ĥ) ⊗_{u(Ĥ_(0))} L₀(λ)` together with its PBW data.
#[derive(Clone, Debug)]
pub struct InducedModule {
    pub gl2: Gl2Module,
    pub module: MatrixModule,
}

impl InducedModule {
    pub fn p(&self) -> u32 {
        self.gl2.p()
    }

    pub fn lambda(&self) -> Weight {
        self.gl2.lambda()
    }

    pub fn n(&self) -> u32 {
        self.gl2.n()
    }

    /// Basis index of `∂_x'^{a1} ∂_y^{a2} ⊗ m_i`, with `i` 1-based.
    pub fn index(&self, a1: u32, a2: u32, i: u32) -> usize {
        ((a1 * self.p() + a2) * (self.n() + 1) + (i - 1)) as usize
    }

    /// Inverse of [`InducedModule::index`].
    pub fn decode(&self, col: usize) -> (u32, u32, u32) {
        let d = self.n() as usize + 1;
        let p = self.p() as usize;
        let rest = col / d;
        ((rest / p) as u32, (rest % p) as u32, (col % d) as u32 + 1)
    }
}

fn gl2_base(alg: &RestrictedAlgebra, m: &Gl2Module) -> Vec<Option<SparseMat>> {
    let mut base = vec![None; alg.dim()];
    base[SLOT_XDX] = Some(SparseMat::from_dense(m.xdx()));
    base[SLOT_YDY] = Some(SparseMat::from_dense(m.ydy()));
    base[SLOT_X] = Some(SparseMat::from_dense(m.x()));
    base[SLOT_Y] = Some(SparseMat::from_dense(m.y()));
    base
}

/// Builds `Z(λ)` over Ĥ (as returned by `build_hhat`).
pub fn build_induced(alg: &RestrictedAlgebra, lambda: Weight) -> Result<InducedModule, Error> {
    let gl2 = gl2_simple(alg.p(), lambda)?;
    let data = Induction {
        alg,
        complement: vec![0, 1],
        base: gl2_base(alg, &gl2),
        base_weights: (1..=gl2.dim() as u32).map(|i| gl2.weight(i)).collect(),
    };
    let module = induce(&data, &z_label(gl2.lambda()))?;
    Ok(InducedModule { gl2, module })
}

/// Ĥ-module induced from an arbitrary restricted 𝔤𝔩₂-module given by the
/// matrices of x∂_x, y∂_y, X and Y on a weight basis.
pub fn build_induced_from(
    alg: &RestrictedAlgebra,
    gl2: &Gl2Module,
    label: &str,
) -> Result<MatrixModule, Error> {
    let data = Induction {
        alg,
        complement: vec![0, 1],
        base: gl2_base(alg, gl2),
        base_weights: (1..=gl2.dim() as u32).map(|i| gl2.weight(i)).collect(),
    };
    induce(&data, label)
}

/// The restricted Verma module `Z⁺(r)` of W(1;1): induced from the span of
/// `x^(j)∂`, `j >= 1`, acting on `k·m` by `x∂ ↦ r` and `x^(j)∂ ↦ 0` for
/// `j >= 2`. Weights are recorded as `(0, x∂-eigenvalue)`.
pub fn build_witt_verma(w: &RestrictedAlgebra, r: u32) -> Result<MatrixModule, Error> {
    let p = w.p();
    let mut base = vec![None; w.dim()];
    base[1] = Some(SparseMat { rows: 1, cols: vec![if r.is_multiple_of(p) { vec![] } else { vec![(0, r % p)] }] });
    let data = Induction { alg: w, complement: vec![0], base, base_weights: vec![(0, r % p)] };
    induce(&data, &format!("Z+({})", r % p))
}

/// `C(n, k) mod p` for a possibly negative `n` treated as zero.
fn binom(n: i64, k: u64, p: u32) -> i64 {
    if n < 0 {
        return 0;
    }
    binom_mod(n as u64, k, p) as i64
}

/// `r_a = a₁ λ(a)₁ - a₁ λ(a)₂ + a₁a₂ - C(a₁,2)` as the affine operator
/// `(c_x, c_y, c_0)` meaning `c_x x∂_x + c_y y∂_y + c_0` on `m_a`.
pub fn r_coeffs(a1: u32, a2: u32, p: u32) -> (i64, i64, i64) {
    let (a1, a2) = (a1 as i64, a2 as i64);
    (a1, -a1, a1 * a2 - binom(a1, 2, p))
}

/// `s_a = a₂ (λ(a)₁ - λ(a)₂) - a₁a₂ + C(a₂,2)` in the same form.
pub fn s_coeffs(a1: u32, a2: u32, p: u32) -> (i64, i64, i64) {
    let (a1, a2) = (a1 as i64, a2 as i64);
    (a2, -a2, -a1 * a2 + binom(a2, 2, p))
}

/// `t_a = C(a₁,2)(λ(a)₂ - λ(a)₁) - C(a₁,2)a₂ + C(a₁,3)` in the same form.
pub fn t_coeffs(a1: u32, a2: u32, p: u32) -> (i64, i64, i64) {
    let c2 = binom(a1 as i64, 2, p);
    (-c2, c2, -c2 * a2 as i64 + binom(a1 as i64, 3, p))
}

/// `w_a = a₂ λ(a)₁ - C(a₂,2)` in the same form.
pub fn w_coeffs(_a1: u32, a2: u32, p: u32) -> (i64, i64, i64) {
    (a2 as i64, 0, -binom(a2 as i64, 2, p))
}

/// An operator on `L₀(λ)` appearing in the hand formulas.
#[derive(Clone, Copy, Debug)]
enum Op {
    Id,
    X,
    Y,
    /// `c_x x∂_x + c_y y∂_y + c_0`.
    Lin(i64, i64, i64),
}

struct Sink<'a> {
    z: &'a InducedModule,
    field: Fp,
    out: Vec<u32>,
}

impl Sink<'_> {
    /// Adds `c · ∂_x'^{b1} ∂_y^{b2} ⊗ op(m_i)`; out-of-range exponents vanish.
    fn emit(&mut self, c: i64, b1: i64, b2: i64, op: Op, i: u32) {
        let p = self.z.p() as i64;
        if !(0..p).contains(&b1) || !(0..p).contains(&b2) {
            return;
        }
        let c = self.field.from_i64(c);
        if c == 0 {
            return;
        }
        let g = &self.z.gl2;
        let col = (i - 1) as usize;
        let image: Vec<(u32, u32)> = match op {
            Op::Id => vec![(i, 1)],
            Op::X => (0..g.dim()).filter_map(|r| nz(r, g.x().get(r, col))).collect(),
            Op::Y => (0..g.dim()).filter_map(|r| nz(r, g.y().get(r, col))).collect(),
            Op::Lin(cx, cy, c0) => {
                let w = g.weight(i);
                let f = self.field;
                let v = f.add(
                    f.add(f.mul(f.from_i64(cx), w.0), f.mul(f.from_i64(cy), w.1)),
                    f.from_i64(c0),
                );
                vec![(i, v)]
            }
        };
        for (j, v) in image {
            if v == 0 {
                continue;
            }
            let idx = self.z.index(b1 as u32, b2 as u32, j);
            self.out[idx] = self.field.mul_add(self.out[idx], c, v);
        }
    }
}

fn nz(r: usize, v: u32) -> Option<(u32, u32)> {
    (v != 0).then_some((r as u32 + 1, v))
}

/// Hand formulas for the action of distinguished elements on `Z(λ)`.
///
/// `X`, `dy`, `Y`, `x^(p-1)dy`, `L` and `J` (p = 5 only) hold on every vector.
/// `A`, `B`, `C`, `D`, `F` and `x^(2)dy` are the simplified forms that assume
/// the input is a maximal vector.
pub const ORACLE_NAMES: [&str; 12] =
    ["X", "x^(2)dy", "B", "A", "C", "D", "F", "x^(p-1)dy", "Y", "dy", "L", "J"];

/// Names whose formulas hold without any hypothesis on the input vector.
pub const UNCONDITIONAL_ORACLES: [&str; 6] = ["X", "dy", "Y", "x^(p-1)dy", "L", "J"];

pub fn oracle_action(z: &InducedModule, name: &str, v: &[u32]) -> Result<Vec<u32>, Error> {
    let p = z.p();
    let pi = p as i64;
    let field = z.module.field();
    let mut sink = Sink { z, field, out: vec![0; z.module.dim()] };
    if name == "J" {
        if p != 5 {
            return Err(Error::InvalidInput("the J formula is only stated for p = 5".into()));
        }
        oracle_j(&mut sink, v);
        return Ok(sink.out);
    }
    if !ORACLE_NAMES.contains(&name) {
        return Err(Error::UnknownName(name.to_string()));
    }
    let b2 = |n: i64| binom(n, 2, p);
    let b3 = |n: i64| binom(n, 3, p);
    for (col, &coef) in v.iter().enumerate() {
        if coef == 0 {
            continue;
        }
        let (a1, a2, i) = z.decode(col);
        let c = coef as i64;
        let (x1, x2) = (a1 as i64, a2 as i64);
        let s = &mut sink;
        match name {
            "X" => {
                s.emit(c, x1, x2, Op::X, i);
                s.emit(-c * x1, x1 - 1, x2 + 1, Op::Id, i);
            }
            "dy" => {
                s.emit(c, x1, x2 + 1, Op::Id, i);
                if x1 == pi - 1 {
                    s.emit(c, 0, x2, Op::X, i);
                }
            }
            "Y" => {
                s.emit(c, x1, x2, Op::Y, i);
                if x1 == pi - 2 {
                    s.emit(-c * x2, pi - 1, x2 - 1, Op::Id, i);
                    s.emit(-c * b2(x2), 0, x2 - 2, Op::X, i);
                } else if x1 == pi - 1 {
                    s.emit(c, 0, x2 - 1, Op::Lin(x2, 0, -b2(x2)), i);
                    s.emit(c * b2(x2), 1, x2 - 2, Op::X, i);
                } else {
                    s.emit(-c * x2, x1 + 1, x2 - 1, Op::Id, i);
                }
            }
            "x^(p-1)dy" => {
                if x1 == pi - 2 {
                    s.emit(-c, 0, x2, Op::X, i);
                }
                if x1 == pi - 1 {
                    s.emit(c, 1, x2, Op::X, i);
                    s.emit(c, 0, x2 + 1, Op::Id, i);
                }
            }
            "L" => {
                // The formula is only ever used as `0 = L·v`, where the
                // overall sign is immaterial; this is the sign of ρ(L).
                let c = -c;
                if x2 == pi - 3 {
                    s.emit(-c * x1, x1 - 1, 0, Op::Y, i);
                }
                if x2 == pi - 2 {
                    s.emit(2 * c * x1, x1 - 1, 1, Op::Y, i);
                    s.emit(c, x1, 0, Op::Lin(-1, 1, x1), i);
                }
                if x2 == pi - 1 {
                    s.emit(-c * x1, x1 - 1, 2, Op::Y, i);
                    s.emit(c, x1, 1, Op::Lin(1, -1, -1 - x1), i);
                    if x1 == pi - 1 {
                        s.emit(-2 * c, 0, 0, Op::X, i);
                    }
                }
            }
            "A" => {
                let (cx, cy, c0) = s_coeffs(a1, a2, p);
                s.emit(c, x1, x2 - 1, Op::Lin(cx, cy, c0), i);
                s.emit(c * x1, x1 - 1, x2, Op::Y, i);
            }
            "B" => {
                let (cx, cy, c0) = r_coeffs(a1, a2, p);
                s.emit(c, x1 - 1, x2, Op::Lin(cx, cy, c0), i);
                s.emit(-c * x2, x1, x2 - 1, Op::X, i);
            }
            "C" => {
                if x1 == pi - 1 {
                    s.emit(-c * x2, pi - 1, x2 - 1, Op::Y, i);
                    let k2 = b2(x2);
                    s.emit(c, 0, x2 - 2, Op::Lin(-2 * k2, k2, k2 * (x2 - 2) - 2 * b3(x2)), i);
                } else {
                    s.emit(c * b2(x2), x1 + 1, x2 - 2, Op::Id, i);
                    s.emit(-c * x2, x1, x2 - 1, Op::Y, i);
                    if x1 == pi - 2 {
                        s.emit(2 * c * b3(x2), 0, x2 - 3, Op::X, i);
                    }
                }
            }
            "D" => {
                let (cx, cy, c0) = t_coeffs(a1, a2, p);
                s.emit(c, x1 - 2, x2, Op::Lin(cx, cy, c0), i);
                s.emit(c * x1 * x2, x1 - 1, x2 - 1, Op::X, i);
            }
            "x^(2)dy" => {
                s.emit(c * b2(x1), x1 - 2, x2 + 1, Op::Id, i);
                s.emit(-c * x1, x1 - 1, x2, Op::X, i);
            }
            "F" => {
                let k = b2(x1);
                if x2 == pi - 3 {
                    s.emit(-c * k, x1 - 2, 0, Op::Y, i);
                }
                if x2 == pi - 2 {
                    s.emit(2 * c * k, x1 - 2, 1, Op::Y, i);
                    s.emit(c, x1 - 1, 0, Op::Lin(-x1, x1, k), i);
                }
                if x2 == pi - 1 {
                    s.emit(c, x1, 0, Op::X, i);
                    s.emit(-c * k, x1 - 2, 2, Op::Y, i);
                    s.emit(c, x1 - 1, 1, Op::Lin(x1, -x1, -x1 - k), i);
                }
            }
            _ => unreachable!(),
        }
    }
    Ok(sink.out)
}

/// The p = 5 formula: only components with `a` near the top contribute.
fn oracle_j(s: &mut Sink<'_>, v: &[u32]) {
    // (source a, coefficient, target b, operator)
    let table: [((u32, u32), i64, (i64, i64), Op); 10] = [
        ((2, 4), 1, (0, 0), Op::X),
        ((3, 3), 1, (0, 0), Op::Lin(-1, 1, 0)),
        ((4, 2), -1, (0, 0), Op::Y),
        ((3, 4), 3, (1, 0), Op::X),
        ((3, 4), 1, (0, 1), Op::Lin(-4, 4, -1)),
        ((4, 3), 1, (1, 0), Op::Lin(-4, 4, 1)),
        ((4, 3), -3, (0, 1), Op::Y),
        ((4, 4), 1, (1, 1), Op::Lin(-1, 1, 0)),
        ((4, 4), 1, (2, 0), Op::X),
        ((4, 4), -1, (0, 2), Op::Y),
    ];
    for (col, &coef) in v.iter().enumerate() {
        if coef == 0 {
            continue;
        }
        let (a1, a2, i) = s.z.decode(col);
        for &(src, k, (b1, b2), op) in &table {
            if src == (a1, a2) {
                s.emit(k * coef as i64, b1, b2, op, i);
            }
        }
    }
}

/// One failed consequence of a vector being maximal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfoViolation {
    pub item: u8,
    pub a: (u32, u32),
}

/// Evaluates the five consequences of maximality on the components `m_a`:
/// (1) `X m_a = 0` if `a₁ = p-1` or `a₂ = 0`; (2) `r_a m_a = 0` if `a₂ = p-1`;
/// (3) `s_a m_a = 0` if `a₁ = p-1`; (4) `Y m_a = 0` if `a₂ = p-1`;
/// (5) `t_a m_a = 0` if `a₂ = p-1`.
pub fn info_violations(z: &InducedModule, v: &[u32]) -> Vec<InfoViolation> {
    let p = z.p();
    let f = z.module.field();
    let d = z.gl2.dim();
    let g = &z.gl2;
    let mut out = Vec::new();
    for a1 in 0..p {
        for a2 in 0..p {
            let m: Vec<u32> = (1..=d as u32).map(|i| v[z.index(a1, a2, i)]).collect();
            if m.iter().all(|&x| x == 0) {
                continue;
            }
            let lin = |(cx, cy, c0): (i64, i64, i64)| -> bool {
                (1..=d as u32).all(|i| {
                    let w = g.weight(i);
                    let s = f.add(
                        f.add(f.mul(f.from_i64(cx), w.0), f.mul(f.from_i64(cy), w.1)),
                        f.from_i64(c0),
                    );
                    f.mul(s, m[i as usize - 1]) == 0
                })
            };
            let checks = [
                (1u8, a1 == p - 1 || a2 == 0, g.x().mul_vec(&m).iter().all(|&x| x == 0)),
                (2, a2 == p - 1, lin(r_coeffs(a1, a2, p))),
                (3, a1 == p - 1, lin(s_coeffs(a1, a2, p))),
                (4, a2 == p - 1, g.y().mul_vec(&m).iter().all(|&x| x == 0)),
                (5, a2 == p - 1, lin(t_coeffs(a1, a2, p))),
            ];
            for (item, applies, holds) in checks {
                if applies && !holds {
                    out.push(InfoViolation { item, a: (a1, a2) });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::build_hhat;

    #[test]
    fn gl2_simples_are_restricted() {
        for p in [5, 7] {
            for a in 0..p {
                for b in 0..p {
                    gl2_simple(p, (a, b)).unwrap().check().unwrap();
                }
            }
        }
    }

    #[test]
    fn two_dimensional_gl2_module() {
        let m = gl2_simple(5, (3, 2)).unwrap();
        assert_eq!(m.dim(), 2);
        assert_eq!(m.x().get(1, 0), 1);
        assert_eq!(m.y().get(0, 1), 1);
        assert_eq!(m.weight(2), (3, 2));
        assert_eq!(m.weight(1), (2, 3));
    }

    #[test]
    fn three_dimensional_gl2_module() {
        // Y m_2 = 1·(2-2+2) m_1 = 2 m_1 and Y m_3 = 2·1 m_2.
        let m = gl2_simple(5, (2, 0)).unwrap();
        assert_eq!(m.dim(), 3);
        assert_eq!(m.y().get(0, 1), 2);
        assert_eq!(m.y().get(1, 2), 2);
    }

    #[test]
    fn induced_dimensions_and_checks() {
        let alg = build_hhat(5).unwrap();
        for (lambda, dim) in [((0, 0), 25), ((2, 0), 75), ((3, 2), 50)] {
            let z = build_induced(&alg, lambda).unwrap();
            assert_eq!(z.module.dim(), dim);
            z.module.check_weights(&alg).unwrap();
            z.module.check_homomorphism(&alg).unwrap();
            z.module.check_restricted(&alg).unwrap();
        }
    }

    #[test]
    fn torus_acts_diagonally_with_shifted_weights() {
        let alg = build_hhat(5).unwrap();
        let z = build_induced(&alg, (4, 1)).unwrap();
        let f = z.module.field();
        for col in 0..z.module.dim() {
            let (a1, a2, i) = z.decode(col);
            let w = z.gl2.weight(i);
            let e = crate::repstructure::unit(z.module.dim(), col);
            let mut ex = vec![0; z.module.dim()];
            ex[col] = f.sub(w.0, a1);
            assert_eq!(z.module.act(SLOT_XDX, &e), ex);
            let mut ey = vec![0; z.module.dim()];
            ey[col] = f.sub(w.1, a2);
            assert_eq!(z.module.act(SLOT_YDY, &e), ey);
        }
    }

    #[test]
    fn dx_prime_wraps_with_minus_ydy() {
        // ∂_x'·∂_x'^{p-1} ⊗ m = -y∂_y ⊗ m = -a (1 ⊗ m) on Z(a,a).
        let alg = build_hhat(5).unwrap();
        let z = build_induced(&alg, (3, 3)).unwrap();
        let e = crate::repstructure::unit(z.module.dim(), z.index(4, 0, 1));
        let img = z.module.act(0, &e);
        let mut want = vec![0; z.module.dim()];
        want[z.index(0, 0, 1)] = 5 - 3;
        assert_eq!(img, want);
    }

    #[test]
    fn witt_verma_is_a_restricted_module() {
        let alg = build_hhat(7).unwrap();
        let w = crate::cartan::build_w1_subalgebra(&alg).unwrap();
        for r in 0..7 {
            let m = build_witt_verma(&w.alg, r).unwrap();
            assert_eq!(m.dim(), 7);
            m.check_homomorphism(&w.alg).unwrap();
            m.check_restricted(&w.alg).unwrap();
        }
    }
}
