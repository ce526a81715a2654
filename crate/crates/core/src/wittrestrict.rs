//! Restriction to the Witt subalgebra W(1;1) ⊂ Ĥ, composition factors via the
//! graded weight-list algorithm and directly, and the balanced-toral check.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use crate::cartan::{RestrictedAlgebra, WittSubalgebra};
use crate::induction::build_witt_verma;
use crate::primefield::FpMatrix;
use crate::repstructure::{factor_signatures, head, max_weights, witt_acting, MatrixModule, Signature};
use crate::Error;

/// Multiplicities of the Chang modules `L_W(r)`, keyed by `r`.
pub type FactorMultiset = BTreeMap<u32, u32>;

/// `dim L_W(r)`: 1 for r = 0, p-1 for r = p-1 and p otherwise.
pub fn chang_dim(p: u32, r: u32) -> usize {
    match r {
        0 => 1,
        r if r == p - 1 => p as usize - 1,
        _ => p as usize,
    }
}

/// Total dimension accounted for by a multiset.
pub fn multiset_dim(p: u32, m: &FactorMultiset) -> usize {
    m.iter().map(|(&r, &k)| chang_dim(p, r) * k as usize).sum()
}

/// The W-module obtained by letting role `j` act as `Σ_k in_parent[j][k] ρ(b_k)`.
/// The torus weight `(w₁, w₂)` becomes `(0, w₂ - w₁)`, the x∂-eigenvalue.
pub fn restrict_to_w(m: &MatrixModule, w: &WittSubalgebra) -> Result<MatrixModule, Error> {
    let p = m.p();
    let actions = w.in_parent.iter().map(|c| m.combine(c)).collect();
    let weights = m.weights().iter().map(|&(a, b)| (0, (b + p - a) % p)).collect();
    MatrixModule::new(p, format!("{}|W", m.label()), weights, actions, m.tags().cloned())
}

/// A W-module with a filtration by layers, each layer graded so that ∂ raises
/// the grade by 2 and x∂ preserves it.
#[derive(Clone, Debug)]
pub struct GradedWitt {
    pub module: MatrixModule,
    pub layers: Vec<usize>,
    pub grades: Vec<i64>,
}

impl GradedWitt {
    /// The x∂-weight lists `ℓ_g` of layer `k`.
    pub fn weight_lists(&self, k: usize) -> BTreeMap<i64, Vec<u32>> {
        let mut lists: BTreeMap<i64, Vec<u32>> = BTreeMap::new();
        for (c, &l) in self.layers.iter().enumerate() {
            if l == k {
                lists.entry(self.grades[c]).or_default().push(self.module.weights()[c].1);
            }
        }
        lists
    }

    pub fn layer_count(&self) -> usize {
        self.layers.iter().copied().max().map_or(0, |m| m + 1)
    }
}

/// Grades a restricted W-module coming from an induced Ĥ-module by its PBW
/// tags: `∂_x'^{a₁} ∂_y^{a₂} ⊗ m_i` lies in layer `i-1` when `a₁ <= p-2` and
/// in the last layer when `a₁ = p-1`, with grade `2a₂`. Each role must map a
/// layer into itself and lower layers; within a layer ∂ must raise the grade
/// by exactly 2 and x∂ must act diagonally.
pub fn grade_by_tags(m: &MatrixModule) -> Result<GradedWitt, Error> {
    let p = m.p();
    let tags = m
        .tags()
        .ok_or_else(|| Error::InvalidInput(format!("{} carries no PBW tags", m.label())))?;
    let mut layers = Vec::with_capacity(m.dim());
    let mut grades = Vec::with_capacity(m.dim());
    for t in &tags.entries {
        if t.exps.len() != 2 {
            return Err(Error::InvalidInput("tags do not come from Ĥ".into()));
        }
        layers.push(if t.exps[0] == p - 1 { tags.base_dim as usize } else { t.i as usize - 1 });
        grades.push(2 * t.exps[1] as i64);
    }
    let g = GradedWitt { module: m.clone(), layers, grades };
    check_grading(&g)?;
    Ok(g)
}

/// Places every basis vector in layer 0 with the given grades.
pub fn grade_explicit(m: &MatrixModule, grades: Vec<i64>) -> Result<GradedWitt, Error> {
    let g = GradedWitt { module: m.clone(), layers: vec![0; m.dim()], grades };
    check_grading(&g)?;
    Ok(g)
}

/// Verifies the layer and grading conditions, naming a witness basis vector.
pub fn check_grading(g: &GradedWitt) -> Result<(), Error> {
    let m = &g.module;
    for (k, a) in m.actions().iter().enumerate() {
        for (c, col) in a.cols.iter().enumerate() {
            for &(r, _) in col {
                let r = r as usize;
                if g.layers[r] > g.layers[c] {
                    return Err(Error::Invariant(format!(
                        "role {k} sends basis vector {c} up from layer {} to layer {}",
                        g.layers[c], g.layers[r]
                    )));
                }
                if g.layers[r] < g.layers[c] {
                    continue;
                }
                let ok = match k {
                    0 => g.grades[r] == g.grades[c] + 2,
                    1 => r == c,
                    _ => true,
                };
                if !ok {
                    return Err(Error::Invariant(format!(
                        "grading violated by role {k} on basis vector {c}"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// How step (i) picks μ from the top list.
pub enum Pick<'a, R: Rng> {
    Largest,
    Random(&'a mut R),
}

fn remove_one(lists: &mut BTreeMap<i64, Vec<u32>>, g: i64, w: u32) -> Result<(), Error> {
    let l = lists
        .get_mut(&g)
        .ok_or_else(|| Error::Invariant(format!("grade {g} is empty but weight {w} is required")))?;
    let pos = l
        .iter()
        .position(|&x| x == w)
        .ok_or_else(|| Error::Invariant(format!("weight {w} missing from grade {g}")))?;
    l.swap_remove(pos);
    if l.is_empty() {
        lists.remove(&g);
    }
    Ok(())
}

/// The weight-list algorithm on one family of lists.
pub fn run_weight_lists<R: Rng>(
    p: u32,
    mut lists: BTreeMap<i64, Vec<u32>>,
    pick: &mut Pick<'_, R>,
) -> Result<FactorMultiset, Error> {
    let mut out = FactorMultiset::new();
    while let Some((&r, top)) = lists.iter().next_back() {
        let mu = match pick {
            Pick::Largest => *top.iter().max().expect("nonempty list"),
            Pick::Random(rng) => top[rng.gen_range(0..top.len())],
        };
        match mu {
            0 => {
                *out.entry(0).or_insert(0) += 1;
                remove_one(&mut lists, r, 0)?;
            }
            1 => {
                *out.entry(p - 1).or_insert(0) += 1;
                for k in 0..(p - 1) {
                    remove_one(&mut lists, r - 2 * k as i64, 1 + k)?;
                }
            }
            _ => {
                *out.entry(mu - 1).or_insert(0) += 1;
                for k in 0..p {
                    remove_one(&mut lists, r - 2 * k as i64, (mu + k) % p)?;
                }
            }
        }
    }
    Ok(out)
}

/// Composition factors of a graded W-module: the algorithm run on each layer.
pub fn graded_factors<R: Rng>(g: &GradedWitt, pick: &mut Pick<'_, R>) -> Result<FactorMultiset, Error> {
    let p = g.module.p();
    let mut out = FactorMultiset::new();
    for k in 0..g.layer_count() {
        for (r, c) in run_weight_lists(p, g.weight_lists(k), pick)? {
            *out.entry(r).or_insert(0) += c;
        }
    }
    if multiset_dim(p, &out) != g.module.dim() {
        return Err(Error::Invariant("factor dimensions do not add up".into()));
    }
    Ok(out)
}

/// Signatures of the Chang modules `L_W(r)`, realized as heads of `Z⁺(r)`.
pub fn chang_signatures(w: &RestrictedAlgebra) -> Result<Vec<Signature>, Error> {
    let acting = witt_acting(w);
    let p = w.p();
    let mut out = Vec::with_capacity(p as usize);
    for r in 0..p {
        let h = head(&build_witt_verma(w, r)?, &acting)?;
        if h.dim() != chang_dim(p, r) {
            return Err(Error::Invariant(format!("head of Z+({r}) has dimension {}", h.dim())));
        }
        out.push((h.dim(), max_weights(&h, &acting)));
    }
    for i in 0..out.len() {
        for j in 0..i {
            if out[i] == out[j] {
                return Err(Error::Invariant(format!("L_W({i}) and L_W({j}) share a signature")));
            }
        }
    }
    Ok(out)
}

/// Composition factors computed by the general series machinery over W, each
/// simple factor matched to a Chang module by signature.
pub fn direct_factors(m: &MatrixModule, w: &RestrictedAlgebra, chang: &[Signature]) -> Result<FactorMultiset, Error> {
    let acting = witt_acting(w);
    let mut out = FactorMultiset::new();
    for sig in factor_signatures(m, &acting)? {
        let r = chang
            .iter()
            .position(|c| *c == sig)
            .ok_or_else(|| Error::Invariant(format!("simple W-factor {sig:?} matches no Chang module")))?;
        *out.entry(r as u32).or_insert(0) += 1;
    }
    Ok(out)
}

/// Expected restriction of the simple module `L(λ)` for a catalog
/// representative λ.
pub fn expected_restriction(p: u32, lambda: (u32, u32)) -> FactorMultiset {
    let mut out = FactorMultiset::new();
    if lambda == (0, 0) {
        out.insert(0, 1);
    } else if lambda == (p - 1, p - 1) || lambda == (0, p - 1) {
        for j in 0..(p - 1) {
            out.insert(j, 1);
        }
        out.insert(p - 1, 2);
    } else {
        let r = (lambda.0 + p - lambda.1) % p;
        for j in 1..(p - 1) {
            out.insert(j, r + 1);
        }
        out.insert(0, 2 * (r + 1));
        out.insert(p - 1, 2 * (r + 1));
    }
    out
}

/// Whether `L_W(j)` occurs equally often for all `1 <= j <= p-2`.
pub fn equal_middle_multiplicities(p: u32, m: &FactorMultiset) -> bool {
    let first = m.get(&1).copied().unwrap_or(0);
    (1..(p - 1)).all(|j| m.get(&j).copied().unwrap_or(0) == first)
}

/// Eigenspace dimensions of `ad h` and the balance verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BalancedReport {
    /// `dim g(h, i)` for every `i` in F_p.
    pub eigendims: BTreeMap<u32, usize>,
    /// The common dimension of the nonzero-eigenvalue spaces, if they agree.
    pub common: Option<usize>,
    /// Common dimension exists and is divisible by `d`.
    pub balanced: bool,
    /// Every nonzero eigenspace is zero.
    pub degenerate: bool,
}

/// Checks `d`-balance of the toral element with coordinates `h`.
pub fn balanced_toral_check(alg: &RestrictedAlgebra, h: &[u32], d: usize) -> Result<BalancedReport, Error> {
    let p = alg.p();
    let f = alg.field();
    let el = alg.element(h);
    let hp = alg
        .coords(&el.p_power()?)
        .ok_or_else(|| Error::NotInSpan("p-th power of h".into()))?;
    if hp != h {
        return Err(Error::InvalidInput(format!("{el} is not toral")));
    }
    let n = alg.dim();
    let mut ad = FpMatrix::zeros(f, n, n);
    for j in 0..n {
        for (i, &c) in alg.bracket(h, &alg.unit(j)).iter().enumerate() {
            ad.set(i, j, c);
        }
    }
    let eigendims: BTreeMap<u32, usize> = (0..p).map(|c| (c, ad.eigenspace(c).len())).collect();
    let nonzero: Vec<usize> = (1..p).map(|c| eigendims[&c]).collect();
    let common = nonzero.iter().all(|&x| x == nonzero[0]).then_some(nonzero[0]);
    let degenerate = nonzero.iter().all(|&x| x == 0);
    let balanced = common.is_some_and(|c| d != 0 && c % d == 0);
    Ok(BalancedReport { eigendims, common, balanced, degenerate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{build_hhat, build_w1_subalgebra};
    use crate::induction::build_induced;
    use crate::repstructure::trivial_module;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trivial_restriction() {
        let alg = build_hhat(5).unwrap();
        let w = build_w1_subalgebra(&alg).unwrap();
        let t = restrict_to_w(&trivial_module(&alg).unwrap(), &w).unwrap();
        assert!(t.actions().iter().all(|a| a.is_zero()));
        let g = grade_by_tags(&t).unwrap();
        let f = graded_factors::<ChaCha8Rng>(&g, &mut Pick::Largest).unwrap();
        assert_eq!(f, FactorMultiset::from([(0, 1)]));
    }

    #[test]
    fn d_role_is_dy() {
        let alg = build_hhat(5).unwrap();
        let w = build_w1_subalgebra(&alg).unwrap();
        let z = build_induced(&alg, (2, 0)).unwrap();
        let r = restrict_to_w(&z.module, &w).unwrap();
        assert_eq!(r.action(0), z.module.action(1));
    }

    #[test]
    fn wrong_grading_is_rejected() {
        let alg = build_hhat(5).unwrap();
        let w = build_w1_subalgebra(&alg).unwrap();
        let z = build_induced(&alg, (2, 0)).unwrap();
        let r = restrict_to_w(&z.module, &w).unwrap();
        assert!(grade_explicit(&r, vec![0; r.dim()]).is_err());
    }

    #[test]
    fn single_zero_weight() {
        let lists = BTreeMap::from([(0i64, vec![0u32])]);
        let f = run_weight_lists::<ChaCha8Rng>(5, lists, &mut Pick::Largest).unwrap();
        assert_eq!(f, FactorMultiset::from([(0, 1)]));
    }

    #[test]
    fn chang_modules_have_distinct_signatures() {
        let alg = build_hhat(5).unwrap();
        let w = build_w1_subalgebra(&alg).unwrap();
        let sigs = chang_signatures(&w.alg).unwrap();
        assert_eq!(sigs.len(), 5);
    }

    #[test]
    fn zero_is_degenerate() {
        let alg = build_hhat(5).unwrap();
        let r = balanced_toral_check(&alg, &vec![0; alg.dim()], 1).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.eigendims[&0], alg.dim());
    }
}
