//! The verification suite, one check per acceptance criterion, instantiated
//! at a single prime. Shared by `hamrep verify` and the acceptance test.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cartan::{
    build_hhat, build_w1_subalgebra, n_generators, n_generators_without_j, n_subalgebra, spin_subalgebra,
    RestrictedAlgebra, Weight,
};
use crate::induction::{
    build_induced, info_violations, oracle_action, InducedModule, ORACLE_NAMES, UNCONDITIONAL_ORACLES,
};
use crate::repstructure::{
    build_o_module, catalog, composition_series, head, hhat_acting, induced_series, is_exceptional, is_simple,
    iso_by_intertwiner, iso_test, maximal_shapes, normalize, omega, realize_simple, Factor, PreparedGens, Shape,
};
use crate::wittrestrict::{
    balanced_toral_check, chang_signatures, direct_factors, equal_middle_multiplicities, expected_restriction,
    grade_by_tags, graded_factors, restrict_to_w, Pick,
};
use crate::Error;

/// Outcome of one check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

type Outcome = Result<String, String>;

fn fail(e: Error) -> String {
    e.to_string()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_weights(p: u32) -> Vec<Weight> {
    (0..p).flat_map(|a| (0..p).map(move |b| (a, b))).collect()
}

/// Number of simple classes is `p² - p + 1`.
pub fn catalog_count(alg: &RestrictedAlgebra) -> Outcome {
    let p = alg.p();
    let cat = catalog(alg).map_err(fail)?;
    let want = (p * p - p + 1) as usize;
    ensure(cat.len() == want, || format!("{} classes, expected {want}", cat.len()))?;
    Ok(format!("{} classes", cat.len()))
}

/// Dimensions: 1 for (0,0), `p²-1` for ω₀ and ω₁, `p²(r+1)` otherwise.
pub fn dimension_table(alg: &RestrictedAlgebra) -> Outcome {
    let p = alg.p();
    let cat = catalog(alg).map_err(fail)?;
    let p2 = (p * p) as usize;
    for e in &cat {
        let r = ((e.weight.0 + p - e.weight.1) % p) as usize;
        let want = if e.weight == omega(p, 2) {
            1
        } else if e.weight == omega(p, 0) || e.weight == omega(p, 1) {
            p2 - 1
        } else {
            p2 * (r + 1)
        };
        ensure(e.dim == want, || format!("L{:?} has dim {}, expected {want}", e.weight, e.dim))?;
    }
    let ones = cat.iter().filter(|e| e.dim == 1).count();
    let small = cat.iter().filter(|e| e.dim == p2 - 1).count();
    ensure(ones == 1 && small == 2, || format!("{ones} of dim 1 and {small} of dim p²-1"))?;
    Ok(format!("1 of dim 1, 2 of dim {}, {} of dim p²(r+1)", p2 - 1, cat.len() - 3))
}

/// `Z(λ)` is simple exactly when λ is not exceptional.
pub fn simplicity(alg: &RestrictedAlgebra) -> Outcome {
    let p = alg.p();
    let acting = hhat_acting(alg);
    let mut simple = 0;
    for w in all_weights(p) {
        let z = build_induced(alg, w).map_err(fail)?;
        let s = is_simple(&z.module, &acting).map_err(fail)?;
        ensure(s != is_exceptional(p, w), || format!("Z{w:?} simple = {s}"))?;
        simple += usize::from(s);
    }
    Ok(format!("{simple} of {} induced modules simple", p * p))
}

fn factors(p: u32, list: &[((i64, i64), usize)]) -> Vec<Factor> {
    let mut v: Vec<Factor> = list.iter().map(|&(w, dim)| Factor { weight: normalize(p, w), dim }).collect();
    v.sort();
    v
}

/// Expected composition factors of the non-simple induced modules.
pub fn expected_tables(p: u32) -> Vec<(Weight, Vec<Factor>)> {
    let q = (p * p) as usize;
    let mut out = vec![
        ((0, 0), factors(p, &[((0, -1), q - 1), ((0, 0), 1)])),
        (normalize(p, (-1, -1)), factors(p, &[((-1, -1), q - 1), ((0, 0), 1)])),
        ((1, 0), factors(p, &[((0, 0), 1), ((0, -1), q - 1), ((1, 0), q)])),
        (normalize(p, (0, -1)), factors(p, &[((-1, -1), q - 1), ((0, -1), q - 1), ((0, 0), 1), ((0, 0), 1)])),
        (normalize(p, (-1, -2)), factors(p, &[((-2, -2), q), ((0, 0), 1), ((-1, -2), q - 1)])),
    ];
    for a in 2..(p as i64 - 1) {
        out.push(((a as u32, a as u32 - 1), factors(p, &[((a - 1, a - 1), q), ((a, a - 1), q)])));
    }
    out
}

/// Composition factors with labels for every non-simple `Z(λ)`.
pub fn composition_tables(alg: &RestrictedAlgebra) -> Outcome {
    let p = alg.p();
    let tables = expected_tables(p);
    for (w, want) in &tables {
        let got = induced_series(alg, *w).map_err(fail)?.sorted();
        ensure(&got == want, || format!("Z{w:?}: got {got:?}, expected {want:?}"))?;
    }
    Ok(format!("{} modules match", tables.len()))
}

/// The allowed maximal vectors of `Z(λ)` by shape and weight.
pub fn expected_shapes(p: u32, w: Weight) -> Vec<(Weight, Shape)> {
    let r = (w.0 + p - w.1) % p;
    let dec = |x: u32| (x + p - 1) % p;
    let mut v = vec![(w, Shape::Top)];
    match r {
        0 => {
            v.push(((w.0, dec(w.1)), Shape::DyTop));
            if w == omega(p, 0) {
                v.push(((0, 0), Shape::Corner));
            }
        }
        1 => {
            v.push(((dec(w.0), w.1), Shape::V));
            v.push(((dec(w.0), dec(w.1)), Shape::W));
        }
        _ => {}
    }
    v.sort();
    v
}

/// Maximal-vector shapes, plus the consequences of maximality on components.
pub fn maximal_vector_shapes(alg: &RestrictedAlgebra) -> Outcome {
    let p = alg.p();
    let acting = hhat_acting(alg);
    let mut count = 0;
    for w in all_weights(p) {
        let z = build_induced(alg, w).map_err(fail)?;
        let mut got = maximal_shapes(&z, &acting).map_err(fail)?;
        got.sort();
        let want = expected_shapes(p, w);
        ensure(got == want, || format!("Z{w:?}: got {got:?}, expected {want:?}"))?;
        let gens = PreparedGens::new(&acting, &z.module);
        for (mw, basis) in z.module.maximal_vectors(&gens) {
            for v in basis {
                let bad = info_violations(&z, &v);
                ensure(bad.is_empty(), || format!("Z{w:?}, weight {mw:?}: {bad:?}"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} maximal vectors in {} modules", p * p))
}

/// The four-element set generates N except at p = 5, where J is needed.
pub fn n_generation(alg: &RestrictedAlgebra) -> Outcome {
    let p = alg.p();
    let n = n_subalgebra(alg);
    let want = (p * p - 4) as usize;
    ensure(n.dim() == want, || format!("dim N = {}", n.dim()))?;
    let four: Vec<Vec<u32>> = n_generators_without_j(alg).into_iter().map(|(_, c)| c).collect();
    let s = spin_subalgebra(alg, &four);
    let full: Vec<Vec<u32>> = n_generators(alg).into_iter().map(|(_, c)| c).collect();
    let sj = spin_subalgebra(alg, &full);
    let inside = |a: &crate::cartan::SubalgebraSpan| a.elements().iter().all(|d| n.contains(&alg.coords(d).unwrap()));
    ensure(inside(&s) && inside(&sj), || "generated algebra leaves N".into())?;
    if p == 5 {
        ensure(s.dim() < want, || "four elements already generate N".into())?;
        ensure(sj.dim() == want, || format!("with J: dim {}", sj.dim()))?;
        Ok(format!("four elements give dim {}, with J dim {want}", s.dim()))
    } else {
        ensure(s.dim() == want, || format!("four elements give dim {}", s.dim()))?;
        Ok(format!("dim {want}"))
    }
}

/// Weights whose induced modules are compared against the hand formulas.
pub fn oracle_weights(p: u32) -> Vec<Weight> {
    vec![(0, 0), (p - 1, p - 1), (1, 0), (3, 2), (2, 0)]
}

fn random_vector(rng: &mut ChaCha8Rng, p: u32, n: usize) -> Vec<u32> {
    (0..n).map(|_| rng.gen_range(0..p)).collect()
}

fn engine_action(z: &InducedModule, alg: &RestrictedAlgebra, name: &str, v: &[u32]) -> Vec<u32> {
    let c = alg.named_coords(name).expect("named element");
    z.module.combine(&c).apply(z.module.field(), v)
}

/// Engine against hand formulas: the unconditional ones on random vectors,
/// the maximal-vector forms on every maximal vector of every `Z(λ)`.
pub fn oracle_agreement(alg: &RestrictedAlgebra, samples: usize, seed: u64) -> Outcome {
    let p = alg.p();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut compared = 0;
    for w in oracle_weights(p) {
        let z = build_induced(alg, w).map_err(fail)?;
        for name in UNCONDITIONAL_ORACLES {
            if name == "J" && p != 5 {
                continue;
            }
            for _ in 0..samples {
                let v = random_vector(&mut rng, p, z.module.dim());
                let o = oracle_action(&z, name, &v).map_err(fail)?;
                ensure(o == engine_action(&z, alg, name, &v), || format!("{name} differs on Z{w:?}"))?;
                compared += 1;
            }
        }
    }
    let acting = hhat_acting(alg);
    let n = n_subalgebra(alg);
    let in_n: Vec<bool> = ORACLE_NAMES.iter().map(|s| n.contains(&alg.named_coords(s).unwrap())).collect();
    let mut maximal = 0;
    for w in all_weights(p) {
        let z = build_induced(alg, w).map_err(fail)?;
        let gens = PreparedGens::new(&acting, &z.module);
        for (_, basis) in z.module.maximal_vectors(&gens) {
            for v in basis {
                for (name, &kills) in ORACLE_NAMES.iter().zip(&in_n) {
                    if *name == "J" && p != 5 {
                        continue;
                    }
                    let o = oracle_action(&z, name, &v).map_err(fail)?;
                    let e = engine_action(&z, alg, name, &v);
                    ensure(o == e && (!kills || e.iter().all(|&x| x == 0)), || {
                        format!("{name} on a maximal vector of Z{w:?}")
                    })?;
                }
                maximal += 1;
            }
        }
    }
    Ok(format!("{compared} random comparisons, {maximal} maximal vectors"))
}

/// Jacobi identity (exhaustive up to p = 7, sampled beyond), restrictedness of
/// every module built here, and the p-map facts.
pub fn algebra_invariants(alg: &RestrictedAlgebra, seed: u64) -> Outcome {
    let p = alg.p();
    let n = alg.dim();
    let f = alg.field();
    let jacobi = |i: usize, j: usize, k: usize| {
        let (a, b, c) = (alg.unit(i), alg.unit(j), alg.unit(k));
        let t1 = alg.bracket(&a, &alg.bracket(&b, &c));
        let t2 = alg.bracket(&b, &alg.bracket(&c, &a));
        let t3 = alg.bracket(&c, &alg.bracket(&a, &b));
        (0..n).all(|x| f.add(f.add(t1[x], t2[x]), t3[x]) == 0)
    };
    let mut triples = 0;
    if p <= 7 {
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    ensure(jacobi(i, j, k), || format!("Jacobi fails on ({i},{j},{k})"))?;
                    triples += 1;
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..2000 {
            let (i, j, k) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
            ensure(jacobi(i, j, k), || format!("Jacobi fails on ({i},{j},{k})"))?;
            triples += 1;
        }
    }
    let named = |s: &str| alg.named(s).map_err(fail).cloned();
    ensure(named("dy")?.p_power().map_err(fail)?.is_zero(), || "∂_y^[p] ≠ 0".into())?;
    let minus_dx = named("dx'")?.scale(p - 1);
    ensure(minus_dx.p_power().map_err(fail)? == named("ydy")?, || {
        "(-∂_x + x^(p-1)y∂_y)^[p] ≠ y∂_y".into()
    })?;
    let mut modules = 0;
    for w in all_weights(p) {
        let z = build_induced(alg, w).map_err(fail)?;
        z.module.check_homomorphism(alg).map_err(fail)?;
        z.module.check_restricted(alg).map_err(fail)?;
        modules += 1;
    }
    for w in [omega(p, 0), omega(p, 1), omega(p, 2)] {
        let m = realize_simple(alg, w).map_err(fail)?;
        m.check_homomorphism(alg).map_err(fail)?;
        m.check_restricted(alg).map_err(fail)?;
        modules += 1;
    }
    let o = build_o_module(alg).map_err(fail)?;
    o.check_homomorphism(alg).map_err(fail)?;
    o.check_restricted(alg).map_err(fail)?;
    modules += 1;
    Ok(format!("{triples} Jacobi triples, {modules} restricted modules, p-map facts hold"))
}

/// Restrictions of all simple modules to W by both methods, against the
/// expected multiplicities, with randomized tie-breaks in the graded method.
pub fn witt_restriction(alg: &RestrictedAlgebra, seed: u64) -> Outcome {
    let p = alg.p();
    let w = build_w1_subalgebra(alg).map_err(fail)?;
    let chang = chang_signatures(&w.alg).map_err(fail)?;
    let cat = catalog(alg).map_err(fail)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for e in &cat {
        let m = realize_simple(alg, e.weight).map_err(fail)?;
        let r = restrict_to_w(&m, &w).map_err(fail)?;
        let g = grade_by_tags(&r).map_err(fail)?;
        let graded = graded_factors::<ChaCha8Rng>(&g, &mut Pick::Largest).map_err(fail)?;
        for _ in 0..5 {
            let again = graded_factors(&g, &mut Pick::Random(&mut rng)).map_err(fail)?;
            ensure(again == graded, || format!("L{:?}: tie-break changes the result", e.weight))?;
        }
        let direct = direct_factors(&r, &w.alg, &chang).map_err(fail)?;
        let want = expected_restriction(p, e.weight);
        ensure(graded == want, || format!("L{:?}: graded {graded:?}, expected {want:?}", e.weight))?;
        ensure(direct == want, || format!("L{:?}: direct {direct:?}, expected {want:?}", e.weight))?;
        ensure(equal_middle_multiplicities(p, &graded), || format!("L{:?}: unequal middle", e.weight))?;
    }
    Ok(format!("{} simple modules", cat.len()))
}

/// `L(0,-1) ≇ L(-1,-1)` by maximal-vector weights and by intertwiners, and
/// `L(a-1,b) ≅ L(a-1,b-1)` for `a - b = 1` as a positive control.
pub fn non_isomorphism(alg: &RestrictedAlgebra) -> Outcome {
    let p = alg.p();
    let acting = hhat_acting(alg);
    let l1 = realize_simple(alg, omega(p, 1)).map_err(fail)?;
    let l0 = realize_simple(alg, omega(p, 0)).map_err(fail)?;
    ensure(!iso_test(&l1, &l0, &acting).map_err(fail)?, || "weight criterion says isomorphic".into())?;
    ensure(!iso_by_intertwiner(&l1, &l0, &acting).map_err(fail)?, || "intertwiner found".into())?;
    ensure(!iso_by_intertwiner(&l0, &l1, &acting).map_err(fail)?, || "intertwiner found".into())?;
    ensure(iso_by_intertwiner(&l1, &l1, &acting).map_err(fail)?, || "no self-intertwiner".into())?;
    let a = 3;
    let top = realize_simple(alg, (a - 1, a - 1)).map_err(fail)?;
    let z = build_induced(alg, (a - 1, a - 2)).map_err(fail)?;
    let h = head(&z.module, &acting).map_err(fail)?;
    ensure(iso_test(&top, &h, &acting).map_err(fail)?, || "alias pair differs by weights".into())?;
    ensure(iso_by_intertwiner(&top, &h, &acting).map_err(fail)?, || "alias pair has no intertwiner".into())?;
    Ok("distinct by both methods; alias pair isomorphic by both".into())
}

/// `O(2;(1,1))/(k·1)` is simple of dimension `p²-1` and isomorphic to the
/// simple quotient of `Z(-1,-1)`.
pub fn o_module(alg: &RestrictedAlgebra) -> Outcome {
    let p = alg.p();
    let acting = hhat_acting(alg);
    let o = build_o_module(alg).map_err(fail)?;
    ensure(o.dim() == (p * p - 1) as usize, || format!("dim {}", o.dim()))?;
    o.check_restricted(alg).map_err(fail)?;
    ensure(is_simple(&o, &acting).map_err(fail)?, || "not simple".into())?;
    let gens = PreparedGens::new(&acting, &o);
    let mw: Vec<Weight> = o.maximal_vectors(&gens).into_iter().map(|(w, _)| w).collect();
    ensure(mw.contains(&omega(p, 0)), || format!("maximal weights {mw:?}"))?;
    let q = realize_simple(alg, omega(p, 0)).map_err(fail)?;
    ensure(iso_test(&o, &q, &acting).map_err(fail)?, || "weights differ from L(-1,-1)".into())?;
    ensure(iso_by_intertwiner(&q, &o, &acting).map_err(fail)?, || "no isomorphism to L(-1,-1)".into())?;
    Ok(format!("dim {}, maximal weights {mw:?}", o.dim()))
}

/// `ad(y∂_y - x∂_x)` has equal-dimensional nonzero eigenspaces on Ĥ.
pub fn balanced(alg: &RestrictedAlgebra) -> Outcome {
    let h = alg.named_coords("h").map_err(fail)?;
    let r = balanced_toral_check(alg, &h, 1).map_err(fail)?;
    match r.common {
        Some(c) if !r.degenerate => Ok(format!("common dimension {c}, eigendims {:?}", r.eigendims)),
        _ => Err(format!("eigendims {:?}", r.eigendims)),
    }
}

/// Names of the criteria, in order.
pub const CRITERIA: [&str; 12] = [
    "catalog count",
    "dimension table",
    "simplicity",
    "composition tables",
    "maximal-vector shapes",
    "N generation",
    "oracle agreement",
    "algebra invariants",
    "W restriction",
    "non-isomorphism",
    "O-module",
    "balanced toral",
];

/// Runs criterion `k` (1-based) at one prime.
pub fn run_criterion(k: usize, alg: &RestrictedAlgebra, seed: u64) -> Outcome {
    match k {
        1 => catalog_count(alg),
        2 => dimension_table(alg),
        3 => simplicity(alg),
        4 => composition_tables(alg),
        5 => maximal_vector_shapes(alg),
        6 => n_generation(alg),
        7 => oracle_agreement(alg, 200, seed),
        8 => algebra_invariants(alg, seed),
        9 => witt_restriction(alg, seed),
        10 => non_isomorphism(alg),
        11 => o_module(alg),
        12 => balanced(alg),
        _ => Err(format!("no criterion {k}")),
    }
}

/// All criteria at one prime.
pub fn run_checks(p: u32, seed: u64) -> Result<Vec<Check>, Error> {
    let alg = build_hhat(p)?;
    let mut out = Vec::new();
    for (i, name) in CRITERIA.iter().enumerate() {
        let (pass, detail) = match run_criterion(i + 1, &alg, seed) {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        out.push(Check { name: name.to_string(), pass, detail });
    }
    Ok(out)
}

/// Composition series of `Z(λ)` sorted by weight, as reported by the CLI.
pub fn sorted_series(alg: &RestrictedAlgebra, w: Weight) -> Result<Vec<Factor>, Error> {
    let z = build_induced(alg, w)?;
    Ok(composition_series(&z.module, &hhat_acting(alg), Some(z.lambda()))?.sorted())
}

/// Multiset as a map with string keys, for reports.
pub fn witt_report(m: &BTreeMap<u32, u32>) -> BTreeMap<String, u32> {
    m.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}
