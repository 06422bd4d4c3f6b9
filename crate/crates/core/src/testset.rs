//! Integer directions for mixed-integer programs.
//!
//! For a basis `B` of `A^R` the rows of `B^{-1} A^I` cut the integer space
//! into sign cells. Conic Graver bases of those cells, intersected over all
//! bases, give the generator sets `G^{A,b}` (from pairs of feasible
//! basic-integer solutions) and `G*` (from every sign list). Lifting a
//! generator `g` through a basis gives the kernel vector
//! `(-B^{-1} A^I g on B, 0 elsewhere, g)`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Signed;
use serde::Serialize;

use crate::cone::{Cone, HilbertCache, Rel};
use crate::error::{Error, Result};
use crate::exact::{clear_denominators, conformal_leq_rat, Int, IntVec, RatVec, Rational};
use crate::instance::{MipInstance, MixedVec};
use crate::linalg::{self, Basis, BasisSystem, Circuit};
use crate::oracle;

/// Default cap on `m·r` for the `G*` sign-list enumeration.
pub const DEFAULT_GSTAR_LIMIT: usize = 12;

/// Rows of `B^{-1} A^I` that are nonnegative on the integer difference.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SignPattern {
    pub basis: Basis,
    /// Zero-based row indices.
    pub plus: BTreeSet<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignList {
    pub patterns: Vec<SignPattern>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TestDirection {
    pub vec: MixedVec,
    pub basis: Basis,
    pub gen: IntVec,
}

#[derive(Clone, Debug, Serialize)]
pub struct DoubleTestSet {
    pub directions: Vec<TestDirection>,
    /// Circuits of `A^R`; pad with `n_I` zeros to use them as directions.
    pub circuits: Vec<Circuit>,
}

/// Anything usable as a move `x -> x + d`.
pub trait Direction {
    fn mixed(&self) -> &MixedVec;
}

impl Direction for MixedVec {
    fn mixed(&self) -> &MixedVec {
        self
    }
}

impl Direction for TestDirection {
    fn mixed(&self) -> &MixedVec {
        &self.vec
    }
}

pub fn basis_systems(inst: &MipInstance) -> Vec<BasisSystem> {
    linalg::enumerate_bases(inst)
        .iter()
        .map(|b| BasisSystem::new(inst, b))
        .collect()
}

/// Integer normals of the rows of `B^{-1} A^I` (denominators cleared; the
/// direction is kept, so sign tests are unchanged).
fn integer_rows(sys: &BasisSystem) -> Vec<IntVec> {
    sys.inv_ai.iter().map(|r| clear_denominators(&r.0)).collect()
}

fn pattern_for(sys: &BasisSystem, diff: &IntVec) -> SignPattern {
    let plus = sys
        .apply(diff)
        .0
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_negative())
        .map(|(p, _)| p)
        .collect();
    SignPattern {
        basis: sys.basis.clone(),
        plus,
    }
}

pub fn sign_pattern(inst: &MipInstance, basis: &Basis, x1: &MixedVec, x2: &MixedVec) -> SignPattern {
    let sys = BasisSystem::new(inst, basis);
    pattern_for(&sys, &x2.integral.sub(&x1.integral))
}

fn rows_for_pattern(sys: &BasisSystem, plus: &BTreeSet<usize>) -> Vec<(IntVec, Rel)> {
    integer_rows(sys)
        .into_iter()
        .enumerate()
        .map(|(p, n)| (n, if plus.contains(&p) { Rel::Ge } else { Rel::Le }))
        .collect()
}

fn pair_cone(n_int: usize, systems: &[BasisSystem], diff: &IntVec) -> Cone {
    Cone::new(
        n_int,
        systems
            .iter()
            .flat_map(|sys| rows_for_pattern(sys, &pattern_for(sys, diff).plus)),
    )
}

/// `C(x1, x2)` intersected over the supplied bases; `x2^I - x1^I` is always a
/// member.
pub fn cone_of_pair(inst: &MipInstance, x1: &MixedVec, x2: &MixedVec, bases: &[Basis]) -> Cone {
    let systems: Vec<BasisSystem> = bases.iter().map(|b| BasisSystem::new(inst, b)).collect();
    pair_cone(inst.n_int, &systems, &x2.integral.sub(&x1.integral))
}

/// `C^S` for a sign list (one pattern per basis).
pub fn cone_from_pattern(inst: &MipInstance, sl: &SignList) -> Cone {
    Cone::new(
        inst.n_int,
        sl.patterns
            .iter()
            .flat_map(|pat| rows_for_pattern(&BasisSystem::new(inst, &pat.basis), &pat.plus)),
    )
}

pub(crate) fn lift_with(inst: &MipInstance, sys: &BasisSystem, g: &IntVec) -> Result<TestDirection> {
    if g.is_zero() {
        return Err(Error::ZeroGenerator);
    }
    if g.dim() != inst.n_int {
        return Err(Error::DimensionMismatch {
            expected: inst.n_int,
            found: g.dim(),
        });
    }
    let shift = sys.apply(g);
    let mut real = RatVec::zeros(inst.n_real);
    for (p, &col) in sys.basis.cols.iter().enumerate() {
        real[col] = -shift[p].clone();
    }
    let vec = MixedVec::new(real, g.clone());
    assert!(inst.in_kernel(&vec), "lifted direction must lie in ker(A)");
    Ok(TestDirection {
        vec,
        basis: sys.basis.clone(),
        gen: g.clone(),
    })
}

/// `T_B(g)`: the integer direction with integer part `g` through basis `B`.
pub fn lift(inst: &MipInstance, basis: &Basis, g: &IntVec) -> Result<TestDirection> {
    lift_with(inst, &BasisSystem::new(inst, basis), g)
}

/// Lifts every generator through every basis; deduplicated by vector and
/// sorted, keeping the first provenance.
pub fn lift_all(inst: &MipInstance, gens: &[IntVec]) -> Vec<TestDirection> {
    let systems = basis_systems(inst);
    let mut seen: BTreeMap<MixedVec, TestDirection> = BTreeMap::new();
    for sys in &systems {
        for g in gens {
            if let Ok(t) = lift_with(inst, sys, g) {
                seen.entry(t.vec.clone()).or_insert(t);
            }
        }
    }
    seen.into_values().collect()
}

/// Distinct cones `C(x1, x2)` over ordered pairs of distinct feasible
/// basic-integer solutions in the box.
pub fn g_ab_cones(inst: &MipInstance) -> Result<Vec<Cone>> {
    let sols = oracle::enumerate_basic_integer_solutions(inst)
        .map_err(|_| Error::MissingBox("G^{A,b}"))?;
    let systems = basis_systems(inst);
    Ok(pair_cones(inst, &sols, &systems))
}

fn pair_cones(inst: &MipInstance, sols: &[MixedVec], systems: &[BasisSystem]) -> Vec<Cone> {
    let mut diffs = BTreeSet::new();
    for (i, x1) in sols.iter().enumerate() {
        for (j, x2) in sols.iter().enumerate() {
            if i != j {
                diffs.insert(x2.integral.sub(&x1.integral));
            }
        }
    }
    let cones: BTreeSet<Cone> = diffs.iter().map(|d| pair_cone(inst.n_int, systems, d)).collect();
    cones.into_iter().collect()
}

fn graver_union(cones: &[Cone]) -> Vec<IntVec> {
    let mut cache = HilbertCache::new();
    let mut out = BTreeSet::new();
    for c in cones {
        out.extend(cache.conic_graver(c));
    }
    out.into_iter().collect()
}

/// `G^{A,b}`: union of conic Graver bases of `C(x1, x2)` over all pairs of
/// feasible basic-integer solutions inside the box.
pub fn build_g_ab(inst: &MipInstance) -> Result<Vec<IntVec>> {
    Ok(graver_union(&g_ab_cones(inst)?))
}

/// `G^{A,b}` with the first pair cone that produced each generator.
pub fn build_g_ab_with_cones(inst: &MipInstance) -> Result<Vec<(IntVec, Cone)>> {
    Ok(first_origins(&g_ab_cones(inst)?).into_iter().collect())
}

fn first_origins(cones: &[Cone]) -> BTreeMap<IntVec, Cone> {
    let mut cache = HilbertCache::new();
    let mut origin: BTreeMap<IntVec, Cone> = BTreeMap::new();
    for c in cones {
        for g in cache.conic_graver(c) {
            origin.entry(g).or_insert_with(|| c.clone());
        }
    }
    origin
}

/// `G_B^{A,b}`: pairs of solutions supported on `basis`, single-basis cones.
pub fn build_g_ab_basis(inst: &MipInstance, basis: &Basis) -> Result<Vec<IntVec>> {
    let sols = oracle::enumerate_basic_integer_solutions(inst)
        .map_err(|_| Error::MissingBox("G^{A,b}"))?;
    let on_basis: Vec<MixedVec> = sols
        .into_iter()
        .filter(|x| x.real.support().iter().all(|c| basis.cols.contains(c)))
        .collect();
    let systems = vec![BasisSystem::new(inst, basis)];
    Ok(graver_union(&pair_cones(inst, &on_basis, &systems)))
}

/// Distinct nonzero cones `C^S` over all sign lists. Sign-list prefixes whose
/// cone is already `{0}` are pruned; every extension of them is `{0}` too and
/// contributes no generators.
pub fn g_star_cones(inst: &MipInstance, limit: usize) -> Result<Vec<Cone>> {
    let systems = basis_systems(inst);
    let size = inst.m * systems.len();
    if size > limit {
        return Err(Error::TooLarge { size, limit });
    }
    let rows: Vec<IntVec> = systems.iter().flat_map(integer_rows).collect();
    let mut leaves = BTreeSet::new();
    let mut stack = vec![(0usize, Cone::full(inst.n_int))];
    while let Some((depth, cone)) = stack.pop() {
        if depth == rows.len() {
            leaves.insert(cone);
            continue;
        }
        let n = &rows[depth];
        if n.is_zero() {
            stack.push((depth + 1, cone));
            continue;
        }
        for rel in [Rel::Le, Rel::Ge] {
            let next = cone.intersect(&Cone::new(inst.n_int, [(n.clone(), rel)]));
            if !next.is_trivial() {
                stack.push((depth + 1, next));
            }
        }
    }
    Ok(leaves.into_iter().collect())
}

/// `G*` with, for each generator, the first cone `C^S` that produced it.
pub fn build_g_star_with_cones(inst: &MipInstance, limit: usize) -> Result<Vec<(IntVec, Cone)>> {
    let origin = first_origins(&g_star_cones(inst, limit)?);
    let cands: Vec<IntVec> = origin.keys().cloned().collect();
    let kept = f_irreducible_filter(&cands, inst);
    Ok(kept
        .into_iter()
        .map(|g| {
            let c = origin[&g].clone();
            (g, c)
        })
        .collect())
}

/// `G*`: union of conic Graver bases of every `C^S`, filtered by
/// `f`-irreducibility.
pub fn build_g_star(inst: &MipInstance, limit: usize) -> Result<Vec<IntVec>> {
    Ok(build_g_star_with_cones(inst, limit)?
        .into_iter()
        .map(|(g, _)| g)
        .collect())
}

pub fn build_t_star(inst: &MipInstance, limit: usize) -> Result<Vec<TestDirection>> {
    Ok(lift_all(inst, &build_g_star(inst, limit)?))
}

pub fn build_t_ab(inst: &MipInstance) -> Result<Vec<TestDirection>> {
    Ok(lift_all(inst, &build_g_ab(inst)?))
}

pub fn double_test_set(inst: &MipInstance, limit: usize) -> Result<DoubleTestSet> {
    Ok(DoubleTestSet {
        directions: build_t_star(inst, limit)?,
        circuits: linalg::circuits(inst),
    })
}

fn f_with(systems: &[BasisSystem], z: &IntVec) -> RatVec {
    let mut out = z.to_rat().0;
    for sys in systems {
        out.extend(sys.apply(z).0);
    }
    RatVec(out)
}

/// `f(A, z) = (z, B_1^{-1} A^I z, ..., B_r^{-1} A^I z)`, bases in canonical order.
pub fn f_vector(z: &IntVec, inst: &MipInstance) -> RatVec {
    f_with(&basis_systems(inst), z)
}

/// Keeps `z` unless another candidate `z'` (nonzero, different) has
/// `f(z') ⊑ f(z)` with `f(z') != f(z)`.
pub fn f_irreducible_filter(cands: &[IntVec], inst: &MipInstance) -> Vec<IntVec> {
    let systems = basis_systems(inst);
    let fs: Vec<RatVec> = cands.iter().map(|z| f_with(&systems, z)).collect();
    cands
        .iter()
        .enumerate()
        .filter(|&(i, z)| {
            !cands.iter().enumerate().any(|(j, w)| {
                j != i
                    && !w.is_zero()
                    && w != z
                    && fs[j] != fs[i]
                    && conformal_leq_rat(&fs[j], &fs[i]).unwrap_or(false)
            })
        })
        .map(|(_, z)| z.clone())
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct NormCheck {
    pub direction: MixedVec,
    pub basis: Vec<usize>,
    #[serde(serialize_with = "ser_display")]
    pub norm: Rational,
    #[serde(serialize_with = "ser_display")]
    pub delta: Rational,
    #[serde(serialize_with = "ser_display")]
    pub bound: Rational,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct NormReport {
    #[serde(serialize_with = "ser_display")]
    pub max_subdeterminant: Int,
    pub checks: Vec<NormCheck>,
}

impl NormReport {
    pub fn violations(&self) -> Vec<&NormCheck> {
        self.checks.iter().filter(|c| !c.ok).collect()
    }
}

pub(crate) fn ser_display<T: std::fmt::Display, S: serde::Serializer>(
    v: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Checks `‖t‖∞ <= δ Δ(A)` with `δ = ‖B^{-1} A^I‖∞` for each direction's basis.
pub fn check_norm_bound(inst: &MipInstance, dirs: &[TestDirection]) -> NormReport {
    let delta_a = Rational::from_integer(linalg::max_subdeterminant(inst));
    let mut deltas: BTreeMap<Basis, Rational> = BTreeMap::new();
    let checks = dirs
        .iter()
        .map(|t| {
            let delta = deltas
                .entry(t.basis.clone())
                .or_insert_with(|| BasisSystem::new(inst, &t.basis).delta())
                .clone();
            let bound = &delta * &delta_a;
            let norm = t.vec.max_abs();
            NormCheck {
                direction: t.vec.clone(),
                basis: t.basis.cols.clone(),
                ok: norm <= bound,
                norm,
                delta,
                bound,
            }
        })
        .collect();
    NormReport {
        max_subdeterminant: delta_a.to_integer(),
        checks,
    }
}

impl TestDirection {
    pub fn objective(&self, inst: &MipInstance) -> Rational {
        inst.objective(&self.vec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::instance::IntBox;

    fn v(x: &[i64]) -> IntVec {
        IntVec::from_i64(x)
    }

    fn raymond(b: i64) -> MipInstance {
        MipInstance::single_row(&[1, 1], &[1], b, Some(IntBox::new(&[0], &[b]))).unwrap()
    }

    fn lone() -> MipInstance {
        MipInstance::single_row(&[1, -1], &[2], 3, Some(IntBox::new(&[0], &[3]))).unwrap()
    }

    fn unpointed() -> MipInstance {
        MipInstance::single_row(&[1, -1], &[2, 2], 1, Some(IntBox::new(&[0, 0], &[2, 2]))).unwrap()
    }

    fn full(t: &TestDirection) -> Vec<Rational> {
        t.vec.full()
    }

    fn fv(x: &[i64]) -> Vec<Rational> {
        x.iter().map(|&a| rat(a, 1)).collect()
    }

    #[test]
    fn sign_pattern_examples() {
        let inst = unpointed();
        let bases = linalg::enumerate_bases(&inst);
        for (u, w) in [(1, 0), (0, 1), (2, 1)] {
            let x1 = MixedVec::from_i64(&[0, 2 * u + 2 * w - 1], &[u, w]);
            let x2 = MixedVec::from_i64(&[1, 0], &[0, 0]);
            assert_eq!(sign_pattern(&inst, &bases[1], &x1, &x2).plus, BTreeSet::from([0]));
            assert!(sign_pattern(&inst, &bases[0], &x1, &x2).plus.is_empty());
        }
        let x = MixedVec::from_i64(&[1, 0], &[0, 0]);
        let y = MixedVec::from_i64(&[0, 1], &[0, 0]);
        assert_eq!(sign_pattern(&inst, &bases[0], &x, &y).plus, BTreeSet::from([0]));
    }

    #[test]
    fn pair_cone_examples() {
        let inst = unpointed();
        let bases = linalg::enumerate_bases(&inst);
        let xuv = MixedVec::from_i64(&[0, 3], &[1, 1]);
        let x0 = MixedVec::from_i64(&[1, 0], &[0, 0]);
        let c = cone_of_pair(&inst, &xuv, &x0, &bases);
        assert_eq!(c, Cone::from_i64(2, &[(&[1, 1], Rel::Le)]));
        assert_eq!(cone_of_pair(&inst, &x0, &xuv, &bases), c.negated());

        let r = raymond(3);
        let b0 = linalg::enumerate_bases(&r)[0].clone();
        let x1 = MixedVec::from_i64(&[1, 0], &[2]);
        let x0 = MixedVec::from_i64(&[0, 0], &[3]);
        let c = cone_of_pair(&r, &x1, &x0, &[b0]);
        assert_eq!(c, Cone::from_i64(1, &[(&[1], Rel::Ge)]));
        assert!(c.contains(&x0.integral.sub(&x1.integral)));
    }

    #[test]
    fn pattern_cone_examples() {
        let r = raymond(3);
        let bases = linalg::enumerate_bases(&r);
        let sl = |a: &[usize], b: &[usize], bases: &[Basis]| SignList {
            patterns: vec![
                SignPattern { basis: bases[0].clone(), plus: a.iter().copied().collect() },
                SignPattern { basis: bases[1].clone(), plus: b.iter().copied().collect() },
            ],
        };
        assert_eq!(cone_from_pattern(&r, &sl(&[0], &[0], &bases)), Cone::from_i64(1, &[(&[1], Rel::Ge)]));
        let eq = cone_from_pattern(&r, &sl(&[0], &[], &bases));
        assert!(eq.is_trivial());
        let l = lone();
        let lb = linalg::enumerate_bases(&l);
        assert!(cone_from_pattern(&l, &sl(&[0], &[0], &lb)).is_trivial());
    }

    #[test]
    fn lift_examples() {
        let r = raymond(3);
        let b = linalg::enumerate_bases(&r);
        assert_eq!(full(&lift(&r, &b[0], &v(&[1])).unwrap()), fv(&[-1, 0, 1]));
        let l = lone();
        let lb = linalg::enumerate_bases(&l);
        assert_eq!(full(&lift(&l, &lb[1], &v(&[1])).unwrap()), fv(&[0, 2, 1]));
        let u = unpointed();
        let ub = linalg::enumerate_bases(&u);
        assert_eq!(full(&lift(&u, &ub[0], &v(&[1, -1])).unwrap()), fv(&[0, 0, 1, -1]));
        assert_eq!(lift(&u, &ub[0], &v(&[0, 0])), Err(Error::ZeroGenerator));
    }

    #[test]
    fn fractional_lift() {
        let kw = MipInstance::single_row(&[2, 1], &[1], 4, None).unwrap();
        let b = linalg::enumerate_bases(&kw);
        let t = lift(&kw, &b[0], &v(&[1])).unwrap();
        assert_eq!(t.vec.full(), vec![rat(-1, 2), rat(0, 1), rat(1, 1)]);
    }

    #[test]
    fn g_ab_examples() {
        assert_eq!(build_g_ab(&raymond(3)).unwrap(), vec![v(&[-1]), v(&[1])]);
        let kw = MipInstance::single_row(&[2, 1], &[2], 4, Some(IntBox::new(&[0], &[2]))).unwrap();
        assert_eq!(build_g_ab(&kw).unwrap(), vec![v(&[-1]), v(&[1])]);
        // b = 0 forces the origin, so there is no pair to compare
        let single = MipInstance::single_row(&[1, 1], &[1], 0, Some(IntBox::new(&[0], &[2]))).unwrap();
        assert!(build_g_ab(&single).unwrap().is_empty());
        assert_eq!(build_g_ab(&MipInstance::single_row(&[1, 1], &[1], 3, None).unwrap()), Err(Error::MissingBox("G^{A,b}")));
    }

    #[test]
    fn g_star_examples() {
        assert_eq!(build_g_star(&raymond(3), 12).unwrap(), vec![v(&[-1]), v(&[1])]);
        assert_eq!(build_g_star(&lone(), 12).unwrap(), vec![v(&[-1]), v(&[1])]);
        let g = build_g_star(&unpointed(), 12).unwrap();
        for w in [[1, 0], [-1, 0], [0, 1], [0, -1], [1, -1], [-1, 1]] {
            assert!(g.contains(&v(&w)), "{w:?} missing from {g:?}");
        }
    }

    #[test]
    fn g_star_guard() {
        let inst = unpointed();
        assert_eq!(
            build_g_star(&inst, 1),
            Err(Error::TooLarge { size: 2, limit: 1 })
        );
    }

    #[test]
    fn f_vector_examples() {
        assert_eq!(f_vector(&v(&[1]), &raymond(3)).0, fv(&[1, 1, 1]));
        assert_eq!(f_vector(&v(&[1]), &lone()).0, fv(&[1, 2, -2]));
        assert!(f_vector(&v(&[0]), &lone()).is_zero());
    }

    #[test]
    fn f_filter_examples() {
        let r = raymond(3);
        assert_eq!(f_irreducible_filter(&[v(&[1]), v(&[-1]), v(&[2])], &r), vec![v(&[1]), v(&[-1])]);
        assert_eq!(f_irreducible_filter(&[v(&[2])], &r), vec![v(&[2])]);
        let u = unpointed();
        assert_eq!(f_irreducible_filter(&[v(&[1, -1]), v(&[2, -2])], &u), vec![v(&[1, -1])]);
    }

    #[test]
    fn t_star_examples() {
        let sets = |inst: &MipInstance| -> BTreeSet<Vec<Rational>> {
            build_t_star(inst, 12).unwrap().iter().map(full).collect()
        };
        let pm = |xs: &[&[i64]]| -> BTreeSet<Vec<Rational>> {
            xs.iter()
                .flat_map(|x| [fv(x), fv(&x.iter().map(|a| -a).collect::<Vec<_>>())])
                .collect()
        };
        assert_eq!(sets(&raymond(3)), pm(&[&[-1, 0, 1], &[0, -1, 1]]));
        let kw = MipInstance::single_row(&[2, 1], &[2], 4, None).unwrap();
        assert_eq!(sets(&kw), pm(&[&[-1, 0, 1], &[0, -2, 1]]));
        assert_eq!(sets(&lone()), pm(&[&[-2, 0, 1], &[0, 2, 1]]));
    }

    #[test]
    fn norm_bound_examples() {
        let l = lone();
        let lb = linalg::enumerate_bases(&l);
        let t = lift(&l, &lb[0], &v(&[1])).unwrap();
        let rep = check_norm_bound(&l, &[t.clone()]);
        assert_eq!(rep.checks[0].delta, rat(2, 1));
        assert_eq!(rep.checks[0].bound, rat(4, 1));
        assert!(rep.violations().is_empty());

        let r = raymond(3);
        let rb = linalg::enumerate_bases(&r);
        let rep = check_norm_bound(&r, &[lift(&r, &rb[0], &v(&[1])).unwrap()]);
        assert_eq!(rep.checks[0].bound, rat(1, 1));
        assert!(rep.violations().is_empty());

        let mut bad = t;
        bad.vec = MixedVec::from_i64(&[5, 0], &[1]);
        assert_eq!(check_norm_bound(&l, &[bad]).violations().len(), 1);
    }
}
