//! Exact slice LPs and augmentation.
//!
//! Fixing the integer part `z` leaves the LP `A^R x^R = b - A^I z, x^R >= 0`.
//! It is solved by visiting every basis, which is exact and cheap at the sizes
//! this crate targets. An augmentation step moves the integer part along a
//! test direction and re-solves the new slice; the real-part correction this
//! produces is a combination of circuits of `A^R` and can be written out as a
//! conformal sum with [`circuit_decomposition`].

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{IntVec, RatVec, Rational};
use crate::instance::{MipInstance, MixedVec};
use crate::linalg::{self, BasisSystem, Circuit};
use crate::oracle;
use crate::testset::{self, ser_display, Direction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SliceStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SliceResult {
    pub status: SliceStatus,
    pub point: Option<MixedVec>,
    #[serde(serialize_with = "ser_opt_display")]
    pub value: Option<Rational>,
}

fn ser_opt_display<S: serde::Serializer>(
    v: &Option<Rational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

impl SliceResult {
    fn infeasible() -> Self {
        SliceResult {
            status: SliceStatus::Infeasible,
            point: None,
            value: None,
        }
    }
}

fn padded(inst: &MipInstance, s: &IntVec) -> MixedVec {
    MixedVec::new(s.to_rat(), IntVec::zeros(inst.n_int))
}

fn nonnegative_descent(inst: &MipInstance, circuits: &[IntVec], width: usize) -> Option<IntVec> {
    let c = &inst.c.0[..width];
    circuits.iter().find_map(|s| {
        [s.clone(), s.neg()].into_iter().find(|v| {
            v.iter().all(|e| !e.is_negative()) && IntVec(c.to_vec()).dot(v).is_negative()
        })
    })
}

/// Reusable solver state for one instance: bases, a ray certificate, and a
/// memo of solved slices.
pub struct SliceSolver<'a> {
    inst: &'a MipInstance,
    systems: Vec<BasisSystem>,
    slice_ray: Option<IntVec>,
    memo: BTreeMap<IntVec, SliceResult>,
}

impl<'a> SliceSolver<'a> {
    pub fn new(inst: &'a MipInstance) -> Self {
        let circuits: Vec<IntVec> = linalg::circuits(inst).into_iter().map(|c| c.vec).collect();
        SliceSolver {
            inst,
            systems: testset::basis_systems(inst),
            slice_ray: nonnegative_descent(inst, &circuits, inst.n_real),
            memo: BTreeMap::new(),
        }
    }

    /// Lowest-cost basic feasible point of the slice; ties go to the
    /// lexicographically smallest point.
    pub fn best_basic_point(&self, z: &IntVec) -> Option<MixedVec> {
        let mut best: Option<(Rational, MixedVec)> = None;
        for sys in &self.systems {
            let xb = sys.basic_part(z);
            if !xb.is_nonnegative() {
                continue;
            }
            let mut real = RatVec::zeros(self.inst.n_real);
            for (p, &col) in sys.basis.cols.iter().enumerate() {
                real[col] = xb[p].clone();
            }
            let x = MixedVec::new(real, z.clone());
            let v = self.inst.objective(&x);
            if best.as_ref().map_or(true, |(bv, bx)| v < *bv || (v == *bv && x < *bx)) {
                best = Some((v, x));
            }
        }
        best.map(|(_, x)| x)
    }

    pub fn solve(&mut self, z: &IntVec) -> SliceResult {
        if let Some(r) = self.memo.get(z) {
            return r.clone();
        }
        let r = match self.best_basic_point(z) {
            None => SliceResult::infeasible(),
            Some(_) if self.slice_ray.is_some() => SliceResult {
                status: SliceStatus::Unbounded,
                point: None,
                value: None,
            },
            Some(x) => SliceResult {
                status: SliceStatus::Optimal,
                value: Some(self.inst.objective(&x)),
                point: Some(x),
            },
        };
        self.memo.insert(z.clone(), r.clone());
        r
    }

    /// First direction in `(c·t, lexicographic)` order whose shifted slice
    /// has an optimum strictly below `c·x`. Integer parts must stay
    /// nonnegative and inside the box.
    pub fn improvement_step<'d, D: Direction>(
        &mut self,
        x: &MixedVec,
        dirs: &'d [D],
    ) -> Result<Option<(&'d D, MixedVec)>> {
        let cx = self.inst.objective(x);
        for d in scan_order(self.inst, dirs) {
            let z = x.integral.add(&d.mixed().integral);
            if !self.inst.integer_part_allowed(&z) {
                continue;
            }
            let r = self.solve(&z);
            match r.status {
                SliceStatus::Unbounded => return Err(Error::Unbounded),
                SliceStatus::Infeasible => {}
                SliceStatus::Optimal => {
                    if r.value.as_ref().is_some_and(|v| *v < cx) {
                        return Ok(Some((d, r.point.expect("optimal slice has a point"))));
                    }
                }
            }
        }
        Ok(None)
    }
}

fn scan_order<'d, D: Direction>(inst: &MipInstance, dirs: &'d [D]) -> Vec<&'d D> {
    let mut keyed: Vec<(Rational, &MixedVec, &D)> = dirs
        .iter()
        .map(|d| (inst.objective(d.mixed()), d.mixed(), d))
        .collect();
    keyed.sort_by(|a, b| (&a.0, a.1).cmp(&(&b.0, b.1)));
    keyed.into_iter().map(|(_, _, d)| d).collect()
}

pub fn solve_slice_lp(inst: &MipInstance, z: &IntVec) -> SliceResult {
    SliceSolver::new(inst).solve(z)
}

pub fn improvement_step<D: Direction + Clone>(
    inst: &MipInstance,
    x: &MixedVec,
    dirs: &[D],
) -> Result<Option<(D, MixedVec)>> {
    Ok(SliceSolver::new(inst)
        .improvement_step(x, dirs)?
        .map(|(d, x)| (d.clone(), x)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub from: MixedVec,
    /// The test direction applied; zero for the initial slice re-solve.
    pub direction: MixedVec,
    pub to: MixedVec,
    #[serde(serialize_with = "ser_display")]
    pub objective: Rational,
}

impl TraceStep {
    pub fn net_move(&self) -> MixedVec {
        self.to.sub(&self.from)
    }

    /// The real-part correction `to - (from + direction)`, a circuit
    /// combination.
    pub fn repair(&self) -> MixedVec {
        self.to.sub(&self.from.add(&self.direction))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AugmentTrace {
    pub steps: Vec<TraceStep>,
}

impl fmt::Display for AugmentTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, s) in self.steps.iter().enumerate() {
            writeln!(f, "step {}: obj {} move {}", k + 1, s.objective, s.net_move())?;
        }
        Ok(())
    }
}

/// Some nonnegative recession direction with negative cost, if the problem
/// has one: circuits of `A^R` when the box pins the integer part, circuits of
/// all of `A` otherwise.
pub fn descent_ray(inst: &MipInstance) -> Option<MixedVec> {
    if inst.bounds.is_some() {
        let cs: Vec<IntVec> = linalg::circuits(inst).into_iter().map(|c| c.vec).collect();
        nonnegative_descent(inst, &cs, inst.n_real).map(|s| padded(inst, &s))
    } else {
        let cs: Vec<IntVec> = linalg::circuits_of(&inst.a).into_iter().map(|c| c.vec).collect();
        nonnegative_descent(inst, &cs, inst.n()).map(|s| {
            MixedVec::from_full(&s.to_rat().0, inst.n_real).expect("integral circuit")
        })
    }
}

/// Augmentation from `x0` along `dirs` until no direction improves.
pub fn augment<D: Direction>(
    inst: &MipInstance,
    x0: &MixedVec,
    dirs: &[D],
) -> Result<(MixedVec, AugmentTrace)> {
    if !inst.is_feasible(x0) {
        return Err(Error::Infeasible(format!("start point {x0} is not feasible")));
    }
    if !inst.integer_part_allowed(&x0.integral) {
        return Err(Error::Infeasible(format!("start point {x0} lies outside the box")));
    }
    if descent_ray(inst).is_some() {
        return Err(Error::Unbounded);
    }
    let mut solver = SliceSolver::new(inst);
    let mut trace = AugmentTrace::default();
    let start = solver.solve(&x0.integral);
    let mut x = start.point.expect("feasible slice is bounded after the ray check");
    if inst.objective(&x) < inst.objective(x0) {
        trace.steps.push(TraceStep {
            from: x0.clone(),
            direction: MixedVec::zeros(inst.n_real, inst.n_int),
            to: x.clone(),
            objective: inst.objective(&x),
        });
    } else {
        x = x0.clone();
    }
    let mut visited = BTreeSet::from([x.integral.clone()]);
    while let Some((d, next)) = solver.improvement_step(&x, dirs)? {
        let fresh = visited.insert(next.integral.clone());
        assert!(fresh, "augmentation revisited integer part {}", next.integral);
        trace.steps.push(TraceStep {
            from: x.clone(),
            direction: d.mixed().clone(),
            to: next.clone(),
            objective: inst.objective(&next),
        });
        x = next;
    }
    Ok((x, trace))
}

/// First integer part in the box (lexicographic) with a feasible slice,
/// returned at its best basic point.
pub fn find_initial_solution(inst: &MipInstance) -> Result<Option<MixedVec>> {
    let bx = inst
        .bounds
        .as_ref()
        .ok_or(Error::MissingBox("initial solution search"))?;
    let solver = SliceSolver::new(inst);
    Ok(bx
        .points()
        .iter()
        .filter(|z| inst.integer_part_allowed(z))
        .find_map(|z| solver.best_basic_point(z)))
}

/// Nonzero multiples `α s` taking `x` to a point with the same integer part
/// whose real support is independent. Nonnegativity is not required.
pub fn sp_set(inst: &MipInstance, x: &MixedVec, s: &IntVec) -> Vec<MixedVec> {
    let alphas: BTreeSet<Rational> = s
        .support()
        .into_iter()
        .map(|i| -x.real[i].clone() / Rational::from_integer(s[i].clone()))
        .filter(|a| !a.is_zero())
        .collect();
    alphas
        .into_iter()
        .filter_map(|a| {
            let step = s.to_rat().scale(&a);
            let real = x.real.add(&step);
            linalg::columns_independent(inst, &real.support())
                .then(|| MixedVec::new(step, IntVec::zeros(inst.n_int)))
        })
        .collect()
}

/// The first basis (lexicographic) containing the real support of `x`.
fn basis_of(inst: &MipInstance, x: &MixedVec) -> Result<linalg::Basis> {
    let supp = x.real.support();
    if !linalg::columns_independent(inst, &supp) {
        return Err(Error::NotBasic);
    }
    linalg::enumerate_bases(inst)
        .into_iter()
        .find(|b| supp.iter().all(|i| b.cols.contains(i)))
        .ok_or(Error::NotBasic)
}

/// Every direction `(q, g)` from `x0` to a structurally basic point of the
/// slice at `x0^I + g`, found by walking circuits from `x0 + T_B(g)`.
pub fn completion_procedure(
    inst: &MipInstance,
    x0: &MixedVec,
    g: &IntVec,
    circuits: &[Circuit],
) -> Result<Vec<MixedVec>> {
    let basis = basis_of(inst, x0)?;
    let t0 = testset::lift(inst, &basis, g)?;
    let moves: Vec<IntVec> = circuits
        .iter()
        .flat_map(|c| [c.vec.clone(), c.vec.neg()])
        .collect();
    let p0 = x0.add(&t0.vec);
    let mut seen = BTreeSet::from([p0.clone()]);
    let mut queue = VecDeque::from([p0]);
    while let Some(p) = queue.pop_front() {
        for s in &moves {
            for step in sp_set(inst, &p, s) {
                let q = p.add(&step);
                if seen.insert(q.clone()) {
                    queue.push_back(q);
                }
            }
        }
    }
    Ok(seen.into_iter().map(|p| p.sub(x0)).collect())
}

/// Completion directions from every feasible basic-integer solution along
/// every `G*` generator that stays in the box, plus `±` padded circuits.
pub fn build_finite_test_set(inst: &MipInstance, limit: usize) -> Result<Vec<MixedVec>> {
    let sols = oracle::enumerate_basic_integer_solutions(inst)
        .map_err(|_| Error::MissingBox("finite test set"))?;
    let gens = testset::build_g_star(inst, limit)?;
    let circuits = linalg::circuits(inst);
    let mut out: BTreeSet<MixedVec> = circuits
        .iter()
        .flat_map(|c| [padded(inst, &c.vec), padded(inst, &c.vec.neg())])
        .collect();
    for x in &sols {
        for g in &gens {
            if inst.integer_part_allowed(&x.integral.add(g)) {
                out.extend(completion_procedure(inst, x, g, &circuits)?);
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Largest `α` with `x + α d >= 0`, or `None` when every `α >= 0` works.
pub fn max_step(x: &MixedVec, d: &MixedVec) -> Option<Rational> {
    let xs = x.full();
    let ds = d.full();
    xs.iter()
        .zip(&ds)
        .filter(|(_, di)| di.is_negative())
        .map(|(xi, di)| -xi / di)
        .min()
}

/// A single improving move `x + α d` with `d` from `dirs`. Directions with a
/// nonzero integer part move with `α = 1` and must land inside the box;
/// padded circuits move as far as nonnegativity allows.
pub fn single_move_improvement(inst: &MipInstance, x: &MixedVec, dirs: &[MixedVec]) -> Option<MixedVec> {
    let cx = inst.objective(x);
    dirs.iter().find_map(|d| {
        let y = if d.integral.is_zero() {
            if !inst.objective(d).is_negative() {
                return None;
            }
            let alpha = max_step(x, d).unwrap_or_else(|| Rational::from_integer(1.into()));
            if !alpha.is_positive() {
                return None;
            }
            MixedVec::new(x.real.add(&d.real.scale(&alpha)), x.integral.clone())
        } else {
            x.add(d)
        };
        (inst.is_feasible(&y) && inst.integer_part_allowed(&y.integral) && inst.objective(&y) < cx)
            .then_some(y)
    })
}

/// Writes a kernel vector of `A^R` as `Σ λ_i s_i` with `λ_i > 0` and each
/// `s_i` a signed circuit conformal to `v`.
pub fn circuit_decomposition(inst: &MipInstance, v: &RatVec) -> Vec<(Rational, IntVec)> {
    let circuits: Vec<IntVec> = linalg::circuits(inst)
        .into_iter()
        .flat_map(|c| [c.vec.clone(), c.vec.neg()])
        .collect();
    let mut rest = v.clone();
    let mut out = Vec::new();
    while !rest.is_zero() {
        let s = circuits
            .iter()
            .find(|s| {
                s.iter().zip(rest.0.iter()).all(|(a, b)| {
                    a.is_zero() || (!b.is_zero() && a.is_positive() == b.is_positive())
                })
            })
            .expect("a kernel vector has a conformal circuit");
        let lambda = s
            .support()
            .into_iter()
            .map(|i| rest[i].clone() / Rational::from_integer(s[i].clone()))
            .min()
            .expect("circuits are nonzero");
        rest = rest.sub(&s.to_rat().scale(&lambda));
        out.push((lambda, s.clone()));
    }
    out
}
