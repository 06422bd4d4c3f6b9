//! Brute-force ground truth.
//!
//! Everything here is exhaustive: every integer part in the box, every basis
//! of `A^R`, every lattice point in a radius. Nothing calls the cone engine,
//! the test-set builder or the solver, so agreement with those modules is a
//! genuine cross-check.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::cone::{Cone, Rel};
use crate::error::{Error, Result};
use crate::exact::{IntVec, RatVec, Rational};
use crate::instance::{MipInstance, MixedVec};
use crate::linalg::{self, Basis};
use crate::testset::{ser_display, Direction};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Optimum {
    #[serde(serialize_with = "ser_display")]
    pub value: Rational,
    pub argmins: Vec<MixedVec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub witness: Option<String>,
}

impl Check {
    fn pass(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass: true,
            witness: None,
        }
    }

    fn fail(name: impl Into<String>, witness: impl ToString) -> Self {
        Check {
            name: name.into(),
            pass: false,
            witness: Some(witness.to_string()),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub solutions: Vec<MixedVec>,
    pub optimum: Option<Optimum>,
    pub checks: Vec<Check>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// Every basis of `A^R`, found by testing all `m`-subsets of columns.
fn all_bases(inst: &MipInstance) -> Vec<Basis> {
    (0..inst.n_real)
        .combinations(inst.m)
        .filter_map(|cols| {
            let d = linalg::det(&inst.a.select_cols(&cols)).ok()?;
            (!d.is_zero()).then_some(Basis { cols, det: d })
        })
        .collect()
}

/// Basic feasible points of the slice at integer part `z`, deduplicated.
fn slice_points(inst: &MipInstance, bases: &[Basis], z: &IntVec) -> Vec<MixedVec> {
    let rhs = inst.slice_rhs(z);
    let mut out: Vec<MixedVec> = bases
        .iter()
        .filter_map(|b| {
            let xb = linalg::solve_basis(b, inst, &rhs);
            if !xb.is_nonnegative() {
                return None;
            }
            let mut real = RatVec::zeros(inst.n_real);
            for (p, &col) in b.cols.iter().enumerate() {
                real[col] = xb[p].clone();
            }
            Some(MixedVec::new(real, z.clone()))
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// All feasible basic-integer solutions with integer part in the box.
pub fn enumerate_basic_integer_solutions(inst: &MipInstance) -> Result<Vec<MixedVec>> {
    let bx = inst
        .bounds
        .as_ref()
        .ok_or(Error::MissingBox("solution enumeration"))?;
    let bases = all_bases(inst);
    let mut out: Vec<MixedVec> = bx
        .points()
        .iter()
        .flat_map(|z| slice_points(inst, &bases, z))
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

fn optimum_of(inst: &MipInstance, sols: &[MixedVec]) -> Option<Optimum> {
    let value = sols.iter().map(|x| inst.objective(x)).min()?;
    let argmins = sols
        .iter()
        .filter(|x| inst.objective(x) == value)
        .cloned()
        .collect();
    Some(Optimum { value, argmins })
}

/// Minimum of `c·x` over the box. A box scan cannot see unboundedness; run
/// the solver's ray check first when that matters.
pub fn brute_force_optimum(inst: &MipInstance) -> Result<Optimum> {
    let sols = enumerate_basic_integer_solutions(inst)?;
    optimum_of(inst, &sols).ok_or_else(|| Error::Infeasible("no feasible point in the box".into()))
}

/// Solutions plus optimum, with a sanity check on each listed point.
pub fn report(inst: &MipInstance) -> Result<OracleReport> {
    let solutions = enumerate_basic_integer_solutions(inst)?;
    let checks = solutions
        .iter()
        .filter(|x| !(inst.is_feasible(x) && inst.is_basic(x)))
        .map(|x| Check::fail("feasible and basic", x))
        .collect();
    Ok(OracleReport {
        optimum: optimum_of(inst, &solutions),
        solutions,
        checks,
    })
}

/// Checks that every non-optimal solution in the box improves through one
/// element of `dirs` (or none) followed by a re-solve of the resulting slice,
/// which realizes the circuit correction.
pub fn verify_double_test_set<D: Direction>(inst: &MipInstance, dirs: &[D]) -> Result<OracleReport> {
    let solutions = enumerate_basic_integer_solutions(inst)?;
    let optimum = optimum_of(inst, &solutions);
    let bases = all_bases(inst);
    let mut slice_min: BTreeMap<IntVec, Option<Rational>> = BTreeMap::new();
    let mut best_at = |z: &IntVec| -> Option<Rational> {
        slice_min
            .entry(z.clone())
            .or_insert_with(|| {
                slice_points(inst, &bases, z)
                    .iter()
                    .map(|x| inst.objective(x))
                    .min()
            })
            .clone()
    };
    let mut checks = Vec::new();
    if let Some(opt) = &optimum {
        for x in &solutions {
            let cx = inst.objective(x);
            if cx <= opt.value {
                continue;
            }
            let improves = |z: &IntVec, best_at: &mut dyn FnMut(&IntVec) -> Option<Rational>| {
                z.iter().all(|v| !v.is_negative()) && best_at(z).is_some_and(|v| v < cx)
            };
            let ok = improves(&x.integral, &mut best_at)
                || dirs
                    .iter()
                    .any(|d| improves(&x.integral.add(&d.mixed().integral), &mut best_at));
            if !ok {
                checks.push(Check::fail("improving direction", x));
            }
        }
    }
    if checks.is_empty() {
        checks.push(Check::pass("improving direction"));
    }
    Ok(OracleReport {
        solutions,
        optimum,
        checks,
    })
}

fn cone_holds(c: &Cone, p: &IntVec) -> bool {
    c.rows.iter().all(|r| {
        let v = r.normal.dot(p);
        match r.rel {
            Rel::Ge => !v.is_negative(),
            Rel::Le => !v.is_positive(),
        }
    })
}

fn sign_compatible_leq(h: &IntVec, p: &IntVec) -> bool {
    h.iter().zip(p.iter()).all(|(a, b)| {
        a.is_zero() || (a.signum() == b.signum() && a.abs() <= b.abs())
    })
}

/// Whether `p` is a nonnegative integer combination of elements of `gens`
/// lying in its orthant. Each summand must be conformally below the
/// remainder, so the search is a finite recursion on `p - h`.
pub fn decomposes(p: &IntVec, gens: &[IntVec], memo: &mut BTreeMap<IntVec, bool>) -> bool {
    if p.is_zero() {
        return true;
    }
    if let Some(&v) = memo.get(p) {
        return v;
    }
    let res = gens
        .iter()
        .filter(|h| !h.is_zero() && sign_compatible_leq(h, p))
        .any(|h| decomposes(&p.sub(h), gens, memo));
    memo.insert(p.clone(), res);
    res
}

fn box_points(dim: usize, radius: i64) -> Vec<IntVec> {
    (0..dim)
        .map(|_| -radius..=radius)
        .multi_cartesian_product()
        .map(|v| IntVec::from_i64(&v))
        .collect()
}

/// Bounded check that `gens` is the conic Graver base of `c`: membership,
/// completeness on the `radius` box, and irredundancy.
pub fn verify_hilbert(c: &Cone, gens: &[IntVec], radius: i64) -> OracleReport {
    let mut checks = Vec::new();
    for h in gens {
        if h.is_zero() || !cone_holds(c, h) {
            checks.push(Check::fail("membership", h));
        }
    }
    let mut memo = BTreeMap::new();
    for p in box_points(c.dim, radius) {
        if cone_holds(c, &p) && !decomposes(&p, gens, &mut memo) {
            checks.push(Check::fail("completeness", &p));
        }
    }
    for (i, h) in gens.iter().enumerate() {
        let others: Vec<IntVec> = gens
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, g)| g.clone())
            .collect();
        if !h.is_zero() && decomposes(h, &others, &mut BTreeMap::new()) {
            checks.push(Check::fail("minimality", h));
        }
    }
    for name in ["membership", "completeness", "minimality"] {
        if !checks.iter().any(|c| c.name == name) {
            checks.push(Check::pass(name));
        }
    }
    OracleReport {
        checks,
        ..Default::default()
    }
}
