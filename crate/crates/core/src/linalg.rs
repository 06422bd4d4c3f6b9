//! Exact determinants, ranks, kernels, bases of `A^R`, basis solves, the
//! subdeterminant bound and circuit enumeration.

use std::fmt;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{clear_denominators, normalize_primitive, Int, IntMat, IntVec, RatVec, Rational};
use crate::instance::MipInstance;

/// Fraction-free Gaussian elimination. Returns the echelon form's rank and
/// the determinant of the leading square block when the matrix is square.
fn bareiss(mat: &IntMat) -> (usize, Int) {
    let (rows, cols) = (mat.rows(), mat.cols());
    let mut a: Vec<Vec<Int>> = (0..rows).map(|r| mat.row(r).to_vec()).collect();
    let mut prev = Int::one();
    let mut sign = Int::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        if pivot != rank {
            a.swap(pivot, rank);
            sign = -sign;
        }
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let v = (&a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c]) / &prev;
                a[r][c] = v;
            }
            a[r][col] = Int::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    let det = if rows == cols && rank == rows {
        if rows == 0 {
            Int::one()
        } else {
            sign * &a[rows - 1][cols - 1]
        }
    } else {
        Int::zero()
    };
    (rank, det)
}

pub fn det(m: &IntMat) -> Result<Int> {
    if m.rows() != m.cols() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    Ok(bareiss(m).1)
}

pub fn rank(m: &IntMat) -> usize {
    bareiss(m).0
}

/// Rank of a list of integer rows of common length `cols`.
pub fn rank_of_rows(rows: &[IntVec], cols: usize) -> usize {
    let data: Vec<Int> = rows.iter().flat_map(|r| r.0.iter().cloned()).collect();
    let m = IntMat::new(rows.len(), cols, data).expect("rows share one length");
    rank(&m)
}

/// Basis of the rational kernel of the given rows, each vector scaled to a
/// primitive integer vector with positive leading entry.
pub fn kernel_basis(rows: &[Vec<Rational>], cols: usize) -> Vec<IntVec> {
    let mut a: Vec<Vec<Rational>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let d = &f * &a[r][j];
                    a[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[i][f].clone();
            }
            normalize_primitive(&clear_denominators(&v)).expect("kernel vector is nonzero")
        })
        .collect()
}

/// Solves `M y = rhs` for square nonsingular `M`.
pub fn solve_square(m: &IntMat, rhs: &[Rational]) -> Option<RatVec> {
    let n = m.rows();
    debug_assert_eq!(n, m.cols());
    let mut a: Vec<Vec<Rational>> = m.to_rat_rows();
    for (row, v) in a.iter_mut().zip(rhs) {
        row.push(v.clone());
    }
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..=n {
                    let d = &f * &a[c][j];
                    a[i][j] -= d;
                }
            }
        }
    }
    Some(RatVec(a.into_iter().map(|mut r| r.pop().unwrap()).collect()))
}

/// `m` linearly independent columns of `A^R`, strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Basis {
    pub cols: Vec<usize>,
    #[serde(serialize_with = "ser_int")]
    pub det: Int,
}

fn ser_int<S: serde::Serializer>(v: &Int, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cols {:?} det {}", self.cols, self.det)
    }
}

impl Basis {
    pub fn matrix(&self, inst: &MipInstance) -> IntMat {
        inst.a.select_cols(&self.cols)
    }
}

/// All bases of `A^R` in lexicographic order of their column sets.
pub fn enumerate_bases(inst: &MipInstance) -> Vec<Basis> {
    (0..inst.n_real)
        .combinations(inst.m)
        .filter_map(|cols| {
            let d = det(&inst.a.select_cols(&cols)).expect("square selection");
            (!d.is_zero()).then_some(Basis { cols, det: d })
        })
        .collect()
}

/// Exact `y` with `B y = v`.
pub fn solve_basis(basis: &Basis, inst: &MipInstance, v: &RatVec) -> RatVec {
    solve_square(&basis.matrix(inst), &v.0).expect("basis matrix is nonsingular")
}

/// Precomputed `B^{-1} b` and the rows of `B^{-1} A^I` for one basis.
#[derive(Clone, Debug)]
pub struct BasisSystem {
    pub basis: Basis,
    pub inv_b: RatVec,
    /// `m` rows of length `n_I`.
    pub inv_ai: Vec<RatVec>,
}

impl BasisSystem {
    pub fn new(inst: &MipInstance, basis: &Basis) -> Self {
        let bm = basis.matrix(inst);
        let inv_b = solve_square(&bm, &inst.b.to_rat().0).expect("nonsingular");
        let mut cols = Vec::with_capacity(inst.n_int);
        for j in 0..inst.n_int {
            let col = inst.a.column(inst.n_real + j).to_rat();
            cols.push(solve_square(&bm, &col.0).expect("nonsingular"));
        }
        let inv_ai = (0..inst.m)
            .map(|p| RatVec((0..inst.n_int).map(|j| cols[j][p].clone()).collect()))
            .collect();
        BasisSystem {
            basis: basis.clone(),
            inv_b,
            inv_ai,
        }
    }

    /// `B^{-1} A^I z`.
    pub fn apply(&self, z: &IntVec) -> RatVec {
        RatVec(self.inv_ai.iter().map(|row| row.dot_int(&z.0)).collect())
    }

    /// Basic part `B^{-1}(b - A^I z)` of the slice at integer part `z`.
    pub fn basic_part(&self, z: &IntVec) -> RatVec {
        self.inv_b.sub(&self.apply(z))
    }

    /// `‖B^{-1} A^I‖∞`, the largest absolute row sum.
    pub fn delta(&self) -> Rational {
        self.inv_ai
            .iter()
            .map(|row| row.0.iter().map(|a| a.abs()).sum::<Rational>())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

/// `Δ(A)`: largest absolute value of any square minor of `A`.
pub fn max_subdeterminant_of(a: &IntMat) -> Int {
    let mut best = Int::zero();
    for k in 1..=a.rows().min(a.cols()) {
        for rows in (0..a.rows()).combinations(k) {
            for cols in (0..a.cols()).combinations(k) {
                let d = det(&a.select(&rows, &cols)).expect("square").abs();
                if d > best {
                    best = d;
                }
            }
        }
    }
    best
}

pub fn max_subdeterminant(inst: &MipInstance) -> Int {
    max_subdeterminant_of(&inst.a)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Circuit {
    pub vec: IntVec,
    pub support: Vec<usize>,
}

/// Support-minimal kernel vectors of `mat`, one primitive representative per
/// `±` pair, sorted.
pub fn circuits_of(mat: &IntMat) -> Vec<Circuit> {
    let n = mat.cols();
    let max_size = (mat.rows() + 1).min(n);
    let mut found: Vec<Circuit> = Vec::new();
    for size in 1..=max_size {
        for cols in (0..n).combinations(size) {
            let sub = mat.select_cols(&cols);
            if rank(&sub) + 1 != size {
                continue;
            }
            let kernel = kernel_basis(&sub.to_rat_rows(), size);
            debug_assert_eq!(kernel.len(), 1);
            let k = &kernel[0];
            if k.iter().any(Zero::is_zero) {
                continue;
            }
            let mut vec = IntVec::zeros(n);
            for (i, &c) in cols.iter().enumerate() {
                vec[c] = k[i].clone();
            }
            found.push(Circuit {
                vec,
                support: cols,
            });
        }
    }
    // A full-support kernel vector of a rank-deficient-by-one column set is
    // already support-minimal; the superset filter below is a safety net.
    let supports: Vec<Vec<usize>> = found.iter().map(|c| c.support.clone()).collect();
    found.retain(|c| {
        !supports
            .iter()
            .any(|s| s.len() < c.support.len() && s.iter().all(|i| c.support.contains(i)))
    });
    found.sort();
    found.dedup();
    found
}

/// Circuits of `A^R`.
pub fn circuits(inst: &MipInstance) -> Vec<Circuit> {
    circuits_of(&inst.a_real())
}

/// Rank of the columns of `A^R` indexed by `cols`.
pub fn columns_independent(inst: &MipInstance, cols: &[usize]) -> bool {
    cols.len() <= inst.m && rank(&inst.a.select_cols(cols)) == cols.len()
}
