//! Mixed-integer instances in standard form, `min c·x  s.t. A x = b, x >= 0`,
//! with the real columns of `A` first, and their line-oriented text format:
//!
//! ```text
//! dims <nR> <nI> <m>
//! row <nR+nI integers>        # m times
//! rhs <m integers>
//! cost <nR+nI integers>
//! box <nI lo...> <nI hi...>   # optional
//! ```

use std::fmt;

use num_traits::Signed;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{rat_from_int, write_tuple, Int, IntMat, IntVec, RatVec, Rational};
use crate::linalg;

/// Integer enumeration window `lo <= x^I <= hi`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct IntBox {
    pub lo: IntVec,
    pub hi: IntVec,
}

impl IntBox {
    pub fn new(lo: &[i64], hi: &[i64]) -> Self {
        IntBox {
            lo: IntVec::from_i64(lo),
            hi: IntVec::from_i64(hi),
        }
    }

    pub fn contains(&self, z: &IntVec) -> bool {
        z.iter()
            .zip(self.lo.iter().zip(self.hi.iter()))
            .all(|(v, (l, h))| l <= v && v <= h)
    }

    /// Every integer point of the box in lexicographic order.
    pub fn points(&self) -> Vec<IntVec> {
        let mut out = vec![IntVec(Vec::new())];
        for (l, h) in self.lo.iter().zip(self.hi.iter()) {
            let mut next = Vec::new();
            for p in &out {
                let mut v = l.clone();
                while &v <= h {
                    let mut q = p.clone();
                    q.0.push(v.clone());
                    next.push(q);
                    v += 1;
                }
            }
            out = next;
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MipInstance {
    pub n_real: usize,
    pub n_int: usize,
    pub m: usize,
    pub a: IntMat,
    pub b: IntVec,
    pub c: IntVec,
    pub bounds: Option<IntBox>,
}

/// A point or direction: rational real part and integer part.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MixedVec {
    pub real: RatVec,
    pub integral: IntVec,
}

impl MixedVec {
    pub fn new(real: RatVec, integral: IntVec) -> Self {
        MixedVec { real, integral }
    }

    pub fn zeros(n_real: usize, n_int: usize) -> Self {
        MixedVec::new(RatVec::zeros(n_real), IntVec::zeros(n_int))
    }

    /// Splits a full vector; the trailing `n_int` entries must be integers.
    pub fn from_full(full: &[Rational], n_real: usize) -> Option<Self> {
        let real = RatVec(full[..n_real].to_vec());
        let integral = RatVec(full[n_real..].to_vec()).to_int()?;
        Some(MixedVec::new(real, integral))
    }

    pub fn from_i64(real: &[i64], integral: &[i64]) -> Self {
        MixedVec::new(IntVec::from_i64(real).to_rat(), IntVec::from_i64(integral))
    }

    pub fn full(&self) -> Vec<Rational> {
        self.real
            .0
            .iter()
            .cloned()
            .chain(self.integral.iter().map(rat_from_int))
            .collect()
    }

    pub fn add(&self, other: &MixedVec) -> MixedVec {
        MixedVec::new(self.real.add(&other.real), self.integral.add(&other.integral))
    }

    pub fn sub(&self, other: &MixedVec) -> MixedVec {
        MixedVec::new(self.real.sub(&other.real), self.integral.sub(&other.integral))
    }

    pub fn neg(&self) -> MixedVec {
        MixedVec::new(self.real.scale(&-Rational::from_integer(1.into())), self.integral.neg())
    }

    pub fn is_zero(&self) -> bool {
        self.real.is_zero() && self.integral.is_zero()
    }

    pub fn max_abs(&self) -> Rational {
        self.real.max_abs().max(rat_from_int(&self.integral.max_abs()))
    }
}

impl fmt::Display for MixedVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, self.full().iter())
    }
}

impl MipInstance {
    /// Builds and validates an instance.
    pub fn new(
        n_real: usize,
        n_int: usize,
        a: IntMat,
        b: IntVec,
        c: IntVec,
        bounds: Option<IntBox>,
    ) -> Result<Self> {
        let inst = MipInstance {
            n_real,
            n_int,
            m: a.rows(),
            a,
            b,
            c,
            bounds,
        };
        let failures = validate_instance(&inst);
        if failures.is_empty() {
            Ok(inst)
        } else {
            Err(Error::Invalid(failures))
        }
    }

    /// One-row instance `ar·x^R + ai·x^I = b` with zero cost.
    pub fn single_row(ar: &[i64], ai: &[i64], b: i64, bounds: Option<IntBox>) -> Result<Self> {
        let row: Vec<i64> = ar.iter().chain(ai).copied().collect();
        let n = row.len();
        MipInstance::new(
            ar.len(),
            ai.len(),
            IntMat::from_rows(&[row])?,
            IntVec::from_i64(&[b]),
            IntVec::zeros(n),
            bounds,
        )
    }

    pub fn with_cost(mut self, c: &[i64]) -> Self {
        assert_eq!(c.len(), self.n(), "cost length");
        self.c = IntVec::from_i64(c);
        self
    }

    pub fn with_box(mut self, bounds: IntBox) -> Result<Self> {
        self.bounds = Some(bounds);
        let failures = validate_instance(&self);
        if failures.is_empty() {
            Ok(self)
        } else {
            Err(Error::Invalid(failures))
        }
    }

    pub fn n(&self) -> usize {
        self.n_real + self.n_int
    }

    pub fn a_real(&self) -> IntMat {
        self.a.select_cols(&(0..self.n_real).collect::<Vec<_>>())
    }

    pub fn a_int(&self) -> IntMat {
        self.a.select_cols(&(self.n_real..self.n()).collect::<Vec<_>>())
    }

    pub fn c_real(&self) -> &[Int] {
        &self.c.0[..self.n_real]
    }

    pub fn c_int(&self) -> &[Int] {
        &self.c.0[self.n_real..]
    }

    pub fn objective(&self, x: &MixedVec) -> Rational {
        x.real.dot_int(self.c_real()) + rat_from_int(&IntVec(self.c_int().to_vec()).dot(&x.integral))
    }

    /// `A x` for a mixed vector.
    pub fn apply(&self, x: &MixedVec) -> RatVec {
        self.a.mul_rat_vec(&x.full())
    }

    pub fn in_kernel(&self, x: &MixedVec) -> bool {
        self.apply(x).is_zero()
    }

    /// `b - A^I z`.
    pub fn slice_rhs(&self, z: &IntVec) -> RatVec {
        self.b.sub(&self.a_int().mul_vec(&z.0)).to_rat()
    }

    pub fn is_feasible(&self, x: &MixedVec) -> bool {
        x.real.dim() == self.n_real
            && x.integral.dim() == self.n_int
            && x.real.is_nonnegative()
            && x.integral.iter().all(|v| !v.is_negative())
            && self.apply(x) == self.b.to_rat()
    }

    /// Real support on linearly independent columns of `A^R`.
    pub fn is_basic(&self, x: &MixedVec) -> bool {
        linalg::columns_independent(self, &x.real.support())
    }

    /// Integer part admissible for enumeration: nonnegative and in the box.
    pub fn integer_part_allowed(&self, z: &IntVec) -> bool {
        z.iter().all(|v| !v.is_negative()) && self.bounds.as_ref().map_or(true, |bx| bx.contains(z))
    }

    pub fn to_text(&self) -> String {
        serialize_instance(self)
    }
}

impl Serialize for MipInstance {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<IntVec> = (0..self.m).map(|r| IntVec(self.a.row(r).to_vec())).collect();
        let mut st = s.serialize_struct("MipInstance", 7)?;
        st.serialize_field("nR", &self.n_real)?;
        st.serialize_field("nI", &self.n_int)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("A", &rows)?;
        st.serialize_field("b", &self.b)?;
        st.serialize_field("c", &self.c)?;
        st.serialize_field("box", &self.bounds)?;
        st.end()
    }
}

/// Returns the violated invariants; empty means valid.
pub fn validate_instance(inst: &MipInstance) -> Vec<String> {
    let mut out = Vec::new();
    let n = inst.n();
    if inst.m == 0 {
        out.push("at least one row required (m >= 1)".to_string());
    }
    if inst.n_int == 0 {
        out.push("no integer variables (nI = 0); pure LP inputs are not mixed programs".to_string());
    }
    if inst.n_real < inst.m {
        out.push(format!(
            "fewer real variables than rows (nR = {} < m = {})",
            inst.n_real, inst.m
        ));
    }
    if inst.a.rows() != inst.m || inst.a.cols() != n {
        out.push(format!(
            "A is {}x{}, expected {}x{}",
            inst.a.rows(),
            inst.a.cols(),
            inst.m,
            n
        ));
        return out;
    }
    if inst.b.dim() != inst.m {
        out.push(format!("rhs has {} entries, expected {}", inst.b.dim(), inst.m));
    }
    if inst.c.dim() != n {
        out.push(format!("cost has {} entries, expected {}", inst.c.dim(), n));
    }
    if inst.m > 0 && inst.n_real >= inst.m && linalg::rank(&inst.a_real()) < inst.m {
        out.push("real part rank-deficient; preprocess rows".to_string());
    }
    if let Some(bx) = &inst.bounds {
        if bx.lo.dim() != inst.n_int || bx.hi.dim() != inst.n_int {
            out.push(format!("box bounds must have {} entries each", inst.n_int));
        } else {
            if bx.lo.iter().any(|v| v.is_negative()) {
                out.push("negative lower bound in box".to_string());
            }
            if bx.lo.iter().zip(bx.hi.iter()).any(|(l, h)| l > h) {
                out.push("box lower bound exceeds upper bound".to_string());
            }
        }
    }
    out
}

fn parse_ints(tokens: &[&str], line: usize) -> Result<Vec<Int>> {
    tokens
        .iter()
        .map(|t| {
            t.parse::<Int>().map_err(|_| Error::Parse {
                line,
                msg: format!("expected integer, found `{t}`"),
            })
        })
        .collect()
}

fn expect_count(vals: &[Int], want: usize, what: &str, line: usize) -> Result<()> {
    if vals.len() == want {
        Ok(())
    } else {
        Err(Error::Parse {
            line,
            msg: format!("dimension mismatch: {what} needs {want} entries, found {}", vals.len()),
        })
    }
}

pub fn parse_instance(text: &str) -> Result<MipInstance> {
    let lines: Vec<(usize, Vec<&str>)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, toks)| !toks.is_empty())
        .collect();
    let mut cursor = lines.iter();
    let eof_line = text.lines().count() + 1;
    let mut next = |want: &str| -> Result<(usize, &[&str])> {
        let (no, toks) = cursor.next().ok_or_else(|| Error::Parse {
            line: eof_line,
            msg: format!("unexpected end of input, expected `{want}`"),
        })?;
        if toks[0] != want {
            return Err(Error::Parse {
                line: *no,
                msg: format!("expected `{want}`, found `{}`", toks[0]),
            });
        }
        Ok((*no, &toks[1..]))
    };

    let (no, dims) = next("dims")?;
    if dims.len() != 3 {
        return Err(Error::Parse {
            line: no,
            msg: "dims needs three counts: nR nI m".to_string(),
        });
    }
    let counts: Vec<usize> = dims
        .iter()
        .map(|t| {
            t.parse::<usize>().map_err(|_| Error::Parse {
                line: no,
                msg: format!("expected count, found `{t}`"),
            })
        })
        .collect::<Result<_>>()?;
    let (n_real, n_int, m) = (counts[0], counts[1], counts[2]);
    let n = n_real + n_int;

    let mut data = Vec::with_capacity(m * n);
    for _ in 0..m {
        let (no, toks) = next("row")?;
        let vals = parse_ints(toks, no)?;
        expect_count(&vals, n, "row", no)?;
        data.extend(vals);
    }
    let (no, toks) = next("rhs")?;
    let b = parse_ints(toks, no)?;
    expect_count(&b, m, "rhs", no)?;
    let (no, toks) = next("cost")?;
    let c = parse_ints(toks, no)?;
    expect_count(&c, n, "cost", no)?;

    let mut bounds = None;
    let consumed = m + 3;
    let mut rest = lines[consumed..].iter();
    if let Some((no, toks)) = rest.next() {
        if toks[0] != "box" {
            return Err(Error::Parse {
                line: *no,
                msg: format!("unexpected trailing content `{}`", toks.join(" ")),
            });
        }
        let vals = parse_ints(&toks[1..], *no)?;
        expect_count(&vals, 2 * n_int, "box", *no)?;
        bounds = Some(IntBox {
            lo: IntVec(vals[..n_int].to_vec()),
            hi: IntVec(vals[n_int..].to_vec()),
        });
    }
    if let Some((no, toks)) = rest.next() {
        return Err(Error::Parse {
            line: *no,
            msg: format!("unexpected trailing content `{}`", toks.join(" ")),
        });
    }

    let a = IntMat::new(m, n, data)?;
    MipInstance::new(n_real, n_int, a, IntVec(b), IntVec(c), bounds)
}

fn join(vals: &[Int]) -> String {
    vals.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

/// Canonical text form; `parse_instance` inverts it exactly.
pub fn serialize_instance(inst: &MipInstance) -> String {
    let mut s = format!("dims {} {} {}\n", inst.n_real, inst.n_int, inst.m);
    for r in 0..inst.m {
        s.push_str(&format!("row {}\n", join(inst.a.row(r))));
    }
    s.push_str(&format!("rhs {}\n", join(&inst.b.0)));
    s.push_str(&format!("cost {}\n", join(&inst.c.0)));
    if let Some(bx) = &inst.bounds {
        s.push_str(&format!("box {} {}\n", join(&bx.lo.0), join(&bx.hi.0)));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const RAYMOND: &str = "# Raymond\ndims 2 1 1\nrow 1 1 1\nrhs 3\ncost 0 0 1\n";
    const LONE: &str = "dims 2 1 1\nrow 1 -1 2   # x1 - x2 + 2 x3 = 3\n\nrhs 3\ncost 1 1 1\nbox 0 3\n";

    #[test]
    fn parses_examples() {
        let r = parse_instance(RAYMOND).unwrap();
        assert_eq!((r.n_real, r.n_int, r.m), (2, 1, 1));
        assert_eq!(r.a, IntMat::from_rows(&[vec![1, 1, 1]]).unwrap());
        assert_eq!(r.b, IntVec::from_i64(&[3]));
        assert_eq!(r.c, IntVec::from_i64(&[0, 0, 1]));
        assert!(r.bounds.is_none());

        let l = parse_instance(LONE).unwrap();
        assert_eq!(l.a, IntMat::from_rows(&[vec![1, -1, 2]]).unwrap());
        assert_eq!(l.bounds, Some(IntBox::new(&[0], &[3])));
        assert_eq!(l.to_text(), "dims 2 1 1\nrow 1 -1 2\nrhs 3\ncost 1 1 1\nbox 0 3\n");
    }

    #[test]
    fn parse_errors() {
        let e = parse_instance("dims 2 1 1\nrow 1 1\nrhs 3\ncost 0 0 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, ref msg } if msg.contains("dimension mismatch")), "{e}");
        let e = parse_instance("dims 2 1 1\nrow 1 1 x\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        let e = parse_instance(&format!("{RAYMOND}garbage\n")).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 6, .. }), "{e}");
        let e = parse_instance(&format!("{RAYMOND}box 0 3\nbox 0 3\n")).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 7, .. }), "{e}");
        let e = parse_instance("dims 2 1 1\nrow 1 1 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { .. }));
        let e = parse_instance("dims 2 1 2\nrow 1 1 1\nrow 1 1 0\nrhs 1 1\ncost 0 0 0\n").unwrap_err();
        assert_eq!(e, Error::Invalid(vec!["real part rank-deficient; preprocess rows".into()]));
        let e = parse_instance("dims 3 0 1\nrow 1 1 1\nrhs 1\ncost 0 0 0\n").unwrap_err();
        assert!(matches!(e, Error::Invalid(ref f) if f[0].contains("nI = 0")));
        let e = parse_instance("dims 1 2 2\nrow 1 1 1\nrow 0 1 1\nrhs 1 1\ncost 0 0 0\n").unwrap_err();
        assert!(matches!(e, Error::Invalid(ref f) if f[0].contains("nR = 1 < m = 2")));
    }

    #[test]
    fn validation_reports() {
        let ok = parse_instance(RAYMOND).unwrap();
        assert!(validate_instance(&ok).is_empty());

        let mut dup = ok.clone();
        dup.m = 2;
        dup.a = IntMat::from_rows(&[vec![1, 1, 1], vec![1, 1, 0]]).unwrap();
        dup.b = IntVec::from_i64(&[1, 1]);
        let f = validate_instance(&dup);
        assert!(f.iter().any(|s| s.contains("rank-deficient")), "{f:?}");

        let mut neg = ok.clone();
        neg.bounds = Some(IntBox::new(&[-1], &[2]));
        let f = validate_instance(&neg);
        assert_eq!(f, vec!["negative lower bound in box".to_string()]);

        let mut inverted = ok;
        inverted.bounds = Some(IntBox::new(&[3], &[2]));
        assert!(validate_instance(&inverted)[0].contains("exceeds"));
    }

    #[test]
    fn box_points_are_lexicographic() {
        let bx = IntBox::new(&[0, 1], &[1, 2]);
        let pts: Vec<IntVec> = bx.points();
        let want: Vec<IntVec> = [[0, 1], [0, 2], [1, 1], [1, 2]]
            .iter()
            .map(|p| IntVec::from_i64(p))
            .collect();
        assert_eq!(pts, want);
    }
}
