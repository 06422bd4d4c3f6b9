//! Rational cones `{z ∈ Z^d : n·z >= 0 or <= 0 per row}`, their extreme rays,
//! Hilbert bases of pointed cones and conic Graver bases.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use itertools::Itertools;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{normalize_primitive, Int, IntVec, OrthantId, Sign};
use crate::linalg::{kernel_basis, rank_of_rows};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Rel {
    Ge,
    Le,
}

impl Rel {
    pub fn flip(self) -> Rel {
        match self {
            Rel::Ge => Rel::Le,
            Rel::Le => Rel::Ge,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ConeRow {
    pub normal: IntVec,
    pub rel: Rel,
}

impl ConeRow {
    pub fn satisfied_by(&self, z: &IntVec) -> bool {
        let v = self.normal.dot(z);
        match self.rel {
            Rel::Ge => !v.is_negative(),
            Rel::Le => !v.is_positive(),
        }
    }

    /// The normal oriented so that the row reads `n·z >= 0`.
    pub fn ge_normal(&self) -> IntVec {
        match self.rel {
            Rel::Ge => self.normal.clone(),
            Rel::Le => self.normal.neg(),
        }
    }
}

/// Canonical cone: primitive normals with positive leading entry, zero rows
/// dropped, rows sorted and deduplicated. Two cones built from the same
/// constraints compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Cone {
    pub dim: usize,
    pub rows: Vec<ConeRow>,
}

impl Cone {
    pub fn new(dim: usize, rows: impl IntoIterator<Item = (IntVec, Rel)>) -> Self {
        let mut set = BTreeSet::new();
        for (n, rel) in rows {
            assert_eq!(n.dim(), dim, "cone row dimension");
            if n.is_zero() {
                continue;
            }
            let p = normalize_primitive(&n).expect("nonzero");
            // normalization may have flipped the sign
            let flipped = n.iter().find(|a| !a.is_zero()).is_some_and(|a| a.is_negative());
            let rel = if flipped { rel.flip() } else { rel };
            set.insert(ConeRow { normal: p, rel });
        }
        Cone {
            dim,
            rows: set.into_iter().collect(),
        }
    }

    /// The whole lattice `Z^d`.
    pub fn full(dim: usize) -> Self {
        Cone { dim, rows: Vec::new() }
    }

    pub fn from_i64(dim: usize, rows: &[(&[i64], Rel)]) -> Self {
        Cone::new(dim, rows.iter().map(|(n, r)| (IntVec::from_i64(n), *r)))
    }

    pub fn contains(&self, z: &IntVec) -> bool {
        self.rows.iter().all(|r| r.satisfied_by(z))
    }

    pub fn ge_normals(&self) -> Vec<IntVec> {
        self.rows.iter().map(ConeRow::ge_normal).collect()
    }

    /// `-C`: every relation flipped.
    pub fn negated(&self) -> Cone {
        Cone::new(self.dim, self.rows.iter().map(|r| (r.normal.clone(), r.rel.flip())))
    }

    pub fn intersect(&self, other: &Cone) -> Cone {
        assert_eq!(self.dim, other.dim);
        Cone::new(
            self.dim,
            self.rows
                .iter()
                .chain(&other.rows)
                .map(|r| (r.normal.clone(), r.rel)),
        )
    }

    pub fn is_pointed(&self) -> bool {
        extreme_rays(self).lineality.is_empty()
    }

    /// True when the cone is `{0}`.
    pub fn is_trivial(&self) -> bool {
        let r = extreme_rays(self);
        r.rays.is_empty() && r.lineality.is_empty()
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows.is_empty() {
            return write!(f, "all of Z^{}", self.dim);
        }
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            let rel = if r.rel == Rel::Ge { ">=" } else { "<=" };
            write!(f, "{}·z {rel} 0", r.normal)?;
        }
        Ok(())
    }
}

/// Parses rows `ge|le <d integers>`, with an optional leading `dim <d>` line.
pub fn parse_cone(text: &str) -> Result<Cone> {
    let mut dim: Option<usize> = None;
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let no = i + 1;
        let toks: Vec<&str> = line.split('#').next().unwrap_or("").split_whitespace().collect();
        let Some((&head, rest)) = toks.split_first() else {
            continue;
        };
        let err = |msg: String| Error::Parse { line: no, msg };
        if head == "dim" {
            let d = rest
                .first()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| err("dim needs a count".into()))?;
            dim = Some(d);
            continue;
        }
        let rel = match head {
            "ge" => Rel::Ge,
            "le" => Rel::Le,
            other => return Err(err(format!("expected `ge` or `le`, found `{other}`"))),
        };
        let vals: Vec<Int> = rest
            .iter()
            .map(|t| t.parse().map_err(|_| err(format!("expected integer, found `{t}`"))))
            .collect::<Result<_>>()?;
        match dim {
            Some(d) if d != vals.len() => {
                return Err(err(format!("dimension mismatch: expected {d} entries, found {}", vals.len())))
            }
            None => dim = Some(vals.len()),
            _ => {}
        }
        rows.push((IntVec(vals), rel));
    }
    let dim = dim.ok_or(Error::Parse {
        line: 1,
        msg: "empty cone: give `dim <d>` or at least one row".into(),
    })?;
    if dim == 0 {
        return Err(Error::Parse {
            line: 1,
            msg: "cone dimension must be positive".into(),
        });
    }
    Ok(Cone::new(dim, rows))
}

/// Adds the sign constraint of every coordinate of orthant `k`.
pub fn cone_intersect_orthant(c: &Cone, k: &OrthantId) -> Cone {
    assert_eq!(c.dim, k.dim(), "orthant dimension");
    let signs = k.signs.iter().enumerate().map(|(i, s)| {
        let rel = if *s == Sign::Plus { Rel::Ge } else { Rel::Le };
        (IntVec::unit(c.dim, i), rel)
    });
    Cone::new(c.dim, c.rows.iter().map(|r| (r.normal.clone(), r.rel)).chain(signs))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rays {
    /// Primitive extreme ray generators of `C ∩ L^⊥`.
    pub rays: Vec<IntVec>,
    /// Basis of the lineality space `L`; empty iff the cone is pointed.
    pub lineality: Vec<IntVec>,
}

/// Extreme rays and lineality space, computed exactly by checking every
/// rank `d-1` subsystem of the (lineality-completed) constraint rows.
pub fn extreme_rays(c: &Cone) -> Rays {
    let d = c.dim;
    let normals: Vec<IntVec> = c.rows.iter().map(|r| r.normal.clone()).collect();
    let rat_rows: Vec<_> = normals.iter().map(|n| n.to_rat().0).collect();
    let lineality = kernel_basis(&rat_rows, d);

    let mut ge: Vec<IntVec> = c.ge_normals();
    let mut directions: Vec<IntVec> = normals;
    for l in &lineality {
        ge.push(l.clone());
        ge.push(l.neg());
        directions.push(l.clone());
    }
    directions.sort();
    directions.dedup();

    let inside = |z: &IntVec| ge.iter().all(|n| !n.dot(z).is_negative());
    let mut rays = BTreeSet::new();
    for subset in directions.iter().combinations(d - 1) {
        let sub: Vec<IntVec> = subset.into_iter().cloned().collect();
        if rank_of_rows(&sub, d) != d - 1 {
            continue;
        }
        let rows: Vec<_> = sub.iter().map(|n| n.to_rat().0).collect();
        let k = kernel_basis(&rows, d);
        debug_assert_eq!(k.len(), 1);
        for cand in [k[0].clone(), k[0].neg()] {
            if inside(&cand) {
                rays.insert(cand);
            }
        }
    }
    Rays {
        rays: rays.into_iter().collect(),
        lineality,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HilbertBasis {
    pub cone: Cone,
    pub gens: Vec<IntVec>,
}

/// Hilbert basis of a pointed cone from its extreme rays.
fn hilbert_from_rays(c: &Cone, rays: &[IntVec]) -> Vec<IntVec> {
    if rays.is_empty() {
        return Vec::new();
    }
    let d = c.dim;
    // Every irreducible point lies in a half-open parallelepiped spanned by
    // some of the rays, hence inside the signed sum of all ray coordinates.
    let mut lo = vec![Int::zero(); d];
    let mut hi = vec![Int::zero(); d];
    for r in rays {
        for i in 0..d {
            if r[i].is_negative() {
                lo[i] += &r[i];
            } else {
                hi[i] += &r[i];
            }
        }
    }
    let psi = IntVec(
        (0..d)
            .map(|i| c.ge_normals().iter().map(|n| n[i].clone()).sum())
            .collect(),
    );

    let mut cands: Vec<(Int, IntVec)> = Vec::new();
    let mut cur: Vec<Int> = lo.clone();
    'outer: loop {
        let z = IntVec(cur.clone());
        if !z.is_zero() && c.contains(&z) {
            cands.push((psi.dot(&z), z));
        }
        for i in (0..d).rev() {
            if cur[i] < hi[i] {
                cur[i] += 1;
                for j in i + 1..d {
                    cur[j] = lo[j].clone();
                }
                continue 'outer;
            }
        }
        break;
    }
    // `psi` is positive on every nonzero cone point, so a reducing summand
    // always comes earlier in this order.
    cands.sort();
    let mut kept: Vec<IntVec> = Vec::new();
    for (_, z) in cands {
        if !kept.iter().any(|h| c.contains(&z.sub(h))) {
            kept.push(z);
        }
    }
    kept.sort();
    kept
}

pub fn hilbert_basis(c: &Cone) -> Result<HilbertBasis> {
    let r = extreme_rays(c);
    if !r.lineality.is_empty() {
        return Err(Error::NotPointed);
    }
    Ok(HilbertBasis {
        cone: c.clone(),
        gens: hilbert_from_rays(c, &r.rays),
    })
}

/// Memoizes Hilbert bases by extreme-ray set; a pointed cone is the conic hull
/// of its rays, so equal ray sets mean equal cones.
#[derive(Default, Debug)]
pub struct HilbertCache {
    map: HashMap<Vec<IntVec>, Vec<IntVec>>,
}

impl HilbertCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    fn pointed_gens(&mut self, c: &Cone) -> Vec<IntVec> {
        let r = extreme_rays(c);
        debug_assert!(r.lineality.is_empty());
        if r.rays.is_empty() {
            return Vec::new();
        }
        self.map
            .entry(r.rays.clone())
            .or_insert_with(|| hilbert_from_rays(c, &r.rays))
            .clone()
    }

    pub fn conic_graver(&mut self, c: &Cone) -> Vec<IntVec> {
        let mut out = BTreeSet::new();
        for k in OrthantId::all(c.dim) {
            out.extend(self.pointed_gens(&cone_intersect_orthant(c, &k)));
        }
        out.into_iter().collect()
    }
}

/// Union over all `2^d` orthants of the Hilbert bases of `C ∩ O^k`, sorted.
pub fn conic_graver(c: &Cone) -> Vec<IntVec> {
    HilbertCache::new().conic_graver(c)
}
