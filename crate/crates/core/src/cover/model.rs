use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::field::{self, check_prime};
use crate::{Error, Result};

/// Largest point set any enumeration in this module will visit.
pub const POINT_BUDGET: usize = 1 << 20;

pub type Point = Vec<u32>;

/// `base + span(basis)` in `F_q^n`, stored canonically: the basis in reduced
/// echelon form and the base zero on its pivot coordinates. Equal point
/// sets have equal representations.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffineSubspace {
    q: u32,
    base: Point,
    basis: Vec<Point>,
    pivots: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubspaceRepr {
    pub base: Point,
    #[serde(default)]
    pub basis_rows: Vec<Point>,
}

impl AffineSubspace {
    pub fn new(q: u32, base: Point, rows: Vec<Point>) -> Result<Self> {
        check_prime(q)?;
        let n = base.len();
        for v in std::iter::once(&base).chain(&rows) {
            if v.len() != n {
                return Err(Error::input(format!("vector of length {} in F_{q}^{n}", v.len())));
            }
            if let Some(x) = v.iter().find(|&&x| x >= q) {
                return Err(Error::input(format!("entry {x} is not a residue mod {q}")));
            }
        }
        let mut basis = rows;
        let pivots = field::rref(&mut basis, q);
        let mut base = base;
        field::reduce(&mut base, &basis, &pivots, q);
        Ok(AffineSubspace { q, base, basis, pivots })
    }

    pub fn point(q: u32, p: Point) -> Result<Self> {
        AffineSubspace::new(q, p, Vec::new())
    }

    /// All of `F_q^n`.
    pub fn full(q: u32, n: usize) -> Result<Self> {
        let rows = (0..n)
            .map(|i| {
                let mut e = vec![0; n];
                e[i] = 1;
                e
            })
            .collect();
        AffineSubspace::new(q, vec![0; n], rows)
    }

    pub fn from_repr(q: u32, r: SubspaceRepr) -> Result<Self> {
        AffineSubspace::new(q, r.base, r.basis_rows)
    }

    pub fn repr(&self) -> SubspaceRepr {
        SubspaceRepr {
            base: self.base.clone(),
            basis_rows: self.basis.clone(),
        }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn ambient(&self) -> usize {
        self.base.len()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn base(&self) -> &[u32] {
        &self.base
    }

    pub fn basis(&self) -> &[Point] {
        &self.basis
    }

    /// Number of points, `q^dim`, if it fits the enumeration budget.
    pub fn size(&self) -> Result<usize> {
        let mut s: usize = 1;
        for _ in 0..self.dim() {
            s = s.saturating_mul(self.q as usize);
        }
        if s > POINT_BUDGET {
            return Err(Error::resource(format!(
                "subspace has {s} points, budget {POINT_BUDGET}"
            )));
        }
        Ok(s)
    }

    fn in_span(&self, v: &[u32]) -> bool {
        let mut v = v.to_vec();
        field::reduce(&mut v, &self.basis, &self.pivots, self.q);
        v.iter().all(|&x| x == 0)
    }

    pub fn contains_point(&self, p: &[u32]) -> bool {
        p.len() == self.ambient() && self.in_span(&field::sub(p, &self.base, self.q))
    }

    pub fn contains(&self, other: &AffineSubspace) -> bool {
        self.contains_point(&other.base) && other.basis.iter().all(|v| self.in_span(v))
    }

    /// Points in lexicographic order.
    pub fn points(&self) -> Result<Vec<Point>> {
        let size = self.size()?;
        let q = self.q;
        let mut out = Vec::with_capacity(size);
        let mut coef = vec![0u32; self.dim()];
        for _ in 0..size {
            let mut p = self.base.clone();
            for (c, row) in coef.iter().zip(&self.basis) {
                for (x, &r) in p.iter_mut().zip(row) {
                    *x = (*x + c * r) % q;
                }
            }
            out.push(p);
            for c in coef.iter_mut().rev() {
                *c += 1;
                if *c < q {
                    break;
                }
                *c = 0;
            }
        }
        out.sort();
        Ok(out)
    }

    /// Equations `C x = c` cutting out the subspace.
    fn equations(&self) -> (Vec<Point>, Vec<u32>) {
        let c = field::nullspace(&self.basis, self.ambient(), self.q);
        let rhs = c.iter().map(|row| field::dot(row, &self.base, self.q)).collect();
        (c, rhs)
    }

    pub fn intersect(&self, other: &AffineSubspace) -> Option<AffineSubspace> {
        debug_assert_eq!(self.q, other.q);
        let n = self.ambient();
        let (mut rows, mut rhs) = self.equations();
        let (r2, b2) = other.equations();
        rows.extend(r2);
        rhs.extend(b2);
        let x = field::solve(&rows, &rhs, n, self.q)?;
        let basis = field::nullspace(&rows, n, self.q);
        AffineSubspace::new(self.q, x, basis).ok()
    }

    /// Image under the coordinate projection onto `range`.
    pub fn project(&self, range: std::ops::Range<usize>) -> AffineSubspace {
        let base = self.base[range.clone()].to_vec();
        let rows = self.basis.iter().map(|r| r[range.clone()].to_vec()).collect();
        AffineSubspace::new(self.q, base, rows).expect("projection of a valid subspace")
    }

    /// `self × other`.
    pub fn product(&self, other: &AffineSubspace) -> AffineSubspace {
        let (n1, n2) = (self.ambient(), other.ambient());
        let mut base = self.base.clone();
        base.extend_from_slice(&other.base);
        let mut rows: Vec<Point> = self
            .basis
            .iter()
            .map(|r| {
                let mut v = r.clone();
                v.resize(n1 + n2, 0);
                v
            })
            .collect();
        rows.extend(other.basis.iter().map(|r| {
            let mut v = vec![0; n1];
            v.extend_from_slice(r);
            v
        }));
        AffineSubspace::new(self.q, base, rows).expect("product of valid subspaces")
    }

    /// `self^m`; the zero-dimensional ambient point for `m = 0`.
    pub fn power(&self, m: usize) -> AffineSubspace {
        let mut acc = AffineSubspace::new(self.q, Vec::new(), Vec::new()).expect("empty space");
        for _ in 0..m {
            acc = acc.product(self);
        }
        acc
    }

    /// Smallest affine subspace containing `points`.
    pub fn hull(q: u32, points: &[Point]) -> Result<AffineSubspace> {
        let first = points.first().ok_or_else(|| Error::input("hull of no points"))?;
        let rows = points[1..].iter().map(|p| field::sub(p, first, q)).collect();
        AffineSubspace::new(q, first.clone(), rows)
    }
}

/// A finite union of affine subspaces of `F_q^n`, none containing another.
/// Its degree is the number of components, each subspace having degree 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ModelRepr", into = "ModelRepr")]
pub struct LinearVarietyModel {
    q: u32,
    n: usize,
    components: Vec<AffineSubspace>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelRepr {
    pub q: u32,
    pub n: usize,
    pub components: Vec<SubspaceRepr>,
}

impl TryFrom<ModelRepr> for LinearVarietyModel {
    type Error = Error;
    fn try_from(r: ModelRepr) -> Result<Self> {
        let comps = r
            .components
            .into_iter()
            .map(|c| AffineSubspace::from_repr(r.q, c))
            .collect::<Result<Vec<_>>>()?;
        LinearVarietyModel::new(r.q, r.n, comps)
    }
}

impl From<LinearVarietyModel> for ModelRepr {
    fn from(m: LinearVarietyModel) -> Self {
        ModelRepr {
            q: m.q,
            n: m.n,
            components: m.components.iter().map(|c| c.repr()).collect(),
        }
    }
}

impl LinearVarietyModel {
    /// Drops components contained in others and sorts the rest by
    /// decreasing dimension, then by representation.
    pub fn new(q: u32, n: usize, components: Vec<AffineSubspace>) -> Result<Self> {
        check_prime(q)?;
        for c in &components {
            if c.q != q || c.ambient() != n {
                return Err(Error::input(format!(
                    "component in F_{}^{} inside a model over F_{q}^{n}",
                    c.q,
                    c.ambient()
                )));
            }
        }
        let mut comps = components;
        comps.sort_by(|a, b| b.dim().cmp(&a.dim()).then_with(|| a.cmp(b)));
        comps.dedup();
        let mut kept: Vec<AffineSubspace> = Vec::new();
        for c in comps {
            if !kept.iter().any(|k| k.contains(&c)) {
                kept.push(c);
            }
        }
        Ok(LinearVarietyModel { q, n, components: kept })
    }

    pub fn empty(q: u32, n: usize) -> Result<Self> {
        LinearVarietyModel::new(q, n, Vec::new())
    }

    pub fn irreducible(s: AffineSubspace) -> Self {
        let (q, n) = (s.q, s.ambient());
        LinearVarietyModel {
            q,
            n,
            components: vec![s],
        }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[AffineSubspace] {
        &self.components
    }

    pub fn degree(&self) -> usize {
        self.components.len()
    }

    /// `None` for the empty model.
    pub fn dim(&self) -> Option<usize> {
        self.components.iter().map(|c| c.dim()).max()
    }

    pub fn contains_point(&self, p: &[u32]) -> bool {
        self.components.iter().any(|c| c.contains_point(p))
    }

    pub fn points(&self) -> Result<BTreeSet<Point>> {
        let mut out = BTreeSet::new();
        for c in &self.components {
            out.extend(c.points()?);
            if out.len() > POINT_BUDGET {
                return Err(Error::resource("model exceeds the point budget"));
            }
        }
        Ok(out)
    }

    pub fn union(&self, other: &LinearVarietyModel) -> Result<Self> {
        let mut comps = self.components.clone();
        comps.extend(other.components.iter().cloned());
        LinearVarietyModel::new(self.q, self.n, comps)
    }

    pub fn intersect(&self, other: &LinearVarietyModel) -> Result<Self> {
        let mut comps = Vec::new();
        for a in &self.components {
            for b in &other.components {
                comps.extend(a.intersect(b));
            }
        }
        LinearVarietyModel::new(self.q, self.n, comps)
    }

    pub fn intersect_subspace(&self, s: &AffineSubspace) -> Result<Self> {
        self.intersect(&LinearVarietyModel::irreducible(s.clone()))
    }

    pub fn project(&self, range: std::ops::Range<usize>) -> Result<Self> {
        let comps = self.components.iter().map(|c| c.project(range.clone())).collect();
        LinearVarietyModel::new(self.q, range.len(), comps)
    }

    /// Point-set inclusion, by enumeration.
    pub fn is_subset_of(&self, other: &LinearVarietyModel) -> Result<bool> {
        for c in &self.components {
            if other.components.iter().any(|o| o.contains(c)) {
                continue;
            }
            if !c.points()?.iter().all(|p| other.contains_point(p)) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Distinct affine subspaces of one dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FamilyRepr")]
pub struct SubspaceFamily {
    q: u32,
    n: usize,
    #[serde(serialize_with = "ser_members")]
    members: Vec<AffineSubspace>,
}

fn ser_members<S: serde::Serializer>(m: &[AffineSubspace], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(m.iter().map(|c| c.repr()))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyRepr {
    q: u32,
    n: usize,
    members: Vec<SubspaceRepr>,
}

impl TryFrom<FamilyRepr> for SubspaceFamily {
    type Error = Error;
    fn try_from(r: FamilyRepr) -> Result<Self> {
        let members = r
            .members
            .into_iter()
            .map(|c| AffineSubspace::from_repr(r.q, c))
            .collect::<Result<Vec<_>>>()?;
        SubspaceFamily::new(r.q, r.n, members)
    }
}

impl SubspaceFamily {
    pub fn new(q: u32, n: usize, members: Vec<AffineSubspace>) -> Result<Self> {
        check_prime(q)?;
        let dim = members.first().map(|m| m.dim());
        for (i, m) in members.iter().enumerate() {
            if m.q != q || m.ambient() != n {
                return Err(Error::input(format!("member {i} does not live in F_{q}^{n}")));
            }
            if Some(m.dim()) != dim {
                return Err(Error::input(format!(
                    "member {i} has dimension {}, expected {dim:?}",
                    m.dim()
                )));
            }
            if members[..i].contains(m) {
                return Err(Error::input(format!("member {i} repeats an earlier member")));
            }
        }
        Ok(SubspaceFamily { q, n, members })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[AffineSubspace] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// All lines through the origin of `F_q^2`.
    pub fn lines_through_origin(q: u32) -> Result<Self> {
        let mut members = vec![AffineSubspace::new(q, vec![0, 0], vec![vec![0, 1]])?];
        for s in 0..q {
            members.push(AffineSubspace::new(q, vec![0, 0], vec![vec![1, s]])?);
        }
        SubspaceFamily::new(q, 2, members)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(q: u32, base: Point, dir: Point) -> AffineSubspace {
        AffineSubspace::new(q, base, vec![dir]).unwrap()
    }

    #[test]
    fn canonical_form_identifies_equal_sets() {
        let a = line(5, vec![1, 1], vec![1, 2]);
        let b = line(5, vec![2, 3], vec![3, 1]);
        assert_eq!(a, b);
        assert_eq!(a.points().unwrap().len(), 5);
    }

    #[test]
    fn intersections() {
        let q = 3;
        let a = line(q, vec![0, 0], vec![1, 0]);
        let b = line(q, vec![0, 1], vec![1, 0]);
        let c = line(q, vec![0, 0], vec![1, 1]);
        assert!(a.intersect(&b).is_none());
        let x = a.intersect(&c).unwrap();
        assert_eq!(x.dim(), 0);
        assert_eq!(x.base(), &[0, 0]);
        assert_eq!(a.intersect(&a).unwrap(), a);
    }

    #[test]
    fn model_drops_contained_components() {
        let q = 3;
        let l = line(q, vec![0, 0], vec![1, 0]);
        let p = AffineSubspace::point(q, vec![2, 0]).unwrap();
        let m = LinearVarietyModel::new(q, 2, vec![p, l.clone(), l]).unwrap();
        assert_eq!(m.degree(), 1);
        assert_eq!(m.dim(), Some(1));
    }

    #[test]
    fn product_and_projection() {
        let l = line(3, vec![0, 1], vec![1, 0]);
        let sq = l.power(2);
        assert_eq!(sq.dim(), 2);
        assert_eq!(sq.ambient(), 4);
        assert_eq!(sq.project(0..2), l);
        assert_eq!(sq.project(2..4), l);
    }

    #[test]
    fn json_round_trip() {
        let m = LinearVarietyModel::new(3, 2, vec![line(3, vec![0, 0], vec![1, 2])]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        let back: LinearVarietyModel = serde_json::from_str(&s).unwrap();
        assert_eq!(m, back);
        let bad = r#"{"q":4,"n":1,"components":[]}"#;
        assert!(serde_json::from_str::<LinearVarietyModel>(bad).is_err());
    }
}
