use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::model::{AffineSubspace, LinearVarietyModel, Point, POINT_BUDGET};
use crate::degree::nogaalon_degree_bound;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "kebab-case")]
pub enum CoverStep {
    /// `M = 1`: the cover is `Z`.
    Base,
    /// Recursed on the slice `{P} × X^(M-1)`.
    Slice { point: Point },
    /// Cut with `X × {x0}` and added the non-dominant part.
    Fibre { x0: Point, dominant_components: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NogaAlonCover {
    /// Components of the constructed set that meet `Σ`.
    pub cover: LinearVarietyModel,
    /// The set exactly as the recursion builds it.
    pub untrimmed: LinearVarietyModel,
    /// Set when the cover contains every rational point of `X`; each
    /// component is still a proper subspace, so the cover is proper as a
    /// variety.
    pub covers_all_rational_points: bool,
    pub steps: Vec<CoverStep>,
    pub degree_bound: BigInt,
}

impl NogaAlonCover {
    pub fn depth(&self) -> usize {
        self.steps.len()
    }
}

/// All `M`-tuples of `sigma`, concatenated into points of `F_q^(nM)`.
fn tuples(sigma: &[Point], m: usize) -> Result<Vec<Point>> {
    let total = (sigma.len() as u128).saturating_pow(m as u32);
    if total > POINT_BUDGET as u128 {
        return Err(Error::resource(format!("|Σ|^M = {total} exceeds the point budget")));
    }
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|t| {
                sigma.iter().map(move |s| {
                    let mut u = t.clone();
                    u.extend_from_slice(s);
                    u
                })
            })
            .collect();
    }
    Ok(out)
}

/// A proper closed subset `X'` of `X` containing `sigma`, for a proper
/// closed `Z ⊂ X^M` with `sigma^M ⊆ Z`. Follows the induction on `M`:
/// components of `Z` are split by whether their first projection is all of
/// `X`; a point of `sigma` outside `W = {P : {P} × X^(M-1) ⊆ Z'}` lets the
/// recursion run on the slice through it, and otherwise one fibre
/// `X × {x0}` not inside `Z'` cuts out the cover.
pub fn nogaalon_cover(x: &AffineSubspace, m: usize, z: &LinearVarietyModel, sigma: &[Point]) -> Result<NogaAlonCover> {
    if m == 0 {
        return Err(Error::input("M must be >= 1"));
    }
    let (q, n) = (x.q(), x.ambient());
    if z.q() != q || z.n() != n * m {
        return Err(Error::input(format!(
            "Z lives in F_{}^{}, expected F_{q}^{}",
            z.q(),
            z.n(),
            n * m
        )));
    }
    let xm = x.power(m);
    for (i, c) in z.components().iter().enumerate() {
        if !xm.contains(c) {
            return Err(Error::input(format!("component {i} of Z is not inside X^M")));
        }
    }
    let sigma: Vec<Point> = sigma.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    for s in &sigma {
        if !x.contains_point(s) {
            return Err(Error::input(format!("Σ point {s:?} is not on X")));
        }
    }
    if z.points()?.len() >= xm.size()? {
        return Err(Error::input("Z is all of X^M, not a proper closed subset"));
    }
    for t in tuples(&sigma, m)? {
        if !z.contains_point(&t) {
            return Err(Error::input(format!("Σ^M is not inside Z: {t:?}")));
        }
    }
    let deg_z = BigInt::from(z.degree().max(1));
    let degree_bound = nogaalon_degree_bound(m as u64, x.dim() as u64, &BigInt::from(1), &deg_z)?;
    let (untrimmed, steps) = cover_rec(x, m, z, &sigma)?;
    // Over a finite field a union of proper subspaces can still contain
    // every rational point of X; components missing Σ are dropped.
    let cover = trim(&untrimmed, &sigma)?;
    if let Some(c) = cover.components().iter().find(|c| c.contains(x)) {
        return Err(Error::certificate(format!(
            "cover component {:?} is all of X",
            c.repr()
        )));
    }
    let covers_all_rational_points = !proper_after_trim(x, &untrimmed, &sigma)?;
    if let Some(s) = sigma.iter().find(|s| !cover.contains_point(s)) {
        return Err(Error::certificate(format!("cover misses Σ point {s:?}")));
    }
    if BigInt::from(cover.degree()) > degree_bound {
        return Err(Error::certificate(format!(
            "cover has {} components, bound {degree_bound}",
            cover.degree()
        )));
    }
    Ok(NogaAlonCover {
        cover,
        untrimmed,
        covers_all_rational_points,
        steps,
        degree_bound,
    })
}

type Built = (LinearVarietyModel, Vec<CoverStep>);

/// Components of `cover` meeting `sigma`.
fn trim(cover: &LinearVarietyModel, sigma: &[Point]) -> Result<LinearVarietyModel> {
    let meets = cover
        .components()
        .iter()
        .filter(|c| sigma.iter().any(|s| c.contains_point(s)))
        .cloned()
        .collect();
    LinearVarietyModel::new(cover.q(), cover.n(), meets)
}

/// Whether the trimmed cover leaves a rational point of `x` uncovered.
fn proper_after_trim(x: &AffineSubspace, cover: &LinearVarietyModel, sigma: &[Point]) -> Result<bool> {
    Ok(trim(cover, sigma)?.points()?.len() < x.size()?)
}

/// Runs the recursion, taking choices (the slice point `P`, the fibre `x0`)
/// in lexicographic order. Later choices are tried only when the first one
/// yields a cover containing every rational point of `X`; if none does, the
/// first result is returned.
fn cover_rec(x: &AffineSubspace, m: usize, z: &LinearVarietyModel, sigma: &[Point]) -> Result<Built> {
    let (q, n) = (x.q(), x.ambient());
    if m == 1 {
        return Ok((z.clone(), vec![CoverStep::Base]));
    }
    let (dominant, other): (Vec<_>, Vec<_>) = z
        .components()
        .iter()
        .cloned()
        .partition(|c| c.project(0..n).dim() == x.dim());
    let z1 = LinearVarietyModel::new(q, n * m, dominant)?;
    let z2 = LinearVarietyModel::new(q, n * m, other)?;

    let mut sigma2 = BTreeSet::new();
    for t in tuples(sigma, m)? {
        if z2.contains_point(&t) {
            sigma2.insert(t[..n].to_vec());
        }
    }
    let rest = x.power(m - 1);
    let rest_points = rest.points()?;
    let in_w = |p: &Point| -> bool {
        rest_points.iter().all(|r| {
            let mut t = p.clone();
            t.extend_from_slice(r);
            z1.contains_point(&t)
        })
    };
    let outside_w: Vec<&Point> = sigma.iter().filter(|s| !sigma2.contains(*s) && !in_w(s)).collect();

    let mut first: Option<Built> = None;
    if !outside_w.is_empty() {
        for p in outside_w {
            let slice = AffineSubspace::point(q, p.clone())?.product(&rest);
            let zs = z1.intersect_subspace(&slice)?.project(n..n * m)?;
            let (cover, mut steps) = cover_rec(x, m - 1, &zs, sigma)?;
            steps.insert(0, CoverStep::Slice { point: p.clone() });
            if proper_after_trim(x, &cover, sigma)? {
                return Ok((cover, steps));
            }
            first.get_or_insert((cover, steps));
        }
        return Ok(first.expect("at least one slice"));
    }

    let x_points = x.points()?;
    let non_dominant = z2.project(0..n)?;
    for x0 in &rest_points {
        let fibre_inside = x_points.iter().all(|p| {
            let mut t = p.clone();
            t.extend_from_slice(x0);
            z1.contains_point(&t)
        });
        if fibre_inside {
            continue;
        }
        let fibre = x.product(&AffineSubspace::point(q, x0.clone())?);
        let cut = z1.intersect_subspace(&fibre)?.project(0..n)?;
        let cover = cut.union(&non_dominant)?;
        let steps = vec![CoverStep::Fibre {
            x0: x0.clone(),
            dominant_components: z1.degree(),
        }];
        if proper_after_trim(x, &cover, sigma)? {
            return Ok((cover, steps));
        }
        first.get_or_insert((cover, steps));
    }
    first.ok_or_else(|| Error::input("Z' contains every fibre X × {x0}, so Z is not proper"))
}

/// Maximal `Σ ⊆ X` with `Σ^M ⊆ Z`, each with its affine hull.
#[derive(Clone, Debug, PartialEq)]
pub struct BruteForceCover {
    pub maximal: Vec<Vec<Point>>,
    pub hulls: Vec<AffineSubspace>,
}

/// Exhaustive oracle for small instances (`|X| <= 200`, `M <= 3`). Sets are
/// grown in increasing point order, each new point checked against every
/// tuple it completes, so each maximal set is reached exactly once.
pub fn brute_force_minimal_cover(
    x: &AffineSubspace,
    m: usize,
    z: &LinearVarietyModel,
    node_budget: usize,
) -> Result<BruteForceCover> {
    if m == 0 || m > 3 {
        return Err(Error::resource(format!("brute force supports 1 <= M <= 3, got {m}")));
    }
    let pts = x.points()?;
    if pts.len() > 200 {
        return Err(Error::resource(format!("|X| = {} exceeds 200", pts.len())));
    }
    let (q, n) = (x.q(), x.ambient());
    if z.n() != n * m || z.q() != q {
        return Err(Error::input("Z does not live in X^M's ambient space"));
    }
    let mut s = Search {
        pts: &pts,
        m,
        z,
        nodes: 0,
        budget: node_budget,
        found: Vec::new(),
    };
    s.grow(&mut Vec::new(), 0)?;
    let maximal: Vec<Vec<Point>> = s
        .found
        .into_iter()
        .map(|idx| idx.into_iter().map(|i| pts[i].clone()).collect())
        .collect();
    let hulls = maximal
        .iter()
        .filter(|s| !s.is_empty())
        .map(|s| AffineSubspace::hull(q, s))
        .collect::<Result<_>>()?;
    Ok(BruteForceCover { maximal, hulls })
}

struct Search<'a> {
    pts: &'a [Point],
    m: usize,
    z: &'a LinearVarietyModel,
    nodes: usize,
    budget: usize,
    found: Vec<Vec<usize>>,
}

impl Search<'_> {
    /// Whether `cur ∪ {c}` still has all `M`-tuples in `Z`, checking the
    /// tuples that use `c`.
    fn extends(&self, cur: &[usize], c: usize) -> bool {
        let mut with: Vec<usize> = cur.to_vec();
        with.push(c);
        let k = with.len();
        let total = k.pow(self.m as u32);
        (0..total).all(|mut code| {
            let mut t = Vec::with_capacity(self.m);
            for _ in 0..self.m {
                t.push(with[code % k]);
                code /= k;
            }
            if !t.contains(&c) {
                return true;
            }
            let p: Point = t.iter().flat_map(|&i| self.pts[i].iter().copied()).collect();
            self.z.contains_point(&p)
        })
    }

    fn grow(&mut self, cur: &mut Vec<usize>, from: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::resource(format!(
                "brute force exceeded {} search nodes",
                self.budget
            )));
        }
        for c in from..self.pts.len() {
            if self.extends(cur, c) {
                cur.push(c);
                self.grow(cur, c + 1)?;
                cur.pop();
            }
        }
        let maximal = (0..self.pts.len()).all(|c| cur.contains(&c) || !self.extends(cur, c));
        if maximal {
            self.found.push(cur.clone());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn affine_line(q: u32) -> AffineSubspace {
        AffineSubspace::full(q, 1).unwrap()
    }

    #[test]
    fn base_case_returns_z() {
        let x = affine_line(5);
        let z = LinearVarietyModel::new(5, 1, vec![AffineSubspace::point(5, vec![2]).unwrap()]).unwrap();
        let c = nogaalon_cover(&x, 1, &z, &[vec![2]]).unwrap();
        assert_eq!(c.cover, z);
        assert_eq!(c.steps, vec![CoverStep::Base]);
    }

    #[test]
    fn cross_through_a_point() {
        let q = 5;
        let x = affine_line(q);
        let a = 3;
        let horiz = AffineSubspace::new(q, vec![0, a], vec![vec![1, 0]]).unwrap();
        let vert = AffineSubspace::new(q, vec![a, 0], vec![vec![0, 1]]).unwrap();
        let z = LinearVarietyModel::new(q, 2, vec![horiz, vert]).unwrap();
        let c = nogaalon_cover(&x, 2, &z, &[vec![a]]).unwrap();
        assert_eq!(c.cover.points().unwrap().into_iter().collect::<Vec<_>>(), vec![vec![a]]);
        assert!(nogaalon_cover(&x, 2, &z, &[vec![a], vec![1]]).is_err());
    }

    #[test]
    fn diagonal_on_a_plane_line() {
        let q = 3;
        let x = AffineSubspace::new(q, vec![1, 0], vec![vec![1, 1]]).unwrap();
        let diag = AffineSubspace::new(q, vec![1, 0, 1, 0], vec![vec![1, 1, 1, 1]]).unwrap();
        let z = LinearVarietyModel::irreducible(diag);
        for s in x.points().unwrap() {
            let c = nogaalon_cover(&x, 2, &z, std::slice::from_ref(&s)).unwrap();
            assert_eq!(c.cover.degree(), 1);
            assert_eq!(c.cover.points().unwrap().into_iter().collect::<Vec<_>>(), vec![s]);
        }
        let bf = brute_force_minimal_cover(&x, 2, &z, 10_000).unwrap();
        assert_eq!(bf.maximal.len(), 3);
        assert!(bf.maximal.iter().all(|s| s.len() == 1));
    }

    #[test]
    fn full_power_is_rejected() {
        let x = affine_line(3);
        let z = LinearVarietyModel::irreducible(x.power(2));
        assert!(matches!(nogaalon_cover(&x, 2, &z, &[vec![0]]), Err(Error::Input(_))));
        let pts = x.power(2).points().unwrap();
        let all = LinearVarietyModel::new(
            3,
            2,
            pts.into_iter().map(|p| AffineSubspace::point(3, p).unwrap()).collect(),
        )
        .unwrap();
        assert!(matches!(nogaalon_cover(&x, 2, &all, &[vec![0]]), Err(Error::Input(_))));
    }
}
