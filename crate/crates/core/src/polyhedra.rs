//! Facet / extreme-ray conversion for pointed rational cones, and the
//! combinatorics (incidence, adjacency, skeleton, ridge graph) built on it.
//!
//! Generators and facet normals are stored as primitive integer vectors.
//! Signs are never normalised: a ray `r` and its negation are different rays,
//! and a facet normal `a` encodes `a·x ≥ 0`.
//!
//! Polytopes go through the same engine after homogenisation: the point `p`
//! becomes the ray `(1, p)` and a facet `(a₀, a)` reads `a₀ + a·x ≥ 0`.

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::exactla::{
    dot_int, int_to_rat, primitive, primitive_from_rat, rank_int, IntVec, Mat, Rat,
};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("cone is not pointed; lineality direction {lineality:?}")]
    NotPointed { lineality: IntVec },
    #[error("vector has length {found}, ambient dimension is {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("point violates facet {facet}")]
    NotInCone { facet: usize },
    #[error("the {0} representation is missing")]
    Missing(&'static str),
    #[error("empty input")]
    Empty,
}

/// Which side of a [`PolyCone`] to compute.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Rays,
    Facets,
}

/// A pointed polyhedral cone in `R^dim`.
///
/// `equations` holds normals `e` with `e·x = 0` on the whole cone; it is
/// non-empty only when the rays span a proper subspace.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PolyCone {
    pub dim: usize,
    pub rays: Option<Vec<IntVec>>,
    pub facets: Option<Vec<IntVec>>,
    pub equations: Vec<IntVec>,
}

impl PolyCone {
    pub fn from_rays(dim: usize, rays: Vec<IntVec>) -> Self {
        PolyCone {
            dim,
            rays: Some(rays),
            ..Default::default()
        }
    }

    pub fn from_facets(dim: usize, facets: Vec<IntVec>) -> Self {
        PolyCone {
            dim,
            facets: Some(facets),
            ..Default::default()
        }
    }

    pub fn rays(&self) -> Result<&[IntVec], PolyError> {
        self.rays.as_deref().ok_or(PolyError::Missing("ray"))
    }

    pub fn facets(&self) -> Result<&[IntVec], PolyError> {
        self.facets.as_deref().ok_or(PolyError::Missing("facet"))
    }

    /// Dimension of the linear span of the cone.
    pub fn cone_dim(&self) -> usize {
        self.dim - rank_int(&self.equations)
    }

    /// Ensures both representations are present.
    pub fn complete(mut self) -> Result<Self, PolyError> {
        if self.rays.is_none() {
            self = dd_convert(&self, Target::Rays)?;
        } else if self.facets.is_none() {
            self = dd_convert(&self, Target::Facets)?;
        }
        Ok(self)
    }
}

/// Computes the missing representation from the present one.
///
/// The output is complete and irredundant, made of primitive integer vectors
/// sorted lexicographically.
pub fn dd_convert(cone: &PolyCone, to: Target) -> Result<PolyCone, PolyError> {
    match to {
        Target::Facets => {
            let rays = cone.rays()?;
            let (facets, equations) = rays_to_facets(cone.dim, rays)?;
            Ok(PolyCone {
                dim: cone.dim,
                rays: Some(canonical_set(rays)),
                facets: Some(facets),
                equations,
            })
        }
        Target::Rays => {
            let facets = cone.facets()?;
            let rays = facets_to_rays(cone.dim, facets)?;
            Ok(PolyCone {
                dim: cone.dim,
                rays: Some(rays),
                facets: Some(canonical_set(facets)),
                equations: cone.equations.clone(),
            })
        }
    }
}

fn check_dims(dim: usize, vs: &[IntVec]) -> Result<(), PolyError> {
    match vs.iter().find(|v| v.len() != dim) {
        Some(v) => Err(PolyError::Dimension {
            expected: dim,
            found: v.len(),
        }),
        None => Ok(()),
    }
}

fn canonical_set(vs: &[IntVec]) -> Vec<IntVec> {
    let mut out: Vec<IntVec> = vs
        .iter()
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .map(|v| primitive(v.clone()))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Extreme rays of `{x : a·x ≥ 0 for every row a}`.
pub fn facets_to_rays(dim: usize, facets: &[IntVec]) -> Result<Vec<IntVec>, PolyError> {
    check_dims(dim, facets)?;
    let mut rays = double_description(dim, facets)?;
    rays.sort();
    Ok(rays)
}

/// Facets of the cone generated by `rays`, plus the equations of its span
/// when that span is a proper subspace.
pub fn rays_to_facets(
    dim: usize,
    rays: &[IntVec],
) -> Result<(Vec<IntVec>, Vec<IntVec>), PolyError> {
    check_dims(dim, rays)?;
    let rays = canonical_set(rays);
    let rows: Vec<Vec<Rat>> = rays
        .iter()
        .map(|r| r.iter().map(int_to_rat).collect())
        .collect();
    let (span_rows, equations) = if rows.is_empty() {
        let eqs = (0..dim)
            .map(|i| (0..dim).map(|j| BigInt::from((i == j) as i64)).collect())
            .collect();
        return Ok((Vec::new(), eqs));
    } else {
        let m = Mat::from_rows(&rows).expect("rows of equal length");
        let (_, pivots) = m.rref();
        let eqs: Vec<IntVec> = m.kernel().iter().map(|k| primitive_from_rat(k)).collect();
        (pivots, eqs)
    };
    let k = span_rows.len();
    let projected: Vec<IntVec> = rays
        .iter()
        .map(|r| span_rows.iter().map(|&j| r[j].clone()).collect())
        .collect();
    let dual = match double_description(k, &projected) {
        Ok(d) => d,
        Err(PolyError::NotPointed { .. }) => unreachable!("projected rays span their space"),
        Err(e) => return Err(e),
    };
    let mut facets: Vec<IntVec> = dual
        .iter()
        .map(|g| {
            let mut a = vec![BigInt::zero(); dim];
            for (&j, x) in span_rows.iter().zip(g) {
                a[j] = x.clone();
            }
            a
        })
        .collect();
    if rank_int(&dual) < k {
        // the dual is not full-dimensional, so the primal contains a line
        let mut rows: Vec<Vec<Rat>> = facets
            .iter()
            .chain(&equations)
            .map(|g| g.iter().map(int_to_rat).collect())
            .collect();
        if rows.is_empty() {
            rows.push(vec![Rat::zero(); dim]);
        }
        let ker = Mat::from_rows(&rows).unwrap().kernel();
        return Err(PolyError::NotPointed {
            lineality: primitive_from_rat(&ker[0]),
        });
    }
    facets.sort();
    Ok((facets, equations))
}

struct DdRay {
    v: IntVec,
    zeros: FixedBitSet,
}

/// Incremental double description: extreme rays of `{x : A·x ≥ 0}`.
/// Constraints are inserted in input order.
fn double_description(dim: usize, rows: &[IntVec]) -> Result<Vec<IntVec>, PolyError> {
    let m = rows.len();
    if dim == 0 {
        return Ok(Vec::new());
    }
    // initial basis: the first linearly independent rows
    let mut basis: Vec<usize> = Vec::new();
    let mut basis_rows: Vec<IntVec> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        if basis.len() == dim {
            break;
        }
        if r.iter().all(|x| x.is_zero()) {
            continue;
        }
        basis_rows.push(r.clone());
        if rank_int(&basis_rows) == basis_rows.len() {
            basis.push(i);
        } else {
            basis_rows.pop();
        }
    }
    if basis.len() < dim {
        let mut mat_rows: Vec<Vec<Rat>> = rows
            .iter()
            .map(|r| r.iter().map(int_to_rat).collect())
            .collect();
        if mat_rows.is_empty() {
            mat_rows.push(vec![Rat::zero(); dim]);
        }
        let ker = Mat::from_rows(&mat_rows).unwrap().kernel();
        return Err(PolyError::NotPointed {
            lineality: primitive_from_rat(&ker[0]),
        });
    }
    let bmat = Mat::from_rows(
        &basis_rows
            .iter()
            .map(|r| r.iter().map(int_to_rat).collect())
            .collect::<Vec<Vec<Rat>>>(),
    )
    .unwrap();
    let mut rays: Vec<DdRay> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut e = vec![Rat::zero(); dim];
        e[j] = Rat::from_integer(1.into());
        let x = match bmat.solve(&e).unwrap() {
            crate::exactla::Solution::Unique(x) => x,
            _ => unreachable!("basis rows are independent"),
        };
        let mut zeros = FixedBitSet::with_capacity(m);
        for (jj, &b) in basis.iter().enumerate() {
            if jj != j {
                zeros.insert(b);
            }
        }
        rays.push(DdRay {
            v: primitive_from_rat(&x),
            zeros,
        });
    }
    let mut in_basis = vec![false; m];
    for &b in &basis {
        in_basis[b] = true;
    }
    for (k, row) in rows.iter().enumerate() {
        if in_basis[k] {
            continue;
        }
        let vals: Vec<BigInt> = rays.iter().map(|r| dot_int(row, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        if neg.is_empty() {
            for (i, r) in rays.iter_mut().enumerate() {
                if vals[i].is_zero() {
                    r.zeros.insert(k);
                }
            }
            continue;
        }
        let fresh: Vec<DdRay> = pos
            .par_iter()
            .flat_map_iter(|&p| neg.iter().map(move |&n| (p, n)))
            .filter_map(|(p, n)| {
                let mut common = rays[p].zeros.clone();
                common.intersect_with(&rays[n].zeros);
                if common.count_ones(..) + 2 < dim {
                    return None;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(i, r)| i == p || i == n || !common.is_subset(&r.zeros));
                if !adjacent {
                    return None;
                }
                let v: IntVec = rays[n]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(xn, xp)| &vals[p] * xn - &vals[n] * xp)
                    .collect();
                common.insert(k);
                Some(DdRay {
                    v: primitive(v),
                    zeros: common,
                })
            })
            .collect();
        let mut next: Vec<DdRay> = Vec::with_capacity(rays.len() + fresh.len());
        for (i, mut r) in rays.into_iter().enumerate() {
            if vals[i].is_negative() {
                continue;
            }
            if vals[i].is_zero() {
                r.zeros.insert(k);
            }
            next.push(r);
        }
        next.extend(fresh);
        rays = next;
    }
    Ok(rays.into_iter().map(|r| r.v).collect())
}

/// `incidence[i][j]` is true iff ray `i` lies on facet `j`.
pub fn incidence(cone: &PolyCone) -> Result<Vec<Vec<bool>>, PolyError> {
    let rays = cone.rays()?;
    let facets = cone.facets()?;
    Ok(rays
        .iter()
        .map(|r| facets.iter().map(|f| dot_int(r, f).is_zero()).collect())
        .collect())
}

fn active_rows(cone: &PolyCone, v: &[BigInt]) -> Result<Vec<IntVec>, PolyError> {
    let facets = cone.facets()?;
    if v.len() != cone.dim {
        return Err(PolyError::Dimension {
            expected: cone.dim,
            found: v.len(),
        });
    }
    let mut active = cone.equations.clone();
    for (j, f) in facets.iter().enumerate() {
        let val = dot_int(f, v);
        if val.is_negative() {
            return Err(PolyError::NotInCone { facet: j });
        }
        if val.is_zero() {
            active.push(f.clone());
        }
    }
    Ok(active)
}

/// True iff the active facet normals of `v` have rank `dim − 1`.
pub fn is_extreme_ray(v: &[BigInt], cone: &PolyCone) -> Result<bool, PolyError> {
    if v.iter().all(|x| x.is_zero()) {
        return Ok(false);
    }
    let active = active_rows(cone, v)?;
    Ok(rank_int(&active) + 1 == cone.dim)
}

/// True iff the facets active on both rays have rank `dim − 2`.
pub fn are_adjacent(r1: &[BigInt], r2: &[BigInt], cone: &PolyCone) -> Result<bool, PolyError> {
    let a1 = active_rows(cone, r1)?;
    let a2 = active_rows(cone, r2)?;
    let common: Vec<IntVec> = a1.into_iter().filter(|f| a2.contains(f)).collect();
    Ok(rank_int(&common) + 2 == cone.dim)
}

/// Undirected graph on `0..n` used for skeletons and ridge graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjGraph {
    pub adj: Vec<Vec<usize>>,
}

impl AdjGraph {
    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn is_complete(&self) -> bool {
        let n = self.adj.len();
        self.adj.iter().all(|a| a.len() + 1 == n)
    }

    fn eccentricity(&self, s: usize) -> Option<usize> {
        let mut dist = vec![usize::MAX; self.adj.len()];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist.into_iter().try_fold(0, |m, d| (d != usize::MAX).then(|| m.max(d)))
    }

    /// Exact diameter by BFS from every vertex; `None` when disconnected.
    pub fn diameter(&self) -> Option<usize> {
        (0..self.adj.len()).try_fold(0, |m, s| self.eccentricity(s).map(|e| m.max(e)))
    }
}

fn incidence_graph(
    items: &[IntVec],
    others: &[IntVec],
    extra: &[IntVec],
    target_rank: usize,
) -> AdjGraph {
    let zero_sets: Vec<Vec<usize>> = items
        .iter()
        .map(|x| {
            (0..others.len())
                .filter(|&j| dot_int(x, &others[j]).is_zero())
                .collect()
        })
        .collect();
    let mut adj = vec![Vec::new(); items.len()];
    for i in 0..items.len() {
        for j in i + 1..items.len() {
            let mut rows: Vec<IntVec> = extra.to_vec();
            rows.extend(
                zero_sets[i]
                    .iter()
                    .filter(|k| zero_sets[j].binary_search(k).is_ok())
                    .map(|&k| others[k].clone()),
            );
            if rows.len() >= target_rank && rank_int(&rows) == target_rank {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    AdjGraph { adj }
}

/// Graph of extreme rays, adjacent when they span a 2-face.
pub fn skeleton(cone: &PolyCone) -> Result<AdjGraph, PolyError> {
    let rays = cone.rays()?;
    let facets = cone.facets()?;
    Ok(incidence_graph(rays, facets, &cone.equations, cone.dim - 2))
}

/// Graph of facets, adjacent when they meet in a ridge.
pub fn ridge_graph(cone: &PolyCone) -> Result<AdjGraph, PolyError> {
    let rays = cone.rays()?;
    let facets = cone.facets()?;
    let target = cone.cone_dim().saturating_sub(2);
    let zero_sets: Vec<Vec<usize>> = facets
        .iter()
        .map(|f| {
            (0..rays.len())
                .filter(|&j| dot_int(f, &rays[j]).is_zero())
                .collect()
        })
        .collect();
    let mut adj = vec![Vec::new(); facets.len()];
    for i in 0..facets.len() {
        for j in i + 1..facets.len() {
            let rows: Vec<IntVec> = zero_sets[i]
                .iter()
                .filter(|k| zero_sets[j].binary_search(k).is_ok())
                .map(|&k| rays[k].clone())
                .collect();
            if rows.len() >= target && rank_int(&rows) == target {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    Ok(AdjGraph { adj })
}

/// Convex hull of a finite point set, via the homogenised cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyTope {
    /// Ambient dimension of the points.
    pub dim: usize,
    /// Dimension of the affine hull.
    pub affine_dim: usize,
    pub cone: PolyCone,
    /// The input points that are vertices, sorted, deduplicated.
    pub vertices: Vec<Vec<Rat>>,
}

impl PolyTope {
    /// Homogenised facets `(a₀, a)` meaning `a₀ + a·x ≥ 0`.
    pub fn homogeneous_facets(&self) -> &[IntVec] {
        self.cone.facets.as_deref().unwrap_or(&[])
    }

    /// Facets in the form `a·x ≤ c`.
    pub fn inequalities(&self) -> Vec<(IntVec, BigInt)> {
        self.homogeneous_facets()
            .iter()
            .map(|f| (f[1..].iter().map(|x| -x).collect(), f[0].clone()))
            .collect()
    }

    /// Homogenised equations of the affine hull.
    pub fn equations(&self) -> &[IntVec] {
        &self.cone.equations
    }
}

pub fn homogenize(p: &[Rat]) -> IntVec {
    let mut v = Vec::with_capacity(p.len() + 1);
    v.push(Rat::from_integer(1.into()));
    v.extend(p.iter().cloned());
    primitive_from_rat(&v)
}

pub fn dehomogenize(v: &[BigInt]) -> Vec<Rat> {
    let x0 = int_to_rat(&v[0]);
    v[1..].iter().map(|x| int_to_rat(x) / &x0).collect()
}

/// Facets of the convex hull of `points`.
pub fn hull(points: &[Vec<Rat>]) -> Result<PolyTope, PolyError> {
    let Some(first) = points.first() else {
        return Err(PolyError::Empty);
    };
    let dim = first.len();
    let hom: Vec<IntVec> = points.iter().map(|p| homogenize(p)).collect();
    let cone = dd_convert(&PolyCone::from_rays(dim + 1, hom), Target::Facets)?;
    let affine_dim = cone.cone_dim() - 1;
    let mut vertices = Vec::new();
    for r in cone.rays()? {
        if is_extreme_ray(r, &cone)? {
            vertices.push(dehomogenize(r));
        }
    }
    vertices.sort();
    Ok(PolyTope {
        dim,
        affine_dim,
        cone,
        vertices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::rat;

    fn iv(v: &[i64]) -> IntVec {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn coordinate_axes() {
        let rays = vec![iv(&[1, 0, 0]), iv(&[0, 1, 0]), iv(&[0, 0, 1])];
        let (facets, eqs) = rays_to_facets(3, &rays).unwrap();
        assert!(eqs.is_empty());
        assert_eq!(facets, vec![iv(&[0, 0, 1]), iv(&[0, 1, 0]), iv(&[1, 0, 0])]);
        let back = facets_to_rays(3, &facets).unwrap();
        assert_eq!(back, canonical_set(&rays));
    }

    #[test]
    fn unit_square_hull() {
        let pts: Vec<Vec<Rat>> = [[0, 0], [1, 0], [0, 1], [1, 1]]
            .iter()
            .map(|p| p.iter().map(|&x| rat(x)).collect())
            .collect();
        let h = hull(&pts).unwrap();
        assert_eq!(h.homogeneous_facets().len(), 4);
        assert_eq!(h.affine_dim, 2);
        assert_eq!(h.vertices.len(), 4);
    }

    #[test]
    fn interior_point_is_not_a_vertex() {
        let pts: Vec<Vec<Rat>> = [[0, 0], [2, 0], [0, 2], [1, 1], [2, 2]]
            .iter()
            .map(|p| p.iter().map(|&x| rat(x)).collect())
            .collect();
        let h = hull(&pts).unwrap();
        assert_eq!(h.vertices.len(), 4);
        assert!(!h.vertices.contains(&vec![rat(1), rat(1)]));
    }

    #[test]
    fn degenerate_hull_reports_affine_span() {
        let pts: Vec<Vec<Rat>> = [[0, 0, 1], [1, 0, 1], [0, 1, 1]]
            .iter()
            .map(|p| p.iter().map(|&x| rat(x)).collect())
            .collect();
        let h = hull(&pts).unwrap();
        assert_eq!(h.affine_dim, 2);
        assert_eq!(h.equations().len(), 1);
        assert_eq!(h.homogeneous_facets().len(), 3);
    }

    #[test]
    fn lineality_is_reported() {
        // x1 >= 0 alone in R^2 has the x2-axis as lineality
        let err = facets_to_rays(2, &[iv(&[1, 0])]).unwrap_err();
        assert_eq!(err, PolyError::NotPointed { lineality: iv(&[0, 1]) });
        let err = rays_to_facets(2, &[iv(&[1, 0]), iv(&[-1, 0]), iv(&[0, 1])]).unwrap_err();
        match err {
            PolyError::NotPointed { lineality } => {
                assert!(lineality == iv(&[1, 0]) || lineality == iv(&[-1, 0]))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn simplicial_rays_all_adjacent() {
        let cone = PolyCone::from_rays(3, vec![iv(&[1, 0, 0]), iv(&[1, 1, 0]), iv(&[1, 1, 1])])
            .complete()
            .unwrap();
        let rays = cone.rays().unwrap();
        for i in 0..3 {
            for j in i + 1..3 {
                assert!(are_adjacent(&rays[i], &rays[j], &cone).unwrap());
            }
        }
        let sk = skeleton(&cone).unwrap();
        assert!(sk.is_complete());
        assert_eq!(sk.diameter(), Some(1));
    }

    #[test]
    fn point_outside_cone_is_an_error() {
        let cone = PolyCone::from_facets(2, vec![iv(&[1, 0]), iv(&[0, 1])])
            .complete()
            .unwrap();
        assert!(matches!(
            is_extreme_ray(&iv(&[-1, 1]), &cone),
            Err(PolyError::NotInCone { .. })
        ));
        assert!(is_extreme_ray(&iv(&[0, 3]), &cone).unwrap());
        assert!(!is_extreme_ray(&iv(&[1, 1]), &cone).unwrap());
    }

    #[test]
    fn square_pyramid_is_not_simplicial() {
        // cone over a square: 4 rays, 4 facets, opposite rays not adjacent
        let rays = vec![iv(&[1, 0, 0]), iv(&[1, 1, 0]), iv(&[1, 0, 1]), iv(&[1, 1, 1])];
        let cone = PolyCone::from_rays(3, rays).complete().unwrap();
        assert_eq!(cone.facets().unwrap().len(), 4);
        let sk = skeleton(&cone).unwrap();
        assert_eq!(sk.edge_count(), 4);
        assert_eq!(sk.diameter(), Some(2));
        assert_eq!(ridge_graph(&cone).unwrap().diameter(), Some(2));
    }
}
