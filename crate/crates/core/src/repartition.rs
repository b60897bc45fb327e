//! Lattice configurations of `n + 2` points in `Z^n`: the affine relation,
//! the two triangulations and the candidate search for the last point.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::exactla::{int_to_rat, primitive_from_rat, rat, IntVec, Mat, Rat, Solution};
use crate::hypfamilies::BInequality;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum RepartitionError {
    #[error("expected {expected} points in Z^{dim}, found {found}")]
    PointCount {
        dim: usize,
        expected: usize,
        found: usize,
    },
    #[error("point {index} has dimension {found}, expected {dim}")]
    Dimension { dim: usize, index: usize, found: usize },
    #[error("points do not affinely span the space")]
    NotSpanning,
    #[error("fixed simplex is degenerate; candidate region is unbounded")]
    Unbounded,
    #[error("simplex omitting point {0} has zero volume")]
    Degenerate(usize),
}

fn check_points(points: &[IntVec], count: usize) -> Result<usize, RepartitionError> {
    let dim = points.first().map_or(0, |p| p.len());
    if points.len() != dim + count {
        return Err(RepartitionError::PointCount {
            dim,
            expected: dim + count,
            found: points.len(),
        });
    }
    for (index, p) in points.iter().enumerate() {
        if p.len() != dim {
            return Err(RepartitionError::Dimension {
                dim,
                index,
                found: p.len(),
            });
        }
    }
    Ok(dim)
}

fn signed_det(points: &[&IntVec]) -> BigInt {
    let n = points.len() - 1;
    let rows: Vec<Vec<Rat>> = points[1..]
        .iter()
        .map(|p| (0..n).map(|k| int_to_rat(&(&p[k] - &points[0][k]))).collect())
        .collect();
    if n == 0 {
        return BigInt::one();
    }
    Mat::from_rows(&rows).unwrap().det().unwrap().to_integer()
}

/// Normalised volume (`n!` times the Euclidean volume) of `n + 1` points.
pub fn simplex_volume(points: &[IntVec]) -> Result<BigInt, RepartitionError> {
    check_points(points, 1)?;
    let refs: Vec<&IntVec> = points.iter().collect();
    Ok(signed_det(&refs).abs())
}

/// Primitive `α` with `Σ α_i w_i = 0`, `Σ α_i = 0`; first nonzero entry
/// positive.
pub fn affine_relation(points: &[IntVec]) -> Result<IntVec, RepartitionError> {
    let n = check_points(points, 2)?;
    let rows: Vec<Vec<Rat>> = (0..=n)
        .map(|k| {
            points
                .iter()
                .map(|p| if k == 0 { Rat::one() } else { int_to_rat(&p[k - 1]) })
                .collect()
        })
        .collect();
    let kernel = Mat::from_rows(&rows).unwrap().kernel();
    if kernel.len() != 1 {
        return Err(RepartitionError::NotSpanning);
    }
    let mut a = primitive_from_rat(&kernel[0]);
    if a.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        a.iter_mut().for_each(|x| *x = -&*x);
    }
    Ok(a)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepartitionConfig {
    pub n: usize,
    pub points: Vec<IntVec>,
    pub alpha: IntVec,
    pub s_plus: Vec<usize>,
    pub s_minus: Vec<usize>,
}

impl RepartitionConfig {
    pub fn new(points: Vec<IntVec>) -> Result<Self, RepartitionError> {
        let alpha = affine_relation(&points)?;
        let n = points[0].len();
        let s_plus = (0..n + 2).filter(|&i| alpha[i].is_positive()).collect();
        let s_minus = (0..n + 2).filter(|&i| alpha[i].is_negative()).collect();
        Ok(RepartitionConfig {
            n,
            points,
            alpha,
            s_plus,
            s_minus,
        })
    }

    /// Some point lies in the affine hull of a facet of the others.
    pub fn is_degenerate(&self) -> bool {
        self.alpha.iter().any(|a| a.is_zero())
    }

    pub fn simplex_omitting(&self, i: usize) -> Vec<usize> {
        (0..self.n + 2).filter(|&j| j != i).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simplex {
    pub vertices: Vec<usize>,
    pub volume: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulations {
    pub plus: Vec<Simplex>,
    pub minus: Vec<Simplex>,
}

impl Triangulations {
    pub fn flip(&self) -> Triangulations {
        Triangulations {
            plus: self.minus.clone(),
            minus: self.plus.clone(),
        }
    }

    pub fn volumes(&self) -> (BigInt, BigInt) {
        (
            self.plus.iter().map(|s| &s.volume).sum(),
            self.minus.iter().map(|s| &s.volume).sum(),
        )
    }
}

/// `T₊` omits each point with `α_i > 0`, `T₋` each with `α_i < 0`.
pub fn two_triangulations(config: &RepartitionConfig) -> Result<Triangulations, RepartitionError> {
    let side = |idx: &[usize]| -> Result<Vec<Simplex>, RepartitionError> {
        idx.iter()
            .map(|&i| {
                let vertices = config.simplex_omitting(i);
                let pts: Vec<IntVec> = vertices.iter().map(|&j| config.points[j].clone()).collect();
                let volume = simplex_volume(&pts)?;
                if volume.is_zero() {
                    return Err(RepartitionError::Degenerate(i));
                }
                Ok(Simplex { vertices, volume })
            })
            .collect()
    };
    Ok(Triangulations {
        plus: side(&config.s_plus)?,
        minus: side(&config.s_minus)?,
    })
}

/// Affine forms `form_i(v) = ⟨w_i, v⟩ + κ_i`: the signed volume of the
/// fixed simplex with point `i` replaced by `v`. Thus `form_i(p_i)` is the
/// signed volume of the fixed simplex and `form_i / det` are the
/// barycentric coordinates of `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateBox {
    pub fixed: Vec<IntVec>,
    pub linear: Vec<IntVec>,
    pub constant: Vec<BigInt>,
    pub det: BigInt,
}

impl CandidateBox {
    pub fn dim(&self) -> usize {
        self.fixed.len() - 1
    }

    pub fn eval(&self, i: usize, v: &[BigInt]) -> BigInt {
        &self.constant[i] + self.linear[i].iter().zip(v).map(|(a, b)| a * b).sum::<BigInt>()
    }

    pub fn eval_all(&self, v: &[BigInt]) -> Vec<BigInt> {
        (0..self.fixed.len()).map(|i| self.eval(i, v)).collect()
    }

    pub fn barycentric(&self, v: &[BigInt]) -> Vec<Rat> {
        let d = int_to_rat(&self.det);
        self.eval_all(v).iter().map(|f| int_to_rat(f) / &d).collect()
    }
}

pub fn cofactor_forms(fixed: &[IntVec]) -> Result<CandidateBox, RepartitionError> {
    let n = check_points(fixed, 1)?;
    let refs: Vec<&IntVec> = fixed.iter().collect();
    let det = signed_det(&refs);
    let mut linear = Vec::new();
    let mut constant = Vec::new();
    let zero = vec![BigInt::zero(); n];
    for i in 0..=n {
        let at = |v: &IntVec| {
            let mut r = refs.clone();
            r[i] = v;
            signed_det(&r)
        };
        let k = at(&zero);
        let w: IntVec = (0..n)
            .map(|j| {
                let mut e = zero.clone();
                e[j] = BigInt::one();
                at(&e) - &k
            })
            .collect();
        linear.push(w);
        constant.push(k);
    }
    Ok(CandidateBox {
        fixed: fixed.to_vec(),
        linear,
        constant,
        det,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Candidate {
    pub point: IntVec,
    /// Some form vanishes: `v` lies on a facet hyperplane of the fixed
    /// simplex.
    pub degenerate: bool,
}

/// All `v ∈ Z^n`, other than the fixed points, with `|form_i(v)| ≤ max_vol`
/// for every `i`, provided the fixed simplex itself has volume `max_vol`.
/// Lexicographic order.
pub fn enum_candidates(bx: &CandidateBox, max_vol: u64) -> Result<Vec<Candidate>, RepartitionError> {
    if bx.det.is_zero() {
        return Err(RepartitionError::Unbounded);
    }
    let m = BigInt::from(max_vol);
    if bx.det.abs() != m {
        return Ok(Vec::new());
    }
    let n = bx.dim();
    // v = Σ λ_i p_i with |λ_i| ≤ max_vol/|det| = 1
    let lo: Vec<BigInt> = (0..n)
        .map(|k| -bx.fixed.iter().map(|p| p[k].abs()).sum::<BigInt>())
        .collect();
    let hi: Vec<BigInt> = lo.iter().map(|x| -x).collect();
    if n == 0 {
        return Ok(Vec::new());
    }
    let first: Vec<BigInt> = range(&lo[0], &hi[0]);
    let mut out: Vec<Candidate> = first
        .into_par_iter()
        .flat_map_iter(|x0| {
            let mut v = vec![BigInt::zero(); n];
            v[0] = x0;
            let mut found = Vec::new();
            search(bx, &m, &lo, &hi, 1, &mut v, &mut found);
            found
        })
        .collect();
    out.retain(|c| !bx.fixed.contains(&c.point));
    out.sort();
    Ok(out)
}

fn range(lo: &BigInt, hi: &BigInt) -> Vec<BigInt> {
    let mut v = Vec::new();
    let mut t = lo.clone();
    while &t <= hi {
        v.push(t.clone());
        t += 1;
    }
    v
}

/// Interval propagation: prune when some form cannot reach `[−m, m]` for
/// any completion of the assigned prefix.
fn feasible(bx: &CandidateBox, m: &BigInt, lo: &[BigInt], hi: &[BigInt], k: usize, v: &[BigInt]) -> bool {
    for i in 0..bx.fixed.len() {
        let mut fmin = bx.constant[i].clone();
        let mut fmax = bx.constant[i].clone();
        for (j, w) in bx.linear[i].iter().enumerate() {
            if j < k {
                let t = w * &v[j];
                fmin += &t;
                fmax += t;
            } else if w.is_positive() {
                fmin += w * &lo[j];
                fmax += w * &hi[j];
            } else {
                fmin += w * &hi[j];
                fmax += w * &lo[j];
            }
        }
        if fmin > *m || fmax < -m {
            return false;
        }
    }
    true
}

fn search(
    bx: &CandidateBox,
    m: &BigInt,
    lo: &[BigInt],
    hi: &[BigInt],
    k: usize,
    v: &mut IntVec,
    out: &mut Vec<Candidate>,
) {
    if !feasible(bx, m, lo, hi, k, v) {
        return;
    }
    let n = v.len();
    if k == n {
        let forms = bx.eval_all(v);
        out.push(Candidate {
            point: v.clone(),
            degenerate: forms.iter().any(|f| f.is_zero()),
        });
        return;
    }
    for t in range(&lo[k], &hi[k]) {
        v[k] = t;
        search(bx, m, lo, hi, k + 1, v, out);
    }
    v[k] = BigInt::zero();
}

/// Simplices `{0, h_1, …, h_n}` for the columns of every upper triangular
/// Hermite normal form with determinant `vol`: one simplex per sublattice
/// of index `vol`, covering every lattice simplex of that volume up to
/// unimodular maps.
pub fn hnf_simplices(n: usize, vol: u64) -> Vec<Vec<IntVec>> {
    let mut out = Vec::new();
    let mut diag = vec![0u64; n];
    diagonals(n, vol, 0, &mut diag, &mut |d| {
        // entries above the diagonal in column j are reduced modulo d[i]
        let slots: Vec<(usize, usize)> = (0..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
        let mut h = vec![vec![0i64; n]; n];
        for i in 0..n {
            h[i][i] = d[i] as i64;
        }
        fill(&slots, 0, d, &mut h, &mut |h| {
            let mut pts = vec![vec![BigInt::zero(); n]];
            for j in 0..n {
                pts.push((0..n).map(|i| BigInt::from(h[i][j])).collect());
            }
            out.push(pts);
        });
    });
    out
}

fn diagonals(n: usize, rest: u64, k: usize, d: &mut Vec<u64>, emit: &mut impl FnMut(&[u64])) {
    if k == n {
        if rest == 1 {
            emit(d);
        }
        return;
    }
    for f in 1..=rest {
        if rest % f == 0 {
            d[k] = f;
            diagonals(n, rest / f, k + 1, d, emit);
        }
    }
}

fn fill(
    slots: &[(usize, usize)],
    k: usize,
    d: &[u64],
    h: &mut Vec<Vec<i64>>,
    emit: &mut impl FnMut(&Vec<Vec<i64>>),
) {
    if k == slots.len() {
        emit(h);
        return;
    }
    let (i, j) = slots[k];
    for t in 0..d[i] as i64 {
        h[i][j] = t;
        fill(slots, k + 1, d, h, emit);
    }
    h[i][j] = 0;
}

/// For a unimodular fixed simplex, the integral barycentric coordinates of
/// `v`, read as a hypermetric inequality on the `n + 1` fixed points.
pub fn barycentric_inequality(bx: &CandidateBox, v: &[BigInt]) -> Option<BInequality> {
    if bx.det.abs() != BigInt::one() {
        return None;
    }
    let b: Option<Vec<i64>> = bx
        .barycentric(v)
        .iter()
        .map(|x| i64::try_from(x.to_integer()).ok())
        .collect();
    BInequality::new(b?).ok()
}

/// Subsets `S` of the fixed points (bitmask, point 0 excluded) whose
/// indicator extends to an affine function `f` with `f(v) ∈ {0, 1}`.
pub fn tight_splits(bx: &CandidateBox, v: &[BigInt]) -> Vec<u64> {
    let n = bx.dim();
    let rows: Vec<Vec<Rat>> = bx
        .fixed
        .iter()
        .map(|p| {
            let mut r = vec![Rat::one()];
            r.extend(p.iter().map(int_to_rat));
            r
        })
        .collect();
    let a = Mat::from_rows(&rows).unwrap();
    let mut vr = vec![Rat::one()];
    vr.extend(v.iter().map(int_to_rat));
    let mut out = Vec::new();
    for set in 0..1u64 << n {
        let set = set << 1;
        let y: Vec<Rat> = (0..=n).map(|i| rat((set >> i & 1) as i64)).collect();
        let coef = match a.solve(&y).unwrap() {
            Solution::Unique(c) => c,
            _ => unreachable!("fixed simplex is nondegenerate"),
        };
        let f: Rat = coef.iter().zip(&vr).map(|(c, x)| c * x).sum();
        if f.is_zero() || f.is_one() {
            out.push(set);
        }
    }
    out
}
