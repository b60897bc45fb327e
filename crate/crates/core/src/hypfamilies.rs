//! Hypermetric inequalities, cut semimetrics and the metric families.
//!
//! Points are numbered `0..n` internally. Pair-indexed vectors use the
//! lexicographic order `(0,1), (0,2), …, (n−2,n−1)` everywhere.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactla::{rank_int, rat, IntVec, Rat};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("coordinate sum of b is even")]
    EvenSum,
    #[error("expected {expected} points, found {found}")]
    PointCount { expected: usize, found: usize },
    #[error("distance vector has {found} entries, expected {expected}")]
    Length { expected: usize, found: usize },
    #[error("at least {0} points are required")]
    TooFewPoints(usize),
}

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Position of the pair `{i, j}` (`i ≠ j`) in pair-indexed vectors.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    debug_assert!(j < n && i != j);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// All pairs in storage order.
pub fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

/// A symmetric function on pairs with zero diagonal, stored as its upper
/// triangle.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DistVec {
    pub n: usize,
    pub d: Vec<Rat>,
}

impl DistVec {
    pub fn new(n: usize, d: Vec<Rat>) -> Result<Self, FamilyError> {
        if d.len() != pair_count(n) {
            return Err(FamilyError::Length {
                expected: pair_count(n),
                found: d.len(),
            });
        }
        Ok(DistVec { n, d })
    }

    pub fn zero(n: usize) -> Self {
        DistVec {
            n,
            d: vec![Rat::zero(); pair_count(n)],
        }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Rat) -> Self {
        DistVec {
            n,
            d: pairs(n).map(|(i, j)| f(i, j)).collect(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Rat {
        if i == j {
            Rat::zero()
        } else {
            self.d[pair_index(self.n, i, j)].clone()
        }
    }

    pub fn scale(&self, lambda: &Rat) -> DistVec {
        DistVec {
            n: self.n,
            d: self.d.iter().map(|x| x * lambda).collect(),
        }
    }

    pub fn add(&self, other: &DistVec) -> DistVec {
        DistVec {
            n: self.n,
            d: self.d.iter().zip(&other.d).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.d.iter().all(|x| x.is_zero())
    }
}

/// A cut `δ_S`, with `S` stored as a bitmask normalised so that point 0 is
/// not in `S`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CutVec {
    pub n: usize,
    pub set: u64,
}

impl CutVec {
    pub fn new(n: usize, set: u64) -> Self {
        let full = full_mask(n);
        let set = set & full;
        let set = if set & 1 == 1 { full ^ set } else { set };
        CutVec { n, set }
    }

    pub fn contains(&self, i: usize) -> bool {
        self.set >> i & 1 == 1
    }

    pub fn separates(&self, i: usize, j: usize) -> bool {
        self.contains(i) != self.contains(j)
    }

    pub fn is_zero(&self) -> bool {
        self.set == 0
    }

    pub fn members(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.contains(i)).collect()
    }

    pub fn to_dist(&self) -> DistVec {
        DistVec::from_fn(self.n, |i, j| rat(self.separates(i, j) as i64))
    }

    pub fn to_int(&self) -> IntVec {
        pairs(self.n)
            .map(|(i, j)| BigInt::from(self.separates(i, j) as i64))
            .collect()
    }

    /// `δ_{S Δ T}`.
    pub fn sym_diff(&self, other: u64) -> CutVec {
        CutVec::new(self.n, self.set ^ other)
    }
}

pub fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// The `2^{n−1}` cuts (or the `2^{n−1} − 1` nonzero ones), in mask order.
pub fn cuts(n: usize, include_zero: bool) -> Vec<CutVec> {
    assert!(n >= 1 && n <= 63);
    let start = if include_zero { 0 } else { 1 };
    (start..1u64 << (n - 1)).map(|m| CutVec { n, set: m << 1 }).collect()
}

/// `Σ b_i b_j d(i,j) ≤ s(s+1)` with `Σ b_i = 2s + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BInequality {
    pub b: Vec<i64>,
    pub s: i64,
    pub rhs: i64,
}

impl BInequality {
    pub fn new(b: Vec<i64>) -> Result<Self, FamilyError> {
        let sum: i64 = b.iter().sum();
        if sum.rem_euclid(2) == 0 {
            return Err(FamilyError::EvenSum);
        }
        let s = (sum - 1).div_euclid(2);
        Ok(BInequality { b, s, rhs: s * (s + 1) })
    }

    pub fn n(&self) -> usize {
        self.b.len()
    }

    pub fn sum(&self) -> i64 {
        2 * self.s + 1
    }

    /// Cone inequalities have right-hand side zero (`s ∈ {0, −1}`).
    pub fn is_homogeneous(&self) -> bool {
        self.rhs == 0
    }

    /// At most one nonzero coordinate: the left-hand side vanishes identically.
    pub fn is_trivial(&self) -> bool {
        self.b.iter().filter(|&&x| x != 0).count() <= 1
    }

    /// `Some(2k + 1)` for `{0, ±1}`-valued `b` with `2k + 1` nonzero entries.
    pub fn gonality(&self) -> Option<usize> {
        if self.is_trivial() || self.b.iter().any(|x| x.abs() > 1) {
            return None;
        }
        Some(self.b.iter().filter(|&&x| x != 0).count())
    }

    /// Pair coefficients `b_i b_j`.
    pub fn pair_coefficients(&self) -> Vec<i64> {
        let n = self.n();
        pairs(n).map(|(i, j)| self.b[i] * self.b[j]).collect()
    }

    /// Normal of the inequality written as `a·x ≥ 0` (cone case):
    /// `a_ij = −b_i b_j`.
    pub fn cone_normal(&self) -> IntVec {
        self.pair_coefficients()
            .into_iter()
            .map(|c| BigInt::from(-c))
            .collect()
    }

    /// Homogenised normal `(a₀, a)` of `a₀ + a·x ≥ 0`, i.e.
    /// `rhs − Σ b_i b_j x_ij ≥ 0`.
    pub fn homogeneous_normal(&self) -> IntVec {
        let mut v = vec![BigInt::from(self.rhs)];
        v.extend(self.cone_normal());
        v
    }

    /// Unordered pair of `b` and `−b`: both describe the same inequality.
    pub fn signed_class(&self) -> Vec<i64> {
        let neg: Vec<i64> = self.b.iter().map(|x| -x).collect();
        if neg < self.b {
            neg
        } else {
            self.b.clone()
        }
    }
}

impl fmt::Display for BInequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b: Vec<String> = self.b.iter().map(|x| x.to_string()).collect();
        write!(f, "({}) <= {}", b.join(","), self.rhs)
    }
}

/// `H(b, d) = Σ_{i<j} b_i b_j d(i,j)`.
pub fn eval_h(b: &BInequality, d: &DistVec) -> Result<Rat, FamilyError> {
    if b.n() != d.n {
        return Err(FamilyError::PointCount {
            expected: d.n,
            found: b.n(),
        });
    }
    let mut acc = Rat::zero();
    for ((i, j), x) in pairs(d.n).zip(&d.d) {
        let c = b.b[i] * b.b[j];
        if c != 0 && !x.is_zero() {
            acc += rat(c) * x;
        }
    }
    Ok(acc)
}

/// `t(2s + 1 − t)` with `t = Σ_{i∈S} b_i`; equals `H(b, δ_S)`.
pub fn eval_on_cut(b: &BInequality, cut: &CutVec) -> Result<i64, FamilyError> {
    if b.n() != cut.n {
        return Err(FamilyError::PointCount {
            expected: cut.n,
            found: b.n(),
        });
    }
    let t: i64 = cut.members().iter().map(|&i| b.b[i]).sum();
    Ok(t * (b.sum() - t))
}

fn is_tight_cut(b: &BInequality, set: u64) -> bool {
    let t: i64 = (0..b.n()).filter(|&i| set >> i & 1 == 1).map(|i| b.b[i]).sum();
    t == b.s || t == b.s + 1
}

/// Cuts on which the inequality holds with equality.
pub fn tight_cuts(b: &BInequality, include_zero: bool) -> Vec<CutVec> {
    cuts(b.n(), include_zero)
        .into_iter()
        .filter(|c| is_tight_cut(b, c.set))
        .collect()
}

pub fn cut_incidence_count(b: &BInequality, include_zero: bool) -> usize {
    tight_cuts(b, include_zero).len()
}

/// Rank of the tight cut semimetrics in `R^{C(n,2)}`.
pub fn cut_rank(b: &BInequality) -> usize {
    let rows: Vec<IntVec> = tight_cuts(b, false).iter().map(|c| c.to_int()).collect();
    rank_int(&rows)
}

/// `U_S(d)`: `1 − d(i,j)` on pairs separated by `S`.
pub fn switch_dist(d: &DistVec, set: u64) -> DistVec {
    let cut = CutVec::new(d.n, set);
    DistVec {
        n: d.n,
        d: pairs(d.n)
            .zip(&d.d)
            .map(|((i, j), x)| {
                if cut.separates(i, j) {
                    Rat::one() - x
                } else {
                    x.clone()
                }
            })
            .collect(),
    }
}

/// Negates `b` on `S` and recomputes the right-hand side.
pub fn switch_ineq(b: &BInequality, set: u64) -> BInequality {
    let nb = b
        .b
        .iter()
        .enumerate()
        .map(|(i, &x)| if set >> i & 1 == 1 { -x } else { x })
        .collect();
    BInequality::new(nb).expect("switching preserves the parity of the sum")
}

/// Which inequalities `gen_b` produces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    /// `Σ b_i = 1`.
    Cone,
    /// `Σ b_i` odd.
    Polytope,
}

/// One `Sym(n)`-representative (sorted ascending) per inequality with
/// `|b_i| ≤ max_abs`.
///
/// For [`Target::Polytope`] `b` and `−b` are the same inequality; only the
/// representative whose sorted form is lexicographically smaller is kept.
/// Trivial inequalities are included; filter with
/// [`BInequality::is_trivial`].
pub fn gen_b(n: usize, max_abs: i64, target: Target) -> Vec<BInequality> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    gen_sorted(n, -max_abs, max_abs, &mut cur, &mut |b| {
        let sum: i64 = b.iter().sum();
        let keep = match target {
            Target::Cone => sum == 1,
            Target::Polytope => {
                if sum.rem_euclid(2) == 0 {
                    false
                } else {
                    let mut neg: Vec<i64> = b.iter().map(|x| -x).collect();
                    neg.sort();
                    b <= &neg[..]
                }
            }
        };
        if keep {
            out.push(BInequality::new(b.to_vec()).unwrap());
        }
    });
    out
}

fn gen_sorted(
    n: usize,
    lo: i64,
    hi: i64,
    cur: &mut Vec<i64>,
    emit: &mut impl FnMut(&[i64]),
) {
    if cur.len() == n {
        emit(cur);
        return;
    }
    let start = cur.last().copied().unwrap_or(lo);
    for v in start..=hi {
        cur.push(v);
        gen_sorted(n, lo, hi, cur, emit);
        cur.pop();
    }
}

/// Triangle inequalities `d(i,j) − d(i,k) − d(j,k) ≤ 0`, for every triple
/// and each choice of the long side.
pub fn met_family(n: usize) -> Vec<BInequality> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for neg in [k, j, i] {
                    let mut b = vec![0; n];
                    b[i] = 1;
                    b[j] = 1;
                    b[k] = 1;
                    b[neg] = -1;
                    out.push(BInequality::new(b).unwrap());
                }
            }
        }
    }
    out
}

/// Triangle inequalities plus perimeter inequalities `d_ij + d_ik + d_jk ≤ 2`.
pub fn metp_family(n: usize) -> Vec<BInequality> {
    let mut out = met_family(n);
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let mut b = vec![0; n];
                b[i] = 1;
                b[j] = 1;
                b[k] = 1;
                out.push(BInequality::new(b).unwrap());
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::ratio;

    fn bi(b: &[i64]) -> BInequality {
        BInequality::new(b.to_vec()).unwrap()
    }

    #[test]
    fn pair_indexing_is_lexicographic() {
        let v: Vec<_> = pairs(4).collect();
        assert_eq!(v, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        for (k, (i, j)) in pairs(6).enumerate() {
            assert_eq!(pair_index(6, i, j), k);
            assert_eq!(pair_index(6, j, i), k);
        }
    }

    #[test]
    fn binequality_rhs() {
        assert_eq!(bi(&[1, 1, -1]).rhs, 0);
        assert_eq!(bi(&[1, 1, 1]).rhs, 2);
        assert_eq!(bi(&[-1, -1, -1]).rhs, 2);
        assert_eq!(bi(&[-1, 0, 0]).rhs, 0);
        assert_eq!(bi(&[1, 1, 1, 1, 1]).rhs, 6);
        assert_eq!(BInequality::new(vec![1, 1, -1, 0, 0, 0, 0, 1]), Err(FamilyError::EvenSum));
    }

    #[test]
    fn eval_h_examples() {
        let ones = DistVec::from_fn(3, |_, _| rat(1));
        assert_eq!(eval_h(&bi(&[1, 1, -1]), &ones).unwrap(), rat(-1));
        // K_{2,3}: points 0,1,2 form the 3-part
        let k23 = DistVec::from_fn(5, |i, j| rat(if (i < 3) == (j < 3) { 2 } else { 1 }));
        assert_eq!(eval_h(&bi(&[1, 1, 1, -1, -1]), &k23).unwrap(), rat(2));
        let b = bi(&[0, 0, 0, 0, 0, -1, 1, 1]);
        let d = CutVec::new(8, 1 << 6).to_dist();
        assert_eq!(eval_h(&b, &d).unwrap(), rat(0));
        let d = CutVec::new(8, 1 << 5).to_dist();
        assert_eq!(eval_h(&b, &d).unwrap(), rat(-2));
    }

    #[test]
    fn eval_on_cut_examples() {
        let b = bi(&[1, 1, -1]);
        assert_eq!(eval_on_cut(&b, &CutVec::new(3, 0b001)).unwrap(), 0);
        assert_eq!(eval_on_cut(&b, &CutVec::new(3, 0b100)).unwrap(), -2);
        let b = bi(&[0, 0, 0, 0, 0, 1, 1, 1]);
        assert_eq!(b.s, 1);
        assert_eq!(eval_on_cut(&b, &CutVec::new(8, 0b0110_0000)).unwrap(), 2);
    }

    #[test]
    fn incidence_counts() {
        assert_eq!(cut_incidence_count(&bi(&[0, 0, 0, 0, 0, -1, 1, 1]), false), 95);
        assert_eq!(cut_incidence_count(&bi(&[0, 0, 0, 0, 0, 1, 1, 1]), true), 96);
        assert_eq!(cut_incidence_count(&bi(&[1, 1, -1]), false), 2);
    }

    #[test]
    fn cut_ranks() {
        assert_eq!(cut_rank(&bi(&[0, 0, 0, 0, 0, -1, 1, 1])), 27);
        let simplicial = bi(&[-1, -1, -1, -1, -1, 1, 1, 4]);
        assert_eq!(cut_rank(&simplicial), 27);
        assert_eq!(cut_incidence_count(&simplicial, false), 27);
    }

    #[test]
    fn families() {
        assert_eq!(cuts(4, false).len(), 7);
        assert_eq!(cuts(4, true).len(), 8);
        assert_eq!(met_family(8).len(), 168);
        assert_eq!(metp_family(3).len(), 4);
        assert_eq!(metp_family(5).len(), 40);
    }

    #[test]
    fn switching_examples() {
        let d1 = CutVec::new(3, 0b001).to_dist();
        assert!(switch_dist(&d1, 0b001).is_zero());
        assert_eq!(switch_dist(&DistVec::zero(3), 0b001), d1);
        assert_eq!(switch_ineq(&bi(&[1, 1, -1]), 0b100), bi(&[1, 1, 1]));
        assert_eq!(switch_ineq(&bi(&[1, 1, 1]), 0b100), bi(&[1, 1, -1]));
        assert_eq!(
            switch_ineq(&bi(&[0, 0, 0, 0, 0, -1, 1, 1]), 1 << 5),
            bi(&[0, 0, 0, 0, 0, 1, 1, 1])
        );
        let d = DistVec::from_fn(4, |i, j| ratio((i * 3 + j) as i64, 7));
        assert_eq!(switch_dist(&switch_dist(&d, 0b0110), 0b0110), d);
    }

    #[test]
    fn gen_b_small() {
        let reps = gen_b(3, 1, Target::Cone);
        let nontrivial: Vec<_> = reps.iter().filter(|b| !b.is_trivial()).collect();
        assert_eq!(nontrivial.len(), 1);
        assert_eq!(nontrivial[0].b, vec![-1, 1, 1]);
        let reps5: Vec<_> = gen_b(5, 1, Target::Cone)
            .into_iter()
            .filter(|b| !b.is_trivial())
            .collect();
        assert_eq!(reps5.len(), 2);
        assert_eq!(reps5.iter().filter_map(|b| b.gonality()).collect::<Vec<_>>(), vec![5, 3]);
    }

    #[test]
    fn gen_b_polytope_identifies_sign() {
        let reps: Vec<_> = gen_b(3, 1, Target::Polytope)
            .into_iter()
            .filter(|b| !b.is_trivial())
            .collect();
        // (−1,1,1) [triangle] and (−1,−1,−1) [perimeter, same as (1,1,1)]
        assert_eq!(reps.len(), 2);
        assert!(reps.iter().any(|b| b.b == vec![-1, -1, -1] && b.rhs == 2));
    }
}
