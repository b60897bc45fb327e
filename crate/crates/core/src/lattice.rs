//! Covariance forms, circumspheres, exact closest-vector enumeration and
//! the membership tests for the hypermetric cone and polytope.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactla::{column_hermite, int_to_rat, rat, IntVec, Ldlt, LinalgError, Mat, Rat, Solution};
use crate::hypfamilies::{eval_h, BInequality, DistVec};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("quadratic form is not positive definite")]
    NotPositiveDefinite,
    #[error("points have no common circumsphere")]
    NoCircumsphere,
    #[error("points do not determine a unique circumsphere")]
    Underdetermined,
    #[error("distance vector is not in the hypermetric cone (violated by {0})")]
    NotHypermetric(BInequality),
    #[error("distance vector is zero")]
    ZeroDistance,
    #[error("at least 2 points are required")]
    TooFewPoints,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormClass {
    PositiveDefinite,
    SemidefiniteSingular,
    Indefinite,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadForm {
    pub q: Mat,
}

impl QuadForm {
    pub fn new(q: Mat) -> Result<Self, LinalgError> {
        if !q.is_square() {
            return Err(LinalgError::NotSquare {
                rows: q.rows(),
                cols: q.cols(),
            });
        }
        if !q.is_symmetric() {
            return Err(LinalgError::NotSymmetric);
        }
        Ok(QuadForm { q })
    }

    pub fn dim(&self) -> usize {
        self.q.rows()
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        self.q.quad(x)
    }

    pub fn classify(&self) -> FormClass {
        match self.q.ldlt().expect("square symmetric") {
            Ldlt::PositiveDefinite { .. } => FormClass::PositiveDefinite,
            Ldlt::SemidefiniteSingular { .. } => FormClass::SemidefiniteSingular,
            Ldlt::Indefinite { .. } => FormClass::Indefinite,
        }
    }

    /// `d(i,j) = q(v_i − v_j)` with `v_0 = 0`, `v_{i} = e_{i}`.
    pub fn to_dist(&self) -> DistVec {
        let m = self.dim();
        let q = &self.q;
        DistVec::from_fn(m + 1, |i, j| {
            if i == 0 {
                q[(j - 1, j - 1)].clone()
            } else {
                let (a, b) = (i - 1, j - 1);
                &q[(a, a)] + &q[(b, b)] - rat(2) * &q[(a, b)]
            }
        })
    }
}

/// Gram form of the simplex `0, e_1, …, e_{n−1}` realising `d`.
pub fn covariance_form(d: &DistVec) -> Result<QuadForm, LatticeError> {
    let n = d.n;
    if n < 2 {
        return Err(LatticeError::TooFewPoints);
    }
    let m = n - 1;
    let mut q = Mat::zeros(m, m);
    for a in 0..m {
        q[(a, a)] = d.get(0, a + 1);
        for b in a + 1..m {
            let v = (d.get(0, a + 1) + d.get(0, b + 1) - d.get(a + 1, b + 1)) / rat(2);
            q[(a, b)] = v.clone();
            q[(b, a)] = v;
        }
    }
    Ok(QuadForm { q })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circumsphere {
    pub center: Vec<Rat>,
    pub radius_sq: Rat,
}

/// Sphere through `0, e_1, …, e_m` in the metric `q`: `q·c = diag(q)/2`.
pub fn circumsphere(q: &QuadForm) -> Result<Circumsphere, LatticeError> {
    if q.classify() != FormClass::PositiveDefinite {
        return Err(LatticeError::NotPositiveDefinite);
    }
    let m = q.dim();
    let rhs: Vec<Rat> = (0..m).map(|i| &q.q[(i, i)] / rat(2)).collect();
    let center = match q.q.solve(&rhs)? {
        Solution::Unique(c) => c,
        _ => unreachable!("positive definite forms are invertible"),
    };
    let radius_sq = q.eval(&center);
    Ok(Circumsphere { center, radius_sq })
}

/// All `x ∈ Z^m` with `q[x − c] < bound` (`strict`) or `≤ bound`, sorted.
///
/// Fincke–Pohst on `q = L·D·Lᵀ`; integer ranges per layer come from exact
/// rational comparisons.
pub fn cvp_enum(
    q: &QuadForm,
    c: &[Rat],
    bound: &Rat,
    strict: bool,
) -> Result<Vec<IntVec>, LatticeError> {
    let (l, d) = match q.q.ldlt()? {
        Ldlt::PositiveDefinite { l, d } => (l, d),
        _ => return Err(LatticeError::NotPositiveDefinite),
    };
    let m = q.dim();
    let mut out = Vec::new();
    if m == 0 {
        if bound.is_positive() || (!strict && bound.is_zero()) {
            out.push(vec![]);
        }
        return Ok(out);
    }
    if bound.is_negative() {
        return Ok(out);
    }
    let mut x = vec![BigInt::zero(); m];
    enum_layer(&l, &d, c, bound, strict, m - 1, &Rat::zero(), &mut x, &mut out);
    out.sort();
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn enum_layer(
    l: &Mat,
    d: &[Rat],
    c: &[Rat],
    bound: &Rat,
    strict: bool,
    i: usize,
    partial: &Rat,
    x: &mut IntVec,
    out: &mut Vec<IntVec>,
) {
    let m = c.len();
    let mut centre = c[i].clone();
    for j in i + 1..m {
        if !l[(j, i)].is_zero() {
            centre -= &l[(j, i)] * (int_to_rat(&x[j]) - &c[j]);
        }
    }
    let room = bound - partial;
    let fits = |t: &BigInt| -> Option<Rat> {
        let y = int_to_rat(t) - &centre;
        let v = partial + &d[i] * &y * &y;
        (v <= *bound).then_some(v)
    };
    if room.is_negative() {
        return;
    }
    let start = centre.floor().to_integer();
    let visit = |t: BigInt, v: Rat, x: &mut IntVec, out: &mut Vec<IntVec>| {
        x[i] = t;
        if i == 0 {
            if !strict || v < *bound {
                out.push(x.clone());
            }
        } else {
            enum_layer(l, d, c, bound, strict, i - 1, &v, x, out);
        }
    };
    let mut t = start.clone();
    while let Some(v) = fits(&t) {
        visit(t.clone(), v, x, out);
        t -= 1;
    }
    let mut t = start + 1;
    while let Some(v) = fits(&t) {
        visit(t.clone(), v, x, out);
        t += 1;
    }
    x[i] = BigInt::zero();
}

/// `true` iff no lattice point lies strictly inside the common
/// circumsphere of `points` in the metric `q`.
pub fn is_empty_sphere(q: &QuadForm, points: &[IntVec]) -> Result<bool, LatticeError> {
    let sphere = common_sphere(q, points)?;
    Ok(cvp_enum(q, &sphere.center, &sphere.radius_sq, true)?.is_empty())
}

/// Sphere through `points`: solves `2pᵀq·c + ρ = q[p]` for `(c, ρ)`.
pub fn common_sphere(q: &QuadForm, points: &[IntVec]) -> Result<Circumsphere, LatticeError> {
    let m = q.dim();
    if points.is_empty() {
        return Err(LatticeError::Underdetermined);
    }
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for p in points {
        let pr: Vec<Rat> = p.iter().map(int_to_rat).collect();
        let qp = q.q.mul_vec(&pr)?;
        let mut row: Vec<Rat> = qp.iter().map(|x| x * rat(2)).collect();
        row.push(Rat::one());
        rows.push(row);
        rhs.push(q.eval(&pr));
    }
    let a = Mat::from_rows(&rows)?;
    let sol = match a.solve(&rhs)? {
        Solution::Unique(s) => s,
        Solution::NoSolution { .. } => return Err(LatticeError::NoCircumsphere),
        Solution::NonUnique { .. } => return Err(LatticeError::Underdetermined),
    };
    let center = sol[..m].to_vec();
    let p0: Vec<Rat> = points[0]
        .iter()
        .zip(&center)
        .map(|(p, c)| int_to_rat(p) - c)
        .collect();
    Ok(Circumsphere {
        radius_sq: q.eval(&p0),
        center,
    })
}

fn denominators_lcm(a: &Mat) -> BigInt {
    let mut l = BigInt::one();
    for i in 0..a.rows() {
        for x in a.row(i) {
            l = l.lcm(x.denom());
        }
    }
    l
}

fn integer_direction(w: &[Rat]) -> IntVec {
    let mut l = BigInt::one();
    for x in w {
        l = l.lcm(x.denom());
    }
    w.iter()
        .map(|x| (x * Rat::from_integer(l.clone())).to_integer())
        .collect()
}

fn quad_value(a: &Mat, beta: &[Rat], gamma: &Rat, x: &[BigInt]) -> Rat {
    let xr: Vec<Rat> = x.iter().map(int_to_rat).collect();
    let lin: Rat = beta.iter().zip(&xr).map(|(b, x)| b * x).sum();
    a.quad(&xr) + rat(2) * lin + gamma
}

/// An `x ∈ Z^k` with `F(x) = xᵀAx + 2βᵀx + γ < 0`, or `None` if `F ≥ 0`
/// on `Z^k`. When `F` is bounded below the returned point minimises `F`,
/// ties broken by the least `x`.
pub fn find_negative(a: &Mat, beta: &[Rat], gamma: &Rat) -> Result<Option<(IntVec, Rat)>, LatticeError> {
    let k = a.rows();
    match a.ldlt()? {
        Ldlt::Indefinite { witness, .. } => {
            let z = integer_direction(&witness);
            let mut t = BigInt::one();
            loop {
                let x: IntVec = z.iter().map(|v| v * &t).collect();
                let f = quad_value(a, beta, gamma, &x);
                if f.is_negative() {
                    return Ok(Some((x, f)));
                }
                t += 1;
            }
        }
        Ldlt::PositiveDefinite { .. } => {
            let identity: Vec<IntVec> = (0..k)
                .map(|i| (0..k).map(|j| BigInt::from((i == j) as i64)).collect())
                .collect();
            minimise_on_image(a, beta, gamma, &identity, k)
        }
        Ldlt::SemidefiniteSingular { .. } => {
            let scale = Rat::from_integer(denominators_lcm(a));
            let int_rows: Vec<IntVec> = (0..k)
                .map(|i| a.row(i).iter().map(|x| (x * &scale).to_integer()).collect())
                .collect();
            let (u, r) = column_hermite(&int_rows, k);
            // β' = Uᵀβ on the kernel columns
            for j in r..k {
                let bj: Rat = (0..k).map(|i| int_to_rat(&u[i][j]) * &beta[i]).sum();
                if bj.is_zero() {
                    continue;
                }
                let g = if gamma.is_positive() { gamma.clone() } else { Rat::zero() };
                let mut t: BigInt = (g / (rat(2) * bj.abs())).floor().to_integer() + 1;
                if bj.is_positive() {
                    t = -t;
                }
                let x: IntVec = (0..k).map(|i| &u[i][j] * &t).collect();
                let f = quad_value(a, beta, gamma, &x);
                debug_assert!(f.is_negative());
                return Ok(Some((x, f)));
            }
            minimise_on_image(a, beta, gamma, &u, r)
        }
    }
}

/// Minimises `F(U_1 y)` over `y ∈ Z^r`, `U_1` the first `r` columns of `u`,
/// where the restricted form is positive definite.
fn minimise_on_image(
    a: &Mat,
    beta: &[Rat],
    gamma: &Rat,
    u: &[IntVec],
    r: usize,
) -> Result<Option<(IntVec, Rat)>, LatticeError> {
    let k = a.rows();
    if r == 0 {
        return Ok(gamma
            .is_negative()
            .then(|| (vec![BigInt::zero(); k], gamma.clone())));
    }
    let u1 = Mat::new(
        k,
        r,
        (0..k)
            .flat_map(|i| (0..r).map(move |j| int_to_rat(&u[i][j])))
            .collect(),
    )?;
    let a1 = u1.transpose().mul(a)?.mul(&u1)?;
    let b1 = u1.transpose().mul_vec(beta)?;
    let neg_b1: Vec<Rat> = b1.iter().map(|x| -x).collect();
    let c = match a1.solve(&neg_b1)? {
        Solution::Unique(c) => c,
        _ => unreachable!("restricted form is positive definite"),
    };
    let bound = a1.quad(&c) - gamma;
    let form = QuadForm { q: a1 };
    let pts = cvp_enum(&form, &c, &bound, true)?;
    let mut best: Option<(IntVec, Rat)> = None;
    for y in pts {
        let x: IntVec = (0..k)
            .map(|i| (0..r).map(|j| &u[i][j] * &y[j]).sum())
            .collect();
        let f = quad_value(a, beta, gamma, &x);
        let better = match &best {
            None => true,
            Some((bx, bf)) => f < *bf || (f == *bf && x < *bx),
        };
        if better {
            best = Some((x, f));
        }
    }
    Ok(best)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Member,
    Violated,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipResult {
    pub verdict: Verdict,
    pub witness: Option<BInequality>,
    /// `H(b,d) − rhs(b)` for the witness; zero for members.
    pub violation: Rat,
}

impl MembershipResult {
    fn member() -> Self {
        MembershipResult {
            verdict: Verdict::Member,
            witness: None,
            violation: Rat::zero(),
        }
    }

    fn violated(b: BInequality, d: &DistVec) -> Self {
        let h = eval_h(&b, d).expect("matching sizes");
        let violation = h - rat(b.rhs);
        assert!(violation.is_positive(), "witness must be violated");
        MembershipResult {
            verdict: Verdict::Violated,
            witness: Some(b),
            violation,
        }
    }

    pub fn is_member(&self) -> bool {
        self.verdict == Verdict::Member
    }
}

/// Membership in the hypermetric cone.
///
/// With `Σ b_i = 1` and `v = (b_1, …, b_{n−1})`, `H(b,d) = Σ_k q_kk v_k − q[v]`,
/// so `d` is violated iff `q[v] − diag(q)·v < 0` for some `v ∈ Z^{n−1}`.
/// For positive definite `q` this is a lattice point strictly inside the
/// circumsphere.
pub fn member_hyp(d: &DistVec) -> Result<MembershipResult, LatticeError> {
    let n = d.n;
    if n < 2 {
        return Ok(MembershipResult::member());
    }
    let q = covariance_form(d)?;
    let m = n - 1;
    let beta: Vec<Rat> = (0..m).map(|k| -&q.q[(k, k)] / rat(2)).collect();
    match find_negative(&q.q, &beta, &Rat::zero())? {
        None => Ok(MembershipResult::member()),
        Some((v, _)) => {
            let sum: BigInt = v.iter().sum();
            let mut b = vec![small(&(BigInt::one() - sum))];
            b.extend(v.iter().map(small));
            Ok(MembershipResult::violated(BInequality::new(b).unwrap(), d))
        }
    }
}

fn small(x: &BigInt) -> i64 {
    i64::try_from(x).expect("witness coordinate exceeds i64")
}

/// Membership in the hypermetric polytope.
///
/// With `G = J − 2D`, `bᵀGb = 4s(s+1) + 1 − 4H(b,d)` for `Σb = 2s+1`, so
/// `d` is violated iff `bᵀGb < 1` for some odd-sum `b`. Odd-sum vectors
/// are `e_1 + Bx` with `B = [e_1−e_2, …, e_{n−1}−e_n, 2e_n]`.
pub fn member_hypp(d: &DistVec) -> Result<MembershipResult, LatticeError> {
    let n = d.n;
    if n == 0 {
        return Ok(MembershipResult::member());
    }
    let g = Mat::new(
        n,
        n,
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| Rat::one() - rat(2) * d.get(i, j))
            .collect(),
    )?;
    let bmat = coset_basis(n);
    let a = bmat.transpose().mul(&g)?.mul(&bmat)?;
    let e1: Vec<Rat> = (0..n).map(|i| rat((i == 0) as i64)).collect();
    let beta = bmat.transpose().mul_vec(&g.mul_vec(&e1)?)?;
    let gamma = &g[(0, 0)] - Rat::one();
    match find_negative(&a, &beta, &gamma)? {
        None => Ok(MembershipResult::member()),
        Some((x, _)) => {
            let xr: Vec<Rat> = x.iter().map(int_to_rat).collect();
            let bx = bmat.mul_vec(&xr)?;
            let b: Vec<i64> = bx
                .iter()
                .zip(&e1)
                .map(|(v, e)| small(&(v + e).to_integer()))
                .collect();
            Ok(MembershipResult::violated(BInequality::new(b).unwrap(), d))
        }
    }
}

fn coset_basis(n: usize) -> Mat {
    let mut b = Mat::zeros(n, n);
    for k in 0..n - 1 {
        b[(k, k)] = rat(1);
        b[(k + 1, k)] = rat(-1);
    }
    b[(n - 1, n - 1)] = rat(2);
    b
}

/// Largest `λ` with `λ·d` in the hypermetric polytope.
pub fn max_scale(d: &DistVec) -> Result<Rat, LatticeError> {
    if d.is_zero() {
        return Err(LatticeError::ZeroDistance);
    }
    let hyp = member_hyp(d)?;
    if let Some(b) = hyp.witness {
        return Err(LatticeError::NotHypermetric(b));
    }
    let n = d.n;
    let mut lambda: Option<Rat> = None;
    let mut tighten = |cand: Rat| {
        if lambda.as_ref().is_none_or(|l| cand < *l) {
            lambda = Some(cand);
        }
    };
    for i in 0..n {
        for j in i + 1..n {
            let dij = d.get(i, j);
            if dij.is_positive() {
                tighten(Rat::one() / dij);
            }
            for k in j + 1..n {
                let p = d.get(i, j) + d.get(i, k) + d.get(j, k);
                if p.is_positive() {
                    tighten(rat(2) / p);
                }
            }
        }
    }
    let mut lambda = lambda.expect("nonzero semimetric has a positive entry");
    loop {
        let res = member_hypp(&d.scale(&lambda))?;
        match res.witness {
            None => return Ok(lambda),
            Some(b) => {
                let h = eval_h(&b, d).expect("matching sizes");
                lambda = rat(b.rhs) / h;
            }
        }
    }
}
