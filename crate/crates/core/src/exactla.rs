//! Exact rational and integer linear algebra.
//!
//! Every routine here works over arbitrary-precision rationals (or integers)
//! and never rounds. Elimination picks, within the active column, the row
//! whose entry has the largest absolute numerator (ties to the lowest row
//! index), so results are reproducible bit for bit.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Reduced fraction with a positive denominator.
pub type Rat = BigRational;

/// Integer vector with arbitrary-precision entries.
pub type IntVec = Vec<BigInt>;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("malformed rational {0:?}")]
pub struct ParseRatError(pub String);

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int_to_rat(n: &BigInt) -> Rat {
    Rat::from_integer(n.clone())
}

/// Parses `"p/q"` or `"p"`, with optional sign on `p`.
pub fn parse_rat(s: &str) -> Result<Rat, ParseRatError> {
    let err = || ParseRatError(s.to_string());
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((p, q)) => (p.trim(), Some(q.trim())),
        None => (t, None),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    match den {
        None => Ok(Rat::from_integer(num)),
        Some(q) => {
            let den: BigInt = q.parse().map_err(|_| err())?;
            if den.is_zero() || den.is_negative() {
                return Err(err());
            }
            Ok(Rat::new(num, den))
        }
    }
}

/// Formats as `"p"` when the denominator is one, `"p/q"` otherwise.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_int(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

/// Divides an integer vector by the gcd of its entries. The zero vector is
/// returned unchanged.
pub fn primitive(mut v: IntVec) -> IntVec {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x = &*x / &g;
        }
    }
    v
}

/// Scales a rational vector by a positive factor so that it becomes a
/// primitive integer vector (sign preserved).
pub fn primitive_from_rat(v: &[Rat]) -> IntVec {
    let l = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    primitive(v.iter().map(|x| (x * int_to_rat(&l)).to_integer()).collect())
}

pub fn to_rat_vec(v: &[BigInt]) -> Vec<Rat> {
    v.iter().map(int_to_rat).collect()
}

pub fn to_i64_vec(v: &[BigInt]) -> Option<Vec<i64>> {
    v.iter().map(|x| x.to_i64()).collect()
}

/// Rank of a list of integer rows, by fraction-free (Bareiss) elimination.
pub fn rank_int(rows: &[IntVec]) -> usize {
    let Some(cols) = rows.first().map(|r| r.len()) else {
        return 0;
    };
    let mut a: Vec<IntVec> = rows.to_vec();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        let Some(p) = pick_pivot(rank..a.len(), |i| &a[i][c]) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..a.len() {
            for j in c + 1..cols {
                let v = (&a[rank][c] * &a[i][j] - &a[i][c] * &a[rank][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[rank][c].clone();
        rank += 1;
        if rank == a.len() {
            break;
        }
    }
    rank
}

fn pick_pivot<'a, T: PivotKey + 'a>(
    range: std::ops::Range<usize>,
    entry: impl Fn(usize) -> &'a T,
) -> Option<usize> {
    let mut best: Option<(usize, BigInt)> = None;
    for i in range {
        let e = entry(i);
        if e.is_zero_entry() {
            continue;
        }
        let key = e.abs_numer();
        if best.as_ref().is_none_or(|(_, b)| key > *b) {
            best = Some((i, key));
        }
    }
    best.map(|(i, _)| i)
}

trait PivotKey {
    fn is_zero_entry(&self) -> bool;
    fn abs_numer(&self) -> BigInt;
}

impl PivotKey for BigInt {
    fn is_zero_entry(&self) -> bool {
        self.is_zero()
    }
    fn abs_numer(&self) -> BigInt {
        self.abs()
    }
}

impl PivotKey for Rat {
    fn is_zero_entry(&self) -> bool {
        self.is_zero()
    }
    fn abs_numer(&self) -> BigInt {
        self.numer().abs()
    }
}

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

/// Outcome of [`Mat::solve`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<Rat>),
    /// A particular solution plus a basis of the kernel.
    NonUnique {
        particular: Vec<Rat>,
        kernel: Vec<Vec<Rat>>,
    },
    /// `certificate` satisfies `certificateᵀ·m = 0` and `certificate·y ≠ 0`.
    NoSolution { certificate: Vec<Rat> },
}

/// Outcome of [`Mat::ldlt`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ldlt {
    PositiveDefinite {
        l: Mat,
        d: Vec<Rat>,
    },
    /// Positive semidefinite with a nontrivial kernel; `l`, `d` still
    /// reconstruct the matrix, with zero entries of `d` on kernel pivots.
    SemidefiniteSingular {
        l: Mat,
        d: Vec<Rat>,
        kernel: Vec<Vec<Rat>>,
    },
    /// `witnessᵀ·m·witness = value < 0`.
    Indefinite { witness: Vec<Rat>, value: Rat },
}

impl Mat {
    pub fn new(rows: usize, cols: usize, data: Vec<Rat>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Mat { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    /// Builds a matrix from rows; all rows must have the same length.
    pub fn from_rows(rows: &[Vec<Rat>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(LinalgError::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r.iter().cloned());
        }
        Ok(Mat {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self, LinalgError> {
        let rows: Vec<Vec<Rat>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| rat(x)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = a * &other[(k, j)];
                    out[(i, j)] += v;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[Rat]) -> Result<Vec<Rat>, LinalgError> {
        if x.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), x)).collect())
    }

    /// `xᵀ·m·x` for a square matrix.
    pub fn quad(&self, x: &[Rat]) -> Rat {
        debug_assert!(self.is_square() && x.len() == self.rows);
        let mut acc = Rat::zero();
        for i in 0..self.rows {
            if x[i].is_zero() {
                continue;
            }
            let mut row = Rat::zero();
            for j in 0..self.cols {
                if !x[j].is_zero() {
                    row += &self[(i, j)] * &x[j];
                }
            }
            acc += &x[i] * row;
        }
        acc
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = pick_pivot(r..a.rows, |i| &a[(i, c)]) else {
                continue;
            };
            a.swap_rows(r, p);
            let inv = a[(r, c)].recip();
            for j in c..a.cols {
                let v = &a[(r, j)] * &inv;
                a[(r, j)] = v;
            }
            for i in 0..a.rows {
                if i == r || a[(i, c)].is_zero() {
                    continue;
                }
                let f = a[(i, c)].clone();
                for j in c..a.cols {
                    let v = &f * &a[(r, j)];
                    a[(i, j)] -= v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : m·x = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<Rat>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut x = vec![Rat::zero(); self.cols];
                x[f] = Rat::one();
                for (i, &p) in pivots.iter().enumerate() {
                    x[p] = -r[(i, f)].clone();
                }
                x
            })
            .collect()
    }

    pub fn det(&self) -> Result<Rat, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Rat::one();
        for c in 0..n {
            let Some(p) = pick_pivot(c..n, |i| &a[(i, c)]) else {
                return Ok(Rat::zero());
            };
            if p != c {
                a.swap_rows(c, p);
                det = -det;
            }
            let piv = a[(c, c)].clone();
            for i in c + 1..n {
                if a[(i, c)].is_zero() {
                    continue;
                }
                let f = &a[(i, c)] / &piv;
                for j in c..n {
                    let v = &f * &a[(c, j)];
                    a[(i, j)] -= v;
                }
            }
            det *= piv;
        }
        Ok(det)
    }

    pub fn solve(&self, y: &[Rat]) -> Result<Solution, LinalgError> {
        if y.len() != self.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows,
                found: y.len(),
            });
        }
        let mut aug = Mat::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = y[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            let certificate = self
                .transpose()
                .kernel()
                .into_iter()
                .find(|z| !dot(z, y).is_zero())
                .expect("inconsistent system has a left-kernel certificate");
            return Ok(Solution::NoSolution { certificate });
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r[(i, self.cols)].clone();
        }
        if pivots.len() == self.cols {
            Ok(Solution::Unique(x))
        } else {
            Ok(Solution::NonUnique {
                particular: x,
                kernel: self.kernel(),
            })
        }
    }

    /// Symmetric `L·D·Lᵀ` sweep without row exchanges.
    ///
    /// A negative pivot stops the sweep and yields the corresponding
    /// direction as an indefiniteness witness. A zero pivot with a nonzero
    /// off-diagonal entry in its row is also indefinite; a zero pivot with a
    /// zero row contributes a kernel vector.
    pub fn ldlt(&self) -> Result<Ldlt, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if !self.is_symmetric() {
            return Err(LinalgError::NotSymmetric);
        }
        let n = self.rows;
        let mut s = self.clone();
        let mut l = Mat::identity(n);
        let mut d = vec![Rat::zero(); n];
        let mut zero_pivots = Vec::new();
        for k in 0..n {
            let p = s[(k, k)].clone();
            if p.is_negative() {
                let mut y = vec![Rat::zero(); n];
                y[k] = Rat::one();
                return Ok(Ldlt::Indefinite {
                    witness: unit_upper_transpose_solve(&l, &y),
                    value: p,
                });
            }
            if p.is_zero() {
                if let Some(j) = (k + 1..n).find(|&j| !s[(k, j)].is_zero()) {
                    let skj = s[(k, j)].clone();
                    let sjj = s[(j, j)].clone();
                    let t = -(sjj.abs() + Rat::one()) / (rat(2) * &skj);
                    let value = rat(2) * &t * &skj + &sjj;
                    let mut y = vec![Rat::zero(); n];
                    y[k] = t;
                    y[j] = Rat::one();
                    return Ok(Ldlt::Indefinite {
                        witness: unit_upper_transpose_solve(&l, &y),
                        value,
                    });
                }
                zero_pivots.push(k);
                continue;
            }
            d[k] = p.clone();
            for i in k + 1..n {
                l[(i, k)] = &s[(i, k)] / &p;
            }
            for i in k + 1..n {
                if s[(i, k)].is_zero() {
                    continue;
                }
                for j in k + 1..n {
                    let v = &l[(i, k)] * &s[(k, j)];
                    s[(i, j)] -= v;
                }
            }
        }
        if zero_pivots.is_empty() {
            return Ok(Ldlt::PositiveDefinite { l, d });
        }
        let kernel = zero_pivots
            .iter()
            .map(|&k| {
                let mut y = vec![Rat::zero(); n];
                y[k] = Rat::one();
                unit_upper_transpose_solve(&l, &y)
            })
            .collect();
        Ok(Ldlt::SemidefiniteSingular { l, d, kernel })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

/// Solves `Lᵀ·x = y` for unit lower triangular `L`.
fn unit_upper_transpose_solve(l: &Mat, y: &[Rat]) -> Vec<Rat> {
    let n = y.len();
    let mut x = y.to_vec();
    for i in (0..n).rev() {
        let mut v = x[i].clone();
        for j in i + 1..n {
            if !l[(j, i)].is_zero() {
                v -= &l[(j, i)] * &x[j];
            }
        }
        x[i] = v;
    }
    x
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(format_rat).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Unimodular `u` such that the trailing columns of `m·u` vanish and the
/// leading ones are linearly independent. Returns `(u, rank)`; columns
/// `rank..` of `u` are a basis of the integer kernel lattice of `m`.
///
/// `m` must be an integer matrix given as rows.
pub fn column_hermite(m: &[IntVec], cols: usize) -> (Vec<IntVec>, usize) {
    let mut a: Vec<IntVec> = m.to_vec();
    let mut u: Vec<IntVec> = (0..cols)
        .map(|i| (0..cols).map(|j| BigInt::from((i == j) as i64)).collect())
        .collect();
    let col_op = |mat: &mut Vec<IntVec>, dst: usize, src: usize, q: &BigInt| {
        for row in mat.iter_mut() {
            let v = &row[src] * q;
            row[dst] -= v;
        }
    };
    let col_swap = |mat: &mut Vec<IntVec>, x: usize, y: usize| {
        for row in mat.iter_mut() {
            row.swap(x, y);
        }
    };
    let mut pivot_col = 0;
    for i in 0..a.len() {
        if pivot_col == cols {
            break;
        }
        loop {
            let best = (pivot_col..cols)
                .filter(|&j| !a[i][j].is_zero())
                .min_by(|&x, &y| a[i][x].abs().cmp(&a[i][y].abs()).then(x.cmp(&y)));
            let Some(b) = best else { break };
            col_swap(&mut a, pivot_col, b);
            col_swap(&mut u, pivot_col, b);
            let mut done = true;
            for j in pivot_col + 1..cols {
                if a[i][j].is_zero() {
                    continue;
                }
                let q = a[i][j].div_floor(&a[i][pivot_col]);
                col_op(&mut a, j, pivot_col, &q);
                col_op(&mut u, j, pivot_col, &q);
                if !a[i][j].is_zero() {
                    done = false;
                }
            }
            if done {
                pivot_col += 1;
                break;
            }
        }
    }
    (u, pivot_col)
}
