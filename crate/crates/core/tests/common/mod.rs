#![allow(dead_code)]

use hycone::exactla::{ratio, Rat};
use hycone::hypfamilies::DistVec;
use rand::Rng;

/// Distance vector with integer numerators over a common denominator.
#[derive(Clone, Debug)]
pub struct SmallDist {
    pub n: usize,
    pub num: Vec<i64>,
    pub den: i64,
}

impl SmallDist {
    pub fn to_dist(&self) -> DistVec {
        DistVec::new(self.n, self.num.iter().map(|&x| ratio(x, self.den)).collect()).unwrap()
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        self.num[pair(self.n, i, j)]
    }
}

pub fn pair(n: usize, i: usize, j: usize) -> usize {
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

pub fn cut_num(n: usize, set: u64) -> Vec<i64> {
    let mut v = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            v.push(((set >> i & 1) != (set >> j & 1)) as i64);
        }
    }
    v
}

/// Random point near the boundary of the hypermetric cone and polytope:
/// a scaled nonnegative combination of cuts, sometimes perturbed, or a
/// uniform vector.
pub fn random_dist<R: Rng>(rng: &mut R, n: usize) -> SmallDist {
    let m = n * (n - 1) / 2;
    match rng.gen_range(0..3) {
        0 => {
            let den = rng.gen_range(1..=6);
            let num = (0..m).map(|_| rng.gen_range(0..=2 * den)).collect();
            SmallDist { n, num, den }
        }
        mode => {
            let mut num = vec![0i64; m];
            let mut total = 0;
            for _ in 0..rng.gen_range(1..=n + 2) {
                let set = rng.gen_range(1..1u64 << (n - 1)) << 1;
                let w = rng.gen_range(1..=3);
                total += w;
                for (x, c) in num.iter_mut().zip(cut_num(n, set)) {
                    *x += w * c;
                }
            }
            let den = total + rng.gen_range(0..=2);
            if mode == 2 {
                for _ in 0..rng.gen_range(1..=2) {
                    let k = rng.gen_range(0..m);
                    num[k] = (num[k] + rng.gen_range(-2..=2)).max(0);
                }
            }
            SmallDist { n, num, den }
        }
    }
}

/// Brute force over `|b_i| ≤ bound`: (some `Σb = 1` vector violates the
/// cone inequality, some odd-sum vector violates the polytope inequality).
pub fn brute_violations(d: &SmallDist, bound: i64) -> (bool, bool) {
    let n = d.n;
    let mut b = vec![-bound; n];
    let (mut cone, mut poly) = (false, false);
    loop {
        let sum: i64 = b.iter().sum();
        if sum.rem_euclid(2) == 1 {
            let mut h = 0i64;
            for i in 0..n {
                if b[i] == 0 {
                    continue;
                }
                for j in i + 1..n {
                    h += b[i] * b[j] * d.get(i, j);
                }
            }
            let s = (sum - 1) / 2;
            if h > s * (s + 1) * d.den {
                poly = true;
                if sum == 1 {
                    cone = true;
                }
            }
        }
        let mut k = 0;
        while k < n && b[k] == bound {
            b[k] = -bound;
            k += 1;
        }
        if k == n {
            return (cone, poly);
        }
        b[k] += 1;
    }
}

/// `H(b, d)` straight from the definition.
pub fn h_value(b: &[i64], d: &DistVec) -> Rat {
    let mut acc = Rat::from_integer(0.into());
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            acc += Rat::from_integer((b[i] * b[j]).into()) * d.get(i, j);
        }
    }
    acc
}

/// `|det|` by cofactor expansion.
pub fn det_abs(m: &[Vec<i64>]) -> i64 {
    fn det(m: &[Vec<i64>]) -> i64 {
        let k = m.len();
        if k == 0 {
            return 1;
        }
        (0..k)
            .map(|c| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, &x)| x).collect())
                    .collect();
                let sign = if c % 2 == 0 { 1 } else { -1 };
                sign * m[0][c] * det(&minor)
            })
            .sum()
    }
    det(m).abs()
}

/// Normalised volume of a lattice simplex given by `n + 1` points.
pub fn simplex_vol(points: &[Vec<i64>]) -> i64 {
    let rows: Vec<Vec<i64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(&points[0]).map(|(a, b)| a - b).collect())
        .collect();
    det_abs(&rows)
}

/// Largest left-hand side over all cuts of an edge inequality with integer
/// coefficients.
pub fn max_over_cuts(n: usize, coef: &[((usize, usize), i64)]) -> i64 {
    (0..1u64 << (n - 1))
        .map(|s| {
            let set = s << 1;
            coef.iter()
                .filter(|((u, v), _)| (set >> u & 1) != (set >> v & 1))
                .map(|(_, a)| a)
                .sum()
        })
        .max()
        .unwrap()
}

/// Random instance of the lifting construction: a hypermetric inequality on
/// `K_k`, a graph with terminals `0..k`, positive pairs joined by an edge,
/// the other pairs by internally disjoint paths through fresh vertices,
/// plus a few chords.
pub struct LiftInstance {
    pub b: Vec<i64>,
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub paths: Vec<((usize, usize), Vec<usize>)>,
}

pub fn random_lift<R: Rng>(rng: &mut R) -> LiftInstance {
    let k = rng.gen_range(3..=5);
    let b = loop {
        let b: Vec<i64> = (0..k).map(|_| rng.gen_range(-2..=2)).collect();
        if b.iter().sum::<i64>().rem_euclid(2) == 1 && b.iter().filter(|&&x| x != 0).count() >= 2 {
            break b;
        }
    };
    let mut n = k;
    let mut edges = Vec::new();
    let mut paths = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let c = b[i] * b[j];
            if c == 0 {
                continue;
            }
            let inner = if c > 0 { 0 } else { rng.gen_range(0..=2) };
            let mut path = vec![i];
            for _ in 0..inner {
                if n >= 20 {
                    break;
                }
                path.push(n);
                n += 1;
            }
            path.push(j);
            for w in path.windows(2) {
                edges.push((w[0].min(w[1]), w[0].max(w[1])));
            }
            paths.push(((i, j), path));
        }
    }
    for _ in 0..rng.gen_range(0..=3) {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        let e = (u.min(v), u.max(v));
        if u != v && !edges.contains(&e) {
            edges.push(e);
        }
    }
    LiftInstance { b, n, edges, paths }
}
