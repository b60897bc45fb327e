//! Actions of `Sym(n)` and of the switching extension `ARes(n)` (order
//! `2^{n−1}·n!`) on pair-indexed objects and on b-inequalities.
//!
//! An element `(σ, S)` acts as `x ↦ U_S(σ·x)`. Switching sets are kept
//! modulo complement with point 0 outside `S`.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::hash::Hash;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::exactla::{IntVec, Rat};
use crate::hypfamilies::{full_mask, pair_count, pair_index, pairs, BInequality, CutVec, DistVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Group {
    Sym(usize),
    ARes(usize),
}

impl Group {
    pub fn n(&self) -> usize {
        match *self {
            Group::Sym(n) | Group::ARes(n) => n,
        }
    }

    pub fn has_switchings(&self) -> bool {
        matches!(self, Group::ARes(_))
    }

    pub fn order(&self) -> u128 {
        let f = factorial(self.n());
        match *self {
            Group::Sym(_) => f,
            Group::ARes(n) => f << (n.max(1) - 1),
        }
    }

    /// Adjacent transpositions, plus the single-point switchings `{i}`,
    /// `i ≥ 1`, for `ARes`.
    pub fn generators(&self) -> Vec<PairAction> {
        let n = self.n();
        let mut gens = Vec::new();
        for i in 0..n.saturating_sub(1) {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.swap(i, i + 1);
            gens.push(PairAction { perm, set: 0 });
        }
        if self.has_switchings() {
            for i in 1..n {
                gens.push(PairAction {
                    perm: (0..n).collect(),
                    set: 1 << i,
                });
            }
        }
        gens
    }

    fn switching_sets(&self) -> Vec<u64> {
        match *self {
            Group::Sym(_) => vec![0],
            Group::ARes(n) => (0..1u64 << (n.max(1) - 1)).map(|m| m << 1).collect(),
        }
    }

    /// Every group element, in a fixed order.
    pub fn elements(&self) -> Vec<PairAction> {
        let sets = self.switching_sets();
        permutations(self.n())
            .into_iter()
            .flat_map(|perm| {
                sets.iter()
                    .map(move |&set| PairAction {
                        perm: perm.clone(),
                        set,
                    })
                    .collect::<Vec<_>>()
            })
            .collect()
    }

    fn par_elements<R: Send>(
        &self,
        f: impl Fn(&PairAction) -> R + Sync,
        fold: impl Fn(R, R) -> R + Sync + Send,
        init: impl Fn() -> R + Sync + Send,
    ) -> R {
        let sets = self.switching_sets();
        permutations(self.n())
            .into_par_iter()
            .map(|perm| {
                let mut acc = init();
                let mut g = PairAction { perm, set: 0 };
                for &s in &sets {
                    g.set = s;
                    acc = fold(acc, f(&g));
                }
                acc
            })
            .reduce(&init, &fold)
    }
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..n).collect();
    let mut out = vec![p.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
        out.push(p.clone());
    }
}

/// Group element `x ↦ U_S(σ·x)`; `perm[i] = σ(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PairAction {
    pub perm: Vec<usize>,
    pub set: u64,
}

impl PairAction {
    pub fn identity(n: usize) -> Self {
        PairAction {
            perm: (0..n).collect(),
            set: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn new(perm: Vec<usize>, set: u64) -> Self {
        let n = perm.len();
        let set = CutVec::new(n, set).set;
        PairAction { perm, set }
    }

    pub fn permute_set(&self, set: u64) -> u64 {
        let mut out = 0;
        for (i, &p) in self.perm.iter().enumerate() {
            if set >> i & 1 == 1 {
                out |= 1 << p;
            }
        }
        out
    }

    /// `self ∘ other`: `U_S σ U_T τ = U_{S Δ σ(T)} στ`.
    pub fn compose(&self, other: &PairAction) -> PairAction {
        let perm = other.perm.iter().map(|&t| self.perm[t]).collect();
        PairAction::new(perm, self.set ^ self.permute_set(other.set))
    }

    pub fn inverse(&self) -> PairAction {
        let n = self.n();
        let mut inv = vec![0; n];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p] = i;
        }
        // (σ,S)^{-1} = (σ^{-1}, σ^{-1}(S))
        let g = PairAction { perm: inv, set: 0 };
        let set = g.permute_set(self.set);
        PairAction::new(g.perm, set)
    }

    fn separates(&self, i: usize, j: usize) -> bool {
        (self.set >> i & 1) != (self.set >> j & 1)
    }

    /// Image positions of the pairs, in storage order.
    fn pair_map(&self) -> Vec<usize> {
        let n = self.n();
        pairs(n)
            .map(|(i, j)| pair_index(n, self.perm[i], self.perm[j]))
            .collect()
    }
}

/// Objects acted on by `Sym(n)` and `ARes(n)`.
pub trait Actable: Clone + Eq + Hash + Ord + Send + Sync {
    fn point_count(&self) -> usize;
    fn act(&self, g: &PairAction) -> Self;
    /// Representative of the class of objects identified under switching
    /// modulo complement.
    fn switching_class(self) -> Self {
        self
    }
}

impl Actable for DistVec {
    fn point_count(&self) -> usize {
        self.n
    }

    fn act(&self, g: &PairAction) -> Self {
        let n = self.n;
        let mut d = vec![Rat::zero(); pair_count(n)];
        for (k, ((i, j), x)) in g.pair_map().into_iter().zip(pairs(n).zip(&self.d)) {
            let (pi, pj) = (g.perm[i], g.perm[j]);
            d[k] = if g.separates(pi, pj) {
                Rat::from_integer(1.into()) - x
            } else {
                x.clone()
            };
        }
        DistVec { n, d }
    }
}

impl Actable for CutVec {
    fn point_count(&self) -> usize {
        self.n
    }

    fn act(&self, g: &PairAction) -> Self {
        CutVec::new(self.n, g.permute_set(self.set) ^ g.set)
    }
}

impl Actable for BInequality {
    fn point_count(&self) -> usize {
        self.n()
    }

    fn act(&self, g: &PairAction) -> Self {
        let mut b = vec![0; self.n()];
        for (i, &x) in self.b.iter().enumerate() {
            let p = g.perm[i];
            b[p] = if g.set >> p & 1 == 1 { -x } else { x };
        }
        BInequality::new(b).unwrap()
    }

    fn switching_class(self) -> Self {
        let c = self.signed_class();
        if c == self.b {
            self
        } else {
            BInequality::new(c).unwrap()
        }
    }
}

/// Homogenised inequality `a₀ + a·x ≥ 0` on pair-indexed `x`, stored as
/// `(a₀, a)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HomFacet(pub IntVec);

impl HomFacet {
    pub fn from_linear(a: IntVec) -> Self {
        let mut v = vec![BigInt::zero()];
        v.extend(a);
        HomFacet(v)
    }
}

impl Actable for HomFacet {
    fn point_count(&self) -> usize {
        points_from_pairs(self.0.len() - 1)
    }

    fn act(&self, g: &PairAction) -> Self {
        let n = g.n();
        let mut v = vec![BigInt::zero(); self.0.len()];
        v[0] = self.0[0].clone();
        for (k, ((i, j), a)) in g.pair_map().into_iter().zip(pairs(n).zip(&self.0[1..])) {
            if g.separates(g.perm[i], g.perm[j]) {
                v[0] += a;
                v[k + 1] = -a;
            } else {
                v[k + 1] = a.clone();
            }
        }
        HomFacet(v)
    }
}

/// Pair-indexed integer vector under the linear permutation action only
/// (rays of the metric cone, for instance). Switchings are ignored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairVec(pub IntVec);

impl Actable for PairVec {
    fn point_count(&self) -> usize {
        points_from_pairs(self.0.len())
    }

    fn act(&self, g: &PairAction) -> Self {
        let mut v = vec![BigInt::zero(); self.0.len()];
        for (k, a) in g.pair_map().into_iter().zip(&self.0) {
            v[k] = a.clone();
        }
        PairVec(v)
    }
}

fn points_from_pairs(m: usize) -> usize {
    let mut n = 0;
    while pair_count(n) < m {
        n += 1;
    }
    assert_eq!(pair_count(n), m, "length is not a binomial coefficient");
    n
}

fn image<T: Actable>(x: &T, g: &PairAction, group: &Group) -> T {
    let y = x.act(g);
    if group.has_switchings() {
        y.switching_class()
    } else {
        y
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitSummary<T> {
    pub representative: T,
    pub size: u128,
    pub stabilizer: u128,
    pub members: Option<Vec<T>>,
}

/// `n!/∏ m_k!` over the multiplicities `m_k` of the entries.
pub fn orbit_size_sym(b: &[i64]) -> u128 {
    let mut counts: HashMap<i64, usize> = HashMap::new();
    for &x in b {
        *counts.entry(x).or_default() += 1;
    }
    counts
        .values()
        .fold(factorial(b.len()), |acc, &m| acc / factorial(m))
}

/// Orbit by breadth-first closure under the generators. The
/// representative is the least member, which is the canonical form.
pub fn orbit<T: Actable>(x: &T, group: &Group, keep_members: bool) -> OrbitSummary<T> {
    let members = closure(x, group);
    let representative = members.iter().min().unwrap().clone();
    let size = members.len() as u128;
    OrbitSummary {
        representative,
        size,
        stabilizer: group.order() / size,
        members: keep_members.then(|| {
            let mut m: Vec<T> = members.into_iter().collect();
            m.sort();
            m
        }),
    }
}

fn closure<T: Actable>(x: &T, group: &Group) -> HashSet<T> {
    let gens = group.generators();
    let start = if group.has_switchings() {
        x.clone().switching_class()
    } else {
        x.clone()
    };
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(y) = queue.pop_front() {
        for g in &gens {
            let z = image(&y, g, group);
            if seen.insert(z.clone()) {
                queue.push_back(z);
            }
        }
    }
    seen
}

/// Number of group elements fixing `x`, by running over the whole group.
pub fn stabilizer_order<T: Actable>(x: &T, group: &Group) -> u128 {
    let x0 = if group.has_switchings() {
        x.clone().switching_class()
    } else {
        x.clone()
    };
    group.par_elements(
        |g| (image(&x0, g, group) == x0) as u128,
        |a, b| a + b,
        || 0,
    )
}

/// Lexicographically least image over the whole group.
pub fn canonical<T: Actable>(x: &T, group: &Group) -> T {
    group.par_elements(
        |g| Some(image(x, g, group)),
        |a, b| match (a, b) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, None) => a,
            (None, b) => b,
        },
        || None,
    )
    .unwrap()
}

/// Closed-form canonical b-vector: sorted for `Sym`, and the sorted
/// negated absolute values for `ARes` (every signing is reachable, and a
/// global sign change is the identity).
pub fn canonical_b(b: &[i64], group: &Group) -> Vec<i64> {
    let mut v: Vec<i64> = match group {
        Group::Sym(_) => b.to_vec(),
        Group::ARes(_) => b.iter().map(|x| -x.abs()).collect(),
    };
    v.sort();
    v
}

/// Partition of a finite invariant set into orbits; orbits are listed by
/// increasing representative, members sorted.
pub fn orbits_of_set<T: Actable>(items: &[T], group: &Group) -> Vec<Vec<T>> {
    let gens = group.generators();
    let norm = |y: T| {
        if group.has_switchings() {
            y.switching_class()
        } else {
            y
        }
    };
    let index: HashMap<T, usize> = items
        .iter()
        .enumerate()
        .map(|(k, x)| (norm(x.clone()), k))
        .collect();
    let mut seen = vec![false; items.len()];
    let mut orbits = Vec::new();
    for k in 0..items.len() {
        if seen[k] {
            continue;
        }
        seen[k] = true;
        let mut orbit = vec![norm(items[k].clone())];
        let mut head = 0;
        while head < orbit.len() {
            let y = orbit[head].clone();
            head += 1;
            for g in &gens {
                let z = image(&y, g, group);
                let j = *index
                    .get(&z)
                    .expect("set is not invariant under the group");
                if !seen[j] {
                    seen[j] = true;
                    orbit.push(z);
                }
            }
        }
        orbit.sort();
        orbits.push(orbit);
    }
    orbits.sort();
    orbits
}

/// A switching class of b-inequalities, as a union of `Sym(n)`-orbits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AresClass {
    pub canonical: Vec<i64>,
    /// Sym-orbit representatives (sorted b) in the class.
    pub sym_reps: Vec<BInequality>,
    pub sym_orbit_sizes: Vec<u128>,
    pub total: u128,
    /// Indices into `sym_reps` of the right-hand-side-zero members.
    pub homogeneous: Vec<usize>,
}

/// Groups `Sym`-inequivalent inequalities into `ARes` classes. `b` and `−b`
/// count once.
pub fn merge_classes(reps: &[BInequality]) -> Vec<AresClass> {
    let mut classes: BTreeMap<Vec<i64>, Vec<BInequality>> = BTreeMap::new();
    for r in reps {
        let n = r.n();
        classes
            .entry(canonical_b(&r.b, &Group::ARes(n)))
            .or_default()
            .push(r.clone());
    }
    classes
        .into_iter()
        .map(|(canonical, mut sym_reps)| {
            sym_reps.sort();
            let sym_orbit_sizes: Vec<u128> =
                sym_reps.iter().map(|r| orbit_size_sym(&r.b)).collect();
            let homogeneous = sym_reps
                .iter()
                .enumerate()
                .filter(|(_, r)| r.is_homogeneous())
                .map(|(k, _)| k)
                .collect();
            AresClass {
                canonical,
                total: sym_orbit_sizes.iter().sum(),
                sym_orbit_sizes,
                sym_reps,
                homogeneous,
            }
        })
        .collect()
}

/// The `Sym`-orbit representatives making up the switching class of `b`,
/// with `b ≡ −b`. Each is given by its sorted form, choosing the smaller of
/// `sort(b)` and `sort(−b)`.
pub fn sym_reps_in_switching_class(b: &[i64]) -> Vec<BInequality> {
    let n = b.len();
    let support: Vec<usize> = (0..n).filter(|&i| b[i] != 0).collect();
    let mut out: HashSet<Vec<i64>> = HashSet::new();
    let k = support.len();
    for mask in 0..1u64 << k.saturating_sub(1) {
        let mut v = b.to_vec();
        for (t, &i) in support.iter().enumerate().skip(1) {
            if mask >> (t - 1) & 1 == 1 {
                v[i] = -v[i];
            }
        }
        let mut a = v.clone();
        a.sort();
        let mut c: Vec<i64> = v.iter().map(|x| -x).collect();
        c.sort();
        out.insert(a.min(c));
    }
    let mut reps: Vec<BInequality> = out
        .into_iter()
        .filter_map(|v| BInequality::new(v).ok())
        .collect();
    reps.sort();
    reps
}

/// Cut image under a switching set: `δ_T ↦ δ_{T Δ S}`.
pub fn switch_cut(cut: &CutVec, set: u64) -> CutVec {
    CutVec::new(cut.n, (cut.set ^ set) & full_mask(cut.n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{rat, ratio};
    use crate::hypfamilies::{cuts, switch_dist, switch_ineq};

    fn bi(b: &[i64]) -> BInequality {
        BInequality::new(b.to_vec()).unwrap()
    }

    #[test]
    fn group_orders() {
        assert_eq!(Group::Sym(4).order(), 24);
        assert_eq!(Group::ARes(8).order(), 5_160_960);
        assert_eq!(Group::ARes(4).elements().len(), 192);
        assert_eq!(permutations(5).len(), 120);
    }

    #[test]
    fn sym_orbit_sizes() {
        assert_eq!(orbit_size_sym(&[0, 0, 0, 0, 0, -1, 1, 1]), 168);
        assert_eq!(orbit_size_sym(&[0, 0, -1, -1, -1, 1, 1, 2]), 1680);
        assert_eq!(orbit_size_sym(&[1, 1, -1, 0, 0]), 30);
    }

    #[test]
    fn ares_orbits_of_table_rows() {
        let o = orbit(&bi(&[0, 0, 0, 0, 0, 1, 1, 1]), &Group::ARes(8), false);
        assert_eq!(o.size, 224);
        let o = orbit(&bi(&[0, 0, 0, 1, 1, 1, 1, 1]), &Group::ARes(8), false);
        assert_eq!(o.size, 896);
    }

    #[test]
    fn cut_orbit_and_canonical() {
        let o = orbit(&CutVec::new(4, 0b0010), &Group::Sym(4), true);
        assert_eq!(o.size, 4);
        let c = canonical(&CutVec::new(3, 0b100).to_dist(), &Group::Sym(3));
        assert_eq!(c, canonical(&CutVec::new(3, 0b010).to_dist(), &Group::Sym(3)));
        assert_eq!(canonical(&CutVec::new(3, 0b100), &Group::Sym(3)), CutVec::new(3, 0b010));
    }

    #[test]
    fn canonical_b_forms() {
        let b = bi(&[-1, 1, 1, 0, 0, 0, 0, 0]);
        assert_eq!(canonical(&b, &Group::Sym(8)).b, vec![-1, 0, 0, 0, 0, 0, 1, 1]);
        assert_eq!(canonical_b(&b.b, &Group::Sym(8)), vec![-1, 0, 0, 0, 0, 0, 1, 1]);
        let t = bi(&[1, 1, -1, 0]);
        let p = bi(&[0, 1, 1, 1]);
        let ct = canonical(&t, &Group::ARes(4));
        assert_eq!(ct, canonical(&p, &Group::ARes(4)));
        assert_eq!(ct.b, canonical_b(&t.b, &Group::ARes(4)));
        for b in [bi(&[2, -1, 1, 0, -1]), bi(&[1, 1, 1, -1, -1]), bi(&[3, -1, 0, 0, -1])] {
            for g in [Group::Sym(5), Group::ARes(5)] {
                assert_eq!(canonical(&b, &g).b, canonical_b(&b.b, &g));
            }
        }
    }

    #[test]
    fn orbit_stabilizer() {
        for (x, g) in [
            (bi(&[1, 1, -1, 0, 0]), Group::ARes(5)),
            (bi(&[2, 1, 1, -1, -1, -1]), Group::Sym(6)),
            (bi(&[2, 1, 1, -1, -1, -1]), Group::ARes(6)),
        ] {
            let o = orbit(&x, &g, false);
            assert_eq!(o.size * stabilizer_order(&x, &g), g.order());
        }
        let d = DistVec::from_fn(4, |i, j| ratio((i + 2 * j) as i64, 3));
        let g = Group::ARes(4);
        assert_eq!(orbit(&d, &g, false).size * stabilizer_order(&d, &g), g.order());
    }

    #[test]
    fn composition_is_an_action() {
        let els = Group::ARes(4).elements();
        let d = DistVec::from_fn(4, |i, j| ratio((i * 5 + j * j) as i64, 7));
        for g in els.iter().step_by(7) {
            for h in els.iter().step_by(11) {
                assert_eq!(d.act(h).act(g), d.act(&g.compose(h)));
                let f = HomFacet::from_linear(bi(&[1, 1, -1, 0]).cone_normal());
                assert_eq!(f.act(h).act(g), f.act(&g.compose(h)));
            }
            assert_eq!(d.act(g).act(&g.inverse()), d);
        }
    }

    #[test]
    fn facet_action_matches_distances() {
        // a₀ + a·x evaluated at g·x equals (g⁻¹·f) at x
        let f = HomFacet(bi(&[1, 1, 1, -1, 1]).homogeneous_normal());
        let d = DistVec::from_fn(5, |i, j| ratio((i * 3 + j) as i64 % 5, 4));
        let eval = |f: &HomFacet, d: &DistVec| {
            let mut acc = Rat::from_integer(f.0[0].clone());
            for (a, x) in f.0[1..].iter().zip(&d.d) {
                acc += Rat::from_integer(a.clone()) * x;
            }
            acc
        };
        for g in Group::ARes(5).elements().iter().step_by(13) {
            assert_eq!(eval(&f, &d.act(g)), eval(&f.act(&g.inverse()), &d));
        }
    }

    #[test]
    fn switching_cuts_and_involutions() {
        for n in 2..=5 {
            for c in cuts(n, true) {
                for s in 0..1u64 << n {
                    assert_eq!(switch_dist(&c.to_dist(), s), switch_cut(&c, s).to_dist());
                }
            }
        }
        let b = bi(&[2, -1, 1, 0, -1]);
        assert_eq!(switch_ineq(&switch_ineq(&b, 0b10110), 0b10110), b);
        let d = DistVec::from_fn(3, |_, _| rat(1));
        assert_eq!(switch_dist(&switch_dist(&d, 0b110), 0b110), d);
    }

    #[test]
    fn merge_small_classes() {
        let classes = merge_classes(&[bi(&[-1, 1, 1]), bi(&[1, 1, 1])]);
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].sym_reps.len(), 2);
        assert_eq!(classes[0].total, 4);
        assert_eq!(classes[0].homogeneous, vec![0]);
        let reps = sym_reps_in_switching_class(&[0, 0, 0, 0, 0, 1, 1, 1]);
        assert_eq!(reps.len(), 2);
        let c = merge_classes(&reps);
        assert_eq!(c[0].total, 224);
    }

    #[test]
    fn orbit_partition_of_cuts() {
        let all = cuts(5, false);
        let orbits = orbits_of_set(&all, &Group::Sym(5));
        assert_eq!(orbits.len(), 2);
        let all0 = cuts(5, true);
        assert_eq!(orbits_of_set(&all0, &Group::ARes(5)).len(), 1);
    }
}
