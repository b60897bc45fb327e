use std::collections::BTreeSet;

use hycone::exactla::{dot_int, int_to_rat, primitive, rat, ratio, IntVec, Rat};
use hycone::formats::{
    self, ConeFile, DistanceFile, EdgeIneqFile, GraphFile, InequalityFile, PathsFile,
};
use hycone::graphs::{EdgeIneq, Graph, PathSystem};
use hycone::hypfamilies::{cuts, BInequality, DistVec};
use hycone::polyhedra::{dd_convert, hull, incidence, PolyCone, Target};
use num_bigint::BigInt;
use proptest::prelude::*;

fn big(v: &[i64]) -> IntVec {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn cross(a: &[i64], b: &[i64]) -> [i64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Facets of a full-dimensional 3D hull by trying every plane through three
/// points.
fn brute_hull3(pts: &[Vec<i64>]) -> BTreeSet<IntVec> {
    let mut out = BTreeSet::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            for k in j + 1..pts.len() {
                let u: Vec<i64> = (0..3).map(|t| pts[j][t] - pts[i][t]).collect();
                let w: Vec<i64> = (0..3).map(|t| pts[k][t] - pts[i][t]).collect();
                let n = cross(&u, &w);
                if n == [0, 0, 0] {
                    continue;
                }
                let c = dot(&n, &pts[i]);
                let side: Vec<i64> = pts.iter().map(|p| dot(&n, p) - c).collect();
                for sign in [1, -1] {
                    if side.iter().all(|&s| sign * s >= 0) {
                        let mut h = vec![-sign * c];
                        h.extend(n.iter().map(|&x| sign * x));
                        out.insert(primitive(big(&h)));
                    }
                }
            }
        }
    }
    out
}

fn point_cloud() -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 5..=12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn hull_matches_brute_force(pts in point_cloud()) {
        let rats: Vec<Vec<Rat>> = pts.iter().map(|p| p.iter().map(|&x| rat(x)).collect()).collect();
        let p = hull(&rats).unwrap();
        if p.affine_dim == 3 {
            let got: BTreeSet<IntVec> = p.homogeneous_facets().iter().cloned().collect();
            prop_assert_eq!(got, brute_hull3(&pts));
            for v in &p.vertices {
                let on = p.homogeneous_facets().iter().filter(|f| {
                    let s = int_to_rat(&f[0])
                        + (0..3).map(|t| int_to_rat(&f[t + 1]) * &v[t]).sum::<Rat>();
                    s == rat(0)
                }).count();
                prop_assert!(on >= 3);
            }
        }
    }

    #[test]
    fn cone_round_trip(rays in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 3..=8)) {
        // lift into the half-space x₀ > 0 so the cone is pointed
        let rays: Vec<IntVec> = rays.iter().map(|r| {
            let mut v = vec![4];
            v.extend(r);
            big(&v)
        }).collect();
        let cone = dd_convert(&PolyCone::from_rays(4, rays.clone()), Target::Facets).unwrap();
        let facets = cone.facets().unwrap().to_vec();
        for f in &facets {
            for r in &rays {
                prop_assert!(dot_int(f, r) >= BigInt::from(0));
            }
        }
        if cone.equations.is_empty() {
            let back = dd_convert(&PolyCone::from_facets(4, facets.clone()), Target::Rays).unwrap();
            let extreme: BTreeSet<IntVec> = back.rays().unwrap().iter().cloned().collect();
            let input: BTreeSet<IntVec> = rays.iter().map(|r| primitive(r.clone())).collect();
            prop_assert!(extreme.is_subset(&input));
            let again = dd_convert(&PolyCone::from_rays(4, extreme.into_iter().collect()), Target::Facets).unwrap();
            prop_assert_eq!(again.facets().unwrap(), &facets[..]);
        }
    }

    #[test]
    fn distance_round_trip(n in 2usize..=6, nums in prop::collection::vec((0i64..=9, 1i64..=5), 15)) {
        let m = n * (n - 1) / 2;
        let d = DistVec::new(n, nums[..m].iter().map(|&(p, q)| ratio(p, q)).collect()).unwrap();
        let text = formats::to_json(&DistanceFile::from_dist(&d));
        prop_assert_eq!(formats::parse_distance(&text).unwrap(), d);
    }

    #[test]
    fn inequality_round_trip(b in prop::collection::vec(-4i64..=4, 2..=8)) {
        if let Ok(b) = BInequality::new(b) {
            let text = formats::to_json(&vec![InequalityFile::from_b(&b)]);
            prop_assert_eq!(formats::parse_inequalities(&text).unwrap(), vec![b]);
        }
    }

    #[test]
    fn cone_file_round_trip(rays in prop::collection::vec(prop::collection::vec(-9i64..=9, 4), 1..=6)) {
        let cone = PolyCone::from_rays(4, rays.iter().map(|r| big(r)).collect());
        let text = formats::to_json(&ConeFile::from_cone(&cone));
        let back = formats::parse_cone(&text).unwrap();
        let want: Vec<IntVec> = cone.rays().unwrap().iter().map(|r| primitive(r.clone())).collect();
        prop_assert_eq!(back.rays().unwrap(), &want[..]);
    }
}

#[test]
fn cut_cone_counts() {
    for (n, want) in [(3, 3), (4, 12), (5, 40)] {
        let rays: Vec<IntVec> = cuts(n, false).iter().map(|c| c.to_int()).collect();
        let cone = dd_convert(&PolyCone::from_rays(n * (n - 1) / 2, rays), Target::Facets).unwrap();
        assert_eq!(cone.facets().unwrap().len(), want);
        let inc = incidence(&cone).unwrap();
        assert_eq!(inc.len(), cone.rays().unwrap().len());
    }
}

#[test]
fn graph_and_paths_round_trip() {
    let g = Graph::cycle(5);
    let text = formats::to_json(&GraphFile::from_graph(&g));
    assert_eq!(formats::parse_graph(&text).unwrap(), g);
    let sys = PathSystem {
        terminals: vec![3, 0, 1],
        paths: [((0, 1), vec![3, 4, 0]), ((0, 2), vec![3, 2, 1]), ((1, 2), vec![0, 1])]
            .into_iter()
            .collect(),
    };
    let text = formats::to_json(&PathsFile::from_system(&sys));
    assert_eq!(formats::parse_paths(&text).unwrap(), sys);
    let f = EdgeIneq::new([((0, 1), rat(1)), ((1, 2), ratio(-1, 2))], rat(0));
    let text = formats::to_json(&EdgeIneqFile::from_ineq(3, &f));
    assert_eq!(formats::parse_edge_ineq(&text).unwrap(), (3, f));
}

#[test]
fn malformed_input_rejected() {
    assert!(formats::parse_distance(r#"{"n": 3, "d": ["1", "1"]}"#).is_err());
    assert!(formats::parse_distance(r#"{"n": 3, "d": ["1", "1", "x"]}"#).is_err());
    assert!(formats::parse_inequalities(r#"{"n": 3, "b": [1, 1, -1], "rhs": 5}"#).is_err());
    assert!(formats::parse_cone("not json").is_err());
}
