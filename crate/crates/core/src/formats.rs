//! JSON file formats. Rationals are written as `"p/q"` (or `"p"`) strings;
//! integers are also accepted where a rational is expected.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactla::{format_rat, parse_rat, primitive_from_rat, IntVec, Rat};
use crate::graphs::{Edge, EdgeIneq, Graph, GraphError, PathSystem};
use crate::hypfamilies::{pair_count, BInequality, DistVec};
use crate::polyhedra::{PolyCone, PolyTope};
use crate::repartition::{RepartitionConfig, Simplex, Triangulations};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed rational {0:?}")]
    Rational(String),
    #[error("expected {expected} entries, found {found}")]
    Length { expected: usize, found: usize },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum RatJson {
    Int(i64),
    Str(String),
}

impl RatJson {
    pub fn to_rat(&self) -> Result<Rat, FormatError> {
        match self {
            RatJson::Int(x) => Ok(Rat::from_integer((*x).into())),
            RatJson::Str(s) => parse_rat(s).map_err(|_| FormatError::Rational(s.clone())),
        }
    }
}

fn rat_str(r: &Rat) -> RatJson {
    RatJson::Str(format_rat(r))
}

fn int_str(x: &BigInt) -> RatJson {
    RatJson::Str(x.to_string())
}

fn rat_vec(v: &[RatJson]) -> Result<Vec<Rat>, FormatError> {
    v.iter().map(RatJson::to_rat).collect()
}

fn int_vecs(vs: &[Vec<RatJson>]) -> Result<Vec<IntVec>, FormatError> {
    vs.iter().map(|v| Ok(primitive_from_rat(&rat_vec(v)?))).collect()
}

pub fn to_json<T: Serialize>(x: &T) -> String {
    let mut s = serde_json::to_string_pretty(x).expect("serialisable");
    s.push('\n');
    s
}

/// `{"dim", "rays", "facets", "equations"}`; facets `a` mean `a·x ≥ 0`.
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct ConeFile {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rays: Option<Vec<Vec<RatJson>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub facets: Option<Vec<Vec<RatJson>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub equations: Vec<Vec<RatJson>>,
}

impl ConeFile {
    pub fn from_cone(c: &PolyCone) -> Self {
        let conv = |vs: &Vec<IntVec>| vs.iter().map(|v| v.iter().map(int_str).collect()).collect();
        ConeFile {
            dim: c.dim,
            rays: c.rays.as_ref().map(conv),
            facets: c.facets.as_ref().map(conv),
            equations: conv(&c.equations),
        }
    }

    pub fn to_cone(&self) -> Result<PolyCone, FormatError> {
        let check = |vs: &[Vec<RatJson>]| -> Result<(), FormatError> {
            match vs.iter().find(|v| v.len() != self.dim) {
                Some(v) => Err(FormatError::Length {
                    expected: self.dim,
                    found: v.len(),
                }),
                None => Ok(()),
            }
        };
        let mut cone = PolyCone {
            dim: self.dim,
            ..Default::default()
        };
        if let Some(r) = &self.rays {
            check(r)?;
            cone.rays = Some(int_vecs(r)?);
        }
        if let Some(f) = &self.facets {
            check(f)?;
            cone.facets = Some(int_vecs(f)?);
        }
        check(&self.equations)?;
        cone.equations = int_vecs(&self.equations)?;
        Ok(cone)
    }
}

pub fn parse_cone(text: &str) -> Result<PolyCone, FormatError> {
    serde_json::from_str::<ConeFile>(text)?.to_cone()
}

/// A point set: a JSON array of rational vectors, or `{"points": [...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointsFile {
    Bare(Vec<Vec<RatJson>>),
    Wrapped { points: Vec<Vec<RatJson>> },
}

pub fn parse_points(text: &str) -> Result<Vec<Vec<Rat>>, FormatError> {
    let pts = match serde_json::from_str::<PointsFile>(text)? {
        PointsFile::Bare(p) | PointsFile::Wrapped { points: p } => p,
    };
    let pts: Vec<Vec<Rat>> = pts.iter().map(|p| rat_vec(p)).collect::<Result<_, _>>()?;
    if let Some(first) = pts.first() {
        if let Some(p) = pts.iter().find(|p| p.len() != first.len()) {
            return Err(FormatError::Length {
                expected: first.len(),
                found: p.len(),
            });
        }
    }
    Ok(pts)
}

pub fn parse_int_points(text: &str) -> Result<Vec<IntVec>, FormatError> {
    parse_points(text)?
        .into_iter()
        .map(|p| {
            p.iter()
                .map(|x| {
                    if x.is_integer() {
                        Ok(x.to_integer())
                    } else {
                        Err(FormatError::Invalid(format!(
                            "non-integral coordinate {}",
                            format_rat(x)
                        )))
                    }
                })
                .collect()
        })
        .collect()
}

/// Hull output. `facets` are homogenised `(a₀, a)` meaning `a₀ + a·x ≥ 0`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct HullFile {
    pub dim: usize,
    pub affine_dim: usize,
    pub vertices: Vec<Vec<RatJson>>,
    pub facets: Vec<Vec<RatJson>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub equations: Vec<Vec<RatJson>>,
}

impl HullFile {
    pub fn from_polytope(p: &PolyTope) -> Self {
        HullFile {
            dim: p.dim,
            affine_dim: p.affine_dim,
            vertices: p
                .vertices
                .iter()
                .map(|v| v.iter().map(rat_str).collect())
                .collect(),
            facets: p
                .homogeneous_facets()
                .iter()
                .map(|f| f.iter().map(int_str).collect())
                .collect(),
            equations: p
                .equations()
                .iter()
                .map(|f| f.iter().map(int_str).collect())
                .collect(),
        }
    }
}

/// `{"n", "b", "rhs"}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct InequalityFile {
    pub n: usize,
    pub b: Vec<i64>,
    pub rhs: RatJson,
}

impl InequalityFile {
    pub fn from_b(b: &BInequality) -> Self {
        InequalityFile {
            n: b.n(),
            b: b.b.clone(),
            rhs: RatJson::Str(b.rhs.to_string()),
        }
    }

    pub fn to_b(&self) -> Result<BInequality, FormatError> {
        if self.b.len() != self.n {
            return Err(FormatError::Length {
                expected: self.n,
                found: self.b.len(),
            });
        }
        let b = BInequality::new(self.b.clone())
            .map_err(|e| FormatError::Invalid(e.to_string()))?;
        if self.rhs.to_rat()? != Rat::from_integer(b.rhs.into()) {
            return Err(FormatError::Invalid(format!(
                "rhs must be s(s+1) = {}",
                b.rhs
            )));
        }
        Ok(b)
    }
}

/// One inequality or an array of them.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InequalityList {
    One(InequalityFile),
    Many(Vec<InequalityFile>),
}

pub fn parse_inequalities(text: &str) -> Result<Vec<BInequality>, FormatError> {
    match serde_json::from_str::<InequalityList>(text)? {
        InequalityList::One(f) => Ok(vec![f.to_b()?]),
        InequalityList::Many(fs) => fs.iter().map(InequalityFile::to_b).collect(),
    }
}

/// `{"n", "d"}` with `d` in pair order `(0,1), (0,2), …`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DistanceFile {
    pub n: usize,
    pub d: Vec<RatJson>,
}

impl DistanceFile {
    pub fn from_dist(d: &DistVec) -> Self {
        DistanceFile {
            n: d.n,
            d: d.d.iter().map(rat_str).collect(),
        }
    }
}

pub fn parse_distance(text: &str) -> Result<DistVec, FormatError> {
    let f: DistanceFile = serde_json::from_str(text)?;
    let expected = pair_count(f.n);
    if f.d.len() != expected {
        return Err(FormatError::Length {
            expected,
            found: f.d.len(),
        });
    }
    let d = rat_vec(&f.d)?;
    DistVec::new(f.n, d).map_err(|e| FormatError::Invalid(e.to_string()))
}

/// `{"n", "edges": [[i, j], …]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl GraphFile {
    pub fn from_graph(g: &Graph) -> Self {
        GraphFile {
            n: g.n,
            edges: g.edges.iter().map(|&(u, v)| [u, v]).collect(),
        }
    }
}

pub fn parse_graph(text: &str) -> Result<Graph, FormatError> {
    let f: GraphFile = serde_json::from_str(text)?;
    let edges: Vec<(usize, usize)> = f.edges.iter().map(|e| (e[0], e[1])).collect();
    Ok(Graph::new(f.n, &edges)?)
}

/// `"i,j"` as written, not reordered.
fn parse_key(key: &str) -> Result<(usize, usize), FormatError> {
    let bad = || FormatError::Invalid(format!("bad pair key {key:?}"));
    let (i, j) = key.split_once(',').ok_or_else(bad)?;
    let i: usize = i.trim().parse().map_err(|_| bad())?;
    let j: usize = j.trim().parse().map_err(|_| bad())?;
    Ok((i, j))
}

fn parse_pair(key: &str) -> Result<Edge, FormatError> {
    let (i, j) = parse_key(key)?;
    Ok((i.min(j), i.max(j)))
}

fn pair_key(e: &Edge) -> String {
    format!("{},{}", e.0, e.1)
}

/// A path system: either a bare map `"i,j" → [vertices]` (terminals are
/// read off the path ends) or `{"terminals", "paths"}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PathsFile {
    Full {
        terminals: Vec<usize>,
        paths: BTreeMap<String, Vec<usize>>,
    },
    Bare(BTreeMap<String, Vec<usize>>),
}

impl PathsFile {
    pub fn from_system(sys: &PathSystem) -> Self {
        PathsFile::Full {
            terminals: sys.terminals.clone(),
            paths: sys.paths.iter().map(|(e, p)| (pair_key(e), p.clone())).collect(),
        }
    }
}

pub fn parse_paths(text: &str) -> Result<PathSystem, FormatError> {
    let (terminals, raw) = match serde_json::from_str::<PathsFile>(text)? {
        PathsFile::Full { terminals, paths } => (Some(terminals), paths),
        PathsFile::Bare(paths) => (None, paths),
    };
    let mut paths = BTreeMap::new();
    for (k, p) in raw {
        let (i, j) = parse_key(&k)?;
        // a path listed as "j,i" runs from terminal j to terminal i
        if i < j {
            paths.insert((i, j), p);
        } else {
            paths.insert((j, i), p.into_iter().rev().collect());
        }
    }
    let terminals = match terminals {
        Some(t) => t,
        None => infer_terminals(&paths)?,
    };
    Ok(PathSystem { terminals, paths })
}

fn infer_terminals(paths: &BTreeMap<Edge, Vec<usize>>) -> Result<Vec<usize>, FormatError> {
    let k = paths.keys().map(|&(_, j)| j + 1).max().unwrap_or(0);
    let mut t: Vec<Option<usize>> = vec![None; k];
    for (&(i, j), p) in paths {
        for (idx, v) in [(i, p.first()), (j, p.last())] {
            let Some(&v) = v else {
                return Err(FormatError::Invalid(format!("empty path for {i},{j}")));
            };
            match t[idx] {
                Some(w) if w != v => {
                    return Err(FormatError::Invalid(format!(
                        "terminal {idx} is both {w} and {v}"
                    )))
                }
                _ => t[idx] = Some(v),
            }
        }
    }
    t.into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| FormatError::Invalid(format!("terminal {i} has no path"))))
        .collect()
}

/// `{"n", "coef": {"u,v": rat}, "rhs"}` meaning `Σ coef·x ≤ rhs`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct EdgeIneqFile {
    pub n: usize,
    pub coef: BTreeMap<String, RatJson>,
    pub rhs: RatJson,
}

impl EdgeIneqFile {
    pub fn from_ineq(n: usize, f: &EdgeIneq) -> Self {
        EdgeIneqFile {
            n,
            coef: f.coef.iter().map(|(e, a)| (pair_key(e), rat_str(a))).collect(),
            rhs: rat_str(&f.rhs),
        }
    }
}

/// An edge inequality, or a b-inequality file read as one on `K_n`.
pub fn parse_edge_ineq(text: &str) -> Result<(usize, EdgeIneq), FormatError> {
    let v: serde_json::Value = serde_json::from_str(text)?;
    if v.get("b").is_some() {
        let f: InequalityFile = serde_json::from_value(v)?;
        let b = f.to_b()?;
        return Ok((b.n(), EdgeIneq::from_b(&b)));
    }
    let f: EdgeIneqFile = serde_json::from_value(v)?;
    let mut terms = Vec::new();
    for (k, a) in &f.coef {
        let e = parse_pair(k)?;
        if e.1 >= f.n || e.0 == e.1 {
            return Err(FormatError::Invalid(format!("pair {k} out of range")));
        }
        terms.push((e, a.to_rat()?));
    }
    Ok((f.n, EdgeIneq::new(terms, f.rhs.to_rat()?)))
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SimplexJson {
    pub vertices: Vec<usize>,
    pub volume: RatJson,
}

/// Repartitioning configuration report.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct RepartitionFile {
    pub n: usize,
    pub points: Vec<Vec<RatJson>>,
    pub alpha: Vec<RatJson>,
    pub s_plus: Vec<usize>,
    pub s_minus: Vec<usize>,
    pub degenerate: bool,
    pub plus: Vec<SimplexJson>,
    pub minus: Vec<SimplexJson>,
    pub volumes: [RatJson; 2],
}

impl RepartitionFile {
    pub fn new(c: &RepartitionConfig, t: &Triangulations) -> Self {
        let simplices = |s: &[Simplex]| {
            s.iter()
                .map(|s| SimplexJson {
                    vertices: s.vertices.clone(),
                    volume: int_str(&s.volume),
                })
                .collect()
        };
        let (vp, vm) = t.volumes();
        RepartitionFile {
            n: c.n,
            points: c
                .points
                .iter()
                .map(|p| p.iter().map(int_str).collect())
                .collect(),
            alpha: c.alpha.iter().map(int_str).collect(),
            s_plus: c.s_plus.clone(),
            s_minus: c.s_minus.clone(),
            degenerate: c.is_degenerate(),
            plus: simplices(&t.plus),
            minus: simplices(&t.minus),
            volumes: [int_str(&vp), int_str(&vm)],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{rat, ratio};

    #[test]
    fn distance_examples() {
        let d = parse_distance(r#"{"n":3,"d":["1","1","1"]}"#).unwrap();
        assert_eq!(d.d, vec![rat(1); 3]);
        let d = parse_distance(r#"{"n":3,"d":["1/2","1/2","0"]}"#).unwrap();
        assert_eq!(d.d, vec![ratio(1, 2), ratio(1, 2), rat(0)]);
        assert!(matches!(
            parse_distance(r#"{"n":3,"d":["1","1"]}"#),
            Err(FormatError::Length { expected: 3, found: 2 })
        ));
        assert!(matches!(
            parse_distance(r#"{"n":3,"d":["1","x","1"]}"#),
            Err(FormatError::Rational(_))
        ));
    }

    #[test]
    fn distance_round_trip() {
        let d = DistVec::new(3, vec![ratio(3, 2), rat(0), ratio(-1, 3)]).unwrap();
        let text = to_json(&DistanceFile::from_dist(&d));
        assert_eq!(parse_distance(&text).unwrap(), d);
    }

    #[test]
    fn cone_round_trip() {
        let iv = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<IntVec>();
        let cone = PolyCone {
            dim: 2,
            rays: Some(vec![iv(&[1, 0]), iv(&[1, 1])]),
            facets: None,
            equations: vec![],
        };
        let text = to_json(&ConeFile::from_cone(&cone));
        assert_eq!(parse_cone(&text).unwrap(), cone);
        let c = parse_cone(r#"{"dim":2,"facets":[["1/2","1/3"]]}"#).unwrap();
        assert_eq!(c.facets.unwrap(), vec![iv(&[3, 2])]);
    }

    #[test]
    fn inequality_checks_rhs() {
        let b = parse_inequalities(r#"{"n":3,"b":[1,1,1],"rhs":"2"}"#).unwrap();
        assert_eq!(b[0].rhs, 2);
        assert!(parse_inequalities(r#"{"n":3,"b":[1,1,1],"rhs":"0"}"#).is_err());
        assert!(parse_inequalities(r#"{"n":3,"b":[1,1,0],"rhs":"0"}"#).is_err());
        let many = parse_inequalities(r#"[{"n":3,"b":[1,1,-1],"rhs":0}]"#).unwrap();
        assert_eq!(many.len(), 1);
    }

    #[test]
    fn paths_infer_terminals() {
        let sys = parse_paths(r#"{"0,1":[3,4,0],"0,2":[3,2,1],"1,2":[0,1]}"#).unwrap();
        assert_eq!(sys.terminals, vec![3, 0, 1]);
        let again = parse_paths(&to_json(&PathsFile::from_system(&sys))).unwrap();
        assert_eq!(again, sys);
        let rev = parse_paths(r#"{"1,0":[0,4,3],"0,2":[3,2,1],"1,2":[0,1]}"#).unwrap();
        assert_eq!(rev, sys);
    }

    #[test]
    fn edge_ineq_round_trip() {
        let f = EdgeIneq::new([((0, 1), rat(1)), ((1, 2), ratio(-1, 2))], rat(0));
        let text = to_json(&EdgeIneqFile::from_ineq(3, &f));
        assert_eq!(parse_edge_ineq(&text).unwrap(), (3, f));
    }
}
