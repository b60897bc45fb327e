//! Published tables of hypermetric facets, rays and vertices for `n ≤ 8`,
//! with checks that recompute them.
//!
//! The tables ship embedded. Setting `HYCONE_DATA` to a directory reads them
//! from there instead; either way every file must match its recorded SHA-256.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::exactla::{primitive, rank_int, IntVec};
use crate::hypfamilies::{
    cut_incidence_count, cut_rank, cuts, eval_on_cut, gen_b, met_family, tight_cuts, BInequality, CutVec,
    Target as Family,
};
use crate::polyhedra::{dd_convert, hull, PolyCone, PolyError, Target};
use crate::symmetry::{
    merge_classes, orbit_size_sym, orbits_of_set, sym_reps_in_switching_class, Actable, Group,
    HomFacet, PairVec,
};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown data file {0}")]
    Unknown(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{file}: checksum {found} does not match {expected}")]
    Checksum {
        file: String,
        expected: String,
        found: String,
    },
    #[error("{file}:{line}: {msg}")]
    Parse {
        file: String,
        line: usize,
        msg: String,
    },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

pub const DATA_ENV: &str = "HYCONE_DATA";

struct DataFile {
    name: &'static str,
    text: &'static str,
    sha256: &'static str,
}

macro_rules! data_file {
    ($name:literal, $sha:literal) => {
        DataFile {
            name: $name,
            text: include_str!(concat!("../data/", $name)),
            sha256: $sha,
        }
    };
}

const FILES: &[DataFile] = &[
    data_file!(
        "counts.tsv",
        "f4c70454600d49e384a65625a62cbc3f9090bee51c0a360fbc7408ab230d3676"
    ),
    data_file!(
        "delaunay_simplices7.tsv",
        "0e2ef8439abae8e1fc522e7678d298b09b26cf6078cfefb336525f45fe66e5ca"
    ),
    data_file!(
        "gcd.tsv",
        "e9414bc799168d79f987ed6f8556087feb0c9d3910f24c23e24462514c3cde81"
    ),
    data_file!(
        "hyp8_facets.tsv",
        "5c6b7b6c3bbbb77f95f1ec28ab179aed5d12ee5b0ab40993c0fdb92b0476164b"
    ),
    data_file!(
        "hyp8_rays_by_polytope.tsv",
        "c80e0ba5a29fb1d675f08b65f31ca87f6d12e1102570f91ed24eb48e5b10752f"
    ),
    data_file!(
        "hypp7_incidence.tsv",
        "b3c5408fdd3ac7b6cba9a692d96835dc93ede07961aa46b05e358037a4f27555"
    ),
    data_file!(
        "hypp8_facets.tsv",
        "648f4436c3ac1c10e9efa076547a5d4440d7c17da2f1059724cfbc7088f8965f"
    ),
    data_file!(
        "hypp8_vertices_221_321.tsv",
        "63b7fa08316b47e74abdae39f458496879a9be5c23b917209664ecb9e20baf76"
    ),
    data_file!(
        "hypp8_vertices_by_family.tsv",
        "e53cb2b51aa80073a2bf8b1f14759aa97ab6ed1bc25d6d7e75f66dee7b47d3ec"
    ),
];

pub fn data_file_names() -> Vec<&'static str> {
    FILES.iter().map(|f| f.name).collect()
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Text of a data file, checksum-verified.
pub fn load(name: &str) -> Result<String, CatalogError> {
    let file = FILES
        .iter()
        .find(|f| f.name == name)
        .ok_or_else(|| CatalogError::Unknown(name.to_string()))?;
    let text = match std::env::var_os(DATA_ENV) {
        Some(dir) => {
            let path = std::path::Path::new(&dir).join(name);
            std::fs::read_to_string(&path).map_err(|source| CatalogError::Io {
                path: path.display().to_string(),
                source,
            })?
        }
        None => file.text.to_string(),
    };
    let found = sha256_hex(text.as_bytes());
    if found != file.sha256 {
        return Err(CatalogError::Checksum {
            file: name.to_string(),
            expected: file.sha256.to_string(),
            found,
        });
    }
    Ok(text)
}

struct Tsv {
    file: String,
    rows: Vec<(usize, Vec<String>)>,
}

impl Tsv {
    fn load(name: &str, columns: usize) -> Result<Tsv, CatalogError> {
        let text = load(name)?;
        let mut rows = Vec::new();
        for (k, line) in text.lines().enumerate().skip(1) {
            if line.is_empty() {
                continue;
            }
            let cells: Vec<String> = line.split('\t').map(str::to_string).collect();
            if cells.len() != columns {
                return Err(CatalogError::Parse {
                    file: name.to_string(),
                    line: k + 1,
                    msg: format!("expected {columns} columns, found {}", cells.len()),
                });
            }
            rows.push((k + 1, cells));
        }
        Ok(Tsv {
            file: name.to_string(),
            rows,
        })
    }

    fn err(&self, line: usize, msg: impl Into<String>) -> CatalogError {
        CatalogError::Parse {
            file: self.file.clone(),
            line,
            msg: msg.into(),
        }
    }

    fn num<T: std::str::FromStr>(&self, line: usize, cell: &str) -> Result<T, CatalogError> {
        cell.parse()
            .map_err(|_| self.err(line, format!("bad number {cell:?}")))
    }

    fn list<T: std::str::FromStr>(&self, line: usize, cell: &str) -> Result<Vec<T>, CatalogError> {
        cell.split(',').map(|x| self.num(line, x)).collect()
    }
}

/// A row of the `HYP_8` facet table (cone rows) or of the `HYPP_8` facet
/// table (polytope rows).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetOrbitRow {
    pub label: String,
    pub b: Vec<i64>,
    /// Orbit size divided by 56 (cone) or 32 (polytope).
    pub size_div: u64,
    /// Cone rows only.
    pub cut_rank: Option<usize>,
    /// Polytope rows only: number of `Sym(8)`-orbits in the switching class.
    pub sym_classes: Option<usize>,
    pub incidence: Vec<u64>,
    pub simplicial: bool,
    /// Cone rows: index of the switching class, from the label.
    pub class: usize,
    pub boldface: bool,
}

pub fn hyp8_facets() -> Result<Vec<FacetOrbitRow>, CatalogError> {
    let t = Tsv::load("hyp8_facets.tsv", 7)?;
    t.rows
        .iter()
        .map(|(line, c)| {
            let class = c[0]
                .strip_prefix('F')
                .and_then(|s| s.split('.').next())
                .ok_or_else(|| t.err(*line, "bad label"))?;
            Ok(FacetOrbitRow {
                label: c[0].clone(),
                b: t.list(*line, &c[1])?,
                size_div: t.num(*line, &c[2])?,
                cut_rank: Some(t.num(*line, &c[3])?),
                sym_classes: None,
                incidence: t.list(*line, &c[4])?,
                simplicial: c[5] == "1",
                class: t.num(*line, class)?,
                boldface: c[6] == "1",
            })
        })
        .collect()
}

pub fn hypp8_facets() -> Result<Vec<FacetOrbitRow>, CatalogError> {
    let t = Tsv::load("hypp8_facets.tsv", 6)?;
    t.rows
        .iter()
        .map(|(line, c)| {
            let class = c[0]
                .strip_prefix('F')
                .ok_or_else(|| t.err(*line, "bad label"))?;
            Ok(FacetOrbitRow {
                label: c[0].clone(),
                b: t.list(*line, &c[1])?,
                size_div: t.num(*line, &c[2])?,
                cut_rank: None,
                sym_classes: Some(t.num(*line, &c[3])?),
                incidence: t.list(*line, &c[4])?,
                simplicial: c[5] == "1",
                class: t.num(*line, class)?,
                boldface: true,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountsRow {
    /// `CUT`, `HYP`, `MET` or `HYPP`.
    pub object: String,
    /// `rays`, `facets` or `vertices`.
    pub kind: String,
    pub n: usize,
    pub count: u64,
    pub orbits: u64,
}

pub fn counts() -> Result<Vec<CountsRow>, CatalogError> {
    let t = Tsv::load("counts.tsv", 5)?;
    t.rows
        .iter()
        .map(|(line, c)| {
            Ok(CountsRow {
                object: c[0].clone(),
                kind: c[1].clone(),
                n: t.num(*line, &c[2])?,
                count: t.num(*line, &c[3])?,
                orbits: t.num(*line, &c[4])?,
            })
        })
        .collect()
}

fn count_of(rows: &[CountsRow], object: &str, kind: &str, n: usize) -> Option<(u64, u64)> {
    rows.iter()
        .find(|r| r.object == object && r.kind == kind && r.n == n)
        .map(|r| (r.count, r.orbits))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Fail,
    Note,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Ok => "OK",
            Status::Fail => "FAIL",
            Status::Note => "NOTE",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub table: String,
    pub row: String,
    pub check: String,
    pub expected: String,
    pub computed: String,
    pub status: Status,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    fn compare(
        &mut self,
        table: &str,
        row: &str,
        check: &str,
        expected: impl ToString,
        computed: impl ToString,
    ) {
        let (expected, computed) = (expected.to_string(), computed.to_string());
        let status = if expected == computed {
            Status::Ok
        } else {
            Status::Fail
        };
        self.push(table, row, check, expected, computed, status);
    }

    fn push(
        &mut self,
        table: &str,
        row: &str,
        check: &str,
        expected: String,
        computed: String,
        status: Status,
    ) {
        self.checks.push(Check {
            table: table.to_string(),
            row: row.to_string(),
            check: check.to_string(),
            expected,
            computed,
            status,
        });
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn to_tsv(&self) -> String {
        let mut s = String::from("table\trow\tcheck\texpected\tcomputed\tstatus\n");
        for c in &self.checks {
            s.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\n",
                c.table, c.row, c.check, c.expected, c.computed, c.status
            ));
        }
        s
    }
}

fn with_orbits(count: impl fmt::Display, orbits: impl fmt::Display) -> String {
    format!("{count}({orbits})")
}

/// Facet normals `a` (`a·x ≥ 0`) of `CUT_n`.
pub fn cut_cone(n: usize) -> Result<PolyCone, PolyError> {
    let rays: Vec<IntVec> = cuts(n, false).iter().map(CutVec::to_int).collect();
    dd_convert(&PolyCone::from_rays(n * (n - 1) / 2, rays), Target::Facets)
}

/// Extreme rays of `MET_n`.
pub fn met_cone(n: usize) -> Result<PolyCone, PolyError> {
    let facets: Vec<IntVec> = met_family(n).iter().map(BInequality::cone_normal).collect();
    dd_convert(&PolyCone::from_facets(n * (n - 1) / 2, facets), Target::Rays)
}

fn orbit_sizes<T: Actable>(items: &[T], group: &Group) -> Vec<usize> {
    orbits_of_set(items, group).iter().map(Vec::len).collect()
}

fn pair_vecs(vs: &[IntVec]) -> Vec<PairVec> {
    vs.iter().cloned().map(PairVec).collect()
}

/// Reproduces the `n ≤ 6` entries of the counts table, and `HYP_n = CUT_n`.
pub fn verify_table1_small() -> Result<Report, CatalogError> {
    let table = counts()?;
    let parts: Vec<Result<Report, CatalogError>> = (3..=8)
        .into_par_iter()
        .map(|n| table1_for(&table, n))
        .collect();
    let mut report = Report::default();
    for p in parts {
        report.extend(p?);
    }
    Ok(report)
}

fn table1_for(table: &[CountsRow], n: usize) -> Result<Report, CatalogError> {
    let mut r = Report::default();
    // one check for the count, one for the orbit count
    let counted = |r: &mut Report, object: &str, kind: &str, count: usize, orbits: usize| {
        let (c, o) = count_of(table, object, kind, n).unwrap_or_default();
        let row = format!("{object}_{n}");
        if object == "HYPP" && kind == "facets" && n == 6 && c != count as u64 {
            r.push(
                "t1",
                &row,
                "facets (published value not used as ground truth)",
                c.to_string(),
                count.to_string(),
                Status::Note,
            );
        } else {
            r.compare("t1", &row, kind, c, count);
        }
        r.compare("t1", &row, &format!("{kind} orbits"), o, orbits);
    };
    let sym = Group::Sym(n);
    let ares = Group::ARes(n);
    if n <= 6 {
        let cone = cut_cone(n)?;
        let rays: Vec<CutVec> = cuts(n, false);
        counted(&mut r, "CUT", "rays", rays.len(), orbit_sizes(&rays, &sym).len());
        let facets = cone.facets()?;
        let orbits = orbit_sizes(&pair_vecs(facets), &sym).len();
        counted(&mut r, "CUT", "facets", facets.len(), orbits);
        r.extend(hyp_equals_cut(n, facets)?);

        let met = met_cone(n)?;
        let met_rays = met.rays()?;
        let orbits = orbit_sizes(&pair_vecs(met_rays), &sym).len();
        counted(&mut r, "MET", "rays", met_rays.len(), orbits);
        // irredundancy: the facets of the cone spanned by the computed rays
        let back = dd_convert(&PolyCone::from_rays(met.dim, met_rays.to_vec()), Target::Facets)?;
        let mut given: Vec<IntVec> = met.facets()?.iter().cloned().map(primitive).collect();
        given.sort();
        r.compare(
            "t1",
            &format!("MET_{n}"),
            "triangle inequalities irredundant",
            given.len(),
            if back.facets()? == given.as_slice() {
                back.facets()?.len()
            } else {
                0
            },
        );

        let verts: Vec<CutVec> = cuts(n, true);
        let points: Vec<_> = verts.iter().map(|c| c.to_dist().d).collect();
        let poly = hull(&points)?;
        let orbits = orbit_sizes(&verts, &ares).len();
        counted(&mut r, "HYPP", "vertices", poly.vertices.len(), orbits);
        let hf: Vec<HomFacet> = poly.homogeneous_facets().iter().cloned().map(HomFacet).collect();
        counted(&mut r, "HYPP", "facets", hf.len(), orbit_sizes(&hf, &ares).len());
    }
    let met = met_family(n);
    counted(&mut r, "MET", "facets", met.len(), orbit_sizes(&met, &sym).len());
    Ok(r)
}

/// Compares the `CUT_n` facets with the hypermetric inequalities with
/// `|b_i| ≤ 2`. Every such inequality holds on every cut, and the facet-defining
/// ones are exactly the facets of `CUT_n`; so the system cuts out `CUT_n`.
fn hyp_equals_cut(n: usize, cut_facets: &[IntVec]) -> Result<Report, CatalogError> {
    let mut r = Report::default();
    let row = format!("HYP_{n}");
    let sym = Group::Sym(n);
    let dim = n * (n - 1) / 2;
    let all_cuts = cuts(n, false);
    let mut facet_like: BTreeSet<IntVec> = BTreeSet::new();
    let mut total = 0usize;
    let mut valid = 0usize;
    for rep in gen_b(n, 2, Family::Cone) {
        if rep.is_trivial() {
            continue;
        }
        for b in crate::symmetry::orbit(&rep, &sym, true).members.unwrap() {
            total += 1;
            if all_cuts
                .iter()
                .all(|c| eval_on_cut(&b, c).map_or(false, |v| v <= b.rhs))
            {
                valid += 1;
            }
            if cut_rank(&b) + 1 == dim {
                facet_like.insert(primitive(b.cone_normal()));
            }
        }
    }
    r.compare("t1", &row, "b-inequalities with |b_i| <= 2 valid on all cuts", total, valid);
    let cut_set: BTreeSet<IntVec> = cut_facets.iter().cloned().collect();
    r.compare(
        "t1",
        &row,
        "facet-defining b-inequalities with |b_i| <= 2 = CUT facets",
        cut_set.len(),
        if facet_like == cut_set {
            facet_like.len()
        } else {
            facet_like.intersection(&cut_set).count()
        },
    );
    Ok(r)
}

fn binequality(row: &FacetOrbitRow) -> Result<BInequality, CatalogError> {
    BInequality::new(row.b.clone()).map_err(|e| CatalogError::Parse {
        file: "catalog".into(),
        line: 0,
        msg: format!("{}: {e}", row.label),
    })
}

/// Rows of the `HYP_8` facet table, recomputed one by one, then the
/// switching-class partition and the total.
pub fn verify_table2() -> Result<Report, CatalogError> {
    let rows = hyp8_facets()?;
    let ineqs: Vec<BInequality> = rows.iter().map(binequality).collect::<Result<_, _>>()?;
    let parts: Vec<Report> = rows
        .par_iter()
        .zip(&ineqs)
        .map(|(row, b)| table2_row(row, b))
        .collect();
    let mut r = Report::default();
    r.compare("t2", "all", "rows", 86, rows.len());
    for p in parts {
        r.extend(p);
    }

    let classes = merge_classes(&ineqs);
    r.compare("t2", "all", "switching classes", 22, classes.len());
    // computed class of each row, numbered by first appearance
    let canon: Vec<Vec<i64>> = ineqs
        .iter()
        .map(|b| crate::symmetry::canonical_b(&b.b, &Group::ARes(8)))
        .collect();
    let mut first_seen: HashMap<&Vec<i64>, usize> = HashMap::new();
    for (k, c) in canon.iter().enumerate() {
        let next = first_seen.len() + 1;
        let id = *first_seen.entry(c).or_insert(next);
        let row = &rows[k];
        r.compare("t2", &row.label, "switching class", row.class, id);
        let first = canon[..k].iter().all(|c2| c2 != c);
        r.compare("t2", &row.label, "boldface first of class", row.boldface, first);
    }

    let total_table: u64 = rows.iter().map(|r| 56 * r.size_div).sum();
    let total: u128 = ineqs.iter().map(|b| orbit_size_sym(&b.b)).sum();
    let hyp8 = count_of(&counts()?, "HYP", "facets", 8).unwrap_or_default();
    r.compare("t2", "all", "sum of 56*size", hyp8.0, total_table);
    r.compare("t2", "all", "total facets", hyp8.0, total);
    r.compare("t2", "all", "orbits", hyp8.1, rows.len());
    Ok(r)
}

fn table2_row(row: &FacetOrbitRow, b: &BInequality) -> Report {
    let mut r = Report::default();
    let label = &row.label;
    r.compare("t2", label, "sum b", 1, b.sum());
    let size = orbit_size_sym(&b.b);
    let size_div = if size % 56 == 0 {
        (size / 56).to_string()
    } else {
        format!("{size}/56")
    };
    r.compare("t2", label, "orbit size/56", row.size_div, size_div);
    let inc = cut_incidence_count(b, false);
    r.compare("t2", label, "cut incidence", row.incidence[0], inc);
    let rank = cut_rank(b);
    r.compare("t2", label, "cut rank", row.cut_rank.unwrap_or(0), rank);
    let inc_total: u64 = row.incidence.iter().sum();
    r.compare("t2", label, "simplicial marker", row.simplicial, inc_total == 27);
    if row.simplicial {
        // the incident cuts must be linearly independent
        r.compare("t2", label, "incident cuts independent", inc, rank);
        if row.incidence[1..].iter().all(|&x| x == 0) {
            r.compare("t2", label, "27 incident cuts of rank 27", "27/27", format!("{inc}/{rank}"));
        }
    }
    r
}

fn normalised_homogeneous(b: &BInequality) -> Vec<i64> {
    let mut v = if b.sum() == 1 {
        b.b.clone()
    } else {
        b.b.iter().map(|x| -x).collect()
    };
    v.sort();
    v
}

/// Rows of the `HYPP_8` facet table, and the correspondence of its classes
/// with the switching classes of the cone facets.
pub fn verify_table4() -> Result<Report, CatalogError> {
    let rows = hypp8_facets()?;
    let cone_rows = hyp8_facets()?;
    let mut r = Report::default();
    r.compare("t4", "all", "rows", 22, rows.len());
    let parts: Vec<(Report, BTreeSet<Vec<i64>>, u128)> =
        rows.par_iter().map(table4_row).collect::<Result<_, _>>()?;

    let mut cone_classes: BTreeMap<usize, BTreeSet<Vec<i64>>> = BTreeMap::new();
    for row in &cone_rows {
        let mut v = row.b.clone();
        v.sort();
        cone_classes.entry(row.class).or_default().insert(v);
    }
    let mut used: BTreeMap<usize, &str> = BTreeMap::new();
    let mut total: u128 = 0;
    for (row, (part, homogeneous, size)) in rows.iter().zip(parts) {
        r.extend(part);
        total += size;
        let matched: Vec<usize> = cone_classes
            .iter()
            .filter(|(_, set)| **set == homogeneous)
            .map(|(&k, _)| k)
            .collect();
        let computed = match matched.as_slice() {
            [k] => {
                let clash = used.insert(*k, &row.label);
                if clash.is_some() {
                    format!("F{k}.* (already matched)")
                } else {
                    format!("F{k}.*")
                }
            }
            _ => format!("{} matches", matched.len()),
        };
        let expected = match matched.as_slice() {
            [k] => format!("F{k}.*"),
            _ => "one class".into(),
        };
        r.compare("t4", &row.label, "homogeneous members = cone class", expected, computed);
    }
    r.compare("t4", "all", "cone classes matched", cone_classes.len(), used.len());
    let total_table: u64 = rows.iter().map(|r| 32 * r.size_div).sum();
    let hypp8 = count_of(&counts()?, "HYPP", "facets", 8).unwrap_or_default();
    r.compare("t4", "all", "sum of 32*size", hypp8.0, total_table);
    r.compare("t4", "all", "total facets", hypp8.0, total);
    r.compare("t4", "all", "orbits", hypp8.1, rows.len());
    Ok(r)
}

fn table4_row(
    row: &FacetOrbitRow,
) -> Result<(Report, BTreeSet<Vec<i64>>, u128), CatalogError> {
    let mut r = Report::default();
    let label = &row.label;
    let b = binequality(row)?;
    let reps = sym_reps_in_switching_class(&b.b);
    let class = merge_classes(&reps);
    let size: u128 = class.iter().map(|c| c.total).sum();
    r.compare("t4", label, "single switching class", 1, class.len());
    let size_div = if size % 32 == 0 {
        (size / 32).to_string()
    } else {
        format!("{size}/32")
    };
    r.compare("t4", label, "orbit size/32", row.size_div, size_div);
    r.compare("t4", label, "Sym classes", row.sym_classes.unwrap_or(0), reps.len());
    let tight = tight_cuts(&b, true);
    r.compare("t4", label, "cut incidence incl. zero", row.incidence[0], tight.len());
    let inc_total: u64 = row.incidence.iter().sum();
    r.compare("t4", label, "simplicial marker", row.simplicial, inc_total == 28);
    if row.simplicial {
        let hom: Vec<IntVec> = tight
            .iter()
            .map(|c| {
                let mut v = vec![BigInt::from(1)];
                v.extend(c.to_int());
                v
            })
            .collect();
        r.compare(
            "t4",
            label,
            "incident cuts affinely independent",
            tight.len(),
            rank_int(&hom),
        );
    }
    let homogeneous: BTreeSet<Vec<i64>> = reps
        .iter()
        .filter(|b| b.is_homogeneous())
        .map(normalised_homogeneous)
        .collect();
    Ok((r, homogeneous, size))
}

/// Arithmetic cross-checks between the stored totals and tables.
pub fn verify_totals() -> Result<Report, CatalogError> {
    let mut r = Report::default();
    let table = counts()?;

    let rays = Tsv::load("hyp8_rays_by_polytope.tsv", 3)?;
    let mut orbits = 0u64;
    let mut count = 0u64;
    let mut total = (0u64, 0u64);
    for (line, c) in &rays.rows {
        let (o, n): (u64, u64) = (rays.num(*line, &c[1])?, rays.num(*line, &c[2])?);
        if c[0] == "total" {
            total = (n, o);
        } else {
            orbits += o;
            count += n;
        }
    }
    let hyp8 = count_of(&table, "HYP", "rays", 8).unwrap_or_default();
    r.compare("totals", "HYP_8", "rays by polytope", total.0, count);
    r.compare("totals", "HYP_8", "ray orbits by polytope", total.1, orbits);
    r.compare("totals", "HYP_8", "rays vs counts table", hyp8.0, count);
    r.compare("totals", "HYP_8", "ray orbits vs counts table", hyp8.1, orbits);
    let cut8 = count_of(&table, "CUT", "rays", 8).unwrap_or_default();
    let interval = rays
        .rows
        .iter()
        .find(|(_, c)| c[0] == "[0,1]")
        .map(|(_, c)| c[2].clone())
        .unwrap_or_default();
    r.compare("totals", "HYP_8", "[0,1] rays are the nonzero cuts", (1u64 << 7) - 1, &interval);
    r.compare("totals", "HYP_8", "[0,1] rays vs CUT_8", cut8.0.to_string(), interval);

    let fam = Tsv::load("hypp8_vertices_by_family.tsv", 2)?;
    let mut sum = 0u64;
    let mut expected = 0u64;
    let mut delaunay_23 = 0u64;
    for (line, c) in &fam.rows {
        let o: u64 = fam.num(*line, &c[1])?;
        match c[0].as_str() {
            "total" => expected = o,
            "2_21/3_21" => {
                delaunay_23 = o;
                sum += o
            }
            _ => sum += o,
        }
    }
    let hypp8 = count_of(&table, "HYPP", "vertices", 8).unwrap_or_default();
    r.compare("totals", "HYPP_8", "vertex orbits by family", expected, sum);
    r.compare("totals", "HYPP_8", "vertex orbits vs counts table", hypp8.1, sum);

    let t5 = Tsv::load("hypp8_vertices_221_321.tsv", 8)?;
    let group_order: u64 = (1 << 7) * (1..=8).product::<u64>();
    r.compare("totals", "t5", "rows", delaunay_23, t5.rows.len());
    for (line, c) in &t5.rows {
        let stab: u64 = t5.num(*line, &c[1])?;
        let size: u64 = t5.num(*line, &c[2])?;
        r.compare("totals", &c[0], "|stab|*10752*size = 2^7*8!", group_order, stab * 10752 * size);
    }

    let t3 = Tsv::load("hypp7_incidence.tsv", 8)?;
    let v1 = t3
        .rows
        .iter()
        .find(|(_, c)| c[0] == "V1")
        .ok_or_else(|| t3.err(0, "missing row V1"))?;
    let entries: Vec<u64> = v1.1[1..]
        .iter()
        .map(|x| t3.num(v1.0, x))
        .collect::<Result<_, _>>()?;
    let hyp7 = count_of(&table, "HYP", "facets", 7).unwrap_or_default();
    r.compare("totals", "t3 V1", "row sum = HYP_7 facets", hyp7.0, entries.iter().sum::<u64>());
    r.compare("totals", "t3 V1", "F1 = 3*C(7,3)", 3 * 35, entries[0]);
    let hypp7 = count_of(&table, "HYPP", "facets", 7).unwrap_or_default();
    r.compare("totals", "t3", "columns = HYPP_7 facet orbits", hypp7.1, entries.len());
    let hypp7v = count_of(&table, "HYPP", "vertices", 7).unwrap_or_default();
    r.compare("totals", "t3", "rows = HYPP_7 vertex orbits", hypp7v.1, t3.rows.len());

    let t6 = Tsv::load("delaunay_simplices7.tsv", 5)?;
    for (_, c) in &t6.rows {
        r.push(
            "totals",
            &c[0],
            "Bar_S facets (stored, not verified)",
            with_orbits(&c[3], &c[4]),
            "-".into(),
            Status::Note,
        );
    }
    Ok(r)
}

fn gcd_all(xs: impl IntoIterator<Item = u128>) -> u128 {
    xs.into_iter().fold(0, |a, b| a.gcd(&b))
}

/// gcd of facet orbit sizes: recomputed for `n ≤ 6`, from the table for 8.
pub fn verify_gcd() -> Result<Report, CatalogError> {
    let t = Tsv::load("gcd.tsv", 2)?;
    let mut expected: BTreeMap<usize, u128> = BTreeMap::new();
    for (line, c) in &t.rows {
        expected.insert(t.num(*line, &c[0])?, t.num(*line, &c[1])?);
    }
    let mut r = Report::default();
    for n in 3..=6 {
        let cone = cut_cone(n)?;
        let sizes = orbit_sizes(&pair_vecs(cone.facets()?), &Group::Sym(n));
        let g = gcd_all(sizes.iter().map(|&s| s as u128));
        let mut sizes = sizes;
        sizes.sort();
        r.compare(
            "gcd",
            &format!("n={n}"),
            &format!("gcd of facet orbit sizes {sizes:?}"),
            expected.get(&n).copied().unwrap_or(0),
            g,
        );
    }
    if let Some(e7) = expected.get(&7) {
        r.push(
            "gcd",
            "n=7",
            "needs the full HYP_7 facet list",
            e7.to_string(),
            "-".into(),
            Status::Note,
        );
    }
    let rows = hyp8_facets()?;
    let g = gcd_all(rows.iter().map(|row| orbit_size_sym(&row.b)));
    r.compare(
        "gcd",
        "n=8",
        "gcd of catalog orbit sizes",
        expected.get(&8).copied().unwrap_or(0),
        g,
    );
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableId {
    T1,
    T2,
    T4,
    Totals,
    Gcd,
    All,
}

impl std::str::FromStr for TableId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "t1" => TableId::T1,
            "t2" => TableId::T2,
            "t4" => TableId::T4,
            "totals" => TableId::Totals,
            "gcd" => TableId::Gcd,
            "all" => TableId::All,
            _ => return Err(format!("unknown table {s:?}")),
        })
    }
}

pub fn verify(table: TableId) -> Result<Report, CatalogError> {
    let mut r = Report::default();
    let all = table == TableId::All;
    if all || table == TableId::T1 {
        r.extend(verify_table1_small()?);
    }
    if all || table == TableId::T2 {
        r.extend(verify_table2()?);
    }
    if all || table == TableId::T4 {
        r.extend(verify_table4()?);
    }
    if all || table == TableId::Totals {
        r.extend(verify_totals()?);
    }
    if all || table == TableId::Gcd {
        r.extend(verify_gcd()?);
    }
    Ok(r)
}
