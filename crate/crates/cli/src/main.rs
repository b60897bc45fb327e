use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use hycone::catalog::{self, TableId};
use hycone::exactla::format_rat;
use hycone::formats::{
    self, ConeFile, EdgeIneqFile, HullFile, InequalityFile, RepartitionFile,
};
use hycone::graphs::{check_valid, lift_ineq, CHECK_BUDGET};
use hycone::hypfamilies::{cuts, gen_b, met_family, metp_family, BInequality, Target as Family};
use hycone::lattice::{max_scale, member_hyp, member_hypp};
use hycone::polyhedra::{dd_convert, hull, Target};
use hycone::repartition::{two_triangulations, RepartitionConfig};
use hycone::symmetry::{
    canonical_b, orbit, orbit_size_sym, sym_reps_in_switching_class, factorial, Group,
};

#[derive(Parser)]
#[command(name = "hycone", version, about = "Hypermetric cones, polytopes and their symmetries")]
struct Cli {
    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum IneqFamily {
    Hyp,
    Hypp,
    Met,
    Metp,
}

#[derive(Clone, Copy, ValueEnum)]
enum MemberFamily {
    Hyp,
    Hypp,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConvertTo {
    Rays,
    Facets,
}

#[derive(Subcommand)]
enum Command {
    /// List b-inequalities, one per Sym(n)-orbit for hyp and hypp.
    GenIneq {
        #[arg(long, value_enum)]
        family: IneqFamily,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        max_abs: i64,
    },
    /// Cut semimetrics: cone rays, or with --polytope the vertices of the cut polytope.
    Cuts {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        polytope: bool,
    },
    /// Rays to facets or facets to rays.
    Convert {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        to: ConvertTo,
    },
    /// Convex hull of a point set.
    Hull {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Membership of a distance vector in HYP_n or HYPP_n.
    Member {
        #[arg(long, value_enum)]
        family: MemberFamily,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        witness: bool,
    },
    /// Largest multiple of a distance vector inside HYPP_n.
    MaxScale {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Orbit of a b-vector under Sym(n), or with --switch under switchings too.
    Orbit {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long)]
        switch: bool,
    },
    /// Lift an inequality on K_k to a graph along edge-disjoint paths.
    Lift {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        ineq: PathBuf,
        #[arg(long)]
        paths: PathBuf,
    },
    /// Affine relation and the two triangulations of n+2 points in Z^n.
    Repartition {
        #[arg(long)]
        points: PathBuf,
    },
    /// Check the embedded tables.
    Verify {
        #[arg(long, default_value = "all")]
        table: String,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

struct Output {
    text: String,
    success: bool,
}

fn ok(text: String) -> Result<Output> {
    Ok(Output {
        text,
        success: true,
    })
}

fn parse_b(s: &str, n: usize) -> Result<Vec<i64>> {
    let b: Vec<i64> = s
        .trim_matches(|c| c == '(' || c == ')' || c == '[' || c == ']')
        .split(',')
        .map(|x| x.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .with_context(|| format!("bad b list {s:?}"))?;
    if b.len() != n {
        bail!("b has {} entries, expected {n}", b.len());
    }
    Ok(b)
}

fn join(b: &[i64]) -> String {
    b.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

fn run(command: Command) -> Result<Output> {
    match command {
        Command::GenIneq { family, n, max_abs } => {
            if n < 2 {
                bail!("n must be at least 2");
            }
            let list: Vec<BInequality> = match family {
                IneqFamily::Hyp => gen_b(n, max_abs, Family::Cone),
                IneqFamily::Hypp => gen_b(n, max_abs, Family::Polytope),
                IneqFamily::Met => met_family(n),
                IneqFamily::Metp => metp_family(n),
            };
            let files: Vec<InequalityFile> = list
                .iter()
                .filter(|b| !b.is_trivial())
                .map(InequalityFile::from_b)
                .collect();
            ok(formats::to_json(&files))
        }
        Command::Cuts { n, polytope } => {
            if !(2..=63).contains(&n) {
                bail!("n must be between 2 and 63");
            }
            if polytope {
                let pts: Vec<Vec<String>> = cuts(n, true)
                    .iter()
                    .map(|c| c.to_dist().d.iter().map(format_rat).collect())
                    .collect();
                ok(formats::to_json(&pts))
            } else {
                let rays = cuts(n, false).iter().map(|c| c.to_int()).collect();
                let cone = hycone::polyhedra::PolyCone::from_rays(n * (n - 1) / 2, rays);
                ok(formats::to_json(&ConeFile::from_cone(&cone)))
            }
        }
        Command::Convert { input, to } => {
            let cone = formats::parse_cone(&read(&input)?)?;
            let target = match to {
                ConvertTo::Rays => Target::Rays,
                ConvertTo::Facets => Target::Facets,
            };
            let out = dd_convert(&cone, target)?;
            ok(formats::to_json(&ConeFile::from_cone(&out)))
        }
        Command::Hull { input } => {
            let pts = formats::parse_points(&read(&input)?)?;
            let p = hull(&pts)?;
            ok(formats::to_json(&HullFile::from_polytope(&p)))
        }
        Command::Member {
            family,
            input,
            witness,
        } => {
            let d = formats::parse_distance(&read(&input)?)?;
            let res = match family {
                MemberFamily::Hyp => member_hyp(&d)?,
                MemberFamily::Hypp => member_hypp(&d)?,
            };
            let mut text = if res.is_member() {
                "member\n".to_string()
            } else {
                "violated\n".to_string()
            };
            if witness {
                if let Some(b) = &res.witness {
                    text.push_str(&format!("witness\t{}\n", join(&b.b)));
                    text.push_str(&format!("rhs\t{}\n", b.rhs));
                    text.push_str(&format!("violation\t{}\n", format_rat(&res.violation)));
                }
            }
            Ok(Output {
                text,
                success: res.is_member(),
            })
        }
        Command::MaxScale { input } => {
            let d = formats::parse_distance(&read(&input)?)?;
            ok(format!("{}\n", format_rat(&max_scale(&d)?)))
        }
        Command::Orbit { n, b, switch } => {
            let b = BInequality::new(parse_b(&b, n)?)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            let class = join(&canonical_b(&b.b, &Group::ARes(n)));
            let mut text = String::from("group\trepresentative\torbit_size\tstabilizer\tclass\n");
            if switch {
                let o = orbit(&b, &Group::ARes(n), false);
                text.push_str(&format!(
                    "ARes\t{}\t{}\t{}\t{class}\n",
                    join(&o.representative.b),
                    o.size,
                    o.stabilizer
                ));
                for r in sym_reps_in_switching_class(&b.b) {
                    let size = orbit_size_sym(&r.b);
                    text.push_str(&format!(
                        "Sym\t{}\t{size}\t{}\t{class}\n",
                        join(&r.b),
                        factorial(n) / size
                    ));
                }
            } else {
                let o = orbit(&b, &Group::Sym(n), false);
                text.push_str(&format!(
                    "Sym\t{}\t{}\t{}\t{class}\n",
                    join(&o.representative.b),
                    o.size,
                    o.stabilizer
                ));
            }
            ok(text)
        }
        Command::Lift { graph, ineq, paths } => {
            let g = formats::parse_graph(&read(&graph)?)?;
            let (_, f) = formats::parse_edge_ineq(&read(&ineq)?)?;
            let sys = formats::parse_paths(&read(&paths)?)?;
            let lifted = lift_ineq(&f, &sys, &g)?;
            let text = formats::to_json(&EdgeIneqFile::from_ineq(g.n, &lifted.ineq));
            let mut success = true;
            if g.n <= CHECK_BUDGET {
                let v = check_valid(&lifted.ineq, &g)?;
                eprintln!(
                    "{}: max over cuts {} <= {}",
                    if v.valid { "valid" } else { "invalid" },
                    format_rat(&v.max_lhs),
                    format_rat(&lifted.ineq.rhs)
                );
                success = v.valid;
            }
            Ok(Output { text, success })
        }
        Command::Repartition { points } => {
            let pts = formats::parse_int_points(&read(&points)?)?;
            let config = RepartitionConfig::new(pts)?;
            let t = two_triangulations(&config)?;
            ok(formats::to_json(&RepartitionFile::new(&config, &t)))
        }
        Command::Verify { table } => {
            let id: TableId = table.parse().map_err(|e: String| anyhow::anyhow!(e))?;
            let report = catalog::verify(id)?;
            Ok(Output {
                text: report.to_tsv(),
                success: report.passed(),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs == 0 {
        eprintln!("error: --jobs must be positive");
        return ExitCode::from(2);
    }
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build_global()
    {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match run(cli.command) {
        Ok(out) => {
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, &out.text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                print!("{}", out.text);
            }
            if out.success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
