//! The `sweeplab` command line.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bisect::{bisec_exact, bisect_by_bites, bisection_bound, symmetry_group, Bisection, SymmetryGroup};
use crate::cobordism::{
    cover_bound_data, cover_graph, lifted_bound, lifted_sweepout, token_game, Cover, IntersectionGraph, ReleasePolicy,
};
use crate::error::{Error, Result};
use crate::folner::{
    analytic_profile, profile_auto, profile_exact_with, profile_heuristic, ExactOptions, FolnerProfileTable,
    ProfileFunction, DEFAULT_SUBSET_BUDGET,
};
use crate::graph::{Graph, VertexSet};
use crate::groups::{cayley_ball, make_family, schreier_graph, CosetAction, Family, FamilyKind, InfiniteFamily};
use crate::sweepout::{
    approx, cutwidth_exact, folsw_bound, subextensive_series, sweepout_profile, sweepout_recursive, write_series_csv,
    Convention, SeriesOptions, Sweepout, CUTWIDTH_EXACT_CAP,
};

#[derive(Parser, Debug)]
#[command(name = "sweeplab", version, about = "Sweepout widths of Schreier coset graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true, env = "SWEEPLAB_THREADS")]
    pub threads: Option<usize>,
    /// CSV destination; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Maximum connected sets visited by exact profile search.
    #[arg(long = "budget-subsets", global = true, default_value_t = DEFAULT_SUBSET_BUDGET)]
    pub budget_subsets: u64,
    /// Cosets above which the symmetry group is sampled.
    #[arg(long = "cap-q", global = true, default_value_t = crate::bisect::DEFAULT_Q_CAP)]
    pub cap_q: usize,
    #[arg(long, global = true, default_value = "edge")]
    pub convention: Convention,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Exact,
    Recursive,
    Heuristic,
    Auto,
    Natural,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Release {
    Leaving,
    Never,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Folner profile table.
    Profile {
        #[arg(long)]
        family: String,
        #[arg(long)]
        vmax: usize,
        #[arg(long, value_enum, default_value = "auto")]
        method: Method,
    },
    /// Bisect the whole coset space by bites, and exactly when small.
    Bisect {
        #[arg(long)]
        family: String,
    },
    /// Sweepout of the whole coset space.
    Sweepout {
        #[arg(long)]
        family: String,
        #[arg(long, value_enum, default_value = "recursive")]
        method: Method,
        /// Also write the ordering in sweepout text format.
        #[arg(long)]
        order_out: Option<PathBuf>,
    },
    /// Series bound for a lattice (`z:D`) or a finite family.
    Bound {
        #[arg(long)]
        family: String,
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
    },
    /// Constructive widths across a family.
    Report {
        /// `cyclic`, `torus`, `torus:3`, `heis`, `lamp` or `dihedral`.
        #[arg(long)]
        family: String,
        /// Family parameters (side lengths for tori).
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
    },
    /// Cover of an intersection graph and the lifted sweepout.
    Cover {
        /// Intersection graph file.
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        family: String,
        /// Coset sweepout to lift.
        #[arg(long, value_enum, default_value = "natural")]
        method: Method,
        /// Also write the cover in graph text format.
        #[arg(long)]
        cover_out: Option<PathBuf>,
    },
    /// Token game on the cover with the lifted sweepout.
    Tokens {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        family: String,
        #[arg(long, value_enum, default_value = "natural")]
        method: Method,
        #[arg(long, value_enum, default_value = "leaving")]
        release: Release,
        /// Token supply; defaults to k²·w + k.
        #[arg(long)]
        tokens: Option<u128>,
    },
}

/// Parse arguments, run, and return the exit status: 0 on success, 1 on a
/// usage or input error, 2 when a checked inequality fails.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                1
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    let outcome = match cli.common.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(Error::Precondition(e.to_string())),
        },
        None => execute(&cli),
    };
    match outcome.and_then(|out| deliver(&cli.common, out, stdout, stderr)) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_invariant_violation() {
                2
            } else {
                1
            }
        }
    }
}

struct Output {
    csv: Vec<u8>,
    summary: String,
}

fn deliver(common: &Common, out: Output, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    match &common.out {
        Some(path) => std::fs::write(path, &out.csv)?,
        None => stdout.write_all(&out.csv)?,
    }
    stderr.write_all(out.summary.as_bytes())?;
    Ok(())
}

fn finite(desc: &str) -> Result<(CosetAction, Graph)> {
    let action = make_family(&Family::parse(desc)?)?;
    let g = schreier_graph(&action);
    Ok((action, g))
}

fn exact_options(common: &Common, q: Option<&SymmetryGroup>) -> ExactOptions {
    ExactOptions {
        budget: common.budget_subsets,
        anchor: q.filter(|q| q.is_transitive()).map(|_| 0),
        within: None,
    }
}

fn series_options(common: &Common) -> SeriesOptions {
    SeriesOptions {
        exact: exact_options(common, None),
        q_cap: common.cap_q,
        seed: common.seed,
        convention: common.convention,
        ..SeriesOptions::default()
    }
}

fn execute(cli: &Cli) -> Result<Output> {
    let common = &cli.common;
    let mut csv = Vec::new();
    let mut summary = String::new();
    match &cli.command {
        Command::Profile { family, vmax, method } => {
            let table = if let Ok(inf) = family.parse::<InfiniteFamily>() {
                if *method != Method::Exact && *method != Method::Auto {
                    return Err(Error::Precondition("infinite families support only exact profiles".into()));
                }
                let ball = cayley_ball(inf, vmax + 1, 1_000_000)?;
                let opts = ExactOptions { anchor: Some(0), within: Some(ball.interior.clone()), budget: common.budget_subsets };
                profile_exact_with(&ball.graph, *vmax, &opts)?
            } else {
                let (action, g) = finite(family)?;
                let q = symmetry_group(&action, common.cap_q, common.seed);
                let opts = exact_options(common, Some(&q));
                match method {
                    Method::Exact => profile_exact_with(&g, *vmax, &opts)?,
                    Method::Heuristic => profile_heuristic(&g, *vmax, common.seed)?,
                    Method::Auto => profile_auto(&g, *vmax, *vmax, &opts, common.seed)?,
                    other => return Err(Error::Precondition(format!("method {other:?} does not apply to profiles"))),
                }
            };
            table.write_csv(&mut csv)?;
            let last = table.ratio(table.v_max());
            let _ = writeln!(
                summary,
                "{family}: Φ({}) = {last}, {:?}, exact through V = {}",
                table.v_max(),
                table.kind(),
                table.exact_through()
            );
        }
        Command::Bisect { family } => {
            let (action, g) = finite(family)?;
            let n = g.vertex_count();
            let q = symmetry_group(&action, common.cap_q, common.seed);
            let profile = sweepout_profile(&g, &q, &series_options(common))?;
            let a = VertexSet::full(n);
            let bound = bisection_bound(&profile, n);
            let mut rows: Vec<(&str, Bisection)> = vec![("bites", bisect_by_bites(&g, &a, &profile, &q)?)];
            if n <= crate::bisect::BISEC_EXACT_CAP {
                rows.push(("exact", bisec_exact(&g, &a)?));
            }
            let mut w = csv::Writer::from_writer(&mut csv);
            w.write_record(["method", "size", "b1_size", "b2_size", "cut", "bound", "b1"])?;
            for (method, b) in &rows {
                w.write_record([
                    method.to_string(),
                    n.to_string(),
                    b.b1.len().to_string(),
                    b.b2.len().to_string(),
                    b.cut_size().to_string(),
                    bound.to_string(),
                    join(b.b1.iter()),
                ])?;
                let _ = writeln!(summary, "{family} {method}: cut {} (bound {bound})", b.cut_size());
            }
            w.flush()?;
        }
        Command::Sweepout { family, method, order_out } => {
            let (action, g) = finite(family)?;
            let n = g.vertex_count();
            let s = coset_sweepout(&action, &g, *method, common, &mut summary)?;
            if let Some(path) = order_out {
                std::fs::write(path, s.to_text())?;
            }
            let mut w = csv::Writer::from_writer(&mut csv);
            w.write_record(["method", "convention", "size", "width", "order"])?;
            w.write_record([
                format!("{method:?}").to_lowercase(),
                common.convention.to_string(),
                n.to_string(),
                s.width(common.convention).to_string(),
                join(s.order().iter().copied()),
            ])?;
            w.flush()?;
            let _ = writeln!(summary, "{family}: {} width {}", common.convention, s.width(common.convention));
        }
        Command::Bound { family, sizes } => {
            let mut w = csv::Writer::from_writer(&mut csv);
            w.write_record(["size", "folsw_num", "folsw_den", "folsw"])?;
            let emit = |w: &mut csv::Writer<&mut Vec<u8>>, p: &dyn ProfileFunction, size: usize| -> Result<()> {
                let b = folsw_bound(p, size);
                w.write_record([size.to_string(), b.numer().to_string(), b.denom().to_string(), format!("{:.6}", approx(&b))])?;
                Ok(())
            };
            if let Ok(inf) = family.parse::<InfiniteFamily>() {
                let p = analytic_profile(inf)?;
                if sizes.is_empty() {
                    return Err(Error::Precondition("--sizes is required for an infinite family".into()));
                }
                for &size in sizes {
                    emit(&mut w, &p, size)?;
                }
            } else {
                let (action, g) = finite(family)?;
                let q = symmetry_group(&action, common.cap_q, common.seed);
                let table = sweepout_profile(&g, &q, &series_options(common))?;
                let sizes = if sizes.is_empty() { vec![g.vertex_count()] } else { sizes.clone() };
                for size in sizes {
                    emit(&mut w, &table, size)?;
                }
            }
            w.flush()?;
            let _ = writeln!(summary, "{family}: series bound evaluated");
        }
        Command::Report { family, sizes } => {
            let kind: FamilyKind = family.parse()?;
            let rows = subextensive_series(kind, sizes, &series_options(common))?;
            write_series_csv(&rows, &mut csv)?;
            for r in &rows {
                let _ = writeln!(summary, "|C| = {}: width {} ({:.4} per coset)", r.size, r.width_constructive, r.width_over_size);
            }
        }
        Command::Cover { graph, family, method, cover_out } => {
            let (base, action, cover) = load_cover(graph, family)?;
            let coset_graph = schreier_graph(&action);
            let s = coset_sweepout(&action, &coset_graph, *method, common, &mut summary)?;
            let w = s.width_vertex();
            let data = cover_bound_data(&base, &action, &cover, w);
            let lifted = lifted_sweepout(&base, &cover, &s)?;
            let bound = lifted_bound(&data, w);
            if lifted.width_vertex() as u128 > bound {
                return Err(Error::InvariantViolation(format!(
                    "lifted vertex width {} exceeds {bound}",
                    lifted.width_vertex()
                )));
            }
            let cover_exact = if cover.graph.vertex_count() <= CUTWIDTH_EXACT_CAP {
                Some(cutwidth_exact(&cover.graph)?.0)
            } else {
                None
            };
            if let Some(path) = cover_out {
                std::fs::write(path, cover.graph.to_text())?;
            }
            let mut wr = csv::Writer::from_writer(&mut csv);
            wr.write_record([
                "p", "c", "k_quasi", "k", "coset_width", "lifted_width", "lifted_bound", "m_budget", "cover_cutwidth",
            ])?;
            wr.write_record([
                data.p.to_string(),
                data.c.to_string(),
                data.k_quasi.to_string(),
                data.k.to_string(),
                w.to_string(),
                lifted.width_vertex().to_string(),
                bound.to_string(),
                data.m_budget.to_string(),
                cover_exact.map(|v| v.to_string()).unwrap_or_default(),
            ])?;
            wr.flush()?;
            let _ = writeln!(summary, "cover of {} vertices: lifted vertex width {} ≤ {bound}", cover.graph.vertex_count(), lifted.width_vertex());
        }
        Command::Tokens { graph, family, method, release, tokens } => {
            let (base, action, cover) = load_cover(graph, family)?;
            let coset_graph = schreier_graph(&action);
            let s = coset_sweepout(&action, &coset_graph, *method, common, &mut summary)?;
            let lifted = lifted_sweepout(&base, &cover, &s)?;
            let k = cover.graph.max_degree().max(1);
            let w = lifted.width_vertex();
            let m = tokens.unwrap_or(crate::cobordism::stabilization_budget(k, w).m);
            let policy = match release {
                Release::Leaving => ReleasePolicy::LeavingBoundary,
                Release::Never => ReleasePolicy::Never,
            };
            let trace = token_game(&cover.graph, &cover.blue, &lifted, k, m, policy)?;
            let mut wr = csv::Writer::from_writer(&mut csv);
            wr.write_record(["step", "vertex", "color", "free_before", "attached_after", "blue_in_boundary"])?;
            for (j, st) in trace.steps.iter().enumerate() {
                wr.write_record([
                    j.to_string(),
                    st.vertex.to_string(),
                    if st.blue { "blue" } else { "red" }.to_string(),
                    st.free_before.to_string(),
                    st.attached_after.to_string(),
                    st.blue_in_boundary.to_string(),
                ])?;
            }
            wr.flush()?;
            match trace.failed_at {
                None => {
                    let _ = writeln!(summary, "success with {m} tokens (k = {k}, w = {w}, peak {})", trace.max_attached);
                }
                Some(j) => {
                    let _ = writeln!(summary, "ran out of tokens at step {j} with {m} tokens (k = {k}, w = {w})");
                    if tokens.is_none() && policy == ReleasePolicy::LeavingBoundary {
                        return Err(Error::InvariantViolation("token game failed with the full budget".into()));
                    }
                }
            }
        }
    }
    Ok(Output { csv, summary })
}

fn load_cover(path: &PathBuf, family: &str) -> Result<(IntersectionGraph, CosetAction, Cover)> {
    let base = IntersectionGraph::from_text(&std::fs::read_to_string(path)?)?;
    let action = make_family(&Family::parse(family)?)?;
    let cover = cover_graph(&base, &action)?;
    Ok((base, action, cover))
}

fn coset_sweepout(action: &CosetAction, g: &Graph, method: Method, common: &Common, summary: &mut String) -> Result<Sweepout> {
    let n = g.vertex_count();
    match method {
        Method::Natural => Sweepout::new(g, (0..n).collect()),
        Method::Exact => Ok(cutwidth_exact(g)?.1),
        Method::Recursive => {
            let q = symmetry_group(action, common.cap_q, common.seed);
            let profile: FolnerProfileTable = sweepout_profile(g, &q, &series_options(common))?;
            let rec = sweepout_recursive(g, &VertexSet::full(n), &profile, &q)?;
            let bound = folsw_bound(&profile, n);
            let _ = writeln!(
                summary,
                "recursive: {} bisections, chain bound {}, series bound {:.3}",
                rec.nodes,
                rec.chain_bound,
                approx(&bound)
            );
            Ok(rec.sweepout)
        }
        other => Err(Error::Precondition(format!("method {other:?} does not produce a sweepout"))),
    }
}

fn join<I: Iterator<Item = usize>>(it: I) -> String {
    it.map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}
