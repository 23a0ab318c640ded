//! Command-line front end.
//!
//! Exit codes: 0 solved, 1 usage, parse or input error, 2 a size cap was hit
//! (the weighted blocking `k` cap without `--allow-large-k`, or an oracle cap).

use std::ffi::OsString;
use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::blocking::{self, BlockingResult, Certificate};
use crate::digraph::{self, Digraph, Mode, Subpartition};
use crate::error::{Error, Result};
use crate::insolid::{build_tree_with_family, verify_tree};
use crate::oracle;
use crate::scalar::Scalar;
use crate::subpart::{self, ValuedSubpartition, Verdict};
use crate::Rational;

/// Largest `k` the blocking solvers accept without `--allow-large-k`.
pub const DEFAULT_K_CAP: u64 = 6;

#[derive(Debug, Parser)]
#[command(
    name = "arbblock",
    version,
    about = "Blocking k-union-arborescences in directed multigraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print one JSON object instead of the line report.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for the candidate sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Force a single thread.
    #[arg(long, global = true)]
    deterministic: bool,
}

#[derive(Debug, Args)]
struct Input {
    /// Graph file, or `-` for standard input.
    path: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether k arc-disjoint spanning arborescences exist.
    Exists {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        #[arg(long)]
        root: Option<usize>,
    },
    /// Minimum arc set destroying every k-union-(r-)arborescence.
    Block {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        #[arg(long)]
        root: Option<usize>,
        /// Minimize total weight instead of the number of arcs.
        #[arg(long)]
        weighted: bool,
        #[arg(long)]
        allow_large_k: bool,
    },
    /// Subpartition maximizing the sum of k minus in-degree.
    BestSubpart {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        /// 1 for no constraint, 2 for at least two members.
        #[arg(long, default_value_t = 1)]
        min_parts: usize,
        #[arg(long)]
        weighted: bool,
    },
    /// Subpartition with exactly t members minimizing the in-degree sum.
    FixedSubpart {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        weighted: bool,
    },
    /// Representative tree of the in-solid sets.
    ReprTree {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        weighted: bool,
    },
    /// With --root, drop the arcs entering it; with --k, add a new root.
    Reduce {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: Option<u64>,
        #[arg(long)]
        root: Option<usize>,
    },
    /// Brute-force reference answers for small inputs.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
}

#[derive(Debug, Subcommand)]
enum OracleCommand {
    /// Direct search for k disjoint spanning arborescences.
    Exists {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        root: Option<usize>,
    },
    /// Exhaustive minimum blocking set.
    Block {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        #[arg(long)]
        root: Option<usize>,
        #[arg(long)]
        weighted: bool,
    },
    /// The subpartition inequality over every subpartition.
    Frank {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: u64,
    },
}

/// Line report; rendered as text or as a JSON object with the same fields.
#[derive(Debug, Default)]
struct Report {
    command: &'static str,
    answer: Option<bool>,
    value: Option<String>,
    nodes: Option<usize>,
    edges: Vec<(usize, usize)>,
    removed: Vec<(usize, usize, u64)>,
    parts: Vec<Vec<usize>>,
    certificate: Option<Vec<Vec<usize>>>,
    graph: Option<String>,
    notes: Vec<(&'static str, String)>,
}

impl Report {
    fn new(command: &'static str) -> Self {
        Report {
            command,
            ..Default::default()
        }
    }

    fn text(&self) -> String {
        let mut out = String::new();
        let part = |p: &Vec<usize>| {
            let ids: Vec<String> = p.iter().map(usize::to_string).collect();
            format!("part {}\n", ids.join(" "))
        };
        if let Some(a) = self.answer {
            out += if a { "yes\n" } else { "no\n" };
        }
        if let Some(v) = &self.value {
            out += &format!("value {}\n", v);
        }
        if let Some(n) = self.nodes {
            out += &format!("n {}\n", n);
        }
        for (u, v) in &self.edges {
            out += &format!("edge {} {}\n", u, v);
        }
        for (u, v, c) in &self.removed {
            out += &format!("remove {} {} {}\n", u, v, c);
        }
        for p in &self.parts {
            out += &part(p);
        }
        if let Some(cert) = &self.certificate {
            out += "certificate\n";
            for p in cert {
                out += &part(p);
            }
        }
        for (key, v) in &self.notes {
            out += &format!("# {} {}\n", key, v);
        }
        if let Some(g) = &self.graph {
            out += g;
        }
        out
    }

    fn json(&self) -> String {
        let mut obj = Map::new();
        obj.insert("schema".into(), json!(1));
        obj.insert("command".into(), json!(self.command));
        if let Some(a) = self.answer {
            obj.insert("exists".into(), json!(a));
        }
        if let Some(v) = &self.value {
            obj.insert("value".into(), json!(v));
        }
        if let Some(n) = self.nodes {
            obj.insert("nodes".into(), json!(n));
            obj.insert("edges".into(), json!(self.edges));
        }
        if !self.removed.is_empty() || self.command == "block" {
            let removed: Vec<Value> = self
                .removed
                .iter()
                .map(|(u, v, c)| json!({"tail": u, "head": v, "count": c}))
                .collect();
            obj.insert("removed".into(), Value::Array(removed));
        }
        if !self.parts.is_empty()
            || self.value.is_some() && self.certificate.is_none() && self.nodes.is_none()
        {
            obj.insert("parts".into(), json!(self.parts));
        }
        if let Some(cert) = &self.certificate {
            obj.insert("certificate".into(), json!(cert));
        }
        for (key, v) in &self.notes {
            obj.insert(key.replace('-', "_"), json!(v));
        }
        if let Some(g) = &self.graph {
            obj.insert("graph".into(), json!(g));
        }
        let mut s = Value::Object(obj).to_string();
        s.push('\n');
        s
    }
}

fn parts_of(p: &Subpartition) -> Vec<Vec<usize>> {
    p.parts().iter().map(|x| x.as_slice().to_vec()).collect()
}

fn mode_of(weighted: bool) -> Mode {
    if weighted {
        Mode::Weighted
    } else {
        Mode::Unit
    }
}

/// Unit-mode queries ignore weights, so they run on machine integers.
fn unweighted(d: &Digraph<Rational>) -> Digraph<i64> {
    d.map_weights(|_| 1i64)
}

fn read_text(path: &str, stdin: &mut dyn Read) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        stdin
            .read_to_string(&mut s)
            .map_err(|e| Error::Input(format!("reading standard input: {}", e)))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Input(format!("reading {}: {}", path, e)))
    }
}

fn read_graph(text: &str) -> Result<Digraph<Rational>> {
    let d = digraph::parse(text)?;
    if d.node_count() == 0 {
        return Err(Error::Parse {
            line: 1,
            message: "a digraph needs at least one node".into(),
        });
    }
    Ok(d)
}

fn check_violated<W: Scalar>(d: &Digraph<W>, k: u64, parts: &Subpartition) -> Result<()> {
    let lhs = parts.indegree_sum(d, Mode::Unit)?;
    if lhs >= W::from_count(k * (parts.len() as u64).saturating_sub(1)) {
        return Err(Error::Internal(
            "certificate does not violate the subpartition bound".into(),
        ));
    }
    Ok(())
}

fn blocking_report<W: Scalar>(d: &Digraph<W>, r: &BlockingResult<W>) -> Result<Report> {
    r.verify(d)?;
    let mut rep = Report::new("block");
    rep.value = Some(r.total.to_literal());
    rep.removed = r
        .removed
        .iter()
        .map(|(i, c)| (d.arc(i).tail, d.arc(i).head, c))
        .collect();
    rep.certificate = Some(match &r.certificate {
        Certificate::Subpartition(p) => parts_of(p),
        Certificate::Set(x) => vec![x.as_slice().to_vec()],
    });
    Ok(rep)
}

fn valued_report<W: Scalar>(
    command: &'static str,
    d: &Digraph<W>,
    v: &ValuedSubpartition<W>,
) -> Result<Report> {
    v.verify(d)?;
    let mut rep = Report::new(command);
    rep.value = Some(v.objective.to_literal());
    rep.parts = parts_of(&v.parts);
    Ok(rep)
}

fn execute(cli: Cli, text: &str) -> Result<Report> {
    match cli.command {
        Command::Exists { k, root, .. } => {
            let d = unweighted(&read_graph(text)?);
            let mut rep = Report::new("exists");
            match root {
                Some(r) => match subpart::exists_k_union_r_arb(&d, r, k)? {
                    Verdict::Exists => rep.answer = Some(true),
                    Verdict::Violated(x) => {
                        if d.indegree(&x, Mode::Unit)? >= k as i64 || x.contains(r) {
                            return Err(Error::Internal(
                                "certificate does not violate the cut bound".into(),
                            ));
                        }
                        rep.answer = Some(false);
                        rep.certificate = Some(vec![x.as_slice().to_vec()]);
                    }
                },
                None => match subpart::exists_k_union_arb(&d, k)? {
                    Verdict::Exists => rep.answer = Some(true),
                    Verdict::Violated(p) => {
                        check_violated(&d, k, &p)?;
                        rep.answer = Some(false);
                        rep.certificate = Some(parts_of(&p));
                    }
                },
            }
            Ok(rep)
        }
        Command::Block {
            k, root, weighted, ..
        } => {
            let d = read_graph(text)?;
            match (root, weighted) {
                (None, false) => {
                    let d = unweighted(&d);
                    blocking_report(&d, &blocking::block_karb_cardinality(&d, k)?)
                }
                (Some(r), false) => {
                    let d = unweighted(&d);
                    blocking_report(&d, &blocking::block_krarb_uniform(&d, r, k)?)
                }
                (None, true) => blocking_report(&d, &blocking::block_karb_weighted(&d, k)?),
                (Some(r), true) => blocking_report(&d, &blocking::block_krarb_weighted(&d, r, k)?),
            }
        }
        Command::BestSubpart {
            k,
            min_parts,
            weighted,
            ..
        } => {
            let d = read_graph(text)?;
            let mode = mode_of(weighted);
            let best = match min_parts {
                0 | 1 => subpart::best_subpart(&d, &d.all_nodes(), k, mode)?,
                2 => subpart::best_constr_subpart(&d, k, mode)?,
                other => {
                    return Err(Error::Input(format!(
                        "--min-parts must be 1 or 2, got {}",
                        other
                    )))
                }
            };
            valued_report("best-subpart", &d, &best)
        }
        Command::FixedSubpart { t, weighted, .. } => {
            let d = read_graph(text)?;
            let best = subpart::best_fixed_subpart(&d, mode_of(weighted), t)?;
            valued_report("fixed-subpart", &d, &best)
        }
        Command::ReprTree { weighted, .. } => {
            let d = read_graph(text)?;
            let (tree, family) = build_tree_with_family(&d, mode_of(weighted))?;
            if !verify_tree(&tree, &family) {
                return Err(Error::Internal(
                    "tree does not represent the in-solid sets".into(),
                ));
            }
            let mut rep = Report::new("repr-tree");
            rep.nodes = Some(tree.node_count());
            rep.edges = tree.edges().to_vec();
            Ok(rep)
        }
        Command::Reduce { k, root, .. } => {
            let d = read_graph(text)?;
            let mut rep = Report::new("reduce");
            match (root, k) {
                (Some(r), None) => {
                    rep.graph = Some(digraph::serialize(&blocking::reduce_rooted_to_unrooted(
                        &d, r,
                    )?));
                }
                (None, Some(k)) => {
                    let red = blocking::reduce_unrooted_to_rooted(&d, k)?;
                    rep.notes = vec![
                        ("root", red.root.to_string()),
                        ("new-arc-cost", red.new_arc_cost.to_literal()),
                        ("new-arc-weight", red.new_arc_weight.to_literal()),
                    ];
                    rep.graph = Some(digraph::serialize(&red.digraph));
                }
                _ => {
                    return Err(Error::Input(
                        "reduce takes exactly one of --root and --k".into(),
                    ))
                }
            }
            Ok(rep)
        }
        Command::Oracle { command } => match command {
            OracleCommand::Exists { k, root, .. } => {
                let d = unweighted(&read_graph(text)?);
                let mut rep = Report::new("oracle-exists");
                rep.answer = Some(oracle::brute_arborescence_pack(&d, k, root)?);
                Ok(rep)
            }
            OracleCommand::Block {
                k, root, weighted, ..
            } => {
                let d = read_graph(text)?;
                let (value, removed) = oracle::brute_min_blocking(&d, k, root, mode_of(weighted))?
                    .ok_or_else(|| {
                        Error::Unblockable("structure of a single-node digraph".into())
                    })?;
                let mut rep = Report::new("oracle-block");
                rep.value = Some(value.to_literal());
                rep.removed = removed
                    .iter()
                    .map(|(i, c)| (d.arc(i).tail, d.arc(i).head, c))
                    .collect();
                Ok(rep)
            }
            OracleCommand::Frank { k, .. } => {
                let d = unweighted(&read_graph(text)?);
                let check = oracle::brute_frank_check(&d, k)?;
                let mut rep = Report::new("oracle-frank");
                rep.answer = Some(check.holds);
                rep.value = Some(check.surplus.to_literal());
                rep.parts = parts_of(&check.witness);
                Ok(rep)
            }
        },
    }
}

impl Command {
    fn input(&self) -> &Input {
        match self {
            Command::Exists { input, .. }
            | Command::Block { input, .. }
            | Command::BestSubpart { input, .. }
            | Command::FixedSubpart { input, .. }
            | Command::ReprTree { input, .. }
            | Command::Reduce { input, .. } => input,
            Command::Oracle { command } => match command {
                OracleCommand::Exists { input, .. }
                | OracleCommand::Block { input, .. }
                | OracleCommand::Frank { input, .. } => input,
            },
        }
    }
}

/// Refuses large `k` for the blocking sweeps unless overridden.
fn check_k_cap(command: &Command, stderr: &mut dyn Write) -> Result<()> {
    if let Command::Block {
        k,
        allow_large_k: false,
        ..
    } = *command
    {
        if k > DEFAULT_K_CAP {
            let _ = writeln!(
                stderr,
                "warning: the blocking sweeps take O(m^(k^2)) time; k = {} exceeds the cap of {}",
                k, DEFAULT_K_CAP
            );
            return Err(Error::Capacity(format!("k = {} needs --allow-large-k", k)));
        }
    }
    Ok(())
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Capacity(_) => 2,
        _ => 1,
    }
}

/// Parses `args` (program name first), runs the command and writes the
/// report. Returns the process exit code.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(stdout, "{}", rendered)
            } else {
                write!(stderr, "{}", rendered)
            };
            return code;
        }
    };
    let threads = if cli.deterministic {
        1
    } else {
        cli.threads.max(1)
    };
    let json = cli.json;
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "error: cannot start worker threads: {}", e);
            return 1;
        }
    };
    let result = check_k_cap(&cli.command, stderr)
        .and_then(|()| read_text(&cli.command.input().path, stdin))
        .and_then(|text| pool.install(|| execute(cli, &text)));
    match result {
        Ok(rep) => {
            let out = if json { rep.json() } else { rep.text() };
            match stdout.write_all(out.as_bytes()) {
                Ok(()) => 0,
                Err(_) => 1,
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e);
            exit_code(&e)
        }
    }
}
