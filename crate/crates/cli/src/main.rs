use std::fs;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use lstsync::families;
use lstsync::independence::{best_one_cluster, check_independent, LetterSkeleton};
use lstsync::oracle;
use lstsync::reducibility::{is_reducible_set, is_synchronizing, stability_congruence, stable_pairs};
use lstsync::synthesis::{
    collapse_stable_set, collapse_stable_set_1cluster, min_rank_word, reset_word, reset_word_1cluster_capped,
};
use lstsync::{synthesize_coloring, Automaton, Certificate, Graph, IndependentSet, StateSet, Word};

#[derive(Parser)]
#[command(version, about = "Bounded reset words, minimal-rank words and road colorings")]
struct Cli {
    /// Seed for randomized built-in instances and bench corpora.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Largest state count handed to the exhaustive oracle.
    #[arg(long, global = true, default_value_t = oracle::DEFAULT_CAP)]
    cap_n: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Summarize letters, the independent set, stability and M.
    Analyze {
        input: String,
        #[arg(long)]
        words: Option<String>,
    },
    /// Synthesize a reset word.
    Reset {
        input: String,
        #[arg(long)]
        words: Option<String>,
        /// Use the 1-cluster corollary bound f(n).
        #[arg(long)]
        one_cluster: bool,
    },
    /// Synthesize a word of minimal rank.
    Minrank {
        input: String,
        #[arg(long)]
        words: Option<String>,
    },
    /// Collapse a stable set to one state.
    Collapse {
        input: String,
        #[arg(long)]
        set: String,
        #[arg(long)]
        words: Option<String>,
        #[arg(long)]
        one_cluster: bool,
    },
    /// Print the stable pairs and the stability classes.
    Stable { input: String },
    /// Decide whether a state set can be collapsed.
    Reducible {
        input: String,
        #[arg(long)]
        set: String,
    },
    /// Color a graph so that it synchronizes.
    RoadColor {
        input: String,
        #[arg(long)]
        emit_dot: Option<PathBuf>,
    },
    /// Exhaustive queries.
    Oracle {
        input: String,
        #[arg(long)]
        reset: bool,
        #[arg(long)]
        rank: bool,
        /// Independent set whose exact M to compute.
        #[arg(long)]
        m: Option<String>,
    },
    /// Emit a CSV table over a generated corpus.
    Bench {
        #[arg(long, value_enum)]
        family: Family,
        /// Inclusive range such as 4..8.
        #[arg(long, value_parser = parse_range)]
        n: RangeInclusive<usize>,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 2)]
        letters: usize,
    },
    /// Print an automaton or graph in Graphviz format.
    ExportDot {
        input: String,
        #[arg(long)]
        graph: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Cerny,
    OneCluster,
    Agw,
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
    match s.split_once("..") {
        Some((a, b)) => Ok(parse(a)?..=parse(b.trim_start_matches('='))?),
        None => parse(s).map(|n| n..=n),
    }
}

enum Instance {
    Automaton(Automaton),
    Graph(Graph),
}

/// Reads a file, or builds `cerny:N`, `ex1`, `one-cluster:N:M`, `agw:N:D`.
fn load(input: &str, seed: u64) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let parts: Vec<&str> = input.split(':').collect();
    let num = |i: usize| -> Result<usize> {
        parts
            .get(i)
            .ok_or_else(|| anyhow!("`{input}` is missing parameter {i}"))?
            .parse()
            .with_context(|| format!("bad parameter in `{input}`"))
    };
    match parts[0] {
        "cerny" => Ok(Instance::Automaton(families::cerny(num(1)?))),
        "ex1" => Ok(Instance::Automaton(families::four_state_example())),
        "one-cluster" => Ok(Instance::Automaton(families::random_one_cluster(num(1)?, num(2)?, &mut rng))),
        "agw" => Ok(Instance::Graph(families::random_agw_with_hamiltonian_path(num(1)?, num(2)?, &mut rng))),
        _ => {
            let text = fs::read_to_string(input).with_context(|| format!("reading {input}"))?;
            Ok(Instance::Automaton(
                text.parse().with_context(|| format!("parsing {input}"))?,
            ))
        }
    }
}

fn load_automaton(input: &str, seed: u64) -> Result<Automaton> {
    match load(input, seed)? {
        Instance::Automaton(a) => Ok(a),
        Instance::Graph(_) => bail!("`{input}` is a graph, an automaton is required"),
    }
}

fn load_graph(input: &str, seed: u64) -> Result<Graph> {
    match load(input, seed) {
        Ok(Instance::Graph(g)) => Ok(g),
        Ok(Instance::Automaton(a)) if !std::path::Path::new(input).exists() => Ok(Graph::of_automaton(&a)),
        _ => {
            let text = fs::read_to_string(input).with_context(|| format!("reading {input}"))?;
            text.parse().with_context(|| format!("parsing {input}"))
        }
    }
}

fn parse_set(aut: &Automaton, s: &str) -> Result<StateSet> {
    let states = s
        .split(',')
        .map(|t| t.trim().parse::<usize>().with_context(|| format!("bad state `{t}`")))
        .collect::<Result<Vec<_>>>()?;
    if let Some(q) = states.iter().find(|&&q| q >= aut.n()) {
        bail!("state {q} out of range (n = {})", aut.n());
    }
    Ok(StateSet::from_states(aut.n(), states))
}

/// The given comma-separated words, or the power set of the best 1-cluster
/// letter.
fn independent_set(aut: &Automaton, words: Option<&str>) -> Result<IndependentSet> {
    match words {
        Some(list) => {
            let words = list
                .split(',')
                .map(|w| w.trim().parse::<Word>())
                .collect::<Result<Vec<_>, _>>()?;
            Ok(check_independent(aut, &words)?)
        }
        None => Ok(best_one_cluster(aut)?.1),
    }
}

fn describe(w: &IndependentSet) -> String {
    let words: Vec<String> = w.words().iter().map(Word::to_string).collect();
    format!(
        "{{{}}} (k = {}, L_W = {}, l_W = {}), range {}",
        words.join(", "),
        w.k(),
        w.max_len(),
        w.min_len(),
        w.range()
    )
}

/// Prints a certificate and reports whether it replays.
fn emit(aut: &Automaton, cert: &Certificate) -> bool {
    println!("{cert}");
    println!("reached {} from {}", cert.reached, cert.start);
    cert.verify(aut)
}

fn analyze(aut: &Automaton, words: Option<&str>, cap: usize) -> Result<bool> {
    println!("n = {}, m = {}", aut.n(), aut.m());
    for x in 0..aut.m() {
        let sk = LetterSkeleton::new(aut, x)?;
        let lens: Vec<usize> = sk.cycles.iter().map(Vec::len).collect();
        println!(
            "letter {}: cycles of lengths {lens:?}, max level {}",
            lstsync::word::letter_name(x),
            sk.max_level()
        );
    }
    let rho = stability_congruence(aut)?;
    let classes: Vec<String> = rho
        .classes()
        .iter()
        .map(|c| StateSet::from_states(aut.n(), c.iter().copied()).to_string())
        .collect();
    println!("stability classes: {}", classes.join(" "));
    println!("synchronizing: {}", is_synchronizing(aut));
    match independent_set(aut, words) {
        Ok(w) => {
            println!("independent set: {}", describe(&w));
            let (t, cert) = min_rank_word(aut, &w)?;
            println!("M = {}, minimal rank t = {t}", cert.params.m.unwrap_or(0));
        }
        Err(e) => println!("independent set: none ({e})"),
    }
    if aut.n() <= cap {
        let w = independent_set(aut, words).ok();
        let report = oracle::report(aut, w.as_ref(), cap)?;
        let reset = report
            .shortest_reset_len()
            .map_or("none".to_string(), |l| l.to_string());
        let m = report.m.map_or("-".to_string(), |m| m.to_string());
        println!(
            "oracle: shortest reset {reset}, minimal rank {}, M = {m}",
            report.minimal_rank
        );
    }
    Ok(true)
}

#[derive(Serialize)]
struct BenchRow {
    id: String,
    n: usize,
    k: Option<usize>,
    #[serde(rename = "M")]
    m: Option<usize>,
    t: Option<usize>,
    cert_len: usize,
    bound: String,
    oracle_len: Option<usize>,
    margin: String,
}

fn bench_row(family: Family, n: usize, j: usize, letters: usize, seed: u64, cap: usize) -> Result<BenchRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((n as u64) << 32 | j as u64));
    let (id, aut, cert) = match family {
        Family::Cerny => {
            let aut = families::cerny(n);
            let (_, w) = best_one_cluster(&aut)?;
            let cert = reset_word(&aut, &w)?;
            (format!("cerny-{n}"), aut, cert)
        }
        Family::OneCluster => {
            let aut = families::random_one_cluster(n, letters, &mut rng);
            let (_, w) = best_one_cluster(&aut)?;
            let cert = if is_synchronizing(&aut) {
                reset_word(&aut, &w)?
            } else {
                min_rank_word(&aut, &w)?.1
            };
            (format!("one-cluster-{n}-{j}"), aut, cert)
        }
        Family::Agw => {
            let g = families::random_agw_with_hamiltonian_path(n, letters, &mut rng);
            let rc = synthesize_coloring(&g)?;
            (format!("agw-{n}-{j}"), rc.coloring, rc.certificate)
        }
    };
    if !cert.verify(&aut) {
        bail!("{id}: certificate does not replay");
    }
    let oracle_len = if aut.n() <= cap && cert.params.t == Some(1) {
        oracle::shortest_reset(&aut, cap)?.map(|w| w.len())
    } else {
        None
    };
    Ok(BenchRow {
        id,
        n: aut.n(),
        k: cert.params.k,
        m: cert.params.m,
        t: cert.params.t,
        cert_len: cert.word.len(),
        bound: format!("{:.4}", cert.bound.value),
        oracle_len,
        margin: format!("{:.4}", cert.margin()),
    })
}

fn run(cli: Cli) -> Result<bool> {
    let seed = cli.seed;
    let cap = cli.cap_n;
    match cli.command {
        Command::Analyze { input, words } => analyze(&load_automaton(&input, seed)?, words.as_deref(), cap),
        Command::Reset { input, words, one_cluster } => {
            let aut = load_automaton(&input, seed)?;
            let cert = if one_cluster {
                reset_word_1cluster_capped(&aut, cap)?
            } else {
                reset_word(&aut, &independent_set(&aut, words.as_deref())?)?
            };
            Ok(emit(&aut, &cert))
        }
        Command::Minrank { input, words } => {
            let aut = load_automaton(&input, seed)?;
            let (t, cert) = min_rank_word(&aut, &independent_set(&aut, words.as_deref())?)?;
            println!("minimal rank {t}");
            Ok(emit(&aut, &cert))
        }
        Command::Collapse { input, set, words, one_cluster } => {
            let aut = load_automaton(&input, seed)?;
            let c = parse_set(&aut, &set)?;
            let cert = if one_cluster {
                collapse_stable_set_1cluster(&aut, &c)?
            } else {
                collapse_stable_set(&aut, &independent_set(&aut, words.as_deref())?, &c)?
            };
            Ok(emit(&aut, &cert))
        }
        Command::Stable { input } => {
            let aut = load_automaton(&input, seed)?;
            let table = stable_pairs(&aut);
            let pairs: Vec<String> = table.stable.off_diagonal().map(|(p, q)| format!("({p},{q})")).collect();
            println!("stable pairs: {}", if pairs.is_empty() { "none".into() } else { pairs.join(" ") });
            let rho = stability_congruence(&aut)?;
            for (i, c) in rho.classes().iter().enumerate() {
                println!("class {i}: {}", StateSet::from_states(aut.n(), c.iter().copied()));
            }
            Ok(true)
        }
        Command::Reducible { input, set } => {
            let aut = load_automaton(&input, seed)?;
            let s = parse_set(&aut, &set)?;
            match is_reducible_set(&aut, &s, None)? {
                Some(w) => println!("reducible: word={w}, len={}", w.len()),
                None => println!("not reducible"),
            }
            Ok(true)
        }
        Command::RoadColor { input, emit_dot } => {
            let g = load_graph(&input, seed)?;
            let rc = synthesize_coloring(&g)?;
            print!("{}", rc.coloring);
            let ok = emit(&rc.coloring, &rc.certificate) && g.is_colored_by(&rc.coloring);
            for level in &rc.levels {
                println!("level n={} step={:?} len={} f(n)={:.4}", level.n, level.step, level.word_len, level.bound);
            }
            if let Some(path) = emit_dot {
                fs::write(&path, rc.coloring.to_dot()).with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(ok)
        }
        Command::Oracle { input, reset, rank, m } => {
            let aut = load_automaton(&input, seed)?;
            let all = !reset && !rank && m.is_none();
            if reset || all {
                match oracle::shortest_reset(&aut, cap)? {
                    Some(w) => println!("shortest reset: word={w}, len={}", w.len()),
                    None => println!("shortest reset: none"),
                }
            }
            if rank || all {
                println!("minimal rank: {}", oracle::minimal_rank(&aut, cap)?);
            }
            if let Some(words) = m {
                let w = independent_set(&aut, Some(&words))?;
                println!("M: {}", oracle::exact_m(&aut, &w, cap)?);
            }
            Ok(true)
        }
        Command::Bench { family, n, count, letters } => {
            let jobs: Vec<(usize, usize)> = n.flat_map(|n| (0..count).map(move |j| (n, j))).collect();
            let rows = jobs
                .par_iter()
                .map(|&(n, j)| bench_row(family, n, j, letters, seed, cap))
                .collect::<Result<Vec<_>>>()?;
            let mut out = csv::Writer::from_writer(std::io::stdout());
            for row in rows {
                out.serialize(row)?;
            }
            out.flush()?;
            Ok(true)
        }
        Command::ExportDot { input, graph } => {
            if graph {
                print!("{}", load_graph(&input, seed)?.to_dot());
            } else {
                print!("{}", load_automaton(&input, seed)?.to_dot());
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("verification failed");
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
