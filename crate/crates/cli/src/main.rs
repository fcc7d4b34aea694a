use std::fmt::Display;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qct_core::lr::{kostka_number, lr_coefficient, parabolic_kostka, KostkaInstance, TermBudget};
use qct_core::partition::parse_usize_list;
use qct_core::pipeline::{
    build_trace, run_methods, sweep_instances, verify, Budgets, CountReport, Method,
};
use qct_core::{Error, Partition, TableInstance};
use rayon::prelude::*;
use serde::Serialize;

const USAGE: u8 = 2;
const DISAGREE: u8 = 1;
const BUDGET: u8 = 3;

/// Exact counts of 3-way contingency tables with two fixed plane-sum
/// margins.
#[derive(Parser)]
#[command(name = "qct", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count the tables of one instance.
    Count(CountArgs),
    /// Check every counting route on a sweep of instances.
    Verify(VerifyArgs),
    /// Print the quiver reduction of one instance as JSON.
    Trace {
        #[command(flatten)]
        instance: InstanceArgs,
    },
    /// Littlewood-Richardson coefficient c^λ_{μν}.
    Lr {
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        #[arg(long, allow_hyphen_values = true)]
        nu: String,
    },
    /// Kostka number K_{λ,content}.
    Kostka {
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, allow_hyphen_values = true)]
        content: String,
    },
    /// Parabolic Kostka coefficient K_{λ,ℛ} in GL(rank).
    Pkostka {
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        /// Rectangles separated by `;`, e.g. "2,2;1".
        #[arg(long, allow_hyphen_values = true)]
        rects: String,
        #[arg(long)]
        rank: usize,
        #[command(flatten)]
        budget: TermBudgetArg,
    },
}

#[derive(Args)]
struct InstanceArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: usize,
    /// Row margins, comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    a: String,
    /// Column margins, comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    b: String,
}

#[derive(Args)]
struct SearchBudgetArg {
    /// Search-node budget for the flow enumeration.
    #[arg(long, env = "QCT_BUDGET", value_parser = clap::value_parser!(u64).range(1..))]
    budget: Option<u64>,
}

#[derive(Args)]
struct TermBudgetArg {
    /// Term budget for each expansion-based method.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    term_budget: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodChoice {
    Flow,
    Kostka,
    Sum,
    All,
}

#[derive(Args)]
struct CountArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, value_enum, default_value = "all")]
    method: MethodChoice,
    /// Print the full report as JSON.
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    search: SearchBudgetArg,
    #[command(flatten)]
    terms: TermBudgetArg,
}

#[derive(Args)]
struct VerifyArgs {
    /// Largest m (length of a).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    max_m: u64,
    /// Largest n (length of b).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    max_n: u64,
    /// Largest p.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    max_p: u64,
    /// Largest single margin entry.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    max_entry: u64,
    /// Largest margin total; 0 gives an empty sweep.
    #[arg(long = "max-N")]
    max_total: u64,
    /// Also run the alternant oracle on every instance.
    #[arg(long)]
    with_oracle: bool,
    #[command(flatten)]
    search: SearchBudgetArg,
    #[command(flatten)]
    terms: TermBudgetArg,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Display) -> Self {
        Failure {
            code: USAGE,
            message: message.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_budget() { BUDGET } else { USAGE };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: DISAGREE,
            message: format!("write failed: {e}"),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Count(args) => cmd_count(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Trace { instance } => cmd_trace(instance),
        Command::Lr { lambda, mu, nu } => cmd_lr(&lambda, &mu, &nu),
        Command::Kostka { lambda, content } => cmd_kostka(&lambda, &content),
        Command::Pkostka {
            lambda,
            rects,
            rank,
            budget,
        } => cmd_pkostka(&lambda, &rects, rank, budget),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn partition_flag(flag: &str, value: &str) -> Result<Partition, Failure> {
    value
        .parse()
        .map_err(|e| Failure::usage(format!("--{flag}: {e}")))
}

fn margins_flag(flag: &str, value: &str) -> Result<Vec<u64>, Failure> {
    let parts = parse_usize_list(value).map_err(|e| Failure::usage(format!("--{flag}: {e}")))?;
    Ok(parts.into_iter().map(|v| v as u64).collect())
}

fn instance(args: &InstanceArgs) -> Result<TableInstance, Failure> {
    for (flag, v) in [("m", args.m), ("n", args.n), ("p", args.p)] {
        if v == 0 {
            return Err(Failure::usage(format!("--{flag} must be positive")));
        }
    }
    let a = margins_flag("a", &args.a)?;
    let b = margins_flag("b", &args.b)?;
    if a.len() != args.m {
        return Err(Failure::usage(format!(
            "--a has {} entries but --m is {}",
            a.len(),
            args.m
        )));
    }
    if b.len() != args.n {
        return Err(Failure::usage(format!(
            "--b has {} entries but --n is {}",
            b.len(),
            args.n
        )));
    }
    let (sa, sb) = (a.iter().sum::<u64>(), b.iter().sum::<u64>());
    if sa != sb {
        return Err(Failure::usage(format!(
            "--a sums to {sa} but --b sums to {sb}"
        )));
    }
    Ok(TableInstance::new(args.m, args.n, args.p, a, b)?)
}

fn budgets(search: &SearchBudgetArg, terms: &TermBudgetArg) -> Budgets {
    let mut b = Budgets::default();
    if let Some(v) = search.budget {
        b.search_nodes = v;
    }
    if let Some(v) = terms.term_budget {
        b.expansion_terms = v;
    }
    b
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    let line = serde_json::to_string(value).expect("reports serialize");
    let mut out = io::stdout().lock();
    writeln!(out, "{line}")?;
    Ok(())
}

fn cmd_count(args: CountArgs) -> Outcome {
    let inst = instance(&args.instance)?;
    let methods: &[Method] = match args.method {
        MethodChoice::Flow => &[Method::Flow],
        MethodChoice::Kostka => &[Method::Kostka],
        MethodChoice::Sum => &[Method::Sum],
        MethodChoice::All => &[Method::Flow, Method::Kostka, Method::Sum],
    };
    let report = run_methods(&inst, methods, budgets(&args.search, &args.terms))?;
    if args.json {
        print_json(&report)?;
    }
    if !report.agree {
        let counts: Vec<String> = report
            .counts
            .iter()
            .map(|(m, c)| format!("{}={}", m.name(), c.0))
            .collect();
        eprintln!("error: methods disagree: {}", counts.join(" "));
        return Ok(DISAGREE);
    }
    if !report.budget_exceeded.is_empty() {
        let names: Vec<&str> = report.budget_exceeded.iter().map(|m| m.name()).collect();
        eprintln!("error: budget exceeded for {}", names.join(", "));
        return Ok(BUDGET);
    }
    if !args.json {
        let value = report.value().expect("at least one method ran");
        println!("{value}");
    }
    Ok(0)
}

/// One line of `verify` output: a report or the reason none was produced.
#[derive(Serialize)]
#[serde(untagged)]
enum Line {
    Report(CountReport),
    Error {
        m: usize,
        n: usize,
        p: usize,
        a: Vec<u64>,
        b: Vec<u64>,
        error: String,
    },
}

#[derive(Default, Serialize)]
struct Summary {
    instances: usize,
    agree: usize,
    disagree: usize,
    budget_exceeded: usize,
    errors: usize,
}

fn cmd_verify(args: VerifyArgs) -> Outcome {
    let budgets = budgets(&args.search, &args.terms);
    let corpus = sweep_instances(
        args.max_m as usize,
        args.max_n as usize,
        args.max_p as usize,
        args.max_entry,
        args.max_total,
    );
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = args.jobs {
        pool = pool.num_threads(jobs as usize);
    }
    let pool = pool
        .build()
        .map_err(|e| Failure::usage(format!("--jobs: {e}")))?;

    let run = |inst: &TableInstance| match verify(inst, args.with_oracle, budgets) {
        Ok(report) => Line::Report(report),
        Err(e) => Line::Error {
            m: inst.m(),
            n: inst.n(),
            p: inst.p(),
            a: inst.a().to_vec(),
            b: inst.b().to_vec(),
            error: e.to_string(),
        },
    };

    let mut summary = Summary::default();
    let mut out = BufWriter::new(io::stdout().lock());
    // chunks keep memory flat while preserving instance order
    for chunk in corpus.chunks(256) {
        let lines: Vec<Line> = pool.install(|| chunk.par_iter().map(run).collect());
        for line in lines {
            summary.instances += 1;
            match &line {
                Line::Report(r) if !r.agree => summary.disagree += 1,
                Line::Report(r) if !r.budget_exceeded.is_empty() => summary.budget_exceeded += 1,
                Line::Report(_) => summary.agree += 1,
                Line::Error { .. } => summary.errors += 1,
            }
            writeln!(
                out,
                "{}",
                serde_json::to_string(&line).expect("reports serialize")
            )?;
        }
        out.flush()?;
    }
    #[derive(Serialize)]
    struct Wrapped<'a> {
        summary: &'a Summary,
    }
    writeln!(
        out,
        "{}",
        serde_json::to_string(&Wrapped { summary: &summary }).expect("summary")
    )?;
    out.flush()?;

    Ok(if summary.disagree + summary.errors > 0 {
        DISAGREE
    } else if summary.budget_exceeded > 0 {
        BUDGET
    } else {
        0
    })
}

fn cmd_trace(args: InstanceArgs) -> Outcome {
    let inst = instance(&args)?;
    let trace = build_trace(&inst).map_err(|e| Failure {
        code: DISAGREE,
        message: e.to_string(),
    })?;
    print_json(&trace)?;
    Ok(0)
}

fn cmd_lr(lambda: &str, mu: &str, nu: &str) -> Outcome {
    let lambda = partition_flag("lambda", lambda)?;
    let mu = partition_flag("mu", mu)?;
    let nu = partition_flag("nu", nu)?;
    println!("{}", lr_coefficient(&lambda, &mu, &nu));
    Ok(0)
}

fn cmd_kostka(lambda: &str, content: &str) -> Outcome {
    let lambda = partition_flag("lambda", lambda)?;
    let content =
        parse_usize_list(content).map_err(|e| Failure::usage(format!("--content: {e}")))?;
    println!("{}", kostka_number(&lambda, &content));
    Ok(0)
}

fn cmd_pkostka(lambda: &str, rects: &str, rank: usize, budget: TermBudgetArg) -> Outcome {
    let lambda = partition_flag("lambda", lambda)?;
    let rects = if rects.trim().is_empty() {
        Vec::new()
    } else {
        rects
            .split(';')
            .map(|r| partition_flag("rects", r))
            .collect::<Result<Vec<_>, _>>()?
    };
    let inst = KostkaInstance::new(lambda, rects, rank)
        .map_err(|e| Failure::usage(format!("--lambda/--rects/--rank: {e}")))?;
    let mut terms = TermBudget::new(
        budget
            .term_budget
            .unwrap_or(Budgets::default().expansion_terms),
    );
    println!("{}", parabolic_kostka(&inst, &mut terms)?);
    Ok(0)
}
