use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use xplore_cli::data::{open_dataset, open_grammar, open_profile};
use xplore_cli::service::{router, AppState, BusyPolicy};
use xplore_core::dsl::parse_expr;
use xplore_core::grammar::{compare_grammars, compare_profiles, derive, Skeleton};
use xplore_core::ingest::{build_citation_fixture, fingerprint, fixtures, schema_summary, serialize};
use xplore_core::session::{Binding, Session, Value};

#[derive(Parser)]
#[command(name = "xplore", version, about = "Explore nested relational data with composable set operators")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate a dataset and print its fingerprint and schema.
    Load { dataset: String },
    /// Run a script and print the final state.
    Eval {
        /// Triples file, `publications`, `citation` or `citation:SEED:SCALE`.
        #[arg(short, long)]
        dataset: String,
        #[arg(short, long)]
        file: PathBuf,
        /// Also print these named states (repeatable).
        #[arg(long)]
        show: Vec<String>,
        /// Write the session script here.
        #[arg(long)]
        save: Option<PathBuf>,
        /// Continue a saved session before running the script.
        #[arg(long)]
        resume: Option<PathBuf>,
    },
    /// Read statements from stdin; `:help` lists the commands.
    Repl {
        #[arg(short, long)]
        dataset: String,
    },
    #[command(subcommand)]
    Grammar(GrammarCmd),
    #[command(subcommand)]
    Profile(ProfileCmd),
    /// Write a built-in dataset as triples.
    Fixture {
        #[arg(value_enum)]
        name: FixtureName,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        scale: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Serve the JSON API under /v1.
    Serve {
        /// Datasets to serve (repeatable).
        #[arg(short, long, required = true)]
        dataset: Vec<String>,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        /// Answer 409 to a second writer instead of queueing it.
        #[arg(long)]
        reject_busy: bool,
    },
}

#[derive(Subcommand)]
enum GrammarCmd {
    /// Is the expression's skeleton derivable?
    Check {
        /// Preset (`v1`..`v4`, a tool row) or grammar file.
        #[arg(long)]
        grammar: String,
        #[arg(long)]
        expr: String,
    },
    /// Compare the languages of two grammars up to a depth.
    Compare {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Print a grammar.
    Show { grammar: String },
}

#[derive(Subcommand)]
enum ProfileCmd {
    /// Differences between two tactical profiles.
    Compare {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FixtureName {
    Publications,
    Citation,
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        // a closed pipe (`xplore ... | head`) is not a failure
        if e.downcast_ref::<io::Error>().is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe) {
            return;
        }
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    let mut out = io::stdout().lock();
    match cli.cmd {
        Cmd::Load { dataset } => {
            let (id, d) = open_dataset(&dataset)?;
            writeln!(out, "{id}  {}", fingerprint(&d))?;
            write!(out, "{}", schema_summary(&d).render())?;
        }
        Cmd::Eval { dataset, file, show, save, resume } => {
            let (_, d) = open_dataset(&dataset)?;
            let d = Arc::new(d);
            let src = std::fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
            let mut s = match resume {
                Some(p) => Session::load(d, &std::fs::read_to_string(&p)?)?,
                None => Session::new(d),
            };
            let outcomes = s.eval(&src).with_context(|| file.display().to_string())?;
            for name in &show {
                match s.lookup(name) {
                    Some(b) => print_binding(&mut out, &s, name, b)?,
                    None => bail!("{name} is not bound"),
                }
            }
            if let Some(last) = outcomes.last() {
                if !show.is_empty() {
                    writeln!(out, "# final")?;
                }
                print_value(&mut out, &s, last.value)?;
            }
            if let Some(p) = save {
                std::fs::write(&p, s.save()).with_context(|| format!("writing {}", p.display()))?;
            }
        }
        Cmd::Repl { dataset } => {
            let (id, d) = open_dataset(&dataset)?;
            repl(id, Session::new(Arc::new(d)))?;
        }
        Cmd::Grammar(GrammarCmd::Check { grammar, expr }) => {
            let g = open_grammar(&grammar)?;
            let sk = Skeleton::of(&parse_expr(&expr)?);
            for w in sk.lint() {
                eprintln!("warning: {w}");
            }
            match derive(&g, &sk) {
                Some(d) => {
                    writeln!(out, "accept")?;
                    for step in d.steps() {
                        writeln!(out, "  {step}")?;
                    }
                }
                None => writeln!(out, "reject: {sk} is not in {}", g.name())?,
            }
        }
        Cmd::Grammar(GrammarCmd::Compare { a, b, depth }) => {
            let c = compare_grammars(&open_grammar(&a)?, &open_grammar(&b)?, depth)?;
            write!(out, "{c}")?;
        }
        Cmd::Grammar(GrammarCmd::Show { grammar }) => write!(out, "{}", open_grammar(&grammar)?)?,
        Cmd::Profile(ProfileCmd::Compare { a, b, json }) => {
            let r = compare_profiles(&open_profile(&a)?, &open_profile(&b)?);
            if json {
                writeln!(out, "{}", r.to_json())?;
            } else {
                write!(out, "{r}")?;
            }
        }
        Cmd::Fixture { name, seed, scale, out: dest } => {
            let d = match name {
                FixtureName::Publications => fixtures::publications(),
                FixtureName::Citation => build_citation_fixture(seed, scale)?.dataset,
            };
            let text = serialize(&d);
            match dest {
                Some(p) => std::fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?,
                None => write!(out, "{text}")?,
            }
        }
        Cmd::Serve { dataset, host, port, reject_busy } => {
            let datasets = dataset.iter().map(|d| open_dataset(d)).collect::<Result<Vec<_>>>()?;
            let busy = if reject_busy { BusyPolicy::Reject } else { BusyPolicy::Queue };
            let app = router(AppState::new(datasets, busy));
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(async {
                let listener = tokio::net::TcpListener::bind((host.as_str(), port)).await?;
                eprintln!("listening on http://{}/v1", listener.local_addr()?);
                axum::serve(listener, app).await?;
                Ok::<_, anyhow::Error>(())
            })?;
        }
    }
    Ok(())
}

fn print_value(out: &mut impl Write, s: &Session, v: Value) -> Result<()> {
    match v {
        Value::State(id) => write!(out, "{}", s.extension(id)?.render())?,
        Value::Pair(a, b) => {
            writeln!(out, "# s{a}")?;
            write!(out, "{}", s.extension(a)?.render())?;
            writeln!(out, "# s{b}")?;
            write!(out, "{}", s.extension(b)?.render())?;
        }
    }
    Ok(())
}

fn print_binding(out: &mut impl Write, s: &Session, name: &str, b: Binding) -> Result<()> {
    writeln!(out, "# {name}")?;
    let v = match b {
        Binding::State(id) => Value::State(id),
        Binding::Pair(a, b) => Value::Pair(a, b),
    };
    print_value(out, s, v)
}

const REPL_HELP: &str = "\
statements:  name = expr   or   expr
:trail              list the session states
:show NAME [N]      print a state, at most N top items (default 20)
:save FILE          write the session script
:help               this text
:quit               leave
";

fn repl(id: String, mut s: Session) -> Result<()> {
    let stdin = io::stdin();
    let mut out = io::stdout().lock();
    writeln!(out, "xplore on {id}; :help for commands")?;
    for line in stdin.lock().lines() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut words = line.split_whitespace();
        match words.next() {
            Some(":quit" | ":q") => break,
            Some(":help") => write!(out, "{REPL_HELP}")?,
            Some(":trail") => write!(out, "{}", s.trail().render())?,
            Some(":save") => match words.next() {
                Some(p) => {
                    if let Err(e) = std::fs::write(p, s.save()) {
                        writeln!(out, "error: {e}")?;
                    }
                }
                None => writeln!(out, "usage: :save FILE")?,
            },
            Some(":show") => {
                let Some(name) = words.next() else {
                    writeln!(out, "usage: :show NAME [N]")?;
                    continue;
                };
                let n = words.next().and_then(|w| w.parse().ok()).unwrap_or(20);
                match s.lookup(name) {
                    Some(Binding::State(st)) => show_top(&mut out, &s, st, n)?,
                    Some(Binding::Pair(a, b)) => {
                        show_top(&mut out, &s, a, n)?;
                        show_top(&mut out, &s, b, n)?;
                    }
                    None => writeln!(out, "error: {name} is not bound")?,
                }
            }
            _ => match s.eval(line) {
                Ok(outcomes) => {
                    for o in outcomes {
                        match o.value {
                            Value::State(st) => show_top(&mut out, &s, st, 20)?,
                            Value::Pair(a, b) => {
                                show_top(&mut out, &s, a, 20)?;
                                show_top(&mut out, &s, b, 20)?;
                            }
                        }
                    }
                }
                Err(e) => writeln!(out, "error: {e}")?,
            },
        }
        out.flush()?;
    }
    Ok(())
}

fn show_top(out: &mut impl Write, s: &Session, st: usize, n: usize) -> Result<()> {
    let a = match s.extension(st) {
        Ok(a) => a,
        Err(e) => {
            writeln!(out, "error: {e}")?;
            return Ok(());
        }
    };
    let total = a.children(a.root()).len();
    writeln!(out, "s{st}: {total} item{}", if total == 1 { "" } else { "s" })?;
    let head = xplore_core::ops::slice(&a, 0, n.saturating_sub(1));
    for line in head.render().lines() {
        writeln!(out, "  {line}")?;
    }
    if total > n {
        writeln!(out, "  ... {} more", total - n)?;
    }
    Ok(())
}
