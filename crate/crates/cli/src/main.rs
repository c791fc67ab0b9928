use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use trivalent_core::algebra::{check_class, Class, FiniteAlgebra, Outcome};
use trivalent_core::semantics::{assertability, Connectives, WorldDistribution};
use trivalent_core::sequent::{search, SearchOutcome, Sequent};
use trivalent_core::tableau::{deduce, Deduction};
use trivalent_core::{entails, eval, props, Calculus, Conditional, Formula, Inference, LogicConfig, Scheme, Valuation};

/// Trivalent logics of indicative conditionals.
#[derive(Parser)]
#[command(name = "trivalent", version)]
struct Cli {
    /// Conditional: df, cc, f, j1, j2, mat.
    #[arg(long, global = true, default_value = "df")]
    logic: Conditional,
    /// Conjunction and disjunction: kleene or cooper.
    #[arg(long, global = true, default_value = "kleene")]
    conn: Connectives,
    /// Validity scheme: ss, tt, st, ts, ss&tt.
    #[arg(long, global = true, default_value = "tt")]
    scheme: Scheme,
    #[arg(long, global = true, value_enum, default_value_t = Via::Semantic)]
    via: Via,
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Via {
    Semantic,
    Tableau,
    Sequent,
}

#[derive(Args)]
struct Query {
    #[arg(short = 'p', long = "premise")]
    premises: Vec<String>,
    #[arg(short = 'c', long = "conclusion")]
    conclusions: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Value of a formula under an assignment such as p=1,q=1/2.
    Eval {
        formula: String,
        #[arg(long, num_args = 0..=1, default_missing_value = "", default_value = "")]
        assign: String,
    },
    /// Decide an inference with the engine chosen by --via.
    Valid(Query),
    /// Tableaux for a single-conclusion inference.
    Tableau(Query),
    /// Root-first proof search for `Γ | Δ | Σ`, or for -p/-c as Γ | C | C.
    Sequent {
        sequent: Option<String>,
        #[command(flatten)]
        query: Query,
    },
    /// Regenerate the trilemma, commutation and checklist matrices.
    Props,
    #[command(subcommand)]
    Algebra(AlgebraCommand),
    /// Assertability of a formula under a distribution over classical worlds.
    Assert { formula: String, distribution: PathBuf },
}

#[derive(Subcommand)]
enum AlgebraCommand {
    /// Check a finite algebra against a class and everything it presupposes.
    Check {
        file: PathBuf,
        #[arg(long)]
        class: Class,
    },
}

struct Fail(String);

impl<E: std::fmt::Display> From<E> for Fail {
    fn from(e: E) -> Fail {
        Fail(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Fail(message)) => {
            if cli.json {
                println!("{}", json!({"schema": 1, "error": message}));
            } else {
                eprintln!("error: {message}");
            }
            ExitCode::from(2)
        }
    }
}

fn config(cli: &Cli) -> LogicConfig {
    LogicConfig { conditional: cli.logic, connectives: cli.conn }
}

fn calculus(cli: &Cli) -> Result<Calculus, Fail> {
    if cli.scheme != Scheme::TT {
        return Err(Fail(format!("the proof engines decide TT only, not {}", cli.scheme)));
    }
    Calculus::ALL
        .into_iter()
        .find(|c| c.config() == config(cli))
        .ok_or_else(|| Fail(format!("the proof engines cover DF and CC with Kleene connectives, not {}", config(cli))))
}

fn parse_all(texts: &[String]) -> Result<Vec<Formula>, Fail> {
    texts.iter().map(|t| t.parse::<Formula>().map_err(|e| Fail(format!("`{t}`: {e}")))).collect()
}

fn inference(q: &Query) -> Result<Inference, Fail> {
    if q.conclusions.is_empty() {
        return Err(Fail("give at least one conclusion with -c".into()));
    }
    Ok(Inference::multi(parse_all(&q.premises)?, parse_all(&q.conclusions)?))
}

fn emit(cli: &Cli, mut value: Value, text: String) {
    if cli.json {
        value["schema"] = json!(1);
        let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(&value).expect("serializable"));
    } else {
        let _ = write!(std::io::stdout(), "{text}");
    }
}

fn verdict_code(valid: bool) -> u8 {
    if valid {
        0
    } else {
        1
    }
}

fn run(cli: &Cli) -> Result<u8, Fail> {
    match &cli.command {
        Command::Eval { formula, assign } => {
            let f: Formula = formula.parse()?;
            let v = Valuation::parse_assignment(assign)?;
            let value = eval(&f, &v, config(cli))?;
            emit(cli, json!({"formula": f.to_string(), "assignment": v, "value": value.to_string()}), format!("{value}\n"));
            Ok(0)
        }
        Command::Valid(q) => valid(cli, &inference(q)?),
        Command::Tableau(q) => tableau(cli, &inference(q)?),
        Command::Sequent { sequent, query } => {
            let s = match sequent {
                Some(text) => Sequent::parse(text)?,
                None => {
                    let inf = inference(query)?;
                    Sequent::new(inf.premises.clone(), inf.conclusions.clone(), inf.conclusions.clone())
                }
            };
            sequent_search(cli, &s)
        }
        Command::Props => {
            let report = props::report()?;
            emit(cli, serde_json::to_value(&report)?, report.to_string());
            Ok(0)
        }
        Command::Algebra(AlgebraCommand::Check { file, class }) => algebra(cli, file, *class),
        Command::Assert { formula, distribution } => {
            let f: Formula = formula.parse()?;
            let text = std::fs::read_to_string(distribution).map_err(|e| Fail(format!("{}: {e}", distribution.display())))?;
            let d = WorldDistribution::parse(&text).map_err(|e| Fail(format!("{}: {e}", distribution.display())))?;
            let a = assertability(&f, &d, config(cli))?;
            let exact = a.exact.as_ref().map(|r| r.to_string());
            let line = match &exact {
                Some(r) if *r != a.value.to_string() => format!("{} (= {r})\n", a.value),
                _ => format!("{}\n", a.value),
            };
            emit(cli, json!({"formula": f.to_string(), "value": a.value, "exact": exact}), line);
            Ok(0)
        }
    }
}

fn valid(cli: &Cli, inf: &Inference) -> Result<u8, Fail> {
    match cli.via {
        Via::Semantic => {
            let cfg = config(cli);
            let verdict = entails(inf, cfg, cli.scheme)?;
            let text = match verdict.countermodel() {
                None => "valid\n".to_string(),
                Some(v) => format!("invalid\ncountermodel: {v}\n"),
            };
            let value = json!({
                "inference": inf.to_string(),
                "logic": cfg.to_string(),
                "scheme": cli.scheme.to_string(),
                "via": "semantic",
                "valid": verdict.is_valid(),
                "countermodel": verdict.countermodel(),
            });
            emit(cli, value, text);
            Ok(verdict_code(verdict.is_valid()))
        }
        Via::Tableau => tableau(cli, inf),
        Via::Sequent => {
            let s = Sequent::new(inf.premises.clone(), inf.conclusions.clone(), inf.conclusions.clone());
            sequent_search(cli, &s)
        }
    }
}

fn tableau(cli: &Cli, inf: &Inference) -> Result<u8, Fail> {
    let calc = calculus(cli)?;
    let [conclusion] = inf.conclusions.as_slice() else {
        return Err(Fail("tableaux take exactly one conclusion".into()));
    };
    let d = deduce(&inf.premises, conclusion, calc)?;
    let (value, text) = match &d {
        Deduction::Derivable { tableaux } => {
            let mut text = format!("valid: all {} tableaux close\n", tableaux.len());
            for t in tableaux {
                text.push('\n');
                text.push_str(&t.render_text());
            }
            let value = json!({
                "inference": inf.to_string(),
                "logic": calc.to_string(),
                "via": "tableau",
                "valid": true,
                "tableaux": tableaux.iter().map(|t| t.to_json()).collect::<Vec<_>>(),
            });
            (value, text)
        }
        Deduction::Open { tableau, branch, valuation } => {
            let labels: Vec<String> = branch.iter().map(|l| l.to_string()).collect();
            let text = format!(
                "invalid\ncountermodel: {valuation}\nopen branch: {}\n\n{}",
                labels.join(", "),
                tableau.render_text()
            );
            let value = json!({
                "inference": inf.to_string(),
                "logic": calc.to_string(),
                "via": "tableau",
                "valid": false,
                "countermodel": valuation,
                "open_branch": labels,
                "tableau": tableau.to_json(),
            });
            (value, text)
        }
    };
    emit(cli, value, text);
    Ok(verdict_code(d.is_derivable()))
}

fn sequent_search(cli: &Cli, s: &Sequent) -> Result<u8, Fail> {
    let calc = calculus(cli)?;
    let outcome = search(s, calc)?;
    let tree = outcome.tree();
    let (value, text) = match &outcome {
        SearchOutcome::Derivation(_) => (
            json!({"sequent": s.to_string(), "logic": calc.to_string(), "via": "sequent", "valid": true, "derivation": tree.to_json()}),
            format!("valid: derivation found\n\n{}", tree.render_text()),
        ),
        SearchOutcome::Countermodel { valuation, union, .. } => (
            json!({
                "sequent": s.to_string(),
                "logic": calc.to_string(),
                "via": "sequent",
                "valid": false,
                "countermodel": valuation,
                "open_branch_union": union.to_json(),
                "search": tree.to_json(),
            }),
            format!("invalid\ncountermodel: {valuation}\n\n{}", tree.render_text()),
        ),
    };
    emit(cli, value, text);
    Ok(verdict_code(outcome.is_derivation()))
}

fn algebra(cli: &Cli, file: &PathBuf, class: Class) -> Result<u8, Fail> {
    let text = std::fs::read_to_string(file).map_err(|e| Fail(format!("{}: {e}", file.display())))?;
    let a = FiniteAlgebra::parse(&text).map_err(|e| Fail(format!("{}: {e}", file.display())))?;
    let report = check_class(&a, class);
    let mut out = String::new();
    for r in &report.results {
        let detail = match &r.outcome {
            Outcome::Holds { witness: None } => String::new(),
            Outcome::Holds { witness: Some(w) } => format!(" ({w})"),
            Outcome::Counterexample { elements } => format!(" counterexample ({})", elements.join(", ")),
            Outcome::NoWitness { reason } => format!(" {reason}"),
        };
        let mark = if r.outcome.holds() { "✓" } else { "×" };
        out.push_str(&format!("{mark} {}: {}{detail}\n", r.class, r.axiom));
    }
    out.push_str(&format!("{}: {}\n", class, if report.holds() { "pass" } else { "fail" }));
    emit(cli, json!({"file": file.display().to_string(), "pass": report.holds(), "report": report}), out);
    Ok(verdict_code(report.holds()))
}
