//! Command-line front end. Line-oriented, deterministic output; exit code 0
//! on all-pass, 1 on any disagreement or violation, 2 on usage errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};

use fixpoint::evaluator::{self, check_equiv, run, run_traced, Fuel, Outcome, Verdict};
use fixpoint::functionals::{
    self, compactness_probe, enumerate_graph, factorial_step_op, frt_lfp, identity_op,
    lfp_via_stdform, nonminimal_counterexample, odifreddi_lfp, sasso_demo, EffectiveOp,
};
use fixpoint::futamura;
use fixpoint::nat::{nat_to_decimal, Nat};
use fixpoint::objlang::{decode, Index};
use fixpoint::recursion::{kleene_fix, rogers_check, rogers_fix, Blueprint, RogersVerdict};
use fixpoint::specializer::{smn, smn_opt};
use fixpoint::text::{parse_oracle_program, parse_program, print_program};
use fixpoint::corpus;

const PRINT_LIMIT_BITS: u64 = 600_000;

#[derive(Parser)]
#[command(
    name = "fixpoint",
    about = "A toy self-applicable programming system: run, specialize, and take fixed points"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Statement budget for evaluations.
    #[arg(long, default_value_t = 1_000_000)]
    fuel: u64,
    /// Sample input set, e.g. `0..9` or `1,2,5`.
    #[arg(long, default_value = "0..9")]
    inputs: String,
}

#[derive(Subcommand)]
enum Command {
    /// Run a program on an input.
    Run {
        /// Program: a file path, `@name` for a corpus program, or a decimal index.
        program: String,
        /// Input value (decimal).
        input: String,
        #[command(flatten)]
        common: Common,
        /// Print one line per executed statement.
        #[arg(long)]
        trace: bool,
    },
    /// Print the index of a program file.
    Encode { program: String },
    /// Pretty-print the program behind an index (decimal or @name or file).
    Decode { program: String },
    /// Specialize: print smn(p, x).
    Smn {
        program: String,
        /// Argument to freeze (decimal).
        x: String,
        /// Use the optimizing specializer.
        #[arg(long)]
        opt: bool,
    },
    /// Fixed points of the second recursion theorem.
    Fix {
        #[command(subcommand)]
        which: FixCommand,
    },
    /// Least fixed points of an effective operation.
    Lfp {
        /// dovetail | stdform | oracle
        #[arg(long, default_value = "dovetail")]
        via: String,
        /// Transformer (file/@name/index); for --via oracle, an oracle program file.
        program: String,
        #[command(flatten)]
        common: Common,
    },
    /// Run the non-minimal fixed point counterexample and print the
    /// three-way separation verdict.
    Counterexample {
        #[command(flatten)]
        common: Common,
    },
    /// Run the effective-continuity vs determinism separation.
    Sasso {
        #[command(flatten)]
        common: Common,
    },
    /// Search for a finite subfunction witnessing a value of an effective
    /// operation.
    Compactness {
        /// Transformer (file/@name/index); defaults to the factorial-step
        /// transformer.
        #[arg(default_value = "@factorial-step-transformer")]
        transformer: String,
        /// Index whose graph is sampled.
        #[arg(default_value = "@factorial")]
        graph_of: String,
        /// The argument to witness.
        #[arg(default_value_t = 3)]
        x: u64,
        #[arg(long, default_value_t = 64)]
        rounds: u64,
        #[arg(long, default_value_t = 200)]
        max_candidates: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Run the three projections on a source program.
    Futamura {
        source: String,
        #[command(flatten)]
        common: Common,
    },
    /// Compare two programs input by input.
    CheckEquiv {
        a: String,
        b: String,
        #[command(flatten)]
        common: Common,
    },
    /// Check the programs in a corpus directory against their expected
    /// behaviors.
    CorpusTest {
        /// Directory of .while program files.
        #[arg(long, default_value = "corpus")]
        dir: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Write the named corpus programs as .while files.
    CorpusDump {
        #[arg(long, default_value = "corpus")]
        dir: PathBuf,
    },
}

fn parse_inputs(spec: &str) -> Result<Vec<Nat>> {
    let spec = spec.trim();
    if let Some((a, b)) = spec.split_once("..") {
        let a: u64 = a.trim().parse().context("bad input range start")?;
        let b: u64 = b.trim().parse().context("bad input range end")?;
        return Ok((a..=b).map(Nat::from_u64).collect());
    }
    spec.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map(Nat::from_u64)
                .map_err(|e| anyhow!("bad input `{t}`: {e}"))
        })
        .collect()
}

fn parse_nat_arg(s: &str) -> Result<Nat> {
    let v: num_bigint::BigUint = s
        .trim()
        .parse()
        .map_err(|_| anyhow!("expected a decimal natural, got `{s}`"))?;
    Ok(Nat::from_biguint(v))
}

/// Resolve a program argument: `@name` (corpus), a file path, or a decimal
/// index.
fn resolve_program(arg: &str) -> Result<Index> {
    if let Some(name) = arg.strip_prefix('@') {
        let p = corpus::by_name(name)
            .ok_or_else(|| anyhow!("unknown corpus program `{name}`"))?;
        return Ok(p.encode());
    }
    if Path::new(arg).exists() {
        let src = std::fs::read_to_string(arg)
            .with_context(|| format!("cannot read program file {arg}"))?;
        let p = parse_program(&src).with_context(|| format!("cannot parse {arg}"))?;
        return Ok(p.encode());
    }
    if arg.chars().all(|c| c.is_ascii_digit()) && !arg.is_empty() {
        return Ok(Index(parse_nat_arg(arg)?));
    }
    Err(anyhow!(
        "`{arg}` is neither a file, a decimal index, nor an @name corpus program"
    ))
}

fn print_index(label: &str, i: &Index) {
    println!("{label} {}", nat_to_decimal(i.nat(), PRINT_LIMIT_BITS));
}

fn outcome_line(out: &Outcome) -> String {
    match out {
        Outcome::Halted { value, steps } => {
            format!("HALT {} steps={steps}", nat_to_decimal(value, PRINT_LIMIT_BITS))
        }
        Outcome::Exhausted { budget } => format!("EXHAUSTED budget={budget}"),
    }
}

fn report_equiv(r: &evaluator::EquivReport) -> bool {
    for (x, v) in &r.verdicts {
        match v {
            Verdict::Agree(val) => println!(
                "  {x} AGREE {}",
                nat_to_decimal(val, PRINT_LIMIT_BITS)
            ),
            Verdict::BothExhausted => println!("  {x} BOTH-EXHAUSTED"),
            Verdict::Disagree { left, right } => println!(
                "  {x} DISAGREE left={} right={}",
                outcome_line(left),
                outcome_line(right)
            ),
        }
    }
    r.pass()
}

pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap renders help/version on stdout with success
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(cli) {
        Ok(pass) => {
            if pass {
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

fn dispatch(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Run { program, input, common, trace } => {
            let p = resolve_program(&program)?;
            let x = parse_nat_arg(&input)?;
            let out = if trace {
                let mut sink = |step: u64, stmt: &fixpoint::objlang::Stmt| {
                    println!("[{step}] {}", fixpoint::text::print_stmts(&[stmt.clone()]).trim_end());
                };
                run_traced(&p, &x, Fuel(common.fuel), &mut sink)
            } else {
                run(&p, &x, Fuel(common.fuel))
            };
            println!("{}", outcome_line(&out));
            Ok(true)
        }
        Command::Encode { program } => {
            let p = resolve_program(&program)?;
            println!("{}", nat_to_decimal(p.nat(), PRINT_LIMIT_BITS));
            Ok(true)
        }
        Command::Decode { program } => {
            let p = resolve_program(&program)?;
            print!("{}", print_program(&decode(&p)));
            Ok(true)
        }
        Command::Smn { program, x, opt } => {
            let p = resolve_program(&program)?;
            let x = parse_nat_arg(&x)?;
            let s = if opt { smn_opt(&p, &x) } else { smn(&p, &x) };
            println!("{}", nat_to_decimal(s.nat(), PRINT_LIMIT_BITS));
            print!("{}", print_program(&decode(&s)));
            Ok(true)
        }
        Command::Fix { which } => dispatch_fix(which),
        Command::Lfp { via, program, common } => {
            let fuel = Fuel(common.fuel);
            let inputs = parse_inputs(&common.inputs)?;
            let lfp = match via.as_str() {
                "dovetail" => {
                    let q = EffectiveOp::new(resolve_program(&program)?);
                    frt_lfp(&q)
                }
                "stdform" => {
                    let f = resolve_program(&program)?;
                    lfp_via_stdform(&f)
                }
                "oracle" => {
                    let src = std::fs::read_to_string(&program)
                        .with_context(|| format!("cannot read oracle program {program}"))?;
                    let f = parse_oracle_program(&src)?;
                    odifreddi_lfp(&f)
                }
                other => return Err(anyhow!("unknown --via `{other}`")),
            };
            print_index("lfp", &lfp);
            for x in &inputs {
                let out = run(&lfp, x, fuel);
                println!("{x} {}", outcome_line(&out));
            }
            Ok(true)
        }
        Command::Counterexample { common } => {
            let fuel = Fuel(common.fuel);
            let report = nonminimal_counterexample(fuel);
            print_index("m", &report.m);
            print_index("n(m)", &report.n_m);
            println!("echo-off-singularity {}", verdict(report.echo_ok));
            println!("singularity-maps-to-t {}", verdict(report.singularity_ok));
            println!("srt-fixed-point-constant-zero {}", verdict(report.constant_zero_ok));
            // the separation against the two least-fixed-point routes
            let lfp_dove = frt_lfp(&EffectiveOp::new(report.m.clone()));
            let lfp_std = lfp_via_stdform(&report.m);
            let mut all_exhaust = true;
            for x in 0..10u64 {
                let x = Nat::from_u64(x);
                if run(&lfp_dove, &x, fuel).is_halted() || run(&lfp_std, &x, fuel).is_halted() {
                    all_exhaust = false;
                }
            }
            println!("least-fixed-point-empty {}", verdict(all_exhaust));
            Ok(report.pass() && all_exhaust)
        }
        Command::Sasso { common } => {
            let report = sasso_demo(Fuel(common.fuel));
            for case in &report.cases {
                println!(
                    "oracle={} worker={} query-left={} query-right={}",
                    case.oracle,
                    outcome_line(&case.worker),
                    outcome_line(&case.query_left),
                    outcome_line(&case.query_right)
                );
            }
            let pass = report.pass();
            println!("separation {}", verdict(pass));
            Ok(pass)
        }
        Command::Compactness { transformer, graph_of, x, rounds, max_candidates, common } => {
            let q = EffectiveOp::new(resolve_program(&transformer)?);
            let g = resolve_program(&graph_of)?;
            match compactness_probe(&q, &g, x, Fuel(common.fuel), rounds, max_candidates) {
                functionals::CompactnessResult::Witness {
                    theta,
                    theta_code,
                    value,
                    candidates_tried,
                    codes_examined,
                } => {
                    println!(
                        "WITNESS code={} entries={} value={} candidates={candidates_tried} codes-examined={codes_examined}",
                        nat_to_decimal(&theta_code, PRINT_LIMIT_BITS),
                        theta
                            .entries()
                            .iter()
                            .map(|(a, v)| format!("{a}↦{v}"))
                            .collect::<Vec<_>>()
                            .join(","),
                        nat_to_decimal(&value, PRINT_LIMIT_BITS),
                    );
                    Ok(true)
                }
                functionals::CompactnessResult::FailureWithinBound {
                    candidates_tried,
                    codes_examined,
                } => {
                    println!(
                        "NO-WITNESS-WITHIN-BOUND candidates={candidates_tried} codes-examined={codes_examined}"
                    );
                    Ok(false)
                }
                functionals::CompactnessResult::BaseValueUnavailable => {
                    println!("BASE-VALUE-UNAVAILABLE");
                    Ok(false)
                }
            }
        }
        Command::Futamura { source, common } => {
            let src = resolve_program(&source)?;
            let inputs = parse_inputs(&common.inputs)?;
            let extra: Vec<(String, Index)> = corpus::all_named()
                .into_iter()
                .filter(|(n, _)| ["identity", "succ", "add"].contains(n))
                .map(|(n, p)| (n.to_string(), p.encode()))
                .collect();
            let report = futamura::project(
                &src,
                &extra,
                &inputs,
                Fuel(common.fuel),
                Fuel(common.fuel.saturating_mul(10)),
            )?;
            print_index("source", &report.source);
            print_index("target", &report.target);
            print_index("compiler", &report.compiler);
            print_index("cogen", &report.cogen);
            println!("first-law {}", verdict(report.first_law.pass()));
            for (name, r) in &report.second_law {
                println!("second-law[{name}] {}", verdict(r.pass()));
            }
            for (name, r) in &report.third_law {
                println!("third-law[{name}] {}", verdict(r.pass()));
            }
            for c in &report.comparisons {
                println!(
                    "steps input={} target={} interpreted={} opt-target={}",
                    c.input,
                    c.target_steps,
                    c.interpreted_steps,
                    c.opt_target_steps
                        .map(|s| s.to_string())
                        .unwrap_or_else(|| "-".into())
                );
            }
            let ratio = report.aggregate_ratio();
            println!("aggregate-ratio {ratio:.4}");
            Ok(report.laws_pass() && ratio < 2.0)
        }
        Command::CheckEquiv { a, b, common } => {
            let a = resolve_program(&a)?;
            let b = resolve_program(&b)?;
            let inputs = parse_inputs(&common.inputs)?;
            let r = check_equiv(&a, &b, &inputs, Fuel(common.fuel));
            let pass = report_equiv(&r);
            println!("{}", if pass { "PASS" } else { "FAIL" });
            Ok(pass)
        }
        Command::CorpusTest { dir, common } => corpus_test(&dir, &common),
        Command::CorpusDump { dir } => {
            std::fs::create_dir_all(&dir)?;
            for (name, p) in corpus::all_named() {
                let path = dir.join(format!("{}.while", name.replace(' ', "-")));
                std::fs::write(&path, print_program(&p))?;
                println!("wrote {}", path.display());
            }
            Ok(true)
        }
    }
}

#[derive(Subcommand)]
enum FixCommand {
    /// Kleene-style fixed point of a blueprint expecting pair(self, y).
    Kleene {
        blueprint: String,
        /// Verify the fixed-point law on the sample inputs.
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Rogers-style fixed point of a code transformer.
    Rogers {
        transformer: String,
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        common: Common,
    },
}

fn dispatch_fix(cmd: FixCommand) -> Result<bool> {
    match cmd {
        FixCommand::Kleene { blueprint, verify, common } => {
            let p = resolve_program(&blueprint)?;
            let e = kleene_fix(&Blueprint(p.clone()));
            print_index("fixed-point", &e);
            if verify {
                let inputs = parse_inputs(&common.inputs)?;
                let fuel = Fuel(common.fuel);
                let mut ok = true;
                for y in &inputs {
                    let lhs = run(&e, y, fuel);
                    let rhs = run(&p, &fixpoint::pair_nat(e.nat(), y), fuel);
                    let agree = match (&lhs, &rhs) {
                        (
                            Outcome::Halted { value: a, .. },
                            Outcome::Halted { value: b, .. },
                        ) => a == b,
                        (Outcome::Exhausted { .. }, Outcome::Exhausted { .. }) => true,
                        _ => false,
                    };
                    println!("{y} {}", if agree { "AGREE" } else { "DISAGREE" });
                    ok &= agree;
                }
                return Ok(ok);
            }
            Ok(true)
        }
        FixCommand::Rogers { transformer, verify, common } => {
            let f = resolve_program(&transformer)?;
            let e = rogers_fix(&f);
            print_index("fixed-point", &e);
            if verify {
                let inputs = parse_inputs(&common.inputs)?;
                match rogers_check(&f, &e, &inputs, Fuel(common.fuel)) {
                    RogersVerdict::Verified(r) => {
                        let pass = report_equiv(&r);
                        println!("{}", if pass { "PASS" } else { "FAIL" });
                        return Ok(pass);
                    }
                    RogersVerdict::Indeterminate => {
                        println!("INDETERMINATE (transformer exhausted its budget on the fixed point)");
                        return Ok(true);
                    }
                }
            }
            Ok(true)
        }
    }
}

fn verdict(b: bool) -> &'static str {
    if b {
        "PASS"
    } else {
        "FAIL"
    }
}

fn corpus_test(dir: &Path, common: &Common) -> Result<bool> {
    let fuel = Fuel(common.fuel);
    let mut all = true;
    for (name, built) in corpus::all_named() {
        let path = dir.join(format!("{name}.while"));
        let src = std::fs::read_to_string(&path)
            .with_context(|| format!("missing corpus file {}", path.display()))?;
        let parsed = parse_program(&src)
            .with_context(|| format!("cannot parse {}", path.display()))?;
        let same = parsed == built;
        println!("{name} parse-matches-builtin {}", verdict(same));
        all &= same;
        // sampled behavior of file-loaded vs built-in
        let r = check_equiv(
            &parsed.encode(),
            &built.encode(),
            &evaluator::inputs_upto(5),
            fuel,
        );
        println!("{name} behavior {}", verdict(r.pass()));
        all &= r.pass();
    }
    // spot behaviors
    let fact = corpus::factorial_program().encode();
    let out = run(&fact, &Nat::from_u64(5), fuel);
    let ok = out.value().and_then(|v| v.to_u64()) == Some(120);
    println!("factorial-of-5 {}", verdict(ok));
    all &= ok;
    let _ = enumerate_graph(&Index::from_u64(0), 3);
    let _ = (identity_op(), factorial_step_op());
    Ok(all)
}
