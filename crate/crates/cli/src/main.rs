//! `ordcalc`: normal and anti-normal ordering of functions of the number operator.

mod commands;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use commands::{CommandError, ExpectRequest, Method, State, StateKind, EXIT_USAGE};
use ordcalc_core::verify::Suite;
use output::Format;

#[derive(Debug, Parser)]
#[command(name = "ordcalc", version, about)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OrderArg {
    Normal,
    Antinormal,
}

impl OrderArg {
    fn is_antinormal(self) -> bool {
        self == OrderArg::Antinormal
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Triangular table of Stirling numbers of the second kind.
    Stirling {
        #[arg(long)]
        max_k: u32,
    },
    /// Ordered expansion of n^k or exp(-gamma n).
    Expand(ExpandArgs),
    /// Canonical normal or anti-normal form of an operator expression.
    Rewrite {
        #[arg(long)]
        expr: String,
        #[arg(long, value_enum, default_value_t = OrderArg::Normal)]
        order: OrderArg,
    },
    /// Expectation value of exp(-gamma n) in a coherent or number state.
    Expect(ExpectArgs),
    /// Run identity suites and report the largest error per identity.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
    },
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("what").required(true).args(["power", "exp"])))]
struct ExpandArgs {
    /// Expand n^k.
    #[arg(long)]
    power: Option<u32>,
    /// Expand exp(-gamma n).
    #[arg(long, allow_negative_numbers = true)]
    exp: Option<f64>,
    #[arg(long, value_enum, default_value_t = OrderArg::Normal)]
    order: OrderArg,
    /// Truncation order for --exp.
    #[arg(long, default_value_t = 20)]
    max_m: usize,
}

#[derive(Debug, Args)]
struct ExpectArgs {
    #[arg(long, value_enum)]
    state: StateKind,
    #[arg(long, allow_negative_numbers = true)]
    alpha_re: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    alpha_im: Option<f64>,
    /// Occupation number of a Fock state.
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, allow_negative_numbers = true)]
    gamma: f64,
    #[arg(long, value_enum, default_value_t = Method::Closed)]
    method: Method,
    /// Fock-space truncation for --method matrix.
    #[arg(long, default_value_t = 64)]
    dim: usize,
    /// Series truncation; defaults to 200 for series and 60 for matrix.
    #[arg(long)]
    max_m: Option<usize>,
    /// Expansion evaluated by --method matrix.
    #[arg(long, value_enum, default_value_t = OrderArg::Normal)]
    order: OrderArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Stirling,
    Lemmas,
    Fock,
    All,
}

impl SuiteArg {
    fn suite(self) -> (Suite, &'static str) {
        match self {
            SuiteArg::Stirling => (Suite::Stirling, "stirling"),
            SuiteArg::Lemmas => (Suite::Lemmas, "lemmas"),
            SuiteArg::Fock => (Suite::Fock, "fock"),
            SuiteArg::All => (Suite::All, "all"),
        }
    }
}

fn expect_request(args: &ExpectArgs) -> Result<ExpectRequest, CommandError> {
    let state = match args.state {
        StateKind::Coherent => {
            if args.n.is_some() {
                return Err(CommandError::usage("--n applies only to --state fock"));
            }
            State::Coherent(Complex64::new(
                args.alpha_re.unwrap_or(0.0),
                args.alpha_im.unwrap_or(0.0),
            ))
        }
        StateKind::Fock => {
            if args.alpha_re.is_some() || args.alpha_im.is_some() {
                return Err(CommandError::usage(
                    "--alpha-re/--alpha-im apply only to --state coherent",
                ));
            }
            State::Fock(
                args.n
                    .ok_or_else(|| CommandError::usage("--state fock requires --n"))?,
            )
        }
    };
    let max_m = args.max_m.unwrap_or(match args.method {
        Method::Matrix => 60,
        _ => 200,
    });
    Ok(ExpectRequest {
        state,
        gamma: args.gamma,
        method: args.method,
        dim: args.dim,
        max_m,
        antinormal: args.order.is_antinormal(),
    })
}

fn run(cli: &Cli) -> commands::CommandResult {
    match &cli.command {
        Command::Stirling { max_k } => commands::stirling(*max_k),
        Command::Expand(args) => match (args.power, args.exp) {
            (Some(k), None) => commands::expand_power(k, args.order.is_antinormal()),
            (None, Some(gamma)) => {
                commands::expand_exp(gamma, args.order.is_antinormal(), args.max_m)
            }
            _ => Err(CommandError::usage("give exactly one of --power or --exp")),
        },
        Command::Rewrite { expr, order } => commands::rewrite_expr(expr, order.is_antinormal()),
        Command::Expect(args) => commands::expect(expect_request(args)?),
        Command::Verify { suite } => {
            let (suite, name) = suite.suite();
            commands::verify(suite, name)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.render(cli.format).as_bytes());
            ExitCode::from(out.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
