//! `stealthkit` — stealth address workflows from the command line.

mod cli;
mod commands;
mod config;
mod keysfile;

use clap::Parser;

use cli::{Cli, Command};

/// CLI-level error carrying a process exit code per error class:
/// 1 generic/I/O, 2 usage (clap), 3 not found, 4 validation/format,
/// 5 authorization, 6 corrupt data, 7 stake locked, 8 degenerate secret.
pub struct CliError {
    pub code: u8,
    pub message: String,
}

pub type CliResult<T = ()> = Result<T, CliError>;

impl CliError {
    pub fn usage(message: impl Into<String>) -> CliError {
        CliError {
            code: 4,
            message: message.into(),
        }
    }

    pub fn not_found(message: impl Into<String>) -> CliError {
        CliError {
            code: 3,
            message: message.into(),
        }
    }

    pub fn other(message: impl Into<String>) -> CliError {
        CliError {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<stealthkit::Error> for CliError {
    fn from(e: stealthkit::Error) -> CliError {
        use stealthkit::Error::*;
        let code = match &e {
            UnknownUser => 3,
            IdentityPoint | BadLength { .. } | BadPrefix(_) | OffCurve | MetaFormat(_)
            | Hex(_) | UnsupportedScheme(_) | EmptyMetadata => 4,
            SignatureInvalid(_) | Unauthorized(_) => 5,
            LogCorrupt { .. } | RangeOutOfBounds { .. } => 6,
            StakeLocked(_) => 7,
            DegenerateSecret => 8,
            UndefinedPriority => 4,
            Entropy(_) | Io(_) => 1,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError {
            code: 1,
            message: e.to_string(),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> CliError {
        CliError {
            code: 6,
            message: e.to_string(),
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let result = run(&cli);
    if let Err(e) = result {
        eprintln!("error: {}", e.message);
        std::process::exit(e.code as i32);
    }
}

fn run(cli: &Cli) -> CliResult {
    let cfg = config::load(cli)?;
    match &cli.command {
        Command::Keygen(args) => commands::keygen(cli, &cfg, args),
        Command::Send(args) => commands::send(cli, &cfg, args),
        Command::Scan(args) => commands::scan(cli, &cfg, args),
        Command::Register(args) => commands::register(cli, &cfg, args),
        Command::RegisterOnBehalf(args) => commands::register_on_behalf(cli, &cfg, args),
        Command::Resolve(args) => commands::resolve(cli, &cfg, args),
        Command::Stake(args) => commands::stake(cli, &cfg, args),
        Command::Unstake(args) => commands::unstake(cli, &cfg, args),
        Command::Withdraw(args) => commands::withdraw(cli, &cfg, args),
        Command::Prioritize => commands::prioritize(cli, &cfg),
        Command::Bench(args) => commands::bench(cli, args),
        Command::Toll(args) => commands::toll(cli, &cfg, args),
        Command::Log(args) => commands::log(cli, &cfg, args),
    }
}
