//! Argument definitions.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "stealthkit",
    version,
    about = "Dual-key stealth addresses on secp256k1: key generation, announcements, \
             view-tag scanning, registry and anti-spam tooling"
)]
pub struct Cli {
    /// Config file (TOML); defaults to $STEALTHKIT_CONFIG when set
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Emit machine-readable JSON instead of human output
    #[arg(long, global = true)]
    pub json: bool,

    /// Announcement log path (overrides config)
    #[arg(long, global = true)]
    pub log_path: Option<PathBuf>,

    /// Registry snapshot path (overrides config)
    #[arg(long, global = true)]
    pub registry_path: Option<PathBuf>,

    /// Stake ledger path (overrides config)
    #[arg(long, global = true)]
    pub stake_path: Option<PathBuf>,

    /// Chain id for meta-address strings (overrides config)
    #[arg(long, global = true)]
    pub chain_id: Option<String>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Generate dual stealth keys and print the stealth meta-address
    Keygen(KeygenArgs),
    /// Derive a stealth address for a recipient and append an announcement
    Send(SendArgs),
    /// Scan the announcement log for payments to your keys
    Scan(ScanArgs),
    /// Register a stealth meta-address for a caller
    Register(RegisterArgs),
    /// Register a stealth meta-address on behalf of a registrant
    #[command(name = "register-on-behalf")]
    RegisterOnBehalf(RegisterOnBehalfArgs),
    /// Look up a registrant's stealth meta-address
    Resolve(ResolveArgs),
    /// Lock a stake for a user
    Stake(StakeArgs),
    /// Request unstaking (starts the delay clock)
    Unstake(UnstakeArgs),
    /// Withdraw a stake after the unstake delay
    Withdraw(WithdrawArgs),
    /// Order the announcement log by the callers' priority factors
    Prioritize,
    /// Compare legacy and view-tag parsing over synthetic announcements
    Bench(BenchArgs),
    /// Print the per-announcement toll under the cost model
    Toll(TollArgs),
    /// Inspect announcement log records
    Log(LogArgs),
}

#[derive(Args)]
pub struct KeygenArgs {
    /// Where to write the key file (created with mode 0600)
    #[arg(long)]
    pub out: PathBuf,

    /// Overwrite an existing key file
    #[arg(long)]
    pub force: bool,

    /// Deterministic seed — INSECURE, for tests only
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args)]
pub struct SendArgs {
    /// Recipient: a st:<chainId>:0x… meta-address or a 0x… registrant
    /// address resolved through the registry
    #[arg(long)]
    pub to: String,

    /// Caller identity recorded in the announcement
    #[arg(long, default_value = "0x0000000000000000000000000000000000000000")]
    pub caller: String,

    /// Scheme id used for registry resolution
    #[arg(long, default_value_t = 1)]
    pub scheme: u64,

    /// ERC-20 token contract address (switches metadata to the token layout)
    #[arg(long, conflicts_with = "erc721")]
    pub erc20: Option<String>,

    /// ERC-721 token contract address
    #[arg(long)]
    pub erc721: Option<String>,

    /// Token amount (decimal) for --erc20
    #[arg(long)]
    pub amount: Option<String>,

    /// Token id (decimal) for --erc721
    #[arg(long)]
    pub token_id: Option<String>,

    /// Deterministic ephemeral key seed — INSECURE, for tests only
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args)]
pub struct ScanArgs {
    /// Key file produced by keygen
    #[arg(long)]
    pub keys: PathBuf,

    /// Parsing mode: viewtag or legacy
    #[arg(long, default_value = "viewtag")]
    pub mode: String,

    /// Act as a parsing provider: ignore the spending private key
    #[arg(long)]
    pub provider: bool,

    /// Worker threads
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,

    /// Start scanning from this announcement index
    #[arg(long, default_value_t = 0)]
    pub from_index: u64,
}

#[derive(Args)]
pub struct RegisterArgs {
    /// Registering caller address (0x…)
    #[arg(long)]
    pub registrant: String,

    /// Meta-address string st:…; defaults to the one in --keys
    #[arg(long)]
    pub meta: Option<String>,

    /// Key file to take the meta-address from
    #[arg(long)]
    pub keys: Option<PathBuf>,

    #[arg(long, default_value_t = 1)]
    pub scheme: u64,
}

#[derive(Args)]
pub struct RegisterOnBehalfArgs {
    /// Registrant address (0x…) the meta-address is registered for
    #[arg(long)]
    pub registrant: String,

    /// Meta-address string st:…
    #[arg(long)]
    pub meta: String,

    /// 65-byte signature r‖s‖v as 0x-hex
    #[arg(long, conflicts_with = "sign_with")]
    pub signature: Option<String>,

    /// Sign here with the registrant's private key (0x-hex scalar) —
    /// convenience for tests and local flows
    #[arg(long)]
    pub sign_with: Option<String>,

    #[arg(long, default_value_t = 1)]
    pub scheme: u64,
}

#[derive(Args)]
pub struct ResolveArgs {
    /// Registrant address (0x…)
    #[arg(long)]
    pub registrant: String,

    #[arg(long, default_value_t = 1)]
    pub scheme: u64,
}

#[derive(Args)]
pub struct StakeArgs {
    /// Staking user address (0x…)
    #[arg(long)]
    pub user: String,

    /// Amount in wei
    #[arg(long)]
    pub amount_wei: String,

    /// Unix-seconds timestamp override (defaults to the system clock)
    #[arg(long)]
    pub now: Option<u64>,
}

#[derive(Args)]
pub struct UnstakeArgs {
    #[arg(long)]
    pub user: String,

    #[arg(long)]
    pub now: Option<u64>,
}

#[derive(Args)]
pub struct WithdrawArgs {
    #[arg(long)]
    pub user: String,

    #[arg(long)]
    pub now: Option<u64>,
}

#[derive(Args)]
pub struct BenchArgs {
    /// Number of synthetic announcements
    #[arg(long, default_value_t = 50_000)]
    pub n: usize,

    /// Corpus seed
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Args)]
pub struct TollArgs {
    #[arg(long)]
    pub c_mul: Option<u64>,

    #[arg(long)]
    pub c_hash: Option<u64>,

    #[arg(long)]
    pub c_add: Option<u64>,

    #[arg(long)]
    pub gas_price_gwei: Option<u64>,

    #[arg(long)]
    pub eth_usd: Option<f64>,
}

#[derive(Args)]
pub struct LogArgs {
    /// First index to print
    #[arg(long)]
    pub from: Option<u64>,

    /// One past the last index to print
    #[arg(long)]
    pub to: Option<u64>,
}
