//! Spam economics: the per-announcement toll estimator and the
//! staking-based prioritization of announcements.
//!
//! The toll floor covers the work an announcement imposes on every
//! scanning recipient up to the view-tag check: one EC multiplication
//! plus one hash. Gas figures for the announce call itself are the
//! measured constants for the four parameter layouts.
//!
//! Prioritization combines two factors per announcing user: the staked
//! deposit capped at `min_stake_value` (PF1) and the inverse announcement
//! count (PF2), weighted as `w1·PF1 + w2·PF2`. The two terms carry
//! different units (wei versus dimensionless); the formula is implemented
//! literally, with the weights and cap configurable so operators can
//! normalize, e.g. by expressing stakes in whole ether. Factor arithmetic
//! is exact rational arithmetic, so orderings are never at the mercy of
//! float rounding.

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::announcer::Announcement;
use crate::codec::EthAddress;
use crate::error::{Error, Result};

/// Gas-cost constants and price assumptions for the cost model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GasCostModel {
    /// Gas per EC multiplication (precompile pricing).
    pub c_mul: u64,
    /// Gas per keccak-256 of a 64-byte input.
    pub c_hash: u64,
    /// Gas per EC addition (precompile pricing).
    pub c_add: u64,
    /// Assumed gas price in gwei.
    pub gas_price_gwei: u64,
    /// Assumed price of one ether in US dollars.
    pub eth_usd: f64,
}

impl Default for GasCostModel {
    fn default() -> Self {
        GasCostModel {
            c_mul: 40_000,
            c_hash: 42,
            c_add: 500,
            gas_price_gwei: 10,
            eth_usd: 2_000.0,
        }
    }
}

/// A toll quote in gas, ether and dollars.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TollQuote {
    pub gas: u64,
    pub eth: f64,
    pub usd: f64,
}

/// The per-announcement toll floor `T = c_mul + c_hash`: what a sender
/// must at least pay to match the parsing cost they impose on a single
/// recipient before the view-tag cut-off.
pub fn toll(model: &GasCostModel) -> TollQuote {
    let gas = model.c_mul + model.c_hash;
    let eth = gas as f64 * model.gas_price_gwei as f64 * 1e-9;
    TollQuote {
        gas,
        eth,
        usd: eth * model.eth_usd,
    }
}

/// Full parsing cost of one announcement without view tags:
/// `2(c_mul + c_hash) + c_add` gas-equivalent units.
pub fn legacy_parse_cost(model: &GasCostModel) -> u64 {
    2 * (model.c_mul + model.c_hash) + model.c_add
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AnnounceKind {
    Ether,
    Erc20,
}

/// Measured gas usage of the announce call for the four parameter
/// layouts (metadata present or empty, ephemeral key compressed or not).
pub fn announce_gas_estimate(kind: AnnounceKind, compressed: bool) -> u64 {
    match (kind, compressed) {
        (AnnounceKind::Erc20, false) => 35_492,
        (AnnounceKind::Ether, false) => 34_057,
        (AnnounceKind::Erc20, true) => 35_064,
        (AnnounceKind::Ether, true) => 33_629,
    }
}

/// One user's stake.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StakeRecord {
    pub user: EthAddress,
    #[serde(with = "wei_string")]
    pub amount_wei: u128,
    pub staked_at: u64,
    pub unstake_requested_at: Option<u64>,
}

mod wei_string {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &u128, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<u128, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Weights and thresholds feeding the prioritization factor.
#[derive(Clone, Debug, PartialEq)]
pub struct PriorityWeights {
    pub w1: BigRational,
    pub w2: BigRational,
    pub min_stake_value_wei: u128,
    pub min_unstake_delay_secs: u64,
}

impl Default for PriorityWeights {
    fn default() -> Self {
        PriorityWeights {
            w1: BigRational::one(),
            w2: BigRational::one(),
            // 1 ether; operators agree on this off-chain and can override.
            min_stake_value_wei: 1_000_000_000_000_000_000,
            // one day
            min_unstake_delay_secs: 86_400,
        }
    }
}

impl PriorityWeights {
    /// Parses a weight from `"n"` or `"n/d"` decimal strings.
    pub fn parse_weight(s: &str) -> Result<BigRational> {
        let parse_int = |t: &str| -> Result<BigInt> {
            t.trim()
                .parse::<BigInt>()
                .map_err(|e| Error::Hex(format!("bad weight {s:?}: {e}")))
        };
        let ratio = match s.split_once('/') {
            Some((num, den)) => {
                let den = parse_int(den)?;
                if den.is_zero() {
                    return Err(Error::Hex(format!("bad weight {s:?}: zero denominator")));
                }
                BigRational::new(parse_int(num)?, den)
            }
            None => BigRational::from_integer(parse_int(s)?),
        };
        if ratio.is_negative() {
            return Err(Error::Hex(format!("weight {s:?} must be non-negative")));
        }
        Ok(ratio)
    }
}

/// The staking ledger. Time is injected as integer unix seconds so delay
/// handling is deterministic.
#[derive(Default, Clone, Debug)]
pub struct StakeLedger {
    records: BTreeMap<EthAddress, StakeRecord>,
}

#[derive(Serialize, Deserialize)]
struct LedgerFile {
    records: Vec<StakeRecord>,
}

impl StakeLedger {
    pub fn new() -> StakeLedger {
        StakeLedger::default()
    }

    /// Locks `amount_wei` for `user`. Deposits accumulate; staking again
    /// cancels any pending unstake request.
    pub fn stake(&mut self, user: EthAddress, amount_wei: u128, now: u64) -> Result<()> {
        if amount_wei == 0 {
            return Err(Error::StakeLocked("stake amount must be positive".into()));
        }
        let record = self.records.entry(user).or_insert(StakeRecord {
            user,
            amount_wei: 0,
            staked_at: now,
            unstake_requested_at: None,
        });
        record.amount_wei += amount_wei;
        record.unstake_requested_at = None;
        Ok(())
    }

    /// Starts the unstake clock for `user`.
    pub fn request_unstake(&mut self, user: &EthAddress, now: u64) -> Result<()> {
        let record = self.records.get_mut(user).ok_or(Error::UnknownUser)?;
        record.unstake_requested_at = Some(now);
        Ok(())
    }

    /// Releases the stake once the delay has elapsed (boundary inclusive:
    /// withdrawal at exactly `requested_at + delay` succeeds). Returns the
    /// released amount.
    pub fn withdraw(&mut self, user: &EthAddress, now: u64, delay_secs: u64) -> Result<u128> {
        let record = self.records.get(user).ok_or(Error::UnknownUser)?;
        let requested_at = record.unstake_requested_at.ok_or_else(|| {
            Error::StakeLocked("no unstake request on record".into())
        })?;
        let unlocked_at = requested_at.saturating_add(delay_secs);
        if now < unlocked_at {
            return Err(Error::StakeLocked(format!(
                "{} seconds remaining",
                unlocked_at - now
            )));
        }
        let amount = record.amount_wei;
        self.records.remove(user);
        Ok(amount)
    }

    /// Deposited amount, zero for unknown users.
    pub fn deposit_of(&self, user: &EthAddress) -> u128 {
        self.records.get(user).map(|r| r.amount_wei).unwrap_or(0)
    }

    pub fn records(&self) -> impl Iterator<Item = &StakeRecord> {
        self.records.values()
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = LedgerFile {
            records: self.records.values().cloned().collect(),
        };
        std::fs::write(path, serde_json::to_string_pretty(&file).expect("ledger serializes"))?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<StakeLedger> {
        let json = std::fs::read_to_string(path)?;
        let file: LedgerFile = serde_json::from_str(&json).map_err(|e| Error::LogCorrupt {
            line: 0,
            reason: format!("stake ledger: {e}"),
        })?;
        let mut ledger = StakeLedger::new();
        for record in file.records {
            ledger.records.insert(record.user, record);
        }
        Ok(ledger)
    }
}

/// `PF(u) = w1·min(D(u), min_stake) + w2/n(u)` where `n(u)` counts the
/// announcements whose caller is `u`. Undefined for users with no
/// announcements.
pub fn priority_factor(
    ledger: &StakeLedger,
    weights: &PriorityWeights,
    announcements: &[Announcement],
    user: &EthAddress,
) -> Result<BigRational> {
    let n = announcements.iter().filter(|a| a.caller == *user).count();
    if n == 0 {
        return Err(Error::UndefinedPriority);
    }
    Ok(factor_for(ledger, weights, user, n))
}

fn factor_for(
    ledger: &StakeLedger,
    weights: &PriorityWeights,
    user: &EthAddress,
    announcement_count: usize,
) -> BigRational {
    let deposit = ledger.deposit_of(user).min(weights.min_stake_value_wei);
    let pf1 = BigRational::from_integer(BigInt::from(deposit));
    let pf2 = BigRational::new(BigInt::one(), BigInt::from(announcement_count));
    &weights.w1 * pf1 + &weights.w2 * pf2
}

/// Priority factors of every caller appearing in the slice.
pub fn priority_factors(
    ledger: &StakeLedger,
    weights: &PriorityWeights,
    announcements: &[Announcement],
) -> BTreeMap<EthAddress, BigRational> {
    let mut counts: BTreeMap<EthAddress, usize> = BTreeMap::new();
    for ann in announcements {
        *counts.entry(ann.caller).or_default() += 1;
    }
    counts
        .into_iter()
        .map(|(user, n)| {
            let pf = factor_for(ledger, weights, &user, n);
            (user, pf)
        })
        .collect()
}

/// Reorders announcements by their caller's priority factor, descending.
/// The sort is stable, so announcements with equal factors keep their log
/// order, and nothing is ever dropped — spam is deprioritized, not
/// censored.
pub fn prioritize(
    ledger: &StakeLedger,
    weights: &PriorityWeights,
    announcements: &[Announcement],
) -> Vec<Announcement> {
    let factors = priority_factors(ledger, weights, announcements);
    let mut out = announcements.to_vec();
    out.sort_by(|a, b| factors[&b.caller].cmp(&factors[&a.caller]));
    out
}

/// Formats a rational factor for display: exact `num/den` plus a float
/// approximation.
pub fn format_factor(pf: &BigRational) -> String {
    let approx = pf.to_f64().unwrap_or(f64::NAN);
    if pf.is_integer() {
        format!("{} (~{approx:.6})", pf.numer())
    } else {
        format!("{}/{} (~{approx:.6})", pf.numer(), pf.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::announcer::MetadataPayload;

    fn addr(byte: u8) -> EthAddress {
        EthAddress([byte; 20])
    }

    fn ann(index: u64, caller: EthAddress) -> Announcement {
        Announcement {
            index,
            scheme_id: 1,
            stealth_address: addr(0xee),
            caller,
            ephemeral_pub_key: [0x02; 33],
            metadata: MetadataPayload::ether(0x01).to_bytes(),
        }
    }

    const ONE_ETH: u128 = 1_000_000_000_000_000_000;

    #[test]
    fn toll_matches_published_figures() {
        let quote = toll(&GasCostModel::default());
        assert_eq!(quote.gas, 40_042);
        // Quotes display at four decimals: 0.0004 ETH.
        assert_eq!(format!("{:.4}", quote.eth), "0.0004");
        assert!((quote.eth - 0.00040042).abs() < 1e-12);
    }

    #[test]
    fn toll_includes_hash_contribution() {
        let base = toll(&GasCostModel {
            c_hash: 0,
            ..GasCostModel::default()
        });
        let full = toll(&GasCostModel::default());
        assert_eq!(full.gas - base.gas, 42);
    }

    #[test]
    fn toll_zero_gas_price_is_free() {
        let quote = toll(&GasCostModel {
            gas_price_gwei: 0,
            ..GasCostModel::default()
        });
        assert_eq!(quote.eth, 0.0);
        assert_eq!(quote.usd, 0.0);
    }

    #[test]
    fn toll_covers_single_recipient_cost() {
        let model = GasCostModel::default();
        assert!(toll(&model).gas >= model.c_mul + model.c_hash);
    }

    #[test]
    fn legacy_cost_formula() {
        assert_eq!(legacy_parse_cost(&GasCostModel::default()), 80_584);
        assert_eq!(
            legacy_parse_cost(&GasCostModel {
                c_add: 0,
                ..GasCostModel::default()
            }),
            80_084
        );
    }

    #[test]
    fn legacy_cost_scales_linearly() {
        let model = GasCostModel::default();
        let doubled = GasCostModel {
            c_mul: model.c_mul * 2,
            c_hash: model.c_hash * 2,
            c_add: model.c_add * 2,
            ..model.clone()
        };
        assert_eq!(legacy_parse_cost(&doubled), 2 * legacy_parse_cost(&model));
    }

    #[test]
    fn announce_gas_table() {
        assert_eq!(announce_gas_estimate(AnnounceKind::Erc20, false), 35_492);
        assert_eq!(announce_gas_estimate(AnnounceKind::Ether, false), 34_057);
        assert_eq!(announce_gas_estimate(AnnounceKind::Erc20, true), 35_064);
        assert_eq!(announce_gas_estimate(AnnounceKind::Ether, true), 33_629);
    }

    #[test]
    fn compression_savings_round_to_published_percentages() {
        let erc20 = 1.0 - 35_064.0 / 35_492.0;
        let ether = 1.0 - 33_629.0 / 34_057.0;
        assert_eq!(format!("{:.2}", erc20 * 100.0), "1.21");
        assert_eq!(format!("{:.2}", ether * 100.0), "1.26");
    }

    #[test]
    fn stake_then_immediate_withdraw_is_locked() {
        let mut ledger = StakeLedger::new();
        ledger.stake(addr(1), ONE_ETH, 1_000).unwrap();
        assert!(matches!(
            ledger.withdraw(&addr(1), 1_000, 86_400),
            Err(Error::StakeLocked(_))
        ));
    }

    #[test]
    fn withdraw_at_exact_boundary_succeeds() {
        let mut ledger = StakeLedger::new();
        ledger.stake(addr(1), ONE_ETH, 0).unwrap();
        ledger.request_unstake(&addr(1), 1_000).unwrap();
        assert!(matches!(
            ledger.withdraw(&addr(1), 1_000 + 86_399, 86_400),
            Err(Error::StakeLocked(_))
        ));
        let mut boundary = ledger.clone();
        assert_eq!(boundary.withdraw(&addr(1), 1_000 + 86_400, 86_400).unwrap(), ONE_ETH);
    }

    #[test]
    fn withdraw_unknown_user() {
        let mut ledger = StakeLedger::new();
        assert!(matches!(
            ledger.withdraw(&addr(9), 0, 86_400),
            Err(Error::UnknownUser)
        ));
    }

    #[test]
    fn deposits_accumulate() {
        let mut ledger = StakeLedger::new();
        ledger.stake(addr(1), 100, 0).unwrap();
        ledger.stake(addr(1), 250, 10).unwrap();
        assert_eq!(ledger.deposit_of(&addr(1)), 350);
    }

    #[test]
    fn staking_again_cancels_pending_unstake() {
        let mut ledger = StakeLedger::new();
        ledger.stake(addr(1), 100, 0).unwrap();
        ledger.request_unstake(&addr(1), 5).unwrap();
        ledger.stake(addr(1), 1, 6).unwrap();
        assert!(matches!(
            ledger.withdraw(&addr(1), 1_000_000, 86_400),
            Err(Error::StakeLocked(_))
        ));
    }

    #[test]
    fn pf_caps_stake_at_min_stake_value() {
        let weights = PriorityWeights::default();
        let mut ledger = StakeLedger::new();
        ledger.stake(addr(1), 2 * weights.min_stake_value_wei, 0).unwrap();
        let anns = vec![ann(0, addr(1))];
        let pf = priority_factor(&ledger, &weights, &anns, &addr(1)).unwrap();
        let expected = BigRational::from_integer(BigInt::from(weights.min_stake_value_wei))
            + BigRational::one();
        assert_eq!(pf, expected);
    }

    #[test]
    fn pf_of_unstaked_user_is_inverse_count() {
        let weights = PriorityWeights::default();
        let ledger = StakeLedger::new();
        let anns: Vec<_> = (0..4).map(|i| ann(i, addr(2))).collect();
        let pf = priority_factor(&ledger, &weights, &anns, &addr(2)).unwrap();
        assert_eq!(pf, BigRational::new(BigInt::one(), BigInt::from(4)));
    }

    #[test]
    fn pf_decreases_with_announcement_count() {
        let weights = PriorityWeights::default();
        let mut ledger = StakeLedger::new();
        ledger.stake(addr(1), 500, 0).unwrap();
        ledger.stake(addr(2), 500, 0).unwrap();
        let mut anns = vec![ann(0, addr(1))];
        for i in 0..10 {
            anns.push(ann(1 + i, addr(2)));
        }
        let light = priority_factor(&ledger, &weights, &anns, &addr(1)).unwrap();
        let heavy = priority_factor(&ledger, &weights, &anns, &addr(2)).unwrap();
        assert!(light > heavy);
    }

    #[test]
    fn pf_undefined_without_announcements() {
        let weights = PriorityWeights::default();
        let ledger = StakeLedger::new();
        assert!(matches!(
            priority_factor(&ledger, &weights, &[], &addr(1)),
            Err(Error::UndefinedPriority)
        ));
    }

    #[test]
    fn staker_precedes_non_staker() {
        let weights = PriorityWeights::default();
        let mut ledger = StakeLedger::new();
        ledger.stake(addr(2), ONE_ETH, 0).unwrap();
        let anns = vec![ann(0, addr(1)), ann(1, addr(2))];
        let ordered = prioritize(&ledger, &weights, &anns);
        assert_eq!(ordered[0].caller, addr(2));
        assert_eq!(ordered[1].caller, addr(1));
    }

    #[test]
    fn equal_factors_preserve_log_order() {
        let weights = PriorityWeights::default();
        let ledger = StakeLedger::new();
        let anns = vec![ann(0, addr(1)), ann(1, addr(2)), ann(2, addr(1)), ann(3, addr(2))];
        // every caller has two announcements and no stake: equal PF
        let ordered = prioritize(&ledger, &weights, &anns);
        let indices: Vec<u64> = ordered.iter().map(|a| a.index).collect();
        assert_eq!(indices, vec![0, 1, 2, 3]);
    }

    #[test]
    fn spammer_sorts_behind_staker() {
        let weights = PriorityWeights::default();
        let mut ledger = StakeLedger::new();
        ledger.stake(addr(7), ONE_ETH, 0).unwrap();
        let mut anns = vec![ann(0, addr(7))];
        for i in 0..1000 {
            anns.push(ann(1 + i, addr(9)));
        }
        let ordered = prioritize(&ledger, &weights, &anns);
        assert_eq!(ordered.len(), 1001);
        assert_eq!(ordered[0].caller, addr(7));
        assert!(ordered[1..].iter().all(|a| a.caller == addr(9)));
    }

    #[test]
    fn prioritize_is_a_permutation() {
        let weights = PriorityWeights::default();
        let mut ledger = StakeLedger::new();
        ledger.stake(addr(3), 500, 0).unwrap();
        let anns: Vec<_> = (0..20).map(|i| ann(i, addr((i % 3) as u8))).collect();
        let ordered = prioritize(&ledger, &weights, &anns);
        let mut seen: Vec<u64> = ordered.iter().map(|a| a.index).collect();
        seen.sort_unstable();
        assert_eq!(seen, (0..20).collect::<Vec<u64>>());
    }

    #[test]
    fn weight_parsing() {
        assert_eq!(PriorityWeights::parse_weight("1").unwrap(), BigRational::one());
        assert_eq!(
            PriorityWeights::parse_weight("3/2").unwrap(),
            BigRational::new(BigInt::from(3), BigInt::from(2))
        );
        assert!(PriorityWeights::parse_weight("-1").is_err());
        assert!(PriorityWeights::parse_weight("1/0").is_err());
        assert!(PriorityWeights::parse_weight("abc").is_err());
    }

    #[test]
    fn ledger_snapshot_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("stake.json");
        let mut ledger = StakeLedger::new();
        ledger.stake(addr(1), u128::MAX / 2, 77).unwrap();
        ledger.request_unstake(&addr(1), 99).unwrap();
        ledger.save(&path).unwrap();
        let loaded = StakeLedger::load(&path).unwrap();
        assert_eq!(loaded.deposit_of(&addr(1)), u128::MAX / 2);
        let record = loaded.records().next().unwrap();
        assert_eq!(record.unstake_requested_at, Some(99));
        assert_eq!(record.staked_at, 77);
    }
}
