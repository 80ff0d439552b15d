//! Batch parsing over announcement slices, plus the benchmark harness
//! comparing legacy parsing against view-tag parsing.
//!
//! A scan walks a read-only slice of announcements with a key set and a
//! mode, producing the match list, operation counters and wall time.
//! Work may fan out over a configurable number of worker threads using
//! static chunking by index range; the match set is independent of the
//! worker count. The benchmark path is contractually single-threaded.

use std::time::Instant;

use rand_core::SeedableRng;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::announcer::{Announcement, MetadataPayload};
use crate::codec::{to_eth_address, EthAddress};
use crate::curve::Scalar;
use crate::error::Result;
use crate::sap::{
    check_announcement, fresh_dksap, DualKeys, MatchOutcome, OpCounters, ScanKeys, ScanMode,
};
use crate::SCHEME_ID_SECP256K1;

/// One located payment. The stealth secret is populated only when the
/// scan ran with the spending secret available; it is never serialized,
/// only its presence is.
#[derive(Clone, Debug)]
pub struct ScanMatch {
    pub index: u64,
    pub stealth_address: EthAddress,
    pub stealth_secret: Option<Scalar>,
}

impl Serialize for ScanMatch {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let mut s = ser.serialize_struct("ScanMatch", 3)?;
        s.serialize_field("index", &self.index)?;
        s.serialize_field("stealthAddress", &self.stealth_address)?;
        s.serialize_field("stealthSecretKnown", &self.stealth_secret.is_some())?;
        s.end()
    }
}

/// Result of one scan pass.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ScanReport {
    pub mode: ScanMode,
    /// Well-formed announcements that were checked.
    pub scanned: u64,
    /// Announcements skipped because they could not be checked (wrong
    /// scheme, undecodable ephemeral key, empty metadata).
    pub malformed: u64,
    pub matches: Vec<ScanMatch>,
    pub counters: OpCounters,
    pub wall_time_secs: f64,
}

/// Scans announcements with the given keys. `jobs` worker threads split
/// the slice into contiguous chunks; matches are reported in index order
/// regardless of the worker count.
pub fn scan(
    announcements: &[Announcement],
    keys: &ScanKeys,
    mode: ScanMode,
    jobs: usize,
) -> ScanReport {
    let started = Instant::now();
    let jobs = jobs.max(1).min(announcements.len().max(1));
    let chunk_size = announcements.len().div_ceil(jobs);

    let mut report = ScanReport {
        mode,
        scanned: 0,
        malformed: 0,
        matches: Vec::new(),
        counters: OpCounters::default(),
        wall_time_secs: 0.0,
    };

    if jobs == 1 {
        scan_chunk(announcements, keys, mode, &mut report);
    } else {
        let chunks: Vec<&[Announcement]> = announcements.chunks(chunk_size).collect();
        let partials = std::thread::scope(|scope| {
            let handles: Vec<_> = chunks
                .into_iter()
                .map(|chunk| {
                    scope.spawn(move || {
                        let mut partial = ScanReport {
                            mode,
                            scanned: 0,
                            malformed: 0,
                            matches: Vec::new(),
                            counters: OpCounters::default(),
                            wall_time_secs: 0.0,
                        };
                        scan_chunk(chunk, keys, mode, &mut partial);
                        partial
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("scan worker panicked"))
                .collect::<Vec<_>>()
        });
        for partial in partials {
            report.scanned += partial.scanned;
            report.malformed += partial.malformed;
            report.counters.merge(&partial.counters);
            report.matches.extend(partial.matches);
        }
    }

    report.wall_time_secs = started.elapsed().as_secs_f64();
    report
}

fn scan_chunk(chunk: &[Announcement], keys: &ScanKeys, mode: ScanMode, report: &mut ScanReport) {
    for ann in chunk {
        match check_announcement(keys, ann, mode, &mut report.counters) {
            Ok(MatchOutcome::Match {
                stealth_address,
                stealth_secret,
            }) => {
                report.scanned += 1;
                report.matches.push(ScanMatch {
                    index: ann.index,
                    stealth_address,
                    stealth_secret,
                });
            }
            Ok(_) => report.scanned += 1,
            Err(_) => report.malformed += 1,
        }
    }
}

/// Timing comparison between the two parsing modes.
#[derive(Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BenchResult {
    pub n_announcements: u64,
    pub legacy_seconds: f64,
    pub viewtag_seconds: f64,
    /// `legacy_seconds / viewtag_seconds`.
    pub speedup_ratio: f64,
    /// `100 · (1 − viewtag/legacy)`.
    pub reduction_percent: f64,
}

/// A benchmark run: the headline numbers plus both underlying reports.
#[derive(Debug)]
pub struct BenchRun {
    pub result: BenchResult,
    pub legacy: ScanReport,
    pub viewtag: ScanReport,
}

/// A deterministic corpus of announcements none of which pay `scan_keys`.
pub struct DecoyCorpus {
    pub announcements: Vec<Announcement>,
    pub scan_keys: ScanKeys,
}

/// Builds `n` decoy announcements from a seed. Decoys are real payments
/// to a throwaway recipient — genuine curve points, genuine view tags —
/// so the elliptic-curve work of a scan is not mocked. The returned keys
/// belong to a different recipient and match nothing.
pub fn decoy_corpus(n: usize, seed: u64) -> Result<DecoyCorpus> {
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
    let scanner = DualKeys::generate(&mut rng)?;
    let decoy_recipient = DualKeys::generate(&mut rng)?;
    let decoy_meta = decoy_recipient.meta_address("1")?;

    let mut announcements = Vec::with_capacity(n);
    for index in 0..n {
        let (payment, ephemeral) = fresh_dksap(&decoy_meta, &mut rng)?;
        announcements.push(Announcement {
            index: index as u64,
            scheme_id: SCHEME_ID_SECP256K1,
            stealth_address: payment.stealth_address,
            caller: to_eth_address(ephemeral.public())?,
            ephemeral_pub_key: payment.ephemeral_public,
            metadata: MetadataPayload::ether(payment.view_tag.0).to_bytes(),
        });
    }
    Ok(DecoyCorpus {
        announcements,
        scan_keys: ScanKeys::full(&scanner),
    })
}

/// Benchmarks legacy versus view-tag parsing over `n` synthetic
/// announcements generated deterministically from `seed`. Corpus
/// generation happens outside the timed region; both scans run
/// single-threaded.
pub fn bench(n: usize, seed: u64) -> Result<BenchRun> {
    let corpus = decoy_corpus(n, seed)?;
    let legacy = scan(&corpus.announcements, &corpus.scan_keys, ScanMode::Legacy, 1);
    let viewtag = scan(&corpus.announcements, &corpus.scan_keys, ScanMode::ViewTag, 1);
    let result = BenchResult {
        n_announcements: n as u64,
        legacy_seconds: legacy.wall_time_secs,
        viewtag_seconds: viewtag.wall_time_secs,
        speedup_ratio: legacy.wall_time_secs / viewtag.wall_time_secs,
        reduction_percent: 100.0 * (1.0 - viewtag.wall_time_secs / legacy.wall_time_secs),
    };
    Ok(BenchRun {
        result,
        legacy,
        viewtag,
    })
}
