//! Chunked, cached and parallel similarity evaluation.
//!
//! Plain bits are cut into fixed-size aligned chunks. Each chunk pair yields a
//! [`PartialSum`] that is cached under the exact content of both slices, and
//! partial sums are merged in chunk order so the result never depends on the
//! schedule. Per-bit scores are dyadic, so chunk sums are exact and the merged
//! total equals the sequential one bit for bit.

use std::hash::{DefaultHasher, Hash, Hasher};
use std::num::NonZeroUsize;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use lru::LruCache;
use rayon::prelude::*;

use crate::algebra::Bit;
use crate::encoder::{projected_bits, BitCode};
use crate::error::{Error, Result};
use crate::similarity::{
    extreme_report, fcg_pair, finish, segment_entries, sigma_bit, BitScore, PositionEntry,
    SimilarityConfig, SimilarityReport,
};

pub const DEFAULT_CACHE_CAPACITY: usize = 1 << 16;
const SHARDS: usize = 16;

type Shard = Mutex<LruCache<Vec<u8>, PartialSum>>;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PartialSum {
    pub score_sum: f64,
    /// Number of counted positions.
    pub weight_sum: f64,
    pub ignored_count: usize,
    pub undefined_flag: bool,
}

impl PartialSum {
    pub fn of(a: &[Bit], b: &[Bit]) -> PartialSum {
        let mut p = PartialSum::default();
        for (&x, &y) in a.iter().zip(b) {
            match sigma_bit(x, y) {
                BitScore::Score(s) => {
                    p.score_sum += s;
                    p.weight_sum += 1.0;
                }
                BitScore::Ignored => p.ignored_count += 1,
                BitScore::Undefined => p.undefined_flag = true,
            }
        }
        p
    }

    pub fn merge(self, other: PartialSum) -> PartialSum {
        PartialSum {
            score_sum: self.score_sum + other.score_sum,
            weight_sum: self.weight_sum + other.weight_sum,
            ignored_count: self.ignored_count + other.ignored_count,
            undefined_flag: self.undefined_flag || other.undefined_flag,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CacheStats {
    pub entries: usize,
    pub hits: u64,
    pub misses: u64,
}

impl CacheStats {
    pub fn hit_rate(&self) -> f64 {
        let lookups = self.hits + self.misses;
        if lookups == 0 {
            0.0
        } else {
            self.hits as f64 / lookups as f64
        }
    }
}

/// Bounded LRU of chunk-pair partial sums, sharded for concurrent access.
pub struct ChunkCache {
    shards: Option<Vec<Shard>>,
    hits: AtomicU64,
    misses: AtomicU64,
}

impl Default for ChunkCache {
    fn default() -> Self {
        ChunkCache::new(DEFAULT_CACHE_CAPACITY)
    }
}

/// Symmetric key: the smaller slice first, so `(a, b)` and `(b, a)` collide.
fn chunk_key(a: &[Bit], b: &[Bit]) -> Vec<u8> {
    let (x, y) = if a <= b { (a, b) } else { (b, a) };
    x.iter().chain(y).map(|&bit| bit as u8).collect()
}

impl ChunkCache {
    pub fn new(capacity: usize) -> Self {
        let per_shard = NonZeroUsize::new(capacity.div_ceil(SHARDS).max(1)).expect("non-zero");
        ChunkCache {
            shards: Some(
                (0..SHARDS)
                    .map(|_| Mutex::new(LruCache::new(per_shard)))
                    .collect(),
            ),
            hits: AtomicU64::new(0),
            misses: AtomicU64::new(0),
        }
    }

    /// A cache that stores nothing; every lookup computes.
    pub fn disabled() -> Self {
        ChunkCache {
            shards: None,
            hits: AtomicU64::new(0),
            misses: AtomicU64::new(0),
        }
    }

    pub fn is_enabled(&self) -> bool {
        self.shards.is_some()
    }

    /// Returns the partial sum and whether it came from the cache.
    pub fn partial(&self, a: &[Bit], b: &[Bit]) -> (PartialSum, bool) {
        let Some(shards) = &self.shards else {
            return (PartialSum::of(a, b), false);
        };
        let key = chunk_key(a, b);
        let mut h = DefaultHasher::new();
        key.hash(&mut h);
        let shard = &shards[h.finish() as usize % SHARDS];
        if let Some(p) = shard.lock().expect("cache lock").get(&key) {
            self.hits.fetch_add(1, Ordering::Relaxed);
            return (*p, true);
        }
        self.misses.fetch_add(1, Ordering::Relaxed);
        // computed outside the lock; a concurrent duplicate insert stores the same value
        let p = PartialSum::of(a, b);
        shard.lock().expect("cache lock").put(key, p);
        (p, false)
    }

    pub fn stats(&self) -> CacheStats {
        let entries = self.shards.as_ref().map_or(0, |s| {
            s.iter().map(|m| m.lock().expect("cache lock").len()).sum()
        });
        CacheStats {
            entries,
            hits: self.hits.load(Ordering::Relaxed),
            misses: self.misses.load(Ordering::Relaxed),
        }
    }

    /// Drops all entries and resets the counters.
    pub fn clear(&self) {
        if let Some(shards) = &self.shards {
            for s in shards {
                s.lock().expect("cache lock").clear();
            }
        }
        self.hits.store(0, Ordering::Relaxed);
        self.misses.store(0, Ordering::Relaxed);
    }
}

/// Sum over all chunks, merged in chunk order. Returns the sum and the hit count.
fn chunked_sum(
    a: &[Bit],
    b: &[Bit],
    chunk: usize,
    cache: &ChunkCache,
    parallel: bool,
) -> (PartialSum, usize) {
    let chunk = chunk.max(1);
    let parts: Vec<(PartialSum, bool)> = if parallel && a.len() > chunk * 4 {
        a.par_chunks(chunk)
            .zip(b.par_chunks(chunk))
            .map(|(x, y)| cache.partial(x, y))
            .collect()
    } else {
        a.chunks(chunk)
            .zip(b.chunks(chunk))
            .map(|(x, y)| cache.partial(x, y))
            .collect()
    };
    parts
        .into_iter()
        .fold((PartialSum::default(), 0), |(acc, hits), (p, hit)| {
            (acc.merge(p), hits + hit as usize)
        })
}

fn first_undefined(a: &[Bit], b: &[Bit]) -> Error {
    let (k, (x, y)) = a
        .iter()
        .zip(b)
        .enumerate()
        .find(|(_, (x, y))| sigma_bit(**x, **y) == BitScore::Undefined)
        .expect("an undefined pair was flagged");
    Error::Undefined(format!("bits ({x}, {y}) at position {}", k + 1))
}

/// Chunked evaluation of the aggregate similarity. Equal to
/// [`crate::similarity::sigma_hat`] on the same inputs except for `cache_hits`.
pub fn sim_chunked(
    a: &BitCode,
    b: &BitCode,
    cfg: &SimilarityConfig,
    cache: &ChunkCache,
) -> Result<SimilarityReport> {
    if a.width() != b.width() {
        return Err(Error::ContextMismatch(format!(
            "code widths {} and {}",
            a.width(),
            b.width()
        )));
    }
    if let Some(r) = extreme_report(a, b) {
        return r;
    }
    let (xa, xb) = (projected_bits(a), projected_bits(b));
    let (sum, cache_hits) = chunked_sum(&xa, &xb, cfg.chunk_size, cache, true);
    if sum.undefined_flag {
        return Err(first_undefined(&xa, &xb));
    }
    let segments = segment_entries(a, b, cfg)?;
    let mut total = sum.score_sum;
    for s in &segments {
        total += s.score;
    }
    let counted = sum.weight_sum as usize + segments.len();
    let fcg_pair = fcg_pair(a, b, cfg)?;
    let per_position = xa
        .iter()
        .zip(&xb)
        .enumerate()
        .map(|(k, (&p, &q))| {
            let outcome = sigma_bit(p, q);
            let weight = if outcome == BitScore::Ignored {
                0.0
            } else {
                1.0
            };
            PositionEntry {
                position: k + 1,
                pair: (p, q),
                weight,
                outcome,
            }
        })
        .collect();
    Ok(SimilarityReport {
        score: finish(total, counted, fcg_pair),
        per_position,
        segments,
        fcg_pair,
        extreme_match: false,
        cache_hits,
    })
}

/// A symmetric similarity matrix; `None` marks undefined entries.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    pub size: usize,
    pub values: Vec<Option<f64>>,
}

impl SimilarityMatrix {
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.values[i * self.size + j]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.size).all(|i| {
            (0..i).all(|j| self.get(i, j).map(f64::to_bits) == self.get(j, i).map(f64::to_bits))
        })
    }

    /// TSV with a header row and column of names and six decimals per value.
    pub fn to_tsv(&self, names: &[String]) -> String {
        let mut out = String::new();
        for n in names {
            out.push('\t');
            out.push_str(n);
        }
        out.push('\n');
        for (i, n) in names.iter().enumerate() {
            out.push_str(n);
            for j in 0..self.size {
                match self.get(i, j) {
                    Some(v) => out.push_str(&format!("\t{v:.6}")),
                    None => out.push_str("\tundefined"),
                }
            }
            out.push('\n');
        }
        out
    }
}

/// A code prepared for repeated comparison.
struct Prepared<'a> {
    code: &'a BitCode,
    bits: Vec<Bit>,
}

fn pair_score(
    a: &Prepared,
    b: &Prepared,
    cfg: &SimilarityConfig,
    cache: &ChunkCache,
) -> Result<Option<f64>> {
    if a.code.is_canonical_extreme() || b.code.is_canonical_extreme() {
        return Ok((a.code == b.code).then_some(1.0));
    }
    let (sum, _) = chunked_sum(&a.bits, &b.bits, cfg.chunk_size, cache, false);
    if sum.undefined_flag {
        return Ok(None);
    }
    let mut total = sum.score_sum;
    let mut counted = sum.weight_sum as usize;
    if a.code.has_segments() || b.code.has_segments() || !a.code.is_plain() || !b.code.is_plain() {
        match segment_entries(a.code, b.code, cfg) {
            Ok(segments) => {
                for s in &segments {
                    total += s.score;
                }
                counted += segments.len();
            }
            Err(Error::Undefined(_)) => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    Ok(Some(finish(total, counted, fcg_pair(a.code, b.code, cfg)?)))
}

/// All-pairs similarity over codes of one context, upper triangle in parallel.
pub fn all_pairs(
    codes: &[BitCode],
    cfg: &SimilarityConfig,
    cache: &ChunkCache,
) -> Result<SimilarityMatrix> {
    if let Some(first) = codes.first() {
        if let Some(bad) = codes.iter().find(|c| c.width() != first.width()) {
            return Err(Error::ContextMismatch(format!(
                "code widths {} and {}",
                first.width(),
                bad.width()
            )));
        }
    }
    let prepared: Vec<Prepared> = codes
        .iter()
        .map(|c| Prepared {
            code: c,
            bits: projected_bits(c),
        })
        .collect();
    let n = codes.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let scores: Vec<Option<f64>> = pairs
        .par_iter()
        .map(|&(i, j)| pair_score(&prepared[i], &prepared[j], cfg, cache))
        .collect::<Result<_>>()?;
    let mut values = vec![None; n * n];
    for (&(i, j), s) in pairs.iter().zip(scores) {
        values[i * n + j] = s;
        values[j * n + i] = s;
    }
    Ok(SimilarityMatrix { size: n, values })
}

/// Configuration plus a cache, for callers that run many comparisons.
pub struct Engine {
    pub config: SimilarityConfig,
    cache: ChunkCache,
}

impl Engine {
    pub fn new(config: SimilarityConfig) -> Self {
        Engine {
            config,
            cache: ChunkCache::default(),
        }
    }

    pub fn without_cache(config: SimilarityConfig) -> Self {
        Engine {
            config,
            cache: ChunkCache::disabled(),
        }
    }

    pub fn sim(&self, a: &BitCode, b: &BitCode) -> Result<SimilarityReport> {
        sim_chunked(a, b, &self.config, &self.cache)
    }

    pub fn all_pairs(&self, codes: &[BitCode]) -> Result<SimilarityMatrix> {
        all_pairs(codes, &self.config, &self.cache)
    }

    pub fn cache_stats(&self) -> CacheStats {
        self.cache.stats()
    }

    pub fn clear_cache(&self) {
        self.cache.clear()
    }
}
