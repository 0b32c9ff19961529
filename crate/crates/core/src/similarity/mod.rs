//! BitSim: bit-pair similarity, the aggregate code similarity, and the
//! subsumption and lcs operations over codes.

pub mod fcg;
pub mod properties;

use std::fmt;

use crate::algebra::{Bit, DISCONNECTED};
use crate::dl::ConceptExpr;
use crate::encoder::{projected_bits, projection, BitCode, EncodingContext, SegmentKey};
use crate::error::{Error, Result};

pub use fcg::{coverage, fcg, fcg_with_cap, DEFAULT_FCG_CAP};
pub use properties::{check_properties, PropertyReport, PropertyRow};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BitScore {
    Score(f64),
    /// The (0, 0) pair carries no information and is skipped.
    Ignored,
    /// ⊤ or ⊥ against anything but itself.
    Undefined,
}

/// Similarity of two bits: `2^-d` for Hasse distance `d`.
pub fn sigma_bit(a: Bit, b: Bit) -> BitScore {
    if a == Bit::Zero && b == Bit::Zero {
        return BitScore::Ignored;
    }
    if a.is_extreme() || b.is_extreme() {
        return if a == b {
            BitScore::Score(1.0)
        } else {
            BitScore::Undefined
        };
    }
    match a.hasse_distance(b) {
        DISCONNECTED => BitScore::Undefined,
        d => BitScore::Score(0.5f64.powi(d as i32)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimilarityConfig {
    pub generativity_penalty: bool,
    pub chunk_size: usize,
}

impl Default for SimilarityConfig {
    fn default() -> Self {
        SimilarityConfig {
            generativity_penalty: false,
            chunk_size: 64,
        }
    }
}

impl SimilarityConfig {
    /// (0, 0) pairs are always skipped.
    pub const fn ignore_zero_pairs(&self) -> bool {
        true
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PositionEntry {
    /// 1-based, rightmost first.
    pub position: usize,
    pub pair: (Bit, Bit),
    /// 1 when the position counts towards the mean, 0 when ignored.
    pub weight: f64,
    pub outcome: BitScore,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentEntry {
    pub key: SegmentKey,
    pub in_a: bool,
    pub in_b: bool,
    /// Filler similarity for matched segments, 0 for unmatched ones.
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityReport {
    pub score: f64,
    pub per_position: Vec<PositionEntry>,
    pub segments: Vec<SegmentEntry>,
    pub fcg_pair: Option<(u64, u64)>,
    /// Set when both codes are the same canonical extreme.
    pub extreme_match: bool,
    /// Chunk lookups served from the engine cache.
    pub cache_hits: usize,
}

impl SimilarityReport {
    pub fn ignored_positions(&self) -> usize {
        self.per_position
            .iter()
            .filter(|p| p.outcome == BitScore::Ignored)
            .count()
    }

    /// Recomputes the score from the per-position and segment entries.
    pub fn recompute(&self) -> f64 {
        if self.extreme_match {
            return 1.0;
        }
        let mut sum = 0.0;
        let mut n = 0usize;
        for p in &self.per_position {
            if let BitScore::Score(s) = p.outcome {
                sum += s;
                n += 1;
            }
        }
        for s in &self.segments {
            sum += s.score;
            n += 1;
        }
        finish(sum, n, self.fcg_pair)
    }
}

/// Mean over counted positions, times the generativity ratio when present.
pub(crate) fn finish(sum: f64, counted: usize, fcg_pair: Option<(u64, u64)>) -> f64 {
    let mean = if counted == 0 {
        1.0
    } else {
        sum / counted as f64
    };
    match fcg_pair {
        Some((x, y)) if x.max(y) > 0 => mean * (x.min(y) as f64 / x.max(y) as f64),
        Some(_) => mean,
        None => mean,
    }
}

fn undefined_pair(position: usize, a: Bit, b: Bit) -> Error {
    Error::Undefined(format!("bits ({a}, {b}) at position {position}"))
}

/// Report for a canonical ⊤/⊥ code on either side, if there is one.
pub(crate) fn extreme_report(a: &BitCode, b: &BitCode) -> Option<Result<SimilarityReport>> {
    if !(a.is_canonical_extreme() || b.is_canonical_extreme()) {
        return None;
    }
    if a == b {
        return Some(Ok(SimilarityReport {
            score: 1.0,
            per_position: Vec::new(),
            segments: Vec::new(),
            fcg_pair: None,
            extreme_match: true,
            cache_hits: 0,
        }));
    }
    Some(Err(Error::Undefined(format!("{a} against {b}"))))
}

/// Segment comparison: matched keys score their fillers, unmatched score 0.
pub(crate) fn segment_entries(
    a: &BitCode,
    b: &BitCode,
    cfg: &SimilarityConfig,
) -> Result<Vec<SegmentEntry>> {
    let (pa, pb) = (projection(a), projection(b));
    let inner = SimilarityConfig {
        generativity_penalty: false,
        ..*cfg
    };
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < pa.segments.len() || j < pb.segments.len() {
        let ka = pa.segments.get(i).map(|s| s.key());
        let kb = pb.segments.get(j).map(|s| s.key());
        let entry = match (ka, kb) {
            (Some(x), Some(y)) if x == y => {
                let score =
                    sigma_hat(&pa.segments[i].filler, &pb.segments[j].filler, &inner)?.score;
                i += 1;
                j += 1;
                SegmentEntry {
                    key: x,
                    in_a: true,
                    in_b: true,
                    score,
                }
            }
            (Some(x), y) if y.as_ref().is_none_or(|y| x < *y) => {
                i += 1;
                SegmentEntry {
                    key: x,
                    in_a: true,
                    in_b: false,
                    score: 0.0,
                }
            }
            (_, Some(y)) => {
                j += 1;
                SegmentEntry {
                    key: y,
                    in_a: false,
                    in_b: true,
                    score: 0.0,
                }
            }
            (Some(_), None) | (None, None) => unreachable!(),
        };
        out.push(entry);
    }
    Ok(out)
}

pub(crate) fn fcg_pair(
    a: &BitCode,
    b: &BitCode,
    cfg: &SimilarityConfig,
) -> Result<Option<(u64, u64)>> {
    if cfg.generativity_penalty {
        Ok(Some((fcg(a)?, fcg(b)?)))
    } else {
        Ok(None)
    }
}

/// Aggregate similarity of two codes of one context.
pub fn sigma_hat(a: &BitCode, b: &BitCode, cfg: &SimilarityConfig) -> Result<SimilarityReport> {
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
    let mut per_position = Vec::with_capacity(xa.len());
    let mut sum = 0.0;
    let mut counted = 0usize;
    for (k, (&p, &q)) in xa.iter().zip(&xb).enumerate() {
        let outcome = sigma_bit(p, q);
        let weight = match outcome {
            BitScore::Score(s) => {
                sum += s;
                counted += 1;
                1.0
            }
            BitScore::Ignored => 0.0,
            BitScore::Undefined => return Err(undefined_pair(k + 1, p, q)),
        };
        per_position.push(PositionEntry {
            position: k + 1,
            pair: (p, q),
            weight,
            outcome,
        });
    }
    let segments = segment_entries(a, b, cfg)?;
    for s in &segments {
        sum += s.score;
        counted += 1;
    }
    let fcg_pair = fcg_pair(a, b, cfg)?;
    Ok(SimilarityReport {
        score: finish(sum, counted, fcg_pair),
        per_position,
        segments,
        fcg_pair,
        extreme_match: false,
        cache_hits: 0,
    })
}

/// Similarity of the conjunction against the disjunction of two concepts.
pub fn bitsim_jaccard(
    ci: &ConceptExpr,
    cj: &ConceptExpr,
    ctx: &EncodingContext,
    cfg: &SimilarityConfig,
) -> Result<SimilarityReport> {
    let meet = ctx.encode(&ConceptExpr::and(ci.clone(), cj.clone()))?;
    let join = ctx.encode(&ConceptExpr::or(ci.clone(), cj.clone()))?;
    sigma_hat(&meet, &join, cfg)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsumption {
    Holds,
    Fails,
    Unknown,
}

impl fmt::Display for Subsumption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Subsumption::Holds => "true",
            Subsumption::Fails => "false",
            Subsumption::Unknown => "unknown",
        })
    }
}

/// Whether `a ⊑ b` follows positionwise from the specificity order.
pub fn subsumes(a: &BitCode, b: &BitCode) -> Result<Subsumption> {
    if a.width() != b.width() {
        return Err(Error::ContextMismatch(format!(
            "code widths {} and {}",
            a.width(),
            b.width()
        )));
    }
    Ok(subsumes_same_width(a, b))
}

fn subsumes_same_width(a: &BitCode, b: &BitCode) -> Subsumption {
    if a.is_bottom() || b.is_top() || a == b {
        return Subsumption::Holds;
    }
    let (Some(x), Some(y)) = (a.plain_bits(), b.plain_bits()) else {
        return Subsumption::Unknown;
    };
    if x.iter().zip(&y).any(|(p, q)| !p.leq(*q)) {
        return Subsumption::Fails;
    }
    for sb in &b.segments {
        let decided = a.segments.iter().any(|sa| {
            sa.same_key(sb) && subsumes_same_width(&sa.filler, &sb.filler) == Subsumption::Holds
        });
        if !decided {
            return Subsumption::Unknown;
        }
    }
    Subsumption::Holds
}

/// Least common subsumer of two atomic concepts: bitwise AND of their codes.
pub fn lcs_atomic(a: &str, b: &str, ctx: &EncodingContext) -> Result<BitCode> {
    let x = ctx
        .encode_atomic(a)?
        .plain_bits()
        .expect("atomic codes are plain");
    let y = ctx
        .encode_atomic(b)?
        .plain_bits()
        .expect("atomic codes are plain");
    Ok(BitCode::from_bits(x.iter().zip(&y).map(|(&p, &q)| {
        if p == Bit::One && q == Bit::One {
            Bit::One
        } else {
            Bit::Zero
        }
    })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dl::{parse_expr, parse_tbox};

    const DIAMOND: &str = "concept A\nB sub A\nC sub A\nD sub B\nD sub C\n";

    fn diamond() -> EncodingContext {
        EncodingContext::new(&parse_tbox(DIAMOND).unwrap()).unwrap()
    }

    fn code(ctx: &EncodingContext, e: &str) -> BitCode {
        ctx.encode(&parse_expr(e).unwrap()).unwrap()
    }

    fn sim(ctx: &EncodingContext, a: &str, b: &str) -> f64 {
        sigma_hat(&code(ctx, a), &code(ctx, b), &SimilarityConfig::default())
            .unwrap()
            .score
    }

    #[test]
    fn bit_scores() {
        assert_eq!(sigma_bit(Bit::Zero, Bit::Zero), BitScore::Ignored);
        assert_eq!(sigma_bit(Bit::Top, Bit::One), BitScore::Undefined);
        assert_eq!(sigma_bit(Bit::Bot, Bit::BotPrime), BitScore::Undefined);
        assert_eq!(sigma_bit(Bit::Top, Bit::Top), BitScore::Score(1.0));
        assert_eq!(sigma_bit(Bit::One, Bit::Zero), BitScore::Score(0.5));
        assert_eq!(sigma_bit(Bit::One, Bit::X), BitScore::Score(0.25));
        assert_eq!(sigma_bit(Bit::YPrime, Bit::X), BitScore::Score(0.125));
        for a in Bit::ALL {
            for b in Bit::ALL {
                assert_eq!(sigma_bit(a, b), sigma_bit(b, a));
            }
        }
    }

    #[test]
    fn diamond_scores() {
        let d = diamond();
        assert_eq!(sim(&d, "B", "B"), 1.0);
        assert_eq!(sim(&d, "B", "C"), 2.0 / 3.0);
        assert_eq!(sim(&d, "D", "B"), 0.75);
        assert_eq!(sim(&d, "D", "A"), 0.625);
    }

    #[test]
    fn report_recomputes() {
        let d = diamond();
        let r = sigma_hat(&code(&d, "B"), &code(&d, "C"), &SimilarityConfig::default()).unwrap();
        assert_eq!(r.ignored_positions(), 1);
        assert_eq!(r.recompute(), r.score);
        assert_eq!(r.per_position[0].pair, (Bit::One, Bit::One));
    }

    #[test]
    fn jaccard() {
        let d = diamond();
        let cfg = SimilarityConfig::default();
        let j = |a: &str, b: &str| {
            bitsim_jaccard(&parse_expr(a).unwrap(), &parse_expr(b).unwrap(), &d, &cfg)
        };
        assert_eq!(j("B", "B").unwrap().score, 1.0);
        assert_eq!(j("B", "C").unwrap().score, (0.125 + 0.125 + 1.0) / 3.0);
        let single = EncodingContext::new(&parse_tbox("concept A").unwrap()).unwrap();
        let a = parse_expr("A").unwrap();
        let r = bitsim_jaccard(&a, &ConceptExpr::not(a.clone()), &single, &cfg);
        assert!(matches!(r, Err(Error::Undefined(_))));
    }

    #[test]
    fn extremes() {
        let d = diamond();
        assert_eq!(sim(&d, "top", "top"), 1.0);
        assert_eq!(sim(&d, "bot", "bot"), 1.0);
        let r = sigma_hat(
            &code(&d, "top"),
            &code(&d, "A"),
            &SimilarityConfig::default(),
        );
        assert!(matches!(r, Err(Error::Undefined(_))));
    }

    #[test]
    fn segments_score_by_key() {
        let c = EncodingContext::new(&parse_tbox(&format!("{DIAMOND}role r\nrole s")).unwrap())
            .unwrap();
        // bits all ignored, one matched segment whose fillers score 0.75
        assert_eq!(sim(&c, "some(r, D)", "some(r, B)"), 0.75);
        // unmatched segments count one position each at 0
        assert_eq!(sim(&c, "some(r, D)", "some(s, D)"), 0.0);
        assert_eq!(sim(&c, "some(r, D)", "all(r, D)"), 0.0);
        let r = sigma_hat(
            &code(&c, "some(r, D)"),
            &code(&c, "some(s, D)"),
            &SimilarityConfig::default(),
        )
        .unwrap();
        assert_eq!(r.segments.len(), 2);
        assert_eq!(r.recompute(), 0.0);
    }

    #[test]
    fn penalty() {
        let d = diamond();
        let cfg = SimilarityConfig {
            generativity_penalty: true,
            ..Default::default()
        };
        // fcg(A) = 8, fcg(D) = 1
        let r = sigma_hat(&code(&d, "D"), &code(&d, "A"), &cfg).unwrap();
        assert_eq!(r.fcg_pair, Some((1, 8)));
        assert_eq!(r.score, 0.625 / 8.0);
        assert_eq!(r.recompute(), r.score);
    }

    #[test]
    fn subsumption() {
        let d = diamond();
        let s = |a: &str, b: &str| subsumes(&code(&d, a), &code(&d, b)).unwrap();
        assert_eq!(s("D", "B"), Subsumption::Holds);
        assert_eq!(s("B", "C"), Subsumption::Fails);
        assert_eq!(s("A", "A"), Subsumption::Holds);
        assert_eq!(s("bot", "A"), Subsumption::Holds);
        assert_eq!(s("A", "top"), Subsumption::Holds);
        assert_eq!(s("A", "or(B, C)"), Subsumption::Unknown);
        assert_eq!(Subsumption::Unknown.to_string(), "unknown");
    }

    #[test]
    fn lcs() {
        let d = diamond();
        assert_eq!(lcs_atomic("B", "C", &d).unwrap().serialize(), "0001");
        assert_eq!(lcs_atomic("A", "A", &d).unwrap(), code(&d, "A"));
        assert_eq!(lcs_atomic("B", "D", &d).unwrap(), code(&d, "B"));
        assert!(lcs_atomic("B", "Z", &d).is_err());
    }
}
