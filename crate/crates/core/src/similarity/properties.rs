//! Randomized checks of the similarity-measure properties over a terminology.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{sigma_hat, SimilarityConfig};
use crate::dl::{ConceptExpr, TBox};
use crate::encoder::{projection, BitCode, EncodingContext, RestrictionSegment};
use crate::error::Result;
use crate::gen::random_expr;

/// Length of the longest shared-conjunct chain in the structural dependency check.
pub const CHAIN_LENGTH: usize = 16;
pub const CHAIN_THRESHOLD: f64 = 0.9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyRow {
    pub property: String,
    pub trials: usize,
    pub violations: usize,
    pub first_witness: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PropertyReport {
    pub rows: Vec<PropertyRow>,
}

impl PropertyReport {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(|r| r.violations == 0)
    }

    pub fn row(&self, property: &str) -> Option<&PropertyRow> {
        self.rows.iter().find(|r| r.property == property)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("property\ttrials\tviolations\tfirst_witness\n");
        for r in &self.rows {
            let witness = r.first_witness.as_deref().unwrap_or("-");
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                r.property, r.trials, r.violations, witness
            ));
        }
        out
    }
}

struct Tally {
    row: PropertyRow,
}

impl Tally {
    fn new(property: &str) -> Self {
        Tally {
            row: PropertyRow {
                property: property.to_string(),
                trials: 0,
                violations: 0,
                first_witness: None,
            },
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.row.trials += 1;
        if !ok {
            self.row.violations += 1;
            if self.row.first_witness.is_none() {
                self.row.first_witness = Some(witness());
            }
        }
    }
}

fn score(a: &BitCode, b: &BitCode, cfg: &SimilarityConfig) -> Option<f64> {
    sigma_hat(a, b, cfg).ok().map(|r| r.score)
}

/// Projection applied through every filler as well.
fn deep_projection(code: &BitCode) -> BitCode {
    let p = projection(code);
    BitCode {
        concept_bits: p.concept_bits,
        segments: p
            .segments
            .into_iter()
            .map(|s| RestrictionSegment {
                filler: deep_projection(&s.filler),
                ..s
            })
            .collect(),
    }
}

/// A pair of expressions equal under one of the rewrites the encoder must respect.
fn rewrite_pair<R: Rng>(rng: &mut R, a: ConceptExpr, b: ConceptExpr) -> (ConceptExpr, ConceptExpr) {
    match rng.random_range(0..5) {
        0 => (
            ConceptExpr::and(a.clone(), b.clone()),
            ConceptExpr::and(b, a),
        ),
        1 => (ConceptExpr::or(a.clone(), b.clone()), ConceptExpr::or(b, a)),
        2 => (ConceptExpr::not(ConceptExpr::not(a.clone())), a),
        3 => (ConceptExpr::and(a.clone(), a.clone()), a),
        _ => (
            ConceptExpr::not(ConceptExpr::and(a.clone(), b.clone())),
            ConceptExpr::or(ConceptExpr::not(a), ConceptExpr::not(b)),
        ),
    }
}

fn fresh_name(tbox: &TBox, base: &str) -> String {
    let taken = |n: &str| tbox.is_atomic(n) || tbox.definition(n).is_some();
    (0..)
        .map(|i| format!("{base}{i}"))
        .find(|n| !taken(n))
        .expect("unbounded supply")
}

fn conjunction(parts: impl IntoIterator<Item = ConceptExpr>) -> ConceptExpr {
    parts
        .into_iter()
        .reduce(ConceptExpr::and)
        .expect("non-empty conjunction")
}

/// σ̂ of `and(K1..Kn, x)` against `and(K1..Kn, y)` for n = 1..=len.
fn chain_scores(
    ctx: &EncodingContext,
    shared: &[String],
    x: &str,
    y: &str,
    cfg: &SimilarityConfig,
) -> Result<Vec<Option<f64>>> {
    (1..=shared.len())
        .map(|n| {
            let ks = || shared[..n].iter().map(ConceptExpr::atomic);
            let a = ctx.encode(&conjunction(ks().chain([ConceptExpr::atomic(x)])))?;
            let b = ctx.encode(&conjunction(ks().chain([ConceptExpr::atomic(y)])))?;
            Ok(score(&a, &b, cfg))
        })
        .collect()
}

fn non_decreasing(s: &[Option<f64>]) -> bool {
    s.windows(2)
        .all(|w| matches!((w[0], w[1]), (Some(p), Some(q)) if q >= p))
}

fn fmt_scores(s: &[Option<f64>]) -> String {
    s.iter()
        .map(|x| x.map_or("undefined".to_string(), |v| format!("{v:.6}")))
        .collect::<Vec<_>>()
        .join(",")
}

/// Runs every property over `trials` random cases drawn from `tbox`.
pub fn check_properties(
    tbox: &TBox,
    cfg: &SimilarityConfig,
    seed: u64,
    trials: usize,
) -> Result<PropertyReport> {
    let ctx = EncodingContext::new(tbox)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let enc = |e: &ConceptExpr| ctx.encode(e);

    let mut positiveness = Tally::new("positiveness");
    let mut reflexivity = Tally::new("reflexivity");
    let mut maximality = Tally::new("maximality");
    let mut symmetry = Tally::new("symmetry");
    let mut closure = Tally::new("equivalence closure");
    let mut invariance = Tally::new("equivalence invariance");

    for _ in 0..trials {
        let [ea, eb, ec] = [(); 3].map(|_| random_expr(&mut rng, tbox, 3, true));
        let (a, b, c) = (enc(&ea)?, enc(&eb)?, enc(&ec)?);
        let ab = score(&a, &b, cfg);
        let ba = score(&b, &a, cfg);
        let aa = score(&a, &a, cfg);
        let pair = || format!("{a} ~ {b}");

        positiveness.record(ab.is_none_or(|s| (0.0..=1.0).contains(&s)), pair);
        reflexivity.record(aa == Some(1.0), || a.to_string());
        maximality.record(
            match (aa, score(&b, &c, cfg)) {
                (Some(x), Some(y)) => x >= y,
                (Some(_), None) => true,
                (None, _) => false,
            },
            || format!("{a} ; {b} ~ {c}"),
        );
        symmetry.record(ab.map(f64::to_bits) == ba.map(f64::to_bits), pair);

        let (r1, r2) = rewrite_pair(&mut rng, ea.clone(), eb.clone());
        let (c1, c2) = (enc(&r1)?, enc(&r2)?);
        let identical = c1.serialize() == c2.serialize();
        // identical codes score 1, and a score of 1 means identical projections
        let closed = identical
            && score(&c1, &c2, cfg) == Some(1.0)
            && (ab != Some(1.0) || deep_projection(&a) == deep_projection(&b));
        closure.record(closed, || format!("{r1} => {c1} ; {r2} => {c2}"));
        invariance.record(
            score(&c1, &c, cfg).map(f64::to_bits) == score(&c2, &c, cfg).map(f64::to_bits),
            || format!("{c1} ; {c2} ~ {c}"),
        );
    }

    let mut rows = vec![
        positiveness.row,
        reflexivity.row,
        maximality.row,
        symmetry.row,
        closure.row,
        invariance.row,
    ];
    rows.extend(structural_dependency(tbox, cfg, &mut rng, trials)?);
    rows.extend(subsumption_preservation(&ctx, cfg)?);
    rows.push(strict_monotonicity(tbox, cfg, &mut rng, trials)?);
    Ok(PropertyReport { rows })
}

/// Shared-conjunct chains over fresh atoms: the score must not drop as the
/// shared part grows, and two fresh siblings must reach the threshold.
fn structural_dependency<R: Rng>(
    tbox: &TBox,
    cfg: &SimilarityConfig,
    rng: &mut R,
    trials: usize,
) -> Result<Vec<PropertyRow>> {
    let mut extended = tbox.clone();
    let mut shared = Vec::new();
    for _ in 0..CHAIN_LENGTH {
        let k = fresh_name(&extended, "Shared");
        extended.add_concept(&k)?;
        shared.push(k);
    }
    let si = fresh_name(&extended, "SiblingI");
    extended.add_concept(&si)?;
    let sj = fresh_name(&extended, "SiblingJ");
    extended.add_concept(&sj)?;
    let ctx = EncodingContext::new(&extended)?;

    let mut trend = Tally::new("structural dependency");
    let atoms = tbox.atomic_concepts();
    for _ in 0..trials.min(200) {
        let x = atoms.choose(rng).expect("non-empty context");
        let y = atoms.choose(rng).expect("non-empty context");
        let s = chain_scores(&ctx, &shared, x, y, cfg)?;
        trend.record(non_decreasing(&s), || {
            format!("{x} ~ {y}: {}", fmt_scores(&s))
        });
    }

    let mut threshold = Tally::new("structural dependency threshold");
    let s = chain_scores(&ctx, &shared, &si, &sj, cfg)?;
    let last = s.last().copied().flatten();
    threshold.record(
        non_decreasing(&s) && last.is_some_and(|v| v >= CHAIN_THRESHOLD),
        || format!("{si} ~ {sj}: {}", fmt_scores(&s)),
    );
    Ok(vec![trend.row, threshold.row])
}

/// Every atomic chain `i ⊑ j ⊑ k`.
pub fn atomic_chains(tbox: &TBox) -> Vec<(usize, usize, usize)> {
    let h = tbox.concepts();
    let n = h.len();
    let below: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| h.is_below(i, j)).collect())
        .collect();
    let mut out = Vec::new();
    for (i, row) in below.iter().enumerate() {
        for j in (0..n).filter(|&j| row[j]) {
            out.extend((0..n).filter(|&k| below[j][k]).map(|k| (i, j, k)));
        }
    }
    out
}

fn subsumption_preservation(
    ctx: &EncodingContext,
    cfg: &SimilarityConfig,
) -> Result<Vec<PropertyRow>> {
    let names = ctx.tbox().atomic_concepts();
    let codes: Vec<BitCode> = names
        .iter()
        .map(|n| ctx.encode_atomic(n))
        .collect::<Result<_>>()?;
    let mut forward = Tally::new("subsumption preservation");
    let mut reverse = Tally::new("reverse subsumption preservation");
    for (i, j, k) in atomic_chains(ctx.tbox()) {
        let witness = || format!("{} <= {} <= {}", names[i], names[j], names[k]);
        let ij = score(&codes[i], &codes[j], cfg);
        let ik = score(&codes[i], &codes[k], cfg);
        let jk = score(&codes[j], &codes[k], cfg);
        forward.record(matches!((ij, ik), (Some(x), Some(y)) if x >= y), witness);
        reverse.record(matches!((jk, ik), (Some(x), Some(y)) if x >= y), witness);
    }
    Ok(vec![forward.row, reverse.row])
}

/// Scenario: `ci`, `cj` fresh children of `cx`, `ck` a fresh child of `cy`,
/// with `cx` strictly below `cy`. The pair sharing more subsumers must score higher.
fn strict_monotonicity<R: Rng>(
    tbox: &TBox,
    cfg: &SimilarityConfig,
    rng: &mut R,
    trials: usize,
) -> Result<PropertyRow> {
    let mut tally = Tally::new("strict monotonicity");
    let h = tbox.concepts();
    for _ in 0..trials {
        let mut t = tbox.clone();
        let y = rng.random_range(0..h.len());
        let cy = h.names()[y].clone();
        let below: Vec<usize> = (0..h.len())
            .filter(|&d| d != y && h.is_below(d, y))
            .collect();
        let cx = match below.choose(rng) {
            Some(&d) if rng.random_bool(0.5) => h.names()[d].clone(),
            _ => {
                let x = fresh_name(&t, "Mid");
                t.add_inclusion(&x, &cy)?;
                x
            }
        };
        let [ci, cj] = ["Left", "Right"].map(|base| {
            let n = fresh_name(&t, base);
            t.add_inclusion(&n, &cx).map(|_| n)
        });
        let (ci, cj) = (ci?, cj?);
        let ck = fresh_name(&t, "Far");
        t.add_inclusion(&ck, &cy)?;
        let ctx = EncodingContext::new(&t)?;
        let code = |n: &str| ctx.encode_atomic(n);
        let (a, b, c) = (code(&ci)?, code(&cj)?, code(&ck)?);
        let (near, far) = (score(&a, &b, cfg), score(&a, &c, cfg));
        tally.record(matches!((near, far), (Some(x), Some(y)) if x > y), || {
            format!("{ci},{cj} under {cx}; {ck} under {cy}: {near:?} vs {far:?}")
        });
    }
    Ok(tally.row)
}
