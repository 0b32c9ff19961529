//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bitsim_core::encoder::{deserialize_with_widths, normalize, BitCode, Op};
use bitsim_core::engine::{all_pairs, sim_chunked, ChunkCache};
use bitsim_core::gen::{random_binary_code, random_expr, random_propositional_code, random_tbox};
use bitsim_core::oracle::{fcg_enumerate, lcs_by_ancestors, oracle_subsumes, PROPOSITIONAL_CAP};
use bitsim_core::similarity::{check_properties, fcg, lcs_atomic, subsumes, Subsumption};
use bitsim_core::{
    parse_expr, parse_tbox, sigma_hat, verify_tables, AlgebraTables, ConceptExpr, EncodingContext,
    Result, SimilarityConfig, TBox,
};

const SEED: u64 = 20240601;

type Criterion = fn() -> Result<Outcome>;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn within(elapsed: Duration, limit: Duration) -> bool {
    elapsed < limit
}

fn algebra() -> Result<Outcome> {
    let start = Instant::now();
    let report = verify_tables(AlgebraTables::canonical());
    let fast = within(start.elapsed(), Duration::from_secs(1));
    let failures: Vec<_> = report.failures().collect();
    Ok(outcome(
        report.all_passed() && fast,
        format!(
            "{} checks, {} failures{}",
            report.checks.len(),
            failures.len(),
            first(&failures)
        ),
    ))
}

fn first<T: std::fmt::Debug>(items: &[T]) -> String {
    items
        .first()
        .map_or(String::new(), |x| format!("; first: {x:?}"))
}

fn generativity() -> Result<Outcome> {
    let start = Instant::now();
    let join = BitCode::compound(
        Op::Join,
        vec![
            deserialize_with_widths("101", 3, 0)?,
            deserialize_with_widths("011", 3, 0)?,
        ],
    );
    let worked = fcg(&join)?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut mismatches = Vec::new();
    for _ in 0..200 {
        let w = rng.random_range(1..=12);
        let code = random_propositional_code(&mut rng, w);
        let (got, want) = (fcg(&code)?, fcg_enumerate(&code, PROPOSITIONAL_CAP)?);
        if got != want {
            mismatches.push(format!("{code}: {got} vs {want}"));
        }
    }
    let fast = within(start.elapsed(), Duration::from_secs(30));
    Ok(outcome(
        worked == 3 && mismatches.is_empty() && fast,
        format!(
            "fcg(XX1 join) = {worked}; 200 codes, {} mismatches{}",
            mismatches.len(),
            first(&mismatches)
        ),
    ))
}

fn correspondence() -> Result<Outcome> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let (mut decided, mut unknown, mut lcs_pairs) = (0usize, 0usize, 0usize);
    let mut disagreements = Vec::new();
    let mut lcs_mismatches = Vec::new();
    for _ in 0..50 {
        let atoms = rng.random_range(2..=12);
        let tbox = random_tbox(&mut rng, atoms, 0);
        let ctx = EncodingContext::new(&tbox)?;
        for _ in 0..500 {
            let a = random_expr(&mut rng, &tbox, 2, false);
            let x = random_expr(&mut rng, &tbox, 1, false);
            let (ci, cj) = match rng.random_range(0..3) {
                0 => (a.clone(), ConceptExpr::or(a, x)),
                1 => (ConceptExpr::and(a.clone(), x), a),
                _ => (a, random_expr(&mut rng, &tbox, 2, false)),
            };
            let (p, q) = (ctx.encode(&ci)?, ctx.encode(&cj)?);
            let verdict = subsumes(&p, &q)?;
            if verdict == Subsumption::Unknown {
                unknown += 1;
                continue;
            }
            decided += 1;
            let oracle = oracle_subsumes(&ci, &cj, &tbox)?.holds();
            if (verdict == Subsumption::Holds) != oracle {
                disagreements.push(format!(
                    "{ci} <= {cj}: encoder {verdict} ({p} vs {q}), oracle {oracle}"
                ));
            }
        }
        for a in tbox.atomic_concepts() {
            for b in tbox.atomic_concepts() {
                lcs_pairs += 1;
                if lcs_atomic(a, b, &ctx)? != lcs_by_ancestors(a, b, &ctx)? {
                    lcs_mismatches.push(format!("{a}, {b}"));
                }
            }
        }
    }
    let fast = within(start.elapsed(), Duration::from_secs(300));
    Ok(outcome(
        disagreements.is_empty() && lcs_mismatches.is_empty() && fast,
        format!(
            "{decided} decided, {unknown} unknown, {} disagreements; {lcs_pairs} lcs pairs, {} mismatches{}",
            disagreements.len(),
            lcs_mismatches.len(),
            first(&disagreements)
        ),
    ))
}

fn properties() -> Result<Outcome> {
    const ROWS: [&str; 6] = [
        "positiveness",
        "reflexivity",
        "maximality",
        "symmetry",
        "subsumption preservation",
        "reverse subsumption preservation",
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    let cfg = SimilarityConfig::default();
    let (mut trials, mut violations) = (0usize, 0usize);
    let mut witness = None;
    for t in 0..20 {
        let atoms = rng.random_range(2..=12);
        let roles = rng.random_range(0..=2);
        let tbox = random_tbox(&mut rng, atoms, roles);
        let report = check_properties(&tbox, &cfg, SEED + t, 1000)?;
        for name in ROWS {
            let row = report.row(name).expect("row present");
            trials += row.trials;
            violations += row.violations;
            if witness.is_none() && row.violations > 0 {
                witness = Some(format!(
                    "{name}: {}",
                    row.first_witness.clone().unwrap_or_default()
                ));
            }
        }
    }
    Ok(outcome(
        violations == 0,
        format!(
            "20 TBoxes, {trials} checks, {violations} violations{}",
            witness.map_or(String::new(), |w| format!("; {w}"))
        ),
    ))
}

fn and_all(names: &[String]) -> ConceptExpr {
    names
        .iter()
        .map(ConceptExpr::atomic)
        .reduce(ConceptExpr::and)
        .expect("non-empty")
}

fn structural_dependency() -> Result<Outcome> {
    let mut text = String::from("concept Ci\nconcept Cj\n");
    for k in 1..=16 {
        text.push_str(&format!("concept K{k}\n"));
    }
    let tbox = parse_tbox(&text)?;
    let ctx = EncodingContext::new(&tbox)?;
    let cfg = SimilarityConfig::default();
    let mut scores = Vec::new();
    for n in 1..=16 {
        let shared: Vec<String> = (1..=n).map(|k| format!("K{k}")).collect();
        let a = ctx.encode(&ConceptExpr::and(
            and_all(&shared),
            ConceptExpr::atomic("Ci"),
        ))?;
        let b = ctx.encode(&ConceptExpr::and(
            and_all(&shared),
            ConceptExpr::atomic("Cj"),
        ))?;
        scores.push(sigma_hat(&a, &b, &cfg)?.score);
    }
    let monotone = scores.windows(2).all(|w| w[1] >= w[0]);
    let last = *scores.last().expect("16 scores");
    Ok(outcome(
        monotone && last >= 0.9,
        format!(
            "n=1 {:.6}, n=16 {last:.6}, non-decreasing {monotone}",
            scores[0]
        ),
    ))
}

/// Ci and Cj share the subsumers P1 and P2; Ck shares only P1.
fn monotonicity_scenario<R: Rng>(rng: &mut R) -> Result<(TBox, [&'static str; 3])> {
    let atoms = rng.random_range(1..=8);
    let mut tbox = random_tbox(rng, atoms, 0);
    let anchor = format!("C{}", rng.random_range(0..atoms));
    for p in ["P1", "P2"] {
        tbox.add_concept(p)?;
        if rng.random_bool(0.5) {
            tbox.add_inclusion(p, &anchor)?;
        }
    }
    for c in ["Ci", "Cj", "Ck"] {
        tbox.add_concept(c)?;
        tbox.add_inclusion(c, "P1")?;
    }
    tbox.add_inclusion("Ci", "P2")?;
    tbox.add_inclusion("Cj", "P2")?;
    Ok((tbox, ["Ci", "Cj", "Ck"]))
}

fn strict_monotonicity() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
    let cfg = SimilarityConfig::default();
    let mut failures = Vec::new();
    const INSTANCES: usize = 500;
    for _ in 0..INSTANCES {
        let (tbox, [i, j, k]) = monotonicity_scenario(&mut rng)?;
        let ctx = EncodingContext::new(&tbox)?;
        let (ci, cj, ck) = (
            ctx.encode_atomic(i)?,
            ctx.encode_atomic(j)?,
            ctx.encode_atomic(k)?,
        );
        let (near, far) = (
            sigma_hat(&ci, &cj, &cfg)?.score,
            sigma_hat(&ci, &ck, &cfg)?.score,
        );
        if near <= far {
            failures.push(format!("{ci} {cj} {ck}: {near} <= {far}"));
        }
    }
    Ok(outcome(
        failures.is_empty(),
        format!(
            "{INSTANCES} scenarios, {} failures{}",
            failures.len(),
            first(&failures)
        ),
    ))
}

fn rewrites() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    let names = [
        "commutativity",
        "double negation",
        "idempotence",
        "De Morgan",
    ];
    let mut failures = [0usize; 4];
    let mut witness = None;
    for t in 0..200 {
        let atoms = rng.random_range(1..=8);
        let roles = rng.random_range(0..=2);
        let tbox = random_tbox(&mut rng, atoms, roles);
        let ctx = EncodingContext::new(&tbox)?;
        let a = random_expr(&mut rng, &tbox, 3, true);
        let b = random_expr(&mut rng, &tbox, 3, true);
        let pairs = [
            (
                ConceptExpr::and(a.clone(), b.clone()),
                ConceptExpr::and(b.clone(), a.clone()),
            ),
            (ConceptExpr::not(ConceptExpr::not(a.clone())), a.clone()),
            (ConceptExpr::or(a.clone(), a.clone()), a.clone()),
            (
                ConceptExpr::not(ConceptExpr::and(a.clone(), b.clone())),
                ConceptExpr::or(ConceptExpr::not(a.clone()), ConceptExpr::not(b.clone())),
            ),
        ];
        // alternate the connective so both forms of each identity are covered
        let pairs = if t % 2 == 0 {
            pairs
        } else {
            [
                (
                    ConceptExpr::or(a.clone(), b.clone()),
                    ConceptExpr::or(b.clone(), a.clone()),
                ),
                pairs[1].clone(),
                (ConceptExpr::and(a.clone(), a.clone()), a.clone()),
                (
                    ConceptExpr::not(ConceptExpr::or(a.clone(), b.clone())),
                    ConceptExpr::and(ConceptExpr::not(a.clone()), ConceptExpr::not(b.clone())),
                ),
            ]
        };
        for (idx, (l, r)) in pairs.iter().enumerate() {
            let (x, y) = (ctx.encode(l)?.serialize(), ctx.encode(r)?.serialize());
            if x != y {
                failures[idx] += 1;
                witness.get_or_insert_with(|| format!("{l} => {x} ; {r} => {y}"));
            }
        }
    }
    let summary: Vec<String> = names
        .iter()
        .zip(failures)
        .map(|(n, f)| format!("{n} {f}/200"))
        .collect();
    Ok(outcome(
        failures.iter().all(|&f| f == 0),
        format!(
            "mismatches: {}{}",
            summary.join(", "),
            witness.map_or(String::new(), |w| format!("; {w}"))
        ),
    ))
}

fn engine_exactness() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 8);
    let mut mismatches = Vec::new();
    for _ in 0..500 {
        let w = rng.random_range(1..=40);
        let a = normalize(&random_propositional_code(&mut rng, w));
        let b = normalize(&random_propositional_code(&mut rng, w));
        for chunk in [1, 2, 3, 8, 64] {
            let cfg = SimilarityConfig {
                chunk_size: chunk,
                ..Default::default()
            };
            let want = sigma_hat(&a, &b, &cfg).map(|r| r.score.to_bits());
            let cached =
                sim_chunked(&a, &b, &cfg, &ChunkCache::default()).map(|r| r.score.to_bits());
            let uncached =
                sim_chunked(&a, &b, &cfg, &ChunkCache::disabled()).map(|r| r.score.to_bits());
            if want != cached || want != uncached {
                mismatches.push(format!("{a} ~ {b} chunk {chunk}"));
            }
        }
    }
    let mut matrix_failures = 0;
    for m in 0..10 {
        let w = 8 + m * 4;
        let codes: Vec<BitCode> = (0..30)
            .map(|_| normalize(&random_propositional_code(&mut rng, w)))
            .collect();
        let cfg = SimilarityConfig {
            chunk_size: 1 + m % 4,
            ..Default::default()
        };
        let on = all_pairs(&codes, &cfg, &ChunkCache::default())?;
        let off = all_pairs(&codes, &cfg, &ChunkCache::disabled())?;
        let unit = (0..on.size).all(|i| on.get(i, i) == Some(1.0));
        if !(on.is_symmetric() && unit && on == off) {
            matrix_failures += 1;
        }
    }
    Ok(outcome(
        mismatches.is_empty() && matrix_failures == 0,
        format!(
            "2500 chunked comparisons, {} mismatches; 10 matrices, {matrix_failures} failures{}",
            mismatches.len(),
            first(&mismatches)
        ),
    ))
}

fn throughput() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 9);
    // sparse atomic-like codes with some exact repeats
    let distinct: Vec<BitCode> = (0..800)
        .map(|_| random_binary_code(&mut rng, 256, 0.05))
        .collect();
    let mut codes = distinct.clone();
    for _ in 0..200 {
        codes.push(distinct[rng.random_range(0..distinct.len())].clone());
    }
    let cfg = SimilarityConfig::default();
    let cache = ChunkCache::default();
    let start = Instant::now();
    let m = all_pairs(&codes, &cfg, &cache)?;
    let elapsed = start.elapsed();
    let stats = cache.stats();
    Ok(outcome(
        within(elapsed, Duration::from_secs(60)) && stats.hits > 0 && m.size == 1000,
        format!(
            "1000 codes x 256 bits in {:.2}s, hit rate {:.4}",
            elapsed.as_secs_f64(),
            stats.hit_rate()
        ),
    ))
}

fn main() -> ExitCode {
    // sanity: the library's own examples are in place before the long runs
    let ctx =
        EncodingContext::new(&parse_tbox("concept A\nB sub A\nC sub A\nD sub B\nD sub C").unwrap())
            .unwrap();
    assert_eq!(
        ctx.encode(&parse_expr("B").unwrap()).unwrap().serialize(),
        "0011"
    );

    let criteria: [(&str, Criterion); 9] = [
        ("algebra constraints", algebra),
        ("code-generativity", generativity),
        ("subsumption and lcs correspondence", correspondence),
        ("similarity properties", properties),
        ("structural dependency", structural_dependency),
        ("strict monotonicity", strict_monotonicity),
        ("rewrite identities", rewrites),
        ("engine exactness", engine_exactness),
        ("throughput", throughput),
    ];
    let mut all = true;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (passed, detail) = match run() {
            Ok(o) => (o.passed, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        all &= passed;
        println!(
            "{} {}. {name}: {detail} [{:.2}s]",
            if passed { "PASS" } else { "FAIL" },
            n + 1,
            start.elapsed().as_secs_f64()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
