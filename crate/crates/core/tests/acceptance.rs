//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Run with `cargo test -p su-kit --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use su_kit::constructions::DpWitness;
use su_kit::formula::{random_formula, Axiom};
use su_kit::harness::{self, SuiteReport};
use su_kit::prover::{prove_su, verify_lemma_su_aa, verify_lemma_su_aa_with, verify_su_star, Sequent, Verdict};
use su_kit::semantics::find_su_countermodel;
use su_kit::strong_union::satisfies_su2;
use su_kit::{parse, Formula, Result, SearchBounds};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_601;
const GOLDEN: &str = include_str!("data/ipc_golden.txt");

struct Outcome {
    passed: bool,
    detail: String,
}

fn suites(reports: &[SuiteReport]) -> Outcome {
    let passed = reports.iter().all(SuiteReport::passed);
    let detail = reports
        .iter()
        .map(|r| r.to_string())
        .collect::<Vec<_>>()
        .join("; ");
    Outcome { passed, detail }
}

fn within(limit: Duration, start: Instant, mut o: Outcome) -> Outcome {
    let took = start.elapsed();
    if took > limit {
        o.passed = false;
        o.detail.push_str(&format!("; took {took:?}, limit {limit:?}"));
    }
    o
}

fn correspondence() -> Result<Outcome> {
    let start = Instant::now();
    let o = suites(&[
        harness::correspondence_exhaustive(4)?,
        harness::correspondence_random(1000, &[5, 6, 7], SEED)?,
    ]);
    Ok(within(Duration::from_secs(600), start, o))
}

fn lemma_suite() -> Result<Outcome> {
    Ok(suites(&[
        harness::lemma_su1(5)?,
        harness::lemma_union_of_unions(5)?,
        harness::lemma_su2_to_su_n(5, 4)?,
        harness::corollary_su2_iff_su(5, 4)?,
    ]))
}

fn medvedev() -> Result<Outcome> {
    let start = Instant::now();
    let o = suites(&[harness::medvedev_suite(5)?]);
    Ok(within(Duration::from_secs(60), start, o))
}

fn containments() -> Result<Outcome> {
    Ok(suites(&[harness::containments(4)?]))
}

fn certified_su_proof(f: &Formula, depth: usize) -> Result<(bool, usize)> {
    let out = prove_su(f, depth)?;
    let certified = out
        .certificate
        .as_ref()
        .is_some_and(|d| d.proves(&Sequent::new(out.instances.clone(), f.clone())));
    Ok((out.is_provable() && certified, out.instances.len()))
}

fn lemma_su_aa() -> Result<Outcome> {
    let report = verify_lemma_su_aa();
    let groups: Vec<bool> = ['a', 'b', 'c', 'd'].iter().map(|&g| report.group_passed(g)).collect();
    let corrupted = verify_lemma_su_aa_with(Formula::Bottom);
    let (aa, n_aa) = certified_su_proof(&Axiom::Aa.formula(), 1)?;
    let (aa_plus, n_plus) = certified_su_proof(&Axiom::AaPlus.formula(), 1)?;
    Ok(Outcome {
        passed: report.passed() && groups.iter().all(|&g| g) && !corrupted.passed() && aa && aa_plus,
        detail: format!(
            "groups a-d {groups:?}; corrupted control fails at {:?}; prove_su aa={aa} ({n_aa} instance), aa_plus={aa_plus} ({n_plus} instance)",
            corrupted.failures()
        ),
    })
}

fn su_star() -> Result<Outcome> {
    let results = (1..=3).map(verify_su_star).collect::<Result<Vec<bool>>>()?;
    Ok(Outcome {
        passed: results.iter().all(|&b| b),
        detail: format!("n=1..3 {results:?}"),
    })
}

fn products() -> Result<Outcome> {
    let start = Instant::now();
    let o = suites(&[harness::product_suite(3, 3)?]);
    Ok(within(Duration::from_secs(600), start, o))
}

fn disjunction_property() -> Result<Outcome> {
    let w: DpWitness = harness::dp_example()?;
    let frame = w.product_model.frame();
    let size = frame.size();
    let su2 = satisfies_su2(frame)?;
    let refutes = !w.product_model.satisfies(w.root, &w.disjunction())?;
    let rooted = frame.roots()?.contains(w.root);
    Ok(Outcome {
        passed: size == 8 && su2 && refutes && rooted,
        detail: format!("{size} points, su2={su2}, root {} refutes `{}`: {refutes}", w.root, w.disjunction()),
    })
}

fn soundness() -> Result<Outcome> {
    let mut passed = true;
    let mut notes = Vec::new();
    let bounds4 = SearchBounds::with_max_points(4);
    for ax in Axiom::ALL {
        let (proved, n) = certified_su_proof(&ax.formula(), 1)?;
        let cm = find_su_countermodel(&ax.formula(), &bounds4)?;
        passed &= proved && cm.is_none();
        notes.push(format!("{ax}: proved={proved} ({n} inst) countermodel={}", cm.is_some()));
    }
    let lem = parse("p | ~p")?;
    let verdict = prove_su(&lem, 1)?.verdict;
    let cm = find_su_countermodel(&lem, &bounds4)?;
    let cm_size = cm.as_ref().map(|c| c.model.frame().size());
    passed &= verdict == Verdict::Inconclusive && cm_size == Some(2);
    notes.push(format!("p | ~p: {verdict}, countermodel size {cm_size:?}"));

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let bounds3 = SearchBounds::with_max_points(3);
    let (mut proved, mut refuted, mut clashes) = (0, 0, 0);
    for _ in 0..500 {
        let f = random_formula(&mut rng, &["p", "q", "r"], 3);
        let p = prove_su(&f, 0)?.is_provable();
        let c = find_su_countermodel(&f, &bounds3)?.is_some();
        proved += usize::from(p);
        refuted += usize::from(c);
        if p && c {
            clashes += 1;
            notes.push(format!("clash on `{f}`"));
        }
    }
    passed &= clashes == 0;
    notes.push(format!("random corpus: 500 formulas, {proved} proved, {refuted} refuted, {clashes} clashes"));
    Ok(Outcome {
        passed,
        detail: notes.join("; "),
    })
}

fn ipc_oracle() -> Result<Outcome> {
    let frames = harness::rooted_frame_classes(4)?;
    let oracle = harness::ipc_oracle(&harness::random_sequents(1000, SEED), &frames)?;
    let golden = harness::ipc_golden(&harness::parse_golden(GOLDEN)?, &frames)?;
    let mut o = suites(&[oracle.suite.clone(), golden]);
    o.detail.push_str(&format!(
        "; random corpus: {} provable, {} refuted, {} unresolved",
        oracle.provable, oracle.refuted, oracle.unresolved
    ));
    Ok(o)
}

fn main() -> ExitCode {
    type Criterion = fn() -> Result<Outcome>;
    let criteria: [(&str, Criterion); 10] = [
        ("su validity matches (su2)", correspondence),
        ("strong union lemma suite", lemma_suite),
        ("Medvedev frames", medvedev),
        ("kp and sa containment", containments),
        ("su equivalent to aa over IPC", lemma_su_aa),
        ("conjunctive su* step", su_star),
        ("connected products", products),
        ("disjunction property witness", disjunction_property),
        ("prover soundness cross-check", soundness),
        ("IPC prover vs finite frames", ipc_oracle),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|v| v.parse().ok());
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let number = i + 1;
        if only.is_some_and(|n| n != number) {
            continue;
        }
        let start = Instant::now();
        let outcome = run().unwrap_or_else(|e| Outcome {
            passed: false,
            detail: format!("error: {e}"),
        });
        let status = if outcome.passed { "PASS" } else { "FAIL" };
        failures += usize::from(!outcome.passed);
        println!(
            "criterion {number:>2} {status} [{:.1}s] {name}: {}",
            start.elapsed().as_secs_f64(),
            outcome.detail
        );
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
