//! Acceptance criteria, run in order by `main` with one PASS/FAIL line
//! each. Exits nonzero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use reprlab::constructions::{adjacent_pair, disjoint_pair, singleton_pair, spread_pair, Family};
use reprlab::genfun::{
    check_pair_identities, chi_probe, half_r1_in_c, square_identity_holds, ProbeOutcome, Recurrence,
};
use reprlab::lemmas::{is_mersenne, reflect_check, separating_witness, verify_digit_lemma};
use reprlab::natset::{tm_prefix, NatSet, TmClass};
use reprlab::repfn::{cross_profile, first_divergence, rep_profile, rep_same};
use reprlab::search::{brute_force_pairs, scan_determinized, ShardSpec};
use reprlab::solver::{solve_and_verify, SolveStatus};
use reprlab::PartitionPair;

fn verdict(id: u32, title: &str, ok: bool, detail: &str) -> bool {
    let tag = if ok { "PASS" } else { "FAIL" };
    println!("criterion {id:02} [{tag}] {title}: {detail}");
    ok
}

fn set(xs: &[usize]) -> NatSet {
    NatSet::from_elements(xs.iter().copied())
}

fn criterion_01_construction_validity() -> bool {
    let start = Instant::now();
    let mut bad = Vec::new();
    for l in 1..=3 {
        for (name, pair) in [("adjacent", adjacent_pair(l)), ("spread", spread_pair(l))] {
            let pair = pair.unwrap();
            let expected_m = (1usize << (2 * l + 2)) - 3;
            if pair.m() != expected_m {
                bad.push(format!("{name} l={l} m={}", pair.m()));
            }
            if let Some(n) = first_divergence(pair.c(), pair.d(), 2 * pair.m()) {
                bad.push(format!("{name} l={l} diverges at {n}"));
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = bad.is_empty() && elapsed < Duration::from_secs(1);
    verdict(
        1,
        "construction validity (m = 13, 61, 253)",
        ok,
        &format!("problems {bad:?}, {elapsed:.2?}"),
    )
}

fn criterion_02_sufficiency_decomposition() -> bool {
    let mut mismatches = 0;
    let mut checked = 0;
    for l in 1..=2u32 {
        let pair = adjacent_pair(l).unwrap();
        let a = tm_prefix(2 * l + 1, TmClass::EvenOnes).unwrap();
        let b = tm_prefix(2 * l + 1, TmClass::OddOnes).unwrap();
        let off = (1usize << (2 * l + 1)) - 2;
        let n_max = 2 * pair.m();
        let ra = rep_profile(&a, n_max);
        let rb = rep_profile(&b, n_max);
        let rab = cross_profile(&a, &b, n_max);
        let shifted = |p: &reprlab::RepProfile, n: usize, by: usize| {
            if n >= by {
                p.get(n - by)
            } else {
                0
            }
        };
        for n in 0..=n_max {
            let c_terms = ra.get(n) + shifted(&rab, n, off) + shifted(&rb, n, 2 * off);
            let d_terms = rb.get(n) + shifted(&rab, n, off) + shifted(&ra, n, 2 * off);
            if c_terms != rep_same(pair.c(), n) || d_terms != rep_same(pair.d(), n) {
                mismatches += 1;
            }
            checked += 1;
        }
    }
    verdict(
        2,
        "three-term decomposition, l = 1, 2",
        mismatches == 0,
        &format!("{checked} values of n, {mismatches} mismatches"),
    )
}

fn criterion_03_exhaustive_uniqueness() -> bool {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let start = Instant::now();
    let found: Vec<(usize, Vec<usize>, PartitionPair)> = pool.install(|| {
        (3..=16)
            .flat_map(|m| {
                brute_force_pairs(m, 2)
                    .unwrap()
                    .into_iter()
                    .map(move |p| (m, p.intersection().to_vec(), p))
            })
            .collect()
    });
    let elapsed = start.elapsed();
    let summary: Vec<(usize, Vec<usize>)> = found.iter().map(|(m, r, _)| (*m, r.clone())).collect();
    let ok = summary == vec![(13, vec![3, 10]), (13, vec![6, 7])]
        && found[0].2 == spread_pair(1).unwrap()
        && found[1].2 == adjacent_pair(1).unwrap()
        && elapsed < Duration::from_secs(300);
    verdict(
        3,
        "brute force m in [3,16], |C∩D| = 2",
        ok,
        &format!("solutions {summary:?}, {elapsed:.2?} single-threaded"),
    )
}

fn criterion_04_singleton_and_disjoint() -> bool {
    let one = scan_determinized(2, 16, 1, ShardSpec::WHOLE).unwrap();
    let one_ok = one.solutions.len() == 1
        && one.solutions[0].m == 6
        && one.solutions[0].pair == singleton_pair(1).unwrap();

    let zero = scan_determinized(1, 16, 0, ShardSpec::WHOLE).unwrap();
    let ms: Vec<usize> = zero.solutions.iter().map(|s| s.m).collect();
    let zero_ok = ms == vec![1, 3, 7, 15]
        && zero
            .solutions
            .iter()
            .zip(1..)
            .all(|(s, l)| s.pair == disjoint_pair(l).unwrap());
    verdict(
        4,
        "singleton / disjoint determinized scans, m <= 16",
        one_ok && zero_ok,
        &format!(
            "|R|=1 at {:?}, |R|=0 at {ms:?}",
            one.solutions
                .iter()
                .map(|s| (s.m, s.intersection.to_vec()))
                .collect::<Vec<_>>()
        ),
    )
}

fn criterion_05_solver_matches_brute_force() -> bool {
    let mut compared = 0;
    let mut discrepancies = Vec::new();
    for m in 1..=14usize {
        for k in 0..=2usize {
            let brute: Vec<PartitionPair> = brute_force_pairs(m, k)
                .unwrap()
                .into_iter()
                .filter(|p| !p.intersection().contains(0))
                .collect();
            let shared_sets: Vec<Vec<usize>> = match k {
                0 => vec![vec![]],
                1 => (1..=m).map(|a| vec![a]).collect(),
                _ => (1..=m)
                    .flat_map(|a| ((a + 1)..=m).map(move |b| vec![a, b]))
                    .collect(),
            };
            for r in shared_sets {
                let shared = set(&r);
                let expected: Vec<&PartitionPair> = brute
                    .iter()
                    .filter(|p| p.intersection() == &shared)
                    .collect();
                let outcome = solve_and_verify(m, &shared, false).unwrap();
                let agree = match (outcome.solution(), expected.as_slice()) {
                    (None, []) => true,
                    (Some(p), [q]) => p == *q,
                    _ => false,
                };
                if !agree {
                    discrepancies.push((m, r));
                }
                compared += 1;
            }
        }
    }
    verdict(
        5,
        "solver vs brute force, m <= 14, |R| <= 2",
        discrepancies.is_empty(),
        &format!("{compared} (m, R) compared, discrepancies {discrepancies:?}"),
    )
}

fn criterion_06_maximality_failure_witness() -> bool {
    let out = solve_and_verify(14, &set(&[6, 7]), false).unwrap();
    let pair = out.pair.clone().unwrap();
    let at_26 = (rep_same(pair.c(), 26), rep_same(pair.d(), 26));
    verdict(
        6,
        "solve(14, {6,7}) reports TAIL_FAILURE at n = 26",
        out.status == SolveStatus::TailFailure { n: 26 },
        &format!("status {:?}; (R_C(26), R_D(26)) = {at_26:?}", out.status),
    )
}

/// Single-element moves of a non-shared element other than 0 to the other
/// side, and swaps of one C-only with one D-only element.
fn perturbations(pair: &PartitionPair) -> (Vec<PartitionPair>, Vec<PartitionPair>) {
    let m = pair.m();
    let c_only: Vec<usize> = pair
        .c()
        .difference(pair.d())
        .iter()
        .filter(|&x| x != 0)
        .collect();
    let d_only: Vec<usize> = pair.d().difference(pair.c()).to_vec();
    let rebuild = |to_d: &[usize], to_c: &[usize]| {
        let c: Vec<usize> = pair
            .c()
            .iter()
            .filter(|x| !to_d.contains(x))
            .chain(to_c.iter().copied())
            .collect();
        let d: Vec<usize> = pair
            .d()
            .iter()
            .filter(|x| !to_c.contains(x))
            .chain(to_d.iter().copied())
            .collect();
        PartitionPair::new(m, NatSet::from_elements(c), NatSet::from_elements(d)).unwrap()
    };
    let mut moves = Vec::new();
    for &x in &c_only {
        moves.push(rebuild(&[x], &[]));
    }
    for &y in &d_only {
        moves.push(rebuild(&[], &[y]));
    }
    let mut swaps = Vec::new();
    for &x in &c_only {
        for &y in &d_only {
            swaps.push(rebuild(&[x], &[y]));
        }
    }
    (moves, swaps)
}

fn criterion_07_generating_function_identities() -> bool {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let universe: Vec<usize> = (0..=200).collect();
    let mut square_failures = 0;
    for _ in 0..1000 {
        let size = rand::Rng::gen_range(&mut rng, 0..=201);
        let s = NatSet::from_elements(universe.choose_multiple(&mut rng, size).copied());
        if !square_identity_holds(&s, 400).unwrap() {
            square_failures += 1;
        }
    }

    let mut builder_failures = Vec::new();
    for l in 1..=3 {
        for family in [Family::Adjacent, Family::Spread] {
            let report = check_pair_identities(&family.build(l).unwrap()).unwrap();
            if !report.all_hold() {
                builder_failures.push((family, l));
            }
        }
    }

    let base = adjacent_pair(1).unwrap();
    let (moves, swaps) = perturbations(&base);
    let distinct = moves.len();
    let mut survived = 0;
    let mut complement_broken = 0;
    for _ in 0..100 {
        let p = moves.choose(&mut rng).unwrap();
        let report = check_pair_identities(p).unwrap();
        if report.balance.holds {
            survived += 1;
        }
        if !report.complement.holds {
            complement_broken += 1;
        }
    }
    for p in moves.iter().chain(&swaps) {
        if check_pair_identities(p).unwrap().balance.holds {
            survived += 1;
        }
    }
    let elapsed = start.elapsed();
    let ok = square_failures == 0
        && builder_failures.is_empty()
        && survived == 0
        && complement_broken == 0
        && elapsed < Duration::from_secs(10);
    verdict(
        7,
        "generating-function identities",
        ok,
        &format!(
            "square identity failures {square_failures}/1000, builder failures {builder_failures:?}, \
             100 draws from {distinct} single-element moves (+{} swaps) with balance holding {survived}, {elapsed:.2?}",
            swaps.len()
        ),
    )
}

fn criterion_08_chi_recurrences() -> bool {
    let mut detail = Vec::new();
    let mut ok = true;
    for l in 1..=2u32 {
        let pair = adjacent_pair(l).unwrap();
        for which in Recurrence::ALL {
            let mut in_window = 0;
            for k in (0..=2 * pair.m()).step_by(2) {
                let outcome = chi_probe(&pair, which, k).unwrap();
                match (which, outcome) {
                    (Recurrence::Gap, ProbeOutcome::NotApplicable) => {}
                    (Recurrence::Gap, _) => ok = false,
                    (_, ProbeOutcome::Holds) => in_window += 1,
                    (_, ProbeOutcome::NotApplicable) => {}
                    (_, ProbeOutcome::Fails) => ok = false,
                }
            }
            if which != Recurrence::Gap && in_window == 0 {
                ok = false;
            }
            detail.push(format!("l={l} {which:?}: {in_window} in window"));
        }
        let half = half_r1_in_c(&pair).unwrap();
        ok &= half;
        detail.push(format!("l={l} r1/2 in C: {half}"));
    }
    verdict(8, "chi-recurrence probes", ok, &detail.join(", "))
}

fn criterion_09_digit_lemmas() -> bool {
    let start = Instant::now();
    let even = verify_digit_lemma(1 << 16, TmClass::EvenOnes, false).unwrap();
    let odd = verify_digit_lemma(1 << 16, TmClass::OddOnes, false).unwrap();
    let elapsed = start.elapsed();
    let ok = even.hits == vec![7, 31, 127, 511, 2047, 8191, 32767]
        && odd.hits == vec![3, 15, 63, 255, 1023, 4095, 16383, 65535]
        && even.is_clean()
        && odd.is_clean()
        && elapsed < Duration::from_secs(1);
    verdict(
        9,
        "digit lemmas through 2^16",
        ok,
        &format!(
            "even hits {:?}, odd hits {:?}, {elapsed:.2?}",
            even.hits, odd.hits
        ),
    )
}

fn criterion_10_witnesses() -> bool {
    let mut missing = Vec::new();
    let mut checked = 0;
    for m in 1..=1024u64 {
        if is_mersenne(m) {
            continue;
        }
        match separating_witness(m) {
            Ok(w) if m < w.witness && w.witness < 2 * m => {}
            _ => missing.push(m),
        }
        checked += 1;
    }
    let five = separating_witness(5).unwrap().witness;
    let two = separating_witness(2).unwrap().witness;
    verdict(
        10,
        "witnesses for non-Mersenne m <= 1024",
        missing.is_empty() && five == 6 && two == 3,
        &format!(
            "{checked} m checked, missing {missing:?}, witness(5) = {five}, witness(2) = {two}"
        ),
    )
}

fn criterion_11_reflection_closure() -> bool {
    let mut failures = Vec::new();
    let mut checked = 0;
    for family in Family::ALL {
        for l in 1..=3 {
            let pair = family.build(l).unwrap();
            let report = reflect_check(&pair).unwrap();
            if !report.ok || !report.reflected_balanced {
                failures.push((family, l));
            }
            checked += 1;
        }
    }
    let c = adjacent_pair(1).unwrap().c().clone();
    let self_reflective = c.reflect(13).unwrap() == c;
    verdict(
        11,
        "reflection closure of builder outputs",
        failures.is_empty() && self_reflective,
        &format!("{checked} pairs, failures {failures:?}, reflect(C, 13) = C: {self_reflective}"),
    )
}

fn criterion_12_cli_determinism() -> bool {
    let dir = tempfile::tempdir().unwrap();
    let pair_path = dir.path().join("pair.json");
    let pair_arg = pair_path.to_str().unwrap().to_string();
    let invocations: Vec<Vec<String>> = vec![
        vec![
            "construct",
            "--family",
            "theorem11",
            "--l",
            "2",
            "--out",
            &pair_arg,
        ],
        vec!["verify", "--pair", &pair_arg],
        vec!["gfcheck", "--pair", &pair_arg],
        vec!["solve", "--m", "14", "--intersection", "6,7", "--trace"],
        vec![
            "search",
            "--m-min",
            "3",
            "--m-max",
            "13",
            "--k",
            "2",
            "--mode",
            "brute",
            "--shards",
            "3",
            "--shard-index",
            "1",
        ],
        vec![
            "search", "--m-min", "1", "--m-max", "40", "--k", "1", "--mode", "det",
        ],
        vec![
            "lemmas",
            "--which",
            "4",
            "--max",
            "5000",
            "--include-boundary",
        ],
        vec!["witness", "--m", "100"],
    ]
    .into_iter()
    .map(|v| v.into_iter().map(String::from).collect())
    .collect();

    let run = |args: &[String]| {
        Command::new(env!("CARGO_BIN_EXE_reprlab"))
            .args(args)
            .output()
            .unwrap()
    };
    let mut differing = Vec::new();
    for args in &invocations {
        let first = run(args);
        let second = run(args);
        if first.stdout != second.stdout
            || first.status.code() != second.status.code()
            || first.stdout.is_empty()
        {
            differing.push(args[0].clone());
        }
    }
    verdict(
        12,
        "byte-identical CLI output across runs",
        differing.is_empty(),
        &format!("{} invocations, differing {differing:?}", invocations.len()),
    )
}

fn main() {
    let criteria: [(u32, fn() -> bool); 12] = [
        (1, criterion_01_construction_validity),
        (2, criterion_02_sufficiency_decomposition),
        (3, criterion_03_exhaustive_uniqueness),
        (4, criterion_04_singleton_and_disjoint),
        (5, criterion_05_solver_matches_brute_force),
        (6, criterion_06_maximality_failure_witness),
        (7, criterion_07_generating_function_identities),
        (8, criterion_08_chi_recurrences),
        (9, criterion_09_digit_lemmas),
        (10, criterion_10_witnesses),
        (11, criterion_11_reflection_closure),
        (12, criterion_12_cli_determinism),
    ];
    let mut failed = Vec::new();
    for (id, criterion) in criteria {
        let ok = std::panic::catch_unwind(criterion).unwrap_or_else(|_| {
            println!("criterion {id:02} [FAIL] panicked");
            false
        });
        if !ok {
            failed.push(id);
        }
    }
    println!(
        "acceptance: {} passed, {} failed {failed:?}",
        criteria.len() - failed.len(),
        failed.len()
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
