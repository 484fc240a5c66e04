//! Acceptance battery. Runs each criterion in order, timed, and prints one
//! PASS/FAIL line per criterion (written to the raw stdout handle so the
//! lines appear without `--nocapture`).

use std::io::Write;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
use tnv_core::diagrams::{all_levels, bounded_partitions, maya_to_young, YoungDiagram};
use tnv_core::expcurve::{
    collinear_sharpness, minkowski_identity_check, peculiar_sweep, perimeters, perimeters_i, random_eighths_set,
    random_integer_set, slope_check, FrequencySet, DEFAULT_SAMPLES, TOLERANCE,
};
use tnv_core::profile::{profile_balls, profile_geometric};
use tnv_core::random::stream;
use tnv_core::sums::{verify_identity, Identity};
use tnv_core::tableaux::{
    edge_sum, enumerate_syt, enumerate_syt_capped, f_hook, f_recursive, tableau_profile_closed_form, Side,
    StandardTableau,
};
use tnv_core::wedge::{
    associated_degree, derivative_syt, derive_leibniz, derive_times, pluecker, FormalWedge, PolyCurve,
};

const SEED: u64 = 2024;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn yd(parts: &[usize]) -> YoungDiagram {
    YoungDiagram::new(parts.to_vec()).unwrap()
}

fn int(x: u64) -> BigRational {
    BigRational::from_integer(x.into())
}

fn edge_sums_small_case() -> Outcome {
    let empty: Vec<BigUint> = (0..=2).map(|j| edge_sum(j, Side::EmptyBox, 2, 4).unwrap().value).collect();
    let ball: Vec<BigUint> = (2..=4).map(|j| edge_sum(j, Side::Ball, 2, 4).unwrap().value).collect();
    let f_a = f_hook(&yd(&[3, 3, 1]));
    let f_b = f_hook(&yd(&[4, 3]));
    let pass = empty.iter().all(|v| *v == BigUint::from(21u8))
        && ball.iter().all(|v| *v == BigUint::from(14u8))
        && f_a == BigUint::from(21u8)
        && f_b == BigUint::from(14u8);
    outcome(
        pass,
        format!("empty side {empty:?}, ball side {ball:?}, f[3,3,1]={f_a}, f[4,3]={f_b}"),
    )
}

fn profile_of_square_rectangle() -> Outcome {
    let expected = [14u64, 28, 42, 21];
    let tabs: Vec<StandardTableau> = enumerate_syt(&yd(&[3, 3])).unwrap();
    let enumerated: Vec<u64> = (1..=4)
        .map(|k| tabs.iter().map(|t| t.diagonal_sum(2, k)).sum())
        .collect();
    let closed: Vec<BigRational> = (1..=4).map(|k| tableau_profile_closed_form(k, 2, 4).unwrap()).collect();
    let pass = enumerated == expected && closed.iter().zip(expected).all(|(c, e)| *c == int(e));
    let closed: Vec<String> = closed.iter().map(ToString::to_string).collect();
    outcome(pass, format!("enumerated {enumerated:?}, closed form {closed:?}"))
}

fn balanced_sums_vanish() -> Outcome {
    const TRIALS: usize = 200;
    let mut worst = 0f64;
    let mut failures = Vec::new();
    let mut runs = 0;
    for n in 1..=8 {
        for p in 1..=n {
            for identity in [Identity::Balanced, Identity::Weighted, Identity::AkIdentity] {
                let v = verify_identity(identity, n, p, TRIALS, SEED).unwrap();
                runs += 1;
                worst = worst.max(v.max_abs_residual);
                if !v.pass() || v.max_abs_residual != 0.0 {
                    failures.push(format!("{} n={n} p={p}", identity.name()));
                }
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!("{runs} runs x {TRIALS} rational sequences, max |residual| {worst}, failures {failures:?}"),
    )
}

fn profile_oracles_agree() -> Outcome {
    let mut tuples = 0;
    let mut mismatches = 0;
    for n in 1..=9 {
        for p in 1..=n + 1 {
            for sigma in all_levels(n, p).unwrap().into_iter().flatten() {
                let lambda = maya_to_young(&sigma, p, n).unwrap();
                tuples += 1;
                if profile_geometric(&lambda, p, n).unwrap() != profile_balls(&sigma, p, n).unwrap() {
                    mismatches += 1;
                }
            }
        }
    }
    outcome(mismatches == 0, format!("{tuples} tuples, {mismatches} mismatches"))
}

fn derivative_counts_agree() -> Outcome {
    let mut wedge_bad = Vec::new();
    for p in 1..=4 {
        for i in 0..=8 {
            let leibniz = derive_times(&FormalWedge::identity(p), i, derive_leibniz);
            if derivative_syt(p, i).unwrap() != leibniz {
                wedge_bad.push((p, i));
            }
        }
    }
    let mut shapes = 0;
    let mut count_bad = 0;
    for size in 0..=12 {
        for lambda in bounded_partitions(size, size, size) {
            shapes += 1;
            let hook = f_hook(&lambda);
            let enumerated = BigUint::from(enumerate_syt_capped(&lambda, 12).unwrap().len());
            if f_recursive(&lambda) != hook || enumerated != hook {
                count_bad += 1;
            }
        }
    }
    outcome(
        wedge_bad.is_empty() && count_bad == 0,
        format!(
            "derivative mismatches {wedge_bad:?} over p<=4, i<=8; {shapes} shapes up to 12 cells, {count_bad} count mismatches"
        ),
    )
}

fn six_point_perimeters() -> Outcome {
    let set = FrequencySet::six_point();
    let (r2, r5) = (2f64.sqrt(), 5f64.sqrt());
    let l = perimeters(&set).unwrap();
    let l2 = perimeters_i(&set, 2).unwrap();
    let rows = [
        ("L_1", l.get(1), 2.0 + 3.0 * r2),
        ("L_2", l.get(2), 4.0 + r2 + 2.0 * r5),
        ("L_3", l.get(3), 8.0 + 2.0 * r2),
        ("L_2^(2)", l2[1], 10.0 + 5.0 * r2),
        ("L_3^(2)", l2[2], 8.0 + 4.0 * r2 + 4.0 * r5),
        ("L_1+L_3", l.get(1) + l.get(3), l2[1]),
    ];
    let worst = rows.iter().map(|(_, v, e)| (v - e).abs()).fold(0.0, f64::max);
    let values: Vec<String> = rows.iter().map(|(q, v, _)| format!("{q}={v:.12}")).collect();
    outcome(worst <= TOLERANCE, format!("{}; max error {worst:e}", values.join(", ")))
}

fn minkowski_sets_equal() -> Outcome {
    let mut checks = 0;
    let mut failures = Vec::new();
    for t in 0..100u64 {
        let n = 1 + (t % 7) as usize;
        let set = random_integer_set(&mut stream(SEED, t), n, 6);
        for p in 1..=n {
            checks += 1;
            let m = minkowski_identity_check(&set, p).unwrap();
            if !m.set_equal || !m.pass {
                failures.push((t, p));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!("100 integer sets, n<=7, {checks} (set, p) pairs, failures {failures:?}"),
    )
}

fn peculiar_inequalities_and_sharpness() -> Outcome {
    let mut checks = 0;
    let mut failures = Vec::new();
    for t in 0..500u64 {
        let n = 1 + (t % 6) as usize;
        let mut rng = stream(SEED, 1000 + t);
        // alternate integer points and points on a finer grid
        let set = if t % 2 == 0 {
            random_integer_set(&mut rng, n, 5)
        } else {
            random_eighths_set(&mut rng, n)
        };
        for p in 1..=n {
            for r in peculiar_sweep(&set, p).unwrap() {
                checks += 1;
                if !r.pass() {
                    failures.push((t, p, r.i));
                }
            }
        }
    }
    let mut sharp = 0;
    let mut sharp_bad = Vec::new();
    for n in 1..=8 {
        for p in 1..=n {
            for s in collinear_sharpness(n, p).unwrap() {
                sharp += 1;
                if !s.pass {
                    sharp_bad.push((n, p, s.i));
                }
            }
        }
    }
    outcome(
        failures.is_empty() && sharp_bad.is_empty(),
        format!(
            "500 sets, {checks} (p, i) inequalities, failures {failures:?}; collinear n<=8: {sharp} equalities, failures {sharp_bad:?}"
        ),
    )
}

fn normal_curve_degree_and_plucker_formula() -> Outcome {
    let mut degree_bad = Vec::new();
    for n in 1..=6 {
        let curve = PolyCurve::rational_normal(n);
        for p in 1..=n {
            let degree = associated_degree(&pluecker(&curve, p).unwrap()).unwrap();
            if degree != p * (n - p + 1) {
                degree_bad.push((n, p, degree));
            }
        }
    }
    let mut worst = 0f64;
    let mut bs_bad = Vec::new();
    for n in 1..=8 {
        let v = verify_identity(Identity::BrillSegre, n, 1, 100, SEED).unwrap();
        worst = worst.max(v.max_abs_residual);
        if !v.pass() || !v.max_abs_residual.is_zero() {
            bs_bad.push(n);
        }
    }
    outcome(
        degree_bad.is_empty() && bs_bad.is_empty(),
        format!(
            "degree mismatches {degree_bad:?} for n<=6; 800 random (g, deg, ramification), max residual {worst}, failing n {bs_bad:?}"
        ),
    )
}

fn order_function_slope() -> Outcome {
    let mut checks = 0;
    let mut worst = 0f64;
    let mut failures = Vec::new();
    for t in 0..12u64 {
        let n = 1 + (t % 4) as usize;
        let set = random_integer_set(&mut stream(SEED, 5000 + t), n, 4);
        for p in 1..=n {
            checks += 1;
            let s = slope_check(&set, p, 50.0, 100.0, DEFAULT_SAMPLES).unwrap();
            worst = worst.max(s.relative_error);
            if !s.pass {
                failures.push((t, p));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!("12 sets, n<=4, {checks} slopes at {DEFAULT_SAMPLES} samples, max relative error {worst:.2e}, failures {failures:?}"),
    )
}

/// Id, name, time limit if the criterion has one, and the check.
type Criterion = (usize, &'static str, Option<Duration>, fn() -> Outcome);

#[test]
fn acceptance_criteria() {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria: [Criterion; 10] = [
        (1, "edge sums over 2-subsets of 5", secs(1), edge_sums_small_case),
        (2, "tableau profile of the 2x3 rectangle", secs(1), profile_of_square_rectangle),
        (3, "balanced and weighted sums vanish exactly", secs(60), balanced_sums_vanish),
        (4, "diagonal profile oracles agree, n<=9", secs(30), profile_oracles_agree),
        (5, "derivative coefficients are tableau counts", None, derivative_counts_agree),
        (6, "six-point perimeters", None, six_point_perimeters),
        (7, "Minkowski vertex-set identity", None, minkowski_sets_equal),
        (8, "perimeter inequalities and their equality case", None, peculiar_inequalities_and_sharpness),
        (9, "normal curve degrees and the degree identity", None, normal_curve_degree_and_plucker_formula),
        (10, "order function slope", secs(120), order_function_slope),
    ];
    let mut out = std::io::stdout().lock();
    let mut failed = Vec::new();
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let in_time = limit.is_none_or(|l| elapsed <= l);
        let pass = result.pass && in_time;
        let timing = match limit {
            Some(l) if !in_time => format!("{:.2}s, over the {}s limit", elapsed.as_secs_f64(), l.as_secs()),
            Some(l) => format!("{:.2}s of {}s", elapsed.as_secs_f64(), l.as_secs()),
            None => format!("{:.2}s", elapsed.as_secs_f64()),
        };
        writeln!(
            out,
            "criterion {id:>2}: {} [{timing}] {name}: {}",
            if pass { "PASS" } else { "FAIL" },
            result.detail
        )
        .unwrap();
        if !pass {
            failed.push(id);
        }
    }
    writeln!(
        out,
        "criterion 11: NOTE analytic statements for general holomorphic curves, exceptional sets and the \
         second main theorem are not checkable at desk scale; criteria 6-10 check their exponential-curve \
         forms, where everything reduces to finite planar geometry"
    )
    .unwrap();
    out.flush().unwrap();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
