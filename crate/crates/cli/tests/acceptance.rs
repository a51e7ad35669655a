//! Acceptance suite. Prints one `[PASS]` or `[FAIL]` line per criterion and
//! exits nonzero if any criterion fails.

use std::process::Command;
use std::time::Instant;

use rand::Rng;

use jensen_lab_core::constructs::{
    average_conjugations, decompose_below, pinching_unitary, root_of_unity_sum,
};
use jensen_lab_core::eigen::{eigh, DEFAULT_CLUSTER_TOL};
use jensen_lab_core::random::{
    hermitian_in_from_rng, projection_family_from_rng, random_hermitian_in, rng_for,
};
use jensen_lab_core::verify::{
    check_eigenprojection_compression, check_jensen, check_reconstruction, demo_approximation,
    falsify, run_batch, sample_instance, BatchConfig, FalsificationResult, FalsifyTarget, Strategy,
};
use jensen_lab_core::{
    make_function, CheckKind, ComplexMatrix, ContractionPair, HermitianMatrix, Interval,
    OperatorMap,
};

const OPERATOR_CONVEX: [&str; 5] = ["square", "inverse", "neg_log", "entropy", "neg_sqrt"];

/// Stream for the suite's own samplers.
const SUITE_STREAM: u64 = 7 << 32;

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        ok,
        detail: detail.into(),
    }
}

fn interval(lo: f64, hi: f64) -> Interval {
    Interval::new(lo, hi).unwrap()
}

fn spectral(name: &str) -> OperatorMap {
    OperatorMap::spectral(make_function(name, &[]).unwrap())
}

fn pinching_identity() -> Verdict {
    let mut worst: f64 = 0.0;
    let j = interval(-5.0, 5.0);
    for i in 0..1200u64 {
        let mut rng = rng_for(i, SUITE_STREAM + 1);
        let dim = 1 + (i as usize % 16);
        let k = (1 + (i as usize / 16) % 5).min(dim);
        let x = hermitian_in_from_rng(&j, dim, &mut rng);
        let family = projection_family_from_rng(dim, k, &mut rng).unwrap();
        // Oracle: Σ P_j X P_j by direct multiplication.
        let mut pinched = ComplexMatrix::zeros(dim, dim);
        for p in family.iter() {
            pinched = &pinched + &(&(p.as_matrix() * x.as_matrix()) * p.as_matrix());
        }
        let averaged = average_conjugations(&x, &pinching_unitary(&family), k).unwrap();
        worst = worst.max((&pinched - averaged.as_matrix()).max_norm() / (1.0 + x.max_norm()));
    }
    let mut worst_sum: f64 = 0.0;
    for k in 1..=12 {
        for r in 0..k {
            for s in 0..k {
                let expected = if r == s { k as f64 } else { 0.0 };
                worst_sum = worst_sum.max((root_of_unity_sum(k, r, s) - expected).norm());
            }
        }
    }
    verdict(
        worst <= 1e-10 && worst_sum <= 1e-12,
        format!("1200 cases, max relative deviation {worst:.2e}; root-of-unity sums off by at most {worst_sum:.2e}"),
    )
}

fn decomposition() -> Verdict {
    let j = interval(-2.0, 2.0);
    let unit = interval(0.0, 1.0);
    let (mut worst_rec, mut worst_pair, mut cases, mut draws) = (0.0f64, 0.0f64, 0, 0u64);
    while cases < 1000 {
        let mut rng = rng_for(draws, SUITE_STREAM + 2);
        draws += 1;
        let dim = 1 + (draws as usize % 16);
        let a = hermitian_in_from_rng(&j, dim, &mut rng);
        let g = hermitian_in_from_rng(&unit, dim, &mut rng);
        let y = &a + &g;
        let delta = 10f64.powf(rng.gen_range(-3.0..=0.0));
        let alpha = eigh(&a).unwrap().min() - delta;
        let shifted = eigh(&y.shift(-alpha)).unwrap();
        if shifted.max() / shifted.min() > 1e6 {
            continue;
        }
        let pair = decompose_below(&a, &y, alpha).unwrap();
        // Oracle: both identities by direct multiplication.
        let (c, d) = (pair.c(), pair.d());
        let rebuilt = &(&(&c.adjoint() * y.as_matrix()) * c) + &(&d.adjoint() * d).scale(alpha);
        worst_rec = worst_rec.max((&rebuilt - a.as_matrix()).max_norm() / (1.0 + a.max_norm()));
        let gram = &(&c.adjoint() * c) + &(&d.adjoint() * d);
        worst_pair = worst_pair.max((&gram - &ComplexMatrix::identity(dim)).max_norm());
        cases += 1;
    }
    verdict(
        worst_rec <= 1e-8 && worst_pair <= 1e-9,
        format!("{cases} triples, max relative reconstruction residual {worst_rec:.2e}, max pair residual {worst_pair:.2e}"),
    )
}

fn jensen_positivity() -> Verdict {
    let mut failures = 0;
    let mut inconclusive = 0;
    let mut min_ratio = f64::INFINITY;
    for name in OPERATOR_CONVEX {
        for dim in [2, 4, 8] {
            let r = run_batch(&BatchConfig {
                check: CheckKind::Jensen,
                map: spectral(name),
                dim,
                k: 2,
                trials: 1000,
                seed: 3,
                tol: None,
                cluster_tol: DEFAULT_CLUSTER_TOL,
            })
            .unwrap();
            failures += r.summary.failed;
            inconclusive += r.summary.inconclusive;
            for rep in &r.reports {
                min_ratio = min_ratio.min(rep.margin / rep.tol);
            }
        }
    }
    verdict(
        failures == 0 && inconclusive == 0,
        format!(
            "15000 checks over 5 functions × dims 2,4,8: {failures} failures, {inconclusive} inconclusive, min margin/tol {min_ratio:.2e}"
        ),
    )
}

fn found(r: &FalsificationResult) -> bool {
    r.found
        && r.trials_used <= 10_000
        && matches!((r.margin, r.reverified_margin), (Some(m), Some(v)) if (m - v).abs() <= 1e-9 * (1.0 + m.abs()))
}

fn known_falsifications() -> Verdict {
    let search = |map: OperatorMap, check: CheckKind| {
        falsify(&FalsifyTarget::new(map, check), 2, 10_000, 1, None).unwrap()
    };
    let trace = search(OperatorMap::trace(), CheckKind::Jensen);
    let p = HermitianMatrix::diagonal(&[1.0, 0.0]);
    let fixture = check_jensen(
        &OperatorMap::trace(),
        &p,
        &HermitianMatrix::zeros(2),
        &ContractionPair::from_projection(&p).unwrap(),
        1e-9,
    )
    .unwrap();
    let cube = search(
        spectral("cube").with_domain(interval(0.0, 2.0)).unwrap(),
        CheckKind::Convexity,
    );
    let abs = search(
        spectral("abs").with_domain(interval(-1.0, 1.0)).unwrap(),
        CheckKind::Convexity,
    );
    let affine = search(OperatorMap::affine(1.0, 1.0).unwrap(), CheckKind::Jensen);
    let cube_margin = cube.margin.unwrap_or(0.0);
    let ok = found(&trace)
        && (fixture.margin + 1.0).abs() <= 1e-9
        && found(&cube)
        && cube_margin < -1e-6
        && found(&abs)
        && found(&affine);
    verdict(
        ok,
        format!(
            "trace witness at trial {}, fixture margin {:.12}; cube witness at trial {} (margin {:.3e}); abs at trial {}; affine(1,1) at trial {}",
            trace.trials_used, fixture.margin, cube.trials_used, cube_margin, abs.trials_used, affine.trials_used
        ),
    )
}

/// Spectral maps used for identity checks, each with an interval well inside
/// its domain.
fn identity_check_maps() -> Vec<OperatorMap> {
    let mut maps: Vec<OperatorMap> = OPERATOR_CONVEX
        .iter()
        .chain(["cube", "identity"].iter())
        .map(|n| spectral(n).with_domain(interval(0.0, 2.0)).unwrap())
        .collect();
    maps.push(spectral("abs").with_domain(interval(-1.0, 1.0)).unwrap());
    maps
}

fn reconstruction() -> Verdict {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for map in identity_check_maps() {
        for dim in [2, 4, 8] {
            for seed in 0..500 {
                let a = random_hermitian_in(&map.domain(), dim, seed).unwrap();
                let r = check_reconstruction(&map, &a, DEFAULT_CLUSTER_TOL, 1e-9).unwrap();
                worst = worst.max(-r.margin);
                count += 1;
            }
        }
    }
    let fixture = check_reconstruction(
        &OperatorMap::trace(),
        &HermitianMatrix::diagonal(&[1.0, 0.0]),
        DEFAULT_CLUSTER_TOL,
        1e-9,
    )
    .unwrap();
    verdict(
        worst <= 1e-9 && (fixture.margin + 1.0).abs() <= 1e-9,
        format!(
            "{count} spectral cases, max residual {worst:.2e}; trace fixture margin {:.12}",
            fixture.margin
        ),
    )
}

fn compression() -> Verdict {
    let mut worst: f64 = 0.0;
    let mut min_gap = f64::INFINITY;
    let mut count = 0;
    for map in identity_check_maps() {
        for i in 0..500u64 {
            let dim = [2, 4, 8][i as usize % 3];
            let mut rng = rng_for(i, SUITE_STREAM + 6);
            let inst = sample_instance(
                CheckKind::Compression,
                &map,
                dim,
                1,
                Strategy::Random,
                &mut rng,
            )
            .unwrap();
            let jensen_lab_core::verify::Instance::Compression { x } = &inst else {
                unreachable!()
            };
            let values = eigh(x).unwrap().eigenvalues;
            min_gap = values
                .windows(2)
                .map(|w| w[1] - w[0])
                .fold(min_gap, f64::min);
            let r = check_eigenprojection_compression(&map, x, DEFAULT_CLUSTER_TOL, 1e-9).unwrap();
            worst = worst.max(-r.margin);
            count += 1;
        }
    }
    let fixture = check_eigenprojection_compression(
        &OperatorMap::trace(),
        &HermitianMatrix::diagonal(&[1.0, 0.0]),
        DEFAULT_CLUSTER_TOL,
        1e-9,
    )
    .unwrap();
    verdict(
        worst <= 1e-9 && min_gap >= 1e-3 && (fixture.margin + 1.0).abs() <= 1e-9,
        format!(
            "{count} cases, min eigenvalue gap {min_gap:.2e}, max residual {worst:.2e}; trace fixture margin {:.12}",
            fixture.margin
        ),
    )
}

fn pinching() -> Verdict {
    let mut maps: Vec<OperatorMap> = OPERATOR_CONVEX
        .iter()
        .map(|n| spectral(n).with_domain(interval(0.0, 2.0)).unwrap())
        .collect();
    maps.push(
        OperatorMap::trace()
            .with_domain(interval(-1.0, 1.0))
            .unwrap(),
    );
    let (mut min_margin, mut worst_residual, mut count) = (f64::INFINITY, 0.0f64, 0);
    for map in &maps {
        for i in 0..500u64 {
            let dim = 1 + (i as usize % 8);
            let mut rng = rng_for(i, SUITE_STREAM + 7);
            let k = rng.gen_range(1..=dim.min(4));
            let strategy = Strategy::for_trial(i as usize);
            let ineq = sample_instance(CheckKind::Pinch, map, dim, k, strategy, &mut rng).unwrap();
            let r = ineq.check(map, 1e-9, DEFAULT_CLUSTER_TOL).unwrap();
            min_margin = min_margin.min(r.margin);
            let ident =
                sample_instance(CheckKind::PinchCommute, map, dim, k, strategy, &mut rng).unwrap();
            let r = ident.check(map, 1e-9, DEFAULT_CLUSTER_TOL).unwrap();
            worst_residual = worst_residual.max(-r.margin);
            count += 1;
        }
    }
    verdict(
        min_margin >= -1e-9 && worst_residual <= 1e-9,
        format!("{count} cases per check, min inequality margin {min_margin:.2e}, max commutation residual {worst_residual:.2e}"),
    )
}

fn approximation() -> Verdict {
    let j = interval(0.0, 2.0);
    let f = make_function("square", &[]).unwrap();
    let meshes = [0.4, 0.2, 0.1, 0.05];
    let mut ok = true;
    let mut last_detail = String::new();
    for seed in 0..20 {
        let a = random_hermitian_in(&j, 8, seed).unwrap();
        let rows = demo_approximation(&f, &a, &meshes, &j).unwrap();
        for row in &rows {
            ok &= row.upper_margin >= -1e-10 && row.lower_margin >= -1e-10;
            ok &= row.upper_error <= row.mesh + 1e-10 && row.lower_error <= row.mesh + 1e-10;
            ok &= row.upper_value_error <= 4.0 * row.mesh + 1e-8
                && row.lower_value_error <= 4.0 * row.mesh + 1e-8;
        }
        for w in rows.windows(2) {
            // Nested subdivisions make the errors non-increasing up to rounding.
            ok &= w[1].upper_value_error <= w[0].upper_value_error + 1e-12
                && w[1].lower_value_error <= w[0].lower_value_error + 1e-12;
        }
        ok &= rows[3].upper_value_error < rows[0].upper_value_error
            && rows[3].lower_value_error < rows[0].lower_value_error;
        if seed == 0 {
            last_detail = rows
                .iter()
                .map(|r| format!("{}: {:.3e}", r.mesh, r.upper_value_error))
                .collect::<Vec<_>>()
                .join(", ");
        }
    }
    verdict(
        ok,
        format!("20 matrices of dim 8; ‖f(Y)−f(A)‖₂ for seed 0 by mesh: {last_detail}"),
    )
}

fn determinism() -> Verdict {
    let bin = env!("CARGO_BIN_EXE_jensen-lab");
    let commands: &[&[&str]] = &[
        &[
            "falsify", "--map", "trace", "--dim", "2", "--trials", "10000", "--seed", "1",
            "--expect", "found",
        ],
        &[
            "falsify",
            "--function",
            "cube",
            "--check",
            "convexity",
            "--interval",
            "0,2",
            "--dim",
            "2",
            "--trials",
            "10000",
            "--seed",
            "1",
        ],
        &[
            "falsify",
            "--function",
            "abs",
            "--check",
            "convexity",
            "--interval",
            "-1,1",
            "--dim",
            "2",
            "--trials",
            "10000",
            "--seed",
            "1",
        ],
        &[
            "falsify",
            "--map",
            "affine:1,1",
            "--dim",
            "2",
            "--trials",
            "10000",
            "--seed",
            "1",
        ],
        &[
            "falsify",
            "--function",
            "square",
            "--dim",
            "3",
            "--trials",
            "2000",
            "--seed",
            "4",
        ],
        &[
            "verify",
            "--map",
            "spectral:square",
            "--check",
            "jensen",
            "--dim",
            "4",
            "--trials",
            "1000",
            "--seed",
            "7",
        ],
        &[
            "verify",
            "--function",
            "inverse",
            "--check",
            "pinch",
            "--k",
            "3",
            "--dim",
            "6",
            "--trials",
            "200",
            "--seed",
            "2",
        ],
        &[
            "verify",
            "--map",
            "spectral:neg_log",
            "--check",
            "compression",
            "--interval",
            "0,2",
            "--dim",
            "4",
            "--trials",
            "100",
            "--seed",
            "2",
        ],
        &["reconstruct", "--map", "trace", "--dim", "3", "--seed", "5"],
        &[
            "extract-f",
            "--map",
            "affine:1,1",
            "--grid",
            "0:1:11",
            "--dim",
            "2",
        ],
        &["demo-pinch", "--dim", "8", "--k", "4", "--seed", "3"],
        &["demo-decompose", "--dim", "6", "--seed", "3"],
        &[
            "demo-approx",
            "--function",
            "square",
            "--interval",
            "0,2",
            "--dim",
            "8",
            "--mesh",
            "0.4,0.2,0.1,0.05",
            "--seed",
            "3",
        ],
    ];
    let run = |args: &[&str]| {
        Command::new(bin)
            .args(args)
            .env_remove("JENSEN_LAB_SEED")
            .output()
            .expect("binary runs")
    };
    let mut mismatched = Vec::new();
    for args in commands {
        let (first, second) = (run(args), run(args));
        if first.stdout.is_empty()
            || first.stdout != second.stdout
            || first.status.code() != second.status.code()
        {
            mismatched.push(args[0..3].join(" "));
        }
    }
    verdict(
        mismatched.is_empty(),
        format!(
            "{} commands run twice; mismatches: {:?}",
            commands.len(),
            mismatched
        ),
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        (
            "pinching equals an average of root-of-unity conjugations",
            pinching_identity,
        ),
        ("contraction-pair decomposition closes", decomposition),
        (
            "Jensen inequality holds for operator convex spectral maps",
            jensen_positivity,
        ),
        ("known counterexamples are found", known_falsifications),
        (
            "reconstruction from the representing function",
            reconstruction,
        ),
        ("eigenprojection compression", compression),
        ("pinching inequality and commutation", pinching),
        ("step approximants converge", approximation),
        ("reports are byte-identical across runs", determinism),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let v = run();
        if !v.ok {
            failed += 1;
        }
        println!(
            "[{}] criterion {}: {} ({:.1}s) {}",
            if v.ok { "PASS" } else { "FAIL" },
            i + 1,
            name,
            t.elapsed().as_secs_f64(),
            v.detail
        );
    }
    println!(
        "{} of {} criteria passed in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
