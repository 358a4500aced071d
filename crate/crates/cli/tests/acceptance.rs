//! Acceptance suite: every exit criterion runs here at its stated tolerance
//! and scale, one test per criterion, each printing a `criterion N ... PASS`
//! line with its runtime. All randomness is seeded, so the suite is fully
//! deterministic.

#![allow(clippy::needless_range_loop)]

use std::fs;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use finchain::convergence::{mixing_time, CouplingCertificate};
use finchain::generate::{
    random_aperiodic_kernel, random_dyadic_weights, random_irreducible_kernel,
    random_pattern_kernel, random_permutation, random_positive_weights,
};
use finchain::sampler::{
    ergodic_average_scalar, gibbs_conditional_kernel, gibbs_sweep_kernel, mh_kernel, mh_step,
    run_chain, run_mh_chain,
};
use finchain::stationary::{left_eigenvector_sign_check, solve_stationary};
use finchain::structure::{check_irreducible, reachable};
use finchain::targets::{
    anti_diagonal_target, enumerate_expectation, ising_weights, run_ising_gibbs, IsingModel,
};
use finchain::{ProductSpaceCodec, RandomStream, TransitionKernel, UnnormalizedWeights};

/// Raw power iteration: `rows <- rows * k`, without kernel revalidation.
fn advance(rows: &[Vec<f64>], k: &TransitionKernel) -> Vec<Vec<f64>> {
    let n = rows.len();
    let mut out = vec![vec![0.0; n]; n];
    for (z, out_row) in out.iter_mut().enumerate() {
        for (j, &a) in rows[z].iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (s, &b) in k.row(j).iter().enumerate() {
                out_row[s] += a * b;
            }
        }
    }
    out
}

fn max_pointwise_gap(rows: &[Vec<f64>], pi: &[f64]) -> f64 {
    rows.iter()
        .flat_map(|row| row.iter().zip(pi).map(|(a, b)| (a - b).abs()))
        .fold(0.0f64, f64::max)
}

fn tv(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .sum::<f64>()
}

fn report(criterion: u32, label: &str, start: Instant, budget: Duration) {
    let elapsed = start.elapsed();
    println!(
        "criterion {criterion} ({label}): PASS in {:.2?} (budget {:?})",
        elapsed, budget
    );
    assert!(
        elapsed < budget,
        "criterion {criterion} exceeded its runtime budget: {elapsed:.2?} >= {budget:?}"
    );
}

#[test]
fn criterion_01_geometric_dominance_of_powers() {
    let start = Instant::now();
    let mut rng = RandomStream::new(0xC1);
    for trial in 0..200 {
        let k = 2 + trial % 7;
        let kernel = random_aperiodic_kernel(k, &mut rng);
        let pi = solve_stationary(&kernel).unwrap().pi;
        let cert = CouplingCertificate::from_kernel(&kernel).unwrap();
        let mut rows = kernel.rows().to_vec();
        for n in 1..=200usize {
            let gap = max_pointwise_gap(&rows, pi.mass());
            let bound = cert.bound(n);
            assert!(
                gap <= bound + 1e-12,
                "trial {trial}: gap {gap} exceeds bound {bound} at n {n}"
            );
            if n < 200 {
                rows = advance(&rows, &kernel);
            }
        }
    }
    report(1, "pointwise decay dominated by (1-eps)^(n/N)", start, Duration::from_secs(10));
}

#[test]
fn criterion_02_mixing_time_reaches_tolerance_from_every_start() {
    let start = Instant::now();
    let tol = 1e-8;
    let mut rng = RandomStream::new(0xC1);
    for trial in 0..200 {
        let k = 2 + trial % 7;
        let kernel = random_aperiodic_kernel(k, &mut rng);
        let pi = solve_stationary(&kernel).unwrap().pi;
        let t_mix = mixing_time(&kernel, tol).unwrap();
        let mut rows = kernel.rows().to_vec();
        for _ in 1..t_mix {
            rows = advance(&rows, &kernel);
        }
        for (z, row) in rows.iter().enumerate() {
            assert!(
                tv(row, pi.mass()) <= tol,
                "trial {trial}: start {z} above tolerance at the mixing time"
            );
        }
        // Start-state independence: any two starts agree within 2 tol.
        for z in 0..k {
            for y in z + 1..k {
                assert!(tv(&rows[z], &rows[y]) <= 2.0 * tol);
            }
        }
    }
    report(2, "worst-start TV at the mixing time", start, Duration::from_secs(10));
}

#[test]
fn criterion_03_stationary_solver_residual_uniqueness_signs() {
    let start = Instant::now();
    let mut rng = RandomStream::new(0xC3);
    for trial in 0..1000 {
        let k = 2 + trial % 5;
        let kernel = random_irreducible_kernel(k, &mut rng);
        let result = solve_stationary(&kernel).unwrap();
        assert!(result.residual <= 1e-10, "trial {trial}");

        // Uniqueness through permutation stability.
        let perm = random_permutation(k, &mut rng);
        let permuted_result = solve_stationary(&kernel.permute(&perm)).unwrap();
        let mut inverse = vec![0usize; k];
        for (s, &t) in perm.iter().enumerate() {
            inverse[t] = s;
        }
        let recovered = permuted_result.pi.permute(&inverse);
        let gap = recovered
            .mass()
            .iter()
            .zip(result.pi.mass())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(gap <= 1e-10, "trial {trial}: permutation gap {gap}");

        // Every computed left 1-eigenvector has one sign.
        assert!(left_eigenvector_sign_check(&kernel, result.pi.mass(), 1e-9).unwrap());
        assert!(
            left_eigenvector_sign_check(&kernel.permute(&perm), permuted_result.pi.mass(), 1e-9)
                .unwrap()
        );
        let negated: Vec<f64> = result.pi.mass().iter().map(|v| -v).collect();
        assert!(left_eigenvector_sign_check(&kernel, &negated, 1e-9).unwrap());
    }
    report(3, "solver residual, uniqueness, sign structure", start, Duration::from_secs(30));
}

#[test]
fn criterion_04_gibbs_kernels_preserve_the_target() {
    let start = Instant::now();
    let codec = ProductSpaceCodec::new(3, 2).unwrap();
    let mut rng = RandomStream::new(0xC4);
    for trial in 0..100 {
        let weights = random_positive_weights(codec.total(), &mut rng);
        let pi = weights.normalize().unwrap();
        for coord in 0..codec.coords() {
            let conditional = gibbs_conditional_kernel(&weights, &codec, coord).unwrap();
            let pushed = pi.push_forward(&conditional).unwrap();
            let gap = pushed
                .mass()
                .iter()
                .zip(pi.mass())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            assert!(gap <= 1e-12, "trial {trial} coord {coord}: gap {gap}");
        }
        let sweep = gibbs_sweep_kernel(&weights, &codec).unwrap();
        let pushed = pi.push_forward(&sweep).unwrap();
        let gap = pushed
            .mass()
            .iter()
            .zip(pi.mass())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(gap <= 1e-12, "trial {trial} sweep: gap {gap}");
    }
    report(4, "coordinate and sweep kernels leave pi invariant", start, Duration::from_secs(5));
}

#[test]
fn criterion_05_anti_diagonal_target_breaks_gibbs() {
    let start = Instant::now();
    let (pi, codec) = anti_diagonal_target();
    let weights = UnnormalizedWeights::from_distribution(&pi);
    let sweep = gibbs_sweep_kernel(&weights, &codec).unwrap();
    assert!(!check_irreducible(&sweep));
    let from = codec.encode(&[1, 0]);
    let to = codec.encode(&[0, 1]);
    assert!(
        !reachable(&sweep, from)[to],
        "(0,1) must be unreachable from (1,0)"
    );
    report(5, "reducible sweep kernel for the anti-diagonal target", start, Duration::from_secs(1));
}

#[test]
fn criterion_06_detailed_balance_and_exact_scale_freedom() {
    let start = Instant::now();
    let mut rng = RandomStream::new(0xC6);
    for trial in 0..200 {
        let k = 2 + trial % 9;
        let proposal = random_pattern_kernel(k, &mut rng);

        // Weights with single-bit mantissas: multiplying them by any
        // constant is exact in IEEE arithmetic, so bit-identity of the
        // scaled kernel is a meaningful demand. (Scaling a general float
        // vector already perturbs the inputs themselves, which no
        // implementation could undo.)
        let weights = random_dyadic_weights(k, &mut rng);
        let pi = weights.normalize().unwrap();
        let kernel = mh_kernel(&weights, &proposal).unwrap();
        let residual = pi.detailed_balance_residual(&kernel).unwrap();
        assert!(residual <= 1e-14, "trial {trial}: residual {residual}");
        for c in [1e-6, 1e6] {
            let scaled = UnnormalizedWeights::from_weights(
                weights.weights().iter().map(|w| w * c).collect(),
            )
            .unwrap();
            let scaled_kernel = mh_kernel(&scaled, &proposal).unwrap();
            for z in 0..k {
                for s in 0..k {
                    assert_eq!(
                        scaled_kernel.entry(z, s).to_bits(),
                        kernel.entry(z, s).to_bits(),
                        "trial {trial} c {c} entry ({z},{s})"
                    );
                }
            }
        }

        // Same check sweep with continuous weights for detailed balance.
        let generic = random_positive_weights(k, &mut rng);
        let generic_kernel = mh_kernel(&generic, &proposal).unwrap();
        let residual = generic
            .normalize()
            .unwrap()
            .detailed_balance_residual(&generic_kernel)
            .unwrap();
        assert!(residual <= 1e-14, "trial {trial}: generic residual {residual}");
    }
    report(6, "MH detailed balance and bit-exact weight scaling", start, Duration::from_secs(5));
}

#[test]
fn criterion_07_sampler_agrees_with_derived_kernel() {
    let start = Instant::now();
    let weights = UnnormalizedWeights::from_weights(vec![1.0, 2.0, 3.0]).unwrap();
    let proposal = TransitionKernel::uniform(3).unwrap();
    let derived = mh_kernel(&weights, &proposal).unwrap();
    // The hand-derived kernel pinned entry by entry.
    let third = 1.0 / 3.0;
    let expected = [
        [third, third, third],
        [1.0 / 6.0, 0.5, third],
        [1.0 / 9.0, 2.0 / 9.0, 2.0 / 3.0],
    ];
    for z in 0..3 {
        for s in 0..3 {
            assert!((derived.entry(z, s) - expected[z][s]).abs() <= 1e-15);
        }
    }
    let trials = 100_000usize;
    for z in 0..3 {
        let mut rng = RandomStream::new(0xC7 + z as u64);
        let mut counts = [0usize; 3];
        for _ in 0..trials {
            counts[mh_step(&weights, &proposal, z, &mut rng)] += 1;
        }
        for s in 0..3 {
            let p = derived.entry(z, s);
            let freq = counts[s] as f64 / trials as f64;
            let se = (p * (1.0 - p) / trials as f64).sqrt();
            assert!(
                (freq - p).abs() <= 3.0 * se,
                "start {z} state {s}: |{freq} - {p}| > 3se ({se})"
            );
        }
    }
    report(7, "one-step frequencies match the derived kernel", start, Duration::from_secs(5));
}

#[test]
fn criterion_08_ergodic_averages_match_enumeration() {
    let start = Instant::now();

    // Uniform target, symmetric proposal without self-loops, k = 4.
    let uniform_weights = UnnormalizedWeights::from_weights(vec![1.0; 4]).unwrap();
    let third = 1.0 / 3.0;
    let symmetric = TransitionKernel::from_rows(vec![
        vec![0.0, third, third, third],
        vec![third, 0.0, third, third],
        vec![third, third, 0.0, third],
        vec![third, third, third, 0.0],
    ])
    .unwrap();
    let trace =
        run_mh_chain(&uniform_weights, &symmetric, 0, 100_000, RandomStream::new(0xC8)).unwrap();
    let indicator_first = |s: usize| if s == 0 { 1.0 } else { 0.0 };
    let estimate = ergodic_average_scalar(&trace, indicator_first, 0).unwrap();
    let exact = enumerate_expectation(&uniform_weights, indicator_first);
    assert_eq!(exact, 0.25);
    assert!(
        (estimate - exact).abs() <= 0.01,
        "uniform MH estimate {estimate} vs exact {exact}"
    );

    // Wedge target (1, 2, 3), uniform proposal, indicator of the heavy state.
    let wedge = UnnormalizedWeights::from_weights(vec![1.0, 2.0, 3.0]).unwrap();
    let uniform_proposal = TransitionKernel::uniform(3).unwrap();
    let trace =
        run_mh_chain(&wedge, &uniform_proposal, 0, 100_000, RandomStream::new(0xC8 + 1)).unwrap();
    let indicator_heavy = |s: usize| if s == 2 { 1.0 } else { 0.0 };
    let estimate = ergodic_average_scalar(&trace, indicator_heavy, 1000).unwrap();
    let exact = enumerate_expectation(&wedge, indicator_heavy);
    assert_eq!(exact, 0.5);
    assert!(
        (estimate - exact).abs() <= 0.01,
        "wedge MH estimate {estimate} vs exact {exact}"
    );

    // Gibbs sweep chain over the 2x2 Ising target at beta = 0.4, indicator
    // of the all-up configuration.
    let model = IsingModel::new(2, 2, 0.4).unwrap();
    let weights = ising_weights(&model);
    let codec = model.codec();
    let sweep = gibbs_sweep_kernel(&weights, &codec).unwrap();
    let all_up = codec.total() - 1;
    let trace = run_chain(&sweep, all_up, 100_000, RandomStream::new(0xC8 + 2));
    let indicator_up = |s: usize| if s == all_up { 1.0 } else { 0.0 };
    let estimate = ergodic_average_scalar(&trace, indicator_up, 0).unwrap();
    let exact = enumerate_expectation(&weights, indicator_up);
    assert!(
        (estimate - exact).abs() <= 0.01,
        "Gibbs estimate {estimate} vs exact {exact}"
    );

    report(8, "MH and Gibbs indicator averages vs enumeration", start, Duration::from_secs(10));
}

#[test]
fn criterion_09_ising_conditionals_and_magnetization() {
    let start = Instant::now();
    // Logistic site conditionals against the generic fiber conditionals on
    // every grid up to 3x3 and four couplings.
    for width in 1..=3usize {
        for height in 1..=3usize {
            for &beta in &[-1.0, 0.0, 0.5, 1.0] {
                let model = IsingModel::new(width, height, beta).unwrap();
                let weights = ising_weights(&model);
                let codec = model.codec();
                for site in 0..model.sites() {
                    let generic = gibbs_conditional_kernel(&weights, &codec, site).unwrap();
                    for index in 0..codec.total() {
                        let spins = model.decode_spins(index);
                        let mut up = spins.clone();
                        up[site] = 1;
                        let fiber = generic.entry(index, model.encode_spins(&up));
                        let logistic = model.site_conditional_plus(&spins, site).unwrap();
                        assert!(
                            (fiber - logistic).abs() <= 1e-12,
                            "{width}x{height} beta {beta} site {site} config {index}"
                        );
                    }
                }
            }
        }
    }

    // 2x2 Gibbs magnetization against the 16-state enumeration.
    let model = IsingModel::new(2, 2, 0.4).unwrap();
    let weights = ising_weights(&model);
    let exact = enumerate_expectation(&weights, |s| {
        model.magnetization(&model.decode_spins(s)).abs()
    });
    let run = run_ising_gibbs(&model, 100_000, RandomStream::new(0xC9));
    let estimate = run.magnetization.iter().map(|m| m.abs()).sum::<f64>()
        / run.magnetization.len() as f64;
    assert!(
        (estimate - exact).abs() <= 0.02,
        "building estimate {estimate} vs exact {exact}"
    );
    report(9, "site conditionals and 2x2 magnetization", start, Duration::from_secs(30));
}

#[test]
fn criterion_10_cli_runs_are_byte_identical() {
    let start = Instant::now();
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("determinism");
    fs::create_dir_all(&dir).unwrap();
    let weather = dir.join("weather.json");
    fs::write(&weather, r#"{"matrix":[[0.9,0.1],[0.2,0.8]]}"#).unwrap();
    let weights = dir.join("w.json");
    fs::write(&weights, r#"{"mass":[1.0,2.0,3.0]}"#).unwrap();
    let proposal = dir.join("q.json");
    fs::write(
        &proposal,
        r#"{"matrix":[[0.3333333333333333,0.3333333333333333,0.3333333333333333],[0.3333333333333333,0.3333333333333333,0.3333333333333333],[0.3333333333333333,0.3333333333333333,0.3333333333333333]]}"#,
    )
    .unwrap();

    let weather_arg = weather.to_str().unwrap().to_string();
    let weights_arg = weights.to_str().unwrap().to_string();
    let proposal_arg = proposal.to_str().unwrap().to_string();

    let commands: Vec<(Vec<String>, Vec<&str>)> = vec![
        (vec!["analyze".into(), weather_arg.clone()], vec![]),
        (vec!["stationary".into(), weather_arg.clone()], vec![]),
        (
            vec!["converge".into(), weather_arg.clone(), "--n-max".into(), "40".into()],
            vec![],
        ),
        (
            vec![
                "mh".into(),
                "--weights".into(),
                weights_arg.clone(),
                "--proposal".into(),
                proposal_arg.clone(),
                "--start".into(),
                "1".into(),
                "--steps".into(),
                "20000".into(),
                "--burn-in".into(),
                "100".into(),
                "--seed".into(),
                "42".into(),
                "--f".into(),
                "indicator:3".into(),
                "--trace-out".into(),
                dir.join("trace.csv").to_str().unwrap().into(),
                "--kernel-out".into(),
                dir.join("kernel.json").to_str().unwrap().into(),
            ],
            vec!["trace.csv", "kernel.json"],
        ),
        (
            vec![
                "ising".into(),
                "--grid".into(),
                "2x2".into(),
                "--beta".into(),
                "0.4".into(),
                "--steps".into(),
                "20000".into(),
                "--seed".into(),
                "7".into(),
                "--trace-out".into(),
                dir.join("mag.csv").to_str().unwrap().into(),
            ],
            vec!["mag.csv"],
        ),
    ];

    for (args, files) in &commands {
        let first = Command::new(env!("CARGO_BIN_EXE_finchain"))
            .args(args)
            .output()
            .unwrap();
        assert!(first.status.success(), "args {args:?}");
        let first_files: Vec<Vec<u8>> =
            files.iter().map(|f| fs::read(dir.join(f)).unwrap()).collect();

        let second = Command::new(env!("CARGO_BIN_EXE_finchain"))
            .args(args)
            .output()
            .unwrap();
        assert!(second.status.success());
        let second_files: Vec<Vec<u8>> =
            files.iter().map(|f| fs::read(dir.join(f)).unwrap()).collect();

        assert_eq!(first.stdout, second.stdout, "stdout differs for {args:?}");
        assert_eq!(first_files, second_files, "files differ for {args:?}");
    }
    report(10, "repeated CLI invocations are byte-identical", start, Duration::from_secs(30));
}
