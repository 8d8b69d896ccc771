//! End-to-end acceptance suite. Each test prints one PASS/FAIL line so
//! the whole gate can be read off `--nocapture` output.

use beamsweep::model::{self, Deployment, Scenario};
use beamsweep::sim;
use beamsweep::ssb::{SlotFilter, SsbCase, SsbGrid};
use beamsweep::sweep::{self, SweepRequest};
use beamsweep::tdd::TddPattern;
use beamsweep_cli::validate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::process::Command;
use std::time::Instant;

fn report(criterion: &str, pass: bool) {
    println!("criterion {criterion}: {}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {criterion} failed");
}

#[test]
fn criterion_1_effective_ssb_counts() {
    let started = Instant::now();
    let expected = [
        (SsbCase::D, "a", 52, 56),
        (SsbCase::D, "b", 50, 52),
        (SsbCase::F, "a", 64, 64),
        (SsbCase::F, "b", 64, 64),
        (SsbCase::G, "a", 64, 64),
        (SsbCase::G, "b", 64, 64),
    ];
    let mut ok = true;
    for (case, pattern_label, dl, dl_s) in expected {
        let pattern = if pattern_label == "a" {
            TddPattern::a()
        } else {
            TddPattern::b()
        };
        let got_dl = SsbGrid::effective(case, pattern, SlotFilter::DlOnly)
            .unwrap()
            .l_eff();
        let got_both = SsbGrid::effective(case, pattern, SlotFilter::DlAndSpecial)
            .unwrap()
            .l_eff();
        ok &= got_dl == dl && got_both == dl_s;
    }
    ok &= started.elapsed().as_secs_f64() < 1.0;
    report("1 (effective SSB counts, exact)", ok);
}

#[test]
fn criterion_2_closed_form_oracle_equivalence() {
    let started = Instant::now();
    let outcome = validate::check_equivalence(512);
    let checks = outcome.as_ref().map(|&n| n).unwrap_or(0);
    let ok = outcome.is_ok() && checks == 6144 && started.elapsed().as_secs_f64() < 10.0;
    if let Err(m) = outcome {
        eprintln!("first mismatch: {m}");
    }
    report("2 (sweep-time equivalence, 6144 exact checks)", ok);
}

#[test]
fn criterion_3_sweep_curve_steps() {
    let grid_f = SsbGrid::effective(SsbCase::F, TddPattern::a(), SlotFilter::DlOnly).unwrap();
    let t = |grid: &SsbGrid, n: u32| {
        sweep::closed_form(&SweepRequest::new(grid, n, 20).unwrap()).unwrap()
    };

    let t64 = t(&grid_f, 64);
    let t65 = t(&grid_f, 65);
    let mut ok = t64.sweep_symbols() == 448 && t64.t_sweep_ms() == 1.0;
    ok &= t65.t_sweep_ms() - t64.t_sweep_ms() > 18.0;

    let grid_d = SsbGrid::effective(SsbCase::D, TddPattern::a(), SlotFilter::DlOnly).unwrap();
    // No step below the set capacity: every increment stays inside the
    // 5 ms burst window.
    for n in 2..=52u32 {
        let step = t(&grid_d, n).t_sweep_ms() - t(&grid_d, n - 1).t_sweep_ms();
        ok &= step > 0.0 && step < 5.0;
    }
    // The first step lands between 52 and 53 requested SSBs.
    ok &= t(&grid_d, 52).sweep_symbols() == 490;
    ok &= t(&grid_d, 53).sweep_symbols() == 20 * 112 + 8;
    ok &= t(&grid_d, 53).t_sweep_ms() - t(&grid_d, 52).t_sweep_ms() > 15.0;
    report("3 (sweep curve: 1 ms full set, step locations)", ok);
}

#[test]
fn criterion_4_overlap_factor() {
    let started = Instant::now();
    let est = sim::simulate_overlap_factor(12.0, 1_000_000, 20240);
    let ok = (est.mean - 5.0 / 3.0).abs() <= 0.01 && started.elapsed().as_secs_f64() < 5.0;
    println!("  overlap factor estimate {:.5} (target {:.5})", est.mean, 5.0 / 3.0);
    report("4 (overlap factor converges to 5/3 within 0.01)", ok);
}

#[test]
fn criterion_5_littles_law_consistency() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1701);
    let mut ok = true;
    let mut worst_z = 0.0f64;

    for scenario_idx in 0..10u32 {
        let case = [SsbCase::D, SsbCase::F, SsbCase::G][rng.gen_range(0..3)];
        let pattern = if rng.gen_bool(0.5) {
            TddPattern::a()
        } else {
            TddPattern::b()
        };
        let filter = if rng.gen_bool(0.5) {
            SlotFilter::DlOnly
        } else {
            SlotFilter::DlAndSpecial
        };
        let n_beam_ue = [1u32, 2, 4][rng.gen_range(0..3)];
        let n_beam_bs = rng.gen_range(4..=32).max(n_beam_ue);
        let tau_ss_ms = [5u32, 10, 20, 40][rng.gen_range(0..4)];
        let speed = rng.gen_range(0.5..8.0);
        let t_proc_ms = rng.gen_range(0.5..2.0);
        let target_gamma_bs = rng.gen_range(0.005..0.09);

        // Solve the density for the targeted BS fraction; the UE side
        // is then at most as large since it has no more beams.
        let mut scenario = Scenario {
            deployment: Deployment::Density { per_m2: 1e-6 },
            speed_mps: speed,
            n_beam_bs,
            n_beam_ue,
            tau_ss_ms,
            t_proc_ms,
            case,
            pattern,
            filter,
            ..Scenario::default()
        };
        let timing = scenario.timing().unwrap();
        let e_t_m_s = model::expected_t_m_ms(&timing, t_proc_ms) / 1e3;
        let beta_target = target_gamma_bs / e_t_m_s;
        let sqrt_lambda = beta_target * std::f64::consts::PI / (f64::from(n_beam_bs) * speed);
        scenario.deployment = Deployment::Density {
            per_m2: sqrt_lambda * sqrt_lambda,
        };

        let analytic = model::evaluate(&scenario).unwrap();
        assert!(analytic.bs.gamma <= 0.1 && analytic.ue.gamma <= 0.1);

        // Horizon sized for roughly ten thousand BS events in total.
        let horizon = 1e4 / beta_target / 16.0;
        let cfg = sim::SimConfig::new(scenario, horizon, 9000 + u64::from(scenario_idx), 16);
        let est = sim::simulate_fractions(&cfg).unwrap();

        for (e, reference) in [
            (&est.gamma_bs, analytic.bs.gamma),
            (&est.gamma_ue, analytic.ue.gamma),
            (&est.gamma_total, analytic.gamma_total),
        ] {
            let z = e.z_score(reference);
            worst_z = worst_z.max(z.abs());
            if z.abs() > 3.0 {
                eprintln!(
                    "scenario {scenario_idx}: {} z = {z:.2} (sim {:.6} vs analytic {reference:.6})",
                    e.metric, e.mean
                );
                ok = false;
            }
        }
    }
    println!("  worst |z| over 30 fraction checks: {worst_z:.2}");
    ok &= started.elapsed().as_secs_f64() < 60.0;
    report("5 (simulated fractions within 3 stderr of Little's law)", ok);
}

#[test]
fn criterion_6_sampled_duration_mean() {
    let grid = SsbGrid::effective(SsbCase::F, TddPattern::a(), SlotFilter::DlOnly).unwrap();
    let mut ok = true;
    // Requests picked so the sweep spans one, two and four burst sets.
    for (n_req, expected_sets) in [(64u32, 1u32), (65, 2), (193, 4)] {
        let timing = sweep::closed_form(&SweepRequest::new(&grid, n_req, 20).unwrap()).unwrap();
        assert_eq!(timing.n_sweep_sets(), expected_sets);
        let expected = model::expected_t_m_ms(&timing, 1.0);

        let mut rng = ChaCha8Rng::seed_from_u64(7_000 + u64::from(n_req));
        let n = 1_000_000u64;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..n {
            let s = sim::sample_t_m(&timing, 1.0, &mut rng);
            sum += s;
            sum_sq += s * s;
        }
        let mean = sum / n as f64;
        let var = (sum_sq - n as f64 * mean * mean) / (n as f64 - 1.0);
        let se = (var / n as f64).sqrt();
        let z = (mean - expected) / se;
        println!("  n_sweep_sets {expected_sets}: sampled {mean:.5} vs expected {expected:.5} (z {z:.2})");
        ok &= z.abs() <= 3.0;
    }
    report("6 (sampled duration mean matches expectation, 3 stderr)", ok);
}

#[test]
fn criterion_7_saturated_misalignment_fraction() {
    let mut ok = true;
    for n_beam_bs in 96..=128u32 {
        let scenario = Scenario {
            speed_mps: 8.0,
            n_beam_bs,
            ..Scenario::default()
        };
        let report_ = model::evaluate(&scenario).unwrap();
        if report_.gamma_total <= 0.95 {
            eprintln!("n_bs {n_beam_bs}: gamma_total {}", report_.gamma_total);
            ok = false;
        }
    }
    report("7 (gamma_total above 0.95 at 8 m/s for 96+ BS beams)", ok);
}

#[test]
fn criterion_8_gain_unimodality_and_peak_shift() {
    let beams: Vec<u32> = (0..=7).map(|k| 1 << k).collect();
    let mut ok = true;
    let mut argmaxes = Vec::new();
    for speed in [1.0, 2.0, 4.0, 8.0] {
        let gains: Vec<f64> = beams
            .iter()
            .map(|&n| {
                model::evaluate(&Scenario {
                    n_beam_bs: n,
                    speed_mps: speed,
                    ..Scenario::default()
                })
                .unwrap()
                .avg_gain
            })
            .collect();
        let peak = gains
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        for i in 1..gains.len() {
            if i <= peak {
                ok &= gains[i] >= gains[i - 1] - 1e-9;
            } else {
                ok &= gains[i] <= gains[i - 1] + 1e-9;
            }
        }
        argmaxes.push(beams[peak]);
        println!("  v={speed}: argmax {} beams", beams[peak]);
    }
    // Faster UEs peak at no more beams than slower ones.
    ok &= argmaxes.last().unwrap() <= argmaxes.first().unwrap();
    report("8 (gain unimodal per speed; peak not right of slow-UE peak)", ok);
}

fn run_cli(args: &[&str]) -> (Vec<u8>, bool) {
    let out = Command::new(env!("CARGO_BIN_EXE_beamsweep"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.stdout, out.status.success())
}

#[test]
fn criterion_9_deterministic_outputs() {
    let invocations: Vec<Vec<&str>> = vec![
        vec!["table1"],
        vec!["sweep-curve", "--case", "F", "--pattern", "a", "--n-req-max", "70"],
        vec!["duration-curve", "--values", "1,2,4,8,16"],
        vec!["fraction-curve", "--values", "16,32,64", "--speed", "8"],
        vec!["gain-curve", "--values", "1,4,16,64", "--db"],
        vec!["grid-dump", "--case", "D", "--pattern", "b", "--filter", "dl+s"],
        vec!["validate", "--n-req-max", "64"],
        vec!["simulate", "--horizon", "400", "--replications", "8", "--seed", "42"],
    ];
    let mut ok = true;
    for args in &invocations {
        let (first, ok_a) = run_cli(args);
        let (second, ok_b) = run_cli(args);
        if !(ok_a && ok_b) {
            eprintln!("non-zero exit for {args:?}");
            ok = false;
        }
        if first != second {
            eprintln!("output differs across runs for {args:?}");
            ok = false;
        }
        if first.is_empty() {
            eprintln!("no output for {args:?}");
            ok = false;
        }
    }
    report("9 (byte-identical CSV across repeated runs)", ok);
}
