mod common;

use std::f64::consts::PI;

use common::*;
use ndarray::Array2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ris_ce::channel::{doppler_phase, gen_links, gen_single_path, AngleModel, SinglePathChannel};
use ris_ce::config::reference_preset;
use ris_ce::estimators::{
    bm1_estimate, bm2_estimate, dsa_adjust, measure_delta_beta, per_symbol_cfr, proposed_estimate,
    select_paths, single_path_estimate, single_path_patterns, Scheme,
};
use ris_ce::signal::{dft_reflection_pattern, receive_superimposed, zadoff_chu, RxSymbol};
use ris_ce::Complex64;

fn wrap(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    if y == -PI {
        PI
    } else {
        y
    }
}

#[test]
fn bm1_inverts_forward_training_product() {
    let mut cfg = reference_preset();
    cfg.velocity_mps = 0.0;
    let m = cfg.n_subsurfaces;
    let links = gen_links(
        &cfg,
        AngleModel::SharedPerTap,
        &mut ChaCha8Rng::seed_from_u64(3),
    );
    let truth = stacked_truth(&links);
    let h_hat: Array2<Complex64> = truth.dot(&naive_theta(m));

    let est = bm1_estimate(h_hat.view(), &dft_reflection_pattern(m)).unwrap();
    assert_eq!(est.scheme, Scheme::Bm1);
    assert_eq!(est.symbols_used, m + 1);
    let nmse = nmse_naive(&stacked_estimate(&est.h_ug_hat, &est.h_urg_hat), &truth);
    assert!(nmse <= 1e-18, "nmse {nmse:e}");
}

#[test]
fn bm1_static_frame_recovers_every_link() {
    let mut cfg = reference_preset();
    cfg.velocity_mps = 0.0;
    let links = gen_links(
        &cfg,
        AngleModel::SharedPerTap,
        &mut ChaCha8Rng::seed_from_u64(4),
    );
    let est = noiseless_frame(&links, &cfg);
    let est = bm1_estimate(
        est.training_columns(),
        &dft_reflection_pattern(cfg.n_subsurfaces),
    )
    .unwrap();
    let truth = links.direct_cfr();
    assert!(rel_err(&est.h_ug_hat.values, &truth.values) <= 1e-10);
    for j in 0..cfg.n_subsurfaces {
        let e: Vec<_> = est.h_urg_hat.column(j).to_vec();
        let t: Vec<_> = links.cascade_cfr().column(j).to_vec();
        assert!(rel_err(&e, &t) <= 1e-10, "sub-surface {j}");
    }
}

#[test]
fn bm1_degrades_under_doppler() {
    let cfg = reference_preset();
    let links = gen_links(
        &cfg,
        AngleModel::SharedPerTap,
        &mut ChaCha8Rng::seed_from_u64(5),
    );
    let frame = noiseless_frame(&links, &cfg);
    let est = bm1_estimate(
        frame.training_columns(),
        &dft_reflection_pattern(cfg.n_subsurfaces),
    )
    .unwrap();
    let t1 = links.evolved(
        cfg.velocity_mps,
        cfg.ofdm.symbol_duration_s,
        cfg.geometry.wavelength_m,
    );
    let nmse = nmse_naive(
        &stacked_estimate(&est.h_ug_hat, &est.h_urg_hat),
        &stacked_truth(&t1),
    );
    assert!(nmse > 1e-4, "nmse {nmse:e}");
}

#[test]
fn dsa_removes_doppler_from_separable_paths() {
    let cfg = reference_preset();
    let m = cfg.n_subsurfaces;
    let theta = dft_reflection_pattern(m);
    let dt = cfg.ofdm.symbol_duration_s;
    for seed in 0..4 {
        let links = separable_single_tap_links(cfg.ofdm.n_subcarriers, m, seed);
        let frame = noiseless_frame(&links, &cfg);
        for q in [1, 2, m / 2, m + 1] {
            let est = proposed_estimate(&frame, cfg.threshold, q, &theta).unwrap();
            assert_eq!(est.reference_symbol, q);
            let tq = links.evolved(cfg.velocity_mps, q as f64 * dt, cfg.geometry.wavelength_m);
            let nmse = nmse_naive(
                &stacked_estimate(&est.h_ug_hat, &est.h_urg_hat),
                &stacked_truth(&tq),
            );
            assert!(nmse <= 1e-12, "seed {seed} q {q}: {nmse:e}");
        }
    }
}

#[test]
fn dsa_exact_for_common_angle_single_taps() {
    let cfg = reference_preset();
    let m = cfg.n_subsurfaces;
    let n = cfg.ofdm.n_subcarriers;
    let angle = 0.7;
    let ug = single_tap(1, 0, c(1.0, 0.3), angle);
    let ur = (0..m)
        .map(|j| single_tap(1, 0, Complex64::from_polar(0.8, j as f64), angle))
        .collect();
    let rg = (0..m)
        .map(|j| single_tap(1, 0, Complex64::from_polar(0.5, -0.3 * j as f64), 0.0))
        .collect();
    let links = ris_ce::channel::LinkSet::new(n, ug, ur, rg).unwrap();
    let frame = noiseless_frame(&links, &cfg);
    let est = proposed_estimate(&frame, cfg.threshold, 1, &dft_reflection_pattern(m)).unwrap();
    let t1 = links.evolved(
        cfg.velocity_mps,
        cfg.ofdm.symbol_duration_s,
        cfg.geometry.wavelength_m,
    );
    let truth = stacked_truth(&t1);
    let err = rel_err(
        stacked_estimate(&est.h_ug_hat, &est.h_urg_hat)
            .as_slice()
            .unwrap(),
        truth.as_slice().unwrap(),
    );
    assert!(err <= 1e-8, "{err:e}");
}

#[test]
fn delta_beta_matches_doppler_step() {
    let cfg = reference_preset();
    let m = cfg.n_subsurfaces;
    let links = separable_single_tap_links(cfg.ofdm.n_subcarriers, m, 11);
    let frame = noiseless_frame(&links, &cfg);
    let mut g0 = frame.symbol(0).unwrap().to_vec();
    let mut g1 = frame.symbol(1).unwrap().to_vec();
    ris_ce::channel::idft_in_place(&mut g0);
    ris_ce::channel::idft_in_place(&mut g1);
    let pset = measure_delta_beta(&g0, &g1, &select_paths(&g0, cfg.threshold).unwrap()).unwrap();
    assert_eq!(pset.indices, (0..=m).collect::<Vec<_>>());

    let dt = cfg.ofdm.symbol_duration_s;
    let lambda = cfg.geometry.wavelength_m;
    let expect = |theta: f64| wrap(doppler_phase(cfg.velocity_mps, dt, theta, lambda));
    assert!((pset.delta_beta[&0] - expect(links.h_ug().doppler_angles[0])).abs() < 1e-9);
    for j in 0..m {
        let got = pset.delta_beta[&(j + 1)];
        let want = expect(links.h_ur()[j].doppler_angles[j + 1]);
        assert!((got - want).abs() < 1e-9, "tap {}: {got} vs {want}", j + 1);
    }
}

#[test]
fn dsa_is_bm1_when_static() {
    let mut cfg = reference_preset();
    cfg.velocity_mps = 0.0;
    let m = cfg.n_subsurfaces;
    let theta = dft_reflection_pattern(m);
    let links = gen_links(
        &cfg,
        AngleModel::SharedPerTap,
        &mut ChaCha8Rng::seed_from_u64(8),
    );
    let frame = noiseless_frame(&links, &cfg);
    let bm1 = bm1_estimate(frame.training_columns(), &theta).unwrap();
    for est in [
        proposed_estimate(&frame, cfg.threshold, 1, &theta).unwrap(),
        bm2_estimate(&frame, 1, &theta).unwrap(),
    ] {
        let a = stacked_estimate(&est.h_ug_hat, &est.h_urg_hat);
        let b = stacked_estimate(&bm1.h_ug_hat, &bm1.h_urg_hat);
        assert!(rel_err(a.as_slice().unwrap(), b.as_slice().unwrap()) <= 1e-10);
    }
}

#[test]
fn bm2_tracks_only_the_strongest_tap() {
    let cfg = reference_preset();
    let m = cfg.n_subsurfaces;
    let theta = dft_reflection_pattern(m);
    let links = separable_single_tap_links(cfg.ofdm.n_subcarriers, m, 2);
    let frame = noiseless_frame(&links, &cfg);
    let bm2 = bm2_estimate(&frame, 1, &theta).unwrap();
    assert_eq!(bm2.scheme, Scheme::Bm2);
    assert_eq!(bm2.symbols_used, m + 2);

    let mut g0 = frame.symbol(0).unwrap().to_vec();
    ris_ce::channel::idft_in_place(&mut g0);
    let strongest = select_paths(&g0, 1.0).unwrap();
    assert_eq!(strongest.indices.len(), 1);
    let mut g1 = frame.symbol(1).unwrap().to_vec();
    ris_ce::channel::idft_in_place(&mut g1);
    let pset = measure_delta_beta(&g0, &g1, &strongest).unwrap();
    let manual = dsa_adjust(&frame, &pset, 1, &theta).unwrap();
    assert_eq!(manual.h_urg_hat, bm2.h_urg_hat);
}

#[test]
fn ls_error_variance_is_noise_variance() {
    let n = 100_000;
    let pilot = zadoff_chu(n, 7).unwrap();
    let h: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(1.0, k as f64 * 0.01))
        .collect();
    let noise_var = 0.25;
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let rx = RxSymbol {
        y: receive_superimposed(&h, &pilot, noise_var, &mut rng),
        symbol_index: 0,
        pattern: vec![],
    };
    let est = per_symbol_cfr(&rx, &pilot);
    let var = est
        .values
        .iter()
        .zip(&h)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        / n as f64;
    assert!((var / noise_var - 1.0).abs() < 0.02, "{var}");
}

#[test]
fn single_path_exact_without_noise() {
    for m in [16, 64, 144] {
        let cfg = reference_preset().with_subsurfaces(m).unwrap();
        let m_side = cfg.m_side().unwrap();
        for v in [0.0, 10.0] {
            for seed in 0..3 {
                let (ch, cascade) =
                    gen_single_path(&cfg, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
                assert!(rel_err(&cascade, &ch.cascade_from_arrays()) <= 1e-12);
                let (rx, pilot) = singlepath_pilots(&ch, &cfg, v, single_path_patterns(m_side));
                let est = single_path_estimate(&rx, &pilot, m_side).unwrap();
                assert_eq!(est.symbols_used, 4);
                let truth = ch.cascade_at(v, cfg.ofdm.symbol_duration_s);
                let err = rel_err(&est.cascade_hat, &truth);
                assert!(err <= 1e-9, "M {m} v {v}: {err:e}");
                let dz = wrap(doppler_phase(
                    v,
                    cfg.ofdm.symbol_duration_s,
                    ch.doppler_angle,
                    ch.wavelength,
                ));
                assert!((est.delta_zeta - dz).abs() < 1e-9);
                assert_eq!(est.cascade_hat[0], est.gain_ref);
            }
        }
    }
}

#[test]
fn single_path_static_recovers_a_and_b() {
    let cfg = reference_preset();
    let (ch, _) = gen_single_path(&cfg, &mut ChaCha8Rng::seed_from_u64(30)).unwrap();
    let (rx, pilot) = singlepath_pilots(&ch, &cfg, 0.0, single_path_patterns(4));
    let est = single_path_estimate(&rx, &pilot, 4).unwrap();
    assert_eq!(est.delta_zeta, 0.0);
    assert!((est.a_hat - ch.a()).norm() < 1e-12);
    assert!((est.b_hat - ch.b()).norm() < 1e-12);
}

#[test]
fn single_path_unit_cascade() {
    let cfg = reference_preset();
    let ch = SinglePathChannel {
        alpha0: c(1.0, 0.0),
        rho0: c(1.0, 0.0),
        aoa_az: 0.4,
        aoa_el: 1.1,
        aod_az: 0.4,
        aod_el: 1.1,
        d_spacing: cfg.geometry.wavelength_m / 4.0,
        wavelength: cfg.geometry.wavelength_m,
        m_side: 4,
        path_counts: (1, 1),
        doppler_angle: 0.0,
    };
    let (rx, pilot) = singlepath_pilots(&ch, &cfg, 0.0, single_path_patterns(4));
    let est = single_path_estimate(&rx, &pilot, 4).unwrap();
    for v in &est.cascade_hat {
        assert!((v - c(1.0, 0.0)).norm() < 1e-12);
    }
}
