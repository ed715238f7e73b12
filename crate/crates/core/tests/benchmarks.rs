mod common;

use common::Setup;
use num_complex::Complex64;
use pass_covert::benchmarks::*;
use pass_covert::channel::{derive_constants, los_coeff, PassGeometry, Vec3};
use pass_covert::num::{dot, norm};
use pass_covert::Scenario;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn multi(setup: &Setup, bob: (f64, f64), willie: (f64, f64)) -> Scenario<f64> {
    let lambda = common::C / setup.f;
    let g = PassGeometry::uniform(setup.h, setup.l, 4, 3, 3.0, lambda / 2.0, lambda / 2.0).unwrap();
    setup.scenario(g, bob, willie)
}

#[test]
fn ula_matches_pointwise_coefficients() {
    let c = derive_constants(28e9, 1.4).unwrap();
    let r = Vec3::ground(20.0, 6.0);
    let h = ula_channel(&r, 4, 3.0, &c).unwrap();
    let q = c.wavelength / 2.0;
    for (i, z) in h.iter().enumerate() {
        let p = Vec3::new((i as f64 + 1.0 - 2.5) * q, 0.0, 3.0);
        assert!((z - los_coeff(&p, &r, &c).unwrap()).norm() < 1e-18);
        assert!((z.norm() - c.eta.sqrt() / p.distance(&r)).abs() < 1e-18);
    }
    let one = ula_channel(&r, 1, 3.0, &c).unwrap();
    assert_eq!(one[0], los_coeff(&Vec3::new(0.0, 0.0, 3.0), &r, &c).unwrap());
}

#[test]
fn mrt_beats_random_directions() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let h: Vec<Complex64> = (0..4)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let w = mrt_weights(&h).unwrap();
    let best = dot(&h, &w).norm();
    assert!((best - norm(&h)).abs() < 1e-12);
    for _ in 0..10_000 {
        let v: Vec<Complex64> = (0..4)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let n = norm(&v);
        let v: Vec<_> = v.iter().map(|z| z / n).collect();
        assert!(dot(&h, &v).norm() <= best + 1e-12);
    }
    let w1 = mrt_weights(&[Complex64::new(0.0, -2.0)]).unwrap();
    assert!((w1[0].norm() - 1.0).abs() < 1e-15);
}

#[test]
fn zf_two_antenna_gram_schmidt() {
    let hb = [Complex64::new(0.4, -1.1), Complex64::new(0.9, 0.3)];
    let hw = [Complex64::new(-0.2, 0.5), Complex64::new(1.3, 0.8)];
    // with two antennas the null space of the row hw is spanned by (hw1, -hw0)
    let v = [hw[1], -hw[0]];
    let proj: Complex64 = v.iter().zip(&hb).map(|(a, b)| a.conj() * b.conj()).sum();
    let want: Vec<Complex64> = v.iter().map(|a| a * proj).collect();
    let n = norm(&want);
    let want: Vec<_> = want.iter().map(|z| z / n).collect();
    let got = zf_weights(&hb, &hw).unwrap();
    for (a, b) in got.iter().zip(&want) {
        assert!((a - b).norm() < 1e-12);
    }
}

#[test]
fn heuristic_layout_centres_array() {
    let c = derive_constants(28e9f64, 1.4).unwrap();
    let q = c.wavelength / 2.0;
    let g = PassGeometry::uniform(3.0, 25.0, 4, 3, 3.0, q, q).unwrap();
    let l = heuristic_pass_layout(&Vec3::ground(20.0, 1.0), &g);
    assert!(l.x_init().iter().all(|&x| (x - (20.0 - q)).abs() < 1e-12));
    let l = heuristic_pass_layout(&Vec3::ground(-5.0, 1.0), &g);
    assert!(l.x_init().iter().all(|&x| x == 0.0));
}

#[test]
fn zf_with_still_warden_uses_full_power() {
    let setup = Setup {
        radius: 0.0,
        ..Setup::default()
    };
    let sc = multi(&setup, (20.0, 6.0), (7.0, -9.0));
    let out = evaluate(BenchmarkKind::MimoZf, &sc).unwrap();
    assert_eq!(out.power, sc.p_max);
}

#[test]
fn zf_equals_mrt_when_warden_channel_is_orthogonal() {
    let hb = vec![
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(2.0, 0.0),
    ];
    let hw = vec![
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 1.0),
        Complex64::new(0.0, 0.0),
    ];
    assert_eq!(zf_weights(&hb, &hw).unwrap(), mrt_weights(&hb).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn zf_nulls_the_warden(
        re in prop::collection::vec(-1.0f64..1.0, 8), im in prop::collection::vec(-1.0f64..1.0, 8),
    ) {
        let hb: Vec<Complex64> = (0..4).map(|i| Complex64::new(re[i], im[i])).collect();
        let hw: Vec<Complex64> = (4..8).map(|i| Complex64::new(re[i], im[i])).collect();
        prop_assume!(norm(&hw) > 1e-3 && norm(&hb) > 1e-3);
        if let Ok(w) = zf_weights(&hb, &hw) {
            prop_assert!(dot(&hw, &w).norm() <= 1e-10 * norm(&hw));
            prop_assert!((norm(&w) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn every_benchmark_is_covert(
        bx in 0.0f64..25.0, by in -7.5f64..7.5, wx in 0.0f64..25.0, wy in -7.5f64..7.5, r in 0.0f64..2.0,
    ) {
        let setup = Setup { radius: r, ..Setup::default() };
        let sc = multi(&setup, (bx, by), (wx, wy));
        for kind in BenchmarkKind::ALL {
            let out = match evaluate(kind, &sc) {
                Ok(o) => o,
                Err(pass_covert::Error::NullSpaceEmpty(_)) => continue,
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            };
            prop_assert!(out.rate >= 0.0 && out.power <= sc.p_max);
            for s in sc.samples() {
                let row = match &out.layout {
                    Some(l) => pass_covert::effective_channel(l, &s, &sc.geometry, &sc.constants),
                    None => ula_channel(&s, 4, sc.geometry.height, &sc.constants).unwrap(),
                };
                prop_assert!(out.power * dot(&row, out.beam.unit()).norm_sqr() <= sc.budget() * (1.0 + 1e-9));
            }
        }
    }
}
