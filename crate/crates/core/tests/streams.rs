use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use polyregret::domains::vertices;
use polyregret::harness::export_costs;
use polyregret::streams::{empirical_bounds, linear_range, load_costs, next_cost, Noise, StreamSpec};
use polyregret::vector::{dist, dot, norm, sub};
use polyregret::Domain;

fn draw(stream: &StreamSpec, domain: &Domain, n: usize) -> Vec<Vec<f64>> {
    (1..=n).map(|k| next_cost(stream, domain, k, None).unwrap()).collect()
}

#[test]
fn seeded_streams_are_reproducible() {
    let domain = Domain::simplex(4);
    let s = StreamSpec::iid(vec![0.1, 0.2, 0.3, 0.4], Noise::UniformBall { radius: 0.5 }, 17);
    assert_eq!(draw(&s, &domain, 50), draw(&s, &domain, 50));
    assert_ne!(draw(&s, &domain, 50), draw(&s.with_seed(18), &domain, 50));
    let late = next_cost(&s, &domain, 40, None).unwrap();
    assert_eq!(late, draw(&s, &domain, 40)[39]);
}

#[test]
fn declared_bounds_dominate_measured_ones() {
    let domain = Domain::cube(5);
    let mean = vec![0.3, -0.2, 0.1, 0.0, 0.4];
    for noise in [
        Noise::None,
        Noise::UniformBall { radius: 0.7 },
        Noise::RademacherScaled { radius: 0.7 },
    ] {
        let s = StreamSpec::iid(mean.clone(), noise, 2);
        let costs = draw(&s, &domain, 2000);
        let declared = s.declared_bounds();
        let measured = empirical_bounds(&costs, Some(&mean), &domain).unwrap();
        assert!(measured.l.unwrap() <= declared.l.unwrap());
        assert!(measured.r.unwrap() <= declared.r.unwrap());
        assert!(!measured.mean_estimated);
    }
}

#[test]
fn rademacher_noise_has_exact_norm() {
    let domain = Domain::ball(6);
    let mean = vec![0.0; 6];
    let s = StreamSpec::iid(mean.clone(), Noise::RademacherScaled { radius: 0.4 }, 0);
    for a in draw(&s, &domain, 100) {
        assert!((norm(&a) - 0.4).abs() < 1e-9);
        assert!(norm(&a) <= 0.4);
    }
}

#[test]
fn uniform_ball_noise_fills_the_ball() {
    let domain = Domain::ball(2);
    let s = StreamSpec::iid(vec![0.0, 0.0], Noise::UniformBall { radius: 1.0 }, 3);
    let costs = draw(&s, &domain, 20_000);
    let inner = costs.iter().filter(|a| norm(a) <= 0.5).count() as f64 / costs.len() as f64;
    assert!((inner - 0.25).abs() < 0.02, "{inner}");
    let m: Vec<f64> = (0..2).map(|j| costs.iter().map(|a| a[j]).sum::<f64>() / 20_000.0).collect();
    assert!(norm(&m) < 0.02);
}

#[test]
fn alternating_adversary_flips_sign() {
    let domain = Domain::cube(2);
    let s = StreamSpec::alternating(vec![0.6, -0.8]);
    let c = draw(&s, &domain, 4);
    assert_eq!(c[0], vec![-0.6, 0.8]);
    assert_eq!(c[1], vec![0.6, -0.8]);
    assert_eq!(c[2], c[0]);
}

#[test]
fn best_response_pushes_away_from_the_centroid() {
    let domain = Domain::simplex(3);
    let s = StreamSpec::best_response(2.0);
    let x = [0.6, 0.3, 0.1];
    let a = next_cost(&s, &domain, 1, Some(&x)).unwrap();
    assert!(norm(&a) <= 2.0 && (norm(&a) - 2.0).abs() < 1e-12);
    assert!(dot(&a, &sub(&x, &domain.centroid())) > 0.0);
}

#[test]
fn recorded_costs_replay_and_run_out() {
    let domain = Domain::simplex(2);
    let s = StreamSpec::Recorded {
        costs: vec![vec![1.0, 2.0], vec![3.0, 4.0]],
    };
    assert_eq!(next_cost(&s, &domain, 2, None).unwrap(), vec![3.0, 4.0]);
    assert!(next_cost(&s, &domain, 3, None).is_err());
}

#[test]
fn cost_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let costs = vec![vec![0.1, -2.5, 3.0], vec![1e-17, 4.0, -0.0]];
    let csv = dir.path().join("c.csv");
    export_costs(&costs, &csv).unwrap();
    assert_eq!(load_costs(&csv).unwrap(), costs);
    let json = dir.path().join("c.json");
    std::fs::write(&json, serde_json::to_string(&costs).unwrap()).unwrap();
    assert_eq!(load_costs(&json).unwrap(), costs);
    std::fs::write(&csv, "a,b,c\n1,2,3\n").unwrap();
    assert_eq!(load_costs(&csv).unwrap(), vec![vec![1.0, 2.0, 3.0]]);
    let err = load_costs(dir.path().join("missing.csv")).unwrap_err();
    assert_eq!(err.exit_code(), 4);
}

#[test]
fn mean_dimension_is_checked() {
    let s = StreamSpec::iid(vec![1.0, 2.0], Noise::None, 0);
    assert_eq!(s.validate(&Domain::simplex(3)).unwrap_err().exit_code(), 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// The spread of a linear cost is the largest vertex-pair difference and
    /// bounds the difference at any pair of hull points.
    #[test]
    fn linear_range_matches_vertex_pairs(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for domain in [Domain::permutahedron(4), Domain::birkhoff(3), Domain::signed_permutahedron(3)] {
            let a: Vec<f64> = (0..domain.dim()).map(|_| rng.random_range(-1.0..1.0)).collect();
            let verts = vertices(&domain, 10_000).unwrap();
            let values: Vec<f64> = verts.iter().map(|v| dot(&a, v)).collect();
            let pairs = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
                - values.iter().cloned().fold(f64::INFINITY, f64::min);
            let range = linear_range(&domain, &a).unwrap();
            prop_assert!((range - pairs).abs() <= 1e-9 * (1.0 + pairs));
            for _ in 0..20 {
                let mix = |rng: &mut ChaCha8Rng| {
                    let w: Vec<f64> = verts.iter().map(|_| rng.random::<f64>()).collect();
                    let t: f64 = w.iter().sum();
                    let mut p = vec![0.0; domain.dim()];
                    for (wi, v) in w.iter().zip(&verts) {
                        for (pi, vi) in p.iter_mut().zip(v) {
                            *pi += wi / t * vi;
                        }
                    }
                    p
                };
                let (x, y) = (mix(&mut rng), mix(&mut rng));
                prop_assert!(dot(&a, &sub(&x, &y)).abs() <= range + 1e-9);
            }
        }
    }

    #[test]
    fn noise_stays_within_radius(seed in 0u64..10_000, r in 0.0f64..3.0) {
        let domain = Domain::cube(4);
        let mean = vec![0.5, -0.5, 0.25, 0.0];
        for noise in [Noise::UniformBall { radius: r }, Noise::RademacherScaled { radius: r }] {
            let s = StreamSpec::iid(mean.clone(), noise, seed);
            for a in draw(&s, &domain, 20) {
                prop_assert!(dist(&a, &mean) <= r);
            }
        }
    }
}
