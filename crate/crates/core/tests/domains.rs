use polyregret::domains::{
    affine_decomposition, contains, linear_minimizer, project, project_birkhoff,
    project_permutahedron, project_simplex, project_vpolytope_minnorm, vertices, Domain,
    BIRKHOFF_MAX_ITERS, MINNORM_TOL,
};
use polyregret::vector::{add, dist, dot, max_abs_diff, sub};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn gaussian(rng: &mut ChaCha8Rng, d: usize, scale: f64) -> Vec<f64> {
    (0..d)
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut *rng);
            scale * z
        })
        .collect::<Vec<f64>>()
}

fn polytopes() -> Vec<Domain> {
    vec![
        Domain::simplex(4),
        Domain::cube(3),
        Domain::Box {
            dim: 2,
            lower: -0.5,
            upper: 2.0,
        },
        Domain::birkhoff(3),
        Domain::permutahedron(4),
        Domain::signed_permutahedron(3),
        Domain::VPolytope {
            vertices: vec![vec![0.0, 0.0, 1.0], vec![1.0, 0.0, 1.0], vec![0.0, 2.0, 1.0]],
        },
    ]
}

#[test]
fn birkhoff_matches_minnorm_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let verts = vertices(&Domain::birkhoff(3), 100).unwrap();
    for _ in 0..100 {
        let y = gaussian(&mut rng, 9, 1.0);
        let fast = project_birkhoff(3, &y, 1e-9, BIRKHOFF_MAX_ITERS).unwrap();
        let oracle = project_vpolytope_minnorm(&verts, &y, MINNORM_TOL).unwrap();
        assert!(max_abs_diff(&fast.point, &oracle.point) < 1e-6);
    }
}

#[test]
fn signed_permutahedron_matches_minnorm_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let verts = vertices(&Domain::signed_permutahedron(3), 100).unwrap();
    assert_eq!(verts.len(), 48);
    for _ in 0..100 {
        let y = gaussian(&mut rng, 3, 3.0);
        let fast = project_permutahedron(3, &y, true).unwrap();
        let oracle = project_vpolytope_minnorm(&verts, &y, MINNORM_TOL).unwrap();
        assert!(max_abs_diff(&fast.point, &oracle.point) < 1e-6);
    }
}

#[test]
fn minnorm_matches_simplex_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let verts = vertices(&Domain::simplex(4), 10).unwrap();
    for _ in 0..100 {
        let y = gaussian(&mut rng, 4, 1.0);
        let oracle = project_vpolytope_minnorm(&verts, &y, MINNORM_TOL).unwrap();
        assert!(max_abs_diff(&project_simplex(&y), &oracle.point) < 1e-8);
    }
}

#[test]
fn variational_inequality_against_vertices() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for dom in polytopes() {
        let verts = vertices(&dom, 10_000).unwrap();
        for _ in 0..50 {
            let y = gaussian(&mut rng, dom.dim(), 3.0);
            let p = project(&dom, &y).unwrap().point;
            let r = sub(&y, &p);
            for z in &verts {
                assert!(dot(&r, &sub(z, &p)) <= 1e-7, "{}", dom.name());
            }
        }
    }
}

#[test]
fn variational_inequality_on_curved_boundaries() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let ball: Vec<Vec<f64>> = (0..1000)
        .map(|_| {
            let g = gaussian(&mut rng, 3, 1.0);
            let n = polyregret::vector::norm(&g);
            g.iter().map(|v| v / n).collect()
        })
        .collect();
    let alpha = 4.0;
    let curve: Vec<Vec<f64>> = (0..1000)
        .map(|k| {
            let x = -1.0 + 2.0 * k as f64 / 999.0;
            vec![x, f64::abs(x).powf(alpha)]
        })
        .collect();
    for (dom, boundary) in [(Domain::ball(3), &ball), (Domain::curved_epigraph(alpha), &curve)] {
        for _ in 0..50 {
            let y = gaussian(&mut rng, dom.dim(), 2.0);
            let p = project(&dom, &y).unwrap().point;
            let r = sub(&y, &p);
            for z in boundary.iter() {
                assert!(dot(&r, &sub(z, &p)) <= 1e-7, "{} y={y:?}", dom.name());
            }
        }
    }
}

#[test]
fn factorization_through_hull_subspace() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for dom in polytopes() {
        let hull = affine_decomposition(&dom).unwrap();
        if hull.dim() == dom.dim() {
            continue;
        }
        for _ in 0..30 {
            let p = gaussian(&mut rng, dom.dim(), 3.0);
            // P_U(p) + t keeps only the in-hull component of p
            let rel = sub(&p, &hull.translation);
            let q = add(&hull.project_direction(&rel), &hull.translation);
            let a = project(&dom, &p).unwrap().point;
            let b = project(&dom, &q).unwrap().point;
            assert!(max_abs_diff(&a, &b) < 1e-8, "{}", dom.name());
        }
    }
}

#[test]
fn lmo_attains_vertex_minimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for dom in polytopes() {
        let verts = vertices(&dom, 10_000).unwrap();
        for _ in 0..30 {
            let a = gaussian(&mut rng, dom.dim(), 1.0);
            let x = linear_minimizer(&dom, &a).unwrap();
            let best = verts.iter().map(|v| dot(v, &a)).fold(f64::INFINITY, f64::min);
            assert!((dot(&x, &a) - best).abs() <= 1e-12 * (1.0 + best.abs()));
        }
    }
}

#[test]
fn projections_land_in_domain() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut doms = polytopes();
    doms.push(Domain::ball(4));
    doms.push(Domain::curved_epigraph(2.5));
    for dom in doms {
        for _ in 0..30 {
            let y = gaussian(&mut rng, dom.dim(), 4.0);
            let p = project(&dom, &y).unwrap().point;
            assert!(contains(&dom, &p, 1e-8).unwrap(), "{}", dom.name());
        }
    }
}

fn domain_strategy() -> impl Strategy<Value = Domain> {
    prop_oneof![
        (1usize..6).prop_map(Domain::ball),
        (1usize..6).prop_map(Domain::simplex),
        (1usize..6).prop_map(Domain::cube),
        (2usize..4).prop_map(Domain::birkhoff),
        (1usize..6).prop_map(Domain::permutahedron),
        (1usize..5).prop_map(Domain::signed_permutahedron),
        (1.0f64..5.0).prop_map(Domain::curved_epigraph),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn idempotent_and_nonexpansive(
        dom in domain_strategy(),
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let y1 = gaussian(&mut rng, dom.dim(), 3.0);
        let y2 = gaussian(&mut rng, dom.dim(), 3.0);
        let p1 = project(&dom, &y1).unwrap().point;
        let p2 = project(&dom, &y2).unwrap().point;
        let pp = project(&dom, &p1).unwrap().point;
        prop_assert!(max_abs_diff(&p1, &pp) <= 1e-9, "{} idempotence", dom.name());
        prop_assert!(dist(&p1, &p2) <= dist(&y1, &y2) + 1e-9, "{} nonexpansive", dom.name());
    }
}
