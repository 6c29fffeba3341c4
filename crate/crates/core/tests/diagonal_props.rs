mod common;

use common::{all_fixtures, sandwich_quadruple};
use kpw_core::diagonal::{self, CylinderFunction};
use kpw_core::sampling::Sampler;
use kpw_core::{Degree, KpAlgebra, RingSpec};

#[test]
fn diagonal_is_commutative() {
    for (name, g) in all_fixtures() {
        let alg = KpAlgebra::new(&g, RingSpec::Integers);
        let mut s = Sampler::new(&g, Degree::diagonal(g.rank(), 2), 21);
        for _ in 0..200 {
            let (a, b) = (s.diagonal_element(&alg, 3), s.diagonal_element(&alg, 3));
            assert!(alg.commute(&a, &b).unwrap(), "{name}");
        }
    }
}

#[test]
fn sandwich_identity() {
    let mut zero_cases = 0;
    for g in [kpw_core::fixtures::g2(), kpw_core::fixtures::g3()] {
        let alg = KpAlgebra::new(&g, RingSpec::Integers);
        let mut s = Sampler::new(&g, Degree::diagonal(g.rank(), 2), 22);
        for _ in 0..100 {
            let (alpha, beta, gamma, eta) = sandwich_quadruple(&g, &mut s);
            let ag = g.compose(&alpha, &gamma).unwrap();
            let be = g.compose(&beta, &eta).unwrap();
            let lhs = alg
                .product([
                    &alg.projection(&ag),
                    &alg.term(&alpha, &beta).unwrap(),
                    &alg.projection(&be),
                ])
                .unwrap();
            let general = alg
                .product([&alg.s(&ag), &alg.t(&gamma), &alg.s(&eta), &alg.t(&be)])
                .unwrap();
            assert!(alg.equals(&lhs, &general).unwrap());
            if gamma == eta {
                let bg = g.compose(&beta, &gamma).unwrap();
                assert!(alg.equals(&lhs, &alg.term(&ag, &bg).unwrap()).unwrap());
            } else {
                zero_cases += 1;
                assert!(alg.is_zero(&lhs).unwrap());
            }
        }
    }
    assert!(zero_cases > 0);
}

#[test]
fn pi_is_an_injective_homomorphism() {
    for (name, g) in all_fixtures() {
        let alg = KpAlgebra::new(&g, RingSpec::Integers);
        let mut s = Sampler::new(&g, Degree::diagonal(g.rank(), 2), 23);
        for _ in 0..100 {
            let (a, b) = (s.diagonal_element(&alg, 3), s.diagonal_element(&alg, 3));
            let (pa, pb) = (
                diagonal::pi(&alg, &a).unwrap(),
                diagonal::pi(&alg, &b).unwrap(),
            );
            let pab = diagonal::pi(&alg, &alg.mul(&a, &b).unwrap()).unwrap();
            assert!(pab.equals(&g, &pa.mul(&g, &pb).unwrap()).unwrap(), "{name}");
            assert_eq!(pa.is_zero(), alg.is_zero(&a).unwrap(), "{name}");
            let back = diagonal::to_element(&alg, &pa).unwrap();
            assert!(alg.equals(&back, &a).unwrap(), "{name}");
            let diff = alg
                .sub(
                    &a,
                    &alg.normal_form(&a, &(&alg.beta_join(&a) + &Degree::ones(g.rank())))
                        .unwrap(),
                )
                .unwrap();
            assert!(diagonal::pi(&alg, &diff).unwrap().is_zero());
        }
    }
}

#[test]
fn cylinder_functions_evaluate_pointwise() {
    let g = kpw_core::fixtures::g2();
    let ring = RingSpec::Integers;
    let e = g.parse_path("e").unwrap();
    let ef = g.parse_path("e.f").unwrap();
    let f = CylinderFunction::indicator(&ring, &e)
        .add(
            &g,
            &CylinderFunction::indicator(&ring, &ef).scale(&ring.from_int(2)),
        )
        .unwrap();
    let x = kpw_core::infpath::EvPeriodicPath::parse(&g, "e;f").unwrap();
    let y = kpw_core::infpath::EvPeriodicPath::parse(&g, "e;e").unwrap();
    assert_eq!(f.evaluate(&g, &x).unwrap(), ring.from_int(3));
    assert_eq!(f.evaluate(&g, &y).unwrap(), ring.from_int(1));
}

#[test]
fn cancellation_of_nonzero_scalars() {
    for (name, g) in all_fixtures() {
        for ring in [RingSpec::Integers, RingSpec::integers_mod(4).unwrap()] {
            let alg = KpAlgebra::new(&g, ring.clone());
            let paths = g.paths_up_to(&Degree::diagonal(g.rank(), 3));
            let paths: Vec<_> = paths
                .into_iter()
                .filter(|p| p.degree().total() <= 3)
                .collect();
            for r in ring.sample_nonzero() {
                for mu in &paths {
                    for nu in &paths {
                        let a = alg.scale(&alg.projection(mu), &r).unwrap();
                        let b = alg.scale(&alg.projection(nu), &r).unwrap();
                        if alg.equals(&a, &b).unwrap() {
                            assert!(
                                alg.equals(&alg.projection(mu), &alg.projection(nu))
                                    .unwrap(),
                                "{name}"
                            );
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn membership_in_the_diagonal() {
    let g = kpw_core::fixtures::g2();
    let alg = KpAlgebra::new(&g, RingSpec::Integers);
    let e = g.parse_path("e").unwrap();
    let f = g.parse_path("f").unwrap();
    assert!(diagonal::is_in_diagonal(&alg, &alg.projection(&e)).unwrap());
    assert!(!diagonal::is_in_diagonal(&alg, &alg.term(&e, &f).unwrap()).unwrap());
    assert!(diagonal::pi(&alg, &alg.s(&e)).is_err());
    assert!(diagonal::same_cylinder(
        &g,
        &g.vertex_path(g.vertex("v").unwrap()),
        &g.vertex_path(g.vertex("v").unwrap())
    )
    .unwrap());
}
