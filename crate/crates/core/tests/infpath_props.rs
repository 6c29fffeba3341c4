mod common;

use common::{all_fixtures, deg};
use kpw_core::infpath::{self, EvPeriodicPath};
use kpw_core::{Degree, KGraph, Path};
use proptest::prelude::*;

fn cycles(g: &KGraph) -> Vec<Path> {
    g.paths_up_to(&Degree::diagonal(g.rank(), 2))
        .into_iter()
        .filter(|p| p.range() == p.source() && p.degree().strictly_positive())
        .collect()
}

fn pick(g: &KGraph, i: usize, j: usize) -> EvPeriodicPath {
    let cs = cycles(g);
    let c = cs[i % cs.len()].clone();
    let prefixes: Vec<Path> = g
        .paths_up_to(&Degree::diagonal(g.rank(), 2))
        .into_iter()
        .filter(|p| p.source() == c.range())
        .collect();
    let p = prefixes[j % prefixes.len()].clone();
    EvPeriodicPath::new(g, p, c).unwrap()
}

fn graph(i: usize) -> KGraph {
    all_fixtures().swap_remove(i % 4).1
}

fn small_degree(k: usize, raw: &[u32]) -> Degree {
    Degree(raw.iter().take(k).map(|c| c % 4).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn shifts_compose(gi in 0usize..4, i in 0usize..64, j in 0usize..64, p in prop::array::uniform2(0u32..4), q in prop::array::uniform2(0u32..4)) {
        let g = graph(gi);
        let x = pick(&g, i, j);
        let p = small_degree(g.rank(), &p);
        let q = small_degree(g.rank(), &q);
        let a = x.shift(&g, &p).unwrap().shift(&g, &q).unwrap();
        let b = x.shift(&g, &(&p + &q)).unwrap();
        prop_assert!(a.same_as(&g, &b).unwrap());
    }

    #[test]
    fn segment_and_shift_reconstruct(gi in 0usize..4, i in 0usize..64, j in 0usize..64, n in prop::array::uniform2(0u32..4)) {
        let g = graph(gi);
        let x = pick(&g, i, j);
        let n = small_degree(g.rank(), &n);
        let head = x.segment(&g, &Degree::zero(g.rank()), &n).unwrap();
        let y = x.shift(&g, &n).unwrap().prepend(&g, &head).unwrap();
        prop_assert!(y.same_as(&g, &x).unwrap());
        let twice = n.scale(2);
        prop_assert_eq!(y.initial(&g, &twice).unwrap(), x.initial(&g, &twice).unwrap());
    }

    #[test]
    fn display_parses_back(gi in 0usize..4, i in 0usize..64, j in 0usize..64) {
        let g = graph(gi);
        let x = pick(&g, i, j);
        let y = EvPeriodicPath::parse(&g, &x.display(&g).to_string()).unwrap();
        prop_assert_eq!(&y, &x);
        prop_assert!(x.is_periodic(&g).unwrap());
    }
}

#[test]
fn equality_is_an_equivalence_relation() {
    for (name, g) in all_fixtures() {
        let xs: Vec<EvPeriodicPath> = (0..50).map(|i| pick(&g, i * 7 + 3, i * 13 + 1)).collect();
        for a in &xs {
            assert!(a.same_as(&g, a).unwrap(), "{name}");
            for b in &xs {
                let ab = a.same_as(&g, b).unwrap();
                assert_eq!(ab, b.same_as(&g, a).unwrap(), "{name}");
                if !ab {
                    continue;
                }
                for c in &xs {
                    if b.same_as(&g, c).unwrap() {
                        assert!(a.same_as(&g, c).unwrap(), "{name}");
                    }
                }
            }
        }
    }
}

#[test]
fn equality_agrees_with_long_initial_segments() {
    for (name, g) in all_fixtures() {
        let xs: Vec<EvPeriodicPath> = (0..30).map(|i| pick(&g, i * 5 + 1, i * 11 + 2)).collect();
        let far = Degree::diagonal(g.rank(), 12);
        for a in &xs {
            for b in &xs {
                let by_segments = a.initial(&g, &far).unwrap() == b.initial(&g, &far).unwrap();
                assert_eq!(a.same_as(&g, b).unwrap(), by_segments, "{name}");
            }
        }
    }
}

#[test]
fn cylinder_membership() {
    let g = kpw_core::fixtures::g2();
    let x = EvPeriodicPath::parse(&g, "e;f").unwrap();
    assert!(x.in_cylinder(&g, &g.parse_path("e.f").unwrap()).unwrap());
    assert!(!x.in_cylinder(&g, &g.parse_path("f").unwrap()).unwrap());
}

#[test]
fn torus_has_one_infinite_path() {
    let g = kpw_core::fixtures::g3();
    let v = g.vertex("v").unwrap();
    let x = infpath::sole_infinite_path(&g, v).unwrap();
    let y = EvPeriodicPath::periodic(&g, g.parse_path("a.a.b").unwrap()).unwrap();
    assert!(x.same_as(&g, &y).unwrap());
    assert_eq!(x.shift(&g, &deg(&[1, 0])).unwrap().range(), v);
    assert!(infpath::sole_infinite_path(&kpw_core::fixtures::g2(), v).is_none());
}
