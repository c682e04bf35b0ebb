use cagespec::abelian::{quotient_group, FiniteAbelianGroup, GroupElement};
use cagespec::caysum::{cayley_graph, cayley_sum_graph, sum_set_difference, translate_sum_set, SumSet};
use cagespec::crystal::{self, crystal_cayley, DiamondAnchor, GridAnchor};
use cagespec::fullerene::{self, classify, TriangleSpec};
use cagespec::intlinalg::{self, IntMatrix};
use cagespec::spectra::{character_spectrum, numeric_spectrum, spectra_match, spectrum_is_paired};
use proptest::prelude::*;

fn matrix(max_dim: usize, range: std::ops::RangeInclusive<i64>) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim).prop_flat_map(move |d| {
        prop::collection::vec(prop::collection::vec(range.clone(), d), d).prop_map(|rows| IntMatrix::from_rows(&rows).unwrap())
    })
}

fn group(max_order: i64) -> impl Strategy<Value = FiniteAbelianGroup> {
    prop::collection::vec(1i64..=12, 1..=3)
        .prop_filter("order bound", move |m| m.iter().product::<i64>() <= max_order)
        .prop_map(|m| FiniteAbelianGroup::new(m).unwrap())
}

fn group_and_sum_set(max_order: i64, max_len: usize) -> impl Strategy<Value = (FiniteAbelianGroup, SumSet)> {
    group(max_order).prop_flat_map(move |g| {
        let n = g.order();
        prop::collection::vec(0..n, 1..=max_len).prop_map(move |idx| {
            let s = SumSet::new(g.clone(), idx.iter().map(|&i| g.element_at(i)).collect()).unwrap();
            (g.clone(), s)
        })
    })
}

proptest! {
    #[test]
    fn snf_is_deterministic_and_valid(m in matrix(4, -9..=9)) {
        let a = intlinalg::snf(&m).unwrap();
        prop_assert_eq!(&a, &intlinalg::snf(&m).unwrap());
        a.check(&m).unwrap();
        let mut prefix = 1;
        for (i, d) in a.invariant_factors().into_iter().enumerate() {
            prefix *= d;
            prop_assert_eq!(prefix, intlinalg::minor_gcd(&m, i + 1).unwrap());
        }
    }

    #[test]
    fn hermite_form_spans_the_same_lattice(m in matrix(3, -6..=6)) {
        prop_assume!(intlinalg::det(&m).unwrap() != 0);
        let h = intlinalg::hermite_upper(&m).unwrap();
        prop_assert_eq!(intlinalg::det(&h).unwrap(), intlinalg::det(&m).unwrap().abs());
        for c in 0..m.dim() {
            prop_assert!(intlinalg::solve_integer(&h, &m.column(c)).is_ok());
            prop_assert!(intlinalg::solve_integer(&m, &h.column(c)).is_ok());
        }
    }

    #[test]
    fn projection_kernel_is_the_lattice(m in matrix(2, -4..=4), x in prop::collection::vec(-20i64..20, 2), y in prop::collection::vec(-20i64..20, 2)) {
        prop_assume!(m.dim() == 2 && intlinalg::det(&m).unwrap() != 0);
        let q = quotient_group(&m).unwrap();
        let g = q.target();
        prop_assert_eq!(g.order() as i64, intlinalg::det(&m).unwrap().abs());
        let sum: Vec<i64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        prop_assert_eq!(q.project(&sum).unwrap(), g.add(&q.project(&x).unwrap(), &q.project(&y).unwrap()));

        let k = 3 * m.max_abs_entry() as i64;
        let zero = g.zero();
        for i in 0..k {
            for j in 0..k {
                let in_kernel = q.project(&[i, j]).unwrap() == zero;
                let in_lattice = intlinalg::solve_integer(&m, &[i, j]).is_ok();
                prop_assert_eq!(in_kernel, in_lattice);
            }
        }
    }

    #[test]
    fn characters_are_orthogonal(g in group(60)) {
        let elems: Vec<GroupElement> = g.elements().collect();
        for a in &elems {
            for b in &elems {
                let total: num_complex::Complex64 = elems
                    .iter()
                    .map(|x| g.char_value(a, x).unwrap() * g.char_value(b, x).unwrap().conj())
                    .sum();
                let expected = if a == b { g.order() as f64 } else { 0.0 };
                prop_assert!((total.re - expected).abs() < 1e-10 && total.im.abs() < 1e-10);
            }
        }
    }

    #[test]
    fn character_is_a_homomorphism(g in group(200), i in 0usize..200, j in 0usize..200, k in 0usize..200) {
        let n = g.order();
        let (a, x, y) = (g.element_at(i % n), g.element_at(j % n), g.element_at(k % n));
        let lhs = g.char_value(&a, &g.add(&x, &y)).unwrap();
        let rhs = g.char_value(&a, &x).unwrap() * g.char_value(&a, &y).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-12);
        prop_assert!((g.char_value(&a, &x).unwrap().norm() - 1.0).abs() < 1e-12);
        prop_assert!((g.char_value(&g.neg(&a), &x).unwrap() - g.char_value(&a, &x).unwrap().conj()).norm() < 1e-12);
    }

    #[test]
    fn involutions_and_pairs_partition_the_group(g in group(400)) {
        let mut all = g.involutive_elements();
        let reps = g.conjugate_pair_reps();
        prop_assert_eq!(all.len(), g.moduli().iter().map(|n| if n % 2 == 0 { 2 } else { 1 }).product::<usize>());
        prop_assert_eq!(2 * reps.len() + all.len(), g.order());
        all.extend(reps.iter().cloned());
        all.extend(reps.iter().map(|a| g.neg(a)));
        all.sort();
        prop_assert_eq!(all, g.elements().collect::<Vec<_>>());
    }

    #[test]
    fn cayley_sum_graph_invariants((g, s) in group_and_sum_set(100, 4), t in 0usize..100) {
        let graph = cayley_sum_graph(&g, &s).unwrap();
        let a = graph.adjacency();
        prop_assert!(graph.degrees().iter().all(|&d| d as usize == s.len()));
        let doubled: u64 = g.elements().map(|u| s.multiplicity(&g.double(&u)) as u64).sum();
        prop_assert_eq!(a.trace(), doubled);
        prop_assert_eq!(a.trace(), graph.semiedge_total() as u64);

        // squared graph
        prop_assert_eq!(a.square(), cayley_graph(&g, &sum_set_difference(&s)).unwrap());

        // translation x ↦ x + t
        let t = g.element_at(t % g.order());
        let shifted = cayley_sum_graph(&g, &translate_sum_set(&s, &t).unwrap()).unwrap().adjacency();
        for (ui, u) in g.elements().enumerate() {
            for (vi, v) in g.elements().enumerate() {
                prop_assert_eq!(a.get(ui, vi), shifted.get(g.index_of(&g.add(&u, &t)), g.index_of(&g.add(&v, &t))));
            }
        }
    }

    #[test]
    fn spectrum_identities((g, s) in group_and_sum_set(120, 5)) {
        let graph = cayley_sum_graph(&g, &s).unwrap();
        let a = graph.adjacency();
        let p = character_spectrum(&graph);
        let full = p.full();
        prop_assert_eq!(full.len(), g.order());
        prop_assert_eq!(p.m_raw.iter().sum::<i64>(), p.semiedge_total);
        prop_assert!((full.iter().sum::<f64>() - a.trace() as f64).abs() < 1e-8);
        prop_assert!((full.iter().map(|x| x * x).sum::<f64>() - a.sum_of_squares() as f64).abs() < 1e-6);
        prop_assert!(spectra_match(&full, &numeric_spectrum(&a).unwrap(), 1e-8));
        let m: Vec<f64> = p.m_canonical.iter().map(|&x| x as f64).collect();
        prop_assert!(spectrum_is_paired(&full, &m, 1e-8));
        prop_assert_eq!(p.m_canonical.iter().sum::<i64>(), p.semiedge_total);
    }

    #[test]
    fn fullerene_invariants(p in -7i64..=7, q in -7i64..=7, r in -7i64..=7, s in -7i64..=7, p1 in 0i64..2, p2 in 0i64..2) {
        prop_assume!(p * s - q * r != 0 && (p * s - q * r).abs() <= 120);
        let spec = TriangleSpec::new(p, q, r, s, p1, p2).unwrap();
        let (report, violations) = fullerene::verify_spec(&spec, true);
        prop_assert!(violations.is_empty(), "{:?}", violations);
        let report = report.unwrap();
        prop_assert_eq!(report.vertex_count, spec.vertex_count());
        prop_assert_eq!(report.census.s + report.census.f3, 4);
        prop_assert_eq!(classify(&spec).unwrap(), report);
    }

    #[test]
    fn fullerene_matches_crystal_re_expression(p in 1i64..=9, r in 0i64..9, s in 1i64..=9, p1 in 0i64..2, p2 in 0i64..2) {
        let spec = TriangleSpec::new(p, 0, r % p, s, p1, p2).unwrap();
        let (q, sum_set) = fullerene::group_and_sumset(&spec).unwrap();
        let direct = cayley_sum_graph(q.target(), &sum_set).unwrap();
        let (_, _, crystal) = crystal_cayley(&crystal::CrystalSpec::from_triangle(&spec).unwrap()).unwrap();
        prop_assert_eq!(direct, crystal);
    }
}

#[test]
fn grid_and_diamond_claims_on_random_lattices() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let l = crystal::random_sublattice(&mut rng, 2, 200);
        let spec = crystal::grid_family(2, l, GridAnchor::EdgeMidpoint).unwrap();
        let (_, _, g) = crystal_cayley(&spec).unwrap();
        assert_eq!(g.semiedge_total(), 4);
        assert!(g.degrees().iter().all(|&d| d == 4));
        let m = crystal::unmatched_multiset(&spec).unwrap();
        assert!(m == [4] || m == [4, 0], "{m:?}");
    }
    for _ in 0..20 {
        let l = crystal::random_sublattice(&mut rng, 3, 25).scaled(2).unwrap();
        let spec = crystal::diamond_family(3, l, DiamondAnchor::Offset).unwrap();
        let (_, _, g) = crystal_cayley(&spec).unwrap();
        assert_eq!(g.semiedge_total(), 0);
        assert!(g.degrees().iter().all(|&d| d == 4));
        let m = crystal::unmatched_multiset(&spec).unwrap();
        assert!(m == [4, -2, -2] || m == [4, 0, -2, -2], "{m:?}");
    }
    for _ in 0..20 {
        let l = crystal::random_sublattice(&mut rng, 3, 60);
        let spec = crystal::diamond_family(3, l, DiamondAnchor::Corner).unwrap();
        let (_, _, g) = crystal_cayley(&spec).unwrap();
        assert!(g.degrees().iter().all(|&d| d == 4));
    }
}

#[test]
fn census_rows_are_in_enumeration_order() {
    let specs: Vec<TriangleSpec> = fullerene::enumerate_specs(6).collect();
    let mut sorted = specs.clone();
    sorted.sort_by_key(|t| (t.determinant(), t.p, t.r, t.p1, t.p2));
    assert_eq!(specs, sorted);
}
