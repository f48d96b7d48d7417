use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;
use pseudocycle_core::{
    boundary_quandle, boundary_rack, homology_group, matrix_of_boundary, mochizuki_theta,
    project_quandle, quandles_up_to_isomorphism, snf, solve_in_image, Chain, HomologyContext,
    IntMatrix, PseudoCycleFinder, Quandle, QuandleBasis, QuandleSpec, Sign, TriplePoint,
    TriplePointDataset, Tuple,
};

fn r3() -> Quandle {
    Quandle::dihedral(3).unwrap()
}

fn all_tuples(order: usize, degree: usize) -> Vec<Tuple> {
    (0..order.pow(degree as u32))
        .map(|mut code| {
            let mut t = vec![0; degree];
            for slot in t.iter_mut().rev() {
                *slot = code % order;
                code /= order;
            }
            Tuple::new(t)
        })
        .collect()
}

#[test]
fn boundary_squares_to_zero_on_catalogue() {
    for order in 1..=4 {
        for q in quandles_up_to_isomorphism(order) {
            for n in 3..=4 {
                let outer = matrix_of_boundary(&q, n - 1).unwrap();
                let inner = matrix_of_boundary(&q, n).unwrap();
                assert!(outer.mul(&inner).is_zero(), "{q:?}, degree {n}");
            }
            for n in 2..=4 {
                for t in all_tuples(order, n) {
                    let d = boundary_rack(&Chain::generator(t.clone()), &q).unwrap();
                    if n >= 3 {
                        assert!(boundary_rack(&d, &q).unwrap().is_zero(), "{q:?} {t}");
                    }
                }
            }
        }
    }
}

#[test]
fn degenerate_chains_form_a_subcomplex() {
    for order in 1..=4 {
        for q in quandles_up_to_isomorphism(order) {
            for n in 2..=4 {
                for t in all_tuples(order, n)
                    .into_iter()
                    .filter(Tuple::is_degenerate)
                {
                    let d = boundary_rack(&Chain::generator(t.clone()), &q).unwrap();
                    assert!(
                        project_quandle(&d).is_zero(),
                        "{q:?}: boundary of {t} is {d}"
                    );
                }
            }
        }
    }
}

#[test]
fn homology_is_invariant_under_relabeling() {
    let q = r3();
    let shifted = q.relabel(&[1, 2, 0]).unwrap();
    assert_eq!(shifted, q);
    for n in 1..=3 {
        assert_eq!(
            homology_group(&shifted, n).unwrap(),
            homology_group(&q, n).unwrap()
        );
    }
    // non-automorphism relabelings of other quandles give isomorphic quandles
    for q in quandles_up_to_isomorphism(4) {
        let moved = q.relabel(&[2, 0, 3, 1]).unwrap();
        for n in 1..=2 {
            assert_eq!(
                homology_group(&moved, n).unwrap(),
                homology_group(&q, n).unwrap()
            );
        }
    }
}

#[test]
fn every_degree_four_boundary_is_null() {
    let q = r3();
    let ctx = HomologyContext::new(q.clone());
    for t in QuandleBasis::new(&q, 4).tuples() {
        let b = boundary_quandle(&Chain::generator(t.clone()), &q).unwrap();
        assert!(ctx.is_null_homologous(&b).unwrap());
        assert_eq!(mochizuki_theta().pair(&q, &b).unwrap(), 0);
    }
}

fn small_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-9i64..=9, c), r)
            .prop_map(|rows| IntMatrix::from_rows(&rows).unwrap())
    })
}

fn sparse_chain(degree: usize, order: usize) -> impl Strategy<Value = Chain> {
    prop::collection::vec((prop::collection::vec(0..order, degree), -5i64..=5), 0..8)
        .prop_map(move |terms| Chain::from_terms(degree, terms).unwrap())
}

fn quandle_chain(q: &Quandle, degree: usize) -> impl Strategy<Value = Chain> {
    let basis = QuandleBasis::new(q, degree);
    let tuples = basis.tuples().to_vec();
    prop::collection::vec((0..tuples.len(), -5i64..=5), 0..10).prop_map(move |terms| {
        Chain::from_terms(
            degree,
            terms.into_iter().map(|(i, k)| (tuples[i].clone(), k)),
        )
        .unwrap()
    })
}

/// Cycles of degree 3 over R_3: integer combinations of `c1` and boundaries.
fn r3_cycle() -> impl Strategy<Value = Chain> {
    (-4i64..=4, quandle_chain(&r3(), 4)).prop_map(|(k, d)| {
        let q = r3();
        let c1 = Chain::from_terms(3, [([2, 0, 2], 1), ([2, 1, 0], 1)]).unwrap();
        c1.scale(&BigInt::from(k))
            .checked_add(&boundary_quandle(&d, &q).unwrap())
            .unwrap()
    })
}

/// Solvability read off a decomposition directly from its definition.
fn snf_criterion(a: &IntMatrix, b: &[BigInt]) -> bool {
    let s = snf(a);
    let ub = s.u.mul_vec(b).unwrap();
    let diag = s.diagonal();
    ub.iter().enumerate().all(|(i, c)| match diag.get(i) {
        Some(d) if !d.is_zero() => c.is_multiple_of(d),
        _ => c.is_zero(),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn snf_invariants(a in small_matrix(8, 8)) {
        let s = snf(&a);
        prop_assert_eq!(&s.u.mul(&a).mul(&s.v), &s.d);
        prop_assert!(s.u.determinant().unwrap().magnitude().is_one());
        prop_assert!(s.v.determinant().unwrap().magnitude().is_one());
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    prop_assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        let diag = s.diagonal();
        let rank = s.rank();
        prop_assert!(diag[rank..].iter().all(Zero::is_zero));
        prop_assert!(diag[..rank].iter().all(|d| *d > BigInt::zero()));
        for w in diag[..rank].windows(2) {
            prop_assert!(w[1].is_multiple_of(&w[0]));
        }
    }

    #[test]
    fn solve_is_complete_on_images(a in small_matrix(5, 5), seed in prop::collection::vec(-6i64..=6, 5)) {
        let x0: Vec<BigInt> = seed[..a.cols()].iter().map(|&v| BigInt::from(v)).collect();
        let b = a.mul_vec(&x0).unwrap();
        let x = solve_in_image(&a, &b).unwrap();
        prop_assert!(x.is_some());
        prop_assert_eq!(a.mul_vec(&x.unwrap()).unwrap(), b);
    }

    #[test]
    fn solve_is_sound_and_agrees_with_snf(a in small_matrix(5, 5), rhs in prop::collection::vec(-9i64..=9, 5)) {
        let b: Vec<BigInt> = rhs[..a.rows()].iter().map(|&v| BigInt::from(v)).collect();
        let x = solve_in_image(&a, &b).unwrap();
        if let Some(x) = &x {
            prop_assert_eq!(&a.mul_vec(x).unwrap(), &b);
        }
        prop_assert_eq!(x.is_some(), snf_criterion(&a, &b));
    }

    #[test]
    fn boundary_is_linear(x in sparse_chain(3, 3), y in sparse_chain(3, 3), a in -4i64..=4, b in -4i64..=4) {
        let q = r3();
        let (a, b) = (BigInt::from(a), BigInt::from(b));
        let combo = x.scale(&a).checked_add(&y.scale(&b)).unwrap();
        let lhs = boundary_rack(&combo, &q).unwrap();
        let rhs = boundary_rack(&x, &q).unwrap().scale(&a)
            .checked_add(&boundary_rack(&y, &q).unwrap().scale(&b)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn chain_minus_itself_is_empty(x in sparse_chain(4, 4)) {
        let z = x.checked_add(&-&x).unwrap();
        prop_assert!(z.is_zero());
        prop_assert!(z.iter().next().is_none());
        let back: Chain = serde_json::from_str(&serde_json::to_string(&x).unwrap()).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn boundaries_are_null_homologous(d in quandle_chain(&r3(), 4)) {
        let q = r3();
        let b = boundary_quandle(&d, &q).unwrap();
        let ctx = HomologyContext::new(q);
        prop_assert!(ctx.is_null_homologous(&b).unwrap());
    }

    #[test]
    fn pairing_is_homology_invariant(c in r3_cycle(), d in quandle_chain(&r3(), 4)) {
        let q = r3();
        let theta = mochizuki_theta();
        let shifted = c.checked_add(&boundary_quandle(&d, &q).unwrap()).unwrap();
        prop_assert_eq!(theta.pair(&q, &shifted).unwrap(), theta.pair(&q, &c).unwrap());
    }

    #[test]
    fn pairing_is_linear(x in quandle_chain(&r3(), 3), y in quandle_chain(&r3(), 3), a in -5i64..=5, b in -5i64..=5) {
        let q = r3();
        let theta = mochizuki_theta();
        let combo = x.scale(&BigInt::from(a)).checked_add(&y.scale(&BigInt::from(b))).unwrap();
        let expected = (a * theta.pair(&q, &x).unwrap() as i64 + b * theta.pair(&q, &y).unwrap() as i64)
            .rem_euclid(3) as u64;
        prop_assert_eq!(theta.pair(&q, &combo).unwrap(), expected);
    }

    #[test]
    fn cocycle_certificate_implies_nontrivial_class(c in r3_cycle()) {
        let q = r3();
        let ctx = HomologyContext::new(q.clone());
        let null = ctx.is_null_homologous(&c).unwrap();
        prop_assert_eq!(null, ctx.is_null_homologous(&-&c).unwrap());
        if mochizuki_theta().pair(&q, &c).unwrap() != 0 {
            prop_assert!(!null);
        }
        // H_3 = Z/3 is detected by theta, so the converse holds too
        prop_assert_eq!(null, mochizuki_theta().pair(&q, &c).unwrap() == 0);
    }
}

// Colors biased towards the triples that make up cycles over R_3.
fn r3_dataset(max_points: usize) -> impl Strategy<Value = TriplePointDataset> {
    let triple = prop_oneof![
        Just([2, 0, 2]),
        Just([2, 1, 0]),
        Just([0, 1, 0]),
        Just([1, 2, 1]),
        (0usize..3, 0usize..3, 0usize..3).prop_map(|(p, q, r)| [p, q, r]),
    ];
    prop::collection::vec((triple, prop::bool::ANY), 0..=max_points).prop_map(|pts| {
        let points = pts
            .into_iter()
            .enumerate()
            .map(|(i, (colors, positive))| {
                let sign = if positive {
                    Sign::Positive
                } else {
                    Sign::Negative
                };
                TriplePoint::new(format!("p{i}"), sign, colors)
            })
            .collect();
        TriplePointDataset::new(QuandleSpec::Dihedral { order: 3 }, points).unwrap()
    })
}

fn subsets(ds: &TriplePointDataset) -> Vec<Vec<String>> {
    let ids: Vec<String> = ds.points().iter().map(|p| p.id.clone()).collect();
    (1u32..1 << ids.len())
        .map(|m| {
            ids.iter()
                .enumerate()
                .filter(|(i, _)| m >> i & 1 == 1)
                .map(|(_, s)| s.clone())
                .collect()
        })
        .collect()
}

/// Reference answer from the definition, with no memo and no packing search:
/// subsets whose chain is a cycle pairing nontrivially with theta (which
/// detects all of H_3 of R_3), and the best disjoint family by brute force.
fn reference(ds: &TriplePointDataset) -> (Vec<Vec<String>>, usize) {
    let q = ds.quandle().clone();
    let theta = mochizuki_theta();
    let found: Vec<Vec<String>> = subsets(ds)
        .into_iter()
        .filter(|s| {
            let c = project_quandle(&ds.chain_of(s).unwrap());
            boundary_quandle(&c, &q).unwrap().is_zero() && theta.pair(&q, &c).unwrap() != 0
        })
        .collect();
    fn best(cands: &[Vec<String>], used: &mut Vec<String>) -> usize {
        let mut top = 0;
        for (i, c) in cands.iter().enumerate() {
            if c.iter().all(|id| !used.contains(id)) {
                used.extend(c.iter().cloned());
                top = top.max(1 + best(&cands[i + 1..], used));
                used.truncate(used.len() - c.len());
            }
        }
        top
    }
    let count = best(&found, &mut Vec::new());
    (found, count)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumeration_matches_definition(ds in r3_dataset(6)) {
        let finder = PseudoCycleFinder::new(&ds);
        let report = finder.report().unwrap();
        prop_assert_eq!(report.check_invariants(), Ok(()));
        for s in subsets(&ds) {
            prop_assert_eq!(finder.is_pseudo_cycle(&s).unwrap(), report.pseudo_cycles.contains(&s));
        }
        let (mut expected, count) = reference(&ds);
        let mut listed = report.pseudo_cycles.clone();
        expected.sort();
        listed.sort();
        prop_assert_eq!(listed, expected);
        prop_assert_eq!(report.max_disjoint_count, count);
        prop_assert!(report.max_disjoint_count <= report.distinct_count);
        prop_assert!(report.max_disjoint_count <= ds.len());
    }

    #[test]
    fn reports_survive_renaming_and_sign_flip(ds in r3_dataset(6), rev in prop::bool::ANY) {
        let base = PseudoCycleFinder::new(&ds).report().unwrap();
        // renaming that reverses the id order when `rev` is set
        let rename = |id: &str| {
            let k: usize = id[1..].parse().unwrap();
            if rev { format!("q{}", 99 - k) } else { format!("x{k}") }
        };
        let renamed = ds.map_ids(rename).unwrap();
        let other = PseudoCycleFinder::new(&renamed).report().unwrap();
        prop_assert_eq!(other.max_disjoint_count, base.max_disjoint_count);
        prop_assert_eq!(other.distinct_count, base.distinct_count);
        let mut mapped: Vec<Vec<String>> = base.pseudo_cycles.iter()
            .map(|s| { let mut v: Vec<String> = s.iter().map(|id| rename(id)).collect(); v.sort(); v })
            .collect();
        mapped.sort();
        let mut got = other.pseudo_cycles.clone();
        got.sort();
        prop_assert_eq!(got, mapped);
        for w in &other.witness_packing {
            prop_assert!(other.pseudo_cycles.contains(w));
        }

        let flipped = PseudoCycleFinder::new(&ds.sign_flipped()).report().unwrap();
        prop_assert_eq!(flipped.pseudo_cycles, base.pseudo_cycles);
        prop_assert_eq!(flipped.max_disjoint_count, base.max_disjoint_count);
    }
}
