use super::*;
use crate::scalars::Scalar;
use num_rational::Ratio;
use proptest::prelude::*;
use std::collections::HashSet;

fn dv(c: &[i64]) -> DegreeVector {
    DegreeVector::new(c.to_vec())
}

fn xi() -> Scalar {
    Scalar::root_of_unity(3, 1)
}

/// Braiding with the given labels and `q_ij = q̃_ij` above the diagonal.
fn from_diagram(labels: &[Scalar], edges: &[((usize, usize), Scalar)]) -> BraidingMatrix {
    let n = labels.len();
    let mut e = vec![vec![Scalar::one(); n]; n];
    for i in 0..n {
        e[i][i] = labels[i];
    }
    for &((i, j), s) in edges {
        e[i][j] = s;
    }
    BraidingMatrix::new(e).unwrap()
}

fn d3() -> BraidingMatrix {
    let m1 = Scalar::minus_one();
    let x2 = xi().power(2);
    from_diagram(&[m1, m1 * x2, m1], &[((0, 1), x2), ((1, 2), x2)])
}

fn set(v: &[DegreeVector]) -> BTreeSet<DegreeVector> {
    v.iter().cloned().collect()
}

fn hoc_set(d: &RootDatum) -> BTreeSet<DegreeVector> {
    d.hoc_degrees().into_iter().collect()
}

/// Independent Weyl-groupoid oracle: explores all objects reachable by
/// reflections, recomputing the generalized Cartan matrix at each, and
/// collects the real roots as signed columns of the change-of-basis matrices.
fn weyl_groupoid_roots(b: &BraidingMatrix) -> Option<BTreeSet<DegreeVector>> {
    let n = b.rank();
    let cartan_at = |cols: &[DegreeVector]| -> Option<Vec<Vec<i64>>> {
        let mut a = vec![vec![0i64; n]; n];
        for i in 0..n {
            a[i][i] = 2;
            let qii = b.q_bilinear(&cols[i], &cols[i]).unwrap();
            for j in 0..n {
                if i == j {
                    continue;
                }
                let qt = b.q_bilinear(&cols[i], &cols[j]).unwrap() * b.q_bilinear(&cols[j], &cols[i]).unwrap();
                let mut m = 0i64;
                loop {
                    let vanish = match qii.order() {
                        Order::Finite(k) if k > 1 => (m + 1) % k as i64 == 0,
                        _ => false,
                    };
                    if vanish || (qii.power(m) * qt).is_one() {
                        break;
                    }
                    m += 1;
                    if m > 50 {
                        return None;
                    }
                }
                a[i][j] = -m;
            }
        }
        Some(a)
    };
    let start: Vec<DegreeVector> = (0..n).map(|i| DegreeVector::simple(n, i)).collect();
    let mut seen: HashSet<Vec<DegreeVector>> = HashSet::from([start.clone()]);
    let mut stack = vec![start];
    let mut roots = BTreeSet::new();
    while let Some(cols) = stack.pop() {
        let a = cartan_at(&cols)?;
        for c in &cols {
            if c.is_nonnegative() {
                roots.insert(c.clone());
            } else {
                roots.insert(-c);
            }
        }
        for i in 0..n {
            let next: Vec<DegreeVector> = (0..n).map(|j| &cols[j] - &cols[i].scale(a[i][j])).collect();
            if seen.insert(next.clone()) {
                stack.push(next);
                if seen.len() > 100_000 {
                    return None;
                }
            }
        }
    }
    Some(roots)
}

#[test]
fn q_bilinear_examples() {
    let cm = CartanMatrix::from_type("A2").unwrap();
    let b = cartan_braiding(&cm, 3).unwrap();
    for i in 0..2 {
        for j in 0..2 {
            assert_eq!(
                b.q_bilinear(&DegreeVector::simple(2, i), &DegreeVector::simple(2, j)).unwrap(),
                b.q(i, j)
            );
        }
    }
    let beta = dv(&[1, 1]);
    let q = Scalar::root_of_unity(3, 1);
    assert_eq!(b.q_bilinear(&beta, &beta).unwrap(), q.power(2));
    assert_eq!(b.root_order(&beta).unwrap(), Order::Finite(3));
    assert_eq!(b.root_order(&dv(&[1, 0])).unwrap(), Order::Finite(3));
    assert!(b.q_bilinear(&dv(&[1, 0, 0]), &beta).is_err());
}

#[test]
fn root_order_special_values() {
    let b = BraidingMatrix::new(vec![vec![Scalar::minus_one()]]).unwrap();
    assert_eq!(b.root_order(&dv(&[1])).unwrap(), Order::Finite(2));
    let b = BraidingMatrix::new(vec![vec![Scalar::param(1)]]).unwrap();
    assert_eq!(b.root_order(&dv(&[1])).unwrap(), Order::Infinite);
}

#[test]
fn cartan_root_examples() {
    for (name, n) in [("A2", 5), ("B2", 3), ("G2", 7), ("A3", 3)] {
        let cm = CartanMatrix::from_type(name).unwrap();
        let b = cartan_braiding(&cm, n).unwrap();
        for r in RootSystem::generate(&cm).roots() {
            assert!(b.is_cartan_root(r).unwrap(), "{name} {r}");
        }
    }
    let q = Scalar::root_of_unity(5, 1);
    let b = FamilyTag::SuperA3Two.braiding(q).unwrap();
    assert!(!b.is_cartan_root(&dv(&[0, 1, 0])).unwrap());
    let b = BraidingMatrix::new(vec![vec![Scalar::param(2)]]).unwrap();
    assert!(b.is_cartan_root(&dv(&[1])).unwrap());
}

#[test]
fn cartan_braiding_examples() {
    let a2 = CartanMatrix::from_type("A2").unwrap();
    let b = cartan_braiding(&a2, 3).unwrap();
    let q = Scalar::root_of_unity(3, 1);
    assert_eq!(b.q(0, 0), q.power(2));
    assert_eq!(b.q_tilde(0, 1), q.power(-2));
    let a1 = CartanMatrix::from_type("A1").unwrap();
    assert_eq!(cartan_braiding(&a1, 5).unwrap().q(0, 0), Scalar::root_of_unity(5, 2));
    let g2 = CartanMatrix::from_type("G2").unwrap();
    assert!(cartan_braiding(&g2, 3).is_err());
    assert!(cartan_braiding(&a2, 4).is_err());
}

#[test]
fn diagram_examples() {
    let m1 = Scalar::minus_one();
    let diag = from_diagram(&[xi(), m1], &[]);
    assert!(diag.diagram().edges.is_empty());
    let d1 = FamilyTag::G23D1.braiding(xi()).unwrap();
    let dg = d1.diagram();
    assert_eq!(dg.labels, vec![m1, m1, m1]);
    assert_eq!(dg.edge(0, 1), xi());
    assert_eq!(dg.edge(1, 2), xi());
    assert_eq!(dg.edge(0, 2), Scalar::one());
    assert_eq!(d1.transpose().diagram(), dg);
}

#[test]
fn twist_equivalence_examples() {
    let a2 = CartanMatrix::from_type("A2").unwrap();
    let b3 = cartan_braiding(&a2, 3).unwrap();
    assert!(b3.twist_equivalent(&b3.transpose()).unwrap());
    let b9 = cartan_braiding(&a2, 9).unwrap();
    assert!(!b3.twist_equivalent(&b9).unwrap());
    let s = Scalar::param(1);
    let mut e = b3.entries().to_vec();
    e[0][1] = e[0][1] * s;
    e[1][0] = e[1][0] * s.inv();
    assert!(b3.twist_equivalent(&BraidingMatrix::new(e).unwrap()).unwrap());
    let a1 = cartan_braiding(&CartanMatrix::from_type("A1").unwrap(), 3).unwrap();
    assert!(b3.twist_equivalent(&a1).is_err());
}

#[test]
fn components_examples() {
    let m1 = Scalar::minus_one();
    let c = from_diagram(&[Scalar::one(), m1, xi()], &[]).components();
    assert_eq!((c.plus, c.minus, c.connected), (vec![0], vec![1], vec![vec![2]]));
    let c = FamilyTag::G23D1.braiding(xi()).unwrap().components();
    assert!(c.plus.is_empty() && c.minus.is_empty());
    assert_eq!(c.connected, vec![vec![0, 1, 2]]);
    let a2 = cartan_braiding(&CartanMatrix::from_type("A2").unwrap(), 5).unwrap();
    let two = BraidingMatrix::block_diagonal(&[a2.clone(), a2]).unwrap();
    assert_eq!(two.components().connected, vec![vec![0, 1], vec![2, 3]]);
}

#[test]
fn build_a2_g3() {
    let b = cartan_braiding(&CartanMatrix::from_type("A2").unwrap(), 3).unwrap();
    let d = RootDatum::build(&b, None).unwrap();
    assert_eq!(d.family_tag(), Some(FamilyTag::A2G3));
    assert_eq!(
        hoc_set(&d),
        set(&[dv(&[3, 0]), dv(&[3, 3]), dv(&[0, 3]), dv(&[2, 1]), dv(&[1, 2])])
    );
    assert!(d.roots().iter().all(|r| r.order == 3 && r.cartan));
}

#[test]
fn build_g23_d1() {
    let d = RootDatum::build(&FamilyTag::G23D1.braiding(xi()).unwrap(), None).unwrap();
    assert_eq!(d.family_tag(), Some(FamilyTag::G23D1));
    assert_eq!(
        hoc_set(&d),
        set(&[
            dv(&[3, 3, 0]),
            dv(&[3, 6, 3]),
            dv(&[0, 3, 3]),
            dv(&[6, 6, 6]),
            dv(&[2, 3, 1]),
            dv(&[1, 3, 2])
        ])
    );
}

#[test]
fn build_distinguished_a2() {
    let b = cartan_braiding(&CartanMatrix::from_type("A2").unwrap(), 5).unwrap();
    let d = RootDatum::build(&b, None).unwrap();
    assert_eq!(d.family_tag(), Some(FamilyTag::Distinguished));
    assert_eq!(hoc_set(&d), set(&[dv(&[5, 0]), dv(&[5, 5]), dv(&[0, 5])]));
}

#[test]
fn exceptional_census() {
    let q = Scalar::root_of_unity(5, 2);
    let cases = [
        (FamilyTag::A2G3, xi(), 5),
        (FamilyTag::SuperA3Two, q, 3),
        (FamilyTag::SuperA3All, q, 3),
        (FamilyTag::G23D1, xi(), 6),
        (FamilyTag::G23D2, xi(), 6),
    ];
    for (tag, p, size) in cases {
        let d = RootDatum::build(&tag.braiding(p).unwrap(), None).unwrap();
        assert_eq!(d.family_tag(), Some(tag));
        assert_eq!(d.hoc().len(), size, "{tag}");
    }
}

#[test]
fn hard_coded_roots_match_weyl_groupoid() {
    let mut cases = vec![
        FamilyTag::A2G3.braiding(xi()).unwrap(),
        FamilyTag::G23D1.braiding(xi()).unwrap(),
        FamilyTag::G23D1.braiding(xi().power(2)).unwrap(),
        FamilyTag::G23D2.braiding(xi()).unwrap(),
        FamilyTag::G23D2.braiding(xi().power(2)).unwrap(),
    ];
    for n in [3, 4, 5, 7, 8] {
        for k in 1..n {
            if num_integer::gcd(k, n) == 1 {
                let q = Scalar::root_of_unity(n, k);
                cases.push(FamilyTag::SuperA3Two.braiding(q).unwrap());
                cases.push(FamilyTag::SuperA3All.braiding(q).unwrap());
            }
        }
    }
    for b in cases {
        let rec = recognize(&b).unwrap().unwrap();
        assert_eq!(weyl_groupoid_roots(&b).unwrap(), set(&rec.roots), "{}", b.diagram());
    }
}

#[test]
fn recognition_is_permutation_invariant() {
    let q = Scalar::root_of_unity(7, 3);
    for (tag, p) in [
        (FamilyTag::SuperA3Two, q),
        (FamilyTag::SuperA3All, q),
        (FamilyTag::G23D1, xi()),
        (FamilyTag::G23D2, xi()),
    ] {
        let b = tag.braiding(p).unwrap();
        let base = RootDatum::build(&b, None).unwrap();
        for perm in [[2, 1, 0], [1, 0, 2], [2, 0, 1]] {
            let pb = b.restrict(&perm);
            let d = RootDatum::build(&pb, None).unwrap();
            assert_eq!(d.family_tag(), Some(tag));
            let mapped: BTreeSet<DegreeVector> = base
                .hoc_degrees()
                .iter()
                .map(|h| DegreeVector::new(perm.iter().map(|&p| h.get(p)).collect()))
                .collect();
            assert_eq!(hoc_set(&d), mapped);
        }
    }
}

#[test]
fn d3_needs_supplied_roots() {
    let b = d3();
    assert!(matches!(
        RootDatum::build(&b, None),
        Err(Error::UnrecognizedComponent { .. })
    ));
    let roots: Vec<DegreeVector> = weyl_groupoid_roots(&b).unwrap().into_iter().collect();
    assert_eq!(roots.len(), 10);
    let d = RootDatum::build(&b, Some(&roots)).unwrap();
    assert_eq!(d.family_tag(), Some(FamilyTag::Distinguished));
    assert_eq!(
        hoc_set(&d),
        set(&[dv(&[3, 3, 0]), dv(&[3, 6, 3]), dv(&[0, 3, 3]), dv(&[0, 6, 0])])
    );
}

#[test]
fn exclusions() {
    let m1 = Scalar::minus_one();
    let a3 = from_diagram(&[m1, m1, m1], &[((0, 1), m1), ((1, 2), m1)]);
    assert!(matches!(
        RootDatum::build(&a3, None),
        Err(Error::ExcludedComponent { .. })
    ));
    let d4 = from_diagram(&[m1; 4], &[((0, 1), m1), ((1, 2), m1), ((1, 3), m1)]);
    assert!(matches!(
        RootDatum::build(&d4, None),
        Err(Error::ExcludedComponent { .. })
    ));
    let with_plus = from_diagram(&[Scalar::one(), xi()], &[]);
    assert!(matches!(
        RootDatum::build(&with_plus, None),
        Err(Error::ExcludedComponent { .. })
    ));
    let with_minus = from_diagram(&[m1, xi()], &[]);
    assert!(matches!(
        RootDatum::build(&with_minus, None),
        Err(Error::ExcludedComponent { .. })
    ));
    let transcendental = FamilyTag::SuperA3Two.braiding(Scalar::param(1)).unwrap();
    assert!(matches!(
        RootDatum::build(&transcendental, None),
        Err(Error::InvalidDatum(_))
    ));
}

#[test]
fn underline_basis_examples() {
    assert_eq!(
        underline_basis(&[dv(&[5, 0]), dv(&[5, 5]), dv(&[0, 5])]),
        vec![dv(&[5, 0]), dv(&[0, 5])]
    );
    assert_eq!(underline_basis(&[dv(&[1, 1])]), vec![dv(&[1, 1])]);
    assert_eq!(
        underline_basis(&[dv(&[3, 3, 0]), dv(&[3, 6, 3]), dv(&[0, 3, 3]), dv(&[0, 6, 0])]),
        vec![dv(&[3, 3, 0]), dv(&[0, 3, 3]), dv(&[0, 6, 0])]
    );
}

#[test]
fn distinguished_underline_basis_is_simple_system() {
    for (name, n) in [("A2", 5), ("A3", 5), ("B2", 3), ("G2", 5), ("B3", 7)] {
        let cm = CartanMatrix::from_type(name).unwrap();
        let d = RootDatum::build(&cartan_braiding(&cm, n).unwrap(), None).unwrap();
        let basis = underline_basis(&d.hoc_degrees());
        let expected: BTreeSet<DegreeVector> =
            (0..cm.rank()).map(|i| DegreeVector::simple(cm.rank(), i).scale(n as i64)).collect();
        assert_eq!(set(&basis), expected, "{name}");
    }
}

#[test]
fn disconnected_build_is_union_of_components() {
    let a2 = FamilyTag::A2G3.braiding(xi()).unwrap();
    let sup = FamilyTag::SuperA3Two.braiding(Scalar::root_of_unity(4, 1)).unwrap();
    let block = BraidingMatrix::block_diagonal(&[a2.clone(), sup.clone()]).unwrap();
    let whole = RootDatum::build(&block, None).unwrap();
    let parts = [
        RootDatum::build(&a2, None).unwrap(),
        RootDatum::build(&sup, None).unwrap(),
    ];
    assert_eq!(whole, RootDatum::disjoint_union(&parts).unwrap());
    assert_eq!(whole.hoc().len(), 8);
}

#[test]
fn datum_file_round_trip_and_validation() {
    let b = d3();
    let roots: Vec<DegreeVector> = weyl_groupoid_roots(&b).unwrap().into_iter().collect();
    let d = RootDatum::build(&b, Some(&roots)).unwrap();
    let file = d.to_datum_file();
    let text = serde_json::to_string(&file).unwrap();
    let back: DatumFile = serde_json::from_str(&text).unwrap();
    assert_eq!(RootDatum::from_datum_file(back.clone()).unwrap(), d);
    let mut bad = back.clone();
    bad.n_beta.as_mut().unwrap()[0] += 1;
    assert!(RootDatum::from_datum_file(bad).is_err());
    let mut bad = back.clone();
    let f = &mut bad.cartan_flags.as_mut().unwrap()[0];
    *f = !*f;
    assert!(RootDatum::from_datum_file(bad).is_err());
    let mut bad = back;
    bad.family_tag = Some(FamilyTag::G23D1);
    assert!(RootDatum::from_datum_file(bad).is_err());
}

fn arb_unit() -> impl Strategy<Value = Scalar> {
    (1i64..13, 0i64..13).prop_map(|(n, k)| Scalar::new(Ratio::new(k % n, n), 0))
}

proptest! {
    #[test]
    fn twist_equivalent_data_agree(s in arb_unit(), t in arb_unit()) {
        let base = FamilyTag::G23D2.braiding(xi()).unwrap();
        let mut e = base.entries().to_vec();
        e[0][1] = e[0][1] * s;
        e[1][0] = e[1][0] * s.inv();
        e[0][2] = e[0][2] * t;
        e[2][0] = e[2][0] * t.inv();
        let twisted = BraidingMatrix::new(e).unwrap();
        prop_assert!(base.twist_equivalent(&twisted).unwrap());
        prop_assert_eq!(
            RootDatum::build(&base, None).unwrap().hoc_degrees(),
            RootDatum::build(&twisted, None).unwrap().hoc_degrees()
        );
        let a = RootDatum::build(&base, None).unwrap();
        let b = RootDatum::build(&twisted, None).unwrap();
        prop_assert_eq!(a.roots(), b.roots());
    }

    #[test]
    fn q_bilinear_is_bilinear(a in proptest::collection::vec(0i64..4, 3),
                              b in proptest::collection::vec(0i64..4, 3),
                              c in proptest::collection::vec(0i64..4, 3)) {
        let m = FamilyTag::G23D1.braiding(xi()).unwrap();
        let (a, b, c) = (DegreeVector::new(a), DegreeVector::new(b), DegreeVector::new(c));
        prop_assert_eq!(
            m.q_bilinear(&(&a + &b), &c).unwrap(),
            m.q_bilinear(&a, &c).unwrap() * m.q_bilinear(&b, &c).unwrap()
        );
    }
}
