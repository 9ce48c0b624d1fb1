use coindet::dga::{validate, ChainElement, Dga, DgaPresentation};
use coindet::fixtures;
use coindet::gf2::{solve, Gf2Matrix, Gf2Subspace, Gf2Vector};
use coindet::homology::HomologyStructure;
use coindet::massey;
use coindet::oracle::{random_presentation, RandomDgaSpec};
use proptest::prelude::*;

fn vector(n: usize) -> impl Strategy<Value = Gf2Vector> {
    proptest::collection::vec(0u8..2, n).prop_map(|b| Gf2Vector::from_bits(&b))
}

fn subspace(n: usize) -> impl Strategy<Value = Gf2Subspace> {
    proptest::collection::vec(vector(n), 0..=n + 2).prop_map(move |vs| Gf2Subspace::from_spanning(n, vs).unwrap())
}

fn subspace_pair() -> impl Strategy<Value = (Gf2Subspace, Gf2Subspace)> {
    (1usize..24).prop_flat_map(|n| (subspace(n), subspace(n)))
}

fn matrix() -> impl Strategy<Value = Gf2Matrix> {
    (1usize..12, 1usize..12).prop_flat_map(|(r, c)| {
        proptest::collection::vec(vector(r), c).prop_map(move |cols| Gf2Matrix::from_columns(r, cols).unwrap())
    })
}

fn element(dga: &Dga, degree: i32, bits: &[u8]) -> ChainElement {
    let n = dga.dim(degree).unwrap();
    let v: Vec<u8> = (0..n).map(|i| bits.get(i).copied().unwrap_or(0)).collect();
    ChainElement::new(degree, Gf2Vector::from_bits(&v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn dimension_formula((s, t) in subspace_pair()) {
        let sum = s.sum(&t).unwrap();
        let cap = s.intersection(&t).unwrap();
        prop_assert_eq!(s.dim() + t.dim(), sum.dim() + cap.dim());
        prop_assert!(cap.is_subspace_of(&s).unwrap() && cap.is_subspace_of(&t).unwrap());
        prop_assert!(s.is_subspace_of(&sum).unwrap() && t.is_subspace_of(&sum).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn solve_returns_every_solution(m in matrix(), seed in vector(11)) {
        let x = Gf2Vector::from_bits(&seed.bits()[..m.cols()]);
        let b = m.mul_vec(&x).unwrap();
        let sol = solve(&m, &b).unwrap().expect("b is in the image");
        let affine = sol.as_affine();
        prop_assert!(affine.contains(&x).unwrap());
        prop_assert_eq!(affine.direction().dim() + m.rank(), m.cols());
        for y in affine.elements().take(64) {
            prop_assert_eq!(m.mul_vec(&y).unwrap(), b.clone());
        }
    }

    #[test]
    fn reduce_is_a_projection(s in subspace(16), v in vector(16)) {
        let r = s.reduce(&v).unwrap();
        prop_assert_eq!(s.reduce(&r).unwrap(), r.clone());
        prop_assert!(s.contains(&(&r + &v)).unwrap());
    }
}

fn random_spec(seed: u64) -> RandomDgaSpec {
    RandomDgaSpec {
        seed,
        max_generators: 5,
        max_degree: 5,
        differential_density: (2, 3),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_presentations_satisfy_d_squared_and_leibniz(
        seed in any::<u64>(),
        bits in proptest::collection::vec(0u8..2, 64),
        more in proptest::collection::vec(0u8..2, 64),
        p in 0i32..3,
        q in 0i32..3,
    ) {
        let pres = random_presentation(&random_spec(seed));
        prop_assert!(validate(&pres).passed());
        let dga = Dga::new(pres).unwrap();
        let n = dga.truncation() as i32;
        prop_assume!(p + q < n);
        let u = element(&dga, p, &bits);
        let v = element(&dga, q, &more);
        prop_assert!(dga.differential(&dga.differential(&u).unwrap()).unwrap().is_zero());
        let lhs = dga.differential(&dga.multiply(&u, &v).unwrap()).unwrap();
        let rhs = dga
            .multiply(&dga.differential(&u).unwrap(), &v)
            .unwrap()
            .add(&dga.multiply(&u, &dga.differential(&v).unwrap()).unwrap())
            .unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn random_presentations_round_trip(seed in any::<u64>()) {
        let pres = random_presentation(&random_spec(seed));
        let back: DgaPresentation = pres.to_string().parse().unwrap();
        prop_assert_eq!(back, pres);
    }

    #[test]
    fn triple_is_independent_of_representatives(
        seed in any::<u64>(),
        picks in proptest::collection::vec(proptest::collection::vec(0u8..2, 64), 3),
        shift in proptest::collection::vec(0u8..2, 64),
    ) {
        let pres = random_presentation(&random_spec(seed));
        let h = HomologyStructure::new(Dga::new(pres).unwrap());
        let dga = h.dga();
        let cycle = |degree: i32, bits: &[u8]| {
            let mut v = dga.zero(degree).unwrap();
            for (b, on) in h.basis(degree).unwrap().iter().zip(bits) {
                if *on == 1 {
                    v = v.add(b).unwrap();
                }
            }
            v
        };
        let u = [cycle(1, &picks[0]), cycle(1, &picks[1]), cycle(2, &picks[2])];
        let b = dga.differential(&element(dga, 1, &shift)).unwrap();
        let base: Vec<_> = u.iter().map(|x| h.class_of(x).unwrap()).collect();
        let moved = h.class_of(&u[2].add(&b).unwrap()).unwrap();
        let t0 = massey::triple_bracket(&h, &base[0], &base[1], &base[2]);
        let t1 = massey::triple_bracket(&h, &base[0], &base[1], &moved);
        match (t0, t1) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a.value, b.value),
            (Err(a), Err(b)) => prop_assert_eq!(a.reason_code(), b.reason_code()),
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a.map(|t| t.value), b.map(|t| t.value)),
        }
    }
}

#[test]
fn fixtures_satisfy_d_squared_leibniz_and_round_trip() {
    for name in fixtures::names() {
        let pres = fixtures::fixture(name).unwrap();
        assert!(validate(&pres).passed(), "{name}");
        let back: DgaPresentation = pres.to_string().parse().unwrap();
        assert_eq!(back, pres, "{name}");
        let dga = Dga::new(pres).unwrap();
        let top = dga.truncation() as i32;
        for n in 0..top {
            let dn = dga.d_matrix(n).unwrap();
            if n + 1 < top {
                let dn1 = dga.d_matrix(n + 1).unwrap();
                assert_eq!(dn1.compose(&dn).unwrap().rank(), 0, "{name} degree {n}");
            }
        }
        for p in 0..top {
            for q in 0..top - p {
                for i in 0..dga.dim(p).unwrap() {
                    for j in 0..dga.dim(q).unwrap() {
                        let u = dga.basis_element(p, i).unwrap();
                        let v = dga.basis_element(q, j).unwrap();
                        let lhs = dga.differential(&dga.multiply(&u, &v).unwrap()).unwrap();
                        let rhs = dga
                            .multiply(&dga.differential(&u).unwrap(), &v)
                            .unwrap()
                            .add(&dga.multiply(&u, &dga.differential(&v).unwrap()).unwrap())
                            .unwrap();
                        assert_eq!(lhs, rhs, "{name} ({p},{i})·({q},{j})");
                    }
                }
            }
        }
    }
}

#[test]
fn reversed_inputs_give_the_same_verdicts_on_commutative_fixtures() {
    for name in ["A", "A_prime"] {
        let h = HomologyStructure::new(Dga::new(fixtures::fixture(name).unwrap()).unwrap());
        let dga = h.dga();
        let c = |s: &str| h.class_of(&dga.generator(s).unwrap()).unwrap();
        let (a0, a1, a2, a3) = (c("a0"), c("a1"), c("a2"), c("a3"));
        let fwd = massey::coindeterminacy(&h, &a0, &a1, &a2, &a3).unwrap();
        let rev = massey::coindeterminacy(&h, &a3, &a2, &a1, &a0).unwrap();
        assert_eq!(fwd.contains_zero, rev.contains_zero, "{name}");
        assert_eq!(fwd.coset, rev.coset, "{name}");
        let t = massey::triple_bracket(&h, &a0, &a1, &a2).unwrap();
        let r = massey::triple_bracket(&h, &a2, &a1, &a0).unwrap();
        assert_eq!(t.value, r.value, "{name}");
    }
}

#[test]
fn half_strict_implies_defined_on_the_fixture() {
    let h = HomologyStructure::new(Dga::new(fixtures::fixture("A_half_strict").unwrap()).unwrap());
    let dga = h.dga();
    let c = |s: &str| h.class_of(&dga.generator(s).unwrap()).unwrap();
    let (a0, a1, a2, a3) = (c("a0"), c("a1"), c("a2"), c("a3"));
    assert!(massey::triple_bracket(&h, &a0, &a1, &a2).unwrap().strictly_zero);
    assert!(!massey::triple_bracket(&h, &a1, &a2, &a3).unwrap().strictly_zero);
    assert!(massey::half_strict_defined(&h, &a0, &a1, &a2, &a3).unwrap());
    assert!(massey::is_fourfold_defined(&h, &a0, &a1, &a2, &a3).unwrap().0);
}
