use std::sync::Arc;

use proptest::prelude::*;

use lauprod::algebra::{
    find_identity, is_associative, multiply, Algebra, Element, StructureTensor,
};
use lauprod::analysis::{distinguish, fingerprint, radical_dim, FingerprintField};
use lauprod::construct::{
    direct_sum, generalized_lau_product, trivializing_isomorphism, unitization,
};
use lauprod::corpus::{random_element, specs_up_to_dim, triple_corpus, CatalogSpec, HomSpec};
use lauprod::format::{
    parse_algebra_str, parse_map_str, parse_scalar, serialize_algebra, serialize_map,
};
use lauprod::linalg::Matrix;
use lauprod::morphism::{
    is_homomorphism, preserves_product, subspace_report, verify_isomorphism, LinearMap, Subspace,
};
use lauprod::Scalar;

fn specs() -> Vec<CatalogSpec> {
    specs_up_to_dim(3)
}

fn spec() -> impl Strategy<Value = CatalogSpec> {
    (0..specs().len()).prop_map(|i| specs()[i])
}

fn triples() -> &'static [(HomSpec, LinearMap)] {
    use std::sync::OnceLock;
    static TRIPLES: OnceLock<Vec<(HomSpec, LinearMap)>> = OnceLock::new();
    TRIPLES.get_or_init(|| triple_corpus(2).unwrap())
}

fn small_scalar() -> impl Strategy<Value = Scalar> {
    (-3i64..=3, 1i64..=3, -2i64..=2)
        .prop_map(|(p, q, im)| Scalar::ratio(p, q) + Scalar::complex(0, im))
}

fn element_in(a: &Arc<Algebra>) -> impl Strategy<Value = Element> {
    let a = Arc::clone(a);
    prop::collection::vec(small_scalar(), a.dim()).prop_map(move |c| Element::new(&a, c).unwrap())
}

fn spec_with_elements(k: usize) -> impl Strategy<Value = (Arc<Algebra>, Vec<Element>)> {
    spec().prop_flat_map(move |s| {
        let a = s.algebra().unwrap();
        (
            Just(Arc::clone(&a)),
            prop::collection::vec(element_in(&a), k),
        )
    })
}

/// Brute-force associativity straight from the structure constants:
/// `sum_m c[i][j][m] c[m][k][l] == sum_m c[j][k][m] c[i][m][l]` for all `i, j, k, l`.
fn associative_by_definition(t: &StructureTensor) -> Option<(usize, usize, usize)> {
    let n = t.dim();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut left = Scalar::zero();
                    let mut right = Scalar::zero();
                    for m in 0..n {
                        left += &(t.get(i, j, m) * t.get(m, k, l));
                        right += &(t.get(j, k, m) * t.get(i, m, l));
                    }
                    if left != right {
                        return Some((i, j, k));
                    }
                }
            }
        }
    }
    None
}

fn random_tensor(max_dim: usize) -> impl Strategy<Value = StructureTensor> {
    (1..=max_dim).prop_flat_map(|n| {
        prop::collection::vec(prop::sample::select(vec![0i64, 0, 0, 1, -1]), n * n * n).prop_map(
            move |v| {
                StructureTensor::from_flat(n, v.into_iter().map(Scalar::from_int).collect())
                    .unwrap()
            },
        )
    })
}

fn labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("e{i}")).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_is_bilinear((a, xs) in spec_with_elements(3), s in small_scalar()) {
        let (x, y, z) = (&xs[0], &xs[1], &xs[2]);
        let lhs = multiply(&x.add(y).unwrap(), z).unwrap();
        let rhs = multiply(x, z).unwrap().add(&multiply(y, z).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let lhs = multiply(z, &x.add(y).unwrap()).unwrap();
        let rhs = multiply(z, x).unwrap().add(&multiply(z, y).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(multiply(&x.scale(&s), y).unwrap(), multiply(x, y).unwrap().scale(&s));
        prop_assert_eq!(multiply(x, &y.scale(&s)).unwrap(), multiply(x, y).unwrap().scale(&s));
        prop_assert!(multiply(x, &Element::zero(&a)).unwrap().is_zero());
    }

    #[test]
    fn associativity_matches_definition(t in random_tensor(3)) {
        let n = t.dim();
        let a = Algebra::new_unchecked("random", labels(n), t.clone()).unwrap();
        let report = is_associative(&a);
        let oracle = associative_by_definition(&t);
        prop_assert_eq!(report.passed(), oracle.is_none());
        if let Some(w) = report.witness {
            prop_assert_eq!(Some(w.triple), oracle);
        }
    }

    #[test]
    fn catalog_and_random_elements_associate((_a, xs) in spec_with_elements(3)) {
        let (x, y, z) = (&xs[0], &xs[1], &xs[2]);
        let l = multiply(&multiply(x, y).unwrap(), z).unwrap();
        let r = multiply(x, &multiply(y, z).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn identity_is_two_sided_and_unique((a, xs) in spec_with_elements(1), k in 0usize..8) {
        if let Some(e) = find_identity(&a) {
            let x = &xs[0];
            prop_assert_eq!(&multiply(&e, x).unwrap(), x);
            prop_assert_eq!(&multiply(x, &e).unwrap(), x);
            let bumped = e.add(&Element::basis(&a, k % a.dim())).unwrap();
            let moves_something = (0..a.dim()).any(|i| {
                let b = Element::basis(&a, i);
                multiply(&bumped, &b).unwrap() != b || multiply(&b, &bumped).unwrap() != b
            });
            prop_assert!(moves_something);
        }
    }

    #[test]
    fn phi_is_multiplicative_with_unitriangular_inverse(idx in 0usize..1000, s1 in any::<u64>(), s2 in any::<u64>()) {
        let (spec, t) = &triples()[idx % triples().len()];
        let (a, b) = (spec.target.algebra().unwrap(), spec.source.algebra().unwrap());
        let phi = trivializing_isomorphism(&a, &b, t).unwrap();
        let x = random_element(phi.domain(), s1, 5);
        let y = random_element(phi.domain(), s2, 5);
        prop_assert!(preserves_product(&phi, &x, &y).unwrap());

        let (na, nb) = (a.dim(), b.dim());
        let mut expected = Matrix::identity(na + nb);
        for i in 0..na {
            for j in 0..nb {
                expected[(i, na + j)] = -t.matrix()[(i, j)].clone();
            }
        }
        let inv = phi.inverse().unwrap();
        prop_assert_eq!(inv.matrix(), &expected);
        prop_assert!(verify_isomorphism(&inv).passed());
    }

    #[test]
    fn verified_homomorphisms_hold_on_random_pairs(idx in 0usize..1000, seed in any::<u64>()) {
        let (_, t) = &triples()[idx % triples().len()];
        prop_assert!(is_homomorphism(t).passed());
        for s in 0..100u64 {
            let x = random_element(t.domain(), seed.wrapping_add(2 * s), 4);
            let y = random_element(t.domain(), seed.wrapping_add(2 * s + 1), 4);
            prop_assert!(preserves_product(t, &x, &y).unwrap());
        }
    }

    #[test]
    fn subspace_report_ignores_spanning_presentation(
        (a, xs) in spec_with_elements(3),
        keep in 1usize..=3,
        s in small_scalar(),
        rot in 0usize..3,
    ) {
        let base: Vec<Element> = xs[..keep].to_vec();
        let r0 = subspace_report(&Subspace::new(&a, &base).unwrap());

        let mut shuffled = base.clone();
        shuffled.rotate_left(rot % keep);
        shuffled.push(base[0].clone());
        if !s.is_zero() {
            shuffled[0] = shuffled[0].scale(&s);
        }
        let r1 = subspace_report(&Subspace::new(&a, &shuffled).unwrap());
        prop_assert_eq!((r0.rank, r0.codimension), (r1.rank, r1.codimension));
        prop_assert_eq!(r0.rank + r0.codimension, a.dim());
        prop_assert_eq!(
            (r0.is_subalgebra, r0.is_left_ideal, r0.is_right_ideal),
            (r1.is_subalgebra, r1.is_left_ideal, r1.is_right_ideal)
        );
    }

    #[test]
    fn fingerprint_is_permutation_invariant(s in spec(), perm_seed in any::<u64>()) {
        let a = s.algebra().unwrap();
        let n = a.dim();
        let mut perm: Vec<usize> = (0..n).collect();
        // a seeded Fisher-Yates shuffle
        let mut state = perm_seed;
        for i in (1..n).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (state >> 33) as usize % (i + 1));
        }
        let p = Arc::new(a.permuted(&perm));
        prop_assert!(is_associative(&p).passed());
        prop_assert_eq!(fingerprint(&a), fingerprint(&p));
    }

    #[test]
    fn radical_is_additive_over_direct_sums(sa in spec(), sb in spec()) {
        let (a, b) = (sa.algebra().unwrap(), sb.algebra().unwrap());
        prop_assert_eq!(radical_dim(&direct_sum(&a, &b).unwrap()), radical_dim(&a) + radical_dim(&b));
    }

    #[test]
    fn lau_product_has_direct_sum_fingerprint(idx in 0usize..1000) {
        let (spec, t) = &triples()[idx % triples().len()];
        let (a, b) = (spec.target.algebra().unwrap(), spec.source.algebra().unwrap());
        let product = generalized_lau_product(&a, &b, t).unwrap();
        prop_assert_eq!(fingerprint(&product), fingerprint(&direct_sum(&a, &b).unwrap()));
    }

    #[test]
    fn algebra_files_round_trip(s in spec(), perm_rot in 0usize..3) {
        let a = s.algebra().unwrap();
        let n = a.dim();
        let perm: Vec<usize> = (0..n).map(|i| (i + perm_rot) % n).collect();
        let p = a.permuted(&perm);
        let text = serialize_algebra(&p);
        let back = parse_algebra_str(&text, false).unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(serialize_algebra(&back), text);
    }

    #[test]
    fn map_files_round_trip(idx in 0usize..1000) {
        let (_, t) = &triples()[idx % triples().len()];
        let text = serialize_map(t);
        let back = parse_map_str(&text, t.domain(), t.codomain()).unwrap();
        prop_assert_eq!(back.matrix(), t.matrix());
        prop_assert_eq!(serialize_map(&back), text);
    }

    #[test]
    fn scalars_round_trip(re_n in -50i64..50, re_d in 1i64..20, im_n in -50i64..50, im_d in 1i64..20) {
        let s = Scalar::ratio(re_n, re_d) + Scalar::ratio(im_n, im_d) * Scalar::i();
        prop_assert_eq!(parse_scalar(&s.to_string()).unwrap(), s);
    }
}

/// The unitality certificate is consistent with an exhaustive search: no
/// map with entries in {-1, 0, 1, i, -i} between the two dimension-2
/// algebras is an isomorphism.
#[test]
fn unitality_certificate_agrees_with_exhaustive_map_search() {
    let z = "zero:1".parse::<CatalogSpec>().unwrap().algebra().unwrap();
    let c = Arc::new(Algebra::complex_field());
    let sum = direct_sum(&z, &c).unwrap();
    let (sharp, _) = unitization(&z).unwrap();
    assert_eq!(
        distinguish(&sum, &sharp).unwrap().field,
        FingerprintField::Unital
    );

    let values = [
        Scalar::zero(),
        Scalar::one(),
        -Scalar::one(),
        Scalar::i(),
        -Scalar::i(),
    ];
    let mut maps = 0;
    for code in 0..values.len().pow(4) {
        let mut k = code;
        let mut entry = || {
            let v = values[k % values.len()].clone();
            k /= values.len();
            v
        };
        let m = Matrix::from_rows(vec![vec![entry(), entry()], vec![entry(), entry()]]);
        let map = LinearMap::new(&sum, &sharp, m).unwrap();
        assert!(!verify_isomorphism(&map).passed(), "{:?}", map.matrix());
        maps += 1;
    }
    assert_eq!(maps, 625);
}
