use hoa_core::algebra::{normal_order_product, GaussianRational, ModePower, NormalMonomial, OperatorPolynomial};
use hoa_core::oracle::{ladder_matrix, materialize, TruncationSpec};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

const MODES: usize = 2;
const ORDER: u32 = 2;

fn coeff() -> impl Strategy<Value = GaussianRational> {
    (-4i64..=4, -4i64..=4, 1i64..=3)
        .prop_filter("nonzero", |(re, im, _)| *re != 0 || *im != 0)
        .prop_map(|(re, im, den)| GaussianRational::new(
            num_rational::BigRational::new(re.into(), den.into()),
            num_rational::BigRational::from_integer(im.into()),
        ))
}

fn powers(max_per_mode: u32) -> impl Strategy<Value = Vec<ModePower>> {
    prop::collection::vec((0..=max_per_mode, 0..=max_per_mode).prop_map(|(p, q)| ModePower::new(p, q)), MODES)
}

fn monomial(max_per_mode: u32, max_grade: u32) -> impl Strategy<Value = NormalMonomial> {
    (coeff(), 0..=max_grade, powers(max_per_mode)).prop_map(|(c, g, p)| NormalMonomial::new(c, g, p))
}

fn polynomial() -> impl Strategy<Value = OperatorPolynomial> {
    prop::collection::vec(monomial(2, 1), 0..4)
        .prop_map(|ms| OperatorPolynomial::from_monomials(ms, MODES, ORDER).unwrap())
}

/// Pair of monomials with total degree at most 6.
fn bounded_pair() -> impl Strategy<Value = (NormalMonomial, NormalMonomial)> {
    (monomial(3, 1), monomial(3, 1)).prop_filter("total degree ≤ 6", |(l, r)| l.key.degree() + r.key.degree() <= 6)
}

const DIM: usize = 8;

fn kron(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a.kronecker(b)
}

/// Dense truncated image built from ladder-matrix powers, independent of the
/// sparse materializer.
fn dense_monomial(m: &NormalMonomial) -> DMatrix<Complex64> {
    let (a, a_dag) = ladder_matrix(DIM).unwrap();
    let mut out = DMatrix::<Complex64>::identity(1, 1);
    for p in m.powers() {
        let mut local = DMatrix::<Complex64>::identity(DIM, DIM);
        for _ in 0..p.creation {
            local = &local * &a_dag;
        }
        for _ in 0..p.annihilation {
            local = &local * &a;
        }
        out = kron(&out, &local);
    }
    out * m.coeff.to_complex64()
}

fn occupations(index: usize) -> [usize; MODES] {
    [index / DIM, index % DIM]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn normal_ordering_matches_matrix_product((l, r) in bounded_pair()) {
        let product = normal_order_product(&l, &r, ORDER).unwrap();
        let trunc = TruncationSpec::new(vec![DIM; MODES]).unwrap();
        let symbolic = materialize(&product, &trunc, 1.0).unwrap().to_dense();
        let dense = dense_monomial(&l) * dense_monomial(&r);
        // columns whose every intermediate level stays inside the truncation
        for j in 0..DIM * DIM {
            let occ = occupations(j);
            let safe = (0..MODES).all(|k| {
                let raise = (l.powers()[k].creation + r.powers()[k].creation) as usize;
                occ[k] + raise < DIM
            });
            if !safe {
                continue;
            }
            for i in 0..DIM * DIM {
                prop_assert!((symbolic[(i, j)] - dense[(i, j)]).norm() < 1e-9 * (1.0 + dense[(i, j)].norm()));
            }
        }
    }

    #[test]
    fn adjoint_is_an_involution(p in polynomial()) {
        prop_assert_eq!(p.adjoint().adjoint(), p);
    }

    #[test]
    fn adjoint_reverses_products(p in polynomial(), q in polynomial()) {
        let lhs = p.multiply(&q).unwrap().adjoint();
        let rhs = q.adjoint().multiply(&p.adjoint()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn commutator_is_antisymmetric(p in polynomial(), q in polynomial()) {
        let pq = p.commutator(&q).unwrap();
        let qp = q.commutator(&p).unwrap();
        prop_assert!(pq.add(&qp).unwrap().is_zero());
    }

    #[test]
    fn jacobi_identity(p in polynomial(), q in polynomial(), r in polynomial()) {
        let t1 = p.commutator(&q.commutator(&r).unwrap()).unwrap();
        let t2 = q.commutator(&r.commutator(&p).unwrap()).unwrap();
        let t3 = r.commutator(&p.commutator(&q).unwrap()).unwrap();
        prop_assert!(t1.add(&t2).unwrap().add(&t3).unwrap().is_zero());
    }

    #[test]
    fn multiplication_is_bilinear(p in polynomial(), q in polynomial(), r in polynomial(), c in coeff()) {
        let lhs = p.add(&q.scale(&c)).unwrap().multiply(&r).unwrap();
        let rhs = p.multiply(&r).unwrap().add(&q.multiply(&r).unwrap().scale(&c)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn multiplication_is_associative(p in polynomial(), q in polynomial(), r in polynomial()) {
        let lhs = p.multiply(&q).unwrap().multiply(&r).unwrap();
        let rhs = p.multiply(&q.multiply(&r).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn grades_add_under_multiplication((l, r) in bounded_pair()) {
        let product = normal_order_product(&l, &r, 4).unwrap();
        prop_assert!(!product.is_zero());
        for (key, _) in product.terms() {
            prop_assert_eq!(key.grade, l.grade() + r.grade());
        }
        let truncated = normal_order_product(&l, &r, 0).unwrap();
        prop_assert_eq!(truncated.is_zero(), l.grade() + r.grade() > 0);
    }

    #[test]
    fn display_is_deterministic_and_parses_back(p in polynomial()) {
        let text = p.to_string();
        prop_assert_eq!(&text, &p.clone().to_string());
        prop_assert_eq!(OperatorPolynomial::parse(&text, MODES, ORDER).unwrap(), p);
    }
}
