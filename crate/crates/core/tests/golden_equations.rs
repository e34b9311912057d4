use hoa_core::algebra::{GaussianRational, ModeId, NormalMonomial, OperatorPolynomial};
use hoa_core::heisenberg::{evolve_mode, heisenberg_derivative, interaction_hamiltonian, weighted_number, Preset};

const MODES: usize = 3;

/// `prefactor · Σ c_i · ops_i` at one grade.
fn bracket(prefactor: GaussianRational, grade: u32, terms: &[(i64, &str)]) -> OperatorPolynomial {
    let monomials = terms.iter().map(|&(c, ops)| {
        let coeff = GaussianRational::from_int(c) * prefactor.clone();
        NormalMonomial::parse_operators(coeff, grade, MODES, ops).unwrap()
    });
    OperatorPolynomial::from_monomials(monomials, MODES, 2).unwrap()
}

fn op(ops: &str) -> OperatorPolynomial {
    bracket(GaussianRational::one(), 0, &[(1, ops)])
}

fn sum(parts: &[OperatorPolynomial]) -> OperatorPolynomial {
    parts.iter().fold(OperatorPolynomial::zero(MODES, 2), |acc, p| acc.add(p).unwrap())
}

fn sixwave() -> hoa_core::heisenberg::InteractionSpec {
    Preset::SixWave321.spec()
}

const A_BRACKET: [(i64, &str); 7] = [
    (6, "A† A^2 B†^2 B^2 C† C"),
    (6, "A B†^2 B^2 C† C"),
    (-4, "A†^2 A^3 B† B C† C"),
    (-2, "A†^2 A^3 C† C"),
    (-1, "A†^2 A^3 B†^2 B^2"),
    (-4, "A†^2 A^3 B† B"),
    (-2, "A†^2 A^3"),
];

#[test]
fn pump_first_derivative() {
    let h = interaction_hamiltonian(&sixwave(), 2);
    let a = OperatorPolynomial::annihilator(ModeId(0), MODES, 2).unwrap();
    let expected = bracket(GaussianRational::from_ints(0, -3), 1, &[(1, "A†^2 B^2 C")]);
    assert_eq!(heisenberg_derivative(&h, &a).unwrap(), expected);
}

#[test]
fn pump_second_derivative() {
    let h = interaction_hamiltonian(&sixwave(), 2);
    let a = OperatorPolynomial::annihilator(ModeId(0), MODES, 2).unwrap();
    let d1 = heisenberg_derivative(&h, &a).unwrap();
    let d2 = heisenberg_derivative(&h, &d1).unwrap();
    assert_eq!(d2, bracket(GaussianRational::from_int(3), 2, &A_BRACKET));
}

#[test]
fn pump_operator_series() {
    let ev = evolve_mode(&sixwave(), ModeId(0), 2).unwrap();
    let expected = sum(&[
        op("A"),
        bracket(GaussianRational::from_ints(0, -3), 1, &[(1, "A†^2 B^2 C")]),
        bracket(GaussianRational::ratio(3, 2), 2, &A_BRACKET),
    ]);
    assert_eq!(ev.series, expected);
    assert_eq!(
        ev.series.to_string(),
        concat!(
            "(1+0i)·A + (0-3i)·(gt)^1·A†^2 B^2 C + (9+0i)·(gt)^2·A B†^2 B^2 C† C ",
            "+ (9+0i)·(gt)^2·A† A^2 B†^2 B^2 C† C + (-3+0i)·(gt)^2·A†^2 A^3 ",
            "+ (-3+0i)·(gt)^2·A†^2 A^3 C† C + (-6+0i)·(gt)^2·A†^2 A^3 B† B ",
            "+ (-6+0i)·(gt)^2·A†^2 A^3 B† B C† C + (-3/2+0i)·(gt)^2·A†^2 A^3 B†^2 B^2",
        )
    );
}

#[test]
fn pump_adjoint_series() {
    let ev = evolve_mode(&sixwave(), ModeId(0), 2).unwrap();
    let expected = sum(&[
        op("A†"),
        bracket(GaussianRational::from_ints(0, 3), 1, &[(1, "A^2 B†^2 C†")]),
        bracket(
            GaussianRational::ratio(3, 2),
            2,
            &[
                (6, "A†^2 A B†^2 B^2 C† C"),
                (6, "A† B†^2 B^2 C† C"),
                (-4, "A†^3 A^2 B† B C† C"),
                (-2, "A†^3 A^2 C† C"),
                (-1, "A†^3 A^2 B†^2 B^2"),
                (-4, "A†^3 A^2 B† B"),
                (-2, "A†^3 A^2"),
            ],
        ),
    ]);
    assert_eq!(ev.series.adjoint(), expected);
}

#[test]
fn pump_number_operator() {
    let ev = evolve_mode(&sixwave(), ModeId(0), 2).unwrap();
    let expected = sum(&[
        op("A† A"),
        bracket(GaussianRational::from_ints(0, -3), 1, &[(1, "A†^3 B^2 C"), (-1, "A^3 B†^2 C†")]),
        bracket(
            GaussianRational::from_int(3),
            2,
            &[
                (9, "A†^2 A^2 B†^2 B^2 C† C"),
                (18, "A† A B†^2 B^2 C† C"),
                (6, "B†^2 B^2 C† C"),
                (-4, "A†^3 A^3 B† B C† C"),
                (-4, "A†^3 A^3 B† B"),
                (-2, "A†^3 A^3 C† C"),
                (-1, "A†^3 A^3 B†^2 B^2"),
                (-2, "A†^3 A^3"),
            ],
        ),
    ]);
    assert_eq!(ev.number_operator(), expected);
}

const B_BRACKET: [(i64, &str); 6] = [
    (1, "A†^3 A^3 B† B^2"),
    (2, "A†^3 A^3 B C† C"),
    (2, "A†^3 A^3 B"),
    (-9, "A†^2 A^2 B† B^2 C† C"),
    (-18, "A† A B† B^2 C† C"),
    (-6, "B† B^2 C† C"),
];

#[test]
fn stokes_derivatives_and_series() {
    let spec = sixwave();
    let h = interaction_hamiltonian(&spec, 2);
    let b = OperatorPolynomial::annihilator(ModeId(1), MODES, 2).unwrap();
    let d1 = heisenberg_derivative(&h, &b).unwrap();
    assert_eq!(d1, bracket(GaussianRational::from_ints(0, -2), 1, &[(1, "A^3 B† C†")]));
    let d2 = heisenberg_derivative(&h, &d1).unwrap();
    assert_eq!(d2, bracket(GaussianRational::from_int(2), 2, &B_BRACKET));

    let ev = evolve_mode(&spec, ModeId(1), 2).unwrap();
    let expected = sum(&[op("B"), d1, bracket(GaussianRational::one(), 2, &B_BRACKET)]);
    assert_eq!(ev.series, expected);
}

#[test]
fn stokes_number_operator() {
    let ev = evolve_mode(&sixwave(), ModeId(1), 2).unwrap();
    let expected = sum(&[
        op("B† B"),
        bracket(GaussianRational::from_ints(0, -2), 1, &[(1, "A^3 B†^2 C†"), (-1, "A†^3 B^2 C")]),
        bracket(
            GaussianRational::from_int(2),
            2,
            &[
                (1, "A†^3 A^3 B†^2 B^2"),
                (4, "A†^3 A^3 B† B C† C"),
                (4, "A†^3 A^3 B† B"),
                (2, "A†^3 A^3 C† C"),
                (-9, "A†^2 A^2 B†^2 B^2 C† C"),
                (-18, "A† A B†^2 B^2 C† C"),
                (-6, "B†^2 B^2 C† C"),
                (2, "A†^3 A^3"),
            ],
        ),
    ]);
    assert_eq!(ev.number_operator(), expected);
}

/// Signal-mode series as printed: the last four grade-2 terms lack the
/// trailing `C`.
fn printed_signal_series(restore_c: bool) -> OperatorPolynomial {
    let tail = if restore_c { " C" } else { "" };
    let t = |s: &str| format!("{s}{tail}");
    let (x1, x2, x3, x4) = (t("A†^3 A^3 B†^2 B^2"), t("A†^2 A^2 B†^2 B^2"), t("A† A B†^2 B^2"), t("B†^2 B^2"));
    sum(&[
        op("C"),
        bracket(GaussianRational::from_ints(0, -1), 1, &[(1, "A^3 B†^2")]),
        bracket(
            GaussianRational::ratio(1, 2),
            2,
            &[
                (1, "A†^3 A^3 B†^2 B^2 C"),
                (4, "A†^3 A^3 B† B C"),
                (2, "A†^3 A^3 C"),
                (-1, &x1),
                (-9, &x2),
                (-18, &x3),
                (-6, &x4),
            ],
        ),
    ])
}

#[test]
fn signal_series_with_missing_factor_restored() {
    let ev = evolve_mode(&sixwave(), ModeId(2), 2).unwrap();
    assert_eq!(ev.series, printed_signal_series(true));
}

#[test]
fn signal_series_as_printed_breaks_conservation() {
    let literal = printed_signal_series(false);
    let ev = evolve_mode(&sixwave(), ModeId(2), 2).unwrap();
    assert_ne!(ev.series, literal);

    // N_A + 3N_C must be constant; with the literal C(t) its grade-2 part is not.
    let n_a = evolve_mode(&sixwave(), ModeId(0), 2).unwrap().number_operator();
    let n_c_literal = literal.adjoint().multiply(&literal).unwrap();
    let n_c_engine = ev.number_operator();
    let three = GaussianRational::from_int(3);
    let engine_total = n_a.add(&n_c_engine.scale(&three)).unwrap();
    let literal_total = n_a.add(&n_c_literal.scale(&three)).unwrap();
    let initial = weighted_number(&[(ModeId(0), 1), (ModeId(2), 3)], MODES, 2).unwrap();
    assert_eq!(engine_total, initial);
    assert!(!literal_total.sub(&initial).unwrap().grade_part(2).is_zero());
}

#[test]
fn signal_number_operator_grade_two() {
    let ev = evolve_mode(&sixwave(), ModeId(2), 2).unwrap();
    let expected = bracket(
        GaussianRational::one(),
        2,
        &[
            (-6, "B†^2 B^2 C† C"),
            (-18, "A† A B†^2 B^2 C† C"),
            (-9, "A†^2 A^2 B†^2 B^2 C† C"),
            (2, "A†^3 A^3"),
            (2, "A†^3 A^3 C† C"),
            (4, "A†^3 A^3 B† B"),
            (4, "A†^3 A^3 B† B C† C"),
            (1, "A†^3 A^3 B†^2 B^2"),
        ],
    );
    assert_eq!(ev.number_operator().grade_part(2), expected);
}
