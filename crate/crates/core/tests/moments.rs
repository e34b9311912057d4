use hoa_core::algebra::ModeId;
use hoa_core::heisenberg::{interaction_hamiltonian, Preset};
use hoa_core::oracle::{initial_modes, OracleSession, TruncationSpec};
use hoa_core::statistics::{
    ba_an_a, classify, factorial_moments, hoa_d, hoa_d_with, lee_r, Classification, ExpectationSeries, NumericPoint,
    ProductState,
};
use num_complex::Complex64;

fn alpha(terms: &[(i64, u32, &[u32])]) -> ExpectationSeries {
    ExpectationSeries::from_modulus_terms(terms, vec!["α".into()], 2)
}

fn sixwave_pump_moments(k_max: u32) -> Vec<ExpectationSeries> {
    let spec = Preset::SixWave321.spec();
    let h = interaction_hamiltonian(&spec, 2);
    factorial_moments(&h, ModeId(0), k_max, &ProductState::coherent_in(ModeId(0), 3), 2).unwrap()
}

#[test]
fn pump_mean_photon_number() {
    let m = sixwave_pump_moments(1);
    assert_eq!(m[1], alpha(&[(1, 0, &[1]), (-6, 2, &[3])]));
    assert_eq!(m[1].pretty(), "|α|² − 6·(gt)²·|α|⁶");
}

#[test]
fn pump_second_factorial_moment() {
    let m = sixwave_pump_moments(2);
    assert_eq!(m[2], alpha(&[(1, 0, &[2]), (-12, 2, &[3]), (-12, 2, &[4])]));
}

#[test]
fn pump_third_factorial_moment() {
    let m = sixwave_pump_moments(3);
    assert_eq!(m[3], alpha(&[(1, 0, &[3]), (-12, 2, &[3]), (-36, 2, &[4]), (-18, 2, &[5])]));
}

#[test]
fn pump_antibunching_series() {
    let spec = Preset::SixWave321.spec();
    let state = ProductState::coherent_in(ModeId(0), 3);
    let d1 = hoa_d(&spec, ModeId(0), 1, &state, 2).unwrap();
    let d2 = hoa_d(&spec, ModeId(0), 2, &state, 2).unwrap();
    assert_eq!(d1.pretty(), "−12·(gt)²·|α|⁶");
    assert_eq!(d2.pretty(), "−12·(gt)²·(|α|⁶ + 3·|α|⁸)");
}

#[test]
fn manley_rowe_sum_rule_in_mean_photon_numbers() {
    let spec = Preset::SixWave321.spec();
    let h = interaction_hamiltonian(&spec, 2);
    let state = ProductState::coherent_in(ModeId(0), 3);
    let n = |mode| factorial_moments(&h, ModeId(mode), 1, &state, 2).unwrap().remove(1);
    let (n_a, n_b, n_c) = (n(0), n(1), n(2));
    assert_eq!(n_b, alpha(&[(4, 2, &[3])]));
    assert_eq!(n_c, alpha(&[(2, 2, &[3])]));

    let two = hoa_core::algebra::GaussianRational::from_int(2);
    let three = hoa_core::algebra::GaussianRational::from_int(3);
    // 2·(−6) + 3·(+4) = 0 at grade 2
    let total = n_a.scale(&two).add(&n_b.scale(&three)).unwrap();
    assert_eq!(total, alpha(&[(2, 0, &[1])]));
    let total_c = n_a.add(&n_c.scale(&three)).unwrap();
    assert_eq!(total_c, alpha(&[(1, 0, &[1])]));
}

#[test]
fn all_antibunching_series_are_real() {
    for preset in Preset::ALL {
        let spec = preset.spec().with_mode_count(3);
        for state_mode in 0..3 {
            let state = ProductState::coherent_in(ModeId(state_mode), 3);
            for mode in 0..3 {
                for l in 1..=2 {
                    let d = hoa_d(&spec, ModeId(mode), l, &state, 2).unwrap();
                    assert!(d.is_real() && d.is_self_conjugate(), "{} {mode} {l}: {d}", preset.name());
                }
            }
        }
    }
}

#[test]
fn zero_coupling_is_poissonian() {
    let h = hoa_core::algebra::OperatorPolynomial::zero(3, 2);
    for state_mode in 0..3 {
        let state = ProductState::coherent_in(ModeId(state_mode), 3);
        for mode in 0..3 {
            for l in 1..=3 {
                assert!(hoa_d_with(&h, ModeId(mode), l, &state, 2).unwrap().is_zero());
            }
        }
    }
}

#[test]
fn lee_and_ba_an_follow_the_sign_of_d() {
    let spec = Preset::SixWave321.spec();
    let state = ProductState::coherent_in(ModeId(0), 3);
    let point = NumericPoint::new(1e-3).with("α", Complex64::new(1.0, 0.0));
    for l in 1..=2 {
        let d = hoa_d(&spec, ModeId(0), l, &state, 2).unwrap();
        assert_eq!(classify(&d, &point).unwrap(), Classification::Antibunched);
        let r = lee_r(&spec, ModeId(0), l, 1, &state, &point, 2).unwrap();
        let a = ba_an_a(&spec, ModeId(0), l, &state, &point, 2).unwrap();
        assert!(r < 0.0 && a < 0.0, "l = {l}: R = {r}, A = {a}");
    }
    // d(1)/⟨N⟩² with ⟨N⟩ → 1: R(1,1) ≈ −12(gt)²
    let r = lee_r(&spec, ModeId(0), 1, 1, &state, &point, 2).unwrap();
    assert!((r / -1.2e-5 - 1.0).abs() < 1e-3, "R = {r}");
}

#[test]
fn lee_ratio_matches_oracle() {
    let spec = Preset::SixWave321.spec();
    let state = ProductState::coherent_in(ModeId(0), 3);
    let gt = 1e-3;
    let point = NumericPoint::new(gt).with("α", Complex64::new(1.0, 0.0));
    let modes = initial_modes(&state, &point).unwrap();
    let trunc = TruncationSpec::default_for(&spec, &modes, 2).unwrap();
    let session = OracleSession::new(&spec, &modes, &trunc, 1.0).unwrap();
    let psi = session.state_at(gt).unwrap();
    let n1 = psi.factorial_moment(0, 1);
    let n2 = psi.factorial_moment(0, 2);
    let r_numeric = n2 / (n1 * n1) - 1.0;
    let r_series = lee_r(&spec, ModeId(0), 1, 1, &state, &point, 2).unwrap();
    assert!((r_numeric / r_series - 1.0).abs() < 1e-3, "{r_numeric} vs {r_series}");
}
