use hoa_core::algebra::ModeId;
use hoa_core::heisenberg::{interaction_hamiltonian, Preset};
use hoa_core::oracle::{
    materialize, InitialMode, Observable, OracleError, OracleSession, TruncationSpec, Window,
};
use hoa_core::statistics::{hoa_d, NumericPoint, ProductState};
use num_complex::Complex64;

fn pump(alpha: f64) -> Vec<InitialMode> {
    vec![InitialMode::Coherent(Complex64::new(alpha, 0.0)), InitialMode::Vacuum, InitialMode::Vacuum]
}

fn sixwave_session(alpha: f64, g: f64) -> OracleSession {
    let spec = Preset::SixWave321.spec();
    let modes = pump(alpha);
    let trunc = TruncationSpec::default_for(&spec, &modes, 2).unwrap();
    OracleSession::new(&spec, &modes, &trunc, g).unwrap()
}

#[test]
fn materialized_hamiltonians_are_hermitian() {
    for preset in Preset::ALL {
        let spec = preset.spec();
        let trunc = TruncationSpec::new(vec![6; spec.mode_count()]).unwrap();
        let h = materialize(&interaction_hamiltonian(&spec, 1), &trunc, 0.7).unwrap();
        assert!(h.hermiticity_deviation() < 1e-12, "{}", preset.name());
    }
}

#[test]
fn evolution_preserves_the_norm() {
    let session = sixwave_session(1.0, 1.0);
    for k in 0..=10 {
        let t = k as f64 * 1e-4;
        let psi = session.state_at(t).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-10, "t = {t}: {}", psi.norm());
    }
    // far outside the short-time window as well
    assert!((session.state_at(3.0).unwrap().norm() - 1.0).abs() < 1e-10);
}

#[test]
fn conserved_combinations_do_not_drift() {
    let g = 2.0;
    let session = sixwave_session(1.0, g);
    let value = |t: f64, w: [f64; 3]| {
        let psi = session.state_at(t).unwrap();
        (0..3).map(|k| w[k] * psi.factorial_moment(k, 1)).sum::<f64>()
    };
    for w in [[2.0, 3.0, 0.0], [1.0, 0.0, 3.0]] {
        let q0 = value(0.0, w);
        for k in 1..=10 {
            let t = k as f64 * 1e-4 / g;
            let q = value(t, w);
            assert!(((q - q0) / q0).abs() < 1e-9, "{w:?} at t = {t}: {q} vs {q0}");
        }
    }
}

#[test]
fn pump_depletion_feeds_the_other_modes() {
    let session = sixwave_session(1.0, 1.0);
    let w = Window::default();
    let c = |mode, obs| session.leading_coefficient(ModeId(mode), obs, &w).unwrap().coefficient;
    let n = Observable::FactorialMoment(1);
    assert!((c(0, n) / -6.0 - 1.0).abs() < 1e-3);
    assert!((c(1, n) / 4.0 - 1.0).abs() < 1e-3);
    assert!((c(2, n) / 2.0 - 1.0).abs() < 1e-3);
}

#[test]
fn leading_coefficients_match_symbolic_series() {
    let spec = Preset::SixWave321.spec();
    let state = ProductState::coherent_in(ModeId(0), 3);
    for alpha in [0.5, 1.0] {
        let session = sixwave_session(alpha, 1.0);
        let point = NumericPoint::new(1.0).with("α", Complex64::new(alpha, 0.0));
        for (mode, l) in [(0, 1), (0, 2), (1, 1)] {
            let d = hoa_d(&spec, ModeId(mode), l, &state, 2).unwrap();
            let symbolic = d.coefficient_value(2, &point).unwrap().re;
            let est = session.leading_coefficient(ModeId(mode), Observable::HoaD(l), &Window::default()).unwrap();
            assert!((est.coefficient / symbolic - 1.0).abs() < 0.01, "α={alpha} mode {mode} l={l}: {} vs {symbolic}", est.coefficient);
        }
    }
}

#[test]
fn doubling_the_pump_truncation_is_harmless() {
    let spec = Preset::SixWave321.spec();
    let modes = pump(1.0);
    let base = TruncationSpec::default_for(&spec, &modes, 2).unwrap();
    let wide = base.with_mode_dim(0, base.dims()[0] * 2).unwrap();
    let d = |trunc: &TruncationSpec| {
        OracleSession::new(&spec, &modes, trunc, 1.0).unwrap().numeric_d(ModeId(0), 1, 1e-3).unwrap()
    };
    let (a, b) = (d(&base), d(&wide));
    assert!(((a - b) / b).abs() < 1e-3, "{a} vs {b}");
}

#[test]
fn window_too_wide_is_reported() {
    let session = sixwave_session(1.0, 1.0);
    let w = Window { gt1: 0.1, gt2: 0.3, ..Window::default() };
    let err = session.leading_coefficient(ModeId(0), Observable::HoaD(1), &w).unwrap_err();
    assert!(matches!(err, OracleError::WindowTooLarge { .. }), "{err}");
}

#[test]
fn fock_input_is_handled() {
    // a single pump photon cannot drive A†³: nothing happens
    let spec = Preset::SixWave321.spec();
    let modes = vec![InitialMode::Fock(1), InitialMode::Vacuum, InitialMode::Vacuum];
    let trunc = TruncationSpec::default_for(&spec, &modes, 2).unwrap();
    let session = OracleSession::new(&spec, &modes, &trunc, 1.0).unwrap();
    assert!((session.value_at(ModeId(0), Observable::FactorialMoment(1), 0.5).unwrap() - 1.0).abs() < 1e-12);
}
