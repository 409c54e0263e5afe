use approx::assert_relative_eq;
use cavmem_core::model::*;
use proptest::prelude::*;

proptest! {
    #[test]
    fn nonlinear_shift_ratios(p in 0.0..=MAX_PARTICIPATION) {
        let params = DeviceParams::default();
        let r = derived_rates(&params, Participation::new(p).unwrap(), Regime::Dispersive);
        if p > 0.0 {
            prop_assert!((r.chi_prime / r.chi - p).abs() <= 1e-15 * p.max(1.0));
            prop_assert!((4.0 * r.kerr_a / r.chi_prime - 1.0).abs() < 1e-14);
        }
        for v in [r.chi, r.chi_prime, r.kerr_a, r.g_sb, r.g_bs, r.kappa_gamma, r.kappa_gamma_phi, r.gamma_delta] {
            prop_assert!(v >= 0.0);
        }
    }

    #[test]
    fn rates_scale_with_transmon_decay(p in 1e-6..=MAX_PARTICIPATION, factor in 0.1..10.0f64) {
        let base = DeviceParams::default();
        let scaled = DeviceParams { gamma: base.gamma * factor, ..base };
        let p = Participation::new(p).unwrap();
        let a = derived_rates(&base, p, Regime::Dispersive);
        let b = derived_rates(&scaled, p, Regime::Dispersive);
        prop_assert!((b.kappa_gamma / a.kappa_gamma - factor).abs() < 1e-12 * factor);
        prop_assert!((b.thermal_jump_dephasing / a.thermal_jump_dephasing - factor).abs() < 1e-12 * factor);
        prop_assert_eq!(a.chi, b.chi);
    }

    #[test]
    fn resonant_decay_ignores_participation_and_loss(p in 0.0..=MAX_PARTICIPATION, loss in 1.0..20.0f64) {
        let base = DeviceParams::default();
        let lossy = DeviceParams { loss_factor: loss, ..base };
        let a = derived_rates(&base, Participation::new(p).unwrap(), Regime::Resonant);
        let b = derived_rates(&lossy, Participation::max(), Regime::Resonant);
        prop_assert_eq!(a.kappa_gamma, b.kappa_gamma);
    }
}

#[test]
fn quartic_coefficient_of_table_kerr() {
    assert_relative_eq!(kerr_from_quartic(angular(-200e6 / 12.0)), angular(200e6), max_relative = 1e-12);
    assert_eq!(kerr_from_quartic(0.0), 0.0);
    assert!(kerr_from_quartic(1.0) < 0.0);
}

#[test]
fn config_round_trip_rejects_unknown_keys() {
    let c = Config::from_toml("[cavity]\nt1 = 0.5\n").unwrap();
    assert_relative_eq!(c.device_params().unwrap().kappa, 2.0, max_relative = 1e-12);
    assert!(Config::from_toml("[cavity]\nlifetime = 0.5\n").is_err());
}
