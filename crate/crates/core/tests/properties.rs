use nswave::config::{parse_config, render_config};
use nswave::diagnostics::quadratic_identity_residual;
use nswave::euler_waves::riemann_intermediate;
use nswave::{ApproxRarefaction, GasParams, RunConfig, WaveConfig};
use proptest::prelude::*;

proptest! {
    #[test]
    fn relative_quantities_are_nonnegative(gamma in 1.05f64..3.0, v in 0.2f64..5.0, w in 0.2f64..5.0) {
        let g = GasParams::new(gamma).unwrap();
        prop_assert!(g.relative_p(v, w) >= 0.0);
        prop_assert!(g.relative_q(v, w) >= 0.0);
        prop_assert_eq!(g.relative_q(w, w), 0.0);
    }

    #[test]
    fn riemann_solver_inverts_the_wave_curves(
        gamma in 1.2f64..2.5,
        v_plus in 0.5f64..2.0,
        u_plus in -1.0f64..1.0,
        shock in 0.0f64..0.3,
        rare in 0.0f64..0.3,
    ) {
        let v_m = v_plus * (1.0 - shock);
        let v_minus = v_m * (1.0 - rare);
        let g = GasParams::new(gamma).unwrap();
        let w = WaveConfig::forward(g, v_plus, u_plus, v_m, v_minus).unwrap();
        let (vm, um) = riemann_intermediate(w.v_minus, w.u_minus, v_plus, u_plus, &g).unwrap();
        prop_assert!((vm - v_m).abs() < 1e-9, "v_m {} recovered as {}", v_m, vm);
        prop_assert!((um - w.u_m).abs() < 1e-8);
    }

    #[test]
    fn burgers_smoothing_is_monotone(s in 0.0f64..200.0, x in -300.0f64..100.0) {
        let w = WaveConfig::forward(GasParams::new(5.0 / 3.0).unwrap(), 1.0, 0.0, 0.9, 0.8).unwrap();
        let rare = ApproxRarefaction::new(&w);
        let (value, slope) = rare.burgers_w(s, x);
        prop_assert!(slope >= 0.0);
        prop_assert!(value >= rare.w_minus() - 1e-12 && value <= rare.w_m() + 1e-12);
    }

    #[test]
    fn quadratic_completion_holds(z in -10.0f64..10.0, w in -10.0f64..10.0, sigma in 0.5f64..2.0) {
        let scale = 1.0 + z * z + w * w;
        prop_assert!(quadratic_identity_residual(z, w, sigma).unwrap() <= 1e-12 * scale);
    }

    #[test]
    fn rendered_config_parses_back(
        gamma in 1.1f64..3.0,
        v_m in 0.85f64..0.99,
        n in 16usize..10_000,
        t_end in 0.0f64..500.0,
        amp in -0.05f64..0.05,
    ) {
        let mut cfg = RunConfig { gamma, v_m, n_cells: n, t_end, ..RunConfig::default() };
        cfg.perturbation.bumps[0].amplitude = amp;
        let back = parse_config(&render_config(&cfg)).unwrap();
        prop_assert_eq!(back, cfg);
    }
}
