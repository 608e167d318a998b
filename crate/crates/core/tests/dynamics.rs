use approx::assert_abs_diff_eq;
use cavcool::moments::sample_times;
use cavcool::{
    coherent_initial_state, cooling_time, integrate, numeric_steady_state, spectral_decomposition, steady_state_energy,
    Complex64, Dynamics, IntegratorSettings, ModelParams, MomentState,
};

fn cases() -> Vec<ModelParams> {
    [(2.0, 2.0, 0.125, 1.0), (1.0, 1.0, 0.1, 0.1), (1.0, 1.0, 0.1, 1.0), (1.0, 1.3, 0.2, 0.7)]
        .into_iter()
        .map(|(a, b, g, k)| ModelParams::new(a, b, g, k).unwrap())
        .collect()
}

#[test]
fn modal_expansion_reproduces_integrated_energy() {
    let y0 = coherent_initial_state(Complex64::new(1.5, -0.5), Complex64::new(0.2, 0.0));
    let times = sample_times(60.0, 0.5);
    let settings = IntegratorSettings { rel_tol: 1e-12, abs_tol: 1e-14, max_step: 0.05 };
    for p in cases() {
        for mode in [Dynamics::NonRwa, Dynamics::Rwa] {
            let modal = spectral_decomposition(&p, &y0, mode).unwrap();
            let traj = integrate(&p, &y0, &times, &settings, mode).unwrap();
            for (t, s) in traj.times.iter().zip(&traj.states) {
                assert_abs_diff_eq!(modal.energy_at(*t), p.nu * s.n_c, epsilon = 1e-8);
            }
        }
    }
}

#[test]
fn three_steady_state_routes_agree() {
    for p in cases() {
        let closed = steady_state_energy(&p).unwrap();
        let fixed_point = p.nu * numeric_steady_state(&p).unwrap().n_c;
        let t_end = 40.0 * cooling_time(&p, Dynamics::NonRwa).unwrap();
        let late = integrate(&p, &MomentState::vacuum(), &[0.0, t_end], &IntegratorSettings::default(), Dynamics::NonRwa)
            .unwrap();
        assert_abs_diff_eq!(fixed_point, closed, epsilon = 1e-12);
        assert_abs_diff_eq!(p.nu * late.last().unwrap().1.n_c, closed, epsilon = 1e-9);
    }
}

#[test]
fn excited_modes_set_the_cooling_time() {
    let p = ModelParams::new(1.0, 1.0, 0.1, 1.0).unwrap();
    let y0 = coherent_initial_state(Complex64::new(1.0, 0.0), Complex64::default());
    let modal = spectral_decomposition(&p, &y0, Dynamics::NonRwa).unwrap();
    assert_abs_diff_eq!(modal.cooling_time().unwrap(), cooling_time(&p, Dynamics::NonRwa).unwrap(), epsilon = 1e-9);
}
