//! Transient entanglement in the two-cavity membrane setup. Any
//! cavity-cavity entanglement appears only once the membrane is entangled
//! with the cavities.

use nonclassicality::gaussian::{
    derive_params, optomech_dynamics, DynamicsConfig, OptomechParams, FIG4_POWERS_MW,
};

fn main() -> nonclassicality::Result<()> {
    let d = derive_params(&OptomechParams::fig4(40.0))?;
    println!(
        "kappa = {:.4e} rad/s, G0 = {:.2} rad/s, n_bar = {:.1}",
        d.kappa[0], d.g0[0], d.n_bar
    );
    for pb in FIG4_POWERS_MW {
        let s = optomech_dynamics(&OptomechParams::fig4(pb), &DynamicsConfig::default())?;
        let first = |e: &[f64]| e.iter().position(|&v| v > 1e-4).map(|i| s.t_omega_c[i]);
        println!(
            "P_b = {pb} mW: stable={} stop={:?} E_ab:c > 1e-4 from t = {:?}, E_a:b from {:?}",
            s.stable,
            s.stop_reason,
            first(&s.e_abc),
            first(&s.e_ab)
        );
        for i in (0..s.t_omega_c.len()).step_by(s.t_omega_c.len() / 6 + 1) {
            println!(
                "    t = {:>7.1}/w_c  E_a:b = {:.5}  E_ab:c = {:.5}",
                s.t_omega_c[i], s.e_ab[i], s.e_abc[i]
            );
        }
        if let Some(st) = s.steady {
            println!("    steady state  E_a:b = {:.5}  E_ab:c = {:.5}", st.e_ab, st.e_abc);
        }
    }
    Ok(())
}
