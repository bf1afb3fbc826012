//! Stability map over drive power and detuning of cavity b.
//! `#` marks parameters without a steady state.

use nonclassicality::gaussian::{sweep_steady_state, OptomechParams, SweepGrid};

fn main() -> nonclassicality::Result<()> {
    let table = sweep_steady_state(&OptomechParams::fig4(0.0), &SweepGrid::fig5())?;
    let nd = table.grid.delta_b_over_omega_c.len();
    println!("Delta_b/w_c: -2 -> 2 left to right; P_b: 100 mW at the top");
    for (row, pb) in table.grid.power_b_mw.iter().enumerate().rev() {
        let line: String = table.points[row * nd..(row + 1) * nd]
            .iter()
            .map(|p| match p.e_ab {
                None => '#',
                Some(e) if e > 0.05 => 'o',
                Some(e) if e > 0.0 => '.',
                Some(_) => ' ',
            })
            .collect();
        println!("{pb:>6.1} |{line}|");
    }
    println!(
        "unstable {} of {} in {} region(s); max E_a:b = {:.4}, max E_ab:c = {:.1e}",
        table.unstable_count(),
        table.points.len(),
        table.unstable_components(),
        table.max_e_ab(),
        table.max_e_abc()
    );
    Ok(())
}
