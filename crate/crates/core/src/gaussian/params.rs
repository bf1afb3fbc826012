use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;
/// Speed of light, m/s.
pub const C_LIGHT: f64 = 299_792_458.0;

/// Experimental parameters of the two-cavity membrane setup. Keys carry
/// their units; detunings are the effective ones.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptomechParams {
    pub mass_kg: f64,
    #[serde(rename = "temperature_K")]
    pub temperature_k: f64,
    pub cavity_length_a_m: f64,
    pub cavity_length_b_m: f64,
    pub finesse_a: f64,
    pub finesse_b: f64,
    pub wavelength_a_m: f64,
    pub wavelength_b_m: f64,
    #[serde(rename = "power_a_mW")]
    pub power_a_mw: f64,
    #[serde(rename = "power_b_mW")]
    pub power_b_mw: f64,
    pub detuning_a_rad_per_s: f64,
    pub detuning_b_rad_per_s: f64,
    pub omega_c_rad_per_s: f64,
    pub gamma_c_rad_per_s: f64,
}

impl OptomechParams {
    /// 145 ng membrane at 947 kHz, 0.3 K, 25 mm cavities of finesse 1.4e4
    /// driven at 1064 nm, `P_a = 100 mW`, `Δ_a = ω_c`, `Δ_b = -ω_c`, with the
    /// given `P_b`.
    pub fn fig4(power_b_mw: f64) -> Self {
        let omega_c = 2.0 * PI * 947e3;
        Self {
            mass_kg: 145e-12,
            temperature_k: 0.3,
            cavity_length_a_m: 25e-3,
            cavity_length_b_m: 25e-3,
            finesse_a: 1.4e4,
            finesse_b: 1.4e4,
            wavelength_a_m: 1064e-9,
            wavelength_b_m: 1064e-9,
            power_a_mw: 100.0,
            power_b_mw,
            detuning_a_rad_per_s: omega_c,
            detuning_b_rad_per_s: -omega_c,
            omega_c_rad_per_s: omega_c,
            gamma_c_rad_per_s: 2.0 * PI * 140.0,
        }
    }

    /// Positive lengths, finesses, wavelengths, mass, temperature and
    /// membrane rates; non-negative powers; finite detunings.
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("mass_kg", self.mass_kg),
            ("temperature_K", self.temperature_k),
            ("cavity_length_a_m", self.cavity_length_a_m),
            ("cavity_length_b_m", self.cavity_length_b_m),
            ("finesse_a", self.finesse_a),
            ("finesse_b", self.finesse_b),
            ("wavelength_a_m", self.wavelength_a_m),
            ("wavelength_b_m", self.wavelength_b_m),
            ("omega_c_rad_per_s", self.omega_c_rad_per_s),
            ("gamma_c_rad_per_s", self.gamma_c_rad_per_s),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
            }
        }
        for (name, v) in [("power_a_mW", self.power_a_mw), ("power_b_mW", self.power_b_mw)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} must be non-negative, got {v}")));
            }
        }
        for (name, v) in [
            ("detuning_a_rad_per_s", self.detuning_a_rad_per_s),
            ("detuning_b_rad_per_s", self.detuning_b_rad_per_s),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidArgument(format!("{name} must be finite")));
            }
        }
        Ok(())
    }

    /// Sets a field by its file key.
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        let slot = match key {
            "mass_kg" => &mut self.mass_kg,
            "temperature_K" => &mut self.temperature_k,
            "cavity_length_a_m" => &mut self.cavity_length_a_m,
            "cavity_length_b_m" => &mut self.cavity_length_b_m,
            "finesse_a" => &mut self.finesse_a,
            "finesse_b" => &mut self.finesse_b,
            "wavelength_a_m" => &mut self.wavelength_a_m,
            "wavelength_b_m" => &mut self.wavelength_b_m,
            "power_a_mW" => &mut self.power_a_mw,
            "power_b_mW" => &mut self.power_b_mw,
            "detuning_a_rad_per_s" => &mut self.detuning_a_rad_per_s,
            "detuning_b_rad_per_s" => &mut self.detuning_b_rad_per_s,
            "omega_c_rad_per_s" => &mut self.omega_c_rad_per_s,
            "gamma_c_rad_per_s" => &mut self.gamma_c_rad_per_s,
            _ => return Err(Error::InvalidArgument(format!("unknown parameter `{key}`"))),
        };
        *slot = value;
        Ok(())
    }
}

/// Quantities derived from [`OptomechParams`]; index 0 is cavity a, 1 is b.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptomechDerived {
    /// Cavity decay rates `πc / (2 F l)`, rad/s.
    pub kappa: [f64; 2],
    /// Driving strengths `|E| = sqrt(2 P κ / ħ ω_l)`, 1/s.
    pub e_abs: [f64; 2],
    /// Laser angular frequencies `2πc/λ`, rad/s.
    pub omega_l: [f64; 2],
    /// Single-photon couplings `(ω/l) sqrt(ħ / μ ω_c)`, rad/s.
    pub g0: [f64; 2],
    /// Thermal phonon number.
    pub n_bar: f64,
    /// Steady membrane displacement (dimensionless).
    pub q_s: f64,
    /// Steady intracavity amplitudes `|E| / sqrt(κ² + Δ²)`.
    pub alpha_s: [f64; 2],
    /// Effective couplings `sqrt(2) G0 α_s`, rad/s.
    pub g: [f64; 2],
    /// Effective detunings, rad/s.
    pub detuning: [f64; 2],
    /// Bare detunings `Δ_0a = Δ_a + G0_a q_s`, `Δ_0b = Δ_b - G0_b q_s`, rad/s.
    pub bare_detuning: [f64; 2],
}

impl OptomechDerived {
    /// Largest relative residual of the steady-state relations.
    pub fn residual(&self, omega_c: f64) -> f64 {
        let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
        let mut r = 0.0f64;
        for j in 0..2 {
            let amp = self.e_abs[j] / (self.kappa[j].powi(2) + self.detuning[j].powi(2)).sqrt();
            if self.e_abs[j] > 0.0 {
                r = r.max(rel(self.alpha_s[j], amp));
            }
        }
        let q = (self.g0[0] * self.alpha_s[0].powi(2) - self.g0[1] * self.alpha_s[1].powi(2)) / omega_c;
        if q != 0.0 {
            r = r.max(rel(self.q_s, q));
        }
        let da = self.bare_detuning[0] - self.g0[0] * self.q_s;
        let db = self.bare_detuning[1] + self.g0[1] * self.q_s;
        if self.detuning[0] != 0.0 {
            r = r.max(rel(da, self.detuning[0]));
        }
        if self.detuning[1] != 0.0 {
            r = r.max(rel(db, self.detuning[1]));
        }
        r
    }
}

pub fn derive_params(p: &OptomechParams) -> Result<OptomechDerived> {
    p.validate()?;
    let length = [p.cavity_length_a_m, p.cavity_length_b_m];
    let finesse = [p.finesse_a, p.finesse_b];
    let wavelength = [p.wavelength_a_m, p.wavelength_b_m];
    let power = [p.power_a_mw * 1e-3, p.power_b_mw * 1e-3];
    let detuning = [p.detuning_a_rad_per_s, p.detuning_b_rad_per_s];
    let wc = p.omega_c_rad_per_s;

    let kappa = [0, 1].map(|j| PI * C_LIGHT / (2.0 * finesse[j] * length[j]));
    let omega_l = [0, 1].map(|j| 2.0 * PI * C_LIGHT / wavelength[j]);
    let e_abs = [0, 1].map(|j| (2.0 * power[j] * kappa[j] / (HBAR * omega_l[j])).sqrt());
    let g0 = [0, 1].map(|j| omega_l[j] / length[j] * (HBAR / (p.mass_kg * wc)).sqrt());
    let n_bar = 1.0 / (HBAR * wc / (K_B * p.temperature_k)).exp_m1();
    let alpha_s = [0, 1].map(|j| e_abs[j] / (kappa[j].powi(2) + detuning[j].powi(2)).sqrt());
    let q_s = (g0[0] * alpha_s[0].powi(2) - g0[1] * alpha_s[1].powi(2)) / wc;
    let g = [0, 1].map(|j| 2f64.sqrt() * g0[j] * alpha_s[j]);
    let bare_detuning = [detuning[0] + g0[0] * q_s, detuning[1] - g0[1] * q_s];
    Ok(OptomechDerived {
        kappa,
        e_abs,
        omega_l,
        g0,
        n_bar,
        q_s,
        alpha_s,
        g,
        detuning,
        bare_detuning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fig4_decay_rate_and_phonon_number() {
        let d = derive_params(&OptomechParams::fig4(40.0)).unwrap();
        let kappa = PI * C_LIGHT / (2.0 * 1.4e4 * 0.025);
        assert!((d.kappa[0] - kappa).abs() / kappa < 1e-9);
        assert!((d.kappa[0] - 1.3455e6).abs() < 1e2);
        // kT / ħω_c - 1/2 to leading order.
        let x = HBAR * 2.0 * PI * 947e3 / (K_B * 0.3);
        assert!((d.n_bar - (1.0 / x - 0.5)).abs() < 1e-3);
        assert!((d.n_bar - 6600.3).abs() < 0.1, "{}", d.n_bar);
        assert!((d.g0[0] - 24.76).abs() < 0.01, "{}", d.g0[0]);
    }

    #[test]
    fn steady_state_relations_hold() {
        for pb in [0.0, 20.0, 40.0, 80.0] {
            let p = OptomechParams::fig4(pb);
            let d = derive_params(&p).unwrap();
            assert!(d.residual(p.omega_c_rad_per_s) < 1e-10);
            assert!(d.alpha_s.iter().all(|&a| a >= 0.0) && d.n_bar >= 0.0);
        }
    }

    #[test]
    fn zero_power_contributes_nothing() {
        let p = OptomechParams::fig4(0.0);
        let d = derive_params(&p).unwrap();
        assert_eq!(d.alpha_s[1], 0.0);
        assert_eq!(d.g[1], 0.0);
        let qa = d.g0[0] * d.alpha_s[0].powi(2) / p.omega_c_rad_per_s;
        assert!((d.q_s - qa).abs() <= 1e-12 * qa);
    }

    #[test]
    fn rejects_negative_mass_and_unknown_keys() {
        let mut p = OptomechParams::fig4(40.0);
        p.mass_kg = -1.0;
        assert!(derive_params(&p).is_err());
        assert!(p.set("mass_g", 1.0).is_err());
        p.set("mass_kg", 1e-10).unwrap();
        assert!(derive_params(&p).is_ok());
    }

    #[test]
    fn parameter_file_uses_unit_keys() {
        let json = serde_json::to_value(OptomechParams::fig4(40.0)).unwrap();
        assert_eq!(json["power_b_mW"], 40.0);
        assert!(json.get("temperature_K").is_some());
        let back: OptomechParams = serde_json::from_value(json).unwrap();
        assert_eq!(back, OptomechParams::fig4(40.0));
    }
}
