//! Physical constants and the dimensionless frames the fields are computed in.
//!
//! Photon and gravitational-wave potentials use lengths in units of `c/Ω`
//! and times in `1/Ω`. With the mean frequency defined as `Ω = c/λ` the
//! length unit is exactly one wavelength. Electron potentials use lengths in
//! `1/q` and times in `1/(qc)` with `q = γ/(b·ƛ)`.

use serde::{Deserialize, Serialize};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Vacuum permittivity, F/m.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;
/// Vacuum permeability, H/m.
pub const MU_0: f64 = 1.256_637_062_12e-6;
/// Reduced Compton wavelength of the electron, m.
pub const REDUCED_COMPTON_WAVELENGTH: f64 = 3.86e-13;

/// Mean frequency for a wavelength under the `Ω = c/λ` convention.
pub fn omega_from_wavelength(wavelength: f64) -> f64 {
    SPEED_OF_LIGHT / wavelength
}

pub fn wavelength_from_omega(omega: f64) -> f64 {
    SPEED_OF_LIGHT / omega
}

/// Lorentz factor to longitudinal momentum in units of `m_e c`.
pub fn momentum_from_gamma(gamma: f64) -> f64 {
    (gamma * gamma - 1.0).max(0.0).sqrt()
}

/// Inverse length scale of the electron packet, `q = γ/(b·ƛ)`, in 1/m.
pub fn electron_q(b: f64, gamma: f64) -> f64 {
    gamma / (b * REDUCED_COMPTON_WAVELENGTH)
}

/// The SI size of one frame unit of length and time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    /// Metres per frame length unit.
    pub length: f64,
    /// Seconds per frame time unit.
    pub time: f64,
}

impl Frame {
    /// Frame of a photon or GW potential with the given wavelength (m).
    pub fn wave(wavelength: f64) -> Self {
        Frame {
            length: wavelength,
            time: wavelength / SPEED_OF_LIGHT,
        }
    }

    /// Frame of an electron packet.
    pub fn electron(b: f64, gamma: f64) -> Self {
        let q = electron_q(b, gamma);
        Frame {
            length: 1.0 / q,
            time: 1.0 / (q * SPEED_OF_LIGHT),
        }
    }

    pub fn to_si_length(&self, x: f64) -> f64 {
        x * self.length
    }

    pub fn from_si_length(&self, x: f64) -> f64 {
        x / self.length
    }

    pub fn to_si_time(&self, t: f64) -> f64 {
        t * self.time
    }

    pub fn from_si_time(&self, t: f64) -> f64 {
        t / self.time
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn wave_frame_unit_is_one_wavelength() {
        let f = Frame::wave(800e-9);
        assert_relative_eq!(f.to_si_length(1.0), 800e-9);
        assert_relative_eq!(f.length / f.time, SPEED_OF_LIGHT);
        assert_relative_eq!(wavelength_from_omega(omega_from_wavelength(1e-6)), 1e-6);
    }

    #[test]
    fn gw_wavelength_at_150_hz() {
        assert_relative_eq!(wavelength_from_omega(150.0), 1.998_616_4e6, max_relative = 1e-6);
    }

    #[test]
    fn electron_frame() {
        let f = Frame::electron(1500.0, 1.0);
        assert_relative_eq!(f.length, 1500.0 * REDUCED_COMPTON_WAVELENGTH);
        assert_relative_eq!(f.from_si_length(f.to_si_length(3.5)), 3.5);
        assert_relative_eq!(momentum_from_gamma(1.0), 0.0);
        assert_relative_eq!(momentum_from_gamma(1.25), 0.75);
    }

    #[test]
    fn vacuum_impedance_relation() {
        assert_relative_eq!(
            EPSILON_0 * MU_0 * SPEED_OF_LIGHT.powi(2),
            1.0,
            max_relative = 1e-9
        );
    }
}
