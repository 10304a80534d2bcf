use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use super::tdl::complex_gaussian;
use super::{doppler_phase, pathloss_db};
use crate::config::{square_side, SimConfig};
use crate::{Error, Result};

/// Response of a `m_side x m_side` uniform square array, ordered row-major in
/// `(u, u~)`: entry `u * m_side + u~` is
/// `exp(j 2pi d / lambda (u sin(az) sin(el) + u~ cos(el))) / sqrt(M)`.
pub fn array_response(az: f64, el: f64, d: f64, wavelength: f64, m_side: usize) -> Vec<Complex64> {
    let m = (m_side * m_side) as f64;
    let k = 2.0 * PI * d / wavelength;
    let (du, dv) = (az.sin() * el.sin(), el.cos());
    let mut out = Vec::with_capacity(m_side * m_side);
    for u in 0..m_side {
        for v in 0..m_side {
            out.push(Complex64::from_polar(
                1.0 / m.sqrt(),
                k * (u as f64 * du + v as f64 * dv),
            ));
        }
    }
    out
}

/// One dominant path on each of the UE-RIS and RIS-gNB links, seen through
/// the sub-surface grid. The direct link is absent.
#[derive(Debug, Clone, PartialEq)]
pub struct SinglePathChannel {
    /// UE-RIS dominant path gain.
    pub alpha0: Complex64,
    /// RIS-gNB dominant path gain.
    pub rho0: Complex64,
    pub aoa_az: f64,
    pub aoa_el: f64,
    pub aod_az: f64,
    pub aod_el: f64,
    pub d_spacing: f64,
    pub wavelength: f64,
    pub m_side: usize,
    /// Path counts (P, Q) of the underlying multi-path model.
    pub path_counts: (usize, usize),
    /// Traveling angle of the UE-RIS path relative to the UE heading.
    pub doppler_angle: f64,
}

impl SinglePathChannel {
    pub fn n_subsurfaces(&self) -> usize {
        self.m_side * self.m_side
    }

    /// Common gain `A`. The RIS-gNB gain enters conjugated, as the cascade is
    /// `conj(h_RG) ∘ h_UR`.
    pub fn gain(&self) -> Complex64 {
        let (p, q) = self.path_counts;
        self.alpha0 * self.rho0.conj() / ((p * q) as f64).sqrt()
    }

    /// Phase step along `u`.
    pub fn a(&self) -> Complex64 {
        let k = 2.0 * PI * self.d_spacing / self.wavelength;
        Complex64::from_polar(
            1.0,
            k * (self.aoa_az.sin() * self.aoa_el.sin() - self.aod_az.sin() * self.aod_el.sin()),
        )
    }

    /// Phase step along `u~`.
    pub fn b(&self) -> Complex64 {
        let k = 2.0 * PI * self.d_spacing / self.wavelength;
        Complex64::from_polar(1.0, k * (self.aoa_el.cos() - self.aod_el.cos()))
    }

    /// `A a^u b^u~` for every sub-surface, row-major in `(u, u~)`.
    pub fn cascade(&self) -> Vec<Complex64> {
        let (gain, a, b) = (self.gain(), self.a(), self.b());
        let mut out = Vec::with_capacity(self.n_subsurfaces());
        for u in 0..self.m_side {
            for v in 0..self.m_side {
                out.push(gain * a.powi(u as i32) * b.powi(v as i32));
            }
        }
        out
    }

    /// Same cascade built from the two array response vectors.
    pub fn cascade_from_arrays(&self) -> Vec<Complex64> {
        let m = self.n_subsurfaces() as f64;
        let (p, q) = self.path_counts;
        let ur = array_response(
            self.aoa_az,
            self.aoa_el,
            self.d_spacing,
            self.wavelength,
            self.m_side,
        );
        let rg = array_response(
            self.aod_az,
            self.aod_el,
            self.d_spacing,
            self.wavelength,
            self.m_side,
        );
        let s_ur = (m / p as f64).sqrt() * self.alpha0;
        let s_rg = (m / q as f64).sqrt() * self.rho0;
        ur.iter()
            .zip(&rg)
            .map(|(x, y)| (s_rg * y).conj() * (s_ur * x))
            .collect()
    }

    /// Cascade `dt` seconds after the reference instant.
    pub fn cascade_at(&self, v: f64, dt: f64) -> Vec<Complex64> {
        let rot = Complex64::from_polar(
            1.0,
            doppler_phase(v, dt, self.doppler_angle, self.wavelength),
        );
        self.cascade().into_iter().map(|c| c * rot).collect()
    }
}

/// Draws a single-path realisation for `cfg` (M must be a perfect square)
/// and returns it with its cascade vector.
///
/// Gains are Rayleigh with the link path loss applied; the RIS-gNB gain also
/// carries the `(N_R / M)^2` sub-surface aggregation gain. Element spacing is
/// a quarter wavelength.
pub fn gen_single_path<R: Rng + ?Sized>(
    cfg: &SimConfig,
    rng: &mut R,
) -> Result<(SinglePathChannel, Vec<Complex64>)> {
    let m = cfg.n_subsurfaces;
    let m_side = square_side(m).ok_or(Error::NonSquare(m))?;
    let g = &cfg.geometry;
    let aggregation_db = 20.0 * ((cfg.n_ris_elements / m) as f64).log10();
    let ur_amp = crate::db_to_linear(-pathloss_db(g.d_ur_m, g.ple_ur, g.fc_hz)).sqrt();
    let rg_amp =
        crate::db_to_linear(aggregation_db - pathloss_db(g.d_rg_m, g.ple_rg, g.fc_hz)).sqrt();

    let mut angle = || rng.random_range(0.0..2.0 * PI);
    let (aoa_az, aoa_el, aod_az, aod_el, doppler_angle) =
        (angle(), angle(), angle(), angle(), angle());
    let ch = SinglePathChannel {
        alpha0: complex_gaussian(rng) * ur_amp,
        rho0: complex_gaussian(rng) * rg_amp,
        aoa_az,
        aoa_el,
        aod_az,
        aod_el,
        d_spacing: g.wavelength_m / 4.0,
        wavelength: g.wavelength_m,
        m_side,
        path_counts: (1, 1),
        doppler_angle,
    };
    let cascade = ch.cascade();
    Ok((ch, cascade))
}
