use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

/// Tapped-delay-line impulse response with one Doppler traveling angle per tap.
///
/// Tap `k` sits at delay `k` samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Cir {
    pub taps: Vec<Complex64>,
    /// Traveling angle of each path relative to the UE heading, radians.
    pub doppler_angles: Vec<f64>,
}

impl Cir {
    pub fn new(taps: Vec<Complex64>, doppler_angles: Vec<f64>) -> Self {
        assert_eq!(taps.len(), doppler_angles.len(), "one angle per tap");
        Cir {
            taps,
            doppler_angles,
        }
    }

    pub fn len(&self) -> usize {
        self.taps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taps.is_empty()
    }

    pub fn power(&self) -> f64 {
        self.taps.iter().map(|t| t.norm_sqr()).sum()
    }
}

/// Circularly-symmetric complex Gaussian sample with unit variance.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Draws an `l`-tap channel whose non-dominant taps carry `eta` times the
/// power of the dominant tap 0, with total mean power `10^(-pathloss_db/10)`.
///
/// Tap 0 has a deterministic magnitude and uniform phase; taps `1..l` are
/// i.i.d. Rayleigh, sharing the non-dominant power equally.
pub fn gen_tdl_cir<R: Rng + ?Sized>(l: usize, eta: f64, pathloss_db: f64, rng: &mut R) -> Cir {
    assert!(l >= 1 && eta >= 0.0);
    let gain = crate::db_to_linear(-pathloss_db);
    let dominant_power = gain / (1.0 + eta);
    let other_power = if l > 1 {
        gain * eta / ((1.0 + eta) * (l - 1) as f64)
    } else {
        0.0
    };

    let mut taps = Vec::with_capacity(l);
    taps.push(Complex64::from_polar(
        dominant_power.sqrt(),
        rng.random_range(0.0..2.0 * PI),
    ));
    for _ in 1..l {
        taps.push(complex_gaussian(rng) * other_power.sqrt());
    }
    let doppler_angles = (0..l).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
    Cir {
        taps,
        doppler_angles,
    }
}

/// Phase advance `2 pi v dt cos(theta) / lambda` of one path.
pub fn doppler_phase(v: f64, dt: f64, theta: f64, wavelength: f64) -> f64 {
    2.0 * PI * v * dt * theta.cos() / wavelength
}

/// Rotates every tap by its own Doppler phase over `dt` seconds.
pub fn doppler_evolve(cir: &Cir, v: f64, dt: f64, wavelength: f64) -> Cir {
    let taps = cir
        .taps
        .iter()
        .zip(&cir.doppler_angles)
        .map(|(&t, &theta)| t * Complex64::from_polar(1.0, doppler_phase(v, dt, theta, wavelength)))
        .collect();
    Cir {
        taps,
        doppler_angles: cir.doppler_angles.clone(),
    }
}
