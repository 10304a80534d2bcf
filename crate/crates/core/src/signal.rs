//! Pilots, RIS training patterns and the frequency-domain receive chain.
//!
//! With a cyclic prefix longer than every channel's delay spread, IDFT + CP
//! insertion, the linear channel, CP removal and DFT collapse to a per
//! sub-carrier product. The receive chain therefore applies
//! `y = x ∘ (H_URG phi + h_UG) + w` directly in the frequency domain.

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;

use crate::channel::LinkSet;
use crate::config::{gcd, SimConfig};
use crate::{Error, Result};

/// Constant-modulus pilot occupying all N sub-carriers.
#[derive(Debug, Clone, PartialEq)]
pub struct PilotSymbol {
    pub x: Vec<Complex64>,
}

impl PilotSymbol {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

/// Zadoff-Chu sequence of length `n` with the given root.
pub fn zadoff_chu(n: usize, root: u64) -> Result<PilotSymbol> {
    if n == 0 || root == 0 || gcd(root, n as u64) != 1 {
        return Err(Error::NonCoprimeRoot { root, len: n });
    }
    let r = root as f64;
    let nf = n as f64;
    let odd = n % 2 == 1;
    let x = (0..n)
        .map(|i| {
            let k = i as f64;
            let e = if odd { k * (k + 1.0) } else { k * k };
            Complex64::from_polar(1.0, -PI * r * e / nf)
        })
        .collect();
    Ok(PilotSymbol { x })
}

/// `(M+1) x (M+1)` training pattern. Column `i` is the extended reflection
/// vector `[1; phi]` applied during CE symbol `i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionMatrix {
    pub theta: Array2<Complex64>,
}

impl ReflectionMatrix {
    pub fn n_subsurfaces(&self) -> usize {
        self.theta.nrows() - 1
    }

    pub fn column(&self, i: usize) -> Vec<Complex64> {
        self.theta.column(i).to_vec()
    }

    /// RIS coefficients (without the direct-link slot) of column `i`.
    pub fn pattern(&self, i: usize) -> Vec<Complex64> {
        self.theta.column(i).iter().skip(1).copied().collect()
    }

    /// `Theta^H / (M+1)`, the inverse of a DFT pattern.
    pub fn inverse(&self) -> Array2<Complex64> {
        let scale = 1.0 / self.theta.nrows() as f64;
        self.theta.t().mapv(|v| v.conj() * scale)
    }
}

/// DFT training pattern, `[Theta]_{p,q} = exp(-j 2 pi p q / (M+1))`.
pub fn dft_reflection_pattern(m: usize) -> ReflectionMatrix {
    assert!(m >= 1);
    let size = m + 1;
    let theta = Array2::from_shape_fn((size, size), |(p, q)| {
        // reduce p*q first so large M keeps full phase precision
        let k = (p * q) % size;
        Complex64::from_polar(1.0, -2.0 * PI * k as f64 / size as f64)
    });
    ReflectionMatrix { theta }
}

/// Pattern with only sub-surface `on` reflecting, or all off for `None`.
pub fn single_on_pattern(m: usize, on: Option<usize>) -> Result<Vec<Complex64>> {
    let mut phi = vec![Complex64::new(0.0, 0.0); m];
    if let Some(i) = on {
        if i >= m {
            return Err(Error::IndexOutOfRange { index: i, len: m });
        }
        phi[i] = Complex64::new(1.0, 0.0);
    }
    Ok(phi)
}

/// One received OFDM symbol in the frequency domain.
#[derive(Debug, Clone, PartialEq)]
pub struct RxSymbol {
    pub y: Vec<Complex64>,
    pub symbol_index: usize,
    /// RIS coefficients in force while this symbol was received.
    pub pattern: Vec<Complex64>,
}

impl RxSymbol {
    pub fn with_index(mut self, symbol_index: usize) -> Self {
        self.symbol_index = symbol_index;
        self
    }
}

/// Noise variance seen by a unit-modulus pilot when `tx_power_dbm` is split
/// evenly over the N sub-carriers: `sigma^2 / (P / N)`.
///
/// Channels are expressed as linear amplitude gains, so estimates obtained
/// with this variance are directly in channel units.
pub fn effective_noise_var(cfg: &SimConfig, tx_power_dbm: f64) -> f64 {
    let per_subcarrier = crate::db_to_linear(tx_power_dbm) / cfg.ofdm.n_subcarriers as f64;
    cfg.noise_var_mw() / per_subcarrier
}

/// `x ∘ h + w` with `w ~ CN(0, noise_var)` per sub-carrier.
pub fn receive_superimposed<R: Rng + ?Sized>(
    h: &[Complex64],
    pilot: &PilotSymbol,
    noise_var: f64,
    rng: &mut R,
) -> Vec<Complex64> {
    assert_eq!(h.len(), pilot.len());
    let sigma = noise_var.sqrt();
    h.iter()
        .zip(&pilot.x)
        .map(|(h, x)| {
            let clean = x * h;
            if noise_var > 0.0 {
                clean + crate::channel::complex_gaussian(rng) * sigma
            } else {
                clean
            }
        })
        .collect()
}

/// Receives one pilot symbol through `links` with RIS coefficients `phi`.
pub fn receive_symbol<R: Rng + ?Sized>(
    links: &LinkSet,
    phi: &[Complex64],
    pilot: &PilotSymbol,
    noise_var: f64,
    rng: &mut R,
) -> RxSymbol {
    let h = links.superimposed(phi);
    RxSymbol {
        y: receive_superimposed(&h, pilot, noise_var, rng),
        symbol_index: 0,
        pattern: phi.to_vec(),
    }
}
