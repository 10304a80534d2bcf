use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;

use super::{cir_to_cfr, doppler_evolve, gen_tdl_cir, pathloss_db, Cfr, Cir};
use crate::config::SimConfig;
use crate::{Error, Result};

/// How Doppler traveling angles are assigned across the UE-side links.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AngleModel {
    /// Tap `k` of the direct link and of every UE-RIS link share one angle,
    /// so each delay bin of the superimposed channel rotates coherently.
    #[default]
    SharedPerTap,
    /// Every link draws its own angles.
    Independent,
}

/// The direct link plus the per-sub-surface UE-RIS and RIS-gNB links, with
/// their frequency responses cached.
///
/// Only the UE moves: [`LinkSet::evolved`] rotates the direct and UE-RIS
/// links and leaves the RIS-gNB links untouched.
#[derive(Debug, Clone)]
pub struct LinkSet {
    n: usize,
    h_ug: Cir,
    h_ur: Vec<Cir>,
    h_rg: Vec<Cir>,
    ug_cfr: Cfr,
    urg_cfr: Array2<Complex64>,
}

impl LinkSet {
    pub fn new(n: usize, h_ug: Cir, h_ur: Vec<Cir>, h_rg: Vec<Cir>) -> Result<Self> {
        if h_ur.len() != h_rg.len() || h_ur.is_empty() {
            return Err(Error::Dimension(format!(
                "{} UE-RIS links vs {} RIS-gNB links",
                h_ur.len(),
                h_rg.len()
            )));
        }
        let longest = h_ur
            .iter()
            .zip(&h_rg)
            .map(|(a, b)| a.len() + b.len() - 1)
            .chain(std::iter::once(h_ug.len()))
            .max()
            .unwrap_or(0);
        if longest > n {
            return Err(Error::Dimension(format!(
                "delay spread {longest} exceeds N = {n}"
            )));
        }
        let ug_cfr = cir_to_cfr(&h_ug, n);
        let mut urg_cfr = Array2::zeros((n, h_ur.len()));
        for (m, (ur, rg)) in h_ur.iter().zip(&h_rg).enumerate() {
            let ur = cir_to_cfr(ur, n);
            let rg = cir_to_cfr(rg, n);
            for (k, (a, b)) in rg.values.iter().zip(&ur.values).enumerate() {
                urg_cfr[[k, m]] = a * b;
            }
        }
        Ok(LinkSet {
            n,
            h_ug,
            h_ur,
            h_rg,
            ug_cfr,
            urg_cfr,
        })
    }

    pub fn n_subcarriers(&self) -> usize {
        self.n
    }

    pub fn n_subsurfaces(&self) -> usize {
        self.h_ur.len()
    }

    pub fn h_ug(&self) -> &Cir {
        &self.h_ug
    }

    pub fn h_ur(&self) -> &[Cir] {
        &self.h_ur
    }

    pub fn h_rg(&self) -> &[Cir] {
        &self.h_rg
    }

    pub fn direct_cfr(&self) -> &Cfr {
        &self.ug_cfr
    }

    /// N x M matrix whose column m is `h_RG,m ∘ h_UR,m`.
    pub fn cascade_cfr(&self) -> &Array2<Complex64> {
        &self.urg_cfr
    }

    /// `H_URG * phi + h_UG`.
    pub fn superimposed(&self, phi: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(phi.len(), self.n_subsurfaces());
        let mut h = self.ug_cfr.values.clone();
        for (k, row) in self.urg_cfr.rows().into_iter().enumerate() {
            h[k] += row.iter().zip(phi).map(|(a, p)| a * p).sum::<Complex64>();
        }
        h
    }

    /// Channel `dt` seconds later for a UE moving at `v`.
    pub fn evolved(&self, v: f64, dt: f64, wavelength: f64) -> LinkSet {
        let h_ug = doppler_evolve(&self.h_ug, v, dt, wavelength);
        let h_ur = self
            .h_ur
            .iter()
            .map(|c| doppler_evolve(c, v, dt, wavelength))
            .collect();
        LinkSet::new(self.n, h_ug, h_ur, self.h_rg.clone()).expect("shape preserved")
    }
}

/// Draws one multi-path realisation for `cfg`.
///
/// The RIS-gNB link of each sub-surface carries the coherent aggregation gain
/// `(N_R / M)^2` of the elements that share its reflection coefficient.
pub fn gen_links<R: Rng + ?Sized>(cfg: &SimConfig, angles: AngleModel, rng: &mut R) -> LinkSet {
    let g = &cfg.geometry;
    let l = cfg.l_taps;
    let m = cfg.n_subsurfaces;
    let pl_ug = pathloss_db(g.d_ug_m, g.ple_ug, g.fc_hz);
    let pl_ur = pathloss_db(g.d_ur_m, g.ple_ur, g.fc_hz);
    let aggregation_db = 20.0 * ((cfg.n_ris_elements / m) as f64).log10();
    let pl_rg = pathloss_db(g.d_rg_m, g.ple_rg, g.fc_hz) - aggregation_db;

    let h_ug = gen_tdl_cir(l, cfg.eta, pl_ug, rng);
    let mut h_ur = Vec::with_capacity(m);
    let mut h_rg = Vec::with_capacity(m);
    for _ in 0..m {
        let mut ur = gen_tdl_cir(l, cfg.eta, pl_ur, rng);
        if angles == AngleModel::SharedPerTap {
            ur.doppler_angles.clone_from(&h_ug.doppler_angles);
        }
        h_ur.push(ur);
        h_rg.push(gen_tdl_cir(l, cfg.eta, pl_rg, rng));
    }
    LinkSet::new(cfg.ofdm.n_subcarriers, h_ug, h_ur, h_rg).expect("validated config")
}
