//! Channel synthesis: tapped-delay-line links, Doppler evolution, CIR/CFR
//! transforms and the structured single-path RIS channel.

mod dump;
mod links;
mod single_path;
mod tdl;
mod transform;

pub use dump::{read_links, write_links};
pub use links::{gen_links, AngleModel, LinkSet};
pub use single_path::{array_response, gen_single_path, SinglePathChannel};
pub use tdl::{complex_gaussian, doppler_evolve, doppler_phase, gen_tdl_cir, Cir};
pub use transform::{cfr_to_cir, cir_to_cfr, dft_in_place, idft_in_place, taps_to_cfr, Cfr};

use std::f64::consts::PI;

use crate::SPEED_OF_LIGHT;

/// Close-in path loss in dB: free space at 1 m plus `10 * ple * log10(d)`.
pub fn pathloss_db(d_m: f64, ple: f64, fc_hz: f64) -> f64 {
    let wavelength = SPEED_OF_LIGHT / fc_hz;
    let fspl_1m = 20.0 * (4.0 * PI / wavelength).log10();
    fspl_1m + 10.0 * ple * d_m.log10()
}
