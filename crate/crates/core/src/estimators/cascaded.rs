use ndarray::ArrayView2;

use super::{EstimationResult, Scheme};
use crate::channel::Cfr;
use crate::signal::{PilotSymbol, ReflectionMatrix, RxSymbol};
use crate::{Error, Result};

/// LS estimate of the superimposed CFR: `y_n * conj(x_n)` for a unit-modulus
/// pilot.
pub fn per_symbol_cfr(rx: &RxSymbol, pilot: &PilotSymbol) -> Cfr {
    assert_eq!(rx.y.len(), pilot.len());
    Cfr::new(
        rx.y.iter()
            .zip(&pilot.x)
            .map(|(y, x)| y * x.conj())
            .collect(),
    )
}

/// Cascaded CE ignoring Doppler: `[h_ug, H_urg] = H_hat Theta^{-1}`.
///
/// `h_hat` holds the estimates of symbols `1..=M+1` as columns.
pub fn bm1_estimate(
    h_hat: ArrayView2<'_, num_complex::Complex64>,
    theta: &ReflectionMatrix,
) -> Result<EstimationResult> {
    let size = theta.theta.nrows();
    if h_hat.ncols() != size {
        return Err(Error::Dimension(format!(
            "{} estimate columns for a {size}x{size} pattern",
            h_hat.ncols()
        )));
    }
    let stacked = h_hat.dot(&theta.inverse());
    Ok(EstimationResult::from_stacked(stacked, 1, Scheme::Bm1))
}
