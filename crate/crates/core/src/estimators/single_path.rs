use num_complex::Complex64;

use crate::signal::{PilotSymbol, RxSymbol};
use crate::{Error, Result};

/// Which sub-surface is switched on for each of the four pilots:
/// `(u, u~) = (0, 0)` twice, then `(1, 0)` and `(0, 1)`.
pub fn single_path_patterns(m_side: usize) -> [usize; 4] {
    [0, 0, m_side, 1]
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SinglePathOptions {
    /// Force `|a_hat| = |b_hat| = 1`.
    pub renormalize: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SinglePathEstimate {
    /// Common gain at symbol 1.
    pub gain_ref: Complex64,
    pub a_hat: Complex64,
    pub b_hat: Complex64,
    /// Doppler phase advance per symbol.
    pub delta_zeta: f64,
    /// Cascade at symbol 1, row-major in `(u, u~)`.
    pub cascade_hat: Vec<Complex64>,
    pub symbols_used: usize,
}

impl SinglePathEstimate {
    /// Common gain extrapolated to symbol `i`.
    pub fn gain_at(&self, i: usize) -> Complex64 {
        self.gain_ref * Complex64::from_polar(1.0, (i as f64 - 1.0) * self.delta_zeta)
    }
}

/// Arithmetic-mean magnitude with circular-mean phase.
fn combine(values: impl Iterator<Item = Complex64>) -> Complex64 {
    let (mut mag, mut dir, mut count) = (0.0, Complex64::new(0.0, 0.0), 0usize);
    for v in values {
        let r = v.norm();
        mag += r;
        if r > 0.0 {
            dir += v / r;
        }
        count += 1;
    }
    if count == 0 {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::from_polar(mag / count as f64, dir.arg())
}

fn circular_mean(angles: impl Iterator<Item = f64>) -> f64 {
    angles
        .map(|a| Complex64::from_polar(1.0, a))
        .sum::<Complex64>()
        .arg()
}

pub fn single_path_estimate(
    rx: &[RxSymbol; 4],
    pilot: &PilotSymbol,
    m_side: usize,
) -> Result<SinglePathEstimate> {
    single_path_estimate_with(rx, pilot, m_side, SinglePathOptions::default())
}

/// Four-pilot estimate of the single-path cascade `A a^u b^u~`.
///
/// Each quantity is formed per sub-carrier and then combined (circular mean
/// for phases, arithmetic mean for magnitudes).
pub fn single_path_estimate_with(
    rx: &[RxSymbol; 4],
    pilot: &PilotSymbol,
    m_side: usize,
    opts: SinglePathOptions,
) -> Result<SinglePathEstimate> {
    if m_side < 2 {
        return Err(Error::Dimension(format!(
            "single-path CE needs a grid side >= 2, got {m_side}"
        )));
    }
    let n = pilot.len();
    if rx.iter().any(|r| r.y.len() != n) {
        return Err(Error::Dimension(
            "received symbol length differs from pilot".into(),
        ));
    }
    let [y0, y1, y2, y3] = [&rx[0].y, &rx[1].y, &rx[2].y, &rx[3].y];
    if let Some(k) = y1.iter().position(|v| v.norm() == 0.0) {
        return Err(Error::ZeroSample(k));
    }

    let a0 = y0.iter().zip(&pilot.x).map(|(y, x)| y * x.conj());
    let a1: Vec<_> = y1.iter().zip(&pilot.x).map(|(y, x)| y * x.conj()).collect();
    let delta_zeta = circular_mean(a0.zip(&a1).map(|(p, q)| (q * p.conj()).arg()));
    let gain_ref = combine(a1.iter().copied());

    let back1 = Complex64::from_polar(1.0, -delta_zeta);
    let back2 = Complex64::from_polar(1.0, -2.0 * delta_zeta);
    let mut a_hat = combine(y2.iter().zip(y1).map(|(a, b)| back1 * a / b));
    let mut b_hat = combine(y3.iter().zip(y1).map(|(a, b)| back2 * a / b));
    if opts.renormalize {
        a_hat = Complex64::from_polar(1.0, a_hat.arg());
        b_hat = Complex64::from_polar(1.0, b_hat.arg());
    }

    let mut cascade_hat = Vec::with_capacity(m_side * m_side);
    let mut row = gain_ref;
    for _u in 0..m_side {
        let mut v = row;
        for _ in 0..m_side {
            cascade_hat.push(v);
            v *= b_hat;
        }
        row *= a_hat;
    }
    Ok(SinglePathEstimate {
        gain_ref,
        a_hat,
        b_hat,
        delta_zeta,
        cascade_hat,
        symbols_used: 4,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::zadoff_chu;

    fn rx_for(values: [Complex64; 4], pilot: &PilotSymbol) -> [RxSymbol; 4] {
        values.map(|h| RxSymbol {
            y: pilot.x.iter().map(|x| x * h).collect(),
            symbol_index: 0,
            pattern: vec![],
        })
    }

    #[test]
    fn unit_channel_gives_all_ones() {
        let pilot = zadoff_chu(12, 1).unwrap();
        let one = Complex64::new(1.0, 0.0);
        let est = single_path_estimate(&rx_for([one; 4], &pilot), &pilot, 3).unwrap();
        assert_eq!(est.symbols_used, 4);
        assert!(est.delta_zeta.abs() < 1e-15);
        assert_eq!(est.cascade_hat.len(), 9);
        assert!(est.cascade_hat.iter().all(|v| (v - one).norm() < 1e-14));
        assert_eq!(est.cascade_hat[0], est.gain_ref);
    }

    #[test]
    fn zero_reference_sample_rejected() {
        let pilot = zadoff_chu(12, 1).unwrap();
        let one = Complex64::new(1.0, 0.0);
        let mut rx = rx_for([one; 4], &pilot);
        rx[1].y[5] = Complex64::new(0.0, 0.0);
        assert!(matches!(
            single_path_estimate(&rx, &pilot, 2),
            Err(Error::ZeroSample(5))
        ));
    }

    #[test]
    fn renormalization_forces_unit_steps() {
        let pilot = zadoff_chu(12, 1).unwrap();
        let one = Complex64::new(1.0, 0.0);
        let rx = rx_for(
            [one, one, Complex64::new(0.0, 1.2), Complex64::new(0.9, 0.0)],
            &pilot,
        );
        let raw = single_path_estimate(&rx, &pilot, 2).unwrap();
        assert!((raw.a_hat.norm() - 1.2).abs() < 1e-12);
        let opts = SinglePathOptions { renormalize: true };
        let norm = single_path_estimate_with(&rx, &pilot, 2, opts).unwrap();
        assert!((norm.a_hat.norm() - 1.0).abs() < 1e-15);
        assert!((norm.a_hat.arg() - raw.a_hat.arg()).abs() < 1e-15);
    }

    #[test]
    fn gain_extrapolation() {
        let pilot = zadoff_chu(12, 1).unwrap();
        let r = |p: f64| Complex64::from_polar(1.0, p);
        let est =
            single_path_estimate(&rx_for([r(0.0), r(0.2), r(0.4), r(0.6)], &pilot), &pilot, 2)
                .unwrap();
        assert!((est.delta_zeta - 0.2).abs() < 1e-12);
        assert!((est.gain_at(3).arg() - 0.6).abs() < 1e-12);
    }
}
