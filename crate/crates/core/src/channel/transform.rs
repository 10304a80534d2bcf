use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::Cir;

/// Frequency response over N sub-carriers.
#[derive(Debug, Clone, PartialEq)]
pub struct Cfr {
    pub values: Vec<Complex64>,
}

impl Cfr {
    pub fn new(values: Vec<Complex64>) -> Self {
        Cfr { values }
    }

    pub fn zeros(n: usize) -> Self {
        Cfr {
            values: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Unnormalised forward DFT, `X[n] = sum_k x[k] e^{-j 2 pi n k / N}`.
pub fn dft_in_place(buf: &mut [Complex64]) {
    if buf.is_empty() {
        return;
    }
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()));
    fft.process(buf);
}

/// Inverse DFT with the 1/N factor applied.
pub fn idft_in_place(buf: &mut [Complex64]) {
    if buf.is_empty() {
        return;
    }
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(buf.len()));
    fft.process(buf);
    let scale = 1.0 / buf.len() as f64;
    for v in buf.iter_mut() {
        *v *= scale;
    }
}

/// Zero-pads `taps` to `n` and transforms to the frequency domain.
pub fn taps_to_cfr(taps: &[Complex64], n: usize) -> Cfr {
    assert!(taps.len() <= n, "{} taps exceed {n}-point DFT", taps.len());
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    buf[..taps.len()].copy_from_slice(taps);
    dft_in_place(&mut buf);
    Cfr::new(buf)
}

pub fn cir_to_cfr(cir: &Cir, n: usize) -> Cfr {
    taps_to_cfr(&cir.taps, n)
}

/// Length-N delay-domain taps of a frequency response.
pub fn cfr_to_cir(cfr: &Cfr) -> Vec<Complex64> {
    let mut buf = cfr.values.clone();
    idft_in_place(&mut buf);
    buf
}
