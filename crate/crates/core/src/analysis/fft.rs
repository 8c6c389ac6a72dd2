use std::f64::consts::PI;

use num_complex::Complex64;

use super::AnalysisError;

/// Unnormalized forward DFT, `Y_k = Σ_j y_j e^(−2πijk/n)`, in natural order.
pub fn fft_radix2(samples: &[Complex64]) -> Result<Vec<Complex64>, AnalysisError> {
    transform(samples, -1.0)
}

/// Unnormalized inverse DFT (kernel `e^(+2πijk/n)`); divide by `n` to invert
/// [`fft_radix2`].
pub fn ifft_radix2(coeffs: &[Complex64]) -> Result<Vec<Complex64>, AnalysisError> {
    transform(coeffs, 1.0)
}

fn transform(input: &[Complex64], sign: f64) -> Result<Vec<Complex64>, AnalysisError> {
    let n = input.len();
    if n < 2 || !n.is_power_of_two() {
        return Err(AnalysisError::NotPowerOfTwo(n));
    }
    let bits = n.trailing_zeros();
    let mut data: Vec<Complex64> = (0..n)
        .map(|i| input[i.reverse_bits() >> (usize::BITS - bits)])
        .collect();

    // Twiddles computed directly from the angle, not by repeated
    // multiplication, to keep the round-off independent of n.
    let twiddles: Vec<Complex64> = (0..n / 2)
        .map(|k| Complex64::from_polar(1.0, sign * 2.0 * PI * k as f64 / n as f64))
        .collect();

    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let stride = n / len;
        for chunk in data.chunks_exact_mut(len) {
            for k in 0..half {
                let w = twiddles[k * stride];
                let a = chunk[k];
                let b = chunk[k + half] * w;
                chunk[k] = a + b;
                chunk[k + half] = a - b;
            }
        }
        len <<= 1;
    }
    Ok(data)
}
