use crate::error::{Error, Result};

fn is_pole(z: f64) -> bool {
    z <= 0.0 && z == z.round()
}

/// `ln |Gamma(z)|` and the sign of `Gamma(z)`, for `z` off the poles.
fn ln_gamma_signed(z: f64) -> (f64, f64) {
    let (ln, sign) = libm::lgamma_r(z);
    (ln, f64::from(sign))
}

/// `P_{k,c}(x) = Gamma(x + c) / Gamma(x + c - k)`.
///
/// For integer `k >= 0` this is the falling factorial
/// `(x + c - 1) (x + c - 2) ... (x + c - k)`, which is finite everywhere.
pub fn gamma_ratio(k: f64, c: f64, x: f64) -> Result<f64> {
    let top = x + c;
    let bottom = x + c - k;
    if k >= 0.0 && k == k.round() && k <= 64.0 {
        return Ok((1..=k as u32).map(|j| top - j as f64).product());
    }
    if is_pole(top) {
        return Err(Error::Pole(top));
    }
    if is_pole(bottom) {
        return Err(Error::Pole(bottom));
    }
    let (ln_top, s_top) = ln_gamma_signed(top);
    let (ln_bottom, s_bottom) = ln_gamma_signed(bottom);
    Ok(s_top * s_bottom * (ln_top - ln_bottom).exp())
}
