use crate::error::{Error, Result};

/// Total-variation distance between `N(mu, sigma_low^2)` and `N(mu, sigma_high^2)`.
///
/// The densities cross at `|x| = x*` with
/// `x*^2 = 2 s_l^2 s_h^2 ln(s_h / s_l) / (s_h^2 - s_l^2)`; the narrow law carries
/// the excess mass inside `[-x*, x*]`, so the distance is
/// `erf(x* / (s_l sqrt 2)) - erf(x* / (s_h sqrt 2))`.
pub fn gaussian_tv(sigma_low: f64, sigma_high: f64) -> Result<f64> {
    if sigma_low.is_nan() || sigma_low <= 0.0 || !sigma_low.is_finite() || !sigma_high.is_finite() {
        return Err(Error::param(
            "standard deviations must be positive and finite",
        ));
    }
    if sigma_low >= sigma_high {
        return Err(Error::param(format!(
            "need sigma_low < sigma_high, got {sigma_low} >= {sigma_high}"
        )));
    }
    let ratio = sigma_high / sigma_low;
    // x* / (s_l s_h sqrt 2), computed without squaring the small sigma twice.
    let k = (ratio.ln() / ((sigma_high - sigma_low) * (sigma_high + sigma_low))).sqrt();
    Ok(libm::erf(sigma_high * k) - libm::erf(sigma_low * k))
}
