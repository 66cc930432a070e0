// Coefficient tables keep the published digits.
#![allow(clippy::excessive_precision)]

use core::f64::consts::{FRAC_1_SQRT_2, PI};

/// Standard normal density.
#[inline]
pub fn normal_pdf(z: f64) -> f64 {
    libm::exp(-0.5 * z * z) / libm::sqrt(2.0 * PI)
}

/// Standard normal distribution function Φ(z).
///
/// Evaluated through `erfc` so that both tails keep full relative accuracy,
/// which the decay diagnostics rely on deep in the lower tail.
#[inline]
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z * FRAC_1_SQRT_2)
}

/// Inverse of Φ on (0, 1).
///
/// Wichura's AS 241 (PPND16), accurate to about 1e-16 relative. Returns ±∞
/// at the endpoints and NaN outside [0, 1].
pub fn inverse_normal_cdf(p: f64) -> f64 {
    if p.is_nan() || !(0.0..=1.0).contains(&p) {
        return f64::NAN;
    }
    if p == 0.0 {
        return f64::NEG_INFINITY;
    }
    if p == 1.0 {
        return f64::INFINITY;
    }
    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180_625 - q * q;
        return q * poly(&CENTRAL_NUM, r) / poly(&CENTRAL_DEN, r);
    }
    let tail = if q < 0.0 { p } else { 1.0 - p };
    let mut r = libm::sqrt(-libm::log(tail));
    let x = if r <= 5.0 {
        r -= 1.6;
        poly(&NEAR_NUM, r) / poly(&NEAR_DEN, r)
    } else {
        r -= 5.0;
        poly(&FAR_NUM, r) / poly(&FAR_DEN, r)
    };
    if q < 0.0 {
        -x
    } else {
        x
    }
}

// Horner evaluation, coefficients in increasing degree.
#[inline]
fn poly(c: &[f64; 8], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

#[rustfmt::skip]
const CENTRAL_NUM: [f64; 8] = [
    3.3871328727963666080e0,
    1.3314166789178437745e2,
    1.9715909503065514427e3,
    1.3731693765509461125e4,
    4.5921953931549871457e4,
    6.7265770927008700853e4,
    3.3430575583588128105e4,
    2.5090809287301226727e3,
];
#[rustfmt::skip]
const CENTRAL_DEN: [f64; 8] = [
    1.0,
    4.2313330701600911252e1,
    6.8718700749205790830e2,
    5.3941960214247511077e3,
    2.1213794301586595867e4,
    3.9307895800092710610e4,
    2.8729085735721942674e4,
    5.2264952788528545610e3,
];
#[rustfmt::skip]
const NEAR_NUM: [f64; 8] = [
    1.42343711074968357734e0,
    4.63033784615654529590e0,
    5.76949722146069140550e0,
    3.64784832476320460504e0,
    1.27045825245236838258e0,
    2.41780725177450611770e-1,
    2.27238449892691845833e-2,
    7.74545014278341407640e-4,
];
#[rustfmt::skip]
const NEAR_DEN: [f64; 8] = [
    1.0,
    2.05319162663775882187e0,
    1.67638483018380384940e0,
    6.89767334985100004550e-1,
    1.48103976427480074590e-1,
    1.51986665636164571966e-2,
    5.47593808499534494600e-4,
    1.05075007164441684324e-9,
];
#[rustfmt::skip]
const FAR_NUM: [f64; 8] = [
    6.65790464350110377720e0,
    5.46378491116411436990e0,
    1.78482653991729133580e0,
    2.96560571828504891230e-1,
    2.65321895265761230930e-2,
    1.24266094738807843860e-3,
    2.71155556874348757815e-5,
    2.01033439929228813265e-7,
];
#[rustfmt::skip]
const FAR_DEN: [f64; 8] = [
    1.0,
    5.99832206555887937690e-1,
    1.36929880922735805310e-1,
    1.48753612908506148525e-2,
    7.86869131145613259100e-4,
    1.84631831751005468180e-5,
    1.42151175831644588870e-7,
    2.04426310338993978564e-15,
];

#[cfg(test)]
mod tests {
    use super::*;

    // Maclaurin series of erf, summed until terms vanish. Independent of the
    // erfc-based production path.
    fn erf_series(x: f64) -> f64 {
        let mut term = x;
        let mut sum = x;
        let mut n = 0.0;
        loop {
            n += 1.0;
            term *= -x * x / n;
            let contrib = term / (2.0 * n + 1.0);
            sum += contrib;
            if contrib.abs() < 1e-18 {
                break;
            }
        }
        2.0 / libm::sqrt(PI) * sum
    }

    #[test]
    fn cdf_reference_points() {
        assert_eq!(normal_cdf(0.0), 0.5);
        assert!((normal_cdf(40.0) - 1.0).abs() <= 1e-12);
        assert!(normal_cdf(-40.0) >= 0.0);

        let z = 1.959_963_985;
        let oracle = 0.5 * (1.0 + erf_series(z * FRAC_1_SQRT_2));
        assert!((normal_cdf(z) - oracle).abs() <= 1e-12);
        assert!((normal_cdf(z) - 0.975).abs() <= 1e-9);
    }

    #[test]
    fn cdf_matches_series_on_grid() {
        for i in -40..=40 {
            let z = i as f64 * 0.1;
            let oracle = 0.5 * (1.0 + erf_series(z * FRAC_1_SQRT_2));
            assert!((normal_cdf(z) - oracle).abs() <= 1e-12, "z = {z}");
        }
    }

    #[test]
    fn inverse_round_trips() {
        for &p in &[1e-16, 1e-12, 1e-8, 0.01, 0.024_25, 0.3, 0.5, 0.7, 0.975, 1.0 - 1e-10] {
            let z = inverse_normal_cdf(p);
            let back = normal_cdf(z);
            assert!(((back - p) / p).abs() < 1e-13, "p = {p}, back = {back}");
        }
        let deep = inverse_normal_cdf(1e-300);
        assert!((normal_cdf(deep) / 1e-300 - 1.0).abs() < 1e-7);
        assert_eq!(inverse_normal_cdf(0.5), 0.0);
        assert!(inverse_normal_cdf(0.0).is_infinite());
        assert!(inverse_normal_cdf(1.5).is_nan());
    }

    #[test]
    fn inverse_is_monotone() {
        let mut prev = f64::NEG_INFINITY;
        for i in 1..10_000 {
            let z = inverse_normal_cdf(i as f64 / 10_000.0);
            assert!(z > prev);
            prev = z;
        }
    }
}
