//! Gamma and Riemann zeta functions.

use crate::num::Real;

const LANCZOS_G: f64 = 7.0;

#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Lanczos series `A_g(x)` for argument already shifted by one.
fn lanczos_sum<T: Real>(x: T) -> T {
    let mut acc = T::lit(LANCZOS_COEFFS[0]);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc = acc + T::lit(c) / (x + T::count(i as u64));
    }
    acc
}

/// Gamma function.
///
/// Arguments below one half go through the reflection formula; everything
/// else uses the `g = 7`, nine-term Lanczos approximation, which is accurate
/// to about 1e-15 relative in double precision.
pub fn gamma<T: Real>(x: T) -> T {
    let half = T::lit(0.5);
    if x < half {
        let pi = T::PI();
        return pi / ((pi * x).sin() * gamma(T::one() - x));
    }
    let z = x - T::one();
    let t = z + T::lit(LANCZOS_G) + half;
    (T::TAU()).sqrt() * t.powf(z + half) * (-t).exp() * lanczos_sum(z)
}

/// Natural log of the gamma function for positive arguments.
pub fn ln_gamma<T: Real>(x: T) -> T {
    debug_assert!(x > T::zero());
    let half = T::lit(0.5);
    if x < half {
        // ln Γ(x) = ln Γ(x + 1) - ln x keeps the argument positive
        return ln_gamma(x + T::one()) - x.ln();
    }
    let z = x - T::one();
    let t = z + T::lit(LANCZOS_G) + half;
    half * T::TAU().ln() + (z + half) * t.ln() - t + lanczos_sum(z).ln()
}

/// `B_{2j} / (2j)!` for j = 1..=6.
const BERNOULLI_OVER_FACTORIAL: [f64; 6] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
];

/// Euler–Maclaurin remainder `sum_{k >= a} k^{-s}` for `a >= 1`, `s > 1`.
fn euler_maclaurin_tail<T: Real>(s: T, a: T) -> T {
    let mut sum = a.powf(T::one() - s) / (s - T::one()) + T::lit(0.5) * a.powf(-s);
    // rising factorial s (s+1) ... (s + 2j - 2), times a^{-s-2j+1}
    let mut rising = s;
    let mut power = a.powf(-s - T::one());
    let a2 = a * a;
    for (j, &b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        if j > 0 {
            let m = T::count(2 * j as u64);
            rising = rising * (s + m - T::one()) * (s + m);
            power = power / a2;
        }
        sum = sum + T::lit(b) * rising * power;
    }
    sum
}

const DIRECT_TERMS: u64 = 16;

/// Hurwitz-type tail `sum_{k >= q} k^{-s}` for integer `q >= 1` and `s > 1`.
pub fn zeta_tail<T: Real>(s: T, q: u64) -> T {
    assert!(q >= 1, "zeta tail starts at k >= 1");
    assert!(s > T::one(), "zeta diverges for s <= 1");
    let mut sum = T::zero();
    for k in q..q + DIRECT_TERMS {
        sum = sum + T::count(k).powf(-s);
    }
    sum + euler_maclaurin_tail(s, T::count(q + DIRECT_TERMS))
}

/// Riemann zeta function for real `s > 1`.
pub fn zeta<T: Real>(s: T) -> T {
    zeta_tail(s, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gamma_known_values() {
        assert_relative_eq!(gamma(0.5f64), std::f64::consts::PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(gamma(1.0f64), 1.0, max_relative = 1e-14);
        assert_relative_eq!(gamma(5.0f64), 24.0, max_relative = 1e-14);
        assert_relative_eq!(gamma(0.9f64), 1.068_628_702_119_319_4, max_relative = 1e-13);
        assert_relative_eq!(gamma(-0.5f64), -2.0 * std::f64::consts::PI.sqrt(), max_relative = 1e-13);
        assert_relative_eq!(gamma(0.5f32), 1.772_453_9, max_relative = 1e-6);
    }

    #[test]
    fn ln_gamma_matches_gamma() {
        for &x in &[0.1f64, 0.5, 1.3, 2.5, 10.0, 40.0] {
            assert_relative_eq!(ln_gamma(x), gamma(x).ln(), max_relative = 1e-12, epsilon = 1e-13);
        }
    }

    /// Direct partial sum plus the integral bound on the remainder.
    fn brute_zeta(s: f64) -> f64 {
        let n = 2_000_000u64;
        let partial: f64 = (1..=n).rev().map(|k| (k as f64).powf(-s)).sum();
        // remainder between the integrals from n+1 and from n, take the midpoint
        let upper = (n as f64).powf(1.0 - s) / (s - 1.0);
        let lower = ((n + 1) as f64).powf(1.0 - s) / (s - 1.0);
        partial + 0.5 * (upper + lower)
    }

    #[test]
    fn zeta_matches_series() {
        assert_relative_eq!(zeta(2.0f64), std::f64::consts::PI.powi(2) / 6.0, max_relative = 1e-14);
        assert_relative_eq!(zeta(4.0f64), std::f64::consts::PI.powi(4) / 90.0, max_relative = 1e-14);
        for &s in &[2.5f64, 1.5, 2.1, 1.1] {
            assert_relative_eq!(zeta(s), brute_zeta(s), max_relative = 1e-9);
        }
        assert_relative_eq!(zeta(2.5f64), 1.341_487_257_250_917_2, max_relative = 1e-14);
    }

    #[test]
    fn zeta_tail_splits() {
        let s = 2.3f64;
        let head: f64 = (1..50u64).map(|k| (k as f64).powf(-s)).sum();
        assert_relative_eq!(head + zeta_tail(s, 50), zeta(s), max_relative = 1e-14);
    }
}
