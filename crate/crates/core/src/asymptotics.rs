//! Closed-form scaling predictions for `c(k)`.
//!
//! With `C = 1/zeta(tau)`, `mu = E[D]` and `A = -Gamma(2 - tau)`:
//!
//! | range | scale `f(k, n)`                  | constant                              |
//! |-------|----------------------------------|---------------------------------------|
//! | I     | `n^{2-tau} ln n`                 | `(3-tau)/(tau-1) mu^{-tau} C^2 A`     |
//! | II    | `n^{2-tau} ln(n / k^2)`          | `mu^{-tau} C^2 A`                     |
//! | III   | `n^{5-2tau} k^{2tau-6}`          | `mu^{3-2tau} C^2 A^2`                 |
//!
//! Around `k = B sqrt(n)` the ranges are joined by a double integral in `B`,
//! see [`ck_crossover`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::num::Real;
use crate::quadrature::{integrate_log, Estimate, QuadratureSpec};
use crate::regime::{classify, RangeId, DEFAULT_A_II};
use crate::special::{gamma, zeta};

/// Degree-law constants for one exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constants<T> {
    pub tau: T,
    /// `C = 1/zeta(tau)`.
    pub c_norm: T,
    /// `mu = zeta(tau - 1)/zeta(tau)`.
    pub mu: T,
    /// `A = -Gamma(2 - tau)`.
    pub a: T,
}

impl<T: Real> Constants<T> {
    pub fn new(tau: T) -> Result<Self> {
        let a = constant_a(tau)?;
        let z = zeta(tau);
        Ok(Constants {
            tau,
            c_norm: z.recip(),
            mu: zeta(tau - T::one()) / z,
            a,
        })
    }

    pub fn from_params(p: &ModelParams) -> Self {
        Constants {
            tau: T::lit(p.tau()),
            c_norm: T::lit(p.c_norm()),
            mu: T::lit(p.mu()),
            a: T::lit(p.a_const()),
        }
    }

    /// The limit constant multiplying `f(k, n)` in `range`.
    pub fn range_constant(&self, range: RangeId) -> T {
        let c2 = self.c_norm * self.c_norm;
        let base = self.mu.powf(-self.tau) * c2 * self.a;
        match range {
            RangeId::I => (T::lit(3.0) - self.tau) / (self.tau - T::one()) * base,
            RangeId::II => base,
            RangeId::III => {
                self.mu.powf(T::lit(3.0) - T::lit(2.0) * self.tau) * c2 * self.a * self.a
            }
        }
    }

    /// Range II line in crossover units, `mu^{-tau} C^2 A ln(B^{-2})`.
    pub fn range_ii_line(&self, b: T) -> T {
        self.range_constant(RangeId::II) * (-T::lit(2.0) * b.ln())
    }

    /// Range III line in crossover units, `mu^{3-2tau} C^2 A^2 B^{2tau-6}`.
    pub fn range_iii_line(&self, b: T) -> T {
        self.range_constant(RangeId::III) * b.powf(T::lit(2.0) * self.tau - T::lit(6.0))
    }
}

fn check_tau<T: Real>(tau: T) -> Result<()> {
    if !(tau > T::lit(2.0) && tau < T::lit(3.0)) {
        return Err(Error::invalid("tau", format!("{tau} is outside the open interval (2, 3)")));
    }
    Ok(())
}

/// `A = -Gamma(2 - tau)`, evaluated as `Gamma(4 - tau) / ((3 - tau)(tau - 2))`
/// so the gamma function only sees arguments in `(1, 2)`.
pub fn constant_a<T: Real>(tau: T) -> Result<T> {
    check_tau(tau)?;
    let three = T::lit(3.0);
    Ok(gamma(T::lit(4.0) - tau) / ((three - tau) * (tau - T::lit(2.0))))
}

/// `int_lo^hi t^{1-tau} (1 - e^{-t}) dt` by quadrature in `ln t`.
pub fn gamma_identity_integral<T: Real>(tau: T, lo: T, hi: T, spec: &QuadratureSpec<T>) -> Result<Estimate<T>> {
    check_tau(tau)?;
    let one = T::one();
    integrate_log(|t: T| t.powf(one - tau) * -(-t).exp_m1(), lo, hi, spec)
}

/// `int_0^inf t^{1-tau} (1 - e^{-t}) dt`, which equals [`constant_a`].
///
/// Quadrature covers `[t0, t1]`; the piece below `t0` comes from the power
/// series of `1 - e^{-t}` and the piece above `t1` from `1 - e^{-t} = 1` up
/// to `e^{-t1}`, which enters the error estimate.
pub fn gamma_identity<T: Real>(tau: T, spec: &QuadratureSpec<T>) -> Result<Estimate<T>> {
    check_tau(tau)?;
    let t0 = T::lit(1e-3);
    let t1 = T::lit(60.0).min(-(T::epsilon() * T::epsilon()).ln());
    let inner = gamma_identity_integral(tau, t0, t1, spec)?;

    let two = T::lit(2.0);
    // sum_j (-1)^{j+1} t0^{j+2-tau} / (j! (j + 2 - tau))
    let mut lower = T::zero();
    let mut term_pow = t0.powf(two - tau);
    let mut factorial = T::one();
    for j in 1..12u64 {
        let jj = T::count(j);
        term_pow = term_pow * t0;
        factorial = factorial * jj;
        let term = term_pow / (factorial * (jj + two - tau));
        lower = if j % 2 == 1 { lower + term } else { lower - term };
    }
    let upper = t1.powf(two - tau) / (tau - two);
    let upper_err = t1.powf(T::one() - tau) * (-t1).exp();
    Ok(Estimate {
        value: inner.value + lower + upper,
        abs_err: inner.abs_err + upper_err,
        evaluations: inner.evaluations,
    })
}

fn check_kn(k: u64, n: u64) -> Result<()> {
    if k < 2 {
        return Err(Error::invalid("k", format!("{k} is below 2")));
    }
    if n < 2 {
        return Err(Error::invalid("n", format!("{n} is below 2")));
    }
    Ok(())
}

/// Scale function `f(k, n)` of the range that `k` falls in (with `a = 1`).
pub fn f_scale<T: Real>(k: u64, n: u64, c: &Constants<T>) -> Result<T> {
    let range = classify(k, n, c.tau.to_f64_lossy(), DEFAULT_A_II);
    f_scale_in(range, k, n, c)
}

/// Scale function of an explicitly chosen range.
pub fn f_scale_in<T: Real>(range: RangeId, k: u64, n: u64, c: &Constants<T>) -> Result<T> {
    check_kn(k, n)?;
    let (kk, nn) = (T::count(k), T::count(n));
    let two = T::lit(2.0);
    let tau = c.tau;
    match range {
        RangeId::I => Ok(nn.powf(two - tau) * nn.ln()),
        RangeId::II => {
            if (n as u128) <= (k as u128) * (k as u128) {
                return Err(Error::invalid(
                    "k",
                    format!("Range II scale needs n > k^2, got n = {n}, k = {k}"),
                ));
            }
            Ok(nn.powf(two - tau) * (nn / (kk * kk)).ln())
        }
        RangeId::III => {
            Ok(nn.powf(T::lit(5.0) - two * tau) * kk.powf(two * tau - T::lit(6.0)))
        }
    }
}

/// Limit prediction `f(k, n)` times the range constant.
pub fn ck_limit<T: Real>(k: u64, n: u64, c: &Constants<T>) -> Result<T> {
    let range = classify(k, n, c.tau.to_f64_lossy(), DEFAULT_A_II);
    ck_limit_in(range, k, n, c)
}

pub fn ck_limit_in<T: Real>(range: RangeId, k: u64, n: u64, c: &Constants<T>) -> Result<T> {
    Ok(f_scale_in(range, k, n, c)? * c.range_constant(range))
}

/// Truncation box `[t_lo, t_hi]` for the crossover integral and the bound on
/// the mass it discards.
///
/// Writing `K = 1/(3-tau) + 1/(tau-2)`, `1 - e^{-x} <= min(1, x)` gives
/// `B K mu^{tau-2} / t_hi` for `t_1 > t_hi` and
/// `B^{tau-1} mu K t_lo^{3-tau} / (3-tau)` for `t_1 < t_lo`; the integrand is
/// symmetric, so the total is at most twice their sum.
fn crossover_box<T: Real>(b: T, c: &Constants<T>, budget: T, fixed_hi: Option<T>) -> (T, T, T) {
    let (one, two, three) = (T::one(), T::lit(2.0), T::lit(3.0));
    let tau = c.tau;
    let k = (three - tau).recip() + (tau - two).recip();
    let upper_coeff = b * k * c.mu.powf(tau - two);
    let lower_coeff = b.powf(tau - one) * c.mu * k / (three - tau);

    let t_hi = fixed_hi.unwrap_or_else(|| T::lit(4.0) * upper_coeff / budget);
    let floor = T::min_positive_value().powf(T::lit(0.9));
    let t_lo = (budget / (T::lit(4.0) * lower_coeff))
        .powf((three - tau).recip())
        .max(floor);
    let discarded = two * (upper_coeff / t_hi + lower_coeff * t_lo.powf(three - tau));
    (t_lo, t_hi, discarded)
}

/// Predicted `c(k) / n^{2-tau}` at `k = B sqrt(n)`:
///
/// `C^2 mu^{2-2tau} B^{-2} int int (t1 t2)^{-tau} (1-e^{-B t1}) (1-e^{-B t2}) (1-e^{-mu t1 t2}) dt1 dt2`.
///
/// Both variables are integrated in `ln t` over a box whose discarded mass is
/// bounded analytically. The returned error adds the outer quadrature error,
/// the propagated inner relative error and the truncation bound.
pub fn ck_crossover<T: Real>(b: T, c: &Constants<T>, spec: &QuadratureSpec<T>) -> Result<Estimate<T>> {
    if !(b > T::zero() && b.is_finite()) {
        return Err(Error::invalid("B", format!("{b} must be positive and finite")));
    }
    check_tau(c.tau)?;
    let two = T::lit(2.0);
    let tau = c.tau;
    let mu = c.mu;
    let prefactor = c.c_norm * c.c_norm * mu.powf(two - two * tau) / (b * b);

    let budget = spec.abs_tol / prefactor / T::lit(4.0);
    let (t_lo, t_hi, discarded) = crossover_box(b, c, budget, spec.truncation_bound);

    let inner_rel = (spec.rel_tol / T::lit(10.0)).max(T::lit(100.0) * T::epsilon());
    let inner_spec = QuadratureSpec {
        abs_tol: T::min_positive_value(),
        rel_tol: inner_rel,
        ..*spec
    };
    let outer_spec = QuadratureSpec {
        abs_tol: budget,
        rel_tol: spec.rel_tol / two,
        ..*spec
    };

    let weight = |t: T| t.powf(-tau) * -(-(b * t)).exp_m1();
    let mut failure = None;
    let mut evaluations = 0usize;
    let outer = integrate_log(
        |t1: T| {
            if failure.is_some() {
                return T::zero();
            }
            let inner = integrate_log(
                |t2: T| weight(t2) * -(-(mu * t1 * t2)).exp_m1(),
                t_lo,
                t_hi,
                &inner_spec,
            );
            match inner {
                Ok(est) => {
                    evaluations += est.evaluations;
                    weight(t1) * est.value
                }
                Err(e) => {
                    failure = Some(e);
                    T::zero()
                }
            }
        },
        t_lo,
        t_hi,
        &outer_spec,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let outer = outer?;
    let integral = outer.value;
    let value = prefactor * integral;
    let abs_err = prefactor * (outer.abs_err + inner_rel * integral.abs() + discarded);
    let target = spec.abs_tol.max(spec.rel_tol * value.abs());
    if abs_err > target {
        return Err(Error::ToleranceNotMet {
            value: value.to_f64_lossy(),
            estimate: abs_err.to_f64_lossy(),
            requested: target.to_f64_lossy(),
        });
    }
    Ok(Estimate {
        value,
        abs_err,
        evaluations: evaluations + outer.evaluations,
    })
}

/// One point of a predicted curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheoryPoint<T> {
    pub k: u64,
    pub predicted_c: T,
    pub range_id: RangeId,
    /// Whether the value came from the crossover integral.
    pub crossover: bool,
}

/// Predicted `c(k)` over a degree grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoryCurve<T> {
    pub n: u64,
    pub tau: T,
    pub points: Vec<TheoryPoint<T>>,
}

/// Whether `k` lies within a factor 4 of `sqrt(n)`.
pub fn in_crossover_window(k: u64, n: u64) -> bool {
    let (k2, n) = ((k as u128) * (k as u128), n as u128);
    16 * k2 >= n && k2 <= 16 * n
}

/// Predicted `c(k)` for every `k` of the grid: the range limits away from
/// `sqrt(n)` and `n^{2-tau}` times the crossover integral at `B = k/sqrt(n)`
/// for `k` in `[sqrt(n)/4, 4 sqrt(n)]`.
pub fn theory_curve<T: Real>(
    n: u64,
    k_grid: &[u64],
    c: &Constants<T>,
    spec: &QuadratureSpec<T>,
    a_ii: f64,
) -> Result<TheoryCurve<T>> {
    if n < 2 {
        return Err(Error::invalid("n", format!("{n} is below 2")));
    }
    let tau = c.tau.to_f64_lossy();
    let k_max = (n as f64).powf(1.0 / (tau - 1.0)) * (1.0 + 1e-12);
    let nn = T::count(n);
    let sqrt_n = nn.sqrt();
    let mut points = Vec::with_capacity(k_grid.len());
    for &k in k_grid {
        if k < 2 || k as f64 > k_max {
            return Err(Error::invalid(
                "k_grid",
                format!("{k} is outside [2, n^(1/(tau-1))] = [2, {}]", k_max.floor()),
            ));
        }
        let range_id = classify(k, n, tau, a_ii);
        let (predicted_c, crossover) = if in_crossover_window(k, n) {
            let b = T::count(k) / sqrt_n;
            let est = ck_crossover(b, c, spec)?;
            (est.value * nn.powf(T::lit(2.0) - c.tau), true)
        } else {
            (ck_limit_in(range_id, k, n, c)?, false)
        };
        points.push(TheoryPoint {
            k,
            predicted_c,
            range_id,
            crossover,
        });
    }
    Ok(TheoryCurve {
        n,
        tau: c.tau,
        points,
    })
}

/// Distinct integers roughly geometrically spaced over `[2, n^{1/(tau-1)}]`.
pub fn default_k_grid(n: u64, tau: f64, per_decade: usize) -> Vec<u64> {
    let hi = ((n as f64).powf(1.0 / (tau - 1.0)) * (1.0 + 1e-12)).floor().max(2.0);
    let steps = ((hi / 2.0).log10() * per_decade as f64).ceil().max(1.0) as usize;
    let ratio = (hi / 2.0).powf(1.0 / steps as f64);
    let mut grid: Vec<u64> = (0..=steps)
        .map(|i| ((2.0 * ratio.powi(i as i32)).round() as u64).clamp(2, hi as u64))
        .collect();
    grid.dedup();
    grid
}
