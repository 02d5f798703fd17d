//! Adaptive Gauss–Kronrod quadrature.
//!
//! A globally adaptive 7/15-point Gauss–Kronrod scheme in the spirit of
//! QUADPACK's `qag`: the interval with the largest error estimate is
//! bisected until the summed estimate meets `max(abs_tol, rel_tol * |I|)`.

use crate::error::{Error, Result};
use crate::num::Real;

/// Tolerances for one integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    /// Cut-off `T` for integrals over `(0, inf)`; `None` lets the caller pick
    /// one from the tail bound so that the discarded mass is below `abs_tol`.
    pub truncation_bound: Option<T>,
    pub max_subdivisions: usize,
}

impl<T: Real> QuadratureSpec<T> {
    pub fn new(abs_tol: T, rel_tol: T) -> Result<Self> {
        if !(abs_tol > T::zero()) || !(rel_tol > T::zero()) {
            return Err(Error::invalid("tolerance", "tolerances must be positive"));
        }
        Ok(QuadratureSpec {
            abs_tol,
            rel_tol,
            truncation_bound: None,
            max_subdivisions: 2000,
        })
    }

    pub fn with_truncation_bound(mut self, bound: T) -> Self {
        self.truncation_bound = Some(bound);
        self
    }

    /// Same spec with both tolerances halved.
    pub fn halved(self) -> Self {
        let two = T::lit(2.0);
        QuadratureSpec {
            abs_tol: self.abs_tol / two,
            rel_tol: self.rel_tol / two,
            ..self
        }
    }
}

impl Default for QuadratureSpec<f64> {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            truncation_bound: None,
            max_subdivisions: 2000,
        }
    }
}

impl Default for QuadratureSpec<f32> {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-6,
            rel_tol: 1e-5,
            truncation_bound: None,
            max_subdivisions: 2000,
        }
    }
}

/// An integral value together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub abs_err: T,
    pub evaluations: usize,
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Segment<T> {
    a: T,
    b: T,
    value: T,
    err: T,
}

/// One 15-point Kronrod evaluation with the embedded 7-point Gauss error.
fn kronrod15<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> Segment<T> {
    let half = T::lit(0.5);
    let center = half * (a + b);
    let half_len = half * (b - a);
    let f_center = f(center);

    let mut res_k = f_center * T::lit(WGK[7]);
    let mut res_g = f_center * T::lit(WG[3]);
    let mut res_abs = res_k.abs();
    let mut fv1 = [T::zero(); 7];
    let mut fv2 = [T::zero(); 7];

    for j in 0..7 {
        let x = half_len * T::lit(XGK[j]);
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k = res_k + T::lit(WGK[j]) * (f1 + f2);
        res_abs = res_abs + T::lit(WGK[j]) * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g = res_g + T::lit(WG[j / 2]) * (f1 + f2);
        }
    }

    let mean = res_k * half;
    let mut res_asc = T::lit(WGK[7]) * (f_center - mean).abs();
    for j in 0..7 {
        res_asc = res_asc + T::lit(WGK[j]) * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let abs_half = half_len.abs();
    let value = res_k * half_len;
    res_abs = res_abs * abs_half;
    res_asc = res_asc * abs_half;
    let mut err = ((res_k - res_g) * half_len).abs();

    if res_asc != T::zero() && err != T::zero() {
        let scale = (T::lit(200.0) * err / res_asc).powf(T::lit(1.5));
        err = res_asc * scale.min(T::one());
    }
    let round_floor = T::lit(50.0) * T::epsilon() * res_abs;
    if res_abs > T::min_positive_value() / (T::lit(50.0) * T::epsilon()) {
        err = err.max(round_floor);
    }

    Segment { a, b, value, err }
}

/// Integrates `f` over the finite interval `[a, b]`.
pub fn integrate<T, F>(mut f: F, a: T, b: T, spec: &QuadratureSpec<T>) -> Result<Estimate<T>>
where
    T: Real,
    F: FnMut(T) -> T,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::invalid("interval", "integration limits must be finite"));
    }
    if a == b {
        return Ok(Estimate {
            value: T::zero(),
            abs_err: T::zero(),
            evaluations: 0,
        });
    }

    let mut segments = vec![kronrod15(&mut f, a, b)];
    let mut evaluations = 15;
    loop {
        let total: T = segments.iter().fold(T::zero(), |acc, s| acc + s.value);
        let err: T = segments.iter().fold(T::zero(), |acc, s| acc + s.err);
        let target = spec.abs_tol.max(spec.rel_tol * total.abs());
        if err <= target {
            return Ok(Estimate {
                value: total,
                abs_err: err,
                evaluations,
            });
        }
        if segments.len() >= spec.max_subdivisions {
            return Err(Error::ToleranceNotMet {
                value: total.to_f64_lossy(),
                estimate: err.to_f64_lossy(),
                requested: target.to_f64_lossy(),
            });
        }

        let (worst, _) = segments
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |best, (i, s)| {
                if s.err > best.1 {
                    (i, s.err)
                } else {
                    best
                }
            });
        let seg = segments.swap_remove(worst);
        let mid = T::lit(0.5) * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            // interval can no longer be split in this precision
            return Err(Error::ToleranceNotMet {
                value: total.to_f64_lossy(),
                estimate: err.to_f64_lossy(),
                requested: target.to_f64_lossy(),
            });
        }
        segments.push(kronrod15(&mut f, seg.a, mid));
        segments.push(kronrod15(&mut f, mid, seg.b));
        evaluations += 30;
    }
}

/// Integrates `f(t)` over `[t_lo, t_hi]` (both positive) after the substitution
/// `t = e^s`, which turns algebraic endpoint behaviour into exponential decay.
pub fn integrate_log<T, F>(mut f: F, t_lo: T, t_hi: T, spec: &QuadratureSpec<T>) -> Result<Estimate<T>>
where
    T: Real,
    F: FnMut(T) -> T,
{
    if !(t_lo > T::zero() && t_hi > T::zero()) {
        return Err(Error::invalid("interval", "log-domain limits must be positive"));
    }
    integrate(
        |s: T| {
            let t = s.exp();
            f(t) * t
        },
        t_lo.ln(),
        t_hi.ln(),
        spec,
    )
}
