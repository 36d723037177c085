//! Jacobi elliptic functions for real arguments and on the lines `j·K + i·s`.
//!
//! Everything runs on the arithmetic-geometric mean: the quarter period is
//! `π / (2·AGM(1, k′))`, and `sn, cn, dn` come from the descending Landen
//! recursion that shares the same AGM sequence.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `cn(s; k′)` closer to zero than this is treated as a pole.
pub const POLE_EXCLUSION: f64 = 1e-13;

const AGM_MAX_STEPS: usize = 64;

/// Modulus, complementary modulus and both quarter periods.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticContext {
    pub k: f64,
    pub k_prime: f64,
    #[serde(rename = "K")]
    pub big_k: f64,
    #[serde(rename = "K_prime")]
    pub big_k_prime: f64,
}

impl EllipticContext {
    /// Requires `k ∈ (0, 1)`.
    pub fn new(k: f64) -> Result<Self> {
        if !(k > 0.0 && k < 1.0) {
            return Err(Error::ModulusOutOfRange(k));
        }
        Ok(Self::from_pair(k, ((1.0 - k) * (1.0 + k)).sqrt()))
    }

    /// From a modulus and its complement computed independently, which keeps
    /// full precision when one of them is tiny.
    pub(crate) fn from_pair(k: f64, k_prime: f64) -> Self {
        Self {
            k,
            k_prime,
            big_k: FRAC_PI_2 / agm(1.0, k_prime),
            big_k_prime: FRAC_PI_2 / agm(1.0, k),
        }
    }

    /// The context with `k` and `k′` exchanged.
    pub fn complement(&self) -> Self {
        Self { k: self.k_prime, k_prime: self.k, big_k: self.big_k_prime, big_k_prime: self.big_k }
    }
}

fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..AGM_MAX_STEPS {
        if (a - b).abs() <= f64::EPSILON * a {
            break;
        }
        let m = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = m;
    }
    a
}

/// Complete elliptic integral of the first kind, `K(k)` for `k ∈ [0, 1)`.
pub fn complete_k(k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::ModulusOutOfRange(k));
    }
    Ok(FRAC_PI_2 / agm(1.0, ((1.0 - k) * (1.0 + k)).sqrt()))
}

/// `(sn, cn, dn)` at one argument.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JacobiTriple<T = f64> {
    pub sn: T,
    pub cn: T,
    pub dn: T,
}

/// Jacobi elliptic functions for real `u` and `k ∈ [0, 1]`.
pub fn jacobi(u: f64, k: f64) -> JacobiTriple {
    assert!((0.0..=1.0).contains(&k), "modulus {k} outside [0, 1]");
    if k == 0.0 {
        let (s, c) = u.sin_cos();
        return JacobiTriple { sn: s, cn: c, dn: 1.0 };
    }
    if k == 1.0 {
        let sech = 1.0 / u.cosh();
        return JacobiTriple { sn: u.tanh(), cn: sech, dn: sech };
    }
    jacobi_with(u, k, ((1.0 - k) * (1.0 + k)).sqrt())
}

/// Landen recursion with the complement supplied by the caller.
pub(crate) fn jacobi_with(u: f64, k: f64, k_prime: f64) -> JacobiTriple {
    let big_k = FRAC_PI_2 / agm(1.0, k_prime);
    let period = 4.0 * big_k;
    let n = (u / period).round();
    let u = (-n).mul_add(period, u);

    let mut a = [0.0f64; AGM_MAX_STEPS + 1];
    let mut c = [0.0f64; AGM_MAX_STEPS + 1];
    a[0] = 1.0;
    c[0] = k;
    let mut b = k_prime;
    let mut steps = 0;
    while steps < AGM_MAX_STEPS && c[steps].abs() > f64::EPSILON * a[steps] {
        let an = a[steps];
        a[steps + 1] = 0.5 * (an + b);
        c[steps + 1] = 0.5 * (an - b);
        b = (an * b).sqrt();
        steps += 1;
    }
    let mut phi = (1u64 << steps) as f64 * a[steps] * u;
    for i in (1..=steps).rev() {
        phi = 0.5 * (phi + (c[i] / a[i] * phi.sin()).asin());
    }
    let (sn, cn) = phi.sin_cos();
    // dn > 0 on the real line; this form stays accurate where cn vanishes
    let dn = (cn * cn + k_prime * k_prime * sn * sn).sqrt();
    JacobiTriple { sn, cn, dn }
}

/// The argument `t = j·K + i·s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShiftedArgument {
    pub quarter_multiple: i32,
    pub s: f64,
}

/// A value `factor · num / den` with real `num` and `den`, so that poles are
/// exact zeros of `den`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Ratio {
    pub factor: Complex64,
    pub num: f64,
    pub den: f64,
}

impl Ratio {
    fn new(factor: Complex64, num: f64, den: f64) -> Self {
        Self { factor, num, den }
    }

    pub fn value(&self) -> Complex64 {
        self.factor * (self.num / self.den)
    }
}

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `sn, cn, dn` at `j·K + i·s`, each as a [`Ratio`].
///
/// The imaginary transformation gives the values on the imaginary axis in
/// terms of `(s; k′)`, and each quarter-period shift is applied in closed form.
pub(crate) fn shifted_ratios(j: i32, s: f64, ctx: &EllipticContext) -> JacobiTriple<Ratio> {
    let t = jacobi_with(s, ctx.k_prime, ctx.k);
    let kp = ctx.k_prime;
    match j.rem_euclid(4) {
        0 => JacobiTriple {
            sn: Ratio::new(I, t.sn, t.cn),
            cn: Ratio::new(ONE, 1.0, t.cn),
            dn: Ratio::new(ONE, t.dn, t.cn),
        },
        1 => JacobiTriple {
            sn: Ratio::new(ONE, 1.0, t.dn),
            cn: Ratio::new(-I * kp, t.sn, t.dn),
            dn: Ratio::new(ONE * kp, t.cn, t.dn),
        },
        2 => JacobiTriple {
            sn: Ratio::new(-I, t.sn, t.cn),
            cn: Ratio::new(-ONE, 1.0, t.cn),
            dn: Ratio::new(ONE, t.dn, t.cn),
        },
        _ => JacobiTriple {
            sn: Ratio::new(-ONE, 1.0, t.dn),
            cn: Ratio::new(I * kp, t.sn, t.dn),
            dn: Ratio::new(ONE * kp, t.cn, t.dn),
        },
    }
}

/// `cos(j·π/2 + i·s)`, the circular counterpart used by the conic and
/// deltoid branches.
pub(crate) fn shifted_cos(j: i32, s: f64) -> Ratio {
    match j.rem_euclid(4) {
        0 => Ratio::new(ONE, s.cosh(), 1.0),
        1 => Ratio::new(-I, s.sinh(), 1.0),
        2 => Ratio::new(-ONE, s.cosh(), 1.0),
        _ => Ratio::new(I, s.sinh(), 1.0),
    }
}

/// Jacobi functions at `j·K + i·s`.
pub fn jacobi_shifted(arg: ShiftedArgument, ctx: &EllipticContext) -> Result<JacobiTriple<Complex64>> {
    let r = shifted_ratios(arg.quarter_multiple, arg.s, ctx);
    if arg.quarter_multiple.rem_euclid(2) == 0 && r.cn.den.abs() < POLE_EXCLUSION {
        return Err(Error::PoleProximity(r.cn.den));
    }
    Ok(JacobiTriple { sn: r.sn.value(), cn: r.cn.value(), dn: r.dn.value() })
}

/// `dn/cn`.
pub fn dc(u: f64, k: f64) -> f64 {
    let t = jacobi(u, k);
    t.dn / t.cn
}

/// The `θ ∈ [0, K(k))` with `dc(θ; k) = v`.
///
/// Bisection on `cd = 1/dc`, which falls from 1 to 0 over `[0, K]`, then
/// Newton steps on the same function.
pub fn dc_inverse(v: f64, k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::ModulusOutOfRange(k));
    }
    dc_inverse_with(v, k, ((1.0 - k) * (1.0 + k)).sqrt())
}

pub(crate) fn dc_inverse_with(v: f64, k: f64, k_prime: f64) -> Result<f64> {
    if v.is_nan() || v < 1.0 - 1e-12 {
        return Err(Error::DomainError(v));
    }
    if v <= 1.0 {
        return Ok(0.0);
    }
    let big_k = FRAC_PI_2 / agm(1.0, k_prime);
    let target = 1.0 / v;
    let cd = |u: f64| {
        let t = jacobi_with(u, k, k_prime);
        (t.cn / t.dn, t.sn, t.dn)
    };
    let (mut lo, mut hi) = (0.0, big_k);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if cd(mid).0 > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut u = 0.5 * (lo + hi);
    for _ in 0..3 {
        let (f, sn, dn) = cd(u);
        let slope = -k_prime * k_prime * sn / (dn * dn);
        if slope == 0.0 {
            break;
        }
        let next = u - (f - target) / slope;
        if !(lo..=hi).contains(&next) {
            break;
        }
        u = next;
    }
    Ok(u)
}

/// The `θ ∈ [0, K(k))` with `sc(θ; k) = t`, for `t ≥ 0`.
///
/// Unlike [`dc_inverse`] this stays well conditioned as `k → 1`, where `dc`
/// flattens towards 1.
pub(crate) fn sc_inverse_with(t: f64, k: f64, k_prime: f64) -> Result<f64> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::DomainError(t));
    }
    let big_k = FRAC_PI_2 / agm(1.0, k_prime);
    // sn − t·cn rises through zero on [0, K]
    let f = |u: f64| {
        let j = jacobi_with(u, k, k_prime);
        (j.sn - t * j.cn, j.dn * (j.cn + t * j.sn))
    };
    let (mut lo, mut hi) = (0.0, big_k);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if f(mid).0 < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut u = 0.5 * (lo + hi);
    for _ in 0..3 {
        let (v, slope) = f(u);
        if slope == 0.0 {
            break;
        }
        let next = u - v / slope;
        if !(lo..=hi).contains(&next) {
            break;
        }
        u = next;
    }
    Ok(u)
}
