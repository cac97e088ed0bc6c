//! Log-gamma and digamma for positive real arguments.
//!
//! `ln Γ` uses a Taylor series of `ln Γ(1 + z)` on `[0.5, 2.5)`, the
//! recurrence `Γ(x + 1) = x Γ(x)` to reach that interval from either side
//! below 10, and the Stirling series above. Digamma uses upward recurrence
//! to `x >= 10` followed by its asymptotic expansion.

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// `ζ(k) - 1` for `k = 2..=30`.
#[allow(clippy::excessive_precision)]
const ZETA_MINUS_ONE: [f64; 29] = [
    6.44934066848226436e-1,
    2.02056903159594285e-1,
    8.23232337111381915e-2,
    3.69277551433699263e-2,
    1.73430619844491397e-2,
    8.34927738192282684e-3,
    4.07735619794433938e-3,
    2.00839282608221442e-3,
    9.94575127818085337e-4,
    4.94188604119464559e-4,
    2.46086553308048299e-4,
    1.22713347578489147e-4,
    6.12481350587048293e-5,
    3.05882363070204936e-5,
    1.52822594086518717e-5,
    7.63719763789976227e-6,
    3.81729326499983986e-6,
    1.90821271655393893e-6,
    9.53962033872796113e-7,
    4.76932986787806463e-7,
    2.3845050272773299e-7,
    1.19219925965311073e-7,
    5.96081890512594796e-8,
    2.98035035146522802e-8,
    1.49015548283650412e-8,
    7.45071178983542949e-9,
    3.72533402478845705e-9,
    1.86265972351304901e-9,
    9.31327432419668183e-10,
];

/// `B_{2k} / (2k (2k - 1))` for `k = 1..=8`.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// `B_{2k} / (2k)` for `k = 1..=7`.
const PSI_ASYMPTOTIC: [f64; 7] =
    [1.0 / 12.0, -1.0 / 120.0, 1.0 / 252.0, -1.0 / 240.0, 1.0 / 132.0, -691.0 / 32_760.0, 1.0 / 12.0];

/// `ln Γ(x)` for `x > 0`.
pub fn lgamma(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::DomainError(x));
    }
    Ok(ln_gamma(x))
}

/// `d/dx ln Γ(x)` for `x > 0`.
pub fn digamma(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::DomainError(x));
    }
    Ok(psi(x))
}

/// `Σ_{k>=2} (-1)^k (ζ(k) - 1) z^k / k`, accurate for `|z| <= 0.5`.
fn zeta_series(z: f64) -> f64 {
    let mut acc = 0.0;
    for (i, c) in ZETA_MINUS_ONE.iter().enumerate().rev() {
        let k = (i + 2) as f64;
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        acc = acc * z + sign * c / k;
    }
    acc * z * z
}

/// Unchecked `ln Γ`; callers guarantee `x > 0`.
pub(crate) fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        return ln_gamma(x + 1.0) - x.ln();
    }
    if x < 1.5 {
        let z = x - 1.0;
        return -z.ln_1p() + z * (1.0 - EULER_GAMMA) + zeta_series(z);
    }
    if x < 2.5 {
        // ln Γ(2 + z) = ln(1 + z) + ln Γ(1 + z); the ln(1 + z) terms cancel
        let z = x - 2.0;
        return z * (1.0 - EULER_GAMMA) + zeta_series(z);
    }
    if x < 10.0 {
        let mut y = x;
        let mut prod = 1.0;
        while y >= 2.5 {
            y -= 1.0;
            prod *= y;
        }
        return prod.ln() + ln_gamma(y);
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut series = 0.0;
    for c in STIRLING.iter().rev() {
        series = series * inv2 + c;
    }
    (x - 0.5) * x.ln() - x + HALF_LN_2PI + series * inv
}

/// Unchecked digamma; callers guarantee `x > 0`.
pub(crate) fn psi(x: f64) -> f64 {
    let mut y = x;
    let mut shift = 0.0;
    while y < 10.0 {
        shift += 1.0 / y;
        y += 1.0;
    }
    let inv2 = 1.0 / (y * y);
    let mut series = 0.0;
    for c in PSI_ASYMPTOTIC.iter().rev() {
        series = series * inv2 + c;
    }
    y.ln() - 0.5 / y - series * inv2 - shift
}
