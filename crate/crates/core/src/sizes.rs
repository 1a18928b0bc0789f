//! Integer readings of fractional size thresholds such as `delta * n`.
//!
//! Products that land within `SNAP` of an integer are treated as that
//! integer, so `0.1 * 30` is 3 rather than 3.0000000000000004.

const SNAP: f64 = 1e-9;

/// Smallest integer `k` with `k >= x`.
pub fn ceil_count(x: f64) -> usize {
    let r = x.round();
    let v = if (x - r).abs() < SNAP { r } else { x.ceil() };
    v.max(0.0) as usize
}

/// Largest integer `k` with `k <= x`.
pub fn floor_count(x: f64) -> usize {
    let r = x.round();
    let v = if (x - r).abs() < SNAP { r } else { x.floor() };
    v.max(0.0) as usize
}

/// Binomial coefficient, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}
