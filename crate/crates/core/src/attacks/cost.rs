use crate::{Error, Result};

/// Cost of `k` modular multiplications on `n`-bit operands when reduction
/// runs only every `m` products: `(k/m)(Σ_{i<m} M(2^i n) + R(2^m n))`.
pub fn reduction_schedule_cost<M, R>(mul: M, reduce: R, n: f64, k: u32, m: u32) -> Result<f64>
where
    M: Fn(f64) -> f64,
    R: Fn(f64) -> f64,
{
    if m == 0 {
        return Err(Error::parameter("reduction interval must be at least 1"));
    }
    let grow = |i: u32| n * 2f64.powi(i as i32);
    let products: f64 = (0..m).map(|i| mul(grow(i))).sum();
    Ok(f64::from(k) / f64::from(m) * (products + reduce(grow(m))))
}

/// The interval `m ∈ 1..=k` minimizing [`reduction_schedule_cost`]; ties go
/// to the smaller interval.
pub fn optimal_reduction_interval<M, R>(mul: M, reduce: R, n: f64, k: u32) -> Result<u32>
where
    M: Fn(f64) -> f64,
    R: Fn(f64) -> f64,
{
    if k == 0 {
        return Err(Error::parameter("need at least one multiplication"));
    }
    let mut best = (1, reduction_schedule_cost(&mul, &reduce, n, k, 1)?);
    for m in 2..=k {
        let cost = reduction_schedule_cost(&mul, &reduce, n, k, m)?;
        if cost < best.1 {
            best = (m, cost);
        }
    }
    Ok(best.0)
}
