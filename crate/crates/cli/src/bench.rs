use std::time::{Duration, Instant};

use clap::Args;
use cubelock::bigmath::{
    gen_safe_prime, powmod_fixed_base, powmod_fixed_base_par, Evaluation, FixedBaseTable, ModArith, Natural,
};
use cubelock::puzzle::{
    decrypt_traced, encrypt_padded, encrypt_with, reference_prime, DecryptOptions, PuzzleParams, BUNDLED_PRIMES,
};
use num_bigint::RandBigInt;
use serde_json::json;

use crate::error::CliError;
use crate::Ctx;

/// Sizes timed by `calibrate`.
pub const CALIBRATION_BITS: [u64; 3] = [4096, 16384, 70034];
/// Delays tabulated by `calibrate`.
pub const CALIBRATION_DELAYS: [f64; 4] = [1.0, 5.0, 30.0, 60.0];
/// Squarings per timed block.
const BLOCK_SQUARINGS: u64 = 256;

#[derive(Args, Debug)]
pub struct CalibrateArgs {
    /// Total measuring time in seconds, split across the sizes.
    #[arg(long, default_value_t = 3.0)]
    pub duration: f64,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Comma-separated prime sizes. 2048 and 4096 use bundled primes,
    /// 70034 the curated one, anything else is generated.
    #[arg(long, value_delimiter = ',', default_value = "2048,4096")]
    pub bits: Vec<u64>,
    #[arg(long, default_value_t = 5)]
    pub trials: usize,
    #[arg(long)]
    pub json: bool,
    /// Also time the fixed-base product tree, sequentially and in parallel.
    #[arg(long)]
    pub parallel: bool,
}

/// Measured speed at one operand size.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Speed {
    pub bits: u64,
    pub squarings_per_sec: f64,
}

/// Prime size `n` with `n = lambda(n) * t`, where `lambda` is the power law
/// through the measured speeds. `lambda` falls with `n`, so the root is
/// unique and bisection in log space finds it.
pub fn recommended_bits(speeds: &[Speed], t: f64) -> Option<u64> {
    if speeds.len() < 2 || t <= 0.0 {
        return None;
    }
    let pts: Vec<(f64, f64)> = speeds.iter().map(|s| ((s.bits as f64).ln(), s.squarings_per_sec.ln())).collect();
    let k = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / k, pts.iter().map(|p| p.1).sum::<f64>() / k);
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / sxx;
    let residual = |ln_n: f64| my + slope * (ln_n - mx) + t.ln() - ln_n;
    let (mut lo, mut hi) = (2f64.ln(), 1e12f64.ln());
    if residual(lo) < 0.0 || residual(hi) > 0.0 {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if residual(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo.exp().round() as u64)
}

fn calibration_modulus(ctx: &mut Ctx, bits: u64) -> Result<Natural, CliError> {
    if let Some(p) = reference_prime(bits) {
        return Ok(p);
    }
    if let Some(c) = BUNDLED_PRIMES.iter().find(|c| c.bits() == bits) {
        return Ok(c.value());
    }
    // Squaring speed does not depend on primality, so an odd modulus of the
    // right length stands in where no prime is bundled.
    let mut m = ctx.rng.gen_biguint(bits);
    m.set_bit(bits - 1, true);
    m.set_bit(0, true);
    Ok(m)
}

fn measure(ctx: &mut Ctx, modulus: &Natural, budget: Duration) -> Result<f64, CliError> {
    let arith = ModArith::new(modulus, ctx.config.reduction)?;
    let exp = Natural::from(1u32) << BLOCK_SQUARINGS;
    let mut x = ctx.rng.gen_biguint_below(modulus);
    let (mut squarings, start) = (0u64, Instant::now());
    loop {
        let (y, trace) = arith.pow(&x, &exp, 1, Evaluation::Sequential)?;
        x = y;
        squarings += trace.sequential_depth;
        if start.elapsed() >= budget {
            break;
        }
    }
    std::hint::black_box(&x);
    Ok(squarings as f64 / start.elapsed().as_secs_f64())
}

pub fn calibrate(ctx: &mut Ctx, args: &CalibrateArgs) -> Result<(), CliError> {
    if !(args.duration.is_finite() && args.duration > 0.0) {
        return Err(CliError::usage("--duration must be a positive number of seconds"));
    }
    let budget = Duration::from_secs_f64(args.duration / CALIBRATION_BITS.len() as f64);
    let mut speeds = Vec::new();
    for bits in CALIBRATION_BITS {
        let modulus = calibration_modulus(ctx, bits)?;
        let rate = measure(ctx, &modulus, budget)?;
        println!("lambda({bits}) = {rate:.0} squarings/s");
        speeds.push(Speed { bits, squarings_per_sec: rate });
    }
    println!("T (s) | recommended floor(log2 p)");
    for t in CALIBRATION_DELAYS {
        match recommended_bits(&speeds, t) {
            Some(n) => println!("{t:>5} | {n}"),
            None => println!("{t:>5} | out of range"),
        }
    }
    Ok(())
}

fn bench_prime(ctx: &mut Ctx, bits: u64) -> Result<(Natural, &'static str), CliError> {
    if let Some(p) = reference_prime(bits) {
        return Ok((p, "reference"));
    }
    if let Some(c) = BUNDLED_PRIMES.iter().find(|c| c.bits() == bits) {
        return Ok((c.value(), "curated"));
    }
    Ok((gen_safe_prime(bits, &mut ctx.rng)?, "generated"))
}

fn median(mut samples: Vec<Duration>) -> Duration {
    samples.sort();
    samples[samples.len() / 2]
}

pub fn bench(ctx: &mut Ctx, args: &BenchArgs) -> Result<(), CliError> {
    if args.bits.is_empty() || args.trials == 0 {
        return Err(CliError::usage("--bits and --trials must be nonempty and positive"));
    }
    let options = DecryptOptions {
        window: ctx.config.window_width,
        strategy: ctx.config.reduction,
        evaluation: Evaluation::Combined,
    };
    let mut rows = Vec::new();
    for &bits in &args.bits {
        let (p, source) = bench_prime(ctx, bits)?;
        let params = PuzzleParams::from_prime(p.clone(), 0.0, 0.0)?;
        let mut enc = Vec::new();
        let mut dec = Vec::new();
        let mut depth = 0;
        for _ in 0..args.trials {
            let x = ctx.rng.gen_biguint_below(&p);
            let t = Instant::now();
            std::hint::black_box(encrypt_padded(&x, &params)?);
            enc.push(t.elapsed());

            let ct = encrypt_with(b"bench", &params, ctx.config.seed_len, &mut ctx.rng)?;
            let t = Instant::now();
            let (_, trace) = decrypt_traced(&ct, &params, &options)?;
            dec.push(t.elapsed());
            depth = trace.sequential_depth;
        }
        let (e, d) = (median(enc), median(dec));
        let mut row = json!({
            "bits": p.bits(),
            "source": source,
            "trials": args.trials,
            "encrypt_median_ns": e.as_nanos() as f64,
            "decrypt_median_ns": d.as_nanos() as f64,
            "ratio": d.as_secs_f64() / e.as_secs_f64(),
            "decrypt_depth": depth,
        });
        if args.parallel {
            let table = FixedBaseTable::new(&Natural::from(3u32), &p)?;
            let exps: Vec<Natural> = (0..args.trials).map(|_| ctx.rng.gen_biguint_below(&p)).collect();
            let mut seq = Vec::new();
            let mut par = Vec::new();
            for exp in &exps {
                let t = Instant::now();
                std::hint::black_box(powmod_fixed_base(&table, exp)?);
                seq.push(t.elapsed());
                let t = Instant::now();
                std::hint::black_box(powmod_fixed_base_par(&table, exp)?);
                par.push(t.elapsed());
            }
            row["fixed_base_sequential_ns"] = json!(median(seq).as_nanos() as f64);
            row["fixed_base_parallel_ns"] = json!(median(par).as_nanos() as f64);
        }
        rows.push(row);
    }
    if args.json {
        println!("{}", json!({ "results": rows }));
        return Ok(());
    }
    for row in &rows {
        let ms = |key: &str| row[key].as_f64().unwrap_or(0.0) / 1e6;
        print!(
            "bits={} source={} encrypt_ms={:.4} decrypt_ms={:.3} ratio={:.0} depth={}",
            row["bits"],
            row["source"].as_str().unwrap_or(""),
            ms("encrypt_median_ns"),
            ms("decrypt_median_ns"),
            row["ratio"].as_f64().unwrap_or(0.0),
            row["decrypt_depth"]
        );
        if args.parallel {
            print!(
                " fixed_base_seq_ms={:.3} fixed_base_par_ms={:.3}",
                ms("fixed_base_sequential_ns"),
                ms("fixed_base_parallel_ns")
            );
        }
        println!();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recommendation_solves_the_fixed_point() {
        // lambda(n) = 1e8 / n  gives  n = sqrt(1e8 t).
        let speeds: Vec<Speed> =
            [1000u64, 10000, 100000].iter().map(|&b| Speed { bits: b, squarings_per_sec: 1e8 / b as f64 }).collect();
        assert_eq!(recommended_bits(&speeds, 1.0), Some(10000));
        assert_eq!(recommended_bits(&speeds, 4.0), Some(20000));
        assert_eq!(recommended_bits(&speeds[..1], 1.0), None);
    }

    #[test]
    fn constant_speed_is_linear_in_t() {
        let speeds = [Speed { bits: 100, squarings_per_sec: 5000.0 }, Speed { bits: 200, squarings_per_sec: 5000.0 }];
        assert_eq!(recommended_bits(&speeds, 3.0), Some(15000));
    }
}
