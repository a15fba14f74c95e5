use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::RandBigInt;
use rand::Rng;

use super::perm::{PermKind, Permutation};
use crate::bigmath::Natural;
use crate::puzzle::{cube, PuzzleParams};
use crate::Result;

/// Column labels of the chaining-speed report, in order.
pub const BENCH_COLUMNS: [&str; 5] = ["Cubing", "AES-256", "Thorp", "Swap-Or-Not", "Mix-And-Cut"];

/// Median wall time of one evaluation per chaining method.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchReport {
    pub bits: u64,
    pub rounds: u32,
    pub trials: usize,
    pub medians: Vec<(&'static str, Duration)>,
}

impl BenchReport {
    pub fn median(&self, column: &str) -> Option<Duration> {
        self.medians.iter().find(|(c, _)| *c == column).map(|(_, d)| *d)
    }
}

impl fmt::Display for BenchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p: {} bits, shuffle rounds: {}, trials: {}", self.bits, self.rounds, self.trials)?;
        let head: Vec<String> = self.medians.iter().map(|(c, _)| format!("{c:>12}")).collect();
        writeln!(f, "{}", head.join(" |"))?;
        let row: Vec<String> = self.medians.iter().map(|(_, d)| format!("{:>10.4}ms", d.as_secs_f64() * 1e3)).collect();
        write!(f, "{}", row.join(" |"))
    }
}

fn median_of(mut samples: Vec<Duration>) -> Duration {
    samples.sort();
    samples[samples.len() / 2]
}

fn time_each(trials: usize, mut run: impl FnMut()) -> Duration {
    median_of(
        (0..trials)
            .map(|_| {
                let start = Instant::now();
                run();
                start.elapsed()
            })
            .collect(),
    )
}

/// Times one cube, one block-cipher FPE stage and one run of each shuffle
/// with `rounds` rounds (default: the bit length of `p`) on random inputs
/// below `p`. Runs on the calling thread only; setup and key schedules are
/// excluded from the timings.
pub fn chain_bench<R: Rng + ?Sized>(
    p: &Natural,
    trials: usize,
    rounds: Option<u32>,
    rng: &mut R,
) -> Result<BenchReport> {
    let params = PuzzleParams::from_prime(p.clone(), 0.0, 0.0)?;
    let rounds = rounds.unwrap_or(p.bits() as u32);
    let trials = trials.max(1);
    let inputs: Vec<Natural> = (0..trials).map(|_| rng.gen_biguint_below(p)).collect();
    let mut medians = Vec::with_capacity(BENCH_COLUMNS.len());

    let mut i = 0;
    medians.push((
        BENCH_COLUMNS[0],
        time_each(trials, || {
            std::hint::black_box(cube(&inputs[i % trials], &params));
            i += 1;
        }),
    ));
    let kinds = [PermKind::CycleWalkFpe, PermKind::Thorp, PermKind::SwapOrNot, PermKind::MixAndCut];
    for (kind, label) in kinds.into_iter().zip(&BENCH_COLUMNS[1..]) {
        let key: [u8; 32] = rng.gen();
        let perm = Permutation::new(kind, p, &key, rounds)?;
        let mut i = 0;
        medians.push((
            *label,
            time_each(trials, || {
                std::hint::black_box(perm.forward(&inputs[i % trials]).expect("input below p"));
                i += 1;
            }),
        ));
    }
    Ok(BenchReport { bits: p.bits(), rounds, trials, medians })
}
