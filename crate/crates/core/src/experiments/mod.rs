//! Seeded, deterministic experiment runs over `(p, k, d, m)` grids.

mod census;
mod config;
mod interpolate;
mod report;
mod selftest;
mod verify;

pub use census::{boundary_census, run_census, CensusConfig};
pub use config::{parse_list, parse_range, Format, MSelect, RunConfig, SigmaChoice};
pub use interpolate::{parse_points, run_interpolate, InterpolationReport, PointCheck};
pub use report::{BoundaryRate, CensusRow, CheckClass, CheckResult, Rate, Report, Summary};
pub use selftest::{run_selftest, SelftestOptions};
pub use verify::run_verify;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::field::GaloisField;

/// Environment variable overriding the worker count.
pub const THREADS_ENV: &str = "A1LAB_THREADS";

/// Every run builds its fields with this modulus seed, so element encodings in
/// point files and reports mean the same thing across runs.
pub const FIELD_SEED: u64 = 0;

/// `seed ^ first 8 bytes of sha256(name, p, k, d, m, trial)`.
pub fn trial_seed(seed: u64, name: &str, p: u64, k: usize, d: usize, m: usize, trial: usize) -> u64 {
    let mut h = Sha256::new();
    h.update(name.as_bytes());
    for v in [p, k as u64, d as u64, m as u64, trial as u64] {
        h.update(v.to_le_bytes());
    }
    let digest = h.finalize();
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    seed ^ u64::from_le_bytes(bytes)
}

pub fn trial_rng(seed: u64, name: &str, p: u64, k: usize, d: usize, m: usize, trial: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(trial_seed(seed, name, p, k, d, m, trial))
}

/// Worker count: explicit request, then `A1LAB_THREADS`, then rayon's default.
pub fn thread_count(requested: Option<usize>) -> Option<usize> {
    requested.or_else(|| {
        std::env::var(THREADS_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
    })
}

pub(crate) fn with_pool<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_count(threads) {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {}", e)))?;
    Ok(pool.install(job))
}

pub fn field(p: u64, k: usize) -> Result<GaloisField> {
    GaloisField::new(p, k, FIELD_SEED)
}

/// Smallest `k` with `p^k >= 2^bits` (1 for `p < 2`).
pub fn degree_for_bits(p: u64, bits: u32) -> usize {
    if p < 2 {
        return 1;
    }
    let target = 1u128 << bits;
    let mut k = 1;
    let mut q = p as u128;
    while q < target {
        q *= p as u128;
        k += 1;
    }
    k
}
