//! Deterministic parallel sampling.
//!
//! Samples are produced in fixed-size chunks, each chunk driven by its own
//! ChaCha stream derived from (seed, chunk index). The chunk layout does not
//! depend on how many rayon workers execute it, so output is bit-identical
//! for any `--threads` setting.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Samples per RNG stream. Fixed: changing it changes outputs.
pub const CHUNK: usize = 8192;

/// RNG for chunk `index` of a run seeded with `seed`.
pub fn chunk_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index.wrapping_add(1));
    rng
}

/// Draw `n` records of `width` f64s each, in parallel over chunks.
///
/// `fill` writes one record per call and must consume randomness only from
/// the RNG handed to it.
pub fn sample_records<F>(n: usize, width: usize, seed: u64, fill: F) -> Vec<f64>
where
    F: Fn(&mut ChaCha8Rng, &mut [f64]) + Sync,
{
    let mut out = vec![0.0; n * width];
    out.par_chunks_mut(CHUNK * width)
        .enumerate()
        .for_each(|(chunk_idx, slab)| {
            let mut rng = chunk_rng(seed, chunk_idx as u64);
            for rec in slab.chunks_mut(width) {
                fill(&mut rng, rec);
            }
        });
    out
}
