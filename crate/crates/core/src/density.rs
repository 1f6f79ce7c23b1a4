//! Deterministic Monte-Carlo estimation of gauge-ball densities.
//!
//! The unit ball of the box gauge is exactly the cube [-1,1]^5, so sampling
//! is rejection-free: draw h uniformly in the cube, map it to
//! `center * dilate(r, h)`, and count oracle hits. Samples are derived
//! counter-style — batch k uses ChaCha8 stream k — so an estimate depends
//! only on (seed, n), never on the thread count. With the default
//! `parallel` feature batches run under rayon; the sequential fallback walks
//! them in order and produces the identical hit count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::csets::{SetOracle, ZSpec};
use crate::f23::{FPt2, Pt2};
use crate::scalar::Q;

/// Samples per ChaCha stream; one batch is the unit of parallel work.
const BATCH: u64 = 8192;

/// Reference density of the E1 cone at the origin in the unit box ball,
/// (1/4)(13/12 - (11/15) 2^(-1/3) - 2^(2/3)/12), frozen from an independent
/// quadrature oracle (the acceptance suite recomputes it by Simpson rule).
pub const E1_REFERENCE_DENSITY: f64 = 0.092_250_714_986_910_89;

/// Exact fraction of the unit box ball covered by E2 = {x2>=0, x4>=0}.
pub const E2_REFERENCE_DENSITY: f64 = 0.25;

#[derive(Clone, Debug, Serialize)]
pub struct DensityEstimate {
    pub mean: f64,
    pub half_width_95: f64,
    pub n_samples: u64,
    pub hits: u64,
    pub radius: f64,
    pub center: [f64; 5],
    pub gauge: String,
    pub seed: u64,
}

impl DensityEstimate {
    fn from_hits(hits: u64, n: u64, radius: f64, center: &FPt2, seed: u64) -> Self {
        let mean = hits as f64 / n as f64;
        let half_width_95 = 1.96 * (mean * (1.0 - mean) / n as f64).sqrt();
        DensityEstimate {
            mean,
            half_width_95,
            n_samples: n,
            hits,
            radius,
            center: center.0,
            gauge: "box".to_string(),
            seed,
        }
    }
}

#[inline]
fn sample_point(rng: &mut ChaCha8Rng, center: &FPt2, r: f64) -> FPt2 {
    let mut h = [0.0f64; 5];
    for c in h.iter_mut() {
        *c = rng.gen::<f64>() * 2.0 - 1.0;
    }
    center.mul(&Pt2(h).dilate(&r))
}

fn batch_hits(
    oracles: &[&SetOracle],
    center: &FPt2,
    r: f64,
    seed: u64,
    stream: u64,
    len: u64,
) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut hits = vec![0u64; oracles.len()];
    for _ in 0..len {
        let p = sample_point(&mut rng, center, r);
        for (h, o) in hits.iter_mut().zip(oracles) {
            if o.contains_f(&p) {
                *h += 1;
            }
        }
    }
    hits
}

/// Hit counts for several oracles over one shared sample stream.
/// Sequential reference implementation; always available.
pub fn count_hits_seq(
    oracles: &[&SetOracle],
    center: &FPt2,
    r: f64,
    n: u64,
    seed: u64,
    stream_offset: u64,
) -> Vec<u64> {
    let batches = n.div_ceil(BATCH);
    let mut total = vec![0u64; oracles.len()];
    for b in 0..batches {
        let len = BATCH.min(n - b * BATCH);
        let hits = batch_hits(oracles, center, r, seed, stream_offset + b, len);
        for (t, h) in total.iter_mut().zip(hits) {
            *t += h;
        }
    }
    total
}

/// Data-parallel hit counting over indexed batches; bit-identical to the
/// sequential path for every thread count.
#[cfg(feature = "parallel")]
pub fn count_hits_par(
    oracles: &[&SetOracle],
    center: &FPt2,
    r: f64,
    n: u64,
    seed: u64,
    stream_offset: u64,
) -> Vec<u64> {
    use rayon::prelude::*;
    let batches = n.div_ceil(BATCH);
    (0..batches)
        .into_par_iter()
        .map(|b| {
            let len = BATCH.min(n - b * BATCH);
            batch_hits(oracles, center, r, seed, stream_offset + b, len)
        })
        .reduce(
            || vec![0u64; oracles.len()],
            |mut acc, hits| {
                for (a, h) in acc.iter_mut().zip(hits) {
                    *a += h;
                }
                acc
            },
        )
}

/// Feature-dispatched hit counting.
pub fn count_hits(
    oracles: &[&SetOracle],
    center: &FPt2,
    r: f64,
    n: u64,
    seed: u64,
    stream_offset: u64,
) -> Vec<u64> {
    #[cfg(feature = "parallel")]
    {
        count_hits_par(oracles, center, r, n, seed, stream_offset)
    }
    #[cfg(not(feature = "parallel"))]
    {
        count_hits_seq(oracles, center, r, n, seed, stream_offset)
    }
}

/// Fraction of the gauge ball `B(center, r)` covered by the oracle, with a
/// 95% binomial confidence half-width.
pub fn mc_density(oracle: &SetOracle, center: &FPt2, r: f64, n: u64, seed: u64) -> DensityEstimate {
    mc_density_stream(oracle, center, r, n, seed, 0)
}

/// Like [`mc_density`] but on a detached sample stream, so several estimates
/// under one seed stay independent.
pub fn mc_density_stream(
    oracle: &SetOracle,
    center: &FPt2,
    r: f64,
    n: u64,
    seed: u64,
    stream_offset: u64,
) -> DensityEstimate {
    let hits = count_hits(&[oracle], center, r, n, seed, stream_offset)[0];
    DensityEstimate::from_hits(hits, n, r, center, seed)
}

/// Estimates along a radius schedule, one detached stream per radius.
pub fn density_profile(
    oracle: &SetOracle,
    center: &FPt2,
    radii: &[f64],
    n: u64,
    seed: u64,
) -> Vec<DensityEstimate> {
    radii
        .iter()
        .enumerate()
        .map(|(i, &r)| mc_density_stream(oracle, center, r, n, seed, (i as u64 + 1) << 32))
        .collect()
}

/// Two-proportion z statistic for comparing estimates from independent
/// streams; |z| < 2.576 is equality at the 99% level.
pub fn z_statistic(a: &DensityEstimate, b: &DensityEstimate) -> f64 {
    let va = a.mean * (1.0 - a.mean) / a.n_samples as f64;
    let vb = b.mean * (1.0 - b.mean) / b.n_samples as f64;
    (a.mean - b.mean) / (va + vb).sqrt()
}

#[derive(Clone, Debug, Serialize)]
pub struct BlowupRow {
    pub ell: usize,
    /// cube of the zoom factor for the coarse (R) branch, exact decimal text
    pub zoom_cubed_big: String,
    pub big: DensityEstimate,
    /// cube of the zoom factor for the fine (r) branch
    pub zoom_cubed_small: String,
    pub small: DensityEstimate,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlowupExperiment {
    pub rows: Vec<BlowupRow>,
    /// gap between the two branches at the last row
    pub final_gap: f64,
}

/// Density sequences of the dilated pathological set at radius 1 about the
/// origin. The coarse branch dilates by the factors that blow the
/// translation set up to (almost) the whole line, trending to the E2 value;
/// the fine branch dilates by the factors that shrink it to (almost) {0},
/// trending to the E1 value.
pub fn blowup_experiment(spec: &ZSpec, l_max: usize, n: u64, seed: u64) -> BlowupExperiment {
    assert!(spec.depth >= 2 * l_max + 1, "ZSpec depth must cover 2*l_max + 1");
    let center = Pt2([0.0; 5]);
    let mut rows = Vec::with_capacity(l_max);
    for ell in 1..=l_max {
        let big_n = Q::from_integer(spec.n(2 * ell + 1).clone());
        let lam_big = &big_n * &big_n;
        let small_n = Q::from_integer(spec.n(2 * ell).clone());
        let lam_small = &small_n * &small_n;
        let o_big = spec.oracle_at_zoom_cubed(&lam_big);
        let o_small = spec.oracle_at_zoom_cubed(&lam_small);
        let big = mc_density_stream(&o_big, &center, 1.0, n, seed, (2 * ell as u64) << 33);
        let small = mc_density_stream(&o_small, &center, 1.0, n, seed, (2 * ell as u64 + 1) << 33);
        rows.push(BlowupRow {
            ell,
            zoom_cubed_big: lam_big.to_string(),
            big,
            zoom_cubed_small: lam_small.to_string(),
            small,
        });
    }
    let final_gap = rows.last().map(|r| r.big.mean - r.small.mean).unwrap_or(0.0);
    BlowupExperiment { rows, final_gap }
}
