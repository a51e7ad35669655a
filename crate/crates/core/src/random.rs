//! Seeded samplers for every random test object.
//!
//! All samplers are pure functions of their arguments. Each one draws from a
//! ChaCha8 stream seeded with `seed` on its own stream id, so e.g. a unitary and
//! a Hermitian matrix drawn with the same seed are unrelated.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::eigen::ProjectionFamily;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::matrix::{ComplexMatrix, HermitianMatrix};

const STREAM_UNITARY: u64 = 1;
const STREAM_HERMITIAN: u64 = 2;
const STREAM_PROJECTIONS: u64 = 3;
const STREAM_GAPPED: u64 = 4;

/// Generator for stream `stream` under `seed`.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Haar-distributed unitary: modified Gram–Schmidt (twice) on a complex
/// Gaussian matrix. Gram–Schmidt leaves a positive real `R` diagonal, which is
/// the phase fix that makes the `Q` factor Haar.
pub fn unitary_from_rng<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = (0..dim)
        .map(|_| (0..dim).map(|_| gaussian(rng)).collect())
        .collect();
    for j in 0..dim {
        for _pass in 0..2 {
            for k in 0..j {
                let (done, rest) = cols.split_at_mut(j);
                let qk = &done[k];
                let proj: Complex64 = qk
                    .iter()
                    .zip(rest[0].iter())
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                for (x, q) in rest[0].iter_mut().zip(qk) {
                    *x -= proj * q;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for x in cols[j].iter_mut() {
            *x /= norm;
        }
    }
    ComplexMatrix::from_fn(dim, dim, |i, j| cols[j][i])
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_unitary(dim: usize, seed: u64) -> Result<ComplexMatrix> {
    if dim == 0 {
        return Err(Error::InvalidArgument(
            "dimension must be at least 1".into(),
        ));
    }
    Ok(unitary_from_rng(dim, &mut rng_for(seed, STREAM_UNITARY)))
}

/// Hermitian matrix with spectrum drawn uniformly from `J`'s sampling range.
pub fn hermitian_in_from_rng<R: Rng + ?Sized>(
    j: &Interval,
    dim: usize,
    rng: &mut R,
) -> HermitianMatrix {
    let (lo, hi) = j.sampling_range();
    let values: Vec<f64> = (0..dim).map(|_| rng.gen_range(lo..=hi)).collect();
    let u = unitary_from_rng(dim, rng);
    HermitianMatrix::from_spectrum(&u, &values)
}

pub fn random_hermitian_in(j: &Interval, dim: usize, seed: u64) -> Result<HermitianMatrix> {
    if dim == 0 {
        return Err(Error::InvalidArgument(
            "dimension must be at least 1".into(),
        ));
    }
    Ok(hermitian_in_from_rng(
        j,
        dim,
        &mut rng_for(seed, STREAM_HERMITIAN),
    ))
}

/// Hermitian matrix whose eigenvalues are pairwise at least `min_gap` apart:
/// the sampling range is split into `dim` equal bins and one eigenvalue is drawn
/// from the inner part of each bin.
pub fn gapped_hermitian_from_rng<R: Rng + ?Sized>(
    j: &Interval,
    dim: usize,
    min_gap: f64,
    rng: &mut R,
) -> Result<HermitianMatrix> {
    let (lo, hi) = j.sampling_range();
    let width = (hi - lo) / dim as f64;
    if width <= min_gap {
        return Err(Error::InvalidArgument(format!(
            "cannot fit {dim} eigenvalues {min_gap} apart in {j}"
        )));
    }
    let values: Vec<f64> = (0..dim)
        .map(|i| {
            let start = lo + i as f64 * width + 0.5 * min_gap;
            start + rng.gen::<f64>() * (width - min_gap)
        })
        .collect();
    let u = unitary_from_rng(dim, rng);
    Ok(HermitianMatrix::from_spectrum(&u, &values))
}

pub fn random_gapped_hermitian(
    j: &Interval,
    dim: usize,
    min_gap: f64,
    seed: u64,
) -> Result<HermitianMatrix> {
    if dim == 0 {
        return Err(Error::InvalidArgument(
            "dimension must be at least 1".into(),
        ));
    }
    gapped_hermitian_from_rng(j, dim, min_gap, &mut rng_for(seed, STREAM_GAPPED))
}

/// `k` orthogonal projections of rank ≥ 1 summing to `I`: the columns of a
/// random unitary are shuffled and cut into `k` nonempty groups.
pub fn projection_family_from_rng<R: Rng + ?Sized>(
    dim: usize,
    k: usize,
    rng: &mut R,
) -> Result<ProjectionFamily> {
    if k == 0 || k > dim {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= k <= dim, got k={k}, dim={dim}"
        )));
    }
    let u = unitary_from_rng(dim, rng);
    let mut columns: Vec<usize> = (0..dim).collect();
    columns.shuffle(rng);
    let mut cuts: Vec<usize> = (1..dim).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(k - 1).collect();
    cuts.sort_unstable();
    cuts.push(dim);

    let mut projections = Vec::with_capacity(k);
    let mut start = 0;
    for end in cuts {
        let group = &columns[start..end];
        let p = ComplexMatrix::from_fn(dim, dim, |r, c| {
            group.iter().map(|&g| u[(r, g)] * u[(c, g)].conj()).sum()
        });
        projections.push(HermitianMatrix::hermitian_part(&p));
        start = end;
    }
    if k == 1 {
        return Ok(ProjectionFamily::trivial(dim));
    }
    ProjectionFamily::new(projections)
}

pub fn random_projection_family(dim: usize, k: usize, seed: u64) -> Result<ProjectionFamily> {
    projection_family_from_rng(dim, k, &mut rng_for(seed, STREAM_PROJECTIONS))
}

/// A single orthogonal projection of rank `rank`, as `V V*` for the first
/// `rank` columns of a random unitary.
pub fn projection_from_rng<R: Rng + ?Sized>(
    dim: usize,
    rank: usize,
    rng: &mut R,
) -> HermitianMatrix {
    let u = unitary_from_rng(dim, rng);
    let p = ComplexMatrix::from_fn(dim, dim, |r, c| {
        (0..rank).map(|g| u[(r, g)] * u[(c, g)].conj()).sum()
    });
    HermitianMatrix::hermitian_part(&p)
}
