//! Pinching through roots of unity, the contraction-pair decomposition of an
//! operator lying between a constant and an upper bound, and contraction-pair
//! sampling.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::Rng;

use crate::eigen::{eigh, loewner_margin, psd_tol, ProjectionFamily};
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, HermitianMatrix};
use crate::random::{rng_for, unitary_from_rng};

pub const PAIR_TOL: f64 = 1e-10;
/// Residual above which `average_conjugations` rejects its unitary.
pub const UNITARY_TOL: f64 = 1e-8;
/// Relative eigenvalue floor for `(Y − α)^{-1/2}`.
pub const INV_SQRT_FLOOR: f64 = 1e-12;

const STREAM_PAIR: u64 = 5;

/// Operators `(C, D)` with `C*C + D*D = I`.
#[derive(Clone, Debug, PartialEq)]
pub struct ContractionPair {
    c: ComplexMatrix,
    d: ComplexMatrix,
}

impl ContractionPair {
    pub fn new(c: ComplexMatrix, d: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(c, d, PAIR_TOL)
    }

    pub fn with_tolerance(c: ComplexMatrix, d: ComplexMatrix, tol: f64) -> Result<Self> {
        if !c.is_square() || !d.is_square() || c.rows() != d.rows() {
            return Err(Error::DimensionMismatch {
                expected: c.rows(),
                found: d.rows(),
            });
        }
        let residual = pair_residual(&c, &d);
        if residual > tol {
            return Err(Error::InvalidContractionPair { residual });
        }
        Ok(Self { c, d })
    }

    /// `(P, I − P)` for an orthogonal projection `P`.
    pub fn from_projection(p: &HermitianMatrix) -> Result<Self> {
        let q = &HermitianMatrix::identity(p.dim()) - p;
        Self::new(p.as_matrix().clone(), q.into_matrix())
    }

    pub fn c(&self) -> &ComplexMatrix {
        &self.c
    }

    pub fn d(&self) -> &ComplexMatrix {
        &self.d
    }

    pub fn dim(&self) -> usize {
        self.c.rows()
    }

    pub fn residual(&self) -> f64 {
        pair_residual(&self.c, &self.d)
    }
}

fn pair_residual(c: &ComplexMatrix, d: &ComplexMatrix) -> f64 {
    let sum = &(&c.adjoint() * c) + &(&d.adjoint() * d);
    (&sum - &ComplexMatrix::identity(c.rows())).max_norm()
}

/// `U = θP₁ + θ²P₂ + … + θ^k P_k` with `θ = exp(2πi/k)`; the last weight is
/// exactly 1.
pub fn pinching_unitary(family: &ProjectionFamily) -> ComplexMatrix {
    let k = family.len();
    let n = family.dim();
    let mut u = ComplexMatrix::zeros(n, n);
    for (idx, p) in family.iter().enumerate() {
        let j = idx + 1;
        let w = root_of_unity_power(k, j as i64);
        u = &u + &p.as_matrix().scale_complex(w);
    }
    u
}

/// `θ^m` for `θ = exp(2πi/k)`, reduced mod `k` first so that `θ^k = 1` exactly.
pub fn root_of_unity_power(k: usize, m: i64) -> Complex64 {
    let r = m.rem_euclid(k as i64);
    if r == 0 {
        return Complex64::new(1.0, 0.0);
    }
    Complex64::from_polar(1.0, 2.0 * PI * r as f64 / k as f64)
}

/// `Σ_{j=1}^{k} θ^{j(s−r)}`: `k` when `r = s`, zero otherwise.
pub fn root_of_unity_sum(k: usize, r: usize, s: usize) -> Complex64 {
    (1..=k as i64)
        .map(|j| root_of_unity_power(k, j * (s as i64 - r as i64)))
        .sum()
}

/// `Σ_j P_j X P_j`.
pub fn pinch(x: &HermitianMatrix, family: &ProjectionFamily) -> Result<HermitianMatrix> {
    x.check_dim(family.dim())?;
    let n = x.dim();
    let mut acc = ComplexMatrix::zeros(n, n);
    for p in family.iter() {
        let pm = p.as_matrix();
        acc = &acc + &(&(pm * x.as_matrix()) * pm);
    }
    Ok(HermitianMatrix::hermitian_part(&acc))
}

/// `(1/k) Σ_{j=1}^{k} U^{-j} X U^{j}` with `U^{-1} = U*`.
pub fn average_conjugations(
    x: &HermitianMatrix,
    u: &ComplexMatrix,
    k: usize,
) -> Result<HermitianMatrix> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if u.rows() != x.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: u.rows(),
        });
    }
    let residual = u.unitarity_residual();
    if residual > UNITARY_TOL {
        return Err(Error::NotUnitary { residual });
    }
    let n = x.dim();
    let mut power = u.clone();
    let mut acc = ComplexMatrix::zeros(n, n);
    for j in 1..=k {
        acc = &acc + &power.congruence(x.as_matrix());
        if j < k {
            power = &power * u;
        }
    }
    Ok(HermitianMatrix::hermitian_part(&acc.scale(1.0 / k as f64)))
}

/// Square root of a PSD matrix; eigenvalues below zero are clamped.
pub fn psd_sqrt(a: &HermitianMatrix) -> Result<HermitianMatrix> {
    Ok(eigh(a)?.map(|l| l.max(0.0).sqrt()))
}

/// Writes `A = C* Y C + α D* D` with `C*C + D*D = I`, given `α < A ≤ Y`:
/// `C = (Y − α)^{-1/2}(A − α)^{1/2}` and `D = (I − C*C)^{1/2}`.
pub fn decompose_below(
    a: &HermitianMatrix,
    y: &HermitianMatrix,
    alpha: f64,
) -> Result<ContractionPair> {
    y.check_dim(a.dim())?;
    let n = a.dim();
    let a_dec = eigh(a)?;
    let strictness = 1e-8 * (1.0 + a.max_norm());
    let below = a_dec.min() - alpha;
    if !(below > strictness) {
        return Err(Error::NotStrictlyBelow { margin: below });
    }
    let order = loewner_margin(a, y)?;
    if order < -psd_tol(&[a, y]) {
        return Err(Error::NotOrdered { margin: order });
    }

    let y_dec = eigh(&y.shift(-alpha))?;
    let floor = INV_SQRT_FLOOR * y_dec.max();
    if !(y_dec.max() > 0.0) || y_dec.min() < floor {
        return Err(Error::Singular {
            min_eig: y_dec.min(),
            floor,
        });
    }
    let inv_sqrt = y_dec.map(|l| 1.0 / l.sqrt());
    let sqrt_a = a_dec.map(|l| (l - alpha).max(0.0).sqrt());
    let c = inv_sqrt.as_matrix() * sqrt_a.as_matrix();

    let ctc = HermitianMatrix::hermitian_part(&(&c.adjoint() * &c));
    let d = psd_sqrt(&(&HermitianMatrix::identity(n) - &ctc))?;
    Ok(ContractionPair {
        c,
        d: d.into_matrix(),
    })
}

/// How `random_contraction_pair_with` picks its angles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairMode {
    /// `φ_i` uniform in `[0, π/2]`.
    General,
    /// All `φ_i = 0`: `D = 0` and `C` unitary.
    Unitary,
}

/// `C = V cos(Φ) W`, `D = V' sin(Φ) W` with random unitaries `V, V', W`.
pub fn contraction_pair_from_rng<R: Rng + ?Sized>(
    dim: usize,
    mode: PairMode,
    rng: &mut R,
) -> ContractionPair {
    let v = unitary_from_rng(dim, rng);
    let v2 = unitary_from_rng(dim, rng);
    let w = unitary_from_rng(dim, rng);
    let angles: Vec<f64> = (0..dim)
        .map(|_| match mode {
            PairMode::General => rng.gen::<f64>() * FRAC_PI_2,
            PairMode::Unitary => 0.0,
        })
        .collect();
    let cos =
        ComplexMatrix::from_real_diagonal(&angles.iter().map(|a| a.cos()).collect::<Vec<_>>());
    let sin =
        ComplexMatrix::from_real_diagonal(&angles.iter().map(|a| a.sin()).collect::<Vec<_>>());
    ContractionPair {
        c: &(&v * &cos) * &w,
        d: &(&v2 * &sin) * &w,
    }
}

pub fn random_contraction_pair(dim: usize, seed: u64) -> Result<ContractionPair> {
    random_contraction_pair_with(dim, seed, PairMode::General)
}

pub fn random_contraction_pair_with(
    dim: usize,
    seed: u64,
    mode: PairMode,
) -> Result<ContractionPair> {
    if dim == 0 {
        return Err(Error::InvalidArgument(
            "dimension must be at least 1".into(),
        ));
    }
    Ok(contraction_pair_from_rng(
        dim,
        mode,
        &mut rng_for(seed, STREAM_PAIR),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::random_projection_family;

    fn close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
        (a - b).max_norm() <= tol
    }

    #[test]
    fn pinching_unitary_examples() {
        let fam = ProjectionFamily::coordinate_blocks(&[1, 1]).unwrap();
        let u = pinching_unitary(&fam);
        assert!(close(
            &u,
            &ComplexMatrix::from_real_diagonal(&[-1.0, 1.0]),
            1e-15
        ));

        let u = pinching_unitary(&ProjectionFamily::trivial(3));
        assert_eq!(u, ComplexMatrix::identity(3));

        let fam = ProjectionFamily::coordinate_blocks(&[1, 1, 1]).unwrap();
        let theta = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        let expect =
            ComplexMatrix::from_diagonal(&[theta, theta * theta, Complex64::new(1.0, 0.0)]);
        assert!(close(&pinching_unitary(&fam), &expect, 1e-15));
    }

    #[test]
    fn pinch_examples() {
        let x = HermitianMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 3.0]]).unwrap();
        let fam = ProjectionFamily::coordinate_blocks(&[1, 1]).unwrap();
        assert_eq!(
            pinch(&x, &fam).unwrap(),
            HermitianMatrix::diagonal(&[1.0, 3.0])
        );
        assert_eq!(pinch(&x, &ProjectionFamily::trivial(2)).unwrap(), x);
        let fam = random_projection_family(4, 3, 1).unwrap();
        let i = HermitianMatrix::identity(4);
        assert!((&pinch(&i, &fam).unwrap() - &i).max_norm() < 1e-14);
        assert!(pinch(&x, &fam).is_err());
    }

    #[test]
    fn average_conjugation_examples() {
        let x = HermitianMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 3.0]]).unwrap();
        let u = crate::random::random_unitary(2, 4).unwrap();
        let once = average_conjugations(&x, &u, 1).unwrap();
        let direct = x.congruence(&u);
        assert!((&once - &direct).max_norm() < 1e-14);
        let same = average_conjugations(&x, &ComplexMatrix::identity(2), 5).unwrap();
        assert_eq!(same, x);
        let not_unitary = ComplexMatrix::identity(2).scale(2.0);
        assert!(matches!(
            average_conjugations(&x, &not_unitary, 2),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn root_sums() {
        for k in 1..=12 {
            for r in 1..=k {
                for s in 1..=k {
                    let z = root_of_unity_sum(k, r, s);
                    let want = if r == s { k as f64 } else { 0.0 };
                    assert!(
                        (z - Complex64::new(want, 0.0)).norm() <= 1e-12,
                        "k={k} r={r} s={s}"
                    );
                }
            }
        }
    }

    #[test]
    fn decompose_diagonal_closed_form() {
        // (Y−1)^{-1/2} = diag(1/√3, 1/√2) and (A−1)^{1/2} = diag(1, √2),
        // so C = diag(1/√3, 1) and D = diag(√(2/3), 0).
        let a = HermitianMatrix::diagonal(&[2.0, 3.0]);
        let y = HermitianMatrix::diagonal(&[4.0, 3.0]);
        let pair = decompose_below(&a, &y, 1.0).unwrap();
        let c = ComplexMatrix::from_real_diagonal(&[1.0 / 3f64.sqrt(), 1.0]);
        let d = ComplexMatrix::from_real_diagonal(&[(2.0f64 / 3.0).sqrt(), 0.0]);
        assert!(close(pair.c(), &c, 1e-15));
        assert!(close(pair.d(), &d, 1e-8));
        let recon = &y.congruence(pair.c()) + &HermitianMatrix::identity(2).congruence(pair.d());
        assert!((&recon - &a).max_norm() < 1e-14);
    }

    #[test]
    fn decompose_identity_cases() {
        let a = HermitianMatrix::from_real_rows(&[&[2.0, 0.5], &[0.5, 3.0]]).unwrap();
        let pair = decompose_below(&a, &a, 0.5).unwrap();
        assert!(close(pair.c(), &ComplexMatrix::identity(2), 1e-12));
        assert!(pair.d().max_norm() < 1e-6);

        let s = HermitianMatrix::scalar(3, 2.0);
        let pair = decompose_below(&s, &s, 1.0).unwrap();
        assert!(close(pair.c(), &ComplexMatrix::identity(3), 1e-15));
        assert_eq!(pair.d().max_norm(), 0.0);
    }

    #[test]
    fn decompose_errors() {
        let a = HermitianMatrix::diagonal(&[2.0, 3.0]);
        assert!(matches!(
            decompose_below(&a, &a, 2.0),
            Err(Error::NotStrictlyBelow { .. })
        ));
        assert!(matches!(
            decompose_below(&a, &HermitianMatrix::diagonal(&[1.5, 3.0]), 1.0),
            Err(Error::NotOrdered { .. })
        ));
    }

    #[test]
    fn random_pairs() {
        for seed in 0..10 {
            let p = random_contraction_pair(6, seed).unwrap();
            assert!(p.residual() <= 1e-12);
        }
        let p = random_contraction_pair_with(4, 3, PairMode::Unitary).unwrap();
        assert_eq!(p.d().max_norm(), 0.0);
        assert!(p.c().unitarity_residual() < 1e-12);
        assert_eq!(
            random_contraction_pair(3, 8).unwrap(),
            random_contraction_pair(3, 8).unwrap()
        );
        assert!(
            ContractionPair::new(ComplexMatrix::identity(2), ComplexMatrix::identity(2)).is_err()
        );
    }
}
