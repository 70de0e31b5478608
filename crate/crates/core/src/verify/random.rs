//! Reproducible random states. Every generator is a pure function of its seed.

use nalgebra::{DVector, Matrix2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::qstate::{site_offsets, DensityMatrix, PureState, SubsystemSet, C64};

/// Largest site count the random generators accept.
pub const MAX_RANDOM_SITES: usize = 12;

/// Mixes a base seed with a stream id and a sample index (splitmix64 finalizer).
pub fn derive_seed(base: u64, stream: u64, index: u64) -> u64 {
    let mut z = base ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex_normal<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn complex_normal_vec<R: Rng>(rng: &mut R, len: usize) -> Vec<C64> {
    (0..len).map(|_| complex_normal(rng)).collect()
}

fn check_sites(n: usize) -> Result<()> {
    if n == 0 || n > MAX_RANDOM_SITES {
        return Err(Error::OutOfRange(format!("random states need 1 <= n <= {MAX_RANDOM_SITES}, got {n}")));
    }
    Ok(())
}

/// Haar-distributed pure state on `n` qubits.
pub fn random_pure(n: usize, seed: u64) -> Result<PureState> {
    check_sites(n)?;
    random_pure_with(&mut rng_from_seed(seed), n)
}

pub fn random_pure_with<R: Rng>(rng: &mut R, n: usize) -> Result<PureState> {
    PureState::new(complex_normal_vec(rng, 1 << n), n)
}

/// A mixed state together with the pure-state ensemble that generated it.
#[derive(Clone, Debug, PartialEq)]
pub struct Ensemble {
    pub weights: Vec<f64>,
    pub states: Vec<PureState>,
    pub density: DensityMatrix,
}

impl Ensemble {
    pub fn new(weights: Vec<f64>, states: Vec<PureState>) -> Result<Self> {
        let density = DensityMatrix::mixture(&weights, &states)?;
        Ok(Self { weights, states, density })
    }

    pub fn num_sites(&self) -> usize {
        self.density.num_sites()
    }
}

/// Convex mixture of `rank` Haar pure states with flat-Dirichlet weights.
pub fn random_mixed(n: usize, rank: usize, seed: u64) -> Result<Ensemble> {
    check_sites(n)?;
    if rank == 0 || rank > 1 << n {
        return Err(Error::OutOfRange(format!("rank must be in 1..={}, got {rank}", 1usize << n)));
    }
    let mut rng = rng_from_seed(seed);
    let raw: Vec<f64> = (0..rank).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = raw.iter().sum();
    let weights = raw.iter().map(|w| w / total).collect();
    let states = (0..rank).map(|_| random_pure_with(&mut rng, n)).collect::<Result<Vec<_>>>()?;
    Ensemble::new(weights, states)
}

/// Haar-random single-qubit unitary (Gram–Schmidt on a complex Ginibre matrix).
pub fn random_unitary2<R: Rng>(rng: &mut R) -> Matrix2<C64> {
    let u = DVector::from_vec(complex_normal_vec(rng, 2)).normalize();
    let v = DVector::from_vec(complex_normal_vec(rng, 2));
    let v = (&v - &u * u.dotc(&v)).normalize();
    Matrix2::new(u[0], v[0], u[1], v[1])
}

/// Random orthonormal pair in `C^dim` (`dim >= 2`).
fn orthonormal_pair<R: Rng>(rng: &mut R, dim: usize) -> (DVector<C64>, DVector<C64>) {
    let u = DVector::from_vec(complex_normal_vec(rng, dim)).normalize();
    let v = DVector::from_vec(complex_normal_vec(rng, dim));
    let v = (&v - &u * u.dotc(&v)).normalize();
    (u, v)
}

/// Pure state of Schmidt rank exactly 2 across `side_a | complement`.
pub fn random_schmidt_rank2(n: usize, side_a: &SubsystemSet, seed: u64) -> Result<PureState> {
    check_sites(n)?;
    let side_b = side_a.complement(n)?;
    let mut rng = rng_from_seed(seed);
    let (a1, a2) = orthonormal_pair(&mut rng, 1 << side_a.len());
    let (b1, b2) = orthonormal_pair(&mut rng, 1 << side_b.len());
    // Keep both coefficients away from zero so the rank is unambiguous.
    let lambda: f64 = rng.random_range(0.05..0.95);
    let phase: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let c1 = C64::new(lambda.sqrt(), 0.0);
    let c2 = C64::from_polar((1.0 - lambda).sqrt(), phase);
    let off_a = site_offsets(side_a.indices(), n);
    let off_b = site_offsets(side_b.indices(), n);
    let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
    for (i, &oa) in off_a.iter().enumerate() {
        for (j, &ob) in off_b.iter().enumerate() {
            amps[oa | ob] = c1 * a1[i] * b1[j] + c2 * a2[i] * b2[j];
        }
    }
    PureState::new(amps, n)
}

/// Complex-normal W-class coefficients.
pub fn random_w_coefficients(n: usize, seed: u64) -> Vec<C64> {
    complex_normal_vec(&mut rng_from_seed(seed), n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{hermitian_eigenvalues, schmidt_spectrum};

    #[test]
    fn pure_is_deterministic_and_normalized() {
        let a = random_pure(3, 42).unwrap();
        assert_eq!(a, random_pure(3, 42).unwrap());
        assert_ne!(a, random_pure(3, 43).unwrap());
        assert!((a.norm_sqr() - 1.0).abs() < 1e-12);
        assert!(random_pure(0, 1).is_err());
        assert!(random_pure(13, 1).is_err());
    }

    #[test]
    fn mixed_is_a_valid_ensemble() {
        let e = random_mixed(3, 2, 1).unwrap();
        assert!((e.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((e.density.trace() - 1.0).abs() < 1e-12);
        assert!(hermitian_eigenvalues(e.density.entries()).unwrap()[0] > -1e-12);
        assert_eq!(e, random_mixed(3, 2, 1).unwrap());
        assert!(random_mixed(2, 5, 1).is_err());
        assert!(random_mixed(2, 0, 1).is_err());
    }

    #[test]
    fn unitary_is_unitary() {
        let mut rng = rng_from_seed(5);
        for _ in 0..20 {
            let u = random_unitary2(&mut rng);
            assert!((u.adjoint() * u - Matrix2::identity()).norm() < 1e-12);
        }
    }

    #[test]
    fn schmidt_rank_two() {
        for (n, sites) in [(2, vec![0]), (5, vec![1, 3]), (6, vec![0, 1, 2])] {
            let side = SubsystemSet::new(sites).unwrap();
            let psi = random_schmidt_rank2(n, &side, 11).unwrap();
            assert_eq!(schmidt_spectrum(&psi, &side).unwrap().rank(), 2);
        }
    }

    #[test]
    fn derived_seeds_differ() {
        let s: std::collections::BTreeSet<u64> = (0..100).map(|i| derive_seed(7, 1, i)).collect();
        assert_eq!(s.len(), 100);
        assert_ne!(derive_seed(7, 1, 0), derive_seed(7, 2, 0));
    }
}
