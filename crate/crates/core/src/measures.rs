//! Entanglement measures: negativity, bipartite and k-ME concurrence, and the tangle hierarchy.

use std::collections::HashMap;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::partitions::{k_partitions, Partition};
use crate::qstate::{
    clamped_sqrt, hermitian_eigenvalues, partial_trace, partial_transpose, partial_transpose_sites,
    psd_sqrt, DensityMatrix, PureState, SubsystemSet, C64,
};

/// Partial-transpose eigenvalues above `-NEGATIVE_EIGEN_FLOOR` count as zero.
pub const NEGATIVE_EIGEN_FLOOR: f64 = 1e-12;
/// Two k-ME candidates within this distance of the minimum count as tied.
pub const TIE_TOL: f64 = 1e-12;
/// Relative eigenvalue floor used when taking `√ρ` for the Wootters formula.
pub const WOOTTERS_RANK_FLOOR: f64 = 1e-14;

/// A measure value with its minimizing partition and every candidate.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureReport {
    pub measure_name: String,
    pub value: f64,
    pub optimal_partition: Option<Partition>,
    pub per_partition: Vec<(Partition, f64)>,
}

/// Per-site global negativities `N⁰..N^{n−1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct NegativityProfile {
    pub per_site: Vec<f64>,
    pub local_dims: Vec<usize>,
}

impl NegativityProfile {
    pub fn min(&self) -> f64 {
        self.per_site.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `√(Σ (Nᵖ)² / n)`.
    pub fn quadratic_mean(&self) -> f64 {
        let n = self.per_site.len() as f64;
        (self.per_site.iter().map(|x| x * x).sum::<f64>() / n).sqrt()
    }
}

fn check_local_dim(local_dim: usize) -> Result<()> {
    if local_dim < 2 {
        return Err(Error::OutOfRange(format!("local dimension must be >= 2, got {local_dim}")));
    }
    Ok(())
}

fn negative_eigen_sum(pt: &DMatrix<C64>) -> Result<f64> {
    Ok(hermitian_eigenvalues(pt)?.into_iter().filter(|&l| l < -NEGATIVE_EIGEN_FLOOR).sum())
}

/// Global negativity of site `site`: `−2 Σ λ⁻ / (d − 1)` over the negative
/// eigenvalues of `ρ^{T_site}`.
///
/// `local_dim` only sets the normalization; state storage is always qubits.
pub fn negativity(rho: &DensityMatrix, site: usize, local_dim: usize) -> Result<f64> {
    check_local_dim(local_dim)?;
    let pt = partial_transpose(rho, site)?;
    Ok(-2.0 * negative_eigen_sum(&pt)? / (local_dim as f64 - 1.0))
}

/// The same quantity through the trace norm, `(‖ρ^{T_site}‖₁ − Tr ρ) / (d − 1)`.
pub fn negativity_trace_norm(rho: &DensityMatrix, site: usize, local_dim: usize) -> Result<f64> {
    check_local_dim(local_dim)?;
    let pt = partial_transpose(rho, site)?;
    let norm: f64 = hermitian_eigenvalues(&pt)?.iter().map(|l| l.abs()).sum();
    Ok((norm - rho.trace()) / (local_dim as f64 - 1.0))
}

/// Qubit negativities of every site.
pub fn negativity_profile(rho: &DensityMatrix) -> Result<NegativityProfile> {
    let per_site = (0..rho.num_sites()).map(|p| negativity(rho, p, 2)).collect::<Result<Vec<_>>>()?;
    Ok(NegativityProfile { local_dims: vec![2; per_site.len()], per_site })
}

/// `‖ρ^{T_A}‖₁ − 1` across the cut `side_a | rest`, without dimension normalization.
pub fn cut_negativity(rho: &DensityMatrix, side_a: &SubsystemSet) -> Result<f64> {
    side_a.complement(rho.num_sites())?;
    let pt = partial_transpose_sites(rho, side_a)?;
    Ok(-2.0 * negative_eigen_sum(&pt)?)
}

/// `√(2(1 − Tr ρ_A²))` for the cut `side_a | rest` of a pure state.
pub fn bipartite_concurrence_pure(psi: &PureState, side_a: &SubsystemSet) -> Result<f64> {
    side_a.complement(psi.num_sites())?;
    Ok(clamped_sqrt(2.0 * psi.linear_entropy(side_a)?))
}

/// Linear entropies of blocks, memoized by site mask for a single state.
struct BlockEntropies<'a> {
    psi: &'a PureState,
    cache: HashMap<u64, f64>,
}

impl<'a> BlockEntropies<'a> {
    fn new(psi: &'a PureState) -> Self {
        Self { psi, cache: HashMap::new() }
    }

    fn get(&mut self, block: &SubsystemSet) -> f64 {
        let psi = self.psi;
        *self
            .cache
            .entry(block.mask())
            .or_insert_with(|| psi.linear_entropy(block).expect("block lies within the state"))
    }
}

/// `√((2/k) Σ_t (1 − Tr ρ²_{A_t}))` for a single partition.
pub fn kme_value_for_partition(psi: &PureState, partition: &Partition) -> Result<f64> {
    if partition.num_sites() != psi.num_sites() {
        return Err(Error::DimensionMismatch { expected: psi.num_sites(), got: partition.num_sites() });
    }
    let k = partition.num_blocks() as f64;
    let sum = partition.blocks().iter().map(|b| psi.linear_entropy(b)).sum::<Result<f64>>()?;
    Ok(clamped_sqrt(2.0 * sum / k))
}

/// k-ME concurrence of a pure state: the minimum of the root-mean linear
/// entropy over all k-partitions.
///
/// Candidates within 1e-12 of the minimum are tied; the lexicographically
/// smallest canonical partition among them is reported.
pub fn kme_concurrence_pure(psi: &PureState, k: usize) -> Result<MeasureReport> {
    let n = psi.num_sites();
    if k < 2 || k > n {
        return Err(Error::OutOfRange(format!("k-ME concurrence needs 2 <= k <= n = {n}, got k = {k}")));
    }
    let mut table = BlockEntropies::new(psi);
    let per_partition: Vec<(Partition, f64)> = k_partitions(n, k)?
        .into_iter()
        .map(|p| {
            let sum: f64 = p.blocks().iter().map(|b| table.get(b)).sum();
            let v = clamped_sqrt(2.0 * sum / k as f64);
            (p, v)
        })
        .collect();
    let min = per_partition.iter().map(|(_, v)| *v).fold(f64::INFINITY, f64::min);
    let (best, value) = per_partition
        .iter()
        .filter(|(_, v)| *v <= min + TIE_TOL)
        .min_by(|a, b| a.0.cmp(&b.0))
        .map(|(p, v)| (p.clone(), *v))
        .expect("at least one partition");
    Ok(MeasureReport {
        measure_name: format!("C_{k}-ME"),
        value,
        optimal_partition: Some(best),
        per_partition,
    })
}

/// `√(Σ_p (Nᵖ)² / n)`: a lower bound on the n-ME concurrence of a mixed
/// state, saturated by every pure state.
pub fn nme_lower_bound(rho: &DensityMatrix) -> Result<f64> {
    Ok(negativity_profile(rho)?.quadratic_mean())
}

/// `4 det ρ_site`.
pub fn one_tangle(psi: &PureState, site: usize) -> Result<f64> {
    if site >= psi.num_sites() {
        return Err(Error::IndexOutOfRange { index: site, num_sites: psi.num_sites() });
    }
    // For a 2×2 reduced matrix the linear entropy is 2 det ρ.
    Ok(2.0 * psi.linear_entropy(&SubsystemSet::single(site))?)
}

fn spin_flip() -> DMatrix<C64> {
    let mut y = DMatrix::zeros(4, 4);
    y[(0, 3)] = C64::new(-1.0, 0.0);
    y[(1, 2)] = C64::new(1.0, 0.0);
    y[(2, 1)] = C64::new(1.0, 0.0);
    y[(3, 0)] = C64::new(-1.0, 0.0);
    y
}

/// Two-qubit concurrence `max{0, √μ₁ − √μ₂ − √μ₃ − √μ₄}`.
///
/// `√μᵢ` are taken as the singular values of `√ρ (σ_y⊗σ_y) √ρ*`, whose
/// squares are the eigenvalues of `√ρ ρ̃ √ρ`.
pub fn wootters_concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.num_sites() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: rho.num_sites() });
    }
    let root = psd_sqrt(rho.entries(), WOOTTERS_RANK_FLOOR)?;
    let x = &root * spin_flip() * root.map(|z| z.conj());
    let mut s: Vec<f64> = x.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok((s[0] - s[1] - s[2] - s[3]).max(0.0))
}

/// Squared Wootters concurrence.
pub fn two_tangle(rho: &DensityMatrix) -> Result<f64> {
    Ok(wootters_concurrence(rho)?.powi(2))
}

fn check_three(psi: &PureState) -> Result<()> {
    if psi.num_sites() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, got: psi.num_sites() });
    }
    Ok(())
}

/// `τ(p|rest) − τ(ρ_{pq}) − τ(ρ_{pr})` with `pivot = p`, unclamped.
pub fn three_tangle_with_pivot(psi: &PureState, pivot: usize) -> Result<f64> {
    check_three(psi)?;
    if pivot >= 3 {
        return Err(Error::IndexOutOfRange { index: pivot, num_sites: 3 });
    }
    let rho = psi.density();
    let mut t = one_tangle(psi, pivot)?;
    for other in (0..3).filter(|&q| q != pivot) {
        let pair = partial_trace(&rho, &SubsystemSet::new(vec![pivot, other])?)?;
        t -= two_tangle(&pair)?;
    }
    Ok(t)
}

/// Unclamped three-tangle with site 0 as pivot, for diagnostics.
pub fn three_tangle_raw(psi: &PureState) -> Result<f64> {
    three_tangle_with_pivot(psi, 0)
}

/// Three-tangle clamped into `[0, 1]`.
pub fn three_tangle(psi: &PureState) -> Result<f64> {
    Ok(three_tangle_raw(psi)?.clamp(0.0, 1.0))
}
