//! Pure states and density matrices over `n` qubit factors.
//!
//! Amplitude and matrix indices follow the big-endian convention: site `0`
//! is the most significant bit of the computational-basis index.

mod io;
mod spectral;

use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub use io::{parse_state_file, state_file_json, LoadedState, StateFile};
pub use spectral::{eigh, hermitian_eigenvalues, hermiticity_residual, psd_sqrt};

pub type C64 = Complex64;

/// Norm and Hermiticity tolerance used when constructing states.
pub const CONSTRUCTION_TOL: f64 = 1e-9;
/// Norms below this are treated as zero.
pub const ZERO_NORM: f64 = 1e-12;
/// Radicands in `[-ROUNDING_FLOOR, 0)` are clamped to zero before `sqrt`.
pub const ROUNDING_FLOOR: f64 = 1e-12;
/// Largest number of sites accepted by state constructors.
pub const MAX_SITES: usize = 14;

/// `sqrt` that absorbs tiny negative rounding residue. Larger negatives
/// propagate as NaN so that mistakes stay visible.
pub fn clamped_sqrt(x: f64) -> f64 {
    if (-ROUNDING_FLOOR..0.0).contains(&x) {
        0.0
    } else {
        x.sqrt()
    }
}

/// A non-empty, strictly increasing list of site indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubsystemSet {
    indices: Vec<usize>,
}

impl SubsystemSet {
    /// Builds a set from indices in any order. Duplicates and empty input are rejected.
    pub fn new(mut indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidSubsystem("empty subsystem set".into()));
        }
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSubsystem(format!("duplicate indices in {indices:?}")));
        }
        Ok(Self { indices })
    }

    pub fn single(site: usize) -> Self {
        Self { indices: vec![site] }
    }

    /// All sites `0..n`.
    pub fn full(n: usize) -> Self {
        Self { indices: (0..n).collect() }
    }

    /// Set from the bitmask where bit `i` marks site `i`.
    pub fn from_mask(mask: u64) -> Result<Self> {
        let indices: Vec<usize> = (0..64).filter(|i| mask >> i & 1 == 1).collect();
        Self::new(indices)
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, site: usize) -> bool {
        self.indices.binary_search(&site).is_ok()
    }

    /// Bit `i` set iff site `i` is in the set.
    pub fn mask(&self) -> u64 {
        self.indices.iter().fold(0, |m, &i| m | 1 << i)
    }

    pub(crate) fn check_within(&self, num_sites: usize) -> Result<()> {
        match self.indices.last() {
            Some(&max) if max >= num_sites => Err(Error::IndexOutOfRange { index: max, num_sites }),
            _ => Ok(()),
        }
    }

    /// The sites of `0..num_sites` not in this set.
    pub fn complement(&self, num_sites: usize) -> Result<Self> {
        self.check_within(num_sites)?;
        if self.len() == num_sites {
            return Err(Error::NotProperSubset { num_sites });
        }
        Ok(Self {
            indices: (0..num_sites).filter(|i| !self.contains(*i)).collect(),
        })
    }
}

impl std::fmt::Display for SubsystemSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, s) in self.indices.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "}}")
    }
}

/// Full-index offsets contributed by each local index of `sites`.
///
/// Local index bit order matches `sites`: the first listed site is the most
/// significant bit of the local index.
pub(crate) fn site_offsets(sites: &[usize], num_sites: usize) -> Vec<usize> {
    let m = sites.len();
    (0..1usize << m)
        .map(|local| {
            sites.iter().enumerate().fold(0, |acc, (j, &s)| {
                if local >> (m - 1 - j) & 1 == 1 {
                    acc | 1 << (num_sites - 1 - s)
                } else {
                    acc
                }
            })
        })
        .collect()
}

/// Bit of the basis index carrying `site`.
pub(crate) fn site_bit(site: usize, num_sites: usize) -> usize {
    1 << (num_sites - 1 - site)
}

fn check_num_sites(num_sites: usize) -> Result<()> {
    if num_sites == 0 || num_sites > MAX_SITES {
        return Err(Error::OutOfRange(format!("num_sites must be in 1..={MAX_SITES}, got {num_sites}")));
    }
    Ok(())
}

/// Normalized state vector over `num_sites` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: DVector<C64>,
    num_sites: usize,
}

impl PureState {
    /// Rescales `amplitudes` to unit norm.
    pub fn new(amplitudes: Vec<C64>, num_sites: usize) -> Result<Self> {
        check_num_sites(num_sites)?;
        let expected = 1usize << num_sites;
        if amplitudes.len() != expected {
            return Err(Error::DimensionMismatch { expected, got: amplitudes.len() });
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm.is_nan() || norm < ZERO_NORM {
            return Err(Error::ZeroVector);
        }
        let amplitudes = DVector::from_iterator(expected, amplitudes.into_iter().map(|a| a / norm));
        Ok(Self { amplitudes, num_sites })
    }

    /// Real amplitudes, rescaled.
    pub fn from_real(amplitudes: &[f64], num_sites: usize) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| C64::new(x, 0.0)).collect(), num_sites)
    }

    /// Computational basis state with the given bit string, e.g. `"0110"`.
    pub fn basis(bits: &str) -> Result<Self> {
        let n = bits.len();
        let index = usize::from_str_radix(bits, 2).map_err(|e| Error::Parse(format!("bad bit string {bits:?}: {e}")))?;
        check_num_sites(n)?;
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
        amps[index] = C64::new(1.0, 0.0);
        Self::new(amps, n)
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amplitudes[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn density(&self) -> DensityMatrix {
        let entries = &self.amplitudes * self.amplitudes.adjoint();
        DensityMatrix { entries, num_sites: self.num_sites }
    }

    /// Reduced density matrix on `keep`, computed directly from the amplitudes.
    ///
    /// Agrees with [`partial_trace`] of [`PureState::density`] to rounding.
    pub fn reduced(&self, keep: &SubsystemSet) -> Result<DMatrix<C64>> {
        keep.check_within(self.num_sites)?;
        let env: Vec<usize> = (0..self.num_sites).filter(|i| !keep.contains(*i)).collect();
        let ko = site_offsets(keep.indices(), self.num_sites);
        let eo = site_offsets(&env, self.num_sites);
        // Rows of `block` are kept indices, columns environment indices.
        let block = DMatrix::from_fn(ko.len(), eo.len(), |i, e| self.amplitudes[ko[i] | eo[e]]);
        Ok(&block * block.adjoint())
    }

    /// `(Tr ρ_A)² − Tr ρ_A²` of the reduction onto `sites`, i.e. `1 − Tr ρ_A²`.
    ///
    /// Evaluated on whichever side of the cut is smaller; both sides carry the
    /// same spectrum for a pure state.
    pub fn linear_entropy(&self, sites: &SubsystemSet) -> Result<f64> {
        sites.check_within(self.num_sites)?;
        if sites.len() == self.num_sites {
            return Ok(0.0);
        }
        let keep = if 2 * sites.len() > self.num_sites { sites.complement(self.num_sites)? } else { sites.clone() };
        Ok(linear_entropy(&self.reduced(&keep)?))
    }

    /// Applies a 2×2 unitary to one site.
    pub fn apply_local_unitary(&self, site: usize, u: &Matrix2<C64>) -> Result<Self> {
        if site >= self.num_sites {
            return Err(Error::IndexOutOfRange { index: site, num_sites: self.num_sites });
        }
        let residual = (u.adjoint() * u - Matrix2::identity()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if residual > CONSTRUCTION_TOL {
            return Err(Error::NotUnitary(residual));
        }
        let bit = site_bit(site, self.num_sites);
        let mut out = self.amplitudes.clone();
        for i in (0..self.dim()).filter(|i| i & bit == 0) {
            let (a0, a1) = (self.amplitudes[i], self.amplitudes[i | bit]);
            out[i] = u[(0, 0)] * a0 + u[(0, 1)] * a1;
            out[i | bit] = u[(1, 0)] * a0 + u[(1, 1)] * a1;
        }
        Ok(Self { amplitudes: out, num_sites: self.num_sites })
    }
}

/// `make_pure`: validates length and rescales to unit norm.
pub fn make_pure(amplitudes: Vec<C64>, num_sites: usize) -> Result<PureState> {
    PureState::new(amplitudes, num_sites)
}

/// `density_of`: the projector `|ψ⟩⟨ψ|`.
pub fn density_of(psi: &PureState) -> DensityMatrix {
    psi.density()
}

/// Hermitian, unit-trace, positive-semidefinite matrix over `num_sites` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<C64>,
    num_sites: usize,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace (both within 1e-9) and PSD (eigenvalue floor −1e-9).
    pub fn new(entries: DMatrix<C64>, num_sites: usize) -> Result<Self> {
        check_num_sites(num_sites)?;
        let dim = 1usize << num_sites;
        if entries.nrows() != dim || entries.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: entries.nrows().max(entries.ncols()) });
        }
        let herm = hermiticity_residual(&entries);
        if herm > CONSTRUCTION_TOL {
            return Err(Error::NotHermitian(herm));
        }
        let trace = entries.trace();
        if (trace.re - 1.0).abs() > CONSTRUCTION_TOL || trace.im.abs() > CONSTRUCTION_TOL {
            return Err(Error::InvalidTrace(trace.re));
        }
        let min_eig = hermitian_eigenvalues(&entries)?[0];
        if min_eig < -CONSTRUCTION_TOL {
            return Err(Error::NotPositive(min_eig));
        }
        Ok(Self { entries, num_sites })
    }

    /// Infers `num_sites` from the side length, which must be a power of two.
    pub fn from_matrix(entries: DMatrix<C64>) -> Result<Self> {
        let side = entries.nrows();
        if side < 2 || !side.is_power_of_two() {
            return Err(Error::DimensionMismatch { expected: side.next_power_of_two().max(2), got: side });
        }
        Self::new(entries, side.trailing_zeros() as usize)
    }

    /// Convex mixture `Σ wᵢ |ψᵢ⟩⟨ψᵢ|`. Weights are used as given and must sum to 1.
    pub fn mixture(weights: &[f64], states: &[PureState]) -> Result<Self> {
        let first = states.first().ok_or_else(|| Error::OutOfRange("empty ensemble".into()))?;
        if weights.len() != states.len() {
            return Err(Error::DimensionMismatch { expected: states.len(), got: weights.len() });
        }
        let n = first.num_sites();
        let mut acc = DMatrix::zeros(first.dim(), first.dim());
        for (w, s) in weights.iter().zip(states) {
            if s.num_sites() != n {
                return Err(Error::DimensionMismatch { expected: n, got: s.num_sites() });
            }
            if *w < 0.0 {
                return Err(Error::OutOfRange(format!("negative ensemble weight {w}")));
            }
            acc += s.density().entries * C64::new(*w, 0.0);
        }
        Self::new(acc, n)
    }

    /// `I / 2ⁿ`.
    pub fn maximally_mixed(num_sites: usize) -> Result<Self> {
        check_num_sites(num_sites)?;
        let dim = 1usize << num_sites;
        Ok(Self {
            entries: DMatrix::identity(dim, dim) * C64::new(1.0 / dim as f64, 0.0),
            num_sites,
        })
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<C64> {
        self.entries
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace().re
    }
}

/// Reduced density matrix on `keep`, summing out the complement.
pub fn partial_trace(rho: &DensityMatrix, keep: &SubsystemSet) -> Result<DensityMatrix> {
    let n = rho.num_sites();
    keep.check_within(n)?;
    let env: Vec<usize> = (0..n).filter(|i| !keep.contains(*i)).collect();
    let ko = site_offsets(keep.indices(), n);
    let eo = site_offsets(&env, n);
    let m = &rho.entries;
    let reduced = DMatrix::from_fn(ko.len(), ko.len(), |i, j| eo.iter().map(|&e| m[(ko[i] | e, ko[j] | e)]).sum());
    Ok(DensityMatrix { entries: reduced, num_sites: keep.len() })
}

/// Transposes the indices of the listed sites. The result is Hermitian with
/// unit trace but need not be positive.
pub fn partial_transpose_sites(rho: &DensityMatrix, sites: &SubsystemSet) -> Result<DMatrix<C64>> {
    partial_transpose_matrix(&rho.entries, rho.num_sites(), sites)
}

/// Partial transpose of an arbitrary `2ⁿ × 2ⁿ` matrix, so that a transposed
/// operator (which may not be a state) can be transposed again.
pub fn partial_transpose_matrix(m: &DMatrix<C64>, num_sites: usize, sites: &SubsystemSet) -> Result<DMatrix<C64>> {
    check_num_sites(num_sites)?;
    let dim = 1usize << num_sites;
    if m.nrows() != dim || m.ncols() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: m.nrows() });
    }
    sites.check_within(num_sites)?;
    let mask = sites.indices().iter().fold(0, |acc, &s| acc | site_bit(s, num_sites));
    Ok(DMatrix::from_fn(dim, dim, |r, c| {
        let r2 = (r & !mask) | (c & mask);
        let c2 = (c & !mask) | (r & mask);
        m[(r2, c2)]
    }))
}

/// Partial transpose on a single site.
pub fn partial_transpose(rho: &DensityMatrix, site: usize) -> Result<DMatrix<C64>> {
    if site >= rho.num_sites() {
        return Err(Error::IndexOutOfRange { index: site, num_sites: rho.num_sites() });
    }
    partial_transpose_sites(rho, &SubsystemSet::single(site))
}

/// `Tr ρ²`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    matrix_purity(&rho.entries)
}

pub(crate) fn matrix_purity(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}

/// `(Tr m)² − Tr m²` for a Hermitian matrix, summed as `Σ_{i≠j} (mᵢᵢ mⱼⱼ − |mᵢⱼ|²)`.
///
/// The pairwise form cancels exactly on product structure, where
/// `1 − Tr ρ²` would leave rounding residue for `sqrt` to amplify.
pub fn linear_entropy(m: &DMatrix<C64>) -> f64 {
    let d = m.nrows();
    let mut acc = 0.0;
    for i in 0..d {
        for j in (i + 1)..d {
            acc += m[(i, i)].re * m[(j, j)].re - m[(i, j)].norm_sqr();
        }
    }
    2.0 * acc
}

/// Squared Schmidt coefficients, descending.
#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtSpectrum {
    pub coefficients: Vec<f64>,
}

impl SchmidtSpectrum {
    /// Number of coefficients above 1e-10.
    pub fn rank(&self) -> usize {
        self.coefficients.iter().filter(|&&l| l > 1e-10).count()
    }
}

/// Eigenvalues of the reduced density matrix on `side_a`.
pub fn schmidt_spectrum(psi: &PureState, side_a: &SubsystemSet) -> Result<SchmidtSpectrum> {
    side_a.complement(psi.num_sites())?;
    let reduced = psi.reduced(side_a)?;
    let mut coefficients: Vec<f64> = hermitian_eigenvalues(&reduced)?
        .into_iter()
        .rev()
        .map(|l| if (-CONSTRUCTION_TOL..0.0).contains(&l) { 0.0 } else { l })
        .collect();
    coefficients.sort_by(|a, b| b.total_cmp(a));
    Ok(SchmidtSpectrum { coefficients })
}

/// `apply_local_unitary` as a free function.
pub fn apply_local_unitary(psi: &PureState, site: usize, u: &Matrix2<C64>) -> Result<PureState> {
    psi.apply_local_unitary(site, u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn bell() -> PureState {
        PureState::from_real(&[1.0, 0.0, 0.0, 1.0], 2).unwrap()
    }

    fn ghz3() -> PureState {
        PureState::from_real(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0], 3).unwrap()
    }

    fn w3() -> PureState {
        PureState::from_real(&[0.0, 1.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0], 3).unwrap()
    }

    /// Reduced matrix by explicit summation over all index pairs.
    fn reduced_by_summation(psi: &PureState, keep: &[usize]) -> DMatrix<C64> {
        let n = psi.num_sites();
        let dk = 1 << keep.len();
        let mut out = DMatrix::zeros(dk, dk);
        let local = |idx: usize| -> (usize, usize) {
            let (mut k, mut e) = (0, 0);
            for s in 0..n {
                let b = idx >> (n - 1 - s) & 1;
                if keep.contains(&s) {
                    k = k << 1 | b;
                } else {
                    e = e << 1 | b;
                }
            }
            (k, e)
        };
        for x in 0..psi.dim() {
            for y in 0..psi.dim() {
                let (kx, ex) = local(x);
                let (ky, ey) = local(y);
                if ex == ey {
                    out[(kx, ky)] += psi.amplitude(x) * psi.amplitude(y).conj();
                }
            }
        }
        out
    }

    #[test]
    fn make_pure_normalizes() {
        let s = 0.5f64.sqrt();
        let b = make_pure(vec![c(s), c(0.0), c(0.0), c(s)], 2).unwrap();
        assert!((b.norm_sqr() - 1.0).abs() < 1e-15);
        let g = make_pure([1.0, 0., 0., 0., 0., 0., 0., 1.].map(c).to_vec(), 3).unwrap();
        assert!((g.amplitude(0).re - s).abs() < 1e-15);
        assert!((g.amplitude(7).re - s).abs() < 1e-15);
    }

    #[test]
    fn make_pure_errors() {
        assert_eq!(make_pure(vec![c(0.0); 4], 2), Err(Error::ZeroVector));
        assert!(matches!(make_pure(vec![c(1.0); 3], 2), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn density_of_bell_and_product() {
        let rho = density_of(&bell());
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            assert!((rho.entries()[(i, j)].re - 0.5).abs() < 1e-15);
        }
        assert!(rho.entries()[(1, 1)].norm() < 1e-15);
        let p = density_of(&PureState::basis("00").unwrap());
        assert_eq!(p.entries()[(0, 0)], c(1.0));
        assert!((purity(&p) - 1.0).abs() < 1e-15);
        assert!((purity(&ghz3().density()) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn partial_trace_examples() {
        let r = partial_trace(&ghz3().density(), &SubsystemSet::single(0)).unwrap();
        let oracle = reduced_by_summation(&ghz3(), &[0]);
        assert!((r.entries() - &oracle).norm() < 1e-14);
        assert!((r.entries()[(0, 0)].re - 0.5).abs() < 1e-14);
        assert!((r.entries()[(1, 1)].re - 0.5).abs() < 1e-14);

        let p = partial_trace(&PureState::basis("00").unwrap().density(), &SubsystemSet::single(1)).unwrap();
        assert_eq!(p.entries()[(0, 0)], c(1.0));
        assert_eq!(p.entries()[(1, 1)], c(0.0));

        let w = partial_trace(&w3().density(), &SubsystemSet::single(0)).unwrap();
        assert!((w.entries()[(0, 0)].re - 2.0 / 3.0).abs() < 1e-14);
        assert!((w.entries()[(1, 1)].re - 1.0 / 3.0).abs() < 1e-14);
        assert!((purity(&w) - 5.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn reduced_fast_path_matches_explicit_trace() {
        let psi = PureState::new(
            (0..16).map(|i| C64::new((i as f64 * 0.7).sin(), (i as f64 * 1.3).cos())).collect(),
            4,
        )
        .unwrap();
        for mask in 1u64..15 {
            let keep = SubsystemSet::from_mask(mask).unwrap();
            let fast = psi.reduced(&keep).unwrap();
            let slow = partial_trace(&psi.density(), &keep).unwrap();
            assert!((&fast - slow.entries()).norm() < 1e-12);
            let oracle = reduced_by_summation(&psi, keep.indices());
            assert!((&fast - &oracle).norm() < 1e-12);
        }
    }

    #[test]
    fn partial_trace_rejects_bad_index() {
        let keep = SubsystemSet::new(vec![0, 3]).unwrap();
        assert!(matches!(partial_trace(&ghz3().density(), &keep), Err(Error::IndexOutOfRange { index: 3, .. })));
    }

    #[test]
    fn partial_transpose_bell_spectrum() {
        let pt = partial_transpose(&bell().density(), 0).unwrap();
        let eig = hermitian_eigenvalues(&pt).unwrap();
        let expected = [-0.5, 0.5, 0.5, 0.5];
        for (e, x) in eig.iter().zip(expected) {
            assert!((e - x).abs() < 1e-12);
        }
        let prod = PureState::basis("00").unwrap().density();
        assert_eq!(&partial_transpose(&prod, 0).unwrap(), prod.entries());
        assert!(partial_transpose(&prod, 2).is_err());
    }

    #[test]
    fn partial_transpose_is_involution() {
        let rho = w3().density();
        for site in 0..3 {
            let once = DensityMatrix { entries: partial_transpose(&rho, site).unwrap(), num_sites: 3 };
            let twice = partial_transpose(&once, site).unwrap();
            assert_eq!(&twice, rho.entries());
        }
    }

    #[test]
    fn purity_values() {
        let half = DensityMatrix::maximally_mixed(1).unwrap();
        assert!((purity(&half) - 0.5).abs() < 1e-15);
        assert!((purity(&DensityMatrix::maximally_mixed(3).unwrap()) - 0.125).abs() < 1e-15);
    }

    #[test]
    fn linear_entropy_matches_purity_form() {
        let r = w3().reduced(&SubsystemSet::new(vec![0, 1]).unwrap()).unwrap();
        assert!((linear_entropy(&r) - (1.0 - matrix_purity(&r))).abs() < 1e-14);
    }

    #[test]
    fn schmidt_examples() {
        let a = SubsystemSet::single(0);
        let s = schmidt_spectrum(&bell(), &a).unwrap();
        assert!((s.coefficients[0] - 0.5).abs() < 1e-14 && (s.coefficients[1] - 0.5).abs() < 1e-14);
        assert_eq!(s.rank(), 2);
        let p = schmidt_spectrum(&PureState::basis("00").unwrap(), &a).unwrap();
        assert_eq!(p.rank(), 1);
        assert!((p.coefficients[0] - 1.0).abs() < 1e-15);
        let skew = PureState::from_real(&[0.8f64.sqrt(), 0.0, 0.0, 0.2f64.sqrt()], 2).unwrap();
        let s = schmidt_spectrum(&skew, &a).unwrap();
        assert!((s.coefficients[0] - 0.8).abs() < 1e-14 && (s.coefficients[1] - 0.2).abs() < 1e-14);
        assert!(matches!(schmidt_spectrum(&bell(), &SubsystemSet::full(2)), Err(Error::NotProperSubset { .. })));
    }

    #[test]
    fn local_unitary_examples() {
        let psi = ghz3();
        let id = Matrix2::identity();
        assert_eq!(psi.apply_local_unitary(1, &id).unwrap(), psi);
        let x = Matrix2::new(c(0.0), c(1.0), c(1.0), c(0.0));
        let flipped = PureState::basis("00").unwrap().apply_local_unitary(0, &x).unwrap();
        assert_eq!(flipped, PureState::basis("10").unwrap());
        let bad = Matrix2::new(c(1.0), c(1.0), c(0.0), c(1.0));
        assert!(matches!(psi.apply_local_unitary(0, &bad), Err(Error::NotUnitary(_))));
        assert!(matches!(psi.apply_local_unitary(3, &x), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn subsystem_set_rules() {
        assert!(SubsystemSet::new(vec![]).is_err());
        assert!(SubsystemSet::new(vec![1, 1]).is_err());
        assert_eq!(SubsystemSet::new(vec![3, 1]).unwrap().indices(), &[1, 3]);
        assert_eq!(SubsystemSet::from_mask(0b1010).unwrap().indices(), &[1, 3]);
    }

    #[test]
    fn density_validation() {
        let not_herm = DMatrix::from_row_slice(2, 2, &[c(0.5), c(0.1), c(0.0), c(0.5)]);
        assert!(matches!(DensityMatrix::new(not_herm, 1), Err(Error::NotHermitian(_))));
        let bad_trace = DMatrix::from_row_slice(2, 2, &[c(0.6), c(0.0), c(0.0), c(0.6)]);
        assert!(matches!(DensityMatrix::new(bad_trace, 1), Err(Error::InvalidTrace(_))));
        let neg = DMatrix::from_row_slice(2, 2, &[c(1.5), c(0.0), c(0.0), c(-0.5)]);
        assert!(matches!(DensityMatrix::new(neg, 1), Err(Error::NotPositive(_))));
    }
}
