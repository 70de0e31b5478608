//! Set partitions of the site labels `{0..n−1}`.

use crate::error::{Error, Result};
use crate::qstate::SubsystemSet;

/// Largest `n` accepted by the enumerators.
pub const MAX_PARTITION_SITES: usize = 14;

/// A set partition in canonical form: blocks sorted internally and ordered by
/// their smallest element.
///
/// `Ord` is lexicographic over the block list, which is the tie-break order
/// used by the k-ME minimization.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    blocks: Vec<SubsystemSet>,
}

impl Partition {
    /// Canonicalizes and validates `blocks` as a partition of `0..num_sites`.
    pub fn new(blocks: Vec<SubsystemSet>, num_sites: usize) -> Result<Self> {
        let mut seen = vec![false; num_sites];
        for b in &blocks {
            b.check_within(num_sites)?;
            for &i in b.indices() {
                if seen[i] {
                    return Err(Error::InvalidSubsystem(format!("site {i} appears in two blocks")));
                }
                seen[i] = true;
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidSubsystem(format!("site {missing} is not covered")));
        }
        let mut blocks = blocks;
        blocks.sort_by_key(|b| b.indices()[0]);
        Ok(Self { blocks })
    }

    /// Builds the partition whose block labels are the restricted-growth string `rgs`.
    pub fn from_rgs(rgs: &[usize]) -> Self {
        let k = rgs.iter().max().map_or(0, |m| m + 1);
        let mut blocks = vec![Vec::new(); k];
        for (site, &b) in rgs.iter().enumerate() {
            blocks[b].push(site);
        }
        // A restricted-growth string already orders blocks by first element.
        Self {
            blocks: blocks.into_iter().map(|b| SubsystemSet::new(b).expect("non-empty block")).collect(),
        }
    }

    pub fn blocks(&self) -> &[SubsystemSet] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn num_sites(&self) -> usize {
        self.blocks.iter().map(SubsystemSet::len).sum()
    }

    /// Re-sorts into canonical form (idempotent on values built by this module).
    pub fn canonicalized(&self) -> Self {
        let n = self.num_sites();
        Self::new(self.blocks.clone(), n).expect("already a valid partition")
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, "|")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// All partitions of `0..n` into exactly `k` non-empty blocks, in
/// lexicographic order of their restricted-growth strings.
pub fn k_partitions(n: usize, k: usize) -> Result<Vec<Partition>> {
    if n == 0 || n > MAX_PARTITION_SITES || k == 0 || k > n {
        return Err(Error::OutOfRange(format!("k_partitions needs 1 <= k <= n <= {MAX_PARTITION_SITES}, got n={n}, k={k}")));
    }
    let mut out = Vec::with_capacity(stirling2(n, k) as usize);
    let mut rgs = vec![0usize; n];
    extend_rgs(&mut rgs, 1, 1, k, &mut out);
    Ok(out)
}

// rgs[..pos] is fixed and uses labels 0..used; fill the rest so the total label count is k.
fn extend_rgs(rgs: &mut [usize], pos: usize, used: usize, k: usize, out: &mut Vec<Partition>) {
    let n = rgs.len();
    if pos == n {
        if used == k {
            out.push(Partition::from_rgs(rgs));
        }
        return;
    }
    // Not enough positions left to open the missing blocks.
    if k - used > n - pos {
        return;
    }
    for label in 0..=used.min(k - 1) {
        rgs[pos] = label;
        extend_rgs(rgs, pos + 1, used.max(label + 1), k, out);
    }
}

/// The two-block partitions; there are `2^{n−1} − 1` of them.
pub fn bipartitions(n: usize) -> Result<Vec<Partition>> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("bipartitions needs n >= 2, got {n}")));
    }
    k_partitions(n, 2)
}

/// Complement of `s` in `0..n`; `s` must be a proper subset.
pub fn complement(s: &SubsystemSet, n: usize) -> Result<SubsystemSet> {
    s.complement(n)
}

/// Stirling number of the second kind by the triangle recurrence.
pub fn stirling2(n: usize, k: usize) -> u64 {
    let mut row = vec![0u64; k + 1];
    row[0] = 1;
    for i in 1..=n {
        for j in (1..=k.min(i)).rev() {
            row[j] = j as u64 * row[j] + row[j - 1];
        }
        row[0] = 0;
    }
    row[k]
}
