//! Named states and their closed-form measure values: GHZ, W and W-class
//! states, GHZ mixed with white noise, and the nine four-qubit SLOCC families.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::qstate::{clamped_sqrt, DensityMatrix, PureState, SubsystemSet, C64, ZERO_NORM};

/// `(|0…0⟩ + |1…1⟩)/√2`.
pub fn ghz(n: usize) -> Result<PureState> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("GHZ state needs n >= 2, got {n}")));
    }
    let mut a = vec![C64::new(0.0, 0.0); 1 << n];
    a[0] = C64::new(1.0, 0.0);
    a[(1 << n) - 1] = C64::new(1.0, 0.0);
    PureState::new(a, n)
}

/// Uniform single-excitation superposition.
pub fn w(n: usize) -> Result<PureState> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("W state needs n >= 2, got {n}")));
    }
    w_class(&vec![C64::new(1.0, 0.0); n])
}

/// `a₁|0…01⟩ + a₂|0…10⟩ + … + aₙ|10…0⟩`, normalized.
///
/// `coeffs[i]` multiplies the basis state `2^i`, so coefficient `aᵢ` excites
/// site `n − i` (0-based).
pub fn w_class(coeffs: &[C64]) -> Result<PureState> {
    let n = coeffs.len();
    if n < 2 {
        return Err(Error::OutOfRange(format!("W-class state needs n >= 2, got {n}")));
    }
    let mut a = vec![C64::new(0.0, 0.0); 1 << n];
    for (i, c) in coeffs.iter().enumerate() {
        a[1 << i] = *c;
    }
    PureState::new(a, n)
}

/// Coefficient weights `|aᵢ|² / Σ|a|²` indexed by 0-based site.
fn w_site_weights(coeffs: &[C64]) -> Result<Vec<f64>> {
    let total: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    if total.sqrt() < ZERO_NORM {
        return Err(Error::ZeroVector);
    }
    let n = coeffs.len();
    Ok((0..n).map(|site| coeffs[n - 1 - site].norm_sqr() / total).collect())
}

/// `1 − Tr ρ_S²` of a W-class state for a block of sites: `2w(1 − w)` with
/// `w` the total weight of the coefficients exciting the block.
pub fn w_class_linear_entropy(coeffs: &[C64], block: &SubsystemSet) -> Result<f64> {
    block.check_within(coeffs.len())?;
    let weights = w_site_weights(coeffs)?;
    let w: f64 = block.indices().iter().map(|&s| weights[s]).sum();
    Ok(2.0 * w * (1.0 - w))
}

/// Two-tangle `τ_ij = 4|a_{n+1−i}|²|a_{n+1−j}|²` of a W-class state, using
/// 1-based site labels `1 ≤ i < j ≤ n`.
pub fn w_two_tangle(coeffs: &[C64], i: usize, j: usize) -> Result<f64> {
    let n = coeffs.len();
    if i == 0 || i >= j || j > n {
        return Err(Error::IndexOutOfRange { index: if i == 0 { 0 } else { j }, num_sites: n });
    }
    let weights = w_site_weights(coeffs)?;
    Ok(4.0 * weights[i - 1] * weights[j - 1])
}

/// `C_{k-ME}(|W⟩) = √((2/k)[(k−1)n − k(k−1)/2] τ)` with `τ = 4/n²`.
pub fn w_kme_closed_form(n: usize, k: usize) -> Result<f64> {
    if n < 3 || k < 2 || k > n {
        return Err(Error::OutOfRange(format!("W closed form needs n >= 3 and 2 <= k <= n, got n={n}, k={k}")));
    }
    let (nf, kf) = (n as f64, k as f64);
    let tau = 4.0 / (nf * nf);
    Ok((2.0 / kf * ((kf - 1.0) * nf - kf * (kf - 1.0) / 2.0) * tau).sqrt())
}

/// Mixing weight below which `ρ^G(t)` is fully separable: `1/(2^{n−1} + 1)`.
pub fn ghz_noise_threshold(n: usize) -> f64 {
    1.0 / ((1u64 << (n - 1)) as f64 + 1.0)
}

/// `(1 − t)/2ⁿ · I + t |GHZ_n⟩⟨GHZ_n|`.
pub fn ghz_noise(n: usize, t: f64) -> Result<DensityMatrix> {
    if !(2..=12).contains(&n) || !(0.0..=1.0).contains(&t) {
        return Err(Error::OutOfRange(format!("ghz_noise needs 2 <= n <= 12 and t in [0, 1], got n={n}, t={t}")));
    }
    let dim = 1usize << n;
    let mut m = DMatrix::identity(dim, dim) * C64::new((1.0 - t) / dim as f64, 0.0);
    for (r, c) in [(0, 0), (0, dim - 1), (dim - 1, 0), (dim - 1, dim - 1)] {
        m[(r, c)] += C64::new(t / 2.0, 0.0);
    }
    DensityMatrix::new(m, n)
}

fn check_ghz_noise_domain(n: usize, t: f64) -> Result<()> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("n must be >= 2, got {n}")));
    }
    let lo = ghz_noise_threshold(n);
    if t < lo - 1e-12 || t > 1.0 + 1e-12 {
        return Err(Error::OutOfDomain(format!("t = {t} outside [{lo}, 1] for n = {n}")));
    }
    Ok(())
}

fn ghz_noise_formula(n: usize, t: f64) -> f64 {
    let half = (1u64 << (n - 1)) as f64;
    ((half + 1.0) * t - 1.0) / half
}

/// Per-site negativity of `ρ^G(t)` for `t` at or above the separability threshold.
pub fn ghz_noise_negativity(n: usize, t: f64) -> Result<f64> {
    check_ghz_noise_domain(n, t)?;
    Ok(ghz_noise_formula(n, t))
}

/// Exact n-ME concurrence of `ρ^G(t)` on `t ∈ [1/(2^{n−1}+1), 1]`.
pub fn ghz_noise_nme_exact(n: usize, t: f64) -> Result<f64> {
    check_ghz_noise_domain(n, t)?;
    Ok(ghz_noise_formula(n, t))
}

/// The nine four-qubit SLOCC families, numbered 1..=9.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SloccFamily {
    /// `G_abcd`
    Gabcd,
    /// `L_abc₂`
    Labc2,
    /// `L_a₂b₂`
    La2b2,
    /// `L_ab₃`
    Lab3,
    /// `L_a₄`
    La4,
    /// `L_a₂0_{3⊕1̄}`
    La2O31,
    /// `L_0_{5⊕3̄}`
    L0O53,
    /// `L_0_{7⊕1̄}`
    L0O71,
    /// `L_0_{3⊕1̄}0_{3⊕1̄}`
    L0O31O31,
}

impl SloccFamily {
    pub const ALL: [SloccFamily; 9] = [
        SloccFamily::Gabcd,
        SloccFamily::Labc2,
        SloccFamily::La2b2,
        SloccFamily::Lab3,
        SloccFamily::La4,
        SloccFamily::La2O31,
        SloccFamily::L0O53,
        SloccFamily::L0O71,
        SloccFamily::L0O31O31,
    ];

    pub fn id(self) -> u8 {
        Self::ALL.iter().position(|&f| f == self).expect("listed") as u8 + 1
    }

    pub fn from_id(id: u8) -> Result<Self> {
        id.checked_sub(1)
            .and_then(|i| Self::ALL.get(i as usize).copied())
            .ok_or_else(|| Error::OutOfRange(format!("family id must be 1..=9, got {id}")))
    }

    pub fn name(self) -> &'static str {
        match self {
            SloccFamily::Gabcd => "G_abcd",
            SloccFamily::Labc2 => "L_abc2",
            SloccFamily::La2b2 => "L_a2b2",
            SloccFamily::Lab3 => "L_ab3",
            SloccFamily::La4 => "L_a4",
            SloccFamily::La2O31 => "L_a2_0(3+1)",
            SloccFamily::L0O53 => "L_0(5+3)",
            SloccFamily::L0O71 => "L_0(7+1)",
            SloccFamily::L0O31O31 => "L_0(3+1)0(3+1)",
        }
    }

    /// Number of complex parameters the family uses (`a`, `b`, `c`, `d` in order).
    pub fn num_params(self) -> usize {
        match self {
            SloccFamily::Gabcd => 4,
            SloccFamily::Labc2 => 3,
            SloccFamily::La2b2 | SloccFamily::Lab3 => 2,
            SloccFamily::La4 | SloccFamily::La2O31 => 1,
            _ => 0,
        }
    }

    /// Whether `C_{2-ME} = min Nᵖ` holds for every parameter value.
    pub fn min_negativity_unconditional(self) -> bool {
        self.id() >= 6
    }
}

/// A family together with its (possibly unused) complex parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FamilyParams {
    pub family: SloccFamily,
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

impl FamilyParams {
    pub fn new(family: SloccFamily, a: C64, b: C64, c: C64, d: C64) -> Self {
        Self { family, a, b, c, d }
    }

    /// A parameter-free family, or one with all parameters zero.
    pub fn bare(family: SloccFamily) -> Self {
        let z = C64::new(0.0, 0.0);
        Self::new(family, z, z, z, z)
    }

    pub fn descriptor(&self) -> String {
        let fmt = |z: C64| format!("{}{:+}i", z.re, z.im);
        let params = [self.a, self.b, self.c, self.d];
        let used: Vec<String> = ["a", "b", "c", "d"]
            .iter()
            .zip(params)
            .take(self.family.num_params())
            .map(|(n, z)| format!("{n}={}", fmt(z)))
            .collect();
        if used.is_empty() {
            format!("family{}", self.family.id())
        } else {
            format!("family{}({})", self.family.id(), used.join(","))
        }
    }
}

fn basis_index(bits: &str) -> usize {
    usize::from_str_radix(bits, 2).expect("static bit string")
}

/// The unnormalized family vector.
pub fn family_vector(params: &FamilyParams) -> Vec<C64> {
    let FamilyParams { a, b, c, d, .. } = *params;
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let half = 0.5;
    let terms: Vec<(C64, &[&str])> = match params.family {
        SloccFamily::Gabcd => vec![
            ((a + d) * half, &["0000", "1111"]),
            ((a - d) * half, &["0011", "1100"]),
            ((b + c) * half, &["0101", "1010"]),
            ((b - c) * half, &["0110", "1001"]),
        ],
        SloccFamily::Labc2 => vec![
            ((a + b) * half, &["0000", "1111"]),
            ((a - b) * half, &["0011", "1100"]),
            (c, &["0101", "1010"]),
            (one, &["0110"]),
        ],
        SloccFamily::La2b2 => vec![(a, &["0000", "1111"]), (b, &["0101", "1010"]), (one, &["0110", "0011"])],
        SloccFamily::Lab3 => vec![
            (a, &["0000", "1111"]),
            ((a + b) * half, &["0101", "1010"]),
            ((a - b) * half, &["0110", "1001"]),
            (i / 2f64.sqrt(), &["0001", "0010", "0111", "1011"]),
        ],
        SloccFamily::La4 => vec![(a, &["0000", "0101", "1010", "1111"]), (i, &["0001"]), (one, &["0110"]), (-i, &["1011"])],
        SloccFamily::La2O31 => vec![(a, &["0000", "1111"]), (one, &["0011", "0101", "0110"])],
        SloccFamily::L0O53 => vec![(one, &["0000", "0101", "1000", "1110"])],
        SloccFamily::L0O71 => vec![(one, &["0000", "1011", "1101", "1110"])],
        SloccFamily::L0O31O31 => vec![(one, &["0000", "0111"])],
    };
    let mut v = vec![C64::new(0.0, 0.0); 16];
    for (coef, kets) in terms {
        for k in kets {
            v[basis_index(k)] += coef;
        }
    }
    v
}

/// The normalized family state.
pub fn slocc_family(params: &FamilyParams) -> Result<PureState> {
    PureState::new(family_vector(params), 4)
}

/// Status of `C_{2-ME} = min{N¹..N⁴}` for a family member.
#[derive(Clone, Debug, PartialEq)]
pub enum MinNegativityRelation {
    Holds,
    Fails,
    /// The relation is asserted when `condition_value >= 0`.
    Conditional { condition_value: f64, satisfied: bool },
}

impl MinNegativityRelation {
    fn conditional(condition_value: f64) -> Self {
        MinNegativityRelation::Conditional { condition_value, satisfied: condition_value >= 0.0 }
    }

    /// Whether equality is asserted for these parameters.
    pub fn asserted(&self) -> bool {
        match self {
            MinNegativityRelation::Holds => true,
            MinNegativityRelation::Fails => false,
            MinNegativityRelation::Conditional { satisfied, .. } => *satisfied,
        }
    }
}

/// Closed-form predictions for one family member.
///
/// `c2`, `c3` are the minimum-over-candidates forms; `extra` carries the
/// piecewise branch selections and auxiliary scalars where the family has them.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedFormPrediction {
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub negativities: [f64; 4],
    pub c2_equals_min_n: MinNegativityRelation,
    pub extra: Vec<(&'static str, f64)>,
}

fn min_of(values: &[f64]) -> f64 {
    values.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Every closed-form value known for the family at these parameters.
pub fn family_closed_forms(params: &FamilyParams) -> Result<ClosedFormPrediction> {
    let FamilyParams { a, b, c, d, .. } = *params;
    let (aa, bb, cc, dd) = (a.norm_sqr(), b.norm_sqr(), c.norm_sqr(), d.norm_sqr());
    let sq = clamped_sqrt;
    // 2 Re(u v*), i.e. u v* + u* v.
    let cross = |u: C64, v: C64| 2.0 * (u * v.conj()).re;
    let s3 = 3f64.sqrt();

    let pred = match params.family {
        SloccFamily::L0O31O31 => ClosedFormPrediction {
            c2: 0.0,
            c3: (2.0f64 / 3.0).sqrt(),
            c4: s3 / 2.0,
            negativities: [0.0, 1.0, 1.0, 1.0],
            c2_equals_min_n: MinNegativityRelation::Holds,
            extra: vec![],
        },
        SloccFamily::L0O71 => ClosedFormPrediction {
            c2: s3 / 2.0,
            c3: 1.0,
            c4: 15f64.sqrt() / 4.0,
            negativities: [s3 / 2.0, 1.0, 1.0, 1.0],
            c2_equals_min_n: MinNegativityRelation::Holds,
            extra: vec![],
        },
        SloccFamily::L0O53 => ClosedFormPrediction {
            c2: s3 / 2.0,
            c3: (5.0f64 / 6.0).sqrt(),
            c4: 13f64.sqrt() / 4.0,
            negativities: [s3 / 2.0, 1.0, s3 / 2.0, s3 / 2.0],
            c2_equals_min_n: MinNegativityRelation::Holds,
            extra: vec![],
        },
        SloccFamily::La2O31 => {
            let q2 = (2.0 * aa + 3.0).powi(2);
            let n1 = sq(1.0 - 9.0 / q2);
            let n2 = sq(1.0 - 1.0 / q2);
            ClosedFormPrediction {
                c2: n1,
                c3: sq(1.0 - (11.0 - 4.0 * aa) / (3.0 * q2)),
                c4: sq(1.0 - 3.0 / q2),
                negativities: [n1, n2, n2, n2],
                c2_equals_min_n: MinNegativityRelation::Holds,
                extra: vec![],
            }
        }
        SloccFamily::La4 => {
            let q = 4.0 * aa + 3.0;
            let q2 = q * q;
            let c2_low = 2.0 * sq(4.0 * aa * aa + 6.0 * aa + 2.0) / q;
            let c2_high = 2.0 * sq(12.0 * aa + 2.0) / q;
            let c3_mid = sq(7.0 / 6.0 - (7.0 + 24.0 * aa) / (6.0 * q2));
            let c3_outer = sq(4.0 / 3.0 - 2.0 * (16.0 * aa * aa + 6.0) / (3.0 * q2));
            let c2_branch = if aa <= 1.5 { c2_low } else { c2_high };
            let c3_branch = if ((3.0 - s3) / 6.0..=(3.0 + s3) / 6.0).contains(&aa) { c3_mid } else { c3_outer };
            let n = sq(1.0 - 1.0 / q2);
            ClosedFormPrediction {
                c2: c2_low.min(c2_high),
                c3: c3_mid.min(c3_outer),
                c4: n,
                negativities: [n; 4],
                c2_equals_min_n: MinNegativityRelation::conditional(1.5 - aa),
                extra: vec![("C2 branch", c2_branch), ("C3 branch", c3_branch)],
            }
        }
        SloccFamily::Lab3 => {
            let q = 3.0 * aa + bb + 2.0;
            let q2 = q * q;
            let m_terms = [
                6.0 * aa * aa + 2.0 * bb * bb + 8.0 * aa + 3.0,
                (a + b).norm_sqr().powi(2) / 4.0 + (a - b).norm_sqr().powi(2) / 4.0 + (3.0 * a + b).norm_sqr()
                    + (a - b).norm_sqr()
                    + 4.0 * aa * aa
                    - 2.0 * aa
                    + 2.0 * bb
                    + 2.0
                    + 2.0 * aa * (a + b).norm_sqr()
                    + (cross(a + b, a) + 1.0).powi(2),
                (a + b).norm_sqr().powi(2) / 4.0 + (a - b).norm_sqr().powi(2) / 4.0 + (3.0 * a - b).norm_sqr()
                    + (a + b).norm_sqr()
                    + 4.0 * aa * aa
                    - 2.0 * aa
                    + 2.0 * bb
                    + 2.0
                    + 2.0 * aa * (a - b).norm_sqr()
                    + (cross(a - b, a) + 1.0).powi(2),
            ];
            let m = m_terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let n = sq(1.0 - (1.0 + 8.0 * aa) / q2);
            ClosedFormPrediction {
                c2: n.min(sq(2.0 - (m + 1.0 + 8.0 * aa) / q2)),
                c3: sq(4.0 / 3.0 - (m + 3.0 + 24.0 * aa) / (3.0 * q2)),
                c4: n,
                negativities: [n; 4],
                c2_equals_min_n: MinNegativityRelation::conditional(q2 - m),
                extra: vec![("M", m)],
            }
        }
        SloccFamily::La2b2 => {
            let q2 = (aa + bb + 1.0).powi(2);
            let s = cross(a, b);
            let slack = 2.0 * aa + 2.0 * bb - s * s;
            let n13 = sq(1.0 - 1.0 / q2);
            ClosedFormPrediction {
                c2: n13.min(sq(1.0 - 1.0 / q2 + slack / q2)),
                c3: sq(1.0 - 1.0 / (3.0 * q2) + 2.0 * aa * bb / (3.0 * q2)).min(sq(1.0 - 1.0 / q2 + slack / (3.0 * q2))),
                c4: sq(1.0 - 1.0 / (2.0 * q2)),
                negativities: [n13, 1.0, n13, 1.0],
                c2_equals_min_n: MinNegativityRelation::conditional(slack),
                extra: vec![],
            }
        }
        SloccFamily::Labc2 => {
            let q2 = (aa + bb + 2.0 * cc + 1.0).powi(2);
            let s = cross(a, b);
            let aux_t = aa * aa + bb * bb + 2.0 * aa * bb + 8.0 * cc;
            // 2(a±b)²(c*)² + 2[(a±b)*]²c² = 4 Re((a±b)² (c*)²)
            let plus = 4.0 * ((a + b) * (a + b) * c.conj() * c.conj()).re;
            let minus = 4.0 * ((a - b) * (a - b) * c.conj() * c.conj()).re;
            let x = 4.0 * (cc * cc + aa * bb + 2.0 * aa * cc + 2.0 * bb * cc + aa + bb);
            let lin = s * (8.0 * cc - 4.0);
            let n = sq(1.0 - 1.0 / q2);
            let c2 = min_of(&[
                n,
                sq(x / q2),
                sq(1.0 - (2.0 - aux_t + s * s + lin + plus) / (2.0 * q2)),
                sq(1.0 - (2.0 - aux_t + s * s - lin + minus) / (2.0 * q2)),
            ]);
            let c3 = min_of(&[
                sq(2.0 / 3.0 + (x - 2.0) / (3.0 * q2)),
                sq(1.0 - (6.0 - aux_t + s * s + lin + plus) / (6.0 * q2)),
                sq(1.0 - (6.0 - aux_t + s * s - lin + minus) / (6.0 * q2)),
            ]);
            let slack1 = aux_t - s * s - (lin + plus);
            let slack2 = aux_t - s * s - (-lin + minus);
            let slack3 = 2.0 * aa * bb + 4.0 * aa * cc + 4.0 * cc * bb + 2.0 * aa + 2.0 * bb - (aa * aa + bb * bb + 4.0 * cc);
            ClosedFormPrediction {
                c2,
                c3,
                c4: n,
                negativities: [n; 4],
                c2_equals_min_n: MinNegativityRelation::conditional(min_of(&[slack1, slack2, slack3])),
                extra: vec![("aux_t", aux_t)],
            }
        }
        SloccFamily::Gabcd => {
            let q = aa + bb + cc + dd;
            if q.sqrt() < ZERO_NORM {
                return Err(Error::ZeroVector);
            }
            let q2 = q * q;
            let f4 = aa * aa + bb * bb + cc * cc + dd * dd;
            let x = ((a + d).norm_sqr() + (b + c).norm_sqr()).powi(2)
                + ((a - d).norm_sqr() + (b - c).norm_sqr()).powi(2)
                + cross(a + d, b + c).powi(2)
                + cross(a - d, b - c).powi(2);
            let y = ((a + d).norm_sqr() + (b - c).norm_sqr()).powi(2)
                + ((a - d).norm_sqr() + (b + c).norm_sqr()).powi(2)
                + cross(a + d, b - c).powi(2)
                + cross(a - d, b + c).powi(2);
            let m = (2.0 * f4).max(x / 4.0).max(y / 4.0);
            ClosedFormPrediction {
                c2: min_of(&[sq(2.0 - 2.0 * f4 / q2), sq(2.0 - x / (4.0 * q2)), sq(2.0 - y / (4.0 * q2)), 1.0]),
                c3: min_of(&[
                    sq(4.0 / 3.0 - 2.0 * f4 / (3.0 * q2)),
                    sq(4.0 / 3.0 - x / (12.0 * q2)),
                    sq(4.0 / 3.0 - y / (12.0 * q2)),
                ]),
                c4: 1.0,
                negativities: [1.0; 4],
                c2_equals_min_n: MinNegativityRelation::conditional(q2 - m),
                extra: vec![("M", m), ("x", x), ("y", y)],
            }
        }
    };
    Ok(pred)
}
