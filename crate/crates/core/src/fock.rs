//! Two-site bosonic Fock space in the prime-labelled basis.
//!
//! A basis ket `|2^α 3^β⟩` holds `α` bosons on the site labelled by the prime
//! 2 and `β` bosons on the site labelled by 3. The space splits into
//! particle-number blocks; block `k` has dimension `k + 1` and is spanned by
//! `|2^α 3^(k-α)⟩` for `α = 0..=k`. Every vector type in this crate indexes a
//! block by `α`, ascending.
//!
//! The ladder operators act on whole blocks. Lowering the vacuum has no
//! target block, so the annihilators return `Option<KVector>` with `None`
//! standing for the zero vector.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Occupation pair `(α, β)`: the ket `|2^α 3^β⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisState {
    pub alpha: usize,
    pub beta: usize,
}

impl BasisState {
    pub const VACUUM: BasisState = BasisState { alpha: 0, beta: 0 };

    pub fn new(alpha: usize, beta: usize) -> Self {
        BasisState { alpha, beta }
    }

    /// Total particle number `k = α + β`.
    pub fn particles(&self) -> usize {
        self.alpha + self.beta
    }

    /// Occupation of one site.
    pub fn occupation(&self, site: Site) -> usize {
        match site {
            Site::Two => self.alpha,
            Site::Three => self.beta,
        }
    }

    /// The integer label `n = 2^α 3^β`.
    ///
    /// Only meant for display; fails with [`Error::Overflow`] once the label
    /// leaves the `u128` range.
    pub fn integer_label(&self) -> Result<u128> {
        let overflow = Error::Overflow {
            alpha: self.alpha,
            beta: self.beta,
        };
        let alpha = u32::try_from(self.alpha).map_err(|_| overflow.clone())?;
        let beta = u32::try_from(self.beta).map_err(|_| overflow.clone())?;
        2u128
            .checked_pow(alpha)
            .zip(3u128.checked_pow(beta))
            .and_then(|(a, b)| a.checked_mul(b))
            .ok_or(overflow)
    }
}

/// One of the two lattice sites, named by its prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Site {
    Two,
    Three,
}

impl Site {
    pub const ALL: [Site; 2] = [Site::Two, Site::Three];

    pub fn prime(self) -> u32 {
        match self {
            Site::Two => 2,
            Site::Three => 3,
        }
    }

    pub fn from_prime(p: u32) -> Option<Site> {
        match p {
            2 => Some(Site::Two),
            3 => Some(Site::Three),
            _ => None,
        }
    }
}

/// A vector inside the `k`-particle block.
///
/// `amps[α]` is the coefficient of `|2^α 3^(k-α)⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct KVector {
    k: usize,
    amps: Vec<Complex64>,
}

impl KVector {
    pub fn zeros(k: usize) -> Self {
        KVector {
            k,
            amps: vec![Complex64::new(0.0, 0.0); k + 1],
        }
    }

    pub fn vacuum() -> Self {
        Self::basis(BasisState::VACUUM)
    }

    pub fn basis(state: BasisState) -> Self {
        let mut v = Self::zeros(state.particles());
        v.amps[state.alpha] = Complex64::new(1.0, 0.0);
        v
    }

    /// Wraps `amps` as a block vector with `k = amps.len() - 1`.
    pub fn from_amps(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidArgument("a block vector needs at least one amplitude".into()));
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(KVector {
            k: amps.len() - 1,
            amps,
        })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::from_amps(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    // Callers guarantee length and finiteness.
    pub(crate) fn from_amps_unchecked(amps: Vec<Complex64>) -> Self {
        debug_assert!(!amps.is_empty());
        KVector {
            k: amps.len() - 1,
            amps,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.k + 1
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amps(self) -> Vec<Complex64> {
        self.amps
    }

    /// Coefficient of `|2^α 3^(k-α)⟩`; zero outside the block.
    pub fn amp(&self, alpha: usize) -> Complex64 {
        self.amps.get(alpha).copied().unwrap_or_default()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `⟨self, other⟩`, antilinear in `self`. Distinct blocks are orthogonal.
    pub fn inner(&self, other: &KVector) -> Complex64 {
        if self.k != other.k {
            return Complex64::new(0.0, 0.0);
        }
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn scale(&self, factor: Complex64) -> KVector {
        KVector {
            k: self.k,
            amps: self.amps.iter().map(|a| a * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: f64) -> KVector {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// Euclidean distance; panics if the blocks differ.
    pub fn distance(&self, other: &KVector) -> f64 {
        (self - other).norm()
    }

    pub fn max_abs_diff(&self, other: &KVector) -> f64 {
        assert_eq!(self.k, other.k, "block mismatch");
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn zip_with(&self, other: &KVector, f: impl Fn(Complex64, Complex64) -> Complex64) -> KVector {
        assert_eq!(self.k, other.k, "cannot combine vectors from blocks {} and {}", self.k, other.k);
        KVector {
            k: self.k,
            amps: self.amps.iter().zip(&other.amps).map(|(&a, &b)| f(a, b)).collect(),
        }
    }
}

impl Add for &KVector {
    type Output = KVector;
    fn add(self, rhs: &KVector) -> KVector {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &KVector {
    type Output = KVector;
    fn sub(self, rhs: &KVector) -> KVector {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &KVector {
    type Output = KVector;
    fn neg(self) -> KVector {
        self.scale_real(-1.0)
    }
}

impl Mul<&KVector> for Complex64 {
    type Output = KVector;
    fn mul(self, rhs: &KVector) -> KVector {
        rhs.scale(self)
    }
}

impl Mul<&KVector> for f64 {
    type Output = KVector;
    fn mul(self, rhs: &KVector) -> KVector {
        rhs.scale_real(self)
    }
}

/// `â_p†`: adds a boson to `site`, mapping block `k` to block `k + 1`.
pub fn apply_create(site: Site, v: &KVector) -> KVector {
    let k = v.k;
    let mut out = KVector::zeros(k + 1);
    for (alpha, &a) in v.amps.iter().enumerate() {
        match site {
            Site::Two => out.amps[alpha + 1] = a * ((alpha + 1) as f64).sqrt(),
            Site::Three => out.amps[alpha] = a * ((k - alpha + 1) as f64).sqrt(),
        }
    }
    out
}

/// `â_p`: removes a boson from `site`, mapping block `k` to block `k - 1`.
///
/// Returns `None` on the vacuum block.
pub fn apply_annihilate(site: Site, v: &KVector) -> Option<KVector> {
    let k = v.k.checked_sub(1)?;
    let amps = (0..=k)
        .map(|alpha| match site {
            Site::Two => v.amps[alpha + 1] * ((alpha + 1) as f64).sqrt(),
            Site::Three => v.amps[alpha] * ((v.k - alpha) as f64).sqrt(),
        })
        .collect();
    Some(KVector::from_amps_unchecked(amps))
}

/// `N̂_p = â_p†â_p`, diagonal in the occupation basis.
pub fn apply_number(site: Site, v: &KVector) -> KVector {
    let amps = v
        .amps
        .iter()
        .enumerate()
        .map(|(alpha, a)| {
            let n = match site {
                Site::Two => alpha,
                Site::Three => v.k - alpha,
            };
            a * n as f64
        })
        .collect();
    KVector::from_amps_unchecked(amps)
}

/// `ĉ† = (â_2† + â_3†)/√2`.
pub fn apply_c_dagger(v: &KVector) -> KVector {
    let sum = &apply_create(Site::Two, v) + &apply_create(Site::Three, v);
    sum.scale_real(FRAC_1_SQRT_2)
}

/// `d̂† = (â_2† − â_3†)/√2`.
pub fn apply_d_dagger(v: &KVector) -> KVector {
    let diff = &apply_create(Site::Two, v) - &apply_create(Site::Three, v);
    diff.scale_real(FRAC_1_SQRT_2)
}

/// `ĉ = (â_2 + â_3)/√2`; `None` on the vacuum block.
pub fn apply_c(v: &KVector) -> Option<KVector> {
    let a2 = apply_annihilate(Site::Two, v)?;
    let a3 = apply_annihilate(Site::Three, v)?;
    Some((&a2 + &a3).scale_real(FRAC_1_SQRT_2))
}

/// `d̂ = (â_2 − â_3)/√2`; `None` on the vacuum block.
pub fn apply_d(v: &KVector) -> Option<KVector> {
    let a2 = apply_annihilate(Site::Two, v)?;
    let a3 = apply_annihilate(Site::Three, v)?;
    Some((&a2 - &a3).scale_real(FRAC_1_SQRT_2))
}

/// A finitely supported element of the full Fock space: one [`KVector`] per
/// stored particle number. Missing blocks are zero.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FockVector {
    blocks: BTreeMap<usize, KVector>,
}

impl FockVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn vacuum() -> Self {
        Self::from_block(KVector::vacuum())
    }

    pub fn from_block(block: KVector) -> Self {
        let mut blocks = BTreeMap::new();
        blocks.insert(block.k, block);
        FockVector { blocks }
    }

    /// Collects blocks, summing any that share a particle number.
    pub fn from_blocks(iter: impl IntoIterator<Item = KVector>) -> Self {
        let mut blocks: BTreeMap<usize, KVector> = BTreeMap::new();
        for block in iter {
            match blocks.get_mut(&block.k) {
                Some(existing) => *existing = &*existing + &block,
                None => {
                    blocks.insert(block.k, block);
                }
            }
        }
        FockVector { blocks }
    }

    pub fn block(&self, k: usize) -> Option<&KVector> {
        self.blocks.get(&k)
    }

    /// Stored blocks in ascending `k`.
    pub fn blocks(&self) -> impl Iterator<Item = &KVector> {
        self.blocks.values()
    }

    pub fn into_blocks(self) -> impl Iterator<Item = KVector> {
        self.blocks.into_values()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn max_k(&self) -> Option<usize> {
        self.blocks.keys().next_back().copied()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.blocks.values().map(KVector::norm_sqr).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `⟨self, other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &FockVector) -> Complex64 {
        self.blocks
            .iter()
            .filter_map(|(k, u)| other.blocks.get(k).map(|v| u.inner(v)))
            .sum()
    }

    /// Applies a block map, dropping `None` results and summing collisions.
    pub fn map_blocks(&self, f: impl Fn(&KVector) -> Option<KVector>) -> FockVector {
        Self::from_blocks(self.blocks.values().filter_map(f))
    }

    pub fn scale(&self, factor: Complex64) -> FockVector {
        self.map_blocks(|b| Some(b.scale(factor)))
    }

    pub fn add(&self, other: &FockVector) -> FockVector {
        Self::from_blocks(self.blocks.values().chain(other.blocks.values()).cloned())
    }

    pub fn sub(&self, other: &FockVector) -> FockVector {
        Self::from_blocks(
            self.blocks
                .values()
                .cloned()
                .chain(other.blocks.values().map(|b| -b)),
        )
    }

    /// Largest entrywise modulus difference over the union of stored blocks.
    pub fn max_abs_diff(&self, other: &FockVector) -> f64 {
        self.sub(other)
            .blocks
            .values()
            .flat_map(|b| b.amps.iter().map(|a| a.norm()))
            .fold(0.0, f64::max)
    }

    pub fn distance(&self, other: &FockVector) -> f64 {
        self.sub(other).norm()
    }
}

impl From<KVector> for FockVector {
    fn from(block: KVector) -> Self {
        Self::from_block(block)
    }
}
