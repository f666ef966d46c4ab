//! Closed-form eigensystem of the hopping Hamiltonian on each block.
//!
//! On block `k` the vectors `(ĉ†)^m (d̂†)^(k−m) |vac⟩`, `m = 0..=k`, are
//! eigenvectors of `H` with eigenvalue `2m − k`. Their squared norm is
//! `m!(k−m)!`; the normalized versions form a real orthonormal basis of the
//! block.
//!
//! Normalized eigenvectors are built block by block with normalized
//! raising steps, so no factorial is ever formed. [`Eigenbasis`] builds the
//! whole basis of block `k + 1` from the basis of block `k` in `O(k²)`
//! operations.
//!
//! Two routes lead from a block vector to its eigenbasis coefficients:
//! inner products with the basis vectors ([`to_eigenbasis_direct`]) and the
//! cascade of normalized lowering maps `ĉ_k`, `d̂_k`
//! ([`to_eigenbasis_cascade`]).

use num_complex::Complex64;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::fock::{apply_annihilate, apply_c_dagger, apply_d_dagger, KVector, Site};

/// Label `(k, m)` of the eigenvector `(ĉ†)^m (d̂†)^(k−m) |vac⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EigenIndex {
    k: usize,
    m: usize,
}

impl EigenIndex {
    pub fn new(k: usize, m: usize) -> Result<Self> {
        if m > k {
            return Err(Error::IndexOutOfRange { k, m });
        }
        Ok(EigenIndex { k, m })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn eigenvalue(&self) -> i64 {
        2 * self.m as i64 - self.k as i64
    }
}

/// Eigenvalue `2m − k` of `H` on block `k`.
pub fn eigenvalue(k: usize, m: usize) -> Result<i64> {
    Ok(EigenIndex::new(k, m)?.eigenvalue())
}

/// The unnormalized eigenvector `(ĉ†)^m (d̂†)^(k−m) |vac⟩`.
///
/// Its squared norm is `m!(k−m)!`, which overflows `f64` near `k = 170`;
/// use [`eigenvector_normalized`] for large blocks.
pub fn eigenvector_raw(k: usize, m: usize) -> Result<KVector> {
    EigenIndex::new(k, m)?;
    let mut v = KVector::vacuum();
    for _ in 0..k - m {
        v = apply_d_dagger(&v);
    }
    for _ in 0..m {
        v = apply_c_dagger(&v);
    }
    Ok(v)
}

/// Unit-norm eigenvector for `(k, m)`; real with the phase of the raw product.
///
/// Only the band of lower-block vectors that feeds `(k, m)` is built, see
/// [`Eigenbasis::next`].
pub fn eigenvector_normalized(k: usize, m: usize) -> Result<KVector> {
    EigenIndex::new(k, m)?;
    // window holds e_{level, lo..=hi}
    let mut window = vec![vec![1.0]];
    let mut lo = 0;
    for level in 0..k {
        let remaining = k - level - 1;
        let next_lo = m.saturating_sub(remaining);
        let next_hi = (level + 1).min(m);
        let hi = lo + window.len() - 1;
        let pick = |j: usize| (lo..=hi).contains(&j).then(|| window[j - lo].as_slice());
        let next = (next_lo..=next_hi)
            .map(|j| raise_averaged(level, j, j.checked_sub(1).and_then(pick), pick(j)))
            .collect();
        window = next;
        lo = next_lo;
    }
    KVector::from_real(&window[0])
}

// (â_2† ± â_3†)/√2 on a real block vector.
fn raise(v: &[f64], sign: f64) -> Vec<f64> {
    let k = v.len() - 1;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = vec![0.0; k + 2];
    for (alpha, &x) in v.iter().enumerate() {
        out[alpha + 1] += x * ((alpha + 1) as f64).sqrt() * s;
        out[alpha] += sign * x * ((k - alpha + 1) as f64).sqrt() * s;
    }
    out
}

// e_{k+1,m} = (√m ĉ† e_{k,m−1} + √(k+1−m) d̂† e_{k,m}) / (k+1).
//
// Each term alone reproduces e_{k+1,m}; the weighted average keeps rounding
// errors from growing along the ladder, which the single-term recursion
// e_{k+1,m} = ĉ† e_{k,m−1}/√m does not.
fn raise_averaged(k: usize, m: usize, below: Option<&[f64]>, same: Option<&[f64]>) -> Vec<f64> {
    let mut out = vec![0.0; k + 2];
    let denom = (k + 1) as f64;
    if let Some(x) = below.filter(|_| m >= 1) {
        let w = (m as f64).sqrt() / denom;
        for (o, r) in out.iter_mut().zip(raise(x, 1.0)) {
            *o += w * r;
        }
    }
    if let Some(y) = same.filter(|_| m <= k) {
        let w = ((k + 1 - m) as f64).sqrt() / denom;
        for (o, r) in out.iter_mut().zip(raise(y, -1.0)) {
            *o += w * r;
        }
    }
    out
}

/// Orthonormal eigenbasis of one block, stored as real vectors indexed by `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct Eigenbasis {
    k: usize,
    vectors: Vec<Vec<f64>>,
}

impl Eigenbasis {
    /// The one-dimensional vacuum block.
    pub fn vacuum() -> Self {
        Eigenbasis {
            k: 0,
            vectors: vec![vec![1.0]],
        }
    }

    /// Basis of block `k`, built up from the vacuum in `O(k³)`.
    pub fn new(k: usize) -> Self {
        (0..k).fold(Self::vacuum(), |basis, _| basis.next())
    }

    /// Bases of blocks `0..=k_max`.
    pub fn ladder(k_max: usize) -> Vec<Eigenbasis> {
        let mut out = Vec::with_capacity(k_max + 1);
        out.push(Self::vacuum());
        for _ in 0..k_max {
            let next = out.last().expect("nonempty").next();
            out.push(next);
        }
        out
    }

    /// Basis of block `k + 1` from this one.
    ///
    /// Since `ĉ† e_{k,m−1} = √m e_{k+1,m}` and `d̂† e_{k,m} = √(k+1−m) e_{k+1,m}`,
    /// the new vector is the weighted average
    /// `(√m ĉ† e_{k,m−1} + √(k+1−m) d̂† e_{k,m}) / (k+1)`.
    pub fn next(&self) -> Eigenbasis {
        let k = self.k;
        let vectors = (0..=k + 1)
            .map(|m| {
                let below = m.checked_sub(1).map(|j| self.vectors[j].as_slice());
                let same = self.vectors.get(m).map(Vec::as_slice);
                raise_averaged(k, m, below, same)
            })
            .collect();
        Eigenbasis { k: k + 1, vectors }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Amplitudes of the normalized eigenvector `m`, indexed by `α`.
    pub fn vector(&self, m: usize) -> &[f64] {
        &self.vectors[m]
    }

    /// `⟨e_{k,m}, v⟩` for every `m`.
    pub fn project(&self, v: &KVector) -> Result<EigenBasisCoeffs> {
        self.check_block(v.k())?;
        let amps = v.amps();
        let coeffs = self
            .vectors
            .iter()
            .map(|e| e.iter().zip(amps).map(|(&x, a)| a * x).sum())
            .collect();
        Ok(EigenBasisCoeffs { k: self.k, coeffs })
    }

    /// `Σ_m c_m e_{k,m}`.
    pub fn expand(&self, c: &EigenBasisCoeffs) -> Result<KVector> {
        self.check_block(c.k)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); self.k + 1];
        for (e, &cm) in self.vectors.iter().zip(&c.coeffs) {
            for (slot, &x) in amps.iter_mut().zip(e) {
                *slot += cm * x;
            }
        }
        Ok(KVector::from_amps_unchecked(amps))
    }

    /// Matrix whose column `m` is `e_{k,m}`.
    pub fn to_matrix(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.k + 1, self.k + 1, |alpha, m| self.vectors[m][alpha])
    }

    fn check_block(&self, k: usize) -> Result<()> {
        if k != self.k {
            return Err(Error::DimensionMismatch {
                expected: self.k + 1,
                found: k + 1,
            });
        }
        Ok(())
    }
}

/// Coefficients of a block vector over the normalized eigenbasis, indexed by
/// `m` (eigenvalue `2m − k`, ascending).
#[derive(Clone, Debug, PartialEq)]
pub struct EigenBasisCoeffs {
    k: usize,
    coeffs: Vec<Complex64>,
}

impl EigenBasisCoeffs {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("eigenbasis coefficients cannot be empty".into()));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(EigenBasisCoeffs {
            k: coeffs.len() - 1,
            coeffs,
        })
    }

    pub fn zeros(k: usize) -> Self {
        EigenBasisCoeffs {
            k,
            coeffs: vec![Complex64::new(0.0, 0.0); k + 1],
        }
    }

    /// Unit coefficient at `(k, m)`.
    pub fn unit(k: usize, m: usize) -> Result<Self> {
        EigenIndex::new(k, m)?;
        let mut c = Self::zeros(k);
        c.coeffs[m] = Complex64::new(1.0, 0.0);
        Ok(c)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, m: usize) -> Complex64 {
        self.coeffs[m]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(Complex64::norm_sqr).sum()
    }

    /// Multiplies coefficient `m` by `phase(2m − k)`.
    pub fn map_by_eigenvalue(&self, phase: impl Fn(i64) -> Complex64) -> Self {
        let k = self.k as i64;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(m, c)| c * phase(2 * m as i64 - k))
            .collect();
        EigenBasisCoeffs { k: self.k, coeffs }
    }

    pub fn max_abs_diff(&self, other: &EigenBasisCoeffs) -> f64 {
        assert_eq!(self.k, other.k, "block mismatch");
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

fn lower_normalized(v: &KVector, sign: f64) -> Result<KVector> {
    let k = v.k();
    let a2 = apply_annihilate(Site::Two, v).ok_or(Error::EmptyBlock)?;
    let a3 = apply_annihilate(Site::Three, v).ok_or(Error::EmptyBlock)?;
    let scale = 1.0 / ((2 * k) as f64).sqrt();
    let amps = a2
        .amps()
        .iter()
        .zip(a3.amps())
        .map(|(x, y)| (x + y * sign) * scale)
        .collect();
    Ok(KVector::from_amps_unchecked(amps))
}

/// `ĉ_k = (â_2 + â_3)/√(2k)`, mapping block `k` to block `k − 1`.
pub fn apply_ck(v: &KVector) -> Result<KVector> {
    lower_normalized(v, 1.0)
}

/// `d̂_k = (â_2 − â_3)/√(2k)`, mapping block `k` to block `k − 1`.
pub fn apply_dk(v: &KVector) -> Result<KVector> {
    lower_normalized(v, -1.0)
}

/// The `2k × (k+1)` matrix of `ĉ_k` stacked on `d̂_k` in the α-ascending
/// basis. Its columns are orthonormal.
pub fn immersion_matrix(k: usize) -> Result<DenseMatrix> {
    if k == 0 {
        return Err(Error::EmptyBlock);
    }
    let scale = 1.0 / ((2 * k) as f64).sqrt();
    // Row r of either map reads v[r] through â_3 (√(k−r)) and v[r+1] through â_2 (√(r+1)).
    Ok(DenseMatrix::from_fn(2 * k, k + 1, |row, col| {
        let (r, sign) = if row < k { (row, 1.0) } else { (row - k, -1.0) };
        if col == r {
            sign * ((k - r) as f64).sqrt() * scale
        } else if col == r + 1 {
            ((r + 1) as f64).sqrt() * scale
        } else {
            0.0
        }
    }))
}

/// One step of the lowering cascade.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lowering {
    C,
    D,
}

/// Scalar reached by applying `path` (first element first) down to the
/// vacuum block. `path` must contain exactly `k` steps.
pub fn cascade_path(v: &KVector, path: &[Lowering]) -> Result<Complex64> {
    if path.len() != v.k() {
        return Err(Error::DimensionMismatch {
            expected: v.k(),
            found: path.len(),
        });
    }
    let mut node = v.clone();
    for step in path {
        node = match step {
            Lowering::C => apply_ck(&node)?,
            Lowering::D => apply_dk(&node)?,
        };
    }
    Ok(node.amp(0))
}

/// Arithmetic-operation tally of one cascade run. Complex multiplies, adds
/// and square roots each count once.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpCount(pub u64);

// One application of ĉ_n or d̂_n to a block-n vector: per output entry two
// square roots, two products, one add and one scale.
fn lowering_ops(n: usize) -> u64 {
    6 * n as u64
}

/// Eigenbasis coefficients by successive normalized lowering maps.
///
/// Each node of the cascade is `ĉ_{·}^a d̂_{·}^b v`, and since `ĉ` and `d̂`
/// commute only the counts `(a, b)` matter. After `k` levels the node
/// `(m, k − m)` holds a scalar `s_m`, and the coefficient over the normalized
/// eigenvector is `√C(k, m) · s_m`. Costs `O(k³)` arithmetic.
///
/// The final rescaling multiplies rounding errors by `√C(k, m)`, so the
/// result loses about `k/2` bits; past `k ≈ 30` prefer
/// [`to_eigenbasis_direct`].
pub fn to_eigenbasis_cascade(v: &KVector) -> EigenBasisCoeffs {
    to_eigenbasis_cascade_counted(v).0
}

/// [`to_eigenbasis_cascade`] together with its operation count.
pub fn to_eigenbasis_cascade_counted(v: &KVector) -> (EigenBasisCoeffs, OpCount) {
    let k = v.k();
    let mut ops = 0u64;
    // level[a] is the node with a applications of ĉ and (level − a) of d̂.
    let mut level = vec![v.clone()];
    for depth in 0..k {
        let n = k - depth;
        let mut next = Vec::with_capacity(level.len() + 1);
        next.push(apply_dk(&level[0]).expect("block n >= 1"));
        ops += lowering_ops(n);
        for node in &level {
            next.push(apply_ck(node).expect("block n >= 1"));
            ops += lowering_ops(n);
        }
        level = next;
    }
    let mut coeffs = Vec::with_capacity(k + 1);
    let mut sqrt_binom = 1.0;
    for (m, node) in level.iter().enumerate() {
        if m > 0 {
            sqrt_binom *= (((k - m + 1) as f64) / m as f64).sqrt();
            ops += 3;
        }
        coeffs.push(node.amp(0) * sqrt_binom);
        ops += 1;
    }
    (EigenBasisCoeffs { k, coeffs }, OpCount(ops))
}

/// Eigenbasis coefficients by inner products with the normalized eigenvectors.
pub fn to_eigenbasis_direct(v: &KVector) -> EigenBasisCoeffs {
    Eigenbasis::new(v.k()).project(v).expect("basis built for this block")
}

/// Inverse of [`to_eigenbasis_direct`].
pub fn from_eigenbasis(c: &EigenBasisCoeffs) -> KVector {
    Eigenbasis::new(c.k()).expand(c).expect("basis built for this block")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::BasisState;
    use crate::hamiltonian::apply_hopping;

    const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn ket(alpha: usize, beta: usize) -> KVector {
        KVector::basis(BasisState::new(alpha, beta))
    }

    #[test]
    fn eigenvalue_examples() {
        assert_eq!(eigenvalue(3, 0), Ok(-3));
        assert_eq!(eigenvalue(0, 0), Ok(0));
        assert_eq!(eigenvalue(2, 1), Ok(0));
        assert_eq!(eigenvalue(2, 3), Err(Error::IndexOutOfRange { k: 2, m: 3 }));
        let row: Vec<i64> = (0..=3).map(|m| eigenvalue(3, m).unwrap()).collect();
        assert_eq!(row, [-3, -1, 1, 3]);
    }

    #[test]
    fn raw_eigenvector_examples() {
        let v = eigenvector_raw(1, 1).unwrap();
        assert!(v.max_abs_diff(&KVector::from_real(&[S, S]).unwrap()) < 1e-16);
        assert!(apply_hopping(&v).max_abs_diff(&v) < 1e-15);

        let v = eigenvector_raw(2, 1).unwrap();
        let expected = (&ket(2, 0) - &ket(0, 2)).scale_real(S);
        assert!(v.max_abs_diff(&expected) < 1e-15);
        assert!(apply_hopping(&v).norm() < 1e-15);

        assert_eq!(eigenvector_raw(0, 0).unwrap(), KVector::vacuum());
        assert!(eigenvector_raw(1, 2).is_err());
    }

    #[test]
    fn normalized_eigenvector_examples() {
        let v = eigenvector_normalized(1, 0).unwrap();
        assert!(v.max_abs_diff(&KVector::from_real(&[-S, S]).unwrap()) < 1e-16);

        let v = eigenvector_normalized(2, 2).unwrap();
        let expected = KVector::from_real(&[0.5, S, 0.5]).unwrap();
        assert!(v.max_abs_diff(&expected) < 1e-15);
        assert!(apply_hopping(&v).max_abs_diff(&v.scale_real(2.0)) < 1e-14);

        for k in 0..=30 {
            for m in 0..=k {
                let v = eigenvector_normalized(k, m).unwrap();
                assert!((v.norm() - 1.0).abs() < 1e-12, "k={k} m={m}");
            }
        }
    }

    #[test]
    fn basis_ladder_matches_single_construction() {
        let ladder = Eigenbasis::ladder(12);
        for (k, basis) in ladder.iter().enumerate() {
            assert_eq!(basis.k(), k);
            for m in 0..=k {
                let single = eigenvector_normalized(k, m).unwrap();
                let from_ladder = KVector::from_real(basis.vector(m)).unwrap();
                assert!(single.max_abs_diff(&from_ladder) < 1e-14);
            }
        }
    }

    #[test]
    fn lowering_maps() {
        let plus = eigenvector_normalized(1, 1).unwrap();
        let c = apply_ck(&plus).unwrap();
        assert_eq!(c.k(), 0);
        assert!((c.amp(0) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(apply_dk(&plus).unwrap().norm() < 1e-15);
        assert_eq!(apply_ck(&KVector::vacuum()), Err(Error::EmptyBlock));
        assert_eq!(apply_dk(&KVector::vacuum()), Err(Error::EmptyBlock));
    }

    #[test]
    fn immersion_small_blocks() {
        assert_eq!(immersion_matrix(0), Err(Error::EmptyBlock));

        // Reversing the columns gives the same matrix in the α-descending order.
        let m1 = immersion_matrix(1).unwrap();
        let reversed = DenseMatrix::from_fn(2, 2, |i, j| m1.get(i, 1 - j));
        let expected = DenseMatrix::from_rows(&[vec![S, S], vec![S, -S]]);
        assert!(reversed.max_abs_diff(&expected) < 1e-15);

        let m2 = immersion_matrix(2).unwrap();
        let first = [0.5 * std::f64::consts::SQRT_2, 0.5, 0.0];
        for (j, want) in first.iter().enumerate() {
            assert!((m2.get(0, j) - want).abs() < 1e-15);
        }
    }

    #[test]
    fn immersion_matches_lowering_maps() {
        let k = 5;
        let m = immersion_matrix(k).unwrap();
        for alpha in 0..=k {
            let e = ket(alpha, k - alpha);
            let c = apply_ck(&e).unwrap();
            let d = apply_dk(&e).unwrap();
            for r in 0..k {
                assert!((m.get(r, alpha) - c.amp(r).re).abs() < 1e-15);
                assert!((m.get(k + r, alpha) - d.amp(r).re).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn cascade_examples() {
        let v = eigenvector_normalized(5, 2).unwrap();
        let c = to_eigenbasis_cascade(&v);
        assert!(c.max_abs_diff(&EigenBasisCoeffs::unit(5, 2).unwrap()) < 1e-13);

        let c = to_eigenbasis_cascade(&KVector::vacuum());
        assert_eq!(c.coeffs(), &[Complex64::new(1.0, 0.0)]);
    }

    #[test]
    fn direct_examples() {
        let v = eigenvector_normalized(1, 1).unwrap();
        assert!(to_eigenbasis_direct(&v).max_abs_diff(&EigenBasisCoeffs::unit(1, 1).unwrap()) < 1e-15);

        let c = to_eigenbasis_direct(&ket(1, 0));
        let expected = EigenBasisCoeffs::new(vec![Complex64::new(S, 0.0); 2]).unwrap();
        assert!(c.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn from_eigenbasis_examples() {
        for (k, m) in [(0, 0), (3, 1), (7, 7)] {
            let v = from_eigenbasis(&EigenBasisCoeffs::unit(k, m).unwrap());
            assert!(v.max_abs_diff(&eigenvector_normalized(k, m).unwrap()) < 1e-15);
        }
        assert_eq!(from_eigenbasis(&EigenBasisCoeffs::zeros(4)), KVector::zeros(4));
    }

    #[test]
    fn basis_rejects_other_blocks() {
        let b = Eigenbasis::new(3);
        assert!(b.project(&ket(1, 1)).is_err());
        assert!(b.expand(&EigenBasisCoeffs::zeros(2)).is_err());
    }
}
