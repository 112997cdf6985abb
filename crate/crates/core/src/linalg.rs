//! Dense complex linear algebra on small Hermitian matrices.
//!
//! [`ComplexMatrix`] is a thin wrapper around a dynamically sized `nalgebra`
//! matrix; the Hermitian eigensolver is `nalgebra`'s symmetric QR iteration.
//! Everything above the eigensolver (matrix functions, norms, distances,
//! partial traces) lives here.

use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
pub use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Hermiticity tolerance for inputs to the eigensolver and density matrices.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Allowed deviation of a density matrix trace from 1.
pub const TRACE_TOL: f64 = 1e-10;
/// Most negative eigenvalue tolerated in a positive semidefinite matrix.
pub const PSD_TOL: f64 = 1e-9;
/// Tolerance for derived numerical equalities.
pub const NUM_TOL: f64 = 1e-8;

/// Eigenvalues below this fraction of the spectral radius are rounding noise
/// of an exactly rank-deficient matrix and are zeroed before square roots.
const EIG_NOISE_FLOOR: f64 = 64.0 * f64::EPSILON;

const MAX_EIG_ITERATIONS: usize = 10_000;

/// Dense complex matrix. Every matrix used in this crate is square.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    /// Builds a matrix from entries in row-major order, rejecting NaN/Inf.
    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        Ok(Self(DMatrix::from_row_slice(rows, cols, &entries)))
    }

    /// Real-valued convenience constructor, row-major.
    pub fn from_real_row_major(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::from_row_major(
            rows,
            cols,
            entries.iter().map(|&x| C64::new(x, 0.0)).collect(),
        )
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self(DMatrix::from_fn(rows, cols, f))
    }

    pub fn zeros(n: usize) -> Self {
        Self(DMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(values[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    /// Projector-like outer product `|v><v|`.
    pub fn outer(v: &[C64]) -> Self {
        let n = v.len();
        Self::from_fn(n, n, |i, j| v[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    /// Side length of a square matrix.
    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: C64) {
        self.0[(i, j)] = value;
    }

    pub fn entries_row_major(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self(self.0.map(|z| z * factor))
    }

    pub fn scale_complex(&self, factor: C64) -> Self {
        Self(self.0.map(|z| z * factor))
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.0.shape(), other.0.shape(), "shape mismatch");
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - self^†`.
    pub fn hermitian_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    fn hermitian_part(&self) -> DMatrix<C64> {
        (&self.0 + self.0.adjoint()).map(|z| z * 0.5)
    }

    fn check_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows(),
                cols: self.cols(),
            })
        }
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

/// Eigenvalues in descending order with matching eigenvector columns.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// Rebuilds `V f(diag(λ)) V^†`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let v = &self.vectors.0;
        let n = v.nrows();
        let mut scaled = v.clone();
        for (j, &lambda) in self.values.iter().enumerate() {
            let w = f(lambda);
            for i in 0..n {
                scaled[(i, j)] *= w;
            }
        }
        ComplexMatrix(scaled * v.adjoint())
    }

    /// Eigenvector `j` as a column slice.
    pub fn vector(&self, j: usize) -> Vec<C64> {
        self.vectors.0.column(j).iter().copied().collect()
    }

    fn noise_floor(&self) -> f64 {
        let radius = self.values.iter().map(|x| x.abs()).fold(0.0, f64::max);
        EIG_NOISE_FLOOR * radius
    }
}

/// Hermitian eigendecomposition `H = V diag(λ) V^†`, eigenvalues descending.
pub fn eig_hermitian(h: &ComplexMatrix) -> Result<EigenDecomposition> {
    h.check_square()?;
    if !h.is_finite() {
        return Err(Error::NonFinite);
    }
    let residual = h.hermitian_residual();
    if residual > HERMITIAN_TOL {
        return Err(Error::NotHermitian(residual));
    }
    let eig = SymmetricEigen::try_new(h.hermitian_part(), f64::EPSILON, MAX_EIG_ITERATIONS)
        .ok_or(Error::NoConvergence)?;

    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let n = h.dim();
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(EigenDecomposition {
        values,
        vectors: ComplexMatrix(vectors),
    })
}

/// Square root of a positive semidefinite matrix. Negative eigenvalues and
/// rounding-level positive ones are clamped to zero.
pub fn sqrt_psd(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = eig_hermitian(h)?;
    let floor = eig.noise_floor();
    Ok(eig.map(|x| if x > floor { x.sqrt() } else { 0.0 }))
}

/// `|H| = sqrt(H^† H)` for Hermitian `H`.
pub fn abs_hermitian(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(eig_hermitian(h)?.map(f64::abs))
}

/// Trace norm of a Hermitian matrix: the sum of absolute eigenvalues.
pub fn trace_norm(a: &ComplexMatrix) -> Result<f64> {
    Ok(eig_hermitian(a)?.values.iter().map(|x| x.abs()).sum())
}

/// Kronecker product `A ⊗ B`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix(a.0.kronecker(&b.0))
}

fn validate_subsystems(dims: &[usize], keep: &[usize]) -> Result<()> {
    if let Some(&bad) = keep.iter().find(|&&k| k >= dims.len()) {
        return Err(Error::InvalidSubsystems(format!(
            "index {bad} out of range for {} subsystems",
            dims.len()
        )));
    }
    if keep.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidSubsystems(
            "indices must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Partial trace of an operator on `⊗ dims`, keeping the listed subsystems
/// (strictly increasing indices) in their original order.
pub fn partial_trace_matrix(
    m: &ComplexMatrix,
    dims: &[usize],
    keep: &[usize],
) -> Result<ComplexMatrix> {
    m.check_square()?;
    let total: usize = dims.iter().product();
    if total != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: total,
            found: m.dim(),
        });
    }
    validate_subsystems(dims, keep)?;

    let nsys = dims.len();
    let mut strides = vec![1usize; nsys];
    for k in (0..nsys.saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    let traced: Vec<usize> = (0..nsys).filter(|k| !keep.contains(k)).collect();
    let kept_dims: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();
    let kept_total: usize = kept_dims.iter().product();
    let traced_total: usize = traced_dims.iter().product();

    // Offset in the full index contributed by a mixed-radix index over a subset.
    let offsets = |subset: &[usize], subset_dims: &[usize], count: usize| -> Vec<usize> {
        (0..count)
            .map(|mut idx| {
                let mut off = 0;
                for (pos, &sys) in subset.iter().enumerate().rev() {
                    let d = subset_dims[pos];
                    off += (idx % d) * strides[sys];
                    idx /= d;
                }
                off
            })
            .collect()
    };
    let keep_off = offsets(keep, &kept_dims, kept_total);
    let trace_off = offsets(&traced, &traced_dims, traced_total);

    let out = DMatrix::from_fn(kept_total, kept_total, |i, j| {
        trace_off
            .iter()
            .map(|&t| m.0[(keep_off[i] + t, keep_off[j] + t)])
            .sum()
    });
    Ok(ComplexMatrix(out))
}

/// Unit-trace positive semidefinite matrix with subsystem dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    dims: Vec<usize>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        matrix.check_square()?;
        let total: usize = dims.iter().product();
        if dims.is_empty() || total != matrix.dim() {
            return Err(Error::DimensionMismatch {
                expected: matrix.dim(),
                found: total,
            });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidTrace(tr.re));
        }
        let eig = eig_hermitian(&matrix)?;
        let min = eig.values.last().copied().unwrap_or(0.0);
        if min < -PSD_TOL {
            return Err(Error::NotPsd(min));
        }
        Ok(Self { matrix, dims })
    }

    /// Single-system state.
    pub fn single(matrix: ComplexMatrix) -> Result<Self> {
        let d = matrix.rows();
        Self::new(matrix, vec![d])
    }

    /// `|ψ><ψ|` for a normalised vector.
    pub fn pure(psi: &[C64], dims: Vec<usize>) -> Result<Self> {
        Self::new(ComplexMatrix::outer(psi), dims)
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(d).scale(1.0 / d as f64),
            dims: vec![d],
        }
    }

    /// `|Φ><Φ|` with `|Φ> = d^{-1/2} Σ_k |kk>`.
    pub fn maximally_entangled(d: usize) -> Self {
        let amp = 1.0 / (d as f64).sqrt();
        let psi: Vec<C64> = (0..d * d)
            .map(|idx| {
                if idx / d == idx % d {
                    C64::new(amp, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            })
            .collect();
        Self {
            matrix: ComplexMatrix::outer(&psi),
            dims: vec![d, d],
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// `self ⊗ other` with concatenated subsystem dimensions.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        DensityMatrix {
            matrix: kron(&self.matrix, &other.matrix),
            dims,
        }
    }
}

fn check_same_dim(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    Ok(())
}

/// Partial trace of a state, keeping the listed subsystems.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let reduced = partial_trace_matrix(&rho.matrix, &rho.dims, keep)?;
    let dims = keep.iter().map(|&k| rho.dims[k]).collect();
    DensityMatrix::new(reduced, dims)
}

/// `D(ρ, σ) = ||ρ - σ||_1 / 2`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_same_dim(rho, sigma)?;
    let d = 0.5 * trace_norm(&(&rho.matrix - &sigma.matrix))?;
    Ok(d.clamp(0.0, 1.0))
}

/// Uhlmann fidelity `Tr sqrt(sqrt(ρ) σ sqrt(ρ))` (not squared).
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_same_dim(rho, sigma)?;
    let root = sqrt_psd(&rho.matrix)?;
    let inner = &(&root * &sigma.matrix) * &root;
    let inner = ComplexMatrix(inner.hermitian_part());
    let eig = eig_hermitian(&inner)?;
    let floor = eig.noise_floor();
    let f: f64 = eig
        .values
        .iter()
        .filter(|&&x| x > floor)
        .map(|x| x.sqrt())
        .sum();
    Ok(f.clamp(0.0, 1.0))
}

/// Bures distance `sqrt(2 (1 - F))`.
pub fn bures_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    let f = fidelity(rho, sigma)?;
    Ok((2.0 * (1.0 - f)).max(0.0).sqrt())
}

/// Quantum relative entropy `S(ρ||σ)` in bits. Returns `+∞` when the support
/// of `ρ` is not contained in that of `σ`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_same_dim(rho, sigma)?;
    let er = eig_hermitian(&rho.matrix)?;
    let es = eig_hermitian(&sigma.matrix)?;

    let neg_entropy: f64 = er
        .values
        .iter()
        .filter(|&&x| x > PSD_TOL)
        .map(|&x| x * x.log2())
        .sum();

    let mut cross = 0.0;
    for (j, &mu) in es.values.iter().enumerate() {
        let v = es.vector(j);
        let weight = expectation(&rho.matrix, &v);
        if mu < PSD_TOL {
            if weight > PSD_TOL {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        cross += weight * mu.log2();
    }
    Ok((neg_entropy - cross).max(0.0))
}

/// `<v|A|v>` real part.
pub(crate) fn expectation(a: &ComplexMatrix, v: &[C64]) -> f64 {
    let v = DVector::from_column_slice(v);
    v.dotc(&(&a.0 * &v)).re
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn basis(d: usize, k: usize) -> Vec<C64> {
        (0..d).map(|i| c(if i == k { 1.0 } else { 0.0 })).collect()
    }

    fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_real_row_major(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    fn ad_choi(p: f64) -> DensityMatrix {
        let q = (1.0 - p).sqrt();
        let m = ComplexMatrix::from_real_row_major(
            4,
            4,
            &[
                0.5,
                0.0,
                0.0,
                q / 2.0, //
                0.0,
                0.0,
                0.0,
                0.0, //
                0.0,
                0.0,
                p / 2.0,
                0.0, //
                q / 2.0,
                0.0,
                0.0,
                (1.0 - p) / 2.0,
            ],
        )
        .unwrap();
        DensityMatrix::new(m, vec![2, 2]).unwrap()
    }

    #[test]
    fn rejects_non_finite_entries() {
        let err = ComplexMatrix::from_real_row_major(1, 1, &[f64::NAN]).unwrap_err();
        assert_eq!(err, Error::NonFinite);
    }

    #[test]
    fn eig_identity_and_diagonal() {
        let e = eig_hermitian(&ComplexMatrix::identity(2)).unwrap();
        assert_abs_diff_eq!(e.values[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.values[1], 1.0, epsilon = 1e-14);

        let e = eig_hermitian(&ComplexMatrix::diag_real(&[1.0, 3.0])).unwrap();
        assert_eq!(e.values.len(), 2);
        assert_abs_diff_eq!(e.values[0], 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.values[1], 1.0, epsilon = 1e-14);
        // eigenvector of 3 is |1>
        assert_abs_diff_eq!(e.vectors.get(1, 0).norm(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn eig_pauli_x_gives_hadamard_columns() {
        let e = eig_hermitian(&pauli_x()).unwrap();
        assert_abs_diff_eq!(e.values[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.values[1], -1.0, epsilon = 1e-14);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // Columns equal (1,1)/√2 and (1,-1)/√2 up to a global phase.
        let v0 = e.vector(0);
        let v1 = e.vector(1);
        let overlap0 = (v0[0] * h + v0[1] * h).norm();
        let overlap1 = (v1[0] * h - v1[1] * h).norm();
        assert_abs_diff_eq!(overlap0, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(overlap1, 1.0, epsilon = 1e-14);
        let recon = e.map(|x| x);
        assert!(recon.max_abs_diff(&pauli_x()) < 1e-14);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_row_major(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(eig_hermitian(&m), Err(Error::NotHermitian(_))));
        let r = ComplexMatrix::from_real_row_major(1, 2, &[0.0, 1.0]).unwrap();
        assert!(matches!(eig_hermitian(&r), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn trace_norm_examples() {
        assert_eq!(trace_norm(&ComplexMatrix::zeros(3)).unwrap(), 0.0);
        let t = trace_norm(&ComplexMatrix::diag_real(&[0.5, -0.5])).unwrap();
        assert_abs_diff_eq!(t, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn trace_distance_examples() {
        let rho = ad_choi(0.3);
        assert_abs_diff_eq!(trace_distance(&rho, &rho).unwrap(), 0.0, epsilon = 1e-14);

        let zero = DensityMatrix::pure(&basis(2, 0), vec![2]).unwrap();
        let one = DensityMatrix::pure(&basis(2, 1), vec![2]).unwrap();
        assert_abs_diff_eq!(trace_distance(&zero, &one).unwrap(), 1.0, epsilon = 1e-14);

        // AD Chois at p=0 and p=1: the difference splits into the {|00>,|11>}
        // block [[0, 1/2], [1/2, 1/2]] with eigenvalues (1 ± √5)/4 and the
        // |10> entry -1/2, so D = (1 + √5)/4.
        let d = trace_distance(&ad_choi(0.0), &ad_choi(1.0)).unwrap();
        assert_abs_diff_eq!(d, (1.0 + 5f64.sqrt()) / 4.0, epsilon = 1e-13);

        let err = trace_distance(&zero, &ad_choi(0.1)).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn fidelity_examples() {
        let rho = ad_choi(0.4);
        assert_abs_diff_eq!(fidelity(&rho, &rho).unwrap(), 1.0, epsilon = 1e-12);
        let zero = DensityMatrix::pure(&basis(2, 0), vec![2]).unwrap();
        let one = DensityMatrix::pure(&basis(2, 1), vec![2]).unwrap();
        assert_abs_diff_eq!(fidelity(&zero, &one).unwrap(), 0.0, epsilon = 1e-14);
        for &(p0, p1) in &[(0.2f64, 0.7f64), (0.8, 0.81), (0.0, 1.0), (0.5, 0.5)] {
            let expected = (1.0 + ((1.0 - p0) * (1.0 - p1)).sqrt() + (p0 * p1).sqrt()) / 2.0;
            let f = fidelity(&ad_choi(p0), &ad_choi(p1)).unwrap();
            assert_abs_diff_eq!(f, expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn partial_trace_examples() {
        let phi = DensityMatrix::maximally_entangled(2);
        let marginal = partial_trace(&phi, &[0]).unwrap();
        assert!(
            marginal
                .matrix()
                .max_abs_diff(&ComplexMatrix::identity(2).scale(0.5))
                < 1e-15
        );

        let a = ad_choi(0.3);
        let b = DensityMatrix::maximally_mixed(3);
        let prod = a.tensor(&b);
        let back = partial_trace(&prod, &[0, 1]).unwrap();
        assert!(back.matrix().max_abs_diff(a.matrix()) < 1e-14);
        let other = partial_trace(&prod, &[2]).unwrap();
        assert!(other.matrix().max_abs_diff(b.matrix()) < 1e-14);

        assert!(matches!(
            partial_trace(&prod, &[3]),
            Err(Error::InvalidSubsystems(_))
        ));
        assert!(matches!(
            partial_trace(&prod, &[1, 0]),
            Err(Error::InvalidSubsystems(_))
        ));
    }

    #[test]
    fn partial_trace_middle_subsystem() {
        // |0><0| ⊗ I/2 ⊗ |1><1|; tracing the middle qubit leaves |01><01|.
        let z = DensityMatrix::pure(&basis(2, 0), vec![2]).unwrap();
        let o = DensityMatrix::pure(&basis(2, 1), vec![2]).unwrap();
        let state = z.tensor(&DensityMatrix::maximally_mixed(2)).tensor(&o);
        let reduced = partial_trace(&state, &[0, 2]).unwrap();
        let expected = ComplexMatrix::outer(&basis(4, 1));
        assert!(reduced.matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn kron_examples() {
        let i4 = kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2));
        assert_eq!(i4, ComplexMatrix::identity(4));
        let k = kron(
            &ComplexMatrix::diag_real(&[2.0, 3.0]),
            &ComplexMatrix::diag_real(&[5.0, 7.0]),
        );
        assert_eq!(k, ComplexMatrix::diag_real(&[10.0, 14.0, 15.0, 21.0]));

        // Φ ⊗ Φ equals the outer product of the explicit 16-dim vector.
        let phi = DensityMatrix::maximally_entangled(2);
        let pp = kron(phi.matrix(), phi.matrix());
        let mut v = vec![c(0.0); 16];
        for a in 0..2 {
            for b in 0..2 {
                v[(a << 3) | (a << 2) | (b << 1) | b] = c(0.5);
            }
        }
        assert!(pp.max_abs_diff(&ComplexMatrix::outer(&v)) < 1e-15);
        let e = eig_hermitian(&pp).unwrap();
        assert_abs_diff_eq!(e.values[0], 1.0, epsilon = 1e-14);
        assert!(e.values[1].abs() < 1e-14);
    }

    #[test]
    fn relative_entropy_examples() {
        let rho = ad_choi(0.3);
        assert_abs_diff_eq!(relative_entropy(&rho, &rho).unwrap(), 0.0, epsilon = 1e-12);

        let zero = DensityMatrix::pure(&basis(2, 0), vec![2]).unwrap();
        let mixed = DensityMatrix::maximally_mixed(2);
        assert_abs_diff_eq!(
            relative_entropy(&zero, &mixed).unwrap(),
            1.0,
            epsilon = 1e-13
        );
        assert_eq!(relative_entropy(&mixed, &zero).unwrap(), f64::INFINITY);

        // Distinct AD Chois are rank two with different supports.
        assert_eq!(
            relative_entropy(&ad_choi(0.8), &ad_choi(0.81)).unwrap(),
            f64::INFINITY
        );
    }

    #[test]
    fn relative_entropy_of_commuting_states_matches_classical_formula() {
        let rho = DensityMatrix::single(ComplexMatrix::diag_real(&[0.7, 0.3])).unwrap();
        let sigma = DensityMatrix::single(ComplexMatrix::diag_real(&[0.4, 0.6])).unwrap();
        let expected = 0.7 * (0.7f64 / 0.4).log2() + 0.3 * (0.3f64 / 0.6).log2();
        assert_abs_diff_eq!(
            relative_entropy(&rho, &sigma).unwrap(),
            expected,
            epsilon = 1e-13
        );
    }

    #[test]
    fn bures_examples() {
        let rho = ad_choi(0.5);
        assert_abs_diff_eq!(bures_distance(&rho, &rho).unwrap(), 0.0, epsilon = 1e-6);
        let zero = DensityMatrix::pure(&basis(2, 0), vec![2]).unwrap();
        let one = DensityMatrix::pure(&basis(2, 1), vec![2]).unwrap();
        assert_abs_diff_eq!(
            bures_distance(&zero, &one).unwrap(),
            2f64.sqrt(),
            epsilon = 1e-14
        );
        let f = (1.0 + (0.5f64 * 0.4).sqrt() + (0.5f64 * 0.6).sqrt()) / 2.0;
        assert_abs_diff_eq!(
            bures_distance(&ad_choi(0.5), &ad_choi(0.6)).unwrap(),
            (2.0 * (1.0 - f)).sqrt(),
            epsilon = 1e-10
        );
    }

    #[test]
    fn density_matrix_validation() {
        let not_unit = ComplexMatrix::diag_real(&[0.5, 0.6]);
        assert!(matches!(
            DensityMatrix::single(not_unit),
            Err(Error::InvalidTrace(_))
        ));
        let negative = ComplexMatrix::diag_real(&[1.5, -0.5]);
        assert!(matches!(
            DensityMatrix::single(negative),
            Err(Error::NotPsd(_))
        ));
        let bad_dims = DensityMatrix::new(ComplexMatrix::diag_real(&[0.5, 0.5]), vec![3]);
        assert!(matches!(bad_dims, Err(Error::DimensionMismatch { .. })));
    }
}
