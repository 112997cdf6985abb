//! Quantum channels in Kraus form and their Choi matrices.
//!
//! Choi convention: `ρ_E = (I ⊗ E)(Φ)` with `|Φ> = d^{-1/2} Σ_k |kk>`, the
//! reference system first. The result has unit trace.

use crate::error::{check_probability, check_range, Error, Result};
use crate::linalg::{kron, partial_trace_matrix, ComplexMatrix, DensityMatrix, C64, NUM_TOL};

/// Completely positive trace-preserving map `ρ ↦ Σ K ρ K^†`.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel {
    kraus_ops: Vec<ComplexMatrix>,
    d_in: usize,
    d_out: usize,
}

impl KrausChannel {
    /// Validates shapes (`d_out × d_in`) and `Σ K^† K = I` within `NUM_TOL`.
    pub fn new(kraus_ops: Vec<ComplexMatrix>, d_in: usize, d_out: usize) -> Result<Self> {
        if kraus_ops.is_empty() {
            return Err(Error::IncompleteKraus(1.0));
        }
        for k in &kraus_ops {
            if k.rows() != d_out {
                return Err(Error::DimensionMismatch {
                    expected: d_out,
                    found: k.rows(),
                });
            }
            if k.cols() != d_in {
                return Err(Error::DimensionMismatch {
                    expected: d_in,
                    found: k.cols(),
                });
            }
        }
        let mut sum = ComplexMatrix::from_fn(d_in, d_in, |_, _| C64::new(0.0, 0.0));
        for k in &kraus_ops {
            sum = &sum + &(&k.adjoint() * k);
        }
        let residual = sum.max_abs_diff(&ComplexMatrix::identity(d_in));
        if residual > NUM_TOL {
            return Err(Error::IncompleteKraus(residual));
        }
        Ok(Self {
            kraus_ops,
            d_in,
            d_out,
        })
    }

    pub fn kraus_ops(&self) -> &[ComplexMatrix] {
        &self.kraus_ops
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    /// `Σ_i K_i A K_i^†` on an arbitrary operator of the input dimension.
    pub fn apply_operator(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        if a.rows() != self.d_in || a.cols() != self.d_in {
            return Err(Error::DimensionMismatch {
                expected: self.d_in,
                found: a.rows(),
            });
        }
        let mut out = ComplexMatrix::zeros(self.d_out);
        for k in &self.kraus_ops {
            out = &out + &(&(k * a) * &k.adjoint());
        }
        Ok(out)
    }
}

/// Identity channel on dimension `d`.
pub fn identity(d: usize) -> KrausChannel {
    KrausChannel {
        kraus_ops: vec![ComplexMatrix::identity(d)],
        d_in: d,
        d_out: d,
    }
}

/// Qubit amplitude damping with damping probability `p`:
/// `K0 = |0><0| + sqrt(1-p)|1><1|`, `K1 = sqrt(p)|0><1|`.
pub fn amplitude_damping(p: f64) -> Result<KrausChannel> {
    check_probability("p", p)?;
    let k0 = ComplexMatrix::from_real_row_major(2, 2, &[1.0, 0.0, 0.0, (1.0 - p).sqrt()])?;
    let k1 = ComplexMatrix::from_real_row_major(2, 2, &[0.0, p.sqrt(), 0.0, 0.0])?;
    KrausChannel::new(vec![k0, k1], 2, 2)
}

/// Generalised Pauli operator `X^a Z^b` on dimension `d`.
pub fn weyl(d: usize, a: usize, b: usize) -> ComplexMatrix {
    let omega = 2.0 * std::f64::consts::PI / d as f64;
    ComplexMatrix::from_fn(d, d, |row, col| {
        if row == (col + a) % d {
            C64::from_polar(1.0, omega * ((b * col) % d) as f64)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Qudit depolarizing channel `ρ ↦ (1-ξ)ρ + ξ I/d`.
///
/// Kraus set: the `d²` Weyl operators, the identity weighted by
/// `sqrt(1 - ξ + ξ/d²)` and every other one by `sqrt(ξ)/d`.
pub fn depolarizing(xi: f64, d: usize) -> Result<KrausChannel> {
    check_probability("xi", xi)?;
    check_range("d", d as f64, d >= 2, "d >= 2")?;
    let d2 = (d * d) as f64;
    let mut ops = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            let w = if a == 0 && b == 0 {
                (1.0 - xi + xi / d2).sqrt()
            } else {
                xi.sqrt() / d as f64
            };
            ops.push(weyl(d, a, b).scale(w));
        }
    }
    KrausChannel::new(ops, d, d)
}

/// Applies the channel to the whole state.
pub fn apply(ch: &KrausChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    let out = ch.apply_operator(rho.matrix())?;
    DensityMatrix::single(out)
}

/// Applies the channel to tensor factor `subsystem`, leaving the others
/// untouched. The output dimension replaces that factor's dimension.
pub fn apply_to_subsystem(
    ch: &KrausChannel,
    rho: &DensityMatrix,
    subsystem: usize,
) -> Result<DensityMatrix> {
    let dims = rho.dims();
    if subsystem >= dims.len() {
        return Err(Error::InvalidSubsystems(format!(
            "index {subsystem} out of range for {} subsystems",
            dims.len()
        )));
    }
    if dims[subsystem] != ch.d_in {
        return Err(Error::DimensionMismatch {
            expected: ch.d_in,
            found: dims[subsystem],
        });
    }
    let left: usize = dims[..subsystem].iter().product();
    let right: usize = dims[subsystem + 1..].iter().product();
    let id_left = ComplexMatrix::identity(left);
    let id_right = ComplexMatrix::identity(right);

    let mut out_dims = dims.to_vec();
    out_dims[subsystem] = ch.d_out;
    let out_total: usize = out_dims.iter().product();

    let mut out = ComplexMatrix::zeros(out_total);
    for k in &ch.kraus_ops {
        let big = kron(&kron(&id_left, k), &id_right);
        out = &out + &(&(&big * rho.matrix()) * &big.adjoint());
    }
    DensityMatrix::new(out, out_dims)
}

/// Trace-normalised Choi state over `[d_in, d_out]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiMatrix {
    state: DensityMatrix,
}

impl ChoiMatrix {
    /// Validates that the reference marginal is `I/d_in` within `NUM_TOL`.
    pub fn new(state: DensityMatrix) -> Result<Self> {
        let dims = state.dims();
        if dims.len() != 2 {
            return Err(Error::InvalidSubsystems(format!(
                "Choi state needs 2 subsystems, got {}",
                dims.len()
            )));
        }
        let d_in = dims[0];
        let marginal = partial_trace_matrix(state.matrix(), dims, &[0])?;
        let residual =
            marginal.max_abs_diff(&ComplexMatrix::identity(d_in).scale(1.0 / d_in as f64));
        if residual > NUM_TOL {
            return Err(Error::InvalidChoi(residual));
        }
        Ok(Self { state })
    }

    pub fn from_matrix(matrix: ComplexMatrix, d_in: usize, d_out: usize) -> Result<Self> {
        Self::new(DensityMatrix::new(matrix, vec![d_in, d_out])?)
    }

    pub fn state(&self) -> &DensityMatrix {
        &self.state
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.state.matrix()
    }

    pub fn d_in(&self) -> usize {
        self.state.dims()[0]
    }

    pub fn d_out(&self) -> usize {
        self.state.dims()[1]
    }

    /// `<Φ|ρ_E|Φ>`; requires `d_in == d_out`.
    pub fn singlet_fraction(&self) -> Result<f64> {
        let d = self.d_in();
        if self.d_out() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: self.d_out(),
            });
        }
        let m = self.matrix();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..d {
            for j in 0..d {
                acc += m.get(i * d + i, j * d + j);
            }
        }
        Ok(acc.re / d as f64)
    }
}

/// `(I ⊗ E)(Φ)`.
pub fn choi(ch: &KrausChannel) -> Result<ChoiMatrix> {
    let phi = DensityMatrix::maximally_entangled(ch.d_in);
    ChoiMatrix::new(apply_to_subsystem(ch, &phi, 1)?)
}
