use nalgebra::{DMatrix, Matrix2};
use serde::{Deserialize, Serialize};

use crate::element::ConcreteElement;
use crate::error::NumError;
use crate::lattice::{sup_norm, Mode, ModeBox};
use crate::spectrum::{hermitian_eigen_dense, hermitian_eigenvalues};
use crate::theta::ThetaMatrix;
use crate::C64;

/// Defect above which an assembled matrix is rejected rather than symmetrized.
pub const HERMITICITY_REJECT: f64 = 1e-8;

pub type Block = Matrix2<C64>;

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Pauli matrices `γ^1, γ^2, γ^3`; dimension 2 uses the first two.
pub fn gamma(mu: usize) -> Block {
    let i = C64::new(0.0, 1.0);
    match mu {
        0 => Matrix2::new(re(0.0), re(1.0), re(1.0), re(0.0)),
        1 => Matrix2::new(re(0.0), -i, i, re(0.0)),
        2 => Matrix2::new(re(1.0), re(0.0), re(0.0), re(-1.0)),
        _ => panic!("gamma index {} out of range", mu),
    }
}

/// `v_μ γ^μ`.
pub fn slash(v: &[f64]) -> Block {
    v.iter().enumerate().fold(Block::zeros(), |acc, (mu, x)| acc + gamma(mu) * re(*x))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NumericFamily {
    FreeDirac,
    /// `e^{th/2} D e^{th/2}`.
    ConformalDirac { weyl_factor: ConcreteElement },
    /// `D + t·u*[D,u]` for `u = U_shift`.
    UnitaryFlow { shift: Mode },
}

#[derive(Clone, Debug)]
pub(crate) enum Repr {
    /// One 2×2 block per mode, in box order.
    Blocks(Vec<Block>),
    Dense(DMatrix<C64>),
}

/// Galerkin truncation of an operator on `H ⊗ C²`.
#[derive(Clone, Debug)]
pub struct TruncatedOperator {
    modes: Option<ModeBox>,
    pub(crate) repr: Repr,
    hermiticity_defect: f64,
}

impl TruncatedOperator {
    pub(crate) fn from_blocks(modes: ModeBox, blocks: Vec<Block>) -> Self {
        TruncatedOperator { modes: Some(modes), repr: Repr::Blocks(blocks), hermiticity_defect: 0.0 }
    }

    /// Wraps an arbitrary square matrix, symmetrizing it.
    pub fn from_dense(matrix: DMatrix<C64>) -> Result<Self, NumError> {
        Self::symmetrized(None, matrix)
    }

    pub(crate) fn symmetrized(modes: Option<ModeBox>, matrix: DMatrix<C64>) -> Result<Self, NumError> {
        if !matrix.is_square() {
            return Err(NumError::InvalidArgument(format!("{}x{} matrix is not square", matrix.nrows(), matrix.ncols())));
        }
        let adj = matrix.adjoint();
        let defect = (&matrix - &adj).iter().map(|z| z.norm()).fold(0.0, f64::max);
        let scale = matrix.iter().map(|z| z.norm()).fold(1.0, f64::max);
        if defect > HERMITICITY_REJECT * scale {
            return Err(NumError::NonHermitian(defect));
        }
        let sym = (matrix + adj) * re(0.5);
        Ok(TruncatedOperator { modes, repr: Repr::Dense(sym), hermiticity_defect: defect })
    }

    pub fn mode_box(&self) -> Option<&ModeBox> {
        self.modes.as_ref()
    }

    pub fn size(&self) -> usize {
        match &self.repr {
            Repr::Blocks(b) => 2 * b.len(),
            Repr::Dense(m) => m.nrows(),
        }
    }

    /// Largest entrywise deviation from Hermiticity before symmetrization.
    pub fn hermiticity_defect(&self) -> f64 {
        self.hermiticity_defect
    }

    pub fn is_block_diagonal(&self) -> bool {
        matches!(self.repr, Repr::Blocks(_))
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        match &self.repr {
            Repr::Dense(m) => m.clone(),
            Repr::Blocks(blocks) => {
                let n = 2 * blocks.len();
                let mut m = DMatrix::zeros(n, n);
                for (i, b) in blocks.iter().enumerate() {
                    m.view_mut((2 * i, 2 * i), (2, 2)).copy_from(b);
                }
                m
            }
        }
    }

    /// Spectral norm of `self − other`.
    pub fn distance(&self, other: &TruncatedOperator) -> Result<f64, NumError> {
        if self.size() != other.size() {
            return Err(NumError::InvalidArgument(format!("operator sizes {} and {} differ", self.size(), other.size())));
        }
        Ok(match (&self.repr, &other.repr) {
            (Repr::Blocks(a), Repr::Blocks(b)) => a.iter().zip(b).map(|(x, y)| block_norm(&(x - y))).fold(0.0, f64::max),
            _ => {
                let diff = TruncatedOperator::symmetrized(None, self.to_dense() - other.to_dense())?;
                hermitian_eigenvalues(&diff)?.iter().map(|v| v.abs()).fold(0.0, f64::max)
            }
        })
    }
}

/// Spectral norm of a Hermitian 2×2 block.
pub(crate) fn block_norm(b: &Block) -> f64 {
    let (mean, rad) = block_mean_radius(b);
    mean.abs() + rad
}

pub(crate) fn block_mean_radius(b: &Block) -> (f64, f64) {
    let a = b[(0, 0)].re;
    let d = b[(1, 1)].re;
    let off = (b[(0, 1)] + b[(1, 0)].conj()) * re(0.5);
    let half = (a - d) / 2.0;
    ((a + d) / 2.0, (half * half + off.norm_sqr()).sqrt())
}

/// Matrix of left multiplication by `a` on the truncated mode space.
/// `U_m U_k = e^{πiΘ(m,k)} U_{k+m}`; mass leaving the box is dropped.
pub fn multiplication_matrix(a: &ConcreteElement, theta: &ThetaMatrix, modes: &ModeBox) -> Result<DMatrix<C64>, NumError> {
    let a = a.normalized(modes.dim())?;
    let n = modes.len();
    let mut m = DMatrix::zeros(n, n);
    for col in 0..n {
        let k = modes.mode(col);
        for (shift, c) in a.modes() {
            let target: Mode = k.iter().zip(shift).map(|(x, y)| x + y).collect();
            if let Some(row) = modes.index(&target) {
                let phase = C64::from_polar(1.0, std::f64::consts::PI * theta.pairing(shift, &k));
                m[(row, col)] += c * phase;
            }
        }
    }
    Ok(m)
}

/// `M ⊗ B` in the mode-major, spinor-minor basis.
pub fn kron_spinor(m: &DMatrix<C64>, b: &Block) -> DMatrix<C64> {
    let n = m.nrows();
    let mut out = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        for i in 0..n {
            let z = m[(i, j)];
            if z.norm() == 0.0 {
                continue;
            }
            out.view_mut((2 * i, 2 * j), (2, 2)).copy_from(&(b * z));
        }
    }
    out
}

fn free_blocks(modes: &ModeBox, offset: &[f64]) -> Vec<Block> {
    modes
        .modes()
        .map(|k| {
            let v: Vec<f64> = k.iter().zip(offset).map(|(x, o)| *x as f64 + o).collect();
            slash(&v)
        })
        .collect()
}

enum Prepared {
    Free,
    Conformal { eigenvalues: Vec<f64>, eigenvectors: DMatrix<C64> },
    UnitaryFlow { shift: Vec<f64> },
}

/// Precomputes the `t`-independent data of a family so that many `t`
/// samples share one diagonalization of the multiplication matrix.
pub struct OperatorBuilder {
    modes: ModeBox,
    prepared: Prepared,
}

impl OperatorBuilder {
    pub fn new(family: &NumericFamily, theta: &ThetaMatrix, dim: usize, cutoff: i64) -> Result<Self, NumError> {
        let modes = ModeBox::new(dim, cutoff)?;
        theta.check_dim(dim)?;
        let prepared = match family {
            NumericFamily::FreeDirac => Prepared::Free,
            NumericFamily::ConformalDirac { weyl_factor } => {
                let h = weyl_factor.normalized(dim)?;
                h.check_self_adjoint(1e-12)?;
                let radius = h.support_radius();
                if radius >= cutoff {
                    return Err(NumError::SupportOverflow { radius, cutoff });
                }
                let mh = multiplication_matrix(&h, theta, &modes)?;
                let (eigenvalues, eigenvectors) = hermitian_eigen_dense(mh)?;
                Prepared::Conformal { eigenvalues, eigenvectors }
            }
            NumericFamily::UnitaryFlow { shift } => {
                if shift.len() != dim {
                    return Err(NumError::ModeShape { mode: shift.clone(), dim });
                }
                let radius = sup_norm(shift);
                if radius >= cutoff {
                    return Err(NumError::SupportOverflow { radius, cutoff });
                }
                Prepared::UnitaryFlow { shift: shift.iter().map(|x| *x as f64).collect() }
            }
        };
        Ok(OperatorBuilder { modes, prepared })
    }

    pub fn mode_box(&self) -> &ModeBox {
        &self.modes
    }

    pub fn at(&self, t: f64) -> Result<TruncatedOperator, NumError> {
        let dim = self.modes.dim();
        match &self.prepared {
            Prepared::Free => Ok(TruncatedOperator::from_blocks(self.modes.clone(), free_blocks(&self.modes, &vec![0.0; dim]))),
            // u*[D,u] = m·γ is constant, so the family stays block-diagonal.
            Prepared::UnitaryFlow { shift } => {
                let offset: Vec<f64> = shift.iter().map(|x| t * x).collect();
                Ok(TruncatedOperator::from_blocks(self.modes.clone(), free_blocks(&self.modes, &offset)))
            }
            Prepared::Conformal { eigenvalues, eigenvectors } => {
                let weights: Vec<C64> = eigenvalues.iter().map(|l| re((t * l / 2.0).exp())).collect();
                let mut scaled = eigenvectors.clone();
                for (j, w) in weights.iter().enumerate() {
                    scaled.column_mut(j).scale_mut(w.re);
                }
                let e = &scaled * eigenvectors.adjoint();
                let n = self.modes.len();
                let mut total = DMatrix::zeros(2 * n, 2 * n);
                for mu in 0..dim {
                    let mut right = e.clone();
                    for (row, k) in self.modes.modes().enumerate() {
                        right.row_mut(row).scale_mut(k[mu] as f64);
                    }
                    total += kron_spinor(&(&e * right), &gamma(mu));
                }
                TruncatedOperator::symmetrized(Some(self.modes.clone()), total)
            }
        }
    }
}

pub fn build_operator(family: &NumericFamily, theta: &ThetaMatrix, dim: usize, cutoff: i64, t: f64) -> Result<TruncatedOperator, NumError> {
    OperatorBuilder::new(family, theta, dim, cutoff)?.at(t)
}

/// Compression of `u* T u`, `u = U_shift`, to the initial space of the
/// truncated shift: the modes `k` with `k + shift` inside the box.
pub fn gauge_conjugate(op: &TruncatedOperator, shift: &[i64], theta: &ThetaMatrix) -> Result<DMatrix<C64>, NumError> {
    let modes = op.mode_box().ok_or_else(|| NumError::InvalidArgument("operator carries no mode box".into()))?;
    if shift.len() != modes.dim() {
        return Err(NumError::ModeShape { mode: shift.to_vec(), dim: modes.dim() });
    }
    let u = kron_spinor(&multiplication_matrix(&ConcreteElement::unitary(shift.to_vec()), theta, modes)?, &Block::identity());
    let conj = u.adjoint() * op.to_dense() * u;
    let keep: Vec<usize> = modes
        .modes()
        .enumerate()
        .filter(|(_, k)| modes.index(&k.iter().zip(shift).map(|(x, y)| x + y).collect::<Vec<_>>()).is_some())
        .flat_map(|(i, _)| [2 * i, 2 * i + 1])
        .collect();
    Ok(conj.select_rows(&keep).select_columns(&keep))
}
