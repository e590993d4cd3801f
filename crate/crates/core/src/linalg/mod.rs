//! Dense complex linear algebra: Hermitian eigendecomposition and SVD null
//! spaces, plus a banded eigenvalue path in [`band`].
//!
//! The dense decompositions are delegated to `nalgebra`; this module adds
//! the conventions the Floquet code relies on (ascending order, phase
//! fixing, re-orthonormalised degenerate clusters, deterministic output).

pub mod band;

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};

use crate::error::{Error, Result};
use crate::model::C64;

/// Iteration cap multiplier for the QR-type eigen and SVD solvers.
const SWEEPS: usize = 100;

/// Relative gap below which eigenvalues are treated as one cluster.
pub const CLUSTER_GAP: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct HermitianMatrix {
    data: DMatrix<C64>,
    max_abs: f64,
}

impl HermitianMatrix {
    /// Fails unless `‖A − A†‖_max ≤ 1e-12 ‖A‖_max`.
    pub fn new(data: DMatrix<C64>) -> Result<Self> {
        assert!(data.is_square(), "Hermitian matrix must be square");
        let max_abs = data.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let n = data.nrows();
        let mut deviation = 0.0f64;
        for i in 0..n {
            for j in i..n {
                deviation = deviation.max((data[(i, j)] - data[(j, i)].conj()).norm());
            }
        }
        if deviation > 1e-12 * max_abs {
            return Err(Error::NotHermitian { deviation, scale: max_abs });
        }
        Ok(Self { data, max_abs })
    }

    pub fn from_real(data: DMatrix<f64>) -> Result<Self> {
        Self::new(data.map(C64::from))
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.data
    }

    pub fn max_abs(&self) -> f64 {
        self.max_abs
    }

    fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }
}

/// Eigenvalues in ascending order, eigenvectors as orthonormal columns.
#[derive(Debug, Clone)]
pub struct Eigendecomposition {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: DMatrix<C64>,
}

impl Eigendecomposition {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
}

/// Full eigendecomposition of a Hermitian matrix.
///
/// Real symmetric input takes a real-arithmetic path. Each eigenvector is
/// rotated so that its largest-magnitude entry is real and positive, and
/// vectors inside a cluster (gap below [`CLUSTER_GAP`]·‖A‖) are
/// re-orthonormalised. Intra-cluster order carries no meaning.
pub fn eigh(a: &HermitianMatrix) -> Result<Eigendecomposition> {
    let n = a.dim();
    let cap = SWEEPS * n.max(1);
    let (values, vectors): (Vec<f64>, DMatrix<C64>) = if a.is_real() {
        let real = a.data.map(|z| z.re);
        let eig = SymmetricEigen::try_new(real, f64::EPSILON, cap)
            .ok_or(Error::NoConvergence { what: "Hermitian eigensolver", dim: n, cap })?;
        (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors.map(C64::from))
    } else {
        let eig = SymmetricEigen::try_new(a.data.clone(), f64::EPSILON, cap)
            .ok_or(Error::NoConvergence { what: "Hermitian eigensolver", dim: n, cap })?;
        (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
    };

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]).then(i.cmp(&j)));

    let eigenvalues = DVector::from_iterator(n, order.iter().map(|&i| values[i]));
    let mut eigenvectors = DMatrix::from_fn(n, n, |r, c| vectors[(r, order[c])]);

    let gap = CLUSTER_GAP * a.max_abs.max(f64::MIN_POSITIVE);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && eigenvalues[end] - eigenvalues[end - 1] < gap {
            end += 1;
        }
        if end - start > 1 {
            orthonormalize_columns(&mut eigenvectors, start, end);
        }
        start = end;
    }
    for c in 0..n {
        fix_phase(&mut eigenvectors, c);
    }
    Ok(Eigendecomposition { eigenvalues, eigenvectors })
}

/// Modified Gram-Schmidt on columns `start..end`.
fn orthonormalize_columns(m: &mut DMatrix<C64>, start: usize, end: usize) {
    for c in start..end {
        for prev in start..c {
            let overlap = m.column(prev).dotc(&m.column(c));
            let prev_col = m.column(prev).clone_owned();
            let mut col = m.column_mut(c);
            col -= prev_col * overlap;
        }
        let norm = m.column(c).norm();
        if norm > 0.0 {
            m.column_mut(c).unscale_mut(norm);
        }
    }
}

/// Makes the largest-magnitude entry of column `c` real and positive.
pub(crate) fn fix_phase(m: &mut DMatrix<C64>, c: usize) {
    let mut best = 0;
    let mut best_abs = -1.0;
    for (r, z) in m.column(c).iter().enumerate() {
        let a = z.norm();
        if a > best_abs {
            best = r;
            best_abs = a;
        }
    }
    if best_abs > 0.0 {
        let phase = m[(best, c)].conj() / best_abs;
        m.column_mut(c).scale_mut_complex(phase);
    }
}

trait ScaleComplex {
    fn scale_mut_complex(&mut self, s: C64);
}

impl<S> ScaleComplex for nalgebra::Matrix<C64, nalgebra::Dyn, nalgebra::U1, S>
where
    S: nalgebra::StorageMut<C64, nalgebra::Dyn, nalgebra::U1>,
{
    fn scale_mut_complex(&mut self, s: C64) {
        for z in self.iter_mut() {
            *z *= s;
        }
    }
}

/// Singular values (descending) and the matching right singular vectors.
#[derive(Debug, Clone)]
pub struct RightSingular {
    pub singular_values: Vec<f64>,
    /// Column `i` belongs to `singular_values[i]`.
    pub vectors: DMatrix<C64>,
}

/// Thin SVD returning the full set of right singular vectors. Matrices with
/// fewer rows than columns are padded with zero rows.
pub fn right_singular(a: &DMatrix<C64>) -> Result<RightSingular> {
    let (m, n) = a.shape();
    let padded;
    let a = if m < n {
        padded = a.clone().resize_vertically(n, C64::from(0.0));
        &padded
    } else {
        a
    };
    let cap = SWEEPS * n.max(1);
    let svd = SVD::try_new(a.clone(), false, true, f64::EPSILON, cap)
        .ok_or(Error::NoConvergence { what: "singular value decomposition", dim: n, cap })?;
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]).then(i.cmp(&j)));
    let singular_values = order.iter().map(|&i| svd.singular_values[i]).collect();
    let mut vectors = DMatrix::from_fn(n, n, |r, c| v_t[(order[c], r)].conj());
    for c in 0..n {
        fix_phase(&mut vectors, c);
    }
    Ok(RightSingular { singular_values, vectors })
}

/// Orthonormal basis of the right near-null space: singular vectors with
/// `σ ≤ rel_tol · σ_max`. Empty when none qualify.
pub fn nullspace(a: &DMatrix<C64>, rel_tol: f64) -> Result<Vec<DVector<C64>>> {
    assert!(rel_tol > 0.0 && rel_tol < 1.0, "rel_tol must lie in (0, 1)");
    let sv = right_singular(a)?;
    let sigma_max = sv.singular_values.first().copied().unwrap_or(0.0);
    Ok(sv
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= rel_tol * sigma_max)
        .map(|(i, _)| sv.vectors.column(i).clone_owned())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{rngs::StdRng, Rng, SeedableRng};

    fn random_hermitian(n: usize, rng: &mut StdRng) -> HermitianMatrix {
        let mut m = DMatrix::<C64>::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::from(rng.random_range(-1.0..1.0));
            for j in 0..i {
                let z = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        HermitianMatrix::new(m).unwrap()
    }

    #[test]
    fn diagonal_sorted() {
        let a = HermitianMatrix::from_real(DMatrix::from_diagonal(&DVector::from_vec(vec![3.0, 1.0, 2.0])))
            .unwrap();
        let e = eigh(&a).unwrap();
        assert_eq!(e.eigenvalues.as_slice(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn sigma_x_eigenpairs() {
        let a = HermitianMatrix::from_real(DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])).unwrap();
        let e = eigh(&a).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-15);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v0 = e.eigenvectors.column(0);
        let v1 = e.eigenvectors.column(1);
        // (1, -1)/√2 and (1, 1)/√2 up to phase
        assert!((v0[0] + v0[1]).norm() < 1e-14 && (v0[0].norm() - s).abs() < 1e-14);
        assert!((v1[0] - v1[1]).norm() < 1e-14 && (v1[0].norm() - s).abs() < 1e-14);
    }

    #[test]
    fn random_reconstruction_and_trace() {
        let mut rng = StdRng::seed_from_u64(7);
        for n in [1, 2, 5, 10, 17] {
            let a = random_hermitian(n, &mut rng);
            let e = eigh(&a).unwrap();
            let v = &e.eigenvectors;
            let lambda = DMatrix::from_diagonal(&e.eigenvalues.map(C64::from));
            let rebuilt = v * lambda * v.adjoint();
            let err = (rebuilt - a.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(err < 1e-10 * a.max_abs(), "reconstruction error {err}");
            let gram = v.adjoint() * v;
            let ortho = (gram - DMatrix::<C64>::identity(n, n)).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(ortho < 1e-10);
            for w in e.eigenvalues.as_slice().windows(2) {
                assert!(w[0] <= w[1]);
            }
            let trace: f64 = (0..n).map(|i| a.matrix()[(i, i)].re).sum();
            assert!((e.eigenvalues.sum() - trace).abs() < 1e-10 * n as f64 * a.max_abs());
            for c in 0..n {
                let col = e.eigenvectors.column(c);
                let big = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
                let lead = col.iter().find(|z| z.norm() == big).unwrap();
                assert!(lead.im.abs() < 1e-15 && lead.re > 0.0);
            }
        }
    }

    #[test]
    fn degenerate_cluster_stays_orthonormal() {
        let mut m = DMatrix::<f64>::identity(4, 4);
        m[(3, 3)] = 2.0;
        m[(0, 1)] = 1e-14;
        m[(1, 0)] = 1e-14;
        let e = eigh(&HermitianMatrix::from_real(m).unwrap()).unwrap();
        let gram = e.eigenvectors.adjoint() * &e.eigenvectors;
        let ortho = (gram - DMatrix::<C64>::identity(4, 4)).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(ortho < 1e-12);
    }

    #[test]
    fn deterministic_bits() {
        let mut rng = StdRng::seed_from_u64(3);
        let a = random_hermitian(12, &mut rng);
        let e1 = eigh(&a).unwrap();
        let e2 = eigh(&a).unwrap();
        assert_eq!(e1.eigenvalues, e2.eigenvalues);
        assert_eq!(e1.eigenvectors, e2.eigenvectors);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.5, 0.0]).map(C64::from);
        assert!(matches!(HermitianMatrix::new(m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn nullspace_examples() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]).map(C64::from);
        let ns = nullspace(&a, 1e-8).unwrap();
        assert_eq!(ns.len(), 1);
        assert!((ns[0][0]).norm() < 1e-15 && (ns[0][1].norm() - 1.0).abs() < 1e-15);

        let id = DMatrix::<C64>::identity(3, 3);
        assert!(nullspace(&id, 1e-8).unwrap().is_empty());

        let a = DMatrix::from_row_slice(3, 2, &[1.0, 1.0, 2.0, 2.0, -0.5, -0.5]).map(C64::from);
        let ns = nullspace(&a, 1e-8).unwrap();
        assert_eq!(ns.len(), 1);
        let av = &a * &ns[0];
        assert!(av.norm() < 1e-14);
        assert!((ns[0][0] + ns[0][1]).norm() < 1e-14);
        assert!((ns[0][0].norm() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn nullspace_residual_bound_and_wide_padding() {
        let mut rng = StdRng::seed_from_u64(11);
        // rank-deficient 8×5: last column a combination of the first two
        let mut a = DMatrix::<C64>::from_fn(8, 5, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let combo = a.column(0) * C64::new(0.3, -0.2) + a.column(1) * C64::from(1.7);
        a.set_column(4, &combo);
        let tol = 1e-10;
        let sv = right_singular(&a).unwrap();
        let ns = nullspace(&a, tol).unwrap();
        assert_eq!(ns.len(), 1);
        assert!((&a * &ns[0]).norm() <= 10.0 * tol * sv.singular_values[0]);

        // 1×3 → padded, two-dimensional null space
        let wide = DMatrix::from_row_slice(1, 3, &[1.0, 2.0, 3.0]).map(C64::from);
        let ns = nullspace(&wide, 1e-8).unwrap();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!((&wide * v).norm() < 1e-13);
        }
    }
}
