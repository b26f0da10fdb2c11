use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::thermal::ThermalState;

pub type C64 = Complex64;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;

/// `(N+1)×(N+1)` density matrix in the Dicke basis `|0⟩ … |N⟩`.
///
/// Hermiticity and unit trace are checked on construction; positivity is
/// only monitored through [`DensityMatrix::min_eigenvalue`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: DMatrix<C64>,
}

impl DensityMatrix {
    pub fn from_matrix(m: DMatrix<C64>) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::InvalidState(format!("matrix is {}x{}", m.nrows(), m.ncols())));
        }
        let rho = Self { m };
        let defect = rho.hermiticity_defect();
        if defect.is_nan() || defect > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("hermiticity defect {defect:e}")));
        }
        let tr = rho.trace();
        if !((tr.re - 1.0).abs() <= TRACE_TOL && tr.im.abs() <= TRACE_TOL) {
            return Err(Error::InvalidState(format!("trace {tr}")));
        }
        Ok(rho)
    }

    /// Wraps a matrix produced by the integrator without re-checking it.
    pub(crate) fn from_matrix_unchecked(m: DMatrix<C64>) -> Self {
        Self { m }
    }

    pub fn from_populations(p: &[f64]) -> Result<Self> {
        let d = p.len();
        Self::from_matrix(DMatrix::from_fn(d, d, |j, k| if j == k { C64::new(p[j], 0.0) } else { C64::new(0.0, 0.0) }))
    }

    /// Pure Dicke state `|level⟩⟨level|` of `atoms` emitters.
    pub fn dicke(atoms: usize, level: usize) -> Result<Self> {
        if level > atoms {
            return Err(Error::InvalidState(format!("level {level} above N = {atoms}")));
        }
        let mut p = vec![0.0; atoms + 1];
        p[level] = 1.0;
        Self::from_populations(&p)
    }

    pub fn ground(atoms: usize) -> Self {
        Self::dicke(atoms, 0).expect("ground level exists")
    }

    pub fn inverted(atoms: usize) -> Self {
        Self::dicke(atoms, atoms).expect("top level exists")
    }

    /// Diagonal state with equal weight on every Dicke level.
    pub fn uniform(atoms: usize) -> Self {
        let d = atoms + 1;
        let p = vec![1.0 / d as f64; d];
        Self::from_populations(&p).expect("uniform populations sum to one")
    }

    pub fn gibbs(state: &ThermalState) -> Self {
        Self::from_matrix_unchecked(DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            state.dim(),
            state.populations().iter().map(|&p| C64::new(p, 0.0)),
        )))
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn atoms(&self) -> usize {
        self.dim() - 1
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.m
    }

    pub fn trace(&self) -> C64 {
        self.m.trace()
    }

    /// `max_{jk} |ρ_jk − ρ_kj*|`.
    pub fn hermiticity_defect(&self) -> f64 {
        hermiticity_defect(&self.m)
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|k| self.m[(k, k)].re).collect()
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&self.m).into_iter().fold(f64::INFINITY, f64::min)
    }

    /// `½‖ρ − σ‖₁`.
    pub fn trace_distance(&self, other: &DensityMatrix) -> Result<f64> {
        if other.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        let diff = &self.m - &other.m;
        Ok(0.5 * hermitian_eigenvalues(&diff).iter().map(|l| l.abs()).sum::<f64>())
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

pub(crate) fn hermiticity_defect(m: &DMatrix<C64>) -> f64 {
    let d = m.nrows();
    let mut worst = 0.0_f64;
    for j in 0..d {
        for k in j..d {
            worst = worst.max((m[(j, k)] - m[(k, j)].conj()).norm());
        }
    }
    worst
}

fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    h.symmetric_eigenvalues().iter().copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_checks() {
        assert!(DensityMatrix::from_populations(&[0.5, 0.6]).is_err());
        let mut m = DMatrix::from_element(2, 2, C64::new(0.0, 0.0));
        m[(0, 0)] = C64::new(0.5, 0.0);
        m[(1, 1)] = C64::new(0.5, 0.0);
        m[(0, 1)] = C64::new(0.1, 0.2);
        assert!(DensityMatrix::from_matrix(m.clone()).is_err());
        m[(1, 0)] = C64::new(0.1, -0.2);
        let rho = DensityMatrix::from_matrix(m).unwrap();
        assert_eq!(rho.hermiticity_defect(), 0.0);
        assert!(DensityMatrix::dicke(2, 3).is_err());
        assert!(DensityMatrix::from_matrix(DMatrix::from_element(2, 3, C64::new(0.0, 0.0))).is_err());
    }

    #[test]
    fn spectra_and_distances() {
        let a = DensityMatrix::ground(3);
        let b = DensityMatrix::inverted(3);
        assert!((a.trace_distance(&b).unwrap() - 1.0).abs() < 1e-14);
        assert!(a.trace_distance(&a).unwrap() < 1e-15);
        assert!(a.trace_distance(&DensityMatrix::ground(2)).is_err());
        let u = DensityMatrix::uniform(3);
        assert!((u.min_eigenvalue() - 0.25).abs() < 1e-14);
        assert!((a.trace_distance(&u).unwrap() - 0.75).abs() < 1e-14);
        // |+⟩⟨+| has eigenvalues {0, 1}
        let h = C64::new(0.5, 0.0);
        let plus = DensityMatrix::from_matrix(DMatrix::from_element(2, 2, h)).unwrap();
        assert!(plus.min_eigenvalue().abs() < 1e-15);
        assert!((plus.trace_distance(&DensityMatrix::ground(1)).unwrap() - 0.5f64.sqrt()).abs() < 1e-14);
    }
}
