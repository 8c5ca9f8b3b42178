//! Shared fixtures for the benchmarks.

use fracbem::geometry::{discretize_boundary, interior_cells, BoundaryMesh, Domain, InteriorCellSet};
use fracbem::linalg::DenseMatrix;
use fracbem::problems::{problem_1, TestProblem};
use fracbem::timefrac::{helmholtz_coefficients, FractionalScheme};

/// Mesh, cells, problem and scheme for problem 1 with `n` elements and the
/// default interior resolution.
pub struct Fixture {
    pub mesh: BoundaryMesh,
    pub cells: InteriorCellSet,
    pub problem: TestProblem,
    pub scheme: FractionalScheme,
}

impl Fixture {
    pub fn problem_1(n: usize, steps: usize) -> Self {
        let problem = problem_1(1.5).expect("valid order");
        let m = fracbem::geometry::default_interior_resolution(&problem.domain, n);
        let mesh = discretize_boundary(&problem.domain, n).expect("valid mesh");
        let cells = interior_cells(&problem.domain, m).expect("valid cells");
        let scheme = FractionalScheme::new(1.5, 0.1, problem.kappa, steps).expect("valid scheme");
        Fixture { mesh, cells, problem, scheme }
    }

    pub fn wave_number(&self) -> f64 {
        helmholtz_coefficients(&self.scheme).1
    }

    pub fn domain(&self) -> &Domain {
        &self.problem.domain
    }
}

/// Diagonally dominant test matrix, so LU needs no real pivoting effort.
pub fn dominant_matrix(n: usize) -> DenseMatrix {
    DenseMatrix::from_fn(n, n, |i, j| {
        if i == j {
            n as f64
        } else {
            ((i * 31 + j * 17) % 13) as f64 / 13.0 - 0.5
        }
    })
}
