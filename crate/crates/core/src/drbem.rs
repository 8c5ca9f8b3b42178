//! Dual reciprocity BEM with the linear radial basis `μ = 1 + r`.
//!
//! With the Laplace fundamental solution `G* = −ln r/2π` (`∇²G* = −δ`) the
//! boundary identity at node `i` reads
//!
//! ```text
//! c_i u_i + Σ H̄_ik u_k − Σ G_ik q_k = −∫_Ω G* ∇²u dΩ,
//! ```
//!
//! with `c = ½` on the boundary and `1` inside. Expanding `∇²u = Σ α_j μ_j`
//! and using particular solutions `∇²f_j = μ_j` turns the right side into
//! boundary terms, which gives `H̃u − G̃q = D∇²u` with
//! `D = (H̃Û − G̃Q̂)Φ⁻¹`. Substituting `κ∇²u = D_t^α u − g` and averaging
//! over each step leads to a constant Crank–Nicolson system whose unknowns
//! are the boundary fluxes and the interior values.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::geometry::{BoundaryElement, BoundaryMesh, Point};
use crate::linalg::{dot, invert, lu_factor, DenseMatrix, LuFactorization};
use crate::problems::TestProblem;
use crate::quadrature::rule_for;
use crate::specfun::log_element_integral;
use crate::timefrac::{memory_sum, FractionalScheme, SolutionHistory};
use crate::{Error, Result};

const TWO_PI: f64 = 2.0 * PI;

/// `μ = 1 + |point − center|`.
pub fn rbf_value(center: Point, point: Point) -> f64 {
    1.0 + point.distance(center)
}

/// `f = r²/4 + r³/9`, so that `∇²f = 1 + r`.
pub fn particular_solution(center: Point, point: Point) -> f64 {
    let r = point.distance(center);
    r * r / 4.0 + r * r * r / 9.0
}

/// `∂f/∂n = (½ + r/3) ((point − center)·n)`.
pub fn particular_flux(center: Point, point: Point, normal: Point) -> f64 {
    let d = point - center;
    (0.5 + d.norm() / 3.0) * d.dot(normal)
}

/// `(G*, ∂G*/∂n)` with `G* = −ln r/2π`.
pub fn laplace_kernels(field: Point, source: Point, normal: Point) -> Result<(f64, f64)> {
    let d = field - source;
    let r2 = d.dot(d);
    if r2 == 0.0 {
        return Err(Error::Domain(format!(
            "Laplace kernel evaluated at coincident points ({}, {})",
            field.x, field.y
        )));
    }
    Ok(laplace_unchecked(d, r2, normal))
}

#[inline]
fn laplace_unchecked(d: Point, r2: f64, normal: Point) -> (f64, f64) {
    (-0.25 * r2.ln() / PI, -d.dot(normal) / (TWO_PI * r2))
}

/// `(∫_{Γ_k} G*, ∫_{Γ_k} ∂G*/∂n)` for a source at `source`; `own` marks the
/// source as the element's midpoint.
pub fn laplace_element_integrals(element: &BoundaryElement, source: Point, own: bool) -> (f64, f64) {
    if own {
        return (-log_element_integral(element.length) / TWO_PI, 0.0);
    }
    let (mut g, mut h) = (0.0, 0.0);
    for (x, w) in rule_for(element, source).on_element(element) {
        let d = x - source;
        let (gv, hv) = laplace_unchecked(d, d.dot(d), element.normal);
        g += w * gv;
        h += w * hv;
    }
    (g, h)
}

/// Collocation nodes of the dual reciprocity expansion: boundary midpoints
/// followed by interior points.
#[derive(Debug, Clone, PartialEq)]
pub struct RbfBasis {
    pub centers: Vec<Point>,
    pub n_boundary: usize,
}

impl RbfBasis {
    pub fn new(mesh: &BoundaryMesh, interior: &[Point]) -> Result<Self> {
        let mut centers = mesh.midpoints();
        centers.extend_from_slice(interior);
        for i in 0..centers.len() {
            for j in i + 1..centers.len() {
                if centers[i] == centers[j] {
                    return Err(Error::DuplicateNodes { first: i, second: j });
                }
            }
        }
        Ok(Self { centers, n_boundary: mesh.len() })
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// `Φ_ij = 1 + r_ij`.
    pub fn interpolation_matrix(&self) -> DenseMatrix {
        let c = &self.centers;
        DenseMatrix::from_rows_par(c.len(), c.len(), |i, row| {
            for (j, v) in row.iter_mut().enumerate() {
                *v = rbf_value(c[j], c[i]);
            }
        })
    }
}

/// Assembled DRBEM matrices. Rows and columns follow [`RbfBasis`] order.
#[derive(Debug, Clone)]
pub struct DrbemSystem {
    pub basis: RbfBasis,
    pub kappa: f64,
    mesh: BoundaryMesh,
    h_tilde: DenseMatrix,
    g_tilde: DenseMatrix,
    u_hat: DenseMatrix,
    q_hat: DenseMatrix,
    phi: DenseMatrix,
    phi_lu: LuFactorization,
    d: DenseMatrix,
}

/// Builds `H̃`, `G̃`, `Û`, `Q̂`, `Φ` and `D` for `mesh` and `interior`.
pub fn assemble_drbem(mesh: &BoundaryMesh, interior: &[Point], kappa: f64) -> Result<DrbemSystem> {
    if mesh.len() < 4 {
        return Err(Error::Config(format!("DRBEM needs at least 4 boundary elements, got {}", mesh.len())));
    }
    if interior.is_empty() {
        return Err(Error::Config("DRBEM needs at least one interior node".into()));
    }
    if !(kappa > 0.0) || !kappa.is_finite() {
        return Err(Error::Config(format!("kappa must be finite and positive, got {kappa}")));
    }
    if let Some(p) = interior.iter().find(|p| !mesh.contains(**p)) {
        return Err(Error::Domain(format!(
            "interior node ({}, {}) is not strictly inside the boundary mesh",
            p.x, p.y
        )));
    }
    let basis = RbfBasis::new(mesh, interior)?;
    let n = mesh.len();
    let total = basis.len();
    let centers = &basis.centers;

    let rows: Vec<(Vec<f64>, Vec<f64>)> = centers
        .par_iter()
        .enumerate()
        .map(|(i, &p)| {
            let mut hr = vec![0.0; n];
            let mut gr = vec![0.0; n];
            for (k, e) in mesh.elements.iter().enumerate() {
                let (g, h) = laplace_element_integrals(e, p, k == i);
                gr[k] = g;
                hr[k] = h;
            }
            (hr, gr)
        })
        .collect();

    let mut h_tilde = DenseMatrix::zeros(total, total);
    let mut g_tilde = DenseMatrix::zeros(total, total);
    for (i, (hr, gr)) in rows.into_iter().enumerate() {
        h_tilde.row_mut(i)[..n].copy_from_slice(&hr);
        g_tilde.row_mut(i)[..n].copy_from_slice(&gr);
        h_tilde[(i, i)] += if i < n { 0.5 } else { 1.0 };
    }

    let u_hat = DenseMatrix::from_rows_par(total, total, |i, row| {
        for (j, v) in row.iter_mut().enumerate() {
            *v = particular_solution(centers[j], centers[i]);
        }
    });
    let q_hat = DenseMatrix::from_rows_par(total, total, |i, row| {
        if i < n {
            let normal = mesh.elements[i].normal;
            for (j, v) in row.iter_mut().enumerate() {
                *v = particular_flux(centers[j], centers[i], normal);
            }
        }
    });
    let phi = basis.interpolation_matrix();
    let phi_lu = lu_factor(&phi)?;

    let mut system = DrbemSystem {
        basis,
        kappa,
        mesh: mesh.clone(),
        h_tilde,
        g_tilde,
        u_hat,
        q_hat,
        phi,
        phi_lu,
        d: DenseMatrix::zeros(0, 0),
    };
    // D Φ = R with Φ symmetric, so Dᵀ = Φ⁻¹ Rᵀ.
    let r = system.particular_residual()?;
    system.d = system.phi_lu.solve_matrix(&r.transpose())?.transpose();
    Ok(system)
}

/// First `rows` rows of `m`.
fn top_rows(m: &DenseMatrix, rows: usize) -> Result<DenseMatrix> {
    DenseMatrix::from_row_major(rows, m.cols(), m.as_slice()[..rows * m.cols()].to_vec())
}

/// Columns `0..cols` of `m`.
fn left_columns(m: &DenseMatrix, cols: usize) -> DenseMatrix {
    DenseMatrix::from_fn(m.rows(), cols, |i, j| m[(i, j)])
}

impl DrbemSystem {
    pub fn n_boundary(&self) -> usize {
        self.basis.n_boundary
    }

    pub fn node_count(&self) -> usize {
        self.basis.len()
    }

    pub fn nodes(&self) -> &[Point] {
        &self.basis.centers
    }

    pub fn mesh(&self) -> &BoundaryMesh {
        &self.mesh
    }

    pub fn h_tilde(&self) -> &DenseMatrix {
        &self.h_tilde
    }

    pub fn g_tilde(&self) -> &DenseMatrix {
        &self.g_tilde
    }

    pub fn u_hat(&self) -> &DenseMatrix {
        &self.u_hat
    }

    pub fn q_hat(&self) -> &DenseMatrix {
        &self.q_hat
    }

    pub fn phi(&self) -> &DenseMatrix {
        &self.phi
    }

    pub fn phi_factorization(&self) -> &LuFactorization {
        &self.phi_lu
    }

    pub fn d(&self) -> &DenseMatrix {
        &self.d
    }

    /// `H̃Û − G̃Q̂`, exploiting that `H̃` is `H̄` plus a diagonal outside the
    /// boundary columns and `G̃` vanishes there.
    fn particular_residual(&self) -> Result<DenseMatrix> {
        let n = self.n_boundary();
        let h_b = left_columns(&self.h_tilde, n);
        let g_b = left_columns(&self.g_tilde, n);
        let mut h_b_raw = h_b.clone();
        for i in 0..n {
            h_b_raw[(i, i)] -= 0.5;
        }
        let mut r = h_b_raw.matmul(&top_rows(&self.u_hat, n)?)?;
        let gq = g_b.matmul(&top_rows(&self.q_hat, n)?)?;
        r.add_scaled(-1.0, &gq);
        for i in 0..self.node_count() {
            let c = if i < n { 0.5 } else { 1.0 };
            let src = self.u_hat.row(i);
            for (v, s) in r.row_mut(i).iter_mut().zip(src) {
                *v += c * s;
            }
        }
        Ok(r)
    }

    /// `D` recomputed through an explicit inverse of `Φ`.
    pub fn d_via_inverse(&self) -> Result<DenseMatrix> {
        self.particular_residual()?.matmul(&invert(&self.phi)?)
    }

    /// Residual `H̃u − G̃q` of the steady equation `∇²u = 0`.
    pub fn steady_residual(&self, u: &[f64], q: &[f64]) -> Result<Vec<f64>> {
        let mut full_q = q.to_vec();
        full_q.resize(self.node_count(), 0.0);
        let hu = self.h_tilde.matvec(u)?;
        let gq = self.g_tilde.matvec(&full_q)?;
        Ok(hu.iter().zip(gq).map(|(a, b)| a - b).collect())
    }

    /// Solves the steady Laplace problem `H̃u − G̃q = D s` for boundary flux
    /// and interior values, given Dirichlet data and the nodal source `s`.
    pub fn solve_poisson(&self, boundary_u: &[f64], source: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        let n = self.n_boundary();
        let total = self.node_count();
        if boundary_u.len() != n || source.len() != total {
            return Err(Error::Usage(format!(
                "expected {n} boundary values and {total} source values, got {} and {}",
                boundary_u.len(),
                source.len()
            )));
        }
        let a = DenseMatrix::from_fn(total, total, |i, j| {
            if j < n {
                -self.g_tilde[(i, j)]
            } else {
                self.h_tilde[(i, j)]
            }
        });
        let mut rhs = self.d.matvec(source)?;
        for (i, r) in rhs.iter_mut().enumerate() {
            *r -= dot(&self.h_tilde.row(i)[..n], boundary_u);
        }
        let x = lu_factor(&a)?.solve(&rhs)?;
        Ok((x[..n].to_vec(), x[n..].to_vec()))
    }
}

/// Constant Crank–Nicolson step operator for one scheme.
#[derive(Debug, Clone)]
pub struct DrbemStepper {
    step_matrix: DenseMatrix,
    step_lu: LuFactorization,
    /// `κ/2 H̃ − a₀ϑD` restricted to boundary columns, moved to the right side.
    known_boundary: DenseMatrix,
    /// `−(κ/2 H̃ + a₀ϑD)`.
    previous: DenseMatrix,
    /// `κ/2 G̃` restricted to boundary columns.
    previous_flux: DenseMatrix,
    n_boundary: usize,
}

impl DrbemStepper {
    pub fn new(system: &DrbemSystem, scheme: &FractionalScheme) -> Result<Self> {
        if scheme.kappa != system.kappa {
            return Err(Error::Usage(format!(
                "system assembled with kappa = {} but the scheme uses {}",
                system.kappa, scheme.kappa
            )));
        }
        let n = system.n_boundary();
        let total = system.node_count();
        let half_k = 0.5 * system.kappa;
        let c = scheme.weights[0] * scheme.theta();
        let lhs = |i: usize, j: usize| half_k * system.h_tilde[(i, j)] - c * system.d[(i, j)];
        let step_matrix = DenseMatrix::from_fn(total, total, |i, j| {
            if j < n {
                -half_k * system.g_tilde[(i, j)]
            } else {
                lhs(i, j)
            }
        });
        let step_lu = lu_factor(&step_matrix)?;
        let known_boundary = DenseMatrix::from_fn(total, n, lhs);
        let previous = DenseMatrix::from_fn(total, total, |i, j| {
            -(half_k * system.h_tilde[(i, j)] + c * system.d[(i, j)])
        });
        let previous_flux = DenseMatrix::from_fn(total, n, |i, j| half_k * system.g_tilde[(i, j)]);
        Ok(Self { step_matrix, step_lu, known_boundary, previous, previous_flux, n_boundary: n })
    }

    /// Left-hand matrix with columns `[q on Γ | u inside]`.
    pub fn step_matrix(&self) -> &DenseMatrix {
        &self.step_matrix
    }

    pub fn factorization(&self) -> &LuFactorization {
        &self.step_lu
    }

    /// Right-hand side for step `k` given `u^{k−1}`, `q^{k−1}`, the nodal
    /// combination `s = −ϑM^k − ½(g^k + g^{k−1})` premultiplied by `D`, and
    /// the new boundary values.
    fn rhs(&self, u_prev: &[f64], q_prev: &[f64], d_source: &[f64], boundary_u: &[f64]) -> Result<Vec<f64>> {
        let mut rhs = self.previous.matvec(u_prev)?;
        let gq = self.previous_flux.matvec(q_prev)?;
        let known = self.known_boundary.matvec(boundary_u)?;
        for (((r, a), b), c) in rhs.iter_mut().zip(gq).zip(d_source).zip(known) {
            *r += a + b - c;
        }
        Ok(rhs)
    }

    /// Splits a solution of the step system into `(q, u_interior)`.
    pub fn solve(&self, rhs: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        let x = self.step_lu.solve(rhs)?;
        let n = self.n_boundary;
        Ok((x[..n].to_vec(), x[n..].to_vec()))
    }
}

/// Runs the DRBEM march. The history uses the node order of [`RbfBasis`].
pub fn drbem_time_march(
    system: &DrbemSystem,
    scheme: &FractionalScheme,
    problem: &TestProblem,
) -> Result<SolutionHistory> {
    if problem.kappa != scheme.kappa {
        return Err(Error::Config(format!(
            "problem has kappa = {} but the scheme uses {}",
            problem.kappa, scheme.kappa
        )));
    }
    let stepper = DrbemStepper::new(system, scheme)?;
    let n = system.n_boundary();
    let nodes = system.nodes();
    let theta = scheme.theta();

    let initial = nodes.iter().map(|&p| problem.initial(p)).collect();
    let velocity = nodes.iter().map(|&p| problem.velocity(p)).collect();
    let mut history = SolutionHistory::new(initial, velocity)?;
    let mut q: Vec<f64> = system
        .mesh
        .elements
        .iter()
        .map(|e| problem.initial_gradient(e.midpoint).dot(e.normal))
        .collect();
    let mut g_prev: Vec<f64> = nodes.iter().map(|&p| problem.forcing(p, 0.0)).collect();

    for k in 1..=scheme.n_steps {
        let t = scheme.time(k);
        let g_now: Vec<f64> = nodes.iter().map(|&p| problem.forcing(p, t)).collect();
        let memory = memory_sum(scheme, &history, k)?;
        let source: Vec<f64> = memory
            .iter()
            .zip(&g_now)
            .zip(&g_prev)
            .map(|((m, g1), g0)| -theta * m - 0.5 * (g1 + g0))
            .collect();
        let d_source = system.d.matvec(&source)?;
        let boundary_u: Vec<f64> = nodes[..n].iter().map(|&p| problem.boundary(p, t)).collect();
        let rhs = stepper.rhs(history.latest(), &q, &d_source, &boundary_u)?;
        let (q_new, interior) = stepper.solve(&rhs)?;
        let mut u = boundary_u;
        u.extend(interior);
        history.push(u)?;
        q = q_new;
        g_prev = g_now;
    }
    Ok(history)
}
