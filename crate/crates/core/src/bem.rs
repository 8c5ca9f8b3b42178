//! Constant-element BEM for the modified Helmholtz equation
//! `∇²u − k²u = ω` and the time march built on it.
//!
//! The fundamental solution is `G = −K₀(kr)/2π`, so that `(∇² − k²)G = δ`.
//! Green's second identity then gives, for a source `P` with free-term
//! coefficient `c = β/2π`,
//!
//! ```text
//! c u(P) + ∫_Γ G q dΓ − ∫_Γ u ∂G/∂n dΓ = ∫_Ω ω G dΩ.
//! ```
//!
//! With `H̄_ik = ∫_{Γ_k} ∂G/∂n` and `G_ik = ∫_{Γ_k} G` the boundary rows read
//! `G q = (H̄ − ½I) u + F` and interior points follow from
//! `u(P) = Σ H̄_Pk u_k − Σ G_Pk q_k + F(P)`.
//!
//! The domain term is evaluated as `Σ_j (ω_j − ω_P) G(P_j, P) S_j + ω_P B(P)`
//! where `B(P) = ∫_Ω G(·, P)` is turned into a boundary integral through the
//! auxiliary function `w` with `∇²w − k²w = 1` and `w(P, P) = 0`.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::geometry::{BoundaryElement, BoundaryMesh, InteriorCellSet, Point};
use crate::linalg::{dot, lu_factor, DenseMatrix, LuFactorization};
use crate::problems::TestProblem;
use crate::quadrature::{gauss16, rule_for};
use crate::specfun::{bessel_k01, log_element_integral};
use crate::timefrac::{helmholtz_coefficients, rhs_f, FractionalScheme, SolutionHistory};
use crate::{Error, Result};

const TWO_PI: f64 = 2.0 * PI;

/// The modified Helmholtz fundamental solution for a fixed `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HelmholtzKernel {
    k_wave: f64,
}

impl HelmholtzKernel {
    pub fn new(k_wave: f64) -> Result<Self> {
        if !(k_wave > 0.0) || !k_wave.is_finite() {
            return Err(Error::Domain(format!("wave number must be finite and positive, got {k_wave}")));
        }
        Ok(Self { k_wave })
    }

    pub fn k_wave(&self) -> f64 {
        self.k_wave
    }

    /// `G(field, source) = −K₀(kr)/2π`.
    pub fn g(&self, field: Point, source: Point) -> Result<f64> {
        let r = separation(field, source)?;
        Ok(-bessel_k01(self.k_wave * r).0 / TWO_PI)
    }

    /// `∂G/∂n` at `field` for the unit `normal`.
    pub fn dg_dn(&self, field: Point, source: Point, normal: Point) -> Result<f64> {
        let r = separation(field, source)?;
        let k1 = bessel_k01(self.k_wave * r).1;
        Ok(self.k_wave / TWO_PI * k1 * (field - source).dot(normal) / r)
    }

    /// `(G, ∂G/∂n)` without the coincidence check; `r` must be positive.
    #[inline]
    fn both(&self, d: Point, r: f64, normal: Point) -> (f64, f64) {
        let (k0, k1) = bessel_k01(self.k_wave * r);
        (-k0 / TWO_PI, self.k_wave / TWO_PI * k1 * d.dot(normal) / r)
    }
}

fn separation(field: Point, source: Point) -> Result<f64> {
    let r = field.distance(source);
    if r == 0.0 {
        return Err(Error::Domain(format!(
            "kernel evaluated at coincident points ({}, {})",
            field.x, field.y
        )));
    }
    Ok(r)
}

/// `−K₀(k|field − source|)/2π`.
pub fn kernel_g(k_wave: f64, field: Point, source: Point) -> Result<f64> {
    HelmholtzKernel::new(k_wave)?.g(field, source)
}

/// `(k/2π) K₁(kr) ((field − source)·n)/r`.
pub fn kernel_dg_dn(k_wave: f64, field: Point, source: Point, normal: Point) -> Result<f64> {
    HelmholtzKernel::new(k_wave)?.dg_dn(field, source, normal)
}

/// `w(X, P) = (1/b)(1 − cosh(s(x₁ − P₁)))` with `s = √(−b)`, solving
/// `∇²w + b w = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuxiliaryW {
    pub b: f64,
    pub s: f64,
}

impl AuxiliaryW {
    pub fn new(b: f64) -> Result<Self> {
        if !(b < 0.0) || !b.is_finite() {
            return Err(Error::Domain(format!("auxiliary function needs finite b < 0, got {b}")));
        }
        Ok(Self { b, s: (-b).sqrt() })
    }

    /// The function used with the kernel of wave number `k`: `b = −k²`.
    pub fn for_wave_number(k_wave: f64) -> Result<Self> {
        Self::new(-k_wave * k_wave)
    }

    pub fn value(&self, x: Point, p: Point) -> f64 {
        (1.0 - (self.s * (x.x - p.x)).cosh()) / self.b
    }

    pub fn gradient(&self, x: Point, p: Point) -> Point {
        Point::new(-self.s / self.b * (self.s * (x.x - p.x)).sinh(), 0.0)
    }

    pub fn normal_derivative(&self, x: Point, p: Point, normal: Point) -> f64 {
        self.gradient(x, p).dot(normal)
    }
}

/// Linear map from nodal `ω` to the domain integral at a fixed list of
/// sources: `F_i = Σ_j K_ij ω_j + ω_{P_i} (B_i − Σ_j K_ij)`.
#[derive(Debug, Clone)]
struct DomainOperator {
    weights: DenseMatrix,
    free: Vec<f64>,
}

impl DomainOperator {
    fn apply(&self, omega_cells: &[f64], omega_sources: &[f64]) -> Vec<f64> {
        (0..self.weights.rows())
            .map(|i| dot(self.weights.row(i), omega_cells) + omega_sources[i] * self.free[i])
            .collect()
    }
}

/// Assembled boundary system together with the precomputed interior and
/// domain-integral operators for one cell set.
///
/// Nodal vectors passed to [`BemSystem::solve_step`] and the march use the
/// layout `[boundary midpoints…, cell points…]`.
#[derive(Debug, Clone)]
pub struct BemSystem {
    kernel: HelmholtzKernel,
    aux: AuxiliaryW,
    mesh: BoundaryMesh,
    cells: InteriorCellSet,
    h: DenseMatrix,
    g: DenseMatrix,
    g_lu: LuFactorization,
    boundary_domain: DomainOperator,
    interior_h: DenseMatrix,
    interior_g: DenseMatrix,
    interior_domain: DomainOperator,
}

impl BemSystem {
    /// Builds `H = H̄ − ½I`, `G`, the factorization of `G` and the operators
    /// needed to evaluate the solution at the cell points.
    pub fn assemble(mesh: &BoundaryMesh, cells: &InteriorCellSet, k_wave: f64) -> Result<Self> {
        let kernel = HelmholtzKernel::new(k_wave)?;
        let aux = AuxiliaryW::for_wave_number(k_wave)?;
        if mesh.len() < 3 {
            return Err(Error::Config(format!("a closed boundary needs at least 3 elements, got {}", mesh.len())));
        }
        if cells.points.len() != cells.weights.len() {
            return Err(Error::Usage("cell points and weights differ in length".into()));
        }
        if let Some(p) = cells.points.iter().find(|p| !mesh.contains(**p)) {
            return Err(Error::Domain(format!(
                "cell point ({}, {}) is not strictly inside the boundary mesh",
                p.x, p.y
            )));
        }
        let n = mesh.len();
        let l = cells.len();
        let mut this = Self {
            kernel,
            aux,
            mesh: mesh.clone(),
            cells: cells.clone(),
            h: DenseMatrix::zeros(n, n),
            g: DenseMatrix::zeros(n, n),
            g_lu: lu_factor(&DenseMatrix::identity(1))?,
            boundary_domain: DomainOperator { weights: DenseMatrix::zeros(0, l), free: Vec::new() },
            interior_h: DenseMatrix::zeros(l, n),
            interior_g: DenseMatrix::zeros(l, n),
            interior_domain: DomainOperator { weights: DenseMatrix::zeros(0, l), free: Vec::new() },
        };

        let midpoints = mesh.midpoints();
        let (h, g) = this.influence_rows(&midpoints, true);
        this.h = h;
        for i in 0..n {
            this.h[(i, i)] -= 0.5;
        }
        this.g = g;
        this.g_lu = lu_factor(&this.g)?;
        this.boundary_domain = this.domain_operator(&midpoints, true);

        let (ih, ig) = this.influence_rows(&cells.points, false);
        this.interior_h = ih;
        this.interior_g = ig;
        this.interior_domain = this.domain_operator(&cells.points, false);
        Ok(this)
    }

    pub fn kernel(&self) -> HelmholtzKernel {
        self.kernel
    }

    pub fn mesh(&self) -> &BoundaryMesh {
        &self.mesh
    }

    pub fn cells(&self) -> &InteriorCellSet {
        &self.cells
    }

    /// `H̄ − ½I`.
    pub fn h(&self) -> &DenseMatrix {
        &self.h
    }

    pub fn g(&self) -> &DenseMatrix {
        &self.g
    }

    /// Boundary midpoints followed by cell points.
    pub fn nodes(&self) -> Vec<Point> {
        let mut nodes = self.mesh.midpoints();
        nodes.extend_from_slice(&self.cells.points);
        nodes
    }

    pub fn node_count(&self) -> usize {
        self.mesh.len() + self.cells.len()
    }

    /// `(∫_{Γ_k} G, ∫_{Γ_k} ∂G/∂n)` for a source at `source`. When the
    /// source is the element's own midpoint the log singularity is
    /// subtracted and integrated in closed form, and `H̄` vanishes.
    pub fn element_integrals(&self, element: &BoundaryElement, source: Point, own: bool) -> (f64, f64) {
        if own {
            return (self.singular_g(element), 0.0);
        }
        let rule = rule_for(element, source);
        let (mut g, mut h) = (0.0, 0.0);
        for (x, w) in rule.on_element(element) {
            let d = x - source;
            let (gv, hv) = self.kernel.both(d, d.norm(), element.normal);
            g += w * gv;
            h += w * hv;
        }
        (g, h)
    }

    /// `∫_{Γ_i} G ds` with the source at the element's midpoint.
    fn singular_g(&self, element: &BoundaryElement) -> f64 {
        let half = 0.5 * element.length;
        let regular = |s: f64| {
            let (k0, _) = bessel_k01(self.kernel.k_wave * s);
            (-k0 - s.ln()) / TWO_PI
        };
        // Symmetric about the midpoint: twice the integral over one half.
        let reg = 2.0 * gauss16().integrate(0.0, half, regular);
        reg + log_element_integral(element.length) / TWO_PI
    }

    fn influence_rows(&self, sources: &[Point], on_boundary: bool) -> (DenseMatrix, DenseMatrix) {
        let n = self.mesh.len();
        let rows: Vec<(Vec<f64>, Vec<f64>)> = sources
            .par_iter()
            .enumerate()
            .map(|(i, &p)| {
                let mut hr = vec![0.0; n];
                let mut gr = vec![0.0; n];
                for (k, e) in self.mesh.elements.iter().enumerate() {
                    let (g, h) = self.element_integrals(e, p, on_boundary && k == i);
                    gr[k] = g;
                    hr[k] = h;
                }
                (hr, gr)
            })
            .collect();
        let mut h = DenseMatrix::zeros(sources.len(), n);
        let mut g = DenseMatrix::zeros(sources.len(), n);
        for (i, (hr, gr)) in rows.into_iter().enumerate() {
            h.row_mut(i).copy_from_slice(&hr);
            g.row_mut(i).copy_from_slice(&gr);
        }
        (h, g)
    }

    /// `B(P) = ∫_Γ (G ∂w/∂n − w ∂G/∂n) dΓ`, equal to `∫_Ω G(·, P) dΩ`
    /// because `∇²w − k²w = 1` and `w(P, P) = 0`.
    ///
    /// `own` is the index of the element whose midpoint is `P`, if any.
    pub fn kernel_area_integral(&self, p: Point, own: Option<usize>) -> f64 {
        let mut total = 0.0;
        for (k, e) in self.mesh.elements.iter().enumerate() {
            if own == Some(k) {
                // ∂G/∂n vanishes along the element itself; G ∂w/∂n ~ r ln r.
                for (a, b) in [(e.start, e.midpoint), (e.midpoint, e.end)] {
                    let half = BoundaryElement { start: a, end: b, midpoint: a.lerp(b, 0.5), length: 0.5 * e.length, normal: e.normal };
                    for (x, w) in gauss16().on_element(&half) {
                        let d = x - p;
                        let (g, _) = self.kernel.both(d, d.norm(), e.normal);
                        total += w * g * self.aux.normal_derivative(x, p, e.normal);
                    }
                }
                continue;
            }
            for (x, w) in rule_for(e, p).on_element(e) {
                let d = x - p;
                let (g, dg) = self.kernel.both(d, d.norm(), e.normal);
                total += w * (g * self.aux.normal_derivative(x, p, e.normal) - self.aux.value(x, p) * dg);
            }
        }
        total
    }

    fn domain_operator(&self, sources: &[Point], on_boundary: bool) -> DomainOperator {
        let l = self.cells.len();
        let cells = &self.cells;
        let weights = DenseMatrix::from_rows_par(sources.len(), l, |i, row| {
            let p = sources[i];
            for (j, out) in row.iter_mut().enumerate() {
                let d = cells.points[j] - p;
                let r = d.norm();
                *out = if r == 0.0 { 0.0 } else { -bessel_k01(self.kernel.k_wave * r).0 / TWO_PI * cells.weights[j] };
            }
        });
        let free = sources
            .par_iter()
            .enumerate()
            .map(|(i, &p)| {
                let own = on_boundary.then_some(i);
                self.kernel_area_integral(p, own) - weights.row(i).iter().sum::<f64>()
            })
            .collect();
        DomainOperator { weights, free }
    }

    /// `Σ_j (ω_j − ω_P) G(P_j, P) S_j + ω_P B(P)` for an arbitrary source `P`.
    ///
    /// The free term `β/2π · w(P, P)` is absent because `w(P, P) = 0`.
    pub fn domain_integral(&self, omega_cells: &[f64], omega_p: f64, p: Point) -> Result<f64> {
        self.check_len("cell omega", omega_cells.len(), self.cells.len())?;
        let own = self.mesh.elements.iter().position(|e| e.midpoint == p);
        let mut sum = 0.0;
        for ((&x, &s), &om) in self.cells.points.iter().zip(&self.cells.weights).zip(omega_cells) {
            let d = x - p;
            let r = d.norm();
            if r > 0.0 {
                sum += (om - omega_p) * (-bessel_k01(self.kernel.k_wave * r).0 / TWO_PI) * s;
            }
        }
        Ok(sum + omega_p * self.kernel_area_integral(p, own))
    }

    fn check_len(&self, what: &str, got: usize, want: usize) -> Result<()> {
        if got != want {
            return Err(Error::Usage(format!("{what} has {got} entries, expected {want}")));
        }
        Ok(())
    }

    /// Boundary flux `q` from Dirichlet values and nodal `ω` (length `N + L`).
    pub fn solve_step(&self, boundary_u: &[f64], omega: &[f64]) -> Result<Vec<f64>> {
        let n = self.mesh.len();
        self.check_len("boundary values", boundary_u.len(), n)?;
        self.check_len("omega", omega.len(), self.node_count())?;
        let mut rhs = self.h.matvec(boundary_u)?;
        let f = self.boundary_domain.apply(&omega[n..], &omega[..n]);
        for (r, fi) in rhs.iter_mut().zip(f) {
            *r += fi;
        }
        self.g_lu.solve(&rhs)
    }

    /// Solution at the cell points using the precomputed interior operators.
    pub fn interior_at_cells(&self, boundary_u: &[f64], q: &[f64], omega: &[f64]) -> Result<Vec<f64>> {
        let n = self.mesh.len();
        self.check_len("boundary values", boundary_u.len(), n)?;
        self.check_len("flux", q.len(), n)?;
        self.check_len("omega", omega.len(), self.node_count())?;
        let hu = self.interior_h.matvec(boundary_u)?;
        let gq = self.interior_g.matvec(q)?;
        let f = self.interior_domain.apply(&omega[n..], &omega[n..]);
        Ok(hu.iter().zip(gq).zip(f).map(|((a, b), c)| a - b + c).collect())
    }

    /// Solution at arbitrary interior `targets`, where `omega_targets` holds
    /// `ω` at the targets and `omega` is nodal (length `N + L`).
    pub fn interior_eval(
        &self,
        boundary_u: &[f64],
        q: &[f64],
        omega: &[f64],
        targets: &[Point],
        omega_targets: &[f64],
    ) -> Result<Vec<f64>> {
        let n = self.mesh.len();
        self.check_len("boundary values", boundary_u.len(), n)?;
        self.check_len("flux", q.len(), n)?;
        self.check_len("omega", omega.len(), self.node_count())?;
        self.check_len("target omega", omega_targets.len(), targets.len())?;
        if let Some(p) = targets.iter().find(|p| !self.mesh.contains(**p)) {
            return Err(Error::Domain(format!(
                "target ({}, {}) is on or outside the boundary",
                p.x, p.y
            )));
        }
        targets
            .par_iter()
            .zip(omega_targets)
            .map(|(&p, &om)| {
                let mut u = 0.0;
                for (k, e) in self.mesh.elements.iter().enumerate() {
                    let (g, h) = self.element_integrals(e, p, false);
                    u += h * boundary_u[k] - g * q[k];
                }
                Ok(u + self.domain_integral(&omega[n..], om, p)?)
            })
            .collect()
    }
}

/// Runs the BEM time march on `mesh` and `cells`. The returned history uses
/// the node layout of [`BemSystem::nodes`].
pub fn bem_time_march(
    scheme: &FractionalScheme,
    problem: &TestProblem,
    mesh: &BoundaryMesh,
    cells: &InteriorCellSet,
) -> Result<SolutionHistory> {
    let (_, k_wave) = helmholtz_coefficients(scheme);
    let system = BemSystem::assemble(mesh, cells, k_wave)?;
    march_with(&system, scheme, problem)
}

/// Time march on an already assembled system, whose wave number must match
/// the scheme.
pub fn march_with(system: &BemSystem, scheme: &FractionalScheme, problem: &TestProblem) -> Result<SolutionHistory> {
    let (_, k_wave) = helmholtz_coefficients(scheme);
    if (system.kernel.k_wave - k_wave).abs() > 1e-12 * k_wave {
        return Err(Error::Usage(format!(
            "system assembled for k = {} but the scheme needs k = {k_wave}",
            system.kernel.k_wave
        )));
    }
    if problem.kappa != scheme.kappa {
        return Err(Error::Config(format!(
            "problem has kappa = {} but the scheme uses {}",
            problem.kappa, scheme.kappa
        )));
    }
    let n = system.mesh.len();
    let nodes = system.nodes();
    let initial = nodes.iter().map(|&p| problem.initial(p)).collect();
    let velocity = nodes.iter().map(|&p| problem.velocity(p)).collect();
    let mut history = SolutionHistory::new(initial, velocity)?;
    for step in 1..=scheme.n_steps {
        let t_mid = scheme.mid_time(step);
        let t = scheme.time(step);
        let g_mid: Vec<f64> = nodes.iter().map(|&p| problem.forcing(p, t_mid)).collect();
        let mut omega = rhs_f(scheme, &history, step, &g_mid)?;
        for o in &mut omega {
            *o /= scheme.kappa;
        }
        let boundary_u: Vec<f64> = nodes[..n].iter().map(|&p| problem.boundary(p, t)).collect();
        let q = system.solve_step(&boundary_u, &omega)?;
        let interior = system.interior_at_cells(&boundary_u, &q, &omega)?;
        let mut u = boundary_u;
        u.extend(interior);
        history.push(u)?;
    }
    Ok(history)
}
