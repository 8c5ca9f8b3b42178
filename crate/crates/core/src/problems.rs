//! Manufactured test problems and the RMS error norm.
//!
//! Every problem carries its exact solution so that Dirichlet data, initial
//! data and error norms come from one source. The forcings satisfy
//! `D_t^α u = κ∇²u + g` with the standard Caputo derivative
//! `D_t^α t^β = Γ(β+1)/Γ(β+1−α) t^{β−α}`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::geometry::{Domain, Point};
use crate::specfun::gamma_positive;
use crate::{Error, Result};

type SpaceTimeFn = Arc<dyn Fn(Point, f64) -> f64 + Send + Sync>;
type SpaceFn = Arc<dyn Fn(Point) -> f64 + Send + Sync>;
type GradientFn = Arc<dyn Fn(Point) -> Point + Send + Sync>;

/// A Dirichlet initial-boundary value problem with a known solution.
#[derive(Clone)]
pub struct TestProblem {
    pub name: String,
    pub domain: Domain,
    pub kappa: f64,
    exact: SpaceTimeFn,
    forcing: SpaceTimeFn,
    boundary: SpaceTimeFn,
    velocity: SpaceFn,
    initial_gradient: GradientFn,
}

impl fmt::Debug for TestProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestProblem")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("kappa", &self.kappa)
            .finish_non_exhaustive()
    }
}

impl TestProblem {
    /// Problem with exact solution `exact` and forcing `forcing`.
    ///
    /// Boundary data defaults to the exact solution, `ψ` and `∇φ` to zero.
    pub fn new(
        name: impl Into<String>,
        domain: Domain,
        kappa: f64,
        exact: impl Fn(Point, f64) -> f64 + Send + Sync + 'static,
        forcing: impl Fn(Point, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        let exact: SpaceTimeFn = Arc::new(exact);
        Self {
            name: name.into(),
            domain,
            kappa,
            boundary: exact.clone(),
            exact,
            forcing: Arc::new(forcing),
            velocity: Arc::new(|_| 0.0),
            initial_gradient: Arc::new(|_| Point::default()),
        }
    }

    pub fn with_velocity(mut self, psi: impl Fn(Point) -> f64 + Send + Sync + 'static) -> Self {
        self.velocity = Arc::new(psi);
        self
    }

    /// Gradient of `φ`, used for the initial boundary flux of the DRBEM march.
    pub fn with_initial_gradient(
        mut self,
        grad: impl Fn(Point) -> Point + Send + Sync + 'static,
    ) -> Self {
        self.initial_gradient = Arc::new(grad);
        self
    }

    pub fn with_boundary(mut self, data: impl Fn(Point, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.boundary = Arc::new(data);
        self
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    pub fn exact(&self, p: Point, t: f64) -> f64 {
        (self.exact)(p, t)
    }

    pub fn forcing(&self, p: Point, t: f64) -> f64 {
        (self.forcing)(p, t)
    }

    /// Dirichlet data on `Γ`.
    pub fn boundary(&self, p: Point, t: f64) -> f64 {
        (self.boundary)(p, t)
    }

    /// `φ = u(·, 0)`.
    pub fn initial(&self, p: Point) -> f64 {
        (self.exact)(p, 0.0)
    }

    /// `ψ = ∂u/∂t(·, 0)`.
    pub fn velocity(&self, p: Point) -> f64 {
        (self.velocity)(p)
    }

    pub fn initial_gradient(&self, p: Point) -> Point {
        (self.initial_gradient)(p)
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 1.0 && alpha < 2.0 {
        Ok(())
    } else {
        Err(Error::Config(format!("test problems need 1 < alpha < 2, got {alpha}")))
    }
}

/// `u = t^{2+α} sin x sin y` on `[0, π]²`.
pub fn problem_1(alpha: f64) -> Result<TestProblem> {
    check_alpha(alpha)?;
    let half_gamma = 0.5 * gamma_positive(3.0 + alpha);
    Ok(TestProblem::new(
        "problem-1",
        Domain::Rectangle { x0: 0.0, y0: 0.0, x1: PI, y1: PI },
        1.0,
        move |p, t| t.powf(2.0 + alpha) * p.x.sin() * p.y.sin(),
        move |p, t| p.x.sin() * p.y.sin() * (half_gamma * t * t + 2.0 * t.powf(2.0 + alpha)),
    ))
}

/// `u = e^{x+y} t²` on the unit disk.
pub fn problem_2(alpha: f64) -> Result<TestProblem> {
    check_alpha(alpha)?;
    let c = 1.0 / gamma_positive(3.0 - alpha);
    Ok(TestProblem::new(
        "problem-2",
        Domain::Disk { center: Point::new(0.0, 0.0), radius: 1.0 },
        1.0,
        |p, t| (p.x + p.y).exp() * t * t,
        move |p, t| 2.0 * (p.x + p.y).exp() * (c * t.powf(2.0 - alpha) - t * t),
    ))
}

/// `u = cos(π(x+y)) t²` on a caller-supplied region (default: [`Domain::l_shape`]).
pub fn problem_3(alpha: f64, region: Option<Domain>) -> Result<TestProblem> {
    check_alpha(alpha)?;
    let domain = region.unwrap_or_else(Domain::l_shape);
    domain.validate()?;
    let c = 1.0 / gamma_positive(3.0 - alpha);
    Ok(TestProblem::new(
        "problem-3",
        domain,
        1.0,
        |p, t| (PI * (p.x + p.y)).cos() * t * t,
        move |p, t| 2.0 * (PI * (p.x + p.y)).cos() * (c * t.powf(2.0 - alpha) + PI * PI * t * t),
    ))
}

/// Problem selected by its number (1, 2 or 3).
pub fn by_number(number: u8, alpha: f64, region: Option<Domain>) -> Result<TestProblem> {
    match number {
        1 => problem_1(alpha),
        2 => problem_2(alpha),
        3 => problem_3(alpha, region),
        _ => Err(Error::Config(format!("unknown test problem {number}; expected 1, 2 or 3"))),
    }
}

/// Identically zero data on `domain`.
pub fn zero_problem(domain: Domain) -> TestProblem {
    TestProblem::new("zero", domain, 1.0, |_, _| 0.0, |_, _| 0.0)
}

/// `√(Σ (u_i − ũ_i)² / L)`.
pub fn rms_error(numeric: &[f64], exact: &[f64]) -> Result<f64> {
    if numeric.len() != exact.len() {
        return Err(Error::Usage(format!(
            "rms error needs equal lengths, got {} and {}",
            numeric.len(),
            exact.len()
        )));
    }
    if numeric.is_empty() {
        return Err(Error::Usage("rms error needs at least one point".into()));
    }
    let sum: f64 = numeric.iter().zip(exact).map(|(a, b)| (a - b).powi(2)).sum();
    Ok((sum / numeric.len() as f64).sqrt())
}
