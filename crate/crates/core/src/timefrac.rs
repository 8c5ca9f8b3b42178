//! Caputo time discretization for `1 < α < 2`.
//!
//! With `t_k = kτ` the Caputo derivative at `t_{n−½}` is approximated by
//!
//! ```text
//! ϑ [ a₀ (uⁿ − uⁿ⁻¹) − Σ_{l=1}^{n−1} (a_{n−l−1} − a_{n−l}) (uˡ − uˡ⁻¹) − τ a_{n−1} ψ ],
//! ϑ = 1 / (τ² Γ(2−α)),   a_k = τ^{2−α}/(2−α) [(k+1)^{2−α} − k^{2−α}],
//! ```
//!
//! so that each step of `D_t^α u = κ∇²u + g` becomes the modified Helmholtz
//! problem `κ∇²uⁿ + b uⁿ = Fⁿ⁻¹` with `b = −a₀ ϑ`.

use crate::specfun::gamma_positive;
use crate::{Error, Result};

/// `a_k` for `k = 0..count`.
pub fn caputo_weights(alpha: f64, tau: f64, count: usize) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::Config(format!("time step must be positive, got {tau}")));
    }
    if count == 0 {
        return Err(Error::Config("at least one weight is required".into()));
    }
    let e = 2.0 - alpha;
    let scale = tau.powf(e) / e;
    Ok((0..count)
        .map(|k| {
            let k = k as f64;
            scale * ((k + 1.0).powf(e) - k.powf(e))
        })
        .collect())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 1.0 && alpha < 2.0 {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "fractional order must satisfy 1 < alpha < 2, got {alpha}"
        )))
    }
}

/// Time-stepping parameters together with the precomputed weights.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalScheme {
    pub alpha: f64,
    pub tau: f64,
    pub kappa: f64,
    pub n_steps: usize,
    pub weights: Vec<f64>,
}

impl FractionalScheme {
    pub fn new(alpha: f64, tau: f64, kappa: f64, n_steps: usize) -> Result<Self> {
        if !(kappa > 0.0) || !kappa.is_finite() {
            return Err(Error::Config(format!("diffusivity must be positive, got {kappa}")));
        }
        if n_steps == 0 {
            return Err(Error::Config("at least one time step is required".into()));
        }
        let weights = caputo_weights(alpha, tau, n_steps)?;
        Ok(Self { alpha, tau, kappa, n_steps, weights })
    }

    /// Scheme reaching `final_time` in steps of `tau`; the ratio must be an integer.
    pub fn for_final_time(alpha: f64, tau: f64, kappa: f64, final_time: f64) -> Result<Self> {
        let n_steps = steps_to(tau, final_time)?;
        Self::new(alpha, tau, kappa, n_steps)
    }

    /// `ϑ = 1 / (τ² Γ(2−α))`.
    pub fn theta(&self) -> f64 {
        1.0 / (self.tau * self.tau * gamma_positive(2.0 - self.alpha))
    }

    pub fn time(&self, n: usize) -> f64 {
        n as f64 * self.tau
    }

    /// `(t_n + t_{n−1}) / 2`.
    pub fn mid_time(&self, n: usize) -> f64 {
        (n as f64 - 0.5) * self.tau
    }
}

/// Number of steps of size `tau` in `final_time`, requiring an integer ratio.
pub fn steps_to(tau: f64, final_time: f64) -> Result<usize> {
    if !(tau > 0.0) || !(final_time > 0.0) || !tau.is_finite() || !final_time.is_finite() {
        return Err(Error::Config(format!(
            "time step and final time must be positive, got tau={tau}, T={final_time}"
        )));
    }
    let ratio = final_time / tau;
    let n = ratio.round();
    if n < 1.0 || (ratio - n).abs() > 1e-9 * ratio.max(1.0) {
        return Err(Error::Config(format!(
            "final time {final_time} is not a positive integer multiple of tau {tau}"
        )));
    }
    Ok(n as usize)
}

/// `(b, k)` of `κ∇²u + b u = F`, i.e. `∇²u − k²u = F/κ`.
pub fn helmholtz_coefficients(scheme: &FractionalScheme) -> (f64, f64) {
    let b = -scheme.weights[0] * scheme.theta();
    let k_wave = (-b / scheme.kappa).sqrt();
    (b, k_wave)
}

/// Nodal solution vectors `u⁰ … uⁿ` plus the initial velocity `ψ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionHistory {
    steps: Vec<Vec<f64>>,
    velocity: Vec<f64>,
}

impl SolutionHistory {
    /// Starts a history from `u⁰ = φ` and `ψ` at the same nodes.
    pub fn new(initial: Vec<f64>, velocity: Vec<f64>) -> Result<Self> {
        if initial.len() != velocity.len() {
            return Err(Error::Usage(format!(
                "initial field has {} nodes but velocity has {}",
                initial.len(),
                velocity.len()
            )));
        }
        Ok(Self { steps: vec![initial], velocity })
    }

    pub fn push(&mut self, step: Vec<f64>) -> Result<()> {
        if step.len() != self.node_count() {
            return Err(Error::Usage(format!(
                "step has {} nodes, history has {}",
                step.len(),
                self.node_count()
            )));
        }
        self.steps.push(step);
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.velocity.len()
    }

    /// Number of completed steps (history length minus one).
    pub fn steps_completed(&self) -> usize {
        self.steps.len() - 1
    }

    pub fn step(&self, n: usize) -> &[f64] {
        &self.steps[n]
    }

    pub fn latest(&self) -> &[f64] {
        self.steps.last().expect("history is never empty")
    }

    pub fn velocity(&self) -> &[f64] {
        &self.velocity
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.steps.iter().map(Vec::as_slice)
    }
}

/// `Σ_{l=1}^{n−1} (a_{n−l−1} − a_{n−l}) (uˡ − uˡ⁻¹) + τ a_{n−1} ψ`, the part of
/// the discrete Caputo bracket that depends only on completed steps other
/// than `uⁿ⁻¹`.
pub fn memory_sum(scheme: &FractionalScheme, history: &SolutionHistory, n: usize) -> Result<Vec<f64>> {
    check_step(scheme, history, n)?;
    let a = &scheme.weights;
    let mut out: Vec<f64> = history
        .velocity()
        .iter()
        .map(|psi| scheme.tau * a[n - 1] * psi)
        .collect();
    for l in 1..n {
        let c = a[n - l - 1] - a[n - l];
        let (cur, prev) = (history.step(l), history.step(l - 1));
        for ((o, u1), u0) in out.iter_mut().zip(cur).zip(prev) {
            *o += c * (u1 - u0);
        }
    }
    Ok(out)
}

fn check_step(scheme: &FractionalScheme, history: &SolutionHistory, n: usize) -> Result<()> {
    if n == 0 || n > scheme.n_steps {
        return Err(Error::Usage(format!(
            "step {n} outside 1..={} of the scheme",
            scheme.n_steps
        )));
    }
    if history.steps_completed() + 1 < n {
        return Err(Error::Usage(format!(
            "step {n} needs u^0..u^{} but only {} steps are stored",
            n - 1,
            history.steps_completed()
        )));
    }
    Ok(())
}

/// Right-hand side `Fⁿ⁻¹ = −ϑ [a₀ uⁿ⁻¹ + memory] − g^{n−½}` at every node.
pub fn rhs_f(
    scheme: &FractionalScheme,
    history: &SolutionHistory,
    n: usize,
    g_mid: &[f64],
) -> Result<Vec<f64>> {
    if g_mid.len() != history.node_count() {
        return Err(Error::Usage(format!(
            "forcing has {} nodes, history has {}",
            g_mid.len(),
            history.node_count()
        )));
    }
    let mut f = memory_sum(scheme, history, n)?;
    let theta = scheme.theta();
    let a0 = scheme.weights[0];
    for ((fi, u), g) in f.iter_mut().zip(history.step(n - 1)).zip(g_mid) {
        *fi = -theta * (a0 * u + *fi) - g;
    }
    Ok(f)
}

/// Residual of the semi-discrete equation for an exact scalar trajectory:
///
/// ```text
/// ϑ [a₀ (u(t_n) − u(t_{n−1})) − memory] − κ ∇²u(t_n) − g(t_{n−½})
/// ```
///
/// `u`, `laplacian` and `forcing` are functions of time at one fixed point.
pub fn verify_scheme_residual(
    u: impl Fn(f64) -> f64,
    laplacian: impl Fn(f64) -> f64,
    forcing: impl Fn(f64) -> f64,
    psi: f64,
    scheme: &FractionalScheme,
    n: usize,
) -> Result<f64> {
    let mut history = SolutionHistory::new(vec![u(0.0)], vec![psi])?;
    for l in 1..n {
        history.push(vec![u(scheme.time(l))])?;
    }
    let memory = memory_sum(scheme, &history, n)?[0];
    let jump = u(scheme.time(n)) - u(scheme.time(n - 1));
    let discrete = scheme.theta() * (scheme.weights[0] * jump - memory);
    Ok(discrete - scheme.kappa * laplacian(scheme.time(n)) - forcing(scheme.mid_time(n)))
}
