//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.
//!
//! Run with `cargo test -p fracbem-cli --test acceptance`.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use fracbem::bem::BemSystem;
use fracbem::drbem::{particular_solution, rbf_value};
use fracbem::geometry::{discretize_boundary, interior_cells, Domain, Point};
use fracbem::oracle::caputo_derivative;
use fracbem::problems::{problem_1, problem_2, problem_3, TestProblem};
use fracbem::specfun::{bessel_k0, bessel_k1, gamma};
use fracbem::timefrac::caputo_weights;
use fracbem_cli::{run, Method, RunConfig};

// (x, K0(x), K1(x)) at 40 significant digits, rounded to double.
const BESSEL: [(f64, f64, f64); 12] = [
    (1e-06, 13.93144207362642, 999999.9999927843),
    (0.001, 7.023688800562382, 999.9962381560856),
    (0.1, 2.4270690247020164, 9.853844780870606),
    (0.5, 0.9244190712276659, 1.656441120003301),
    (1.0, 0.42102443824070834, 0.6019072301972346),
    (1.999, 0.11403383058923292, 0.14004984207710966),
    (2.0, 0.11389387274953344, 0.13986588181652243),
    (2.001, 0.11375409873668463, 0.13968218830176757),
    (5.0, 0.0036910983340425942, 0.004044613445452165),
    (10.0, 1.778006231616765e-05, 1.8648773453825585e-05),
    (20.0, 5.741237815336525e-10, 5.883057969557038e-10),
    (50.0, 3.4101677497894956e-23, 3.4441022267175555e-23),
];

const GAMMA: [(f64, f64); 10] = [
    (0.1, 9.51350769866873),
    (0.25, 3.625609908221908),
    (0.5, 1.772453850905516),
    (0.75, 1.2254167024651776),
    (1.25, 0.906402477055477),
    (1.5, 0.886226925452758),
    (1.75, 0.9190625268488832),
    (3.25, 2.5492569667185294),
    (5.5, 52.34277778455352),
    (10.0, 362880.0),
];

const K1_ONE: f64 = 0.6019072301972346;

const TAUS: [f64; 4] = [0.5, 0.25, 0.125, 0.0625];
const REF_BEM_TAU: [f64; 4] = [1.4937e-2, 7.6730e-3, 3.8253e-3, 1.8655e-3];
const REF_DRBEM_TAU: [f64; 4] = [7.3113e-2, 2.2348e-2, 6.7127e-3, 1.9858e-3];
const REF_DISK_N: [f64; 4] = [3.9578e-3, 8.0834e-4, 3.1444e-4, 1.4864e-4];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn sci(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|v| format!("{v:.4e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn ratios(values: &[f64]) -> Vec<f64> {
    values.windows(2).map(|w| w[0] / w[1]).collect()
}

fn decreasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] < w[0])
}

fn within_factor(got: &[f64], reference: &[f64], factor: f64) -> bool {
    got.iter().zip(reference).all(|(g, r)| g / r <= factor && r / g <= factor)
}

fn rms_sweep(config: RunConfig) -> Result<Vec<f64>, String> {
    let results = run(&config).map_err(|e| e.to_string())?;
    Ok(results.iter().map(|r| r.record.rms_error).collect())
}

fn tau_sweep(method: Method, reference: &[f64], min_ratio: f64) -> Outcome {
    let config = RunConfig {
        method,
        problem: 1,
        alpha: 1.25,
        n_elements: 80,
        sweep_tau: Some(TAUS.to_vec()),
        ..RunConfig::default()
    };
    match rms_sweep(config) {
        Err(e) => outcome(false, e),
        Ok(rms) => {
            let r = ratios(&rms);
            let close = within_factor(&rms, reference, 3.0);
            let rate = r.iter().all(|v| *v >= min_ratio);
            outcome(
                close && rate,
                format!("rms={} reference={} ratios={} factor3={close} ratio>={min_ratio}:{rate}", sci(&rms), sci(reference), sci(&r)),
            )
        }
    }
}

fn criterion_1() -> Outcome {
    tau_sweep(Method::Bem, &REF_BEM_TAU, 1.8)
}

fn criterion_2() -> Outcome {
    tau_sweep(Method::Drbem, &REF_DRBEM_TAU, 2.5)
}

fn criterion_3() -> Outcome {
    let config = RunConfig {
        method: Method::Bem,
        problem: 2,
        alpha: 1.25,
        tau: 0.05,
        sweep_n: Some(vec![20, 40, 80, 160]),
        ..RunConfig::default()
    };
    match rms_sweep(config) {
        Err(e) => outcome(false, e),
        Ok(rms) => {
            let close = within_factor(&rms, &REF_DISK_N, 3.0);
            let down = decreasing(&rms);
            outcome(close && down, format!("rms={} reference={} factor3={close} decreasing={down}", sci(&rms), sci(&REF_DISK_N)))
        }
    }
}

fn criterion_4() -> Outcome {
    let sweep = |method, tau| {
        rms_sweep(RunConfig {
            method,
            problem: 1,
            alpha: 1.25,
            tau,
            sweep_n: Some(vec![20, 40, 80, 160]),
            ..RunConfig::default()
        })
    };
    match (sweep(Method::Bem, 0.05), sweep(Method::Drbem, 0.002)) {
        (Ok(bem), Ok(drbem)) => {
            let (b, d) = (decreasing(&bem), decreasing(&drbem));
            outcome(b && d, format!("bem(tau=1/20)={} decreasing={b}; drbem(tau=1/500)={} decreasing={d}", sci(&bem), sci(&drbem)))
        }
        (Err(e), _) | (_, Err(e)) => outcome(false, e),
    }
}

fn criterion_5a() -> Outcome {
    let rel = |a: f64, b: f64| ((a - b) / b).abs();
    let mut bessel = 0.0f64;
    for (x, k0, k1) in BESSEL {
        bessel = bessel.max(rel(bessel_k0(x).unwrap(), k0)).max(rel(bessel_k1(x).unwrap(), k1));
    }
    let gamma_err = GAMMA.iter().fold(0.0f64, |a, &(x, g)| a.max(rel(gamma(x).unwrap(), g)));
    outcome(bessel <= 1e-10 && gamma_err <= 1e-12, format!("bessel max rel={bessel:.2e} gamma max rel={gamma_err:.2e}"))
}

fn criterion_5b() -> Outcome {
    let mut worst = 0.0f64;
    for alpha in [1.01, 1.25, 1.5, 1.75, 1.99] {
        for tau in [1e-3, 0.05, 0.1, 0.5, 1.0] {
            for n in [1, 2, 10, 100, 1000] {
                let sum: f64 = caputo_weights(alpha, tau, n).unwrap().iter().sum();
                let want = (n as f64 * tau).powf(2.0 - alpha) / (2.0 - alpha);
                worst = worst.max(((sum - want) / want).abs());
            }
        }
    }
    outcome(worst <= 1e-12, format!("max rel={worst:.2e}"))
}

fn bem_system(domain: &Domain, n: usize, m: usize, k: f64) -> BemSystem {
    let mesh = discretize_boundary(domain, n).unwrap();
    let cells = interior_cells(domain, m).unwrap();
    BemSystem::assemble(&mesh, &cells, k).unwrap()
}

fn unit_disk() -> Domain {
    Domain::disk(Point::new(0.0, 0.0), 1.0).unwrap()
}

/// Max relative (flux, interior) errors for `u = e^{x₁}` on the unit disk.
fn patch_errors(n: usize) -> (f64, f64) {
    let sys = bem_system(&unit_disk(), n, n / 8, 1.0);
    let mesh = sys.mesh();
    let u_b: Vec<f64> = mesh.midpoints().iter().map(|p| p.x.exp()).collect();
    let omega = vec![0.0; sys.node_count()];
    let q = sys.solve_step(&u_b, &omega).unwrap();
    let exact_q: Vec<f64> = mesh.elements.iter().map(|e| e.midpoint.x.exp() * e.normal.x).collect();
    let q_scale = exact_q.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let q_err = q.iter().zip(&exact_q).fold(0.0f64, |a, (x, y)| a.max((x - y).abs())) / q_scale;
    let u = sys.interior_at_cells(&u_b, &q, &omega).unwrap();
    let u_err = u.iter().zip(&sys.cells().points).fold(0.0f64, |a, (v, p)| a.max(((v - p.x.exp()) / p.x.exp()).abs()));
    (q_err, u_err)
}

fn criterion_5c() -> Outcome {
    let errors: Vec<(f64, f64)> = [20, 40, 80, 160].iter().map(|&n| patch_errors(n)).collect();
    let flux: Vec<f64> = errors.iter().map(|e| e.0).collect();
    let interior: Vec<f64> = errors.iter().map(|e| e.1).collect();
    let pass = flux[2] <= 1e-2 && interior[2] <= 1e-2 && decreasing(&flux) && decreasing(&interior);
    outcome(pass, format!("flux={} interior={} (N=20..160)", sci(&flux), sci(&interior)))
}

fn criterion_5d() -> Outcome {
    let exact = -(1.0 - K1_ONE);
    let errors: Vec<f64> = [(40, 5), (80, 10), (160, 20)]
        .iter()
        .map(|&(n, m)| {
            let sys = bem_system(&unit_disk(), n, m, 1.0);
            let ones = vec![1.0; sys.cells().len()];
            let got = sys.domain_integral(&ones, 1.0, Point::new(0.0, 0.0)).unwrap();
            ((got - exact) / exact).abs()
        })
        .collect();
    let r = ratios(&errors);
    let pass = errors[1] <= 1e-3 && r.iter().all(|v| *v >= 2.0);
    outcome(pass, format!("rel errors={} ratios={}", sci(&errors), sci(&r)))
}

fn criterion_5e() -> Outcome {
    let h = 1e-4;
    let c = Point::new(0.0, 0.0);
    let mut worst = 0.0f64;
    for i in 0..40 {
        for j in 0..40 {
            let x = Point::new(-2.0 + 0.1 * i as f64 + 0.013, -2.0 + 0.1 * j as f64 + 0.007);
            if x.norm() < 0.05 {
                continue;
            }
            let f = |p: Point| particular_solution(c, p);
            let lap = (f(Point::new(x.x + h, x.y)) + f(Point::new(x.x - h, x.y)) + f(Point::new(x.x, x.y + h))
                + f(Point::new(x.x, x.y - h))
                - 4.0 * f(x))
                / (h * h);
            worst = worst.max((lap - rbf_value(c, x)).abs());
        }
    }
    outcome(worst <= 1e-6, format!("max |lap f - mu|={worst:.2e}"))
}

fn laplacian(p: &TestProblem, x: Point, t: f64) -> f64 {
    let h = 1e-2;
    let u = |dx: f64, dy: f64| p.exact(Point::new(x.x + dx, x.y + dy), t);
    let axis = |e: (f64, f64)| {
        (-u(2.0 * h * e.0, 2.0 * h * e.1) + 16.0 * u(h * e.0, h * e.1) - 30.0 * u(0.0, 0.0)
            + 16.0 * u(-h * e.0, -h * e.1)
            - u(-2.0 * h * e.0, -2.0 * h * e.1))
            / (12.0 * h * h)
    };
    axis((1.0, 0.0)) + axis((0.0, 1.0))
}

fn max_residual(p: &TestProblem, alpha: f64, profile: impl Fn(f64) -> f64, second: impl Fn(f64) -> f64 + Copy) -> f64 {
    let (lo, hi) = p.domain.bounding_box();
    let mut worst = 0.0f64;
    for i in 1..8 {
        for j in 1..8 {
            let x = Point::new(lo.x + (hi.x - lo.x) * i as f64 / 8.0, lo.y + (hi.y - lo.y) * j as f64 / 8.0);
            if !p.domain.contains(x) {
                continue;
            }
            let t = 0.1 + 0.12 * ((i + j) % 8) as f64;
            let caputo = p.exact(x, t) / profile(t) * caputo_derivative(second, alpha, t, 10_000);
            worst = worst.max((caputo - p.kappa * laplacian(p, x, t) - p.forcing(x, t)).abs());
        }
    }
    worst
}

fn criterion_5f() -> Outcome {
    let mut worst = [0.0f64; 3];
    for alpha in [1.25, 1.5, 1.75] {
        let p1 = problem_1(alpha).unwrap();
        worst[0] = worst[0].max(max_residual(&p1, alpha, |t| t.powf(2.0 + alpha), move |t| {
            (2.0 + alpha) * (1.0 + alpha) * t.powf(alpha)
        }));
        let p2 = problem_2(alpha).unwrap();
        worst[1] = worst[1].max(max_residual(&p2, alpha, |t| t * t, |_| 2.0));
        let p3 = problem_3(alpha, None).unwrap();
        worst[2] = worst[2].max(max_residual(&p3, alpha, |t| t * t, |_| 2.0));
    }
    outcome(worst.iter().all(|w| *w <= 1e-6), format!("max residual problems 1..3={}", sci(&worst)))
}

fn run_binary(dir: &Path, tag: &str) -> Result<(String, Vec<u8>), String> {
    let table = dir.join(format!("table_{tag}.csv"));
    let field = dir.join(format!("field_{tag}.csv"));
    let status = Command::new(env!("CARGO_BIN_EXE_fracbem"))
        .args(["--method", "drbem", "--problem", "3", "--n-elements", "24", "--tau", "1/4", "--sweep-alpha", "1.25,1.75"])
        .arg("--out")
        .arg(&table)
        .arg("--field-out")
        .arg(&field)
        .status()
        .map_err(|e| e.to_string())?;
    if !status.success() {
        return Err(format!("binary exited with {status}"));
    }
    let table_text = std::fs::read_to_string(&table).map_err(|e| e.to_string())?;
    // wall_time_s is the last column and is the only one allowed to differ.
    let stripped: Vec<String> = table_text
        .lines()
        .map(|l| l.rsplit_once(',').map_or(l, |(head, _)| head).to_string())
        .collect();
    let field_bytes = std::fs::read(&field).map_err(|e| e.to_string())?;
    Ok((stripped.join("\n"), field_bytes))
}

fn criterion_5g() -> Outcome {
    let dir = match tempfile::tempdir() {
        Ok(d) => d,
        Err(e) => return outcome(false, e.to_string()),
    };
    match (run_binary(dir.path(), "a"), run_binary(dir.path(), "b")) {
        (Ok(a), Ok(b)) => {
            let table_same = a.0 == b.0;
            let field_same = a.1 == b.1;
            outcome(
                table_same && field_same,
                format!("table identical (excluding wall time)={table_same} field bytes identical={field_same} ({} bytes)", a.1.len()),
            )
        }
        (Err(e), _) | (_, Err(e)) => outcome(false, e),
    }
}

fn criterion_6() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for method in [Method::Bem, Method::Drbem] {
        for alpha in [1.25, 1.75] {
            let config = RunConfig {
                method,
                problem: 3,
                alpha,
                tau: 0.1,
                sweep_n: Some(vec![50, 100, 200]),
                ..RunConfig::default()
            };
            match rms_sweep(config) {
                Err(e) => return outcome(false, e),
                Ok(rms) => {
                    let down = decreasing(&rms);
                    pass &= down;
                    parts.push(format!("{} alpha={alpha}: {} decreasing={down}", method.as_str(), sci(&rms)));
                }
            }
        }
    }
    outcome(pass, parts.join("; "))
}

fn main() -> ExitCode {
    let criteria: [(&str, &str, fn() -> Outcome); 12] = [
        ("1", "BEM problem 1, tau sweep at N=80: within factor 3 of reference, ratios >= 1.8", criterion_1),
        ("2", "DRBEM problem 1, tau sweep at N=80: within factor 3 of reference, ratios >= 2.5", criterion_2),
        ("3", "BEM problem 2 (disk), N sweep at tau=1/20: within factor 3, decreasing", criterion_3),
        ("4", "problem 1, N sweep: BEM at tau=1/20 and DRBEM at tau=1/500 decreasing", criterion_4),
        ("5a", "Bessel K0/K1 rel <= 1e-10, Gamma rel <= 1e-12", criterion_5a),
        ("5b", "Caputo weight telescoping identity rel <= 1e-12", criterion_5b),
        ("5c", "BEM patch test u=e^x on disk: <= 1e-2 at N=80, decreasing", criterion_5c),
        ("5d", "domain integral of 1 over disk: rel <= 1e-3, ratio >= 2", criterion_5d),
        ("5e", "particular solution Laplacian equals basis function within 1e-6", criterion_5e),
        ("5f", "manufactured solutions satisfy the PDE within 1e-6", criterion_5f),
        ("5g", "CLI output is deterministic across runs", criterion_5g),
        ("6", "problem 3 (L-shape), N=50/100/200, both methods decreasing", criterion_6),
    ];
    let mut failed = 0;
    let mut total = 0;
    for (id, description, check) in criteria {
        let start = Instant::now();
        let o = check();
        total += 1;
        if !o.pass {
            failed += 1;
        }
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {id:<3} {description} ({:.1}s)\n        {}", start.elapsed().as_secs_f64(), o.detail);
    }
    println!("\nacceptance: {} passed, {failed} failed", total - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
