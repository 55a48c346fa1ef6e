//! One runner per experiment. Each parses and validates all parameters
//! before computing, then returns tables plus any violated invariants.

use qlab_core::classical::{self, OrbitPoint};
use qlab_core::detector::{
    detection_probability_spectral, detection_probability_time, march, solve_fourier, solve_volterra, DetectorConfig,
    DetectorKernels, MomentumGrid, OccupationSampler, RadialPacket,
};
use qlab_core::meanfield::{critical_temperature, phase_diagram};
use qlab_core::qdomino::flip_probability;
use qlab_core::radiating::{ContinuumModes, RadiatingParams, RadiatingSystem, SigmaProfile};
use qlab_core::verify::{self, KNOWN_UNATTAINABLE};
use qlab_core::xychain::occupation;

use crate::config::{grid, Key, Params};
use crate::error::CliError;
use crate::table::{col, num, Table};

pub struct Experiment {
    pub id: &'static str,
    pub about: &'static str,
    pub keys: &'static [Key],
    pub run: fn(&Params) -> Result<Report, CliError>,
}

#[derive(Debug, Default)]
pub struct Report {
    pub tables: Vec<Table>,
    /// Lines for standard output.
    pub summary: Vec<String>,
    /// Invariants that did not hold; outputs are still written.
    pub violations: Vec<String>,
}

const fn key(name: &'static str, default: &'static str, help: &'static str) -> Key {
    Key { name, default, help }
}

pub const EXPERIMENTS: &[Experiment] = &[
    Experiment {
        id: "domino",
        about: "Flip probabilities of the quantum domino chain",
        keys: &[
            key("j", "2..6", "site range a..b"),
            key("t", "0..50", "time range a..b"),
            key("dt", "0.5", "time step"),
        ],
        run: domino,
    },
    Experiment {
        id: "xy",
        about: "Site occupations of the X-Y chain after the step state",
        keys: &[
            key("j", "-5..5", "site range a..b"),
            key("t", "0..20", "time range a..b"),
            key("dt", "0.5", "time step"),
            key("kappa", "1", "hopping strength"),
        ],
        run: xy,
    },
    Experiment {
        id: "detector",
        about: "Particle detector: returning amplitude, occupations, detection probability",
        keys: &[
            key("gamma", "0.5", "coupling"),
            key("dt", "0.02", "time step of the convolution solvers"),
            key("horizon", "200", "final time T"),
            key("phi_width", "1.25", "width of the coupling packet"),
            key("psi_width", "1.0", "width of the incident packet"),
            key("psi_center", "0.8", "momentum centre of the incident packet"),
            key("sample_dt", "1.0", "spacing of the written rows"),
        ],
        run: detector,
    },
    Experiment {
        id: "radiate",
        about: "Decay of a finite chain coupled to a discretized continuum",
        keys: &[
            key("n", "6", "chain length N"),
            key("m", "400", "number of continuum modes M"),
            key("v", "1.5", "coupling strength"),
            key("a", "1", "dispersion scale"),
            key("b", "0.5", "momentum threshold"),
            key("profile", "ramp", "coupling profile: ramp|mollified"),
            key("margin", "0.5", "eps0 above its sufficient threshold"),
            key("n0", "0", "initially excited chain level"),
            key("t", "0..100", "time range a..b"),
            key("dt", "0.5", "time step"),
        ],
        run: radiate,
    },
    Experiment {
        id: "meanfield",
        about: "BCS phase diagram from the gap equation",
        keys: &[
            key("eps", "0.25", "single-particle energy"),
            key("lambda", "1", "pairing strength"),
            key("T", "0.01..0.6", "temperature range a..b"),
            key("dT", "0.01", "temperature step"),
        ],
        run: meanfield,
    },
    Experiment {
        id: "orbit",
        about: "Quantum versus classical circles on a Heisenberg orbit",
        keys: &[
            key("q", "0.5", "initial position"),
            key("p", "0.3", "initial momentum"),
            key("lambda", "0.5", "orbit scale"),
            key("a", "1", "renormalization constant"),
            key("b", "none", "if set, use a = lambda^2 exp(b/(2 lambda^2)) instead of a"),
            key("t", "0..10", "time range a..b"),
            key("dt", "0.05", "time step"),
        ],
        run: orbit,
    },
    Experiment {
        id: "verify",
        about: "Run the acceptance criteria and write acceptance.csv",
        keys: &[key("criteria", "1..15", "criterion range a..b")],
        run: run_verify,
    },
];

pub fn find(id: &str) -> Option<&'static Experiment> {
    EXPERIMENTS.iter().find(|e| e.id == id)
}

fn header(table: &mut Table, experiment: &str, params: &Params) {
    table.comment(format!("qlab {experiment}"));
    table.comment(format!("parameters: {}", params.summary()));
}

fn domino(p: &Params) -> Result<Report, CliError> {
    let (j0, j1) = p.range_i64("j")?;
    let (t0, t1) = p.range_f64("t")?;
    let dt = p.positive("dt")?;
    if j0 < 1 {
        return Err(CliError::Config(format!("`j` must start at 1 or more, got {j0}")));
    }
    if t0 < 0.0 {
        return Err(CliError::Config(format!("`t` must be non-negative, got {t0}")));
    }
    let mut table = Table::new(
        "domino",
        vec![col("j", "site index"), col("t", "time"), col("flip_probability", "1 - sum_{m<j} [m J_m(2t)/t]^2")],
    );
    header(&mut table, "domino", p);
    let mut report = Report::default();
    for j in j0..=j1 {
        for t in grid(t0, t1, dt) {
            let f = flip_probability(j as usize, t)?;
            if !(-1e-12..=1.0 + 1e-12).contains(&f) {
                report.violations.push(format!("flip probability {f} outside [0, 1] at j = {j}, t = {t}"));
            }
            table.push(vec![j.to_string(), num(t), num(f)]);
        }
    }
    report.tables.push(table);
    Ok(report)
}

fn xy(p: &Params) -> Result<Report, CliError> {
    let (j0, j1) = p.range_i64("j")?;
    let (t0, t1) = p.range_f64("t")?;
    let dt = p.positive("dt")?;
    let kappa = p.f64("kappa")?;
    let mut table =
        Table::new("xy", vec![col("j", "site index"), col("t", "time"), col("occupation", "sum_{k>j} J_k(kappa t)^2")]);
    header(&mut table, "xy", p);
    let mut report = Report::default();
    for j in j0..=j1 {
        for t in grid(t0, t1, dt) {
            let n = occupation(j, t, kappa)?;
            if !(-1e-12..=1.0 + 1e-12).contains(&n) {
                report.violations.push(format!("occupation {n} outside [0, 1] at j = {j}, t = {t}"));
            }
            table.push(vec![j.to_string(), num(t), num(n)]);
        }
    }
    report.tables.push(table);
    Ok(report)
}

fn detector(p: &Params) -> Result<Report, CliError> {
    let gamma = p.f64("gamma")?;
    let dt = p.positive("dt")?;
    let horizon = p.positive("horizon")?;
    let sample_dt = p.positive("sample_dt")?;
    let grid_p = MomentumGrid::shared_default();
    let cfg = DetectorConfig {
        gamma,
        phi: RadialPacket::gaussian(grid_p.clone(), p.positive("phi_width")?, 0.0)?,
        psi: RadialPacket::gaussian(grid_p, p.positive("psi_width")?, p.f64("psi_center")?)?,
        dt,
        horizon,
    };
    cfg.validate()?;
    let kernels = DetectorKernels::new(&cfg)?;
    let volterra = solve_volterra(&kernels);
    let fourier = solve_fourier(&kernels)?;
    let solution = march(&kernels);
    let w = detection_probability_time(&kernels, &solution);
    let w_spectral = detection_probability_spectral(&kernels, &fourier);
    let d_mn = volterra.marching.l2_distance(&volterra.neumann)?;
    let d_mf = volterra.marching.l2_distance(&fourier.solution)?;
    let d_nf = volterra.neumann.l2_distance(&fourier.solution)?;

    let mut report = Report::default();
    for (name, d) in [("marching/neumann", d_mn), ("marching/fourier", d_mf), ("neumann/fourier", d_nf)] {
        if !(d < 1e-5) {
            report.violations.push(format!("{name} solutions differ by {d:e} in L2"));
        }
    }
    let mut table = Table::new(
        "detector",
        vec![
            col("t", "time"),
            col("re_F", "Re F(t), F = F0 - gamma^2 K * F by trapezoid marching"),
            col("im_F", "Im F(t)"),
            col("p0", "1 - gamma^2 (F, f * F) on [0, t]"),
            col("p0_direct", "squared norm of the no-detection vector"),
            col("chain", "sum_{m>=1} omega_t(P_m)"),
            col("total", "p0 + chain"),
        ],
    );
    header(&mut table, "detector", p);
    table.comment(format!("gamma_g_l1: {}", num(2.0 * kernels.coupling_norm())));
    table.comment(format!("w_time: {}", num(w)));
    table.comment(format!("w_spectral: {}", num(w_spectral)));
    table.comment(format!("l2_marching_neumann: {:e}", d_mn));
    table.comment(format!("l2_marching_fourier: {:e}", d_mf));
    table.comment(format!("l2_neumann_fourier: {:e}", d_nf));
    let sampler = OccupationSampler::new(&kernels, &solution)?;
    let last = kernels.len() - 1;
    let every = ((sample_dt / dt).round() as usize).max(1);
    let mut steps: Vec<usize> = (0..=last).step_by(every).collect();
    if steps.last() != Some(&last) {
        steps.push(last);
    }
    for step in steps {
        let s = sampler.snapshot(step)?;
        let chain: f64 = s.chain.iter().sum();
        if !((s.total() - 1.0).abs() < 1e-6) {
            report.violations.push(format!("total probability {} at t = {}", s.total(), s.t));
        }
        let f = solution.values[step];
        table.push(vec![num(s.t), num(f.re), num(f.im), num(s.p0), num(s.p0_direct), num(chain), num(s.total())]);
    }
    report.summary.push(format!("w = {w} (time domain), {w_spectral} (spectral)"));
    report.tables.push(table);
    Ok(report)
}

fn radiate(p: &Params) -> Result<Report, CliError> {
    let n = p.usize("n")?;
    let m = p.usize("m")?;
    let profile = match p.choice("profile", &["ramp", "mollified"])? {
        "ramp" => SigmaProfile::Ramp,
        _ => SigmaProfile::Mollified,
    };
    let params =
        RadiatingParams::with_margin(n, p.f64("v")?, p.positive("a")?, p.positive("b")?, profile, p.f64("margin")?);
    params.validate()?;
    let n0 = p.usize("n0")?;
    if n0 >= n {
        return Err(CliError::Config(format!("`n0` must be below n = {n}, got {n0}")));
    }
    let (t0, t1) = p.range_f64("t")?;
    let dt = p.positive("dt")?;
    if m == 0 {
        return Err(CliError::Config("`m` must be at least 1".into()));
    }
    let sys = RadiatingSystem::new(params, ContinuumModes::with_default_window(&params, m)?)?;
    let t_rec = sys.modes.recurrence_time();
    let mut table = Table::new(
        "radiate",
        vec![
            col("t", "time"),
            col("survival", "sum_{n<N} |<beta_n|exp(-itH)|beta_n0>|^2"),
            col("decay", "sum_k |<beta_N(k)|exp(-itH)|beta_n0>|^2"),
        ],
    );
    header(&mut table, "radiate", p);
    table.comment(format!("eps0: {}", num(params.eps0)));
    table.comment(format!("lambda_max: {}", num(sys.modes.energies.last().copied().unwrap_or(0.0))));
    table.comment(format!("recurrence_time: {}", num(t_rec)));
    let mut report = Report::default();
    for t in grid(t0, t1, dt) {
        let pop = sys.populations(n0, t)?;
        if !((pop.total() - 1.0).abs() < 1e-10) {
            report.violations.push(format!("populations sum to {} at t = {t}", pop.total()));
        }
        table.push(vec![num(t), num(pop.survival.iter().sum()), num(pop.decay)]);
    }
    if t1 >= t_rec {
        report.summary.push(format!("note: times beyond the recurrence time {t_rec} are not faithful"));
    }
    report.tables.push(table);
    Ok(report)
}

fn meanfield(p: &Params) -> Result<Report, CliError> {
    let eps = p.f64("eps")?;
    let lambda = p.f64("lambda")?;
    let (t0, t1) = p.range_f64("T")?;
    let dt = p.positive("dT")?;
    if t0 <= 0.0 {
        return Err(CliError::Config(format!("`T` must be positive, got {t0}")));
    }
    let tc = critical_temperature(eps, lambda).ok();
    let mut temps = grid(t0, t1, dt);
    if let Some(tc) = tc.filter(|tc| (t0..=t1).contains(tc)) {
        temps.push(tc);
        temps.sort_by(f64::total_cmp);
        temps.dedup();
    }
    let rows = phase_diagram(eps, lambda, &temps)?;
    let mut table = Table::new(
        "meanfield",
        vec![
            col("T", "temperature"),
            col("critical", "1 on the row T = T_c = eps / atanh(2 eps / lambda)"),
            col("a_normal", "gap a(F) on the normal solution F = (0, 0, tanh(eps/T)/2)"),
            col("a_super", "root a > eps of 2a = lambda tanh(a/T)"),
            col("f3_super", "F_3 = eps/lambda on the superconducting circle"),
            col("f_plus_abs", "|F_+| = sqrt(a^2 - eps^2)/lambda"),
            col("residual", "|2a - lambda tanh(a/T)|"),
        ],
    );
    header(&mut table, "meanfield", p);
    table.comment(match tc {
        Some(tc) => format!("T_c: {}", num(tc)),
        None => "T_c: none (2 eps >= lambda)".to_string(),
    });
    for r in rows {
        let critical = tc == Some(r.temperature);
        let (a, f3, fp, res) = match r.super_branch {
            Some(b) => (num(b.a), num(b.f3), num(b.f_plus_abs), num(b.residual)),
            None => (String::new(), String::new(), String::new(), String::new()),
        };
        table.push(vec![num(r.temperature), u8::from(critical).to_string(), num(r.a_normal), a, f3, fp, res]);
    }
    let mut report = Report::default();
    if let Some(tc) = tc {
        report.summary.push(format!("T_c = {tc}"));
    }
    report.tables.push(table);
    Ok(report)
}

fn orbit(p: &Params) -> Result<Report, CliError> {
    let lambda = p.positive("lambda")?;
    let z0 = OrbitPoint::from_qp(p.f64("q")?, p.f64("p")?, lambda)?;
    let a = match p.str("b") {
        "none" | "" => p.f64("a")?,
        _ => classical::critical_renormalization(lambda, p.f64("b")?),
    };
    if a == 0.0 {
        return Err(CliError::Config("renormalization `a` must be non-zero".into()));
    }
    let (t0, t1) = p.range_f64("t")?;
    let dt = p.positive("dt")?;
    let (centre, radius) = classical::quantum_circle(&z0);
    let mut table = Table::new(
        "orbit",
        vec![
            col("t", "time"),
            col("re_z_quantum", "Re [(1 - f/a) z + (f/a) exp(-ita/lambda^2) z]"),
            col("im_z_quantum", "Im of the same"),
            col("re_z_classical", "Re exp(-itf/lambda^2) z, f = a exp(-|z|^2/(2 lambda^2))"),
            col("im_z_classical", "Im of the same"),
        ],
    );
    header(&mut table, "orbit", p);
    table.comment(format!("a: {}", num(a)));
    table.comment(format!("f: {}", num(classical::orbit_energy(&z0, a))));
    table.comment(format!("quantum_period: {}", num(classical::quantum_period(&z0, a))));
    table.comment(format!("classical_period: {}", num(classical::classical_period(&z0, a))));
    let mut report = Report::default();
    for t in grid(t0, t1, dt) {
        let zq = classical::quantum_trajectory(&z0, t, a)?;
        let zc = classical::classical_trajectory(&z0, t, a);
        let off = ((zq - centre).norm() - radius).abs().max((zc.norm() - z0.z.norm()).abs());
        if !(off < 1e-10 * (1.0 + z0.z.norm())) {
            report.violations.push(format!("trajectory leaves its circle by {off:e} at t = {t}"));
        }
        table.push(vec![num(t), num(zq.re), num(zq.im), num(zc.re), num(zc.im)]);
    }
    report.tables.push(table);
    Ok(report)
}

fn run_verify(p: &Params) -> Result<Report, CliError> {
    let (c0, c1) = p.range_i64("criteria")?;
    if c0 < 1 || c1 > verify::CRITERIA as i64 {
        return Err(CliError::Config(format!("`criteria` must lie in 1..{}, got {c0}..{c1}", verify::CRITERIA)));
    }
    let mut table = Table::new(
        "acceptance",
        vec![
            col("criterion", "acceptance criterion number"),
            col("title", "short description"),
            col("check", "sub-check name"),
            col("value", "measured value"),
            col("requirement", "pinned bound"),
            col("status", "PASS or FAIL"),
        ],
    );
    header(&mut table, "verify", p);
    let mut report = Report::default();
    for id in c0 as u8..=c1 as u8 {
        let r = verify::run(id)?;
        for c in &r.checks {
            let status = if c.passed() { "PASS" } else { "FAIL" };
            table.push(vec![
                id.to_string(),
                r.title.into(),
                c.name.clone(),
                num(c.value),
                c.requirement(),
                status.into(),
            ]);
        }
        let mut line = format!("criterion {id:>2} {} {}", if r.passed() { "PASS" } else { "FAIL" }, r.title);
        for c in r.checks.iter().filter(|c| !c.passed()) {
            let known = KNOWN_UNATTAINABLE.contains(&(id, c.name.as_str()));
            line.push_str(&format!(
                "; {} = {} (required {}){}",
                c.name,
                num(c.value),
                c.requirement(),
                if known { " [known unattainable]" } else { "" }
            ));
        }
        report.summary.push(line);
        for c in r.unexpected_failures() {
            report.violations.push(format!("criterion {id} {}: {} not {}", c.name, num(c.value), c.requirement()));
        }
    }
    report.tables.push(table);
    Ok(report)
}
