use crate::args::*;
use crate::report::{num, Report};
use barron_core::{
    cole_hopf_solve, heat_full, heat_homogeneous_spacetime, read_net, solve_poisson_activation_pair, solve_screened_poisson, write_net,
    ActivationPairProblem, ColeHopfConfig, HeatOptions, HeatProblem, Net, NormCertificate, ScreenedPoissonProblem, ShallowRep,
};
use barron_counterexamples as cx;
use barron_oracle::{rate_experiment, residual_check, ErrorNorm, GridSpec, Measure, Operator, RateReport};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("cannot read network {path}: {source}")]
    ReadNet { path: String, source: barron_core::Error },
    #[error(transparent)]
    Core(#[from] barron_core::Error),
    #[error(transparent)]
    Oracle(#[from] barron_oracle::OracleError),
    #[error(transparent)]
    Counterexample(#[from] cx::CounterexampleError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn load(path: &Path) -> Result<Net> {
    read_net(path).map_err(|source| CliError::ReadNet { path: path.display().to_string(), source })
}

fn load_shallow(path: &Path) -> Result<ShallowRep<f64>> {
    match load(path)? {
        Net::Shallow(r) => Ok(r),
        Net::Deep(_) => Err(CliError::ReadNet { path: path.display().to_string(), source: barron_core::Error::Format("expected a shallow network".into()) }),
    }
}

fn cert_row(r: &mut Report, label: &str, c: &NormCertificate) {
    r.row(vec![label.to_string(), num(c.input_norm), num(c.output_norm), num(c.paper_bound), num(c.ratio)]);
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--{name} must be positive, got {v}")))
    }
}

pub fn run(cmd: &Command) -> Result<()> {
    let config = format!("{cmd:?}");
    match cmd {
        Command::Solve(Solve::ScreenedPoisson(a)) => {
            positive("lambda", a.lambda)?;
            let rhs = load_shallow(&a.rhs)?;
            let sol = solve_screened_poisson(&ScreenedPoissonProblem { lambda: a.lambda, rhs }, a.n_quad)?;
            write_net(&a.out, &Net::Shallow(sol.rep))?;
            let mut r = Report::new(config, None, sol.certificate.formula, &["atom_index", "input_norm", "output_norm", "paper_bound", "ratio"]);
            for (i, c) in sol.per_atom.iter().enumerate() {
                cert_row(&mut r, &i.to_string(), c);
            }
            let c = &sol.certificate;
            r.footer("total", format!("input_norm={} output_norm={} paper_bound={} ratio={}", num(c.input_norm), num(c.output_norm), num(c.paper_bound), num(c.ratio)));
            r.emit(a.report.as_deref())?;
        }
        Command::Solve(Solve::PoissonPair(a)) => {
            let rhs = load_shallow(&a.rhs)?;
            let (rep, m) = solve_poisson_activation_pair(&ActivationPairProblem { rhs, alpha: a.alpha })?;
            write_net(&a.out, &Net::Shallow(rep))?;
            let mut r = Report::new(config, None, "solution_norm <= rhs_weighted_norm (|a|(|w|+|b|)^alpha / |w|^2 weights)", &["alpha", "rhs_norm", "rhs_weighted_norm", "solution_norm"]);
            r.row(vec![num(m.alpha), num(m.rhs_norm), num(m.rhs_weighted_norm), num(m.solution_norm)]);
            r.emit(a.report.as_deref())?;
        }
        Command::Solve(Solve::Heat(a)) => {
            let u0 = load_shallow(&a.u0)?;
            let opts = HeatOptions { hermite: a.hermite, relu_nodes: a.relu_nodes, time_nodes: a.timenodes };
            let cols = ["part", "input_norm", "output_norm", "paper_bound", "ratio"];
            if a.spacetime {
                if a.source.is_some() {
                    return Err(CliError::Usage("--spacetime covers the homogeneous problem only; drop --source".into()));
                }
                let rule = opts.rule_for(u0.activation())?;
                let (st, c) = heat_homogeneous_spacetime(&u0, &rule)?;
                write_net(&a.out, &Net::Shallow(st.rep))?;
                let mut r = Report::new(config, None, c.formula, &cols);
                cert_row(&mut r, "spacetime", &c);
                r.emit(a.report.as_deref())?;
            } else {
                let t = a.t.ok_or_else(|| CliError::Usage("--t is required unless --spacetime is given".into()))?;
                let source = a.source.as_deref().map(load_shallow).transpose()?;
                let sol = heat_full(&HeatProblem { u0, source }, t, &opts)?;
                write_net(&a.out, &Net::Shallow(sol.rep))?;
                let bound = match &sol.inhomogeneous {
                    Some(c) => format!("{}; {}", sol.homogeneous.formula, c.formula),
                    None => sol.homogeneous.formula.to_string(),
                };
                let mut r = Report::new(config, None, bound, &cols);
                cert_row(&mut r, "homogeneous", &sol.homogeneous);
                if let Some(c) = &sol.inhomogeneous {
                    cert_row(&mut r, "inhomogeneous", c);
                }
                r.emit(a.report.as_deref())?;
            }
        }
        Command::Solve(Solve::Hj(a)) => {
            let u0 = load_shallow(&a.u0)?;
            let cfg = ColeHopfConfig { n_mc: a.mc, seed: a.seed, exp_atoms: a.exp_atoms, log_atoms: a.log_atoms, radius: a.radius, t_max: a.t_max, range: None };
            let sol = cole_hopf_solve(&u0, &cfg)?;
            write_net(&a.out, &Net::Deep(sol.net.clone()))?;
            let c = &sol.certificate;
            let mut r = Report::new(config, Some(a.seed), "exp(beta_plus - beta_minus) * |u0|", &["quantity", "value"]);
            let rows = [
                ("u0_norm", c.u0_norm),
                ("beta_minus", c.range.beta_minus),
                ("beta_plus", c.range.beta_plus),
                ("delta", sol.delta),
                ("block_cert_0", c.block_certs[0]),
                ("block_cert_1", c.block_certs[1]),
                ("block_cert_2", c.block_certs[2]),
                ("deep_cert", c.deep_cert),
                ("exp_curvature", c.exp_curvature),
                ("exp_reference", c.exp_reference),
                ("log_curvature", c.log_curvature),
                ("log_reference", c.log_reference),
                ("w3_cert", c.w3_cert),
                ("paper_bound", c.paper_bound),
                ("ratio", c.ratio),
            ];
            for (k, v) in rows {
                r.row(vec![k.to_string(), num(v)]);
            }
            r.emit(a.report.as_deref())?;
        }
        Command::Verify(a) => verify(a, config)?,
        Command::Rates(a) => rates(a, config)?,
        Command::Counterexample(c) => counterexample(c, config)?,
        Command::Norm(a) => {
            let net = load(&a.net)?;
            match &net {
                Net::Shallow(r) => println!(
                    "kind=shallow activation={} input_dim={} atoms={} norm_cert={} rep_norm={}",
                    r.activation(),
                    r.input_dim(),
                    r.len(),
                    num(r.norm_cert()),
                    num(r.rep_norm())
                ),
                Net::Deep(d) => println!(
                    "kind=deep input_dim={} depth={} norm_cert={} block_certs={}",
                    d.input_dim(),
                    d.depth(),
                    num(d.norm_cert()),
                    d.block_certs().iter().map(|v| num(*v)).collect::<Vec<_>>().join(";")
                ),
            }
        }
    }
    Ok(())
}

fn verify(a: &VerifyArgs, config: String) -> Result<()> {
    let net = load(&a.net)?;
    let dim = net.input_dim();
    let grid = GridSpec::parse(&a.grid, dim).map_err(|e| CliError::Usage(e.to_string()))?;
    let rhs = a.rhs.as_deref().map(load).transpose()?;
    if let Some(f) = &rhs {
        if f.input_dim() != dim {
            return Err(CliError::Core(barron_core::Error::DimensionMismatch { expected: dim, got: f.input_dim() }));
        }
    }
    let (op, spacetime) = match a.op {
        OpKind::Screened => (Operator::Screened { lambda: a.lambda.ok_or_else(|| CliError::Usage("--lambda is required for --op screened".into()))? }, false),
        OpKind::Poisson => (Operator::Screened { lambda: 0.0 }, false),
        OpKind::Heat => (Operator::Heat, true),
        OpKind::Hj => (Operator::Hj, true),
    };
    // grid points are (t, x); space-time networks take (x, √t)
    let u = |p: &[f64]| -> f64 {
        if spacetime {
            let mut z = p[1..].to_vec();
            z.push(p[0].max(0.0).sqrt());
            net.eval(&z).unwrap_or(f64::NAN)
        } else {
            net.eval(p).unwrap_or(f64::NAN)
        }
    };
    let second = match (&rhs, a.rhs_second) {
        (Some(Net::Shallow(r)), true) => {
            if r.activation().deriv2(0.0f64).is_none() {
                return Err(CliError::Usage(format!("{} has no second derivative", r.activation())));
            }
            Some(r)
        }
        (Some(Net::Deep(_)), true) => return Err(CliError::Usage("--rhs-second needs a shallow rhs".into())),
        _ => None,
    };
    let f = |p: &[f64]| -> f64 {
        match (second, &rhs) {
            (Some(r), _) => r.atoms().iter().map(|at| at.a * r.activation().deriv2(at.pre_activation(p)).unwrap_or(f64::NAN)).sum(),
            (None, Some(f)) => f.eval(p).unwrap_or(f64::NAN),
            (None, None) => 0.0,
        }
    };
    let res = residual_check(&u, Some(&f), op, &grid)?;
    let mut r = Report::new(config, None, a.tol.map_or("none".to_string(), |t| format!("tol = {t}")), &["max_residual", "location", "points"]);
    r.row(vec![num(res.max_abs), res.location.iter().map(|v| num(*v)).collect::<Vec<_>>().join(";"), res.points.to_string()]);
    r.emit(a.report.as_deref())?;
    if let Some(tol) = a.tol {
        if !(res.max_abs <= tol) {
            return Err(CliError::Validation(format!("residual {} exceeds tolerance {tol}", num(res.max_abs))));
        }
    }
    Ok(())
}

fn rate_rows(r: &mut Report, label: Option<&str>, rep: &RateReport) {
    for e in &rep.entries {
        let mut row = label.map(|l| vec![l.to_string()]).unwrap_or_default();
        row.extend([e.m.to_string(), num(e.error), num(e.reference), e.seed_errors.iter().map(|v| num(*v)).collect::<Vec<_>>().join(";")]);
        r.row(row);
    }
}

fn slope_text(s: Option<f64>) -> String {
    s.map_or("undefined".into(), num)
}

fn rates(a: &RatesArgs, config: String) -> Result<()> {
    if a.seeds == 0 {
        return Err(CliError::Usage("--seeds must be at least 1".into()));
    }
    if a.m.is_empty() || a.m.windows(2).any(|w| w[0] >= w[1]) || a.m[0] == 0 {
        return Err(CliError::Usage("--m must be a strictly increasing list of positive widths".into()));
    }
    positive("radius", a.radius)?;
    let rep = load_shallow(&a.net)?;
    let seeds: Vec<u64> = (a.seed..a.seed + a.seeds).collect();
    let norm = match a.norm {
        NormKind::L2 => ErrorNorm::L2,
        NormKind::Linf => ErrorNorm::Linf,
    };
    let report = rate_experiment(&rep, &a.m, &Measure { radius: a.radius, n_samples: a.samples, seed: a.seed }, &seeds, norm)?;
    let bound = match norm {
        ErrorNorm::L2 => "max(1,R) * |f| / sqrt(m)",
        ErrorNorm::Linf => "d * max(1,R) * |f| / sqrt(m)",
    };
    let mut r = Report::new(config, Some(a.seed), bound, &["m", "error", "reference", "seed_errors"]);
    rate_rows(&mut r, None, &report);
    r.footer("norm_bound", num(report.norm_bound));
    r.footer("slope", slope_text(report.slope));
    r.footer("intercept", slope_text(report.intercept));
    r.emit(a.report.as_deref())?;
    if norm == ErrorNorm::L2 && !report.within_reference() {
        return Err(CliError::Validation("median subsample error exceeds |f|/sqrt(m)".into()));
    }
    Ok(())
}

fn counterexample(c: &Counterexample, config: String) -> Result<()> {
    match c {
        Counterexample::Ball(a) => {
            if a.seeds == 0 {
                return Err(CliError::Usage("--seeds must be at least 1".into()));
            }
            let p = cx::BallProblem::relu_first_coordinate(a.d)?;
            let cfg = cx::BallRateConfig {
                m_list: a.m.clone(),
                n_samples: a.samples,
                seeds: (a.seed..a.seed + a.seeds).collect(),
                ridge: a.ridge,
                control_t: a.control_t,
                h: a.h,
            };
            let rep = cx::ball_rate_experiment(&p, &cfg)?;
            let mut r = Report::new(config, Some(a.seed), "|target| / sqrt(m) (reference only)", &["arm", "m", "error", "reference", "seed_errors"]);
            rate_rows(&mut r, Some("ball"), &rep.ball);
            rate_rows(&mut r, Some("control"), &rep.control);
            r.footer("ball_slope", slope_text(rep.ball.slope));
            r.footer("control_slope", slope_text(rep.control.slope));
            for p in &rep.probes {
                r.footer(format!("probe rho={}", p.rho), format!("d1u_left={} d1u_right={} jump={}", num(p.left), num(p.right), num(p.jump())));
            }
            r.emit(a.out.as_deref())?;
        }
        Counterexample::Corner(a) => {
            let spec = cx::CornerSpec::new(a.k, a.theta).map_err(|e| CliError::Usage(e.to_string()))?;
            let radii: Vec<f64> = (1..=8).map(|k| 2f64.powi(-k)).collect();
            let fit = cx::gradient_exponent(&spec, &radii)?;
            let resid = cx::harmonic_residual(&spec, 1e-3, 0.1)?;
            let mut r = Report::new(config, None, "|grad u| = (k pi/theta) r^(k pi/theta - 1)", &["r", "sup_grad"]);
            for (rad, g) in &fit.samples {
                r.row(vec![num(*rad), num(*g)]);
            }
            r.footer("exponent", num(fit.exponent));
            r.footer("fd_exponent", num(fit.fd_exponent));
            r.footer("expected_exponent", num(spec.alpha() - 1.0));
            r.footer("harmonic_residual", num(resid));
            r.emit(a.out.as_deref())?;
        }
        Counterexample::Growth(a) => {
            let (e, sups) = cx::growth_diagnostic(&a.radii, a.d).map_err(|e| CliError::Usage(e.to_string()))?;
            let mut r = Report::new(config, None, "u = -max(0,x1)^3/6, sup_{|x|=R} |u| = R^3/6", &["R", "sup_abs_u"]);
            for (rad, s) in sups {
                r.row(vec![num(rad), num(s)]);
            }
            r.footer("exponent", num(e));
            r.emit(a.out.as_deref())?;
        }
        Counterexample::Ushape(a) => {
            let &[px, py] = a.probe.as_slice() else {
                return Err(CliError::Usage(format!("--probe takes two coordinates x,y, got {}", a.probe.len())));
            };
            let x = [px, py];
            let v = cx::ushape_eval(x)?;
            let show = |inside: bool, rep: &ShallowRep<f64>| if inside { num(rep.eval_unchecked(&x)) } else { "-".into() };
            println!("x,y,value,in_u1,in_u2,u1_rep,u2_rep");
            println!(
                "{},{},{},{},{},{},{}",
                num(x[0]),
                num(x[1]),
                num(v),
                cx::in_u1(x),
                cx::in_u2(x),
                show(cx::in_u1(x), &cx::u1_rep()),
                show(cx::in_u2(x), &cx::u2_rep())
            );
        }
    }
    Ok(())
}
