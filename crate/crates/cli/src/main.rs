mod manifest;
mod render;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use entconc::config;
use entconc::constraints::satisfies_counts;
use entconc::discretize::closeness_radii;
use entconc::oracle::{concentration_report, Criterion, EnumerationReport, DEFAULT_BUDGET};
use entconc::{
    compute_bound, jaynes_comparison, round_to_counts, scan_alpha, solve_maxent, theta_infinity, AlphaScan,
    BoundKind, BoundReport, ConstraintSystem, Error, MaxEntSolution, Problem, ToleranceSpec,
};

use manifest::RunManifest;
use render::{full, g6, render_csv, render_json, render_text, Format, Section};

#[derive(Parser)]
#[command(name = "entconc", version, about = "Entropy-concentration thresholds for linearly constrained allocations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Problem file (JSON)
    #[arg(long, global = true, conflicts_with_all = ["problem", "m"])]
    config: Option<PathBuf>,
    /// One of the bundled problems: die_unconstrained, die_mean, traffic, queue_mean, queue_bounded
    #[arg(long, global = true, conflicts_with = "m")]
    problem: Option<String>,
    /// Use the unconstrained problem on m cells
    #[arg(long, global = true)]
    m: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write the output here instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the maximum-entropy problem
    Solve {
        #[command(flatten)]
        common: Common,
    },
    /// Compute one of the six thresholds N
    Bound {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        eps: f64,
        #[arg(long, conflicts_with = "theta")]
        eta: Option<f64>,
        #[arg(long)]
        theta: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Round φ* to a count vector with total n
    Round {
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Enumerate all count vectors with total n and split them by a criterion
    Oracle {
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum)]
        criterion: CriterionArg,
        #[arg(long, conflicts_with = "theta")]
        eta: Option<f64>,
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// List every vector
        #[arg(long)]
        detail: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Tabulate both sides of the defining equation of N over α
    ScanAlpha {
        #[arg(long, value_enum, default_value_t = KindArg::Theorem1)]
        kind: KindArg,
        #[arg(long)]
        eps: f64,
        #[arg(long, conflicts_with = "theta")]
        eta: Option<f64>,
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long, default_value_t = 50)]
        grid: usize,
        #[command(flatten)]
        common: Common,
    },
    /// The classical χ² statement in the same terms
    Jaynes {
        /// number of independent equality constraints
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Theorem1,
    Theorem2,
    #[value(alias = "lemma_cor1", alias = "lemma-cor1")]
    FstarEntropy,
    #[value(alias = "lemma_cor2", alias = "lemma-cor2")]
    FstarNorm,
    Pd,
    Uniform,
}

impl KindArg {
    fn kind(self) -> BoundKind {
        match self {
            KindArg::Theorem1 => BoundKind::Theorem1,
            KindArg::Theorem2 => BoundKind::Theorem2,
            KindArg::FstarEntropy => BoundKind::LemmaCor1,
            KindArg::FstarNorm => BoundKind::LemmaCor2,
            KindArg::Pd => BoundKind::CorollaryPd,
            KindArg::Uniform => BoundKind::CorollaryUnif,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CriterionArg {
    Entropy,
    Norm,
}

/// Failures that end a run, with their exit status.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Lib(e) => match e {
                Error::Infeasible { .. } => 2,
                Error::SolverFailure { .. } | Error::Rejected(_) | Error::Root(_) => 3,
                Error::Validity { .. } => 4,
                Error::Budget { .. } => 5,
                _ => 1,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(s) => s.clone(),
            Failure::Lib(e) => e.to_string(),
        }
    }
}

type Run<T> = std::result::Result<T, Failure>;

struct Loaded {
    label: String,
    problem: Problem,
}

fn load(common: &Common) -> Run<Loaded> {
    if let Some(path) = &common.config {
        let problem = Problem::from_path(path)?;
        return Ok(Loaded { label: path.display().to_string(), problem });
    }
    if let Some(name) = &common.problem {
        let problem = config::bundled(name)?;
        return Ok(Loaded { label: format!("bundled:{name}"), problem });
    }
    if let Some(m) = common.m {
        let system = ConstraintSystem::unconstrained(m)?;
        return Ok(Loaded {
            label: format!("unconstrained m={m}"),
            problem: Problem { name: None, system, tolerances: ToleranceSpec::unbounded() },
        });
    }
    Err(Failure::Usage("no problem given: use --config PATH, --problem NAME or --m M".into()))
}

fn param(kind: BoundKind, eta: Option<f64>, theta: Option<f64>) -> Run<(&'static str, f64)> {
    if kind.is_norm_kind() {
        theta.map(|t| ("theta", t)).ok_or_else(|| Failure::Usage(format!("--kind {} needs --theta", kind.label())))
    } else {
        eta.map(|e| ("eta", e)).ok_or_else(|| Failure::Usage(format!("--kind {} needs --eta", kind.label())))
    }
}

/// What a command hands back for rendering.
struct Output {
    manifest: RunManifest,
    sections: Vec<Section>,
    json: serde_json::Value,
}

fn to_json<T: Serialize>(v: &T) -> Run<serde_json::Value> {
    serde_json::to_value(v).map_err(|e| Failure::Lib(e.into()))
}

fn solution_sections(sol: &MaxEntSolution, theta_inf: f64) -> Vec<Section> {
    let rows = sol
        .phi_star
        .iter()
        .enumerate()
        .map(|(i, p)| vec![(i + 1).to_string(), full(*p)])
        .collect();
    vec![
        Section::fields(
            "maximum-entropy solution",
            vec![
                ("m", sol.m().to_string()),
                ("H*", full(sol.h_star)),
                ("support μ*", sol.mu_star.to_string()),
                ("φ*min", full(sol.phi_min)),
                ("φ*max", full(sol.phi_max)),
                ("θ∞", full(theta_inf)),
                ("kkt residual", format!("{:.3e}", sol.kkt_residual)),
            ],
        ),
        Section::table("φ*", &["i", "phi"], rows),
    ]
}

fn cmd_solve(common: &Common) -> Run<Output> {
    let l = load(common)?;
    let sol = solve_maxent(&l.problem.system)?;
    let theta_inf = theta_infinity(&l.problem.system, &l.problem.tolerances)?;
    #[derive(Serialize)]
    struct Solved<'a> {
        #[serde(flatten)]
        solution: &'a MaxEntSolution,
        theta_inf: Option<f64>,
    }
    let json = to_json(&Solved { solution: &sol, theta_inf: theta_inf.is_finite().then_some(theta_inf) })?;
    Ok(Output {
        manifest: RunManifest::new("solve", l.label, vec![], common.format),
        sections: solution_sections(&sol, theta_inf),
        json,
    })
}

fn branch_label(b: entconc::ActiveBranch) -> String {
    serde_json::to_value(b).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}

fn bound_sections(r: &BoundReport) -> Vec<Section> {
    let opt = |x: Option<f64>| x.map(g6).unwrap_or_else(|| "-".into());
    let mut rows = vec![
        ("kind", r.kind.label().to_string()),
        ("N", full(r.n)),
        ("N_ceil", r.n_ceil.to_string()),
        ("alpha_hat", g6(r.alpha_hat)),
        ("C1", g6(r.c1)),
        ("C2", g6(r.c2)),
        ("theta_inf", g6(r.theta_inf)),
        ("phi_min", g6(r.phi_min)),
        ("theta0", g6(r.theta0)),
        ("alpha0", opt(r.alpha0)),
        ("active_branch", branch_label(r.active_branch)),
        ("m", r.m.to_string()),
        ("mu_star", r.mu_star.to_string()),
        ("epsilon", g6(r.epsilon)),
    ];
    if let Some(e) = r.eta {
        rows.push(("eta", g6(e)));
    }
    if let Some(t) = r.theta {
        rows.push(("theta", g6(t)));
    }
    if let Some(d) = r.delta_h {
        rows.push(("delta_h", g6(d)));
    }
    if let Some(d) = r.radius {
        rows.push(("radius", g6(d)));
    }
    let checks = r
        .validity
        .iter()
        .map(|v| vec![v.condition.clone(), if v.passed { "ok" } else { "FAILED" }.into(), v.detail.clone()])
        .collect();
    let mut out = vec![
        Section::fields("bound", rows),
        Section::table("validity", &["condition", "status", "detail"], checks),
    ];
    if !r.notes.is_empty() {
        out.push(Section::table("notes", &["note"], r.notes.iter().map(|n| vec![n.clone()]).collect()));
    }
    out.push(Section::Text(r.summary()));
    out
}

fn cmd_bound(kind: KindArg, eps: f64, eta: Option<f64>, theta: Option<f64>, common: &Common) -> Run<Output> {
    let kind = kind.kind();
    let (pname, p) = param(kind, eta, theta)?;
    let params = vec![("kind".into(), kind.label().into()), ("eps".into(), full(eps)), (pname.into(), full(p))];
    let (label, report) = if kind == BoundKind::CorollaryUnif && common.config.is_none() && common.problem.is_none() {
        let m = common.m.ok_or_else(|| Failure::Usage("--kind uniform needs --m".into()))?;
        (format!("unconstrained m={m}"), entconc::compute_n_uniform(m, eps, p)?)
    } else {
        let l = load(common)?;
        let sol = solve_maxent(&l.problem.system)?;
        let r = compute_bound(kind, &sol, &l.problem.system, &l.problem.tolerances, eps, p)?;
        (l.label, r)
    };
    #[derive(Serialize)]
    struct WithCertificate<'a> {
        #[serde(flatten)]
        report: &'a BoundReport,
        certificate: String,
    }
    let json = to_json(&WithCertificate { report: &report, certificate: report.summary() })?;
    Ok(Output {
        manifest: RunManifest::new("bound", label, params, common.format),
        sections: bound_sections(&report),
        json,
    })
}

fn cmd_round(n: u64, common: &Common) -> Run<Output> {
    let l = load(common)?;
    let (cs, delta) = (&l.problem.system, &l.problem.tolerances);
    let sol = solve_maxent(cs)?;
    let counts = round_to_counts(&sol, n)?;
    let sat = satisfies_counts(cs, delta, &counts.nu, n)?;
    let (r_inf, r_l1) = closeness_radii(&sol, n);
    let f: Vec<f64> = counts.nu.iter().map(|&v| v as f64 / n as f64).collect();
    let linf = f.iter().zip(&sol.phi_star).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let l1: f64 = f.iter().zip(&sol.phi_star).map(|(a, b)| (a - b).abs()).sum();

    let rows = counts
        .nu
        .iter()
        .zip(&f)
        .zip(&sol.phi_star)
        .enumerate()
        .map(|(i, ((v, fi), p))| vec![(i + 1).to_string(), v.to_string(), format!("{v}/{n}"), full(*fi), full(*p)])
        .collect();
    let res_rows = sat
        .rows
        .iter()
        .map(|r| {
            vec![
                format!("{:?}", r.category).to_lowercase(),
                (r.row + 1).to_string(),
                format!("{:.6e}", r.residual),
                if r.limit.is_finite() { format!("{:.6e}", r.limit) } else { "inf".into() },
                if r.ok { "ok" } else { "violated" }.into(),
            ]
        })
        .collect();
    let sections = vec![
        Section::fields(
            "rounding",
            vec![
                ("n", n.to_string()),
                ("‖f* − φ*‖∞", format!("{linf:.6e}")),
                ("∞-radius 1/n", format!("{r_inf:.6e}")),
                ("‖f* − φ*‖1", format!("{l1:.6e}")),
                ("ℓ1-radius 3μ*/(4n)", format!("{r_l1:.6e}")),
                ("f* in C(δ)", sat.satisfied.to_string()),
            ],
        ),
        Section::table("counts", &["i", "nu", "f_rational", "f_decimal", "phi"], rows),
        Section::table("residuals", &["category", "row", "residual", "limit", "status"], res_rows),
    ];
    #[derive(Serialize)]
    struct Rounded<'a> {
        n: u64,
        nu: &'a [u64],
        f: Vec<f64>,
        f_rational: Vec<String>,
        linf: f64,
        l1: f64,
        linf_radius: f64,
        l1_radius: f64,
        residuals: &'a entconc::constraints::SatisfactionReport,
    }
    let json = to_json(&Rounded {
        n,
        nu: &counts.nu,
        f_rational: counts.nu.iter().map(|v| format!("{v}/{n}")).collect(),
        f,
        linf,
        l1,
        linf_radius: r_inf,
        l1_radius: r_l1,
        residuals: &sat,
    })?;
    Ok(Output {
        manifest: RunManifest::new("round", l.label, vec![("n".into(), n.to_string())], common.format),
        sections,
        json,
    })
}

fn opt_display<T: std::fmt::Display>(x: &Option<T>) -> String {
    x.as_ref().map(|b| b.to_string()).unwrap_or_else(|| "-".into())
}

fn oracle_sections(r: &EnumerationReport) -> Vec<Section> {
    let crit = match r.criterion {
        Criterion::Entropy { eta } => format!("H(f) ≥ (1 − {eta}) H*"),
        Criterion::Norm { theta } => format!("‖f − φ*‖1 ≤ {theta}"),
    };
    let mut out = vec![Section::fields(
        "enumeration",
        vec![
            ("n", r.n.to_string()),
            ("m", r.m.to_string()),
            ("criterion (A)", crit),
            ("vectors in F_n", r.total_vectors.to_string()),
            ("vectors in C(δ)", r.in_c.to_string()),
            ("vectors in A", r.a_vectors.to_string()),
            ("vectors in B", r.b_vectors.to_string()),
            ("realizations in C(δ)", opt_display(&r.realizations_in_c)),
            ("realizations in A", opt_display(&r.a_count)),
            ("realizations in B", opt_display(&r.b_count)),
            ("log10 #A", format!("{:.6}", r.a_log.log10())),
            ("log10 #B", format!("{:.6}", r.b_log.log10())),
            ("#A / (#A + #B)", g6(r.ratio)),
            ("boundary vectors", r.boundary.to_string()),
        ],
    )];
    if let Some(detail) = &r.detail {
        let rows = detail
            .iter()
            .map(|d| {
                let nu: Vec<String> = d.nu.iter().map(|v| v.to_string()).collect();
                vec![
                    nu.join(" "),
                    format!("{:.6}", d.entropy),
                    format!("{:.6}", d.l1),
                    d.count.as_ref().map(|c| c.to_string()).unwrap_or_else(|| "-".into()),
                    d.in_c.to_string(),
                    if !d.in_c { "-" } else if d.in_a { "A" } else { "B" }.into(),
                ]
            })
            .collect();
        out.push(Section::table("vectors", &["nu", "entropy", "l1", "count", "in_c", "set"], rows));
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn cmd_oracle(
    n: u64,
    criterion: CriterionArg,
    eta: Option<f64>,
    theta: Option<f64>,
    budget: u64,
    detail: bool,
    common: &Common,
) -> Run<Output> {
    let (c, pname, p) = match criterion {
        CriterionArg::Entropy => {
            let e = eta.ok_or_else(|| Failure::Usage("--criterion entropy needs --eta".into()))?;
            (Criterion::Entropy { eta: e }, "eta", e)
        }
        CriterionArg::Norm => {
            let t = theta.ok_or_else(|| Failure::Usage("--criterion norm needs --theta".into()))?;
            (Criterion::Norm { theta: t }, "theta", t)
        }
    };
    let l = load(common)?;
    let sol = solve_maxent(&l.problem.system)?;
    let r = concentration_report(&l.problem.system, &l.problem.tolerances, &sol, n, c, budget, detail)?;
    let params = vec![
        ("n".into(), n.to_string()),
        ("criterion".into(), if pname == "eta" { "entropy" } else { "norm" }.into()),
        (pname.into(), full(p)),
        ("budget".into(), budget.to_string()),
        ("detail".into(), detail.to_string()),
    ];
    Ok(Output {
        manifest: RunManifest::new("oracle", l.label, params, common.format),
        sections: oracle_sections(&r),
        json: to_json(&r)?,
    })
}

fn cmd_scan(kind: KindArg, eps: f64, eta: Option<f64>, theta: Option<f64>, grid: usize, common: &Common) -> Run<Output> {
    let kind = kind.kind();
    let (pname, p) = param(kind, eta, theta)?;
    let l = load(common)?;
    let sol = solve_maxent(&l.problem.system)?;
    let scan: AlphaScan = scan_alpha(kind, &sol, &l.problem.system, &l.problem.tolerances, eps, p, grid)?;
    let rows = scan
        .rows
        .iter()
        .map(|r| {
            vec![
                full(r.alpha),
                full(r.n_alpha),
                full(r.rhs),
                branch_label(r.active_branch),
                r.crossing.to_string(),
            ]
        })
        .collect();
    let params = vec![
        ("kind".into(), kind.label().into()),
        ("eps".into(), full(eps)),
        (pname.into(), full(p)),
        ("grid".into(), grid.to_string()),
    ];
    Ok(Output {
        manifest: RunManifest::new("scan-alpha", l.label, params, common.format),
        sections: vec![Section::table(
            "alpha scan",
            &["alpha", "N_alpha", "rhs", "active_branch", "crossing"],
            rows,
        )],
        json: to_json(&scan)?,
    })
}

fn cmd_jaynes(ell: usize, eps: f64, n: u64, common: &Common) -> Run<Output> {
    let l = load(common)?;
    let sol = solve_maxent(&l.problem.system)?;
    let j = jaynes_comparison(l.problem.system.m(), ell, eps, n, sol.h_star)?;
    let sections = vec![Section::fields(
        "chi-squared comparison",
        vec![
            ("m", l.problem.system.m().to_string()),
            ("ell", j.ell.to_string()),
            ("degrees of freedom", j.dof.to_string()),
            ("chi2 critical", g6(j.chi2_critical)),
            ("delta_h", g6(j.delta_h)),
            ("eta equivalent", g6(j.eta_equivalent)),
            ("s", g6(j.s)),
            ("C1_jaynes", g6(j.c1)),
            ("C2_jaynes", g6(j.c2)),
        ],
    )];
    let params = vec![("ell".into(), ell.to_string()), ("eps".into(), full(eps)), ("n".into(), n.to_string())];
    Ok(Output {
        manifest: RunManifest::new("jaynes", l.label, params, common.format),
        sections,
        json: to_json(&j)?,
    })
}

fn run(cli: Cli) -> Run<()> {
    let (output, common) = match &cli.command {
        Command::Solve { common } => (cmd_solve(common)?, common),
        Command::Bound { kind, eps, eta, theta, common } => (cmd_bound(*kind, *eps, *eta, *theta, common)?, common),
        Command::Round { n, common } => (cmd_round(*n, common)?, common),
        Command::Oracle { n, criterion, eta, theta, budget, detail, common } => {
            (cmd_oracle(*n, *criterion, *eta, *theta, *budget, *detail, common)?, common)
        }
        Command::ScanAlpha { kind, eps, eta, theta, grid, common } => {
            (cmd_scan(*kind, *eps, *eta, *theta, *grid, common)?, common)
        }
        Command::Jaynes { ell, eps, n, common } => (cmd_jaynes(*ell, *eps, *n, common)?, common),
    };
    let text = match common.format {
        Format::Table => render_text(&output.manifest, &output.sections),
        Format::Csv => render_csv(&output.manifest, &output.sections),
        Format::Json => render_json(&output.manifest, &output.json).map_err(|e| Failure::Lib(e.into()))?,
    };
    let written = match &common.out {
        Some(path) => std::fs::write(path, text.as_bytes()),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    written.map_err(|e| Failure::Lib(e.into()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
