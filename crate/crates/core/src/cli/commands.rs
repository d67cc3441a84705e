use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::grid::{parse_complex_grid, parse_real_grid};
use super::output::{config_hash, emit, entry_cells, entry_header, num, sibling, to_json, MatrixRow};
use super::{Cli, CliError, Command, CommonArgs, Format, SideArg};
use crate::boundary::{
    limit_point_m, native_side, resolvent_matrix_fn, weyl_function, FourierSetup, Side, TripleKind, WeylDisk,
};
use crate::cansys::{detect_indivisible, monodromy, CanonicalSystem, FundamentalSolution};
use crate::error::Error;
use crate::herglotz::{kernel_positivity, DistributionFunction, StieltjesOptions};
use crate::jmoebius::{certify_class_w, j_unitarity_defect, ResolventMatrix};
use crate::linalg::{CMatrix, CVector, C64};
use crate::quadrature::TestFunction;
use crate::spectral::{admissibility_test, bessel_check, parseval_check, spectral_function, TauParameter, Verdict};

/// Default spectral window and step for `spectral` and `fourier-check`.
const DEFAULT_LAMBDA_GRID: &str = "-10:10:4001";

/// Most grid points used as nodes of a certification Gram matrix.
const MAX_CERT_NODES: usize = 8;

struct Context<'a> {
    args: &'a CommonArgs,
    command: &'static str,
    sys: CanonicalSystem,
    kind: TripleKind,
    hash: String,
}

impl<'a> Context<'a> {
    fn new(cli: &'a Cli, command: &'static str) -> Result<Self, CliError> {
        let args = &cli.common;
        let path = args
            .system
            .as_ref()
            .ok_or_else(|| CliError::Input("--system <path> is required".into()))?;
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let sys = CanonicalSystem::from_json(&text)?;
        let kind = args.triple.unwrap_or(if sys.is_regular() {
            TripleKind::FullRegular
        } else {
            TripleKind::LimitPoint
        });
        if !(args.tol > 0.0) {
            return Err(CliError::Input("--tol must be positive".into()));
        }
        let side = match &cli.command {
            Command::ResolventMatrix { side } => format!("{side:?}"),
            _ => String::new(),
        };
        let hash = config_hash(&[
            command,
            &sys.to_json(),
            &kind.to_string(),
            args.z_grid.as_deref().unwrap_or(""),
            args.lambda_grid.as_deref().unwrap_or(""),
            args.tau.as_deref().unwrap_or(""),
            &format!("{:?} {} {} {} {}", args.format, args.force, args.strict, args.seed, args.tol),
            &side,
        ]);
        Ok(Self {
            args,
            command,
            sys,
            kind,
            hash,
        })
    }

    fn out(&self) -> Option<&Path> {
        self.args.out.as_deref()
    }

    fn header(&self) -> String {
        format!(
            "# command={} system={} triple={} hash={}\n",
            self.command,
            self.sys.name(),
            self.kind,
            self.hash
        )
    }

    fn z_grid(&self) -> Result<Vec<C64>, CliError> {
        let text = self
            .args
            .z_grid
            .as_deref()
            .ok_or_else(|| CliError::Input("--z-grid is required".into()))?;
        parse_complex_grid(text)
    }

    /// Window and step from `--lambda-grid`.
    fn lambda_window(&self) -> Result<((f64, f64), f64), CliError> {
        let grid = parse_real_grid(self.args.lambda_grid.as_deref().unwrap_or(DEFAULT_LAMBDA_GRID))?;
        if grid.len() < 3 {
            return Err(CliError::Input("--lambda-grid needs at least 3 points".into()));
        }
        let (a, b) = (grid[0], grid[grid.len() - 1]);
        Ok(((a, b), (b - a) / (grid.len() - 1) as f64))
    }

    fn tau(&self) -> Result<TauParameter, CliError> {
        match &self.args.tau {
            Some(text) => Ok(TauParameter::from_json(text)?),
            None => Ok(TauParameter::constant(CMatrix::zeros(
                self.kind.boundary_dim(self.sys.p()),
                self.kind.boundary_dim(self.sys.p()),
            ))),
        }
    }

    fn fourier_setup(&self, tau: &TauParameter) -> Result<FourierSetup, CliError> {
        let setup = FourierSetup::new(self.kind);
        if self.kind != TripleKind::LimitPoint {
            return Ok(setup);
        }
        let t = tau.real_scalar().ok_or_else(|| {
            CliError::Input("the limit-point Fourier transform needs a constant real τ".into())
        })?;
        Ok(setup.with_lp_parameter(t))
    }
}

pub(super) fn dispatch(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Solve => solve(&Context::new(cli, "solve")?),
        Command::Weyl => weyl(&Context::new(cli, "weyl")?),
        Command::ResolventMatrix { side } => resolvent(&Context::new(cli, "resolvent-matrix")?, *side),
        Command::Spectral { parseval } => spectral(&Context::new(cli, "spectral")?, *parseval),
        Command::FourierCheck => fourier_check(&Context::new(cli, "fourier-check")?),
        Command::Indivisible => indivisible(&Context::new(cli, "indivisible")?),
    }
}

#[derive(Serialize)]
struct MatrixArtifact<'a> {
    command: &'a str,
    system: &'a str,
    triple: String,
    hash: &'a str,
    rows: Vec<MatrixRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    disks: Vec<WeylDisk>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certification: Option<Certification>,
}

#[derive(Debug, Clone, Serialize)]
struct Certification {
    nodes: usize,
    lambda_min: f64,
    certified: bool,
    j_unitarity_defect_max: f64,
}

impl Certification {
    fn line(&self) -> String {
        format!(
            "# certification nodes={} lambda_min={} certified={} j_unitarity_defect_max={}\n",
            self.nodes,
            num(self.lambda_min),
            self.certified,
            num(self.j_unitarity_defect_max)
        )
    }
}

fn matrix_artifact(
    ctx: &Context<'_>,
    prefix: &str,
    rows: &[(C64, CMatrix)],
    disks: Vec<WeylDisk>,
    cert: Option<Certification>,
) -> Result<(), CliError> {
    let text = match ctx.args.format {
        Format::Json => to_json(&MatrixArtifact {
            command: ctx.command,
            system: ctx.sys.name(),
            triple: ctx.kind.to_string(),
            hash: &ctx.hash,
            rows: rows.iter().map(|(z, m)| MatrixRow::new(*z, m)).collect(),
            disks,
            certification: cert,
        }),
        Format::Csv => {
            let mut out = ctx.header();
            let (r, c) = rows.first().map(|(_, m)| m.shape()).unwrap_or((0, 0));
            out.push_str("z_re,z_im");
            out.push_str(&entry_header(prefix, r, c));
            if !disks.is_empty() {
                out.push_str(",disk_radius,truncation");
            }
            out.push('\n');
            for (k, (z, m)) in rows.iter().enumerate() {
                write!(out, "{},{}{}", num(z.re), num(z.im), entry_cells(m)).unwrap();
                if let Some(d) = disks.get(k) {
                    write!(out, ",{},{}", num(d.radius), num(d.truncation)).unwrap();
                }
                out.push('\n');
            }
            if let Some(cert) = &cert {
                out.push_str(&cert.line());
            }
            out
        }
    };
    emit(ctx.out(), &text)
}

/// Evaluate `f` over the grid in parallel; spectral points are skipped (and
/// logged) unless `--strict`.
fn sweep<T: Send>(
    ctx: &Context<'_>,
    grid: &[C64],
    f: impl Fn(C64) -> crate::Result<T> + Sync,
) -> Result<Vec<(C64, T)>, CliError> {
    let results: Vec<crate::Result<T>> = grid.par_iter().map(|&z| f(z)).collect();
    let mut rows = Vec::with_capacity(grid.len());
    for (z, r) in grid.iter().zip(results) {
        match r {
            Ok(v) => rows.push((*z, v)),
            Err(e @ Error::SpectralPoint { .. }) if !ctx.args.strict => {
                eprintln!("skipped: {e}");
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(rows)
}

fn cert_nodes(rows: &[(C64, CMatrix)]) -> Vec<C64> {
    rows.iter()
        .map(|(z, _)| *z)
        .filter(|z| z.im > 0.0)
        .take(MAX_CERT_NODES)
        .collect()
}

fn j_defect_max(w: &ResolventMatrix, rows: &[(C64, CMatrix)]) -> f64 {
    rows.iter()
        .filter_map(|(z, _)| j_unitarity_defect(w, *z).ok())
        .fold(0.0, f64::max)
}

fn solve(ctx: &Context<'_>) -> Result<(), CliError> {
    let grid = ctx.z_grid()?;
    let sys = &ctx.sys;
    let rows = sweep(ctx, &grid, |z| {
        if sys.is_regular() {
            monodromy(sys, z)
        } else {
            Ok(FundamentalSolution::new(sys, z).at_mesh_end().clone())
        }
    })?;
    matrix_artifact(ctx, "u", &rows, Vec::new(), None)
}

fn weyl(ctx: &Context<'_>) -> Result<(), CliError> {
    let grid = ctx.z_grid()?;
    let (sys, kind) = (&ctx.sys, ctx.kind);
    kind.check(sys)?;
    let (rows, disks) = if kind == TripleKind::LimitPoint {
        let found = sweep(ctx, &grid, |z| limit_point_m(sys, z, ctx.args.tol))?;
        let rows = found.iter().map(|(z, (m, _))| (*z, CMatrix::from_element(1, 1, *m))).collect();
        (rows, found.into_iter().map(|(_, (_, d))| d).collect())
    } else {
        (sweep(ctx, &grid, |z| weyl_function(sys, kind, z))?, Vec::new())
    };
    let w = resolvent_matrix_fn(sys, kind, native_side(kind))?;
    let cert = certification(&rows, |z| weyl_function(sys, kind, z), &w)?;
    if let Some(c) = &cert {
        eprint!("{}", c.line());
    }
    matrix_artifact(ctx, "m", &rows, disks, cert)
}

fn certification(
    rows: &[(C64, CMatrix)],
    q: impl Fn(C64) -> crate::Result<CMatrix>,
    w: &ResolventMatrix,
) -> Result<Option<Certification>, CliError> {
    let nodes = cert_nodes(rows);
    if nodes.is_empty() {
        return Ok(None);
    }
    let gram = kernel_positivity(q, &nodes)?;
    Ok(Some(Certification {
        nodes: nodes.len(),
        lambda_min: gram.min_eigenvalue,
        certified: gram.certified,
        j_unitarity_defect_max: j_defect_max(w, rows),
    }))
}

fn resolvent(ctx: &Context<'_>, side: Option<SideArg>) -> Result<(), CliError> {
    let grid = ctx.z_grid()?;
    let side = match side {
        Some(SideArg::Left) => Side::Left,
        Some(SideArg::Right) => Side::Right,
        None => native_side(ctx.kind),
    };
    let w = resolvent_matrix_fn(&ctx.sys, ctx.kind, side)?;
    let rows = sweep(ctx, &grid, |z| w.at(z))?;
    let nodes = cert_nodes(&rows);
    let cert = if nodes.is_empty() {
        None
    } else {
        let gram = certify_class_w(&w, &nodes)?;
        Some(Certification {
            nodes: nodes.len(),
            lambda_min: gram.min_eigenvalue,
            certified: gram.certified,
            j_unitarity_defect_max: j_defect_max(&w, &rows),
        })
    };
    if let Some(c) = &cert {
        eprint!("{}", c.line());
    }
    matrix_artifact(ctx, "w", &rows, Vec::new(), cert)
}

/// A Gaussian bump times a constant vector, drawn from the seed.
#[derive(Debug, Clone, Serialize)]
struct Bump {
    center: f64,
    width: f64,
    vector: Vec<f64>,
}

impl Bump {
    fn seeded(sys: &CanonicalSystem, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lo = sys.a();
        let hi = if sys.mesh_end() > lo { sys.mesh_end() } else { lo + 2.0 };
        let len = hi - lo;
        Self {
            center: lo + len * rng.random_range(0.3..0.7),
            width: len * rng.random_range(0.06..0.09),
            vector: (0..sys.n()).map(|_| rng.random_range(-1.0..1.0)).collect(),
        }
    }

    fn function(&self, sys: &CanonicalSystem) -> TestFunction {
        let (c, w, v) = (self.center, self.width, self.vector.clone());
        let support = ((c - 6.0 * w).max(sys.a()), c + 6.0 * w);
        TestFunction::new(v.len(), support, move |t| {
            let e = (-0.5 * ((t - c) / w).powi(2)).exp();
            CVector::from_iterator(v.len(), v.iter().map(|x| C64::new(x * e, 0.0)))
        })
    }
}

#[derive(Serialize)]
struct ParsevalArtifact<'a> {
    command: &'a str,
    system: &'a str,
    triple: String,
    hash: &'a str,
    seed: u64,
    window: (f64, f64),
    bump: Bump,
    lhs: [f64; 2],
    rhs: [f64; 2],
    defect: f64,
    bessel_holds: bool,
}

fn parseval_artifact<'a>(
    ctx: &'a Context<'_>,
    tau: &TauParameter,
    sigma: &DistributionFunction,
) -> Result<ParsevalArtifact<'a>, CliError> {
    let setup = ctx.fourier_setup(tau)?;
    let bump = Bump::seeded(&ctx.sys, ctx.args.seed);
    let f = bump.function(&ctx.sys);
    let report = parseval_check(&ctx.sys, setup, sigma, &f, &f)?;
    let (_, _, bessel) = bessel_check(&ctx.sys, setup, sigma, &f)?;
    Ok(ParsevalArtifact {
        command: ctx.command,
        system: ctx.sys.name(),
        triple: ctx.kind.to_string(),
        hash: &ctx.hash,
        seed: ctx.args.seed,
        window: sigma.window(),
        bump,
        lhs: [report.lhs.re, report.lhs.im],
        rhs: [report.rhs.re, report.rhs.im],
        defect: report.defect,
        bessel_holds: bessel,
    })
}

fn sigma_for(ctx: &Context<'_>, tau: &TauParameter) -> Result<DistributionFunction, CliError> {
    let (window, step) = ctx.lambda_window()?;
    let opts = StieltjesOptions {
        step,
        ..StieltjesOptions::default()
    };
    Ok(spectral_function(&ctx.sys, ctx.kind, tau, window, &opts)?)
}

#[derive(Serialize)]
struct AdmissibilityArtifact<'a> {
    command: &'a str,
    system: &'a str,
    triple: String,
    hash: &'a str,
    #[serde(flatten)]
    report: &'a crate::spectral::AdmissibilityReport,
}

#[derive(Serialize)]
struct SigmaArtifact<'a> {
    system: &'a str,
    triple: String,
    hash: &'a str,
    window: (f64, f64),
    atoms: Vec<MatrixRow>,
    density: Vec<MatrixRow>,
}

fn spectral(ctx: &Context<'_>, parseval: bool) -> Result<(), CliError> {
    ctx.kind.check(&ctx.sys)?;
    let tau = ctx.tau()?;
    let report = admissibility_test(&ctx.sys, ctx.kind, &tau)?;
    let adm = to_json(&AdmissibilityArtifact {
        command: ctx.command,
        system: ctx.sys.name(),
        triple: ctx.kind.to_string(),
        hash: &ctx.hash,
        report: &report,
    });
    match ctx.out() {
        Some(p) => emit(Some(&sibling(p, ".admissibility.json")), &adm)?,
        None => eprint!("{adm}"),
    }
    if report.verdict == Verdict::Inadmissible && !ctx.args.force {
        return Err(CliError::Policy(
            "τ is classified inadmissible; σ is not emitted (use --force to override)".into(),
        ));
    }
    let sigma = sigma_for(ctx, &tau)?;
    let name = ctx.sys.name();
    match ctx.args.format {
        Format::Csv => {
            emit(ctx.out(), &sigma.to_csv(name, &ctx.hash))?;
            if let Some(p) = ctx.out() {
                emit(Some(&sibling(p, ".atoms.csv")), &sigma.atoms_csv(name, &ctx.hash))?;
                emit(Some(&sibling(p, ".density.csv")), &sigma.density_csv(name, &ctx.hash))?;
            }
        }
        Format::Json => {
            let real = |x: f64| C64::new(x, 0.0);
            emit(
                ctx.out(),
                &to_json(&SigmaArtifact {
                    system: name,
                    triple: ctx.kind.to_string(),
                    hash: &ctx.hash,
                    window: sigma.window(),
                    atoms: sigma.atoms().iter().map(|(l, w)| MatrixRow::new(real(*l), w)).collect(),
                    density: sigma
                        .ac_grid()
                        .iter()
                        .zip(sigma.ac_density())
                        .map(|(l, d)| MatrixRow::new(real(*l), d))
                        .collect(),
                }),
            )?;
        }
    }
    if parseval {
        let text = to_json(&parseval_artifact(ctx, &tau, &sigma)?);
        match ctx.out() {
            Some(p) => emit(Some(&sibling(p, ".parseval.json")), &text)?,
            None => eprint!("{text}"),
        }
    }
    Ok(())
}

fn fourier_check(ctx: &Context<'_>) -> Result<(), CliError> {
    ctx.kind.check(&ctx.sys)?;
    let tau = ctx.tau()?;
    let sigma = sigma_for(ctx, &tau)?;
    let art = parseval_artifact(ctx, &tau, &sigma)?;
    let text = match ctx.args.format {
        Format::Json => to_json(&art),
        Format::Csv => format!(
            "{}seed,lhs_re,lhs_im,rhs_re,rhs_im,defect,bessel_holds\n{},{},{},{},{},{},{}\n",
            ctx.header(),
            art.seed,
            num(art.lhs[0]),
            num(art.lhs[1]),
            num(art.rhs[0]),
            num(art.rhs[1]),
            num(art.defect),
            art.bessel_holds
        ),
    };
    emit(ctx.out(), &text)
}

#[derive(Serialize)]
struct RunRow {
    start: f64,
    end: Option<f64>,
    psi: f64,
    at_left: bool,
    at_right: bool,
}

fn indivisible(ctx: &Context<'_>) -> Result<(), CliError> {
    let runs = detect_indivisible(&ctx.sys)?;
    let text = match ctx.args.format {
        Format::Json => to_json(
            &runs
                .iter()
                .map(|r| RunRow {
                    start: r.start,
                    end: r.end.is_finite().then_some(r.end),
                    psi: r.psi,
                    at_left: r.at_left,
                    at_right: r.at_right,
                })
                .collect::<Vec<_>>(),
        ),
        Format::Csv => {
            let mut out = ctx.header();
            out.push_str("start,end,psi,at_left,at_right\n");
            for r in &runs {
                let end = if r.end.is_finite() { num(r.end) } else { "inf".into() };
                writeln!(out, "{},{end},{},{},{}", num(r.start), num(r.psi), r.at_left, r.at_right).unwrap();
            }
            out
        }
    };
    emit(ctx.out(), &text)
}
