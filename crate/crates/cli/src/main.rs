use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use isothermic::io::{export_mesh, load_net, save_net, MeshFormat, NetFile, NetKind};
use isothermic::net::isothermic_factorization;
use isothermic::special::{catenoid_pair, cousin_sweep, HolomorphicNet};
use isothermic::transforms::ttransform::frame_of;
use isothermic::transforms::{christoffel, darboux_riccati, goursat, t_transform};
use isothermic::{
    suites, AffineChart, AffineNet, ComplexScalar, Error, Execution, GridWindow, HVector,
    ProjectiveNet, QuatMatrix2, Quaternion,
};

#[derive(Parser)]
#[command(
    name = "isonet",
    version,
    about = "Discrete isothermic nets: transforms, checks and the cmc-1 cousin pipeline"
)]
struct Cli {
    /// Run every data-parallel loop on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate example nets.
    Gen {
        #[command(subcommand)]
        what: Gen,
    },
    /// Christoffel transform of an isothermic net.
    Christoffel {
        net: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Darboux transform through an initial point.
    Darboux {
        net: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        /// Initial point `w,x,y,z`.
        #[arg(long, allow_hyphen_values = true)]
        init: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Calapso transform at a spectral parameter.
    Ttransform {
        net: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Goursat transform: dualize after a change of chart.
    Goursat {
        net: PathBuf,
        /// Sixteen comma-separated numbers (entries of `[v∞ | v0]`) or `weierstrass`.
        #[arg(long, allow_hyphen_values = true)]
        chart: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// The family of catenoid cousins: three meshes per parameter.
    Cousins {
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        lambda_list: Vec<f64>,
        #[arg(long, default_value_t = 20)]
        n: u32,
        #[arg(long, default_value_t = 10)]
        irg: i32,
        #[arg(long, default_value_t = 10)]
        jrg: i32,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Obj)]
        format: Format,
    },
    /// Run an invariant suite on a net file.
    Check {
        net: PathBuf,
        #[arg(long)]
        against: Option<PathBuf>,
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.1)]
        lambda: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.05)]
        mu: f64,
        /// Write the report as JSON (`-` for stdout).
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Gen {
    /// The exponential pair `g = e^{2π(m+in)/N}`, `h = 1/g`.
    Catenoid {
        #[arg(long, default_value_t = 20)]
        n: u32,
        #[arg(long, default_value_t = 10)]
        irg: i32,
        #[arg(long, default_value_t = 10)]
        jrg: i32,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Obj,
    Ply,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Isothermic,
    Christoffel,
    Darboux,
    TLaws,
    Permutability,
    Horospherical,
}

fn parse_numbers(s: &str, what: &str) -> anyhow::Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidParameter(format!("{what}: bad number `{t}`")).into())
        })
        .collect()
}

fn weierstrass_chart() -> isothermic::Result<AffineChart> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let v0 = HVector::new(Quaternion::real(s), Quaternion::I * s);
    let vinf = HVector::new(Quaternion::I * s, Quaternion::real(s));
    AffineChart::from_points(v0, vinf)
}

fn write_affine_or_projective(
    net: &ProjectiveNet,
    out: &Path,
    meta: &[(&str, String)],
) -> anyhow::Result<()> {
    let mut file = match net.project(&AffineChart::standard()) {
        Ok(a) => NetFile::from_affine(&a),
        Err(_) => NetFile::from_projective(net),
    };
    for (k, v) in meta {
        file = file.with_meta(k, v);
    }
    save_net(out, &file).with_context(|| format!("writing {}", out.display()))
}

fn load(path: &Path) -> anyhow::Result<NetFile> {
    load_net(path).with_context(|| format!("reading {}", path.display()))
}

fn complex_of(net: &AffineNet) -> anyhow::Result<HolomorphicNet> {
    let mut bad = None;
    let g = HolomorphicNet::from_fn(net.window(), |m, n| {
        let q = net.get(m, n);
        if q.y.abs() + q.z.abs() > 1e-12 * q.norm().max(1.0) {
            bad.get_or_insert((m, n));
        }
        ComplexScalar::new(q.w, q.x)
    });
    if let Some((m, n)) = bad {
        return Err(Error::KindMismatch(format!("value at ({m}, {n}) is not complex")).into());
    }
    Ok(g)
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    match cli.command {
        Command::Gen {
            what:
                Gen::Catenoid {
                    n,
                    irg,
                    jrg,
                    out_dir,
                },
        } => {
            let (g, h) = catenoid_pair(n, GridWindow::symmetric(irg, jrg)?)?;
            std::fs::create_dir_all(&out_dir)?;
            for (name, net) in [("g.net", &g), ("h.net", &h)] {
                let file = NetFile::from_holomorphic(net)
                    .with_meta("source", format!("catenoid N={n} {name}"));
                save_net(out_dir.join(name), &file)?;
            }
            println!(
                "wrote {} and {}",
                out_dir.join("g.net").display(),
                out_dir.join("h.net").display()
            );
        }
        Command::Christoffel { net, out } => {
            let file = load(&net)?;
            let f = file.to_affine()?;
            let fact = isothermic_factorization(&f, exec)?;
            let pair = christoffel(&f, &fact, Quaternion::ZERO)?;
            let mut result = if file.kind == NetKind::Complex {
                NetFile::from_holomorphic(&complex_of(&pair.f_star)?)
            } else {
                NetFile::from_affine(&pair.f_star)
            };
            result = result
                .with_meta("source", "christoffel")
                .with_meta("closure", pair.closure);
            save_net(&out, &result)?;
            println!(
                "christoffel transform written to {} (closure {:e})",
                out.display(),
                pair.closure
            );
        }
        Command::Darboux {
            net,
            lambda,
            init,
            out,
        } => {
            let p = parse_numbers(&init, "--init")?;
            if p.len() != 4 {
                bail!(Error::InvalidParameter(
                    "--init needs four numbers w,x,y,z".into()
                ));
            }
            let f = load(&net)?.to_affine()?;
            let fact = isothermic_factorization(&f, exec)?;
            let pair = christoffel(&f, &fact, Quaternion::ZERO)?;
            let hat =
                darboux_riccati(&pair, lambda, Quaternion::new(p[0], p[1], p[2], p[3]), exec)?;
            write_affine_or_projective(
                &hat.hat,
                &out,
                &[
                    ("source", "darboux".into()),
                    ("lambda", format!("{lambda:?}")),
                ],
            )?;
            println!(
                "darboux transform written to {} (closure {:e})",
                out.display(),
                hat.closure
            );
        }
        Command::Ttransform { net, lambda, out } => {
            let f = load(&net)?.to_projective()?;
            let fact = isothermic_factorization(&f.project(&AffineChart::standard())?, exec)?;
            let (_, frame) = frame_of(&f, &fact, lambda, exec)?;
            let fl = t_transform(&f, &frame)?;
            write_affine_or_projective(
                &fl,
                &out,
                &[
                    ("source", "ttransform".into()),
                    ("lambda", format!("{lambda:?}")),
                ],
            )?;
            println!(
                "T-transform written to {} (residual {:e})",
                out.display(),
                frame.residual
            );
        }
        Command::Goursat { net, chart, out } => {
            let chart = if chart == "weierstrass" {
                weierstrass_chart()?
            } else {
                let c = parse_numbers(&chart, "--chart")?;
                if c.len() != 16 {
                    bail!(Error::InvalidParameter(format!(
                        "--chart needs 16 numbers, got {}",
                        c.len()
                    )));
                }
                let q: Vec<Quaternion> = c
                    .chunks(4)
                    .map(|x| Quaternion::new(x[0], x[1], x[2], x[3]))
                    .collect();
                AffineChart::from_matrix(&QuatMatrix2::new(q[0], q[1], q[2], q[3]))?
            };
            let f = load(&net)?.to_affine()?;
            let fact = isothermic_factorization(&f, exec)?;
            let pair = christoffel(&f, &fact, Quaternion::ZERO)?;
            let g = goursat(&pair.f_star, &chart, &f.to_projective())?;
            save_net(
                &out,
                &NetFile::from_affine(&g).with_meta("source", "goursat"),
            )?;
            println!("goursat transform written to {}", out.display());
        }
        Command::Cousins {
            lambda_list,
            n,
            irg,
            jrg,
            out_dir,
            format,
        } => {
            let (g, h) = catenoid_pair(n, GridWindow::symmetric(irg, jrg)?)?;
            let fmt = match format {
                Format::Obj => MeshFormat::Obj,
                Format::Ply => MeshFormat::Ply,
            };
            std::fs::create_dir_all(&out_dir)?;
            let family = cousin_sweep(&g, &h, &lambda_list, exec)?;
            let mut ok = true;
            for (k, c) in family.iter().enumerate() {
                for (model, pts) in [
                    ("gauss", &c.gauss),
                    ("ccousin", &c.ccousin),
                    ("ball", &c.ball),
                ] {
                    let path = out_dir.join(format!(
                        "{k:02}_lambda{:?}_{model}.{}",
                        c.lambda,
                        fmt.extension()
                    ));
                    export_mesh(pts, &path, fmt)?;
                }
                let report = suites::horospherical_pipeline(&g, &h, c.lambda, exec)?;
                let failed: Vec<&str> = report
                    .checks
                    .iter()
                    .filter(|c| !c.pass)
                    .map(|c| c.name.as_str())
                    .collect();
                ok &= failed.is_empty();
                let status = if failed.is_empty() {
                    "pass".to_string()
                } else {
                    format!("FAIL ({})", failed.join(", "))
                };
                println!("lambda {:>10}: {status}", format!("{:?}", c.lambda));
            }
            println!(
                "{} meshes written to {}",
                3 * family.len(),
                out_dir.display()
            );
            return Ok(ok);
        }
        Command::Check {
            net,
            against,
            suite,
            lambda,
            mu,
            json,
        } => {
            let file = load(&net)?;
            let other = against.as_deref().map(load).transpose()?;
            let need_other = |name: &str| -> anyhow::Result<&NetFile> {
                other.as_ref().ok_or_else(|| {
                    Error::InvalidParameter(format!("suite {name} needs --against")).into()
                })
            };
            let report = match suite {
                Suite::Isothermic => suites::isothermic(&file.to_affine()?, exec),
                Suite::Christoffel => suites::christoffel_pair(&file.to_affine()?, &need_other("christoffel")?.to_affine()?, exec),
                Suite::Darboux => suites::darboux_pair(&file.to_projective()?, &need_other("darboux")?.to_projective()?, exec)?,
                Suite::TLaws => {
                    let lam = other.as_ref().and_then(|o| o.meta_f64("lambda")).unwrap_or(lambda);
                    let against = other.as_ref().map(|o| o.to_projective()).transpose()?;
                    suites::t_laws(&file.to_projective()?, lam, against.as_ref(), exec)?
                }
                Suite::Permutability => suites::permutability(&file.to_affine()?, lambda, mu, exec)?,
                Suite::Horospherical => match (&other, file.kind) {
                    (None, NetKind::Complex) => {
                        let g = file.to_holomorphic()?;
                        let fact = isothermic_factorization(&g.to_affine(), exec)?;
                        let h = complex_of(&christoffel(&g.to_affine(), &fact, Quaternion::ZERO)?.f_star)?;
                        suites::horospherical_pipeline(&g, &h, lambda, exec)?
                    }
                    (Some(o), NetKind::Complex) if o.kind == NetKind::Complex => {
                        suites::horospherical_pipeline(&file.to_holomorphic()?, &o.to_holomorphic()?, lambda, exec)?
                    }
                    (Some(o), _) => suites::horospherical_pair(&file.to_projective()?, &o.to_projective()?, exec)?,
                    (None, _) => bail!(Error::InvalidParameter(
                        "horospherical suite needs a complex net or a surface with --against <gauss map>".into()
                    )),
                },
            };
            match json.as_deref() {
                Some(p) if p == Path::new("-") => emit(&format!("{}\n", report.to_json())),
                Some(p) => {
                    std::fs::write(p, report.to_json())?;
                    emit(&report.to_text());
                }
                None => emit(&report.to_text()),
            }
            return Ok(report.pass());
        }
    }
    Ok(true)
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    use std::io::Write;
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = match e.downcast_ref::<Error>() {
                Some(err) if !err.is_input_error() => 3,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}
