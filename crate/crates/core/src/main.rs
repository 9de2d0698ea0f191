use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kgalilei::cli::{self, Format, Group, SuiteConfig};
use kgalilei::ncpoly::{parse_element, Truncation};
use kgalilei::report::{CheckReport, Status};
use kgalilei::Result;

#[derive(Parser)]
#[command(name = "kgalilei", version, about = "Verification suite for the k-Galilei quantum group")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write reports here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// TOML suite configuration; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Symbolic identities of the quantum group and its multiplier.
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
    /// Central-extension obstruction at ansatz degrees 1..=max.
    Nogo {
        #[arg(long)]
        max_degree: Option<u32>,
        /// Add the report-only grade-1 quantum system.
        #[arg(long)]
        quantum: bool,
    },
    /// Numeric representation checks.
    Rep {
        #[command(subcommand)]
        what: Rep,
    },
    /// c → ∞ contraction experiments.
    Contract {
        #[command(subcommand)]
        what: Contract,
    },
    /// Normal form of an expression in the coordinate algebra.
    Eval {
        expr: String,
        #[arg(long, default_value_t = 2)]
        order: u32,
        #[arg(long, default_value_t = 6)]
        degree: u32,
    },
    /// Every enabled check group from the configuration.
    Suite {
        #[arg(long, value_enum, value_delimiter = ',')]
        groups: Option<Vec<Group>>,
    },
    /// Print the default configuration as TOML.
    DefaultConfig,
}

#[derive(Args, Clone)]
struct Policy {
    #[arg(long)]
    order: Option<u32>,
    #[arg(long)]
    degree: Option<u32>,
}

#[derive(Subcommand)]
enum Verify {
    Hopf {
        #[command(flatten)]
        policy: Policy,
        #[arg(long)]
        dual_order: Option<u32>,
    },
    Cocycle {
        #[command(flatten)]
        policy: Policy,
    },
    Tau {
        #[command(flatten)]
        policy: Policy,
    },
    Unitarity {
        #[command(flatten)]
        policy: Policy,
    },
}

#[derive(Args, Clone)]
struct RepArgs {
    #[arg(long = "M")]
    mass: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    k: Option<f64>,
    #[arg(long)]
    spin: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    /// Central-difference step instead of exact gradients.
    #[arg(long)]
    fd_step: Option<f64>,
}

#[derive(Subcommand)]
enum Rep {
    Commutators(RepArgs),
    Dispersion(RepArgs),
    Extract(RepArgs),
    Compose(RepArgs),
}

#[derive(Args, Clone)]
struct ContractArgs {
    #[arg(long = "M")]
    mass: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    k: Option<f64>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_vec3)]
    v: Option<[f64; 3]>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_vec3)]
    axis: Option<[f64; 3]>,
    #[arg(long, allow_hyphen_values = true)]
    angle: Option<f64>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_vec3)]
    q: Option<[f64; 3]>,
    /// `start:stop:log-count`.
    #[arg(long)]
    c_grid: Option<String>,
    /// Exploratory complex continuation of the mass for k > 0.
    #[arg(long)]
    complex_mass: bool,
}

#[derive(Subcommand)]
enum Contract {
    Multiplier(ContractArgs),
    Rep(ContractArgs),
    Appendix {
        #[arg(long)]
        samples: Option<usize>,
    },
    Family {
        #[command(flatten)]
        args: ContractArgs,
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        family_k: Option<Vec<f64>>,
    },
}

fn parse_vec3(s: &str) -> std::result::Result<[f64; 3], String> {
    let xs: Vec<f64> = s.split(',').map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}"))).collect::<std::result::Result<_, _>>()?;
    xs.try_into().map_err(|_| format!("expected three comma-separated numbers, got {s:?}"))
}

fn apply_policy(order: &mut u32, degree: &mut u32, p: &Policy) {
    if let Some(n) = p.order {
        *order = n;
    }
    if let Some(d) = p.degree {
        *degree = d;
    }
}

fn apply_rep(cfg: &mut SuiteConfig, a: &RepArgs) {
    let r = &mut cfg.rep;
    if a.mass.is_some() || a.k.is_some() {
        let (m0, k0) = r.params.first().copied().unwrap_or((1.0, 2.0));
        let p = (a.mass.unwrap_or(m0), a.k.unwrap_or(k0));
        r.params = vec![p];
        r.dispersion = p;
        r.massless_k = p.1;
    }
    if let Some(s) = a.spin {
        r.spins = vec![s];
    }
    if let Some(n) = a.samples {
        r.samples = n;
    }
    if a.fd_step.is_some() {
        r.fd_step = a.fd_step;
    }
}

fn apply_contract(cfg: &mut SuiteConfig, a: &ContractArgs) {
    let c = &mut cfg.contract;
    macro_rules! set {
        ($($f:ident => $g:ident),*) => { $( if let Some(x) = a.$f.clone() { c.$g = x; } )* };
    }
    set!(mass => mass, k => k, v => v, axis => axis, angle => angle, q => q, c_grid => c_grid);
    c.complex_mass |= a.complex_mass;
}

fn eval_report(expr: &str, order: u32, degree: u32) -> Result<CheckReport> {
    let t = Truncation::new(order, degree);
    let e = parse_element(expr, t)?;
    Ok(CheckReport::new("eval", Status::ReportOnly, e.to_string())
        .param("expr", expr)
        .param("N", order)
        .param("D", degree)
        .artifact("terms", e.len()))
}

fn run(cli: &Cli) -> Result<Vec<CheckReport>> {
    let mut cfg = match &cli.config {
        Some(p) => SuiteConfig::load(p)?,
        None => SuiteConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    match &cli.cmd {
        Cmd::Verify { what } => match what {
            Verify::Hopf { policy, dual_order } => {
                apply_policy(&mut cfg.hopf.order, &mut cfg.hopf.degree, policy);
                if let Some(n) = dual_order {
                    cfg.hopf.dual_order = *n;
                }
                cli::verify_hopf(&cfg.hopf)
            }
            Verify::Cocycle { policy } => {
                if policy.order.is_some() || policy.degree.is_some() {
                    let (n0, d0) = cfg.multiplier.cocycle.last().copied().unwrap_or((1, 4));
                    cfg.multiplier.cocycle = vec![(policy.order.unwrap_or(n0), policy.degree.unwrap_or(d0))];
                }
                cli::verify_cocycle(&cfg.multiplier)
            }
            Verify::Tau { policy } => {
                apply_policy(&mut cfg.multiplier.order, &mut cfg.multiplier.degree, policy);
                cli::verify_tau(&cfg.multiplier)
            }
            Verify::Unitarity { policy } => {
                apply_policy(&mut cfg.multiplier.order, &mut cfg.multiplier.degree, policy);
                cli::verify_unitarity(&cfg.multiplier)
            }
        },
        Cmd::Nogo { max_degree, quantum } => {
            if let Some(d) = max_degree {
                cfg.nogo.max_degree = *d;
            }
            cfg.nogo.quantum |= quantum;
            cli::run_nogo(&cfg.nogo)
        }
        Cmd::Rep { what } => {
            let (a, f): (&RepArgs, fn(&cli::RepConfig, u64) -> Result<Vec<CheckReport>>) = match what {
                Rep::Commutators(a) => (a, cli::rep_commutators),
                Rep::Dispersion(a) => (a, cli::rep_dispersion),
                Rep::Extract(a) => (a, cli::rep_extract),
                Rep::Compose(a) => (a, cli::rep_compose),
            };
            apply_rep(&mut cfg, a);
            f(&cfg.rep, cfg.seed)
        }
        Cmd::Contract { what } => match what {
            Contract::Multiplier(a) => {
                apply_contract(&mut cfg, a);
                cli::contract_multiplier(&cfg.contract)
            }
            Contract::Rep(a) => {
                apply_contract(&mut cfg, a);
                cli::contract_rep(&cfg.contract)
            }
            Contract::Appendix { samples } => {
                if let Some(n) = samples {
                    cfg.appendix.samples = *n;
                }
                cli::contract_appendix(&cfg.appendix, cfg.seed)
            }
            Contract::Family { args, family_k } => {
                apply_contract(&mut cfg, args);
                if let Some(g) = &args.c_grid {
                    cfg.contract.family_c_grid = g.clone();
                }
                if let Some(ks) = family_k {
                    cfg.contract.family_k = ks.clone();
                } else if let Some(k) = args.k {
                    cfg.contract.family_k = vec![k];
                }
                cli::contract_family(&cfg.contract)
            }
        },
        Cmd::Eval { expr, order, degree } => Ok(vec![eval_report(expr, *order, *degree)?]),
        Cmd::Suite { groups } => {
            if let Some(g) = groups {
                cfg.groups = g.clone();
            }
            cli::run_suite(&cfg)
        }
        Cmd::DefaultConfig => {
            print!("{}", SuiteConfig::default().to_toml()?);
            Ok(Vec::new())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|reports| {
        if matches!(cli.cmd, Cmd::DefaultConfig) {
            return Ok(0);
        }
        cli::emit(&reports, cli.format, cli.out.as_deref())?;
        Ok(cli::exit_code(&reports))
    });
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
