use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ffphi::counting::{nu_profile_brute, NuMethod, DEFAULT_PAIR_BUDGET};
use ffphi::isotropic::max_isotropic_dim;
use ffphi::suite::{run_suite, Battery, ExperimentConfig, ReportRecord, Verdict};
use ffphi::{
    max_isotropic_brute, max_isotropic_construct, sharpness_set, threshold_experiment, verify_null,
    Error, FieldSpec, NuFourier, PointSet, Result, ThresholdConfig, DEFAULT_POINT_CAP,
};

#[derive(Parser)]
#[command(
    name = "ffphi",
    version,
    about = "Exact finite-field checks for the norm-ratio function phi"
)]
struct Cli {
    /// Largest ambient space q^n any command may enumerate.
    #[arg(long, global = true, env = "FFPHI_CAP", default_value_t = DEFAULT_POINT_CAP)]
    cap: u64,
    /// Write JSON lines here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct FieldArgs {
    /// Field order as `p^ell` or `q`.
    #[arg(long)]
    q: Option<String>,
    #[arg(long, conflicts_with = "q")]
    p: Option<u64>,
    #[arg(long, requires = "p", default_value_t = 1)]
    ell: u32,
}

impl FieldArgs {
    fn field(&self) -> Result<Option<Arc<FieldSpec>>> {
        match (&self.q, self.p) {
            (Some(q), _) => Ok(Some(Arc::new(FieldSpec::parse(q)?))),
            (None, Some(p)) => Ok(Some(Arc::new(FieldSpec::new(p, self.ell)?))),
            (None, None) => Ok(None),
        }
    }

    fn require(&self) -> Result<Arc<FieldSpec>> {
        self.field()?
            .ok_or_else(|| Error::Parse("a field is required: pass --q or --p [--ell]".into()))
    }
}

#[derive(Args, Clone)]
struct BatteryArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    #[arg(long, default_value_t = 20)]
    samples: usize,
    #[arg(long)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Brute,
    Fourier,
}

#[derive(Subcommand)]
enum Cmd {
    /// Gauss sums and completed squares over every odd q <= 49 (or one field).
    Gauss {
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Zero-sphere transform against its closed form.
    SphereFt {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: usize,
    },
    /// Ratio-sphere transform against its closed form, every t != 0.
    RtFt {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        d: usize,
    },
    /// nu(t) for a set file, one record per t.
    Nu {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        d: Option<usize>,
        /// Field element index; all t when omitted.
        #[arg(long)]
        t: Option<u32>,
        #[arg(long)]
        set: PathBuf,
    },
    /// phi(E, E) for a set file.
    Coverage {
        #[arg(long)]
        set: PathBuf,
    },
    /// Coverage and min nu over seeded random sets of each size.
    Threshold {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        d: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Method::Fourier)]
        method: Method,
        /// Replace one sample by the sharpness set when the size matches.
        #[arg(long)]
        plant: bool,
    },
    /// Maximal totally isotropic subspace of F_q^n.
    Isotropic {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: usize,
        /// Also run the exhaustive search.
        #[arg(long)]
        brute: bool,
    },
    /// Product set F_q^(d/2) x H with phi(E, E) = {0}.
    Sharpness {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        verify: bool,
        /// Seed for the pair subsample on large sets.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the set to this file.
        #[arg(long)]
        set: Option<PathBuf>,
    },
    /// Coverage of F_q by phi on random sets of size q^2 + 1 in F_q^4, q = 3 mod 4
    #[command(name = "theorem-1.2")]
    Theorem12(BatteryArgs),
    /// Higher-dimensional lower bounds on nu against measured minima
    #[command(name = "theorem-1.3-bounds")]
    Theorem13Bounds(BatteryArgs),
    /// Fourier nu against the pair loop on random sets
    NuCross(BatteryArgs),
    /// Named batteries, or all of them.
    Suite {
        #[arg(long = "battery", value_delimiter = ',')]
        batteries: Vec<String>,
        #[command(flatten)]
        args: BatteryArgs,
    },
}

struct Output {
    w: Box<dyn Write>,
    failed: bool,
}

impl Output {
    fn record(&mut self, r: &ReportRecord) -> io::Result<()> {
        self.failed |= r.verdict == Verdict::Fail;
        writeln!(self.w, "{}", r.to_json_line())
    }

    fn single(
        &mut self,
        command: &str,
        inputs: Value,
        results: Value,
        verdict: Verdict,
        ops: &[&'static str],
        start: Instant,
    ) -> io::Result<()> {
        self.record(&ReportRecord {
            id: command.to_string(),
            command: command.to_string(),
            inputs,
            results,
            verdict,
            ops: ops.to_vec(),
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
        })
    }
}

fn nu_ops(brute: bool, fourier: bool) -> Vec<&'static str> {
    let mut ops = Vec::new();
    if brute {
        ops.push("nu_brute");
    }
    if fourier {
        ops.push("nu_fourier");
    }
    ops
}

fn battery_config(a: &BatteryArgs, cap: u64) -> Result<ExperimentConfig> {
    Ok(ExperimentConfig {
        field: a.field.field()?,
        d: a.d,
        t: None,
        sizes: a.sizes.clone(),
        samples: a.samples,
        seed: a.seed,
        cap,
    })
}

fn run_battery(b: Battery, cfg: &ExperimentConfig, out: &mut Output) -> Result<()> {
    let mut err = None;
    run_suite(b, cfg, &mut |r| {
        if let Err(e) = out.record(&r) {
            err.get_or_insert(e);
        }
    })?;
    match err {
        Some(e) => Err(e.into()),
        None => Ok(()),
    }
}

fn check_set_field(e: &PointSet, field: &FieldArgs, d: Option<usize>) -> Result<()> {
    if let Some(f) = field.field()? {
        if *f != **e.field() {
            return Err(Error::FieldMismatch(format!(
                "set file is over F_{}, command asked for F_{}",
                e.field().designation(),
                f.designation()
            )));
        }
    }
    if let Some(d) = d {
        if d != e.dim() {
            return Err(Error::Dimension(
                e.dim(),
                "set file dimension differs from --d",
            ));
        }
    }
    Ok(())
}

fn run(cli: &Cli, out: &mut Output) -> Result<()> {
    let cap = cli.cap;
    let start = Instant::now();
    match &cli.cmd {
        Cmd::Gauss { field } => {
            let cfg = ExperimentConfig {
                field: field.field()?,
                cap,
                ..Default::default()
            };
            run_battery(Battery::Gauss, &cfg, out)
        }
        Cmd::SphereFt { field, n } => {
            let cfg = ExperimentConfig {
                field: Some(field.require()?),
                d: Some(*n),
                cap,
                ..Default::default()
            };
            run_battery(Battery::SphereFt, &cfg, out)
        }
        Cmd::RtFt { field, d } => {
            let cfg = ExperimentConfig {
                field: Some(field.require()?),
                d: Some(*d),
                cap,
                ..Default::default()
            };
            run_battery(Battery::RtFt, &cfg, out)
        }
        Cmd::Nu { field, d, t, set } => {
            let e = PointSet::read(set)?;
            check_set_field(&e, field, *d)?;
            let f = e.field().clone();
            let ts: Vec<_> = match t {
                Some(t) => vec![f.try_elem(*t as u64)?],
                None => f.elements().collect(),
            };
            let pairs = (e.len() as u128).pow(2);
            let brute = if pairs <= DEFAULT_PAIR_BUDGET as u128 {
                Some(nu_profile_brute(&e, DEFAULT_PAIR_BUDGET)?)
            } else {
                None
            };
            let fourier = if e.dim() >= 4 && ts.iter().any(|t| !t.is_zero()) {
                Some(NuFourier::new(&e, cap)?)
            } else {
                None
            };
            for t in ts {
                let b = brute.as_ref().map(|p| p.get(t));
                let fv = match (&fourier, t.is_zero()) {
                    (Some(nf), false) => Some(nf.nu(t)?),
                    _ => None,
                };
                let verdict = match (b, fv) {
                    (Some(x), Some(y)) => Verdict::from_bool(x == y),
                    (None, None) => {
                        return Err(Error::CapExceeded {
                            what: "pair count |E|^2",
                            size: pairs,
                            cap: DEFAULT_PAIR_BUDGET as u128,
                        })
                    }
                    _ => Verdict::Pass,
                };
                out.single(
                    "nu",
                    json!({ "set": set, "q": f.designation(), "d": e.dim(), "size": e.len(), "t": t.index() }),
                    json!({ "nu_brute": b.map(|x| x.to_string()), "nu_fourier": fv.map(|x| x.to_string()) }),
                    verdict,
                    &nu_ops(b.is_some(), fv.is_some()),
                    start,
                )?;
            }
            Ok(())
        }
        Cmd::Coverage { set } => {
            let e = PointSet::read(set)?;
            let image = ffphi::phi_image(&e, cap, DEFAULT_PAIR_BUDGET)?;
            let full = image.len() == e.field().q() as usize;
            let image: Vec<u32> = image.iter().map(|t| t.index()).collect();
            out.single(
                "coverage",
                json!({ "set": set, "q": e.field().designation(), "d": e.dim(), "size": e.len() }),
                json!({ "image": image, "covers_field": full }),
                Verdict::Pass,
                &["phi_image"],
                start,
            )?;
            Ok(())
        }
        Cmd::Threshold {
            field,
            d,
            sizes,
            samples,
            seed,
            method,
            plant,
        } => {
            let f = field.require()?;
            let report = threshold_experiment(&ThresholdConfig {
                field: f.clone(),
                d: *d,
                sizes: sizes.clone(),
                samples: *samples,
                seed: *seed,
                cap,
                method: match method {
                    Method::Brute => NuMethod::Brute,
                    Method::Fourier => NuMethod::Fourier,
                },
                plant: *plant,
            })?;
            for r in &report.sizes {
                let verdict = if r.bounds.iter().any(|b| b.verdict == Verdict::Fail) {
                    Verdict::Fail
                } else if r.bounds.iter().any(|b| b.verdict == Verdict::Pass) {
                    Verdict::Pass
                } else {
                    Verdict::Vacuous
                };
                out.single(
                    "threshold",
                    json!({ "q": f.designation(), "d": d, "size": r.size, "samples": samples, "seed": seed.to_string() }),
                    serde_json::to_value(r).expect("report serializes"),
                    verdict,
                    &[
                        "threshold_experiment",
                        match method {
                            Method::Brute => "nu_brute",
                            Method::Fourier => "nu_fourier",
                        },
                    ],
                    start,
                )?;
            }
            Ok(())
        }
        Cmd::Isotropic { field, n, brute } => {
            let f = field.require()?;
            let h = max_isotropic_construct(*n, &f)?;
            let basis: Vec<Vec<u32>> = h
                .basis()
                .iter()
                .map(|v| v.iter().map(|x| x.index()).collect())
                .collect();
            let b = if *brute {
                Some(max_isotropic_brute(*n, &f, cap)?)
            } else {
                None
            };
            let ok = h.is_certified()
                && h.dim() == max_isotropic_dim(&f, *n)
                && b.is_none_or(|b| b == h.dim());
            out.single(
                "isotropic",
                json!({ "q": f.designation(), "n": n }),
                json!({
                    "basis": basis, "dim": h.dim(), "size": h.size().to_string(),
                    "certified": h.is_certified(), "brute_dim": b,
                }),
                Verdict::from_bool(ok),
                &["max_isotropic_construct", "max_isotropic_brute"][..1 + b.is_some() as usize],
                start,
            )?;
            Ok(())
        }
        Cmd::Sharpness {
            field,
            d,
            verify,
            seed,
            set,
        } => {
            let f = field.require()?;
            let sh = sharpness_set(&f, *d)?;
            if let Some(path) = set {
                sh.points.write(path)?;
            }
            let basis: Vec<Vec<u32>> =
                sh.h.basis()
                    .iter()
                    .map(|v| v.iter().map(|x| x.index()).collect())
                    .collect();
            let null_check = if *verify {
                Some(verify_null(&sh, *seed)?)
            } else {
                None
            };
            let size_ok = sh.points.len() as u64 == sh.expected_size;
            let verdict = Verdict::from_bool(size_ok && null_check.as_ref().is_none_or(|v| v.pass));
            out.single(
                "sharpness",
                json!({ "q": f.designation(), "d": d, "verify": verify, "seed": seed.to_string() }),
                json!({
                    "claim": sh.claim, "size": sh.points.len().to_string(),
                    "expected_size": sh.expected_size.to_string(), "h_basis": basis,
                    "image": null_check.as_ref().map(|v| v.image.clone()), "null": null_check,
                }),
                verdict,
                &["sharpness_set", "verify_null"][..1 + null_check.is_some() as usize],
                start,
            )?;
            Ok(())
        }
        Cmd::Theorem12(a) => run_battery(Battery::Theorem12, &battery_config(a, cap)?, out),
        Cmd::Theorem13Bounds(a) => {
            run_battery(Battery::Theorem13Bounds, &battery_config(a, cap)?, out)
        }
        Cmd::NuCross(a) => run_battery(Battery::NuCross, &battery_config(a, cap)?, out),
        Cmd::Suite { batteries, args } => {
            let list: Vec<Battery> = if batteries.is_empty() {
                Battery::ALL.to_vec()
            } else {
                batteries.iter().map(|b| b.parse()).collect::<Result<_>>()?
            };
            let cfg = battery_config(args, cap)?;
            for b in list {
                run_battery(b, &cfg, out)?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let w: Box<dyn Write> = match &cli.out {
        Some(path) => match File::create(path) {
            Ok(f) => Box::new(BufWriter::new(f)),
            Err(e) => {
                eprintln!(
                    "{}",
                    json!({ "error": format!("cannot open {}: {e}", path.display()) })
                );
                return ExitCode::from(2);
            }
        },
        None => Box::new(io::stdout().lock()),
    };
    let mut out = Output { w, failed: false };
    let result = run(&cli, &mut out);
    let code = match result {
        Ok(()) if out.failed => ExitCode::from(1),
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let line = json!({ "error": e.to_string(), "verdict": "fail" }).to_string();
            let _ = writeln!(out.w, "{line}");
            eprintln!("{line}");
            ExitCode::from(2)
        }
    };
    let _ = out.w.flush();
    code
}
