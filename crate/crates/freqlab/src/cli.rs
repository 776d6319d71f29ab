use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use freqlab_core::diagnostics::{analyze, DiagnosticsConfig, ReportRequest, DEFAULT_THRESHOLD};
use freqlab_core::dirichlet::{
    bohr_lift, p_norm_estimate, sup_norm_estimate, DirichletPolynomial, QmcConfig,
    DEFAULT_DIMENSION_CAP,
};
use freqlab_core::energy::{representation_counts, subset_energy_sup, SubsetMode, DEFAULT_BUDGET};
use freqlab_core::exactreal::{Rational, DEFAULT_PRECISION, DEFAULT_PRECISION_CAP};
use freqlab_core::frequency::{blocks, Frequency};
use freqlab_core::lambda::{
    describe_set, interpolate_bound, lambda_lower_ascent, lambda_lower_energy, lambda_upper_energy,
    lambda_upper_nikolskii, AscentConfig, Exponent,
};
use freqlab_core::verify::{run_suite, Check, VerifyConfig};
use serde_json::{json, Value};

use crate::config::{Format, RunConfig};
use crate::error::{CliError, CliResult, EXIT_OK, EXIT_VIOLATION};
use crate::formats::{self, to_json_bytes, with_record};
use crate::spec::{parse_rational, read_spec};
use crate::svg::{line_plot, Series};

#[derive(Debug, Parser)]
#[command(
    name = "freqlab",
    version,
    about = "Additive energies, Dirichlet-polynomial norms and Lambda(p) diagnostics for general frequencies"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Seed for every randomized step (named substreams are derived from it).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Working precision in bits for certified comparisons.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    pub precision: u32,
    /// Precision cap in bits before a comparison is reported undecidable.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION_CAP)]
    pub precision_cap: u32,
    /// Work budget in elementary operations.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Number of trailing blocks in tail-max estimates.
    #[arg(long, global = true, default_value_t = 4)]
    pub tail_window: usize,
    /// Worker threads.
    #[arg(long, global = true, env = "FREQLAB_JOBS")]
    pub jobs: Option<usize>,
    /// Write all outputs into this directory instead of stdout.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Args, Default)]
pub struct Selector {
    /// Restrict to the unit block λ ∩ [j, j+1).
    #[arg(long, conflicts_with_all = ["indices", "range"])]
    pub block: Option<u64>,
    /// Comma-separated indices.
    #[arg(long, value_delimiter = ',', conflicts_with = "range")]
    pub indices: Option<Vec<usize>>,
    /// Half-open index range a..b.
    #[arg(long)]
    pub range: Option<String>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Generate a frequency file from a JSON spec.
    Gen { spec: PathBuf },
    /// Additive energy E_k and representation counts of a set.
    Energy {
        freq: PathBuf,
        #[arg(short, long)]
        k: u32,
        #[command(flatten)]
        select: Selector,
        /// Also compute sup over subsets of E_k^{1/2k}/sqrt(#A').
        #[arg(long)]
        sup: bool,
    },
    /// Run the inequality suite on seeded random polynomials.
    Verify {
        freq: PathBuf,
        /// Checks to run (default: all).
        #[arg(long, value_delimiter = ',')]
        checks: Vec<String>,
        #[arg(long, default_value_t = 50)]
        instances: usize,
        #[arg(long, default_value_t = 8)]
        max_terms: usize,
        /// Self-test: corrupt every Nikolskii left-hand side.
        #[arg(long, hide = true)]
        corrupt: bool,
    },
    /// Density, t-profiles, hyper index and strip intervals.
    Report {
        freq: PathBuf,
        #[arg(long, default_value = "1,5/4,3/2,7/4,2,4")]
        p_grid: String,
        /// q values for the (2, q) t-profiles.
        #[arg(long, default_value = "4")]
        q_list: String,
        #[arg(long, default_value = "2")]
        k_list: String,
        #[arg(long, default_value_t = 14)]
        j_max: u64,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
    },
    /// p-norm of a polynomial: exact for even p, lattice rule otherwise, "inf" for a sup estimate.
    Norm {
        freq: PathBuf,
        /// Polynomial file.
        #[arg(long, conflicts_with = "ones")]
        poly: Option<PathBuf>,
        /// All-ones polynomial on these comma-separated indices.
        #[arg(long, value_delimiter = ',')]
        ones: Option<Vec<usize>>,
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 4096)]
        sup_samples: u64,
    },
    /// Lower and upper bounds on Lambda_{q,p} of a set.
    Lambda {
        freq: PathBuf,
        #[command(flatten)]
        select: Selector,
        #[arg(long, default_value = "2")]
        p: String,
        #[arg(long, default_value = "4")]
        q: String,
        #[arg(long, default_value_t = 32)]
        restarts: u32,
        /// Transfer the upper bound to another pair "p1,q1".
        #[arg(long)]
        transfer_to: Option<String>,
    },
}

/// What a command produced: the stdout payload, named files for --out-dir,
/// and the exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: Vec<u8>,
    pub files: Vec<(String, Vec<u8>)>,
    pub exit: i32,
}

impl Outcome {
    fn single(name: &str, bytes: Vec<u8>) -> Self {
        Outcome {
            stdout: bytes.clone(),
            files: vec![(name.into(), bytes)],
            exit: EXIT_OK,
        }
    }
}

fn parse_exponent(s: &str) -> CliResult<Exponent> {
    match s.trim() {
        "inf" | "infinity" => Ok(Exponent::Infinite),
        t => parse_rational(t)
            .map(Exponent::Finite)
            .map_err(CliError::Usage),
    }
}

fn parse_list<T>(s: &str, f: impl Fn(&str) -> CliResult<T>) -> CliResult<Vec<T>> {
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(f)
        .collect()
}

fn parse_u32(s: &str) -> CliResult<u32> {
    s.trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("expected an integer, got {s:?}")))
}

fn load(path: &Path, g: &GlobalArgs) -> CliResult<Arc<Frequency>> {
    Ok(Arc::new(
        formats::read_frequency(path, g.precision, g.precision_cap)?.0,
    ))
}

fn select(f: &Frequency, s: &Selector) -> CliResult<Vec<usize>> {
    let n = f.len();
    let idx: Vec<usize> = if let Some(j) = s.block {
        blocks(f)?
            .get(j)
            .ok_or_else(|| CliError::Usage(format!("block {j} is empty")))?
            .collect()
    } else if let Some(ix) = &s.indices {
        let mut v = ix.clone();
        v.sort_unstable();
        v.dedup();
        v
    } else if let Some(r) = &s.range {
        let (a, b) = r
            .split_once("..")
            .ok_or_else(|| CliError::Usage(format!("range must look like a..b, got {r:?}")))?;
        let a: usize = a
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad range start {a:?}")))?;
        let b: usize = b
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad range end {b:?}")))?;
        (a..b).collect()
    } else {
        (0..n).collect()
    };
    if let Some(i) = idx.iter().find(|&&i| i >= n) {
        return Err(CliError::Usage(format!(
            "index {i} out of range for a frequency of {n} values"
        )));
    }
    Ok(idx)
}

fn selector_params(s: &Selector, p: &mut BTreeMap<String, String>) {
    if let Some(j) = s.block {
        p.insert("block".into(), j.to_string());
    }
    if let Some(ix) = &s.indices {
        p.insert(
            "indices".into(),
            ix.iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(","),
        );
    }
    if let Some(r) = &s.range {
        p.insert("range".into(), r.clone());
    }
}

fn path_str(p: &std::path::Path) -> String {
    p.display().to_string()
}

pub fn run_config(cli: &Cli) -> RunConfig {
    let mut params = BTreeMap::new();
    let command = match &cli.command {
        Command::Gen { spec } => {
            params.insert("spec".into(), path_str(spec));
            "gen"
        }
        Command::Energy {
            freq,
            k,
            select,
            sup,
        } => {
            params.insert("freq".into(), path_str(freq));
            params.insert("k".into(), k.to_string());
            params.insert("sup".into(), sup.to_string());
            selector_params(select, &mut params);
            "energy"
        }
        Command::Verify {
            freq,
            checks,
            instances,
            max_terms,
            corrupt,
        } => {
            params.insert("freq".into(), path_str(freq));
            params.insert("checks".into(), checks.join(","));
            params.insert("instances".into(), instances.to_string());
            params.insert("max_terms".into(), max_terms.to_string());
            params.insert("corrupt".into(), corrupt.to_string());
            "verify"
        }
        Command::Report {
            freq,
            p_grid,
            q_list,
            k_list,
            j_max,
            threshold,
        } => {
            params.insert("freq".into(), path_str(freq));
            params.insert("p_grid".into(), p_grid.clone());
            params.insert("q_list".into(), q_list.clone());
            params.insert("k_list".into(), k_list.clone());
            params.insert("j_max".into(), j_max.to_string());
            params.insert("threshold".into(), threshold.to_string());
            "report"
        }
        Command::Norm {
            freq,
            poly,
            ones,
            p,
            sup_samples,
        } => {
            params.insert("freq".into(), path_str(freq));
            if let Some(x) = poly {
                params.insert("poly".into(), path_str(x));
            }
            if let Some(o) = ones {
                params.insert(
                    "ones".into(),
                    o.iter()
                        .map(|i| i.to_string())
                        .collect::<Vec<_>>()
                        .join(","),
                );
            }
            params.insert("p".into(), p.clone());
            params.insert("sup_samples".into(), sup_samples.to_string());
            "norm"
        }
        Command::Lambda {
            freq,
            select,
            p,
            q,
            restarts,
            transfer_to,
        } => {
            params.insert("freq".into(), path_str(freq));
            selector_params(select, &mut params);
            params.insert("p".into(), p.clone());
            params.insert("q".into(), q.clone());
            params.insert("restarts".into(), restarts.to_string());
            if let Some(t) = transfer_to {
                params.insert("transfer_to".into(), t.clone());
            }
            "lambda"
        }
    };
    let g = &cli.global;
    RunConfig {
        command: command.into(),
        params,
        seed: g.seed,
        precision: g.precision,
        precision_cap: g.precision_cap,
        budget: g.budget,
        tail_window: g.tail_window,
        jobs: g.jobs,
        out_dir: g.out_dir.as_deref().map(path_str),
        format: g.format,
    }
}

pub fn run(cli: &Cli) -> CliResult<Outcome> {
    let cfg = run_config(cli);
    let g = &cli.global;
    match &cli.command {
        Command::Gen { spec } => cmd_gen(spec, g, &cfg),
        Command::Energy {
            freq,
            k,
            select,
            sup,
        } => cmd_energy(&load(freq, g)?, *k, select, *sup, g, &cfg),
        Command::Verify {
            freq,
            checks,
            instances,
            max_terms,
            corrupt,
        } => {
            let checks = if checks.is_empty() {
                Check::ALL.to_vec()
            } else {
                checks
                    .iter()
                    .map(|c| {
                        Check::parse(c.trim())
                            .ok_or_else(|| CliError::Usage(format!("unknown check {c:?}")))
                    })
                    .collect::<CliResult<_>>()?
            };
            let vc = VerifyConfig {
                checks,
                instances: *instances,
                max_terms: *max_terms,
                seed: g.seed,
                budget: g.budget,
                corrupt: *corrupt,
                ..Default::default()
            };
            cmd_verify(&load(freq, g)?, &vc, g, &cfg)
        }
        Command::Report {
            freq,
            p_grid,
            q_list,
            k_list,
            j_max,
            threshold,
        } => {
            let req = ReportRequest {
                p_grid: parse_list(p_grid, |s| parse_rational(s).map_err(CliError::Usage))?,
                pairs: parse_list(q_list, parse_exponent)?
                    .into_iter()
                    .map(|q| (Exponent::int(2), q))
                    .collect(),
                k_list: parse_list(k_list, parse_u32)?,
                j_max: *j_max,
            };
            let dc = DiagnosticsConfig {
                tail_window: g.tail_window,
                budget: g.budget,
                threshold: *threshold,
                seed: g.seed,
                ..Default::default()
            };
            cmd_report(&load(freq, g)?, &req, &dc, g, &cfg)
        }
        Command::Norm {
            freq,
            poly,
            ones,
            p,
            sup_samples,
        } => {
            let f = load(freq, g)?;
            let d = match (poly, ones) {
                (Some(path), _) => formats::read_polynomial(path, &f)?,
                (None, Some(ix)) => DirichletPolynomial::ones(f.clone(), ix)?,
                (None, None) => return Err(CliError::Usage("norm needs --poly or --ones".into())),
            };
            cmd_norm(&d, &parse_exponent(p)?, *sup_samples, g, &cfg)
        }
        Command::Lambda {
            freq,
            select: s,
            p,
            q,
            restarts,
            transfer_to,
        } => {
            let f = load(freq, g)?;
            let idx = select(&f, s)?;
            let to = match transfer_to {
                Some(t) => {
                    let v = parse_list(t, parse_exponent)?;
                    if v.len() != 2 {
                        return Err(CliError::Usage(format!(
                            "--transfer-to needs \"p1,q1\", got {t:?}"
                        )));
                    }
                    Some((v[0].clone(), v[1].clone()))
                }
                None => None,
            };
            cmd_lambda(
                &f,
                &idx,
                &parse_exponent(p)?,
                &parse_exponent(q)?,
                *restarts,
                to,
                g,
                &cfg,
            )
        }
    }
}

fn with_precision(f: Frequency, g: &GlobalArgs) -> CliResult<Frequency> {
    let reg = f.registry();
    if reg.precision() == g.precision && reg.precision_cap() == g.precision_cap {
        return Ok(f);
    }
    let r = reg.with_precision(g.precision, g.precision_cap);
    Ok(Frequency::new(
        r,
        f.values().to_vec(),
        f.provenance().to_string(),
    )?)
}

fn cmd_gen(spec_path: &Path, g: &GlobalArgs, cfg: &RunConfig) -> CliResult<Outcome> {
    let spec = read_spec(spec_path)?.resolved(g.seed);
    let f = with_precision(spec.generate(g.seed)?, g)?;
    let file = formats::frequency_file(&f, Some(spec), Some(cfg.clone()));
    let v = serde_json::to_value(&file).expect("frequency file serializes");
    Ok(Outcome::single("frequency.json", to_json_bytes(&v)))
}

fn cmd_energy(
    f: &Arc<Frequency>,
    k: u32,
    s: &Selector,
    sup: bool,
    g: &GlobalArgs,
    cfg: &RunConfig,
) -> CliResult<Outcome> {
    let idx = select(f, s)?;
    let values = f.select(&idx);
    let rc = representation_counts(f.registry(), &values, k, g.budget)?;
    let mut body = json!({
        "set": describe_set(f, &idx),
        "set_size": idx.len(),
        "k": k,
        "energy": rc.energy()?.to_string(),
        "support_size": rc.support_size(),
        "total": rc.total().to_string(),
        "dense": rc.is_dense(),
    });
    if sup {
        let ss = subset_energy_sup(f.registry(), &values, k, SubsetMode::Auto, g.budget)?;
        let mut v = formats::subset_sup_json(&ss);
        v["subset"] = json!(ss.subset.iter().map(|&i| idx[i]).collect::<Vec<_>>());
        body["subset_sup"] = v;
    }
    let js = to_json_bytes(&with_record(cfg, "freqlab/energy/v1", body));
    let csv = formats::rep_counts_csv(&rc, f)?;
    let stdout = if g.format == Format::Csv {
        csv.clone()
    } else {
        js.clone()
    };
    Ok(Outcome {
        stdout,
        files: vec![("energy.json".into(), js), ("rep_counts.csv".into(), csv)],
        exit: EXIT_OK,
    })
}

fn cmd_verify(
    f: &Arc<Frequency>,
    vc: &VerifyConfig,
    g: &GlobalArgs,
    cfg: &RunConfig,
) -> CliResult<Outcome> {
    let r = run_suite(f, vc)?;
    let js = to_json_bytes(&with_record(
        cfg,
        "freqlab/verify/v1",
        formats::verify_json(&r),
    ));
    let csv = formats::verify_csv(&r)?;
    let stdout = if g.format == Format::Csv {
        csv.clone()
    } else {
        js.clone()
    };
    let exit = if r.passed() { EXIT_OK } else { EXIT_VIOLATION };
    Ok(Outcome {
        stdout,
        files: vec![("verify.json".into(), js), ("verify.csv".into(), csv)],
        exit,
    })
}

/// Largest set size for the lattice-rule check of p < 2 in reports.
const REPORT_QMC_MAX_SIZE: usize = 16;

/// For p < 2 on the grid: a lattice-rule estimate of ‖1_B‖_2 / ‖1_B‖_p on the
/// largest block B whose lift fits the dimension cap, a numeric-only lower
/// estimate of Λ_{2,p}(B).
fn qmc_block_ratios(
    f: &Arc<Frequency>,
    p_grid: &[Rational],
    j_max: u64,
    seed: u64,
    budget: u64,
) -> CliResult<Vec<Value>> {
    let bd = blocks(f)?;
    let qcfg = QmcConfig::default();
    for (j, r) in bd.iter().collect::<Vec<_>>().into_iter().rev() {
        if j < 1 || j > j_max || r.len() < 2 || r.len() > REPORT_QMC_MAX_SIZE {
            continue;
        }
        let idx: Vec<usize> = r.collect();
        let d = DirichletPolynomial::ones(f.clone(), &idx)?;
        let lift = bohr_lift(&d)?;
        if lift.dim() > DEFAULT_DIMENSION_CAP {
            continue;
        }
        let l2 = (idx.len() as f64).sqrt();
        let mut out = Vec::new();
        for p in p_grid
            .iter()
            .filter(|p| **p < Rational::from_integer(2.into()))
        {
            let est = p_norm_estimate(&lift, p, &qcfg, seed, budget)?;
            out.push(json!({
                "j": j,
                "size": idx.len(),
                "dim": lift.dim(),
                "p": p.to_string(),
                "norm": formats::norm_json(&est),
                "ratio": l2 / est.value,
                "caveats": ["numeric-only"],
            }));
        }
        return Ok(out);
    }
    Ok(vec![])
}

fn fmt_exp(e: &Exponent) -> String {
    e.to_string().replace('/', "_")
}

fn cmd_report(
    f: &Arc<Frequency>,
    req: &ReportRequest,
    dc: &DiagnosticsConfig,
    g: &GlobalArgs,
    cfg: &RunConfig,
) -> CliResult<Outcome> {
    let r = analyze(f, req, dc)?;
    let mut body = formats::strip_json(&r);
    body["qmc_block_ratios"] = json!(qmc_block_ratios(
        f,
        &req.p_grid,
        req.j_max,
        g.seed,
        g.budget
    )?);
    let js = to_json_bytes(&with_record(cfg, "freqlab/report/v1", body));
    let mut files = vec![("report.json".to_string(), js.clone())];
    files.push(("density.csv".into(), formats::density_csv(&r.density)?));
    files.push((
        "s_intervals.csv".into(),
        formats::s_intervals_csv(&r.s_intervals)?,
    ));
    for t in &r.t_profiles {
        files.push((
            format!("t_profile_p{}_q{}.csv", fmt_exp(&t.p), fmt_exp(&t.q)),
            formats::t_profile_csv(t)?,
        ));
    }
    for h in &r.hyper_index {
        files.push((format!("hyper_k{}.csv", h.k), formats::hyper_csv(h)?));
    }
    if g.format == Format::Svg {
        let pts = |s: &[(u64, f64)]| s.iter().map(|(j, v)| (*j as f64, *v)).collect::<Vec<_>>();
        for t in &r.t_profiles {
            let lower: Vec<(f64, f64)> = t.entries.iter().map(|e| (e.j as f64, e.lower)).collect();
            let upper: Vec<(f64, f64)> = t.entries.iter().map(|e| (e.j as f64, e.upper)).collect();
            let title = format!("t-profile (p={}, q={})", t.p, t.q);
            let svg = line_plot(
                &title,
                "j",
                "log bound / j",
                &[
                    Series {
                        label: "lower",
                        points: lower,
                    },
                    Series {
                        label: "upper",
                        points: upper,
                    },
                ],
            );
            files.push((
                format!("t_profile_p{}_q{}.svg", fmt_exp(&t.p), fmt_exp(&t.q)),
                svg,
            ));
        }
        for h in &r.hyper_index {
            let svg = line_plot(
                &format!("hyper index k={}", h.k),
                "j",
                "h_j",
                &[Series {
                    label: "h_j",
                    points: pts(&h.profile.sequence),
                }],
            );
            files.push((format!("hyper_k{}.svg", h.k), svg));
        }
        let svg = line_plot(
            "block density",
            "j",
            "log #block / j",
            &[Series {
                label: "log #B_j / j",
                points: pts(&r.density.block_ratio.sequence),
            }],
        );
        files.push(("density.svg".into(), svg));
    }
    let stdout = match g.format {
        Format::Json => js,
        Format::Csv => files
            .iter()
            .find(|(n, _)| n.starts_with("t_profile") && n.ends_with(".csv"))
            .map_or_else(Vec::new, |x| x.1.clone()),
        Format::Svg => files
            .iter()
            .find(|(n, _)| n.ends_with(".svg"))
            .map_or_else(Vec::new, |x| x.1.clone()),
    };
    Ok(Outcome {
        stdout,
        files,
        exit: EXIT_OK,
    })
}

fn cmd_norm(
    d: &DirichletPolynomial,
    p: &Exponent,
    sup_samples: u64,
    g: &GlobalArgs,
    cfg: &RunConfig,
) -> CliResult<Outcome> {
    let lift = bohr_lift(d)?;
    let mut body = json!({
        "polynomial": formats::polynomial_json(d),
        "p": p.to_string(),
        "lift_dim": lift.dim(),
        "l2_squared": d.l2_squared().to_string(),
    });
    match p {
        Exponent::Infinite => {
            body["sup"] = formats::sup_json(&sup_norm_estimate(
                &lift,
                sup_samples,
                DEFAULT_DIMENSION_CAP,
                g.seed,
            )?)
        }
        Exponent::Finite(x) => {
            body["norm"] = formats::norm_json(&p_norm_estimate(
                &lift,
                x,
                &QmcConfig::default(),
                g.seed,
                g.budget,
            )?)
        }
    }
    Ok(Outcome::single(
        "norm.json",
        to_json_bytes(&with_record(cfg, "freqlab/norm/v1", body)),
    ))
}

#[allow(clippy::too_many_arguments)]
fn cmd_lambda(
    f: &Arc<Frequency>,
    idx: &[usize],
    p: &Exponent,
    q: &Exponent,
    restarts: u32,
    transfer_to: Option<(Exponent, Exponent)>,
    g: &GlobalArgs,
    cfg: &RunConfig,
) -> CliResult<Outcome> {
    let mut body = json!({});
    let k = q
        .even_integer()
        .map(|e| e / 2)
        .filter(|k| *k >= 2 && *p == Exponent::int(2));
    let mut report = match k {
        Some(k) => {
            let acfg = AscentConfig {
                restarts,
                seed: g.seed,
                budget: g.budget,
                ..Default::default()
            };
            let rep = match lambda_lower_ascent(f, idx, 2 * k, &acfg) {
                Ok(r) => r,
                Err(e) if e.is_resource_limit() => {
                    lambda_lower_energy(f, idx, k, SubsetMode::Auto, g.budget)?
                }
                Err(e) => return Err(e.into()),
            };
            let sup =
                subset_energy_sup(f.registry(), &f.select(idx), k, SubsetMode::Auto, g.budget)?;
            body["energy_upper"] = formats::bound_json(&lambda_upper_energy(idx.len(), &sup));
            rep
        }
        None => {
            let mut r = lambda_lower_energy(f, &[], 2, SubsetMode::Exact, g.budget)?;
            r.set = describe_set(f, idx);
            r.set_size = idx.len();
            r.p = p.clone();
            r.q = q.clone();
            r
        }
    };
    report.upper = lambda_upper_nikolskii(idx.len(), p, q).ok();
    if let Some((p1, q1)) = transfer_to {
        body["transferred"] = formats::lambda_json(&interpolate_bound(&report, &p1, &q1)?);
    }
    body["report"] = formats::lambda_json(&report);
    Ok(Outcome::single(
        "lambda.json",
        to_json_bytes(&with_record(cfg, "freqlab/lambda/v1", body)),
    ))
}
