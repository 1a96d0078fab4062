use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use wetspell::distributions::{limit_moment, limit_quantile, ModelParams, NegBinParams};
use wetspell::estimation::{
    fit_least_squares, fit_mle, fit_negbin, fit_quantile, fit_quantile_tau_scan, FitMethod, FitReport,
    MaximaSample, QuantileTriple,
};
use wetspell::gof::{emit_plot_data, GridSpec};
use wetspell::pipeline::{
    build_maxima, durations, parse_csv, segment_with, synthetic_series, CensoringSpec, CsvOptions,
    PrecipSeries, WetPeriods,
};
use wetspell::rng::RngState;
use wetspell::samplers::{LimitSampler, PrelimitMax};
use wetspell::Error;

use crate::args::*;

/// Failure with its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_ESTIMATION: i32 = 3;

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn estimation(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_ESTIMATION,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::DegenerateSample(_)
            | Error::BracketingFailure { .. }
            | Error::EmptyTauGrid
            | Error::TauScanFailed(_)
            | Error::ZeroVariance
            | Error::InvalidStart
            | Error::NoOverdispersion { .. }
            | Error::EmptySample { .. } => EXIT_ESTIMATION,
            _ => EXIT_INPUT,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::input(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Segment(a) => segment(&a),
        Command::Fit(a) => fit(&a),
        Command::GofSweep(a) => gof_sweep(&a),
        Command::Simulate(a) => simulate(&a),
        Command::Quantile(a) => {
            let p = model(&a.params)?;
            println!("{}", limit_quantile(a.eps, &p)?);
            Ok(())
        }
        Command::Moment(a) => {
            let p = model(&a.params)?;
            println!("{}", limit_moment(a.delta, &p)?);
            Ok(())
        }
    }
}

fn model(p: &ParamArgs) -> CliResult<ModelParams> {
    Ok(ModelParams::new(p.r, p.lambda, p.gamma)?)
}

fn output(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::input(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize>(value: &T, path: Option<&Path>) -> CliResult<()> {
    let mut out = output(path)?;
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| CliError::input(e.to_string()))?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn read_series(s: &SeriesInput) -> CliResult<PrecipSeries> {
    let opts = CsvOptions {
        missing_marker: s.missing_marker.clone(),
        has_header: None,
    };
    if s.input.as_os_str() == "-" {
        Ok(parse_csv(io::stdin().lock(), "<stdin>", &opts)?)
    } else {
        Ok(wetspell::pipeline::ingest_csv(&s.input, &opts)?)
    }
}

fn read_periods(s: &SeriesInput) -> CliResult<WetPeriods> {
    let series = read_series(s)?;
    let wp = segment_with(&series, s.wet_threshold, s.missing_policy)?;
    for w in &wp.warnings {
        eprintln!("warning: missing day {} ends wet period {}", w.day + 1, w.period + 1);
    }
    Ok(wp)
}

fn segment(a: &SegmentArgs) -> CliResult<()> {
    let wp = read_periods(&a.series)?;
    write_json(&wp, a.out.as_deref())?;
    let listing: Vec<String> = durations(&wp).iter().map(usize::to_string).collect();
    eprintln!("{} wet periods; durations: {}", wp.count(), listing.join(" "));
    Ok(())
}

/// Document written by `fit`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitOutput {
    /// Number of maxima in the fitted sample.
    pub m: usize,
    /// Censoring threshold; absent for maxima input.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<usize>,
    /// Where the shape `r` came from: `given`, `from-durations` or `none`.
    pub r_source: String,
    /// Negative-binomial fit of wet-period lengths minus one, when requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub negbin: Option<NegBinParams>,
    pub reports: Vec<FitReport>,
}

/// Known shape and its provenance.
struct Shape {
    r: Option<f64>,
    source: &'static str,
    negbin: Option<NegBinParams>,
}

fn resolve_shape(src: Option<ShapeSource>, wp: Option<&WetPeriods>) -> CliResult<Shape> {
    match src {
        None => Ok(Shape {
            r: None,
            source: "none",
            negbin: None,
        }),
        Some(ShapeSource::Given(r)) => Ok(Shape {
            r: Some(r),
            source: "given",
            negbin: None,
        }),
        Some(ShapeSource::FromDurations) => {
            let wp = wp.ok_or_else(|| CliError::input("--r from-durations needs a daily series input"))?;
            let d: Vec<u64> = durations(wp).iter().map(|&v| v as u64).collect();
            let nb = fit_negbin(&d)?;
            Ok(Shape {
                r: Some(nb.r()),
                source: "from-durations",
                negbin: Some(nb),
            })
        }
    }
}

/// Estimators requested by `--method`, in report order.
fn methods(m: Method) -> &'static [FitMethod] {
    match m {
        Method::Quantile => &[FitMethod::QuantileRough],
        Method::Ls => &[FitMethod::LeastSquares],
        Method::Mle => &[FitMethod::Mle],
        Method::All => &[FitMethod::QuantileRough, FitMethod::LeastSquares, FitMethod::Mle],
    }
}

/// Validated estimator configuration.
struct Plan {
    methods: Vec<FitMethod>,
    triple: QuantileTriple,
    tau_grid: Option<Vec<f64>>,
    r: Option<f64>,
}

impl Plan {
    fn new(est: &EstimatorArgs, r: Option<f64>) -> CliResult<Self> {
        let triple = QuantileTriple::new(est.p1, est.p2, est.p3)
            .map_err(|e| CliError::input(format!("quantile levels: {e}")))?;
        if let Some(grid) = &est.tau_grid {
            if grid.is_empty() {
                return Err(CliError::input("--tau-grid is empty"));
            }
            for &tau in grid {
                QuantileTriple::from_tau(tau).map_err(|e| CliError::input(format!("--tau-grid: {e}")))?;
            }
        }
        let mut methods = methods(est.method).to_vec();
        if r.is_none() {
            if est.method == Method::Ls {
                return Err(CliError::input("--method ls needs --r (a value or from-durations)"));
            }
            methods.retain(|m| *m != FitMethod::LeastSquares);
        }
        Ok(Plan {
            methods,
            triple,
            tau_grid: est.tau_grid.clone(),
            r,
        })
    }

    fn quantile(&self, s: &MaximaSample) -> wetspell::Result<FitReport> {
        match &self.tau_grid {
            Some(grid) => {
                let scan = fit_quantile_tau_scan(s, grid)?;
                let mut rep = FitReport::closed_form(FitMethod::QuantileRough, s, scan.params);
                rep.tau = Some(scan.tau);
                Ok(rep)
            }
            None => Ok(FitReport::closed_form(FitMethod::QuantileRough, s, fit_quantile(s, &self.triple)?)),
        }
    }

    fn least_squares(&self, s: &MaximaSample, r: f64) -> wetspell::Result<FitReport> {
        let ls = fit_least_squares(s, r)?;
        Ok(FitReport::closed_form(
            FitMethod::LeastSquares,
            s,
            ModelParams::new(r, ls.lambda, ls.gamma)?,
        ))
    }

    /// Runs every planned estimator. The MLE starts from the least-squares
    /// fit with `r` held fixed when `r` is known, otherwise from the
    /// quantile fit with all three parameters free.
    fn run(&self, s: &MaximaSample) -> Vec<(FitMethod, Result<FitReport, String>)> {
        let msg = |e: Error| e.to_string();
        let mut quantile: Option<Result<FitReport, String>> = None;
        let mut ls: Option<Result<FitReport, String>> = None;
        let mut out = Vec::new();
        for &m in &self.methods {
            let res = match m {
                FitMethod::QuantileRough => quantile.get_or_insert_with(|| self.quantile(s).map_err(msg)).clone(),
                FitMethod::LeastSquares => {
                    let r = self.r.expect("planned only with known r");
                    ls.get_or_insert_with(|| self.least_squares(s, r).map_err(msg)).clone()
                }
                FitMethod::Mle => {
                    let seed = match self.r {
                        Some(r) => ls.get_or_insert_with(|| self.least_squares(s, r).map_err(msg)).clone(),
                        None => quantile.get_or_insert_with(|| self.quantile(s).map_err(msg)).clone(),
                    };
                    seed.map_err(|e| format!("no starting point: {e}"))
                        .and_then(|init| fit_mle(s, &init.params, self.r.is_some()).map_err(msg))
                }
            };
            out.push((m, res));
        }
        out
    }
}

fn read_maxima(s: &SeriesInput) -> CliResult<MaximaSample> {
    let series = read_series(s)?;
    let mut values = Vec::with_capacity(series.len());
    for (i, v) in series.values().iter().enumerate() {
        match v {
            Some(x) if *x > 0.0 => values.push(*x),
            _ => {
                return Err(CliError::input(format!(
                    "{}: value {} is not a positive maximum",
                    s.input.display(),
                    i + 1
                )))
            }
        }
    }
    Ok(MaximaSample::new(values)?)
}

fn fit(a: &FitArgs) -> CliResult<()> {
    let censoring = CensoringSpec::new(a.min_wet_days)?;
    let (sample, wp) = match a.input_kind {
        InputKind::Maxima => (read_maxima(&a.series)?, None),
        InputKind::Series => {
            let wp = read_periods(&a.series)?;
            (build_maxima(&wp, &censoring)?, Some(wp))
        }
    };
    let shape = resolve_shape(a.estimator.r, wp.as_ref())?;
    let plan = Plan::new(&a.estimator, shape.r)?;
    let mut reports = Vec::new();
    for (m, res) in plan.run(&sample) {
        reports.push(res.map_err(|e| CliError::estimation(format!("{} fit failed: {e}", m.as_str())))?);
    }
    let doc = FitOutput {
        m: sample.len(),
        h: wp.as_ref().map(|_| censoring.h()),
        r_source: shape.source.to_string(),
        negbin: shape.negbin,
        reports,
    };
    write_json(&doc, a.out.as_deref())
}

fn gof_sweep(a: &SweepArgs) -> CliResult<()> {
    let wp = read_periods(&a.series)?;
    let shape = resolve_shape(a.estimator.r, Some(&wp))?;
    let plan = Plan::new(&a.estimator, shape.r)?;
    if let Some(dir) = &a.out {
        fs::create_dir_all(dir).map_err(|e| CliError::input(format!("{}: {e}", dir.display())))?;
    }
    let mut out = BufWriter::new(io::stdout().lock());
    let names: Vec<String> = plan.methods.iter().map(|m| format!("ks_{}", m.as_str())).collect();
    writeln!(out, "h\tm_h\t{}", names.join("\t"))?;
    for h in a.h_range.from..=a.h_range.to {
        let censoring = CensoringSpec::new(h)?;
        let sample = match build_maxima(&wp, &censoring) {
            Ok(s) => s,
            Err(Error::EmptySample { .. }) => {
                writeln!(out, "{h}\t0{}", "\t".repeat(plan.methods.len()))?;
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let mut cells = Vec::new();
        for (m, res) in plan.run(&sample) {
            match res {
                Ok(rep) => {
                    cells.push(rep.ks_distance.to_string());
                    if let Some(dir) = &a.out {
                        let table = emit_plot_data(&sample, &rep.params, &GridSpec::SampleRange { points: 200 });
                        let path = dir.join(format!("h{h:02}_{}.tsv", m.as_str()));
                        let file = File::create(&path)
                            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
                        table.write_tsv(BufWriter::new(file))?;
                    }
                }
                Err(e) => {
                    eprintln!("h={h}: {} fit failed: {e}", m.as_str());
                    cells.push(String::new());
                }
            }
        }
        writeln!(out, "{h}\t{}\t{}", sample.len(), cells.join("\t"))?;
    }
    out.flush()?;
    Ok(())
}

fn simulate(a: &SimulateArgs) -> CliResult<()> {
    let params = model(&a.params)?;
    let mut rng = RngState::new(a.seed);
    let mut out = output(a.out.as_deref())?;
    match a.mode {
        SimulateMode::Limit => {
            let sampler = LimitSampler::new(params, a.tag)?;
            for _ in 0..a.n {
                writeln!(out, "{}", sampler.sample(&mut rng))?;
            }
        }
        SimulateMode::Prelimit => {
            let scheme = PrelimitMax::new(a.prelimit_n, &params, a.q)?;
            for _ in 0..a.n {
                writeln!(out, "{}", scheme.sample(&mut rng))?;
            }
        }
        SimulateMode::Series => {
            let lengths = NegBinParams::new(params.r(), a.duration_p)?;
            let series = synthetic_series(&params, &lengths, a.n, &mut rng);
            writeln!(out, "value_mm")?;
            for v in series.values() {
                writeln!(out, "{}", v.expect("synthetic series has no gaps"))?;
            }
        }
    }
    out.flush()?;
    Ok(())
}
