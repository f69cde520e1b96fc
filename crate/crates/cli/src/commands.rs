//! The four subcommands. Each returns the rendered output and an exit code.

use clap::Args;
use cogcap::optimize::linspace;
use cogcap::{
    alpha_star, capacity_cd, costa_capacity, mc_verify, rate_rd, sweep_capacity, Capacity,
    ChannelParams, SweepParameter, Unit,
};

use crate::config::{CommonArgs, Format, Resolved};
use crate::error::{exit, CliError};
use crate::output::{
    Body, CapacityResults, CheckRow, OutputRecord, RateCurveResults, RateRow, SweepResults,
    SweepRow, VerifyResults,
};

/// Text for stdout plus the process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub exit_code: u8,
}

fn render(record: &OutputRecord, format: Format, exit_code: u8) -> Result<Outcome, CliError> {
    let stdout = match format {
        Format::Json => record.to_json(),
        Format::Csv => record.to_csv()?,
    };
    Ok(Outcome { stdout, exit_code })
}

fn finite_or_invalid(name: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::invalid(format!("{name} must be finite, got {v}")))
    }
}

fn capacity_results(params: &ChannelParams<f64>, unit: Unit) -> Result<CapacityResults, CliError> {
    let c = capacity_cd(params)?;
    let alpha_star = if params.is_degenerate() {
        None
    } else {
        Some(alpha_star(params)?)
    };
    Ok(CapacityResults {
        capacity: c.value.in_unit(unit).into(),
        achievability: c.achievability.in_unit(unit).into(),
        converse: c.converse.in_unit(unit).into(),
        alpha_star,
        costa_reference: unit.from_nats(costa_capacity(params.p(), params.n())),
    })
}

pub fn cmd_capacity(common: &CommonArgs) -> Result<Outcome, CliError> {
    let Resolved { raw, unit, label } = common.resolve()?;
    let params = raw.validate()?;
    let body = Body::Capacity(capacity_results(&params, unit.into())?);
    render(
        &OutputRecord::new(raw, unit, label, body),
        common.format,
        exit::SUCCESS,
    )
}

#[derive(Debug, Clone, Args)]
pub struct RateCurveArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Lower end of the alpha grid
    #[arg(long, allow_hyphen_values = true, default_value_t = -1.0)]
    pub alpha_lo: f64,
    /// Upper end of the alpha grid
    #[arg(long, allow_hyphen_values = true, default_value_t = 2.0)]
    pub alpha_hi: f64,
    /// Number of grid points, at least 2
    #[arg(long, default_value_t = 101)]
    pub steps: usize,
}

pub fn cmd_rate_curve(args: &RateCurveArgs) -> Result<Outcome, CliError> {
    let Resolved { raw, unit, label } = args.common.resolve()?;
    let params = raw.validate()?;
    let lo = finite_or_invalid("--alpha-lo", args.alpha_lo)?;
    let hi = finite_or_invalid("--alpha-hi", args.alpha_hi)?;
    if lo >= hi {
        return Err(CliError::invalid(format!(
            "invalid alpha range: --alpha-lo ({lo}) must be below --alpha-hi ({hi})"
        )));
    }
    if args.steps < 2 {
        return Err(CliError::invalid(format!(
            "--steps must be at least 2, got {}",
            args.steps
        )));
    }
    let unit_: Unit = unit.into();
    let rows = linspace(lo, hi, args.steps)
        .into_iter()
        .map(|alpha| {
            let r = rate_rd(&params, alpha)?;
            Ok(RateRow {
                alpha,
                rate: unit_.from_nats(r.rate),
            })
        })
        .collect::<Result<Vec<_>, cogcap::Error>>()?;
    let capacity = match capacity_cd(&params)?.value {
        Capacity::Finite(v) => unit_.from_nats(v),
        Capacity::Infinite => unreachable!("rate_rd rejects degenerate channels"),
    };
    let body = Body::RateCurve(RateCurveResults {
        alpha_star: alpha_star(&params)?,
        capacity,
        rows,
    });
    render(
        &OutputRecord::new(raw, unit, label, body),
        args.common.format,
        exit::SUCCESS,
    )
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Swept parameter: rho-s2z, rho-xs1 or snr (P/N with N held fixed)
    #[arg(long, default_value = "rho-s2z")]
    pub parameter: SweepParameter,
    #[arg(long, allow_hyphen_values = true)]
    pub from: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub to: f64,
    /// Number of grid points, at least 2
    #[arg(long, default_value_t = 11)]
    pub steps: usize,
    /// Values of the curve parameter; one curve per value
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub curves: Vec<f64>,
    /// Parameter held at each `--curves` value
    #[arg(long, default_value = "rho-s2z")]
    pub curve_parameter: SweepParameter,
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<Outcome, CliError> {
    let Resolved { raw, unit, label } = args.common.resolve()?;
    let base = raw.validate()?;
    let from = finite_or_invalid("--from", args.from)?;
    let to = finite_or_invalid("--to", args.to)?;
    if from >= to {
        return Err(CliError::invalid(format!(
            "invalid sweep range: --from ({from}) must be below --to ({to})"
        )));
    }
    if args.steps < 2 {
        return Err(CliError::invalid(format!(
            "--steps must be at least 2, got {}",
            args.steps
        )));
    }
    let grid = linspace(from, to, args.steps);
    let rows = if args.curves.is_empty() {
        sweep_capacity(&base, args.parameter, &grid, unit.into())?
            .into_iter()
            .map(|pt| SweepRow {
                x: pt.x,
                curve: None,
                capacity: pt.y.into(),
            })
            .collect()
    } else {
        if args.curve_parameter == args.parameter {
            return Err(CliError::invalid(format!(
                "--curve-parameter must differ from --parameter (both {})",
                args.parameter
            )));
        }
        let mut rows = Vec::with_capacity(args.curves.len() * grid.len());
        for &c in &args.curves {
            let c = finite_or_invalid("--curves", c)?;
            let curve_base = args.curve_parameter.apply(&base, c)?;
            rows.extend(
                sweep_capacity(&curve_base, args.parameter, &grid, unit.into())?
                    .into_iter()
                    .map(|pt| SweepRow {
                        x: pt.x,
                        curve: Some(c),
                        capacity: pt.y.into(),
                    }),
            );
        }
        rows
    };
    let body = Body::Sweep(SweepResults {
        parameter: args.parameter.name().to_string(),
        curve_parameter: (!args.curves.is_empty()).then(|| args.curve_parameter.name().to_string()),
        rows,
    });
    render(
        &OutputRecord::new(raw, unit, label, body),
        args.common.format,
        exit::SUCCESS,
    )
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Coefficient of the auxiliary variable [default: the optimal one]
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<Outcome, CliError> {
    let Resolved { raw, unit, label } = args.common.resolve()?;
    let params = raw.validate()?;
    if params.is_degenerate() {
        return Err(CliError::invalid(
            "verification needs a non-degenerate channel (|rho_xs1| < 1 and |rho_s2z| < 1)",
        ));
    }
    let alpha = match args.alpha {
        Some(a) => finite_or_invalid("--alpha", a)?,
        None => alpha_star(&params)?,
    };
    let report = mc_verify(&params, alpha, args.common.samples, args.common.seed)?;
    let u: Unit = unit.into();
    let checks = report
        .checks
        .iter()
        .map(|c| {
            let (estimate, std_error, error) = match &c.estimate {
                Ok(e) => (
                    Some(u.from_nats(e.value)),
                    Some(u.from_nats(e.std_error)),
                    None,
                ),
                Err(e) => (None, None, Some(e.to_string())),
            };
            CheckRow {
                name: c.name.to_string(),
                closed_form: u.from_nats(c.closed_form),
                estimate,
                std_error,
                z_score: c.z_score().filter(|z| z.is_finite()),
                pass: c.pass,
                error,
            }
        })
        .collect();
    let all_passed = report.all_passed();
    let body = Body::Verify(VerifyResults {
        alpha,
        alpha_star: report.alpha_star,
        samples: report.n,
        seed: report.seed,
        all_passed,
        checks,
    });
    let code = if all_passed {
        exit::SUCCESS
    } else {
        exit::VERIFICATION_FAILED
    };
    render(
        &OutputRecord::new(raw, unit, label, body),
        args.common.format,
        code,
    )
}
