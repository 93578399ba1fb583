use std::fmt::Write as _;
use std::path::Path;

use ricci_orbit::expr::{parse_density, parse_potential};
use ricci_orbit::induced::{
    binomial_test, bochner_scale, is_projectively_induced_radial, ricci_potential, BinomialMatch,
    BochnerScale, Inducedness,
};
use ricci_orbit::radial::{check_kahler_cp1, hessian_density, is_einstein, iterate, ricci};
use ricci_orbit::rational::{format_rational, parse_rational};
use ricci_orbit::sweep::{
    coeff_positivity_interval, kahler_interval, symbolic_iterate, DegreeRow, SweepOptions,
    DEFAULT_SIZE_LIMIT,
};
use ricci_orbit::volume::{
    chern_check, euclidean_volume, format_decimal, signed_volume, symplectic_volume, ChernCheck,
    VolumeReport,
};
use ricci_orbit::{
    BigRational, Error, IterationOrbit, KahlerVerdict, RadialDensity, RadialLogPotential, RatFunc,
    Sign,
};
use serde::Serialize;

use crate::args::{CheckKind, Cli, Command, Format, Input};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_HALTED: i32 = 3;
pub const EXIT_SIZE_LIMIT: i32 = 4;

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SizeLimit { .. } => EXIT_SIZE_LIMIT,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

pub struct Output {
    pub text: String,
    pub code: i32,
}

type Outcome = Result<Output, Failure>;

fn ok(text: String) -> Outcome {
    Ok(Output {
        text,
        code: EXIT_OK,
    })
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

enum Source {
    Potential(RadialLogPotential),
    Density(RadialDensity),
}

/// Inline text, or the contents of the file it names.
fn read_arg(s: &str) -> Result<String, Failure> {
    let path = Path::new(s);
    if !s.trim_start().starts_with('{') && path.is_file() {
        return std::fs::read_to_string(path).map_err(|e| input_error(format!("{s}: {e}")));
    }
    Ok(s.to_string())
}

fn resolve(input: &Input) -> Result<Source, Failure> {
    let a = input.a.as_deref().map(parse_rational).transpose()?;
    if let Some(p) = &input.potential {
        return Ok(Source::Potential(parse_potential(
            &read_arg(p)?,
            a.as_ref(),
        )?));
    }
    if let Some(d) = &input.density {
        return Ok(Source::Density(parse_density(&read_arg(d)?, a.as_ref())?));
    }
    match a {
        Some(a) => Ok(Source::Potential(RadialLogPotential::family(&a))),
        None => Err(input_error(
            "one of --potential, --density or --a is required",
        )),
    }
}

fn density_of(src: &Source) -> Result<RadialDensity, Failure> {
    match src {
        Source::Potential(p) => Ok(hessian_density(p)?),
        Source::Density(v) => Ok(v.clone()),
    }
}

fn potential_of(src: Source, what: &str) -> Result<RadialLogPotential, Failure> {
    match src {
        Source::Potential(p) => Ok(p),
        Source::Density(_) => Err(input_error(format!("{what} needs --potential (or --a)"))),
    }
}

fn ricci_or_flat(v: &RadialDensity) -> Result<RadialDensity, Failure> {
    ricci(v).ok_or_else(|| input_error("the Ricci form vanishes identically"))
}

/// `x = 0` followed by 61 points log-spaced over `[10⁻³, 10³]`.
fn plot_grid() -> Vec<f64> {
    std::iter::once(0.0)
        .chain((0..=60).map(|i| 10f64.powf(-3.0 + f64::from(i) / 10.0)))
        .collect()
}

fn plot_table(columns: &[(String, &RatFunc)]) -> String {
    let mut out = String::from("x");
    for (name, _) in columns {
        write!(out, ",{name}").unwrap();
    }
    out.push('\n');
    for x in plot_grid() {
        out.push_str(&format_decimal(x));
        for (_, v) in columns {
            write!(out, ",{}", format_decimal(v.eval_f64(x))).unwrap();
        }
        out.push('\n');
    }
    out
}

/// `λ` per step, read off the next iterate when it exists; only Kähler steps
/// are tested.
fn orbit_lambdas(orbit: &IterationOrbit) -> Vec<Option<String>> {
    let n = orbit.densities.len();
    (0..n)
        .map(|i| {
            if !orbit.verdicts[i].is_kahler() {
                return None;
            }
            if i + 1 < n {
                let q = orbit.densities[i + 1]
                    .ratfunc()
                    .div(orbit.densities[i].ratfunc())
                    .ok()?;
                return q.as_constant().map(|l| format_rational(&l));
            }
            lambda_str(&orbit.densities[i])
        })
        .collect()
}

fn lambda_str(v: &RadialDensity) -> Option<String> {
    is_einstein(v).map(|l| format_rational(&l))
}

#[derive(Serialize)]
struct StepReport {
    k: usize,
    density: RatFunc,
    display: String,
    num_degree: usize,
    den_degree: usize,
    verdict: KahlerVerdict,
    /// `λ` with `ρ = λ·ω`, when the step is Kähler–Einstein.
    einstein: Option<String>,
}

#[derive(Serialize)]
struct IterateReport {
    input: String,
    k_max: usize,
    sign: Sign,
    steps: Vec<StepReport>,
    all_kahler: bool,
    halted_at: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ricci_flat_at: Option<usize>,
    /// First step equal to its predecessor.
    fixed_point_at: Option<usize>,
}

fn cmd_iterate(cli: &Cli, input: &Input, k: usize, sign: Sign) -> Outcome {
    let v0 = density_of(&resolve(input)?)?;
    let orbit = iterate(&v0, k, sign);
    let code = if orbit.all_kahler() {
        EXIT_OK
    } else {
        EXIT_HALTED
    };
    let einstein = orbit_lambdas(&orbit);
    let text = match cli.format {
        Format::Plotdata => {
            let cols: Vec<(String, &RatFunc)> = orbit
                .densities
                .iter()
                .enumerate()
                .map(|(i, v)| (format!("rho{i}"), v.ratfunc()))
                .collect();
            plot_table(&cols)
        }
        Format::Csv => {
            let mut out =
                String::from("k,num_degree,den_degree,status,degree_gap,einstein,density\n");
            for (i, (v, verdict)) in orbit.densities.iter().zip(&orbit.verdicts).enumerate() {
                let status = serde_json::to_value(verdict).unwrap()["status"]
                    .as_str()
                    .unwrap()
                    .to_string();
                writeln!(
                    out,
                    "{i},{},{},{status},{},{},\"{}\"",
                    v.num().degree().unwrap_or(0),
                    v.den().degree().unwrap_or(0),
                    verdict.degree_gap,
                    einstein[i].clone().unwrap_or_default(),
                    v
                )
                .unwrap();
            }
            out
        }
        Format::Json => {
            let steps = orbit
                .densities
                .iter()
                .zip(&orbit.verdicts)
                .enumerate()
                .map(|(i, (v, verdict))| StepReport {
                    k: i,
                    density: v.ratfunc().clone(),
                    display: v.to_string(),
                    num_degree: v.num().degree().unwrap_or(0),
                    den_degree: v.den().degree().unwrap_or(0),
                    verdict: verdict.clone(),
                    einstein: einstein.get(i).cloned().flatten(),
                })
                .collect();
            let fixed_point_at =
                (1..orbit.densities.len()).find(|&i| orbit.densities[i] == orbit.densities[i - 1]);
            json(&IterateReport {
                input: v0.to_string(),
                k_max: k,
                sign,
                steps,
                all_kahler: orbit.all_kahler(),
                halted_at: orbit.halted_at,
                ricci_flat_at: orbit.ricci_flat_at,
                fixed_point_at,
            })
        }
    };
    Ok(Output { text, code })
}

#[derive(Serialize)]
struct KahlerReport {
    check: &'static str,
    density: String,
    verdict: KahlerVerdict,
}

#[derive(Serialize)]
struct EinsteinReport {
    check: &'static str,
    density: String,
    einstein: bool,
    lambda: Option<String>,
}

#[derive(Serialize)]
struct InducedReport {
    check: &'static str,
    potential: String,
    #[serde(flatten)]
    verdict: Inducedness,
    /// `Q = (1 + s·x)ⁿ` for the polynomial under the logarithm.
    #[serde(skip_serializing_if = "Option::is_none")]
    binomial: Option<BinomialReport>,
}

#[derive(Serialize)]
struct BinomialReport {
    n: usize,
    #[serde(with = "ricci_orbit::rational::serde_rational")]
    scale: BigRational,
}

#[derive(Serialize)]
struct BochnerReport {
    check: &'static str,
    potential: String,
    #[serde(flatten)]
    scale: BochnerScale,
    normalized: String,
}

fn cmd_check(cli: &Cli, what: CheckKind, input: &Input, ricci_of: bool) -> Outcome {
    if cli.format == Format::Plotdata {
        return Err(input_error("check does not produce plot data"));
    }
    let src = resolve(input)?;
    let csv = cli.format == Format::Csv;
    match what {
        CheckKind::Kahler | CheckKind::Einstein => {
            let mut v = density_of(&src)?;
            if ricci_of {
                v = ricci_or_flat(&v)?;
            }
            if what == CheckKind::Kahler {
                let verdict = check_kahler_cp1(&v);
                if csv {
                    let status = serde_json::to_value(&verdict).unwrap()["status"]
                        .as_str()
                        .unwrap()
                        .to_string();
                    return ok(format!(
                        "status,degree_gap\n{status},{}\n",
                        verdict.degree_gap
                    ));
                }
                return ok(json(&KahlerReport {
                    check: "kahler",
                    density: v.to_string(),
                    verdict,
                }));
            }
            let lambda = lambda_str(&v);
            if csv {
                return ok(format!(
                    "einstein,lambda\n{},{}\n",
                    lambda.is_some(),
                    lambda.unwrap_or_default()
                ));
            }
            ok(json(&EinsteinReport {
                check: "einstein",
                density: v.to_string(),
                einstein: lambda.is_some(),
                lambda,
            }))
        }
        CheckKind::Induced => {
            let mut pot = potential_of(src, "check induced")?;
            if ricci_of {
                pot = ricci_potential(&pot)?;
            }
            let verdict = is_projectively_induced_radial(&pot);
            let binomial = if pot.h().degree() == Some(0) {
                binomial_test(pot.f())?
                    .map(|BinomialMatch { n, scale }| BinomialReport { n, scale })
            } else {
                None
            };
            if csv {
                let tag = serde_json::to_value(&verdict).unwrap()["verdict"]
                    .as_str()
                    .unwrap()
                    .to_string();
                let coeffs = verdict
                    .embedding()
                    .map(|e| {
                        e.a.iter()
                            .map(format_rational)
                            .collect::<Vec<_>>()
                            .join(" ")
                    })
                    .unwrap_or_default();
                return ok(format!("verdict,a\n{tag},{coeffs}\n"));
            }
            ok(json(&InducedReport {
                check: "induced",
                potential: pot.to_string(),
                verdict,
                binomial,
            }))
        }
        CheckKind::Bochner => {
            let mut pot = potential_of(src, "check bochner")?;
            if ricci_of {
                pot = ricci_potential(&pot)?;
            }
            let scale = bochner_scale(&pot)?;
            if csv {
                return ok(format!(
                    "c,normalized_potential\n{},\"{}\"\n",
                    format_rational(&scale.c),
                    scale.normalized_potential
                ));
            }
            ok(json(&BochnerReport {
                check: "bochner",
                potential: pot.to_string(),
                normalized: scale.normalized_potential.to_string(),
                scale,
            }))
        }
    }
}

fn parse_pair(s: &str) -> Result<(BigRational, BigRational), Failure> {
    let (lo, hi) = s
        .split_once(',')
        .ok_or_else(|| input_error(format!("expected lo,hi but got {s:?}")))?;
    Ok((parse_rational(lo)?, parse_rational(hi)?))
}

#[derive(Serialize)]
struct DegreeTable {
    degrees: Vec<DegreeRow>,
}

fn cmd_sweep(
    cli: &Cli,
    k: usize,
    resolution: &str,
    window: &str,
    coeffs_on: Option<&str>,
    degrees: bool,
) -> Outcome {
    if cli.format == Format::Plotdata {
        return Err(input_error("sweep does not produce plot data"));
    }
    let size_limit = cli.size_limit.unwrap_or(DEFAULT_SIZE_LIMIT);
    let csv = cli.format == Format::Csv;
    if degrees {
        let rows: Vec<DegreeRow> = symbolic_iterate(k, size_limit)?
            .into_iter()
            .map(|s| s.degrees)
            .collect();
        if csv {
            let mut out = String::from(
                "k,num_deg_x,den_deg_x,num_deg_a,den_deg_a,unreduced_num_deg_x,unreduced_den_deg_x,terms\n",
            );
            for r in &rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    r.k,
                    r.num_deg_x,
                    r.den_deg_x,
                    r.num_deg_a,
                    r.den_deg_a,
                    r.unreduced_num_deg_x,
                    r.unreduced_den_deg_x,
                    r.terms
                )
                .unwrap();
            }
            return ok(out);
        }
        return ok(json(&DegreeTable { degrees: rows }));
    }
    let header = "a_lo,a_hi,k,verdict,witness\n";
    if let Some(range) = coeffs_on {
        let (lo, hi) = parse_pair(range)?;
        let steps = symbolic_iterate(k, size_limit)?;
        let mut ci = coeff_positivity_interval(&steps[k - 1].numerator, &lo, &hi)?;
        ci.k = k;
        if csv {
            return ok(format!("{header}{}\n", ci.csv_row()));
        }
        if !cli.evidence {
            ci.strip_evidence();
        }
        return ok(json(&ci));
    }
    let resolution = parse_rational(resolution)?;
    let (lo, hi) = parse_pair(window)?;
    let opts = SweepOptions {
        lo,
        hi,
        size_limit,
        jobs: cli.jobs,
    };
    let mut report = kahler_interval(k, &resolution, &opts)?;
    if csv {
        let mut out = String::from(header);
        for iv in &report.intervals {
            out.push_str(&iv.csv_row());
            out.push('\n');
        }
        return ok(out);
    }
    if !cli.evidence {
        report.strip_evidence();
    }
    ok(json(&report))
}

#[derive(Serialize)]
struct VolumeOutput {
    density: String,
    volume: VolumeReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    chern_check: Option<ChernCheck>,
}

#[derive(Serialize)]
struct EuclideanOutput {
    potential: String,
    #[serde(flatten)]
    verdict: ricci_orbit::volume::EuclideanVolumeVerdict,
}

fn cmd_volume(
    cli: &Cli,
    input: &Input,
    ricci_of: bool,
    euclidean: bool,
    off_cp1: bool,
    chern: bool,
) -> Outcome {
    let src = resolve(input)?;
    if euclidean {
        let mut pot = potential_of(src, "volume --euclidean")?;
        if ricci_of {
            pot = ricci_potential(&pot)?;
        }
        let verdict = euclidean_volume(&pot, !off_cp1)?;
        return match cli.format {
            Format::Plotdata => Err(input_error("--euclidean does not produce plot data")),
            Format::Csv => {
                let v = serde_json::to_value(&verdict).unwrap();
                let class = v["classification"]["kind"].as_str().unwrap().to_string();
                let value = v["classification"]["value"]
                    .as_str()
                    .unwrap_or("")
                    .to_string();
                let basis = v["basis"].as_str().unwrap().to_string();
                let literal = verdict
                    .literal_integral
                    .as_ref()
                    .and_then(|l| l.value)
                    .map(format_decimal)
                    .unwrap_or_default();
                ok(format!(
                    "classification,value,basis,literal_integral,discrepancy\n{class},{value},{basis},{literal},{}\n",
                    verdict.discrepancy
                ))
            }
            Format::Json => ok(json(&EuclideanOutput {
                potential: pot.to_string(),
                verdict,
            })),
        };
    }
    let base = density_of(&src)?;
    let v = if ricci_of {
        ricci_or_flat(&base)?
    } else {
        base.clone()
    };
    if cli.format == Format::Plotdata {
        return ok(plot_table(&[("v".to_string(), v.ratfunc())]));
    }
    // a Ricci density is integrated with its sign
    let volume = if ricci_of {
        signed_volume(&v)?
    } else {
        symplectic_volume(&v)?
    };
    let chern_check = chern.then(|| chern_check(&base)).transpose()?;
    if cli.format == Format::Csv {
        let mut out = String::from("finite,value,err,tail_cut");
        if chern_check.is_some() {
            out.push_str(",chern_residual");
        }
        out.push('\n');
        write!(
            out,
            "{},{},{},{}",
            volume.finite,
            volume.value.map(format_decimal).unwrap_or_default(),
            volume.err.map(format_decimal).unwrap_or_default(),
            volume
                .tail_cut
                .as_ref()
                .map(format_rational)
                .unwrap_or_default()
        )
        .unwrap();
        if let Some(c) = &chern_check {
            write!(out, ",{}", format_decimal(c.residual)).unwrap();
        }
        out.push('\n');
        return ok(out);
    }
    ok(json(&VolumeOutput {
        density: v.to_string(),
        volume,
        chern_check,
    }))
}

pub fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Iterate { input, k, sign } => cmd_iterate(cli, input, *k, *sign),
        Command::Check {
            what,
            input,
            ricci_of,
        } => cmd_check(cli, *what, input, *ricci_of),
        Command::Sweep {
            k,
            resolution,
            window,
            coeffs_on,
            degrees,
        } => cmd_sweep(cli, *k, resolution, window, coeffs_on.as_deref(), *degrees),
        Command::Volume {
            input,
            ricci_of,
            euclidean,
            off_cp1,
            chern,
        } => cmd_volume(cli, input, *ricci_of, *euclidean, *off_cp1, *chern),
    }
}
