use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "ricci-orbit",
    version,
    about = "Exact Kähler–Ricci iterations of radial metrics on CP¹"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Include full certificates in sweep output.
    #[arg(long, global = true)]
    pub evidence: bool,

    /// Worker threads for sweeps; output does not depend on it.
    #[arg(long, default_value_t = 1, global = true)]
    pub jobs: usize,

    /// Cap on the estimated coefficient count of a symbolic Ricci step.
    #[arg(long, env = "RICCI_ORBIT_SIZE_LIMIT", global = true)]
    pub size_limit: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plotdata,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the Kähler–Ricci iteration from a potential or density.
    Iterate {
        #[command(flatten)]
        input: Input,
        /// Number of Ricci steps.
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Require `+ρ` or `−ρ` to be Kähler at each step.
        #[arg(long, default_value = "+", value_parser = parse_sign, allow_hyphen_values = true)]
        sign: ricci_orbit::Sign,
    },
    /// Run one check on a potential or density.
    Check {
        #[arg(value_enum)]
        what: CheckKind,
        #[command(flatten)]
        input: Input,
        /// Apply the check to the Ricci form of the input instead.
        #[arg(long)]
        ricci_of: bool,
    },
    /// Certify parameter intervals of the family log(1 + a·x + x²).
    Sweep {
        /// Iterate to certify.
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Width below which intervals are settled by exact samples.
        #[arg(long, default_value = "1/10000")]
        resolution: String,
        /// Parameter window `lo,hi`.
        #[arg(long, default_value = "1,2")]
        window: String,
        /// Instead of sweeping, certify the coefficients of the k-th numerator
        /// on the interval `lo,hi`.
        #[arg(long)]
        coeffs_on: Option<String>,
        /// Print the symbolic degree table of iterates 1..=k.
        #[arg(long)]
        degrees: bool,
    },
    /// Symplectic or Bochner–Euclidean volume.
    Volume {
        #[command(flatten)]
        input: Input,
        /// Use the Ricci form of the input.
        #[arg(long)]
        ricci_of: bool,
        /// Report the Bochner–Euclidean volume of the potential.
        #[arg(long)]
        euclidean: bool,
        /// With --euclidean: the potential lives on its maximal disc, not CP¹.
        #[arg(long)]
        off_cp1: bool,
        /// Also report |∫ρ − 4π| for the input density.
        #[arg(long)]
        chern: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Kahler,
    Einstein,
    Induced,
    Bochner,
}

#[derive(Debug, Args)]
pub struct Input {
    /// Potential: JSON {"f":[..],"h":[..]}, `FS`, an expression such as
    /// `(1+x)^4` or `1+a*x+x^2 @ a=3/2`, or a file holding one of these.
    #[arg(long, conflicts_with = "density")]
    pub potential: Option<String>,
    /// Density: JSON {"num":[..],"den":[..]}, `FS`, an expression, or a file.
    #[arg(long)]
    pub density: Option<String>,
    /// Parameter value; alone it selects the family log(1 + a·x + x²).
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
}

fn parse_sign(s: &str) -> Result<ricci_orbit::Sign, String> {
    match s {
        "+" | "plus" => Ok(ricci_orbit::Sign::Plus),
        "-" | "minus" => Ok(ricci_orbit::Sign::Minus),
        _ => Err(format!("expected + or -, got {s:?}")),
    }
}
