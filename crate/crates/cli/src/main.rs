use std::io::Read;
use std::process::ExitCode;

use arlimit_cli::envelope::{ErrorBody, RootInput};
use arlimit_cli::{run, Command, Request, Response, Status};
use clap::{Parser, ValueEnum};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Verb {
    /// Characteristic roots of the AR coefficients.
    Roots,
    /// Closed-form limit A for the given roots and shifts.
    Limit,
    /// Closed form plus every applicable brute-force oracle.
    Oracle,
    /// Simulate an AR(k) path and report its sums.
    Simulate,
}

impl From<Verb> for Command {
    fn from(v: Verb) -> Self {
        match v {
            Verb::Roots => Command::Roots,
            Verb::Limit => Command::Limit,
            Verb::Oracle => Command::Oracle,
            Verb::Simulate => Command::Simulate,
        }
    }
}

/// Asymptotic limits of AR(k) lattice sums.
///
/// Responses are JSON on stdout; the exit status is 0 on success, 1 when the
/// request fails and 2 when it cannot be parsed.
#[derive(Debug, Parser)]
#[command(name = "arlimit", version)]
struct Cli {
    /// Command to run (may instead come from --json).
    verb: Option<Verb>,

    /// Structured request file ('-' for stdin); flags override its fields.
    #[arg(long, value_name = "FILE")]
    json: Option<String>,

    /// AR coefficients α_1..α_k, comma separated.
    #[arg(long, allow_hyphen_values = true, value_name = "A1,A2,..")]
    alphas: Option<String>,

    /// Roots as `re` or `re,im` entries separated by ';' or spaces.
    #[arg(long, allow_hyphen_values = true, value_name = "RE[,IM];..")]
    roots: Option<String>,

    /// Integer shifts s_1..s_k, comma separated.
    #[arg(long, allow_hyphen_values = true, value_name = "S1,S2,..")]
    shifts: Option<String>,

    /// Total shift S = |s_1 + ... + s_k|.
    #[arg(long = "S", value_name = "S")]
    s: Option<u64>,

    /// Series length for `simulate`.
    #[arg(long)]
    n: Option<usize>,

    /// Smaller size for the slope oracle [default: 150].
    #[arg(long)]
    n1: Option<usize>,

    /// Larger size for the slope oracle [default: 200].
    #[arg(long)]
    n2: Option<usize>,

    /// Box half-width for truncated B_S [default: smallest with tail bound ≤ 1e-12].
    #[arg(long = "M", value_name = "M")]
    m: Option<usize>,

    /// Trapezoid nodes for the contour oracle [default: enough for double precision].
    #[arg(long)]
    points: Option<usize>,

    /// Noise standard deviation [default: 1].
    #[arg(long)]
    sigma: Option<f64>,

    /// PRNG seed (ChaCha20) [default: 0].
    #[arg(long)]
    seed: Option<u64>,

    /// Burn-in steps [default: ⌈10k / (1 − max|λ|)⌉].
    #[arg(long)]
    burn_in: Option<usize>,

    /// Oracle agreement tolerance, relative to 1 + |value| [default: 1e-6].
    #[arg(long)]
    tol: Option<f64>,

    /// Roots closer than this are treated as repeated [default: 1e-7].
    #[arg(long)]
    cluster_tol: Option<f64>,

    /// Largest lag reported by `simulate` [default: 5].
    #[arg(long)]
    max_lag: Option<usize>,

    /// Include the simulated values in the response.
    #[arg(long)]
    values: bool,

    /// Write the simulated series to FILE, one value per line.
    #[arg(long, value_name = "FILE")]
    export: Option<String>,

    /// Pretty-print the response.
    #[arg(long)]
    pretty: bool,
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<T>().map_err(|e| format!("{what}: {t:?}: {e}")))
        .collect()
}

fn parse_roots(text: &str) -> Result<Vec<RootInput>, String> {
    text.split(|c: char| c == ';' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|entry| {
            let parts = parse_list::<f64>(entry, "roots")?;
            match parts.as_slice() {
                [re] => Ok(RootInput::Real(*re)),
                [re, im] => Ok(RootInput::Pair([*re, *im])),
                _ => Err(format!("roots: {entry:?} is not `re` or `re,im`")),
            }
        })
        .collect()
}

fn build_request(cli: &Cli) -> Result<Request, String> {
    let mut req = match &cli.json {
        Some(path) => {
            let text = if path == "-" {
                let mut buf = String::new();
                std::io::stdin()
                    .read_to_string(&mut buf)
                    .map_err(|e| format!("stdin: {e}"))?;
                buf
            } else {
                std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?
            };
            serde_json::from_str::<Request>(&text).map_err(|e| format!("{e}"))?
        }
        None => Request::default(),
    };
    if let Some(v) = cli.verb {
        req.command = Some(v.into());
    }
    if let Some(a) = &cli.alphas {
        req.alphas = Some(parse_list(a, "alphas")?);
    }
    if let Some(r) = &cli.roots {
        req.roots = Some(parse_roots(r)?);
    }
    if let Some(s) = &cli.shifts {
        req.shifts = Some(parse_list(s, "shifts")?);
    }
    macro_rules! take {
        ($($field:ident),*) => { $( if cli.$field.is_some() { req.$field = cli.$field; } )* };
    }
    take!(s, n, n1, n2, m, points, sigma, seed, burn_in, tol, cluster_tol, max_lag);
    if cli.values {
        req.include_values = Some(true);
    }
    if cli.export.is_some() {
        req.export = cli.export.clone();
    }
    Ok(req)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (response, parse_failed) = match build_request(&cli) {
        Ok(req) => (run(&req), false),
        Err(message) => (
            Response::error(
                cli.verb.map(Into::into),
                ErrorBody {
                    code: "PARSE_ERROR".into(),
                    message,
                    details: None,
                },
            ),
            true,
        ),
    };
    let text = if cli.pretty {
        response.to_json_pretty()
    } else {
        response.to_json()
    };
    println!("{text}");
    if let Some(err) = &response.error {
        eprintln!("arlimit: {}: {}", err.code, err.message);
    }
    match (response.status, parse_failed) {
        (Status::Ok, _) => ExitCode::SUCCESS,
        (Status::Error, true) => ExitCode::from(2),
        (Status::Error, false) => ExitCode::FAILURE,
    }
}
