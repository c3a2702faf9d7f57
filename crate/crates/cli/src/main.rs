//! `gelfand`: spherical transforms on Gelfand pairs and their verification.

mod commands;
mod config;
mod exit;
mod output;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{Check, Outcome};
use config::{load_config_file, RunConfig, CONFIG_ENV};
use exit::CliError;

const ABOUT: &str = "Spherical analysis on the pairs flat_r1, e2, u1_c and heis1";

const LONG_ABOUT: &str = "\
Spherical analysis on four Gelfand pairs of polynomial growth: flat_r1 (the
line), e2 (motion group of the plane), u1_c (U(1) acting on C, as a strong
pair) and heis1 (U(1) acting on the Heisenberg group).

Settings come from defaults, then a key = value config file (--config, or
the file named by GELFAND_CONFIG), then command-line flags. Config keys are
the long flag names with '-' written as '_' (tol.<check> sets a per-check
tolerance). Every artifact gets a .meta.json sidecar recording the settings
and the seed.

Exit codes: 0 pass, 1 fail, 2 usage, 3 input, 4 inconclusive.";

#[derive(Parser, Debug)]
#[command(name = "gelfand", version, about = ABOUT, long_about = LONG_ABOUT)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Enumerate points of the embedded spectrum
    #[command(long_about = "\
Enumerate points of the embedded spectrum: the image of the bounded
spherical functions under their eigenvalues for the generating operators.
This set is closed in R^l. On heis1 the fan rays xi_1 = |xi_2|(2k+1)
accumulate on the half-line xi_2 = 0, and the output includes that limit
ray (rows of family 'ray'; --eta sets its range).

Columns: xi_1..xi_l, then family, lambda, m, k, eta.
Defaults: --lambda 0:4:5 (heis1 -1:1:3), --m 0, --kmax 2.")]
    Spectrum,
    /// Spherical transform of a sampled function
    #[command(long_about = "\
Spherical transform Gf(phi) = integral of f(x) phi(x^-1) dx of a bi-K-invariant
(or, on u1_c, K-central or K-type) function, evaluated on a spectrum grid
that carries Plancherel weights. Input is SampledFunction JSON; output is
SpectrumFunction CSV (xi_1..xi_l, value_re, value_im, weight). The sidecar
echoes the truncation radius and node counts.

Defaults: --lambda 0:12:200:gl (heis1 -8:8:160:gl, --kmax 40); on u1_c
types follow the input's symmetry tag (K-central: --m -8:8).")]
    Transform { input: PathBuf },
    /// Inverse spherical transform of a weighted spectrum CSV
    #[command(long_about = "\
Inverse spherical transform f(x) = sum of beta * Gf(phi) * phi(x) over the spectrum
grid, weighted by the Plancherel measure. Input is SpectrumFunction CSV with
weights (as written by 'transform'); output is SampledFunction JSON.
With --reference FILE the output lives on the reference grid and the
relative L2 error against it is written to the sidecar.

Defaults: Gauss-Legendre grid of --radius 12 with --nodes 200.")]
    Invert { input: PathBuf },
    /// Run a verification check on a built-in test family
    #[command(long_about = "\
Run one verification check on the configured pair and a built-in test
family; writes a JSON report and exits 0 on pass, 1 on fail, 4 when the
data cannot decide (for instance a finite-difference step too coarse).

  plancherel           ||f||_2 equals the Plancherel-weighted norm of Gf, and
                       inversion recovers f (Gaussian e^{-|x|^2/2})
  multiplicativity     G(f*g) = Gf Gg for the direct convolution
  commutativity        f*g = g*f: the bi-K-invariant algebra is commutative
  posdef               bounded spherical functions are positive definite
                       (smallest Gram eigenvalue >= -tol)
  eigen                phi is a joint eigenfunction of the generating
                       operators with eigenvalues xi
  ktype-orthogonality  K-central functions of different K-types convolve
                       to zero (u1_c)
  decay                transforms of K-types decay faster than every power
                       of the type parameter (u1_c; --N, --M, --profile)
  generators           a polynomial change of generating system is
                       invertible with polynomially bounded distortion")]
    Verify { check: Check },
    /// Split a K-central function into K-types
    #[command(long_about = "\
Split a K-central function on u1_c into its K-types
f_m(theta, z) = e^{im theta} * (mean over k of f(k theta, z) e^{-im k theta})
for |m| <= --max-types. Writes one SampledFunction JSON per type and an index
CSV (m, l2_norm, tail_flag) flagging types below --tol (default 1e-8)
relative to ||f||_2.")]
    Decompose { input: PathBuf },
    /// Interpolate lattice values by a compactly supported bump
    #[command(long_about = "\
Interpolate a function a on the lattice Z^r by h(t) = sum of a(l) eta(t - l) with a
bump eta of radius --bump-radius (default 1/3). h agrees with a on the
lattice and its Schwartz seminorms satisfy
||h||_(N) <= A_N sup (1 + |l|)^N |a(l)|; the report checks both for
N <= --N (default 3). Input CSV columns: l_1..l_r, value_re, value_im.")]
    Interpolate { input: PathBuf },
    /// Extend a u1_c per-type spectrum function to the plane
    #[command(long_about = "\
Extend a rapidly decaying transform on the u1_c spectrum to a Schwartz
function u on R^2 by bump interpolation across K-types. Refuses input
whose decay fit fails (exit 1). The report checks that u restricts to the
input on every spectrum point and bounds ||u||_(2).")]
    Extend { input: PathBuf },
}

#[derive(Args, Debug, Default)]
struct Opts {
    /// key = value settings file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// flat_r1, e2, u1_c or heis1
    #[arg(long, global = true)]
    pair: Option<String>,
    /// Seed for randomized samples
    #[arg(long, global = true)]
    seed: Option<String>,
    /// Output file (default: derived name in --out-dir)
    #[arg(long, global = true)]
    out: Option<String>,
    #[arg(long, global = true)]
    out_dir: Option<String>,
    /// Spectral parameter range min:max:n[:uniform|mid|gl]
    #[arg(long, global = true, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// K-type range lo:hi (u1_c)
    #[arg(long, global = true, allow_hyphen_values = true)]
    m: Option<String>,
    /// Largest Laguerre index (heis1)
    #[arg(long, global = true)]
    kmax: Option<String>,
    /// Limit-ray range min:max:n (heis1)
    #[arg(long, global = true, allow_hyphen_values = true)]
    eta: Option<String>,
    /// Quadrature nodes per radial axis (>= 8)
    #[arg(long, global = true)]
    nodes: Option<String>,
    /// Truncation radius of quadrature grids and random samples
    #[arg(long, global = true)]
    radius: Option<String>,
    /// Half-width of the convolution lattice in nodes
    #[arg(long, global = true)]
    half: Option<String>,
    /// Spacing of the convolution lattice
    #[arg(long, global = true)]
    spacing: Option<String>,
    /// Number of random group points (posdef)
    #[arg(long, global = true)]
    points: Option<String>,
    /// Finite-difference step (eigen)
    #[arg(long, global = true)]
    step: Option<String>,
    /// Seminorm order N
    #[arg(long = "N", global = true)]
    big_n: Option<String>,
    /// Decay order M
    #[arg(long = "M", global = true)]
    big_m: Option<String>,
    /// Largest |m| in type decompositions
    #[arg(long, global = true)]
    max_types: Option<String>,
    /// theta-profile of the decay family: gaussian or abs
    #[arg(long, global = true)]
    profile: Option<String>,
    #[arg(long, global = true)]
    bump_radius: Option<String>,
    /// Grid nodes per lattice unit (a power of two)
    #[arg(long, global = true)]
    subdivision: Option<String>,
    /// Tolerance of the check being run
    #[arg(long, global = true)]
    tol: Option<String>,
    /// SampledFunction JSON to compare an inversion with
    #[arg(long, global = true)]
    reference: Option<String>,
}

impl Opts {
    fn flags(&self) -> BTreeMap<String, String> {
        let pairs = [
            ("pair", &self.pair),
            ("seed", &self.seed),
            ("out", &self.out),
            ("out_dir", &self.out_dir),
            ("lambda", &self.lambda),
            ("m", &self.m),
            ("kmax", &self.kmax),
            ("eta", &self.eta),
            ("nodes", &self.nodes),
            ("radius", &self.radius),
            ("half", &self.half),
            ("spacing", &self.spacing),
            ("points", &self.points),
            ("step", &self.step),
            ("N", &self.big_n),
            ("M", &self.big_m),
            ("max_types", &self.max_types),
            ("profile", &self.profile),
            ("bump_radius", &self.bump_radius),
            ("subdivision", &self.subdivision),
            ("tol", &self.tol),
            ("reference", &self.reference),
        ];
        pairs.into_iter().filter_map(|(k, v)| v.clone().map(|v| (k.to_string(), v))).collect()
    }
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let path = cli.opts.config.clone().or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
    let file = match path {
        Some(p) => load_config_file(&p)?,
        None => BTreeMap::new(),
    };
    let cfg = RunConfig::resolve(file, cli.opts.flags())?;
    match &cli.verb {
        Verb::Spectrum => commands::spectrum(&cfg),
        Verb::Transform { input } => commands::transform(&cfg, input),
        Verb::Invert { input } => commands::invert(&cfg, input),
        Verb::Verify { check } => commands::verify(&cfg, *check),
        Verb::Decompose { input } => commands::decompose_cmd(&cfg, input),
        Verb::Interpolate { input } => commands::interpolate(&cfg, input),
        Verb::Extend { input } => commands::extend(&cfg, input),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(o) => {
            print!("{}", o.stdout);
            ExitCode::from(o.exit as u8)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
