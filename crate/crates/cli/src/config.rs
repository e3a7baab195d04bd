//! Command-line flags and their validation.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cycov_core::arrangement::{check_shape, read_params_file, sample_generic_params};
use cycov_core::charvar::Backend;
use cycov_core::combinatorics::binomial;
use cycov_core::{Error, Field, GenericParams, Result};

#[derive(Parser, Debug)]
#[command(name = "cycov", version, about = "Exact checks on Jacobian rings of cyclic covers branched along hyperplane arrangements")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Dimensions of the (q, qr) invariant pieces against C(n,q) C(k-1,q).
    HodgeNumbers,
    /// The basic and derived relations reduce to zero.
    VerifyRelations,
    /// Quadric coefficients against their closed forms.
    VerifyCoefficients,
    /// Random evaluation of the resultants R_jq and Q_ip.
    Resultants,
    /// Dimension of the first characteristic subvariety.
    CharvarDim,
    /// Genericity screen plus filtration certificate for one parameter.
    CertifyGeneric,
    /// Every stage of the Euler-characteristic chain.
    EulerIdentity,
    /// Weights of the middle wedge power and dimension obstructions.
    RepCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::HodgeNumbers => "hodge-numbers",
            Command::VerifyRelations => "verify-relations",
            Command::VerifyCoefficients => "verify-coefficients",
            Command::Resultants => "resultants",
            Command::CharvarDim => "charvar-dim",
            Command::CertifyGeneric => "certify-generic",
            Command::EulerIdentity => "euler-identity",
            Command::RepCheck => "rep-check",
        }
    }

    fn needs_shape(self) -> bool {
        !matches!(self, Command::EulerIdentity | Command::RepCheck)
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldArg {
    Q,
    Fp,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum BackendArg {
    Groebner,
    Certificate,
    Both,
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// Projective dimension; defaults to k r - k - 1.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Number of branch-locus components.
    #[arg(long, global = true)]
    pub k: Option<usize>,
    /// Degree of the cover.
    #[arg(long, global = true)]
    pub r: Option<u32>,
    #[arg(long, value_enum, default_value = "fp", global = true)]
    pub field: FieldArg,
    #[arg(long, default_value_t = 1_000_003, global = true)]
    pub prime: u64,
    #[arg(long, default_value_t = 1, global = true)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "both", global = true)]
    pub backend: BackendArg,
    /// Independent parameter draws (random points for `resultants`).
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Parameter matrix to use instead of sampling.
    #[arg(long, global = true)]
    pub params_file: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Largest q for graded pieces.
    #[arg(long, global = true)]
    pub q_max: Option<usize>,
    /// Largest n for table commands.
    #[arg(long, global = true)]
    pub n_max: Option<usize>,
    /// Also compute ranks of the iterated multiplication maps.
    #[arg(long, global = true)]
    pub higgs_ranks: bool,
}

/// Validated settings for one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    /// `(n, k, r)` when the command works on a cover.
    pub shape: Option<(usize, usize, u32)>,
    pub field: Field,
    pub seed: u64,
    pub backend: Backend,
    pub trials: Option<usize>,
    pub params_file: Option<PathBuf>,
    pub q_max: Option<usize>,
    pub n_max: Option<usize>,
    pub higgs_ranks: bool,
}

/// `2 max_q C(n,q) C(k-1,q)`: primes at or below this are too small for exact
/// ranks of the graded pieces to be trusted.
pub fn prime_floor(n: usize, k: usize) -> u64 {
    let peak = (0..=n)
        .map(|q| binomial(n as u64, q as u64) * binomial(k as u64 - 1, q as u64))
        .max()
        .unwrap();
    u64::try_from(peak * 2u32).unwrap_or(u64::MAX)
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<RunConfig> {
        let o = &cli.opts;
        let command = cli.command;
        let mut shape = None;
        if command.needs_shape() {
            let from_file = match &o.params_file {
                Some(path) => Some(read_params_file(path)?),
                None => None,
            };
            let k = o.k.or(from_file.as_ref().map(GenericParams::k));
            let r = o.r.or(from_file.as_ref().map(GenericParams::r));
            let (Some(k), Some(r)) = (k, r) else {
                return Err(Error::Precondition("--k and --r are required".into()));
            };
            if k < 2 || r < 2 {
                return Err(Error::Precondition(format!("need k >= 2 and r >= 2, got k = {k}, r = {r}")));
            }
            let n = o.n.unwrap_or((k * r as usize).saturating_sub(k + 1));
            check_shape(n, k, r)?;
            if let Some(p) = &from_file {
                if (p.n(), p.k(), p.r()) != (n, k, r) {
                    return Err(Error::Precondition(format!(
                        "flags give (n,k,r) = ({n},{k},{r}) but the parameter file has ({},{},{})",
                        p.n(),
                        p.k(),
                        p.r()
                    )));
                }
            }
            shape = Some((n, k, r));
        }
        let field = match o.field {
            FieldArg::Q => Field::Rational,
            FieldArg::Fp => {
                let field = Field::prime(o.prime)?;
                if let Some((n, k, r)) = shape {
                    if o.prime <= r as u64 {
                        return Err(Error::UnsupportedField(format!("prime {} must exceed r = {r}", o.prime)));
                    }
                    let floor = prime_floor(n, k);
                    if o.prime <= floor {
                        return Err(Error::UnsupportedField(format!(
                            "prime {} must exceed {floor}, twice the largest piece dimension",
                            o.prime
                        )));
                    }
                }
                field
            }
        };
        let backend = match o.backend {
            BackendArg::Groebner => Backend::Groebner,
            BackendArg::Certificate => Backend::Certificate,
            BackendArg::Both => Backend::Both,
        };
        if o.trials == Some(0) {
            return Err(Error::Precondition("--trials must be positive".into()));
        }
        Ok(RunConfig {
            command,
            shape,
            field,
            seed: o.seed,
            backend,
            trials: o.trials,
            params_file: o.params_file.clone(),
            q_max: o.q_max,
            n_max: o.n_max,
            higgs_ranks: o.higgs_ranks,
        })
    }

    pub fn shape(&self) -> (usize, usize, u32) {
        self.shape.expect("command works on a cover")
    }

    /// Seed of draw number `t`; draw 0 uses `--seed` itself.
    pub fn trial_seed(&self, t: usize) -> u64 {
        self.seed.wrapping_add(t as u64)
    }

    /// The parameter file in the run field, or a fresh draw.
    pub fn params(&self, seed: u64) -> Result<GenericParams> {
        let (n, k, r) = self.shape();
        match &self.params_file {
            Some(path) => read_params_file(path)?.map_field(self.field),
            None => sample_generic_params(n, k, r, self.field, seed),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<RunConfig> {
        let cli = Cli::try_parse_from(std::iter::once("cycov").chain(args.iter().copied())).unwrap();
        RunConfig::from_cli(&cli)
    }

    #[test]
    fn n_defaults_and_is_checked() {
        let cfg = parse(&["hodge-numbers", "--k", "4", "--r", "2"]).unwrap();
        assert_eq!(cfg.shape, Some((3, 4, 2)));
        assert!(parse(&["hodge-numbers", "--n", "4", "--k", "4", "--r", "2"]).is_err());
        assert!(parse(&["hodge-numbers", "--n", "3"]).is_err());
    }

    #[test]
    fn prime_constraints() {
        assert!(parse(&["hodge-numbers", "--k", "4", "--r", "2", "--prime", "15"]).is_err());
        // 2 * C(3,1) C(3,1) = 18
        assert!(parse(&["hodge-numbers", "--k", "4", "--r", "2", "--prime", "17"]).is_err());
        assert!(parse(&["hodge-numbers", "--k", "4", "--r", "2", "--prime", "19"]).is_ok());
        assert!(parse(&["hodge-numbers", "--k", "4", "--r", "2", "--field", "q", "--prime", "15"]).is_ok());
        assert_eq!(prime_floor(3, 4), 18);
    }

    #[test]
    fn table_commands_need_no_shape() {
        let cfg = parse(&["euler-identity", "--n-max", "4"]).unwrap();
        assert_eq!((cfg.shape, cfg.n_max), (None, Some(4)));
    }

    #[test]
    fn bad_flags_are_usage_errors() {
        let bad = Cli::try_parse_from(["cycov", "charvar-dim", "--backend", "fast"]);
        assert!(bad.is_err());
        assert!(Cli::try_parse_from(["cycov", "frobnicate"]).is_err());
    }
}
