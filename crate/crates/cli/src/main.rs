//! `weylcm`: batch computations on Calogero-Moser pairs, Baker functions and
//! the adelic Grassmannian, reading and writing JSON documents.

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use weylcm_cli::commands::{self, Failure, Outcome, Status};
use weylcm::suite::{Mutation, SuiteConfig};

#[derive(Parser)]
#[command(name = "weylcm", version, about = "Calogero-Moser pairs, Baker functions and the adelic Grassmannian")]
struct Cli {
    #[command(subcommand)]
    family: Family,
}

#[derive(Subcommand)]
enum Family {
    /// Calogero-Moser pairs.
    #[command(subcommand)]
    Cm(CmCmd),
    /// Baker functions of CM pairs.
    #[command(subcommand)]
    Baker(BakerCmd),
    /// Points of the adelic Grassmannian and their ideals.
    #[command(subcommand)]
    Gr(GrCmd),
    /// Truncated pseudo-differential operators.
    #[command(subcommand)]
    Psdo(PsdoCmd),
    /// The acceptance suite.
    #[command(subcommand)]
    Suite(SuiteCmd),
}

#[derive(Args, Clone)]
struct Input {
    /// Input document; `-` reads standard input.
    #[arg(short, long, default_value = "-")]
    input: String,
}

#[derive(Subcommand)]
enum CmCmd {
    /// Rank of [X,Y] - I.
    Check {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1e-8)]
        rank_tol: f64,
    },
    /// Apply a word in Phi_p and Psi_q: input {point, word}.
    Act {
        #[command(flatten)]
        input: Input,
    },
    /// Certificate (word, conjugator, residual) reaching the point from the base point.
    NormalForm {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1e-6)]
        residual_tol: f64,
    },
}

#[derive(Subcommand)]
enum BakerCmd {
    /// The reduced Baker function as coefficient grids.
    Eval {
        #[command(flatten)]
        input: Input,
    },
    /// Swap (X,Y) -> (Y^t, X^t) against x <-> z.
    Bispectral {
        #[command(flatten)]
        input: Input,
    },
    /// Translation X -> X + s, optionally the flow of a polynomial q.
    Flow {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        s: String,
        /// Polynomial as a JSON coefficient array.
        #[arg(long)]
        q: Option<String>,
    },
    /// The functions (z + d/dx)^i psi~ at x = x0.
    Subspace {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_hyphen_values = true)]
        x0: String,
        #[arg(long, default_value_t = 4)]
        count: usize,
    },
}

#[derive(Args, Clone, Copy)]
struct Degree {
    /// Truncation degree for span detection.
    #[arg(long, default_value_t = 12)]
    degree: usize,
}

#[derive(Subcommand)]
enum GrCmd {
    /// Echelonized point {m, V}.
    Canon {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        degree: Degree,
    },
    /// Equality of classes: input {U, V}.
    ClassEqual {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        degree: Degree,
    },
    /// Basis of the slice of D(U, V): input {U, V, delta?}.
    Duv {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1)]
        order: usize,
        #[arg(long, default_value_t = 2)]
        coeff_degree: usize,
        #[command(flatten)]
        degree: Degree,
    },
    /// Slice of the ideal D(C[z], W).
    Alpha {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        coeff_degree: Option<usize>,
        #[command(flatten)]
        degree: Degree,
    },
    /// The point W spanned by the slice applied to C[z]: input {ops}.
    E {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        degree: Degree,
    },
    /// D(C[z], W*) against c(D(W, C[z])).
    CCheck {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 2)]
        order: usize,
        #[arg(long, default_value_t = 3)]
        coeff_degree: usize,
        #[command(flatten)]
        degree: Degree,
    },
}

#[derive(Subcommand)]
enum PsdoCmd {
    /// The wave operator K_W.
    Kw {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[command(flatten)]
        degree: Degree,
    },
    /// Membership of D in D(W_U, W_V) via K_U b(D) K_V^{-1}: input {D, U, V}.
    Keylem {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 8)]
        floor: usize,
        #[command(flatten)]
        degree: Degree,
    },
    /// K_W b(L) against the slice of D(C[z], b(W)).
    Kprop {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1)]
        order: usize,
        #[arg(long, default_value_t = 2)]
        coeff_degree: usize,
        #[arg(long, default_value_t = 6)]
        floor: usize,
        #[command(flatten)]
        degree: Degree,
    },
}

#[derive(Subcommand)]
enum SuiteCmd {
    /// Run the acceptance criteria.
    Run {
        #[arg(long, default_value_t = SuiteConfig::default().seed)]
        seed: u64,
        /// Run a single criterion.
        #[arg(long)]
        only: Option<usize>,
        #[arg(long, default_value_t = 1e-8)]
        rank_tol: f64,
        #[arg(long, default_value_t = 1e-6)]
        residual_tol: f64,
        #[arg(long, default_value_t = 8)]
        floor: usize,
        #[arg(long, default_value_t = 12)]
        degree: usize,
        /// Deliberately break Psi_q to confirm the suite notices.
        #[arg(long, value_parser = ["psi-sign-flip"])]
        mutation: Option<String>,
    },
}

fn read_doc(input: &Input) -> Result<Value, Failure> {
    let text = if input.input == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::parse(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(&input.input).map_err(|e| Failure::parse(format!("{}: {e}", input.input)))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::parse(format!("invalid JSON: {e}")))
}

fn run(cli: Cli) -> Outcome {
    use commands::*;
    match cli.family {
        Family::Cm(c) => match c {
            CmCmd::Check { input, rank_tol } => cm_check(&read_doc(&input)?, rank_tol),
            CmCmd::Act { input } => cm_act_cmd(&read_doc(&input)?),
            CmCmd::NormalForm { input, seed, residual_tol } => {
                cm_normal_form(&read_doc(&input)?, seed, residual_tol)
            }
        },
        Family::Baker(c) => match c {
            BakerCmd::Eval { input } => baker_eval(&read_doc(&input)?),
            BakerCmd::Bispectral { input } => baker_bispectral(&read_doc(&input)?),
            BakerCmd::Flow { input, s, q } => baker_flow(&read_doc(&input)?, &s, q.as_deref()),
            BakerCmd::Subspace { input, x0, count } => baker_subspace_cmd(&read_doc(&input)?, &x0, count),
        },
        Family::Gr(c) => match c {
            GrCmd::Canon { input, degree } => gr_canon(&read_doc(&input)?, degree.degree),
            GrCmd::ClassEqual { input, degree } => gr_class_equal(&read_doc(&input)?, degree.degree),
            GrCmd::Duv { input, order, coeff_degree, degree } => {
                gr_duv_cmd(&read_doc(&input)?, order, coeff_degree, degree.degree)
            }
            GrCmd::Alpha { input, order, coeff_degree, degree } => {
                gr_alpha(&read_doc(&input)?, order, coeff_degree, degree.degree)
            }
            GrCmd::E { input, degree } => gr_e(&read_doc(&input)?, degree.degree),
            GrCmd::CCheck { input, order, coeff_degree, degree } => {
                gr_c_check(&read_doc(&input)?, order, coeff_degree, degree.degree)
            }
        },
        Family::Psdo(c) => match c {
            PsdoCmd::Kw { input, depth, degree } => psdo_kw(&read_doc(&input)?, depth, degree.degree),
            PsdoCmd::Keylem { input, floor, degree } => psdo_keylem(&read_doc(&input)?, floor, degree.degree),
            PsdoCmd::Kprop { input, order, coeff_degree, floor, degree } => {
                psdo_kprop(&read_doc(&input)?, order, coeff_degree, floor, degree.degree)
            }
        },
        Family::Suite(SuiteCmd::Run { seed, only, rank_tol, residual_tol, floor, degree, mutation }) => {
            let cfg = SuiteConfig {
                seed,
                rank_tol,
                residual_tol,
                floor,
                degree,
                mutation: mutation.map(|_| Mutation::PsiSignFlip),
            };
            suite_run(&cfg, only)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Status::Invalid as u8 } else { 0 });
        }
    };
    match run(cli) {
        Ok((doc, status)) => {
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
            ExitCode::from(status as u8)
        }
        Err(f) => {
            eprintln!("{}", serde_json::to_string_pretty(&f.to_json()).expect("serializable"));
            ExitCode::from(f.status as u8)
        }
    }
}
