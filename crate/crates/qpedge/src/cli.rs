//! Command dispatch. Every command returns its output text and exit status;
//! `main` only prints them.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use qpedge_core::contraction::{higgs, ContractionData};
use qpedge_core::hopf::{psi_phi_pairing, skew_pairing, Elem};
use qpedge_core::mutation::mutate;
use qpedge_core::rational::format as fmt_q;
use qpedge_core::scattering::{default_eta_grid, eta_check, format_point, wall_support_scan, Kappa};
use qpedge_core::shuffle::{contract_shuffle, Membership, ShuffleAlgebra, SymPoly};
use qpedge_core::{Error, ErrorKind, Rational};

use crate::element::{parse_element_str, parse_gamma_str, print_element};
use crate::format::{parse_qp, print_qp, render_diagnostics, QPDocument};
use crate::suites::{contract_document, default_sample_grid, run_suite, SuiteConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_UNSUPPORTED: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "qpedge", version, about = "Edge contraction of quivers with potential")]
pub struct Cli {
    /// Truncation degree of the quantum torus.
    #[arg(long, global = true, env = "QPEDGE_TRUNCATION", default_value_t = 3)]
    pub truncation: u32,
    /// Prime fields used for representation enumeration, comma separated.
    #[arg(long, global = true, env = "QPEDGE_PRIMES", default_value = "2,3", value_delimiter = ',')]
    pub primes: Vec<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Contract a quiver with potential along an arrow.
    Contract {
        #[arg(long)]
        arrow: String,
        file: PathBuf,
    },
    /// Give an arrow a unit expectation value and integrate out massive pairs.
    Higgs {
        #[arg(long)]
        arrow: String,
        file: PathBuf,
    },
    /// Mutate at a vertex and remove the trivial part.
    Mutate {
        #[arg(long)]
        vertex: String,
        file: PathBuf,
    },
    /// Shuffle product of two elements (names from the file, or inline
    /// `gamma: ...; poly: ...` text).
    ShuffleMul { file: PathBuf, left: String, right: String },
    /// Apply the contraction map to an element in the equal-rank sector.
    ContractShuffle {
        #[arg(long)]
        arrow: String,
        file: PathBuf,
        element: String,
    },
    /// Basis of the spherical span in a dimension vector up to a degree.
    SphericalSpan {
        file: PathBuf,
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        degree: u32,
        /// Also test membership of this element.
        #[arg(long)]
        member: Option<String>,
    },
    /// Skew-Hopf pairing of two elements, or of `psi_k` with `phi_l`.
    Pair {
        file: PathBuf,
        left: Option<String>,
        right: Option<String>,
        #[arg(long, requires = "phi")]
        psi: Option<String>,
        #[arg(long, requires = "psi")]
        phi: Option<String>,
    },
    /// Sample stability parameters and export the wall scan.
    Walls {
        file: PathBuf,
        /// Largest dimension vector, e.g. `1=1,2=1`.
        #[arg(long)]
        max: Option<String>,
        /// Sample grid, comma separated rationals.
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<String>>,
    },
    /// Lift wall points of the contraction under the embedding of stability spaces.
    EtaCheck {
        #[arg(long)]
        arrow: String,
        file: PathBuf,
        /// Largest dimension vector of the contracted quiver.
        #[arg(long)]
        max: Option<String>,
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<String>>,
        /// Candidate embedding parameters.
        #[arg(long, value_delimiter = ',')]
        kparams: Option<Vec<String>>,
    },
    /// Run a verification suite.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Multiplies the number of random cases.
        #[arg(long, default_value_t = 1)]
        scale: usize,
    },
}

/// Text and status produced by one command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn fail(code: i32, stderr: String) -> Self {
        Outcome { code, stdout: String::new(), stderr }
    }
}

enum Failure {
    Parse(String),
    Core(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn outcome_of(r: Result<Outcome, Failure>) -> Outcome {
    match r {
        Ok(o) => o,
        Err(Failure::Parse(msg)) => Outcome::fail(EXIT_PARSE, msg),
        Err(Failure::Usage(msg)) => Outcome::fail(EXIT_PRECONDITION, format!("error: {msg}\n")),
        Err(Failure::Core(e)) => {
            let code = match e.kind() {
                ErrorKind::Precondition => EXIT_PRECONDITION,
                ErrorKind::Unsupported => EXIT_UNSUPPORTED,
                ErrorKind::Internal => EXIT_VERIFY,
            };
            Outcome::fail(code, format!("error: {e}\n"))
        }
    }
}

fn load(path: &PathBuf) -> Result<QPDocument, Failure> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_qp(&src).map_err(|d| {
        let rendered = render_diagnostics(&src, &d);
        let lines: Vec<String> = rendered.lines().map(|l| format!("{}:{l}", path.display())).collect();
        Failure::Parse(lines.join("\n") + "\n")
    })
}

fn element(doc: &QPDocument, alg: &ShuffleAlgebra, arg: &str) -> Result<SymPoly, Failure> {
    if let Some(f) = doc.element(arg) {
        return Ok(f.clone());
    }
    if arg.contains("gamma") {
        return parse_element_str(alg, arg).map_err(|d| Failure::Parse(format!("<element>:{}\n", d.render(arg))));
    }
    Err(Failure::Usage(format!("no element named `{arg}`")))
}

fn rationals(items: &[String]) -> Result<Vec<Rational>, Failure> {
    items
        .iter()
        .map(|s| s.trim().parse::<Rational>().map_err(|_| Failure::Usage(format!("invalid rational `{s}`"))))
        .collect()
}

fn kappa_text(q: &qpedge_core::quiver::Quiver, k: &Kappa) -> String {
    let v: Vec<Rational> = q.vertices().iter().map(|x| k[x].clone()).collect();
    format_point(&v)
}

fn gamma_text(q: &qpedge_core::quiver::Quiver, g: &qpedge_core::quiver::DimVector) -> String {
    let parts: Vec<String> = q.vertices().iter().map(|v| g[v].to_string()).collect();
    format!("({})", parts.join(","))
}

/// Parses arguments and runs the command.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                Outcome::ok(text)
            } else {
                Outcome::fail(code, text)
            }
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    outcome_of(dispatch(cli))
}

fn dispatch(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Contract { arrow, file } => {
            let doc = load(file)?;
            Ok(Outcome::ok(print_qp(&contract_document(&doc, arrow)?)))
        }
        Command::Higgs { arrow, file } => {
            let doc = load(file)?;
            let r = higgs(&doc.qp, arrow)?;
            let mut out = format!(
                "# integrated out: {}\n",
                if r.agree { "nothing; equal to the contraction" } else { "massive pairs" }
            );
            out.push_str(&print_qp(&QPDocument::new(format!("{}/higgs-{arrow}", doc.name), r.higgsed)));
            Ok(Outcome::ok(out))
        }
        Command::Mutate { vertex, file } => {
            let doc = load(file)?;
            let r = mutate(&doc.qp, vertex)?;
            let mut out = print_qp(&QPDocument::new(format!("{}/mu-{vertex}", doc.name), r.reduced));
            for (a, b) in &r.naming {
                let _ = writeln!(out, "# {a} -> {b}");
            }
            Ok(Outcome::ok(out))
        }
        Command::ShuffleMul { file, left, right } => {
            let doc = load(file)?;
            let alg = ShuffleAlgebra::new(&doc.qp.quiver);
            let (f, g) = (element(&doc, &alg, left)?, element(&doc, &alg, right)?);
            Ok(Outcome::ok(print_element(&alg, &alg.mul(&f, &g)?) + "\n"))
        }
        Command::ContractShuffle { arrow, file, element: e } => {
            let doc = load(file)?;
            let alg = ShuffleAlgebra::new(&doc.qp.quiver);
            let hat = ShuffleAlgebra::new(&ContractionData::new(&doc.qp.quiver, arrow)?.quiver(&doc.qp.quiver)?);
            let f = element(&doc, &alg, e)?;
            Ok(Outcome::ok(print_element(&hat, &contract_shuffle(&alg, &hat, arrow, &f)?) + "\n"))
        }
        Command::SphericalSpan { file, gamma, degree, member } => {
            let doc = load(file)?;
            let alg = ShuffleAlgebra::new(&doc.qp.quiver);
            let g = parse_gamma_str(&alg, gamma).map_err(|d| Failure::Parse(format!("<gamma>:{}\n", d.render(gamma))))?;
            let basis = alg.spherical_span(&g, *degree)?;
            let mut out = format!("# {} basis elements\n", basis.len());
            for b in &basis {
                let _ = writeln!(out, "{}", print_element(&alg, b));
            }
            if let Some(m) = member {
                let f = element(&doc, &alg, m)?;
                let verdict = match alg.spherical_membership(&f, *degree)? {
                    Membership::Member => "member",
                    Membership::NotMember => "not member",
                    Membership::Inconclusive => "inconclusive",
                };
                let _ = writeln!(out, "membership: {verdict}");
            }
            Ok(Outcome::ok(out))
        }
        Command::Pair { file, left, right, psi, phi } => {
            let doc = load(file)?;
            let alg = ShuffleAlgebra::new(&doc.qp.quiver);
            let r = match (psi, phi, left, right) {
                (Some(k), Some(l), _, _) => psi_phi_pairing(&alg, k, l)?,
                (None, None, Some(a), Some(b)) => {
                    let (f, g) = (element(&doc, &alg, a)?, element(&doc, &alg, b)?);
                    skew_pairing(&alg, &Elem::from_sym(&alg, &f)?, &Elem::from_sym(&alg, &g)?)?
                }
                _ => return Err(Failure::Usage("give two elements, or --psi and --phi".into())),
            };
            Ok(Outcome::ok(alg.display_rational(&r) + "\n"))
        }
        Command::Walls { file, max, grid } => {
            let doc = load(file)?;
            let q = &doc.qp.quiver;
            let alg = ShuffleAlgebra::new(q);
            let max = match max {
                Some(m) => parse_gamma_str(&alg, m).map_err(|d| Failure::Parse(format!("<max>:{}\n", d.render(m))))?,
                None => q.vertices().iter().map(|v| (v.clone(), 1)).collect(),
            };
            let grid = match grid {
                Some(g) => rationals(g)?,
                None => default_sample_grid(),
            };
            let mut out = String::from("# gamma; normal; kappa; semistable\n");
            for &p in &cli.primes {
                let _ = writeln!(out, "# field F_{p}");
                for scan in wall_support_scan(q, &max, &grid, p)? {
                    let g = gamma_text(q, &scan.gamma);
                    for (k, v) in &scan.samples {
                        let _ = writeln!(out, "{g}; {g}; {}; {v}", kappa_text(q, k));
                    }
                }
            }
            Ok(Outcome::ok(out))
        }
        Command::EtaCheck { arrow, file, max, grid, kparams } => {
            let doc = load(file)?;
            let q = &doc.qp.quiver;
            let data = ContractionData::new(q, arrow)?;
            let qh = data.quiver(q)?;
            let hat = ShuffleAlgebra::new(&qh);
            let max = match max {
                Some(m) => parse_gamma_str(&hat, m).map_err(|d| Failure::Parse(format!("<max>:{}\n", d.render(m))))?,
                None => qh.vertices().iter().map(|v| (v.clone(), 1)).collect(),
            };
            let grid = match grid {
                Some(g) => rationals(g)?,
                None => default_sample_grid(),
            };
            let kparams = match kparams {
                Some(k) => rationals(k)?,
                None => default_eta_grid(),
            };
            let mut out = String::new();
            let mut all = true;
            for &p in &cli.primes {
                let _ = writeln!(out, "# field F_{p}");
                for s in eta_check(q, arrow, &max, &grid, &kparams, p)? {
                    let head = format!("{}; {}", gamma_text(&qh, &s.gamma_hat), kappa_text(&qh, &s.kappa_hat));
                    match &s.lifted {
                        Some((t, k)) => {
                            let _ = writeln!(out, "{head}; lifted t={} {}", fmt_q(t), kappa_text(q, k));
                        }
                        None => {
                            all = false;
                            let _ = writeln!(out, "{head}; not lifted");
                        }
                    }
                }
            }
            Ok(Outcome { code: if all { EXIT_OK } else { EXIT_VERIFY }, stdout: out, stderr: String::new() })
        }
        Command::Verify { suite, seed, scale } => {
            let cfg = SuiteConfig { seed: *seed, scale: *scale, truncation: cli.truncation, primes: cli.primes.clone() };
            let checks = run_suite(suite, &cfg)?;
            let mut out = String::new();
            for c in &checks {
                let _ = writeln!(out, "{c}");
            }
            let pass = checks.iter().all(|c| c.pass);
            let _ = writeln!(out, "{suite}: {}", if pass { "ok" } else { "FAILED" });
            Ok(Outcome { code: if pass { EXIT_OK } else { EXIT_VERIFY }, stdout: out, stderr: String::new() })
        }
    }
}
