//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on a domain error (reported on stderr as
//! `error: <kind>: <detail>`), 2 on a usage error. Data goes to stdout only.

use std::fmt::Write as _;
use std::io::Write;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::bounds::{self, DEFAULT_PAIR_BITS_CAP};
use crate::codes::{AdditiveCyclicCode, DEFAULT_ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::experiments::{
    self, format_g12, ExperimentReport, CSV_HEADER, DEFAULT_CENSUS_PAIR_BITS, SCAN_CSV_HEADER,
};
use crate::poly2::{self, BinPoly};

#[derive(Parser, Debug)]
#[command(
    name = "z2z4",
    version,
    about = "Construct and analyse Z2Z4-additive cyclic codes C_{a,b}"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct Output {
    /// Emit JSON.
    #[arg(long)]
    json: bool,
    /// Emit CSV (where the command has a tabular form).
    #[arg(long, conflicts_with = "json")]
    csv: bool,
}

#[derive(Args, Debug, Clone)]
struct CodeArgs {
    /// Odd cycle length.
    #[arg(short = 'm')]
    m: usize,
    /// a(X): LSB-first bits ("101") or symbolic ("1+x^2").
    #[arg(short = 'a', value_parser = parse_poly)]
    a: BinPoly,
    /// b(X): LSB-first bits or symbolic.
    #[arg(short = 'b', value_parser = parse_poly)]
    b: BinPoly,
    /// Largest dimension whose 2^dim codewords may be walked.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: usize,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug, Clone, Copy)]
struct Parallel {
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build C_{a,b} and print its descriptor.
    Build(CodeArgs),
    /// Print the generator matrix (or the full matrix with --hat).
    Matrix {
        #[command(flatten)]
        code: CodeArgs,
        /// Print all m rows of (A | 2B).
        #[arg(long)]
        hat: bool,
    },
    /// List every codeword, sorted.
    Enumerate(CodeArgs),
    /// Minimum weight and relative distance.
    Minweight {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        par: Parallel,
    },
    /// Irreducible factors of X^m - 1.
    Factor {
        #[arg(short = 'm')]
        m: usize,
        #[command(flatten)]
        out: Output,
    },
    /// 2-cyclotomic cosets modulo m.
    Cosets {
        #[arg(short = 'm')]
        m: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Binary entropy H(x).
    Entropy {
        #[arg(short = 'x', allow_negative_numbers = true)]
        x: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Check 0 < delta < 1/3 and H(3 delta/2) < 1/2.
    Admissible {
        #[arg(long, allow_negative_numbers = true)]
        delta: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Upper bound on Pr(Delta <= delta) and the exact full-dimension probability.
    Bound {
        #[arg(short = 'm')]
        m: usize,
        #[arg(long, allow_negative_numbers = true)]
        delta: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Exact Pr(dim C_{a,b} = m - 1).
    Exactprob {
        #[arg(short = 'm')]
        m: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Number of d-dimensional ideals inside J_m against m^(d/ell_m).
    Ideals {
        #[arg(short = 'm')]
        m: usize,
        /// One dimension; all valid dimensions when omitted.
        #[arg(short = 'd')]
        d: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Low-weight pair count in I_c x I_c against its entropy bound.
    Pairs {
        #[arg(short = 'm')]
        m: usize,
        #[arg(short = 'c', value_parser = parse_poly)]
        c: BinPoly,
        #[arg(long, allow_negative_numbers = true)]
        delta: f64,
        /// Largest 2 dim(I_c) to scan.
        #[arg(long, default_value_t = DEFAULT_PAIR_BITS_CAP)]
        cap: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Exhaustive census over J_m x J_m.
    Census {
        #[arg(short = 'm')]
        m: usize,
        /// Also report Pr(Delta > delta).
        #[arg(long, allow_negative_numbers = true)]
        delta: Option<f64>,
        /// Largest 2(m - 1) to enumerate.
        #[arg(long, default_value_t = DEFAULT_CENSUS_PAIR_BITS)]
        cap: usize,
        /// Fill in elapsed_ms.
        #[arg(long)]
        timing: bool,
        #[command(flatten)]
        par: Parallel,
        #[command(flatten)]
        out: Output,
    },
    /// Monte Carlo over J_m x 2J'_m: Pr(dim = m - 1), or Pr(Delta > delta) with --delta.
    Sample {
        #[arg(short = 'm')]
        m: usize,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, allow_negative_numbers = true)]
        delta: Option<f64>,
        /// Largest code dimension whose minimum weight may be computed.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: usize,
        /// Fill in elapsed_ms.
        #[arg(long)]
        timing: bool,
        #[command(flatten)]
        par: Parallel,
        #[command(flatten)]
        out: Output,
    },
    /// Odd m <= max-m with log2(m)/ell_m <= threshold.
    Scan {
        #[arg(long = "max-m")]
        max_m: usize,
        #[arg(long, allow_negative_numbers = true)]
        threshold: f64,
        #[command(flatten)]
        out: Output,
    },
}

fn parse_poly(s: &str) -> std::result::Result<BinPoly, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Runs the CLI on `argv` (including the program name), writing data to
/// `out` and diagnostics to `err`. Returns the process exit code.
pub fn run<S: AsRef<str>>(argv: &[S], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv.iter().map(|s| s.as_ref())) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    2
                }
            };
        }
    };
    match execute(cli.command) {
        Ok(text) => match out.write_all(text.as_bytes()) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(err, "error: io: {e}");
                1
            }
        },
        Err(e) => {
            let _ = writeln!(err, "error: {}: {}", e.kind(), e);
            1
        }
    }
}

fn with_workers<T: Send>(par: Parallel, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match par.workers {
        None => f(),
        Some(0) => Err(Error::InvalidParameter(
            "--workers must be at least 1".into(),
        )),
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Error::InvalidParameter(e.to_string()))?
            .install(f),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("serializable");
    s.push('\n');
    s
}

fn lines<I: IntoIterator<Item = String>>(items: I) -> String {
    items.into_iter().fold(String::new(), |mut acc, l| {
        acc.push_str(&l);
        acc.push('\n');
        acc
    })
}

fn build_code(args: &CodeArgs) -> Result<AdditiveCyclicCode> {
    AdditiveCyclicCode::new(args.m, args.a.clone(), args.b.clone())
}

fn report_output(reports: &[ExperimentReport], out: Output, timing: bool) -> String {
    if out.json {
        let mut reports = reports.to_vec();
        if !timing {
            reports.iter_mut().for_each(|r| r.elapsed_ms = None);
        }
        return to_json(&reports);
    }
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    s.push_str(&lines(reports.iter().map(|r| r.csv_row(timing))));
    s
}

fn execute(command: Command) -> Result<String> {
    match command {
        Command::Build(args) => {
            let code = build_code(&args)?;
            let d = code.descriptor();
            if args.out.json {
                return Ok(to_json(&d));
            }
            Ok(format!(
                "m={}\na={}\nb={}\ng={}\nh={}\ndim={}\nn={}\nrate={}\n",
                d.m, d.a, d.b, d.g, d.h, d.dim, d.n, d.rate
            ))
        }
        Command::Matrix { code: args, hat } => {
            let code = build_code(&args)?;
            let rows = if hat {
                code.matrix_hat()
            } else {
                code.generator_matrix()?.rows
            };
            let rows: Vec<String> = rows.iter().map(|w| w.to_string()).collect();
            if args.out.json {
                return Ok(to_json(&json!({ "m": code.m(), "hat": hat, "rows": rows })));
            }
            Ok(lines(rows))
        }
        Command::Enumerate(args) => {
            let code = build_code(&args)?;
            let words: Vec<String> = code
                .enumerate_codewords(args.cap)?
                .iter()
                .map(|w| w.to_string())
                .collect();
            if args.out.json {
                return Ok(to_json(
                    &json!({ "m": code.m(), "dim": code.dim(), "codewords": words }),
                ));
            }
            let mut s = String::new();
            if args.out.csv {
                s.push_str("codeword\n");
            }
            s.push_str(&lines(words));
            Ok(s)
        }
        Command::Minweight { code: args, par } => {
            poly2::check_modulus(args.m)?;
            let code = build_code(&args)?;
            let w = with_workers(par, || code.min_weight(args.cap))?;
            let rd = num_rational::Ratio::new(w as u64, code.length() as u64);
            if args.out.json {
                return Ok(to_json(&json!({
                    "min_weight": w,
                    "n": code.length(),
                    "relative_distance": rd.to_string(),
                })));
            }
            Ok(format!("{w}\n"))
        }
        Command::Factor { m, out } => {
            let fs = poly2::factor_xm1(m)?;
            if out.json {
                let factors: Vec<_> = fs
                    .factors
                    .iter()
                    .map(|f| json!({ "poly": f.poly.to_bit_string(), "degree": f.degree }))
                    .collect();
                return Ok(to_json(
                    &json!({ "m": m, "factors": factors, "ell": fs.ell, "h": fs.h }),
                ));
            }
            let rows = fs.factors.iter().map(|f| {
                if out.csv {
                    format!("{},{}", f.poly, f.degree)
                } else {
                    f.poly.to_string()
                }
            });
            let mut s = if out.csv {
                "poly,degree\n".to_string()
            } else {
                String::new()
            };
            s.push_str(&lines(rows));
            Ok(s)
        }
        Command::Cosets { m, out } => {
            let cosets = poly2::cyclotomic_cosets(m)?;
            if out.json {
                return Ok(to_json(&json!({ "m": m, "cosets": cosets })));
            }
            Ok(lines(cosets.iter().map(|c| {
                c.iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })))
        }
        Command::Entropy { x, out } => {
            let h = bounds::entropy(x)?;
            if out.json {
                return Ok(to_json(&json!({ "x": x, "entropy": h })));
            }
            Ok(format!("{}\n", format_g12(h)))
        }
        Command::Admissible { delta, out } => {
            let d = bounds::check_admissible(delta)?;
            if out.json {
                return Ok(to_json(&json!({
                    "delta": d.value(),
                    "entropy_at_3d2": d.entropy_at_3d2(),
                    "admissible": true,
                })));
            }
            Ok(format!(
                "admissible delta={} H(3delta/2)={}\n",
                format_g12(d.value()),
                format_g12(d.entropy_at_3d2())
            ))
        }
        Command::Bound { m, delta, out } => {
            poly2::check_modulus(m)?;
            let d = bounds::check_admissible(delta)?;
            let b = bounds::pr_delta_bound(m, &d)?;
            let exact = bounds::exact_pr_full_dim(m)?.to_string();
            if out.json {
                return Ok(to_json(&json!({
                    "m": m,
                    "delta": delta,
                    "ell_m": b.ell_m,
                    "bound": b.value,
                    "vacuous": b.vacuous,
                    "exact_pr_full_dim": exact,
                })));
            }
            if out.csv {
                return Ok(format!(
                    "m,delta,ell_m,bound,vacuous,exact_pr_full_dim\n{m},{},{},{},{},{exact}\n",
                    format_g12(delta),
                    b.ell_m,
                    format_g12(b.value),
                    b.vacuous
                ));
            }
            Ok(format!(
                "m={m}\ndelta={}\nell_m={}\nbound={}\nvacuous={}\nexact_pr_full_dim={exact}\n",
                format_g12(delta),
                b.ell_m,
                format_g12(b.value),
                b.vacuous
            ))
        }
        Command::Exactprob { m, out } => {
            let p = bounds::exact_pr_full_dim(m)?.to_string();
            if out.json {
                return Ok(to_json(&json!({ "m": m, "exact_pr_full_dim": p })));
            }
            Ok(format!("{p}\n"))
        }
        Command::Ideals { m, d, out } => {
            let ell = poly2::ell_m(m)?;
            let dims: Vec<usize> = match d {
                Some(d) => vec![d],
                None => (ell..m).collect(),
            };
            let counts = dims
                .into_iter()
                .map(|d| bounds::count_ideals_of_dim(m, d))
                .collect::<Result<Vec<_>>>()?;
            if out.json {
                let rows: Vec<_> = counts
                    .iter()
                    .map(|c| json!({ "d": c.d, "count": c.count.to_string(), "bound": c.bound, "satisfied": c.satisfied() }))
                    .collect();
                return Ok(to_json(&json!({ "m": m, "ell_m": ell, "ideals": rows })));
            }
            let sep = if out.csv { "," } else { " " };
            let mut s = String::new();
            if out.csv {
                s.push_str("d,count,bound\n");
            }
            for c in &counts {
                let _ = writeln!(s, "{}{sep}{}{sep}{}", c.d, c.count, format_g12(c.bound));
            }
            Ok(s)
        }
        Command::Pairs {
            m,
            c,
            delta,
            cap,
            out,
        } => {
            poly2::check_modulus(m)?;
            let d = bounds::check_admissible(delta)?;
            let r = bounds::low_weight_pair_count(&c, m, &d, cap)?;
            if out.json {
                return Ok(to_json(&json!({
                    "m": m,
                    "c": c.to_padded_bits(m),
                    "d_c": r.dim,
                    "count": r.count.to_string(),
                    "bound": r.bound,
                    "satisfied": r.satisfied(),
                })));
            }
            Ok(format!(
                "d_c={}\ncount={}\nbound={}\nsatisfied={}\n",
                r.dim,
                r.count,
                format_g12(r.bound),
                r.satisfied()
            ))
        }
        Command::Census {
            m,
            delta,
            cap,
            timing,
            par,
            out,
        } => {
            poly2::check_modulus(m)?;
            let delta = delta.map(bounds::check_admissible).transpose()?;
            let census = with_workers(par, || experiments::exhaustive_census(m, cap))?;
            let reports = census.reports(delta.as_ref())?;
            Ok(report_output(&reports, out, timing))
        }
        Command::Sample {
            m,
            trials,
            seed,
            delta,
            cap,
            timing,
            par,
            out,
        } => {
            poly2::check_modulus(m)?;
            let delta = delta.map(bounds::check_admissible).transpose()?;
            let report = with_workers(par, || match &delta {
                Some(d) => experiments::monte_carlo_distance(m, d, trials, seed, cap),
                None => experiments::monte_carlo_full_dim(m, trials, seed),
            })?;
            Ok(report_output(&[report], out, timing))
        }
        Command::Scan {
            max_m,
            threshold,
            out,
        } => {
            let rows = experiments::scan_lengths(max_m, threshold)?;
            if out.json {
                return Ok(to_json(&rows));
            }
            let mut s = format!("{SCAN_CSV_HEADER}\n");
            s.push_str(&lines(rows.iter().map(|r| r.csv_row())));
            Ok(s)
        }
    }
}
