use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand, ValueEnum};
use serde_json::json;

use pzero::curves::{
    affine_points, build_section7_curve, expected_aut_order, genus, rational_points, two_rank,
    verify_automorphisms, CurveFamily, CurveSpec, Section7Kind,
};
use pzero::lingrp::{build, expected_order, Family, FamilyId};
use pzero::perm::{classify_theorem1, PermGroup, SEED};
use pzero::spectrum::{bound_checks, enumerate_spectrum, to_csv};
use pzero::verify::{run, Suite};
use pzero::Error;

#[derive(Parser)]
#[command(
    name = "pzero",
    version,
    about = "Zero 2-rank curves with large automorphism groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build or analyze permutation groups
    Group {
        #[command(subcommand)]
        cmd: GroupCmd,
    },
    /// Admissible genera for a linear family
    Spectrum {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Evaluate the order bounds for a group acting on a curve of genus g
    Bounds {
        #[arg(long)]
        g: u64,
        #[arg(long)]
        order: u128,
        #[arg(long, action = ArgAction::Set, default_value_t = false)]
        solvable: bool,
        #[arg(long, action = ArgAction::Set, default_value_t = false)]
        abelian: bool,
        #[arg(long = "fixes-point", action = ArgAction::Set, default_value_t = false)]
        fixes_point: bool,
    },
    /// Curve families
    Curve {
        #[command(subcommand)]
        cmd: CurveCmd,
    },
    /// Run the verification battery
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Subcommand)]
enum GroupCmd {
    Build {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        n: u64,
        /// Write to this file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Analyze {
        file: PathBuf,
    },
}

#[derive(clap::Args)]
struct CurveArgs {
    #[arg(long)]
    family: CurveFamily,
    /// `k` for (I), the exponent of 2 for STICH, `n` otherwise
    #[arg(long, alias = "k")]
    n: u64,
    /// `t` for SU3Q/PSU3Q
    #[arg(long)]
    t: Option<u64>,
    /// `m` for STICH
    #[arg(long)]
    m: Option<u64>,
}

impl CurveArgs {
    fn spec(&self) -> Result<CurveSpec, Error> {
        CurveSpec::new(self.family, self.n, self.m.or(self.t))
    }
}

#[derive(Subcommand)]
enum CurveCmd {
    Info(CurveArgs),
    Points {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long = "field-exp")]
        field_exp: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        out: Format,
    },
    VerifyAut(CurveArgs),
    /// Stated and recomputed genus of the examples built from the large families
    Example {
        #[arg(long)]
        kind: Section7Kind,
        #[arg(long)]
        n: u64,
        /// `m` for 7.1, `t` otherwise
        #[arg(long)]
        param: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Outcome of a command: printed output, or an error with its exit code.
enum Failure {
    Math(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ConditionFour { .. }
            | Error::Mismatch(_)
            | Error::OddOrder
            | Error::NegativeGenus(_) => Failure::Math(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable output")
}

fn cmd_group(cmd: GroupCmd) -> Result<String, Failure> {
    match cmd {
        GroupCmd::Build { family, n, out } => {
            let f = FamilyId::new(family, n)?;
            let a = build(&f)?;
            let text = a.group.to_json(Some(a.metadata()))?;
            match out {
                Some(path) => {
                    std::fs::write(&path, &text).map_err(Error::from)?;
                    Ok(pretty(
                        &json!({ "written": path, "degree": a.degree(), "expected_order": expected_order(&f).to_string() }),
                    ))
                }
                None => Ok(text),
            }
        }
        GroupCmd::Analyze { file } => {
            let g = PermGroup::read(&file)?;
            let report = classify_theorem1(&g)?;
            Ok(pretty(
                &json!({ "seed": format!("{SEED:#x}"), "report": report }),
            ))
        }
    }
}

fn cmd_curve(cmd: CurveCmd) -> Result<(String, bool), Failure> {
    match cmd {
        CurveCmd::Info(args) => {
            let c = args.spec()?;
            let mut v = json!({
                "family": c.family,
                "equation": c.equation(),
                "genus": genus(&c),
                "automorphisms": expected_aut_order(&c),
            });
            if let Ok(r) = two_rank(&c) {
                v["two_rank"] = json!(r);
            }
            Ok((pretty(&v), true))
        }
        CurveCmd::Points {
            curve,
            field_exp,
            out,
        } => {
            let c = curve.spec()?;
            let count = rational_points(&c, field_exp)?;
            match out {
                Format::Json => Ok((pretty(&count), true)),
                Format::Csv => {
                    let pts = affine_points(&c, field_exp)?;
                    let mut s = String::from("x,y\n");
                    for (x, y) in pts {
                        s.push_str(&format!("{x},{y}\n"));
                    }
                    s.push_str("inf,inf\n");
                    Ok((s, true))
                }
            }
        }
        CurveCmd::VerifyAut(args) => {
            let r = verify_automorphisms(&args.spec()?)?;
            let ok = r.passed();
            Ok((pretty(&r), ok))
        }
        CurveCmd::Example { kind, n, param } => {
            let s = build_section7_curve(kind, n, param)?;
            Ok((pretty(&s), true))
        }
    }
}

fn dispatch(cli: Cli) -> Result<(String, bool), Failure> {
    match cli.command {
        Command::Group { cmd } => cmd_group(cmd).map(|s| (s, true)),
        Command::Spectrum { family, n, format } => {
            let s = enumerate_spectrum(&FamilyId::new(family, n)?)?;
            let text = match format {
                Format::Json => pretty(&s),
                Format::Csv => to_csv(&s.entries),
            };
            Ok((text, true))
        }
        Command::Bounds {
            g,
            order,
            solvable,
            abelian,
            fixes_point,
        } => {
            let r = bound_checks(order, g, abelian, solvable, fixes_point)?;
            Ok((pretty(&r), true))
        }
        Command::Curve { cmd } => cmd_curve(cmd),
        Command::Verify { suite, quick } => {
            let s = run(suite, quick);
            let ok = s.ok();
            Ok((pretty(&s), ok))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok((text, ok)) => {
            let mut out = std::io::stdout().lock();
            // a closed pipe downstream is not an error of the command
            let _ = out.write_all(text.as_bytes());
            if !text.ends_with('\n') {
                let _ = out.write_all(b"\n");
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Math(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
