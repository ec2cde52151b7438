//! Command-line front end for the bending/certification pipeline.
//!
//! Exit codes: 0 success, 2 a mathematical hypothesis failed (bad relation,
//! reducible half, wrong form dimension, negative t, even n), 3 a resource
//! bound was exceeded (norm-equation search, lattice saturation).

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use zdense::{
    base_representation, bend, certify_path_point, certify_psl2_base, check_relations,
    integralize, rat_from_str, rationalize, surface_cover_mod3, triangle_generators,
    triangle_presentation, BendParameter, CertifyOptions, Error, Mat, Rational,
};

const EXIT_HYPOTHESIS: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

fn parse_t(s: &str) -> Result<Rational, String> {
    let r = rat_from_str(s).map_err(|e| e.to_string())?;
    if r < zdense::rat(0, 1) {
        return Err("bend parameter must be non-negative".into());
    }
    Ok(r)
}

fn parse_n(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|_| "expected an integer".to_string())?;
    if n < 3 || n % 2 == 0 {
        return Err("n must be odd and at least 3".into());
    }
    Ok(n)
}

#[derive(Parser)]
#[command(name = "zdense", about = "exact bending and Zariski-density certification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct OutArg {
    /// write JSON here instead of stdout (atomic: temp file + rename)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the hyperbolic triangle-group generators over Q(sqrt2)
    TriangleGens {
        #[command(flatten)]
        out: OutArg,
    },
    /// Print the orbifold generators under the n-th symmetric power
    OrbifoldGens {
        #[arg(long, value_parser = parse_n, default_value = "3")]
        n: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Bend the representation at parameter t and print the images
    Bend {
        #[arg(long, value_parser = parse_n, default_value = "3")]
        n: usize,
        #[arg(long, value_parser = parse_t)]
        t: Rational,
        #[command(flatten)]
        out: OutArg,
    },
    /// Run the full certification pipeline at one or more parameters
    Certify {
        #[arg(long, value_parser = parse_n, default_value = "3")]
        n: usize,
        #[arg(long, value_parser = parse_t, conflicts_with = "t_list")]
        t: Option<Rational>,
        /// comma-separated list of bend parameters
        #[arg(long, value_delimiter = ',', value_parser = parse_t)]
        t_list: Vec<Rational>,
        /// conjugate into GL(n,Q) after certifying
        #[arg(long)]
        rationalize: bool,
        /// also conjugate into SL(n,Z) (implies --rationalize)
        #[arg(long)]
        integralize: bool,
        #[arg(long, default_value_t = zdense::DEFAULT_NORM_BOUND)]
        norm_bound: u64,
        #[arg(long, default_value_t = zdense::DEFAULT_SAT_BOUND)]
        sat_bound: u64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Print the index-3 surface subgroup data (Reidemeister-Schreier)
    Cover {
        #[command(flatten)]
        out: OutArg,
    },
    /// Descend to Q and saturate into SL(n,Z); print the integral images
    Integralize {
        #[arg(long, value_parser = parse_n, default_value = "3")]
        n: usize,
        #[arg(long, value_parser = parse_t, default_value = "1")]
        t: Rational,
        #[arg(long, default_value_t = zdense::DEFAULT_NORM_BOUND)]
        norm_bound: u64,
        #[arg(long, default_value_t = zdense::DEFAULT_SAT_BOUND)]
        sat_bound: u64,
        #[command(flatten)]
        out: OutArg,
    },
}

fn emit(value: &Value, out: &OutArg) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    match &out.out {
        None => {
            println!("{text}");
            Ok(())
        }
        Some(path) => write_atomic(path, &text),
    }
}

fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let tmp = match dir {
        Some(d) => d.join(".zdense-out.tmp"),
        None => PathBuf::from(".zdense-out.tmp"),
    };
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(text.as_bytes())?;
        f.write_all(b"\n")?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)
}

fn exit_for(err: &Error) -> u8 {
    match err {
        Error::NormSearchExhausted { .. } | Error::SaturationDiverged { .. } => EXIT_RESOURCE,
        _ => EXIT_HYPOTHESIS,
    }
}

fn bent_generators(
    n: usize,
    t: &Rational,
) -> Result<(zdense::BentRepresentation<zdense::Sqrt2>, Vec<Mat<zdense::Sqrt2>>), Error> {
    let base = base_representation(n)?;
    let t = BendParameter::new(t.clone())?;
    let bent = bend(&base, &t)?;
    let gens = bent
        .rep
        .presentation
        .generators
        .iter()
        .map(|g| bent.rep.images[g].clone())
        .collect();
    Ok((bent, gens))
}

fn run(cli: Cli) -> Result<(), (u8, String)> {
    let io_err = |e: std::io::Error| (1u8, format!("io error: {e}"));
    let math_err = |e: Error| (exit_for(&e), e.to_string());
    match cli.command {
        Command::TriangleGens { out } => {
            let (x, y) = triangle_generators();
            let pres = triangle_presentation();
            let mut images = std::collections::BTreeMap::new();
            images.insert("x".to_string(), x);
            images.insert("y".to_string(), y);
            let rep = zdense::Representation { presentation: pres, images };
            let check = check_relations(&rep, true);
            if !check.pass {
                return Err((EXIT_HYPOTHESIS, "triangle relations failed".into()));
            }
            emit(&rep.to_json(), &out).map_err(io_err)
        }
        Command::OrbifoldGens { n, out } => {
            let rep = base_representation(n).map_err(math_err)?;
            let check = check_relations(&rep, true);
            if !check.pass {
                return Err((EXIT_HYPOTHESIS, "orbifold relations failed".into()));
            }
            emit(&rep.to_json(), &out).map_err(io_err)
        }
        Command::Bend { n, t, out } => {
            let (bent, _) = bent_generators(n, &t).map_err(math_err)?;
            let doc = json!({
                "t": zdense::rat_to_string(bent.t.value()),
                "conjugator": bent.conjugator.to_json(),
                "representation": bent.rep.to_json(),
            });
            emit(&doc, &out).map_err(io_err)
        }
        Command::Certify {
            n,
            t,
            t_list,
            rationalize: do_rat,
            integralize: do_int,
            norm_bound,
            sat_bound,
            out,
        } => {
            let mut params = t_list;
            if let Some(t) = t {
                params.push(t);
            }
            if params.is_empty() {
                params.push(zdense::rat(0, 1));
            }
            let base = base_representation(n).map_err(math_err)?;
            let opts = CertifyOptions {
                norm_bound,
                sat_bound,
                rationalize: do_rat || do_int,
                integralize: do_int,
                check_cover: true,
            };
            let psl2 = certify_psl2_base().map_err(math_err)?;
            let mut certs = Vec::new();
            let mut all_pass = true;
            for t in &params {
                let bt = BendParameter::new(t.clone()).map_err(math_err)?;
                let cert = certify_path_point(&base, &bt, n, &opts).map_err(math_err)?;
                all_pass &= cert.pass();
                certs.push(cert.to_json());
            }
            let doc = json!({
                "psl2_base": psl2,
                "certificates": certs,
            });
            if out.out.is_some() {
                for c in &certs {
                    println!("t={} n={n} verdict={}", c["t"].as_str().unwrap_or("?"),
                        c["verdict"].as_str().unwrap_or("?"));
                }
            }
            emit(&doc, &out).map_err(io_err)?;
            if all_pass {
                Ok(())
            } else {
                Err((EXIT_HYPOTHESIS, "certification failed".into()))
            }
        }
        Command::Cover { out } => {
            let cover = surface_cover_mod3();
            if !cover.torsion_free || cover.genus != 2 {
                return Err((EXIT_HYPOTHESIS, "surface cover check failed".into()));
            }
            emit(&cover.to_json(), &out).map_err(io_err)
        }
        Command::Integralize { n, t, norm_bound, sat_bound, out } => {
            let (_, gens) = bent_generators(n, &t).map_err(math_err)?;
            let (rational, witness) = rationalize(&gens, norm_bound).map_err(math_err)?;
            let (integral, lattice) = integralize(&rational, sat_bound).map_err(math_err)?;
            let doc = json!({
                "n": n,
                "t": zdense::rat_to_string(&t),
                "descent": witness.to_json(),
                "lattice": lattice.to_json(),
                "generators": integral.iter().map(Mat::to_json).collect::<Vec<_>>(),
            });
            emit(&doc, &out).map_err(io_err)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
