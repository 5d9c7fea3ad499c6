mod cache;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use toric_mld::accumulation::{accumulation_report, default_radius};
use toric_mld::io::{
    enumeration_from_json, enumeration_to_json, germ_to_toml, read_germ, write_enumeration_csv,
    write_germ,
};
use toric_mld::lattice::{int, parse_rational, parse_rational_list};
use toric_mld::mld_sets::{tilde_verdict, v_verdict};
use toric_mld::{
    enumerate_mld_set, pairing, realize, tilde_v1_classify, transfer_tilde_to_v, CandidatePair,
    CoefficientSet, EnumeratedMldSet, Error, RationalVector, Result,
};

use cache::ResultCache;

/// Exact minimal log discrepancies of toric log varieties.
///
/// Every number is an exact rational written "p/q" or "p"; decimals are rejected.
#[derive(Parser)]
#[command(name = "toric-mld", version)]
struct Cli {
    /// Do not print the elapsed-time line on stderr.
    #[arg(long, global = true, env = "TORIC_MLD_NO_TIMING", value_parser = clap::builder::FalseyValueParser::new())]
    no_timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PairArgs {
    /// Entries of x in (0,1], comma separated.
    #[arg(short = 'x', allow_hyphen_values = true)]
    x: String,
    /// Entries of a in [0,1], comma separated.
    #[arg(short = 'a', allow_hyphen_values = true)]
    a: String,
}

impl PairArgs {
    fn pair(&self) -> Result<CandidatePair> {
        CandidatePair::new(self.x.parse()?, parse_rational_list(&self.a)?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Mld of a germ file at the invariant point, or at a point of a face orbit.
    GermMld {
        file: PathBuf,
        /// Ray indices (0-based, file order) spanning a face.
        #[arg(long)]
        face: Option<String>,
        /// Codimension of the point; defaults to the face dimension (at least 1).
        #[arg(long)]
        codim: Option<usize>,
    },
    /// Log discrepancy of the divisor of a primitive lattice vector in the cone.
    DivisorLd {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        e: String,
    },
    /// Membership of (x, a) in V.
    Vcheck(PairArgs),
    /// Membership of (x, a) in the enlarged set (all shifts nonnegative).
    TildeCheck(PairArgs),
    /// Mld values with witnesses of index at most --max-index.
    Enumerate {
        #[arg(short = 'd')]
        dim: usize,
        /// Coefficient set A, comma separated; must contain 1.
        #[arg(short = 'A')]
        coefficients: String,
        #[arg(long)]
        max_index: u64,
        /// CSV with columns value,s,x,a,germ.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// JSON document embedding each witness germ.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Directory for one germ file per value; the CSV germ column then names these files.
        #[arg(long)]
        germs: Option<PathBuf>,
        /// Recompute even on a cache hit and fail if the cached result differs.
        #[arg(long)]
        audit_cache: bool,
    },
    /// Build a germ whose mld equals <x, a>.
    Realize {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(short = 'd')]
        dim: usize,
        /// Write the germ file here instead of printing it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rescale a pair of the enlarged set into V with the same pairing.
    Transfer(PairArgs),
    /// Track how enumerated values approach their predicted limits.
    Accum {
        #[arg(short = 'd')]
        dim: usize,
        #[arg(short = 'A')]
        coefficients: String,
        /// Increasing index bounds, comma separated.
        #[arg(long)]
        stages: String,
        /// Cluster radius (default 1/8).
        #[arg(long)]
        radius: Option<String>,
        /// CSV with columns stage,target,nearest,gap.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Closed-form membership test for a single coordinate.
    ClassifyV1 {
        #[arg(short = 'x')]
        x: String,
        #[arg(short = 'a')]
        a: String,
    },
}

fn parse_indices(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| Error::Parse(format!("invalid ray index {t:?}")))
        })
        .collect()
}

fn parse_stages(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("invalid stage {t:?}")))
        })
        .collect()
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn enumerate_cached(
    d: usize,
    set: &CoefficientSet,
    q_max: u64,
    audit: bool,
) -> Result<(EnumeratedMldSet, String)> {
    let Some(cache) = ResultCache::from_env() else {
        let fresh = enumerate_mld_set(d, set, q_max)?;
        let text = enumeration_to_json(&fresh);
        return Ok((fresh, text));
    };
    if let Some(cached) = cache.load(d, set, q_max)? {
        if audit {
            let fresh = enumerate_mld_set(d, set, q_max)?;
            let text = enumeration_to_json(&fresh);
            if text != cached {
                return Err(Error::VerificationFailed(format!(
                    "cache entry {} differs from a fresh computation",
                    cache.entry_path(d, set, q_max).display()
                )));
            }
            return Ok((fresh, text));
        }
        return Ok((enumeration_from_json(&cached)?, cached));
    }
    let fresh = enumerate_mld_set(d, set, q_max)?;
    let text = enumeration_to_json(&fresh);
    cache.store(d, set, q_max, &text)?;
    Ok((fresh, text))
}

fn run(command: Command) -> Result<String> {
    let mut out = String::new();
    match command {
        Command::GermMld { file, face, codim } => {
            let germ = read_germ(&file)?;
            if face.is_none() && codim.is_none() {
                let mld = germ.mld_at_origin()?;
                let rays: Vec<String> = mld.witness.rays.iter().map(ToString::to_string).collect();
                let coeffs: RationalVector = mld.witness.box_coefficients.clone().into();
                let _ = writeln!(out, "mld: {}", mld.value);
                let _ = writeln!(out, "witness: {}", mld.witness.point);
                let _ = writeln!(out, "box rays: {}", rays.join(","));
                let _ = writeln!(out, "box coefficients: {coeffs}");
            } else {
                let indices = parse_indices(face.as_deref().unwrap_or(""))?;
                let f = germ.face(&indices)?;
                let codim = codim.unwrap_or_else(|| germ.face_dim(&f).max(1));
                let value = germ.mld_at_point(&f, codim)?;
                let _ = writeln!(out, "mld: {value}");
                let _ = writeln!(out, "face dimension: {}", germ.face_dim(&f));
                let _ = writeln!(out, "point codimension: {codim}");
            }
        }
        Command::DivisorLd { file, e } => {
            let germ = read_germ(&file)?;
            let e: RationalVector = e.parse()?;
            let _ = writeln!(out, "{}", germ.log_discrepancy_of_divisor(&e)?);
        }
        Command::Vcheck(p) => {
            let _ = writeln!(out, "{}", v_verdict(&p.pair()?));
        }
        Command::TildeCheck(p) => {
            let _ = writeln!(out, "{}", tilde_verdict(&p.pair()?));
        }
        Command::Enumerate {
            dim,
            coefficients,
            max_index,
            csv,
            json,
            germs,
            audit_cache,
        } => {
            let set: CoefficientSet = coefficients.parse()?;
            let (result, text) = enumerate_cached(dim, &set, max_index, audit_cache)?;
            let _ = writeln!(
                out,
                "d={dim} A={{{set}}} max-index={max_index}: {} values",
                result.entries.len()
            );
            let _ = writeln!(out, "value\ts\tx\ta");
            for e in &result.entries {
                let a: RationalVector = e.witness.a().to_vec().into();
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}\t{a}",
                    e.value,
                    e.witness.arity(),
                    e.witness.x()
                );
            }
            let germ_name = |k: usize| format!("value_{k:04}.germ");
            if let Some(dir) = &germs {
                fs::create_dir_all(dir)
                    .map_err(|e| Error::Parse(format!("{}: {e}", dir.display())))?;
                for (k, e) in result.entries.iter().enumerate() {
                    write_germ(&dir.join(germ_name(k)), &e.germ)?;
                }
            }
            if let Some(path) = &csv {
                let mut buf = Vec::new();
                match &germs {
                    Some(dir) => write_enumeration_csv(&result, &mut buf, |k| {
                        dir.join(germ_name(k)).display().to_string()
                    })?,
                    None => write_enumeration_csv(&result, &mut buf, |k| format!("entry:{k}"))?,
                }
                write_file(path, &String::from_utf8(buf).expect("csv output is utf-8"))?;
            }
            if let Some(path) = &json {
                write_file(path, &text)?;
            }
        }
        Command::Realize {
            pair,
            dim,
            out: path,
        } => {
            let p = pair.pair()?;
            let germ = realize(&p, dim)?;
            let mld = germ.mld_at_origin()?;
            match path {
                Some(path) => {
                    write_germ(&path, &germ)?;
                    let _ = writeln!(out, "mld: {}", mld.value);
                    let _ = writeln!(out, "written: {}", path.display());
                }
                None => {
                    let _ = writeln!(out, "# mld: {}", mld.value);
                    out.push_str(&germ_to_toml(&germ));
                }
            }
        }
        Command::Transfer(p) => {
            let p = p.pair()?;
            let t = transfer_tilde_to_v(&p)?;
            let n: Vec<String> = t.multipliers.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "{}", t.pair);
            let _ = writeln!(out, "n=({})", n.join(","));
            let _ = writeln!(out, "pairing: {}", pairing(&t.pair));
        }
        Command::Accum {
            dim,
            coefficients,
            stages,
            radius,
            csv,
        } => {
            let set: CoefficientSet = coefficients.parse()?;
            let stages = parse_stages(&stages)?;
            let radius = match radius {
                Some(r) => parse_rational(&r)?,
                None => default_radius(),
            };
            let report = accumulation_report(dim, &set, &stages, &radius)?;
            let _ = writeln!(out, "{}", report.summary());
            if let Some(path) = &csv {
                let mut buf = Vec::new();
                report.write_csv(&mut buf)?;
                write_file(path, &String::from_utf8(buf).expect("csv output is utf-8"))?;
            }
        }
        Command::ClassifyV1 { x, a } => {
            let p = CandidatePair::new(x.parse()?, parse_rational_list(&a)?)?;
            if p.arity() != 1 {
                return Err(Error::InvalidPair(
                    "classify-v1 takes a single coordinate".into(),
                ));
            }
            let (x, a) = (&p.x()[0], &p.a()[0]);
            let verdict = if tilde_v1_classify(x, a) {
                if *a == int(0) {
                    "yes: a=0".to_string()
                } else {
                    format!("yes: x=1/{}", x.denom())
                }
            } else {
                format!("no: x={x} is not 1/n and a={a} is nonzero")
            };
            let _ = writeln!(out, "{verdict}");
        }
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            eprintln!("Parse: {}", first.trim_start_matches("error: "));
            return ExitCode::FAILURE;
        }
    };
    let start = Instant::now();
    let result = run(cli.command);
    let code = match result {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}: {e}", e.code());
            ExitCode::FAILURE
        }
    };
    if !cli.no_timing {
        eprintln!("time: {:.3}s", start.elapsed().as_secs_f64());
    }
    code
}
