//! Turning command-line flags and spec files into library values.
//!
//! Every command takes its pair of rims either inline (`--I`, `--J`,
//! `--n`) or from a JSON spec file (`--spec`); commands that need the
//! parameter vector b additionally take `--b` inline. The truncation
//! order is resolved with the precedence: `--truncation` flag, then the
//! spec file's "truncation" field, then the CM_TRUNCATION environment
//! variable, then 16.

use std::path::{Path, PathBuf};

use boundary_cm::cmmod::build_rank2;
use boundary_cm::combinat::Rim;
use boundary_cm::{RankTwoModule, SeriesRing, DEFAULT_TRUNCATION};
use clap::Args;
use serde::Deserialize;

use crate::error::CliError;
use crate::poly::parse_poly;

#[derive(Args, Debug)]
pub struct PairArgs {
    /// First rim: comma-separated labels in 1..=n, e.g. 1,4,6
    #[arg(long = "I", value_name = "LABELS", conflicts_with = "spec")]
    pub i: Option<String>,

    /// Second rim, same format
    #[arg(long = "J", value_name = "LABELS", conflicts_with = "spec")]
    pub j: Option<String>,

    /// Length of the cycle the labels live on
    #[arg(long, value_name = "N", conflicts_with = "spec")]
    pub n: Option<usize>,

    /// JSON file {"I": rim, "J": rim, "b": [series...], "truncation": N}
    #[arg(long, value_name = "FILE")]
    pub spec: Option<PathBuf>,

    /// Truncation order of the coefficient ring Q[t]/(t^N)
    #[arg(long, value_name = "ORDER")]
    pub truncation: Option<usize>,
}

#[derive(Args, Debug)]
pub struct ModuleArgs {
    #[command(flatten)]
    pub pair: PairArgs,

    /// Parameters b_1..b_2r inline: semicolon-separated polynomials in t,
    /// e.g. "1;0;t;0;-1;0;-t;0"
    #[arg(long, value_name = "POLYS", conflicts_with = "spec")]
    pub b: Option<String>,
}

/// A spec file, with series still in their wire form (coefficient
/// strings, constant term first).
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    #[serde(rename = "I")]
    i: Rim,
    #[serde(rename = "J")]
    j: Rim,
    b: Vec<Vec<String>>,
    #[serde(default)]
    truncation: Option<usize>,
}

fn read_spec(path: &Path) -> Result<RawSpec, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|err| CliError::io(format!("cannot read {}: {err}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|err| CliError::json(format!("{}: {err}", path.display())))
}

pub fn resolve_order(flag: Option<usize>, spec_field: Option<usize>) -> Result<usize, CliError> {
    if let Some(order) = flag.or(spec_field) {
        return Ok(order);
    }
    match std::env::var("CM_TRUNCATION") {
        Ok(text) => text.trim().parse().map_err(|_| {
            CliError::usage(format!(
                "CM_TRUNCATION must be a positive integer, got {text:?}"
            ))
        }),
        Err(_) => Ok(DEFAULT_TRUNCATION),
    }
}

pub fn parse_labels(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|seg| !seg.is_empty())
        .map(|seg| {
            seg.parse().map_err(|_| {
                CliError::usage(format!("bad label {seg:?}: expected a positive integer"))
            })
        })
        .collect()
}

fn inline_rim(text: &str, n: usize) -> Result<Rim, CliError> {
    Ok(Rim::new(n, parse_labels(text)?)?)
}

/// The rim pair plus the resolved truncation order; `ring()` builds the
/// coefficient ring on demand so commands that never compute with series
/// still validate the order.
pub struct PairInput {
    pub i: Rim,
    pub j: Rim,
    pub order: usize,
}

impl PairInput {
    pub fn ring(&self) -> Result<SeriesRing, CliError> {
        Ok(SeriesRing::new(self.order)?)
    }
}

pub fn pair_input(args: &PairArgs) -> Result<PairInput, CliError> {
    if let Some(path) = &args.spec {
        let raw = read_spec(path)?;
        let order = resolve_order(args.truncation, raw.truncation)?;
        return Ok(PairInput {
            i: raw.i,
            j: raw.j,
            order,
        });
    }
    match (&args.i, &args.j, args.n) {
        (Some(i), Some(j), Some(n)) => Ok(PairInput {
            i: inline_rim(i, n)?,
            j: inline_rim(j, n)?,
            order: resolve_order(args.truncation, None)?,
        }),
        _ => Err(CliError::usage(
            "this command needs --spec FILE or all of --I, --J, --n",
        )),
    }
}

pub fn module_input(args: &ModuleArgs) -> Result<RankTwoModule, CliError> {
    if let Some(path) = &args.pair.spec {
        let raw = read_spec(path)?;
        let order = resolve_order(args.pair.truncation, raw.truncation)?;
        let ring = SeriesRing::new(order)?;
        let b = raw
            .b
            .iter()
            .map(|entry| ring.from_coeff_strs(entry))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(build_rank2(ring, &raw.i, &raw.j, &b)?);
    }
    let pair = pair_input(&args.pair)?;
    let Some(b_text) = &args.b else {
        return Err(CliError::usage(
            "a rank-2 module needs --spec FILE or --b POLYS",
        ));
    };
    let ring = pair.ring()?;
    let b = b_text
        .split(';')
        .enumerate()
        .map(|(idx, entry)| {
            parse_poly(&ring, entry)
                .map_err(|err| CliError::usage(format!("--b entry {}: {err}", idx + 1)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(build_rank2(ring, &pair.i, &pair.j, &b)?)
}

/// Elements of I \ J and J \ I, each listed in cyclic order starting
/// from the smallest element of I \ J. For a tight pair this is exactly
/// the alternation order of the interlacing.
pub fn difference_listing(i: &Rim, j: &Rim) -> (Vec<usize>, Vec<usize>) {
    let mut i_only: Vec<usize> = i.members().filter(|&m| !j.contains(m)).collect();
    let mut j_only: Vec<usize> = j.members().filter(|&m| !i.contains(m)).collect();
    let Some(&anchor) = i_only.first() else {
        return (i_only, j_only);
    };
    let n = i.n();
    i_only.sort_by_key(|&x| (x + n - anchor) % n);
    j_only.sort_by_key(|&x| (x + n - anchor) % n);
    (i_only, j_only)
}
