//! Exact-rational file formats.
//!
//! Germ files are TOML:
//!
//! ```toml
//! dim = 2
//! extra_generators = [["1/2", "1/2"]]
//! rays = [["1", "0"], ["0", "1"]]
//! coefficients = ["0", "0"]
//! ```
//!
//! Entries may be integers or `"p/q"` strings on input; output always uses strings.

use std::fs;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::germ::ToricGerm;
use crate::lattice::{parse_rational, Rational, RationalVector, SuperLattice};
use crate::mld_sets::{CandidatePair, CoefficientSet, EnumeratedMldSet, MldEntry};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GermFile {
    pub dim: usize,
    #[serde(default)]
    pub extra_generators: Vec<RationalVector>,
    pub rays: Vec<RationalVector>,
    pub coefficients: RationalVector,
}

impl From<&ToricGerm> for GermFile {
    fn from(g: &ToricGerm) -> Self {
        GermFile {
            dim: g.dim(),
            extra_generators: g.lattice().extra_generators().to_vec(),
            rays: g.rays().to_vec(),
            coefficients: g.coefficients().to_vec().into(),
        }
    }
}

impl GermFile {
    pub fn into_germ(self) -> Result<ToricGerm> {
        let lattice = SuperLattice::new(self.dim, self.extra_generators)?;
        ToricGerm::new(lattice, self.rays, self.coefficients.into_entries())
    }
}

pub fn germ_from_toml(text: &str) -> Result<ToricGerm> {
    let file: GermFile = toml::from_str(text).map_err(|e| Error::Parse(e.message().to_string()))?;
    file.into_germ()
}

pub fn germ_to_toml(germ: &ToricGerm) -> String {
    toml::to_string(&GermFile::from(germ)).expect("germ files always serialize")
}

pub fn read_germ(path: &Path) -> Result<ToricGerm> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    germ_from_toml(&text)
}

pub fn write_germ(path: &Path, germ: &ToricGerm) -> Result<()> {
    fs::write(path, germ_to_toml(germ))
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// One enumerated value with its witness pair and realization.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryDocument {
    value: String,
    pair: CandidatePair,
    germ: GermFile,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnumerationDocument {
    dim: usize,
    coefficients: Vec<String>,
    q_max: u64,
    entries: Vec<EntryDocument>,
}

/// Pretty JSON embedding every witness germ.
pub fn enumeration_to_json(set: &EnumeratedMldSet) -> String {
    let doc = EnumerationDocument {
        dim: set.dim,
        coefficients: set
            .coefficients
            .values()
            .iter()
            .map(ToString::to_string)
            .collect(),
        q_max: set.q_max,
        entries: set
            .entries
            .iter()
            .map(|e| EntryDocument {
                value: e.value.to_string(),
                pair: e.witness.clone(),
                germ: GermFile::from(&e.germ),
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("documents always serialize");
    s.push('\n');
    s
}

/// Inverse of [`enumeration_to_json`]; germs are rebuilt and revalidated.
pub fn enumeration_from_json(text: &str) -> Result<EnumeratedMldSet> {
    let doc: EnumerationDocument =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let coefficients = CoefficientSet::new(
        doc.coefficients
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<Rational>>>()?,
    )?;
    let entries = doc
        .entries
        .into_iter()
        .map(|e| {
            Ok(MldEntry {
                value: parse_rational(&e.value)?,
                witness: e.pair,
                germ: e.germ.into_germ()?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EnumeratedMldSet {
        dim: doc.dim,
        coefficients,
        q_max: doc.q_max,
        entries,
    })
}

/// Rows `value,s,x,a,germ`; `germ_ref` names where entry `k`'s germ lives.
pub fn write_enumeration_csv<W: io::Write>(
    set: &EnumeratedMldSet,
    writer: W,
    germ_ref: impl Fn(usize) -> String,
) -> Result<()> {
    let err = |e: csv::Error| Error::Parse(e.to_string());
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["value", "s", "x", "a", "germ"])
        .map_err(err)?;
    for (k, e) in set.entries.iter().enumerate() {
        let a: RationalVector = e.witness.a().to_vec().into();
        w.write_record([
            e.value.to_string(),
            e.witness.arity().to_string(),
            e.witness.x().to_string(),
            a.to_string(),
            germ_ref(k),
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| Error::Parse(e.to_string()))
}
