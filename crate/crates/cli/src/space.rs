//! Builder selection and JSON input for every subcommand.

use std::fs;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use incidence::builders::{
    additive_chain, finite_surjections_weighted, finite_surjections_weighted_with, interval_family_space,
    interval_family_space_with, monotone_surjection_data, nerve_of_category, FiniteCategorySpec,
    IntervalFamilySpec, Poset,
};
use incidence::simplicial::{SimplicialSetDocument, WeightedClassData, WeightedClassDocument};
use incidence::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SpaceKind {
    /// Monotone surjections between finite ordinals.
    MonotoneSurjections,
    /// Boolean lattices as a hereditary interval family.
    BooleanIntervals,
    /// Finite sets and surjections, with automorphism weights.
    FaaDiBruno,
    /// The nerve of a finite chain.
    Chain,
    /// The nerve of a divisor lattice.
    Divisors,
    /// A chain with pointwise addition: monoidal but not CULF.
    AdditiveChain,
}

fn positive(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

fn positive_u64(s: &str) -> std::result::Result<u64, String> {
    match s.parse::<u64>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Clone, Debug, Args)]
pub struct SpaceArgs {
    /// Built-in space to construct.
    #[arg(long, value_enum, required_unless_present = "input", conflicts_with = "input")]
    pub space: Option<SpaceKind>,
    /// JSON document with weighted class data or a simplicial set.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Largest source ordinal for monotone surjections.
    #[arg(long, default_value_t = 4, value_parser = positive)]
    pub max_source: usize,
    /// Truncation level; each builder picks one that certifies every column.
    #[arg(long, value_parser = positive)]
    pub levels: Option<usize>,
    /// Largest interval length kept in the Boolean family.
    #[arg(long, default_value_t = 4, value_parser = positive)]
    pub bound: usize,
    /// Largest set size for finite surjections.
    #[arg(long, default_value_t = 4, value_parser = positive)]
    pub max_n: usize,
    /// Number of objects in a chain.
    #[arg(long, default_value_t = 4, value_parser = positive)]
    pub objects: usize,
    /// The integer whose divisors form the lattice.
    #[arg(long, default_value_t = 60, value_parser = positive_u64)]
    pub number: u64,
}

/// Extra structure kept by some builders for the classical Möbius oracle.
#[derive(Clone, Debug)]
pub enum Order {
    /// Level-1 classes are the arrows of this poset.
    Poset(FiniteCategorySpec),
    /// Level-1 class `k` is an interval isomorphic to `forms[k]`.
    Intervals(Vec<(String, Poset)>),
}

#[derive(Clone, Debug)]
pub struct Space {
    pub name: String,
    pub data: WeightedClassData,
    pub order: Option<Order>,
}

impl SpaceArgs {
    pub fn load(&self) -> Result<Space> {
        if let Some(path) = &self.input {
            return load_file(path);
        }
        let kind = self.space.ok_or_else(|| Error::Malformed("either --space or --input is required".into()))?;
        match kind {
            SpaceKind::MonotoneSurjections => {
                let n = self.levels.unwrap_or(self.max_source + 1);
                Ok(Space {
                    name: format!("monotone-surjections max_source={} levels={n}", self.max_source),
                    data: monotone_surjection_data(self.max_source, n)?,
                    order: None,
                })
            }
            SpaceKind::BooleanIntervals => {
                let spec = IntervalFamilySpec::boolean(self.bound);
                let fam = match self.levels {
                    Some(n) => interval_family_space_with(&spec, n, 3)?,
                    None => interval_family_space(&spec)?,
                };
                let n = fam.data.truncation();
                Ok(Space {
                    name: format!("boolean-intervals bound={} levels={n}", self.bound),
                    order: Some(Order::Intervals(fam.names.into_iter().zip(fam.forms).collect())),
                    data: fam.data,
                })
            }
            SpaceKind::FaaDiBruno => {
                let data = match self.levels {
                    Some(n) => finite_surjections_weighted_with(self.max_n, n)?,
                    None => finite_surjections_weighted(self.max_n)?,
                };
                let n = data.truncation();
                Ok(Space { name: format!("faa-di-bruno max_n={} levels={n}", self.max_n), data, order: None })
            }
            SpaceKind::Chain => {
                let c = FiniteCategorySpec::chain_poset(self.objects);
                let n = self.levels.unwrap_or(self.objects);
                Ok(Space {
                    name: format!("chain objects={} levels={n}", self.objects),
                    data: WeightedClassData::from_set(nerve_of_category(&c, n)?, None)?,
                    order: Some(Order::Poset(c)),
                })
            }
            SpaceKind::Divisors => {
                let c = FiniteCategorySpec::divisor_lattice(self.number);
                let n = self.levels.unwrap_or_else(|| Poset::divisors(self.number).1.length() + 1);
                Ok(Space {
                    name: format!("divisors number={} levels={n}", self.number),
                    data: WeightedClassData::from_set(nerve_of_category(&c, n)?, None)?,
                    order: Some(Order::Poset(c)),
                })
            }
            SpaceKind::AdditiveChain => {
                let n = self.levels.unwrap_or(3);
                Ok(Space {
                    name: format!("additive-chain objects={} levels={n}", self.objects),
                    data: additive_chain(self.objects - 1, n)?,
                    order: None,
                })
            }
        }
    }
}

/// Reads weighted class data, falling back to a plain simplicial set.
fn load_file(path: &PathBuf) -> Result<Space> {
    let text = fs::read_to_string(path).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
    let name = format!("input {}", path.display());
    let data = match WeightedClassDocument::from_json(&text) {
        Ok(doc) => doc.to_data()?,
        Err(weighted) => match SimplicialSetDocument::from_json(&text) {
            Ok(doc) => {
                let (set, monoidal) = doc.to_space()?;
                WeightedClassData::from_set(set, monoidal)?
            }
            Err(plain) => {
                return Err(Error::Malformed(format!(
                    "neither weighted class data ({weighted}) nor a simplicial set ({plain})"
                )))
            }
        },
    };
    Ok(Space { name, data, order: None })
}
