//! JSON documents for simplicial sets and weighted class data.
//!
//! Face and degeneracy maps are keyed `"n,i"` and list target indices in
//! level order. Products are `[a, b, a*b]` index triples per level.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{FreeProductRule, MonoidalStructure, TruncatedSimplicialSet, WeightedClassData};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimplicialSetDocument {
    pub levels: Vec<Vec<String>>,
    pub face: BTreeMap<String, Vec<usize>>,
    pub degeneracy: BTreeMap<String, Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monoidal: Option<MonoidalDocument>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonoidalDocument {
    pub unit: String,
    pub product: Vec<Vec<[usize; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub free: Option<FreeProductRule>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassEntry {
    pub id: String,
    pub aut_order: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightedClassDocument {
    pub classes: Vec<Vec<ClassEntry>>,
    pub face: BTreeMap<String, Vec<usize>>,
    pub degeneracy: BTreeMap<String, Vec<usize>>,
    #[serde(default)]
    pub product: Vec<Vec<[usize; 3]>>,
    #[serde(default)]
    pub unit: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub free: Option<FreeProductRule>,
}

fn key(n: usize, i: usize) -> String {
    format!("{n},{i}")
}

fn encode_maps(set: &TruncatedSimplicialSet) -> (BTreeMap<String, Vec<usize>>, BTreeMap<String, Vec<usize>>) {
    let mut face = BTreeMap::new();
    let mut degeneracy = BTreeMap::new();
    let top = set.truncation();
    for n in 0..=top {
        if n >= 1 {
            for i in 0..=n {
                face.insert(key(n, i), set.face_map(n, i).to_vec());
            }
        }
        if n < top {
            for i in 0..=n {
                degeneracy.insert(key(n, i), set.degeneracy_map(n, i).to_vec());
            }
        }
    }
    (face, degeneracy)
}

fn decode_maps(
    levels: usize,
    face: &BTreeMap<String, Vec<usize>>,
    degeneracy: &BTreeMap<String, Vec<usize>>,
) -> Result<(Vec<Vec<Vec<usize>>>, Vec<Vec<Vec<usize>>>)> {
    let top = levels.checked_sub(1).ok_or_else(|| Error::Malformed("no levels".into()))?;
    let fetch = |m: &BTreeMap<String, Vec<usize>>, kind: &str, n: usize, i: usize| {
        m.get(&key(n, i))
            .cloned()
            .ok_or_else(|| Error::Malformed(format!("missing {kind} map \"{n},{i}\"")))
    };
    let mut faces = vec![Vec::new()];
    for n in 1..=top {
        faces.push((0..=n).map(|i| fetch(face, "face", n, i)).collect::<Result<Vec<_>>>()?);
    }
    let degs = (0..top)
        .map(|n| (0..=n).map(|i| fetch(degeneracy, "degeneracy", n, i)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let expected_faces: usize = (1..=top).map(|n| n + 1).sum();
    let expected_degs: usize = (0..top).map(|n| n + 1).sum();
    if face.len() != expected_faces || degeneracy.len() != expected_degs {
        return Err(Error::Malformed("unexpected face or degeneracy keys".into()));
    }
    Ok((faces, degs))
}

fn encode_products(m: &MonoidalStructure) -> Vec<Vec<[usize; 3]>> {
    m.products
        .iter()
        .map(|t| t.iter().map(|(&(a, b), &c)| [a, b, c]).collect())
        .collect()
}

fn decode_products(p: &[Vec<[usize; 3]>]) -> Vec<BTreeMap<(usize, usize), usize>> {
    p.iter().map(|t| t.iter().map(|&[a, b, c]| ((a, b), c)).collect()).collect()
}

impl SimplicialSetDocument {
    pub fn from_space(set: &TruncatedSimplicialSet, monoidal: Option<&MonoidalStructure>) -> Self {
        let (face, degeneracy) = encode_maps(set);
        SimplicialSetDocument {
            levels: set.levels().to_vec(),
            face,
            degeneracy,
            monoidal: monoidal.map(|m| MonoidalDocument {
                unit: set.id(0, m.unit).to_string(),
                product: encode_products(m),
                free: m.free,
            }),
        }
    }

    /// Range-checked decoding into the in-memory types.
    pub fn to_space(&self) -> Result<(TruncatedSimplicialSet, Option<MonoidalStructure>)> {
        let (faces, degs) = decode_maps(self.levels.len(), &self.face, &self.degeneracy)?;
        let set = TruncatedSimplicialSet::new(self.levels.clone(), faces, degs)?;
        let monoidal = match &self.monoidal {
            None => None,
            Some(m) => {
                let unit = set
                    .lookup(0, &m.unit)
                    .ok_or_else(|| Error::Malformed(format!("unit `{}` is not a vertex", m.unit)))?;
                Some(MonoidalStructure { unit, products: decode_products(&m.product), free: m.free })
            }
        };
        if let Some(m) = &monoidal {
            // Reuse the range checks of the weighted constructor.
            WeightedClassData::from_set(set.clone(), Some(m.clone()))?;
        }
        Ok((set, monoidal))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serialises")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

impl WeightedClassDocument {
    pub fn from_data(data: &WeightedClassData) -> Self {
        let set = data.set();
        let (face, degeneracy) = encode_maps(set);
        let classes = (0..set.levels().len())
            .map(|n| {
                set.level(n)
                    .iter()
                    .zip(data.aut_level(n))
                    .map(|(id, &a)| ClassEntry { id: id.clone(), aut_order: a })
                    .collect()
            })
            .collect();
        WeightedClassDocument {
            classes,
            face,
            degeneracy,
            product: data.monoidal().map(encode_products).unwrap_or_default(),
            unit: data.monoidal().map(|m| set.id(0, m.unit).to_string()),
            free: data.monoidal().and_then(|m| m.free),
        }
    }

    pub fn to_data(&self) -> Result<WeightedClassData> {
        let levels: Vec<Vec<String>> =
            self.classes.iter().map(|l| l.iter().map(|c| c.id.clone()).collect()).collect();
        let aut = self.classes.iter().map(|l| l.iter().map(|c| c.aut_order).collect()).collect();
        let (faces, degs) = decode_maps(levels.len(), &self.face, &self.degeneracy)?;
        let set = TruncatedSimplicialSet::new(levels, faces, degs)?;
        let monoidal = match &self.unit {
            None => None,
            Some(u) => {
                let unit = set
                    .lookup(0, u)
                    .ok_or_else(|| Error::Malformed(format!("unit `{u}` is not a class")))?;
                Some(MonoidalStructure { unit, products: decode_products(&self.product), free: self.free })
            }
        };
        WeightedClassData::new(set, aut, monoidal)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serialises")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}
