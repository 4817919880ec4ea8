use crate::error::{Error, Result};

use super::{MonoidalStructure, TruncatedSimplicialSet};

/// Isomorphism classes per level with automorphism orders.
///
/// A plain simplicial set is the case where every `aut_order` is one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedClassData {
    set: TruncatedSimplicialSet,
    aut: Vec<Vec<u64>>,
    monoidal: Option<MonoidalStructure>,
}

impl WeightedClassData {
    pub fn new(
        set: TruncatedSimplicialSet,
        aut: Vec<Vec<u64>>,
        monoidal: Option<MonoidalStructure>,
    ) -> Result<Self> {
        if aut.len() != set.levels().len() {
            return Err(Error::Malformed(format!(
                "aut orders given for {} levels, space has {}",
                aut.len(),
                set.levels().len()
            )));
        }
        for (n, orders) in aut.iter().enumerate() {
            if orders.len() != set.len(n) {
                return Err(Error::Malformed(format!("level {n}: {} aut orders for {} classes", orders.len(), set.len(n))));
            }
            if let Some(k) = orders.iter().position(|&a| a == 0) {
                return Err(Error::Malformed(format!("class `{}` has aut_order 0", set.id(n, k))));
            }
        }
        if let Some(m) = &monoidal {
            check_monoidal_ranges(&set, m)?;
        }
        Ok(WeightedClassData { set, aut, monoidal })
    }

    pub fn from_set(set: TruncatedSimplicialSet, monoidal: Option<MonoidalStructure>) -> Result<Self> {
        let aut = set.levels().iter().map(|l| vec![1; l.len()]).collect();
        Self::new(set, aut, monoidal)
    }

    pub fn set(&self) -> &TruncatedSimplicialSet {
        &self.set
    }

    pub fn monoidal(&self) -> Option<&MonoidalStructure> {
        self.monoidal.as_ref()
    }

    pub fn aut(&self, n: usize, k: usize) -> u64 {
        self.aut[n][k]
    }

    pub fn aut_level(&self, n: usize) -> &[u64] {
        &self.aut[n]
    }

    pub fn truncation(&self) -> usize {
        self.set.truncation()
    }

    pub fn is_set_level(&self) -> bool {
        self.aut.iter().flatten().all(|&a| a == 1)
    }

    /// `X_0` has a single class.
    pub fn is_connected(&self) -> bool {
        self.set.len(0) == 1
    }

    /// The unit 1-simplex `id_u = s_0 u`, when a monoidal structure is present.
    pub fn unit_edge(&self) -> Option<usize> {
        let m = self.monoidal.as_ref()?;
        (self.truncation() >= 1).then(|| self.set.degeneracy(0, 0, m.unit))
    }
}

fn check_monoidal_ranges(set: &TruncatedSimplicialSet, m: &MonoidalStructure) -> Result<()> {
    if m.unit >= set.len(0) {
        return Err(Error::Malformed(format!("unit vertex {} out of range", m.unit)));
    }
    if m.products.len() > set.levels().len() {
        return Err(Error::Malformed("product tables beyond the truncation".into()));
    }
    for (n, table) in m.products.iter().enumerate() {
        let len = set.len(n);
        if let Some(((a, b), c)) = table.iter().find(|((a, b), c)| *a >= len || *b >= len || **c >= len) {
            return Err(Error::Malformed(format!("level {n}: product ({a},{b}) -> {c} out of range")));
        }
    }
    Ok(())
}
