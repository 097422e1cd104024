use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::Bipartition;

/// Conventional party name for position `i`: `A`, `B`, ... then `P26`, ...
pub fn party_name(i: usize) -> String {
    if i < 26 {
        ((b'A' + i as u8) as char).to_string()
    } else {
        format!("P{i}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Party {
    pub name: String,
    /// Global subsystem indices held by this party, in local tensor order.
    pub subsystems: Vec<usize>,
}

/// Assignment of subsystems to named parties.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Party>", into = "Vec<Party>")]
pub struct PartyLayout {
    parties: Vec<Party>,
}

impl TryFrom<Vec<Party>> for PartyLayout {
    type Error = Error;
    fn try_from(p: Vec<Party>) -> Result<Self> {
        PartyLayout::new(p)
    }
}

impl From<PartyLayout> for Vec<Party> {
    fn from(l: PartyLayout) -> Self {
        l.parties
    }
}

impl PartyLayout {
    pub fn new(parties: Vec<Party>) -> Result<Self> {
        if parties.is_empty() {
            return Err(Error::InvalidLayout("no parties".into()));
        }
        let n: usize = parties.iter().map(|p| p.subsystems.len()).sum();
        let mut seen = vec![false; n];
        for (i, p) in parties.iter().enumerate() {
            if p.subsystems.is_empty() {
                return Err(Error::InvalidLayout(format!("party `{}` holds nothing", p.name)));
            }
            if parties[..i].iter().any(|q| q.name == p.name) {
                return Err(Error::InvalidLayout(format!("duplicate party `{}`", p.name)));
            }
            for &s in &p.subsystems {
                if s >= n || std::mem::replace(&mut seen[s], true) {
                    return Err(Error::InvalidLayout(format!(
                        "subsystem {s} repeated or out of range 0..{n}"
                    )));
                }
            }
        }
        Ok(Self { parties })
    }

    /// Named parties holding the given subsystem lists.
    pub fn from_lists(lists: Vec<(String, Vec<usize>)>) -> Result<Self> {
        Self::new(
            lists
                .into_iter()
                .map(|(name, subsystems)| Party { name, subsystems })
                .collect(),
        )
    }

    /// Contiguous groups of the given sizes, named `A`, `B`, ...
    pub fn from_sizes(sizes: &[usize]) -> Result<Self> {
        let mut next = 0;
        let parties = sizes
            .iter()
            .enumerate()
            .map(|(i, &s)| {
                let p = Party {
                    name: party_name(i),
                    subsystems: (next..next + s).collect(),
                };
                next += s;
                p
            })
            .collect();
        Self::new(parties)
    }

    pub fn one_per_subsystem(n: usize) -> Result<Self> {
        Self::from_sizes(&vec![1; n])
    }

    pub fn parties(&self) -> &[Party] {
        &self.parties
    }

    pub fn names(&self) -> Vec<&str> {
        self.parties.iter().map(|p| p.name.as_str()).collect()
    }

    pub fn len(&self) -> usize {
        self.parties.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parties.is_empty()
    }

    pub fn num_subsystems(&self) -> usize {
        self.parties.iter().map(|p| p.subsystems.len()).sum()
    }

    pub fn party(&self, name: &str) -> Result<&Party> {
        self.parties
            .iter()
            .find(|p| p.name == name)
            .ok_or_else(|| Error::UnknownParty(name.to_string()))
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.parties.iter().position(|p| p.name == name)
    }

    /// Name of the party holding subsystem `s`.
    pub fn owner(&self, s: usize) -> Option<&str> {
        self.parties
            .iter()
            .find(|p| p.subsystems.contains(&s))
            .map(|p| p.name.as_str())
    }

    /// Concatenated subsystems of the named parties.
    pub fn subsystems_of<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for n in names {
            out.extend_from_slice(&self.party(n.as_ref())?.subsystems);
        }
        Ok(out)
    }

    /// Subsystem bipartition induced by a set of parties on side `a`.
    pub fn bipartition<S: AsRef<str>>(&self, a_parties: &[S]) -> Result<Bipartition> {
        let a = self.subsystems_of(a_parties)?;
        let b = self
            .parties
            .iter()
            .filter(|p| !a_parties.iter().any(|n| n.as_ref() == p.name))
            .flat_map(|p| p.subsystems.iter().copied())
            .collect();
        let bp = Bipartition::new(a, b);
        bp.validate(self.num_subsystems())?;
        Ok(bp)
    }

    /// Every unordered bipartition of the parties; side `a` holds the first party.
    pub fn party_bipartitions(&self) -> Vec<(Vec<String>, Vec<String>)> {
        let m = self.parties.len();
        if m < 2 {
            return Vec::new();
        }
        (0usize..(1 << (m - 1)) - 1)
            .map(|mask| {
                let mut a = vec![self.parties[0].name.clone()];
                let mut b = Vec::new();
                for k in 1..m {
                    if mask >> (k - 1) & 1 == 1 {
                        a.push(self.parties[k].name.clone());
                    } else {
                        b.push(self.parties[k].name.clone());
                    }
                }
                (a, b)
            })
            .collect()
    }

    /// Merges parties into super-parties. Super-parties appear in order of
    /// their first member; each holds its members' subsystems in layout order.
    pub fn coarsen(&self, grouping: &BTreeMap<String, String>) -> Result<Self> {
        let mut order: Vec<String> = Vec::new();
        let mut lists: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for p in &self.parties {
            let sup = grouping
                .get(&p.name)
                .ok_or_else(|| Error::InvalidLayout(format!("grouping misses party `{}`", p.name)))?;
            if !order.contains(sup) {
                order.push(sup.clone());
            }
            lists.entry(sup.clone()).or_default().extend_from_slice(&p.subsystems);
        }
        if let Some(k) = grouping.keys().find(|k| self.position(k).is_none()) {
            return Err(Error::UnknownParty(k.clone()));
        }
        Self::new(
            order
                .into_iter()
                .map(|name| Party {
                    subsystems: lists.remove(&name).unwrap_or_default(),
                    name,
                })
                .collect(),
        )
    }

    /// Same layout with every subsystem index shifted by `offset`.
    pub fn shifted(&self, offset: usize) -> Self {
        Self {
            parties: self
                .parties
                .iter()
                .map(|p| Party {
                    name: p.name.clone(),
                    subsystems: p.subsystems.iter().map(|s| s + offset).collect(),
                })
                .collect(),
        }
    }
}

/// Convenience for building groupings: `[("A","X"), ("B","X"), ("C","Y")]`.
pub fn grouping<S: AsRef<str>>(pairs: &[(S, S)]) -> BTreeMap<String, String> {
    pairs
        .iter()
        .map(|(a, b)| (a.as_ref().to_string(), b.as_ref().to_string()))
        .collect()
}
