use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::PartyLayout;
use crate::scalar::{cr, Real};
use crate::tensor::{Operator, StateVector};

/// Local quantum instrument: Kraus operators acting on (a subset of) one
/// party's subsystems.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Instrument<T: Real> {
    pub party: String,
    /// Positions within the party's subsystem list the Kraus operators act
    /// on, in tensor order; `None` means the whole local space.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slots: Option<Vec<usize>>,
    pub kraus: Vec<Operator<T>>,
}

impl<T: Real> Instrument<T> {
    pub fn new(party: impl Into<String>, slots: Option<Vec<usize>>, kraus: Vec<Operator<T>>) -> Self {
        Self {
            party: party.into(),
            slots,
            kraus,
        }
    }

    /// Rank-one projectors onto an orthonormal basis of the local space.
    pub fn projective(party: impl Into<String>, slots: Option<Vec<usize>>, basis: &[StateVector<T>]) -> Self {
        Self::new(party, slots, basis.iter().map(|b| b.projector()).collect())
    }

    /// Computational-basis measurement of local subsystems with `dims`.
    pub fn computational(party: impl Into<String>, slots: Option<Vec<usize>>, dims: &[usize]) -> Result<Self> {
        let n: usize = dims.iter().product();
        let basis = (0..n)
            .map(|i| StateVector::basis(dims.to_vec(), i))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::projective(party, slots, &basis))
    }

    /// Deterministic local unitary (a single Kraus operator).
    pub fn unitary(party: impl Into<String>, slots: Option<Vec<usize>>, u: Operator<T>) -> Self {
        Self::new(party, slots, vec![u])
    }

    pub fn outcomes(&self) -> usize {
        self.kraus.len()
    }

    pub fn is_measurement(&self) -> bool {
        self.kraus.len() > 1
    }

    /// Frobenius norm of `sum_k K_k^dagger K_k - I`.
    pub fn completeness_residual(&self) -> Result<T> {
        let first = self
            .kraus
            .first()
            .ok_or_else(|| Error::InvalidTree("instrument without Kraus operators".into()))?;
        let mut sum = Operator::zeros(first.dims().to_vec());
        for k in &self.kraus {
            sum = sum.add(&k.adjoint().matmul(k)?)?;
        }
        let id = Operator::identity(first.dims().to_vec());
        Ok(sum.add(&id.scale(cr(-T::one())))?.frobenius_norm())
    }

    /// Global subsystem indices the instrument acts on under `layout`.
    pub fn targets(&self, layout: &PartyLayout) -> Result<Vec<usize>> {
        let p = layout.party(&self.party)?;
        match &self.slots {
            None => Ok(p.subsystems.clone()),
            Some(slots) => slots
                .iter()
                .map(|&s| {
                    p.subsystems.get(s).copied().ok_or_else(|| {
                        Error::InvalidTree(format!("slot {s} out of range for party `{}`", self.party))
                    })
                })
                .collect(),
        }
    }
}

/// Final guess at a leaf.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", bound = "T: Real")]
pub enum Guess<T: Real> {
    /// Guess the problem's member with this index.
    Member(usize),
    /// Guess an explicit state of the problem's joint space.
    State(StateVector<T>),
}

/// Finite-round LOCC protocol: local instruments whose outcomes select the
/// next round, ending in guesses. Classical communication is the branching.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case", bound = "T: Real")]
pub enum ProtocolTree<T: Real> {
    Round {
        instrument: Instrument<T>,
        /// One child per Kraus operator, indexed by outcome.
        children: Vec<ProtocolTree<T>>,
    },
    Leaf {
        guess: Guess<T>,
    },
}

impl<T: Real> ProtocolTree<T> {
    pub fn leaf(member: usize) -> Self {
        ProtocolTree::Leaf {
            guess: Guess::Member(member),
        }
    }

    pub fn round(instrument: Instrument<T>, children: Vec<ProtocolTree<T>>) -> Self {
        ProtocolTree::Round { instrument, children }
    }

    /// Round whose every outcome continues with a copy of `next`.
    pub fn uniform(instrument: Instrument<T>, next: ProtocolTree<T>) -> Self {
        let children = vec![next; instrument.outcomes()];
        ProtocolTree::Round { instrument, children }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            ProtocolTree::Leaf { .. } => 1,
            ProtocolTree::Round { children, .. } => children.iter().map(|c| c.leaf_count()).sum(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            ProtocolTree::Leaf { .. } => 0,
            ProtocolTree::Round { children, .. } => {
                1 + children.iter().map(|c| c.depth()).max().unwrap_or(0)
            }
        }
    }

    /// Replaces every leaf, visiting leaves in depth-first outcome order.
    pub fn map_leaves(&self, f: &mut impl FnMut(usize, &Guess<T>) -> Guess<T>) -> Self {
        fn go<T: Real>(
            t: &ProtocolTree<T>,
            next: &mut usize,
            f: &mut impl FnMut(usize, &Guess<T>) -> Guess<T>,
        ) -> ProtocolTree<T> {
            match t {
                ProtocolTree::Leaf { guess } => {
                    let g = f(*next, guess);
                    *next += 1;
                    ProtocolTree::Leaf { guess: g }
                }
                ProtocolTree::Round { instrument, children } => ProtocolTree::Round {
                    instrument: instrument.clone(),
                    children: children.iter().map(|c| go(c, next, f)).collect(),
                },
            }
        }
        let mut n = 0;
        go(self, &mut n, f)
    }

    /// Replaces every leaf by `f(path)`, the outcome sequence leading to it.
    pub fn graft(&self, f: &mut impl FnMut(&[usize]) -> ProtocolTree<T>) -> Self {
        fn go<T: Real>(
            t: &ProtocolTree<T>,
            path: &mut Vec<usize>,
            f: &mut impl FnMut(&[usize]) -> ProtocolTree<T>,
        ) -> ProtocolTree<T> {
            match t {
                ProtocolTree::Leaf { .. } => f(path),
                ProtocolTree::Round { instrument, children } => ProtocolTree::Round {
                    instrument: instrument.clone(),
                    children: children
                        .iter()
                        .enumerate()
                        .map(|(k, c)| {
                            path.push(k);
                            let out = go(c, path, f);
                            path.pop();
                            out
                        })
                        .collect(),
                },
            }
        }
        go(self, &mut Vec::new(), f)
    }

    /// Checks parties, slot ranges, Kraus dimensions, completeness and the
    /// child count of every round against a layout with subsystem `dims`.
    pub fn validate(&self, layout: &PartyLayout, dims: &[usize]) -> Result<()> {
        match self {
            ProtocolTree::Leaf { guess } => {
                if let Guess::State(s) = guess {
                    if s.dims() != dims {
                        return Err(Error::InvalidTree("leaf state has wrong dims".into()));
                    }
                }
                Ok(())
            }
            ProtocolTree::Round { instrument, children } => {
                let targets = instrument.targets(layout)?;
                let tdims: Vec<usize> = targets.iter().map(|&t| dims[t]).collect();
                for k in &instrument.kraus {
                    if k.dims() != tdims.as_slice() {
                        return Err(Error::InvalidTree(format!(
                            "Kraus dims {:?} do not match local dims {:?} of `{}`",
                            k.dims(),
                            tdims,
                            instrument.party
                        )));
                    }
                }
                let r = instrument.completeness_residual()?;
                if r > T::tolerance() {
                    return Err(Error::IncompleteInstrument(r.as_f64()));
                }
                if children.len() != instrument.outcomes() {
                    return Err(Error::InvalidTree(format!(
                        "{} children for {} outcomes",
                        children.len(),
                        instrument.outcomes()
                    )));
                }
                children.iter().try_for_each(|c| c.validate(layout, dims))
            }
        }
    }

    /// Re-expresses the tree on a coarser layout over the same subsystems;
    /// each instrument moves to the super-party holding its targets.
    pub fn coarsen(&self, fine: &PartyLayout, coarse: &PartyLayout) -> Result<Self> {
        match self {
            ProtocolTree::Leaf { guess } => Ok(ProtocolTree::Leaf { guess: guess.clone() }),
            ProtocolTree::Round { instrument, children } => {
                let targets = instrument.targets(fine)?;
                let owner = coarse
                    .owner(targets[0])
                    .ok_or_else(|| Error::InvalidLayout("subsystem without owner".into()))?;
                let party = coarse.party(owner)?;
                let slots = targets
                    .iter()
                    .map(|t| {
                        party.subsystems.iter().position(|s| s == t).ok_or_else(|| {
                            Error::InvalidLayout(format!(
                                "instrument of `{}` spans several coarse parties",
                                instrument.party
                            ))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(ProtocolTree::Round {
                    instrument: Instrument {
                        party: owner.to_string(),
                        slots: Some(slots),
                        kraus: instrument.kraus.clone(),
                    },
                    children: children
                        .iter()
                        .map(|c| c.coarsen(fine, coarse))
                        .collect::<Result<Vec<_>>>()?,
                })
            }
        }
    }

    /// Acting parties along every root-to-leaf path, in order.
    pub fn party_paths(&self) -> Vec<Vec<String>> {
        fn go<T: Real>(t: &ProtocolTree<T>, prefix: &mut Vec<String>, out: &mut Vec<Vec<String>>) {
            match t {
                ProtocolTree::Leaf { .. } => out.push(prefix.clone()),
                ProtocolTree::Round { instrument, children } => {
                    prefix.push(instrument.party.clone());
                    for c in children {
                        go(c, prefix, out);
                    }
                    prefix.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }
}

/// True iff along every path the acting parties never move backwards in
/// `order` (for two parties: Alice's rounds, then Bob's, never back).
pub fn validate_one_way<T: Real, S: AsRef<str>>(tree: &ProtocolTree<T>, order: &[S]) -> bool {
    tree.party_paths().iter().all(|path| {
        let mut last = 0;
        path.iter().all(|p| match order.iter().position(|o| o.as_ref() == p) {
            Some(i) if i >= last => {
                last = i;
                true
            }
            _ => false,
        })
    })
}
