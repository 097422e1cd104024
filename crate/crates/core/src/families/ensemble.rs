use serde::{Deserialize, Serialize};

use super::layout::PartyLayout;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::tensor::{entanglement_entropy, StateVector};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Member<T: Real> {
    pub prior: T,
    pub state: StateVector<T>,
}

/// Prior-weighted list of pure states sharing one party layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Ensemble<T: Real> {
    layout: PartyLayout,
    members: Vec<Member<T>>,
}

impl<T: Real> Ensemble<T> {
    pub fn new(layout: PartyLayout, members: Vec<Member<T>>) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| Error::InvalidEnsemble("no members".into()))?;
        let dims = first.state.dims().to_vec();
        if dims.len() != layout.num_subsystems() {
            return Err(Error::InvalidEnsemble(format!(
                "layout covers {} subsystems, states have {}",
                layout.num_subsystems(),
                dims.len()
            )));
        }
        let mut total = T::zero();
        for m in &members {
            if m.state.dims() != dims.as_slice() {
                return Err(Error::InvalidEnsemble("members have different dims".into()));
            }
            if m.prior < T::zero() {
                return Err(Error::InvalidEnsemble("negative prior".into()));
            }
            total += m.prior;
        }
        if (total - T::one()).abs() > T::tolerance() {
            return Err(Error::InvalidEnsemble(format!("priors sum to {total}")));
        }
        Ok(Self { layout, members })
    }

    pub fn equiprobable(layout: PartyLayout, states: Vec<StateVector<T>>) -> Result<Self> {
        let p = T::one() / T::from_usize_lossy(states.len().max(1));
        Self::new(
            layout,
            states.into_iter().map(|state| Member { prior: p, state }).collect(),
        )
    }

    pub fn layout(&self) -> &PartyLayout {
        &self.layout
    }

    pub fn members(&self) -> &[Member<T>] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn dims(&self) -> &[usize] {
        self.members[0].state.dims()
    }

    pub fn dim(&self) -> usize {
        self.members[0].state.dim()
    }

    pub fn state(&self, i: usize) -> &StateVector<T> {
        &self.members[i].state
    }

    pub fn prior(&self, i: usize) -> T {
        self.members[i].prior
    }

    pub fn states(&self) -> impl Iterator<Item = &StateVector<T>> {
        self.members.iter().map(|m| &m.state)
    }

    /// Same states under a different layout over the same subsystems.
    pub fn with_layout(&self, layout: PartyLayout) -> Result<Self> {
        Self::new(layout, self.members.clone())
    }

    /// Subset of members, renormalizing the priors.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let total: T = indices.iter().map(|&i| self.members[i].prior).sum();
        Self::new(
            self.layout.clone(),
            indices
                .iter()
                .map(|&i| Member {
                    prior: self.members[i].prior / total,
                    state: self.members[i].state.clone(),
                })
                .collect(),
        )
    }

    /// Largest entry of `|G - I|` for the Gram matrix `G`.
    pub fn gram_residual(&self) -> T {
        let mut worst = T::zero();
        for (i, a) in self.members.iter().enumerate() {
            for (j, b) in self.members.iter().enumerate() {
                let g = a.state.inner(&b.state);
                let target = if i == j { T::one() } else { T::zero() };
                worst = worst.max((g - crate::scalar::C::new(target, T::zero())).norm());
            }
        }
        worst
    }

    pub fn is_orthonormal(&self) -> bool {
        self.gram_residual() <= T::tolerance()
    }

    /// Orthonormal and spanning the whole space.
    pub fn is_complete_basis(&self) -> bool {
        self.len() == self.dim() && self.is_orthonormal()
    }

    pub fn is_equiprobable(&self) -> bool {
        let p = T::one() / T::from_usize_lossy(self.len());
        self.members.iter().all(|m| (m.prior - p).abs() <= T::tolerance())
    }

    /// Prior-weighted mean entanglement entropy across a party bipartition.
    pub fn mean_entropy<S: AsRef<str>>(&self, a_parties: &[S]) -> Result<T> {
        let bp = self.layout.bipartition(a_parties)?;
        let mut acc = T::zero();
        for m in &self.members {
            acc += m.prior * entanglement_entropy(&m.state, &bp)?;
        }
        Ok(acc)
    }
}
