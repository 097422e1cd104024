//! Party layouts, ensembles and the state families used throughout.

mod constructors;
mod ensemble;
mod graph;
mod layout;

pub use constructors::{
    bell_basis, bell_states, computational_basis, ghz_basis, ghz_state, ghz_subset,
    graph_state_basis, lattice_basis, parametric_basis, GraphStateBasis,
};
pub use ensemble::{Ensemble, Member};
pub use graph::Graph;
pub use layout::{grouping, party_name, Party, PartyLayout};

use std::collections::BTreeMap;

use crate::error::Result;

/// Merges parties of `layout` according to `grouping` (party -> super-party).
pub fn coarsen(layout: &PartyLayout, grouping: &BTreeMap<String, String>) -> Result<PartyLayout> {
    layout.coarsen(grouping)
}
