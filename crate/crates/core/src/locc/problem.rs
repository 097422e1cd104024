use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::families::{Ensemble, Member, Party, PartyLayout};
use crate::scalar::Real;
use crate::tensor::StateVector;

/// Pre-shared resource state with its own party layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Resource<T: Real> {
    pub state: StateVector<T>,
    pub layout: PartyLayout,
}

/// Discrimination task: an ensemble, optionally assisted by a resource.
/// `joint()` is the ensemble the parties actually face.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct JointProblem<T: Real> {
    ensemble: Ensemble<T>,
    resource: Option<Resource<T>>,
    joint: Ensemble<T>,
}

/// Members become `|Psi> (x) |psi_i>`. Resource subsystems come first
/// globally; each party holds its resource subsystems followed by its
/// unknown-state subsystems.
pub fn attach_resource<T: Real>(
    ens: &Ensemble<T>,
    resource: &StateVector<T>,
    resource_layout: &PartyLayout,
) -> Result<Ensemble<T>> {
    if resource_layout.num_subsystems() != resource.num_subsystems() {
        return Err(Error::InvalidLayout("resource layout does not match resource".into()));
    }
    for p in resource_layout.parties() {
        ens.layout().party(&p.name)?;
    }
    let r = resource.num_subsystems();
    let parties = ens
        .layout()
        .parties()
        .iter()
        .map(|p| {
            let mut subsystems = resource_layout
                .party(&p.name)
                .map(|q| q.subsystems.clone())
                .unwrap_or_default();
            subsystems.extend(p.subsystems.iter().map(|s| s + r));
            Party {
                name: p.name.clone(),
                subsystems,
            }
        })
        .collect();
    let layout = PartyLayout::new(parties)?;
    let members = ens
        .members()
        .iter()
        .map(|m| Member {
            prior: m.prior,
            state: resource.kron(&m.state),
        })
        .collect();
    Ensemble::new(layout, members)
}

impl<T: Real> JointProblem<T> {
    pub fn new(ensemble: Ensemble<T>) -> Self {
        Self {
            joint: ensemble.clone(),
            ensemble,
            resource: None,
        }
    }

    pub fn with_resource(ensemble: Ensemble<T>, state: StateVector<T>, layout: PartyLayout) -> Result<Self> {
        let joint = attach_resource(&ensemble, &state, &layout)?;
        Ok(Self {
            ensemble,
            resource: Some(Resource { state, layout }),
            joint,
        })
    }

    pub fn ensemble(&self) -> &Ensemble<T> {
        &self.ensemble
    }

    pub fn resource(&self) -> Option<&Resource<T>> {
        self.resource.as_ref()
    }

    pub fn joint(&self) -> &Ensemble<T> {
        &self.joint
    }

    pub fn layout(&self) -> &PartyLayout {
        self.joint.layout()
    }

    pub fn dims(&self) -> &[usize] {
        self.joint.dims()
    }

    /// Same problem with parties merged according to `grouping`.
    pub fn coarsen(&self, grouping: &BTreeMap<String, String>) -> Result<Self> {
        let ensemble = self.ensemble.with_layout(self.ensemble.layout().coarsen(grouping)?)?;
        let resource = match &self.resource {
            None => None,
            Some(res) => {
                let sub: BTreeMap<String, String> = grouping
                    .iter()
                    .filter(|(k, _)| res.layout.position(k).is_some())
                    .map(|(k, v)| (k.clone(), v.clone()))
                    .collect();
                Some(Resource {
                    state: res.state.clone(),
                    layout: res.layout.coarsen(&sub)?,
                })
            }
        };
        let joint = self.joint.with_layout(self.joint.layout().coarsen(grouping)?)?;
        Ok(Self {
            ensemble,
            resource,
            joint,
        })
    }
}
