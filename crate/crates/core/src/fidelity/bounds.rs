use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{Ensemble, PartyLayout};
use crate::scalar::Real;
use crate::tensor::{entanglement_entropy, schmidt, Bipartition, StateVector};

/// Upper bound `d / k` on the LOCC fidelity of `k` equiprobable maximally
/// entangled states of `C^d (x) C^d`.
pub fn mes_bound<T: Real>(k: usize, d: usize) -> Result<T> {
    if k == 0 || d < 2 {
        return Err(Error::ParameterOutOfRange(format!("mes_bound(k={k}, d={d})")));
    }
    Ok(T::from_usize_lossy(d) / T::from_usize_lossy(k))
}

/// Separable-fidelity bound of `1/2` for a complete equiprobable orthonormal
/// basis whose members all have squared maximal Schmidt coefficient at most
/// `1/2` across `bp`.
pub fn schmidt_coeff_sep_bound<T: Real>(ens: &Ensemble<T>, bp: &Bipartition) -> Result<T> {
    if !ens.is_complete_basis() {
        return Err(Error::PremiseViolated("not a complete orthonormal basis".into()));
    }
    if !ens.is_equiprobable() {
        return Err(Error::PremiseViolated("priors are not uniform".into()));
    }
    let half = T::lit(0.5);
    for (i, s) in ens.states().enumerate() {
        let w = schmidt(s, bp)?.max_weight();
        if w > half + T::tolerance() {
            return Err(Error::PremiseViolated(format!(
                "member {i} has squared maximal Schmidt coefficient {w} > 1/2"
            )));
        }
    }
    Ok(half)
}

/// Minimum over per-bipartition bounds.
pub fn bipartition_min_bound<K, T: Real>(bounds: impl IntoIterator<Item = (K, T)>) -> Result<T> {
    bounds
        .into_iter()
        .map(|(_, v)| v)
        .fold(None, |acc: Option<T>, v| Some(acc.map_or(v, |a| a.min(v))))
        .ok_or_else(|| Error::Empty("no bipartition bounds".into()))
}

/// `p f_opt + (1 - p) f_fallback`.
pub fn mixed_strategy_fidelity<T: Real>(p: T, f_opt: T, f_local_fallback: T) -> Result<T> {
    let unit = |x: T| x >= T::zero() && x <= T::one();
    if !unit(p) || !unit(f_opt) || !unit(f_local_fallback) {
        return Err(Error::ParameterOutOfRange(format!(
            "mixed strategy with p={p}, f_opt={f_opt}, fallback={f_local_fallback}"
        )));
    }
    Ok(p * f_opt + (T::one() - p) * f_local_fallback)
}

/// Maximal LOCC probability of converting `psi` into a rank-`r` maximally
/// entangled state across `bp`:
/// `min_{1<=l<=r} r/(r-l+1) sum_{i>=l} lambda_i` over descending squared
/// Schmidt coefficients.
pub fn vidal_conversion_probability<T: Real>(psi: &StateVector<T>, bp: &Bipartition, r: usize) -> Result<T> {
    if r < 2 {
        return Err(Error::ParameterOutOfRange(format!("target rank {r} < 2")));
    }
    let sd = schmidt(psi, bp)?;
    if sd.rank < r {
        return Ok(T::zero());
    }
    let lambdas = sd.weights();
    let rr = T::from_usize_lossy(r);
    let mut best = T::infinity();
    for l in 1..=r {
        let tail: T = lambdas[l - 1..].iter().copied().sum();
        let v = rr / T::from_usize_lossy(r - l + 1) * tail;
        best = best.min(v);
    }
    Ok(best.max(T::zero()).min(T::one()))
}

/// Outcome of the entropy test on one party bipartition.
#[derive(Debug, Clone, Serialize)]
pub struct BipartitionEntropy<T: Real> {
    pub side_a: Vec<String>,
    pub side_b: Vec<String>,
    /// Prior-weighted mean entanglement entropy of the members.
    pub mean_member_entropy: T,
    /// Entanglement entropy of the resource (zero if one side lacks it).
    pub resource_entropy: T,
    pub satisfied: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EntropyReport<T: Real> {
    pub rows: Vec<BipartitionEntropy<T>>,
    /// The necessary condition only constrains complete equiprobable bases.
    pub premise_holds: bool,
    /// Pass iff the premise fails or every bipartition is satisfied.
    pub passes: bool,
    /// Every bipartition has positive mean member entropy.
    pub all_bipartitions_entangled: bool,
    /// Resource has positive entropy across every bipartition.
    pub resource_fully_shared: bool,
    /// If all bipartitions are entangled, the resource must be too.
    pub corollary_holds: bool,
}

/// Compares resource entanglement with mean member entanglement on every
/// party bipartition of the ensemble layout.
pub fn entropy_bound_check<T: Real>(
    resource: &StateVector<T>,
    resource_layout: &PartyLayout,
    ens: &Ensemble<T>,
) -> Result<EntropyReport<T>> {
    if resource_layout.num_subsystems() != resource.num_subsystems() {
        return Err(Error::InvalidLayout("resource layout does not match resource".into()));
    }
    for p in resource_layout.parties() {
        if ens.layout().position(&p.name).is_none() {
            return Err(Error::UnknownParty(p.name.clone()));
        }
    }
    let tol = T::tolerance();
    let mut rows = Vec::new();
    for (a, b) in ens.layout().party_bipartitions() {
        let mean = ens.mean_entropy(&a)?;
        let ra: Vec<usize> = resource_layout
            .parties()
            .iter()
            .filter(|p| a.contains(&p.name))
            .flat_map(|p| p.subsystems.iter().copied())
            .collect();
        let rb: Vec<usize> = resource_layout
            .parties()
            .iter()
            .filter(|p| b.contains(&p.name))
            .flat_map(|p| p.subsystems.iter().copied())
            .collect();
        let e = if ra.is_empty() || rb.is_empty() {
            T::zero()
        } else {
            entanglement_entropy(resource, &Bipartition::new(ra, rb))?
        };
        rows.push(BipartitionEntropy {
            side_a: a,
            side_b: b,
            mean_member_entropy: mean,
            resource_entropy: e,
            satisfied: e >= mean - tol,
        });
    }
    let premise_holds = ens.is_complete_basis() && ens.is_equiprobable();
    let all_ok = rows.iter().all(|r| r.satisfied);
    let all_bipartitions_entangled = rows.iter().all(|r| r.mean_member_entropy > tol);
    let resource_fully_shared = rows.iter().all(|r| r.resource_entropy > tol);
    Ok(EntropyReport {
        passes: !premise_holds || all_ok,
        premise_holds,
        corollary_holds: !premise_holds || !all_bipartitions_entangled || resource_fully_shared,
        all_bipartitions_entangled,
        resource_fully_shared,
        rows,
    })
}
