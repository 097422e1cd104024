use serde::{Deserialize, Serialize};

use super::problem::JointProblem;
use super::tree::{Guess, ProtocolTree};
use crate::error::{Error, Result};
use crate::fidelity::{GuessStrategy, Povm};
use crate::scalar::{cr, czero, Real, C};
use crate::tensor::index::apply_local;
use crate::tensor::{linalg, Operator, StateVector};

/// State of the walk at one node of the tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct BranchRecord<T: Real> {
    /// Outcomes leading to this node.
    pub path: Vec<usize>,
    /// Acting parties of the ancestor rounds, root first.
    pub parties: Vec<String>,
    /// Number of ancestor rounds with more than one outcome.
    pub measurements: usize,
    /// Whether the round just above this node had more than one outcome.
    pub after_measurement: bool,
    /// Members with nonnegligible weight at this node.
    pub survivors: Vec<usize>,
    /// `p_i * ||K_b psi_i||^2` for every survivor.
    pub weights: Vec<T>,
    pub is_leaf: bool,
}

impl<T: Real> BranchRecord<T> {
    pub fn probability(&self) -> T {
        self.weights.iter().copied().sum()
    }

    /// Acting party of the round just above this node.
    pub fn last_party(&self) -> Option<&str> {
        self.parties.last().map(String::as_str)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct BranchReport<T: Real> {
    /// Every reachable node, depth-first in outcome order.
    pub records: Vec<BranchRecord<T>>,
}

impl<T: Real> BranchReport<T> {
    pub fn leaves(&self) -> impl Iterator<Item = &BranchRecord<T>> {
        self.records.iter().filter(|r| r.is_leaf)
    }

    /// Nodes reached directly after a measurement by `party`.
    pub fn after_measurement_by<'a>(&'a self, party: &'a str) -> impl Iterator<Item = &'a BranchRecord<T>> {
        self.records
            .iter()
            .filter(move |r| r.after_measurement && r.last_party() == Some(party))
    }

    /// Per member, the total weight over all leaves (equals its prior for a
    /// complete protocol).
    pub fn member_totals(&self, members: usize) -> Vec<T> {
        let mut out = vec![T::zero(); members];
        for r in self.leaves() {
            for (&i, &w) in r.survivors.iter().zip(&r.weights) {
                out[i] += w;
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct ProtocolRun<T: Real> {
    pub fidelity: T,
    pub report: BranchReport<T>,
}

struct Frame<T: Real> {
    member: usize,
    amps: Vec<C<T>>,
    weight: T,
}

struct Ctx<'a, T: Real> {
    problem: &'a JointProblem<T>,
    path: Vec<usize>,
    parties: Vec<String>,
    measurements: usize,
    after_measurement: bool,
}

type Visitor<'v, T> = dyn FnMut(&Ctx<'_, T>, &ProtocolTree<T>, &[Frame<T>]) -> Result<()> + 'v;

fn walk<T: Real>(ctx: &mut Ctx<'_, T>, node: &ProtocolTree<T>, frames: &[Frame<T>], visit: &mut Visitor<'_, T>) -> Result<()> {
    visit(ctx, node, frames)?;
    let ProtocolTree::Round { instrument, children } = node else {
        return Ok(());
    };
    let dims = ctx.problem.dims().to_vec();
    let targets = instrument.targets(ctx.problem.layout())?;
    let measuring = instrument.is_measurement();
    for (k, (op, child)) in instrument.kraus.iter().zip(children).enumerate() {
        let next: Vec<Frame<T>> = frames
            .iter()
            .filter_map(|f| {
                let amps = apply_local(op.data(), &dims, &targets, &f.amps);
                let norm: T = amps.iter().map(|a| a.norm_sqr()).sum();
                let weight = ctx.problem.joint().prior(f.member) * norm;
                (weight >= T::prune_threshold()).then_some(Frame {
                    member: f.member,
                    amps,
                    weight,
                })
            })
            .collect();
        if next.is_empty() {
            continue;
        }
        ctx.path.push(k);
        ctx.parties.push(instrument.party.clone());
        let saved = (ctx.measurements, ctx.after_measurement);
        ctx.measurements += measuring as usize;
        ctx.after_measurement = measuring;
        walk(ctx, child, &next, visit)?;
        (ctx.measurements, ctx.after_measurement) = saved;
        ctx.path.pop();
        ctx.parties.pop();
    }
    Ok(())
}

fn start<T: Real>(problem: &JointProblem<T>, tree: &ProtocolTree<T>, visit: &mut Visitor<'_, T>) -> Result<()> {
    tree.validate(problem.layout(), problem.dims())?;
    let joint = problem.joint();
    let frames: Vec<Frame<T>> = (0..joint.len())
        .filter(|&i| joint.prior(i) >= T::prune_threshold())
        .map(|i| Frame {
            member: i,
            amps: joint.state(i).amps().to_vec(),
            weight: joint.prior(i),
        })
        .collect();
    let mut ctx = Ctx {
        problem,
        path: Vec::new(),
        parties: Vec::new(),
        measurements: 0,
        after_measurement: false,
    };
    walk(&mut ctx, tree, &frames, visit)
}

fn guess_state<'a, T: Real>(problem: &'a JointProblem<T>, g: &'a Guess<T>) -> Result<&'a StateVector<T>> {
    match g {
        Guess::Member(j) => {
            let n = problem.joint().len();
            if *j >= n {
                return Err(Error::IndexOutOfRange { index: *j, count: n });
            }
            Ok(problem.joint().state(*j))
        }
        Guess::State(s) => Ok(s),
    }
}

/// Exact fidelity of a fixed protocol by enumerating every branch. A
/// surviving member contributes `p_i ||K_b psi_i||^2 |<psi_i|phi_b>|^2`,
/// scored against the member as prepared, i.e. the average fidelity of the
/// flattened measurement `{K_b^dagger K_b}` with the leaf guesses.
pub fn run_protocol<T: Real>(problem: &JointProblem<T>, tree: &ProtocolTree<T>) -> Result<ProtocolRun<T>> {
    let mut fidelity = T::zero();
    let mut records = Vec::new();
    start(problem, tree, &mut |ctx, node, frames| {
        let is_leaf = matches!(node, ProtocolTree::Leaf { .. });
        if let ProtocolTree::Leaf { guess } = node {
            let phi = guess_state(problem, guess)?;
            for f in frames {
                fidelity += f.weight * problem.joint().state(f.member).overlap_sqr(phi);
            }
        }
        records.push(BranchRecord {
            path: ctx.path.clone(),
            parties: ctx.parties.clone(),
            measurements: ctx.measurements,
            after_measurement: ctx.after_measurement,
            survivors: frames.iter().map(|f| f.member).collect(),
            weights: frames.iter().map(|f| f.weight).collect(),
            is_leaf,
        });
        Ok(())
    })?;
    Ok(ProtocolRun {
        fidelity,
        report: BranchReport { records },
    })
}

/// Replaces every leaf guess by the best guess for the members reaching it:
/// the heaviest member for orthonormal ensembles, otherwise the principal
/// eigenvector of `sum_i p_i ||K_b psi_i||^2 |psi_i><psi_i|`.
pub fn assign_optimal_guesses<T: Real>(problem: &JointProblem<T>, tree: &ProtocolTree<T>) -> Result<ProtocolTree<T>> {
    let orthonormal = problem.joint().is_orthonormal();
    let mut reached: Vec<(Vec<usize>, Vec<(usize, T)>)> = Vec::new();
    start(problem, tree, &mut |ctx, node, frames| {
        if matches!(node, ProtocolTree::Leaf { .. }) {
            reached.push((ctx.path.clone(), frames.iter().map(|f| (f.member, f.weight)).collect()));
        }
        Ok(())
    })?;
    // Reachable leaves come in the same depth-first order as `graft` visits.
    let mut reached = reached.into_iter().peekable();
    let mut err = None;
    let out = tree.graft(&mut |path| {
        let weights = match reached.peek() {
            Some((p, _)) if p.as_slice() == path => reached.next().map(|(_, w)| w),
            _ => None,
        };
        let guess = match weights {
            None => Guess::Member(0),
            Some(w) if orthonormal => Guess::Member(argmax_weight(&w)),
            Some(w) => principal_guess(problem, &w).unwrap_or_else(|e| {
                err.get_or_insert(e);
                Guess::Member(0)
            }),
        };
        ProtocolTree::Leaf { guess }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Heaviest member; near-ties go to the lowest index.
fn argmax_weight<T: Real>(w: &[(usize, T)]) -> usize {
    let mut best: Option<(usize, T)> = None;
    for &(i, x) in w {
        match best {
            Some((_, b)) if x <= b + T::prune_threshold() => {}
            _ => best = Some((i, x)),
        }
    }
    best.map_or(0, |b| b.0)
}

/// Principal eigenvector of `Psi C Psi^dagger` through the k x k matrix
/// `C^(1/2) G C^(1/2)`, `G` the Gram matrix of the reaching members.
fn principal_guess<T: Real>(problem: &JointProblem<T>, w: &[(usize, T)]) -> Result<Guess<T>> {
    let joint = problem.joint();
    let k = w.len();
    if k == 0 {
        return Ok(Guess::Member(0));
    }
    let sq: Vec<T> = w.iter().map(|&(_, x)| x.sqrt()).collect();
    let mut m = vec![czero(); k * k];
    for a in 0..k {
        for b in 0..k {
            let g = joint.state(w[a].0).inner(joint.state(w[b].0));
            m[a * k + b] = g * cr(sq[a] * sq[b]);
        }
    }
    let (_, u) = linalg::principal_eigenvector(k, &m);
    let mut amps = vec![czero(); joint.dim()];
    for (a, &(i, _)) in w.iter().enumerate() {
        let coef = u[a] * cr(sq[a]);
        for (o, x) in amps.iter_mut().zip(joint.state(i).amps()) {
            *o += coef * *x;
        }
    }
    Ok(Guess::State(StateVector::from_unnormalized(joint.dims().to_vec(), amps)?))
}

/// Flattens a tree into one POVM element `K_b^dagger K_b` per leaf (no
/// pruning) with the leaf guesses, in depth-first leaf order. Works with
/// dense operators on the joint space, so it is meant for small problems.
pub fn flatten_to_povm<T: Real>(problem: &JointProblem<T>, tree: &ProtocolTree<T>) -> Result<(Povm<T>, GuessStrategy<T>)> {
    fn go<T: Real>(
        problem: &JointProblem<T>,
        node: &ProtocolTree<T>,
        k: &Operator<T>,
        elements: &mut Vec<Operator<T>>,
        guesses: &mut Vec<StateVector<T>>,
    ) -> Result<()> {
        match node {
            ProtocolTree::Leaf { guess } => {
                elements.push(k.adjoint().matmul(k)?);
                guesses.push(guess_state(problem, guess)?.clone());
            }
            ProtocolTree::Round { instrument, children } => {
                let targets = instrument.targets(problem.layout())?;
                for (op, child) in instrument.kraus.iter().zip(children) {
                    go(problem, child, &k.left_mul_local(op, &targets)?, elements, guesses)?;
                }
            }
        }
        Ok(())
    }
    tree.validate(problem.layout(), problem.dims())?;
    let mut elements = Vec::new();
    let mut guesses = Vec::new();
    let id = Operator::identity(problem.dims().to_vec());
    go(problem, tree, &id, &mut elements, &mut guesses)?;
    Ok((Povm::from_elements_unchecked(elements)?, GuessStrategy::new(guesses)))
}
