//! Finite imagination models: a tree of moments with a branching-time
//! order, per-moment agent choice partitions, neighborhood functions and
//! a valuation.
//!
//! Histories are the maximal chains of the order; evaluation points are
//! moment/history pairs. Models are desk-scale by design: at most 64
//! moments, histories and points, which lets propositions (sets of
//! points) live in single `u64` masks.

mod file;
mod generate;
mod validate;

pub use file::ModelFile;
pub use generate::{
    enumerate_models, random_model, EnumError, ModelBounds, ModelStream, PropPolicy, Scaffold,
};
pub use validate::{ValidationReport, Violation};

use crate::formula::{is_reserved_word, AgentId};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Name of a moment of the tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MomentId(pub String);

impl MomentId {
    pub fn new(name: impl Into<String>) -> Self {
        MomentId(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for MomentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<&str> for MomentId {
    fn from(s: &str) -> Self {
        MomentId(s.to_string())
    }
}

/// A tree order presented by its cover pairs; `≤` is the
/// reflexive-transitive closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeOrder {
    pub moments: Vec<MomentId>,
    pub covers: Vec<(MomentId, MomentId)>,
}

/// A maximal chain of moments, ascending in the order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct History {
    pub moments: Vec<MomentId>,
}

/// An evaluation point: a moment together with the index of a history
/// passing through it (indices refer to the canonical history table).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointRef {
    pub moment: MomentId,
    pub history: usize,
}

impl PointRef {
    pub fn new(moment: impl Into<MomentId>, history: usize) -> Self {
        PointRef {
            moment: moment.into(),
            history,
        }
    }
}

impl fmt::Display for PointRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/h{}", self.moment, self.history)
    }
}

/// A set of evaluation points of one model, stored as a bitmask over the
/// model's canonical point order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Proposition {
    pub(crate) mask: u64,
}

impl Proposition {
    pub fn empty() -> Self {
        Proposition { mask: 0 }
    }

    pub fn from_points(model: &ImaginationModel, points: &[PointRef]) -> Result<Self, ModelError> {
        let mut mask = 0u64;
        for p in points {
            mask |= 1 << model.point_index(p)?;
        }
        Ok(Proposition { mask })
    }

    pub fn contains(&self, model: &ImaginationModel, point: &PointRef) -> bool {
        model
            .point_index(point)
            .map(|i| self.mask >> i & 1 == 1)
            .unwrap_or(false)
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    /// True when the proposition holds at every point of the model.
    pub fn is_universal(&self, model: &ImaginationModel) -> bool {
        self.mask == model.frame.point_full
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn points(&self, model: &ImaginationModel) -> Vec<PointRef> {
        (0..model.frame.points.len())
            .filter(|i| self.mask >> i & 1 == 1)
            .map(|i| model.point_ref(i))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("the tree needs at least one moment")]
    EmptyTree,
    #[error("the agent set is empty")]
    AgentSetEmpty,
    #[error("duplicate moment `{0}`")]
    DuplicateMoment(String),
    #[error("duplicate agent `{0}`")]
    DuplicateAgent(String),
    #[error("unknown moment `{0}`")]
    UnknownMoment(String),
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("`{0}` is a reserved word and cannot name an agent or variable")]
    ReservedName(String),
    #[error("history index h{index} out of range: the model has {count} histories")]
    UnknownHistory { index: usize, count: usize },
    #[error("{moment}/h{history} is not a point: the history does not pass through the moment")]
    InvalidPoint { moment: String, history: usize },
    #[error("the covers contain a cycle; histories are undefined")]
    CyclicCovers,
    #[error("model too large: {0}")]
    TooLarge(String),
}

/// Derived frame structure shared by every model over the same order:
/// the closure of the covers, the canonical history table and the
/// canonical point table.
#[derive(Debug, Clone)]
pub(crate) struct Frame {
    pub(crate) moments: Vec<MomentId>,
    pub(crate) covers: Vec<(usize, usize)>,
    /// A pair of mutually reachable distinct moments (or a self-cover),
    /// when the covers are cyclic.
    pub(crate) cycle: Option<(usize, usize)>,
    /// `leq[i]` has bit `j` set iff `i ≤ j` in the closure.
    pub(crate) leq: Vec<u64>,
    /// Maximal chains as ascending moment-index sequences, sorted
    /// lexicographically by their moment-name sequences.
    pub(crate) histories: Vec<Vec<usize>>,
    /// Per moment: mask over history indices passing through it.
    pub(crate) hist_thru: Vec<u64>,
    /// Canonical point order: (moment index, history index), sorted.
    pub(crate) points: Vec<(usize, usize)>,
    /// `point_at[m][h]` is the point index of m/h, if m ∈ h.
    pub(crate) point_at: Vec<Vec<Option<u32>>>,
    /// Per moment: mask over point indices located at it.
    pub(crate) moment_points: Vec<u64>,
    pub(crate) point_full: u64,
}

impl Frame {
    pub(crate) fn new(moments: Vec<MomentId>, covers: Vec<(usize, usize)>) -> Result<Self, ModelError> {
        let n = moments.len();
        if n == 0 {
            return Err(ModelError::EmptyTree);
        }
        if n > 64 {
            return Err(ModelError::TooLarge(format!("{n} moments (limit 64)")));
        }
        {
            let mut seen = HashMap::new();
            for (i, m) in moments.iter().enumerate() {
                if seen.insert(m.as_str().to_string(), i).is_some() {
                    return Err(ModelError::DuplicateMoment(m.as_str().to_string()));
                }
            }
        }

        // Reflexive-transitive closure by Warshall over bitmask rows.
        let mut leq: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
        for &(a, b) in &covers {
            leq[a] |= 1 << b;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i] >> k & 1 == 1 {
                    leq[i] |= leq[k];
                }
            }
        }

        let mut cycle = covers.iter().find(|(a, b)| a == b).map(|&(a, b)| (a, b));
        if cycle.is_none() {
            'outer: for i in 0..n {
                for j in i + 1..n {
                    if leq[i] >> j & 1 == 1 && leq[j] >> i & 1 == 1 {
                        cycle = Some((i, j));
                        break 'outer;
                    }
                }
            }
        }

        let histories = if cycle.is_some() {
            Vec::new()
        } else {
            Self::maximal_chains(n, &leq, &moments)?
        };

        let mut hist_thru = vec![0u64; n];
        for (h, chain) in histories.iter().enumerate() {
            for &m in chain {
                hist_thru[m] |= 1 << h;
            }
        }

        let mut points = Vec::new();
        let mut point_at = vec![vec![None; histories.len()]; n];
        for m in 0..n {
            for h in 0..histories.len() {
                if hist_thru[m] >> h & 1 == 1 {
                    if points.len() >= 64 {
                        return Err(ModelError::TooLarge(format!(
                            "more than 64 moment/history pairs"
                        )));
                    }
                    point_at[m][h] = Some(points.len() as u32);
                    points.push((m, h));
                }
            }
        }
        let mut moment_points = vec![0u64; n];
        for (i, &(m, _)) in points.iter().enumerate() {
            moment_points[m] |= 1 << i;
        }
        let point_full = if points.is_empty() {
            0
        } else {
            u64::MAX >> (64 - points.len())
        };

        Ok(Frame {
            moments,
            covers,
            cycle,
            leq,
            histories,
            hist_thru,
            points,
            point_at,
            moment_points,
            point_full,
        })
    }

    /// Maximal chains of the closure, via maximal paths in the reduced
    /// (Hasse) cover relation.
    fn maximal_chains(
        n: usize,
        leq: &[u64],
        moments: &[MomentId],
    ) -> Result<Vec<Vec<usize>>, ModelError> {
        let strictly_below = |i: usize, j: usize| i != j && leq[i] >> j & 1 == 1;
        let mut hasse: Vec<Vec<usize>> = vec![Vec::new(); n];
        for i in 0..n {
            'next: for j in 0..n {
                if !strictly_below(i, j) {
                    continue;
                }
                for k in 0..n {
                    if k != i && k != j && strictly_below(i, k) && strictly_below(k, j) {
                        continue 'next;
                    }
                }
                hasse[i].push(j);
            }
        }
        let minimal: Vec<usize> =
            (0..n).filter(|&j| (0..n).all(|i| !strictly_below(i, j))).collect();

        let mut chains = Vec::new();
        let mut stack: Vec<Vec<usize>> = minimal.into_iter().map(|m| vec![m]).collect();
        while let Some(path) = stack.pop() {
            let last = *path.last().expect("paths are nonempty");
            if hasse[last].is_empty() {
                if chains.len() >= 64 {
                    return Err(ModelError::TooLarge("more than 64 histories".into()));
                }
                chains.push(path);
            } else {
                for &next in &hasse[last] {
                    let mut ext = path.clone();
                    ext.push(next);
                    stack.push(ext);
                }
            }
        }
        chains.sort_by(|a, b| {
            let names = |c: &[usize]| c.iter().map(|&m| moments[m].as_str()).collect::<Vec<_>>();
            names(a).cmp(&names(b))
        });
        Ok(chains)
    }
}

/// Per-agent, per-moment choice partitions, with the point-level views
/// the evaluator needs.
#[derive(Debug, Clone)]
pub(crate) struct ChoiceData {
    /// `cells[agent][moment]` is the partition of H_m as history masks.
    pub(crate) cells: Vec<Vec<Vec<u64>>>,
    /// `cell_points[agent][moment][cell]` is the mask of points at the
    /// moment whose history lies in the cell.
    pub(crate) cell_points: Vec<Vec<Vec<u64>>>,
    /// `point_cell[agent][point]` locates the point's history within the
    /// partition at the point's moment; `None` when the partition is
    /// malformed and misses the history.
    pub(crate) point_cell: Vec<Vec<Option<u32>>>,
}

impl ChoiceData {
    pub(crate) fn from_cells(frame: &Frame, cells: Vec<Vec<Vec<u64>>>) -> Self {
        let n_agents = cells.len();
        let mut cell_points = vec![Vec::new(); n_agents];
        let mut point_cell = vec![vec![None; frame.points.len()]; n_agents];
        for a in 0..n_agents {
            cell_points[a] = cells[a]
                .iter()
                .enumerate()
                .map(|(m, partition)| {
                    partition
                        .iter()
                        .map(|cell| {
                            let mut mask = 0u64;
                            for h in 0..frame.histories.len() {
                                if cell >> h & 1 == 1 {
                                    if let Some(p) = frame.point_at[m][h] {
                                        mask |= 1 << p;
                                    }
                                }
                            }
                            mask
                        })
                        .collect()
                })
                .collect();
            for (p, &(m, h)) in frame.points.iter().enumerate() {
                point_cell[a][p] = cells[a][m]
                    .iter()
                    .position(|cell| cell >> h & 1 == 1)
                    .map(|c| c as u32);
            }
        }
        ChoiceData {
            cells,
            cell_points,
            point_cell,
        }
    }

}

/// A finite imagination model.
#[derive(Debug, Clone)]
pub struct ImaginationModel {
    pub(crate) frame: Arc<Frame>,
    pub(crate) agents: Arc<Vec<AgentId>>,
    pub(crate) choice: Arc<ChoiceData>,
    /// `neighborhoods[agent][point]` is a sorted, deduplicated family of
    /// proposition masks.
    pub(crate) neighborhoods: Vec<Vec<Vec<u64>>>,
    /// Variable name → proposition mask; missing variables denote ∅.
    pub(crate) valuation: Arc<BTreeMap<String, u64>>,
}

impl ImaginationModel {
    pub(crate) fn from_parts(
        frame: Arc<Frame>,
        agents: Arc<Vec<AgentId>>,
        choice: Arc<ChoiceData>,
        neighborhoods: Vec<Vec<Vec<u64>>>,
        valuation: Arc<BTreeMap<String, u64>>,
    ) -> Self {
        ImaginationModel {
            frame,
            agents,
            choice,
            neighborhoods,
            valuation,
        }
    }

    pub fn agents(&self) -> &[AgentId] {
        &self.agents
    }

    pub fn moments(&self) -> &[MomentId] {
        &self.frame.moments
    }

    pub fn order(&self) -> TreeOrder {
        TreeOrder {
            moments: self.frame.moments.clone(),
            covers: self
                .frame
                .covers
                .iter()
                .map(|&(a, b)| (self.frame.moments[a].clone(), self.frame.moments[b].clone()))
                .collect(),
        }
    }

    /// The canonical history table: index i is history `hi`.
    pub fn histories(&self) -> Vec<History> {
        self.frame
            .histories
            .iter()
            .map(|chain| History {
                moments: chain.iter().map(|&m| self.frame.moments[m].clone()).collect(),
            })
            .collect()
    }

    pub fn history_count(&self) -> usize {
        self.frame.histories.len()
    }

    /// All moment/history pairs in canonical order.
    pub fn points(&self) -> Vec<PointRef> {
        (0..self.frame.points.len()).map(|i| self.point_ref(i)).collect()
    }

    pub fn point_count(&self) -> usize {
        self.frame.points.len()
    }

    pub(crate) fn point_ref(&self, index: usize) -> PointRef {
        let (m, h) = self.frame.points[index];
        PointRef {
            moment: self.frame.moments[m].clone(),
            history: h,
        }
    }

    pub(crate) fn point_index(&self, point: &PointRef) -> Result<usize, ModelError> {
        let m = self.moment_index(&point.moment)?;
        if point.history >= self.frame.histories.len() {
            return Err(ModelError::UnknownHistory {
                index: point.history,
                count: self.frame.histories.len(),
            });
        }
        self.frame.point_at[m][point.history]
            .map(|i| i as usize)
            .ok_or_else(|| ModelError::InvalidPoint {
                moment: point.moment.as_str().to_string(),
                history: point.history,
            })
    }

    pub(crate) fn moment_index(&self, moment: &MomentId) -> Result<usize, ModelError> {
        self.frame
            .moments
            .iter()
            .position(|m| m == moment)
            .ok_or_else(|| ModelError::UnknownMoment(moment.as_str().to_string()))
    }

    pub(crate) fn agent_index(&self, agent: &AgentId) -> Result<usize, ModelError> {
        self.agents
            .iter()
            .position(|a| a == agent)
            .ok_or_else(|| ModelError::UnknownAgent(agent.as_str().to_string()))
    }

    /// The partition of the histories through `moment` for `agent`, as
    /// cells of history indices.
    pub fn choice_cells(&self, moment: &MomentId, agent: &AgentId) -> Result<Vec<Vec<usize>>, ModelError> {
        let m = self.moment_index(moment)?;
        let a = self.agent_index(agent)?;
        Ok(self.choice.cells[a][m]
            .iter()
            .map(|&cell| (0..64).filter(|h| cell >> h & 1 == 1).collect())
            .collect())
    }

    /// The neighborhood family of `agent` at `point`.
    pub fn neighborhood(&self, agent: &AgentId, point: &PointRef) -> Result<Vec<Proposition>, ModelError> {
        let a = self.agent_index(agent)?;
        let p = self.point_index(point)?;
        Ok(self.neighborhoods[a][p]
            .iter()
            .map(|&mask| Proposition { mask })
            .collect())
    }

    /// The valuation of a variable (∅ for variables without an entry).
    pub fn valuation(&self, var: &str) -> Proposition {
        Proposition {
            mask: self.valuation.get(var).copied().unwrap_or(0),
        }
    }

    pub fn variables(&self) -> Vec<String> {
        self.valuation.keys().cloned().collect()
    }

    pub fn validate(&self) -> ValidationReport {
        validate::validate(self)
    }
}

/// Computes the canonical history table of an order: its maximal chains,
/// sorted lexicographically by moment-name sequence.
pub fn compute_histories(order: &TreeOrder) -> Result<Vec<History>, ModelError> {
    let (moments, covers) = resolve_order(order)?;
    let frame = Frame::new(moments, covers)?;
    if frame.cycle.is_some() {
        return Err(ModelError::CyclicCovers);
    }
    Ok(frame
        .histories
        .iter()
        .map(|chain| History {
            moments: chain.iter().map(|&m| frame.moments[m].clone()).collect(),
        })
        .collect())
}

fn resolve_order(order: &TreeOrder) -> Result<(Vec<MomentId>, Vec<(usize, usize)>), ModelError> {
    let index: HashMap<&str, usize> = order
        .moments
        .iter()
        .enumerate()
        .map(|(i, m)| (m.as_str(), i))
        .collect();
    let mut covers = Vec::new();
    for (a, b) in &order.covers {
        let ai = *index
            .get(a.as_str())
            .ok_or_else(|| ModelError::UnknownMoment(a.as_str().to_string()))?;
        let bi = *index
            .get(b.as_str())
            .ok_or_else(|| ModelError::UnknownMoment(b.as_str().to_string()))?;
        covers.push((ai, bi));
    }
    Ok((order.moments.clone(), covers))
}

/// Builds the single-moment model in which every agent's choice is
/// vacuous, every neighborhood family is empty and every variable's
/// valuation is empty.
pub fn build_sigma_model<V, A>(vars: V, agents: A) -> Result<ImaginationModel, ModelError>
where
    V: IntoIterator,
    V::Item: Into<String>,
    A: IntoIterator,
    A::Item: Into<AgentId>,
{
    let mut builder = ModelBuilder::new().moment("m0");
    for a in agents {
        builder = builder.agent(a.into().as_str());
    }
    for v in vars {
        builder = builder.valuate(&v.into(), vec![]);
    }
    builder.build()
}

/// Incremental constructor for models, name-based. Structural names are
/// resolved at `build`; frame-condition violations are left for
/// [`ImaginationModel::validate`] to report.
#[derive(Debug, Clone, Default)]
pub struct ModelBuilder {
    moments: Vec<String>,
    covers: Vec<(String, String)>,
    agents: Vec<String>,
    choice: Vec<(String, String, Vec<Vec<usize>>)>,
    neighborhoods: Vec<(String, (String, usize), Vec<Vec<(String, usize)>>)>,
    valuation: Vec<(String, Vec<(String, usize)>)>,
}

impl ModelBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn moment(mut self, name: &str) -> Self {
        self.moments.push(name.to_string());
        self
    }

    pub fn cover(mut self, parent: &str, child: &str) -> Self {
        self.covers.push((parent.to_string(), child.to_string()));
        self
    }

    pub fn agent(mut self, name: &str) -> Self {
        self.agents.push(name.to_string());
        self
    }

    /// Sets the partition of the histories through `moment` for `agent`,
    /// as cells of history indices. Unset pairs default to the vacuous
    /// choice.
    pub fn choice(mut self, moment: &str, agent: &str, cells: Vec<Vec<usize>>) -> Self {
        self.choice.push((moment.to_string(), agent.to_string(), cells));
        self
    }

    /// Adds the family of propositions (each a set of points) imagined
    /// by `agent` at the point `at`. Unset points carry ∅.
    pub fn neighborhood(
        mut self,
        agent: &str,
        at: (&str, usize),
        props: Vec<Vec<(&str, usize)>>,
    ) -> Self {
        self.neighborhoods.push((
            agent.to_string(),
            (at.0.to_string(), at.1),
            props
                .into_iter()
                .map(|prop| prop.into_iter().map(|(m, h)| (m.to_string(), h)).collect())
                .collect(),
        ));
        self
    }

    pub fn valuate(mut self, var: &str, points: Vec<(&str, usize)>) -> Self {
        self.valuation.push((
            var.to_string(),
            points.into_iter().map(|(m, h)| (m.to_string(), h)).collect(),
        ));
        self
    }

    pub fn build(self) -> Result<ImaginationModel, ModelError> {
        if self.agents.is_empty() {
            return Err(ModelError::AgentSetEmpty);
        }
        let mut agents = Vec::new();
        for a in &self.agents {
            if is_reserved_word(a) {
                return Err(ModelError::ReservedName(a.clone()));
            }
            if agents.iter().any(|x: &AgentId| x.as_str() == a) {
                return Err(ModelError::DuplicateAgent(a.clone()));
            }
            agents.push(AgentId::new(a.clone()));
        }

        let order = TreeOrder {
            moments: self.moments.iter().map(|m| MomentId::new(m.clone())).collect(),
            covers: self
                .covers
                .iter()
                .map(|(a, b)| (MomentId::new(a.clone()), MomentId::new(b.clone())))
                .collect(),
        };
        let (moments, covers) = resolve_order(&order)?;
        let frame = Arc::new(Frame::new(moments, covers)?);
        let n_hist = frame.histories.len();

        let moment_idx = |name: &str| -> Result<usize, ModelError> {
            frame
                .moments
                .iter()
                .position(|m| m.as_str() == name)
                .ok_or_else(|| ModelError::UnknownMoment(name.to_string()))
        };
        let agent_idx = |name: &str| -> Result<usize, ModelError> {
            agents
                .iter()
                .position(|a| a.as_str() == name)
                .ok_or_else(|| ModelError::UnknownAgent(name.to_string()))
        };
        let point_idx = |m_name: &str, h: usize| -> Result<usize, ModelError> {
            let m = moment_idx(m_name)?;
            if h >= n_hist {
                return Err(ModelError::UnknownHistory {
                    index: h,
                    count: n_hist,
                });
            }
            frame.point_at[m][h]
                .map(|i| i as usize)
                .ok_or_else(|| ModelError::InvalidPoint {
                    moment: m_name.to_string(),
                    history: h,
                })
        };

        // Start from the vacuous choice everywhere, then overlay the
        // explicitly given partitions.
        let vacuous_row: Vec<Vec<u64>> = frame
            .hist_thru
            .iter()
            .map(|&mask| if mask == 0 { Vec::new() } else { vec![mask] })
            .collect();
        let mut cells = vec![vacuous_row; agents.len()];
        for (m_name, a_name, partition) in &self.choice {
            let m = moment_idx(m_name)?;
            let a = agent_idx(a_name)?;
            let mut masks = Vec::new();
            for cell in partition {
                let mut mask = 0u64;
                for &h in cell {
                    if h >= n_hist {
                        return Err(ModelError::UnknownHistory {
                            index: h,
                            count: n_hist,
                        });
                    }
                    mask |= 1 << h;
                }
                masks.push(mask);
            }
            masks.sort_unstable();
            cells[a][m] = masks;
        }
        let choice = Arc::new(ChoiceData::from_cells(&frame, cells));

        let mut neighborhoods = vec![vec![Vec::new(); frame.points.len()]; agents.len()];
        for (a_name, (m_name, h), props) in &self.neighborhoods {
            let a = agent_idx(a_name)?;
            let p = point_idx(m_name, *h)?;
            let family: &mut Vec<u64> = &mut neighborhoods[a][p];
            for prop in props {
                let mut mask = 0u64;
                for (pm, ph) in prop {
                    mask |= 1 << point_idx(pm, *ph)?;
                }
                family.push(mask);
            }
            family.sort_unstable();
            family.dedup();
        }

        let mut valuation = BTreeMap::new();
        for (var, points) in &self.valuation {
            if is_reserved_word(var) {
                return Err(ModelError::ReservedName(var.clone()));
            }
            let mut mask = 0u64;
            for (m_name, h) in points {
                mask |= 1 << point_idx(m_name, *h)?;
            }
            valuation.insert(var.clone(), mask);
        }

        Ok(ImaginationModel::from_parts(
            frame,
            Arc::new(agents),
            choice,
            neighborhoods,
            Arc::new(valuation),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(moments: &[&str], covers: &[(&str, &str)]) -> TreeOrder {
        TreeOrder {
            moments: moments.iter().map(|m| MomentId::from(*m)).collect(),
            covers: covers
                .iter()
                .map(|(a, b)| (MomentId::from(*a), MomentId::from(*b)))
                .collect(),
        }
    }

    #[test]
    fn histories_single_moment() {
        let hs = compute_histories(&order(&["m0"], &[])).unwrap();
        assert_eq!(hs.len(), 1);
        assert_eq!(hs[0].moments, vec![MomentId::from("m0")]);
    }

    #[test]
    fn histories_chain() {
        let hs = compute_histories(&order(&["m0", "m1"], &[("m0", "m1")])).unwrap();
        assert_eq!(hs.len(), 1);
        assert_eq!(
            hs[0].moments,
            vec![MomentId::from("m0"), MomentId::from("m1")]
        );
    }

    #[test]
    fn histories_fork() {
        let hs = compute_histories(&order(
            &["m0", "m1", "m2"],
            &[("m0", "m1"), ("m0", "m2")],
        ))
        .unwrap();
        assert_eq!(hs.len(), 2);
        assert_eq!(
            hs[0].moments,
            vec![MomentId::from("m0"), MomentId::from("m1")]
        );
        assert_eq!(
            hs[1].moments,
            vec![MomentId::from("m0"), MomentId::from("m2")]
        );
    }

    #[test]
    fn histories_ignore_redundant_cover() {
        // The direct m0→m2 edge is implied; the only maximal chain is the
        // full one.
        let hs = compute_histories(&order(
            &["m0", "m1", "m2"],
            &[("m0", "m1"), ("m1", "m2"), ("m0", "m2")],
        ))
        .unwrap();
        assert_eq!(hs.len(), 1);
        assert_eq!(hs[0].moments.len(), 3);
    }

    #[test]
    fn histories_cyclic_is_error() {
        let err = compute_histories(&order(&["m0", "m1"], &[("m0", "m1"), ("m1", "m0")]))
            .unwrap_err();
        assert_eq!(err, ModelError::CyclicCovers);
    }

    #[test]
    fn sigma_model_shape() {
        let m = build_sigma_model(["p"], ["a"]).unwrap();
        assert_eq!(m.point_count(), 1);
        assert_eq!(m.points(), vec![PointRef::new("m0", 0)]);
        let point = PointRef::new("m0", 0);
        assert!(m.neighborhood(&AgentId::from("a"), &point).unwrap().is_empty());
        assert!(m.valuation("p").is_empty());
        assert_eq!(
            m.choice_cells(&MomentId::from("m0"), &AgentId::from("a")).unwrap(),
            vec![vec![0]]
        );
    }

    #[test]
    fn sigma_model_two_agents_no_vars() {
        let m = build_sigma_model(Vec::<String>::new(), ["a", "b"]).unwrap();
        assert_eq!(m.agents().len(), 2);
        assert_eq!(m.point_count(), 1);
    }

    #[test]
    fn sigma_model_empty_agents_rejected() {
        let err = build_sigma_model(["p"], Vec::<AgentId>::new()).unwrap_err();
        assert_eq!(err, ModelError::AgentSetEmpty);
    }

    #[test]
    fn builder_rejects_bad_history_index() {
        let err = ModelBuilder::new()
            .moment("m0")
            .agent("a")
            .valuate("p", vec![("m0", 3)])
            .build()
            .unwrap_err();
        assert_eq!(err, ModelError::UnknownHistory { index: 3, count: 1 });
    }

    #[test]
    fn builder_rejects_point_off_history() {
        // h0 = [m0, m1] and h1 = [m0, m2]; m1/h1 is not a point.
        let err = ModelBuilder::new()
            .moment("m0")
            .moment("m1")
            .moment("m2")
            .cover("m0", "m1")
            .cover("m0", "m2")
            .agent("a")
            .valuate("p", vec![("m1", 1)])
            .build()
            .unwrap_err();
        assert!(matches!(err, ModelError::InvalidPoint { .. }));
    }

    #[test]
    fn proposition_round_trip() {
        let m = ModelBuilder::new()
            .moment("m0")
            .moment("m1")
            .cover("m0", "m1")
            .agent("a")
            .build()
            .unwrap();
        let pts = vec![PointRef::new("m1", 0)];
        let prop = Proposition::from_points(&m, &pts).unwrap();
        assert_eq!(prop.points(&m), pts);
        assert!(prop.contains(&m, &PointRef::new("m1", 0)));
        assert!(!prop.contains(&m, &PointRef::new("m0", 0)));
    }
}
