//! Frame-condition validation. Violations are data with concrete
//! witnesses, not errors: an invalid model is still a value that can be
//! inspected (and, under `--force`, evaluated).

use super::{ImaginationModel, MomentId};
use crate::formula::AgentId;
use std::fmt;

/// A violated frame condition together with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Two moments reachable from each other (a cover cycle).
    NotAntisymmetric { pair: (MomentId, MomentId) },
    /// A pair of moments with no common lower bound.
    NotDownwardDirected { pair: (MomentId, MomentId) },
    /// Two incomparable moments both below a third.
    NotBackwardLinear {
        first: MomentId,
        second: MomentId,
        above: MomentId,
    },
    /// choice(moment, agent) is not a partition of the histories through
    /// the moment.
    ChoiceNotPartition {
        moment: MomentId,
        agent: AgentId,
        defect: PartitionDefect,
    },
    /// Histories sharing a later moment separated by a choice.
    ChoiceSplitsUndivided {
        moment: MomentId,
        agent: AgentId,
        histories: (usize, usize),
        shared: MomentId,
    },
    /// A selection of one cell per agent with empty intersection.
    AgentsNotIndependent {
        moment: MomentId,
        /// Chosen cell index per agent, in agent order.
        selector: Vec<(AgentId, usize)>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionDefect {
    EmptyCell { cell: usize },
    Overlap { history: usize },
    MissingHistory { history: usize },
    /// A cell lists a history that does not pass through the moment.
    ForeignHistory { history: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotAntisymmetric { pair: (a, b) } => {
                write!(f, "not a partial order: {a} and {b} lie on a cover cycle")
            }
            Violation::NotDownwardDirected { pair: (a, b) } => write!(
                f,
                "downward directedness fails: {a} and {b} have no common lower bound"
            ),
            Violation::NotBackwardLinear {
                first,
                second,
                above,
            } => write!(
                f,
                "backward linearity fails: {first} and {second} are incomparable but both below {above}"
            ),
            Violation::ChoiceNotPartition {
                moment,
                agent,
                defect,
            } => {
                write!(f, "choice({moment}, {agent}) is not a partition: ")?;
                match defect {
                    PartitionDefect::EmptyCell { cell } => write!(f, "cell {cell} is empty"),
                    PartitionDefect::Overlap { history } => {
                        write!(f, "history h{history} occurs in two cells")
                    }
                    PartitionDefect::MissingHistory { history } => {
                        write!(f, "history h{history} is in no cell")
                    }
                    PartitionDefect::ForeignHistory { history } => {
                        write!(f, "history h{history} does not pass through {moment}")
                    }
                }
            }
            Violation::ChoiceSplitsUndivided {
                moment,
                agent,
                histories: (h1, h2),
                shared,
            } => write!(
                f,
                "choice between undivided histories: choice({moment}, {agent}) separates h{h1} and h{h2}, which share the later moment {shared}"
            ),
            Violation::AgentsNotIndependent { moment, selector } => {
                let sel = selector
                    .iter()
                    .map(|(a, c)| format!("{a} -> cell {c}"))
                    .collect::<Vec<_>>()
                    .join(", ");
                write!(
                    f,
                    "independence of agents fails at {moment}: selector {{{sel}}} has empty intersection"
                )
            }
        }
    }
}

/// Result of validating a model: empty iff every frame condition holds.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_clean() {
            return write!(f, "OK");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

pub(super) fn validate(model: &ImaginationModel) -> ValidationReport {
    let frame = &model.frame;
    let mut violations = Vec::new();

    // A cover cycle makes ≤, and with it the history table, meaningless;
    // report it alone.
    if let Some((a, b)) = frame.cycle {
        violations.push(Violation::NotAntisymmetric {
            pair: (frame.moments[a].clone(), frame.moments[b].clone()),
        });
        return ValidationReport { violations };
    }

    let n = frame.moments.len();
    let leq = |i: usize, j: usize| frame.leq[i] >> j & 1 == 1;

    // below[j] = mask of moments ≤ j.
    let mut below = vec![0u64; n];
    for i in 0..n {
        for j in 0..n {
            if leq(i, j) {
                below[j] |= 1 << i;
            }
        }
    }

    'pairs: for i in 0..n {
        for j in i + 1..n {
            if below[i] & below[j] == 0 {
                violations.push(Violation::NotDownwardDirected {
                    pair: (frame.moments[i].clone(), frame.moments[j].clone()),
                });
                break 'pairs;
            }
        }
    }

    'linear: for m in 0..n {
        for i in 0..n {
            for j in i + 1..n {
                if leq(i, m) && leq(j, m) && !leq(i, j) && !leq(j, i) {
                    violations.push(Violation::NotBackwardLinear {
                        first: frame.moments[i].clone(),
                        second: frame.moments[j].clone(),
                        above: frame.moments[m].clone(),
                    });
                    break 'linear;
                }
            }
        }
    }

    let n_hist = frame.histories.len();
    for a in 0..model.agents.len() {
        for m in 0..n {
            let cells = &model.choice.cells[a][m];
            let h_m = frame.hist_thru[m];
            if let Some(defect) = partition_defect(cells, h_m, n_hist) {
                violations.push(Violation::ChoiceNotPartition {
                    moment: frame.moments[m].clone(),
                    agent: model.agents[a].clone(),
                    defect,
                });
            }
        }
    }

    // No choice between undivided histories: h, h' ∈ H_m sharing some
    // m' > m must share every agent's cell at m.
    for m in 0..n {
        let h_m = frame.hist_thru[m];
        for h1 in 0..n_hist {
            if h_m >> h1 & 1 == 0 {
                continue;
            }
            for h2 in h1 + 1..n_hist {
                if h_m >> h2 & 1 == 0 {
                    continue;
                }
                let shared = (0..n).find(|&m2| {
                    m2 != m
                        && leq(m, m2)
                        && frame.hist_thru[m2] >> h1 & 1 == 1
                        && frame.hist_thru[m2] >> h2 & 1 == 1
                });
                let Some(shared) = shared else { continue };
                for a in 0..model.agents.len() {
                    let cells = &model.choice.cells[a][m];
                    let c1 = cells.iter().position(|c| c >> h1 & 1 == 1);
                    let c2 = cells.iter().position(|c| c >> h2 & 1 == 1);
                    if let (Some(c1), Some(c2)) = (c1, c2) {
                        if c1 != c2 {
                            violations.push(Violation::ChoiceSplitsUndivided {
                                moment: frame.moments[m].clone(),
                                agent: model.agents[a].clone(),
                                histories: (h1, h2),
                                shared: frame.moments[shared].clone(),
                            });
                        }
                    }
                }
            }
        }
    }

    // Independence of agents: every selector of one cell per agent has a
    // common history. Checked by brute force over all selectors.
    for m in 0..n {
        if frame.hist_thru[m] == 0 {
            continue;
        }
        let per_agent: Vec<&Vec<u64>> = (0..model.agents.len())
            .map(|a| &model.choice.cells[a][m])
            .collect();
        if per_agent.iter().any(|cells| cells.is_empty()) {
            continue; // already reported as a partition defect
        }
        let mut selector = vec![0usize; per_agent.len()];
        'selectors: loop {
            let mut meet = u64::MAX;
            for (a, &cells) in per_agent.iter().enumerate() {
                meet &= cells[selector[a]];
            }
            if meet == 0 {
                violations.push(Violation::AgentsNotIndependent {
                    moment: frame.moments[m].clone(),
                    selector: selector
                        .iter()
                        .enumerate()
                        .map(|(a, &c)| (model.agents[a].clone(), c))
                        .collect(),
                });
                break 'selectors;
            }
            // odometer over cell indices
            let mut pos = 0;
            loop {
                if pos == selector.len() {
                    break 'selectors;
                }
                selector[pos] += 1;
                if selector[pos] < per_agent[pos].len() {
                    break;
                }
                selector[pos] = 0;
                pos += 1;
            }
        }
    }

    ValidationReport { violations }
}

fn partition_defect(cells: &[u64], h_m: u64, n_hist: usize) -> Option<PartitionDefect> {
    let mut seen = 0u64;
    for (i, &cell) in cells.iter().enumerate() {
        if cell == 0 {
            return Some(PartitionDefect::EmptyCell { cell: i });
        }
        if cell & !h_m != 0 {
            let h = (cell & !h_m).trailing_zeros() as usize;
            return Some(PartitionDefect::ForeignHistory { history: h });
        }
        if seen & cell != 0 {
            let h = (seen & cell).trailing_zeros() as usize;
            return Some(PartitionDefect::Overlap { history: h });
        }
        seen |= cell;
    }
    if seen != h_m {
        let h = (h_m & !seen).trailing_zeros() as usize;
        if h < n_hist {
            return Some(PartitionDefect::MissingHistory { history: h });
        }
    }
    None
}
