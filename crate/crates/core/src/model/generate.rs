//! Deterministic model generators: exhaustive enumeration within bounds
//! and seeded random sampling. Every produced model passes validation by
//! construction.
//!
//! # Enumeration order and policy
//!
//! The stream nests, outermost first:
//!
//! 1. frames: rooted trees with 1..=max_moments moments named `m0..`,
//!    enumerated by parent vectors in lexicographic order (`mi`'s parent
//!    ranges over `m0..m(i-1)`);
//! 2. agent-set sizes 1..=pool size, using a prefix of the agent pool;
//! 3. joint choice assignments: per moment, every tuple of per-agent
//!    partitions of the undividedness classes that satisfies
//!    independence of agents (verified by the class-to-selector
//!    surjectivity criterion), vacuous choices first;
//! 4. valuations: every variable of the pool ranges over all subsets of
//!    the point set, later variables cycling fastest;
//! 5. neighborhood configurations (innermost): the all-empty map first,
//!    then, for one carrier agent at a time, one carrier moment `m*`,
//!    one nonempty family `F` of at most `max_family` propositions from
//!    the candidate pool, and one nonempty subset `S` of the histories
//!    through `m*`; the configuration sets `N_a(m*/h) = F` for `h ∈ S`
//!    and ∅ everywhere else.
//!
//! Step 5 is the documented reduction that keeps the stream desk-scale:
//! assigning families to points independently is astronomically large
//! (137^8 configurations for the three-moment fork alone at family size
//! 2). One carrier agent per model loses only refutations that need two
//! agents' neighborhoods to be nonvacuous at once; use [`random_model`]
//! for that shape of coverage.
//!
//! The candidate-proposition pool is the policy's: all subsets of the
//! point set when it has at most 4 points, otherwise (and always under
//! [`PropPolicy::Definable`]) the extensions of the literals `v`, `~v`
//! over the variable pool under the scaffold's valuation.

use super::{ChoiceData, Frame, ImaginationModel, ModelError, MomentId};
use crate::formula::AgentId;
use rand::seq::IndexedRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

/// Candidate-proposition policy for generated neighborhoods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PropPolicy {
    /// All subsets of the point set, for frames with at most 4 points;
    /// larger frames fall back to the definable pool.
    #[default]
    AllSubsets,
    /// Extensions of the literals `v`/`~v` over the variable pool.
    Definable,
}

/// Bounds and pools for the generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelBounds {
    pub max_moments: usize,
    /// Agent name pool; enumeration uses every prefix of it.
    pub agents: Vec<AgentId>,
    /// Variable pool; every variable gets an explicit valuation.
    pub vars: Vec<String>,
    /// Maximum size of a neighborhood family.
    pub max_family: usize,
    pub policy: PropPolicy,
    /// Frames with more histories than this are skipped.
    pub max_histories: usize,
    /// Enumeration refuses to start when the stream would exceed this
    /// many models.
    pub enumeration_cap: u64,
}

impl Default for ModelBounds {
    fn default() -> Self {
        ModelBounds {
            max_moments: 3,
            agents: vec![AgentId::from("a"), AgentId::from("b")],
            vars: vec!["p".to_string(), "q".to_string()],
            max_family: 2,
            policy: PropPolicy::AllSubsets,
            max_histories: 8,
            enumeration_cap: 5_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("enumeration would produce about {estimate} models, over the cap of {cap}; tighten the bounds or raise the cap")]
    BoundsTooLarge { estimate: u128, cap: u64 },
    #[error("the agent pool is empty")]
    NoAgents,
    #[error("bad bounds: {0}")]
    Bounds(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A partially fixed model: frame, agents, choice and valuation. The
/// innermost neighborhood configurations enumerate from here.
#[derive(Debug, Clone)]
pub struct Scaffold {
    frame: Arc<Frame>,
    agents: Arc<Vec<AgentId>>,
    choice: Arc<ChoiceData>,
    valuation: Arc<BTreeMap<String, u64>>,
    /// Nonempty families over the candidate pool, canonical order.
    families: Arc<Vec<Vec<u64>>>,
    /// Per carrier moment: the nonempty history subsets of H_m.
    carriers: Arc<Vec<(usize, Vec<u64>)>>,
}

impl Scaffold {
    pub fn agents(&self) -> &[AgentId] {
        &self.agents
    }

    /// Number of models this scaffold yields.
    pub fn model_count(&self) -> u64 {
        let per_agent: u64 = self
            .carriers
            .iter()
            .map(|(_, subsets)| self.families.len() as u64 * subsets.len() as u64)
            .sum();
        1 + self.agents.len() as u64 * per_agent
    }

    pub fn models(&self) -> ScaffoldModels {
        ScaffoldModels {
            scaffold: self.clone(),
            next: 0,
        }
    }

    fn build(&self, config: u64) -> ImaginationModel {
        let n_points = self.frame.points.len();
        let mut neighborhoods = vec![vec![Vec::new(); n_points]; self.agents.len()];
        if config > 0 {
            let per_carrier: u64 = self
                .carriers
                .iter()
                .map(|(_, subs)| self.families.len() as u64 * subs.len() as u64)
                .sum();
            let mut rest = config - 1;
            let agent = (rest / per_carrier) as usize;
            rest %= per_carrier;
            let mut carrier_idx = 0;
            loop {
                let span = self.families.len() as u64 * self.carriers[carrier_idx].1.len() as u64;
                if rest < span {
                    break;
                }
                rest -= span;
                carrier_idx += 1;
            }
            let (moment, subsets) = &self.carriers[carrier_idx];
            let family_idx = (rest / subsets.len() as u64) as usize;
            let subset = subsets[(rest % subsets.len() as u64) as usize];
            let family = &self.families[family_idx];
            for h in 0..self.frame.histories.len() {
                if subset >> h & 1 == 1 {
                    if let Some(p) = self.frame.point_at[*moment][h] {
                        neighborhoods[agent][p as usize] = family.clone();
                    }
                }
            }
        }
        ImaginationModel::from_parts(
            self.frame.clone(),
            self.agents.clone(),
            self.choice.clone(),
            neighborhoods,
            self.valuation.clone(),
        )
    }
}

/// Iterator over the models of one scaffold.
pub struct ScaffoldModels {
    scaffold: Scaffold,
    next: u64,
}

impl Iterator for ScaffoldModels {
    type Item = ImaginationModel;

    fn next(&mut self) -> Option<ImaginationModel> {
        if self.next >= self.scaffold.model_count() {
            return None;
        }
        let model = self.scaffold.build(self.next);
        self.next += 1;
        Some(model)
    }
}

/// The enumeration stream; iterate it directly for models, or through
/// [`ModelStream::scaffolds`] for chunked (parallel) consumption.
pub struct ModelStream {
    scaffolds: Box<dyn Iterator<Item = Scaffold> + Send>,
    estimate: u128,
    current: Option<ScaffoldModels>,
}

impl ModelStream {
    /// Upper bound on the number of models in the stream (exact for the
    /// all-subsets pool; the definable pool may deduplicate).
    pub fn estimated_models(&self) -> u128 {
        self.estimate
    }

    pub fn scaffolds(self) -> impl Iterator<Item = Scaffold> + Send {
        self.scaffolds
    }
}

impl Iterator for ModelStream {
    type Item = ImaginationModel;

    fn next(&mut self) -> Option<ImaginationModel> {
        loop {
            if let Some(models) = &mut self.current {
                if let Some(m) = models.next() {
                    return Some(m);
                }
            }
            self.current = Some(self.scaffolds.next()?.models());
        }
    }
}

/// Enumerates every model within the bounds, in the canonical order
/// described at module level. Fails up front when the stream would
/// exceed the enumeration cap.
pub fn enumerate_models(bounds: &ModelBounds) -> Result<ModelStream, EnumError> {
    if bounds.agents.is_empty() {
        return Err(EnumError::NoAgents);
    }
    let frames = build_frames(bounds)?;
    let estimate = estimate_stream(&frames, bounds)?;
    let bounds = bounds.clone();
    let scaffolds = frames.into_iter().flat_map(move |frame| {
        let bounds = bounds.clone();
        (1..=bounds.agents.len()).flat_map(move |n_agents| {
            let agents: Arc<Vec<AgentId>> =
                Arc::new(bounds.agents[..n_agents].to_vec());
            let choices = joint_choice_assignments(&frame, n_agents);
            let frame = frame.clone();
            let bounds = bounds.clone();
            choices.into_iter().flat_map(move |choice| {
                let choice = Arc::new(ChoiceData::from_cells(&frame, choice));
                let frame = frame.clone();
                let agents = agents.clone();
                let bounds = bounds.clone();
                ValuationIter::new(bounds.vars.clone(), frame.points.len()).map(move |valuation| {
                    let valuation = Arc::new(valuation);
                    let pool = candidate_pool(&frame, &bounds, &valuation);
                    // Every scaffold gets unshared copies of the frame,
                    // agent and choice data: the per-model Arc clones in
                    // the inner loop then touch thread-local refcounts
                    // only, instead of ping-ponging cache lines between
                    // workers.
                    Scaffold {
                        families: Arc::new(families_over(&pool, bounds.max_family)),
                        carriers: Arc::new(carriers_of(&frame)),
                        frame: Arc::new((*frame).clone()),
                        agents: Arc::new((*agents).clone()),
                        choice: Arc::new((*choice).clone()),
                        valuation,
                    }
                })
            })
        })
    });
    Ok(ModelStream {
        scaffolds: Box::new(scaffolds),
        estimate,
        current: None,
    })
}

/// A random model, deterministic in the seed. Frame conditions hold by
/// construction: per-agent partitions are built over the undividedness
/// classes as a surjectively labelled product, so every selector of
/// cells shares a class.
pub fn random_model(seed: u64, bounds: &ModelBounds) -> Result<ImaginationModel, EnumError> {
    if bounds.agents.is_empty() {
        return Err(EnumError::NoAgents);
    }
    if bounds.max_moments == 0 {
        return Err(EnumError::Bounds("max_moments must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Frame: a random parent vector, re-drawn while the history cap is
    // exceeded (a chain is the deterministic fallback).
    let mut frame = None;
    for attempt in 0..64 {
        let n = rng.random_range(1..=bounds.max_moments);
        let parents: Vec<usize> = if attempt == 63 {
            (0..n.saturating_sub(1)).collect()
        } else {
            (1..n).map(|i| rng.random_range(0..i)).collect()
        };
        let candidate = frame_from_parents(&parents)?;
        if candidate.histories.len() <= bounds.max_histories {
            frame = Some(candidate);
            break;
        }
    }
    let frame = Arc::new(frame.expect("chain fallback always fits"));

    let n_agents = rng.random_range(1..=bounds.agents.len());
    let agents = Arc::new(bounds.agents[..n_agents].to_vec());

    let mut cells: Vec<Vec<Vec<u64>>> = vec![Vec::new(); n_agents];
    for a in &mut cells {
        a.resize(frame.moments.len(), Vec::new());
    }
    for m in 0..frame.moments.len() {
        let classes = undividedness_classes(&frame, m);
        let joint = random_joint_choice(&mut rng, &classes, n_agents);
        for (a, partition) in joint.into_iter().enumerate() {
            cells[a][m] = partition;
        }
    }
    let choice = Arc::new(ChoiceData::from_cells(&frame, cells));

    let n_points = frame.points.len();
    let full = frame.point_full;
    let mut valuation = BTreeMap::new();
    for v in &bounds.vars {
        valuation.insert(v.clone(), rng.random::<u64>() & full);
    }
    let valuation = Arc::new(valuation);

    let definable = literal_pool(&frame, &valuation);
    let mut neighborhoods = vec![vec![Vec::new(); n_points]; n_agents];
    for agent in neighborhoods.iter_mut() {
        for family in agent.iter_mut() {
            if bounds.max_family == 0 || rng.random_bool(0.5) {
                continue;
            }
            let size = rng.random_range(1..=bounds.max_family);
            for _ in 0..size {
                let prop = match bounds.policy {
                    PropPolicy::AllSubsets => rng.random::<u64>() & full,
                    PropPolicy::Definable => {
                        definable.choose(&mut rng).copied().unwrap_or(0)
                    }
                };
                family.push(prop);
            }
            family.sort_unstable();
            family.dedup();
        }
    }

    let model =
        ImaginationModel::from_parts(frame, agents, choice, neighborhoods, valuation);
    debug_assert!(model.validate().is_clean());
    Ok(model)
}

fn build_frames(bounds: &ModelBounds) -> Result<Vec<Arc<Frame>>, EnumError> {
    let mut frames = Vec::new();
    for n in 1..=bounds.max_moments {
        let mut parents = vec![0usize; n.saturating_sub(1)];
        loop {
            let frame = frame_from_parents(&parents)?;
            if frame.histories.len() <= bounds.max_histories {
                frames.push(Arc::new(frame));
            }
            // next parent vector in lexicographic order
            let mut pos = parents.len();
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                parents[pos] += 1;
                if parents[pos] <= pos {
                    break;
                }
                parents[pos] = 0;
            }
            if parents.iter().all(|&p| p == 0) {
                break;
            }
        }
    }
    Ok(frames)
}

fn frame_from_parents(parents: &[usize]) -> Result<Frame, ModelError> {
    let n = parents.len() + 1;
    let moments: Vec<MomentId> = (0..n).map(|i| MomentId::new(format!("m{i}"))).collect();
    let covers: Vec<(usize, usize)> = parents
        .iter()
        .enumerate()
        .map(|(i, &p)| (p, i + 1))
        .collect();
    Frame::new(moments, covers)
}

/// Undividedness classes of the histories through moment `m`: h ≈ h'
/// iff they share some moment strictly above `m`. On a tree this groups
/// histories by their successor of `m`.
fn undividedness_classes(frame: &Frame, m: usize) -> Vec<u64> {
    let mut groups: BTreeMap<Option<usize>, u64> = BTreeMap::new();
    let mut singles = Vec::new();
    for h in 0..frame.histories.len() {
        if frame.hist_thru[m] >> h & 1 == 0 {
            continue;
        }
        let chain = &frame.histories[h];
        let pos = chain.iter().position(|&x| x == m).expect("m on chain");
        match chain.get(pos + 1) {
            Some(&succ) => *groups.entry(Some(succ)).or_insert(0) |= 1 << h,
            None => singles.push(1u64 << h),
        }
    }
    let mut classes: Vec<u64> = groups.into_values().chain(singles).collect();
    classes.sort_by_key(|mask| mask.trailing_zeros());
    classes
}

/// All restricted-growth strings of length `k`, lexicographic; `[0,..]`
/// (one block, the vacuous partition) first.
fn set_partitions(k: usize) -> Vec<Vec<usize>> {
    fn rec(i: usize, k: usize, max_block: usize, rgs: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == k {
            out.push(rgs.clone());
            return;
        }
        for b in 0..=max_block + 1 {
            rgs.push(b);
            rec(i + 1, k, max_block.max(b), rgs, out);
            rgs.pop();
        }
    }
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut rgs = vec![0usize];
    rec(1, k, 0, &mut rgs, &mut out);
    out
}

fn rgs_to_cells(rgs: &[usize], classes: &[u64]) -> Vec<u64> {
    let blocks = rgs.iter().copied().max().map_or(0, |m| m + 1);
    let mut cells = vec![0u64; blocks];
    for (c, &b) in rgs.iter().enumerate() {
        cells[b] |= classes[c];
    }
    cells.sort_unstable();
    cells
}

/// Independence at one moment: the map class → (block per agent) must be
/// surjective onto the full product of blocks.
fn independent(rgss: &[&Vec<usize>], k: usize) -> bool {
    if k == 0 {
        return true; // no histories, nothing to intersect
    }
    let product: usize = rgss
        .iter()
        .map(|rgs| rgs.iter().copied().max().map_or(1, |m| m + 1))
        .product();
    if product > k {
        return false;
    }
    let mut seen = vec![false; product];
    let mut distinct = 0;
    for c in 0..k {
        let mut idx = 0;
        for rgs in rgss {
            let blocks = rgs.iter().copied().max().map_or(1, |m| m + 1);
            idx = idx * blocks + rgs[c];
        }
        if !seen[idx] {
            seen[idx] = true;
            distinct += 1;
        }
    }
    distinct == product
}

/// All joint choice assignments for a frame: per moment, every
/// independence-respecting tuple of per-agent partitions of the
/// undividedness classes; combined over moments by an odometer with the
/// last moment cycling fastest.
fn joint_choice_assignments(frame: &Frame, n_agents: usize) -> Vec<Vec<Vec<Vec<u64>>>> {
    let n = frame.moments.len();
    let mut per_moment: Vec<Vec<Vec<Vec<u64>>>> = Vec::with_capacity(n);
    for m in 0..n {
        let classes = undividedness_classes(frame, m);
        let k = classes.len();
        let partitions = set_partitions(k);
        let mut joints = Vec::new();
        let mut idx = vec![0usize; n_agents];
        'combos: loop {
            let rgss: Vec<&Vec<usize>> = idx.iter().map(|&i| &partitions[i]).collect();
            if independent(&rgss, k) {
                joints.push(
                    rgss.iter()
                        .map(|rgs| rgs_to_cells(rgs, &classes))
                        .collect::<Vec<_>>(),
                );
            }
            let mut pos = n_agents;
            loop {
                if pos == 0 {
                    break 'combos;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < partitions.len() {
                    break;
                }
                idx[pos] = 0;
            }
        }
        per_moment.push(joints);
    }

    // odometer over moments
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    'outer: loop {
        let mut combo: Vec<Vec<Vec<u64>>> = vec![Vec::new(); n_agents];
        for m in 0..n {
            let joint = &per_moment[m][idx[m]];
            for a in 0..n_agents {
                combo[a].push(joint[a].clone());
            }
        }
        out.push(combo);
        let mut pos = n;
        loop {
            if pos == 0 {
                break 'outer;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < per_moment[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
    out
}

fn random_joint_choice(
    rng: &mut ChaCha8Rng,
    classes: &[u64],
    n_agents: usize,
) -> Vec<Vec<u64>> {
    let k = classes.len();
    if k == 0 {
        return vec![Vec::new(); n_agents];
    }

    // Occasionally try a freely sampled combination and keep it if
    // independence holds; the labelled product below is the fallback.
    if k > 1 && rng.random_bool(0.25) {
        let partitions = set_partitions(k);
        let sample: Vec<&Vec<usize>> = (0..n_agents)
            .map(|_| &partitions[rng.random_range(0..partitions.len())])
            .collect();
        if independent(&sample, k) {
            return sample.iter().map(|rgs| rgs_to_cells(rgs, classes)).collect();
        }
    }

    // Surjectively labelled product: each agent picks a block count, the
    // product staying within k; the first `product` classes (shuffled)
    // get distinct label tuples, the rest random ones.
    let mut block_counts = vec![1usize; n_agents];
    let mut budget = k;
    for count in block_counts.iter_mut() {
        if budget > 1 && rng.random_bool(0.5) {
            *count = rng.random_range(1..=budget);
            budget /= *count;
        }
    }
    let product: usize = block_counts.iter().product();
    let mut order: Vec<usize> = (0..k).collect();
    for i in (1..k).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    let mut labels = vec![vec![0usize; k]; n_agents];
    for (rank, &class) in order.iter().enumerate() {
        let mut tuple = if rank < product {
            rank
        } else {
            rng.random_range(0..product)
        };
        for a in (0..n_agents).rev() {
            labels[a][class] = tuple % block_counts[a];
            tuple /= block_counts[a];
        }
    }
    labels
        .iter()
        .map(|label| {
            let blocks = label.iter().copied().max().unwrap_or(0) + 1;
            let mut cells = vec![0u64; blocks];
            for (c, &b) in label.iter().enumerate() {
                cells[b] |= classes[c];
            }
            cells.retain(|&c| c != 0);
            cells.sort_unstable();
            cells
        })
        .collect()
}

/// The candidate-proposition pool for one scaffold.
fn candidate_pool(
    frame: &Frame,
    bounds: &ModelBounds,
    valuation: &BTreeMap<String, u64>,
) -> Vec<u64> {
    let n_points = frame.points.len();
    match bounds.policy {
        PropPolicy::AllSubsets if n_points <= 4 => (0..1u64 << n_points).collect(),
        _ => literal_pool(frame, valuation),
    }
}

/// Extensions of `v` and `~v` for every variable, deduplicated.
fn literal_pool(frame: &Frame, valuation: &BTreeMap<String, u64>) -> Vec<u64> {
    let full = frame.point_full;
    let mut pool: Vec<u64> = valuation
        .values()
        .flat_map(|&mask| [mask, full & !mask])
        .collect();
    pool.sort_unstable();
    pool.dedup();
    pool
}

/// Nonempty families of at most `max_family` pool members: singletons by
/// pool order, then pairs `(i, j)` with `i < j`, and so on.
fn families_over(pool: &[u64], max_family: usize) -> Vec<Vec<u64>> {
    fn rec(
        pool: &[u64],
        max_family: usize,
        start: usize,
        current: &mut Vec<usize>,
        by_len: &mut [Vec<Vec<u64>>],
    ) {
        if !current.is_empty() {
            by_len[current.len() - 1].push(current.iter().map(|&i| pool[i]).collect());
        }
        if current.len() == max_family {
            return;
        }
        for i in start..pool.len() {
            current.push(i);
            rec(pool, max_family, i + 1, current, by_len);
            current.pop();
        }
    }
    if max_family == 0 {
        return Vec::new();
    }
    let mut by_len: Vec<Vec<Vec<u64>>> = vec![Vec::new(); max_family];
    let mut current = Vec::new();
    rec(pool, max_family, 0, &mut current, &mut by_len);
    by_len.into_iter().flatten().collect()
}

/// Per moment: the nonempty history subsets of H_m, ascending by the
/// subset's index over the moment's histories.
fn carriers_of(frame: &Frame) -> Vec<(usize, Vec<u64>)> {
    let mut out = Vec::new();
    for m in 0..frame.moments.len() {
        let members: Vec<usize> = (0..frame.histories.len())
            .filter(|h| frame.hist_thru[m] >> h & 1 == 1)
            .collect();
        if members.is_empty() {
            continue;
        }
        let mut subsets = Vec::with_capacity((1 << members.len()) - 1);
        for bits in 1u64..1 << members.len() {
            let mut mask = 0u64;
            for (i, &h) in members.iter().enumerate() {
                if bits >> i & 1 == 1 {
                    mask |= 1 << h;
                }
            }
            subsets.push(mask);
        }
        out.push((m, subsets));
    }
    out
}

/// Odometer over valuations: each variable ranges over all subsets of
/// the point set, later variables cycling fastest.
struct ValuationIter {
    vars: Vec<String>,
    masks: Vec<u64>,
    per: u64,
    done: bool,
}

impl ValuationIter {
    fn new(vars: Vec<String>, n_points: usize) -> Self {
        let masks = vec![0u64; vars.len()];
        ValuationIter {
            vars,
            masks,
            per: 1u64 << n_points,
            done: false,
        }
    }
}

impl Iterator for ValuationIter {
    type Item = BTreeMap<String, u64>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let item: BTreeMap<String, u64> = self
            .vars
            .iter()
            .cloned()
            .zip(self.masks.iter().copied())
            .collect();
        let mut pos = self.masks.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            self.masks[pos] += 1;
            if self.masks[pos] < self.per {
                break;
            }
            self.masks[pos] = 0;
        }
        Some(item)
    }
}

fn estimate_stream(frames: &[Arc<Frame>], bounds: &ModelBounds) -> Result<u128, EnumError> {
    let cap = bounds.enumeration_cap as u128;
    let mut total: u128 = 0;
    for frame in frames {
        let n_points = frame.points.len() as u32;
        let vals = (1u128 << n_points).pow(bounds.vars.len() as u32);
        let pool_size = match bounds.policy {
            PropPolicy::AllSubsets if n_points <= 4 => 1usize << n_points,
            _ => 2 * bounds.vars.len().max(1),
        };
        let families: u128 = (1..=bounds.max_family)
            .map(|s| binomial(pool_size, s))
            .sum();
        let per_carrier: u128 = frame
            .hist_thru
            .iter()
            .filter(|&&mask| mask != 0)
            .map(|&mask| families * ((1u128 << mask.count_ones()) - 1))
            .sum();
        for n_agents in 1..=bounds.agents.len() {
            let choices = joint_choice_assignments(frame, n_agents).len() as u128;
            let inner = 1 + n_agents as u128 * per_carrier;
            total = total.saturating_add(choices.saturating_mul(vals).saturating_mul(inner));
            if total > cap {
                return Err(EnumError::BoundsTooLarge {
                    estimate: total,
                    cap: bounds.enumeration_cap,
                });
            }
        }
    }
    Ok(total)
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut out: u128 = 1;
    for i in 0..k {
        out = out * (n - i) as u128 / (i + 1) as u128;
    }
    out
}
