//! Shared data types and their invariants.
//!
//! Everything downstream (encoder, retrieval, ranker, trainer, metrics)
//! works on the types defined here. All of them are immutable after
//! construction and safe to share read-only across parallel workers.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rng::{self, tag};
use crate::vecmath::Matrix;

pub type UserId = usize;
pub type ItemId = usize;
pub type EnvId = usize;
pub type EvidenceId = usize;

// ── Interactions ──────────────────────────────────────────────────────

/// One timestamped, rated user-item interaction tagged with the
/// environment it was observed in.
#[derive(Debug, Clone, PartialEq)]
pub struct Interaction {
    pub user_id: UserId,
    pub item_id: ItemId,
    pub rating: f64,
    pub timestamp: i64,
    pub env_id: EnvId,
}

/// A dataset of interactions sorted by `(user_id, timestamp)`.
///
/// Ratings are carried for evidence payloads but unused by the default
/// loss; training is implicit-feedback next-item prediction.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionDataset {
    interactions: Vec<Interaction>,
    /// `user_offsets[u]..user_offsets[u + 1]` indexes user `u`'s stream.
    user_offsets: Vec<usize>,
    pub num_users: usize,
    pub num_items: usize,
    pub num_envs: usize,
}

impl InteractionDataset {
    /// Validates invariants and builds the per-user index.
    ///
    /// Requires: interactions sorted by `(user_id, timestamp)`, dense user
    /// ids, item/env ids in range, every user with at least 2 interactions,
    /// and at least 2 distinct environments overall.
    pub fn new(
        interactions: Vec<Interaction>,
        num_users: usize,
        num_items: usize,
        num_envs: usize,
    ) -> Result<Self> {
        if interactions.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let mut envs_seen = BTreeSet::new();
        for w in interactions.windows(2) {
            let ordered = w[0].user_id < w[1].user_id
                || (w[0].user_id == w[1].user_id && w[0].timestamp <= w[1].timestamp);
            if !ordered {
                return Err(Error::BadConfig(String::from(
                    "interactions not sorted by (user, timestamp)",
                )));
            }
        }
        for it in &interactions {
            if it.item_id >= num_items {
                return Err(Error::ItemOutOfRange {
                    item: it.item_id,
                    num_items,
                });
            }
            if it.user_id >= num_users || it.env_id >= num_envs {
                return Err(Error::BadConfig(String::from("user or env id out of range")));
            }
            if !(1.0..=5.0).contains(&it.rating) {
                return Err(Error::BadConfig(String::from("rating outside [1, 5]")));
            }
            envs_seen.insert(it.env_id);
        }
        if envs_seen.len() < 2 {
            return Err(Error::BadConfig(String::from(
                "dataset must span at least 2 environments",
            )));
        }
        let mut user_offsets = vec![0usize; num_users + 1];
        for it in &interactions {
            user_offsets[it.user_id + 1] += 1;
        }
        for u in 0..num_users {
            if user_offsets[u + 1] < 2 {
                return Err(Error::BadConfig(String::from(
                    "every user needs at least 2 interactions",
                )));
            }
            user_offsets[u + 1] += user_offsets[u];
        }
        Ok(InteractionDataset {
            interactions,
            user_offsets,
            num_users,
            num_items,
            num_envs,
        })
    }

    pub fn interactions(&self) -> &[Interaction] {
        &self.interactions
    }

    /// The time-ordered stream of one user.
    pub fn user_stream(&self, user: UserId) -> &[Interaction] {
        &self.interactions[self.user_offsets[user]..self.user_offsets[user + 1]]
    }

    /// Environment ids present, ascending.
    pub fn environments(&self) -> Vec<EnvId> {
        let set: BTreeSet<EnvId> = self.interactions.iter().map(|i| i.env_id).collect();
        set.into_iter().collect()
    }

    /// A dataset restricted to the given environments. Users keep their ids;
    /// users left with fewer than 2 interactions make the restriction fail.
    pub fn restrict_to_envs(&self, envs: &[EnvId]) -> Result<InteractionDataset> {
        let keep: BTreeSet<EnvId> = envs.iter().copied().collect();
        let filtered: Vec<Interaction> = self
            .interactions
            .iter()
            .filter(|i| keep.contains(&i.env_id))
            .cloned()
            .collect();
        InteractionDataset::new(filtered, self.num_users, self.num_items, self.num_envs)
    }

    /// Derives next-item training examples: for each user stream position
    /// `p >= 1`, the context is the up-to-`max_context` most recent items
    /// before `p` and the target is the item at `p`. With `holdout_last`,
    /// each user's final position is reserved for evaluation. Negatives are
    /// left empty; the trainer fills them per epoch and batch.
    pub fn training_examples(&self, max_context: usize, holdout_last: bool) -> Vec<TrainingExample> {
        let mut out = Vec::new();
        for u in 0..self.num_users {
            let stream = self.user_stream(u);
            let end = if holdout_last {
                stream.len().saturating_sub(1)
            } else {
                stream.len()
            };
            for p in 1..end {
                let lo = p.saturating_sub(max_context);
                out.push(TrainingExample {
                    user_id: u,
                    context: stream[lo..p].iter().map(|i| i.item_id).collect(),
                    target: stream[p].item_id,
                    env_id: stream[p].env_id,
                    negatives: Vec::new(),
                });
            }
        }
        out
    }
}

/// One supervised next-item example.
///
/// The target may re-appear earlier in the context (repeat consumption is
/// allowed); only overlap with the negatives is forbidden.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingExample {
    pub user_id: UserId,
    /// Most recent item last, truncated to the configured context length.
    pub context: Vec<ItemId>,
    pub target: ItemId,
    pub env_id: EnvId,
    pub negatives: Vec<ItemId>,
}

// ── Evidence ──────────────────────────────────────────────────────────

/// Where a piece of evidence came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvidenceSource {
    History,
    Attribute,
    KgTriplet,
}

impl EvidenceSource {
    /// Tag used in the evidence-pool file format and retrieval listings.
    pub fn file_tag(&self) -> &'static str {
        match self {
            EvidenceSource::History => "history",
            EvidenceSource::Attribute => "attribute",
            EvidenceSource::KgTriplet => "kg_triplet",
        }
    }

    pub fn from_file_tag(tag: &str) -> Option<Self> {
        match tag {
            "history" => Some(EvidenceSource::History),
            "attribute" => Some(EvidenceSource::Attribute),
            "kg_triplet" => Some(EvidenceSource::KgTriplet),
            _ => None,
        }
    }
}

/// Source-specific evidence payload.
///
/// History records additionally carry the owning user so the per-user
/// candidate index can be rebuilt from a pool file without guessing.
#[derive(Debug, Clone, PartialEq)]
pub enum EvidencePayload {
    History {
        user_id: UserId,
        item_id: ItemId,
        rating: f64,
        timestamp: i64,
    },
    Attribute {
        name: String,
        value: String,
        item_id: ItemId,
    },
    KgTriplet {
        head: ItemId,
        relation: String,
        tail: ItemId,
    },
}

impl EvidencePayload {
    pub fn source(&self) -> EvidenceSource {
        match self {
            EvidencePayload::History { .. } => EvidenceSource::History,
            EvidencePayload::Attribute { .. } => EvidenceSource::Attribute,
            EvidencePayload::KgTriplet { .. } => EvidenceSource::KgTriplet,
        }
    }
}

/// One typed evidence record with its derived embedding and stability
/// statistic.
#[derive(Debug, Clone, PartialEq)]
pub struct EvidenceItem {
    pub id: EvidenceId,
    pub payload: EvidencePayload,
    /// Unit-norm embedding once [`crate::retrieval::embed_evidence`] ran;
    /// empty before that.
    pub embedding: Vec<f64>,
    /// Cross-environment variance statistic; 0 until
    /// [`crate::retrieval::precompute_stability`] ran.
    pub stability_var: f64,
}

impl EvidenceItem {
    pub fn new(id: EvidenceId, payload: EvidencePayload) -> Self {
        EvidenceItem {
            id,
            payload,
            embedding: Vec::new(),
            stability_var: 0.0,
        }
    }

    pub fn source(&self) -> EvidenceSource {
        self.payload.source()
    }
}

/// The multi-source evidence pool with per-user and per-item candidate
/// indexes.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EvidencePool {
    items: Vec<EvidenceItem>,
    /// user -> candidate evidence ids (sorted, deduplicated).
    user_index: BTreeMap<UserId, Vec<EvidenceId>>,
    /// item -> attribute/kg evidence ids referencing it (sorted).
    item_index: BTreeMap<ItemId, Vec<EvidenceId>>,
}

impl EvidencePool {
    /// Builds a pool, checking that ids are dense and in order.
    pub fn new(items: Vec<EvidenceItem>) -> Result<Self> {
        for (idx, item) in items.iter().enumerate() {
            if item.id != idx {
                return Err(Error::BadConfig(String::from(
                    "evidence ids must be dense 0..len-1",
                )));
            }
            if item.stability_var < 0.0 {
                return Err(Error::BadConfig(String::from("negative stability_var")));
            }
        }
        Ok(EvidencePool {
            items,
            user_index: BTreeMap::new(),
            item_index: BTreeMap::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[EvidenceItem] {
        &self.items
    }

    pub fn items_mut(&mut self) -> &mut [EvidenceItem] {
        &mut self.items
    }

    pub fn get(&self, id: EvidenceId) -> &EvidenceItem {
        &self.items[id]
    }

    /// Candidate evidence ids for a user: own history records plus
    /// attribute/kg records of items in the user's stream. Empty slice for
    /// unknown users.
    pub fn user_candidates(&self, user: UserId) -> &[EvidenceId] {
        self.user_index.get(&user).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Attribute/kg evidence ids referencing an item.
    pub fn item_candidates(&self, item: ItemId) -> &[EvidenceId] {
        self.item_index.get(&item).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Rebuilds the per-user and per-item candidate indexes against a
    /// dataset (normally the training split, so no test-time information
    /// leaks into candidate scopes).
    pub fn build_indexes(&mut self, dataset: &InteractionDataset) {
        self.item_index.clear();
        for item in &self.items {
            match &item.payload {
                EvidencePayload::Attribute { item_id, .. } => {
                    self.item_index.entry(*item_id).or_default().push(item.id);
                }
                EvidencePayload::KgTriplet { head, tail, .. } => {
                    self.item_index.entry(*head).or_default().push(item.id);
                    if tail != head {
                        self.item_index.entry(*tail).or_default().push(item.id);
                    }
                }
                EvidencePayload::History { .. } => {}
            }
        }
        let mut history_by_user: BTreeMap<UserId, Vec<EvidenceId>> = BTreeMap::new();
        for item in &self.items {
            if let EvidencePayload::History { user_id, .. } = item.payload {
                history_by_user.entry(user_id).or_default().push(item.id);
            }
        }
        self.user_index.clear();
        for u in 0..dataset.num_users {
            let mut ids: BTreeSet<EvidenceId> = BTreeSet::new();
            if let Some(own) = history_by_user.get(&u) {
                ids.extend(own.iter().copied());
            }
            for it in dataset.user_stream(u) {
                if let Some(ev) = self.item_index.get(&it.item_id) {
                    ids.extend(ev.iter().copied());
                }
            }
            if !ids.is_empty() {
                self.user_index.insert(u, ids.into_iter().collect());
            }
        }
    }
}

// ── Model parameters ──────────────────────────────────────────────────

/// Attention-plus-MLP ranker weights.
#[derive(Debug, Clone, PartialEq)]
pub struct RankerParams {
    /// `(2d, d)`: projects `[z_u ; e_item]` to the attention query.
    pub query_proj: Matrix,
    /// `(d, d)`: projects evidence embeddings to keys.
    pub key_proj: Matrix,
    /// `(d, d)`: projects evidence embeddings to values.
    pub value_proj: Matrix,
    /// `(3d, d)`: first dense layer over `[z_u ; e_item ; z_D]`.
    pub mlp_w1: Matrix,
    pub mlp_b1: Vec<f64>,
    /// `(d)`: second dense layer down to the scalar score.
    pub mlp_w2: Vec<f64>,
    pub mlp_b2: f64,
}

/// All trainable parameters plus the invariance dummy scalar.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    /// `(num_items, d)` embedding table.
    pub item_embeddings: Matrix,
    /// `(max_seq_len)` pooling logits; slot `max_seq_len - 1` is the most
    /// recent position.
    pub recency_weights: Vec<f64>,
    pub ranker: RankerParams,
    /// Fixed at 1.0 except while the invariance penalty differentiates
    /// through it.
    pub irm_dummy_w: f64,
}

pub const NUM_PARAM_BLOCKS: usize = 9;

/// Parameter blocks updated during stage-1 encoder pre-training
/// (embeddings and recency pooling only).
pub const STAGE1_TRAINABLE: [bool; NUM_PARAM_BLOCKS] =
    [true, true, false, false, false, false, false, false, false];

/// All blocks, for stage-2 joint training.
pub const ALL_TRAINABLE: [bool; NUM_PARAM_BLOCKS] = [true; NUM_PARAM_BLOCKS];

impl ModelParams {
    /// Seeded Gaussian initialization scaled so logits start O(1).
    pub fn init(num_items: usize, hp: &HyperParams) -> Self {
        let d = hp.dim;
        let mut r = rng::derive_rng(hp.seed, &[tag::PARAM_INIT]);
        let mut gauss = |scale: f64| rng::normal(&mut r) * scale;
        let emb_scale = 1.0 / libm::sqrt(d as f64);
        let item_embeddings = Matrix::from_fn(num_items, d, |_, _| gauss(emb_scale));
        let recency_weights = vec![0.0; hp.max_seq_len];
        let proj_scale = 1.0 / libm::sqrt(d as f64);
        let ranker = RankerParams {
            query_proj: Matrix::from_fn(2 * d, d, |_, _| gauss(proj_scale / 1.4142135623730951)),
            key_proj: Matrix::from_fn(d, d, |_, _| gauss(proj_scale)),
            value_proj: Matrix::from_fn(d, d, |_, _| gauss(proj_scale)),
            mlp_w1: Matrix::from_fn(3 * d, d, |_, _| gauss(1.0 / libm::sqrt(3.0 * d as f64))),
            mlp_b1: vec![0.0; d],
            mlp_w2: (0..d).map(|_| gauss(proj_scale)).collect(),
            mlp_b2: 0.0,
        };
        ModelParams {
            item_embeddings,
            recency_weights,
            ranker,
            irm_dummy_w: 1.0,
        }
    }

    /// Zero-valued clone of the same shape, used as a gradient buffer.
    pub fn zeros_like(&self) -> ModelParams {
        let mut p = self.clone();
        for block in p.blocks_mut() {
            block.iter_mut().for_each(|v| *v = 0.0);
        }
        p.irm_dummy_w = 0.0;
        p
    }

    pub fn dim(&self) -> usize {
        self.item_embeddings.cols
    }

    pub fn num_items(&self) -> usize {
        self.item_embeddings.rows
    }

    pub fn max_seq_len(&self) -> usize {
        self.recency_weights.len()
    }

    /// Trainable blocks in a fixed order. `irm_dummy_w` is not trainable
    /// and is excluded.
    pub fn blocks(&self) -> [&[f64]; NUM_PARAM_BLOCKS] {
        [
            &self.item_embeddings.data,
            &self.recency_weights,
            &self.ranker.query_proj.data,
            &self.ranker.key_proj.data,
            &self.ranker.value_proj.data,
            &self.ranker.mlp_w1.data,
            &self.ranker.mlp_b1,
            &self.ranker.mlp_w2,
            core::slice::from_ref(&self.ranker.mlp_b2),
        ]
    }

    pub fn blocks_mut(&mut self) -> [&mut [f64]; NUM_PARAM_BLOCKS] {
        [
            &mut self.item_embeddings.data,
            &mut self.recency_weights,
            &mut self.ranker.query_proj.data,
            &mut self.ranker.key_proj.data,
            &mut self.ranker.value_proj.data,
            &mut self.ranker.mlp_w1.data,
            &mut self.ranker.mlp_b1,
            &mut self.ranker.mlp_w2,
            core::slice::from_mut(&mut self.ranker.mlp_b2),
        ]
    }

    /// Concatenation of all trainable blocks; inverse of [`Self::unflatten`].
    pub fn flatten(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for block in self.blocks() {
            out.extend_from_slice(block);
        }
        out
    }

    pub fn unflatten(&mut self, flat: &[f64]) {
        let mut pos = 0;
        for block in self.blocks_mut() {
            block.copy_from_slice(&flat[pos..pos + block.len()]);
            pos += block.len();
        }
        debug_assert_eq!(pos, flat.len());
    }

    pub fn all_finite(&self) -> bool {
        self.blocks().iter().all(|b| crate::vecmath::all_finite(b))
    }
}

// ── Hyper-parameters ──────────────────────────────────────────────────

/// Every tunable knob of the pipeline, with defaults matching the
/// published configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperParams {
    /// Weight of the invariance penalty.
    pub lambda1: f64,
    /// Weight of the explanation-consistency loss.
    pub lambda2: f64,
    /// Blend between semantic and stability retrieval scores.
    pub alpha: f64,
    /// Weight of the counterfactual hinge inside the consistency loss.
    pub beta: f64,
    /// Required score drop when the key evidence is removed.
    pub gamma: f64,
    /// Retrieval size K; 0 disables retrieval (the no-evidence ablation).
    pub top_k: usize,
    /// Embedding dimension d.
    pub dim: usize,
    /// Maximum context length L.
    pub max_seq_len: usize,
    /// Sampled negatives per training example.
    pub num_negatives: usize,
    pub learning_rate: f64,
    pub batch_size: usize,
    /// Stage-1 (encoder pre-training) epochs.
    pub stage1_epochs: usize,
    /// Stage-2 (joint training) epochs.
    pub stage2_epochs: usize,
    /// Attention threshold above which evidence is cited.
    pub tau_cite: f64,
    /// Sigmoid temperature of the differentiable citation surrogate.
    pub temp_cite: f64,
    pub seed: u64,
}

impl Default for HyperParams {
    fn default() -> Self {
        HyperParams {
            lambda1: 0.1,
            lambda2: 0.05,
            alpha: 0.6,
            beta: 0.5,
            gamma: 0.2,
            top_k: 20,
            dim: 128,
            max_seq_len: 20,
            num_negatives: 16,
            learning_rate: 1e-4,
            batch_size: 256,
            stage1_epochs: 5,
            stage2_epochs: 20,
            tau_cite: 0.025,
            temp_cite: 0.05,
            seed: 42,
        }
    }
}

impl HyperParams {
    pub fn validate(&self) -> Result<()> {
        let ok = self.lambda1 >= 0.0
            && self.lambda2 >= 0.0
            && (0.0..=1.0).contains(&self.alpha)
            && self.beta >= 0.0
            && self.gamma >= 0.0
            && self.dim >= 1
            && self.max_seq_len >= 1
            && self.num_negatives >= 1
            && self.learning_rate > 0.0
            && self.batch_size >= 1
            && self.tau_cite > 0.0
            && self.tau_cite < 1.0
            && self.temp_cite > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::BadConfig(String::from("hyper-parameters out of range")))
        }
    }
}

// ── Explanations ──────────────────────────────────────────────────────

/// A generated explanation plus the evidence it cites.
///
/// Citations are 1-based ranks into the retrieved top-K list, ordered by
/// descending attention weight.
#[derive(Debug, Clone, PartialEq)]
pub struct Explanation {
    pub text: String,
    pub citations: Vec<usize>,
    pub per_citation_weight: Vec<f64>,
}

impl Explanation {
    /// Checks the structural invariants: citations within `1..=k`, weights
    /// parallel and non-increasing.
    pub fn check_invariants(&self, k: usize) -> bool {
        self.citations.len() == self.per_citation_weight.len()
            && self.citations.iter().all(|&c| c >= 1 && c <= k)
            && self
                .per_citation_weight
                .windows(2)
                .all(|w| w[0] >= w[1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_dataset() -> InteractionDataset {
        let inters = vec![
            Interaction { user_id: 0, item_id: 0, rating: 4.0, timestamp: 10, env_id: 0 },
            Interaction { user_id: 0, item_id: 1, rating: 3.0, timestamp: 20, env_id: 0 },
            Interaction { user_id: 0, item_id: 2, rating: 5.0, timestamp: 30, env_id: 1 },
            Interaction { user_id: 1, item_id: 2, rating: 2.0, timestamp: 5, env_id: 1 },
            Interaction { user_id: 1, item_id: 0, rating: 1.0, timestamp: 6, env_id: 0 },
        ];
        InteractionDataset::new(inters, 2, 3, 2).unwrap()
    }

    #[test]
    fn user_streams_are_indexed() {
        let ds = tiny_dataset();
        assert_eq!(ds.user_stream(0).len(), 3);
        assert_eq!(ds.user_stream(1).len(), 2);
        assert_eq!(ds.user_stream(1)[0].item_id, 2);
    }

    #[test]
    fn rejects_unsorted_interactions() {
        let inters = vec![
            Interaction { user_id: 1, item_id: 0, rating: 4.0, timestamp: 10, env_id: 0 },
            Interaction { user_id: 0, item_id: 1, rating: 3.0, timestamp: 20, env_id: 1 },
        ];
        assert!(InteractionDataset::new(inters, 2, 2, 2).is_err());
    }

    #[test]
    fn rejects_single_environment() {
        let inters = vec![
            Interaction { user_id: 0, item_id: 0, rating: 4.0, timestamp: 10, env_id: 0 },
            Interaction { user_id: 0, item_id: 1, rating: 3.0, timestamp: 20, env_id: 0 },
        ];
        let err = InteractionDataset::new(inters, 1, 2, 1).unwrap_err();
        assert_eq!(err.code(), "bad-config");
    }

    #[test]
    fn training_examples_have_causal_contexts() {
        let ds = tiny_dataset();
        for ex in ds.training_examples(10, false) {
            let stream = ds.user_stream(ex.user_id);
            let target_pos = stream
                .iter()
                .position(|i| i.item_id == ex.target)
                .map(|p| {
                    // find the exact occurrence matching the context length
                    stream
                        .iter()
                        .enumerate()
                        .filter(|(_, it)| it.item_id == ex.target)
                        .map(|(p2, _)| p2)
                        .find(|&p2| p2 >= ex.context.len())
                        .unwrap_or(p)
                })
                .unwrap();
            let target_ts = stream[target_pos].timestamp;
            // every context item comes from an interaction strictly before
            // the target position
            for (off, &cid) in ex.context.iter().enumerate() {
                let pos = target_pos - ex.context.len() + off;
                assert_eq!(stream[pos].item_id, cid);
                assert!(stream[pos].timestamp <= target_ts);
            }
        }
    }

    #[test]
    fn holdout_drops_final_positions() {
        let ds = tiny_dataset();
        let with = ds.training_examples(10, false).len();
        let without = ds.training_examples(10, true).len();
        assert_eq!(with - without, 2);
    }

    #[test]
    fn context_truncates_to_max_len() {
        let ds = tiny_dataset();
        let examples = ds.training_examples(1, false);
        assert!(examples.iter().all(|e| e.context.len() == 1));
    }

    #[test]
    fn pool_indexes_cover_history_and_item_links() {
        let ds = tiny_dataset();
        let items = vec![
            EvidenceItem::new(0, EvidencePayload::History {
                user_id: 0, item_id: 0, rating: 4.0, timestamp: 10,
            }),
            EvidenceItem::new(1, EvidencePayload::Attribute {
                name: String::from("s0"), value: String::from("hi"), item_id: 2,
            }),
            EvidenceItem::new(2, EvidencePayload::KgTriplet {
                head: 0, relation: String::from("shares_s0"), tail: 2,
            }),
        ];
        let mut pool = EvidencePool::new(items).unwrap();
        pool.build_indexes(&ds);
        // user 0 touched items 0,1,2: own history (0), attribute of 2 (1), kg on 0/2 (2)
        assert_eq!(pool.user_candidates(0), &[0, 1, 2]);
        // user 1 touched items 0,2: no own history records
        assert_eq!(pool.user_candidates(1), &[1, 2]);
        assert_eq!(pool.item_candidates(2), &[1, 2]);
    }

    #[test]
    fn pool_rejects_non_dense_ids() {
        let items = vec![EvidenceItem::new(1, EvidencePayload::KgTriplet {
            head: 0, relation: String::from("r"), tail: 1,
        })];
        assert!(EvidencePool::new(items).is_err());
    }

    #[test]
    fn flatten_unflatten_round_trips() {
        let hp = HyperParams { dim: 4, max_seq_len: 3, seed: 9, ..HyperParams::default() };
        let params = ModelParams::init(5, &hp);
        let flat = params.flatten();
        let mut other = params.zeros_like();
        other.unflatten(&flat);
        assert_eq!(params.item_embeddings, other.item_embeddings);
        assert_eq!(params.ranker, other.ranker);
        assert_eq!(flat.len(), params.blocks().iter().map(|b| b.len()).sum::<usize>());
    }

    #[test]
    fn default_hyper_params_are_valid() {
        assert!(HyperParams::default().validate().is_ok());
        let hp = HyperParams::default();
        assert_eq!(hp.lambda1, 0.1);
        assert_eq!(hp.lambda2, 0.05);
        assert_eq!(hp.alpha, 0.6);
        assert_eq!(hp.beta, 0.5);
        assert_eq!(hp.gamma, 0.2);
        assert_eq!(hp.top_k, 20);
        assert_eq!(hp.dim, 128);
        assert_eq!(hp.learning_rate, 1e-4);
        assert_eq!(hp.batch_size, 256);
    }

    #[test]
    fn explanation_invariants() {
        let e = Explanation {
            text: String::from("x [E1: a] y [E2: b]"),
            citations: vec![1, 2],
            per_citation_weight: vec![0.7, 0.3],
        };
        assert!(e.check_invariants(5));
        assert!(!e.check_invariants(1));
    }
}
