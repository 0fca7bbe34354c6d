//! Random forest for anomaly detection: depth-bounded CART trees on
//! bootstrap samples with random feature subsets per split. Training is
//! deterministic for a fixed seed, and the vote fraction is exact and
//! re-countable per tree.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::detect::features::AnomalyFeatureVector;
use crate::detect::DetectError;
use crate::scalar::{cast, Scalar};
use crate::Real;

pub const MODEL_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
enum Node<T> {
    Split { feature: usize, threshold: T, left: usize, right: usize },
    Leaf { anomalous: bool },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Tree<T> {
    nodes: Vec<Node<T>>,
}

impl<T: Scalar> Tree<T> {
    fn predict(&self, features: &[T]) -> bool {
        let mut idx = 0;
        loop {
            match &self.nodes[idx] {
                Node::Leaf { anomalous } => return *anomalous,
                Node::Split { feature, threshold, left, right } => {
                    idx = if features[*feature] <= *threshold { *left } else { *right };
                }
            }
        }
    }
}

/// Training parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForestParams {
    pub n_trees: usize,
    pub max_depth: usize,
    pub min_leaf: usize,
    pub seed: u64,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams { n_trees: 25, max_depth: 6, min_leaf: 2, seed: 17 }
    }
}

/// Trained ensemble. Serializes to a versioned JSON model file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Forest<T> {
    pub version: u32,
    pub n_features: usize,
    pub params: ForestParams,
    trees: Vec<Tree<T>>,
}

/// Train an ensemble of depth-bounded trees, each on a bootstrap sample with
/// a random feature subset considered at every split.
pub fn train_forest<T: Scalar>(
    labeled: &[(Vec<T>, bool)],
    params: &ForestParams,
) -> Result<Forest<T>, DetectError> {
    if params.n_trees == 0 {
        return Err(DetectError::DegenerateTraining("zero trees requested".into()));
    }
    let positives = labeled.iter().filter(|(_, y)| *y).count();
    if labeled.is_empty() || positives == 0 || positives == labeled.len() {
        return Err(DetectError::DegenerateTraining(
            "training set must contain both classes".into(),
        ));
    }
    let n_features = labeled[0].0.len();
    if labeled.iter().any(|(x, _)| x.len() != n_features) {
        return Err(DetectError::DegenerateTraining("ragged feature vectors".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mtry = (n_features as f64).sqrt().ceil() as usize;
    let mut trees = Vec::with_capacity(params.n_trees);
    for _ in 0..params.n_trees {
        let sample: Vec<usize> =
            (0..labeled.len()).map(|_| rng.gen_range(0..labeled.len())).collect();
        let mut nodes = Vec::new();
        grow(labeled, &sample, 0, params, mtry, &mut rng, &mut nodes);
        trees.push(Tree { nodes });
    }
    Ok(Forest { version: MODEL_VERSION, n_features, params: params.clone(), trees })
}

fn leaf_label<T: Scalar>(labeled: &[(Vec<T>, bool)], idxs: &[usize]) -> bool {
    let pos = idxs.iter().filter(|&&i| labeled[i].1).count();
    // ties resolve to anomalous, matching the ensemble-level fail-safe rule
    pos * 2 >= idxs.len()
}

fn gini<T: Scalar>(labeled: &[(Vec<T>, bool)], idxs: &[usize]) -> f64 {
    if idxs.is_empty() {
        return 0.0;
    }
    let p = idxs.iter().filter(|&&i| labeled[i].1).count() as f64 / idxs.len() as f64;
    2.0 * p * (1.0 - p)
}

fn grow<T: Scalar>(
    labeled: &[(Vec<T>, bool)],
    idxs: &[usize],
    depth: usize,
    params: &ForestParams,
    mtry: usize,
    rng: &mut ChaCha8Rng,
    nodes: &mut Vec<Node<T>>,
) -> usize {
    let node_idx = nodes.len();
    let impurity = gini(labeled, idxs);
    if depth >= params.max_depth || idxs.len() < 2 * params.min_leaf || impurity == 0.0 {
        nodes.push(Node::Leaf { anomalous: leaf_label(labeled, idxs) });
        return node_idx;
    }
    let n_features = labeled[0].0.len();
    // random feature subset for this split
    let mut features: Vec<usize> = (0..n_features).collect();
    for i in 0..mtry.min(n_features) {
        let j = rng.gen_range(i..n_features);
        features.swap(i, j);
    }
    features.truncate(mtry.min(n_features));
    features.sort_unstable();

    let mut best = best_split(labeled, idxs, &features, params, impurity);
    if best.is_none() {
        // the subset held no informative feature; search them all before
        // giving up on the node
        let all: Vec<usize> = (0..n_features).collect();
        best = best_split(labeled, idxs, &all, params, impurity);
    }
    match best {
        let mut values: Vec<T> = idxs.iter().map(|&i| labeled[i].0[f]).collect();
        values.sort_by(|a, b| a.partial_cmp(b).expect("finite features"));
        values.dedup();
        for pair in values.windows(2) {
            let threshold = (pair[0] + pair[1]) / cast::<T>(2.0);
            let (mut left, mut right) = (Vec::new(), Vec::new());
            for &i in idxs {
                if labeled[i].0[f] <= threshold {
                    left.push(i);
                } else {
                    right.push(i);
                }
            }
            if left.len() < params.min_leaf || right.len() < params.min_leaf {
                continue;
            }
            let w_l = left.len() as f64 / idxs.len() as f64;
            let gain = impurity
                - w_l * gini(labeled, &left)
                - (1.0 - w_l) * gini(labeled, &right);
            let better = match &best {
                None => gain > 1e-12,
                Some((g, bf, bt)) => {
                    gain > *g + 1e-12
                        || ((gain - *g).abs() <= 1e-12
                            && (f < *bf || (f == *bf && threshold < *bt)))
                }
            };
            if better {
                best = Some((gain, f, threshold));
            }
        }
    }
    match best {
        None => {
            nodes.push(Node::Leaf { anomalous: leaf_label(labeled, idxs) });
            node_idx
        }
        Some((_, feature, threshold)) => {
            let (mut left_idx, mut right_idx) = (Vec::new(), Vec::new());
            for &i in idxs {
                if labeled[i].0[feature] <= threshold {
                    left_idx.push(i);
                } else {
                    right_idx.push(i);
                }
            }
            nodes.push(Node::Split { feature, threshold, left: 0, right: 0 });
            let left = grow(labeled, &left_idx, depth + 1, params, mtry, rng, nodes);
            let right = grow(labeled, &right_idx, depth + 1, params, mtry, rng, nodes);
            if let Node::Split { left: l, right: r, .. } = &mut nodes[node_idx] {
                *l = left;
                *r = right;
            }
            node_idx
        }
    }
}

impl<T: Scalar> Forest<T> {
    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }

    /// Number of trees voting anomalous.
    pub fn votes(&self, features: &[T]) -> usize {
        self.trees.iter().filter(|t| t.predict(features)).count()
    }

    /// Exact vote fraction in [0, 1].
    pub fn score(&self, features: &[T]) -> f64 {
        self.votes(features) as f64 / self.trees.len() as f64
    }

    /// Per-tree votes, for re-counting the score.
    pub fn tree_votes(&self, features: &[T]) -> Vec<bool> {
        self.trees.iter().map(|t| t.predict(features)).collect()
    }
}

impl<T: Scalar + Serialize> Forest<T> {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("forest serializes")
    }
}

impl<T: Scalar + DeserializeOwned> Forest<T> {
    pub fn from_json(s: &str) -> Result<Forest<T>, DetectError> {
        let forest: Forest<T> =
            serde_json::from_str(s).map_err(|e| DetectError::ModelFormat(e.to_string()))?;
        if forest.version != MODEL_VERSION {
            return Err(DetectError::ModelFormat(format!(
                "unsupported model version {}",
                forest.version
            )));
        }
        Ok(forest)
    }
}

/// Classifier output: the verdict, the room it points to, and the exact vote
/// fraction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnomalyVerdict {
    pub anomalous: bool,
    pub room: String,
    pub score: f64,
}

/// Normalization used to pick the room with the dominant contribution.
const DWELL_SCALE: Real = 300.0;
const OPENS_SCALE: Real = 5.0;

/// Vote the forest on a feature vector. Score is the fraction of trees
/// voting anomalous; a tied score of exactly 0.5 resolves to anomalous
/// (false alarms cost less than misses). The room is the one whose feature
/// block contributes most.
pub fn classify_anomaly<T: Scalar>(forest: &Forest<T>, fv: &AnomalyFeatureVector) -> AnomalyVerdict {
    let features: Vec<T> = fv.to_vec().iter().map(|x| cast::<T>(*x)).collect();
    let score = forest.score(&features);
    let anomalous = score >= 0.5;
    let room = fv
        .rooms
        .iter()
        .map(|r| {
            let activation = r.pressure_dwell_s / DWELL_SCALE
                + r.contact_open_count / OPENS_SCALE
                + r.pir_activity_fraction;
            (r.room.clone(), activation)
        })
        .max_by(|a, b| a.1.partial_cmp(&b.1).expect("finite activation"))
        .map(|(room, _)| room)
        .unwrap_or_default();
    AnomalyVerdict { anomalous, room, score }
}
