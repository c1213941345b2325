//! Linear transition scorer trained with the averaged perceptron along
//! static-oracle paths, and greedy decoding.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arcs::ArcSet;
use crate::config::Configuration;
use crate::features::{FeatureError, FeatureVector, Featurizer};
use crate::oracle::{oracle_step, GoldTree, OracleError};
use crate::sentence::Sentence;
use crate::system::{SystemError, SystemKind, TransitionSystem};
use crate::transition::{Move, Transition};

/// Transition classes: 0 Shift, 1 No-Arc, then Left-Arc and Right-Arc
/// interleaved per label (`2 + 2l`, `3 + 2l`).
pub const SHIFT_CLASS: usize = 0;
pub const NO_ARC_CLASS: usize = 1;

pub fn class_count(labels: usize) -> usize {
    2 + 2 * labels
}

#[derive(Clone, Debug, PartialEq)]
pub enum ModelError {
    EmptyCorpus,
    NoEpochs,
    LengthMismatch { index: usize, sentence: usize, tree: usize },
    UnknownLabel(String),
    /// A weight row for a class the system does not have.
    InvalidClass(usize),
    BadWeight { class: usize, feature: u64 },
    Oracle { index: usize, error: OracleError },
    Feature(FeatureError),
    System(SystemError),
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::EmptyCorpus => f.write_str("training corpus is empty"),
            ModelError::NoEpochs => f.write_str("at least one epoch is required"),
            ModelError::LengthMismatch {
                index,
                sentence,
                tree,
            } => write!(
                f,
                "sentence {index} has {sentence} tokens but its tree has {tree} nodes"
            ),
            ModelError::UnknownLabel(l) => write!(f, "label `{l}` is not in the label set"),
            ModelError::InvalidClass(c) => write!(f, "transition class {c} is invalid here"),
            ModelError::BadWeight { class, feature } => {
                write!(f, "non-finite weight for class {class}, feature {feature}")
            }
            ModelError::Oracle { index, error } => write!(f, "sentence {index}: {error}"),
            ModelError::Feature(e) => e.fmt(f),
            ModelError::System(e) => e.fmt(f),
        }
    }
}

impl core::error::Error for ModelError {}

impl From<FeatureError> for ModelError {
    fn from(e: FeatureError) -> Self {
        ModelError::Feature(e)
    }
}

impl From<SystemError> for ModelError {
    fn from(e: SystemError) -> Self {
        ModelError::System(e)
    }
}

/// Weight rows indexed by feature id, one entry per transition class.
pub type WeightTable = BTreeMap<u64, Vec<f64>>;

#[derive(Clone, Debug, PartialEq)]
pub struct Model {
    system: TransitionSystem,
    featurizer: Featurizer,
    weights: WeightTable,
    averaged: WeightTable,
    update_count: u64,
}

impl Model {
    /// A model with all weights zero.
    pub fn zero(system: TransitionSystem, hash_seed: u64) -> Self {
        Model {
            system,
            featurizer: Featurizer::new(hash_seed),
            weights: WeightTable::new(),
            averaged: WeightTable::new(),
            update_count: 0,
        }
    }

    /// Rebuilds a model from stored averaged weights `(class, feature, weight)`.
    pub fn from_weights(
        system: TransitionSystem,
        hash_seed: u64,
        entries: impl IntoIterator<Item = (usize, u64, f64)>,
    ) -> Result<Self, ModelError> {
        let mut model = Model::zero(system, hash_seed);
        let classes = model.classes();
        for (class, feature, weight) in entries {
            if !model.class_is_valid(class) {
                return Err(ModelError::InvalidClass(class));
            }
            if !weight.is_finite() {
                return Err(ModelError::BadWeight { class, feature });
            }
            model
                .averaged
                .entry(feature)
                .or_insert_with(|| vec![0.0; classes])[class] = weight;
        }
        model.weights = model.averaged.clone();
        Ok(model)
    }

    pub fn system(&self) -> &TransitionSystem {
        &self.system
    }

    pub fn kind(&self) -> SystemKind {
        self.system.kind()
    }

    pub fn labels(&self) -> &[String] {
        self.system.labels()
    }

    pub fn hash_seed(&self) -> u64 {
        self.featurizer.hash_seed()
    }

    pub fn featurizer(&self) -> &Featurizer {
        &self.featurizer
    }

    pub fn update_count(&self) -> u64 {
        self.update_count
    }

    pub fn classes(&self) -> usize {
        class_count(self.system.labels().len())
    }

    fn class_is_valid(&self, class: usize) -> bool {
        class < self.classes() && !(class == NO_ARC_CLASS && self.kind() == SystemKind::NlCovington)
    }

    /// Class of a labeled transition; `None` for unknown labels.
    pub fn class_of(&self, t: &Transition) -> Option<usize> {
        match t {
            Transition::Shift => Some(SHIFT_CLASS),
            Transition::NoArc => Some(NO_ARC_CLASS),
            Transition::LeftArc { label, .. } => self.system.label_index(label).map(|l| 2 + 2 * l),
            Transition::RightArc { label, .. } => self.system.label_index(label).map(|l| 3 + 2 * l),
        }
    }

    /// Nonzero averaged weights ordered by `(class, feature)`.
    pub fn averaged_weights(&self) -> Vec<(usize, u64, f64)> {
        let mut out: Vec<(usize, u64, f64)> = self
            .averaged
            .iter()
            .flat_map(|(&f, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(_, w)| **w != 0.0)
                    .map(move |(c, w)| (c, f, *w))
            })
            .collect();
        out.sort_by_key(|&(c, f, _)| (c, f));
        out
    }

    /// Dot product of `fv` with the averaged weight row of `t`'s class.
    /// Transitions with unknown labels score negative infinity.
    pub fn score(&self, fv: &FeatureVector, t: &Transition) -> f64 {
        match self.class_of(t) {
            Some(class) if class < self.classes() => dot(&self.averaged, fv, class),
            _ => f64::NEG_INFINITY,
        }
    }

    /// Parses greedily with the averaged weights and attaches headless
    /// nodes to the root.
    pub fn greedy_parse(&self, sentence: &Sentence, root_label: &str) -> Result<ArcSet, ModelError> {
        let (arcs, _) = self.greedy_parse_traced(sentence, root_label)?;
        Ok(arcs)
    }

    /// Like [`Model::greedy_parse`], also returning the transitions taken.
    pub fn greedy_parse_traced(
        &self,
        sentence: &Sentence,
        root_label: &str,
    ) -> Result<(ArcSet, Vec<Transition>), ModelError> {
        let mut c = Configuration::initial(sentence.len());
        let mut seq = Vec::new();
        while !c.is_terminal() {
            let t = best_transition(&self.system, &self.featurizer, &self.averaged, sentence, &c)?;
            self.system.apply(&mut c, &t)?;
            seq.push(t);
        }
        Ok((c.into_arcs().with_root(sentence.len(), root_label), seq))
    }
}

fn dot(table: &WeightTable, fv: &FeatureVector, class: usize) -> f64 {
    fv.iter()
        .filter_map(|(f, count)| table.get(&f).map(|row| row[class] * f64::from(count)))
        .sum()
}

/// Highest-scoring legal labeled transition. Ties go to the earliest
/// candidate in the order Shift, No-Arc, Left-Arc (k ascending), Right-Arc
/// (k ascending), labels in label-set order.
fn best_transition(
    system: &TransitionSystem,
    featurizer: &Featurizer,
    table: &WeightTable,
    sentence: &Sentence,
    c: &Configuration,
) -> Result<Transition, ModelError> {
    let classes = class_count(system.labels().len());
    let mut scores = vec![0.0; classes];
    let mut best: Option<(f64, Move, usize)> = None;
    for mv in system.legal_moves(c)? {
        let fv = featurizer.features(sentence, c, mv)?;
        scores.iter_mut().for_each(|s| *s = 0.0);
        for (f, count) in fv.iter() {
            if let Some(row) = table.get(&f) {
                for (s, w) in scores.iter_mut().zip(row) {
                    *s += w * f64::from(count);
                }
            }
        }
        let candidates: &mut dyn Iterator<Item = usize> = match mv {
            Move::Shift => &mut core::iter::once(SHIFT_CLASS),
            Move::NoArc => &mut core::iter::once(NO_ARC_CLASS),
            Move::LeftArc(_) => &mut (0..system.labels().len()).map(|l| 2 + 2 * l),
            Move::RightArc(_) => &mut (0..system.labels().len()).map(|l| 3 + 2 * l),
        };
        for class in candidates {
            let s = scores[class];
            if best.is_none_or(|(b, _, _)| s > b) {
                best = Some((s, mv, class));
            }
        }
    }
    let (_, mv, class) = best.expect("Shift is always legal");
    Ok(match mv {
        Move::Shift | Move::NoArc => mv.with_label(""),
        _ => mv.with_label(system.labels()[(class - 2) / 2].as_str()),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrainOptions {
    pub epochs: usize,
    /// Seeds the per-epoch corpus shuffle.
    pub seed: u64,
    pub hash_seed: u64,
}

impl Default for TrainOptions {
    fn default() -> Self {
        TrainOptions {
            epochs: 10,
            seed: 1,
            hash_seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Training {
    pub model: Model,
    /// Oracle configurations where the model disagreed with the oracle,
    /// one count per epoch.
    pub mismatches: Vec<usize>,
}

/// Labels of all gold arcs in a corpus, in order of first appearance.
pub fn corpus_labels<'a>(trees: impl IntoIterator<Item = &'a GoldTree>) -> Vec<String> {
    let mut labels: Vec<String> = Vec::new();
    for tree in trees {
        for l in tree.label_set() {
            if !labels.contains(&l) {
                labels.push(l);
            }
        }
    }
    labels
}

/// Averaged-perceptron training on static-oracle configurations only.
pub fn train(
    corpus: &[(Sentence, GoldTree)],
    system: &TransitionSystem,
    opts: &TrainOptions,
) -> Result<Training, ModelError> {
    if corpus.is_empty() {
        return Err(ModelError::EmptyCorpus);
    }
    if opts.epochs == 0 {
        return Err(ModelError::NoEpochs);
    }
    for (index, (sentence, tree)) in corpus.iter().enumerate() {
        if sentence.len() != tree.len() {
            return Err(ModelError::LengthMismatch {
                index,
                sentence: sentence.len(),
                tree: tree.len(),
            });
        }
        for arc in tree.non_root_arcs() {
            if system.label_index(&arc.label).is_none() {
                return Err(ModelError::UnknownLabel(arc.label));
            }
        }
    }

    let mut model = Model::zero(system.clone(), opts.hash_seed);
    let classes = model.classes();
    // Running sums of `time * delta` for lazy averaging.
    let mut accumulated = WeightTable::new();
    let mut time: u64 = 1;
    let mut order: Vec<usize> = (0..corpus.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut mismatches = Vec::with_capacity(opts.epochs);

    for _ in 0..opts.epochs {
        order.shuffle(&mut rng);
        let mut wrong = 0;
        for &index in &order {
            let (sentence, tree) = &corpus[index];
            let mut c = Configuration::initial(sentence.len());
            while !c.is_terminal() {
                let gold = oracle_step(system, &c, tree)
                    .map_err(|error| ModelError::Oracle { index, error })?;
                let predicted =
                    best_transition(system, &model.featurizer, &model.weights, sentence, &c)?;
                if predicted != gold {
                    wrong += 1;
                    let gold_fv = model.featurizer.features(sentence, &c, gold.skeleton())?;
                    let pred_fv = model.featurizer.features(sentence, &c, predicted.skeleton())?;
                    let gold_class = model.class_of(&gold).expect("label checked");
                    let pred_class = model.class_of(&predicted).expect("system label");
                    for (fv, class, sign) in [(&gold_fv, gold_class, 1.0), (&pred_fv, pred_class, -1.0)] {
                        for (f, count) in fv.iter() {
                            let delta = sign * f64::from(count);
                            model.weights.entry(f).or_insert_with(|| vec![0.0; classes])[class] +=
                                delta;
                            accumulated.entry(f).or_insert_with(|| vec![0.0; classes])[class] +=
                                time as f64 * delta;
                        }
                    }
                    model.update_count += 1;
                }
                system.apply(&mut c, &gold)?;
                time += 1;
            }
        }
        mismatches.push(wrong);
    }

    let t = time as f64;
    model.averaged = model
        .weights
        .iter()
        .map(|(&f, row)| {
            let acc = &accumulated[&f];
            let avg = row.iter().zip(acc).map(|(w, a)| w - a / t).collect();
            (f, avg)
        })
        .collect();
    Ok(Training { model, mismatches })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::FeatureHasher;
    use crate::sentence::Token;
    use alloc::string::ToString;

    fn example() -> (Sentence, GoldTree) {
        let heads = [(0, "root"), (1, "a"), (1, "b"), (5, "c"), (1, "d")];
        let pos = ["V", "N", "N", "D", "N"];
        let toks = heads
            .iter()
            .zip(pos)
            .enumerate()
            .map(|(i, ((h, l), p))| Token::new(i + 1, alloc::format!("w{i}"), p).with_gold(*h, *l))
            .collect();
        let s = Sentence::new(toks).unwrap();
        let g = GoldTree::from_sentence(&s).unwrap();
        (s, g)
    }

    fn system(kind: SystemKind, g: &GoldTree) -> TransitionSystem {
        TransitionSystem::new(kind, g.label_set()).unwrap()
    }

    #[test]
    fn zero_model_scores_zero() {
        let (_, g) = example();
        let m = Model::zero(system(SystemKind::NlCovington, &g), 3);
        let fv = FeatureVector::from_ids(vec![1, 2, 3]);
        assert_eq!(m.score(&fv, &Transition::Shift), 0.0);
        assert_eq!(m.score(&fv, &Transition::right(2, "a")), 0.0);
        assert_eq!(m.score(&fv, &Transition::right(2, "nope")), f64::NEG_INFINITY);
    }

    #[test]
    fn single_weight_and_additivity() {
        let (_, g) = example();
        let sys = system(SystemKind::NlCovington, &g);
        let m = Model::from_weights(sys, 0, [(3, 42, 1.5), (3, 7, -0.25)]).unwrap();
        let t = Transition::right(1, "root");
        assert_eq!(m.class_of(&t), Some(3));
        let f1 = FeatureVector::from_ids(vec![42]);
        let f2 = FeatureVector::from_ids(vec![7, 9]);
        assert_eq!(m.score(&f1, &t), 1.5);
        assert_eq!(m.score(&f1.union(&f2), &t), m.score(&f1, &t) + m.score(&f2, &t));
        assert_eq!(m.score(&FeatureVector::from_ids(vec![42, 42]), &t), 3.0);
    }

    #[test]
    fn stored_weights_are_validated() {
        let (_, g) = example();
        let nl = system(SystemKind::NlCovington, &g);
        assert_eq!(
            Model::from_weights(nl.clone(), 0, [(NO_ARC_CLASS, 1, 1.0)]),
            Err(ModelError::InvalidClass(NO_ARC_CLASS))
        );
        assert_eq!(
            Model::from_weights(nl.clone(), 0, [(99, 1, 1.0)]),
            Err(ModelError::InvalidClass(99))
        );
        assert!(Model::from_weights(nl, 0, [(0, 1, f64::NAN)]).is_err());
        let cov = system(SystemKind::Covington, &g);
        assert!(Model::from_weights(cov, 0, [(NO_ARC_CLASS, 1, 1.0)]).is_ok());
    }

    #[test]
    fn one_token_sentence_gets_root_arc() {
        let (_, g) = example();
        let m = Model::zero(system(SystemKind::NlCovington, &g), 0);
        let s = Sentence::new(vec![Token::new(1, "x", "N")]).unwrap();
        let (arcs, seq) = m.greedy_parse_traced(&s, "ROOT").unwrap();
        assert_eq!(seq, vec![Transition::Shift]);
        assert_eq!(arcs.head_of(1), Some((0, "ROOT")));
    }

    #[test]
    fn ties_resolve_in_canonical_order() {
        let (s, g) = example();
        let m = Model::zero(system(SystemKind::Covington, &g), 0);
        // All scores are zero, so Shift always wins.
        let (arcs, seq) = m.greedy_parse_traced(&s, "ROOT").unwrap();
        assert!(seq.iter().all(|t| *t == Transition::Shift));
        assert!(arcs.iter().all(|a| a.head == 0));

        // Favour every Right-Arc label equally through the arc bias: the
        // first label at the smallest k must win.
        let h = FeatureHasher::new(0);
        let bias = h.hash(&["arc.bias"]);
        let sys = system(SystemKind::NlCovington, &g);
        let labels = sys.labels().len();
        let entries: Vec<_> = (0..labels).map(|l| (3 + 2 * l, bias, 1.0)).collect();
        let m = Model::from_weights(sys, 0, entries).unwrap();
        let c = Configuration::from_parts(vec![1, 2], vec![], vec![3, 4, 5], ArcSet::new()).unwrap();
        let t = best_transition(m.system(), m.featurizer(), &m.averaged, &s, &c).unwrap();
        assert_eq!(t, Transition::right(1, "root"));
    }

    #[test]
    fn training_converges_on_one_sentence() {
        let (s, g) = example();
        for kind in [SystemKind::Covington, SystemKind::NlCovington] {
            let sys = system(kind, &g);
            let opts = TrainOptions {
                epochs: 20,
                seed: 1,
                hash_seed: 0,
            };
            let training = train(&[(s.clone(), g.clone())], &sys, &opts).unwrap();
            assert_eq!(*training.mismatches.last().unwrap(), 0, "{kind}");
            let parsed = training.model.greedy_parse(&s, "root").unwrap();
            assert_eq!(parsed, g.arc_set(), "{kind}");
        }
    }

    #[test]
    fn training_is_deterministic() {
        let (s, g) = example();
        let sys = system(SystemKind::NlCovington, &g);
        let corpus = vec![(s.clone(), g.clone()), (s, g)];
        let opts = TrainOptions {
            epochs: 3,
            seed: 9,
            hash_seed: 4,
        };
        let a = train(&corpus, &sys, &opts).unwrap();
        let b = train(&corpus, &sys, &opts).unwrap();
        assert_eq!(a.model.averaged_weights(), b.model.averaged_weights());
        assert_eq!(a, b);
    }

    #[test]
    fn training_errors() {
        let (s, g) = example();
        let sys = system(SystemKind::NlCovington, &g);
        let opts = TrainOptions::default();
        assert_eq!(train(&[], &sys, &opts).unwrap_err(), ModelError::EmptyCorpus);
        let zero = TrainOptions { epochs: 0, ..opts };
        assert_eq!(
            train(&[(s.clone(), g.clone())], &sys, &zero).unwrap_err(),
            ModelError::NoEpochs
        );
        let short = Sentence::new(vec![Token::new(1, "x", "N")]).unwrap();
        assert!(matches!(
            train(&[(short, g.clone())], &sys, &opts),
            Err(ModelError::LengthMismatch { index: 0, .. })
        ));
        let narrow = TransitionSystem::new(SystemKind::NlCovington, ["root"]).unwrap();
        assert_eq!(
            train(&[(s, g)], &narrow, &opts).unwrap_err(),
            ModelError::UnknownLabel("a".to_string())
        );
    }

    #[test]
    fn zero_feature_training_gives_zero_model() {
        // A one-token corpus has a single Shift, which the zero model
        // already predicts, so no update ever happens.
        let s = Sentence::new(vec![Token::new(1, "x", "N").with_gold(0, "root")]).unwrap();
        let g = GoldTree::from_sentence(&s).unwrap();
        let sys = system(SystemKind::NlCovington, &g);
        let opts = TrainOptions { epochs: 1, ..TrainOptions::default() };
        let t = train(&[(s, g)], &sys, &opts).unwrap();
        assert_eq!(t.model.update_count(), 0);
        assert!(t.model.averaged_weights().is_empty());
    }
}
