//! Gold trees, static oracles for both systems, and the expansion of
//! NL-Covington sequences into Covington ones.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arcs::{Arc, ArcSet};
use crate::config::Configuration;
use crate::sentence::Sentence;
use crate::system::{SystemError, SystemKind, TransitionSystem};
use crate::transition::Transition;

/// Label given to root arcs of generated trees.
pub const ROOT_LABEL: &str = "root";

/// Labels drawn for non-root arcs of [`random_gold_tree`].
pub const RANDOM_LABELS: [&str; 4] = ["dep", "nsubj", "obj", "amod"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleError {
    MissingGold { token: usize },
    NotATree { node: usize },
    LengthMismatch { config: usize, gold: usize },
    /// The configuration holds an arc that is not a buildable gold arc.
    Inconsistent { arc: Arc },
    System(SystemError),
    /// A Covington transition with no NL-Covington counterpart.
    NoArcInNlSequence { index: usize },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::MissingGold { token } => write!(f, "token {token} has no gold head"),
            OracleError::NotATree { node } => {
                write!(f, "gold heads are not a tree rooted at 0 (node {node})")
            }
            OracleError::LengthMismatch { config, gold } => {
                write!(f, "configuration has {config} nodes but gold tree has {gold}")
            }
            OracleError::Inconsistent { arc } => {
                write!(f, "arc {arc} ({}) is not a non-root gold arc", arc.label)
            }
            OracleError::System(e) => e.fmt(f),
            OracleError::NoArcInNlSequence { index } => {
                write!(f, "No-Arc at position {index} of an NL-Covington sequence")
            }
        }
    }
}

impl core::error::Error for OracleError {}

impl From<SystemError> for OracleError {
    fn from(e: SystemError) -> Self {
        OracleError::System(e)
    }
}

/// A labeled dependency tree over `{0..n}` rooted at 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GoldTree {
    heads: Vec<(usize, String)>,
}

impl GoldTree {
    /// `heads[d - 1]` is the head and label of node `d`.
    pub fn new(heads: Vec<(usize, String)>) -> Result<Self, OracleError> {
        let n = heads.len();
        for (idx, (head, _)) in heads.iter().enumerate() {
            if *head > n || *head == idx + 1 {
                return Err(OracleError::NotATree { node: idx + 1 });
            }
        }
        for start in 1..=n {
            let mut node = start;
            let mut steps = 0;
            while node != 0 {
                steps += 1;
                if steps > n {
                    return Err(OracleError::NotATree { node: start });
                }
                node = heads[node - 1].0;
            }
        }
        Ok(GoldTree { heads })
    }

    pub fn from_sentence(sentence: &Sentence) -> Result<Self, OracleError> {
        let heads = sentence
            .tokens()
            .iter()
            .map(|t| match (t.gold_head, &t.gold_label) {
                (Some(h), Some(l)) => Ok((h, l.clone())),
                _ => Err(OracleError::MissingGold { token: t.id }),
            })
            .collect::<Result<Vec<_>, _>>()?;
        GoldTree::new(heads)
    }

    /// Decodes a Prüfer sequence over the `n + 1` nodes `{0..n}` and roots
    /// the resulting tree at 0. Every `(n + 1)^(n - 1)` sequence gives a
    /// distinct tree. `label` names each arc from its head and dependent.
    pub fn from_prufer(
        n: usize,
        code: &[usize],
        mut label: impl FnMut(usize, usize) -> String,
    ) -> Self {
        assert!(n >= 1, "a gold tree needs at least one token");
        assert_eq!(code.len(), n - 1, "Prüfer code must have length n - 1");
        let nodes = n + 1;
        let mut degree = vec![1usize; nodes];
        for &x in code {
            assert!(x < nodes, "Prüfer symbol out of range");
            degree[x] += 1;
        }
        let mut leaves: BTreeSet<usize> = (0..nodes).filter(|&v| degree[v] == 1).collect();
        let mut adjacency = vec![Vec::new(); nodes];
        for &x in code {
            let leaf = leaves.pop_first().expect("a leaf always exists");
            adjacency[leaf].push(x);
            adjacency[x].push(leaf);
            degree[x] -= 1;
            if degree[x] == 1 {
                leaves.insert(x);
            }
        }
        let u = leaves.pop_first().expect("two leaves remain");
        let v = leaves.pop_first().expect("two leaves remain");
        adjacency[u].push(v);
        adjacency[v].push(u);

        let mut heads = vec![(usize::MAX, String::new()); n];
        let mut queue = VecDeque::from([0usize]);
        let mut seen = vec![false; nodes];
        seen[0] = true;
        while let Some(h) = queue.pop_front() {
            for &d in &adjacency[h] {
                if !seen[d] {
                    seen[d] = true;
                    heads[d - 1] = (h, label(h, d));
                    queue.push_back(d);
                }
            }
        }
        GoldTree { heads }
    }

    pub fn len(&self) -> usize {
        self.heads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heads.is_empty()
    }

    /// Head and label of node `d` (1-based).
    pub fn head(&self, d: usize) -> Option<(usize, &str)> {
        d.checked_sub(1)
            .and_then(|i| self.heads.get(i))
            .map(|(h, l)| (*h, l.as_str()))
    }

    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        self.heads
            .iter()
            .enumerate()
            .map(|(i, (h, l))| Arc::new(*h, i + 1, l.as_str()))
    }

    pub fn non_root_arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        self.arcs().filter(|a| a.head != 0)
    }

    pub fn non_root_count(&self) -> usize {
        self.heads.iter().filter(|(h, _)| *h != 0).count()
    }

    /// All arcs, including root arcs, as an [`ArcSet`].
    pub fn arc_set(&self) -> ArcSet {
        self.arcs()
            .collect::<Result<ArcSet, _>>()
            .expect("validated tree")
    }

    /// Distinct labels in order of first appearance.
    pub fn label_set(&self) -> Vec<String> {
        let mut labels: Vec<String> = Vec::new();
        for (_, l) in &self.heads {
            if !labels.contains(l) {
                labels.push(l.clone());
            }
        }
        labels
    }

    /// Every arc of `c` must be a non-root gold arc.
    fn checked_against(&self, c: &Configuration) -> Result<(), OracleError> {
        if c.len() != self.len() {
            return Err(OracleError::LengthMismatch {
                config: c.len(),
                gold: self.len(),
            });
        }
        for arc in c.arcs().iter() {
            let gold = self.head(arc.dependent);
            if arc.head == 0 || gold != Some((arc.head, arc.label.as_str())) {
                return Err(OracleError::Inconsistent { arc });
            }
        }
        Ok(())
    }
}

/// Uniformly samples a tree rooted at 0 over `{0..n}` (any of the
/// `(n + 1)^(n - 1)` labeled rooted trees, projective or not).
pub fn random_gold_tree(n: usize, seed: u64) -> GoldTree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let code: Vec<usize> = (0..n.saturating_sub(1))
        .map(|_| rng.random_range(0..=n))
        .collect();
    GoldTree::from_prufer(n, &code, |h, _| {
        if h == 0 {
            String::from(ROOT_LABEL)
        } else {
            String::from(*RANDOM_LABELS.choose(&mut rng).expect("non-empty"))
        }
    })
}

/// Every tree rooted at 0 over `{0..n}`, with non-root arcs labeled `dep`.
pub fn all_gold_trees(n: usize) -> impl Iterator<Item = GoldTree> {
    let len = n.saturating_sub(1);
    let base = n + 1;
    let total = base.pow(len as u32);
    (0..total).map(move |mut index| {
        let mut code = vec![0; len];
        for slot in code.iter_mut() {
            *slot = index % base;
            index /= base;
        }
        GoldTree::from_prufer(n, &code, |h, _| {
            String::from(if h == 0 { ROOT_LABEL } else { "dep" })
        })
    })
}

/// The pending gold arc between `j` and the closest node of lambda1, as
/// `(k, transition)`.
fn closest_pending(c: &Configuration, gold: &GoldTree) -> Option<Transition> {
    let j = c.right_focus()?;
    let head_of_j = gold.head(j).filter(|_| !c.arcs().has_head(j));
    (1..=c.lambda1().len()).find_map(|k| {
        let i = c.left_at(k).expect("k within lambda1");
        if let Some((h, label)) = head_of_j {
            if h == i {
                return Some(Transition::right(k, label));
            }
        }
        match gold.head(i) {
            Some((h, label)) if h == j && !c.arcs().has_head(i) => {
                Some(Transition::left(k, label))
            }
            _ => None,
        }
    })
}

/// NL-Covington static oracle: build the shortest pending gold arc
/// involving the right focus word, or Shift when none is left. Root arcs
/// are never built.
pub fn nl_oracle_step(c: &Configuration, gold: &GoldTree) -> Result<Transition, OracleError> {
    if c.is_terminal() {
        return Err(SystemError::Terminal.into());
    }
    gold.checked_against(c)?;
    Ok(closest_pending(c, gold).unwrap_or(Transition::Shift))
}

/// Covington static oracle: arc between the focus words if it is pending,
/// No-Arc while some pending arc links `j` to a node further left, else
/// Shift.
pub fn cov_oracle_step(c: &Configuration, gold: &GoldTree) -> Result<Transition, OracleError> {
    let j = c.right_focus().ok_or(SystemError::Terminal)?;
    gold.checked_against(c)?;
    let Some(i) = c.left_at(1) else {
        return Ok(Transition::Shift);
    };
    let pending = |x: usize| {
        let j_to_x = gold.head(j).is_some_and(|(h, _)| h == x) && !c.arcs().has_head(j);
        let x_to_j = gold.head(x).is_some_and(|(h, _)| h == j) && !c.arcs().has_head(x);
        (j_to_x, x_to_j)
    };
    match pending(i) {
        (true, _) => return Ok(Transition::right(1, gold.head(j).expect("gold").1)),
        (_, true) => return Ok(Transition::left(1, gold.head(i).expect("gold").1)),
        _ => {}
    }
    let further = c.lambda1()[..c.lambda1().len() - 1]
        .iter()
        .any(|&x| pending(x) != (false, false));
    Ok(if further { Transition::NoArc } else { Transition::Shift })
}

/// Oracle step for whichever system `sys` is.
pub fn oracle_step(
    sys: &TransitionSystem,
    c: &Configuration,
    gold: &GoldTree,
) -> Result<Transition, OracleError> {
    match sys.kind() {
        SystemKind::Covington => cov_oracle_step(c, gold),
        SystemKind::NlCovington => nl_oracle_step(c, gold),
    }
}

/// Runs the static oracle from the initial configuration to termination.
pub fn oracle_sequence(
    sys: &TransitionSystem,
    gold: &GoldTree,
) -> Result<Vec<Transition>, OracleError> {
    let mut c = Configuration::initial(gold.len());
    let mut seq = Vec::new();
    while !c.is_terminal() {
        let t = oracle_step(sys, &c, gold)?;
        sys.apply(&mut c, &t)?;
        seq.push(t);
    }
    Ok(seq)
}

/// Rewrites each `LA(k)`/`RA(k)` as `k - 1` No-Arcs followed by the k = 1
/// arc transition.
pub fn expand_to_covington(seq: &[Transition]) -> Result<Vec<Transition>, OracleError> {
    let mut out = Vec::with_capacity(seq.len());
    for (index, t) in seq.iter().enumerate() {
        match t {
            Transition::NoArc => return Err(OracleError::NoArcInNlSequence { index }),
            Transition::Shift => out.push(Transition::Shift),
            Transition::LeftArc { k, label } => {
                out.extend(core::iter::repeat_n(Transition::NoArc, k - 1));
                out.push(Transition::left(1, label.as_str()));
            }
            Transition::RightArc { k, label } => {
                out.extend(core::iter::repeat_n(Transition::NoArc, k - 1));
                out.push(Transition::right(1, label.as_str()));
            }
        }
    }
    Ok(out)
}
