//! Labeled dependency arcs and single-headed, acyclic arc sets.

use alloc::collections::BTreeMap;
use alloc::string::String;
use core::fmt;

/// A labeled dependency `head -> dependent`. Node 0 is the artificial root.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arc {
    pub head: usize,
    pub dependent: usize,
    pub label: String,
}

impl Arc {
    pub fn new(head: usize, dependent: usize, label: impl Into<String>) -> Self {
        Arc {
            head,
            dependent,
            label: label.into(),
        }
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.head, self.dependent)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArcError {
    SelfLoop { node: usize },
    /// Node 0 can never be a dependent.
    RootDependent,
    SingleHead { dependent: usize, existing_head: usize },
    Cycle { head: usize, dependent: usize },
}

impl fmt::Display for ArcError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArcError::SelfLoop { node } => write!(f, "arc {node}->{node} is a self loop"),
            ArcError::RootDependent => write!(f, "the root cannot be a dependent"),
            ArcError::SingleHead {
                dependent,
                existing_head,
            } => write!(f, "node {dependent} already has head {existing_head}"),
            ArcError::Cycle { head, dependent } => {
                write!(f, "arc {head}->{dependent} would close a cycle")
            }
        }
    }
}

impl core::error::Error for ArcError {}

/// A set of arcs in which every node has at most one head and which
/// contains no directed cycle. Keyed by dependent.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ArcSet {
    head_of: BTreeMap<usize, (usize, String)>,
}

impl ArcSet {
    pub fn new() -> Self {
        ArcSet::default()
    }

    pub fn len(&self) -> usize {
        self.head_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.head_of.is_empty()
    }

    pub fn head_of(&self, dependent: usize) -> Option<(usize, &str)> {
        self.head_of
            .get(&dependent)
            .map(|(head, label)| (*head, label.as_str()))
    }

    pub fn has_head(&self, dependent: usize) -> bool {
        self.head_of.contains_key(&dependent)
    }

    pub fn contains(&self, arc: &Arc) -> bool {
        self.head_of(arc.dependent) == Some((arc.head, arc.label.as_str()))
    }

    /// Arcs ordered by dependent.
    pub fn iter(&self) -> impl Iterator<Item = Arc> + '_ {
        self.head_of
            .iter()
            .map(|(&dependent, (head, label))| Arc::new(*head, dependent, label.clone()))
    }

    /// True iff `dependent` already has a head.
    pub fn would_violate_single_head(&self, dependent: usize) -> bool {
        self.has_head(dependent)
    }

    /// True iff a (possibly empty) directed path `dependent ->* head`
    /// exists, i.e. adding `head -> dependent` would close a cycle.
    ///
    /// With single heads the path exists exactly when `dependent` is an
    /// ancestor of `head` (or the same node), so walking up from `head`
    /// is enough.
    pub fn would_create_cycle(&self, head: usize, dependent: usize) -> bool {
        let mut node = head;
        // Acyclic, so the walk visits each node at most once.
        loop {
            if node == dependent {
                return true;
            }
            match self.head_of.get(&node) {
                Some((parent, _)) => node = *parent,
                None => return false,
            }
        }
    }

    /// Adds an arc after checking the single-head and acyclicity constraints.
    /// On error the set is unchanged.
    pub fn insert(&mut self, arc: Arc) -> Result<(), ArcError> {
        if arc.head == arc.dependent {
            return Err(ArcError::SelfLoop { node: arc.head });
        }
        if arc.dependent == 0 {
            return Err(ArcError::RootDependent);
        }
        if let Some((existing_head, _)) = self.head_of(arc.dependent) {
            return Err(ArcError::SingleHead {
                dependent: arc.dependent,
                existing_head,
            });
        }
        if self.would_create_cycle(arc.head, arc.dependent) {
            return Err(ArcError::Cycle {
                head: arc.head,
                dependent: arc.dependent,
            });
        }
        self.head_of.insert(arc.dependent, (arc.head, arc.label));
        Ok(())
    }

    /// Links every headless node in `1..=n` to the artificial root.
    pub fn attach_root(&mut self, n: usize, root_label: &str) {
        for node in 1..=n {
            self.head_of
                .entry(node)
                .or_insert_with(|| (0, String::from(root_label)));
        }
    }

    /// Consuming variant of [`ArcSet::attach_root`].
    pub fn with_root(mut self, n: usize, root_label: &str) -> Self {
        self.attach_root(n, root_label);
        self
    }

    /// True iff every node in `1..=n` has a head in `0..=n` and no other
    /// node is headed. Acyclicity holds by construction.
    pub fn is_tree_over(&self, n: usize) -> bool {
        self.head_of.len() == n
            && self
                .head_of
                .iter()
                .all(|(&d, (h, _))| (1..=n).contains(&d) && *h <= n)
    }
}

impl FromIterator<Arc> for Result<ArcSet, ArcError> {
    fn from_iter<I: IntoIterator<Item = Arc>>(iter: I) -> Self {
        let mut set = ArcSet::new();
        for arc in iter {
            set.insert(arc)?;
        }
        Ok(set)
    }
}
