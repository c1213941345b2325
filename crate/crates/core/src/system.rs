//! The Covington and NL-Covington transition systems.
//!
//! Both share one code path: Covington is NL-Covington with `k` fixed to 1
//! plus the No-Arc transition.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::arcs::Arc;
use crate::config::Configuration;
use crate::transition::{Move, Transition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SystemKind {
    Covington,
    NlCovington,
}

impl SystemKind {
    pub fn name(self) -> &'static str {
        match self {
            SystemKind::Covington => "covington",
            SystemKind::NlCovington => "nl-covington",
        }
    }
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SystemKind {
    type Err = SystemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "covington" => Ok(SystemKind::Covington),
            "nl-covington" => Ok(SystemKind::NlCovington),
            other => Err(SystemError::UnknownSystem(other.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SystemError {
    UnknownSystem(String),
    EmptyLabelSet,
    DuplicateLabel(String),
    Terminal,
    Illegal {
        transition: Transition,
        reason: &'static str,
    },
}

impl fmt::Display for SystemError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemError::UnknownSystem(s) => write!(f, "unknown transition system `{s}`"),
            SystemError::EmptyLabelSet => f.write_str("label set is empty"),
            SystemError::DuplicateLabel(l) => write!(f, "duplicate label `{l}`"),
            SystemError::Terminal => f.write_str("configuration is terminal"),
            SystemError::Illegal { transition, reason } => {
                write!(f, "illegal transition {transition}: {reason}")
            }
        }
    }
}

impl core::error::Error for SystemError {}

/// Failure of [`TransitionSystem::run_sequence`]: the transition at `index`
/// was illegal in `config`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IllegalTransition {
    pub index: usize,
    pub config: Configuration,
    pub error: SystemError,
}

impl fmt::Display for IllegalTransition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {}: {} in {}", self.index, self.error, self.config)
    }
}

impl core::error::Error for IllegalTransition {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionSystem {
    kind: SystemKind,
    labels: Vec<String>,
}

impl TransitionSystem {
    pub fn new<S: Into<String>>(
        kind: SystemKind,
        labels: impl IntoIterator<Item = S>,
    ) -> Result<Self, SystemError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(SystemError::EmptyLabelSet);
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(SystemError::DuplicateLabel(l.clone()));
            }
        }
        Ok(TransitionSystem { kind, labels })
    }

    pub fn kind(&self) -> SystemKind {
        self.kind
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    fn max_k(&self, c: &Configuration) -> usize {
        match self.kind {
            SystemKind::Covington => c.lambda1.len().min(1),
            SystemKind::NlCovington => c.lambda1.len(),
        }
    }

    fn left_arc_ok(c: &Configuration, i: usize, j: usize) -> bool {
        !c.arcs.would_violate_single_head(i) && !c.arcs.would_create_cycle(j, i)
    }

    fn right_arc_ok(c: &Configuration, i: usize, j: usize) -> bool {
        !c.arcs.would_violate_single_head(j) && !c.arcs.would_create_cycle(i, j)
    }

    /// Legal unlabeled transitions in canonical order:
    /// Shift, No-Arc, Left-Arc by ascending k, Right-Arc by ascending k.
    pub fn legal_moves(&self, c: &Configuration) -> Result<Vec<Move>, SystemError> {
        let j = c.right_focus().ok_or(SystemError::Terminal)?;
        let max_k = self.max_k(c);
        let mut moves = Vec::with_capacity(2 + 2 * max_k);
        moves.push(Move::Shift);
        if self.kind == SystemKind::Covington && !c.lambda1.is_empty() {
            moves.push(Move::NoArc);
        }
        for k in 1..=max_k {
            let i = c.left_at(k).expect("k within lambda1");
            if Self::left_arc_ok(c, i, j) {
                moves.push(Move::LeftArc(k));
            }
        }
        for k in 1..=max_k {
            let i = c.left_at(k).expect("k within lambda1");
            if Self::right_arc_ok(c, i, j) {
                moves.push(Move::RightArc(k));
            }
        }
        Ok(moves)
    }

    /// Fully labeled expansion of [`TransitionSystem::legal_moves`], labels
    /// in label-set order.
    pub fn legal_transitions(&self, c: &Configuration) -> Result<Vec<Transition>, SystemError> {
        let mut out = Vec::new();
        for m in self.legal_moves(c)? {
            match m {
                Move::Shift | Move::NoArc => out.push(m.with_label("")),
                _ => out.extend(self.labels.iter().map(|l| m.with_label(l.as_str()))),
            }
        }
        Ok(out)
    }

    /// Checks `t` against `c`, returning the arc it would add.
    pub fn check(&self, c: &Configuration, t: &Transition) -> Result<Option<Arc>, SystemError> {
        let illegal = |reason| SystemError::Illegal {
            transition: t.clone(),
            reason,
        };
        let j = c.right_focus().ok_or(SystemError::Terminal)?;
        match t {
            Transition::Shift => Ok(None),
            Transition::NoArc => {
                if self.kind != SystemKind::Covington {
                    Err(illegal("No-Arc does not exist in NL-Covington"))
                } else if c.lambda1.is_empty() {
                    Err(illegal("lambda1 is empty"))
                } else {
                    Ok(None)
                }
            }
            Transition::LeftArc { k, label } | Transition::RightArc { k, label } => {
                if self.kind == SystemKind::Covington && *k != 1 {
                    return Err(illegal("Covington arcs require k = 1"));
                }
                let i = c.left_at(*k).ok_or_else(|| illegal("k exceeds lambda1"))?;
                if self.label_index(label).is_none() {
                    return Err(illegal("label not in label set"));
                }
                let (head, dependent) = match t {
                    Transition::LeftArc { .. } => (j, i),
                    _ => (i, j),
                };
                if c.arcs.would_violate_single_head(dependent) {
                    return Err(illegal("dependent already has a head"));
                }
                if c.arcs.would_create_cycle(head, dependent) {
                    return Err(illegal("arc would close a cycle"));
                }
                Ok(Some(Arc::new(head, dependent, label.as_str())))
            }
        }
    }

    pub fn is_legal(&self, c: &Configuration, t: &Transition) -> bool {
        self.check(c, t).is_ok()
    }

    /// Applies `t` in place and returns the arc it created. On error `c`
    /// is untouched.
    pub fn apply(&self, c: &mut Configuration, t: &Transition) -> Result<Option<Arc>, SystemError> {
        let arc = self.check(c, t)?;
        match t {
            Transition::Shift => {
                let j = c.buffer.pop_front().expect("checked non-terminal");
                c.lambda1.extend(c.lambda2.drain(..));
                c.lambda1.push(j);
            }
            Transition::NoArc => move_to_lambda2(c, 1),
            Transition::LeftArc { k, .. } | Transition::RightArc { k, .. } => {
                move_to_lambda2(c, *k);
                c.arcs
                    .insert(arc.clone().expect("arc transition"))
                    .expect("preconditions checked");
            }
        }
        Ok(arc)
    }

    /// Non-mutating variant of [`TransitionSystem::apply`].
    pub fn applied(&self, c: &Configuration, t: &Transition) -> Result<Configuration, SystemError> {
        let mut next = c.clone();
        self.apply(&mut next, t)?;
        Ok(next)
    }

    /// Folds `apply` over `seq` from the initial configuration for length `n`.
    #[allow(clippy::result_large_err)]
    pub fn run_sequence<'a>(
        &self,
        n: usize,
        seq: impl IntoIterator<Item = &'a Transition>,
    ) -> Result<Configuration, IllegalTransition> {
        let mut c = Configuration::initial(n);
        for (index, t) in seq.into_iter().enumerate() {
            if let Err(error) = self.apply(&mut c, t) {
                return Err(IllegalTransition {
                    index,
                    config: c,
                    error,
                });
            }
        }
        Ok(c)
    }
}

/// Moves the k rightmost elements of lambda1 to the front of lambda2,
/// preserving their order.
fn move_to_lambda2(c: &mut Configuration, k: usize) {
    let at = c.lambda1.len() - k;
    for node in c.lambda1.drain(at..).rev() {
        c.lambda2.push_front(node);
    }
}
