//! Transitions and their textual form (`SH`, `NA`, `LA(k):label`, `RA(k):label`).

use alloc::string::{String, ToString};
use core::fmt;
use core::str::FromStr;

use crate::system::SystemKind;

/// An unlabeled transition. `k` counts from the right end of lambda1,
/// so `k = 1` addresses the classic left focus word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Move {
    Shift,
    NoArc,
    LeftArc(usize),
    RightArc(usize),
}

impl Move {
    pub fn k(self) -> Option<usize> {
        match self {
            Move::LeftArc(k) | Move::RightArc(k) => Some(k),
            _ => None,
        }
    }

    pub fn with_label(self, label: impl Into<String>) -> Transition {
        match self {
            Move::Shift => Transition::Shift,
            Move::NoArc => Transition::NoArc,
            Move::LeftArc(k) => Transition::LeftArc {
                k,
                label: label.into(),
            },
            Move::RightArc(k) => Transition::RightArc {
                k,
                label: label.into(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Transition {
    Shift,
    NoArc,
    LeftArc { k: usize, label: String },
    RightArc { k: usize, label: String },
}

impl Transition {
    pub fn left(k: usize, label: impl Into<String>) -> Self {
        Transition::LeftArc {
            k,
            label: label.into(),
        }
    }

    pub fn right(k: usize, label: impl Into<String>) -> Self {
        Transition::RightArc {
            k,
            label: label.into(),
        }
    }

    pub fn skeleton(&self) -> Move {
        match self {
            Transition::Shift => Move::Shift,
            Transition::NoArc => Move::NoArc,
            Transition::LeftArc { k, .. } => Move::LeftArc(*k),
            Transition::RightArc { k, .. } => Move::RightArc(*k),
        }
    }

    pub fn label(&self) -> Option<&str> {
        match self {
            Transition::LeftArc { label, .. } | Transition::RightArc { label, .. } => {
                Some(label)
            }
            _ => None,
        }
    }

    pub fn k(&self) -> Option<usize> {
        self.skeleton().k()
    }

    pub fn is_arc(&self) -> bool {
        self.k().is_some()
    }

    /// Textual form for traces. Covington arc transitions omit `k`.
    pub fn display(&self, kind: SystemKind) -> TransitionDisplay<'_> {
        TransitionDisplay {
            transition: self,
            omit_k: kind == SystemKind::Covington,
        }
    }
}

/// Display adapter returned by [`Transition::display`].
pub struct TransitionDisplay<'a> {
    transition: &'a Transition,
    omit_k: bool,
}

impl fmt::Display for TransitionDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (name, k, label) = match self.transition {
            Transition::Shift => return f.write_str("SH"),
            Transition::NoArc => return f.write_str("NA"),
            Transition::LeftArc { k, label } => ("LA", *k, label),
            Transition::RightArc { k, label } => ("RA", *k, label),
        };
        if self.omit_k && k == 1 {
            write!(f, "{name}:{label}")
        } else {
            write!(f, "{name}({k}):{label}")
        }
    }
}

/// Full form, always with `k`.
impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        TransitionDisplay {
            transition: self,
            omit_k: false,
        }
        .fmt(f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseTransitionError(pub String);

impl fmt::Display for ParseTransitionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot parse transition `{}`", self.0)
    }
}

impl core::error::Error for ParseTransitionError {}

impl FromStr for Transition {
    type Err = ParseTransitionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseTransitionError(s.to_string());
        match s {
            "SH" => return Ok(Transition::Shift),
            "NA" => return Ok(Transition::NoArc),
            _ => {}
        }

        let (head, label) = s.split_once(':').ok_or_else(err)?;
        if label.is_empty() {
            return Err(err());
        }
        let (name, k) = match head.split_once('(') {
            None => (head, 1),
            Some((name, rest)) => {
                let k = rest
                    .strip_suffix(')')
                    .and_then(|k| k.parse::<usize>().ok())
                    .filter(|&k| k >= 1)
                    .ok_or_else(err)?;
                (name, k)
            }
        };
        match name {
            "LA" => Ok(Transition::left(k, label)),
            "RA" => Ok(Transition::right(k, label)),
            _ => Err(err()),
        }
    }
}
