//! Parser configurations `<lambda1, lambda2, buffer, arcs>`.

use alloc::collections::VecDeque;
use alloc::vec::Vec;
use core::fmt;

use crate::arcs::ArcSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConfigError {
    NotAPermutation,
    /// Some node in lambda1 or lambda2 is not left of every buffer node.
    BufferOrder,
    /// lambda1 or lambda2 is not increasing, or lambda1 overlaps lambda2.
    ListOrder,
    /// An arc mentions a node outside `0..=n`.
    ArcOutOfRange,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match self {
            ConfigError::NotAPermutation => "lambda1, lambda2 and buffer do not partition 1..n",
            ConfigError::BufferOrder => "a processed node lies right of a buffer node",
            ConfigError::ListOrder => "lambda1/lambda2 are not increasing and ordered",
            ConfigError::ArcOutOfRange => "arc endpoint outside the sentence",
        };
        f.write_str(msg)
    }
}

impl core::error::Error for ConfigError {}

/// The rightmost element of `lambda1` is the left focus word, the front of
/// `buffer` the right focus word. Node ids index into the sentence; the
/// root (0) never appears in the lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    pub(crate) lambda1: Vec<usize>,
    pub(crate) lambda2: VecDeque<usize>,
    pub(crate) buffer: VecDeque<usize>,
    pub(crate) arcs: ArcSet,
}

impl Configuration {
    /// `<[], [], [1..n], {}>`
    pub fn initial(n: usize) -> Self {
        Configuration {
            lambda1: Vec::new(),
            lambda2: VecDeque::new(),
            buffer: (1..=n).collect(),
            arcs: ArcSet::new(),
        }
    }

    /// Builds an arbitrary configuration, validating the list invariants.
    pub fn from_parts(
        lambda1: Vec<usize>,
        lambda2: Vec<usize>,
        buffer: Vec<usize>,
        arcs: ArcSet,
    ) -> Result<Self, ConfigError> {
        let c = Configuration {
            lambda1,
            lambda2: lambda2.into(),
            buffer: buffer.into(),
            arcs,
        };
        c.check_invariants()?;
        Ok(c)
    }

    pub fn len(&self) -> usize {
        self.lambda1.len() + self.lambda2.len() + self.buffer.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn lambda1(&self) -> &[usize] {
        &self.lambda1
    }

    pub fn lambda2(&self) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.lambda2.iter().copied()
    }

    pub fn buffer(&self) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.buffer.iter().copied()
    }

    pub fn arcs(&self) -> &ArcSet {
        &self.arcs
    }

    pub fn into_arcs(self) -> ArcSet {
        self.arcs
    }

    pub fn is_terminal(&self) -> bool {
        self.buffer.is_empty()
    }

    /// Right focus word `j`.
    pub fn right_focus(&self) -> Option<usize> {
        self.buffer.front().copied()
    }

    /// `i_k`, the k-th element of lambda1 counted from its right end.
    pub fn left_at(&self, k: usize) -> Option<usize> {
        let len = self.lambda1.len();
        if k == 0 || k > len {
            None
        } else {
            Some(self.lambda1[len - k])
        }
    }

    /// Second buffer element, if any.
    pub fn buffer_next(&self) -> Option<usize> {
        self.buffer.get(1).copied()
    }

    pub fn check_invariants(&self) -> Result<(), ConfigError> {
        let n = self.len();
        let mut seen = alloc::vec![false; n + 1];
        for node in self
            .lambda1
            .iter()
            .chain(self.lambda2.iter())
            .chain(self.buffer.iter())
        {
            if *node == 0 || *node > n || seen[*node] {
                return Err(ConfigError::NotAPermutation);
            }
            seen[*node] = true;
        }

        let processed = self.lambda1.iter().chain(self.lambda2.iter());
        if processed.clone().zip(processed.skip(1)).any(|(a, b)| a >= b) {
            return Err(ConfigError::ListOrder);
        }

        let processed_max = self
            .lambda1
            .iter()
            .chain(self.lambda2.iter())
            .max()
            .copied()
            .unwrap_or(0);
        if self.buffer.iter().any(|&b| b < processed_max) {
            return Err(ConfigError::BufferOrder);
        }

        if self.arcs.iter().any(|a| a.head > n || a.dependent > n) {
            return Err(ConfigError::ArcOutOfRange);
        }
        Ok(())
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, xs: impl Iterator<Item = usize>) -> fmt::Result {
    f.write_str("[")?;
    for (i, x) in xs.enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{x}")?;
    }
    f.write_str("]")
}

/// Display adapter for one of the three node lists.
pub struct NodeList<I>(pub I);

impl<I: Iterator<Item = usize> + Clone> fmt::Display for NodeList<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, self.0.clone())
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        write_list(f, self.lambda1.iter().copied())?;
        f.write_str(", ")?;
        write_list(f, self.lambda2.iter().copied())?;
        f.write_str(", ")?;
        write_list(f, self.buffer.iter().copied())?;
        write!(f, ", {} arcs>", self.arcs.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use alloc::vec;

    #[test]
    fn initial_configurations() {
        let c = Configuration::initial(5);
        assert!(c.lambda1().is_empty());
        assert_eq!(c.lambda2().len(), 0);
        assert_eq!(c.buffer().collect::<Vec<_>>(), vec![1, 2, 3, 4, 5]);
        assert!(c.arcs().is_empty());
        assert!(!c.is_terminal());

        let empty = Configuration::initial(0);
        assert!(empty.is_terminal());
        assert!(empty.is_empty());

        let one = Configuration::initial(1);
        assert!(!one.is_terminal());
        assert_eq!(one.right_focus(), Some(1));
    }

    #[test]
    fn terminal_example() {
        let c = Configuration::from_parts(vec![1, 2, 3, 4, 5], vec![], vec![], ArcSet::new()).unwrap();
        assert!(c.is_terminal());
        assert_eq!(format!("{c}"), "<[1, 2, 3, 4, 5], [], [], 0 arcs>");
    }

    #[test]
    fn left_at_counts_from_the_right() {
        let c = Configuration::from_parts(vec![1, 2, 3], vec![4], vec![5], ArcSet::new()).unwrap();
        assert_eq!(c.left_at(1), Some(3));
        assert_eq!(c.left_at(3), Some(1));
        assert_eq!(c.left_at(0), None);
        assert_eq!(c.left_at(4), None);
    }

    #[test]
    fn invariant_violations() {
        assert_eq!(
            Configuration::from_parts(vec![1, 1], vec![], vec![3], ArcSet::new()),
            Err(ConfigError::NotAPermutation)
        );
        assert_eq!(
            Configuration::from_parts(vec![2, 1], vec![], vec![3], ArcSet::new()),
            Err(ConfigError::ListOrder)
        );
        assert_eq!(
            Configuration::from_parts(vec![1], vec![3], vec![2], ArcSet::new()),
            Err(ConfigError::BufferOrder)
        );
        assert_eq!(
            Configuration::from_parts(vec![2], vec![1], vec![3], ArcSet::new()),
            Err(ConfigError::ListOrder)
        );
    }
}
