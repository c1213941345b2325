//! Tokens and sentences.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// One treebank word. Position 0 is the artificial root and is never a token.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub id: usize,
    pub form: String,
    pub lemma: String,
    pub cpos: String,
    pub pos: String,
    pub feats: String,
    pub gold_head: Option<usize>,
    pub gold_label: Option<String>,
}

impl Token {
    /// A token with only a form and a (fine and coarse) part of speech.
    pub fn new(id: usize, form: impl Into<String>, pos: impl Into<String>) -> Self {
        let pos = pos.into();
        Token {
            id,
            form: form.into(),
            lemma: String::new(),
            cpos: pos.clone(),
            pos,
            feats: String::new(),
            gold_head: None,
            gold_label: None,
        }
    }

    pub fn with_gold(mut self, head: usize, label: impl Into<String>) -> Self {
        self.gold_head = Some(head);
        self.gold_label = Some(label.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SentenceError {
    /// Token at list index `index` carries the wrong id.
    NonContiguousId { index: usize, id: usize },
    SelfHead { id: usize },
    HeadOutOfRange { id: usize, head: usize },
    /// The gold heads contain a cycle through `id`.
    Cycle { id: usize },
}

impl fmt::Display for SentenceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SentenceError::NonContiguousId { index, id } => {
                write!(f, "token {} has id {}, expected {}", index + 1, id, index + 1)
            }
            SentenceError::SelfHead { id } => write!(f, "token {} is its own head", id),
            SentenceError::HeadOutOfRange { id, head } => {
                write!(f, "token {} has out-of-range head {}", id, head)
            }
            SentenceError::Cycle { id } => write!(f, "gold heads form a cycle through token {}", id),
        }
    }
}

impl core::error::Error for SentenceError {}

/// A tokenized sentence with ids `1..=n`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Sentence {
    tokens: Vec<Token>,
}

impl Sentence {
    /// Builds a sentence, checking id contiguity and that the gold heads
    /// that are present form a forest rooted at 0.
    pub fn new(tokens: Vec<Token>) -> Result<Self, SentenceError> {
        let n = tokens.len();
        for (index, token) in tokens.iter().enumerate() {
            if token.id != index + 1 {
                return Err(SentenceError::NonContiguousId { index, id: token.id });
            }
            if let Some(head) = token.gold_head {
                if head == token.id {
                    return Err(SentenceError::SelfHead { id: token.id });
                }
                if head > n {
                    return Err(SentenceError::HeadOutOfRange { id: token.id, head });
                }
            }
        }

        // Walk up from every node; a walk longer than n revisits a node.
        for start in 1..=n {
            let mut node = start;
            let mut steps = 0;
            while let Some(head) = tokens[node - 1].gold_head {
                if head == 0 {
                    break;
                }
                steps += 1;
                if steps > n {
                    return Err(SentenceError::Cycle { id: start });
                }
                node = head;
            }
        }

        Ok(Sentence { tokens })
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    /// Token at 1-based position `id`.
    pub fn token(&self, id: usize) -> Option<&Token> {
        id.checked_sub(1).and_then(|idx| self.tokens.get(idx))
    }

    /// True when every token carries a gold head and label.
    pub fn has_gold(&self) -> bool {
        self.tokens
            .iter()
            .all(|t| t.gold_head.is_some() && t.gold_label.is_some())
    }

    /// Copy of the sentence with all gold annotation removed.
    pub fn strip_gold(&self) -> Sentence {
        let tokens = self
            .tokens
            .iter()
            .cloned()
            .map(|mut t| {
                t.gold_head = None;
                t.gold_label = None;
                t
            })
            .collect();
        Sentence { tokens }
    }
}
