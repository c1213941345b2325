//! Attachment scores, oracle sequence-length statistics and projectivity.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use unicode_general_category::{get_general_category, GeneralCategory};

use crate::arcs::ArcSet;
use crate::oracle::{expand_to_covington, oracle_sequence, GoldTree, OracleError};
use crate::sentence::{Sentence, Token};
use crate::system::{SystemKind, TransitionSystem};

/// Which tokens count towards UAS/LAS.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum PunctPolicy {
    #[default]
    Include,
    /// Exclude tokens whose form is made only of Unicode punctuation (P*).
    ExcludeByForm,
    /// Exclude tokens whose fine POS tag is in the list.
    ExcludeByPos(Vec<String>),
}

impl PunctPolicy {
    pub fn excludes(&self, token: &Token) -> bool {
        match self {
            PunctPolicy::Include => false,
            PunctPolicy::ExcludeByForm => is_punctuation(&token.form),
            PunctPolicy::ExcludeByPos(tags) => tags.contains(&token.pos),
        }
    }
}

/// True iff `form` is non-empty and every character is in a Unicode P* category.
pub fn is_punctuation(form: &str) -> bool {
    !form.is_empty()
        && form.chars().all(|c| {
            matches!(
                get_general_category(c),
                GeneralCategory::ConnectorPunctuation
                    | GeneralCategory::DashPunctuation
                    | GeneralCategory::OpenPunctuation
                    | GeneralCategory::ClosePunctuation
                    | GeneralCategory::InitialPunctuation
                    | GeneralCategory::FinalPunctuation
                    | GeneralCategory::OtherPunctuation
            )
        })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalError {
    ArityMismatch { gold: usize, predicted: usize },
    MissingGold { sentence: usize, token: usize },
    Oracle { sentence: usize, error: OracleError },
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::ArityMismatch { gold, predicted } => write!(
                f,
                "{gold} gold sentences but {predicted} predicted analyses"
            ),
            EvalError::MissingGold { sentence, token } => {
                write!(f, "sentence {sentence}, token {token}: no gold head/label")
            }
            EvalError::Oracle { sentence, error } => write!(f, "sentence {sentence}: {error}"),
        }
    }
}

impl core::error::Error for EvalError {}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ScoreReport {
    pub uas: f64,
    pub las: f64,
    pub tokens_scored: usize,
    pub tokens_excluded: usize,
}

/// Unlabeled and labeled attachment scores. With no scored tokens both
/// scores are reported as 1.0.
pub fn score(
    gold: &[Sentence],
    predicted: &[ArcSet],
    policy: &PunctPolicy,
) -> Result<ScoreReport, EvalError> {
    if gold.len() != predicted.len() {
        return Err(EvalError::ArityMismatch {
            gold: gold.len(),
            predicted: predicted.len(),
        });
    }
    let (mut scored, mut excluded, mut heads, mut labeled) = (0usize, 0usize, 0usize, 0usize);
    for (sentence_idx, (sentence, arcs)) in gold.iter().zip(predicted).enumerate() {
        for token in sentence.tokens() {
            let (Some(gh), Some(gl)) = (token.gold_head, token.gold_label.as_deref()) else {
                return Err(EvalError::MissingGold {
                    sentence: sentence_idx,
                    token: token.id,
                });
            };
            if policy.excludes(token) {
                excluded += 1;
                continue;
            }
            scored += 1;
            if let Some((ph, pl)) = arcs.head_of(token.id) {
                if ph == gh {
                    heads += 1;
                    if pl == gl {
                        labeled += 1;
                    }
                }
            }
        }
    }
    let ratio = |x: usize| if scored == 0 { 1.0 } else { x as f64 / scored as f64 };
    Ok(ScoreReport {
        uas: ratio(heads),
        las: ratio(labeled),
        tokens_scored: scored,
        tokens_excluded: excluded,
    })
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TransitionStats {
    /// `(covington_len, nl_len)` per sentence.
    pub per_sentence: Vec<(usize, usize)>,
    pub avg_cov: f64,
    pub avg_nl: f64,
}

impl TransitionStats {
    /// Relative shortening of NL-Covington sequences, in percent.
    pub fn reduction_pct(&self) -> f64 {
        if self.avg_cov == 0.0 {
            0.0
        } else {
            100.0 * (self.avg_cov - self.avg_nl) / self.avg_cov
        }
    }
}

/// Static-oracle sequence lengths of both systems for each tree.
/// The Covington length is obtained by running its own oracle.
pub fn transition_stats(corpus: &[GoldTree]) -> Result<TransitionStats, EvalError> {
    let mut per_sentence = Vec::with_capacity(corpus.len());
    for (sentence, tree) in corpus.iter().enumerate() {
        let wrap = |error| EvalError::Oracle { sentence, error };
        let labels = tree.label_set();
        let nl = TransitionSystem::new(SystemKind::NlCovington, labels.iter().cloned())
            .map_err(|e| wrap(e.into()))?;
        let cov = TransitionSystem::new(SystemKind::Covington, labels).map_err(|e| wrap(e.into()))?;
        let nl_len = oracle_sequence(&nl, tree).map_err(wrap)?.len();
        let cov_len = oracle_sequence(&cov, tree).map_err(wrap)?.len();
        per_sentence.push((cov_len, nl_len));
    }
    let mean = |f: fn(&(usize, usize)) -> usize| {
        if per_sentence.is_empty() {
            0.0
        } else {
            per_sentence.iter().map(f).sum::<usize>() as f64 / per_sentence.len() as f64
        }
    };
    Ok(TransitionStats {
        avg_cov: mean(|p| p.0),
        avg_nl: mean(|p| p.1),
        per_sentence,
    })
}

/// Number of No-Arcs the expansion of an NL sequence adds, i.e. the sum of
/// `k - 1` over its arc transitions.
pub fn no_arc_overhead(tree: &GoldTree) -> Result<usize, OracleError> {
    let nl = TransitionSystem::new(SystemKind::NlCovington, tree.label_set())?;
    let seq = oracle_sequence(&nl, tree)?;
    Ok(expand_to_covington(&seq)?.len() - seq.len())
}

/// True iff no two arcs of the tree (root arcs included) cross.
pub fn is_projective(tree: &GoldTree) -> bool {
    let spans: Vec<(usize, usize)> = tree
        .arcs()
        .map(|a| (a.head.min(a.dependent), a.head.max(a.dependent)))
        .collect();
    spans.iter().enumerate().all(|(i, &(a1, a2))| {
        spans[i + 1..]
            .iter()
            .all(|&(b1, b2)| !((a1 < b1 && b1 < a2 && a2 < b2) || (b1 < a1 && a1 < b2 && b2 < a2)))
    })
}
