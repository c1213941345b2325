//! Sparse hashed features for candidate transitions.
//!
//! Arc transitions look at the head and dependent of the arc they would
//! build, No-Arc at the two focus words, Shift at the front of the buffer.

use alloc::vec::Vec;
use core::fmt;

use crate::config::Configuration;
use crate::sentence::{Sentence, Token};
use crate::system::{SystemError, TransitionSystem};
use crate::transition::{Move, Transition};

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;
const SEPARATOR: u8 = 0xff;

/// Seeded 64-bit FNV-1a over template parts. Stable across platforms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FeatureHasher {
    seed: u64,
}

impl FeatureHasher {
    pub fn new(seed: u64) -> Self {
        FeatureHasher { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn hash(&self, parts: &[&str]) -> u64 {
        let mut h = FNV_OFFSET;
        let mut eat = |bytes: &[u8]| {
            for &b in bytes {
                h ^= u64::from(b);
                h = h.wrapping_mul(FNV_PRIME);
            }
        };
        eat(&self.seed.to_le_bytes());
        for part in parts {
            eat(&[SEPARATOR]);
            eat(part.as_bytes());
        }
        h
    }
}

/// Feature ids with positive counts, sorted by id.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FeatureVector {
    features: Vec<(u64, u32)>,
}

impl FeatureVector {
    pub fn from_ids(mut ids: Vec<u64>) -> Self {
        ids.sort_unstable();
        let mut features: Vec<(u64, u32)> = Vec::with_capacity(ids.len());
        for id in ids {
            match features.last_mut() {
                Some((last, count)) if *last == id => *count += 1,
                _ => features.push((id, 1)),
            }
        }
        FeatureVector { features }
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u32)> + '_ {
        self.features.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn count(&self, id: u64) -> u32 {
        self.features
            .binary_search_by_key(&id, |(f, _)| *f)
            .map(|idx| self.features[idx].1)
            .unwrap_or(0)
    }

    /// Sum of counts of both vectors.
    pub fn union(&self, other: &FeatureVector) -> FeatureVector {
        let mut ids = Vec::new();
        for (id, count) in self.iter().chain(other.iter()) {
            ids.extend(core::iter::repeat_n(id, count as usize));
        }
        FeatureVector::from_ids(ids)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FeatureError {
    Illegal(SystemError),
    /// The configuration mentions a node the sentence does not have.
    UnknownNode(usize),
}

impl fmt::Display for FeatureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeatureError::Illegal(e) => e.fmt(f),
            FeatureError::UnknownNode(n) => write!(f, "node {n} is not in the sentence"),
        }
    }
}

impl core::error::Error for FeatureError {}

/// Buckets `1, 2, 3, 4, 5, 6-10, >10`, shared by distances and `k`.
pub fn bucket(value: usize) -> &'static str {
    match value {
        0 => "0",
        1 => "1",
        2 => "2",
        3 => "3",
        4 => "4",
        5 => "5",
        6..=10 => "6-10",
        _ => ">10",
    }
}

const END: &str = "<end>";

/// Extracts features for legal moves. Labels never enter the features;
/// the model keeps one weight row per labeled transition class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Featurizer {
    hasher: FeatureHasher,
}

impl Featurizer {
    pub fn new(hash_seed: u64) -> Self {
        Featurizer {
            hasher: FeatureHasher::new(hash_seed),
        }
    }

    pub fn hash_seed(&self) -> u64 {
        self.hasher.seed()
    }

    /// Features of `t` in `c`, after checking that `t` is legal.
    pub fn featurize(
        &self,
        sys: &TransitionSystem,
        sentence: &Sentence,
        c: &Configuration,
        t: &Transition,
    ) -> Result<FeatureVector, FeatureError> {
        sys.check(c, t).map_err(FeatureError::Illegal)?;
        self.features(sentence, c, t.skeleton())
    }

    /// Features of a move assumed legal in `c`.
    pub(crate) fn features(
        &self,
        sentence: &Sentence,
        c: &Configuration,
        mv: Move,
    ) -> Result<FeatureVector, FeatureError> {
        let token = |id: usize| sentence.token(id).ok_or(FeatureError::UnknownNode(id));
        let j = c
            .right_focus()
            .ok_or(FeatureError::Illegal(SystemError::Terminal))?;
        let h = |parts: &[&str]| self.hasher.hash(parts);
        let mut ids = Vec::with_capacity(24);

        match mv {
            Move::Shift => {
                let front = token(j)?;
                let next_pos = match c.buffer_next() {
                    Some(n) => token(n)?.pos.as_str(),
                    None => END,
                };
                ids.push(h(&["sh.bias"]));
                word_features(&h, &mut ids, "sh.j", front);
                ids.push(h(&["sh.j1.pos", next_pos]));
                ids.push(h(&["sh.j.pos+j1.pos", &front.pos, next_pos]));
            }
            Move::NoArc => {
                let i = c
                    .left_at(1)
                    .ok_or(FeatureError::Illegal(SystemError::Terminal))?;
                let (left, right) = (token(i)?, token(j)?);
                ids.push(h(&["na.bias"]));
                word_features(&h, &mut ids, "na.i", left);
                word_features(&h, &mut ids, "na.j", right);
                ids.push(h(&["na.i.pos+j.pos", &left.pos, &right.pos]));
            }
            Move::LeftArc(k) | Move::RightArc(k) => {
                let i = c.left_at(k).ok_or(FeatureError::Illegal(SystemError::Illegal {
                    transition: mv.with_label(""),
                    reason: "k exceeds lambda1",
                }))?;
                let (head, dep) = match mv {
                    Move::LeftArc(_) => (j, i),
                    _ => (i, j),
                };
                let (ht, dt) = (token(head)?, token(dep)?);
                let distance = head.abs_diff(dep);
                let sign = if dep < head { "-" } else { "+" };
                let dist = bucket(distance);
                let kb = bucket(k);
                ids.push(h(&["arc.bias"]));
                word_features(&h, &mut ids, "arc.h", ht);
                word_features(&h, &mut ids, "arc.d", dt);
                ids.push(h(&["arc.h.pos+d.pos", &ht.pos, &dt.pos]));
                ids.push(h(&["arc.h.cpos+d.cpos", &ht.cpos, &dt.cpos]));
                ids.push(h(&["arc.h.form+d.pos", &ht.form, &dt.pos]));
                ids.push(h(&["arc.h.pos+d.form", &ht.pos, &dt.form]));
                ids.push(h(&["arc.dist", sign, dist]));
                ids.push(h(&["arc.k", kb]));
                ids.push(h(&["arc.h.pos+d.pos+dist", &ht.pos, &dt.pos, sign, dist]));
                ids.push(h(&["arc.h.pos+d.pos+k", &ht.pos, &dt.pos, kb]));
            }
        }
        Ok(FeatureVector::from_ids(ids))
    }
}

fn word_features(h: &impl Fn(&[&str]) -> u64, ids: &mut Vec<u64>, role: &str, t: &Token) {
    ids.push(h(&[role, "form", &t.form]));
    ids.push(h(&[role, "pos", &t.pos]));
    ids.push(h(&[role, "cpos", &t.cpos]));
    ids.push(h(&[role, "form+pos", &t.form, &t.pos]));
}
