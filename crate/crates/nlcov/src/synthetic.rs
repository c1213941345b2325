//! Synthetic treebanks: one with Zipf-distributed arc lengths for sequence
//! length statistics, one from a small deterministic grammar for checking
//! that the perceptron learns.

use nlcov_core::{Sentence, Token};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Zipf};

/// Label of root arcs in generated corpora, matching the parser default.
pub const ROOT_LABEL: &str = "ROOT";

pub const ZIPF_EXPONENT: f64 = 1.5;
pub const ZIPF_MIN_LEN: usize = 5;
pub const ZIPF_MAX_LEN: usize = 40;

const ZIPF_POS: [&str; 5] = ["NOUN", "VERB", "ADJ", "ADP", "DET"];
const ZIPF_LABELS: [&str; 4] = ["dep", "nsubj", "obj", "amod"];

fn builds_cycle(heads: &[Option<usize>], head: usize, dep: usize) -> bool {
    let mut node = head;
    while let Some(h) = heads[node] {
        if node == dep {
            return true;
        }
        node = h;
    }
    node == dep
}

/// Heads for nodes `1..=n`, index 0 unused. One random word hangs from the
/// root; every other word draws a distance from Zipf(`ZIPF_EXPONENT`) and a
/// direction, retrying a few times when the head falls outside the sentence
/// or would close a cycle, then falling back to the root word.
fn zipf_heads(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let root_word = rng.random_range(1..=n);
    let mut heads: Vec<Option<usize>> = vec![None; n + 1];
    heads[root_word] = Some(0);
    let mut order: Vec<usize> = (1..=n).filter(|&d| d != root_word).collect();
    rand::seq::SliceRandom::shuffle(order.as_mut_slice(), rng);
    let zipf = (n > 1).then(|| Zipf::new((n - 1) as f64, ZIPF_EXPONENT).expect("valid Zipf"));
    for d in order {
        let mut chosen = root_word;
        for _ in 0..8 {
            let dist = zipf.as_ref().map_or(1, |z| z.sample(rng) as usize);
            let h = if rng.random_bool(0.5) { d.checked_sub(dist) } else { Some(d + dist) };
            match h {
                Some(h) if (1..=n).contains(&h) && !builds_cycle(&heads, h, d) => {
                    chosen = h;
                    break;
                }
                _ => {}
            }
        }
        heads[d] = Some(chosen);
    }
    heads.into_iter().skip(1).map(|h| h.expect("every node attached")).collect()
}

/// `count` sentences of length `ZIPF_MIN_LEN..=ZIPF_MAX_LEN` with gold trees.
pub fn zipf_corpus(count: usize, seed: u64) -> Vec<Sentence> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(ZIPF_MIN_LEN..=ZIPF_MAX_LEN);
            let heads = zipf_heads(n, &mut rng);
            let tokens = heads
                .iter()
                .enumerate()
                .map(|(i, &h)| {
                    let pos = *ZIPF_POS.choose(&mut rng).expect("non-empty");
                    let label = if h == 0 { ROOT_LABEL } else { ZIPF_LABELS.choose(&mut rng).expect("non-empty") };
                    Token::new(i + 1, format!("w{}", rng.random_range(0..50)), pos).with_gold(h, label)
                })
                .collect();
            Sentence::new(tokens).expect("generated trees are valid")
        })
        .collect()
}

const DETS: [&str; 3] = ["the", "a", "every"];
const ADJS: [&str; 4] = ["big", "old", "red", "quiet"];
const NOUNS: [&str; 6] = ["dog", "cat", "man", "park", "book", "house"];
const VERBS: [&str; 4] = ["sees", "likes", "finds", "reads"];
const PREPS: [&str; 3] = ["in", "near", "with"];

struct Builder {
    tokens: Vec<(String, &'static str, usize, &'static str)>,
}

impl Builder {
    fn push(&mut self, form: &str, pos: &'static str) -> usize {
        self.tokens.push((form.to_owned(), pos, 0, ""));
        self.tokens.len()
    }

    fn attach(&mut self, dep: usize, head: usize, label: &'static str) {
        self.tokens[dep - 1].2 = head;
        self.tokens[dep - 1].3 = label;
    }

    /// DET ADJ* NOUN; returns the noun.
    fn noun_phrase(&mut self, rng: &mut ChaCha8Rng) -> usize {
        let det = self.push(DETS.choose(rng).expect("non-empty"), "DET");
        let adjs: Vec<usize> = (0..rng.random_range(0..=2))
            .map(|_| self.push(ADJS.choose(rng).expect("non-empty"), "ADJ"))
            .collect();
        let noun = self.push(NOUNS.choose(rng).expect("non-empty"), "NOUN");
        self.attach(det, noun, "det");
        for a in adjs {
            self.attach(a, noun, "amod");
        }
        noun
    }
}

/// `count` sentences of the shape `NP VERB NP (PREP NP)? .`, headed by the verb.
pub fn toy_corpus(count: usize, seed: u64) -> Vec<Sentence> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut b = Builder { tokens: Vec::new() };
            let subj = b.noun_phrase(&mut rng);
            let verb = b.push(VERBS.choose(&mut rng).expect("non-empty"), "VERB");
            b.attach(subj, verb, "nsubj");
            b.attach(verb, 0, ROOT_LABEL);
            let obj = b.noun_phrase(&mut rng);
            b.attach(obj, verb, "obj");
            if rng.random_bool(0.5) {
                let prep = b.push(PREPS.choose(&mut rng).expect("non-empty"), "ADP");
                let pobj = b.noun_phrase(&mut rng);
                b.attach(prep, pobj, "case");
                b.attach(pobj, verb, "obl");
            }
            let stop = b.push(".", "PUNCT");
            b.attach(stop, verb, "punct");
            let tokens = b
                .tokens
                .into_iter()
                .enumerate()
                .map(|(i, (form, pos, h, l))| Token::new(i + 1, form, pos).with_gold(h, l))
                .collect();
            Sentence::new(tokens).expect("grammar yields trees")
        })
        .collect()
}
