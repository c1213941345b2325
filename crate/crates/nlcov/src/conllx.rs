//! CoNLL-X reader and writer.
//!
//! Ten tab-separated columns per token (ID, FORM, LEMMA, CPOSTAG, POSTAG,
//! FEATS, HEAD, DEPREL, PHEAD, PDEPREL), `_` for absent values, a blank
//! line after every sentence. In CoNLL-U mode comment lines, multiword
//! token ranges and empty nodes are skipped; UPOS and XPOS occupy the
//! CPOSTAG and POSTAG columns.

use std::io::{self, BufRead, Write};

use nlcov_core::{ArcSet, Sentence, SentenceError, Token};

use crate::error::Error;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ReadOptions {
    /// Skip sentences with invalid gold heads instead of failing.
    pub lenient: bool,
    pub conllu: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CorpusDocument {
    pub sentences: Vec<Sentence>,
    pub source_name: String,
}

/// A sentence dropped in lenient mode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skipped {
    /// Position among all sentences of the input, skipped ones included.
    pub index: usize,
    /// Line of the sentence's first token.
    pub line: usize,
    pub error: SentenceError,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReadOutcome {
    pub document: CorpusDocument,
    pub skipped: Vec<Skipped>,
}

const ABSENT: &str = "_";

fn field(value: &str) -> String {
    if value == ABSENT {
        String::new()
    } else {
        value.to_owned()
    }
}

fn optional(value: &str) -> Option<&str> {
    (value != ABSENT).then_some(value)
}

struct Pending {
    tokens: Vec<Token>,
    first_line: usize,
}

pub fn read_conllx<R: BufRead>(
    input: R,
    source_name: &str,
    opts: ReadOptions,
) -> Result<ReadOutcome, Error> {
    let mut outcome = ReadOutcome {
        document: CorpusDocument {
            sentences: Vec::new(),
            source_name: source_name.to_owned(),
        },
        skipped: Vec::new(),
    };
    let mut pending: Option<Pending> = None;
    let mut sentence_index = 0;

    let mut finish = |pending: Pending, outcome: &mut ReadOutcome| -> Result<(), Error> {
        let index = sentence_index;
        sentence_index += 1;
        match Sentence::new(pending.tokens) {
            Ok(s) => outcome.document.sentences.push(s),
            Err(error) if opts.lenient => outcome.skipped.push(Skipped {
                index,
                line: pending.first_line,
                error,
            }),
            Err(error) => {
                return Err(Error::InvalidSentence {
                    source_name: source_name.to_owned(),
                    index,
                    line: pending.first_line,
                    error,
                })
            }
        }
        Ok(())
    };

    for (idx, line) in input.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::io(source_name, e))?;
        let mut line = line.strip_suffix('\r').unwrap_or(&line);
        if idx == 0 {
            line = line.strip_prefix('\u{feff}').unwrap_or(line);
        }

        if line.trim().is_empty() {
            if let Some(p) = pending.take() {
                finish(p, &mut outcome)?;
            }
            continue;
        }
        if opts.conllu && line.starts_with('#') {
            continue;
        }

        let malformed = |message: String| Error::Malformed {
            source_name: source_name.to_owned(),
            line: lineno,
            message,
        };
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(malformed(format!("expected 10 columns, found {}", cols.len())));
        }
        if opts.conllu && (cols[0].contains('-') || cols[0].contains('.')) {
            continue;
        }

        let id: usize = cols[0]
            .parse()
            .map_err(|_| malformed(format!("non-integer ID `{}`", cols[0])))?;
        let p = pending.get_or_insert_with(|| Pending {
            tokens: Vec::new(),
            first_line: lineno,
        });
        let expected = p.tokens.len() + 1;
        if id != expected {
            return Err(malformed(format!("ID {id} where {expected} was expected")));
        }
        let gold_head = optional(cols[6])
            .map(|h| {
                h.parse::<usize>()
                    .map_err(|_| malformed(format!("non-integer HEAD `{h}`")))
            })
            .transpose()?;

        p.tokens.push(Token {
            id,
            form: cols[1].to_owned(),
            lemma: field(cols[2]),
            cpos: field(cols[3]),
            pos: field(cols[4]),
            feats: field(cols[5]),
            gold_head,
            gold_label: optional(cols[7]).map(str::to_owned),
        });
    }
    if let Some(p) = pending.take() {
        finish(p, &mut outcome)?;
    }
    Ok(outcome)
}

/// Gold arcs of a fully annotated sentence.
pub fn gold_arcs(sentence: &Sentence) -> Option<ArcSet> {
    sentence
        .tokens()
        .iter()
        .map(|t| Some(nlcov_core::Arc::new(t.gold_head?, t.id, t.gold_label.clone()?)))
        .collect::<Option<Vec<_>>>()?
        .into_iter()
        .collect::<Result<ArcSet, _>>()
        .ok()
}

fn out(value: &str) -> &str {
    if value.is_empty() {
        ABSENT
    } else {
        value
    }
}

/// Writes `doc` with HEAD/DEPREL taken from `predicted`. PHEAD and
/// PDEPREL are written as `_`.
pub fn write_conllx<W: Write>(
    mut writer: W,
    doc: &CorpusDocument,
    predicted: &[ArcSet],
) -> Result<(), Error> {
    if doc.sentences.len() != predicted.len() {
        return Err(Error::Arity {
            expected: doc.sentences.len(),
            found: predicted.len(),
        });
    }
    for (index, (sentence, arcs)) in doc.sentences.iter().zip(predicted).enumerate() {
        if !arcs.is_tree_over(sentence.len()) {
            return Err(Error::NotATree { index });
        }
        for arc in arcs.iter() {
            if arc.label.is_empty() || arc.label.chars().any(char::is_whitespace) {
                return Err(Error::BadLabel {
                    index,
                    label: arc.label,
                });
            }
        }
    }

    let wrap = |e: io::Error| Error::io("<output>", e);
    for (sentence, arcs) in doc.sentences.iter().zip(predicted) {
        for t in sentence.tokens() {
            let (head, label) = arcs.head_of(t.id).expect("checked tree");
            writeln!(
                writer,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t_\t_",
                t.id,
                out(&t.form),
                out(&t.lemma),
                out(&t.cpos),
                out(&t.pos),
                out(&t.feats),
                head,
                label
            )
            .map_err(wrap)?;
        }
        writeln!(writer).map_err(wrap)?;
    }
    writer.flush().map_err(wrap)
}
