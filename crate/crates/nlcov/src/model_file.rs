//! Line-oriented model files.
//!
//! ```text
//! version<TAB>1
//! system<TAB>nl-covington
//! hash-seed<TAB>0
//! labels<TAB>root<TAB>nsubj<TAB>obj
//! 0<TAB>1234567890<TAB>0.5
//! ```
//!
//! Header lines come first in this order, then one
//! `class<TAB>feature<TAB>weight` line per nonzero averaged weight, sorted by
//! class and feature. Weights are printed in shortest round-trip form.

use std::io::{BufRead, Write};

use nlcov_core::{Model, SystemKind, TransitionSystem};

use crate::error::Error;

pub const FORMAT_VERSION: u32 = 1;

pub fn write_model<W: Write>(mut w: W, model: &Model) -> Result<(), Error> {
    let mut text = String::new();
    text.push_str(&format!("version\t{FORMAT_VERSION}\n"));
    text.push_str(&format!("system\t{}\n", model.kind()));
    text.push_str(&format!("hash-seed\t{}\n", model.hash_seed()));
    text.push_str("labels");
    for l in model.labels() {
        text.push('\t');
        text.push_str(l);
    }
    text.push('\n');
    for (class, feature, weight) in model.averaged_weights() {
        text.push_str(&format!("{class}\t{feature}\t{weight}\n"));
    }
    w.write_all(text.as_bytes())
        .and_then(|_| w.flush())
        .map_err(|e| Error::io("<model>", e))
}

pub fn read_model<R: BufRead>(r: R, source_name: &str) -> Result<Model, Error> {
    let mut lines = r.lines().enumerate().map(|(i, l)| (i + 1, l));
    let bad = |line: usize, message: String| Error::ModelFile {
        source_name: source_name.to_owned(),
        line,
        message,
    };
    let mut header = |key: &str| -> Result<(usize, Vec<String>), Error> {
        let (no, line) = lines
            .next()
            .ok_or_else(|| bad(0, format!("missing `{key}` header")))?;
        let line = line.map_err(|e| Error::io(source_name, e))?;
        let mut fields = line.split('\t').map(str::to_owned);
        match fields.next() {
            Some(k) if k == key => Ok((no, fields.collect())),
            _ => Err(bad(no, format!("expected `{key}` header"))),
        }
    };

    let (no, version) = header("version")?;
    if version != [FORMAT_VERSION.to_string()] {
        return Err(bad(no, format!("unsupported version {}", version.join(" "))));
    }
    let (no, system) = header("system")?;
    let kind: SystemKind = match system.as_slice() {
        [name] => name.parse().map_err(|_| bad(no, format!("unknown system `{name}`")))?,
        _ => return Err(bad(no, "expected one system name".into())),
    };
    let (no, seed) = header("hash-seed")?;
    let hash_seed: u64 = match seed.as_slice() {
        [s] => s.parse().map_err(|_| bad(no, format!("bad hash seed `{s}`")))?,
        _ => return Err(bad(no, "expected one hash seed".into())),
    };
    let (no, labels) = header("labels")?;
    let system = TransitionSystem::new(kind, labels).map_err(|e| bad(no, e.to_string()))?;

    let mut entries = Vec::new();
    for (no, line) in lines {
        let line = line.map_err(|e| Error::io(source_name, e))?;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let [class, feature, weight] = fields[..] else {
            return Err(bad(no, format!("expected 3 fields, found {}", fields.len())));
        };
        let class: usize = class.parse().map_err(|_| bad(no, format!("bad class `{class}`")))?;
        let feature: u64 = feature
            .parse()
            .map_err(|_| bad(no, format!("bad feature id `{feature}`")))?;
        let weight: f64 = weight
            .parse()
            .map_err(|_| bad(no, format!("bad weight `{weight}`")))?;
        entries.push((no, class, feature, weight));
    }
    Model::from_weights(
        system,
        hash_seed,
        entries.iter().map(|&(_, c, f, w)| (c, f, w)),
    )
    .map_err(|e| {
        // Point at the first offending line.
        let line = entries
            .iter()
            .find(|&&(_, c, f, w)| {
                !w.is_finite()
                    || matches!(e, nlcov_core::ModelError::InvalidClass(ic) if ic == c)
                    || matches!(e, nlcov_core::ModelError::BadWeight { class, feature } if class == c && feature == f)
            })
            .map_or(0, |e| e.0);
        bad(line, e.to_string())
    })
}
