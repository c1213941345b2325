//! Oracle traces as TSV, one row per transition with the configuration it
//! produces:
//!
//! ```text
//! step<TAB>transition<TAB>lambda1<TAB>lambda2<TAB>buffer<TAB>new_arc
//! 1<TAB>SH<TAB>[1]<TAB>[]<TAB>[2]<TAB>
//! 2<TAB>LA:nsubj<TAB>[]<TAB>[1]<TAB>[2]<TAB>2->1
//! ```

use std::fmt::Write as _;

use nlcov_core::config::NodeList;
use nlcov_core::{oracle_sequence, Configuration, GoldTree, OracleError, SystemKind, TransitionSystem};

pub const HEADER: &str = "step\ttransition\tlambda1\tlambda2\tbuffer\tnew_arc";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRow {
    pub step: usize,
    pub transition: String,
    pub lambda1: String,
    pub lambda2: String,
    pub buffer: String,
    pub new_arc: String,
}

impl TraceRow {
    pub fn to_tsv(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}",
            self.step, self.transition, self.lambda1, self.lambda2, self.buffer, self.new_arc
        )
    }
}

/// Static-oracle trace of `tree` under `kind`. The label set is the tree's own.
pub fn oracle_trace(kind: SystemKind, tree: &GoldTree) -> Result<Vec<TraceRow>, OracleError> {
    let sys = TransitionSystem::new(kind, tree.label_set())?;
    let seq = oracle_sequence(&sys, tree)?;
    let mut c = Configuration::initial(tree.len());
    let mut rows = Vec::with_capacity(seq.len());
    for (i, t) in seq.iter().enumerate() {
        let arc = sys.apply(&mut c, t)?;
        rows.push(TraceRow {
            step: i + 1,
            transition: t.display(kind).to_string(),
            lambda1: list(c.lambda1().iter().copied()),
            lambda2: list(c.lambda2()),
            buffer: list(c.buffer()),
            new_arc: arc.map(|a| a.to_string()).unwrap_or_default(),
        });
    }
    Ok(rows)
}

fn list(xs: impl Iterator<Item = usize>) -> String {
    let xs: Vec<usize> = xs.collect();
    NodeList(xs.into_iter()).to_string()
}

/// Header line plus rows, LF-terminated.
pub fn render(rows: &[TraceRow]) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    for row in rows {
        writeln!(out, "{}", row.to_tsv()).expect("writing to a String");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_token_is_one_shift() {
        let tree = GoldTree::new(vec![(0, "root".into())]).unwrap();
        for kind in [SystemKind::Covington, SystemKind::NlCovington] {
            let rows = oracle_trace(kind, &tree).unwrap();
            assert_eq!(rows.len(), 1);
            assert_eq!(rows[0].to_tsv(), "1\tSH\t[1]\t[]\t[]\t");
        }
    }

    #[test]
    fn render_layout() {
        let tree = GoldTree::new(vec![(2, "nsubj".into()), (0, "root".into())]).unwrap();
        let text = render(&oracle_trace(SystemKind::Covington, &tree).unwrap());
        assert_eq!(
            text,
            "step\ttransition\tlambda1\tlambda2\tbuffer\tnew_arc\n\
             1\tSH\t[1]\t[]\t[2]\t\n\
             2\tLA:nsubj\t[]\t[1]\t[2]\t2->1\n\
             3\tSH\t[1, 2]\t[]\t[]\t\n"
        );
    }
}
