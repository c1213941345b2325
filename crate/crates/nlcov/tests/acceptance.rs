//! Acceptance harness: one `[PASS]`/`[FAIL]` line per criterion, nonzero
//! exit status if any criterion fails.
//!
//! Set `NLCOV_ACCEPTANCE_CORPUS` to a CoNLL-X file to additionally check the
//! sequence-length direction on a treebank of your own.

use std::time::Instant;

use nlcov::conllx::{read_conllx, ReadOptions};
use nlcov::synthetic::{toy_corpus, zipf_corpus, ROOT_LABEL};
use nlcov_core::oracle::{self, all_gold_trees};
use nlcov_core::{
    expand_to_covington, is_projective, oracle_sequence, random_gold_tree, score,
    transition_stats, Configuration, GoldTree, Model, PunctPolicy, Sentence, SystemKind,
    TrainOptions, Transition, TransitionSystem,
};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if $cond {
        } else {
            return Err(format!($($msg)+));
        }
    };
}

fn systems(tree: &GoldTree) -> (TransitionSystem, TransitionSystem) {
    let labels = tree.label_set();
    (
        TransitionSystem::new(SystemKind::Covington, labels.clone()).expect("labels"),
        TransitionSystem::new(SystemKind::NlCovington, labels).expect("labels"),
    )
}

fn cli(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut input = stdin.as_bytes();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = nlcov::cli::run(
        std::iter::once("nlcov").chain(args.iter().copied()),
        &mut input,
        &mut out,
        &mut err,
    );
    (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&err).into_owned())
}

fn conll(heads: &[usize]) -> String {
    let mut s = String::new();
    for (i, &h) in heads.iter().enumerate() {
        let label = if h == 0 { ROOT_LABEL } else { "dep" };
        s.push_str(&format!("{}\tw{}\t_\tX\tX\t_\t{h}\t{label}\t_\t_\n", i + 1, i + 1));
    }
    s.push('\n');
    s
}

/// The five-word tree 1->2, 1->3, 1->5, 5->4 with 1 under the root.
const FIVE_WORD_TREE: [usize; 5] = [0, 1, 1, 5, 1];

const COVINGTON_TRACE: &str = "\
step\ttransition\tlambda1\tlambda2\tbuffer\tnew_arc
1\tSH\t[1]\t[]\t[2, 3, 4, 5]\t
2\tRA:dep\t[]\t[1]\t[2, 3, 4, 5]\t1->2
3\tSH\t[1, 2]\t[]\t[3, 4, 5]\t
4\tNA\t[1]\t[2]\t[3, 4, 5]\t
5\tRA:dep\t[]\t[1, 2]\t[3, 4, 5]\t1->3
6\tSH\t[1, 2, 3]\t[]\t[4, 5]\t
7\tSH\t[1, 2, 3, 4]\t[]\t[5]\t
8\tLA:dep\t[1, 2, 3]\t[4]\t[5]\t5->4
9\tNA\t[1, 2]\t[3, 4]\t[5]\t
10\tNA\t[1]\t[2, 3, 4]\t[5]\t
11\tRA:dep\t[]\t[1, 2, 3, 4]\t[5]\t1->5
12\tSH\t[1, 2, 3, 4, 5]\t[]\t[]\t
";

const NL_TRACE: &str = "\
step\ttransition\tlambda1\tlambda2\tbuffer\tnew_arc
1\tSH\t[1]\t[]\t[2, 3, 4, 5]\t
2\tRA(1):dep\t[]\t[1]\t[2, 3, 4, 5]\t1->2
3\tSH\t[1, 2]\t[]\t[3, 4, 5]\t
4\tRA(2):dep\t[]\t[1, 2]\t[3, 4, 5]\t1->3
5\tSH\t[1, 2, 3]\t[]\t[4, 5]\t
6\tSH\t[1, 2, 3, 4]\t[]\t[5]\t
7\tLA(1):dep\t[1, 2, 3]\t[4]\t[5]\t5->4
8\tRA(3):dep\t[]\t[1, 2, 3, 4]\t[5]\t1->5
9\tSH\t[1, 2, 3, 4, 5]\t[]\t[]\t
";

fn golden_traces() -> Outcome {
    let input = conll(&FIVE_WORD_TREE);
    for (system, expected, rows) in [("covington", COVINGTON_TRACE, 12), ("nl-covington", NL_TRACE, 9)] {
        let (code, out, err) = cli(&["oracle-trace", "--system", system], &input);
        ensure!(code == 0, "{system}: exit {code}: {err}");
        ensure!(out == expected, "{system}: trace differs:\n{out}");
        ensure!(out.lines().count() == rows + 1, "{system}: row count");
    }
    Ok("12-row and 9-row traces match row for row".into())
}

/// Every tree the round-trip criteria run over.
fn test_trees() -> Vec<GoldTree> {
    let mut trees: Vec<GoldTree> = (1..=5).flat_map(all_gold_trees).collect();
    for n in [10, 20, 40] {
        trees.extend((0..1000u64).map(|i| random_gold_tree(n, 0x5eed_0000 + 1000 * n as u64 + i)));
    }
    trees
}

fn oracle_round_trip(trees: &[GoldTree]) -> Outcome {
    let exhaustive: usize = (1..=5).map(|n| all_gold_trees(n).count()).sum();
    let expected: usize = (1..=5u32).map(|n| (n as usize + 1).pow(n - 1)).sum();
    ensure!(exhaustive == expected, "enumerated {exhaustive} small trees, expected {expected}");
    ensure!(all_gold_trees(5).count() == 1296, "n=5 enumeration incomplete");
    for (idx, tree) in trees.iter().enumerate() {
        let (cov, nl) = systems(tree);
        for sys in [&cov, &nl] {
            let seq = oracle_sequence(sys, tree).map_err(|e| format!("tree {idx}: {e}"))?;
            let end = sys
                .run_sequence(tree.len(), &seq)
                .map_err(|e| format!("tree {idx}: {e}"))?;
            ensure!(end.is_terminal(), "tree {idx}: {} run not terminal", sys.kind());
            ensure!(
                end.into_arcs().with_root(tree.len(), oracle::ROOT_LABEL) == tree.arc_set(),
                "tree {idx}: {} did not reproduce gold",
                sys.kind()
            );
        }
    }
    Ok(format!("{} trees ({exhaustive} exhaustive, 3000 random), both systems", trees.len()))
}

fn mapping_equivalence(trees: &[GoldTree]) -> Outcome {
    for (idx, tree) in trees.iter().enumerate() {
        let (cov, nl) = systems(tree);
        let nl_seq = oracle_sequence(&nl, tree).map_err(|e| e.to_string())?;
        let cov_seq = oracle_sequence(&cov, tree).map_err(|e| e.to_string())?;
        let expanded = expand_to_covington(&nl_seq).map_err(|e| e.to_string())?;
        ensure!(expanded == cov_seq, "tree {idx}: expansion differs from the Covington oracle");
        let a = nl.run_sequence(tree.len(), &nl_seq).map_err(|e| e.to_string())?;
        let b = cov.run_sequence(tree.len(), &expanded).map_err(|e| e.to_string())?;
        ensure!(a.arcs() == b.arcs(), "tree {idx}: terminal arcs differ");
    }

    let labels = ["a", "b"];
    let nl = TransitionSystem::new(SystemKind::NlCovington, labels).expect("labels");
    let cov = TransitionSystem::new(SystemKind::Covington, labels).expect("labels");
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for run in 0..1000 {
        let n = rng.random_range(1..=30);
        let mut c = Configuration::initial(n);
        let mut seq: Vec<Transition> = Vec::new();
        while !c.is_terminal() {
            let legal = nl.legal_transitions(&c).map_err(|e| e.to_string())?;
            let t = legal.choose(&mut rng).expect("Shift is legal").clone();
            nl.apply(&mut c, &t).map_err(|e| e.to_string())?;
            seq.push(t);
        }
        let expanded = expand_to_covington(&seq).map_err(|e| e.to_string())?;
        let b = cov
            .run_sequence(n, &expanded)
            .map_err(|e| format!("random run {run}: expansion illegal: {e}"))?;
        ensure!(b.arcs() == c.arcs(), "random run {run}: arcs differ");
        ensure!(b.lambda1() == c.lambda1(), "random run {run}: final lists differ");
    }
    Ok(format!("{} oracle sequences and 1000 random legal sequences", trees.len()))
}

fn length_laws(trees: &[GoldTree]) -> Outcome {
    for (idx, tree) in trees.iter().enumerate() {
        let (cov, nl) = systems(tree);
        let nl_seq = oracle_sequence(&nl, tree).map_err(|e| e.to_string())?;
        let cov_len = oracle_sequence(&cov, tree).map_err(|e| e.to_string())?.len();
        let n = tree.len();
        let non_root = tree.arcs().filter(|a| a.head != 0).count();
        ensure!(nl_seq.len() == n + non_root, "tree {idx}: NL length {} != {n} + {non_root}", nl_seq.len());
        // k never exceeds the arc's length.
        let overhead: usize = tree
            .arcs()
            .filter(|a| a.head != 0)
            .map(|a| a.head.abs_diff(a.dependent) - 1)
            .sum();
        ensure!(
            cov_len - nl_seq.len() <= overhead,
            "tree {idx}: Covington surplus exceeds the distance bound"
        );
        let sum_k: usize = nl_seq.iter().filter_map(Transition::k).map(|k| k - 1).sum();
        ensure!(cov_len - nl_seq.len() == sum_k, "tree {idx}: surplus {} != sum(k-1) {sum_k}", cov_len - nl_seq.len());
    }
    Ok(format!("exact on {} trees", trees.len()))
}

fn bundled_corpus() -> String {
    std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/data/synthetic-zipf.conllx"))
        .expect("bundled corpus")
}

fn trees_of(sentences: &[Sentence]) -> Result<Vec<GoldTree>, String> {
    sentences
        .iter()
        .map(|s| GoldTree::from_sentence(s).map_err(|e| e.to_string()))
        .collect()
}

fn sequence_length_direction() -> Outcome {
    let text = bundled_corpus();
    let doc = read_conllx(text.as_bytes(), "bundled", ReadOptions::default())
        .map_err(|e| e.to_string())?
        .document;
    ensure!(doc.sentences.len() == 200, "bundled corpus has {} sentences", doc.sentences.len());
    ensure!(doc.sentences == zipf_corpus(200, 1), "bundled corpus differs from `synth --seed 1`");
    let stats = transition_stats(&trees_of(&doc.sentences)?).map_err(|e| e.to_string())?;
    let red = stats.reduction_pct();
    ensure!(stats.avg_nl < stats.avg_cov, "avg_nl {} >= avg_cov {}", stats.avg_nl, stats.avg_cov);
    ensure!((20.0..=60.0).contains(&red), "reduction {red:.2}% outside [20, 60]");
    let mut msg = format!(
        "synthetic Zipf(1.5): {:.2} -> {:.2} transitions/sentence, {red:.2}% shorter",
        stats.avg_cov, stats.avg_nl
    );

    if let Ok(path) = std::env::var("NLCOV_ACCEPTANCE_CORPUS") {
        let file = std::fs::File::open(&path).map_err(|e| format!("{path}: {e}"))?;
        let doc = read_conllx(std::io::BufReader::new(file), &path, ReadOptions::default())
            .map_err(|e| e.to_string())?
            .document;
        let s = transition_stats(&trees_of(&doc.sentences)?).map_err(|e| e.to_string())?;
        ensure!(s.avg_nl < s.avg_cov, "{path}: avg_nl {} >= avg_cov {}", s.avg_nl, s.avg_cov);
        msg.push_str(&format!("; {path}: {:.2} -> {:.2}", s.avg_cov, s.avg_nl));
    }
    Ok(msg)
}

fn star_lengths(n: usize) -> Result<(usize, usize), String> {
    let heads = (1..=n).map(|d| (if d == 1 { 0 } else { 1 }, "dep".to_string())).collect();
    let tree = GoldTree::new(heads).map_err(|e| e.to_string())?;
    let (cov, nl) = systems(&tree);
    Ok((
        oracle_sequence(&cov, &tree).map_err(|e| e.to_string())?.len(),
        oracle_sequence(&nl, &tree).map_err(|e| e.to_string())?.len(),
    ))
}

fn worst_case_bound() -> Outcome {
    let (cov50, nl50) = star_lengths(50)?;
    let (cov100, nl100) = star_lengths(100)?;
    // Word j needs j - 2 No-Arcs before its arc to word 1: n Shifts plus
    // sum_{j=2..n} (j - 1) steps.
    let closed = |n: usize| n + n * (n - 1) / 2;
    ensure!(cov50 == closed(50), "Covington star length {cov50} != {}", closed(50));
    ensure!(cov100 == closed(100), "Covington star length {cov100} != {}", closed(100));
    ensure!(nl50 == 2 * 50 - 1 && nl100 == 2 * 100 - 1, "NL star lengths {nl50}, {nl100}");
    let ratio = cov100 as f64 / cov50 as f64;
    ensure!((3.8..=4.2).contains(&ratio), "len(100)/len(50) = {ratio:.3}");
    Ok(format!("n=50: Covington {cov50}, NL {nl50}; len(100)/len(50) = {ratio:.3}"))
}

/// Training and held-out UAS of a model trained on `train_set`, and the
/// held-out UAS of an untrained model.
fn learn(kind: SystemKind, train_set: &[Sentence], held_out: &[Sentence]) -> Result<(f64, f64, f64), String> {
    let trees = trees_of(train_set)?;
    let labels = nlcov_core::model::corpus_labels(&trees);
    let sys = TransitionSystem::new(kind, labels).map_err(|e| e.to_string())?;
    let pairs: Vec<(Sentence, GoldTree)> = train_set.iter().cloned().zip(trees).collect();
    let model = nlcov_core::train(&pairs, &sys, &TrainOptions::default())
        .map_err(|e| e.to_string())?
        .model;
    let uas = |m: &Model, data: &[Sentence]| -> Result<f64, String> {
        let pred = data
            .iter()
            .map(|s| m.greedy_parse(&s.strip_gold(), ROOT_LABEL))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        Ok(score(data, &pred, &PunctPolicy::Include).map_err(|e| e.to_string())?.uas)
    };
    Ok((uas(&model, train_set)?, uas(&model, held_out)?, uas(&Model::zero(sys, 0), held_out)?))
}

/// Gated on the default system. Covington is reported alongside: with
/// focus-word features alone it cannot tell No-Arc from Shift when that
/// depends on pending arcs further left.
fn learning_sanity() -> Outcome {
    let corpus = toy_corpus(60, 2024);
    let (train_set, held_out) = corpus.split_at(50);
    let (train, held, untrained) = learn(SystemKind::NlCovington, train_set, held_out)?;
    ensure!(train >= 0.95, "nl-covington: training UAS {:.2}% < 95%", 100.0 * train);
    ensure!(held > untrained, "nl-covington: held-out UAS {held:.3} not above untrained {untrained:.3}");
    let (cov_train, cov_held, _) = learn(SystemKind::Covington, train_set, held_out)?;
    Ok(format!(
        "nl-covington: train {:.1}%, held-out {:.1}% vs untrained {:.1}% \
         (covington, not gated: train {:.1}%, held-out {:.1}%)",
        100.0 * train,
        100.0 * held,
        100.0 * untrained,
        100.0 * cov_train,
        100.0 * cov_held
    ))
}

/// Heads of hand-built trees with crossing arcs.
const NON_PROJECTIVE: [&[usize]; 6] = [
    &[3, 0, 2, 2],
    &[0, 4, 1, 1],
    // Crosses only the root arc.
    &[3, 0, 2],
    &[0, 5, 1, 2, 1, 4],
    &[0, 4, 1, 1, 3],
    &[4, 5, 0, 3, 3, 1, 2],
];

fn non_projectivity() -> Outcome {
    let text: String = NON_PROJECTIVE.iter().map(|h| conll(h)).collect();
    let doc = read_conllx(text.as_bytes(), "hand-built", ReadOptions::default())
        .map_err(|e| e.to_string())?
        .document;
    ensure!(doc.sentences.len() == NON_PROJECTIVE.len(), "reader dropped sentences");
    let trees = trees_of(&doc.sentences)?;
    for (idx, tree) in trees.iter().enumerate() {
        ensure!(!is_projective(tree), "tree {idx} is projective");
        let (cov, nl) = systems(tree);
        for sys in [&cov, &nl] {
            let seq = oracle_sequence(sys, tree).map_err(|e| format!("tree {idx}: {e}"))?;
            let arcs = sys
                .run_sequence(tree.len(), &seq)
                .map_err(|e| format!("tree {idx}: {e}"))?
                .into_arcs()
                .with_root(tree.len(), ROOT_LABEL);
            ensure!(arcs == tree.arc_set(), "tree {idx}: {} reconstruction differs", sys.kind());
        }
        let (code, out, err) = cli(&["oracle-trace"], &conll(NON_PROJECTIVE[idx]));
        ensure!(code == 0 && !out.is_empty(), "tree {idx}: oracle-trace failed: {err}");
    }
    Ok(format!("{} crossing-arc trees reconstructed under both systems", trees.len()))
}

fn main() {
    let trees = test_trees();
    let criteria: Vec<Criterion<'_>> = vec![
        ("golden-traces", Box::new(golden_traces)),
        ("oracle-round-trip", Box::new(|| oracle_round_trip(&trees))),
        ("mapping-equivalence", Box::new(|| mapping_equivalence(&trees))),
        ("length-laws", Box::new(|| length_laws(&trees))),
        ("sequence-length-direction", Box::new(sequence_length_direction)),
        ("worst-case-bound", Box::new(worst_case_bound)),
        ("learning-sanity", Box::new(learning_sanity)),
        ("non-projectivity", Box::new(non_projectivity)),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {name}: {detail} ({secs:.2}s)"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {name}: {detail} ({secs:.2}s)");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
