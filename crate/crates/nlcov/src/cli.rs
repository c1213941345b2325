//! Command-line front end. Data goes to standard output, progress and
//! diagnostics to standard error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use nlcov_core::model::corpus_labels;
use nlcov_core::{
    score, transition_stats, ArcSet, GoldTree, Model, PunctPolicy, Sentence, SystemKind,
    TrainOptions, TransitionSystem,
};

use crate::conllx::{gold_arcs, read_conllx, write_conllx, CorpusDocument, ReadOptions};
use crate::error::Error;
use crate::model_file::{read_model, write_model};
use crate::synthetic::{toy_corpus, zipf_corpus};
use crate::trace::{oracle_trace, render};

#[derive(Debug, Parser)]
#[command(name = "nlcov", version, about = "Covington and NL-Covington dependency parsing")]
pub struct Cli {
    #[command(flatten)]
    pub io: IoFlags,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct IoFlags {
    /// Skip sentences with invalid gold trees instead of failing.
    #[arg(long, global = true)]
    pub lenient: bool,
    /// Read CoNLL-U: skip comments, multiword ranges and empty nodes.
    #[arg(long, global = true)]
    pub conllu: bool,
    /// Label for arcs from the artificial root.
    #[arg(long, global = true, default_value = "ROOT")]
    pub root_label: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SystemArg {
    Covington,
    NlCovington,
}

impl From<SystemArg> for SystemKind {
    fn from(s: SystemArg) -> Self {
        match s {
            SystemArg::Covington => SystemKind::Covington,
            SystemArg::NlCovington => SystemKind::NlCovington,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PunctArg {
    Include,
    Exclude,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SynthKind {
    /// Arc lengths drawn from a Zipf(1.5) prior.
    Zipf,
    /// A small noun-phrase/verb grammar.
    Toy,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train an averaged perceptron on a treebank.
    Train {
        #[arg(long, value_enum, default_value = "nl-covington")]
        system: SystemArg,
        /// Output model file.
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        epochs: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        hash_seed: u64,
        /// Training treebank, `-` for standard input.
        input: PathBuf,
    },
    /// Parse a file and write CoNLL-X with predicted heads.
    Parse {
        /// Must match the model's system when given.
        #[arg(long, value_enum)]
        system: Option<SystemArg>,
        #[arg(long)]
        model: PathBuf,
        #[arg(default_value = "-")]
        input: PathBuf,
    },
    /// Attachment scores of a parsed file against a gold file.
    Eval {
        #[arg(long, value_enum)]
        punct: Option<PunctArg>,
        /// Shorthand for `--punct exclude`.
        #[arg(long)]
        ptsd_compat: bool,
        /// Exclude tokens with these POS tags instead of detecting
        /// punctuation by form.
        #[arg(long, value_delimiter = ',')]
        punct_pos: Vec<String>,
        gold: PathBuf,
        #[arg(default_value = "-")]
        predicted: PathBuf,
    },
    /// Oracle transition counts under both systems.
    Stats {
        /// Treebanks; standard input when none are given.
        inputs: Vec<PathBuf>,
    },
    /// Static-oracle transition trace of every sentence.
    OracleTrace {
        #[arg(long, value_enum, default_value = "nl-covington")]
        system: SystemArg,
        #[arg(default_value = "-")]
        input: PathBuf,
    },
    /// Write a synthetic treebank.
    Synth {
        #[arg(long, value_enum, default_value = "zipf")]
        kind: SynthKind,
        #[arg(long, default_value_t = 200)]
        sentences: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

struct Io<'a> {
    stdin: &'a mut dyn BufRead,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn BufRead,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return e.exit_code();
        }
    };
    let mut io = Io {
        stdin,
        stdout,
        stderr,
    };
    match dispatch(cli, &mut io) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(io.stderr, "nlcov: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli, io: &mut Io<'_>) -> Result<(), Error> {
    let flags = cli.io;
    match cli.command {
        Command::Train {
            system,
            model,
            epochs,
            seed,
            hash_seed,
            input,
        } => {
            let opts = TrainOptions {
                epochs: usize::try_from(epochs).map_err(|_| Error::Usage("too many epochs".into()))?,
                seed,
                hash_seed,
            };
            cmd_train(io, &flags, system.into(), &model, opts, &input)
        }
        Command::Parse {
            system,
            model,
            input,
        } => cmd_parse(io, &flags, system.map(Into::into), &model, &input),
        Command::Eval {
            punct,
            ptsd_compat,
            punct_pos,
            gold,
            predicted,
        } => {
            let policy = if !punct_pos.is_empty() {
                PunctPolicy::ExcludeByPos(punct_pos)
            } else {
                match punct {
                    Some(PunctArg::Exclude) => PunctPolicy::ExcludeByForm,
                    Some(PunctArg::Include) => PunctPolicy::Include,
                    None if ptsd_compat => PunctPolicy::ExcludeByForm,
                    None => PunctPolicy::Include,
                }
            };
            cmd_eval(io, &flags, &policy, &gold, &predicted)
        }
        Command::Stats { inputs } => cmd_stats(io, &flags, &inputs),
        Command::OracleTrace { system, input } => cmd_oracle_trace(io, &flags, system.into(), &input),
        Command::Synth {
            kind,
            sentences,
            seed,
        } => {
            let corpus = match kind {
                SynthKind::Zipf => zipf_corpus(sentences, seed),
                SynthKind::Toy => toy_corpus(sentences, seed),
            };
            let gold: Vec<ArcSet> = corpus
                .iter()
                .map(|s| gold_arcs(s).ok_or_else(|| Error::Internal("generated tree invalid".into())))
                .collect::<Result<_, _>>()?;
            let doc = CorpusDocument {
                sentences: corpus,
                source_name: "synthetic".into(),
            };
            write_conllx(BufWriter::new(&mut *io.stdout), &doc, &gold)
        }
    }
}

fn is_stdin(path: &Path) -> bool {
    path.as_os_str() == "-"
}

fn display_name(path: &Path) -> String {
    if is_stdin(path) {
        "<stdin>".into()
    } else {
        path.display().to_string()
    }
}

fn load(io: &mut Io<'_>, flags: &IoFlags, path: &Path) -> Result<CorpusDocument, Error> {
    let name = display_name(path);
    let opts = ReadOptions {
        lenient: flags.lenient,
        conllu: flags.conllu,
    };
    let outcome = if is_stdin(path) {
        read_conllx(&mut *io.stdin, &name, opts)?
    } else {
        let file = File::open(path).map_err(|e| Error::io(&name, e))?;
        read_conllx(BufReader::new(file), &name, opts)?
    };
    for s in &outcome.skipped {
        let _ = writeln!(
            io.stderr,
            "{name}:{}: skipping sentence {}: {}",
            s.line, s.index, s.error
        );
    }
    Ok(outcome.document)
}

fn gold_trees(doc: &CorpusDocument) -> Result<Vec<GoldTree>, Error> {
    doc.sentences
        .iter()
        .enumerate()
        .map(|(index, s)| GoldTree::from_sentence(s).map_err(|error| Error::Oracle { index, error }))
        .collect()
}

fn parse_all(model: &Model, sentences: &[Sentence], root_label: &str) -> Result<Vec<ArcSet>, Error> {
    sentences
        .iter()
        .map(|s| model.greedy_parse(s, root_label).map_err(Error::from))
        .collect()
}

fn cmd_train(
    io: &mut Io<'_>,
    flags: &IoFlags,
    kind: SystemKind,
    model_path: &Path,
    opts: TrainOptions,
    input: &Path,
) -> Result<(), Error> {
    let doc = load(io, flags, input)?;
    let trees = gold_trees(&doc)?;
    if trees.is_empty() {
        return Err(Error::Data(format!("{}: no training sentences", display_name(input))));
    }
    let system = TransitionSystem::new(kind, corpus_labels(&trees))
        .map_err(|e| Error::Data(e.to_string()))?;
    let corpus: Vec<(Sentence, GoldTree)> = doc.sentences.iter().cloned().zip(trees).collect();
    let training = nlcov_core::train(&corpus, &system, &opts)?;
    for (epoch, m) in training.mismatches.iter().enumerate() {
        let _ = writeln!(io.stderr, "epoch {}\tmismatches {m}", epoch + 1);
    }
    let predicted = parse_all(&training.model, &doc.sentences, &flags.root_label)?;
    let report = score(&doc.sentences, &predicted, &PunctPolicy::Include)?;
    let _ = writeln!(io.stderr, "training UAS\t{:.2}", 100.0 * report.uas);

    let name = model_path.display().to_string();
    let file = File::create(model_path).map_err(|e| Error::io(&name, e))?;
    write_model(BufWriter::new(file), &training.model)
}

fn cmd_parse(
    io: &mut Io<'_>,
    flags: &IoFlags,
    system: Option<SystemKind>,
    model_path: &Path,
    input: &Path,
) -> Result<(), Error> {
    let name = model_path.display().to_string();
    let file = File::open(model_path).map_err(|e| Error::io(&name, e))?;
    let model = read_model(BufReader::new(file), &name)?;
    if let Some(requested) = system {
        if requested != model.kind() {
            return Err(Error::SystemMismatch {
                model: model.kind(),
                requested,
            });
        }
    }
    let doc = load(io, flags, input)?;
    let predicted = parse_all(&model, &doc.sentences, &flags.root_label)?;
    write_conllx(BufWriter::new(&mut *io.stdout), &doc, &predicted)
}

fn cmd_eval(
    io: &mut Io<'_>,
    flags: &IoFlags,
    policy: &PunctPolicy,
    gold_path: &Path,
    predicted_path: &Path,
) -> Result<(), Error> {
    if is_stdin(gold_path) && is_stdin(predicted_path) {
        return Err(Error::Usage("gold and predicted cannot both be standard input".into()));
    }
    let gold = load(io, flags, gold_path)?;
    let predicted = load(io, flags, predicted_path)?;
    if gold.sentences.len() != predicted.sentences.len() {
        return Err(Error::Arity {
            expected: gold.sentences.len(),
            found: predicted.sentences.len(),
        });
    }
    let mut arcs = Vec::with_capacity(predicted.sentences.len());
    for (index, (g, p)) in gold.sentences.iter().zip(&predicted.sentences).enumerate() {
        if g.len() != p.len() {
            return Err(Error::Data(format!(
                "sentence {index}: {} gold tokens but {} predicted",
                g.len(),
                p.len()
            )));
        }
        arcs.push(gold_arcs(p).ok_or_else(|| {
            Error::Data(format!("sentence {index}: predicted file lacks a complete tree"))
        })?);
    }
    let report = score(&gold.sentences, &arcs, policy)?;
    writeln!(io.stdout, "UAS\t{:.2}", 100.0 * report.uas).map_err(|e| Error::io("<stdout>", e))?;
    writeln!(io.stdout, "LAS\t{:.2}", 100.0 * report.las).map_err(|e| Error::io("<stdout>", e))?;
    Ok(())
}

fn cmd_stats(io: &mut Io<'_>, flags: &IoFlags, inputs: &[PathBuf]) -> Result<(), Error> {
    let stdin = [PathBuf::from("-")];
    let inputs = if inputs.is_empty() { &stdin[..] } else { inputs };
    let mut out = String::from("dataset\tsentences\tavg_cov\tavg_nl\treduction_pct\n");
    for path in inputs {
        let doc = load(io, flags, path)?;
        let trees = gold_trees(&doc)?;
        let stats = transition_stats(&trees)?;
        out.push_str(&format!(
            "{}\t{}\t{:.2}\t{:.2}\t{:.2}\n",
            display_name(path),
            trees.len(),
            stats.avg_cov,
            stats.avg_nl,
            stats.reduction_pct()
        ));
    }
    io.stdout
        .write_all(out.as_bytes())
        .map_err(|e| Error::io("<stdout>", e))
}

fn cmd_oracle_trace(
    io: &mut Io<'_>,
    flags: &IoFlags,
    kind: SystemKind,
    input: &Path,
) -> Result<(), Error> {
    let doc = load(io, flags, input)?;
    let trees = gold_trees(&doc)?;
    let mut out = String::new();
    for (index, tree) in trees.iter().enumerate() {
        if index > 0 {
            out.push('\n');
        }
        let rows = oracle_trace(kind, tree).map_err(|error| Error::Oracle { index, error })?;
        out.push_str(&render(&rows));
    }
    io.stdout
        .write_all(out.as_bytes())
        .map_err(|e| Error::io("<stdout>", e))
}
