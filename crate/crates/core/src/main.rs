use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context as _;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use entsent::context::{self, ContextScheme};
use entsent::corpus::{self, Corpus};
use entsent::features;
use entsent::learn::ModelKind;
use entsent::pipeline::{self, PipelineConfig, PipelineModels, System};
use entsent::{synth, Error};

#[derive(Parser)]
#[command(name = "entsent", version, about = "Entity-level sentiment classification for news comments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Input {
    /// Directory holding comments.jsonl, labels.jsonl and parses.conllu.
    #[arg(long, conflicts_with_all = ["comments", "labels", "parses"])]
    data: Option<PathBuf>,
    #[arg(long)]
    comments: Option<PathBuf>,
    #[arg(long)]
    labels: Option<PathBuf>,
    #[arg(long)]
    parses: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct Resources {
    #[arg(long)]
    lexicon: Option<PathBuf>,
    #[arg(long)]
    negations: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a corpus and print a summary.
    Ingest {
        #[command(flatten)]
        input: Input,
    },
    /// Write entity contexts as JSON Lines.
    ExtractContexts {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        res: Resources,
        #[arg(long, default_value = "proposed")]
        scheme: ContextScheme,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write both stages' feature vectors as JSON Lines.
    Featurize {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        res: Resources,
        #[arg(long, default_value = "proposed")]
        scheme: ContextScheme,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Train both stages and save them as one JSON model file.
    Train {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        res: Resources,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "proposed")]
        scheme: ContextScheme,
        #[arg(long, default_value = "logreg")]
        np_classifier: ModelKind,
        #[arg(long, default_value = "gaussian-nb")]
        pn_classifier: ModelKind,
    },
    /// Cross-validate a system (or `all`) and print the results tables.
    Evaluate {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        res: Resources,
        /// proposed, bow, bow-pos, lexicon-rule, strength-rule, strength-feat, naive-context or all
        #[arg(long, default_value = "proposed")]
        model: String,
        #[arg(long, default_value_t = 10)]
        folds: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        report: Option<PathBuf>,
        /// Out-of-fold predictions as JSON Lines.
        #[arg(long)]
        predictions: Option<PathBuf>,
    },
    /// Label every annotated entity of new comments with a trained model.
    Predict {
        #[command(flatten)]
        res: Resources,
        #[arg(long)]
        model: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        parses: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the synthetic corpus and its manifest.
    Generate {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Write the person-subject ranking corpus instead.
        #[arg(long)]
        person_subject: bool,
    },
}

fn load(input: &Input) -> anyhow::Result<Corpus> {
    let (comments, labels, parses) = match &input.data {
        Some(dir) => {
            let parses = dir.join("parses.conllu");
            (
                dir.join("comments.jsonl"),
                Some(dir.join("labels.jsonl")),
                parses.exists().then_some(parses),
            )
        }
        None => (
            input.comments.clone().context("--comments or --data is required")?,
            input.labels.clone(),
            input.parses.clone(),
        ),
    };
    let corpus = match labels {
        Some(l) => corpus::load_corpus(&comments, &l)?,
        None => corpus::load_comments(&comments)?,
    };
    Ok(match parses {
        Some(p) => corpus::load_parses(&p, corpus)?,
        None => corpus,
    })
}

fn config(res: &Resources) -> PipelineConfig {
    PipelineConfig {
        lexicon_path: res.lexicon.clone(),
        negation_path: res.negations.clone(),
        ..PipelineConfig::default()
    }
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::io(p, e).into()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn jsonl<T: Serialize>(rows: &[T]) -> anyhow::Result<String> {
    Ok(pipeline::predictions_jsonl(rows)?)
}

#[derive(Serialize)]
struct ContextRow<'a> {
    #[serde(flatten)]
    context: &'a context::EntityContext,
    text: String,
}

#[derive(Serialize)]
struct FeatureRow<'a> {
    comment_id: &'a str,
    entity: &'a str,
    stage: &'static str,
    features: std::collections::BTreeMap<&'static str, f64>,
    label: Option<entsent::corpus::SentimentLabel>,
    #[serde(skip_serializing_if = "Option::is_none")]
    forced_by: Option<&'static str>,
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Ingest { input } => {
            let corpus = load(&input)?;
            let mut composition = std::collections::BTreeMap::new();
            for c in &corpus.comments {
                if let Some(k) = corpus.composition(&c.id) {
                    *composition.entry(format!("{k:?}")).or_insert(0usize) += 1;
                }
            }
            let summary = serde_json::json!({
                "comments": corpus.comments.len(),
                "instances": corpus.instances.len(),
                "sentences": corpus.sentence_count(),
                "parsed_sentences": corpus.parsed_sentence_count(),
                "composition": composition,
            });
            println!("{}", serde_json::to_string_pretty(&summary)?);
        }
        Command::ExtractContexts { input, res, scheme, out } => {
            let corpus = load(&input)?;
            let resources = config(&res).resources()?;
            let mut rows = Vec::new();
            for c in &corpus.comments {
                let names: Vec<String> = c.entities().into_iter().map(|e| e.canonical).collect();
                for ctx in context::contexts_for(c, &names, scheme, &resources.pronouns)? {
                    let text = ctx.token_texts(c).join(" ");
                    rows.push(serde_json::to_string(&ContextRow { context: &ctx, text })?);
                }
            }
            emit(out.as_deref(), &rows.into_iter().map(|r| r + "\n").collect::<String>())?;
        }
        Command::Featurize { input, res, scheme, out } => {
            let corpus = load(&input)?;
            let resources = config(&res).resources()?;
            let mut text = String::new();
            for c in &corpus.comments {
                let labels = corpus.labels_of(&c.id);
                for f in features::featurize_comment(c, scheme, &resources)? {
                    let entity = f.entity.canonical.as_str();
                    let label = labels.get(entity).copied();
                    let np = FeatureRow {
                        comment_id: &c.id,
                        entity,
                        stage: "np",
                        features: f.neutral_polar.named().into_iter().collect(),
                        label,
                        forced_by: f.force.rule_name(),
                    };
                    let pn = FeatureRow {
                        stage: "pn",
                        features: f.polarity.named().into_iter().collect(),
                        forced_by: None,
                        ..np
                    };
                    text.push_str(&jsonl(&[np, pn])?);
                }
            }
            emit(out.as_deref(), &text)?;
        }
        Command::Train {
            input,
            res,
            out,
            scheme,
            np_classifier,
            pn_classifier,
        } => {
            let corpus = load(&input)?;
            let cfg = PipelineConfig {
                context_scheme: scheme,
                np_classifier,
                pn_classifier,
                ..config(&res)
            };
            pipeline::train_pipeline(&corpus, &cfg)?.save(&out)?;
        }
        Command::Evaluate {
            input,
            res,
            model,
            folds,
            seed,
            report,
            predictions,
        } => {
            let corpus = load(&input)?;
            let cfg = PipelineConfig {
                folds,
                seed,
                ..config(&res)
            };
            let systems: Vec<System> = if model == "all" {
                System::ALL.to_vec()
            } else {
                vec![model.parse()?]
            };
            let evals = systems
                .into_iter()
                .map(|s| pipeline::run_evaluation(&corpus, &cfg, s))
                .collect::<entsent::Result<Vec<_>>>()?;
            emit(report.as_deref(), &pipeline::render_report(&evals, &cfg))?;
            if let Some(p) = predictions {
                let rows: Vec<_> = evals.iter().flat_map(|e| e.predictions.iter()).collect();
                emit(Some(&p), &jsonl(&rows)?)?;
            }
        }
        Command::Predict {
            res,
            model,
            input,
            parses,
            out,
        } => {
            let models = PipelineModels::load(&model)?;
            let corpus = corpus::load_comments(&input)?;
            let corpus = match parses {
                Some(p) => corpus::load_parses(&p, corpus)?,
                None => corpus,
            };
            let preds = pipeline::predict_corpus(&corpus, &models, &config(&res).resources()?)?;
            emit(Some(&out), &jsonl(&preds)?)?;
        }
        Command::Generate { out, seed, person_subject } => {
            let sc = if person_subject {
                synth::person_subject_corpus(seed)?
            } else {
                synth::generate(seed)?
            };
            sc.write_dir(&out)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let validation = match e.downcast_ref::<Error>() {
                Some(err) => err.is_validation(),
                None => true,
            };
            ExitCode::from(if validation { 2 } else { 1 })
        }
    }
}
