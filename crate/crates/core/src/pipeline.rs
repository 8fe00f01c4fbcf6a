//! Two-stage classification, evaluation drivers and report rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{self, Setting};
use crate::context::ContextScheme;
use crate::corpus::{Comment, Composition, Corpus, SentimentLabel};
use crate::error::{Error, Result};
use crate::features::{self, EntityFeatures, Force, Resources};
use crate::learn::{self, Dataset, EvalReport, Hyper, Model, ModelKind};
use crate::lexicon::{self, NegationList, PolarityLexicon};

pub const NEUTRAL: i64 = 0;
pub const POLAR: i64 = 1;
pub const THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    /// Bundled lexicon when absent.
    pub lexicon_path: Option<PathBuf>,
    /// Bundled negation list when absent.
    pub negation_path: Option<PathBuf>,
    pub seed: u64,
    pub np_classifier: ModelKind,
    pub pn_classifier: ModelKind,
    pub folds: usize,
    pub context_scheme: ContextScheme,
    pub hyper: Hyper,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            lexicon_path: None,
            negation_path: None,
            seed: 42,
            np_classifier: ModelKind::LogReg,
            pn_classifier: ModelKind::GaussianNb,
            folds: 10,
            context_scheme: ContextScheme::Proposed,
            hyper: Hyper::default(),
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.folds < 2 {
            return Err(Error::InvalidConfig(format!("folds must be at least 2, got {}", self.folds)));
        }
        for path in [&self.lexicon_path, &self.negation_path].into_iter().flatten() {
            if !path.exists() {
                return Err(Error::InvalidConfig(format!("{} does not exist", path.display())));
            }
        }
        Ok(())
    }

    pub fn resources(&self) -> Result<Resources> {
        self.validate()?;
        let mut res = Resources::bundled();
        if let Some(p) = &self.lexicon_path {
            res.lexicon = PolarityLexicon::load(p)?;
        }
        if let Some(p) = &self.negation_path {
            res.negations = NegationList::load(p)?;
        }
        Ok(res)
    }
}

/// One labelled instance with its features under a given context scheme.
#[derive(Debug, Clone)]
pub struct InstanceRecord {
    pub comment_id: String,
    pub label: SentimentLabel,
    pub composition: Composition,
    pub features: EntityFeatures,
}

/// Featurizes every labelled instance, in label-file order.
pub fn featurize_corpus(corpus: &Corpus, scheme: ContextScheme, res: &Resources) -> Result<Vec<InstanceRecord>> {
    let per_comment: BTreeMap<&str, Vec<EntityFeatures>> = corpus
        .comments
        .par_iter()
        .map(|c| Ok((c.id.as_str(), features::featurize_comment(c, scheme, res)?)))
        .collect::<Result<_>>()?;
    let compositions: BTreeMap<&str, Composition> = corpus
        .comments
        .iter()
        .filter_map(|c| corpus.composition(&c.id).map(|k| (c.id.as_str(), k)))
        .collect();
    corpus
        .instances
        .iter()
        .map(|inst| {
            let feats = per_comment[inst.comment_id.as_str()]
                .iter()
                .find(|f| f.entity.canonical == inst.entity)
                .ok_or_else(|| Error::UnknownEntity {
                    comment_id: inst.comment_id.clone(),
                    entity: inst.entity.clone(),
                })?;
            Ok(InstanceRecord {
                comment_id: inst.comment_id.clone(),
                label: inst.label,
                composition: compositions[inst.comment_id.as_str()],
                features: feats.clone(),
            })
        })
        .collect()
}

/// Stage-1 instances: every instance of neutral and pseudo-polar comments.
pub fn stage1_indices(records: &[InstanceRecord]) -> Vec<usize> {
    (0..records.len())
        .filter(|&i| matches!(records[i].composition, Composition::Neutral | Composition::PseudoPolar))
        .collect()
}

/// Stage-2 instances: polar instances of polar and pseudo-polar comments.
pub fn stage2_indices(records: &[InstanceRecord]) -> Vec<usize> {
    (0..records.len())
        .filter(|&i| records[i].composition != Composition::Neutral && records[i].label.is_polar())
        .collect()
}

/// Per test row: (predicted class, (predicted class, rule that forced it)).
type FoldOutput = Vec<(i64, (i64, Option<String>))>;

fn stage1_label(l: SentimentLabel) -> i64 {
    if l.is_polar() {
        POLAR
    } else {
        NEUTRAL
    }
}

fn named_map(named: Vec<(&'static str, f64)>) -> BTreeMap<String, f64> {
    named.into_iter().map(|(n, v)| (n.to_string(), v)).collect()
}

fn np_vector(f: &EntityFeatures) -> Vec<(&'static str, f64)> {
    f.neutral_polar.named()
}

fn pn_vector(f: &EntityFeatures) -> Vec<(&'static str, f64)> {
    f.polarity.named()
}

fn strength_vector(f: &EntityFeatures) -> Vec<(&'static str, f64)> {
    vec![
        ("PosStrength", f64::from(f.polarity.pos_strength)),
        ("NegStrength", f64::from(f.polarity.neg_strength)),
    ]
}

pub fn stage1_dataset(records: &[InstanceRecord]) -> Result<Dataset> {
    let idx = stage1_indices(records);
    dataset_for(records, &idx, np_vector, |r| stage1_label(r.label), vec![NEUTRAL, POLAR])
}

pub fn stage2_dataset(records: &[InstanceRecord]) -> Result<Dataset> {
    let idx = stage2_indices(records);
    dataset_for(records, &idx, pn_vector, |r| r.label.code(), pn_classes())
}

fn pn_classes() -> Vec<i64> {
    vec![SentimentLabel::Negative.code(), SentimentLabel::Positive.code()]
}

fn dataset_for(
    records: &[InstanceRecord],
    idx: &[usize],
    vector: fn(&EntityFeatures) -> Vec<(&'static str, f64)>,
    label: impl Fn(&InstanceRecord) -> i64,
    class_ids: Vec<i64>,
) -> Result<Dataset> {
    let names: Vec<String> = match idx.first() {
        Some(&i) => vector(&records[i].features).into_iter().map(|(n, _)| n.to_string()).collect(),
        None => Vec::new(),
    };
    let rows = idx
        .iter()
        .map(|&i| vector(&records[i].features).into_iter().map(|(_, v)| v).collect())
        .collect();
    let labels = idx.iter().map(|&i| label(&records[i])).collect();
    Dataset::with_classes(names, rows, labels, class_ids)
}

/// Both stage models plus the settings needed to featurize new comments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineModels {
    pub context_scheme: ContextScheme,
    pub stage1: Model,
    pub stage2: Model,
}

impl PipelineModels {
    pub fn save(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string_pretty(self)?;
        std::fs::write(path, json + "\n").map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

pub fn train_pipeline(corpus: &Corpus, config: &PipelineConfig) -> Result<PipelineModels> {
    let res = config.resources()?;
    let records = featurize_corpus(corpus, config.context_scheme, &res)?;
    let s1 = stage1_dataset(&records)?;
    let s2 = stage2_dataset(&records)?;
    let stage1 =
        learn::train(&s1, config.np_classifier, &config.hyper).map_err(|e| explain(e, "stage 1 (neutral and pseudo-polar comments)"))?;
    let stage2 = learn::train(&s2, config.pn_classifier, &config.hyper)
        .map_err(|e| explain(e, "stage 2 (polar instances of polar and pseudo-polar comments)"))?;
    Ok(PipelineModels {
        context_scheme: config.context_scheme,
        stage1,
        stage2,
    })
}

fn explain(e: Error, what: &str) -> Error {
    match e {
        Error::SingleClassData(msg) => Error::SingleClassData(format!("{what}: {msg}")),
        other => other,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub comment_id: String,
    pub entity: String,
    pub label: SentimentLabel,
    /// Probability of the polar class; absent when a rule decided stage 1.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stage1_prob: Option<f64>,
    /// Probability of the positive class; absent for neutral outcomes.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stage2_prob: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub forced_by: Option<String>,
}

fn decide(comment_id: &str, f: &EntityFeatures, models: &PipelineModels) -> Prediction {
    let mut p = Prediction {
        comment_id: comment_id.to_string(),
        entity: f.entity.canonical.clone(),
        label: SentimentLabel::Neutral,
        stage1_prob: None,
        stage2_prob: None,
        forced_by: f.force.rule_name().map(str::to_string),
    };
    let polar = match f.force {
        Force::ForceNeutral => false,
        Force::ForcePolar => true,
        Force::NoForce => {
            let x = models.stage1.align(&named_map(np_vector(f)));
            let prob = models.stage1.prob_of(&x, POLAR);
            p.stage1_prob = Some(prob);
            prob > THRESHOLD
        }
    };
    if polar {
        let x = models.stage2.align(&named_map(pn_vector(f)));
        let prob = models.stage2.prob_of(&x, SentimentLabel::Positive.code());
        p.stage2_prob = Some(prob);
        p.label = if prob > THRESHOLD {
            SentimentLabel::Positive
        } else {
            SentimentLabel::Negative
        };
    }
    p
}

pub fn predict_entity(comment: &Comment, entity: &str, models: &PipelineModels, res: &Resources) -> Result<Prediction> {
    predict_comment(comment, models, res)?
        .into_iter()
        .find(|p| p.entity == entity)
        .ok_or_else(|| Error::UnknownEntity {
            comment_id: comment.id.clone(),
            entity: entity.to_string(),
        })
}

/// Predictions for every annotated entity of a comment, in mention order.
pub fn predict_comment(comment: &Comment, models: &PipelineModels, res: &Resources) -> Result<Vec<Prediction>> {
    Ok(features::featurize_comment(comment, models.context_scheme, res)?
        .iter()
        .map(|f| decide(&comment.id, f, models))
        .collect())
}

pub fn predict_corpus(corpus: &Corpus, models: &PipelineModels, res: &Resources) -> Result<Vec<Prediction>> {
    let per: Vec<Vec<Prediction>> = corpus
        .comments
        .par_iter()
        .map(|c| predict_comment(c, models, res))
        .collect::<Result<_>>()?;
    Ok(per.into_iter().flatten().collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum System {
    Proposed,
    Bow,
    BowPos,
    LexiconRule,
    StrengthRule,
    StrengthFeat,
    NaiveContext,
}

impl System {
    pub const ALL: [System; 7] = [
        System::Proposed,
        System::Bow,
        System::BowPos,
        System::LexiconRule,
        System::StrengthRule,
        System::StrengthFeat,
        System::NaiveContext,
    ];

    pub fn name(self) -> &'static str {
        match self {
            System::Proposed => "proposed",
            System::Bow => "bow",
            System::BowPos => "bow-pos",
            System::LexiconRule => "lexicon-rule",
            System::StrengthRule => "strength-rule",
            System::StrengthFeat => "strength-feat",
            System::NaiveContext => "naive-context",
        }
    }
}

impl std::str::FromStr for System {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        System::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown system {s:?}")))
    }
}

/// One out-of-fold decision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldPrediction {
    pub system: String,
    pub stage: u8,
    pub comment_id: String,
    pub entity: String,
    pub gold: i64,
    pub predicted: i64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub forced_by: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub system: System,
    pub stage1: EvalReport,
    pub stage2: EvalReport,
    /// Feature rankings by information gain over each stage's full data;
    /// empty for systems without a fixed feature set.
    pub stage1_ranking: Vec<(String, f64)>,
    pub stage2_ranking: Vec<(String, f64)>,
    pub predictions: Vec<FoldPrediction>,
}

/// Cross-validates one system on both stages.
pub fn run_evaluation(corpus: &Corpus, config: &PipelineConfig, system: System) -> Result<Evaluation> {
    let res = config.resources()?;
    let scheme = if system == System::NaiveContext {
        ContextScheme::Naive
    } else {
        config.context_scheme
    };
    let records = featurize_corpus(corpus, scheme, &res)?;
    let comments: BTreeMap<&str, &Comment> = corpus.comments.iter().map(|c| (c.id.as_str(), c)).collect();
    let ctx = EvalCtx {
        records: &records,
        comments,
        res: &res,
        config,
        system,
    };

    let s1 = stage1_indices(&records);
    let s2 = stage2_indices(&records);
    let (stage1, p1) = ctx.run_stage(&s1, Stage::One)?;
    let (stage2, p2) = ctx.run_stage(&s2, Stage::Two)?;

    let (stage1_ranking, stage2_ranking) = match system {
        System::Proposed | System::NaiveContext => (
            learn::info_gain_rank(&stage1_dataset(&records)?),
            learn::info_gain_rank(&stage2_dataset(&records)?),
        ),
        System::StrengthFeat => (
            learn::info_gain_rank(&dataset_for(
                &records,
                &s1,
                strength_vector,
                |r| stage1_label(r.label),
                vec![NEUTRAL, POLAR],
            )?),
            learn::info_gain_rank(&dataset_for(&records, &s2, strength_vector, |r| r.label.code(), pn_classes())?),
        ),
        _ => (Vec::new(), Vec::new()),
    };

    Ok(Evaluation {
        system,
        stage1,
        stage2,
        stage1_ranking,
        stage2_ranking,
        predictions: p1.into_iter().chain(p2).collect(),
    })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Stage {
    One,
    Two,
}

struct EvalCtx<'a> {
    records: &'a [InstanceRecord],
    comments: BTreeMap<&'a str, &'a Comment>,
    res: &'a Resources,
    config: &'a PipelineConfig,
    system: System,
}

impl EvalCtx<'_> {
    fn gold(&self, i: usize, stage: Stage) -> i64 {
        match stage {
            Stage::One => stage1_label(self.records[i].label),
            Stage::Two => self.records[i].label.code(),
        }
    }

    fn classes(stage: Stage) -> Vec<i64> {
        match stage {
            Stage::One => vec![NEUTRAL, POLAR],
            Stage::Two => pn_classes(),
        }
    }

    fn run_stage(&self, idx: &[usize], stage: Stage) -> Result<(EvalReport, Vec<FoldPrediction>)> {
        let labels: Vec<i64> = idx.iter().map(|&i| self.gold(i, stage)).collect();
        let out = learn::cross_validate_with(
            &labels,
            &Self::classes(stage),
            self.config.folds,
            self.config.seed,
            |train, test| {
                let train: Vec<usize> = train.iter().map(|&t| idx[t]).collect();
                let test: Vec<usize> = test.iter().map(|&t| idx[t]).collect();
                self.fold(&train, &test, stage)
            },
        )?;
        let predictions = idx
            .iter()
            .zip(out.predictions)
            .map(|(&i, (predicted, forced_by))| {
                let r = &self.records[i];
                FoldPrediction {
                    system: self.system.name().to_string(),
                    stage: if stage == Stage::One { 1 } else { 2 },
                    comment_id: r.comment_id.clone(),
                    entity: r.features.entity.canonical.clone(),
                    gold: self.gold(i, stage),
                    predicted,
                    forced_by,
                }
            })
            .collect();
        Ok((out.report, predictions))
    }

    /// Predictions for `test` after fitting on `train` (both corpus indices).
    fn fold(&self, train: &[usize], test: &[usize], stage: Stage) -> Result<FoldOutput> {
        let setting = match stage {
            Stage::One => Setting::NeutralPolar,
            Stage::Two => Setting::PositiveNegative,
        };
        let collapse = |l: SentimentLabel| match stage {
            Stage::One => stage1_label(l),
            Stage::Two => l.code(),
        };
        let labels: Vec<SentimentLabel> = match self.system {
            System::Proposed | System::NaiveContext => return self.fold_features(train, test, stage, true),
            System::StrengthFeat => return self.fold_with(train, test, stage, strength_vector, false),
            System::Bow | System::BowPos => return self.fold_bow(train, test, stage, self.system == System::BowPos),
            System::LexiconRule => test
                .iter()
                .map(|&i| {
                    let r = &self.records[i];
                    let c = self.comments[r.comment_id.as_str()];
                    let score = baselines::lexicon_rule_score(c, &r.features.entity.canonical, &self.res.lexicon)?;
                    Ok(baselines::lexicon_rule_label(
                        score,
                        setting,
                        self.config.seed,
                        &r.comment_id,
                        &r.features.entity.canonical,
                    ))
                })
                .collect::<Result<_>>()?,
            System::StrengthRule => test
                .iter()
                .map(|&i| {
                    let r = &self.records[i];
                    let c = self.comments[r.comment_id.as_str()];
                    let score = lexicon::context_strength(&r.features.context, c, &self.res.lexicon, &self.res.negations);
                    baselines::strength_rule_classify(score, setting, self.config.seed, &r.comment_id, &r.features.entity.canonical)
                })
                .collect(),
        };
        Ok(labels.into_iter().map(|l| (collapse(l), (collapse(l), None))).collect())
    }

    fn fold_features(&self, train: &[usize], test: &[usize], stage: Stage, overrides: bool) -> Result<FoldOutput> {
        match stage {
            Stage::One => self.fold_with(train, test, stage, np_vector, overrides),
            Stage::Two => self.fold_with(train, test, stage, pn_vector, false),
        }
    }

    fn fold_with(
        &self,
        train: &[usize],
        test: &[usize],
        stage: Stage,
        vector: fn(&EntityFeatures) -> Vec<(&'static str, f64)>,
        overrides: bool,
    ) -> Result<FoldOutput> {
        let kind = match stage {
            Stage::One => self.config.np_classifier,
            Stage::Two => self.config.pn_classifier,
        };
        let data = dataset_for(self.records, train, vector, |r| self.gold_of(r, stage), Self::classes(stage))?;
        let model = learn::train(&data, kind, &self.config.hyper)?;
        Ok(test
            .iter()
            .map(|&i| {
                let f = &self.records[i].features;
                let forced = if overrides { f.force } else { Force::NoForce };
                let pred = match forced {
                    Force::ForceNeutral => NEUTRAL,
                    Force::ForcePolar => POLAR,
                    Force::NoForce => {
                        let x: Vec<f64> = vector(f).into_iter().map(|(_, v)| v).collect();
                        let positive = model.class_ids[1];
                        if model.prob_of(&x, positive) > THRESHOLD {
                            positive
                        } else {
                            model.class_ids[0]
                        }
                    }
                };
                (pred, (pred, forced.rule_name().map(str::to_string)))
            })
            .collect())
    }

    fn gold_of(&self, r: &InstanceRecord, stage: Stage) -> i64 {
        match stage {
            Stage::One => stage1_label(r.label),
            Stage::Two => r.label.code(),
        }
    }

    fn fold_bow(&self, train: &[usize], test: &[usize], stage: Stage, with_pos: bool) -> Result<FoldOutput> {
        let bow = |i: usize| {
            let r = &self.records[i];
            baselines::bow_featurize(&r.features.context, self.comments[r.comment_id.as_str()], with_pos)
        };
        let train_bows: Vec<BTreeMap<String, u32>> = train.iter().map(|&i| bow(i)).collect();
        let vocab: Vec<String> = train_bows
            .iter()
            .flat_map(|b| b.keys().cloned())
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        let dense = |b: &BTreeMap<String, u32>| -> Vec<f64> { vocab.iter().map(|t| f64::from(b.get(t).copied().unwrap_or(0))).collect() };
        let rows = train_bows.iter().map(dense).collect();
        let labels = train.iter().map(|&i| self.gold(i, stage)).collect();
        let data = Dataset::with_classes(vocab.clone(), rows, labels, Self::classes(stage))?;
        let model = learn::train_multinomial_nb(&data, self.config.hyper.smoothing)?;
        Ok(test
            .iter()
            .map(|&i| {
                let pred = model.predict(&dense(&bow(i)));
                (pred, (pred, None))
            })
            .collect())
    }
}

fn table(out: &mut String, title: &str, rows: &[(&str, &EvalReport)]) {
    let _ = writeln!(out, "{title}");
    let _ = writeln!(out, "{:<16} | {:>5} | {:>5} | {:>5}", "Model", "Pr.", "Re.", "F-1");
    let _ = writeln!(out, "{:-<16}-+-{:-<5}-+-{:-<5}-+-{:-<5}", "", "", "", "");
    for (name, r) in rows {
        let _ = writeln!(out, "{:<16} | {:>5.3} | {:>5.3} | {:>5.3}", name, r.precision, r.recall, r.f1);
    }
    let _ = writeln!(out);
}

fn ranking(out: &mut String, title: &str, ranked: &[(String, f64)]) {
    let _ = writeln!(out, "{title}");
    for (i, (name, ig)) in ranked.iter().enumerate() {
        let _ = writeln!(out, "{:>2}. {:<18} {:.4}", i + 1, name, ig);
    }
    let _ = writeln!(out);
}

/// Plain-text report: one results table per stage, then rankings.
pub fn render_report(evals: &[Evaluation], config: &PipelineConfig) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "folds: {}  seed: {}\n", config.folds, config.seed);
    let rows = |f: fn(&Evaluation) -> &EvalReport| evals.iter().map(|e| (e.system.name(), f(e))).collect::<Vec<_>>();
    table(&mut out, "Neutral-polar classification", &rows(|e| &e.stage1));
    table(&mut out, "Positive-negative classification", &rows(|e| &e.stage2));
    for e in evals.iter().filter(|e| !e.stage1_ranking.is_empty()) {
        ranking(
            &mut out,
            &format!("Information gain, neutral-polar ({})", e.system.name()),
            &e.stage1_ranking,
        );
        ranking(
            &mut out,
            &format!("Information gain, positive-negative ({})", e.system.name()),
            &e.stage2_ranking,
        );
    }
    out
}

/// JSON Lines for out-of-fold predictions.
pub fn predictions_jsonl<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut out = String::new();
    for r in rows {
        out.push_str(&serde_json::to_string(r)?);
        out.push('\n');
    }
    Ok(out)
}
