//! Classifiers, information-gain ranking and cross-validation.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const VARIANCE_FLOOR: f64 = 1e-9;
pub const GRADIENT_TOLERANCE: f64 = 1e-6;
pub const IG_BINS: usize = 10;

/// Dense feature matrix with integer class labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub feature_names: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<i64>,
    /// Sorted; may list classes absent from `labels` after subsetting.
    pub class_ids: Vec<i64>,
}

impl Dataset {
    pub fn new(feature_names: Vec<String>, rows: Vec<Vec<f64>>, labels: Vec<i64>) -> Result<Self> {
        let class_ids: Vec<i64> = labels.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        Self::with_classes(feature_names, rows, labels, class_ids)
    }

    pub fn with_classes(feature_names: Vec<String>, rows: Vec<Vec<f64>>, labels: Vec<i64>, class_ids: Vec<i64>) -> Result<Self> {
        if rows.len() != labels.len() {
            return Err(Error::InvalidDataset(format!("{} rows but {} labels", rows.len(), labels.len())));
        }
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != feature_names.len()) {
            return Err(Error::InvalidDataset(format!(
                "row {i} has {} values for {} features",
                r.len(),
                feature_names.len()
            )));
        }
        if let Some(l) = labels.iter().find(|l| !class_ids.contains(l)) {
            return Err(Error::InvalidDataset(format!("label {l} not among class ids {class_ids:?}")));
        }
        Ok(Dataset {
            feature_names,
            rows,
            labels,
            class_ids,
        })
    }

    /// Builds a dataset from named rows, which must all share one name set.
    pub fn from_named<S: AsRef<str>>(rows: Vec<(Vec<(S, f64)>, i64)>) -> Result<Self> {
        let Some((first, _)) = rows.first() else {
            return Err(Error::InvalidDataset("no rows".into()));
        };
        let names: Vec<String> = first.iter().map(|(n, _)| n.as_ref().to_string()).collect();
        let mut dense = Vec::with_capacity(rows.len());
        let mut labels = Vec::with_capacity(rows.len());
        for (i, (row, label)) in rows.into_iter().enumerate() {
            let map: BTreeMap<&str, f64> = row.iter().map(|(n, v)| (n.as_ref(), *v)).collect();
            if map.len() != names.len() || names.iter().any(|n| !map.contains_key(n.as_str())) {
                return Err(Error::InvalidDataset(format!("row {i} has a different feature set")));
            }
            dense.push(names.iter().map(|n| map[n.as_str()]).collect());
            labels.push(label);
        }
        Self::new(names, dense, labels)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn subset(&self, idx: &[usize]) -> Dataset {
        Dataset {
            feature_names: self.feature_names.clone(),
            rows: idx.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: idx.iter().map(|&i| self.labels[i]).collect(),
            class_ids: self.class_ids.clone(),
        }
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().map(move |r| r[j])
    }

    fn present_classes(&self) -> BTreeSet<i64> {
        self.labels.iter().copied().collect()
    }

    fn require_two_classes(&self) -> Result<()> {
        let present = self.present_classes();
        if present.len() < 2 {
            return Err(Error::SingleClassData(format!(
                "{} instances, classes present {:?}",
                self.len(),
                present
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    LogReg,
    GaussianNb,
    MultinomialNb,
}

impl std::str::FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "logreg" | "logisticregression" => Ok(ModelKind::LogReg),
            "gaussiannb" | "gaussian" => Ok(ModelKind::GaussianNb),
            "multinomialnb" | "multinomial" => Ok(ModelKind::MultinomialNb),
            _ => Err(Error::InvalidConfig(format!("unknown model kind {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogRegParams {
    pub l2: f64,
    pub epochs: usize,
    pub lr: f64,
}

impl Default for LogRegParams {
    fn default() -> Self {
        LogRegParams {
            l2: 1e-3,
            epochs: 5000,
            lr: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hyper {
    pub logreg: LogRegParams,
    pub smoothing: f64,
}

impl Default for Hyper {
    fn default() -> Self {
        Hyper {
            logreg: LogRegParams::default(),
            smoothing: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Params {
    LogReg {
        mean: Vec<f64>,
        scale: Vec<f64>,
        weights: Vec<f64>,
        bias: f64,
        epochs_run: usize,
    },
    GaussianNb {
        log_priors: Vec<f64>,
        means: Vec<Vec<f64>>,
        variances: Vec<Vec<f64>>,
    },
    MultinomialNb {
        log_priors: Vec<f64>,
        /// `None` for features outside the training vocabulary.
        log_likelihoods: Vec<Vec<Option<f64>>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Model {
    pub kind: ModelKind,
    pub class_ids: Vec<i64>,
    pub feature_names: Vec<String>,
    pub params: Params,
}

impl Model {
    /// Per-class log joint scores (up to a shared constant for LogReg).
    fn log_scores(&self, x: &[f64]) -> Vec<f64> {
        match &self.params {
            Params::LogReg {
                mean,
                scale,
                weights,
                bias,
                ..
            } => {
                let z: f64 = bias
                    + x.iter()
                        .zip(mean)
                        .zip(scale)
                        .zip(weights)
                        .map(|(((v, m), s), w)| w * (v - m) / s)
                        .sum::<f64>();
                // log sigmoid(-z), log sigmoid(z)
                vec![-softplus(z), -softplus(-z)]
            }
            Params::GaussianNb {
                log_priors,
                means,
                variances,
            } => log_priors
                .iter()
                .zip(means.iter().zip(variances))
                .map(|(lp, (mu, var))| {
                    lp + x
                        .iter()
                        .zip(mu.iter().zip(var))
                        .map(|(v, (m, s2))| -0.5 * ((2.0 * std::f64::consts::PI * s2).ln() + (v - m).powi(2) / s2))
                        .sum::<f64>()
                })
                .collect(),
            Params::MultinomialNb {
                log_priors,
                log_likelihoods,
            } => log_priors
                .iter()
                .zip(log_likelihoods)
                .map(|(lp, ll)| lp + x.iter().zip(ll).filter_map(|(v, l)| l.map(|l| v * l)).sum::<f64>())
                .collect(),
        }
    }

    /// Posterior over `class_ids`.
    pub fn predict_proba(&self, x: &[f64]) -> Vec<f64> {
        let scores = self.log_scores(x);
        let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let exps: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
        let total: f64 = exps.iter().sum();
        exps.into_iter().map(|e| e / total).collect()
    }

    /// Argmax; ties go to the lowest class id.
    pub fn predict(&self, x: &[f64]) -> i64 {
        let scores = self.log_scores(x);
        let mut best = 0;
        for (i, s) in scores.iter().enumerate() {
            if *s > scores[best] {
                best = i;
            }
        }
        self.class_ids[best]
    }

    pub fn prob_of(&self, x: &[f64], class: i64) -> f64 {
        let i = self
            .class_ids
            .iter()
            .position(|c| *c == class)
            .expect("class id belongs to the model");
        self.predict_proba(x)[i]
    }

    /// Aligns a named vector to the model's columns; missing names read as 0.
    pub fn align(&self, named: &BTreeMap<String, f64>) -> Vec<f64> {
        self.feature_names.iter().map(|n| named.get(n).copied().unwrap_or(0.0)).collect()
    }
}

fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

pub fn train(data: &Dataset, kind: ModelKind, hyper: &Hyper) -> Result<Model> {
    match kind {
        ModelKind::LogReg => train_logreg(data, hyper.logreg.l2, hyper.logreg.epochs, hyper.logreg.lr),
        ModelKind::GaussianNb => train_gaussian_nb(data),
        ModelKind::MultinomialNb => train_multinomial_nb(data, hyper.smoothing),
    }
}

/// Column means and standard deviations; constant columns get scale 1.
pub fn standardization(data: &Dataset) -> (Vec<f64>, Vec<f64>) {
    let n = data.len() as f64;
    (0..data.feature_names.len())
        .map(|j| {
            let mean = data.column(j).sum::<f64>() / n;
            let var = data.column(j).map(|v| (v - mean).powi(2)).sum::<f64>() / n;
            let sd = var.sqrt();
            (mean, if sd > 0.0 { sd } else { 1.0 })
        })
        .unzip()
}

/// Mean negative log-likelihood plus `l2/2 * |w|^2` (bias unpenalized).
pub fn logreg_objective(x: &[Vec<f64>], y: &[f64], w: &[f64], b: f64, l2: f64) -> f64 {
    let n = x.len() as f64;
    let nll: f64 = x
        .iter()
        .zip(y)
        .map(|(row, t)| {
            let z = b + dot(row, w);
            t * softplus(-z) + (1.0 - t) * softplus(z)
        })
        .sum();
    nll / n + 0.5 * l2 * w.iter().map(|v| v * v).sum::<f64>()
}

/// Gradient of [`logreg_objective`]: (d/dw, d/db).
pub fn logreg_gradient(x: &[Vec<f64>], y: &[f64], w: &[f64], b: f64, l2: f64) -> (Vec<f64>, f64) {
    let n = x.len() as f64;
    let mut gw = vec![0.0; w.len()];
    let mut gb = 0.0;
    for (row, t) in x.iter().zip(y) {
        let r = sigmoid(b + dot(row, w)) - t;
        gb += r;
        for (g, v) in gw.iter_mut().zip(row) {
            *g += r * v;
        }
    }
    for (g, wj) in gw.iter_mut().zip(w) {
        *g = *g / n + l2 * wj;
    }
    (gw, gb / n)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Binary logistic regression; `class_ids[1]` is the positive class.
pub fn train_logreg(data: &Dataset, l2: f64, epochs: usize, lr: f64) -> Result<Model> {
    data.require_two_classes()?;
    if data.class_ids.len() != 2 {
        return Err(Error::InvalidDataset(format!(
            "logistic regression is binary, got classes {:?}",
            data.class_ids
        )));
    }
    let valid = l2 >= 0.0 && lr > 0.0;
    if !valid {
        return Err(Error::InvalidConfig(format!("l2 = {l2}, lr = {lr}")));
    }
    let (mean, scale) = standardization(data);
    let x: Vec<Vec<f64>> = data
        .rows
        .iter()
        .map(|r| r.iter().zip(&mean).zip(&scale).map(|((v, m), s)| (v - m) / s).collect())
        .collect();
    let y: Vec<f64> = data.labels.iter().map(|l| f64::from(u8::from(*l == data.class_ids[1]))).collect();

    let mut w = vec![0.0; data.feature_names.len()];
    let mut b = 0.0;
    let mut epochs_run = 0;
    while epochs_run < epochs {
        let (gw, gb) = logreg_gradient(&x, &y, &w, b, l2);
        let max_grad = gw.iter().fold(gb.abs(), |m, g| m.max(g.abs()));
        if max_grad < GRADIENT_TOLERANCE {
            break;
        }
        for (wj, g) in w.iter_mut().zip(&gw) {
            *wj -= lr * g;
        }
        b -= lr * gb;
        epochs_run += 1;
    }

    Ok(Model {
        kind: ModelKind::LogReg,
        class_ids: data.class_ids.clone(),
        feature_names: data.feature_names.clone(),
        params: Params::LogReg {
            mean,
            scale,
            weights: w,
            bias: b,
            epochs_run,
        },
    })
}

fn rows_by_class(data: &Dataset) -> Vec<Vec<&Vec<f64>>> {
    data.class_ids
        .iter()
        .map(|c| {
            data.rows
                .iter()
                .zip(&data.labels)
                .filter(|(_, l)| *l == c)
                .map(|(r, _)| r)
                .collect()
        })
        .collect()
}

/// Log priors; classes absent from training get -inf so they are never predicted.
fn log_priors(data: &Dataset, groups: &[Vec<&Vec<f64>>]) -> Vec<f64> {
    groups.iter().map(|g| (g.len() as f64 / data.len() as f64).ln()).collect()
}

pub fn train_gaussian_nb(data: &Dataset) -> Result<Model> {
    data.require_two_classes()?;
    let groups = rows_by_class(data);
    let d = data.feature_names.len();
    let mut means = Vec::new();
    let mut variances = Vec::new();
    for g in &groups {
        let n = g.len().max(1) as f64;
        let mu: Vec<f64> = (0..d).map(|j| g.iter().map(|r| r[j]).sum::<f64>() / n).collect();
        let var: Vec<f64> = (0..d)
            .map(|j| (g.iter().map(|r| (r[j] - mu[j]).powi(2)).sum::<f64>() / n).max(VARIANCE_FLOOR))
            .collect();
        means.push(mu);
        variances.push(var);
    }
    Ok(Model {
        kind: ModelKind::GaussianNb,
        class_ids: data.class_ids.clone(),
        feature_names: data.feature_names.clone(),
        params: Params::GaussianNb {
            log_priors: log_priors(data, &groups),
            means,
            variances,
        },
    })
}

pub fn train_multinomial_nb(data: &Dataset, smoothing: f64) -> Result<Model> {
    data.require_two_classes()?;
    for row in &data.rows {
        if let Some((j, v)) = row.iter().enumerate().find(|(_, v)| **v < 0.0) {
            return Err(Error::NegativeCount {
                feature: data.feature_names[j].clone(),
                value: *v,
            });
        }
    }
    let groups = rows_by_class(data);
    let d = data.feature_names.len();
    let in_vocab: Vec<bool> = (0..d).map(|j| data.column(j).any(|v| v > 0.0)).collect();
    let vocab = in_vocab.iter().filter(|b| **b).count() as f64;
    let log_likelihoods = groups
        .iter()
        .map(|g| {
            let counts: Vec<f64> = (0..d).map(|j| g.iter().map(|r| r[j]).sum()).collect();
            let total: f64 = counts.iter().zip(&in_vocab).filter(|(_, v)| **v).map(|(c, _)| c).sum();
            let denom = total + smoothing * vocab;
            counts
                .iter()
                .zip(&in_vocab)
                .map(|(c, v)| v.then(|| ((c + smoothing) / denom).ln()))
                .collect()
        })
        .collect();
    Ok(Model {
        kind: ModelKind::MultinomialNb,
        class_ids: data.class_ids.clone(),
        feature_names: data.feature_names.clone(),
        params: Params::MultinomialNb {
            log_priors: log_priors(data, &groups),
            log_likelihoods,
        },
    })
}

/// Shannon entropy in bits of a count distribution.
pub fn entropy<I: IntoIterator<Item = usize>>(counts: I) -> f64 {
    let counts: Vec<usize> = counts.into_iter().filter(|c| *c > 0).collect();
    let n: usize = counts.iter().sum();
    if n == 0 {
        return 0.0;
    }
    let n = n as f64;
    counts
        .iter()
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum()
}

/// Discrete codes for one column: small integer alphabets as-is, anything
/// else in equal-frequency bins.
pub fn discretize(values: &[f64], bins: usize) -> Vec<i64> {
    let distinct: BTreeSet<u64> = values.iter().map(|v| v.to_bits()).collect();
    let integral = values.iter().all(|v| v.fract() == 0.0 && v.abs() < 1e15);
    if integral && distinct.len() <= bins {
        return values.iter().map(|v| *v as i64).collect();
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let mut cuts: Vec<f64> = (1..bins).map(|i| sorted[i * n / bins]).collect();
    cuts.dedup();
    values.iter().map(|v| cuts.iter().filter(|c| *v >= **c).count() as i64).collect()
}

pub fn info_gain(codes: &[i64], labels: &[i64]) -> f64 {
    let n = labels.len() as f64;
    let mut class_counts: BTreeMap<i64, usize> = BTreeMap::new();
    let mut joint: BTreeMap<i64, BTreeMap<i64, usize>> = BTreeMap::new();
    for (v, y) in codes.iter().zip(labels) {
        *class_counts.entry(*y).or_default() += 1;
        *joint.entry(*v).or_default().entry(*y).or_default() += 1;
    }
    let h = entropy(class_counts.values().copied());
    let conditional: f64 = joint
        .values()
        .map(|by_class| {
            let nv: usize = by_class.values().sum();
            nv as f64 / n * entropy(by_class.values().copied())
        })
        .sum();
    (h - conditional).clamp(0.0, h)
}

/// Features by descending information gain; equal gains sort by name.
pub fn info_gain_rank(data: &Dataset) -> Vec<(String, f64)> {
    let mut ranked: Vec<(String, f64)> = data
        .feature_names
        .iter()
        .enumerate()
        .map(|(j, name)| {
            let col: Vec<f64> = data.column(j).collect();
            (name.clone(), info_gain(&discretize(&col, IG_BINS), &data.labels))
        })
        .collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Macro P/R/F1 from a gold-by-predicted confusion matrix.
pub fn macro_metrics(confusion: &[Vec<u64>]) -> Metrics {
    let k = confusion.len();
    if k == 0 {
        return Metrics {
            precision: 0.0,
            recall: 0.0,
            f1: 0.0,
        };
    }
    let ratio = |a: u64, b: u64| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    let mut sum = Metrics {
        precision: 0.0,
        recall: 0.0,
        f1: 0.0,
    };
    for c in 0..k {
        let tp = confusion[c][c];
        let predicted: u64 = confusion.iter().map(|row| row[c]).sum();
        let support: u64 = confusion[c].iter().sum();
        let p = ratio(tp, predicted);
        let r = ratio(tp, support);
        let f = if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) };
        sum.precision += p;
        sum.recall += r;
        sum.f1 += f;
    }
    let k = k as f64;
    Metrics {
        precision: sum.precision / k,
        recall: sum.recall / k,
        f1: sum.f1 / k,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub per_fold: Vec<Metrics>,
    pub class_ids: Vec<i64>,
    /// Rows are gold classes, columns predictions, summed over folds.
    pub confusion: Vec<Vec<u64>>,
}

/// Stratified fold assignment: each class is shuffled with the seeded RNG,
/// then dealt round-robin, the dealer position carrying over between classes.
pub fn stratified_folds(labels: &[i64], k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(Error::InvalidConfig(format!("need at least 2 folds, got {k}")));
    }
    let mut by_class: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (i, l) in labels.iter().enumerate() {
        by_class.entry(*l).or_default().push(i);
    }
    if let Some((class, members)) = by_class.iter().find(|(_, m)| m.len() < k) {
        return Err(Error::InsufficientClassSupport {
            folds: k,
            class: *class,
            support: members.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds = vec![Vec::new(); k];
    let mut dealer = 0;
    for members in by_class.values_mut() {
        members.shuffle(&mut rng);
        for &i in members.iter() {
            folds[dealer % k].push(i);
            dealer += 1;
        }
    }
    for f in &mut folds {
        f.sort_unstable();
    }
    Ok(folds)
}

/// Out-of-fold results of a cross-validation run, indexed like the input.
#[derive(Debug, Clone)]
pub struct CvOutcome<T> {
    pub report: EvalReport,
    pub predictions: Vec<T>,
}

/// Generic stratified CV. `fold_fn(train, test)` returns one
/// (predicted class, payload) per test index, in order.
pub fn cross_validate_with<T, F>(labels: &[i64], class_ids: &[i64], k: usize, seed: u64, fold_fn: F) -> Result<CvOutcome<T>>
where
    T: Send,
    F: Fn(&[usize], &[usize]) -> Result<Vec<(i64, T)>> + Sync,
{
    let folds = stratified_folds(labels, k, seed)?;
    let pos = |c: i64| {
        class_ids
            .iter()
            .position(|x| *x == c)
            .ok_or_else(|| Error::InvalidDataset(format!("class {c} not in {class_ids:?}")))
    };
    type FoldResult<T> = (Vec<usize>, Vec<(i64, T)>);
    let results: Vec<FoldResult<T>> = folds
        .par_iter()
        .enumerate()
        .map(|(f, test)| {
            let train: Vec<usize> = folds
                .iter()
                .enumerate()
                .filter(|(g, _)| *g != f)
                .flat_map(|(_, v)| v.iter().copied())
                .collect();
            let mut train = train;
            train.sort_unstable();
            let out = fold_fn(&train, test)?;
            if out.len() != test.len() {
                return Err(Error::InvalidDataset(format!(
                    "fold {f}: {} predictions for {} instances",
                    out.len(),
                    test.len()
                )));
            }
            Ok((test.clone(), out))
        })
        .collect::<Result<_>>()?;

    let c = class_ids.len();
    let mut confusion = vec![vec![0u64; c]; c];
    let mut per_fold = Vec::with_capacity(k);
    let mut slots: Vec<Option<T>> = (0..labels.len()).map(|_| None).collect();
    for (test, out) in results {
        let mut fold_conf = vec![vec![0u64; c]; c];
        for (i, (pred, payload)) in test.into_iter().zip(out) {
            let (g, p) = (pos(labels[i])?, pos(pred)?);
            fold_conf[g][p] += 1;
            confusion[g][p] += 1;
            slots[i] = Some(payload);
        }
        per_fold.push(macro_metrics(&fold_conf));
    }
    let mean = |f: fn(&Metrics) -> f64| per_fold.iter().map(f).sum::<f64>() / per_fold.len() as f64;
    let report = EvalReport {
        precision: mean(|m| m.precision),
        recall: mean(|m| m.recall),
        f1: mean(|m| m.f1),
        per_fold: per_fold.clone(),
        class_ids: class_ids.to_vec(),
        confusion,
    };
    Ok(CvOutcome {
        report,
        predictions: slots.into_iter().map(|s| s.expect("folds cover every instance")).collect(),
    })
}

pub fn cross_validate(data: &Dataset, kind: ModelKind, hyper: &Hyper, k: usize, seed: u64) -> Result<EvalReport> {
    let out = cross_validate_with(&data.labels, &data.class_ids, k, seed, |train, test| {
        let model = self::train(&data.subset(train), kind, hyper)?;
        Ok(test.iter().map(|&i| (model.predict(&data.rows[i]), ())).collect())
    })?;
    Ok(out.report)
}
