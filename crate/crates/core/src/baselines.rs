//! Comparison systems: bag-of-words, lexicon distance scoring and
//! strength-score rules.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::context::{self, EntityContext};
use crate::corpus::{Comment, SentimentLabel};
use crate::error::{Error, Result};
use crate::lexicon::{Polarity, PolarityLexicon, StrengthScore};

/// Which decision the baseline is asked to make.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Setting {
    NeutralPolar,
    PositiveNegative,
}

/// Term counts over an entity context. With `with_pos`, parsed tokens get a
/// `/TAG` suffix; tokens of unparsed sentences stay plain.
pub fn bow_featurize(ctx: &EntityContext, comment: &Comment, with_pos: bool) -> BTreeMap<String, u32> {
    let mut counts = BTreeMap::new();
    for (s, t) in ctx.token_positions() {
        let Some(sentence) = comment.sentences.get(s) else { continue };
        let Some(token) = sentence.token(t) else { continue };
        let term = match sentence.pos_tag(t).filter(|_| with_pos) {
            Some(tag) => format!("{}/{}", token.lower, tag),
            None => token.lower.clone(),
        };
        *counts.entry(term).or_insert(0) += 1;
    }
    counts
}

/// Distance-weighted lexicon score: for every sentence mentioning the
/// entity, each positive or negative lexicon word adds `±1 / d`, where `d`
/// is the token distance to the nearest mention token (at least 1).
pub fn lexicon_rule_score(comment: &Comment, entity: &str, lex: &PolarityLexicon) -> Result<f64> {
    let Some(target) = comment.entity(entity) else {
        return Err(Error::UnknownEntity {
            comment_id: comment.id.clone(),
            entity: entity.to_string(),
        });
    };
    let occs = context::occurrences(comment, &comment.entities());
    let mut score = 0.0;
    for (s, sentence) in comment.sentences.iter().enumerate() {
        let mine: Vec<_> = occs.iter().filter(|o| o.sentence == s && o.entity == target.canonical).collect();
        if mine.is_empty() {
            continue;
        }
        for token in &sentence.tokens {
            let so = match lex.lookup(&token.lower) {
                Some((Polarity::Positive, _)) => 1.0,
                Some((Polarity::Negative, _)) => -1.0,
                _ => continue,
            };
            let d = mine
                .iter()
                .flat_map(|o| o.from..=o.to)
                .map(|m| m.abs_diff(token.index))
                .min()
                .unwrap_or(1)
                .max(1);
            score += so / d as f64;
        }
    }
    Ok(score)
}

/// FNV-1a over the seed and the instance key.
fn instance_hash(seed: u64, comment_id: &str, entity: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let bytes = seed
        .to_le_bytes()
        .into_iter()
        .chain(comment_id.bytes())
        .chain([0xff])
        .chain(entity.bytes());
    for b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

/// Reproducible coin flip for one (comment, entity) pair.
pub fn seeded_polarity(seed: u64, comment_id: &str, entity: &str) -> SentimentLabel {
    let mut rng = ChaCha8Rng::seed_from_u64(instance_hash(seed, comment_id, entity));
    if rng.gen::<bool>() {
        SentimentLabel::Positive
    } else {
        SentimentLabel::Negative
    }
}

pub fn lexicon_rule_label(score: f64, setting: Setting, seed: u64, comment_id: &str, entity: &str) -> SentimentLabel {
    if score > 0.0 {
        SentimentLabel::Positive
    } else if score < 0.0 {
        SentimentLabel::Negative
    } else if setting == Setting::NeutralPolar {
        SentimentLabel::Neutral
    } else {
        seeded_polarity(seed, comment_id, entity)
    }
}

/// Rule reading of a strength score. Ties between the two sides are broken
/// by a seeded draw.
pub fn strength_rule_classify(score: StrengthScore, setting: Setting, seed: u64, comment_id: &str, entity: &str) -> SentimentLabel {
    if setting == Setting::NeutralPolar && score.is_neutral() {
        return SentimentLabel::Neutral;
    }
    let (pos, neg) = (score.pos, score.neg.abs());
    match pos.cmp(&neg) {
        std::cmp::Ordering::Greater => SentimentLabel::Positive,
        std::cmp::Ordering::Less => SentimentLabel::Negative,
        std::cmp::Ordering::Equal => seeded_polarity(seed, comment_id, entity),
    }
}
