//! Polarity lexicon, negation handling and clue counting.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::context::{EntityContext, PairSplit, SplitKind};
use crate::corpus::Comment;
use crate::error::{Error, Result};
use crate::textseg::Token;

const BUNDLED_LEXICON: &str = include_str!("../data/lexicon.tsv");
const BUNDLED_NEGATIONS: &str = include_str!("../data/negation.txt");

/// Distance (in tokens) within which a negation word flips a clue.
pub const NEGATION_WINDOW: usize = 3;

/// Words that add one to the magnitude of the clue right after them.
pub const INTENSIFIERS: [&str; 5] = ["very", "really", "so", "extremely", "totally"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
    Neutral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strength {
    Weak = 1,
    Strong = 2,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PolarityLexicon {
    entries: BTreeMap<String, (Polarity, Strength)>,
}

impl PolarityLexicon {
    /// The ~120-word lexicon shipped with the crate.
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_LEXICON).expect("bundled lexicon is well formed")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// Parses `word<TAB>polarity<TAB>strength` rows. Later rows for the
    /// same word replace earlier ones.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |reason: &str| Error::MalformedRow {
                line: n + 1,
                reason: reason.to_string(),
            };
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 3 {
                return Err(bad("expected word<TAB>polarity<TAB>strength"));
            }
            let word = cols[0].trim().to_lowercase();
            if word.is_empty() {
                return Err(bad("empty word"));
            }
            let polarity = match cols[1].trim() {
                "positive" => Polarity::Positive,
                "negative" => Polarity::Negative,
                "neutral" => Polarity::Neutral,
                other => return Err(bad(&format!("unknown polarity {other:?}"))),
            };
            let strength = match cols[2].trim() {
                "weak" => Strength::Weak,
                "strong" => Strength::Strong,
                other => return Err(bad(&format!("unknown strength {other:?}"))),
            };
            entries.insert(word, (polarity, strength));
        }
        Ok(PolarityLexicon { entries })
    }

    /// Builds a lexicon from explicit sets; a word may belong to one set
    /// only. Words missing from `strength` default to weak.
    pub fn from_sets(positive: &[&str], negative: &[&str], neutral: &[&str], strength: &BTreeMap<String, Strength>) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (words, polarity) in [
            (positive, Polarity::Positive),
            (negative, Polarity::Negative),
            (neutral, Polarity::Neutral),
        ] {
            for w in words {
                let w = w.to_lowercase();
                let s = strength.get(&w).copied().unwrap_or(Strength::Weak);
                if let Some((prev, _)) = entries.insert(w.clone(), (polarity, s)) {
                    if prev != polarity {
                        return Err(Error::DisjointnessViolation { word: w });
                    }
                }
            }
        }
        Ok(PolarityLexicon { entries })
    }

    pub fn lookup(&self, word: &str) -> Option<(Polarity, Strength)> {
        self.entries.get(word).copied()
    }

    pub fn words(&self, polarity: Polarity) -> impl Iterator<Item = &str> {
        self.entries
            .iter()
            .filter(move |(_, (p, _))| *p == polarity)
            .map(|(w, _)| w.as_str())
    }

    pub fn count(&self, polarity: Polarity) -> usize {
        self.words(polarity).count()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegationList {
    words: BTreeSet<String>,
}

impl NegationList {
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_NEGATIONS).expect("bundled negation list is well formed")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let words: BTreeSet<String> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_lowercase)
            .collect();
        if words.is_empty() {
            return Err(Error::MalformedRow {
                line: 0,
                reason: "negation list is empty".into(),
            });
        }
        Ok(NegationList { words })
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ClueCounts {
    pub num_pos: u32,
    pub num_neg: u32,
}

impl ClueCounts {
    pub fn total(&self) -> u32 {
        self.num_pos + self.num_neg
    }

    fn dominant(&self) -> Option<Polarity> {
        use std::cmp::Ordering::*;
        match self.num_pos.cmp(&self.num_neg) {
            Greater => Some(Polarity::Positive),
            Less => Some(Polarity::Negative),
            Equal => None,
        }
    }
}

impl std::ops::Add for ClueCounts {
    type Output = ClueCounts;

    fn add(self, rhs: Self) -> Self {
        ClueCounts {
            num_pos: self.num_pos + rhs.num_pos,
            num_neg: self.num_neg + rhs.num_neg,
        }
    }
}

/// A lexicon clue after negation and quote flips.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClueHit {
    /// `Positive` or `Negative`; neutral clues only surface when negated.
    pub polarity: Polarity,
    /// 3 for weak clues, 4 for strong ones, +1 after an intensifier, capped at 5.
    pub magnitude: u8,
}

/// Evaluates the token at `pos` (0-based) of a sentence's token slice.
pub fn clue_at(tokens: &[Token], pos: usize, lex: &PolarityLexicon, neg: &NegationList) -> Option<ClueHit> {
    let tok = tokens.get(pos)?;
    let (prior, strength) = lex.lookup(&tok.lower)?;
    let lo = pos.saturating_sub(NEGATION_WINDOW);
    let hi = (pos + NEGATION_WINDOW).min(tokens.len() - 1);
    let negated = (lo..=hi).any(|i| i != pos && neg.contains(&tokens[i].lower));
    let quoted = tok.in_quote;

    let polarity = match prior {
        Polarity::Neutral => {
            if negated && !quoted {
                Polarity::Negative
            } else {
                return None;
            }
        }
        p if negated != quoted => flip(p),
        p => p,
    };
    let intensified = pos > 0 && INTENSIFIERS.contains(&tokens[pos - 1].lower.as_str());
    // Weak clues score 1 + 2, strong ones 1 + 3.
    let magnitude = (2 + strength as u8 + u8::from(intensified)).min(5);
    Some(ClueHit { polarity, magnitude })
}

fn flip(p: Polarity) -> Polarity {
    match p {
        Polarity::Positive => Polarity::Negative,
        Polarity::Negative => Polarity::Positive,
        Polarity::Neutral => Polarity::Neutral,
    }
}

fn tally(hits: impl IntoIterator<Item = ClueHit>) -> ClueCounts {
    let mut c = ClueCounts::default();
    for h in hits {
        match h.polarity {
            Polarity::Positive => c.num_pos += 1,
            Polarity::Negative => c.num_neg += 1,
            Polarity::Neutral => {}
        }
    }
    c
}

fn context_hits<'a>(
    ctx: &'a EntityContext,
    comment: &'a Comment,
    lex: &'a PolarityLexicon,
    neg: &'a NegationList,
) -> impl Iterator<Item = ClueHit> + 'a {
    ctx.token_positions().filter_map(move |(s, t)| {
        let sentence = comment.sentences.get(s)?;
        clue_at(&sentence.tokens, t.checked_sub(1)?, lex, neg)
    })
}

/// Positive and negative clues in an entity context. Negation is looked
/// up in the whole sentence, not just the context.
pub fn count_clues(ctx: &EntityContext, comment: &Comment, lex: &PolarityLexicon, neg: &NegationList) -> ClueCounts {
    tally(context_hits(ctx, comment, lex, neg))
}

/// Clue counts over a bare token list treated as one sentence.
pub fn count_clues_in(tokens: &[Token], lex: &PolarityLexicon, neg: &NegationList) -> ClueCounts {
    tally((0..tokens.len()).filter_map(|i| clue_at(tokens, i, lex, neg)))
}

/// Positive strength in 1..=5 and negative strength in -5..=-1;
/// `(1, -1)` means no sentiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrengthScore {
    pub pos: i32,
    pub neg: i32,
}

impl StrengthScore {
    pub const NEUTRAL: StrengthScore = StrengthScore { pos: 1, neg: -1 };

    pub fn is_neutral(&self) -> bool {
        *self == Self::NEUTRAL
    }
}

fn score(hits: impl IntoIterator<Item = ClueHit>, terminal_exclam: bool) -> StrengthScore {
    let (mut pos, mut neg) = (0u8, 0u8);
    for h in hits {
        match h.polarity {
            Polarity::Positive => pos = pos.max(h.magnitude),
            Polarity::Negative => neg = neg.max(h.magnitude),
            Polarity::Neutral => {}
        }
    }
    if terminal_exclam {
        if pos > neg {
            pos = (pos + 1).min(5);
        } else if neg > pos {
            neg = (neg + 1).min(5);
        }
    }
    StrengthScore {
        pos: i32::from(pos.max(1)),
        neg: -i32::from(neg.max(1)),
    }
}

/// Lexicon-driven strength score of a token list treated as one sentence.
pub fn strength_score(tokens: &[Token], lex: &PolarityLexicon, neg: &NegationList) -> StrengthScore {
    let hits = (0..tokens.len()).filter_map(|i| clue_at(tokens, i, lex, neg));
    let terminal = tokens.last().is_some_and(|t| t.text == "!");
    score(hits, terminal)
}

/// Strength score of an entity context, evaluating each clue within its
/// own sentence.
pub fn context_strength(ctx: &EntityContext, comment: &Comment, lex: &PolarityLexicon, neg: &NegationList) -> StrengthScore {
    let terminal = ctx
        .token_positions()
        .last()
        .and_then(|(s, t)| comment.sentences.get(s)?.token(t))
        .is_some_and(|t| t.text == "!");
    score(context_hits(ctx, comment, lex, neg), terminal)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleOutcome {
    /// `entity` received one extra clue of `polarity`.
    Applied {
        entity: String,
        polarity: Polarity,
    },
    NoOp,
}

/// When only one side of a split carries clues, the clue-less entity gets
/// one clue opposite to the other side's dominant polarity.
fn propagate_opposite(counts: &mut BTreeMap<String, ClueCounts>, split: &PairSplit) -> RuleOutcome {
    let left = counts.get(&split.left).copied().unwrap_or_default();
    let right = counts.get(&split.right).copied().unwrap_or_default();
    let (source, target) = match (left.total() > 0, right.total() > 0) {
        (true, false) => (left, &split.right),
        (false, true) => (right, &split.left),
        _ => return RuleOutcome::NoOp,
    };
    let Some(dominant) = source.dominant() else {
        return RuleOutcome::NoOp;
    };
    let entry = counts.entry(target.clone()).or_default();
    let polarity = flip(dominant);
    match polarity {
        Polarity::Positive => entry.num_pos += 1,
        _ => entry.num_neg += 1,
    }
    RuleOutcome::Applied {
        entity: target.clone(),
        polarity,
    }
}

/// Clauses joined by "but" usually carry opposite sentiment.
pub fn apply_but_rule(counts: &mut BTreeMap<String, ClueCounts>, split: &PairSplit) -> RuleOutcome {
    if split.kind != SplitKind::But {
        return RuleOutcome::NoOp;
    }
    propagate_opposite(counts, split)
}

/// Entities on either side of a comparative usually get opposite sentiment.
pub fn apply_comparative_rule(counts: &mut BTreeMap<String, ClueCounts>, split: &PairSplit) -> RuleOutcome {
    if split.kind != SplitKind::Comparative {
        return RuleOutcome::NoOp;
    }
    propagate_opposite(counts, split)
}
