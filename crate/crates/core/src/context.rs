//! Linking each entity of a comment to the tokens that talk about it.
//!
//! A single entity owns the whole comment. Entities joined only by "and"
//! or "," also share the whole comment. Otherwise every sentence is routed:
//! sentences naming one entity go to it, sentences naming several are cut
//! into local contexts, and sentences naming none are routed by pronouns.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::corpus::{Comment, Entity};
use crate::error::{Error, Result};
use crate::textseg::{self, Sentence};

/// Tokens on each side of a mention kept by the default local window.
pub const WINDOW: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PronounSets {
    /// Pronouns that can only refer to a person.
    pub person: BTreeSet<String>,
    /// Pronouns that can refer to anything.
    pub non_person: BTreeSet<String>,
}

impl Default for PronounSets {
    fn default() -> Self {
        let set = |words: &[&str]| words.iter().map(|w| w.to_string()).collect();
        PronounSets {
            person: set(&["his", "her", "him", "he", "she"]),
            non_person: set(&["it", "their", "them"]),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContextScheme {
    #[default]
    Proposed,
    Naive,
}

impl std::str::FromStr for ContextScheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "proposed" => Ok(ContextScheme::Proposed),
            "naive" => Ok(ContextScheme::Naive),
            _ => Err(format!("unknown context scheme {s:?} (expected proposed or naive)")),
        }
    }
}

/// Inclusive range of 1-based token indices inside one sentence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TokenSpan {
    #[serde(rename = "sent")]
    pub sentence: usize,
    pub from: usize,
    pub to: usize,
}

impl TokenSpan {
    pub fn len(&self) -> usize {
        self.to + 1 - self.from
    }

    pub fn is_empty(&self) -> bool {
        self.to < self.from
    }

    pub fn contains(&self, sentence: usize, token: usize) -> bool {
        self.sentence == sentence && (self.from..=self.to).contains(&token)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntityContext {
    #[serde(rename = "comment_id")]
    pub comment_id: String,
    pub entity: String,
    /// Sorted, merged spans; never overlapping.
    pub pieces: Vec<TokenSpan>,
}

impl EntityContext {
    fn from_tokens(comment_id: &str, entity: &str, tokens: &BTreeMap<usize, BTreeSet<usize>>) -> Self {
        let mut pieces = Vec::new();
        for (&sentence, idx) in tokens {
            let mut run: Option<(usize, usize)> = None;
            for &t in idx {
                run = match run {
                    Some((a, b)) if t == b + 1 => Some((a, t)),
                    Some((a, b)) => {
                        pieces.push(TokenSpan { sentence, from: a, to: b });
                        Some((t, t))
                    }
                    None => Some((t, t)),
                };
            }
            if let Some((a, b)) = run {
                pieces.push(TokenSpan { sentence, from: a, to: b });
            }
        }
        EntityContext {
            comment_id: comment_id.to_string(),
            entity: entity.to_string(),
            pieces,
        }
    }

    /// Sentence indices touched by the context, in comment order.
    pub fn sentences(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.pieces.iter().map(|p| p.sentence).collect();
        out.dedup();
        out
    }

    /// `(sentence, token)` pairs in comment order.
    pub fn token_positions(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pieces.iter().flat_map(|p| (p.from..=p.to).map(move |t| (p.sentence, t)))
    }

    pub fn token_count(&self) -> usize {
        self.pieces.iter().map(TokenSpan::len).sum()
    }

    pub fn contains(&self, sentence: usize, token: usize) -> bool {
        self.pieces.iter().any(|p| p.contains(sentence, token))
    }

    /// Token texts of the context, in comment order.
    pub fn token_texts<'a>(&'a self, comment: &'a Comment) -> Vec<&'a str> {
        self.token_positions()
            .filter_map(|(s, t)| comment.sentences.get(s).and_then(|s| s.token(t)))
            .map(|t| t.text.as_str())
            .collect()
    }
}

/// An explicit mention of an entity, resolved to sentence tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Occurrence {
    pub entity: String,
    pub sentence: usize,
    pub from: usize,
    pub to: usize,
}

impl Occurrence {
    /// Last token of the mention, used as its syntactic head.
    pub fn head(&self) -> usize {
        self.to
    }
}

/// Explicit mentions of `entities`: annotated spans plus any
/// case-insensitive whole-token match of a canonical or surface string.
pub fn occurrences(comment: &Comment, entities: &[Entity]) -> Vec<Occurrence> {
    let wanted: BTreeSet<&str> = entities.iter().map(|e| e.canonical.as_str()).collect();
    let mut found: Vec<Occurrence> = Vec::new();

    for m in comment.mentions.iter().filter(|m| wanted.contains(m.canonical.as_str())) {
        let Some(s) = comment.sentences.iter().find(|s| s.start <= m.start && m.start < s.end) else {
            continue;
        };
        let hit: Vec<usize> = s
            .tokens
            .iter()
            .filter(|t| t.start < m.end && m.start < t.end)
            .map(|t| t.index)
            .collect();
        if let (Some(&from), Some(&to)) = (hit.first(), hit.last()) {
            found.push(Occurrence {
                entity: m.canonical.clone(),
                sentence: s.index,
                from,
                to,
            });
        }
    }

    for e in entities {
        let mut patterns: BTreeSet<Vec<String>> = BTreeSet::new();
        patterns.insert(lowered(&e.canonical));
        for m in comment.mentions_of(&e.canonical) {
            patterns.insert(lowered(&m.surface));
        }
        for pat in patterns.iter().filter(|p| !p.is_empty()) {
            for s in &comment.sentences {
                if s.tokens.len() < pat.len() {
                    continue;
                }
                for start in 0..=s.tokens.len() - pat.len() {
                    let window = &s.tokens[start..start + pat.len()];
                    if window.iter().zip(pat).all(|(t, p)| &t.lower == p) {
                        let (from, to) = (start + 1, start + pat.len());
                        let overlaps = found.iter().any(|o| o.sentence == s.index && o.from <= to && from <= o.to);
                        if !overlaps {
                            found.push(Occurrence {
                                entity: e.canonical.clone(),
                                sentence: s.index,
                                from,
                                to,
                            });
                        }
                    }
                }
            }
        }
    }

    found.sort_by_key(|o| (o.sentence, o.from, o.to));
    found
}

fn lowered(s: &str) -> Vec<String> {
    textseg::tokenize(s).into_iter().map(|t| t.lower).collect()
}

fn resolve(comment: &Comment, names: &[impl AsRef<str>]) -> Result<Vec<Entity>> {
    names
        .iter()
        .map(|n| {
            comment.entity(n.as_ref()).ok_or_else(|| Error::UnknownEntity {
                comment_id: comment.id.clone(),
                entity: n.as_ref().to_string(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitKind {
    But,
    Comparative,
}

/// A sentence whose two entities sit on opposite sides of a "but" or a
/// comparative (JJR/RBR) token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairSplit {
    pub sentence: usize,
    pub kind: SplitKind,
    pub left: String,
    pub right: String,
    /// 1-based index of the "but" or comparative token.
    pub pivot: usize,
}

impl PairSplit {
    /// Token ranges owned by the left and right entity.
    pub fn sides(&self, sentence_len: usize) -> ((usize, usize), (usize, usize)) {
        match self.kind {
            SplitKind::But => ((1, self.pivot - 1), (self.pivot + 1, sentence_len)),
            SplitKind::Comparative => ((1, self.pivot), (self.pivot + 1, sentence_len)),
        }
    }
}

/// Detects a but- or comparative split. Needs exactly two entities whose
/// mentions do not interleave; the comparative test needs POS tags.
pub fn detect_split(sentence: &Sentence, occs: &[&Occurrence]) -> Option<PairSplit> {
    let mut names: Vec<&str> = Vec::new();
    for o in occs {
        if !names.contains(&o.entity.as_str()) {
            names.push(&o.entity);
        }
    }
    if names.len() != 2 {
        return None;
    }
    let (left, right) = (names[0], names[1]);
    let left_end = occs.iter().filter(|o| o.entity == left).map(|o| o.to).max()?;
    let right_start = occs.iter().filter(|o| o.entity == right).map(|o| o.from).min()?;
    if left_end >= right_start {
        return None;
    }
    let between = left_end + 1..right_start;

    let split = |kind, pivot| PairSplit {
        sentence: sentence.index,
        kind,
        left: left.to_string(),
        right: right.to_string(),
        pivot,
    };
    if let Some(t) = between.clone().find(|&i| sentence.token(i).is_some_and(|t| t.lower == "but")) {
        return Some(split(SplitKind::But, t));
    }
    let tree = sentence.tree.as_ref()?;
    between
        .into_iter()
        .find(|&i| tree.node(i).is_some_and(|n| n.is_comparative()))
        .map(|t| split(SplitKind::Comparative, t))
}

/// Local contexts of the entities mentioned in one sentence: a but- or
/// comparative split for two entities, otherwise a ±3 window around each
/// mention plus the dependency parent and children of its head token.
pub fn extract_local_context(sentence: &Sentence, occs: &[&Occurrence]) -> BTreeMap<String, BTreeSet<usize>> {
    let mut out: BTreeMap<String, BTreeSet<usize>> = BTreeMap::new();
    let n = sentence.tokens.len();

    if let Some(split) = detect_split(sentence, occs) {
        let ((la, lb), (ra, rb)) = split.sides(n);
        out.insert(split.left.clone(), (la..=lb).collect());
        out.insert(split.right.clone(), (ra..=rb).collect());
        return out;
    }

    for o in occs {
        let set = out.entry(o.entity.clone()).or_default();
        let from = o.from.saturating_sub(WINDOW).max(1);
        let to = (o.to + WINDOW).min(n);
        set.extend(from..=to);
        if let Some(tree) = &sentence.tree {
            if let Some(p) = tree.parent(o.head()) {
                set.insert(p);
            }
            set.extend(tree.children(o.head()).map(|c| c.index));
        }
    }
    out
}

/// Every explicit mention grouped by sentence.
fn by_sentence(occs: &[Occurrence]) -> BTreeMap<usize, Vec<&Occurrence>> {
    let mut map: BTreeMap<usize, Vec<&Occurrence>> = BTreeMap::new();
    for o in occs {
        map.entry(o.sentence).or_default().push(o);
    }
    map
}

/// Entities that sit in a run of mentions joined only by "and" / ",".
pub fn connected_entities(comment: &Comment, occs: &[Occurrence]) -> BTreeSet<String> {
    let mut grouped = BTreeSet::new();
    for w in occs.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if a.entity == b.entity || a.sentence != b.sentence || b.from <= a.to + 1 {
            continue;
        }
        let s = &comment.sentences[a.sentence];
        let joined = (a.to + 1..b.from).all(|i| s.token(i).is_some_and(|t| t.lower == "and" || t.lower == ","));
        if joined {
            grouped.insert(a.entity.clone());
            grouped.insert(b.entity.clone());
        }
    }
    grouped
}

fn whole_sentence(s: &Sentence) -> BTreeSet<usize> {
    (1..=s.tokens.len()).collect()
}

fn whole_comment(comment: &Comment) -> BTreeMap<usize, BTreeSet<usize>> {
    comment
        .sentences
        .iter()
        .filter(|s| !s.tokens.is_empty())
        .map(|s| (s.index, whole_sentence(s)))
        .collect()
}

/// Context extraction for any number of entities.
pub fn extract_contexts(comment: &Comment, entities: &[impl AsRef<str>], pronouns: &PronounSets) -> Result<Vec<EntityContext>> {
    let entities = resolve(comment, entities)?;
    let mut assigned: BTreeMap<String, BTreeMap<usize, BTreeSet<usize>>> =
        entities.iter().map(|e| (e.canonical.clone(), BTreeMap::new())).collect();

    if entities.len() == 1 {
        assigned.insert(entities[0].canonical.clone(), whole_comment(comment));
        return Ok(finish(comment, &entities, &assigned));
    }

    let occs = occurrences(comment, &entities);
    let grouped = connected_entities(comment, &occs);
    let per_sentence = by_sentence(&occs);
    let persons: Vec<&Entity> = entities.iter().filter(|e| e.entity_type.is_person()).collect();

    for s in &comment.sentences {
        let here = per_sentence.get(&s.index).map(Vec::as_slice).unwrap_or(&[]);
        let named: BTreeSet<&str> = here.iter().map(|o| o.entity.as_str()).collect();
        match named.len() {
            0 => {
                let has = |set: &BTreeSet<String>| s.tokens.iter().any(|t| set.contains(&t.lower));
                let targets: Vec<&Entity> = if has(&pronouns.person) && !has(&pronouns.non_person) && !persons.is_empty() {
                    persons.clone()
                } else {
                    entities.iter().collect()
                };
                for e in targets {
                    assigned.get_mut(&e.canonical).unwrap().insert(s.index, whole_sentence(s));
                }
            }
            1 => {
                let e = *named.iter().next().unwrap();
                assigned.get_mut(e).unwrap().insert(s.index, whole_sentence(s));
            }
            _ => {
                for (e, toks) in extract_local_context(s, here) {
                    assigned.get_mut(&e).unwrap().entry(s.index).or_default().extend(toks);
                }
            }
        }
    }

    for e in &grouped {
        assigned.insert(e.clone(), whole_comment(comment));
    }
    Ok(finish(comment, &entities, &assigned))
}

/// Baseline scheme: a sentence goes to every entity it names, or to all
/// entities when it names none.
pub fn naive_contexts(comment: &Comment, entities: &[impl AsRef<str>]) -> Result<Vec<EntityContext>> {
    let entities = resolve(comment, entities)?;
    let occs = occurrences(comment, &entities);
    let per_sentence = by_sentence(&occs);
    let mut assigned: BTreeMap<String, BTreeMap<usize, BTreeSet<usize>>> =
        entities.iter().map(|e| (e.canonical.clone(), BTreeMap::new())).collect();

    for s in &comment.sentences {
        let named: BTreeSet<&str> = per_sentence
            .get(&s.index)
            .map(|v| v.iter().map(|o| o.entity.as_str()).collect())
            .unwrap_or_default();
        for e in &entities {
            if named.is_empty() || named.contains(e.canonical.as_str()) {
                assigned.get_mut(&e.canonical).unwrap().insert(s.index, whole_sentence(s));
            }
        }
    }
    Ok(finish(comment, &entities, &assigned))
}

/// Dispatches on the context scheme.
pub fn contexts_for(
    comment: &Comment,
    entities: &[impl AsRef<str>],
    scheme: ContextScheme,
    pronouns: &PronounSets,
) -> Result<Vec<EntityContext>> {
    match scheme {
        ContextScheme::Proposed => extract_contexts(comment, entities, pronouns),
        ContextScheme::Naive => naive_contexts(comment, entities),
    }
}

fn finish(comment: &Comment, entities: &[Entity], assigned: &BTreeMap<String, BTreeMap<usize, BTreeSet<usize>>>) -> Vec<EntityContext> {
    entities
        .iter()
        .map(|e| EntityContext::from_tokens(&comment.id, &e.canonical, &assigned[&e.canonical]))
        .collect()
}

/// All but/comparative splits in a comment, one per qualifying sentence.
pub fn pair_splits(comment: &Comment, entities: &[Entity]) -> Vec<PairSplit> {
    let occs = occurrences(comment, entities);
    by_sentence(&occs)
        .into_iter()
        .filter_map(|(s, here)| detect_split(&comment.sentences[s], &here))
        .collect()
}
