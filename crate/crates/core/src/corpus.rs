//! Comments, entity annotations, labels and dependency parses.
//!
//! Three input files are aligned into one [`Corpus`]:
//!
//! * `comments.jsonl`: `{"id", "text", "entities": [{"canonical", "surface", "start", "end", "type"}]}`
//! * `labels.jsonl`: `{"comment_id", "entity", "label"}` with label in `{-1, 0, 1}`
//! * `parses.conllu`: 10-column CoNLL-U, one block per sentence, keyed by
//!   `# comment_id = X` and `# sent_index = N` metadata lines.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textseg::{self, Sentence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EntityType {
    Person,
    Place,
    Organization,
}

impl EntityType {
    pub fn is_person(self) -> bool {
        self == EntityType::Person
    }
}

impl FromStr for EntityType {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "person" => Ok(EntityType::Person),
            "place" => Ok(EntityType::Place),
            "organization" => Ok(EntityType::Organization),
            other => Err(format!("unknown entity type {other:?}")),
        }
    }
}

impl fmt::Display for EntityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EntityType::Person => "Person",
            EntityType::Place => "Place",
            EntityType::Organization => "Organization",
        };
        f.write_str(s)
    }
}

/// Three-way sentiment target with its integer code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SentimentLabel {
    Negative,
    Neutral,
    Positive,
}

impl SentimentLabel {
    pub fn code(self) -> i64 {
        match self {
            SentimentLabel::Negative => -1,
            SentimentLabel::Neutral => 0,
            SentimentLabel::Positive => 1,
        }
    }

    pub fn from_code(code: i64) -> Option<Self> {
        match code {
            -1 => Some(SentimentLabel::Negative),
            0 => Some(SentimentLabel::Neutral),
            1 => Some(SentimentLabel::Positive),
            _ => None,
        }
    }

    pub fn is_polar(self) -> bool {
        self != SentimentLabel::Neutral
    }
}

impl Serialize for SentimentLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i64(self.code())
    }
}

impl<'de> Deserialize<'de> for SentimentLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let code = i64::deserialize(d)?;
        SentimentLabel::from_code(code).ok_or_else(|| serde::de::Error::custom(format!("label must be -1, 0 or 1, got {code}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntityMention {
    pub canonical: String,
    pub surface: String,
    /// Byte offsets into the comment text, half-open.
    pub start: usize,
    pub end: usize,
    #[serde(rename = "type", with = "entity_type_str")]
    pub entity_type: EntityType,
}

mod entity_type_str {
    use super::EntityType;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(t: &EntityType, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(t)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<EntityType, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One logical entity of a comment: all mentions sharing a canonical name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entity {
    pub canonical: String,
    pub entity_type: EntityType,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comment {
    pub id: String,
    pub text: String,
    pub mentions: Vec<EntityMention>,
    pub sentences: Vec<Sentence>,
}

impl Comment {
    /// Builds a comment, validating mention spans and segmenting the text.
    pub fn new(id: impl Into<String>, text: impl Into<String>, mut mentions: Vec<EntityMention>) -> Result<Self> {
        let id = id.into();
        let text = text.into();
        validate_mentions(&id, &text, &mut mentions)?;
        let sentences = textseg::split_sentences(&text)?;
        Ok(Comment {
            id,
            text,
            mentions,
            sentences,
        })
    }

    /// Distinct entities in order of first mention.
    pub fn entities(&self) -> Vec<Entity> {
        let mut seen = HashSet::new();
        self.mentions
            .iter()
            .filter(|m| seen.insert(m.canonical.as_str()))
            .map(|m| Entity {
                canonical: m.canonical.clone(),
                entity_type: m.entity_type,
            })
            .collect()
    }

    pub fn entity(&self, canonical: &str) -> Option<Entity> {
        self.mentions.iter().find(|m| m.canonical == canonical).map(|m| Entity {
            canonical: m.canonical.clone(),
            entity_type: m.entity_type,
        })
    }

    pub fn mentions_of<'a>(&'a self, canonical: &'a str) -> impl Iterator<Item = &'a EntityMention> + 'a {
        self.mentions.iter().filter(move |m| m.canonical == canonical)
    }
}

fn validate_mentions(id: &str, text: &str, mentions: &mut [EntityMention]) -> Result<()> {
    let bad = |reason: String| Error::MalformedRecord { line: 0, reason };
    if id.is_empty() {
        return Err(bad("comment id is empty".into()));
    }
    for m in mentions.iter() {
        if m.start >= m.end || m.end > text.len() || !text.is_char_boundary(m.start) || !text.is_char_boundary(m.end) {
            return Err(bad(format!(
                "comment {id:?}: mention {:?} has invalid span {}..{}",
                m.canonical, m.start, m.end
            )));
        }
        if text[m.start..m.end] != m.surface {
            return Err(bad(format!(
                "comment {id:?}: surface {:?} does not match text {:?} at {}..{}",
                m.surface,
                &text[m.start..m.end],
                m.start,
                m.end
            )));
        }
        if m.canonical.trim().is_empty() {
            return Err(bad(format!("comment {id:?}: empty canonical name")));
        }
    }
    let mut types: HashMap<&str, EntityType> = HashMap::new();
    for m in mentions.iter() {
        if let Some(t) = types.insert(&m.canonical, m.entity_type) {
            if t != m.entity_type {
                return Err(bad(format!("comment {id:?}: entity {:?} annotated with two types", m.canonical)));
            }
        }
    }
    mentions.sort_by_key(|m| (m.start, m.end));
    for w in mentions.windows(2) {
        if w[1].start < w[0].end {
            return Err(Error::OverlappingMentions {
                comment_id: id.to_string(),
                first: w[0].surface.clone(),
                second: w[1].surface.clone(),
            });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotatedInstance {
    pub comment_id: String,
    pub entity: String,
    pub label: SentimentLabel,
}

/// Polarity make-up of a comment's labelled entities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Composition {
    /// Every labelled entity is neutral.
    Neutral,
    /// Both polar and neutral entities.
    PseudoPolar,
    /// Only polar entities.
    Polar,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepNode {
    /// 1-based token index.
    pub index: usize,
    pub form: String,
    pub upos: String,
    pub xpos: String,
    /// 0 for the root.
    pub head: usize,
    pub deprel: String,
}

impl DepNode {
    /// Treebank-specific tag when present, universal tag otherwise.
    pub fn pos_tag(&self) -> &str {
        if self.xpos.is_empty() || self.xpos == "_" {
            &self.upos
        } else {
            &self.xpos
        }
    }

    pub fn is_verb(&self) -> bool {
        self.pos_tag().starts_with("VB") || self.upos == "VERB"
    }

    pub fn is_adjective(&self) -> bool {
        self.pos_tag().starts_with("JJ") || self.upos == "ADJ"
    }

    pub fn is_comparative(&self) -> bool {
        matches!(self.pos_tag(), "JJR" | "RBR")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependencyTree {
    pub sentence_index: usize,
    pub nodes: Vec<DepNode>,
}

impl DependencyTree {
    pub fn node(&self, index: usize) -> Option<&DepNode> {
        index.checked_sub(1).and_then(|i| self.nodes.get(i))
    }

    pub fn parent(&self, index: usize) -> Option<usize> {
        self.node(index).map(|n| n.head).filter(|&h| h != 0)
    }

    pub fn children(&self, index: usize) -> impl Iterator<Item = &DepNode> + '_ {
        self.nodes.iter().filter(move |n| n.head == index)
    }

    /// Checks single root, in-range heads and acyclicity.
    pub fn validate(&self, comment_id: &str) -> Result<()> {
        let invalid = |reason: String| Error::InvalidTree {
            comment_id: comment_id.to_string(),
            sentence: self.sentence_index,
            reason,
        };
        let n = self.nodes.len();
        for (i, node) in self.nodes.iter().enumerate() {
            if node.index != i + 1 {
                return Err(invalid(format!("token ids not contiguous at position {}", i + 1)));
            }
            if node.head > n {
                return Err(invalid(format!("token {} has out-of-range head {}", node.index, node.head)));
            }
            if node.head == node.index {
                return Err(Error::CyclicTree {
                    comment_id: comment_id.to_string(),
                    sentence: self.sentence_index,
                });
            }
        }
        let roots = self.nodes.iter().filter(|n| n.head == 0).count();
        // Every node points somewhere, so zero roots means a cycle.
        if roots == 0 && n > 0 {
            return Err(Error::CyclicTree {
                comment_id: comment_id.to_string(),
                sentence: self.sentence_index,
            });
        }
        if roots > 1 {
            return Err(invalid(format!("{roots} root nodes")));
        }
        for start in 1..=n {
            let mut cur = start;
            let mut steps = 0;
            while cur != 0 {
                cur = self.nodes[cur - 1].head;
                steps += 1;
                if steps > n {
                    return Err(Error::CyclicTree {
                        comment_id: comment_id.to_string(),
                        sentence: self.sentence_index,
                    });
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Corpus {
    pub comments: Vec<Comment>,
    pub instances: Vec<AnnotatedInstance>,
    index: HashMap<String, usize>,
}

#[derive(Deserialize, Serialize)]
struct CommentRecord {
    id: String,
    text: String,
    #[serde(default)]
    entities: Vec<EntityMention>,
}

#[derive(Deserialize, Serialize)]
struct LabelRecord {
    comment_id: String,
    entity: String,
    label: SentimentLabel,
}

impl Corpus {
    pub fn new(comments: Vec<Comment>, instances: Vec<AnnotatedInstance>) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, c) in comments.iter().enumerate() {
            if index.insert(c.id.clone(), i).is_some() {
                return Err(Error::MalformedRecord {
                    line: i + 1,
                    reason: format!("duplicate comment id {:?}", c.id),
                });
            }
        }
        let mut corpus = Corpus {
            comments,
            instances: Vec::new(),
            index,
        };
        let mut seen = HashSet::new();
        for (i, inst) in instances.into_iter().enumerate() {
            corpus.check_instance(i + 1, &inst, &mut seen)?;
            corpus.instances.push(inst);
        }
        Ok(corpus)
    }

    fn check_instance(&self, line: usize, inst: &AnnotatedInstance, seen: &mut HashSet<(String, String)>) -> Result<()> {
        let resolved = self
            .comment(&inst.comment_id)
            .is_some_and(|c| c.mentions_of(&inst.entity).next().is_some());
        if !resolved {
            return Err(Error::DanglingLabel {
                line,
                comment_id: inst.comment_id.clone(),
                entity: inst.entity.clone(),
            });
        }
        if !seen.insert((inst.comment_id.clone(), inst.entity.clone())) {
            return Err(Error::MalformedRecord {
                line,
                reason: format!("duplicate label for ({:?}, {:?})", inst.comment_id, inst.entity),
            });
        }
        Ok(())
    }

    pub fn comment(&self, id: &str) -> Option<&Comment> {
        self.index.get(id).map(|&i| &self.comments[i])
    }

    /// Labels of one comment, keyed by entity.
    pub fn labels_of(&self, comment_id: &str) -> BTreeMap<&str, SentimentLabel> {
        self.instances
            .iter()
            .filter(|i| i.comment_id == comment_id)
            .map(|i| (i.entity.as_str(), i.label))
            .collect()
    }

    /// Composition of a comment by its labelled entities; `None` when the
    /// comment carries no labels.
    pub fn composition(&self, comment_id: &str) -> Option<Composition> {
        let labels = self.labels_of(comment_id);
        if labels.is_empty() {
            return None;
        }
        let polar = labels.values().filter(|l| l.is_polar()).count();
        Some(if polar == 0 {
            Composition::Neutral
        } else if polar == labels.len() {
            Composition::Polar
        } else {
            Composition::PseudoPolar
        })
    }

    pub fn sentence_count(&self) -> usize {
        self.comments.iter().map(|c| c.sentences.len()).sum()
    }

    pub fn parsed_sentence_count(&self) -> usize {
        self.comments.iter().flat_map(|c| &c.sentences).filter(|s| s.tree.is_some()).count()
    }

    pub fn write_comments(&self, path: &Path) -> Result<()> {
        let mut out = String::new();
        for c in &self.comments {
            let rec = CommentRecord {
                id: c.id.clone(),
                text: c.text.clone(),
                entities: c.mentions.clone(),
            };
            out.push_str(&serde_json::to_string(&rec)?);
            out.push('\n');
        }
        fs::write(path, out).map_err(|e| Error::io(path, e))
    }

    pub fn write_labels(&self, path: &Path) -> Result<()> {
        let mut out = String::new();
        for i in &self.instances {
            out.push_str(&serde_json::to_string(i)?);
            out.push('\n');
        }
        fs::write(path, out).map_err(|e| Error::io(path, e))
    }

    /// Writes every attached tree as a CoNLL-U block.
    pub fn write_parses(&self, path: &Path) -> Result<()> {
        let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let text = self.parses_to_conllu();
        f.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))
    }

    pub fn parses_to_conllu(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            for s in &c.sentences {
                if let Some(tree) = &s.tree {
                    out.push_str(&format!("# comment_id = {}\n# sent_index = {}\n", c.id, s.index));
                    out.push_str(&format!("# text = {}\n", &c.text[s.start..s.end]));
                    for n in &tree.nodes {
                        out.push_str(&format!(
                            "{}\t{}\t_\t{}\t{}\t_\t{}\t{}\t_\t_\n",
                            n.index,
                            n.form,
                            or_underscore(&n.upos),
                            or_underscore(&n.xpos),
                            n.head,
                            n.deprel
                        ));
                    }
                    out.push('\n');
                }
            }
        }
        out
    }
}

fn or_underscore(s: &str) -> &str {
    if s.is_empty() {
        "_"
    } else {
        s
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Parses comment records from JSONL text.
pub fn parse_comments(text: &str) -> Result<Vec<Comment>> {
    let mut comments = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        if line.trim().is_empty() {
            continue;
        }
        let rec: CommentRecord = serde_json::from_str(line).map_err(|e| Error::MalformedRecord {
            line: line_no,
            reason: e.to_string(),
        })?;
        let comment = Comment::new(rec.id, rec.text, rec.entities).map_err(|e| match e {
            Error::MalformedRecord { reason, .. } => Error::MalformedRecord { line: line_no, reason },
            Error::EmptyText => Error::MalformedRecord {
                line: line_no,
                reason: "comment text is empty".into(),
            },
            other => other,
        })?;
        comments.push(comment);
    }
    Ok(comments)
}

/// Parses label records from JSONL text.
pub fn parse_labels(text: &str) -> Result<Vec<(usize, AnnotatedInstance)>> {
    let mut labels = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let rec: LabelRecord = serde_json::from_str(line).map_err(|e| Error::MalformedRecord {
            line: n + 1,
            reason: e.to_string(),
        })?;
        labels.push((
            n + 1,
            AnnotatedInstance {
                comment_id: rec.comment_id,
                entity: rec.entity,
                label: rec.label,
            },
        ));
    }
    Ok(labels)
}

/// Loads and cross-validates comments and labels.
pub fn load_corpus(comments_path: &Path, labels_path: &Path) -> Result<Corpus> {
    let comments = parse_comments(&read(comments_path)?)?;
    let labels = parse_labels(&read(labels_path)?)?;
    corpus_from_parts(comments, labels)
}

/// Builds a corpus from comments only, for prediction on unlabelled data.
pub fn load_comments(comments_path: &Path) -> Result<Corpus> {
    Corpus::new(parse_comments(&read(comments_path)?)?, Vec::new())
}

fn corpus_from_parts(comments: Vec<Comment>, labels: Vec<(usize, AnnotatedInstance)>) -> Result<Corpus> {
    let mut corpus = Corpus::new(comments, Vec::new())?;
    let mut seen = HashSet::new();
    for (line, inst) in labels {
        corpus.check_instance(line, &inst, &mut seen)?;
        corpus.instances.push(inst);
    }
    Ok(corpus)
}

/// One sentence block from a CoNLL-U file.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseBlock {
    pub comment_id: String,
    pub sent_index: usize,
    pub nodes: Vec<DepNode>,
    /// Line number of the first line of the block.
    pub line: usize,
}

/// Reads CoNLL-U blocks. Multiword ranges (`1-2`) and empty nodes (`1.1`)
/// are skipped.
pub fn parse_conllu(text: &str) -> Result<Vec<ParseBlock>> {
    let mut blocks = Vec::new();
    let mut meta: HashMap<&str, &str> = HashMap::new();
    let mut nodes: Vec<DepNode> = Vec::new();
    let mut block_line = 0;

    let flush = |meta: &mut HashMap<&str, &str>, nodes: &mut Vec<DepNode>, line: usize, blocks: &mut Vec<ParseBlock>| -> Result<()> {
        if nodes.is_empty() && meta.is_empty() {
            return Ok(());
        }
        let missing = |key: &str| Error::MalformedRecord {
            line,
            reason: format!("CoNLL-U block lacks `# {key} = ...` metadata"),
        };
        let comment_id = meta.get("comment_id").ok_or_else(|| missing("comment_id"))?.to_string();
        let sent_index = meta
            .get("sent_index")
            .ok_or_else(|| missing("sent_index"))?
            .parse()
            .map_err(|_| Error::MalformedRecord {
                line,
                reason: "sent_index is not a non-negative integer".into(),
            })?;
        blocks.push(ParseBlock {
            comment_id,
            sent_index,
            nodes: std::mem::take(nodes),
            line,
        });
        meta.clear();
        Ok(())
    };

    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            flush(&mut meta, &mut nodes, block_line, &mut blocks)?;
            continue;
        }
        if meta.is_empty() && nodes.is_empty() {
            block_line = line_no;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((k, v)) = comment.split_once('=') {
                meta.insert(k.trim(), v.trim());
            }
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(Error::MalformedRecord {
                line: line_no,
                reason: format!("expected 10 tab-separated columns, found {}", cols.len()),
            });
        }
        if cols[0].contains('-') || cols[0].contains('.') {
            continue;
        }
        let num = |s: &str, what: &str| -> Result<usize> {
            s.parse().map_err(|_| Error::MalformedRecord {
                line: line_no,
                reason: format!("{what} {s:?} is not an integer"),
            })
        };
        nodes.push(DepNode {
            index: num(cols[0], "token id")?,
            form: cols[1].to_string(),
            upos: cols[3].to_string(),
            xpos: cols[4].to_string(),
            head: num(cols[6], "head")?,
            deprel: cols[7].to_string(),
        });
    }
    flush(&mut meta, &mut nodes, block_line, &mut blocks)?;
    Ok(blocks)
}

/// Attaches dependency trees to segmented sentences. Sentences without a
/// block stay parse-absent.
pub fn load_parses(parse_path: &Path, corpus: Corpus) -> Result<Corpus> {
    attach_parses(&read(parse_path)?, corpus)
}

pub fn attach_parses(conllu: &str, mut corpus: Corpus) -> Result<Corpus> {
    for block in parse_conllu(conllu)? {
        let Some(&ci) = corpus.index.get(&block.comment_id) else {
            return Err(Error::MalformedRecord {
                line: block.line,
                reason: format!("parse references unknown comment {:?}", block.comment_id),
            });
        };
        let comment = &mut corpus.comments[ci];
        let Some(sentence) = comment.sentences.get_mut(block.sent_index) else {
            return Err(Error::MalformedRecord {
                line: block.line,
                reason: format!("comment {:?} has no sentence {}", block.comment_id, block.sent_index),
            });
        };
        if block.nodes.len() != sentence.tokens.len() {
            return Err(Error::TokenMismatch {
                comment_id: block.comment_id,
                sentence: block.sent_index,
                expected: sentence.tokens.len(),
                found: block.nodes.len(),
            });
        }
        let tree = DependencyTree {
            sentence_index: block.sent_index,
            nodes: block.nodes,
        };
        tree.validate(&comment.id)?;
        sentence.tree = Some(tree);
    }
    Ok(corpus)
}
