//! Deterministic synthetic corpus with planted clues, gold contexts and
//! dependency parses.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{attach_parses, AnnotatedInstance, Comment, Composition, Corpus, EntityMention, EntityType, SentimentLabel};
use crate::error::{Error, Result};

const PERSONS: &[(&str, &str)] = &[
    ("Obama", "He"),
    ("Romney", "He"),
    ("Hillary", "She"),
    ("Bush", "He"),
    ("Joe Biden", "He"),
    ("McCain", "He"),
    ("Palin", "She"),
    ("Ryan", "He"),
    ("Nancy Pelosi", "She"),
    ("Reid", "He"),
    ("Christie", "He"),
    ("Gingrich", "He"),
    ("Santorum", "He"),
    ("Clinton", "He"),
    ("Cheney", "He"),
    ("Huckabee", "He"),
    ("Boehner", "He"),
    ("Kerry", "He"),
    ("Warren", "She"),
    ("Haley", "She"),
];

const ORGS: &[&str] = &[
    "Exxon",
    "Apple",
    "Microsoft",
    "FOX",
    "CNN",
    "MSNBC",
    "Reuters",
    "Congress",
    "Walmart",
    "Wall Street",
    "Goldman Sachs",
    "GOP",
    "NRA",
    "ACLU",
    "Boeing",
    "Pfizer",
    "Amazon",
    "Chevron",
];

const PLACES: &[&str] = &[
    "Ohio", "Texas", "Iowa", "Florida", "China", "Iran", "Chicago", "Boston", "New York", "Syria", "Nevada", "Denver",
];

const POS_ADJ: &[&str] = &[
    "good",
    "great",
    "excellent",
    "honest",
    "smart",
    "brilliant",
    "wonderful",
    "amazing",
    "fair",
    "strong",
    "reliable",
    "sane",
    "helpful",
    "impressive",
    "decent",
    "trustworthy",
    "competent",
    "effective",
    "wise",
    "brave",
    "successful",
    "outstanding",
    "fantastic",
    "superb",
    "genuine",
    "capable",
    "generous",
    "loyal",
    "terrific",
    "sincere",
    "solid",
    "innovative",
    "inspiring",
    "remarkable",
    "heroic",
    "principled",
    "visionary",
    "dependable",
    "skilled",
    "thoughtful",
    "admirable",
];

const NEG_ADJ: &[&str] = &[
    "pathetic",
    "greedy",
    "bad",
    "terrible",
    "awful",
    "corrupt",
    "stupid",
    "incompetent",
    "dishonest",
    "lazy",
    "weak",
    "horrible",
    "crooked",
    "useless",
    "arrogant",
    "clueless",
    "dangerous",
    "evil",
    "bankrupt",
    "shameful",
    "mediocre",
    "sloppy",
    "broken",
    "nasty",
    "rude",
    "wasteful",
    "reckless",
    "cowardly",
    "deceitful",
    "inept",
    "foolish",
    "disgusting",
    "worthless",
    "idiotic",
    "shady",
    "careless",
    "miserable",
];

const NEG_NOUN: &[&str] = &["liar", "fraud", "disgrace", "failure", "disaster", "hypocrite"];
const POS_VERB: &[&str] = &["love", "admire", "respect"];
const NEG_VERB: &[&str] = &["hate"];

/// One planted instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub comment_id: String,
    pub entity: String,
    pub label: SentimentLabel,
    pub archetype: String,
    pub composition: Composition,
    /// Lexicon words written into the comment to express this entity's polarity.
    pub planted_clues: Vec<String>,
    /// Sentence indices that belong to the entity's context.
    pub gold_sentences: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub seed: u64,
    pub comments: usize,
    pub instances: usize,
    pub composition: BTreeMap<String, usize>,
    pub archetypes: BTreeMap<String, usize>,
    pub stage1_instances: usize,
    pub stage1_neutral: usize,
    pub stage1_polar: usize,
    pub stage2_instances: usize,
    pub stage2_positive: usize,
    pub stage2_negative: usize,
    pub entries: Vec<ManifestEntry>,
}

#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    pub corpus: Corpus,
    pub manifest: Manifest,
}

impl SyntheticCorpus {
    /// Writes comments.jsonl, labels.jsonl, parses.conllu and manifest.json.
    pub fn write_dir(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        self.corpus.write_comments(&dir.join("comments.jsonl"))?;
        self.corpus.write_labels(&dir.join("labels.jsonl"))?;
        self.corpus.write_parses(&dir.join("parses.conllu"))?;
        let path = dir.join("manifest.json");
        let json = serde_json::to_string_pretty(&self.manifest)? + "\n";
        std::fs::write(&path, json).map_err(|e| Error::io(&path, e))
    }
}

#[derive(Debug, Clone)]
struct Ent {
    name: String,
    kind: EntityType,
    pronoun: &'static str,
}

/// Who a sentence belongs to in the gold context.
#[derive(Debug, Clone)]
enum Owners {
    Entities(Vec<usize>),
    Persons,
    All,
}

#[derive(Debug, Clone)]
struct Sent {
    /// Space-separated `form|TAG|head|rel` items; `$k` forms are entity k.
    template: String,
    owners: Owners,
}

#[derive(Debug, Clone)]
struct Plan {
    archetype: &'static str,
    ents: Vec<Ent>,
    labels: Vec<SentimentLabel>,
    clues: Vec<Vec<String>>,
    sents: Vec<Sent>,
    /// Every entity sees the whole comment.
    whole: bool,
}

impl Plan {
    fn new(archetype: &'static str, ents: Vec<Ent>) -> Self {
        let n = ents.len();
        Plan {
            archetype,
            ents,
            labels: vec![SentimentLabel::Neutral; n],
            clues: vec![Vec::new(); n],
            sents: Vec::new(),
            whole: n == 1,
        }
    }

    fn push(&mut self, template: String, owners: Owners) {
        self.sents.push(Sent { template, owners });
    }

    fn about(&mut self, e: usize, template: String) {
        self.push(template, Owners::Entities(vec![e]));
    }
}

struct Gen {
    rng: ChaCha8Rng,
}

fn opposite(l: SentimentLabel) -> SentimentLabel {
    match l {
        SentimentLabel::Positive => SentimentLabel::Negative,
        SentimentLabel::Negative => SentimentLabel::Positive,
        SentimentLabel::Neutral => SentimentLabel::Neutral,
    }
}

impl Gen {
    fn pick<'a>(&mut self, xs: &'a [&'a str]) -> &'a str {
        xs.choose(&mut self.rng).expect("non-empty pool")
    }

    fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    fn sign(&mut self) -> SentimentLabel {
        if self.chance(0.5) {
            SentimentLabel::Positive
        } else {
            SentimentLabel::Negative
        }
    }

    fn adj(&mut self, l: SentimentLabel) -> String {
        match l {
            SentimentLabel::Positive => self.pick(POS_ADJ).to_string(),
            _ => self.pick(NEG_ADJ).to_string(),
        }
    }

    fn end(&mut self) -> &'static str {
        if self.chance(0.25) {
            "!"
        } else {
            "."
        }
    }

    fn person(&mut self) -> Ent {
        let (name, pronoun) = *PERSONS.choose(&mut self.rng).expect("persons");
        Ent {
            name: name.into(),
            kind: EntityType::Person,
            pronoun,
        }
    }

    fn org(&mut self) -> Ent {
        Ent {
            name: self.pick(ORGS).into(),
            kind: EntityType::Organization,
            pronoun: "It",
        }
    }

    fn place(&mut self) -> Ent {
        Ent {
            name: self.pick(PLACES).into(),
            kind: EntityType::Place,
            pronoun: "It",
        }
    }

    fn any_entity(&mut self) -> Ent {
        match self.rng.gen_range(0..5) {
            0 | 1 => self.person(),
            2 | 3 => self.org(),
            _ => self.place(),
        }
    }

    /// `n` entities with distinct names whose words do not overlap.
    fn distinct(&mut self, n: usize, mut make: impl FnMut(&mut Self, usize) -> Ent) -> Vec<Ent> {
        let mut out: Vec<Ent> = Vec::new();
        while out.len() < n {
            let e = make(self, out.len());
            let clash = out.iter().any(|o| o.name.split(' ').any(|w| e.name.split(' ').any(|v| v == w)));
            if !clash {
                out.push(e);
            }
        }
        out
    }

    /// One clue-bearing sentence about entity `e` with polarity `l`.
    fn polar_sentence(&mut self, e: usize, l: SentimentLabel, person: bool) -> (String, Vec<String>) {
        let end = self.end();
        let positive = l == SentimentLabel::Positive;
        match self.rng.gen_range(0..6) {
            0 | 1 => {
                let a = self.adj(l);
                (format!("${e}|NNP|3|nsubj is|VBZ|3|cop {a}|JJ|0|root {end}|.|3|punct"), vec![a])
            }
            2 => {
                let a = self.adj(l);
                (
                    format!("${e}|NNP|4|nsubj is|VBZ|4|cop very|RB|4|advmod {a}|JJ|0|root {end}|.|4|punct"),
                    vec![a],
                )
            }
            3 => {
                let v = if positive { self.pick(POS_VERB) } else { self.pick(NEG_VERB) };
                (
                    format!("I|PRP|2|nsubj {v}|VBP|0|root ${e}|NNP|2|dobj {end}|.|2|punct"),
                    vec![v.into()],
                )
            }
            4 if !positive && person => {
                let n = self.pick(NEG_NOUN);
                (
                    format!("${e}|NNP|4|nsubj is|VBZ|4|cop a|DT|4|det {n}|NN|0|root {end}|.|4|punct"),
                    vec![n.into()],
                )
            }
            4 if positive => {
                let a = self.adj(l);
                (
                    format!("Who|WP|3|nsubj else|RB|1|advmod thinks|VBZ|0|root ${e}|NNP|6|nsubj is|VBZ|6|cop {a}|JJ|3|ccomp ?|.|3|punct"),
                    vec![a],
                )
            }
            4 => {
                let a = self.adj(l);
                (
                    format!("Is|VBZ|5|cop ${e}|NNP|5|nsubj really|RB|5|advmod that|RB|5|advmod {a}|JJ|0|root ?|.|5|punct"),
                    vec![a],
                )
            }
            _ => {
                let a = self.adj(l);
                (
                    format!("${e}|NNP|2|nsubj did|VBD|0|root a|DT|5|det {a}|JJ|5|amod job|NN|2|dobj {end}|.|2|punct"),
                    vec![a],
                )
            }
        }
    }

    fn neutral_sentence(&mut self, e: usize) -> String {
        match self.rng.gen_range(0..5) {
            0 => format!("I|PRP|2|nsubj read|VBD|0|root about|IN|2|prep ${e}|NNP|3|pobj in|IN|2|prep the|DT|7|det paper|NN|5|pobj .|.|2|punct"),
            1 => format!("${e}|NNP|2|nsubj announced|VBD|0|root the|DT|4|det results|NNS|2|dobj on|IN|2|prep Monday|NNP|5|pobj .|.|2|punct"),
            2 => format!("The|DT|2|det reporters|NNS|3|nsubj asked|VBD|0|root ${e}|NNP|3|dobj about|IN|3|prep the|DT|7|det schedule|NN|5|pobj .|.|3|punct"),
            3 => format!("The|DT|2|det story|NN|3|nsubj came|VBD|0|root from|IN|3|prep ${e}|NNP|4|pobj .|.|3|punct"),
            _ => format!("Reporters|NNS|2|nsubj followed|VBD|0|root ${e}|NNP|2|dobj to|IN|2|prep the|DT|6|det airport|NN|4|pobj .|.|2|punct"),
        }
    }

    fn rhetorical(&mut self, e: usize) -> String {
        match self.rng.gen_range(0..4) {
            0 => format!("Does|VBZ|4|aux ${e}|NNP|4|nsubj even|RB|4|advmod have|VB|0|root a|DT|6|det plan|NN|4|dobj ?|.|4|punct"),
            1 => format!("Who|WP|2|nsubj trusts|VBZ|0|root ${e}|NNP|2|dobj anymore|RB|2|advmod ?|.|2|punct"),
            2 => format!("What|WP|5|dobj has|VBZ|5|aux ${e}|NNP|5|nsubj ever|RB|5|advmod done|VBN|0|root for|IN|5|prep us|PRP|6|pobj ?|.|5|punct"),
            _ => format!("Why|WRB|5|advmod does|VBZ|5|aux anyone|NN|5|nsubj still|RB|5|advmod listen|VB|0|root to|IN|5|prep ${e}|NNP|6|pobj ?|.|5|punct"),
        }
    }

    fn maybe_prefix(&mut self, plan: &mut Plan) {
        if self.chance(0.15) {
            plan.sents.insert(
                0,
                Sent {
                    template: "Did|VBD|3|aux you|PRP|3|nsubj see|VB|0|root the|DT|5|det debate|NN|3|dobj ?|.|3|punct".into(),
                    owners: Owners::All,
                },
            );
        }
    }

    fn polar_about(&mut self, plan: &mut Plan, e: usize, l: SentimentLabel) {
        let person = plan.ents[e].kind.is_person();
        let (t, clues) = self.polar_sentence(e, l, person);
        plan.labels[e] = l;
        plan.clues[e].extend(clues);
        plan.about(e, t);
    }

    fn neutral_about(&mut self, plan: &mut Plan, e: usize) {
        let t = self.neutral_sentence(e);
        plan.about(e, t);
    }

    fn contrast(&mut self, first: SentimentLabel) -> SentimentLabel {
        if self.chance(0.8) {
            opposite(first)
        } else {
            first
        }
    }

    // Polar-only archetypes.

    fn single(&mut self) -> Plan {
        let ents = vec![self.any_entity()];
        let mut p = Plan::new("single", ents);
        let l = self.sign();
        self.polar_about(&mut p, 0, l);
        p
    }

    fn negated(&mut self) -> Plan {
        let ents = vec![self.any_entity()];
        let mut p = Plan::new("negated", ents);
        let l = self.sign();
        let a = self.adj(opposite(l));
        let end = self.end();
        let neg = if self.chance(0.7) { "not" } else { "never" };
        p.about(
            0,
            format!("$0|NNP|4|nsubj is|VBZ|4|cop {neg}|RB|4|neg {a}|JJ|0|root {end}|.|4|punct"),
        );
        p.labels[0] = l;
        p.clues[0].push(a);
        p
    }

    fn quoted(&mut self) -> Plan {
        let ents = vec![self.person()];
        let reflexive = if ents[0].pronoun == "She" { "herself" } else { "himself" };
        let mut p = Plan::new("quoted", ents);
        let a = self.adj(SentimentLabel::Positive);
        p.about(
            0,
            format!("$0|NNP|2|nsubj calls|VBZ|0|root {reflexive}|PRP|2|dobj \"|``|5|punct {a}|JJ|2|xcomp \"|''|5|punct .|.|2|punct"),
        );
        p.labels[0] = SentimentLabel::Negative;
        p.clues[0].push(a);
        p
    }

    fn rhetorical_single(&mut self) -> Plan {
        let ents = vec![self.any_entity()];
        let mut p = Plan::new("rhetorical", ents);
        let t = self.rhetorical(0);
        p.about(0, t);
        p.labels[0] = SentimentLabel::Negative;
        p
    }

    fn but_contrast(&mut self) -> Plan {
        let ents = self.distinct(2, |g, _| g.any_entity());
        let mut p = Plan::new("but_contrast", ents);
        let la = self.sign();
        let lb = self.contrast(la);
        if self.chance(0.7) {
            let (a, b) = (self.adj(la), self.adj(lb));
            p.push(
                format!("$0|NNP|3|nsubj is|VBZ|3|cop {a}|JJ|0|root but|CC|7|cc $1|NNP|7|nsubj is|VBZ|7|cop {b}|JJ|3|conj .|.|3|punct"),
                Owners::Entities(vec![0, 1]),
            );
            p.clues[0].push(a);
            p.clues[1].push(b);
        } else {
            let verb = |g: &mut Self, l| {
                if l == SentimentLabel::Positive {
                    g.pick(POS_VERB)
                } else {
                    g.pick(NEG_VERB)
                }
            };
            let (a, b) = (verb(self, la), verb(self, lb));
            p.push(
                format!("I|PRP|2|nsubj {a}|VBP|0|root $0|NNP|2|dobj but|CC|6|cc I|PRP|6|nsubj {b}|VBP|2|conj $1|NNP|6|dobj .|.|2|punct"),
                Owners::Entities(vec![0, 1]),
            );
            p.clues[0].push(a.into());
            p.clues[1].push(b.into());
        }
        p.labels = vec![la, lb];
        p
    }

    /// One side of a "but" carries no clue; its polarity is the opposite of the other side.
    fn but_one_sided(&mut self) -> Plan {
        let ents = self.distinct(2, |g, i| if i == 0 { g.person() } else { g.any_entity() });
        let mut p = Plan::new("but_one_sided", ents);
        let l = self.sign();
        if self.chance(0.5) {
            let a = self.adj(l);
            p.push(
                format!(
                    "$0|NNP|3|nsubj is|VBZ|3|cop {a}|JJ|0|root but|CC|6|cc $1|NNP|6|nsubj stayed|VBD|3|conj home|NN|6|advmod .|.|3|punct"
                ),
                Owners::Entities(vec![0, 1]),
            );
            p.clues[0].push(a);
            p.labels = vec![l, opposite(l)];
        } else {
            p.push(
                "$0|NNP|2|nsubj tried|VBD|0|root to|TO|4|mark fix|VB|2|xcomp the|DT|6|det economy|NN|4|dobj but|CC|9|cc $1|NNP|9|nsubj blocked|VBD|2|conj the|DT|11|det plan|NN|9|dobj .|.|2|punct".into(),
                Owners::Entities(vec![0, 1]),
            );
            let (t, clues) = self.polar_sentence(1, l, p.ents[1].kind.is_person());
            p.about(1, t);
            p.clues[1].extend(clues);
            p.labels = vec![opposite(l), l];
        }
        p
    }

    fn comparative(&mut self) -> Plan {
        let ents = self.distinct(2, |g, _| g.any_entity());
        let mut p = Plan::new("comparative", ents);
        let la = self.sign();
        let word = if la == SentimentLabel::Positive {
            *["better", "smarter"].choose(&mut self.rng).expect("pool")
        } else {
            "worse"
        };
        if self.chance(0.6) {
            p.push(
                format!("$0|NNP|3|nsubj is|VBZ|3|cop {word}|JJR|0|root than|IN|3|prep $1|NNP|4|pobj .|.|3|punct"),
                Owners::Entities(vec![0, 1]),
            );
        } else {
            let word = if word == "smarter" { "better" } else { word };
            p.push(
                format!("$0|NNP|2|nsubj handled|VBD|0|root the|DT|4|det crisis|NN|2|dobj {word}|RBR|2|advmod than|IN|5|prep $1|NNP|6|pobj .|.|2|punct"),
                Owners::Entities(vec![0, 1]),
            );
        }
        p.clues[0].push(word.into());
        p.labels = vec![la, opposite(la)];
        p
    }

    fn separate(&mut self) -> Plan {
        let ents = self.distinct(2, |g, _| g.any_entity());
        let mut p = Plan::new("separate", ents);
        let la = self.sign();
        let lb = self.contrast(la);
        self.polar_about(&mut p, 0, la);
        self.polar_about(&mut p, 1, lb);
        p
    }

    fn pronoun(&mut self) -> Plan {
        let ents = self.distinct(2, |g, i| if i == 0 { g.person() } else { g.org() });
        let he = ents[0].pronoun;
        let mut p = Plan::new("pronoun", ents);
        let la = self.sign();
        let lb = self.contrast(la);
        p.about(
            0,
            "$0|NNP|2|nsubj gave|VBD|0|root a|DT|4|det speech|NN|2|dobj on|IN|2|prep Monday|NNP|5|pobj .|.|2|punct".into(),
        );
        let a = self.adj(la);
        let end = self.end();
        p.push(
            format!("{he}|PRP|3|nsubj was|VBD|3|cop {a}|JJ|0|root {end}|.|3|punct"),
            Owners::Persons,
        );
        p.clues[0].push(a);
        p.labels[0] = la;
        self.polar_about(&mut p, 1, lb);
        p
    }

    fn amod(&mut self) -> Plan {
        let ents = vec![if self.chance(0.5) { self.org() } else { self.person() }];
        let mut p = Plan::new("amod", ents);
        let l = self.sign();
        let a = self.adj(l);
        p.about(
            0,
            format!("{a}|JJ|2|amod $0|NNP|3|nsubj struck|VBD|0|root again|RB|3|advmod .|.|3|punct"),
        );
        p.clues[0].push(a);
        p.labels[0] = l;
        p
    }

    fn list(&mut self) -> Plan {
        let ents = self.distinct(3, |g, _| if g.chance(0.5) { g.org() } else { g.person() });
        let mut p = Plan::new("list", ents);
        let l = self.sign();
        let a = self.adj(l);
        let end = self.end();
        p.push(
            format!("$0|NNP|8|nsubj ,|,|3|punct $1|NNP|1|conj and|CC|5|cc $2|NNP|1|conj are|VBP|8|cop all|RB|8|advmod {a}|JJ|0|root {end}|.|8|punct"),
            Owners::All,
        );
        p.whole = true;
        for e in 0..3 {
            p.labels[e] = l;
            p.clues[e].push(a.clone());
        }
        p
    }

    // Pseudo-polar archetypes.

    fn polar_plus_neutral(&mut self, polar: usize) -> Plan {
        let n = polar + 1;
        let ents = self.distinct(n, |g, _| g.any_entity());
        let mut p = Plan::new(if polar == 1 { "polar_neutral" } else { "two_polar_neutral" }, ents);
        let first = self.sign();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut self.rng);
        for &e in &order {
            if e == n - 1 {
                self.neutral_about(&mut p, e);
            } else {
                let l = if e == 0 { first } else { self.contrast(first) };
                self.polar_about(&mut p, e, l);
            }
        }
        p
    }

    fn same_sentence(&mut self) -> Plan {
        let ents = self.distinct(2, |g, i| if i == 0 { g.person() } else { g.place() });
        let mut p = Plan::new("same_sentence", ents);
        let l = self.sign();
        let a = self.adj(l);
        p.push(
            format!("{a}|JJ|2|amod speech|NN|0|root by|IN|2|prep $0|NNP|3|pobj at|IN|2|prep the|DT|7|det rally|NN|5|pobj in|IN|7|prep $1|NNP|8|pobj on|IN|2|prep Monday|NNP|10|pobj .|.|2|punct"),
            Owners::Entities(vec![0, 1]),
        );
        p.clues[0].push(a);
        p.labels[0] = l;
        p
    }

    fn google_pseudo(&mut self) -> Plan {
        let google = Ent {
            name: "Google".into(),
            kind: EntityType::Organization,
            pronoun: "It",
        };
        let other = self.distinct(1, |g, _| g.any_entity()).remove(0);
        let mut p = Plan::new("google_verb", vec![google, other]);
        p.push(
            "I|PRP|2|nsubj had|VBD|0|root to|TO|4|mark $0|VB|2|xcomp $1|NNP|4|dobj to|TO|7|mark learn|VB|4|advcl the|DT|9|det facts|NNS|7|dobj .|.|2|punct".into(),
            Owners::Entities(vec![0, 1]),
        );
        let l = self.sign();
        self.polar_about(&mut p, 1, l);
        p
    }

    fn amod_pseudo(&mut self) -> Plan {
        let ents = self.distinct(2, |g, i| if i == 0 { g.org() } else { g.any_entity() });
        let mut p = Plan::new("amod_neutral", ents);
        let l = self.sign();
        let a = self.adj(l);
        p.about(
            0,
            format!("{a}|JJ|2|amod $0|NNP|3|nsubj raised|VBD|0|root prices|NNS|3|dobj again|RB|3|advmod .|.|3|punct"),
        );
        p.clues[0].push(a);
        p.labels[0] = l;
        self.neutral_about(&mut p, 1);
        p
    }

    fn rhetorical_pseudo(&mut self) -> Plan {
        let ents = self.distinct(2, |g, _| g.any_entity());
        let mut p = Plan::new("rhetorical_neutral", ents);
        let t = self.rhetorical(0);
        p.about(0, t);
        p.labels[0] = SentimentLabel::Negative;
        self.neutral_about(&mut p, 1);
        p
    }

    // Neutral archetypes.

    fn neutral_single(&mut self) -> Plan {
        let ents = vec![self.any_entity()];
        let mut p = Plan::new("neutral", ents);
        self.neutral_about(&mut p, 0);
        p
    }

    fn neutral_pair(&mut self) -> Plan {
        let ents = self.distinct(2, |g, _| g.any_entity());
        let mut p = Plan::new("neutral_pair", ents);
        if self.chance(0.5) {
            p.push(
                "$0|NNP|2|nsubj met|VBD|0|root $1|NNP|2|dobj in|IN|2|prep Washington|NNP|4|pobj on|IN|2|prep Monday|NNP|6|pobj .|.|2|punct"
                    .into(),
                Owners::Entities(vec![0, 1]),
            );
        } else {
            self.neutral_about(&mut p, 0);
            self.neutral_about(&mut p, 1);
        }
        p
    }

    fn google_neutral(&mut self) -> Plan {
        let google = Ent {
            name: "Google".into(),
            kind: EntityType::Organization,
            pronoun: "It",
        };
        let mut p = Plan::new("google_verb_only", vec![google]);
        p.about(
            0,
            "Just|RB|2|advmod $0|VB|0|root it|PRP|2|dobj and|CC|5|cc see|VB|2|conj for|IN|5|prep yourself|PRP|6|pobj .|.|2|punct".into(),
        );
        p
    }

    fn neutral_think(&mut self) -> Plan {
        let ents = vec![self.any_entity()];
        let mut p = Plan::new("neutral_opinion_verb", ents);
        p.about(
            0,
            "I|PRP|2|nsubj think|VBP|0|root $0|NNP|5|nsubj will|MD|5|aux vote|VB|2|ccomp on|IN|5|prep Tuesday|NNP|6|pobj .|.|2|punct"
                .into(),
        );
        p
    }

    fn neutral_noisy(&mut self) -> Plan {
        let ents = vec![self.any_entity()];
        let mut p = Plan::new("neutral_stray_clue", ents);
        p.about(
            0,
            "I|PRP|2|nsubj read|VBD|0|root about|IN|2|prep $0|NNP|3|pobj in|IN|2|prep the|DT|9|det bad|JJ|9|amod weather|NN|9|compound report|NN|5|pobj .|.|2|punct".into(),
        );
        p
    }
}

/// Archetype mix of the bundled corpus: 200 comments, 340 instances.
const MIX: &[(&str, usize)] = &[
    ("single", 14),
    ("negated", 12),
    ("quoted", 8),
    ("rhetorical", 10),
    ("but_contrast", 14),
    ("but_one_sided", 6),
    ("comparative", 10),
    ("separate", 8),
    ("pronoun", 6),
    ("amod", 6),
    ("list", 6),
    ("polar_neutral", 26),
    ("two_polar_neutral", 14),
    ("same_sentence", 8),
    ("google_verb", 4),
    ("amod_neutral", 4),
    ("rhetorical_neutral", 4),
    ("neutral", 20),
    ("neutral_pair", 10),
    ("google_verb_only", 4),
    ("neutral_opinion_verb", 2),
    ("neutral_stray_clue", 4),
];

fn plan_for(g: &mut Gen, archetype: &str) -> Plan {
    let mut p = match archetype {
        "single" => g.single(),
        "negated" => g.negated(),
        "quoted" => g.quoted(),
        "rhetorical" => g.rhetorical_single(),
        "but_contrast" => g.but_contrast(),
        "but_one_sided" => g.but_one_sided(),
        "comparative" => g.comparative(),
        "separate" => g.separate(),
        "pronoun" => g.pronoun(),
        "amod" => g.amod(),
        "list" => g.list(),
        "polar_neutral" => g.polar_plus_neutral(1),
        "two_polar_neutral" => g.polar_plus_neutral(2),
        "same_sentence" => g.same_sentence(),
        "google_verb" => g.google_pseudo(),
        "amod_neutral" => g.amod_pseudo(),
        "rhetorical_neutral" => g.rhetorical_pseudo(),
        "neutral" => g.neutral_single(),
        "neutral_pair" => g.neutral_pair(),
        "google_verb_only" => g.google_neutral(),
        "neutral_opinion_verb" => g.neutral_think(),
        "neutral_stray_clue" => g.neutral_noisy(),
        other => unreachable!("unknown archetype {other}"),
    };
    g.maybe_prefix(&mut p);
    p
}

/// The bundled corpus for `seed`.
pub fn generate(seed: u64) -> Result<SyntheticCorpus> {
    let mut g = Gen {
        rng: ChaCha8Rng::seed_from_u64(seed),
    };
    let mut plans: Vec<Plan> = MIX
        .iter()
        .flat_map(|&(name, n)| std::iter::repeat_n(name, n))
        .collect::<Vec<_>>()
        .into_iter()
        .map(|a| plan_for(&mut g, a))
        .collect();
    plans.shuffle(&mut g.rng);
    assemble(seed, "s", plans)
}

/// Smaller corpus for checking feature rankings: an entity is polar exactly
/// when it is a person in subject position, and clue sentences are shared
/// by every entity of a comment regardless of label.
pub fn person_subject_corpus(seed: u64) -> Result<SyntheticCorpus> {
    let mut g = Gen {
        rng: ChaCha8Rng::seed_from_u64(seed),
    };
    let mut plans = Vec::new();
    let shapes: [(&str, usize); 4] = [
        ("subject_person_object_other", 30),
        ("subject_person_object_person", 10),
        ("subject_org_pobj_place", 20),
        ("subject_org_object_person", 10),
    ];
    for (shape, n) in shapes {
        for _ in 0..n {
            let ents = match shape {
                "subject_person_object_other" => g.distinct(2, |g, i| {
                    if i == 0 {
                        g.person()
                    } else if g.chance(0.5) {
                        g.org()
                    } else {
                        g.place()
                    }
                }),
                "subject_person_object_person" => g.distinct(2, |g, _| g.person()),
                "subject_org_pobj_place" => g.distinct(2, |g, i| if i == 0 { g.org() } else { g.place() }),
                _ => g.distinct(2, |g, i| if i == 0 { g.org() } else { g.person() }),
            };
            let subject_polar = ents[0].kind.is_person();
            let mut p = Plan::new("person_subject", ents);
            p.whole = false;
            if shape == "subject_org_pobj_place" {
                p.push(
                    "$0|NNP|2|nsubj hired|VBD|0|root workers|NNS|2|dobj in|IN|2|prep $1|NNP|4|pobj .|.|2|punct".into(),
                    Owners::Entities(vec![0, 1]),
                );
            } else {
                let verb = *["visited", "called", "met"].choose(&mut g.rng).expect("verbs");
                p.push(
                    format!("$0|NNP|2|nsubj {verb}|VBD|0|root $1|NNP|2|dobj on|IN|2|prep Monday|NNP|4|pobj .|.|2|punct"),
                    Owners::Entities(vec![0, 1]),
                );
            }
            if subject_polar {
                p.labels[0] = g.sign();
            }
            if g.chance(0.5) {
                let l = g.sign();
                let a = g.adj(l);
                p.push(format!("That|DT|3|nsubj was|VBD|3|cop {a}|JJ|0|root .|.|3|punct"), Owners::All);
            }
            plans.push(p);
        }
    }
    plans.shuffle(&mut g.rng);
    assemble(seed, "ps", plans)
}

struct Built {
    text: String,
    mentions: Vec<EntityMention>,
    conllu: String,
}

fn upos(xpos: &str, rel: &str) -> &'static str {
    match xpos {
        "NNP" | "NNPS" => "PROPN",
        "NN" | "NNS" => "NOUN",
        "PRP" | "WP" => "PRON",
        "DT" => "DET",
        "IN" => "ADP",
        "CC" => "CCONJ",
        "TO" => "PART",
        "MD" => "AUX",
        "WRB" => "ADV",
        "." | "," | "``" | "''" => "PUNCT",
        x if x.starts_with("JJ") => "ADJ",
        x if x.starts_with("RB") => "ADV",
        x if x.starts_with("VB") && matches!(rel, "cop" | "aux") => "AUX",
        x if x.starts_with("VB") => "VERB",
        _ => "X",
    }
}

fn glue_left(form: &str) -> bool {
    matches!(form, "." | "," | "!" | "?" | ";" | ":")
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().collect::<String>() + c.as_str(),
        None => String::new(),
    }
}

/// Expands entity slots, renders text and emits CoNLL-U.
fn build(id: &str, plan: &Plan) -> Built {
    let mut text = String::new();
    let mut mentions = Vec::new();
    let mut conllu = String::new();

    for (si, sent) in plan.sents.iter().enumerate() {
        // (form, xpos, template head, rel, entity)
        let items: Vec<(&str, &str, usize, &str)> = sent
            .template
            .split(' ')
            .map(|item| {
                let f: Vec<&str> = item.splitn(4, '|').collect();
                (f[0], f[1], f[2].parse::<usize>().expect("numeric head"), f[3])
            })
            .collect();

        // Final index of each template item's head token.
        let mut last_index = Vec::with_capacity(items.len());
        let mut count = 0;
        for (form, ..) in &items {
            count += match form.strip_prefix('$') {
                Some(k) => plan.ents[k.parse::<usize>().expect("slot")].name.split(' ').count(),
                None => 1,
            };
            last_index.push(count);
        }
        let map_head = |h: usize| if h == 0 { 0 } else { last_index[h - 1] };

        let mut rows: Vec<(String, String, usize, String)> = Vec::new();
        let mut spans: Vec<(usize, usize)> = Vec::new();
        let mut entity_spans: Vec<(usize, usize, usize)> = Vec::new();
        for (form, xpos, head, rel) in &items {
            match form.strip_prefix('$') {
                Some(k) => {
                    let e = k.parse::<usize>().expect("slot");
                    let words: Vec<&str> = plan.ents[e].name.split(' ').collect();
                    let first = rows.len();
                    let head_index = first + words.len();
                    for (wi, w) in words.iter().enumerate() {
                        if wi + 1 == words.len() {
                            rows.push((w.to_string(), xpos.to_string(), map_head(*head), rel.to_string()));
                        } else {
                            rows.push((w.to_string(), "NNP".into(), head_index, "compound".into()));
                        }
                    }
                    entity_spans.push((e, first, rows.len() - 1));
                }
                None => rows.push((form.to_string(), xpos.to_string(), map_head(*head), rel.to_string())),
            }
        }
        if let Some(first) = rows.first_mut() {
            if !entity_spans.iter().any(|&(_, a, _)| a == 0) {
                first.0 = capitalize(&first.0);
            }
        }

        if si > 0 {
            text.push(' ');
        }
        let mut open_quote = false;
        let mut glue_next = true;
        for (form, ..) in &rows {
            let is_quote = form == "\"";
            let closing = is_quote && open_quote;
            if !glue_next && !glue_left(form) && !closing {
                text.push(' ');
            }
            let start = text.len();
            text.push_str(form);
            spans.push((start, text.len()));
            glue_next = is_quote && !open_quote;
            if is_quote {
                open_quote = !open_quote;
            }
        }
        for (e, a, b) in entity_spans {
            mentions.push(EntityMention {
                canonical: plan.ents[e].name.clone(),
                surface: plan.ents[e].name.clone(),
                start: spans[a].0,
                end: spans[b].1,
                entity_type: plan.ents[e].kind,
            });
        }

        let _ = writeln!(conllu, "# comment_id = {id}\n# sent_index = {si}");
        for (i, (form, xpos, head, rel)) in rows.iter().enumerate() {
            let _ = writeln!(
                conllu,
                "{}\t{}\t_\t{}\t{}\t_\t{}\t{}\t_\t_",
                i + 1,
                form,
                upos(xpos, rel),
                xpos,
                head,
                rel
            );
        }
        conllu.push('\n');
    }
    Built { text, mentions, conllu }
}

fn gold_sentences(plan: &Plan, e: usize) -> Vec<usize> {
    let persons: Vec<usize> = (0..plan.ents.len()).filter(|&i| plan.ents[i].kind.is_person()).collect();
    (0..plan.sents.len())
        .filter(|&s| {
            plan.whole
                || match &plan.sents[s].owners {
                    Owners::Entities(v) => v.contains(&e),
                    Owners::Persons => persons.contains(&e) || persons.is_empty(),
                    Owners::All => true,
                }
        })
        .collect()
}

fn assemble(seed: u64, prefix: &str, plans: Vec<Plan>) -> Result<SyntheticCorpus> {
    let mut comments = Vec::new();
    let mut instances = Vec::new();
    let mut conllu = String::new();
    let mut entries = Vec::new();
    let mut archetypes: BTreeMap<String, usize> = BTreeMap::new();

    for (i, plan) in plans.iter().enumerate() {
        let id = format!("{prefix}{:03}", i + 1);
        let built = build(&id, plan);
        comments.push(Comment::new(&id, built.text, built.mentions)?);
        conllu.push_str(&built.conllu);
        *archetypes.entry(plan.archetype.to_string()).or_default() += 1;
        for (e, ent) in plan.ents.iter().enumerate() {
            instances.push(AnnotatedInstance {
                comment_id: id.clone(),
                entity: ent.name.clone(),
                label: plan.labels[e],
            });
        }
    }
    let corpus = attach_parses(&conllu, Corpus::new(comments, instances)?)?;

    let mut composition: BTreeMap<String, usize> = BTreeMap::new();
    let (mut s1n, mut s1p, mut s2p, mut s2n) = (0, 0, 0, 0);
    for (i, plan) in plans.iter().enumerate() {
        let id = format!("{prefix}{:03}", i + 1);
        let comp = corpus.composition(&id).expect("every comment is labelled");
        let key = serde_json::to_value(comp)?.as_str().unwrap_or_default().to_string();
        *composition.entry(key).or_default() += 1;
        for (e, ent) in plan.ents.iter().enumerate() {
            let label = plan.labels[e];
            if comp != Composition::Polar {
                if label.is_polar() {
                    s1p += 1;
                } else {
                    s1n += 1;
                }
            }
            if comp != Composition::Neutral {
                match label {
                    SentimentLabel::Positive => s2p += 1,
                    SentimentLabel::Negative => s2n += 1,
                    SentimentLabel::Neutral => {}
                }
            }
            entries.push(ManifestEntry {
                comment_id: id.clone(),
                entity: ent.name.clone(),
                label,
                archetype: plan.archetype.to_string(),
                composition: comp,
                planted_clues: plan.clues[e].clone(),
                gold_sentences: gold_sentences(plan, e),
            });
        }
    }

    let manifest = Manifest {
        seed,
        comments: corpus.comments.len(),
        instances: corpus.instances.len(),
        composition,
        archetypes,
        stage1_instances: s1n + s1p,
        stage1_neutral: s1n,
        stage1_polar: s1p,
        stage2_instances: s2p + s2n,
        stage2_positive: s2p,
        stage2_negative: s2n,
        entries,
    };
    Ok(SyntheticCorpus { corpus, manifest })
}
