//! Feature vectors for the neutral-vs-polar and positive-vs-negative stages.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::context::{self, ContextScheme, EntityContext, Occurrence, PronounSets};
use crate::corpus::{Comment, Entity};
use crate::error::Result;
use crate::lexicon::{self, ClueCounts, NegationList, PolarityLexicon};
use crate::textseg;

pub const NEUTRAL_POLAR_FEATURES: [&str; 5] = ["IsPerson", "IsSubjObj", "HasPolarityClues", "SentiPos", "SentiNeg"];

pub const POLARITY_FEATURES: [&str; 10] = [
    "NumPos",
    "NumNeg",
    "PosVsNeg",
    "IsQuestion",
    "IsExclam",
    "PosStrength",
    "NegStrength",
    "PosVsNegStrength",
    "IsFirstQues",
    "IsEnQues",
];

const SUBJECT_RELS: [&str; 3] = ["nsubj", "nsubjpass", "nsubj:pass"];
const DIRECT_OBJECT_RELS: [&str; 2] = ["dobj", "obj"];
const PREP_OBJECT_RELS: [&str; 2] = ["pobj", "obl"];

/// Lexicons and pronoun lists shared by every featurization call.
#[derive(Debug, Clone)]
pub struct Resources {
    pub lexicon: PolarityLexicon,
    pub negations: NegationList,
    pub pronouns: PronounSets,
}

impl Resources {
    pub fn bundled() -> Self {
        Resources {
            lexicon: PolarityLexicon::bundled(),
            negations: NegationList::bundled(),
            pronouns: PronounSets::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeutralPolarFeatures {
    pub is_person: u8,
    /// 3 subject, 2 direct object, 1 prepositional object, 0 otherwise.
    pub is_subj_obj: u8,
    pub has_polarity_clues: u8,
    pub senti_pos: u8,
    pub senti_neg: i8,
    pub rule_is_verb_fired: bool,
    pub rule_has_amod_fired: bool,
}

impl NeutralPolarFeatures {
    pub fn named(&self) -> Vec<(&'static str, f64)> {
        let values = [
            f64::from(self.is_person),
            f64::from(self.is_subj_obj),
            f64::from(self.has_polarity_clues),
            f64::from(self.senti_pos),
            f64::from(self.senti_neg),
        ];
        NEUTRAL_POLAR_FEATURES.into_iter().zip(values).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarityFeatures {
    pub num_pos: u32,
    pub num_neg: u32,
    pub pos_vs_neg: f64,
    pub is_question: u8,
    pub is_exclam: u8,
    pub pos_strength: i32,
    pub neg_strength: i32,
    pub pos_vs_neg_strength: f64,
    pub is_first_ques: u8,
    pub is_en_ques: u8,
}

impl PolarityFeatures {
    pub fn named(&self) -> Vec<(&'static str, f64)> {
        let values = [
            f64::from(self.num_pos),
            f64::from(self.num_neg),
            self.pos_vs_neg,
            f64::from(self.is_question),
            f64::from(self.is_exclam),
            f64::from(self.pos_strength),
            f64::from(self.neg_strength),
            self.pos_vs_neg_strength,
            f64::from(self.is_first_ques),
            f64::from(self.is_en_ques),
        ];
        POLARITY_FEATURES.into_iter().zip(values).collect()
    }
}

/// Outcome of the two high-precision rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Force {
    ForceNeutral,
    ForcePolar,
    NoForce,
}

impl Force {
    /// Name of the rule that forced the decision, if any.
    pub fn rule_name(self) -> Option<&'static str> {
        match self {
            Force::ForceNeutral => Some("IsVerb"),
            Force::ForcePolar => Some("HasAMod"),
            Force::NoForce => None,
        }
    }
}

/// Highest grammatical-role code over the entity's parsed mentions.
pub fn subj_obj_code(comment: &Comment, occs: &[&Occurrence]) -> u8 {
    occs.iter()
        .filter_map(|o| {
            let tree = comment.sentences.get(o.sentence)?.tree.as_ref()?;
            let rel = tree.node(o.head())?.deprel.as_str();
            Some(if SUBJECT_RELS.contains(&rel) {
                3
            } else if DIRECT_OBJECT_RELS.contains(&rel) {
                2
            } else if PREP_OBJECT_RELS.contains(&rel) {
                1
            } else {
                0
            })
        })
        .max()
        .unwrap_or(0)
}

/// IsVerb fires when every mention is parsed and tagged as a verb.
pub fn is_verb_rule(comment: &Comment, occs: &[&Occurrence]) -> bool {
    !occs.is_empty()
        && occs.iter().all(|o| {
            comment
                .sentences
                .get(o.sentence)
                .and_then(|s| s.tree.as_ref())
                .and_then(|t| t.node(o.head()))
                .is_some_and(|n| n.is_verb())
        })
}

/// HasAMod fires when a mention head governs an `amod` adjective.
pub fn has_amod_rule(comment: &Comment, occs: &[&Occurrence]) -> bool {
    occs.iter().any(|o| {
        comment
            .sentences
            .get(o.sentence)
            .and_then(|s| s.tree.as_ref())
            .is_some_and(|t| t.children(o.head()).any(|c| c.deprel == "amod" && c.is_adjective()))
    })
}

pub fn apply_precision_rules(comment: &Comment, occs: &[&Occurrence]) -> Force {
    if has_amod_rule(comment, occs) {
        Force::ForcePolar
    } else if is_verb_rule(comment, occs) {
        Force::ForceNeutral
    } else {
        Force::NoForce
    }
}

pub fn neutral_polar_features(
    ctx: &EntityContext,
    comment: &Comment,
    entity: &Entity,
    occs: &[&Occurrence],
    res: &Resources,
) -> NeutralPolarFeatures {
    let counts = lexicon::count_clues(ctx, comment, &res.lexicon, &res.negations);
    let strength = lexicon::context_strength(ctx, comment, &res.lexicon, &res.negations);
    NeutralPolarFeatures {
        is_person: u8::from(entity.entity_type.is_person()),
        is_subj_obj: subj_obj_code(comment, occs),
        has_polarity_clues: u8::from(counts.total() >= 1),
        senti_pos: u8::from(strength.pos != 1),
        senti_neg: if strength.neg == -1 { 0 } else { -1 },
        rule_is_verb_fired: is_verb_rule(comment, occs),
        rule_has_amod_fired: has_amod_rule(comment, occs),
    }
}

/// `counts` must already carry the but/comparative adjustments.
pub fn polarity_features(
    ctx: &EntityContext,
    comment: &Comment,
    occs: &[&Occurrence],
    counts: ClueCounts,
    res: &Resources,
) -> PolarityFeatures {
    let strength = lexicon::context_strength(ctx, comment, &res.lexicon, &res.negations);
    let has_token = |mark: &str| {
        ctx.token_positions()
            .any(|(s, t)| comment.sentences.get(s).and_then(|s| s.token(t)).is_some_and(|t| t.text == mark))
    };
    let first_question = ctx
        .pieces
        .first()
        .and_then(|p| comment.sentences.get(p.sentence))
        .is_some_and(textseg::is_question_sentence);
    let mention_in_question = occs
        .iter()
        .any(|o| comment.sentences.get(o.sentence).is_some_and(textseg::is_question_sentence));

    PolarityFeatures {
        num_pos: counts.num_pos,
        num_neg: counts.num_neg,
        pos_vs_neg: f64::from(counts.num_pos + 1) / f64::from(counts.num_neg + 1),
        is_question: u8::from(has_token("?")),
        is_exclam: u8::from(has_token("!")),
        pos_strength: strength.pos,
        neg_strength: strength.neg,
        pos_vs_neg_strength: f64::from(strength.pos) / f64::from(strength.neg),
        is_first_ques: u8::from(first_question),
        is_en_ques: u8::from(mention_in_question),
    }
}

/// Everything computed for one entity of a comment.
#[derive(Debug, Clone, PartialEq)]
pub struct EntityFeatures {
    pub entity: Entity,
    pub context: EntityContext,
    /// Clue counts before the but/comparative adjustments.
    pub raw_counts: ClueCounts,
    pub counts: ClueCounts,
    pub neutral_polar: NeutralPolarFeatures,
    pub polarity: PolarityFeatures,
    pub force: Force,
}

/// Featurizes every annotated entity of a comment. Rules 3 and 4 need all
/// entities at once, so this works per comment rather than per entity.
pub fn featurize_comment(comment: &Comment, scheme: ContextScheme, res: &Resources) -> Result<Vec<EntityFeatures>> {
    let entities = comment.entities();
    let names: Vec<&str> = entities.iter().map(|e| e.canonical.as_str()).collect();
    let contexts = context::contexts_for(comment, &names, scheme, &res.pronouns)?;
    let occs = context::occurrences(comment, &entities);

    let raw: BTreeMap<String, ClueCounts> = contexts
        .iter()
        .map(|c| (c.entity.clone(), lexicon::count_clues(c, comment, &res.lexicon, &res.negations)))
        .collect();
    let mut adjusted = raw.clone();
    for split in context::pair_splits(comment, &entities) {
        lexicon::apply_but_rule(&mut adjusted, &split);
        lexicon::apply_comparative_rule(&mut adjusted, &split);
    }

    Ok(entities
        .into_iter()
        .zip(contexts)
        .map(|(entity, ctx)| {
            let mine: Vec<&Occurrence> = occs.iter().filter(|o| o.entity == entity.canonical).collect();
            let neutral_polar = neutral_polar_features(&ctx, comment, &entity, &mine, res);
            let counts = adjusted[&entity.canonical];
            let polarity = polarity_features(&ctx, comment, &mine, counts, res);
            let force = apply_precision_rules(comment, &mine);
            EntityFeatures {
                raw_counts: raw[&entity.canonical],
                counts,
                neutral_polar,
                polarity,
                force,
                context: ctx,
                entity,
            }
        })
        .collect())
}
