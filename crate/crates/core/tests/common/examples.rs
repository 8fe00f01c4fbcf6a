//! Hand-traced expectations for the comments in `fixtures/worked_examples`.

use std::collections::BTreeSet;

use entsent::baselines;
use entsent::context::{self, ContextScheme, EntityContext, PronounSets, TokenSpan};
use entsent::corpus::{Comment, Corpus, SentimentLabel};
use entsent::features::{self, EntityFeatures, Force, Resources};
use entsent::lexicon::ClueCounts;
use entsent::pipeline::{self, PipelineConfig};

use super::Check;
use crate::ensure;

pub type Example = fn(&Corpus) -> Check;

pub const ALL: [(&str, Example); 12] = [
    ("but-split between Hillary Clinton and Obama", hillary_obama),
    ("Obama and Romney joined by and", both_surrounded),
    ("six comma-joined networks", six_networks),
    ("subject, direct and prepositional objects", medicare),
    ("Google used as a verb", google_verb),
    ("quoted clue flips", sane_people),
    ("but rule gives Bush a positive clue", bush_democrats),
    ("comparative rule gives apple a negative clue", samsung_apple),
    ("CBS inside a question", cbs_interview),
    ("comment opening with questions", plans),
    ("conservative FOX", conservative_fox),
    ("stupid democrats", stupid_democrats),
];

fn comment<'a>(corpus: &'a Corpus, id: &str) -> Result<&'a Comment, String> {
    corpus.comment(id).ok_or_else(|| format!("fixture comment {id} missing"))
}

fn featurize(c: &Comment, scheme: ContextScheme) -> Result<Vec<EntityFeatures>, String> {
    features::featurize_comment(c, scheme, &Resources::bundled()).map_err(|e| e.to_string())
}

fn of<'a>(fs: &'a [EntityFeatures], entity: &str) -> Result<&'a EntityFeatures, String> {
    fs.iter()
        .find(|f| f.entity.canonical == entity)
        .ok_or_else(|| format!("no features for {entity}"))
}

fn span(sentence: usize, from: usize, to: usize) -> TokenSpan {
    TokenSpan { sentence, from, to }
}

fn whole(c: &Comment) -> Vec<TokenSpan> {
    c.sentences.iter().map(|s| span(s.index, 1, s.tokens.len())).collect()
}

fn contexts(c: &Comment, scheme: ContextScheme) -> Result<Vec<EntityContext>, String> {
    let names: Vec<String> = c.entities().into_iter().map(|e| e.canonical).collect();
    context::contexts_for(c, &names, scheme, &PronounSets::default()).map_err(|e| e.to_string())
}

fn counts(pos: u32, neg: u32) -> ClueCounts {
    ClueCounts {
        num_pos: pos,
        num_neg: neg,
    }
}

fn hillary_obama(corpus: &Corpus) -> Check {
    let c = comment(corpus, "hillary-obama")?;
    let ctx = contexts(c, ContextScheme::Proposed)?;
    // Sentence 0 names nobody and has no he/she pronoun, so both get it;
    // sentence 1 splits at "but" (token 10).
    ensure!(
        ctx[0].pieces == vec![span(0, 1, 6), span(1, 1, 9)],
        "Hillary Clinton context {:?}",
        ctx[0].pieces
    );
    ensure!(
        ctx[1].pieces == vec![span(0, 1, 6), span(1, 11, 25)],
        "Obama context {:?}",
        ctx[1].pieces
    );

    let naive = contexts(c, ContextScheme::Naive)?;
    ensure!(
        naive[0].pieces == whole(c) && naive[1].pieces == whole(c),
        "naive contexts should be the whole comment"
    );
    let nf = featurize(c, ContextScheme::Naive)?;
    let (h, o) = (of(&nf, "Hillary Clinton")?, of(&nf, "Obama")?);
    ensure!(
        h.neutral_polar == o.neutral_polar && h.polarity == o.polarity,
        "naive features differ"
    );
    let pf = featurize(c, ContextScheme::Proposed)?;
    let (h, o) = (of(&pf, "Hillary Clinton")?, of(&pf, "Obama")?);
    ensure!(h.polarity != o.polarity, "proposed features should differ");
    ensure!(
        h.polarity.is_question == 0 && o.polarity.is_question == 1,
        "only Obama's clause carries the ?"
    );
    Ok(())
}

fn both_surrounded(corpus: &Corpus) -> Check {
    let c = comment(corpus, "both-surrounded")?;
    let ctx = contexts(c, ContextScheme::Proposed)?;
    for x in &ctx {
        ensure!(x.pieces == whole(c), "{} should get the whole comment", x.entity);
    }
    let vocab: BTreeSet<String> = baselines::bow_featurize(&ctx[0], c, false).into_keys().collect();
    let distinct: BTreeSet<String> = c.sentences.iter().flat_map(|s| s.tokens.iter().map(|t| t.lower.clone())).collect();
    ensure!(vocab == distinct, "BoW vocabulary {vocab:?}");
    ensure!(
        vocab.contains("criminals") && vocab.len() == 13,
        "expected 13 distinct terms, got {}",
        vocab.len()
    );
    Ok(())
}

fn six_networks(corpus: &Corpus) -> Check {
    let c = comment(corpus, "six-networks")?;
    let ctx = contexts(c, ContextScheme::Proposed)?;
    ensure!(ctx.len() == 6, "expected six entities, got {}", ctx.len());
    for x in &ctx {
        ensure!(x.pieces == whole(c), "{} should get the whole comment", x.entity);
    }
    for f in featurize(c, ContextScheme::Proposed)? {
        ensure!(
            f.counts == counts(0, 1),
            "{}: flunk should be the one negative clue",
            f.entity.canonical
        );
    }
    Ok(())
}

fn medicare(corpus: &Corpus) -> Check {
    let fs = featurize(comment(corpus, "medicare")?, ContextScheme::Proposed)?;
    for (e, code) in [("Obama", 3), ("bummercare", 2), ("medicare", 1)] {
        let got = of(&fs, e)?.neutral_polar.is_subj_obj;
        ensure!(got == code, "{e}: IsSubjObj {got}, expected {code}");
    }
    Ok(())
}

fn trained() -> Result<pipeline::PipelineModels, String> {
    let synthetic = super::load_dir(&super::synthetic_dir()).map_err(|e| e.to_string())?;
    pipeline::train_pipeline(&synthetic, &PipelineConfig::default()).map_err(|e| e.to_string())
}

fn google_verb(corpus: &Corpus) -> Check {
    let c = comment(corpus, "google-verb")?;
    let fs = featurize(c, ContextScheme::Proposed)?;
    let g = of(&fs, "Google")?;
    ensure!(
        g.force == Force::ForceNeutral && g.neutral_polar.rule_is_verb_fired,
        "Google force {:?}",
        g.force
    );
    ensure!(of(&fs, "Marci Alt")?.force == Force::NoForce, "Marci Alt should not be forced");

    let models = trained()?;
    let p = pipeline::predict_entity(c, "Google", &models, &Resources::bundled()).map_err(|e| e.to_string())?;
    ensure!(p.label == SentimentLabel::Neutral, "Google predicted {:?}", p.label);
    ensure!(p.forced_by.as_deref() == Some("IsVerb"), "forced_by {:?}", p.forced_by);
    ensure!(
        p.stage1_prob.is_none() && p.stage2_prob.is_none(),
        "a forced neutral skips both classifiers"
    );
    Ok(())
}

fn sane_people(corpus: &Corpus) -> Check {
    let c = comment(corpus, "sane-people")?;
    let s = &c.sentences[0];
    let quoted: Vec<&str> = s.tokens.iter().filter(|t| t.in_quote).map(|t| t.text.as_str()).collect();
    ensure!(quoted == ["sane", "people"], "quoted tokens {quoted:?}");
    let f = &featurize(c, ContextScheme::Proposed)?[0];
    ensure!(f.counts == counts(0, 1), "counts {:?}", f.counts);
    Ok(())
}

fn bush_democrats(corpus: &Corpus) -> Check {
    let c = comment(corpus, "bush-democrats")?;
    let ctx = contexts(c, ContextScheme::Proposed)?;
    ensure!(ctx[0].pieces == vec![span(0, 1, 12)], "Bush context {:?}", ctx[0].pieces);
    ensure!(
        ctx[1].pieces == vec![span(0, 14, 17), span(1, 1, 7), span(2, 1, 15)],
        "democrats context {:?}",
        ctx[1].pieces
    );
    let fs = featurize(c, ContextScheme::Proposed)?;
    let bush = of(&fs, "Bush")?;
    ensure!(bush.raw_counts == counts(0, 0), "Bush raw counts {:?}", bush.raw_counts);
    ensure!(
        bush.polarity.num_pos == 1 && bush.polarity.num_neg == 0,
        "Bush NumPos {}",
        bush.polarity.num_pos
    );
    let dem = of(&fs, "democrats")?;
    ensure!(dem.counts == counts(0, 6), "democrats counts {:?}", dem.counts);
    Ok(())
}

fn samsung_apple(corpus: &Corpus) -> Check {
    let c = comment(corpus, "samsung-apple")?;
    let ctx = contexts(c, ContextScheme::Proposed)?;
    ensure!(
        ctx[0].token_texts(c) == ["The", "samsung", "galaxys", "'", "are", "way", "better"],
        "samsung context {:?}",
        ctx[0].token_texts(c)
    );
    ensure!(ctx[1].pieces == vec![span(0, 8, 15)], "apple context {:?}", ctx[1].token_texts(c));
    let fs = featurize(c, ContextScheme::Proposed)?;
    ensure!(of(&fs, "samsung")?.counts == counts(1, 0), "samsung counts");
    let apple = of(&fs, "apple")?;
    ensure!(
        apple.raw_counts == counts(0, 0) && apple.counts == counts(0, 1),
        "apple counts {:?}",
        apple.counts
    );
    ensure!(apple.polarity.num_neg == 1, "apple NumNeg {}", apple.polarity.num_neg);
    Ok(())
}

fn cbs_interview(corpus: &Corpus) -> Check {
    let c = comment(corpus, "cbs-interview")?;
    ensure!(
        c.sentences.len() == 3 && c.sentences[0].is_question,
        "first sentence should be a question"
    );
    let fs = featurize(c, ContextScheme::Proposed)?;
    let cbs = of(&fs, "CBS")?;
    ensure!(cbs.polarity.is_en_ques == 1, "CBS IsEnQues {}", cbs.polarity.is_en_ques);
    // The why-opening alone marks the question, even without the mark.
    let cut = annotate_cut()?;
    ensure!(
        entsent::textseg::is_question_sentence(&cut.sentences[0]),
        "5W1H opening not detected"
    );
    let f = &featurize(&cut, ContextScheme::Proposed)?[0];
    ensure!(f.polarity.is_en_ques == 1, "truncated CBS IsEnQues {}", f.polarity.is_en_ques);
    Ok(())
}

fn annotate_cut() -> Result<Comment, String> {
    super::annotate(
        "cbs-cut",
        "Why didn't CBS use the same guy",
        &[("CBS", entsent::corpus::EntityType::Organization)],
    )
    .map_err(|e| e.to_string())
}

fn plans(corpus: &Corpus) -> Check {
    let c = comment(corpus, "plans")?;
    let q: Vec<bool> = c.sentences.iter().map(|s| s.is_question).collect();
    ensure!(q == [true, true, false], "question flags {q:?}");
    let f = &featurize(c, ContextScheme::Proposed)?[0];
    ensure!(f.polarity.is_first_ques == 1, "IsFirstQues {}", f.polarity.is_first_ques);
    Ok(())
}

fn conservative_fox(corpus: &Corpus) -> Check {
    let c = comment(corpus, "conservative-fox")?;
    let fs = featurize(c, ContextScheme::Proposed)?;
    let fox = of(&fs, "FOX")?;
    ensure!(
        fox.force == Force::ForcePolar && fox.neutral_polar.rule_has_amod_fired,
        "FOX force {:?}",
        fox.force
    );
    // No lexicon clue anywhere: the rule alone makes it polar.
    ensure!(fox.neutral_polar.has_polarity_clues == 0, "unexpected clue");

    let models = trained()?;
    let p = pipeline::predict_entity(c, "FOX", &models, &Resources::bundled()).map_err(|e| e.to_string())?;
    ensure!(p.label.is_polar(), "FOX predicted {:?}", p.label);
    ensure!(p.forced_by.as_deref() == Some("HasAMod"), "forced_by {:?}", p.forced_by);
    ensure!(
        p.stage1_prob.is_none() && p.stage2_prob.is_some(),
        "stage 1 bypassed, stage 2 decides the sign"
    );
    Ok(())
}

fn stupid_democrats(corpus: &Corpus) -> Check {
    let fs = featurize(comment(corpus, "stupid-democrats")?, ContextScheme::Proposed)?;
    let d = of(&fs, "democrats")?;
    ensure!(d.force == Force::ForcePolar, "democrats force {:?}", d.force);
    ensure!(d.counts == counts(0, 1), "counts {:?}", d.counts);
    Ok(())
}

/// Runs every worked example against the fixture corpus.
pub fn run_all() -> Vec<(&'static str, Check)> {
    let corpus = match super::load_dir(&super::fixture_dir()) {
        Ok(c) => c,
        Err(e) => return vec![("load fixture", Err(e.to_string()))],
    };
    ALL.iter().map(|(name, f)| (*name, f(&corpus))).collect()
}
