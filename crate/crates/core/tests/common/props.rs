//! Property suites run through proptest's runner so the acceptance binary
//! and the per-property tests share one implementation.

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use entsent::context::{EntityContext, TokenSpan};
use entsent::corpus::Comment;
use entsent::learn;
use entsent::lexicon::{self, NegationList, Polarity, PolarityLexicon};
use entsent::textseg;

use super::Check;

pub const FUZZ_CASES: u32 = 10_000;

fn run<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Check {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

/// Words drawn from every lexicon class plus negators, intensifiers,
/// quotes, `!` and filler.
fn vocabulary() -> Vec<String> {
    let lex = PolarityLexicon::bundled();
    let mut words: Vec<String> = lex.words(Polarity::Positive).take(15).map(String::from).collect();
    words.extend(lex.words(Polarity::Negative).take(15).map(String::from));
    words.extend(lex.words(Polarity::Neutral).take(5).map(String::from));
    for w in [
        "not", "never", "no", "don't", "very", "really", "so", "\"", "\u{201c}", "\u{201d}", "!", "the", "city", "vote", ",", "Obama",
    ] {
        words.push(w.to_string());
    }
    words
}

fn tokens_of(words: &[String]) -> Vec<textseg::Token> {
    let mut tokens = textseg::tokenize(&words.join(" "));
    textseg::detect_quoted_spans(&mut tokens);
    tokens
}

pub fn strength_range(cases: u32) -> Check {
    let lex = PolarityLexicon::bundled();
    let neg = NegationList::bundled();
    let vocab = vocabulary();
    let words = prop::collection::vec(prop::sample::select(vocab), 0..30);
    run(cases, words, |w| {
        let s = lexicon::strength_score(&tokens_of(&w), &lex, &neg);
        prop_assert!((1..=5).contains(&s.pos) && (-5..=-1).contains(&s.neg), "{w:?} -> {s:?}");
        Ok(())
    })
}

/// A positive or negative clue that is both negated and quoted counts at
/// its prior polarity; negated alone or quoted alone, it flips.
pub fn double_flip(cases: u32) -> Check {
    let lex = PolarityLexicon::bundled();
    let neg = NegationList::bundled();
    let polar: Vec<(String, Polarity)> = lex
        .words(Polarity::Positive)
        .map(|w| (w.to_string(), Polarity::Positive))
        .chain(lex.words(Polarity::Negative).map(|w| (w.to_string(), Polarity::Negative)))
        .collect();
    let negators: Vec<String> = ["not", "never", "no", "cannot", "don't", "won't", "without"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let filler = prop::sample::select(vec!["the", "city", "vote", "plan", "we"]);
    let strategy = (
        prop::sample::select(polar),
        prop::sample::select(negators),
        prop::collection::vec(filler.clone(), 0..2),
        prop::collection::vec(filler, 0..4),
        any::<bool>(),
        any::<bool>(),
    );
    run(cases, strategy, |((clue, prior), negator, gap, tail, negate, quote)| {
        // negator, gap (at most one filler word), then the clue, optionally quoted.
        let mut words: Vec<String> = Vec::new();
        if negate {
            words.push(negator.clone());
            words.extend(gap.iter().map(|s| s.to_string()));
        } else {
            words.push("today".into());
        }
        if quote {
            words.push("\"".into());
        }
        words.push(clue.clone());
        if quote {
            words.push("\"".into());
        }
        words.extend(tail.iter().map(|s| s.to_string()));
        let c = lexicon::count_clues_in(&tokens_of(&words), &lex, &neg);
        let effective = if negate != quote {
            if prior == Polarity::Positive {
                Polarity::Negative
            } else {
                Polarity::Positive
            }
        } else {
            prior
        };
        let want = match effective {
            Polarity::Positive => (1, 0),
            _ => (0, 1),
        };
        prop_assert_eq!((c.num_pos, c.num_neg), want, "{:?}", words);
        Ok(())
    })
}

fn sentence_text() -> impl Strategy<Value = String> {
    let vocab: Vec<String> = vocabulary().into_iter().filter(|w| w != "!").collect();
    (
        prop::collection::vec(prop::sample::select(vocab), 1..12),
        prop::sample::select(vec![".", "!", "?"]),
    )
        .prop_map(|(w, end)| format!("{}{end}", w.join(" ")))
}

fn comment_text() -> impl Strategy<Value = String> {
    prop::collection::vec(sentence_text(), 1..4).prop_map(|s| s.join(" "))
}

fn spans_from(tokens: &BTreeMap<usize, BTreeSet<usize>>) -> Vec<TokenSpan> {
    let mut out: Vec<TokenSpan> = Vec::new();
    for (&sentence, idx) in tokens {
        for &t in idx {
            match out.last_mut() {
                Some(last) if last.sentence == sentence && last.to + 1 == t => last.to = t,
                _ => out.push(TokenSpan { sentence, from: t, to: t }),
            }
        }
    }
    out
}

fn context(pieces: Vec<TokenSpan>) -> EntityContext {
    EntityContext {
        comment_id: "p".into(),
        entity: "e".into(),
        pieces,
    }
}

/// Splitting a context into two disjoint halves splits its clue counts.
pub fn clue_additivity(cases: u32) -> Check {
    let lex = PolarityLexicon::bundled();
    let neg = NegationList::bundled();
    let strategy = (comment_text(), prop::collection::vec(any::<bool>(), 64));
    run(cases, strategy, |(text, coin)| {
        let c = Comment::new("p", text.clone(), Vec::new()).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let mut a: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        let mut b: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        let mut all: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        let mut k = 0;
        for s in &c.sentences {
            for t in 1..=s.tokens.len() {
                all.entry(s.index).or_default().insert(t);
                let side = if coin[k % coin.len()] { &mut a } else { &mut b };
                side.entry(s.index).or_default().insert(t);
                k += 1;
            }
        }
        let whole = lexicon::count_clues(&context(spans_from(&all)), &c, &lex, &neg);
        let left = lexicon::count_clues(&context(spans_from(&a)), &c, &lex, &neg);
        let right = lexicon::count_clues(&context(spans_from(&b)), &c, &lex, &neg);
        prop_assert_eq!(whole, left + right, "{:?}", text);
        Ok(())
    })
}

/// Folds are disjoint, cover every row, and each fold holds
/// floor or ceil of `n_c / k` rows of every class.
pub fn fold_partition(cases: u32) -> Check {
    let strategy = (prop::collection::vec(0i64..3, 2..120), 2usize..11, any::<u64>());
    run(cases, strategy, |(labels, k, seed)| {
        let mut support: BTreeMap<i64, usize> = BTreeMap::new();
        for l in &labels {
            *support.entry(*l).or_default() += 1;
        }
        let smallest = *support.values().min().unwrap();
        let k = k.min(smallest);
        if k < 2 || support.len() < 2 {
            return Ok(());
        }
        let folds = learn::stratified_folds(&labels, k, seed).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(folds.len(), k);
        let mut seen = vec![0usize; labels.len()];
        for f in &folds {
            for &i in f {
                seen[i] += 1;
            }
        }
        prop_assert!(seen.iter().all(|c| *c == 1), "not a partition");
        for f in &folds {
            for (class, n) in &support {
                let here = f.iter().filter(|&&i| labels[i] == *class).count();
                prop_assert!(
                    here == n / k || here == n.div_ceil(k),
                    "class {} has {} rows in a fold, support {} over {} folds",
                    class,
                    here,
                    n,
                    k
                );
            }
        }
        Ok(())
    })
}

/// Every non-whitespace byte belongs to exactly one token whose text is
/// the source slice.
pub fn token_spans_lossless(cases: u32) -> Check {
    let chars = prop::sample::select(vec![
        'a', 'b', 'Z', 'é', '日', '1', ' ', ' ', ' ', '\n', '.', '?', '!', ',', '"', '\'', '\u{201c}', '\u{201d}', '-', '(', ')', '$', '%',
    ]);
    let strategy = prop::collection::vec(chars, 1..60).prop_map(|v| v.into_iter().collect::<String>());
    run(cases, strategy, |text| {
        if text.trim().is_empty() {
            prop_assert!(textseg::split_sentences(&text).is_err());
            return Ok(());
        }
        let sentences = textseg::split_sentences(&text).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert!(!sentences.is_empty());
        let mut owner = vec![0u32; text.len()];
        for s in &sentences {
            for t in &s.tokens {
                prop_assert_eq!(&text[t.start..t.end], t.text.as_str());
                prop_assert!(s.start <= t.start && t.end <= s.end);
                for o in &mut owner[t.start..t.end] {
                    *o += 1;
                }
            }
        }
        for (i, ch) in text.char_indices() {
            let want = u32::from(!ch.is_whitespace());
            prop_assert_eq!(owner[i], want, "byte {} ({:?}) in {:?}", i, ch, text);
        }
        Ok(())
    })
}
