//! Sentence splitting, tokenization and quote/question detection.
//!
//! All offsets are byte offsets into the original comment text, so every
//! token can be mapped back to its exact source span.

use serde::{Deserialize, Serialize};

use crate::corpus::DependencyTree;
use crate::error::{Error, Result};

/// Sentence-initial words that mark a question even without a `?`.
pub const QUESTION_WORDS: [&str; 6] = ["who", "what", "when", "where", "why", "how"];

const TERMINATORS: [char; 3] = ['.', '?', '!'];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    /// 1-based position within the sentence.
    pub index: usize,
    pub text: String,
    /// Case-folded form with curly apostrophes straightened.
    pub lower: String,
    pub start: usize,
    pub end: usize,
    pub in_quote: bool,
}

impl Token {
    pub fn is_punct(&self) -> bool {
        self.text.chars().all(|c| !c.is_alphanumeric())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sentence {
    pub index: usize,
    pub start: usize,
    pub end: usize,
    pub tokens: Vec<Token>,
    /// The terminator run contains `?`.
    pub is_question: bool,
    /// The terminator run contains `!`.
    pub ends_exclam: bool,
    /// Attached by the parse loader; `None` means parse-absent.
    pub tree: Option<DependencyTree>,
}

impl Sentence {
    /// Token at a 1-based index.
    pub fn token(&self, index: usize) -> Option<&Token> {
        index.checked_sub(1).and_then(|i| self.tokens.get(i))
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// POS tag of a 1-based token, when a parse is attached.
    pub fn pos_tag(&self, index: usize) -> Option<&str> {
        self.tree.as_ref().and_then(|t| t.node(index)).map(|n| n.pos_tag())
    }
}

fn is_closing_quote(c: char) -> bool {
    matches!(c, '"' | '\'' | ')' | ']' | '\u{201d}' | '\u{2019}')
}

/// Splits `text` on `.`, `?` and `!`. A run of terminators stays with the
/// sentence it closes, as do closing quotes or brackets glued to the run.
pub fn split_sentences(text: &str) -> Result<Vec<Sentence>> {
    if text.trim().is_empty() {
        return Err(Error::EmptyText);
    }

    let mut spans: Vec<(usize, usize, bool, bool)> = Vec::new();
    let mut chars = text.char_indices().peekable();
    let mut start: Option<usize> = None;

    while let Some((i, c)) = chars.next() {
        if start.is_none() {
            if c.is_whitespace() {
                continue;
            }
            start = Some(i);
        }
        if TERMINATORS.contains(&c) {
            let mut end = i + c.len_utf8();
            let mut question = c == '?';
            let mut exclam = c == '!';
            while let Some(&(j, d)) = chars.peek() {
                if TERMINATORS.contains(&d) {
                    question |= d == '?';
                    exclam |= d == '!';
                    end = j + d.len_utf8();
                    chars.next();
                } else {
                    break;
                }
            }
            while let Some(&(j, d)) = chars.peek() {
                if is_closing_quote(d) {
                    end = j + d.len_utf8();
                    chars.next();
                } else {
                    break;
                }
            }
            spans.push((start.take().unwrap_or(i), end, question, exclam));
        }
    }
    if let Some(s) = start {
        let end = s + text[s..].trim_end().len();
        spans.push((s, end, false, false));
    }

    Ok(spans
        .into_iter()
        .enumerate()
        .map(|(index, (start, end, is_question, ends_exclam))| {
            let mut tokens = tokenize_at(&text[start..end], start);
            detect_quoted_spans(&mut tokens);
            Sentence {
                index,
                start,
                end,
                tokens,
                is_question,
                ends_exclam,
                tree: None,
            }
        })
        .collect())
}

/// Whitespace split, then leading and trailing punctuation is peeled off
/// one character at a time. Internal apostrophes and hyphens stay attached.
pub fn tokenize(text: &str) -> Vec<Token> {
    tokenize_at(text, 0)
}

fn tokenize_at(text: &str, base: usize) -> Vec<Token> {
    let mut spans = Vec::new();
    let mut word_start = None;
    for (i, c) in text.char_indices() {
        match (c.is_whitespace(), word_start) {
            (true, Some(s)) => {
                peel(text, s, i, &mut spans);
                word_start = None;
            }
            (false, None) => word_start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = word_start {
        peel(text, s, text.len(), &mut spans);
    }

    spans
        .into_iter()
        .enumerate()
        .map(|(i, (s, e))| {
            let raw = &text[s..e];
            Token {
                index: i + 1,
                text: raw.to_string(),
                lower: fold(raw),
                start: base + s,
                end: base + e,
                in_quote: false,
            }
        })
        .collect()
}

fn peel(text: &str, mut start: usize, mut end: usize, out: &mut Vec<(usize, usize)>) {
    let mut trailing = Vec::new();
    while start < end {
        let c = text[start..end].chars().next().unwrap();
        if c.is_alphanumeric() {
            break;
        }
        out.push((start, start + c.len_utf8()));
        start += c.len_utf8();
    }
    while start < end {
        let c = text[start..end].chars().next_back().unwrap();
        if c.is_alphanumeric() {
            break;
        }
        trailing.push((end - c.len_utf8(), end));
        end -= c.len_utf8();
    }
    if start < end {
        out.push((start, end));
    }
    out.extend(trailing.into_iter().rev());
}

/// Lowercase and straighten typographic apostrophes.
pub fn fold(s: &str) -> String {
    s.to_lowercase().replace(['\u{2019}', '\u{2018}'], "'")
}

fn is_double_quote(text: &str) -> bool {
    matches!(text, "\"" | "\u{201c}" | "\u{201d}" | "\u{201e}")
}

/// Marks tokens strictly between consecutive pairs of double-quote tokens.
/// A trailing unmatched quote marks nothing.
pub fn detect_quoted_spans(tokens: &mut [Token]) {
    let quotes: Vec<usize> = tokens
        .iter()
        .enumerate()
        .filter(|(_, t)| is_double_quote(&t.text))
        .map(|(i, _)| i)
        .collect();
    for t in tokens.iter_mut() {
        t.in_quote = false;
    }
    for pair in quotes.chunks_exact(2) {
        for t in &mut tokens[pair[0] + 1..pair[1]] {
            t.in_quote = true;
        }
    }
}

/// A question sentence ends in `?` or opens with one of the 5W1H words.
pub fn is_question_sentence(s: &Sentence) -> bool {
    s.is_question
        || s.tokens
            .iter()
            .find(|t| !t.is_punct())
            .is_some_and(|t| QUESTION_WORDS.contains(&t.lower.as_str()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn texts(tokens: &[Token]) -> Vec<&str> {
        tokens.iter().map(|t| t.text.as_str()).collect()
    }

    fn sentence_texts<'a>(text: &'a str, s: &[Sentence]) -> Vec<&'a str> {
        s.iter().map(|s| &text[s.start..s.end]).collect()
    }

    #[test]
    fn splits_rhetorical_openers() {
        let text = "PLANS? What Plans? Obama has no plans for his second term.";
        let s = split_sentences(text).unwrap();
        assert_eq!(
            sentence_texts(text, &s),
            vec!["PLANS?", "What Plans?", "Obama has no plans for his second term."]
        );
        assert!(s[0].is_question && s[1].is_question && !s[2].is_question);
    }

    #[test]
    fn unterminated_text_is_one_sentence() {
        let s = split_sentences("Hello").unwrap();
        assert_eq!(s.len(), 1);
        assert!(!s[0].is_question);
        assert_eq!(texts(&s[0].tokens), vec!["Hello"]);
    }

    #[test]
    fn guess_what_opener() {
        let text = "Guess what? Foxnews poll: Obama +9...";
        let s = split_sentences(text).unwrap();
        assert_eq!(sentence_texts(text, &s), vec!["Guess what?", "Foxnews poll: Obama +9..."]);
        assert!(s[0].is_question);
        assert!(!s[1].is_question);
    }

    #[test]
    fn terminator_runs_stay_together() {
        let text = "Really?! No way... ok";
        let s = split_sentences(text).unwrap();
        assert_eq!(sentence_texts(text, &s), vec!["Really?!", "No way...", "ok"]);
        assert!(s[0].is_question && s[0].ends_exclam);
        assert_eq!(texts(&s[0].tokens), vec!["Really", "?", "!"]);
    }

    #[test]
    fn closing_quote_joins_sentence() {
        let text = "\"Let me get this straight. How much?\" he said.";
        let s = split_sentences(text).unwrap();
        assert_eq!(
            sentence_texts(text, &s),
            vec!["\"Let me get this straight.", "How much?\"", "he said."]
        );
    }

    #[test]
    fn whitespace_only_is_rejected() {
        assert!(matches!(split_sentences(" \n\t "), Err(Error::EmptyText)));
        assert!(matches!(split_sentences(""), Err(Error::EmptyText)));
    }

    #[test]
    fn tokenizer_examples() {
        assert_eq!(texts(&tokenize("sane people")), vec!["sane", "people"]);
        assert_eq!(
            texts(&tokenize("\"sane people\" demographic.")),
            vec!["\"", "sane", "people", "\"", "demographic", "."]
        );
        assert_eq!(texts(&tokenize("Gobama!")), vec!["Gobama", "!"]);
        assert_eq!(texts(&tokenize("didn't well-known")), vec!["didn't", "well-known"]);
        assert_eq!(texts(&tokenize("galaxys' $100")), vec!["galaxys", "'", "$", "100"]);
        assert!(tokenize("   ").is_empty());
    }

    #[test]
    fn token_offsets_and_lower() {
        let toks = tokenize("  Obama’S plan");
        assert_eq!(toks[0].start, 2);
        assert_eq!(toks[0].lower, "obama's");
        assert_eq!(toks[1].index, 2);
    }

    #[test]
    fn quoted_phrase() {
        let mut toks = tokenize("the \"sane people\" demographic");
        detect_quoted_spans(&mut toks);
        let quoted: Vec<_> = toks.iter().filter(|t| t.in_quote).map(|t| t.text.as_str()).collect();
        assert_eq!(quoted, vec!["sane", "people"]);

        let mut curly = tokenize("a \u{201c}fine\u{201d} mess");
        detect_quoted_spans(&mut curly);
        assert!(curly[2].in_quote);
        assert!(!curly[4].in_quote);
    }

    #[test]
    fn no_or_unmatched_quotes() {
        let mut toks = tokenize("plain words here");
        detect_quoted_spans(&mut toks);
        assert!(toks.iter().all(|t| !t.in_quote));

        let mut toks = tokenize("one \"unmatched quote here");
        detect_quoted_spans(&mut toks);
        assert!(toks.iter().all(|t| !t.in_quote));
    }

    #[test]
    fn question_sentences() {
        let q = |t: &str| is_question_sentence(&split_sentences(t).unwrap()[0]);
        assert!(q("Who on earth would even buy Facebook stock?"));
        assert!(!q("Obama won."));
        assert!(q("Why didn't CBS use the same guy..."));
        assert!(!q("Whom did they ask."));
    }
}
