//! Helpers shared by the integration test binaries. Each check returns
//! `Err(reason)` instead of panicking so the acceptance runner can report it.
#![allow(dead_code)]

use std::path::{Path, PathBuf};

use entsent::corpus::{self, Comment, Corpus, EntityMention, EntityType};

pub mod examples;
pub mod oracles;
pub mod props;

pub type Check = Result<(), String>;

#[macro_export]
macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if $cond {
        } else {
            return Err(format!($($fmt)+));
        }
    };
}

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn fixture_dir() -> PathBuf {
    crate_dir().join("tests/fixtures/worked_examples")
}

pub fn synthetic_dir() -> PathBuf {
    crate_dir().join("data/synthetic")
}

pub fn person_subject_dir() -> PathBuf {
    crate_dir().join("data/person-subject")
}

pub fn load_dir(dir: &Path) -> entsent::Result<Corpus> {
    let c = corpus::load_corpus(&dir.join("comments.jsonl"), &dir.join("labels.jsonl"))?;
    let parses = dir.join("parses.conllu");
    if parses.exists() {
        corpus::load_parses(&parses, c)
    } else {
        Ok(c)
    }
}

/// Builds a comment, annotating every whole-word occurrence of each name.
pub fn annotate(id: &str, text: &str, ents: &[(&str, EntityType)]) -> entsent::Result<Comment> {
    let mut mentions = Vec::new();
    for (name, t) in ents {
        let mut from = 0;
        while let Some(pos) = text[from..].find(name) {
            let start = from + pos;
            let end = start + name.len();
            let word = |c: Option<char>| c.is_some_and(char::is_alphanumeric);
            if !word(text[..start].chars().next_back()) && !word(text[end..].chars().next()) {
                mentions.push(EntityMention {
                    canonical: name.to_string(),
                    surface: name.to_string(),
                    start,
                    end,
                    entity_type: *t,
                });
            }
            from = end;
        }
    }
    Comment::new(id, text, mentions)
}

/// Runs every check, printing one line each, and returns the failures.
pub fn report(title: &str, checks: &[(&str, Check)]) -> Vec<String> {
    let mut failed = Vec::new();
    for (name, outcome) in checks {
        match outcome {
            Ok(()) => println!("  {title} / {name}: ok"),
            Err(e) => {
                println!("  {title} / {name}: FAILED ({e})");
                failed.push(format!("{name}: {e}"));
            }
        }
    }
    failed
}
