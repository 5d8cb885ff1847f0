use std::collections::HashMap;
use std::path::Path;

use serde::Deserialize;

use super::{tokens, TextError};

pub const MAX_PHRASE_WORDS: usize = 4;

const DEFAULT_DICTIONARY: &str = include_str!("../../data/symptoms.toml");

#[derive(Debug, Clone, PartialEq)]
pub struct SymptomEntry {
    pub name: String,
    /// Normalized phrases, each already split into tokens.
    phrases: Vec<Vec<String>>,
}

impl SymptomEntry {
    pub fn phrases(&self) -> Vec<String> {
        self.phrases.iter().map(|p| p.join(" ")).collect()
    }

    pub(crate) fn phrase_tokens(&self) -> impl Iterator<Item = &[String]> {
        self.phrases.iter().map(Vec::as_slice)
    }
}

/// Symptom columns in a fixed order, each with its match phrases. No phrase
/// belongs to two symptoms.
#[derive(Debug, Clone, PartialEq)]
pub struct SymptomDictionary {
    entries: Vec<SymptomEntry>,
    owner: HashMap<String, usize>,
}

#[derive(Deserialize)]
struct DictionaryFile {
    symptom: Vec<RawEntry>,
}

#[derive(Deserialize)]
struct RawEntry {
    name: String,
    phrases: Vec<String>,
}

impl SymptomDictionary {
    pub fn new<N, P>(entries: impl IntoIterator<Item = (N, Vec<P>)>) -> Result<Self, TextError>
    where
        N: Into<String>,
        P: AsRef<str>,
    {
        let mut dict = Self {
            entries: Vec::new(),
            owner: HashMap::new(),
        };
        for (name, phrases) in entries {
            let name = name.into();
            if dict.entries.iter().any(|e| e.name == name) {
                return Err(TextError::DuplicateSymptom(name));
            }
            dict.entries.push(SymptomEntry {
                name: name.clone(),
                phrases: Vec::new(),
            });
            for p in phrases {
                dict.add_phrase(&name, p.as_ref())?;
            }
        }
        Ok(dict)
    }

    /// The dictionary shipped with the crate.
    pub fn builtin() -> Self {
        Self::from_toml(DEFAULT_DICTIONARY).expect("bundled dictionary is valid")
    }

    pub fn from_toml(text: &str) -> Result<Self, TextError> {
        let file: DictionaryFile =
            toml::from_str(text).map_err(|e| TextError::DictionaryFormat(e.to_string()))?;
        Self::new(file.symptom.into_iter().map(|e| (e.name, e.phrases)))
    }

    pub fn load(path: &Path) -> Result<Self, TextError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| TextError::DictionaryFormat(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Adds a phrase to an existing symptom. Adding the same phrase to the
    /// same symptom again is a no-op.
    pub fn add_phrase(&mut self, symptom: &str, phrase: &str) -> Result<(), TextError> {
        let idx = self
            .entries
            .iter()
            .position(|e| e.name == symptom)
            .ok_or_else(|| TextError::UnknownSymptom(symptom.to_owned()))?;
        let toks = tokens(phrase);
        if toks.is_empty() {
            return Err(TextError::EmptyPhrase(symptom.to_owned()));
        }
        if toks.len() > MAX_PHRASE_WORDS {
            return Err(TextError::PhraseTooLong {
                phrase: phrase.to_owned(),
            });
        }
        let key = toks.join(" ");
        match self.owner.get(&key) {
            Some(&o) if o == idx => return Ok(()),
            Some(&o) => {
                return Err(TextError::DuplicatePhrase {
                    phrase: key,
                    first: self.entries[o].name.clone(),
                    second: symptom.to_owned(),
                })
            }
            None => {}
        }
        self.owner.insert(key, idx);
        self.entries[idx].phrases.push(toks);
        Ok(())
    }

    pub fn entries(&self) -> &[SymptomEntry] {
        &self.entries
    }

    pub fn names(&self) -> Vec<String> {
        self.entries.iter().map(|e| e.name.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Which symptom owns a (normalized) phrase.
    pub fn symptom_of(&self, phrase: &str) -> Option<&str> {
        self.owner
            .get(phrase)
            .map(|&i| self.entries[i].name.as_str())
    }
}
