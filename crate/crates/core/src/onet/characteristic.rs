use std::fs;
use std::path::Path;

use super::clean_text;
use crate::error::{Error, Result};

/// A target characteristic defined by one or more reference texts.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacteristicDefinition {
    pub name: String,
    pub definitions: Vec<String>,
    /// Citation label for each definition, same order.
    pub source_labels: Vec<String>,
}

impl CharacteristicDefinition {
    pub fn new(name: &str, definitions: Vec<(String, String)>) -> Result<Self> {
        if definitions.is_empty() {
            return Err(Error::InvalidInput(format!(
                "characteristic `{name}` has no definitions"
            )));
        }
        let mut texts = Vec::with_capacity(definitions.len());
        let mut labels = Vec::with_capacity(definitions.len());
        for (i, (label, text)) in definitions.into_iter().enumerate() {
            let text = clean_text(&text);
            if text.is_empty() {
                return Err(Error::InvalidInput(format!(
                    "characteristic `{name}`: definition {} is blank",
                    i + 1
                )));
            }
            texts.push(text);
            labels.push(label);
        }
        Ok(CharacteristicDefinition {
            name: name.to_string(),
            definitions: texts,
            source_labels: labels,
        })
    }
}

/// Parses the line-oriented definition format:
///
/// ```text
/// name = charisma
///
/// [definition]
/// source = APA Dictionary of Psychology
///     The special quality of personality that enables an individual
///     to attract and gain the confidence of large numbers of people.
/// ```
///
/// Body lines must be indented; they are joined with single spaces.  Lines
/// starting with `#` are comments.
pub fn parse_characteristic(contents: &str, file: &str) -> Result<CharacteristicDefinition> {
    let mut name: Option<String> = None;
    let mut blocks: Vec<(Option<String>, Vec<String>, usize)> = Vec::new();
    for (i, line) in contents.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let indented = line.starts_with(' ') || line.starts_with('\t');
        let trimmed = line.trim();
        if indented {
            match blocks.last_mut() {
                Some((_, body, _)) => body.push(trimmed.to_string()),
                None => {
                    return Err(Error::malformed(file, line_no, "text outside a [definition] block"))
                }
            }
        } else if trimmed == "[definition]" {
            blocks.push((None, Vec::new(), line_no));
        } else if let Some((key, value)) = trimmed.split_once('=') {
            let (key, value) = (key.trim(), value.trim().to_string());
            match (key, blocks.last_mut()) {
                ("name", None) => {
                    if value.is_empty() {
                        return Err(Error::malformed(file, line_no, "empty name"));
                    }
                    name = Some(value);
                }
                ("source", Some((source, body, _))) if source.is_none() && body.is_empty() => {
                    *source = Some(value)
                }
                _ => {
                    return Err(Error::malformed(file, line_no, format!("unexpected key `{key}`")))
                }
            }
        } else {
            return Err(Error::malformed(file, line_no, format!("unrecognized line `{trimmed}`")));
        }
    }
    let name = name.ok_or_else(|| Error::malformed(file, 1, "missing `name = ...` line"))?;
    if blocks.is_empty() {
        return Err(Error::InvalidInput(format!("{file}: `{name}` has no [definition] blocks")));
    }
    let mut definitions = Vec::new();
    for (source, body, line_no) in blocks {
        if body.is_empty() {
            return Err(Error::malformed(file, line_no, "definition body is blank"));
        }
        definitions.push((source.unwrap_or_default(), body.join(" ")));
    }
    CharacteristicDefinition::new(&name, definitions)
}

pub fn load_characteristic(path: impl AsRef<Path>) -> Result<CharacteristicDefinition> {
    let path = path.as_ref();
    if !path.is_file() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    let contents = fs::read_to_string(path)?;
    parse_characteristic(&contents, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_definition() {
        let c = parse_characteristic(
            "name = greenness\n[definition]\nsource = BLS\n    Jobs in businesses that produce goods\n    that benefit the environment.\n",
            "g.def",
        )
        .unwrap();
        assert_eq!(c.name, "greenness");
        assert_eq!(
            c.definitions,
            vec!["Jobs in businesses that produce goods that benefit the environment."]
        );
        assert_eq!(c.source_labels, vec!["BLS"]);
    }

    #[test]
    fn order_is_preserved() {
        let text = "# two blocks\nname = x\n[definition]\nsource = a\n  first\n\n[definition]\nsource = b\n  second\n";
        let c = parse_characteristic(text, "x.def").unwrap();
        assert_eq!(c.definitions, vec!["first", "second"]);
        assert_eq!(c.source_labels, vec!["a", "b"]);
    }

    #[test]
    fn blank_body_is_rejected() {
        let err = parse_characteristic("name = x\n[definition]\nsource = a\n", "x.def").unwrap_err();
        assert!(err.to_string().contains("blank"), "{err}");
    }

    #[test]
    fn zero_definitions_rejected() {
        assert!(parse_characteristic("name = x\n", "x.def").is_err());
        assert!(CharacteristicDefinition::new("x", vec![]).is_err());
    }

    #[test]
    fn stray_text_is_rejected() {
        assert!(parse_characteristic("name = x\n  floating\n", "x.def").is_err());
        assert!(parse_characteristic("name = x\n[definition]\n  a\nsource = late\n", "x.def").is_err());
    }
}
