//! Minimal INI reader.
//!
//! Sections hold `key = value` pairs and, for element lists, bare
//! `name value` records whose order is kept. `#` and `;` start comments.

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Line {
    Pair { key: String, value: String },
    Record { name: String, value: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub line_no: usize,
    pub line: Line,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub name: String,
    pub line_no: usize,
    pub entries: Vec<Entry>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Ini {
    pub sections: Vec<Section>,
}

fn strip_comment(line: &str) -> &str {
    let cut = line
        .char_indices()
        .find(|&(i, c)| (c == '#' || c == ';') && (i == 0 || line[..i].ends_with(char::is_whitespace)))
        .map_or(line.len(), |(i, _)| i);
    line[..cut].trim()
}

impl Ini {
    pub fn parse(text: &str, origin: &str) -> Result<Ini, CliError> {
        let syntax = |line_no: usize, message: String| CliError::Syntax {
            origin: origin.to_string(),
            line: line_no,
            message,
        };
        let mut ini = Ini::default();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| syntax(line_no, format!("unterminated section header `{line}`")))?
                    .trim();
                if name.is_empty() {
                    return Err(syntax(line_no, "empty section name".into()));
                }
                if ini.section(name).is_some() {
                    return Err(syntax(line_no, format!("section [{name}] appears twice")));
                }
                ini.sections.push(Section {
                    name: name.to_string(),
                    line_no,
                    entries: Vec::new(),
                });
                continue;
            }
            let section = ini
                .sections
                .last_mut()
                .ok_or_else(|| syntax(line_no, format!("`{line}` outside any section")))?;
            let parsed = if let Some((k, v)) = line.split_once('=') {
                let key = k.trim();
                if key.is_empty() || key.contains(char::is_whitespace) {
                    return Err(syntax(line_no, format!("bad key `{key}`")));
                }
                if section.pair(key).is_some() {
                    return Err(syntax(line_no, format!("key `{key}` repeated in [{}]", section.name)));
                }
                Line::Pair {
                    key: key.to_string(),
                    value: v.trim().to_string(),
                }
            } else {
                let mut parts = line.split_whitespace();
                match (parts.next(), parts.next(), parts.next()) {
                    (Some(name), Some(value), None) => Line::Record {
                        name: name.to_string(),
                        value: value.to_string(),
                    },
                    _ => return Err(syntax(line_no, format!("expected `key = value` or `name value`, got `{line}`"))),
                }
            };
            section.entries.push(Entry { line_no, line: parsed });
        }
        Ok(ini)
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }
}

impl Section {
    pub fn pair(&self, key: &str) -> Option<&str> {
        self.entries.iter().find_map(|e| match &e.line {
            Line::Pair { key: k, value } if k == key => Some(value.as_str()),
            _ => None,
        })
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str, usize)> {
        self.entries.iter().filter_map(|e| match &e.line {
            Line::Pair { key, value } => Some((key.as_str(), value.as_str(), e.line_no)),
            Line::Record { .. } => None,
        })
    }

    pub fn records(&self) -> impl Iterator<Item = (&str, &str, usize)> {
        self.entries.iter().filter_map(|e| match &e.line {
            Line::Record { name, value } => Some((name.as_str(), value.as_str(), e.line_no)),
            Line::Pair { .. } => None,
        })
    }
}
