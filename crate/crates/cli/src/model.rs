//! Model files: `key = value` lines with `#` comments.
//!
//! ```text
//! name = "free"
//! n = 1
//! lagrangian = "1/2*a1^2"
//! notes = "optional free text"
//! ```

use std::path::Path;

use fracjet::parser::{parse, ParseError};
use fracjet::{Expr, LagrangianModel};

#[derive(Debug, Clone, PartialEq)]
pub struct ModelFile {
    pub name: String,
    pub n: u32,
    pub lagrangian: String,
    pub notes: Option<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("Lagrangian does not parse: {message}\n{annotated}")]
    Lagrangian { message: String, annotated: String },
    #[error("{0}")]
    Invalid(String),
}

impl ModelFile {
    pub fn load(path: &Path) -> Result<Self, ModelError> {
        let text = std::fs::read_to_string(path).map_err(|source| ModelError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        Self::from_str(&text, &stem)
    }

    pub fn from_str(text: &str, default_name: &str) -> Result<Self, ModelError> {
        let mut name = None;
        let mut n = None;
        let mut lagrangian = None;
        let mut notes = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let syntax = |message: String| ModelError::Syntax { line, message };
            let content = strip_comment(raw).trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| syntax(format!("expected 'key = value', found '{content}'")))?;
            let value = unquote(value.trim()).map_err(&syntax)?;
            let slot = match key.trim() {
                "name" => &mut name,
                "n" => &mut n,
                "lagrangian" => &mut lagrangian,
                "notes" => &mut notes,
                other => return Err(syntax(format!("unknown key '{other}'"))),
            };
            if slot.replace(value).is_some() {
                return Err(syntax(format!("duplicate key '{}'", key.trim())));
            }
        }
        let n: u32 = n
            .ok_or_else(|| ModelError::Invalid("missing key 'n'".into()))?
            .parse()
            .map_err(|_| ModelError::Invalid("'n' must be a positive integer".into()))?;
        let lagrangian =
            lagrangian.ok_or_else(|| ModelError::Invalid("missing key 'lagrangian'".into()))?;
        Ok(ModelFile {
            name: name.unwrap_or_else(|| default_name.to_string()),
            n,
            lagrangian,
            notes,
        })
    }

    pub fn expr(&self) -> Result<Expr, ModelError> {
        parse(&self.lagrangian, self.n).map_err(|e: ParseError| ModelError::Lagrangian {
            message: e.to_string(),
            annotated: e.annotate(&self.lagrangian),
        })
    }

    pub fn model(&self) -> Result<LagrangianModel, ModelError> {
        LagrangianModel::new(self.n, self.expr()?).map_err(|e| ModelError::Invalid(e.to_string()))
    }
}

fn strip_comment(line: &str) -> &str {
    let mut quoted = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => quoted = !quoted,
            '#' if !quoted => return &line[..i],
            _ => {}
        }
    }
    line
}

fn unquote(value: &str) -> Result<String, String> {
    match value.strip_prefix('"') {
        Some(rest) => rest
            .strip_suffix('"')
            .filter(|inner| !inner.contains('"'))
            .map(str::to_string)
            .ok_or_else(|| format!("unterminated string {value}")),
        None if value.is_empty() => Err("missing value".into()),
        None => Ok(value.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_keys_and_comments() {
        let m = ModelFile::from_str(
            "# header\nn = 2  # trailing\nlagrangian = \"1/2*a1^2 # not a comment\"\n",
            "stem",
        )
        .unwrap();
        assert_eq!(m.n, 2);
        assert_eq!(m.name, "stem");
        assert_eq!(m.lagrangian, "1/2*a1^2 # not a comment");
        assert!(m.notes.is_none());
    }

    #[test]
    fn rejects_malformed_files() {
        for text in [
            "n = 1\nlagrangian = \"a1\nx\"",
            "n = 1",
            "lagrangian = \"a1\"",
            "n = 1\nn = 2\nlagrangian = \"a1\"",
            "n = 1\ncolour = red\nlagrangian = \"a1\"",
            "n = one\nlagrangian = \"a1\"",
            "n = 1\njust words",
        ] {
            assert!(ModelFile::from_str(text, "m").is_err(), "{text}");
        }
    }

    #[test]
    fn lagrangian_errors_carry_a_caret() {
        let m = ModelFile::from_str("n = 1\nlagrangian = \"a1 + x2\"", "m").unwrap();
        match m.expr() {
            Err(ModelError::Lagrangian { annotated, .. }) => assert!(annotated.contains('^')),
            other => panic!("{other:?}"),
        }
    }
}
