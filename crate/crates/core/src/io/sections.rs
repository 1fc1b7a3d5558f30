//! Line-oriented section files shared by algebra, module and algebra-module
//! definitions.
//!
//! A file is a sequence of sections. A header line `[name arg arg ...]`
//! opens a section and every following non-blank line up to the next header
//! belongs to it. `#` starts a comment.

use crate::error::ParseError;

#[derive(Clone, Debug, PartialEq)]
pub struct Section {
    pub name: String,
    pub args: Vec<String>,
    pub line: usize,
    pub body: Vec<(usize, Vec<String>)>,
}

impl Section {
    pub fn error(&self, line: usize, message: impl Into<String>) -> ParseError {
        ParseError::Syntax { line, message: message.into() }
    }

    /// All body tokens flattened, with the line each came from.
    pub fn tokens(&self) -> Vec<(usize, &str)> {
        self.body.iter().flat_map(|(l, toks)| toks.iter().map(move |t| (*l, t.as_str()))).collect()
    }
}

pub fn parse_sections(text: &str) -> Result<Vec<Section>, ParseError> {
    let mut out: Vec<Section> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let inner = rest
                .strip_suffix(']')
                .ok_or(ParseError::Syntax { line, message: "unterminated section header".into() })?;
            let mut toks = inner.split_whitespace().map(str::to_string);
            let name = toks
                .next()
                .ok_or(ParseError::Syntax { line, message: "empty section header".into() })?;
            out.push(Section { name, args: toks.collect(), line, body: Vec::new() });
            continue;
        }
        let Some(section) = out.last_mut() else {
            return Err(ParseError::Syntax { line, message: "content before the first section".into() });
        };
        section.body.push((line, content.split_whitespace().map(str::to_string).collect()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_and_comments() {
        let s = parse_sections("# top\n[space]\n0 1 vac # vacuum\n\n[mode a 1 a]\n1 vac\n").unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[1].args, vec!["a", "1", "a"]);
        assert_eq!(s[0].body[0].1, vec!["0", "1", "vac"]);
    }

    #[test]
    fn content_before_header_is_rejected() {
        assert!(parse_sections("0 1 vac\n").is_err());
        assert!(parse_sections("[space\n").is_err());
    }
}

/// Reads `coef label coef label ...` into a vector over `space`.
pub fn parse_vector(
    space: &crate::linear::GradedSpace,
    tokens: &[(usize, &str)],
) -> Result<crate::linear::Vector, ParseError> {
    if tokens.len() % 2 != 0 {
        let line = tokens.last().map(|t| t.0).unwrap_or(0);
        return Err(ParseError::Syntax { line, message: "vector entries come in `coef label` pairs".into() });
    }
    let mut v = crate::linear::Vector::zero();
    for pair in tokens.chunks(2) {
        let c = crate::exact::parse_rational(pair[0].1)?;
        let i = space.index_of(pair[1].1)?;
        v.add_at(i, &c);
    }
    Ok(v)
}

/// Inverse of [`parse_vector`].
pub fn format_vector_entries(space: &crate::linear::GradedSpace, v: &crate::linear::Vector) -> String {
    v.iter().map(|(i, c)| format!("{c} {}", space.label(i))).collect::<Vec<_>>().join(" ")
}
