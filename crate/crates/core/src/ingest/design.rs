//! The design text format. Three statement kinds, declaration before use:
//!
//! ```text
//! structor   S1 "Generic-Cloneable-Shape"
//! functional F1 "Clone"
//! provides   S1 F1      # S1 implements F1
//! ```

use std::collections::HashSet;

use crate::model::{is_valid_id, Entity, ModelError, SystemDesign};

use super::{tokenize, ParseError, Token};

/// One parsed statement of the design format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Statement {
    Structor {
        id: String,
        name: String,
    },
    Functional {
        id: String,
        name: String,
    },
    Provides {
        structor: String,
        functional: String,
    },
    Comment(String),
}

/// A statement with the 1-based source line it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DesignLine {
    pub number: usize,
    pub statement: Statement,
}

/// Syntactic form of a design file: the statement list before semantic
/// validation, plus a label for error reporting (usually the file path).
#[derive(Debug, Clone)]
pub struct DesignDocument {
    pub source: String,
    pub lines: Vec<DesignLine>,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn expect_id(line: usize, tok: &Token, what: &str) -> Result<String, ParseError> {
    if tok.quoted {
        return Err(syntax(
            line,
            tok.column,
            format!("{what} must be a bare id, not a quoted string"),
        ));
    }
    if !is_valid_id(&tok.text) {
        return Err(ParseError::Invalid {
            line,
            source: ModelError::InvalidId(tok.text.clone()),
        });
    }
    Ok(tok.text.clone())
}

fn expect_name(line: usize, tok: &Token, what: &str) -> Result<String, ParseError> {
    if !tok.quoted {
        return Err(syntax(line, tok.column, format!("{what} must be quoted")));
    }
    Ok(tok.text.clone())
}

fn expect_len(line: usize, toks: &[Token], n: usize, usage: &str) -> Result<(), ParseError> {
    if toks.len() != n {
        let column = toks.get(n.min(toks.len() - 1)).map_or(1, |t| t.column);
        return Err(syntax(line, column, format!("expected `{usage}`")));
    }
    Ok(())
}

/// Parses the statement list without semantic checks beyond token shape.
pub fn parse_design_document(source: &str, text: &str) -> Result<DesignDocument, ParseError> {
    let mut lines = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let number = idx + 1;
        let (toks, comment) = tokenize(number, raw)?;
        if toks.is_empty() {
            if let Some(c) = comment {
                lines.push(DesignLine {
                    number,
                    statement: Statement::Comment(c),
                });
            }
            continue;
        }
        let statement = match toks[0].text.as_str() {
            "structor" => {
                expect_len(number, &toks, 3, "structor <id> \"<display-name>\"")?;
                Statement::Structor {
                    id: expect_id(number, &toks[1], "structor id")?,
                    name: expect_name(number, &toks[2], "display name")?,
                }
            }
            "functional" => {
                expect_len(number, &toks, 3, "functional <id> \"<display-name>\"")?;
                Statement::Functional {
                    id: expect_id(number, &toks[1], "functional id")?,
                    name: expect_name(number, &toks[2], "display name")?,
                }
            }
            "provides" => {
                expect_len(number, &toks, 3, "provides <structor-id> <functional-id>")?;
                Statement::Provides {
                    structor: expect_id(number, &toks[1], "structor id")?,
                    functional: expect_id(number, &toks[2], "functional id")?,
                }
            }
            other => {
                return Err(syntax(
                    number,
                    toks[0].column,
                    format!("unknown statement `{other}`"),
                ))
            }
        };
        lines.push(DesignLine { number, statement });
    }
    Ok(DesignDocument {
        source: source.to_string(),
        lines,
    })
}

impl DesignDocument {
    /// Semantic validation: ids unique, `provides` only names earlier
    /// declarations, no repeated edges. Produces the design graph.
    pub fn into_design(self) -> Result<SystemDesign, ParseError> {
        let mut structors: Vec<Entity> = Vec::new();
        let mut functionals: Vec<Entity> = Vec::new();
        let mut declared: HashSet<String> = HashSet::new();
        let mut structor_ids: HashSet<String> = HashSet::new();
        let mut functional_ids: HashSet<String> = HashSet::new();
        let mut provides: Vec<(String, String)> = Vec::new();
        let mut edge_seen: HashSet<(String, String)> = HashSet::new();

        for line in &self.lines {
            let number = line.number;
            let invalid = |source| ParseError::Invalid {
                line: number,
                source,
            };
            match &line.statement {
                Statement::Comment(_) => {}
                Statement::Structor { id, name } => {
                    if !declared.insert(id.clone()) {
                        return Err(invalid(ModelError::DuplicateId(id.clone())));
                    }
                    structor_ids.insert(id.clone());
                    structors.push(Entity::new(id, name));
                }
                Statement::Functional { id, name } => {
                    if !declared.insert(id.clone()) {
                        return Err(invalid(ModelError::DuplicateId(id.clone())));
                    }
                    functional_ids.insert(id.clone());
                    functionals.push(Entity::new(id, name));
                }
                Statement::Provides {
                    structor,
                    functional,
                } => {
                    if !structor_ids.contains(structor) {
                        return Err(invalid(ModelError::UnknownStructor(structor.clone())));
                    }
                    if !functional_ids.contains(functional) {
                        return Err(invalid(ModelError::UnknownFunctional(functional.clone())));
                    }
                    let key = (structor.clone(), functional.clone());
                    if !edge_seen.insert(key.clone()) {
                        return Err(invalid(ModelError::DuplicateEdge(
                            structor.clone(),
                            functional.clone(),
                        )));
                    }
                    provides.push(key);
                }
            }
        }

        Ok(SystemDesign::new(
            "design",
            structors,
            functionals,
            &provides,
            &[],
        )?)
    }
}

/// Parses design text straight to a validated graph.
pub fn parse_design(text: &str) -> Result<SystemDesign, ParseError> {
    parse_design_document("<memory>", text)?.into_design()
}

/// Serialises a design back to the text format: structors, then
/// functionals, then provides edges, all in declaration order. Re-parsing
/// the output reproduces the design, provided display names contain no
/// double quote or newline (the format has no escapes).
pub fn to_design_text(design: &SystemDesign) -> String {
    let mut out = String::new();
    for s in design.structors() {
        out.push_str(&format!("structor {} \"{}\"\n", s.id, s.name));
    }
    for f in design.functionals() {
        out.push_str(&format!("functional {} \"{}\"\n", f.id, f.name));
    }
    for e in design.edges() {
        out.push_str(&format!(
            "provides {} {}\n",
            design.structors()[e.structor].id,
            design.functionals()[e.functional].id
        ));
    }
    out
}
