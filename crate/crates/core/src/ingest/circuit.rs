//! The hardware circuit format. A circuit is a qubit count, a sequence of
//! boxes (each spanning a range of qubit lines and performing one
//! functional), and optional couplings that feed one box's functional into
//! another:
//!
//! ```text
//! qubits 3
//! box S1 "Init" lines 0-2 functional "Equal-Superposition"
//! box S2 "Oracle" lines 0-2 functional "Mark-Target"
//! couple S2 S3 via Mark-Target
//! ```
//!
//! Lowering turns boxes into structors and distinct functional names into
//! functionals, so the whole spectral pipeline applies unchanged.

use std::collections::{HashMap, HashSet};

use crate::model::{is_valid_id, Entity, ModelError, SystemDesign};

use super::{tokenize, ParseError, Token};

/// One gate box: a structor-to-be.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitBox {
    pub id: String,
    pub name: String,
    /// Inclusive range of qubit lines the box acts on.
    pub lines: (usize, usize),
    /// Display name of the functional the box performs.
    pub functional_name: String,
    /// Source line, for diagnostics.
    pub source_line: usize,
}

/// `couple <from> <to> via <functional>`: box `to` consumes the named
/// functional, which box `from` must provide.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coupling {
    pub from_box: String,
    pub to_box: String,
    pub via: String,
    pub source_line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitDocument {
    pub qubit_count: usize,
    pub boxes: Vec<CircuitBox>,
    pub couplings: Vec<Coupling>,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn semantic(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Semantic {
        line,
        message: message.into(),
    }
}

fn bare_id(line: usize, tok: &Token) -> Result<String, ParseError> {
    if tok.quoted || !is_valid_id(&tok.text) {
        return Err(ParseError::Invalid {
            line,
            source: ModelError::InvalidId(tok.text.clone()),
        });
    }
    Ok(tok.text.clone())
}

fn quoted_name(line: usize, tok: &Token) -> Result<String, ParseError> {
    if !tok.quoted {
        return Err(syntax(line, tok.column, "display name must be quoted"));
    }
    Ok(tok.text.clone())
}

fn keyword(line: usize, tok: &Token, kw: &str) -> Result<(), ParseError> {
    if tok.quoted || tok.text != kw {
        return Err(syntax(line, tok.column, format!("expected keyword `{kw}`")));
    }
    Ok(())
}

fn parse_span(line: usize, tok: &Token) -> Result<(usize, usize), ParseError> {
    let bad = || syntax(line, tok.column, "expected line span `<lo>-<hi>`");
    let (lo, hi) = tok.text.split_once('-').ok_or_else(bad)?;
    let lo: usize = lo.parse().map_err(|_| bad())?;
    let hi: usize = hi.parse().map_err(|_| bad())?;
    Ok((lo, hi))
}

/// Parses circuit text into its document form, validating spans, box ids
/// and coupling references.
pub fn parse_circuit(text: &str) -> Result<CircuitDocument, ParseError> {
    let mut qubit_count: Option<usize> = None;
    let mut boxes: Vec<CircuitBox> = Vec::new();
    let mut box_ids: HashSet<String> = HashSet::new();
    let mut couplings: Vec<Coupling> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let number = idx + 1;
        let (toks, _comment) = tokenize(number, raw)?;
        if toks.is_empty() {
            continue;
        }
        if qubit_count.is_none() {
            // The qubit count must come before anything else.
            keyword(number, &toks[0], "qubits").map_err(|_| {
                syntax(
                    number,
                    toks[0].column,
                    "expected `qubits <n>` as the first statement",
                )
            })?;
            if toks.len() != 2 || toks[1].quoted {
                return Err(syntax(number, toks[0].column, "expected `qubits <n>`"));
            }
            let n: usize = toks[1]
                .text
                .parse()
                .map_err(|_| syntax(number, toks[1].column, "expected `qubits <n>`"))?;
            if n == 0 {
                return Err(semantic(number, "qubit count must be positive"));
            }
            qubit_count = Some(n);
            continue;
        }
        let qubits = qubit_count.unwrap();
        match toks[0].text.as_str() {
            "box" => {
                if toks.len() != 7 {
                    return Err(syntax(
                        number,
                        toks[0].column,
                        "expected `box <id> \"<display>\" lines <lo>-<hi> functional \"<display>\"`",
                    ));
                }
                let id = bare_id(number, &toks[1])?;
                let name = quoted_name(number, &toks[2])?;
                keyword(number, &toks[3], "lines")?;
                let (lo, hi) = parse_span(number, &toks[4])?;
                keyword(number, &toks[5], "functional")?;
                let functional_name = quoted_name(number, &toks[6])?;
                if lo > hi {
                    return Err(semantic(number, format!("line span {lo}-{hi} is reversed")));
                }
                if hi >= qubits {
                    return Err(semantic(
                        number,
                        format!("line span {lo}-{hi} is out of range for {qubits} qubits"),
                    ));
                }
                if !box_ids.insert(id.clone()) {
                    return Err(ParseError::Invalid {
                        line: number,
                        source: ModelError::DuplicateId(id),
                    });
                }
                boxes.push(CircuitBox {
                    id,
                    name,
                    lines: (lo, hi),
                    functional_name,
                    source_line: number,
                });
            }
            "couple" => {
                if toks.len() != 5 {
                    return Err(syntax(
                        number,
                        toks[0].column,
                        "expected `couple <box-id> <box-id> via <functional-id>`",
                    ));
                }
                let from_box = bare_id(number, &toks[1])?;
                let to_box = bare_id(number, &toks[2])?;
                keyword(number, &toks[3], "via")?;
                let via = bare_id(number, &toks[4])?;
                for unknown in [&from_box, &to_box] {
                    if !box_ids.contains(unknown) {
                        return Err(semantic(
                            number,
                            format!("coupling references unknown box `{unknown}`"),
                        ));
                    }
                }
                couplings.push(Coupling {
                    from_box,
                    to_box,
                    via,
                    source_line: number,
                });
            }
            other => {
                return Err(syntax(
                    number,
                    toks[0].column,
                    format!("unknown statement `{other}`"),
                ));
            }
        }
    }

    match qubit_count {
        Some(qubit_count) => Ok(CircuitDocument {
            qubit_count,
            boxes,
            couplings,
        }),
        None => Err(syntax(1, 1, "expected `qubits <n>` as the first statement")),
    }
}

/// Makes a functional id out of a display name: runs of characters that are
/// not legal in ids collapse to a single `-`. `"Inversion about the average"`
/// becomes `Inversion-about-the-average`.
fn derive_functional_id(display: &str) -> Option<String> {
    let mut id = String::new();
    let mut gap = false;
    for c in display.chars() {
        if c.is_ascii_alphanumeric() || c == '_' || c == '-' {
            if gap && !id.is_empty() {
                id.push('-');
            }
            gap = false;
            id.push(c);
        } else {
            gap = true;
        }
    }
    let id = id.trim_matches('-').to_string();
    is_valid_id(&id).then_some(id)
}

/// Lowers a circuit to a design graph: one structor per box, one functional
/// per distinct functional name, a provides edge for each box, plus one
/// edge per coupling (the consuming box also provides the coupled
/// functional). Box order is recorded as the design's execution sequence.
pub fn lower_circuit(doc: &CircuitDocument) -> Result<SystemDesign, ParseError> {
    let mut functionals: Vec<Entity> = Vec::new();
    let mut by_id: HashMap<String, String> = HashMap::new(); // id -> display it came from
    let mut provides: Vec<(String, String)> = Vec::new();
    let mut box_functional: HashMap<&str, String> = HashMap::new();

    for b in &doc.boxes {
        let fid = derive_functional_id(&b.functional_name).ok_or_else(|| ParseError::Semantic {
            line: b.source_line,
            message: format!(
                "cannot derive a functional id from display name \"{}\"",
                b.functional_name
            ),
        })?;
        match by_id.get(&fid) {
            None => {
                by_id.insert(fid.clone(), b.functional_name.clone());
                functionals.push(Entity::new(&fid, &b.functional_name));
            }
            Some(existing) if *existing == b.functional_name => {}
            Some(existing) => {
                return Err(ParseError::Semantic {
                    line: b.source_line,
                    message: format!(
                        "functional display names \"{existing}\" and \"{}\" both map to id `{fid}`",
                        b.functional_name
                    ),
                });
            }
        }
        provides.push((b.id.clone(), fid.clone()));
        box_functional.insert(b.id.as_str(), fid);
    }

    let mut edge_seen: HashSet<(String, String)> = provides.iter().cloned().collect();
    for c in &doc.couplings {
        let provided = &box_functional[c.from_box.as_str()];
        if *provided != c.via {
            return Err(ParseError::Semantic {
                line: c.source_line,
                message: format!(
                    "coupling via `{}`: box `{}` provides `{provided}`, not `{}`",
                    c.via, c.from_box, c.via
                ),
            });
        }
        let edge = (c.to_box.clone(), c.via.clone());
        if !edge_seen.insert(edge.clone()) {
            return Err(ParseError::Semantic {
                line: c.source_line,
                message: format!("coupling repeats the edge `{} {}`", c.to_box, c.via),
            });
        }
        provides.push(edge);
    }

    let structors: Vec<Entity> = doc
        .boxes
        .iter()
        .map(|b| Entity::new(&b.id, &b.name))
        .collect();
    let sequence: Vec<String> = doc.boxes.iter().map(|b| b.id.clone()).collect();

    Ok(SystemDesign::new(
        "circuit",
        structors,
        functionals,
        &provides,
        &sequence,
    )?)
}

/// Parses and lowers in one step.
pub fn parse_circuit_design(text: &str) -> Result<SystemDesign, ParseError> {
    lower_circuit(&parse_circuit(text)?)
}
