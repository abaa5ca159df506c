//! JSON mirror of the design format. Field-for-field the same content as
//! the text form, convenient for tooling:
//!
//! ```json
//! {
//!   "name": "prototype",
//!   "structors": [{"id": "S1", "name": "Generic-Cloneable-Shape"}],
//!   "functionals": [{"id": "F1", "name": "Clone"}],
//!   "provides": [["S1", "F1"]],
//!   "sequence": []
//! }
//! ```

use serde::{Deserialize, Serialize};

use crate::model::{Entity, SystemDesign};

use super::ParseError;

#[derive(Debug, Serialize, Deserialize)]
struct DesignFile {
    #[serde(default = "default_name")]
    name: String,
    structors: Vec<Entity>,
    functionals: Vec<Entity>,
    provides: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    sequence: Vec<String>,
}

fn default_name() -> String {
    "design".to_string()
}

/// Reads the JSON mirror, applying the same validation as the text parser.
pub fn design_from_json(text: &str) -> Result<SystemDesign, ParseError> {
    let file: DesignFile =
        serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
    Ok(SystemDesign::new(
        file.name,
        file.structors,
        file.functionals,
        &file.provides,
        &file.sequence,
    )?)
}

/// Writes the JSON mirror, pretty-printed with a trailing newline.
pub fn design_to_json(design: &SystemDesign) -> String {
    let file = DesignFile {
        name: design.name().to_string(),
        structors: design.structors().to_vec(),
        functionals: design.functionals().to_vec(),
        provides: design
            .edges()
            .iter()
            .map(|e| {
                (
                    design.structors()[e.structor].id.clone(),
                    design.functionals()[e.functional].id.clone(),
                )
            })
            .collect(),
        sequence: design
            .sequence_ids()
            .into_iter()
            .map(str::to_string)
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&file).expect("design serialization cannot fail");
    out.push('\n');
    out
}
