//! Trinet files: one extended Newick network per line, `#` starts a
//! comment line, and a network listed `m` times has multiplicity `m`.

use crate::collection::TrinetCollection;
use crate::enewick::{parse, write, ParseError};

/// Parses a trinet file and checks every network. Error positions refer to
/// the whole file.
pub fn read(text: &str) -> Result<TrinetCollection, ParseError> {
    let mut out = TrinetCollection::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let indent = raw.len() - raw.trim_start().len();
        let net = parse(line).map_err(|e| ParseError {
            line: i + 1,
            column: e.column + indent,
            message: e.message,
        })?;
        if let Some(v) = net.validate().first() {
            return Err(ParseError {
                line: i + 1,
                column: indent + 1,
                message: v.to_string(),
            });
        }
        out.insert(net);
    }
    Ok(out)
}

/// Writes every entry in canonical form, repeated by multiplicity, in
/// canonical-key order.
pub fn write_collection(t: &TrinetCollection) -> String {
    let mut out = String::new();
    for e in t.iter() {
        let line = write(&e.network);
        for _ in 0..e.multiplicity {
            out.push_str(&line);
            out.push('\n');
        }
    }
    out
}
