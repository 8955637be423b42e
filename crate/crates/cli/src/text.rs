//! Line-oriented string files: digits for alphabets of size at most 10,
//! comma-separated integers otherwise. One string per line.

use sst_core::{Alphabet, SymbolString};

pub fn parse_line(alphabet: Alphabet, line: &str) -> Result<SymbolString, String> {
    let line = line.trim_end_matches('\r');
    let symbols = if alphabet.size() <= 10 {
        line.chars()
            .map(|c| c.to_digit(10).ok_or_else(|| format!("invalid symbol {c:?}")))
            .collect::<Result<Vec<u32>, _>>()?
    } else {
        line.split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|_| format!("invalid symbol {t:?}")))
            .collect::<Result<Vec<u32>, _>>()?
    };
    SymbolString::new(alphabet, symbols).map_err(|e| e.to_string())
}

/// Splits file contents into lines, remembering whether the last one was
/// newline-terminated so output can mirror it.
pub fn split_lines(contents: &str) -> (Vec<&str>, bool) {
    let trailing = contents.ends_with('\n');
    let body = contents.strip_suffix('\n').unwrap_or(contents);
    if body.is_empty() && !contents.is_empty() {
        return (vec![""], trailing);
    }
    if body.is_empty() {
        return (Vec::new(), trailing);
    }
    (body.split('\n').collect(), trailing)
}

pub fn join_lines(lines: &[String], trailing: bool) -> String {
    let mut out = lines.join("\n");
    if trailing && !lines.is_empty() {
        out.push('\n');
    }
    out
}
