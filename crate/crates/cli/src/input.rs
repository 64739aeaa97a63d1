use std::io::Read;
use std::path::Path;

use modcycle::formats::from_edge_list;
use modcycle::{Error, Graph};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    /// One graph6 string per line.
    Graph6,
    /// A single graph: vertex count, then one `u v` edge per line.
    Adj,
}

pub fn read_source(path: Option<&Path>) -> Result<String, CliError> {
    match path {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", p.display()))),
        None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| CliError::Usage(format!("cannot read stdin: {e}")))?;
            Ok(s)
        }
    }
}

/// Parse every graph in `text`. Parse errors name the line and the byte
/// offset within the whole input.
pub fn parse_graphs(text: &str, format: Format) -> Result<Vec<Graph>, CliError> {
    match format {
        Format::Adj => from_edge_list(text)
            .map(|g| vec![g])
            .map_err(|e| located(e, text, 0)),
        Format::Graph6 => {
            let mut out = Vec::new();
            let mut start = 0;
            for line in text.split_inclusive('\n') {
                let lead = line.len() - line.trim_start().len();
                if !line.trim().is_empty() {
                    out.push(Graph::from_graph6(line).map_err(|e| located(e, text, start + lead))?);
                }
                start += line.len();
            }
            Ok(out)
        }
    }
}

fn located(e: Error, text: &str, base: usize) -> CliError {
    match e {
        Error::Parse { offset, message } => {
            let at = base + offset;
            let line = text[..at.min(text.len())].matches('\n').count() + 1;
            CliError::Usage(format!("malformed input at byte {at} (line {line}): {message}"))
        }
        other => CliError::Lib(other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn offsets_are_absolute() {
        let err = parse_graphs("C~\n  C\x01\n", Format::Graph6).unwrap_err();
        match err {
            CliError::Usage(msg) => assert!(msg.contains("byte 6 (line 2)"), "{msg}"),
            other => panic!("{other:?}"),
        }
        assert_eq!(parse_graphs("\nC~\n\nBw\n", Format::Graph6).unwrap().len(), 2);
    }
}
