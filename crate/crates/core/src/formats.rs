//! Interchange formats: graph6 and a plain edge-list text format.
//!
//! graph6 follows the usual layout: an optional `>>graph6<<` header, the
//! order `N(n)`, then the upper triangle of the adjacency matrix taken
//! column by column (`x(0,1), x(0,2), x(1,2), x(0,3), ...`), packed into
//! big-endian 6-bit groups each offset by 63.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{Graph, MAX_ORDER};

pub const GRAPH6_HEADER: &str = ">>graph6<<";

/// Encode without header.
pub fn to_graph6(g: &Graph) -> String {
    let n = g.order();
    let mut out = Vec::with_capacity(4 + (n * n.saturating_sub(1) / 2).div_ceil(6));
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are ASCII")
}

/// Decode one graph6 string. Surrounding whitespace is ignored; error
/// offsets are relative to the first non-whitespace byte.
pub fn from_graph6(s: &str) -> Result<Graph> {
    let s = s.trim();
    let bytes = s.as_bytes();
    let mut pos = 0;
    if s.starts_with(GRAPH6_HEADER) {
        pos = GRAPH6_HEADER.len();
    } else if s.starts_with(">>") {
        return Err(Error::parse(0, "unrecognized header (expected >>graph6<<)"));
    }
    if bytes.get(pos) == Some(&b':') || bytes.get(pos) == Some(&b'&') {
        return Err(Error::parse(pos, "sparse6/digraph6 input is not supported"));
    }

    let read = |at: usize| -> Result<u32> {
        match bytes.get(at) {
            None => Err(Error::parse(at, "unexpected end of input")),
            Some(&b) if (63..=126).contains(&b) => Ok((b - 63) as u32),
            Some(&b) => Err(Error::parse(
                at,
                format!("byte 0x{b:02x} is outside the graph6 range 63..=126"),
            )),
        }
    };

    let first = read(pos)?;
    let n = if first < 63 {
        pos += 1;
        first as usize
    } else {
        if bytes.get(pos + 1) == Some(&126) {
            return Err(Error::parse(
                pos,
                format!("orders above {MAX_ORDER} are not supported"),
            ));
        }
        let mut n = 0usize;
        for k in 1..=3 {
            n = (n << 6) | read(pos + k)? as usize;
        }
        pos += 4;
        n
    };
    if n > MAX_ORDER {
        return Err(Error::parse(
            0,
            format!("order {n} exceeds the supported maximum {MAX_ORDER}"),
        ));
    }

    let nbits = n * n.saturating_sub(1) / 2;
    let nbytes = nbits.div_ceil(6);
    if bytes.len() != pos + nbytes {
        let at = pos + nbytes.min(bytes.len().saturating_sub(pos));
        return Err(Error::parse(
            at,
            format!(
                "expected {nbytes} adjacency bytes for order {n}, found {}",
                bytes.len().saturating_sub(pos)
            ),
        ));
    }
    let mut g = Graph::empty(n);
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = read(pos + k / 6)?;
            if byte >> (5 - k % 6) & 1 == 1 {
                g.add_edge(i, j);
            }
            k += 1;
        }
    }
    if nbits % 6 != 0 {
        let last = read(pos + nbytes - 1)?;
        let pad = 6 - nbits % 6;
        if last & ((1 << pad) - 1) != 0 {
            return Err(Error::parse(pos + nbytes - 1, "nonzero padding bits"));
        }
    }
    Ok(g)
}

/// Parse the plain edge-list format: the first non-blank line is `n`, each
/// following non-blank line is `u v` with 0-based ids. Lines starting with
/// `#` are comments. Offsets in errors are byte positions in `text`.
pub fn from_edge_list(text: &str) -> Result<Graph> {
    let mut g: Option<Graph> = None;
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let start = offset;
        offset += line.len();
        let body = line.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let at = start + (line.len() - line.trim_start().len());
        let fields: Vec<&str> = body.split_whitespace().collect();
        match &mut g {
            None => {
                if fields.len() != 1 {
                    return Err(Error::parse(at, "first line must hold the vertex count"));
                }
                let n: usize = fields[0]
                    .parse()
                    .map_err(|_| Error::parse(at, format!("invalid vertex count {:?}", fields[0])))?;
                g = Some(Graph::new(n).map_err(|e| Error::parse(at, e.to_string()))?);
            }
            Some(g) => {
                if fields.len() != 2 {
                    return Err(Error::parse(at, "edge lines must have the form `u v`"));
                }
                let parse = |f: &str| {
                    f.parse::<usize>()
                        .map_err(|_| Error::parse(at, format!("invalid vertex id {f:?}")))
                };
                let (u, v) = (parse(fields[0])?, parse(fields[1])?);
                if u >= g.order() || v >= g.order() {
                    return Err(Error::parse(at, format!("edge ({u}, {v}) is out of range")));
                }
                if u == v {
                    return Err(Error::parse(at, format!("loop at vertex {u}")));
                }
                g.add_edge(u, v);
            }
        }
    }
    g.ok_or_else(|| Error::parse(text.len(), "missing vertex count"))
}

pub fn to_edge_list(g: &Graph) -> String {
    let mut out = format!("{}\n", g.order());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

impl Graph {
    pub fn to_graph6(&self) -> String {
        to_graph6(self)
    }

    pub fn from_graph6(s: &str) -> Result<Graph> {
        from_graph6(s)
    }
}

/// Graphs serialize as graph6 strings.
impl Serialize for Graph {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&to_graph6(self))
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        from_graph6(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named;

    #[test]
    fn known_encodings() {
        // Values checked against nauty's `showg`/`geng` conventions.
        assert_eq!(to_graph6(&named::complete(4)), "C~");
        assert_eq!(to_graph6(&named::cycle(5)), "Dhc");
        assert_eq!(to_graph6(&Graph::empty(0)), "?");
        assert_eq!(to_graph6(&named::petersen()), "IheA@GUAo");
        let g = Graph::from_edges(5, &[(0, 2), (0, 4), (1, 3), (3, 4)]).unwrap();
        assert_eq!(to_graph6(&g), "DQc");
    }

    #[test]
    fn decode_with_header_and_whitespace() {
        let g = from_graph6(">>graph6<<C~\n").unwrap();
        assert_eq!(g, named::complete(4));
    }

    #[test]
    fn long_order_form() {
        let g = named::cycle(64);
        let s = to_graph6(&g);
        assert_eq!(&s.as_bytes()[..4], &[126, 63, 64, 63]);
        assert_eq!(from_graph6(&s).unwrap(), g);
    }

    #[test]
    fn malformed_inputs_report_offsets() {
        assert!(matches!(from_graph6(""), Err(Error::Parse { offset: 0, .. })));
        assert!(matches!(from_graph6("C"), Err(Error::Parse { offset: 1, .. })));
        assert!(matches!(from_graph6("C~~"), Err(Error::Parse { .. })));
        assert!(matches!(from_graph6("C\x01"), Err(Error::Parse { offset: 1, .. })));
        assert!(matches!(from_graph6("Bp"), Err(Error::Parse { offset: 1, .. })));
        assert!(matches!(from_graph6(":Fa@x^"), Err(Error::Parse { .. })));
    }

    #[test]
    fn serde_uses_graph6() {
        let g = named::petersen();
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(json, "\"IheA@GUAo\"");
        assert_eq!(serde_json::from_str::<Graph>(&json).unwrap(), g);
    }

    #[test]
    fn edge_list_round_trip() {
        let g = named::petersen();
        assert_eq!(from_edge_list(&to_edge_list(&g)).unwrap(), g);
        let parsed = from_edge_list("# K3\n3\n0 1\n1 2\n\n2 0\n").unwrap();
        assert_eq!(parsed, named::complete(3));
        assert!(matches!(
            from_edge_list("3\n0 5\n"),
            Err(Error::Parse { offset: 2, .. })
        ));
    }
}
