//! Interchange formats: graph6, the `n m` edge list, and one-line
//! construction descriptors.

use std::fmt;
use std::str::FromStr;

use crate::error::ParseError;
use crate::graph::Graph;

/// Largest vertex count expressible in graph6.
pub const GRAPH6_MAX_N: usize = 68_719_476_735;

const HEADER: &[u8] = b">>graph6<<";

/// Encodes `g` in graph6 (no header, no trailing newline).
pub fn to_graph6(g: &Graph) -> Vec<u8> {
    let n = g.n();
    assert!(n <= GRAPH6_MAX_N, "graph6 cannot encode {n} vertices");
    let mut out = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.push(126);
        out.push(126);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
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
    out
}

pub fn to_graph6_string(g: &Graph) -> String {
    String::from_utf8(to_graph6(g)).expect("graph6 is printable ASCII")
}

/// Decodes one graph6 record. An optional `>>graph6<<` header and a single
/// trailing newline are accepted; padding bits must be zero.
pub fn from_graph6(bytes: &[u8]) -> Result<Graph, ParseError> {
    let mut pos = 0;
    if bytes.starts_with(HEADER) {
        pos = HEADER.len();
    }
    let mut end = bytes.len();
    if end > pos && bytes[end - 1] == b'\n' {
        end -= 1;
        if end > pos && bytes[end - 1] == b'\r' {
            end -= 1;
        }
    }
    let byte_at = |i: usize| -> Result<u64, ParseError> {
        if i >= end {
            return Err(ParseError::new(i, "unexpected end of graph6 data"));
        }
        let b = bytes[i];
        if !(63..=126).contains(&b) {
            return Err(ParseError::new(i, format!("byte {b:#04x} outside graph6 range 63..=126")));
        }
        Ok((b - 63) as u64)
    };

    let first = byte_at(pos)?;
    let n = if first < 63 {
        pos += 1;
        first as usize
    } else if byte_at(pos + 1)? < 63 {
        let mut n = 0u64;
        for i in 1..=3 {
            n = (n << 6) | byte_at(pos + i)?;
        }
        if n < 63 {
            return Err(ParseError::new(pos, "non-canonical size header"));
        }
        pos += 4;
        n as usize
    } else {
        let mut n = 0u64;
        for i in 2..=7 {
            n = (n << 6) | byte_at(pos + i)?;
        }
        if n <= 258_047 {
            return Err(ParseError::new(pos, "non-canonical size header"));
        }
        pos += 8;
        n as usize
    };

    let bits = n * n.saturating_sub(1) / 2;
    let nbytes = bits.div_ceil(6);
    if end - pos < nbytes {
        return Err(ParseError::new(end, format!("truncated edge data: need {nbytes} bytes after header, found {}", end - pos)));
    }
    if end - pos > nbytes {
        return Err(ParseError::new(pos + nbytes, "trailing bytes after edge data"));
    }
    let mut g = Graph::new(n);
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let b = byte_at(pos + k / 6)?;
            if (b >> (5 - k % 6)) & 1 == 1 {
                g.add_edge(i, j);
            }
            k += 1;
        }
    }
    if bits % 6 != 0 {
        let last = byte_at(pos + nbytes - 1)?;
        let pad = 6 - bits % 6;
        if last & ((1 << pad) - 1) != 0 {
            return Err(ParseError::new(pos + nbytes - 1, "nonzero padding bits"));
        }
    }
    Ok(g)
}

/// `n m` followed by `m` lines `u v`, edges in lexicographic order.
pub fn to_edge_list(g: &Graph) -> String {
    let mut s = format!("{} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

pub fn from_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut lines = LineCursor::new(text);
    let (off, header) = lines
        .next_nonempty()
        .ok_or_else(|| ParseError::new(0, "missing `n m` header"))?;
    let (n, m) = parse_pair(header, off)?;
    let mut g = Graph::new(n);
    for _ in 0..m {
        let (off, line) = lines
            .next_nonempty()
            .ok_or_else(|| ParseError::new(text.len(), format!("expected {m} edge lines")))?;
        let (u, v) = parse_pair(line, off)?;
        if u >= n || v >= n {
            return Err(ParseError::new(off, format!("edge {u} {v} has an endpoint >= n = {n}")));
        }
        if u == v {
            return Err(ParseError::new(off, format!("self-loop at {u}")));
        }
        if g.has_edge(u, v) {
            return Err(ParseError::new(off, format!("duplicate edge {u} {v}")));
        }
        g.add_edge(u, v);
    }
    if let Some((off, _)) = lines.next_nonempty() {
        return Err(ParseError::new(off, "content after the declared edges"));
    }
    Ok(g)
}

fn parse_pair(line: &str, off: usize) -> Result<(usize, usize), ParseError> {
    let mut it = line.split_whitespace();
    let mut num = || -> Result<usize, ParseError> {
        let tok = it.next().ok_or_else(|| ParseError::new(off, "expected two integers"))?;
        tok.parse()
            .map_err(|_| ParseError::new(off, format!("invalid integer `{tok}`")))
    };
    let a = num()?;
    let b = num()?;
    if it.next().is_some() {
        return Err(ParseError::new(off, "expected exactly two integers"));
    }
    Ok((a, b))
}

/// Iterates lines with their byte offsets, skipping blank lines.
pub(crate) struct LineCursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> LineCursor<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        Self { text, pos: 0 }
    }

    pub(crate) fn next_nonempty(&mut self) -> Option<(usize, &'a str)> {
        while self.pos < self.text.len() {
            let start = self.pos;
            let rest = &self.text[start..];
            let len = rest.find('\n').map_or(rest.len(), |i| i + 1);
            self.pos += len;
            let line = rest[..len].trim_end_matches(['\n', '\r']);
            if !line.trim().is_empty() {
                return Some((start, line));
            }
        }
        None
    }
}

/// Which on-disk graph encoding to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    Graph6,
    EdgeList,
}

impl FromStr for GraphFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "g6" | "graph6" => Ok(Self::Graph6),
            "edgelist" | "edges" => Ok(Self::EdgeList),
            other => Err(format!("unknown format `{other}` (expected g6 or edgelist)")),
        }
    }
}

impl GraphFormat {
    pub fn encode(self, g: &Graph) -> Vec<u8> {
        match self {
            Self::Graph6 => {
                let mut v = to_graph6(g);
                v.push(b'\n');
                v
            }
            Self::EdgeList => to_edge_list(g).into_bytes(),
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            Self::Graph6 => "g6",
            Self::EdgeList => "edges",
        }
    }
}

/// Reads a graph, guessing the format: text whose first line holds two
/// integers is an edge list, anything else is graph6.
pub fn read_graph(bytes: &[u8]) -> Result<Graph, ParseError> {
    let text = std::str::from_utf8(bytes).map_err(|e| ParseError::new(e.valid_up_to(), "input is not UTF-8"))?;
    let first = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
    let looks_like_edge_list = {
        let toks: Vec<_> = first.split_whitespace().collect();
        toks.len() == 2 && toks.iter().all(|t| t.parse::<usize>().is_ok())
    };
    if looks_like_edge_list {
        from_edge_list(text)
    } else {
        from_graph6(bytes)
    }
}

/// One-line record `family r s t n seed` from which a construction can be
/// regenerated exactly. Fields a family does not use are written as 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Descriptor {
    pub family: String,
    pub r: usize,
    pub s: usize,
    pub t: usize,
    pub n: usize,
    pub seed: u64,
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} {} {} {}", self.family, self.r, self.s, self.t, self.n, self.seed)
    }
}

impl FromStr for Descriptor {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        let line = s.trim();
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 6 {
            return Err(ParseError::new(0, format!("descriptor needs 6 fields, found {}", toks.len())));
        }
        let mut offset = 0;
        let mut offsets = Vec::new();
        for tok in &toks {
            let at = line[offset..].find(tok).map_or(offset, |i| offset + i);
            offsets.push(at);
            offset = at + tok.len();
        }
        let num = |i: usize| -> Result<u64, ParseError> {
            toks[i]
                .parse()
                .map_err(|_| ParseError::new(offsets[i], format!("invalid integer `{}`", toks[i])))
        };
        Ok(Self {
            family: toks[0].to_string(),
            r: num(1)? as usize,
            s: num(2)? as usize,
            t: num(3)? as usize,
            n: num(4)? as usize,
            seed: num(5)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_graph_is_one_byte() {
        assert_eq!(to_graph6(&Graph::new(0)), b"?");
        assert_eq!(from_graph6(b"?").unwrap(), Graph::new(0));
    }

    #[test]
    fn triangle_by_hand() {
        // n = 3 -> 'B'; bits x(0,1) x(0,2) x(1,2) = 111, padded 111000 = 56 -> 56 + 63 = 'w'
        let k3 = Graph::complete(3);
        assert_eq!(to_graph6(&k3), b"Bw");
        assert_eq!(from_graph6(b"Bw\n").unwrap(), k3);
        assert_eq!(from_graph6(b">>graph6<<Bw").unwrap(), k3);
    }

    #[test]
    fn matches_reference_strings() {
        // Edges a-c, a-e, b-d, d-e on 5 vertices encode as "DQc".
        let g = Graph::from_edges(5, &[(0, 2), (0, 4), (1, 3), (3, 4)]);
        assert_eq!(to_graph6_string(&g), "DQc");
    }

    #[test]
    fn large_headers_round_trip() {
        for n in [62, 63, 100] {
            let g = Graph::cycle(n);
            let enc = to_graph6(&g);
            if n > 62 {
                assert_eq!(enc[0], 126);
            }
            assert_eq!(from_graph6(&enc).unwrap(), g);
        }
    }

    #[test]
    fn decode_errors_carry_offsets() {
        let err = from_graph6(b"B").unwrap_err();
        assert_eq!(err.offset, 1);
        let err = from_graph6(b"B\x20").unwrap_err();
        assert_eq!(err.offset, 1);
        let err = from_graph6(b"Bwx").unwrap_err();
        assert_eq!(err.offset, 2);
        let err = from_graph6(b"Bx").unwrap_err();
        assert!(err.message.contains("padding"));
        let err = from_graph6(b"").unwrap_err();
        assert_eq!(err.offset, 0);
    }

    #[test]
    fn edge_list_round_trip_and_errors() {
        let g = Graph::cycle(5);
        let text = to_edge_list(&g);
        assert!(text.starts_with("5 5\n0 1\n"));
        assert_eq!(from_edge_list(&text).unwrap(), g);
        assert_eq!(read_graph(text.as_bytes()).unwrap(), g);
        assert_eq!(read_graph(b"DQc\n").unwrap().edge_count(), 4);

        assert_eq!(from_edge_list("3 1\n0 3\n").unwrap_err().offset, 4);
        assert!(from_edge_list("3 2\n0 1\n").is_err());
        assert!(from_edge_list("3 1\n0 1\n1 0\n").is_err());
        assert!(from_edge_list("3 2\n0 1\n1 0\n").unwrap_err().message.contains("duplicate"));
        assert!(from_edge_list("x 1\n").is_err());
    }

    #[test]
    fn descriptor_round_trip() {
        let d = Descriptor {
            family: "h_rst".into(),
            r: 2,
            s: 2,
            t: 1,
            n: 20,
            seed: 0,
        };
        let line = d.to_string();
        assert_eq!(line, "h_rst 2 2 1 20 0");
        assert_eq!(line.parse::<Descriptor>().unwrap(), d);
        assert_eq!("h_rst 2 2 x 20 0".parse::<Descriptor>().unwrap_err().offset, 10);
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (0..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * n.saturating_sub(1) / 2).prop_map(move |bits| {
                let mut g = Graph::new(n);
                let mut k = 0;
                for j in 1..n {
                    for i in 0..j {
                        if bits[k] {
                            g.add_edge(i, j);
                        }
                        k += 1;
                    }
                }
                g
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn graph6_round_trips(g in arb_graph(30)) {
            let enc = to_graph6(&g);
            prop_assert_eq!(from_graph6(&enc).unwrap(), g.clone());
            prop_assert_eq!(to_graph6(&from_graph6(&enc).unwrap()), enc);
            prop_assert_eq!(from_edge_list(&to_edge_list(&g)).unwrap(), g);
        }
    }
}
