use super::{Graph, GraphError, VertexId};

fn err(offset: usize, reason: impl Into<String>) -> GraphError {
    GraphError::Graph6 { offset, reason: reason.into() }
}

/// Vertices are written in id order as `0..n`.
pub(super) fn encode(g: &Graph) -> String {
    let n = g.n();
    let mut out: Vec<u8> = Vec::new();
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
    let mut bits = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for j in 1..n {
        for i in 0..j {
            let (a, b) = (g.vertex_at(i), g.vertex_at(j));
            bits.push(g.edge_between(a, b).is_some());
        }
    }
    for chunk in bits.chunks(6) {
        let mut x = 0u8;
        for k in 0..6 {
            x <<= 1;
            if chunk.get(k).copied().unwrap_or(false) {
                x |= 1;
            }
        }
        out.push(x + 63);
    }
    String::from_utf8(out).unwrap()
}

pub(super) fn decode(s: &str) -> Result<Graph, GraphError> {
    let s = s.trim_end_matches(['\n', '\r']);
    let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
    let bytes = s.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(err(i, format!("byte {b} outside 63..=126")));
        }
    }
    if bytes.is_empty() {
        return Err(err(0, "empty input"));
    }
    let (n, mut pos) = if bytes[0] != 126 {
        (bytes[0] as usize - 63, 1)
    } else if bytes.len() >= 2 && bytes[1] == 126 {
        if bytes.len() < 8 {
            return Err(err(bytes.len(), "truncated 8-byte order"));
        }
        let n = bytes[2..8].iter().fold(0usize, |acc, &b| (acc << 6) | (b as usize - 63));
        (n, 8)
    } else {
        if bytes.len() < 4 {
            return Err(err(bytes.len(), "truncated 4-byte order"));
        }
        let n = bytes[1..4].iter().fold(0usize, |acc, &b| (acc << 6) | (b as usize - 63));
        (n, 4)
    };
    let nbits = n * n.saturating_sub(1) / 2;
    let need = nbits.div_ceil(6);
    if bytes.len() - pos != need {
        return Err(err(bytes.len().min(pos + need), format!("expected {need} adjacency bytes, found {}", bytes.len() - pos)));
    }
    let mut edges = Vec::new();
    let mut k = 0usize;
    'outer: for j in 1..n {
        for i in 0..j {
            let byte = bytes[pos + k / 6] - 63;
            if byte >> (5 - k % 6) & 1 == 1 {
                edges.push((i as VertexId, j as VertexId));
            }
            k += 1;
            if k == nbits {
                break 'outer;
            }
        }
    }
    pos += need;
    // padding bits must be zero
    if nbits % 6 != 0 {
        let last = bytes[pos - 1] - 63;
        let pad = 6 - nbits % 6;
        if last & ((1 << pad) - 1) != 0 {
            return Err(err(pos - 1, "nonzero padding bits"));
        }
    }
    Graph::with_order(n, &edges)
}
