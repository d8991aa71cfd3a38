//! Edge-list text and binary CSR file formats.
//!
//! Binary layout (all little-endian): magic `TOTM`, `u32` version, `u32`
//! flags (bit 0 directed, bit 1 weighted, bit 2 64-bit vertex ids, bit 3
//! 64-bit edge indices), `u64` vertex count, `u64` edge count, then
//! `row_offsets`, `column_targets` and the optional `f32` weights.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{CsrGraph, VertexId};
use crate::error::{Error, Result};

pub const BINARY_MAGIC: &[u8; 4] = b"TOTM";
pub const BINARY_VERSION: u32 = 1;

const FLAG_DIRECTED: u32 = 1;
const FLAG_WEIGHTED: u32 = 1 << 1;
const FLAG_VID64: u32 = 1 << 2;
const FLAG_EID64: u32 = 1 << 3;

/// Parses a whitespace-separated edge list.
///
/// `# nodes: N` in a comment fixes the vertex count; otherwise it is one more
/// than the largest id seen. Undirected input is materialized in both directions.
pub fn load_edge_list(path: impl AsRef<Path>, directed: bool, weighted: bool) -> Result<CsrGraph> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(BufReader::new(file), directed, weighted).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

pub(crate) fn parse_edge_list(
    reader: impl BufRead,
    directed: bool,
    weighted: bool,
) -> Result<CsrGraph> {
    let mut declared: Option<usize> = None;
    let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
    let mut weights: Vec<f32> = Vec::new();
    let mut max_id: Option<u64> = None;

    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::io("<edge list>", e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some(n) = comment.trim().strip_prefix("nodes:") {
                let n = n.trim().parse::<usize>().map_err(|e| Error::Parse {
                    line: lineno,
                    message: format!("bad node count: {e}"),
                })?;
                declared = Some(n);
            }
            continue;
        }
        let mut cols = trimmed.split_whitespace();
        let mut id = |name: &str| -> Result<u64> {
            let tok = cols.next().ok_or_else(|| Error::Parse {
                line: lineno,
                message: format!("missing {name}"),
            })?;
            tok.parse::<u64>().map_err(|e| Error::Parse {
                line: lineno,
                message: format!("bad {name} {tok:?}: {e}"),
            })
        };
        let src = id("source")?;
        let dst = id("target")?;
        let weight = match cols.next() {
            Some(tok) => Some(tok.parse::<f32>().map_err(|e| Error::Parse {
                line: lineno,
                message: format!("bad weight {tok:?}: {e}"),
            })?),
            None => None,
        };
        if cols.next().is_some() {
            return Err(Error::Parse {
                line: lineno,
                message: "too many columns".into(),
            });
        }
        if weighted {
            let w = weight.ok_or_else(|| Error::Parse {
                line: lineno,
                message: "missing weight".into(),
            })?;
            if !(w >= 0.0) {
                return Err(Error::validation(format!(
                    "line {lineno}: negative weight {w}"
                )));
            }
            weights.push(w);
        }
        if src >= VertexId::MAX as u64 || dst >= VertexId::MAX as u64 {
            return Err(Error::validation(format!(
                "line {lineno}: vertex id exceeds 32-bit range"
            )));
        }
        if let Some(n) = declared {
            if src >= n as u64 || dst >= n as u64 {
                return Err(Error::validation(format!(
                    "line {lineno}: vertex id >= declared vertex count {n}"
                )));
            }
        }
        max_id = Some(max_id.unwrap_or(0).max(src).max(dst));
        edges.push((src as VertexId, dst as VertexId));
    }

    let vertex_count = match declared {
        Some(n) => n,
        None => max_id.map_or(0, |m| m as usize + 1),
    };
    if let Some(m) = max_id {
        if m as usize >= vertex_count {
            return Err(Error::validation(format!(
                "vertex id {m} >= declared vertex count {vertex_count}"
            )));
        }
    }

    let weights = weighted.then_some(weights);
    if directed {
        CsrGraph::from_edges(vertex_count, edges, weights, true)
    } else {
        let mut both = Vec::with_capacity(edges.len() * 2);
        for &(u, v) in &edges {
            both.push((u, v));
            both.push((v, u));
        }
        let weights = weights.map(|w| w.iter().flat_map(|&x| [x, x]).collect());
        CsrGraph::from_edges(vertex_count, both, weights, false)
    }
}

/// Writes `g` as an edge list that [`load_edge_list`] reads back unchanged
/// (as a directed graph).
pub fn write_edge_list(g: &CsrGraph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let io = |e| Error::io(path, e);
    let mut out = BufWriter::new(File::create(path).map_err(io)?);
    writeln!(out, "# nodes: {}", g.vertex_count()).map_err(io)?;
    let weights = g.weights();
    for (i, (u, v)) in g.edges().enumerate() {
        match weights {
            Some(w) => writeln!(out, "{u} {v} {}", w[i]),
            None => writeln!(out, "{u} {v}"),
        }
        .map_err(io)?;
    }
    out.flush().map_err(io)
}

/// Writes the binary CSR format.
pub fn write_binary(g: &CsrGraph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let io = |e| Error::io(path, e);
    let mut out = BufWriter::new(File::create(path).map_err(io)?);
    out.write_all(&encode_binary(g)).map_err(io)?;
    out.flush().map_err(io)
}

pub(crate) fn encode_binary(g: &CsrGraph) -> Vec<u8> {
    let eid64 = g.edge_count() as u64 >= u32::MAX as u64;
    let mut flags = 0;
    if g.is_directed() {
        flags |= FLAG_DIRECTED;
    }
    if g.is_weighted() {
        flags |= FLAG_WEIGHTED;
    }
    if eid64 {
        flags |= FLAG_EID64;
    }
    let eid_width = if eid64 { 8 } else { 4 };
    let mut buf = Vec::with_capacity(
        28 + eid_width * (g.vertex_count() + 1) + 8 * g.edge_count(),
    );
    buf.extend_from_slice(BINARY_MAGIC);
    buf.extend_from_slice(&BINARY_VERSION.to_le_bytes());
    buf.extend_from_slice(&flags.to_le_bytes());
    buf.extend_from_slice(&(g.vertex_count() as u64).to_le_bytes());
    buf.extend_from_slice(&(g.edge_count() as u64).to_le_bytes());
    for &o in g.row_offsets() {
        if eid64 {
            buf.extend_from_slice(&(o as u64).to_le_bytes());
        } else {
            buf.extend_from_slice(&(o as u32).to_le_bytes());
        }
    }
    for &t in g.targets() {
        buf.extend_from_slice(&t.to_le_bytes());
    }
    if let Some(w) = g.weights() {
        for &x in w {
            buf.extend_from_slice(&x.to_le_bytes());
        }
    }
    buf
}

/// Reads the binary CSR format.
pub fn read_binary(path: impl AsRef<Path>) -> Result<CsrGraph> {
    let path = path.as_ref();
    let mut bytes = Vec::new();
    File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| Error::io(path, e))?;
    decode_binary(&bytes)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| Error::validation("binary graph file is truncated"))?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn word(&mut self, wide: bool) -> Result<u64> {
        if wide {
            self.u64()
        } else {
            self.u32().map(u64::from)
        }
    }
}

pub(crate) fn decode_binary(bytes: &[u8]) -> Result<CsrGraph> {
    let mut cur = Cursor { bytes, pos: 0 };
    if cur.take(4)? != BINARY_MAGIC {
        return Err(Error::validation("not a binary CSR file (bad magic)"));
    }
    let version = cur.u32()?;
    if version != BINARY_VERSION {
        return Err(Error::validation(format!("unsupported format version {version}")));
    }
    let flags = cur.u32()?;
    let vid64 = flags & FLAG_VID64 != 0;
    let eid64 = flags & FLAG_EID64 != 0;
    let vertex_count = cur.u64()? as usize;
    let edge_count = cur.u64()? as usize;
    if vertex_count >= VertexId::MAX as usize {
        return Err(Error::validation("graphs with 2^32 or more vertices are not supported"));
    }
    let row_offsets = (0..=vertex_count)
        .map(|_| cur.word(eid64).map(|x| x as usize))
        .collect::<Result<Vec<_>>>()?;
    let targets = (0..edge_count)
        .map(|_| {
            let t = cur.word(vid64)?;
            VertexId::try_from(t).map_err(|_| Error::validation("vertex id exceeds 32 bits"))
        })
        .collect::<Result<Vec<_>>>()?;
    let weights = if flags & FLAG_WEIGHTED != 0 {
        Some(
            (0..edge_count)
                .map(|_| cur.u32().map(f32::from_bits))
                .collect::<Result<Vec<_>>>()?,
        )
    } else {
        None
    };
    if cur.pos != bytes.len() {
        return Err(Error::validation("trailing bytes after binary graph"));
    }
    CsrGraph::from_parts(row_offsets, targets, weights, flags & FLAG_DIRECTED != 0)
}

/// Reads either format, sniffing the binary magic.
pub fn read_graph(path: impl AsRef<Path>, directed: bool, weighted: bool) -> Result<CsrGraph> {
    let path = path.as_ref();
    let mut head = [0u8; 4];
    let is_binary = File::open(path)
        .and_then(|mut f| f.read(&mut head))
        .map_err(|e| Error::io(path, e))?
        == 4
        && &head == BINARY_MAGIC;
    if is_binary {
        read_binary(path)
    } else {
        load_edge_list(path, directed, weighted)
    }
}
