//! Labeled simple graphs on a fixed number of vertices, under the Hamming
//! metric `d_H(G, G') = #{ i < j : e_ij ≠ e'_ij }`.
//!
//! # Encoding
//!
//! Vertices are numbered `1..=nv`. The `nv(nv-1)/2` edge slots are ordered
//! row-major over the upper triangle:
//!
//! ```text
//! (1,2), (1,3), ..., (1,nv), (2,3), ..., (nv-1,nv)
//! ```
//!
//! The text form is `nv:bits`, one character per slot in that order, e.g.
//! `4:100101` is the path `1-2, 2-3, 3-4`. Read as a binary numeral, the bit
//! string is the graph's index in [`HammingSpace`], so the canonical order of
//! a mean set is also the lexicographic order of its lines.
//!
//! # Graph sample files
//!
//! UTF-8 text, one graph per line. Blank lines and lines starting with `#`
//! are ignored; every graph must have the same `nv`.

use std::fmt;

use crate::error::{Error, Result};
use crate::metric::{MetricSpace, PointId};

/// Default maximum number of edge slots for full enumeration (`nv <= 7`).
pub const DEFAULT_ENUMERATION_CAP: usize = 21;

/// Number of edge slots `nv(nv-1)/2`.
pub fn slot_count(nv: usize) -> usize {
    nv * nv.saturating_sub(1) / 2
}

/// Slot of the edge between 1-based vertices `i < j`.
pub fn slot_of(nv: usize, i: usize, j: usize) -> usize {
    debug_assert!(1 <= i && i < j && j <= nv);
    (i - 1) * nv - (i - 1) * i / 2 + (j - i - 1)
}

/// A labeled simple graph: no loops, no multi-edges, no weights.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    nv: usize,
    /// Slot `k` lives in bit `k % 64` of word `k / 64`; bits past the last
    /// slot are zero.
    words: Vec<u64>,
}

impl Graph {
    pub fn empty(nv: usize) -> Self {
        Self {
            nv,
            words: vec![0; slot_count(nv).div_ceil(64)],
        }
    }

    pub fn complete(nv: usize) -> Self {
        let mut g = Self::empty(nv);
        for k in 0..slot_count(nv) {
            g.set_slot(k, true);
        }
        g
    }

    /// Graph with the given edges between 1-based vertices.
    pub fn from_edges(nv: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(nv);
        for &(a, b) in edges {
            let (i, j) = (a.min(b), a.max(b));
            if i == 0 || j > nv || i == j {
                return Err(Error::Domain(format!("invalid edge ({a}, {b}) for nv = {nv}")));
            }
            g.set_slot(slot_of(nv, i, j), true);
        }
        Ok(g)
    }

    pub fn nv(&self) -> usize {
        self.nv
    }

    pub fn slots(&self) -> usize {
        slot_count(self.nv)
    }

    pub fn has_slot(&self, k: usize) -> bool {
        self.words[k / 64] >> (k % 64) & 1 == 1
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.has_slot(slot_of(self.nv, i.min(j), i.max(j)))
    }

    fn set_slot(&mut self, k: usize, on: bool) {
        let (w, b) = (k / 64, k % 64);
        if on {
            self.words[w] |= 1 << b;
        } else {
            self.words[w] &= !(1 << b);
        }
    }

    pub fn edge_count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Edges as 1-based vertex pairs, in slot order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 1..=self.nv {
            for j in i + 1..=self.nv {
                if self.has_slot(slot_of(self.nv, i, j)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Index of the graph in [`HammingSpace`]: slot `k` is bit `slots-1-k`.
    pub fn index(&self) -> Option<usize> {
        let s = self.slots();
        if s >= usize::BITS as usize {
            return None;
        }
        Some((0..s).filter(|&k| self.has_slot(k)).fold(0, |acc, k| acc | 1 << (s - 1 - k)))
    }

    pub fn from_index(nv: usize, index: usize) -> Self {
        let s = slot_count(nv);
        let mut g = Self::empty(nv);
        for k in 0..s {
            if index >> (s - 1 - k) & 1 == 1 {
                g.set_slot(k, true);
            }
        }
        g
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.nv)?;
        for k in 0..self.slots() {
            f.write_str(if self.has_slot(k) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph({self})")
    }
}

/// Number of edge slots on which two graphs differ.
pub fn hamming_distance(g1: &Graph, g2: &Graph) -> Result<u64> {
    if g1.nv != g2.nv {
        return Err(Error::Domain(format!(
            "graphs have different vertex counts ({} and {})",
            g1.nv, g2.nv
        )));
    }
    Ok(g1
        .words
        .iter()
        .zip(&g2.words)
        .map(|(a, b)| (a ^ b).count_ones() as u64)
        .sum())
}

/// Parses a single `nv:bits` line.
pub fn parse_graph(text: &str) -> Result<Graph> {
    parse_line(text, 1)
}

pub fn format_graph(g: &Graph) -> String {
    g.to_string()
}

fn parse_line(line: &str, line_no: usize) -> Result<Graph> {
    let lead = line.len() - line.trim_start().len();
    let text = line.trim();
    let err = |column: usize, message: String| Error::Parse {
        line: line_no,
        column,
        message,
    };
    let Some(colon) = text.find(':') else {
        return Err(err(lead + text.len() + 1, "expected `nv:bits`".into()));
    };
    let nv_text = &text[..colon];
    let nv: usize = nv_text
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| err(lead + 1, format!("invalid vertex count {nv_text:?}")))?;
    let bits = &text[colon + 1..];
    let mut g = Graph::empty(nv);
    let expected = slot_count(nv);
    for (k, c) in bits.chars().enumerate() {
        match c {
            '0' | '1' if k < expected => g.set_slot(k, c == '1'),
            '0' | '1' => {}
            _ => {
                return Err(err(
                    lead + colon + 2 + k,
                    format!("expected 0 or 1, found {c:?}"),
                ))
            }
        }
    }
    let found = bits.chars().count();
    if found != expected {
        return Err(Error::Length {
            line: line_no,
            expected,
            found,
        });
    }
    Ok(g)
}

/// Parses a graph sample file. All graphs must share `nv`.
pub fn parse_graph_file(content: &str) -> Result<Vec<Graph>> {
    let mut graphs: Vec<Graph> = Vec::new();
    for (i, line) in content.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let g = parse_line(line, i + 1)?;
        if let Some(first) = graphs.first() {
            if first.nv != g.nv {
                return Err(Error::Parse {
                    line: i + 1,
                    column: line.len() - line.trim_start().len() + 1,
                    message: format!("vertex count {} differs from {}", g.nv, first.nv),
                });
            }
        }
        graphs.push(g);
    }
    Ok(graphs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GraphSpaceConfig {
    pub nv: usize,
    /// Largest edge-slot count for which full enumeration is allowed.
    pub enumeration_cap: usize,
}

impl GraphSpaceConfig {
    pub fn new(nv: usize) -> Self {
        Self {
            nv,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
        }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.enumeration_cap = cap;
        self
    }
}

/// The space `G_nv` of all labeled simple graphs on `nv` vertices.
///
/// Points are indices `0 .. 2^slots`; see [`Graph::index`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HammingSpace {
    nv: usize,
    slots: usize,
}

/// Enumerates `G_nv`, refusing when the slot count exceeds the cap.
pub fn enumerate_space(cfg: GraphSpaceConfig) -> Result<HammingSpace> {
    if cfg.nv == 0 {
        return Err(Error::Domain("nv must be at least 1".into()));
    }
    let slots = slot_count(cfg.nv);
    if slots > cfg.enumeration_cap {
        return Err(Error::CapExceeded {
            slots,
            cap: cfg.enumeration_cap,
        });
    }
    // The index must fit in a usize.
    if slots >= usize::BITS as usize - 1 {
        return Err(Error::CapExceeded {
            slots,
            cap: usize::BITS as usize - 2,
        });
    }
    Ok(HammingSpace { nv: cfg.nv, slots })
}

impl HammingSpace {
    pub fn nv(&self) -> usize {
        self.nv
    }

    pub fn graph(&self, p: PointId) -> Graph {
        Graph::from_index(self.nv, p.0)
    }

    pub fn point_of(&self, g: &Graph) -> Result<PointId> {
        if g.nv != self.nv {
            return Err(Error::Domain(format!(
                "graph has {} vertices, space has {}",
                g.nv, self.nv
            )));
        }
        Ok(PointId(g.index().expect("slot count checked at enumeration")))
    }
}

impl MetricSpace for HammingSpace {
    fn len(&self) -> usize {
        1 << self.slots
    }

    fn distance(&self, a: PointId, b: PointId) -> f64 {
        (a.0 ^ b.0).count_ones() as f64
    }

    fn bound(&self) -> f64 {
        self.slots as f64
    }

    fn lattice_denominator(&self) -> Option<u64> {
        Some(1)
    }

    fn lattice_distance(&self, a: PointId, b: PointId) -> Option<u64> {
        Some((a.0 ^ b.0).count_ones() as u64)
    }

    fn label(&self, p: PointId) -> String {
        self.graph(p).to_string()
    }
}

/// An explicit finite set of graphs under the Hamming metric, for
/// computations that never leave a given collection (restricted means on
/// vertex counts too large to enumerate).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphSet {
    nv: usize,
    graphs: Vec<Graph>,
}

impl GraphSet {
    /// Distinct graphs, sorted canonically.
    pub fn new(graphs: impl IntoIterator<Item = Graph>) -> Result<Self> {
        let mut graphs: Vec<Graph> = graphs.into_iter().collect();
        let Some(nv) = graphs.first().map(|g| g.nv) else {
            return Err(Error::Domain("a graph set needs at least one graph".into()));
        };
        if graphs.iter().any(|g| g.nv != nv) {
            return Err(Error::Domain("graphs in a set must share nv".into()));
        }
        graphs.sort_by(|a, b| canonical_cmp(a, b));
        graphs.dedup();
        Ok(Self { nv, graphs })
    }

    pub fn graph(&self, p: PointId) -> &Graph {
        &self.graphs[p.0]
    }

    pub fn graphs(&self) -> &[Graph] {
        &self.graphs
    }

    pub fn point_of(&self, g: &Graph) -> Option<PointId> {
        self.graphs
            .binary_search_by(|probe| canonical_cmp(probe, g))
            .ok()
            .map(PointId)
    }
}

/// Lexicographic order of the bit strings, i.e. numeric order of indices.
fn canonical_cmp(a: &Graph, b: &Graph) -> std::cmp::Ordering {
    a.nv.cmp(&b.nv).then_with(|| {
        (0..a.slots())
            .map(|k| a.has_slot(k).cmp(&b.has_slot(k)))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    })
}

impl MetricSpace for GraphSet {
    fn len(&self) -> usize {
        self.graphs.len()
    }

    fn distance(&self, a: PointId, b: PointId) -> f64 {
        self.lattice_distance(a, b).unwrap_or(0) as f64
    }

    fn bound(&self) -> f64 {
        slot_count(self.nv) as f64
    }

    fn lattice_denominator(&self) -> Option<u64> {
        Some(1)
    }

    fn lattice_distance(&self, a: PointId, b: PointId) -> Option<u64> {
        hamming_distance(&self.graphs[a.0], &self.graphs[b.0]).ok()
    }

    fn label(&self, p: PointId) -> String {
        self.graphs[p.0].to_string()
    }
}
