use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::sequence::{fmt_symbols, Symbol};

/// Higher-block presentation of a finite-alphabet SFT: vertices are the
/// admissible `(M-1)`-blocks, edges the admissible `M`-blocks.
///
/// With `M = 1` there is a single vertex (the empty block) carrying one loop
/// per allowed symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionGraph {
    memory: usize,
    vertices: BTreeSet<Vec<Symbol>>,
    edges: BTreeSet<Vec<Symbol>>,
}

impl TransitionGraph {
    /// Builds the de Bruijn graph with every block containing a forbidden
    /// word removed, then prunes to the essential part.
    pub(crate) fn build(size: usize, forbidden: &[Vec<Symbol>]) -> Result<TransitionGraph> {
        let memory = forbidden.iter().map(Vec::len).max().unwrap_or(1).max(1);
        let admissible = |block: &[Symbol]| {
            !forbidden
                .iter()
                .any(|f| f.len() <= block.len() && block.windows(f.len()).any(|w| w == f.as_slice()))
        };
        let mut edges = BTreeSet::new();
        let mut block = vec![Symbol(0); memory];
        enumerate_blocks(size, &mut block, 0, &mut |b| {
            if admissible(b) {
                edges.insert(b.to_vec());
            }
        });
        let vertices: BTreeSet<Vec<Symbol>> = edges
            .iter()
            .flat_map(|e| [e[..memory - 1].to_vec(), e[1..].to_vec()])
            .collect();
        let graph = TransitionGraph {
            memory,
            vertices,
            edges,
        }
        .essentialize();
        if graph.vertices.is_empty() {
            return Err(Error::EmptySubshift);
        }
        Ok(graph)
    }

    /// Iteratively removes vertices without a predecessor or a successor.
    pub fn essentialize(&self) -> TransitionGraph {
        let mut vertices = self.vertices.clone();
        let mut edges = self.edges.clone();
        let m = self.memory;
        loop {
            edges.retain(|e| vertices.contains(&e[..m - 1]) && vertices.contains(&e[1..]));
            let has_out: BTreeSet<&[Symbol]> = edges.iter().map(|e| &e[..m - 1]).collect();
            let has_in: BTreeSet<&[Symbol]> = edges.iter().map(|e| &e[1..]).collect();
            let keep: BTreeSet<Vec<Symbol>> = vertices
                .iter()
                .filter(|v| has_out.contains(v.as_slice()) && has_in.contains(v.as_slice()))
                .cloned()
                .collect();
            if keep.len() == vertices.len() {
                break;
            }
            vertices = keep;
        }
        TransitionGraph {
            memory: m,
            vertices,
            edges,
        }
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn vertices(&self) -> &BTreeSet<Vec<Symbol>> {
        &self.vertices
    }

    /// Edges as `M`-blocks; the source is the first `M-1` symbols, the
    /// target the last `M-1`.
    pub fn edges(&self) -> &BTreeSet<Vec<Symbol>> {
        &self.edges
    }

    /// Labels of all length-`n` paths, i.e. the words of length `n` that
    /// occur as suffixes of points of the subshift.
    pub fn path_words(&self, n: usize) -> BTreeSet<Vec<Symbol>> {
        let m = self.memory;
        // paths ending at each vertex, tracked as full label windows
        let mut out = BTreeSet::new();
        if m == 1 {
            let symbols: Vec<Symbol> = self.edges.iter().map(|e| e[0]).collect();
            let mut block = vec![Symbol(0); n];
            enumerate_from(&symbols, &mut block, 0, &mut |b| {
                out.insert(b.to_vec());
            });
            return out;
        }
        // words of length >= M-1 are label sequences of vertex walks; shorter
        // words are suffixes of vertices
        if n < m {
            for v in &self.vertices {
                out.insert(v[v.len() - n..].to_vec());
            }
            for e in &self.edges {
                out.insert(e[e.len() - n..].to_vec());
            }
            return out;
        }
        let mut succ: BTreeMap<&[Symbol], Vec<Symbol>> = BTreeMap::new();
        for e in &self.edges {
            succ.entry(&e[..m - 1]).or_default().push(e[m - 1]);
        }
        let mut frontier: Vec<Vec<Symbol>> = self.vertices.iter().cloned().collect();
        while frontier[0].len() < n {
            let mut next = Vec::new();
            for w in &frontier {
                let tail = &w[w.len() - (m - 1)..];
                if let Some(cs) = succ.get(tail) {
                    for &c in cs {
                        let mut v = w.clone();
                        v.push(c);
                        next.push(v);
                    }
                }
            }
            frontier = next;
        }
        out.extend(frontier);
        out
    }
}

impl fmt::Display for TransitionGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "memory {}", self.memory)?;
        f.write_str("vertices")?;
        for v in &self.vertices {
            f.write_str(" ")?;
            if v.is_empty() {
                f.write_str("ε")?;
            } else {
                fmt_symbols(v, f)?;
            }
        }
        writeln!(f)?;
        f.write_str("edges")?;
        for e in &self.edges {
            f.write_str(" ")?;
            fmt_symbols(e, f)?;
        }
        writeln!(f)
    }
}

fn enumerate_blocks(size: usize, block: &mut Vec<Symbol>, i: usize, f: &mut dyn FnMut(&[Symbol])) {
    let symbols: Vec<Symbol> = (0..size as u32).map(Symbol).collect();
    enumerate_from(&symbols, block, i, f)
}

fn enumerate_from(symbols: &[Symbol], block: &mut Vec<Symbol>, i: usize, f: &mut dyn FnMut(&[Symbol])) {
    if i == block.len() {
        f(block);
        return;
    }
    for &s in symbols {
        block[i] = s;
        enumerate_from(symbols, block, i + 1, f);
    }
}
