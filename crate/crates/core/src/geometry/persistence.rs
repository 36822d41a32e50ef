//! One-dimensional persistent homology over Z/2 for filtered complexes of
//! dimension at most 2.
//!
//! The boundary matrix is reduced column by column with the clearing (twist)
//! optimization: triangle columns are reduced first and every edge that shows
//! up as a pivot is known to be positive, so its column is never reduced.

use crate::error::{HtgError, Result};

/// A filtered simplicial complex with simplices up to dimension 2. Vertex
/// `i` enters at `vertices[i]`; edges and triangles list their vertices and
/// entry values.
#[derive(Debug, Clone, PartialEq)]
pub struct FilteredComplex {
    vertices: Vec<f64>,
    edges: Vec<([usize; 2], f64)>,
    triangles: Vec<([usize; 3], f64)>,
}

impl FilteredComplex {
    /// Checks that every face of every simplex is present and enters no
    /// later than the simplex itself. Vertex lists are normalized to
    /// ascending order.
    pub fn new(
        vertices: Vec<f64>,
        edges: Vec<([usize; 2], f64)>,
        triangles: Vec<([usize; 3], f64)>,
    ) -> Result<Self> {
        let n = vertices.len();
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(HtgError::NonFiniteData("vertex filtration values".into()));
        }
        let mut edge_value = std::collections::HashMap::with_capacity(edges.len());
        let mut norm_edges = Vec::with_capacity(edges.len());
        for ([a, b], v) in edges {
            let (a, b) = (a.min(b), a.max(b));
            if a == b || b >= n || !v.is_finite() {
                return Err(HtgError::SchemaError(format!(
                    "invalid edge ({a}, {b}) at {v}"
                )));
            }
            if v < vertices[a] || v < vertices[b] {
                return Err(HtgError::SchemaError(format!(
                    "edge ({a}, {b}) enters before its vertices"
                )));
            }
            if edge_value.insert((a, b), v).is_some() {
                return Err(HtgError::SchemaError(format!("duplicate edge ({a}, {b})")));
            }
            norm_edges.push(([a, b], v));
        }
        let mut norm_tris = Vec::with_capacity(triangles.len());
        let mut seen = std::collections::HashSet::new();
        for (mut t, v) in triangles {
            t.sort_unstable();
            if t[0] == t[1] || t[1] == t[2] || !v.is_finite() || !seen.insert(t) {
                return Err(HtgError::SchemaError(format!(
                    "invalid or duplicate triangle {t:?}"
                )));
            }
            for face in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
                match edge_value.get(&face) {
                    Some(&e) if e <= v => {}
                    _ => {
                        return Err(HtgError::SchemaError(format!(
                            "triangle {t:?} lacks face {face:?} or enters before it"
                        )))
                    }
                }
            }
            norm_tris.push((t, v));
        }
        Ok(FilteredComplex {
            vertices,
            edges: norm_edges,
            triangles: norm_tris,
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> &[([usize; 2], f64)] {
        &self.edges
    }

    pub fn triangles(&self) -> &[([usize; 3], f64)] {
        &self.triangles
    }

    pub fn vertices(&self) -> &[f64] {
        &self.vertices
    }
}

/// Birth/death pairs of one-dimensional classes, as indices into the
/// complex's edge and triangle lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H1Pairs {
    /// (positive edge, triangle that kills it)
    pub finite: Vec<(usize, usize)>,
    /// Positive edges never killed.
    pub essential: Vec<usize>,
}

fn lex_order<const K: usize>(items: &[([usize; K], f64)]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&i, &j| {
        items[i]
            .1
            .total_cmp(&items[j].1)
            .then_with(|| items[i].0.cmp(&items[j].0))
    });
    order
}

/// Adds `src` into `dst` over Z/2; both are ascending index lists.
fn add_column(dst: &mut Vec<usize>, src: &[usize]) {
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < dst.len() && j < src.len() {
        match dst[i].cmp(&src[j]) {
            std::cmp::Ordering::Less => {
                out.push(dst[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(src[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&dst[i..]);
    out.extend_from_slice(&src[j..]);
    *dst = out;
}

/// Reduces `columns` in order; returns, for each column, its pivot row
/// (`None` when the column reduces to zero). `skip[c]` marks cleared columns.
fn reduce(columns: &mut [Vec<usize>], n_rows: usize, skip: &[bool]) -> Vec<Option<usize>> {
    let mut pivot_owner: Vec<Option<usize>> = vec![None; n_rows];
    let mut lows = vec![None; columns.len()];
    for c in 0..columns.len() {
        if skip[c] {
            columns[c].clear();
            continue;
        }
        while let Some(&low) = columns[c].last() {
            match pivot_owner[low] {
                Some(other) => {
                    let src = std::mem::take(&mut columns[other]);
                    add_column(&mut columns[c], &src);
                    columns[other] = src;
                }
                None => {
                    pivot_owner[low] = Some(c);
                    lows[c] = Some(low);
                    break;
                }
            }
        }
    }
    lows
}

/// Persistence pairs of H1 for `complex`.
pub fn h1_pairs(complex: &FilteredComplex) -> H1Pairs {
    let vorder = lex_order(
        &complex
            .vertices
            .iter()
            .enumerate()
            .map(|(i, &v)| ([i], v))
            .collect::<Vec<_>>(),
    );
    let mut vrank = vec![0; complex.vertices.len()];
    for (r, &v) in vorder.iter().enumerate() {
        vrank[v] = r;
    }
    let eorder = lex_order(&complex.edges);
    let mut erank = std::collections::HashMap::with_capacity(complex.edges.len());
    for (r, &e) in eorder.iter().enumerate() {
        erank.insert(complex.edges[e].0, r);
    }
    let torder = lex_order(&complex.triangles);

    // triangles first
    let mut tcols: Vec<Vec<usize>> = torder
        .iter()
        .map(|&t| {
            let [a, b, c] = complex.triangles[t].0;
            let mut col = vec![erank[&[a, b]], erank[&[a, c]], erank[&[b, c]]];
            col.sort_unstable();
            col
        })
        .collect();
    let no_skip = vec![false; tcols.len()];
    let tlows = reduce(&mut tcols, eorder.len(), &no_skip);
    let mut killed = vec![false; eorder.len()];
    let mut finite = Vec::new();
    for (tr, low) in tlows.iter().enumerate() {
        if let Some(er) = *low {
            killed[er] = true;
            finite.push((eorder[er], torder[tr]));
        }
    }

    // then edges, skipping the ones already known to be positive
    let mut ecols: Vec<Vec<usize>> = eorder
        .iter()
        .map(|&e| {
            let [a, b] = complex.edges[e].0;
            let mut col = vec![vrank[a], vrank[b]];
            col.sort_unstable();
            col
        })
        .collect();
    let elows = reduce(&mut ecols, vorder.len(), &killed);
    let essential = (0..eorder.len())
        .filter(|&er| !killed[er] && elows[er].is_none())
        .map(|er| eorder[er])
        .collect();
    H1Pairs { finite, essential }
}

/// H1 intervals `[birth, death)` on the filtration range `[0, alpha_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PersistenceBarcode {
    pub alpha_max: f64,
    pub intervals: Vec<(f64, f64)>,
}

impl PersistenceBarcode {
    pub fn empty(alpha_max: f64) -> Self {
        PersistenceBarcode {
            alpha_max,
            intervals: Vec::new(),
        }
    }
}

/// One-dimensional barcode: finite pairs become `[edge, triangle)`, essential
/// classes die at `alpha_max`; zero-length intervals are dropped. Intervals
/// are sorted by (birth, death).
pub fn persistence_h1(complex: &FilteredComplex, alpha_max: f64) -> PersistenceBarcode {
    let pairs = h1_pairs(complex);
    let clip = |v: f64| v.clamp(0.0, alpha_max);
    let mut intervals: Vec<(f64, f64)> = pairs
        .finite
        .iter()
        .map(|&(e, t)| (clip(complex.edges[e].1), clip(complex.triangles[t].1)))
        .chain(
            pairs
                .essential
                .iter()
                .map(|&e| (clip(complex.edges[e].1), alpha_max)),
        )
        .filter(|(b, d)| d > b)
        .collect();
    intervals.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
    PersistenceBarcode {
        alpha_max,
        intervals,
    }
}
