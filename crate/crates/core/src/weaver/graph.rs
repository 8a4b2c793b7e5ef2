//! Weighted graphs, their Laplacians and the isotropic edge vectors
//! `u_e = L^{−1/2} √w_e (e_a − e_b)` on the complement of the constant vector.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{PartitionReport, WeaverInstance};
use crate::error::{Error, Result};
use crate::linalg::{isotropic_normalizer, ComplexMatrix, ComplexVector, HermitianMatrix};
use crate::math::sqrt;
use crate::policy::NumericPolicy;

/// An undirected graph on vertices `0..n` with positive edge weights.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        for &(a, b, w) in &edges {
            if a >= n || b >= n {
                return Err(Error::IndexOutOfRange(format!(
                    "edge ({a}, {b}) in a graph on {n} vertices"
                )));
            }
            if a == b {
                return Err(Error::InvalidParameter(format!("self-loop at vertex {a}")));
            }
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::InvalidParameter(format!("edge ({a}, {b}) has weight {w}")));
            }
        }
        Ok(Self { n, edges })
    }

    /// The complete graph with unit weights.
    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b, 1.0))).collect();
        Self { n, edges }
    }

    /// Parses `a b weight` lines (weight optional, default 1) with 0-indexed
    /// vertices. Blank lines and `#` comments are skipped; the vertex count is
    /// one more than the largest index.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |what: &str| Error::InvalidParameter(format!("line {}: {what}: {line:?}", lineno + 1));
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() < 2 || fields.len() > 3 {
                return Err(bad("expected `a b [weight]`"));
            }
            let a: usize = fields[0].parse().map_err(|_| bad("bad vertex"))?;
            let b: usize = fields[1].parse().map_err(|_| bad("bad vertex"))?;
            let w: f64 = match fields.get(2) {
                Some(s) => s.parse().map_err(|_| bad("bad weight"))?,
                None => 1.0,
            };
            edges.push((a, b, w));
        }
        let n = edges.iter().map(|&(a, b, _)| a.max(b) + 1).max().unwrap_or(0);
        Self::new(n, edges)
    }

    /// One `a b weight` line per edge.
    pub fn to_edge_list(&self) -> String {
        self.edges.iter().map(|(a, b, w)| format!("{a} {b} {w}\n")).collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    /// The subgraph on the listed edges, with weights multiplied by `scale`.
    pub fn subgraph(&self, edges: &[usize], scale: f64) -> Result<Self> {
        let picked = edges
            .iter()
            .map(|&e| {
                self.edges
                    .get(e)
                    .map(|&(a, b, w)| (a, b, w * scale))
                    .ok_or_else(|| Error::IndexOutOfRange(format!("edge {e} of {}", self.edges.len())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.n, picked)
    }

    /// Number of connected components.
    pub fn components(&self) -> usize {
        let mut adj = vec![Vec::new(); self.n];
        for &(a, b, _) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; self.n];
        let mut count = 0;
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            count += 1;
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        count
    }

    /// `L = Σ w (e_a − e_b)(e_a − e_b)ᵀ`.
    pub fn laplacian(&self) -> Vec<f64> {
        let n = self.n;
        let mut l = vec![0.0; n * n];
        for &(a, b, w) in &self.edges {
            l[a * n + a] += w;
            l[b * n + b] += w;
            l[a * n + b] -= w;
            l[b * n + a] -= w;
        }
        l
    }

    fn require_connected(&self) -> Result<()> {
        match self.components() {
            1 => Ok(()),
            components => Err(Error::Disconnected { components }),
        }
    }
}

/// Orthonormal basis of `1^⊥ ⊂ ℝⁿ` from Gram–Schmidt on `e_1 − e_j`, as the
/// rows of an `n × (n−1)` matrix stored row-major.
fn complement_basis(n: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n.saturating_sub(1));
    for j in 1..n {
        let mut v = vec![0.0; n];
        v[0] = 1.0;
        v[j] = -1.0;
        for b in &basis {
            let dot: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= dot * y);
        }
        let norm = sqrt(v.iter().map(|x| x * x).sum());
        v.iter_mut().for_each(|x| *x /= norm);
        basis.push(v);
    }
    basis
}

/// `Bᵀ L B` for the complement basis `B`.
fn reduced_laplacian(g: &Graph, basis: &[Vec<f64>]) -> HermitianMatrix {
    let n = g.n;
    let l = g.laplacian();
    let k = basis.len();
    let lb: Vec<Vec<f64>> = basis
        .iter()
        .map(|b| (0..n).map(|r| (0..n).map(|c| l[r * n + c] * b[c]).sum()).collect())
        .collect();
    HermitianMatrix::symmetrized(ComplexMatrix::from_fn(k, k, |i, j| {
        basis[i].iter().zip(&lb[j]).map(|(x, y)| x * y).sum::<f64>().into()
    }))
}

/// The isotropic edge vectors of a graph and the basis they are expressed in.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphInstance {
    /// Vector `e` belongs to edge `e` of the graph.
    pub instance: WeaverInstance,
    /// Orthonormal basis of the complement of the constant vector; vector
    /// coordinates refer to it.
    pub basis: Vec<Vec<f64>>,
}

/// `u_e = (Bᵀ L B)^{−1/2} Bᵀ √w_e (e_a − e_b)` in dimension `n − 1`. Their
/// squared norms are the leverage scores and sum to `n − 1`.
pub fn gen_from_graph(g: &Graph, policy: &NumericPolicy) -> Result<GraphInstance> {
    if g.n < 2 {
        return Err(Error::InvalidParameter("a graph needs at least two vertices".into()));
    }
    g.require_connected()?;
    let basis = complement_basis(g.n);
    let w = isotropic_normalizer(&reduced_laplacian(g, &basis), policy)?;
    let vectors = g
        .edges
        .iter()
        .map(|&(a, b, weight)| {
            let s = sqrt(weight);
            let x: Vec<f64> = basis.iter().map(|row| s * (row[a] - row[b])).collect();
            w.matrix().mul_vec(&ComplexVector::from_real(&x))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GraphInstance {
        instance: WeaverInstance::new(g.n - 1, vectors, None)?,
        basis,
    })
}

/// `(κ₁, κ₂)`, the extreme generalised eigenvalues of `(L_G, L_H)` on `1^⊥`:
/// `κ₁ xᵀL_H x ≤ xᵀL_G x ≤ κ₂ xᵀL_H x`.
pub fn spectral_approx_check(g: &Graph, h: &Graph, policy: &NumericPolicy) -> Result<(f64, f64)> {
    if g.n != h.n {
        return Err(Error::DimensionMismatch {
            expected: g.n,
            found: h.n,
        });
    }
    g.require_connected()?;
    h.require_connected()?;
    let basis = complement_basis(g.n);
    let lg = reduced_laplacian(g, &basis);
    let w = isotropic_normalizer(&reduced_laplacian(h, &basis), policy)?;
    let pencil = w.matrix().matmul(lg.matrix())?.matmul(w.matrix())?;
    let ev = HermitianMatrix::symmetrized(pencil).eigenvalues();
    Ok((ev[0], ev[ev.len() - 1]))
}

/// Spectral comparison of `G` with each part of an edge partition, weights
/// scaled by `r`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PartSpectrum {
    pub part: usize,
    pub components: usize,
    /// `None` when the part's subgraph is disconnected.
    pub kappa: Option<(f64, f64)>,
}

/// For a partition of `gen_from_graph(g)`, compares `G` against each
/// `r · H_k`. When `H_k` is connected, `κ₁ = 1/(r‖Σ_{e∈A_k} u_e u_e*‖)`.
pub fn spectral_cross_check(g: &Graph, report: &PartitionReport, policy: &NumericPolicy) -> Result<Vec<PartSpectrum>> {
    report
        .parts
        .iter()
        .enumerate()
        .map(|(part, edges)| {
            let h = g.subgraph(edges, report.r as f64)?;
            let components = h.components();
            let kappa = if components == 1 {
                Some(spectral_approx_check(g, &h, policy)?)
            } else {
                None
            };
            Ok(PartSpectrum {
                part,
                components,
                kappa,
            })
        })
        .collect()
}
