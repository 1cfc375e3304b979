//! Assembly of the complete spectrum up to a frequency cutoff, plus the
//! verification machinery: vertex flux balance, continuity, closed-form
//! inner products, an independent finite-difference oracle, and the lift of
//! adjacency eigenpairs onto the line graph.
//!
//! Entries are stored in coefficient form `(omega, C(e), B(e))` over the full
//! edge set, never as samples, so every residual here is evaluated
//! analytically. Modes whose frequencies agree to [`GROUP_TOL`] form one
//! degenerate group and are orthonormalized together under the edge-measure
//! L2 inner product.

use std::f64::consts::{PI, TAU};
use std::ops::Range;

use ndarray::{Array1, Array2};

use crate::edge_eigen::{pi_amplitudes, two_pi_amplitudes};
use crate::graph::{Graph, InteriorGraph};
use crate::numerics::{gram_schmidt, sym_eigenvalues_ascending, NumericsError};
use crate::vertex_eigen::{amplitude_phase, build_vertex_eigenfunctions};
use crate::Error;

/// Frequencies within this distance count as one degenerate group.
pub const GROUP_TOL: f64 = 1e-8;

/// Where an assembled entry came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Provenance {
    /// `lambda = 1` ladder: constant edge profiles at `2 pi n`.
    Constant,
    /// Adjacency eigenvector ladder, one entry per rung of `+-arccos(lambda)
    /// + 2 pi n`; `lambda = -1` covers the alternating sequence at `pi`.
    Vertex { lambda: f64 },
    /// Vertex-vanishing family at `pi + 2 pi n`.
    InteriorPi,
    /// Vertex-vanishing circulation family at `2 pi (n + 1)`.
    InteriorTwoPi,
}

impl Provenance {
    pub fn label(&self) -> &'static str {
        match self {
            Provenance::Constant => "constant",
            Provenance::Vertex { .. } => "vertex",
            Provenance::InteriorPi => "interior-pi",
            Provenance::InteriorTwoPi => "interior-2pi",
        }
    }

    /// Tie-break rank for sorting entries of equal frequency.
    fn rank(&self) -> u8 {
        match self {
            Provenance::Constant => 0,
            Provenance::Vertex { .. } => 1,
            Provenance::InteriorPi => 2,
            Provenance::InteriorTwoPi => 3,
        }
    }
}

/// One eigenfunction: `amplitudes[e] * cos(phases[e] + frequency * x)` on
/// every edge of the parent graph; the eigenvalue is `frequency^2`.
#[derive(Debug, Clone)]
pub struct EigenEntry {
    pub frequency: f64,
    pub provenance: Provenance,
    pub amplitudes: Vec<f64>,
    pub phases: Vec<f64>,
}

impl EigenEntry {
    /// Value at coordinate `x` on edge `e`.
    pub fn value(&self, e: usize, x: f64) -> f64 {
        self.amplitudes[e] * (self.phases[e] + self.frequency * x).cos()
    }

    /// Spatial derivative at coordinate `x` on edge `e`.
    pub fn gradient(&self, e: usize, x: f64) -> f64 {
        -self.frequency * self.amplitudes[e] * (self.phases[e] + self.frequency * x).sin()
    }
}

/// Uniform samples of a field, `resolution + 1` points per edge.
#[derive(Debug, Clone)]
pub struct FieldSample {
    pub resolution: usize,
    /// Per edge: `(x, value)` pairs at `x = i / resolution`.
    pub values: Vec<Vec<(f64, f64)>>,
}

/// The assembled spectrum of a graph up to `cutoff`, sorted ascending by
/// frequency, orthonormal under the edge-measure inner product.
#[derive(Debug, Clone)]
pub struct Eigensystem {
    pub graph: Graph,
    pub cutoff: f64,
    pub tol: f64,
    pub entries: Vec<EigenEntry>,
    pub orthonormalized: bool,
}

/// `int_0^1 cos(phi + alpha x) dx`, stable for all `alpha` via the cardinal
/// sine (the naive difference quotient cancels catastrophically for tiny
/// nonzero `alpha`).
fn cosine_mean(phi: f64, alpha: f64) -> f64 {
    sinc(alpha / 2.0) * (phi + alpha / 2.0).cos()
}

fn sinc(t: f64) -> f64 {
    if t == 0.0 {
        1.0
    } else {
        t.sin() / t
    }
}

/// `int_0^1 c1 cos(b1 + n1 x) c2 cos(b2 + n2 x) dx` by product-to-sum.
fn pair_integral(c1: f64, b1: f64, n1: f64, c2: f64, b2: f64, n2: f64) -> f64 {
    0.5 * c1 * c2 * (cosine_mean(b1 - b2, n1 - n2) + cosine_mean(b1 + b2, n1 + n2))
}

impl Eigensystem {
    /// Every eigenfunction with frequency in `[0, cutoff]`: all ladder rungs
    /// of every adjacency eigenvector (plus the constant and alternating
    /// specials on boundaryless graphs), the vertex-vanishing `pi` family at
    /// `pi + 2 pi n`, and the circulation family at `2 pi (n + 1)`. Entries
    /// come out sorted, degenerate-grouped, and orthonormalized.
    pub fn assemble(graph: &Graph, cutoff: f64, tol: f64) -> crate::Result<Self> {
        if !(cutoff > 0.0) {
            return Err(Error::CutoffNotPositive { cutoff });
        }
        let interior = graph.interior();
        let boundary_present = graph.boundary_count() > 0;
        let edge_total = graph.edge_count();

        // Parent-vertex values: zero at the boundary, eigenvector elsewhere.
        let mut to_interior = vec![usize::MAX; graph.vertex_count()];
        for v in 0..interior.vertex_count() {
            to_interior[interior.parent_vertex(v)] = v;
        }

        let mut entries: Vec<EigenEntry> = Vec::new();

        let sequences = build_vertex_eigenfunctions(&interior, boundary_present, tol)?;
        for sequence in &sequences {
            let p = &sequence.principal;
            // Principal amplitude/phase on every parent edge; pendant edges
            // interpolate down to zero at their boundary endpoint. Specials
            // (omega multiple of pi) occur only without a boundary, where no
            // pendant edges exist.
            let mut amplitudes = vec![0.0; edge_total];
            let mut phases = vec![0.0; edge_total];
            for e in 0..interior.edge_count() {
                amplitudes[interior.parent_edge(e)] = p.amplitudes[e];
                phases[interior.parent_edge(e)] = p.phases[e];
            }
            for (e, &(t, h)) in graph.edges().iter().enumerate() {
                if !graph.is_boundary(t) && !graph.is_boundary(h) {
                    continue;
                }
                let value = |v: usize| -> f64 {
                    if graph.is_boundary(v) {
                        0.0
                    } else {
                        p.vertex_values[to_interior[v]]
                    }
                };
                let (vt, vh) = (value(t), value(h));
                if vt.abs() <= tol && vh.abs() <= tol {
                    continue;
                }
                let (c, b) = amplitude_phase(vt, vh, p.omega)?;
                amplitudes[e] = c;
                phases[e] = b;
            }

            for rung in sequence.rungs(cutoff) {
                let provenance = if p.omega == 0.0 {
                    Provenance::Constant
                } else {
                    Provenance::Vertex { lambda: p.lambda }
                };
                entries.push(EigenEntry {
                    frequency: rung.frequency,
                    provenance,
                    amplitudes: amplitudes.clone(),
                    phases: phases.iter().map(|b| rung.phase_sign * b).collect(),
                });
            }
        }

        let limit = cutoff + 1e-9 * cutoff.max(1.0);
        for c in pi_amplitudes(graph, tol)? {
            let mut frequency = PI;
            while frequency <= limit {
                entries.push(interior_entry(frequency, Provenance::InteriorPi, &c));
                frequency += TAU;
            }
        }
        for c in two_pi_amplitudes(graph, tol)? {
            let mut frequency = TAU;
            while frequency <= limit {
                entries.push(interior_entry(frequency, Provenance::InteriorTwoPi, &c));
                frequency += TAU;
            }
        }

        entries.sort_by(|a, b| {
            a.frequency
                .total_cmp(&b.frequency)
                .then(a.provenance.rank().cmp(&b.provenance.rank()))
        });

        let mut system = Eigensystem {
            graph: graph.clone(),
            cutoff,
            tol,
            entries,
            orthonormalized: false,
        };
        system.orthonormalize();
        Ok(system)
    }

    /// Re-expresses each degenerate group in orthonormal coordinates; within
    /// a group the mode space at frequency `nu` is linear in the per-edge
    /// pair `(a, b) = (C cos B, C sin B)`, so Gram-Schmidt runs there.
    fn orthonormalize(&mut self) {
        let edge_total = self.graph.edge_count();
        let mut kept: Vec<EigenEntry> = Vec::with_capacity(self.entries.len());
        for group in self.degenerate_groups() {
            let nu = self.entries[group.start].frequency;
            let vectors: Vec<Vec<f64>> = self.entries[group.clone()]
                .iter()
                .map(|entry| {
                    let mut coords = Vec::with_capacity(2 * edge_total);
                    for e in 0..edge_total {
                        let c = entry.amplitudes[e];
                        let b = entry.phases[e];
                        coords.push(c * b.cos());
                        coords.push(c * b.sin());
                    }
                    coords
                })
                .collect();

            // Same-frequency L2 form: f = a cos(nu x) - b sin(nu x) per edge.
            let (i_cc, i_ss, i_sc) = if nu == 0.0 {
                (1.0, 0.0, 0.0)
            } else {
                let half_wave = (2.0 * nu).sin() / (4.0 * nu);
                (
                    0.5 + half_wave,
                    0.5 - half_wave,
                    nu.sin().powi(2) / (2.0 * nu),
                )
            };
            let inner = |x: &[f64], y: &[f64]| {
                let mut acc = 0.0;
                for e in 0..edge_total {
                    let (xa, xb) = (x[2 * e], x[2 * e + 1]);
                    let (ya, yb) = (y[2 * e], y[2 * e + 1]);
                    acc += xa * ya * i_cc + xb * yb * i_ss - (xa * yb + xb * ya) * i_sc;
                }
                acc
            };

            let result = gram_schmidt(&vectors, inner, GROUP_TOL);
            let mut basis = result.basis.into_iter();
            for (offset, index) in group.clone().enumerate() {
                if result.dropped.contains(&offset) {
                    continue;
                }
                let coords = basis.next().expect("one basis vector per survivor");
                let entry = &self.entries[index];
                let mut amplitudes = Vec::with_capacity(edge_total);
                let mut phases = Vec::with_capacity(edge_total);
                for e in 0..edge_total {
                    let (a, b) = (coords[2 * e], coords[2 * e + 1]);
                    amplitudes.push(a.hypot(b));
                    phases.push(b.atan2(a));
                }
                kept.push(EigenEntry {
                    frequency: entry.frequency,
                    provenance: entry.provenance,
                    amplitudes,
                    phases,
                });
            }
        }
        self.entries = kept;
        self.orthonormalized = true;
    }

    /// Maximal runs of consecutive entries whose neighboring frequencies
    /// differ by at most [`GROUP_TOL`].
    pub fn degenerate_groups(&self) -> Vec<Range<usize>> {
        let mut groups = Vec::new();
        let mut start = 0;
        for i in 1..=self.entries.len() {
            let chained = i < self.entries.len()
                && self.entries[i].frequency - self.entries[i - 1].frequency <= GROUP_TOL;
            if !chained {
                groups.push(start..i);
                start = i;
            }
        }
        groups
    }

    /// Exact cosine evaluation of one entry.
    pub fn evaluate(&self, entry: usize, edge: usize, x: f64) -> f64 {
        assert!(entry < self.entries.len(), "entry index out of range");
        assert!(edge < self.graph.edge_count(), "edge index out of range");
        assert!((0.0..=1.0).contains(&x), "edge coordinate outside [0, 1]");
        self.entries[entry].value(edge, x)
    }

    /// Largest over non-boundary vertices of the absolute sum of
    /// outward-pointing gradients of the entry's incident edge ends.
    pub fn edge_condition_residual(&self, entry: usize) -> f64 {
        let e = &self.entries[entry];
        let mut worst = 0.0f64;
        for v in self.graph.non_boundary_vertices() {
            let mut sum = 0.0;
            for &edge in self.graph.incident_edges(v) {
                let (tail, head) = self.graph.edges()[edge];
                if tail == v {
                    // Outward along +x.
                    sum += e.gradient(edge, 0.0);
                }
                if head == v {
                    // Outward along -x.
                    sum -= e.gradient(edge, 1.0);
                }
            }
            worst = worst.max(sum.abs());
        }
        worst
    }

    /// Largest spread of co-incident endpoint values over all vertices.
    pub fn continuity_residual(&self, entry: usize) -> f64 {
        let e = &self.entries[entry];
        let mut worst = 0.0f64;
        for v in 0..self.graph.vertex_count() {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for &edge in self.graph.incident_edges(v) {
                let (tail, _) = self.graph.edges()[edge];
                let value = if tail == v {
                    e.value(edge, 0.0)
                } else {
                    e.value(edge, 1.0)
                };
                lo = lo.min(value);
                hi = hi.max(value);
            }
            if hi > lo {
                worst = worst.max(hi - lo);
            }
        }
        worst
    }

    /// Largest absolute endpoint value at a boundary vertex (all must vanish).
    pub fn boundary_value_residual(&self, entry: usize) -> f64 {
        let e = &self.entries[entry];
        let mut worst = 0.0f64;
        for v in 0..self.graph.vertex_count() {
            if !self.graph.is_boundary(v) {
                continue;
            }
            for &edge in self.graph.incident_edges(v) {
                let (tail, _) = self.graph.edges()[edge];
                let x = if tail == v { 0.0 } else { 1.0 };
                worst = worst.max(e.value(edge, x).abs());
            }
        }
        worst
    }

    /// Edge-measure L2 inner product of two entries, in closed form.
    pub fn inner_product(&self, i: usize, j: usize) -> f64 {
        let (fi, fj) = (&self.entries[i], &self.entries[j]);
        (0..self.graph.edge_count())
            .map(|e| {
                pair_integral(
                    fi.amplitudes[e],
                    fi.phases[e],
                    fi.frequency,
                    fj.amplitudes[e],
                    fj.phases[e],
                    fj.frequency,
                )
            })
            .sum()
    }

    /// L2 inner product of the spatial derivatives; the derivative of each
    /// cosine is another cosine with a quarter-turn phase shift and the
    /// frequency as amplitude factor.
    pub fn derivative_inner_product(&self, i: usize, j: usize) -> f64 {
        let (fi, fj) = (&self.entries[i], &self.entries[j]);
        (0..self.graph.edge_count())
            .map(|e| {
                pair_integral(
                    fi.amplitudes[e] * fi.frequency,
                    fi.phases[e] + PI / 2.0,
                    fi.frequency,
                    fj.amplitudes[e] * fj.frequency,
                    fj.phases[e] + PI / 2.0,
                    fj.frequency,
                )
            })
            .sum()
    }

    /// `sum_e int_0^1 f(e, x) dx` of one entry, in closed form. Nonzero only
    /// for the constant mode, which makes total heat a conserved quantity on
    /// boundaryless graphs.
    pub fn entry_integral(&self, entry: usize) -> f64 {
        let e = &self.entries[entry];
        (0..self.graph.edge_count())
            .map(|edge| e.amplitudes[edge] * cosine_mean(e.phases[edge], e.frequency))
            .sum()
    }

    /// Uniform samples of one entry.
    pub fn sample_entry(&self, entry: usize, resolution: usize) -> FieldSample {
        let coefficients: Vec<f64> = (0..self.entries.len())
            .map(|i| if i == entry { 1.0 } else { 0.0 })
            .collect();
        self.sample_combination(&coefficients, resolution)
    }

    /// Uniform samples of the field `sum_n coefficients[n] * f_n`.
    pub fn sample_combination(&self, coefficients: &[f64], resolution: usize) -> FieldSample {
        assert_eq!(coefficients.len(), self.entries.len());
        assert!(resolution >= 2, "need at least two sample intervals");
        let values = (0..self.graph.edge_count())
            .map(|e| {
                (0..=resolution)
                    .map(|i| {
                        let x = i as f64 / resolution as f64;
                        let value = self
                            .entries
                            .iter()
                            .zip(coefficients)
                            .map(|(entry, &a)| a * entry.value(e, x))
                            .sum();
                        (x, value)
                    })
                    .collect()
            })
            .collect();
        FieldSample { resolution, values }
    }
}

fn interior_entry(frequency: f64, provenance: Provenance, c: &Array1<f64>) -> EigenEntry {
    EigenEntry {
        frequency,
        provenance,
        amplitudes: c.to_vec(),
        phases: vec![PI / 2.0; c.len()],
    }
}

/// Independent spectral oracle: lumped piecewise-linear discretization of the
/// metric graph with `m` segments per edge, flux-balance rows at non-boundary
/// vertices and deleted (pinned) boundary rows. Returns the `k` smallest
/// frequencies, ascending; accuracy is second order, with frequency error
/// about `nu^3 / (24 m^2)`.
pub fn fd_oracle(graph: &Graph, m: usize, k: usize) -> crate::Result<Vec<f64>> {
    if m < 8 {
        return Err(Error::SegmentsTooFew { m });
    }
    let h = 1.0 / m as f64;
    let nb = graph.non_boundary_vertices();
    let mut vertex_dof = vec![None; graph.vertex_count()];
    for (i, &v) in nb.iter().enumerate() {
        vertex_dof[v] = Some(i);
    }
    let chain = m - 1;
    let n = nb.len() + graph.edge_count() * chain;
    if n == 0 {
        return Ok(Vec::new());
    }

    let mut stiffness = Array2::<f64>::zeros((n, n));
    let mut mass = vec![0.0f64; n];
    for (e, &(tail, head)) in graph.edges().iter().enumerate() {
        let node = |i: usize| -> Option<usize> {
            if i == 0 {
                vertex_dof[tail]
            } else if i == m {
                vertex_dof[head]
            } else {
                Some(nb.len() + e * chain + (i - 1))
            }
        };
        for segment in 0..m {
            let p = node(segment);
            let q = node(segment + 1);
            for end in [p, q] {
                if let Some(idx) = end {
                    stiffness[[idx, idx]] += 1.0 / h;
                    mass[idx] += h / 2.0;
                }
            }
            if let (Some(pi), Some(qi)) = (p, q) {
                stiffness[[pi, qi]] -= 1.0 / h;
                stiffness[[qi, pi]] -= 1.0 / h;
            }
        }
    }

    // Symmetric similarity by the inverse square-root mass.
    let scale: Vec<f64> = mass.iter().map(|&w| 1.0 / w.sqrt()).collect();
    for i in 0..n {
        for j in 0..n {
            stiffness[[i, j]] *= scale[i] * scale[j];
        }
    }

    let eigenvalues = sym_eigenvalues_ascending(stiffness)?;
    Ok(eigenvalues
        .into_iter()
        .take(k)
        .map(|mu| mu.max(0.0).sqrt())
        .collect())
}

/// Lifts an eigenpair of the row-normalized interior adjacency onto arcs by
/// `h[(u, v)] = g[v]` and verifies it is an eigenpair of the row-normalized
/// line-graph adjacency at the same eigenvalue.
pub fn line_graph_lift(
    g: &InteriorGraph,
    lambda: f64,
    g_vec: &Array1<f64>,
    tol: f64,
) -> crate::Result<(f64, Array1<f64>)> {
    let rn = g.row_normalized()?;
    let input_residual = rn
        .dot(g_vec)
        .iter()
        .zip(g_vec.iter())
        .fold(0.0f64, |m, (ax, x)| m.max((ax - lambda * x).abs()));
    if input_residual > tol {
        return Err(NumericsError::ResidualTooLarge {
            residual: input_residual,
            tol,
        }
        .into());
    }

    let olg = g.oriented_line_graph();
    let arcs = olg.arcs();
    let h = Array1::from_iter(arcs.iter().map(|&(_, to)| g_vec[to]));
    let mut residual = 0.0f64;
    for (i, &(_, to)) in arcs.iter().enumerate() {
        // Row of the normalized line graph: average of h over all arcs
        // leaving the head, the reversal included.
        let mut sum = 0.0;
        for &edge in g.incident_edges(to) {
            for arc in [2 * edge, 2 * edge + 1] {
                if arcs[arc].0 == to {
                    sum += h[arc];
                }
            }
        }
        let row = sum / g.degree(to) as f64;
        residual = residual.max((row - lambda * h[i]).abs());
    }
    if residual > tol {
        return Err(NumericsError::ResidualTooLarge { residual, tol }.into());
    }
    Ok((lambda, h))
}
