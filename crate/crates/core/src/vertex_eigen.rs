//! Vertex-supported modes: edgewise sinusoids whose vertex restriction is an
//! eigenvector of the row-normalized interior adjacency.
//!
//! An eigenvalue `lambda` in `(-1, 1)` yields the principal frequency
//! `omega = arccos(lambda)`; on each edge the mode is
//! `C(e) cos(B(e) + omega x)` interpolating the eigenvector values at the two
//! endpoints. `lambda = 1` (constant vector) and `lambda = -1` (sign
//! alternation on a 2-colorable interior) degenerate to pure-cosine profiles;
//! both exist only when the graph has no boundary, since a pinned boundary
//! forces them to vanish identically. Every principal mode extends to the
//! frequency ladder `+-omega + 2 pi n` with the same amplitudes and mirrored
//! phases.

use crate::graph::InteriorGraph;
use crate::numerics::{rw_eig, rw_eig_dirichlet, RwEigenpair};
use crate::Error;

/// Eigenvalues this close to +-1 take the special constant/alternating form
/// instead of the arccos branch.
pub const LAMBDA_SPECIAL_TOL: f64 = 1e-8;

/// One vertex-supported mode at its principal frequency.
///
/// `amplitudes`/`phases` are indexed by interior edge; `vertex_values` by
/// interior vertex. The mode on edge `e = (u, v)` is
/// `amplitudes[e] * cos(phases[e] + omega * x)` with `x = 0` at `u`.
#[derive(Debug, Clone)]
pub struct VertexEigenfunction {
    pub lambda: f64,
    pub omega: f64,
    pub amplitudes: Vec<f64>,
    pub phases: Vec<f64>,
    pub vertex_values: Vec<f64>,
}

impl VertexEigenfunction {
    /// Value at coordinate `x` on interior edge `e`.
    pub fn edge_value(&self, e: usize, x: f64) -> f64 {
        self.amplitudes[e] * (self.phases[e] + self.omega * x).cos()
    }
}

/// A principal mode together with the frequency ladder it generates.
#[derive(Debug, Clone)]
pub struct EigenpairSequence {
    pub principal: VertexEigenfunction,
}

/// One ladder member: the phase of every edge is multiplied by `phase_sign`
/// (the descending branch `-omega + 2 pi n` mirrors all phases).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rung {
    pub frequency: f64,
    pub phase_sign: f64,
}

impl EigenpairSequence {
    /// Ladder frequencies `|+-omega + 2 pi n|` up to `cutoff` (inclusive with
    /// a relative slop so e.g. a cutoff of `2 pi` keeps the `2 pi` rung),
    /// ascending. For `omega` in {0, pi} the two branches coincide and are
    /// emitted once.
    pub fn rungs(&self, cutoff: f64) -> Vec<Rung> {
        let omega = self.principal.omega;
        let limit = cutoff + 1e-9 * cutoff.max(1.0);
        let mut out = Vec::new();
        let two_pi = 2.0 * std::f64::consts::PI;
        let branches: &[(f64, f64)] = if omega == 0.0 || omega == std::f64::consts::PI {
            &[(omega, 1.0)]
        } else {
            // +branch starts at omega, -branch at 2 pi - omega.
            &[(omega, 1.0), (two_pi - omega, -1.0)]
        };
        for &(start, phase_sign) in branches {
            let mut frequency = start;
            while frequency <= limit {
                out.push(Rung {
                    frequency,
                    phase_sign,
                });
                frequency += two_pi;
            }
        }
        out.sort_by(|a, b| a.frequency.total_cmp(&b.frequency));
        out
    }
}

/// `arccos(lambda)` for `lambda` strictly inside `(-1, 1)`.
pub fn principal_frequency(lambda: f64) -> crate::Result<f64> {
    if lambda.abs() >= 1.0 {
        return Err(Error::FrequencyOutOfRange { lambda });
    }
    Ok(lambda.acos())
}

/// Amplitude and phase interpolating the endpoint values `g_u` (at `x = 0`)
/// and `g_v` (at `x = 1`) with frequency `omega`:
/// `C cos(B) = g_u` and `C sin(B) = (g_u cos(omega) - g_v) / sin(omega)`.
///
/// The two-argument arctangent makes `C >= 0` and keeps both endpoint
/// equations exact, which also settles the sign bookkeeping that a plain
/// tangent formula would leave ambiguous (and avoids its division by zero
/// when an endpoint vanishes).
pub fn amplitude_phase(g_u: f64, g_v: f64, omega: f64) -> crate::Result<(f64, f64)> {
    let sin_omega = omega.sin();
    if sin_omega.abs() < 1e-12 {
        return Err(Error::DegeneratePhase { omega });
    }
    if g_u == 0.0 && g_v == 0.0 {
        return Err(Error::ZeroEndpoints);
    }
    let a = g_u;
    let b = (g_u * omega.cos() - g_v) / sin_omega;
    Ok((a.hypot(b), b.atan2(a)))
}

/// Builds one eigenpair sequence per eigenvector of the interior propagation
/// matrix. With a boundary present the matrix is normalized by parent-graph
/// degrees (pendant edges count toward the flux balance) and the `|lambda|=1`
/// specials are omitted; without one, `lambda = 1` yields the constant
/// (`omega = 0`) sequence and `lambda = -1` the alternating (`omega = pi`)
/// sequence. An empty interior yields no sequences.
pub fn build_vertex_eigenfunctions(
    g: &InteriorGraph,
    boundary_present: bool,
    tol: f64,
) -> crate::Result<Vec<EigenpairSequence>> {
    if g.vertex_count() == 0 {
        return Ok(Vec::new());
    }
    let pairs: Vec<RwEigenpair> = if boundary_present {
        rw_eig_dirichlet(g, tol)?
    } else {
        rw_eig(g, tol)?
    };

    let mut sequences = Vec::new();
    for pair in &pairs {
        let special_constant = pair.lambda >= 1.0 - LAMBDA_SPECIAL_TOL;
        let special_alternating = pair.lambda <= -1.0 + LAMBDA_SPECIAL_TOL;
        if (special_constant || special_alternating) && boundary_present {
            continue;
        }

        let values: Vec<f64> = pair.vector.to_vec();
        let mut amplitudes = Vec::with_capacity(g.edge_count());
        let mut phases = Vec::with_capacity(g.edge_count());
        let omega;
        if special_constant || special_alternating {
            // Pure-cosine profile: C cos(omega x) runs from g_u to
            // g_v = g_u cos(omega), which is g_u (constant) or -g_u
            // (alternating endpoints of a 2-coloring).
            omega = if special_constant {
                0.0
            } else {
                std::f64::consts::PI
            };
            for &(u, _) in g.edges() {
                amplitudes.push(values[u]);
                phases.push(0.0);
            }
        } else {
            omega = principal_frequency(pair.lambda)?;
            for &(u, v) in g.edges() {
                if values[u].abs() <= tol && values[v].abs() <= tol {
                    amplitudes.push(0.0);
                    phases.push(0.0);
                } else {
                    let (c, b) = amplitude_phase(values[u], values[v], omega)?;
                    amplitudes.push(c);
                    phases.push(b);
                }
            }
        }

        sequences.push(EigenpairSequence {
            principal: VertexEigenfunction {
                lambda: pair.lambda,
                omega,
                amplitudes,
                phases,
                vertex_values: values,
            },
        });
    }
    Ok(sequences)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn principal_frequency_examples() {
        assert!((principal_frequency(0.0).unwrap() - PI / 2.0).abs() < 1e-15);
        assert!((principal_frequency(-0.5).unwrap() - 2.0 * PI / 3.0).abs() < 1e-15);
        assert!((principal_frequency(-1.0 / 3.0).unwrap() - 1.9106332362490186).abs() < 1e-12);
        assert!(matches!(
            principal_frequency(1.0),
            Err(Error::FrequencyOutOfRange { .. })
        ));
        assert!(matches!(
            principal_frequency(-1.5),
            Err(Error::FrequencyOutOfRange { .. })
        ));
    }

    #[test]
    fn amplitude_phase_solves_endpoints() {
        let (c, b) = amplitude_phase(1.0, 0.0, PI / 2.0).unwrap();
        assert!((c - 1.0).abs() < 1e-15);
        assert!(b.abs() < 1e-15);

        // f = sin(pi x / 2), reached here as cos with a quarter-turn lag.
        let (c, b) = amplitude_phase(0.0, 1.0, PI / 2.0).unwrap();
        assert!((c - 1.0).abs() < 1e-15);
        assert!((b + PI / 2.0).abs() < 1e-15);

        let (c, b) = amplitude_phase(1.0, 1.0, 2.0 * PI / 3.0).unwrap();
        assert!((c - 2.0).abs() < 1e-12);
        assert!((b + PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn amplitude_phase_endpoints_exact_and_magnitude_identity() {
        let cases = [
            (1.0, 0.0, PI / 2.0),
            (0.0, 1.0, PI / 2.0),
            (1.0, 1.0, 2.0 * PI / 3.0),
            (-0.3, 0.7, 1.1),
            (0.5, -0.5, 2.0 * PI / 3.0),
        ];
        for (gu, gv, omega) in cases {
            let (c, b) = amplitude_phase(gu, gv, omega).unwrap();
            assert!((c * b.cos() - gu).abs() < 1e-14);
            assert!((c * (b + omega).cos() - gv).abs() < 1e-14);
            let lhs = c * c * omega.sin().powi(2);
            let rhs = gu * gu + gv * gv - 2.0 * gu * gv * omega.cos();
            assert!((lhs - rhs).abs() < 1e-10, "magnitude identity: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn amplitude_phase_rejects_degenerate_input() {
        assert!(matches!(
            amplitude_phase(1.0, 1.0, PI),
            Err(Error::DegeneratePhase { .. })
        ));
        assert!(matches!(
            amplitude_phase(0.0, 0.0, PI / 2.0),
            Err(Error::ZeroEndpoints)
        ));
    }

    fn build(text: &str, boundary: bool) -> Vec<EigenpairSequence> {
        let g = Graph::parse(text).unwrap();
        build_vertex_eigenfunctions(&g.interior(), boundary, 1e-9).unwrap()
    }

    #[test]
    fn triangle_sequences() {
        let seqs = build("e 0 1\ne 1 2\ne 2 0\n", false);
        assert_eq!(seqs.len(), 3);
        let constant = &seqs[0].principal;
        assert_eq!(constant.omega, 0.0);
        for &c in &constant.amplitudes {
            assert!((c - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        }
        for seq in &seqs[1..] {
            assert!((seq.principal.omega - 2.0 * PI / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn four_cycle_has_alternating_top() {
        let seqs = build("e 0 1\ne 1 2\ne 2 3\ne 3 0\n", false);
        let omegas: Vec<f64> = seqs.iter().map(|s| s.principal.omega).collect();
        assert!((omegas[0] - 0.0).abs() < 1e-12);
        assert!((omegas[1] - PI / 2.0).abs() < 1e-12);
        assert!((omegas[2] - PI / 2.0).abs() < 1e-12);
        assert!((omegas[3] - PI).abs() < 1e-12);
        // Alternating mode: endpoint values negate along every edge.
        let alt = &seqs[3].principal;
        let g = Graph::parse("e 0 1\ne 1 2\ne 2 3\ne 3 0\n").unwrap();
        for &(u, v) in g.edges() {
            assert!((alt.vertex_values[u] + alt.vertex_values[v]).abs() < 1e-10);
        }
    }

    #[test]
    fn single_interior_edge_specials() {
        let seqs = build("e 0 1\n", false);
        assert_eq!(seqs.len(), 2);
        assert_eq!(seqs[0].principal.omega, 0.0);
        assert_eq!(seqs[1].principal.omega, PI);
        let r = 1.0 / 2f64.sqrt();
        assert!((seqs[1].principal.amplitudes[0].abs() - r).abs() < 1e-12);
    }

    #[test]
    fn empty_interior_has_no_sequences() {
        assert!(build("e 0 1\nb 0\nb 1\n", true).is_empty());
    }

    #[test]
    fn boundary_omits_specials_and_reweights_degrees() {
        // Triangle with one pendant boundary edge at vertex 0: the symmetric
        // sector eigenvalues solve lambda^2 - lambda/2 - 1/3 = 0, and the
        // antisymmetric one is -1/2; nothing reaches |lambda| = 1.
        let seqs = build("e 0 1\ne 1 2\ne 2 0\ne 0 3\nb 3\n", true);
        assert_eq!(seqs.len(), 3);
        let mut lambdas: Vec<f64> = seqs.iter().map(|s| s.principal.lambda).collect();
        lambdas.sort_by(f64::total_cmp);
        let root = (19.0f64 / 12.0).sqrt();
        let expected = [-0.5, (0.5 - root) / 2.0, (0.5 + root) / 2.0];
        for (got, want) in lambdas.iter().zip(expected) {
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }
        for seq in &seqs {
            assert!((seq.principal.omega - seq.principal.lambda.acos()).abs() < 1e-12);
        }
    }

    #[test]
    fn rung_ladders() {
        let seqs = build("e 0 1\ne 1 2\ne 2 0\n", false);
        let two_pi = 2.0 * PI;

        let constant_rungs = seqs[0].rungs(two_pi);
        assert_eq!(constant_rungs.len(), 2);
        assert_eq!(constant_rungs[0].frequency, 0.0);
        assert!((constant_rungs[1].frequency - two_pi).abs() < 1e-12);

        let generic = seqs[1].rungs(two_pi);
        assert_eq!(generic.len(), 2);
        assert!((generic[0].frequency - 2.0 * PI / 3.0).abs() < 1e-12);
        assert_eq!(generic[0].phase_sign, 1.0);
        assert!((generic[1].frequency - 4.0 * PI / 3.0).abs() < 1e-12);
        assert_eq!(generic[1].phase_sign, -1.0);

        // A descending-branch rung still interpolates the endpoints.
        let p = &seqs[1].principal;
        let nu = generic[1].frequency;
        let g = Graph::parse("e 0 1\ne 1 2\ne 2 0\n").unwrap();
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            let f0 = p.amplitudes[e] * (-p.phases[e]).cos();
            let f1 = p.amplitudes[e] * (-p.phases[e] + nu).cos();
            assert!((f0 - p.vertex_values[u]).abs() < 1e-10);
            assert!((f1 - p.vertex_values[v]).abs() < 1e-10);
        }
    }

    #[test]
    fn sequence_closure_under_full_turns() {
        let seqs = build("e 0 1\ne 1 2\ne 2 0\ne 0 3\nb 3\n", true);
        for seq in &seqs {
            let p = &seq.principal;
            for (e, &c) in p.amplitudes.iter().enumerate() {
                for x in [0.0, 1.0] {
                    let base = c * (p.phases[e] + p.omega * x).cos();
                    let lifted = c * (p.phases[e] + (p.omega + 2.0 * PI) * x).cos();
                    assert!((base - lifted).abs() < 1e-12);
                }
            }
        }
    }

    fn arb_connected_edges() -> impl Strategy<Value = Vec<(u64, u64)>> {
        // A random spanning path plus extra edges keeps the graph connected.
        (2u64..7, proptest::collection::btree_set((0u64..7, 0u64..7), 0..8)).prop_map(
            |(n, extra)| {
                let mut edges: Vec<(u64, u64)> = (1..n).map(|v| (v - 1, v)).collect();
                for (u, v) in extra {
                    let (u, v) = (u % n, v % n);
                    if u != v && !edges.iter().any(|&(a, b)| {
                        (a, b) == (u.min(v), u.max(v))
                    }) {
                        edges.push((u.min(v), u.max(v)));
                    }
                }
                edges
            },
        )
    }

    proptest! {
        #[test]
        fn produced_modes_interpolate_and_balance(edges in arb_connected_edges()) {
            let g = Graph::from_edges(&edges, &[]).unwrap().interior();
            let seqs = build_vertex_eigenfunctions(&g, false, 1e-9).unwrap();
            prop_assert_eq!(seqs.len(), g.vertex_count());
            for seq in &seqs {
                let p = &seq.principal;
                let ginf = p
                    .vertex_values
                    .iter()
                    .fold(0.0f64, |m, x| m.max(x.abs()));
                for (e, &(u, v)) in g.edges().iter().enumerate() {
                    // Endpoint interpolation.
                    prop_assert!((p.edge_value(e, 0.0) - p.vertex_values[u]).abs() <= 1e-9);
                    prop_assert!((p.edge_value(e, 1.0) - p.vertex_values[v]).abs() <= 1e-9);
                    // Magnitude identity on non-degenerate branches.
                    if p.omega.sin().abs() > 1e-6 {
                        let lhs = p.amplitudes[e].powi(2) * p.omega.sin().powi(2);
                        let gu = p.vertex_values[u];
                        let gv = p.vertex_values[v];
                        let rhs = gu * gu + gv * gv - 2.0 * gu * gv * p.omega.cos();
                        prop_assert!((lhs - rhs).abs() < 1e-10);
                    }
                }
                // Vertex balance: neighbor sum equals degree * cos(omega) * value.
                for v in 0..g.vertex_count() {
                    let neighbor_sum: f64 = g
                        .neighbors(v)
                        .iter()
                        .map(|&u| p.vertex_values[u])
                        .sum();
                    let expected = g.degree(v) as f64 * p.lambda * p.vertex_values[v];
                    let slack = 1e-9 * (g.degree(v) as f64) * ginf.max(1e-30)
                        * p.omega.sin().abs().max(1e-3);
                    prop_assert!((neighbor_sum - expected).abs() <= slack.max(1e-12));
                }
            }
        }
    }
}
