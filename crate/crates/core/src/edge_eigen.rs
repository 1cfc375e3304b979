//! Edge-interior modes: eigenfunctions that vanish at every vertex.
//!
//! On each edge they take the form `C(e) cos(pi/2 + omega x)` with `omega`
//! equal to `pi` or `2 pi`. The flux balance at a vertex then reduces to a
//! linear condition on the amplitudes alone: the plain sum of incident
//! amplitudes for the `pi` class, the head-minus-tail sum for the `2 pi`
//! class. The two classes are therefore null spaces of the unsigned and
//! signed incidence matrices, and their elements double as eigenvectors of
//! the non-backtracking arc matrix at eigenvalues -1 and +1 — kept here as an
//! independent cross-check rather than as the construction route, since the
//! arc matrix is nonsymmetric and its +-1 eigenspaces can strictly contain
//! the geometric families.

use ndarray::{Array1, Array2};

use crate::graph::{Graph, InteriorGraph, OrientedLineGraph};
use crate::numerics::{nullspace, NumericsError};
use crate::Error;

/// Entrywise tolerance for the structural invariants of a weight matrix.
const W_INVARIANT_TOL: f64 = 1e-10;

/// Principal frequency class of an edge-interior mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmegaClass {
    Pi,
    TwoPi,
}

impl OmegaClass {
    pub fn frequency(self) -> f64 {
        match self {
            OmegaClass::Pi => std::f64::consts::PI,
            OmegaClass::TwoPi => 2.0 * std::f64::consts::PI,
        }
    }

    /// Eigenvalue of the non-backtracking matrix carried by this class.
    pub fn hashimoto_eigenvalue(self) -> f64 {
        match self {
            OmegaClass::Pi => -1.0,
            OmegaClass::TwoPi => 1.0,
        }
    }
}

/// Edge-weight matrix over interior vertices: `w[u, v]` is nonzero only
/// across edges, rows sum to zero, and the matrix is symmetric (`pi` class)
/// or antisymmetric (`2 pi` class).
#[derive(Debug, Clone)]
pub struct WMatrix {
    pub omega_class: OmegaClass,
    pub w: Array2<f64>,
}

/// An edge-interior mode: `amplitudes[e] * cos(pi/2 + omega x)` per edge.
#[derive(Debug, Clone)]
pub struct EdgeEigenfunction {
    pub omega: f64,
    pub amplitudes: Vec<f64>,
}

/// Arc-indexed eigenvector of the non-backtracking matrix, eigenvalue +-1.
#[derive(Debug, Clone)]
pub struct OLGVector {
    pub s: Array1<f64>,
    pub lambda: f64,
}

/// Both interior families at once.
#[derive(Debug, Clone)]
pub struct EdgeClassBases {
    pub pi: Vec<WMatrix>,
    pub two_pi: Vec<WMatrix>,
}

impl WMatrix {
    /// Packs per-edge amplitudes into the weight matrix of the given class;
    /// for the antisymmetric class the entry along each edge's orientation
    /// carries the amplitude's sign.
    pub fn from_amplitudes(omega_class: OmegaClass, g: &InteriorGraph, c: &[f64]) -> Self {
        let n = g.vertex_count();
        let mut w = Array2::zeros((n, n));
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            match omega_class {
                OmegaClass::Pi => {
                    w[[u, v]] = c[e];
                    w[[v, u]] = c[e];
                }
                OmegaClass::TwoPi => {
                    w[[u, v]] = c[e];
                    w[[v, u]] = -c[e];
                }
            }
        }
        WMatrix { omega_class, w }
    }

    /// Checks support, row sums, and the class symmetry.
    pub fn check_invariants(&self, g: &InteriorGraph) -> crate::Result<()> {
        let n = g.vertex_count();
        assert_eq!(self.w.nrows(), n);
        let a = g.adjacency();
        let sign = match self.omega_class {
            OmegaClass::Pi => 1.0,
            OmegaClass::TwoPi => -1.0,
        };
        for i in 0..n {
            let row_sum: f64 = self.w.row(i).sum();
            if row_sum.abs() > W_INVARIANT_TOL {
                return Err(NumericsError::ResidualTooLarge {
                    residual: row_sum.abs(),
                    tol: W_INVARIANT_TOL,
                }
                .into());
            }
            for j in 0..n {
                if a[[i, j]] == 0.0 && self.w[[i, j]] != 0.0 {
                    return Err(Error::ZeroWeightMatrix);
                }
                let skew = self.w[[i, j]] - sign * self.w[[j, i]];
                if skew.abs() > W_INVARIANT_TOL {
                    return Err(NumericsError::ResidualTooLarge {
                        residual: skew.abs(),
                        tol: W_INVARIANT_TOL,
                    }
                    .into());
                }
            }
        }
        Ok(())
    }

    /// Amplitude along each edge's orientation.
    pub fn amplitudes(&self, g: &InteriorGraph) -> Vec<f64> {
        g.edges().iter().map(|&(u, v)| self.w[[u, v]]).collect()
    }
}

/// Per-edge amplitude solutions of `sum_{e at v} C(e) = 0` at every
/// non-boundary vertex of `g`, over the full edge set: the `omega = pi`
/// family. Boundary endpoints impose no condition (the mode vanishes there
/// by its form), so pendant edges may carry nonzero amplitude.
pub fn pi_amplitudes(g: &Graph, tol: f64) -> crate::Result<Vec<Array1<f64>>> {
    Ok(nullspace(&g.incidence_unsigned(), tol)?)
}

/// Per-edge amplitude solutions of the head-minus-tail balance at every
/// non-boundary vertex (the circulation space): the `omega = 2 pi` family.
pub fn two_pi_amplitudes(g: &Graph, tol: f64) -> crate::Result<Vec<Array1<f64>>> {
    Ok(nullspace(&g.incidence_signed(), tol)?)
}

/// Orthonormal basis (edgewise dot product) of the symmetric zero-vertex-sum
/// weightings of the interior graph.
pub fn pi_basis(g: &InteriorGraph, tol: f64) -> crate::Result<Vec<WMatrix>> {
    Ok(nullspace(&g.incidence_unsigned(), tol)?
        .into_iter()
        .map(|c| WMatrix::from_amplitudes(OmegaClass::Pi, g, c.as_slice().unwrap()))
        .collect())
}

/// Orthonormal basis of the antisymmetric zero-signed-sum weightings
/// (circulations) of the interior graph.
pub fn two_pi_basis(g: &InteriorGraph, tol: f64) -> crate::Result<Vec<WMatrix>> {
    Ok(nullspace(&g.incidence_signed(), tol)?
        .into_iter()
        .map(|c| WMatrix::from_amplitudes(OmegaClass::TwoPi, g, c.as_slice().unwrap()))
        .collect())
}

pub fn edge_class_bases(g: &InteriorGraph, tol: f64) -> crate::Result<EdgeClassBases> {
    Ok(EdgeClassBases {
        pi: pi_basis(g, tol)?,
        two_pi: two_pi_basis(g, tol)?,
    })
}

/// Expected `pi`-class dimension: `|E| - |V| +` number of 2-colorable
/// components (the unsigned incidence loses one rank per such component).
pub fn expected_pi_dimension(g: &InteriorGraph) -> usize {
    g.edge_count() + g.bipartite_component_count() - g.vertex_count()
}

/// Expected `2 pi`-class dimension: the cycle rank `|E| - |V| + c`.
pub fn expected_two_pi_dimension(g: &InteriorGraph) -> usize {
    g.edge_count() + g.component_count() - g.vertex_count()
}

/// Number of interior components with no pendant edge attached, split by
/// 2-colorability: `(bipartite_free, all_free)`. A left null vector of the
/// non-boundary incidence rows is an alternating (unsigned) or constant
/// (signed) labeling of a component, and any pendant edge pins its vertex's
/// label to zero, killing the component's contribution to the corank.
fn free_component_counts(g: &Graph) -> (usize, usize) {
    let interior = g.interior();
    let (labels, count) = interior.component_labels();
    let bipartite = interior.component_bipartite_flags();
    let mut pinned = vec![false; count];
    for v in 0..interior.vertex_count() {
        if interior.pendant_count(v) > 0 {
            pinned[labels[v]] = true;
        }
    }
    let mut bipartite_free = 0;
    let mut all_free = 0;
    for c in 0..count {
        if pinned[c] {
            continue;
        }
        all_free += 1;
        if bipartite[c] {
            bipartite_free += 1;
        }
    }
    (bipartite_free, all_free)
}

/// `pi`-class dimension over the full edge set with non-boundary condition
/// rows: `|E| - |V_nb| +` pendant-free 2-colorable interior components.
/// Coincides with [`expected_pi_dimension`] when there is no boundary.
pub fn expected_pi_dimension_full(g: &Graph) -> usize {
    let (bipartite_free, _) = free_component_counts(g);
    g.edge_count() + bipartite_free - g.non_boundary_vertices().len()
}

/// `2 pi`-class dimension over the full edge set: `|E| - |V_nb| +`
/// pendant-free interior components. Coincides with
/// [`expected_two_pi_dimension`] when there is no boundary.
pub fn expected_two_pi_dimension_full(g: &Graph) -> usize {
    let (_, all_free) = free_component_counts(g);
    g.edge_count() + all_free - g.non_boundary_vertices().len()
}

/// Reads the per-edge amplitudes off a weight matrix after validating it;
/// rejects the zero matrix, which weights no eigenfunction at all.
pub fn w_to_eigenfunction(w: &WMatrix, g: &InteriorGraph) -> crate::Result<EdgeEigenfunction> {
    w.check_invariants(g)?;
    let amplitudes = w.amplitudes(g);
    let scale = amplitudes.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if scale == 0.0 {
        return Err(Error::ZeroWeightMatrix);
    }
    // The vertex conditions in amplitude form, checked directly.
    let c = Array1::from_vec(amplitudes.clone());
    let residual_matrix = match w.omega_class {
        OmegaClass::Pi => g.incidence_unsigned(),
        OmegaClass::TwoPi => g.incidence_signed(),
    };
    let residual = residual_matrix
        .dot(&c)
        .iter()
        .fold(0.0f64, |m, r| m.max(r.abs()));
    if residual > W_INVARIANT_TOL * scale.max(1.0) {
        return Err(NumericsError::ResidualTooLarge {
            residual,
            tol: W_INVARIANT_TOL,
        }
        .into());
    }
    Ok(EdgeEigenfunction {
        omega: w.omega_class.frequency(),
        amplitudes,
    })
}

/// Unfolds a weight matrix onto arcs (`s[(u,v)] = w[u, v]`) and verifies the
/// non-backtracking eigenvector identity `T s = lambda s` it implies.
pub fn w_to_olg_vector(w: &WMatrix, g: &InteriorGraph, tol: f64) -> crate::Result<OLGVector> {
    w.check_invariants(g)?;
    let olg = g.oriented_line_graph();
    let mut s = Array1::zeros(olg.arc_count());
    for (i, &(from, to)) in olg.arcs().iter().enumerate() {
        s[i] = w.w[[from, to]];
    }
    let lambda = w.omega_class.hashimoto_eigenvalue();
    let residual = olg
        .matrix()
        .dot(&s)
        .iter()
        .zip(s.iter())
        .fold(0.0f64, |m, (ts, si)| m.max((ts - lambda * si).abs()));
    if residual > tol {
        return Err(NumericsError::ResidualTooLarge { residual, tol }.into());
    }
    Ok(OLGVector { s, lambda })
}

/// Null bases of `T - I` and `T + I`: the +-1 eigenspaces of the
/// non-backtracking matrix, in that order. These contain the families built
/// from the incidence route; the containment can be strict (the matrix is
/// nonsymmetric), so dimensions are reported rather than asserted equal.
pub fn hashimoto_pm1_eigenspaces(
    olg: &OrientedLineGraph,
    tol: f64,
) -> crate::Result<(Vec<Array1<f64>>, Vec<Array1<f64>>)> {
    let n = olg.arc_count();
    let identity = Array2::<f64>::eye(n);
    let plus = nullspace(&(olg.matrix() - &identity), tol)?;
    let minus = nullspace(&(olg.matrix() + &identity), tol)?;
    Ok((plus, minus))
}

/// Relative sup-norm distance from `vector` to the span of the orthonormal
/// `space`; zero (to rounding) certifies membership.
pub fn span_containment_residual(space: &[Array1<f64>], vector: &Array1<f64>) -> f64 {
    let mut remainder = vector.clone();
    for basis_vector in space {
        let coefficient = remainder.dot(basis_vector);
        remainder = remainder - coefficient * basis_vector;
    }
    let scale = vector.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    remainder.iter().fold(0.0f64, |m, x| m.max(x.abs())) / scale
}
