//! Applications built on the assembled eigensystem: the backtrackless-walk
//! zeta determinant with an independent cross-check, heat diffusion, wave
//! evolution with its finite-propagation-speed demonstration, and metric
//! distance between points inside edges.

use num_complex::Complex64;

use crate::eigensystem::Eigensystem;
use crate::graph::{Graph, InteriorGraph};
use crate::numerics::determinant;
use crate::Error;

/// Coefficients of a field in the eigensystem basis at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    pub t: f64,
    pub coefficients: Vec<f64>,
}

impl SpectralField {
    pub fn at_origin(coefficients: Vec<f64>) -> Self {
        SpectralField {
            t: 0.0,
            coefficients,
        }
    }
}

/// `det(I - uT)` over the arcs of the interior graph, cross-checked against
/// the vertex-space product `(1 - u^2)^(|E| - |V|) det(I - uA + u^2 (D - I))`
/// on every call. The two routes share no code path: one runs on the arc
/// matrix, the other on the adjacency and degrees.
pub fn ihara_zeta_recip(g: &InteriorGraph, u: Complex64) -> crate::Result<Complex64> {
    let arcs = g.oriented_line_graph();
    let t = arcs.matrix();
    let dim = arcs.arc_count();
    let mut direct_matrix = ndarray::Array2::<Complex64>::zeros((dim, dim));
    for i in 0..dim {
        for j in 0..dim {
            let delta = if i == j { 1.0 } else { 0.0 };
            direct_matrix[[i, j]] = Complex64::new(delta, 0.0) - u * t[[i, j]];
        }
    }
    let direct = determinant(&direct_matrix, 0.0);

    let n = g.vertex_count();
    let adjacency = g.adjacency();
    let mut vertex_matrix = ndarray::Array2::<Complex64>::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            let delta = if i == j { 1.0 } else { 0.0 };
            let dminus = if i == j { g.degree(i) as f64 - 1.0 } else { 0.0 };
            vertex_matrix[[i, j]] =
                Complex64::new(delta, 0.0) - u * adjacency[[i, j]] + u * u * dminus;
        }
    }
    let excess = g.edge_count() as i32 - n as i32;
    let bass = (Complex64::new(1.0, 0.0) - u * u).powi(excess) * determinant(&vertex_matrix, 0.0);

    // Relative agreement with a unit floor so that near-zero values (u at a
    // spectral point) compare absolutely.
    let scale = direct.norm().max(bass.norm()).max(1.0);
    if (direct - bass).norm() > 1e-8 * scale {
        return Err(Error::ZetaCrossCheck {
            u: format!("{u}"),
            direct: format!("{direct}"),
            bass: format!("{bass}"),
        });
    }
    Ok(direct)
}

/// Real-argument zeta reciprocal. Real inputs propagate through the
/// elimination with exactly zero imaginary part, so this is lossless.
pub fn ihara_zeta_recip_real(g: &InteriorGraph, u: f64) -> crate::Result<f64> {
    let value = ihara_zeta_recip(g, Complex64::new(u, 0.0))?;
    Ok(value.re)
}

/// Diffusion semigroup on coefficients: each mode decays by
/// `exp(-omega^2 * dt)`.
pub fn heat_field(
    system: &Eigensystem,
    init: &SpectralField,
    dt: f64,
) -> crate::Result<SpectralField> {
    if dt < 0.0 {
        return Err(Error::NegativeTime { t: dt });
    }
    assert_eq!(init.coefficients.len(), system.entries.len());
    let coefficients = system
        .entries
        .iter()
        .zip(&init.coefficients)
        .map(|(entry, &a)| a * (-entry.frequency * entry.frequency * dt).exp())
        .collect();
    Ok(SpectralField {
        t: init.t + dt,
        coefficients,
    })
}

/// Harmonic evolution of position and velocity coefficients by `dt` (which
/// may be negative, as long as the resulting absolute time stays
/// nonnegative): `a(dt) = p cos(omega dt) + v dt sinc(omega dt)`.
pub fn wave_field(
    system: &Eigensystem,
    position: &SpectralField,
    velocity: &[f64],
    dt: f64,
) -> crate::Result<(SpectralField, Vec<f64>)> {
    let t = position.t + dt;
    if t < 0.0 {
        return Err(Error::NegativeTime { t });
    }
    assert_eq!(position.coefficients.len(), system.entries.len());
    assert_eq!(velocity.len(), system.entries.len());
    let mut p_out = Vec::with_capacity(velocity.len());
    let mut v_out = Vec::with_capacity(velocity.len());
    for (entry, (&p, &v)) in system
        .entries
        .iter()
        .zip(position.coefficients.iter().zip(velocity))
    {
        let w = entry.frequency;
        let (s, c) = (w * dt).sin_cos();
        p_out.push(p * c + v * dt * sinc(w * dt));
        v_out.push(-p * w * s + v * c);
    }
    Ok((
        SpectralField {
            t,
            coefficients: p_out,
        },
        v_out,
    ))
}

/// `1/2 sum_n (v_n^2 + omega_n^2 p_n^2)`; constant along wave evolution.
pub fn wave_energy(system: &Eigensystem, position: &[f64], velocity: &[f64]) -> f64 {
    system
        .entries
        .iter()
        .zip(position.iter().zip(velocity))
        .map(|(entry, (&p, &v))| {
            let w = entry.frequency;
            0.5 * (v * v + w * w * p * p)
        })
        .sum()
}

/// Expansion coefficients of a raised-cosine bump
/// `(1 + cos(pi (x - center) / radius)) / 2` supported on one edge, clipped
/// to the edge, computed by closed-form cosine integrals (no quadrature).
pub fn bump_field(system: &Eigensystem, edge: usize, center: f64, radius: f64) -> SpectralField {
    assert!(edge < system.graph.edge_count(), "edge index out of range");
    assert!(radius > 0.0, "bump radius must be positive");
    assert!((0.0..=1.0).contains(&center), "bump center outside [0, 1]");
    let lo = (center - radius).max(0.0);
    let hi = (center + radius).min(1.0);
    let coefficients = system
        .entries
        .iter()
        .map(|entry| {
            let c = entry.amplitudes[edge];
            let b = entry.phases[edge];
            let nu = entry.frequency;
            // (1/2) cos(B + nu x)
            //  + (1/4) cos(B + pi center/radius + (nu - pi/radius) x)
            //  + (1/4) cos(B - pi center/radius + (nu + pi/radius) x)
            let shift = std::f64::consts::PI / radius;
            c * (0.5 * cosine_integral(b, nu, lo, hi)
                + 0.25 * cosine_integral(b + shift * center, nu - shift, lo, hi)
                + 0.25 * cosine_integral(b - shift * center, nu + shift, lo, hi))
        })
        .collect();
    SpectralField::at_origin(coefficients)
}

/// `int_lo^hi cos(phi + alpha x) dx`, stable for all `alpha`.
fn cosine_integral(phi: f64, alpha: f64, lo: f64, hi: f64) -> f64 {
    let span = hi - lo;
    span * sinc(alpha * span / 2.0) * (phi + alpha * (lo + hi) / 2.0).cos()
}

fn sinc(t: f64) -> f64 {
    if t == 0.0 {
        1.0
    } else {
        t.sin() / t
    }
}

/// Shortest-path length between two points of the geometric realization,
/// `x` measured from the tail of each edge. Either point may sit strictly
/// inside its edge; paths leave through either endpoint, or run directly
/// along a shared edge.
pub fn metric_distance(
    g: &Graph,
    a: (usize, f64),
    b: (usize, f64),
) -> crate::Result<f64> {
    let (e1, x1) = a;
    let (e2, x2) = b;
    assert!(e1 < g.edge_count() && e2 < g.edge_count(), "edge index out of range");
    assert!((0.0..=1.0).contains(&x1) && (0.0..=1.0).contains(&x2));

    let mut best = if e1 == e2 {
        (x1 - x2).abs()
    } else {
        f64::INFINITY
    };

    let (t1, h1) = g.edges()[e1];
    let (t2, h2) = g.edges()[e2];
    for (v1, d1) in [(t1, x1), (h1, 1.0 - x1)] {
        let hops = g.vertex_distances(v1);
        for (v2, d2) in [(t2, x2), (h2, 1.0 - x2)] {
            if let Some(k) = hops[v2] {
                best = best.min(d1 + k as f64 + d2);
            }
        }
    }
    if best.is_finite() {
        Ok(best)
    } else {
        Err(Error::DisconnectedPoints)
    }
}

/// Largest `|u|` over sample points farther than `threshold` from `source`,
/// for the field with the given coefficients. Quantifies how much of a wave
/// has leaked past its light cone due to spectral truncation.
pub fn leakage(
    system: &Eigensystem,
    coefficients: &[f64],
    source: (usize, f64),
    threshold: f64,
    resolution: usize,
) -> crate::Result<f64> {
    let sample = system.sample_combination(coefficients, resolution);
    let mut sup = 0.0f64;
    for (e, points) in sample.values.iter().enumerate() {
        for &(x, value) in points {
            if metric_distance(&system.graph, source, (e, x))? > threshold {
                sup = sup.max(value.abs());
            }
        }
    }
    Ok(sup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::DEFAULT_TOL;
    use rand_chacha::ChaCha8Rng;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::{PI, TAU};

    const TRIANGLE: &str = "e 0 1\ne 1 2\ne 2 0\n";
    const C4: &str = "e 0 1\ne 1 2\ne 2 3\ne 3 0\n";
    const K4: &str = "e 0 1\ne 0 2\ne 0 3\ne 1 2\ne 1 3\ne 2 3\n";
    const STAR4: &str = "e 0 1\ne 0 2\ne 0 3\ne 0 4\nb 1\nb 2\nb 3\nb 4\n";

    fn cycle(n: usize) -> String {
        (0..n)
            .map(|i| format!("e {} {}\n", i, (i + 1) % n))
            .collect()
    }

    fn interior(text: &str) -> InteriorGraph {
        Graph::parse(text).unwrap().interior()
    }

    #[test]
    fn zeta_triangle_values() {
        let g = interior(TRIANGLE);
        let half = ihara_zeta_recip_real(&g, 0.5).unwrap();
        assert!((half - 0.765625).abs() < 1e-12);
        assert_eq!(ihara_zeta_recip_real(&g, 0.0).unwrap(), 1.0);
        // u = 1 hits the eigenvalue 1 of the arc matrix.
        assert!(ihara_zeta_recip_real(&g, 1.0).unwrap().abs() < 1e-12);
    }

    #[test]
    fn zeta_complex_argument() {
        let g = interior(K4);
        let value = ihara_zeta_recip(&g, Complex64::new(0.2, 0.1)).unwrap();
        assert!(value.norm() > 0.0);
        // Conjugate symmetry of a real-coefficient polynomial.
        let conj = ihara_zeta_recip(&g, Complex64::new(0.2, -0.1)).unwrap();
        assert!((value.conj() - conj).norm() < 1e-12);
    }

    #[test]
    fn zeta_star_interior_is_trivial() {
        // The interior of the star is a single vertex with no edges; the
        // negative-excess Bass factor must cancel exactly.
        let g = interior(STAR4);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(ihara_zeta_recip_real(&g, 0.7).unwrap(), 1.0);
    }

    #[test]
    fn zeta_bass_agreement_in_the_disk() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for text in [TRIANGLE, C4, K4, &cycle(12)] {
            let g = interior(text);
            let max_degree = (0..g.vertex_count())
                .map(|v| g.degree(v))
                .max()
                .unwrap_or(1);
            let bound = 1.0 / (max_degree as f64 - 1.0).max(1.0);
            for _ in 0..20 {
                let radius = rng.random_range(0.0..bound);
                let angle = rng.random_range(0.0..TAU);
                let u = Complex64::from_polar(radius, angle);
                // The cross-check inside errors on disagreement.
                ihara_zeta_recip(&g, u).unwrap();
            }
        }
    }

    fn unit_coeffs(system: &Eigensystem, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..system.entries.len())
            .map(|_| rng.random_range(-1.0..1.0))
            .collect()
    }

    #[test]
    fn heat_identity_decay_and_semigroup() {
        let graph = Graph::parse(TRIANGLE).unwrap();
        let system = Eigensystem::assemble(&graph, TAU, DEFAULT_TOL).unwrap();
        let init = SpectralField::at_origin(unit_coeffs(&system, 7));

        let same = heat_field(&system, &init, 0.0).unwrap();
        assert_eq!(same.coefficients, init.coefficients);

        let late = heat_field(&system, &init, 50.0).unwrap();
        for (entry, &a) in system.entries.iter().zip(&late.coefficients) {
            if entry.frequency > 0.0 {
                assert!(a.abs() < 1e-30);
            } else {
                assert!((a - init.coefficients[0]).abs() < 1e-12);
            }
        }

        let two_step = heat_field(&system, &heat_field(&system, &init, 0.3).unwrap(), 0.5).unwrap();
        let one_step = heat_field(&system, &init, 0.8).unwrap();
        for (a, b) in two_step.coefficients.iter().zip(&one_step.coefficients) {
            assert!((a - b).abs() <= 1e-10);
        }

        assert!(matches!(
            heat_field(&system, &init, -0.1),
            Err(Error::NegativeTime { .. })
        ));
    }

    #[test]
    fn heat_conserves_total_integral_without_boundary() {
        let graph = Graph::parse(C4).unwrap();
        let system = Eigensystem::assemble(&graph, TAU, DEFAULT_TOL).unwrap();
        let init = bump_field(&system, 0, 0.5, 0.25);
        let total = |field: &SpectralField| -> f64 {
            field
                .coefficients
                .iter()
                .enumerate()
                .map(|(n, &a)| a * system.entry_integral(n))
                .sum()
        };
        let before = total(&init);
        let after = total(&heat_field(&system, &init, 1.7).unwrap());
        assert!(before.abs() > 0.01, "bump must carry mass, got {before}");
        assert!((before - after).abs() < 1e-10);
    }

    #[test]
    fn wave_identity_energy_and_reversal() {
        let graph = Graph::parse(&cycle(12)).unwrap();
        let system = Eigensystem::assemble(&graph, 4.0 * PI, DEFAULT_TOL).unwrap();
        let p0 = bump_field(&system, 0, 0.5, 0.25);
        let v0 = unit_coeffs(&system, 11);

        let (same, _) = wave_field(&system, &p0, &v0, 0.0).unwrap();
        assert_eq!(same.coefficients, p0.coefficients);

        let e0 = wave_energy(&system, &p0.coefficients, &v0);
        let mut t = 0.0;
        while t <= 4.0 {
            let (p, v) = wave_field(&system, &p0, &v0, t).unwrap();
            assert!((wave_energy(&system, &p.coefficients, &v) - e0).abs() <= 1e-8 * e0.max(1.0));
            t += 0.5;
        }

        let (p1, v1) = wave_field(&system, &p0, &v0, 2.3).unwrap();
        let (p2, v2) = wave_field(&system, &p1, &v1, -2.3).unwrap();
        assert_eq!(p2.t, 0.0);
        for (a, b) in p2.coefficients.iter().zip(&p0.coefficients) {
            assert!((a - b).abs() <= 1e-10);
        }
        for (a, b) in v2.iter().zip(&v0) {
            assert!((a - b).abs() <= 1e-10);
        }

        assert!(matches!(
            wave_field(&system, &p0, &v0, -0.1),
            Err(Error::NegativeTime { .. })
        ));
    }

    #[test]
    fn bump_coefficients_match_quadrature() {
        let graph = Graph::parse(TRIANGLE).unwrap();
        let system = Eigensystem::assemble(&graph, TAU, DEFAULT_TOL).unwrap();
        let field = bump_field(&system, 1, 0.4, 0.3);
        // Trapezoid quadrature of <bump, f_n> on the supporting edge.
        let m = 20_000;
        for (n, &a) in field.coefficients.iter().enumerate() {
            let mut acc = 0.0;
            for i in 0..=m {
                let x = i as f64 / m as f64;
                let d = (x - 0.4f64).abs();
                let bump = if d <= 0.3 {
                    0.5 * (1.0 + (PI * d / 0.3).cos())
                } else {
                    0.0
                };
                let weight = if i == 0 || i == m { 0.5 } else { 1.0 };
                acc += weight * bump * system.evaluate(n, 1, x);
            }
            acc /= m as f64;
            assert!((acc - a).abs() < 1e-6, "entry {n}: {acc} vs {a}");
        }
    }

    #[test]
    fn metric_distance_examples() {
        let g = Graph::parse(C4).unwrap();
        assert_eq!(metric_distance(&g, (0, 0.3), (0, 0.3)).unwrap(), 0.0);
        assert_eq!(metric_distance(&g, (0, 0.0), (0, 1.0)).unwrap(), 1.0);
        // Opposite midpoints of the 4-cycle: both routes have length 2.
        let d = metric_distance(&g, (0, 0.5), (2, 0.5)).unwrap();
        assert!((d - 2.0).abs() < 1e-15);
        // Adjacent midpoints go through the shared vertex.
        let d = metric_distance(&g, (0, 0.5), (1, 0.5)).unwrap();
        assert!((d - 1.0).abs() < 1e-15);

        let split = Graph::parse("e 0 1\ne 2 3\n").unwrap();
        assert!(matches!(
            metric_distance(&split, (0, 0.5), (1, 0.5)),
            Err(Error::DisconnectedPoints)
        ));
    }

    #[test]
    fn wave_leakage_decreases_with_cutoff() {
        let graph = Graph::parse(&cycle(12)).unwrap();
        let mut sups = Vec::new();
        for cutoff in [4.0 * PI, 8.0 * PI, 16.0 * PI] {
            let system = Eigensystem::assemble(&graph, cutoff, DEFAULT_TOL).unwrap();
            let p0 = bump_field(&system, 0, 0.5, 0.25);
            let v0 = vec![0.0; system.entries.len()];
            let (p, _) = wave_field(&system, &p0, &v0, 2.0).unwrap();
            sups.push(leakage(&system, &p.coefficients, (0, 0.5), 2.5, 32).unwrap());
        }
        assert!(
            sups[0] > sups[1] && sups[1] > sups[2],
            "leakage not decreasing: {sups:?}"
        );
        // The light cone has radius t + bump radius = 2.25; past 2.5 the
        // truncated field should already be small in absolute terms.
        assert!(sups[2] < 0.05, "{sups:?}");
    }
}
