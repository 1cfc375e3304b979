//! One function per subcommand. Each returns the full output text; `main`
//! decides where it goes and which exit code follows.

use std::fmt::Write as _;

use serde::Serialize;

use edgelap::kernels::{bump_field, heat_field, ihara_zeta_recip_real, leakage, wave_field};
use edgelap::{Eigensystem, FieldSample, Graph};

use crate::dto::{self, EigensystemDto, GraphDto, ReportDto};
use crate::verify::run_suites;
use crate::{CliError, Format};

/// Initial condition shared by the heat and wave commands: a raised-cosine
/// bump on the first edge, centered at the midpoint, radius 1/4.
const BUMP_EDGE: usize = 0;
const BUMP_CENTER: f64 = 0.5;
const BUMP_RADIUS: f64 = 0.25;

pub struct Outcome {
    pub output: String,
    pub verified: bool,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Outcome {
            output,
            verified: true,
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable output");
    text.push('\n');
    text
}

#[derive(Serialize)]
struct SpectrumRow {
    omega: f64,
    omega_squared: f64,
    multiplicity: usize,
    provenance: String,
}

#[derive(Serialize)]
struct SpectrumDoc {
    graph: GraphDto,
    cutoff: f64,
    rows: Vec<SpectrumRow>,
}

pub fn spectrum(
    graph: &Graph,
    cutoff: f64,
    tol: f64,
    format: Format,
) -> Result<Outcome, CliError> {
    let system = Eigensystem::assemble(graph, cutoff, tol)?;
    let rows: Vec<SpectrumRow> = system
        .degenerate_groups()
        .into_iter()
        .map(|group| {
            let omega = system.entries[group.start].frequency;
            let mut labels: Vec<&str> = Vec::new();
            for entry in &system.entries[group.clone()] {
                let label = entry.provenance.label();
                if !labels.contains(&label) {
                    labels.push(label);
                }
            }
            SpectrumRow {
                omega,
                omega_squared: omega * omega,
                multiplicity: group.len(),
                provenance: labels.join("+"),
            }
        })
        .collect();
    let output = match format {
        Format::Json => to_json(&SpectrumDoc {
            graph: dto::graph_to_dto(graph),
            cutoff,
            rows,
        }),
        Format::Csv => {
            let mut text = String::from("omega,omega_squared,multiplicity,provenance\n");
            for row in rows {
                writeln!(
                    text,
                    "{},{},{},{}",
                    row.omega, row.omega_squared, row.multiplicity, row.provenance
                )
                .unwrap();
            }
            text
        }
    };
    Ok(Outcome::ok(output))
}

pub fn eigfun(graph: &Graph, cutoff: f64, tol: f64, format: Format) -> Result<Outcome, CliError> {
    require_json(format, "eigfun")?;
    let system = Eigensystem::assemble(graph, cutoff, tol)?;
    Ok(Outcome::ok(to_json(&dto::system_to_dto(&system))))
}

/// Verify accepts either a graph file (assemble first) or an eigensystem
/// JSON produced by `eigfun` (re-check as stored).
pub fn verify(input: &str, cutoff: f64, tol: f64, format: Format) -> Result<Outcome, CliError> {
    require_json(format, "verify")?;
    let system = if input.trim_start().starts_with('{') {
        let parsed: EigensystemDto = serde_json::from_str(input)
            .map_err(|e| CliError::Input(format!("eigensystem JSON: {e}")))?;
        dto::system_from_dto(&parsed)?
    } else {
        let graph = Graph::parse(input).map_err(|e| CliError::Input(e.to_string()))?;
        Eigensystem::assemble(&graph, cutoff, tol)?
    };
    let suites = run_suites(&system);
    let passed = suites.iter().all(|s| s.passed);
    let mut doc = dto::system_to_dto(&system);
    doc.report = Some(ReportDto { passed, suites });
    Ok(Outcome {
        output: to_json(&doc),
        verified: passed,
    })
}

#[derive(Serialize)]
struct ZetaDoc {
    graph: GraphDto,
    u: f64,
    zeta_reciprocal: f64,
}

pub fn zeta(graph: &Graph, u: f64, format: Format) -> Result<Outcome, CliError> {
    require_json(format, "zeta")?;
    let interior = graph.interior();
    let value = ihara_zeta_recip_real(&interior, u)?;
    Ok(Outcome::ok(to_json(&ZetaDoc {
        graph: dto::graph_to_dto(graph),
        u,
        zeta_reciprocal: value,
    })))
}

#[derive(Serialize)]
struct SampledEdge {
    edge: usize,
    samples: Vec<(f64, f64)>,
}

fn sampled_edges(sample: &FieldSample) -> Vec<SampledEdge> {
    sample
        .values
        .iter()
        .enumerate()
        .map(|(edge, samples)| SampledEdge {
            edge,
            samples: samples.clone(),
        })
        .collect()
}

fn field_csv(sample: &FieldSample) -> String {
    let mut text = String::from("edge,x,value\n");
    for (edge, samples) in sample.values.iter().enumerate() {
        for &(x, value) in samples {
            writeln!(text, "{edge},{x},{value}").unwrap();
        }
    }
    text
}

#[derive(Serialize)]
struct HeatDoc {
    graph: GraphDto,
    cutoff: f64,
    t: f64,
    total_heat: f64,
    coefficients: Vec<f64>,
    field: Vec<SampledEdge>,
}

pub fn heat(
    graph: &Graph,
    cutoff: f64,
    tol: f64,
    t: f64,
    resolution: usize,
    format: Format,
) -> Result<Outcome, CliError> {
    let system = Eigensystem::assemble(graph, cutoff, tol)?;
    let init = bump_field(&system, BUMP_EDGE, BUMP_CENTER, BUMP_RADIUS);
    let state = heat_field(&system, &init, t)?;
    let sample = system.sample_combination(&state.coefficients, resolution);
    let total_heat = state
        .coefficients
        .iter()
        .enumerate()
        .map(|(n, &a)| a * system.entry_integral(n))
        .sum();
    let output = match format {
        Format::Json => to_json(&HeatDoc {
            graph: dto::graph_to_dto(graph),
            cutoff,
            t,
            total_heat,
            coefficients: state.coefficients,
            field: sampled_edges(&sample),
        }),
        Format::Csv => field_csv(&sample),
    };
    Ok(Outcome::ok(output))
}

#[derive(Serialize)]
struct WaveDoc {
    graph: GraphDto,
    cutoff: f64,
    t: f64,
    energy_initial: f64,
    energy_final: f64,
    leakage_threshold: f64,
    leakage: f64,
    coefficients: Vec<f64>,
    field: Vec<SampledEdge>,
}

pub fn wave(
    graph: &Graph,
    cutoff: f64,
    tol: f64,
    t: f64,
    resolution: usize,
    format: Format,
) -> Result<Outcome, CliError> {
    let system = Eigensystem::assemble(graph, cutoff, tol)?;
    let position = bump_field(&system, BUMP_EDGE, BUMP_CENTER, BUMP_RADIUS);
    let velocity = vec![0.0; system.entries.len()];
    let energy_initial = edgelap::kernels::wave_energy(&system, &position.coefficients, &velocity);
    let (state, velocity_t) = wave_field(&system, &position, &velocity, t)?;
    let energy_final = edgelap::kernels::wave_energy(&system, &state.coefficients, &velocity_t);
    // Light cone radius t + bump radius, plus a margin for the cone itself.
    let threshold = t + BUMP_RADIUS + 0.25;
    let leaked = leakage(
        &system,
        &state.coefficients,
        (BUMP_EDGE, BUMP_CENTER),
        threshold,
        resolution,
    )?;
    let sample = system.sample_combination(&state.coefficients, resolution);
    let output = match format {
        Format::Json => to_json(&WaveDoc {
            graph: dto::graph_to_dto(graph),
            cutoff,
            t,
            energy_initial,
            energy_final,
            leakage_threshold: threshold,
            leakage: leaked,
            coefficients: state.coefficients,
            field: sampled_edges(&sample),
        }),
        Format::Csv => field_csv(&sample),
    };
    Ok(Outcome::ok(output))
}

#[derive(Serialize)]
struct OracleDoc {
    graph: GraphDto,
    m: usize,
    k: usize,
    cutoff: f64,
    oracle: Vec<f64>,
    assembled: Vec<f64>,
}

pub fn oracle(
    graph: &Graph,
    cutoff: f64,
    tol: f64,
    m: usize,
    k: usize,
    format: Format,
) -> Result<Outcome, CliError> {
    let frequencies = edgelap::eigensystem::fd_oracle(graph, m, k)?;
    let system = Eigensystem::assemble(graph, cutoff, tol)?;
    let assembled: Vec<f64> = system.entries.iter().map(|e| e.frequency).collect();
    let output = match format {
        Format::Json => to_json(&OracleDoc {
            graph: dto::graph_to_dto(graph),
            m,
            k,
            cutoff,
            oracle: frequencies,
            assembled,
        }),
        Format::Csv => {
            let mut text = String::from("index,oracle_omega,assembled_omega\n");
            let rows = frequencies.len().max(assembled.len());
            for i in 0..rows {
                let left = frequencies.get(i).map_or(String::new(), f64::to_string);
                let right = assembled.get(i).map_or(String::new(), f64::to_string);
                writeln!(text, "{i},{left},{right}").unwrap();
            }
            text
        }
    };
    Ok(Outcome::ok(output))
}

fn require_json(format: Format, command: &str) -> Result<(), CliError> {
    match format {
        Format::Json => Ok(()),
        Format::Csv => Err(CliError::Input(format!(
            "{command} emits structured output; csv is available for spectrum, oracle, heat, and wave"
        ))),
    }
}
