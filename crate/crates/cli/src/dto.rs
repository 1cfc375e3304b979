//! Serialized shapes. Every float goes through serde_json's shortest
//! round-trip formatting, so identical inputs produce identical bytes and
//! reloading loses nothing.

use serde::{Deserialize, Serialize};

use edgelap::{EigenEntry, Eigensystem, Graph, Provenance};

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphDto {
    pub vertices: Vec<u64>,
    pub edges: Vec<(u64, u64)>,
    pub boundary: Vec<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeCoeffDto {
    pub edge: usize,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "B")]
    pub b: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EntryDto {
    pub omega: f64,
    pub provenance: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lambda: Option<f64>,
    pub edges: Vec<EdgeCoeffDto>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteDto {
    pub name: String,
    pub passed: bool,
    pub worst_residual: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportDto {
    pub passed: bool,
    pub suites: Vec<SuiteDto>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigensystemDto {
    pub graph: GraphDto,
    pub cutoff: f64,
    pub tol: f64,
    pub entries: Vec<EntryDto>,
    pub report: Option<ReportDto>,
}

pub fn graph_to_dto(g: &Graph) -> GraphDto {
    let vertices: Vec<u64> = (0..g.vertex_count()).map(|v| g.external_id(v)).collect();
    let edges = g
        .edges()
        .iter()
        .map(|&(t, h)| (g.external_id(t), g.external_id(h)))
        .collect();
    let boundary = (0..g.vertex_count())
        .filter(|&v| g.is_boundary(v))
        .map(|v| g.external_id(v))
        .collect();
    GraphDto {
        vertices,
        edges,
        boundary,
    }
}

pub fn graph_from_dto(dto: &GraphDto) -> Result<Graph, CliError> {
    let graph = Graph::from_edges(&dto.edges, &dto.boundary)
        .map_err(|e| CliError::Input(format!("graph in file: {e}")))?;
    if graph.vertex_count() != dto.vertices.len() {
        return Err(CliError::Input(format!(
            "graph in file: {} vertices declared, {} reachable from edges",
            dto.vertices.len(),
            graph.vertex_count()
        )));
    }
    Ok(graph)
}

pub fn system_to_dto(system: &Eigensystem) -> EigensystemDto {
    let entries = system
        .entries
        .iter()
        .map(|entry| EntryDto {
            omega: entry.frequency,
            provenance: entry.provenance.label().to_string(),
            lambda: match entry.provenance {
                Provenance::Vertex { lambda } => Some(lambda),
                _ => None,
            },
            edges: entry
                .amplitudes
                .iter()
                .zip(&entry.phases)
                .enumerate()
                .map(|(edge, (&c, &b))| EdgeCoeffDto { edge, c, b })
                .collect(),
        })
        .collect();
    EigensystemDto {
        graph: graph_to_dto(&system.graph),
        cutoff: system.cutoff,
        tol: system.tol,
        entries,
        report: None,
    }
}

pub fn system_from_dto(dto: &EigensystemDto) -> Result<Eigensystem, CliError> {
    let graph = graph_from_dto(&dto.graph)?;
    let edge_total = graph.edge_count();
    let mut entries = Vec::with_capacity(dto.entries.len());
    for (i, entry) in dto.entries.iter().enumerate() {
        let provenance = match entry.provenance.as_str() {
            "constant" => Provenance::Constant,
            "vertex" => Provenance::Vertex {
                lambda: entry.lambda.unwrap_or_else(|| entry.omega.cos()),
            },
            "interior-pi" => Provenance::InteriorPi,
            "interior-2pi" => Provenance::InteriorTwoPi,
            other => {
                return Err(CliError::Input(format!(
                    "entry {i}: unknown provenance {other:?}"
                )))
            }
        };
        let mut amplitudes = vec![f64::NAN; edge_total];
        let mut phases = vec![f64::NAN; edge_total];
        for coeff in &entry.edges {
            if coeff.edge >= edge_total {
                return Err(CliError::Input(format!(
                    "entry {i}: edge index {} out of range",
                    coeff.edge
                )));
            }
            amplitudes[coeff.edge] = coeff.c;
            phases[coeff.edge] = coeff.b;
        }
        if amplitudes.iter().any(|c| c.is_nan()) {
            return Err(CliError::Input(format!(
                "entry {i}: coefficients missing for some edges"
            )));
        }
        entries.push(EigenEntry {
            frequency: entry.omega,
            provenance,
            amplitudes,
            phases,
        });
    }
    Ok(Eigensystem {
        graph,
        cutoff: dto.cutoff,
        tol: dto.tol,
        entries,
        orthonormalized: true,
    })
}
