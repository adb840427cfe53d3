//! File formats: circuit text files, amplitude dumps (binary little-endian
//! f64 re/im pairs, or JSON `[re, im]` lists), and QAOA instance manifests.

use std::fs;
use std::io::Write;
use std::path::Path;

use hsf_core::circuit::Circuit;
use hsf_core::qaoa::{qaoa_circuit, sbm_graph, QaoaError, QaoaInstance};
use hsf_core::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Format { path: String, message: String },
    #[error("manifest regeneration mismatch: seed {seed} does not reproduce the stored edge list")]
    ManifestMismatch { seed: u64 },
    #[error("{0}")]
    Qaoa(QaoaError),
}

fn io_err(path: &Path, source: std::io::Error) -> IoError {
    IoError::Io {
        path: path.display().to_string(),
        source,
    }
}

pub fn load_circuit(path: &Path) -> Result<Circuit, IoError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    hsf_core::circuit::parse_circuit(&text).map_err(|e| IoError::Format {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn save_circuit(path: &Path, circuit: &Circuit) -> Result<(), IoError> {
    let text = hsf_core::circuit::serialize_circuit(circuit).map_err(|e| IoError::Format {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    fs::write(path, text).map_err(|e| io_err(path, e))
}

/// Dump amplitudes: `.json` paths get a `[[re, im], ...]` list, anything
/// else interleaved little-endian f64 pairs.
pub fn dump_amplitudes(path: &Path, amps: &[Complex64]) -> Result<(), IoError> {
    if path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"))
    {
        let pairs: Vec<[f64; 2]> = amps.iter().map(|z| [z.re, z.im]).collect();
        let json = serde_json::to_string(&pairs).expect("serializable");
        fs::write(path, json).map_err(|e| io_err(path, e))
    } else {
        let mut file = fs::File::create(path).map_err(|e| io_err(path, e))?;
        let mut buf = Vec::with_capacity(amps.len() * 16);
        for z in amps {
            buf.extend_from_slice(&z.re.to_le_bytes());
            buf.extend_from_slice(&z.im.to_le_bytes());
        }
        file.write_all(&buf).map_err(|e| io_err(path, e))
    }
}

pub fn read_amplitudes_binary(path: &Path) -> Result<Vec<Complex64>, IoError> {
    let bytes = fs::read(path).map_err(|e| io_err(path, e))?;
    if bytes.len() % 16 != 0 {
        return Err(IoError::Format {
            path: path.display().to_string(),
            message: format!(
                "{} bytes is not a whole number of complex values",
                bytes.len()
            ),
        });
    }
    Ok(bytes
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().unwrap());
            let im = f64::from_le_bytes(c[8..].try_into().unwrap());
            Complex64::new(re, im)
        })
        .collect())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), IoError> {
    let json = serde_json::to_string_pretty(value).expect("serializable");
    fs::write(path, json).map_err(|e| io_err(path, e))
}

/// Everything needed to regenerate a benchmark instance bit-identically.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct QaoaManifest {
    pub sizes: [usize; 2],
    pub p_intra: f64,
    pub p_inter: f64,
    pub seed: u64,
    pub cut_position: usize,
    pub edges: Vec<(usize, usize)>,
    pub layers: usize,
    pub gammas: Vec<f64>,
    pub betas: Vec<f64>,
    pub initial_h: bool,
}

impl QaoaManifest {
    pub fn from_instance(inst: &QaoaInstance) -> QaoaManifest {
        QaoaManifest {
            sizes: inst.graph.sizes,
            p_intra: inst.graph.p_intra,
            p_inter: inst.graph.p_inter,
            seed: inst.graph.seed,
            cut_position: inst.cut.boundary(),
            edges: inst.graph.edges.clone(),
            layers: inst.layers,
            gammas: inst.gammas.clone(),
            betas: inst.betas.clone(),
            initial_h: inst.initial_h,
        }
    }

    /// Rebuild the instance from the seed and check it reproduces the
    /// stored edge list exactly.
    pub fn regenerate(&self) -> Result<QaoaInstance, IoError> {
        let graph = sbm_graph(self.sizes, self.p_intra, self.p_inter, self.seed);
        if graph.edges != self.edges {
            return Err(IoError::ManifestMismatch { seed: self.seed });
        }
        qaoa_circuit(
            &graph,
            self.layers,
            &self.gammas,
            &self.betas,
            self.initial_h,
        )
        .map_err(IoError::Qaoa)
    }

    pub fn load(path: &Path) -> Result<QaoaManifest, IoError> {
        let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        serde_json::from_str(&text).map_err(|e| IoError::Format {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }

    pub fn save(&self, path: &Path) -> Result<(), IoError> {
        write_json(path, self)
    }
}
