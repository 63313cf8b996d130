//! JSON documents for matrices, states, observables, channels, POVMs,
//! bases and dilation models.

use serde::{Deserialize, Serialize};

use qcoherence::numerics::DEFAULT_TOL;
use qcoherence::qstate::spectral_decompose;
use qcoherence::{
    Basis, BipartiteState, Complex, DensityMatrix, DilationModel, KrausChannel, Matrix,
    Observable, Povm, Vector,
};

use crate::CliError;

/// Grouping tolerance for observables given as a matrix.
const GROUP_TOL: f64 = qcoherence::qstate::GROUP_TOL;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename = "matrix")]
pub struct MatrixDoc {
    pub dim: [usize; 2],
    pub entries: Vec<[f64; 2]>,
}

impl MatrixDoc {
    pub fn from_matrix(m: &Matrix) -> Self {
        Self {
            dim: [m.rows(), m.cols()],
            entries: m.as_slice().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<Matrix, CliError> {
        let data = self
            .entries
            .iter()
            .map(|&[re, im]| Complex::new(re, im))
            .collect();
        Matrix::from_row_major(self.dim[0], self.dim[1], data).map_err(CliError::parse)
    }
}

fn vector_doc(v: &[Complex]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn doc_vector(v: &[[f64; 2]]) -> Vector {
    v.iter().map(|&[re, im]| Complex::new(re, im)).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename = "state")]
pub struct StateDoc {
    pub matrix: MatrixDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<[usize; 2]>,
}

impl StateDoc {
    pub fn from_state(rho: &DensityMatrix, dims: Option<[usize; 2]>) -> Self {
        Self {
            matrix: MatrixDoc::from_matrix(rho.matrix()),
            dims,
        }
    }

    pub fn to_state(&self) -> Result<DensityMatrix, CliError> {
        DensityMatrix::new(self.matrix.to_matrix()?, DEFAULT_TOL).map_err(CliError::validation)
    }

    pub fn to_bipartite(&self) -> Result<BipartiteState, CliError> {
        let [da, db] = self
            .dims
            .ok_or_else(|| CliError::Parse("bipartite state needs \"dims\"".into()))?;
        BipartiteState::new((da, db), self.to_state()?).map_err(CliError::validation)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename = "observable")]
pub struct ObservableDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigenvalues: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub projectors: Option<Vec<MatrixDoc>>,
}

impl ObservableDoc {
    pub fn from_observable(obs: &Observable) -> Self {
        Self {
            matrix: None,
            eigenvalues: Some(obs.eigenvalues().to_vec()),
            projectors: Some(obs.projectors().iter().map(MatrixDoc::from_matrix).collect()),
        }
    }

    pub fn to_observable(&self) -> Result<Observable, CliError> {
        match (&self.matrix, &self.eigenvalues, &self.projectors) {
            (Some(m), None, None) => {
                spectral_decompose(&m.to_matrix()?, GROUP_TOL).map_err(CliError::validation)
            }
            (None, Some(ev), Some(ps)) => {
                let ps = ps.iter().map(MatrixDoc::to_matrix).collect::<Result<Vec<_>, _>>()?;
                Observable::from_projectors(ev.clone(), ps, DEFAULT_TOL).map_err(CliError::validation)
            }
            _ => Err(CliError::Parse(
                "observable needs either \"matrix\" or \"eigenvalues\" with \"projectors\"".into(),
            )),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename = "channel")]
pub struct ChannelDoc {
    pub kraus: Vec<MatrixDoc>,
}

impl ChannelDoc {
    pub fn from_channel(ch: &KrausChannel) -> Self {
        Self {
            kraus: ch.kraus().iter().map(MatrixDoc::from_matrix).collect(),
        }
    }

    pub fn to_channel(&self) -> Result<KrausChannel, CliError> {
        let ks = self.kraus.iter().map(MatrixDoc::to_matrix).collect::<Result<Vec<_>, _>>()?;
        KrausChannel::new(ks, DEFAULT_TOL).map_err(CliError::validation)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename = "povm")]
pub struct PovmDoc {
    pub effects: Vec<MatrixDoc>,
}

impl PovmDoc {
    pub fn from_povm(p: &Povm) -> Self {
        Self {
            effects: p.effects().iter().map(MatrixDoc::from_matrix).collect(),
        }
    }

    pub fn to_povm(&self) -> Result<Povm, CliError> {
        let es = self.effects.iter().map(MatrixDoc::to_matrix).collect::<Result<Vec<_>, _>>()?;
        Povm::new(es, DEFAULT_TOL).map_err(CliError::validation)
    }
}

/// Orthonormal basis as a list of vectors.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename = "basis")]
pub struct BasisDoc {
    pub vectors: Vec<Vec<[f64; 2]>>,
}

impl BasisDoc {
    pub fn from_basis(b: &Basis) -> Self {
        Self {
            vectors: b.vectors().iter().map(|v| vector_doc(v)).collect(),
        }
    }

    pub fn to_basis(&self) -> Result<Basis, CliError> {
        let vs: Vec<Vector> = self.vectors.iter().map(|v| doc_vector(v)).collect();
        Basis::from_vectors(&vs, DEFAULT_TOL).map_err(CliError::validation)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename = "dilation")]
pub struct DilationDoc {
    pub system_dim: usize,
    pub ancilla_dim: usize,
    pub apparatus_init: Vec<[f64; 2]>,
    pub joint_unitary: MatrixDoc,
    pub readout: Vec<Vec<[f64; 2]>>,
}

impl DilationDoc {
    pub fn from_model(m: &DilationModel) -> Self {
        Self {
            system_dim: m.system_dim(),
            ancilla_dim: m.ancilla_dim(),
            apparatus_init: vector_doc(m.apparatus_init()),
            joint_unitary: MatrixDoc::from_matrix(m.joint_unitary()),
            readout: m.readout().iter().map(|v| vector_doc(v)).collect(),
        }
    }

    pub fn to_model(&self) -> Result<DilationModel, CliError> {
        DilationModel::new(
            self.system_dim,
            self.ancilla_dim,
            doc_vector(&self.apparatus_init),
            self.joint_unitary.to_matrix()?,
            self.readout.iter().map(|v| doc_vector(v)).collect(),
            1e-8,
        )
        .map_err(CliError::validation)
    }
}

pub fn read_doc<D: for<'de> Deserialize<'de>>(path: &std::path::Path) -> Result<D, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

pub fn write_doc<D: Serialize>(path: &std::path::Path, doc: &D) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(doc).expect("documents serialize");
    std::fs::write(path, text + "\n").map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
