//! Coherence, measurement and incoherent-operation toolkit for
//! finite-dimensional quantum systems.
//!
//! Every type is generic over the real scalar (`f32` or `f64`); the aliases
//! at the crate root fix it to `f64`.

pub mod channels;
pub mod coherence;
pub mod dilation;
pub mod error;
pub mod instruments;
pub mod numerics;
pub mod qstate;
pub mod random;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Real;

pub use channels::{IncoherenceClass, IndexMap, MapKind};
pub use numerics::Subsystem;

pub type Complex = scalar::C<f64>;
pub type Matrix = numerics::Matrix<f64>;
pub type Vector = numerics::Vector<f64>;
pub type Basis = qstate::Basis<f64>;
pub type DensityMatrix = qstate::DensityMatrix<f64>;
pub type Observable = qstate::Observable<f64>;
pub type FineGraining = qstate::FineGraining<f64>;
pub type BipartiteState = qstate::BipartiteState<f64>;
pub type Povm = qstate::Povm<f64>;
pub type KrausChannel = channels::KrausChannel<f64>;
pub type CorrelationMatrix = channels::CorrelationMatrix<f64>;
pub type KrausFactor = channels::KrausFactor<f64>;
pub type DilationModel = dilation::DilationModel<f64>;

/// Single-precision variants.
pub mod f32 {
    pub type Matrix = crate::numerics::Matrix<f32>;
    pub type DensityMatrix = crate::qstate::DensityMatrix<f32>;
    pub type Observable = crate::qstate::Observable<f32>;
    pub type KrausChannel = crate::channels::KrausChannel<f32>;
}
