//! Certification of perfect state transfer, Laplacian perfect pair state
//! transfer and periodicity on graphs, with decision procedures for tensor
//! products and double covers and a numerical quantum-walk simulator to
//! cross-check every claim.

pub mod certify;
pub mod composite;
pub mod cospectral;
pub mod dynamics;
pub mod error;
pub mod graph;
pub mod phase;
pub mod spectral;
pub mod surd;

pub use error::{Error, Result};
pub use certify::{certify_pair_transfer, certify_periodic, certify_pst, CertFailure, PeriodicityCertificate, TransferCertificate};
pub use composite::{CompositeVerdict, Outcome};
pub use cospectral::{strong_cospectral, support, CospectralReport};
pub use graph::{CoverPolicy, Family, Graph, PairState, State, VertexState};
pub use phase::{ExactTime, Phase};
pub use spectral::{eigen_decompose, ExactScalar, SpectralDecomposition};
