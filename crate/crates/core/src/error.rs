use thiserror::Error;

use crate::geometry::GeometryError;
use crate::network::NetworkError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error("input domain is empty or not full-dimensional")]
    EmptyDomain,
    #[error("input domain is unbounded")]
    UnboundedDomain,
    #[error("domain has dimension {domain} but the network expects {network}")]
    DomainDimension { domain: usize, network: usize },
    #[error("seed point is not in the interior of the domain")]
    SeedOutside,
    #[error("{neurons} activation neurons exceed the brute-force cap of {cap}")]
    OracleCap { neurons: usize, cap: usize },
    #[error("slice directions are linearly dependent")]
    DependentDirections,
    #[error("expected a 2-dimensional input, found {0}")]
    NotTwoDimensional(usize),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

impl Error {
    /// True for failures of the floating-point LP machinery.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Geometry(GeometryError::NumericalFailure(_)))
    }
}
