use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("operands live over different prime fields")]
    FieldMismatch,

    #[error("zero has no inverse")]
    NotInvertible,

    #[error("coboundary space is not contained in the cocycle space")]
    InclusionViolated,

    #[error("bracket is not antisymmetric at ({0}, {1})")]
    NotAntisymmetric(usize, usize),

    #[error("Jacobi identity fails on basis triple ({0}, {1}, {2})")]
    JacobiViolated(usize, usize, usize),

    #[error("module action does not respect the bracket at ({0}, {1})")]
    NotRepresentation(usize, usize),

    #[error("module is not restricted: rho(e_{0}^[p]) != rho(e_{0})^p")]
    NotRestrictedModule(usize),

    #[error("ad of the proposed image of e_{0} differs from ad(e_{0})^p")]
    AdMismatch(usize),

    #[error("action of e_{0} is not a derivation at ({1}, {2})")]
    NotDerivation(usize, usize, usize),

    #[error("action is not restricted: {0}")]
    NotRestrictedAction(String),

    #[error("linear map is not a Lie morphism at ({0}, {1})")]
    NotLieMorphism(usize, usize),

    #[error("linear map is not compatible with the p-maps at e_{0}")]
    NotRestrictedMorphism(usize),

    #[error("cochain invariant violated: {0}")]
    CochainInvariantViolated(String),

    #[error("degree {degree} is outside the supported range {min}..={max}")]
    DegreeOutOfRange { degree: usize, min: usize, max: usize },

    #[error("unsupported order: {0}")]
    OrderUnsupported(String),

    #[error("unsupported characteristic {p}: {reason}")]
    CharacteristicUnsupported { p: u32, reason: &'static str },

    #[error("{0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
