use thiserror::Error;

/// Errors surfaced by the library. All operations are total on their stated
/// domains; these cover domain violations, resource caps, and the one
/// consistency check that is allowed to fail loudly (cross-validation).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("modulus must be a positive integer")]
    ZeroModulus,

    #[error("modulus {q} exceeds the group construction cap {cap}")]
    ModulusTooLarge { q: u64, cap: u64 },

    #[error("u64 overflow while {context}")]
    Overflow { context: &'static str },

    #[error("operation is undefined for the principal character")]
    PrincipalCharacter,

    #[error("no non-principal character exists modulo {q}")]
    NoNonprincipalCharacter { q: u64 },

    #[error("digamma argument must be positive, got {z}")]
    NonpositiveArgument { z: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error(
        "cross-validation failed for character {index} mod {q}: \
         methods differ by {delta:.6e}, combined radius {radius:.6e}"
    )]
    CrossValidation {
        q: u64,
        index: u64,
        delta: f64,
        radius: f64,
    },

    #[error(
        "work budget exceeded: modulus {q} needs about {cost:.3e} character \
         evaluations, budget is {budget:.3e}"
    )]
    WorkBudget { q: u64, cost: f64, budget: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
