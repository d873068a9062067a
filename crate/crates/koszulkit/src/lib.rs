//! Quadratic algebras over prime fields, their Koszul duals, and filtration
//! invariants of finitely generated pro-p groups.
//!
//! The crate is a small stack. [`fpfield`] does exact linear algebra over
//! F_p (RREF, subspace lattice, annihilators). [`ncpoly`] is truncated
//! noncommutative power series with a Magnus expansion for group words.
//! [`quadalg`] builds quadratic algebras, their graded components, Hilbert
//! series, products, and Koszul duals. [`koszul`] certifies Koszulity from
//! the reduced bar complex or the Hilbert-series criterion. [`progroup`]
//! turns group descriptions into presentations, cohomology rings, graded
//! algebras, and numerical invariants, and checks the duality between the
//! two graded pictures. [`cocycle`] evaluates crossed homomorphisms with
//! p-adic coefficients and computes obstruction tables. [`cli`] backs the
//! `koszulkit` binary.
//!
//! The fastest tour is the examples; each one is runnable and prints what
//! it is doing:
//!
//! ```text
//! cargo run --example hilbert_series            graded dimensions of the standard algebras
//! cargo run --example koszul_duals              duals, involution, product identities
//! cargo run --example koszulity_certificate     bar-complex Tor tables and Hilbert defects
//! cargo run --example magnus_expansion          group words as power series, initial forms
//! cargo run --example group_presentations       generators, relations, orientations
//! cargo run --example koszul_duality_groups     cohomology vs graded algebra, verified
//! cargo run --example cohomology_reconstruction H^2 recovered from relation quadratic parts
//! cargo run --example obstruction_tables        crossed-homomorphism obstruction certificates
//! cargo run --example zassenhaus_growth         filtration quotient dimensions
//! cargo run --example invariants_tour           generator/relation counts, abelianizations
//! ```
//!
//! File formats and the CLI surface are documented in `docs/formats.md`.

pub mod cli;
pub mod cocycle;
pub mod fpfield;
pub mod koszul;
pub mod ncpoly;
pub mod progroup;
pub mod quadalg;

/// Crate-wide error type. `name()` is the stable identifier the CLI prints
/// on stderr; `is_parse_error()` decides exit code 2 vs 1.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("ambient dimensions differ: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("coefficient fields differ: F_{left} vs F_{right}")]
    FieldMismatch { left: u64, right: u64 },
    #[error("alphabets differ: {left} vs {right} generators")]
    AlphabetMismatch { left: usize, right: usize },
    #[error("truncation caps differ: {left} vs {right}")]
    CapMismatch { left: usize, right: usize },
    #[error("generator index {index} out of range for alphabet of size {alphabet}")]
    IndexOutOfRange { index: usize, alphabet: usize },
    #[error("exponent requires more p-adic digits than the cap {cap} retains")]
    InsufficientExponentPrecision { cap: usize },
    #[error("expansion is 1 up to the cap; initial form not certified")]
    TrivialBeyondCap,
    #[error("word is not in the second filtration layer (degree-1 part nonzero)")]
    NotInD2,
    #[error("bidegree needs {needed} basis elements, over the limit {limit}")]
    ResourceLimit { needed: usize, limit: usize },
    #[error("unsupported group description: {0}")]
    UnsupportedSpec(String),
    #[error("no closed-form model for this family: {0}")]
    ModelOutOfScope(String),
    #[error("relation quadratic parts span degenerately")]
    DegenerateRelationSpan,
    #[error("p-adic precisions differ: {left} vs {right}")]
    PrecisionMismatch { left: u32, right: u32 },
    #[error("polynomial is not monic")]
    NonMonic,
    #[error("invalid group parameters: {0}")]
    InvalidGroupSpec(String),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable name, printed by the CLI on stderr.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "not-prime",
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::FieldMismatch { .. } => "field-mismatch",
            Error::AlphabetMismatch { .. } => "alphabet-mismatch",
            Error::CapMismatch { .. } => "cap-mismatch",
            Error::IndexOutOfRange { .. } => "index-out-of-range",
            Error::InsufficientExponentPrecision { .. } => "insufficient-exponent-precision",
            Error::TrivialBeyondCap => "trivial-beyond-cap",
            Error::NotInD2 => "not-in-D2",
            Error::ResourceLimit { .. } => "resource-limit",
            Error::UnsupportedSpec(_) => "unsupported-spec",
            Error::ModelOutOfScope(_) => "model-out-of-scope",
            Error::DegenerateRelationSpan => "degenerate-relation-span",
            Error::PrecisionMismatch { .. } => "precision-mismatch",
            Error::NonMonic => "non-monic",
            Error::InvalidGroupSpec(_) => "invalid-group-spec",
            Error::InvalidPresentation(_) => "invalid-presentation",
            Error::InvalidInput(_) => "invalid-input",
            Error::Parse(_) => "parse",
            Error::Json(_) => "json",
            Error::Io(_) => "io",
        }
    }

    /// Errors caused by malformed input files or word syntax (CLI exit 2);
    /// everything else is a domain error (CLI exit 1).
    pub fn is_parse_error(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::Json(_) | Error::Io(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
