//! Partition regularity of single linear homogeneous equations.
//!
//! The crate checks two sufficient conditions on the coefficients (one bounds
//! the degree of regularity from above through a p-adic coloring, one from
//! below through a divisibility relation between the coefficient sums),
//! verifies colorings on finite intervals, runs exhaustive coloring searches
//! that yield finite regularity certificates, and builds explicit monochromatic
//! solutions for the `(n-1)`-regular equation families.

pub mod coloring;
pub mod equation;
pub mod families;
pub mod lemmas;
pub mod padic;
pub mod search;

pub use coloring::{
    find_monochromatic_solution, verify_avoiding, verify_witness, AvoidanceCertificate,
    AvoidanceOutcome, Color, Coloring, ColoringError, SolutionWitness,
};
pub use equation::{
    divisibility_condition, is_rado_regular, padic_distinctness, parse_equation, sign_split,
    AnalysisConfig, DorBound, DorReport, Equation, EquationError,
};
pub use families::{FamilyEquation, FamilyError, FamilySpec, RegularityClaim};
pub use lemmas::{ConstructedSolution, ConstructionError, ConstructionProof};
pub use padic::{padic_order, ExtendedNat, PAdicColoring, PadicError};
pub use search::{
    search_avoiding_coloring, ExhaustiveRegularityCertificate, SearchOptions, SearchOutcome,
};
