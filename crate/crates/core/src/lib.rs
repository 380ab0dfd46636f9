//! Weighted triangulations, their cochains and discrete Hodge operators,
//! χ-completeness analysis and explicit deficiency probes.

pub mod cochains;
pub mod complex;
pub mod completeness;
pub mod deficiency;
pub mod generators;
pub mod io;
pub mod operators;

pub use cochains::{Cochain, Cochain0, Cochain1, Cochain2, CochainError, TripleField};
pub use completeness::{CompletenessVerdict, Status};
pub use complex::{ComplexError, EdgeKey, FaceKey, Layout, Triangulation, TriangulationBuilder, VertexId};
pub use deficiency::{DeficiencyReport, DeficiencyVerdict};
pub use generators::{GeneratorDescriptor, GeneratorError, OffspringSpec};
pub use io::IoError;
pub use operators::{assemble, OperatorId, OperatorMatrix, Space};

