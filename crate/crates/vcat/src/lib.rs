//! Quantale-enriched categories at desk scale.
//!
//! The crate computes extensions of set functors to categories enriched in a
//! commutative quantale (generalised metric spaces): left Kan extensions via
//! path closure, the relation-lifting shortcut, closed-form Hausdorff,
//! matching and Kantorovich distances, and behavioural distances for finite
//! automata.

pub mod coalgebra;
pub mod error;
pub mod extension;
pub mod generate;
pub mod io;
pub mod limits;
pub mod quantale;
pub mod relation;
pub mod relpresh;
pub mod report;
pub mod setfunctor;
pub mod space;

pub use error::{Error, Result};
pub use quantale::{QElem, Quantale, QuantaleKind};
pub use relation::Relation;
pub use relpresh::RelPresheaf;
pub use report::LawReport;
pub use setfunctor::{SetFunctor, Term};
pub use space::{Preorder, VCat, VFunctorMap};
