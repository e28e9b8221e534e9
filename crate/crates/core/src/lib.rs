//! Oriented, order-decreasing partial transformations of a finite chain.
//!
//! The crate enumerates the semigroups `PORD(n,r)` and `IORD(n,r)`, builds
//! their generator families, computes closures, checks maximal
//! subsemigroups and produces explicit three-factor decompositions.
//!
//! ```
//! use chainsemi::{closure, enumerate_class, family, Class, FamilyLabel, Limits};
//!
//! let limits = Limits::default();
//! let gens = family(4, 3, FamilyLabel::ClaimedPord, &limits).unwrap();
//! let s = closure(&gens.elements, &limits).unwrap();
//! assert_eq!(s.elements, enumerate_class(4, Class::Pord, Some(3), &limits).unwrap());
//! ```

pub mod closure;
pub mod enumerate;
pub mod error;
pub mod factorize;
pub mod families;
pub mod maximal;
pub mod points;
pub mod text;
pub mod transforms;
pub mod verify;

/// Largest supported chain size (each image fits in four bits).
pub const MAX_N: usize = 15;

pub use closure::{closure, extend, is_generating, undecomposables, SemigroupSet};
pub use enumerate::{enumerate_class, CountReport, Limits};
pub use error::{Error, Result};
pub use factorize::{factorize_iord, factorize_pord, Factorization};
pub use families::{family, FamilyLabel, GeneratorFamily, Regime};
pub use maximal::{MaximalDescriptor, Side};
pub use points::PointSet;
pub use transforms::{ChainMap, Class, ClassProfile};
