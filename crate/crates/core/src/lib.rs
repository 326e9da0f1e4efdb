//! Executable pieces of the correspondence between virtual homological
//! spectral radii of surface automorphisms and Mahler measures of Alexander
//! polynomials of fibered 3-manifolds.
//!
//! * [`lpoly`]: exact sparse Laurent polynomials over `Z`
//! * [`mahler`]: Mahler measures and the `M = 1` criterion
//! * [`alexander`]: Alexander polynomials, specializations and abelian covers
//! * [`torsion`]: torsion homology of finite abelian covers
//! * [`surfcover`]: finite covers of punctured surfaces and lifted automorphisms
//! * [`pipeline`]: the end-to-end check on a fibered manifold record

pub mod alexander;
mod bigser;
pub mod lpoly;
pub mod mahler;
pub mod pipeline;
pub mod roots;
pub mod surfcover;
pub mod torsion;
pub mod word;

pub use lpoly::{IntLinearMap, LaurentPoly, UnitNormalForm};
pub use mahler::{MahlerMethod, MahlerResult, SlicePoint};
