//! Exact Conway and Alexander polynomials of knot and link diagrams by skein
//! resolution, with the Euler-characteristic predictions they make for
//! instanton knot homology and numerical counts of SU(2) representations.

pub mod catalog;
pub mod diagram;
pub mod floer;
pub mod fox;
pub mod poly;
pub mod skein;
pub mod su2;
pub mod verify;

pub use diagram::{Diagram, DiagramError, SkeinTriple};
pub use poly::{LaurentPoly, Scale};
