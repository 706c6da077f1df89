//! Exact tools for studying how axes of conjugate elements of the free
//! group F₂ = ⟨x, y⟩ overlap in its Cayley tree, together with a numerical
//! counterpart for geodesic lifts in the hyperbolic plane.

pub mod cli;
pub mod decompose;
pub mod h2;
pub mod search;
pub mod tree;
pub mod tripod;
pub mod word;
