//! The Baumslag-Solitar group `BS(1,2) = <a, t | t a t⁻¹ = a²>`, realized as
//! `Z[1/2] ⋊ Z`, with explicit and power-circuit element representations.

mod conj;
mod dyadic;
mod element;
mod pc_triple;

pub use conj::{conj_bs12, conj_bs12_pc, BsConjugacy};
pub use dyadic::Dyadic;
pub use element::{BsElement, Triple};
pub use pc_triple::PcTriple;
