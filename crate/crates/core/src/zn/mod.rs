//! Finitely determined Z^n-modules on lattice boxes.

mod face;
mod hom;
mod lattice_box;
mod module;
mod presentation;
pub mod socle;

pub use face::Face;
pub use hom::{is_injective_hom, is_surjective_hom, ModuleHom};
pub use lattice_box::{embed, leq, parse_point, restrict, LatticeBox, Point};
pub use module::{
    global_support, hilbert, localize, matlis_dual, quotient_restriction, rank_function,
    structure_map, validate, FdModule,
};
pub use presentation::{from_presentation, Relation};
pub use socle::{closed_socle_along, socle_pieces, top_along, top_pieces, SoclePiece, TopPiece};
