//! Finite posets, poset modules, upsets and downsets in Z^n, and finite encodings.

mod encoding;
mod finite;
mod zn_sets;

pub use encoding::{encode, isotypic_regions, isotypic_upsets, uptight_poset};
pub use finite::{pullback_module, Domain, FinitePoset, PosetModule, PosetMorphism, Pullback};
pub use zn_sets::{downset_contains, upset_contains, DownsetZn, Piece, UpsetZn};
