//! Exact algorithms for multiparameter persistence modules: finitely
//! determined Z^n-modules, indicator modules and fringe presentations,
//! finite encodings, primary decomposition, QR codes, elder morphisms and
//! one-parameter functorial bar codes.

pub mod barcode1d;
pub mod decomposition;
pub mod error;
pub mod fixtures;
pub mod fringe;
pub mod json;
pub mod linalg;
pub mod oracle;
pub mod poset;
pub mod qr;
pub mod random;
pub mod zn;

pub use error::{Error, Result};
pub use linalg::{Rat, RatMatrix};
pub use zn::{Face, FdModule, LatticeBox, ModuleHom, Point};
