//! Invariants of codimension-2 weighted complete intersection Fano 3-folds and
//! exact verification of log canonical threshold certificates.

pub mod arith;
pub mod certify;
pub mod db;
pub mod ffield;
pub mod floplocus;
pub mod isolating;
pub mod lxy;
pub mod par;
pub mod report;
pub mod wps;

pub use arith::Rational;
