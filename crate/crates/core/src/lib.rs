pub mod arith;
pub mod certificate;
pub(crate) mod enumerate;
pub mod error;
pub mod field;
pub mod fq;
pub mod gauss;
pub mod hilbert;
pub(crate) mod local;
pub mod place;
pub mod poly;
pub mod quadform;
pub mod residue;
pub mod ring;
pub mod witness;
