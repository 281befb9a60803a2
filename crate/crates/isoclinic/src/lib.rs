//! Exact computer algebra for formal connections on the punctured disk,
//! opers, toral K-types and the classical local Hitchin map, for simple Lie
//! algebras of rank at most 3.

pub mod airy;
pub mod connection;
pub mod hitchin;
pub mod liealg;
pub mod ktype;
pub mod oper;
pub mod par;
pub mod linalg;
pub mod poly;
pub mod scalar;
pub mod verify;
pub mod series;
