//! Exact spherical Heronian and Cayley-Menger friezes.

pub mod cli;
pub mod diamond;
pub mod frieze;
pub mod geometry;
pub mod io;
pub mod numeric;
pub mod symbolic;
