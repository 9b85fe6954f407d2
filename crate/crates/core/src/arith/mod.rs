pub mod enumerate;
pub mod fp;
pub mod intfactor;
pub mod lattice;
pub mod matrix;
pub mod poly;
pub mod zfactor;
pub mod ring;
