pub mod bgg;
pub mod exact_linalg;
pub mod forms_calculus;
pub mod gradedcat;
pub mod io;
pub mod multilinear;
pub mod serre;
pub mod sl2;
pub mod torus_model;
