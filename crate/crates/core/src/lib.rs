pub mod lattice;
pub mod matrix;
pub mod na_theta;
pub mod pl_geometry;
pub mod puiseux;
pub mod rational;
pub mod schema;
pub mod trop_av;
pub mod trop_theta;
