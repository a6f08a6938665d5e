pub mod exactmath;
pub mod lattice;
pub mod expr;
pub mod glue;
pub mod lefschetz;
pub mod families;
