pub mod analysis;
pub mod error;
pub mod io;
pub mod linalg;
pub mod models;
pub mod sde;
pub mod spin;
