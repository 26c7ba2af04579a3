pub mod bier;
pub mod catalog;
pub mod charmap;
pub mod error;
pub mod facering;
pub mod fuzz;
pub mod gf2;
pub mod homology;
pub mod instance;
pub mod report;
pub mod shelling;
pub mod simplicial;
pub mod smallcover;

pub use error::{Error, Result};
