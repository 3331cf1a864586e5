pub mod checks;
pub mod classical;
pub mod error;
pub mod exactalg;
pub mod homspace;
pub mod icmod;
pub mod kl;
pub mod pipeline;
pub mod quiver;
pub mod rootsystem;
pub mod schubert;
pub mod soergel;

pub use error::{Error, Result};
