pub mod certificate;
pub mod chromatic;
pub mod error;
pub mod formal_group;
pub mod lubin_tate;
pub mod padic;
pub mod ring;
pub mod series;
pub mod suites;
pub mod thh;

pub use error::{Error, Result};
