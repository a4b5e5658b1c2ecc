//! p-adic scalars, unramified rings and Eisenstein towers.

pub mod field;
pub mod residue;

pub use field::{Elem, FieldCtx, EXACT};
pub mod linalg;
pub mod tower;

pub use tower::{adjoin_root, TowerNode};
pub mod lifts;
pub mod scalar;

pub use lifts::{different_valuation, hensel_root, teichmuller_lift, FractionalIdealValuation};
pub use scalar::{scalar_arith, PadicScalar, ScalarOp};
pub mod descriptor;

pub use descriptor::{FieldDescriptor, PrecisionProfile};
