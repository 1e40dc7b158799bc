pub mod cfrac;
pub mod corpus;
pub mod error;
pub mod exponents;
pub mod factor;
pub mod field;
pub mod laurent;
pub mod random;
pub mod reduce;
pub mod roots;
pub mod tpoly;
pub mod xpoly;

pub use error::{Error, Result};
pub use field::{Elem, FieldSpec, Field, FqElement};
pub use tpoly::{AbsValue, RatFn, TPoly};
pub use laurent::{LaurentSeries, OnExhaust, Origin, PrecisionBudget};
pub use xpoly::XPoly;
