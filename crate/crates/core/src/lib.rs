pub mod arith;
pub mod chambers;
pub mod cone;
pub mod error;
pub mod model;
pub mod mw;
pub mod parse;
pub mod report;
pub mod verifier;

pub use arith::{Rational, RationalVector};
pub use cone::{Cone, Membership};
pub use error::{Error, Result};
pub use parse::{parse_class, parse_divisor};
pub use report::Report;
pub use mw::{act, normalize_to_pi, transvection, MWElement, Transvection};
pub use model::{
    pair, triple, curve_square, named_class, relative_project, ClassName, CurveClass,
    DivisorClass, NamedClass, NetConfig, RelativeClass,
};
