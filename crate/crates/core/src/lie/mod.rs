//! Free Lie algebras, `t_n`, its enveloping algebra and special derivations.

pub mod assoc;
pub mod env;
pub mod free;
pub mod numeric;
pub mod sder;
pub mod tn;
pub mod trees;
