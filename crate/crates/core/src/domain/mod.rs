//! Abstract domains: abstract bits, the bitwise domain, signed and unsigned
//! intervals, and their reduced product.

pub mod bit;
pub mod bitwise;
pub mod interval;
pub mod product;

pub use bit::AbstractBit;
pub use bitwise::{infer_mul_operand, mod_inverse, Bits};
pub use interval::{SInterval, UInterval};
pub use product::{AbsValue, DEFAULT_CONCRETIZE_LIMIT};
