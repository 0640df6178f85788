pub mod factor;
pub mod field;
pub mod fq;
pub mod poly;
pub mod ratfunc;
pub mod sample;

pub use factor::{Factorable, Factorization};
pub use field::Field;
pub use fq::{field_arith, FieldOp, Fq, FqConfig, FqElem};
pub use poly::{Poly, PolyRing};
pub use ratfunc::{RatField, RatFunc};

/// `F_q(T)`.
pub type BaseField = RatField<Fq>;
/// `F(u)` with `F = F_q(T)`.
pub type TowerField = RatField<RatField<Fq>>;
pub type BaseElem = RatFunc<FqElem>;
pub type TowerElem = RatFunc<RatFunc<FqElem>>;

pub fn base_field(fq: Fq) -> BaseField {
    RatField::new(fq, "T")
}

pub fn tower_field(fq: Fq) -> TowerField {
    RatField::new(RatField::new(fq, "T"), "u")
}
