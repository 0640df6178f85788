//! Experiment drivers behind the `drinfeld-lab` CLI. Every driver returns a
//! JSON report; inequality failures come back as [`LabError::Violation`]
//! carrying that report so the caller can still write it out.

mod enumerate;
mod family;
mod height_cmd;
mod jplaces;
pub mod schema;
mod torsion_cmd;
mod zimmer;

pub use enumerate::{enumerate_modules, EnumerateConfig, EnumerateResult};
pub use family::{default_family, family_experiment, parse_family, FamilyConfig, FamilyResult};
pub use height_cmd::{height_report, parse_height_instance, HeightInstance};
pub use jplaces::{scan_jplaces, JplacesConfig, JplacesResult};
pub use torsion_cmd::torsion_report;
pub use zimmer::{sample_instance, scan_zimmer, ZimmerConfig, ZimmerResult};

use serde_json::Value;

use crate::algebra::factor::is_irreducible;
use crate::algebra::{Fq, FqConfig, FqElem, PolyRing};
use crate::error::AlgebraError;
use schema::SchemaError;

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("schema error at {0}")]
    Schema(#[from] SchemaError),
    #[error("inequality violated: {summary}")]
    Violation { summary: String, report: Value },
    #[error("resource guard: {0}")]
    Resource(String),
    #[error(transparent)]
    Algebra(AlgebraError),
}

impl From<AlgebraError> for LabError {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::Resource(s) => LabError::Resource(s),
            other => LabError::Algebra(other),
        }
    }
}

impl LabError {
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Violation { .. } => 2,
            LabError::Resource(_) => 3,
            LabError::Schema(_) => 4,
            LabError::Algebra(_) => 1,
        }
    }
}

pub type LabResult<T> = std::result::Result<T, LabError>;

/// `F_q` for a prime power `q`, with the first monic irreducible modulus in
/// lexicographic order when `q` is not prime.
pub fn default_field(q: u64) -> crate::error::Result<Fq> {
    let (p, e) = prime_power(q).ok_or_else(|| AlgebraError::Config(format!("q = {q} is not a prime power")))?;
    if e == 1 {
        return Fq::prime(p as u32);
    }
    let fp = Fq::prime(p as u32)?;
    let ring = PolyRing::new(fp, "x");
    for idx in 0..p.pow(e) {
        let mut c: Vec<u32> = (0..e).map(|i| ((idx / p.pow(i)) % p) as u32).collect();
        c.push(1);
        let poly = ring.from_coeffs(c.iter().map(|&x| FqElem(x)).collect());
        if is_irreducible(&ring, &poly) {
            return Fq::new(FqConfig { p: p as u32, e, modulus: c });
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut e = 0;
    let mut n = q;
    while n.is_multiple_of(p) {
        n /= p;
        e += 1;
    }
    (n == 1).then_some((p, e))
}
