//! Finite-field protocol workbench: monotone span programs, linear
//! non-perfect secret sharing, and projected linear symmetric PIR, with
//! exact brute-force security audits and a deterministic execution
//! simulator.
//!
//! The three protocol families are interchangeable: a span program's matrix
//! is a secret-sharing encoder, the encoder splits into a query part and a
//! masking part of a multi-server PIR scheme, and a dealer can simulate any
//! such PIR scheme to deal shares. The conversion functions here make those
//! moves explicit and the audit module measures, by exhaustive enumeration
//! over small fields, exactly how much each protocol leaks.
//!
//! Modules, bottom up:
//!
//! * [`gf`] prime-field matrices with deterministic elimination
//! * [`access`] monotone access structures over party sets
//! * [`mmsp`] multi-target monotone span programs and their verification
//! * [`nss`] linear non-perfect secret sharing
//! * [`spir`] projected linear symmetric PIR and the conversion triangle
//! * [`audit`] exact joint-distribution security audits and entropy bounds
//! * [`simnet`] deterministic in-process multi-server execution
//!
//! Everything is desk-scale by design: fields up to 65521, exhaustive
//! enumeration guarded by explicit state budgets, all randomness drawn from
//! a pinned, portable PRNG.

pub mod access;
pub mod audit;
pub mod error;
pub mod gf;
pub mod mmsp;
pub mod nss;
pub mod samples;
pub mod simnet;
pub mod spir;
mod subsets;

pub use access::{AccessStructure, Classification, PartySet};
pub use audit::{AuditReport, JointPmf, LeakageBound};
pub use error::Error;
pub use gf::{FieldMatrix, FieldModulus};
pub use mmsp::{Mmsp, MmspVerdict};
pub use nss::{LinearNss, NssShares};
pub use simnet::{SessionConfig, SessionTrace};
pub use spir::{ProjectedLinearSpir, SpirTranscript};

/// Exact rational used for rates, bounds, and error probabilities.
pub type Rational = num_rational::Ratio<u64>;

pub(crate) mod serde_util {
    use super::Rational;

    /// Serializes a rational as the `p/q` string form used in artifacts.
    pub fn ser_ratio<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::ratio_string(*r))
    }

    /// Serializes an optional rational the same way, null when absent.
    pub fn ser_opt_ratio<S: serde::Serializer>(
        r: &Option<Rational>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => ser_ratio(r, s),
            None => s.serialize_none(),
        }
    }
}

/// Default cap on enumerated joint states for audits and searches.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Renders a rational as `p/q` with the denominator always present.
pub fn ratio_string(r: Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses the `p/q` form produced by [`ratio_string`]; bare integers are
/// accepted as `p/1`.
pub fn parse_ratio(s: &str) -> Result<Rational, Error> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: u64 = num
        .trim()
        .parse()
        .map_err(|_| Error::BadRational { text: s.to_string() })?;
    let den: u64 = den
        .trim()
        .parse()
        .map_err(|_| Error::BadRational { text: s.to_string() })?;
    if den == 0 {
        return Err(Error::BadRational { text: s.to_string() });
    }
    Ok(Rational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_string_keeps_denominator() {
        assert_eq!(ratio_string(Rational::new(0, 1)), "0/1");
        assert_eq!(ratio_string(Rational::new(1, 4)), "1/4");
        assert_eq!(ratio_string(Rational::new(2, 8)), "1/4");
        assert_eq!(ratio_string(Rational::new(3, 3)), "1/1");
    }

    #[test]
    fn parse_ratio_round_trips() {
        assert_eq!(parse_ratio("1/4").unwrap(), Rational::new(1, 4));
        assert_eq!(parse_ratio("7").unwrap(), Rational::new(7, 1));
        assert!(parse_ratio("1/0").is_err());
        assert!(parse_ratio("x/2").is_err());
    }
}
