//! Validated arithmetic on intervals with dyadic-rational endpoints.

mod dyadic;
mod elementary;
mod interval;

pub use dyadic::{format_decimal, Dyadic};
pub use elementary::{log2, log2_rational, pow2, pow2_sig};
pub use interval::{field_ops, DyadicInterval, FieldOp};

use num_rational::BigRational;
use num_traits::Signed;

use crate::error::{Error, Result};

/// A target width `2^-bits`. Requested tolerances are rounded down to the
/// nearest power of two, so a result honoring the precision also honors
/// the tolerance it was built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Precision {
    bits: u32,
}

impl Precision {
    pub const fn from_bits(bits: u32) -> Self {
        Self { bits }
    }

    /// Largest `2^-k <= eps`.
    pub fn from_rational(eps: &BigRational) -> Result<Self> {
        if !eps.is_positive() {
            return Err(Error::InvalidPrecision(eps.to_string()));
        }
        let mut k = (eps.denom().bits() as i64 - eps.numer().bits() as i64).max(0) as u32;
        while Dyadic::pow2(-(k as i64)).to_rational() > *eps {
            k += 1;
        }
        while k > 0 && Dyadic::pow2(-(k as i64 - 1)).to_rational() <= *eps {
            k -= 1;
        }
        Ok(Self { bits: k })
    }

    /// `10^-k` rounded down to a power of two.
    pub fn decimal(k: u32) -> Self {
        let eps = BigRational::new(1.into(), num_traits::pow(num_bigint::BigInt::from(10), k as usize));
        Self::from_rational(&eps).expect("positive")
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn eps(self) -> Dyadic {
        Dyadic::pow2(-(self.bits as i64))
    }

    /// A precision `2^-extra` times finer.
    pub fn finer(self, extra: u32) -> Self {
        Self {
            bits: self.bits + extra,
        }
    }
}

impl Default for Precision {
    /// About `10^-9`.
    fn default() -> Self {
        Self::from_bits(30)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_rounds_down() {
        let p = Precision::from_rational(&BigRational::new(1.into(), 1000.into())).unwrap();
        assert_eq!(p.bits(), 10);
        assert_eq!(Precision::decimal(9).bits(), 30);
        assert_eq!(Precision::from_rational(&BigRational::new(1.into(), 4.into())).unwrap().bits(), 2);
        assert_eq!(Precision::from_rational(&BigRational::from_integer(3.into())).unwrap().bits(), 0);
        assert!(Precision::from_rational(&BigRational::from_integer(0.into())).is_err());
    }
}
