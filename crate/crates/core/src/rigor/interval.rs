use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::dyadic::Dyadic;
use crate::error::{Error, Result};

/// A closed interval `[lo, hi]` with dyadic endpoints. Every operation
/// returns an interval containing all exact results for points drawn from
/// the operands.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DyadicInterval {
    lo: Dyadic,
    hi: Dyadic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl DyadicInterval {
    /// Panics if `lo > hi`.
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: {lo:?} > {hi:?}");
        Self { lo, hi }
    }

    pub fn try_new(lo: Dyadic, hi: Dyadic) -> Option<Self> {
        (lo <= hi).then_some(Self { lo, hi })
    }

    pub fn point(x: Dyadic) -> Self {
        Self {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn zero() -> Self {
        Self::point(Dyadic::zero())
    }

    pub fn one() -> Self {
        Self::point(Dyadic::one())
    }

    pub fn from_int(v: i64) -> Self {
        Self::point(Dyadic::from_int(v))
    }

    /// Enclosure of a rational, exact when the denominator is a power of
    /// two, otherwise of width `2^-bits`.
    pub fn from_rational(r: &BigRational, bits: i64) -> Self {
        match Dyadic::from_rational_exact(r) {
            Some(d) => Self::point(d),
            None => Self {
                lo: Dyadic::floor_rational(r, bits),
                hi: Dyadic::ceil_rational(r, bits),
            },
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn midpoint(&self) -> Dyadic {
        (&self.lo + &self.hi).shl(-1)
    }

    pub fn radius(&self) -> Dyadic {
        self.width().shl(-1)
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_rational(&self, x: &BigRational) -> bool {
        &self.lo.to_rational() <= x && x <= &self.hi.to_rational()
    }

    pub fn contains_interval(&self, other: &DyadicInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn intersects(&self, other: &DyadicInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Every point of `self` is strictly below every point of `other`.
    pub fn strictly_below(&self, other: &DyadicInterval) -> bool {
        self.hi < other.lo
    }

    /// Length of the gap separating the two intervals; zero if they meet.
    pub fn gap(&self, other: &DyadicInterval) -> Dyadic {
        if self.hi < other.lo {
            &other.lo - &self.hi
        } else if other.hi < self.lo {
            &self.lo - &other.hi
        } else {
            Dyadic::zero()
        }
    }

    pub fn hull(&self, other: &DyadicInterval) -> Self {
        Self {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn add(&self, other: &DyadicInterval) -> Self {
        Self {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &DyadicInterval) -> Self {
        Self {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn mul(&self, other: &DyadicInterval) -> Self {
        if !self.lo.is_negative() && !other.lo.is_negative() {
            return Self {
                lo: &self.lo * &other.lo,
                hi: &self.hi * &other.hi,
            };
        }
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().cloned().unwrap_or_else(Dyadic::zero);
        let hi = products.iter().max().cloned().unwrap_or_else(Dyadic::zero);
        Self { lo, hi }
    }

    /// Multiplication by `2^k`, exact.
    pub fn scale_pow2(&self, k: i64) -> Self {
        Self {
            lo: self.lo.shl(k),
            hi: self.hi.shl(k),
        }
    }

    /// Division with endpoints rounded outward to `sig` significant bits.
    pub fn div(&self, other: &DyadicInterval, sig: u64) -> Result<Self> {
        if other.contains_zero() {
            return Err(Error::DivisionByZeroInterval);
        }
        let ends = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let lo = ends
            .iter()
            .map(|(x, y)| quotient(x, y, sig, false))
            .min()
            .unwrap_or_else(Dyadic::zero);
        let hi = ends
            .iter()
            .map(|(x, y)| quotient(x, y, sig, true))
            .max()
            .unwrap_or_else(Dyadic::zero);
        Ok(Self { lo, hi })
    }

    pub fn recip(&self, sig: u64) -> Result<Self> {
        Self::one().div(self, sig)
    }

    /// Product with a rational constant.
    pub fn mul_rational(&self, r: &BigRational, sig: u64) -> Self {
        match Dyadic::from_rational_exact(r) {
            Some(d) => self.mul(&Self::point(d)),
            None => {
                let num = Self::point(Dyadic::from_bigint(r.numer().clone()));
                let den = Self::point(Dyadic::from_bigint(r.denom().clone()));
                // denominator of a normalized rational is positive
                self.mul(&num)
                    .div(&den, sig)
                    .expect("positive denominator")
            }
        }
    }

    /// Outward rounding to multiples of `2^-bits`.
    pub fn round_abs(&self, bits: i64) -> Self {
        Self {
            lo: self.lo.floor_bits(bits),
            hi: self.hi.ceil_bits(bits),
        }
    }

    /// Outward rounding to `sig` significant bits per endpoint.
    pub fn round_sig(&self, sig: u64) -> Self {
        Self {
            lo: self.lo.round_down_sig(sig),
            hi: self.hi.round_up_sig(sig),
        }
    }

    /// Decimal rendering `[lo, hi]`, rounded outward.
    pub fn to_decimal(&self, sig: usize) -> String {
        format!(
            "[{}, {}]",
            self.lo.to_decimal_down(sig),
            self.hi.to_decimal_up(sig)
        )
    }

    /// Decimal midpoint with an outward-rounded radius, `m ± r`.
    pub fn to_decimal_pm(&self, sig: usize) -> String {
        let mid = self.midpoint();
        let mid_r = mid.to_rational();
        let shown = super::dyadic::format_decimal(&mid_r, sig, false);
        let shown_r = parse_decimal(&shown).unwrap_or(mid_r);
        // radius must also cover the rounding of the displayed midpoint
        let lo_gap = &shown_r - self.lo.to_rational();
        let hi_gap = self.hi.to_rational() - &shown_r;
        let radius = if lo_gap > hi_gap { lo_gap } else { hi_gap };
        format!(
            "{shown} ± {}",
            super::dyadic::format_decimal(&radius, 3, true)
        )
    }
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mantissa, exp10) = match s.split_once('e') {
        Some((m, e)) => (m, e.parse::<i64>().ok()?),
        None => (s, 0),
    };
    let negative = mantissa.starts_with('-');
    let mantissa = mantissa.trim_start_matches('-');
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
    let scale = exp10 - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let mut r = BigRational::from_integer(digits);
    if scale >= 0 {
        r *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if negative { -r } else { r })
}

/// `x / y` rounded toward -∞ (or +∞ when `up`) to about `sig` significant
/// bits. `y` must be nonzero.
pub(crate) fn quotient(x: &Dyadic, y: &Dyadic, sig: u64, up: bool) -> Dyadic {
    if x.is_zero() {
        return Dyadic::zero();
    }
    let mag = x.floor_log2().unwrap_or(0) - y.floor_log2().unwrap_or(0);
    // result is a multiple of 2^-k
    let k = sig as i64 - mag + 1;
    let s = x.exponent() - y.exponent() + k;
    let (num, den) = if s >= 0 {
        (x.mantissa() << (s as u64), y.mantissa().clone())
    } else {
        (x.mantissa().clone(), y.mantissa() << ((-s) as u64))
    };
    let (q, r) = num.div_mod_floor(&den);
    let q = if up && !r.is_zero() { q + BigInt::one() } else { q };
    Dyadic::new(q, -k)
}

/// Applies `op` and rounds outward to `bits` fractional bits.
pub fn field_ops(
    a: &DyadicInterval,
    b: &DyadicInterval,
    op: FieldOp,
    bits: i64,
) -> Result<DyadicInterval> {
    let r = match op {
        FieldOp::Add => a.add(b),
        FieldOp::Sub => a.sub(b),
        FieldOp::Mul => a.mul(b),
        FieldOp::Div => {
            let sig = (bits + magnitude_hint(a) - magnitude_hint_lo(b) + 4).max(8) as u64;
            a.div(b, sig)?
        }
    };
    Ok(r.round_abs(bits))
}

fn magnitude_hint(a: &DyadicInterval) -> i64 {
    let m = a.lo.abs().max(a.hi.abs());
    m.floor_log2().unwrap_or(0).max(0) + 1
}

fn magnitude_hint_lo(b: &DyadicInterval) -> i64 {
    let m = b.lo.abs().min(b.hi.abs());
    m.floor_log2().unwrap_or(0)
}

impl fmt::Debug for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}

impl fmt::Display for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal(17))
    }
}
