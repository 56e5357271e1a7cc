use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An exact dyadic rational `mant · 2^exp`.
///
/// Normalized so that a nonzero mantissa is odd and zero has exponent 0;
/// structural equality is therefore numeric equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            return Self::zero();
        }
        let tz = mant.trailing_zeros().unwrap_or(0);
        Self {
            mant: mant >> tz,
            exp: exp + tz as i64,
        }
    }

    pub fn zero() -> Self {
        Self {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        Self::new(BigInt::from(v), 0)
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Self::new(v, 0)
    }

    pub fn from_biguint(v: &BigUint) -> Self {
        Self::new(BigInt::from_biguint(Sign::Plus, v.clone()), 0)
    }

    /// `2^k`.
    pub fn pow2(k: i64) -> Self {
        Self {
            mant: BigInt::one(),
            exp: k,
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn abs(&self) -> Self {
        Self {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    /// `⌊log₂|x|⌋` for nonzero `x`.
    pub fn floor_log2(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + self.mant.bits() as i64 - 1)
        }
    }

    /// `x · 2^k`, exact.
    pub fn shl(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    pub fn is_integer(&self) -> bool {
        self.exp >= 0 || self.is_zero()
    }

    /// Largest multiple of `2^-bits` not above `self`.
    pub fn floor_bits(&self, bits: i64) -> Self {
        if self.exp >= -bits {
            return self.clone();
        }
        let shift = (-bits - self.exp) as u64;
        // arithmetic shift on BigInt rounds toward negative infinity
        Self::new(&self.mant >> shift, -bits)
    }

    /// Smallest multiple of `2^-bits` not below `self`.
    pub fn ceil_bits(&self, bits: i64) -> Self {
        -(-self).floor_bits(bits)
    }

    /// Round toward -∞ keeping at most `sig` significant bits.
    pub fn round_down_sig(&self, sig: u64) -> Self {
        let len = self.mant.bits();
        if len <= sig {
            return self.clone();
        }
        let shift = (len - sig) as i64;
        self.floor_bits(-(self.exp + shift))
    }

    /// Round toward +∞ keeping at most `sig` significant bits.
    pub fn round_up_sig(&self, sig: u64) -> Self {
        -(-self).round_down_sig(sig)
    }

    /// `⌊x⌋` as an integer.
    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << (self.exp as u64)
        } else {
            &self.mant >> ((-self.exp) as u64)
        }
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << (self.exp as u64))
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << ((-self.exp) as u64))
        }
    }

    /// Largest multiple of `2^-bits` not above `r`.
    pub fn floor_rational(r: &BigRational, bits: i64) -> Self {
        let scaled = scale_pow2(r, bits);
        Self::new(scaled.floor().to_integer(), -bits)
    }

    /// Smallest multiple of `2^-bits` not below `r`.
    pub fn ceil_rational(r: &BigRational, bits: i64) -> Self {
        let scaled = scale_pow2(r, bits);
        Self::new(scaled.ceil().to_integer(), -bits)
    }

    /// Exact conversion when `r` has a power-of-two denominator.
    pub fn from_rational_exact(r: &BigRational) -> Option<Self> {
        let den = r.denom();
        let tz = den.trailing_zeros()?;
        if (den >> tz).is_one() {
            Some(Self::new(r.numer().clone(), -(tz as i64)))
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        let len = self.mant.bits() as i64;
        let keep = 60.min(len);
        let top = (&self.mant >> ((len - keep) as u64)).to_f64().unwrap_or(0.0);
        let e = self.exp + len - keep;
        // scale in two steps to avoid overflow of 2^e for large |e|
        let half = e / 2;
        top * 2f64.powi(half as i32) * 2f64.powi((e - half) as i32)
    }

    /// Decimal rendering rounded toward -∞ with `sig` significant digits.
    pub fn to_decimal_down(&self, sig: usize) -> String {
        format_decimal(&self.to_rational(), sig, false)
    }

    /// Decimal rendering rounded toward +∞ with `sig` significant digits.
    pub fn to_decimal_up(&self, sig: usize) -> String {
        format_decimal(&self.to_rational(), sig, true)
    }
}

fn scale_pow2(r: &BigRational, bits: i64) -> BigRational {
    if bits >= 0 {
        r * BigRational::from_integer(BigInt::one() << (bits as u64))
    } else {
        r / BigRational::from_integer(BigInt::one() << ((-bits) as u64))
    }
}

fn pow10(k: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), k as usize)
}

/// Fixed number of significant decimal digits, directed rounding, trailing
/// zeros trimmed. Scientific notation outside `[1e-4, 1e16)`.
pub fn format_decimal(r: &BigRational, sig: usize, round_up: bool) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let sig = sig.max(1) as i64;
    // decimal exponent e with 10^e <= |r| < 10^(e+1)
    let abs = r.abs();
    let mut e = {
        let est = abs.numer().bits() as f64 - abs.denom().bits() as f64;
        (est * std::f64::consts::LOG10_2).floor() as i64
    };
    let ten_pow = |k: i64| -> BigRational {
        if k >= 0 {
            BigRational::from_integer(pow10(k as u32))
        } else {
            BigRational::new(BigInt::one(), pow10((-k) as u32))
        }
    };
    while ten_pow(e) > abs {
        e -= 1;
    }
    while ten_pow(e + 1) <= abs {
        e += 1;
    }
    let scale = e - sig + 1;
    let scaled = r / ten_pow(scale);
    let mut digits_int = if round_up {
        scaled.ceil().to_integer()
    } else {
        scaled.floor().to_integer()
    };
    let negative = digits_int.is_negative();
    digits_int = digits_int.abs();
    let mut digits = digits_int.to_string();
    // rounding may carry into an extra digit
    if digits.len() as i64 > sig {
        e += digits.len() as i64 - sig;
    }
    let sign = if negative { "-" } else { "" };
    if (-4..16).contains(&e) {
        let body = if scale >= 0 {
            format!("{digits}{}", "0".repeat(scale as usize))
        } else {
            let frac_len = (-scale) as usize;
            if digits.len() <= frac_len {
                digits = format!("{}{}", "0".repeat(frac_len - digits.len() + 1), digits);
            }
            let (int_part, frac_part) = digits.split_at(digits.len() - frac_len);
            let frac_part = frac_part.trim_end_matches('0');
            if frac_part.is_empty() {
                int_part.to_string()
            } else {
                format!("{int_part}.{frac_part}")
            }
        };
        format!("{sign}{body}")
    } else {
        let (lead, rest) = digits.split_at(1);
        let rest = rest.trim_end_matches('0');
        let exp10 = scale + digits.len() as i64 - 1;
        if rest.is_empty() {
            format!("{sign}{lead}e{exp10}")
        } else {
            format!("{sign}{lead}.{rest}e{exp10}")
        }
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.mant.sign(), other.mant.sign()) {
            (a, b) if a != b => return sign_rank(a).cmp(&sign_rank(b)),
            (Sign::NoSign, _) => return Ordering::Equal,
            _ => {}
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << ((self.exp - e) as u64);
        let b = &other.mant << ((other.exp - e) as u64);
        a.cmp(&b)
    }
}

fn sign_rank(s: Sign) -> i8 {
    match s {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(rhs.exp);
        let a = &self.mant << ((self.exp - e) as u64);
        let b = &rhs.mant << ((rhs.exp - e) as u64);
        Dyadic::new(a + b, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        self + &(-rhs)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &rhs.mant, self.exp + rhs.exp)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: Dyadic) -> Dyadic {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp >= 0 {
            write!(f, "{}", self.floor())
        } else {
            write!(f, "{}/2^{}", self.mant, -self.exp)
        }
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_down(17))
    }
}
