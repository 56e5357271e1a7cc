//! Leading bits of real numbers and empirical compression rates
//! `H(α↾n)/n`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::domain::BitString;
use crate::error::{Error, Result};
use crate::machines::{shortest_programs, Machine};
use crate::rigor::DyadicInterval;

/// Precision ceiling, in bits, for bit extraction from enclosure streams.
pub const DEFAULT_PRECISION_CEILING: u32 = 1 << 14;

type EnclosureFn = dyn Fn(u32) -> Result<DyadicInterval> + Send + Sync;

/// A computable real.
#[derive(Clone)]
pub enum RealSource {
    Rational(BigRational),
    /// `f(k)` encloses the real with width at most `2^-k`; enclosures for
    /// larger `k` are nested in those for smaller `k`.
    Enclosures(Arc<EnclosureFn>),
}

impl RealSource {
    pub fn rational(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        Ok(RealSource::Rational(BigRational::new(num.into(), den.into())))
    }

    pub fn enclosures(f: impl Fn(u32) -> Result<DyadicInterval> + Send + Sync + 'static) -> Self {
        RealSource::Enclosures(Arc::new(f))
    }
}

impl fmt::Debug for RealSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealSource::Rational(r) => write!(f, "Rational({r})"),
            RealSource::Enclosures(_) => f.write_str("Enclosures(..)"),
        }
    }
}

fn bits_of(cell: &BigInt, n: u32) -> BitString {
    // cell is ⌊α·2^n⌋; its low n bits are the fractional digits
    let modulus = BigInt::one() << n;
    let low = cell.mod_floor(&modulus);
    let mut out = BitString::empty();
    for i in (0..n as u64).rev() {
        out.push(low.bit(i));
    }
    out
}

/// First `n` bits of `α - ⌊α⌋`. Dyadic rationals use their terminating
/// expansion.
pub fn rest_bits(alpha: &RealSource, n: u32) -> Result<BitString> {
    rest_bits_with(alpha, n, DEFAULT_PRECISION_CEILING)
}

pub fn rest_bits_with(alpha: &RealSource, n: u32, ceiling: u32) -> Result<BitString> {
    match alpha {
        RealSource::Rational(r) => {
            let scaled = r * BigRational::from_integer(BigInt::one() << n);
            Ok(bits_of(&scaled.floor().to_integer(), n))
        }
        RealSource::Enclosures(f) => {
            let mut k = n + 8;
            loop {
                let iv = f(k.min(ceiling))?;
                let lo = iv.lo().shl(n as i64).floor();
                let hi = iv.hi().shl(n as i64).floor();
                if lo == hi {
                    return Ok(bits_of(&lo, n));
                }
                if k >= ceiling {
                    return Err(Error::PrecisionExhausted);
                }
                k = k.saturating_mul(2);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileRow {
    pub n: u32,
    /// `None` when no program was found in the window.
    pub h_upper: Option<u32>,
}

impl ProfileRow {
    /// `h_upper / n`.
    pub fn ratio(&self) -> Option<BigRational> {
        self.h_upper
            .map(|h| BigRational::new(h.into(), self.n.into()))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CompressionProfile {
    pub rows: Vec<ProfileRow>,
}

impl CompressionProfile {
    /// CSV with columns `n,h_upper,ratio_num,ratio_den`; rows without a
    /// program read `NotFound` with empty ratio fields.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,h_upper,ratio_num,ratio_den\n");
        for row in &self.rows {
            match row.ratio() {
                Some(r) => out.push_str(&format!(
                    "{},{},{},{}\n",
                    row.n,
                    row.h_upper.expect("ratio implies h"),
                    r.numer(),
                    r.denom()
                )),
                None => out.push_str(&format!("{},NotFound,,\n", row.n)),
            }
        }
        out
    }
}

/// Upper bounds on `H_m(α↾n)` for `n = 1..=n_max`.
pub fn compression_profile(
    m: &Machine,
    alpha: &RealSource,
    n_max: u32,
    max_len: u32,
    steps: u64,
) -> Result<CompressionProfile> {
    if n_max == 0 {
        return Ok(CompressionProfile::default());
    }
    let prefixes = (1..=n_max)
        .map(|n| rest_bits(alpha, n).map(|b| (n, b)))
        .collect::<Result<Vec<_>>>()?;
    let best = shortest_programs(m, max_len, steps)?;
    Ok(CompressionProfile {
        rows: prefixes
            .into_iter()
            .map(|(n, s)| ProfileRow {
                n,
                h_upper: best.get(&s).copied(),
            })
            .collect(),
    })
}

/// `max_n (T·n - h_upper(n))`: the smallest constant `c` for which
/// `T·n - c <= h_upper(n)` holds on these rows. A statistic of the sample,
/// not a statement about the real.
pub fn deficiency_probe(profile: &CompressionProfile, t: &BigRational) -> Result<BigRational> {
    if t.is_negative() || *t > BigRational::one() {
        return Err(Error::InvalidArgument(format!("T = {t} is outside [0, 1]")));
    }
    let mut best: Option<BigRational> = None;
    for row in &profile.rows {
        let h = row.h_upper.ok_or(Error::Undefined)?;
        let v = t * BigRational::from_integer(row.n.into()) - BigRational::from_integer(h.into());
        best = Some(match best {
            Some(b) if b >= v => b,
            _ => v,
        });
    }
    best.ok_or(Error::Undefined)
}
