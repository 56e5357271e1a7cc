//! `2^q` for rational `q` and `log₂` of positive intervals, using only exact
//! integer arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Dyadic, DyadicInterval, Precision};
use crate::error::{Error, Result};

/// Splits `q` into `k + r/b` with `0 <= r < b`.
fn split_exponent(q: &BigRational) -> (i64, BigInt, BigInt) {
    let k = q.floor().to_integer();
    let frac = q - BigRational::from_integer(k.clone());
    let k = k.to_i64().expect("exponent out of range");
    (k, frac.numer().clone(), frac.denom().clone())
}

/// `⌊2^{r/b} · 2^n⌋` for `0 < r < b`.
fn root_floor(r: &BigInt, b: &BigInt, n: u64) -> BigInt {
    let b = b.to_u32().expect("root degree out of range");
    let r = r.to_u64().expect("numerator out of range");
    let radicand = BigInt::one() << (r + n * b as u64);
    let m = radicand.nth_root(b);
    debug_assert!(num_traits::pow(m.clone(), b as usize) <= radicand);
    debug_assert!(num_traits::pow(&m + 1u32, b as usize) > radicand);
    m
}

/// Enclosure of `2^q` with relative width at most `2^-sig`; exact for
/// integer `q`.
pub fn pow2_sig(q: &BigRational, sig: u64) -> DyadicInterval {
    let (k, r, b) = split_exponent(q);
    if r.is_zero() {
        return DyadicInterval::point(Dyadic::pow2(k));
    }
    let m = root_floor(&r, &b, sig);
    let n = sig as i64;
    // 2^{r/b} is irrational for 0 < r < b with gcd(r, b) = 1
    DyadicInterval::new(
        Dyadic::new(m.clone(), k - n),
        Dyadic::new(m + 1u32, k - n),
    )
}

/// Enclosure of `2^q` of width at most `eps`; exact for integer `q`.
pub fn pow2(q: &BigRational, eps: Precision) -> DyadicInterval {
    let k = q.floor().to_integer().to_i64().unwrap_or(0);
    // 2^{r/b} in [1, 2) is scaled by 2^k, so its absolute width needs k more bits
    let sig = (eps.bits() as i64 + k.max(0) + 1).max(2) as u64;
    pow2_sig(q, sig)
}

/// Bound on `log₂ x` for positive `x` from `n` binary digits, squaring at
/// `p` significant bits. Lower bound unless `up`.
fn log2_bound(x: &Dyadic, n: u32, p: u64, up: bool) -> Dyadic {
    let k = x.floor_log2().expect("positive argument");
    let mut y = x.shl(-k);
    let two = Dyadic::from_int(2);
    let one = Dyadic::one();
    let mut acc = BigInt::zero();
    let mut exhausted = y == one;
    let mut digits = 0u32;
    while digits < n && !exhausted {
        let sq = &y * &y;
        y = if up {
            sq.round_up_sig(p)
        } else {
            sq.round_down_sig(p)
        };
        acc <<= 1u32;
        if y >= two {
            acc += 1u32;
            y = y.shl(-1);
        }
        digits += 1;
        exhausted = y == one;
    }
    let frac = Dyadic::new(acc, -(digits as i64));
    let base = &Dyadic::from_int(k) + &frac;
    if up && !exhausted {
        &base + &Dyadic::pow2(-(digits as i64))
    } else {
        base
    }
}

/// Digit counts at which [`log2`] evaluates; every call intersects the
/// enclosures of all rungs up to the one its precision needs, so a finer
/// request always returns a subinterval of a coarser one.
fn ladder(bits: u32) -> impl Iterator<Item = u32> {
    let top = bits + 2;
    let mut rung = 16u32;
    std::iter::from_fn(move || {
        if rung == u32::MAX {
            return None;
        }
        let here = rung.min(top);
        rung = if here == top { u32::MAX } else { rung.saturating_mul(2) };
        Some(here)
    })
}

fn log2_at(a: &DyadicInterval, n: u32) -> DyadicInterval {
    let p = n as u64 + 8;
    let lo = log2_bound(a.lo(), n, p, false);
    let hi = log2_bound(a.hi(), n, p, true);
    DyadicInterval::new(lo, hi)
}

/// Enclosure of `{log₂ x : x ∈ a}`.
pub fn log2(a: &DyadicInterval, eps: Precision) -> Result<DyadicInterval> {
    if !a.lo().is_positive() {
        return Err(Error::NonPositiveArgument);
    }
    let mut out: Option<DyadicInterval> = None;
    for n in ladder(eps.bits()) {
        let iv = log2_at(a, n);
        out = Some(match out {
            None => iv,
            Some(prev) => DyadicInterval::new(
                prev.lo().clone().max(iv.lo().clone()),
                prev.hi().clone().min(iv.hi().clone()),
            ),
        });
    }
    Ok(out.expect("ladder is nonempty"))
}

/// Enclosure of `log₂ r` for a positive rational.
pub fn log2_rational(r: &BigRational, eps: Precision) -> Result<DyadicInterval> {
    if !r.is_positive() {
        return Err(Error::NonPositiveArgument);
    }
    let k = r.numer().bits() as i64 - r.denom().bits() as i64;
    // relative enclosure of r fine enough that its image width is below eps/2
    let bits = eps.bits() as i64 + 3 - k;
    let a = DyadicInterval::from_rational(r, bits);
    log2(&a, eps.finer(1))
}
