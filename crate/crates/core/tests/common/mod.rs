//! Independent oracles: exact rational arithmetic, bisection for roots and
//! an atanh series for logarithms. Nothing here calls the library's
//! numerics.

#![allow(dead_code)]

use ait_thermo::DyadicInterval;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `[lo, hi]` known to contain a real.
#[derive(Clone, Debug)]
pub struct Bracket {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Bracket {
    pub fn point(x: BigRational) -> Self {
        Self { lo: x.clone(), hi: x }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn two_pow(k: i64) -> BigRational {
    if k >= 0 {
        BigRational::from_integer(BigInt::one() << k as u64)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-k) as u64)
    }
}

/// `2^e` by bisection on `x^b = 2^r` over exact rationals, `bits` steps.
pub fn pow2_bracket(e: &BigRational, bits: u32) -> Bracket {
    let k = e.floor().to_integer();
    let frac = e - BigRational::from_integer(k.clone());
    let k = k.to_i64().unwrap();
    if frac.is_zero() {
        return Bracket::point(two_pow(k));
    }
    let r = frac.numer().to_i64().unwrap();
    let b = frac.denom().to_usize().unwrap();
    let target = two_pow(r);
    let (mut lo, mut hi) = (BigRational::one(), q(2, 1));
    for _ in 0..bits {
        let mid = (&lo + &hi) / q(2, 1);
        if num_traits::pow(mid.clone(), b) <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let scale = two_pow(k);
    Bracket {
        lo: lo * &scale,
        hi: hi * scale,
    }
}

/// `ln y` for `1 <= y <= 2` from `2 Σ z^{2i+1}/(2i+1)`, `z = (y-1)/(y+1)`.
fn ln_unit(y: &BigRational, bits: u32) -> Bracket {
    let z = (y - BigRational::one()) / (y + BigRational::one());
    let z2 = &z * &z;
    // z <= 1/3, so each term shrinks by at least 9
    let terms = bits / 3 + 4;
    let mut sum = BigRational::zero();
    let mut power = z.clone();
    for i in 0..terms {
        sum += &power / BigRational::from_integer((2 * i + 1).into());
        power *= &z2;
    }
    let two = q(2, 1);
    let lo = &sum * &two;
    // remainder: 2 z^{2N+1} / ((2N+1)(1 - z²))
    let rem = &two * &power
        / (BigRational::from_integer((2 * terms + 1).into()) * (BigRational::one() - &z2));
    Bracket { lo: lo.clone(), hi: lo + rem }
}

/// `log₂ x` for positive rational `x`.
pub fn log2_point(x: &BigRational, bits: u32) -> Bracket {
    assert!(x.is_positive());
    let mut k = x.numer().bits() as i64 - x.denom().bits() as i64;
    let mut y = x * two_pow(-k);
    while y < BigRational::one() {
        y *= q(2, 1);
        k -= 1;
    }
    while y >= q(2, 1) {
        y /= q(2, 1);
        k += 1;
    }
    let ln_y = ln_unit(&y, bits);
    let ln2 = ln_unit(&q(2, 1), bits);
    let kk = BigRational::from_integer(k.into());
    Bracket {
        lo: &kk + &ln_y.lo / &ln2.hi,
        hi: kk + &ln_y.hi / &ln2.lo,
    }
}

/// `log₂` over a positive bracket (monotone).
pub fn log2_bracket(x: &Bracket, bits: u32) -> Bracket {
    Bracket {
        lo: log2_point(&x.lo, bits).lo,
        hi: log2_point(&x.hi, bits).hi,
    }
}

/// Closed-form `[Z, F, E, S]` at temperature `t`.
pub struct ClosedForm {
    pub z: Bracket,
    pub f: Bracket,
    pub e: Bracket,
    pub s: Bracket,
}

impl ClosedForm {
    pub fn get(&self, sym: &str) -> &Bracket {
        match sym {
            "Z" => &self.z,
            "F" => &self.f,
            "E" => &self.e,
            _ => &self.s,
        }
    }
}

fn finish(t: &BigRational, z: Bracket, e: Bracket, bits: u32) -> ClosedForm {
    let l = log2_bracket(&z, bits);
    let f = Bracket {
        lo: -(t * &l.hi),
        hi: -(t * &l.lo),
    };
    let s = Bracket {
        lo: (&e.lo - &f.hi) / t,
        hi: (&e.hi - &f.lo) / t,
    };
    ClosedForm { z, f, e, s }
}

/// Two-level system: `Z = y + y²`, `E = (1 + 2y)/(1 + y)`, `y = 2^{-1/T}`.
pub fn machine_b(t: &BigRational, bits: u32) -> ClosedForm {
    let y = pow2_bracket(&-t.recip(), bits);
    let one = BigRational::one();
    let z = Bracket {
        lo: &y.lo + &y.lo * &y.lo,
        hi: &y.hi + &y.hi * &y.hi,
    };
    let e = Bracket {
        lo: (&one + q(2, 1) * &y.lo) / (&one + &y.lo),
        hi: (&one + q(2, 1) * &y.hi) / (&one + &y.hi),
    };
    finish(t, z, e, bits)
}

/// Unary domain: `Z = 1/(2^{1/T} - 1)`, `E = 2^{1/T}/(2^{1/T} - 1)`.
pub fn machine_o(t: &BigRational, bits: u32) -> ClosedForm {
    let w = pow2_bracket(&t.recip(), bits);
    let one = BigRational::one();
    let z = Bracket {
        lo: &one / (&w.hi - &one),
        hi: &one / (&w.lo - &one),
    };
    let e = Bracket {
        lo: &w.hi / (&w.hi - &one),
        hi: &w.lo / (&w.lo - &one),
    };
    // F = T log₂(2^{1/T} - 1) directly, rather than through Z
    let l = log2_bracket(
        &Bracket {
            lo: &w.lo - &one,
            hi: &w.hi - &one,
        },
        bits,
    );
    let f = Bracket {
        lo: t * &l.lo,
        hi: t * &l.hi,
    };
    let s = Bracket {
        lo: (&e.lo - &f.hi) / t,
        hi: (&e.hi - &f.lo) / t,
    };
    ClosedForm { z, f, e, s }
}

/// Whether the enclosure meets the bracket.
pub fn meets(iv: &DyadicInterval, b: &Bracket) -> bool {
    iv.lo().to_rational() <= b.hi && b.lo <= iv.hi().to_rational()
}

/// Whether the enclosure contains the whole bracket.
pub fn covers(iv: &DyadicInterval, b: &Bracket) -> bool {
    iv.lo().to_rational() <= b.lo && b.hi <= iv.hi().to_rational()
}

/// Distance between two enclosures (zero when they meet).
pub fn gap(a: &DyadicInterval, b: &DyadicInterval) -> f64 {
    a.gap(b).to_f64()
}

/// First `n` fractional bits of `p/d` by long division.
pub fn long_division(p: u64, d: u64, n: usize) -> String {
    let mut r = p % d;
    let mut out = String::new();
    for _ in 0..n {
        r *= 2;
        if r >= d {
            out.push('1');
            r -= d;
        } else {
            out.push('0');
        }
    }
    out
}
