//! Partition function, free energy, energy and entropy of a length spectrum.
//!
//! All four quantities are computed from the two length-grouped sums
//! `Z_L = Σ_{n<=L} m(n) 2^{-n/T}` and `N_L = Σ_{n<=L} n m(n) 2^{-n/T}`:
//!
//! * `Z = lim Z_L`
//! * `F = -T log₂ Z`
//! * `E = N / Z`
//! * `S = (E - F) / T`
//!
//! The truncation `L` and the working precision are raised until every
//! enclosure, tail included, is narrower than the requested width.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rigor::{log2, pow2_sig, Dyadic, DyadicInterval, Precision};
use crate::spectrum::{LengthSpectrum, TailSums};

/// A positive rational temperature.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Temperature {
    value: BigRational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Zone {
    /// `0 < T < 1`: every realizable spectrum converges.
    SubUnit,
    /// `T = 1`: the Kraft sum.
    Unit,
    /// `T > 1`.
    SuperUnit,
}

impl Temperature {
    pub fn new(value: BigRational) -> Result<Self> {
        if !value.is_positive() {
            return Err(Error::InvalidTemperature(value.to_string()));
        }
        Ok(Self { value })
    }

    pub fn ratio(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidTemperature(format!("{num}/0")));
        }
        Self::new(BigRational::new(num.into(), den.into()))
    }

    pub fn one() -> Self {
        Self {
            value: BigRational::one(),
        }
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn inverse(&self) -> BigRational {
        self.value.recip()
    }

    pub fn zone(&self) -> Zone {
        match self.value.cmp(&BigRational::one()) {
            Ordering::Less => Zone::SubUnit,
            Ordering::Equal => Zone::Unit,
            Ordering::Greater => Zone::SuperUnit,
        }
    }

    /// `⌊log₂ T⌋`.
    fn floor_log2(&self) -> i64 {
        let n = self.value.numer().bits() as i64;
        let d = self.value.denom().bits() as i64;
        // bit lengths bracket log₂ within one
        n - d - 1
    }
}

impl FromStr for Temperature {
    type Err = Error;

    /// Parses `num/den` or an integer.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidTemperature(s.to_string());
        let value = match s.trim().split_once('/') {
            Some((n, d)) => {
                let n: num_bigint::BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: num_bigint::BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                BigRational::new(n, d)
            }
            None => BigRational::from_integer(s.trim().parse().map_err(|_| bad())?),
        };
        Self::new(value)
    }
}

impl fmt::Display for Temperature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.value.numer(), self.value.denom())
    }
}

impl fmt::Debug for Temperature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T={self}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantity {
    Z,
    F,
    E,
    S,
}

impl Quantity {
    pub const ALL: [Quantity; 4] = [Quantity::Z, Quantity::F, Quantity::E, Quantity::S];

    pub fn symbol(self) -> &'static str {
        match self {
            Quantity::Z => "Z",
            Quantity::F => "F",
            Quantity::E => "E",
            Quantity::S => "S",
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "Z" | "z" => Ok(Quantity::Z),
            "F" | "f" => Ok(Quantity::F),
            "E" | "e" => Ok(Quantity::E),
            "S" | "s" => Ok(Quantity::S),
            other => Err(Error::InvalidArgument(format!("unknown quantity {other:?}"))),
        }
    }
}

/// Per-quantity bounds on `|Q - Q_L|`, the effect of truncating at `L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailCertificates {
    pub z: Dyadic,
    pub f: Dyadic,
    pub e: Dyadic,
    pub s: Dyadic,
}

/// Joint enclosures of the four quantities at one temperature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThermoReport {
    pub temperature: Temperature,
    pub z: DyadicInterval,
    pub f: DyadicInterval,
    pub e: DyadicInterval,
    pub s: DyadicInterval,
    pub truncation_length: u32,
    pub tails: TailCertificates,
}

impl ThermoReport {
    pub fn get(&self, q: Quantity) -> &DyadicInterval {
        match q {
            Quantity::Z => &self.z,
            Quantity::F => &self.f,
            Quantity::E => &self.e,
            Quantity::S => &self.s,
        }
    }

    pub fn tail(&self, q: Quantity) -> &Dyadic {
        match q {
            Quantity::Z => &self.tails.z,
            Quantity::F => &self.tails.f,
            Quantity::E => &self.tails.e,
            Quantity::S => &self.tails.s,
        }
    }
}

/// Resource ceilings for evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalConfig {
    /// Largest truncation length tried.
    pub max_length: u32,
    /// Largest absolute working precision in bits.
    pub max_work_bits: u32,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            max_length: 1 << 13,
            max_work_bits: 1 << 13,
        }
    }
}

fn bit_len(x: u32) -> u32 {
    32 - x.leading_zeros()
}

/// `[2^{0}, 2^{-1/T}, …, 2^{-upto/T}]` with relative error below `2^-sig`.
fn weight_table(t: &Temperature, upto: u32, sig: u64) -> Vec<DyadicInterval> {
    let guard = sig + 2 * bit_len(upto) as u64 + 8;
    let base = pow2_sig(&-t.inverse(), guard);
    let mut out = Vec::with_capacity(upto as usize + 1);
    let mut w = DyadicInterval::one();
    out.push(w.clone());
    for _ in 0..upto {
        w = w.mul(&base).round_sig(guard);
        out.push(w.clone());
    }
    out
}

struct PartialSums {
    z: DyadicInterval,
    n: DyadicInterval,
}

/// Enclosures of `Z_L` and `N_L`; each term rounded outward to `work` bits.
fn partial_sums(mults: &[BigUint], t: &Temperature, upto: u32, work: u32) -> PartialSums {
    let weights = weight_table(t, upto, work as u64 + 8);
    let mut z = DyadicInterval::zero();
    let mut n_sum = DyadicInterval::zero();
    for n in 1..=upto as usize {
        let m = &mults[n];
        if m.is_zero() {
            continue;
        }
        let term = DyadicInterval::point(Dyadic::from_biguint(m))
            .mul(&weights[n])
            .round_abs(work as i64);
        n_sum = n_sum.add(&term.mul(&DyadicInterval::from_int(n as i64)));
        z = z.add(&term);
    }
    PartialSums { z, n: n_sum }
}

/// Enclosure of `Σ_{n<=L} m(n) 2^{-n/T}` of width at most `eps`.
pub fn partial_z(spec: &LengthSpectrum, t: &Temperature, len: u32, eps: Precision) -> DyadicInterval {
    let mults = spec.multiplicities(len);
    let work = eps.bits() + 4 + bit_len(len);
    partial_sums(&mults, t, len, work).z.round_abs(eps.bits() as i64 + 2)
}

/// The spectrum-independent bound `x^L/(1-x)`, `x = 2^{1-1/T}`, on
/// `Σ_{n>=L} m(n) 2^{-n/T}` for any spectrum with `m(n) <= 2^n`.
pub fn generic_tail_bound_z(t: &Temperature, len: u32) -> Result<Dyadic> {
    require_sub_unit(t)?;
    let e = BigRational::one() - t.inverse();
    let x = pow2_sig(&e, 64);
    let x_l = pow2_sig(&(e * BigRational::from_integer(len.into())), 64);
    let one_minus = DyadicInterval::one().sub(&x);
    Ok(DyadicInterval::point(x_l.hi().clone())
        .div(&DyadicInterval::point(one_minus.lo().clone()), 64)?
        .hi()
        .clone())
}

fn require_sub_unit(t: &Temperature) -> Result<()> {
    if t.zone() != Zone::SubUnit {
        return Err(Error::ZoneError {
            expected: "0 < T < 1",
            got: t.to_string(),
        });
    }
    Ok(())
}

/// Certified upper bound on `Σ_{n>=L} m(n) 2^{-n/T}` for `T < 1`: the
/// smaller of the generic Kraft bound and the spectrum's own majorant.
pub fn tail_bound_z(spec: &LengthSpectrum, t: &Temperature, len: u32) -> Result<Dyadic> {
    require_sub_unit(t)?;
    spec.tail_sums(t, len)
        .map(|tails| tails.z)
        .ok_or_else(|| Error::NoConvergenceCertificate(t.to_string()))
}

struct Derived {
    f: DyadicInterval,
    e: DyadicInterval,
    s: DyadicInterval,
}

fn derive(z: &DyadicInterval, n: &DyadicInterval, t: &Temperature, bits: u32) -> Result<Derived> {
    let sig = bits as u64 + 32;
    let e = n.div(z, sig)?;
    let log = log2(z, Precision::from_bits(bits + 4 + t.floor_log2().unsigned_abs() as u32))?;
    let f = log.mul_rational(&-t.value().clone(), sig);
    let s = e.sub(&f).mul_rational(&t.inverse(), sig);
    Ok(Derived { f, e, s })
}

fn certificate(full: &DyadicInterval, partial: &DyadicInterval) -> Dyadic {
    let up = full.hi() - partial.lo();
    let down = partial.hi() - full.lo();
    up.max(down).max(Dyadic::zero())
}

fn floor_log2_or(x: &Dyadic, fallback: i64) -> i64 {
    x.floor_log2().unwrap_or(fallback)
}

/// Enclosures of Z, F, E and S of width at most `eps` each.
pub fn evaluate(spec: &LengthSpectrum, t: &Temperature, eps: Precision) -> Result<ThermoReport> {
    evaluate_with(spec, t, eps, &EvalConfig::default())
}

pub fn evaluate_with(
    spec: &LengthSpectrum,
    t: &Temperature,
    eps: Precision,
    config: &EvalConfig,
) -> Result<ThermoReport> {
    if spec.is_empty() {
        return Err(Error::EmptyDomain);
    }
    let target = eps.bits();
    let finite_len = spec.max_length();
    let mut len = finite_len.unwrap_or(16).clamp(1, config.max_length.max(1));
    let mut work = target + 16;
    let mut mults = spec.multiplicities(len);
    let t_mag = t.floor_log2().unsigned_abs() as i64;
    loop {
        let tails = match finite_len {
            Some(max) if len >= max => TailSums {
                z: Dyadic::zero(),
                n: Some(Dyadic::zero()),
            },
            _ => spec
                .tail_sums(t, len + 1)
                .ok_or_else(|| Error::NoConvergenceCertificate(t.to_string()))?,
        };
        let tail_n = tails
            .n
            .clone()
            .ok_or_else(|| Error::NoConvergenceCertificate(t.to_string()))?;
        let ps = partial_sums(&mults, t, len, work);
        if !ps.z.lo().is_positive() {
            // nothing of positive weight yet: either no lengths so far or
            // the terms vanished below the working precision
            if ps.z.hi().is_zero() && finite_len.is_none() {
                len = grow_length(len, config)?;
                mults = spec.multiplicities(len);
            } else {
                work = grow_work(work + 32, config)?;
            }
            continue;
        }
        let z = ps.z.add(&DyadicInterval::new(Dyadic::zero(), tails.z.clone()));
        let n = ps.n.add(&DyadicInterval::new(Dyadic::zero(), tail_n.clone()));
        let full = derive(&z, &n, t, target + 4)?;
        let limit = eps.eps();
        let widths_ok = [&z, &full.f, &full.e, &full.s]
            .iter()
            .all(|iv| iv.width() <= limit);
        if widths_ok {
            let part = derive(&ps.z, &ps.n, t, target + 4)?;
            return Ok(ThermoReport {
                temperature: t.clone(),
                tails: TailCertificates {
                    z: tails.z,
                    f: certificate(&full.f, &part.f),
                    e: certificate(&full.e, &part.e),
                    s: certificate(&full.s, &part.s),
                },
                z,
                f: full.f,
                e: full.e,
                s: full.s,
                truncation_length: len,
            });
        }
        // Relative sizes decide whether the tail or the rounding dominates.
        let z_mag = floor_log2_or(ps.z.lo(), 0);
        let e_mag = floor_log2_or(full.e.hi(), 0).max(0);
        let slack = target as i64 + 6 + e_mag + t_mag;
        let tail_ok = floor_log2_or(&tails.z, i64::MIN) < z_mag - slack
            && floor_log2_or(&tail_n, i64::MIN) < z_mag - slack;
        if !tail_ok && finite_len.map_or(true, |max| len < max) {
            len = grow_length(len, config)?;
            mults = spec.multiplicities(len);
        } else {
            let needed = slack - z_mag + bit_len(len) as i64 + 8;
            work = grow_work((work + 16).max(needed.max(0) as u32), config)?;
        }
    }
}

fn grow_length(len: u32, config: &EvalConfig) -> Result<u32> {
    if len >= config.max_length {
        return Err(Error::BudgetExhausted {
            budget: config.max_length,
            certificate: None,
        });
    }
    Ok((len.saturating_mul(2)).min(config.max_length))
}

fn grow_work(work: u32, config: &EvalConfig) -> Result<u32> {
    if work > config.max_work_bits {
        return Err(Error::PrecisionCeiling);
    }
    Ok(work)
}

/// Enclosure of `Z_C(T)`. Convergence is certified for `T < 1` on every
/// spectrum and for `T >= 1` only when the spectrum's majorant proves it.
pub fn eval_z(spec: &LengthSpectrum, t: &Temperature, eps: Precision) -> Result<DyadicInterval> {
    evaluate(spec, t, eps).map(|r| r.z)
}

pub fn eval_f(spec: &LengthSpectrum, t: &Temperature, eps: Precision) -> Result<DyadicInterval> {
    evaluate(spec, t, eps).map(|r| r.f)
}

pub fn eval_e(spec: &LengthSpectrum, t: &Temperature, eps: Precision) -> Result<DyadicInterval> {
    evaluate(spec, t, eps).map(|r| r.e)
}

pub fn eval_s(spec: &LengthSpectrum, t: &Temperature, eps: Precision) -> Result<DyadicInterval> {
    evaluate(spec, t, eps).map(|r| r.s)
}

/// Default length budget for [`detect_divergence`].
pub const DIVERGENCE_LENGTH_BUDGET: u32 = 4096;

/// Least `L` with `Z_L > threshold`, certified by an interval lower bound,
/// for `T > 1`.
pub fn detect_divergence(spec: &LengthSpectrum, t: &Temperature, threshold: &BigRational) -> Result<u32> {
    detect_divergence_with(spec, t, threshold, DIVERGENCE_LENGTH_BUDGET)
}

pub fn detect_divergence_with(
    spec: &LengthSpectrum,
    t: &Temperature,
    threshold: &BigRational,
    max_length: u32,
) -> Result<u32> {
    if t.zone() != Zone::SuperUnit {
        return Err(Error::ZoneError {
            expected: "T > 1",
            got: t.to_string(),
        });
    }
    let bound = Dyadic::ceil_rational(threshold, 64);
    let mut cap = 64u32.min(max_length.max(1));
    let mut scanned = 0u32;
    let mut sum = Dyadic::zero();
    loop {
        let mults = spec.multiplicities(cap);
        let weights = weight_table(t, cap, 64);
        for n in (scanned + 1)..=cap {
            let m = &mults[n as usize];
            if !m.is_zero() {
                let term = Dyadic::from_biguint(m) * weights[n as usize].lo().clone();
                sum = (&sum + &term).round_down_sig(128);
            }
            if sum > bound {
                return Ok(n);
            }
        }
        scanned = cap;
        if cap >= max_length {
            let certificate = spec.tail_sums(t, 1).map(|tails| tails.z);
            return Err(Error::BudgetExhausted {
                budget: max_length,
                certificate,
            });
        }
        cap = cap.saturating_mul(2).min(max_length);
    }
}

/// Orders `Q(t1)` and `Q(t2)` by refining both enclosures until they
/// separate. `None` when they still overlap at `max_bits`.
pub fn separate(
    spec: &LengthSpectrum,
    t1: &Temperature,
    t2: &Temperature,
    q: Quantity,
    start: Precision,
    max_bits: u32,
) -> Result<Option<Ordering>> {
    let mut eps = start;
    loop {
        let a = evaluate(spec, t1, eps)?;
        let b = evaluate(spec, t2, eps)?;
        let (x, y) = (a.get(q), b.get(q));
        if x.strictly_below(y) {
            return Ok(Some(Ordering::Less));
        }
        if y.strictly_below(x) {
            return Ok(Some(Ordering::Greater));
        }
        if eps.bits() >= max_bits {
            return Ok(None);
        }
        eps = Precision::from_bits((eps.bits() * 2).min(max_bits));
    }
}
