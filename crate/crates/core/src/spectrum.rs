//! Length spectra `n ↦ m(n)`: the only feature of a domain the
//! thermodynamic quantities depend on.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::domain::PrefixSet;
use crate::error::{Error, Result};
use crate::rigor::{pow2_sig, Dyadic, DyadicInterval, Precision};
use crate::thermo::Temperature;

/// Significant bits used when evaluating tail majorants. The majorants are
/// upper bounds, so their own rounding only has to point upward.
const TAIL_SIG: u64 = 64;

/// Largest truncation length `kraft_sum` will try before giving up.
pub const KRAFT_LENGTH_BUDGET: u32 = 1 << 14;

/// A length spectrum, given either as a finite table or as a rule with a
/// closed-form tail majorant.
#[derive(Clone, PartialEq, Eq)]
pub enum LengthSpectrum {
    /// Nonzero multiplicities by length.
    Finite(BTreeMap<u32, BigUint>),
    /// `m(n) = 1` for every `n >= 1`; the domain `{0^l 1}`.
    /// Majorant: geometric, `Σ_{n>=L} 2^{-n/T} = 2^{-L/T}/(1 - 2^{-1/T})`.
    Unary,
    /// `m(n) = ⌊2^n / (a·n^b)⌋`. Majorant: power law `m(n) <= 2^n/(a n^b)`.
    /// Kraft sum at most `ζ(b)/a`; requires `a(b-1) >= b` so that the
    /// bound `b/(a(b-1))` on `ζ(b)/a` certifies realizability.
    HeavyTail { a: u32, b: u32 },
    /// Spectrum of all concatenations `pq`, `m(n) = Σ_i m_a(i) m_b(n-i)`.
    /// Majorant: split the tail at `i >= h1` or `j >= h2` with
    /// `h1 + h2 = L + 1` and bound each part by a factor tail times the
    /// other factor's full sum.
    Convolution(Arc<LengthSpectrum>, Arc<LengthSpectrum>),
}

/// Upper bounds on `Σ_{n>=L} m(n) 2^{-n/T}` and `Σ_{n>=L} n m(n) 2^{-n/T}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailSums {
    pub z: Dyadic,
    /// Absent when the energy series is not certified to converge.
    pub n: Option<Dyadic>,
}

impl LengthSpectrum {
    /// Validated finite spectrum: positive lengths, `m(n) <= 2^n`, Kraft
    /// sum at most one.
    pub fn finite(entries: BTreeMap<u32, BigUint>) -> Result<Self> {
        let entries: BTreeMap<u32, BigUint> =
            entries.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        if entries.contains_key(&0) {
            return Err(Error::InvalidSpectrum("length 0 is not a program length".into()));
        }
        let mut kraft = Dyadic::zero();
        for (&n, m) in &entries {
            if m.bits() > n as u64 + 1 || *m > (BigUint::one() << n) {
                return Err(Error::InvalidSpectrum(format!("m({n}) = {m} exceeds 2^{n}")));
            }
            kraft = &kraft + &Dyadic::from_biguint(m).shl(-(n as i64));
        }
        if kraft > Dyadic::one() {
            return Err(Error::InvalidSpectrum(format!(
                "Kraft sum {} exceeds 1",
                kraft.to_decimal_down(12)
            )));
        }
        Ok(LengthSpectrum::Finite(entries))
    }

    pub fn from_pairs(pairs: &[(u32, u64)]) -> Result<Self> {
        Self::finite(pairs.iter().map(|&(n, m)| (n, BigUint::from(m))).collect())
    }

    pub fn heavy_tail(a: u32, b: u32) -> Result<Self> {
        if a == 0 || b < 2 || (a as u64) * (b as u64 - 1) < b as u64 {
            return Err(Error::InvalidSpectrum(format!(
                "heavy_tail({a},{b}) has no Kraft certificate: need a >= 1, b >= 2, a(b-1) >= b"
            )));
        }
        Ok(LengthSpectrum::HeavyTail { a, b })
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, LengthSpectrum::Finite(_))
    }

    pub fn is_empty(&self) -> bool {
        match self {
            LengthSpectrum::Finite(e) => e.is_empty(),
            LengthSpectrum::Convolution(a, b) => a.is_empty() || b.is_empty(),
            _ => false,
        }
    }

    /// Longest length with a nonzero multiplicity, for finite spectra.
    pub fn max_length(&self) -> Option<u32> {
        match self {
            LengthSpectrum::Finite(e) => Some(e.keys().next_back().copied().unwrap_or(0)),
            LengthSpectrum::Convolution(a, b) => Some(a.max_length()? + b.max_length()?),
            _ => None,
        }
    }

    /// Name of the tail majorant certifying this presentation.
    pub fn majorant_name(&self) -> &'static str {
        match self {
            LengthSpectrum::Finite(_) => "exact",
            LengthSpectrum::Unary => "geometric",
            LengthSpectrum::HeavyTail { .. } => "power_law",
            LengthSpectrum::Convolution(..) => "split_product",
        }
    }

    /// `m(n)`.
    pub fn multiplicity(&self, n: u32) -> BigUint {
        match self {
            LengthSpectrum::Finite(e) => e.get(&n).cloned().unwrap_or_default(),
            LengthSpectrum::Unary => {
                if n >= 1 {
                    BigUint::one()
                } else {
                    BigUint::zero()
                }
            }
            LengthSpectrum::HeavyTail { a, b } => heavy_multiplicity(*a, *b, n),
            LengthSpectrum::Convolution(..) => self.multiplicities(n).swap_remove(n as usize),
        }
    }

    /// `[m(0), m(1), …, m(upto)]`.
    pub fn multiplicities(&self, upto: u32) -> Vec<BigUint> {
        match self {
            LengthSpectrum::Convolution(a, b) => {
                let ma = a.multiplicities(upto);
                let mb = b.multiplicities(upto);
                convolve_prefix(&ma, &mb, upto)
            }
            _ => (0..=upto).map(|n| self.multiplicity(n)).collect(),
        }
    }

    /// Finite spectra as a sorted list of `(n, m(n))`.
    pub fn entries(&self) -> Option<&BTreeMap<u32, BigUint>> {
        match self {
            LengthSpectrum::Finite(e) => Some(e),
            _ => None,
        }
    }

    /// Total number of programs for finite spectra.
    pub fn total(&self) -> Option<BigUint> {
        self.entries().map(|e| e.values().sum())
    }

    /// Upper bounds on the tails from length `from` on, at temperature `t`.
    /// `None` when nothing certifies convergence.
    pub fn tail_sums(&self, t: &Temperature, from: u32) -> Option<TailSums> {
        let from = from.max(1);
        let own = self.rule_tail(t, from);
        if t.value() < &BigRational::one() {
            let generic = kraft_tail(t, from);
            return Some(match own {
                Some(own) => TailSums {
                    z: own.z.min(generic.z),
                    n: Some(match (own.n, generic.n) {
                        (Some(a), Some(b)) => a.min(b),
                        (a, b) => a.or(b).expect("generic energy tail"),
                    }),
                },
                None => generic,
            });
        }
        own
    }

    fn rule_tail(&self, t: &Temperature, from: u32) -> Option<TailSums> {
        match self {
            LengthSpectrum::Finite(entries) => Some(finite_tail(entries, t, from)),
            LengthSpectrum::Unary => {
                // y = 2^{-1/T} < 1 for every T > 0
                let inv = t.inverse();
                let y = pow2_sig(&-inv.clone(), TAIL_SIG);
                let y_l = pow2_sig(&(-inv * BigRational::from_integer(from.into())), TAIL_SIG);
                Some(TailSums {
                    z: geometric_upper(&y_l, &y),
                    n: Some(arith_geometric_upper(&y_l, &y, from)),
                })
            }
            LengthSpectrum::HeavyTail { a, b } => heavy_tail_bound(*a, *b, t, from),
            LengthSpectrum::Convolution(a, b) => convolution_tail(a, b, t, from),
        }
    }
}

fn heavy_multiplicity(a: u32, b: u32, n: u32) -> BigUint {
    if n == 0 {
        return BigUint::zero();
    }
    let den = BigUint::from(a) * num_traits::pow(BigUint::from(n), b as usize);
    (BigUint::one() << n) / den
}

/// Truncated convolution of two multiplicity vectors.
fn convolve_prefix(ma: &[BigUint], mb: &[BigUint], upto: u32) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); upto as usize + 1];
    let nz_b: Vec<usize> = (0..mb.len()).filter(|&j| !mb[j].is_zero()).collect();
    for (i, x) in ma.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for &j in &nz_b {
            let n = i + j;
            if n > upto as usize {
                break;
            }
            out[n] += x * &mb[j];
        }
    }
    out
}

fn upper(iv: DyadicInterval) -> Dyadic {
    iv.hi().round_up_sig(TAIL_SIG)
}

/// `y^L/(1-y)` from enclosures of `y^L` and `y < 1`.
fn geometric_upper(y_l: &DyadicInterval, y: &DyadicInterval) -> Dyadic {
    let one_minus = DyadicInterval::one().sub(y);
    upper(
        DyadicInterval::point(y_l.hi().clone())
            .div(&DyadicInterval::point(one_minus.lo().clone()), TAIL_SIG)
            .expect("ratio below one"),
    )
}

/// `Σ_{n>=L} n y^n = y^L (L - (L-1) y) / (1-y)^2`.
fn arith_geometric_upper(y_l: &DyadicInterval, y: &DyadicInterval, from: u32) -> Dyadic {
    let l = DyadicInterval::from_int(from as i64);
    let l1 = DyadicInterval::from_int(from as i64 - 1);
    let num = y_l.mul(&l.sub(&l1.mul(y)));
    let one_minus = DyadicInterval::one().sub(y);
    let den = one_minus.mul(&one_minus);
    upper(
        DyadicInterval::point(num.hi().clone())
            .div(&DyadicInterval::point(den.lo().clone()), TAIL_SIG)
            .expect("ratio below one"),
    )
}

/// Bound valid for any spectrum with `m(n) <= 2^n` when `T < 1`.
fn kraft_tail(t: &Temperature, from: u32) -> TailSums {
    let e = BigRational::one() - t.inverse();
    let x = pow2_sig(&e, TAIL_SIG);
    let x_l = pow2_sig(&(e * BigRational::from_integer(from.into())), TAIL_SIG);
    TailSums {
        z: geometric_upper(&x_l, &x),
        n: Some(arith_geometric_upper(&x_l, &x, from)),
    }
}

fn finite_tail(entries: &BTreeMap<u32, BigUint>, t: &Temperature, from: u32) -> TailSums {
    let inv = t.inverse();
    let mut z = Dyadic::zero();
    let mut n_sum = Dyadic::zero();
    for (&n, m) in entries.range(from..) {
        let w = pow2_sig(&(-inv.clone() * BigRational::from_integer(n.into())), TAIL_SIG);
        let term = Dyadic::from_biguint(m) * w.hi().clone();
        n_sum = &n_sum + &(&term * &Dyadic::from_int(n as i64));
        z = &z + &term;
    }
    TailSums {
        z: z.round_up_sig(TAIL_SIG),
        n: Some(n_sum.round_up_sig(TAIL_SIG)),
    }
}

fn rational_upper(r: &BigRational) -> Dyadic {
    Dyadic::ceil_rational(r, TAIL_SIG as i64 + 16)
}

fn heavy_tail_bound(a: u32, b: u32, t: &Temperature, from: u32) -> Option<TailSums> {
    let e = BigRational::one() - t.inverse();
    let a_r = BigRational::from_integer(a.into());
    let l = BigRational::from_integer(from.into());
    let l_pow = |k: i64| -> BigRational {
        if k >= 0 {
            num_traits::pow(l.clone(), k as usize)
        } else {
            num_traits::pow(l.clone(), (-k) as usize).recip()
        }
    };
    let b = b as i64;
    if e < BigRational::zero() {
        let x = pow2_sig(&e, TAIL_SIG);
        let x_l = pow2_sig(&(e * &l), TAIL_SIG);
        let geo = geometric_upper(&x_l, &x);
        // n^{-b} and n^{1-b} are nonincreasing for b >= 1
        let z = &geo * &rational_upper(&(l_pow(-b) / &a_r));
        let n = &geo * &rational_upper(&(l_pow(1 - b) / &a_r));
        Some(TailSums {
            z: z.round_up_sig(TAIL_SIG),
            n: Some(n.round_up_sig(TAIL_SIG)),
        })
    } else if e.is_zero() {
        // Σ_{n>=L} n^{-s} <= L^{-s} + L^{1-s}/(s-1) for s > 1
        let zeta_tail = |s: i64| -> Option<BigRational> {
            (s > 1).then(|| l_pow(-s) + l_pow(1 - s) / BigRational::from_integer((s - 1).into()))
        };
        let z = rational_upper(&(zeta_tail(b)? / &a_r));
        let n = zeta_tail(b - 1).map(|s| rational_upper(&(s / &a_r)));
        Some(TailSums { z, n })
    } else {
        None
    }
}

fn convolution_tail(
    a: &LengthSpectrum,
    b: &LengthSpectrum,
    t: &Temperature,
    from: u32,
) -> Option<TailSums> {
    // i + j >= L forces i >= h1 or j >= h2 whenever h1 + h2 = L + 1
    let (h1, h2) = match (a.max_length(), b.max_length()) {
        (Some(ma), _) if ma < from => (ma + 1, from - ma),
        (_, Some(mb)) if mb < from => (from - mb, mb + 1),
        _ => {
            let h1 = (from + 1) / 2;
            (h1, from + 1 - h1)
        }
    };
    let a_all = a.tail_sums(t, 1)?;
    let b_all = b.tail_sums(t, 1)?;
    let a_tail = a.tail_sums(t, h1)?;
    let b_tail = b.tail_sums(t, h2)?;
    let z = &(&a_tail.z * &b_all.z) + &(&a_all.z * &b_tail.z);
    let n = match (a_all.n, b_all.n, a_tail.n, b_tail.n) {
        (Some(na), Some(nb), Some(na_t), Some(nb_t)) => {
            let parts = [
                &na_t * &b_all.z,
                &a_tail.z * &nb,
                &na * &b_tail.z,
                &a_all.z * &nb_t,
            ];
            let sum = parts.iter().fold(Dyadic::zero(), |acc, p| &acc + p);
            Some(sum.round_up_sig(TAIL_SIG))
        }
        _ => None,
    };
    Some(TailSums {
        z: z.round_up_sig(TAIL_SIG),
        n,
    })
}

/// `m(n)` = number of members of length `n`. The empty word has length 0
/// and is not counted.
pub fn spectrum_of(set: &PrefixSet) -> LengthSpectrum {
    let mut entries: BTreeMap<u32, BigUint> = BTreeMap::new();
    for w in set.members().iter().filter(|w| !w.is_empty()) {
        *entries.entry(w.len() as u32).or_default() += 1u32;
    }
    LengthSpectrum::Finite(entries)
}

/// Spectrum of the set of concatenations. Exact for finite operands;
/// otherwise a convolution rule carrying the split-product majorant.
pub fn convolve_spectra(a: &LengthSpectrum, b: &LengthSpectrum) -> LengthSpectrum {
    match (a, b) {
        (LengthSpectrum::Finite(ea), LengthSpectrum::Finite(eb)) => {
            let mut out: BTreeMap<u32, BigUint> = BTreeMap::new();
            for (i, x) in ea {
                for (j, y) in eb {
                    *out.entry(i + j).or_default() += x * y;
                }
            }
            LengthSpectrum::Finite(out)
        }
        _ => LengthSpectrum::Convolution(Arc::new(a.clone()), Arc::new(b.clone())),
    }
}

/// Exact partial Kraft sum `Σ_{n<=L} m(n) 2^{-n}`.
pub fn partial_kraft(spec: &LengthSpectrum, upto: u32) -> Dyadic {
    spec.multiplicities(upto)
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, m)| !m.is_zero())
        .fold(Dyadic::zero(), |acc, (n, m)| {
            &acc + &Dyadic::from_biguint(m).shl(-(n as i64))
        })
}

/// Enclosure of the Kraft sum `Σ m(n) 2^{-n}` of width at most `eps`.
/// Exact for finite spectra.
pub fn kraft_sum(spec: &LengthSpectrum, eps: Precision) -> Result<DyadicInterval> {
    if let Some(max) = spec.max_length() {
        return Ok(DyadicInterval::point(partial_kraft(spec, max)));
    }
    let unit = Temperature::one();
    let mut len = 16u32;
    loop {
        let tail = spec.tail_sums(&unit, len + 1).ok_or(Error::TailUnbounded)?.z;
        if tail <= eps.eps() {
            let partial = partial_kraft(spec, len);
            let hi = &partial + &tail;
            return Ok(DyadicInterval::new(partial, hi));
        }
        if len >= KRAFT_LENGTH_BUDGET {
            return Err(Error::BudgetExhausted {
                budget: len,
                certificate: None,
            });
        }
        len = (len * 2).min(KRAFT_LENGTH_BUDGET);
    }
}

impl fmt::Debug for LengthSpectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LengthSpectrum::Finite(e) => {
                f.write_str("{")?;
                for (i, (n, m)) in e.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{n}:{m}")?;
                }
                f.write_str("}")
            }
            LengthSpectrum::Unary => f.write_str("unary"),
            LengthSpectrum::HeavyTail { a, b } => write!(f, "heavy_tail({a},{b})"),
            LengthSpectrum::Convolution(a, b) => write!(f, "({a:?} ⊛ {b:?})"),
        }
    }
}
