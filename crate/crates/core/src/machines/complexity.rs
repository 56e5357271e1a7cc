//! Upper bounds on program-size complexity by exhaustive search.

use std::collections::BTreeMap;

use super::{Machine, Outcome, Presentation};
use crate::domain::BitString;
use crate::error::{Error, Result};

/// Length of the shortest program `p` with `|p| <= max_len` and
/// `m(p) = s` within `steps` steps, searching in canonical order.
///
/// For a table machine whose whole domain fits in the window this is
/// `H_m(s)` exactly; otherwise it bounds `H_m(s)` from above.
pub fn complexity_upper(m: &Machine, s: &BitString, max_len: u32, steps: u64) -> Result<u32> {
    match m.presentation() {
        Presentation::Table(t) => t
            .iter()
            .filter(|(p, out)| *out == s && p.len() as u32 <= max_len)
            .map(|(p, _)| p.len() as u32)
            .min()
            .ok_or(Error::NotFound),
        Presentation::Spectrum(_) => Err(Error::NoOutputs(m.name().to_string())),
        Presentation::Universal | Presentation::Composite(_) => {
            check_window(max_len)?;
            for len in 1..=max_len {
                for idx in 0..(1u64 << len) {
                    let p = BitString::from_index(idx, len);
                    if let Outcome::Halted(out) = m.run(&p, steps)? {
                        if out == *s {
                            return Ok(len);
                        }
                    }
                }
            }
            Err(Error::NotFound)
        }
    }
}

/// Shortest program length for every output reachable with programs of
/// length at most `max_len` within `steps` steps.
pub fn shortest_programs(m: &Machine, max_len: u32, steps: u64) -> Result<BTreeMap<BitString, u32>> {
    let mut best: BTreeMap<BitString, u32> = BTreeMap::new();
    match m.presentation() {
        Presentation::Table(t) => {
            for (p, out) in t.iter().filter(|(p, _)| p.len() as u32 <= max_len) {
                let len = p.len() as u32;
                best.entry(out.clone())
                    .and_modify(|b| *b = (*b).min(len))
                    .or_insert(len);
            }
        }
        Presentation::Spectrum(_) => return Err(Error::NoOutputs(m.name().to_string())),
        Presentation::Universal | Presentation::Composite(_) => {
            check_window(max_len)?;
            for len in 1..=max_len {
                for idx in 0..(1u64 << len) {
                    if let Outcome::Halted(out) = m.run(&BitString::from_index(idx, len), steps)? {
                        best.entry(out).or_insert(len);
                    }
                }
            }
        }
    }
    Ok(best)
}

/// Exhaustive search beyond this window is refused.
const MAX_SEARCH_LENGTH: u32 = 40;

fn check_window(max_len: u32) -> Result<()> {
    if max_len > MAX_SEARCH_LENGTH {
        return Err(Error::TooLarge(1u128 << max_len.min(127)));
    }
    Ok(())
}
