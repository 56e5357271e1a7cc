//! Composition `C_1 ⊘ C_2 ⊘ … ⊘ C_N`: programs are concatenations
//! `p_1 p_2 … p_N` with `p_i ∈ Dom C_i`, and the output is `C_1(p_1)`.
//!
//! At the spectrum level composition is convolution, so `Z` multiplies and
//! `F`, `E`, `S` add.

use crate::domain::{BitString, PrefixSet};
use crate::error::{Error, Result};
use crate::machines::{check_predicates, Machine, Presentation, Tri};
use crate::spectrum::LengthSpectrum;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositeMachine {
    factors: Vec<Machine>,
}

impl CompositeMachine {
    pub fn factors(&self) -> &[Machine] {
        &self.factors
    }

    pub fn name(&self) -> String {
        self.factors
            .iter()
            .map(|m| m.name().to_string())
            .collect::<Vec<_>>()
            .join("⊘")
    }

    /// Convolution of the factor spectra.
    pub fn length_spectrum(&self) -> Result<LengthSpectrum> {
        self.to_machine().length_spectrum()
    }

    /// The composite as a machine. A single factor is returned unchanged.
    pub fn to_machine(&self) -> Machine {
        match self.factors.as_slice() {
            [only] => only.clone(),
            _ => Machine::composite(self.name(), self.factors.clone()),
        }
    }

    /// Number of concatenations when every factor is a table.
    pub fn domain_size(&self) -> Option<u128> {
        self.factors.iter().try_fold(1u128, |acc, f| {
            f.table_entries()
                .and_then(|t| acc.checked_mul(t.len() as u128))
        })
    }

    /// Every concatenation with its output, in canonical program order.
    /// Only for table factors, and only up to `limit` programs.
    pub fn materialize(&self, limit: u128) -> Result<Vec<(BitString, BitString)>> {
        let size = self.domain_size().ok_or_else(|| {
            Error::NotDecidable("only composites of table machines can be materialized".into())
        })?;
        if size > limit {
            return Err(Error::TooLarge(size));
        }
        let mut rows: Vec<(BitString, BitString)> = self.factors[0]
            .table_entries()
            .expect("table")
            .iter()
            .map(|(p, out)| (p.clone(), out.clone()))
            .collect();
        for f in &self.factors[1..] {
            let t = f.table_entries().expect("table");
            rows = rows
                .iter()
                .flat_map(|(p, out)| t.keys().map(move |q| (p.concat(q), out.clone())))
                .collect();
        }
        rows.sort();
        Ok(rows)
    }

    /// The materialized domain as a prefix set.
    pub fn materialize_domain(&self, limit: u128) -> Result<PrefixSet> {
        PrefixSet::new(self.materialize(limit)?.into_iter().map(|(p, _)| p).collect())
    }
}

fn has_empty_domain(m: &Machine) -> bool {
    match m.presentation() {
        Presentation::Table(t) => t.is_empty(),
        Presentation::Spectrum(s) => s.is_empty(),
        Presentation::Universal => false,
        Presentation::Composite(fs) => fs.iter().any(has_empty_domain),
    }
}

/// `ms[0] ⊘ ms[1] ⊘ …`. Nested composites are flattened.
pub fn compose(ms: &[Machine]) -> Result<CompositeMachine> {
    if ms.is_empty() {
        return Err(Error::InvalidArgument("composition needs at least one machine".into()));
    }
    if ms.iter().any(has_empty_domain) {
        return Err(Error::EmptyDomain);
    }
    let mut factors = Vec::with_capacity(ms.len());
    for m in ms {
        match m.presentation() {
            Presentation::Composite(fs) => factors.extend(fs.iter().cloned()),
            _ => factors.push(m.clone()),
        }
    }
    Ok(CompositeMachine { factors })
}

/// `m^{⊘n}`.
pub fn power(m: &Machine, n: u32) -> Result<CompositeMachine> {
    if n == 0 {
        return Err(Error::InvalidArgument("power needs n >= 1".into()));
    }
    compose(&vec![m.clone(); n as usize])
}

/// `V_n = v ⊘ c^{⊘n}`, requiring `c` to be physically reasonable and a
/// computable measure machine.
pub fn vn_family(v: &Machine, c: &Machine, n: u32) -> Result<CompositeMachine> {
    if n == 0 {
        return Err(Error::InvalidArgument("V_n needs n >= 1".into()));
    }
    let preds = check_predicates(c);
    if preds.physically_reasonable != Tri::Yes {
        return Err(Error::PredicateFailed(format!(
            "{} is not known to be physically reasonable",
            c.name()
        )));
    }
    if preds.computable_measure != Tri::Yes {
        return Err(Error::PredicateFailed(format!(
            "{} is not known to be a computable measure machine",
            c.name()
        )));
    }
    let mut ms = vec![v.clone()];
    ms.extend(std::iter::repeat(c.clone()).take(n as usize));
    compose(&ms)
}
