//! Computers: finite tables, spectrum-only machines, the bundled universal
//! machine `U`, and composites.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::domain::{BitString, PrefixSet};
use crate::error::{Error, Result};
use crate::spectrum::{convolve_spectra, spectrum_of, LengthSpectrum};

mod complexity;
mod enumerate;
pub mod spec;
pub mod universal;

pub use complexity::{complexity_upper, shortest_programs};
pub use enumerate::{enumerate_domain, Checkpoint, Discovery, EnumerationState, Schedule};

/// How a machine is given.
#[derive(Clone, PartialEq, Eq)]
pub enum Presentation {
    /// Finite map from a prefix-free key set to outputs.
    Table(BTreeMap<BitString, BitString>),
    /// Domain known only through its length spectrum; no outputs.
    Spectrum(LengthSpectrum),
    /// The bundled universal machine.
    Universal,
    /// Concatenation of factor programs; output of the first factor.
    Composite(Vec<Machine>),
}

#[derive(Clone, PartialEq, Eq)]
pub struct Machine {
    name: String,
    presentation: Presentation,
}

/// Result of running a program under a step budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Halted(BitString),
    /// The budget ran out. Says nothing about divergence.
    NoHaltWithinBudget,
    NotInDomain,
}

impl Machine {
    /// Table machine; keys must be nonempty, distinct and prefix-free.
    pub fn table(name: impl Into<String>, entries: Vec<(BitString, BitString)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyDomain);
        }
        if entries.iter().any(|(k, _)| k.is_empty()) {
            return Err(Error::EmptyProgram);
        }
        let keys: Vec<BitString> = entries.iter().map(|(k, _)| k.clone()).collect();
        PrefixSet::new(keys)?;
        Ok(Self {
            name: name.into(),
            presentation: Presentation::Table(entries.into_iter().collect()),
        })
    }

    /// Table machine given by its domain; every program outputs λ.
    pub fn from_domain(name: impl Into<String>, domain: &[BitString]) -> Result<Self> {
        Self::table(
            name,
            domain.iter().map(|p| (p.clone(), BitString::empty())).collect(),
        )
    }

    pub fn spectrum(name: impl Into<String>, spec: LengthSpectrum) -> Result<Self> {
        if spec.is_empty() {
            return Err(Error::EmptyDomain);
        }
        Ok(Self {
            name: name.into(),
            presentation: Presentation::Spectrum(spec),
        })
    }

    pub fn universal() -> Self {
        Self {
            name: "U".into(),
            presentation: Presentation::Universal,
        }
    }

    pub(crate) fn composite(name: String, factors: Vec<Machine>) -> Self {
        Self {
            name,
            presentation: Presentation::Composite(factors),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn is_universal(&self) -> bool {
        matches!(self.presentation, Presentation::Universal)
    }

    /// Table entries, if this is a table machine.
    pub fn table_entries(&self) -> Option<&BTreeMap<BitString, BitString>> {
        match &self.presentation {
            Presentation::Table(t) => Some(t),
            _ => None,
        }
    }

    /// The domain, when it is finite and explicit.
    pub fn domain(&self) -> Option<PrefixSet> {
        self.table_entries()
            .map(|t| PrefixSet::new(t.keys().cloned().collect()).expect("validated on construction"))
    }

    /// Length spectrum of the domain. `U`'s domain is only enumerable;
    /// use the table of a budgeted enumeration instead.
    pub fn length_spectrum(&self) -> Result<LengthSpectrum> {
        match &self.presentation {
            Presentation::Table(_) => Ok(spectrum_of(&self.domain().expect("table"))),
            Presentation::Spectrum(s) => Ok(s.clone()),
            Presentation::Universal => Err(Error::NotDecidable(format!(
                "the domain of {} is recursively enumerable; enumerate it under a budget",
                self.name
            ))),
            Presentation::Composite(factors) => {
                let mut iter = factors.iter();
                let first = iter.next().ok_or(Error::EmptyDomain)?.length_spectrum()?;
                iter.try_fold(first, |acc, f| Ok(convolve_spectra(&acc, &f.length_spectrum()?)))
            }
        }
    }

    /// Runs `p` with at most `steps` steps.
    pub fn run(&self, p: &BitString, steps: u64) -> Result<Outcome> {
        Ok(match self.run_from(p.bits(), 0, steps)? {
            Step::Halted { output, end } if end == p.len() => Outcome::Halted(output),
            Step::Halted { .. } | Step::Invalid => Outcome::NotInDomain,
            Step::NoHalt => Outcome::NoHaltWithinBudget,
        })
    }

    /// Runs the program that starts at `bits[start]`, reporting where it
    /// ends. Steps are shared across composite factors.
    fn run_from(&self, bits: &[bool], start: usize, steps: u64) -> Result<Step> {
        match &self.presentation {
            Presentation::Table(t) => {
                if steps == 0 {
                    return Ok(Step::NoHalt);
                }
                let rest = &bits[start..];
                Ok(t.iter()
                    .find(|(k, _)| rest.starts_with(k.bits()))
                    .map_or(Step::Invalid, |(k, out)| Step::Halted {
                        output: out.clone(),
                        end: start + k.len(),
                    }))
            }
            Presentation::Universal => Ok(match universal::exec_prefix(bits, start, steps) {
                universal::Exec::Halted { output, end } => Step::Halted { output, end },
                universal::Exec::NoHalt => Step::NoHalt,
                universal::Exec::Invalid => Step::Invalid,
            }),
            Presentation::Spectrum(_) => Err(Error::NoOutputs(self.name.clone())),
            Presentation::Composite(factors) => {
                let mut pos = start;
                let mut first_output = None;
                for f in factors {
                    match f.run_from(bits, pos, steps)? {
                        Step::Halted { output, end } => {
                            first_output.get_or_insert(output);
                            pos = end;
                        }
                        other => return Ok(other),
                    }
                }
                Ok(Step::Halted {
                    output: first_output.unwrap_or_default(),
                    end: pos,
                })
            }
        }
    }

    /// Whether programs can be executed (tables, `U`, and composites of those).
    pub fn is_executable(&self) -> bool {
        match &self.presentation {
            Presentation::Table(_) | Presentation::Universal => true,
            Presentation::Spectrum(_) => false,
            Presentation::Composite(fs) => fs.iter().all(Machine::is_executable),
        }
    }
}

enum Step {
    Halted { output: BitString, end: usize },
    NoHalt,
    Invalid,
}

impl fmt::Display for Machine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl fmt::Debug for Machine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.presentation {
            Presentation::Table(t) => format!("table({} programs)", t.len()),
            Presentation::Spectrum(s) => format!("spectrum({s:?})"),
            Presentation::Universal => "universal".into(),
            Presentation::Composite(fs) => format!("composite({fs:?})"),
        };
        write!(f, "{}: {kind}", self.name)
    }
}

/// Catalog machines: `B`, `O`, `heavy_tail` (parameters `a`, `b`, default
/// 2 and 2) and `U`.
pub fn builtin(name: &str, params: &[u32]) -> Result<Machine> {
    let no_params = |m: Machine| {
        if params.is_empty() {
            Ok(m)
        } else {
            Err(Error::InvalidArgument(format!("{name} takes no parameters")))
        }
    };
    match name {
        "B" => no_params(machine_b()),
        "O" => no_params(Machine::spectrum("O", LengthSpectrum::Unary)?),
        "U" => no_params(Machine::universal()),
        "heavy_tail" => {
            let (a, b) = match params {
                [] => (2, 2),
                [a, b] => (*a, *b),
                _ => return Err(Error::InvalidArgument("heavy_tail takes (a, b)".into())),
            };
            let label = if params.is_empty() {
                "heavy_tail".to_string()
            } else {
                format!("heavy_tail({a},{b})")
            };
            Machine::spectrum(label, LengthSpectrum::heavy_tail(a, b)?)
        }
        other => Err(Error::UnknownMachine(other.to_string())),
    }
}

/// Resolves `B`, `O`, `U`, `heavy_tail` or `heavy_tail(a,b)`.
pub fn builtin_by_name(text: &str) -> Result<Machine> {
    let text = text.trim();
    match text.split_once('(') {
        None => builtin(text, &[]),
        Some((name, rest)) => {
            let args = rest
                .strip_suffix(')')
                .ok_or_else(|| Error::UnknownMachine(text.to_string()))?;
            let params = args
                .split(',')
                .map(|a| a.trim().parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::UnknownMachine(text.to_string()))?;
            builtin(name.trim(), &params)
        }
    }
}

/// `B`: `1 ↦ λ`, `01 ↦ 0`.
fn machine_b() -> Machine {
    let entries = universal::M1_TABLE
        .iter()
        .map(|(k, v)| (k.parse().expect("static"), v.parse().expect("static")))
        .collect();
    Machine::table("B", entries).expect("static table")
}

/// Three-valued answer for predicates that may not be decidable yet.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

impl Tri {
    fn from_bool(b: bool) -> Self {
        if b {
            Tri::Yes
        } else {
            Tri::No
        }
    }

    fn all(items: impl IntoIterator<Item = Tri>) -> Tri {
        items.into_iter().fold(Tri::Yes, |acc, t| match (acc, t) {
            (Tri::No, _) | (_, Tri::No) => Tri::No,
            (Tri::Unknown, _) | (_, Tri::Unknown) => Tri::Unknown,
            _ => Tri::Yes,
        })
    }

    fn any(items: impl IntoIterator<Item = Tri>) -> Tri {
        items.into_iter().fold(Tri::No, |acc, t| match (acc, t) {
            (Tri::Yes, _) | (_, Tri::Yes) => Tri::Yes,
            (Tri::Unknown, _) | (_, Tri::Unknown) => Tri::Unknown,
            _ => Tri::No,
        })
    }
}

impl fmt::Display for Tri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tri::Yes => "true",
            Tri::No => "false",
            Tri::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Predicates {
    /// Two programs of different lengths exist.
    pub physically_reasonable: Tri,
    /// The Kraft sum `Z(1)` is a computable real.
    pub computable_measure: Tri,
}

/// Lengths with nonzero multiplicity scanned when a rule spectrum is asked
/// whether it has two distinct lengths.
const LENGTH_SCAN: u32 = 256;

fn spectrum_predicates(s: &LengthSpectrum) -> Predicates {
    let lengths = match s.entries() {
        Some(e) => e.len(),
        None => s
            .multiplicities(LENGTH_SCAN)
            .iter()
            .filter(|m| !num_traits::Zero::is_zero(*m))
            .count(),
    };
    let physically_reasonable = if lengths >= 2 {
        Tri::Yes
    } else if s.is_finite() {
        Tri::No
    } else {
        Tri::Unknown
    };
    // finite spectra have a rational Kraft sum; every rule carries a
    // certified tail majorant at T = 1
    let computable_measure = Tri::from_bool(
        s.is_finite() || s.tail_sums(&crate::thermo::Temperature::one(), 1).is_some(),
    );
    Predicates {
        physically_reasonable,
        computable_measure,
    }
}

/// Decides the two hypotheses where possible. `U` answers `Unknown` until
/// an enumeration has been run; see [`check_discovered`].
pub fn check_predicates(m: &Machine) -> Predicates {
    match &m.presentation {
        Presentation::Table(_) | Presentation::Spectrum(_) => {
            spectrum_predicates(&m.length_spectrum().expect("finite or rule"))
        }
        Presentation::Universal => Predicates {
            physically_reasonable: Tri::Unknown,
            computable_measure: Tri::Unknown,
        },
        Presentation::Composite(fs) => {
            let parts: Vec<Predicates> = fs.iter().map(check_predicates).collect();
            Predicates {
                // every factor domain is nonempty, so one factor with two
                // lengths already yields two composite lengths
                physically_reasonable: Tri::any(parts.iter().map(|p| p.physically_reasonable)),
                computable_measure: Tri::all(parts.iter().map(|p| p.computable_measure)),
            }
        }
    }
}

/// Predicates of `U` as far as an enumeration has revealed its domain.
pub fn check_discovered(state: &EnumerationState) -> Predicates {
    let lengths: BTreeSet<usize> = state.discovered().iter().map(|d| d.program.len()).collect();
    Predicates {
        physically_reasonable: if lengths.len() >= 2 {
            Tri::Yes
        } else {
            Tri::Unknown
        },
        computable_measure: Tri::Unknown,
    }
}
