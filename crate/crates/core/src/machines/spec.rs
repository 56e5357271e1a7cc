//! Text format for machines (TOML).
//!
//! ```toml
//! kind = "table"
//! name = "B"
//! domain = ["1", "01"]
//! outputs = ["", "0"]     # optional; λ for every program when absent
//! ```
//!
//! ```toml
//! kind = "spectrum"
//! name = "O"
//! tail_majorant = "geometric"
//! [rule]
//! name = "unary"          # or "finite" with lengths = [[n, m], …],
//!                         # or "heavy_tail" with a and b
//! ```
//!
//! `kind = "universal"` names the bundled machine `U`. A composite lists
//! its factors in order, each either a catalog name (`"B"`,
//! `"heavy_tail(2,2)"`) or an inline machine table.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::{builtin_by_name, Machine, Presentation};
use crate::compose::compose;
use crate::domain::BitString;
use crate::error::{Error, Result};
use crate::spectrum::LengthSpectrum;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MachineDoc {
    Table {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        domain: Vec<BitString>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        outputs: Option<Vec<BitString>>,
    },
    Spectrum {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tail_majorant: Option<String>,
        rule: RuleDoc,
    },
    Universal {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
    },
    Composite {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        factors: Vec<FactorDoc>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum RuleDoc {
    Finite { lengths: Vec<(u32, u64)> },
    Unary,
    HeavyTail { a: u32, b: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FactorDoc {
    Named(String),
    Inline(Box<MachineDoc>),
}

/// Parses a machine document.
pub fn parse_machine(text: &str) -> Result<Machine> {
    let doc: MachineDoc = toml::from_str(text).map_err(|e| Error::SpecParse(e.to_string()))?;
    from_doc(&doc)
}

/// Renders a machine as a document that [`parse_machine`] reads back.
pub fn render_machine(m: &Machine) -> Result<String> {
    toml::to_string(&to_doc(m)?).map_err(|e| Error::SpecParse(e.to_string()))
}

pub fn from_doc(doc: &MachineDoc) -> Result<Machine> {
    match doc {
        MachineDoc::Table {
            name,
            domain,
            outputs,
        } => {
            let name = name.clone().unwrap_or_else(|| "table".into());
            match outputs {
                None => Machine::from_domain(name, domain),
                Some(outs) => {
                    if outs.len() != domain.len() {
                        return Err(Error::SpecParse(format!(
                            "{} programs but {} outputs",
                            domain.len(),
                            outs.len()
                        )));
                    }
                    if domain.iter().collect::<std::collections::BTreeSet<_>>().len() != domain.len() {
                        return Err(Error::SpecParse("duplicate program in domain".into()));
                    }
                    Machine::table(name, domain.iter().cloned().zip(outs.iter().cloned()).collect())
                }
            }
        }
        MachineDoc::Spectrum {
            name,
            tail_majorant,
            rule,
        } => {
            let spec = match rule {
                RuleDoc::Finite { lengths } => {
                    let mut entries: BTreeMap<u32, BigUint> = BTreeMap::new();
                    for (n, m) in lengths {
                        *entries.entry(*n).or_default() += *m;
                    }
                    LengthSpectrum::finite(entries)?
                }
                RuleDoc::Unary => LengthSpectrum::Unary,
                RuleDoc::HeavyTail { a, b } => LengthSpectrum::heavy_tail(*a, *b)?,
            };
            match tail_majorant.as_deref() {
                None if spec.is_finite() => {}
                None => {
                    return Err(Error::SpecParse(format!(
                        "rule spectra must name their tail majorant ({})",
                        spec.majorant_name()
                    )))
                }
                Some(given) if given == spec.majorant_name() => {}
                Some(given) => {
                    return Err(Error::SpecParse(format!(
                        "tail majorant {given:?} does not match the rule; expected {:?}",
                        spec.majorant_name()
                    )))
                }
            }
            Machine::spectrum(name.clone().unwrap_or_else(|| "spectrum".into()), spec)
        }
        MachineDoc::Universal { name } => match name.as_deref() {
            None | Some("U") => Ok(Machine::universal()),
            Some(other) => Err(Error::UnknownMachine(other.to_string())),
        },
        MachineDoc::Composite { name, factors } => {
            let ms = factors
                .iter()
                .map(|f| match f {
                    FactorDoc::Named(n) => builtin_by_name(n),
                    FactorDoc::Inline(doc) => from_doc(doc),
                })
                .collect::<Result<Vec<_>>>()?;
            let c = compose(&ms)?.to_machine();
            Ok(match name {
                Some(n) => c.with_name(n.clone()),
                None => c,
            })
        }
    }
}

pub fn to_doc(m: &Machine) -> Result<MachineDoc> {
    let name = Some(m.name().to_string());
    Ok(match m.presentation() {
        Presentation::Table(t) => MachineDoc::Table {
            name,
            domain: t.keys().cloned().collect(),
            outputs: Some(t.values().cloned().collect()),
        },
        Presentation::Spectrum(s) => spectrum_doc(name, s)?,
        Presentation::Universal => MachineDoc::Universal { name },
        Presentation::Composite(fs) => MachineDoc::Composite {
            name,
            factors: fs
                .iter()
                .map(|f| to_doc(f).map(|d| FactorDoc::Inline(Box::new(d))))
                .collect::<Result<_>>()?,
        },
    })
}

fn spectrum_doc(name: Option<String>, s: &LengthSpectrum) -> Result<MachineDoc> {
    let rule = match s {
        LengthSpectrum::Finite(entries) => RuleDoc::Finite {
            lengths: entries
                .iter()
                .map(|(n, m)| {
                    u64::try_from(m)
                        .map(|m| (*n, m))
                        .map_err(|_| Error::InvalidSpectrum(format!("multiplicity at length {n} too large to write")))
                })
                .collect::<Result<_>>()?,
        },
        LengthSpectrum::Unary => RuleDoc::Unary,
        LengthSpectrum::HeavyTail { a, b } => RuleDoc::HeavyTail { a: *a, b: *b },
        LengthSpectrum::Convolution(x, y) => {
            let side = |part: &Arc<LengthSpectrum>| {
                spectrum_doc(None, part).map(|d| FactorDoc::Inline(Box::new(d)))
            };
            return Ok(MachineDoc::Composite {
                name,
                factors: vec![side(x)?, side(y)?],
            });
        }
    };
    Ok(MachineDoc::Spectrum {
        name,
        tail_majorant: Some(s.majorant_name().to_string()),
        rule,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machines::builtin;

    #[test]
    fn parse_table() {
        let m = parse_machine("kind = \"table\"\nname = \"B\"\ndomain = [\"1\", \"01\"]\noutputs = [\"\", \"0\"]\n").unwrap();
        assert_eq!(m, builtin("B", &[]).unwrap());
        let bad = parse_machine("kind = \"table\"\ndomain = [\"0\", \"01\"]\n");
        assert!(matches!(bad, Err(Error::NotPrefixFree(_, _))));
        assert!(matches!(parse_machine("kind = \"nope\"\n"), Err(Error::SpecParse(_))));
        assert!(matches!(
            parse_machine("kind = \"table\"\ndomain = [\"12\"]\n"),
            Err(Error::SpecParse(_))
        ));
    }

    #[test]
    fn parse_spectra() {
        let o = parse_machine("kind = \"spectrum\"\nname = \"O\"\ntail_majorant = \"geometric\"\n[rule]\nname = \"unary\"\n").unwrap();
        assert_eq!(o, builtin("O", &[]).unwrap());
        let missing = parse_machine("kind = \"spectrum\"\n[rule]\nname = \"unary\"\n");
        assert!(matches!(missing, Err(Error::SpecParse(_))));
        let wrong = parse_machine("kind = \"spectrum\"\ntail_majorant = \"geometric\"\n[rule]\nname = \"heavy_tail\"\na = 2\nb = 2\n");
        assert!(matches!(wrong, Err(Error::SpecParse(_))));
        let flat = parse_machine("kind = \"spectrum\"\n[rule]\nname = \"finite\"\nlengths = [[5, 7]]\n").unwrap();
        assert_eq!(flat.length_spectrum().unwrap(), LengthSpectrum::from_pairs(&[(5, 7)]).unwrap());
        let over = parse_machine("kind = \"spectrum\"\n[rule]\nname = \"finite\"\nlengths = [[1, 3]]\n");
        assert!(over.is_err());
    }

    #[test]
    fn composite_round_trip() {
        let doc = "kind = \"composite\"\nfactors = [\"B\", \"O\", \"heavy_tail(2,2)\"]\n";
        let m = parse_machine(doc).unwrap();
        let again = parse_machine(&render_machine(&m).unwrap()).unwrap();
        assert_eq!(again.length_spectrum().unwrap(), m.length_spectrum().unwrap());
        for name in ["B", "O", "U", "heavy_tail"] {
            let m = builtin(name, &[]).unwrap();
            assert_eq!(parse_machine(&render_machine(&m).unwrap()).unwrap(), m);
        }
    }
}
