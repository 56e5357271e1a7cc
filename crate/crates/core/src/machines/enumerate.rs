//! Dovetailed enumeration of a domain under a step budget.
//!
//! Round `r` visits every program of length at most `r + 1` in canonical
//! order and grants each one `2^r` steps (`Doubling`) or `r + 1` steps
//! (`Linear`). Programs already found, programs with a found prefix, and
//! programs known to be outside the domain are skipped. A grant is charged
//! in full, and a run starts only if its grant fits in the remaining
//! budget; the work done therefore depends only on the total budget, not
//! on how it was split across calls.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{Machine, Outcome};
use crate::domain::{BitString, PrefixSet};
use crate::error::{Error, Result};

/// Programs longer than this are never visited.
const MAX_PROGRAM_LENGTH: u32 = 62;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Schedule {
    #[default]
    Doubling,
    Linear,
}

impl Schedule {
    pub fn grant(self, round: u32) -> u64 {
        match self {
            Schedule::Doubling => 1u64 << round.min(62),
            Schedule::Linear => round as u64 + 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discovery {
    pub program: BitString,
    pub output: BitString,
}

/// Serialized form: enough to rebuild the state by replay.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub machine: String,
    pub schedule: Schedule,
    pub budget: u64,
    /// Sorted canonically.
    pub discovered: Vec<Discovery>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationState {
    machine: String,
    schedule: Schedule,
    budget: u64,
    spent: u64,
    round: u32,
    /// Next candidate in the current round: (length, index).
    cursor: (u32, u64),
    discovered: Vec<Discovery>,
    found: BTreeSet<BitString>,
    settled: BTreeSet<BitString>,
}

impl EnumerationState {
    pub fn new(machine: &Machine, schedule: Schedule) -> Self {
        Self {
            machine: machine.name().to_string(),
            schedule,
            budget: 0,
            spent: 0,
            round: 0,
            cursor: (1, 0),
            discovered: Vec::new(),
            found: BTreeSet::new(),
            settled: BTreeSet::new(),
        }
    }

    pub fn machine(&self) -> &str {
        &self.machine
    }

    pub fn schedule(&self) -> Schedule {
        self.schedule
    }

    /// Total steps granted so far.
    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn spent(&self) -> u64 {
        self.spent
    }

    /// Halting programs in discovery order.
    pub fn discovered(&self) -> &[Discovery] {
        &self.discovered
    }

    pub fn discovered_set(&self) -> PrefixSet {
        PrefixSet::new(self.found.iter().cloned().collect()).expect("domain is prefix-free")
    }

    /// The discovered part of the domain as a table machine. Its
    /// thermodynamic quantities are lower bounds for the enumerated machine.
    pub fn to_table_machine(&self) -> Result<Machine> {
        Machine::table(
            format!("{}[budget={}]", self.machine, self.budget),
            self.discovered
                .iter()
                .map(|d| (d.program.clone(), d.output.clone()))
                .collect(),
        )
    }

    pub fn checkpoint(&self) -> Checkpoint {
        let mut discovered = self.discovered.clone();
        discovered.sort_by(|a, b| a.program.cmp(&b.program));
        Checkpoint {
            machine: self.machine.clone(),
            schedule: self.schedule,
            budget: self.budget,
            discovered,
        }
    }

    /// Rebuilds a state by replaying the checkpoint's budget and checks
    /// that the same programs are found.
    pub fn restore(machine: &Machine, checkpoint: &Checkpoint) -> Result<Self> {
        if checkpoint.machine != machine.name() {
            return Err(Error::Checkpoint(format!(
                "checkpoint is for {}, not {}",
                checkpoint.machine,
                machine.name()
            )));
        }
        let fresh = Self::new(machine, checkpoint.schedule);
        let state = enumerate_domain(machine, fresh, checkpoint.budget)?;
        if state.checkpoint() != *checkpoint {
            return Err(Error::Checkpoint(
                "replay does not reproduce the recorded discoveries".into(),
            ));
        }
        Ok(state)
    }

    fn has_found_prefix(&self, p: &BitString) -> bool {
        (1..=p.len()).any(|k| self.found.contains(&p.slice(0, k)))
    }

    fn advance_cursor(&mut self) {
        let (len, idx) = self.cursor;
        if idx + 1 < (1u64 << len) {
            self.cursor = (len, idx + 1);
        } else if len < self.round + 1 {
            self.cursor = (len + 1, 0);
        } else {
            self.round += 1;
            self.cursor = (1, 0);
        }
    }
}

/// Grants `extra_steps` more steps and runs as much of the schedule as
/// fits. Discoveries only ever grow.
pub fn enumerate_domain(
    machine: &Machine,
    mut state: EnumerationState,
    extra_steps: u64,
) -> Result<EnumerationState> {
    if state.machine != machine.name() {
        return Err(Error::Checkpoint(format!(
            "state is for {}, not {}",
            state.machine,
            machine.name()
        )));
    }
    if !machine.is_executable() {
        return Err(Error::NoOutputs(machine.name().to_string()));
    }
    state.budget = state.budget.saturating_add(extra_steps);
    while state.round < MAX_PROGRAM_LENGTH {
        let (len, idx) = state.cursor;
        let p = BitString::from_index(idx, len);
        if state.settled.contains(&p) || state.has_found_prefix(&p) {
            state.advance_cursor();
            continue;
        }
        let grant = state.schedule.grant(state.round);
        if state.spent.saturating_add(grant) > state.budget {
            break;
        }
        state.spent += grant;
        match machine.run(&p, grant)? {
            Outcome::Halted(output) => {
                state.found.insert(p.clone());
                state.discovered.push(Discovery { program: p, output });
            }
            Outcome::NotInDomain => {
                state.settled.insert(p);
            }
            Outcome::NoHaltWithinBudget => {}
        }
        state.advance_cursor();
    }
    Ok(state)
}
