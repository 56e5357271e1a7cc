//! The bundled universal machine `U`.
//!
//! `U(0^{i-1} 1 p) = M_i(p)` where
//!
//! * `M_1` is the table machine `B` (`1 ↦ λ`, `01 ↦ 0`);
//! * `M_2` is a small tape interpreter, described below;
//! * `M_i` for `i >= 3` has empty domain.
//!
//! `M_2` reads a code segment of prefix-free opcodes terminated by `1111`,
//! then runs it over a tape of unbounded naturals (all zero, head at cell
//! 0). Instructions may consume further input bits that follow the code.
//!
//! | code   | op  | effect                                       |
//! |--------|-----|----------------------------------------------|
//! | `00`   | `+` | increment the current cell                   |
//! | `010`  | `.` | emit the parity of the current cell          |
//! | `011`  | `>` | move right                                   |
//! | `100`  | `<` | move left (no-op at cell 0)                  |
//! | `101`  | `[` | jump past the matching `]` if the cell is 0  |
//! | `1100` | `]` | jump back to the matching `[` unless 0       |
//! | `1101` | `-` | decrement (no-op at 0)                       |
//! | `1110` | `,` | read the next input bit into the cell        |
//! | `1111` |     | end of code                                  |
//!
//! A program is in the domain when the code is bracket-balanced, the run
//! halts, and every input bit has been read exactly when it halts. Because
//! execution only depends on the bits read so far, the domain is
//! prefix-free. Any table machine can be written as an `M_2` program that
//! reads its input with `,` and branches on it, so `U` simulates every
//! catalog table machine with a constant-length prefix; that is the
//! optimality property.
//!
//! Each dispatch and each executed instruction costs one step.

use crate::domain::BitString;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Inc,
    Emit,
    Right,
    Left,
    Open,
    Close,
    Dec,
    Read,
}

impl Op {
    fn code(self) -> &'static str {
        match self {
            Op::Inc => "00",
            Op::Emit => "010",
            Op::Right => "011",
            Op::Left => "100",
            Op::Open => "101",
            Op::Close => "1100",
            Op::Dec => "1101",
            Op::Read => "1110",
        }
    }

    fn from_char(c: char) -> Option<Op> {
        Some(match c {
            '+' => Op::Inc,
            '.' => Op::Emit,
            '>' => Op::Right,
            '<' => Op::Left,
            '[' => Op::Open,
            ']' => Op::Close,
            '-' => Op::Dec,
            ',' => Op::Read,
            _ => return None,
        })
    }
}

const END_CODE: &str = "1111";

/// Result of running a prefix of the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Exec {
    /// Halted after reading `bits[start..end]`.
    Halted { output: BitString, end: usize },
    NoHalt,
    /// No program starting at `start` with these bits is in the domain.
    Invalid,
}

/// Encodes interpreter source text (`+ . > < [ ] - ,`) followed by `input`
/// as a `U` program, index prefix `01` included.
pub fn encode_program(source: &str, input: &BitString) -> Result<BitString> {
    let mut text = String::from("01");
    let mut depth = 0i64;
    for c in source.chars().filter(|c| !c.is_whitespace()) {
        let op = Op::from_char(c)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown instruction {c:?}")))?;
        match op {
            Op::Open => depth += 1,
            Op::Close => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return Err(Error::InvalidArgument("unbalanced ']'".into()));
        }
        text.push_str(op.code());
    }
    if depth != 0 {
        return Err(Error::InvalidArgument("unbalanced '['".into()));
    }
    text.push_str(END_CODE);
    let code: BitString = text.parse()?;
    Ok(code.concat(input))
}

struct Reader<'a> {
    bits: &'a [bool],
    pos: usize,
}

impl Reader<'_> {
    fn next(&mut self) -> Option<bool> {
        let b = self.bits.get(self.pos).copied();
        self.pos += 1;
        b
    }
}

/// `None` means the end-of-code marker.
fn parse_op(r: &mut Reader<'_>) -> Option<Option<Op>> {
    let b0 = r.next()?;
    let b1 = r.next()?;
    Some(Some(match (b0, b1) {
        (false, false) => Op::Inc,
        (false, true) => {
            if r.next()? {
                Op::Right
            } else {
                Op::Emit
            }
        }
        (true, false) => {
            if r.next()? {
                Op::Open
            } else {
                Op::Left
            }
        }
        (true, true) => match (r.next()?, r.next()?) {
            (false, false) => Op::Close,
            (false, true) => Op::Dec,
            (true, false) => Op::Read,
            (true, true) => return Some(None),
        },
    }))
}

/// Table of `B`, the first simulated machine.
pub(crate) const M1_TABLE: [(&str, &str); 2] = [("1", ""), ("01", "0")];

/// Runs `U` on `bits[start..]`, stopping wherever the program stops
/// reading.
pub(crate) fn exec_prefix(bits: &[bool], start: usize, steps: u64) -> Exec {
    if steps == 0 {
        return Exec::NoHalt;
    }
    let mut r = Reader { bits, pos: start };
    let mut index = 1u32;
    loop {
        match r.next() {
            None => return Exec::Invalid,
            Some(true) => break,
            Some(false) => {
                index += 1;
                if index >= 3 {
                    return Exec::Invalid;
                }
            }
        }
    }
    let mut budget = steps - 1;
    match index {
        1 => exec_m1(bits, r.pos, budget),
        _ => {
            let mut code = Vec::new();
            loop {
                match parse_op(&mut r) {
                    None => return Exec::Invalid,
                    Some(None) => break,
                    Some(Some(op)) => code.push(op),
                }
            }
            let Some(jumps) = match_brackets(&code) else {
                return Exec::Invalid;
            };
            let mut tape: Vec<u64> = vec![0];
            let mut head = 0usize;
            let mut pc = 0usize;
            let mut output = BitString::empty();
            while pc < code.len() {
                if budget == 0 {
                    return Exec::NoHalt;
                }
                budget -= 1;
                match code[pc] {
                    Op::Inc => tape[head] = tape[head].saturating_add(1),
                    Op::Dec => tape[head] = tape[head].saturating_sub(1),
                    Op::Emit => output.push(tape[head] & 1 == 1),
                    Op::Right => {
                        head += 1;
                        if head == tape.len() {
                            tape.push(0);
                        }
                    }
                    Op::Left => head = head.saturating_sub(1),
                    Op::Open => {
                        if tape[head] == 0 {
                            pc = jumps[pc];
                        }
                    }
                    Op::Close => {
                        if tape[head] != 0 {
                            pc = jumps[pc];
                        }
                    }
                    Op::Read => match r.next() {
                        Some(b) => tape[head] = b as u64,
                        None => return Exec::Invalid,
                    },
                }
                pc += 1;
            }
            Exec::Halted { output, end: r.pos }
        }
    }
}

fn exec_m1(bits: &[bool], start: usize, budget: u64) -> Exec {
    if budget == 0 {
        return Exec::NoHalt;
    }
    let rest = &bits[start.min(bits.len())..];
    for (key, out) in M1_TABLE {
        let key: Vec<bool> = key.chars().map(|c| c == '1').collect();
        if rest.starts_with(&key) {
            let output = out.parse().expect("static table");
            return Exec::Halted {
                output,
                end: start + key.len(),
            };
        }
    }
    // a proper prefix of a key cannot halt either
    Exec::Invalid
}

/// Matching bracket positions, or `None` when unbalanced.
fn match_brackets(code: &[Op]) -> Option<Vec<usize>> {
    let mut jumps = vec![0; code.len()];
    let mut stack = Vec::new();
    for (i, op) in code.iter().enumerate() {
        match op {
            Op::Open => stack.push(i),
            Op::Close => {
                let j = stack.pop()?;
                jumps[i] = j;
                jumps[j] = i;
            }
            _ => {}
        }
    }
    stack.is_empty().then_some(jumps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn run_exact(p: &str, steps: u64) -> Exec {
        let p = bs(p);
        match exec_prefix(p.bits(), 0, steps) {
            Exec::Halted { end, .. } if end != p.len() => Exec::Invalid,
            other => other,
        }
    }

    #[test]
    fn opcodes_are_prefix_free() {
        let mut codes: Vec<BitString> = [
            Op::Inc,
            Op::Emit,
            Op::Right,
            Op::Left,
            Op::Open,
            Op::Close,
            Op::Dec,
            Op::Read,
        ]
        .iter()
        .map(|op| bs(op.code()))
        .collect();
        codes.push(bs(END_CODE));
        assert!(crate::domain::is_prefix_free(&codes));
        // complete code: Kraft sum exactly one
        let kraft: f64 = codes.iter().map(|c| 0.5f64.powi(c.len() as i32)).sum();
        assert_eq!(kraft, 1.0);
    }

    #[test]
    fn shortest_emit_empty() {
        assert_eq!(
            run_exact("11", 2),
            Exec::Halted {
                output: BitString::empty(),
                end: 2
            }
        );
        assert_eq!(run_exact("1", 10), Exec::Invalid);
        assert_eq!(run_exact("0", 10), Exec::Invalid);
        assert_eq!(run_exact("11", 1), Exec::NoHalt);
        assert_eq!(run_exact("101", 10), Exec::Halted { output: bs("0"), end: 3 });
    }

    #[test]
    fn interpreter_programs() {
        let p = encode_program("+.+.", &BitString::empty()).unwrap();
        match exec_prefix(p.bits(), 0, 100) {
            Exec::Halted { output, end } => {
                assert_eq!(output, bs("10"));
                assert_eq!(end, p.len());
            }
            other => panic!("{other:?}"),
        }
        // copy three input bits to the output
        let p = encode_program(",.,.,.", &bs("101")).unwrap();
        assert_eq!(
            exec_prefix(p.bits(), 0, 100),
            Exec::Halted { output: bs("101"), end: p.len() }
        );
        // input bits not read: not in the domain
        let p = encode_program(",.", &bs("10")).unwrap();
        assert_eq!(run_exact(&p.to_string(), 100), Exec::Invalid);
        // missing input
        let p = encode_program(",.,.", &bs("1")).unwrap();
        assert_eq!(run_exact(&p.to_string(), 100), Exec::Invalid);
    }

    #[test]
    fn loops_respect_the_budget() {
        let p = encode_program("+[]", &BitString::empty()).unwrap();
        assert_eq!(exec_prefix(p.bits(), 0, 10_000), Exec::NoHalt);
        // countdown loop: 3 increments, then 3 passes of "[-]"
        let p = encode_program("+++[-].", &BitString::empty()).unwrap();
        match exec_prefix(p.bits(), 0, 1000) {
            Exec::Halted { output, .. } => assert_eq!(output, bs("0")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unbalanced_and_high_index_are_invalid() {
        // 01 + "[" + end
        assert_eq!(run_exact("011011111", 100), Exec::Invalid);
        assert_eq!(run_exact("001", 100), Exec::Invalid);
        assert!(encode_program("]", &BitString::empty()).is_err());
    }
}
