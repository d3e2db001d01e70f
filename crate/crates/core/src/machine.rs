//! Deterministic single-tape Turing machines: transition tables, configurations,
//! single-step semantics and bounded execution.
//!
//! Tapes are sparse and unbounded in both directions. A configuration only ever
//! stores non-blank cells, so structural equality of two configurations is
//! equality of the computational states they denote.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StateId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SymbolId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Move {
    #[serde(rename = "L")]
    Left,
    #[serde(rename = "R")]
    Right,
    #[serde(rename = "S")]
    Stay,
}

impl Move {
    fn offset(self) -> i64 {
        match self {
            Move::Left => -1,
            Move::Right => 1,
            Move::Stay => 0,
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "L" => Some(Move::Left),
            "R" => Some(Move::Right),
            "S" => Some(Move::Stay),
            _ => None,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Move::Left => "L",
            Move::Right => "R",
            Move::Stay => "S",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Action {
    pub next: StateId,
    pub write: SymbolId,
    pub movement: Move,
}

/// A deterministic Turing machine with a total transition table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TmSpec {
    name: String,
    states: Vec<String>,
    alphabet: Vec<String>,
    blank: SymbolId,
    /// Indexed by `state * alphabet.len() + symbol`.
    table: Vec<Action>,
    initial: StateId,
    result_states: Vec<bool>,
}

/// On-disk form of a machine. Transitions are `[state, read, next, write, move]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TmFile {
    #[serde(default)]
    pub name: String,
    pub states: Vec<String>,
    pub alphabet: Vec<String>,
    pub blank: String,
    pub transitions: Vec<[String; 5]>,
    pub initial: String,
    pub result_states: Vec<String>,
}

impl TmSpec {
    pub fn from_file(file: &TmFile) -> Result<Self> {
        let index = |names: &[String], field: &str| -> Result<HashMap<String, usize>> {
            let mut map = HashMap::with_capacity(names.len());
            for (i, n) in names.iter().enumerate() {
                if map.insert(n.clone(), i).is_some() {
                    return Err(Error::Parse(format!("{field}[{i}]: duplicate entry {n:?}")));
                }
            }
            Ok(map)
        };
        if file.states.is_empty() {
            return Err(Error::Parse("states: must not be empty".into()));
        }
        let states = index(&file.states, "states")?;
        let symbols = index(&file.alphabet, "alphabet")?;
        let blank = *symbols
            .get(&file.blank)
            .ok_or_else(|| Error::Parse(format!("blank: {:?} is not in the alphabet", file.blank)))?;
        let initial = *states
            .get(&file.initial)
            .ok_or_else(|| Error::Parse(format!("initial: unknown state {:?}", file.initial)))?;

        let width = file.alphabet.len();
        let mut table: Vec<Option<Action>> = vec![None; file.states.len() * width];
        for (i, [q, a, q2, b, mv]) in file.transitions.iter().enumerate() {
            let lookup = |map: &HashMap<String, usize>, key: &str, what: &str| {
                map.get(key)
                    .copied()
                    .ok_or_else(|| Error::Parse(format!("transitions[{i}]: unknown {what} {key:?}")))
            };
            let q = lookup(&states, q, "state")?;
            let a = lookup(&symbols, a, "symbol")?;
            let next = lookup(&states, q2, "state")?;
            let write = lookup(&symbols, b, "symbol")?;
            let movement = Move::parse(mv)
                .ok_or_else(|| Error::Parse(format!("transitions[{i}]: head move {mv:?} is not one of L, R, S")))?;
            let slot = &mut table[q * width + a];
            if slot.is_some() {
                return Err(Error::Parse(format!(
                    "transitions[{i}]: duplicate rule for ({}, {})",
                    file.states[q], file.alphabet[a]
                )));
            }
            *slot = Some(Action { next: StateId(next), write: SymbolId(write), movement });
        }
        let table = table
            .into_iter()
            .enumerate()
            .map(|(i, a)| {
                a.ok_or_else(|| {
                    Error::Parse(format!(
                        "transitions: no rule for ({}, {})",
                        file.states[i / width],
                        file.alphabet[i % width]
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;

        let mut result_states = vec![false; file.states.len()];
        for (i, r) in file.result_states.iter().enumerate() {
            let q = states
                .get(r)
                .ok_or_else(|| Error::Parse(format!("result_states[{i}]: unknown state {r:?}")))?;
            result_states[*q] = true;
        }

        Ok(TmSpec {
            name: file.name.clone(),
            states: file.states.clone(),
            alphabet: file.alphabet.clone(),
            blank: SymbolId(blank),
            table,
            initial: StateId(initial),
            result_states,
        })
    }

    /// Parses the JSON machine format. Syntax errors carry line and column.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: TmFile = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        Self::from_file(&file)
    }

    pub fn to_file(&self) -> TmFile {
        let width = self.alphabet.len();
        let transitions = self
            .table
            .iter()
            .enumerate()
            .map(|(i, a)| {
                [
                    self.states[i / width].clone(),
                    self.alphabet[i % width].clone(),
                    self.states[a.next.0].clone(),
                    self.alphabet[a.write.0].clone(),
                    a.movement.as_str().to_string(),
                ]
            })
            .collect();
        TmFile {
            name: self.name.clone(),
            states: self.states.clone(),
            alphabet: self.alphabet.clone(),
            blank: self.alphabet[self.blank.0].clone(),
            transitions,
            initial: self.states[self.initial.0].clone(),
            result_states: self
                .states
                .iter()
                .zip(&self.result_states)
                .filter(|(_, r)| **r)
                .map(|(s, _)| s.clone())
                .collect(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn blank(&self) -> SymbolId {
        self.blank
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_symbols(&self) -> usize {
        self.alphabet.len()
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q.0]
    }

    pub fn symbol_name(&self, a: SymbolId) -> &str {
        &self.alphabet[a.0]
    }

    pub fn state(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name).map(StateId)
    }

    pub fn symbol(&self, name: &str) -> Option<SymbolId> {
        self.alphabet.iter().position(|s| s == name).map(SymbolId)
    }

    pub fn is_result_state(&self, q: StateId) -> bool {
        self.result_states.get(q.0).copied().unwrap_or(false)
    }

    pub fn action(&self, q: StateId, a: SymbolId) -> Result<Action> {
        if q.0 >= self.states.len() {
            return Err(Error::SpecViolation(format!("unknown state id {}", q.0)));
        }
        if a.0 >= self.alphabet.len() {
            return Err(Error::SpecViolation(format!("unknown symbol id {}", a.0)));
        }
        Ok(self.table[q.0 * self.alphabet.len() + a.0])
    }

    /// Initial configuration with `word` written from cell 0 and the head on cell 0.
    /// Every character of `word` must name a symbol.
    pub fn load(&self, word: &str) -> Result<Configuration> {
        let mut tape = BTreeMap::new();
        for (i, ch) in word.chars().enumerate() {
            let mut buf = [0u8; 4];
            let name = ch.encode_utf8(&mut buf);
            let sym = self
                .symbol(name)
                .ok_or_else(|| Error::SpecViolation(format!("input symbol {name:?} is not in the alphabet")))?;
            if sym != self.blank {
                tape.insert(i as i64, sym);
            }
        }
        Ok(Configuration { tape, head: 0, state: self.initial })
    }

    /// The result variable `r = (z, v)` held by a configuration.
    pub fn decode(&self, config: &Configuration) -> ResultValue {
        let v: String = config.tape.values().map(|s| self.alphabet[s.0].as_str()).collect();
        ResultValue { z: u8::from(!self.is_result_state(config.state)), v }
    }
}

/// Instantaneous description of a machine: sparse tape, head cell and control state.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Configuration {
    tape: BTreeMap<i64, SymbolId>,
    pub head: i64,
    pub state: StateId,
}

impl Configuration {
    /// Builds a configuration, dropping explicit blank cells.
    pub fn new(tape: impl IntoIterator<Item = (i64, SymbolId)>, head: i64, state: StateId, blank: SymbolId) -> Self {
        let tape = tape.into_iter().filter(|(_, s)| *s != blank).collect();
        Configuration { tape, head, state }
    }

    pub fn read(&self, cell: i64, blank: SymbolId) -> SymbolId {
        self.tape.get(&cell).copied().unwrap_or(blank)
    }

    pub fn tape(&self) -> &BTreeMap<i64, SymbolId> {
        &self.tape
    }
}

/// The result variable of a computation. `z == 0` marks a result (halting) state.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ResultValue {
    pub z: u8,
    pub v: String,
}

impl ResultValue {
    pub fn result(v: impl Into<String>) -> Self {
        ResultValue { z: 0, v: v.into() }
    }

    /// Value carried by a state that has not (or not yet) produced a result.
    pub fn pending() -> Self {
        ResultValue { z: 1, v: String::new() }
    }

    pub fn is_result(&self) -> bool {
        self.z == 0
    }
}

impl fmt::Display for ResultValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {:?})", self.z, self.v)
    }
}

/// Successor configuration under the transition map. The input is left untouched.
pub fn step(spec: &TmSpec, config: &Configuration) -> Result<Configuration> {
    let read = config.read(config.head, spec.blank);
    let action = spec.action(config.state, read)?;
    let mut next = config.clone();
    if action.write == spec.blank {
        next.tape.remove(&config.head);
    } else {
        next.tape.insert(config.head, action.write);
    }
    next.head += action.movement.offset();
    next.state = action.next;
    Ok(next)
}

/// Execution history. `steps[0]` is the input configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub steps: Vec<Configuration>,
    pub halted: bool,
    /// Set when the step budget ran out before a result state was entered.
    pub budget_exceeded: bool,
    pub result: Option<ResultValue>,
}

impl Trace {
    /// Number of transitions taken.
    pub fn step_count(&self) -> usize {
        self.steps.len() - 1
    }

    pub fn last(&self) -> &Configuration {
        self.steps.last().expect("trace holds at least the input configuration")
    }
}

/// Runs until a result state is entered or `max_steps` transitions have been taken.
pub fn run(spec: &TmSpec, input: &Configuration, max_steps: usize) -> Result<Trace> {
    if max_steps == 0 {
        return Err(Error::Precondition("max_steps must be at least 1".into()));
    }
    let mut steps = vec![input.clone()];
    let mut halted = spec.is_result_state(input.state);
    while !halted && steps.len() <= max_steps {
        let next = step(spec, steps.last().unwrap())?;
        halted = spec.is_result_state(next.state);
        steps.push(next);
    }
    let result = halted.then(|| spec.decode(steps.last().unwrap()));
    Ok(Trace { steps, halted, budget_exceeded: !halted, result })
}
