//! Algebraic evaluation of formulas and brute-force frame validity.
//!
//! Assignments range over the elements of an algebra (for frames: upsets of
//! the dual algebra). Sweeps enumerate variables in name order with the
//! first variable most significant, so the reported counter-assignment is
//! always the first failing one in canonical order.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraError, FiniteAlgebra, UpsetAlgebra};
use crate::formula::{parse, Formula};
use crate::frame::Frame;

pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Variable name to element index.
pub type Assignment = BTreeMap<String, usize>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("variable `{0}` is not assigned")]
    UnboundVariable(String),
    #[error("element {0} is not in the algebra")]
    ElementOutOfRange(usize),
    #[error("sweep needs {needed} evaluations, above the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

pub fn evaluate(phi: &Formula, alg: &FiniteAlgebra, v: &Assignment) -> Result<usize, SemanticsError> {
    Ok(match phi {
        Formula::Var(name) => {
            let e = *v
                .get(&**name)
                .ok_or_else(|| SemanticsError::UnboundVariable(name.to_string()))?;
            if e >= alg.size {
                return Err(SemanticsError::ElementOutOfRange(e));
            }
            e
        }
        Formula::Bot => alg.bot,
        Formula::Top => alg.top,
        Formula::And(l, r) => alg.meet(evaluate(l, alg, v)?, evaluate(r, alg, v)?),
        Formula::Or(l, r) => alg.join(evaluate(l, alg, v)?, evaluate(r, alg, v)?),
        Formula::Implies(l, r) => alg.himp(evaluate(l, alg, v)?, evaluate(r, alg, v)?),
        Formula::Box(c) => alg.boxed(evaluate(c, alg, v)?),
        Formula::Dia(c) => alg.dia(evaluate(c, alg, v)?),
    })
}

/// Formula compiled to slot-indexed form so the sweep avoids map lookups.
enum Compiled {
    Slot(usize),
    Bot,
    Top,
    And(Box<Compiled>, Box<Compiled>),
    Or(Box<Compiled>, Box<Compiled>),
    Implies(Box<Compiled>, Box<Compiled>),
    Box(Box<Compiled>),
    Dia(Box<Compiled>),
}

impl Compiled {
    fn new(phi: &Formula, vars: &[String]) -> Compiled {
        let c = |f: &Formula| Box::new(Compiled::new(f, vars));
        match phi {
            Formula::Var(n) => Compiled::Slot(vars.iter().position(|v| **v == **n).expect("variable collected")),
            Formula::Bot => Compiled::Bot,
            Formula::Top => Compiled::Top,
            Formula::And(l, r) => Compiled::And(c(l), c(r)),
            Formula::Or(l, r) => Compiled::Or(c(l), c(r)),
            Formula::Implies(l, r) => Compiled::Implies(c(l), c(r)),
            Formula::Box(x) => Compiled::Box(c(x)),
            Formula::Dia(x) => Compiled::Dia(c(x)),
        }
    }

    fn eval(&self, a: &FiniteAlgebra, slots: &[usize]) -> usize {
        match self {
            Compiled::Slot(i) => slots[*i],
            Compiled::Bot => a.bot,
            Compiled::Top => a.top,
            Compiled::And(l, r) => a.meet(l.eval(a, slots), r.eval(a, slots)),
            Compiled::Or(l, r) => a.join(l.eval(a, slots), r.eval(a, slots)),
            Compiled::Implies(l, r) => a.himp(l.eval(a, slots), r.eval(a, slots)),
            Compiled::Box(x) => a.boxed(x.eval(a, slots)),
            Compiled::Dia(x) => a.dia(x.eval(a, slots)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Validity {
    Valid {
        assignments: u128,
    },
    Invalid {
        counter_assignment: Assignment,
        value: usize,
    },
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid { .. })
    }
}

/// Sweeps every assignment of `phi`'s variables into `alg`.
pub fn is_valid_in(phi: &Formula, alg: &FiniteAlgebra, budget: u64) -> Result<Validity, SemanticsError> {
    let vars: Vec<String> = phi.variables().iter().map(|v| v.to_string()).collect();
    let needed = (alg.size as u128).checked_pow(vars.len() as u32).unwrap_or(u128::MAX);
    if needed > budget as u128 {
        return Err(SemanticsError::BudgetExceeded { needed, budget });
    }
    let compiled = Compiled::new(phi, &vars);
    let mut slots = vec![0usize; vars.len()];
    loop {
        let value = compiled.eval(alg, &slots);
        if value != alg.top {
            let counter_assignment = vars.iter().cloned().zip(slots.iter().copied()).collect();
            return Ok(Validity::Invalid {
                counter_assignment,
                value,
            });
        }
        // odometer, last variable fastest
        let mut k = vars.len();
        loop {
            if k == 0 {
                return Ok(Validity::Valid { assignments: needed });
            }
            k -= 1;
            slots[k] += 1;
            if slots[k] < alg.size {
                break;
            }
            slots[k] = 0;
        }
    }
}

/// Frame validity: truth under every upset assignment in the dual algebra.
pub fn is_valid(phi: &Formula, frame: &Frame, budget: u64) -> Result<Validity, SemanticsError> {
    let alg = UpsetAlgebra::dual_of(frame)?;
    is_valid_in(phi, &alg, budget)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Logic {
    IK,
    IKT,
    IK4,
    IS4,
}

impl Logic {
    pub const ALL: [Logic; 4] = [Logic::IK, Logic::IKT, Logic::IK4, Logic::IS4];
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for Logic {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_uppercase().as_str() {
            "IK" => Ok(Logic::IK),
            "IKT" => Ok(Logic::IKT),
            "IK4" => Ok(Logic::IK4),
            "IS4" => Ok(Logic::IS4),
            other => Err(format!("unknown logic `{other}` (expected IK, IKT, IK4 or IS4)")),
        }
    }
}

const IK_SCHEMES: &[(&str, &str)] = &[
    ("box-meet", "box (p & q) <-> box p & box q"),
    ("box-top", "box T"),
    ("dia-join", "dia (p | q) <-> dia p | dia q"),
    ("dia-bot", "dia F <-> F"),
    ("connection-dia", "dia (p -> q) -> (box p -> dia q)"),
    ("connection-box", "(dia p -> box q) -> box (p -> q)"),
];
const T_SCHEMES: &[(&str, &str)] = &[("T-box", "box p -> p"), ("T-dia", "p -> dia p")];
const FOUR_SCHEMES: &[(&str, &str)] = &[("4-box", "box p -> box box p"), ("4-dia", "dia dia p -> dia p")];

/// Named axiom schemes of `logic`, base axioms first.
pub fn axioms(logic: Logic) -> Vec<(&'static str, Formula)> {
    let mut groups = vec![IK_SCHEMES];
    match logic {
        Logic::IK => {}
        Logic::IKT => groups.push(T_SCHEMES),
        Logic::IK4 => groups.push(FOUR_SCHEMES),
        Logic::IS4 => {
            groups.push(T_SCHEMES);
            groups.push(FOUR_SCHEMES);
        }
    }
    groups
        .into_iter()
        .flatten()
        .map(|(name, src)| (*name, parse(src).expect("built-in scheme parses")))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomResult {
    pub name: &'static str,
    pub formula: String,
    pub validity: Validity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomSuiteReport {
    pub logic: Logic,
    pub holds: bool,
    pub results: Vec<AxiomResult>,
}

impl AxiomSuiteReport {
    pub fn failing(&self) -> impl Iterator<Item = &AxiomResult> {
        self.results.iter().filter(|r| !r.validity.is_valid())
    }
}

pub fn axiom_suite_in(alg: &FiniteAlgebra, logic: Logic, budget: u64) -> Result<AxiomSuiteReport, SemanticsError> {
    let mut results = Vec::new();
    for (name, phi) in axioms(logic) {
        let validity = is_valid_in(&phi, alg, budget)?;
        results.push(AxiomResult {
            name,
            formula: phi.render(),
            validity,
        });
    }
    Ok(AxiomSuiteReport {
        logic,
        holds: results.iter().all(|r| r.validity.is_valid()),
        results,
    })
}

pub fn axiom_suite(frame: &Frame, logic: Logic, budget: u64) -> Result<AxiomSuiteReport, SemanticsError> {
    let alg = UpsetAlgebra::dual_of(frame)?;
    axiom_suite_in(&alg, logic, budget)
}
