//! Rank-1 constraint systems with an embedded witness-generation program.
//!
//! A [`CircuitBuilder`] allocates signals, records constraints of the form
//! `<a,w> * <b,w> = <c,w>`, and appends witness steps that later replay in
//! order to produce a full assignment from the named inputs. Finalizing the
//! builder yields an immutable [`ConstraintSystem`] that can synthesize
//! witnesses, check satisfaction, report statistics, and round-trip through
//! JSON for external proving toolchains.
//!
//! Builder misuse — referencing unallocated signals, forward references in
//! witness steps, assigning a signal twice — is rejected by panicking: those
//! are programming errors in circuit construction code, not runtime
//! conditions. Everything reachable from untrusted data (deserialization,
//! synthesis inputs, witness checking) returns errors instead.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::field::FieldElement;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum R1csError {
    #[error("input `{0}` is missing from the assignment")]
    MissingInput(String),
    #[error("assignment names `{0}`, which is not an input of this circuit")]
    UnknownInput(String),
    #[error("witness has {got} values but the circuit has {want} signals")]
    WitnessLength { got: usize, want: usize },
    #[error("constraint system is malformed: {0}")]
    Malformed(String),
}

/// Index of a circuit signal. Index 0 is reserved for the constant-one
/// signal; inputs and internal signals follow in allocation order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SignalId(pub u32);

impl SignalId {
    pub const ONE: SignalId = SignalId(0);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A linear combination of signals with field coefficients. Constants ride on
/// the constant-one signal. Terms are kept sorted by signal index with
/// duplicate signals merged and zero coefficients dropped, so equal
/// combinations compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Lc {
    terms: Vec<(FieldElement, SignalId)>,
}

impl Lc {
    pub fn zero() -> Self {
        Lc { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Lc::constant(FieldElement::ONE)
    }

    pub fn constant(value: FieldElement) -> Self {
        Lc::from_terms(vec![(value, SignalId::ONE)])
    }

    pub fn signal(id: SignalId) -> Self {
        Lc::from_terms(vec![(FieldElement::ONE, id)])
    }

    pub fn term(coeff: FieldElement, id: SignalId) -> Self {
        Lc::from_terms(vec![(coeff, id)])
    }

    /// Canonicalizes an arbitrary term list: sort by signal, merge
    /// duplicates, drop zeros.
    pub fn from_terms(mut terms: Vec<(FieldElement, SignalId)>) -> Self {
        terms.sort_by_key(|&(_, id)| id);
        let mut merged: Vec<(FieldElement, SignalId)> = Vec::with_capacity(terms.len());
        for (coeff, id) in terms {
            match merged.last_mut() {
                Some((acc, last)) if *last == id => *acc = acc.add(&coeff),
                _ => merged.push((coeff, id)),
            }
        }
        merged.retain(|(coeff, _)| !coeff.is_zero());
        Lc { terms: merged }
    }

    pub fn terms(&self) -> &[(FieldElement, SignalId)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when some term references a signal other than the constant one.
    pub fn has_nonconstant_term(&self) -> bool {
        self.terms.iter().any(|&(_, id)| id != SignalId::ONE)
    }

    /// The single signal this combination consists of, if it is exactly
    /// `1 * signal` for a non-constant signal.
    pub fn as_single_signal(&self) -> Option<SignalId> {
        match self.terms.as_slice() {
            [(coeff, id)] if *coeff == FieldElement::ONE && *id != SignalId::ONE => Some(*id),
            _ => None,
        }
    }

    pub fn scale(&self, factor: FieldElement) -> Lc {
        if factor.is_zero() {
            return Lc::zero();
        }
        Lc {
            terms: self
                .terms
                .iter()
                .map(|&(coeff, id)| (coeff.mul(&factor), id))
                .collect(),
        }
    }

    /// Sums many combinations in one pass; cheaper than repeated `+` when the
    /// operand count is large (score aggregation builds thousands of terms).
    pub fn sum<'a, I: IntoIterator<Item = &'a Lc>>(parts: I) -> Lc {
        let mut all: Vec<(FieldElement, SignalId)> = Vec::new();
        for part in parts {
            all.extend_from_slice(&part.terms);
        }
        Lc::from_terms(all)
    }

    /// Evaluates the combination against a full witness vector.
    pub fn evaluate(&self, values: &[FieldElement]) -> FieldElement {
        self.terms
            .iter()
            .map(|&(coeff, id)| coeff.mul(&values[id.index()]))
            .sum()
    }

    fn max_signal(&self) -> u32 {
        self.terms.iter().map(|&(_, id)| id.0).max().unwrap_or(0)
    }
}

impl<'de> Deserialize<'de> for Lc {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let terms = Vec::<(FieldElement, SignalId)>::deserialize(deserializer)?;
        Ok(Lc::from_terms(terms))
    }
}

impl From<SignalId> for Lc {
    fn from(id: SignalId) -> Self {
        Lc::signal(id)
    }
}

impl std::ops::Add for &Lc {
    type Output = Lc;
    fn add(self, rhs: &Lc) -> Lc {
        let mut terms = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        terms.extend_from_slice(&self.terms);
        terms.extend_from_slice(&rhs.terms);
        Lc::from_terms(terms)
    }
}

impl std::ops::Sub for &Lc {
    type Output = Lc;
    #[allow(clippy::suspicious_arithmetic_impl)] // capacity math, not element math
    fn sub(self, rhs: &Lc) -> Lc {
        let mut terms = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        terms.extend_from_slice(&self.terms);
        terms.extend(rhs.terms.iter().map(|&(coeff, id)| (coeff.neg(), id)));
        Lc::from_terms(terms)
    }
}

/// One rank-1 constraint `<a,w> * <b,w> = <c,w>`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub a: Lc,
    pub b: Lc,
    pub c: Lc,
}

impl Constraint {
    /// Non-linear iff both product sides involve a non-constant signal;
    /// everything else is effectively an affine relation.
    pub fn is_nonlinear(&self) -> bool {
        self.a.has_nonconstant_term() && self.b.has_nonconstant_term()
    }

    pub fn holds(&self, values: &[FieldElement]) -> bool {
        self.a.evaluate(values).mul(&self.b.evaluate(values)) == self.c.evaluate(values)
    }
}

/// How a witness step computes its target signal from earlier values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessRule {
    /// Target gets the value of the combination.
    Linear(Lc),
    /// Target gets the product of the two combination values.
    Product(Lc, Lc),
    /// Target gets the modular inverse of the combination value, or zero
    /// when that value is zero (the is-zero gadget's hint).
    InvOrZero(Lc),
}

impl WitnessRule {
    fn max_signal(&self) -> u32 {
        match self {
            WitnessRule::Linear(lc) | WitnessRule::InvOrZero(lc) => lc.max_signal(),
            WitnessRule::Product(a, b) => a.max_signal().max(b.max_signal()),
        }
    }

    fn referenced_ok(&self, assignable: &[bool]) -> bool {
        let check = |lc: &Lc| lc.terms().iter().all(|&(_, id)| assignable[id.index()]);
        match self {
            WitnessRule::Linear(lc) | WitnessRule::InvOrZero(lc) => check(lc),
            WitnessRule::Product(a, b) => check(a) && check(b),
        }
    }

    fn evaluate(&self, values: &[FieldElement]) -> FieldElement {
        match self {
            WitnessRule::Linear(lc) => lc.evaluate(values),
            WitnessRule::Product(a, b) => a.evaluate(values).mul(&b.evaluate(values)),
            WitnessRule::InvOrZero(lc) => lc.evaluate(values).inv_or_zero(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessStep {
    pub target: SignalId,
    pub rule: WitnessRule,
}

/// Visibility class of a freshly allocated signal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Visibility {
    PublicInput,
    PrivateInput,
    Internal,
}

/// Named input assignment: instance field names (`seq[i][j]`, `aln[i][j]`,
/// `score`) to field values.
pub type InputMap = BTreeMap<String, FieldElement>;

/// A complete signal assignment, indexed by [`SignalId`]. Serializes as an
/// array of decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Witness {
    pub values: Vec<FieldElement>,
}

impl Witness {
    pub fn value(&self, id: SignalId) -> FieldElement {
        self.values[id.index()]
    }
}

/// Compiler-style circuit summary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitStats {
    pub nonlinear_constraints: usize,
    pub linear_constraints: usize,
    pub wires: usize,
    pub public_inputs: usize,
    pub private_inputs: usize,
    pub outputs: usize,
}

/// Mutable builder for a [`ConstraintSystem`]. Single-writer: one thread
/// drives construction; `finalize` consumes the builder, so allocation after
/// finalization is unrepresentable.
#[derive(Debug, Default)]
pub struct CircuitBuilder {
    num_signals: u32,
    constraints: Vec<Constraint>,
    public_inputs: Vec<SignalId>,
    private_inputs: Vec<SignalId>,
    outputs: Vec<SignalId>,
    input_layout: BTreeMap<String, SignalId>,
    witness_program: Vec<WitnessStep>,
    /// Per-signal flag: value available once inputs are bound (constant,
    /// inputs, and targets of already-pushed steps).
    assignable: Vec<bool>,
}

impl CircuitBuilder {
    pub fn new() -> Self {
        CircuitBuilder {
            num_signals: 1,
            assignable: vec![true], // the constant-one signal
            ..Default::default()
        }
    }

    pub fn num_signals(&self) -> u32 {
        self.num_signals
    }

    /// Allocates a fresh signal. Public inputs are appended to the public
    /// list in allocation order.
    pub fn alloc(&mut self, visibility: Visibility) -> SignalId {
        let id = SignalId(self.num_signals);
        self.num_signals += 1;
        match visibility {
            Visibility::PublicInput => {
                self.public_inputs.push(id);
                self.assignable.push(true);
            }
            Visibility::PrivateInput => {
                self.private_inputs.push(id);
                self.assignable.push(true);
            }
            Visibility::Internal => self.assignable.push(false),
        }
        id
    }

    /// Allocates an input signal and registers it in the named layout.
    ///
    /// Panics if the name is already taken.
    pub fn alloc_input(&mut self, name: impl Into<String>, public: bool) -> SignalId {
        let name = name.into();
        let id = self.alloc(if public {
            Visibility::PublicInput
        } else {
            Visibility::PrivateInput
        });
        let prev = self.input_layout.insert(name.clone(), id);
        assert!(prev.is_none(), "duplicate input name `{name}`");
        id
    }

    fn check_lc(&self, lc: &Lc) {
        assert!(
            lc.max_signal() < self.num_signals,
            "linear combination references unallocated signal {} (have {})",
            lc.max_signal(),
            self.num_signals
        );
    }

    /// Appends the constraint `<a,w> * <b,w> = <c,w>`.
    ///
    /// Panics if any referenced signal is unallocated.
    pub fn enforce(&mut self, a: Lc, b: Lc, c: Lc) {
        self.check_lc(&a);
        self.check_lc(&b);
        self.check_lc(&c);
        self.constraints.push(Constraint { a, b, c });
    }

    /// Appends a witness step for an already-allocated internal signal.
    ///
    /// Panics on forward references, on re-assignment, and on targets that
    /// are not internal signals.
    pub fn push_witness_step(&mut self, target: SignalId, rule: WitnessRule) {
        assert!(
            target.index() < self.num_signals as usize,
            "witness step targets unallocated signal {}",
            target.0
        );
        assert!(
            !self.assignable[target.index()],
            "signal {} is already assignable (input, constant, or double assignment)",
            target.0
        );
        assert!(
            rule.max_signal() < self.num_signals && rule.referenced_ok(&self.assignable),
            "witness step for signal {} references a value that is not yet assignable",
            target.0
        );
        self.assignable[target.index()] = true;
        self.witness_program.push(WitnessStep { target, rule });
    }

    /// Allocates an internal signal and assigns it in one move.
    pub fn assign(&mut self, rule: WitnessRule) -> SignalId {
        let id = self.alloc(Visibility::Internal);
        self.push_witness_step(id, rule);
        id
    }

    /// Marks a signal as a circuit output.
    pub fn mark_output(&mut self, id: SignalId) {
        assert!(id != SignalId::ONE && id.index() < self.num_signals as usize);
        self.outputs.push(id);
    }

    /// Freezes the builder into an immutable system. Panics if some internal
    /// signal was never assigned a witness step — such a circuit could not
    /// synthesize witnesses.
    pub fn finalize(self) -> ConstraintSystem {
        if let Some(unassigned) = self.assignable.iter().position(|ok| !ok) {
            panic!("internal signal {unassigned} has no witness step");
        }
        ConstraintSystem {
            num_signals: self.num_signals,
            constraints: self.constraints,
            public_inputs: self.public_inputs,
            outputs: self.outputs,
            input_layout: self.input_layout,
            witness_program: self.witness_program,
            private_inputs: self.private_inputs,
        }
    }
}

/// A finalized, immutable constraint system. Safe to share across threads;
/// witness synthesis and satisfaction checks on a shared system are
/// independent per call.
///
/// The serde form is the JSON interchange format: field elements as decimal
/// strings, linear combinations as `[[coeff, signal], ...]` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintSystem {
    pub num_signals: u32,
    pub constraints: Vec<Constraint>,
    pub public_inputs: Vec<SignalId>,
    pub outputs: Vec<SignalId>,
    pub input_layout: BTreeMap<String, SignalId>,
    pub witness_program: Vec<WitnessStep>,
    pub private_inputs: Vec<SignalId>,
}

impl ConstraintSystem {
    /// Runs the witness program over the named inputs, producing a complete
    /// assignment. The map must name exactly the circuit's inputs.
    pub fn synthesize_witness(&self, inputs: &InputMap) -> Result<Witness, R1csError> {
        let mut values = vec![FieldElement::ZERO; self.num_signals as usize];
        values[0] = FieldElement::ONE;
        for name in inputs.keys() {
            if !self.input_layout.contains_key(name) {
                return Err(R1csError::UnknownInput(name.clone()));
            }
        }
        for (name, id) in &self.input_layout {
            let value = inputs
                .get(name)
                .ok_or_else(|| R1csError::MissingInput(name.clone()))?;
            values[id.index()] = *value;
        }
        for step in &self.witness_program {
            values[step.target.index()] = step.rule.evaluate(&values);
        }
        Ok(Witness { values })
    }

    fn check_len(&self, witness: &Witness) -> Result<(), R1csError> {
        if witness.values.len() != self.num_signals as usize {
            return Err(R1csError::WitnessLength {
                got: witness.values.len(),
                want: self.num_signals as usize,
            });
        }
        Ok(())
    }

    /// True iff every constraint holds under the witness. Fans out over
    /// rayon when the `parallel` feature is enabled.
    #[cfg(feature = "parallel")]
    pub fn check_satisfied(&self, witness: &Witness) -> Result<bool, R1csError> {
        self.check_len(witness)?;
        Ok(self
            .constraints
            .par_iter()
            .all(|constraint| constraint.holds(&witness.values)))
    }

    /// True iff every constraint holds under the witness.
    #[cfg(not(feature = "parallel"))]
    pub fn check_satisfied(&self, witness: &Witness) -> Result<bool, R1csError> {
        self.check_satisfied_sequential(witness)
    }

    /// Sequential satisfaction check; the fallback used when the `parallel`
    /// feature is off, and the baseline the benchmarks compare against.
    pub fn check_satisfied_sequential(&self, witness: &Witness) -> Result<bool, R1csError> {
        self.check_len(witness)?;
        Ok(self
            .constraints
            .iter()
            .all(|constraint| constraint.holds(&witness.values)))
    }

    pub fn stats(&self) -> CircuitStats {
        let nonlinear = self
            .constraints
            .iter()
            .filter(|constraint| constraint.is_nonlinear())
            .count();
        CircuitStats {
            nonlinear_constraints: nonlinear,
            linear_constraints: self.constraints.len() - nonlinear,
            wires: self.num_signals as usize,
            public_inputs: self.public_inputs.len(),
            private_inputs: self.private_inputs.len(),
            outputs: self.outputs.len(),
        }
    }

    /// Signals whose witness values are public: inputs first, then outputs.
    pub fn public_signals(&self) -> Vec<SignalId> {
        self.public_inputs
            .iter()
            .chain(self.outputs.iter())
            .copied()
            .collect()
    }

    /// Canonical JSON bytes — the interchange form, also the preimage of the
    /// backend fingerprint. Deterministic for a given system.
    pub fn to_canonical_json(&self) -> Vec<u8> {
        serde_json::to_vec(self).expect("constraint system serialization cannot fail")
    }

    /// Parses and validates an interchange JSON document.
    pub fn from_json(bytes: &[u8]) -> Result<ConstraintSystem, R1csError> {
        let cs: ConstraintSystem =
            serde_json::from_slice(bytes).map_err(|e| R1csError::Malformed(e.to_string()))?;
        cs.validate()?;
        Ok(cs)
    }

    /// Structural validation for systems arriving from outside the builder.
    pub fn validate(&self) -> Result<(), R1csError> {
        let n = self.num_signals as usize;
        if n == 0 {
            return Err(R1csError::Malformed("no constant-one signal".into()));
        }
        let mut assignable = vec![false; n];
        assignable[0] = true;
        let mut is_input = vec![false; n];
        for &id in self.public_inputs.iter().chain(&self.private_inputs) {
            if id == SignalId::ONE || id.index() >= n {
                return Err(R1csError::Malformed(format!(
                    "input signal {} out of range",
                    id.0
                )));
            }
            if is_input[id.index()] {
                return Err(R1csError::Malformed(format!(
                    "signal {} declared as input twice",
                    id.0
                )));
            }
            is_input[id.index()] = true;
            assignable[id.index()] = true;
        }
        for (name, &id) in &self.input_layout {
            if id.index() >= n || !is_input[id.index()] {
                return Err(R1csError::Malformed(format!(
                    "layout entry `{name}` does not name an input signal"
                )));
            }
        }
        for step in &self.witness_program {
            if step.target.index() >= n || assignable[step.target.index()] {
                return Err(R1csError::Malformed(format!(
                    "witness step target {} is out of range or already assigned",
                    step.target.0
                )));
            }
            if step.rule.max_signal() as usize >= n || !step.rule.referenced_ok(&assignable) {
                return Err(R1csError::Malformed(format!(
                    "witness step for {} has a forward reference",
                    step.target.0
                )));
            }
            assignable[step.target.index()] = true;
        }
        for constraint in &self.constraints {
            for lc in [&constraint.a, &constraint.b, &constraint.c] {
                for &(_, id) in lc.terms() {
                    if id.index() >= n || !assignable[id.index()] {
                        return Err(R1csError::Malformed(format!(
                            "constraint references signal {} with no value source",
                            id.0
                        )));
                    }
                }
            }
        }
        for &id in &self.outputs {
            if id == SignalId::ONE || id.index() >= n {
                return Err(R1csError::Malformed(format!(
                    "output signal {} out of range",
                    id.0
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(v: u64) -> FieldElement {
        FieldElement::from_u64(v)
    }

    #[test]
    fn allocation_sequencing() {
        let mut b = CircuitBuilder::new();
        let first = b.alloc(Visibility::PublicInput);
        assert_eq!(first, SignalId(1));
        let second = b.alloc(Visibility::PrivateInput);
        assert_ne!(first, second);
        let cs = b.finalize();
        assert_eq!(cs.public_inputs, vec![first]);
        assert_eq!(cs.private_inputs, vec![second]);
    }

    #[test]
    fn lc_canonical_form() {
        let a = SignalId(1);
        let lc = Lc::from_terms(vec![
            (fe(3), a),
            (fe(2), SignalId::ONE),
            (fe(5), a),
            (FieldElement::ZERO, SignalId(2)),
        ]);
        assert_eq!(lc.terms(), &[(fe(2), SignalId::ONE), (fe(8), a)],);
        let diff = &lc - &lc;
        assert!(diff.is_empty());
        assert!(!lc.clone().scale(FieldElement::ZERO).has_nonconstant_term());
    }

    #[test]
    fn classification_rule() {
        let mut b = CircuitBuilder::new();
        let x = b.alloc(Visibility::PrivateInput);
        let y = b.alloc(Visibility::PrivateInput);
        // constant * constant: linear
        b.enforce(
            Lc::constant(fe(3)),
            Lc::constant(fe(2)),
            Lc::constant(fe(6)),
        );
        // signal * signal: non-linear
        b.enforce(Lc::signal(x), Lc::signal(y), Lc::zero());
        // signal * constant: linear
        b.enforce(Lc::signal(x), Lc::constant(fe(2)), Lc::signal(y));
        let cs = b.finalize();
        let flags: Vec<bool> = cs.constraints.iter().map(|c| c.is_nonlinear()).collect();
        assert_eq!(flags, vec![false, true, false]);
        let stats = cs.stats();
        assert_eq!(stats.nonlinear_constraints, 1);
        assert_eq!(stats.linear_constraints, 2);
    }

    #[test]
    #[should_panic(expected = "unallocated signal")]
    fn enforce_rejects_unknown_signal() {
        let mut b = CircuitBuilder::new();
        b.enforce(Lc::signal(SignalId(7)), Lc::one(), Lc::zero());
    }

    #[test]
    #[should_panic(expected = "not yet assignable")]
    fn witness_step_rejects_forward_reference() {
        let mut b = CircuitBuilder::new();
        let later = b.alloc(Visibility::Internal);
        let target = b.alloc(Visibility::Internal);
        b.push_witness_step(target, WitnessRule::Linear(Lc::signal(later)));
    }

    #[test]
    #[should_panic(expected = "already assignable")]
    fn witness_step_rejects_double_assignment() {
        let mut b = CircuitBuilder::new();
        let t = b.alloc(Visibility::Internal);
        b.push_witness_step(t, WitnessRule::Linear(Lc::one()));
        b.push_witness_step(t, WitnessRule::Linear(Lc::zero()));
    }

    #[test]
    fn empty_circuit_witness_and_stats() {
        let cs = CircuitBuilder::new().finalize();
        let w = cs.synthesize_witness(&InputMap::new()).unwrap();
        assert_eq!(w.values, vec![FieldElement::ONE]);
        assert_eq!(cs.check_satisfied(&w), Ok(true));
        let stats = cs.stats();
        assert_eq!(
            stats,
            CircuitStats {
                nonlinear_constraints: 0,
                linear_constraints: 0,
                wires: 1,
                public_inputs: 0,
                private_inputs: 0,
                outputs: 0,
            }
        );
    }

    #[test]
    fn witness_rules_evaluate() {
        let mut b = CircuitBuilder::new();
        let x = b.alloc_input("x", false);
        // y = 3x + 1
        let lin = Lc::from_terms(vec![(fe(3), x), (FieldElement::ONE, SignalId::ONE)]);
        let y = b.assign(WitnessRule::Linear(lin));
        // square = x * x
        let sq = b.assign(WitnessRule::Product(Lc::signal(x), Lc::signal(x)));
        // hint = inv-or-zero(x)
        let hint = b.assign(WitnessRule::InvOrZero(Lc::signal(x)));
        let cs = b.finalize();

        let mut inputs = InputMap::new();
        inputs.insert("x".into(), fe(5));
        let w = cs.synthesize_witness(&inputs).unwrap();
        assert_eq!(w.value(y), fe(16));
        assert_eq!(w.value(sq), fe(25));
        assert_eq!(w.value(hint), fe(5).inv().unwrap());

        inputs.insert("x".into(), FieldElement::ZERO);
        let w = cs.synthesize_witness(&inputs).unwrap();
        assert_eq!(w.value(hint), FieldElement::ZERO);
    }

    #[test]
    fn synthesis_rejects_bad_input_maps() {
        let mut b = CircuitBuilder::new();
        b.alloc_input("x", true);
        let cs = b.finalize();
        assert_eq!(
            cs.synthesize_witness(&InputMap::new()),
            Err(R1csError::MissingInput("x".into()))
        );
        let mut inputs = InputMap::new();
        inputs.insert("x".into(), fe(1));
        inputs.insert("bogus".into(), fe(2));
        assert_eq!(
            cs.synthesize_witness(&inputs),
            Err(R1csError::UnknownInput("bogus".into()))
        );
    }

    #[test]
    fn check_satisfied_and_mutation() {
        // z = x * y with an extra linear tie z = 6 when x=2, y=3
        let mut b = CircuitBuilder::new();
        let x = b.alloc_input("x", false);
        let y = b.alloc_input("y", false);
        let z = b.assign(WitnessRule::Product(Lc::signal(x), Lc::signal(y)));
        b.enforce(Lc::signal(x), Lc::signal(y), Lc::signal(z));
        let cs = b.finalize();

        let mut inputs = InputMap::new();
        inputs.insert("x".into(), fe(2));
        inputs.insert("y".into(), fe(3));
        let w = cs.synthesize_witness(&inputs).unwrap();
        assert_eq!(cs.check_satisfied(&w), Ok(true));
        assert_eq!(cs.check_satisfied_sequential(&w), Ok(true));

        // flipping any constrained signal breaks satisfaction
        for id in [x, y, z] {
            let mut bad = w.clone();
            bad.values[id.index()] = bad.values[id.index()].add(&FieldElement::ONE);
            assert_eq!(cs.check_satisfied(&bad), Ok(false), "signal {}", id.0);
        }

        let short = Witness {
            values: vec![FieldElement::ONE],
        };
        assert!(matches!(
            cs.check_satisfied(&short),
            Err(R1csError::WitnessLength { .. })
        ));
    }

    #[test]
    fn witness_determinism() {
        let mut b = CircuitBuilder::new();
        let x = b.alloc_input("x", false);
        let inv = b.assign(WitnessRule::InvOrZero(Lc::signal(x)));
        let _ = b.assign(WitnessRule::Product(Lc::signal(inv), Lc::signal(x)));
        let cs = b.finalize();
        let mut inputs = InputMap::new();
        inputs.insert("x".into(), fe(12345));
        let w1 = cs.synthesize_witness(&inputs).unwrap();
        let w2 = cs.synthesize_witness(&inputs).unwrap();
        assert_eq!(w1, w2);
    }

    #[test]
    fn finalized_systems_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<ConstraintSystem>();
        assert_send_sync::<Witness>();

        // concurrent synthesis and checking on one shared system
        let mut b = CircuitBuilder::new();
        let x = b.alloc_input("x", false);
        let sq = b.assign(WitnessRule::Product(Lc::signal(x), Lc::signal(x)));
        b.enforce(Lc::signal(x), Lc::signal(x), Lc::signal(sq));
        let cs = std::sync::Arc::new(b.finalize());
        let handles: Vec<_> = (0u64..4)
            .map(|t| {
                let cs = std::sync::Arc::clone(&cs);
                std::thread::spawn(move || {
                    for v in 0..50 {
                        let mut inputs = InputMap::new();
                        inputs.insert("x".into(), fe(t * 1000 + v));
                        let w = cs.synthesize_witness(&inputs).unwrap();
                        assert_eq!(cs.check_satisfied(&w), Ok(true));
                    }
                })
            })
            .collect();
        for handle in handles {
            handle.join().unwrap();
        }
    }

    #[test]
    fn json_roundtrip() {
        let mut b = CircuitBuilder::new();
        let x = b.alloc_input("x", true);
        let y = b.assign(WitnessRule::Product(Lc::signal(x), Lc::signal(x)));
        b.enforce(Lc::signal(x), Lc::signal(x), Lc::signal(y));
        b.mark_output(y);
        let cs = b.finalize();

        let json = cs.to_canonical_json();
        assert_eq!(json, cs.to_canonical_json(), "canonical form is stable");
        let back = ConstraintSystem::from_json(&json).unwrap();
        assert_eq!(back, cs);

        // spot-check the wire format shape
        let value: serde_json::Value = serde_json::from_slice(&json).unwrap();
        assert_eq!(value["num_signals"], 3);
        assert_eq!(value["constraints"][0]["a"][0][0], "1");
        assert_eq!(value["constraints"][0]["a"][0][1], 1);
        assert_eq!(value["input_layout"]["x"], 1);

        let witness = cs
            .synthesize_witness(&{
                let mut m = InputMap::new();
                m.insert("x".into(), fe(4));
                m
            })
            .unwrap();
        let wjson = serde_json::to_string(&witness).unwrap();
        assert_eq!(wjson, r#"["1","4","16"]"#);
    }

    #[test]
    fn from_json_validates() {
        // witness program with a forward reference must be rejected
        let bad = r#"{
            "num_signals": 3,
            "constraints": [],
            "public_inputs": [],
            "outputs": [],
            "input_layout": {},
            "witness_program": [
                {"target": 1, "rule": {"linear": [["1", 2]]}},
                {"target": 2, "rule": {"linear": [["1", 0]]}}
            ],
            "private_inputs": []
        }"#;
        assert!(matches!(
            ConstraintSystem::from_json(bad.as_bytes()),
            Err(R1csError::Malformed(_))
        ));
    }
}
