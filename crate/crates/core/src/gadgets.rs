//! Comparator and boolean building blocks over the constraint builder.
//!
//! Gadgets take and return linear combinations: purely linear operations
//! ([`not`], sums) produce no signal and no constraint — their expressions
//! substitute directly into whatever consumes them — while multiplicative
//! gadgets allocate product wires. The non-linear constraint costs are part
//! of the contract and are locked down by tests:
//!
//! | gadget     | non-linear constraints |
//! |------------|------------------------|
//! | `is_zero`  | 2                      |
//! | `is_equal` | 2                      |
//! | `and`      | 1                      |
//! | `or`       | 1                      |
//! | `not`      | 0                      |
//!
//! `and`, `or`, and `not` assume boolean operands; in this crate they are fed
//! exclusively from gadget outputs, which guarantee booleanness by
//! construction, so no extra booleanity constraints are spent.

use crate::r1cs::{CircuitBuilder, Lc, WitnessRule};

/// Boolean flag for `value == 0`, correct for arbitrary field values.
///
/// Allocates an inverse hint `inv` and the complement wire `nout = x * inv`,
/// returning the expression `1 - nout`. The two constraints
/// `x * inv = nout` and `x * (1 - nout) = 0` force the output to the right
/// boolean for any satisfying witness: a nonzero `x` forces `1 - nout = 0`,
/// and `x = 0` forces `nout = 0`.
pub fn is_zero(b: &mut CircuitBuilder, x: &Lc) -> Lc {
    let inv = b.assign(WitnessRule::InvOrZero(x.clone()));
    let nout = b.assign(WitnessRule::Product(x.clone(), Lc::signal(inv)));
    b.enforce(x.clone(), Lc::signal(inv), Lc::signal(nout));
    let out = &Lc::one() - &Lc::signal(nout);
    b.enforce(x.clone(), out.clone(), Lc::zero());
    out
}

/// Boolean flag for `a == b`; an [`is_zero`] over the difference.
pub fn is_equal(b: &mut CircuitBuilder, lhs: &Lc, rhs: &Lc) -> Lc {
    is_zero(b, &(lhs - rhs))
}

/// Boolean conjunction of boolean operands: one product constraint.
pub fn and(b: &mut CircuitBuilder, lhs: &Lc, rhs: &Lc) -> Lc {
    let prod = b.assign(WitnessRule::Product(lhs.clone(), rhs.clone()));
    b.enforce(lhs.clone(), rhs.clone(), Lc::signal(prod));
    Lc::signal(prod)
}

/// Boolean disjunction of boolean operands: `a + b - a*b` with one product
/// constraint; the sum stays in the expression.
pub fn or(b: &mut CircuitBuilder, lhs: &Lc, rhs: &Lc) -> Lc {
    let prod = b.assign(WitnessRule::Product(lhs.clone(), rhs.clone()));
    b.enforce(lhs.clone(), rhs.clone(), Lc::signal(prod));
    &(lhs + rhs) - &Lc::signal(prod)
}

/// Boolean negation of a boolean operand: pure expression rewrite, no
/// constraint.
pub fn not(value: &Lc) -> Lc {
    &Lc::one() - value
}

/// OR-fold of any number of boolean edges. Empty folds to constant zero; a
/// single edge passes through unchanged.
pub fn or_fold(b: &mut CircuitBuilder, edges: &[Lc]) -> Lc {
    match edges {
        [] => Lc::zero(),
        [only] => only.clone(),
        [first, rest @ ..] => {
            let mut acc = first.clone();
            for edge in rest {
                acc = or(b, &acc, edge);
            }
            acc
        }
    }
}

/// AND-fold of any number of boolean terms; empty folds to constant one.
pub fn and_fold(b: &mut CircuitBuilder, terms: &[Lc]) -> Lc {
    match terms {
        [] => Lc::one(),
        [only] => only.clone(),
        [first, rest @ ..] => {
            let mut acc = first.clone();
            for term in rest {
                acc = and(b, &acc, term);
            }
            acc
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldElement;
    use crate::r1cs::{InputMap, SignalId, Visibility, Witness};
    use crate::sample::SampleRng;

    fn fe(v: u64) -> FieldElement {
        FieldElement::from_u64(v)
    }

    /// Builds a one-input circuit around a gadget and evaluates the output
    /// expression on the synthesized witness.
    fn eval_unary(
        gadget: impl Fn(&mut CircuitBuilder, &Lc) -> Lc,
        x: FieldElement,
    ) -> FieldElement {
        let mut b = CircuitBuilder::new();
        let input = b.alloc_input("x", false);
        let out = gadget(&mut b, &Lc::signal(input));
        let cs = b.finalize();
        let mut inputs = InputMap::new();
        inputs.insert("x".into(), x);
        let w = cs.synthesize_witness(&inputs).unwrap();
        assert_eq!(cs.check_satisfied(&w), Ok(true));
        out.evaluate(&w.values)
    }

    fn eval_binary(
        gadget: impl Fn(&mut CircuitBuilder, &Lc, &Lc) -> Lc,
        x: FieldElement,
        y: FieldElement,
    ) -> FieldElement {
        let mut b = CircuitBuilder::new();
        let xi = b.alloc_input("x", false);
        let yi = b.alloc_input("y", false);
        let out = gadget(&mut b, &Lc::signal(xi), &Lc::signal(yi));
        let cs = b.finalize();
        let mut inputs = InputMap::new();
        inputs.insert("x".into(), x);
        inputs.insert("y".into(), y);
        let w = cs.synthesize_witness(&inputs).unwrap();
        assert_eq!(cs.check_satisfied(&w), Ok(true));
        out.evaluate(&w.values)
    }

    #[test]
    fn is_zero_semantics() {
        assert_eq!(eval_unary(is_zero, FieldElement::ZERO), FieldElement::ONE);
        assert_eq!(eval_unary(is_zero, fe(7)), FieldElement::ZERO);
        assert_eq!(
            eval_unary(is_zero, FieldElement::encode_signed(-1)),
            FieldElement::ZERO
        );
    }

    #[test]
    fn is_equal_semantics() {
        assert_eq!(eval_binary(is_equal, fe(5), fe(5)), FieldElement::ONE);
        assert_eq!(
            eval_binary(is_equal, FieldElement::ZERO, fe(3)),
            FieldElement::ZERO
        );
        // same residue, different construction
        assert_eq!(
            eval_binary(
                is_equal,
                FieldElement::from_decimal_str(
                    "21888242871839275222246405745257275088548364400416034343698204186575808495616"
                )
                .unwrap(),
                FieldElement::encode_signed(-1)
            ),
            FieldElement::ONE
        );
    }

    #[test]
    fn boolean_truth_tables() {
        for (a, b, want_and, want_or) in [
            (0u64, 0u64, 0u64, 0u64),
            (0, 1, 0, 1),
            (1, 0, 0, 1),
            (1, 1, 1, 1),
        ] {
            assert_eq!(eval_binary(and, fe(a), fe(b)), fe(want_and));
            assert_eq!(eval_binary(or, fe(a), fe(b)), fe(want_or));
        }
        assert_eq!(
            eval_unary(|_, x| not(x), FieldElement::ZERO),
            FieldElement::ONE
        );
        assert_eq!(
            eval_unary(|_, x| not(x), FieldElement::ONE),
            FieldElement::ZERO
        );
    }

    #[test]
    fn boolean_closure_on_random_field_inputs() {
        let mut rng = SampleRng::new(11);
        for _ in 0..200 {
            let x = FieldElement::from_u64(rng.next_u64());
            let out = eval_unary(is_zero, x);
            assert!(out == FieldElement::ZERO || out == FieldElement::ONE);
            let y = FieldElement::from_u64(rng.next_u64());
            let eq = eval_binary(is_equal, x, y);
            assert!(eq == FieldElement::ZERO || eq == FieldElement::ONE);
        }
    }

    fn nonlinear_count(build: impl FnOnce(&mut CircuitBuilder)) -> usize {
        let mut b = CircuitBuilder::new();
        build(&mut b);
        b.finalize().stats().nonlinear_constraints
    }

    #[test]
    fn cost_table_is_exact() {
        assert_eq!(
            nonlinear_count(|b| {
                let x = b.alloc(Visibility::PrivateInput);
                is_zero(b, &Lc::signal(x));
            }),
            2
        );
        assert_eq!(
            nonlinear_count(|b| {
                let x = b.alloc(Visibility::PrivateInput);
                let y = b.alloc(Visibility::PrivateInput);
                is_equal(b, &Lc::signal(x), &Lc::signal(y));
            }),
            2
        );
        assert_eq!(
            nonlinear_count(|b| {
                let x = b.alloc(Visibility::PrivateInput);
                let y = b.alloc(Visibility::PrivateInput);
                and(b, &Lc::signal(x), &Lc::signal(y));
            }),
            1
        );
        assert_eq!(
            nonlinear_count(|b| {
                let x = b.alloc(Visibility::PrivateInput);
                let y = b.alloc(Visibility::PrivateInput);
                or(b, &Lc::signal(x), &Lc::signal(y));
            }),
            1
        );
        assert_eq!(
            nonlinear_count(|b| {
                let x = b.alloc(Visibility::PrivateInput);
                not(&Lc::signal(x));
            }),
            0
        );
    }

    /// Soundness of is_zero: with the input fixed, no assignment to the
    /// gadget's wires other than the honest one satisfies both constraints.
    #[test]
    fn is_zero_mutation_rejection() {
        let mut b = CircuitBuilder::new();
        let input = b.alloc_input("x", false);
        let out = is_zero(&mut b, &Lc::signal(input));
        let cs = b.finalize();
        // wires: [one, x, inv, nout]
        assert_eq!(cs.num_signals, 4);

        let small: Vec<FieldElement> = (0..8)
            .map(FieldElement::from_u64)
            .chain([FieldElement::encode_signed(-1)])
            .collect();
        for x in &small {
            let honest_out = if x.is_zero() {
                FieldElement::ONE
            } else {
                FieldElement::ZERO
            };
            for inv in &small {
                for nout in &small {
                    let w = Witness {
                        values: vec![FieldElement::ONE, *x, *inv, *nout],
                    };
                    if cs.check_satisfied(&w).unwrap() {
                        assert_eq!(
                            out.evaluate(&w.values),
                            honest_out,
                            "satisfying assignment with wrong output for x={x}"
                        );
                    }
                }
            }
            // the honest assignment itself must satisfy
            let w = Witness {
                values: vec![
                    FieldElement::ONE,
                    *x,
                    x.inv_or_zero(),
                    x.mul(&x.inv_or_zero()),
                ],
            };
            assert_eq!(cs.check_satisfied(&w), Ok(true));
        }
    }

    #[test]
    fn folds() {
        let mut b = CircuitBuilder::new();
        let x = b.alloc_input("x", false);
        let y = b.alloc_input("y", false);
        let z = b.alloc_input("z", false);
        let ored = or_fold(&mut b, &[Lc::signal(x), Lc::signal(y), Lc::signal(z)]);
        let anded = and_fold(&mut b, &[Lc::signal(x), Lc::signal(y), Lc::signal(z)]);
        assert_eq!(or_fold(&mut b, &[]), Lc::zero());
        assert_eq!(and_fold(&mut b, &[]), Lc::one());
        assert_eq!(or_fold(&mut b, &[Lc::signal(x)]), Lc::signal(x));
        let cs = b.finalize();
        for bits in 0..8u64 {
            let mut inputs = InputMap::new();
            inputs.insert("x".into(), fe(bits & 1));
            inputs.insert("y".into(), fe((bits >> 1) & 1));
            inputs.insert("z".into(), fe((bits >> 2) & 1));
            let w = cs.synthesize_witness(&inputs).unwrap();
            assert_eq!(cs.check_satisfied(&w), Ok(true));
            let any = bits & 7 != 0;
            let all = bits & 7 == 7;
            assert_eq!(ored.evaluate(&w.values), fe(any as u64));
            assert_eq!(anded.evaluate(&w.values), fe(all as u64));
        }
    }

    #[test]
    fn signal_0_is_the_constant() {
        assert_eq!(Lc::one().terms(), &[(FieldElement::ONE, SignalId::ONE)]);
    }
}
