use std::fmt;
use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::model::{check_arity, LocalSearchProblem, Rational, Sense, Solution};

/// A gate of a Boolean circuit; operands are indices of earlier gates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Gate {
    Input(usize),
    Const(bool),
    Not(usize),
    And(Vec<usize>),
    Or(Vec<usize>),
}

/// Weighted Circuit with the flip neighborhood. The objective is
/// `sum_i weights[i] * y_i` over the output gates `y`.
#[derive(Clone)]
pub struct CircuitInstance {
    gates: Vec<Gate>,
    inputs: usize,
    outputs: Vec<usize>,
    weights: Vec<Rational>,
    scale: BigInt,
    scaled: Option<Vec<i64>>,
}

impl fmt::Debug for CircuitInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CircuitInstance")
            .field("inputs", &self.inputs)
            .field("gates", &self.gates.len())
            .field("outputs", &self.outputs)
            .field("weights", &self.weights)
            .finish()
    }
}

impl PartialEq for CircuitInstance {
    fn eq(&self, other: &Self) -> bool {
        self.gates == other.gates
            && self.inputs == other.inputs
            && self.outputs == other.outputs
            && self.weights == other.weights
    }
}

/// `2^(i-1)` for `i = 1..=m`, negated for the min variant.
pub fn max_circuit_weights(m: usize, min_variant: bool) -> Vec<Rational> {
    (0..m)
        .map(|i| {
            let w = Rational::from_integer(BigInt::one() << i);
            if min_variant {
                -w
            } else {
                w
            }
        })
        .collect()
}

impl CircuitInstance {
    pub fn new(gates: Vec<Gate>, inputs: usize, outputs: Vec<usize>, weights: Vec<Rational>) -> Result<Self> {
        let mut seen = vec![false; inputs];
        for (i, gate) in gates.iter().enumerate() {
            let operands: &[usize] = match gate {
                Gate::Input(k) => {
                    if *k >= inputs || seen[*k] {
                        return Err(Error::InputContract(format!("gate {i}: input {k} is out of range or repeated")));
                    }
                    seen[*k] = true;
                    &[]
                }
                Gate::Const(_) => &[],
                Gate::Not(a) => std::slice::from_ref(a),
                Gate::And(ops) | Gate::Or(ops) => ops,
            };
            if let Some(bad) = operands.iter().find(|&&a| a >= i) {
                return Err(Error::InputContract(format!("gate {i} references gate {bad}, which is not earlier")));
            }
        }
        if let Some(k) = seen.iter().position(|s| !s) {
            return Err(Error::InputContract(format!("input {k} has no gate")));
        }
        if let Some(bad) = outputs.iter().find(|&&o| o >= gates.len()) {
            return Err(Error::InputContract(format!("output references missing gate {bad}")));
        }
        if weights.len() != outputs.len() {
            return Err(Error::Arity { expected: outputs.len(), got: weights.len() });
        }
        let scale = weights.iter().fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
        let big: Vec<BigInt> = weights.iter().map(|w| w.numer() * (&scale / w.denom())).collect();
        let total: BigInt = big.iter().map(|w| w.abs()).sum();
        let scaled =
            (total < BigInt::from(1u64 << 62)).then(|| big.iter().map(|w| w.to_i64().expect("bounded")).collect());
        Ok(CircuitInstance { gates, inputs, outputs, weights, scale, scaled })
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn input_count(&self) -> usize {
        self.inputs
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn with_weights(&self, weights: Vec<Rational>) -> Result<Self> {
        CircuitInstance::new(self.gates.clone(), self.inputs, self.outputs.clone(), weights)
    }

    fn gate_values(&self, x: &Solution) -> Vec<bool> {
        let mut val: Vec<bool> = Vec::with_capacity(self.gates.len());
        for gate in &self.gates {
            let v = match gate {
                Gate::Input(k) => x.get(*k),
                Gate::Const(b) => *b,
                Gate::Not(a) => !val[*a],
                Gate::And(ops) => ops.iter().all(|&a| val[a]),
                Gate::Or(ops) => ops.iter().any(|&a| val[a]),
            };
            val.push(v);
        }
        val
    }

    pub fn output_bits(&self, x: &Solution) -> Vec<bool> {
        let val = self.gate_values(x);
        self.outputs.iter().map(|&o| val[o]).collect()
    }

    /// One forward pass: output bits and the weighted objective.
    pub fn evaluate(&self, x: &Solution) -> Result<(Vec<bool>, Rational)> {
        check_arity(self, x)?;
        let bits = self.output_bits(x);
        let obj = self.weights.iter().zip(&bits).filter(|(_, &b)| b).map(|(w, _)| w.clone()).sum();
        Ok((bits, obj))
    }

    /// Evaluates 64 assignments at once; `lanes[k]` holds input `k` of each.
    pub fn output_lanes(&self, lanes: &[u64]) -> Vec<u64> {
        let mut val: Vec<u64> = Vec::with_capacity(self.gates.len());
        for gate in &self.gates {
            let v = match gate {
                Gate::Input(k) => lanes[*k],
                Gate::Const(b) => {
                    if *b {
                        u64::MAX
                    } else {
                        0
                    }
                }
                Gate::Not(a) => !val[*a],
                Gate::And(ops) => ops.iter().fold(u64::MAX, |acc, &a| acc & val[a]),
                Gate::Or(ops) => ops.iter().fold(0, |acc, &a| acc | val[a]),
            };
            val.push(v);
        }
        self.outputs.iter().map(|&o| val[o]).collect()
    }

    /// For each input, the number of outputs that depend on it.
    pub fn outputs_per_input(&self) -> Vec<usize> {
        let mut deps: Vec<Solution> = Vec::with_capacity(self.gates.len());
        for gate in &self.gates {
            let d = match gate {
                Gate::Input(k) => Solution::from_indices(self.inputs, [*k]),
                Gate::Const(_) => Solution::empty(self.inputs),
                Gate::Not(a) => deps[*a].clone(),
                Gate::And(ops) | Gate::Or(ops) => {
                    ops.iter().fold(Solution::empty(self.inputs), |acc, &a| acc.or(&deps[a]))
                }
            };
            deps.push(d);
        }
        let mut count = vec![0; self.inputs];
        for &o in &self.outputs {
            for k in deps[o].ones() {
                count[k] += 1;
            }
        }
        count
    }

    fn scaled_objective(&self, x: &Solution) -> Option<i128> {
        let w = self.scaled.as_ref()?;
        Some(self.output_bits(x).iter().zip(w).filter(|(&b, _)| b).map(|(_, &w)| w as i128).sum())
    }

    fn dfs(&self, k: usize, cur: &mut Solution, visit: &mut dyn FnMut(&Solution) -> ControlFlow<()>) -> ControlFlow<()> {
        if k == self.inputs {
            return visit(cur);
        }
        self.dfs(k + 1, cur, visit)?;
        cur.set(k, true);
        let r = self.dfs(k + 1, cur, visit);
        cur.set(k, false);
        r
    }
}

impl LocalSearchProblem for CircuitInstance {
    fn ground_size(&self) -> usize {
        self.inputs
    }

    fn sense(&self) -> Sense {
        Sense::Maximize
    }

    fn certify(&self, s: &Solution) -> Result<()> {
        check_arity(self, s)
    }

    fn objective(&self, s: &Solution) -> Rational {
        match self.scaled_objective(s) {
            Some(v) => Rational::new(BigInt::from(v), self.scale.clone()),
            None => self.evaluate(s).expect("arity checked by caller").1,
        }
    }

    fn objective_scaled(&self, s: &Solution) -> Option<i128> {
        self.scaled_objective(s)
    }

    fn neighbors(&self, s: &Solution) -> Vec<Solution> {
        let mut out: Vec<Solution> = (0..self.inputs).map(|i| s.flipped(i)).collect();
        out.sort();
        out
    }

    fn is_neighbor(&self, a: &Solution, b: &Solution) -> bool {
        a.len() == self.inputs && b.len() == self.inputs && a.distance(b) == 1
    }

    fn neighborhood_arity_bound(&self) -> String {
        self.inputs.to_string()
    }

    fn for_each_solution(&self, visit: &mut dyn FnMut(&Solution) -> ControlFlow<()>) {
        let mut cur = Solution::empty(self.inputs);
        let _ = self.dfs(0, &mut cur, visit);
    }
}

/// Incremental circuit construction with light constant folding. Words are
/// little-endian vectors of gate indices in two's complement.
#[derive(Debug, Clone)]
pub struct CircuitBuilder {
    gates: Vec<Gate>,
    inputs: usize,
    consts: [Option<usize>; 2],
}

impl CircuitBuilder {
    /// Gates `0..inputs` are the inputs in order.
    pub fn new(inputs: usize) -> Self {
        CircuitBuilder { gates: (0..inputs).map(Gate::Input).collect(), inputs, consts: [None, None] }
    }

    pub fn input(&self, k: usize) -> usize {
        assert!(k < self.inputs);
        k
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    fn push(&mut self, g: Gate) -> usize {
        self.gates.push(g);
        self.gates.len() - 1
    }

    fn const_value(&self, g: usize) -> Option<bool> {
        match self.gates[g] {
            Gate::Const(b) => Some(b),
            _ => None,
        }
    }

    pub fn constant(&mut self, b: bool) -> usize {
        if let Some(g) = self.consts[b as usize] {
            return g;
        }
        let g = self.push(Gate::Const(b));
        self.consts[b as usize] = Some(g);
        g
    }

    pub fn not(&mut self, a: usize) -> usize {
        match self.gates[a] {
            Gate::Const(b) => self.constant(!b),
            Gate::Not(inner) => inner,
            _ => self.push(Gate::Not(a)),
        }
    }

    pub fn and(&mut self, ops: &[usize]) -> usize {
        let mut kept = Vec::with_capacity(ops.len());
        for &a in ops {
            match self.const_value(a) {
                Some(false) => return self.constant(false),
                Some(true) => {}
                None => kept.push(a),
            }
        }
        kept.sort_unstable();
        kept.dedup();
        match kept.len() {
            0 => self.constant(true),
            1 => kept[0],
            _ => self.push(Gate::And(kept)),
        }
    }

    pub fn or(&mut self, ops: &[usize]) -> usize {
        let mut kept = Vec::with_capacity(ops.len());
        for &a in ops {
            match self.const_value(a) {
                Some(true) => return self.constant(true),
                Some(false) => {}
                None => kept.push(a),
            }
        }
        kept.sort_unstable();
        kept.dedup();
        match kept.len() {
            0 => self.constant(false),
            1 => kept[0],
            _ => self.push(Gate::Or(kept)),
        }
    }

    pub fn xor(&mut self, a: usize, b: usize) -> usize {
        let na = self.not(a);
        let nb = self.not(b);
        let l = self.and(&[a, nb]);
        let r = self.and(&[na, b]);
        self.or(&[l, r])
    }

    /// Whether `bits` equals the constant `pattern`.
    pub fn equals_pattern(&mut self, bits: &[usize], pattern: &[bool]) -> usize {
        assert_eq!(bits.len(), pattern.len());
        let lits: Vec<usize> = bits.iter().zip(pattern).map(|(&b, &p)| if p { b } else { self.not(b) }).collect();
        self.and(&lits)
    }

    pub fn equals(&mut self, a: &[usize], b: &[usize]) -> usize {
        assert_eq!(a.len(), b.len());
        let diffs: Vec<usize> = a.iter().zip(b).map(|(&x, &y)| self.xor(x, y)).collect();
        let any = self.or(&diffs);
        self.not(any)
    }

    pub fn const_word(&mut self, value: &BigInt, width: usize) -> Vec<usize> {
        let modulus = BigInt::one() << width;
        let v = value.mod_floor(&modulus);
        (0..width).map(|i| self.constant(v.bit(i as u64))).collect()
    }

    pub fn add(&mut self, a: &[usize], b: &[usize]) -> Vec<usize> {
        assert_eq!(a.len(), b.len());
        let mut carry = self.constant(false);
        let mut out = Vec::with_capacity(a.len());
        for (&x, &y) in a.iter().zip(b) {
            let xy = self.xor(x, y);
            out.push(self.xor(xy, carry));
            let both = self.and(&[x, y]);
            let prop = self.and(&[xy, carry]);
            carry = self.or(&[both, prop]);
        }
        out
    }

    pub fn negate(&mut self, a: &[usize]) -> Vec<usize> {
        let inv: Vec<usize> = a.iter().map(|&x| self.not(x)).collect();
        let one = self.const_word(&BigInt::one(), a.len());
        self.add(&inv, &one)
    }

    pub fn sub(&mut self, a: &[usize], b: &[usize]) -> Vec<usize> {
        let nb = self.negate(b);
        self.add(a, &nb)
    }

    /// Sign bit of a two's complement word.
    pub fn is_negative(&self, a: &[usize]) -> usize {
        *a.last().expect("nonempty word")
    }

    pub fn is_positive(&mut self, a: &[usize]) -> usize {
        let any = self.or(a);
        let neg = self.is_negative(a);
        let nonneg = self.not(neg);
        self.and(&[any, nonneg])
    }

    /// `flag ? word : 0`, bitwise.
    pub fn gate_word(&mut self, flag: usize, word: &[usize]) -> Vec<usize> {
        word.iter().map(|&b| self.and(&[flag, b])).collect()
    }

    pub fn or_words(&mut self, words: &[Vec<usize>]) -> Vec<usize> {
        let width = words[0].len();
        (0..width)
            .map(|i| {
                let col: Vec<usize> = words.iter().map(|w| w[i]).collect();
                self.or(&col)
            })
            .collect()
    }

    /// Sum of `bits[i] * constants[i]` as a `width`-bit word.
    pub fn weighted_sum(&mut self, bits: &[usize], constants: &[BigInt], width: usize) -> Vec<usize> {
        let mut acc = self.const_word(&BigInt::zero(), width);
        for (&b, c) in bits.iter().zip(constants) {
            if c.is_zero() {
                continue;
            }
            let cw = self.const_word(c, width);
            let term = self.gate_word(b, &cw);
            acc = self.add(&acc, &term);
        }
        acc
    }

    /// Number of set bits among `bits` as a `width`-bit word.
    pub fn popcount(&mut self, bits: &[usize], width: usize) -> Vec<usize> {
        let ones: Vec<BigInt> = vec![BigInt::one(); bits.len()];
        self.weighted_sum(bits, &ones, width)
    }

    pub fn build(self, outputs: Vec<usize>, weights: Vec<Rational>) -> Result<CircuitInstance> {
        CircuitInstance::new(self.gates, self.inputs, outputs, weights)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity(n: usize) -> CircuitInstance {
        CircuitInstance::new((0..n).map(Gate::Input).collect(), n, (0..n).collect(), max_circuit_weights(n, false))
            .unwrap()
    }

    #[test]
    fn identity_binary_value() {
        let c = identity(3);
        let (bits, obj) = c.evaluate(&Solution::parse("101").unwrap()).unwrap();
        assert_eq!(bits, vec![true, false, true]);
        assert_eq!(obj, Rational::from_integer(5.into()));
    }

    #[test]
    fn constant_zero_outputs() {
        let gates = vec![Gate::Input(0), Gate::Input(1), Gate::Const(false)];
        let c = CircuitInstance::new(gates, 2, vec![2, 2], max_circuit_weights(2, false)).unwrap();
        c.for_each_solution(&mut |x| {
            assert!(c.objective(x).is_zero());
            ControlFlow::Continue(())
        });
    }

    #[test]
    fn weights_closed_form() {
        let r = |v: i64| Rational::from_integer(v.into());
        assert_eq!(max_circuit_weights(1, false), vec![r(1)]);
        assert_eq!(max_circuit_weights(3, false), vec![r(1), r(2), r(4)]);
        assert_eq!(max_circuit_weights(3, true), vec![r(-1), r(-2), r(-4)]);
    }

    #[test]
    fn arity_mismatch() {
        let c = identity(3);
        assert!(matches!(c.evaluate(&Solution::empty(2)), Err(Error::Arity { expected: 3, got: 2 })));
    }

    #[test]
    fn forward_references_rejected() {
        let gates = vec![Gate::Input(0), Gate::Not(2), Gate::Const(true)];
        assert!(CircuitInstance::new(gates, 1, vec![1], max_circuit_weights(1, false)).is_err());
    }

    #[test]
    fn arithmetic_words() {
        let mut b = CircuitBuilder::new(4);
        let a = vec![0, 1];
        let c = vec![2, 3];
        let sum = b.add(&a, &c);
        let diff = b.sub(&a, &c);
        let pc = b.popcount(&[0, 1, 2, 3], 3);
        let mut outs = sum.clone();
        outs.extend(&diff);
        outs.extend(&pc);
        let m = outs.len();
        let circ = b.build(outs, max_circuit_weights(m, false)).unwrap();
        for mask in 0u32..16 {
            let x = Solution::from_indices(4, (0..4).filter(|&i| mask >> i & 1 == 1));
            let bits = circ.output_bits(&x);
            let word = |r: std::ops::Range<usize>| r.enumerate().map(|(k, i)| (bits[i] as u32) << k).sum::<u32>();
            let av = mask & 3;
            let cv = mask >> 2 & 3;
            assert_eq!(word(0..2), (av + cv) % 4);
            assert_eq!(word(2..4), (av + 4 - cv) % 4);
            assert_eq!(word(4..7), mask.count_ones());
        }
    }
}
