use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{DistanceMetric, ReductionBundle, Tightness};
use crate::error::{Error, Result};
use crate::model::{LocalSearchProblem, Rational, Solution};
use crate::problems::{max_circuit_weights, CircuitBuilder, CircuitInstance, SwopInstance};

/// Shape of a string `x = first · second · a · b` of length `2n + 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Form {
    Uu00,
    Uv00,
    Uw10,
    Vu11,
    Uu10,
    Unstructured,
}

impl Form {
    pub fn name(self) -> &'static str {
        match self {
            Form::Uu00 => "uu00",
            Form::Uv00 => "uv00",
            Form::Uw10 => "uw10",
            Form::Vu11 => "vu11",
            Form::Uu10 => "uu10",
            Form::Unstructured => "unstructured",
        }
    }
}

/// A classified string. For `vu11`, `u` is the second half and `w` a solution
/// with `u` among its improving swaps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuredString {
    pub raw: Solution,
    pub form: Form,
    pub u: Option<Solution>,
    pub v: Option<Solution>,
    pub w: Option<Solution>,
}

impl StructuredString {
    fn unstructured(raw: &Solution) -> Self {
        StructuredString { raw: raw.clone(), form: Form::Unstructured, u: None, v: None, w: None }
    }

    pub fn is_structured(&self) -> bool {
        self.form != Form::Unstructured
    }
}

/// Whether `d` is a prefix (or suffix) of `chain`, with the empty and full
/// cases allowed as given.
fn matches_part(d: &[usize], chain: &[usize], prefix: bool, allow_empty: bool, allow_full: bool) -> bool {
    let k = chain.len();
    if d.is_empty() {
        return allow_empty;
    }
    if d.len() > k || (d.len() == k && !allow_full) {
        return false;
    }
    if prefix {
        d == &chain[..d.len()]
    } else {
        d == &chain[k - d.len()..]
    }
}

/// Classifies `raw`, trying the forms in the order `uu00, uv00, uu10, uw10,
/// vu11`. Chains flip differing positions in increasing order; the `uv00`
/// chain excludes its start, the `vu11` chain includes both ends.
pub fn decode_structured(raw: &Solution, inst: &SwopInstance) -> Result<StructuredString> {
    let g = inst.ground_size();
    if raw.len() != 2 * g + 2 {
        return Err(Error::Arity { expected: 2 * g + 2, got: raw.len() });
    }
    let first = raw.slice(0, g);
    let second = raw.slice(g, 2 * g);
    let d: Vec<usize> = first.xor(&second).ones().collect();
    let found = |form, u: &Solution, v: &Solution, w: Option<Solution>| StructuredString {
        raw: raw.clone(),
        form,
        u: Some(u.clone()),
        v: Some(v.clone()),
        w,
    };
    match (raw.get(2 * g), raw.get(2 * g + 1)) {
        (false, false) if inst.certify(&first).is_ok() => {
            if d.is_empty() {
                return Ok(found(Form::Uu00, &first, &second, None));
            }
            for w in inst.improving_neighbors(&first) {
                let chain: Vec<usize> = first.xor(&w).ones().collect();
                if matches_part(&d, &chain, true, false, true) {
                    return Ok(found(Form::Uv00, &first, &second, Some(w)));
                }
            }
        }
        (true, false) if inst.certify(&first).is_ok() => {
            if d.is_empty() {
                return Ok(found(Form::Uu10, &first, &second, None));
            }
            if inst.improving_neighbors(&first).contains(&second) {
                return Ok(found(Form::Uw10, &first, &second, Some(second.clone())));
            }
        }
        (true, true) if inst.certify(&second).is_ok() => {
            for w in inst.neighbors(&second) {
                if !inst.better(&second, &w) {
                    continue;
                }
                let chain: Vec<usize> = w.xor(&second).ones().collect();
                if matches_part(&d, &chain, false, true, true) {
                    return Ok(found(Form::Vu11, &second, &first, Some(w)));
                }
            }
        }
        _ => {}
    }
    Ok(StructuredString::unstructured(raw))
}

/// SWOP with c-swaps reduced to Max-Circuit with flips over `2n + 2` inputs.
///
/// With integer weights `ω` (scaled by the common denominator) and
/// `K = 2n + 4`, the circuit outputs `h(x) + shift` for structured `x`, where
/// `shift = 2n + 4 - m0` and `m0 = K·Σ_{ω_i<0} ω_i - n - 2` lifts every
/// structured value to at least `2n + 4`. Unstructured strings output
/// `2n + 3 - popcount(x)`.
#[derive(Debug, Clone)]
pub struct SwopToCircuit {
    source: SwopInstance,
    target: CircuitInstance,
    int_weights: Vec<BigInt>,
    k: BigInt,
    shift: BigInt,
}

fn integer_weights(inst: &SwopInstance) -> Vec<BigInt> {
    let w = inst.ground_weights();
    let lcm = w.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    w.iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect()
}

pub fn reduce_swop_to_maxcircuit(inst: &SwopInstance) -> Result<SwopToCircuit> {
    let g = inst.ground_size();
    if inst.certify(&Solution::empty(g)).is_err() {
        return Err(Error::Precondition("the empty set must be a certified solution".into()));
    }
    let c = inst.swap_bound().min(g);
    let w = integer_weights(inst);
    let gb = BigInt::from(g);
    let k = BigInt::from(2 * g + 4);
    let neg: BigInt = w.iter().filter(|x| x.is_negative()).sum();
    let pos: BigInt = w.iter().filter(|x| x.is_positive()).sum();
    let m0 = &k * &neg - &gb - 2;
    let shift = BigInt::from(2 * g + 4) - &m0;
    let max_out: BigInt = &k * &pos + &shift + &gb + 1;
    let width = max_out.bits() as usize + 1;

    let mut cb = CircuitBuilder::new(2 * g + 2);
    let u: Vec<usize> = (0..g).collect();
    let v: Vec<usize> = (g..2 * g).collect();
    let (a, b) = (2 * g, 2 * g + 1);
    let valid_u = inst.validity_gate(&mut cb, &u);
    let valid_v = inst.validity_gate(&mut cb, &v);
    let d: Vec<usize> = (0..g).map(|i| cb.xor(u[i], v[i])).collect();
    let any_d = cb.or(&d);
    let d_zero = cb.not(any_d);

    let mut eq_cache: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut eq_set = |cb: &mut CircuitBuilder, set: &[usize]| -> usize {
        *eq_cache.entry(set.to_vec()).or_insert_with(|| {
            let mut pattern = vec![false; g];
            for &i in set {
                pattern[i] = true;
            }
            cb.equals_pattern(&d, &pattern)
        })
    };
    // Gate for "the swap of the positions in `mask` changes the weight with the given sign".
    let gain_sign = |cb: &mut CircuitBuilder, bits: &[usize], mask: &[usize], positive: bool| -> usize {
        let mut terms = Vec::new();
        for sigma in 0u32..(1u32 << mask.len()) {
            let mut gain = BigInt::zero();
            let mut lits = Vec::with_capacity(mask.len());
            for (j, &i) in mask.iter().enumerate() {
                if sigma >> j & 1 == 1 {
                    gain -= &w[i];
                    lits.push(bits[i]);
                } else {
                    gain += &w[i];
                    lits.push(cb.not(bits[i]));
                }
            }
            if (positive && gain.is_positive()) || (!positive && gain.is_negative()) {
                terms.push(cb.and(&lits));
            }
        }
        cb.or(&terms)
    };

    let (mut chain00, mut jump10, mut chain11) = (Vec::new(), Vec::new(), Vec::new());
    for mask in masks(g, c) {
        let flipped = |cb: &mut CircuitBuilder, bits: &[usize]| -> Vec<usize> {
            bits.iter().enumerate().map(|(i, &x)| if mask.contains(&i) { cb.not(x) } else { x }).collect()
        };
        let fu = flipped(&mut cb, &u);
        let valid_fu = inst.validity_gate(&mut cb, &fu);
        let up = gain_sign(&mut cb, &u, &mask, true);
        let improving = cb.and(&[valid_fu, up]);
        let prefixes: Vec<usize> = (1..=mask.len()).map(|j| eq_set(&mut cb, &mask[..j])).collect();
        let on_chain = cb.or(&prefixes);
        chain00.push(cb.and(&[improving, on_chain]));
        let full = eq_set(&mut cb, &mask);
        jump10.push(cb.and(&[improving, full]));

        let fv = flipped(&mut cb, &v);
        let valid_fv = inst.validity_gate(&mut cb, &fv);
        let down = gain_sign(&mut cb, &v, &mask, false);
        let predecessor = cb.and(&[valid_fv, down]);
        let suffixes: Vec<usize> = (0..=mask.len()).map(|j| eq_set(&mut cb, &mask[j..])).collect();
        let on_chain = cb.or(&suffixes);
        chain11.push(cb.and(&[predecessor, on_chain]));
    }

    let na = cb.not(a);
    let nb = cb.not(b);
    let any00 = cb.or(&chain00);
    let reach00 = cb.or(&[d_zero, any00]);
    let f00 = cb.and(&[valid_u, na, nb, reach00]);
    let f_uu10 = cb.and(&[valid_u, a, nb, d_zero]);
    let any10 = cb.or(&jump10);
    let f_uw10 = cb.and(&[valid_u, a, nb, any10]);
    let any11 = cb.or(&chain11);
    let f11 = cb.and(&[valid_v, a, b, any11]);
    let structured = cb.or(&[f00, f_uu10, f_uw10, f11]);
    let f_un = cb.not(structured);

    let scaled: Vec<BigInt> = w.iter().map(|x| x * &k).collect();
    let shift_word = cb.const_word(&shift, width);
    let su = cb.weighted_sum(&u, &scaled, width);
    let su = cb.add(&su, &shift_word);
    let sv = cb.weighted_sum(&v, &scaled, width);
    let sv = cb.add(&sv, &shift_word);
    let hd = cb.popcount(&d, width);
    let val00 = cb.add(&su, &hd);
    let minus_one = cb.const_word(&BigInt::from(-1), width);
    let val_uu10 = cb.add(&su, &minus_one);
    let plus = cb.const_word(&(&gb + 1), width);
    let val_uw10 = cb.add(&su, &plus);
    let minus_two = cb.const_word(&BigInt::from(-2), width);
    let sv2 = cb.add(&sv, &minus_two);
    let val11 = cb.sub(&sv2, &hd);
    let all: Vec<usize> = (0..2 * g + 2).collect();
    let ones = cb.popcount(&all, width);
    let mu = cb.const_word(&BigInt::from(2 * g + 3), width);
    let val_un = cb.sub(&mu, &ones);

    let words = vec![
        cb.gate_word(f00, &val00),
        cb.gate_word(f_uu10, &val_uu10),
        cb.gate_word(f_uw10, &val_uw10),
        cb.gate_word(f11, &val11),
        cb.gate_word(f_un, &val_un),
    ];
    let out = cb.or_words(&words);
    let outputs = out[..width - 1].to_vec();
    let target = cb.build(outputs, max_circuit_weights(width - 1, false))?;
    Ok(SwopToCircuit { source: inst.clone(), target, int_weights: w, k, shift })
}

/// All subsets of `0..g` with 1 to `c` elements, as sorted index lists.
fn masks(g: usize, c: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, g: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if left == 0 {
            return;
        }
        for i in start..g {
            cur.push(i);
            rec(i + 1, g, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, g, c, &mut Vec::new(), &mut out);
    out
}

impl SwopToCircuit {
    pub fn swop(&self) -> &SwopInstance {
        &self.source
    }

    pub fn circuit(&self) -> &CircuitInstance {
        &self.target
    }

    /// Weight of `u` under the integer-scaled weights.
    pub fn integer_weight(&self, u: &Solution) -> BigInt {
        u.ones().map(|i| &self.int_weights[i]).sum()
    }

    pub fn decode(&self, x: &Solution) -> Result<StructuredString> {
        decode_structured(x, &self.source)
    }

    /// `h(x)` for structured strings, computed directly from the forms.
    pub fn h_value(&self, x: &Solution) -> Result<Option<BigInt>> {
        let s = self.decode(x)?;
        let g = self.source.ground_size();
        let (Some(u), Some(v)) = (&s.u, &s.v) else {
            return Ok(None);
        };
        let base = &self.k * self.integer_weight(u);
        let h = BigInt::from(u.distance(v));
        Ok(Some(match s.form {
            Form::Uu00 | Form::Uv00 => base + h,
            Form::Uw10 => base + BigInt::from(g + 1),
            Form::Uu10 => base - 1,
            Form::Vu11 => base - h - 2,
            Form::Unstructured => unreachable!(),
        }))
    }

    /// The value the circuit should output on `x`, computed without it.
    pub fn expected_output(&self, x: &Solution) -> Result<BigInt> {
        let g = self.source.ground_size();
        Ok(match self.h_value(x)? {
            Some(h) => h + &self.shift,
            None => BigInt::from(2 * g + 3) - BigInt::from(x.count_ones()),
        })
    }

    /// The additive shift applied to structured values.
    pub fn shift(&self) -> &BigInt {
        &self.shift
    }

    /// `u · u · 00`.
    pub fn uu00(&self, u: &Solution) -> Solution {
        let z = Solution::empty(2);
        Solution::concat(&[u, u, &z])
    }
}

impl ReductionBundle for SwopToCircuit {
    fn source(&self) -> &dyn LocalSearchProblem {
        &self.source
    }

    fn target(&self) -> &dyn LocalSearchProblem {
        &self.target
    }

    fn psi(&self, t: &Solution) -> Solution {
        match self.decode(t) {
            Ok(StructuredString { u: Some(u), .. }) => u,
            _ => Solution::empty(self.source.ground_size()),
        }
    }

    fn embed(&self, s: &Solution) -> Result<Solution> {
        self.source.certify(s)?;
        Ok(self.uu00(s))
    }

    fn r_member(&self, t: &Solution) -> bool {
        self.decode(t).map(|s| s.is_structured()).unwrap_or(false)
    }

    fn tightness(&self) -> Tightness {
        Tightness::Bounded { ell: 4 * self.source.swap_bound() + 4, metric: DistanceMetric::Neighborhood }
    }
}
