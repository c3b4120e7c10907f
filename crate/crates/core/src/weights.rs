//! Exact lattice reduction and the Frank–Tardos weight reduction built on it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::model::Rational;

/// Default cap on the number of vectors `b` enumerated by
/// [`verify_sign_preservation`].
pub const DEFAULT_SIGN_BUDGET: u64 = 10_000_000;

/// A reduced basis together with the unimodular matrix `U` such that
/// `basis = U · input` (rows are basis vectors).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LllOutput {
    pub basis: Vec<Vec<BigInt>>,
    pub transform: Vec<Vec<BigInt>>,
}

struct GramSchmidt {
    mu: Vec<Vec<Rational>>,
    /// Squared norms of the orthogonalized vectors.
    norms: Vec<Rational>,
}

#[cfg(test)]
fn dot_int(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn gram_schmidt(basis: &[Vec<BigInt>]) -> Result<GramSchmidt> {
    let k = basis.len();
    let rows: Vec<Vec<Rational>> =
        basis.iter().map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect()).collect();
    let mut star: Vec<Vec<Rational>> = Vec::with_capacity(k);
    let mut mu = vec![vec![Rational::zero(); k]; k];
    let mut norms = Vec::with_capacity(k);
    for i in 0..k {
        let mut v = rows[i].clone();
        for j in 0..i {
            let num: Rational = rows[i].iter().zip(&star[j]).map(|(a, b)| a * b).sum();
            mu[i][j] = num / &norms[j];
            for (x, s) in v.iter_mut().zip(&star[j]) {
                *x -= &mu[i][j] * s;
            }
        }
        let n: Rational = v.iter().map(|x| x * x).sum();
        if n.is_zero() {
            return Err(Error::Rank(i));
        }
        norms.push(n);
        star.push(v);
    }
    Ok(GramSchmidt { mu, norms })
}

fn round_half_up(x: &Rational) -> BigInt {
    (x + Rational::new(BigInt::one(), BigInt::from(2))).floor().to_integer()
}

fn delta() -> Rational {
    Rational::new(BigInt::from(3), BigInt::from(4))
}

fn check_shape(basis: &[Vec<BigInt>]) -> Result<()> {
    if let Some(first) = basis.first() {
        if let Some(bad) = basis.iter().find(|r| r.len() != first.len()) {
            return Err(Error::Arity { expected: first.len(), got: bad.len() });
        }
    }
    Ok(())
}

/// LLL reduction with `δ = 3/4` in exact rational arithmetic.
pub fn lll_reduce(basis: &[Vec<BigInt>]) -> Result<LllOutput> {
    check_shape(basis)?;
    let k = basis.len();
    let mut b = basis.to_vec();
    let mut u: Vec<Vec<BigInt>> =
        (0..k).map(|i| (0..k).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    let mut gs = gram_schmidt(&b)?;
    let mut i = 1;
    while i < k {
        for j in (0..i).rev() {
            let q = round_half_up(&gs.mu[i][j]);
            if q.is_zero() {
                continue;
            }
            let (bj, uj) = (b[j].clone(), u[j].clone());
            for (x, y) in b[i].iter_mut().zip(&bj) {
                *x -= &q * y;
            }
            for (x, y) in u[i].iter_mut().zip(&uj) {
                *x -= &q * y;
            }
            let qr = Rational::from_integer(q);
            for l in 0..j {
                let m = gs.mu[j][l].clone();
                gs.mu[i][l] -= &qr * m;
            }
            gs.mu[i][j] -= &qr;
        }
        let m = &gs.mu[i][i - 1];
        if gs.norms[i] >= (delta() - m * m) * &gs.norms[i - 1] {
            i += 1;
        } else {
            b.swap(i, i - 1);
            u.swap(i, i - 1);
            gs = gram_schmidt(&b)?;
            i = (i - 1).max(1);
        }
    }
    Ok(LllOutput { basis: b, transform: u })
}

/// Size condition `|μ_ij| ≤ 1/2` and the Lovász condition with `δ = 3/4`.
pub fn is_lll_reduced(basis: &[Vec<BigInt>]) -> Result<bool> {
    check_shape(basis)?;
    let gs = gram_schmidt(basis)?;
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    for i in 1..basis.len() {
        if gs.mu[i][..i].iter().any(|m| m.abs() > half) {
            return Ok(false);
        }
        let m = &gs.mu[i][i - 1];
        if gs.norms[i] < (delta() - m * m) * &gs.norms[i - 1] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Integer weights with the same sign on every `b` with `|b|_1 ≤ N - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedWeights {
    pub entries: Vec<BigInt>,
    pub certified_n: u64,
}

impl ReducedWeights {
    pub fn max_abs(&self) -> BigInt {
        self.entries.iter().map(|x| x.abs()).max().unwrap_or_else(BigInt::zero)
    }
}

/// `2^{4k³} · N^{k(k+2)}`.
pub fn frank_tardos_bound(k: usize, n: u64) -> BigInt {
    (BigInt::one() << (4 * k * k * k)) * num_traits::pow(BigInt::from(n), k * (k + 2))
}

/// Simultaneous Diophantine approximation: `q ≥ 1` and integers `p` with
/// `|q·α - p|_∞ ≤ ε`, from the first vector of a reduced lattice basis.
fn simultaneous_approximation(alpha: &[Rational], eps: &Rational) -> Result<(BigInt, Vec<BigInt>)> {
    let d = alpha.len();
    let exp = (d * (d + 1)).div_ceil(4);
    let small = num_traits::pow(eps.clone(), d + 1) / Rational::from_integer(BigInt::one() << exp);
    let lcm = alpha.iter().chain(std::iter::once(&small)).fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scale = Rational::from_integer(lcm.clone());
    let mut basis: Vec<Vec<BigInt>> = (0..d)
        .map(|i| (0..=d).map(|j| if i == j { lcm.clone() } else { BigInt::zero() }).collect())
        .collect();
    let mut last: Vec<BigInt> = alpha.iter().map(|a| (a * &scale).to_integer()).collect();
    last.push((&small * &scale).to_integer());
    basis.push(last);
    let reduced = lll_reduce(&basis)?;
    let mut b1 = reduced.basis[0].clone();
    let step = (&small * &scale).to_integer();
    let (mut q, rem) = b1[d].div_rem(&step);
    if !rem.is_zero() || q.is_zero() {
        return Err(Error::Invariant("approximation vector is not a multiple of the last basis row".into()));
    }
    if q.is_negative() {
        q = -q;
        for x in b1.iter_mut() {
            *x = -x.clone();
        }
    }
    let qr = Rational::from_integer(q.clone());
    let mut p = Vec::with_capacity(d);
    for (a, x) in alpha.iter().zip(&b1) {
        let err = Rational::new(x.clone(), lcm.clone());
        let pi = &qr * a - &err;
        if !pi.is_integer() || err.abs() > *eps {
            return Err(Error::Invariant("approximation error exceeds the target".into()));
        }
        p.push(pi.to_integer());
    }
    Ok((q, p))
}

/// Frank–Tardos reduction: iterated simultaneous Diophantine approximation
/// with `ε = 1/N`, combined with a base large enough that earlier rounds
/// dominate later ones on every `b` with `|b|_1 ≤ N - 1`.
pub fn frank_tardos_reduce(w: &[Rational], n: u64) -> Result<ReducedWeights> {
    if n < 2 {
        return Err(Error::Precondition(format!("N must be at least 2, got {n}")));
    }
    if w.is_empty() {
        return Err(Error::Precondition("weight vector is empty".into()));
    }
    let k = w.len();
    let eps = Rational::new(BigInt::one(), BigInt::from(n));
    let mut cur = w.to_vec();
    let mut parts: Vec<Vec<BigInt>> = Vec::new();
    while cur.iter().any(|x| !x.is_zero()) {
        let norm = cur.iter().map(|x| x.abs()).max().expect("nonempty");
        let support: Vec<usize> = (0..k).filter(|&i| !cur[i].is_zero()).collect();
        let alpha: Vec<Rational> = support.iter().map(|&i| &cur[i] / &norm).collect();
        let (q, p_support) = simultaneous_approximation(&alpha, &eps)?;
        let mut p = vec![BigInt::zero(); k];
        let mut next = vec![Rational::zero(); k];
        let qr = Rational::from_integer(q);
        for ((&i, a), pi) in support.iter().zip(&alpha).zip(p_support) {
            next[i] = &qr * a - Rational::from_integer(pi.clone());
            p[i] = pi;
        }
        if next.iter().filter(|x| !x.is_zero()).count() >= support.len() {
            return Err(Error::Invariant("support did not shrink".into()));
        }
        parts.push(p);
        cur = next;
    }
    let largest = parts.iter().flatten().map(|x| x.abs()).max().unwrap_or_else(BigInt::zero);
    let base = largest * BigInt::from(n - 1) + 1;
    let mut entries = vec![BigInt::zero(); k];
    for p in &parts {
        for (e, x) in entries.iter_mut().zip(p) {
            *e = &*e * &base + x;
        }
    }
    let out = ReducedWeights { entries, certified_n: n };
    if out.max_abs() > frank_tardos_bound(k, n) {
        return Err(Error::Invariant("reduced weights exceed the norm bound".into()));
    }
    Ok(out)
}

/// Outcome of an exhaustive sign comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignCheck {
    pub checked: u64,
    pub counterexample: Option<Vec<i64>>,
}

impl SignCheck {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Number of `b ∈ Z^k` with `|b|_1 ≤ r`.
pub fn l1_ball_size(k: usize, r: u64) -> u128 {
    // ways[s] = vectors over the coordinates so far with |b|_1 = s.
    let r = r as usize;
    let mut ways = vec![0u128; r + 1];
    ways[0] = 1;
    for _ in 0..k {
        let mut next = vec![0u128; r + 1];
        for (s, &cnt) in ways.iter().enumerate() {
            if cnt == 0 {
                continue;
            }
            next[s] = next[s].saturating_add(cnt);
            for a in 1..=r - s {
                next[s + a] = next[s + a].saturating_add(cnt.saturating_mul(2));
            }
        }
        ways = next;
    }
    ways.iter().fold(0u128, |a, &b| a.saturating_add(b))
}

fn sign_of(v: &Rational) -> i8 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

/// Visits every `b` with `|b|_1 ≤ r`, each coordinate trying `0, 1, -1, 2, -2, …`.
fn for_each_l1(k: usize, r: i64, visit: &mut dyn FnMut(&[i64]) -> bool) {
    fn rec(b: &mut Vec<i64>, k: usize, left: i64, visit: &mut dyn FnMut(&[i64]) -> bool) -> bool {
        if b.len() == k {
            return visit(b);
        }
        let mut values = vec![0];
        for m in 1..=left {
            values.push(m);
            values.push(-m);
        }
        for x in values {
            b.push(x);
            let go = rec(b, k, left - x.abs(), visit);
            b.pop();
            if !go {
                return false;
            }
        }
        true
    }
    rec(&mut Vec::with_capacity(k), k, r, visit);
}

/// Compares `sign(wᵀb)` and `sign(w̄ᵀb)` on every integer `b` with
/// `|b|_1 ≤ N - 1`, stopping at the first disagreement.
pub fn verify_sign_preservation(w: &[Rational], wbar: &[BigInt], n: u64, budget: u64) -> Result<SignCheck> {
    if w.len() != wbar.len() {
        return Err(Error::Arity { expected: w.len(), got: wbar.len() });
    }
    let r = n.saturating_sub(1);
    let total = l1_ball_size(w.len(), r);
    if total > budget as u128 {
        return Err(Error::Resource(format!("{total} vectors to check, budget is {budget}")));
    }
    let wbar_r: Vec<Rational> = wbar.iter().map(|x| Rational::from_integer(x.clone())).collect();
    let mut checked = 0u64;
    let mut counterexample = None;
    for_each_l1(w.len(), r as i64, &mut |b| {
        checked += 1;
        let dot = |v: &[Rational]| -> Rational { v.iter().zip(b).map(|(x, &y)| x * Rational::from_integer(y.into())).sum() };
        if sign_of(&dot(w)) != sign_of(&dot(&wbar_r)) {
            counterexample = Some(b.to_vec());
            return false;
        }
        true
    });
    Ok(SignCheck { checked, counterexample })
}

/// Exact search for an integer vector of minimum `∞`-norm (at most
/// `max_norm`) agreeing in sign with `w` on every `b` with `|b|_1 ≤ N - 1`.
/// Candidates of equal norm are tried in lexicographic order from `-B`.
pub fn minimal_sign_preserving(w: &[Rational], n: u64, max_norm: u64, budget: u64) -> Result<Option<Vec<BigInt>>> {
    let k = w.len();
    let r = n.saturating_sub(1);
    let total = l1_ball_size(k, r);
    if total > budget as u128 {
        return Err(Error::Resource(format!("{total} vectors to check, budget is {budget}")));
    }
    let mut constraints: Vec<(Vec<i64>, i8)> = Vec::new();
    for_each_l1(k, r as i64, &mut |b| {
        let dot: Rational = w.iter().zip(b).map(|(x, &y)| x * Rational::from_integer(y.into())).sum();
        constraints.push((b.to_vec(), sign_of(&dot)));
        true
    });
    let ok = |v: &[i64]| {
        constraints.iter().all(|(b, s)| {
            let dot: i128 = v.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum();
            dot.signum() as i8 == *s
        })
    };
    for bound in 0..=max_norm as i64 {
        let side = (2 * bound + 1) as u128;
        if side.checked_pow(k as u32).is_none_or(|c| c > budget as u128) {
            return Err(Error::Resource(format!("search at norm {bound} exceeds budget {budget}")));
        }
        let count = side.pow(k as u32);
        for idx in 0..count {
            // Digits of idx in base `side`, most significant first.
            let mut rest = idx;
            let mut v = vec![0i64; k];
            for x in v.iter_mut().rev() {
                *x = (rest % side) as i64 - bound;
                rest /= side;
            }
            if v.iter().any(|x| x.abs() == bound) && ok(&v) {
                return Ok(Some(v.iter().map(|&x| BigInt::from(x)).collect()));
            }
        }
    }
    Ok(None)
}

/// Converts small reduced weights to `i64` if they fit.
pub fn to_i64_weights(entries: &[BigInt]) -> Option<Vec<i64>> {
    entries.iter().map(|x| x.to_i64()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn identity_is_reduced() {
        let id = vec![ints(&[1, 0, 0]), ints(&[0, 1, 0]), ints(&[0, 0, 1])];
        let out = lll_reduce(&id).unwrap();
        assert_eq!(out.basis, id);
        assert_eq!(out.transform, id);
    }

    #[test]
    fn skewed_basis_finds_short_vector() {
        let out = lll_reduce(&[ints(&[1, 0]), ints(&[1_000_003, 1])]).unwrap();
        let n2 = dot_int(&out.basis[0], &out.basis[0]);
        assert!(n2 <= BigInt::from(2));
        assert!(is_lll_reduced(&out.basis).unwrap());
    }

    #[test]
    fn dependent_basis_is_rank_error() {
        assert_eq!(lll_reduce(&[ints(&[1, 2]), ints(&[2, 4])]), Err(Error::Rank(1)));
    }

    #[test]
    fn forced_signs() {
        let r = frank_tardos_reduce(&[rat(1, 1), rat(-2, 1)], 2).unwrap();
        assert!(r.entries[0].is_positive() && r.entries[1].is_negative());
        let r = frank_tardos_reduce(&[rat(1, 3), rat(1, 2)], 2).unwrap();
        assert!(r.entries.iter().all(|x| x.is_positive()));
    }

    #[test]
    fn three_dimensional_example() {
        let w = [rat(1, 3), rat(1, 2), rat(-5, 7)];
        let r = frank_tardos_reduce(&w, 4).unwrap();
        let check = verify_sign_preservation(&w, &r.entries, 4, DEFAULT_SIGN_BUDGET).unwrap();
        assert!(check.holds());
        assert_eq!(check.checked, 63);
        assert_eq!(l1_ball_size(3, 3), 63);
        assert_eq!(l1_ball_size(4, 3), 129);
    }

    #[test]
    fn sign_flip_counterexample() {
        let check = verify_sign_preservation(&[rat(1, 1), rat(1, 1)], &ints(&[1, -1]), 3, 100).unwrap();
        assert_eq!(check.counterexample, Some(vec![0, 1]));
    }

    #[test]
    fn integral_weights_verify() {
        let w = [rat(3, 1), rat(-1, 1)];
        assert!(verify_sign_preservation(&w, &ints(&[3, -1]), 5, 1000).unwrap().holds());
    }

    #[test]
    fn sign_budget_is_enforced() {
        let w = vec![rat(1, 1); 6];
        let e = verify_sign_preservation(&w, &ints(&[1; 6]), 40, 1000);
        assert!(matches!(e, Err(Error::Resource(_))));
    }

    #[test]
    fn exact_search_finds_minimum() {
        let w = [rat(1, 3), rat(1, 2), rat(-5, 7)];
        let best = minimal_sign_preserving(&w, 3, 10, DEFAULT_SIGN_BUDGET).unwrap().unwrap();
        assert!(verify_sign_preservation(&w, &best, 3, 1000).unwrap().holds());
        let norm = best.iter().map(|x| x.abs()).max().unwrap();
        let ft = frank_tardos_reduce(&w, 3).unwrap();
        assert!(norm <= ft.max_abs());
    }
}
