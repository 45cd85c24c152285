//! Brute-force reference implementations, kept deliberately naive.
//!
//! * [`bp_root_multiset`] enumerates the monodromy eigenvalues of a
//!   Brieskorn–Pham polynomial directly.
//! * [`expand_polynomial`] multiplies out a product form coefficient by
//!   coefficient.
//! * [`exhaustive_decompose`] tries every block layout and exponent.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::alexander::{alexander_divisor, alexander_form};
use crate::classify::LinkRecord;
use crate::decompose::{find_decompositions, Block, BlockKind, SingularityDecomposition};
use crate::divisor::{Divisor, Point, ProductForm};
use crate::error::{Error, Result};
use crate::weights::WeightSystem;

/// Cap on `∏ (a_i - 1)` for root enumeration.
pub const MAX_BP_ROOTS: u64 = 1_000_000;
/// Cap on the degree of expanded polynomials.
pub const MAX_EXPANSION_DEGREE: u64 = 50_000;

/// Roots `e^{2πiθ}` with multiplicity, `θ ∈ [0, 1)` reduced.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RootMultiset {
    pub roots: BTreeMap<Ratio<u64>, u64>,
}

impl RootMultiset {
    pub fn total(&self) -> u64 {
        self.roots.values().sum()
    }

    /// `Σ_k (N_k / φ(k)) div Φ_k` where `N_k` counts roots of exact order `k`.
    ///
    /// Fails unless every primitive `k`-th root occurs equally often, which a
    /// polynomial with rational coefficients requires.
    pub fn to_divisor(&self) -> Result<Divisor> {
        let mut by_order: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for (theta, &mult) in &self.roots {
            by_order.entry(*theta.denom()).or_default().push(mult);
        }
        let mut div = Divisor::zero();
        for (k, mults) in by_order {
            if mults.len() as u64 != totient(k) || mults.iter().any(|&x| x != mults[0]) {
                return Err(Error::Inconsistent(format!("roots of order {k} are not Galois invariant")));
            }
            let per_root = mults[0] as i64;
            for e in divisors(k) {
                let mu = moebius(k / e);
                if mu != 0 {
                    div = &div + &Divisor::from_int_terms([(e, per_root * mu)]);
                }
            }
        }
        Ok(div)
    }
}

fn totient(n: u64) -> u64 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|k| n % k == 0).collect()
}

fn moebius(mut n: u64) -> i64 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Eigenvalues `∏ ω_i^{k_i}`, `0 < k_i < a_i`, of the monodromy of
/// `z_0^{a_0} + ... + z_{m-1}^{a_{m-1}}`.
pub fn bp_root_multiset(exps: &[u64]) -> Result<RootMultiset> {
    if exps.is_empty() || exps.iter().any(|&a| a < 2) {
        return Err(Error::InvalidDegree(exps.iter().copied().min().unwrap_or(0) as i64));
    }
    let count = exps.iter().try_fold(1u64, |acc, &a| acc.checked_mul(a - 1));
    if count.map_or(true, |c| c > MAX_BP_ROOTS) {
        return Err(Error::ScaleExceeded(format!("{exps:?} has more than {MAX_BP_ROOTS} roots")));
    }
    let l = exps.iter().fold(1u64, |l, a| l.lcm(a));
    let mut numerators: BTreeMap<u64, u64> = BTreeMap::new();
    let mut ks = vec![1u64; exps.len()];
    loop {
        let num = ks.iter().zip(exps).map(|(k, a)| k * (l / a)).sum::<u64>() % l;
        *numerators.entry(num).or_default() += 1;
        // odometer over 0 < k_i < a_i
        let mut i = 0;
        loop {
            if i == ks.len() {
                let roots = numerators.into_iter().map(|(n, c)| (Ratio::new(n, l), c)).collect();
                return Ok(RootMultiset { roots });
            }
            ks[i] += 1;
            if ks[i] < exps[i] {
                break;
            }
            ks[i] = 1;
            i += 1;
        }
    }
}

/// Coefficients, constant term first, of `(t - 1)^{e1} ∏ (t^j - 1)^{a_j}`.
pub fn expand_polynomial(p: &ProductForm) -> Result<Vec<BigInt>> {
    let mut factors: Vec<(u64, i64)> = p.a.iter().map(|(&j, &a)| (j, a)).collect();
    factors.push((1, p.e1));
    let up: u64 = factors.iter().filter(|f| f.1 > 0).map(|&(j, a)| j * a as u64).sum();
    let down: u64 = factors.iter().filter(|f| f.1 < 0).map(|&(j, a)| j * (-a) as u64).sum();
    if up < down {
        return Err(Error::NotAPolynomial);
    }
    if up - down > MAX_EXPANSION_DEGREE {
        return Err(Error::ScaleExceeded(format!("degree {}", up - down)));
    }
    let mut poly = vec![BigInt::one()];
    for &(j, a) in factors.iter().filter(|f| f.1 > 0) {
        for _ in 0..a {
            poly = times_cyclic(&poly, j as usize);
        }
    }
    for &(j, a) in factors.iter().filter(|f| f.1 < 0) {
        for _ in 0..-a {
            poly = divide_cyclic(&poly, j as usize)?;
        }
    }
    Ok(poly)
}

/// `p · (t^j - 1)`.
fn times_cyclic(p: &[BigInt], j: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); p.len() + j];
    for (i, c) in p.iter().enumerate() {
        out[i + j] += c;
        out[i] -= c;
    }
    out
}

/// `p / (t^j - 1)`, which must be exact.
fn divide_cyclic(p: &[BigInt], j: usize) -> Result<Vec<BigInt>> {
    if p.len() <= j {
        return Err(Error::NotAPolynomial);
    }
    let qlen = p.len() - j;
    let mut q: Vec<BigInt> = Vec::with_capacity(qlen);
    for i in 0..qlen {
        let prev = if i >= j { q[i - j].clone() } else { BigInt::zero() };
        q.push(prev - &p[i]);
    }
    for (i, c) in p.iter().enumerate().skip(qlen) {
        let expected = if i >= j { q[i - j].clone() } else { BigInt::zero() };
        if *c != expected {
            return Err(Error::NotAPolynomial);
        }
    }
    Ok(q)
}

pub fn eval_coefficients(coeffs: &[BigInt], at: Point) -> BigInt {
    match at {
        Point::One => coeffs.iter().sum(),
        Point::MinusOne => coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 0 { c.clone() } else { -c })
            .sum(),
    }
}

/// Divisor of a BP polynomial read from its exponents: `∏ (Λ_{a_i} - 1)`.
pub fn bp_divisor(exps: &[u64]) -> Divisor {
    exps.iter().fold(Divisor::one(), |acc, &a| {
        let f = &Divisor::lambda(a) - &Divisor::one();
        crate::divisor::lambda_mul(&acc, &f)
    })
}

/// Every BP/chain/cycle representation found by trying each set partition,
/// each ordering inside a block, and each exponent up to `d`.
pub fn exhaustive_decompose(ws: &WeightSystem) -> Result<Vec<SingularityDecomposition>> {
    let m = ws.num_vars();
    let d = ws.degree();
    if m > 4 || d > 60 {
        return Err(Error::ScaleExceeded(format!("exhaustive search needs m ≤ 4, d ≤ 60; got {ws}")));
    }
    let w = ws.weights();
    let mut out: Vec<SingularityDecomposition> = Vec::new();
    for partition in set_partitions(m) {
        let options: Vec<Vec<Block>> = partition.iter().map(|part| block_options(part, w, d)).collect();
        for blocks in cartesian(&options) {
            let dec = SingularityDecomposition::new(blocks);
            if !out.contains(&dec) {
                out.push(dec);
            }
        }
    }
    out.sort_by_key(|d| format!("{:?}", d.blocks()));
    Ok(out)
}

fn cartesian(options: &[Vec<Block>]) -> Vec<Vec<Block>> {
    options.iter().fold(vec![Vec::new()], |acc, opts| {
        acc.iter()
            .flat_map(|prefix| {
                opts.iter().map(move |b| {
                    let mut v = prefix.clone();
                    v.push(b.clone());
                    v
                })
            })
            .collect()
    })
}

fn exps_for(order: &[usize], w: &[u64], d: u64, cyclic: bool) -> Option<Vec<u64>> {
    let k = order.len();
    let mut exps = Vec::with_capacity(k);
    for pos in 0..k {
        let pred_weight = match (pos, cyclic) {
            (0, false) => 0,
            (0, true) => w[order[k - 1]],
            _ => w[order[pos - 1]],
        };
        let min = if pred_weight == 0 { 2 } else { 1 };
        let a = (min..=d).find(|&a| pred_weight + a * w[order[pos]] == d)?;
        exps.push(a);
    }
    Some(exps)
}

fn block_options(part: &[usize], w: &[u64], d: u64) -> Vec<Block> {
    let mut out = Vec::new();
    if part.len() == 1 {
        if let Some(e) = exps_for(part, w, d, false) {
            out.push(Block::bp(part[0], e[0]));
        }
        return out;
    }
    for order in permutations(part) {
        if let Some(e) = exps_for(&order, w, d, false) {
            out.push(Block::chain(order.clone(), e));
        }
        if order[0] != *part.iter().min().expect("nonempty") {
            continue;
        }
        if let Some(e) = exps_for(&order, w, d, true) {
            let k = e.len();
            let degenerate = k % 2 == 0
                && ((0..k).step_by(2).all(|i| e[i] == 1) || (1..k).step_by(2).all(|i| e[i] == 1));
            if !degenerate {
                out.push(Block::cycle(order, e));
            }
        }
    }
    out
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

fn set_partitions(m: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = vec![Vec::new()];
    for x in 0..m {
        let mut next = Vec::new();
        for p in out {
            for i in 0..p.len() {
                let mut q: Vec<Vec<usize>> = p.clone();
                q[i].push(x);
                next.push(q);
            }
            let mut q = p.clone();
            q.push(vec![x]);
            next.push(q);
        }
        out = next;
    }
    out
}

/// `div` of the expanded polynomial is not recoverable, but its values are;
/// used by `--verify`.
pub fn check_form_by_expansion(form: &ProductForm) -> Result<(BigInt, BigInt, usize)> {
    let coeffs = expand_polynomial(form)?;
    Ok((
        eval_coefficients(&coeffs, Point::One),
        eval_coefficients(&coeffs, Point::MinusOne),
        coeffs.len() - 1,
    ))
}

/// Re-derives what the oracles can reach for a classified link: the
/// expanded Alexander polynomial, the BP eigenvalue count, and the
/// exhaustive decomposition search. Returns a description of each check
/// that ran; any disagreement is an error.
pub fn verify_record(rec: &LinkRecord) -> Result<Vec<String>> {
    let ws = &rec.ws;
    let mut done = Vec::new();
    let form = alexander_form(ws)?;
    match expand_polynomial(&form) {
        Ok(coeffs) => {
            let one = eval_coefficients(&coeffs, Point::One);
            let minus_one = eval_coefficients(&coeffs, Point::MinusOne);
            if BigInt::from(coeffs.len() - 1) != rec.mu || one != rec.delta_one || minus_one != rec.delta_minus_one {
                return Err(Error::Inconsistent(format!(
                    "expansion gives degree {}, Δ(1) = {one}, Δ(-1) = {minus_one}",
                    coeffs.len() - 1
                )));
            }
            done.push(format!("expanded Δ (degree {}) agrees at ±1", coeffs.len() - 1));
        }
        Err(Error::ScaleExceeded(_)) => {}
        Err(e) => return Err(e),
    }
    if let Some(dec) = &rec.decomposition {
        if dec.blocks().iter().all(|b| b.kind == BlockKind::Bp) {
            let exps: Vec<u64> = dec.blocks().iter().map(|b| b.exps[0]).collect();
            match bp_root_multiset(&exps) {
                Ok(roots) => {
                    if roots.to_divisor()? != alexander_divisor(ws)? {
                        return Err(Error::Inconsistent("BP eigenvalue count disagrees with the divisor".into()));
                    }
                    done.push(format!("{} BP eigenvalues reproduce the divisor", roots.total()));
                }
                Err(Error::ScaleExceeded(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    match exhaustive_decompose(ws) {
        Ok(all) => {
            let mut fast = find_decompositions(ws);
            fast.sort_by_key(|d| format!("{:?}", d.blocks()));
            if fast != all {
                return Err(Error::Inconsistent("exhaustive search finds different decompositions".into()));
            }
            done.push(format!("exhaustive search finds the same {} decompositions", all.len()));
        }
        Err(Error::ScaleExceeded(_)) => {}
        Err(e) => return Err(e),
    }
    Ok(done)
}
