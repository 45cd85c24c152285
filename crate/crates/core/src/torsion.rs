//! Orlik's algorithm for the torsion of `H_{n-1}` of the link.
//!
//! Subsets of `{0, ..., n}` are bitmasks throughout. The `c`-values are
//! defined inductively over proper subsets, so they are computed in order of
//! increasing cardinality. The `k`-values are exact rationals; their floors
//! decide how many torsion factors exist.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::alexander::{alexander_form, betti_from_form, subset_terms};
use crate::error::{Error, Result};
use crate::weights::{uv_data, UvData, WeightSystem};

fn mask_to_subset(mask: usize, m: usize) -> Vec<usize> {
    (0..m).filter(|i| mask >> i & 1 == 1).collect()
}

/// Iterates the proper submasks of `mask` (including 0, excluding `mask`).
fn proper_submasks(mask: usize) -> impl Iterator<Item = usize> {
    let mut sub = mask;
    let mut done = mask == 0;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        sub = (sub.wrapping_sub(1)) & mask;
        if sub == 0 {
            done = true;
        }
        Some(sub)
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrlikData {
    m: usize,
    /// `c[mask]`; the full subset stores `gcd(∅) = 0`.
    pub c: Vec<BigInt>,
    pub k: Vec<BigRational>,
    pub r: usize,
    /// `d_1, ..., d_r`, including trivial entries.
    pub d: Vec<BigInt>,
}

impl OrlikData {
    pub fn c_of(&self, subset: &[usize]) -> &BigInt {
        &self.c[subset.iter().fold(0, |m, &i| m | 1 << i)]
    }

    pub fn k_of(&self, subset: &[usize]) -> &BigRational {
        &self.k[subset.iter().fold(0, |m, &i| m | 1 << i)]
    }

    pub fn subsets(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.c.len()).map(|mask| mask_to_subset(mask, self.m))
    }
}

pub fn orlik_c(uv: &UvData) -> Result<Vec<BigInt>> {
    let m = uv.len();
    let full = (1usize << m) - 1;
    let mut masks: Vec<usize> = (0..=full).collect();
    masks.sort_by_key(|s| s.count_ones());

    let mut c = vec![BigInt::zero(); 1 << m];
    for mask in masks {
        let g = (0..m)
            .filter(|i| mask >> i & 1 == 0)
            .fold(0u64, |g, i| g.gcd(&uv.u[i]));
        let denom: BigInt = proper_submasks(mask).map(|t| &c[t]).product();
        let g = BigInt::from(g);
        if mask == full {
            c[mask] = g;
            continue;
        }
        let (q, r) = g.div_rem(&denom);
        if !r.is_zero() || q.is_zero() {
            return Err(Error::NonIntegralOrlikC { subset: mask_to_subset(mask, m) });
        }
        c[mask] = q;
    }
    Ok(c)
}

pub fn orlik_k(uv: &UvData) -> Vec<BigRational> {
    let m = uv.len();
    let n = m - 1;
    let terms = subset_terms(uv);
    (0..1usize << m)
        .map(|mask| {
            let s = mask.count_ones() as usize;
            // ε_{n-s+1}
            if (n + 1 - s) % 2 == 0 {
                return BigRational::zero();
            }
            let mut acc = terms[mask].clone();
            for t in proper_submasks(mask) {
                if (s - t.count_ones() as usize) % 2 == 0 {
                    acc += &terms[t];
                } else {
                    acc -= &terms[t];
                }
            }
            acc
        })
        .collect()
}

pub fn orlik_torsion(uv: &UvData) -> Result<OrlikData> {
    let c = orlik_c(uv)?;
    let k = orlik_k(uv);
    let max_k = k.iter().max().cloned().unwrap_or_else(BigRational::zero);
    let r = if max_k.is_positive() {
        max_k.floor().to_integer().to_usize().expect("torsion count fits in usize")
    } else {
        0
    };
    let d = (1..=r)
        .map(|j| {
            let j = BigRational::from_integer(j.into());
            k.iter()
                .zip(&c)
                .filter(|(kv, _)| **kv >= j)
                .map(|(_, cv)| cv.clone())
                .product::<BigInt>()
        })
        .collect();
    Ok(OrlikData { m: uv.len(), c, k, r, d })
}

/// `Z^rank ⊕ Z/t_1 ⊕ ... ⊕ Z/t_s` with each `t_{i+1} | t_i` and `t_i ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub rank: u64,
    #[serde(serialize_with = "ser_bigints")]
    pub torsion: Vec<BigInt>,
}

pub(crate) fn ser_bigints<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

impl HomologyGroup {
    /// Drops trivial factors and orders the rest largest first.
    pub fn new(rank: u64, torsion: impl IntoIterator<Item = BigInt>) -> Self {
        let mut torsion: Vec<BigInt> = torsion.into_iter().filter(|t| !t.is_one()).collect();
        torsion.sort_by(|a, b| b.cmp(a));
        Self { rank, torsion }
    }

    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn divisibility_chain_holds(&self) -> bool {
        self.torsion.windows(2).all(|w| (&w[0] % &w[1]).is_zero())
    }

    /// Torsion as `(q, multiplicity)` runs, e.g. `[(13, 14)]`.
    pub fn torsion_runs(&self) -> Vec<(BigInt, usize)> {
        let mut runs: Vec<(BigInt, usize)> = Vec::new();
        for t in &self.torsion {
            match runs.last_mut() {
                Some((q, k)) if q == t => *k += 1,
                _ => runs.push((t.clone(), 1)),
            }
        }
        runs
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for (q, k) in self.torsion_runs() {
            parts.push(if k == 1 { format!("Z_{q}") } else { format!("(Z_{q})^{k}") });
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Rank from the Alexander polynomial, torsion from Orlik's algorithm.
///
/// This does not check that the weights come from a singularity class where
/// Orlik's algorithm is known to be valid; [`crate::classify`] does.
pub fn homology(ws: &WeightSystem) -> Result<HomologyGroup> {
    let betti = betti_from_form(&alexander_form(ws)?);
    let rank = u64::try_from(betti)
        .map_err(|_| Error::Inconsistent(format!("negative Betti number {betti}")))?;
    let orlik = orlik_torsion(&uv_data(ws))?;
    let group = HomologyGroup::new(rank, orlik.d);
    if !group.divisibility_chain_holds() {
        return Err(Error::Inconsistent(format!("torsion {group} is not a divisibility chain")));
    }
    Ok(group)
}
