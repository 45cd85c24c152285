use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

use linkhom::decompose::Block;
use linkhom::WeightSystem;

pub fn moebius(mut n: u64) -> i64 {
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
        -sign
    } else {
        sign
    }
}

/// Weight system of the invertible polynomial given by `blocks`, found by
/// solving `w_pred + a w = d` exactly. `None` if the solution is degenerate.
pub fn weights_of(blocks: &[Block], m: usize) -> Option<WeightSystem> {
    let one = BigRational::one();
    let mut x = vec![None::<BigRational>; m];
    for b in blocks {
        let a: Vec<BigRational> = b.exps.iter().map(|&e| BigRational::from_integer(e.into())).collect();
        let k = b.vars.len();
        match b.kind {
            linkhom::decompose::BlockKind::Bp => x[b.vars[0]] = Some(&one / &a[0]),
            linkhom::decompose::BlockKind::Chain => {
                let mut prev = BigRational::from_integer(0.into());
                for j in 0..k {
                    let xi = (&one - &prev) / &a[j];
                    x[b.vars[j]] = Some(xi.clone());
                    prev = xi;
                }
            }
            linkhom::decompose::BlockKind::Cycle => {
                // x_last = t; go round: x_j = (1 - x_{j-1}) / a_j is affine in t
                let (mut alpha, mut beta) = (BigRational::from_integer(0.into()), one.clone());
                for aj in &a {
                    alpha = (&one - alpha) / aj;
                    beta = -beta / aj;
                }
                if beta == one {
                    return None;
                }
                let mut prev = &alpha / (&one - &beta);
                for j in 0..k {
                    let xi = (&one - &prev) / &a[j];
                    x[b.vars[j]] = Some(xi.clone());
                    prev = xi;
                }
            }
        }
    }
    let x: Vec<BigRational> = x.into_iter().collect::<Option<_>>()?;
    if x.iter().any(|xi| !xi.is_positive()) {
        return None;
    }
    let d = x.iter().fold(BigInt::one(), |l, xi| l.lcm(xi.denom()));
    let d: u64 = d.try_into().ok()?;
    let w: Vec<u64> = x
        .iter()
        .map(|xi| (xi * BigRational::from_integer(d.into())).to_integer().try_into().ok())
        .collect::<Option<_>>()?;
    WeightSystem::new(&w, Some(d)).ok()
}

/// Decodes `(shape, exps)` into blocks over `m` variables. `shape[i]` picks
/// the block boundary and kind after variable `i`.
pub fn blocks_from_shape(shape: &[u8], exps: &[u64]) -> Vec<Block> {
    let m = exps.len();
    let mut blocks = Vec::new();
    let mut start = 0;
    for i in 0..m {
        let close = i + 1 == m || shape[i] % 3 == 0;
        if !close {
            continue;
        }
        let vars: Vec<usize> = (start..=i).collect();
        let es: Vec<u64> = exps[start..=i].to_vec();
        let block = if vars.len() == 1 {
            Block::bp(vars[0], es[0].max(2))
        } else if shape[i] % 2 == 0 {
            let mut es = es;
            es[0] = es[0].max(2);
            Block::chain(vars, es)
        } else {
            Block::cycle(vars, es)
        };
        blocks.push(block);
        start = i + 1;
    }
    blocks
}
