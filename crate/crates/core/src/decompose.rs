//! Recognising a weight system as an invertible polynomial.
//!
//! Every invertible polynomial assigns to each variable `z_i` exactly one
//! monomial in which `z_i` carries an exponent: either a pure power `z_i^a`
//! (the head of a chain, or a Brieskorn–Pham term) or `z_j z_i^a` with a
//! predecessor `j`. Each variable is the predecessor of at most one other.
//! The predecessor map therefore splits the variables into paths starting at
//! a pure power (chains, BP when of length one) and cycles, and a
//! decomposition is the same thing as a valid predecessor map.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::weights::WeightSystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BlockKind {
    #[serde(rename = "BP")]
    Bp,
    Chain,
    Cycle,
}

impl BlockKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BlockKind::Bp => "BP",
            BlockKind::Chain => "Chain",
            BlockKind::Cycle => "Cycle",
        }
    }
}

/// One Thom–Sebastiani summand.
///
/// For a chain, `vars[0]` carries the pure power and `vars[j]` appears in
/// `z_{vars[j-1]} z_{vars[j]}^{exps[j]}`. For a cycle the predecessor of
/// `vars[0]` is the last variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Block {
    pub kind: BlockKind,
    pub vars: Vec<usize>,
    pub exps: Vec<u64>,
}

impl Block {
    pub fn bp(var: usize, exp: u64) -> Self {
        Self { kind: BlockKind::Bp, vars: vec![var], exps: vec![exp] }
    }

    pub fn chain(vars: Vec<usize>, exps: Vec<u64>) -> Self {
        Self { kind: BlockKind::Chain, vars, exps }
    }

    pub fn cycle(vars: Vec<usize>, exps: Vec<u64>) -> Self {
        Self { kind: BlockKind::Cycle, vars, exps }
    }

    fn min_var(&self) -> usize {
        *self.vars.iter().min().expect("empty block")
    }

    /// Predecessor of position `j`, if the monomial has one.
    fn pred(&self, j: usize) -> Option<usize> {
        match self.kind {
            BlockKind::Bp => None,
            BlockKind::Chain => j.checked_sub(1).map(|p| self.vars[p]),
            BlockKind::Cycle => Some(self.vars[(j + self.vars.len() - 1) % self.vars.len()]),
        }
    }

    /// Exponent bounds and the even-length cycle rule.
    pub fn is_well_formed(&self) -> bool {
        let k = self.vars.len();
        if k == 0 || self.exps.len() != k {
            return false;
        }
        match self.kind {
            BlockKind::Bp => k == 1 && self.exps[0] >= 2,
            BlockKind::Chain => k >= 2 && self.exps[0] >= 2 && self.exps.iter().all(|&a| a >= 1),
            BlockKind::Cycle => {
                if k < 2 || self.exps.iter().any(|&a| a < 1) {
                    return false;
                }
                if k % 2 == 0 {
                    let even_ones = self.exps.iter().step_by(2).all(|&a| a == 1);
                    let odd_ones = self.exps.iter().skip(1).step_by(2).all(|&a| a == 1);
                    !(even_ones || odd_ones)
                } else {
                    true
                }
            }
        }
    }

    fn canonicalize(&mut self) {
        if self.kind == BlockKind::Chain && self.vars.len() == 1 {
            self.kind = BlockKind::Bp;
        }
        if self.kind == BlockKind::Cycle {
            let start = (0..self.vars.len()).min_by_key(|&i| self.vars[i]).unwrap_or(0);
            self.vars.rotate_left(start);
            self.exps.rotate_left(start);
        }
    }
}

/// A full Thom–Sebastiani representation of an invertible polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SingularityDecomposition {
    blocks: Vec<Block>,
    label: String,
}

impl SingularityDecomposition {
    /// Canonicalises the block list: BP < Chain < Cycle, then by smallest
    /// variable; cycles rotated to start at their smallest variable.
    pub fn new(mut blocks: Vec<Block>) -> Self {
        for b in &mut blocks {
            b.canonicalize();
        }
        blocks.sort_by(|a, b| a.kind.cmp(&b.kind).then(a.min_var().cmp(&b.min_var())));
        let label = label_of(&blocks);
        Self { blocks, label }
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    fn count(&self, kind: BlockKind) -> usize {
        self.blocks.iter().filter(|b| b.kind == kind).count()
    }

    /// Ordering used to pick one representative: fewest non-BP blocks, then
    /// without BP before with BP, then chains before cycles, then fewest BP
    /// variables, then by canonical block layout.
    fn preference_cmp(&self, other: &Self) -> Ordering {
        let key = |d: &Self| {
            let non_bp = d.count(BlockKind::Chain) + d.count(BlockKind::Cycle);
            let bp = d.count(BlockKind::Bp);
            (non_bp, bp > 0, d.count(BlockKind::Cycle), bp)
        };
        key(self).cmp(&key(other)).then_with(|| self.layout_cmp(other))
    }

    fn layout_cmp(&self, other: &Self) -> Ordering {
        let flat = |d: &Self| -> Vec<(BlockKind, Vec<usize>)> {
            d.blocks.iter().map(|b| (b.kind, b.vars.clone())).collect()
        };
        flat(self).cmp(&flat(other))
    }
}

impl fmt::Display for SingularityDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

fn label_of(blocks: &[Block]) -> String {
    let mut parts = Vec::new();
    if blocks.iter().any(|b| b.kind == BlockKind::Bp) {
        parts.push("BP");
    }
    parts.extend(
        blocks
            .iter()
            .filter(|b| b.kind != BlockKind::Bp)
            .map(|b| b.kind.as_str()),
    );
    parts.join(" + ")
}

pub fn type_label(dec: &SingularityDecomposition) -> &str {
    dec.label()
}

/// True iff the blocks partition the variables, are well formed, and every
/// monomial has weighted degree `d`.
pub fn verify_decomposition(dec: &SingularityDecomposition, ws: &WeightSystem) -> bool {
    let w = ws.weights();
    let d = ws.degree();
    let mut seen = vec![false; w.len()];
    for b in dec.blocks() {
        if !b.is_well_formed() {
            return false;
        }
        for (j, (&var, &a)) in b.vars.iter().zip(&b.exps).enumerate() {
            if var >= w.len() || std::mem::replace(&mut seen[var], true) {
                return false;
            }
            let pred_weight = b.pred(j).map_or(Some(0), |p| w.get(p).copied());
            let Some(pw) = pred_weight else { return false };
            let Some(deg) = a.checked_mul(w[var]).and_then(|x| x.checked_add(pw)) else {
                return false;
            };
            if deg != d {
                return false;
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Candidate monomial for one variable; `pred: None` is a pure power.
#[derive(Clone, Copy)]
struct Monomial {
    pred: Option<usize>,
    exp: u64,
}

fn candidates(ws: &WeightSystem) -> Vec<Vec<Monomial>> {
    let w = ws.weights();
    let d = ws.degree();
    (0..w.len())
        .map(|i| {
            let mut out = Vec::new();
            if d % w[i] == 0 && d / w[i] >= 2 {
                out.push(Monomial { pred: None, exp: d / w[i] });
            }
            for (j, &wj) in w.iter().enumerate() {
                if j != i && d > wj && (d - wj) % w[i] == 0 {
                    out.push(Monomial { pred: Some(j), exp: (d - wj) / w[i] });
                }
            }
            out
        })
        .collect()
}

/// Splits a predecessor map into blocks; `None` if a cycle breaks the
/// even-length rule.
fn blocks_from_preds(preds: &[Option<usize>], exps: &[u64]) -> Option<Vec<Block>> {
    let m = preds.len();
    let mut succ = vec![None; m];
    for (i, p) in preds.iter().enumerate() {
        if let Some(p) = *p {
            succ[p] = Some(i);
        }
    }
    let mut placed = vec![false; m];
    let mut blocks = Vec::new();
    for root in (0..m).filter(|&i| preds[i].is_none()) {
        let mut vars = vec![root];
        let mut cur = root;
        while let Some(next) = succ[cur] {
            vars.push(next);
            cur = next;
        }
        for &v in &vars {
            placed[v] = true;
        }
        let e = vars.iter().map(|&v| exps[v]).collect();
        blocks.push(if vars.len() == 1 {
            Block { kind: BlockKind::Bp, vars, exps: e }
        } else {
            Block::chain(vars, e)
        });
    }
    for start in 0..m {
        if placed[start] {
            continue;
        }
        let mut vars = vec![start];
        placed[start] = true;
        let mut cur = start;
        while let Some(next) = succ[cur] {
            if next == start {
                break;
            }
            placed[next] = true;
            vars.push(next);
            cur = next;
        }
        let block = Block::cycle(vars.clone(), vars.iter().map(|&v| exps[v]).collect());
        if !block.is_well_formed() {
            return None;
        }
        blocks.push(block);
    }
    Some(blocks)
}

/// Every representation of `(w, d)` as a Thom–Sebastiani sum of BP, chain,
/// and cycle blocks, in canonical order.
pub fn find_decompositions(ws: &WeightSystem) -> Vec<SingularityDecomposition> {
    let cands = candidates(ws);
    let m = cands.len();
    let mut preds = vec![None; m];
    let mut exps = vec![0u64; m];
    let mut used_as_pred = vec![false; m];
    let mut out = Vec::new();

    fn go(
        i: usize,
        cands: &[Vec<Monomial>],
        preds: &mut [Option<usize>],
        exps: &mut [u64],
        used: &mut [bool],
        out: &mut Vec<SingularityDecomposition>,
    ) {
        if i == cands.len() {
            if let Some(blocks) = blocks_from_preds(preds, exps) {
                out.push(SingularityDecomposition::new(blocks));
            }
            return;
        }
        for c in &cands[i] {
            if let Some(p) = c.pred {
                if used[p] {
                    continue;
                }
                used[p] = true;
            }
            preds[i] = c.pred;
            exps[i] = c.exp;
            go(i + 1, cands, preds, exps, used, out);
            if let Some(p) = c.pred {
                used[p] = false;
            }
        }
    }

    if cands.iter().all(|c| !c.is_empty()) {
        go(0, &cands, &mut preds, &mut exps, &mut used_as_pred, &mut out);
    }
    out.sort_by(|a, b| {
        a.layout_cmp(b)
            .then_with(|| a.blocks.iter().map(|b| &b.exps).cmp(b.blocks.iter().map(|b| &b.exps)))
    });
    out.dedup();
    out
}

/// The representative reported for a weight system (see
/// `SingularityDecomposition::preference_cmp`).
pub fn preferred_decomposition(ws: &WeightSystem) -> Option<SingularityDecomposition> {
    find_decompositions(ws)
        .into_iter()
        .min_by(|a, b| a.preference_cmp(b))
}

/// Renders the polynomial with one monomial per variable, ordered by the
/// variable carrying the exponent: `z0^9+z1^9+z4 z2^2+z2 z3^2+z3 z4^19`.
pub fn render_polynomial(dec: &SingularityDecomposition, _ws: &WeightSystem) -> String {
    let mut monomials: Vec<(usize, String)> = Vec::new();
    for b in dec.blocks() {
        for (j, (&var, &a)) in b.vars.iter().zip(&b.exps).enumerate() {
            let power = if a == 1 { format!("z{var}") } else { format!("z{var}^{a}") };
            let mono = match b.pred(j) {
                Some(p) => format!("z{p} {power}"),
                None => power,
            };
            monomials.push((var, mono));
        }
    }
    monomials.sort_by_key(|(v, _)| *v);
    monomials.into_iter().map(|(_, s)| s).collect::<Vec<_>>().join("+")
}

/// Weight system of `z_0^2 + ... + z_{k-1}^2 + f`.
pub fn thom_sebastiani_extend(ws: &WeightSystem, k: usize) -> Result<WeightSystem> {
    if k == 0 {
        return Ok(ws.clone());
    }
    let d = ws.degree();
    let (new_d, quad_weight, scale) = if d % 2 == 0 { (d, d / 2, 1) } else { (2 * d, d, 2) };
    let weights: Vec<u64> = std::iter::repeat(quad_weight)
        .take(k)
        .chain(ws.weights().iter().map(|w| w * scale))
        .collect();
    WeightSystem::new(&weights, Some(new_d))
}

/// All ordered pairs `(i, j, a_i, a_j)` with `d = w_j + a_i w_i = w_i + a_j w_j`,
/// i.e. every two-cycle block `z_j z_i^{a_i} + z_i z_j^{a_j}` the weights
/// admit (the even-length rule excludes `a_i = a_j = 1`).
pub fn two_cycle_pairs(ws: &WeightSystem) -> Vec<(usize, usize, u64, u64)> {
    let w = ws.weights();
    let d = ws.degree();
    let mut out = Vec::new();
    for i in 0..w.len() {
        for j in 0..w.len() {
            if i == j || d <= w[i] || d <= w[j] {
                continue;
            }
            if (d - w[j]) % w[i] == 0 && (d - w[i]) % w[j] == 0 {
                let ai = (d - w[j]) / w[i];
                let aj = (d - w[i]) / w[j];
                if Block::cycle(vec![i, j], vec![ai, aj]).is_well_formed() {
                    out.push((i, j, ai, aj));
                }
            }
        }
    }
    out
}
