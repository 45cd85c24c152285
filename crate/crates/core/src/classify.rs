//! Full link records, the topological trichotomy, and twin detection.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Serialize, Serializer};

use crate::alexander::alexander_data;
use crate::decompose::{find_decompositions, preferred_decomposition, render_polynomial, SingularityDecomposition};
use crate::divisor::degree_of;
use crate::error::{Error, Result};
use crate::torsion::{homology, HomologyGroup};
use crate::weights::{milnor_number, WeightSystem};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LinkKind {
    /// Rank 0, nontrivial torsion.
    RationalHomologySphere,
    /// Rank 0, no torsion, link dimension at least 5.
    HomotopySphere,
    /// Rank 0, no torsion, link dimension 3 (not necessarily `S^3`).
    IntegralHomologySphere,
    /// Seven-dimensional link with free `H_3` of rank `k`.
    ConnectedSumS3xS4(u64),
    Mixed,
    /// Positive rank and torsion unknown (no supported decomposition).
    Unresolved,
}

impl fmt::Display for LinkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinkKind::RationalHomologySphere => f.write_str("RationalHomologySphere"),
            LinkKind::HomotopySphere => f.write_str("HomotopySphere"),
            LinkKind::IntegralHomologySphere => f.write_str("IntegralHomologySphere"),
            LinkKind::ConnectedSumS3xS4(k) => write!(f, "ConnectedSumS3xS4({k})"),
            LinkKind::Mixed => f.write_str("Mixed"),
            LinkKind::Unresolved => f.write_str("Unresolved"),
        }
    }
}

impl Serialize for LinkKind {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn ser_big<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(x)
}

fn ser_opt_big<S: Serializer>(x: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(x) => s.collect_str(x),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkRecord {
    pub ws: WeightSystem,
    pub decomposition: Option<SingularityDecomposition>,
    pub polynomial: Option<String>,
    #[serde(serialize_with = "ser_big")]
    pub mu: BigInt,
    /// Middle Betti number, always known.
    pub rank: u64,
    /// Full homology; `None` when no supported decomposition exists.
    pub homology: Option<HomologyGroup>,
    /// `H_{n-1}` rendered as in the tables, e.g. `(Z_13)^14` or `Z^222`.
    pub h3: String,
    /// `|H_{n-1}|` when finite: the torsion product, or `|Δ(1)|` if the
    /// torsion itself is unknown.
    #[serde(serialize_with = "ser_opt_big")]
    pub torsion_order: Option<BigInt>,
    #[serde(serialize_with = "ser_big")]
    pub delta_one: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub delta_minus_one: BigInt,
    pub kind: LinkKind,
    pub ke_flag: Option<bool>,
    pub warnings: Vec<String>,
}

impl LinkRecord {
    pub fn type_label(&self) -> Option<&str> {
        self.decomposition.as_ref().map(|d| d.label())
    }

    pub fn is_supported(&self) -> bool {
        self.decomposition.is_some()
    }

    pub fn homology_text(&self) -> String {
        self.h3.clone()
    }
}

/// `H_{n-1}` as text; unknown torsion is shown as `?`.
fn homology_text(h: Option<&HomologyGroup>, rank: u64, order: Option<&BigInt>) -> String {
    match (h, rank) {
        (Some(h), _) => h.to_string(),
        (None, 0) => format!("|H| = {}", order.map_or("?".into(), |t| t.to_string())),
        (None, 1) => "Z + ?".into(),
        (None, r) => format!("Z^{r} + ?"),
    }
}

fn kind_of(rank: u64, torsion_known_empty: Option<bool>, link_dim: usize) -> LinkKind {
    match (rank, torsion_known_empty) {
        (0, Some(true)) if link_dim >= 5 => LinkKind::HomotopySphere,
        (0, Some(true)) => LinkKind::IntegralHomologySphere,
        (0, _) => LinkKind::RationalHomologySphere,
        (k, Some(true)) if link_dim == 7 => LinkKind::ConnectedSumS3xS4(k),
        (_, Some(_)) => LinkKind::Mixed,
        (_, None) => LinkKind::Unresolved,
    }
}

/// Runs the whole pipeline on one weight system.
///
/// Torsion is reported only when a BP/chain/cycle decomposition exists. For
/// rank-0 links `|H| = |Δ(1)|` regardless, which is enough to decide the
/// kind.
pub fn classify_link(ws: &WeightSystem) -> Result<LinkRecord> {
    let mut warnings = Vec::new();
    let alex = alexander_data(ws)?;
    let mu = milnor_number(ws)?;
    let deg = degree_of(&alex.form);
    if deg != mu {
        return Err(Error::Inconsistent(format!("deg Δ = {deg} but μ = {mu}")));
    }
    let rank = u64::try_from(alex.betti)
        .map_err(|_| Error::Inconsistent(format!("negative Betti number {}", alex.betti)))?;

    let decomposition = preferred_decomposition(ws);
    let homology = match &decomposition {
        Some(_) => Some(homology(ws)?),
        None => {
            warnings.push("no supported decomposition; torsion not computed".to_string());
            None
        }
    };
    let torsion_order = match (&homology, rank) {
        (Some(h), 0) => {
            let order = h.torsion_order();
            if order != alex.delta_one.abs() {
                return Err(Error::Inconsistent(format!("|H| = {order} but |Δ(1)| = {}", alex.delta_one)));
            }
            Some(order)
        }
        (Some(h), _) => Some(h.torsion_order()),
        (None, 0) => Some(alex.delta_one.abs()),
        (None, _) => None,
    };
    let torsion_known_empty = match (&homology, &torsion_order, rank) {
        (Some(h), _, _) => Some(h.is_torsion_free()),
        (None, Some(t), 0) => Some(t.is_one()),
        _ => None,
    };
    let kind = kind_of(rank, torsion_known_empty, ws.link_dimension());
    if let LinkKind::ConnectedSumS3xS4(k) = kind {
        if k % 2 == 1 {
            warnings.push(format!("odd rank {k} for a free H_3"));
        }
    }
    if decomposition.is_some() {
        if let Some((b3, torsion)) = coprime_fast_path(ws) {
            let h = homology.as_ref().expect("supported");
            if b3 != BigInt::from(rank) || torsion != h.torsion {
                return Err(Error::Inconsistent(format!(
                    "coprime closed form gives b3 = {b3}, torsion {torsion:?}; pipeline gives {h}"
                )));
            }
        }
    }
    let polynomial = decomposition.as_ref().map(|d| render_polynomial(d, ws));
    let h3 = homology_text(homology.as_ref(), rank, torsion_order.as_ref());
    Ok(LinkRecord {
        ws: ws.clone(),
        decomposition,
        polynomial,
        mu,
        rank,
        homology,
        h3,
        torsion_order,
        delta_one: alex.delta_one,
        delta_minus_one: alex.delta_minus_one,
        kind,
        ke_flag: None,
        warnings,
    })
}

/// Closed form for five weights all prime to `d`:
/// `b3 = -1 + (S4 - S3 d + S2 d^2 - S1 d^3 + d^4) / S5` with `S_k` the
/// elementary symmetric polynomials of the weights, and torsion `Z_d`.
pub fn coprime_fast_path(ws: &WeightSystem) -> Option<(BigInt, Vec<BigInt>)> {
    let w = ws.weights();
    let d = ws.degree();
    if w.len() != 5 || w.iter().any(|&wi| wi.gcd(&d) != 1) {
        return None;
    }
    // e[k] = S_k
    let mut e = vec![BigInt::one(); 1];
    e.resize(6, BigInt::from(0));
    for &wi in w {
        for k in (1..6).rev() {
            let prev = e[k - 1].clone();
            e[k] += prev * wi;
        }
    }
    let d = BigInt::from(d);
    let num = &e[4] - &e[3] * &d + &e[2] * d.pow(2) - &e[1] * d.pow(3) + d.pow(4);
    let b3 = BigRational::new(num, e[5].clone()) - BigRational::one();
    if !b3.is_integer() || b3.is_negative() {
        return None;
    }
    Some((b3.to_integer(), vec![d]))
}

/// Links sharing degree, Milnor number and `|H_3|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwinGroup {
    pub degree: u64,
    #[serde(serialize_with = "ser_big")]
    pub mu: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub torsion_order: BigInt,
    pub members: Vec<LinkRecord>,
}

/// Groups rank-0 records by `(d, μ, |H|)`. Groups are ordered by key and
/// members keep their input order.
pub fn find_twins(records: &[LinkRecord]) -> Vec<TwinGroup> {
    let mut groups: BTreeMap<(u64, BigInt, BigInt), Vec<LinkRecord>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.rank == 0) {
        let Some(order) = &r.torsion_order else { continue };
        groups
            .entry((r.ws.degree(), r.mu.clone(), order.clone()))
            .or_default()
            .push(r.clone());
    }
    groups
        .into_iter()
        .filter(|(_, m)| m.len() >= 2)
        .map(|((degree, mu, torsion_order), members)| TwinGroup { degree, mu, torsion_order, members })
        .collect()
}

/// All decompositions, for callers that want more than the preferred one.
pub fn all_decompositions(ws: &WeightSystem) -> Vec<SingularityDecomposition> {
    find_decompositions(ws)
}
