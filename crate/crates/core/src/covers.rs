//! Branched covers `g = z^p + f` and the even-degree splitting of
//! rational homology 7-spheres.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::alexander::alexander_divisor;
use crate::decompose::Block;
use crate::divisor::{eval_product_form, factor_divisor, lambda_mul, to_product_form, Divisor, Point, ProductForm};
use crate::error::{Error, Result};
use crate::weights::WeightSystem;

/// Diffeomorphism information about a cover link.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SphereType {
    /// Positive middle Betti number.
    NotRationalHomologySphere,
    /// Rational homology sphere with nontrivial torsion (`|Δ(1)| > 1`).
    RationalHomologySphere,
    StandardSphere,
    KervaireSphere,
    /// Homotopy sphere in a dimension where the mod-8 test is not applied.
    SphereUndecidable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverRecord {
    pub p: u64,
    pub base: WeightSystem,
    pub cover_ws: WeightSystem,
    /// `|w_g| - d_g`; positive means the cover inherits positive Ricci
    /// curvature from a Sasaki–Einstein base.
    pub fano_index: i128,
    pub form: ProductForm,
    #[serde(serialize_with = "ser_big")]
    pub delta_one: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub delta_minus_one: BigInt,
    pub sphere_type: SphereType,
}

fn ser_big<S: serde::Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// Weight system of `z_0^p + f`: degree `lcm(p, d)` and weights
/// `(d / gcd(p, d), (p / gcd(p, d)) · w)`.
pub fn branch_cover(base: &WeightSystem, p: u64) -> Result<WeightSystem> {
    if p < 2 {
        return Err(Error::InvalidDegree(p as i64));
    }
    let d = base.degree();
    let g = p.gcd(&d);
    let weights: Vec<u64> = std::iter::once(d / g)
        .chain(base.weights().iter().map(|w| p / g * w))
        .collect();
    WeightSystem::new(&weights, Some(d / g * p))
}

/// `|w_g| - d_g` from the base data alone: `(d + p(|w| - d)) / gcd(p, d)`.
pub fn cover_fano_index(base: &WeightSystem, p: u64) -> i128 {
    let d = base.degree() as i128;
    let w = base.weight_sum() as i128;
    let p = p as i128;
    (d + p * (w - d)) / (p as u64).gcd(&(d as u64)) as i128
}

fn require_coprime(base: &WeightSystem, p: u64) -> Result<()> {
    if p.gcd(&base.degree()) != 1 {
        return Err(Error::CoprimalityViolated { p, d: base.degree() });
    }
    Ok(())
}

/// `div Δ_g = (Λ_p - 1) · div Δ_f`, in product form.
pub fn cover_delta_form(base: &WeightSystem, p: u64) -> Result<ProductForm> {
    require_coprime(base, p)?;
    let div = lambda_mul(&factor_divisor(p, 1), &alexander_divisor(base)?);
    to_product_form(&div)
}

fn sphere_type_of(form: &ProductForm, delta_one: &BigInt, delta_minus_one: &BigInt, n: usize) -> Result<SphereType> {
    if form.multiplicity_at_one() > 0 {
        return Ok(SphereType::NotRationalHomologySphere);
    }
    if !delta_one.abs().is_one() {
        return Ok(SphereType::RationalHomologySphere);
    }
    if n % 2 == 0 {
        return Err(Error::DimensionUnsupported(n));
    }
    if n != 5 {
        return Ok(SphereType::SphereUndecidable);
    }
    if delta_minus_one.is_zero() {
        return Err(Error::Inconsistent("homotopy sphere with Δ(-1) = 0".into()));
    }
    match delta_minus_one.mod_floor(&BigInt::from(8)).try_into() {
        Ok(1u8) | Ok(7u8) => Ok(SphereType::StandardSphere),
        Ok(3u8) | Ok(5u8) => Ok(SphereType::KervaireSphere),
        _ => Err(Error::Inconsistent(format!("homotopy sphere with even Δ(-1) = {delta_minus_one}"))),
    }
}

/// Levine's mod-8 test applied to the 9-dimensional cover of a 7-dimensional
/// link. Covers of other odd `n` are reported as undecidable; even `n` is an
/// error.
pub fn cover_sphere_type(base: &WeightSystem, p: u64) -> Result<SphereType> {
    let form = cover_delta_form(base, p)?;
    let one = eval_product_form(&form, Point::One)?;
    let minus_one = eval_product_form(&form, Point::MinusOne)?;
    sphere_type_of(&form, &one, &minus_one, base.num_vars())
}

pub fn cover_record(base: &WeightSystem, p: u64) -> Result<CoverRecord> {
    let cover_ws = branch_cover(base, p)?;
    let form = cover_delta_form(base, p)?;
    let delta_one = eval_product_form(&form, Point::One)?;
    let delta_minus_one = eval_product_form(&form, Point::MinusOne)?;
    let sphere_type = match sphere_type_of(&form, &delta_one, &delta_minus_one, cover_ws.n()) {
        Err(Error::DimensionUnsupported(_)) => SphereType::SphereUndecidable,
        other => other?,
    };
    Ok(CoverRecord {
        p,
        base: base.clone(),
        fano_index: cover_fano_index(base, p),
        cover_ws,
        form,
        delta_one,
        delta_minus_one,
        sphere_type,
    })
}

/// `w = (m2 v, m3 v')` with `m2 m3 = d`, `gcd(m2, m3) = 1`, `m2` odd, `m3`
/// even, three weights divisible by `m2` and two by `m3`.
///
/// Splits are only reported when the `v` on each side are prime to the other
/// factor and the three `m2`-divisible factors combine to `Λ_{m3} - 1`; this
/// is what makes the predicted divisor exact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EvenSplit {
    pub m2: u64,
    pub m3: u64,
    /// Indices of the three weights divisible by `m2`.
    pub odd_part: [usize; 3],
    /// Indices of the two weights divisible by `m3`.
    pub even_part: [usize; 2],
    /// `w_i / m2` or `w_i / m3`, in the original variable order.
    pub v: Vec<u64>,
    /// `n(w) = m2 / (v3 v4) - 1/v3 - 1/v4`.
    pub n_w: u64,
}

impl EvenSplit {
    /// `n(w) Λ_d + Λ_{m3} - n(w) Λ_{m2} - 1`.
    pub fn predicted_divisor(&self) -> Divisor {
        let n = self.n_w as i64;
        Divisor::from_int_terms([(self.m2 * self.m3, n), (self.m3, 1), (self.m2, -n), (1, -1)])
    }

    /// `|H_3| = Δ(1) = m3^{n(w) + 1}`.
    pub fn predicted_torsion_order(&self) -> BigInt {
        num_traits::pow(BigInt::from(self.m3), self.n_w as usize + 1)
    }
}

/// All even-degree splittings, ordered by `m3` then by index partition.
pub fn even_degree_splits(ws: &WeightSystem) -> Vec<EvenSplit> {
    let d = ws.degree();
    let w = ws.weights();
    if d % 2 != 0 || w.len() != 5 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for m3 in (2..=d).step_by(2).filter(|m3| d % m3 == 0) {
        let m2 = d / m3;
        if m2 % 2 == 0 || m2.gcd(&m3) != 1 {
            continue;
        }
        for a in 0..5 {
            for b in a + 1..5 {
                let even_part = [a, b];
                let odd: Vec<usize> = (0..5).filter(|i| *i != a && *i != b).collect();
                let odd_part = [odd[0], odd[1], odd[2]];
                if even_part.iter().any(|&i| w[i] % m3 != 0) || odd_part.iter().any(|&i| w[i] % m2 != 0) {
                    continue;
                }
                let v: Vec<u64> = (0..5)
                    .map(|i| if i == a || i == b { w[i] / m3 } else { w[i] / m2 })
                    .collect();
                if even_part.iter().any(|&i| v[i].gcd(&m2) != 1) || odd_part.iter().any(|&i| v[i].gcd(&m3) != 1) {
                    continue;
                }
                if odd_part_coefficient(m3, [v[odd[0]], v[odd[1]], v[odd[2]]]) != Ratio::from_integer(1) {
                    continue;
                }
                let (v3, v4) = (v[a], v[b]);
                // n(w) = (m2 - v3 - v4) / (v3 v4)
                let Some(num) = m2.checked_sub(v3 + v4) else { continue };
                if num == 0 || num % (v3 * v4) != 0 {
                    continue;
                }
                out.push(EvenSplit { m2, m3, odd_part, even_part, v, n_w: num / (v3 * v4) });
            }
        }
    }
    out
}

/// Coefficient `α` in `∏_{odd part} (Λ_{m3} / v_i - 1) = α Λ_{m3} - 1`.
fn odd_part_coefficient(m3: u64, v: [u64; 3]) -> Ratio<i128> {
    let m3 = Ratio::from_integer(m3 as i128);
    let inv: Vec<Ratio<i128>> = v.iter().map(|&x| Ratio::new(1, x as i128)).collect();
    let pairs = inv[0] * inv[1] + inv[0] * inv[2] + inv[1] * inv[2];
    m3 * m3 * inv[0] * inv[1] * inv[2] - m3 * pairs + inv[0] + inv[1] + inv[2]
}

pub fn even_degree_split(ws: &WeightSystem) -> Option<EvenSplit> {
    even_degree_splits(ws).into_iter().next()
}

/// A two-cycle block `z4 z3^{a3} + z3 z4^{a4}` on the even part of a split.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoCycleWitness {
    pub vars: [usize; 2],
    pub exps: [u64; 2],
}

/// Solves `d = w4 + a3 w3 = w3 + a4 w4` on the two weights divisible by `m3`.
pub fn cycle_block_witness(split: &EvenSplit, ws: &WeightSystem) -> Result<TwoCycleWitness> {
    let d = ws.degree();
    let [i3, i4] = split.even_part;
    let (w3, w4) = (ws.weights()[i3], ws.weights()[i4]);
    if d <= w3 || d <= w4 || (d - w4) % w3 != 0 || (d - w3) % w4 != 0 {
        return Err(Error::WitnessNotFound);
    }
    let (a3, a4) = ((d - w4) / w3, (d - w3) / w4);
    if !Block::cycle(vec![i3, i4], vec![a3, a4]).is_well_formed() {
        return Err(Error::WitnessNotFound);
    }
    Ok(TwoCycleWitness { vars: [i3, i4], exps: [a3, a4] })
}
