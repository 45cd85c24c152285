//! Divisor and product form of the Alexander polynomial, Betti numbers,
//! and the values `Δ(1)`, `Δ(-1)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::divisor::{
    degree_of, eval_product_form, factor_divisor, lambda_mul, to_product_form, Divisor, Point,
    ProductForm,
};
use crate::error::{Error, Result};
use crate::weights::{uv_data, UvData, WeightSystem};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlexanderData {
    #[serde(skip)]
    pub divisor: Divisor,
    pub form: ProductForm,
    /// `b_{n-1}` of the link.
    pub betti: i64,
    pub delta_one: BigInt,
    pub delta_minus_one: BigInt,
}

/// `∏ (Λ_{u_i} / v_i - 1)`; defined for any number of factors, which the
/// oracles use for two-variable Brieskorn sums.
pub fn divisor_from_uv(uv: &UvData) -> Divisor {
    uv.u.iter()
        .zip(&uv.v)
        .fold(Divisor::one(), |acc, (&u, &v)| lambda_mul(&acc, &factor_divisor(u, v)))
}

pub fn alexander_divisor(ws: &WeightSystem) -> Result<Divisor> {
    let d = divisor_from_uv(&uv_data(ws));
    if let Some((period, c)) = d.terms().find(|(_, c)| !c.is_integer()) {
        return Err(Error::NonIntegralDivisor { period, coeff: c.to_string() });
    }
    Ok(d)
}

pub fn alexander_form(ws: &WeightSystem) -> Result<ProductForm> {
    to_product_form(&alexander_divisor(ws)?)
}

/// Number of `(t - 1)` factors of `Δ`, read off the product form.
pub fn betti_from_form(form: &ProductForm) -> i64 {
    form.multiplicity_at_one()
}

pub fn betti_via_form(ws: &WeightSystem) -> Result<i64> {
    Ok(betti_from_form(&alexander_form(ws)?))
}

/// `u_S / (v_S · lcm(u_S))` for every subset `S`, indexed by bitmask.
/// The empty subset gives 1.
pub(crate) fn subset_terms(uv: &UvData) -> Vec<BigRational> {
    let m = uv.len();
    (0..1usize << m)
        .map(|mask| {
            let mut num = BigInt::one();
            let mut den = BigInt::one();
            let mut l = BigInt::one();
            for i in (0..m).filter(|i| mask >> i & 1 == 1) {
                num *= uv.u[i];
                den *= uv.v[i];
                l = l.lcm(&BigInt::from(uv.u[i]));
            }
            BigRational::new(num, den * l)
        })
        .collect()
}

/// The signed subset sum
/// `Σ_S (-1)^{n+1-|S|} u_S / (v_S · lcm(u_S))` over all `2^{n+1}` subsets.
pub fn betti_via_subsets(ws: &WeightSystem) -> Result<i64> {
    let uv = uv_data(ws);
    let m = uv.len();
    let total = subset_terms(&uv)
        .into_iter()
        .enumerate()
        .fold(BigRational::zero(), |acc, (mask, t)| {
            if (m - mask.count_ones() as usize) % 2 == 0 {
                acc + t
            } else {
                acc - t
            }
        });
    if !total.is_integer() {
        return Err(Error::Inconsistent(format!("subset Betti sum {total} is not an integer")));
    }
    i64::try_from(total.to_integer())
        .map_err(|_| Error::Inconsistent("Betti number overflows i64".into()))
}

pub fn delta_values(ws: &WeightSystem) -> Result<(BigInt, BigInt)> {
    let form = alexander_form(ws)?;
    Ok((eval_product_form(&form, Point::One)?, eval_product_form(&form, Point::MinusOne)?))
}

/// Everything above in one pass; also checks the two Betti formulas agree.
pub fn alexander_data(ws: &WeightSystem) -> Result<AlexanderData> {
    let divisor = alexander_divisor(ws)?;
    let form = to_product_form(&divisor)?;
    let betti = betti_from_form(&form);
    let by_subsets = betti_via_subsets(ws)?;
    if betti != by_subsets {
        return Err(Error::Inconsistent(format!(
            "Betti number from product form ({betti}) differs from subset formula ({by_subsets})"
        )));
    }
    let delta_one = eval_product_form(&form, Point::One)?;
    let delta_minus_one = eval_product_form(&form, Point::MinusOne)?;
    Ok(AlexanderData { divisor, form, betti, delta_one, delta_minus_one })
}

/// `deg Δ`, which must equal the Milnor number.
pub fn alexander_degree(ws: &WeightSystem) -> Result<BigInt> {
    Ok(degree_of(&alexander_form(ws)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{make_weight_system, milnor_number};

    fn ws(w: &[u64], d: u64) -> WeightSystem {
        make_weight_system(w, Some(d)).unwrap()
    }

    #[test]
    fn divisor_examples() {
        assert_eq!(
            alexander_divisor(&ws(&[1, 1, 1], 2)).unwrap(),
            Divisor::from_int_terms([(2, 1), (1, -1)])
        );
        assert_eq!(
            alexander_divisor(&ws(&[1, 1, 1, 1, 1], 4)).unwrap(),
            Divisor::from_int_terms([(4, 61), (1, -1)])
        );
        let d = alexander_divisor(&ws(&[1945, 477, 1321, 148, 1871], 5761)).unwrap();
        assert_eq!(d.coeff(1), BigRational::from_integer((-1).into()));
        assert_eq!(d.coeff(5761), BigRational::one());
        assert_eq!(d.len(), 2);
    }

    #[test]
    fn betti_examples() {
        for (w, d, b) in [
            (&[1u64, 1, 1, 4, 6][..], 12, 222),
            (&[1, 1, 6, 14, 21], 42, 480),
            (&[13, 143, 775, 620, 465], 2015, 0),
        ] {
            let ws = ws(w, d);
            assert_eq!(betti_via_form(&ws).unwrap(), b);
            assert_eq!(betti_via_subsets(&ws).unwrap(), b);
        }
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta_values(&ws(&[1, 1, 1], 2)).unwrap().0, 2.into());
        assert_eq!(
            delta_values(&ws(&[1945, 477, 1321, 148, 1871], 5761)).unwrap().0,
            5761.into()
        );
        // z0^3 + z1^2 + ... + z5^2
        let (one, minus_one) = delta_values(&ws(&[2, 3, 3, 3, 3, 3], 6)).unwrap();
        assert_eq!(minus_one, 3.into());
        assert_eq!(one, 1.into());
        assert_eq!(
            alexander_form(&ws(&[2, 3, 3, 3, 3, 3], 6)).unwrap(),
            ProductForm::new([(6, 1), (2, -1), (3, -1)], 1)
        );
    }

    #[test]
    fn degree_is_milnor_number() {
        for (w, d) in [(&[1u64, 1, 1, 4, 6][..], 12), (&[7, 3, 1, 10, 1], 21), (&[1, 1, 1, 1, 1], 4)] {
            let ws = ws(w, d);
            assert_eq!(alexander_degree(&ws).unwrap(), milnor_number(&ws).unwrap());
        }
    }

    #[test]
    fn betti_formulas_agree_small() {
        for a in 1..=10u64 {
            for b in 1..=10 {
                for c in 1..=10 {
                    for d in [a * b * c, a.lcm(&b).lcm(&c), 2 * a.lcm(&b).lcm(&c)] {
                        let Ok(ws) = make_weight_system(&[a, b, c], Some(d)) else { continue };
                        let Ok(form) = alexander_form(&ws) else { continue };
                        assert_eq!(betti_from_form(&form), betti_via_subsets(&ws).unwrap(), "{ws}");
                    }
                }
            }
        }
    }
}
