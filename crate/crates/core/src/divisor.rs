//! The Milnor–Orlik divisor ring.
//!
//! A divisor is a finite rational combination of the generators
//! `Λ_n = div(t^n - 1)`, multiplied through the relation
//! `Λ_a · Λ_b = gcd(a, b) · Λ_lcm(a, b)`. `Λ_1` is the unit of the ring.
//! A divisor with integer coefficients is the divisor of
//! `∏ (t^j - 1)^{a_j}`, which [`ProductForm`] stores explicitly.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Element of `Z[C*]` spanned by the `Λ_n`, with rational coefficients.
///
/// Zero coefficients are never stored, so structural equality is ring equality.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Divisor {
    coeffs: BTreeMap<u64, BigRational>,
}

impl Divisor {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The unit `Λ_1`.
    pub fn one() -> Self {
        Self::lambda(1)
    }

    pub fn lambda(period: u64) -> Self {
        Self::term(period, BigRational::one())
    }

    pub fn term(period: u64, coeff: BigRational) -> Self {
        assert!(period >= 1, "period must be positive");
        let mut d = Self::zero();
        d.add_term(period, coeff);
        d
    }

    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u64, BigRational)>,
    {
        let mut d = Self::zero();
        for (p, c) in terms {
            assert!(p >= 1, "period must be positive");
            d.add_term(p, c);
        }
        d
    }

    /// Integer-coefficient shorthand, mostly for tests.
    pub fn from_int_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u64, i64)>,
    {
        Self::from_terms(
            terms
                .into_iter()
                .map(|(p, c)| (p, BigRational::from_integer(c.into()))),
        )
    }

    fn add_term(&mut self, period: u64, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(period).or_insert_with(BigRational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.coeffs.remove(&period);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, period: u64) -> BigRational {
        self.coeffs.get(&period).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigRational)> {
        self.coeffs.iter().map(|(p, c)| (*p, c))
    }

    pub fn periods(&self) -> impl Iterator<Item = u64> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(|c| c.is_integer())
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::from_terms(self.terms().map(|(p, c)| (p, c * k)))
    }
}

/// Product of two divisors: the bilinear extension of
/// `Λ_a Λ_b = gcd(a, b) Λ_lcm(a, b)`.
///
/// Panics if an lcm of periods overflows `u64`.
pub fn lambda_mul(x: &Divisor, y: &Divisor) -> Divisor {
    let mut out = Divisor::zero();
    for (a, ca) in x.terms() {
        for (b, cb) in y.terms() {
            let g = a.gcd(&b);
            let m = (a / g).checked_mul(b).expect("period lcm overflows u64");
            let c = ca * cb * BigRational::from_integer(BigInt::from(g));
            out.add_term(m, c);
        }
    }
    out
}

/// The factor `Λ_u / v - 1` contributed by one variable.
pub fn factor_divisor(u: u64, v: u64) -> Divisor {
    assert!(u >= 1 && v >= 1, "u and v must be positive");
    let mut d = Divisor::term(u, BigRational::new(BigInt::one(), BigInt::from(v)));
    d.add_term(1, -BigRational::one());
    d
}

impl Add for &Divisor {
    type Output = Divisor;
    fn add(self, rhs: &Divisor) -> Divisor {
        let mut out = self.clone();
        for (p, c) in rhs.terms() {
            out.add_term(p, c.clone());
        }
        out
    }
}

impl Sub for &Divisor {
    type Output = Divisor;
    fn sub(self, rhs: &Divisor) -> Divisor {
        self + &(-rhs)
    }
}

impl Neg for &Divisor {
    type Output = Divisor;
    fn neg(self) -> Divisor {
        Divisor::from_terms(self.terms().map(|(p, c)| (p, -c.clone())))
    }
}

impl Mul for &Divisor {
    type Output = Divisor;
    fn mul(self, rhs: &Divisor) -> Divisor {
        lambda_mul(self, rhs)
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        // Highest period first, the way the divisors are usually written.
        for (i, (p, c)) in self.coeffs.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if *p == 1 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "L{p}")?;
            } else if mag.is_integer() {
                write!(f, "{mag}L{p}")?;
            } else {
                write!(f, "({mag})L{p}")?;
            }
        }
        Ok(())
    }
}

/// `Δ(t) = (t - 1)^{e1} · ∏_{j ≥ 2} (t^j - 1)^{a_j}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductForm {
    pub a: BTreeMap<u64, i64>,
    pub e1: i64,
}

/// Evaluation points supported by [`eval_product_form`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Point {
    One,
    MinusOne,
}

impl Point {
    fn as_i8(self) -> i8 {
        match self {
            Point::One => 1,
            Point::MinusOne => -1,
        }
    }
}

impl ProductForm {
    pub fn new<I: IntoIterator<Item = (u64, i64)>>(a: I, e1: i64) -> Self {
        let a = a
            .into_iter()
            .inspect(|(j, _)| assert!(*j >= 2, "product-form periods start at 2"))
            .filter(|(_, e)| *e != 0)
            .collect();
        Self { a, e1 }
    }

    pub fn to_divisor(&self) -> Divisor {
        let mut d = Divisor::from_int_terms(self.a.iter().map(|(j, e)| (*j, *e)));
        d.add_term(1, BigRational::from_integer(self.e1.into()));
        d
    }

    /// Multiplicity of the root `t = 1` (negative means a pole).
    pub fn multiplicity_at_one(&self) -> i64 {
        self.e1 + self.a.values().sum::<i64>()
    }

    /// Multiplicity of the root `t = -1`.
    pub fn multiplicity_at_minus_one(&self) -> i64 {
        self.a.iter().filter(|(j, _)| *j % 2 == 0).map(|(_, e)| e).sum()
    }
}

/// Reads `e1` off the `Λ_1` coefficient and `a_j` off the rest.
pub fn to_product_form(d: &Divisor) -> Result<ProductForm> {
    let mut a = BTreeMap::new();
    let mut e1 = 0i64;
    for (p, c) in d.terms() {
        if !c.is_integer() {
            return Err(Error::NonIntegralDivisor { period: p, coeff: c.to_string() });
        }
        let e = c
            .to_integer()
            .to_i64()
            .ok_or(Error::ExponentOverflow { period: p })?;
        if p == 1 {
            e1 = e;
        } else {
            a.insert(p, e);
        }
    }
    Ok(ProductForm { a, e1 })
}

/// `deg Δ = Σ j·a_j + e1`.
pub fn degree_of(p: &ProductForm) -> BigInt {
    p.a.iter()
        .map(|(j, e)| BigInt::from(*j) * BigInt::from(*e))
        .fold(BigInt::from(p.e1), |acc, x| acc + x)
}

/// Exact `Δ(±1)` by root-multiplicity bookkeeping.
///
/// Each `t^j - 1` splits as `(t - t0) · g_j(t)` whenever `t0` is a root, and
/// only the cofactor values `g_j(t0)` survive once the multiplicity of `t0` is
/// zero: `g_j(1) = j`, and for even `j`, `g_j(-1) = -j`. Factors with `t0` not
/// a root contribute their plain value (`-2` at `t = -1` for odd `j`).
pub fn eval_product_form(p: &ProductForm, t0: Point) -> Result<BigInt> {
    let mult = match t0 {
        Point::One => p.multiplicity_at_one(),
        Point::MinusOne => p.multiplicity_at_minus_one(),
    };
    if mult < 0 {
        return Err(Error::PoleAtPoint { point: t0.as_i8(), order: -mult });
    }
    if mult > 0 {
        return Ok(BigInt::zero());
    }

    let mut num = BigInt::one();
    let mut den = BigInt::one();
    let mut push = |base: BigInt, exp: i64| {
        let e = u32::try_from(exp.unsigned_abs()).expect("exponent too large to evaluate");
        if exp > 0 {
            num *= num_traits::pow(base, e as usize);
        } else if exp < 0 {
            den *= num_traits::pow(base, e as usize);
        }
    };
    match t0 {
        Point::One => {
            for (j, e) in &p.a {
                push(BigInt::from(*j), *e);
            }
        }
        Point::MinusOne => {
            push(BigInt::from(-2), p.e1);
            for (j, e) in &p.a {
                if j % 2 == 1 {
                    push(BigInt::from(-2), *e);
                } else {
                    push(-BigInt::from(*j), *e);
                }
            }
        }
    }
    let (q, r) = num.div_rem(&den);
    if !r.is_zero() {
        return Err(Error::NonIntegralValue { point: t0.as_i8() });
    }
    Ok(q)
}
