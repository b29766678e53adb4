//! Rational functions in two variables `u, v` over the cyclotomic scalars.
//!
//! Every value is kept in a canonical reduced form — numerator and denominator
//! coprime (via [`MPoly::gcd`]), denominator's leading coefficient equal to 1,
//! and zero represented as `0/1` — so structural equality is field equality and
//! serialized output is deterministic.

use crate::cyclotomic::Cyclotomic;
use crate::poly::MPoly;
use crate::ExactError;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: MPoly,
    den: MPoly,
}

impl RatFunc {
    /// Build `num/den` in canonical form. Errors if `den` is zero.
    pub fn new(num: MPoly, den: MPoly) -> Result<RatFunc, ExactError> {
        if den.is_zero() {
            return Err(ExactError::ZeroDenominator);
        }
        Ok(RatFunc::reduced(num, den))
    }

    fn reduced(num: MPoly, den: MPoly) -> RatFunc {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return RatFunc {
                num: MPoly::zero(),
                den: MPoly::one(),
            };
        }
        let g = MPoly::gcd(&num, &den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g), den.exact_div(&g))
        };
        let lead = den.lead_scalar().clone();
        if !lead.is_one() {
            let inv = lead.checked_inv().expect("nonzero lead");
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatFunc { num, den }
    }

    pub fn from_mpoly(p: MPoly) -> RatFunc {
        RatFunc {
            num: p,
            den: MPoly::one(),
        }
    }

    pub fn zero() -> RatFunc {
        RatFunc::from_mpoly(MPoly::zero())
    }

    pub fn one() -> RatFunc {
        RatFunc::from_mpoly(MPoly::one())
    }

    pub fn constant(c: Cyclotomic) -> RatFunc {
        RatFunc::from_mpoly(MPoly::constant(c))
    }

    pub fn from_i64(n: i64) -> RatFunc {
        RatFunc::constant(Cyclotomic::from_i64(n))
    }

    pub fn var_u() -> RatFunc {
        RatFunc::from_mpoly(MPoly::var_u())
    }

    pub fn var_v() -> RatFunc {
        RatFunc::from_mpoly(MPoly::var_v())
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the value is a polynomial (denominator 1) that is constant in
    /// both variables; returns the constant.
    pub fn as_constant(&self) -> Option<&Cyclotomic> {
        if !self.den.is_one() {
            return None;
        }
        if self.num.is_zero() {
            return None;
        }
        if self.num.deg_v() == Some(0) && self.num.deg_u() == Some(0) {
            Some(self.num.lead_scalar())
        } else {
            None
        }
    }

    pub fn checked_inv(&self) -> Result<RatFunc, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(RatFunc::reduced(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, e: i64) -> Result<RatFunc, ExactError> {
        if e == 0 {
            return Ok(RatFunc::one());
        }
        let base = if e < 0 { self.checked_inv()? } else { self.clone() };
        let mut acc = RatFunc::one();
        let mut sq = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &sq;
            }
            k >>= 1;
            if k > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Evaluate at a point. Errors if the (reduced) denominator vanishes there.
    pub fn eval(&self, u0: &Cyclotomic, v0: &Cyclotomic) -> Result<Cyclotomic, ExactError> {
        let d = self.den.eval_cyclo(u0, v0);
        if d.is_zero() {
            return Err(ExactError::PoleAtPoint);
        }
        let n = self.num.eval_cyclo(u0, v0);
        n.checked_div(&d)
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFunc::reduced(num, &self.den * &rhs.den)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        let num = &(&self.num * &rhs.den) - &(&rhs.num * &self.den);
        RatFunc::reduced(num, &self.den * &rhs.den)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::reduced(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &RatFunc) -> RatFunc {
        assert!(!rhs.is_zero(), "division by zero rational function");
        RatFunc::reduced(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Add for RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: RatFunc) -> RatFunc {
        &self + &rhs
    }
}

impl Sub for RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: RatFunc) -> RatFunc {
        &self - &rhs
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: RatFunc) -> RatFunc {
        &self * &rhs
    }
}

impl Div for RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: RatFunc) -> RatFunc {
        &self / &rhs
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{:?}", self.num)
        } else {
            write!(f, "({:?}) / ({:?})", self.num, self.den)
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Serialize, Deserialize)]
struct TermWire {
    u: u32,
    v: u32,
    c: Cyclotomic,
}

#[derive(Serialize, Deserialize)]
struct RatFuncWire {
    num: Vec<TermWire>,
    den: Vec<TermWire>,
}

fn poly_to_wire(p: &MPoly) -> Vec<TermWire> {
    p.terms()
        .into_iter()
        .map(|(u, v, c)| TermWire {
            u: u as u32,
            v: v as u32,
            c: c.clone(),
        })
        .collect()
}

fn poly_from_wire(terms: Vec<TermWire>) -> MPoly {
    MPoly::from_terms(
        terms
            .into_iter()
            .map(|t| (t.u as usize, t.v as usize, t.c)),
    )
}

impl Serialize for RatFunc {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        RatFuncWire {
            num: poly_to_wire(&self.num),
            den: poly_to_wire(&self.den),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RatFunc {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = RatFuncWire::deserialize(deserializer)?;
        let num = poly_from_wire(wire.num);
        let den = poly_from_wire(wire.den);
        RatFunc::new(num, den).map_err(D::Error::custom)
    }
}
