//! Polynomials over the cyclotomic scalars: dense univariate polynomials in `u`
//! ([`UPoly`]) and bivariate polynomials in `u, v` stored densely in `v` with
//! `UPoly` coefficients ([`MPoly`], an element of ℚ(ζ)[u][v]).
//!
//! The layer exists to back [`crate::RatFunc`] (reduction needs gcd) and the
//! fraction-free rank in [`crate::matrix`] (Bareiss needs exact division). Gcds use
//! the primitive pseudo-remainder sequence in `v` over the Euclidean ring ℚ(ζ)[u].

use crate::cyclotomic::Cyclotomic;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Univariate polynomial in `u`, ascending coefficients, trailing zeros trimmed
/// (the zero polynomial is the empty vector).
#[derive(Clone, PartialEq, Eq)]
pub struct UPoly(Vec<Cyclotomic>);

impl UPoly {
    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn one() -> Self {
        UPoly(vec![Cyclotomic::one()])
    }

    pub fn constant(c: Cyclotomic) -> Self {
        let mut p = UPoly(vec![c]);
        p.trim();
        p
    }

    /// c * u^k
    pub fn monomial(c: Cyclotomic, k: usize) -> Self {
        if c.is_zero() {
            return UPoly::zero();
        }
        let mut v = vec![Cyclotomic::zero(); k + 1];
        v[k] = c;
        UPoly(v)
    }

    pub fn from_coeffs(coeffs: Vec<Cyclotomic>) -> Self {
        let mut p = UPoly(coeffs);
        p.trim();
        p
    }

    pub fn coeffs(&self) -> &[Cyclotomic] {
        &self.0
    }

    fn trim(&mut self) {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_one()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> &Cyclotomic {
        self.0.last().expect("leading coefficient of zero polynomial")
    }

    pub fn scale(&self, c: &Cyclotomic) -> UPoly {
        if c.is_zero() {
            return UPoly::zero();
        }
        UPoly(self.0.iter().map(|x| x * c).collect())
    }

    /// Leading coefficient scaled to 1 (zero stays zero).
    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        let inv = self.lead().checked_inv().expect("nonzero lead");
        self.scale(&inv)
    }

    pub fn div_rem(&self, den: &UPoly) -> (UPoly, UPoly) {
        assert!(!den.is_zero(), "division by zero polynomial");
        let dd = den.degree().unwrap();
        let mut rem = self.clone();
        if rem.degree().map_or(true, |d| d < dd) {
            return (UPoly::zero(), rem);
        }
        let lead_inv = den.lead().checked_inv().expect("nonzero lead");
        let mut quot = vec![Cyclotomic::zero(); rem.0.len() - dd];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let c = rem.lead() * &lead_inv;
            quot[rd - dd] = c.clone();
            for (j, dc) in den.0.iter().enumerate() {
                let t = &c * dc;
                rem.0[rd - dd + j] = &rem.0[rd - dd + j] - &t;
            }
            rem.trim();
        }
        (UPoly::from_coeffs(quot), rem)
    }

    /// Division known to be exact; panics on a nonzero remainder.
    pub fn exact_div(&self, den: &UPoly) -> UPoly {
        let (q, r) = self.div_rem(den);
        assert!(r.is_zero(), "inexact univariate division");
        q
    }

    /// Monic gcd by the Euclidean algorithm over the coefficient field.
    pub fn gcd(a: &UPoly, b: &UPoly) -> UPoly {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        while !r1.is_zero() {
            let (_, rem) = r0.div_rem(&r1);
            r0 = r1;
            r1 = rem;
        }
        r0.monic()
    }

    pub fn eval(&self, x: &Cyclotomic) -> Cyclotomic {
        let mut acc = Cyclotomic::zero();
        for c in self.0.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }
}

impl Add for &UPoly {
    type Output = UPoly;
    fn add(self, rhs: &UPoly) -> UPoly {
        let mut out = self.0.clone();
        if out.len() < rhs.0.len() {
            out.resize(rhs.0.len(), Cyclotomic::zero());
        }
        for (i, c) in rhs.0.iter().enumerate() {
            out[i] = &out[i] + c;
        }
        UPoly::from_coeffs(out)
    }
}

impl Sub for &UPoly {
    type Output = UPoly;
    fn sub(self, rhs: &UPoly) -> UPoly {
        let mut out = self.0.clone();
        if out.len() < rhs.0.len() {
            out.resize(rhs.0.len(), Cyclotomic::zero());
        }
        for (i, c) in rhs.0.iter().enumerate() {
            out[i] = &out[i] - c;
        }
        UPoly::from_coeffs(out)
    }
}

impl Mul for &UPoly {
    type Output = UPoly;
    fn mul(self, rhs: &UPoly) -> UPoly {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Cyclotomic::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, x) in self.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in rhs.0.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] = &out[i + j] + &(x * y);
                }
            }
        }
        UPoly::from_coeffs(out)
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly(self.0.iter().map(|c| -c.clone()).collect())
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(f, "({c})")?;
            } else if i == 1 {
                write!(f, "({c})*u")?;
            } else {
                write!(f, "({c})*u^{i}")?;
            }
        }
        Ok(())
    }
}

/// Bivariate polynomial in `u, v`: coefficient `self.0[i]` (a [`UPoly`] in `u`)
/// multiplies `v^i`; trailing zero coefficients trimmed.
#[derive(Clone, PartialEq, Eq)]
pub struct MPoly(Vec<UPoly>);

impl MPoly {
    pub fn zero() -> Self {
        MPoly(Vec::new())
    }

    pub fn one() -> Self {
        MPoly(vec![UPoly::one()])
    }

    pub fn constant(c: Cyclotomic) -> Self {
        MPoly::from_upoly(UPoly::constant(c))
    }

    pub fn from_upoly(p: UPoly) -> Self {
        if p.is_zero() {
            return MPoly::zero();
        }
        MPoly(vec![p])
    }

    /// c * u^a * v^b
    pub fn monomial(c: Cyclotomic, a: usize, b: usize) -> Self {
        if c.is_zero() {
            return MPoly::zero();
        }
        let mut v = vec![UPoly::zero(); b + 1];
        v[b] = UPoly::monomial(c, a);
        MPoly(v)
    }

    pub fn var_u() -> Self {
        MPoly::monomial(Cyclotomic::one(), 1, 0)
    }

    pub fn var_v() -> Self {
        MPoly::monomial(Cyclotomic::one(), 0, 1)
    }

    fn trim(&mut self) {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
    }

    pub fn from_vcoeffs(coeffs: Vec<UPoly>) -> Self {
        let mut p = MPoly(coeffs);
        p.trim();
        p
    }

    pub fn vcoeffs(&self) -> &[UPoly] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_one()
    }

    /// Degree in `v`; `None` for zero.
    pub fn deg_v(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// Total degree in `u` (max over coefficients); `None` for zero.
    pub fn deg_u(&self) -> Option<usize> {
        self.0
            .iter()
            .filter_map(|c| c.degree())
            .max()
    }

    /// Leading coefficient with respect to `v`.
    pub fn lead_v(&self) -> &UPoly {
        self.0.last().expect("leading coefficient of zero polynomial")
    }

    /// The coefficient of the lexicographically leading monomial (v-major, then u).
    pub fn lead_scalar(&self) -> &Cyclotomic {
        self.lead_v().lead()
    }

    pub fn scale(&self, c: &Cyclotomic) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly(self.0.iter().map(|p| p.scale(c)).collect())
    }

    pub fn mul_upoly(&self, p: &UPoly) -> MPoly {
        if p.is_zero() {
            return MPoly::zero();
        }
        MPoly(self.0.iter().map(|c| c * p).collect())
    }

    /// Multiply by v^k.
    pub fn shift_v(&self, k: usize) -> MPoly {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut out = vec![UPoly::zero(); k];
        out.extend(self.0.iter().cloned());
        MPoly(out)
    }

    /// Content over ℚ(ζ)[u]: the monic gcd of the `v`-coefficients.
    pub fn content(&self) -> UPoly {
        let mut g = UPoly::zero();
        for c in &self.0 {
            g = UPoly::gcd(&g, c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divide out a `u`-polynomial that divides every coefficient exactly.
    pub fn exact_div_upoly(&self, d: &UPoly) -> MPoly {
        MPoly::from_vcoeffs(self.0.iter().map(|c| c.exact_div(d)).collect())
    }

    pub fn primitive_part(&self) -> MPoly {
        if self.is_zero() {
            return MPoly::zero();
        }
        let c = self.content();
        self.exact_div_upoly(&c)
    }

    /// Pseudo-remainder of `self` by `d` with respect to `v` (multiplies through by
    /// powers of `d`'s leading coefficient, never divides).
    pub fn pseudo_rem(&self, d: &MPoly) -> MPoly {
        assert!(!d.is_zero());
        let dd = d.deg_v().unwrap();
        let lead_d = d.lead_v().clone();
        let mut r = self.clone();
        while let Some(rd) = r.deg_v() {
            if rd < dd {
                break;
            }
            let lead_r = r.lead_v().clone();
            r = &r.mul_upoly(&lead_d) - &d.shift_v(rd - dd).mul_upoly(&lead_r);
        }
        r
    }

    /// Exact division (panics if `d` does not divide `self`).
    pub fn exact_div(&self, d: &MPoly) -> MPoly {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return MPoly::zero();
        }
        let dd = d.deg_v().unwrap();
        let mut rem = self.clone();
        let mut quot = vec![UPoly::zero(); self.0.len().saturating_sub(dd)];
        while let Some(rd) = rem.deg_v() {
            if rd < dd {
                break;
            }
            let qc = rem.lead_v().exact_div(d.lead_v());
            quot[rd - dd] = qc.clone();
            rem = &rem - &d.shift_v(rd - dd).mul_upoly(&qc);
            if rem.deg_v() == Some(rd) {
                panic!("inexact bivariate division (leading term did not cancel)");
            }
        }
        assert!(rem.is_zero(), "inexact bivariate division");
        MPoly::from_vcoeffs(quot)
    }

    /// Scale so the lexicographically leading coefficient is 1.
    pub fn normalize_leading(&self) -> MPoly {
        if self.is_zero() {
            return MPoly::zero();
        }
        let inv = self.lead_scalar().checked_inv().expect("nonzero lead");
        self.scale(&inv)
    }

    /// Gcd by the primitive pseudo-remainder sequence in `v`, with contents handled
    /// over ℚ(ζ)[u]. The result is normalized (leading coefficient 1).
    pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
        if a.is_zero() {
            return b.normalize_leading();
        }
        if b.is_zero() {
            return a.normalize_leading();
        }
        let content_gcd = UPoly::gcd(&a.content(), &b.content());
        let mut p = a.primitive_part();
        let mut q = b.primitive_part();
        if p.deg_v() < q.deg_v() {
            std::mem::swap(&mut p, &mut q);
        }
        loop {
            let r = p.pseudo_rem(&q);
            if r.is_zero() {
                return q.mul_upoly(&content_gcd).normalize_leading();
            }
            p = q;
            q = r.primitive_part();
        }
    }

    pub fn eval_cyclo(&self, u0: &Cyclotomic, v0: &Cyclotomic) -> Cyclotomic {
        let mut acc = Cyclotomic::zero();
        for c in self.0.iter().rev() {
            acc = acc * v0.clone() + c.eval(u0);
        }
        acc
    }

    /// Nonzero terms as (u_exponent, v_exponent, coefficient), ordered by ascending
    /// `v` then ascending `u` — the canonical wire order.
    pub fn terms(&self) -> Vec<(usize, usize, &Cyclotomic)> {
        let mut out = Vec::new();
        for (vd, up) in self.0.iter().enumerate() {
            for (ud, c) in up.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    out.push((ud, vd, c));
                }
            }
        }
        out
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, usize, Cyclotomic)>) -> MPoly {
        let mut acc = MPoly::zero();
        for (ud, vd, c) in terms {
            acc = &acc + &MPoly::monomial(c, ud, vd);
        }
        acc
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let mut out = self.0.clone();
        if out.len() < rhs.0.len() {
            out.resize(rhs.0.len(), UPoly::zero());
        }
        for (i, c) in rhs.0.iter().enumerate() {
            out[i] = &out[i] + c;
        }
        MPoly::from_vcoeffs(out)
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        let mut out = self.0.clone();
        if out.len() < rhs.0.len() {
            out.resize(rhs.0.len(), UPoly::zero());
        }
        for (i, c) in rhs.0.iter().enumerate() {
            out[i] = &out[i] - c;
        }
        MPoly::from_vcoeffs(out)
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        if self.is_zero() || rhs.is_zero() {
            return MPoly::zero();
        }
        let mut out = vec![UPoly::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, x) in self.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in rhs.0.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] = &out[i + j] + &(x * y);
                }
            }
        }
        MPoly::from_vcoeffs(out)
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly(self.0.iter().map(|c| -c).collect())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (vd, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if vd == 0 {
                write!(f, "[{c:?}]")?;
            } else if vd == 1 {
                write!(f, "[{c:?}]*v")?;
            } else {
                write!(f, "[{c:?}]*v^{vd}")?;
            }
        }
        Ok(())
    }
}
