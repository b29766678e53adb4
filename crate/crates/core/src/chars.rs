//! Rank-one characters of arrangement complements and the parametrized
//! translated subtori attached to the monomial deletion family.
//!
//! A character assigns a nonzero value `t_j` to the meridian of each
//! hyperplane.  Coordinates are exact rational functions in up to two
//! parameters, so "generic point" statements are decided symbolically: a
//! property established over `ℚ(ζ_N)(u)` holds for all but finitely many
//! specializations of `u`.

use charvar_exact::{Cyclotomic, MPoly, RatFunc};
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arrangement::{family, Arrangement, Family, Triple};
use crate::CoreError;

/// A rank-one character of an arrangement complement: one nonzero coordinate
/// per hyperplane, index-aligned with the host's hyperplane list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Character {
    /// Name of the hosting arrangement.
    pub host: String,
    pub coords: Vec<RatFunc>,
}

impl Character {
    pub fn new(host: impl Into<String>, coords: Vec<RatFunc>) -> Character {
        Character { host: host.into(), coords }
    }

    /// The identity character `𝟙` of an arrangement.
    pub fn identity(a: &Arrangement) -> Character {
        Character::new(a.name.clone(), vec![RatFunc::one(); a.n()])
    }

    /// A character is trivial iff every coordinate is identically 1.
    pub fn is_trivial(&self) -> bool {
        self.coords.iter().all(|c| c.is_one())
    }

    /// Product of all coordinates.
    pub fn product(&self) -> RatFunc {
        self.coords.iter().fold(RatFunc::one(), |acc, c| &acc * c)
    }

    /// Pointwise product of two characters on the same host.
    pub fn pointwise_mul(&self, rhs: &Character) -> Result<Character, CoreError> {
        if self.host != rhs.host {
            return Err(CoreError::HostMismatch {
                expected: self.host.clone(),
                got: rhs.host.clone(),
            });
        }
        if self.coords.len() != rhs.coords.len() {
            return Err(CoreError::CharacterLength {
                expected: self.coords.len(),
                got: rhs.coords.len(),
            });
        }
        let coords = self.coords.iter().zip(&rhs.coords).map(|(a, b)| a * b).collect();
        Ok(Character::new(self.host.clone(), coords))
    }

    pub(crate) fn check_host(&self, a: &Arrangement) -> Result<(), CoreError> {
        if self.host != a.name {
            return Err(CoreError::HostMismatch {
                expected: a.name.clone(),
                got: self.host.clone(),
            });
        }
        if self.coords.len() != a.n() {
            return Err(CoreError::CharacterLength { expected: a.n(), got: self.coords.len() });
        }
        Ok(())
    }
}

/// A character is essential when no coordinate is identically 1, i.e. the
/// point (or family) is not contained in any subtorus `z_j = 1`.
pub fn is_essential(coords: &[RatFunc]) -> bool {
    !coords.iter().any(|c| c.is_one())
}

/// A translated subtorus in the character torus of `host`, parametrized as
/// `τ · (u^{e_1}, …, u^{e_n})`, or `τ · (u^{e_j} v^{f_j})_j` for the
/// two-parameter component.  The translation coordinates are roots of unity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamSubtorus {
    pub host: String,
    pub translation: Vec<Cyclotomic>,
    pub exponents_u: Vec<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exponents_v: Option<Vec<i64>>,
}

impl ParamSubtorus {
    /// Number of parameters of the connected subtorus.
    pub fn dimension(&self) -> usize {
        if self.exponents_v.is_some() {
            2
        } else {
            1
        }
    }

    /// The generic point `τ_j u^{e_j} (v^{f_j})` as a symbolic character.
    pub fn generic_point(&self) -> Result<Character, CoreError> {
        let u = RatFunc::var_u();
        let v = RatFunc::var_v();
        let mut coords = Vec::with_capacity(self.translation.len());
        for (j, tau) in self.translation.iter().enumerate() {
            let mut c = &RatFunc::constant(tau.clone()) * &u.pow(self.exponents_u[j])?;
            if let Some(ev) = &self.exponents_v {
                c = &c * &v.pow(ev[j])?;
            }
            coords.push(c);
        }
        Ok(Character::new(self.host.clone(), coords))
    }

    /// Essential iff no coordinate of the generic point is identically 1.
    pub fn is_essential(&self) -> Result<bool, CoreError> {
        Ok(is_essential(&self.generic_point()?.coords))
    }

    /// The translation as a character of the host.
    pub fn translation_character(&self) -> Character {
        Character::new(
            self.host.clone(),
            self.translation.iter().cloned().map(RatFunc::constant).collect(),
        )
    }
}

fn check_r(r: u32) -> Result<(), CoreError> {
    if r < 2 {
        return Err(CoreError::Parse(format!("the monomial families need r >= 2, got {r}")));
    }
    Ok(())
}

fn check_q(r: u32, q: u32) -> Result<(), CoreError> {
    check_r(r)?;
    if q == 0 || q >= r {
        return Err(CoreError::Parse(format!(
            "the translated component needs 1 <= q <= r-1, got q = {q} for r = {r}"
        )));
    }
    Ok(())
}

/// The two-parameter component `C` of the full monomial arrangement: in the
/// hyperplane order `H1, H2, H3, H12-block, H13-block, H23-block` the point is
/// `(u^r, v^r, w^r, w, …, w, v, …, v, u, …, u)` with `w` eliminated by
/// `uvw = 1`, i.e. `w = (uv)^{-1}`.
pub fn component_c(r: u32) -> Result<ParamSubtorus, CoreError> {
    check_r(r)?;
    let a = family(Family::MonomialFull, Some(r), None)?;
    let rr = r as i64;
    let mut eu = vec![rr, 0, -rr];
    let mut ev = vec![0, rr, -rr];
    for _ in 0..r {
        eu.push(-1);
        ev.push(-1);
    }
    for _ in 0..r {
        eu.push(0);
        ev.push(1);
    }
    for _ in 0..r {
        eu.push(1);
        ev.push(0);
    }
    Ok(ParamSubtorus {
        host: a.name,
        translation: vec![Cyclotomic::one(); 3 * r as usize + 3],
        exponents_u: eu,
        exponents_v: Some(ev),
    })
}

/// The translated one-parameter component `C_q` of the monomial deletion: in
/// the hyperplane order `H1, H2, H12-block, H13-block, H23-block` the point is
/// `(u^r, v^r, ζ^q, …, ζ^q, v, …, v, u, …, u)` with `ζ = ζ_r` and `v`
/// eliminated by `uvζ^q = 1`, i.e. `v = ζ^{-q} u^{-1}`.
pub fn component_cq(r: u32, q: u32) -> Result<ParamSubtorus, CoreError> {
    check_q(r, q)?;
    let a = family(Family::MonomialDeletion, Some(r), None)?;
    let zeta_q = Cyclotomic::root_of_unity(r, q as i64)?;
    let zeta_mq = Cyclotomic::root_of_unity(r, -(q as i64))?;
    let rr = r as i64;
    let mut translation = vec![Cyclotomic::one(), Cyclotomic::one()];
    let mut eu = vec![rr, -rr];
    for _ in 0..r {
        translation.push(zeta_q.clone());
        eu.push(0);
    }
    for _ in 0..r {
        translation.push(zeta_mq.clone());
        eu.push(-1);
    }
    for _ in 0..r {
        translation.push(Cyclotomic::one());
        eu.push(1);
    }
    Ok(ParamSubtorus { host: a.name, translation, exponents_u: eu, exponents_v: None })
}

/// The connected one-parameter subtorus `T` with exponent vector
/// `(r, −r, 0…0, −1…−1, 1…1)` on the monomial deletion.
pub fn torus_t(r: u32) -> Result<ParamSubtorus, CoreError> {
    check_r(r)?;
    let a = family(Family::MonomialDeletion, Some(r), None)?;
    let rr = r as i64;
    let mut eu = vec![rr, -rr];
    eu.extend(std::iter::repeat(0).take(r as usize));
    eu.extend(std::iter::repeat(-1).take(r as usize));
    eu.extend(std::iter::repeat(1).take(r as usize));
    Ok(ParamSubtorus {
        host: a.name,
        translation: vec![Cyclotomic::one(); 3 * r as usize + 2],
        exponents_u: eu,
        exponents_v: None,
    })
}

/// The translation character `τ_q = (1, 1, ζ^q…ζ^q, ζ^{−q}…ζ^{−q}, 1…1)`.
pub fn tau(r: u32, q: u32) -> Result<Character, CoreError> {
    check_q(r, q)?;
    let a = family(Family::MonomialDeletion, Some(r), None)?;
    let zeta_q = RatFunc::constant(Cyclotomic::root_of_unity(r, q as i64)?);
    let zeta_mq = RatFunc::constant(Cyclotomic::root_of_unity(r, -(q as i64))?);
    let mut coords = vec![RatFunc::one(), RatFunc::one()];
    coords.extend(std::iter::repeat(zeta_q).take(r as usize));
    coords.extend(std::iter::repeat(zeta_mq).take(r as usize));
    coords.extend(std::iter::repeat(RatFunc::one()).take(r as usize));
    Ok(Character::new(a.name, coords))
}

/// Least `k ≥ 1` such that `translation^k` lies on the connected subtorus,
/// i.e. the order of the translation in the quotient of the character torus by
/// the subtorus.
///
/// Complete by brute force: with `N` the least common multiple of the
/// translation coordinates' orders, `τ^N = 𝟙` lies on the subtorus at
/// `u₀ = 1`, so `k ≤ N`; and any witness `u₀` satisfies `u₀^{e_j N} = 1`
/// for every nonzero exponent, hence lies in `μ_{gN}` with
/// `g = gcd of the nonzero |e_j|`.
pub fn translation_order(s: &ParamSubtorus) -> Result<u32, CoreError> {
    if s.translation.iter().all(|t| t.is_one()) {
        return Ok(1);
    }
    if s.exponents_v.is_some() {
        return Err(CoreError::Unsupported(
            "translation order is only computed for one-parameter subtori".into(),
        ));
    }
    let mut n_lcm: u64 = 1;
    for t in &s.translation {
        let o = t.char_order().ok_or_else(|| {
            CoreError::Unsupported("translation coordinate is not a root of unity".into())
        })?;
        n_lcm = n_lcm.lcm(&o);
    }
    let g = s
        .exponents_u
        .iter()
        .filter(|e| **e != 0)
        .fold(0u64, |acc, e| acc.gcd(&e.unsigned_abs()));
    let m = if g == 0 { 1 } else { g * n_lcm };
    let candidates: Vec<Cyclotomic> = (0..m)
        .map(|i| Cyclotomic::root_of_unity(m as u32, i as i64))
        .collect::<Result<_, _>>()?;
    for k in 1..=n_lcm {
        'candidate: for u0 in &candidates {
            for (t, &e) in s.translation.iter().zip(&s.exponents_u) {
                if t.pow(k as i64)? != u0.pow(e)? {
                    continue 'candidate;
                }
            }
            return Ok(k as u32);
        }
    }
    unreachable!("tau^N = 1 lies on the subtorus at u0 = 1");
}

/// The `i*` correspondence of a deletion: a character of the deleted
/// arrangement extends to the full arrangement with trivial monodromy about
/// the pivot hyperplane.
pub fn extend_character(t: &Character, triple: &Triple) -> Result<Character, CoreError> {
    t.check_host(&triple.deleted)?;
    let mut coords = t.coords.clone();
    coords.insert(triple.pivot, RatFunc::one());
    Ok(Character::new(triple.full.name.clone(), coords))
}

/// The `j*` correspondence of a restriction: the coordinate of a restricted
/// hyperplane is the product of the coordinates over its trace in the deleted
/// arrangement (the pivot itself contributes the formal factor 1).
pub fn restrict_character(t: &Character, triple: &Triple) -> Result<Character, CoreError> {
    t.check_host(&triple.deleted)?;
    let coords = triple
        .trace
        .iter()
        .map(|trace| trace.iter().fold(RatFunc::one(), |acc, &k| &acc * &t.coords[k]))
        .collect();
    Ok(Character::new(triple.restricted.name.clone(), coords))
}

/// Drop the pivot coordinate of a character whose coordinate product is
/// identically 1, yielding a character of the deconed arrangement.  The
/// product condition makes the two complements' twisted `H¹` agree.
pub fn decone_character(
    t: &Character,
    a: &Arrangement,
    pivot: usize,
) -> Result<(Arrangement, Character), CoreError> {
    t.check_host(a)?;
    if !t.product().is_one() {
        return Err(CoreError::ProductCondition);
    }
    let deconed = a.decone(pivot)?;
    let mut coords = t.coords.clone();
    coords.remove(pivot);
    Ok((deconed.clone(), Character::new(deconed.name, coords)))
}

/// Substitute `v ↦ c·u^{-1}` in an exact rational function.  This realizes the
/// specialization of the two-parameter component at a fixed third coordinate.
pub fn substitute_v(f: &RatFunc, c: &Cyclotomic) -> Result<RatFunc, CoreError> {
    // p(u, c/u) = u^{-B} Σ c_ab c^b u^{a+B-b} with B = deg_v p; the rational
    // function gets the two power shifts folded into numerator and denominator.
    let subst = |p: &MPoly| -> Result<(MPoly, usize), CoreError> {
        let b_max = p.deg_v().unwrap_or(0);
        let mut terms = Vec::new();
        for (a, b, coef) in p.terms() {
            terms.push((a + b_max - b, 0, coef * &c.pow(b as i64)?));
        }
        Ok((MPoly::from_terms(terms), b_max))
    };
    let (pn, bn) = subst(f.num())?;
    let (pd, bd) = subst(f.den())?;
    let num = &pn * &MPoly::monomial(Cyclotomic::one(), bd, 0);
    let den = &pd * &MPoly::monomial(Cyclotomic::one(), bn, 0);
    Ok(RatFunc::new(num, den)?)
}

/// The generic point of `C` specialized at `w = ζ_r^q`, as a character of the
/// full monomial arrangement.  Under `uvw = 1` this is the substitution
/// `v ↦ ζ^{-q} u^{-1}`.
pub fn c_at_w(r: u32, q: u32) -> Result<Character, CoreError> {
    check_q(r, q)?;
    let c = component_c(r)?.generic_point()?;
    let zeta_mq = Cyclotomic::root_of_unity(r, -(q as i64))?;
    let coords = c
        .coords
        .iter()
        .map(|f| substitute_v(f, &zeta_mq))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Character::new(c.host, coords))
}
