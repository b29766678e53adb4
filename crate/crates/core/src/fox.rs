//! Fundamental groups of complexified real line arrangements via Fox calculus.
//!
//! A planar arrangement with rational coefficients is swept left to right to
//! produce a [`WiringDiagram`]; the diagram yields a finite [`Presentation`]
//! of the fundamental group of the complexified complement (one generator per
//! line, and for each vertex the cyclic-commutation relators of the lines
//! through it); and Fox derivatives of the relators, evaluated at a rank-one
//! character, give a matrix whose corank is the first twisted Betti number.
//!
//! This is the independent oracle for characteristic-variety membership: it
//! never looks at the Orlik–Solomon algebra, only at the group presentation.

use crate::arrangement::Arrangement;
use crate::chars::{decone_character, Character};
use crate::CoreError;
use charvar_exact::{ExactMatrix, Rat, RatFunc};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// How twisted Betti numbers relate to local-system cohomology here. Every
/// report that quotes an `h1` carries this sentence.
pub const DUALITY_CONVENTION: &str = "h1 is the corank of the Fox matrix of a presentation of the deconed \
     complement, i.e. the first twisted Betti number at t; it equals \
     dim H^1 of the rank-one local system attached to the inverse character, \
     and every family certified here is closed under inversion";

/// Rational numbers travel as `"p/q"` strings in JSON, matching the exact
/// layer's own wire format.
mod rat_serde {
    use charvar_exact::{parse_rational, rational_to_string, Rat};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rational_to_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

mod rat_pair_serde {
    use charvar_exact::{parse_rational, rational_to_string, Rat};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(p: &(Rat, Rat), s: S) -> Result<S::Ok, S::Error> {
        let pair = [rational_to_string(&p.0), rational_to_string(&p.1)];
        serde::Serialize::serialize(&pair, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(Rat, Rat), D::Error> {
        let [x, y] = <[String; 2]>::deserialize(d)?;
        Ok((
            parse_rational(&x).map_err(serde::de::Error::custom)?,
            parse_rational(&y).map_err(serde::de::Error::custom)?,
        ))
    }
}

/// A real affine line `a·x + b·y = c` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Line {
    pub label: String,
    #[serde(with = "rat_serde")]
    pub a: Rat,
    #[serde(with = "rat_serde")]
    pub b: Rat,
    #[serde(with = "rat_serde")]
    pub c: Rat,
}

impl Line {
    /// Slope, or `None` for a vertical line.
    fn slope(&self) -> Option<Rat> {
        if self.b.is_zero() {
            None
        } else {
            Some(-(&self.a / &self.b))
        }
    }

    /// Height of the line over abscissa `x`; the line must not be vertical.
    fn y_at(&self, x: &Rat) -> Rat {
        (&self.c - &(&self.a * x)) / &self.b
    }

    fn contains(&self, x: &Rat, y: &Rat) -> bool {
        &(&self.a * x) + &(&self.b * y) == self.c
    }
}

/// One vertex of the sweep: its position and the lines through it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepEvent {
    /// Sweep coordinate of the vertex, in sheared coordinates.
    #[serde(with = "rat_serde")]
    pub x: Rat,
    /// The vertex in the original coordinates.
    #[serde(with = "rat_pair_serde")]
    pub point: (Rat, Rat),
    /// Lines through the vertex, top to bottom immediately left of it
    /// (equivalently: by slope, ascending).
    pub lines: Vec<usize>,
}

/// Combinatorial record of a generic left-to-right sweep of a rational line
/// arrangement. The shear `x = x' + s·y` is chosen automatically so that no
/// line is vertical and no two vertices share a sweep coordinate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WiringDiagram {
    pub host: String,
    /// The shear parameter `s`.
    #[serde(with = "rat_serde")]
    pub shear: Rat,
    /// Lines in sheared coordinates, in arrangement order.
    pub lines: Vec<Line>,
    /// Top-to-bottom order of the lines left of the first vertex.
    pub initial_order: Vec<usize>,
    /// Vertices in sweep order.
    pub events: Vec<SweepEvent>,
}

impl WiringDiagram {
    /// Number of lines.
    pub fn n(&self) -> usize {
        self.lines.len()
    }

    /// Multiplicities of the vertices in sweep order.
    pub fn multiplicities(&self) -> Vec<usize> {
        self.events.iter().map(|e| e.lines.len()).collect()
    }
}

/// Extract the lines of a planar arrangement as rational data.
fn rational_lines(a: &Arrangement) -> Result<Vec<Line>, CoreError> {
    if a.ambient_dim != 2 {
        return Err(CoreError::Unsupported(format!(
            "wiring diagrams need a planar arrangement, got ambient dimension {}",
            a.ambient_dim
        )));
    }
    let mut lines = Vec::with_capacity(a.n());
    for h in &a.hyperplanes {
        let coeff = |c: &charvar_exact::Cyclotomic| {
            c.as_rational().ok_or_else(|| {
                CoreError::Unsupported(format!(
                    "line {} has an irrational coefficient; sweeps are implemented \
                     for rational coefficients only",
                    h.label
                ))
            })
        };
        lines.push(Line {
            label: h.label.clone(),
            a: coeff(&h.normal[0])?,
            b: coeff(&h.normal[1])?,
            c: coeff(&h.constant)?,
        });
    }
    Ok(lines)
}

/// The vertices of the arrangement, via its intersection poset: one entry per
/// rank-2 flat, as `(x, y, member lines)` in original coordinates.
fn vertices(a: &Arrangement, lines: &[Line]) -> Vec<(Rat, Rat, Vec<usize>)> {
    let mut verts = Vec::new();
    for flat in a.poset().rank2_flats() {
        let members = flat.hyperplane_indices.clone();
        let (i, j) = (members[0], members[1]);
        let (li, lj) = (&lines[i], &lines[j]);
        let det = &(&li.a * &lj.b) - &(&lj.a * &li.b);
        assert!(
            !det.is_zero(),
            "lines {i} and {j} share a vertex but are parallel"
        );
        let x = &(&(&li.c * &lj.b) - &(&lj.c * &li.b)) / &det;
        let y = &(&(&li.a * &lj.c) - &(&lj.a * &li.c)) / &det;
        for &m in &members {
            assert!(
                lines[m].contains(&x, &y),
                "line {m} misses the vertex of its flat"
            );
        }
        verts.push((x, y, members));
    }
    verts
}

/// Whether the shear `x = x' + s·y` makes the sweep generic: no sheared line
/// vertical, no two vertices with equal sweep coordinate.
fn shear_is_generic(s: &Rat, lines: &[Line], verts: &[(Rat, Rat, Vec<usize>)]) -> bool {
    if lines.iter().any(|l| (&l.b + &(s * &l.a)).is_zero()) {
        return false;
    }
    let mut xs: Vec<Rat> = verts.iter().map(|(x, y, _)| x - &(s * y)).collect();
    xs.sort();
    xs.windows(2).all(|w| w[0] != w[1])
}

fn build_diagram(
    a: &Arrangement,
    lines: Vec<Line>,
    verts: Vec<(Rat, Rat, Vec<usize>)>,
    s: Rat,
) -> WiringDiagram {
    let sheared: Vec<Line> = lines
        .iter()
        .map(|l| Line {
            label: l.label.clone(),
            a: l.a.clone(),
            b: &l.b + &(&s * &l.a),
            c: l.c.clone(),
        })
        .collect();
    let mut events: Vec<SweepEvent> = verts
        .into_iter()
        .map(|(x, y, mut members)| {
            let sweep_x = &x - &(&s * &y);
            members.sort_by(|&p, &q| {
                let (mp, mq) = (sheared[p].slope(), sheared[q].slope());
                mp.expect("sheared line is not vertical")
                    .cmp(&mq.expect("sheared line is not vertical"))
            });
            SweepEvent {
                x: sweep_x,
                point: (x, y),
                lines: members,
            }
        })
        .collect();
    events.sort_by(|p, q| p.x.cmp(&q.x));

    let x0 = match events.first() {
        Some(e) => &e.x - &Rat::one(),
        None => Rat::zero(),
    };
    let mut initial_order: Vec<usize> = (0..sheared.len()).collect();
    initial_order.sort_by(|&p, &q| sheared[q].y_at(&x0).cmp(&sheared[p].y_at(&x0)));
    for w in initial_order.windows(2) {
        assert!(
            sheared[w[0]].y_at(&x0) != sheared[w[1]].y_at(&x0),
            "two lines coincide left of every vertex"
        );
    }

    WiringDiagram {
        host: a.name.clone(),
        shear: s,
        lines: sheared,
        initial_order,
        events,
    }
}

/// Sweep a planar rational arrangement into a wiring diagram.
///
/// The shear is the first generic value in the deterministic sequence
/// `0, 1, 1/2, 1/3, …`, so identical inputs always produce the same diagram.
/// Irrational coefficients and non-planar inputs are unsupported.
pub fn wiring_diagram(a: &Arrangement) -> Result<WiringDiagram, CoreError> {
    let lines = rational_lines(a)?;
    let verts = vertices(a, &lines);
    // Each line rules out at most one shear (the one making it vertical) and
    // each pair of vertices at most one, so this candidate list always
    // contains a generic value.
    let bad_bound = lines.len() + verts.len() * verts.len() + 2;
    let candidates = std::iter::once(Rat::zero())
        .chain((1..=bad_bound as i64).map(|k| Rat::new(BigInt::from(1), BigInt::from(k))));
    for s in candidates {
        if shear_is_generic(&s, &lines, &verts) {
            return Ok(build_diagram(a, lines, verts, s));
        }
    }
    unreachable!("the shear candidate list exceeds the number of degenerate shears");
}

/// Sweep with a caller-chosen shear; errors if that shear is degenerate.
pub fn wiring_diagram_with_shear(
    a: &Arrangement,
    s: Rat,
) -> Result<WiringDiagram, CoreError> {
    let lines = rational_lines(a)?;
    let verts = vertices(a, &lines);
    if !shear_is_generic(&s, &lines, &verts) {
        return Err(CoreError::Unsupported(format!(
            "shear {s} is degenerate for this arrangement"
        )));
    }
    Ok(build_diagram(a, lines, verts, s))
}

/// A finite presentation of the fundamental group of the complexified
/// complement: one generator per line, relators as freely reduced words.
///
/// The JSON form is `{"generators": [names], "relators": [[±index…]…]}` with
/// 1-based signed indices, and user-supplied presentations in the same shape
/// are accepted by the Fox routines below.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<Vec<i32>>,
    /// Which sweep event produced each relator (bookkeeping only; not part of
    /// the JSON exchange format).
    #[serde(skip)]
    pub relator_events: Vec<usize>,
}

impl Presentation {
    /// Euler characteristic `1 − generators + relators` of the presentation
    /// 2-complex.
    pub fn euler_characteristic(&self) -> i64 {
        1 - self.generators.len() as i64 + self.relators.len() as i64
    }
}

/// Freely reduce a word (cancel adjacent `x·x⁻¹` pairs).
pub(crate) fn reduce(word: Vec<i32>) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::with_capacity(word.len());
    for letter in word {
        debug_assert!(letter != 0, "0 is not a letter");
        if out.last().is_some_and(|&prev| prev == -letter) {
            out.pop();
        } else {
            out.push(letter);
        }
    }
    out
}

/// Inverse of a word.
pub(crate) fn invert(word: &[i32]) -> Vec<i32> {
    word.iter().rev().map(|&x| -x).collect()
}

/// Read a presentation off a wiring diagram.
///
/// Sweeping left to right, each vertex with lines carrying current meridian
/// words `W₁ … W_k` (top to bottom) contributes the `k−1` relators equating
/// the cyclic rotations of `W₁⋯W_k`; past the vertex the lines reverse their
/// vertical order and the `j`-th word is conjugated by `W₁⋯W_{j−1}`.
pub fn presentation(wd: &WiringDiagram) -> Presentation {
    let n = wd.n();
    let mut order = wd.initial_order.clone();
    let mut words: Vec<Vec<i32>> = (0..n).map(|i| vec![(i + 1) as i32]).collect();
    let mut relators = Vec::new();
    let mut relator_events = Vec::new();

    for (ev_idx, ev) in wd.events.iter().enumerate() {
        let k = ev.lines.len();
        let top = order
            .iter()
            .position(|&l| l == ev.lines[0])
            .expect("event line appears in the sweep order");
        assert!(
            order[top..top + k] == ev.lines[..],
            "sweep order disagrees with the vertex geometry at event {ev_idx}"
        );

        let ws: Vec<Vec<i32>> = ev.lines.iter().map(|&l| words[l].clone()).collect();
        let mut product = Vec::new();
        for w in &ws {
            product.extend_from_slice(w);
        }
        let product = reduce(product);
        for j in 1..k {
            let mut rotation = Vec::new();
            for w in ws[j..].iter().chain(ws[..j].iter()) {
                rotation.extend_from_slice(w);
            }
            let mut rel = product.clone();
            rel.extend(invert(&rotation));
            relators.push(reduce(rel));
            relator_events.push(ev_idx);
        }

        let mut prefix: Vec<i32> = Vec::new();
        for (j, &line) in ev.lines.iter().enumerate() {
            if j > 0 {
                let mut conjugated = prefix.clone();
                conjugated.extend_from_slice(&ws[j]);
                conjugated.extend(invert(&prefix));
                words[line] = reduce(conjugated);
            }
            prefix.extend_from_slice(&ws[j]);
            prefix = reduce(prefix);
        }
        order[top..top + k].reverse();
    }

    Presentation {
        generators: wd.lines.iter().map(|l| l.label.clone()).collect(),
        relators,
        relator_events,
    }
}

/// Fox derivatives of one word, evaluated at the character `t`: entry `i` is
/// `∂w/∂gᵢ` pushed through `gⱼ ↦ tⱼ`.
pub fn fox_row(word: &[i32], t: &[RatFunc]) -> Result<Vec<RatFunc>, CoreError> {
    let mut entries = vec![RatFunc::from_i64(0); t.len()];
    let mut prefix = RatFunc::from_i64(1);
    for &letter in word {
        let i = letter.unsigned_abs() as usize - 1;
        if i >= t.len() {
            return Err(CoreError::CharacterLength {
                expected: t.len(),
                got: i + 1,
            });
        }
        if letter > 0 {
            entries[i] = &entries[i] + &prefix;
            prefix = &prefix * &t[i];
        } else {
            prefix = &prefix * &t[i].checked_inv()?;
            entries[i] = &entries[i] - &prefix;
        }
    }
    Ok(entries)
}

/// The Fox matrix of a presentation at `t`: one row per relator, one column
/// per generator. Its rows always satisfy `Σⱼ (∂R/∂gⱼ)(t)·(tⱼ−1) = 0`.
pub fn fox_matrix(p: &Presentation, t: &[RatFunc]) -> Result<ExactMatrix, CoreError> {
    if t.len() != p.generators.len() {
        return Err(CoreError::CharacterLength {
            expected: p.generators.len(),
            got: t.len(),
        });
    }
    let mut m = ExactMatrix::zero(p.relators.len(), p.generators.len());
    for (r, rel) in p.relators.iter().enumerate() {
        for (j, entry) in fox_row(rel, t)?.into_iter().enumerate() {
            m.set(r, j, entry);
        }
    }
    Ok(m)
}

/// First twisted Betti number of the presentation complex at `t`:
/// `generators − 1 − rank` of the Fox matrix for nontrivial `t`, and the
/// ordinary first Betti number (= generator count) at the trivial character.
pub fn h1_dim(p: &Presentation, t: &[RatFunc]) -> Result<usize, CoreError> {
    if t.len() != p.generators.len() {
        return Err(CoreError::CharacterLength {
            expected: p.generators.len(),
            got: t.len(),
        });
    }
    if t.iter().all(|c| c.is_one()) {
        return Ok(p.generators.len());
    }
    let m = fox_matrix(p, t)?;
    // Constant characters stay inside the cyclotomic field, where elimination
    // is much cheaper than over the rational-function field.
    let rank = if t.iter().all(|c| c.as_constant().is_some()) {
        let one = charvar_exact::Cyclotomic::one();
        m.eval(&one, &one).map_err(CoreError::Exact)?.rank()
    } else {
        m.rank()
    };
    assert!(
        rank < p.generators.len(),
        "Fox matrix rank exceeds generators − 1 at a nontrivial character"
    );
    Ok(p.generators.len() - 1 - rank)
}

/// Outcome of a characteristic-variety membership test.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SigmaMembership {
    /// Whether `dim H¹ ≥ m` at the character.
    pub member: bool,
    /// The depth that was tested.
    pub m: usize,
    /// The twisted Betti number, when one was computed.
    pub h1: Option<usize>,
    /// Which rule decided: `trivial-character`, `central-product`, or `fox-h1`.
    pub rule: String,
    /// Statement of the duality convention behind `h1`.
    pub convention: String,
}

/// Decide whether a character on a central arrangement lies in the depth-`m`
/// characteristic variety, using the fundamental group as the oracle.
///
/// A nontrivial character whose coordinate product is not 1 restricts
/// nontrivially to the central ℂ* factor, so every twisted Betti number
/// vanishes and the answer is immediate. Otherwise the character descends to
/// the deconing at `pivot` and the Fox matrix decides.
pub fn sigma1_membership(
    a: &Arrangement,
    t: &Character,
    m: usize,
    pivot: usize,
) -> Result<SigmaMembership, CoreError> {
    if m == 0 {
        return Err(CoreError::Parse(
            "membership threshold m must be at least 1".into(),
        ));
    }
    t.check_host(a)?;
    if !a.is_central() {
        return Err(CoreError::NotCentral);
    }
    let verdict = |member, h1, rule: &str| SigmaMembership {
        member,
        m,
        h1,
        rule: rule.into(),
        convention: DUALITY_CONVENTION.into(),
    };
    if t.is_trivial() {
        let b1 = a.n();
        return Ok(verdict(b1 >= m, Some(b1), "trivial-character"));
    }
    if !t.product().is_one() {
        return Ok(verdict(false, Some(0), "central-product"));
    }
    let (deconed, dt) = decone_character(t, a, pivot)?;
    let wd = wiring_diagram(&deconed)?;
    let p = presentation(&wd);
    let h1 = h1_dim(&p, &dt.coords)?;
    Ok(verdict(h1 >= m, Some(h1), "fox-h1"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{family, parse_defining_polynomial, Family, Hyperplane};
    use crate::chars::component_cq;
    use crate::lattice::poincare_polynomial;
    use charvar_exact::Cyclotomic;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn d2() -> Arrangement {
        family(Family::MonomialDeletion, Some(2), None).unwrap()
    }

    fn deconed_d2() -> (Arrangement, Presentation) {
        let a = d2().decone(0).unwrap();
        let wd = wiring_diagram(&a).unwrap();
        let p = presentation(&wd);
        (a, p)
    }

    /// The symbolic generic point of the translated curve, deconed at H1.
    fn deconed_curve_point() -> (Presentation, Vec<RatFunc>) {
        let a = d2();
        let t = component_cq(2, 1).unwrap().generic_point().unwrap();
        let (deconed, dt) = decone_character(&t, &a, 0).unwrap();
        let wd = wiring_diagram(&deconed).unwrap();
        (presentation(&wd), dt.coords)
    }

    fn rational_char(rng: &mut ChaCha8Rng, len: usize) -> Vec<RatFunc> {
        (0..len)
            .map(|_| {
                let num = rng.gen_range(1..=9);
                let den = rng.gen_range(1..=9);
                let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
                let q = Rat::new(BigInt::from(sign * num), BigInt::from(den));
                RatFunc::constant(Cyclotomic::from_rational(q))
            })
            .collect()
    }

    #[test]
    fn words_reduce_and_invert() {
        assert_eq!(reduce(vec![1, 2, -2, -1, 3]), vec![3]);
        assert_eq!(reduce(vec![1, -1]), Vec::<i32>::new());
        assert_eq!(invert(&[1, 2, -3]), vec![3, -2, -1]);
        assert_eq!(reduce(vec![2, 1, -1, -2, 5]), vec![5]);
    }

    #[test]
    fn two_crossing_lines_present_the_commutator() {
        let a = parse_defining_polynomial("x1*x2", Some(2)).unwrap();
        let wd = wiring_diagram(&a).unwrap();
        assert_eq!(wd.multiplicities(), vec![2]);
        let p = presentation(&wd);
        assert_eq!(p.generators.len(), 2);
        assert_eq!(p.relators, vec![vec![1, 2, -1, -2]]);

        // Expected row of Fox derivatives: (1 − t₂, t₁ − 1).
        let (u, v) = (RatFunc::var_u(), RatFunc::var_v());
        let row = fox_row(&[1, 2, -1, -2], &[u.clone(), v.clone()]).unwrap();
        assert_eq!(row[0], &RatFunc::from_i64(1) - &v);
        assert_eq!(row[1], &u - &RatFunc::from_i64(1));

        // Any nontrivial character kills the twisted H¹ of (ℂ*)².
        let t = vec![RatFunc::from_i64(2), RatFunc::from_i64(3)];
        assert_eq!(h1_dim(&p, &t).unwrap(), 0);
    }

    #[test]
    fn a_pencil_of_three_lines_resonates_at_cube_roots() {
        let a = parse_defining_polynomial("x1*x2*(x1+x2)", Some(2)).unwrap();
        let wd = wiring_diagram(&a).unwrap();
        assert_eq!(wd.multiplicities(), vec![3]);
        let p = presentation(&wd);
        assert_eq!(p.relators.len(), 2);
        assert_eq!(p.euler_characteristic(), 0);

        let zeta = RatFunc::constant(Cyclotomic::root_of_unity(3, 1).unwrap());
        let t = vec![zeta.clone(), zeta.clone(), zeta];
        assert_eq!(h1_dim(&p, &t).unwrap(), 1);

        // Generic points stay silent.
        let t = vec![
            RatFunc::from_i64(2),
            RatFunc::from_i64(3),
            RatFunc::from_i64(5),
        ];
        assert_eq!(h1_dim(&p, &t).unwrap(), 0);
    }

    #[test]
    fn the_swept_deletion_matches_its_intersection_lattice() {
        let (a, p) = deconed_d2();
        let wd = wiring_diagram(&a).unwrap();

        // Deterministic shear: 0, 1, and 1/2 are degenerate, 1/3 is not.
        assert_eq!(wd.shear, Rat::new(BigInt::from(1), BigInt::from(3)));
        assert_eq!(wd.multiplicities(), vec![3, 3, 2, 3, 2, 3, 3]);

        // π(decone 𝒟, t) = 1 + 7t + 12t², and the presentation mirrors it.
        assert_eq!(poincare_polynomial(&a), vec![1, 7, 12]);
        assert_eq!(p.generators.len(), 7);
        assert_eq!(p.relators.len(), 12);
        assert_eq!(p.euler_characteristic(), 6);
        assert_eq!(p.relator_events.len(), 12);
    }

    #[test]
    fn fox_rows_satisfy_the_fundamental_identity() {
        let (_, p) = deconed_d2();
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for _ in 0..10 {
            let t = rational_char(&mut rng, 7);
            for rel in &p.relators {
                let row = fox_row(rel, &t).unwrap();
                let mut total = RatFunc::from_i64(0);
                for (j, entry) in row.iter().enumerate() {
                    total = &total + &(entry * &(&t[j] - &RatFunc::from_i64(1)));
                }
                assert!(
                    total == RatFunc::from_i64(0),
                    "identity fails on relator {rel:?}"
                );
            }
        }
    }

    #[test]
    fn relators_abelianize_to_zero() {
        let (_, p) = deconed_d2();
        for rel in &p.relators {
            let mut exponents = vec![0i64; p.generators.len()];
            for &letter in rel {
                exponents[letter.unsigned_abs() as usize - 1] += letter.signum() as i64;
            }
            assert!(
                exponents.iter().all(|&e| e == 0),
                "relator {rel:?} is unbalanced"
            );
        }
    }

    #[test]
    fn the_translated_curve_carries_cohomology() {
        let (p, t) = deconed_curve_point();
        assert!(t.iter().any(|c| c.as_constant().is_none()));
        // The exact twisted Betti number along the curve; ≥ 1 is the
        // membership statement, = 1 is the frozen value of this oracle.
        assert_eq!(h1_dim(&p, &t).unwrap(), 1);
    }

    #[test]
    fn perturbing_off_the_curve_kills_cohomology() {
        let a = d2();
        let base = component_cq(2, 1).unwrap().generic_point().unwrap();
        // Compensated perturbations: scale one coordinate of a pair by c and
        // the other by 1/c, so the product stays 1 and deconing still applies.
        let pairs = [(6, 7, 2), (4, 5, 3), (2, 3, 2)];
        for (i, j, c) in pairs {
            let mut t = base.clone();
            t.coords[i] = &t.coords[i] * &RatFunc::from_i64(c);
            t.coords[j] = &t.coords[j] * &RatFunc::from_i64(c).checked_inv().unwrap();
            assert!(t.product().is_one());
            let verdict = sigma1_membership(&a, &t, 1, 0).unwrap();
            assert_eq!(verdict.rule, "fox-h1");
            assert_eq!(verdict.h1, Some(0));
            assert!(!verdict.member);
        }
    }

    #[test]
    fn unbalanced_products_fail_the_central_criterion() {
        let a = d2();

        // The curve point with one coordinate doubled no longer has product 1.
        let mut t = component_cq(2, 1).unwrap().generic_point().unwrap();
        t.coords[6] = &t.coords[6] * &RatFunc::from_i64(2);
        let verdict = sigma1_membership(&a, &t, 1, 0).unwrap();
        assert_eq!(verdict.rule, "central-product");
        assert_eq!(verdict.h1, Some(0));
        assert!(!verdict.member);

        // Five random torsion characters with product ≠ 1.
        let mut rng = ChaCha8Rng::seed_from_u64(62);
        let mut found = 0;
        while found < 5 {
            let coords: Vec<RatFunc> = (0..8)
                .map(|_| {
                    let k = rng.gen_range(0..8);
                    RatFunc::constant(Cyclotomic::root_of_unity(8, k).unwrap())
                })
                .collect();
            let t = Character::new(&a.name, coords);
            if t.product().is_one() {
                continue;
            }
            found += 1;
            let verdict = sigma1_membership(&a, &t, 1, 0).unwrap();
            assert_eq!(verdict.rule, "central-product");
            assert!(!verdict.member);
        }
    }

    #[test]
    fn generic_torsion_characters_vanish() {
        let (_, p) = deconed_d2();
        let mut rng = ChaCha8Rng::seed_from_u64(63);
        for _ in 0..5 {
            let t: Vec<RatFunc> = (0..7)
                .map(|_| {
                    let k = rng.gen_range(1..31);
                    RatFunc::constant(Cyclotomic::root_of_unity(31, k).unwrap())
                })
                .collect();
            assert_eq!(h1_dim(&p, &t).unwrap(), 0);
        }
    }

    #[test]
    fn euler_bookkeeping_across_characters() {
        let (p, curve) = deconed_curve_point();
        let generic = vec![
            RatFunc::from_i64(2),
            RatFunc::from_i64(3),
            RatFunc::from_i64(5),
            RatFunc::from_i64(7),
            RatFunc::from_i64(11),
            RatFunc::from_i64(13),
            RatFunc::from_i64(17),
        ];
        let rank_at = |t: &[RatFunc]| fox_matrix(&p, t).unwrap().rank();
        let (rank_gen, rank_curve) = (rank_at(&generic), rank_at(&curve));
        let (h1_gen, h1_curve) = (
            h1_dim(&p, &generic).unwrap(),
            h1_dim(&p, &curve).unwrap(),
        );
        // Corank bookkeeping: h1 rises exactly as far as the rank drops, and
        // χ = h0 − h1 + h2 forces h2 = χ + h1 ≥ χ at every character.
        assert_eq!(rank_gen, p.generators.len() - 1);
        assert_eq!(
            h1_curve - h1_gen,
            rank_gen - rank_curve,
            "rank drop must equal the Betti jump"
        );
        assert_eq!(p.euler_characteristic() + h1_curve as i64, 7);
    }

    #[test]
    fn conjugating_relators_is_invisible_to_h1() {
        let (p, curve) = deconed_curve_point();
        let mut rng = ChaCha8Rng::seed_from_u64(64);
        let mut moved = p.clone();
        for rel in &mut moved.relators {
            let g = rng.gen_range(1..=7) as i32;
            let mut w = vec![g];
            w.extend_from_slice(rel);
            w.push(-g);
            *rel = reduce(w);
        }
        let mut chars: Vec<Vec<RatFunc>> = vec![curve];
        for _ in 0..4 {
            chars.push(rational_char(&mut rng, 7));
        }
        for t in &chars {
            assert_eq!(h1_dim(&p, t).unwrap(), h1_dim(&moved, t).unwrap());
        }
    }

    #[test]
    fn cyclotomic_and_symbolic_elimination_agree() {
        let a = d2();
        let (_, p) = deconed_d2();
        let mut rng = ChaCha8Rng::seed_from_u64(65);
        let one = Cyclotomic::one();
        for _ in 0..10 {
            // A torsion character of order dividing 8 with coordinate
            // product 1, pushed down to the deconed arrangement.
            let mut ks: Vec<i64> = (0..7).map(|_| rng.gen_range(0..8)).collect();
            ks.push((-ks.iter().sum::<i64>()).rem_euclid(8));
            let coords: Vec<RatFunc> = ks
                .iter()
                .map(|&k| RatFunc::constant(Cyclotomic::root_of_unity(8, k).unwrap()))
                .collect();
            let t = Character::new(&a.name, coords);
            if t.is_trivial() {
                continue;
            }
            assert!(t.product().is_one());
            let (_, dt) = decone_character(&t, &a, 0).unwrap();

            let m = fox_matrix(&p, &dt.coords).unwrap();
            let symbolic_rank = m.rank();
            let cyclotomic_rank = m.eval(&one, &one).unwrap().rank();
            assert_eq!(symbolic_rank, cyclotomic_rank);

            let h1 = h1_dim(&p, &dt.coords).unwrap();
            assert_eq!(h1, p.generators.len() - 1 - symbolic_rank);
        }
    }

    #[test]
    fn membership_does_not_depend_on_the_pivot() {
        let a = d2();
        let curve = component_cq(2, 1).unwrap().generic_point().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(66);
        let mut chars = vec![curve];
        for _ in 0..2 {
            let mut ks: Vec<i64> = (0..7).map(|_| rng.gen_range(0..8)).collect();
            ks.push((-ks.iter().sum::<i64>()).rem_euclid(8));
            let coords: Vec<RatFunc> = ks
                .iter()
                .map(|&k| RatFunc::constant(Cyclotomic::root_of_unity(8, k).unwrap()))
                .collect();
            chars.push(Character::new(&a.name, coords));
        }
        for t in &chars {
            if t.is_trivial() {
                continue;
            }
            let reference = sigma1_membership(&a, t, 1, 0).unwrap();
            for pivot in [1, 3, 7] {
                let other = sigma1_membership(&a, t, 1, pivot).unwrap();
                assert_eq!(reference.h1, other.h1, "pivot {pivot} disagrees");
                assert_eq!(reference.member, other.member);
            }
        }
    }

    #[test]
    fn the_shear_does_not_affect_h1() {
        let a = d2().decone(0).unwrap();
        let t = {
            let full = d2();
            let point = component_cq(2, 1).unwrap().generic_point().unwrap();
            decone_character(&point, &full, 0).unwrap().1
        };
        for (num, den) in [(1i64, 3i64), (1, 5), (3, 1)] {
            let s = Rat::new(BigInt::from(num), BigInt::from(den));
            let wd = wiring_diagram_with_shear(&a, s).unwrap();
            let p = presentation(&wd);
            assert_eq!(p.relators.len(), 12);
            assert_eq!(h1_dim(&p, &t.coords).unwrap(), 1);
        }
        let degenerate = wiring_diagram_with_shear(&a, Rat::zero());
        assert!(matches!(degenerate, Err(CoreError::Unsupported(_))));
    }

    #[test]
    fn trivial_characters_take_the_betti_route() {
        let (_, p) = deconed_d2();
        let ones = vec![RatFunc::from_i64(1); 7];
        assert_eq!(h1_dim(&p, &ones).unwrap(), 7);

        let a = d2();
        let t = Character::identity(&a);
        let verdict = sigma1_membership(&a, &t, 1, 0).unwrap();
        assert_eq!(verdict.rule, "trivial-character");
        assert_eq!(verdict.h1, Some(8));
        assert!(verdict.member);
    }

    #[test]
    fn presentations_travel_as_json() {
        let (_, p) = deconed_d2();
        let json = serde_json::to_string(&p).unwrap();
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        let keys: Vec<&String> = value.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["generators", "relators"]);

        let back: Presentation = serde_json::from_str(&json).unwrap();
        assert_eq!(back.generators, p.generators);
        assert_eq!(back.relators, p.relators);

        // A hand-written presentation in the same shape is accepted.
        let torus: Presentation =
            serde_json::from_str(r#"{"generators":["a","b"],"relators":[[1,2,-1,-2]]}"#).unwrap();
        let t = vec![RatFunc::from_i64(5), RatFunc::from_i64(7)];
        assert_eq!(h1_dim(&torus, &t).unwrap(), 0);
        let ones = vec![RatFunc::from_i64(1); 2];
        assert_eq!(h1_dim(&torus, &ones).unwrap(), 2);
    }

    #[test]
    fn unsupported_inputs_are_refused() {
        // Not planar.
        let central = d2();
        assert!(matches!(
            wiring_diagram(&central),
            Err(CoreError::Unsupported(_))
        ));

        // Irrational (though real) coefficient: √2 = ζ₈ + ζ₈⁻¹.
        let sqrt2 = &Cyclotomic::root_of_unity(8, 1).unwrap()
            + &Cyclotomic::root_of_unity(8, 7).unwrap();
        let irr = Arrangement::new(
            "irrational",
            2,
            8,
            vec![
                Hyperplane::new("H1", vec![Cyclotomic::one(), sqrt2], Cyclotomic::one()),
                Hyperplane::new(
                    "H2",
                    vec![Cyclotomic::one(), Cyclotomic::zero()],
                    Cyclotomic::zero(),
                ),
            ],
        )
        .unwrap();
        assert!(matches!(
            wiring_diagram(&irr),
            Err(CoreError::Unsupported(_))
        ));

        // Wrong-length characters and a zero threshold.
        let (_, p) = deconed_d2();
        let short = vec![RatFunc::from_i64(2); 3];
        assert!(matches!(
            h1_dim(&p, &short),
            Err(CoreError::CharacterLength { .. })
        ));
        let t = Character::identity(&central);
        assert!(matches!(
            sigma1_membership(&central, &t, 0, 0),
            Err(CoreError::Parse(_))
        ));

        // Non-central hosts are refused before any sweep.
        let affine = parse_defining_polynomial("x1*(x1-1)", Some(2)).unwrap();
        let ta = Character::identity(&affine);
        assert!(matches!(
            sigma1_membership(&affine, &ta, 1, 0),
            Err(CoreError::NotCentral)
        ));
    }

    #[test]
    fn every_crossing_pair_appears_in_exactly_one_event() {
        let (a, _) = deconed_d2();
        let wd = wiring_diagram(&a).unwrap();
        let mut seen = std::collections::HashSet::new();
        for ev in &wd.events {
            for i in 0..ev.lines.len() {
                for j in i + 1..ev.lines.len() {
                    assert!(
                        seen.insert((ev.lines[i], ev.lines[j])),
                        "pair counted twice"
                    );
                }
            }
        }
        // 21 pairs of 7 lines, minus the three parallel pairs among the
        // verticals x = −1, 0, 1 and the horizontal pair y = ±1.
        assert_eq!(seen.len(), 17);
    }
}
