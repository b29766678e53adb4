//! Hyperplane arrangements: the data model, a parser for defining polynomials,
//! the built-in families, and the deletion / restriction / cone / decone moves.
//!
//! Hyperplanes are affine: the zero locus of `normal · x + constant`. A central
//! arrangement is one where every constant vanishes. Coefficients live in a
//! cyclotomic field so that factors like `x1^r - x2^r` can be split into the
//! linear forms `x1 - ζ^k x2`, `k = 1..r`.
//!
//! Conventions fixed here and relied on everywhere else:
//! - hyperplane order is the left-to-right factor order of the defining
//!   polynomial, and within a power-difference factor the order k = 1..r;
//! - character-torus coordinate j is hyperplane j in this list order;
//! - restriction labels a hyperplane of A'' after the lowest-index member of
//!   its trace set, suffixed with two apostrophes, and orders A'' by that index;
//! - decone substitutes (pivot form) = 1 and drops the pivot's leading
//!   coordinate (the highest-index coordinate with a nonzero pivot coefficient).

use crate::lattice::Poset;
use crate::CoreError;
use charvar_exact::{Cyclotomic, Rat};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::sync::OnceLock;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Hyperplane {
    pub label: String,
    pub normal: Vec<Cyclotomic>,
    pub constant: Cyclotomic,
}

impl Hyperplane {
    pub fn new(label: impl Into<String>, normal: Vec<Cyclotomic>, constant: Cyclotomic) -> Self {
        Hyperplane {
            label: label.into(),
            normal,
            constant,
        }
    }

    pub fn is_central(&self) -> bool {
        self.constant.is_zero()
    }

    /// The defining form scaled so its first nonzero coordinate (normal entries
    /// first, then the constant) is 1 — a canonical representative of the
    /// hyperplane, used for duplicate detection and restriction deduplication.
    pub fn projective_key(&self) -> Vec<Cyclotomic> {
        let mut row: Vec<Cyclotomic> = self.normal.clone();
        row.push(self.constant.clone());
        let lead = row
            .iter()
            .find(|c| !c.is_zero())
            .expect("hyperplane with zero normal")
            .clone();
        let inv = lead.checked_inv().expect("nonzero lead");
        row.iter().map(|c| c * &inv).collect()
    }

    fn key_string(&self) -> String {
        serde_json::to_string(&self.projective_key()).expect("serializable key")
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Arrangement {
    pub name: String,
    pub ambient_dim: usize,
    pub conductor: u32,
    pub hyperplanes: Vec<Hyperplane>,
    #[serde(skip)]
    poset: OnceLock<Poset>,
}

impl Arrangement {
    pub fn new(
        name: impl Into<String>,
        ambient_dim: usize,
        conductor: u32,
        hyperplanes: Vec<Hyperplane>,
    ) -> Result<Self, CoreError> {
        let mut seen_keys = HashSet::new();
        let mut seen_labels = HashSet::new();
        for h in &hyperplanes {
            if h.normal.len() != ambient_dim {
                return Err(CoreError::Parse(format!(
                    "hyperplane {} has {} coordinates, expected {}",
                    h.label,
                    h.normal.len(),
                    ambient_dim
                )));
            }
            if h.normal.iter().all(|c| c.is_zero()) {
                return Err(CoreError::Parse(format!(
                    "hyperplane {} has zero normal vector",
                    h.label
                )));
            }
            if !seen_keys.insert(h.key_string()) {
                return Err(CoreError::Parse(format!(
                    "duplicate hyperplane: {} repeats an earlier linear form",
                    h.label
                )));
            }
            if !seen_labels.insert(h.label.clone()) {
                return Err(CoreError::Parse(format!("duplicate label: {}", h.label)));
            }
        }
        Ok(Arrangement {
            name: name.into(),
            ambient_dim,
            conductor,
            hyperplanes,
            poset: OnceLock::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_central(&self) -> bool {
        self.hyperplanes.iter().all(|h| h.is_central())
    }

    pub fn index_of_label(&self, label: &str) -> Result<usize, CoreError> {
        self.hyperplanes
            .iter()
            .position(|h| h.label == label)
            .ok_or_else(|| CoreError::UnknownLabel(label.to_string()))
    }

    /// The intersection poset, computed once and cached.
    pub fn poset(&self) -> &Poset {
        self.poset.get_or_init(|| Poset::build(self))
    }

    /// True when the two arrangements carry the same hyperplanes, label for
    /// label, in the same order (names may differ).
    pub fn same_hyperplanes(&self, other: &Arrangement) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.n() == other.n()
            && self
                .hyperplanes
                .iter()
                .zip(&other.hyperplanes)
                .all(|(a, b)| a.label == b.label && a.key_string() == b.key_string())
    }

    /// Delete one hyperplane, keeping the labels and order of the rest.
    pub fn delete(&self, pivot: usize) -> Result<Arrangement, CoreError> {
        if pivot >= self.n() {
            return Err(CoreError::Parse(format!("pivot index {pivot} out of range")));
        }
        let hyperplanes: Vec<Hyperplane> = self
            .hyperplanes
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != pivot)
            .map(|(_, h)| h.clone())
            .collect();
        Arrangement::new(
            format!("{}-del-{}", self.name, self.hyperplanes[pivot].label),
            self.ambient_dim,
            self.conductor,
            hyperplanes,
        )
    }

    /// Decone a central arrangement at the pivot: substitute (pivot form) = 1
    /// and keep the remaining coordinates in order. The result is affine in
    /// dimension ℓ − 1 with the pivot removed; labels are preserved.
    pub fn decone(&self, pivot: usize) -> Result<Arrangement, CoreError> {
        if !self.is_central() {
            return Err(CoreError::NotCentral);
        }
        if pivot >= self.n() {
            return Err(CoreError::Parse(format!("pivot index {pivot} out of range")));
        }
        let pivot_h = &self.hyperplanes[pivot];
        let s = leading_coordinate(&pivot_h.normal);
        let mut hyperplanes = Vec::with_capacity(self.n() - 1);
        for (i, h) in self.hyperplanes.iter().enumerate() {
            if i == pivot {
                continue;
            }
            let (normal, constant) =
                substitute_form(&h.normal, &h.constant, &pivot_h.normal, s, Cyclotomic::one());
            hyperplanes.push(Hyperplane::new(h.label.clone(), normal, constant));
        }
        Arrangement::new(
            format!("{}-dec-{}", self.name, pivot_h.label),
            self.ambient_dim - 1,
            self.conductor,
            hyperplanes,
        )
    }

    /// Cone an affine arrangement: homogenize every form with a new last
    /// coordinate and append that coordinate's hyperplane, labeled "H0".
    pub fn cone(&self) -> Result<Arrangement, CoreError> {
        let dim = self.ambient_dim + 1;
        let mut hyperplanes = Vec::with_capacity(self.n() + 1);
        for h in &self.hyperplanes {
            let mut normal = h.normal.clone();
            normal.push(h.constant.clone());
            hyperplanes.push(Hyperplane::new(h.label.clone(), normal, Cyclotomic::zero()));
        }
        let mut inf_normal = vec![Cyclotomic::zero(); dim];
        inf_normal[dim - 1] = Cyclotomic::one();
        hyperplanes.push(Hyperplane::new("H0", inf_normal, Cyclotomic::zero()));
        Arrangement::new(
            format!("{}-cone", self.name),
            dim,
            self.conductor,
            hyperplanes,
        )
    }
}

/// Highest-index coordinate with a nonzero coefficient.
fn leading_coordinate(normal: &[Cyclotomic]) -> usize {
    normal
        .iter()
        .rposition(|c| !c.is_zero())
        .expect("zero normal vector")
}

/// Substitute x_s = (k − Σ_{i≠s} c_i x_i) / c_s (where c is the pivot form and
/// k its prescribed value) into the form `normal · x + constant`, producing a
/// form in the remaining coordinates, order preserved.
fn substitute_form(
    normal: &[Cyclotomic],
    constant: &Cyclotomic,
    pivot_normal: &[Cyclotomic],
    s: usize,
    k: Cyclotomic,
) -> (Vec<Cyclotomic>, Cyclotomic) {
    let cs_inv = pivot_normal[s].checked_inv().expect("pivot coefficient");
    let ds_over_cs = &normal[s] * &cs_inv;
    let mut out = Vec::with_capacity(normal.len() - 1);
    for i in 0..normal.len() {
        if i == s {
            continue;
        }
        out.push(&normal[i] - &(&ds_over_cs * &pivot_normal[i]));
    }
    let constant = constant + &(&ds_over_cs * &k);
    (out, constant)
}

/// A deletion–restriction triple (A, A', A'') at a distinguished hyperplane.
///
/// `restricted` realizes A'' as an honest arrangement inside the pivot
/// hyperplane (coordinates of the ambient space minus the pivot's leading
/// coordinate). `trace[j]` lists, for the j-th hyperplane of A'', the indices
/// of the hyperplanes of A' that meet the pivot in exactly that subspace.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Triple {
    pub full: Arrangement,
    pub deleted: Arrangement,
    pub restricted: Arrangement,
    pub pivot: usize,
    pub trace: Vec<Vec<usize>>,
}

impl Triple {
    pub fn build(a: &Arrangement, pivot: usize) -> Result<Triple, CoreError> {
        if pivot >= a.n() {
            return Err(CoreError::Parse(format!("pivot index {pivot} out of range")));
        }
        if a.n() < 2 {
            return Err(CoreError::Parse(
                "a triple needs at least two hyperplanes".into(),
            ));
        }
        let deleted = a.delete(pivot)?;
        let pivot_h = &a.hyperplanes[pivot];
        let s = leading_coordinate(&pivot_h.normal);
        // Value of the pivot coordinate's substitution: solve pivot form = 0.
        let k = -pivot_h.constant.clone();

        // Group the deleted hyperplanes by their intersection with the pivot.
        let mut keys: Vec<String> = Vec::new();
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut forms: Vec<(Vec<Cyclotomic>, Cyclotomic)> = Vec::new();
        for (j, h) in deleted.hyperplanes.iter().enumerate() {
            let (normal, constant) =
                substitute_form(&h.normal, &h.constant, &pivot_h.normal, s, k.clone());
            if normal.iter().all(|c| c.is_zero()) {
                // Parallel to the pivot inside the ambient space: empty trace.
                continue;
            }
            let probe = Hyperplane::new("", normal.clone(), constant.clone());
            let key = probe.key_string();
            match keys.iter().position(|ks| *ks == key) {
                Some(g) => groups[g].push(j),
                None => {
                    keys.push(key);
                    groups.push(vec![j]);
                    forms.push((normal, constant));
                }
            }
        }

        let mut hyperplanes = Vec::with_capacity(groups.len());
        for (g, members) in groups.iter().enumerate() {
            let label = format!("{}''", deleted.hyperplanes[members[0]].label);
            hyperplanes.push(Hyperplane::new(label, forms[g].0.clone(), forms[g].1.clone()));
        }
        let restricted = Arrangement::new(
            format!("{}-res-{}", a.name, pivot_h.label),
            a.ambient_dim - 1,
            a.conductor,
            hyperplanes,
        )?;
        Ok(Triple {
            full: a.clone(),
            deleted,
            restricted,
            pivot,
            trace: groups,
        })
    }
}

/// The built-in families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Reflection arrangement of the full monomial group in rank 3:
    /// x1 x2 x3 (x1^r − x2^r)(x1^r − x3^r)(x2^r − x3^r).
    MonomialFull,
    /// The same with the hyperplane x3 = 0 removed.
    MonomialDeletion,
    /// Coordinate hyperplanes of ℂ^ℓ.
    Boolean,
    /// All x_i − x_j, i < j, in ℂ^ℓ.
    Braid,
}

impl Family {
    pub fn parse(name: &str) -> Result<Family, CoreError> {
        match name {
            "monomial_full" => Ok(Family::MonomialFull),
            "monomial_deletion" => Ok(Family::MonomialDeletion),
            "boolean" => Ok(Family::Boolean),
            "braid" => Ok(Family::Braid),
            other => Err(CoreError::Parse(format!("unknown family: {other}"))),
        }
    }
}

/// Build a member of one of the built-in families. `r` is required (and must be
/// ≥ 2) for the monomial families; `dim` is required for boolean and braid.
pub fn family(kind: Family, r: Option<u32>, dim: Option<usize>) -> Result<Arrangement, CoreError> {
    match kind {
        Family::MonomialFull | Family::MonomialDeletion => {
            let r = r.ok_or_else(|| CoreError::Parse("monomial families need r".into()))?;
            if r < 2 {
                return Err(CoreError::Parse("monomial families need r >= 2".into()));
            }
            let full = kind == Family::MonomialFull;
            let mut hyperplanes = Vec::new();
            let coords: &[usize] = if full { &[0, 1, 2] } else { &[0, 1] };
            for &i in coords {
                let mut normal = vec![Cyclotomic::zero(); 3];
                normal[i] = Cyclotomic::one();
                hyperplanes.push(Hyperplane::new(
                    format!("H{}", i + 1),
                    normal,
                    Cyclotomic::zero(),
                ));
            }
            for &(i, j) in &[(0usize, 1usize), (0, 2), (1, 2)] {
                for k in 1..=r {
                    let mut normal = vec![Cyclotomic::zero(); 3];
                    normal[i] = Cyclotomic::one();
                    normal[j] = -Cyclotomic::root_of_unity(r, k as i64)?;
                    hyperplanes.push(Hyperplane::new(
                        format!("H{}{}:{}", i + 1, j + 1, k),
                        normal,
                        Cyclotomic::zero(),
                    ));
                }
            }
            let name = if full {
                format!("monomial_full_r{r}")
            } else {
                format!("monomial_deletion_r{r}")
            };
            Arrangement::new(name, 3, r, hyperplanes)
        }
        Family::Boolean => {
            let l = dim.ok_or_else(|| CoreError::Parse("boolean needs a dimension".into()))?;
            if l == 0 {
                return Err(CoreError::Parse("boolean needs dimension >= 1".into()));
            }
            let mut hyperplanes = Vec::new();
            for i in 0..l {
                let mut normal = vec![Cyclotomic::zero(); l];
                normal[i] = Cyclotomic::one();
                hyperplanes.push(Hyperplane::new(
                    format!("H{}", i + 1),
                    normal,
                    Cyclotomic::zero(),
                ));
            }
            Arrangement::new(format!("boolean_l{l}"), l, 1, hyperplanes)
        }
        Family::Braid => {
            let l = dim.ok_or_else(|| CoreError::Parse("braid needs a dimension".into()))?;
            if l < 2 {
                return Err(CoreError::Parse("braid needs dimension >= 2".into()));
            }
            let mut hyperplanes = Vec::new();
            for i in 0..l {
                for j in i + 1..l {
                    let mut normal = vec![Cyclotomic::zero(); l];
                    normal[i] = Cyclotomic::one();
                    normal[j] = -Cyclotomic::one();
                    hyperplanes.push(Hyperplane::new(
                        format!("H{}{}", i + 1, j + 1),
                        normal,
                        Cyclotomic::zero(),
                    ));
                }
            }
            Arrangement::new(format!("braid_l{l}"), l, 1, hyperplanes)
        }
    }
}

/// The deletion–restriction triple of the full monomial arrangement at the
/// pivot `H3`, with the deleted member replaced by the canonical
/// `monomial_deletion` family arrangement (they agree hyperplane-for-
/// hyperplane; only the derived name differs).
pub fn monomial_triple(r: u32) -> Result<Triple, CoreError> {
    let full = family(Family::MonomialFull, Some(r), None)?;
    let pivot = full.index_of_label("H3")?;
    let mut triple = Triple::build(&full, pivot)?;
    let deletion = family(Family::MonomialDeletion, Some(r), None)?;
    if !triple.deleted.same_hyperplanes(&deletion) {
        return Err(CoreError::Parse(
            "deleting H3 from the full monomial arrangement did not yield the deletion family"
                .into(),
        ));
    }
    triple.deleted = deletion;
    Ok(triple)
}

/// Recognize the full rank-3 monomial arrangement up to relabeling: returns r
/// when the hyperplane set equals that of `family(MonomialFull, r)` as a set of
/// projective linear forms.
pub fn recognize_monomial_full(a: &Arrangement) -> Option<u32> {
    if a.ambient_dim != 3 || !a.is_central() || a.n() < 9 || a.n() % 3 != 0 {
        return None;
    }
    let r = (a.n() as u32 - 3) / 3;
    if r < 2 {
        return None;
    }
    let reference = family(Family::MonomialFull, Some(r), None).ok()?;
    let key_set = |arr: &Arrangement| {
        let mut keys: Vec<String> = arr.hyperplanes.iter().map(|h| h.key_string()).collect();
        keys.sort();
        keys
    };
    (key_set(a) == key_set(&reference)).then_some(r)
}

/// Parse a defining polynomial: a `*`-separated product of factors, each either
/// a linear form in variables x1, x2, … with rational coefficients, or a
/// difference of r-th powers `xi^r - xj^r` (expanded into the r linear factors
/// `xi - ζ^k xj`, k = 1..r). `dim` may force an ambient dimension at least as
/// large as any variable used.
pub fn parse_defining_polynomial(
    text: &str,
    dim: Option<usize>,
) -> Result<Arrangement, CoreError> {
    let squeezed: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if squeezed.is_empty() {
        return Err(CoreError::Parse("empty defining polynomial".into()));
    }
    let factor_texts = split_factors(&squeezed)?;

    // First pass: syntactic analysis of each factor, collecting the ambient
    // dimension and the conductor before any hyperplane is materialized.
    enum RawFactor {
        PowerDiff { i: usize, j: usize, r: u32 },
        Linear { coeffs: Vec<(usize, Rat)>, constant: Rat },
    }
    let mut raw = Vec::new();
    let mut max_var = 0usize;
    let mut conductor = 1u32;
    for f in &factor_texts {
        if let Some((i, j, r)) = try_power_difference(f) {
            if i == j {
                return Err(CoreError::Parse(format!(
                    "factor {f} is a power difference of a variable with itself"
                )));
            }
            max_var = max_var.max(i).max(j);
            conductor = num::integer::lcm(conductor, r);
            raw.push(RawFactor::PowerDiff { i, j, r });
        } else {
            let (coeffs, constant) = parse_linear_form(f)?;
            for (v, _) in &coeffs {
                max_var = max_var.max(*v);
            }
            raw.push(RawFactor::Linear { coeffs, constant });
        }
    }
    let ambient = match dim {
        Some(d) if d >= max_var => d,
        Some(d) => {
            return Err(CoreError::Parse(format!(
                "dimension {d} is smaller than the highest variable x{max_var}"
            )))
        }
        None => max_var,
    };
    if ambient == 0 {
        return Err(CoreError::Parse("no variables in defining polynomial".into()));
    }

    // Second pass: materialize hyperplanes in factor order.
    let mut hyperplanes = Vec::new();
    for (pos, rf) in raw.iter().enumerate() {
        match rf {
            RawFactor::PowerDiff { i, j, r } => {
                for k in 1..=*r {
                    let mut normal = vec![Cyclotomic::zero(); ambient];
                    normal[i - 1] = Cyclotomic::one();
                    normal[j - 1] = -Cyclotomic::root_of_unity(*r, k as i64)?;
                    hyperplanes.push(Hyperplane::new(
                        format!("H{i}{j}:{k}"),
                        normal,
                        Cyclotomic::zero(),
                    ));
                }
            }
            RawFactor::Linear { coeffs, constant } => {
                let mut normal = vec![Cyclotomic::zero(); ambient];
                for (v, c) in coeffs {
                    normal[v - 1] = &normal[v - 1] + &Cyclotomic::from_rational(c.clone());
                }
                if normal.iter().all(|c| c.is_zero()) {
                    return Err(CoreError::Parse(format!(
                        "factor {} is constant, not a hyperplane",
                        factor_texts[pos]
                    )));
                }
                // A bare coordinate xi keeps the short label Hi; anything
                // else is labeled by its factor position.
                let label = single_coordinate_label(&normal, constant).unwrap_or_else(|| {
                    format!("L{}", pos + 1)
                });
                hyperplanes.push(Hyperplane::new(
                    label,
                    normal,
                    Cyclotomic::from_rational(constant.clone()),
                ));
            }
        }
    }
    Arrangement::new("parsed", ambient, conductor, hyperplanes)
}

fn single_coordinate_label(normal: &[Cyclotomic], constant: &Rat) -> Option<String> {
    use num::Zero;
    if !constant.is_zero() {
        return None;
    }
    let nonzero: Vec<usize> = (0..normal.len()).filter(|&i| !normal[i].is_zero()).collect();
    if nonzero.len() == 1 && normal[nonzero[0]].is_one() {
        Some(format!("H{}", nonzero[0] + 1))
    } else {
        None
    }
}

/// Split on `*` at parenthesis depth zero and strip one level of enclosing
/// parentheses from each factor.
fn split_factors(s: &str) -> Result<Vec<String>, CoreError> {
    let mut factors = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    for ch in s.chars() {
        match ch {
            '(' => {
                depth += 1;
                current.push(ch);
            }
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(CoreError::Parse("unbalanced parentheses".into()));
                }
                current.push(ch);
            }
            '*' if depth == 0 => {
                factors.push(std::mem::take(&mut current));
            }
            _ => current.push(ch),
        }
    }
    if depth != 0 {
        return Err(CoreError::Parse("unbalanced parentheses".into()));
    }
    factors.push(current);
    let mut out = Vec::new();
    for f in factors {
        if f.is_empty() {
            return Err(CoreError::Parse("empty factor".into()));
        }
        out.push(strip_parens(&f).to_string());
    }
    Ok(out)
}

fn strip_parens(s: &str) -> &str {
    let mut out = s;
    loop {
        let bytes = out.as_bytes();
        if bytes.len() >= 2 && bytes[0] == b'(' && bytes[bytes.len() - 1] == b')' {
            // Only strip when the parens actually wrap the whole factor.
            let mut depth = 0i32;
            let mut wraps = true;
            for (i, ch) in out.char_indices() {
                match ch {
                    '(' => depth += 1,
                    ')' => {
                        depth -= 1;
                        if depth == 0 && i != out.len() - 1 {
                            wraps = false;
                            break;
                        }
                    }
                    _ => {}
                }
            }
            if wraps {
                out = &out[1..out.len() - 1];
                continue;
            }
        }
        return out;
    }
}

/// Recognize `xi^r-xj^r` exactly (whitespace already removed).
fn try_power_difference(s: &str) -> Option<(usize, usize, u32)> {
    let rest = s.strip_prefix('x')?;
    let (i, rest) = take_number(rest)?;
    let rest = rest.strip_prefix('^')?;
    let (r1, rest) = take_number(rest)?;
    let rest = rest.strip_prefix('-')?;
    let rest = rest.strip_prefix('x')?;
    let (j, rest) = take_number(rest)?;
    let rest = rest.strip_prefix('^')?;
    let (r2, rest) = take_number(rest)?;
    if !rest.is_empty() || r1 != r2 || r1 < 2 {
        return None;
    }
    Some((i as usize, j as usize, r1 as u32))
}

fn take_number(s: &str) -> Option<(u64, &str)> {
    let end = s.find(|c: char| !c.is_ascii_digit()).unwrap_or(s.len());
    if end == 0 {
        return None;
    }
    let n: u64 = s[..end].parse().ok()?;
    Some((n, &s[end..]))
}

/// Parse a linear form with rational coefficients into (variable, coefficient)
/// pairs plus a constant term. Accepts terms like `x1`, `-x2`, `3*x1`, `-1/2*x3`,
/// `+5`, `7/3`.
fn parse_linear_form(s: &str) -> Result<(Vec<(usize, Rat)>, Rat), CoreError> {
    use num::Zero;
    let mut coeffs: Vec<(usize, Rat)> = Vec::new();
    let mut constant = Rat::zero();
    let err = |msg: &str| CoreError::Parse(format!("cannot parse factor {s:?}: {msg}"));

    // Split into signed terms at top level (no parens inside a linear form).
    if s.contains('(') || s.contains(')') {
        return Err(err("unexpected parentheses (nonlinear factor?)"));
    }
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut current = String::new();
    let mut sign = true;
    let mut started = false;
    for ch in s.chars() {
        match ch {
            '+' | '-' if started => {
                terms.push((sign, std::mem::take(&mut current)));
                sign = ch == '+';
            }
            '+' if !started => {
                started = true;
            }
            '-' if !started => {
                sign = false;
                started = true;
            }
            _ => {
                started = true;
                current.push(ch);
            }
        }
    }
    terms.push((sign, current));

    for (positive, term) in terms {
        if term.is_empty() {
            return Err(err("empty term"));
        }
        // term shapes: [coef*]x<i> | x<i> | coef
        let (coef_text, var_text) = match term.find('x') {
            Some(pos) => {
                let c = &term[..pos];
                let c = c.strip_suffix('*').unwrap_or(c);
                (c, Some(&term[pos..]))
            }
            None => (term.as_str(), None),
        };
        let mut coef = if coef_text.is_empty() {
            Rat::from_integer(1.into())
        } else {
            charvar_exact::parse_rational(coef_text)
                .map_err(|e| err(&format!("bad coefficient {coef_text:?}: {e}")))?
        };
        if !positive {
            coef = -coef;
        }
        match var_text {
            Some(v) => {
                let rest = v.strip_prefix('x').unwrap();
                let (idx, tail) = take_number(rest).ok_or_else(|| err("bad variable"))?;
                if !tail.is_empty() {
                    return Err(err("trailing characters after variable (nonlinear factor?)"));
                }
                if idx == 0 {
                    return Err(err("variables are numbered from x1"));
                }
                coeffs.push((idx as usize, coef));
            }
            None => constant += coef,
        }
    }

    // Merge repeated variables.
    coeffs.sort_by_key(|(v, _)| *v);
    let mut merged: Vec<(usize, Rat)> = Vec::new();
    for (v, c) in coeffs {
        match merged.last_mut() {
            Some((lv, lc)) if *lv == v => *lc += c,
            _ => merged.push((v, c)),
        }
    }
    merged.retain(|(_, c)| !c.is_zero());
    Ok((merged, constant))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> Cyclotomic {
        Cyclotomic::from_i64(n)
    }

    #[test]
    fn parses_the_rank3_monomial_arrangement() {
        let a = parse_defining_polynomial(
            "x1*x2*x3*(x1^2-x2^2)*(x1^2-x3^2)*(x2^2-x3^2)",
            None,
        )
        .unwrap();
        assert_eq!(a.n(), 9);
        assert_eq!(a.ambient_dim, 3);
        assert_eq!(a.conductor, 2);
        let labels: Vec<&str> = a.hyperplanes.iter().map(|h| h.label.as_str()).collect();
        assert_eq!(
            labels,
            [
                "H1", "H2", "H3", "H12:1", "H12:2", "H13:1", "H13:2", "H23:1", "H23:2"
            ]
        );
        // H12:1 is x1 - ζ_2 x2 = x1 + x2; H12:2 is x1 - x2.
        assert_eq!(a.hyperplanes[3].normal, vec![rat(1), rat(1), rat(0)]);
        assert_eq!(a.hyperplanes[4].normal, vec![rat(1), rat(-1), rat(0)]);
    }

    #[test]
    fn parses_single_variable_and_infers_dimension() {
        let a = parse_defining_polynomial("x1", None).unwrap();
        assert_eq!(a.n(), 1);
        assert_eq!(a.ambient_dim, 1);
        assert_eq!(a.hyperplanes[0].label, "H1");
        let b = parse_defining_polynomial("x1", Some(3)).unwrap();
        assert_eq!(b.ambient_dim, 3);
    }

    #[test]
    fn parses_the_deleted_monomial_arrangement() {
        let a =
            parse_defining_polynomial("x1*x2*(x1^3-x2^3)*(x1^3-x3^3)*(x2^3-x3^3)", None).unwrap();
        assert_eq!(a.n(), 11);
        assert_eq!(a.conductor, 3);
    }

    #[test]
    fn family_agrees_with_parser() {
        for r in 2..=4u32 {
            let fam = family(Family::MonomialFull, Some(r), None).unwrap();
            let txt = format!("x1*x2*x3*(x1^{r}-x2^{r})*(x1^{r}-x3^{r})*(x2^{r}-x3^{r})");
            let parsed = parse_defining_polynomial(&txt, None).unwrap();
            assert!(fam.same_hyperplanes(&parsed), "full, r = {r}");
            assert_eq!(fam.n(), (3 * r + 3) as usize);

            let fam = family(Family::MonomialDeletion, Some(r), None).unwrap();
            let txt = format!("x1*x2*(x1^{r}-x2^{r})*(x1^{r}-x3^{r})*(x2^{r}-x3^{r})");
            let parsed = parse_defining_polynomial(&txt, None).unwrap();
            assert!(fam.same_hyperplanes(&parsed), "deletion, r = {r}");
            assert_eq!(fam.n(), (3 * r + 2) as usize);
        }
    }

    #[test]
    fn other_families() {
        let b = family(Family::Boolean, None, Some(3)).unwrap();
        assert_eq!(b.n(), 3);
        assert!(b.is_central());
        let br = family(Family::Braid, None, Some(4)).unwrap();
        assert_eq!(br.n(), 6);
        assert!(family(Family::MonomialFull, Some(1), None).is_err());
        assert!(Family::parse("nonsense").is_err());
    }

    #[test]
    fn parser_rejects_bad_input() {
        assert!(parse_defining_polynomial("x1*x1", None).is_err(), "duplicate");
        assert!(
            parse_defining_polynomial("x1*(2*x1)", None).is_err(),
            "projective duplicate"
        );
        assert!(
            parse_defining_polynomial("x1^2+x2^2", None).is_err(),
            "nonlinear irreducible factor"
        );
        assert!(parse_defining_polynomial("x1*(x1^2-x1^2)", None).is_err());
        assert!(parse_defining_polynomial("3", None).is_err(), "constant factor");
        assert!(parse_defining_polynomial("x1*", None).is_err(), "empty factor");
    }

    #[test]
    fn parses_general_linear_forms() {
        let a = parse_defining_polynomial("(x1+2*x2-1)*(x1-1/2*x2)*x2", None).unwrap();
        assert_eq!(a.n(), 3);
        let labels: Vec<&str> = a.hyperplanes.iter().map(|h| h.label.as_str()).collect();
        assert_eq!(labels, ["L1", "L2", "H2"]);
        assert!(!a.is_central());
        assert_eq!(a.hyperplanes[0].constant, rat(-1));
    }

    #[test]
    fn deletion_matches_family() {
        let full = family(Family::MonomialFull, Some(3), None).unwrap();
        let pivot = full.index_of_label("H3").unwrap();
        let del = full.delete(pivot).unwrap();
        let dfam = family(Family::MonomialDeletion, Some(3), None).unwrap();
        assert!(del.same_hyperplanes(&dfam));
    }

    #[test]
    fn restriction_of_the_monomial_family_has_aggregated_traces() {
        for r in [2u32, 3] {
            let full = family(Family::MonomialFull, Some(r), None).unwrap();
            let pivot = full.index_of_label("H3").unwrap();
            let t = Triple::build(&full, pivot).unwrap();
            assert_eq!(t.restricted.n(), (r + 2) as usize);
            let labels: Vec<&str> = t
                .restricted
                .hyperplanes
                .iter()
                .map(|h| h.label.as_str())
                .collect();
            assert_eq!(labels[0], "H1''");
            assert_eq!(labels[1], "H2''");
            assert_eq!(labels[2], "H12:1''");
            // trace(H1'') = {H1, H13:1..r} as indices into the deleted list
            let deleted_labels: Vec<&str> = t
                .deleted
                .hyperplanes
                .iter()
                .map(|h| h.label.as_str())
                .collect();
            let trace_labels: Vec<&str> =
                t.trace[0].iter().map(|&j| deleted_labels[j]).collect();
            let mut expected = vec!["H1".to_string()];
            for k in 1..=r {
                expected.push(format!("H13:{k}"));
            }
            assert_eq!(trace_labels, expected);
            // trace sets partition the deleted arrangement
            let total: usize = t.trace.iter().map(|g| g.len()).sum();
            assert_eq!(total, t.deleted.n());
        }
    }

    #[test]
    fn boolean_triple_restricts_to_a_point() {
        let b = family(Family::Boolean, None, Some(2)).unwrap();
        let t = Triple::build(&b, 0).unwrap();
        assert_eq!(t.restricted.n(), 1);
        assert_eq!(t.restricted.ambient_dim, 1);
    }

    #[test]
    fn decone_of_the_deleted_monomial_r2() {
        let d2 = family(Family::MonomialDeletion, Some(2), None).unwrap();
        let pivot = d2.index_of_label("H1").unwrap();
        let dec = d2.decone(pivot).unwrap();
        assert_eq!(dec.n(), 7);
        assert_eq!(dec.ambient_dim, 2);
        assert!(!dec.is_central());
        // All coefficients are rational (r = 2), so the lines are real.
        for h in &dec.hyperplanes {
            assert!(h.normal.iter().all(|c| c.is_rational()));
            assert!(h.constant.is_rational());
        }
        // H2 deconed is the line x2 = 0 in coordinates (x2, x3).
        assert_eq!(dec.hyperplanes[0].label, "H2");
        assert_eq!(dec.hyperplanes[0].normal, vec![rat(1), rat(0)]);
        assert!(dec.hyperplanes[0].constant.is_zero());
        // H12:1 = x1 + x2 deconed to x2 + 1 = 0.
        assert_eq!(dec.hyperplanes[1].label, "H12:1");
        assert_eq!(dec.hyperplanes[1].normal, vec![rat(1), rat(0)]);
        assert_eq!(dec.hyperplanes[1].constant, rat(1));
    }

    #[test]
    fn decone_of_boolean_is_a_point() {
        let b = family(Family::Boolean, None, Some(2)).unwrap();
        let dec = b.decone(0).unwrap();
        assert_eq!(dec.n(), 1);
        assert_eq!(dec.ambient_dim, 1);
        assert!(b.decone(5).is_err());
        let affine = parse_defining_polynomial("(x1-1)*x1", None).unwrap();
        assert!(matches!(affine.decone(0), Err(CoreError::NotCentral)));
    }

    #[test]
    fn cone_inverts_decone_up_to_relabeling() {
        let d2 = family(Family::MonomialDeletion, Some(2), None).unwrap();
        let dec = d2.decone(0).unwrap();
        let coned = dec.cone().unwrap();
        assert_eq!(coned.n(), d2.n());
        assert!(coned.is_central());
    }

    #[test]
    fn arrangement_json_round_trip() {
        let a = family(Family::MonomialDeletion, Some(2), None).unwrap();
        let json = serde_json::to_string(&a).unwrap();
        let back: Arrangement = serde_json::from_str(&json).unwrap();
        assert!(a.same_hyperplanes(&back));
        assert_eq!(serde_json::to_string(&back).unwrap(), json);
    }
}
