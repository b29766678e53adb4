//! The intersection poset of an arrangement, its Möbius function, and the
//! Poincaré polynomial of the complement.
//!
//! A flat is recorded by the set of hyperplane indices containing the
//! intersection subspace (always closed) together with the subspace's
//! codimension. Flats of affine arrangements are required to be nonempty, so
//! parallel families simply contribute no flat. The Poincaré polynomial is
//! computed as π(A, t) = Σ_X μ(X) (−t)^{rank X} over the poset.

use crate::arrangement::Arrangement;
use charvar_exact::Cyclotomic;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashSet, VecDeque};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flat {
    /// Sorted indices of every hyperplane containing the subspace.
    pub hyperplane_indices: Vec<usize>,
    /// Codimension of the subspace.
    pub rank: usize,
    /// Möbius value μ(0̂, X).
    pub mobius: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Poset {
    /// All flats of rank ≥ 1, sorted by (rank, indices).
    pub flats: Vec<Flat>,
}

/// Incremental reduced row echelon form over the cyclotomic field, on rows of
/// length `width`. Used both for consistency/rank queries and for the closure
/// test (a hyperplane contains the subspace iff its row reduces to zero).
struct Rref {
    width: usize,
    rows: Vec<Vec<Cyclotomic>>,
    pivots: Vec<usize>,
}

impl Rref {
    fn new(width: usize) -> Self {
        Rref {
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    fn reduce(&self, mut row: Vec<Cyclotomic>) -> Vec<Cyclotomic> {
        for (r, &p) in self.pivots.iter().enumerate() {
            if !row[p].is_zero() {
                let factor = row[p].clone();
                for j in 0..self.width {
                    let t = &factor * &self.rows[r][j];
                    row[j] = &row[j] - &t;
                }
            }
        }
        row
    }

    /// Insert a row (reducing it first); returns the new pivot column if the
    /// row was independent.
    fn insert(&mut self, row: Vec<Cyclotomic>) -> Option<usize> {
        let row = self.reduce(row);
        let p = (0..self.width).find(|&j| !row[j].is_zero())?;
        let inv = row[p].checked_inv().expect("nonzero pivot");
        let row: Vec<Cyclotomic> = row.iter().map(|c| c * &inv).collect();
        for r in 0..self.rows.len() {
            if !self.rows[r][p].is_zero() {
                let factor = self.rows[r][p].clone();
                for j in 0..self.width {
                    let t = &factor * &row[j];
                    self.rows[r][j] = &self.rows[r][j] - &t;
                }
            }
        }
        self.rows.push(row);
        self.pivots.push(p);
        Some(p)
    }
}

/// Augmented row (normal, constant) of one hyperplane.
fn aug_row(a: &Arrangement, j: usize) -> Vec<Cyclotomic> {
    let h = &a.hyperplanes[j];
    let mut row = h.normal.clone();
    row.push(h.constant.clone());
    row
}

/// Echelonize the given hyperplanes; `None` if the intersection is empty (a
/// pivot lands in the constant column).
fn echelon_of(a: &Arrangement, subset: &[usize]) -> Option<Rref> {
    let dim = a.ambient_dim;
    let mut rref = Rref::new(dim + 1);
    for &j in subset {
        if let Some(p) = rref.insert(aug_row(a, j)) {
            if p == dim {
                return None;
            }
        }
    }
    Some(rref)
}

impl Poset {
    pub fn build(a: &Arrangement) -> Poset {
        let n = a.n();
        let mut found: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        let mut queue: VecDeque<Vec<usize>> = VecDeque::new();
        let mut tried: HashSet<Vec<usize>> = HashSet::new();

        // Seed with the rank-0 flat (empty set).
        queue.push_back(Vec::new());
        while let Some(base) = queue.pop_front() {
            for j in 0..n {
                if base.binary_search(&j).is_ok() {
                    continue;
                }
                let mut candidate = base.clone();
                let pos = candidate.binary_search(&j).unwrap_err();
                candidate.insert(pos, j);
                if !tried.insert(candidate.clone()) {
                    continue;
                }
                let Some(rref) = echelon_of(a, &candidate) else {
                    continue; // empty intersection
                };
                let rank = rref.pivots.len();
                let closure: Vec<usize> = (0..n)
                    .filter(|&k| {
                        rref.reduce(aug_row(a, k)).iter().all(|c| c.is_zero())
                    })
                    .collect();
                if !found.contains_key(&closure) {
                    found.insert(closure.clone(), rank);
                    queue.push_back(closure);
                }
            }
        }

        // Order by (rank, indices) and compute Möbius values from the bottom.
        let mut ordered: Vec<(Vec<usize>, usize)> = found.into_iter().collect();
        ordered.sort_by(|x, y| (x.1, &x.0).cmp(&(y.1, &y.0)));
        let mut mobius: Vec<i64> = Vec::with_capacity(ordered.len() + 1);
        // Implicit bottom element: the empty flat with μ = 1.
        for i in 0..ordered.len() {
            let mut m = -1i64; // contribution of the bottom flat
            for k in 0..i {
                if is_subset(&ordered[k].0, &ordered[i].0) {
                    m -= mobius[k];
                }
            }
            mobius.push(m);
        }

        Poset {
            flats: ordered
                .into_iter()
                .zip(mobius)
                .map(|((indices, rank), mobius)| Flat {
                    hyperplane_indices: indices,
                    rank,
                    mobius,
                })
                .collect(),
        }
    }

    pub fn rank2_flats(&self) -> impl Iterator<Item = &Flat> {
        self.flats.iter().filter(|f| f.rank == 2)
    }

    /// Poincaré polynomial coefficients, ascending in t.
    pub fn poincare(&self, ambient_dim: usize) -> Vec<i64> {
        let top = self.flats.iter().map(|f| f.rank).max().unwrap_or(0);
        let mut coeffs = vec![0i64; top.max(0).min(ambient_dim) + 1];
        coeffs[0] = 1;
        for f in &self.flats {
            // μ(X)·(−t)^rank contributes μ·(−1)^rank to the t^rank coefficient
            let sign = if f.rank % 2 == 0 { 1 } else { -1 };
            coeffs[f.rank] += sign * f.mobius;
        }
        coeffs
    }

    /// Count of rank-2 flats by multiplicity.
    pub fn rank2_census(&self) -> BTreeMap<usize, usize> {
        let mut census = BTreeMap::new();
        for f in self.rank2_flats() {
            *census.entry(f.hyperplane_indices.len()).or_insert(0) += 1;
        }
        census
    }
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    if small.len() > big.len() {
        return false;
    }
    let mut it = big.iter();
    'outer: for s in small {
        for b in it.by_ref() {
            if b == s {
                continue 'outer;
            }
            if b > s {
                return false;
            }
        }
        return false;
    }
    true
}

/// Poincaré polynomial of the complement, ascending coefficients.
pub fn poincare_polynomial(a: &Arrangement) -> Vec<i64> {
    a.poset().poincare(a.ambient_dim)
}

/// Euler characteristic of the complement: the alternating coefficient sum.
pub fn euler_characteristic(a: &Arrangement) -> i64 {
    poincare_polynomial(a)
        .iter()
        .enumerate()
        .map(|(q, c)| if q % 2 == 0 { *c } else { -*c })
        .sum()
}

/// Format an integer polynomial in t, e.g. "1 + 7t + 12t^2".
pub fn poly_to_string(coeffs: &[i64]) -> String {
    let mut parts = Vec::new();
    for (q, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let term = match q {
            0 => format!("{c}"),
            1 if c == 1 => "t".to_string(),
            1 => format!("{c}t"),
            _ if c == 1 => format!("t^{q}"),
            _ => format!("{c}t^{q}"),
        };
        parts.push(term);
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

/// Multiply two integer polynomials (ascending coefficients).
pub fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// a + t·b, used for the deletion–restriction identity.
pub fn poly_add_shifted(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = a.to_vec();
    if out.len() < b.len() + 1 {
        out.resize(b.len() + 1, 0);
    }
    for (j, y) in b.iter().enumerate() {
        out[j + 1] += y;
    }
    while out.last() == Some(&0) && out.len() > 1 {
        out.pop();
    }
    out
}
