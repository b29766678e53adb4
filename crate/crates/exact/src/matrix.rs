//! Exact rank computation for matrices over ℚ(ζ)(u, v) and over ℚ(ζ).
//!
//! [`ExactMatrix`] holds rational-function entries; its rank routine first clears
//! denominators row by row (a nonzero field scaling, so rank is preserved) and
//! then runs fraction-free Bareiss elimination over the polynomial ring, where
//! every division is exact by the Sylvester determinant identity. [`CycloMatrix`]
//! holds scalar cyclotomic entries and uses ordinary Gaussian elimination over the
//! field, which is the fast path for matrices specialized at a concrete character.

use crate::cyclotomic::Cyclotomic;
use crate::poly::MPoly;
use crate::ratfunc::RatFunc;
use crate::ExactError;

/// Dense matrix over the rational-function field ℚ(ζ)(u, v).
#[derive(Clone, Debug, PartialEq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<RatFunc>,
}

impl ExactMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![RatFunc::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<RatFunc>>) -> Result<Self, ExactError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(ExactError::RaggedMatrix);
        }
        Ok(ExactMatrix {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RatFunc {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: RatFunc) {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        self.data[i * self.cols + j] = value;
    }

    /// Specialize every entry at `(u0, v0)`; errors if any entry has a pole there.
    pub fn eval(&self, u0: &Cyclotomic, v0: &Cyclotomic) -> Result<CycloMatrix, ExactError> {
        let mut data = Vec::with_capacity(self.data.len());
        for entry in &self.data {
            data.push(entry.eval(u0, v0)?);
        }
        Ok(CycloMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Rank over the field ℚ(ζ)(u, v), computed fraction-free.
    pub fn rank(&self) -> usize {
        // Clear denominators within each row: multiply row i by the lcm of its
        // entry denominators. This is multiplication by a nonzero scalar of the
        // fraction field, so the rank does not change.
        let mut m: Vec<Vec<MPoly>> = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let entries = &self.data[i * self.cols..(i + 1) * self.cols];
            let mut l = MPoly::one();
            for e in entries {
                let d = e.den();
                let g = MPoly::gcd(&l, d);
                l = &l * &d.exact_div(&g);
            }
            m.push(
                entries
                    .iter()
                    .map(|e| e.num() * &l.exact_div(e.den()))
                    .collect(),
            );
        }
        bareiss_rank(m, self.cols)
    }
}

/// Fraction-free Gaussian elimination (Bareiss). Consumes a polynomial matrix.
fn bareiss_rank(mut m: Vec<Vec<MPoly>>, cols: usize) -> usize {
    let rows = m.len();
    let mut prev = MPoly::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        for i in rank + 1..rows {
            for j in col + 1..cols {
                let t = &(&m[rank][col] * &m[i][j]) - &(&m[i][col] * &m[rank][j]);
                m[i][j] = t.exact_div(&prev);
            }
            m[i][col] = MPoly::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Dense matrix over the scalar field ℚ(ζ).
#[derive(Clone, Debug, PartialEq)]
pub struct CycloMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Cyclotomic>,
}

impl CycloMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        CycloMatrix {
            rows,
            cols,
            data: vec![Cyclotomic::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Cyclotomic>>) -> Result<Self, ExactError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(ExactError::RaggedMatrix);
        }
        Ok(CycloMatrix {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Cyclotomic {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Cyclotomic) {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        self.data[i * self.cols + j] = value;
    }

    /// Rank by Gaussian elimination over the field.
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<Cyclotomic>> = (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect();
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(pivot) = (rank..self.rows).find(|&i| !m[i][col].is_zero()) else {
                continue;
            };
            m.swap(rank, pivot);
            let inv = m[rank][col].checked_inv().expect("nonzero pivot");
            for j in col..self.cols {
                m[rank][j] = &m[rank][j] * &inv;
            }
            for i in 0..self.rows {
                if i == rank || m[i][col].is_zero() {
                    continue;
                }
                let factor = m[i][col].clone();
                for j in col..self.cols {
                    let t = &factor * &m[rank][j];
                    m[i][j] = &m[i][j] - &t;
                }
            }
            rank += 1;
        }
        rank
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rf(n: i64) -> RatFunc {
        RatFunc::from_i64(n)
    }

    fn u() -> RatFunc {
        RatFunc::var_u()
    }

    fn v() -> RatFunc {
        RatFunc::var_v()
    }

    /// Straightforward Gaussian elimination over the rational-function field,
    /// used as an independent check on the fraction-free path.
    fn gauss_rank_oracle(m: &ExactMatrix) -> usize {
        let mut rows: Vec<Vec<RatFunc>> = (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| m.get(i, j).clone()).collect())
            .collect();
        let mut rank = 0;
        for col in 0..m.cols() {
            if rank == rows.len() {
                break;
            }
            let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
                continue;
            };
            rows.swap(rank, p);
            let piv = rows[rank][col].clone();
            for j in col..m.cols() {
                rows[rank][j] = &rows[rank][j] / &piv;
            }
            for i in 0..rows.len() {
                if i == rank || rows[i][col].is_zero() {
                    continue;
                }
                let f = rows[i][col].clone();
                for j in col..m.cols() {
                    let t = &f * &rows[rank][j];
                    rows[i][j] = &rows[i][j] - &t;
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn rank_of_identity_and_zero() {
        let mut id = ExactMatrix::zero(3, 3);
        for i in 0..3 {
            id.set(i, i, rf(1));
        }
        assert_eq!(id.rank(), 3);
        assert_eq!(ExactMatrix::zero(4, 2).rank(), 0);
        assert_eq!(ExactMatrix::zero(0, 5).rank(), 0);
    }

    #[test]
    fn rank_of_singular_rational_matrix() {
        // row3 = row1 + row2
        let m = ExactMatrix::from_rows(vec![
            vec![rf(1), rf(2), rf(3)],
            vec![rf(4), rf(5), rf(6)],
            vec![rf(5), rf(7), rf(9)],
        ])
        .unwrap();
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn symbolic_rank_sees_dependency() {
        // second row is (u+v) times the first: rank 1 over the function field
        let s = &u() + &v();
        let a = &u() - &rf(1);
        let b = &v() - &rf(1);
        let m = ExactMatrix::from_rows(vec![
            vec![a.clone(), b.clone()],
            vec![&a * &s, &b * &s],
        ])
        .unwrap();
        assert_eq!(m.rank(), 1);
        assert_eq!(gauss_rank_oracle(&m), 1);
    }

    #[test]
    fn rank_with_denominators() {
        // entries with distinct denominators; matrix is invertible
        let m = ExactMatrix::from_rows(vec![
            vec![&rf(1) / &u(), rf(1)],
            vec![rf(1), &rf(1) / &v()],
        ])
        .unwrap();
        assert_eq!(m.rank(), 2);
        // and a rank-1 variant: row2 = u * row1
        let m1 = ExactMatrix::from_rows(vec![
            vec![&rf(1) / &u(), &rf(1) / &(&u() * &v())],
            vec![rf(1), &rf(1) / &v()],
        ])
        .unwrap();
        assert_eq!(m1.rank(), 1);
    }

    #[test]
    fn bareiss_agrees_with_field_gauss_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_cafe);
        for trial in 0..40 {
            let rows = 1 + (trial % 5);
            let cols = 1 + (trial % 4);
            let mut m = ExactMatrix::zero(rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    let c: i64 = rng.gen_range(-3..=3);
                    // sprinkle in symbolic entries
                    let entry = match rng.gen_range(0..4) {
                        0 => &rf(c) * &u(),
                        1 => &rf(c) * &v(),
                        _ => rf(c),
                    };
                    m.set(i, j, entry);
                }
            }
            assert_eq!(m.rank(), gauss_rank_oracle(&m), "trial {trial}");
        }
    }

    #[test]
    fn rank_invariant_under_permutation_and_scaling() {
        let base = ExactMatrix::from_rows(vec![
            vec![u(), v(), rf(1)],
            vec![&u() * &u(), &u() * &v(), u()],
            vec![rf(0), &u() - &v(), rf(2)],
        ])
        .unwrap();
        let r = base.rank();
        assert_eq!(r, 2);

        // permute rows and columns
        let perm = ExactMatrix::from_rows(vec![
            vec![rf(2), rf(0), &u() - &v()],
            vec![rf(1), u(), v()],
            vec![u(), &u() * &u(), &u() * &v()],
        ])
        .unwrap();
        assert_eq!(perm.rank(), r);

        // scale a row and a column by nonzero rational functions
        let scaled = ExactMatrix::from_rows(vec![
            vec![&u() * &v(), &v() * &v(), v()],
            vec![&u() * &u(), &u() * &v(), u()],
            vec![rf(0), &u() - &v(), rf(2)],
        ])
        .unwrap();
        assert_eq!(scaled.rank(), r);
    }

    #[test]
    fn specialization_matches_symbolic_rank_at_generic_point() {
        let m = ExactMatrix::from_rows(vec![
            vec![&u() - &rf(1), &v() - &rf(1)],
            vec![&(&u() * &u()) - &rf(1), &(&v() * &v()) - &rf(1)],
        ])
        .unwrap();
        assert_eq!(m.rank(), 2);
        // at u = v the second row is (u+1) times the first: rank drops
        let z5 = Cyclotomic::root_of_unity(5, 1).unwrap();
        let specialized = m.eval(&z5, &z5).unwrap();
        assert_eq!(specialized.rank(), 1);
        // at a generic pair of roots of unity the full rank is visible
        let z7 = Cyclotomic::root_of_unity(7, 1).unwrap();
        let spec2 = m.eval(&z5, &z7).unwrap();
        assert_eq!(spec2.rank(), 2);
    }

    #[test]
    fn cyclo_matrix_rank() {
        let z = Cyclotomic::root_of_unity(3, 1).unwrap();
        // rows: (1, z), (z^2, 1) — second row is z^2 * first, rank 1
        let m = CycloMatrix::from_rows(vec![
            vec![Cyclotomic::one(), z.clone()],
            vec![z.pow(2).unwrap(), Cyclotomic::one()],
        ])
        .unwrap();
        assert_eq!(m.rank(), 1);

        let mut id = CycloMatrix::zero(3, 3);
        for i in 0..3 {
            id.set(i, i, Cyclotomic::one());
        }
        assert_eq!(id.rank(), 3);
    }
}
