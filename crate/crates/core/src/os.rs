//! The Orlik–Solomon algebra of an arrangement in degrees at most two, the
//! degree-one Aomoto complex, and combinatorial resonance tests.
//!
//! Degree two is presented on the broken-circuit (NBC) basis: for every rank-2
//! flat `X` with minimum element `m`, the monomials `e_m e_j` for `j ∈ X, j ≠ m`
//! are independent, and any other product `e_i e_j` supported on `X` rewrites as
//! `e_m e_j − e_m e_i`.  In an affine arrangement a product over an empty
//! intersection vanishes, which covers parallel hyperplanes.  Summing `|X| − 1`
//! over the rank-2 flats recovers the second Betti number of the complement,
//! which the tests check against the Poincaré polynomial.

use std::collections::BTreeMap;

use charvar_exact::{ExactMatrix, RatFunc};
use serde::{Deserialize, Serialize};

use crate::arrangement::{recognize_monomial_full, Arrangement};
use crate::CoreError;

/// NBC basis of the Orlik–Solomon algebra in degree two, together with the
/// rewriting data needed to expand arbitrary products.
#[derive(Clone, Debug)]
pub struct OsBasis {
    n: usize,
    /// Rank-2 flats as sorted hyperplane index sets.
    flats: Vec<Vec<usize>>,
    /// NBC pairs `(m, j)` with `m < j`, `m` the minimum of the flat through both.
    pairs: Vec<(usize, usize)>,
    pair_index: BTreeMap<(usize, usize), usize>,
    /// The rank-2 flat through each unordered pair of distinct hyperplanes
    /// with non-empty intersection.
    flat_of_pair: BTreeMap<(usize, usize), usize>,
}

impl OsBasis {
    pub fn build(a: &Arrangement) -> OsBasis {
        let mut flats = Vec::new();
        let mut pairs = Vec::new();
        let mut pair_index = BTreeMap::new();
        let mut flat_of_pair = BTreeMap::new();
        for flat in a.poset().rank2_flats() {
            let members = flat.hyperplane_indices.clone();
            let fid = flats.len();
            let m = members[0];
            for &j in &members[1..] {
                pair_index.insert((m, j), pairs.len());
                pairs.push((m, j));
            }
            for (p, &i) in members.iter().enumerate() {
                for &j in &members[p + 1..] {
                    flat_of_pair.insert((i, j), fid);
                }
            }
            flats.push(members);
        }
        OsBasis { n: a.n(), flats, pairs, pair_index, flat_of_pair }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimension of the degree-two component.
    pub fn dim2(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Expand `e_i ∧ e_j` (`i ≠ j`) in the NBC pair basis as a signed support
    /// list `(basis index, ±1)`.  Empty when the two hyperplanes do not meet.
    fn wedge(&self, i: usize, j: usize) -> Vec<(usize, i64)> {
        assert_ne!(i, j, "wedge of a generator with itself");
        if i > j {
            return self.wedge(j, i).into_iter().map(|(k, s)| (k, -s)).collect();
        }
        let Some(&fid) = self.flat_of_pair.get(&(i, j)) else {
            return Vec::new();
        };
        let m = self.flats[fid][0];
        if m == i {
            vec![(self.pair_index[&(i, j)], 1)]
        } else {
            vec![(self.pair_index[&(m, j)], 1), (self.pair_index[&(m, i)], -1)]
        }
    }

    /// Coordinates of `a_λ ∧ e_j` in the NBC pair basis, where
    /// `a_λ = Σ λ_i e_i`.
    fn multiplication_column(&self, lambda: &[RatFunc], j: usize) -> Vec<RatFunc> {
        let mut col = vec![RatFunc::zero(); self.dim2()];
        for (i, li) in lambda.iter().enumerate() {
            if i == j || li.is_zero() {
                continue;
            }
            for (k, sign) in self.wedge(i, j) {
                if sign > 0 {
                    col[k] = &col[k] + li;
                } else {
                    col[k] = &col[k] - li;
                }
            }
        }
        col
    }
}

/// Matrix of `a_λ ∧ − : A¹ → A²` in the generator / NBC-pair bases.
pub fn aomoto_matrix(a: &Arrangement, lambda: &[RatFunc]) -> Result<ExactMatrix, CoreError> {
    let basis = OsBasis::build(a);
    if lambda.len() != basis.n {
        return Err(CoreError::CharacterLength { expected: basis.n, got: lambda.len() });
    }
    let mut m = ExactMatrix::zero(basis.dim2(), basis.n);
    for j in 0..basis.n {
        for (row, entry) in basis.multiplication_column(lambda, j).into_iter().enumerate() {
            m.set(row, j, entry);
        }
    }
    Ok(m)
}

/// Dimension of `H¹` of the Aomoto complex `(A^•, a_λ ∧ −)`.  For `λ = 0` the
/// differential vanishes and `H¹ = A¹`.
pub fn aomoto_h1_dim(a: &Arrangement, lambda: &[RatFunc]) -> Result<usize, CoreError> {
    let m = aomoto_matrix(a, lambda)?;
    if lambda.iter().all(|l| l.is_zero()) {
        return Ok(a.n());
    }
    // ker(A¹ → A²) modulo the line spanned by a_λ itself.
    Ok((a.n() - m.rank()) - 1)
}

/// Outcome of a resonance-membership test `λ ∈ ℛ¹_m`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResonanceMembership {
    pub h1_dim: usize,
    pub threshold: usize,
    pub member: bool,
    pub zero_weight: bool,
}

/// Test whether `dim H¹(A^•, a_λ) ≥ m`.  The zero weight is flagged separately
/// since every depth is met degenerately there.
pub fn resonance_membership(
    a: &Arrangement,
    lambda: &[RatFunc],
    m: usize,
) -> Result<ResonanceMembership, CoreError> {
    let h1 = aomoto_h1_dim(a, lambda)?;
    Ok(ResonanceMembership {
        h1_dim: h1,
        threshold: m,
        member: h1 >= m,
        zero_weight: lambda.iter().all(|l| l.is_zero()),
    })
}

/// Local resonance components: one for each rank-2 flat with at least three
/// members, of dimension `|X| − 1`.
pub fn local_components(a: &Arrangement) -> Vec<(Vec<usize>, usize)> {
    a.poset()
        .rank2_flats()
        .filter(|f| f.hyperplane_indices.len() >= 3)
        .map(|f| (f.hyperplane_indices.clone(), f.hyperplane_indices.len() - 1))
        .collect()
}

/// A set partition of the hyperplane indices `0..n`, stored as sorted blocks
/// sorted by their minima.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    pub blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(mut blocks: Vec<Vec<usize>>) -> Partition {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.retain(|b| !b.is_empty());
        blocks.sort();
        Partition { blocks }
    }

    /// The one-block partition and the all-singletons partition carry no
    /// combinatorial information.
    pub fn is_trivial(&self) -> bool {
        self.blocks.len() == 1 || self.blocks.iter().all(|b| b.len() == 1)
    }
}

/// A partition `π` is neighborly when every rank-2 flat `X` with
/// `|X ∖ B| ≤ 1` for some block `B` is contained in that block.
/// Equivalently: no block misses exactly one element of any rank-2 flat.
pub fn is_neighborly(a: &Arrangement, p: &Partition) -> Result<bool, CoreError> {
    let mut seen = vec![false; a.n()];
    for b in &p.blocks {
        for &i in b {
            if i >= a.n() || seen[i] {
                return Err(CoreError::Parse(format!(
                    "partition is not a partition of 0..{}",
                    a.n()
                )));
            }
            seen[i] = true;
        }
    }
    if !seen.iter().all(|&s| s) {
        return Err(CoreError::Parse(format!("partition is not a partition of 0..{}", a.n())));
    }
    for flat in a.poset().rank2_flats() {
        let members = &flat.hyperplane_indices;
        for block in &p.blocks {
            let outside = members.iter().filter(|i| !block.contains(i)).count();
            if outside == 1 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// How the partition enumeration is allowed to behave on large inputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    /// Fail with a size-bound error instead of returning an incomplete answer.
    Exhaustive,
    /// Run within a node budget and flag whether the enumeration completed.
    Pruned,
}

/// Result of a neighborly-partition enumeration.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PartitionSearch {
    pub partitions: Vec<Partition>,
    /// True when the enumeration provably visited every candidate.
    pub exhaustive: bool,
    /// Number of elements after contracting forced merges.
    pub quotient_size: usize,
    /// Number of assignment nodes visited.
    pub nodes: u64,
}

const NODE_BUDGET: u64 = 20_000_000;

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// A rank-2 flat projected to the quotient: weighted classes and the largest
/// class index, at which point the flat is fully assigned during the search.
struct QuotientFlat {
    classes: Vec<(usize, usize)>,
    total: usize,
}

struct PartitionEnum<'a> {
    classes: &'a [Vec<usize>],
    flats_by_last: Vec<Vec<QuotientFlat>>,
    assignment: Vec<usize>,
    nodes: u64,
    budget: u64,
    truncated: bool,
    found: Vec<Partition>,
}


impl PartitionEnum<'_> {
    fn violates(&self, flat: &QuotientFlat) -> bool {
        // A block B violates neighborliness at X exactly when it misses one
        // element: Σ_{c ∈ X̃, c ⊄ B} w_c = 1.  Blocks disjoint from X̃ miss
        // at least two elements, so only the blocks of X̃'s own classes need
        // checking.
        for &(probe, _) in &flat.classes {
            let block = self.assignment[probe];
            let inside: usize = flat
                .classes
                .iter()
                .filter(|(c, _)| self.assignment[*c] == block)
                .map(|(_, w)| *w)
                .sum();
            if flat.total - inside == 1 {
                return true;
            }
        }
        false
    }

    fn extend(&mut self, i: usize, max_used: usize) {
        if self.truncated {
            return;
        }
        if i == self.classes.len() {
            let mut blocks = vec![Vec::new(); max_used + 1];
            for (c, &b) in self.assignment.iter().enumerate() {
                blocks[b].extend(self.classes[c].iter().copied());
            }
            let p = Partition::new(blocks);
            if !p.is_trivial() {
                self.found.push(p);
            }
            return;
        }
        for b in 0..=max_used + 1 {
            self.nodes += 1;
            if self.nodes > self.budget {
                self.truncated = true;
                return;
            }
            self.assignment[i] = b;
            if !self.flats_by_last[i].iter().any(|f| self.violates(f)) {
                self.extend(i + 1, max_used.max(b));
            }
        }
    }
}

/// Enumerate all non-trivial neighborly partitions.
///
/// Rank-2 flats of size two force their members into a common block (a block
/// containing exactly one of the two misses exactly one element), so the
/// search runs over the quotient by those merges; every neighborly partition
/// is a union of quotient classes and the correspondence preserves
/// neighborliness.  In `Exhaustive` mode the input must have at most `cap`
/// hyperplanes or at most `cap` quotient classes.
pub fn neighborly_partitions(
    a: &Arrangement,
    mode: SearchMode,
    cap: usize,
) -> Result<PartitionSearch, CoreError> {
    let n = a.n();
    let mut uf = UnionFind::new(n);
    for flat in a.poset().rank2_flats() {
        if flat.hyperplane_indices.len() == 2 {
            uf.union(flat.hyperplane_indices[0], flat.hyperplane_indices[1]);
        }
    }
    let mut class_of = vec![0usize; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut root_to_class: BTreeMap<usize, usize> = BTreeMap::new();
    for i in 0..n {
        let r = uf.find(i);
        let c = *root_to_class.entry(r).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        class_of[i] = c;
        classes[c].push(i);
    }
    let q = classes.len();
    if mode == SearchMode::Exhaustive && n > cap && q > cap {
        return Err(CoreError::SizeBound(format!(
            "exhaustive partition search needs at most {cap} hyperplanes or quotient classes, \
             got {n} hyperplanes and {q} classes"
        )));
    }

    let mut flats_by_last: Vec<Vec<QuotientFlat>> = (0..q).map(|_| Vec::new()).collect();
    for flat in a.poset().rank2_flats() {
        let mut weights: BTreeMap<usize, usize> = BTreeMap::new();
        for &i in &flat.hyperplane_indices {
            *weights.entry(class_of[i]).or_insert(0) += 1;
        }
        if weights.len() < 2 {
            // Entirely inside one class: every block misses it fully or not at
            // all, so it can never be violated.
            continue;
        }
        let flat_classes: Vec<(usize, usize)> = weights.into_iter().collect();
        let total = flat.hyperplane_indices.len();
        let last = flat_classes.last().unwrap().0;
        flats_by_last[last].push(QuotientFlat { classes: flat_classes, total });
    }

    let mut search = PartitionEnum {
        classes: &classes,
        flats_by_last,
        assignment: vec![0; q],
        nodes: 0,
        budget: NODE_BUDGET,
        truncated: false,
        found: Vec::new(),
    };
    if q > 0 {
        // Class 0 always opens block 0; multi-class flats never complete at
        // index 0, so recursion starts directly at index 1.
        search.nodes += 1;
        search.extend(1, 0);
    }
    let mut partitions = search.found;
    partitions.sort();
    partitions.dedup();
    Ok(PartitionSearch {
        partitions,
        exhaustive: !search.truncated,
        quotient_size: q,
        nodes: search.nodes,
    })
}

/// Verdict of the combinatorial essential-resonance test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResonanceOutcome {
    Established,
    Excluded,
    Unresolved,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResonanceVerdict {
    pub outcome: ResonanceOutcome,
    /// Which decision rule fired.
    pub rule: String,
    pub detail: String,
    pub local_components: Vec<(Vec<usize>, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partitions: Option<PartitionSearch>,
}

/// Decide, when possible, whether the first resonance variety has an essential
/// component (one not contained in any coordinate hyperplane `λ_i = 0`).
///
/// Rules, in order:
///  * a pencil (a rank-2 flat containing every hyperplane) is an essential
///    local component;
///  * the full monomial arrangement is recognized up to relabeling; its first
///    characteristic variety contains essential positive-dimensional
///    components through the identity (Cohen–Suciu, *Characteristic varieties
///    of arrangements*, 1999) whose tangent cones are essential resonance
///    components;
///  * with a complete enumeration showing no non-trivial neighborly partition,
///    every resonance component is local (Falk, *Arrangements and cohomology*,
///    1997), and a local component at `X` is essential only when `X` meets
///    every hyperplane — the pencil case already excluded;
///  * otherwise the test is inconclusive: a surviving neighborly partition is
///    necessary but not sufficient for a non-local component.
pub fn essential_resonance_exists(a: &Arrangement, cap: usize) -> Result<ResonanceVerdict, CoreError> {
    let locals = local_components(a);
    if let Some((_, dim)) = locals.iter().find(|(flat, _)| flat.len() == a.n()) {
        return Ok(ResonanceVerdict {
            outcome: ResonanceOutcome::Established,
            rule: "local-pencil".into(),
            detail: format!(
                "all {} hyperplanes pass through one rank-2 flat; the local component has dimension {}",
                a.n(),
                dim
            ),
            local_components: locals.clone(),
            partitions: None,
        });
    }
    if let Some(r) = recognize_monomial_full(a) {
        return Ok(ResonanceVerdict {
            outcome: ResonanceOutcome::Established,
            rule: "monomial-tangent-cone".into(),
            detail: format!(
                "arrangement matches the full monomial arrangement with r = {r}; its first \
                 characteristic variety contains essential positive-dimensional components \
                 through the identity (Cohen–Suciu 1999), whose tangent cones are essential \
                 resonance components"
            ),
            local_components: locals,
            partitions: None,
        });
    }
    let search = neighborly_partitions(a, SearchMode::Pruned, cap)?;
    if search.exhaustive && search.partitions.is_empty() {
        return Ok(ResonanceVerdict {
            outcome: ResonanceOutcome::Excluded,
            rule: "no-neighborly-partition".into(),
            detail: format!(
                "complete enumeration over {} quotient classes found no non-trivial neighborly \
                 partition, so every component of the first resonance variety is local (Falk \
                 1997), and no rank-2 flat meets all {} hyperplanes",
                search.quotient_size,
                a.n()
            ),
            local_components: locals,
            partitions: Some(search),
        });
    }
    let rule = if search.exhaustive { "neighborly-partitions-found" } else { "search-truncated" };
    let detail = if search.exhaustive {
        format!(
            "{} non-trivial neighborly partitions survive; their existence is necessary but \
             not sufficient for an essential non-local component",
            search.partitions.len()
        )
    } else {
        "partition enumeration exceeded its node budget; no completeness guarantee".into()
    };
    Ok(ResonanceVerdict {
        outcome: ResonanceOutcome::Unresolved,
        rule: rule.into(),
        detail,
        local_components: locals,
        partitions: Some(search),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{family, parse_defining_polynomial, Arrangement, Family};
    use charvar_exact::Cyclotomic;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn monomial_full(r: u32) -> Arrangement {
        family(Family::MonomialFull, Some(r), None).unwrap()
    }

    fn monomial_deleted(r: u32) -> Arrangement {
        family(Family::MonomialDeletion, Some(r), None).unwrap()
    }

    fn rat(n: i64) -> RatFunc {
        RatFunc::from_i64(n)
    }

    fn rational_weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<RatFunc> {
        (0..n)
            .map(|_| {
                let num = rng.gen_range(-9i64..=9);
                let den = rng.gen_range(1i64..=4);
                let q = num::BigRational::new(num.into(), den.into());
                RatFunc::constant(Cyclotomic::from_rational(q))
            })
            .collect()
    }

    #[test]
    fn degree_two_dimension_matches_second_betti_number() {
        for a in [monomial_full(2), monomial_full(3), monomial_deleted(2), monomial_deleted(3)] {
            let basis = OsBasis::build(&a);
            let poincare = crate::lattice::poincare_polynomial(&a);
            assert_eq!(basis.dim2() as i64, poincare[2], "arrangement {}", a.name);
        }
    }

    #[test]
    fn zero_weight_gives_full_h1() {
        let a = monomial_deleted(2);
        let lambda = vec![RatFunc::zero(); a.n()];
        assert_eq!(aomoto_h1_dim(&a, &lambda).unwrap(), a.n());
    }

    #[test]
    fn square_of_degree_one_element_vanishes() {
        // a_λ ∧ a_λ = 0 must come out of the NBC rewriting identically.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for a in [monomial_full(2), monomial_deleted(2)] {
            let basis = OsBasis::build(&a);
            for _ in 0..10 {
                let lambda = rational_weights(&mut rng, a.n());
                let mut square = vec![RatFunc::zero(); basis.dim2()];
                for (j, lj) in lambda.iter().enumerate() {
                    if lj.is_zero() {
                        continue;
                    }
                    for (k, entry) in basis.multiplication_column(&lambda, j).into_iter().enumerate()
                    {
                        square[k] = &square[k] + &(&entry * lj);
                    }
                }
                assert!(square.iter().all(|c| c.is_zero()));
            }
        }
    }

    #[test]
    fn pencil_of_three_lines_with_symbolic_weight() {
        // Three concurrent lines in the plane; the symbolic weight (1, t, −1−t)
        // sums to zero for every t, and H¹ of the Aomoto complex is a line.
        let central = parse_defining_polynomial("x1*x2*(x1+x2)", Some(2)).unwrap();
        assert!(central.is_central());
        let t = RatFunc::var_u();
        let minus_one_minus_t = &(-RatFunc::one()) - &t;
        let lambda = vec![RatFunc::one(), t, minus_one_minus_t];
        assert_eq!(aomoto_h1_dim(&central, &lambda).unwrap(), 1);
    }

    #[test]
    fn pencil_membership_at_cube_roots_of_unity() {
        let central = parse_defining_polynomial("x1*x2*(x1+x2)", Some(2)).unwrap();
        let zeta = Cyclotomic::root_of_unity(3, 1).unwrap();
        let zeta2 = Cyclotomic::root_of_unity(3, 2).unwrap();
        let lambda = vec![
            RatFunc::one(),
            RatFunc::constant(zeta),
            RatFunc::constant(zeta2),
        ];
        let m = resonance_membership(&central, &lambda, 1).unwrap();
        assert!(m.member);
        assert_eq!(m.h1_dim, 1);
        assert!(!m.zero_weight);
    }

    #[test]
    fn generic_weights_are_not_resonant() {
        // Generic means: non-zero sum overall and on every rank-2 flat.
        let a = monomial_deleted(2);
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut tested = 0;
        'outer: while tested < 5 {
            let lambda = rational_weights(&mut rng, a.n());
            let total = lambda.iter().fold(RatFunc::zero(), |acc, l| &acc + l);
            if total.is_zero() {
                continue;
            }
            for flat in a.poset().rank2_flats() {
                let s = flat
                    .hyperplane_indices
                    .iter()
                    .fold(RatFunc::zero(), |acc, &i| &acc + &lambda[i]);
                if s.is_zero() {
                    continue 'outer;
                }
            }
            assert_eq!(aomoto_h1_dim(&a, &lambda).unwrap(), 0);
            tested += 1;
        }
    }

    #[test]
    fn weight_supported_on_double_flat_is_not_resonant() {
        // {H1, H23:1} is a rank-2 flat of size two; weights (1, −1) on it sum
        // to zero but multiplicity two is too small for resonance.
        let a = monomial_deleted(2);
        let i = a.index_of_label("H1").unwrap();
        let j = a.index_of_label("H23:1").unwrap();
        let mut lambda = vec![RatFunc::zero(); a.n()];
        lambda[i] = rat(1);
        lambda[j] = rat(-1);
        let m = resonance_membership(&a, &lambda, 1).unwrap();
        assert!(!m.member);
        assert_eq!(m.h1_dim, 0);
    }

    #[test]
    fn parallel_pencil_resonates_in_the_affine_algebra() {
        // x1 and x1 − 1 are parallel: their wedge vanishes, and together with
        // the line at infinity they form a pencil of three.  The weight
        // (1, −1, 0) is resonant on the coned arrangement and the affine
        // Aomoto complex sees the same H¹.
        let affine = parse_defining_polynomial("x1*(x1-1)*x2", Some(2)).unwrap();
        let basis = OsBasis::build(&affine);
        assert!(basis.wedge(0, 1).is_empty());
        assert_eq!(basis.dim2(), 2);
        let lambda = vec![rat(1), rat(-1), rat(0)];
        assert_eq!(aomoto_h1_dim(&affine, &lambda).unwrap(), 1);
    }

    #[test]
    fn h1_is_invariant_under_scaling_the_weight() {
        let a = monomial_deleted(2);
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..10 {
            let lambda = rational_weights(&mut rng, a.n());
            if lambda.iter().all(|l| l.is_zero()) {
                continue;
            }
            let c = rat(rng.gen_range(1i64..=7));
            let scaled: Vec<RatFunc> = lambda.iter().map(|l| l * &c).collect();
            assert_eq!(
                aomoto_h1_dim(&a, &lambda).unwrap(),
                aomoto_h1_dim(&a, &scaled).unwrap()
            );
        }
    }

    #[test]
    fn local_component_census() {
        // Three generic affine lines: every vertex is a double point.
        let generic = parse_defining_polynomial("x1*x2*(x1+x2-1)", Some(2)).unwrap();
        assert!(local_components(&generic).is_empty());

        let pencil = parse_defining_polynomial("x1*x2*(x1+x2)", Some(2)).unwrap();
        assert_eq!(local_components(&pencil), vec![(vec![0, 1, 2], 2)]);

        // Full monomial r = 2: three flats of size four and r² = 4 of size
        // three carry local components; the 3r doubles do not.
        let a2 = monomial_full(2);
        let locals = local_components(&a2);
        assert_eq!(locals.len(), 7);
        assert_eq!(locals.iter().filter(|(f, d)| f.len() == 4 && *d == 3).count(), 3);
        assert_eq!(locals.iter().filter(|(f, d)| f.len() == 3 && *d == 2).count(), 4);
    }

    /// Brute-force enumeration of all partitions of 0..n by restricted growth
    /// strings, filtered through `is_neighborly` — the oracle for the
    /// quotient-based search.
    fn neighborly_by_brute_force(a: &Arrangement) -> Vec<Partition> {
        fn rgs(n: usize, g: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
            if g.len() == n {
                out.push(g.clone());
                return;
            }
            for b in 0..=max + 1 {
                g.push(b);
                rgs(n, g, max.max(b), out);
                g.pop();
            }
        }
        let mut strings = Vec::new();
        rgs(a.n(), &mut vec![0], 0, &mut strings);
        let mut found = Vec::new();
        for g in strings {
            let blocks_count = g.iter().max().unwrap() + 1;
            let mut blocks = vec![Vec::new(); blocks_count];
            for (i, &b) in g.iter().enumerate() {
                blocks[b].push(i);
            }
            let p = Partition::new(blocks);
            if !p.is_trivial() && is_neighborly(a, &p).unwrap() {
                found.push(p);
            }
        }
        found.sort();
        found.dedup();
        found
    }

    #[test]
    fn three_concurrent_lines_plus_generic_line_has_no_neighborly_partition() {
        // Affine picture: x1, x2, x1+x2 concurrent at the origin, and a fourth
        // line meeting them in three distinct double points.
        let a = parse_defining_polynomial("x1*x2*(x1+x2)*(x1-x2-1)", Some(2)).unwrap();
        // Isolating the pencil {0,1,2} fails: the block misses exactly one
        // element of the double flat {0,3}.
        let isolate_triple = Partition::new(vec![vec![0, 1, 2], vec![3]]);
        assert!(!is_neighborly(&a, &isolate_triple).unwrap());

        let search = neighborly_partitions(&a, SearchMode::Exhaustive, 14).unwrap();
        assert!(search.exhaustive);
        assert!(search.partitions.is_empty());
        // Oracle: all Bell(4) = 15 partitions by brute force.
        assert_eq!(neighborly_by_brute_force(&a), search.partitions);
    }

    #[test]
    fn deleted_monomial_r2_has_no_neighborly_partition() {
        let a = monomial_deleted(2);
        let search = neighborly_partitions(&a, SearchMode::Exhaustive, 14).unwrap();
        assert!(search.exhaustive);
        assert!(
            search.partitions.is_empty(),
            "unexpected partitions: {:?}",
            search.partitions
        );
        // The forced merges contract {H1, H23:*} and {H2, H13:*}.
        assert_eq!(search.quotient_size, 4);
        // Oracle: all Bell(8) = 4140 partitions by brute force.
        assert_eq!(neighborly_by_brute_force(&a), search.partitions);
    }

    #[test]
    fn braid_arrangement_has_exactly_one_neighborly_partition() {
        // Order H12, H13, H14, H23, H24, H34; the double flats pair opposite
        // transpositions, and the quotient partition into those three pairs is
        // the unique non-trivial neighborly partition.
        let a = family(Family::Braid, None, Some(4)).unwrap();
        let search = neighborly_partitions(&a, SearchMode::Exhaustive, 14).unwrap();
        assert!(search.exhaustive);
        let expected = Partition::new(vec![vec![0, 5], vec![1, 4], vec![2, 3]]);
        assert_eq!(search.partitions, vec![expected.clone()]);
        assert!(is_neighborly(&a, &expected).unwrap());
        assert_eq!(neighborly_by_brute_force(&a), search.partitions);
    }

    #[test]
    fn neighborly_search_is_relabeling_invariant() {
        // Reverse the hyperplane order of the braid arrangement; index i in the
        // reversed arrangement is index 5 − i in the original, so the expected
        // partition {0,5},{1,4},{2,3} maps to itself.
        let a = family(Family::Braid, None, Some(4)).unwrap();
        let mut reversed = a.hyperplanes.clone();
        reversed.reverse();
        let b = Arrangement::new("braid_reversed", a.ambient_dim, a.conductor, reversed).unwrap();
        let search = neighborly_partitions(&b, SearchMode::Exhaustive, 14).unwrap();
        let expected = Partition::new(vec![vec![0, 5], vec![1, 4], vec![2, 3]]);
        assert_eq!(search.partitions, vec![expected]);
    }

    #[test]
    fn trivial_partitions_and_the_definition() {
        // The one-block partition satisfies the neighborly condition on every
        // arrangement: X ∖ π is always empty.
        for a in [
            monomial_deleted(2),
            monomial_full(2),
            family(Family::Braid, None, Some(4)).unwrap(),
            parse_defining_polynomial("x1*x2*(x1+x2)", Some(2)).unwrap(),
        ] {
            let one_block = Partition::new(vec![(0..a.n()).collect()]);
            assert!(one_block.is_trivial());
            assert!(is_neighborly(&a, &one_block).unwrap());
        }
        // The all-singletons partition satisfies it exactly when no rank-2
        // flat has multiplicity two: a singleton block misses exactly one
        // element of a double flat.  A pencil has a single big flat, so both
        // trivial partitions are vacuously neighborly there.
        let pencil = parse_defining_polynomial("x1*x2*(x1+x2)", Some(2)).unwrap();
        let singletons = Partition::new((0..pencil.n()).map(|i| vec![i]).collect());
        assert!(singletons.is_trivial());
        assert!(is_neighborly(&pencil, &singletons).unwrap());

        let d2 = monomial_deleted(2);
        assert!(d2.poset().rank2_flats().any(|f| f.hyperplane_indices.len() == 2));
        let singletons = Partition::new((0..d2.n()).map(|i| vec![i]).collect());
        assert!(!is_neighborly(&d2, &singletons).unwrap());
    }

    #[test]
    fn exhaustive_mode_enforces_the_size_cap() {
        let a = monomial_deleted(2);
        match neighborly_partitions(&a, SearchMode::Exhaustive, 3) {
            Err(CoreError::SizeBound(_)) => {}
            other => panic!("expected size bound error, got {other:?}"),
        }
        // The quotient has 4 classes, so cap 4 succeeds even though n = 8.
        assert!(neighborly_partitions(&a, SearchMode::Exhaustive, 4).is_ok());
    }

    #[test]
    fn essential_resonance_verdicts() {
        let pencil = parse_defining_polynomial("x1*x2*(x1+x2)", Some(2)).unwrap();
        let v = essential_resonance_exists(&pencil, 14).unwrap();
        assert_eq!(v.outcome, ResonanceOutcome::Established);
        assert_eq!(v.rule, "local-pencil");

        let a2 = monomial_full(2);
        let v = essential_resonance_exists(&a2, 14).unwrap();
        assert_eq!(v.outcome, ResonanceOutcome::Established);
        assert_eq!(v.rule, "monomial-tangent-cone");

        let d2 = monomial_deleted(2);
        let v = essential_resonance_exists(&d2, 14).unwrap();
        assert_eq!(v.outcome, ResonanceOutcome::Excluded);
        assert_eq!(v.rule, "no-neighborly-partition");

        let boolean = family(Family::Boolean, None, Some(3)).unwrap();
        let v = essential_resonance_exists(&boolean, 14).unwrap();
        assert_eq!(v.outcome, ResonanceOutcome::Excluded);
        assert!(v.local_components.is_empty());

        let braid = family(Family::Braid, None, Some(4)).unwrap();
        let v = essential_resonance_exists(&braid, 14).unwrap();
        assert_eq!(v.outcome, ResonanceOutcome::Unresolved);
        assert_eq!(v.rule, "neighborly-partitions-found");
    }

    #[test]
    fn monomial_recognition_is_label_independent() {
        let a = monomial_full(3);
        let mut shuffled = a.hyperplanes.clone();
        shuffled.reverse();
        for (i, h) in shuffled.iter_mut().enumerate() {
            h.label = format!("L{i}");
        }
        let b = Arrangement::new("anonymous", 3, 3, shuffled).unwrap();
        assert_eq!(recognize_monomial_full(&b), Some(3));
        assert_eq!(recognize_monomial_full(&monomial_deleted(3)), None);
    }

    #[test]
    fn aomoto_matrix_rejects_wrong_weight_length() {
        let a = monomial_deleted(2);
        match aomoto_matrix(&a, &[RatFunc::one()]) {
            Err(CoreError::CharacterLength { expected, got }) => {
                assert_eq!((expected, got), (8, 1));
            }
            other => panic!("expected length error, got {other:?}"),
        }
    }
}
