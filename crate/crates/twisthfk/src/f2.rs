//! Sparse linear algebra over F2 on bitset-packed rows: ranks, solves,
//! homology dimensions and representatives, and span-membership tests.

use crate::error::{Error, Result};

/// A dense bitset used as a vector over F2.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn singleton(len: usize, bit: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(bit, true);
        v
    }

    pub fn from_support(len: usize, support: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &b in support {
            v.set(b, true);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len);
        if value {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn xor_assign(&mut self, rhs: &BitVec) {
        assert_eq!(self.len, rhs.len);
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Lowest set bit, if any.
    pub fn first_one(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn ones(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }
}

/// A matrix over F2 stored as bitset rows.
#[derive(Clone, Debug)]
pub struct F2Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BitVec>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        F2Matrix {
            rows,
            cols,
            data: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.data[r].set(c, value);
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    pub fn row(&self, r: usize) -> &BitVec {
        &self.data[r]
    }

    /// Image of a vector of length `rows` under the map sending basis vector
    /// i to row i: the xor of the rows at the set bits.
    pub fn apply(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.rows);
        let mut out = BitVec::zeros(self.cols);
        for i in 0..self.rows {
            if v.get(i) {
                out.xor_assign(&self.data[i]);
            }
        }
        out
    }
}

/// Row echelon basis with deterministic lowest-index pivots. Tracks the
/// combination of inserted vectors that produced each stored row, so solves
/// can report preimages.
struct Eliminator {
    /// (reduced row, combination over inserted vectors)
    rows: Vec<(BitVec, BitVec)>,
    /// pivot column of each stored row
    pivots: Vec<usize>,
    inserted: usize,
    capacity: usize,
}

impl Eliminator {
    fn new(capacity: usize) -> Self {
        Eliminator {
            rows: Vec::new(),
            pivots: Vec::new(),
            inserted: 0,
            capacity,
        }
    }

    /// Reduce `v` against the stored rows; returns the residue and the
    /// combination of previously inserted vectors used.
    fn reduce(&self, v: &BitVec) -> (BitVec, BitVec) {
        let mut residue = v.clone();
        let mut combo = BitVec::zeros(self.capacity);
        while let Some(lead) = residue.first_one() {
            match self.pivots.iter().position(|&p| p == lead) {
                Some(k) => {
                    residue.xor_assign(&self.rows[k].0);
                    combo.xor_assign(&self.rows[k].1);
                }
                None => break,
            }
        }
        (residue, combo)
    }

    /// Insert a vector, always consuming one combination index so combo bit
    /// positions align with insertion order. When the vector is dependent,
    /// returns the combination (including its own index) that sums to zero.
    fn insert_tracked(&mut self, v: &BitVec) -> Option<BitVec> {
        let (residue, mut combo) = self.reduce(v);
        let index = self.inserted;
        self.inserted += 1;
        combo.set(index, true);
        if residue.is_zero() {
            return Some(combo);
        }
        let pivot = residue.first_one().unwrap();
        self.rows.push((residue, combo));
        self.pivots.push(pivot);
        None
    }

    /// Insert a vector; returns true when it increased the rank.
    fn insert(&mut self, v: &BitVec) -> bool {
        self.insert_tracked(v).is_none()
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Express `v` as a combination of the inserted vectors, if possible.
    fn solve(&self, v: &BitVec) -> Option<BitVec> {
        let (residue, combo) = self.reduce(v);
        if residue.is_zero() {
            Some(combo)
        } else {
            None
        }
    }
}

/// Gaussian elimination over F2: the rank of `m` (rows as vectors) and, for
/// each target, a preimage combination of rows when solvable.
pub fn rank_and_solve(m: &F2Matrix, targets: &[BitVec]) -> Result<(usize, Vec<Option<BitVec>>)> {
    for t in targets {
        if t.len() != m.cols {
            return Err(Error::Dimension(format!(
                "target length {} does not match {} columns",
                t.len(),
                m.cols
            )));
        }
    }
    let mut elim = Eliminator::new(m.rows);
    for r in 0..m.rows {
        elim.insert(m.row(r));
    }
    let solutions = targets.iter().map(|t| elim.solve(t)).collect();
    Ok((elim.rank(), solutions))
}

/// Rank of a set of vectors.
pub fn rank_of(vectors: &[BitVec]) -> usize {
    let mut elim = Eliminator::new(vectors.len());
    for v in vectors {
        elim.insert(v);
    }
    elim.rank()
}

/// A basis of a homology group: cycle representatives that are linearly
/// independent modulo boundaries, plus the underlying rank data.
#[derive(Clone, Debug)]
pub struct HomologyBasis {
    pub classes: Vec<BitVec>,
    pub cycle_rank: usize,
    pub boundary_rank: usize,
}

impl HomologyBasis {
    pub fn dim(&self) -> usize {
        self.classes.len()
    }
}

/// Kernel basis of a linear map given by images of basis vectors.
pub fn kernel_basis(dim: usize, image_of: impl Fn(usize) -> BitVec) -> Vec<BitVec> {
    // Eliminate images in basis order; a basis vector whose image falls in
    // the span of the previous ones yields a kernel element through the
    // tracked combination.
    let mut elim = Eliminator::new(dim);
    let mut kernel = Vec::new();
    for i in 0..dim {
        if let Some(combo) = elim.insert_tracked(&image_of(i)) {
            kernel.push(combo);
        }
    }
    kernel
}

/// Homology of a differential on an `n`-dimensional space: ker / im of the
/// map sending basis vector i to `boundary(i)`.
pub fn homology(n: usize, boundary: impl Fn(usize) -> BitVec) -> HomologyBasis {
    let images: Vec<BitVec> = (0..n).map(&boundary).collect();
    let cycles = kernel_basis(n, |i| images[i].clone());
    let cycle_rank = cycles.len();
    let boundary_rank = rank_of(&images);

    // Independent cycles modulo the boundary span.
    let mut elim = Eliminator::new(n + cycles.len());
    for img in &images {
        elim.insert(img);
    }
    let mut classes = Vec::new();
    for c in &cycles {
        if elim.insert(c) {
            classes.push(c.clone());
        }
    }
    debug_assert_eq!(classes.len(), cycle_rank - boundary_rank);
    HomologyBasis {
        classes,
        cycle_rank,
        boundary_rank,
    }
}

/// True iff `v` lies in span(spanset) + image of the boundary.
pub fn class_in_span(
    n: usize,
    boundary: impl Fn(usize) -> BitVec,
    v: &BitVec,
    spanset: &[BitVec],
) -> bool {
    let mut elim = Eliminator::new(n + spanset.len());
    for i in 0..n {
        elim.insert(&boundary(i));
    }
    for s in spanset {
        elim.insert(s);
    }
    elim.solve(v).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Dense elimination oracle: rank by naive row reduction over Vec<bool>.
    fn dense_rank(m: &F2Matrix) -> usize {
        let mut rows: Vec<Vec<bool>> = (0..m.rows)
            .map(|r| (0..m.cols).map(|c| m.get(r, c)).collect())
            .collect();
        let mut rank = 0;
        for col in 0..m.cols {
            if let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col]) {
                rows.swap(rank, pivot);
                for r in 0..rows.len() {
                    if r != rank && rows[r][col] {
                        let pivot_row = rows[rank].clone();
                        for c in 0..m.cols {
                            let x = pivot_row[c];
                            rows[r][c] ^= x;
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    #[test]
    fn identity_solve() {
        let mut m = F2Matrix::zeros(3, 3);
        for i in 0..3 {
            m.set(i, i, true);
        }
        let target = BitVec::singleton(3, 1);
        let (rank, sols) = rank_and_solve(&m, &[target]).unwrap();
        assert_eq!(rank, 3);
        let combo = sols[0].as_ref().unwrap();
        assert_eq!(combo.ones(), vec![1]);
    }

    #[test]
    fn zero_matrix_has_no_solution() {
        let m = F2Matrix::zeros(4, 4);
        let (rank, sols) = rank_and_solve(&m, &[BitVec::singleton(4, 2)]).unwrap();
        assert_eq!(rank, 0);
        assert!(sols[0].is_none());
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let m = F2Matrix::zeros(2, 3);
        assert!(rank_and_solve(&m, &[BitVec::zeros(2)]).is_err());
    }

    #[test]
    fn sparse_rank_matches_dense_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..100 {
            let rows = rng.gen_range(1..=200);
            let cols = rng.gen_range(1..=200);
            let mut m = F2Matrix::zeros(rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    if rng.gen_bool(0.08) {
                        m.set(r, c, true);
                    }
                }
            }
            assert_eq!(
                rank_and_solve(&m, &[]).unwrap().0,
                dense_rank(&m),
                "trial {trial} {rows}x{cols}"
            );
        }
    }

    #[test]
    fn solve_reports_valid_preimages() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let rows = rng.gen_range(1..=40);
            let cols = rng.gen_range(1..=40);
            let mut m = F2Matrix::zeros(rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    if rng.gen_bool(0.2) {
                        m.set(r, c, true);
                    }
                }
            }
            // A target guaranteed solvable: random combination of rows.
            let mut combo = BitVec::zeros(rows);
            for r in 0..rows {
                combo.set(r, rng.gen_bool(0.5));
            }
            let target = m.apply(&combo);
            let (_, sols) = rank_and_solve(&m, std::slice::from_ref(&target)).unwrap();
            let got = sols[0].as_ref().expect("combination targets are solvable");
            assert_eq!(m.apply(got), target);
        }
    }

    #[test]
    fn kernel_basis_vectors_map_to_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..60 {
            let dim = rng.gen_range(1..=60);
            let cod = rng.gen_range(1..=60);
            let mut m = F2Matrix::zeros(dim, cod);
            for r in 0..dim {
                for c in 0..cod {
                    if rng.gen_bool(0.15) {
                        m.set(r, c, true);
                    }
                }
            }
            let kernel = kernel_basis(dim, |i| m.row(i).clone());
            for k in &kernel {
                assert!(m.apply(k).is_zero(), "kernel vector has nonzero image");
            }
            let rank = rank_and_solve(&m, &[]).unwrap().0;
            assert_eq!(kernel.len() + rank, dim, "rank-nullity");
            assert_eq!(rank_of(&kernel), kernel.len(), "kernel basis independent");
        }
    }

    #[test]
    fn two_element_acyclic_complex() {
        // a -> b: homology vanishes.
        let h = homology(2, |i| {
            if i == 0 {
                BitVec::singleton(2, 1)
            } else {
                BitVec::zeros(2)
            }
        });
        assert_eq!(h.dim(), 0);
        assert_eq!(h.cycle_rank, 1);
        assert_eq!(h.boundary_rank, 1);
    }

    #[test]
    fn zero_differential_homology_is_everything() {
        let h = homology(3, |_| BitVec::zeros(3));
        assert_eq!(h.dim(), 3);
    }

    #[test]
    fn class_in_span_cases() {
        // Complex a -> b with one extra untouched generator c.
        let boundary = |i: usize| {
            if i == 0 {
                BitVec::singleton(3, 1)
            } else {
                BitVec::zeros(3)
            }
        };
        // b is a boundary: lies in the span of nothing plus boundaries.
        assert!(class_in_span(3, boundary, &BitVec::singleton(3, 1), &[]));
        // c is not.
        assert!(!class_in_span(3, boundary, &BitVec::singleton(3, 2), &[]));
        // c is in the span of {c} plus boundaries.
        assert!(class_in_span(
            3,
            boundary,
            &BitVec::singleton(3, 2),
            &[BitVec::singleton(3, 2)]
        ));
    }
}
