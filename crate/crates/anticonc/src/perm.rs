//! Symmetric-group combinatorics on image arrays.
//!
//! Tables list S_k lexicographically by image sequence, so the identity sits
//! at index 0 and the index of a permutation is its Lehmer-code rank.

use crate::error::{Error, Result};
use crate::replica::ReplicaMatrix;
use nalgebra::DMatrix;
use std::fmt;

/// Largest supported degree. 7! = 5040 keeps dense k!×k! matrices in memory.
pub const MAX_DEGREE: usize = 7;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    /// Builds a permutation from its image array, `images[i] = σ(i)`.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let k = images.len();
        if k == 0 || k > MAX_DEGREE {
            return Err(Error::DegreeOutOfRange { k, max: MAX_DEGREE });
        }
        let mut seen = [false; MAX_DEGREE];
        for &v in &images {
            if v >= k || seen[v] {
                return Err(Error::Invalid(format!("{images:?} is not a bijection on 0..{k}")));
            }
            seen[v] = true;
        }
        Ok(Self { images: images.into_iter().map(|v| v as u8).collect() })
    }

    pub fn identity(k: usize) -> Self {
        Self { images: (0..k as u8).collect() }
    }

    /// The transposition exchanging `a` and `b` in S_k.
    pub fn transposition(k: usize, a: usize, b: usize) -> Self {
        let mut p = Self::identity(k);
        p.images.swap(a, b);
        p
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.images.iter().map(|&v| v as usize)
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    /// `self.compose(other)` is σ∘π, i.e. i ↦ σ(π(i)).
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.degree(), other.degree(), "composition of different degrees");
        Self { images: other.images.iter().map(|&i| self.images[i as usize]).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v as usize] = i as u8;
        }
        Self { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    pub fn cycle_counts(&self) -> CycleCounts {
        let k = self.degree();
        let mut counts = vec![0usize; k];
        let mut seen = [false; MAX_DEGREE];
        for start in 0..k {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i] as usize;
                len += 1;
            }
            counts[len - 1] += 1;
        }
        CycleCounts { counts }
    }

    pub fn num_cycles(&self) -> usize {
        self.cycle_counts().total()
    }

    pub fn fixed_points(&self) -> usize {
        self.images.iter().enumerate().filter(|&(i, &v)| i == v as usize).count()
    }

    /// Rank in the lexicographic order of S_k (Lehmer code).
    pub fn lex_rank(&self) -> usize {
        let k = self.degree();
        let mut rank = 0;
        for i in 0..k {
            let smaller_later = self.images[i + 1..].iter().filter(|&&v| v < self.images[i]).count();
            rank = rank * (k - i) + smaller_later;
        }
        rank
    }

    /// Deletes the listed fixed points and relabels the remaining points
    /// order-preservingly, giving an element of S_{k−|points|}.
    pub fn remove_fixed_points(&self, points: &[usize]) -> Result<Self> {
        for &p in points {
            if p >= self.degree() || self.apply(p) != p {
                return Err(Error::Invalid(format!("{p} is not a fixed point of {self}")));
            }
        }
        let keep: Vec<usize> = (0..self.degree()).filter(|i| !points.contains(i)).collect();
        let mut relabel = vec![usize::MAX; self.degree()];
        for (new, &old) in keep.iter().enumerate() {
            relabel[old] = new;
        }
        Ok(Self { images: keep.iter().map(|&i| relabel[self.apply(i)] as u8).collect() })
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.images().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// `n_C[a−1]` is the number of cycles of length `a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycleCounts {
    counts: Vec<usize>,
}

impl CycleCounts {
    /// Number of cycles of length `a` (1-based).
    pub fn of_length(&self, a: usize) -> usize {
        self.counts.get(a.wrapping_sub(1)).copied().unwrap_or(0)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.counts
    }

    pub fn fixed_points(&self) -> usize {
        self.of_length(1)
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn degree(&self) -> usize {
        self.counts.iter().enumerate().map(|(i, n)| (i + 1) * n).sum()
    }
}

/// Number of cycles of σ⁻¹π.
pub fn relative_cycle_count(sigma: &Permutation, pi: &Permutation) -> Result<usize> {
    same_degree(sigma, pi)?;
    Ok(sigma.inverse().compose(pi).num_cycles())
}

/// Points fixed by both σ and π.
pub fn common_fixed_points(sigma: &Permutation, pi: &Permutation) -> Result<usize> {
    Ok(common_fixed_point_list(sigma, pi)?.len())
}

pub fn common_fixed_point_list(sigma: &Permutation, pi: &Permutation) -> Result<Vec<usize>> {
    same_degree(sigma, pi)?;
    Ok((0..sigma.degree()).filter(|&i| sigma.apply(i) == i && pi.apply(i) == i).collect())
}

fn same_degree(a: &Permutation, b: &Permutation) -> Result<()> {
    if a.degree() == b.degree() {
        Ok(())
    } else {
        Err(Error::DegreeMismatch { left: a.degree(), right: b.degree() })
    }
}

/// All of S_k in lexicographic order.
#[derive(Clone, Debug)]
pub struct PermutationTable {
    k: usize,
    elements: Vec<Permutation>,
}

impl PermutationTable {
    pub fn enumerate(k: usize) -> Result<Self> {
        if k == 0 || k > MAX_DEGREE {
            return Err(Error::DegreeOutOfRange { k, max: MAX_DEGREE });
        }
        let mut elements = Vec::with_capacity(factorial(k));
        let mut cur: Vec<u8> = (0..k as u8).collect();
        loop {
            elements.push(Permutation { images: cur.clone() });
            if !next_lex(&mut cur) {
                break;
            }
        }
        Ok(Self { k, elements })
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn index_of(&self, p: &Permutation) -> Result<usize> {
        if p.degree() != self.k {
            return Err(Error::DegreeMismatch { left: p.degree(), right: self.k });
        }
        Ok(p.lex_rank())
    }

    /// `out[i][j]` = number of cycles of σ_i⁻¹σ_j.
    pub fn relative_cycle_table(&self) -> Vec<Vec<u8>> {
        let inverses: Vec<Permutation> = self.elements.iter().map(Permutation::inverse).collect();
        inverses.iter().map(|si| self.elements.iter().map(|pj| cycles_of_product(&si.images, &pj.images)).collect()).collect()
    }

    /// Diagonal matrix with entries k − n_F(σ).
    pub fn fixed_point_matrix(&self) -> ReplicaMatrix {
        let n = self.len();
        let mut m = DMatrix::zeros(n, n);
        for (i, p) in self.elements.iter().enumerate() {
            m[(i, i)] = (self.k - p.fixed_points()) as f64;
        }
        ReplicaMatrix::from_matrix(self.k, m)
    }

    /// A_σπ = 1 when σπ⁻¹ is a transposition.
    pub fn transposition_adjacency(&self) -> ReplicaMatrix {
        let n = self.len();
        let mut m = DMatrix::zeros(n, n);
        for (i, s) in self.elements.iter().enumerate() {
            for a in 0..self.k {
                for b in a + 1..self.k {
                    let j = Permutation::transposition(self.k, a, b).compose(s).lex_rank();
                    m[(i, j)] = 1.0;
                }
            }
        }
        ReplicaMatrix::from_matrix(self.k, m)
    }

    /// Conjugacy class of every element, as indices into [`Self::class_representatives`].
    pub fn conjugacy_classes(&self) -> ConjugacyClasses {
        let mut types: Vec<CycleCounts> = Vec::new();
        let mut class_of = Vec::with_capacity(self.len());
        for p in &self.elements {
            let ct = p.cycle_counts();
            let c = match types.iter().position(|t| *t == ct) {
                Some(c) => c,
                None => {
                    types.push(ct);
                    types.len() - 1
                }
            };
            class_of.push(c);
        }
        let mut members = vec![Vec::new(); types.len()];
        for (i, &c) in class_of.iter().enumerate() {
            members[c].push(i);
        }
        ConjugacyClasses { cycle_types: types, class_of, members }
    }
}

/// Partition of S_k by cycle type.
#[derive(Clone, Debug)]
pub struct ConjugacyClasses {
    pub cycle_types: Vec<CycleCounts>,
    pub class_of: Vec<usize>,
    pub members: Vec<Vec<usize>>,
}

impl ConjugacyClasses {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn representative(&self, c: usize) -> usize {
        self.members[c][0]
    }
}

/// Number of cycles of a∘b without allocating.
#[inline]
fn cycles_of_product(a: &[u8], b: &[u8]) -> u8 {
    let k = a.len();
    let mut seen = [false; MAX_DEGREE];
    let mut cycles = 0;
    for start in 0..k {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = a[b[i] as usize] as usize;
        }
    }
    cycles
}

fn next_lex(a: &mut [u8]) -> bool {
    let n = a.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

pub fn factorial(k: usize) -> usize {
    (1..=k).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn table_sizes() {
        assert_eq!(PermutationTable::enumerate(1).unwrap().len(), 1);
        assert_eq!(PermutationTable::enumerate(2).unwrap().len(), 2);
        assert_eq!(PermutationTable::enumerate(4).unwrap().len(), 24);
        assert!(PermutationTable::enumerate(0).is_err());
        assert!(PermutationTable::enumerate(8).is_err());
    }

    #[test]
    fn lexicographic_order_and_rank() {
        let t = PermutationTable::enumerate(4).unwrap();
        assert!(t.get(0).is_identity());
        for i in 1..t.len() {
            let a: Vec<usize> = t.get(i - 1).images().collect();
            let b: Vec<usize> = t.get(i).images().collect();
            assert!(a < b);
        }
        for (i, e) in t.elements().iter().enumerate() {
            assert_eq!(t.index_of(e).unwrap(), i);
        }
    }

    #[test]
    fn cycle_count_examples() {
        assert_eq!(Permutation::identity(3).cycle_counts().as_slice(), &[3, 0, 0]);
        assert_eq!(p(&[1, 0, 2]).cycle_counts().as_slice(), &[1, 1, 0]);
        assert_eq!(p(&[1, 2, 0]).cycle_counts().as_slice(), &[0, 0, 1]);
    }

    #[test]
    fn fixed_point_matrix_examples() {
        let t2 = PermutationTable::enumerate(2).unwrap();
        assert_eq!(t2.fixed_point_matrix().as_matrix().diagonal().as_slice(), &[0.0, 2.0]);
        // Lex order of S_3: e, [0,2,1], [1,0,2], [1,2,0], [2,0,1], [2,1,0].
        // Counting fixed points of each element directly:
        let t3 = PermutationTable::enumerate(3).unwrap();
        let oracle: Vec<f64> = t3.elements().iter().map(|s| (3 - s.images().enumerate().filter(|(i, v)| i == v).count()) as f64).collect();
        assert_eq!(oracle, vec![0.0, 2.0, 2.0, 3.0, 3.0, 2.0]);
        assert_eq!(t3.fixed_point_matrix().as_matrix().diagonal().as_slice(), oracle.as_slice());
        let mut sorted = oracle.clone();
        sorted.sort_by(f64::total_cmp);
        assert_eq!(sorted, vec![0.0, 2.0, 2.0, 2.0, 3.0, 3.0]);
    }

    #[test]
    fn adjacency_examples() {
        let t2 = PermutationTable::enumerate(2).unwrap();
        assert_eq!(t2.transposition_adjacency().as_matrix(), &DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]));
        for k in 1..=5 {
            let t = PermutationTable::enumerate(k).unwrap();
            let a = t.transposition_adjacency();
            let m = a.as_matrix();
            assert_eq!(m, &m.transpose());
            let want = (k * (k - 1) / 2) as f64;
            for i in 0..t.len() {
                assert_eq!(m[(i, i)], 0.0);
                assert_eq!(m.row(i).sum(), want);
            }
        }
    }

    #[test]
    fn adjacency_matches_brute_force() {
        let t = PermutationTable::enumerate(4).unwrap();
        let a = t.transposition_adjacency();
        for (i, s) in t.elements().iter().enumerate() {
            for (j, q) in t.elements().iter().enumerate() {
                let ct = s.compose(&q.inverse()).cycle_counts();
                let is_tr = ct.of_length(2) == 1 && ct.fixed_points() == 2;
                assert_eq!(a.get(i, j) == 1.0, is_tr);
            }
        }
    }

    #[test]
    fn relative_counts() {
        let e = Permutation::identity(2);
        let s = p(&[1, 0]);
        assert_eq!(relative_cycle_count(&e, &s).unwrap(), 1);
        assert_eq!(common_fixed_points(&e, &s).unwrap(), 0);
        let s01 = Permutation::transposition(3, 0, 1);
        let s02 = Permutation::transposition(3, 0, 2);
        // σ⁻¹π for σ=(0 1), π=(0 2): 0→2→2, 2→0→1, 1→1→0.
        assert_eq!(s01.inverse().compose(&s02), p(&[2, 0, 1]));
        assert_eq!(relative_cycle_count(&s01, &s02).unwrap(), 1);
        assert_eq!(common_fixed_points(&s01, &s02).unwrap(), 0);
        assert!(relative_cycle_count(&e, &s01).is_err());
    }

    #[test]
    fn remove_fixed_points_relabels() {
        let q = p(&[0, 3, 2, 1, 4]);
        assert_eq!(q.remove_fixed_points(&[0, 4]).unwrap(), p(&[2, 1, 0]));
        assert!(q.remove_fixed_points(&[1]).is_err());
    }

    #[test]
    fn invalid_images_rejected() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![0, 2]).is_err());
        assert!(Permutation::new(vec![]).is_err());
    }

    fn arb_perm(k: usize) -> impl Strategy<Value = Permutation> {
        Just((0..k).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| Permutation::new(v).unwrap())
    }

    proptest! {
        #[test]
        fn group_axioms((a, b, c) in (1usize..=7).prop_flat_map(|k| (arb_perm(k), arb_perm(k), arb_perm(k)))) {
            prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
            prop_assert!(a.compose(&a.inverse()).is_identity());
            prop_assert!(a.inverse().compose(&a).is_identity());
        }

        #[test]
        fn cycle_type_is_class_function(v in Just((0..6usize).collect::<Vec<_>>()).prop_shuffle(),
                                        w in Just((0..6usize).collect::<Vec<_>>()).prop_shuffle()) {
            let s = Permutation::new(v).unwrap();
            let c = Permutation::new(w).unwrap();
            let conj = c.compose(&s).compose(&c.inverse());
            prop_assert_eq!(s.cycle_counts(), conj.cycle_counts());
            prop_assert_eq!(s.cycle_counts().degree(), 6);
        }

        #[test]
        fn nonidentity_has_at_most_k_minus_2_fixed_points(v in Just((0..7usize).collect::<Vec<_>>()).prop_shuffle()) {
            let s = Permutation::new(v).unwrap();
            if !s.is_identity() {
                prop_assert!(s.fixed_points() <= 5);
            }
        }

        #[test]
        fn relative_count_bounds(v in Just((0..5usize).collect::<Vec<_>>()).prop_shuffle(),
                                 w in Just((0..5usize).collect::<Vec<_>>()).prop_shuffle()) {
            let s = Permutation::new(v).unwrap();
            let q = Permutation::new(w).unwrap();
            let c = relative_cycle_count(&s, &q).unwrap();
            prop_assert!((1..=5).contains(&c));
            prop_assert_eq!(relative_cycle_count(&s, &s).unwrap(), 5);
            prop_assert_eq!(common_fixed_points(&s, &s).unwrap(), s.fixed_points());
            prop_assert!(common_fixed_points(&s, &q).unwrap() <= 5);
        }
    }
}
