//! Mark relabelings: finite permutation groups, group averages and
//! invariant subspaces.

use std::collections::{BTreeSet, VecDeque};

use num_traits::Zero;

use crate::divisor::DivisorClass;
use crate::error::{Error, Result};
use crate::linalg::rref;
use crate::rational::{add_scaled, int, primitive, Rational};

/// Default bound on the size of an explicitly closed group.
pub const DEFAULT_GROUP_LIMIT: usize = 1_000_000;

/// A permutation group on `{1..n}`; each element lists the images of marks
/// `1..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationGroup {
    pub n: u32,
    /// All elements, sorted; the identity comes first.
    pub elements: Vec<Vec<u32>>,
}

fn check_permutation(n: u32, p: &[u32]) -> Result<()> {
    let mut seen = vec![false; n as usize];
    if p.len() != n as usize {
        return Err(Error::DimensionMismatch { expected: n as usize, got: p.len() });
    }
    for &x in p {
        if x == 0 || x > n || seen[(x - 1) as usize] {
            return Err(Error::parse(format!("{p:?} is not a permutation of 1..{n}")));
        }
        seen[(x - 1) as usize] = true;
    }
    Ok(())
}

/// `(p ∘ q)(k) = p(q(k))`.
pub fn compose(p: &[u32], q: &[u32]) -> Vec<u32> {
    q.iter().map(|&k| p[(k - 1) as usize]).collect()
}

impl PermutationGroup {
    pub fn trivial(n: u32) -> Self {
        PermutationGroup { n, elements: vec![(1..=n).collect()] }
    }

    /// Closure of `generators` under composition, refused once it exceeds
    /// `limit` elements.
    pub fn generate(n: u32, generators: &[Vec<u32>], limit: usize) -> Result<Self> {
        for g in generators {
            check_permutation(n, g)?;
        }
        let identity: Vec<u32> = (1..=n).collect();
        let mut seen = BTreeSet::from([identity.clone()]);
        let mut queue = VecDeque::from([identity]);
        while let Some(p) = queue.pop_front() {
            for g in generators {
                let q = compose(g, &p);
                if seen.insert(q.clone()) {
                    if seen.len() > limit {
                        return Err(Error::GroupTooLarge { limit });
                    }
                    queue.push_back(q);
                }
            }
        }
        Ok(PermutationGroup { n, elements: seen.into_iter().collect() })
    }

    /// The full symmetric group on the marks in `support` (other marks fixed).
    pub fn symmetric_on(n: u32, support: &[u32], limit: usize) -> Result<Self> {
        let mut gens = Vec::new();
        for w in support.windows(2) {
            let mut p: Vec<u32> = (1..=n).collect();
            p.swap((w[0] - 1) as usize, (w[1] - 1) as usize);
            gens.push(p);
        }
        Self::generate(n, &gens, limit)
    }

    pub fn symmetric(n: u32) -> Result<Self> {
        Self::symmetric_on(n, &(1..=n).collect::<Vec<_>>(), DEFAULT_GROUP_LIMIT)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Average of `act(σ, v)` over the group.
    pub fn average<F>(&self, v: &[Rational], act: F) -> Vec<Rational>
    where
        F: Fn(&[u32], &[Rational]) -> Vec<Rational>,
    {
        let mut sum = vec![Rational::zero(); v.len()];
        for p in &self.elements {
            add_scaled(&mut sum, &act(p, v), &int(1));
        }
        let k = int(self.order() as i64);
        sum.iter().map(|x| x / &k).collect()
    }

    /// Basis of the invariant subspace of a linear action on `Q^dim`, as
    /// primitive integer rows in reduced echelon order.
    pub fn invariant_basis<F>(&self, dim: usize, act: F) -> Vec<Vec<Rational>>
    where
        F: Fn(&[u32], &[Rational]) -> Vec<Rational>,
    {
        let images: Vec<Vec<Rational>> = (0..dim)
            .map(|i| {
                let mut e = vec![Rational::zero(); dim];
                e[i] = int(1);
                self.average(&e, &act)
            })
            .collect();
        rref(&images, dim).rows.iter().map(|r| primitive(r)).collect()
    }
}

/// Group average of a divisor class under mark relabeling.
pub fn symmetrize(d: &DivisorClass, group: &PermutationGroup) -> Result<DivisorClass> {
    if group.n != d.sig.n {
        return Err(Error::DimensionMismatch { expected: d.sig.n as usize, got: group.n as usize });
    }
    let mut sum = DivisorClass::zero(d.sig);
    for p in &group.elements {
        sum = sum.plus(&d.permute(p)?)?;
    }
    Ok(sum.scaled(&(int(1) / int(group.order() as i64))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::{ClassIndex, MarkSet, ModuliSig};
    use crate::rational::frac;

    #[test]
    fn group_orders() {
        assert_eq!(PermutationGroup::symmetric(4).unwrap().order(), 24);
        assert_eq!(PermutationGroup::symmetric_on(5, &[1, 2, 3], 100).unwrap().order(), 6);
        let cyc = PermutationGroup::generate(5, &[vec![2, 3, 4, 5, 1]], 100).unwrap();
        assert_eq!(cyc.order(), 5);
        assert!(matches!(PermutationGroup::symmetric_on(6, &[1, 2, 3, 4, 5, 6], 100), Err(Error::GroupTooLarge { limit: 100 })));
        assert!(PermutationGroup::generate(3, &[vec![1, 1, 2]], 10).is_err());
    }

    #[test]
    fn trivial_group_is_identity() {
        let sig = ModuliSig::new(0, 5).unwrap();
        let mut d = DivisorClass::zero(sig);
        d.add_boundary(0, MarkSet::from_marks([1, 2]), &int(3)).unwrap();
        d.add(ClassIndex::Psi(4), &int(-1)).unwrap();
        assert_eq!(symmetrize(&d, &PermutationGroup::trivial(5)).unwrap(), d);
    }

    #[test]
    fn orbit_average() {
        let sig = ModuliSig::new(0, 5).unwrap();
        let mut d = DivisorClass::zero(sig);
        d.add_boundary(0, MarkSet::from_marks([1, 2]), &int(1)).unwrap();
        let s3 = PermutationGroup::symmetric_on(5, &[1, 2, 3], 100).unwrap();
        let avg = symmetrize(&d, &s3).unwrap();
        let mut expected = DivisorClass::zero(sig);
        for pair in [[1, 2], [1, 3], [2, 3]] {
            expected.add_boundary(0, MarkSet::from_marks(pair), &frac(1, 3)).unwrap();
        }
        assert_eq!(avg, expected);
        assert_eq!(symmetrize(&avg, &s3).unwrap(), avg);
    }

    #[test]
    fn invariant_basis_of_permutation_action() {
        let g = PermutationGroup::symmetric(3).unwrap();
        let act = |p: &[u32], v: &[Rational]| {
            let mut out = vec![Rational::zero(); 3];
            for (k, x) in v.iter().enumerate() {
                out[(p[k] - 1) as usize] = x.clone();
            }
            out
        };
        assert_eq!(g.invariant_basis(3, act), vec![vec![int(1), int(1), int(1)]]);
    }
}
