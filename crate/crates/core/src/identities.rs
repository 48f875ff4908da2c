//! Two-sided semigroup identities `p = q` as words over variable
//! indices, exhaustive evaluation over closed subsets of an enumerated
//! semigroup, and the fixed catalog used by the preservation checks.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::semigroup::FiniteSemigroup;

/// Evaluation budget: at most this many substitutions per sweep
/// (64⁴ — a full four-variable sweep over 64 elements).
pub const SWEEP_CAP: u64 = 16_777_216;
/// At most this many distinct variables per identity.
pub const VARIABLE_CAP: usize = 4;

/// An identity `p = q`: two nonempty words over variables `0..k`, with
/// every variable occurring somewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityWordPair {
    left: Vec<usize>,
    right: Vec<usize>,
    variables: usize,
}

/// Whether some variable occurs on exactly one side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Typicality {
    Homotypical,
    Heterotypical,
}

impl IdentityWordPair {
    pub fn new(left: Vec<usize>, right: Vec<usize>) -> Result<Self> {
        if left.is_empty() || right.is_empty() {
            return Err(Error::EmptyWord);
        }
        let variables = left.iter().chain(right.iter()).max().map_or(0, |&v| v + 1);
        for v in 0..variables {
            if !left.contains(&v) && !right.contains(&v) {
                return Err(Error::SparseVariables { variable: v });
            }
        }
        Ok(Self {
            left,
            right,
            variables,
        })
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    pub fn variable_count(&self) -> usize {
        self.variables
    }

    /// Heterotypical iff some variable occurs in exactly one of the words.
    pub fn classify(&self) -> Typicality {
        for v in 0..self.variables {
            if self.left.contains(&v) != self.right.contains(&v) {
                return Typicality::Heterotypical;
            }
        }
        Typicality::Homotypical
    }

    /// Human-readable form such as `xyx = yx`.
    pub fn display(&self) -> String {
        fn word(w: &[usize]) -> String {
            const LETTERS: [char; 4] = ['x', 'y', 'z', 'w'];
            w.iter()
                .map(|&v| {
                    LETTERS
                        .get(v)
                        .copied()
                        .unwrap_or_else(|| char::from_digit(v as u32, 36).unwrap_or('?'))
                })
                .collect()
        }
        let mut s = word(&self.left);
        s.push_str(" = ");
        s.push_str(&word(&self.right));
        s
    }
}

/// Standalone form of [`IdentityWordPair::classify`].
pub fn classify_identity(id: &IdentityWordPair) -> Typicality {
    id.classify()
}

/// A substitution on which the two sides evaluate differently. All
/// indices are ambient element indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub substitution: Vec<usize>,
    pub left_value: usize,
    pub right_value: usize,
}

/// Exhaustively evaluates an identity over a subset of an enumerated
/// semigroup. The subset must be closed under the ambient product
/// (checked). Returns `None` when every substitution agrees, otherwise
/// a witnessing substitution.
pub fn satisfies(
    semigroup: &FiniteSemigroup,
    subset: &[usize],
    id: &IdentityWordPair,
) -> Result<Option<Violation>> {
    // dedupe quietly, preserving order
    let mut members: Vec<usize> = Vec::with_capacity(subset.len());
    for &i in subset {
        if !members.contains(&i) {
            members.push(i);
        }
    }
    if members.is_empty() {
        return Ok(None);
    }
    let k = members.len();
    let local: BTreeMap<usize, usize> = members.iter().enumerate().map(|(l, &a)| (a, l)).collect();

    // closure check and local multiplication table
    let mut table = alloc::vec![0u32; k * k];
    for (la, &a) in members.iter().enumerate() {
        for (lb, &b) in members.iter().enumerate() {
            let p = semigroup.product(a, b);
            match local.get(&p) {
                Some(&lp) => table[la * k + lb] = lp as u32,
                None => return Err(Error::NotClosed { left: a, right: b }),
            }
        }
    }

    let vars = id.variable_count();
    if vars > VARIABLE_CAP {
        return Err(Error::SweepTooLarge {
            evaluations: u64::MAX,
            cap: SWEEP_CAP,
        });
    }
    let evaluations = (k as u64)
        .checked_pow(vars as u32)
        .unwrap_or(u64::MAX);
    if evaluations > SWEEP_CAP {
        return Err(Error::SweepTooLarge {
            evaluations,
            cap: SWEEP_CAP,
        });
    }

    let eval = |word: &[usize], subst: &[usize]| -> usize {
        let mut acc = subst[word[0]];
        for &v in &word[1..] {
            acc = table[acc * k + subst[v]] as usize;
        }
        acc
    };

    let mut subst = alloc::vec![0usize; vars];
    loop {
        let lv = eval(id.left(), &subst);
        let rv = eval(id.right(), &subst);
        if lv != rv {
            return Ok(Some(Violation {
                substitution: subst.iter().map(|&l| members[l]).collect(),
                left_value: members[lv],
                right_value: members[rv],
            }));
        }
        // odometer increment
        let mut pos = 0;
        loop {
            if pos == vars {
                return Ok(None);
            }
            subst[pos] += 1;
            if subst[pos] < k {
                break;
            }
            subst[pos] = 0;
            pos += 1;
        }
    }
}

/// The fixed identity battery used by the preservation checks. Each
/// entry is named; classification is available via
/// [`IdentityWordPair::classify`].
pub fn catalog() -> Vec<(&'static str, IdentityWordPair)> {
    let id = |l: &[usize], r: &[usize]| IdentityWordPair::new(l.to_vec(), r.to_vec()).unwrap();
    alloc::vec![
        ("band", id(&[0], &[0, 0])),
        ("commutativity", id(&[0, 1], &[1, 0])),
        ("rectangular", id(&[0], &[0, 1, 0])),
        ("product_idempotent", id(&[0, 1], &[0, 1, 0, 1])),
        ("left_regular", id(&[0, 1, 0], &[0, 1])),
        ("right_regular", id(&[0, 1, 0], &[1, 0])),
        ("left_seminormal", id(&[0, 2, 1], &[0, 2, 0, 1])),
        ("left_zero", id(&[0, 1], &[0])),
        ("right_zero", id(&[0, 1], &[1])),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ptrans::PartialTransformation as Pt;

    fn pt(images: &[Option<usize>]) -> Pt {
        Pt::from_images(images).unwrap()
    }

    fn rz2m() -> FiniteSemigroup {
        let gens = alloc::vec![
            pt(&[Some(0), Some(1)]),
            pt(&[Some(0), Some(0)]),
            pt(&[Some(1), Some(1)]),
        ];
        FiniteSemigroup::enumerate(&gens, 10).unwrap()
    }

    #[test]
    fn classification_of_small_identities() {
        let id = |l: &[usize], r: &[usize]| IdentityWordPair::new(l.to_vec(), r.to_vec()).unwrap();
        // y occurs only on the right of x = xyx
        assert_eq!(id(&[0], &[0, 1, 0]).classify(), Typicality::Heterotypical);
        assert_eq!(id(&[0, 1], &[1, 0]).classify(), Typicality::Homotypical);
        assert_eq!(id(&[0], &[0, 1]).classify(), Typicality::Heterotypical);
    }

    #[test]
    fn invalid_identities_are_rejected()  {
        assert!(matches!(
            IdentityWordPair::new(alloc::vec![], alloc::vec![0]),
            Err(Error::EmptyWord)
        ));
        assert!(matches!(
            IdentityWordPair::new(alloc::vec![0], alloc::vec![2, 0]),
            Err(Error::SparseVariables { variable: 1 })
        ));
    }

    #[test]
    fn band_satisfies_band_identity() {
        let s = rz2m();
        let all: Vec<usize> = (0..s.size()).collect();
        let band = IdentityWordPair::new(alloc::vec![0], alloc::vec![0, 0]).unwrap();
        assert_eq!(satisfies(&s, &all, &band).unwrap(), None);
    }

    #[test]
    fn right_zero_band_fails_commutativity_with_witness() {
        let s = rz2m();
        let c0 = s.index_of(&pt(&[Some(0), Some(0)])).unwrap();
        let c1 = s.index_of(&pt(&[Some(1), Some(1)])).unwrap();
        let comm = IdentityWordPair::new(alloc::vec![0, 1], alloc::vec![1, 0]).unwrap();
        // {c0, c1} is closed: products always equal the right factor
        let v = satisfies(&s, &[c0, c1], &comm).unwrap().expect("violation");
        assert_eq!(v.substitution.len(), 2);
        assert_ne!(v.left_value, v.right_value);
        // full monoid also fails, semilattices do not
        assert!(satisfies(&s, &[c0, c1, 0], &comm).unwrap().is_some());
    }

    #[test]
    fn semilattice_satisfies_commutativity() {
        let gens = alloc::vec![
            pt(&[Some(0), Some(1), Some(2)]),
            pt(&[Some(0), Some(1), None]),
            pt(&[Some(0), None, None]),
        ];
        let s = FiniteSemigroup::enumerate(&gens, 10).unwrap();
        let all: Vec<usize> = (0..s.size()).collect();
        let comm = IdentityWordPair::new(alloc::vec![0, 1], alloc::vec![1, 0]).unwrap();
        assert_eq!(satisfies(&s, &all, &comm).unwrap(), None);
    }

    #[test]
    fn unclosed_subset_is_rejected() {
        // {cycle} alone is not closed in T3: cycle² escapes the subset
        let t3 = FiniteSemigroup::enumerate(
            &[
                pt(&[Some(1), Some(2), Some(0)]),
                pt(&[Some(1), Some(0), Some(2)]),
                pt(&[Some(0), Some(1), Some(0)]),
            ],
            100,
        )
        .unwrap();
        let cyc = t3.index_of(&pt(&[Some(1), Some(2), Some(0)])).unwrap();
        let band = IdentityWordPair::new(alloc::vec![0, 0], alloc::vec![0]).unwrap();
        assert!(matches!(
            satisfies(&t3, &[cyc], &band),
            Err(Error::NotClosed { .. })
        ));
    }

    #[test]
    fn sweep_cap_is_enforced() {
        // 65 elements with a 4-variable identity exceeds 64^4
        let m = 65;
        let beta = Pt::from_fn(m, |x| Some((x + 1) % m));
        let s = FiniteSemigroup::enumerate(&[beta], 100).unwrap();
        let all: Vec<usize> = (0..s.size()).collect();
        let id = IdentityWordPair::new(alloc::vec![0, 1, 2, 3], alloc::vec![3, 2, 1, 0]).unwrap();
        assert!(matches!(
            satisfies(&s, &all, &id),
            Err(Error::SweepTooLarge { .. })
        ));
    }

    #[test]
    fn catalog_is_fixed_and_classified() {
        let cat = catalog();
        assert!(cat.len() >= 8);
        let names: Vec<&str> = cat.iter().map(|(n, _)| *n).collect();
        assert!(names.contains(&"rectangular"));
        let rect = &cat.iter().find(|(n, _)| *n == "rectangular").unwrap().1;
        assert_eq!(rect.classify(), Typicality::Heterotypical);
        let comm = &cat.iter().find(|(n, _)| *n == "commutativity").unwrap().1;
        assert_eq!(comm.classify(), Typicality::Homotypical);
        assert_eq!(rect.display(), "x = xyx");
    }

    #[test]
    fn heterotypical_on_band_forces_rectangular() {
        // bands satisfying any heterotypical catalog identity also satisfy
        // x = xyx
        let bands: Vec<Vec<Pt>> = alloc::vec![
            // right-zero band
            alloc::vec![pt(&[Some(0), Some(0)]), pt(&[Some(1), Some(1)])],
            // left-zero band on 2 points: partial identities with fixed domains
            alloc::vec![
                pt(&[Some(0), Some(0), None]),
                pt(&[None, Some(1), Some(1)]),
            ],
        ];
        let rect = IdentityWordPair::new(alloc::vec![0], alloc::vec![0, 1, 0]).unwrap();
        for gens in bands {
            let s = FiniteSemigroup::enumerate(&gens, 100).unwrap();
            if !s.classify().is_band {
                continue;
            }
            let all: Vec<usize> = (0..s.size()).collect();
            let sat_het = catalog()
                .iter()
                .filter(|(_, id)| id.classify() == Typicality::Heterotypical)
                .any(|(_, id)| satisfies(&s, &all, id).unwrap().is_none());
            if sat_het {
                assert_eq!(satisfies(&s, &all, &rect).unwrap(), None);
            }
        }
    }

    #[test]
    fn monotone_under_closed_subsets() {
        let s = rz2m();
        let all: Vec<usize> = (0..s.size()).collect();
        for (_, id) in catalog() {
            if satisfies(&s, &all, &id).unwrap().is_none() {
                // every closed subset inherits the identity
                let c0 = s.index_of(&pt(&[Some(0), Some(0)])).unwrap();
                let c1 = s.index_of(&pt(&[Some(1), Some(1)])).unwrap();
                assert_eq!(satisfies(&s, &[c0, c1], &id).unwrap(), None);
            }
        }
    }
}
