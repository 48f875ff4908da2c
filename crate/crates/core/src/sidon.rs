//! Sidon sequences: strictly increasing non-negative integers whose
//! pairwise differences are all distinct. The greedy (Mian–Chowla)
//! generator and the powers-of-two sequence supply the interval spacing
//! for the embedding constructions; the translate and four-term-sum
//! facts below are what keep the constructions collision-free.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A strictly increasing sequence of non-negative integers in which every
/// difference of a distinct pair occurs at most once. Construction
/// validates both properties.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SidonSequence {
    terms: Vec<u64>,
}

/// Two distinct pairs sharing a difference — the witness that a sequence
/// is not Sidon.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiffCollision {
    pub low_a: u64,
    pub high_a: u64,
    pub low_b: u64,
    pub high_b: u64,
    pub difference: u64,
}

fn check_monotone(terms: &[u64]) -> Result<()> {
    for i in 1..terms.len() {
        if terms[i] <= terms[i - 1] {
            return Err(Error::NotMonotone { position: i });
        }
    }
    Ok(())
}

/// Finds a repeated difference in a strictly increasing sequence, or
/// `None` if the sequence is Sidon. Errors on non-monotone input.
pub fn sidon_witness(terms: &[u64]) -> Result<Option<DiffCollision>> {
    check_monotone(terms)?;
    let mut by_diff: BTreeMap<u64, (u64, u64)> = BTreeMap::new();
    for j in 0..terms.len() {
        for i in 0..j {
            let d = terms[j] - terms[i];
            if let Some(&(lo, hi)) = by_diff.get(&d) {
                return Ok(Some(DiffCollision {
                    low_a: lo,
                    high_a: hi,
                    low_b: terms[i],
                    high_b: terms[j],
                    difference: d,
                }));
            }
            by_diff.insert(d, (terms[i], terms[j]));
        }
    }
    Ok(None)
}

/// True iff all differences of distinct pairs are distinct. Equivalent to
/// the pairwise-sum formulation (all sums `t_j + t_k`, `j ≤ k`, distinct).
pub fn is_sidon(terms: &[u64]) -> Result<bool> {
    Ok(sidon_witness(terms)?.is_none())
}

impl SidonSequence {
    pub fn new(terms: Vec<u64>) -> Result<Self> {
        match sidon_witness(&terms)? {
            None => Ok(Self { terms }),
            Some(w) => Err(Error::NotSidon {
                low_a: w.low_a,
                high_a: w.high_a,
                low_b: w.low_b,
                high_b: w.high_b,
                difference: w.difference,
            }),
        }
    }

    pub fn terms(&self) -> &[u64] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, i: usize) -> u64 {
        self.terms[i]
    }

    /// The modulus `m = 1 + last term` used when the terms label
    /// intervals on a cycle of length `m`.
    pub fn modulus(&self) -> u64 {
        1 + *self.terms.last().expect("nonempty sequence")
    }

    /// First `k` terms. Subsequences inherit the Sidon property, so no
    /// re-validation is needed.
    pub fn prefix(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.terms.len() {
            return Err(Error::SequenceTooShort {
                needed: k.max(1),
                got: self.terms.len(),
            });
        }
        Ok(Self {
            terms: self.terms[..k].to_vec(),
        })
    }
}

/// First `k` terms of the greedy Sidon sequence 0, 1, 3, 7, 12, 20, …:
/// each term is the least integer exceeding its predecessor that keeps
/// all pairwise differences distinct.
pub fn mian_chowla(k: usize) -> Result<SidonSequence> {
    if k == 0 {
        return Err(Error::SequenceTooShort { needed: 1, got: 0 });
    }
    let mut terms: Vec<u64> = Vec::with_capacity(k);
    let mut diffs: alloc::collections::BTreeSet<u64> = alloc::collections::BTreeSet::new();
    terms.push(0);
    while terms.len() < k {
        let mut cand = terms.last().unwrap() + 1;
        'scan: loop {
            // differences cand - t must be fresh and pairwise distinct
            let mut new: Vec<u64> = Vec::with_capacity(terms.len());
            for &t in &terms {
                let d = cand - t;
                if diffs.contains(&d) || new.contains(&d) {
                    cand += 1;
                    continue 'scan;
                }
                new.push(d);
            }
            diffs.extend(new);
            terms.push(cand);
            break;
        }
    }
    Ok(SidonSequence { terms })
}

/// The sequence `2^0, 2^1, …, 2^{k−1}`. Unlike the greedy sequence this
/// variant starts at 1, not 0. Powers of a fixed base are Sidon.
pub fn powers_of_two(k: usize) -> Result<SidonSequence> {
    if k == 0 {
        return Err(Error::SequenceTooShort { needed: 1, got: 0 });
    }
    if k > 64 {
        return Err(Error::Overflow {
            context: "powers of two",
        });
    }
    let terms = (0..k as u32).map(|i| 1u64 << i).collect();
    Ok(SidonSequence { terms })
}

/// Largest subset of the terms that some nonzero translate (mod `m`)
/// maps back into the terms, together with a witnessing subset and
/// shift. For a Sidon sequence the size never exceeds 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslateOverlap {
    pub size: usize,
    pub shift: u64,
    pub subset: Vec<u64>,
}

/// Over all `r ≢ 0 (mod m)`, the maximal `A ⊆ M` with `(A + r) mod m ⊆ M`.
/// The maximal such `A` for a given `r` is exactly
/// `{a ∈ M : (a + r) mod m ∈ M}`, so the sweep is linear per shift.
pub fn max_translate_overlap(seq: &SidonSequence) -> TranslateOverlap {
    let m = seq.modulus();
    let member: alloc::collections::BTreeSet<u64> = seq.terms.iter().copied().collect();
    let mut best = TranslateOverlap {
        size: 0,
        shift: 0,
        subset: Vec::new(),
    };
    for r in 1..m {
        let subset: Vec<u64> = seq
            .terms
            .iter()
            .copied()
            .filter(|&a| member.contains(&((a + r) % m)))
            .collect();
        if subset.len() > best.size {
            best = TranslateOverlap {
                size: subset.len(),
                shift: r,
                subset,
            };
        }
    }
    best
}

/// A quadruple of indices `i ≥ j`, `k ≥ l` with
/// `(t_i + t_j) − (t_k + t_l) = t_last + t_0` that is not of the rigid
/// shape `i = last, l = 0, j = k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FourTermWitness {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
}

/// Exhaustively looks for a violation of the four-term rigidity property
/// on an arbitrary term list. Powers of two satisfy it; the greedy
/// sequence does not (e.g. its 11-term prefix, where
/// `(t_8 + t_7) − (t_4 + t_1) = 109 − 13 = 96 = t_10 + t_0`).
pub fn four_term_witness(terms: &[u64]) -> Option<FourTermWitness> {
    let n = terms.len().checked_sub(1)?;
    let target = terms[n] as i128 + terms[0] as i128;
    for i in 0..=n {
        for j in 0..=i {
            for k in 0..=n {
                for l in 0..=k {
                    let lhs = (terms[i] as i128 + terms[j] as i128)
                        - (terms[k] as i128 + terms[l] as i128);
                    if lhs == target && !(i == n && l == 0 && j == k) {
                        return Some(FourTermWitness { i, j, k, l });
                    }
                }
            }
        }
    }
    None
}

/// Exhaustively verifies the rigidity of four-term sums of powers of two:
/// for all `i ≥ j`, `k ≥ l ≤ n`, if `(2^i + 2^j) − (2^k + 2^l) = 2^n + 1`
/// then `i = n`, `l = 0` and `j = k`.
pub fn check_power_sum(n: u32) -> bool {
    assert!(n <= 126, "exponent bound too large for exact arithmetic");
    let pow = |e: u32| -> i128 { 1i128 << e };
    let target = pow(n) + pow(0);
    for i in 0..=n {
        for j in 0..=i {
            for k in 0..=n {
                for l in 0..=k {
                    if (pow(i) + pow(j)) - (pow(k) + pow(l)) == target
                        && !(i == n && l == 0 && j == k)
                    {
                        return false;
                    }
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    const GREEDY_17: [u64; 17] = [
        0, 1, 3, 7, 12, 20, 30, 44, 65, 80, 96, 122, 147, 181, 203, 251, 289,
    ];

    #[test]
    fn greedy_sequence_first_seventeen_terms() {
        assert_eq!(mian_chowla(17).unwrap().terms(), &GREEDY_17);
    }

    #[test]
    fn greedy_sequence_starts_at_zero() {
        assert_eq!(mian_chowla(1).unwrap().terms(), &[0]);
    }

    #[test]
    fn greedy_terms_are_minimal() {
        // replacing any term by a smaller candidate breaks the property
        let seq = mian_chowla(6).unwrap();
        assert_eq!(seq.terms(), &[0, 1, 3, 7, 12, 20]);
        for i in 1..seq.len() {
            for cand in seq.get(i - 1) + 1..seq.get(i) {
                let mut probe = seq.terms()[..i].to_vec();
                probe.push(cand);
                assert!(
                    !is_sidon(&probe).unwrap(),
                    "candidate {cand} at position {i} should collide"
                );
            }
        }
    }

    #[test]
    fn greedy_growth_bound() {
        let seq = mian_chowla(20).unwrap();
        for (i, &t) in seq.terms().iter().enumerate() {
            assert!(t <= (1u64 << i) - 1 || i == 0);
        }
    }

    #[test]
    fn powers_of_two_basics() {
        let seq = powers_of_two(6).unwrap();
        assert_eq!(seq.terms(), &[1, 2, 4, 8, 16, 32]);
        assert!(is_sidon(seq.terms()).unwrap());
        assert_eq!(seq.modulus(), 33);
        // the orthodox construction uses 2n terms; n = 3 gives modulus 33
        assert_eq!(powers_of_two(2 * 3).unwrap().modulus(), 1 + (1 << 5));
        assert!(powers_of_two(65).is_err());
    }

    #[test]
    fn short_arithmetic_run_is_not_sidon() {
        assert!(!is_sidon(&[0, 1, 2]).unwrap());
    }

    #[test]
    fn difference_witness_on_a_near_greedy_list() {
        // 109 fails after 96 because 109 - 96 = 13 = 20 - 7
        let terms = [0, 1, 3, 7, 12, 20, 30, 44, 65, 80, 96, 109];
        let w = sidon_witness(&terms).unwrap().expect("collision");
        assert_eq!(w.difference, 13);
        assert_eq!((w.low_a, w.high_a), (7, 20));
        assert_eq!((w.low_b, w.high_b), (96, 109));
    }

    #[test]
    fn non_monotone_input_is_an_error() {
        assert!(matches!(
            is_sidon(&[0, 5, 5]),
            Err(Error::NotMonotone { position: 2 })
        ));
        assert!(SidonSequence::new(alloc::vec![3, 1]).is_err());
    }

    #[test]
    fn translate_overlap_bounded_by_two() {
        let mc = mian_chowla(6).unwrap();
        assert_eq!(mc.modulus(), 21);
        assert!(max_translate_overlap(&mc).size <= 2);
        let p2 = powers_of_two(6).unwrap();
        let t = max_translate_overlap(&p2);
        assert!(t.size <= 2);
        // witness really maps back into the terms
        let member: alloc::collections::BTreeSet<u64> = p2.terms().iter().copied().collect();
        for &a in &t.subset {
            assert!(member.contains(&((a + t.shift) % p2.modulus())));
        }
    }

    #[test]
    fn translate_overlap_degenerate_singleton() {
        let s = SidonSequence::new(alloc::vec![0]).unwrap();
        assert_eq!(max_translate_overlap(&s).size, 0);
    }

    #[test]
    fn power_sum_rigidity_holds_for_small_bounds() {
        assert!(check_power_sum(5));
        assert!(check_power_sum(16));
    }

    #[test]
    fn greedy_prefix_fails_four_term_rigidity() {
        // 44 + 65 = 109 = 96 + 12 + 1 + 0 on the 11-term prefix
        let mc = mian_chowla(11).unwrap();
        let t = mc.terms();
        assert_eq!((t[7] + t[8]) - (t[4] + t[1]), t[10] + t[0]);
        let w = four_term_witness(t).expect("violation");
        let lhs = (t[w.i] + t[w.j]) as i128 - (t[w.k] + t[w.l]) as i128;
        assert_eq!(lhs, (t[10] + t[0]) as i128);
        // powers of two have no violation
        assert!(four_term_witness(powers_of_two(11).unwrap().terms()).is_none());
    }

    #[test]
    fn prefixes_stay_sidon() {
        let seq = mian_chowla(12).unwrap();
        for k in 1..=12 {
            assert!(is_sidon(seq.prefix(k).unwrap().terms()).unwrap());
        }
    }
}
