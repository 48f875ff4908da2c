//! Partial transformations of a finite point set, and the flattened
//! carrier `Z = X × {0, …, m−1}` used by the embedding constructions.
//!
//! Everything acts on the right: `f.compose(&g)` applies `f` first, then
//! `g`, matching the product notation `fg`. Values are immutable after
//! construction and all operations are pure, so they may be shared and
//! used concurrently without synchronisation.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Sentinel for an undefined image; never exposed.
const UNDEF: u32 = u32::MAX;

/// A partial self-map of `{0, …, d−1}` stored as its full image sequence.
///
/// The representation is canonical: two values are equal exactly when
/// their degrees agree and their image sequences agree entrywise. The
/// derived ordering compares degree first, then image sequences with
/// undefined entries sorting after all defined points.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialTransformation {
    images: Vec<u32>,
}

impl PartialTransformation {
    /// Identity mapping on `degree` points.
    pub fn identity(degree: usize) -> Self {
        assert!(degree < UNDEF as usize, "degree too large");
        Self {
            images: (0..degree as u32).collect(),
        }
    }

    /// Empty mapping (defined nowhere) on `degree` points.
    pub fn empty(degree: usize) -> Self {
        assert!(degree < UNDEF as usize, "degree too large");
        Self {
            images: alloc::vec![UNDEF; degree],
        }
    }

    /// Builds a transformation from an explicit image sequence.
    pub fn from_images(images: &[Option<usize>]) -> Result<Self> {
        let degree = images.len();
        if degree >= UNDEF as usize {
            return Err(Error::CarrierTooLarge {
                base_size: degree,
                interval_count: 1,
            });
        }
        let mut raw = Vec::with_capacity(degree);
        for &img in images {
            match img {
                None => raw.push(UNDEF),
                Some(y) if y < degree => raw.push(y as u32),
                Some(y) => {
                    return Err(Error::PointOutOfRange {
                        point: y,
                        degree,
                    })
                }
            }
        }
        Ok(Self { images: raw })
    }

    /// Builds a transformation by evaluating `f` at every point.
    /// Panics if `f` ever returns an out-of-range image.
    pub fn from_fn(degree: usize, mut f: impl FnMut(usize) -> Option<usize>) -> Self {
        assert!(degree < UNDEF as usize, "degree too large");
        let images = (0..degree)
            .map(|x| match f(x) {
                None => UNDEF,
                Some(y) => {
                    assert!(y < degree, "image {y} out of range for degree {degree}");
                    y as u32
                }
            })
            .collect();
        Self { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of a point, or `None` where the map is undefined.
    pub fn image(&self, x: usize) -> Option<usize> {
        match self.images[x] {
            UNDEF => None,
            y => Some(y as usize),
        }
    }

    pub fn images(&self) -> impl Iterator<Item = Option<usize>> + '_ {
        self.images.iter().map(|&y| match y {
            UNDEF => None,
            y => Some(y as usize),
        })
    }

    /// Points at which the map is defined, in increasing order.
    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.images
            .iter()
            .enumerate()
            .filter(|(_, &y)| y != UNDEF)
            .map(|(x, _)| x)
    }

    pub fn domain_size(&self) -> usize {
        self.images.iter().filter(|&&y| y != UNDEF).count()
    }

    pub fn is_empty_map(&self) -> bool {
        self.images.iter().all(|&y| y == UNDEF)
    }

    pub fn is_total(&self) -> bool {
        self.images.iter().all(|&y| y != UNDEF)
    }

    /// Total and bijective.
    pub fn is_permutation(&self) -> bool {
        let mut seen = alloc::vec![false; self.degree()];
        for &y in &self.images {
            if y == UNDEF || seen[y as usize] {
                return false;
            }
            seen[y as usize] = true;
        }
        true
    }

    /// Right-action composition: apply `self` first, then `g`.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        if self.degree() != g.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: g.degree(),
            });
        }
        let images = self
            .images
            .iter()
            .map(|&y| if y == UNDEF { UNDEF } else { g.images[y as usize] })
            .collect();
        Ok(Self { images })
    }

    /// Inverse of a total permutation, `None` otherwise.
    pub fn inverse(&self) -> Option<Self> {
        if !self.is_permutation() {
            return None;
        }
        let mut images = alloc::vec![UNDEF; self.degree()];
        for (x, &y) in self.images.iter().enumerate() {
            images[y as usize] = x as u32;
        }
        Some(Self { images })
    }

    /// Iterated composition. `power(0)` is the identity by convention;
    /// negative exponents are only meaningful for total permutations,
    /// where `f^{-k}` is the `k`-th power of the inverse.
    pub fn power(&self, k: i64) -> Result<Self> {
        if k < 0 {
            let inv = self.inverse().ok_or(Error::NegativePower)?;
            let k = k.checked_neg().ok_or(Error::Overflow {
                context: "power exponent",
            })?;
            return inv.power(k);
        }
        let mut acc = Self::identity(self.degree());
        let mut base = self.clone();
        let mut e = k as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.compose(&base)?;
            }
        }
        Ok(acc)
    }

    /// `f` is idempotent iff `ff = f`, equivalently iff `f` fixes every
    /// point of its range.
    pub fn is_idempotent(&self) -> bool {
        for &y in &self.images {
            if y != UNDEF && self.images[y as usize] != y {
                return false;
            }
        }
        true
    }

    /// True iff some `k ≥ 1` has `f^{k+1} = f`, i.e. the cyclic
    /// subsemigroup generated by `f` is a group with `f` in it. No
    /// ambient semigroup is needed for this test.
    pub fn is_group_element(&self) -> bool {
        if self.is_permutation() {
            return true;
        }
        // Walk powers until the first repeat; f is a group element iff
        // the repeat closes back onto f itself.
        let mut seen: BTreeMap<Self, usize> = BTreeMap::new();
        seen.insert(self.clone(), 1);
        let mut cur = self.clone();
        let mut k = 1usize;
        loop {
            cur = cur.compose(self).expect("equal degrees");
            k += 1;
            if let Some(&first) = seen.get(&cur) {
                return first == 1;
            }
            seen.insert(cur.clone(), k);
        }
    }

    /// Keeps the images only at the given points; everywhere else the
    /// result is undefined. The degree does not change.
    pub fn restrict(&self, points: &[usize]) -> Result<Self> {
        let mut keep = alloc::vec![false; self.degree()];
        for &p in points {
            if p >= self.degree() {
                return Err(Error::PointOutOfRange {
                    point: p,
                    degree: self.degree(),
                });
            }
            keep[p] = true;
        }
        let images = self
            .images
            .iter()
            .enumerate()
            .map(|(x, &y)| if keep[x] { y } else { UNDEF })
            .collect();
        Ok(Self { images })
    }

    /// The transformation induced on a sub-point-set, relabelled by the
    /// position of each point in `points`. Images falling outside the
    /// subset become undefined.
    pub fn restriction_to(&self, points: &[usize]) -> Result<Self> {
        let mut position = alloc::vec![None; self.degree()];
        for (i, &p) in points.iter().enumerate() {
            if p >= self.degree() {
                return Err(Error::PointOutOfRange {
                    point: p,
                    degree: self.degree(),
                });
            }
            if position[p].is_some() {
                return Err(Error::DuplicatePoint { point: p });
            }
            position[p] = Some(i);
        }
        let images = points
            .iter()
            .map(|&p| match self.images[p] {
                UNDEF => UNDEF,
                y => match position[y as usize] {
                    Some(i) => i as u32,
                    None => UNDEF,
                },
            })
            .collect();
        Ok(Self { images })
    }
}

impl fmt::Debug for PartialTransformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, y) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            match *y {
                UNDEF => write!(f, "-")?,
                y => write!(f, "{y}")?,
            }
        }
        write!(f, "]")
    }
}

impl fmt::Display for PartialTransformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// The carrier `Z = X × {0, …, m−1}`: `base_size` points per interval,
/// `interval_count` intervals, encoded interval-major as `i·|X| + x`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct PointSetZ {
    base_size: usize,
    interval_count: usize,
}

impl PointSetZ {
    pub fn new(base_size: usize, interval_count: usize) -> Result<Self> {
        if base_size == 0 || interval_count == 0 {
            return Err(Error::CarrierTooLarge {
                base_size,
                interval_count,
            });
        }
        match base_size.checked_mul(interval_count) {
            Some(p) if p < UNDEF as usize => Ok(Self {
                base_size,
                interval_count,
            }),
            _ => Err(Error::CarrierTooLarge {
                base_size,
                interval_count,
            }),
        }
    }

    pub fn base_size(&self) -> usize {
        self.base_size
    }

    pub fn interval_count(&self) -> usize {
        self.interval_count
    }

    /// Total number of points `|X| · m`.
    pub fn points(&self) -> usize {
        self.base_size * self.interval_count
    }

    /// Encodes `(x, i)` as `i·|X| + x`.
    pub fn encode(&self, x: usize, i: usize) -> usize {
        debug_assert!(x < self.base_size && i < self.interval_count);
        i * self.base_size + x
    }

    /// Inverse of [`encode`](Self::encode): returns `(x, i)`.
    pub fn decode(&self, p: usize) -> (usize, usize) {
        debug_assert!(p < self.points());
        (p % self.base_size, p / self.base_size)
    }

    pub fn interval_of(&self, p: usize) -> usize {
        p / self.base_size
    }

    pub fn base_point_of(&self, p: usize) -> usize {
        p % self.base_size
    }

    /// Identity of the carrier restricted to the interval `X × {i}`.
    pub fn interval_identity(&self, i: usize) -> PartialTransformation {
        let lo = i * self.base_size;
        let hi = lo + self.base_size;
        PartialTransformation::from_fn(self.points(), |p| (lo..hi).contains(&p).then_some(p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(images: &[Option<usize>]) -> PartialTransformation {
        PartialTransformation::from_images(images).unwrap()
    }

    #[test]
    fn compose_identity_is_neutral() {
        let f = pt(&[Some(2), None, Some(0), Some(2)]);
        let id = PartialTransformation::identity(4);
        assert_eq!(id.compose(&f).unwrap(), f);
        assert_eq!(f.compose(&id).unwrap(), f);
    }

    #[test]
    fn compose_empty_absorbs() {
        let f = pt(&[Some(2), None, Some(0), Some(2)]);
        let empty = PartialTransformation::empty(4);
        assert_eq!(f.compose(&empty).unwrap(), empty);
        assert_eq!(empty.compose(&f).unwrap(), empty);
    }

    #[test]
    fn compose_degree_mismatch_is_an_error() {
        let f = PartialTransformation::identity(3);
        let g = PartialTransformation::identity(4);
        assert_eq!(
            f.compose(&g),
            Err(Error::DegreeMismatch { left: 3, right: 4 })
        );
    }

    #[test]
    fn power_of_cycle_closes() {
        let m = 7;
        let beta = PartialTransformation::from_fn(m, |x| Some((x + 1) % m));
        assert_eq!(beta.power(m as i64).unwrap(), PartialTransformation::identity(m));
        assert_eq!(beta.power(1).unwrap(), beta);
        assert_eq!(beta.power(0).unwrap(), PartialTransformation::identity(m));
        // negative exponents reduce mod the order
        assert_eq!(beta.power(-3).unwrap(), beta.power(4).unwrap());
    }

    #[test]
    fn negative_power_of_non_permutation_fails() {
        let f = pt(&[Some(0), Some(0)]);
        assert_eq!(f.power(-1), Err(Error::NegativePower));
    }

    #[test]
    fn nilpotent_squares_to_empty() {
        // maps interval-like upper half to lower half of 4 points
        let f = pt(&[None, None, Some(0), Some(1)]);
        assert!(f.compose(&f).unwrap().is_empty_map());
        assert!(!f.is_group_element());
    }

    #[test]
    fn cube_root_style_group_element() {
        // f = f^3 with f^2 != f: a 2-cycle extended by a defect point
        let f = pt(&[Some(1), Some(0), Some(0)]);
        let f3 = f.power(3).unwrap();
        assert_eq!(f3, f);
        assert_ne!(f.power(2).unwrap(), f);
        assert!(f.is_group_element());
    }

    #[test]
    fn idempotent_iff_fixes_range() {
        let e = pt(&[Some(0), Some(0), None, Some(3)]);
        assert!(e.is_idempotent());
        assert!(PartialTransformation::identity(5).is_idempotent());
        let not = pt(&[Some(1), Some(0)]);
        assert!(!not.is_idempotent());
    }

    #[test]
    fn restrict_keeps_only_listed_points() {
        let f = pt(&[Some(2), Some(2), Some(1)]);
        let r = f.restrict(&[0, 2]).unwrap();
        assert_eq!(r, pt(&[Some(2), None, Some(1)]));
        assert!(f.restrict(&[5]).is_err());
    }

    #[test]
    fn restriction_to_relabels() {
        let f = pt(&[Some(0), Some(3), Some(3), Some(0)]);
        // induced on {0, 3}: 0 -> 0, 3 -> 0
        let r = f.restriction_to(&[0, 3]).unwrap();
        assert_eq!(r, pt(&[Some(0), Some(0)]));
    }

    #[test]
    fn carrier_encoding_round_trips() {
        let z = PointSetZ::new(3, 5).unwrap();
        assert_eq!(z.points(), 15);
        for x in 0..3 {
            for i in 0..5 {
                let p = z.encode(x, i);
                assert_eq!(z.decode(p), (x, i));
            }
        }
        assert!(PointSetZ::new(0, 5).is_err());
    }

    #[test]
    fn display_marks_undefined_points() {
        let f = pt(&[Some(1), None]);
        assert_eq!(alloc::format!("{f}"), "[1 -]");
    }
}
