//! The four embedding constructions, each producing a concrete
//! certificate: a pair of generators `(alpha, beta)` acting on the
//! flattened carrier `Z = X × {0, …, m−1}` together with the map sending
//! each source element to its copy inside the generated semigroup.
//!
//! * `t11` — `beta` walks a strip of `n+1` intervals (a nilpotent),
//!   `alpha` collapses every interval to the zeroth one through the
//!   source action; works for any finite semigroup.
//! * `tn` — the rank-`n` full transformation monoid inside a
//!   two-generator subsemigroup on `n+1` points, recovered through the
//!   corner of the idempotent `alpha²`.
//! * `band_s3` — `beta` cycles `m` intervals, `alpha` lives on `n`
//!   sparsely spaced intervals chosen from a Sidon sequence and is
//!   nilpotent of index 2; preserves "idempotents form a subsemigroup".
//! * `orthodox_s4` — same skeleton over the powers-of-two spacing, with
//!   `alpha`'s domain widened by chosen inverses so that `alpha = alpha³`
//!   is a group element; preserves orthodoxy and inversity.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::ptrans::{PartialTransformation, PointSetZ};
use crate::semigroup::FiniteSemigroup;
use crate::sidon::{powers_of_two, sidon_witness, SidonSequence};

/// Which construction produced a certificate. The string forms are the
/// certificate file tags.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    T11,
    Tn,
    BandS3,
    OrthodoxS4,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::T11 => "t11",
            Method::Tn => "tn",
            Method::BandS3 => "band_s3",
            Method::OrthodoxS4 => "orthodox_s4",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "t11" => Some(Method::T11),
            "tn" => Some(Method::Tn),
            "band_s3" => Some(Method::BandS3),
            "orthodox_s4" => Some(Method::OrthodoxS4),
            _ => None,
        }
    }
}

/// How to pick the fixed inverse of each source element for the
/// orthodox construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InverseChoice {
    /// Lexicographically least inverse under the image-sequence order
    /// (undefined images sort after all defined points).
    Least,
    /// The element itself when it is idempotent, otherwise the least.
    SelfIfIdempotent,
    /// An explicit table: entry `i` is the source index of the chosen
    /// inverse of element `i`. Validated.
    Table(Vec<usize>),
}

/// Named witnesses of the `tn` construction: the defect-1 idempotent
/// `epsilon = alpha²` whose corner carries the copy, and the two derived
/// generators of that corner.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TnWitnesses {
    pub epsilon: PartialTransformation,
    pub kappa: PartialTransformation,
    pub phi: PartialTransformation,
}

/// A concrete embedding: generators over the flattened carrier, the
/// ordered source element list (identity first), and the image of each
/// source element inside `⟨alpha, beta⟩`.
#[derive(Clone, Debug)]
pub struct EmbeddingCertificate {
    pub method: Method,
    pub carrier: PointSetZ,
    pub alpha: PartialTransformation,
    pub beta: PartialTransformation,
    /// Source elements on the base set, with the identity at index 0.
    pub source: Vec<PartialTransformation>,
    /// Chosen inverse of each source element (orthodox method only).
    pub inverses: Option<Vec<usize>>,
    /// The spacing terms actually used (band and orthodox methods).
    pub sidon_terms: Option<Vec<u64>>,
    /// Which diagonal copy carries the embedding.
    pub slot: usize,
    /// Image of each source element as a transformation of the carrier.
    pub element_map: Vec<PartialTransformation>,
    pub witnesses: Option<TnWitnesses>,
    /// True when the identity map was not in the input and was adjoined.
    pub adjoined_identity: bool,
}

impl EmbeddingCertificate {
    /// Number of source elements.
    pub fn n(&self) -> usize {
        self.source.len()
    }

    /// Number of intervals of the carrier.
    pub fn m(&self) -> usize {
        self.carrier.interval_count()
    }

    pub fn source_index_map(&self) -> BTreeMap<PartialTransformation, usize> {
        self.source
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect()
    }
}

/// Normalises a source element list: uniform degree, no empty domains,
/// closed under composition, deduplicated, and with the identity at
/// index 0 (adjoined when absent — this never disturbs closure, bands of
/// idempotents, orthodoxy or inversity).
pub fn prepare_source(elements: &[PartialTransformation]) -> Result<(Vec<PartialTransformation>, bool)> {
    if elements.is_empty() {
        return Err(Error::NoGenerators);
    }
    let degree = elements[0].degree();
    let mut list: Vec<PartialTransformation> = Vec::new();
    let mut set: BTreeSet<PartialTransformation> = BTreeSet::new();
    for (i, t) in elements.iter().enumerate() {
        if t.degree() != degree {
            return Err(Error::DegreeMismatch {
                left: degree,
                right: t.degree(),
            });
        }
        if t.is_empty_map() {
            return Err(Error::EmptyMapping { index: i });
        }
        if set.insert(t.clone()) {
            list.push(t.clone());
        }
    }
    for (a, ta) in list.iter().enumerate() {
        for (b, tb) in list.iter().enumerate() {
            let p = ta.compose(tb)?;
            if !set.contains(&p) {
                return Err(Error::NotClosed { left: a, right: b });
            }
        }
    }
    let identity = PartialTransformation::identity(degree);
    let adjoined = !set.contains(&identity);
    let mut source = Vec::with_capacity(list.len() + 1);
    source.push(identity.clone());
    source.extend(list.into_iter().filter(|t| *t != identity));
    Ok((source, adjoined))
}

/// Embeds any finite semigroup into `⟨alpha, beta⟩` where `alpha` is an
/// idempotent and `beta` is a nilpotent: the carrier is a strip of
/// `n + 1` intervals, `beta` shifts along the strip without wraparound,
/// and `alpha` sends interval `i` to interval 0 through the action of
/// the `i`-th source element (the identity on the last interval).
pub fn embed_idempotent_nilpotent(
    elements: &[PartialTransformation],
) -> Result<EmbeddingCertificate> {
    let (source, adjoined) = prepare_source(elements)?;
    let n = source.len();
    let base = source[0].degree();
    let carrier = PointSetZ::new(base, n + 1)?;
    let points = carrier.points();

    let alpha = PartialTransformation::from_fn(points, |p| {
        let (x, i) = carrier.decode(p);
        let y = if i == n { Some(x) } else { source[i].image(x) };
        y.map(|y| carrier.encode(y, 0))
    });
    let beta = PartialTransformation::from_fn(points, |p| {
        let (x, i) = carrier.decode(p);
        (i < n).then(|| carrier.encode(x, i + 1))
    });

    assert!(alpha.is_idempotent(), "strip collapse must be idempotent");
    assert!(
        beta.power(n as i64 + 1)?.is_empty_map(),
        "strip shift must be nilpotent of index n + 1"
    );
    let lam = beta.power(n as i64)?.compose(&alpha)?;
    assert_eq!(
        lam,
        carrier.interval_identity(0),
        "the zero-interval projection must be the identity there"
    );

    let mut element_map = Vec::with_capacity(n);
    for i in 0..n {
        let gamma = lam.compose(&beta.power(i as i64)?)?.compose(&alpha)?;
        element_map.push(gamma);
    }

    Ok(EmbeddingCertificate {
        method: Method::T11,
        carrier,
        alpha,
        beta,
        source,
        inverses: None,
        sidon_terms: None,
        slot: 0,
        element_map,
        witnesses: None,
        adjoined_identity: adjoined,
    })
}

/// The rank-`n` full transformation monoid inside a pair of group
/// elements on `n + 1` points: `beta` is the full cycle and `alpha` is
/// the transposition of 0 and 1 composed with the defect-1 idempotent
/// sending `n−1` to `n`. The corner of `epsilon = alpha²`, relabelled
/// through the points other than `n−1`, is the copy.
pub fn embed_tn_pair(n: usize, cap: usize) -> Result<EmbeddingCertificate> {
    if n < 3 {
        return Err(Error::TooSmall { size: n });
    }
    let points = n + 1;
    let carrier = PointSetZ::new(points, 1)?;
    let beta = PartialTransformation::from_fn(points, |x| Some((x + 1) % points));
    let alpha = PartialTransformation::from_fn(points, |x| {
        Some(match x {
            0 => 1,
            1 => 0,
            x if x == n - 1 => n,
            x => x,
        })
    });
    let epsilon = alpha.compose(&alpha)?;
    let kappa = epsilon.compose(&beta)?.compose(&epsilon)?;
    let beta_inv = beta.inverse().expect("cycle is a permutation");
    let phi = beta
        .compose(&epsilon)?
        .compose(&beta_inv)?
        .compose(&epsilon)?;

    // full transformation monoid of rank n from its standard generators
    let cycle = PartialTransformation::from_fn(n, |x| Some((x + 1) % n));
    let swap = PartialTransformation::from_fn(n, |x| Some(match x {
        0 => 1,
        1 => 0,
        x => x,
    }));
    let defect = PartialTransformation::from_fn(n, |x| Some(if x == n - 2 { n - 1 } else { x }));
    let full = FiniteSemigroup::enumerate(&[cycle, swap, defect], cap)?;
    assert_eq!(
        Some(full.size()),
        n.checked_pow(n as u32),
        "rank-n full transformation monoid has n^n elements"
    );

    let identity = PartialTransformation::identity(n);
    let mut source = Vec::with_capacity(full.size());
    source.push(identity.clone());
    source.extend(full.elements().iter().filter(|t| **t != identity).cloned());

    // extension into the corner: the carrier points other than n−1 are a
    // relabelled copy of the base set, and n−1 shadows n
    let to_carrier = |x: usize| if x == n - 1 { n } else { x };
    let from_carrier = |b: usize| if b == n { n - 1 } else { b };
    let element_map: Vec<PartialTransformation> = source
        .iter()
        .map(|gamma| {
            PartialTransformation::from_fn(points, |p| {
                let b = if p == n - 1 { n } else { p };
                gamma.image(from_carrier(b)).map(to_carrier)
            })
        })
        .collect();
    assert_eq!(element_map[0], epsilon, "the identity extends to epsilon");

    Ok(EmbeddingCertificate {
        method: Method::Tn,
        carrier,
        alpha,
        beta,
        source,
        inverses: None,
        sidon_terms: None,
        slot: 0,
        element_map,
        witnesses: Some(TnWitnesses {
            epsilon,
            kappa,
            phi,
        }),
        adjoined_identity: false,
    })
}

/// Band-preserving embedding: `beta` cycles `m = 1 + t_{2n−1}` intervals
/// and `alpha` maps interval `t_{n+j}` to interval `t_j` by the action
/// of source element `j`. Requires a Sidon spacing of at least `2n`
/// terms (only the first `2n` are used).
pub fn embed_band_preserving(
    elements: &[PartialTransformation],
    seq: &SidonSequence,
    slot: usize,
) -> Result<EmbeddingCertificate> {
    embed_band_inner(elements, seq.terms(), slot, true)
}

/// Same construction with the Sidon property deliberately unchecked.
/// Exists for negative controls: the verifier must flag the damage.
pub fn embed_band_preserving_unchecked(
    elements: &[PartialTransformation],
    terms: &[u64],
    slot: usize,
) -> Result<EmbeddingCertificate> {
    embed_band_inner(elements, terms, slot, false)
}

fn embed_band_inner(
    elements: &[PartialTransformation],
    terms: &[u64],
    slot: usize,
    check_sidon: bool,
) -> Result<EmbeddingCertificate> {
    let (source, adjoined) = prepare_source(elements)?;
    let n = source.len();
    if n < 3 {
        return Err(Error::TooSmall { size: n });
    }
    if terms.len() < 2 * n {
        return Err(Error::SequenceTooShort {
            needed: 2 * n,
            got: terms.len(),
        });
    }
    let used = &terms[..2 * n];
    let collision = sidon_witness(used)?;
    if check_sidon {
        if let Some(w) = collision {
            return Err(Error::NotSidon {
                low_a: w.low_a,
                high_a: w.high_a,
                low_b: w.low_b,
                high_b: w.high_b,
                difference: w.difference,
            });
        }
    }

    let (carrier, alpha, beta) = spaced_generators(&source, used, SpacedKind::UpperOnly)?;
    assert!(
        alpha.compose(&alpha)?.is_empty_map(),
        "the spaced generator must be nilpotent of index 2"
    );
    assert_eq!(
        beta.power(carrier.interval_count() as i64)?,
        PartialTransformation::identity(carrier.points()),
        "the interval cycle must have order m"
    );

    let element_map = diagonal_copy(&carrier, &alpha, &beta, used, slot)?;
    Ok(EmbeddingCertificate {
        method: Method::BandS3,
        carrier,
        alpha,
        beta,
        source,
        inverses: None,
        sidon_terms: Some(used.to_vec()),
        slot,
        element_map,
        witnesses: None,
        adjoined_identity: adjoined,
    })
}

/// Orthodoxy-preserving embedding over the powers-of-two spacing
/// `t_i = 2^i`, `m = 1 + 2^{2n−1}`. On the upper intervals `alpha` acts
/// as in the band construction; on the lower ones it climbs back up by
/// the chosen inverses, making it a group element with `alpha = alpha³`.
pub fn embed_orthodox(
    elements: &[PartialTransformation],
    choice: &InverseChoice,
    slot: usize,
) -> Result<EmbeddingCertificate> {
    let (source, adjoined) = prepare_source(elements)?;
    let n = source.len();
    if n < 3 {
        return Err(Error::TooSmall { size: n });
    }
    let inverses = choose_inverses(&source, choice)?;
    let seq = powers_of_two(2 * n)?;
    let used = seq.terms();

    let (carrier, alpha, beta) =
        spaced_generators(&source, used, SpacedKind::BothWays(&inverses))?;
    assert_eq!(
        alpha.power(3)?,
        alpha,
        "with fixed inverses the spaced generator is a group element"
    );
    assert_eq!(
        beta.power(carrier.interval_count() as i64)?,
        PartialTransformation::identity(carrier.points()),
        "the interval cycle must have order m"
    );

    let element_map = diagonal_copy(&carrier, &alpha, &beta, used, slot)?;
    Ok(EmbeddingCertificate {
        method: Method::OrthodoxS4,
        carrier,
        alpha,
        beta,
        source,
        inverses: Some(inverses),
        sidon_terms: Some(used.to_vec()),
        slot,
        element_map,
        witnesses: None,
        adjoined_identity: adjoined,
    })
}

enum SpacedKind<'a> {
    /// Domain on the upper intervals only (band construction).
    UpperOnly,
    /// Domain on all spaced intervals, climbing back up through the
    /// chosen inverses (orthodox construction).
    BothWays(&'a [usize]),
}

/// Builds the carrier and the two spaced generators from the source list
/// and the first `2n` spacing terms.
fn spaced_generators(
    source: &[PartialTransformation],
    used: &[u64],
    kind: SpacedKind<'_>,
) -> Result<(PointSetZ, PartialTransformation, PartialTransformation)> {
    let n = source.len();
    debug_assert_eq!(used.len(), 2 * n);
    let base = source[0].degree();
    let m_u64 = 1 + used[2 * n - 1];
    let m: usize = m_u64.try_into().map_err(|_| Error::CarrierTooLarge {
        base_size: base,
        interval_count: usize::MAX,
    })?;
    let carrier = PointSetZ::new(base, m)?;
    let points = carrier.points();

    // per-interval action: which source element acts, and where it lands
    let mut action: Vec<Option<(usize, usize)>> = alloc::vec![None; m];
    match kind {
        SpacedKind::UpperOnly => {
            for j in 0..n {
                action[used[n + j] as usize] = Some((j, used[j] as usize));
            }
        }
        SpacedKind::BothWays(inverses) => {
            for t in 0..2 * n {
                let (src, target) = if t < n {
                    (inverses[t], used[t + n] as usize)
                } else {
                    (t - n, used[t - n] as usize)
                };
                action[used[t] as usize] = Some((src, target));
            }
        }
    }

    let alpha = PartialTransformation::from_fn(points, |p| {
        let (x, i) = carrier.decode(p);
        action[i].and_then(|(src, target)| {
            source[src].image(x).map(|y| carrier.encode(y, target))
        })
    });
    let beta = PartialTransformation::from_fn(points, |p| {
        let (x, i) = carrier.decode(p);
        Some(carrier.encode(x, (i + 1) % m))
    });
    Ok((carrier, alpha, beta))
}

/// The images of the source elements on the diagonal copy at `slot`.
fn diagonal_copy(
    carrier: &PointSetZ,
    alpha: &PartialTransformation,
    beta: &PartialTransformation,
    used: &[u64],
    slot: usize,
) -> Result<Vec<PartialTransformation>> {
    let n = used.len() / 2;
    let m = carrier.interval_count();
    if slot >= m {
        return Err(Error::IndexOutOfRange {
            i: 0,
            j: slot,
            k: slot,
        });
    }
    let lam0 = lambda_zero_word(alpha, beta, used, m)?;
    (0..n)
        .map(|i| lambda_word(alpha, beta, &lam0, used, m, i, slot, slot))
        .collect()
}

/// The projection onto the zeroth interval as a word in the generators:
/// the square of `beta^{t_n} · alpha · beta^{−t_0}`. When the spacing
/// starts at 0 the trailing factor is the identity and the word reduces
/// to the square of `beta^{t_n} · alpha`.
fn lambda_zero_word(
    alpha: &PartialTransformation,
    beta: &PartialTransformation,
    used: &[u64],
    m: usize,
) -> Result<PartialTransformation> {
    let n = used.len() / 2;
    let up = beta.power(used[n] as i64)?;
    let down = beta.power(((m as u64 - used[0] % m as u64) % m as u64) as i64)?;
    let w = up.compose(alpha)?.compose(&down)?;
    w.compose(&w)
}

/// The word `beta^{−j} · lam0 · beta^{t_{n+i}} · alpha · beta^{k−t_i}`
/// (exponents mod `m`), which maps `(x, j)` to `(x · source[i], k)` and
/// is undefined elsewhere.
fn lambda_word(
    alpha: &PartialTransformation,
    beta: &PartialTransformation,
    lam0: &PartialTransformation,
    used: &[u64],
    m: usize,
    i: usize,
    j: usize,
    k: usize,
) -> Result<PartialTransformation> {
    let n = used.len() / 2;
    let back_j = beta.power(((m - (j % m)) % m) as i64)?;
    let up = beta.power(used[n + i] as i64)?;
    let t_i = used[i] as usize % m;
    let tail = beta.power(((k + m - t_i) % m) as i64)?;
    back_j
        .compose(lam0)?
        .compose(&up)?
        .compose(alpha)?
        .compose(&tail)
}

/// The zero-interval projection of a spaced certificate, built from the
/// generator word.
pub fn lambda_zero(cert: &EmbeddingCertificate) -> Result<PartialTransformation> {
    let used = spaced_terms(cert)?;
    lambda_zero_word(&cert.alpha, &cert.beta, used, cert.m())
}

/// The cell map `lambda(source[i], j, k)` built as a word in the
/// generators. Only spaced certificates (`band_s3`, `orthodox_s4`) carry
/// these.
pub fn lambda_element(
    cert: &EmbeddingCertificate,
    i: usize,
    j: usize,
    k: usize,
) -> Result<PartialTransformation> {
    let lam0 = lambda_zero(cert)?;
    lambda_element_with(cert, &lam0, i, j, k)
}

/// As [`lambda_element`], reusing a precomputed zero-interval projection
/// (sweeps construct thousands of cell maps).
pub fn lambda_element_with(
    cert: &EmbeddingCertificate,
    lam0: &PartialTransformation,
    i: usize,
    j: usize,
    k: usize,
) -> Result<PartialTransformation> {
    let used = spaced_terms(cert)?;
    let (n, m) = (cert.n(), cert.m());
    if i >= n || j >= m || k >= m {
        return Err(Error::IndexOutOfRange { i, j, k });
    }
    lambda_word(&cert.alpha, &cert.beta, lam0, used, m, i, j, k)
}

/// The cell map `lambda(source[i], j, k)` built directly: `(x, j)` goes
/// to `(x · source[i], k)`, everything else is undefined. This is the
/// independent route the word construction is checked against.
pub fn lambda_direct(
    cert: &EmbeddingCertificate,
    i: usize,
    j: usize,
    k: usize,
) -> Result<PartialTransformation> {
    let (n, m) = (cert.n(), cert.m());
    if i >= n || j >= m || k >= m {
        return Err(Error::IndexOutOfRange { i, j, k });
    }
    spaced_terms(cert)?;
    let carrier = cert.carrier;
    let src = &cert.source[i];
    Ok(PartialTransformation::from_fn(carrier.points(), |p| {
        let (x, t) = carrier.decode(p);
        if t == j {
            src.image(x).map(|y| carrier.encode(y, k))
        } else {
            None
        }
    }))
}

fn spaced_terms(cert: &EmbeddingCertificate) -> Result<&[u64]> {
    match (cert.method, &cert.sidon_terms) {
        (Method::BandS3 | Method::OrthodoxS4, Some(terms)) => Ok(terms),
        _ => Err(Error::WrongMethod {
            method: cert.method.as_str(),
        }),
    }
}

/// Reads the per-interval action off a certificate's `alpha`: for each
/// interval, the induced partial map of the base set and the target
/// interval, or `None` when `alpha` is undefined there (or inconsistent,
/// which only a corrupted certificate can be).
pub fn alpha_interval_actions(
    cert: &EmbeddingCertificate,
) -> Vec<Option<(PartialTransformation, usize)>> {
    let carrier = cert.carrier;
    let (base, m) = (carrier.base_size(), carrier.interval_count());
    (0..m)
        .map(|t| {
            let mut target: Option<usize> = None;
            let mut consistent = true;
            let act = PartialTransformation::from_fn(base, |x| {
                match cert.alpha.image(carrier.encode(x, t)) {
                    None => None,
                    Some(q) => {
                        let (y, tt) = carrier.decode(q);
                        match target {
                            None => target = Some(tt),
                            Some(prev) if prev != tt => consistent = false,
                            _ => {}
                        }
                        Some(y)
                    }
                }
            });
            match (target, consistent) {
                (Some(tt), true) => Some((act, tt)),
                _ => None,
            }
        })
        .collect()
}

fn choose_inverses(
    source: &[PartialTransformation],
    choice: &InverseChoice,
) -> Result<Vec<usize>> {
    let n = source.len();
    let is_inverse_pair = |a: &PartialTransformation, x: &PartialTransformation| -> bool {
        let axa = a
            .compose(x)
            .and_then(|ax| ax.compose(a))
            .expect("uniform degree");
        let xax = x
            .compose(a)
            .and_then(|xa| xa.compose(x))
            .expect("uniform degree");
        axa == *a && xax == *x
    };
    if let InverseChoice::Table(table) = choice {
        if table.len() != n {
            return Err(Error::BadInverse { index: table.len() });
        }
        for (i, &j) in table.iter().enumerate() {
            if j >= n || !is_inverse_pair(&source[i], &source[j]) {
                return Err(Error::BadInverse { index: i });
            }
        }
        return Ok(table.clone());
    }
    let mut inverses = Vec::with_capacity(n);
    for (i, a) in source.iter().enumerate() {
        if matches!(choice, InverseChoice::SelfIfIdempotent) && a.is_idempotent() {
            inverses.push(i);
            continue;
        }
        let best = source
            .iter()
            .enumerate()
            .filter(|(_, x)| is_inverse_pair(a, x))
            .min_by(|(_, x), (_, y)| x.cmp(y))
            .map(|(j, _)| j);
        match best {
            Some(j) => inverses.push(j),
            None => return Err(Error::NotRegular { index: i }),
        }
    }
    Ok(inverses)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ptrans::PartialTransformation as Pt;
    use crate::sidon::mian_chowla;

    fn pt(images: &[Option<usize>]) -> Pt {
        Pt::from_images(images).unwrap()
    }

    fn chain3() -> Vec<Pt> {
        alloc::vec![
            pt(&[Some(0), Some(1), Some(2)]),
            pt(&[Some(0), Some(1), None]),
            pt(&[Some(0), None, None]),
        ]
    }

    fn rz2m() -> Vec<Pt> {
        alloc::vec![
            pt(&[Some(0), Some(1)]),
            pt(&[Some(0), Some(0)]),
            pt(&[Some(1), Some(1)]),
        ]
    }

    #[test]
    fn prepare_source_adjoins_and_fronts_identity() {
        let (src, adjoined) = prepare_source(&rz2m()).unwrap();
        assert!(!adjoined);
        assert_eq!(src[0], Pt::identity(2));
        // without the identity it gets adjoined
        let (src, adjoined) =
            prepare_source(&[pt(&[Some(0), Some(0)]), pt(&[Some(1), Some(1)])]).unwrap();
        assert!(adjoined);
        assert_eq!(src.len(), 3);
        assert_eq!(src[0], Pt::identity(2));
    }

    #[test]
    fn prepare_source_rejects_bad_input() {
        assert!(matches!(
            prepare_source(&[pt(&[None, None])]),
            Err(Error::EmptyMapping { index: 0 })
        ));
        // {c0 on 3 points, 3-cycle} is not closed
        let open = alloc::vec![
            pt(&[Some(0), Some(0), Some(0)]),
            pt(&[Some(1), Some(2), Some(0)]),
        ];
        assert!(matches!(
            prepare_source(&open),
            Err(Error::NotClosed { .. })
        ));
    }

    #[test]
    fn strip_embedding_of_the_trivial_monoid() {
        let cert = embed_idempotent_nilpotent(&[Pt::identity(2)]).unwrap();
        assert_eq!(cert.n(), 1);
        assert_eq!(cert.element_map[0], cert.carrier.interval_identity(0));
    }

    #[test]
    fn strip_embedding_invariants() {
        let cert = embed_idempotent_nilpotent(&chain3()).unwrap();
        assert_eq!(cert.method, Method::T11);
        assert_eq!(cert.m(), cert.n() + 1);
        assert!(cert.alpha.is_idempotent());
        assert!(cert
            .beta
            .power(cert.n() as i64 + 1)
            .unwrap()
            .is_empty_map());
    }

    #[test]
    fn corner_pair_witnesses() {
        let cert = embed_tn_pair(3, 10_000).unwrap();
        let w = cert.witnesses.as_ref().unwrap();
        // epsilon has defect 1: it moves only the point n−1
        assert_eq!(w.epsilon, pt(&[Some(0), Some(1), Some(3), Some(3)]));
        let beta_inv = cert.beta.inverse().unwrap();
        assert_eq!(
            w.kappa,
            w.epsilon
                .compose(&cert.beta)
                .unwrap()
                .compose(&w.epsilon)
                .unwrap()
        );
        assert_eq!(
            w.phi,
            cert.beta
                .compose(&w.epsilon)
                .unwrap()
                .compose(&beta_inv)
                .unwrap()
                .compose(&w.epsilon)
                .unwrap()
        );
        assert_eq!(cert.source.len(), 27);
        assert!(embed_tn_pair(2, 100).is_err());
    }

    #[test]
    fn band_embedding_of_the_chain_monoid() {
        let seq = mian_chowla(6).unwrap();
        let cert = embed_band_preserving(&chain3(), &seq, 0).unwrap();
        assert_eq!(cert.m(), 21);
        assert_eq!(cert.carrier.points(), 63);
        // alpha lives on intervals 7, 12, 20 and lands in 0, 1, 3
        let actions = alpha_interval_actions(&cert);
        let occupied: Vec<usize> = (0..21).filter(|&t| actions[t].is_some()).collect();
        assert_eq!(occupied, alloc::vec![7, 12, 20]);
        let targets: Vec<usize> = occupied
            .iter()
            .map(|&t| actions[t].as_ref().unwrap().1)
            .collect();
        assert_eq!(targets, alloc::vec![0, 1, 3]);
        assert!(cert.alpha.compose(&cert.alpha).unwrap().is_empty_map());
        assert_eq!(
            cert.beta.power(21).unwrap(),
            Pt::identity(cert.carrier.points())
        );
    }

    #[test]
    fn band_embedding_rejects_bad_parameters() {
        let seq = mian_chowla(6).unwrap();
        let two = alloc::vec![pt(&[Some(0), Some(1)]), pt(&[Some(0), Some(0)])];
        assert!(matches!(
            embed_band_preserving(&two, &seq, 0),
            Err(Error::TooSmall { size: 3 }) | Err(Error::TooSmall { .. })
        ));
        let short = mian_chowla(4).unwrap();
        assert!(matches!(
            embed_band_preserving(&chain3(), &short, 0),
            Err(Error::SequenceTooShort { needed: 6, got: 4 })
        ));
        assert!(matches!(
            embed_band_preserving_unchecked(&chain3(), &[0, 1, 2, 3, 4, 5], 0),
            Ok(_)
        ));
        assert!(matches!(
            embed_band_inner(&chain3(), &[0, 1, 2, 3, 4, 5], 0, true),
            Err(Error::NotSidon { .. })
        ));
    }

    #[test]
    fn zero_interval_projection_is_exactly_that() {
        let seq = mian_chowla(6).unwrap();
        let cert = embed_band_preserving(&chain3(), &seq, 0).unwrap();
        assert_eq!(
            lambda_zero(&cert).unwrap(),
            cert.carrier.interval_identity(0)
        );
        let cert = embed_orthodox(&rz2m(), &InverseChoice::Least, 0).unwrap();
        assert_eq!(
            lambda_zero(&cert).unwrap(),
            cert.carrier.interval_identity(0)
        );
    }

    #[test]
    fn cell_maps_word_equals_direct_construction() {
        let seq = mian_chowla(6).unwrap();
        let cert = embed_band_preserving(&chain3(), &seq, 0).unwrap();
        let lam0 = lambda_zero(&cert).unwrap();
        for i in 0..cert.n() {
            for &j in &[0usize, 5, 20] {
                for &k in &[0usize, 1, 7, 16] {
                    assert_eq!(
                        lambda_element_with(&cert, &lam0, i, j, k).unwrap(),
                        lambda_direct(&cert, i, j, k).unwrap()
                    );
                }
            }
        }
        // the identity acts diagonally on any slot
        assert_eq!(
            lambda_element(&cert, 0, 5, 5).unwrap(),
            cert.carrier.interval_identity(5)
        );
        assert!(lambda_element(&cert, 9, 0, 0).is_err());
    }

    #[test]
    fn cell_map_product_law() {
        let seq = mian_chowla(6).unwrap();
        let cert = embed_band_preserving(&chain3(), &seq, 0).unwrap();
        let index = cert.source_index_map();
        for i1 in 0..cert.n() {
            for i2 in 0..cert.n() {
                let prod = cert.source[i1].compose(&cert.source[i2]).unwrap();
                let i3 = index[&prod];
                let a = lambda_direct(&cert, i1, 2, 9).unwrap();
                let b = lambda_direct(&cert, i2, 9, 4).unwrap();
                assert_eq!(
                    a.compose(&b).unwrap(),
                    lambda_direct(&cert, i3, 2, 4).unwrap()
                );
                // mismatched middle interval annihilates
                let c = lambda_direct(&cert, i2, 10, 4).unwrap();
                assert!(a.compose(&c).unwrap().is_empty_map());
            }
        }
    }

    #[test]
    fn orthodox_embedding_of_the_right_zero_monoid() {
        let cert = embed_orthodox(&rz2m(), &InverseChoice::Least, 0).unwrap();
        assert_eq!(cert.m(), 33);
        assert_eq!(cert.carrier.points(), 66);
        assert_eq!(cert.alpha.power(3).unwrap(), cert.alpha);
        assert_ne!(cert.alpha.power(2).unwrap(), cert.alpha);
        // in a band, the self-first policy fixes every element
        let cert = embed_orthodox(&rz2m(), &InverseChoice::SelfIfIdempotent, 0).unwrap();
        assert_eq!(cert.inverses.as_ref().unwrap(), &alloc::vec![0, 1, 2]);
    }

    #[test]
    fn least_inverse_choice_is_by_image_order() {
        // both constants are inverses of each other; the least is c0
        let (src, _) = prepare_source(&rz2m()).unwrap();
        let c0 = src
            .iter()
            .position(|t| *t == pt(&[Some(0), Some(0)]))
            .unwrap();
        let c1 = src
            .iter()
            .position(|t| *t == pt(&[Some(1), Some(1)]))
            .unwrap();
        let cert = embed_orthodox(&rz2m(), &InverseChoice::Least, 0).unwrap();
        let inv = cert.inverses.as_ref().unwrap();
        assert_eq!(inv[c0], c0);
        assert_eq!(inv[c1], c0);
        assert_eq!(inv[0], 0);
    }

    #[test]
    fn explicit_inverse_tables_are_validated() {
        assert!(matches!(
            embed_orthodox(&rz2m(), &InverseChoice::Table(alloc::vec![0, 1]), 0),
            Err(Error::BadInverse { .. })
        ));
        assert!(matches!(
            embed_orthodox(&rz2m(), &InverseChoice::Table(alloc::vec![1, 1, 2]), 0),
            Err(Error::BadInverse { index: 0 })
        ));
        assert!(embed_orthodox(&rz2m(), &InverseChoice::Table(alloc::vec![0, 1, 2]), 0).is_ok());
    }

    #[test]
    fn non_regular_sources_are_rejected_by_orthodox() {
        // a = [1 2 2] has a² = a³ = c₂ and no inverse, even after the
        // identity is adjoined
        let a = pt(&[Some(1), Some(2), Some(2)]);
        let c2 = pt(&[Some(2), Some(2), Some(2)]);
        assert_eq!(a.compose(&a).unwrap(), c2);
        let res = embed_orthodox(&[a, c2], &InverseChoice::Least, 0);
        assert!(matches!(res, Err(Error::NotRegular { index: 1 })));
    }
}
