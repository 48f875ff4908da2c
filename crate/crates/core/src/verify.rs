//! Machine verification of embedding certificates.
//!
//! Each suite runs a list of named checks and assembles them into a
//! [`VerificationReport`]; a suite passes iff every check passes. Full
//! mode enumerates the generated semigroup and compares it exactly
//! against the predicted structure (every expected count carries its
//! provenance formula, integer equality, no tolerance). Structural mode
//! never enumerates: it checks generator relations, the monomorphism,
//! and symmetry-reduced samples of the cell-map and idempotent product
//! rules, which is what makes certificates with astronomically many
//! intervals checkable at all.
//!
//! Checks are deterministic; reports are assembled in check-name order.
//! Wall-times come from an injected [`Clock`] so the crate stays
//! `no_std`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::constructions::{
    alpha_interval_actions, lambda_direct, lambda_element_with, lambda_zero, EmbeddingCertificate,
    Method,
};
use crate::error::{Error, Result};
use crate::identities::{catalog, satisfies};
use crate::ptrans::PartialTransformation;
use crate::semigroup::{BrandtParams, FiniteSemigroup};

/// Source of wall-clock timestamps for per-check timings. The core crate
/// has no clock of its own; callers inject one (the CLI uses a real one,
/// tests may use [`NullClock`]).
pub trait Clock {
    /// Monotonic microseconds from an arbitrary origin.
    fn micros(&self) -> u64;
}

/// A clock that always reads zero.
pub struct NullClock;

impl Clock for NullClock {
    fn micros(&self) -> u64 {
        0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Full,
    Structural,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Full => "full",
            Mode::Structural => "structural",
        }
    }
}

/// One named check: pass/fail, measured vs expected count with the
/// formula the expectation comes from, and a counterexample payload on
/// failure.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub expected: Option<u64>,
    pub measured: Option<u64>,
    pub provenance: Option<String>,
    pub counterexample: Option<String>,
    pub wall_micros: u64,
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub suite: String,
    pub mode: Mode,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Outcome of a single check, before timing is attached.
struct Outcome {
    passed: bool,
    expected: Option<u64>,
    measured: Option<u64>,
    provenance: Option<String>,
    counterexample: Option<String>,
}

impl Outcome {
    fn flag(passed: bool) -> Self {
        Outcome {
            passed,
            expected: None,
            measured: None,
            provenance: None,
            counterexample: None,
        }
    }

    fn flag_because(passed: bool, counterexample: Option<String>) -> Self {
        Outcome {
            counterexample: if passed { None } else { counterexample },
            ..Outcome::flag(passed)
        }
    }

    fn count(expected: u64, measured: u64, provenance: &str) -> Self {
        Outcome {
            passed: expected == measured,
            expected: Some(expected),
            measured: Some(measured),
            provenance: Some(provenance.to_string()),
            counterexample: None,
        }
    }

    fn counted(mut self, expected: u64, measured: u64, provenance: &str) -> Self {
        self.expected = Some(expected);
        self.measured = Some(measured);
        self.provenance = Some(provenance.to_string());
        self
    }
}

struct Recorder<'c> {
    clock: &'c dyn Clock,
    checks: Vec<Check>,
}

impl<'c> Recorder<'c> {
    fn new(clock: &'c dyn Clock) -> Self {
        Recorder {
            clock,
            checks: Vec::new(),
        }
    }

    fn run(&mut self, name: &str, f: impl FnOnce() -> Outcome) {
        let start = self.clock.micros();
        let o = f();
        let wall = self.clock.micros().saturating_sub(start);
        self.checks.push(Check {
            name: name.to_string(),
            passed: o.passed,
            expected: o.expected,
            measured: o.measured,
            provenance: o.provenance,
            counterexample: o.counterexample,
            wall_micros: wall,
        });
    }

    fn finish(mut self, suite: &str, mode: Mode) -> VerificationReport {
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
        VerificationReport {
            suite: suite.to_string(),
            mode,
            checks: self.checks,
        }
    }
}

fn mul(a: &PartialTransformation, b: &PartialTransformation) -> PartialTransformation {
    a.compose(b).expect("uniform degree")
}

/// Checks that the element map of a certificate is injective and turns
/// source products into carrier products, by direct transformation
/// arithmetic — no enumeration of the generated semigroup.
pub fn verify_monomorphism(cert: &EmbeddingCertificate, clock: &dyn Clock) -> VerificationReport {
    let mut rec = Recorder::new(clock);
    monomorphism_checks(cert, &mut rec);
    rec.finish("mono", Mode::Structural)
}

fn monomorphism_checks(cert: &EmbeddingCertificate, rec: &mut Recorder<'_>) {
    let n = cert.n();
    rec.run("element_map_injective", || {
        let distinct: BTreeSet<&PartialTransformation> = cert.element_map.iter().collect();
        Outcome::flag(distinct.len() == n).counted(
            n as u64,
            distinct.len() as u64,
            "n distinct images",
        )
    });
    rec.run("element_map_multiplicative", || {
        let index = cert.source_index_map();
        let mut checked = 0u64;
        for i in 0..n {
            for k in 0..n {
                let prod = mul(&cert.source[i], &cert.source[k]);
                let l = match index.get(&prod) {
                    Some(&l) => l,
                    None => {
                        return Outcome::flag_because(
                            false,
                            Some(format!("source not closed at ({i}, {k})")),
                        )
                        .counted((n * n) as u64, checked, "n^2 products");
                    }
                };
                if mul(&cert.element_map[i], &cert.element_map[k]) != cert.element_map[l] {
                    return Outcome::flag_because(
                        false,
                        Some(format!("image({i})·image({k}) != image({i}·{k})")),
                    )
                    .counted((n * n) as u64, checked, "n^2 products");
                }
                checked += 1;
            }
        }
        Outcome::count((n * n) as u64, checked, "n^2 products")
    });
}

/// Deterministic sample of interval indices for structural sweeps: all
/// indices when there are few, otherwise the spacing terms, the ends,
/// and a fixed stride through the cycle.
fn sample_intervals(m: usize, terms: &[u64]) -> Vec<usize> {
    if m <= 64 {
        return (0..m).collect();
    }
    let mut set: BTreeSet<usize> = BTreeSet::new();
    set.extend([0, 1, m / 2, m - 1]);
    set.extend(terms.iter().map(|&t| t as usize % m));
    set.extend(terms.iter().map(|&t| (t as usize + 1) % m));
    for q in 1..16 {
        set.insert(m * q / 16);
    }
    set.into_iter().collect()
}

/// Generator relations of the spaced constructions.
fn relation_checks(cert: &EmbeddingCertificate, rec: &mut Recorder<'_>) {
    let m = cert.m() as i64;
    match cert.method {
        Method::BandS3 => {
            rec.run("generator_relations", || {
                let sq = mul(&cert.alpha, &cert.alpha);
                let cy = cert.beta.power(m).expect("cycle power");
                let ok = sq.is_empty_map()
                    && cy == PartialTransformation::identity(cert.carrier.points());
                Outcome::flag_because(
                    ok,
                    Some("alpha^2 = 0 or beta^m = identity failed".to_string()),
                )
            });
        }
        Method::OrthodoxS4 => {
            rec.run("generator_relations", || {
                let cube = cert.alpha.power(3).expect("power");
                let sq = cert.alpha.power(2).expect("power");
                let cy = cert.beta.power(m).expect("cycle power");
                let ok = cube == cert.alpha
                    && sq != cert.alpha
                    && cy == PartialTransformation::identity(cert.carrier.points());
                Outcome::flag_because(
                    ok,
                    Some("alpha^3 = alpha, alpha^2 != alpha or beta^m = identity failed".to_string()),
                )
            });
            rec.run("generators_are_group_elements", || {
                Outcome::flag(cert.alpha.is_group_element() && cert.beta.is_group_element())
            });
        }
        _ => {}
    }
}

/// Word-built cell maps against the direct construction, sampled with
/// the first interval index pinned to 0 (shifting it is conjugation by
/// the cycle).
fn lambda_sample_checks(cert: &EmbeddingCertificate, rec: &mut Recorder<'_>) {
    let terms = cert.sidon_terms.clone().unwrap_or_default();
    rec.run("lambda_word_matches_direct_sampled", || {
        let lam0 = match lambda_zero(cert) {
            Ok(l) => l,
            Err(_) => return Outcome::flag(false),
        };
        if lam0 != cert.carrier.interval_identity(0) {
            return Outcome::flag_because(
                false,
                Some("zero-interval projection is not the identity there".to_string()),
            );
        }
        let ks = sample_intervals(cert.m(), &terms);
        let mut checked = 0u64;
        for i in 0..cert.n() {
            for &k in &ks {
                let word = lambda_element_with(cert, &lam0, i, 0, k);
                let direct = lambda_direct(cert, i, 0, k);
                match (word, direct) {
                    (Ok(w), Ok(d)) if w == d => checked += 1,
                    _ => {
                        return Outcome::flag_because(
                            false,
                            Some(format!("cell map ({i}, 0, {k}) differs from its word")),
                        )
                    }
                }
            }
        }
        Outcome::flag(true).counted(
            (cert.n() * ks.len()) as u64,
            checked,
            "n * |sample| cell maps",
        )
    });
}

/// Idempotent product rules checked without enumeration. Within the
/// zeroth slot the source idempotents multiply as in the source; cross
/// slots annihilate; in the orthodox construction the cycle conjugates
/// of `alpha²` interact with everything as idempotents again.
fn idempotent_sample_checks(cert: &EmbeddingCertificate, source_sem: &FiniteSemigroup, rec: &mut Recorder<'_>) {
    let idem: Vec<usize> = (0..cert.n())
        .filter(|&i| cert.source[i].is_idempotent())
        .collect();
    let terms = cert.sidon_terms.clone().unwrap_or_default();
    let index = cert.source_index_map();

    rec.run("cell_idempotent_products_slot_zero", || {
        let mut checked = 0u64;
        for &e in &idem {
            for &f in &idem {
                let le = lambda_direct(cert, e, 0, 0).expect("in range");
                let lf = lambda_direct(cert, f, 0, 0).expect("in range");
                let prod = mul(&le, &lf);
                let ef = source_sem.product(e, f);
                let ef = index[source_sem.element(ef)];
                if prod != lambda_direct(cert, ef, 0, 0).expect("in range") {
                    return Outcome::flag_because(
                        false,
                        Some(format!("cell product of idempotents ({e}, {f}) is wrong")),
                    );
                }
                checked += 1;
            }
        }
        Outcome::flag(true).counted(
            (idem.len() * idem.len()) as u64,
            checked,
            "|E(S)|^2 slot products",
        )
    });

    rec.run("cell_idempotent_products_cross_slot", || {
        let ks = sample_intervals(cert.m(), &terms);
        for &e in &idem {
            for &f in &idem {
                let le = lambda_direct(cert, e, 0, 0).expect("in range");
                for &k in &ks {
                    if k == 0 {
                        continue;
                    }
                    let lf = lambda_direct(cert, f, k, k).expect("in range");
                    if !mul(&le, &lf).is_empty_map() || !mul(&lf, &le).is_empty_map() {
                        return Outcome::flag_because(
                            false,
                            Some(format!("cross-slot product ({e}, {f}, slot {k}) not zero")),
                        );
                    }
                }
            }
        }
        Outcome::flag(true)
    });

    if cert.method == Method::OrthodoxS4 {
        let inverse_source = source_sem.classify().is_inverse;
        rec.run("conjugate_idempotent_products", || {
            // rho_k = beta^k · alpha² · beta^{−k}, walked incrementally
            let alpha_sq = mul(&cert.alpha, &cert.alpha);
            let beta_inv = cert.beta.inverse().expect("cycle");
            let rho0 = alpha_sq.clone();
            let mut rho_k = alpha_sq.clone();
            let mut checked = 0u64;
            for k in 0..cert.m() {
                if k > 0 {
                    rho_k = mul(&mul(&cert.beta, &rho_k), &beta_inv);
                }
                let prod = mul(&rho0, &rho_k);
                if !prod.is_idempotent() {
                    return Outcome::flag_because(
                        false,
                        Some(format!("rho_0 · rho_{k} is not idempotent")),
                    )
                    .counted(cert.m() as u64, checked, "m conjugates");
                }
                if k > 0 && !prod.is_empty_map() {
                    // off-diagonal products fall into a single interval
                    let intervals: BTreeSet<usize> = prod
                        .domain()
                        .map(|p| cert.carrier.interval_of(p))
                        .collect();
                    if intervals.len() != 1 {
                        return Outcome::flag_because(
                            false,
                            Some(format!("rho_0 · rho_{k} spreads over several intervals")),
                        )
                        .counted(cert.m() as u64, checked, "m conjugates");
                    }
                }
                if inverse_source && prod != mul(&rho_k, &rho0) {
                    return Outcome::flag_because(
                        false,
                        Some(format!("rho_0 and rho_{k} do not commute over an inverse source")),
                    )
                    .counted(cert.m() as u64, checked, "m conjugates");
                }
                checked += 1;
            }
            Outcome::count(cert.m() as u64, checked, "m conjugates")
        });

        rec.run("cell_against_conjugate_products", || {
            let alpha_sq = mul(&cert.alpha, &cert.alpha);
            let beta_inv = cert.beta.inverse().expect("cycle");
            let ks = sample_intervals(cert.m(), &terms);
            for &e in &idem {
                let le = lambda_direct(cert, e, 0, 0).expect("in range");
                for &k in &ks {
                    let bk = cert.beta.power(k as i64).expect("power");
                    let bk_inv = beta_inv.power(k as i64).expect("power");
                    let rho = mul(&mul(&bk, &alpha_sq), &bk_inv);
                    for prod in [mul(&le, &rho), mul(&rho, &le)] {
                        if !prod.is_idempotent() {
                            return Outcome::flag_because(
                                false,
                                Some(format!(
                                    "product of slot idempotent {e} and conjugate {k} not idempotent"
                                )),
                            );
                        }
                    }
                }
            }
            Outcome::flag(true)
        });
    }
}

/// Shared context for the full-mode suites.
struct FullContext<'a> {
    cert: &'a EmbeddingCertificate,
    semigroup: FiniteSemigroup,
    green: crate::semigroup::GreenStructure,
    source_sem: FiniteSemigroup,
    /// all cell maps, flattened as `(i * m + j) * m + k`
    cells: Vec<PartialTransformation>,
}

impl<'a> FullContext<'a> {
    fn build(cert: &'a EmbeddingCertificate, cap: usize, projected: usize) -> Result<Self> {
        if projected > cap {
            return Err(Error::ProjectedSizeExceedsCap { projected, cap });
        }
        let semigroup = FiniteSemigroup::enumerate(
            &[cert.alpha.clone(), cert.beta.clone()],
            cap,
        )?;
        let green = semigroup.green();
        let source_sem = FiniteSemigroup::enumerate(&cert.source, cap)?;
        let (n, m) = (cert.n(), cert.m());
        let mut cells = Vec::with_capacity(n * m * m);
        for i in 0..n {
            for j in 0..m {
                for k in 0..m {
                    cells.push(lambda_direct(cert, i, j, k)?);
                }
            }
        }
        Ok(Self {
            cert,
            semigroup,
            green,
            source_sem,
            cells,
        })
    }

    fn cell(&self, i: usize, j: usize, k: usize) -> &PartialTransformation {
        let m = self.cert.m();
        &self.cells[(i * m + j) * m + k]
    }
}

/// Every element must map intervals into intervals and act injectively
/// on interval indices.
fn interval_injectivity_check(ctx: &FullContext<'_>, rec: &mut Recorder<'_>) {
    rec.run("interval_injectivity", || {
        let z = ctx.cert.carrier;
        for (t, el) in ctx.semigroup.elements().iter().enumerate() {
            let mut img_of: BTreeMap<usize, usize> = BTreeMap::new();
            let mut src_of: BTreeMap<usize, usize> = BTreeMap::new();
            for p in el.domain() {
                let q = el.image(p).expect("in domain");
                let (i, j) = (z.interval_of(p), z.interval_of(q));
                if *img_of.entry(i).or_insert(j) != j {
                    return Outcome::flag_because(
                        false,
                        Some(format!("element {t} splits interval {i}")),
                    );
                }
                if *src_of.entry(j).or_insert(i) != i {
                    return Outcome::flag_because(
                        false,
                        Some(format!("element {t} merges two intervals into {j}")),
                    );
                }
            }
        }
        Outcome::flag(true).counted(
            ctx.semigroup.size() as u64,
            ctx.semigroup.size() as u64,
            "|T| elements scanned",
        )
    });
}

/// Everything J-below a sandwich product `alpha · beta^r · alpha`
/// (`r` nonzero) must live inside a single interval.
fn below_sandwich_check(ctx: &FullContext<'_>, rec: &mut Recorder<'_>) {
    rec.run("below_sandwich_single_interval", || {
        let z = ctx.cert.carrier;
        let alpha_idx = ctx
            .semigroup
            .index_of(&ctx.cert.alpha)
            .expect("generator present");
        let _ = alpha_idx;
        let mut seen_classes: BTreeSet<usize> = BTreeSet::new();
        for r in 1..ctx.cert.m() {
            let w = mul(
                &mul(&ctx.cert.alpha, &ctx.cert.beta.power(r as i64).expect("power")),
                &ctx.cert.alpha,
            );
            let idx = ctx.semigroup.index_of(&w).expect("product in closure");
            seen_classes.insert(ctx.green.d_class_of(idx));
        }
        for c in 0..ctx.green.num_d_classes() {
            let below_some = seen_classes.iter().any(|&s| ctx.green.j_leq(c, s));
            if !below_some {
                continue;
            }
            for &i in ctx.green.d_class_members(c) {
                let el = ctx.semigroup.element(i);
                let intervals: BTreeSet<usize> =
                    el.domain().map(|p| z.interval_of(p)).collect();
                if intervals.len() > 1 {
                    return Outcome::flag_because(
                        false,
                        Some(format!("element {i} below a sandwich product has a spread domain")),
                    );
                }
            }
        }
        Outcome::flag(true)
    });
}

/// The cell-map shift rules, swept over every `(i, j, k)`:
/// left-multiplying by the cycle shifts the domain slot, right by the
/// cycle shifts the range slot, and multiplying by the spaced generator
/// either applies the per-interval action or annihilates.
fn shift_rule_checks(ctx: &FullContext<'_>, rec: &mut Recorder<'_>) {
    let cert = ctx.cert;
    let (n, m) = (cert.n(), cert.m());
    let index = cert.source_index_map();
    let actions = alpha_interval_actions(cert);

    rec.run("cell_shift_rules", || {
        let empty = PartialTransformation::empty(cert.carrier.points());
        let mut checked = 0u64;
        for i in 0..n {
            for j in 0..m {
                for k in 0..m {
                    let cell = ctx.cell(i, j, k);
                    let left = mul(&cert.beta, cell);
                    if left != *ctx.cell(i, (j + m - 1) % m, k) {
                        return Outcome::flag_because(
                            false,
                            Some(format!("cycle·cell({i},{j},{k}) misses the shifted cell")),
                        );
                    }
                    let right = mul(cell, &cert.beta);
                    if right != *ctx.cell(i, j, (k + 1) % m) {
                        return Outcome::flag_because(
                            false,
                            Some(format!("cell({i},{j},{k})·cycle misses the shifted cell")),
                        );
                    }
                    // alpha · cell: needs the interval whose action lands on j
                    let expect_left = actions.iter().enumerate().find_map(|(u, a)| {
                        a.as_ref().and_then(|(act, target)| {
                            (*target == j).then(|| {
                                let composed = mul(act, &cert.source[i]);
                                index
                                    .get(&composed)
                                    .map(|&l| ctx.cell(l, u, k).clone())
                            })
                        })
                    });
                    let got = mul(&cert.alpha, cell);
                    match expect_left {
                        Some(Some(e)) if got == e => {}
                        None if got == empty => {}
                        _ => {
                            return Outcome::flag_because(
                                false,
                                Some(format!("alpha·cell({i},{j},{k}) breaks the shift rule")),
                            );
                        }
                    }
                    // cell · alpha: the action at interval k applies
                    let got = mul(cell, &cert.alpha);
                    let expect_right = actions[k].as_ref().map(|(act, target)| {
                        let composed = mul(&cert.source[i], act);
                        index
                            .get(&composed)
                            .map(|&l| ctx.cell(l, j, *target).clone())
                    });
                    match expect_right {
                        Some(Some(e)) if got == e => {}
                        None if got == empty => {}
                        _ => {
                            return Outcome::flag_because(
                                false,
                                Some(format!("cell({i},{j},{k})·alpha breaks the shift rule")),
                            );
                        }
                    }
                    checked += 1;
                }
            }
        }
        Outcome::count((n * m * m) as u64, checked, "n*m^2 cells, four rules each")
    });

    rec.run("cell_word_matches_direct", || {
        let lam0 = match lambda_zero(cert) {
            Ok(l) => l,
            Err(_) => return Outcome::flag(false),
        };
        for i in 0..n {
            for j in 0..m {
                for k in 0..m {
                    match lambda_element_with(cert, &lam0, i, j, k) {
                        Ok(w) if w == *ctx.cell(i, j, k) => {}
                        _ => {
                            return Outcome::flag_because(
                                false,
                                Some(format!("word for cell ({i},{j},{k}) differs")),
                            )
                        }
                    }
                }
            }
        }
        Outcome::count((n * m * m) as u64, (n * m * m) as u64, "n*m^2 cell words")
    });
}

/// Identity-preservation between the source idempotents and the
/// idempotents of the enumerated semigroup, over the whole catalog.
fn identity_preservation_check(
    ctx: &FullContext<'_>,
    rec: &mut Recorder<'_>,
) {
    rec.run("identity_preservation", || {
        let source_idem = ctx.source_sem.idempotent_indices();
        if source_idem.len() < 2 {
            return Outcome::flag(true).counted(0, 0, "vacuous: |E(S)| < 2");
        }
        let big_idem = ctx.semigroup.idempotent_indices();
        let cat = catalog();
        let mut agreed = 0u64;
        for (name, id) in &cat {
            let on_source = match satisfies(&ctx.source_sem, &source_idem, id) {
                Ok(v) => v.is_none(),
                Err(_) => {
                    return Outcome::flag_because(
                        false,
                        Some(format!("source idempotents not closed for `{name}`")),
                    )
                }
            };
            let on_big = match satisfies(&ctx.semigroup, &big_idem, id) {
                Ok(v) => v.is_none(),
                Err(_) => {
                    return Outcome::flag_because(
                        false,
                        Some(format!("target idempotents not closed for `{name}`")),
                    )
                }
            };
            if on_source != on_big {
                return Outcome::flag_because(
                    false,
                    Some(format!(
                        "`{name}` holds on one idempotent set only (source: {on_source})"
                    )),
                )
                .counted(cat.len() as u64, agreed, "catalog identities agreeing");
            }
            agreed += 1;
        }
        Outcome::count(cat.len() as u64, agreed, "catalog identities agreeing")
    });
}

/// Full or structural verification of a band-method certificate.
pub fn verify_structure_s3(
    cert: &EmbeddingCertificate,
    mode: Mode,
    cap: usize,
    clock: &dyn Clock,
) -> Result<VerificationReport> {
    if cert.method != Method::BandS3 {
        return Err(Error::WrongMethod {
            method: cert.method.as_str(),
        });
    }
    let mut rec = Recorder::new(clock);
    relation_checks(cert, &mut rec);
    monomorphism_checks(cert, &mut rec);

    if mode == Mode::Structural {
        let source_sem = FiniteSemigroup::enumerate(&cert.source, cap)?;
        lambda_sample_checks(cert, &mut rec);
        idempotent_sample_checks(cert, &source_sem, &mut rec);
        return Ok(rec.finish("s3", mode));
    }

    let (n, m) = (cert.n(), cert.m());
    let projected = m + m * m + n * m * m + 1;
    let ctx = FullContext::build(cert, cap, projected)?;

    rec.run("enumeration_size", || {
        Outcome::count(
            projected as u64,
            ctx.semigroup.size() as u64,
            "m + m^2 + n*m^2 + 1",
        )
    });

    let unit_group: Vec<PartialTransformation> = (0..m)
        .map(|r| cert.beta.power(r as i64).expect("power"))
        .collect();
    let middle: Vec<PartialTransformation> = {
        let mut v = Vec::with_capacity(m * m);
        let mut left = PartialTransformation::identity(cert.carrier.points());
        for _ in 0..m {
            let la = mul(&left, &cert.alpha);
            let mut cur = la.clone();
            for _ in 0..m {
                v.push(cur.clone());
                cur = mul(&cur, &cert.beta);
            }
            left = mul(&left, &cert.beta);
        }
        v
    };
    let ideal: Vec<&PartialTransformation> = ctx.cells.iter().collect();

    rec.run("h_beta_size", || {
        let set: BTreeSet<&PartialTransformation> = unit_group.iter().collect();
        Outcome::count(m as u64, set.len() as u64, "m cycle powers")
    });
    rec.run("h_alpha_size", || {
        let set: BTreeSet<&PartialTransformation> = middle.iter().collect();
        Outcome::count((m * m) as u64, set.len() as u64, "m^2 sandwich products")
    });
    rec.run("ideal_size", || {
        let mut set: BTreeSet<PartialTransformation> =
            ideal.iter().map(|c| (*c).clone()).collect();
        set.insert(PartialTransformation::empty(cert.carrier.points()));
        Outcome::count((n * m * m + 1) as u64, set.len() as u64, "n*m^2 + 1 cells")
    });

    rec.run("partition", || {
        let mut all: BTreeSet<PartialTransformation> = BTreeSet::new();
        let mut total = 0usize;
        for t in unit_group.iter().chain(middle.iter()) {
            all.insert(t.clone());
            total += 1;
        }
        for c in &ideal {
            all.insert((*c).clone());
            total += 1;
        }
        all.insert(PartialTransformation::empty(cert.carrier.points()));
        total += 1;
        if all.len() != total {
            return Outcome::flag_because(
                false,
                Some("the three layers are not pairwise disjoint".to_string()),
            );
        }
        let enumerated: BTreeSet<PartialTransformation> =
            ctx.semigroup.elements().iter().cloned().collect();
        Outcome::flag_because(
            all == enumerated,
            Some("layer union differs from the enumerated semigroup".to_string()),
        )
        .counted(enumerated.len() as u64, all.len() as u64, "disjoint union")
    });

    rec.run("ideal_is_ideal", || {
        let mut members: BTreeSet<usize> = ideal
            .iter()
            .map(|c| ctx.semigroup.index_of(c).expect("cells are in the closure"))
            .collect();
        members.insert(
            ctx.semigroup
                .index_of(&PartialTransformation::empty(cert.carrier.points()))
                .expect("zero present"),
        );
        for &t in &members {
            for g in 0..ctx.semigroup.generator_count() {
                if !members.contains(&ctx.semigroup.right_step(t, g))
                    || !members.contains(&ctx.semigroup.left_step(t, g))
                {
                    return Outcome::flag_because(
                        false,
                        Some(format!("ideal escapes through element {t}")),
                    );
                }
            }
        }
        Outcome::flag(true)
    });

    rec.run("h_alpha_not_regular", || {
        let alpha_idx = ctx.semigroup.index_of(&cert.alpha).expect("generator");
        let class = ctx.green.d_class_of(alpha_idx);
        let class_set: BTreeSet<usize> =
            ctx.green.d_class_members(class).iter().copied().collect();
        let middle_set: BTreeSet<usize> = middle
            .iter()
            .map(|t| ctx.semigroup.index_of(t).expect("closure"))
            .collect();
        if class_set != middle_set {
            return Outcome::flag_because(
                false,
                Some("the sandwich layer is not a single class".to_string()),
            );
        }
        Outcome::flag_because(
            !ctx.green.d_class_is_regular(class),
            Some("the sandwich class contains an idempotent".to_string()),
        )
        .counted(
            (m * m) as u64,
            class_set.len() as u64,
            "m^2 non-regular elements",
        )
    });

    rec.run("ideal_multiplication", || {
        // the cells multiply like an m×m identity-sandwich matrix
        // semigroup over the source
        let index = cert.source_index_map();
        let prods: Vec<Vec<usize>> = (0..n)
            .map(|i1| {
                (0..n)
                    .map(|i2| {
                        index[&mul(&cert.source[i1], &cert.source[i2])]
                    })
                    .collect()
            })
            .collect();
        for i1 in 0..n {
            for j1 in 0..m {
                for k1 in 0..m {
                    let a = ctx.cell(i1, j1, k1);
                    for i2 in 0..n {
                        for k2 in 0..m {
                            let b = ctx.cell(i2, k1, k2);
                            if mul(a, b) != *ctx.cell(prods[i1][i2], j1, k2) {
                                return Outcome::flag_because(
                                    false,
                                    Some(format!(
                                        "cell product ({i1},{j1},{k1})·({i2},{k1},{k2}) is wrong"
                                    )),
                                );
                            }
                            // a mismatched middle index annihilates
                            let other = ctx.cell(i2, (k1 + 1) % m, k2);
                            if !mul(a, other).is_empty_map() {
                                return Outcome::flag_because(
                                    false,
                                    Some(format!(
                                        "cell product ({i1},{j1},{k1})·({i2},{},{k2}) not zero",
                                        (k1 + 1) % m
                                    )),
                                );
                            }
                        }
                    }
                }
            }
        }
        Outcome::flag(true).counted(
            (n * m * m * n * m * 2) as u64,
            (n * m * m * n * m * 2) as u64,
            "matched and mismatched cell products",
        )
    });

    rec.run("idempotent_set", || {
        let measured: BTreeSet<PartialTransformation> = ctx
            .semigroup
            .elements()
            .iter()
            .filter(|t| t.is_idempotent())
            .cloned()
            .collect();
        let mut expected: BTreeSet<PartialTransformation> = BTreeSet::new();
        for i in 0..n {
            if cert.source[i].is_idempotent() {
                for j in 0..m {
                    expected.insert(ctx.cell(i, j, j).clone());
                }
            }
        }
        expected.insert(PartialTransformation::empty(cert.carrier.points()));
        expected.insert(PartialTransformation::identity(cert.carrier.points()));
        let e_count = ctx.source_sem.idempotent_indices().len();
        Outcome::flag_because(
            expected == measured,
            Some("idempotents differ from the slot copies plus 0 and identity".to_string()),
        )
        .counted(
            (e_count * m + 2) as u64,
            measured.len() as u64,
            "|E(S)|*m + 2",
        )
    });

    rec.run("idempotent_cross_products_zero", || {
        let idem: Vec<usize> = (0..n)
            .filter(|&i| cert.source[i].is_idempotent())
            .collect();
        for &e in &idem {
            for &f in &idem {
                for j in 0..m {
                    let a = ctx.cell(e, j, j);
                    let b = ctx.cell(f, (j + 1) % m, (j + 1) % m);
                    if !mul(a, b).is_empty_map() {
                        return Outcome::flag_because(
                            false,
                            Some(format!("cross-slot idempotent product ({e},{f}) not zero")),
                        );
                    }
                }
            }
        }
        Outcome::flag(true)
    });

    rec.run("idempotent_band_preserved", || {
        let source_idem = ctx.source_sem.idempotent_indices();
        let closed = source_idem.iter().all(|&e| {
            source_idem
                .iter()
                .all(|&f| ctx.source_sem.element(ctx.source_sem.product(e, f)).is_idempotent())
        });
        if !closed {
            return Outcome::flag(true).counted(0, 0, "vacuous: E(S) not a band");
        }
        let big_idem = ctx.semigroup.idempotent_indices();
        for &e in &big_idem {
            for &f in &big_idem {
                if !ctx
                    .semigroup
                    .element(ctx.semigroup.product(e, f))
                    .is_idempotent()
                {
                    return Outcome::flag_because(
                        false,
                        Some(format!("idempotent product ({e}, {f}) escapes the band")),
                    );
                }
            }
        }
        Outcome::flag(true).counted(
            (big_idem.len() * big_idem.len()) as u64,
            (big_idem.len() * big_idem.len()) as u64,
            "|E(T)|^2 products",
        )
    });

    rec.run("ideal_regular_when_source_regular", || {
        if !ctx.source_sem.classify().is_regular {
            return Outcome::flag(true).counted(0, 0, "vacuous: source not regular");
        }
        let mut classes: BTreeSet<usize> = BTreeSet::new();
        for c in &ideal {
            let idx = ctx.semigroup.index_of(c).expect("closure");
            classes.insert(ctx.green.d_class_of(idx));
        }
        let zero_idx = ctx
            .semigroup
            .index_of(&PartialTransformation::empty(cert.carrier.points()))
            .expect("zero");
        classes.insert(ctx.green.d_class_of(zero_idx));
        for c in classes {
            if !ctx.green.d_class_is_regular(c) {
                return Outcome::flag_because(
                    false,
                    Some("a class inside the ideal has no idempotent".to_string()),
                );
            }
        }
        Outcome::flag(true)
    });

    identity_preservation_check(&ctx, &mut rec);
    interval_injectivity_check(&ctx, &mut rec);
    below_sandwich_check(&ctx, &mut rec);
    shift_rule_checks(&ctx, &mut rec);

    Ok(rec.finish("s3", mode))
}

/// Full or structural verification of an orthodox-method certificate.
pub fn verify_structure_s4(
    cert: &EmbeddingCertificate,
    mode: Mode,
    cap: usize,
    clock: &dyn Clock,
) -> Result<VerificationReport> {
    if cert.method != Method::OrthodoxS4 {
        return Err(Error::WrongMethod {
            method: cert.method.as_str(),
        });
    }
    let mut rec = Recorder::new(clock);
    relation_checks(cert, &mut rec);
    monomorphism_checks(cert, &mut rec);

    if mode == Mode::Structural {
        let source_sem = FiniteSemigroup::enumerate(&cert.source, cap)?;
        lambda_sample_checks(cert, &mut rec);
        idempotent_sample_checks(cert, &source_sem, &mut rec);
        return Ok(rec.finish("s4", mode));
    }

    let (n, m) = (cert.n(), cert.m());
    let projected = m + 2 * m * m + n * m * m + 1;
    let ctx = FullContext::build(cert, cap, projected)?;
    let points = cert.carrier.points();
    let terms = cert.sidon_terms.clone().unwrap_or_default();

    rec.run("enumeration_size", || {
        Outcome::count(
            projected as u64,
            ctx.semigroup.size() as u64,
            "m + 2*m^2 + n*m^2 + 1",
        )
    });

    let unit_group: Vec<PartialTransformation> = (0..m)
        .map(|r| cert.beta.power(r as i64).expect("power"))
        .collect();
    // beta^r · alpha^eps · beta^s for eps in {1, 2}
    let alpha_sq = mul(&cert.alpha, &cert.alpha);
    let mut middle: Vec<PartialTransformation> = Vec::with_capacity(2 * m * m);
    for core in [&cert.alpha, &alpha_sq] {
        let mut left = PartialTransformation::identity(points);
        for _ in 0..m {
            let la = mul(&left, core);
            let mut cur = la.clone();
            for _ in 0..m {
                middle.push(cur.clone());
                cur = mul(&cur, &cert.beta);
            }
            left = mul(&left, &cert.beta);
        }
    }

    rec.run("h_beta_size", || {
        let set: BTreeSet<&PartialTransformation> = unit_group.iter().collect();
        Outcome::count(m as u64, set.len() as u64, "m cycle powers")
    });

    rec.run("d_alpha_size", || {
        let set: BTreeSet<&PartialTransformation> = middle.iter().collect();
        Outcome::count(
            (2 * m * m) as u64,
            set.len() as u64,
            "2*m^2 pairwise distinct sandwich products",
        )
    });

    rec.run("ideal_size", || {
        let mut set: BTreeSet<PartialTransformation> = ctx.cells.iter().cloned().collect();
        set.insert(PartialTransformation::empty(points));
        Outcome::count((n * m * m + 1) as u64, set.len() as u64, "n*m^2 + 1 cells")
    });

    rec.run("partition", || {
        let mut all: BTreeSet<PartialTransformation> = BTreeSet::new();
        let mut total = 0usize;
        for t in unit_group.iter().chain(middle.iter()).chain(ctx.cells.iter()) {
            all.insert(t.clone());
            total += 1;
        }
        all.insert(PartialTransformation::empty(points));
        total += 1;
        if all.len() != total {
            return Outcome::flag_because(
                false,
                Some("the three layers are not pairwise disjoint".to_string()),
            );
        }
        let enumerated: BTreeSet<PartialTransformation> =
            ctx.semigroup.elements().iter().cloned().collect();
        Outcome::flag_because(
            all == enumerated,
            Some("layer union differs from the enumerated semigroup".to_string()),
        )
        .counted(enumerated.len() as u64, all.len() as u64, "disjoint union")
    });

    rec.run("domain_profile", || {
        // dom(beta^r · alpha^eps · beta^s) meets exactly the intervals
        // (t − r) mod m over the spacing terms t; ranges shift by +s
        let z = cert.carrier;
        for (pos, el) in middle.iter().enumerate() {
            let (eps, rest) = (pos / (m * m), pos % (m * m));
            let (r, s) = (rest / m, rest % m);
            let _ = eps;
            let dom: BTreeSet<usize> = el.domain().map(|p| z.interval_of(p)).collect();
            let expect_dom: BTreeSet<usize> = terms
                .iter()
                .map(|&t| ((t as usize + m) - r) % m)
                .collect();
            if dom != expect_dom {
                return Outcome::flag_because(
                    false,
                    Some(format!("domain profile wrong at (eps {}, r {r}, s {s})", pos / (m * m) + 1)),
                );
            }
            let ran: BTreeSet<usize> = el
                .domain()
                .map(|p| z.interval_of(el.image(p).expect("in domain")))
                .collect();
            let expect_ran: BTreeSet<usize> =
                terms.iter().map(|&t| (t as usize + s) % m).collect();
            if ran != expect_ran {
                return Outcome::flag_because(
                    false,
                    Some(format!("range profile wrong at (eps {}, r {r}, s {s})", pos / (m * m) + 1)),
                );
            }
        }
        Outcome::count(
            (2 * m * m) as u64,
            middle.len() as u64,
            "2*m^2 domain/range profiles",
        )
    });

    rec.run("h_alpha_is_order_two_group", || {
        let alpha_idx = ctx.semigroup.index_of(&cert.alpha).expect("generator");
        let h = ctx.green.h_class_of(alpha_idx);
        let members: BTreeSet<usize> = ctx
            .semigroup
            .elements()
            .iter()
            .enumerate()
            .filter(|(i, _)| ctx.green.h_class_of(*i) == h)
            .map(|(i, _)| i)
            .collect();
        let expect: BTreeSet<usize> = [
            alpha_idx,
            ctx.semigroup.index_of(&alpha_sq).expect("in closure"),
        ]
        .into_iter()
        .collect();
        Outcome::flag_because(
            members == expect,
            Some("the H-class of the spaced generator is not {alpha, alpha^2}".to_string()),
        )
        .counted(2, members.len() as u64, "two-element group")
    });

    rec.run("idempotent_set", || {
        let measured: BTreeSet<PartialTransformation> = ctx
            .semigroup
            .elements()
            .iter()
            .filter(|t| t.is_idempotent())
            .cloned()
            .collect();
        let mut expected: BTreeSet<PartialTransformation> = BTreeSet::new();
        for i in 0..n {
            if cert.source[i].is_idempotent() {
                for j in 0..m {
                    expected.insert(ctx.cell(i, j, j).clone());
                }
            }
        }
        let beta_inv = cert.beta.inverse().expect("cycle");
        let mut rho = alpha_sq.clone();
        for _ in 0..m {
            expected.insert(rho.clone());
            rho = mul(&mul(&cert.beta, &rho), &beta_inv);
        }
        expected.insert(PartialTransformation::empty(points));
        expected.insert(PartialTransformation::identity(points));
        let e_count = ctx.source_sem.idempotent_indices().len();
        Outcome::flag_because(
            expected == measured,
            Some("idempotents differ from slot copies, cycle conjugates, 0 and identity".to_string()),
        )
        .counted(
            (e_count * m + m + 2) as u64,
            measured.len() as u64,
            "|E(S)|*m + m + 2",
        )
    });

    rec.run("idempotents_fix_intervals", || {
        let z = cert.carrier;
        for (i, el) in ctx.semigroup.elements().iter().enumerate() {
            if !el.is_idempotent() {
                continue;
            }
            for p in el.domain() {
                let q = el.image(p).expect("in domain");
                if z.interval_of(p) != z.interval_of(q) {
                    return Outcome::flag_because(
                        false,
                        Some(format!("idempotent {i} moves interval {}", z.interval_of(p))),
                    );
                }
            }
        }
        Outcome::flag(true)
    });

    rec.run("principal_factor_brandt", || {
        let alpha_idx = ctx.semigroup.index_of(&cert.alpha).expect("generator");
        let pf = ctx.semigroup.principal_factor(alpha_idx, &ctx.green);
        let expected_card = (1 + 2 * m * m) as u64;
        if pf.size() as u64 != expected_card {
            return Outcome::count(expected_card, pf.size() as u64, "1 + 2*m^2");
        }
        let brandt = pf.brandt();
        let want = BrandtParams {
            group_order: 2,
            rows: m,
            cols: m,
        };
        if brandt != Some(want) {
            return Outcome::flag_because(
                false,
                Some(format!("principal factor parameters {brandt:?}")),
            )
            .counted(expected_card, pf.size() as u64, "1 + 2*m^2");
        }
        // the Rees route must agree: valid coordinates with a
        // permutation-pattern sandwich matrix
        match pf.rees() {
            Some(rees) if rees.sandwich_is_permutation() => {
                Outcome::count(expected_card, pf.size() as u64, "1 + 2*m^2")
            }
            _ => Outcome::flag_because(
                false,
                Some("Rees coordinates missing or sandwich not a permutation".to_string()),
            ),
        }
    });

    rec.run("regular", || {
        let classification = ctx.semigroup.classify_with(&ctx.green);
        Outcome::flag_because(
            classification.is_regular,
            Some("an element has no inverse".to_string()),
        )
    });

    rec.run("idempotent_band_when_source_orthodox", || {
        if !ctx.source_sem.classify().is_orthodox {
            return Outcome::flag(true).counted(0, 0, "vacuous: source not orthodox");
        }
        let idem = ctx.semigroup.idempotent_indices();
        for &e in &idem {
            for &f in &idem {
                if !ctx
                    .semigroup
                    .element(ctx.semigroup.product(e, f))
                    .is_idempotent()
                {
                    return Outcome::flag_because(
                        false,
                        Some(format!("idempotent product ({e}, {f}) escapes the band")),
                    );
                }
            }
        }
        Outcome::flag(true).counted(
            (idem.len() * idem.len()) as u64,
            (idem.len() * idem.len()) as u64,
            "|E(T)|^2 products",
        )
    });

    rec.run("idempotent_semilattice_when_source_inverse", || {
        if !ctx.source_sem.classify().is_inverse {
            return Outcome::flag(true).counted(0, 0, "vacuous: source not inverse");
        }
        let idem = ctx.semigroup.idempotent_indices();
        for &e in &idem {
            for &f in &idem {
                let ef = ctx.semigroup.product(e, f);
                if ef != ctx.semigroup.product(f, e)
                    || !ctx.semigroup.element(ef).is_idempotent()
                {
                    return Outcome::flag_because(
                        false,
                        Some(format!("idempotents ({e}, {f}) fail to commute into the band")),
                    );
                }
            }
        }
        Outcome::flag(true).counted(
            (idem.len() * idem.len()) as u64,
            (idem.len() * idem.len()) as u64,
            "|E(T)|^2 commuting products",
        )
    });

    identity_preservation_check(&ctx, &mut rec);
    interval_injectivity_check(&ctx, &mut rec);
    below_sandwich_check(&ctx, &mut rec);
    shift_rule_checks(&ctx, &mut rec);

    Ok(rec.finish("s4", mode))
}

/// Enumerates the semigroup generated by two idempotents and checks the
/// classical bounds: at most six idempotents and no three-element chain
/// in the natural order `x ≤ y iff xy = yx = x`.
pub fn verify_two_idempotent_bound(
    e: &PartialTransformation,
    f: &PartialTransformation,
    cap: usize,
    clock: &dyn Clock,
) -> Result<VerificationReport> {
    if !e.is_idempotent() {
        return Err(Error::NotIdempotent { index: 0 });
    }
    if !f.is_idempotent() {
        return Err(Error::NotIdempotent { index: 1 });
    }
    let semigroup = FiniteSemigroup::enumerate(&[e.clone(), f.clone()], cap)?;
    let idem = semigroup.idempotent_indices();
    let mut rec = Recorder::new(clock);

    rec.run("at_most_six_idempotents", || {
        Outcome::flag(idem.len() <= 6).counted(
            6,
            idem.len() as u64,
            "upper bound for two idempotent generators",
        )
    });

    rec.run("no_three_element_chain", || {
        let leq = |a: usize, b: usize| {
            semigroup.product(a, b) == a && semigroup.product(b, a) == a
        };
        for &a in &idem {
            for &b in &idem {
                if a == b || !leq(a, b) {
                    continue;
                }
                for &c in &idem {
                    if c != a && c != b && leq(b, c) {
                        return Outcome::flag_because(
                            false,
                            Some(format!("chain {a} < {b} < {c}")),
                        );
                    }
                }
            }
        }
        Outcome::flag(true)
    });

    Ok(rec.finish("idem2", Mode::Full))
}
