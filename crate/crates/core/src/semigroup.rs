//! Finite transformation semigroups enumerated from generators, and the
//! structure theory computed on top of them: Green's relations with the
//! order on classes, classification predicates, local submonoids,
//! principal factors with Rees/Brandt recognition, and the right-regular
//! (Cayley) representation of a multiplication table.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::ptrans::PartialTransformation;

/// Default bound on enumeration size. Large enough for every full-mode
/// verification the suites run at desk scale.
pub const DEFAULT_ENUMERATION_CAP: usize = 2_000_000;

/// A finite semigroup of partial transformations: the closure of a
/// generator list under composition, with both Cayley graphs.
///
/// The element order is deterministic — it depends only on the generator
/// order and the breadth-first product order — so indices are stable
/// across runs and reports are reproducible.
#[derive(Clone, Debug)]
pub struct FiniteSemigroup {
    elements: Vec<PartialTransformation>,
    index: BTreeMap<PartialTransformation, usize>,
    generators: Vec<usize>,
    right_cayley: Vec<Vec<u32>>,
    left_cayley: Vec<Vec<u32>>,
    has_adjoined_identity: bool,
}

impl FiniteSemigroup {
    /// Breadth-first closure of the generators under right multiplication.
    /// Fails with the partial count if the closure would exceed `cap`.
    pub fn enumerate(generators: &[PartialTransformation], cap: usize) -> Result<Self> {
        Self::enumerate_inner(generators, cap, false)
    }

    /// Same as [`enumerate`](Self::enumerate) but seeds the identity map
    /// first, so the result is a monoid with the identity at index 0.
    pub fn enumerate_with_adjoined_identity(
        generators: &[PartialTransformation],
        cap: usize,
    ) -> Result<Self> {
        Self::enumerate_inner(generators, cap, true)
    }

    fn enumerate_inner(
        generators: &[PartialTransformation],
        cap: usize,
        adjoin_identity: bool,
    ) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::NoGenerators);
        }
        let degree = generators[0].degree();
        for g in generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    left: degree,
                    right: g.degree(),
                });
            }
        }

        let mut elements: Vec<PartialTransformation> = Vec::new();
        let mut index: BTreeMap<PartialTransformation, usize> = BTreeMap::new();
        let mut seeds: Vec<PartialTransformation> = Vec::new();
        if adjoin_identity {
            seeds.push(PartialTransformation::identity(degree));
        }
        seeds.extend_from_slice(generators);

        // dedupe seeds, preserving first occurrence
        let mut gens: Vec<PartialTransformation> = Vec::new();
        for g in seeds {
            if index.contains_key(&g) {
                continue;
            }
            let id = elements.len();
            if id >= cap {
                return Err(Error::CapExceeded { cap, partial: id });
            }
            index.insert(g.clone(), id);
            elements.push(g.clone());
            gens.push(g);
        }
        let generator_ids: Vec<usize> = (0..gens.len()).collect();

        let mut right_cayley: Vec<Vec<u32>> = Vec::new();
        let mut next = 0usize;
        while next < elements.len() {
            let mut row = Vec::with_capacity(gens.len());
            for g in &gens {
                let p = elements[next].compose(g)?;
                let id = match index.get(&p) {
                    Some(&id) => id,
                    None => {
                        let id = elements.len();
                        if id >= cap {
                            return Err(Error::CapExceeded { cap, partial: id });
                        }
                        index.insert(p.clone(), id);
                        elements.push(p);
                        id
                    }
                };
                row.push(id as u32);
            }
            right_cayley.push(row);
            next += 1;
        }

        // left graph in a second pass; every product g·t is already present
        let mut left_cayley = Vec::with_capacity(elements.len());
        for t in &elements {
            let mut row = Vec::with_capacity(gens.len());
            for g in &gens {
                let p = g.compose(t)?;
                row.push(index[&p] as u32);
            }
            left_cayley.push(row);
        }

        Ok(Self {
            elements,
            index,
            generators: generator_ids,
            right_cayley,
            left_cayley,
            has_adjoined_identity: adjoin_identity,
        })
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn degree(&self) -> usize {
        self.elements[0].degree()
    }

    pub fn elements(&self) -> &[PartialTransformation] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &PartialTransformation {
        &self.elements[i]
    }

    pub fn index_of(&self, t: &PartialTransformation) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn generator_indices(&self) -> &[usize] {
        &self.generators
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn has_adjoined_identity(&self) -> bool {
        self.has_adjoined_identity
    }

    /// Index of the product of two elements. Closure guarantees presence.
    pub fn product(&self, a: usize, b: usize) -> usize {
        let p = self.elements[a]
            .compose(&self.elements[b])
            .expect("uniform degree");
        self.index[&p]
    }

    /// Right Cayley step: index of `elements[t] · generator[g]`.
    pub fn right_step(&self, t: usize, g: usize) -> usize {
        self.right_cayley[t][g] as usize
    }

    /// Left Cayley step: index of `generator[g] · elements[t]`.
    pub fn left_step(&self, t: usize, g: usize) -> usize {
        self.left_cayley[t][g] as usize
    }

    pub fn idempotent_indices(&self) -> Vec<usize> {
        self.elements
            .iter()
            .enumerate()
            .filter(|(_, e)| e.is_idempotent())
            .map(|(i, _)| i)
            .collect()
    }

    /// Direct regularity test for one element: some `x` with `axa = a`.
    /// Used as the independent oracle for the Green-based route.
    pub fn is_regular_element(&self, a: usize) -> bool {
        let ta = &self.elements[a];
        self.elements.iter().any(|x| {
            ta.compose(x)
                .and_then(|ax| ax.compose(ta))
                .map(|axa| axa == *ta)
                .unwrap_or(false)
        })
    }

    /// Identity element of the semigroup, if there is one. It suffices to
    /// act as identity on the generators: products inherit the property.
    pub fn identity_element(&self) -> Option<usize> {
        'cand: for (e, t) in self.elements.iter().enumerate() {
            if !t.is_idempotent() {
                continue;
            }
            for &g in &self.generators {
                if self.product(e, g) != g || self.product(g, e) != g {
                    continue 'cand;
                }
            }
            return Some(e);
        }
        None
    }

    /// Green's relations of the whole semigroup, with the order on
    /// classes. The computed D- and J-partitions are asserted equal, as
    /// they must be in the finite case.
    pub fn green(&self) -> GreenStructure {
        let n = self.size();
        let (r_of, _) = canonical_partition(tarjan_scc(&self.right_cayley));
        let (l_of, _) = canonical_partition(tarjan_scc(&self.left_cayley));

        // H = R ∩ L
        let mut h_ids: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut h_of = Vec::with_capacity(n);
        for i in 0..n {
            let key = (r_of[i], l_of[i]);
            let next = h_ids.len();
            let id = *h_ids.entry(key).or_insert(next);
            h_of.push(id);
        }

        // D = join of R and L via union-find
        let mut dsu = Dsu::new(n);
        let mut first_in_r: BTreeMap<usize, usize> = BTreeMap::new();
        let mut first_in_l: BTreeMap<usize, usize> = BTreeMap::new();
        for i in 0..n {
            if let Some(&j) = first_in_r.get(&r_of[i]) {
                dsu.union(i, j);
            } else {
                first_in_r.insert(r_of[i], i);
            }
            if let Some(&j) = first_in_l.get(&l_of[i]) {
                dsu.union(i, j);
            } else {
                first_in_l.insert(l_of[i], i);
            }
        }
        let (d_of, nd) = canonical_partition((0..n).map(|i| dsu.find(i)).collect());

        // J from the two-sided Cayley graph
        let mut both = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = self.right_cayley[i].clone();
            row.extend_from_slice(&self.left_cayley[i]);
            both.push(row);
        }
        let (j_of, _) = canonical_partition(tarjan_scc(&both));
        assert_eq!(
            d_of, j_of,
            "D and J partitions must coincide on a finite semigroup"
        );

        // class member lists
        let members = |of: &[usize], count: usize| {
            let mut m: Vec<Vec<usize>> = alloc::vec![Vec::new(); count];
            for (i, &c) in of.iter().enumerate() {
                m[c].push(i);
            }
            m
        };
        let nr = r_of.iter().max().map_or(0, |&c| c + 1);
        let nl = l_of.iter().max().map_or(0, |&c| c + 1);
        let nh = h_ids.len();
        let r_members = members(&r_of, nr);
        let l_members = members(&l_of, nl);
        let h_members = members(&h_of, nh);
        let d_members = members(&d_of, nd);

        let mut d_idempotents: Vec<Vec<usize>> = alloc::vec![Vec::new(); nd];
        for (i, t) in self.elements.iter().enumerate() {
            if t.is_idempotent() {
                d_idempotents[d_of[i]].push(i);
            }
        }
        let d_regular: Vec<bool> = d_idempotents.iter().map(|v| !v.is_empty()).collect();

        // condensation reachability: reach[c] = classes inside the ideal of c
        let mut class_adj: Vec<BTreeSet<usize>> = alloc::vec![BTreeSet::new(); nd];
        for i in 0..n {
            for &s in self.right_cayley[i].iter().chain(self.left_cayley[i].iter()) {
                let (a, b) = (d_of[i], d_of[s as usize]);
                if a != b {
                    class_adj[a].insert(b);
                }
            }
        }
        let mut reach = alloc::vec![alloc::vec![false; nd]; nd];
        for c in 0..nd {
            let mut stack = alloc::vec![c];
            while let Some(v) = stack.pop() {
                if reach[c][v] {
                    continue;
                }
                reach[c][v] = true;
                stack.extend(class_adj[v].iter().copied());
            }
        }

        GreenStructure {
            r_of,
            l_of,
            h_of,
            d_of,
            r_members,
            l_members,
            h_members,
            d_members,
            d_regular,
            d_idempotents,
            reach,
        }
    }

    /// Classification flags, computed from a Green structure of `self`.
    pub fn classify_with(&self, green: &GreenStructure) -> Classification {
        let idempotents = self.idempotent_indices();
        let is_band = idempotents.len() == self.size();
        let is_regular = green.d_regular.iter().all(|&r| r);

        let mut closed = true;
        let mut commuting = true;
        'pairs: for &e in &idempotents {
            for &f in &idempotents {
                let ef = self.product(e, f);
                if !self.elements[ef].is_idempotent() {
                    closed = false;
                }
                if ef != self.product(f, e) {
                    commuting = false;
                }
                if !closed && !commuting {
                    break 'pairs;
                }
            }
        }

        Classification {
            is_regular,
            idempotents_form_band: closed,
            is_orthodox: is_regular && closed,
            is_inverse: is_regular && commuting,
            is_band,
            is_semilattice: is_band && commuting,
            is_monoid: self.identity_element().is_some(),
        }
    }

    /// Classification flags; computes Green's relations internally.
    pub fn classify(&self) -> Classification {
        self.classify_with(&self.green())
    }

    /// The local submonoid `eSe` for an idempotent `e`, as an enumerated
    /// semigroup with identity `e`.
    pub fn corner(&self, e: usize, cap: usize) -> Result<FiniteSemigroup> {
        if !self.elements[e].is_idempotent() {
            return Err(Error::NotIdempotent { index: e });
        }
        let mut seen: BTreeSet<usize> = BTreeSet::new();
        let mut members: Vec<PartialTransformation> = Vec::new();
        for s in 0..self.size() {
            let ese = self.product(self.product(e, s), e);
            if seen.insert(ese) {
                members.push(self.elements[ese].clone());
            }
        }
        // eSe is closed, so enumerating from all members reproduces it
        FiniteSemigroup::enumerate(&members, cap)
    }

    /// The principal factor of the J-class of `a`: the class with a
    /// formal zero adjoined, products leaving the class sent to zero.
    pub fn principal_factor<'a>(&'a self, a: usize, green: &GreenStructure) -> PrincipalFactor<'a> {
        let class = green.d_of[a];
        let members = green.d_members[class].clone();
        let mut local: BTreeMap<usize, usize> = BTreeMap::new();
        for (loc, &amb) in members.iter().enumerate() {
            local.insert(amb, loc);
        }
        let (row_of, rows) =
            canonical_partition(members.iter().map(|&i| green.r_of[i]).collect());
        let (col_of, cols) =
            canonical_partition(members.iter().map(|&i| green.l_of[i]).collect());
        let regular = green.d_regular[class];
        PrincipalFactor {
            semigroup: self,
            members,
            local,
            row_of,
            col_of,
            rows,
            cols,
            regular,
        }
    }
}

/// Green's relations as partitions of the element indices, plus the
/// order among D-classes (computed via two-sided reachability).
#[derive(Clone, Debug)]
pub struct GreenStructure {
    r_of: Vec<usize>,
    l_of: Vec<usize>,
    h_of: Vec<usize>,
    d_of: Vec<usize>,
    r_members: Vec<Vec<usize>>,
    l_members: Vec<Vec<usize>>,
    h_members: Vec<Vec<usize>>,
    d_members: Vec<Vec<usize>>,
    d_regular: Vec<bool>,
    d_idempotents: Vec<Vec<usize>>,
    reach: Vec<Vec<bool>>,
}

impl GreenStructure {
    pub fn r_class_of(&self, i: usize) -> usize {
        self.r_of[i]
    }
    pub fn l_class_of(&self, i: usize) -> usize {
        self.l_of[i]
    }
    pub fn h_class_of(&self, i: usize) -> usize {
        self.h_of[i]
    }
    pub fn d_class_of(&self, i: usize) -> usize {
        self.d_of[i]
    }
    pub fn num_r_classes(&self) -> usize {
        self.r_members.len()
    }
    pub fn num_l_classes(&self) -> usize {
        self.l_members.len()
    }
    pub fn num_h_classes(&self) -> usize {
        self.h_members.len()
    }
    pub fn num_d_classes(&self) -> usize {
        self.d_members.len()
    }
    pub fn r_class_members(&self, c: usize) -> &[usize] {
        &self.r_members[c]
    }
    pub fn l_class_members(&self, c: usize) -> &[usize] {
        &self.l_members[c]
    }
    pub fn h_class_members(&self, c: usize) -> &[usize] {
        &self.h_members[c]
    }
    pub fn d_class_members(&self, c: usize) -> &[usize] {
        &self.d_members[c]
    }
    /// A D-class is regular iff it contains an idempotent.
    pub fn d_class_is_regular(&self, c: usize) -> bool {
        self.d_regular[c]
    }
    pub fn idempotents_of_d_class(&self, c: usize) -> &[usize] {
        &self.d_idempotents[c]
    }
    /// Class order: `a ≤ b` iff the ideal generated by `b` contains `a`.
    pub fn j_leq(&self, a: usize, b: usize) -> bool {
        self.reach[b][a]
    }
    pub fn j_lt(&self, a: usize, b: usize) -> bool {
        a != b && self.reach[b][a]
    }
}

/// Classification predicates of an enumerated semigroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub is_regular: bool,
    pub idempotents_form_band: bool,
    pub is_orthodox: bool,
    pub is_inverse: bool,
    pub is_band: bool,
    pub is_semilattice: bool,
    pub is_monoid: bool,
}

/// A D-class plus a formal zero. Local indices `0..k` name the class
/// members (in ambient index order); `k` names the zero.
pub struct PrincipalFactor<'a> {
    semigroup: &'a FiniteSemigroup,
    members: Vec<usize>,
    local: BTreeMap<usize, usize>,
    row_of: Vec<usize>,
    col_of: Vec<usize>,
    rows: usize,
    cols: usize,
    regular: bool,
}

/// Parameters of a recognised Brandt semigroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BrandtParams {
    pub group_order: usize,
    pub rows: usize,
    pub cols: usize,
}

/// Rees coordinates extracted from a completely 0-simple principal
/// factor. `decompose` maps `(row, group element, col)` to local indices;
/// `sandwich[col][row]` is a group element (local index) or zero.
pub struct ReesData {
    pub rows: usize,
    pub cols: usize,
    /// Local indices of the structure group (the H-class of the chosen
    /// idempotent).
    pub group: Vec<usize>,
    pub row_reps: Vec<usize>,
    pub col_reps: Vec<usize>,
    pub sandwich: Vec<Vec<Option<usize>>>,
}

impl<'a> PrincipalFactor<'a> {
    pub fn member_count(&self) -> usize {
        self.members.len()
    }

    /// Cardinality including the formal zero.
    pub fn size(&self) -> usize {
        self.members.len() + 1
    }

    pub fn zero(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn ambient_of(&self, local: usize) -> usize {
        self.members[local]
    }

    /// Product of two local elements; anything leaving the class is zero.
    pub fn mul(&self, x: usize, y: usize) -> usize {
        let z = self.zero();
        if x == z || y == z {
            return z;
        }
        let p = self.semigroup.product(self.members[x], self.members[y]);
        self.local.get(&p).copied().unwrap_or(z)
    }

    pub fn idempotents(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .members
            .iter()
            .enumerate()
            .filter(|(_, &amb)| self.semigroup.element(amb).is_idempotent())
            .map(|(loc, _)| loc)
            .collect();
        out.push(self.zero());
        out
    }

    /// A principal factor of a finite semigroup is completely 0-simple
    /// exactly when its class is regular; otherwise it is null.
    pub fn is_completely_zero_simple(&self) -> bool {
        self.regular
    }

    /// Rees coordinates with validation: returns data only when the
    /// decomposition `(i, g, λ) ↦ a_i · g · b_λ` is a bijection onto the
    /// class and the sandwich multiplication reproduces every product.
    pub fn rees(&self) -> Option<ReesData> {
        if !self.regular {
            return None;
        }
        let z = self.zero();
        let e = *self
            .members
            .iter()
            .enumerate()
            .find(|(_, &amb)| self.semigroup.element(amb).is_idempotent())
            .map(|(loc, _)| loc)
            .get_or_insert(z);
        if e == z {
            return None;
        }
        let (er, ec) = (self.row_of[e], self.col_of[e]);
        // group = H_e; row reps in column of e, column reps in row of e
        let mut group = Vec::new();
        let mut row_reps = alloc::vec![usize::MAX; self.rows];
        let mut col_reps = alloc::vec![usize::MAX; self.cols];
        for loc in 0..self.members.len() {
            let (r, c) = (self.row_of[loc], self.col_of[loc]);
            if r == er && c == ec {
                group.push(loc);
            }
            if c == ec && row_reps[r] == usize::MAX {
                row_reps[r] = loc;
            }
            if r == er && col_reps[c] == usize::MAX {
                col_reps[c] = loc;
            }
        }
        // use e itself as the representative of its own row and column
        row_reps[er] = e;
        col_reps[ec] = e;
        if row_reps.contains(&usize::MAX) || col_reps.contains(&usize::MAX) {
            return None;
        }

        let group_pos: BTreeMap<usize, usize> =
            group.iter().enumerate().map(|(p, &g)| (g, p)).collect();
        let mut sandwich = alloc::vec![alloc::vec![None; self.rows]; self.cols];
        for c in 0..self.cols {
            for r in 0..self.rows {
                let p = self.mul(col_reps[c], row_reps[r]);
                if p != z {
                    sandwich[c][r] = Some(*group_pos.get(&p)?);
                }
            }
        }

        // decomposition must cover the class bijectively
        if self
            .rows
            .checked_mul(self.cols)
            .and_then(|rc| rc.checked_mul(group.len()))
            != Some(self.members.len())
        {
            return None;
        }
        let mut seen = alloc::vec![false; self.members.len()];
        let mut coords = alloc::vec![(0usize, 0usize, 0usize); self.members.len()];
        for r in 0..self.rows {
            for (gp, &g) in group.iter().enumerate() {
                let ag = self.mul(row_reps[r], g);
                for c in 0..self.cols {
                    let x = self.mul(ag, col_reps[c]);
                    if x == z || seen[x] {
                        return None;
                    }
                    seen[x] = true;
                    coords[x] = (r, gp, c);
                }
            }
        }

        // sandwich multiplication must reproduce every product
        let gmul = |a: usize, b: usize| -> usize {
            let p = self.mul(group[a], group[b]);
            group_pos[&p]
        };
        for x in 0..self.members.len() {
            for y in 0..self.members.len() {
                let (ri, gi, ci) = coords[x];
                let (rj, gj, cj) = coords[y];
                let direct = self.mul(x, y);
                match sandwich[ci][rj] {
                    None => {
                        if direct != z {
                            return None;
                        }
                    }
                    Some(p) => {
                        let g = gmul(gmul(gi, p), gj);
                        let expect = self.mul(self.mul(row_reps[ri], group[g]), col_reps[cj]);
                        if direct != expect {
                            return None;
                        }
                    }
                }
            }
        }

        Some(ReesData {
            rows: self.rows,
            cols: self.cols,
            group,
            row_reps,
            col_reps,
            sandwich,
        })
    }

    /// Brandt recognition: completely 0-simple with commuting idempotents
    /// and a square row/column grid. Returns the parameters
    /// (group order, rows, cols) when it is one.
    pub fn brandt(&self) -> Option<BrandtParams> {
        if !self.regular || self.rows != self.cols {
            return None;
        }
        let idem = self.idempotents();
        for &e in &idem {
            for &f in &idem {
                if self.mul(e, f) != self.mul(f, e) {
                    return None;
                }
            }
        }
        let e = *idem.iter().find(|&&loc| loc != self.zero())?;
        let group_order = (0..self.members.len())
            .filter(|&loc| self.row_of[loc] == self.row_of[e] && self.col_of[loc] == self.col_of[e])
            .count();
        Some(BrandtParams {
            group_order,
            rows: self.rows,
            cols: self.cols,
        })
    }
}

impl ReesData {
    /// True when every row and column of the sandwich matrix has exactly
    /// one nonzero entry — the normal form whose sandwich is the identity
    /// matrix after reindexing and scaling.
    pub fn sandwich_is_permutation(&self) -> bool {
        let mut col_hits = alloc::vec![0usize; self.rows];
        for row in &self.sandwich {
            let hits = row.iter().filter(|e| e.is_some()).count();
            if hits != 1 {
                return false;
            }
            for (r, e) in row.iter().enumerate() {
                if e.is_some() {
                    col_hits[r] += 1;
                }
            }
        }
        col_hits.iter().all(|&h| h == 1)
    }
}

/// Right-regular representation of a multiplication table on `S¹`:
/// element `s` becomes the total map `x ↦ x·s`. When the table already
/// has an identity the carrier is `S` itself, otherwise one extra point
/// plays the adjoined identity. The result is faithful, total, and free
/// of empty mappings.
pub fn cayley_from_table(table: &[Vec<usize>]) -> Result<Vec<PartialTransformation>> {
    let n = table.len();
    if n == 0 {
        return Err(Error::NoGenerators);
    }
    for (r, row) in table.iter().enumerate() {
        if row.len() != n || row.iter().any(|&e| e >= n) {
            return Err(Error::BadTable { row: r });
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if table[table[a][b]][c] != table[a][table[b][c]] {
                    return Err(Error::NotAssociative { a, b, c });
                }
            }
        }
    }
    let identity = (0..n).find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x));
    let maps = match identity {
        Some(_) => (0..n)
            .map(|s| PartialTransformation::from_fn(n, |x| Some(table[x][s])))
            .collect(),
        None => (0..n)
            .map(|s| {
                PartialTransformation::from_fn(n + 1, |x| {
                    Some(if x == n { s } else { table[x][s] })
                })
            })
            .collect(),
    };
    Ok(maps)
}

/// Iterative Tarjan strongly-connected components over a dense adjacency
/// list; returns the raw component id per node.
fn tarjan_scc(adj: &[Vec<u32>]) -> Vec<usize> {
    let n = adj.len();
    let mut comp = alloc::vec![usize::MAX; n];
    let mut order = alloc::vec![usize::MAX; n];
    let mut low = alloc::vec![0usize; n];
    let mut on_stack = alloc::vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut frames: Vec<(usize, usize)> = Vec::new();
    let mut counter = 0usize;
    let mut ncomp = 0usize;

    for s in 0..n {
        if order[s] != usize::MAX {
            continue;
        }
        order[s] = counter;
        low[s] = counter;
        counter += 1;
        stack.push(s);
        on_stack[s] = true;
        frames.push((s, 0));
        while let Some(frame) = frames.last_mut() {
            let v = frame.0;
            if frame.1 < adj[v].len() {
                let w = adj[v][frame.1] as usize;
                frame.1 += 1;
                if order[w] == usize::MAX {
                    order[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(order[w]);
                }
            } else {
                frames.pop();
                if let Some(parent) = frames.last() {
                    let u = parent.0;
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == order[v] {
                    loop {
                        let w = stack.pop().expect("scc stack");
                        on_stack[w] = false;
                        comp[w] = ncomp;
                        if w == v {
                            break;
                        }
                    }
                    ncomp += 1;
                }
            }
        }
    }
    comp
}

/// Remaps arbitrary class ids to 0, 1, 2, … in order of first occurrence,
/// so identical partitions get identical id vectors.
fn canonical_partition(mut of: Vec<usize>) -> (Vec<usize>, usize) {
    let mut remap: BTreeMap<usize, usize> = BTreeMap::new();
    for c in of.iter_mut() {
        let next = remap.len();
        *c = *remap.entry(*c).or_insert(next);
    }
    let count = remap.len();
    (of, count)
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ptrans::PartialTransformation as Pt;

    fn pt(images: &[Option<usize>]) -> Pt {
        Pt::from_images(images).unwrap()
    }

    fn t3_generators() -> Vec<Pt> {
        alloc::vec![
            pt(&[Some(1), Some(2), Some(0)]), // 3-cycle
            pt(&[Some(1), Some(0), Some(2)]), // transposition
            pt(&[Some(0), Some(1), Some(0)]), // rank-2 idempotent
        ]
    }

    #[test]
    fn cycle_generates_cyclic_group() {
        let m = 6;
        let beta = Pt::from_fn(m, |x| Some((x + 1) % m));
        let s = FiniteSemigroup::enumerate(&[beta.clone()], 100).unwrap();
        assert_eq!(s.size(), m);
        for r in 1..=m as i64 {
            assert!(s.index_of(&beta.power(r).unwrap()).is_some());
        }
        let green = s.green();
        assert_eq!(green.num_d_classes(), 1);
        assert_eq!(green.num_h_classes(), 1);
    }

    #[test]
    fn full_transformation_monoid_on_three_points() {
        let s = FiniteSemigroup::enumerate(&t3_generators(), 1000).unwrap();
        assert_eq!(s.size(), 27);
        // independent closure oracle: every pairwise product is present
        for a in 0..s.size() {
            for b in 0..s.size() {
                let p = s.element(a).compose(s.element(b)).unwrap();
                assert!(s.index_of(&p).is_some());
            }
        }
        let green = s.green();
        assert_eq!(green.num_d_classes(), 3);
        let mut sizes: Vec<usize> = (0..3).map(|c| green.d_class_members(c).len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, alloc::vec![3, 6, 18]);
    }

    #[test]
    fn enumeration_is_deterministic() {
        let a = FiniteSemigroup::enumerate(&t3_generators(), 1000).unwrap();
        let b = FiniteSemigroup::enumerate(&t3_generators(), 1000).unwrap();
        assert_eq!(a.elements(), b.elements());
    }

    #[test]
    fn cap_is_enforced_with_partial_count() {
        let err = FiniteSemigroup::enumerate(&t3_generators(), 10).unwrap_err();
        assert_eq!(err, Error::CapExceeded { cap: 10, partial: 10 });
    }

    #[test]
    fn mixed_degrees_are_rejected() {
        let gens = alloc::vec![Pt::identity(3), Pt::identity(4)];
        assert!(matches!(
            FiniteSemigroup::enumerate(&gens, 10),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn cayley_graphs_agree_with_composition() {
        let s = FiniteSemigroup::enumerate(&t3_generators(), 1000).unwrap();
        for t in 0..s.size() {
            for (g, &gi) in s.generator_indices().iter().enumerate() {
                assert_eq!(s.right_step(t, g), s.product(t, gi));
                assert_eq!(s.left_step(t, g), s.product(gi, t));
            }
        }
    }

    #[test]
    fn green_consistency_h_is_r_meet_l() {
        let s = FiniteSemigroup::enumerate(&t3_generators(), 1000).unwrap();
        let g = s.green();
        for i in 0..s.size() {
            for j in 0..s.size() {
                let same_h = g.h_class_of(i) == g.h_class_of(j);
                let same_rl =
                    g.r_class_of(i) == g.r_class_of(j) && g.l_class_of(i) == g.l_class_of(j);
                assert_eq!(same_h, same_rl);
            }
        }
    }

    #[test]
    fn regular_class_iff_contains_idempotent() {
        let s = FiniteSemigroup::enumerate(&t3_generators(), 1000).unwrap();
        let g = s.green();
        for c in 0..g.num_d_classes() {
            let by_flag = g.d_class_is_regular(c);
            let by_scan = g
                .d_class_members(c)
                .iter()
                .all(|&i| s.is_regular_element(i));
            assert_eq!(by_flag, by_scan);
        }
    }

    #[test]
    fn classify_right_zero_band_monoid() {
        // identity plus the two constant maps on two points
        let gens = alloc::vec![
            pt(&[Some(0), Some(1)]),
            pt(&[Some(0), Some(0)]),
            pt(&[Some(1), Some(1)]),
        ];
        let s = FiniteSemigroup::enumerate(&gens, 10).unwrap();
        let c = s.classify();
        assert!(c.is_band && c.is_orthodox && c.is_monoid);
        assert!(!c.is_inverse && !c.is_semilattice);
    }

    #[test]
    fn classify_chain_of_restrictions() {
        let gens = alloc::vec![
            pt(&[Some(0), Some(1), Some(2)]),
            pt(&[Some(0), Some(1), None]),
            pt(&[Some(0), None, None]),
        ];
        let s = FiniteSemigroup::enumerate(&gens, 10).unwrap();
        let c = s.classify();
        assert!(c.is_semilattice && c.is_inverse && c.is_monoid);
    }

    #[test]
    fn corner_at_identity_is_everything() {
        let s = FiniteSemigroup::enumerate(&t3_generators(), 1000).unwrap();
        let e = s.index_of(&Pt::identity(3)).unwrap();
        let corner = s.corner(e, 1000).unwrap();
        assert_eq!(corner.size(), s.size());
    }

    #[test]
    fn corner_at_rank_one_idempotent_is_tiny() {
        let s = FiniteSemigroup::enumerate(&t3_generators(), 1000).unwrap();
        let c0 = s.index_of(&pt(&[Some(0), Some(0), Some(0)])).unwrap();
        let corner = s.corner(c0, 1000).unwrap();
        assert!(corner.size() <= 3);
        assert_eq!(corner.size(), 1);
    }

    #[test]
    fn corner_rejects_non_idempotent() {
        let s = FiniteSemigroup::enumerate(&t3_generators(), 1000).unwrap();
        let cyc = s.index_of(&pt(&[Some(1), Some(2), Some(0)])).unwrap();
        assert!(matches!(
            s.corner(cyc, 1000),
            Err(Error::NotIdempotent { .. })
        ));
    }

    /// 5-element combinatorial Brandt semigroup: a, b, ab, ba, 0 with
    /// aba = a and bab = b.
    pub(crate) fn b2_table() -> Vec<Vec<usize>> {
        alloc::vec![
            alloc::vec![4, 2, 4, 0, 4],
            alloc::vec![3, 4, 1, 4, 4],
            alloc::vec![0, 4, 2, 4, 4],
            alloc::vec![4, 1, 4, 3, 4],
            alloc::vec![4, 4, 4, 4, 4],
        ]
    }

    #[test]
    fn cayley_representation_of_trivial_and_b2() {
        let one = cayley_from_table(&[alloc::vec![0]]).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0], Pt::identity(1));

        let maps = cayley_from_table(&b2_table()).unwrap();
        assert_eq!(maps.len(), 5);
        assert!(maps.iter().all(|m| m.degree() == 6 && m.is_total()));
        // faithful homomorphism against the table
        let table = b2_table();
        for x in 0..5 {
            for y in 0..5 {
                assert_eq!(maps[x].compose(&maps[y]).unwrap(), maps[table[x][y]]);
            }
        }
        let set: BTreeSet<&Pt> = maps.iter().collect();
        assert_eq!(set.len(), 5);
    }

    #[test]
    fn non_associative_table_is_rejected() {
        let bad = alloc::vec![alloc::vec![0, 0], alloc::vec![0, 0]];
        assert!(cayley_from_table(&bad).is_ok());
        let bad = alloc::vec![alloc::vec![1, 1], alloc::vec![0, 0]];
        assert!(matches!(
            cayley_from_table(&bad),
            Err(Error::NotAssociative { .. })
        ));
    }

    #[test]
    fn brandt_recognition_on_b2() {
        let maps = cayley_from_table(&b2_table()).unwrap();
        let s = FiniteSemigroup::enumerate(&maps, 100).unwrap();
        let green = s.green();
        let a = s.index_of(&maps[0]).unwrap();
        let pf = s.principal_factor(a, &green);
        assert_eq!(pf.member_count(), 4);
        let params = pf.brandt().expect("Brandt");
        assert_eq!(
            params,
            BrandtParams {
                group_order: 1,
                rows: 2,
                cols: 2
            }
        );
        let rees = pf.rees().expect("Rees data");
        assert!(rees.sandwich_is_permutation());
    }

    #[test]
    fn rectangular_band_with_zero_is_not_brandt() {
        // 2x2 rectangular band e_{ij}, products e_{ij} e_{kl} = e_{il},
        // with a zero adjoined
        let mut table = alloc::vec![alloc::vec![0usize; 5]; 5];
        let idx = |i: usize, j: usize| 2 * i + j;
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        table[idx(i, j)][idx(k, l)] = idx(i, l);
                    }
                }
            }
        }
        for x in 0..5 {
            table[x][4] = 4;
            table[4][x] = 4;
        }
        let maps = cayley_from_table(&table).unwrap();
        let s = FiniteSemigroup::enumerate(&maps, 100).unwrap();
        let green = s.green();
        let a = s.index_of(&maps[0]).unwrap();
        let pf = s.principal_factor(a, &green);
        assert_eq!(pf.member_count(), 4);
        assert!(pf.is_completely_zero_simple());
        assert!(pf.brandt().is_none());
    }

    #[test]
    fn j_order_on_t3_follows_rank() {
        let s = FiniteSemigroup::enumerate(&t3_generators(), 1000).unwrap();
        let g = s.green();
        let rank = |i: usize| -> usize {
            let mut seen = BTreeSet::new();
            for x in 0..3 {
                if let Some(y) = s.element(i).image(x) {
                    seen.insert(y);
                }
            }
            seen.len()
        };
        for i in 0..s.size() {
            for j in 0..s.size() {
                let (ci, cj) = (g.d_class_of(i), g.d_class_of(j));
                if g.j_lt(ci, cj) {
                    assert!(rank(i) < rank(j));
                }
            }
        }
    }
}
