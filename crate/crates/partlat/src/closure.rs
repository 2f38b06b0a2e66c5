//! Sublattice closure: the least set containing some generators and closed
//! under meet and join.
//!
//! The algorithm is one worklist loop everywhere: a growing list of distinct
//! elements, and for each newly reached element (index `i`) a pass over all
//! pairs `(i, j)` with `j <= i`. Once index `i` has been processed, every
//! pair inside `list[0..=i]` has been combined, so when the cursor catches
//! up with the end of the list the set is closed. Three engines share this
//! shape and differ only in how elements are keyed:
//!
//! * dense: elements of a tabulated `Equ(n)` are `u16` ranks, operations
//!   are table reads, membership is an epoch-stamped array. This is the
//!   path exhaustive counting lives on.
//! * product codes: elements of a product of tabulated `Equ(n_j)` packed
//!   into one `u64` in mixed radix, factor operations by table.
//! * generic: arbitrary [`Elt`] values interned in a hash map; works for
//!   any context and is the only engine that records witnesses.
//!
//! Early exit: in an atomistic lattice the final closure is join-closed, so
//! as soon as the working set contains every atom of the context the
//! closure can only be the whole lattice. `generates` uses this to answer
//! without materializing the remaining elements. The full-equivalence and
//! product contexts are atomistic; for explicit contexts the flag is
//! ignored because atomisticity is not known.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use num_bigint::BigUint;

use crate::context::{Elt, EquTable, LatticeContext, MAX_TABLE_N};
use crate::error::{Error, Result};

/// Knobs for [`close`] and [`generates`].
#[derive(Clone, Debug)]
pub struct ClosureOptions {
    /// Stop as soon as every atom of the context is in the working set
    /// (sound for atomistic contexts; ignored for explicit ones).
    pub early_exit_on_atoms: bool,
    /// Abort with a capacity error once the working set outgrows this.
    pub max_elements: Option<usize>,
    /// Record, for every element, how it was first reached (generator
    /// index, or meet/join of two earlier elements). Forces the generic
    /// engine.
    pub record_witness_terms: bool,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        ClosureOptions {
            early_exit_on_atoms: false,
            max_elements: None,
            record_witness_terms: false,
        }
    }
}

/// How a closure element was first reached; indices refer to
/// [`ClosureSet::elements`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessStep {
    /// Seeded from `generators[k]`.
    Generator(usize),
    Meet(u32, u32),
    Join(u32, u32),
}

/// Result of [`close`]: the reached elements in discovery order
/// (deduplicated generators first).
#[derive(Clone, Debug)]
pub struct ClosureSet {
    pub elements: Vec<Elt>,
    /// True when the run stopped early because all atoms were present; the
    /// element list is then a subset of the true closure.
    pub early_exited: bool,
    /// Per-element provenance, when requested.
    pub witnesses: Option<Vec<WitnessStep>>,
}

impl ClosureSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, e: &Elt) -> bool {
        self.elements.contains(e)
    }
}

/// Comparability profile of a four-element generating set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderType {
    /// No two of the four are comparable.
    Antichain,
    /// Exactly one comparable pair.
    OneOneTwo,
    Other,
}

impl std::fmt::Display for OrderType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OrderType::Antichain => write!(f, "antichain"),
            OrderType::OneOneTwo => write!(f, "one_one_two"),
            OrderType::Other => write!(f, "other"),
        }
    }
}

pub(crate) enum RunStatus {
    /// The worklist drained: the list is the complete closure.
    Complete,
    /// All atoms present; stopped with a partial list.
    EarlyExit,
    /// Element cap exceeded.
    Capped,
}

/// Multi-word bitmask over the context's atoms with a missing-count, so
/// fullness is O(1).
struct AtomMask {
    words: Vec<u64>,
    missing: usize,
}

impl AtomMask {
    fn new(num_atoms: usize) -> Self {
        AtomMask {
            words: vec![0; num_atoms.div_ceil(64)],
            missing: num_atoms,
        }
    }

    fn reset(&mut self, num_atoms: usize) {
        self.words.iter_mut().for_each(|w| *w = 0);
        self.missing = num_atoms;
    }

    #[inline]
    fn set(&mut self, ord: usize) {
        let (w, b) = (ord / 64, 1u64 << (ord % 64));
        if self.words[w] & b == 0 {
            self.words[w] |= b;
            self.missing -= 1;
        }
    }

    #[inline]
    fn full(&self) -> bool {
        self.missing == 0
    }
}

/// Reusable closure engine over a tabulated `Equ(n)`; elements are ranks.
///
/// Reuse matters: membership stamps are a `bell(n)`-sized array cleared by
/// bumping an epoch counter instead of rewriting the array, so a long
/// enumeration pays O(closure size) per quadruple, not O(bell(n)).
pub(crate) struct DenseCloser {
    table: Arc<EquTable>,
    stamp: Vec<u32>,
    epoch: u32,
    mask: AtomMask,
    pub(crate) list: Vec<u16>,
}

impl DenseCloser {
    pub(crate) fn new(table: Arc<EquTable>) -> DenseCloser {
        let size = table.size();
        let atoms = table.num_atoms();
        DenseCloser {
            table,
            stamp: vec![0; size],
            epoch: 0,
            mask: AtomMask::new(atoms),
            list: Vec::with_capacity(size.min(4096)),
        }
    }

    pub(crate) fn table(&self) -> &EquTable {
        &self.table
    }

    /// Runs the worklist from the given generator ranks. Afterwards
    /// `self.list` holds the reached ranks in discovery order.
    pub(crate) fn run(&mut self, gens: &[u16], early_exit: bool, cap: Option<usize>) -> RunStatus {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            // Stamp values from the previous wrap-around era are stale.
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        self.mask.reset(self.table.num_atoms());
        self.list.clear();
        let cap = cap.unwrap_or(usize::MAX);

        for &g in gens {
            if self.insert(g) && self.list.len() > cap {
                return RunStatus::Capped;
            }
        }
        if early_exit && self.mask.full() {
            return RunStatus::EarlyExit;
        }

        let mut i = 0;
        while i < self.list.len() {
            let a = self.list[i];
            for j in 0..=i {
                let b = self.list[j];
                let m = self.table.meet_id(a, b);
                if self.insert(m) {
                    if early_exit && self.mask.full() {
                        return RunStatus::EarlyExit;
                    }
                    if self.list.len() > cap {
                        return RunStatus::Capped;
                    }
                }
                let jn = self.table.join_id(a, b);
                if self.insert(jn) {
                    if early_exit && self.mask.full() {
                        return RunStatus::EarlyExit;
                    }
                    if self.list.len() > cap {
                        return RunStatus::Capped;
                    }
                }
            }
            i += 1;
        }
        RunStatus::Complete
    }

    /// True iff the generators generate the whole lattice. Early-exits on
    /// the atom mask; a drained worklist without all atoms present means a
    /// proper sublattice.
    pub(crate) fn generates(&mut self, gens: &[u16]) -> bool {
        match self.run(gens, true, None) {
            RunStatus::EarlyExit => true,
            RunStatus::Complete => self.list.len() == self.table.size(),
            RunStatus::Capped => unreachable!("no cap was set"),
        }
    }

    #[inline]
    fn insert(&mut self, id: u16) -> bool {
        let slot = &mut self.stamp[id as usize];
        if *slot == self.epoch {
            return false;
        }
        *slot = self.epoch;
        self.list.push(id);
        if let Some(ord) = self.table.atom_ordinal(id) {
            self.mask.set(ord);
        }
        true
    }
}

/// Closure engine over a product of tabulated `Equ(n_j)`; elements are
/// mixed-radix codes in one `u64`.
///
/// The worklist is quadratic in the closure size, so the inner pair loop
/// avoids both hashing and division: membership is a stamp array indexed
/// by code whenever the code space is small enough, and every reached
/// element keeps its factor decomposition in a flat side list so meets
/// and joins are pure table lookups.
pub(crate) struct ProductCloser {
    tables: Vec<Arc<EquTable>>,
    weights: Vec<u64>,
    atom_offsets: Vec<usize>,
    num_atoms: usize,
    membership: Membership,
    /// Component ids of `list[i]` at `i * num_factors ..`.
    decomp: Vec<u16>,
    pub(crate) list: Vec<u64>,
}

/// Cap on the stamp-array size for dense membership (16 MiB of `u32`).
const DENSE_MEMBERSHIP_MAX: u64 = 1 << 22;

enum Membership {
    Dense { stamp: Vec<u32>, epoch: u32 },
    Hashed(HashSet<u64>),
}

impl Membership {
    /// True when the code was absent; marks it present.
    #[inline]
    fn insert(&mut self, code: u64) -> bool {
        match self {
            Membership::Dense { stamp, epoch } => {
                let slot = &mut stamp[code as usize];
                if *slot == *epoch {
                    false
                } else {
                    *slot = *epoch;
                    true
                }
            }
            Membership::Hashed(set) => set.insert(code),
        }
    }

    fn clear(&mut self) {
        match self {
            Membership::Dense { stamp, epoch } => {
                *epoch = epoch.wrapping_add(1);
                if *epoch == 0 {
                    stamp.iter_mut().for_each(|s| *s = 0);
                    *epoch = 1;
                }
            }
            Membership::Hashed(set) => set.clear(),
        }
    }
}

impl ProductCloser {
    /// Builds the engine for `Equ(ns[0]) x ... x Equ(ns[last])`. Fails when
    /// a factor is too big to tabulate or the code space overflows `u64`.
    pub(crate) fn try_new(ns: &[usize]) -> Result<ProductCloser> {
        let tables: Vec<Arc<EquTable>> =
            ns.iter().map(|&n| EquTable::get(n)).collect::<Result<_>>()?;
        let mut weights = Vec::with_capacity(ns.len());
        let mut acc: u128 = 1;
        let mut atom_offsets = Vec::with_capacity(ns.len());
        let mut atoms = 0usize;
        for t in &tables {
            weights.push(acc as u64);
            atom_offsets.push(atoms);
            atoms += t.num_atoms();
            acc *= t.size() as u128;
            if acc > u64::MAX as u128 {
                return Err(Error::Capacity(
                    "product lattice code space exceeds u64".to_string(),
                ));
            }
        }
        let size = acc as u64;
        let membership = if size <= DENSE_MEMBERSHIP_MAX {
            Membership::Dense {
                stamp: vec![0; size as usize],
                epoch: 1,
            }
        } else {
            Membership::Hashed(HashSet::new())
        };
        Ok(ProductCloser {
            tables,
            weights,
            atom_offsets,
            num_atoms: atoms,
            membership,
            decomp: Vec::new(),
            list: Vec::new(),
        })
    }

    pub(crate) fn num_factors(&self) -> usize {
        self.tables.len()
    }

    pub(crate) fn factor_table(&self, j: usize) -> &EquTable {
        &self.tables[j]
    }

    /// Total number of elements, if it fits `u64` (guaranteed by
    /// construction).
    pub(crate) fn size(&self) -> u64 {
        let last = self.tables.len() - 1;
        self.weights[last] * self.tables[last].size() as u64
    }

    pub(crate) fn encode(&self, ids: &[u16]) -> u64 {
        debug_assert_eq!(ids.len(), self.tables.len());
        ids.iter()
            .zip(&self.weights)
            .map(|(&id, &w)| id as u64 * w)
            .sum()
    }

    #[inline]
    pub(crate) fn component(&self, code: u64, j: usize) -> u16 {
        ((code / self.weights[j]) % self.tables[j].size() as u64) as u16
    }

    pub(crate) fn decode(&self, code: u64) -> Vec<u16> {
        (0..self.tables.len())
            .map(|j| self.component(code, j))
            .collect()
    }

    /// Meet and join of the elements at list positions `ai` and `bi`,
    /// composed from the stored decompositions.
    #[inline]
    fn meet_join_at(&self, ai: usize, bi: usize) -> (u64, u64) {
        let f = self.tables.len();
        let a = &self.decomp[ai * f..ai * f + f];
        let b = &self.decomp[bi * f..bi * f + f];
        let mut m = 0u64;
        let mut jn = 0u64;
        for j in 0..f {
            m += self.tables[j].meet_id(a[j], b[j]) as u64 * self.weights[j];
            jn += self.tables[j].join_id(a[j], b[j]) as u64 * self.weights[j];
        }
        (m, jn)
    }

    /// Atom ordinal of a code: exactly one component differs from bottom
    /// and is an atom of its factor. Factor bottoms have rank 0, so the
    /// code of the product bottom is 0.
    fn atom_ordinal(&self, code: u64) -> Option<usize> {
        let mut found = None;
        for j in 0..self.tables.len() {
            let c = self.component(code, j);
            if c != EquTable::BOTTOM_ID {
                if found.is_some() {
                    return None;
                }
                let ord = self.tables[j].atom_ordinal(c)?;
                found = Some(self.atom_offsets[j] + ord);
            }
        }
        found
    }

    /// Appends a fresh code to the list along with its decomposition;
    /// false when already present.
    #[inline]
    fn insert(&mut self, code: u64, mask: &mut AtomMask) -> bool {
        if !self.membership.insert(code) {
            return false;
        }
        self.list.push(code);
        for j in 0..self.tables.len() {
            self.decomp.push(self.component(code, j));
        }
        if let Some(ord) = self.atom_ordinal(code) {
            mask.set(ord);
        }
        true
    }

    pub(crate) fn run(&mut self, gens: &[u64], early_exit: bool, cap: Option<usize>) -> RunStatus {
        self.membership.clear();
        self.list.clear();
        self.decomp.clear();
        let cap = cap.unwrap_or(usize::MAX);
        let mut mask = AtomMask::new(self.num_atoms);

        for &g in gens {
            if self.insert(g, &mut mask) && self.list.len() > cap {
                return RunStatus::Capped;
            }
        }
        if early_exit && mask.full() {
            return RunStatus::EarlyExit;
        }

        let mut i = 0;
        while i < self.list.len() {
            for j in 0..=i {
                let (m, jn) = self.meet_join_at(i, j);
                for x in [m, jn] {
                    if self.insert(x, &mut mask) {
                        if early_exit && mask.full() {
                            return RunStatus::EarlyExit;
                        }
                        if self.list.len() > cap {
                            return RunStatus::Capped;
                        }
                    }
                }
            }
            i += 1;
        }
        RunStatus::Complete
    }
}

/// Fallback engine interning arbitrary elements; the only one that records
/// witnesses.
struct GenericCloser {
    elements: Vec<Elt>,
    map: HashMap<Elt, u32>,
    witnesses: Option<Vec<WitnessStep>>,
}

impl GenericCloser {
    fn run(
        gens: &[Elt],
        atoms: Option<Vec<Elt>>,
        record: bool,
        cap: Option<usize>,
    ) -> Result<(Self, RunStatus)> {
        let mut me = GenericCloser {
            elements: Vec::new(),
            map: HashMap::new(),
            witnesses: record.then(Vec::new),
        };
        let cap = cap.unwrap_or(usize::MAX);
        let atom_ord: HashMap<Elt, usize> = atoms
            .map(|ats| ats.into_iter().enumerate().map(|(i, a)| (a, i)).collect())
            .unwrap_or_default();
        let mut mask = AtomMask::new(atom_ord.len());
        let early_exit = !atom_ord.is_empty();

        for (k, g) in gens.iter().enumerate() {
            if me.insert(g.clone(), WitnessStep::Generator(k), &atom_ord, &mut mask) {
                if me.elements.len() > cap {
                    return Ok((me, RunStatus::Capped));
                }
            }
        }
        if early_exit && mask.full() {
            return Ok((me, RunStatus::EarlyExit));
        }

        let mut i = 0;
        while i < me.elements.len() {
            for j in 0..=i {
                let (a, b) = (&me.elements[i], &me.elements[j]);
                let m = a.meet(b)?;
                let jn = a.join(b)?;
                for (x, step) in [
                    (m, WitnessStep::Meet(i as u32, j as u32)),
                    (jn, WitnessStep::Join(i as u32, j as u32)),
                ] {
                    if me.insert(x, step, &atom_ord, &mut mask) {
                        if early_exit && mask.full() {
                            return Ok((me, RunStatus::EarlyExit));
                        }
                        if me.elements.len() > cap {
                            return Ok((me, RunStatus::Capped));
                        }
                    }
                }
            }
            i += 1;
        }
        Ok((me, RunStatus::Complete))
    }

    fn insert(
        &mut self,
        e: Elt,
        step: WitnessStep,
        atom_ord: &HashMap<Elt, usize>,
        mask: &mut AtomMask,
    ) -> bool {
        if self.map.contains_key(&e) {
            return false;
        }
        self.map.insert(e.clone(), self.elements.len() as u32);
        if let Some(&ord) = atom_ord.get(&e) {
            mask.set(ord);
        }
        self.elements.push(e);
        if let Some(w) = &mut self.witnesses {
            w.push(step);
        }
        true
    }
}

/// Computes the sublattice generated by `generators` inside `ctx`.
///
/// With `early_exit_on_atoms` the returned set may be a proper subset of
/// the closure (flagged by `early_exited`): the context is then known to be
/// fully generated. A `max_elements` overflow raises
/// [`Error::ClosureCap`] carrying the partial size.
pub fn close(
    generators: &[Elt],
    ctx: &LatticeContext,
    opts: &ClosureOptions,
) -> Result<ClosureSet> {
    if generators.is_empty() {
        return Err(Error::arg("closure of an empty generating set".to_string()));
    }
    for g in generators {
        if !ctx.contains(g)? {
            return Err(Error::arg(format!("generator {g} is not in the context")));
        }
    }
    if let Some(cap) = opts.max_elements {
        if cap < generators.len() {
            return Err(Error::arg(format!(
                "max_elements={cap} is below the generator count {}",
                generators.len()
            )));
        }
    }

    // Dense path: tabulated full equivalence lattice.
    if !opts.record_witness_terms {
        if let LatticeContext::FullEquivalence { n } = ctx {
            if *n <= MAX_TABLE_N {
                let table = EquTable::get(*n)?;
                let ids: Vec<u16> = generators
                    .iter()
                    .map(|g| table.id_of(g.as_part().expect("membership checked")))
                    .collect::<Result<_>>()?;
                let mut closer = DenseCloser::new(Arc::clone(&table));
                let status = closer.run(&ids, opts.early_exit_on_atoms, opts.max_elements);
                if let RunStatus::Capped = status {
                    return Err(Error::ClosureCap {
                        cap: opts.max_elements.unwrap(),
                        partial: closer.list.len(),
                    });
                }
                return Ok(ClosureSet {
                    elements: closer
                        .list
                        .iter()
                        .map(|&id| Elt::Part(table.part(id).clone()))
                        .collect(),
                    early_exited: matches!(status, RunStatus::EarlyExit),
                    witnesses: None,
                });
            }
        }
        if let Some(ns) = flat_product_dims(ctx) {
            if let Ok(mut closer) = ProductCloser::try_new(&ns) {
                let codes: Vec<u64> = generators
                    .iter()
                    .map(|g| encode_tuple(&closer, g))
                    .collect::<Result<_>>()?;
                let status = closer.run(&codes, opts.early_exit_on_atoms, opts.max_elements);
                if let RunStatus::Capped = status {
                    return Err(Error::ClosureCap {
                        cap: opts.max_elements.unwrap(),
                        partial: closer.list.len(),
                    });
                }
                return Ok(ClosureSet {
                    elements: closer
                        .list
                        .iter()
                        .map(|&code| decode_tuple(&closer, code))
                        .collect(),
                    early_exited: matches!(status, RunStatus::EarlyExit),
                    witnesses: None,
                });
            }
        }
    }

    // Generic path. Early exit only where atomisticity is known.
    let atoms = if opts.early_exit_on_atoms && !matches!(ctx, LatticeContext::Explicit { .. }) {
        Some(ctx.atoms()?)
    } else {
        None
    };
    let (closer, status) = GenericCloser::run(generators, atoms, opts.record_witness_terms, opts.max_elements)?;
    if let RunStatus::Capped = status {
        return Err(Error::ClosureCap {
            cap: opts.max_elements.unwrap(),
            partial: closer.elements.len(),
        });
    }
    Ok(ClosureSet {
        elements: closer.elements,
        early_exited: matches!(status, RunStatus::EarlyExit),
        witnesses: closer.witnesses,
    })
}

/// Factor sizes when `ctx` is a flat product of full equivalence lattices.
fn flat_product_dims(ctx: &LatticeContext) -> Option<Vec<usize>> {
    if let LatticeContext::Product { factors } = ctx {
        factors
            .iter()
            .map(|f| match f {
                LatticeContext::FullEquivalence { n } if *n <= MAX_TABLE_N => Some(*n),
                _ => None,
            })
            .collect()
    } else {
        None
    }
}

fn encode_tuple(closer: &ProductCloser, e: &Elt) -> Result<u64> {
    let t = e
        .as_tuple()
        .ok_or_else(|| Error::arg("expected a tuple element".to_string()))?;
    let ids: Vec<u16> = t
        .iter()
        .enumerate()
        .map(|(j, x)| {
            closer
                .factor_table(j)
                .id_of(x.as_part().expect("validated shape"))
        })
        .collect::<Result<_>>()?;
    Ok(closer.encode(&ids))
}

fn decode_tuple(closer: &ProductCloser, code: u64) -> Elt {
    Elt::Tuple(
        (0..closer.num_factors())
            .map(|j| Elt::Part(closer.factor_table(j).part(closer.component(code, j)).clone()))
            .collect(),
    )
}

/// True iff the generators generate the whole context.
///
/// Honors `early_exit_on_atoms` (see module docs for why that is sound);
/// without it the full closure is compared against the context size.
pub fn generates(generators: &[Elt], ctx: &LatticeContext, opts: &ClosureOptions) -> Result<bool> {
    let closed = close(generators, ctx, opts)?;
    if closed.early_exited {
        return Ok(true);
    }
    if BigUint::from(closed.len()) != ctx.size() {
        return Ok(false);
    }
    // Same cardinality; for an explicit context confirm containment, since
    // operations there can step outside a list that is not closed.
    if matches!(ctx, LatticeContext::Explicit { .. }) {
        for e in &closed.elements {
            if !ctx.contains(e)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Classifies the comparability pattern of four distinct elements.
pub fn order_type(quadruple: &[Elt], ctx: &LatticeContext) -> Result<OrderType> {
    if quadruple.len() != 4 {
        return Err(Error::arg(format!(
            "order type is defined for exactly four elements, got {}",
            quadruple.len()
        )));
    }
    for (i, a) in quadruple.iter().enumerate() {
        if !ctx.contains(a)? {
            return Err(Error::arg(format!("element {a} is not in the context")));
        }
        for b in &quadruple[i + 1..] {
            if a == b {
                return Err(Error::arg("order type requires distinct elements".to_string()));
            }
        }
    }
    let mut comparable = 0;
    for (i, a) in quadruple.iter().enumerate() {
        for b in &quadruple[i + 1..] {
            if a.leq(b)? || b.leq(a)? {
                comparable += 1;
            }
        }
    }
    Ok(match comparable {
        0 => OrderType::Antichain,
        1 => OrderType::OneOneTwo,
        _ => OrderType::Other,
    })
}
