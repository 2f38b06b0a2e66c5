//! Lattice contexts: the ambient lattice an element lives in.
//!
//! Three kinds are supported: the full partition lattice `Equ(n)`, an
//! explicitly listed finite lattice, and a direct product of contexts.
//! Elements are [`Elt`] values; meet, join, and order are intrinsic to the
//! element (partition operations, extended component-wise to tuples), so a
//! context adds the ambient data: size, bottom, top, and the atom list.
//!
//! For `Equ(n)` with small `n` this module also provides [`EquTable`], a
//! fully tabulated copy of the lattice (meet and join of every pair by
//! index). Closures and exhaustive enumeration spend nearly all their time
//! in meet/join, and a table turns each operation into one array read; the
//! tables are cached process-wide so the build cost is paid once per `n`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::One;

use crate::counting::bell;
use crate::error::{Error, Result};
use crate::partition::{enumerate_partitions_up_to, Partition};

/// Largest `n` for which `Equ(n)` is tabulated. `bell(8) = 4140` keeps the
/// two pair tables at about 69 MB; `bell(9)` would need 1.8 GB.
pub const MAX_TABLE_N: usize = 8;

/// An element of some lattice context: a partition, or a tuple of elements
/// of the factor contexts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elt {
    Part(Partition),
    Tuple(Vec<Elt>),
}

impl Elt {
    /// Component-wise meet; both sides must have the same shape.
    pub fn meet(&self, other: &Elt) -> Result<Elt> {
        match (self, other) {
            (Elt::Part(p), Elt::Part(q)) => Ok(Elt::Part(p.meet(q)?)),
            (Elt::Tuple(a), Elt::Tuple(b)) if a.len() == b.len() => Ok(Elt::Tuple(
                a.iter()
                    .zip(b)
                    .map(|(x, y)| x.meet(y))
                    .collect::<Result<_>>()?,
            )),
            _ => Err(Error::arg("elements have different shapes".to_string())),
        }
    }

    /// Component-wise join; both sides must have the same shape.
    pub fn join(&self, other: &Elt) -> Result<Elt> {
        match (self, other) {
            (Elt::Part(p), Elt::Part(q)) => Ok(Elt::Part(p.join(q)?)),
            (Elt::Tuple(a), Elt::Tuple(b)) if a.len() == b.len() => Ok(Elt::Tuple(
                a.iter()
                    .zip(b)
                    .map(|(x, y)| x.join(y))
                    .collect::<Result<_>>()?,
            )),
            _ => Err(Error::arg("elements have different shapes".to_string())),
        }
    }

    /// Product order: true iff `self <= other` in every component.
    pub fn leq(&self, other: &Elt) -> Result<bool> {
        match (self, other) {
            (Elt::Part(p), Elt::Part(q)) => p.leq(q),
            (Elt::Tuple(a), Elt::Tuple(b)) if a.len() == b.len() => {
                for (x, y) in a.iter().zip(b) {
                    if !x.leq(y)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            _ => Err(Error::arg("elements have different shapes".to_string())),
        }
    }

    /// The underlying partition, if this is a bare partition element.
    pub fn as_part(&self) -> Option<&Partition> {
        match self {
            Elt::Part(p) => Some(p),
            Elt::Tuple(_) => None,
        }
    }

    /// Tuple components, if this is a tuple element.
    pub fn as_tuple(&self) -> Option<&[Elt]> {
        match self {
            Elt::Part(_) => None,
            Elt::Tuple(t) => Some(t),
        }
    }
}

impl std::fmt::Display for Elt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Elt::Part(p) => match p.rgs_string() {
                Ok(s) => write!(f, "{s}"),
                Err(_) => write!(f, "{p:?}"),
            },
            Elt::Tuple(t) => {
                write!(f, "(")?;
                for (i, e) in t.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{e}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// The ambient lattice an element set lives in.
#[derive(Clone, Debug)]
pub enum LatticeContext {
    /// All of `Equ(n)`: every partition of `{0..n-1}`.
    FullEquivalence { n: usize },
    /// A finite lattice given by an explicit element list (deduplicated,
    /// all of one shape). Order and operations are those of the elements.
    Explicit { elements: Vec<Elt> },
    /// Direct product of factor contexts; elements are tuples, operations
    /// act component-wise.
    Product { factors: Vec<LatticeContext> },
}

impl LatticeContext {
    pub fn full_equivalence(n: usize) -> Result<Self> {
        if n == 0 || n > crate::partition::MAX_N {
            return Err(Error::arg(format!("ground-set size {n} out of range")));
        }
        Ok(LatticeContext::FullEquivalence { n })
    }

    /// Builds an explicit context. The list is deduplicated; it must be
    /// nonempty and shape-homogeneous.
    pub fn explicit(elements: Vec<Elt>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::arg("explicit context needs at least one element".to_string()));
        }
        let mut dedup: Vec<Elt> = Vec::with_capacity(elements.len());
        let mut seen = std::collections::HashSet::new();
        for e in elements {
            // leq against the first element validates shape homogeneity.
            if !seen.is_empty() {
                dedup[0].leq(&e)?;
            }
            if seen.insert(e.clone()) {
                dedup.push(e);
            }
        }
        Ok(LatticeContext::Explicit { elements: dedup })
    }

    pub fn product(factors: Vec<LatticeContext>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::arg("product context needs at least one factor".to_string()));
        }
        Ok(LatticeContext::Product { factors })
    }

    /// Number of elements.
    pub fn size(&self) -> BigUint {
        match self {
            LatticeContext::FullEquivalence { n } => bell(*n),
            LatticeContext::Explicit { elements } => BigUint::from(elements.len()),
            LatticeContext::Product { factors } => factors
                .iter()
                .fold(BigUint::one(), |acc, f| acc * f.size()),
        }
    }

    /// Least element. For an explicit context this is its minimum under the
    /// element order and must exist.
    pub fn bottom(&self) -> Result<Elt> {
        match self {
            LatticeContext::FullEquivalence { n } => Ok(Elt::Part(Partition::bottom(*n))),
            LatticeContext::Explicit { elements } => extremum(elements, false),
            LatticeContext::Product { factors } => Ok(Elt::Tuple(
                factors.iter().map(|f| f.bottom()).collect::<Result<_>>()?,
            )),
        }
    }

    /// Greatest element (see [`bottom`](Self::bottom) for explicit contexts).
    pub fn top(&self) -> Result<Elt> {
        match self {
            LatticeContext::FullEquivalence { n } => Ok(Elt::Part(Partition::top(*n))),
            LatticeContext::Explicit { elements } => extremum(elements, true),
            LatticeContext::Product { factors } => Ok(Elt::Tuple(
                factors.iter().map(|f| f.top()).collect::<Result<_>>()?,
            )),
        }
    }

    /// The atoms (covers of bottom), in a fixed deterministic order.
    ///
    /// For `Equ(n)` these are the `n(n-1)/2` pair-collapsing partitions in
    /// lexicographic pair order; for a product, tuples with one factor atom
    /// and bottoms elsewhere, factor-major; for an explicit context they are
    /// found by scanning the order.
    pub fn atoms(&self) -> Result<Vec<Elt>> {
        match self {
            LatticeContext::FullEquivalence { n } => {
                let mut out = Vec::with_capacity(n * (n - 1) / 2);
                for u in 0..*n {
                    for v in u + 1..*n {
                        out.push(Elt::Part(Partition::atom(*n, u, v)?));
                    }
                }
                Ok(out)
            }
            LatticeContext::Explicit { elements } => {
                let bot = self.bottom()?;
                // a is an atom iff bottom < a and nothing sits strictly
                // between them.
                let mut out = Vec::new();
                'cand: for a in elements {
                    if *a == bot {
                        continue;
                    }
                    for x in elements {
                        if *x != bot && *x != *a && x.leq(a)? && bot.leq(x)? {
                            continue 'cand;
                        }
                    }
                    out.push(a.clone());
                }
                Ok(out)
            }
            LatticeContext::Product { factors } => {
                let bottoms: Vec<Elt> =
                    factors.iter().map(|f| f.bottom()).collect::<Result<_>>()?;
                let mut out = Vec::new();
                for (j, f) in factors.iter().enumerate() {
                    for a in f.atoms()? {
                        let mut tuple = bottoms.clone();
                        tuple[j] = a;
                        out.push(Elt::Tuple(tuple));
                    }
                }
                Ok(out)
            }
        }
    }

    /// Membership test.
    pub fn contains(&self, e: &Elt) -> Result<bool> {
        match (self, e) {
            (LatticeContext::FullEquivalence { n }, Elt::Part(p)) => Ok(p.n() == *n),
            (LatticeContext::FullEquivalence { .. }, _) => Ok(false),
            (LatticeContext::Explicit { elements }, _) => Ok(elements.contains(e)),
            (LatticeContext::Product { factors }, Elt::Tuple(t)) => {
                if t.len() != factors.len() {
                    return Ok(false);
                }
                for (f, x) in factors.iter().zip(t) {
                    if !f.contains(x)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            (LatticeContext::Product { .. }, _) => Ok(false),
        }
    }

    /// Validated meet through the context: both operands must be members.
    pub fn meet(&self, a: &Elt, b: &Elt) -> Result<Elt> {
        self.check_member(a)?;
        self.check_member(b)?;
        a.meet(b)
    }

    /// Validated join through the context.
    pub fn join(&self, a: &Elt, b: &Elt) -> Result<Elt> {
        self.check_member(a)?;
        self.check_member(b)?;
        a.join(b)
    }

    /// Validated order test through the context.
    pub fn leq(&self, a: &Elt, b: &Elt) -> Result<bool> {
        self.check_member(a)?;
        self.check_member(b)?;
        a.leq(b)
    }

    fn check_member(&self, e: &Elt) -> Result<()> {
        if self.contains(e)? {
            Ok(())
        } else {
            Err(Error::arg(format!("element {e} is not in the context")))
        }
    }
}

/// Minimum (or maximum) of an explicit element list under the element
/// order; errors when the list has no least (greatest) member.
fn extremum(elements: &[Elt], greatest: bool) -> Result<Elt> {
    let mut best = &elements[0];
    for e in &elements[1..] {
        let swap = if greatest { best.leq(e)? } else { e.leq(best)? };
        if swap {
            best = e;
        }
    }
    // A chain scan finds a candidate; confirm it compares against everyone.
    for e in elements {
        let ok = if greatest { e.leq(best)? } else { best.leq(e)? };
        if !ok {
            return Err(Error::Integrity(format!(
                "explicit context has no {} element",
                if greatest { "greatest" } else { "least" }
            )));
        }
    }
    Ok(best.clone())
}

/// Lexicographic rank of the pair `u < v` among all 2-subsets of
/// `{0..n-1}`: `(0,1), (0,2), ..., (1,2), ...`.
pub fn pair_rank(n: usize, u: usize, v: usize) -> usize {
    debug_assert!(u < v && v < n);
    u * (2 * n - u - 1) / 2 + (v - u - 1)
}

/// Fully tabulated `Equ(n)`: elements in rank order plus meet/join tables
/// indexed by element rank.
///
/// Rank order is the enumeration order of
/// [`enumerate_partitions`](crate::partition::enumerate_partitions): the
/// least element has rank 0 and the greatest has rank `bell(n) - 1`.
pub struct EquTable {
    n: usize,
    parts: Vec<Partition>,
    index: HashMap<Partition, u16>,
    meet: Vec<u16>,
    join: Vec<u16>,
    /// Rank of each atom, in lexicographic pair order.
    atom_ids: Vec<u16>,
    /// For each element: its position in `atom_ids` if it is an atom, else
    /// `u16::MAX`.
    atom_ord: Vec<u16>,
}

impl EquTable {
    /// Returns the cached table for `Equ(n)`, building it on first use.
    pub fn get(n: usize) -> Result<Arc<EquTable>> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<EquTable>>>> = OnceLock::new();
        if n == 0 || n > MAX_TABLE_N {
            return Err(Error::Capacity(format!(
                "Equ({n}) is not tabulated (supported range 1..={MAX_TABLE_N})"
            )));
        }
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        // Hold the lock across the build so concurrent callers share one
        // build instead of racing; tables for small n build in well under a
        // second and the n = 8 build is rare.
        let mut guard = cache.lock().unwrap();
        if let Some(t) = guard.get(&n) {
            return Ok(Arc::clone(t));
        }
        let table = Arc::new(EquTable::build(n)?);
        guard.insert(n, Arc::clone(&table));
        Ok(table)
    }

    fn build(n: usize) -> Result<EquTable> {
        let parts = enumerate_partitions_up_to(n, MAX_TABLE_N)?;
        let size = parts.len();
        let index: HashMap<Partition, u16> = parts
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as u16))
            .collect();

        // Meet/join of every ordered pair. Rows are independent, so build
        // them in parallel and flatten.
        use rayon::prelude::*;
        let rows: Vec<(Vec<u16>, Vec<u16>)> = (0..size)
            .into_par_iter()
            .map(|i| {
                let mut mrow = Vec::with_capacity(size);
                let mut jrow = Vec::with_capacity(size);
                for j in 0..size {
                    let m = parts[i].meet(&parts[j]).expect("same n");
                    let jn = parts[i].join(&parts[j]).expect("same n");
                    mrow.push(index[&m]);
                    jrow.push(index[&jn]);
                }
                (mrow, jrow)
            })
            .collect();
        let mut meet = Vec::with_capacity(size * size);
        let mut join = Vec::with_capacity(size * size);
        for (mrow, jrow) in rows {
            meet.extend(mrow);
            join.extend(jrow);
        }

        let mut atom_ids = Vec::with_capacity(n * (n - 1) / 2);
        let mut atom_ord = vec![u16::MAX; size];
        for u in 0..n {
            for v in u + 1..n {
                let id = index[&Partition::atom(n, u, v)?];
                atom_ord[id as usize] = atom_ids.len() as u16;
                atom_ids.push(id);
            }
        }

        Ok(EquTable {
            n,
            parts,
            index,
            meet,
            join,
            atom_ids,
            atom_ord,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of elements (`bell(n)`).
    pub fn size(&self) -> usize {
        self.parts.len()
    }

    /// Element at a rank.
    pub fn part(&self, id: u16) -> &Partition {
        &self.parts[id as usize]
    }

    /// All elements in rank order.
    pub fn parts(&self) -> &[Partition] {
        &self.parts
    }

    /// Rank of a partition (which must be a partition of the right set).
    pub fn id_of(&self, p: &Partition) -> Result<u16> {
        self.index
            .get(p)
            .copied()
            .ok_or_else(|| Error::DimensionMismatch(p.n(), self.n))
    }

    #[inline]
    pub fn meet_id(&self, a: u16, b: u16) -> u16 {
        self.meet[a as usize * self.parts.len() + b as usize]
    }

    #[inline]
    pub fn join_id(&self, a: u16, b: u16) -> u16 {
        self.join[a as usize * self.parts.len() + b as usize]
    }

    #[inline]
    pub fn leq_id(&self, a: u16, b: u16) -> bool {
        self.meet_id(a, b) == a
    }

    pub const BOTTOM_ID: u16 = 0;

    pub fn top_id(&self) -> u16 {
        (self.parts.len() - 1) as u16
    }

    /// Atom ranks in lexicographic pair order.
    pub fn atom_ids(&self) -> &[u16] {
        &self.atom_ids
    }

    pub fn num_atoms(&self) -> usize {
        self.atom_ids.len()
    }

    /// Position of an element in the atom order, if it is an atom.
    #[inline]
    pub fn atom_ordinal(&self, id: u16) -> Option<usize> {
        let o = self.atom_ord[id as usize];
        (o != u16::MAX).then_some(o as usize)
    }
}
