//! Canonical partitions of `{0..n-1}` with the lattice operations of
//! `Equ(n)`.
//!
//! A partition is stored as its restricted growth string: position `i` holds
//! the block id of element `i`, block ids are numbered by first occurrence
//! (`rgs[0] == 0`, each new id is the previous maximum plus one). Two
//! partitions over the same `n` are equal iff their strings are equal, so
//! equality and hashing are content-based and O(n).

use crate::error::{Error, Result};

/// Hard cap on ground-set size; block ids must fit in `u8`.
pub const MAX_N: usize = 255;

/// Default ceiling for [`enumerate_partitions`]; larger ground sets need the
/// explicit [`enumerate_partitions_up_to`].
pub const DEFAULT_ENUM_MAX: usize = 9;

/// An equivalence relation on `{0..n-1}` in canonical block-id form.
///
/// The derived `Ord` is plain ascending lexicographic order on the growth
/// string; it exists for deterministic keys and set canonicalization. The
/// enumeration rank order of `Equ(n)` is the *descending* lexicographic
/// order produced by [`enumerate_partitions`] (see there for why).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    rgs: Box<[u8]>,
}

impl std::fmt::Debug for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Partition[")?;
        for (b, block) in self.blocks().iter().enumerate() {
            if b > 0 {
                write!(f, "|")?;
            }
            for (i, e) in block.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{e}")?;
            }
        }
        write!(f, "]")
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_N {
        return Err(Error::arg(format!("ground-set size {n} outside 1..={MAX_N}")));
    }
    Ok(())
}

impl Partition {
    /// Canonicalizes an arbitrary block assignment (any labels) into a
    /// partition. The labels themselves carry no meaning; only which
    /// positions share a label matters.
    pub fn from_assignment<T: Eq + std::hash::Hash + Copy>(assign: &[T]) -> Result<Self> {
        check_n(assign.len())?;
        let mut map = std::collections::HashMap::with_capacity(assign.len());
        let mut rgs = Vec::with_capacity(assign.len());
        for &label in assign {
            let next = map.len() as u8;
            let id = *map.entry(label).or_insert(next);
            rgs.push(id);
        }
        Ok(Partition { rgs: rgs.into() })
    }

    /// Builds a partition from explicit blocks, which must be disjoint and
    /// cover `{0..n-1}`.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        check_n(n)?;
        let mut assign = vec![usize::MAX; n];
        let mut seen = 0usize;
        for (b, block) in blocks.iter().enumerate() {
            for &e in block {
                if e >= n {
                    return Err(Error::arg(format!("element {e} out of range for n={n}")));
                }
                if assign[e] != usize::MAX {
                    return Err(Error::arg(format!("element {e} appears in two blocks")));
                }
                assign[e] = b;
                seen += 1;
            }
        }
        if seen != n {
            return Err(Error::arg(format!(
                "blocks cover {seen} of {n} elements; they must partition the whole set"
            )));
        }
        Self::from_assignment(&assign)
    }

    /// Internal: wraps a string already in canonical form.
    pub(crate) fn from_rgs_unchecked(rgs: Vec<u8>) -> Self {
        debug_assert!(is_canonical_rgs(&rgs));
        Partition { rgs: rgs.into() }
    }

    /// The all-singletons partition, least element of `Equ(n)`.
    pub fn bottom(n: usize) -> Self {
        assert!(n >= 1 && n <= MAX_N);
        Partition {
            rgs: (0..n as u8).collect(),
        }
    }

    /// The single-block partition, greatest element of `Equ(n)`.
    pub fn top(n: usize) -> Self {
        assert!(n >= 1 && n <= MAX_N);
        Partition {
            rgs: vec![0u8; n].into(),
        }
    }

    /// The atom whose only nonsingleton block is `{u, v}`.
    pub fn atom(n: usize, u: usize, v: usize) -> Result<Self> {
        if u == v {
            return Err(Error::arg(format!(
                "atom requires two distinct elements, got {u} twice; use kequ for the degenerate case"
            )));
        }
        Self::kequ(n, &[u, v])
    }

    /// The equivalence collapsing the listed elements into one block (all
    /// others stay singletons). A list with fewer than two distinct members
    /// yields the least element.
    pub fn kequ(n: usize, members: &[usize]) -> Result<Self> {
        check_n(n)?;
        let mut assign: Vec<usize> = (0..n).collect();
        let mut first = None;
        for &e in members {
            if e >= n {
                return Err(Error::arg(format!("element {e} out of range for n={n}")));
            }
            match first {
                None => first = Some(e),
                Some(f) => assign[e] = f,
            }
        }
        // Collapsing to the first member is enough: a single shared label
        // forms one block.
        if let Some(f) = first {
            assign[f] = f;
        }
        Self::from_assignment(&assign)
    }

    /// Connected-components partition of an edge set on `{0..n-1}`. An empty
    /// edge set gives the least element.
    pub fn graph_equivalence(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        check_n(n)?;
        let mut dsu = Dsu::new(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::arg(format!("edge ({u},{v}) out of range for n={n}")));
            }
            dsu.union(u, v);
        }
        let roots: Vec<usize> = (0..n).map(|i| dsu.find(i)).collect();
        Self::from_assignment(&roots)
    }

    pub fn n(&self) -> usize {
        self.rgs.len()
    }

    /// Number of blocks.
    pub fn num_blocks(&self) -> usize {
        self.rgs.iter().copied().max().unwrap() as usize + 1
    }

    /// Block id of an element (ids are `0..num_blocks()`, by first
    /// occurrence).
    pub fn block_of(&self, e: usize) -> usize {
        self.rgs[e] as usize
    }

    /// The canonical growth string.
    pub fn rgs(&self) -> &[u8] {
        &self.rgs
    }

    pub fn is_bottom(&self) -> bool {
        self.num_blocks() == self.n()
    }

    pub fn is_top(&self) -> bool {
        self.num_blocks() == 1
    }

    /// True iff the only nonsingleton block is a pair; returns it.
    pub fn as_atom(&self) -> Option<(usize, usize)> {
        if self.n() < 2 || self.num_blocks() != self.n() - 1 {
            return None;
        }
        // Exactly one id occurs twice; find its two positions.
        let mut seen = vec![usize::MAX; self.num_blocks()];
        for (i, &b) in self.rgs.iter().enumerate() {
            if seen[b as usize] != usize::MAX {
                return Some((seen[b as usize], i));
            }
            seen[b as usize] = i;
        }
        unreachable!("an (n-1)-block partition of an n-set has a repeated id");
    }

    /// Blocks in canonical order (by least element; elements ascending).
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.num_blocks()];
        for (i, &b) in self.rgs.iter().enumerate() {
            blocks[b as usize].push(i);
        }
        blocks
    }

    /// True iff `u` and `v` are related.
    pub fn related(&self, u: usize, v: usize) -> bool {
        self.rgs[u] == self.rgs[v]
    }

    fn check_same_n(&self, other: &Self) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch(self.n(), other.n()));
        }
        Ok(())
    }

    /// Intersection of the two relations: blocks are the nonempty pairwise
    /// intersections, re-canonicalized.
    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.check_same_n(other)?;
        let qb = other.num_blocks();
        // Map (self block, other block) pairs to fresh ids by first
        // occurrence.
        let mut map = vec![u8::MAX; self.num_blocks() * qb];
        let mut next = 0u8;
        let mut rgs = Vec::with_capacity(self.n());
        for i in 0..self.n() {
            let key = self.rgs[i] as usize * qb + other.rgs[i] as usize;
            if map[key] == u8::MAX {
                map[key] = next;
                next += 1;
            }
            rgs.push(map[key]);
        }
        Ok(Partition { rgs: rgs.into() })
    }

    /// Transitive closure of the union of the two relations, computed by
    /// union-find over the block constraints of both.
    pub fn join(&self, other: &Self) -> Result<Self> {
        self.check_same_n(other)?;
        let n = self.n();
        let mut dsu = Dsu::new(n);
        let mut first_self = vec![usize::MAX; self.num_blocks()];
        let mut first_other = vec![usize::MAX; other.num_blocks()];
        for i in 0..n {
            let bs = self.rgs[i] as usize;
            if first_self[bs] == usize::MAX {
                first_self[bs] = i;
            } else {
                dsu.union(first_self[bs], i);
            }
            let bo = other.rgs[i] as usize;
            if first_other[bo] == usize::MAX {
                first_other[bo] = i;
            } else {
                dsu.union(first_other[bo], i);
            }
        }
        let roots: Vec<usize> = (0..n).map(|i| dsu.find(i)).collect();
        Ok(Self::from_assignment(&roots).expect("roots form a valid assignment"))
    }

    /// Refinement order: true iff every block of `self` lies inside a block
    /// of `other` (equivalently `self.meet(other) == self`).
    pub fn leq(&self, other: &Self) -> Result<bool> {
        self.check_same_n(other)?;
        // The other-block of each self-block's first element must be shared
        // by all its members.
        let mut rep = vec![u8::MAX; self.num_blocks()];
        for i in 0..self.n() {
            let b = self.rgs[i] as usize;
            if rep[b] == u8::MAX {
                rep[b] = other.rgs[i];
            } else if rep[b] != other.rgs[i] {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Image of the partition under a permutation of the ground set:
    /// elements `i` and `j` are related in the result iff `perm⁻¹(i)` and
    /// `perm⁻¹(j)` are related in `self`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n() {
            return Err(Error::DimensionMismatch(perm.len(), self.n()));
        }
        let n = self.n();
        let mut assign = vec![usize::MAX; n];
        let mut hit = vec![false; n];
        for i in 0..n {
            let p = perm[i];
            if p >= n || hit[p] {
                return Err(Error::arg("not a permutation".to_string()));
            }
            hit[p] = true;
            assign[p] = self.rgs[i] as usize;
        }
        Self::from_assignment(&assign)
    }

    /// Interchange vector: blocks sorted by least element, each block's
    /// members 1-indexed ascending and terminated by `0`, the whole vector
    /// right-padded with `-1` to `pad_to`. Needs `pad_to >= n + #blocks`.
    pub fn encode_canonical(&self, pad_to: usize) -> Result<Vec<i32>> {
        let need = self.n() + self.num_blocks();
        if pad_to < need {
            return Err(Error::Capacity(format!(
                "pad_to={pad_to} too small; partition needs {need} slots"
            )));
        }
        let mut out = Vec::with_capacity(pad_to);
        for block in self.blocks() {
            out.extend(block.iter().map(|&e| e as i32 + 1));
            out.push(0);
        }
        out.resize(pad_to, -1);
        Ok(out)
    }

    /// Inverse of [`encode_canonical`]; padding is optional and ignored.
    pub fn decode_canonical(vec: &[i32]) -> Result<Self> {
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut current = Vec::new();
        let mut n = 0usize;
        for &x in vec {
            match x {
                -1 => break,
                0 => {
                    if current.is_empty() {
                        return Err(Error::arg("empty block in encoded vector"));
                    }
                    blocks.push(std::mem::take(&mut current));
                }
                e if e > 0 => {
                    current.push(e as usize - 1);
                    n += 1;
                }
                _ => return Err(Error::arg(format!("invalid entry {x} in encoded vector"))),
            }
        }
        if !current.is_empty() {
            return Err(Error::arg("encoded vector ends inside a block (missing 0)"));
        }
        Partition::from_blocks(n, &blocks)
    }

    /// Compact one-line form: one base-36 digit per element (so `n <= 36`),
    /// e.g. the least element of `Equ(4)` is `"0123"` and the greatest is
    /// `"0000"`.
    pub fn rgs_string(&self) -> Result<String> {
        if self.n() > 36 {
            return Err(Error::Capacity(format!(
                "rgs string uses one base-36 digit per element; n={} > 36",
                self.n()
            )));
        }
        Ok(self
            .rgs
            .iter()
            .map(|&d| std::char::from_digit(d as u32, 36).unwrap())
            .collect())
    }

    /// Inverse of [`rgs_string`]. Rejects strings that are not canonical
    /// growth strings.
    pub fn parse_rgs_string(s: &str) -> Result<Self> {
        let mut rgs = Vec::with_capacity(s.len());
        for c in s.chars() {
            let d = c
                .to_digit(36)
                .ok_or_else(|| Error::arg(format!("invalid digit {c:?} in growth string")))?;
            rgs.push(d as u8);
        }
        if rgs.is_empty() {
            return Err(Error::arg("empty growth string"));
        }
        if !is_canonical_rgs(&rgs) {
            return Err(Error::arg(format!("{s:?} is not a canonical growth string")));
        }
        Ok(Partition { rgs: rgs.into() })
    }
}

fn is_canonical_rgs(rgs: &[u8]) -> bool {
    if rgs.first() != Some(&0) {
        return false;
    }
    let mut max = 0u8;
    for &d in &rgs[1..] {
        if d > max + 1 {
            return false;
        }
        max = max.max(d);
    }
    true
}

/// Enumerates `Equ(n)` in its fixed rank order with the default size
/// ceiling.
pub fn enumerate_partitions(n: usize) -> Result<Vec<Partition>> {
    enumerate_partitions_up_to(n, DEFAULT_ENUM_MAX)
}

/// Enumerates all partitions of `{0..n-1}` in descending lexicographic order
/// of their growth strings.
///
/// Rank 0 is the all-singletons partition (its growth string `0,1,2,...` is
/// the lexicographically largest one) and the last rank is the single-block
/// partition; plain ascending order would put the greatest element first,
/// which is the wrong end to pin at rank 0 for checkpointed enumeration.
pub fn enumerate_partitions_up_to(n: usize, max_n: usize) -> Result<Vec<Partition>> {
    check_n(n)?;
    if n > max_n {
        return Err(Error::Capacity(format!(
            "enumeration of Equ({n}) exceeds the configured ceiling {max_n}"
        )));
    }
    // Generate ascending-lex by successor steps, then reverse.
    let mut out = Vec::new();
    let mut rgs = vec![0u8; n];
    // prefix_max[i] = max of rgs[0..=i]; rgs[i] may be anything in
    // 0..=prefix_max[i-1]+1.
    let mut prefix_max = vec![0u8; n];
    loop {
        out.push(Partition {
            rgs: rgs.clone().into(),
        });
        // Find the rightmost position that can still grow.
        let mut advanced = false;
        let mut i = n;
        while i > 1 {
            i -= 1;
            if rgs[i] <= prefix_max[i - 1] {
                rgs[i] += 1;
                prefix_max[i] = prefix_max[i - 1].max(rgs[i]);
                for j in i + 1..n {
                    rgs[j] = 0;
                    prefix_max[j] = prefix_max[j - 1];
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            break;
        }
    }
    out.reverse();
    Ok(out)
}

/// Minimal union-find with path halving; used for joins and component
/// partitions.
struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
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
