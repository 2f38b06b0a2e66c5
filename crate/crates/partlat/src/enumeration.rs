//! Exhaustive scan over four-element subsets of `Equ(n)` for generating
//! sets.
//!
//! Subsets are identified with their colexicographic rank (see
//! [`crate::counting::rank_colex4`]), so a job is a half-open rank interval,
//! a checkpoint is a single "next rank" marker, and counting splits into
//! disjoint rank ranges whose results add up independent of the split. The
//! scan prunes with two necessary conditions before running a closure:
//!
//! * the join of the four elements must be the top and their meet the
//!   bottom, because every lattice term over the subset evaluates inside
//!   the interval bounded by those two (sound for every `n`);
//! * once `n >= 4`, subsets containing the bottom or the top can be
//!   skipped outright, because such a subset generates exactly when its
//!   other three elements do alone, and no three elements suffice from
//!   `n = 4` on. At `n = 3` three elements can generate, so this shortcut
//!   stays off there.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::thread;

use crate::closure::DenseCloser;
use crate::context::EquTable;
use crate::counting::{choose4, unrank_colex4};
use crate::error::{Error, Result};
use crate::partition::Partition;
use serde::Serialize;

/// A counting assignment: the colex ranks `lo..hi` of the 4-subset
/// enumeration for `Equ(n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EnumJob {
    pub n: usize,
    pub lo: u64,
    pub hi: u64,
}

impl EnumJob {
    /// The job covering every 4-subset of `Equ(n)`.
    pub fn full(n: usize) -> Result<EnumJob> {
        let table = EquTable::get(n)?;
        let total = choose4(table.size() as u64)?;
        Ok(EnumJob { n, lo: 0, hi: total })
    }
}

/// Execution knobs for [`count_generating_quadruples`]. The lifetime is
/// the progress hook's borrow.
pub struct EnumOptions<'a> {
    /// Worker threads per block; `0` means one per available core.
    pub parallelism: usize,
    /// Checkpoint file, rewritten atomically after every block. An existing
    /// file resumes the scan from its `next` marker; a file written for a
    /// different job is an integrity error.
    pub checkpoint: Option<PathBuf>,
    /// Ranks per block. Each block is one (possibly parallel) scan followed
    /// by one checkpoint write and one progress call.
    pub block_size: u64,
    /// Stop after this many blocks even if ranks remain, reporting
    /// `completed == false`. Lets tests exercise kill/resume without
    /// process control.
    pub max_blocks: Option<u64>,
    /// Apply the pruning described in the module docs. Disabled only to
    /// cross-check the pruned scan against the plain one.
    pub prune: bool,
    /// Count whole relabeling orbits at their least member instead of
    /// closing every subset. Totals are unchanged because generation is
    /// invariant under relabeling; the mode tabulates all `n!` rank maps,
    /// so it is limited to small `n`.
    pub orbits: bool,
    /// Called after every block with the running tally.
    pub progress: Option<Box<dyn FnMut(&EnumResult) + 'a>>,
}

impl<'a> Default for EnumOptions<'a> {
    fn default() -> EnumOptions<'a> {
        EnumOptions {
            parallelism: 0,
            checkpoint: None,
            block_size: 1 << 20,
            max_blocks: None,
            prune: true,
            orbits: false,
            progress: None,
        }
    }
}

/// Outcome of a (possibly partial) counting scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EnumResult {
    /// Generating quadruples found in `lo..next`.
    pub count: u64,
    /// First rank not yet processed; equals the job's `hi` once done.
    pub next: u64,
    /// Size of the full enumeration, `C(bell(n), 4)`.
    pub total: u64,
    /// Whether the requested range was covered in this call (a resumed
    /// job that was already finished also reports `true`).
    pub completed: bool,
}

/// Counts the four-element generating subsets of `Equ(n)` with ranks in
/// `job.lo..job.hi`. Over the full range the count is the number of
/// four-element generating sets of the partition lattice.
///
/// The scan proceeds in blocks; each block is split across workers, whose
/// partial counts are summed, so the result does not depend on the degree
/// of parallelism. With a checkpoint configured, progress survives losing
/// the process between blocks.
pub fn count_generating_quadruples(job: EnumJob, mut opts: EnumOptions) -> Result<EnumResult> {
    if opts.orbits && job.n > MAX_ORBIT_N {
        return Err(Error::Capacity(format!(
            "orbit mode tabulates all n! rank maps; n={} exceeds the limit of {MAX_ORBIT_N}",
            job.n
        )));
    }
    let table = EquTable::get(job.n)?;
    let total = choose4(table.size() as u64)?;
    if job.lo > job.hi || job.hi > total {
        return Err(Error::arg(format!(
            "rank range {}..{} does not fit in 0..{total}",
            job.lo, job.hi
        )));
    }
    if opts.block_size == 0 {
        return Err(Error::arg("block_size must be positive".to_string()));
    }
    let orbit_maps = if opts.orbits {
        Some(permutation_action(&table)?)
    } else {
        None
    };

    let (mut next, mut count) = match &opts.checkpoint {
        Some(path) => match read_checkpoint(path)? {
            Some(ck) => {
                if ck.n != job.n as u64 || ck.lo != job.lo || ck.hi != job.hi {
                    return Err(Error::Integrity(format!(
                        "checkpoint {} records n={} range {}..{}, but the job is n={} range {}..{}",
                        path.display(),
                        ck.n,
                        ck.lo,
                        ck.hi,
                        job.n,
                        job.lo,
                        job.hi
                    )));
                }
                if ck.next < ck.lo || ck.next > ck.hi {
                    return Err(Error::Integrity(format!(
                        "checkpoint {} has next={} outside {}..{}",
                        path.display(),
                        ck.next,
                        ck.lo,
                        ck.hi
                    )));
                }
                (ck.next, ck.count)
            }
            None => (job.lo, 0),
        },
        None => (job.lo, 0),
    };

    let workers = effective_workers(opts.parallelism);
    let mut blocks_done = 0u64;
    while next < job.hi {
        if opts.max_blocks.is_some_and(|m| blocks_done >= m) {
            break;
        }
        let block_hi = next.saturating_add(opts.block_size).min(job.hi);
        count += scan_block(
            &table,
            next,
            block_hi,
            workers,
            opts.prune,
            orbit_maps.as_deref(),
        );
        next = block_hi;
        blocks_done += 1;
        if let Some(path) = &opts.checkpoint {
            write_checkpoint(
                path,
                &Checkpoint { n: job.n as u64, lo: job.lo, hi: job.hi, next, count },
            )?;
        }
        if let Some(hook) = opts.progress.as_mut() {
            hook(&EnumResult { count, next, total, completed: next == job.hi });
        }
    }
    Ok(EnumResult { count, next, total, completed: next == job.hi })
}

/// Streams every generating quadruple of `Equ(n)` to `sink` in ascending
/// colex rank order and returns how many were emitted. The scan is
/// sequential, so the emission order is reproducible; a sink error aborts
/// the stream and is returned as-is.
pub fn list_generating_quadruples(
    n: usize,
    mut sink: impl FnMut(&[Partition; 4]) -> Result<()>,
) -> Result<u64> {
    let table = EquTable::get(n)?;
    let total = choose4(table.size() as u64)?;
    let mut closer = DenseCloser::new(Arc::clone(&table));
    let mut emitted = 0u64;
    let mut failure = None;
    scan_range(&table, 0, total, true, None, &mut closer, &mut |quad| {
        let parts = [
            table.part(quad[0]).clone(),
            table.part(quad[1]).clone(),
            table.part(quad[2]).clone(),
            table.part(quad[3]).clone(),
        ];
        match sink(&parts) {
            Ok(()) => {
                emitted += 1;
                true
            }
            Err(e) => {
                failure = Some(e);
                false
            }
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(emitted),
    }
}

/// Checks whether every four-element generating set of `Equ(n)` is an
/// antichain. Returns the verdict together with every violating quadruple
/// (as element ranks, in colex order).
pub fn verify_all_antichain(n: usize) -> Result<(bool, Vec<[u16; 4]>)> {
    let table = EquTable::get(n)?;
    let total = choose4(table.size() as u64)?;
    let mut closer = DenseCloser::new(Arc::clone(&table));
    let mut violations = Vec::new();
    scan_range(&table, 0, total, true, None, &mut closer, &mut |quad| {
        if comparable_pairs(&table, &quad) > 0 {
            violations.push(quad);
        }
        true
    });
    Ok((violations.is_empty(), violations))
}

/// Number of comparable pairs among the six element pairs of a 4-subset.
/// Zero means the subset is an antichain; exactly one means its order type
/// is two isolated elements plus one two-element chain.
pub fn comparable_pairs(table: &EquTable, quad: &[u16; 4]) -> usize {
    let mut pairs = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            if table.leq_id(quad[i], quad[j]) || table.leq_id(quad[j], quad[i]) {
                pairs += 1;
            }
        }
    }
    pairs
}

fn effective_workers(requested: usize) -> usize {
    if requested > 0 {
        requested
    } else {
        thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    }
}

/// Chunks below this size are not worth a thread spawn.
const MIN_CHUNK: u64 = 256;

/// Scans one block of ranks, splitting it across `workers` threads. Each
/// worker owns its closure scratch; the partial counts are summed, so the
/// block count is independent of the split.
fn scan_block(
    table: &Arc<EquTable>,
    lo: u64,
    hi: u64,
    workers: usize,
    prune: bool,
    orbit_maps: Option<&[Vec<u16>]>,
) -> u64 {
    debug_assert!(lo <= hi);
    if workers <= 1 || hi - lo < (workers as u64).saturating_mul(MIN_CHUNK) {
        let mut closer = DenseCloser::new(Arc::clone(table));
        return scan_range(table, lo, hi, prune, orbit_maps, &mut closer, &mut |_| true);
    }
    let step = (hi - lo).div_ceil(workers as u64);
    thread::scope(|s| {
        let mut handles = Vec::new();
        for w in 0..workers as u64 {
            let a = lo + step * w;
            if a >= hi {
                break;
            }
            let b = (a + step).min(hi);
            let table = Arc::clone(table);
            handles.push(s.spawn(move || {
                let mut closer = DenseCloser::new(Arc::clone(&table));
                scan_range(&table, a, b, prune, orbit_maps, &mut closer, &mut |_| true)
            }));
        }
        handles
            .into_iter()
            .map(|h| h.join().expect("enumeration worker panicked"))
            .sum()
    })
}

/// Core loop: walks ranks `lo..hi` in colex order, counts the generating
/// subsets (weighted by orbit size in orbit mode), and calls `hit` for each
/// one found. `hit` returning `false` stops the scan early.
fn scan_range(
    table: &EquTable,
    lo: u64,
    hi: u64,
    prune: bool,
    orbit_maps: Option<&[Vec<u16>]>,
    closer: &mut DenseCloser,
    hit: &mut impl FnMut([u16; 4]) -> bool,
) -> u64 {
    let top = table.top_id();
    let skip_extremes = prune && table.n() >= 4;
    let mut sub = unrank_colex4(lo);
    let mut found = 0u64;
    for _ in lo..hi {
        // Subset entries are strictly increasing, so only sub[0] can be the
        // bottom (rank 0) and only sub[3] the top (last rank).
        let quad = [sub[0] as u16, sub[1] as u16, sub[2] as u16, sub[3] as u16];
        'subset: {
            if skip_extremes && (quad[0] == EquTable::BOTTOM_ID || quad[3] == top) {
                break 'subset;
            }
            if prune {
                let join2 = table.join_id(quad[0], quad[1]);
                let join4 = table.join_id(join2, table.join_id(quad[2], quad[3]));
                if join4 != top {
                    break 'subset;
                }
                let meet2 = table.meet_id(quad[0], quad[1]);
                let meet4 = table.meet_id(meet2, table.meet_id(quad[2], quad[3]));
                if meet4 != EquTable::BOTTOM_ID {
                    break 'subset;
                }
            }
            // Both prunes are relabeling-invariant, so in orbit mode every
            // member of an orbit reaches (or fails to reach) this point
            // together and weighting the representative stays exact.
            let weight = match orbit_maps {
                None => 1,
                Some(maps) => match orbit_weight(maps, quad) {
                    Some(w) => w,
                    None => break 'subset,
                },
            };
            if closer.generates(&quad) {
                found += weight;
                if !hit(quad) {
                    return found;
                }
            }
        }
        next_colex4(&mut sub);
    }
    found
}

/// Advances a strictly increasing 4-subset to its colex successor.
fn next_colex4(sub: &mut [u64; 4]) {
    if sub[0] + 1 < sub[1] {
        sub[0] += 1;
    } else if sub[1] + 1 < sub[2] {
        sub[1] += 1;
        sub[0] = 0;
    } else if sub[2] + 1 < sub[3] {
        sub[2] += 1;
        sub[1] = 1;
        sub[0] = 0;
    } else {
        sub[3] += 1;
        sub[2] = 2;
        sub[1] = 1;
        sub[0] = 0;
    }
}

/// Orbit mode needs one rank map per permutation; past this the tables are
/// no longer small.
const MAX_ORBIT_N: usize = 7;

/// For every permutation of the ground set, the induced map on element
/// ranks: `maps[p][id]` is the rank of the image of element `id` under
/// permutation number `p`. The identity comes first.
fn permutation_action(table: &EquTable) -> Result<Vec<Vec<u16>>> {
    let n = table.n();
    if n > MAX_ORBIT_N {
        return Err(Error::Capacity(format!(
            "orbit mode tabulates all n! rank maps; n={n} exceeds the limit of {MAX_ORBIT_N}"
        )));
    }
    let mut maps = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let mut map = vec![0u16; table.size()];
        for (id, part) in table.parts().iter().enumerate() {
            map[id] = table.id_of(&part.permute(&perm)?)?;
        }
        maps.push(map);
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(maps)
}

/// Standard in-place successor in lexicographic order; `false` once the
/// sequence is descending (the last permutation).
fn next_permutation(perm: &mut [usize]) -> bool {
    if perm.len() < 2 {
        return false;
    }
    let mut i = perm.len() - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = perm.len() - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Orbit size when `quad` is the least member of its relabeling orbit,
/// `None` otherwise. The size is the permutation count over the stabilizer
/// size, which divides exactly.
fn orbit_weight(maps: &[Vec<u16>], quad: [u16; 4]) -> Option<u64> {
    let mut stabilizer = 0u64;
    for map in maps {
        let mut image = [
            map[quad[0] as usize],
            map[quad[1] as usize],
            map[quad[2] as usize],
            map[quad[3] as usize],
        ];
        image.sort_unstable();
        if image < quad {
            return None;
        }
        if image == quad {
            stabilizer += 1;
        }
    }
    Some(maps.len() as u64 / stabilizer)
}

const CHECKPOINT_HEADER: &str = "partlat-enum v1";

struct Checkpoint {
    n: u64,
    lo: u64,
    hi: u64,
    next: u64,
    count: u64,
}

/// Reads a checkpoint file; `None` when the file does not exist yet. Any
/// malformed content is an integrity error, never a silent restart.
fn read_checkpoint(path: &Path) -> Result<Option<Checkpoint>> {
    let text = match fs::read_to_string(path) {
        Ok(text) => text,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let mut lines = text.lines();
    if lines.next() != Some(CHECKPOINT_HEADER) {
        return Err(Error::Integrity(format!(
            "checkpoint {} does not start with `{CHECKPOINT_HEADER}`",
            path.display()
        )));
    }
    let mut fields = HashMap::new();
    for line in lines {
        let (key, value) = line.split_once(' ').ok_or_else(|| {
            Error::Integrity(format!("checkpoint {}: malformed line {line:?}", path.display()))
        })?;
        let value: u64 = value.parse().map_err(|_| {
            Error::Integrity(format!("checkpoint {}: bad value in {line:?}", path.display()))
        })?;
        if fields.insert(key.to_string(), value).is_some() {
            return Err(Error::Integrity(format!(
                "checkpoint {}: duplicate field {key:?}",
                path.display()
            )));
        }
    }
    let mut field = |key: &str| {
        fields.remove(key).ok_or_else(|| {
            Error::Integrity(format!("checkpoint {}: missing field {key:?}", path.display()))
        })
    };
    Ok(Some(Checkpoint {
        n: field("n")?,
        lo: field("lo")?,
        hi: field("hi")?,
        next: field("next")?,
        count: field("count")?,
    }))
}

/// Writes the checkpoint to a sibling temp file and renames it over the
/// target, so a crash mid-write never leaves a torn file behind.
fn write_checkpoint(path: &Path, ck: &Checkpoint) -> Result<()> {
    let text = format!(
        "{CHECKPOINT_HEADER}\nn {}\nlo {}\nhi {}\nnext {}\ncount {}\n",
        ck.n, ck.lo, ck.hi, ck.next, ck.count
    );
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path)?;
    Ok(())
}
