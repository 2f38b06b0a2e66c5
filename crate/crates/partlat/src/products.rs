//! Families of zigzag configurations whose direct product of equivalence
//! lattices is four-generated, and the machinery to build and verify them.
//!
//! A family is indexed by an odd `d` and strictly increasing odd zigzag
//! lengths `m_1 < … < m_{d+2}`. Index `j` contributes quadruples whose pin
//! vectors are lifted from two antichains in a bounded-airiness poset of
//! bit vectors: the `X`-antichain gives trivial-necktie quadruples (ground
//! size `m_j + 4`), the `Y`-antichain pairs with neckties (ground size
//! `m_j + 5`). The lift prefixes encode the index so that no walking term
//! of one factor can sneak through the pins of another; the antichain and
//! cross conditions rule out interference inside an index. The per-factor
//! key and projection terms then isolate each factor's generators, which
//! makes the whole product four-generated.

use std::collections::HashSet;

use num_bigint::BigUint;
use serde::Serialize;

use crate::bits::{max_antichain, sba_exact, tra_certifiable, tra_witness, verify_tra_witness, BitVector, TraResult};
use crate::bound::length;
use crate::closure::{close, ClosureOptions};
use crate::context::{Elt, LatticeContext};
use crate::counting::{bell, binomial};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::term::TermPool;
use crate::zigzag::{
    build_configuration, verify_generation_via_terms, ETermBuilder, IdQuadruple, ZConfig,
};

/// Whether an index's necktie quadruples range over every necktie (the
/// full product) or a single canonical one (which suffices because any
/// projection of a four-generated product is four-generated).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum NecktieScope {
    All,
    Single,
}

/// Hypothesis relaxations for [`build_phi`].
#[derive(Clone, Copy, Debug)]
pub struct BuildOptions {
    /// Permit `(p_j, q_j) = (0, 0)`, dropping index `j` from the family.
    pub allow_drops: bool,
    pub necktie_scope: NecktieScope,
}

impl BuildOptions {
    /// The unrelaxed hypotheses: every index present, every necktie used.
    pub fn strict() -> Self {
        BuildOptions {
            allow_drops: false,
            necktie_scope: NecktieScope::All,
        }
    }

    /// Projection mode: factor dropping allowed, one necktie per index.
    pub fn reduced() -> Self {
        BuildOptions {
            allow_drops: true,
            necktie_scope: NecktieScope::Single,
        }
    }
}

/// One index of a built family: the chosen antichains, their lifts, and
/// the resulting quadruples.
#[derive(Clone, Debug)]
pub struct IndexPlan {
    pub j: usize,
    pub m: usize,
    pub p: usize,
    pub q: usize,
    /// Airiness bound of the poset the antichains live in.
    pub u: usize,
    /// Dimension of the unlifted antichain vectors.
    pub t: usize,
    pub x: Vec<BitVector>,
    pub y: Vec<BitVector>,
    pub x_lift: Vec<BitVector>,
    pub y_lift: Vec<BitVector>,
    pub psi: Vec<IdQuadruple>,
    pub gamma: Vec<IdQuadruple>,
}

/// A validated family of id-quadruples with its construction record.
#[derive(Clone, Debug)]
pub struct PhiFamily {
    d: usize,
    m_list: Vec<usize>,
    scope: NecktieScope,
    indices: Vec<IndexPlan>,
    phis: Vec<IdQuadruple>,
}

impl PhiFamily {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn m_list(&self) -> &[usize] {
        &self.m_list
    }

    pub fn necktie_scope(&self) -> NecktieScope {
        self.scope
    }

    /// Construction record of the indices that contribute quadruples.
    pub fn indices(&self) -> &[IndexPlan] {
        &self.indices
    }

    /// Every quadruple, index-major, trivial neckties before proper ones.
    pub fn phis(&self) -> &[IdQuadruple] {
        &self.phis
    }

    /// Ground-set size of each factor, in `phis` order.
    pub fn factor_sizes(&self) -> Vec<usize> {
        self.phis.iter().map(|p| p.n_elements()).collect()
    }

    /// Number of elements of the product lattice.
    pub fn product_size(&self) -> BigUint {
        self.phis
            .iter()
            .map(|p| bell(p.n_elements()))
            .product()
    }

    /// Serializable summary: parameters, antichains, and quadruples.
    pub fn describe(&self) -> FamilyDescription {
        FamilyDescription {
            d: self.d,
            m: self.m_list.clone(),
            necktie_scope: format!("{:?}", self.scope),
            indices: self
                .indices
                .iter()
                .map(|ix| IndexDescription {
                    j: ix.j,
                    m: ix.m,
                    p: ix.p,
                    q: ix.q,
                    u: ix.u,
                    t: ix.t,
                    x: ix.x.iter().map(|v| v.to_string()).collect(),
                    y: ix.y.iter().map(|v| v.to_string()).collect(),
                    psi: ix.psi.iter().map(|p| p.to_string()).collect(),
                    gamma: ix.gamma.iter().map(|p| p.to_string()).collect(),
                })
                .collect(),
            quadruples: self.phis.iter().map(|p| p.to_string()).collect(),
            factor_sizes: self.factor_sizes(),
        }
    }
}

/// JSON-friendly view of a [`PhiFamily`].
#[derive(Clone, Debug, Serialize)]
pub struct FamilyDescription {
    pub d: usize,
    pub m: Vec<usize>,
    pub necktie_scope: String,
    pub indices: Vec<IndexDescription>,
    pub quadruples: Vec<String>,
    pub factor_sizes: Vec<usize>,
}

/// JSON-friendly view of an [`IndexPlan`].
#[derive(Clone, Debug, Serialize)]
pub struct IndexDescription {
    pub j: usize,
    pub m: usize,
    pub p: usize,
    pub q: usize,
    pub u: usize,
    pub t: usize,
    pub x: Vec<String>,
    pub y: Vec<String>,
    pub psi: Vec<String>,
    pub gamma: Vec<String>,
}

/// The bounded-airiness poset parameters `(u, t)` that index `j`
/// (1-based) draws its antichains from.
pub fn dbv_parameters(d: usize, m_list: &[usize], j: usize) -> Result<(usize, usize)> {
    if j == 0 || j > m_list.len() {
        return Err(Error::arg(format!(
            "index {j} out of range 1..={}",
            m_list.len()
        )));
    }
    Ok(match j {
        1 => (d, m_list[0] - 1),
        2 => (m_list[1] - d, m_list[1] - d - 1),
        _ => (d + 3 - j, m_list[j - 1] - d - 1),
    })
}

/// Picks witness antichains for `(p, q)` over the poset `(u, t)`: first
/// the constructive layer rules, then, when `p + q` exhausts the maximum
/// antichain, an explicit maximum antichain split in two.
fn select_antichains(
    p: usize,
    q: usize,
    u: usize,
    t: usize,
) -> Result<(Vec<BitVector>, Vec<BitVector>)> {
    match tra_witness(p, q, u, t)? {
        TraResult::Witness { x, y } => Ok((x, y)),
        TraResult::Unknown => {
            if t <= 20 && p + q == sba_exact(u, t)? {
                let anti = max_antichain(u, t)?;
                return Ok((anti[..p].to_vec(), anti[p..].to_vec()));
            }
            Err(Error::arg(format!(
                "(p,q)=({p},{q}) is not certified over the airiness-{u} poset of \
                 dimension {t}: neither the layer rules nor a maximum-antichain \
                 split applies"
            )))
        }
    }
}

/// Validates the family hypotheses and assembles the quadruples.
///
/// `m_list` must hold exactly `d+2` strictly increasing odd lengths with
/// `m_1 >= max(3, d)`; `pq[j-1]` is the pair `(p_j, q_j)`. In strict mode
/// every index must contribute; with [`BuildOptions::allow_drops`] a
/// `(0, 0)` pair drops its index. Errors name the violated clause.
pub fn build_phi(
    d: usize,
    m_list: &[usize],
    pq: &[(usize, usize)],
    opts: &BuildOptions,
) -> Result<PhiFamily> {
    if d == 0 || d % 2 == 0 {
        return Err(Error::arg(format!("d = {d} violates: d must be odd and positive")));
    }
    if m_list.len() != d + 2 {
        return Err(Error::arg(format!(
            "need exactly d+2 = {} zigzag lengths, got {}",
            d + 2,
            m_list.len()
        )));
    }
    for (idx, &m) in m_list.iter().enumerate() {
        if m % 2 == 0 {
            return Err(Error::arg(format!(
                "m_{} = {m} violates: every zigzag length must be odd",
                idx + 1
            )));
        }
        if idx > 0 && m <= m_list[idx - 1] {
            return Err(Error::arg(format!(
                "m_{} = {m} violates: lengths must strictly increase (m_{} = {})",
                idx + 1,
                idx,
                m_list[idx - 1]
            )));
        }
    }
    if m_list[0] < 3 || m_list[0] < d {
        return Err(Error::arg(format!(
            "m_1 = {} violates: m_1 >= 3 and m_1 >= d = {d}",
            m_list[0]
        )));
    }
    if pq.len() != d + 2 {
        return Err(Error::arg(format!(
            "need exactly d+2 = {} (p, q) pairs, got {}",
            d + 2,
            pq.len()
        )));
    }
    if !opts.allow_drops {
        if let Some(j) = pq.iter().position(|&(p, q)| p + q == 0) {
            return Err(Error::arg(format!(
                "(p_{j1}, q_{j1}) = (0, 0) violates: p_j + q_j > 0; \
                 enable factor dropping to skip index {j1}",
                j1 = j + 1
            )));
        }
    }
    if pq.iter().all(|&(p, q)| p + q == 0) {
        return Err(Error::arg(
            "family is empty: every index has (p, q) = (0, 0)".to_string(),
        ));
    }

    let mut indices = Vec::new();
    let mut phis: Vec<IdQuadruple> = Vec::new();
    for (idx, &(p, q)) in pq.iter().enumerate() {
        if p + q == 0 {
            continue;
        }
        let j = idx + 1;
        let m = m_list[idx];
        let (u, t) = dbv_parameters(d, m_list, j)?;
        let (x, y) = select_antichains(p, q, u, t).map_err(|e| {
            Error::arg(format!("index {j} (m_{j} = {m}): {e}"))
        })?;
        if !verify_tra_witness(&x, &y, u, t)? {
            return Err(Error::Integrity(format!(
                "index {j}: selected antichains fail the cross-condition audit"
            )));
        }

        // Lift to pin vectors of dimension m_j: index 1 prefixes a single
        // 0; index j >= 2 prefixes 1^(j-1) then 0^(d+2-j).
        let lift = |v: &BitVector| -> BitVector {
            if j == 1 {
                BitVector::zeros(1).concat(v)
            } else {
                BitVector::ones(j - 1)
                    .concat(&BitVector::zeros(d + 2 - j))
                    .concat(v)
            }
        };
        let x_lift: Vec<BitVector> = x.iter().map(&lift).collect();
        let y_lift: Vec<BitVector> = y.iter().map(&lift).collect();
        debug_assert!(x_lift.iter().chain(&y_lift).all(|v| v.dim() == m));

        let psi: Vec<IdQuadruple> = x_lift
            .iter()
            .map(|z| IdQuadruple::new(m, 1, 1, z.clone()))
            .collect::<Result<_>>()?;
        let k = (m + 3) / 2;
        let neckties: Vec<(usize, usize)> = match opts.necktie_scope {
            NecktieScope::Single => vec![(0, 1)],
            NecktieScope::All => {
                let mut w = Vec::new();
                for s in 0..k - 1 {
                    for tt in s + 1..k {
                        w.push((s, tt));
                    }
                }
                w
            }
        };
        let mut gamma = Vec::new();
        for z in &y_lift {
            for &(s, tt) in &neckties {
                gamma.push(IdQuadruple::new(m, s, tt, z.clone())?);
            }
        }
        phis.extend(psi.iter().cloned());
        phis.extend(gamma.iter().cloned());
        indices.push(IndexPlan {
            j,
            m,
            p,
            q,
            u,
            t,
            x,
            y,
            x_lift,
            y_lift,
            psi,
            gamma,
        });
    }

    let distinct: HashSet<&IdQuadruple> = phis.iter().collect();
    if distinct.len() != phis.len() {
        return Err(Error::Integrity(
            "family construction produced duplicate quadruples".to_string(),
        ));
    }
    Ok(PhiFamily {
        d,
        m_list: m_list.to_vec(),
        scope: opts.necktie_scope,
        indices,
        phis,
    })
}

/// The four product generators: componentwise the generators of each
/// factor's configuration. A single-factor family yields the plain
/// equivalence-lattice context and its four partitions.
pub fn product_generators(phis: &[IdQuadruple]) -> Result<(LatticeContext, Vec<Elt>)> {
    if phis.is_empty() {
        return Err(Error::arg("empty quadruple family".to_string()));
    }
    let configs: Vec<ZConfig> = phis.iter().map(build_configuration).collect::<Result<_>>()?;
    if configs.len() == 1 {
        let ctx = LatticeContext::full_equivalence(configs[0].n())?;
        return Ok((ctx, configs[0].generator_elts()));
    }
    let factors: Vec<LatticeContext> = configs
        .iter()
        .map(|c| LatticeContext::full_equivalence(c.n()))
        .collect::<Result<_>>()?;
    let ctx = LatticeContext::product(factors)?;
    let per_factor: Vec<Vec<Elt>> = configs.iter().map(|c| c.generator_elts()).collect();
    let gens = (0..4)
        .map(|g| Elt::Tuple(per_factor.iter().map(|f| f[g].clone()).collect()))
        .collect();
    Ok((ctx, gens))
}

/// Default element cap for full-closure verification; the largest product
/// we close outright is Part(6) x Part(7) with 178031 elements.
pub const DEFAULT_CLOSURE_CAP: usize = 200_000;

/// How [`verify_product_generation`] establishes generation.
#[derive(Clone, Copy, Debug)]
pub enum VerifyMode {
    /// Close the four generators and compare against the product size.
    FullClosure { cap: usize },
    /// Term-based route, no closure: every factor's quadruple generates
    /// its own lattice via the per-pair terms, and every factor's
    /// projection terms isolate its generators inside the product. Sound
    /// for any family size; the two modes agree wherever both run.
    Structural,
}

/// Checks that the four product generators generate the whole product of
/// the factors' equivalence lattices.
pub fn verify_product_generation(phis: &[IdQuadruple], mode: VerifyMode) -> Result<bool> {
    if phis.is_empty() {
        return Err(Error::arg("empty quadruple family".to_string()));
    }
    let distinct: HashSet<&IdQuadruple> = phis.iter().collect();
    if distinct.len() != phis.len() {
        return Err(Error::arg("duplicate quadruples in the family".to_string()));
    }
    match mode {
        VerifyMode::FullClosure { cap } => {
            let (ctx, gens) = product_generators(phis)?;
            let total = ctx.size();
            if total > BigUint::from(cap) {
                return Err(Error::Capacity(format!(
                    "product has {total} elements, beyond the {cap}-element closure cap; \
                     use structural verification"
                )));
            }
            let closed = close(&gens, &ctx, &ClosureOptions::default())?;
            Ok(BigUint::from(closed.len()) == total)
        }
        VerifyMode::Structural => {
            for phi in phis {
                if !verify_generation_via_terms(phi)? {
                    return Ok(false);
                }
            }
            let configs: Vec<ZConfig> =
                phis.iter().map(build_configuration).collect::<Result<_>>()?;
            let mut pool = TermPool::new();
            let mut builder = ETermBuilder::new(&mut pool);
            let projections: Vec<[crate::term::Term; 4]> = phis
                .iter()
                .map(|p| builder.projection_terms(p).map(|pr| pr.as_array()))
                .collect::<Result<_>>()?;
            for (i, roots) in projections.iter().enumerate() {
                for (jx, cfg) in configs.iter().enumerate() {
                    let mu = cfg.generator_elts();
                    let vals = pool.eval_batch(roots, &mu)?;
                    if i == jx {
                        if vals != mu {
                            return Ok(false);
                        }
                    } else {
                        let bot = Elt::Part(Partition::bottom(cfg.n()));
                        if vals.iter().any(|v| *v != bot) {
                            return Ok(false);
                        }
                    }
                }
            }
            Ok(true)
        }
    }
}

/// Id-quadruples whose product lattice is Part(n) x Part(n'), for any
/// `5 <= n < n'`. Four constructions, split on sizes and parities:
/// equal-length neighbors, distinct lengths via the family builder, the
/// smallest pair (5, 6) directly, and a small factor against a large one
/// via an all-ones pin vector.
pub fn two_factor_family(n: usize, n_prime: usize) -> Result<Vec<IdQuadruple>> {
    if n < 5 || n_prime <= n {
        return Err(Error::Domain(format!(
            "two-factor construction needs 5 <= n < n', got ({n}, {n_prime})"
        )));
    }
    if n >= 7 {
        if n % 2 == 1 && n_prime == n + 1 {
            // Both factors share the zigzag length len(n); one index with
            // (p, q) = (1, 1) provides Part(n) x Part(n+1).
            let d = length(n)?;
            let m_list: Vec<usize> = (0..d + 2).map(|i| d + 2 * i).collect();
            let mut pq = vec![(0, 0); d + 2];
            pq[0] = (1, 1);
            let fam = build_phi(d, &m_list, &pq, &BuildOptions::reduced())?;
            return Ok(fam.phis().to_vec());
        }
        // Distinct zigzag lengths: index 1 carries Part(n), index 2
        // carries Part(n'); the side of each index (trivial or necktie)
        // follows the parity.
        let m1 = length(n)?;
        let m2 = length(n_prime)?;
        debug_assert!(m1 < m2);
        let d = m1;
        let mut m_list = vec![m1, m2];
        while m_list.len() < d + 2 {
            m_list.push(m_list.last().unwrap() + 2);
        }
        let mut pq = vec![(0, 0); d + 2];
        pq[0] = if n % 2 == 1 { (1, 0) } else { (0, 1) };
        pq[1] = if n_prime % 2 == 1 { (1, 0) } else { (0, 1) };
        let fam = build_phi(d, &m_list, &pq, &BuildOptions::reduced())?;
        return Ok(fam.phis().to_vec());
    }
    if n_prime <= 6 {
        // Only (5, 6) fits here: the two one-pin configurations.
        return Ok(vec![
            IdQuadruple::new(1, 1, 1, BitVector::ones(1))?,
            IdQuadruple::new(1, 0, 1, BitVector::zeros(1))?,
        ]);
    }
    // n in {5, 6} against n' >= 7: the small factor keeps a zero pin; the
    // large factor pins every zigzag edge, so nothing from the short
    // zigzag gets through it.
    let (s, t) = if n == 5 { (1, 1) } else { (0, 1) };
    let small = IdQuadruple::new(1, s, t, BitVector::zeros(1))?;
    let m2 = length(n_prime)?;
    let (s2, t2) = if n_prime % 2 == 1 { (1, 1) } else { (0, 1) };
    let large = IdQuadruple::new(m2, s2, t2, BitVector::ones(m2))?;
    Ok(vec![small, large])
}

/// Family whose product is the consecutive run
/// Part(n) x Part(n+1) x … x Part(3n-14), for `n >= 9`.
///
/// Odd `n`: `d = n-6`, lengths `d+2i`, pairs `(1,1)` up to index `d-1`,
/// `(1,0)` at index `d` (the run would otherwise overshoot by three), the
/// rest dropped. Even `n`: `d = n-7`, index 1 keeps only its necktie side
/// (dropping the `n-1` factor), pairs `(1,1)` through index `d+1`.
pub fn consecutive_sizes_plan(n: usize) -> Result<PhiFamily> {
    if n < 9 {
        return Err(Error::Domain(format!(
            "consecutive-run construction needs n >= 9, got {n}"
        )));
    }
    let d = if n % 2 == 1 { n - 6 } else { n - 7 };
    let m_list: Vec<usize> = (1..=d + 2).map(|i| d + 2 * i).collect();
    let mut pq = vec![(1, 1); d + 2];
    if n % 2 == 1 {
        pq[d - 1] = (1, 0);
        pq[d] = (0, 0);
        pq[d + 1] = (0, 0);
    } else {
        pq[0] = (0, 1);
        pq[d + 1] = (0, 0);
    }
    build_phi(d, &m_list, &pq, &BuildOptions::reduced())
}

/// Family whose product is Part(N)^E for every N in a consecutive window,
/// with exponent `E = 2·max(9, ceil(u/2)) >= u`; projecting away surplus
/// copies yields Part(N)^u. The window is `8v+5 ..= 10v+4` for
/// `v = max(9, ceil(u/2))`.
pub fn direct_power_plan(u: usize) -> Result<PhiFamily> {
    if u == 0 {
        return Err(Error::Domain("power construction needs u >= 1".to_string()));
    }
    let v = 9usize.max(u.div_ceil(2));
    let exponent = 2 * v;
    let d = 4 * v + 1;
    let m_list: Vec<usize> = (1..=d + 2).map(|i| 8 * v + 2 * i - 1).collect();
    let mut pq = vec![(0, 0); d + 2];
    for slot in pq.iter_mut().take(v) {
        *slot = (exponent, exponent);
    }
    build_phi(d, &m_list, &pq, &BuildOptions::reduced())
}

/// Certificate that the thousand-factor power product of partition
/// lattices on 1011..=2020 points, each raised to the power 10^127, is
/// four-generated: exact binomial arithmetic confirms each index of the
/// `d = 579` plan admits antichain sizes of at least 10^127.
#[derive(Clone, Debug, Serialize)]
pub struct GiantProductReport {
    pub d: usize,
    pub indices_checked: usize,
    pub exponent: String,
    pub all_certified: bool,
    pub failing_indices: Vec<usize>,
    /// Index whose best antichain-pair capacity is smallest.
    pub tightest_index: usize,
    /// Decimal digit count of that smallest capacity.
    pub tightest_capacity_digits: usize,
    /// Smallest and largest ground-set sizes of the factors.
    pub factor_range: (usize, usize),
}

/// Runs the arithmetic certificate for the 1011..=2020 power example:
/// `d = 579`, `m_i = 1005 + 2i` for `i <= 505`, `p_i = q_i = 10^127`,
/// remaining indices dropped. No partitions are materialized.
pub fn giant_product_certificate() -> Result<GiantProductReport> {
    let d = 579usize;
    let target = BigUint::from(10u32).pow(127);
    let mut failing = Vec::new();
    let mut tightest: Option<(usize, BigUint)> = None;
    for i in 1..=505usize {
        let m_i = 1005 + 2 * i;
        let (u, t) = match i {
            1 => (d, m_i - 1),
            2 => (m_i - d, m_i - d - 1),
            _ => (d + 3 - i, m_i - d - 1),
        };
        if !tra_certifiable(&target, &target, u, t)? {
            failing.push(i);
        }
        let capacity = equal_pair_capacity(u, t);
        if tightest.as_ref().is_none_or(|(_, b)| capacity < *b) {
            tightest = Some((i, capacity));
        }
    }
    let (tightest_index, capacity) = tightest.expect("505 indices checked");
    Ok(GiantProductReport {
        d,
        indices_checked: 505,
        exponent: "10^127".to_string(),
        all_certified: failing.is_empty(),
        failing_indices: failing,
        tightest_index,
        tightest_capacity_digits: capacity.to_string().len(),
        factor_range: (1005 + 2 + 4, 1005 + 2 * 505 + 5),
    })
}

/// Largest `x` such that the constructive rules certify the equal pair
/// `(x, x)` over the `(u, t)` poset: adjacent layers give
/// min(C(t-1, i-1), C(t-1, i)), and splitting one layer in half gives
/// C(t-1, i) / 2; take the best over all admissible layers.
fn equal_pair_capacity(u: usize, t: usize) -> BigUint {
    let mut best = BigUint::ZERO;
    let mut prev = BigUint::from(1u32); // C(t-1, 0)
    for i in 1..u.min(t) {
        let cur = binomial((t - 1) as u64, i as u64);
        let pair = prev.min(cur.clone());
        if pair > best {
            best = pair;
        }
        let half = cur.clone() >> 1;
        if half > best {
            best = half;
        }
        prev = cur;
    }
    best
}
