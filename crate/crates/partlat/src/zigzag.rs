//! Zigzag configurations: four partitions on a small ground set, indexed by
//! an id-quadruple, whose generated sublattice is the whole equivalence
//! lattice — and the quaternary term families that prove it constructively.
//!
//! The ground set carries labels `a_0..a_k`, `b_0..b_{k-1}` and a special
//! element `c` (which coincides with `b_1` when the necktie is trivial).
//! The zigzag is the path `a_0, b_0, a_1, b_1, ...` whose consecutive pairs
//! are the edges `I_0..I_{m+1}`; the four generators are assembled from the
//! zigzag, the necktie attachment of `c`, and a pin vector selecting which
//! inner edges the fourth generator shortcuts.
//!
//! Everything here was cross-validated against brute-force closure and
//! atom oracles before being fixed in code; the inline tests keep the small
//! cases, the integration suite sweeps every pin vector and necktie up to
//! m = 5.

use std::collections::HashMap;

use crate::bits::BitVector;
use crate::context::Elt;
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::term::{Term, TermPool, VAR_ALPHA, VAR_BETA, VAR_DELTA, VAR_GAMMA};

/// Index of a zigzag configuration: zigzag length `m` (odd), necktie pair
/// `(s, t)`, and the pin vector `z` of dimension `m`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IdQuadruple {
    m: usize,
    s: usize,
    t: usize,
    z: BitVector,
}

impl std::fmt::Debug for IdQuadruple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "IdQuadruple({self})")
    }
}

impl std::fmt::Display for IdQuadruple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}:{}:{}", self.m, self.s, self.t, self.z)
    }
}

impl std::str::FromStr for IdQuadruple {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 {
            return Err(Error::arg(format!(
                "expected m:s:t:bits, got {s:?} with {} fields",
                parts.len()
            )));
        }
        let m: usize = parts[0]
            .parse()
            .map_err(|_| Error::arg(format!("invalid m {:?}", parts[0])))?;
        let sv: usize = parts[1]
            .parse()
            .map_err(|_| Error::arg(format!("invalid s {:?}", parts[1])))?;
        let tv: usize = parts[2]
            .parse()
            .map_err(|_| Error::arg(format!("invalid t {:?}", parts[2])))?;
        let z: BitVector = parts[3].parse()?;
        IdQuadruple::new(m, sv, tv, z)
    }
}

impl IdQuadruple {
    /// Validates and builds an id-quadruple. `m` must be odd and positive,
    /// `z` of dimension `m`, and `(s, t)` either the trivial `(1, 1)` or a
    /// proper necktie `0 <= s < t <= k-1` with `k = (m+3)/2`.
    pub fn new(m: usize, s: usize, t: usize, z: BitVector) -> Result<Self> {
        if m % 2 == 0 || m == 0 {
            return Err(Error::arg(format!("zigzag length m={m} must be odd and positive")));
        }
        if z.dim() != m {
            return Err(Error::arg(format!(
                "pin vector dimension {} does not match m={m}",
                z.dim()
            )));
        }
        let k = (m + 3) / 2;
        let trivial = (s, t) == (1, 1);
        if !trivial && !(s < t && t <= k - 1) {
            return Err(Error::arg(format!(
                "necktie ({s},{t}) invalid: need (1,1) or 0 <= s < t <= {}",
                k - 1
            )));
        }
        Ok(IdQuadruple { m, s, t, z })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn z(&self) -> &BitVector {
        &self.z
    }

    /// Zigzag width `k = (m+3)/2`: the number of `a`-labels is `k+1`, of
    /// `b`-labels is `k`.
    pub fn k(&self) -> usize {
        (self.m + 3) / 2
    }

    /// True when `(s,t) = (1,1)`, in which case `c` coincides with `b_1`.
    pub fn trivial_necktie(&self) -> bool {
        (self.s, self.t) == (1, 1)
    }

    /// Ground-set size of the configuration: `m+4` with a trivial necktie,
    /// `m+5` otherwise.
    pub fn n_elements(&self) -> usize {
        if self.trivial_necktie() {
            self.m + 4
        } else {
            self.m + 5
        }
    }

    /// The same configuration with the necktie forgotten (`s = t = 1`);
    /// shares all `a`/`b` labels.
    pub fn necktie_free(&self) -> IdQuadruple {
        IdQuadruple {
            m: self.m,
            s: 1,
            t: 1,
            z: self.z.clone(),
        }
    }

    /// Label (= element id) of `a_i`, `0 <= i <= k`.
    pub fn label_a(&self, i: usize) -> usize {
        debug_assert!(i <= self.k());
        i
    }

    /// Label of `b_i`, `0 <= i <= k-1`.
    pub fn label_b(&self, i: usize) -> usize {
        debug_assert!(i < self.k());
        self.k() + 1 + i
    }

    /// Label of `c`: a fresh element after all `b`s for a proper necktie,
    /// `b_1` otherwise.
    pub fn label_c(&self) -> usize {
        if self.trivial_necktie() {
            self.label_b(1)
        } else {
            2 * self.k() + 1
        }
    }

    /// Endpoints of zigzag edge `I_j`, `0 <= j <= m+1`:
    /// `I_{2i} = (a_i, a_{i+1})`, `I_{2i+1} = (b_i, b_{i+1})`.
    pub fn edge(&self, j: usize) -> Result<(usize, usize)> {
        if j > self.m + 1 {
            return Err(Error::arg(format!(
                "zigzag edge index {j} out of range 0..={}",
                self.m + 1
            )));
        }
        Ok(if j % 2 == 0 {
            (self.label_a(j / 2), self.label_a(j / 2 + 1))
        } else {
            (self.label_b((j - 1) / 2), self.label_b((j - 1) / 2 + 1))
        })
    }

    /// All distinct element labels, ascending.
    pub fn labels(&self) -> Vec<usize> {
        (0..self.n_elements()).collect()
    }
}

/// A built zigzag configuration: the four generator partitions over the
/// `n_φ`-element ground set.
#[derive(Clone, Debug)]
pub struct ZConfig {
    phi: IdQuadruple,
    alpha: Partition,
    beta: Partition,
    gamma: Partition,
    delta: Partition,
}

impl ZConfig {
    pub fn phi(&self) -> &IdQuadruple {
        &self.phi
    }

    pub fn n(&self) -> usize {
        self.phi.n_elements()
    }

    pub fn alpha(&self) -> &Partition {
        &self.alpha
    }

    pub fn beta(&self) -> &Partition {
        &self.beta
    }

    pub fn gamma(&self) -> &Partition {
        &self.gamma
    }

    pub fn delta(&self) -> &Partition {
        &self.delta
    }

    /// Generators in variable order, ready for term evaluation.
    pub fn generator_elts(&self) -> Vec<Elt> {
        vec![
            Elt::Part(self.alpha.clone()),
            Elt::Part(self.beta.clone()),
            Elt::Part(self.gamma.clone()),
            Elt::Part(self.delta.clone()),
        ]
    }

    /// The atom collapsing the endpoints of zigzag edge `I_j`.
    pub fn edge_atom(&self, j: usize) -> Result<Partition> {
        let (u, v) = self.phi.edge(j)?;
        Partition::atom(self.n(), u, v)
    }
}

/// Assembles the four generator partitions of a configuration.
///
/// `alpha` has exactly the two blocks of `a`-labels and `b`-labels (with
/// `c` in the `b`-block iff the necktie is trivial); `beta` matches each
/// `a_i` with `b_i` and hangs `c` on `b_s`; `gamma` matches each `a_{i+1}`
/// with `b_i` and hangs `c` on `b_t`; `delta` holds the two side edges plus
/// the inner zigzag edges selected by the pin vector.
pub fn build_configuration(phi: &IdQuadruple) -> Result<ZConfig> {
    let n = phi.n_elements();
    let k = phi.k();

    let a_block: Vec<usize> = (0..=k).map(|i| phi.label_a(i)).collect();
    let b_block: Vec<usize> = (0..k).map(|i| phi.label_b(i)).collect();
    let alpha = Partition::kequ(n, &a_block)?.join(&Partition::kequ(n, &b_block)?)?;

    let mut beta_edges = vec![(phi.label_b(phi.s), phi.label_c())];
    for i in 0..k {
        beta_edges.push((phi.label_a(i), phi.label_b(i)));
    }
    let beta = Partition::graph_equivalence(n, &beta_edges)?;

    let mut gamma_edges = vec![(phi.label_b(phi.t), phi.label_c())];
    for i in 0..k {
        gamma_edges.push((phi.label_a(i + 1), phi.label_b(i)));
    }
    let gamma = Partition::graph_equivalence(n, &gamma_edges)?;

    let mut delta_edges = vec![
        (phi.label_a(0), phi.label_b(0)),
        (phi.label_a(k), phi.label_b(k - 1)),
    ];
    for i in 1..=phi.m {
        if phi.z().get(i - 1) == 1 {
            delta_edges.push(phi.edge(i)?);
        }
    }
    let delta = Partition::graph_equivalence(n, &delta_edges)?;

    Ok(ZConfig {
        phi: phi.clone(),
        alpha,
        beta,
        gamma,
        delta,
    })
}

fn vars(pool: &mut TermPool) -> (Term, Term, Term, Term) {
    (
        pool.var(VAR_ALPHA),
        pool.var(VAR_BETA),
        pool.var(VAR_GAMMA),
        pool.var(VAR_DELTA),
    )
}

/// `β̂ = β·(α+δ)` and `γ̂ = γ·(α+δ)`: the second and third generator cut
/// down to the zigzag.
pub fn hat_terms(pool: &mut TermPool) -> (Term, Term) {
    let (a, b, g, d) = vars(pool);
    let ad = pool.join(a, d);
    (pool.meet(b, ad), pool.meet(g, ad))
}

/// The walking terms `f_0..f_{m+1}` of a configuration; `f_i` pushes the
/// reach along the zigzag one edge at a time, with an extra `·δ` exactly at
/// the pinned inner edges. They depend only on `(m, z)`, not the necktie.
pub fn make_f_terms(pool: &mut TermPool, phi: &IdQuadruple) -> Vec<Term> {
    let (a, _, _, d) = vars(pool);
    let (bh, gh) = hat_terms(pool);
    let bhd = pool.meet(bh, d);
    let seed = pool.join(bhd, gh);
    let mut f = vec![pool.meet(a, seed)];
    for i in 0..=phi.m() {
        let hat = if i % 2 == 0 { bh } else { gh };
        let step = pool.join(f[i], hat);
        let mut next = pool.meet(step, a);
        if i < phi.m() && phi.z().get(i) == 1 {
            next = pool.meet(next, d);
        }
        f.push(next);
    }
    f
}

/// `make_f_terms` entry `i`, `0 <= i <= m+1`.
pub fn make_f_term(pool: &mut TermPool, phi: &IdQuadruple, i: usize) -> Result<Term> {
    if i > phi.m() + 1 {
        return Err(Error::arg(format!(
            "f-term index {i} out of range 0..={}",
            phi.m() + 1
        )));
    }
    Ok(make_f_terms(pool, phi)[i])
}

/// The return-walk terms `h_0..h_upto`, independent of any configuration:
/// `h_i` covers the last `i+1` zigzag edges.
pub fn make_h_terms(pool: &mut TermPool, upto: usize) -> Vec<Term> {
    let (a, _, _, d) = vars(pool);
    let (bh, gh) = hat_terms(pool);
    let ghd = pool.meet(gh, d);
    let seed = pool.join(ghd, bh);
    let mut h = vec![pool.meet(a, seed)];
    for i in 0..upto {
        let hat = if i % 2 == 0 { gh } else { bh };
        let step = pool.join(h[i], hat);
        h.push(pool.meet(step, a));
    }
    h
}

/// `make_h_terms` entry `i`.
pub fn make_h_term(pool: &mut TermPool, i: usize) -> Term {
    let hs = make_h_terms(pool, i);
    hs[i]
}

/// The pinch terms `g_j = f_j · h_{m+1-j}`: on the configuration's own
/// generators, `g_j` evaluates to the single zigzag atom `equ(I_j)`.
pub fn make_g_terms(pool: &mut TermPool, phi: &IdQuadruple) -> Vec<Term> {
    let f = make_f_terms(pool, phi);
    let h = make_h_terms(pool, phi.m() + 1);
    (0..=phi.m() + 1)
        .map(|j| pool.meet(f[j], h[phi.m() + 1 - j]))
        .collect()
}

/// `make_g_terms` entry `j`, `0 <= j <= m+1`.
pub fn make_g_term(pool: &mut TermPool, phi: &IdQuadruple, j: usize) -> Result<Term> {
    if j > phi.m() + 1 {
        return Err(Error::arg(format!(
            "g-term index {j} out of range 0..={}",
            phi.m() + 1
        )));
    }
    Ok(make_g_terms(pool, phi)[j])
}

/// The side terms `β̂·δ` and `γ̂·δ`, evaluating to the left and right side
/// edges `equ(a_0, b_0)` and `equ(a_k, b_{k-1})`.
pub fn side_terms(pool: &mut TermPool) -> (Term, Term) {
    let (_, _, _, d) = vars(pool);
    let (bh, gh) = hat_terms(pool);
    (pool.meet(bh, d), pool.meet(gh, d))
}

/// The circle principle: for pairwise distinct elements arranged in a
/// circle with a term for every consecutive pair, the pair `(circle[i],
/// circle[j])` is reached by meeting the joins of the two arcs between
/// positions `i` and `j`.
pub fn circle_term(
    pool: &mut TermPool,
    circle: &[usize],
    neighbor: &HashMap<(usize, usize), Term>,
    i: usize,
    j: usize,
) -> Result<Term> {
    let len = circle.len();
    if !(i < j && j < len) {
        return Err(Error::arg(format!(
            "circle positions must satisfy 0 <= i < j < {len}, got ({i},{j})"
        )));
    }
    let mut arc = |lo: usize, hi: usize| -> Result<Term> {
        let mut acc: Option<Term> = None;
        let mut idx = lo;
        while idx != hi {
            let x = circle[idx];
            let y = circle[(idx + 1) % len];
            let key = (x.min(y), x.max(y));
            let t = *neighbor
                .get(&key)
                .ok_or_else(|| Error::arg(format!("no neighbor term for pair ({x},{y})")))?;
            acc = Some(match acc {
                None => t,
                Some(s) => pool.join(s, t),
            });
            idx = (idx + 1) % len;
        }
        acc.ok_or_else(|| Error::arg("empty arc".to_string()))
    };
    let forward = arc(i, j)?;
    let backward = arc(j, i)?;
    Ok(pool.meet(forward, backward))
}

fn pair_key(x: usize, y: usize) -> (usize, usize) {
    (x.min(y), x.max(y))
}

/// Builder for the per-pair terms of one or more configurations, memoized
/// so the recursion through necktie-free versions shares work.
pub struct ETermBuilder<'p> {
    pool: &'p mut TermPool,
    memo: HashMap<(IdQuadruple, usize, usize), Term>,
}

impl<'p> ETermBuilder<'p> {
    pub fn new(pool: &'p mut TermPool) -> Self {
        ETermBuilder {
            pool,
            memo: HashMap::new(),
        }
    }

    pub fn pool(&mut self) -> &mut TermPool {
        self.pool
    }

    /// The term `e_{u,v}` with `e_{u,v}(μ_φ) = equ(u, v)`; for `u == v` the
    /// explicit bottom-valued term `α·β̂·γ̂·δ`.
    pub fn e_term(&mut self, phi: &IdQuadruple, u: usize, v: usize) -> Result<Term> {
        let n = phi.n_elements();
        if u >= n || v >= n {
            return Err(Error::arg(format!(
                "labels ({u},{v}) out of range for a {n}-element configuration"
            )));
        }
        let (u, v) = (u.min(v), u.max(v));
        if let Some(&t) = self.memo.get(&(phi.clone(), u, v)) {
            return Ok(t);
        }
        let t = self.build_e(phi, u, v)?;
        self.memo.insert((phi.clone(), u, v), t);
        Ok(t)
    }

    fn build_e(&mut self, phi: &IdQuadruple, u: usize, v: usize) -> Result<Term> {
        if u == v {
            let (a, _, _, d) = vars(self.pool);
            let (bh, gh) = hat_terms(self.pool);
            let abh = self.pool.meet(a, bh);
            let ghd = self.pool.meet(gh, d);
            return Ok(self.pool.meet(abh, ghd));
        }
        let k = phi.k();
        if phi.trivial_necktie() {
            // Circle a_0..a_k, b_{k-1}..b_0; zigzag edges carry their pinch
            // terms, the two closing pairs carry the side terms.
            let mut circle: Vec<usize> = (0..=k).map(|i| phi.label_a(i)).collect();
            circle.extend((0..k).rev().map(|i| phi.label_b(i)));
            let g = make_g_terms(self.pool, phi);
            let (s_left, s_right) = side_terms(self.pool);
            let mut nbr: HashMap<(usize, usize), Term> = HashMap::new();
            for (j, &gt) in g.iter().enumerate() {
                let (x, y) = phi.edge(j)?;
                nbr.insert(pair_key(x, y), gt);
            }
            nbr.insert(pair_key(phi.label_a(k), phi.label_b(k - 1)), s_right);
            nbr.insert(pair_key(phi.label_b(0), phi.label_a(0)), s_left);
            let pi = position(&circle, u)?;
            let pj = position(&circle, v)?;
            return circle_term(self.pool, &circle, &nbr, pi.min(pj), pi.max(pj));
        }

        // Proper necktie: pairs not touching c defer to the necktie-free
        // version (same labels for a/b elements).
        let minus = phi.necktie_free();
        let cc = phi.label_c();
        if u != cc && v != cc {
            return self.e_term(&minus, u, v);
        }
        let w = if u == cc { v } else { u };
        let (s, t) = (phi.s(), phi.t());
        let e_st = self.e_term(&minus, phi.label_a(s), phi.label_a(t + 1))?;
        let (_, b, g, _) = vars(self.pool);
        let ge = self.pool.join(g, e_st);
        let joint_s = self.pool.meet(b, ge);
        let be = self.pool.join(b, e_st);
        let joint_t = self.pool.meet(g, be);
        if w == phi.label_a(s) {
            return Ok(joint_s);
        }
        if w == phi.label_a(t + 1) {
            return Ok(joint_t);
        }

        // Remaining c-pairs go through the extended circle that detours
        // through c between a_s and a_{t+1} and weaves the skipped middle
        // so every element appears exactly once.
        let mut circle: Vec<usize> = (0..=s).map(|i| phi.label_a(i)).collect();
        circle.push(cc);
        circle.extend((t + 1..=k).map(|i| phi.label_a(i)));
        circle.extend((t..k).rev().map(|i| phi.label_b(i)));
        for i in (s + 1..=t).rev() {
            circle.push(phi.label_a(i));
            circle.push(phi.label_b(i - 1));
        }
        circle.extend((0..s).rev().map(|i| phi.label_b(i)));
        debug_assert_eq!(circle.len(), phi.n_elements());
        debug_assert_eq!(
            {
                let mut c = circle.clone();
                c.sort_unstable();
                c.dedup();
                c.len()
            },
            phi.n_elements()
        );

        let len = circle.len();
        let mut nbr: HashMap<(usize, usize), Term> = HashMap::new();
        for idx in 0..len {
            let x = circle[idx];
            let y = circle[(idx + 1) % len];
            let term = if x == cc || y == cc {
                let other = if x == cc { y } else { x };
                if other == phi.label_a(s) {
                    joint_s
                } else {
                    joint_t
                }
            } else {
                self.e_term(&minus, x, y)?
            };
            nbr.insert(pair_key(x, y), term);
        }
        let pi = position(&circle, u)?;
        let pj = position(&circle, v)?;
        circle_term(self.pool, &circle, &nbr, pi.min(pj), pi.max(pj))
    }

    /// The junction term pinning the necktie: on the configuration's own
    /// generators it evaluates to `equ(a_s, a_{t+1})` cut to the two routes
    /// through `c`.
    pub fn dot_term(&mut self, phi: &IdQuadruple) -> Result<Term> {
        let (s, t) = (phi.s(), phi.t());
        let e_st = self.e_term(phi, phi.label_a(s), phi.label_a(t + 1))?;
        let js = self.e_term(phi, phi.label_a(s), phi.label_c())?;
        let jt = self.e_term(phi, phi.label_a(t + 1), phi.label_c())?;
        let routes = self.pool.join(js, jt);
        Ok(self.pool.meet(e_st, routes))
    }

    /// The key term of a configuration: evaluates to the last zigzag atom
    /// `equ(I_{m+1})` on its own generators and to bottom on the generators
    /// of any other configuration in the families used for products.
    pub fn key_term(&mut self, phi: &IdQuadruple) -> Result<Term> {
        let (s, t, k) = (phi.s(), phi.t(), phi.k());
        let dt = self.dot_term(phi)?;
        let f_last = make_f_term(self.pool, phi, phi.m() + 1)?;
        let h0 = make_h_term(self.pool, 0);
        let e1 = self.e_term(phi, phi.label_a(k - 1), phi.label_a(s))?;
        let e2 = self.e_term(phi, phi.label_a(t + 1), phi.label_a(k))?;
        let e3 = self.e_term(phi, phi.label_a(k - 1), phi.label_a(t + 1))?;
        let e4 = self.e_term(phi, phi.label_a(s), phi.label_a(k))?;
        let m3a = self.pool.join(e1, dt);
        let m3 = self.pool.join(m3a, e2);
        let m4a = self.pool.join(e3, dt);
        let m4 = self.pool.join(m4a, e4);
        let fh = self.pool.meet(f_last, h0);
        let mm = self.pool.meet(m3, m4);
        Ok(self.pool.meet(fh, mm))
    }

    /// The projection chain: five terms that, evaluated on the generators
    /// of the configuration they were built for, reproduce
    /// `equ(a_{k-1}, b_{k-1})` and then the four generators themselves —
    /// and evaluate to bottom on the generators of any other configuration
    /// whose key the key term rejects.
    pub fn projection_terms(&mut self, phi: &IdQuadruple) -> Result<ProjectionTerms> {
        let kt = self.key_term(phi)?;
        let (a, b, g, d) = vars(self.pool);
        let (bh, gh) = hat_terms(self.pool);
        let gd = self.pool.meet(g, d);
        let kgd = self.pool.join(kt, gd);
        let bridge = self.pool.meet(kgd, bh);
        let ba = self.pool.join(bridge, a);
        let bh2 = self.pool.meet(bh, ba);
        let gh2 = self.pool.meet(gh, ba);
        let hats = self.pool.join(bh2, gh2);
        let alpha = self.pool.meet(a, hats);
        let ag = self.pool.join(alpha, g);
        let beta = self.pool.meet(b, ag);
        let ab = self.pool.join(alpha, b);
        let gamma = self.pool.meet(g, ab);
        let bg = self.pool.join(beta, gamma);
        let delta = self.pool.meet(d, bg);
        Ok(ProjectionTerms {
            bridge,
            alpha,
            beta,
            gamma,
            delta,
        })
    }
}

/// See [`ETermBuilder::projection_terms`].
#[derive(Clone, Copy, Debug)]
pub struct ProjectionTerms {
    /// Evaluates to `equ(a_{k-1}, b_{k-1})` on the own configuration,
    /// bottom elsewhere.
    pub bridge: Term,
    pub alpha: Term,
    pub beta: Term,
    pub gamma: Term,
    pub delta: Term,
}

impl ProjectionTerms {
    pub fn as_array(&self) -> [Term; 4] {
        [self.alpha, self.beta, self.gamma, self.delta]
    }
}

fn position(circle: &[usize], label: usize) -> Result<usize> {
    circle
        .iter()
        .position(|&x| x == label)
        .ok_or_else(|| Error::arg(format!("label {label} not on the circle")))
}

/// Convenience wrapper building a single per-pair term.
pub fn make_e_term(pool: &mut TermPool, phi: &IdQuadruple, u: usize, v: usize) -> Result<Term> {
    ETermBuilder::new(pool).e_term(phi, u, v)
}

/// Checks constructively that the configuration's quadruple generates the
/// whole equivalence lattice of its ground set: every atom `equ(u, v)` must
/// be the value of its per-pair term on `(α, β, γ, δ)`, and the diagonal
/// term must evaluate to bottom. Atomisticity then gives every element as
/// a join of atoms.
pub fn verify_generation_via_terms(phi: &IdQuadruple) -> Result<bool> {
    let config = build_configuration(phi)?;
    let n = config.n();
    let mu = config.generator_elts();
    let mut pool = TermPool::new();
    let mut builder = ETermBuilder::new(&mut pool);
    let mut roots = Vec::new();
    let mut expected = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            roots.push(builder.e_term(phi, u, v)?);
            expected.push(Partition::atom(n, u, v)?);
        }
    }
    let diag = builder.e_term(phi, 0, 0)?;
    roots.push(diag);
    expected.push(Partition::bottom(n));
    let values = pool.eval_batch(&roots, &mu)?;
    Ok(values
        .iter()
        .zip(&expected)
        .all(|(got, want)| got.as_part() == Some(want)))
}

/// Lock-and-key test: does the walking term of `phi_key` still reach the
/// far end of the zigzag when evaluated on the generators of `phi_lock`?
pub fn gets_through(phi_key: &IdQuadruple, phi_lock: &IdQuadruple) -> Result<bool> {
    let config = build_configuration(phi_lock)?;
    let mu = config.generator_elts();
    let mut pool = TermPool::new();
    let f_last = make_f_term(&mut pool, phi_key, phi_key.m() + 1)?;
    let value = pool.eval(f_last, &mu)?;
    let last_atom = config.edge_atom(phi_lock.m() + 1)?;
    last_atom.leq(value.as_part().expect("partition context"))
}

/// How far along the lock's zigzag the key's `j`-th walking term has
/// reached: the smallest `u` with `f'_j(μ_φ)` below the join of the lock's
/// first `u+1` zigzag atoms. Always defined, and at most `m_φ + 1`.
pub fn effectiveness(phi_key: &IdQuadruple, phi_lock: &IdQuadruple, j: usize) -> Result<usize> {
    if j > phi_key.m() + 1 {
        return Err(Error::arg(format!(
            "walking-term index {j} out of range 0..={}",
            phi_key.m() + 1
        )));
    }
    let config = build_configuration(phi_lock)?;
    let mu = config.generator_elts();
    let mut pool = TermPool::new();
    let f_j = make_f_term(&mut pool, phi_key, j)?;
    let value = pool.eval(f_j, &mu)?;
    let vp = value.as_part().expect("partition context");
    let mut prefix = config.edge_atom(0)?;
    for u in 0..=phi_lock.m() + 1 {
        if u > 0 {
            prefix = prefix.join(&config.edge_atom(u)?)?;
        }
        if vp.leq(&prefix)? {
            return Ok(u);
        }
    }
    Err(Error::Integrity(format!(
        "walking term f_{j} of {phi_key} not below the full zigzag of {phi_lock}"
    )))
}
