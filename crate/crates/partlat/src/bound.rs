//! The counting lower bound for four-element generating sets of an
//! equivalence lattice, and the explicit family of generating sets that
//! witnesses it.
//!
//! The witness family starts from the pin-free zigzag configuration whose
//! ground set has exactly `n` elements and replaces the fourth generator by
//! `δ'(μ1, μ2)`: the join of the two side edges with an arbitrary
//! equivalence `μ1` on the inner `a`-labels and an arbitrary equivalence
//! `μ2` on the `b`-labels. Each such quadruple still generates, distinct
//! pairs give distinct quadruple sets, and the stabilizer of a quadruple
//! set inside the symmetric group has order at most 2; multiplying out
//! yields the closed-form bound.

use num_bigint::BigUint;
use num_traits::One;

use crate::counting::{bell, binomial};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::zigzag::{build_configuration, IdQuadruple};

/// `⌊(n-1)/2⌋` for `n >= 5`: the zigzag width that fits a ground set of
/// size `n`.
pub fn width(n: usize) -> Result<usize> {
    if n < 5 {
        return Err(Error::Domain(format!("width is defined for n >= 5, got {n}")));
    }
    Ok((n - 1) / 2)
}

/// The odd zigzag length that fits a ground set of size `n`: `n-4` for odd
/// `n` (trivial necktie), `n-5` for even `n` (proper necktie).
pub fn length(n: usize) -> Result<usize> {
    if n < 5 {
        return Err(Error::Domain(format!("length is defined for n >= 5, got {n}")));
    }
    Ok(if n % 2 == 1 { n - 4 } else { n - 5 })
}

/// Exact lower bound on the number of four-element generating sets of the
/// equivalence lattice on `n >= 7` elements:
/// `n!/2 · C(width, 2)^(n-4-length) · B(width-1) · B(width)`.
///
/// The exponent `n-4-length` is 0 for odd `n` and 1 for even `n`.
pub fn lower_bound(n: usize) -> Result<BigUint> {
    if n < 7 {
        return Err(Error::Domain(format!(
            "the generating-set lower bound needs n >= 7, got {n}"
        )));
    }
    let w = width(n)?;
    let l = length(n)?;
    let mut half_fact = BigUint::one();
    for i in 3..=n {
        half_fact *= BigUint::from(i);
    }
    let mut result = half_fact; // n!/2
    for _ in 0..(n - 4 - l) {
        result *= binomial(w as u64, 2);
    }
    result *= bell(w - 1);
    result *= bell(w);
    Ok(result)
}

/// The carrier sizes the two free equivalences of [`witness_quadruple`] must have:
/// `μ1` lives on the `k-1` inner `a`-labels, `μ2` on the `k` `b`-labels.
pub fn family_carriers(n: usize) -> Result<(usize, usize)> {
    let k = width(n)?;
    Ok((k - 1, k))
}

fn base_quadruple(n: usize) -> Result<IdQuadruple> {
    let m = length(n)?;
    if n < 7 {
        return Err(Error::Domain(format!("the witness family needs n >= 7, got {n}")));
    }
    let (s, t) = if n % 2 == 1 { (1, 1) } else { (0, 1) };
    let phi = IdQuadruple::new(m, s, t, crate::bits::BitVector::zeros(m))?;
    debug_assert_eq!(phi.n_elements(), n);
    Ok(phi)
}

fn family_quadruple(
    phi: &IdQuadruple,
    mu1: &Partition,
    mu2: &Partition,
) -> Result<[Partition; 4]> {
    let n = phi.n_elements();
    let k = phi.k();
    if mu1.n() != k - 1 {
        return Err(Error::arg(format!(
            "mu1 must partition the {} inner a-labels, got a {}-element carrier",
            k - 1,
            mu1.n()
        )));
    }
    if mu2.n() != k {
        return Err(Error::arg(format!(
            "mu2 must partition the {} b-labels, got a {}-element carrier",
            k,
            mu2.n()
        )));
    }
    let cfg = build_configuration(phi)?;

    // delta' = kequ(mu1) + equ(a_0,b_0) + kequ(mu2) + equ(a_k,b_{k-1}),
    // with mu1 transported to labels a_1..a_{k-1} and mu2 to b_0..b_{k-1}.
    let mut edges: Vec<(usize, usize)> = vec![
        (phi.label_a(0), phi.label_b(0)),
        (phi.label_a(k), phi.label_b(k - 1)),
    ];
    for block in mu1.blocks() {
        for pair in block.windows(2) {
            edges.push((phi.label_a(1 + pair[0]), phi.label_a(1 + pair[1])));
        }
    }
    for block in mu2.blocks() {
        for pair in block.windows(2) {
            edges.push((phi.label_b(pair[0]), phi.label_b(pair[1])));
        }
    }
    let delta = Partition::graph_equivalence(n, &edges)?;
    Ok([
        cfg.alpha().clone(),
        cfg.beta().clone(),
        cfg.gamma().clone(),
        delta,
    ])
}

/// One quadruple of the witness family on `n >= 7` elements. For even `n`
/// the necktie is fixed to the canonical `(0, 1)`; [`enumerate_family`]
/// walks the other neckties.
pub fn witness_quadruple(n: usize, mu1: &Partition, mu2: &Partition) -> Result<[Partition; 4]> {
    family_quadruple(&base_quadruple(n)?, mu1, mu2)
}

/// Every quadruple of the witness family on `n` elements.
///
/// For odd `n` this is one quadruple per pair `(μ1, μ2)`, so
/// `B(k-1)·B(k)` entries. For even `n` each necktie `(s, t)` and each of
/// the `n` placements of the attached element `c` contributes its own
/// variant; the placement is realized by swapping the canonical `c` label
/// with the target element.
pub fn enumerate_family(n: usize) -> Result<Vec<[Partition; 4]>> {
    let (c1, c2) = family_carriers(n)?;
    if n < 7 {
        return Err(Error::Domain(format!("the witness family needs n >= 7, got {n}")));
    }
    let pairs = bell(c1) * bell(c2);
    let total = if n % 2 == 1 {
        pairs.clone()
    } else {
        let k = width(n)?;
        pairs.clone() * binomial(k as u64, 2) * BigUint::from(n)
    };
    if total > BigUint::from(1_000_000u32) {
        return Err(Error::Capacity(format!(
            "witness family for n={n} has {total} members; refusing to materialize"
        )));
    }

    let mu1s = crate::partition::enumerate_partitions(c1)?;
    let mu2s = crate::partition::enumerate_partitions(c2)?;
    let mut out = Vec::new();
    if n % 2 == 1 {
        let phi = base_quadruple(n)?;
        for mu1 in &mu1s {
            for mu2 in &mu2s {
                out.push(family_quadruple(&phi, mu1, mu2)?);
            }
        }
    } else {
        let k = width(n)?;
        let m = length(n)?;
        let c_label = n - 1;
        for s in 0..k - 1 {
            for t in s + 1..=k - 1 {
                let phi = IdQuadruple::new(m, s, t, crate::bits::BitVector::zeros(m))?;
                debug_assert_eq!(phi.n_elements(), n);
                debug_assert_eq!(phi.label_c(), c_label);
                for mu1 in &mu1s {
                    for mu2 in &mu2s {
                        let base = family_quadruple(&phi, mu1, mu2)?;
                        for p in 0..n {
                            let mut perm: Vec<usize> = (0..n).collect();
                            perm.swap(c_label, p);
                            let moved = [
                                base[0].permute(&perm)?,
                                base[1].permute(&perm)?,
                                base[2].permute(&perm)?,
                                base[3].permute(&perm)?,
                            ];
                            out.push(moved);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Number of distinct generating sets obtained by relabeling the witness
/// family in every possible way and deduplicating as unordered sets.
/// Matches [`lower_bound`] when the stabilizer bound is tight.
pub fn family_orbit_count(n: usize) -> Result<u64> {
    use std::collections::HashSet;
    let family = enumerate_family(n)?;
    let mut seen: HashSet<Vec<String>> = HashSet::new();
    let perms = permutations(n);
    for quad in &family {
        for perm in &perms {
            let mut images: Vec<String> = quad
                .iter()
                .map(|p| Ok(p.permute(perm)?.rgs_string()?))
                .collect::<Result<_>>()?;
            images.sort();
            seen.insert(images);
        }
    }
    Ok(seen.len() as u64)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    // Heap's algorithm; n stays tiny here (<= 8).
    let mut out = Vec::new();
    let mut a: Vec<usize> = (0..n).collect();
    fn rec(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        for i in 0..k {
            rec(k - 1, a, out);
            if k % 2 == 0 {
                a.swap(i, k - 1);
            } else {
                a.swap(0, k - 1);
            }
        }
    }
    rec(n, &mut a, &mut out);
    out
}

/// The hand-built six-element fixture showing that already `Equ(6)` has a
/// four-element generating set of order type 1+1+2. Checks the six
/// pair-recovery identities, full generation, and the order type.
pub fn verify_112_fixture() -> Result<bool> {
    let n = 6;
    // Elements u1..u6 are 0..5.
    let alpha = Partition::kequ(n, &[3, 4, 5])?;
    let eps = Partition::kequ(n, &[0, 1, 2])?;
    let beta = alpha.join(&eps)?;
    let gamma = Partition::kequ(n, &[0, 1, 3])?.join(&Partition::atom(n, 2, 4)?)?;
    let delta = Partition::kequ(n, &[0, 2, 5])?.join(&Partition::atom(n, 1, 4)?)?;

    let e = |u: usize, v: usize| Partition::atom(n, u, v).unwrap();

    // The six recovery identities, one atom each.
    let checks = [
        (e(1, 0), beta.meet(&gamma)?),
        (e(0, 2), beta.meet(&delta)?),
        (e(4, 3), alpha.meet(&gamma.join(&e(0, 2))?)?),
        (e(5, 4), alpha.meet(&delta.join(&e(1, 0))?)?),
        (e(3, 1), gamma.meet(&delta.join(&e(4, 3))?)?),
        (e(2, 5), delta.meet(&gamma.join(&e(5, 4))?)?),
    ];
    if checks.iter().any(|(want, got)| want != got) {
        return Ok(false);
    }

    let ctx = crate::context::LatticeContext::full_equivalence(n)?;
    let gens: Vec<crate::context::Elt> = [&alpha, &beta, &gamma, &delta]
        .iter()
        .map(|p| crate::context::Elt::Part((*p).clone()))
        .collect();
    let generated =
        crate::closure::generates(&gens, &ctx, &crate::closure::ClosureOptions::default())?;
    Ok(generated)
}

/// Order-type check for the same fixture: exactly one comparable pair
/// (`α < β`), so the quadruple has order type 1+1+2.
pub fn fixture_order_type_is_112() -> Result<bool> {
    let n = 6;
    let alpha = Partition::kequ(n, &[3, 4, 5])?;
    let eps = Partition::kequ(n, &[0, 1, 2])?;
    let beta = alpha.join(&eps)?;
    let gamma = Partition::kequ(n, &[0, 1, 3])?.join(&Partition::atom(n, 2, 4)?)?;
    let delta = Partition::kequ(n, &[0, 2, 5])?.join(&Partition::atom(n, 1, 4)?)?;
    let gens: Vec<crate::context::Elt> = [&alpha, &beta, &gamma, &delta]
        .iter()
        .map(|p| crate::context::Elt::Part((*p).clone()))
        .collect();
    let ctx = crate::context::LatticeContext::full_equivalence(n)?;
    Ok(crate::closure::order_type(&gens, &ctx)? == crate::closure::OrderType::OneOneTwo)
}
