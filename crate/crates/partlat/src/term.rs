//! Lattice terms: expressions built from variables with meet and join.
//!
//! Terms are stored in a [`TermPool`], a hash-consed DAG: structurally equal
//! subterms share one node, meet/join arguments are stored in sorted order
//! (both operations are commutative), and `x·x`/`x+x` collapse to `x`. Node
//! ids are handed out children-first, so evaluating the nodes of a pool in
//! ascending id order is a valid bottom-up schedule; all evaluators exploit
//! that instead of recursing (the induction-built term families get deep).

use std::collections::HashMap;

use crate::context::{Elt, EquTable, LatticeContext};
use crate::error::{Error, Result};

/// Variable indices of the standard quadruple.
pub const VAR_ALPHA: u8 = 0;
pub const VAR_BETA: u8 = 1;
pub const VAR_GAMMA: u8 = 2;
pub const VAR_DELTA: u8 = 3;

/// Handle to a term inside one [`TermPool`]. Handles from different pools
/// must not be mixed; the pool checks bounds but cannot detect swaps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term(u32);

impl Term {
    pub fn id(self) -> u32 {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum TermNode {
    Var(u8),
    Meet(u32, u32),
    Join(u32, u32),
}

/// Arena of hash-consed terms.
#[derive(Default)]
pub struct TermPool {
    nodes: Vec<TermNode>,
    index: HashMap<TermNode, u32>,
}

impl TermPool {
    pub fn new() -> TermPool {
        TermPool::default()
    }

    /// Number of distinct nodes.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn intern(&mut self, node: TermNode) -> Term {
        if let Some(&id) = self.index.get(&node) {
            return Term(id);
        }
        let id = self.nodes.len() as u32;
        self.nodes.push(node);
        self.index.insert(node, id);
        Term(id)
    }

    /// The k-th variable.
    pub fn var(&mut self, k: u8) -> Term {
        self.intern(TermNode::Var(k))
    }

    pub fn meet(&mut self, a: Term, b: Term) -> Term {
        if a == b {
            return a;
        }
        let (x, y) = (a.0.min(b.0), a.0.max(b.0));
        self.intern(TermNode::Meet(x, y))
    }

    pub fn join(&mut self, a: Term, b: Term) -> Term {
        if a == b {
            return a;
        }
        let (x, y) = (a.0.min(b.0), a.0.max(b.0));
        self.intern(TermNode::Join(x, y))
    }

    /// Meet of a nonempty list.
    pub fn meet_all(&mut self, ts: &[Term]) -> Result<Term> {
        let (&first, rest) = ts
            .split_first()
            .ok_or_else(|| Error::arg("meet of an empty term list".to_string()))?;
        Ok(rest.iter().fold(first, |acc, &t| self.meet(acc, t)))
    }

    /// Join of a nonempty list.
    pub fn join_all(&mut self, ts: &[Term]) -> Result<Term> {
        let (&first, rest) = ts
            .split_first()
            .ok_or_else(|| Error::arg("join of an empty term list".to_string()))?;
        Ok(rest.iter().fold(first, |acc, &t| self.join(acc, t)))
    }

    fn check(&self, t: Term) -> Result<()> {
        if (t.0 as usize) < self.nodes.len() {
            Ok(())
        } else {
            Err(Error::arg(format!("term id {} not in this pool", t.0)))
        }
    }

    /// Ids reachable from the given roots, marked on a bitmap over
    /// `0..=max_root`. Ascending order over marked ids is bottom-up.
    fn reachable(&self, roots: &[Term]) -> Vec<bool> {
        let hi = roots.iter().map(|t| t.0).max().map_or(0, |m| m as usize + 1);
        let mut mark = vec![false; hi];
        let mut stack: Vec<u32> = roots.iter().map(|t| t.0).collect();
        while let Some(id) = stack.pop() {
            if mark[id as usize] {
                continue;
            }
            mark[id as usize] = true;
            match self.nodes[id as usize] {
                TermNode::Var(_) => {}
                TermNode::Meet(a, b) | TermNode::Join(a, b) => {
                    stack.push(a);
                    stack.push(b);
                }
            }
        }
        mark
    }

    /// Evaluates several terms at once over arbitrary elements, sharing
    /// every common subterm. `args[k]` substitutes variable `k`.
    pub fn eval_batch(&self, roots: &[Term], args: &[Elt]) -> Result<Vec<Elt>> {
        for &t in roots {
            self.check(t)?;
        }
        let mark = self.reachable(roots);
        let mut values: Vec<Option<Elt>> = vec![None; mark.len()];
        for id in 0..mark.len() {
            if !mark[id] {
                continue;
            }
            let v = match self.nodes[id] {
                TermNode::Var(k) => args
                    .get(k as usize)
                    .cloned()
                    .ok_or_else(|| Error::arg(format!("variable {k} has no argument")))?,
                TermNode::Meet(a, b) => values[a as usize]
                    .as_ref()
                    .unwrap()
                    .meet(values[b as usize].as_ref().unwrap())?,
                TermNode::Join(a, b) => values[a as usize]
                    .as_ref()
                    .unwrap()
                    .join(values[b as usize].as_ref().unwrap())?,
            };
            values[id] = Some(v);
        }
        Ok(roots
            .iter()
            .map(|t| values[t.0 as usize].clone().unwrap())
            .collect())
    }

    /// Evaluates one term over arbitrary elements.
    pub fn eval(&self, t: Term, args: &[Elt]) -> Result<Elt> {
        Ok(self.eval_batch(&[t], args)?.pop().unwrap())
    }

    /// Evaluates terms over a tabulated `Equ(n)`: arguments and results are
    /// element ranks, operations are table reads.
    pub fn eval_batch_ids(
        &self,
        roots: &[Term],
        args: &[u16],
        table: &EquTable,
    ) -> Result<Vec<u16>> {
        for &t in roots {
            self.check(t)?;
        }
        let mark = self.reachable(roots);
        let mut values: Vec<u16> = vec![0; mark.len()];
        for id in 0..mark.len() {
            if !mark[id] {
                continue;
            }
            values[id] = match self.nodes[id] {
                TermNode::Var(k) => *args
                    .get(k as usize)
                    .ok_or_else(|| Error::arg(format!("variable {k} has no argument")))?,
                TermNode::Meet(a, b) => table.meet_id(values[a as usize], values[b as usize]),
                TermNode::Join(a, b) => table.join_id(values[a as usize], values[b as usize]),
            };
        }
        Ok(roots.iter().map(|t| values[t.0 as usize]).collect())
    }

    /// Renders a term with `·` for meet, `+` for join and the quadruple
    /// variable names.
    pub fn render(&self, t: Term) -> String {
        // Iterative bottom-up string build over reachable nodes. Meets bind
        // tighter than joins; parenthesize joins inside meets.
        let mark = self.reachable(&[t]);
        let mut strs: Vec<String> = vec![String::new(); mark.len()];
        let mut is_join: Vec<bool> = vec![false; mark.len()];
        for id in 0..mark.len() {
            if !mark[id] {
                continue;
            }
            match self.nodes[id] {
                TermNode::Var(k) => {
                    strs[id] = match k {
                        0 => "α".to_string(),
                        1 => "β".to_string(),
                        2 => "γ".to_string(),
                        3 => "δ".to_string(),
                        other => format!("x{other}"),
                    }
                }
                TermNode::Meet(a, b) => {
                    let wrap = |i: usize| {
                        if is_join[i] {
                            format!("({})", strs[i])
                        } else {
                            strs[i].clone()
                        }
                    };
                    strs[id] = format!("{}·{}", wrap(a as usize), wrap(b as usize));
                }
                TermNode::Join(a, b) => {
                    strs[id] = format!("{}+{}", strs[a as usize], strs[b as usize]);
                    is_join[id] = true;
                }
            }
        }
        strs[t.0 as usize].clone()
    }
}

/// Evaluates a term at a quadruple living in a context (membership is
/// validated; the evaluation itself is structural, so on a product context
/// it automatically acts component-wise).
pub fn eval_term(pool: &TermPool, t: Term, quad: &[Elt], ctx: &LatticeContext) -> Result<Elt> {
    for e in quad {
        if !ctx.contains(e)? {
            return Err(Error::arg(format!("element {e} is not in the context")));
        }
    }
    pool.eval(t, quad)
}

/// Rebuilds the term by which a closure element was first reached, from the
/// witness trace of [`close`](crate::closure::close) (variable `k` stands
/// for `generators[k]`).
pub fn term_for_witness(
    pool: &mut TermPool,
    steps: &[crate::closure::WitnessStep],
    idx: usize,
) -> Result<Term> {
    use crate::closure::WitnessStep;
    if idx >= steps.len() {
        return Err(Error::arg(format!("witness index {idx} out of range")));
    }
    // Steps only ever reference earlier elements, so one forward pass
    // suffices.
    let mut terms: Vec<Term> = Vec::with_capacity(idx + 1);
    for step in &steps[..=idx] {
        let t = match *step {
            WitnessStep::Generator(k) => {
                if k > u8::MAX as usize {
                    return Err(Error::Capacity("more than 256 generators".to_string()));
                }
                pool.var(k as u8)
            }
            WitnessStep::Meet(a, b) => pool.meet(terms[a as usize], terms[b as usize]),
            WitnessStep::Join(a, b) => pool.join(terms[a as usize], terms[b as usize]),
        };
        terms.push(t);
    }
    Ok(terms[idx])
}
