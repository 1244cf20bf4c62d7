//! Tree monomials of the free shuffle operad.
//!
//! A tree monomial is a rooted tree whose vertices are decorated by
//! generators and whose leaves carry a bijective labelling by `{1..n}`.
//! The canonical planar representative orders the children of every
//! vertex by their smallest reachable leaf; equality of monomials is
//! structural equality of canonical forms.
//!
//! This module provides canonicalisation, elementary shuffle
//! compositions, enumeration of the monomial basis, divisibility
//! (subtree occurrences) and the induced substitution operator.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("vertex decorated by {name} expects {expected} children, got {got}")]
    ArityMismatch {
        name: String,
        expected: u32,
        got: u32,
    },
    #[error("leaf labels are not a bijection onto 1..={arity}")]
    BadLeafLabels { arity: u32 },
    #[error("unknown generator id {0}")]
    UnknownGenerator(u32),
    #[error("composition slot {slot} out of range 1..={arity}")]
    BadSlot { slot: u32, arity: u32 },
    #[error("sigma is not a valid ({m_part}, {n_part})-shuffle")]
    BadShuffle { m_part: u32, n_part: u32 },
    #[error("generator names must be distinct: {0}")]
    DuplicateGenerator(String),
    #[error("generator precedences must be distinct: {0} and {1} share {2}")]
    DuplicatePrecedence(String, String, i32),
    #[error("generator {0} has arity 0; vertices of arity 0 are not supported")]
    ZeroArity(String),
    #[error("substituted monomial has arity {got}, expected {expected}")]
    SubstitutionArity { expected: u32, got: u32 },
}

/// Index of a generator within its [`GeneratorSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenId(pub u32);

/// A generating operation of the free operad.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub arity: u32,
    /// User-assigned rank consumed by the monomial orderings; must be
    /// distinct within one generator set.
    pub precedence: i32,
}

/// The alphabet of generators, indexed by [`GenId`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GeneratorSet {
    gens: Vec<Generator>,
}

impl GeneratorSet {
    pub fn new(gens: Vec<Generator>) -> Result<Self, TreeError> {
        for (i, g) in gens.iter().enumerate() {
            if g.arity == 0 {
                return Err(TreeError::ZeroArity(g.name.clone()));
            }
            for h in &gens[..i] {
                if h.name == g.name {
                    return Err(TreeError::DuplicateGenerator(g.name.clone()));
                }
                if h.precedence == g.precedence {
                    return Err(TreeError::DuplicatePrecedence(
                        h.name.clone(),
                        g.name.clone(),
                        g.precedence,
                    ));
                }
            }
        }
        Ok(GeneratorSet { gens })
    }

    pub fn get(&self, id: GenId) -> &Generator {
        &self.gens[id.0 as usize]
    }

    pub fn arity(&self, id: GenId) -> u32 {
        self.gens[id.0 as usize].arity
    }

    pub fn by_name(&self, name: &str) -> Option<GenId> {
        self.gens
            .iter()
            .position(|g| g.name == name)
            .map(|i| GenId(i as u32))
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = GenId> + '_ {
        (0..self.gens.len() as u32).map(GenId)
    }

    pub fn iter(&self) -> impl Iterator<Item = (GenId, &Generator)> {
        self.gens
            .iter()
            .enumerate()
            .map(|(i, g)| (GenId(i as u32), g))
    }

    /// Precedence table indexed by generator id, snapshotted by orders.
    pub fn precedences(&self) -> Vec<i32> {
        self.gens.iter().map(|g| g.precedence).collect()
    }

    pub fn min_arity(&self) -> Option<u32> {
        self.gens.iter().map(|g| g.arity).min()
    }
}

/// A tree monomial. The structural `Ord`/`Hash` are used for storage and
/// deterministic tie-breaking only; mathematical comparisons go through
/// [`crate::order::MonomialOrder`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TreeMonomial {
    Leaf(u32),
    Vertex { gen: GenId, children: Vec<TreeMonomial> },
}

impl TreeMonomial {
    pub fn leaf(label: u32) -> Self {
        TreeMonomial::Leaf(label)
    }

    /// Raw vertex constructor; does not sort or validate. Use
    /// [`TreeMonomial::canonicalize`] afterwards for untrusted input.
    pub fn vertex(gen: GenId, children: Vec<TreeMonomial>) -> Self {
        TreeMonomial::Vertex { gen, children }
    }

    /// Corolla: a single vertex applied to leaves `1..=arity`.
    pub fn corolla(gen: GenId, arity: u32) -> Self {
        TreeMonomial::Vertex {
            gen,
            children: (1..=arity).map(TreeMonomial::Leaf).collect(),
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, TreeMonomial::Leaf(_))
    }

    /// Number of leaves.
    pub fn arity(&self) -> u32 {
        match self {
            TreeMonomial::Leaf(_) => 1,
            TreeMonomial::Vertex { children, .. } => children.iter().map(|c| c.arity()).sum(),
        }
    }

    /// Number of vertices (the operation degree).
    pub fn op_degree(&self) -> u32 {
        match self {
            TreeMonomial::Leaf(_) => 0,
            TreeMonomial::Vertex { children, .. } => {
                1 + children.iter().map(|c| c.op_degree()).sum::<u32>()
            }
        }
    }

    /// Smallest leaf label. In canonical form this is the leftmost leaf.
    pub fn min_leaf(&self) -> u32 {
        match self {
            TreeMonomial::Leaf(l) => *l,
            TreeMonomial::Vertex { children, .. } => {
                children.iter().map(|c| c.min_leaf()).min().unwrap()
            }
        }
    }

    /// Leaf labels in planar (left-to-right) order.
    pub fn leaves(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<u32>) {
        match self {
            TreeMonomial::Leaf(l) => out.push(*l),
            TreeMonomial::Vertex { children, .. } => {
                for c in children {
                    c.collect_leaves(out);
                }
            }
        }
    }

    /// Leaf labels sorted ascending.
    pub fn leaf_set(&self) -> Vec<u32> {
        let mut ls = self.leaves();
        ls.sort_unstable();
        ls
    }

    /// Validates decorations and leaf labels, then sorts every vertex's
    /// children by smallest reachable leaf. Idempotent.
    pub fn canonicalize(mut self, gens: &GeneratorSet) -> Result<TreeMonomial, TreeError> {
        self.validate(gens)?;
        let n = self.arity();
        let mut seen = vec![false; n as usize];
        for l in self.leaves() {
            if l == 0 || l > n || seen[(l - 1) as usize] {
                return Err(TreeError::BadLeafLabels { arity: n });
            }
            seen[(l - 1) as usize] = true;
        }
        self.sort_children();
        Ok(self)
    }

    fn validate(&self, gens: &GeneratorSet) -> Result<(), TreeError> {
        if let TreeMonomial::Vertex { gen, children } = self {
            if gen.0 as usize >= gens.len() {
                return Err(TreeError::UnknownGenerator(gen.0));
            }
            let expected = gens.arity(*gen);
            if children.len() as u32 != expected {
                return Err(TreeError::ArityMismatch {
                    name: gens.get(*gen).name.clone(),
                    expected,
                    got: children.len() as u32,
                });
            }
            for c in children {
                c.validate(gens)?;
            }
        }
        Ok(())
    }

    /// Re-sorts children by min leaf, recursively. Used internally after
    /// label rewrites; assumes decorations are already valid.
    pub(crate) fn sort_children(&mut self) {
        if let TreeMonomial::Vertex { children, .. } = self {
            for c in children.iter_mut() {
                c.sort_children();
            }
            children.sort_by_key(|c| c.min_leaf());
        }
    }

    pub fn is_canonical(&self) -> bool {
        match self {
            TreeMonomial::Leaf(_) => true,
            TreeMonomial::Vertex { children, .. } => {
                children.windows(2).all(|w| w[0].min_leaf() < w[1].min_leaf())
                    && children.iter().all(|c| c.is_canonical())
            }
        }
    }

    /// Rewrites every leaf label through `f`, then restores canonical order.
    pub(crate) fn map_leaves(&self, f: &impl Fn(u32) -> u32) -> TreeMonomial {
        let mut t = self.map_leaves_raw(f);
        t.sort_children();
        t
    }

    fn map_leaves_raw(&self, f: &impl Fn(u32) -> u32) -> TreeMonomial {
        match self {
            TreeMonomial::Leaf(l) => TreeMonomial::Leaf(f(*l)),
            TreeMonomial::Vertex { gen, children } => TreeMonomial::Vertex {
                gen: *gen,
                children: children.iter().map(|c| c.map_leaves_raw(f)).collect(),
            },
        }
    }

    /// Replaces each leaf by an entire subtree, then restores canonical
    /// order. Labels of the substituted subtrees are taken as-is.
    fn graft_leaves(&self, f: &impl Fn(u32) -> TreeMonomial) -> TreeMonomial {
        let mut t = self.graft_leaves_raw(f);
        t.sort_children();
        t
    }

    fn graft_leaves_raw(&self, f: &impl Fn(u32) -> TreeMonomial) -> TreeMonomial {
        match self {
            TreeMonomial::Leaf(l) => f(*l),
            TreeMonomial::Vertex { gen, children } => TreeMonomial::Vertex {
                gen: *gen,
                children: children.iter().map(|c| c.graft_leaves_raw(f)).collect(),
            },
        }
    }

    /// Relabels leaves by the rank of their current label: the smallest
    /// label becomes 1, the next 2, and so on.
    pub fn relabel_by_rank(&self) -> TreeMonomial {
        let sorted = self.leaf_set();
        self.map_leaves(&|l| (sorted.binary_search(&l).unwrap() + 1) as u32)
    }

    /// Vertices in preorder (root first, children left to right).
    pub fn vertex_count(&self) -> u32 {
        self.op_degree()
    }

    fn push_vertices<'a>(&'a self, out: &mut Vec<&'a TreeMonomial>) {
        if let TreeMonomial::Vertex { children, .. } = self {
            out.push(self);
            for c in children {
                c.push_vertices(out);
            }
        }
    }

    /// References to all vertex nodes in preorder; leaves are skipped.
    pub fn vertices(&self) -> Vec<&TreeMonomial> {
        let mut out = Vec::new();
        self.push_vertices(&mut out);
        out
    }

    pub fn format(&self, gens: &GeneratorSet) -> String {
        let mut s = String::new();
        self.fmt_into(gens, &mut s);
        s
    }

    fn fmt_into(&self, gens: &GeneratorSet, out: &mut String) {
        match self {
            TreeMonomial::Leaf(l) => out.push_str(&l.to_string()),
            TreeMonomial::Vertex { gen, children } => {
                out.push_str(&gens.get(*gen).name);
                out.push('(');
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    c.fmt_into(gens, out);
                }
                out.push(')');
            }
        }
    }
}

impl fmt::Display for TreeMonomial {
    /// Debug-oriented display with raw generator ids (`g0`, `g1`, ...).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeMonomial::Leaf(l) => write!(f, "{l}"),
            TreeMonomial::Vertex { gen, children } => {
                write!(f, "g{}(", gen.0)?;
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// The permutation datum of an elementary shuffle composition
/// `alpha o_{i,sigma} beta`: a bijection of `{i+1, ..., m+n-1}` that is
/// increasing on the first `m-1` values (those routed into `beta`) and on
/// the remaining `n-i` values (those staying in `alpha`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Shuffle {
    slot: u32,
    /// `sigma[t]` is the image of `slot + 1 + t`.
    sigma: Vec<u32>,
}

impl Shuffle {
    pub fn new(slot: u32, sigma: Vec<u32>) -> Self {
        Shuffle { slot, sigma }
    }

    pub fn identity(m: u32, n: u32, slot: u32) -> Self {
        Shuffle {
            slot,
            sigma: (slot + 1..=m + n - 1).collect(),
        }
    }

    pub fn slot(&self) -> u32 {
        self.slot
    }

    pub fn sigma(&self) -> &[u32] {
        &self.sigma
    }

    /// `sigma(j)` for `slot+1 <= j <= m+n-1`.
    pub fn apply(&self, j: u32) -> u32 {
        self.sigma[(j - self.slot - 1) as usize]
    }

    /// Checks the shuffle conditions for composing an arity-`m` monomial
    /// into slot `self.slot` of an arity-`n` monomial.
    pub fn is_valid(&self, m: u32, n: u32) -> bool {
        let i = self.slot;
        if i < 1 || i > n || self.sigma.len() as u32 != m + n - 1 - i {
            return false;
        }
        let mut seen: Vec<bool> = vec![false; self.sigma.len()];
        for &v in &self.sigma {
            if v <= i || v > m + n - 1 || seen[(v - i - 1) as usize] {
                return false;
            }
            seen[(v - i - 1) as usize] = true;
        }
        let beta_block = &self.sigma[..(m - 1) as usize];
        let alpha_block = &self.sigma[(m - 1) as usize..];
        beta_block.windows(2).all(|w| w[0] < w[1]) && alpha_block.windows(2).all(|w| w[0] < w[1])
    }
}

/// All `(m-1, n-i)`-shuffles for composing an arity-`m` monomial into slot
/// `i` of an arity-`n` monomial, in lexicographic order of the values
/// routed into the inner monomial. Count is `C(m+n-1-i, m-1)`.
pub fn enumerate_shuffles(m: u32, n: u32, i: u32) -> Vec<Shuffle> {
    assert!(m >= 1 && i >= 1 && i <= n, "invalid shuffle parameters");
    let domain: Vec<u32> = (i + 1..=m + n - 1).collect();
    let k = (m - 1) as usize;
    let mut out = Vec::new();
    let mut choice: Vec<usize> = (0..k).collect();
    loop {
        let beta_values: Vec<u32> = choice.iter().map(|&idx| domain[idx]).collect();
        let mut alpha_values: Vec<u32> = Vec::with_capacity(domain.len() - k);
        for (idx, &v) in domain.iter().enumerate() {
            if !choice.contains(&idx) {
                alpha_values.push(v);
            }
        }
        let mut sigma = beta_values;
        sigma.extend(alpha_values);
        out.push(Shuffle::new(i, sigma));
        // next k-combination of 0..domain.len() in lexicographic order
        if k == 0 {
            break;
        }
        let mut pos = k;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if choice[pos] < domain.len() - (k - pos) {
                choice[pos] += 1;
                for t in pos + 1..k {
                    choice[t] = choice[t - 1] + 1;
                }
                if *choice.last().unwrap() < domain.len() {
                    break;
                }
            }
        }
    }
    out
}

/// Elementary shuffle composition: grafts `beta` into slot `i` of `alpha`
/// with leaf interleaving given by `s`. Arities add minus one; operation
/// degrees add; the degenerate tree is a two-sided unit.
pub fn compose(
    alpha: &TreeMonomial,
    s: &Shuffle,
    beta: &TreeMonomial,
) -> Result<TreeMonomial, TreeError> {
    let n = alpha.arity();
    let m = beta.arity();
    let i = s.slot();
    if i < 1 || i > n {
        return Err(TreeError::BadSlot { slot: i, arity: n });
    }
    if !s.is_valid(m, n) {
        return Err(TreeError::BadShuffle {
            m_part: m - 1,
            n_part: n - i,
        });
    }
    let inner = beta.map_leaves(&|t| if t == 1 { i } else { s.apply(i + t - 1) });
    Ok(alpha.graft_leaves(&|j| {
        if j < i {
            TreeMonomial::Leaf(j)
        } else if j == i {
            inner.clone()
        } else {
            TreeMonomial::Leaf(s.apply(j + m - 1))
        }
    }))
}

/// All canonical tree monomials with leaf labels `labels` (sorted,
/// nonempty) and at most `max_deg` vertices.
fn enumerate_with_labels(
    gens: &GeneratorSet,
    labels: &[u32],
    max_deg: u32,
) -> Vec<TreeMonomial> {
    let mut out = Vec::new();
    if labels.len() == 1 {
        out.push(TreeMonomial::Leaf(labels[0]));
    }
    if max_deg == 0 {
        return out;
    }
    for (gid, g) in gens.iter() {
        let k = g.arity as usize;
        if k > labels.len() {
            continue;
        }
        // Partitions of the label set into k nonempty blocks with strictly
        // increasing minima; block order is the canonical child order.
        for blocks in ordered_partitions(labels, k) {
            let child_lists: Vec<Vec<TreeMonomial>> = blocks
                .iter()
                .map(|b| enumerate_with_labels(gens, b, max_deg - 1))
                .collect();
            if child_lists.iter().any(|l| l.is_empty()) {
                continue;
            }
            let mut pick = vec![0usize; k];
            'combos: loop {
                let children: Vec<&TreeMonomial> = pick
                    .iter()
                    .enumerate()
                    .map(|(t, &p)| &child_lists[t][p])
                    .collect();
                let total: u32 = children.iter().map(|c| c.op_degree()).sum();
                if total < max_deg {
                    out.push(TreeMonomial::Vertex {
                        gen: gid,
                        children: children.into_iter().cloned().collect(),
                    });
                }
                for t in (0..k).rev() {
                    pick[t] += 1;
                    if pick[t] < child_lists[t].len() {
                        continue 'combos;
                    }
                    pick[t] = 0;
                    if t == 0 {
                        break 'combos;
                    }
                }
            }
        }
    }
    out
}

/// Ordered partitions of a sorted label slice into `k` nonempty blocks
/// whose minima increase with the block index.
fn ordered_partitions(labels: &[u32], k: usize) -> Vec<Vec<Vec<u32>>> {
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<u32>> = Vec::new();
    fn rec(labels: &[u32], pos: usize, k: usize, blocks: &mut Vec<Vec<u32>>, out: &mut Vec<Vec<Vec<u32>>>) {
        if pos == labels.len() {
            if blocks.len() == k && blocks.iter().all(|b| !b.is_empty()) {
                out.push(blocks.clone());
            }
            return;
        }
        let label = labels[pos];
        // join an already-open block
        for b in 0..blocks.len() {
            blocks[b].push(label);
            rec(labels, pos + 1, k, blocks, out);
            blocks[b].pop();
        }
        // open the next block (labels arrive in increasing order, so the
        // opener is automatically the block minimum and minima increase)
        if blocks.len() < k {
            blocks.push(vec![label]);
            rec(labels, pos + 1, k, blocks, out);
            blocks.pop();
        }
    }
    rec(labels, 0, k, &mut blocks, &mut out);
    out
}

/// The monomial basis of the free operad: all canonical tree monomials of
/// the given arity with operation degree at most `max_op_degree`, sorted by
/// operation degree and then structurally.
pub fn enumerate_tree_monomials(
    gens: &GeneratorSet,
    arity: u32,
    max_op_degree: u32,
) -> Vec<TreeMonomial> {
    assert!(arity >= 1);
    let labels: Vec<u32> = (1..=arity).collect();
    let mut out = enumerate_with_labels(gens, &labels, max_op_degree);
    out.sort_by(|a, b| a.op_degree().cmp(&b.op_degree()).then_with(|| a.cmp(b)));
    out.dedup();
    out
}

/// An occurrence of `divisor` as a connected full subtree of `host`:
/// the witness that `host` is divisible by `divisor`. The map sends
/// preorder vertex indices of the divisor to those of the host.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Embedding {
    host: TreeMonomial,
    divisor: TreeMonomial,
    vertex_map: Vec<u32>,
}

impl Embedding {
    pub(crate) fn from_parts(
        host: TreeMonomial,
        divisor: TreeMonomial,
        vertex_map: Vec<u32>,
    ) -> Self {
        Embedding {
            host,
            divisor,
            vertex_map,
        }
    }

    /// Re-derives the forced match at the recorded root image and checks
    /// that it reproduces this vertex map.
    pub fn check(&self) -> bool {
        if self.divisor.is_leaf() {
            return self.host.is_leaf() && self.vertex_map.is_empty();
        }
        let verts = self.host.vertices();
        let root = self.root_image() as usize;
        if root >= verts.len() {
            return false;
        }
        match match_at(verts[root], self.root_image(), &self.divisor) {
            Some(map) => map == self.vertex_map,
            None => false,
        }
    }

    pub fn host(&self) -> &TreeMonomial {
        &self.host
    }

    pub fn divisor(&self) -> &TreeMonomial {
        &self.divisor
    }

    pub fn vertex_map(&self) -> &[u32] {
        &self.vertex_map
    }

    /// Image of the divisor root in host preorder numbering.
    pub fn root_image(&self) -> u32 {
        self.vertex_map.first().copied().unwrap_or(0)
    }

    /// Substitutes `replacement` (same arity as the divisor) at this
    /// occurrence: the operator `m_{host,divisor}` applied to one
    /// monomial. Substituting the divisor itself returns the host.
    pub fn substitute(&self, replacement: &TreeMonomial) -> Result<TreeMonomial, TreeError> {
        let want = self.divisor.arity();
        if replacement.arity() != want {
            return Err(TreeError::SubstitutionArity {
                expected: want,
                got: replacement.arity(),
            });
        }
        if self.divisor.is_leaf() {
            // degenerate divisor: the occurrence is the whole host (a leaf)
            return Ok(replacement.clone());
        }
        let mut counter = 0u32;
        let out = rebuild(&self.host, self, replacement, &mut counter);
        let mut out = out;
        out.sort_children();
        return Ok(out);

        fn rebuild(
            node: &TreeMonomial,
            e: &Embedding,
            replacement: &TreeMonomial,
            counter: &mut u32,
        ) -> TreeMonomial {
            match node {
                TreeMonomial::Leaf(l) => TreeMonomial::Leaf(*l),
                TreeMonomial::Vertex { gen, children } => {
                    let idx = *counter;
                    *counter += 1;
                    if idx == e.root_image() {
                        // collect the cut branches in divisor-label order,
                        // consuming the preorder counter for the whole region
                        let mut branches: Vec<(u32, TreeMonomial)> = Vec::new();
                        collect_branches(node, &e.divisor, counter, &mut branches);
                        *counter -= 1; // the top vertex was already counted
                        let by_label = {
                            branches.sort_by_key(|(lab, _)| *lab);
                            branches.into_iter().map(|(_, b)| b).collect::<Vec<_>>()
                        };
                        replacement.graft_leaves_raw(&|l| by_label[(l - 1) as usize].clone())
                    } else {
                        TreeMonomial::Vertex {
                            gen: *gen,
                            children: children
                                .iter()
                                .map(|c| rebuild(c, e, replacement, counter))
                                .collect(),
                        }
                    }
                }
            }
        }

        // Walks host and divisor in lockstep from the occurrence top,
        // pairing divisor leaves with host cut branches. Advances the host
        // preorder counter across every vertex in the occurrence region.
        fn collect_branches(
            host: &TreeMonomial,
            div: &TreeMonomial,
            counter: &mut u32,
            out: &mut Vec<(u32, TreeMonomial)>,
        ) {
            match (host, div) {
                (h, TreeMonomial::Leaf(lab)) => out.push((*lab, h.clone())),
                (TreeMonomial::Vertex { children: hc, .. }, TreeMonomial::Vertex { children: dc, .. }) => {
                    *counter += 1;
                    for (h, d) in hc.iter().zip(dc.iter()) {
                        collect_branches(h, d, counter, out);
                    }
                }
                _ => unreachable!("embedding shape mismatch"),
            }
        }
    }
}

/// Attempts the (unique) order-preserving structural match of `divisor`
/// rooted at `host_node`, whose preorder index is `root_idx`. Returns the
/// vertex map on success. Canonical subtree extraction preserves the child
/// order, so positional matching is exhaustive.
fn match_at(host_node: &TreeMonomial, root_idx: u32, divisor: &TreeMonomial) -> Option<Vec<u32>> {
    let mut map = Vec::new();
    let mut branch_mins: Vec<(u32, u32)> = Vec::new(); // (divisor leaf label, host branch min)
    let mut counter = root_idx;
    if !walk(host_node, divisor, &mut counter, &mut map, &mut branch_mins) {
        return None;
    }
    // The smallest-descendant relabelling of the occurrence must reproduce
    // the divisor's leaf labels exactly.
    let mut by_min = branch_mins.clone();
    by_min.sort_by_key(|&(_, min)| min);
    for (rank, &(label, _)) in by_min.iter().enumerate() {
        if label as usize != rank + 1 {
            return None;
        }
    }
    return Some(map);

    fn walk(
        host: &TreeMonomial,
        div: &TreeMonomial,
        counter: &mut u32,
        map: &mut Vec<u32>,
        branch_mins: &mut Vec<(u32, u32)>,
    ) -> bool {
        match (host, div) {
            (h, TreeMonomial::Leaf(lab)) => {
                branch_mins.push((*lab, h.min_leaf()));
                true
            }
            (
                TreeMonomial::Vertex { gen: hg, children: hc },
                TreeMonomial::Vertex { gen: dg, children: dc },
            ) => {
                if hg != dg {
                    return false;
                }
                map.push(*counter);
                *counter += 1;
                for (h, d) in hc.iter().zip(dc.iter()) {
                    let sub_vertices = h.op_degree();
                    let before = *counter;
                    if !walk(h, d, counter, map, branch_mins) {
                        return false;
                    }
                    // leaves of div consume the whole host branch
                    if d.is_leaf() {
                        *counter = before + sub_vertices;
                    }
                }
                true
            }
            (TreeMonomial::Leaf(_), TreeMonomial::Vertex { .. }) => false,
        }
    }
}

/// All occurrences of `divisor` as a connected full subtree of `host`,
/// one per host vertex at which the (order-forced) match succeeds. An
/// empty result means `host` is not divisible by `divisor`.
///
/// A degenerate (single-leaf) divisor only occurs in a degenerate host;
/// relation leading terms always have at least one vertex.
pub fn find_embeddings(host: &TreeMonomial, divisor: &TreeMonomial) -> Vec<Embedding> {
    let mut out = Vec::new();
    if divisor.is_leaf() {
        if host.is_leaf() {
            out.push(Embedding {
                host: host.clone(),
                divisor: divisor.clone(),
                vertex_map: Vec::new(),
            });
        }
        return out;
    }
    let mut idx = 0u32;
    let mut stack: Vec<&TreeMonomial> = vec![host];
    // preorder over vertices, matching the counter convention of match_at
    let mut nodes: Vec<&TreeMonomial> = Vec::new();
    while let Some(node) = stack.pop() {
        if let TreeMonomial::Vertex { children, .. } = node {
            nodes.push(node);
            for c in children.iter().rev() {
                stack.push(c);
            }
        }
    }
    // stack-based preorder above visits children in order because of rev()
    for node in nodes {
        if let Some(map) = match_at(node, idx, divisor) {
            out.push(Embedding {
                host: host.clone(),
                divisor: divisor.clone(),
                vertex_map: map,
            });
        }
        idx += 1;
    }
    out
}

/// Fast divisibility test: does any occurrence of `divisor` exist in `host`?
pub fn divides(divisor: &TreeMonomial, host: &TreeMonomial) -> bool {
    if divisor.is_leaf() {
        return host.is_leaf();
    }
    for (idx, node) in host.vertices().into_iter().enumerate() {
        if match_at(node, idx as u32, divisor).is_some() {
            return true;
        }
    }
    false
}

/// First occurrence of `divisor` in `host` (smallest root image), if any.
pub fn first_embedding(host: &TreeMonomial, divisor: &TreeMonomial) -> Option<Embedding> {
    if divisor.is_leaf() {
        return if host.is_leaf() {
            Some(Embedding {
                host: host.clone(),
                divisor: divisor.clone(),
                vertex_map: Vec::new(),
            })
        } else {
            None
        };
    }
    for (idx, node) in host.vertices().into_iter().enumerate() {
        if let Some(map) = match_at(node, idx as u32, divisor) {
            return Some(Embedding {
                host: host.clone(),
                divisor: divisor.clone(),
                vertex_map: map,
            });
        }
    }
    None
}

/// Does `divisor` occur with its top vertex at the root of `host`?
pub fn divides_at_root(divisor: &TreeMonomial, host: &TreeMonomial) -> bool {
    !divisor.is_leaf() && !host.is_leaf() && match_at(host, 0, divisor).is_some()
}

/// A connected full subtree of `host`, reported with its top vertex, its
/// vertex set (preorder indices) and the restricted tree monomial obtained
/// by the smallest-descendant relabelling.
#[derive(Debug, Clone)]
pub struct SubtreeOccurrence {
    pub top: u32,
    pub vertices: Vec<u32>,
    pub restricted: TreeMonomial,
}

/// Enumerates every connected full subtree of `host` with at most
/// `max_vertices` vertices (all of them if `None`).
pub fn connected_subtrees(host: &TreeMonomial, max_vertices: Option<u32>) -> Vec<SubtreeOccurrence> {
    let mut out = Vec::new();
    let mut idx = 0u32;
    collect(host, &mut idx, max_vertices, &mut out);
    return out;

    fn collect(
        node: &TreeMonomial,
        idx: &mut u32,
        cap: Option<u32>,
        out: &mut Vec<SubtreeOccurrence>,
    ) {
        if let TreeMonomial::Vertex { children, .. } = node {
            let top = *idx;
            *idx += 1;
            let base = *idx;
            // expansions rooted here
            for (vertices, cut) in expansions(node, top, base, cap) {
                let mut restricted = cut;
                restricted = restricted.relabel_by_rank();
                out.push(SubtreeOccurrence {
                    top,
                    vertices,
                    restricted,
                });
            }
            let mut child_idx = base;
            for c in children {
                collect(c, &mut child_idx, cap, out);
            }
            *idx = child_idx;
        }
    }

    /// All downward-closed vertex choices rooted at `node` (which has
    /// preorder index `top`; its first descendant vertex starts at `base`),
    /// paired with the cut tree whose leaves keep host labels.
    fn expansions(
        node: &TreeMonomial,
        top: u32,
        base: u32,
        cap: Option<u32>,
    ) -> Vec<(Vec<u32>, TreeMonomial)> {
        let TreeMonomial::Vertex { gen, children } = node else {
            unreachable!()
        };
        // for each child: either cut the edge, or include the child vertex
        // with one of its own expansions
        let mut per_child: Vec<Vec<(Vec<u32>, TreeMonomial)>> = Vec::new();
        let mut child_base = base;
        for c in children {
            let mut opts = vec![(
                Vec::new(),
                TreeMonomial::Leaf(c.min_leaf()), // cut: a leaf holding the branch min
            )];
            if let TreeMonomial::Vertex { .. } = c {
                let sub = expansions(c, child_base, child_base + 1, cap);
                opts.extend(sub);
            }
            per_child.push(opts);
            child_base += c.op_degree();
        }
        let mut out = Vec::new();
        let mut pick = vec![0usize; per_child.len()];
        'combos: loop {
            let mut vertices = vec![top];
            let mut kids = Vec::with_capacity(per_child.len());
            for (t, &p) in pick.iter().enumerate() {
                vertices.extend(per_child[t][p].0.iter().copied());
                kids.push(per_child[t][p].1.clone());
            }
            if cap.is_none_or(|c| vertices.len() as u32 <= c) {
                out.push((
                    vertices,
                    TreeMonomial::Vertex {
                        gen: *gen,
                        children: kids,
                    },
                ));
            }
            for t in (0..pick.len()).rev() {
                pick[t] += 1;
                if pick[t] < per_child[t].len() {
                    continue 'combos;
                }
                pick[t] = 0;
                if t == 0 {
                    break 'combos;
                }
            }
            if pick.is_empty() {
                break;
            }
        }
        out
    }
}

/// Deduplicated, deterministic ordering helper used by callers that
/// collect embeddings from several construction paths.
pub fn dedup_embeddings(mut v: Vec<Embedding>) -> Vec<Embedding> {
    let set: BTreeSet<Embedding> = v.drain(..).collect();
    set.into_iter().collect()
}
