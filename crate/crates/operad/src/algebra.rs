//! Linear combinations of tree monomials and the reduction calculus:
//! leading terms, single reductions, normal forms, small common multiples
//! and S-polynomials.
//!
//! Elements are homogeneous in arity and carry exact coefficients; no
//! floating point is involved anywhere.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use crate::coeff::Coefficient;
use crate::order::MonomialOrder;
use crate::trees::{first_embedding, Embedding, GenId, GeneratorSet, TreeMonomial};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("element is zero")]
    ZeroElement,
    #[error("monomial arity {got} differs from element arity {expected}")]
    MixedArity { expected: u32, got: u32 },
    #[error("leading term is not divisible at the given occurrence")]
    NotDivisible,
    #[error("common multiple does not match the pair of leading terms")]
    MismatchedMultiple,
}

/// A finite linear combination of same-arity tree monomials over an exact
/// coefficient field. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperadElement<C> {
    arity: u32,
    terms: BTreeMap<TreeMonomial, C>,
}

impl<C: Coefficient> OperadElement<C> {
    pub fn zero(arity: u32) -> Self {
        OperadElement {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(t: TreeMonomial) -> Self {
        let mut terms = BTreeMap::new();
        let arity = t.arity();
        terms.insert(t, C::one());
        OperadElement { arity, terms }
    }

    pub fn from_terms(
        arity: u32,
        entries: impl IntoIterator<Item = (TreeMonomial, C)>,
    ) -> Result<Self, AlgebraError> {
        let mut el = OperadElement::zero(arity);
        for (t, c) in entries {
            if t.arity() != arity {
                return Err(AlgebraError::MixedArity {
                    expected: arity,
                    got: t.arity(),
                });
            }
            el.add_term(t, c);
        }
        Ok(el)
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&TreeMonomial, &C)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl DoubleEndedIterator<Item = &TreeMonomial> {
        self.terms.keys()
    }

    pub fn coefficient(&self, t: &TreeMonomial) -> Option<&C> {
        self.terms.get(t)
    }

    /// Largest operation degree over the support; 0 for the zero element.
    pub fn max_op_degree(&self) -> u32 {
        self.terms.keys().map(|t| t.op_degree()).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, t: TreeMonomial, c: C) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(t.arity(), self.arity);
        match self.terms.entry(t) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &OperadElement<C>, c: &C) {
        for (t, ct) in &other.terms {
            self.add_term(t.clone(), c.clone() * ct.clone());
        }
    }

    pub fn scale(&self, c: &C) -> OperadElement<C> {
        let mut out = OperadElement::zero(self.arity);
        out.add_scaled(self, c);
        out
    }

    pub fn neg(&self) -> OperadElement<C> {
        self.scale(&(C::zero() - C::one()))
    }

    pub fn sub(&self, other: &OperadElement<C>) -> OperadElement<C> {
        let mut out = self.clone();
        out.add_scaled(other, &(C::zero() - C::one()));
        out
    }

    pub fn add(&self, other: &OperadElement<C>) -> OperadElement<C> {
        let mut out = self.clone();
        out.add_scaled(other, &C::one());
        out
    }

    /// The order-maximal monomial of the support with its coefficient.
    pub fn leading_term(&self, order: &MonomialOrder) -> Option<(&TreeMonomial, &C)> {
        let lt = order.max(self.terms.keys())?;
        Some((lt, &self.terms[lt]))
    }

    /// Rescales so the leading coefficient is one.
    pub fn monic(&self, order: &MonomialOrder) -> OperadElement<C> {
        match self.leading_term(order) {
            None => self.clone(),
            Some((_, c)) => {
                let inv = C::one() / c.clone();
                self.scale(&inv)
            }
        }
    }

    /// Support sorted descending under `order` (leading term first).
    pub fn terms_descending(&self, order: &MonomialOrder) -> Vec<(&TreeMonomial, &C)> {
        let mut v: Vec<(&TreeMonomial, &C)> = self.terms.iter().collect();
        v.sort_by(|a, b| order.compare(b.0, a.0));
        v
    }

    pub fn format(&self, gens: &GeneratorSet, order: &MonomialOrder) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (t, c)) in self.terms_descending(order).into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push_str("- ");
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            if !abs.is_one() {
                out.push_str(&format!("{abs} "));
            }
            out.push_str(&t.format(gens));
        }
        out
    }
}

impl<C: Coefficient> fmt::Display for OperadElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (t, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*{t}")?;
        }
        Ok(())
    }
}

/// One elementary reduction `r_g(f) = f - (c_f/c_g) m_{lt(f),lt(g)}(g)` at
/// the occurrence `e` of `lt(g)` inside `lt(f)`. The leading term strictly
/// drops (or the result is zero).
pub fn reduce_once<C: Coefficient>(
    f: &OperadElement<C>,
    g: &OperadElement<C>,
    e: &Embedding,
    order: &MonomialOrder,
) -> Result<OperadElement<C>, AlgebraError> {
    let (lt_f, c_f) = f.leading_term(order).ok_or(AlgebraError::ZeroElement)?;
    let (lt_g, c_g) = g.leading_term(order).ok_or(AlgebraError::ZeroElement)?;
    if e.host() != lt_f || e.divisor() != lt_g {
        return Err(AlgebraError::NotDivisible);
    }
    let factor = c_f.clone() / c_g.clone();
    let mut out = f.clone();
    for (t, c) in g.iter() {
        let image = e.substitute(t).expect("same arity as divisor");
        out.add_term(image, C::zero() - factor.clone() * c.clone());
    }
    debug_assert!(match out.leading_term(order) {
        None => true,
        Some((lt_r, _)) => order.compare(lt_r, lt_f) == Ordering::Less,
    });
    Ok(out)
}

/// One step of a normal-form computation, for reporting reduction chains.
#[derive(Debug, Clone)]
pub struct ReductionStep {
    /// The monomial of the support that was rewritten.
    pub reduced: TreeMonomial,
    /// Index of the relation used.
    pub relation: usize,
}

/// Reduces `f` against the relation list until no monomial of the support
/// is divisible by any leading term. Deterministic strategy: rewrite the
/// order-largest reducible monomial first, choosing the relation with the
/// smallest index and the occurrence with the smallest root.
pub fn normal_form<C: Coefficient>(
    f: &OperadElement<C>,
    relations: &[OperadElement<C>],
    order: &MonomialOrder,
) -> OperadElement<C> {
    normal_form_traced(f, relations, order).0
}

pub fn normal_form_traced<C: Coefficient>(
    f: &OperadElement<C>,
    relations: &[OperadElement<C>],
    order: &MonomialOrder,
) -> (OperadElement<C>, Vec<ReductionStep>) {
    let leading: Vec<(&TreeMonomial, &C)> = relations
        .iter()
        .map(|g| g.leading_term(order).expect("relations must be nonzero"))
        .collect();
    let mut current = f.clone();
    let mut steps = Vec::new();
    let mut irreducible: HashSet<TreeMonomial> = HashSet::new();
    // worklist of support monomials, kept sorted ascending under the
    // order; rewrites insert their new monomials by binary search instead
    // of re-sorting the support on every step
    let mut pending: Vec<TreeMonomial> = current.support().cloned().collect();
    pending.sort_by(|a, b| order.compare(a, b));
    while let Some(t) = pending.pop() {
        if irreducible.contains(&t) {
            continue;
        }
        let Some(c_t) = current.coefficient(&t).cloned() else {
            continue; // cancelled along the way
        };
        let mut hit: Option<(usize, Embedding)> = None;
        for (gi, (lt_g, _)) in leading.iter().enumerate() {
            if let Some(e) = first_embedding(&t, lt_g) {
                hit = Some((gi, e));
                break;
            }
        }
        let Some((gi, e)) = hit else {
            irreducible.insert(t);
            continue;
        };
        let factor = c_t / leading[gi].1.clone();
        for (m, c) in relations[gi].iter() {
            let image = e.substitute(m).expect("same arity as divisor");
            if !irreducible.contains(&image) && current.coefficient(&image).is_none() {
                let pos = pending
                    .binary_search_by(|x| order.compare(x, &image))
                    .unwrap_or_else(|p| p);
                if pending.get(pos) != Some(&image) {
                    pending.insert(pos, image.clone());
                }
            }
            current.add_term(image, C::zero() - factor.clone() * c.clone());
        }
        debug_assert!(current.coefficient(&t).is_none());
        steps.push(ReductionStep {
            reduced: t,
            relation: gi,
        });
    }
    (current, steps)
}

/// A common multiple of two leading terms in overlap position: the two
/// occurrences share at least one vertex and jointly cover `gamma`, which
/// forces the vertex count of `gamma` below the total of the two factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommonMultiple {
    pub gamma: TreeMonomial,
    /// Occurrence of the first monomial in `gamma`.
    pub left: Embedding,
    /// Occurrence of the second monomial in `gamma`.
    pub right: Embedding,
}

/// Working tree for overlap construction: leaves are slots into the tag
/// table, vertices remember which factor(s) they came from.
enum Proto {
    Slot(usize),
    Node {
        gen: GenId,
        children: Vec<Proto>,
        a_idx: Option<u32>,
        b_idx: Option<u32>,
    },
}

struct OverlayState {
    /// Per leaf slot: the branch of the first factor it descends from and
    /// the branch of the second (if the slot lies in its region).
    tags: Vec<(Option<u32>, Option<u32>)>,
    counter_a: u32,
    counter_b: u32,
}

impl OverlayState {
    fn new() -> Self {
        OverlayState {
            tags: Vec::new(),
            counter_a: 0,
            counter_b: 0,
        }
    }

    fn slot(&mut self, a: Option<u32>, b: Option<u32>) -> Proto {
        self.tags.push((a, b));
        Proto::Slot(self.tags.len() - 1)
    }

    /// Converts a region belonging to the first factor only; every leaf in
    /// it optionally inherits one branch tag of the second factor.
    fn a_region(&mut self, node: &TreeMonomial, b_tag: Option<u32>) -> Proto {
        match node {
            TreeMonomial::Leaf(l) => self.slot(Some(*l), b_tag),
            TreeMonomial::Vertex { gen, children } => {
                let a_idx = self.counter_a;
                self.counter_a += 1;
                let children = children.iter().map(|c| self.a_region(c, b_tag)).collect();
                Proto::Node {
                    gen: *gen,
                    children,
                    a_idx: Some(a_idx),
                    b_idx: None,
                }
            }
        }
    }

    fn b_region(&mut self, node: &TreeMonomial, a_tag: Option<u32>) -> Proto {
        match node {
            TreeMonomial::Leaf(l) => self.slot(a_tag, Some(*l)),
            TreeMonomial::Vertex { gen, children } => {
                let b_idx = self.counter_b;
                self.counter_b += 1;
                let children = children.iter().map(|c| self.b_region(c, a_tag)).collect();
                Proto::Node {
                    gen: *gen,
                    children,
                    a_idx: None,
                    b_idx: Some(b_idx),
                }
            }
        }
    }

    /// Simultaneous walk of the two factors from an identified vertex.
    /// Subtree extraction preserves child order, so children align
    /// positionally; decorations must agree on the shared region.
    fn overlay(&mut self, a: &TreeMonomial, b: &TreeMonomial) -> Option<Proto> {
        match (a, b) {
            (_, TreeMonomial::Leaf(lb)) => Some(self.a_region(a, Some(*lb))),
            (TreeMonomial::Leaf(la), _) => Some(self.b_region(b, Some(*la))),
            (
                TreeMonomial::Vertex { gen: ga, children: ca },
                TreeMonomial::Vertex { gen: gb, children: cb },
            ) => {
                if ga != gb {
                    return None;
                }
                let a_idx = self.counter_a;
                self.counter_a += 1;
                let b_idx = self.counter_b;
                self.counter_b += 1;
                let mut children = Vec::with_capacity(ca.len());
                for (x, y) in ca.iter().zip(cb.iter()) {
                    children.push(self.overlay(x, y)?);
                }
                Some(Proto::Node {
                    gen: *ga,
                    children,
                    a_idx: Some(a_idx),
                    b_idx: Some(b_idx),
                })
            }
        }
    }
}

/// Tree with resolved leaf labels, still carrying factor vertex indices.
enum Built {
    Leaf(u32),
    Node {
        gen: GenId,
        children: Vec<Built>,
        a_idx: Option<u32>,
        b_idx: Option<u32>,
    },
}

impl Built {
    fn min_leaf(&self) -> u32 {
        match self {
            Built::Leaf(l) => *l,
            Built::Node { children, .. } => children.iter().map(|c| c.min_leaf()).min().unwrap(),
        }
    }

    fn sort(&mut self) {
        if let Built::Node { children, .. } = self {
            for c in children.iter_mut() {
                c.sort();
            }
            children.sort_by_key(|c| c.min_leaf());
        }
    }

    fn extract(
        &self,
        counter: &mut u32,
        a_map: &mut [u32],
        b_map: &mut [u32],
    ) -> TreeMonomial {
        match self {
            Built::Leaf(l) => TreeMonomial::Leaf(*l),
            Built::Node {
                gen,
                children,
                a_idx,
                b_idx,
            } => {
                let idx = *counter;
                *counter += 1;
                if let Some(i) = a_idx {
                    a_map[*i as usize] = idx;
                }
                if let Some(i) = b_idx {
                    b_map[*i as usize] = idx;
                }
                TreeMonomial::Vertex {
                    gen: *gen,
                    children: children
                        .iter()
                        .map(|c| c.extract(counter, a_map, b_map))
                        .collect(),
                }
            }
        }
    }
}

fn resolve(proto: &Proto, labels: &[u32]) -> Built {
    match proto {
        Proto::Slot(i) => Built::Leaf(labels[*i]),
        Proto::Node {
            gen,
            children,
            a_idx,
            b_idx,
        } => Built::Node {
            gen: *gen,
            children: children.iter().map(|c| resolve(c, labels)).collect(),
            a_idx: *a_idx,
            b_idx: *b_idx,
        },
    }
}

/// Enumerates the bijective labellings of the slots that make both factor
/// occurrences restrict correctly: labels are assigned in increasing
/// order, and the branches of each factor must start (receive their
/// minimum) in the order of the factor's own leaf labels.
fn labelings(tags: &[(Option<u32>, Option<u32>)]) -> Vec<Vec<u32>> {
    let n = tags.len();
    let mut out = Vec::new();
    let mut assignment = vec![0u32; n];
    let mut used = vec![false; n];
    let mut a_started = 0u32;
    let mut b_started = 0u32;
    let mut a_open: BTreeSet<u32> = BTreeSet::new();
    let mut b_open: BTreeSet<u32> = BTreeSet::new();
    rec(
        tags,
        0,
        &mut assignment,
        &mut used,
        &mut a_started,
        &mut b_started,
        &mut a_open,
        &mut b_open,
        &mut out,
    );
    return out;

    #[allow(clippy::too_many_arguments)]
    fn rec(
        tags: &[(Option<u32>, Option<u32>)],
        label: usize,
        assignment: &mut Vec<u32>,
        used: &mut Vec<bool>,
        a_started: &mut u32,
        b_started: &mut u32,
        a_open: &mut BTreeSet<u32>,
        b_open: &mut BTreeSet<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        let n = tags.len();
        if label == n {
            out.push(assignment.clone());
            return;
        }
        for slot in 0..n {
            if used[slot] {
                continue;
            }
            let (ta, tb) = tags[slot];
            let a_new = ta.is_some_and(|t| !a_open.contains(&t));
            let b_new = tb.is_some_and(|t| !b_open.contains(&t));
            if a_new && ta != Some(*a_started + 1) {
                continue;
            }
            if b_new && tb != Some(*b_started + 1) {
                continue;
            }
            used[slot] = true;
            assignment[slot] = (label + 1) as u32;
            if a_new {
                a_open.insert(ta.unwrap());
                *a_started += 1;
            }
            if b_new {
                b_open.insert(tb.unwrap());
                *b_started += 1;
            }
            rec(tags, label + 1, assignment, used, a_started, b_started, a_open, b_open, out);
            if a_new {
                a_open.remove(&ta.unwrap());
                *a_started -= 1;
            }
            if b_new {
                b_open.remove(&tb.unwrap());
                *b_started -= 1;
            }
            used[slot] = false;
        }
    }
}

/// All small common multiples of two tree monomials: every `gamma`
/// carrying overlapping occurrences of both that jointly cover it,
/// deduplicated by `(gamma, occurrence, occurrence)` and returned in a
/// deterministic order. Degenerate factors have none.
pub fn small_common_multiples(a: &TreeMonomial, b: &TreeMonomial) -> Vec<CommonMultiple> {
    if a.is_leaf() || b.is_leaf() {
        return Vec::new();
    }
    let mut seen: BTreeSet<(TreeMonomial, Vec<u32>, Vec<u32>)> = BTreeSet::new();
    // first factor on top, second identified at each vertex of the first
    for v in 0..a.op_degree() {
        collect_case(a, b, v, false, &mut seen);
    }
    // second factor on top; skip its root to not double-count the
    // both-tops-at-root configuration
    for w in 1..b.op_degree() {
        collect_case(a, b, w, true, &mut seen);
    }
    return seen
        .into_iter()
        .map(|(gamma, ma, mb)| CommonMultiple {
            left: Embedding::assemble(gamma.clone(), a.clone(), ma),
            right: Embedding::assemble(gamma.clone(), b.clone(), mb),
            gamma,
        })
        .collect();

    fn collect_case(
        a: &TreeMonomial,
        b: &TreeMonomial,
        target: u32,
        b_on_top: bool,
        seen: &mut BTreeSet<(TreeMonomial, Vec<u32>, Vec<u32>)>,
    ) {
        let mut st = OverlayState::new();
        let proto = if b_on_top {
            walk_top(b, a, target, &mut st, true)
        } else {
            walk_top(a, b, target, &mut st, false)
        };
        let Some(proto) = proto else { return };
        let va = a.op_degree();
        let vb = b.op_degree();
        for labels in labelings(&st.tags) {
            let mut built = resolve(&proto, &labels);
            built.sort();
            let mut a_map = vec![0u32; va as usize];
            let mut b_map = vec![0u32; vb as usize];
            let mut counter = 0u32;
            let gamma = built.extract(&mut counter, &mut a_map, &mut b_map);
            seen.insert((gamma, a_map, b_map));
        }
    }

    /// Walks the top factor in preorder; at vertex index `target` the
    /// other factor's root is identified and the overlay begins.
    fn walk_top(
        top: &TreeMonomial,
        inner: &TreeMonomial,
        target: u32,
        st: &mut OverlayState,
        b_on_top: bool,
    ) -> Option<Proto> {
        let mut next = 0u32;
        return go(top, inner, target, &mut next, st, b_on_top);

        fn go(
            node: &TreeMonomial,
            inner: &TreeMonomial,
            target: u32,
            next: &mut u32,
            st: &mut OverlayState,
            b_on_top: bool,
        ) -> Option<Proto> {
            match node {
                TreeMonomial::Leaf(l) => Some(if b_on_top {
                    st.slot(None, Some(*l))
                } else {
                    st.slot(Some(*l), None)
                }),
                TreeMonomial::Vertex { gen, children } => {
                    let idx = *next;
                    if idx == target {
                        // consume the preorder indices of the whole region
                        // and align the overlay's counter for the top side
                        *next += node.op_degree();
                        return if b_on_top {
                            st.counter_b = idx;
                            st.overlay(inner, node)
                        } else {
                            st.counter_a = idx;
                            st.overlay(node, inner)
                        };
                    }
                    *next += 1;
                    let (a_idx, b_idx) = if b_on_top {
                        (None, Some(idx))
                    } else {
                        (Some(idx), None)
                    };
                    let mut kids = Vec::with_capacity(children.len());
                    for c in children {
                        kids.push(go(c, inner, target, next, st, b_on_top)?);
                    }
                    Some(Proto::Node {
                        gen: *gen,
                        children: kids,
                        a_idx,
                        b_idx,
                    })
                }
            }
        }
    }
}

/// The S-polynomial `s_gamma(f, g) = m_{gamma,lt(f)}(f) -
/// (c_f/c_g) m_{gamma,lt(g)}(g)` at a small common multiple of the two
/// leading terms. The monomial `gamma` cancels exactly.
pub fn s_polynomial<C: Coefficient>(
    f: &OperadElement<C>,
    g: &OperadElement<C>,
    cm: &CommonMultiple,
    order: &MonomialOrder,
) -> Result<OperadElement<C>, AlgebraError> {
    let (lt_f, c_f) = f.leading_term(order).ok_or(AlgebraError::ZeroElement)?;
    let (lt_g, c_g) = g.leading_term(order).ok_or(AlgebraError::ZeroElement)?;
    if cm.left.divisor() != lt_f
        || cm.right.divisor() != lt_g
        || cm.left.host() != &cm.gamma
        || cm.right.host() != &cm.gamma
    {
        return Err(AlgebraError::MismatchedMultiple);
    }
    let mut out = OperadElement::zero(cm.gamma.arity());
    for (t, c) in f.iter() {
        out.add_term(cm.left.substitute(t).expect("arity matches"), c.clone());
    }
    let factor = c_f.clone() / c_g.clone();
    for (t, c) in g.iter() {
        out.add_term(
            cm.right.substitute(t).expect("arity matches"),
            C::zero() - factor.clone() * c.clone(),
        );
    }
    debug_assert!(out.coefficient(&cm.gamma).is_none());
    Ok(out)
}

impl Embedding {
    /// Internal assembler for occurrences produced by the overlap engine.
    pub(crate) fn assemble(host: TreeMonomial, divisor: TreeMonomial, vertex_map: Vec<u32>) -> Self {
        let e = Embedding::from_parts(host, divisor, vertex_map);
        debug_assert!(e.check(), "assembled embedding must be a real occurrence");
        e
    }
}
