//! Buchberger completion for shuffle operadic ideals.
//!
//! The completion queue holds one entry per (pair of elements, small
//! common multiple). Entries are processed in degree order; every nonzero
//! reduced S-polynomial joins the basis and spawns new entries. A degree
//! cap bounds the operation degree of the common multiples examined, since
//! operadic ideals may have no finite basis.
//!
//! S-polynomial reductions for a batch of queued entries run in parallel
//! against a frozen snapshot of the basis; the merge step recomputes any
//! result whose snapshot went stale, so output is identical for every
//! worker count.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use thiserror::Error;

use crate::algebra::{normal_form, s_polynomial, small_common_multiples, CommonMultiple, OperadElement};

use crate::coeff::Coefficient;
use crate::order::MonomialOrder;
use crate::trees::TreeMonomial;

/// Identity of one queue entry: pair indices plus the common multiple with
/// both occurrence maps.
type PendingKey = (usize, usize, TreeMonomial, Vec<u32>, Vec<u32>);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CompletionError {
    #[error("relation {0} is zero")]
    ZeroRelation(usize),
}

/// How a basis element came to be.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Input,
    /// Nonzero residue of the S-polynomial of the elements with the given
    /// serial numbers at the recorded common multiple.
    SPair {
        left: usize,
        right: usize,
        multiple: Box<CommonMultiple>,
    },
}

impl Provenance {
    /// The common multiple's monomial, for reporting.
    pub fn gamma(&self) -> Option<&TreeMonomial> {
        match self {
            Provenance::Input => None,
            Provenance::SPair { multiple, .. } => Some(&multiple.gamma),
        }
    }
}

/// Bookkeeping attached to each basis element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementMeta {
    /// Stable id assigned at creation time; survives autoreduction.
    pub serial: usize,
    pub provenance: Provenance,
}

/// An ordered relation set together with the order it was computed under,
/// the examined degree range and the completeness flag for that range.
#[derive(Debug, Clone)]
pub struct GroebnerBasis<C> {
    pub order: MonomialOrder,
    pub elements: Vec<OperadElement<C>>,
    pub meta: Vec<ElementMeta>,
    pub degree_cap: u32,
    /// Every S-polynomial whose common multiple has operation degree at
    /// most `degree_cap` reduces to zero modulo `elements`.
    pub complete_up_to_cap: bool,
    /// Number of (pair, common multiple) entries skipped because the
    /// multiple exceeded the cap; nonzero means the basis may be
    /// incomplete beyond the cap.
    pub pairs_beyond_cap: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompletionOptions {
    pub degree_cap: u32,
    /// Autoreduce the result to a reduced basis.
    pub reduce: bool,
    /// Worker count for batch reductions; 0 picks the available
    /// parallelism. Output never depends on this value.
    pub threads: usize,
}

impl CompletionOptions {
    /// Cap defaulting: twice the largest input operation degree plus two.
    pub fn default_for<C: Coefficient>(relations: &[OperadElement<C>]) -> Self {
        let max_deg = relations.iter().map(|r| r.max_op_degree()).max().unwrap_or(1);
        CompletionOptions {
            degree_cap: 2 * max_deg + 2,
            reduce: true,
            threads: 0,
        }
    }
}

pub(crate) fn resolve_threads(threads: usize) -> usize {
    if threads != 0 {
        return threads;
    }
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// Applies `f` to every item, possibly on several worker threads. Results
/// come back in input order regardless of the worker count.
pub(crate) fn parallel_map<T, R, F>(threads: usize, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let threads = resolve_threads(threads).min(items.len().max(1));
    if threads <= 1 || items.len() < 2 {
        return items.iter().map(&f).collect();
    }
    let chunk = items.len().div_ceil(threads);
    std::thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| scope.spawn(|| part.iter().map(&f).collect::<Vec<R>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

/// One queue entry: the S-polynomial of elements with serials `left` and
/// `right` at the common multiple `cm`.
#[derive(Debug, Clone)]
struct Pending {
    left: usize,
    right: usize,
    cm: CommonMultiple,
}

fn pending_cmp(order: &MonomialOrder, a: &Pending, b: &Pending) -> Ordering {
    a.cm.gamma
        .op_degree()
        .cmp(&b.cm.gamma.op_degree())
        .then_with(|| a.left.cmp(&b.left))
        .then_with(|| a.right.cmp(&b.right))
        .then_with(|| order.compare(&a.cm.gamma, &b.cm.gamma))
        .then_with(|| a.cm.left.vertex_map().cmp(b.cm.left.vertex_map()))
        .then_with(|| a.cm.right.vertex_map().cmp(b.cm.right.vertex_map()))
}

/// Enumerates the queue entries of one element pair, splitting them by the
/// degree cap into (kept, skipped count).
fn pair_entries<C: Coefficient>(
    elements: &[OperadElement<C>],
    order: &MonomialOrder,
    left: usize,
    right: usize,
    cap: u32,
) -> (Vec<Pending>, usize) {
    let lt_l = elements[left]
        .leading_term(order)
        .expect("basis elements are nonzero")
        .0;
    let lt_r = elements[right]
        .leading_term(order)
        .expect("basis elements are nonzero")
        .0;
    let mut kept = Vec::new();
    let mut skipped = 0usize;
    for cm in small_common_multiples(lt_l, lt_r) {
        if cm.gamma.op_degree() <= cap {
            kept.push(Pending { left, right, cm });
        } else {
            skipped += 1;
        }
    }
    (kept, skipped)
}

/// Outcome of checking the set against the Diamond Lemma criterion: did
/// every S-polynomial within the cap reduce to zero?
#[derive(Debug, Clone)]
pub struct GroebnerReport<C> {
    pub is_basis: bool,
    pub checked: Vec<CheckedPair>,
    /// First nonzero residue in queue order, when `is_basis` is false.
    pub witness: Option<Witness<C>>,
    pub pairs_beyond_cap: usize,
}

#[derive(Debug, Clone)]
pub struct CheckedPair {
    pub left: usize,
    pub right: usize,
    pub gamma: TreeMonomial,
    pub reduced_to_zero: bool,
}

#[derive(Debug, Clone)]
pub struct Witness<C> {
    pub left: usize,
    pub right: usize,
    pub gamma: TreeMonomial,
    pub residue: OperadElement<C>,
}

/// Tests whether the given relations form a Groebner basis of the ideal
/// they generate, examining every S-polynomial at common multiples of
/// operation degree at most `degree_cap`.
pub fn is_groebner<C: Coefficient>(
    relations: &[OperadElement<C>],
    order: &MonomialOrder,
    degree_cap: u32,
    threads: usize,
) -> Result<GroebnerReport<C>, CompletionError> {
    for (i, r) in relations.iter().enumerate() {
        if r.is_zero() {
            return Err(CompletionError::ZeroRelation(i));
        }
    }
    let mut queue = Vec::new();
    let mut beyond = 0usize;
    for i in 0..relations.len() {
        for j in i..relations.len() {
            let (kept, skipped) = pair_entries(relations, order, i, j, degree_cap);
            queue.extend(kept);
            beyond += skipped;
        }
    }
    queue.sort_by(|a, b| pending_cmp(order, a, b));
    let residues: Vec<OperadElement<C>> = parallel_map(threads, &queue, |p| {
        let s = s_polynomial(&relations[p.left], &relations[p.right], &p.cm, order)
            .expect("common multiple was built from this pair");
        normal_form(&s, relations, order)
    });
    let mut checked = Vec::with_capacity(queue.len());
    let mut witness = None;
    for (p, residue) in queue.iter().zip(residues) {
        let ok = residue.is_zero();
        if !ok && witness.is_none() {
            witness = Some(Witness {
                left: p.left,
                right: p.right,
                gamma: p.cm.gamma.clone(),
                residue,
            });
        }
        checked.push(CheckedPair {
            left: p.left,
            right: p.right,
            gamma: p.cm.gamma.clone(),
            reduced_to_zero: ok,
        });
    }
    Ok(GroebnerReport {
        is_basis: witness.is_none(),
        checked,
        witness,
        pairs_beyond_cap: beyond,
    })
}

/// Buchberger completion: repeatedly adjoins reduced nonzero
/// S-polynomials until every one within the degree cap reduces to zero.
/// Input relations must be nonzero; the result generates the same ideal
/// and is autoreduced when `opts.reduce` is set.
pub fn buchberger<C: Coefficient>(
    relations: &[OperadElement<C>],
    order: &MonomialOrder,
    opts: &CompletionOptions,
) -> Result<GroebnerBasis<C>, CompletionError> {
    let cap = opts.degree_cap;
    let mut elements: Vec<OperadElement<C>> = Vec::new();
    let mut meta: Vec<ElementMeta> = Vec::new();
    for (i, r) in relations.iter().enumerate() {
        if r.is_zero() {
            return Err(CompletionError::ZeroRelation(i));
        }
        let m = r.monic(order);
        if !elements.contains(&m) {
            elements.push(m);
            meta.push(ElementMeta {
                serial: meta.len(),
                provenance: Provenance::Input,
            });
        }
    }
    let mut beyond = 0usize;
    let mut queue: Vec<Pending> = Vec::new();
    let mut seen: BTreeSet<PendingKey> = BTreeSet::new();
    for i in 0..elements.len() {
        for j in i..elements.len() {
            let (kept, skipped) = pair_entries(&elements, order, i, j, cap);
            beyond += skipped;
            for p in kept {
                if seen.insert(key_of(&p)) {
                    queue.push(p);
                }
            }
        }
    }
    while !queue.is_empty() {
        queue.sort_by(|a, b| pending_cmp(order, a, b));
        let batch = std::mem::take(&mut queue);
        let snapshot = elements.clone();
        let residues: Vec<OperadElement<C>> = parallel_map(opts.threads, &batch, |p| {
            let s = s_polynomial(&snapshot[p.left], &snapshot[p.right], &p.cm, order)
                .expect("common multiple was built from this pair");
            normal_form(&s, &snapshot, order)
        });
        let mut stale = false;
        for (p, residue) in batch.iter().zip(residues) {
            let residue = if stale {
                let s = s_polynomial(&elements[p.left], &elements[p.right], &p.cm, order)
                    .expect("common multiple was built from this pair");
                normal_form(&s, &elements, order)
            } else {
                residue
            };
            if residue.is_zero() {
                continue;
            }
            let new_idx = elements.len();
            elements.push(residue.monic(order));
            meta.push(ElementMeta {
                serial: new_idx,
                provenance: Provenance::SPair {
                    left: p.left,
                    right: p.right,
                    multiple: Box::new(p.cm.clone()),
                },
            });
            stale = true;
            for other in 0..=new_idx {
                let (kept, skipped) = pair_entries(&elements, order, other, new_idx, cap);
                beyond += skipped;
                for p in kept {
                    if seen.insert(key_of(&p)) {
                        queue.push(p);
                    }
                }
            }
        }
    }
    let mut basis = GroebnerBasis {
        order: order.clone(),
        elements,
        meta,
        degree_cap: cap,
        complete_up_to_cap: true,
        pairs_beyond_cap: beyond,
    };
    if opts.reduce {
        basis = autoreduce(basis);
    }
    Ok(basis)
}

fn key_of(p: &Pending) -> PendingKey {
    (
        p.left,
        p.right,
        p.cm.gamma.clone(),
        p.cm.left.vertex_map().to_vec(),
        p.cm.right.vertex_map().to_vec(),
    )
}

/// Interreduces a basis: every element is normal-formed against the
/// others, zero results are dropped, and the process repeats until no
/// element's leading term divides another's and all tails are reduced.
/// The ideal is unchanged; for a Groebner basis the result is the reduced
/// Groebner basis.
pub fn autoreduce<C: Coefficient>(basis: GroebnerBasis<C>) -> GroebnerBasis<C> {
    let GroebnerBasis {
        order,
        mut elements,
        mut meta,
        degree_cap,
        complete_up_to_cap,
        pairs_beyond_cap,
    } = basis;
    loop {
        let mut changed = false;
        let mut i = 0usize;
        while i < elements.len() {
            let mut others = elements.clone();
            others.remove(i);
            let reduced = normal_form(&elements[i], &others, &order);
            if reduced.is_zero() {
                elements.remove(i);
                meta.remove(i);
                changed = true;
                continue;
            }
            let reduced = reduced.monic(&order);
            if reduced != elements[i] {
                elements[i] = reduced;
                changed = true;
            }
            i += 1;
        }
        if !changed {
            break;
        }
    }
    GroebnerBasis {
        order,
        elements,
        meta,
        degree_cap,
        complete_up_to_cap,
        pairs_beyond_cap,
    }
}
