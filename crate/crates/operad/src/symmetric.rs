//! Symmetric-group actions and the symmetrization pre-step.
//!
//! A symmetric presentation is turned into a shuffle presentation in two
//! moves: generators acquire a monomial symmetry table (relabelling the
//! inputs of a generator yields plus or minus another generator), and the
//! relation set is closed under leaf relabelling so that its linear span
//! is stable under the symmetric groups. The shuffle ideal of the closed
//! set then matches the symmetric ideal.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::coeff::Coefficient;
use crate::algebra::OperadElement;
use crate::trees::{GenId, GeneratorSet, TreeMonomial};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SymmetryError {
    #[error("permutation acts on {got} letters, element has arity {expected}")]
    SizeMismatch { expected: u32, got: u32 },
    #[error("generator {0} has no symmetry entry for a required permutation")]
    IncompleteTable(String),
    #[error("explicit action table for {0} is inconsistent (not a monomial representation)")]
    InconsistentTable(String),
}

/// A permutation of `{1..n}` in one-line notation: `imgs[i-1]` is the
/// image of `i`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(n: u32) -> Self {
        Perm((1..=n).collect())
    }

    pub fn from_images(imgs: Vec<u32>) -> Self {
        let p = Perm(imgs);
        debug_assert!(p.is_valid());
        p
    }

    pub fn is_valid(&self) -> bool {
        let n = self.0.len();
        let mut seen = vec![false; n];
        self.0.iter().all(|&v| {
            v >= 1 && v as usize <= n && !std::mem::replace(&mut seen[(v - 1) as usize], true)
        })
    }

    pub fn degree(&self) -> u32 {
        self.0.len() as u32
    }

    pub fn apply(&self, i: u32) -> u32 {
        self.0[(i - 1) as usize]
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    /// Composition acting left to right on values: `(p * q)(i) = p(q(i))`.
    pub fn compose(&self, q: &Perm) -> Perm {
        Perm(q.0.iter().map(|&i| self.apply(i)).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut imgs = vec![0u32; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            imgs[(v - 1) as usize] = (i + 1) as u32;
        }
        Perm(imgs)
    }

    pub fn transposition(n: u32, i: u32, j: u32) -> Perm {
        let mut imgs: Vec<u32> = (1..=n).collect();
        imgs.swap((i - 1) as usize, (j - 1) as usize);
        Perm(imgs)
    }

    pub fn sign(&self) -> i8 {
        let mut seen = vec![false; self.0.len()];
        let mut sign = 1i8;
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0usize;
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cur = (self.0[cur] - 1) as usize;
                len += 1;
            }
            if len.is_multiple_of(2) {
                sign = -sign;
            }
        }
        sign
    }

    /// All permutations of `{1..n}` in lexicographic one-line order.
    pub fn all(n: u32) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut imgs: Vec<u32> = (1..=n).collect();
        loop {
            out.push(Perm(imgs.clone()));
            // next lexicographic permutation
            let Some(i) = (0..imgs.len().saturating_sub(1)).rev().find(|&i| imgs[i] < imgs[i + 1])
            else {
                return out;
            };
            let j = (i + 1..imgs.len()).rev().find(|&j| imgs[j] > imgs[i]).unwrap();
            imgs.swap(i, j);
            imgs[i + 1..].reverse();
        }
    }

    /// Compact one-line rendering, e.g. `213`.
    pub fn one_line(&self) -> String {
        self.0.iter().map(|v| v.to_string()).collect()
    }
}

/// Monomial symmetry data: for each generator and each permutation of its
/// inputs, the generator (with sign) that the relabelled vertex becomes
/// once its children are restored to canonical order.
///
/// Entry `(g, s) -> (h, sign)` means: a vertex decorated `g` whose written
/// children are the canonical ones permuted by `s` (canonical child `j` is
/// written child `s(j)`) equals `sign` times the vertex `h` on the
/// canonical children.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SymmetryTable {
    per_gen: BTreeMap<GenId, BTreeMap<Perm, (GenId, i8)>>,
}

impl SymmetryTable {
    pub fn new() -> Self {
        SymmetryTable::default()
    }

    pub fn insert(&mut self, gen: GenId, perm: Perm, target: GenId, sign: i8) {
        self.per_gen.entry(gen).or_default().insert(perm, (target, sign));
    }

    pub fn apply(&self, gen: GenId, perm: &Perm) -> Option<(GenId, i8)> {
        self.per_gen.get(&gen)?.get(perm).copied()
    }

    pub fn has_gen(&self, gen: GenId) -> bool {
        self.per_gen.contains_key(&gen)
    }

    /// Trivial action: every relabelling fixes the generator.
    pub fn add_trivial(&mut self, gen: GenId, arity: u32) {
        for p in Perm::all(arity) {
            self.insert(gen, p, gen, 1);
        }
    }

    /// Sign action: a relabelling multiplies by the sign of the sorting
    /// permutation.
    pub fn add_sign(&mut self, gen: GenId, arity: u32) {
        for p in Perm::all(arity) {
            let s = p.sign();
            self.insert(gen, p.clone(), gen, s);
        }
    }

    /// Regular (free) action over a coset family `gens[tau]`, the shuffle
    /// generators created for one symmetric generator with no imposed
    /// symmetry: sorting by `s` sends the `tau`-coset to the
    /// `s^{-1} tau`-coset.
    pub fn add_regular(&mut self, family: &BTreeMap<Perm, GenId>, arity: u32) {
        for (tau, &gid) in family {
            for s in Perm::all(arity) {
                let target = family[&s.inverse().compose(tau)];
                self.insert(gid, s, target, 1);
            }
        }
    }

    /// Completes an explicitly given set of transposition images into a
    /// full monomial representation, failing on inconsistency. `seeds`
    /// maps transpositions (and possibly other permutations) of one
    /// generator family to signed generators.
    pub fn complete_explicit(
        &mut self,
        gens: &GeneratorSet,
        arity: u32,
        seeds: &[(GenId, Perm, GenId, i8)],
    ) -> Result<(), SymmetryError> {
        // start from identities for every generator named in the seeds
        let mut table: BTreeMap<(GenId, Perm), (GenId, i8)> = BTreeMap::new();
        let mut members: Vec<GenId> = Vec::new();
        for &(g, _, h, _) in seeds {
            for x in [g, h] {
                if !members.contains(&x) {
                    members.push(x);
                    table.insert((x, Perm::identity(arity)), (x, 1));
                }
            }
        }
        for (g, p, h, sign) in seeds {
            let prev = table.insert((*g, p.clone()), (*h, *sign));
            if let Some(prev) = prev {
                if prev != (*h, *sign) {
                    return Err(SymmetryError::InconsistentTable(gens.get(*g).name.clone()));
                }
            }
        }
        // close under right multiplication by the seed permutations until
        // every permutation is covered for every member
        let seed_perms: Vec<Perm> = {
            let mut v: Vec<Perm> = seeds.iter().map(|(_, p, _, _)| p.clone()).collect();
            v.sort();
            v.dedup();
            v
        };
        let all = Perm::all(arity);
        loop {
            let mut changed = false;
            let snapshot: Vec<((GenId, Perm), (GenId, i8))> =
                table.iter().map(|(k, v)| (k.clone(), *v)).collect();
            for ((g, s), (h, sign)) in snapshot {
                for p in &seed_perms {
                    // sorting by s and then by p composes to s(p(.))
                    if let Some(&(h2, sign2)) = table.get(&(h, p.clone())) {
                        let combined = (h2, sign * sign2);
                        let key = (g, s.compose(p));
                        match table.get(&key) {
                            None => {
                                table.insert(key, combined);
                                changed = true;
                            }
                            Some(&existing) => {
                                if existing != combined {
                                    return Err(SymmetryError::InconsistentTable(
                                        gens.get(g).name.clone(),
                                    ));
                                }
                            }
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        for &g in &members {
            for p in &all {
                if !table.contains_key(&(g, p.clone())) {
                    return Err(SymmetryError::IncompleteTable(gens.get(g).name.clone()));
                }
            }
        }
        for ((g, p), (h, sign)) in table {
            self.insert(g, p, h, sign);
        }
        Ok(())
    }
}

/// Canonicalizes a raw decorated tree whose children may be out of order,
/// twisting vertex decorations through the symmetry table wherever the
/// min-leaf sort permutes children. Returns the accumulated sign.
pub fn canonicalize_twisted(
    table: &SymmetryTable,
    raw: &TreeMonomial,
) -> Result<(i8, TreeMonomial), SymmetryError> {
    match raw {
        TreeMonomial::Leaf(l) => Ok((1, TreeMonomial::Leaf(*l))),
        TreeMonomial::Vertex { gen, children } => {
            let mut sign = 1i8;
            let mut processed: Vec<(u32, TreeMonomial)> = Vec::with_capacity(children.len());
            for c in children {
                let (s, t) = canonicalize_twisted(table, c)?;
                sign *= s;
                processed.push((t.min_leaf(), t));
            }
            // canonical position j holds the written child s(j)
            let mut order: Vec<usize> = (0..processed.len()).collect();
            order.sort_by_key(|&i| processed[i].0);
            let sort_perm = Perm::from_images(order.iter().map(|&i| (i + 1) as u32).collect());
            let (new_gen, s) = match table.apply(*gen, &sort_perm) {
                Some(x) => x,
                None => {
                    if sort_perm == Perm::identity(children.len() as u32) {
                        (*gen, 1)
                    } else {
                        return Err(SymmetryError::IncompleteTable(format!("g{}", gen.0)));
                    }
                }
            };
            sign *= s;
            let mut sorted: Vec<(u32, TreeMonomial)> = Vec::with_capacity(processed.len());
            for &i in &order {
                sorted.push(processed[i].clone());
            }
            Ok((
                sign,
                TreeMonomial::Vertex {
                    gen: new_gen,
                    children: sorted.into_iter().map(|(_, t)| t).collect(),
                },
            ))
        }
    }
}

/// The leaf-relabelling action of a permutation on an element: each
/// monomial's leaves go through `tau`, the tree is re-canonicalized and
/// decorations transform through the symmetry table. A group action:
/// `act(p, act(q, f)) = act(p*q, f)`.
pub fn act<C: Coefficient>(
    table: &SymmetryTable,
    tau: &Perm,
    f: &OperadElement<C>,
) -> Result<OperadElement<C>, SymmetryError> {
    if tau.degree() != f.arity() {
        return Err(SymmetryError::SizeMismatch {
            expected: f.arity(),
            got: tau.degree(),
        });
    }
    let mut out = OperadElement::zero(f.arity());
    for (t, c) in f.iter() {
        let relabeled = relabel_raw(t, tau);
        let (sign, canon) = canonicalize_twisted(table, &relabeled)?;
        let coeff = if sign >= 0 { c.clone() } else { C::zero() - c.clone() };
        out.add_term(canon, coeff);
    }
    return Ok(out);

    fn relabel_raw(t: &TreeMonomial, tau: &Perm) -> TreeMonomial {
        match t {
            TreeMonomial::Leaf(l) => TreeMonomial::Leaf(tau.apply(*l)),
            TreeMonomial::Vertex { gen, children } => TreeMonomial::Vertex {
                gen: *gen,
                children: children.iter().map(|c| relabel_raw(c, tau)).collect(),
            },
        }
    }
}

/// Row space over the monomial basis for exact rank bookkeeping. Pivots
/// are chosen structurally, so results do not depend on any term order.
struct RowSpace<C> {
    /// Echelon rows keyed by pivot monomial; each row has coefficient one
    /// at its pivot and no support on other pivots.
    rows: BTreeMap<TreeMonomial, OperadElement<C>>,
}

impl<C: Coefficient> RowSpace<C> {
    fn new() -> Self {
        RowSpace {
            rows: BTreeMap::new(),
        }
    }

    /// Reduces `f` against the rows; a nonzero remainder is inserted and
    /// `true` returned (the element was independent).
    fn insert(&mut self, f: &OperadElement<C>) -> bool {
        let mut rem = f.clone();
        loop {
            let Some((pivot, c)) = rem
                .iter()
                .rev()
                .find(|(t, _)| self.rows.contains_key(*t))
                .map(|(t, c)| (t.clone(), c.clone()))
            else {
                break;
            };
            let row = self.rows[&pivot].clone();
            rem.add_scaled(&row, &(C::zero() - c));
        }
        if rem.is_zero() {
            return false;
        }
        let pivot = rem.iter().next_back().map(|(t, _)| t.clone()).unwrap();
        let lead = rem.coefficient(&pivot).unwrap().clone();
        let normalized = rem.scale(&(C::one() / lead));
        // eliminate the new pivot from existing rows
        let keys: Vec<TreeMonomial> = self.rows.keys().cloned().collect();
        for k in keys {
            let row = self.rows.get(&k).unwrap();
            if let Some(c) = row.coefficient(&pivot).cloned() {
                let mut updated = row.clone();
                updated.add_scaled(&normalized, &(C::zero() - c));
                self.rows.insert(k, updated);
            }
        }
        self.rows.insert(pivot, normalized);
        true
    }

    /// Is `f` in the span of the inserted rows?
    fn contains(&self, f: &OperadElement<C>) -> bool {
        let mut rem = f.clone();
        loop {
            let Some((pivot, c)) = rem
                .iter()
                .rev()
                .find(|(t, _)| self.rows.contains_key(*t))
                .map(|(t, c)| (t.clone(), c.clone()))
            else {
                break;
            };
            let row = self.rows[&pivot].clone();
            rem.add_scaled(&row, &(C::zero() - c));
        }
        rem.is_zero()
    }
}

/// Exact span membership test, used by tests and diagnostics.
pub fn in_span<C: Coefficient>(set: &[OperadElement<C>], f: &OperadElement<C>) -> bool {
    let mut space = RowSpace::new();
    for g in set {
        space.insert(g);
    }
    space.contains(f)
}

/// Exact rank of a finite element family.
pub fn rank<C: Coefficient>(set: &[OperadElement<C>]) -> usize {
    let mut space = RowSpace::new();
    set.iter().filter(|f| space.insert(f)).count()
}

/// Closes a relation list under the symmetric-group action: returns, in
/// first-seen order over lexicographically enumerated permutations, a
/// subset of the orbit images whose span equals the orbit span of the
/// input. Images that are linearly dependent on earlier ones are pruned
/// by exact elimination.
pub fn symmetrize_relations<C: Coefficient>(
    table: &SymmetryTable,
    relations: &[OperadElement<C>],
) -> Result<Vec<OperadElement<C>>, SymmetryError> {
    let mut out = Vec::new();
    let mut spaces: BTreeMap<u32, RowSpace<C>> = BTreeMap::new();
    for rel in relations {
        if rel.is_zero() {
            continue;
        }
        let n = rel.arity();
        let space = spaces.entry(n).or_insert_with(RowSpace::new);
        for tau in Perm::all(n) {
            let image = act(table, &tau, rel)?;
            if image.is_zero() {
                continue;
            }
            if space.insert(&image) {
                out.push(image);
            }
        }
    }
    Ok(out)
}
