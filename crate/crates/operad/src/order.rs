//! Admissible total orderings on tree monomials.
//!
//! Two families are provided. The path-lexicographic family fingerprints a
//! monomial by its root-to-leaf generator words plus the planar leaf
//! permutation and compares those. The forest-lexicographic family
//! compares trees recursively through their leaf-label sets and root
//! decorations.
//!
//! Every configuration must be arity-monotone and monotone under shuffle
//! compositions in both arguments ("admissible"). The default
//! path-lexicographic configuration is admissible by construction; other
//! configurations are checked by [`validate_admissibility`] before they
//! are trusted for completion runs.

use std::cmp::Ordering;

use crate::trees::{compose, enumerate_shuffles, GenId, GeneratorSet, TreeMonomial};

/// How generator words along root-to-leaf paths are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WordMode {
    /// Longer word wins; ties broken letter-by-letter via precedence.
    DegLex,
    /// Letter-by-letter via precedence; a proper prefix is smaller.
    Lex,
    /// Words of smaller degree are larger; ties letter-by-letter.
    RevDegLex,
}

/// How the planar leaf permutations are compared once all words agree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PermMode {
    /// At the first differing position, the permutation with the smaller
    /// entry belongs to the greater monomial.
    RevLex,
    /// At the first differing position, the smaller entry is smaller.
    Lex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderConfig {
    PathLex { word_mode: WordMode, perm_mode: PermMode },
    ForestLex { root_first: bool },
}

impl Default for OrderConfig {
    fn default() -> Self {
        OrderConfig::PathLex {
            word_mode: WordMode::DegLex,
            perm_mode: PermMode::RevLex,
        }
    }
}

/// A configured total order on tree monomials of each arity. Snapshots the
/// generator precedences, so it can be passed around freely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialOrder {
    config: OrderConfig,
    prec: Vec<i32>,
}

/// The injective path fingerprint of a monomial: one generator word per
/// leaf (indexed by leaf label, root vertex first) and the leaf labels in
/// planar left-to-right order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathFingerprint {
    pub words: Vec<Vec<GenId>>,
    pub perm: Vec<u32>,
}

/// Computes the path fingerprint of a canonical monomial.
pub fn fingerprint(alpha: &TreeMonomial) -> PathFingerprint {
    let n = alpha.arity() as usize;
    let mut words = vec![Vec::new(); n];
    let mut perm = Vec::with_capacity(n);
    let mut path = Vec::new();
    walk(alpha, &mut path, &mut words, &mut perm);
    return PathFingerprint { words, perm };

    fn walk(t: &TreeMonomial, path: &mut Vec<GenId>, words: &mut [Vec<GenId>], perm: &mut Vec<u32>) {
        match t {
            TreeMonomial::Leaf(l) => {
                words[(*l - 1) as usize] = path.clone();
                perm.push(*l);
            }
            TreeMonomial::Vertex { gen, children } => {
                path.push(*gen);
                for c in children {
                    walk(c, path, words, perm);
                }
                path.pop();
            }
        }
    }
}

/// Compares finite sets of positive integers, given as sorted slices.
/// At the first differing position the set with the smaller element is the
/// greater one, so `{1..k}` is the largest subset of cardinality `k`; a
/// proper prefix is smaller, so `{1..n} < {1..m}` whenever `n < m`.
pub fn compare_leaf_sets(i: &[u32], j: &[u32]) -> Ordering {
    for (a, b) in i.iter().zip(j.iter()) {
        match a.cmp(b) {
            Ordering::Equal => continue,
            Ordering::Less => return Ordering::Greater,
            Ordering::Greater => return Ordering::Less,
        }
    }
    i.len().cmp(&j.len())
}

impl MonomialOrder {
    pub fn new(config: OrderConfig, gens: &GeneratorSet) -> Self {
        MonomialOrder {
            config,
            prec: gens.precedences(),
        }
    }

    pub fn config(&self) -> OrderConfig {
        self.config
    }

    fn cmp_gen(&self, a: GenId, b: GenId) -> Ordering {
        self.prec[a.0 as usize].cmp(&self.prec[b.0 as usize])
    }

    fn cmp_word(&self, a: &[GenId], b: &[GenId], mode: WordMode) -> Ordering {
        let letters = |x: &[GenId], y: &[GenId]| -> Ordering {
            for (p, q) in x.iter().zip(y.iter()) {
                let c = self.cmp_gen(*p, *q);
                if c != Ordering::Equal {
                    return c;
                }
            }
            Ordering::Equal
        };
        match mode {
            WordMode::DegLex => a.len().cmp(&b.len()).then_with(|| letters(a, b)),
            WordMode::RevDegLex => b.len().cmp(&a.len()).then_with(|| letters(a, b)),
            WordMode::Lex => letters(a, b).then_with(|| a.len().cmp(&b.len())),
        }
    }

    fn cmp_perm(&self, a: &[u32], b: &[u32], mode: PermMode) -> Ordering {
        for (p, q) in a.iter().zip(b.iter()) {
            if p != q {
                return match mode {
                    PermMode::RevLex => q.cmp(p),
                    PermMode::Lex => p.cmp(q),
                };
            }
        }
        Ordering::Equal
    }

    /// Total order on canonical monomials: smaller arity is always less;
    /// within one arity the configured family decides. `Equal` only for
    /// structurally equal monomials.
    pub fn compare(&self, a: &TreeMonomial, b: &TreeMonomial) -> Ordering {
        let c = a.arity().cmp(&b.arity());
        if c != Ordering::Equal {
            return c;
        }
        // The degenerate tree sits strictly below every vertex-bearing
        // arity-1 monomial in all configurations.
        match (a.is_leaf(), b.is_leaf()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            (false, false) => {}
        }
        match self.config {
            OrderConfig::PathLex { word_mode, perm_mode } => {
                let fa = fingerprint(a);
                let fb = fingerprint(b);
                for (wa, wb) in fa.words.iter().zip(fb.words.iter()) {
                    let c = self.cmp_word(wa, wb, word_mode);
                    if c != Ordering::Equal {
                        return c;
                    }
                }
                self.cmp_perm(&fa.perm, &fb.perm, perm_mode)
            }
            OrderConfig::ForestLex { root_first } => self.cmp_forest(a, b, root_first),
        }
    }

    fn cmp_forest(&self, a: &TreeMonomial, b: &TreeMonomial, root_first: bool) -> Ordering {
        let sets = || compare_leaf_sets(&a.leaf_set(), &b.leaf_set());
        match (a, b) {
            (TreeMonomial::Leaf(_), TreeMonomial::Leaf(_)) => sets(),
            (TreeMonomial::Leaf(_), TreeMonomial::Vertex { .. }) => {
                if root_first {
                    Ordering::Less
                } else {
                    sets().then(Ordering::Less)
                }
            }
            (TreeMonomial::Vertex { .. }, TreeMonomial::Leaf(_)) => {
                if root_first {
                    Ordering::Greater
                } else {
                    sets().then(Ordering::Greater)
                }
            }
            (
                TreeMonomial::Vertex { gen: ga, children: ca },
                TreeMonomial::Vertex { gen: gb, children: cb },
            ) => {
                let head = if root_first {
                    self.cmp_gen(*ga, *gb).then_with(sets)
                } else {
                    sets().then_with(|| self.cmp_gen(*ga, *gb))
                };
                if head != Ordering::Equal {
                    return head;
                }
                for (x, y) in ca.iter().zip(cb.iter()) {
                    let c = compare_leaf_sets(&x.leaf_set(), &y.leaf_set());
                    if c != Ordering::Equal {
                        return c;
                    }
                    let c = self.cmp_forest(x, y, root_first);
                    if c != Ordering::Equal {
                        return c;
                    }
                }
                Ordering::Equal
            }
        }
    }

    /// Maximum of a nonempty monomial iterator under this order.
    pub fn max<'a>(&self, iter: impl Iterator<Item = &'a TreeMonomial>) -> Option<&'a TreeMonomial> {
        iter.reduce(|best, t| {
            if self.compare(t, best) == Ordering::Greater {
                t
            } else {
                best
            }
        })
    }
}

/// One violated monotonicity instance, reported by the admissibility check.
#[derive(Debug, Clone)]
pub struct AdmissibilityViolation {
    pub alpha: TreeMonomial,
    pub alpha_bigger: TreeMonomial,
    pub beta: TreeMonomial,
    pub beta_bigger: TreeMonomial,
    pub composed_small: TreeMonomial,
    pub composed_big: TreeMonomial,
}

/// Deterministic split-mix generator for the randomized suites.
#[derive(Debug, Clone)]
pub struct SplitMix64(pub u64);

impl SplitMix64 {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform value in `0..bound` (bound > 0).
    pub fn below(&mut self, bound: usize) -> usize {
        (self.next_u64() % bound as u64) as usize
    }
}

/// A uniform-ish random canonical monomial with the given sorted leaf
/// labels, built by recursive splitting. The label count must be a
/// realizable arity for the alphabet (see [`realizable_arities`]).
/// Arity-1 generators are applied with bounded depth so generation
/// terminates.
pub fn random_monomial(gens: &GeneratorSet, labels: &[u32], rng: &mut SplitMix64) -> TreeMonomial {
    assert!(!labels.is_empty());
    let realizable: Vec<bool> = {
        let bound = labels.len() as u32;
        let ok = realizable_arities(gens, bound);
        let mut v = vec![false; (bound + 1) as usize];
        for n in ok {
            v[n as usize] = true;
        }
        v
    };
    let mut unary_budget = 2u32;
    return build(gens, labels, rng, &realizable, &mut unary_budget);

    /// Can `len` leaves split into `k` nonempty realizable blocks?
    fn splittable(len: usize, k: usize, realizable: &[bool]) -> bool {
        if k == 0 {
            return len == 0;
        }
        (1..=len + 1 - k).any(|first| realizable[first] && splittable(len - first, k - 1, realizable))
    }

    fn build(
        gens: &GeneratorSet,
        labels: &[u32],
        rng: &mut SplitMix64,
        realizable: &[bool],
        unary_budget: &mut u32,
    ) -> TreeMonomial {
        let candidates: Vec<GenId> = gens
            .ids()
            .filter(|&g| {
                let k = gens.arity(g) as usize;
                k <= labels.len()
                    && (k > 1 || *unary_budget > 0)
                    && splittable(labels.len(), k, realizable)
            })
            .collect();
        if labels.len() == 1 {
            let use_leaf = candidates.is_empty() || rng.below(2) == 0;
            if use_leaf {
                return TreeMonomial::Leaf(labels[0]);
            }
        }
        assert!(
            !candidates.is_empty(),
            "arity {} is not realizable over this alphabet",
            labels.len()
        );
        let gid = candidates[rng.below(candidates.len())];
        let k = gens.arity(gid) as usize;
        if k == 1 {
            *unary_budget -= 1;
        }
        // random surjection of the remaining labels onto the k blocks; the
        // first label opens block 1, minima stay increasing by opening
        // blocks in label order; retried until every block is a nonempty
        // realizable size
        loop {
            let mut blocks: Vec<Vec<u32>> = vec![Vec::new(); k];
            let mut opened = 0usize;
            for &l in labels {
                let choice = if opened < k {
                    // may open the next block or join an open one
                    rng.below(opened + 1)
                } else {
                    rng.below(opened)
                };
                if choice == opened && opened < k {
                    blocks[opened].push(l);
                    opened += 1;
                } else {
                    blocks[choice.min(opened - 1)].push(l);
                }
            }
            if blocks
                .iter()
                .any(|b| b.is_empty() || !realizable[b.len()])
            {
                continue;
            }
            let children = blocks
                .iter()
                .map(|b| build(gens, b, rng, realizable, unary_budget))
                .collect();
            return TreeMonomial::Vertex { gen: gid, children };
        }
    }
}

/// Arities up to `bound` for which the free operad has monomials: reachable
/// from 1 by repeatedly spending `arity - 1` extra leaves per generator.
pub fn realizable_arities(gens: &GeneratorSet, bound: u32) -> Vec<u32> {
    let mut reachable = vec![false; (bound + 1) as usize];
    reachable[1] = true;
    let mut frontier = vec![1u32];
    while let Some(n) = frontier.pop() {
        for (_, g) in gens.iter() {
            let next = n + g.arity - 1;
            if next <= bound && !reachable[next as usize] {
                reachable[next as usize] = true;
                frontier.push(next);
            }
        }
    }
    (1..=bound).filter(|&n| reachable[n as usize]).collect()
}

/// Randomized check of the admissibility axioms (composition monotonicity
/// in both arguments plus arity dominance). Returns the first violating
/// tuple, if any. Deterministic for a fixed seed.
#[allow(clippy::result_large_err)]
pub fn validate_admissibility(
    order: &MonomialOrder,
    gens: &GeneratorSet,
    samples: usize,
    seed: u64,
) -> Result<(), Box<AdmissibilityViolation>> {
    let mut rng = SplitMix64(seed);
    // sample outer and inner arities that the alphabet can realize
    let outer: Vec<u32> = realizable_arities(gens, 5)
        .into_iter()
        .filter(|&n| n >= 2)
        .collect();
    let inner = realizable_arities(gens, 4);
    if outer.is_empty() {
        return Ok(()); // only the unit exists; nothing to compose
    }
    for _ in 0..samples {
        let n = outer[rng.below(outer.len())];
        let m = inner[rng.below(inner.len())];
        let outer_labels: Vec<u32> = (1..=n).collect();
        let inner_labels: Vec<u32> = (1..=m).collect();
        let a1 = random_monomial(gens, &outer_labels, &mut rng);
        let a2 = random_monomial(gens, &outer_labels, &mut rng);
        let b1 = random_monomial(gens, &inner_labels, &mut rng);
        let b2 = random_monomial(gens, &inner_labels, &mut rng);
        let (alpha, alpha_bigger) = match order.compare(&a1, &a2) {
            Ordering::Greater => (a2, a1),
            _ => (a1, a2),
        };
        let (beta, beta_bigger) = match order.compare(&b1, &b2) {
            Ordering::Greater => (b2, b1),
            _ => (b1, b2),
        };
        let i = 1 + rng.below(n as usize) as u32;
        let shuffles = enumerate_shuffles(m, n, i);
        let s = &shuffles[rng.below(shuffles.len())];
        let small = compose(&alpha, s, &beta).expect("valid composition");
        let big = compose(&alpha_bigger, s, &beta_bigger).expect("valid composition");
        if order.compare(&small, &big) == Ordering::Greater {
            return Err(Box::new(AdmissibilityViolation {
                alpha,
                alpha_bigger,
                beta,
                beta_bigger,
                composed_small: small,
                composed_big: big,
            }));
        }
        // arity dominance
        if n != m {
            let (lo, hi) = if n < m {
                (&alpha, &beta)
            } else {
                (&beta, &alpha)
            };
            assert_eq!(
                order.compare(lo, hi),
                Ordering::Less,
                "arity dominance violated"
            );
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_element;
    use crate::trees::{enumerate_tree_monomials, Generator};
    use crate::Rat;
    use std::cmp::Ordering::*;

    fn gens(defs: &[(&str, u32)]) -> GeneratorSet {
        GeneratorSet::new(
            defs.iter()
                .enumerate()
                .map(|(i, (n, a))| Generator {
                    name: n.to_string(),
                    arity: *a,
                    precedence: i as i32,
                })
                .collect(),
        )
        .unwrap()
    }

    fn mono(g: &GeneratorSet, s: &str) -> TreeMonomial {
        let el = parse_element::<Rat>(s, g).unwrap();
        let t = el.support().next().unwrap().clone();
        t
    }

    fn default_order(g: &GeneratorSet) -> MonomialOrder {
        MonomialOrder::new(OrderConfig::default(), g)
    }

    #[test]
    fn fingerprint_examples() {
        let g = gens(&[("mu", 2)]);
        let f = fingerprint(&mono(&g, "mu(mu(1,2),3)"));
        let m = GenId(0);
        assert_eq!(f.words, vec![vec![m, m], vec![m, m], vec![m]]);
        assert_eq!(f.perm, vec![1, 2, 3]);

        let f = fingerprint(&mono(&g, "mu(mu(1,3),2)"));
        assert_eq!(f.words, vec![vec![m, m], vec![m], vec![m, m]]);
        assert_eq!(f.perm, vec![1, 3, 2]);

        let f = fingerprint(&TreeMonomial::Leaf(1));
        assert_eq!(f.words, vec![Vec::<GenId>::new()]);
        assert_eq!(f.perm, vec![1]);
    }

    #[test]
    fn path_lex_com_chain() {
        let g = gens(&[("mu", 2)]);
        let o = default_order(&g);
        let a = mono(&g, "mu(mu(1,2),3)");
        let b = mono(&g, "mu(mu(1,3),2)");
        let c = mono(&g, "mu(1,mu(2,3))");
        assert_eq!(o.compare(&a, &b), Greater);
        assert_eq!(o.compare(&b, &c), Greater);
        assert_eq!(o.compare(&a, &c), Greater);
        assert_eq!(o.compare(&a, &a), Equal);
    }

    #[test]
    fn path_lex_two_generator_rule() {
        // with generators ordered m1 < m2, outer decoration decides first,
        // then the inner one
        let g = gens(&[("m1", 2), ("m2", 2)]);
        let o = default_order(&g);
        let outer_hi = mono(&g, "m2(m1(1,2),3)");
        let outer_lo = mono(&g, "m1(m2(1,2),3)");
        assert_eq!(o.compare(&outer_hi, &outer_lo), Greater);
        let inner_hi = mono(&g, "m2(m2(1,2),3)");
        let inner_lo = mono(&g, "m2(m1(1,2),3)");
        assert_eq!(o.compare(&inner_hi, &inner_lo), Greater);
    }

    #[test]
    fn path_lex_permutation_tiebreak() {
        // equal word sequences; the reverse-lex rule on leaf permutations
        // puts the smaller entry first
        let g = gens(&[("mu", 2)]);
        let o = default_order(&g);
        let p12 = mono(&g, "mu(mu(1,2),mu(3,4))");
        let p13 = mono(&g, "mu(mu(1,3),mu(2,4))");
        let p14 = mono(&g, "mu(mu(1,4),mu(2,3))");
        assert_eq!(o.compare(&p12, &p13), Greater);
        assert_eq!(o.compare(&p13, &p14), Greater);
        // plain lex mode reverses those
        let lex = MonomialOrder::new(
            OrderConfig::PathLex {
                word_mode: WordMode::DegLex,
                perm_mode: PermMode::Lex,
            },
            &g,
        );
        assert_eq!(lex.compare(&p12, &p13), Less);
    }

    #[test]
    fn arity_dominance_all_configs() {
        let g = gens(&[("mu", 2), ("w", 3)]);
        let configs = [
            OrderConfig::PathLex {
                word_mode: WordMode::DegLex,
                perm_mode: PermMode::RevLex,
            },
            OrderConfig::PathLex {
                word_mode: WordMode::Lex,
                perm_mode: PermMode::Lex,
            },
            OrderConfig::PathLex {
                word_mode: WordMode::RevDegLex,
                perm_mode: PermMode::RevLex,
            },
            OrderConfig::ForestLex { root_first: false },
            OrderConfig::ForestLex { root_first: true },
        ];
        let mut rng = SplitMix64(7);
        for cfg in configs {
            let o = MonomialOrder::new(cfg, &g);
            for _ in 0..200 {
                let n = 1 + rng.below(4) as u32;
                let m = (n + 1) + rng.below(3) as u32;
                let small = random_monomial(&g, &(1..=n).collect::<Vec<_>>(), &mut rng);
                let big = random_monomial(&g, &(1..=m).collect::<Vec<_>>(), &mut rng);
                assert_eq!(o.compare(&small, &big), Less);
            }
        }
    }

    #[test]
    fn leaf_set_rule() {
        // prefix extension is larger
        assert_eq!(compare_leaf_sets(&[1, 2, 3], &[1, 2]), Greater);
        // the full interval {1..k} beats every other subset of size k
        let universe: Vec<u32> = (1..=6).collect();
        for k in 1..=3usize {
            let full: Vec<u32> = (1..=k as u32).collect();
            subsets(&universe, k, &mut |s| {
                if s != full.as_slice() {
                    assert_eq!(compare_leaf_sets(&full, s), Greater, "{s:?}");
                }
            });
        }
        // smaller elements make greater sets
        assert_eq!(compare_leaf_sets(&[1, 3], &[2, 3]), Greater);
        assert_eq!(compare_leaf_sets(&[1, 3], &[1, 2]), Less);
        assert_eq!(compare_leaf_sets(&[2, 4], &[2, 4]), Equal);

        fn subsets(u: &[u32], k: usize, f: &mut impl FnMut(&[u32])) {
            fn rec(u: &[u32], k: usize, start: usize, cur: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
                if cur.len() == k {
                    f(cur);
                    return;
                }
                for i in start..u.len() {
                    cur.push(u[i]);
                    rec(u, k, i + 1, cur, f);
                    cur.pop();
                }
            }
            rec(u, k, 0, &mut Vec::new(), f);
        }
    }

    #[test]
    fn forest_lex_examples() {
        let g = gens(&[("a", 2), ("b", 2)]);
        let o = MonomialOrder::new(OrderConfig::ForestLex { root_first: false }, &g);
        // root decoration decides before anything inside
        assert_eq!(
            o.compare(&mono(&g, "b(a(1,2),3)"), &mono(&g, "a(b(1,3),2)")),
            Greater
        );
        // equal roots: the first child's leaf set decides, independent of
        // the inner decorations
        assert_eq!(
            o.compare(&mono(&g, "a(a(1,2),3)"), &mono(&g, "a(b(1,3),2)")),
            Greater
        );
        assert_eq!(
            o.compare(&mono(&g, "a(a(1,3),2)"), &mono(&g, "a(1,a(2,3))")),
            Greater
        );
        // one-generator chain agrees with the path order here
        let one = gens(&[("mu", 2)]);
        let fo = MonomialOrder::new(OrderConfig::ForestLex { root_first: false }, &one);
        let po = default_order(&one);
        let ms = enumerate_tree_monomials(&one, 3, 2);
        for x in &ms {
            for y in &ms {
                assert_eq!(fo.compare(x, y), po.compare(x, y));
            }
        }
    }

    #[test]
    fn degenerate_tree_below_unary_chains() {
        let g = gens(&[("u", 1)]);
        let unit = TreeMonomial::Leaf(1);
        let chain = mono(&g, "u(1)");
        for cfg in [
            OrderConfig::default(),
            OrderConfig::PathLex {
                word_mode: WordMode::RevDegLex,
                perm_mode: PermMode::RevLex,
            },
            OrderConfig::ForestLex { root_first: false },
            OrderConfig::ForestLex { root_first: true },
        ] {
            let o = MonomialOrder::new(cfg, &g);
            assert_eq!(o.compare(&unit, &chain), Less);
            assert_eq!(o.compare(&chain, &unit), Greater);
        }
    }

    /// Reference path-lex comparison built from a flat parent-pointer
    /// encoding, independent of the fingerprint walk.
    fn reference_path_compare(
        o: &MonomialOrder,
        g: &GeneratorSet,
        x: &TreeMonomial,
        y: &TreeMonomial,
    ) -> Ordering {
        fn words_by_parents(g: &GeneratorSet, t: &TreeMonomial) -> (Vec<Vec<i32>>, Vec<u32>) {
            // flatten: nodes ordered by an explicit queue, remembering parents
            #[derive(Clone)]
            enum N {
                V(GenId, usize),
                L(u32, usize),
            }
            let mut nodes: Vec<N> = Vec::new();
            let mut stack: Vec<(*const TreeMonomial, usize)> = vec![(t as *const _, usize::MAX)];
            let mut order_leaves: Vec<u32> = Vec::new();
            // depth-first, explicitly
            fn visit(
                t: &TreeMonomial,
                parent: usize,
                nodes: &mut Vec<N>,
                order_leaves: &mut Vec<u32>,
            ) {
                match t {
                    TreeMonomial::Leaf(l) => {
                        nodes.push(N::L(*l, parent));
                        order_leaves.push(*l);
                    }
                    TreeMonomial::Vertex { gen, children } => {
                        let me = nodes.len();
                        nodes.push(N::V(*gen, parent));
                        for c in children {
                            visit(c, me, nodes, order_leaves);
                        }
                    }
                }
            }
            stack.clear();
            visit(t, usize::MAX, &mut nodes, &mut order_leaves);
            let n = t.arity() as usize;
            let mut words: Vec<Vec<i32>> = vec![Vec::new(); n];
            for node in &nodes {
                if let N::L(l, mut p) = node {
                    let mut w = Vec::new();
                    while p != usize::MAX {
                        match &nodes[p] {
                            N::V(gid, pp) => {
                                w.push(g.get(*gid).precedence);
                                p = *pp;
                            }
                            N::L(..) => unreachable!(),
                        }
                    }
                    w.reverse();
                    words[(*l - 1) as usize] = w;
                }
            }
            (words, order_leaves)
        }
        let c = x.arity().cmp(&y.arity());
        if c != Ordering::Equal {
            return c;
        }
        let (wx, px) = words_by_parents(g, x);
        let (wy, py) = words_by_parents(g, y);
        for (a, b) in wx.iter().zip(wy.iter()) {
            let c = a.len().cmp(&b.len()).then_with(|| a.cmp(b));
            if c != Ordering::Equal {
                return c;
            }
        }
        for (a, b) in px.iter().zip(py.iter()) {
            if a != b {
                return b.cmp(a);
            }
        }
        let _ = o;
        Ordering::Equal
    }

    #[test]
    fn path_lex_agrees_with_reference() {
        let g = gens(&[("a", 2), ("b", 2)]);
        let o = default_order(&g);
        let mut ms = Vec::new();
        for n in 1..=4u32 {
            ms.extend(enumerate_tree_monomials(&g, n, 3));
        }
        for x in &ms {
            for y in &ms {
                assert_eq!(
                    o.compare(x, y),
                    reference_path_compare(&o, &g, x, y),
                    "{x} vs {y}"
                );
            }
        }
    }

    #[test]
    fn fingerprint_injective_small() {
        let g = gens(&[("a", 2), ("b", 2)]);
        let mut seen = std::collections::BTreeMap::new();
        for n in 1..=4u32 {
            for t in enumerate_tree_monomials(&g, n, 3) {
                let f = fingerprint(&t);
                let key = (f.words, f.perm);
                if let Some(prev) = seen.insert(key, t.clone()) {
                    panic!("fingerprint collision: {prev} and {t}");
                }
            }
        }
    }

    #[test]
    fn total_order_axioms_randomized() {
        let g = gens(&[("a", 2), ("b", 2)]);
        let configs = [
            OrderConfig::default(),
            OrderConfig::PathLex {
                word_mode: WordMode::RevDegLex,
                perm_mode: PermMode::Lex,
            },
            OrderConfig::ForestLex { root_first: false },
            OrderConfig::ForestLex { root_first: true },
        ];
        let mut rng = SplitMix64(42);
        for cfg in configs {
            let o = MonomialOrder::new(cfg, &g);
            for _ in 0..2500 {
                let n = 2 + rng.below(5) as u32;
                let labels: Vec<u32> = (1..=n).collect();
                let x = random_monomial(&g, &labels, &mut rng);
                let y = random_monomial(&g, &labels, &mut rng);
                let z = random_monomial(&g, &labels, &mut rng);
                // antisymmetry and equality-iff-structural
                assert_eq!(o.compare(&x, &y), o.compare(&y, &x).reverse());
                assert_eq!(o.compare(&x, &y) == Equal, x == y);
                // transitivity
                if o.compare(&x, &y) != Greater && o.compare(&y, &z) != Greater {
                    assert_ne!(o.compare(&x, &z), Greater);
                }
            }
        }
    }

    #[test]
    fn admissibility_randomized_all_shipped_configs() {
        let g = gens(&[("a", 2), ("b", 2)]);
        let configs = [
            OrderConfig::default(),
            OrderConfig::PathLex {
                word_mode: WordMode::RevDegLex,
                perm_mode: PermMode::RevLex,
            },
            OrderConfig::PathLex {
                word_mode: WordMode::DegLex,
                perm_mode: PermMode::Lex,
            },
            OrderConfig::ForestLex { root_first: false },
            OrderConfig::ForestLex { root_first: true },
        ];
        for (i, cfg) in configs.into_iter().enumerate() {
            let o = MonomialOrder::new(cfg, &g);
            validate_admissibility(&o, &g, 2000, 1000 + i as u64)
                .unwrap_or_else(|v| panic!("config {cfg:?} violated admissibility: {v:?}"));
        }
    }

    #[test]
    fn pure_lex_words_fail_admissibility() {
        // extending a word can turn a proper prefix into an equal word,
        // handing the comparison to a later word that points the other
        // way; the runtime validation catches this and the configuration
        // is rejected for completion runs
        let g = gens(&[("a", 2), ("b", 2)]);
        let o = MonomialOrder::new(
            OrderConfig::PathLex {
                word_mode: WordMode::Lex,
                perm_mode: PermMode::RevLex,
            },
            &g,
        );
        assert!(validate_admissibility(&o, &g, 2000, 1001).is_err());
    }

    #[test]
    fn realizable_arities_guide_sampling() {
        let ternary = gens(&[("w", 3)]);
        assert_eq!(realizable_arities(&ternary, 8), vec![1, 3, 5, 7]);
        let mixed = gens(&[("w", 3), ("q", 4)]);
        assert_eq!(realizable_arities(&mixed, 8), vec![1, 3, 4, 5, 6, 7, 8]);
        // sampling over a ternary-only alphabet never requests impossible
        // block sizes
        let mut rng = SplitMix64(5);
        for _ in 0..200 {
            let t = random_monomial(&ternary, &[1, 2, 3, 4, 5], &mut rng);
            assert_eq!(t.arity(), 5);
            assert!(t.is_canonical());
        }
        // the admissibility gate runs on such alphabets
        let o = MonomialOrder::new(OrderConfig::ForestLex { root_first: false }, &ternary);
        validate_admissibility(&o, &ternary, 2000, 3).unwrap();
        let o4 = MonomialOrder::new(OrderConfig::default(), &mixed);
        validate_admissibility(&o4, &mixed, 2000, 4).unwrap();
    }

    #[test]
    fn admissibility_with_mixed_arities() {
        let g = gens(&[("mu", 2), ("w", 3)]);
        let o = default_order(&g);
        validate_admissibility(&o, &g, 2000, 99).unwrap();
    }
}
