//! Consequences of a computed basis: normal monomials, component
//! dimensions, PBW/Koszulness certification, and the local triangular
//! basis conditions.

use std::cmp::Ordering;

use thiserror::Error;

use crate::algebra::{normal_form, OperadElement};
use crate::coeff::Coefficient;
use crate::completion::{parallel_map, GroebnerBasis, Provenance};
use crate::trees::{
    compose, connected_subtrees, divides_at_root, enumerate_shuffles, GeneratorSet, TreeMonomial,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AnalysisError {
    #[error(
        "arity {arity} exceeds the range certified by the degree cap \
         (reliable up to arity {reliable}); rerun with a larger cap"
    )]
    BeyondCertifiedRange { arity: u32, reliable: u32 },
    #[error("basis is not certified complete up to its cap")]
    NotCertified,
    #[error(
        "dimension by arity is undefined with arity-1 generators: operation \
         degree is unbounded within each arity, so the count may be infinite"
    )]
    UnaryGenerators,
}

/// Largest arity whose dimension count is justified by a basis complete up
/// to the given operation degree cap: every monomial of that arity, and
/// hence every common multiple relevant to it, stays within the cap.
/// With a minimum generator arity of one, nothing beyond arity 1 is
/// certified, since operation degree is unbounded within an arity.
pub fn certified_arity_bound(gens: &GeneratorSet, degree_cap: u32) -> u32 {
    match gens.min_arity() {
        None => 1,
        Some(1) => 1,
        Some(a) => degree_cap * (a - 1) + 1,
    }
}

/// Per-arity dimensions of the quotient, with the arity beyond which the
/// degree cap stops certifying the counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionTable {
    pub dims: Vec<(u32, usize)>,
    pub unreliable_above: u32,
}

/// All arity-`n` tree monomials having no divisor among the leading terms
/// of the basis: representatives of a basis of the quotient component.
/// Generation is pruned: a partial tree whose newest vertex completes an
/// occurrence of a leading term is abandoned. Sorted ascending under the
/// basis order.
pub fn normal_monomials<C: Coefficient>(
    basis: &GroebnerBasis<C>,
    gens: &GeneratorSet,
    arity: u32,
) -> Result<Vec<TreeMonomial>, AnalysisError> {
    if !basis.complete_up_to_cap {
        return Err(AnalysisError::NotCertified);
    }
    if gens.min_arity() == Some(1) {
        return Err(AnalysisError::UnaryGenerators);
    }
    let reliable = certified_arity_bound(gens, basis.degree_cap);
    if arity > reliable {
        return Err(AnalysisError::BeyondCertifiedRange { arity, reliable });
    }
    let leading: Vec<&TreeMonomial> = basis
        .elements
        .iter()
        .map(|e| e.leading_term(&basis.order).expect("basis elements are nonzero").0)
        .collect();
    let labels: Vec<u32> = (1..=arity).collect();
    let mut out = generate(gens, &leading, &labels);
    out.sort_by(|a, b| basis.order.compare(a, b));
    return Ok(out);

    /// Normal monomials over the given label set. Every subtree of a
    /// normal monomial is normal, so children are drawn from the normal
    /// sets recursively; only occurrences topped by the new root must be
    /// re-checked.
    fn generate(
        gens: &GeneratorSet,
        leading: &[&TreeMonomial],
        labels: &[u32],
    ) -> Vec<TreeMonomial> {
        let mut out = Vec::new();
        if labels.len() == 1 {
            out.push(TreeMonomial::Leaf(labels[0]));
        }
        for (gid, g) in gens.iter() {
            let k = g.arity as usize;
            if k > labels.len() {
                continue;
            }
            for blocks in ordered_partitions(labels, k) {
                let child_lists: Vec<Vec<TreeMonomial>> = blocks
                    .iter()
                    .map(|b| generate(gens, leading, b))
                    .collect();
                if child_lists.iter().any(|l| l.is_empty()) {
                    continue;
                }
                let mut pick = vec![0usize; k];
                'combos: loop {
                    let children: Vec<TreeMonomial> = pick
                        .iter()
                        .enumerate()
                        .map(|(t, &p)| child_lists[t][p].clone())
                        .collect();
                    let candidate = TreeMonomial::Vertex { gen: gid, children };
                    if !leading.iter().any(|lt| divides_at_root(lt, &candidate)) {
                        out.push(candidate);
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

    fn ordered_partitions(labels: &[u32], k: usize) -> Vec<Vec<Vec<u32>>> {
        let mut out = Vec::new();
        let mut blocks: Vec<Vec<u32>> = Vec::new();
        rec(labels, 0, k, &mut blocks, &mut out);
        return out;

        fn rec(
            labels: &[u32],
            pos: usize,
            k: usize,
            blocks: &mut Vec<Vec<u32>>,
            out: &mut Vec<Vec<Vec<u32>>>,
        ) {
            if pos == labels.len() {
                if blocks.len() == k && blocks.iter().all(|b| !b.is_empty()) {
                    out.push(blocks.clone());
                }
                return;
            }
            let label = labels[pos];
            for b in 0..blocks.len() {
                blocks[b].push(label);
                rec(labels, pos + 1, k, blocks, out);
                blocks[b].pop();
            }
            if blocks.len() < k {
                blocks.push(vec![label]);
                rec(labels, pos + 1, k, blocks, out);
                blocks.pop();
            }
        }
    }
}

/// Dimension table for arities `1..=up_to`, truncated at the certified
/// bound; the caller decides how to present the truncation.
pub fn dimensions<C: Coefficient>(
    basis: &GroebnerBasis<C>,
    gens: &GeneratorSet,
    up_to: u32,
    threads: usize,
) -> Result<DimensionTable, AnalysisError> {
    let reliable = certified_arity_bound(gens, basis.degree_cap);
    let arities: Vec<u32> = (1..=up_to.min(reliable)).collect();
    let counts = parallel_map(threads, &arities, |&n| {
        normal_monomials(basis, gens, n).map(|v| v.len())
    });
    let mut dims = Vec::new();
    for (n, c) in arities.iter().zip(counts) {
        dims.push((*n, c?));
    }
    Ok(DimensionTable {
        dims,
        unreliable_above: reliable,
    })
}

/// Outcome of the quadraticity check: an operad presented by a basis of
/// operation degree exactly two is PBW, hence Koszul.
#[derive(Debug, Clone)]
pub enum PbwOutcome {
    Certified {
        /// Number of (quadratic) basis elements.
        element_count: usize,
    },
    Refused {
        /// First offending element index.
        index: usize,
        op_degree: u32,
        provenance: Box<Provenance>,
    },
}

/// Certifies the basis as quadratic (every element has operation degree
/// exactly two), or reports the first element that breaks quadraticity.
/// Requires a basis certified complete at its cap.
pub fn pbw_certificate<C: Coefficient>(basis: &GroebnerBasis<C>) -> Result<PbwOutcome, AnalysisError> {
    if !basis.complete_up_to_cap {
        return Err(AnalysisError::NotCertified);
    }
    for (i, el) in basis.elements.iter().enumerate() {
        let degs: Vec<u32> = el.support().map(|t| t.op_degree()).collect();
        if degs.iter().any(|&d| d != 2) {
            let op_degree = *degs.iter().find(|&&d| d != 2).unwrap();
            return Ok(PbwOutcome::Refused {
                index: i,
                op_degree,
                provenance: Box::new(basis.meta[i].provenance.clone()),
            });
        }
    }
    Ok(PbwOutcome::Certified {
        element_count: basis.elements.len(),
    })
}

/// A violation reported by [`check_triangular`].
#[derive(Debug, Clone)]
pub enum TriangularViolation {
    /// A composition of two normal monomials whose normal form contains a
    /// monomial not strictly smaller than the composition.
    Composition {
        alpha: TreeMonomial,
        beta: TreeMonomial,
        slot: u32,
        composed: TreeMonomial,
        offending: TreeMonomial,
    },
    /// A monomial whose membership disagrees with the local criterion:
    /// every subtree with at most `k` vertices is normal, yet the monomial
    /// is not normal itself (or vice versa).
    Local {
        monomial: TreeMonomial,
        is_normal: bool,
        all_small_subtrees_normal: bool,
    },
}

#[derive(Debug, Clone)]
pub struct TriangularReport {
    pub k: u32,
    pub up_to: u32,
    pub violations: Vec<TriangularViolation>,
}

impl TriangularReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Verifies the triangular-basis conditions for the set of normal
/// monomials up to the given arity: compositions of normal monomials
/// expand into strictly smaller normal monomials (unless already normal),
/// and membership is determined by subtrees with at most `k` vertices.
/// For a genuine Groebner basis with `k` at least the largest leading-term
/// vertex count, both checks pass.
pub fn check_triangular<C: Coefficient>(
    basis: &GroebnerBasis<C>,
    gens: &GeneratorSet,
    k: u32,
    up_to: u32,
) -> Result<TriangularReport, AnalysisError> {
    let order = &basis.order;
    let mut normal: Vec<Vec<TreeMonomial>> = Vec::new(); // by arity, 1-based at index-1
    for n in 1..=up_to {
        normal.push(normal_monomials(basis, gens, n)?);
    }
    let is_normal = |t: &TreeMonomial| -> bool {
        let n = t.arity();
        n <= up_to && normal[(n - 1) as usize].contains(t)
    };
    let mut violations = Vec::new();

    // condition on compositions of normal monomials
    for alpha in normal.iter().flatten() {
        for beta in normal.iter().flatten() {
            let n = alpha.arity();
            let m = beta.arity();
            if n + m - 1 > up_to {
                continue;
            }
            for i in 1..=n {
                for s in enumerate_shuffles(m, n, i) {
                    let composed = compose(alpha, &s, beta).expect("valid composition");
                    if is_normal(&composed) {
                        continue;
                    }
                    let nf = normal_form(
                        &OperadElement::<C>::monomial(composed.clone()),
                        &basis.elements,
                        order,
                    );
                    for (t, _) in nf.iter() {
                        if order.compare(t, &composed) != Ordering::Less {
                            violations.push(TriangularViolation::Composition {
                                alpha: alpha.clone(),
                                beta: beta.clone(),
                                slot: i,
                                composed: composed.clone(),
                                offending: t.clone(),
                            });
                        }
                    }
                }
            }
        }
    }

    // local membership criterion
    for n in 1..=up_to {
        for t in crate::trees::enumerate_tree_monomials(gens, n, max_op_degree_at(gens, n)) {
            if t.is_leaf() {
                continue;
            }
            let member = is_normal(&t);
            let all_small = connected_subtrees(&t, Some(k))
                .into_iter()
                .all(|occ| is_normal(&occ.restricted));
            if member != all_small {
                violations.push(TriangularViolation::Local {
                    monomial: t,
                    is_normal: member,
                    all_small_subtrees_normal: all_small,
                });
            }
        }
    }

    Ok(TriangularReport {
        k,
        up_to,
        violations,
    })
}

/// Largest possible operation degree of an arity-`n` monomial, assuming no
/// arity-1 generators (each vertex consumes at least one extra leaf).
fn max_op_degree_at(gens: &GeneratorSet, n: u32) -> u32 {
    match gens.min_arity() {
        Some(a) if a >= 2 => (n - 1) / (a - 1),
        _ => n - 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::OperadElement;
    use crate::completion::{buchberger, CompletionOptions};
    use crate::dsl::parse_element;
    use crate::order::{MonomialOrder, OrderConfig};
    use crate::trees::{enumerate_tree_monomials, find_embeddings, Generator, GeneratorSet};
    use crate::Rat;

    type El = OperadElement<Rat>;

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

    fn el(g: &GeneratorSet, s: &str) -> El {
        parse_element(s, g).unwrap()
    }

    fn complete(g: &GeneratorSet, rels: &[El], cap: u32) -> GroebnerBasis<Rat> {
        let o = MonomialOrder::new(OrderConfig::default(), g);
        buchberger(
            rels,
            &o,
            &CompletionOptions { degree_cap: cap, reduce: true, threads: 1 },
        )
        .unwrap()
    }

    fn com_basis() -> (GeneratorSet, GroebnerBasis<Rat>) {
        let g = gens(&[("mu", 2)]);
        let rels = vec![
            el(&g, "mu(mu(1,2),3) - mu(1,mu(2,3))"),
            el(&g, "mu(mu(1,3),2) - mu(1,mu(2,3))"),
        ];
        let b = complete(&g, &rels, 6);
        (g, b)
    }

    fn anticom_basis() -> (GeneratorSet, GroebnerBasis<Rat>) {
        let g = gens(&[("nu", 2)]);
        let rels = vec![
            el(&g, "nu(nu(1,2),3) + nu(1,nu(2,3))"),
            el(&g, "nu(nu(1,3),2) - nu(1,nu(2,3))"),
        ];
        let b = complete(&g, &rels, 6);
        (g, b)
    }

    /// Unpruned oracle: enumerate every monomial and test divisibility
    /// occurrence by occurrence.
    fn dims_oracle(g: &GeneratorSet, basis: &GroebnerBasis<Rat>, n: u32) -> usize {
        let leads: Vec<_> = basis
            .elements
            .iter()
            .map(|e| e.leading_term(&basis.order).unwrap().0.clone())
            .collect();
        enumerate_tree_monomials(g, n, n.saturating_sub(1))
            .into_iter()
            .filter(|t| leads.iter().all(|lt| find_embeddings(t, lt).is_empty()))
            .count()
    }

    #[test]
    fn com_dimensions_all_one() {
        let (g, b) = com_basis();
        assert_eq!(certified_arity_bound(&g, b.degree_cap), 7);
        let table = dimensions(&b, &g, 6, 1).unwrap();
        assert_eq!(table.dims, (1..=6).map(|n| (n, 1)).collect::<Vec<_>>());
        let normals = normal_monomials(&b, &g, 4).unwrap();
        assert_eq!(normals.len(), 1);
        assert_eq!(normals[0], el(&g, "mu(1,mu(2,mu(3,4)))").support().next().unwrap().clone());
        for n in 1..=5 {
            assert_eq!(dims_oracle(&g, &b, n), normal_monomials(&b, &g, n).unwrap().len());
        }
    }

    #[test]
    fn anticom_dimensions_vanish_from_four() {
        let (g, b) = anticom_basis();
        let table = dimensions(&b, &g, 6, 1).unwrap();
        assert_eq!(
            table.dims,
            vec![(1, 1), (2, 1), (3, 1), (4, 0), (5, 0), (6, 0)]
        );
        assert!(normal_monomials(&b, &g, 4).unwrap().is_empty());
        for n in 1..=5 {
            assert_eq!(dims_oracle(&g, &b, n), normal_monomials(&b, &g, n).unwrap().len());
        }
    }

    /// Multilinear bracket-monomial count: recursive splitting with the
    /// two smallest labels separated, matching the published basis shape.
    fn lie_oracle(n: usize) -> u64 {
        fn b(n: usize) -> u64 {
            if n == 1 {
                return 1;
            }
            let mut total = 0;
            // the top bracket [A, B] with a1 in A and a2 in B; the other
            // n-2 labels split freely
            for j in 1..n {
                total += binom(n - 2, j - 1) * b(n - j) * b(j);
            }
            total
        }
        fn binom(n: usize, k: usize) -> u64 {
            if k > n {
                return 0;
            }
            let mut r = 1u64;
            for t in 0..k.min(n - k) {
                r = r * (n - t) as u64 / (t + 1) as u64;
            }
            r
        }
        b(n)
    }

    #[test]
    fn lie_dimensions_match_multilinear_oracle() {
        let g = gens(&[("br", 2)]);
        let jac = el(&g, "br(br(1,2),3) - br(br(1,3),2) - br(1,br(2,3))");
        let b = complete(&g, &[jac], 6);
        assert_eq!(b.elements.len(), 1);
        let table = dimensions(&b, &g, 6, 1).unwrap();
        let expected: Vec<(u32, usize)> = (1..=6)
            .map(|n| (n, lie_oracle(n as usize) as usize))
            .collect();
        assert_eq!(table.dims, expected);
        assert_eq!(
            table.dims.iter().map(|&(_, d)| d).collect::<Vec<_>>(),
            vec![1, 1, 2, 6, 24, 120]
        );
        // the recursion agrees with the factorial closed form
        for n in 1..=8 {
            let fact: u64 = (1..n as u64).product();
            assert_eq!(lie_oracle(n), fact);
        }
    }

    fn as_relations(g: &GeneratorSet) -> Vec<El> {
        vec![
            el(g, "alpha(alpha(1,2),3) - alpha(1,alpha(2,3))"),
            el(g, "alpha(beta(1,2),3) - beta(alpha(1,3),2)"),
            el(g, "alpha(alpha(1,3),2) - alpha(1,beta(2,3))"),
            el(g, "alpha(beta(1,3),2) - beta(alpha(1,2),3)"),
            el(g, "beta(1,alpha(2,3)) - beta(beta(1,3),2)"),
            el(g, "beta(1,beta(2,3)) - beta(beta(1,2),3)"),
        ]
    }

    #[test]
    fn as_normal_monomials_and_dimensions() {
        let g = gens(&[("beta", 2), ("alpha", 2)]); // alpha > beta
        let rels = as_relations(&g);
        let b = complete(&g, &rels, 6);
        assert_eq!(b.elements.len(), 6);
        let normals = normal_monomials(&b, &g, 3).unwrap();
        let expected: Vec<_> = [
            "alpha(1,alpha(2,3))",
            "alpha(1,beta(2,3))",
            "beta(alpha(1,3),2)",
            "beta(1,alpha(2,3))",
            "beta(alpha(1,2),3)",
            "beta(1,beta(2,3))",
        ]
        .iter()
        .map(|s| el(&g, s).support().next().unwrap().clone())
        .collect();
        let normals_set: std::collections::BTreeSet<_> = normals.into_iter().collect();
        let expected_set: std::collections::BTreeSet<_> = expected.into_iter().collect();
        assert_eq!(normals_set, expected_set);
        let table = dimensions(&b, &g, 5, 1).unwrap();
        assert_eq!(
            table.dims.iter().map(|&(_, d)| d).collect::<Vec<_>>(),
            vec![1, 2, 6, 24, 120]
        );
        for n in 1..=5 {
            assert_eq!(dims_oracle(&g, &b, n), normal_monomials(&b, &g, n).unwrap().len());
        }
    }

    #[test]
    fn pbw_outcomes() {
        let (_, com) = com_basis();
        assert!(matches!(
            pbw_certificate(&com).unwrap(),
            PbwOutcome::Certified { element_count: 2 }
        ));
        let (_, anticom) = anticom_basis();
        match pbw_certificate(&anticom).unwrap() {
            PbwOutcome::Refused {
                index, op_degree, ..
            } => {
                assert_eq!(index, 2);
                assert_eq!(op_degree, 3);
            }
            other => panic!("expected refusal, got {other:?}"),
        }
    }

    #[test]
    fn refuses_beyond_certified_range() {
        let g = gens(&[("mu", 2)]);
        let rels = vec![
            el(&g, "mu(mu(1,2),3) - mu(1,mu(2,3))"),
            el(&g, "mu(mu(1,3),2) - mu(1,mu(2,3))"),
        ];
        let b = complete(&g, &rels, 3);
        assert_eq!(certified_arity_bound(&g, 3), 4);
        assert!(normal_monomials(&b, &g, 4).is_ok());
        assert!(matches!(
            normal_monomials(&b, &g, 5),
            Err(AnalysisError::BeyondCertifiedRange { arity: 5, reliable: 4 })
        ));
        // the table silently stops at the certified bound
        let table = dimensions(&b, &g, 6, 1).unwrap();
        assert_eq!(table.dims.len(), 4);
        assert_eq!(table.unreliable_above, 4);
    }

    #[test]
    fn normal_monomials_are_fixed_by_normal_form() {
        let (g, b) = com_basis();
        for n in 1..=5u32 {
            for t in normal_monomials(&b, &g, n).unwrap() {
                let f = El::monomial(t.clone());
                assert_eq!(crate::algebra::normal_form(&f, &b.elements, &b.order), f);
            }
        }
    }

    #[test]
    fn triangular_checks_com_and_anticom() {
        let (g, com) = com_basis();
        let report = check_triangular(&com, &g, 2, 5).unwrap();
        assert!(report.passed(), "violations: {:?}", report.violations);

        let (ga, anticom) = anticom_basis();
        let report = check_triangular(&anticom, &ga, 3, 5).unwrap();
        assert!(report.passed(), "violations: {:?}", report.violations);

        // with the window too small the local criterion breaks at the
        // arity-4 comb: all its 2-vertex subtrees are normal, itself not
        let report = check_triangular(&anticom, &ga, 2, 5).unwrap();
        assert!(!report.passed());
        let comb = el(&ga, "nu(1,nu(2,nu(3,4)))").support().next().unwrap().clone();
        assert!(report.violations.iter().any(|v| matches!(
            v,
            TriangularViolation::Local { monomial, is_normal: false, all_small_subtrees_normal: true }
                if *monomial == comb
        )));
    }

    #[test]
    fn unary_generators_refuse_dimension_counts() {
        // arity-1 generators turn the operad into an associative algebra;
        // completion still works, but per-arity counting is refused
        let g = gens(&[("u", 1), ("v", 1)]);
        let o = MonomialOrder::new(OrderConfig::default(), &g);
        let comm = el(&g, "v(u(1)) - u(v(1))");
        let basis = buchberger(
            &[comm],
            &o,
            &CompletionOptions { degree_cap: 6, reduce: true, threads: 1 },
        )
        .unwrap();
        assert_eq!(basis.elements.len(), 1, "commuting letters complete at once");
        let report = crate::completion::is_groebner(&basis.elements, &o, 6, 1).unwrap();
        assert!(report.is_basis);
        assert_eq!(
            normal_monomials(&basis, &g, 1),
            Err(AnalysisError::UnaryGenerators)
        );
        assert_eq!(certified_arity_bound(&g, 6), 1);
    }

    #[test]
    fn pbw_implies_two_triangular() {
        // a certified quadratic basis passes the k = 2 conditions
        let g = gens(&[("beta", 2), ("alpha", 2)]);
        let b = complete(&g, &as_relations(&g), 6);
        assert!(matches!(pbw_certificate(&b).unwrap(), PbwOutcome::Certified { .. }));
        let report = check_triangular(&b, &g, 2, 4).unwrap();
        assert!(report.passed(), "violations: {:?}", report.violations);
    }
}
