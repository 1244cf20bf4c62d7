//! Confluence in practice: once a set is a Groebner basis, the residue of
//! an element does not depend on the reduction strategy.

use operad::algebra::{normal_form, OperadElement};
use operad::dsl::parse_element;
use operad::order::{random_monomial, MonomialOrder, OrderConfig, SplitMix64};
use operad::trees::{find_embeddings, Generator, GeneratorSet, TreeMonomial};
use operad::Rat;

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

/// Reduction with arbitrary admissible choices: a random reducible
/// monomial of the support, a random divisor, a random occurrence.
fn random_strategy_nf(
    f: &El,
    relations: &[El],
    order: &MonomialOrder,
    rng: &mut SplitMix64,
) -> El {
    let leading: Vec<(TreeMonomial, Rat)> = relations
        .iter()
        .map(|g| {
            let (t, c) = g.leading_term(order).unwrap();
            (t.clone(), c.clone())
        })
        .collect();
    let mut current = f.clone();
    loop {
        let mut reducible: Vec<(TreeMonomial, usize, Vec<operad::trees::Embedding>)> = Vec::new();
        for t in current.support() {
            for (gi, (lt_g, _)) in leading.iter().enumerate() {
                let embs = find_embeddings(t, lt_g);
                if !embs.is_empty() {
                    reducible.push((t.clone(), gi, embs));
                }
            }
        }
        if reducible.is_empty() {
            return current;
        }
        let (t, gi, embs) = &reducible[rng.below(reducible.len())];
        let e = &embs[rng.below(embs.len())];
        let factor = current.coefficient(t).unwrap().clone() / leading[*gi].1.clone();
        for (m, c) in relations[*gi].iter() {
            let image = e.substitute(m).unwrap();
            current.add_term(image, Rat::from_integer(0.into()) - factor.clone() * c.clone());
        }
    }
}

#[test]
fn strategy_independence_under_a_basis() {
    // the As basis: six quadratic relations forming a Groebner basis
    let g = gens(&[("beta", 2), ("alpha", 2)]);
    let order = MonomialOrder::new(OrderConfig::default(), &g);
    let rels: Vec<El> = [
        "alpha(alpha(1,2),3) - alpha(1,alpha(2,3))",
        "alpha(beta(1,2),3) - beta(alpha(1,3),2)",
        "alpha(alpha(1,3),2) - alpha(1,beta(2,3))",
        "alpha(beta(1,3),2) - beta(alpha(1,2),3)",
        "beta(1,alpha(2,3)) - beta(beta(1,3),2)",
        "beta(1,beta(2,3)) - beta(beta(1,2),3)",
    ]
    .iter()
    .map(|s| parse_element(s, &g).unwrap())
    .collect();
    let mut rng = SplitMix64(0xfeed);
    let mut tested = 0usize;
    while tested < 1000 {
        let n = 2 + rng.below(4) as u32; // arity <= 5
        let labels: Vec<u32> = (1..=n).collect();
        let mut f = El::zero(n);
        for _ in 0..1 + rng.below(3) {
            let t = random_monomial(&g, &labels, &mut rng);
            let c = Rat::from_integer(((rng.below(9) as i64) - 4).into());
            f.add_term(t, c);
        }
        if f.is_zero() {
            continue;
        }
        let deterministic = normal_form(&f, &rels, &order);
        let random = random_strategy_nf(&f, &rels, &order, &mut rng);
        assert_eq!(deterministic, random, "strategies disagree on {f}");
        tested += 1;
    }
}
