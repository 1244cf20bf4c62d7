//! The algebraic layers are generic over the coefficient field; the same
//! completion runs over machine-word rationals and over big rationals.

use num_rational::Rational64;

use operad::algebra::OperadElement;
use operad::completion::{buchberger, is_groebner, CompletionOptions};
use operad::dsl::parse_element;
use operad::order::{MonomialOrder, OrderConfig};
use operad::trees::{Generator, GeneratorSet};
use operad::Rat;

fn nu_gens() -> GeneratorSet {
    GeneratorSet::new(vec![Generator {
        name: "nu".into(),
        arity: 2,
        precedence: 0,
    }])
    .unwrap()
}

#[test]
fn completion_agrees_across_scalar_types() {
    let g = nu_gens();
    let order = MonomialOrder::new(OrderConfig::default(), &g);
    let srcs = ["nu(nu(1,2),3) + nu(1,nu(2,3))", "nu(nu(1,3),2) - nu(1,nu(2,3))"];
    let opts = CompletionOptions {
        degree_cap: 4,
        reduce: true,
        threads: 1,
    };

    let small: Vec<OperadElement<Rational64>> =
        srcs.iter().map(|s| parse_element(s, &g).unwrap()).collect();
    let big: Vec<OperadElement<Rat>> =
        srcs.iter().map(|s| parse_element(s, &g).unwrap()).collect();

    let basis_small = buchberger(&small, &order, &opts).unwrap();
    let basis_big = buchberger(&big, &order, &opts).unwrap();
    assert_eq!(basis_small.elements.len(), basis_big.elements.len());
    for (a, b) in basis_small.elements.iter().zip(&basis_big.elements) {
        // identical supports and coefficients after converting
        let a_terms: Vec<(String, String)> = a
            .iter()
            .map(|(t, c)| (t.to_string(), c.to_string()))
            .collect();
        let b_terms: Vec<(String, String)> = b
            .iter()
            .map(|(t, c)| (t.to_string(), c.to_string()))
            .collect();
        assert_eq!(a_terms, b_terms);
    }
    let report = is_groebner(&basis_small.elements, &order, 4, 1).unwrap();
    assert!(report.is_basis);
}
