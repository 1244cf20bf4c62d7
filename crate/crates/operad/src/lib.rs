//! Groebner bases for ideals in free shuffle operads.
//!
//! The library works with tree monomials (canonical planar decorated
//! rooted trees), admissible monomial orderings, exact-coefficient
//! elements, symmetric-group symmetrization, Buchberger completion with a
//! degree cap, and the downstream consequences: normal forms, component
//! dimensions and PBW/Koszulness certificates.
//!
//! The algebraic layers are generic over the coefficient field through
//! [`coeff::Coefficient`]; the concrete aliases below fix the exact
//! rational scalar used by the command-line driver.
//!
//! ```
//! use operad::completion::{buchberger, CompletionOptions};
//! use operad::analysis::normal_monomials;
//!
//! let src = "symmetric\n\
//!            generator mu 2 symmetric\n\
//!            relation mu(mu(1,2),3) - mu(1,mu(2,3))\n";
//! let p = operad::dsl::parse::<operad::Rat>(src).unwrap().presentation;
//! let basis = buchberger(
//!     &p.relations,
//!     &p.order(),
//!     &CompletionOptions { degree_cap: 6, reduce: true, threads: 1 },
//! )
//! .unwrap();
//! assert_eq!(basis.elements.len(), 2);
//! // one normal monomial per arity: the right combs
//! for n in 1..=6 {
//!     assert_eq!(normal_monomials(&basis, &p.generators, n).unwrap().len(), 1);
//! }
//! ```

pub mod algebra;
pub mod analysis;
pub mod coeff;
pub mod completion;
pub mod dsl;
pub mod order;
pub mod symmetric;
pub mod trees;

/// The default exact scalar: arbitrary-precision rationals.
pub type Rat = num_rational::BigRational;

/// An element over the default scalar.
pub type Element = algebra::OperadElement<Rat>;

/// A basis over the default scalar.
pub type Basis = completion::GroebnerBasis<Rat>;

/// A parsed presentation over the default scalar.
pub type Presentation = dsl::Presentation<Rat>;
