//! Exact group-theoretic machinery for deciding when every map of a
//! surface-group space into a surface must collapse an involution orbit.
//!
//! The decision runs entirely inside the two-string braid group of the
//! target surface: a failure verdict is witnessed by an explicit
//! factorisation homomorphism checked relator by relator, and a holds
//! verdict by an algebraic obstruction (torsion, a parity count in the
//! class-2 nilpotent quotient, or an exhaustive mod-2 search) that can be
//! replayed on demand.
//!
//! Module map:
//! - [`words`]: free-group word algebra (reduction, substitution, exponent
//!   sums, commutators) plus the text syntax used by the CLI.
//! - [`presentations`]: the finite presentations in play (surface groups,
//!   pure/full braid presentations, the quaternion target) and relator
//!   verification against pluggable equality oracles.
//! - [`homz2`]: surjections onto Z/2, their equivalence moves,
//!   canonical representatives and class counting.
//! - [`quat16`]: the order-16 generalised quaternion group, which is the
//!   full two-string braid group of the projective plane.
//! - [`nilpotent`]: exact arithmetic in the class-2 quotient of the pure
//!   braid group of an orientable surface.
//! - [`wordsearch`]: a bounded, sound, incomplete word-problem solver that
//!   emits replayable derivation certificates.
//! - [`oracle`]: the case-by-case decision procedure and its certificates.
//! - [`cli`]: command-line front end.

pub mod cli;
pub mod homz2;
pub mod nilpotent;
pub mod oracle;
pub mod presentations;
pub mod quat16;
pub mod words;
pub mod wordsearch;
