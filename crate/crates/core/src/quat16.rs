//! The generalised quaternion group of order 16, which is the full
//! two-string braid group of the projective plane, together with the
//! factorisation constructions targeting it.
//!
//! Elements are kept in the canonical form `x^a y^b` with `0 <= a < 8`,
//! `0 <= b < 2`, using `x^4 = y^2` and `y x y^-1 = x^-1`. Multiplication
//! is exact, so homomorphism verification here is a finite computation.
//!
//! The permutation map onto Z/2 is not printed anywhere as a formula on
//! `x, y`; its values are forced by the factorisation tables this module
//! implements: a table row sends a generator with image `1` to `x` or
//! `x^7 y`, so `x` must have permutation `1`, and a row with image `y` on
//! a generator of image `0` forces `y` to permutation `0`. With that
//! choice the kernel is `<x^2, y>`, the quaternion subgroup of order 8
//! playing the role of the pure braid group, and the full twist is `x^4`,
//! its unique element of order 2. Both facts are asserted by tests.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::homz2::Z2Hom;
use crate::presentations::{
    q16_presentation, EqualityOracle, GroupHom, Presentation, PresentationTag, RelatorStatus,
};
use crate::words::{Generator, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Q16Error {
    #[error("word uses a letter other than x, y")]
    Alphabet(String),
    #[error("the assignment is not surjective onto Z/2")]
    NotSurjective,
    #[error("the source has fundamental group Z/2: no factorisation exists")]
    TrivialDomainUnsupported,
    #[error("source presentation is not a surface group")]
    BadSource,
    #[error("no factorisation found by search for the even-genus case")]
    SearchExhausted,
}

/// `x^a y^b` in canonical form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Q16 {
    pub a: u8,
    pub b: u8,
}

pub const IDENTITY: Q16 = Q16 { a: 0, b: 0 };

impl Q16 {
    pub fn new(a: i64, b: i64) -> Self {
        // y^2 = x^4: surplus y's fold into the x-exponent.
        let b_red = b.rem_euclid(2);
        let surplus_pairs = (b - b_red) / 2;
        let a_red = (a + 4 * surplus_pairs).rem_euclid(8) as u8;
        Q16 {
            a: a_red,
            b: b_red as u8,
        }
    }

    pub fn x() -> Self {
        Q16 { a: 1, b: 0 }
    }

    pub fn y() -> Self {
        Q16 { a: 0, b: 1 }
    }

    pub fn is_identity(&self) -> bool {
        *self == IDENTITY
    }

    pub fn mul(&self, rhs: &Q16) -> Q16 {
        // (x^a1 y^b1)(x^a2 y^b2): pushing y past x^a2 inverts it, and
        // y^2 = x^4 when both b's are set.
        let a2 = if self.b == 1 { 8 - rhs.a } else { rhs.a } % 8;
        let mut a = (self.a + a2) % 8;
        let b = self.b ^ rhs.b;
        if self.b == 1 && rhs.b == 1 {
            a = (a + 4) % 8;
        }
        Q16 { a, b }
    }

    pub fn inverse(&self) -> Q16 {
        // Search-free: x^-a for b = 0; (x^a y)^-1 = x^{a+4} y.
        if self.b == 0 {
            Q16 {
                a: (8 - self.a) % 8,
                b: 0,
            }
        } else {
            Q16 {
                a: (self.a + 4) % 8,
                b: 1,
            }
        }
    }

    pub fn pow(&self, n: i64) -> Q16 {
        let base = if n >= 0 { *self } else { self.inverse() };
        let mut out = IDENTITY;
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Multiplicative order; always in {1, 2, 4, 8}.
    pub fn order(&self) -> u32 {
        let mut acc = *self;
        let mut n = 1;
        while !acc.is_identity() {
            acc = acc.mul(self);
            n += 1;
        }
        n
    }

    /// The strand-permutation map onto Z/2: `x` maps to 1, `y` to 0.
    pub fn perm(&self) -> u8 {
        self.a % 2
    }
}

impl fmt::Display for Q16 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (0, 0) => f.write_str("e"),
            (a, 0) => write!(f, "x^{a}"),
            (0, _) => f.write_str("y"),
            (a, _) => write!(f, "x^{a}*y"),
        }
    }
}

/// All 16 elements, in a fixed enumeration order.
pub fn all_elements() -> Vec<Q16> {
    let mut out = Vec::with_capacity(16);
    for b in 0..2u8 {
        for a in 0..8u8 {
            out.push(Q16 { a, b });
        }
    }
    out
}

/// Evaluate a word over the alphabet `{x, y}`.
pub fn eval_word(w: &Word) -> Result<Q16, Q16Error> {
    let x = Generator::named("x");
    let y = Generator::named("y");
    let mut acc = IDENTITY;
    for (g, e) in w.syllables() {
        let base = if *g == x {
            Q16::x()
        } else if *g == y {
            Q16::y()
        } else {
            return Err(Q16Error::Alphabet(g.token()));
        };
        acc = acc.mul(&base.pow(*e));
    }
    Ok(acc)
}

/// Parse an element in the printed form, e.g. `x^3*y`.
pub fn parse_element(s: &str) -> Result<Q16, Q16Error> {
    let w = Word::parse(s).map_err(|e| Q16Error::Alphabet(e.to_string()))?;
    eval_word(&w)
}

/// Exact equality oracle: a word over `{x, y}` is trivial iff it
/// multiplies out to the identity. Complete for this target.
pub struct Q16Oracle;

impl EqualityOracle for Q16Oracle {
    fn oracle_name(&self) -> String {
        "q16-multiplication".into()
    }
    fn check_identity(&self, w: &Word) -> RelatorStatus {
        match eval_word(w) {
            Ok(q) if q.is_identity() => RelatorStatus::Verified,
            Ok(q) => RelatorStatus::Refuted(format!("word multiplies to {q}")),
            Err(e) => RelatorStatus::Refuted(e.to_string()),
        }
    }
}

fn word_x(e: i64) -> Word {
    Word::syllable(Generator::named("x"), e)
}

fn word_xy(a: i64) -> Word {
    word_x(a).concat(&Word::generator(Generator::named("y")))
}

/// Image of a handle generator: `x` when its Z/2 value is 1, else `x^2`.
fn handle_image(value: u8) -> Word {
    if value == 1 {
        word_x(1)
    } else {
        word_x(2)
    }
}

/// Construct the factorisation through the order-16 group for a surface
/// source, given a surjective assignment onto Z/2. Every relator image is
/// verified by exact multiplication, and the permutation of each generator
/// image equals its assigned value.
pub fn build_phi_rp2(theta: &Z2Hom) -> Result<GroupHom, Q16Error> {
    if !theta.is_surjective() {
        return Err(Q16Error::NotSurjective);
    }
    let p = &theta.source;
    let mut images: BTreeMap<Generator, Word> = BTreeMap::new();
    match &p.tag {
        PresentationTag::SurfaceOrientable { .. } => {
            for g in &p.alphabet {
                images.insert(g.clone(), handle_image(theta.value(g)));
            }
        }
        PresentationTag::SurfaceNonorientableOdd { .. } => {
            let v = &p.alphabet[0];
            if theta.value(v) == 0 {
                images.insert(v.clone(), Word::identity());
                for g in &p.alphabet[1..] {
                    images.insert(g.clone(), handle_image(theta.value(g)));
                }
            } else {
                images.insert(v.clone(), word_xy(1));
                let a1 = &p.alphabet[1];
                let a2 = &p.alphabet[2];
                let (i1, i2) = match (theta.value(a1), theta.value(a2)) {
                    (1, 1) => (word_xy(7), word_xy(1)),
                    (0, 0) => (word_x(2), word_xy(0)),
                    (1, 0) => (word_xy(1), word_x(2)),
                    (0, 1) => (word_x(2), word_xy(1)),
                    _ => unreachable!(),
                };
                images.insert(a1.clone(), i1);
                images.insert(a2.clone(), i2);
                for g in &p.alphabet[3..] {
                    images.insert(g.clone(), handle_image(theta.value(g)));
                }
            }
        }
        PresentationTag::SurfaceNonorientableEven { .. } => {
            // The twisted-pair images are found by bounded search over the
            // sixteen elements, constrained by the permutation map, then
            // verified like everything else.
            let alpha = &p.alphabet[0];
            let beta = &p.alphabet[1];
            for g in &p.alphabet[2..] {
                images.insert(g.clone(), handle_image(theta.value(g)));
            }
            let ta = theta.value(alpha);
            let tb = theta.value(beta);
            let mut found = None;
            'search: for ia in all_elements() {
                if ia.perm() != ta {
                    continue;
                }
                for ib in all_elements() {
                    if ib.perm() != tb {
                        continue;
                    }
                    // twisted relator: ia ib ia ib^-1 must die
                    let t = ia.mul(&ib).mul(&ia).mul(&ib.inverse());
                    if t.is_identity() {
                        found = Some((ia, ib));
                        break 'search;
                    }
                }
            }
            let (ia, ib) = found.ok_or(Q16Error::SearchExhausted)?;
            images.insert(alpha.clone(), element_word(ia));
            images.insert(beta.clone(), element_word(ib));
        }
        _ => return Err(Q16Error::BadSource),
    }

    let hom = GroupHom {
        source: p.clone(),
        target_tag: q16_presentation().tag,
        images,
    };
    // Exactness check before handing the certificate out.
    for r in &hom.source.relators {
        let image = hom.apply(r).expect("images cover the alphabet");
        let q = eval_word(&image)?;
        if !q.is_identity() {
            return Err(Q16Error::SearchExhausted);
        }
    }
    for g in &hom.source.alphabet {
        let q = eval_word(&hom.images[g])?;
        if q.perm() != theta.value(g) {
            return Err(Q16Error::SearchExhausted);
        }
    }
    Ok(hom)
}

/// Canonical word for an element.
pub fn element_word(q: Q16) -> Word {
    let mut w = word_x(i64::from(q.a));
    if q.b == 1 {
        w = w.concat(&Word::generator(Generator::named("y")));
    }
    w
}

/// Plain-text multiplication table, one row per element.
pub fn multiplication_table() -> String {
    let elems = all_elements();
    let mut out = String::new();
    for u in &elems {
        let row: Vec<String> = elems.iter().map(|v| u.mul(v).to_string()).collect();
        out.push_str(&format!("{:6} | {}\n", u.to_string(), row.join(" ")));
    }
    out
}

/// The order-2 obstruction data: every element with nontrivial permutation
/// has order at least 4, so no involution can map onto the nontrivial
/// permutation class. Returns the lone order-2 element and the orders of
/// all permutation-1 elements.
pub fn torsion_obstruction_data() -> (Q16, Vec<(Q16, u32)>) {
    let mut order2 = Vec::new();
    let mut odd_side = Vec::new();
    for q in all_elements() {
        if q.order() == 2 {
            order2.push(q);
        }
        if q.perm() == 1 {
            odd_side.push((q, q.order()));
        }
    }
    assert_eq!(order2.len(), 1);
    (order2[0], odd_side)
}

/// Build the presentation this module realises, for interchange purposes.
pub fn presentation() -> Presentation {
    q16_presentation()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homz2::theta_from_named;
    use crate::presentations::{surface_group, verify_hom, SurfaceKind};

    #[test]
    fn sixteen_distinct_elements() {
        let elems = all_elements();
        assert_eq!(elems.len(), 16);
        let set: std::collections::HashSet<Q16> = elems.into_iter().collect();
        assert_eq!(set.len(), 16);
    }

    #[test]
    fn defining_relations_hold() {
        let x = Q16::x();
        let y = Q16::y();
        assert_eq!(x.pow(4), y.pow(2));
        assert_eq!(y.mul(&x).mul(&y.inverse()), x.inverse());
        // y x y^-1 = x^7
        assert_eq!(y.mul(&x).mul(&y.inverse()), Q16 { a: 7, b: 0 });
    }

    #[test]
    fn identity_laws() {
        for u in all_elements() {
            assert_eq!(IDENTITY.mul(&u), u);
            assert_eq!(u.mul(&IDENTITY), u);
            assert!(u.mul(&u.inverse()).is_identity());
        }
    }

    #[test]
    fn associativity_exhaustive() {
        let elems = all_elements();
        for a in &elems {
            for b in &elems {
                for c in &elems {
                    assert_eq!(a.mul(b).mul(c), a.mul(&b.mul(c)));
                }
            }
        }
    }

    #[test]
    fn orders() {
        assert_eq!(Q16::x().order(), 8);
        assert_eq!(IDENTITY.order(), 1);
        let order2: Vec<Q16> = all_elements()
            .into_iter()
            .filter(|q| q.order() == 2)
            .collect();
        assert_eq!(order2, vec![Q16 { a: 4, b: 0 }]);
        // every order divides 16 and lands in {1,2,4,8}
        for q in all_elements() {
            assert!(matches!(q.order(), 1 | 2 | 4 | 8));
        }
    }

    #[test]
    fn perm_is_a_homomorphism() {
        for u in all_elements() {
            for v in all_elements() {
                assert_eq!(u.mul(&v).perm(), (u.perm() + v.perm()) % 2);
            }
        }
        assert_eq!(Q16::x().perm(), 1);
        assert_eq!(Q16::x().pow(2).perm(), 0);
        assert_eq!(Q16::x().mul(&Q16::y()).perm(), 1);
        // kernel has order 8 and contains the full twist x^4
        let kernel: Vec<Q16> = all_elements()
            .into_iter()
            .filter(|q| q.perm() == 0)
            .collect();
        assert_eq!(kernel.len(), 8);
        assert!(kernel.contains(&Q16 { a: 4, b: 0 }));
    }

    #[test]
    fn eval_and_parse() {
        assert_eq!(parse_element("x^3*y").unwrap(), Q16 { a: 3, b: 1 });
        assert_eq!(parse_element("y^2").unwrap(), Q16 { a: 4, b: 0 });
        assert!(parse_element("z").is_err());
    }

    #[test]
    fn q16_relators_die_under_eval() {
        let p = q16_presentation();
        for r in &p.relators {
            assert!(eval_word(r).unwrap().is_identity(), "relator {r} survives");
        }
    }

    #[test]
    fn orientable_construction() {
        let theta = theta_from_named(SurfaceKind::Orientable, 2, &[("a1", 1)]).unwrap();
        let hom = build_phi_rp2(&theta).unwrap();
        assert_eq!(hom.images[&Generator::named("a1")].to_string(), "x");
        assert_eq!(hom.images[&Generator::named("a2")].to_string(), "x^2");
        let report = verify_hom(&hom, &Q16Oracle).unwrap();
        assert!(report.all_verified());
    }

    #[test]
    fn odd_nonorientable_table_row() {
        let theta = theta_from_named(
            SurfaceKind::Nonorientable,
            3,
            &[("v", 1), ("a1", 1), ("a2", 1)],
        )
        .unwrap();
        let hom = build_phi_rp2(&theta).unwrap();
        assert_eq!(hom.images[&Generator::named("v")].to_string(), "x*y");
        assert_eq!(hom.images[&Generator::named("a1")].to_string(), "x^7*y");
        assert_eq!(hom.images[&Generator::named("a2")].to_string(), "x*y");
        let report = verify_hom(&hom, &Q16Oracle).unwrap();
        assert!(report.all_verified());
    }

    #[test]
    fn even_nonorientable_search_is_stable() {
        // frozen fixture: first hit of the canonical enumeration order
        let theta = theta_from_named(SurfaceKind::Nonorientable, 4, &[("alpha", 1)]).unwrap();
        let hom = build_phi_rp2(&theta).unwrap();
        assert_eq!(hom.images[&Generator::named("alpha")].to_string(), "x");
        assert_eq!(hom.images[&Generator::named("beta")].to_string(), "y");
        let report = verify_hom(&hom, &Q16Oracle).unwrap();
        assert!(report.all_verified());
    }

    #[test]
    fn all_classes_all_small_sources_verify() {
        use crate::homz2::{class_representative, classes_for};
        let mut sources = vec![
            surface_group(SurfaceKind::Orientable, 1).unwrap(),
            surface_group(SurfaceKind::Orientable, 2).unwrap(),
            surface_group(SurfaceKind::Orientable, 3).unwrap(),
        ];
        for l in 2..=6 {
            sources.push(surface_group(SurfaceKind::Nonorientable, l).unwrap());
        }
        for p in sources {
            for class in classes_for(&p) {
                let theta = class_representative(&p, class);
                let hom = build_phi_rp2(&theta).unwrap();
                let report = verify_hom(&hom, &Q16Oracle).unwrap();
                assert!(report.all_verified(), "{} class {class}", p.tag);
                for g in &p.alphabet {
                    assert_eq!(
                        eval_word(&hom.images[g]).unwrap().perm(),
                        theta.value(g),
                        "permutation mismatch for {g}"
                    );
                }
            }
        }
    }

    #[test]
    fn non_surjective_rejected() {
        let theta = theta_from_named(SurfaceKind::Orientable, 1, &[]).unwrap();
        assert!(matches!(
            build_phi_rp2(&theta),
            Err(Q16Error::NotSurjective)
        ));
    }
}
