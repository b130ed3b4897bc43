//! Finite presentations for every group the toolkit works with, and
//! relator-by-relator verification of candidate homomorphisms against a
//! pluggable equality oracle.
//!
//! The braid-side presentations follow the standard pure-braid generating
//! set for a closed orientable surface: generators `r{k}_{i}` for strand
//! `k` in `{1,2}` and puncture loop `i` in `1..=2g`, with the full twist
//! `B` carried as an explicit generator defined by relation family (I).
//! Keeping `B` explicit lets every derived identity be transcribed
//! verbatim; [`eliminate_full_twist`] rewrites a presentation onto the
//! pure `r`-alphabet when an oracle needs one.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::words::{Generator, Word, WordError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PresentationTag {
    /// Closed orientable surface of genus `h >= 1`.
    SurfaceOrientable { genus: u32 },
    /// Closed non-orientable surface of odd genus `l >= 3`.
    SurfaceNonorientableOdd { genus: u32 },
    /// Closed non-orientable surface of even genus `l >= 2`.
    SurfaceNonorientableEven { genus: u32 },
    /// Pure 2-string braid group of the closed orientable surface of genus `g`.
    P2Orientable { genus: u32 },
    /// Full 2-string braid group of the closed orientable surface of genus `g`.
    B2Orientable { genus: u32 },
    /// Generalised quaternion group of order 16.
    Q16 {},
    /// Partial relation set for the 2-string braid group of the closed
    /// non-orientable surface of genus `m >= 2`. Incomplete by design: a
    /// derivation from it is sound, but failure to derive refutes nothing.
    B2NonorientableScott { genus: u32 },
}

impl fmt::Display for PresentationTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PresentationTag::SurfaceOrientable { genus } => write!(f, "S_{genus}"),
            PresentationTag::SurfaceNonorientableOdd { genus }
            | PresentationTag::SurfaceNonorientableEven { genus } => write!(f, "N_{genus}"),
            PresentationTag::P2Orientable { genus } => write!(f, "P2(S_{genus})"),
            PresentationTag::B2Orientable { genus } => write!(f, "B2(S_{genus})"),
            PresentationTag::Q16 {} => write!(f, "Q16"),
            PresentationTag::B2NonorientableScott { genus } => write!(f, "B2(N_{genus})-partial"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PresentationError {
    #[error("genus {genus} is not valid for {what}")]
    BadGenus { what: &'static str, genus: u32 },
    #[error("relator uses generator {0} outside the alphabet")]
    AlphabetViolation(String),
}

/// A finitely presented group: an ordered alphabet plus relator words.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub tag: PresentationTag,
    pub alphabet: Vec<Generator>,
    pub relators: Vec<Word>,
}

impl Presentation {
    fn checked(self) -> Self {
        let set: BTreeSet<&Generator> = self.alphabet.iter().collect();
        for r in &self.relators {
            for (g, _) in r.syllables() {
                assert!(set.contains(g), "relator letter {g} outside alphabet");
            }
        }
        self
    }

    pub fn contains(&self, g: &Generator) -> bool {
        self.alphabet.contains(g)
    }

    /// True when `w` only uses alphabet letters.
    pub fn admits(&self, w: &Word) -> bool {
        w.syllables().iter().all(|(g, _)| self.contains(g))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceKind {
    Orientable,
    Nonorientable,
}

fn abstract_gen(name: String) -> Generator {
    Generator::Abstract(name)
}

fn a_gen(i: u32) -> Generator {
    abstract_gen(format!("a{i}"))
}

fn commutator_chain(n_pairs: u32) -> Word {
    let mut parts = Vec::new();
    for t in 1..=n_pairs {
        parts.push(Word::commutator(
            &Word::generator(a_gen(2 * t - 1)),
            &Word::generator(a_gen(2 * t)),
        ));
    }
    Word::concat_all(parts.iter())
}

/// Fundamental group of a closed surface, in the standard one-relator form.
///
/// - orientable genus `h >= 1`: `a1..a{2h}` with relator `[a1,a2]...[a{2h-1},a{2h}]`
/// - non-orientable odd genus `l >= 3`: `v, a1..a{l-1}` with relator `v^2 [a1,a2]...`
/// - non-orientable even genus `l >= 2`: `alpha, beta, a1..a{l-2}` with relator
///   `alpha beta alpha beta^-1 [a1,a2]...`
pub fn surface_group(kind: SurfaceKind, genus: u32) -> Result<Presentation, PresentationError> {
    match kind {
        SurfaceKind::Orientable => {
            if genus < 1 {
                return Err(PresentationError::BadGenus {
                    what: "orientable surface",
                    genus,
                });
            }
            let alphabet: Vec<Generator> = (1..=2 * genus).map(a_gen).collect();
            let relator = commutator_chain(genus);
            Ok(Presentation {
                tag: PresentationTag::SurfaceOrientable { genus },
                alphabet,
                relators: vec![relator],
            }
            .checked())
        }
        SurfaceKind::Nonorientable if genus >= 3 && !genus.is_multiple_of(2) => {
            let v = abstract_gen("v".into());
            let mut alphabet = vec![v.clone()];
            alphabet.extend((1..=genus - 1).map(a_gen));
            let relator = Word::syllable(v, 2).concat(&commutator_chain((genus - 1) / 2));
            Ok(Presentation {
                tag: PresentationTag::SurfaceNonorientableOdd { genus },
                alphabet,
                relators: vec![relator],
            }
            .checked())
        }
        SurfaceKind::Nonorientable if genus >= 2 && genus.is_multiple_of(2) => {
            let alpha = abstract_gen("alpha".into());
            let beta = abstract_gen("beta".into());
            let mut alphabet = vec![alpha.clone(), beta.clone()];
            alphabet.extend((1..=genus - 2).map(a_gen));
            let twisted = Word::twisted_commutator(&Word::generator(alpha), &Word::generator(beta));
            let relator = twisted.concat(&commutator_chain((genus - 2) / 2));
            Ok(Presentation {
                tag: PresentationTag::SurfaceNonorientableEven { genus },
                alphabet,
                relators: vec![relator],
            }
            .checked())
        }
        SurfaceKind::Nonorientable => Err(PresentationError::BadGenus {
            what: "non-orientable surface (need genus >= 2 here)",
            genus,
        }),
    }
}

fn rho(family: u8, index: u32) -> Word {
    Word::generator(Generator::rho(family, index))
}

fn full_twist() -> Word {
    Word::generator(Generator::FullTwist)
}

/// Relation family (II) condition: `r2_l` and `r1_j` commute.
///
/// Holds for `j < l` when `l` is odd and for `j < l - 1` when `l` is even;
/// the missing even case `(j, l) = (l-1, l)` is exactly the adjacent
/// handle pair governed by family (V).
pub fn commuting_pair(j: u32, l: u32) -> bool {
    if l % 2 == 1 {
        j < l
    } else {
        j < l - 1
    }
}

/// Relation family (VI) condition on `(l, j)` with `l < j`: every such pair
/// except the adjacent handle pairs `(j, l) = (2t, 2t-1)`.
pub fn family_vi_pair(l: u32, j: u32) -> bool {
    l < j && !(j == l + 1 && l % 2 == 1)
}

/// Pure 2-string braid group of the closed orientable surface of genus
/// `g >= 1`, with the full twist `B` as an explicit generator defined by
/// relation family (I).
pub fn p2_presentation(g: u32) -> Result<Presentation, PresentationError> {
    if g < 1 {
        return Err(PresentationError::BadGenus {
            what: "pure braid presentation",
            genus: g,
        });
    }
    let mut alphabet: Vec<Generator> = Vec::new();
    for family in 1..=2u8 {
        for i in 1..=2 * g {
            alphabet.push(Generator::rho(family, i));
        }
    }
    alphabet.push(Generator::FullTwist);

    let mut relators = Vec::new();

    // (I) the product of handle commutators equals B, for each strand.
    for family in 1..=2u8 {
        let mut parts = Vec::new();
        for t in 1..=g {
            parts.push(Word::commutator(
                &rho(family, 2 * t - 1),
                &rho(family, 2 * t).inverse(),
            ));
        }
        parts.push(full_twist().inverse());
        relators.push(Word::concat_all(parts.iter()));
    }

    // (II) distant strand-1/strand-2 generators commute.
    for l in 1..=2 * g {
        for j in 1..=2 * g {
            if commuting_pair(j, l) {
                relators.push(Word::commutator(&rho(2, l), &rho(1, j)));
            }
        }
    }

    // (III) conjugation of r1_k by r2_k, both directions.
    for k in 1..=2 * g {
        let lhs = Word::concat_all([&rho(2, k), &rho(1, k), &rho(2, k).inverse()]);
        let rhs = rho(1, k).concat(&Word::commutator(&rho(1, k).inverse(), &full_twist()));
        relators.push(lhs.concat(&rhs.inverse()));

        let lhs = Word::concat_all([&rho(2, k).inverse(), &rho(1, k), &rho(2, k)]);
        let rhs = rho(1, k).concat(&Word::commutator(&full_twist().inverse(), &rho(1, k)));
        relators.push(lhs.concat(&rhs.inverse()));
    }

    // (IV) conjugation of r1_{k+1} by r2_k for odd k.
    for k in (1..=2 * g).step_by(2) {
        let lhs = Word::concat_all([&rho(2, k), &rho(1, k + 1), &rho(2, k).inverse()]);
        let rhs = Word::concat_all([
            &full_twist(),
            &rho(1, k + 1),
            &Word::commutator(&rho(1, k).inverse(), &full_twist()),
        ]);
        relators.push(lhs.concat(&rhs.inverse()));

        let lhs = Word::concat_all([&rho(2, k).inverse(), &rho(1, k + 1), &rho(2, k)]);
        let rhs = Word::concat_all([
            &full_twist().inverse(),
            &Word::commutator(&full_twist(), &rho(1, k)),
            &rho(1, k + 1),
            &Word::commutator(&full_twist().inverse(), &rho(1, k)),
        ]);
        relators.push(lhs.concat(&rhs.inverse()));
    }

    // (V) conjugation of r1_k by r2_{k+1} for odd k; the first direction is
    // the short form used throughout the derived-identity corpus.
    for k in (1..=2 * g).step_by(2) {
        let lhs = Word::concat_all([&rho(2, k + 1), &rho(1, k), &rho(2, k + 1).inverse()]);
        let rhs = rho(1, k).concat(&full_twist().inverse());
        relators.push(lhs.concat(&rhs.inverse()));

        let lhs = Word::concat_all([&rho(2, k + 1).inverse(), &rho(1, k), &rho(2, k + 1)]);
        let rhs = Word::concat_all([
            &rho(1, k),
            &full_twist(),
            &Word::commutator(&full_twist().inverse(), &rho(1, k + 1)),
        ]);
        relators.push(lhs.concat(&rhs.inverse()));
    }

    // (VI) conjugation of r1_j by r2_l for l < j, away from handle pairs.
    for l in 1..=2 * g {
        for j in 1..=2 * g {
            if family_vi_pair(l, j) {
                let lhs = Word::concat_all([&rho(2, l), &rho(1, j), &rho(2, l).inverse()]);
                let rhs = Word::concat_all([
                    &Word::commutator(&full_twist(), &rho(1, l).inverse()),
                    &rho(1, j),
                    &Word::commutator(&rho(1, l).inverse(), &full_twist()),
                ]);
                relators.push(lhs.concat(&rhs.inverse()));

                let lhs = Word::concat_all([&rho(2, l).inverse(), &rho(1, j), &rho(2, l)]);
                let rhs = Word::concat_all([
                    &Word::commutator(&rho(1, l), &full_twist().inverse()),
                    &rho(1, j),
                    &Word::commutator(&full_twist().inverse(), &rho(1, l)),
                ]);
                relators.push(lhs.concat(&rhs.inverse()));
            }
        }
    }

    Ok(Presentation {
        tag: PresentationTag::P2Orientable { genus: g },
        alphabet,
        relators,
    }
    .checked())
}

/// Full 2-string braid group of the closed orientable surface of genus
/// `g`: the pure presentation extended by the elementary braid `s` with
/// `s^2 = B` and the strand-swapping conjugation rules.
pub fn b2_presentation(g: u32) -> Result<Presentation, PresentationError> {
    let mut p = p2_presentation(g)?;
    p.tag = PresentationTag::B2Orientable { genus: g };
    p.alphabet.push(Generator::Sigma);
    let s = Word::generator(Generator::Sigma);
    p.relators.push(s.pow(2).concat(&full_twist().inverse()));
    for i in 1..=2 * g {
        // s r1_i s^-1 = r2_i
        p.relators
            .push(rho(1, i).conjugated_by(&s).concat(&rho(2, i).inverse()));
        // s r2_i s^-1 = B r1_i B^-1
        let rhs = rho(1, i).conjugated_by(&full_twist());
        p.relators
            .push(rho(2, i).conjugated_by(&s).concat(&rhs.inverse()));
    }
    Ok(p.checked())
}

/// The relation set available for the 2-string braid group of a closed
/// non-orientable surface of genus `m >= 2`, on the sub-alphabet
/// `{r1_1, r2_1, s, B}`. Elements compose left to right.
///
/// This is an incomplete presentation: derivations from it hold in the
/// full group, but nothing can be refuted with it.
pub fn scott_relation_set(m: u32) -> Result<Presentation, PresentationError> {
    if m < 2 {
        return Err(PresentationError::BadGenus {
            what: "non-orientable braid relation set",
            genus: m,
        });
    }
    let s = Word::generator(Generator::Sigma);
    let relators = vec![
        // r2_1 r1_1 r2_1^-1 = r1_1 B^-1
        Word::concat_all([&rho(2, 1), &rho(1, 1), &rho(2, 1).inverse()])
            .concat(&rho(1, 1).concat(&full_twist().inverse()).inverse()),
        // B = s^2
        s.pow(2).concat(&full_twist().inverse()),
        // s r1_1 s^-1 = r2_1
        rho(1, 1).conjugated_by(&s).concat(&rho(2, 1).inverse()),
        // s r2_1 s^-1 = B r1_1 B^-1
        rho(2, 1)
            .conjugated_by(&s)
            .concat(&rho(1, 1).conjugated_by(&full_twist()).inverse()),
        // r2_1 B r2_1^-1 = B r1_1^-1 B^-1 r1_1 B^-1
        full_twist().conjugated_by(&rho(2, 1)).concat(
            &Word::concat_all([
                &full_twist(),
                &rho(1, 1).inverse(),
                &full_twist().inverse(),
                &rho(1, 1),
                &full_twist().inverse(),
            ])
            .inverse(),
        ),
    ];
    Ok(Presentation {
        tag: PresentationTag::B2NonorientableScott { genus: m },
        alphabet: vec![
            Generator::rho(1, 1),
            Generator::rho(2, 1),
            Generator::Sigma,
            Generator::FullTwist,
        ],
        relators,
    }
    .checked())
}

/// `<x, y | x^4 = y^2, y x y^-1 = x^-1>`, the generalised quaternion group
/// of order 16.
pub fn q16_presentation() -> Presentation {
    let x = Word::generator(Generator::named("x"));
    let y = Word::generator(Generator::named("y"));
    Presentation {
        tag: PresentationTag::Q16 {},
        alphabet: vec![Generator::named("x"), Generator::named("y")],
        relators: vec![
            x.pow(4).concat(&y.pow(-2)),
            Word::concat_all([&y, &x, &y.inverse(), &x]),
        ],
    }
    .checked()
}

/// Rewrite a pure/full braid presentation onto the `r`-alphabet by
/// replacing the full twist with its strand-1 defining product from
/// relation family (I). Relators that become trivial are dropped.
pub fn eliminate_full_twist(p: &Presentation) -> Presentation {
    let genus = match p.tag {
        PresentationTag::P2Orientable { genus } | PresentationTag::B2Orientable { genus } => genus,
        _ => panic!("full-twist elimination only applies to braid presentations"),
    };
    let mut twist = Vec::new();
    for t in 1..=genus {
        twist.push(Word::commutator(
            &rho(1, 2 * t - 1),
            &rho(1, 2 * t).inverse(),
        ));
    }
    let twist = Word::concat_all(twist.iter());

    let mut images = BTreeMap::new();
    for g in &p.alphabet {
        if *g == Generator::FullTwist {
            images.insert(g.clone(), twist.clone());
        } else {
            images.insert(g.clone(), Word::generator(g.clone()));
        }
    }
    let relators: Vec<Word> = p
        .relators
        .iter()
        .map(|r| r.substitute(&images).expect("alphabet is closed"))
        .filter(|r| !r.is_identity())
        .collect();
    let alphabet: Vec<Generator> = p
        .alphabet
        .iter()
        .filter(|g| **g != Generator::FullTwist)
        .cloned()
        .collect();
    Presentation {
        tag: p.tag.clone(),
        alphabet,
        relators,
    }
    .checked()
}

/// Verdict of an equality oracle on a single word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelatorStatus {
    /// The word is provably trivial in the target group.
    Verified,
    /// A necessary condition passed; triviality was not established.
    NecessaryConditionOnly,
    /// The oracle gave up within its limits.
    Unknown,
    /// The word is provably non-trivial (the candidate map is not a
    /// homomorphism).
    Refuted(String),
}

/// Decides, or semi-decides, whether a word is trivial in a fixed group.
pub trait EqualityOracle {
    fn oracle_name(&self) -> String;
    fn check_identity(&self, w: &Word) -> RelatorStatus;
}

/// The free group on the target alphabet: a word is trivial iff it reduces
/// to the empty word. Sound for any target, complete for none.
pub struct FreeReductionOracle;

impl EqualityOracle for FreeReductionOracle {
    fn oracle_name(&self) -> String {
        "free-reduction".into()
    }
    fn check_identity(&self, w: &Word) -> RelatorStatus {
        if w.is_identity() {
            RelatorStatus::Verified
        } else {
            RelatorStatus::Unknown
        }
    }
}

/// A homomorphism candidate given by generator images.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupHom {
    pub source: Presentation,
    pub target_tag: PresentationTag,
    pub images: BTreeMap<Generator, Word>,
}

impl GroupHom {
    pub fn apply(&self, w: &Word) -> Result<Word, WordError> {
        w.substitute(&self.images)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RelatorReport {
    pub relator: Word,
    pub image: Word,
    pub status: RelatorStatus,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HomReport {
    pub oracle: String,
    pub relators: Vec<RelatorReport>,
}

impl HomReport {
    pub fn all_verified(&self) -> bool {
        self.relators
            .iter()
            .all(|r| r.status == RelatorStatus::Verified)
    }

    pub fn refuted(&self) -> bool {
        self.relators
            .iter()
            .any(|r| matches!(r.status, RelatorStatus::Refuted(_)))
    }
}

/// Check every relator image of `hom` with `oracle`. The overall report is
/// `Verified` only when every relator is.
pub fn verify_hom(hom: &GroupHom, oracle: &dyn EqualityOracle) -> Result<HomReport, WordError> {
    let mut relators = Vec::new();
    for r in &hom.source.relators {
        let image = hom.apply(r)?;
        let status = oracle.check_identity(&image);
        relators.push(RelatorReport {
            relator: r.clone(),
            image,
            status,
        });
    }
    Ok(HomReport {
        oracle: oracle.oracle_name(),
        relators,
    })
}
