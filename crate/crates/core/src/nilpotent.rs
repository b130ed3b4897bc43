//! Exact arithmetic in the class-2 quotient of the pure 2-string braid
//! group of a closed orientable surface of genus `g`.
//!
//! Elements are stored in normal form: a vector of generator exponents
//! (strand 1 loops `r1_1..r1_{2g}` then strand 2 loops `r2_1..r2_{2g}`)
//! and an integer vector over the central basis. The central subgroup is
//! free abelian of rank `2g(2g-1) - 1`, with basis the commutators
//! `e_{k,i,j} = [r{k}_i, r{k}_j]` for `1 <= i < j <= 2g`, `i != 2g-1`,
//! together with the full twist `B`.
//!
//! All pairwise generator commutators expand over this basis:
//!
//! - same strand, `(i, j)` not the last handle pair: `e_{k,i,j}`;
//! - same strand, last handle pair `(2g-1, 2g)`: the inverse of the
//!   product of the remaining handle commutators times `B^-1` (forced by
//!   the defining relation for `B`);
//! - opposite strands: `B^{+1}` on handle-adjacent pairs `(2t-1, 2t)`,
//!   `B^{-1}` on `(2t, 2t-1)`, trivial otherwise.
//!
//! The whole table is validated by the requirement that every relator of
//! the pure braid presentation evaluates to the identity here; that check
//! is part of the acceptance suite and catches any sign slip.
//!
//! Central coefficients (and exponent vectors) use arbitrary-precision
//! integers: adversarial words multiply exponents, which can leave any
//! fixed width.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

use crate::words::{Generator, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NilError {
    #[error("elements belong to engines of different genus ({0} vs {1})")]
    GenusMismatch(u32, u32),
    #[error("letter {0} is outside the rho/full-twist alphabet for genus {1}")]
    Alphabet(String, u32),
    #[error("element is not central (nonzero generator exponent)")]
    NotCentral,
}

/// Index of a central basis vector entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CentralBasisIndex {
    /// `e_{k,i,j}` with `k` in {1,2}, `1 <= i < j <= 2g`, `i != 2g-1`.
    E { family: u8, i: u32, j: u32 },
    /// The full twist.
    FullTwist,
}

/// Arithmetic tables for a fixed genus.
#[derive(Clone, Debug)]
pub struct NilEngine {
    genus: u32,
    n: usize,
    /// `e`-basis entries in storage order; the full twist sits after them.
    e_entries: Vec<(u8, u32, u32)>,
    e_lookup: BTreeMap<(u8, u32, u32), usize>,
    /// `pair_table[p][q]`, for positions `p > q`, is the central expansion
    /// of the commutator of generator `p` with generator `q`.
    pair_table: Vec<Vec<Vec<(usize, i64)>>>,
}

/// Normal form in the class-2 quotient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NilElement {
    pub genus: u32,
    /// Generator exponents: strand 1 indices `1..=2g`, then strand 2.
    pub u: Vec<BigInt>,
    /// Central coefficients over the engine basis (`e` entries, then `B`).
    pub c: Vec<BigInt>,
}

/// An element of the mod-2 quotient that identifies the two strands'
/// central commutators: coordinates over `{e_{i,j}} + {B}`, each in Z/2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QBarElement {
    pub genus: u32,
    /// `e`-coordinates in engine order, then the `B` coordinate last.
    pub coords: Vec<u8>,
}

impl QBarElement {
    pub fn zero(genus: u32, dim: usize) -> Self {
        QBarElement {
            genus,
            coords: vec![0; dim],
        }
    }

    /// The target vector of the central equation: `B` alone.
    pub fn full_twist_only(genus: u32, dim: usize) -> Self {
        let mut q = QBarElement::zero(genus, dim);
        *q.coords.last_mut().expect("dim >= 1") = 1;
        q
    }
}

fn position(genus: u32, family: u8, index: u32) -> usize {
    ((family - 1) as usize) * (2 * genus as usize) + (index as usize - 1)
}

fn generator_at(genus: u32, pos: usize) -> (u8, u32) {
    let two_g = 2 * genus as usize;
    if pos < two_g {
        (1, pos as u32 + 1)
    } else {
        (2, (pos - two_g) as u32 + 1)
    }
}

/// Sign of `B` in the commutator of `r2_a` with `r1_b`.
fn cross_eps(a: u32, b: u32) -> i64 {
    if b == a + 1 && a % 2 == 1 {
        1
    } else if a == b + 1 && b % 2 == 1 {
        -1
    } else {
        0
    }
}

impl NilEngine {
    pub fn new(genus: u32) -> Self {
        assert!(genus >= 1, "genus must be at least 1");
        let two_g = 2 * genus;
        let mut e_entries = Vec::new();
        let mut e_lookup = BTreeMap::new();
        for family in 1..=2u8 {
            for i in 1..=two_g {
                if i == two_g - 1 {
                    continue;
                }
                for j in (i + 1)..=two_g {
                    e_lookup.insert((family, i, j), e_entries.len());
                    e_entries.push((family, i, j));
                }
            }
        }
        let n = 4 * genus as usize;
        let mut engine = NilEngine {
            genus,
            n,
            e_entries,
            e_lookup,
            pair_table: Vec::new(),
        };
        let mut table = vec![vec![Vec::new(); n]; n];
        for (p, row) in table.iter_mut().enumerate() {
            for (q, cell) in row.iter_mut().enumerate() {
                if p != q {
                    *cell =
                        engine.commutator_expansion(generator_at(genus, p), generator_at(genus, q));
                }
            }
        }
        engine.pair_table = table;
        engine
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    /// Rank of the central subgroup: `2g(2g-1) - 1`.
    pub fn central_rank(&self) -> usize {
        self.e_entries.len() + 1
    }

    pub fn b_index(&self) -> usize {
        self.e_entries.len()
    }

    pub fn basis(&self) -> Vec<CentralBasisIndex> {
        let mut out: Vec<CentralBasisIndex> = self
            .e_entries
            .iter()
            .map(|&(family, i, j)| CentralBasisIndex::E { family, i, j })
            .collect();
        out.push(CentralBasisIndex::FullTwist);
        out
    }

    /// Central expansion of `[r{ka}_ia, r{kb}_ib]`.
    fn commutator_expansion(&self, a: (u8, u32), b: (u8, u32)) -> Vec<(usize, i64)> {
        let (ka, ia) = a;
        let (kb, ib) = b;
        if ka == kb {
            if ia == ib {
                return Vec::new();
            }
            let (lo, hi, sign) = if ia < ib { (ia, ib, 1) } else { (ib, ia, -1) };
            let two_g = 2 * self.genus;
            if (lo, hi) == (two_g - 1, two_g) {
                // the defining relation for B expands the last handle pair
                // over all the earlier ones
                let mut out = Vec::new();
                for t in 1..self.genus {
                    let idx = self.e_lookup[&(ka, 2 * t - 1, 2 * t)];
                    out.push((idx, -sign));
                }
                out.push((self.b_index(), -sign));
                out
            } else {
                vec![(self.e_lookup[&(ka, lo, hi)], sign)]
            }
        } else {
            // cross-strand: only handle-adjacent pairs survive
            let eps = if ka == 2 {
                cross_eps(ia, ib)
            } else {
                -cross_eps(ib, ia)
            };
            if eps == 0 {
                Vec::new()
            } else {
                vec![(self.b_index(), eps)]
            }
        }
    }

    pub fn identity(&self) -> NilElement {
        NilElement {
            genus: self.genus,
            u: vec![BigInt::zero(); self.n],
            c: vec![BigInt::zero(); self.central_rank()],
        }
    }

    pub fn generator(&self, family: u8, index: u32) -> NilElement {
        let mut e = self.identity();
        e.u[position(self.genus, family, index)] = BigInt::from(1);
        e
    }

    pub fn full_twist(&self) -> NilElement {
        let mut e = self.identity();
        e.c[self.b_index()] = BigInt::from(1);
        e
    }

    fn check_genus(&self, p: &NilElement) -> Result<(), NilError> {
        if p.genus != self.genus {
            return Err(NilError::GenusMismatch(self.genus, p.genus));
        }
        Ok(())
    }

    /// Group product in normal form. Collection moves the right factor's
    /// generators into place, paying one central commutator per
    /// out-of-order pair.
    pub fn mul(&self, p: &NilElement, q: &NilElement) -> Result<NilElement, NilError> {
        self.check_genus(p)?;
        self.check_genus(q)?;
        let mut out = self.identity();
        for i in 0..self.n {
            out.u[i] = &p.u[i] + &q.u[i];
        }
        for i in 0..self.central_rank() {
            out.c[i] = &p.c[i] + &q.c[i];
        }
        for i in 0..self.n {
            if p.u[i].is_zero() {
                continue;
            }
            for j in 0..i {
                if q.u[j].is_zero() {
                    continue;
                }
                let scale = &p.u[i] * &q.u[j];
                for (idx, coef) in &self.pair_table[i][j] {
                    out.c[*idx] += &scale * *coef;
                }
            }
        }
        Ok(out)
    }

    pub fn inverse(&self, p: &NilElement) -> Result<NilElement, NilError> {
        self.check_genus(p)?;
        let mut out = self.identity();
        for i in 0..self.n {
            out.u[i] = -&p.u[i];
        }
        for i in 0..self.central_rank() {
            out.c[i] = -&p.c[i];
        }
        for i in 0..self.n {
            if p.u[i].is_zero() {
                continue;
            }
            for j in 0..i {
                if p.u[j].is_zero() {
                    continue;
                }
                let scale = &p.u[i] * &p.u[j];
                for (idx, coef) in &self.pair_table[i][j] {
                    out.c[*idx] += &scale * *coef;
                }
            }
        }
        Ok(out)
    }

    fn mul_generator(&self, acc: &mut NilElement, family: u8, index: u32, exp: i64) {
        let j = position(self.genus, family, index);
        let exp_big = BigInt::from(exp);
        for i in (j + 1)..self.n {
            if acc.u[i].is_zero() {
                continue;
            }
            let scale = &acc.u[i] * &exp_big;
            for (idx, coef) in &self.pair_table[i][j] {
                acc.c[*idx] += &scale * *coef;
            }
        }
        acc.u[j] += exp_big;
    }

    /// Canonical projection of a word over `{r1_*, r2_*, B}` into the
    /// quotient. Multiplicative by construction.
    pub fn eval_word(&self, w: &Word) -> Result<NilElement, NilError> {
        let mut acc = self.identity();
        for (g, e) in w.syllables() {
            match g {
                Generator::Rho { family, index } if *index <= 2 * self.genus => {
                    self.mul_generator(&mut acc, *family, *index, *e);
                }
                Generator::FullTwist => {
                    let b = self.b_index();
                    acc.c[b] += BigInt::from(*e);
                }
                other => {
                    return Err(NilError::Alphabet(other.token(), self.genus));
                }
            }
        }
        Ok(acc)
    }

    /// `[v, w]` as an element of the quotient. Always central.
    pub fn commutator_of_words(&self, v: &Word, w: &Word) -> Result<NilElement, NilError> {
        let pv = self.eval_word(v)?;
        let pw = self.eval_word(w)?;
        let c = self.commutator(&pv, &pw)?;
        debug_assert!(c.u.iter().all(|x| x.is_zero()));
        Ok(c)
    }

    pub fn commutator(&self, p: &NilElement, q: &NilElement) -> Result<NilElement, NilError> {
        let pq = self.mul(p, q)?;
        let pi = self.inverse(p)?;
        let qi = self.inverse(q)?;
        self.mul(&self.mul(&pq, &pi)?, &qi)
    }

    /// Predicted central vector of `[v, w]` from exponent sums alone, by
    /// the closed determinant formulas. Cross-validated against
    /// [`NilEngine::commutator_of_words`] in the test suites.
    pub fn coefficient_formulas(&self, v: &Word, w: &Word) -> Result<Vec<BigInt>, NilError> {
        let two_g = 2 * self.genus;
        let exps = |word: &Word| -> Result<Vec<BigInt>, NilError> {
            for (g, _) in word.syllables() {
                match g {
                    Generator::Rho { index, .. } if *index <= two_g => {}
                    Generator::FullTwist => {}
                    other => return Err(NilError::Alphabet(other.token(), self.genus)),
                }
            }
            Ok((0..self.n)
                .map(|p| {
                    let (f, i) = generator_at(self.genus, p);
                    BigInt::from(word.exponent_sum(&Generator::rho(f, i)))
                })
                .collect())
        };
        let ev = exps(v)?;
        let ew = exps(w)?;
        let at = |e: &Vec<BigInt>, family: u8, index: u32| -> BigInt {
            e[position(self.genus, family, index)].clone()
        };
        let d = |family: u8, i: u32, j: u32| -> BigInt {
            at(&ev, family, i) * at(&ew, family, j) - at(&ev, family, j) * at(&ew, family, i)
        };
        let mut out = vec![BigInt::zero(); self.central_rank()];
        for (pos, &(family, i, j)) in self.e_entries.iter().enumerate() {
            let handle_pair = i % 2 == 1 && j == i + 1;
            out[pos] = if handle_pair {
                d(family, i, j) - d(family, two_g - 1, two_g)
            } else {
                d(family, i, j)
            };
        }
        let mut b = -d(1, two_g - 1, two_g) - d(2, two_g - 1, two_g);
        for t in 1..=self.genus {
            let (i, j) = (2 * t - 1, 2 * t);
            b += at(&ev, 2, i) * at(&ew, 1, j) - at(&ev, 2, j) * at(&ew, 1, i);
            b += at(&ev, 1, i) * at(&ew, 2, j) - at(&ev, 1, j) * at(&ew, 2, i);
        }
        out[self.b_index()] = b;
        Ok(out)
    }

    /// The automorphism induced by conjugation with the elementary braid:
    /// swap the two strand blocks, swap the strand tag of every `e`
    /// coordinate, fix `B` — and pay the collection cost of re-sorting the
    /// swapped generator blocks, which lands on `B`.
    pub fn iota_sigma(&self, p: &NilElement) -> Result<NilElement, NilError> {
        self.check_genus(p)?;
        let two_g = 2 * self.genus as usize;
        let mut out = self.identity();
        for i in 0..two_g {
            out.u[i] = p.u[two_g + i].clone();
            out.u[two_g + i] = p.u[i].clone();
        }
        for (pos, &(family, i, j)) in self.e_entries.iter().enumerate() {
            let swapped = self.e_lookup[&(3 - family, i, j)];
            out.c[swapped] = p.c[pos].clone();
        }
        let mut b = p.c[self.b_index()].clone();
        // strand-1 exponents a, strand-2 exponents b of the original element
        for i in 1..=2 * self.genus {
            for j in 1..=2 * self.genus {
                let eps = cross_eps(i, j);
                if eps != 0 {
                    let a_i = &p.u[position(self.genus, 1, i)];
                    let b_j = &p.u[position(self.genus, 2, j)];
                    b += a_i * b_j * eps;
                }
            }
        }
        out.c[self.b_index()] = b;
        Ok(out)
    }

    /// Project a central element onto the mod-2 quotient identifying the
    /// two strands' `e` coordinates.
    pub fn project_qbar(&self, p: &NilElement) -> Result<QBarElement, NilError> {
        self.check_genus(p)?;
        if !p.u.iter().all(|x| x.is_zero()) {
            return Err(NilError::NotCentral);
        }
        let mut coords = Vec::with_capacity(self.qbar_dim());
        for &(family, i, j) in &self.e_entries {
            if family != 1 {
                continue;
            }
            let c1 = &p.c[self.e_lookup[&(1, i, j)]];
            let c2 = &p.c[self.e_lookup[&(2, i, j)]];
            coords.push(mod2(&(c1 + c2)));
        }
        coords.push(mod2(&p.c[self.b_index()]));
        Ok(QBarElement {
            genus: self.genus,
            coords,
        })
    }

    /// Dimension of the mod-2 quotient: `g(2g-1)`.
    pub fn qbar_dim(&self) -> usize {
        self.e_entries.len() / 2 + 1
    }

    /// The `B` coordinate of a normal form. For images of elements of the
    /// normal closure of `B` this equals the total twist count: every
    /// conjugate of `B` keeps coefficient 1 here because conjugation is
    /// trivial on central elements in a class-2 group. Callers are
    /// responsible for feeding it only such elements (or treating the
    /// answer as a necessary condition).
    pub fn b_exponent(&self, p: &NilElement) -> BigInt {
        p.c[self.b_index()].clone()
    }
}

fn mod2(x: &BigInt) -> u8 {
    if x.abs() % 2u8 == BigInt::zero() {
        0
    } else {
        1
    }
}

pub fn is_even(x: &BigInt) -> bool {
    mod2(x) == 0
}

/// One visibly-in-the-kernel factor: membership in the normal closure of
/// the full twist is syntactic, not decided.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelFactor {
    /// `c B^e c^-1`.
    ConjugatedTwist { conjugator: Word, exponent: i64 },
    /// `[x, y]` with `x` a strand-1 word and `y` a strand-2 word; such a
    /// commutator dies in both strand projections.
    CrossCommutator { left: Word, right: Word },
}

impl KernelFactor {
    fn word(&self) -> Word {
        match self {
            KernelFactor::ConjugatedTwist {
                conjugator,
                exponent,
            } => Word::syllable(Generator::FullTwist, *exponent).conjugated_by(conjugator),
            KernelFactor::CrossCommutator { left, right } => Word::commutator(left, right),
        }
    }

    fn is_valid(&self) -> bool {
        let pure_family = |w: &Word, fam: u8| {
            w.syllables()
                .iter()
                .all(|(g, _)| matches!(g, Generator::Rho { family, .. } if *family == fam))
        };
        match self {
            KernelFactor::ConjugatedTwist { conjugator, .. } => conjugator
                .syllables()
                .iter()
                .all(|(g, _)| matches!(g, Generator::Rho { .. } | Generator::FullTwist)),
            KernelFactor::CrossCommutator { left, right } => {
                pure_family(left, 1) && pure_family(right, 2)
            }
        }
    }
}

/// A word carried together with the factorisation witnessing that it lies
/// in the normal closure of the full twist. The factor list is the
/// membership certificate: replaying it rebuilds the word, and on such
/// elements the `B` coordinate of the quotient image is the total twist
/// count.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct KernelWord {
    factors: Vec<KernelFactor>,
}

impl KernelWord {
    pub fn new() -> Self {
        KernelWord::default()
    }

    pub fn push(&mut self, factor: KernelFactor) -> &mut Self {
        assert!(factor.is_valid(), "not a kernel-shaped factor");
        self.factors.push(factor);
        self
    }

    pub fn factors(&self) -> &[KernelFactor] {
        &self.factors
    }

    pub fn word(&self) -> Word {
        Word::concat_all(
            self.factors
                .iter()
                .map(KernelFactor::word)
                .collect::<Vec<_>>()
                .iter(),
        )
    }

    /// Net twist count of the conjugated-twist factors.
    pub fn twist_total(&self) -> i64 {
        self.factors
            .iter()
            .map(|f| match f {
                KernelFactor::ConjugatedTwist { exponent, .. } => *exponent,
                KernelFactor::CrossCommutator { .. } => 0,
            })
            .sum()
    }
}

/// Random freely reduced word over the rho alphabet of the given genus,
/// optionally with full-twist letters. Used by the seeded randomised
/// suites and certificate replays.
pub fn random_rho_word<R: rand::Rng>(
    rng: &mut R,
    genus: u32,
    max_len: usize,
    with_twist: bool,
) -> Word {
    let len = rng.gen_range(0..=max_len);
    let mut syl = Vec::new();
    for _ in 0..len {
        let pick = rng.gen_range(0..if with_twist { 9 } else { 8 });
        let exps = [-3i64, -2, -1, 1, 2, 3];
        let e = exps[rng.gen_range(0..exps.len())];
        if with_twist && pick == 8 {
            syl.push((Generator::FullTwist, e));
        } else {
            let family = 1 + (pick % 2) as u8;
            let index = 1 + rng.gen_range(0..2 * genus);
            syl.push((Generator::rho(family, index), e));
        }
    }
    Word::from_syllables(syl)
}

/// Random word whose strand-2 exponent sums are the negatives of its
/// strand-1 sums. This is the exponent shape of an element `g` for which
/// `g * iota(g)` dies in both strand projections, the situation in which
/// the twist-parity argument applies.
pub fn balanced_random_word<R: rand::Rng>(rng: &mut R, genus: u32, max_len: usize) -> Word {
    let mut w = random_rho_word(rng, genus, max_len, true);
    for i in 1..=2 * genus {
        let s1 = w.exponent_sum(&Generator::rho(1, i));
        let s2 = w.exponent_sum(&Generator::rho(2, i));
        w = w.concat(&Word::syllable(Generator::rho(2, i), -(s1 + s2)));
    }
    w
}
