//! Surjections of surface groups onto Z/2: well-definedness, the
//! generator-substitution moves that realise equivalence of such
//! surjections, canonical class representatives, and class counting.
//!
//! Two surjections are equivalent when one is the other composed with an
//! automorphism of the source. Every automorphism needed here is a
//! composition of a handful of substitution moves, each of which fixes the
//! single surface relator as a free-word identity, so a move certificate
//! can be replayed with nothing but free reduction.
//!
//! Classification is double-entry: the production path reads off
//! abelianisation invariants (value on the torsion class, triviality on
//! the handle span), while the certificate path searches the move orbit.
//! [`enumerate_and_count`] asserts the two agree assignment by assignment.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::presentations::{surface_group, Presentation, PresentationTag, SurfaceKind};
use crate::words::{Generator, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HomError {
    #[error("assignment does not kill every relator mod 2")]
    NotWellDefined,
    #[error("homomorphism is not surjective onto Z/2")]
    NotSurjective,
    #[error("assignment misses generator {0}")]
    MissingValue(String),
    #[error("source presentation is not a surface group")]
    NotASurfaceGroup,
    #[error("enumeration over {0} generators exceeds the configured bound")]
    TooLarge(usize),
    #[error("no move path found between equivalent assignments (move set too weak)")]
    MovePathMissing,
}

/// A Z/2-valued assignment on the generators of a surface presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Z2Hom {
    pub source: Presentation,
    pub values: BTreeMap<Generator, u8>,
}

impl Z2Hom {
    /// Build and check well-definedness: every relator must have even
    /// total value. For the surface relators this holds for any
    /// assignment, but it is asserted rather than assumed.
    pub fn new(source: Presentation, values: BTreeMap<Generator, u8>) -> Result<Self, HomError> {
        for g in &source.alphabet {
            if !values.contains_key(g) {
                return Err(HomError::MissingValue(g.token()));
            }
        }
        let hom = Z2Hom { source, values };
        for r in &hom.source.relators {
            if hom.value_of_word(r) != 0 {
                return Err(HomError::NotWellDefined);
            }
        }
        Ok(hom)
    }

    pub fn value(&self, g: &Generator) -> u8 {
        *self.values.get(g).unwrap_or(&0) & 1
    }

    pub fn value_of_word(&self, w: &Word) -> u8 {
        let mut acc = 0i64;
        for (g, e) in w.syllables() {
            acc += i64::from(self.value(g)) * e;
        }
        (acc.rem_euclid(2)) as u8
    }

    pub fn is_surjective(&self) -> bool {
        self.source.alphabet.iter().any(|g| self.value(g) == 1)
    }
}

/// Equivalence class of a surjection, named by source type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ThetaClass {
    /// Orientable source: the single class.
    Or1,
    /// Odd non-orientable source, torsion generator killed.
    NOdd1,
    /// Odd non-orientable source, torsion generator hit, handle span killed.
    NOdd2,
    /// Odd non-orientable source, torsion generator and handle span both hit.
    NOdd3,
    /// Even non-orientable source, torsion generator killed, handle span killed.
    NEven1,
    /// Even non-orientable source: torsion generator hit for genus 2;
    /// torsion killed but handle span hit for genus >= 4.
    NEven2,
    /// Even non-orientable source of genus >= 4, torsion generator hit.
    NEven3,
}

impl fmt::Display for ThetaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ThetaClass::Or1 => "Or1",
            ThetaClass::NOdd1 => "NOdd1",
            ThetaClass::NOdd2 => "NOdd2",
            ThetaClass::NOdd3 => "NOdd3",
            ThetaClass::NEven1 => "NEven1",
            ThetaClass::NEven2 => "NEven2",
            ThetaClass::NEven3 => "NEven3",
        };
        f.write_str(s)
    }
}

/// A generator substitution that fixes the surface relator as a free word.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NamedMove {
    pub name: String,
    /// Images of the touched generators; untouched generators map to
    /// themselves.
    pub images: BTreeMap<Generator, Word>,
}

impl NamedMove {
    /// Complete the image map over a full alphabet.
    pub fn full_images(&self, alphabet: &[Generator]) -> BTreeMap<Generator, Word> {
        let mut out = BTreeMap::new();
        for g in alphabet {
            let w = self
                .images
                .get(g)
                .cloned()
                .unwrap_or_else(|| Word::generator(g.clone()));
            out.insert(g.clone(), w);
        }
        out
    }

    /// Transform an assignment: the new value of `g` is the old value of
    /// the image word of `g`.
    fn transform(&self, p: &Presentation, assign: &[u8]) -> Vec<u8> {
        let index: BTreeMap<&Generator, usize> =
            p.alphabet.iter().enumerate().map(|(i, g)| (g, i)).collect();
        p.alphabet
            .iter()
            .map(|g| {
                let image = self.images.get(g);
                match image {
                    None => assign[index[g]],
                    Some(w) => {
                        let mut acc = 0i64;
                        for (h, e) in w.syllables() {
                            acc += i64::from(assign[index[h]]) * e;
                        }
                        (acc.rem_euclid(2)) as u8
                    }
                }
            })
            .collect()
    }
}

/// Replayable witness that two assignments are equivalent: a move path
/// whose composition carries the canonical representative to the given
/// assignment.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MoveCertificate {
    pub moves: Vec<NamedMove>,
    /// The composed substitution, representative-to-target.
    pub composed: BTreeMap<Generator, Word>,
}

fn w(g: &Generator) -> Word {
    Word::generator(g.clone())
}

/// The two single-pair moves on a commutator pair `(a, b)`.
fn pair_moves(t: usize, a: &Generator, b: &Generator) -> Vec<NamedMove> {
    let mut out = Vec::new();
    // (a, b) -> (a, ba)
    let mut m1 = BTreeMap::new();
    m1.insert(b.clone(), w(b).concat(&w(a)));
    out.push(NamedMove {
        name: format!("pair{t}-shear"),
        images: m1,
    });
    // (a, b) -> (a b a^-1, a^-1)
    let mut m2 = BTreeMap::new();
    m2.insert(a.clone(), w(b).conjugated_by(&w(a)));
    m2.insert(b.clone(), w(a).inverse());
    out.push(NamedMove {
        name: format!("pair{t}-rotate"),
        images: m2,
    });
    out
}

/// The two adjacent-pair moves on consecutive commutator pairs
/// `(a, b)(c, d)`.
fn adjacent_pair_moves(
    t: usize,
    a: &Generator,
    b: &Generator,
    c: &Generator,
    d: &Generator,
) -> Vec<NamedMove> {
    let mut out = Vec::new();
    let k = Word::commutator(&w(a), &w(b));
    let k_inv = k.inverse();
    // ([a,b] c [b,a], [a,b] d [b,a], a, b): swaps the two pairs.
    let mut m3 = BTreeMap::new();
    m3.insert(a.clone(), Word::concat_all([&k, &w(c), &k_inv]));
    m3.insert(b.clone(), Word::concat_all([&k, &w(d), &k_inv]));
    m3.insert(c.clone(), w(a));
    m3.insert(d.clone(), w(b));
    out.push(NamedMove {
        name: format!("pairs{t}-swap"),
        images: m3,
    });
    // (ac, c^-1 b c, c^-1 b c b^-1 c, d c^-1 b^-1 c): merges parities across
    // the two pairs.
    let mut m4 = BTreeMap::new();
    m4.insert(a.clone(), w(a).concat(&w(c)));
    m4.insert(b.clone(), w(b).conjugated_by(&w(c).inverse()));
    m4.insert(
        c.clone(),
        Word::concat_all([&w(c).inverse(), &w(b), &w(c), &w(b).inverse(), &w(c)]),
    );
    m4.insert(
        d.clone(),
        Word::concat_all([&w(d), &w(c).inverse(), &w(b).inverse(), &w(c)]),
    );
    out.push(NamedMove {
        name: format!("pairs{t}-merge"),
        images: m4,
    });
    out
}

/// All moves applicable to the given surface presentation.
pub fn available_moves(p: &Presentation) -> Result<Vec<NamedMove>, HomError> {
    let pair_gens = |names: &[Generator]| -> Vec<(Generator, Generator)> {
        names
            .chunks(2)
            .filter(|c| c.len() == 2)
            .map(|c| (c[0].clone(), c[1].clone()))
            .collect()
    };
    let mut moves = Vec::new();
    let a_part: Vec<Generator>;
    match &p.tag {
        PresentationTag::SurfaceOrientable { .. } => {
            a_part = p.alphabet.clone();
        }
        PresentationTag::SurfaceNonorientableOdd { .. } => {
            a_part = p.alphabet[1..].to_vec();
        }
        PresentationTag::SurfaceNonorientableEven { genus } => {
            a_part = p.alphabet[2..].to_vec();
            let alpha = &p.alphabet[0];
            let beta = &p.alphabet[1];
            // (alpha, beta) -> (alpha, beta alpha), fixing the twisted commutator.
            let mut km = BTreeMap::new();
            km.insert(beta.clone(), w(beta).concat(&w(alpha)));
            moves.push(NamedMove {
                name: "klein-shear".into(),
                images: km,
            });
            if *genus >= 4 {
                // Couples the twisted pair with the first handle pair.
                let a = alpha;
                let b = beta;
                let c = &p.alphabet[2];
                let d = &p.alphabet[3];
                let mut sm = BTreeMap::new();
                sm.insert(
                    a.clone(),
                    Word::concat_all([&w(a), &w(c), &w(a), &w(c).inverse(), &w(a).inverse()]),
                );
                sm.insert(
                    b.clone(),
                    Word::concat_all([
                        &w(a),
                        &w(c),
                        &w(a).inverse(),
                        &w(c).inverse(),
                        &w(b),
                        &w(a),
                        &w(c).inverse(),
                        &w(a).inverse(),
                    ]),
                );
                sm.insert(c.clone(), w(c).conjugated_by(&w(a)));
                sm.insert(d.clone(), w(d).concat(&w(a).inverse()));
                moves.push(NamedMove {
                    name: "twisted-merge".into(),
                    images: sm,
                });
            }
        }
        _ => return Err(HomError::NotASurfaceGroup),
    }
    let pairs = pair_gens(&a_part);
    for (t, (a, b)) in pairs.iter().enumerate() {
        moves.extend(pair_moves(t + 1, a, b));
    }
    for (t, win) in pairs.windows(2).enumerate() {
        let (a, b) = &win[0];
        let (c, d) = &win[1];
        moves.extend(adjacent_pair_moves(t + 1, a, b, c, d));
    }
    Ok(moves)
}

/// Verify the substitution identities behind every move, over abstract
/// symbols, by free reduction alone. Returns one `(name, ok)` row per
/// identity.
pub fn move_identities_check() -> Vec<(String, bool)> {
    let a = Word::generator(Generator::named("a"));
    let b = Word::generator(Generator::named("b"));
    let c = Word::generator(Generator::named("c"));
    let d = Word::generator(Generator::named("d"));
    let comm = |x: &Word, y: &Word| Word::commutator(x, y);
    let mut out = Vec::new();

    // (a, ba)
    let lhs = comm(&a, &b);
    let rhs = comm(&a, &b.concat(&a));
    out.push(("shear: [a,b] = [a,ba]".to_string(), lhs == rhs));

    // (aba^-1, a^-1)
    let rhs = comm(&b.conjugated_by(&a), &a.inverse());
    out.push(("rotate: [a,b] = [aba^-1,a^-1]".to_string(), lhs == rhs));

    // ([a,b]c[b,a], [a,b]d[b,a], a, b)
    let k = comm(&a, &b);
    let lhs = comm(&a, &b).concat(&comm(&c, &d));
    let rhs = comm(&c.conjugated_by(&k), &d.conjugated_by(&k)).concat(&comm(&a, &b));
    out.push((
        "swap: [a,b][c,d] = [KcK^-1,KdK^-1][a,b]".to_string(),
        lhs == rhs,
    ));

    // (ac, c^-1bc, c^-1bcb^-1c, dc^-1b^-1c)
    let a2 = a.concat(&c);
    let b2 = b.conjugated_by(&c.inverse());
    let c2 = Word::concat_all([&c.inverse(), &b, &c, &b.inverse(), &c]);
    let d2 = Word::concat_all([&d, &c.inverse(), &b.inverse(), &c]);
    let rhs = comm(&a2, &b2).concat(&comm(&c2, &d2));
    out.push(("merge: [a,b][c,d] preserved".to_string(), lhs == rhs));

    // twisted merge on (a,b) twisted + (c,d) plain
    let lhs = Word::twisted_commutator(&a, &b).concat(&comm(&c, &d));
    let a2 = Word::concat_all([&a, &c, &a, &c.inverse(), &a.inverse()]);
    let b2 = Word::concat_all([
        &a,
        &c,
        &a.inverse(),
        &c.inverse(),
        &b,
        &a,
        &c.inverse(),
        &a.inverse(),
    ]);
    let c2 = c.conjugated_by(&a);
    let d2 = d.concat(&a.inverse());
    let rhs = Word::twisted_commutator(&a2, &b2).concat(&comm(&c2, &d2));
    out.push((
        "twisted merge: [a,b]'[c,d] preserved".to_string(),
        lhs == rhs,
    ));

    out
}

fn assignment_of(theta: &Z2Hom) -> Vec<u8> {
    theta
        .source
        .alphabet
        .iter()
        .map(|g| theta.value(g))
        .collect()
}

fn hom_from_assignment(p: &Presentation, assign: &[u8]) -> Z2Hom {
    let values: BTreeMap<Generator, u8> = p
        .alphabet
        .iter()
        .cloned()
        .zip(assign.iter().copied())
        .collect();
    Z2Hom::new(p.clone(), values).expect("surface relators have even value sums")
}

/// Classify a surjection by abelianisation invariants: its value on the
/// torsion class of the source, and whether it kills the span of the
/// handle generators. Runs in O(#generators).
pub fn classify_by_invariants(theta: &Z2Hom) -> Result<ThetaClass, HomError> {
    if !theta.is_surjective() {
        return Err(HomError::NotSurjective);
    }
    match &theta.source.tag {
        PresentationTag::SurfaceOrientable { .. } => Ok(ThetaClass::Or1),
        PresentationTag::SurfaceNonorientableOdd { .. } => {
            let v = theta.value(&theta.source.alphabet[0]) == 1;
            let handles = theta.source.alphabet[1..]
                .iter()
                .any(|g| theta.value(g) == 1);
            Ok(match (v, handles) {
                (false, _) => ThetaClass::NOdd1,
                (true, false) => ThetaClass::NOdd2,
                (true, true) => ThetaClass::NOdd3,
            })
        }
        PresentationTag::SurfaceNonorientableEven { genus } => {
            let alpha = theta.value(&theta.source.alphabet[0]);
            if *genus == 2 {
                return Ok(if alpha == 1 {
                    ThetaClass::NEven2
                } else {
                    ThetaClass::NEven1
                });
            }
            let handles = theta.source.alphabet[2..]
                .iter()
                .any(|g| theta.value(g) == 1);
            Ok(match (alpha == 1, handles) {
                (true, _) => ThetaClass::NEven3,
                (false, true) => ThetaClass::NEven2,
                (false, false) => ThetaClass::NEven1,
            })
        }
        _ => Err(HomError::NotASurfaceGroup),
    }
}

/// The printed representative of a class on the given presentation.
pub fn class_representative(p: &Presentation, class: ThetaClass) -> Z2Hom {
    let mut assign = vec![0u8; p.alphabet.len()];
    match (&p.tag, class) {
        (PresentationTag::SurfaceOrientable { .. }, ThetaClass::Or1) => assign[0] = 1,
        (PresentationTag::SurfaceNonorientableOdd { .. }, ThetaClass::NOdd1) => assign[1] = 1,
        (PresentationTag::SurfaceNonorientableOdd { .. }, ThetaClass::NOdd2) => assign[0] = 1,
        (PresentationTag::SurfaceNonorientableOdd { .. }, ThetaClass::NOdd3) => {
            assign[0] = 1;
            assign[1] = 1;
        }
        (PresentationTag::SurfaceNonorientableEven { .. }, ThetaClass::NEven1) => assign[1] = 1,
        (PresentationTag::SurfaceNonorientableEven { genus }, ThetaClass::NEven2) => {
            if *genus == 2 {
                assign[0] = 1;
            } else {
                assign[2] = 1;
            }
        }
        (PresentationTag::SurfaceNonorientableEven { .. }, ThetaClass::NEven3) => assign[0] = 1,
        _ => panic!("class {class} does not live on {}", p.tag),
    }
    hom_from_assignment(p, &assign)
}

/// All classes that occur for the given surface presentation.
pub fn classes_for(p: &Presentation) -> Vec<ThetaClass> {
    match &p.tag {
        PresentationTag::SurfaceOrientable { .. } => vec![ThetaClass::Or1],
        PresentationTag::SurfaceNonorientableOdd { .. } => {
            vec![ThetaClass::NOdd1, ThetaClass::NOdd2, ThetaClass::NOdd3]
        }
        PresentationTag::SurfaceNonorientableEven { genus } => {
            if *genus == 2 {
                vec![ThetaClass::NEven1, ThetaClass::NEven2]
            } else {
                vec![ThetaClass::NEven1, ThetaClass::NEven2, ThetaClass::NEven3]
            }
        }
        _ => vec![],
    }
}

/// Canonicalize a surjection: its class, the printed representative, and a
/// replayable move path carrying the representative to the input.
pub fn canonicalize(theta: &Z2Hom) -> Result<(Z2Hom, ThetaClass, MoveCertificate), HomError> {
    let class = classify_by_invariants(theta)?;
    let rep = class_representative(&theta.source, class);
    let moves = available_moves(&theta.source)?;
    let start = assignment_of(&rep);
    let goal = assignment_of(theta);

    // Breadth-first over the assignment orbit of the representative.
    let mut seen: HashMap<Vec<u8>, (usize, usize)> = HashMap::new(); // state -> (parent key idx, move idx)
    let mut order: Vec<Vec<u8>> = vec![start.clone()];
    seen.insert(start.clone(), (usize::MAX, usize::MAX));
    let mut queue = VecDeque::from([0usize]);
    let mut found = start == goal;
    while let Some(idx) = queue.pop_front() {
        if found {
            break;
        }
        let state = order[idx].clone();
        for (mi, mv) in moves.iter().enumerate() {
            let next = mv.transform(&theta.source, &state);
            if !seen.contains_key(&next) {
                seen.insert(next.clone(), (idx, mi));
                order.push(next.clone());
                queue.push_back(order.len() - 1);
                if next == goal {
                    found = true;
                    break;
                }
            }
        }
    }
    if !found {
        return Err(HomError::MovePathMissing);
    }

    // Reconstruct the move path representative -> theta.
    let mut path: Vec<NamedMove> = Vec::new();
    let mut cursor = goal.clone();
    while cursor != start {
        let (pidx, mi) = seen[&cursor];
        path.push(moves[mi].clone());
        cursor = order[pidx].clone();
    }
    path.reverse();

    // Compose the substitutions: with path m1..mk, the target assignment is
    // rep( m1(m2(...mk(g)...)) ), so fold from the back, rewriting the
    // accumulated words through each earlier move.
    let alphabet = &theta.source.alphabet;
    let mut composed: BTreeMap<Generator, Word> = alphabet
        .iter()
        .map(|g| (g.clone(), Word::generator(g.clone())))
        .collect();
    for mv in path.iter().rev() {
        let full = mv.full_images(alphabet);
        composed = composed
            .into_iter()
            .map(|(g, word)| (g, word.substitute(&full).expect("closed alphabet")))
            .collect();
    }

    let cert = MoveCertificate {
        moves: path,
        composed,
    };
    debug_assert!(verify_move_certificate(&rep, theta, &cert));
    Ok((rep, class, cert))
}

/// Replay a move certificate: every move must fix the relators as free
/// words, and the composed substitution must carry the representative's
/// values to the target's.
pub fn verify_move_certificate(rep: &Z2Hom, theta: &Z2Hom, cert: &MoveCertificate) -> bool {
    let p = &theta.source;
    for mv in &cert.moves {
        let full = mv.full_images(&p.alphabet);
        for r in &p.relators {
            match r.substitute(&full) {
                Ok(image) => {
                    if image != *r {
                        return false;
                    }
                }
                Err(_) => return false,
            }
        }
    }
    for g in &p.alphabet {
        let image = match cert.composed.get(g) {
            Some(w) => w,
            None => return false,
        };
        if rep.value_of_word(image) != theta.value(g) {
            return false;
        }
        // The composition must also fix the relators.
    }
    for r in &p.relators {
        match r.substitute(&cert.composed) {
            Ok(image) => {
                if image != *r {
                    return false;
                }
            }
            Err(_) => return false,
        }
    }
    true
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CountReport {
    pub surjective_homs: usize,
    pub classes_by_invariants: usize,
    pub classes_by_orbits: usize,
}

impl CountReport {
    pub fn agreed_classes(&self) -> usize {
        assert_eq!(self.classes_by_invariants, self.classes_by_orbits);
        self.classes_by_invariants
    }
}

/// Count surjective assignments and their equivalence classes, two ways:
/// by abelianisation invariants and by move-orbit closure. The two
/// partitions must agree on every assignment.
pub fn enumerate_and_count(
    p: &Presentation,
    max_generators: usize,
) -> Result<CountReport, HomError> {
    let n = p.alphabet.len();
    if n > max_generators {
        return Err(HomError::TooLarge(n));
    }
    let moves = available_moves(p)?;
    let total = 1usize << n;
    let to_assign = |mask: usize| -> Vec<u8> { (0..n).map(|i| ((mask >> i) & 1) as u8).collect() };
    let to_mask = |assign: &[u8]| -> usize {
        assign
            .iter()
            .enumerate()
            .map(|(i, &b)| (b as usize) << i)
            .sum()
    };

    let mut orbit_id: Vec<Option<usize>> = vec![None; total];
    let mut orbit_count = 0usize;
    let mut class_of_orbit: Vec<ThetaClass> = Vec::new();
    let mut classes_seen: Vec<ThetaClass> = Vec::new();

    for mask in 1..total {
        if orbit_id[mask].is_some() {
            continue;
        }
        let id = orbit_count;
        orbit_count += 1;
        let theta = hom_from_assignment(p, &to_assign(mask));
        let class = classify_by_invariants(&theta)?;
        class_of_orbit.push(class);
        if !classes_seen.contains(&class) {
            classes_seen.push(class);
        }
        let mut queue = VecDeque::from([mask]);
        orbit_id[mask] = Some(id);
        while let Some(m) = queue.pop_front() {
            let assign = to_assign(m);
            for mv in &moves {
                let next = to_mask(&mv.transform(p, &assign));
                match orbit_id[next] {
                    None => {
                        orbit_id[next] = Some(id);
                        queue.push_back(next);
                    }
                    Some(existing) => assert_eq!(existing, id, "orbits collided"),
                }
            }
        }
    }

    // Orbit refinement must match invariant classification exactly.
    for (mask, id_slot) in orbit_id.iter().enumerate().skip(1) {
        let theta = hom_from_assignment(p, &to_assign(mask));
        let class = classify_by_invariants(&theta)?;
        let id = id_slot.expect("every nonzero assignment was visited");
        assert_eq!(
            class, class_of_orbit[id],
            "invariant class disagrees with orbit class on mask {mask:b}"
        );
    }
    let distinct_orbit_classes: std::collections::BTreeSet<String> =
        class_of_orbit.iter().map(|c| c.to_string()).collect();
    assert_eq!(
        distinct_orbit_classes.len(),
        orbit_count,
        "two distinct orbits carry the same invariant class"
    );

    Ok(CountReport {
        surjective_homs: total - 1,
        classes_by_invariants: classes_seen.len(),
        classes_by_orbits: orbit_count,
    })
}

/// Convenience: a `Z2Hom` on a fresh surface presentation from named
/// generator values, e.g. `[("v",1),("a1",1),("a2",0)]`.
pub fn theta_from_named(
    kind: SurfaceKind,
    genus: u32,
    values: &[(&str, u8)],
) -> Result<Z2Hom, HomError> {
    let p = surface_group(kind, genus).map_err(|_| HomError::NotASurfaceGroup)?;
    let mut map: BTreeMap<Generator, u8> = p.alphabet.iter().map(|g| (g.clone(), 0)).collect();
    for (name, v) in values {
        let g = Generator::named(name);
        if !map.contains_key(&g) {
            return Err(HomError::MissingValue((*name).into()));
        }
        map.insert(g, *v & 1);
    }
    Z2Hom::new(p, map)
}
