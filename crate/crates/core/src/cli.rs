//! Command-line front end.
//!
//! Exit codes for `decide`: 0 the property holds, 1 it fails, 2 the
//! verdict is depends-on-domain or out-of-scope; 64 usage error, 70 a
//! computational error. Randomised suites take an explicit seed (fixed
//! default) so runs are byte-identical.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::homz2::{canonicalize, enumerate_and_count, move_identities_check, theta_from_named};
use crate::nilpotent::NilEngine;
use crate::oracle::{
    self, case4_obstruction, case5_obstruction, decide_with_limits, replay_certificate, replay_phi,
    CaseInput, Outcome, PhiCert, CERT_SAMPLES, CERT_SEED, EXHAUSTION_GENUS_BOUND,
};
use crate::presentations::{
    b2_presentation, p2_presentation, q16_presentation, scott_relation_set, surface_group,
    Presentation, SurfaceKind,
};
use crate::quat16;
use crate::words::Word;
use crate::wordsearch::{derive_identity, SearchLimits, SearchOutcome};

pub const EXIT_USAGE: i32 = 64;
pub const EXIT_SOFTWARE: i32 = 70;

#[derive(Parser)]
#[command(
    name = "busurf",
    about = "Decides when every map of a surface-group space into a surface must collapse an involution orbit, with machine-checkable certificates",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct LimitArgs {
    /// Longest intermediate word the derivation search may visit.
    #[arg(long, default_value_t = SearchLimits::default().max_word_length)]
    max_word_length: usize,
    /// Most states the derivation search may create.
    #[arg(long, default_value_t = SearchLimits::default().max_states)]
    max_states: usize,
    /// Deepest derivation the search may follow.
    #[arg(long, default_value_t = SearchLimits::default().max_depth)]
    max_depth: usize,
}

impl LimitArgs {
    fn limits(&self) -> SearchLimits {
        SearchLimits {
            max_word_length: self.max_word_length,
            max_states: self.max_states,
            max_depth: self.max_depth,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide one case from a JSON file and print the verdict.
    Decide {
        /// Path to the case description (JSON).
        #[arg(long)]
        input: String,
        /// Also write the certificate to this path.
        #[arg(long)]
        certificate: Option<String>,
        /// Re-run the certificate computation before printing.
        #[arg(long)]
        replay: bool,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Classify a Z/2 assignment on a surface group.
    Classify {
        /// Surface, e.g. S2 or N3.
        #[arg(long)]
        surface: String,
        /// Assignment, e.g. v=1,a1=1,a2=0.
        #[arg(long)]
        theta: String,
        /// Print the move certificate as JSON.
        #[arg(long)]
        certificate: bool,
    },
    /// Re-verify a factorisation certificate (JSON produced by `decide`).
    VerifyPhi {
        #[arg(long)]
        input: String,
    },
    /// Evaluate a word in the class-2 quotient of the pure braid group.
    NilEval {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        word: String,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate the commutator of two words in the class-2 quotient.
    NilCommutator {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        json: bool,
    },
    /// Project a central word onto the strand-identified mod-2 quotient.
    QbarProject {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        word: String,
        #[arg(long)]
        json: bool,
    },
    /// Search for a derivation of `word = 1` from a relation set.
    Search {
        /// Relation set: p2, b2, or scott.
        #[arg(long)]
        relations: String,
        /// Genus of the relation set.
        #[arg(long, default_value_t = 1)]
        genus: u32,
        #[arg(long)]
        word: String,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Arithmetic in the order-16 braid group of the projective plane.
    Q16 {
        #[command(subcommand)]
        op: Q16Op,
    },
    /// Print a presentation as JSON.
    ShowPresentation {
        /// One of: surface, p2, b2, scott, q16.
        #[arg(long)]
        tag: String,
        /// Genus where applicable; surfaces use S/N prefix via --surface.
        #[arg(long)]
        genus: Option<u32>,
        /// For tag=surface: S3, N4, ...
        #[arg(long)]
        surface: Option<String>,
    },
    /// Run the built-in invariant suite and print one line per check.
    Selftest {
        #[arg(long, default_value_t = 2)]
        genus_max: u32,
        #[arg(long, default_value_t = CERT_SEED)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum Q16Op {
    /// Multiply two elements, e.g. `x^3*y` and `x`.
    Mul { left: String, right: String },
    /// Order of an element.
    Order { element: String },
    /// Full multiplication table.
    Table,
}

fn parse_surface(spec: &str) -> Result<Presentation, String> {
    let (kind, digits) = spec.split_at(1);
    let genus: u32 = digits
        .parse()
        .map_err(|_| format!("bad surface `{spec}` (expected S<h> or N<l>)"))?;
    match kind {
        "S" | "s" => surface_group(SurfaceKind::Orientable, genus).map_err(|e| e.to_string()),
        "N" | "n" => surface_group(SurfaceKind::Nonorientable, genus).map_err(|e| e.to_string()),
        _ => Err(format!("bad surface `{spec}` (expected S<h> or N<l>)")),
    }
}

fn parse_theta_args(spec: &str) -> Result<Vec<(String, u8)>, String> {
    let mut out = Vec::new();
    for part in spec.split(',').filter(|p| !p.is_empty()) {
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| format!("bad assignment `{part}` (expected name=0|1)"))?;
        let v: u8 = value
            .trim()
            .parse()
            .map_err(|_| format!("bad value in `{part}`"))?;
        out.push((name.trim().to_string(), v & 1));
    }
    Ok(out)
}

fn print_json<T: Serialize>(out: &mut dyn Write, value: &T) {
    let s = serde_json::to_string_pretty(value).expect("serializable");
    let _ = writeln!(out, "{s}");
}

struct CheckTable {
    rows: Vec<(String, bool)>,
}

impl CheckTable {
    fn new() -> Self {
        CheckTable { rows: Vec::new() }
    }
    fn row(&mut self, name: &str, ok: bool) {
        self.rows.push((name.to_string(), ok));
    }
    fn guarded<F: FnOnce() -> bool + std::panic::UnwindSafe>(&mut self, name: &str, f: F) {
        let ok = std::panic::catch_unwind(f).unwrap_or(false);
        self.row(name, ok);
    }
    fn print(&self, out: &mut dyn Write) -> bool {
        let width = self.rows.iter().map(|(n, _)| n.len()).max().unwrap_or(0);
        let mut all = true;
        for (name, ok) in &self.rows {
            all &= ok;
            let _ = writeln!(out, "{name:width$}  {}", if *ok { "pass" } else { "FAIL" },);
        }
        let _ = writeln!(
            out,
            "{}: {}/{} checks passed",
            if all { "ok" } else { "FAILED" },
            self.rows.iter().filter(|(_, ok)| *ok).count(),
            self.rows.len()
        );
        all
    }
}

fn selftest(out: &mut dyn Write, genus_max: u32, seed: u64) -> i32 {
    let mut t = CheckTable::new();

    t.guarded("words: reduction round trip", || {
        let w = Word::parse("r1_1*r1_1^-1*B^2*B^-2*a*b*b^-1*a^-1").unwrap();
        w.is_identity()
    });

    t.guarded("presentations: relator exponent sums vanish", || {
        (1..=genus_max).all(|g| {
            let p = p2_presentation(g).unwrap();
            p.relators.iter().all(|r| {
                (1..=2 * g).all(|i| {
                    r.exponent_sum(&crate::words::Generator::rho(1, i)) == 0
                        && r.exponent_sum(&crate::words::Generator::rho(2, i)) == 0
                })
            })
        })
    });

    t.guarded("quaternion target: group facts", || {
        let elems = quat16::all_elements();
        elems.len() == 16
            && elems.iter().filter(|q| q.order() == 2).count() == 1
            && elems.iter().all(|u| {
                elems
                    .iter()
                    .all(|v| u.mul(v).perm() == (u.perm() + v.perm()) % 2)
            })
    });

    t.guarded("quaternion target: all classes factor", || {
        use crate::homz2::{class_representative, classes_for};
        let mut sources = vec![];
        for h in 1..=3 {
            sources.push(surface_group(SurfaceKind::Orientable, h).unwrap());
        }
        for l in 2..=6 {
            sources.push(surface_group(SurfaceKind::Nonorientable, l).unwrap());
        }
        sources.iter().all(|p| {
            classes_for(p)
                .into_iter()
                .all(|c| quat16::build_phi_rp2(&class_representative(p, c)).is_ok())
        })
    });

    for g in 1..=genus_max {
        t.guarded(&format!("class-2 engine: relators die (genus {g})"), || {
            let e = NilEngine::new(g);
            let p = p2_presentation(g).unwrap();
            p.relators
                .iter()
                .all(|r| e.eval_word(r).unwrap() == e.identity())
        });
    }

    for g in 1..=genus_max.min(3) {
        t.guarded(
            &format!("class-2 engine: commutator formulas (genus {g})"),
            move || {
                use rand::SeedableRng;
                let e = NilEngine::new(g);
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ u64::from(g));
                (0..100).all(|_| {
                    let v = crate::nilpotent::random_rho_word(&mut rng, g, 18, true);
                    let w = crate::nilpotent::random_rho_word(&mut rng, g, 18, true);
                    e.commutator_of_words(&v, &w).unwrap().c
                        == e.coefficient_formulas(&v, &w).unwrap()
                })
            },
        );
    }

    t.guarded("moves: substitution identities", || {
        move_identities_check().into_iter().all(|(_, ok)| ok)
    });

    t.guarded("classes: counts match", || {
        let table = [
            ("S1", 1usize),
            ("S2", 1),
            ("N2", 2),
            ("N3", 3),
            ("N4", 3),
            ("N5", 3),
        ];
        table.iter().all(|(s, classes)| {
            let p = parse_surface(s).unwrap();
            enumerate_and_count(&p, 16).unwrap().agreed_classes() == *classes
        })
    });

    t.guarded("derived identities: strand-swap consequence", || {
        let rels = scott_relation_set(2).unwrap();
        let w = Word::parse("r2_1*r1_1*s*r1_1^-1*r2_1^-1*s").unwrap();
        derive_identity(&rels, &w, &SearchLimits::default())
            .unwrap()
            .is_verified()
    });

    t.guarded("derived identities: twist conjugation", || {
        let rels = b2_presentation(1).unwrap();
        let w = Word::parse("r2_1*B*r2_1^-1*B*r1_1^-1*B^-1*r1_1*B^-1").unwrap();
        derive_identity(&rels, &w, &SearchLimits::default())
            .unwrap()
            .is_verified()
    });

    for g in 1..=genus_max.min(EXHAUSTION_GENUS_BOUND) {
        t.guarded(
            &format!("klein obstruction: twist parity (genus {g})"),
            move || case4_obstruction(g, seed, CERT_SAMPLES).is_ok(),
        );
        t.guarded(
            &format!("genus-3 obstruction: mod-2 exhaustion (genus {g})"),
            move || match case5_obstruction(g, seed, 50, EXHAUSTION_GENUS_BOUND) {
                Ok(demo) => demo.solutions == 0,
                Err(_) => false,
            },
        );
    }

    t.guarded("oracle: spot verdicts", || {
        use crate::oracle::{case, DomainKind, TargetKind};
        let rows = [
            (
                case(
                    DomainKind::Nonorientable { genus: 2 },
                    &[("alpha", 1)],
                    TargetKind::Orientable { genus: 1 },
                    Some(2),
                ),
                Outcome::Holds,
            ),
            (
                case(
                    DomainKind::Nonorientable { genus: 3 },
                    &[("v", 1), ("a1", 1)],
                    TargetKind::Orientable { genus: 1 },
                    Some(2),
                ),
                Outcome::Holds,
            ),
            (
                case(
                    DomainKind::Orientable { genus: 2 },
                    &[("a1", 1)],
                    TargetKind::Nonorientable { genus: 3 },
                    Some(2),
                ),
                Outcome::Fails,
            ),
        ];
        rows.iter().all(|(c, expect)| {
            oracle::decide(c)
                .map(|v| v.outcome == *expect)
                .unwrap_or(false)
        })
    });

    if t.print(out) {
        0
    } else {
        1
    }
}

/// Run the CLI on the given arguments, writing to `out`.
pub fn run<I, S>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are not usage errors
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = write!(out, "{e}");
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(message) => {
            let _ = writeln!(out, "error: {message}");
            EXIT_SOFTWARE
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32, String> {
    match cli.command {
        Command::Decide {
            input,
            certificate,
            replay,
            limits,
        } => {
            let text = fs::read_to_string(&input).map_err(|e| format!("{input}: {e}"))?;
            let case: CaseInput =
                serde_json::from_str(&text).map_err(|e| format!("{input}: {e}"))?;
            let verdict = decide_with_limits(&case, &limits.limits()).map_err(|e| e.to_string())?;
            if replay {
                replay_certificate(&verdict).map_err(|e| format!("replay failed: {e}"))?;
            }
            if let Some(path) = certificate {
                let payload = serde_json::to_string_pretty(&verdict.certificate)
                    .map_err(|e| e.to_string())?;
                fs::write(&path, payload).map_err(|e| format!("{path}: {e}"))?;
            }
            print_json(out, &verdict);
            Ok(verdict.exit_code())
        }

        Command::Classify {
            surface,
            theta,
            certificate,
        } => {
            let p = parse_surface(&surface)?;
            let pairs = parse_theta_args(&theta)?;
            let named: Vec<(&str, u8)> = pairs.iter().map(|(n, v)| (n.as_str(), *v)).collect();
            let kind = match &p.tag {
                crate::presentations::PresentationTag::SurfaceOrientable { .. } => {
                    SurfaceKind::Orientable
                }
                _ => SurfaceKind::Nonorientable,
            };
            let genus = match &p.tag {
                crate::presentations::PresentationTag::SurfaceOrientable { genus }
                | crate::presentations::PresentationTag::SurfaceNonorientableOdd { genus }
                | crate::presentations::PresentationTag::SurfaceNonorientableEven { genus } => {
                    *genus
                }
                _ => unreachable!(),
            };
            let theta = theta_from_named(kind, genus, &named).map_err(|e| e.to_string())?;
            let (rep, class, cert) = canonicalize(&theta).map_err(|e| e.to_string())?;
            let rep_values: BTreeMap<String, u8> = rep
                .source
                .alphabet
                .iter()
                .map(|g| (g.token(), rep.value(g)))
                .collect();
            let _ = writeln!(out, "class: {class}");
            let _ = writeln!(
                out,
                "representative: {}",
                serde_json::to_string(&rep_values).unwrap()
            );
            let _ = writeln!(out, "moves: {}", cert.moves.len());
            if certificate {
                print_json(out, &cert);
            }
            Ok(0)
        }

        Command::VerifyPhi { input } => {
            let text = fs::read_to_string(&input).map_err(|e| format!("{input}: {e}"))?;
            let cert: PhiCert = serde_json::from_str(&text).map_err(|e| format!("{input}: {e}"))?;
            match replay_phi(&cert) {
                Ok(()) => {
                    let _ = writeln!(out, "verified: all relators die and parities match");
                    Ok(0)
                }
                Err(e) => {
                    let _ = writeln!(out, "REFUTED: {e}");
                    Ok(1)
                }
            }
        }

        Command::NilEval { genus, word, json } => {
            let engine = NilEngine::new(genus);
            let w = Word::parse(&word).map_err(|e| e.to_string())?;
            let value = engine.eval_word(&w).map_err(|e| e.to_string())?;
            if json {
                print_json(out, &value);
            } else {
                let _ = writeln!(
                    out,
                    "u = {:?}",
                    value.u.iter().map(|x| x.to_string()).collect::<Vec<_>>()
                );
                let _ = writeln!(
                    out,
                    "c = {:?}",
                    value.c.iter().map(|x| x.to_string()).collect::<Vec<_>>()
                );
                let _ = writeln!(out, "basis = {:?}", engine.basis());
            }
            Ok(0)
        }

        Command::NilCommutator {
            genus,
            left,
            right,
            json,
        } => {
            let engine = NilEngine::new(genus);
            let v = Word::parse(&left).map_err(|e| e.to_string())?;
            let w = Word::parse(&right).map_err(|e| e.to_string())?;
            let value = engine
                .commutator_of_words(&v, &w)
                .map_err(|e| e.to_string())?;
            let predicted = engine
                .coefficient_formulas(&v, &w)
                .map_err(|e| e.to_string())?;
            if value.c != predicted {
                return Err("engine and determinant formulas disagree".into());
            }
            if json {
                print_json(out, &value);
            } else {
                let _ = writeln!(
                    out,
                    "c = {:?}",
                    value.c.iter().map(|x| x.to_string()).collect::<Vec<_>>()
                );
            }
            Ok(0)
        }

        Command::QbarProject { genus, word, json } => {
            let engine = NilEngine::new(genus);
            let w = Word::parse(&word).map_err(|e| e.to_string())?;
            let value = engine.eval_word(&w).map_err(|e| e.to_string())?;
            let q = engine.project_qbar(&value).map_err(|e| e.to_string())?;
            if json {
                print_json(out, &q);
            } else {
                let _ = writeln!(out, "coords = {:?}", q.coords);
            }
            Ok(0)
        }

        Command::Search {
            relations,
            genus,
            word,
            json,
            limits,
        } => {
            let rels = match relations.as_str() {
                "p2" => p2_presentation(genus).map_err(|e| e.to_string())?,
                "b2" => b2_presentation(genus).map_err(|e| e.to_string())?,
                "scott" => scott_relation_set(genus.max(2)).map_err(|e| e.to_string())?,
                other => return Err(format!("unknown relation set `{other}`")),
            };
            let w = Word::parse(&word).map_err(|e| e.to_string())?;
            let outcome =
                derive_identity(&rels, &w, &limits.limits()).map_err(|e| e.to_string())?;
            if json {
                print_json(out, &outcome);
            } else {
                match &outcome {
                    SearchOutcome::Verified(cert) => {
                        let _ = writeln!(out, "verified in {} steps", cert.steps.len());
                        for (step, word) in cert.steps.iter().zip(&cert.trace) {
                            let _ = writeln!(
                                out,
                                "  relator {} rot {}{} at {} -> {}",
                                step.relator,
                                step.rotation,
                                if step.inverted { " (inverted)" } else { "" },
                                step.position,
                                word
                            );
                        }
                    }
                    SearchOutcome::Unknown(stats) => {
                        let _ = writeln!(
                            out,
                            "unknown: {} states, {} expansions, limit: {:?}",
                            stats.states, stats.expansions, stats.limit_hit
                        );
                    }
                }
            }
            Ok(if outcome.is_verified() { 0 } else { 1 })
        }

        Command::Q16 { op } => {
            match op {
                Q16Op::Mul { left, right } => {
                    let a = quat16::parse_element(&left).map_err(|e| e.to_string())?;
                    let b = quat16::parse_element(&right).map_err(|e| e.to_string())?;
                    let _ = writeln!(out, "{}", a.mul(&b));
                }
                Q16Op::Order { element } => {
                    let a = quat16::parse_element(&element).map_err(|e| e.to_string())?;
                    let _ = writeln!(out, "{}", a.order());
                }
                Q16Op::Table => {
                    let _ = write!(out, "{}", quat16::multiplication_table());
                }
            }
            Ok(0)
        }

        Command::ShowPresentation {
            tag,
            genus,
            surface,
        } => {
            let p =
                match tag.as_str() {
                    "surface" => {
                        let spec = surface.ok_or("tag=surface needs --surface S<h>|N<l>")?;
                        parse_surface(&spec)?
                    }
                    "p2" => p2_presentation(genus.ok_or("p2 needs --genus")?)
                        .map_err(|e| e.to_string())?,
                    "b2" => b2_presentation(genus.ok_or("b2 needs --genus")?)
                        .map_err(|e| e.to_string())?,
                    "scott" => scott_relation_set(genus.unwrap_or(2)).map_err(|e| e.to_string())?,
                    "q16" => q16_presentation(),
                    other => return Err(format!("unknown tag `{other}`")),
                };
            print_json(out, &p);
            Ok(0)
        }

        Command::Selftest { genus_max, seed } => Ok(selftest(out, genus_max, seed)),
    }
}
