use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use su_kit::constructions::{check_star_property, connected_product, dp_witness, medvedev};
use su_kit::frame::{enumerate_s4_frames_capped, DEFAULT_UPSET_CAP};
use su_kit::harness::{self, SuiteReport};
use su_kit::io::{read_frame_file, read_model_file, write_frame, write_model};
use su_kit::prover::{check_structural_properties, verify_lemma_su_aa, verify_su_star, Sequent, Verdict};
use su_kit::registry::{LogicRegistry, PropertyRegistry};
use su_kit::semantics::{find_countervaluation, find_su_countermodel};
use su_kit::strong_union::{correspondence_check_capped, su_n_failure, satisfies_uni};
use su_kit::{parse, Error, Formula, Frame, Model, Result, SearchBounds};

/// Default seed for every randomised subcommand.
pub const DEFAULT_SEED: u64 = 20_240_601;

/// Exit statuses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    True = 0,
    False = 1,
    Inconclusive = 2,
    InputError = 3,
}

impl Status {
    fn of(b: bool) -> Status {
        if b {
            Status::True
        } else {
            Status::False
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "su-kit", version, about = "Strong unions, frames and proofs for the logic SU")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a formula and print it in canonical form
    Parse { formula: String },
    /// Decide whether a frame validates a formula
    Validate { frame: PathBuf, formula: String },
    /// Check the (su2) condition on a frame
    Su2 { frame: PathBuf },
    /// Check the (Uni) condition on a frame
    Uni { frame: PathBuf },
    /// Emit the Medvedev frame over a k-element set
    Medvedev {
        #[arg(long)]
        size: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Check the union-splitting property of the Medvedev frame of size k
    Star {
        #[arg(long)]
        size: usize,
    },
    /// Emit the connected product of two frames
    Product {
        frame1: PathBuf,
        frame2: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Search for a proof of a sequent `premises |- conclusion`
    Prove {
        #[arg(long, default_value = "ipc")]
        logic: String,
        /// Nesting bound for the su instance search
        #[arg(long, default_value_t = 1)]
        depth: usize,
        /// Print the derivation of a provable sequent
        #[arg(long)]
        certificate: bool,
        sequent: String,
    },
    /// Search (su2) frames for a model refuting a formula
    Countermodel {
        #[arg(long, default_value_t = 4)]
        max_points: usize,
        formula: String,
    },
    /// Glue two rooted countermodels into a countermodel for `alpha | beta`
    DpWitness {
        model1: PathBuf,
        model2: PathBuf,
        alpha: String,
        beta: String,
        /// Rename the second model's variables apart from the first's
        #[arg(long)]
        rename_apart: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Compare validity of su with (su2) on many frames
    Correspondence(CorrespondenceArgs),
    /// Run the lemma and theorem suites
    VerifyLemmas {
        /// Largest frames used by the exhaustive suites
        #[arg(long, default_value_t = 4)]
        max_points: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
pub struct Output {
    /// Write the frame or model here instead of standard output
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CorrespondenceArgs {
    /// Every labelled S4 frame with exactly n points
    #[arg(long, value_name = "N", conflicts_with = "random", required_unless_present = "random")]
    enumerate: Option<usize>,
    /// k seeded random S4 frames
    #[arg(long, value_name = "K", requires = "points")]
    random: Option<usize>,
    /// Size of the random frames: `n` or a range `a-b`
    #[arg(long)]
    points: Option<String>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Print one property line per frame
    #[arg(long)]
    report: bool,
}

fn upset_cap() -> Result<usize> {
    match std::env::var("SU_KIT_CAP_UPSETS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::InvalidArgument(format!("SU_KIT_CAP_UPSETS must be a positive integer, got `{v}`"))),
        Err(_) => Ok(DEFAULT_UPSET_CAP),
    }
}

fn positive(name: &str, n: usize) -> Result<usize> {
    if n == 0 {
        Err(Error::InvalidArgument(format!("{name} must be at least 1")))
    } else {
        Ok(n)
    }
}

fn s4_frame(path: &Path) -> Result<Frame> {
    let named = read_frame_file(path)?;
    if !named.frame.is_s4() {
        return Err(Error::Io {
            path: path.display().to_string(),
            message: "frame is not reflexive and transitive (add `closure`?)".into(),
        });
    }
    Ok(named.frame)
}

fn emit(output: &Output, text: String, out: &mut String) -> Result<()> {
    match &output.output {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }),
        None => {
            out.push_str(&text);
            Ok(())
        }
    }
}

fn write_valuation(out: &mut String, valuation: &BTreeMap<String, su_kit::PointSet>) {
    for (var, set) in valuation {
        write!(out, "val {var}").unwrap();
        for p in set {
            write!(out, " {p}").unwrap();
        }
        out.push('\n');
    }
}

fn parse_points(text: &str) -> Result<Vec<usize>> {
    let bad = || Error::InvalidArgument(format!("--points expects `n` or `a-b`, got `{text}`"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    let (lo, hi) = match text.split_once('-') {
        Some((a, b)) => (num(a)?, num(b)?),
        None => (num(text)?, num(text)?),
    };
    if lo == 0 || lo > hi {
        return Err(bad());
    }
    Ok((lo..=hi).collect())
}

/// Renames every variable of `m` and `f` that also occurs on the first side
/// by appending a numeric suffix, keeping the result fresh on both sides.
fn rename_apart(first: (&Model, &Formula), m: &Model, f: &Formula) -> Result<(Model, Formula)> {
    let mut taken: std::collections::BTreeSet<String> = first.0.valuation().keys().cloned().collect();
    taken.extend(first.1.variables());
    let mut ours: std::collections::BTreeSet<String> = m.valuation().keys().cloned().collect();
    ours.extend(f.variables());
    let mut used = taken.clone();
    used.extend(ours.iter().cloned());
    let mut map = BTreeMap::new();
    for v in ours.iter().filter(|v| taken.contains(*v)) {
        let fresh = (2..)
            .map(|i| format!("{v}{i}"))
            .find(|c| !used.contains(c))
            .expect("unbounded suffixes");
        used.insert(fresh.clone());
        map.insert(v.clone(), fresh);
    }
    let valuation = m
        .valuation()
        .iter()
        .map(|(k, s)| (map.get(k).cloned().unwrap_or_else(|| k.clone()), *s))
        .collect();
    Ok((Model::new(m.frame().clone(), valuation)?, f.rename(&map)))
}

fn first_root(m: &Model, which: &str) -> Result<usize> {
    m.frame()
        .roots()?
        .first()
        .ok_or_else(|| Error::Precondition(format!("{which} model has no root")))
}

fn push_suite(out: &mut String, r: &SuiteReport) -> bool {
    writeln!(out, "{r}").unwrap();
    r.passed()
}

pub fn run(cli: &Cli, out: &mut String) -> Result<Status> {
    match &cli.command {
        Command::Parse { formula } => {
            writeln!(out, "{}", parse(formula)?).unwrap();
            Ok(Status::True)
        }
        Command::Validate { frame, formula } => {
            let f = parse(formula)?;
            let frame = s4_frame(frame)?;
            match find_countervaluation(&frame, &f, upset_cap()?)? {
                None => {
                    writeln!(out, "true").unwrap();
                    Ok(Status::True)
                }
                Some(cv) => {
                    writeln!(out, "false").unwrap();
                    writeln!(out, "refuted at point {}", cv.point).unwrap();
                    write_valuation(out, &cv.valuation);
                    Ok(Status::False)
                }
            }
        }
        Command::Su2 { frame } => {
            let frame = s4_frame(frame)?;
            match su_n_failure(&frame, 2)? {
                None => {
                    writeln!(out, "true").unwrap();
                    Ok(Status::True)
                }
                Some(fail) => {
                    writeln!(out, "false").unwrap();
                    writeln!(
                        out,
                        "point {} sees {} and {} with no strong union among its successors",
                        fail.w, fail.xs[0], fail.xs[1]
                    )
                    .unwrap();
                    Ok(Status::False)
                }
            }
        }
        Command::Uni { frame } => {
            let b = satisfies_uni(&s4_frame(frame)?)?;
            writeln!(out, "{b}").unwrap();
            Ok(Status::of(b))
        }
        Command::Medvedev { size, output } => {
            let m = medvedev(positive("--size", *size)?)?;
            let labels: Vec<String> = (0..m.frame().size()).map(|p| m.describe(p)).collect();
            emit(output, write_frame(&format!("medvedev{size}"), m.frame(), Some(&labels)), out)?;
            Ok(Status::True)
        }
        Command::Star { size } => {
            let b = check_star_property(positive("--size", *size)?)?;
            writeln!(out, "{b}").unwrap();
            Ok(Status::of(b))
        }
        Command::Product { frame1, frame2, output } => {
            let (f1, f2) = (s4_frame(frame1)?, s4_frame(frame2)?);
            let p = connected_product(&f1, &f2)?;
            let labels: Vec<String> = (0..p.frame().size()).map(|i| p.describe(i)).collect();
            emit(output, write_frame("product", p.frame(), Some(&labels)), out)?;
            Ok(Status::True)
        }
        Command::Prove {
            logic,
            depth,
            certificate,
            sequent,
        } => {
            let registry = LogicRegistry::default();
            let logic = registry.get(logic)?;
            let sequent: Sequent = sequent.parse()?;
            let outcome = logic.prove(&sequent, *depth)?;
            writeln!(out, "{}", outcome.verdict).unwrap();
            for inst in &outcome.instances {
                writeln!(out, "instance {inst}").unwrap();
            }
            if *certificate {
                if let Some(d) = &outcome.certificate {
                    write!(out, "{d}").unwrap();
                }
            }
            Ok(match outcome.verdict {
                Verdict::Provable => Status::True,
                Verdict::Unprovable => Status::False,
                Verdict::Inconclusive => Status::Inconclusive,
            })
        }
        Command::Countermodel { max_points, formula } => {
            let f = parse(formula)?;
            let bounds = SearchBounds {
                max_points: positive("--max-points", *max_points)?,
                upset_cap: upset_cap()?,
                ..SearchBounds::default()
            };
            match find_su_countermodel(&f, &bounds)? {
                Some(cm) => {
                    writeln!(out, "refuted at point {}", cm.point).unwrap();
                    out.push_str(&write_model("countermodel", &cm.model, None));
                    Ok(Status::False)
                }
                None => {
                    writeln!(out, "no countermodel up to {max_points} points").unwrap();
                    Ok(Status::Inconclusive)
                }
            }
        }
        Command::DpWitness {
            model1,
            model2,
            alpha,
            beta,
            rename_apart: apart,
            output,
        } => {
            let m1 = read_model_file(model1)?.model;
            let m2 = read_model_file(model2)?.model;
            let alpha = parse(alpha)?;
            let mut beta = parse(beta)?;
            let m2 = if *apart {
                let (m, b) = rename_apart((&m1, &alpha), &m2, &beta)?;
                beta = b;
                m
            } else {
                m2
            };
            let (r1, r2) = (first_root(&m1, "first")?, first_root(&m2, "second")?);
            let w = dp_witness(&m1, r1, &alpha, &m2, r2, &beta)?;
            let labels: Vec<String> = (0..w.product.frame().size()).map(|i| w.product.describe(i)).collect();
            writeln!(out, "root {} refutes {}", w.root, w.disjunction()).unwrap();
            emit(output, write_model("dp_witness", &w.product_model, Some(&labels)), out)?;
            Ok(Status::True)
        }
        Command::Correspondence(args) => correspondence(args, out),
        Command::VerifyLemmas { max_points, seed } => {
            let n = positive("--max-points", *max_points)?;
            let lemma = verify_lemma_su_aa();
            write!(out, "{lemma}").unwrap();
            let mut ok = lemma.passed();
            for k in 1..=3 {
                let b = verify_su_star(k)?;
                writeln!(out, "su* n={k}: {}", if b { "ok" } else { "FAILED" }).unwrap();
                ok &= b;
            }
            let structural = check_structural_properties(*seed);
            write!(out, "{structural}").unwrap();
            ok &= structural.passed();
            for r in [
                harness::lemma_su1(n)?,
                harness::lemma_union_of_unions(n)?,
                harness::lemma_su2_to_su_n(n, 4)?,
                harness::corollary_su2_iff_su(n, 4)?,
                harness::product_suite(n.min(3), 3)?,
            ] {
                ok &= push_suite(out, &r);
            }
            Ok(Status::of(ok))
        }
    }
}

fn correspondence(args: &CorrespondenceArgs, out: &mut String) -> Result<Status> {
    let cap = upset_cap()?;
    let frames: Vec<(String, Frame)> = match (args.enumerate, args.random) {
        (Some(n), _) => enumerate_s4_frames_capped(positive("--enumerate", n)?, n.max(5))?
            .enumerate()
            .map(|(i, f)| (format!("frame{i}"), f))
            .collect(),
        (None, Some(k)) => {
            let sizes = parse_points(args.points.as_deref().unwrap_or_default())?;
            harness::random_frames(positive("--random", k)?, &sizes, args.seed)?
                .into_iter()
                .enumerate()
                .map(|(i, f)| (format!("sample{i}"), f))
                .collect()
        }
        (None, None) => unreachable!("clap requires one mode"),
    };
    let registry = PropertyRegistry::with_defaults(cap);
    let mut agree = 0;
    for (id, frame) in &frames {
        let rep = correspondence_check_capped(frame, cap)?;
        agree += usize::from(rep.agree);
        if args.report {
            writeln!(out, "{}", registry.report_line(id, frame)?).unwrap();
        }
        if !rep.agree {
            writeln!(out, "disagreement on {id}: {frame:?}").unwrap();
        }
    }
    writeln!(out, "{} frames, {agree} agree", frames.len()).unwrap();
    Ok(Status::of(agree == frames.len()))
}
