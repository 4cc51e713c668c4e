//! orthowb: exact-arithmetic workbench for Hermitian forms, projective
//! polarities, finite orthomodular lattices, matrix *-rings, and
//! quantum-logic models.
//!
//! Exit status: 0 = all checks pass, 1 = a mathematical check failed
//! (witness printed), 2 = input or usage error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ortho_core::baer::{EpVerdict, EquivVerdict, MatStarRing, RingError};
use ortho_core::document::{SpaceDocument, StateSpec};
use ortho_core::geometry::{
    check_polarity_axioms, check_projective_axioms, harmonic_conjugate, ortho_conditions,
    relative_polar, Polarity, ProjPoint,
};
use ortho_core::hermitian::{AnisotropyVerdict, FormClass, NormEquiv};
use ortho_core::lattice::{FiniteOML, LatticeError};
use ortho_core::qlogic::{self, AxiomDVerdict, State};
use ortho_core::report::Report;
use ortho_core::run::{CheckConfig, ModeChoice};
use ortho_core::scalar::{FieldDescriptor, Scalar};
use ortho_core::{Subspace, Vector};

#[derive(Parser)]
#[command(
    name = "orthowb",
    version,
    about = "Exact checks for Hermitian forms, polarities, orthomodular lattices, *-rings, and quantum logics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Auto,
    Exhaustive,
    Sampled,
}

#[derive(Args)]
struct CheckOpts {
    /// Exhaustive refuses inputs beyond the cap instead of sampling.
    #[arg(long, value_enum, default_value = "auto")]
    mode: ModeArg,
    /// Seed for all sampled-mode randomness.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Enumeration cap for exhaustive scans.
    #[arg(long, default_value_t = 20_000)]
    cap: usize,
    /// Sample count for sampled-mode scans.
    #[arg(long, default_value_t = 500)]
    samples: usize,
    /// Run scans sequentially instead of in parallel.
    #[arg(long)]
    sequential: bool,
}

impl CheckOpts {
    fn config(&self) -> CheckConfig {
        CheckConfig {
            mode: match self.mode {
                ModeArg::Auto => ModeChoice::Auto,
                ModeArg::Exhaustive => ModeChoice::Exhaustive,
                ModeArg::Sampled => ModeChoice::Sampled,
            },
            cap: self.cap,
            samples: self.samples,
            seed: self.seed,
            parallel: !self.sequential,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Orthogonal complement of a named subspace.
    Perp {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        subspace: String,
        #[command(flatten)]
        opts: CheckOpts,
    },
    /// Double-perp closure of a named subspace.
    Closure {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        subspace: String,
        #[command(flatten)]
        opts: CheckOpts,
    },
    /// Orthomodularity, anisotropy, and the Hermitian/symplectic split.
    CheckSpace {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        opts: CheckOpts,
    },
    /// Harmonic conjugate of C with respect to P and Q (three --subspace
    /// names, in that order), plus the relative polar when it exists.
    Harmonic {
        #[arg(long)]
        input: PathBuf,
        #[arg(long = "subspace", num_args = 1)]
        subspaces: Vec<String>,
        #[command(flatten)]
        opts: CheckOpts,
    },
    /// The three equivalent orthomodularity conditions of the polarity.
    Lemma33 {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        opts: CheckOpts,
    },
    /// Projective incidence axioms and the polarity axioms.
    GeometryAxioms {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        opts: CheckOpts,
    },
    /// Build the lattice of closed subspaces, run the lattice suite, and
    /// optionally export the Hasse diagram.
    Lattice {
        #[arg(long)]
        input: PathBuf,
        /// Write the Hasse diagram in DOT format to this path.
        #[arg(long)]
        dot: Option<PathBuf>,
        #[command(flatten)]
        opts: CheckOpts,
    },
    /// Matrix *-ring walkthrough: annihilators, projection equivalence,
    /// normalization witnesses, and the corner coordinatization.
    BaerDemo {
        /// rational | gaussian | quaternion | prime
        #[arg(long)]
        field: String,
        /// Modulus for prime fields.
        #[arg(long)]
        modulus: Option<u64>,
        /// Matrix size.
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[command(flatten)]
        opts: CheckOpts,
    },
    /// Question/state model checks: measures, supports, purity, axioms.
    QlogicCheck {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        opts: CheckOpts,
    },
    /// Norm equivalence of two symmetric scalars under the document field.
    NormEquiv {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        mu: String,
        #[command(flatten)]
        opts: CheckOpts,
    },
}

#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<E: std::error::Error> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

fn load(path: &PathBuf) -> Result<SpaceDocument, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    SpaceDocument::parse(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn named_subspace<'a>(doc: &'a SpaceDocument, name: &str) -> Result<&'a Subspace, UsageError> {
    doc.subspace(name)
        .ok_or_else(|| UsageError(format!("no subspace named `{name}` in the document")))
}

fn named_point(doc: &SpaceDocument, name: &str) -> Result<ProjPoint, UsageError> {
    let sub = named_subspace(doc, name)?;
    ProjPoint::from_subspace(sub.clone())
        .map_err(|_| UsageError(format!("subspace `{name}` is not a projective point")))
}

fn run(command: Command) -> Result<Report, UsageError> {
    match command {
        Command::Perp {
            input,
            subspace,
            opts,
        } => {
            let _ = opts.config();
            let doc = load(&input)?;
            let m = named_subspace(&doc, &subspace)?;
            let p = doc.space.perp(m);
            let mut report = Report::new();
            report.result("perp", &p);
            report.result("perp_dim", p.dim());
            let double = doc.space.perp(&p);
            report.check(
                "subspace_contained_in_double_perp",
                double.contains_subspace(m),
                Some(double.to_string()),
            );
            Ok(report)
        }
        Command::Closure {
            input,
            subspace,
            opts,
        } => {
            let _ = opts.config();
            let doc = load(&input)?;
            let m = named_subspace(&doc, &subspace)?;
            let c = doc.space.closure(m);
            let mut report = Report::new();
            report.result("closure", &c);
            let closed = c == *m;
            report.check("closed", closed, (!closed).then(|| c.to_string()));
            Ok(report)
        }
        Command::CheckSpace { input, opts } => {
            let cfg = opts.config();
            let doc = load(&input)?;
            let mut report = Report::new();
            let om = doc.space.check_orthomodular_space(&cfg)?;
            report.note("mode", om.mode);
            report.check(
                "orthomodular",
                om.holds,
                om.witness.as_ref().map(|w| w.to_string()),
            );
            let aniso = doc.space.anisotropy(&cfg)?;
            match &aniso {
                AnisotropyVerdict::Anisotropic => report.check("anisotropic", true, None),
                AnisotropyVerdict::Isotropic(w) => {
                    report.check("anisotropic", false, Some(w.to_string()))
                }
                AnisotropyVerdict::Unknown => report.note("anisotropy", "unknown"),
            }
            if !matches!(aniso, AnisotropyVerdict::Unknown) {
                let agree = aniso.is_anisotropic() == om.holds;
                report.check(
                    "anisotropy_matches_orthomodularity",
                    agree,
                    (!agree).then(|| "verdicts_disagree".to_string()),
                );
            }
            match doc.space.classify_form() {
                FormClass::HermitianCase(w) => {
                    report.result("classification", "hermitian");
                    report.note("nonisotropic_witness", w);
                }
                FormClass::SymplecticCase => report.result("classification", "symplectic"),
            }
            Ok(report)
        }
        Command::Harmonic {
            input,
            subspaces,
            opts,
        } => {
            let _ = opts.config();
            let doc = load(&input)?;
            if subspaces.len() != 3 {
                return Err(UsageError(
                    "harmonic needs exactly three --subspace names: C, P, Q".into(),
                ));
            }
            let c = named_point(&doc, &subspaces[0])?;
            let p = named_point(&doc, &subspaces[1])?;
            let q = named_point(&doc, &subspaces[2])?;
            let pol = Polarity::from_space(doc.space.clone());
            let conj = harmonic_conjugate(&pol, &c, &p, &q)?;
            let mut report = Report::new();
            report.result("harmonic_conjugate", &conj);
            report.check(
                "conjugate_differs_from_c",
                conj.subspace() != c.subspace(),
                Some(conj.to_string()),
            );
            match relative_polar(&pol, &c, &p, &q) {
                Ok(polar) => {
                    report.result("relative_polar", &polar);
                    report.result(
                        "conjugate_coincides_with_polar",
                        polar.subspace() == conj.subspace(),
                    );
                }
                Err(e) => report.note("relative_polar", e),
            }
            Ok(report)
        }
        Command::Lemma33 { input, opts } => {
            let doc = load(&input)?;
            Ok(ortho_conditions(
                &Polarity::from_space(doc.space),
                &opts.config(),
            )?)
        }
        Command::GeometryAxioms { input, opts } => {
            let cfg = opts.config();
            let doc = load(&input)?;
            let mut report = Report::new();
            if doc.space.descriptor().is_prime_field() {
                report.merge(check_projective_axioms(
                    doc.space.descriptor(),
                    doc.space.dim(),
                    &cfg,
                )?);
            } else {
                report.note("projective_axioms", "skipped-non-enumerable-field");
            }
            report.merge(check_polarity_axioms(
                &Polarity::from_space(doc.space),
                &cfg,
            )?);
            Ok(report)
        }
        Command::Lattice { input, dot, opts } => {
            let cfg = opts.config();
            let doc = load(&input)?;
            let mut report = Report::new();
            let built = if doc.space.descriptor().is_prime_field() {
                FiniteOML::from_space(&doc.space, &cfg)
            } else {
                let gens: Vec<Subspace> = doc.subspaces.iter().map(|(_, s)| s.clone()).collect();
                FiniteOML::from_generators(&doc.space, &gens, &cfg)
            };
            let lat = match built {
                Ok(lat) => lat,
                Err(LatticeError::NonOrthomodular(w)) => {
                    report.check("lattice_construction", false, Some(w));
                    return Ok(report);
                }
                Err(e) => return Err(e.into()),
            };
            report.check("lattice_construction", true, None);
            report.result("elements", lat.len());
            report.result("atoms", lat.atoms().len());
            report.merge(lat.check_oml_axioms(&cfg));
            report.merge(lat.covering_check(&cfg));
            let atomistic = lat.is_atomistic();
            report.check(
                "atomistic",
                atomistic,
                (!atomistic).then(|| "join_of_atoms".into()),
            );
            report.result("center_size", lat.center().len());
            report.result("irreducible", lat.is_irreducible());
            match lat.omega_embed() {
                Ok(omega) => report.merge(omega.verify(&lat, &cfg)),
                Err(e) => report.note("omega_embedding", e),
            }
            match lat.atom_pair_harmonic_report(&cfg) {
                Ok(r) => report.merge(r),
                Err(LatticeError::NoOrthogonalAtomPair) => {
                    report.note("atom_pair_harmonic", "no-orthogonal-atom-pair")
                }
                Err(e) => return Err(e.into()),
            }
            if let Some(path) = dot {
                std::fs::write(&path, lat.to_dot())
                    .map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
                report.note("dot_written", path.display());
            }
            Ok(report)
        }
        Command::BaerDemo {
            field,
            modulus,
            n,
            opts,
        } => {
            let cfg = opts.config();
            let desc = match (field.as_str(), modulus) {
                ("rational", None) => FieldDescriptor::rational(),
                ("gaussian", None) => FieldDescriptor::gaussian(),
                ("quaternion", None) => FieldDescriptor::quaternion(),
                ("prime", Some(p)) => FieldDescriptor::prime(p)?,
                ("prime", None) => return Err(UsageError("prime fields need --modulus".into())),
                (other, _) => {
                    return Err(UsageError(format!(
                        "unknown field `{other}` (rational|gaussian|quaternion|prime)"
                    )))
                }
            };
            if n < 1 {
                return Err(UsageError("--n must be at least 1".into()));
            }
            let mut report = Report::new();
            let ring = match MatStarRing::new(desc, n, &cfg) {
                Ok(r) => r,
                Err(RingError::NotBaer(w)) => {
                    report.check("baer_ring", false, Some(w));
                    return Ok(report);
                }
                Err(e) => return Err(e.into()),
            };
            report.check("baer_ring", true, None);
            report.result("ring_size", n);

            let ann_zero = ring.right_annihilator(&[ring.zero()])?;
            report.check(
                "rtann_of_zero_is_identity",
                ann_zero.generator == ring.identity(),
                Some(ann_zero.generator.to_string()),
            );
            let ann_one = ring.right_annihilator(&[ring.identity()])?;
            report.check(
                "rtann_of_identity_is_zero",
                ann_one.generator == ring.zero(),
                Some(ann_one.generator.to_string()),
            );
            let e0 = ring.minimal_projection();
            report.check(
                "e0_is_minimal",
                ring.is_minimal_projection(&e0),
                Some("E11".into()),
            );
            if n >= 2 {
                let ann = ring.right_annihilator(std::slice::from_ref(&e0))?;
                report.result("rtann_e11_generator", &ann.generator);
                let e11 = ring.unit(0, 0);
                let e22 = ring.unit(1, 1);
                match ring.projections_equivalent(&e11, &e22, &cfg)? {
                    EquivVerdict::Witness(w) => {
                        let ok = w.star().mul(&w) == e11 && w.mul(&w.star()) == e22;
                        report.check("e11_equivalent_e22", ok, Some(w.to_string()));
                    }
                    EquivVerdict::NoWitness => {
                        report.check("e11_equivalent_e22", false, Some("none".into()))
                    }
                    EquivVerdict::Unknown => report.note("e11_equivalent_e22", "unknown"),
                }
                report.check(
                    "e11_not_equivalent_to_identity",
                    matches!(
                        ring.projections_equivalent(&e11, &ring.identity(), &cfg)?,
                        EquivVerdict::NoWitness
                    ),
                    Some("rank".into()),
                );
            }
            // normalization witnesses on coordinatized rows
            let coord = ring.coordinatize();
            let unit_row = coord.embed_row(&Vector::standard_basis(desc, n, 0));
            match ring.ep_witness(&unit_row, &cfg)? {
                EpVerdict::Witness(lam) => report.result("ep_witness_unit", lam),
                other => report.note("ep_witness_unit", format!("{other:?}")),
            }
            if n >= 2 && !desc.is_prime_field() {
                let mut coords = vec![Scalar::zero(desc); n];
                coords[0] = Scalar::from_integer(desc, 3);
                coords[1] = Scalar::from_integer(desc, 4);
                let v = Vector::new(desc, coords);
                match ring.ep_witness(&coord.embed_row(&v), &cfg)? {
                    EpVerdict::Witness(lam) => report.result("ep_witness_34", lam),
                    other => report.note("ep_witness_34", format!("{other:?}")),
                }
            }
            report.merge(coord.verify(&cfg));
            Ok(report)
        }
        Command::QlogicCheck { input, opts } => {
            let cfg = opts.config();
            let doc = load(&input)?;
            let mut report = Report::new();
            let built = if doc.space.descriptor().is_prime_field() {
                FiniteOML::from_space(&doc.space, &cfg)
            } else {
                let gens: Vec<Subspace> = doc.subspaces.iter().map(|(_, s)| s.clone()).collect();
                FiniteOML::from_generators(&doc.space, &gens, &cfg)
            };
            let lat = match built {
                Ok(l) => l,
                Err(LatticeError::NonOrthomodular(w)) => {
                    report.check("lattice_construction", false, Some(w));
                    return Ok(report);
                }
                Err(e) => return Err(e.into()),
            };
            report.result("elements", lat.len());

            let mut model: Vec<(String, State)> = Vec::new();
            for spec in &doc.states {
                let state = match spec {
                    StateSpec::Vector { vector, .. } => {
                        State::vector_state(&doc.space, &lat, vector)?
                    }
                    StateSpec::Atomic { vector, .. } => {
                        let line = Subspace::line(vector);
                        let idx = lat.index_of_subspace(&line).ok_or_else(|| {
                            UsageError(format!("`{line}` is not a lattice element"))
                        })?;
                        if !lat.atoms().contains(&idx) {
                            return Err(UsageError(format!("`{line}` is not an atom")));
                        }
                        State::atom_state(&lat, idx)?
                    }
                    StateSpec::Mixture { parts, .. } => {
                        let mut resolved = Vec::new();
                        for (w, name) in parts {
                            let state = model
                                .iter()
                                .find(|(n, _)| n == name)
                                .map(|(_, s)| s)
                                .ok_or_else(|| {
                                    UsageError(format!("mixture refers to unknown state `{name}`"))
                                })?;
                            resolved.push((w.clone(), state));
                        }
                        State::mixture(&lat, &resolved)?
                    }
                };
                model.push((spec.name().to_string(), state));
            }
            let states: Vec<State> = model.iter().map(|(_, s)| s.clone()).collect();
            for (name, state) in &model {
                let support = state.support(&lat)?;
                report.result(&format!("support_{name}"), lat.label(support.support));
                report.result(&format!("pure_{name}"), state.is_pure(&lat, &states)?);
            }
            if !states.is_empty() {
                report.merge(qlogic::check_axioms(&lat, &states, &cfg)?);
            } else {
                report.note("axioms", "no-states-defined");
            }

            // ample-unitary-group witnesses across orthogonal atom pairs,
            // cross-checked against norm equivalence
            let atoms = lat.atoms();
            let mut pairs = 0u32;
            let mut mismatch = None;
            for (i, &a) in atoms.iter().enumerate() {
                for &b in &atoms[i + 1..] {
                    if !lat.orthogonal(a, b) {
                        continue;
                    }
                    pairs += 1;
                    let pa = ProjPoint::from_subspace(lat.subspace(a).unwrap().clone())?;
                    let pb = ProjPoint::from_subspace(lat.subspace(b).unwrap().clone())?;
                    let witness = qlogic::axiom_d_witness(&doc.space, &pa, &pb, &cfg)?;
                    let equiv = doc.space.norm_equiv(
                        &doc.space.self_form(pa.rep()),
                        &doc.space.self_form(pb.rep()),
                        &cfg,
                    )?;
                    let agree = matches!(
                        (&witness, &equiv),
                        (AxiomDVerdict::Witness(_), NormEquiv::Equivalent(_))
                            | (AxiomDVerdict::NoWitness, NormEquiv::Inequivalent)
                            | (AxiomDVerdict::Unknown, NormEquiv::Unknown)
                    );
                    if !agree {
                        mismatch = Some(format!("pair=({pa},{pb})"));
                        break;
                    }
                }
            }
            report.note("axiomD_pairs", pairs);
            report.check(
                "axiomD_agrees_with_norm_equiv",
                mismatch.is_none(),
                mismatch,
            );
            Ok(report)
        }
        Command::NormEquiv {
            input,
            lambda,
            mu,
            opts,
        } => {
            let cfg = opts.config();
            let doc = load(&input)?;
            let desc = doc.space.descriptor();
            let lam = Scalar::parse(&lambda, &desc)?;
            let mu = Scalar::parse(&mu, &desc)?;
            let mut report = Report::new();
            match doc.space.norm_equiv(&lam, &mu, &cfg)? {
                NormEquiv::Equivalent(rho) => {
                    report.result("verdict", "equivalent");
                    report.result("witness", &rho);
                    report.check(
                        "witness_verifies",
                        rho.mul(&mu).mul(&rho.star()) == lam,
                        Some(rho.to_string()),
                    );
                }
                NormEquiv::Inequivalent => report.result("verdict", "inequivalent"),
                NormEquiv::Unknown => report.result("verdict", "unknown"),
            }
            Ok(report)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(report) => {
            print!("{report}");
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
