//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its elapsed time against the stated budget. Expected values come from
//! independent oracles computed in this file (enumeration, square classes,
//! direct expansion), never from the code paths under test.

use std::time::{Duration, Instant};

use num_rational::BigRational;

use ortho_core::baer::{EpVerdict, EquivVerdict, MatStarRing};
use ortho_core::geometry::{
    harmonic_conjugate, norm_equiv_by_harmonic, ortho_conditions,
    verify_harmonic_choice_independence, HarmonicNormVerdict, Polarity, ProjPoint,
};
use ortho_core::hermitian::{AnisotropyVerdict, HermitianSpace};
use ortho_core::lattice::FiniteOML;
use ortho_core::linalg::{enumerate_subspaces, random_nonzero_vector, random_subspace};
use ortho_core::qlogic::{self, AxiomDVerdict, State};
use ortho_core::run::{CheckConfig, SplitMix64};
use ortho_core::scalar::{FieldDescriptor, Scalar};
use ortho_core::{Subspace, Vector};

fn cfg() -> CheckConfig {
    CheckConfig::default()
}

fn finish(criterion: u32, name: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    println!("ACCEPTANCE {criterion} {name} PASS ({elapsed:.2?} < {budget:.2?})");
    assert!(
        elapsed < budget,
        "criterion {criterion} exceeded its budget: {elapsed:.2?} >= {budget:.2?}"
    );
}

/// The eight desk-scale spaces of criteria 1 and 2.
fn criterion_spaces() -> Vec<(u64, Vec<i64>, HermitianSpace)> {
    let mut out = Vec::new();
    for p in [3u64, 5] {
        let desc = FieldDescriptor::prime(p).unwrap();
        for entries in [vec![1i64, 1], vec![1, 2], vec![1, 4], vec![1, 1, 1]] {
            let space = HermitianSpace::diagonal_from_integers(desc, &entries);
            out.push((p, entries, space));
        }
    }
    out
}

#[test]
fn criterion_1_anisotropic_iff_orthomodular() {
    let started = Instant::now();
    let c = cfg();
    for (p, entries, space) in criterion_spaces() {
        let aniso = space.anisotropy(&c).unwrap();
        let om = space.check_orthomodular_space(&c).unwrap();
        assert_eq!(
            aniso.is_anisotropic(),
            om.holds,
            "GF({p}) diag{entries:?}: the two verdicts must coincide"
        );
        // independent oracle: brute-force isotropy over all nonzero vectors
        let desc = space.descriptor();
        let mut iso_oracle = false;
        let mut coords = vec![0u64; space.dim()];
        'outer: loop {
            if coords.iter().any(|&c| c != 0) {
                let v = Vector::new(
                    desc,
                    coords.iter().map(|&c| Scalar::residue(desc, c)).collect(),
                );
                if space.self_form(&v).is_zero() {
                    iso_oracle = true;
                    break;
                }
            }
            let mut i = 0;
            loop {
                if i == coords.len() {
                    break 'outer;
                }
                coords[i] += 1;
                if coords[i] < p {
                    break;
                }
                coords[i] = 0;
                i += 1;
            }
        }
        assert_eq!(aniso.is_anisotropic(), !iso_oracle);

        if p == 3 && entries == vec![1, 1, 1] {
            assert!(!om.holds);
            let witness = om.witness.expect("failing space must carry a witness");
            assert_eq!(
                witness,
                Subspace::span(desc, 3, vec![Vector::from_integers(desc, &[1, 1, 1])])
            );
            assert!(matches!(aniso, AnisotropyVerdict::Isotropic(_)));
        }
    }
    finish(
        1,
        "anisotropic_iff_orthomodular",
        started,
        Duration::from_secs(2),
    );
}

#[test]
fn criterion_2_ortho_condition_equivalence() {
    let started = Instant::now();
    let c = cfg();
    for (p, entries, space) in criterion_spaces() {
        let report = ortho_conditions(&Polarity::from_space(space), &c).unwrap();
        let flags: Vec<bool> = (1..=3)
            .map(|i| report.pass_of(&format!("condition{i}")).unwrap())
            .collect();
        assert!(
            flags.iter().all(|&f| f == flags[0]),
            "GF({p}) diag{entries:?}: conditions disagree: {flags:?}"
        );
        assert_eq!(report.pass_of("conditions_agree"), Some(true));
        assert_eq!(report.note_of("mode"), Some("exhaustive"));
    }
    finish(
        2,
        "ortho_condition_equivalence",
        started,
        Duration::from_secs(5),
    );
}

#[test]
fn criterion_3_closure_laws() {
    let started = Instant::now();
    // every subspace of every enumerated space is closed
    for (_, _, space) in criterion_spaces() {
        let all = enumerate_subspaces(space.descriptor(), space.dim(), 20_000).unwrap();
        for m in &all {
            assert_eq!(space.closure(m), *m);
        }
    }
    // 1000 random subspaces across the infinite fields, dims <= 4
    let infinite = [
        FieldDescriptor::rational(),
        FieldDescriptor::gaussian(),
        FieldDescriptor::quaternion(),
    ];
    let mut rng = SplitMix64::new(0xacce);
    let mut closures = 0;
    while closures < 1000 {
        for &desc in &infinite {
            for dim in 2..=4usize {
                let space = HermitianSpace::identity_gram(desc, dim);
                let m = random_subspace(desc, dim, &mut rng);
                assert_eq!(space.closure(&m), m);
                closures += 1;
            }
        }
    }
    // the line-extension law on 500 random (M, x)
    let mut pairs = 0;
    while pairs < 500 {
        for &desc in &infinite {
            let space = HermitianSpace::identity_gram(desc, 4);
            let m = random_subspace(desc, 4, &mut rng);
            let x = random_nonzero_vector(desc, 4, &mut rng);
            let line = Subspace::line(&x);
            let lhs = space.closure(&m.sum(&line).unwrap());
            let rhs = space.closure(&m).sum(&line).unwrap();
            assert_eq!(lhs, rhs);
            pairs += 1;
        }
    }
    finish(3, "closure_laws", started, Duration::from_secs(5));
}

#[test]
fn criterion_4_harmonic_machinery() {
    let started = Instant::now();
    let c = cfg();
    let p5 = FieldDescriptor::prime(5).unwrap();

    // synthetic/analytic agreement for every admissible (C, X, Y) on every
    // line of the GF(5) plane geometry
    let pol = Polarity::from_space(HermitianSpace::identity_gram(p5, 3));
    let sweep = verify_harmonic_choice_independence(&pol, &c).unwrap();
    assert!(sweep.passed(), "{sweep}");
    assert_eq!(sweep.note_of("lines"), Some("31"));

    // conjugate of K(e+f) with respect to orthogonal Ke, Kf is K(e-f)
    for desc in [FieldDescriptor::rational(), p5] {
        let space = HermitianSpace::identity_gram(desc, 2);
        let pl = Polarity::from_space(space);
        let e = ProjPoint::from_vector(&Vector::from_integers(desc, &[1, 0])).unwrap();
        let f = ProjPoint::from_vector(&Vector::from_integers(desc, &[0, 1])).unwrap();
        let c_pt = ProjPoint::from_vector(&Vector::from_integers(desc, &[1, 1])).unwrap();
        let conj = harmonic_conjugate(&pl, &c_pt, &e, &f).unwrap();
        assert_eq!(
            conj.subspace(),
            &Subspace::span(desc, 2, vec![Vector::from_integers(desc, &[1, -1])])
        );
    }

    // square-class oracle over GF(5): squares of 1..4 mod 5
    let squares: std::collections::BTreeSet<u64> = (1..5u64).map(|r| r * r % 5).collect();
    assert!(squares.contains(&4) && !squares.contains(&2));

    let p = ProjPoint::from_vector(&Vector::from_integers(p5, &[1, 0])).unwrap();
    let q = ProjPoint::from_vector(&Vector::from_integers(p5, &[0, 1])).unwrap();
    let pol14 = Polarity::from_space(HermitianSpace::diagonal_from_integers(p5, &[1, 4]));
    // 1 = rho * 4 * rho needs 4^-1 = 4 to be a square: it is
    assert!(matches!(
        norm_equiv_by_harmonic(&pol14, &p, &q, &c).unwrap(),
        HarmonicNormVerdict::Witness(_)
    ));
    let pol12 = Polarity::from_space(HermitianSpace::diagonal_from_integers(p5, &[1, 2]));
    // 2^-1 = 3 is not a square, so no witness can exist
    assert_eq!(
        norm_equiv_by_harmonic(&pol12, &p, &q, &c).unwrap(),
        HarmonicNormVerdict::NoWitness
    );
    finish(4, "harmonic_machinery", started, Duration::from_secs(3));
}

#[test]
fn criterion_5_lattice_suite() {
    let started = Instant::now();
    let c = cfg();
    let p3 = FieldDescriptor::prime(3).unwrap();
    let p5 = FieldDescriptor::prime(5).unwrap();

    // oracle: atom count (p^2-1)/(p-1), element count atoms + 2
    let atom_oracle = |p: u64| (p * p - 1) / (p - 1);

    let lat3 = FiniteOML::from_space(&HermitianSpace::identity_gram(p3, 2), &c).unwrap();
    assert_eq!(lat3.atoms().len() as u64, atom_oracle(3));
    assert_eq!(lat3.len() as u64, atom_oracle(3) + 2);
    assert_eq!(lat3.len(), 6);

    let lat5 =
        FiniteOML::from_space(&HermitianSpace::diagonal_from_integers(p5, &[1, 2]), &c).unwrap();
    assert_eq!(lat5.atoms().len() as u64, atom_oracle(5));
    assert_eq!(lat5.len(), 8);

    for lat in [&lat3, &lat5] {
        assert!(lat.check_oml_axioms(&c).passed());
        assert!(lat.is_atomistic());
        assert!(lat.covering_check(&c).passed());
        assert!(lat.is_irreducible());
        let omega = lat.omega_embed().unwrap();
        let r = omega.verify(lat, &c);
        assert!(r.passed(), "{r}");
    }

    // the benzene ring fails the orthomodular law exactly at (a, b)
    let o6 = FiniteOML::benzene();
    let r = o6.check_oml_axioms(&c);
    assert_eq!(r.pass_of("orthomodular_law"), Some(false));
    assert_eq!(r.witness_of("orthomodular_law"), Some("a,b"));
    finish(5, "lattice_suite", started, Duration::from_secs(2));
}

#[test]
fn criterion_6_baer_coordinatization() {
    let started = Instant::now();
    let c = cfg();
    let gauss = FieldDescriptor::gaussian();
    let ring = MatStarRing::new(gauss, 2, &c).unwrap();
    let coord = ring.coordinatize();

    // identity gram, oracle: symbolic expansion of e0 a b* e0 is the
    // standard first-row pairing
    assert_eq!(
        coord.space().gram(),
        HermitianSpace::identity_gram(gauss, 2).gram()
    );
    let mut rng = SplitMix64::new(6);
    for _ in 0..25 {
        let u = ortho_core::linalg::random_vector(gauss, 2, &mut rng);
        let v = ortho_core::linalg::random_vector(gauss, 2, &mut rng);
        let ring_side = coord.form_from_ring(&coord.embed_row(&u), &coord.embed_row(&v));
        // oracle: sum_j u_j v_j* expanded directly
        let mut oracle = Scalar::zero(gauss);
        for j in 0..2 {
            oracle = oracle.add(&u.get(j).mul(&v.get(j).star()));
        }
        assert_eq!(ring_side, oracle);
    }
    let verification = coord.verify(&c);
    assert!(verification.passed(), "{verification}");

    // RtAnn({E11}) = E22 A
    let ann = ring.right_annihilator(&[ring.unit(0, 0)]).unwrap();
    assert_eq!(ann.generator, ring.unit(1, 1));

    // E11 ~ E22 via w = E21 (and the matrix-product oracle for that w)
    let e11 = ring.unit(0, 0);
    let e22 = ring.unit(1, 1);
    let w = ring.unit(1, 0);
    assert_eq!(w.star().mul(&w), e11);
    assert_eq!(w.mul(&w.star()), e22);
    match ring.projections_equivalent(&e11, &e22, &c).unwrap() {
        EquivVerdict::Witness(found) => assert_eq!(found, w),
        other => panic!("expected the E21 witness, got {other:?}"),
    }

    // normalization witnesses over the rationals
    let rat = FieldDescriptor::rational();
    let ring_q = MatStarRing::new(rat, 2, &c).unwrap();
    let coord_q = ring_q.coordinatize();
    let x25 = coord_q.embed_row(&Vector::from_integers(rat, &[3, 4]));
    assert_eq!(
        ring_q.ep_witness(&x25, &c).unwrap(),
        EpVerdict::Witness(Scalar::from_rational(
            rat,
            BigRational::new(1.into(), 5.into())
        ))
    );
    let x2 = coord_q.embed_row(&Vector::from_integers(rat, &[1, 1]));
    assert_eq!(ring_q.ep_witness(&x2, &c).unwrap(), EpVerdict::NoWitness);
    finish(6, "baer_coordinatization", started, Duration::from_secs(1));
}

#[test]
fn criterion_7_quantum_logic() {
    let started = Instant::now();
    let c = cfg();
    let rat = FieldDescriptor::rational();

    // the two-level probabilities 9/25 and 16/25 for x = (3, 4)
    let plane = HermitianSpace::identity_gram(rat, 2);
    let x = Vector::from_integers(rat, &[3, 4]);
    let x_line = Subspace::line(&x);
    let lat = FiniteOML::from_generators(&plane, std::slice::from_ref(&x_line), &c).unwrap();
    let axis_lat = FiniteOML::from_generators(
        &plane,
        &[Subspace::span(
            rat,
            2,
            vec![Vector::standard_basis(rat, 2, 0)],
        )],
        &c,
    )
    .unwrap();
    let m = State::vector_state(&plane, &axis_lat, &x).unwrap();
    let ke1 = axis_lat
        .index_of_subspace(&Subspace::span(
            rat,
            2,
            vec![Vector::standard_basis(rat, 2, 0)],
        ))
        .unwrap();
    let ke2 = axis_lat
        .index_of_subspace(&Subspace::span(
            rat,
            2,
            vec![Vector::standard_basis(rat, 2, 1)],
        ))
        .unwrap();
    assert_eq!(*m.value(ke1), BigRational::new(9.into(), 25.into()));
    assert_eq!(*m.value(ke2), BigRational::new(16.into(), 25.into()));

    // support(vector_state(x)) = Kx in a lattice containing Kx
    let mx = State::vector_state(&plane, &lat, &x).unwrap();
    let support = mx.support(&lat).unwrap().support;
    assert_eq!(lat.subspace(support).unwrap(), &x_line);

    // axiom suite passes on the GF(3)-derived model with its atom states
    let p3 = FieldDescriptor::prime(3).unwrap();
    let mo4 = FiniteOML::from_space(&HermitianSpace::identity_gram(p3, 2), &c).unwrap();
    let model: Vec<State> = mo4
        .atoms()
        .iter()
        .map(|&p| State::atom_state(&mo4, p).unwrap())
        .collect();
    let r = qlogic::check_axioms(&mo4, &model, &c).unwrap();
    assert!(r.passed(), "{r}");

    // ... and C1 fails on the Boolean square
    let e1 = State::vector_state(&plane, &axis_lat, &Vector::standard_basis(rat, 2, 0)).unwrap();
    let e2 = State::vector_state(&plane, &axis_lat, &Vector::standard_basis(rat, 2, 1)).unwrap();
    let boolean_model = vec![e1, e2];
    let rb = qlogic::check_axioms(&axis_lat, &boolean_model, &c).unwrap();
    assert_eq!(rb.pass_of("axiomC1_superposition_exists"), Some(false));

    // unitary-witness existence agrees with norm equivalence, exhaustively
    // over prime-field diagonal forms in dims 2 and 3
    for p in [3u64, 5] {
        let desc = FieldDescriptor::prime(p).unwrap();
        for dim in [2usize, 3] {
            let mut entries = vec![1u64; dim];
            loop {
                let space = HermitianSpace::diagonal_from_integers(
                    desc,
                    &entries.iter().map(|&e| e as i64).collect::<Vec<_>>(),
                );
                for i in 0..dim {
                    for j in 0..dim {
                        if i == j {
                            continue;
                        }
                        let a =
                            ProjPoint::from_vector(&Vector::standard_basis(desc, dim, i)).unwrap();
                        let b =
                            ProjPoint::from_vector(&Vector::standard_basis(desc, dim, j)).unwrap();
                        let witness = qlogic::axiom_d_witness(&space, &a, &b, &c).unwrap();
                        let equiv = space
                            .norm_equiv(&space.self_form(a.rep()), &space.self_form(b.rep()), &c)
                            .unwrap();
                        assert_eq!(
                            matches!(witness, AxiomDVerdict::Witness(_)),
                            equiv.is_equivalent()
                        );
                    }
                }
                let mut idx = 0;
                loop {
                    if idx == dim {
                        break;
                    }
                    entries[idx] += 1;
                    if entries[idx] < p {
                        break;
                    }
                    entries[idx] = 1;
                    idx += 1;
                }
                if idx == dim {
                    break;
                }
            }
        }
    }
    finish(7, "quantum_logic", started, Duration::from_secs(3));
}
