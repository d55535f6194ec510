//! Acceptance gate: one test per criterion, each printing a single
//! PASS/FAIL line. All identities are exact over the rationals.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use slalg::algebras::{
    character_bimodule, regular_bimodule, semigroup_algebra, symmetric_bimodule_check,
};
use slalg::cli::{execute, parse_instance, Instance, RunConfig};
use slalg::diagrams::{
    build_convolution, evaluation_hom, pullback, transfer_hom, unit_check, ConvolutionAlgebra,
    SemilatticeHom,
};
use slalg::fixtures::shipped_fixtures;
use slalg::homology::{
    betti, boundary, check_diagonal, cohomology_betti, dd_zero_check, direct_sigma_family,
    disintegration_check, find_diagonal, l1l_kaction, mu_checks, normalized_subspace,
    pi_projection, rect_band_homotopy, relative_betti, sigma_family, transfer_chain,
    transfer_checks, ChainIndex, DEFAULT_RESOURCE_LIMIT,
};
use slalg::linalg::{kernel_basis, rank, unit_vec, Rat, SparseMatrix, SparseVec, SubspaceBasis};
use slalg::semigroups::{
    assemble_strong_semilattice, band_class, decompose_strong_semilattice, free_semilattice,
    BandClass,
};

const LIM: usize = DEFAULT_RESOURCE_LIMIT;

fn verdict(n: usize, name: &str, ok: bool) -> bool {
    println!(
        "acceptance criterion {n} ({name}): {}",
        if ok { "PASS" } else { "FAIL" }
    );
    ok
}

fn fixture_map() -> BTreeMap<String, String> {
    shipped_fixtures().into_iter().collect()
}

fn convolution(text: &str) -> ConvolutionAlgebra {
    let inst = parse_instance(text).unwrap();
    match inst.instance {
        Instance::Diagram(d) => build_convolution(&d).unwrap(),
        Instance::Semigroup(_) => panic!("expected a diagram instance"),
    }
}

#[test]
fn criterion_1_disintegration() {
    let fx = fixture_map();
    let instances = [
        "diagram_singleton_s3.json",
        "diagram_const_q_chain2.json",
        "diagram_const_q_chain3.json",
        "diagram_const_q_free2.json",
        "diagram_const_q_free3.json",
        "diagram_const_q_diamond.json",
        "diagram_const_z2_chain2.json",
        "diagram_chain2_s3_q.json",
        "diagram_unitisation_z2.json",
        "clifford_chain2_z2_z2.json",
        "clifford_chain2_z2_triv.json",
        "clifford_chain2_z3_z3.json",
    ];
    let mut ok = instances.len() >= 10;
    for name in instances {
        let ca = convolution(&fx[name]);
        let v = disintegration_check(&ca, 2, LIM).unwrap();
        if !v.pass {
            println!("  disintegration mismatch on {name}: {:?} vs {:?}", v.full, v.diagonal);
            ok = false;
        }
    }
    assert!(verdict(1, "disintegration", ok));
}

#[test]
fn criterion_2_clifford_simplicial_triviality() {
    let fx = fixture_map();
    let mut ok = true;
    let mut algebras = vec![
        semigroup_algebra(&slalg::fixtures::cyclic_group(2)),
        semigroup_algebra(&slalg::fixtures::cyclic_group(3)),
        semigroup_algebra(&slalg::fixtures::symmetric_group_3()),
    ];
    for name in [
        "clifford_chain2_z2_z2.json",
        "clifford_chain2_z2_triv.json",
        "clifford_chain2_z3_z3.json",
    ] {
        let inst = parse_instance(&fx[name]).unwrap();
        let s = assemble_strong_semilattice(&inst.decomposition.unwrap()).unwrap();
        algebras.push(semigroup_algebra(&s));
    }
    for a in &algebras {
        let rep = betti(a, &regular_bimodule(a), 2, LIM).unwrap();
        let b = rep.betti_vector();
        // independent Betti(0) oracle: dim A/[A,A]
        let mut comm = SubspaceBasis::empty(a.dim());
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                let mut v = a.mul_vec(&unit_vec(i), &unit_vec(j));
                let w = a.mul_vec(&unit_vec(j), &unit_vec(i));
                slalg::linalg::add_scaled(&mut v, &-Rat::one(), &w);
                comm.insert(&v);
            }
        }
        if b[1] != 0 || b[2] != 0 || b[0] != a.dim() - comm.dim() {
            println!("  failure on algebra of dim {}: betti {:?}", a.dim(), b);
            ok = false;
        }
    }
    assert!(verdict(2, "clifford simplicial triviality", ok));
}

#[test]
fn criterion_3_splitting_family() {
    let fx = fixture_map();
    let instances = [
        "diagram_singleton_s3.json",
        "diagram_const_q_chain2.json",
        "diagram_const_q_free2.json",
        "diagram_const_q_diamond.json",
        "clifford_chain2_z2_triv.json",
        "diagram_const_z2_chain2.json",
    ];
    let mut ok = instances.len() >= 5;
    for name in instances {
        let ca = convolution(&fx[name]);
        // sigma_family verifies the splitting identity and pi-compatibility
        // exactly in degrees 1, 2 and fails loudly otherwise
        if let Err(e) = sigma_family(&ca, 2, LIM) {
            println!("  sigma construction failed on {name}: {e}");
            ok = false;
        }
        if let Err(e) = direct_sigma_family(&ca, 2, LIM) {
            println!("  direct-solve oracle failed on {name}: {e}");
            ok = false;
        }
    }
    assert!(verdict(3, "splitting family", ok));
}

#[test]
fn criterion_4_mu_and_transfer_algebra() {
    let fx = fixture_map();
    let mut ok = true;
    for name in ["diagram_const_q_chain3.json", "diagram_const_z2_chain2.json"] {
        let ca = convolution(&fx[name]);
        for n in 0..=2 {
            if let Err(e) = mu_checks(&ca, n) {
                println!("  mu check failed on {name} degree {n}: {e}");
                ok = false;
            }
        }
    }
    // at least 3 distinct homomorphisms alpha, with functoriality through
    // a second evaluation hom
    let target = convolution(&fx["diagram_const_q_chain3.json"]);
    let l = target.diagram.shape.clone();
    let mut alphas: Vec<SemilatticeHom> = vec![SemilatticeHom::identity(&l)];
    for (e, f) in [(0, 1), (1, 2), (0, 2)] {
        alphas.push(evaluation_hom(&l, &[e, f]));
    }
    assert!(alphas.len() >= 3);
    for alpha in &alphas {
        let source = build_convolution(&pullback(alpha, &target.diagram)).unwrap();
        if let Err(e) = transfer_checks(alpha, &source, &target, 2) {
            println!("  transfer check failed: {e}");
            ok = false;
        }
        let f2 = free_semilattice(2).unwrap();
        let beta = evaluation_hom(&f2, &[0, 2]);
        let composed = alpha.compose(&beta);
        let mid = build_convolution(&pullback(&beta, &source.diagram)).unwrap();
        let tau_ab = transfer_hom(&composed, &mid, &target).matrix;
        let tau_a = transfer_hom(alpha, &source, &target).matrix;
        let tau_b = transfer_hom(&beta, &mid, &source).matrix;
        for n in 0..=1 {
            if transfer_chain(&tau_ab, n) != transfer_chain(&tau_a, n).mul(&transfer_chain(&tau_b, n)) {
                println!("  transfer functoriality failed at degree {n}");
                ok = false;
            }
        }
    }
    assert!(verdict(4, "mu and transfer algebra", ok));
}

#[test]
fn criterion_5_normalisation_chain() {
    let fx = fixture_map();
    let mut ok = true;
    for name in [
        "diagram_const_q_chain2.json",
        "diagram_const_q_free2.json",
        "diagram_const_z2_chain2.json",
    ] {
        let ca = convolution(&fx[name]);
        let act = l1l_kaction(&ca);
        for n in 1..=2 {
            let sub = normalized_subspace(ca.dim(), ca.dim(), &act, n);
            let pi = pi_projection(&ca, n);
            let dim = ChainIndex::new(ca.dim(), ca.dim(), n).dim();
            if !(0..dim).all(|j| sub.contains(&pi.apply(&unit_vec(j)))) {
                println!("  pi image escapes the normalised subspace on {name} degree {n}");
                ok = false;
            }
        }
    }
    for k in 1..=3 {
        let l = free_semilattice(k).unwrap();
        let q = semigroup_algebra(&slalg::fixtures::trivial_group());
        let ca = build_convolution(&slalg::diagrams::constant_diagram(&l, &q)).unwrap();
        let act = l1l_kaction(&ca);
        let reg = regular_bimodule(&ca.algebra);
        let rel = relative_betti(&ca.algebra, &reg, &act, 2, LIM).unwrap();
        let full = betti(&ca.algebra, &reg, 2, LIM).unwrap().betti_vector();
        if rel != full {
            println!("  relative betti {rel:?} differs from {full:?} for k = {k}");
            ok = false;
        }
    }
    assert!(verdict(5, "normalisation chain", ok));
}

#[test]
fn criterion_6_contractibility_and_units() {
    let fx = fixture_map();
    let mut ok = true;
    for k in 1..=3 {
        let a = semigroup_algebra(free_semilattice(k).unwrap().semigroup());
        match find_diagonal(&a) {
            Some(delta) if check_diagonal(&a, &delta) => {}
            _ => {
                println!("  no verified diagonal for the free semilattice on {k} generators");
                ok = false;
            }
        }
    }
    // unit checks on every shipped diagram whose shape algebra is unital
    for (name, text) in &fx {
        if !name.starts_with("diagram") && !name.starts_with("clifford") {
            continue;
        }
        let ca = convolution(text);
        let u = unit_check(&ca);
        if let (Some(_), Some(b), Some(c)) = (&u.unit, u.block_checks_pass, u.coefficient_identity_pass)
        {
            if !(b && c) {
                println!("  unit check failed on {name}");
                ok = false;
            }
        }
    }
    // the derived unit a + b − ab of the free semilattice on two generators
    let ca = convolution(&fx["diagram_const_q_free2.json"]);
    let u = unit_check(&ca).unit.unwrap();
    let mut expected = SparseVec::new();
    expected.insert(0, Rat::one());
    expected.insert(1, Rat::one());
    expected.insert(2, -Rat::one());
    if u != expected {
        println!("  unexpected shape unit {u:?}");
        ok = false;
    }
    assert!(verdict(6, "contractibility and units", ok));
}

#[test]
fn criterion_7_bands() {
    let mut ok = true;
    // all rectangular bands of size <= 9, homotopy identity in degrees 1..3
    for p in 1..=9usize {
        for q in 1..=9usize {
            if p * q > 9 {
                continue;
            }
            let r = slalg::fixtures::rectangular_band(p, q);
            let a = semigroup_algebra(&r);
            let reg = regular_bimodule(&a);
            let mut prev = rect_band_homotopy(&r, 0, 0).unwrap();
            for n in 1..=3 {
                let s = rect_band_homotopy(&r, 0, n).unwrap();
                let lhs = boundary(&a, &reg, n).mul(&s).add(&prev.mul(&boundary(&a, &reg, n - 1)));
                let dim = ChainIndex::new(p * q, p * q, n).dim();
                if lhs != SparseMatrix::identity(dim) {
                    println!("  homotopy identity failed for the {p}x{q} band at degree {n}");
                    ok = false;
                }
                prev = s;
            }
        }
    }
    // the 6-element normal band: decompose, reassemble, simplicially trivial
    let s = slalg::fixtures::normal_band_6();
    if band_class(&s) != BandClass::NormalBand {
        ok = false;
    }
    match decompose_strong_semilattice(&s) {
        Some(dec) => {
            let re = assemble_strong_semilattice(&dec.data).unwrap();
            let same = (0..6).all(|i| {
                (0..6).all(|j| {
                    dec.original_of[re.product(i, j)]
                        == s.product(dec.original_of[i], dec.original_of[j])
                })
            });
            if !same {
                println!("  reassembled table differs");
                ok = false;
            }
        }
        None => {
            println!("  normal band fixture failed to decompose");
            ok = false;
        }
    }
    let a = semigroup_algebra(&s);
    let b = betti(&a, &regular_bimodule(&a), 2, LIM).unwrap().betti_vector();
    if b[1] != 0 || b[2] != 0 {
        println!("  normal band convolution algebra not simplicially trivial: {b:?}");
        ok = false;
    }
    assert!(verdict(7, "bands", ok));
}

#[test]
fn criterion_8_cohomology_instances() {
    let fx = fixture_map();
    let mut ok = true;
    // two commutative Clifford instances
    let z2 = semigroup_algebra(&slalg::fixtures::cyclic_group(2));
    let chain = convolution(&fx["clifford_chain2_z2_z2.json"]).algebra.clone();
    for a in [&z2, &chain] {
        let reg = regular_bimodule(a);
        let ones: SparseVec = (0..a.dim()).map(|i| (i, Rat::one())).collect();
        let chi = character_bimodule(a, &ones).unwrap();
        for (label, m) in [("regular", &reg), ("rank-1 quotient", &chi)] {
            if !symmetric_bimodule_check(m) {
                println!("  {label} bimodule not symmetric on dim {}", a.dim());
                ok = false;
            }
            let co = cohomology_betti(a, m, 2, LIM).unwrap();
            if co[1] != 0 || co[2] != 0 {
                println!("  cohomology not trivial with {label} coefficients: {co:?}");
                ok = false;
            }
        }
    }
    assert!(verdict(8, "cohomology instances", ok));
}

#[test]
fn criterion_9_engine_soundness() {
    let fx = fixture_map();
    let mut ok = true;
    for name in ["group_z2.json", "diagram_const_q_chain2.json", "rect_band_2x2.json"] {
        let inst = parse_instance(&fx[name]).unwrap();
        let a = match inst.instance {
            Instance::Semigroup(s) => semigroup_algebra(&s),
            Instance::Diagram(d) => build_convolution(&d).unwrap().algebra,
        };
        let reg = regular_bimodule(&a);
        if !dd_zero_check(&a, &reg, 3) {
            println!("  d·d != 0 on {name}");
            ok = false;
        }
        // rank–nullity on each boundary, Betti nonnegative by construction
        for n in 0..=2 {
            let d = boundary(&a, &reg, n);
            if rank(&d) + kernel_basis(&d).dim() != d.cols() {
                println!("  rank-nullity failed on {name} degree {n}");
                ok = false;
            }
        }
        let rep = betti(&a, &reg, 2, LIM).unwrap();
        for row in &rep.degrees {
            if row.chain_dim < row.rank_d_below + row.rank_d {
                println!("  negative Betti number on {name}");
                ok = false;
            }
        }
    }
    // byte stability modulo timings, cold and warm cache
    let text = &fx["diagram_const_q_chain2.json"];
    let cfg = RunConfig::default();
    let r1 = execute("verify", &["all"], text, &cfg, None).unwrap();
    let r2 = execute("verify", &["all"], text, &cfg, None).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let r3 = execute("verify", &["all"], text, &cfg, Some(dir.path())).unwrap();
    let r4 = execute("verify", &["all"], text, &cfg, Some(dir.path())).unwrap();
    if r1.content_value() != r2.content_value()
        || r1.content_value() != r3.content_value()
        || r3.content_value() != r4.content_value()
    {
        println!("  report content differs across runs");
        ok = false;
    }
    assert!(Rat::zero() < Rat::one()); // sanity for the exact-arithmetic path
    assert!(verdict(9, "engine soundness", ok));
}
