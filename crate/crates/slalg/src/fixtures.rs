//! Generators for the built-in test instances: small groups, bands,
//! semilattices and the strong-semilattice data built from them.

use std::collections::BTreeMap;

use crate::semigroups::{
    validate_semigroup, DecompositionData, FiniteSemigroup, FiniteSemilattice,
};

pub fn trivial_group() -> FiniteSemigroup {
    validate_semigroup(vec!["1".into()], vec![vec![0]]).unwrap()
}

/// Cyclic group of order n, elements 0..n with addition mod n.
pub fn cyclic_group(n: usize) -> FiniteSemigroup {
    assert!(n >= 1);
    let labels = (0..n).map(|i| format!("g{i}")).collect();
    let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
    validate_semigroup(labels, table).unwrap()
}

/// Symmetric group on three letters, elements as the permutations of (0,1,2).
pub fn symmetric_group_3() -> FiniteSemigroup {
    let perms: [[usize; 3]; 6] = [
        [0, 1, 2],
        [1, 0, 2],
        [0, 2, 1],
        [2, 1, 0],
        [1, 2, 0],
        [2, 0, 1],
    ];
    let labels = vec!["e", "(12)", "(23)", "(13)", "(123)", "(132)"]
        .into_iter()
        .map(String::from)
        .collect();
    let compose = |p: &[usize; 3], q: &[usize; 3]| [p[q[0]], p[q[1]], p[q[2]]];
    let table = perms
        .iter()
        .map(|p| {
            perms
                .iter()
                .map(|q| {
                    let pq = compose(p, q);
                    perms.iter().position(|r| *r == pq).unwrap()
                })
                .collect()
        })
        .collect();
    validate_semigroup(labels, table).unwrap()
}

/// Rectangular band on p×q elements: (i,j)(k,l) = (i,l).
pub fn rectangular_band(p: usize, q: usize) -> FiniteSemigroup {
    assert!(p >= 1 && q >= 1);
    let idx = |i: usize, j: usize| i * q + j;
    let labels = (0..p)
        .flat_map(|i| (0..q).map(move |j| format!("({},{})", i + 1, j + 1)))
        .collect();
    let mut table = vec![vec![0usize; p * q]; p * q];
    for i in 0..p {
        for j in 0..q {
            for k in 0..p {
                for l in 0..q {
                    table[idx(i, j)][idx(k, l)] = idx(i, l);
                }
            }
        }
    }
    validate_semigroup(labels, table).unwrap()
}

/// Two-element chain semilattice 1 ⪰ e (index 0 is the top).
pub fn chain_semilattice_2() -> FiniteSemilattice {
    let s = validate_semigroup(
        vec!["1".into(), "e".into()],
        vec![vec![0, 1], vec![1, 1]],
    )
    .unwrap();
    crate::semigroups::as_semilattice(&s).unwrap()
}

/// Chain semilattice on n elements, top first: e_i e_j = e_max(i,j).
pub fn chain_semilattice(n: usize) -> FiniteSemilattice {
    assert!(n >= 1);
    let labels = (0..n).map(|i| format!("e{i}")).collect();
    let table = (0..n).map(|i| (0..n).map(|j| i.max(j)).collect()).collect();
    let s = validate_semigroup(labels, table).unwrap();
    crate::semigroups::as_semilattice(&s).unwrap()
}

/// Diamond semilattice: top 1, incomparable a, b, bottom 0 = ab.
pub fn diamond_semilattice() -> FiniteSemilattice {
    let labels = vec!["1", "a", "b", "0"].into_iter().map(String::from).collect();
    let table = vec![
        vec![0, 1, 2, 3],
        vec![1, 1, 3, 3],
        vec![2, 3, 2, 3],
        vec![3, 3, 3, 3],
    ];
    let s = validate_semigroup(labels, table).unwrap();
    crate::semigroups::as_semilattice(&s).unwrap()
}

/// Six-element normal band: 2-chain with a left-zero pair on top of a 2×2
/// rectangular band, transition x ↦ (x, 1).
pub fn normal_band_6() -> FiniteSemigroup {
    let top = rectangular_band(2, 1);
    let bot = rectangular_band(2, 2);
    let mut transitions = BTreeMap::new();
    transitions.insert((0usize, 0usize), vec![0, 1]);
    transitions.insert((1, 1), vec![0, 1, 2, 3]);
    // a ↦ (1,1), b ↦ (2,1)
    transitions.insert((0, 1), vec![0, 2]);
    let d = DecompositionData {
        shape: chain_semilattice_2(),
        components: vec![top, bot],
        transitions,
    };
    crate::semigroups::assemble_strong_semilattice(&d).unwrap()
}

/// Decomposition data with the same component at every shape element and
/// identity transitions.
pub fn constant_decomposition(
    shape: &FiniteSemilattice,
    component: &FiniteSemigroup,
) -> DecompositionData {
    let mut transitions = BTreeMap::new();
    for (e, f) in shape.order_pairs() {
        transitions.insert((e, f), (0..component.size()).collect());
    }
    DecompositionData {
        shape: shape.clone(),
        components: vec![component.clone(); shape.size()],
        transitions,
    }
}

/// Clifford 2-chain: cyclic groups Z/n1 over Z/n2 with the canonical hom
/// (identity when n1 = n2, otherwise trivial).
pub fn clifford_chain2_decomposition(n1: usize, n2: usize) -> DecompositionData {
    let top = cyclic_group(n1);
    let bot = cyclic_group(n2);
    let hom: Vec<usize> = if n1 == n2 {
        (0..n1).collect()
    } else {
        vec![0; n1]
    };
    let mut transitions = BTreeMap::new();
    transitions.insert((0usize, 0usize), (0..n1).collect());
    transitions.insert((1, 1), (0..n2).collect());
    transitions.insert((0, 1), hom);
    DecompositionData {
        shape: chain_semilattice_2(),
        components: vec![top, bot],
        transitions,
    }
}

/// All semigroup homomorphisms from `a` to `b`, as index maps. Exhaustive
/// enumeration; intended for small tables only.
pub fn all_homs(a: &FiniteSemigroup, b: &FiniteSemigroup) -> Vec<Vec<usize>> {
    let (n, m) = (a.size(), b.size());
    let mut out = Vec::new();
    let mut map = vec![0usize; n];
    loop {
        let is_hom = (0..n)
            .all(|x| (0..n).all(|y| map[a.product(x, y)] == b.product(map[x], map[y])));
        if is_hom {
            out.push(map.clone());
        }
        // odometer increment
        let mut k = 0;
        while k < n {
            map[k] += 1;
            if map[k] < m {
                break;
            }
            map[k] = 0;
            k += 1;
        }
        if k == n {
            break;
        }
    }
    out
}

/// The shipped instance files, as (file name, JSON text) pairs. The files
/// under fixtures/ are kept in sync with these by a test.
pub fn shipped_fixtures() -> Vec<(String, String)> {
    use crate::cli::{clifford_instance_json, diagram_instance_json, semigroup_instance_json};
    use crate::diagrams::{constant_diagram, unitisation_diagram, SemilatticeDiagram};
    use crate::linalg::{Rat, SparseMatrix};
    use num_traits::One;

    let q = crate::algebras::semigroup_algebra(&trivial_group());
    let qz2 = crate::algebras::semigroup_algebra(&cyclic_group(2));
    let qs3 = crate::algebras::semigroup_algebra(&symmetric_group_3());

    let mut out: Vec<(String, String)> = Vec::new();
    let mut push = |name: &str, text: String| out.push((format!("{name}.json"), text));

    push("group_trivial", semigroup_instance_json("group_trivial", "semigroup", &trivial_group()));
    push("group_z2", semigroup_instance_json("group_z2", "semigroup", &cyclic_group(2)));
    push("group_z3", semigroup_instance_json("group_z3", "semigroup", &cyclic_group(3)));
    push("group_s3", semigroup_instance_json("group_s3", "semigroup", &symmetric_group_3()));
    push("rect_band_2x1", semigroup_instance_json("rect_band_2x1", "band", &rectangular_band(2, 1)));
    push("rect_band_2x2", semigroup_instance_json("rect_band_2x2", "band", &rectangular_band(2, 2)));
    push("rect_band_3x3", semigroup_instance_json("rect_band_3x3", "band", &rectangular_band(3, 3)));
    push("normal_band_6", semigroup_instance_json("normal_band_6", "band", &normal_band_6()));
    push(
        "semilattice_free_2",
        semigroup_instance_json(
            "semilattice_free_2",
            "semigroup",
            crate::semigroups::free_semilattice(2).unwrap().semigroup(),
        ),
    );
    push(
        "semilattice_diamond",
        semigroup_instance_json("semilattice_diamond", "semigroup", diamond_semilattice().semigroup()),
    );
    push(
        "semilattice_chain_3",
        semigroup_instance_json("semilattice_chain_3", "semigroup", chain_semilattice(3).semigroup()),
    );

    push(
        "clifford_chain2_z2_z2",
        clifford_instance_json("clifford_chain2_z2_z2", &clifford_chain2_decomposition(2, 2)),
    );
    push(
        "clifford_chain2_z2_triv",
        clifford_instance_json("clifford_chain2_z2_triv", &clifford_chain2_decomposition(2, 1)),
    );
    push(
        "clifford_chain2_z3_z3",
        clifford_instance_json("clifford_chain2_z3_z3", &clifford_chain2_decomposition(3, 3)),
    );

    push(
        "diagram_const_q_free2",
        diagram_instance_json(
            "diagram_const_q_free2",
            &constant_diagram(&crate::semigroups::free_semilattice(2).unwrap(), &q),
        ),
    );
    push(
        "diagram_const_q_free3",
        diagram_instance_json(
            "diagram_const_q_free3",
            &constant_diagram(&crate::semigroups::free_semilattice(3).unwrap(), &q),
        ),
    );
    push(
        "diagram_const_q_chain2",
        diagram_instance_json("diagram_const_q_chain2", &constant_diagram(&chain_semilattice_2(), &q)),
    );
    push(
        "diagram_const_q_chain3",
        diagram_instance_json("diagram_const_q_chain3", &constant_diagram(&chain_semilattice(3), &q)),
    );
    push(
        "diagram_const_q_diamond",
        diagram_instance_json("diagram_const_q_diamond", &constant_diagram(&diamond_semilattice(), &q)),
    );
    push(
        "diagram_const_z2_chain2",
        diagram_instance_json("diagram_const_z2_chain2", &constant_diagram(&chain_semilattice_2(), &qz2)),
    );
    push(
        "diagram_singleton_s3",
        diagram_instance_json("diagram_singleton_s3", &constant_diagram(&chain_semilattice(1), &qs3)),
    );
    // 2-chain with the symmetric-group algebra on top, scalars below,
    // glued by the augmentation
    let mut aug = SparseMatrix::zero(1, 6);
    for j in 0..6 {
        aug.set(0, j, Rat::one());
    }
    let shape = chain_semilattice_2();
    let mut transitions = std::collections::BTreeMap::new();
    transitions.insert((0, 0), SparseMatrix::identity(6));
    transitions.insert((1, 1), SparseMatrix::identity(1));
    transitions.insert((0, 1), aug);
    let s3_chain = SemilatticeDiagram {
        shape,
        algebras: vec![qs3.clone(), q.clone()],
        transitions,
    };
    s3_chain.validate().expect("augmentation is a transition");
    push("diagram_chain2_s3_q", diagram_instance_json("diagram_chain2_s3_q", &s3_chain));
    push(
        "diagram_unitisation_z2",
        diagram_instance_json("diagram_unitisation_z2", &unitisation_diagram(&qz2)),
    );
    out
}
