use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use trotterforge::experiments::fixtures::{even_odd, standard_tfim};
use trotterforge::model::{Pauli, PauliString};
use trotterforge::schedule::suzuki;
use trotterforge::simulator::{
    conditional_expectation, heisenberg, leakage_profile, run_schedule, EvolutionPlan,
};
use trotterforge::{c64, error_norm, DenseOperator};

/// Random complex operator `sum_P c_P P` over Pauli strings on `support`,
/// embedded on `sites`. Independent of the conditional expectation code.
fn random_operator(rng: &mut StdRng, support: &[usize], sites: &[usize]) -> DenseOperator {
    let n = support.len();
    let mut re = DenseOperator::zeros(sites.to_vec()).unwrap();
    let mut im = DenseOperator::zeros(sites.to_vec()).unwrap();
    for code in 0..1usize << (2 * n) {
        let ops: Vec<(usize, Pauli)> = (0..n)
            .filter_map(|i| match (code >> (2 * i)) & 3 {
                1 => Some((support[i], Pauli::X)),
                2 => Some((support[i], Pauli::Y)),
                3 => Some((support[i], Pauli::Z)),
                _ => None,
            })
            .collect();
        let s = PauliString::new(ops).unwrap();
        s.add_to(re.mat_mut(), rng.random_range(-1.0..1.0), sites)
            .unwrap();
        s.add_to(im.mat_mut(), rng.random_range(-1.0..1.0), sites)
            .unwrap();
    }
    re.add(&im.scale(c64::new(0.0, 1.0))).unwrap()
}

fn random_subset(rng: &mut StdRng, sites: &[usize]) -> Vec<usize> {
    sites
        .iter()
        .copied()
        .filter(|_| rng.random_bool(0.5))
        .collect()
}

#[test]
fn conditional_expectation_properties() {
    let mut rng = StdRng::seed_from_u64(0xce);
    let sites: Vec<usize> = (0..4).collect();
    for case in 0..25 {
        let x_list = random_subset(&mut rng, &sites);
        let x: BTreeSet<usize> = x_list.iter().copied().collect();
        let a = random_operator(&mut rng, &sites, &sites);
        let e = conditional_expectation(&a, &x).unwrap();

        let twice = conditional_expectation(&e, &x).unwrap();
        assert!(
            error_norm(&twice, &e).unwrap() < 1e-12,
            "idempotence, case {case}"
        );

        let id = DenseOperator::identity(sites.clone()).unwrap();
        assert!(error_norm(&conditional_expectation(&id, &x).unwrap(), &id).unwrap() < 1e-12);

        assert!(
            e.spectral_norm().unwrap() <= a.spectral_norm().unwrap() + 1e-12,
            "contractivity"
        );

        let b = random_operator(&mut rng, &x_list, &sites);
        let c = random_operator(&mut rng, &x_list, &sites);
        let bac = b.matmul(&a).unwrap().matmul(&c).unwrap();
        let lhs = conditional_expectation(&bac, &x).unwrap();
        let rhs = b.matmul(&e).unwrap().matmul(&c).unwrap();
        assert!(
            error_norm(&lhs, &rhs).unwrap() < 1e-12,
            "module property, case {case}"
        );
    }
}

#[test]
fn conditional_expectation_hand_example() {
    // A = Z0 Z1 + 2 X0: E_{0}(A) = 2 X0, E_{1}(A) = 0.
    let sites = [0, 1];
    let zz = PauliString::new([(0, Pauli::Z), (1, Pauli::Z)])
        .unwrap()
        .to_dense(&sites)
        .unwrap();
    let x0 = PauliString::single(0, Pauli::X).to_dense(&sites).unwrap();
    let a = zz.add(&x0.scale(c64::new(2.0, 0.0))).unwrap();
    let e0 = conditional_expectation(&a, &BTreeSet::from([0])).unwrap();
    assert!(error_norm(&e0, &x0.scale(c64::new(2.0, 0.0))).unwrap() < 1e-15);
    assert_eq!(
        conditional_expectation(&a, &BTreeSet::from([1]))
            .unwrap()
            .max_abs(),
        0.0
    );
}

#[test]
fn time_reversal_restores_observable() {
    for len in [4, 6, 8] {
        let model = standard_tfim(len).unwrap();
        let d = even_odd(&model).unwrap();
        let o = model.observable_on(&model.graph.sites()).unwrap();
        for m in [1, 3, 5] {
            let s = suzuki(2, m, 3).unwrap();
            let round_trip = s.reverse().compose(&s).unwrap();
            let out = run_schedule(&d, &round_trip, 0.3, 2, &o).unwrap();
            let err = error_norm(&out, &o).unwrap();
            assert!(err < 1e-10, "L = {len}, m = {m}: {err:e}");
        }
    }
}

#[test]
fn evolution_is_isometric() {
    let model = standard_tfim(6).unwrap();
    let d = even_odd(&model).unwrap();
    let region = model.graph.sites();
    let o = model.observable_on(&region).unwrap();
    let h = model.interaction.assemble(&region).unwrap();
    for t in [0.1, 1.0, 5.0] {
        let out = heisenberg(&h, t, &o).unwrap();
        assert!((out.spectral_norm().unwrap() - 1.0).abs() < 1e-11);
    }
    let plan = EvolutionPlan::new(&d, &region).unwrap();
    let s = suzuki(2, 5, 5).unwrap().merge_adjacent();
    let out = plan.run(&s, 0.25, 4, &o).unwrap();
    assert!((out.spectral_norm().unwrap() - 1.0).abs() < 1e-11);
}

#[test]
fn commuting_layers_are_strictly_local() {
    let model = standard_tfim(8).unwrap();
    let d = even_odd(&model).unwrap();
    let region = model.graph.sites();
    let sites: Vec<usize> = region.iter().copied().collect();
    for site in [0, 3, 4, 7] {
        let o = PauliString::single(site, Pauli::Z)
            .to_dense(&sites)
            .unwrap();
        let anchor = BTreeSet::from([site]);
        for layer in d.layers() {
            let h = layer.assemble(&region).unwrap();
            for t in [0.1, 1.0, 10.0] {
                let evolved = heisenberg(&h, t, &o).unwrap();
                let profile = leakage_profile(&evolved, &anchor, &model.graph).unwrap();
                for &(r, v) in &profile[1..] {
                    assert!(v < 1e-12, "site {site}, t = {t}, r = {r}: {v:e}");
                }
            }
        }
    }
}

#[test]
fn commuting_decomposition_is_exact() {
    // All terms diagonal: every product formula is exact.
    use trotterforge::model::{Decomposition, Interaction, Term};
    let mut even = Interaction::empty();
    let mut odd = Interaction::empty();
    for x in 0..4 {
        let t = Term::pair(0.3 + 0.1 * x as f64, (x, Pauli::Z), (x + 1, Pauli::Z)).unwrap();
        if x % 2 == 0 {
            even.push(t)
        } else {
            odd.push(t)
        }
    }
    let d = Decomposition::new(vec![even, odd]).unwrap();
    let sites: Vec<usize> = (0..5).collect();
    let region: BTreeSet<usize> = (0..5).collect();
    let o = PauliString::new([(1, Pauli::X), (2, Pauli::Y)])
        .unwrap()
        .to_dense(&sites)
        .unwrap();
    let exact = heisenberg(&d.recombined().assemble(&region).unwrap(), 2.0, &o).unwrap();
    for n in [1, 2, 7] {
        let approx = run_schedule(&d, &suzuki(2, 1, 3).unwrap(), 2.0 / n as f64, n, &o).unwrap();
        assert!(error_norm(&approx, &exact).unwrap() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn heisenberg_preserves_norm(seed in any::<u64>(), t in -3.0f64..3.0) {
        let mut rng = StdRng::seed_from_u64(seed);
        let sites: Vec<usize> = (0..3).collect();
        let h = random_operator(&mut rng, &sites, &sites);
        let h = h.add(&h.adjoint()).unwrap();
        let o = random_operator(&mut rng, &sites, &sites);
        let out = heisenberg(&h, t, &o).unwrap();
        let (before, after) = (o.spectral_norm().unwrap(), out.spectral_norm().unwrap());
        prop_assert!((before - after).abs() < 1e-12 * before.max(1.0));
    }
}
