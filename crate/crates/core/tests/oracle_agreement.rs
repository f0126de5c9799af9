use hypoent::oracle::mass_quadrature;
use hypoent::{
    entropy_quadrature, erlang2_entropy, exp_entropy, Erlang2, Exponential, HypoexpTwo,
    QuadratureConfig,
};

fn axis() -> Vec<f64> {
    (0..7).map(|i| 10f64.powf(-1.0 + i as f64 / 3.0)).collect()
}

#[test]
fn densities_integrate_to_one() {
    let cfg = QuadratureConfig::default();
    for &a in &axis() {
        for &b in &axis() {
            // Diagonal included: the degenerate Erlang branch must normalize too.
            let mass = mass_quadrature(&HypoexpTwo::from_rates(a, b).unwrap(), &cfg).unwrap();
            assert!((mass - 1.0).abs() <= 1e-10, "({a}, {b}): {mass}");
        }
        let mass = mass_quadrature(&Exponential::new(a).unwrap(), &cfg).unwrap();
        assert!((mass - 1.0).abs() <= 1e-10);
    }
}

#[test]
fn quadrature_recovers_single_and_erlang_entropies() {
    let cfg = QuadratureConfig::default();
    for &l in &axis() {
        let q = entropy_quadrature(&Exponential::new(l).unwrap(), &cfg).unwrap();
        assert!((q.value() - exp_entropy(l).unwrap().value()).abs() <= 1e-10);
        let q = entropy_quadrature(&Erlang2::new(l).unwrap(), &cfg).unwrap();
        assert!((q.value() - erlang2_entropy(l).unwrap().value()).abs() <= 1e-9);
    }
}

#[test]
fn quadrature_handles_close_rates() {
    // Close to the degeneracy threshold but on the hypoexponential branch.
    let cfg = QuadratureConfig::default();
    for eps in [1e-3, 1e-6, 1e-9] {
        let d = HypoexpTwo::from_rates(1.0 + eps, 1.0).unwrap();
        assert!(d.norm_const().is_some());
        let q = entropy_quadrature(&d, &cfg).unwrap().value();
        let closed = hypoent::hypoexp_entropy(d.rates()).value();
        assert!((q - closed).abs() <= 1e-9, "ε = {eps}: {q} vs {closed}");
    }
}

#[test]
fn looser_tolerance_is_honoured() {
    let cfg = QuadratureConfig::new(1e-5, 2000).unwrap();
    let d = HypoexpTwo::from_rates(10.0, 0.1).unwrap();
    let q = entropy_quadrature(&d, &cfg).unwrap().value();
    assert!((q - hypoent::hypoexp_entropy(d.rates()).value()).abs() <= 1e-5);
}
