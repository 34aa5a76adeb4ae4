use num_bigint::BigInt;
use num_rational::BigRational;
use powerspec::graph::connected_graphs_up_to;
use powerspec::signed::DEFAULT_SIGMA_TOL;
use powerspec::spectrum::{beta, beta_radius_exponent, char_poly_power, radius_cross_check, total_degree};
use powerspec::{Budget, Graph};

fn corpus() -> Vec<Graph> {
    connected_graphs_up_to(5, &Budget::default()).unwrap()
}

#[test]
fn char_poly_integral_on_corpus() {
    let b = Budget::default();
    for g in corpus() {
        for k in [3, 4] {
            let f = char_poly_power(&g, k, DEFAULT_SIGMA_TOL, 256, &b)
                .unwrap_or_else(|e| panic!("{g:?} k={k}: {e}"));
            assert!(f.degree_check, "{g} k={k}");
            assert!(f.all_nonnegative(), "{g} k={k}");
            let sum: BigRational = f.factors.iter().map(|x| x.mu.clone()).sum();
            assert_eq!(
                &f.mu0 + sum * BigInt::from(k),
                BigRational::from_integer(total_degree(&g, k))
            );
            let r = radius_cross_check(&g, k, &f).unwrap();
            assert!(r.holds, "{g} k={k}: {r:?}");
        }
    }
}

#[test]
fn beta_on_corpus() {
    let b = Budget::default();
    for g in corpus() {
        let f = beta(&g, DEFAULT_SIGMA_TOL, 256, &b).unwrap_or_else(|e| panic!("{g:?}: {e}"));
        assert_eq!(f.is_polynomial(), g.is_forest(), "{g}: {f}");
        let rho = powerspec::signed::spectral_radius(&g, 1e-12).unwrap();
        assert_eq!(f.factor_at(rho * rho).unwrap().mu, beta_radius_exponent(&g), "{g}");
    }
}
