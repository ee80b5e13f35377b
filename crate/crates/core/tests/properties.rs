use bochner_core::bernstein::{dirac, BernsteinFunction, LevyMeasure, WeightedPoint};
use bochner_core::bounds::theorem1_check;
use bochner_core::calculus::{frechet_derivative, psi_of};
use bochner_core::linalg::{self, c, CMatrix};
use bochner_core::perturbation::{spectral_shift, DeterminantHandle};
use bochner_core::semigroups::{random_basis, BasisKind, GeneratorTuple};
use num_complex::Complex64;
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 48,
        ..ProptestConfig::default()
    }
}

fn eigen_strategy(n: usize, d: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-5.0f64..-0.1, n), d)
}

fn tuple(seed: u64, eig: &[Vec<f64>]) -> GeneratorTuple {
    let p = random_basis(BasisKind::General, eig.len(), seed).unwrap();
    GeneratorTuple::planted(
        p,
        eig.iter().map(|t| t.iter().map(|x| c(*x)).collect()).collect(),
    )
    .unwrap()
}

fn diag1(d: &[f64]) -> GeneratorTuple {
    GeneratorTuple::new(vec![linalg::diag_real(d)]).unwrap()
}

fn atomic(n: usize, atoms: &[(Vec<f64>, f64)], c1: Vec<f64>) -> BernsteinFunction {
    let measure = LevyMeasure::from_atoms(
        n,
        atoms
            .iter()
            .map(|(p, m)| WeightedPoint::new(p.clone(), *m))
            .collect(),
    )
    .unwrap();
    BernsteinFunction::new(0.0, c1, measure).unwrap()
}

fn atoms_strategy(n: usize) -> impl Strategy<Value = Vec<(Vec<f64>, f64)>> {
    prop::collection::vec((prop::collection::vec(0.05f64..2.0, n), 0.1f64..3.0), 1..4)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn bernstein_functions_are_nonpositive_and_monotone(
        atoms in atoms_strategy(2),
        s in prop::collection::vec(-4.0f64..0.0, 2),
        step in 0.0f64..1.0,
        coord in 0usize..2,
    ) {
        let psi = atomic(2, &atoms, vec![0.3, 0.0]);
        let base = psi.eval(&s).unwrap();
        let mut moved = s.clone();
        moved[coord] = (moved[coord] + step).min(0.0);
        prop_assert!(base <= 0.0);
        prop_assert!(psi.eval(&moved).unwrap() >= base - 1e-14);
    }

    #[test]
    fn semigroup_law(eig in eigen_strategy(2, 3), seed in 0u64..50, u in prop::collection::vec(0.0f64..2.0, 2), v in prop::collection::vec(0.0f64..2.0, 2)) {
        let a = tuple(seed, &eig);
        let sum: Vec<f64> = u.iter().zip(&v).map(|(x, y)| x + y).collect();
        let lhs = a.semigroup_at(&sum).unwrap();
        let rhs = a.semigroup_at(&u).unwrap() * a.semigroup_at(&v).unwrap();
        prop_assert!(linalg::op_norm(&(lhs - rhs)) < 1e-10);
    }

    #[test]
    fn shift_is_antisymmetric_and_chains(
        a in prop::collection::vec(-5.0f64..-0.1, 3),
        b in prop::collection::vec(-5.0f64..-0.1, 3),
        cc in prop::collection::vec(-5.0f64..-0.1, 3),
        v in 0.0f64..3.0,
    ) {
        let (ta, tb, tc) = (diag1(&a), diag1(&b), diag1(&cc));
        let ab = spectral_shift(&ta, &tb).unwrap();
        let ba = spectral_shift(&tb, &ta).unwrap();
        let bc = spectral_shift(&tb, &tc).unwrap();
        let ac = spectral_shift(&ta, &tc).unwrap();
        prop_assert!((ab.laplace(&[v]).unwrap() + ba.laplace(&[v]).unwrap()).abs() < 1e-12);
        prop_assert!((ab.negated().laplace(&[v]).unwrap() - ba.laplace(&[v]).unwrap()).abs() < 1e-12);
        let chained = ab.chained(&bc).unwrap().laplace(&[v]).unwrap();
        prop_assert!((chained - ac.laplace(&[v]).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn determinant_cocycle(
        a in prop::collection::vec(-5.0f64..-0.1, 3),
        b in prop::collection::vec(-5.0f64..-0.1, 3),
        cc in prop::collection::vec(-5.0f64..-0.1, 3),
        re in 0.1f64..10.0,
        im in -5.0f64..5.0,
    ) {
        let (ta, tb, tc) = (diag1(&a), diag1(&b), diag1(&cc));
        let z = Complex64::new(re, im);
        let ab = DeterminantHandle::new(&ta, &tb).unwrap().value(z).unwrap();
        let bc = DeterminantHandle::new(&tb, &tc).unwrap().value(z).unwrap();
        let ac = DeterminantHandle::new(&ta, &tc).unwrap().value(z).unwrap();
        prop_assert!((ab * bc - ac).norm() <= 1e-12 * ac.norm());
    }

    #[test]
    fn frechet_derivative_is_linear(
        eig in eigen_strategy(2, 3),
        seed in 0u64..50,
        alpha in -2.0f64..2.0,
        beta in -2.0f64..2.0,
        x in prop::collection::vec(-1.0f64..1.0, 6),
        y in prop::collection::vec(-1.0f64..1.0, 6),
    ) {
        let a = tuple(seed, &eig);
        let psi = dirac(vec![0.7, 1.2], 1.5).unwrap();
        let mk = |v: &[f64]| -> Vec<CMatrix> {
            v.chunks(3).map(linalg::diag_real).collect()
        };
        let (cx, cy) = (mk(&x), mk(&y));
        let mixed: Vec<CMatrix> = cx.iter().zip(&cy).map(|(p, q)| p * c(alpha) + q * c(beta)).collect();
        let lhs = frechet_derivative(&psi, &a, &mixed).unwrap().value;
        let rhs = frechet_derivative(&psi, &a, &cx).unwrap().value * c(alpha)
            + frechet_derivative(&psi, &a, &cy).unwrap().value * c(beta);
        prop_assert!(linalg::op_norm(&(lhs - rhs)) < 1e-11);
    }

    #[test]
    fn calculus_is_additive(eig in eigen_strategy(2, 3), seed in 0u64..50, p in atoms_strategy(2), q in atoms_strategy(2)) {
        let a = tuple(seed, &eig);
        let f = atomic(2, &p, vec![0.2, 0.0]);
        let g = atomic(2, &q, vec![0.0, 0.5]);
        let lhs = psi_of(&f.sum(&g).unwrap(), &a).unwrap().value;
        let rhs = psi_of(&f, &a).unwrap().value + psi_of(&g, &a).unwrap().value;
        prop_assert!(linalg::op_norm(&(lhs - rhs)) < 1e-11);
    }

    #[test]
    fn lipschitz_rhs_grows_with_the_gap(base in prop::collection::vec(-5.0f64..-0.5, 3), dir in prop::collection::vec(-0.4f64..0.4, 3), s in 0.1f64..1.0) {
        let psi = dirac(vec![1.0], 1.0).unwrap();
        let a = diag1(&base);
        let moved = |t: f64| {
            let d: Vec<f64> = base.iter().zip(&dir).map(|(x, e)| x + t * e).collect();
            diag1(&d)
        };
        let near = theorem1_check(&psi, &a, &moved(s * 0.5), "near").unwrap();
        let far = theorem1_check(&psi, &a, &moved(s), "far").unwrap();
        prop_assert!(near.pass && far.pass);
        prop_assert!(far.rhs >= near.rhs - 1e-15);
    }
}
