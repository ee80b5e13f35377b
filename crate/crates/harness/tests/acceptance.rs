//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each
//! and exits nonzero if any criterion fails.

use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use bochner_core::bernstein::{
    dirac, frac_power, log_resolvent, tempered_stable, widder_measure, BernsteinFunction,
    DensityOptions, DividedDifference, DEFAULT_W_ORDER,
};
use bochner_core::bounds::{run_suite, Theorem};
use bochner_core::calculus::{
    divided_difference_identity_check, frechet_remainder_study, psi_of, subordinate,
    SubordinationMethod,
};
use bochner_core::linalg::{self, NormKind};
use bochner_core::perturbation::{
    krein_integral_check, resolvent_trace_check, stieltjes_inversion, subordinated_shift_check,
    trace_formula_check, DeterminantHandle, InversionMethod,
};
use bochner_core::semigroups::{random_basis, random_pair, BasisKind, GeneratorTuple, PairSpec};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

type M = DMatrix<Complex64>;

/// SplitMix64, used to draw test inputs independently of the library's generators.
struct Rng(u64);

impl Rng {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * (self.next() >> 11) as f64 / (1u64 << 53) as f64
    }
}

/// Closed forms of the catalog functions, written out independently.
#[derive(Debug, Clone)]
enum Closed {
    Dirac { v: Vec<f64>, m: f64 },
    Frac { alpha: f64, j: usize },
    LogRes { lambda: f64, j: usize },
    Tempered { alpha: f64, lambda: f64, j: usize },
}

impl Closed {
    fn eval(&self, s: &[f64]) -> f64 {
        match self {
            Closed::Dirac { v, m } => m * (s.iter().zip(v).map(|(a, b)| a * b).sum::<f64>()).exp_m1(),
            Closed::Frac { alpha, j } => -(-s[*j]).powf(*alpha),
            Closed::LogRes { lambda, j } => lambda.ln() - (lambda - s[*j]).ln(),
            Closed::Tempered { alpha, lambda, j } => lambda.powf(*alpha) - (lambda - s[*j]).powf(*alpha),
        }
    }

    fn build(&self, n: usize) -> BernsteinFunction {
        let o = DensityOptions::default();
        match self {
            Closed::Dirac { v, m } => dirac(v.clone(), *m),
            Closed::Frac { alpha, j } => frac_power(*alpha, n, *j, &o),
            Closed::LogRes { lambda, j } => log_resolvent(*lambda, n, *j, &o),
            Closed::Tempered { alpha, lambda, j } => tempered_stable(*alpha, *lambda, n, *j, &o),
        }
        .expect("catalog function builds")
    }

    fn atomic(&self) -> bool {
        matches!(self, Closed::Dirac { .. })
    }
}

fn random_closed(rng: &mut Rng, n: usize, kind: usize) -> Closed {
    let j = (rng.next() % n as u64) as usize;
    match kind % 4 {
        0 => Closed::Dirac {
            v: (0..n).map(|_| rng.uniform(0.1, 1.5)).collect(),
            m: rng.uniform(0.2, 2.0),
        },
        1 => Closed::Frac {
            alpha: rng.uniform(0.2, 0.8),
            j,
        },
        2 => Closed::LogRes {
            lambda: rng.uniform(0.5, 3.0),
            j,
        },
        _ => Closed::Tempered {
            alpha: rng.uniform(0.2, 0.8),
            lambda: rng.uniform(0.5, 3.0),
            j,
        },
    }
}

fn joint(t: &GeneratorTuple) -> (M, Vec<Vec<f64>>) {
    let s = t.planted_spectrum().expect("planted tuple");
    let tuples = s
        .tuples
        .iter()
        .map(|row| row.iter().map(|z| z.re).collect())
        .collect();
    (s.basis.clone(), tuples)
}

/// P·diag(f(λ⁽ᵏ⁾))·P⁻¹ with nalgebra's inverse.
fn spectral(p: &M, eig: &[Vec<f64>], f: impl Fn(&[f64]) -> f64) -> M {
    let d = DVector::from_iterator(eig.len(), eig.iter().map(|t| Complex64::new(f(t), 0.0)));
    p * M::from_diagonal(&d) * p.clone().try_inverse().expect("invertible basis")
}

fn op_norm(m: &M) -> f64 {
    m.clone().svd(false, false).singular_values.max()
}

fn planted(rng: &mut Rng, seed: u64, n: usize, d: usize, kind: BasisKind) -> (GeneratorTuple, Vec<Vec<f64>>) {
    let eig: Vec<Vec<f64>> = (0..d)
        .map(|_| (0..n).map(|_| rng.uniform(-5.0, -0.05)).collect())
        .collect();
    let p = random_basis(kind, d, seed).unwrap();
    let t = GeneratorTuple::planted(
        p,
        eig.iter()
            .map(|r| r.iter().map(|x| Complex64::new(*x, 0.0)).collect())
            .collect(),
    )
    .unwrap();
    (t, eig)
}

fn diag1(d: &[f64]) -> GeneratorTuple {
    GeneratorTuple::new(vec![linalg::diag_real(d)]).unwrap()
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn ok(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn c1_diagonal_oracle() -> Outcome {
    let mut rng = Rng(1);
    let (mut atomic, mut density) = (0.0f64, 0.0f64);
    for seed in 0..50u64 {
        let n = 1 + (seed % 3) as usize;
        let d = 2 + (seed % 5) as usize;
        let kind = if seed % 2 == 0 { BasisKind::General } else { BasisKind::Orthogonal };
        let (a, _) = planted(&mut rng, seed, n, d, kind);
        let (p, eig) = joint(&a);
        for k in 0..4 {
            let f = random_closed(&mut rng, n, k);
            let got = psi_of(&f.build(n), &a).unwrap().value;
            let err = op_norm(&(got - spectral(&p, &eig, |s| f.eval(s))));
            if f.atomic() {
                atomic = atomic.max(err);
            } else {
                density = density.max(err);
            }
        }
    }
    ok(
        atomic <= 1e-8 && density <= 1e-5,
        format!("50 tuples x 4 functions; atomic max {atomic:.2e} (tol 1e-8), density max {density:.2e} (tol 1e-5)"),
    )
}

fn c2_frechet() -> Outcome {
    let mut rng = Rng(2);
    let h = [1e-1, 1e-2, 1e-3, 1e-4];
    let mut worst_slope = f64::INFINITY;
    let mut worst_drop = f64::INFINITY;
    let mut runs = 0;
    for seed in 0..6u64 {
        let n = 1 + (seed % 3) as usize;
        let (a, _) = planted(&mut rng, 100 + seed, n, 4, BasisKind::General);
        let (p, _) = joint(&a);
        let pinv = p.clone().try_inverse().unwrap();
        let dirs: Vec<M> = (0..n)
            .map(|_| {
                let d: Vec<f64> = (0..4).map(|_| rng.uniform(-1.0, 1.0)).collect();
                &p * linalg::diag_real(&d) * &pinv
            })
            .collect();
        for kind in [0, 2, 3] {
            let f = random_closed(&mut rng, n, kind).build(n);
            for norm in [NormKind::Operator, NormKind::Trace] {
                let s = frechet_remainder_study(&f, &a, &dirs, &h, norm).unwrap();
                worst_slope = worst_slope.min(s.slope.unwrap_or(f64::NEG_INFINITY));
                worst_drop = worst_drop.min(s.ratio_drop.unwrap_or(0.0));
                runs += 1;
            }
        }
    }
    ok(
        worst_slope >= 1.9 && worst_drop >= 10.0,
        format!("{runs} studies (dirac, log_resolvent, tempered_stable; both norms); min slope {worst_slope:.4} (>= 1.9), min ratio drop {worst_drop:.1} (>= 10)"),
    )
}

fn c3_divided() -> Outcome {
    let mut rng = Rng(3);
    let (mut scalar, mut op4, mut op8) = (0.0f64, 0.0f64, 0.0f64);
    for seed in 0..8u64 {
        let n = 1 + (seed % 3) as usize;
        let d = 3;
        let (a, eig) = planted(&mut rng, 200 + seed, n, d, BasisKind::General);
        let (p, _) = joint(&a);
        let f = random_closed(&mut rng, n, 0);
        let psi = f.build(n);
        let i = (seed as usize) % n;
        let extra_eig: Vec<f64> = (0..d).map(|_| rng.uniform(-5.0, -0.05)).collect();
        let extra = spectral(&p, &extra_eig.iter().map(|x| vec![*x]).collect::<Vec<_>>(), |s| s[0]);
        let dd = DividedDifference::new(&psi, i, DEFAULT_W_ORDER).unwrap();
        let Closed::Dirac { v, m } = &f else { unreachable!() };
        let omega = m * v[i];
        for k in 0..d {
            let mut s = eig[k].clone();
            s.push(extra_eig[k]);
            let mut swapped = eig[k].clone();
            swapped[i] = extra_eig[k];
            let quotient = (f.eval(&eig[k]) - f.eval(&swapped)) / (eig[k][i] - extra_eig[k]) - omega;
            scalar = scalar.max((dd.eval(&s).unwrap() - quotient).abs());
        }
        let r = divided_difference_identity_check(&psi, i, &a, &extra).unwrap();
        op4 = op4.max(r.residual_difference);
        op8 = op8.max(r.residual_diagonal);
    }
    ok(
        scalar <= 1e-8 && op4 <= 1e-8 && op8 <= 1e-8,
        format!("scalar {scalar:.2e}, operator difference {op4:.2e}, diagonal {op8:.2e} (tol 1e-8 each)"),
    )
}

fn pair(seed: u64, n: usize, d: usize) -> (GeneratorTuple, GeneratorTuple) {
    random_pair(PairSpec {
        seed,
        arity: n,
        dim: d,
        basis: BasisKind::General,
    })
    .unwrap()
}

fn c4_trace_formula() -> Outcome {
    let mut rng = Rng(4);
    let (mut atomic, mut density) = (0.0f64, 0.0f64);
    let mut count = 0;
    for seed in 0..30u64 {
        let n = 1 + (seed % 3) as usize;
        let (a, b) = pair(300 + seed, n, 4);
        let (_, ea) = joint(&a);
        let (_, eb) = joint(&b);
        for kind in [0, 2, 3] {
            let f = random_closed(&mut rng, n, kind);
            let r = trace_formula_check(&f.build(n), &a, &b).unwrap();
            let exact: f64 = ea.iter().map(|s| f.eval(s)).sum::<f64>() - eb.iter().map(|s| f.eval(s)).sum::<f64>();
            let err = r.residual.max((r.rhs - exact).abs());
            if f.atomic() {
                atomic = atomic.max(err);
            } else {
                density = density.max(err);
            }
            count += 1;
        }
    }
    ok(
        atomic <= 1e-8 && density <= 1e-5,
        format!("{count} pair checks, n in 1..3; atomic {atomic:.2e} (tol 1e-8), density {density:.2e} (tol 1e-5)"),
    )
}

fn c5_resolvent() -> Outcome {
    let mut rng = Rng(5);
    let mut worst = 0.0f64;
    for seed in 0..12u64 {
        let n = 1 + (seed % 3) as usize;
        let (a, b) = pair(400 + seed, n, 4);
        let (_, ea) = joint(&a);
        let (_, eb) = joint(&b);
        for _ in 0..10 {
            let l: Vec<f64> = (0..n).map(|_| 10f64.powf(rng.uniform(-1.0, 2.0))).collect();
            let lz: Vec<Complex64> = l.iter().map(|x| Complex64::new(*x, 0.0)).collect();
            let r = resolvent_trace_check(&a, &b, &lz).unwrap();
            let prod = |s: &[f64]| s.iter().zip(&l).map(|(x, y)| 1.0 / (y - x)).product::<f64>();
            let exact: f64 = ea.iter().map(|s| prod(s)).sum::<f64>() - eb.iter().map(|s| prod(s)).sum::<f64>();
            worst = worst.max(r.residual).max((r.lhs - exact).abs());
        }
    }
    ok(worst <= 1e-10, format!("12 pairs x 10 points; max residual {worst:.2e} (tol 1e-10)"))
}

fn c6_subordination() -> Outcome {
    let mut rng = Rng(6);
    let o = DensityOptions::default();
    let (mut poisson, mut tail, mut stable) = (0.0f64, 0.0f64, 0.0f64);
    let (mut sub_p, mut sub_s) = (0.0f64, 0.0f64);
    for seed in 0..5u64 {
        let (a, b) = pair(500 + seed, 1, 4);
        let (p, ea) = joint(&a);
        let (_, eb) = joint(&b);
        let v = rng.uniform(0.3, 1.5);
        let m = rng.uniform(0.3, 2.0);
        let fp = dirac(vec![v], m).unwrap();
        let fs = frac_power(0.5, 1, 0, &o).unwrap();
        for t in [0.5, 1.0, 2.0] {
            let w = subordinate(&fp, &a, t, SubordinationMethod::Widder, &o).unwrap().value;
            let exact = spectral(&p, &ea, |s| (t * m * (v * s[0]).exp_m1()).exp());
            poisson = poisson.max(op_norm(&(w - exact)));
            tail = tail.max(widder_measure(&fp, t, &o).unwrap().truncated_mass);
            let w = subordinate(&fs, &a, t, SubordinationMethod::Widder, &o).unwrap().value;
            let exact = spectral(&p, &ea, |s| (-t * (-s[0]).sqrt()).exp());
            stable = stable.max(op_norm(&(w - exact)));
        }
        let s_grid = [0.5, 1.0, 2.0];
        let oracle = |s: f64, g: &dyn Fn(f64) -> f64| {
            ea.iter().map(|x| (s * g(x[0])).exp()).sum::<f64>()
                - eb.iter().map(|x| (s * g(x[0])).exp()).sum::<f64>()
        };
        let rp = subordinated_shift_check(&fp, &a, &b, &s_grid, &o).unwrap();
        for row in &rp.rows {
            let exact = oracle(row.s, &|x| m * (v * x).exp_m1());
            sub_p = sub_p.max(row.residual).max((row.rhs - exact).abs());
        }
        let rs = subordinated_shift_check(&fs, &a, &b, &s_grid, &o).unwrap();
        for row in &rs.rows {
            let exact = oracle(row.s, &|x| -(-x).sqrt());
            sub_s = sub_s.max(row.residual).max((row.rhs - exact).abs());
        }
    }
    ok(
        poisson <= 1e-8 && tail < 1e-12 && stable <= 1e-5 && sub_p <= 1e-8 && sub_s <= 1e-5,
        format!(
            "poisson {poisson:.2e} (tail {tail:.1e}), stable-1/2 {stable:.2e}, shift formula poisson {sub_p:.2e} / stable {sub_s:.2e}"
        ),
    )
}

fn c7_determinants() -> Outcome {
    let mut rng = Rng(7);
    let (mut formula, mut cocycle, mut central, mut limit) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut monotone = true;
    for seed in 0..10u64 {
        let (a, b) = pair(600 + seed, 1, 4);
        let (_, c) = pair(650 + seed, 1, 4);
        // C must share the basis of A and B for the commuting formula
        let (p, ea) = joint(&a);
        let (_, eb) = joint(&b);
        let (_, ec) = joint(&c);
        let c = GeneratorTuple::planted(
            p.clone(),
            ec.iter().map(|x| vec![Complex64::new(x[0], 0.0)]).collect(),
        )
        .unwrap();
        let ab = DeterminantHandle::new(&a, &b).unwrap();
        let bc = DeterminantHandle::new(&b, &c).unwrap();
        let ac = DeterminantHandle::new(&a, &c).unwrap();
        for _ in 0..5 {
            let z = Complex64::new(rng.uniform(-3.0, 10.0), rng.uniform(0.2, 5.0));
            let z = if rng.next().is_multiple_of(2) { z } else { z.conj() };
            let exact: Complex64 = ea
                .iter()
                .zip(&eb)
                .map(|(l, m)| (z - m[0]) / (z - l[0]))
                .product();
            let f = ab.det_formula(z).unwrap();
            formula = formula.max((f - exact).norm() / exact.norm());
            formula = formula.max((ab.value(z).unwrap() - exact).norm() / exact.norm());
            let lhs = ab.det_formula(z).unwrap() * bc.det_formula(z).unwrap();
            let rhs = ac.det_formula(z).unwrap();
            cocycle = cocycle.max((lhs - rhs).norm() / rhs.norm());
            let d = ab.log_derivative(z).unwrap();
            central = central
                .max((d - ab.log_derivative_central(z).unwrap()).norm())
                .max((d - ab.resolvent_trace(z).unwrap()).norm());
        }
        let gaps: Vec<f64> = [1e2, 1e4, 1e6]
            .iter()
            .map(|l| (ab.value_primary(*l).unwrap().value - 1.0).abs())
            .collect();
        monotone &= gaps.windows(2).all(|w| w[1] < w[0]);
        limit = limit.max(gaps[2]);
    }
    ok(
        formula <= 1e-10 && cocycle <= 1e-10 && limit <= 1e-4 && monotone && central <= 1e-6,
        format!(
            "formula {formula:.2e}, cocycle {cocycle:.2e} (tol 1e-10); |D(1e6)-1| {limit:.2e} (tol 1e-4), monotone {monotone}; log-derivative {central:.2e} (tol 1e-6)"
        ),
    )
}

/// ξ(t) = #{k : −λₖ < t} − #{k : −μₖ < t}.
fn xi_oracle(ea: &[f64], eb: &[f64], t: f64) -> f64 {
    ea.iter().filter(|l| -**l < t).count() as f64 - eb.iter().filter(|m| -**m < t).count() as f64
}

fn c8_inversion() -> Outcome {
    let mut complex = 0.0f64;
    let mut checked = 0;
    let mut pairs: Vec<(Vec<f64>, Vec<f64>)> = vec![(vec![-1.0, -2.0], vec![-1.5, -2.5])];
    for seed in 0..6u64 {
        let (a, b) = pair(700 + seed, 1, 4);
        pairs.push((
            joint(&a).1.iter().map(|x| x[0]).collect(),
            joint(&b).1.iter().map(|x| x[0]).collect(),
        ));
    }
    for (ea, eb) in &pairs {
        let h = DeterminantHandle::new(&diag1(ea), &diag1(eb)).unwrap();
        let grid: Vec<f64> = (1..=120).map(|k| 0.05 * k as f64).collect();
        let jumps: Vec<f64> = ea.iter().chain(eb).map(|x| -x).collect();
        let far: Vec<f64> = grid
            .into_iter()
            .filter(|t| jumps.iter().all(|j| (t - j).abs() >= 0.1))
            .collect();
        for s in stieltjes_inversion(&h, InversionMethod::Complex { y: 1e-3 }, &far).unwrap() {
            complex = complex.max((s.xi_recovered.unwrap() - xi_oracle(ea, eb, s.t)).abs());
            checked += 1;
        }
    }
    let (ea, eb) = (&pairs[0].0, &pairs[0].1);
    let h = DeterminantHandle::new(&diag1(ea), &diag1(eb)).unwrap();
    let points = [0.5, 1.25, 2.25, 5.0];
    let mut errors = Vec::new();
    for k in [4, 8, 16] {
        let s = stieltjes_inversion(&h, InversionMethod::Real { order: k }, &points).unwrap();
        errors.push(
            s.iter()
                .map(|x| (x.xi_recovered.unwrap() - xi_oracle(ea, eb, x.t)).abs())
                .collect::<Vec<_>>(),
        );
    }
    let decreasing = (0..points.len()).all(|j| errors[1][j] < errors[0][j] && errors[2][j] < errors[1][j]);
    let err16: Vec<String> = errors[2].iter().map(|e| format!("{e:.3}")).collect();
    ok(
        complex <= 1e-2 && decreasing,
        format!(
            "complex y=1e-3: max error {complex:.2e} over {checked} points (tol 1e-2); real k=4,8,16 strictly decreasing at t={points:?}: {decreasing} (k=16 errors {})",
            err16.join(", ")
        ),
    )
}

fn c9_bounds() -> Outcome {
    let mut violations = 0;
    let mut runs = Vec::new();
    let o = DensityOptions::default();
    let cases: Vec<(BernsteinFunction, usize)> = vec![
        (dirac(vec![1.0, 0.5], 2.0).unwrap(), 2),
        (log_resolvent(1.5, 1, 0, &o).unwrap(), 1),
        (dirac(vec![0.4, 0.8, 1.2], 1.0).unwrap(), 3),
    ];
    for (k, (psi, n)) in cases.iter().enumerate() {
        let template = PairSpec {
            seed: 0,
            arity: *n,
            dim: 4,
            basis: BasisKind::General,
        };
        for (theorem, norm) in [
            (Theorem::Lipschitz, NormKind::Operator),
            (Theorem::IdealNorm, NormKind::Operator),
            (Theorem::IdealNorm, NormKind::Trace),
        ] {
            let r = run_suite(psi, theorem, norm, template, 10_000 * (k as u64 + 1), 100).unwrap();
            violations += r.violations;
            runs.push(r.rows.len());
        }
    }
    ok(
        violations == 0,
        format!("{} suites of 100 pairs (3 functions x Lipschitz, ideal operator, ideal trace); violations {violations}", runs.len()),
    )
}

fn c10_krein() -> Outcome {
    let mut rng = Rng(10);
    let (mut atomic, mut logr) = (0.0f64, 0.0f64);
    let mut pairs = vec![(diag1(&[-1.0, -2.0]), diag1(&[-1.5, -2.5]))];
    for seed in 0..8u64 {
        pairs.push(pair(800 + seed, 1, 4));
    }
    for (a, b) in &pairs {
        let fd = Closed::Dirac {
            v: vec![rng.uniform(0.2, 1.5)],
            m: rng.uniform(0.2, 2.0),
        };
        let fl = Closed::LogRes {
            lambda: rng.uniform(0.5, 3.0),
            j: 0,
        };
        let ea: Vec<f64> = real_eigenvalues(a);
        let eb: Vec<f64> = real_eigenvalues(b);
        for (f, slot) in [(&fd, &mut atomic), (&fl, &mut logr)] {
            let r = krein_integral_check(&f.build(1), a, b).unwrap();
            let exact: f64 = ea.iter().map(|x| f.eval(&[*x])).sum::<f64>() - eb.iter().map(|x| f.eval(&[*x])).sum::<f64>();
            let mut err = r.residual.max((r.step_sum - exact).abs()).max((r.laplace_form - exact).abs());
            if let Some(v) = r.step_integral {
                err = err.max((v - exact).abs());
            }
            *slot = slot.max(err);
        }
    }
    ok(
        atomic <= 1e-8 && logr <= 1e-6,
        format!("{} pairs; atomic {atomic:.2e} (tol 1e-8), log_resolvent {logr:.2e} (tol 1e-6)", pairs.len()),
    )
}

/// Real eigenvalues of a single-generator tuple.
fn real_eigenvalues(t: &GeneratorTuple) -> Vec<f64> {
    match t.planted_spectrum() {
        Some(s) => s.tuples.iter().map(|x| x[0].re).collect(),
        None => (0..t.dim()).map(|k| t.matrix(0)[(k, k)].re).collect(),
    }
}

fn c11_determinism() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    files.sort();
    let run = |f: &PathBuf, jobs: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_bochner"))
            .args(["run", f.to_str().unwrap(), "--jobs", jobs])
            .output()
            .expect("binary runs");
        (out.status.code(), out.stdout)
    };
    let mut identical = true;
    let mut all_pass = true;
    for f in &files {
        let (c1, first) = run(f, "1");
        let (_, second) = run(f, "1");
        let (_, parallel) = run(f, "4");
        identical &= first == second && first == parallel;
        all_pass &= c1 == Some(0);
    }
    ok(
        identical && all_pass,
        format!("{} bundled scenarios, 3 runs each (jobs 1, 1, 4); byte-identical {identical}, all exit 0 {all_pass}", files.len()),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("diagonal oracle", c1_diagonal_oracle),
        ("frechet differentiability", c2_frechet),
        ("divided differences", c3_divided),
        ("trace formula", c4_trace_formula),
        ("resolvent trace", c5_resolvent),
        ("subordination", c6_subordination),
        ("determinants", c7_determinants),
        ("stieltjes inversion", c8_inversion),
        ("bounds", c9_bounds),
        ("krein integral form", c10_krein),
        ("harness determinism", c11_determinism),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = std::panic::catch_unwind(f).unwrap_or_else(|_| ok(false, "panicked".into()));
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {name}: {} [{:.2}s]",
            k + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
