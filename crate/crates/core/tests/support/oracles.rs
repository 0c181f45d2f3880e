//! Independent numeric and brute-force oracles, shared by the oracle tests
//! and the acceptance suite. Each function returns `(cases, disagreements)`.

#![allow(dead_code)]

use nalgebra::{Complex, DMatrix, Schur};
use num_traits::Zero;
use vamos_core::certificate::verify_psd;
use vamos_core::poly::{cauchy_binet_expansion, RationalPoint};
use vamos_core::rational::{frac, q, to_f64};
use vamos_core::stability::{sturm_real_root_count, SplitMix64, UnivariatePoly};
use vamos_core::{RationalMatrix, Q};

pub const TOL: f64 = 1e-6;

fn small(rng: &mut SplitMix64, lo: i64, hi: i64) -> i64 {
    lo + (rng.next_u64() % (hi - lo + 1) as u64) as i64
}

/// Eigenvalues of a companion matrix. Unshifted QR can stall on repeated
/// complex roots, so iterations are capped and similar matrices (the
/// transpose, a diagonal rescaling, an orthogonal rotation) are tried
/// before giving up.
fn companion_eigenvalues(c: DMatrix<f64>) -> Vec<Complex<f64>> {
    let n = c.nrows();
    let scale = DMatrix::from_fn(n, n, |i, j| if i == j { 1.5f64.powi(i as i32) } else { 0.0 });
    let unscale = DMatrix::from_fn(n, n, |i, j| if i == j { 1.5f64.powi(-(i as i32)) } else { 0.0 });
    let mut rot = DMatrix::<f64>::identity(n, n);
    for k in 0..n.saturating_sub(1) {
        let (sin, cos) = (0.3 + 0.1 * k as f64).sin_cos();
        let mut g = DMatrix::<f64>::identity(n, n);
        g[(k, k)] = cos;
        g[(k + 1, k + 1)] = cos;
        g[(k, k + 1)] = -sin;
        g[(k + 1, k)] = sin;
        rot = g * rot;
    }
    let candidates = [c.clone(), c.transpose(), &scale * &c * &unscale, &rot * &c * rot.transpose()];
    for m in candidates {
        if let Some(s) = Schur::try_new(m, f64::EPSILON, 100_000) {
            return s.complex_eigenvalues().iter().copied().collect();
        }
    }
    panic!("eigenvalue iteration did not converge for {c}");
}

/// Distinct real roots from companion-matrix eigenvalues: an eigenvalue is
/// real when its imaginary part is below `TOL` (relative), and real values
/// within `TOL` of each other are one root.
pub fn numeric_distinct_real_roots(coeffs: &[f64]) -> usize {
    let deg = coeffs.len() - 1;
    if deg == 0 {
        return 0;
    }
    let lead = coeffs[deg];
    let mut c = DMatrix::<f64>::zeros(deg, deg);
    for i in 1..deg {
        c[(i, i - 1)] = 1.0;
    }
    for i in 0..deg {
        c[(i, deg - 1)] = -coeffs[i] / lead;
    }
    let mut reals: Vec<f64> = companion_eigenvalues(c)
        .iter()
        .filter(|z| z.im.abs() < TOL * (1.0 + z.re.abs()))
        .map(|z| z.re)
        .collect();
    reals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut count = 0;
    let mut last: Option<f64> = None;
    for r in reals {
        if last.is_none_or(|l| (r - l).abs() > TOL * (1.0 + r.abs())) {
            count += 1;
        }
        last = Some(r);
    }
    count
}

fn random_univariate(rng: &mut SplitMix64, case: usize) -> UnivariatePoly {
    if case % 2 == 0 {
        let deg = small(rng, 1, 6) as usize;
        let mut coeffs: Vec<Q> = (0..deg).map(|_| q(small(rng, -9, 9))).collect();
        coeffs.push(q(small(rng, 1, 5)));
        return UnivariatePoly::new(coeffs);
    }
    // product of linear factors, at most one doubled (several nearby double
    // roots split by more than the clustering tolerance in floating point),
    // and maybe x^2 + c
    let mut p = UnivariatePoly::from_i64(&[1]);
    let mut deg = 0;
    let mut doubled = false;
    let mut used: Vec<Q> = Vec::new();
    while deg < 6 {
        if small(rng, 0, 3) == 0 && deg <= 4 {
            let c = small(rng, 1, 4);
            p = p.mul(&UnivariatePoly::from_i64(&[c, 0, 1]));
            deg += 2;
        } else {
            let root = frac(small(rng, -6, 6), small(rng, 1, 3));
            if used.contains(&root) {
                continue;
            }
            used.push(root.clone());
            let lin = UnivariatePoly::new(vec![-root, q(1)]);
            let times = if !doubled && small(rng, 0, 3) == 0 && deg <= 4 { 2 } else { 1 };
            doubled |= times == 2;
            for _ in 0..times {
                p = p.mul(&lin);
            }
            deg += times;
        }
        if small(rng, 0, 2) == 0 {
            break;
        }
    }
    p
}

/// Sturm counts against companion-matrix eigenvalues, degrees 1..=6.
pub fn sturm_vs_numeric(cases: usize, seed: u64) -> (usize, usize) {
    let mut rng = SplitMix64::new(seed);
    let mut bad = 0;
    for case in 0..cases {
        let p = random_univariate(&mut rng, case);
        let exact = sturm_real_root_count(&p).unwrap();
        let numeric = numeric_distinct_real_roots(&p.coeffs().iter().map(to_f64).collect::<Vec<_>>());
        if exact != numeric {
            bad += 1;
        }
    }
    (cases, bad)
}

fn float_matrix(g: &RationalMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(g.rows(), g.cols(), |i, j| to_f64(&g[(i, j)]))
}

/// Exact PSD verdicts against floating eigenvalues on `B^T B` (PSD) and
/// `B^T B - eps I`. Cases whose smallest eigenvalue is within `TOL` of zero
/// on the perturbed side are redrawn rather than counted.
pub fn psd_vs_float(cases: usize, seed: u64) -> (usize, usize) {
    let mut rng = SplitMix64::new(seed);
    let mut bad = 0;
    let mut done = 0;
    while done < cases {
        let n = small(&mut rng, 1, 6) as usize;
        let k = small(&mut rng, 1, 6) as usize;
        let b = RationalMatrix::from_rows(
            (0..k).map(|_| (0..n).map(|_| frac(small(&mut rng, -4, 4), small(&mut rng, 1, 3))).collect()).collect(),
        )
        .unwrap();
        let mut g = b.transpose().mul(&b);
        let perturbed = done % 2 == 1;
        if perturbed {
            let eps = frac(small(&mut rng, 1, 16), 8);
            for i in 0..n {
                g[(i, i)] -= &eps;
            }
        }
        let min = float_matrix(&g).symmetric_eigen().eigenvalues.min();
        if perturbed && min.abs() < TOL {
            continue;
        }
        let float_psd = min > -TOL;
        if verify_psd(&g).unwrap().is_psd != float_psd {
            bad += 1;
        }
        done += 1;
    }
    (cases, bad)
}

/// Leibniz-formula determinant, kept deliberately naive.
pub fn leibniz_det(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = Q::zero();
    permute(&mut perm, 0, m, &mut total);
    total
}

fn permute(perm: &mut Vec<usize>, k: usize, m: &[Vec<Q>], total: &mut Q) {
    let n = perm.len();
    if k == n {
        let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
        let mut prod = q(if inversions % 2 == 0 { 1 } else { -1 });
        for (row, &col) in perm.iter().enumerate() {
            prod *= &m[row][col];
        }
        *total += prod;
        return;
    }
    for i in k..n {
        perm.swap(k, i);
        permute(perm, k + 1, m, total);
        perm.swap(k, i);
    }
}

/// Cauchy-Binet expansions against `det(sum_i x_i v_i v_i^T)` at random
/// rational points.
pub fn cauchy_binet_vs_determinant(cases: usize, seed: u64) -> (usize, usize) {
    let mut rng = SplitMix64::new(seed);
    let mut bad = 0;
    for _ in 0..cases {
        let d = small(&mut rng, 1, 4) as usize;
        let n = small(&mut rng, d as i64, 7) as usize;
        let v = RationalMatrix::from_rows((0..d).map(|_| (0..n).map(|_| q(small(&mut rng, -3, 3))).collect()).collect())
            .unwrap();
        let x: Vec<Q> = (0..n).map(|_| frac(small(&mut rng, -8, 8), small(&mut rng, 1, 4))).collect();
        let mut m = vec![vec![Q::zero(); d]; d];
        for (i, xi) in x.iter().enumerate() {
            for a in 0..d {
                for b in 0..d {
                    m[a][b] += xi * &v[(a, i)] * &v[(b, i)];
                }
            }
        }
        let expanded = cauchy_binet_expansion(&v).unwrap().evaluate(&RationalPoint::new(x)).unwrap();
        if expanded != leibniz_det(&m) {
            bad += 1;
        }
    }
    (cases, bad)
}
