//! Independent oracles and random instance generators shared by the
//! integration tests. Everything here works on plain `f64` matrices and
//! avoids the library's own evaluation paths.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use qgd::poly::{Point, TensorDecomposition, UnitaryFactor};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    // Box–Muller
    let u1: f64 = rng.random_range(f64::EPSILON..1.0);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

pub fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> Point {
    loop {
        let v: Vec<f64> = (0..n).map(|_| gaussian(rng)).collect();
        if v.iter().map(|a| a * a).sum::<f64>() > 1e-6 {
            return Point::normalized(v).unwrap();
        }
    }
}

pub fn random_orthogonal(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |_, _| gaussian(rng));
    g.qr().q()
}

/// `Q diag(±1) Qᵀ`, a real symmetric orthogonal matrix.
pub fn random_reflection(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let q = random_orthogonal(rng, n);
    let signs = DVector::from_fn(n, |_, _| if rng.random_bool(0.5) { 1.0 } else { -1.0 });
    &q * DMatrix::from_diagonal(&signs) * q.transpose()
}

const PAULI_2: [&str; 6] = ["I", "X", "Z", "-I", "-X", "-Z"];
const PAULI_4: [&str; 12] = ["II", "XZ", "ZX", "XX", "ZZ", "IX", "-ZI", "YY", "-XX", "IZ", "-ZZ", "XI"];

pub fn factor_from(m: &DMatrix<f64>) -> UnitaryFactor {
    UnitaryFactor::from_real(m.nrows(), m.transpose().as_slice()).unwrap()
}

/// Real factor: reflection, general orthogonal or a Pauli string with an
/// even number of `Y`s. With `symmetric_only` the orthogonal branch is
/// dropped and Pauli strings must be symmetric.
pub fn random_factor(rng: &mut ChaCha8Rng, n: usize, symmetric_only: bool) -> UnitaryFactor {
    loop {
        let choice = rng.random_range(0..3);
        let f = match choice {
            0 => factor_from(&random_reflection(rng, n)),
            1 => factor_from(&random_orthogonal(rng, n)),
            _ => {
                let pool: &[&str] = if n == 2 { &PAULI_2 } else { &PAULI_4 };
                UnitaryFactor::pauli(pool[rng.random_range(0..pool.len())]).unwrap()
            }
        };
        if !symmetric_only || f.is_symmetric() {
            return f;
        }
    }
}

pub fn random_decomposition(
    rng: &mut ChaCha8Rng,
    n: usize,
    k: usize,
    p: usize,
    symmetric_only: bool,
) -> TensorDecomposition {
    let terms = (0..k)
        .map(|_| (0..p).map(|_| random_factor(rng, n, symmetric_only)).collect())
        .collect();
    let s = rng.random_range(-2.0..2.0);
    TensorDecomposition::new(terms, s).unwrap()
}

/// `(N, K, p)` drawn from `{2,4} × {1,2,3} × {1,2,3}`.
pub fn random_shape(rng: &mut ChaCha8Rng) -> (usize, usize, usize) {
    let n = if rng.random_bool(0.5) { 2 } else { 4 };
    (n, rng.random_range(1..=3), rng.random_range(1..=3))
}

pub fn real_part(f: &UnitaryFactor) -> DMatrix<f64> {
    f.matrix().map(|z| z.re)
}

/// `s Σ_α (x⊗…⊗x)ᵀ (A_1 ⊗ … ⊗ A_p) (x⊗…⊗x)` by explicit Kronecker
/// products.
pub fn kron_objective(d: &TensorDecomposition, x: &[f64]) -> f64 {
    let xv = DVector::from_column_slice(x);
    let mut total = 0.0;
    for term in d.terms() {
        let mut big = DMatrix::from_element(1, 1, 1.0);
        let mut xs = DVector::from_element(1, 1.0);
        for f in term {
            big = big.kronecker(&real_part(f));
            xs = xs.kronecker(&xv);
        }
        total += xs.dot(&(&big * &xs));
    }
    d.prefactor() * total
}

/// `D = s Σ_α Σ_j (Π_{i≠j} xᵀA_i x) A_j` with plain loops.
pub fn oracle_d(d: &TensorDecomposition, x: &[f64]) -> DMatrix<f64> {
    let n = x.len();
    let xv = DVector::from_column_slice(x);
    let mut out = DMatrix::zeros(n, n);
    for term in d.terms() {
        let mats: Vec<DMatrix<f64>> = term.iter().map(real_part).collect();
        let b: Vec<f64> = mats.iter().map(|a| xv.dot(&(a * &xv))).collect();
        for j in 0..mats.len() {
            let others: f64 = (0..mats.len()).filter(|&i| i != j).map(|i| b[i]).product();
            out += &mats[j] * (d.prefactor() * others);
        }
    }
    out
}

/// `normalize(x − η D x)` from the oracle `D`.
pub fn oracle_step(d: &TensorDecomposition, x: &[f64], eta: f64) -> (Vec<f64>, f64) {
    let xv = DVector::from_column_slice(x);
    let y = &xv - oracle_d(d, x) * &xv * eta;
    let norm = y.norm();
    ((y / norm).iter().copied().collect(), norm)
}

/// `Σ_α Σ_j |s Π_{i≠j} b_i|`.
pub fn oracle_weight(d: &TensorDecomposition, x: &[f64]) -> f64 {
    let xv = DVector::from_column_slice(x);
    let mut total = 0.0;
    for term in d.terms() {
        let b: Vec<f64> = term.iter().map(|f| xv.dot(&(real_part(f) * &xv))).collect();
        for j in 0..b.len() {
            let others: f64 = (0..b.len()).filter(|&i| i != j).map(|i| b[i]).product();
            total += (d.prefactor() * others).abs();
        }
    }
    total
}

/// Max componentwise difference after flipping `a` onto `b`'s sign.
pub fn diff_up_to_sign(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(u, v)| u * v).sum();
    let s = if dot < 0.0 { -1.0 } else { 1.0 };
    a.iter().zip(b).map(|(u, v)| (s * u - v).abs()).fold(0.0, f64::max)
}

/// `f(y) = ‖y‖^{2p} f(y/‖y‖)` extends the library objective off the sphere.
pub fn objective_off_sphere(d: &TensorDecomposition, y: &[f64]) -> f64 {
    let norm: f64 = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    let unit = Point::normalized(y.to_vec()).unwrap();
    norm.powi(2 * d.order() as i32) * d.objective(&unit).unwrap()
}
