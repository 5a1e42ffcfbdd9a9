//! Pauli-string labels and expansion of real symmetric matrices in the
//! Pauli basis.
//!
//! A label is an optional sign (`+` or `-`) followed by one letter from
//! `IXYZ` per qubit. The first letter acts on the most significant qubit, so
//! `"XZ"` is `X ⊗ Z`.

use super::UnitaryFactor;
use crate::{CMatrix, Error, Result, C64};

fn single(letter: char) -> Option<[C64; 4]> {
    let o = C64::new(0.0, 0.0);
    let l = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    match letter {
        'I' => Some([l, o, o, l]),
        'X' => Some([o, l, l, o]),
        'Y' => Some([o, -i, i, o]),
        'Z' => Some([l, o, o, -l]),
        _ => None,
    }
}

pub(crate) fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Parses a label and returns its canonical spelling with the matrix.
pub(crate) fn parse_label(label: &str) -> Result<(String, CMatrix)> {
    let trimmed = label.trim();
    let (negative, body) = match trimmed.chars().next() {
        Some('-') => (true, &trimmed[1..]),
        Some('+') => (false, &trimmed[1..]),
        _ => (false, trimmed),
    };
    if body.is_empty() {
        return Err(Error::Parse(format!("empty Pauli label {label:?}")));
    }
    let mut matrix = CMatrix::identity(1, 1);
    for letter in body.chars() {
        let entries = single(letter.to_ascii_uppercase())
            .ok_or_else(|| Error::Parse(format!("unknown Pauli letter {letter:?} in {label:?}")))?;
        matrix = kron(&matrix, &CMatrix::from_row_slice(2, 2, &entries));
    }
    if negative {
        matrix = -matrix;
    }
    let body = body.to_ascii_uppercase();
    let canonical = if negative { format!("-{body}") } else { body };
    Ok((canonical, matrix))
}

/// Every Pauli string on `qubits` qubits in lexicographic `IXYZ` order.
pub fn all_strings(qubits: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    for _ in 0..qubits {
        out = out
            .into_iter()
            .flat_map(|prefix| "IXYZ".chars().map(move |c| format!("{prefix}{c}")))
            .collect();
    }
    out
}

/// Expands a real symmetric `n × n` matrix (`n` a power of two) as
/// `Σ_k w_k P_k` with real weights. Terms with `|w_k| ≤ cutoff` are dropped.
///
/// Strings with an odd number of `Y` letters are antisymmetric and never
/// contribute to a symmetric matrix.
pub fn decompose_symmetric(
    matrix: &nalgebra::DMatrix<f64>,
    cutoff: f64,
) -> Result<Vec<(f64, UnitaryFactor)>> {
    let n = matrix.nrows();
    if n != matrix.ncols() || n == 0 || !n.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "Pauli expansion needs a square power-of-two matrix, got {}x{}",
            matrix.nrows(),
            matrix.ncols()
        )));
    }
    let asym = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| (matrix[(i, j)] - matrix[(j, i)]).abs())
        .fold(0.0, f64::max);
    if asym > 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "matrix is not symmetric (max asymmetry {asym:.3e})"
        )));
    }
    let qubits = n.trailing_zeros() as usize;
    let mut terms = Vec::new();
    for label in all_strings(qubits) {
        if label.matches('Y').count() % 2 == 1 {
            continue;
        }
        let factor = UnitaryFactor::pauli(&label)?;
        let p = factor.matrix();
        let mut trace = C64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                trace += p[(i, j)] * matrix[(j, i)];
            }
        }
        let weight = trace.re / n as f64;
        if weight.abs() > cutoff {
            terms.push((weight, factor));
        }
    }
    Ok(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    #[test]
    fn labels() {
        let (canon, m) = parse_label("-i").unwrap();
        assert_eq!(canon, "-I");
        assert_eq!(m, -CMatrix::identity(2, 2));
        let (_, xz) = parse_label("XZ").unwrap();
        assert_eq!(xz.nrows(), 4);
        // X ⊗ Z maps |00> -> |10>
        assert_eq!(xz[(2, 0)], C64::new(1.0, 0.0));
        assert_eq!(xz[(3, 1)], C64::new(-1.0, 0.0));
        assert!(parse_label("Q").is_err());
        assert!(parse_label("-").is_err());
    }

    #[test]
    fn decomposition_reconstructs_matrix() {
        let m = DMatrix::from_row_slice(
            4,
            4,
            &[
                2.0, -1.0, 0.5, 0.0, //
                -1.0, 3.0, 0.0, 0.25, //
                0.5, 0.0, -1.0, 0.7, //
                0.0, 0.25, 0.7, 0.0,
            ],
        );
        let terms = decompose_symmetric(&m, 1e-14).unwrap();
        let mut rebuilt = CMatrix::zeros(4, 4);
        for (w, f) in &terms {
            rebuilt += f.matrix() * C64::new(*w, 0.0);
        }
        for i in 0..4 {
            for j in 0..4 {
                assert!((rebuilt[(i, j)] - C64::new(m[(i, j)], 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn decomposition_rejects_bad_shapes() {
        assert!(decompose_symmetric(&DMatrix::zeros(3, 3), 0.0).is_err());
        let asym = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(decompose_symmetric(&asym, 0.0).is_err());
    }
}
