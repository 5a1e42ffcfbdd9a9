use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::POSTSELECT_MIN_PROB;
use crate::poly::UNITARY_TOL;
use crate::{CMatrix, Error, Result, C64};

/// Largest register the simulator accepts.
pub const MAX_QUBITS: usize = 20;

const NORM_TOL: f64 = 1e-12;

/// Pure state over `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct QState {
    num_qubits: usize,
    amps: Vec<C64>,
}

impl QState {
    /// `|0…0⟩`.
    pub fn zero(num_qubits: usize) -> Result<Self> {
        Self::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        check_qubits(num_qubits)?;
        let len = 1usize << num_qubits;
        if index >= len {
            return Err(Error::InvalidState(format!("basis index {index} out of range")));
        }
        let mut amps = vec![C64::new(0.0, 0.0); len];
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { num_qubits, amps })
    }

    /// Wraps normalised amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::InvalidState(format!("length {len} is not a power of two")));
        }
        let num_qubits = len.trailing_zeros() as usize;
        check_qubits(num_qubits)?;
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if !((norm - 1.0).abs() <= NORM_TOL) {
            return Err(Error::InvalidState(format!("squared norm {norm} differs from 1")));
        }
        Ok(Self { num_qubits, amps })
    }

    /// Real amplitudes, zero padded to `2^num_qubits` and normalised.
    pub fn from_real_padded(values: &[f64], num_qubits: usize) -> Result<Self> {
        check_qubits(num_qubits)?;
        let len = 1usize << num_qubits;
        if values.len() > len {
            return Err(Error::InvalidState(format!(
                "{} amplitudes do not fit in {num_qubits} qubits",
                values.len()
            )));
        }
        let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("zero vector".into()));
        }
        let mut amps = vec![C64::new(0.0, 0.0); len];
        for (a, v) in amps.iter_mut().zip(values) {
            *a = C64::new(v / norm, 0.0);
        }
        Ok(Self { num_qubits, amps })
    }

    /// `|a⟩ ⊗ |b⟩` with `a` on the more significant qubits.
    pub fn tensor(&self, other: &QState) -> Result<Self> {
        check_qubits(self.num_qubits + other.num_qubits)?;
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        Ok(Self {
            num_qubits: self.num_qubits + other.num_qubits,
            amps,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `U` on `targets` (first target is the most significant bit of `U`'s
    /// index).
    pub fn apply_unitary(&self, u: &CMatrix, targets: &[usize]) -> Result<QState> {
        self.apply_controlled(u, &[], &[], targets)
    }

    /// `U` on `targets`, restricted to the subspace where `controls` read
    /// `pattern`.
    pub fn apply_controlled(
        &self,
        u: &CMatrix,
        controls: &[usize],
        pattern: &[bool],
        targets: &[usize],
    ) -> Result<QState> {
        if controls.len() != pattern.len() {
            return Err(Error::BadQubits(format!(
                "{} controls but {} pattern bits",
                controls.len(),
                pattern.len()
            )));
        }
        self.check_distinct(controls.iter().chain(targets))?;
        let k = targets.len();
        let sub = 1usize << k;
        if u.nrows() != sub || u.ncols() != sub {
            return Err(Error::BadQubits(format!(
                "{}x{} matrix on {k} target qubits",
                u.nrows(),
                u.ncols()
            )));
        }
        let deviation = crate::poly::factor_unitarity(u);
        if !(deviation <= UNITARY_TOL) {
            return Err(Error::NotUnitary(deviation));
        }

        let target_bits: Vec<usize> = targets.iter().map(|&q| self.bit(q)).collect();
        let target_mask = target_bits.iter().fold(0, |m, b| m | b);
        let (control_mask, control_value) = controls.iter().zip(pattern).fold((0, 0), |(m, v), (&q, &on)| {
            let b = self.bit(q);
            (m | b, if on { v | b } else { v })
        });

        let mut out = self.amps.clone();
        let mut idx = vec![0usize; sub];
        let mut gathered = vec![C64::new(0.0, 0.0); sub];
        for base in 0..self.amps.len() {
            if base & target_mask != 0 || base & control_mask != control_value {
                continue;
            }
            for (s, slot) in idx.iter_mut().enumerate() {
                let mut i = base;
                for (t, bit) in target_bits.iter().enumerate() {
                    if (s >> (k - 1 - t)) & 1 == 1 {
                        i |= bit;
                    }
                }
                *slot = i;
            }
            for (g, &i) in gathered.iter_mut().zip(&idx) {
                *g = self.amps[i];
            }
            for (r, &i) in idx.iter().enumerate() {
                out[i] = (0..sub).map(|c| u[(r, c)] * gathered[c]).sum();
            }
        }
        Ok(Self {
            num_qubits: self.num_qubits,
            amps: out,
        })
    }

    /// Marginal distribution of `qubits`; outcome index has the first listed
    /// qubit as its most significant bit.
    pub fn probabilities(&self, qubits: &[usize]) -> Result<Vec<f64>> {
        self.check_distinct(qubits.iter())?;
        let mut probs = vec![0.0; 1 << qubits.len()];
        for (i, a) in self.amps.iter().enumerate() {
            probs[self.outcome_of(i, qubits)] += a.norm_sqr();
        }
        Ok(probs)
    }

    /// Projects `qubits` onto `outcome`, removes them and renormalises.
    /// Returns the residual state on the remaining qubits (original order)
    /// and the projection probability.
    pub fn postselect(&self, qubits: &[usize], outcome: &[bool]) -> Result<(QState, f64)> {
        if qubits.len() != outcome.len() {
            return Err(Error::BadQubits(format!(
                "{} qubits but {} outcome bits",
                qubits.len(),
                outcome.len()
            )));
        }
        self.check_distinct(qubits.iter())?;
        let wanted = outcome.iter().fold(0, |acc, &b| (acc << 1) | b as usize);
        let kept: Vec<usize> = (0..self.num_qubits).filter(|q| !qubits.contains(q)).collect();
        let mut amps = vec![C64::new(0.0, 0.0); 1 << kept.len()];
        let mut prob = 0.0;
        for (i, a) in self.amps.iter().enumerate() {
            if self.outcome_of(i, qubits) == wanted {
                prob += a.norm_sqr();
                amps[self.outcome_of(i, &kept)] = *a;
            }
        }
        if !(prob > POSTSELECT_MIN_PROB) {
            return Err(Error::PostSelection(prob));
        }
        let scale = 1.0 / prob.sqrt();
        for a in &mut amps {
            *a *= scale;
        }
        Ok((
            Self {
                num_qubits: kept.len(),
                amps,
            },
            prob,
        ))
    }

    /// Draws `shots` outcomes of `qubits` from the exact marginal
    /// (multinomial, deterministic for a given seed). Entry `k` counts
    /// outcome `k`, indexed as in [`probabilities`](Self::probabilities).
    pub fn measure_sample(&self, qubits: &[usize], seed: u64, shots: u64) -> Result<Vec<u64>> {
        if shots == 0 {
            return Err(Error::InvalidArgument("shots must be at least 1".into()));
        }
        let probs = self.probabilities(qubits)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok(multinomial(&probs, shots, &mut rng))
    }

    fn bit(&self, q: usize) -> usize {
        1 << (self.num_qubits - 1 - q)
    }

    fn outcome_of(&self, index: usize, qubits: &[usize]) -> usize {
        qubits
            .iter()
            .fold(0, |acc, &q| (acc << 1) | usize::from(index & self.bit(q) != 0))
    }

    fn check_distinct<'a>(&self, qubits: impl Iterator<Item = &'a usize>) -> Result<()> {
        let mut seen = 0u64;
        for &q in qubits {
            if q >= self.num_qubits {
                return Err(Error::BadQubits(format!(
                    "qubit {q} out of range for {} qubits",
                    self.num_qubits
                )));
            }
            if seen & (1 << q) != 0 {
                return Err(Error::BadQubits(format!("qubit {q} listed twice")));
            }
            seen |= 1 << q;
        }
        Ok(())
    }
}

/// Sequential-binomial multinomial draw.
pub(crate) fn multinomial(probs: &[f64], shots: u64, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let mut counts = vec![0u64; probs.len()];
    let mut remaining = shots;
    let mut mass: f64 = probs.iter().sum();
    for (k, &p) in probs.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        if k + 1 == probs.len() {
            counts[k] = remaining;
            break;
        }
        let q = if mass > 0.0 { (p / mass).clamp(0.0, 1.0) } else { 0.0 };
        let draw = Binomial::new(remaining, q).expect("probability clamped to [0, 1]").sample(rng);
        counts[k] = draw;
        remaining -= draw;
        mass -= p;
    }
    counts
}

fn check_qubits(n: usize) -> Result<()> {
    if n > MAX_QUBITS {
        return Err(Error::TooManyQubits(n));
    }
    Ok(())
}

impl Serialize for QState {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.amps.iter().map(|a| [a.re, a.im]))
    }
}

impl<'de> Deserialize<'de> for QState {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(deserializer)?;
        QState::from_amplitudes(pairs.into_iter().map(|[re, im]| C64::new(re, im)).collect())
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn x_gate() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)])
    }

    fn hadamard() -> CMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        CMatrix::from_row_slice(2, 2, &[c(h), c(h), c(h), c(-h)])
    }

    #[test]
    fn single_qubit_gates() {
        let zero = QState::zero(1).unwrap();
        assert_eq!(zero.apply_unitary(&CMatrix::identity(2, 2), &[0]).unwrap(), zero);
        assert_eq!(zero.apply_unitary(&x_gate(), &[0]).unwrap(), QState::basis(1, 1).unwrap());
        let back = zero
            .apply_unitary(&hadamard(), &[0])
            .unwrap()
            .apply_unitary(&hadamard(), &[0])
            .unwrap();
        assert!((back.amplitudes()[0] - c(1.0)).norm() < 1e-14);
        assert!(back.amplitudes()[1].norm() < 1e-14);
    }

    #[test]
    fn bit_ordering() {
        // X on qubit 0 of |00> sets the most significant bit
        let s = QState::zero(2).unwrap().apply_unitary(&x_gate(), &[0]).unwrap();
        assert_eq!(s, QState::basis(2, 0b10).unwrap());
        let s = QState::zero(2).unwrap().apply_unitary(&x_gate(), &[1]).unwrap();
        assert_eq!(s, QState::basis(2, 0b01).unwrap());
    }

    #[test]
    fn controlled_gates() {
        let s = QState::basis(2, 0b00).unwrap();
        assert_eq!(s.apply_controlled(&x_gate(), &[0], &[true], &[1]).unwrap(), s);
        let s = QState::basis(2, 0b10).unwrap();
        let out = s.apply_controlled(&x_gate(), &[0], &[true], &[1]).unwrap();
        assert_eq!(out, QState::basis(2, 0b11).unwrap());
        // zero-controlled
        let s = QState::basis(2, 0b00).unwrap();
        let out = s.apply_controlled(&x_gate(), &[0], &[false], &[1]).unwrap();
        assert_eq!(out, QState::basis(2, 0b01).unwrap());
    }

    #[test]
    fn two_qubit_target_order() {
        // CNOT with control = first target
        let cnot = CMatrix::from_row_slice(
            4,
            4,
            &[
                c(1.0), c(0.0), c(0.0), c(0.0), //
                c(0.0), c(1.0), c(0.0), c(0.0), //
                c(0.0), c(0.0), c(0.0), c(1.0), //
                c(0.0), c(0.0), c(1.0), c(0.0),
            ],
        );
        // qubit 2 set, apply CNOT(control 2, target 0) on 3 qubits
        let s = QState::basis(3, 0b001).unwrap();
        let out = s.apply_unitary(&cnot, &[2, 0]).unwrap();
        assert_eq!(out, QState::basis(3, 0b101).unwrap());
    }

    #[test]
    fn argument_errors() {
        let s = QState::zero(2).unwrap();
        assert!(matches!(s.apply_unitary(&x_gate(), &[2]), Err(Error::BadQubits(_))));
        assert!(matches!(s.apply_unitary(&CMatrix::identity(4, 4), &[1, 1]), Err(Error::BadQubits(_))));
        assert!(matches!(s.apply_controlled(&x_gate(), &[1], &[true], &[1]), Err(Error::BadQubits(_))));
        assert!(matches!(s.apply_controlled(&x_gate(), &[0], &[], &[1]), Err(Error::BadQubits(_))));
        assert!(matches!(s.apply_unitary(&CMatrix::identity(4, 4), &[0]), Err(Error::BadQubits(_))));
        let not_unitary = CMatrix::from_row_slice(2, 2, &[c(1.0), c(1.0), c(0.0), c(1.0)]);
        assert!(matches!(s.apply_unitary(&not_unitary, &[0]), Err(Error::NotUnitary(_))));
        assert!(matches!(QState::zero(21), Err(Error::TooManyQubits(21))));
    }

    #[test]
    fn postselection() {
        let psi = QState::from_amplitudes(vec![c(0.6), C64::new(0.0, 0.8)]).unwrap();
        let joint = QState::zero(1).unwrap().tensor(&psi).unwrap();
        let (rest, p) = joint.postselect(&[0], &[false]).unwrap();
        assert_eq!(p, 1.0);
        assert_eq!(rest, psi);

        let plus = QState::zero(1).unwrap().apply_unitary(&hadamard(), &[0]).unwrap();
        let (rest, p) = plus.postselect(&[0], &[false]).unwrap();
        assert!((p - 0.5).abs() < 1e-15);
        assert_eq!(rest.num_qubits(), 0);
        assert!((rest.amplitudes()[0] - c(1.0)).norm() < 1e-15);

        let one = QState::basis(1, 1).unwrap();
        assert!(matches!(one.postselect(&[0], &[false]), Err(Error::PostSelection(_))));
    }

    #[test]
    fn sampling_is_deterministic() {
        let zero = QState::zero(1).unwrap();
        assert_eq!(zero.measure_sample(&[0], 1, 100).unwrap(), vec![100, 0]);
        let plus = zero.apply_unitary(&hadamard(), &[0]).unwrap();
        let a = plus.measure_sample(&[0], 42, 1000).unwrap();
        assert_eq!(a, plus.measure_sample(&[0], 42, 1000).unwrap());
        assert_eq!(a.iter().sum::<u64>(), 1000);
        assert!(zero.measure_sample(&[0], 1, 0).is_err());
    }

    #[test]
    fn plus_state_frequency() {
        let plus = QState::zero(1).unwrap().apply_unitary(&hadamard(), &[0]).unwrap();
        let counts = plus.measure_sample(&[0], 7, 1_000_000).unwrap();
        let freq = counts[0] as f64 / 1e6;
        // 3σ = 3 · sqrt(0.25 / 1e6) = 0.0015
        assert!((freq - 0.5).abs() <= 0.002, "{freq}");
    }

    #[test]
    fn json_round_trip() {
        let s = QState::from_amplitudes(vec![c(0.6), C64::new(0.0, 0.8)]).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, "[[0.6,0.0],[0.0,0.8]]");
        assert_eq!(serde_json::from_str::<QState>(&text).unwrap(), s);
        assert!(serde_json::from_str::<QState>("[[1.0,0.0],[1.0,0.0]]").is_err());
    }
}
