//! Data augmentation by pushing signals along proxy-translations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::proxy::ProxyFamily;
use crate::signals::SignalMatrix;

/// `y[ψ_p^reps(v)] = x[v]` wherever defined; every other entry is `fill`.
pub fn translate_signal(f: &ProxyFamily, p: usize, reps: usize, x: &[f64], fill: f64) -> Result<Vec<f64>> {
    if p >= f.kappa {
        return Err(Error::IndexOutOfRange { index: p, kappa: f.kappa });
    }
    if x.len() != f.n() {
        return Err(Error::ShapeMismatch { what: "signal", expected: f.n(), got: x.len() });
    }
    let mut y = vec![fill; x.len()];
    let mut source: Vec<Option<usize>> = vec![None; x.len()];
    for (v, &value) in x.iter().enumerate() {
        let Some(t) = f.compose(p, reps, v) else { continue };
        if let Some(first) = source[t] {
            return Err(Error::NonInjective { index: p, target: t, first, second: v });
        }
        source[t] = Some(v);
        y[t] = value;
    }
    Ok(y)
}

/// Indices whose `reps`-fold composition is injective, i.e. usable with
/// [`translate_signal`].
pub fn injective_indices(f: &ProxyFamily, reps: usize) -> Vec<usize> {
    (0..f.kappa)
        .filter(|&p| {
            let mut seen = vec![false; f.n()];
            (0..f.n()).filter_map(|v| f.compose(p, reps, v)).all(|t| !std::mem::replace(&mut seen[t], true))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AugmentationSpec {
    /// Kernel indices drawn from, each in `1..κ`.
    pub indices: Vec<usize>,
    /// Times the drawn translation is applied.
    pub repetitions: usize,
    pub fill: f64,
    /// Translated copies per input row.
    pub draws: usize,
}

impl AugmentationSpec {
    pub fn validate(&self, kappa: usize) -> Result<()> {
        if self.indices.is_empty() {
            return Err(Error::InvalidParameter("augmentation needs at least one index".into()));
        }
        if self.repetitions == 0 {
            return Err(Error::InvalidParameter("repetitions must be at least 1".into()));
        }
        if let Some(&p) = self.indices.iter().find(|&&p| p >= kappa) {
            return Err(Error::IndexOutOfRange { index: p, kappa });
        }
        if !self.fill.is_finite() {
            return Err(Error::InvalidParameter("fill must be finite".into()));
        }
        Ok(())
    }
}

/// The input rows, then `draws` blocks of `m` translated rows. In every
/// block each row gets an index drawn uniformly from `spec.indices` with a
/// ChaCha8 stream seeded by `seed`.
pub fn augment_dataset(s: &SignalMatrix, f: &ProxyFamily, spec: &AugmentationSpec, seed: u64) -> Result<SignalMatrix> {
    spec.validate(f.kappa)?;
    if s.n() != f.n() {
        return Err(Error::ShapeMismatch { what: "signal columns", expected: f.n(), got: s.n() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(s.values().len() * (spec.draws + 1));
    values.extend_from_slice(s.values());
    for _ in 0..spec.draws {
        for row in s.rows() {
            let p = spec.indices[rng.gen_range(0..spec.indices.len())];
            values.extend(translate_signal(f, p, spec.repetitions, row, spec.fill)?);
        }
    }
    SignalMatrix::new(s.m() * (spec.draws + 1), s.n(), values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_family() -> ProxyFamily {
        ProxyFamily {
            kappa: 3,
            v0: 1,
            psi: vec![
                vec![Some(0), Some(1), Some(2), Some(3)],
                vec![None, Some(0), Some(1), Some(2)],
                vec![Some(1), Some(2), Some(3), None],
            ],
            cost: vec![Some(0); 4],
        }
    }

    #[test]
    fn identity_index_copies() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(translate_signal(&path_family(), 0, 1, &x, 0.0).unwrap(), x.to_vec());
    }

    #[test]
    fn push_forward_with_fill() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(translate_signal(&path_family(), 2, 1, &x, -9.0).unwrap(), vec![-9.0, 1.0, 2.0, 3.0]);
        assert_eq!(translate_signal(&path_family(), 2, 2, &x, 0.0).unwrap(), vec![0.0, 0.0, 1.0, 2.0]);
    }

    #[test]
    fn collision_is_reported() {
        let mut f = path_family();
        f.psi[2] = vec![Some(1), Some(1), None, None];
        let err = translate_signal(&f, 2, 1, &[0.0; 4], 0.0).unwrap_err();
        assert!(matches!(err, Error::NonInjective { index: 2, target: 1, first: 0, second: 1 }));
        assert_eq!(injective_indices(&f, 1), vec![0, 1]);
    }

    #[test]
    fn dataset_layout() {
        let s = SignalMatrix::from_rows(&[vec![1.0, 2.0, 3.0, 4.0], vec![5.0, 6.0, 7.0, 8.0]]).unwrap();
        let spec = AugmentationSpec { indices: vec![1], repetitions: 1, fill: 0.0, draws: 1 };
        let out = augment_dataset(&s, &path_family(), &spec, 3).unwrap();
        assert_eq!(out.m(), 4);
        assert_eq!(out.row(2), &[2.0, 3.0, 4.0, 0.0]);
        assert_eq!(out.row(3), &[6.0, 7.0, 8.0, 0.0]);
        let none = AugmentationSpec { draws: 0, ..spec.clone() };
        assert_eq!(augment_dataset(&s, &path_family(), &none, 3).unwrap(), s);
    }

    #[test]
    fn seeded_draws_are_reproducible() {
        let s = SignalMatrix::from_rows(&vec![vec![1.0, 2.0, 3.0, 4.0]; 20]).unwrap();
        let spec = AugmentationSpec { indices: vec![1, 2], repetitions: 1, fill: 0.0, draws: 3 };
        let a = augment_dataset(&s, &path_family(), &spec, 11).unwrap();
        assert_eq!(a, augment_dataset(&s, &path_family(), &spec, 11).unwrap());
        let left = [2.0, 3.0, 4.0, 0.0];
        let right = [0.0, 1.0, 2.0, 3.0];
        let used_left = (20..80).filter(|&i| a.row(i) == left).count();
        let used_right = (20..80).filter(|&i| a.row(i) == right).count();
        assert_eq!(used_left + used_right, 60);
        assert!(used_left > 0 && used_right > 0);
    }

    #[test]
    fn spec_validation() {
        let f = path_family();
        let s = SignalMatrix::from_rows(&[vec![0.0; 4]]).unwrap();
        for spec in [
            AugmentationSpec { indices: vec![], repetitions: 1, fill: 0.0, draws: 1 },
            AugmentationSpec { indices: vec![1], repetitions: 0, fill: 0.0, draws: 1 },
            AugmentationSpec { indices: vec![3], repetitions: 1, fill: 0.0, draws: 1 },
        ] {
            assert!(augment_dataset(&s, &f, &spec, 0).is_err());
        }
    }
}
