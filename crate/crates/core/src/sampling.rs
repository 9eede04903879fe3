//! Maurey–Jones–Barron subsampling of a representation.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::shallow::{Atom, ShallowRep};
use rand::distr::{weighted::WeightedIndex, Distribution};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Draws `m` atoms i.i.d. with probability `νᵢ/C`, `νᵢ` the path weight of
/// atom `i` and `C = Σνᵢ`, and rescales each draw to path weight `C/m`.
/// Repeated draws of one atom are merged, so the result has at most `m`
/// atoms. It is an unbiased estimator of the function whose certificate
/// equals `C` up to rounding. Deterministic for a given seed.
pub fn subsample<T: Scalar>(rep: &ShallowRep<T>, m: usize, seed: u64) -> Result<ShallowRep<T>> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    if rep.is_empty() {
        return Err(Error::Empty);
    }
    let act = rep.activation();
    let nu: Vec<f64> = rep.atoms().iter().map(|at| at.path_weight(act).f64()).collect();
    let total: f64 = nu.iter().sum();
    if total <= 0.0 {
        return Err(Error::ZeroNorm);
    }
    let dist = WeightedIndex::new(&nu).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0usize; nu.len()];
    for _ in 0..m {
        counts[dist.sample(&mut rng)] += 1;
    }
    let atoms = counts
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| {
            let at = &rep.atoms()[i];
            // k·C/(m·ν) is exactly 1 when the draw is forced
            let scale = T::c((k as f64 * total) / (m as f64 * nu[i]));
            Atom::new(at.a * scale, at.w.clone(), at.b)
        })
        .collect();
    ShallowRep::new(rep.input_dim(), act, atoms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::activation::Activation;
    use rand::Rng;

    #[test]
    fn single_atom_is_returned_exactly() {
        let rep = ShallowRep::new(2, Activation::Relu, vec![Atom::new(-0.37, vec![0.3, 1.1], 0.9)]).unwrap();
        for m in [1, 5, 64] {
            assert_eq!(subsample(&rep, m, 11).unwrap(), rep);
        }
    }

    #[test]
    fn certificate_is_preserved() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let atoms = (0..40).map(|_| Atom::new(rng.random_range(-1.0..1.0), vec![rng.random_range(-1.0..1.0), 1.0], rng.random_range(-1.0..1.0))).collect();
        let rep = ShallowRep::new(2, Activation::Relu, atoms).unwrap();
        for m in [1, 7, 100] {
            let s = subsample(&rep, m, 3).unwrap();
            assert!(s.len() <= m);
            assert!(s.norm_cert() <= rep.norm_cert() * (1.0 + 1e-12));
            assert!(s.norm_cert() >= rep.norm_cert() * (1.0 - 1e-12));
        }
        assert_eq!(subsample(&rep, 50, 9).unwrap(), subsample(&rep, 50, 9).unwrap());
    }

    #[test]
    fn errors() {
        let rep = ShallowRep::new(1, Activation::Relu, vec![Atom::new(0.0, vec![1.0], 0.0)]).unwrap();
        assert_eq!(subsample(&rep, 3, 0), Err(Error::ZeroNorm));
        assert_eq!(subsample(&rep, 0, 0), Err(Error::InvalidArgument("m must be at least 1".into())));
        assert_eq!(subsample(&ShallowRep::<f64>::zero(1, Activation::Relu), 3, 0), Err(Error::Empty));
    }
}
