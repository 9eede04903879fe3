//! Two-layer networks `x ↦ Σᵢ aᵢ σ(wᵢᵀx + bᵢ)` as finite discrete measures.

use crate::activation::Activation;
use crate::error::{Error, Result};
use crate::scalar::{dot, norm2, Scalar};

/// One neuron `a σ(wᵀx + b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom<T> {
    pub a: T,
    pub w: Vec<T>,
    pub b: T,
}

impl<T: Scalar> Atom<T> {
    pub fn new(a: T, w: Vec<T>, b: T) -> Self {
        Self { a, w, b }
    }

    #[inline]
    pub fn pre_activation(&self, x: &[T]) -> T {
        dot(&self.w, x) + self.b
    }

    #[inline]
    pub fn eval(&self, act: Activation, x: &[T]) -> T {
        self.a * act.eval(self.pre_activation(x))
    }

    pub fn w_norm(&self) -> T {
        norm2(&self.w)
    }

    /// `|a|·(|w|+|b|)` or `|a|·(|w|+1)` depending on the activation.
    pub fn path_weight(&self, act: Activation) -> T {
        self.a.abs() * act.weight_factor(self.w_norm(), self.b)
    }

    fn validate(&self, act: Activation, index: usize) -> Result<()> {
        if !self.a.is_finite() || !self.b.is_finite() || self.w.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("atom {index}")));
        }
        if !act.is_bounded() && self.w.iter().all(|v| v.is_zero()) {
            return Err(Error::InvalidAtom(format!(
                "atom {index}: zero direction is only allowed for bounded activations, \
                 {act} constants are encoded by affine pairs"
            )));
        }
        Ok(())
    }
}

/// A finite two-layer network together with its path-norm certificate.
///
/// The certificate is an upper bound for the Barron norm of the represented
/// function; it is never the infimum over all representations.
#[derive(Debug, Clone, PartialEq)]
pub struct ShallowRep<T> {
    input_dim: usize,
    activation: Activation,
    atoms: Vec<Atom<T>>,
    norm_cert: T,
}

impl<T: Scalar> ShallowRep<T> {
    pub fn new(input_dim: usize, activation: Activation, atoms: Vec<Atom<T>>) -> Result<Self> {
        if input_dim == 0 {
            return Err(Error::InvalidArgument("input dimension must be positive".into()));
        }
        for (i, atom) in atoms.iter().enumerate() {
            if atom.w.len() != input_dim {
                return Err(Error::DimensionMismatch { expected: input_dim, got: atom.w.len() });
            }
            atom.validate(activation, i)?;
        }
        let norm_cert = path_norm(activation, &atoms);
        Ok(Self { input_dim, activation, atoms, norm_cert })
    }

    /// The zero function.
    pub fn zero(input_dim: usize, activation: Activation) -> Self {
        assert!(input_dim > 0);
        Self { input_dim, activation, atoms: Vec::new(), norm_cert: T::zero() }
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }

    pub fn atoms(&self) -> &[Atom<T>] {
        &self.atoms
    }

    pub fn into_atoms(self) -> Vec<Atom<T>> {
        self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Stored certificate, computed once at construction.
    pub fn norm_cert(&self) -> T {
        self.norm_cert
    }

    /// Recomputes the path norm from the atoms.
    pub fn rep_norm(&self) -> T {
        path_norm(self.activation, &self.atoms)
    }

    pub fn eval(&self, x: &[T]) -> Result<T> {
        if x.len() != self.input_dim {
            return Err(Error::DimensionMismatch { expected: self.input_dim, got: x.len() });
        }
        Ok(self.eval_unchecked(x))
    }

    /// Sum over atoms in stored order. Caller guarantees `x.len() == input_dim`.
    #[inline]
    pub fn eval_unchecked(&self, x: &[T]) -> T {
        let act = self.activation;
        self.atoms.iter().fold(T::zero(), |acc, atom| acc + atom.eval(act, x))
    }

    pub fn eval_many(&self, points: &[Vec<T>]) -> Result<Vec<T>> {
        points.iter().map(|p| self.eval(p)).collect()
    }

    /// Union of the two atom lists; represents the sum of the functions.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        if other.input_dim != self.input_dim {
            return Err(Error::DimensionMismatch { expected: self.input_dim, got: other.input_dim });
        }
        if other.activation != self.activation {
            return Err(Error::InvalidArgument(format!(
                "cannot add {} and {} networks",
                self.activation, other.activation
            )));
        }
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().cloned());
        Ok(Self { input_dim: self.input_dim, activation: self.activation, norm_cert: path_norm(self.activation, &atoms), atoms })
    }

    /// Multiplies every outer weight by `c`.
    pub fn scaled(&self, c: T) -> Self {
        let atoms: Vec<_> = self
            .atoms
            .iter()
            .map(|at| Atom { a: at.a * c, w: at.w.clone(), b: at.b })
            .collect();
        Self { input_dim: self.input_dim, activation: self.activation, norm_cert: path_norm(self.activation, &atoms), atoms }
    }

    /// Embeds into a higher dimensional space by zero-padding every direction.
    pub fn embed(&self, new_dim: usize) -> Result<Self> {
        if new_dim < self.input_dim {
            return Err(Error::DimensionMismatch { expected: self.input_dim, got: new_dim });
        }
        let atoms = self
            .atoms
            .iter()
            .map(|at| {
                let mut w = at.w.clone();
                w.resize(new_dim, T::zero());
                Atom { a: at.a, w, b: at.b }
            })
            .collect();
        Self::new(new_dim, self.activation, atoms)
    }

    /// Converts the scalar type (e.g. `f64` data into an `f32` network).
    pub fn cast<U: Scalar>(&self) -> ShallowRep<U> {
        let atoms: Vec<Atom<U>> = self
            .atoms
            .iter()
            .map(|at| Atom {
                a: U::c(at.a.f64()),
                w: at.w.iter().map(|v| U::c(v.f64())).collect(),
                b: U::c(at.b.f64()),
            })
            .collect();
        ShallowRep { input_dim: self.input_dim, activation: self.activation, norm_cert: path_norm(self.activation, &atoms), atoms }
    }
}

pub(crate) fn path_norm<T: Scalar>(act: Activation, atoms: &[Atom<T>]) -> T {
    atoms.iter().fold(T::zero(), |acc, at| acc + at.path_weight(act))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn relu(atoms: Vec<(f64, Vec<f64>, f64)>) -> ShallowRep<f64> {
        let d = atoms.first().map_or(1, |a| a.1.len());
        ShallowRep::new(d, Activation::Relu, atoms.into_iter().map(|(a, w, b)| Atom::new(a, w, b)).collect()).unwrap()
    }

    #[test]
    fn single_ridge() {
        let rep = relu(vec![(1.0, vec![1.0, 0.0], 0.0)]);
        assert_eq!(rep.eval(&[2.0, -5.0]).unwrap(), 2.0);
    }

    #[test]
    fn cancelling_pair_has_positive_norm() {
        let rep = relu(vec![(1.0, vec![1.0, 0.0], 0.0), (-1.0, vec![1.0, 0.0], 0.0)]);
        for x in [[0.3, 1.0], [-2.0, 4.0], [7.0, 7.0]] {
            assert_eq!(rep.eval(&x).unwrap(), 0.0);
        }
        assert_eq!(rep.rep_norm(), 2.0);
    }

    #[test]
    fn arithmetic_example() {
        let rep = relu(vec![(2.0, vec![3.0, 4.0], 1.0)]);
        assert_eq!(rep.eval(&[1.0, 1.0]).unwrap(), 16.0);
        assert_eq!(rep.rep_norm(), 12.0);
        assert_eq!(rep.norm_cert(), 12.0);
    }

    #[test]
    fn empty_rep() {
        let rep = ShallowRep::<f64>::zero(3, Activation::Relu);
        assert_eq!(rep.rep_norm(), 0.0);
        assert_eq!(rep.eval(&[1.0, 2.0, 3.0]).unwrap(), 0.0);
    }

    #[test]
    fn dimension_mismatch() {
        let rep = relu(vec![(1.0, vec![1.0, 0.0], 0.0)]);
        assert_eq!(rep.eval(&[1.0]), Err(Error::DimensionMismatch { expected: 2, got: 1 }));
        let bad = ShallowRep::new(2, Activation::Relu, vec![Atom::new(1.0, vec![1.0], 0.0)]);
        assert!(matches!(bad, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn zero_direction_rules() {
        let z = ShallowRep::new(2, Activation::Relu, vec![Atom::new(1.0, vec![0.0, 0.0], -1.0)]);
        assert!(matches!(z, Err(Error::InvalidAtom(_))));
        let c = ShallowRep::new(2, Activation::Tanh, vec![Atom::new(2.0, vec![0.0, 0.0], 1.0)]).unwrap();
        assert_eq!(c.rep_norm(), 2.0);
        assert!((c.eval(&[5.0, -3.0]).unwrap() - 2.0 * 1f64.tanh()).abs() < 1e-15);
    }

    #[test]
    fn non_finite_rejected() {
        let r = ShallowRep::new(1, Activation::Relu, vec![Atom::new(f64::NAN, vec![1.0], 0.0)]);
        assert!(matches!(r, Err(Error::NonFinite(_))));
        let r = ShallowRep::new(1, Activation::Relu, vec![Atom::new(1.0, vec![f64::INFINITY], 0.0)]);
        assert!(matches!(r, Err(Error::NonFinite(_))));
    }

    #[test]
    fn bounded_convention_ignores_bias() {
        let rep = ShallowRep::new(2, Activation::Tanh, vec![Atom::new(-2.0, vec![3.0, 4.0], 100.0)]).unwrap();
        assert_eq!(rep.rep_norm(), 12.0);
    }

    #[test]
    fn f32_evaluation() {
        let rep = relu(vec![(2.0, vec![3.0, 4.0], 1.0)]).cast::<f32>();
        assert_eq!(rep.eval(&[1.0f32, 1.0]).unwrap(), 16.0f32);
        assert_eq!(rep.rep_norm(), 12.0f32);
    }

    fn arb_rep(max_atoms: usize) -> impl Strategy<Value = ShallowRep<f64>> {
        (1usize..4).prop_flat_map(move |d| {
            prop::collection::vec(
                (-3.0..3.0f64, prop::collection::vec(-2.0..2.0f64, d), -2.0..2.0f64),
                0..max_atoms,
            )
            .prop_map(move |v| {
                let atoms = v
                    .into_iter()
                    .map(|(a, mut w, b)| {
                        if w.iter().all(|x| *x == 0.0) {
                            w[0] = 1.0;
                        }
                        Atom::new(a, w, b)
                    })
                    .collect();
                ShallowRep::new(d, Activation::Relu, atoms).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn norm_is_absolutely_homogeneous(rep in arb_rep(8), c in -5.0..5.0f64) {
            let scaled = rep.scaled(c);
            let expect = c.abs() * rep.rep_norm();
            prop_assert!((scaled.rep_norm() - expect).abs() <= 1e-12 * (1.0 + expect));
        }

        #[test]
        fn norm_is_order_independent(rep in arb_rep(8)) {
            let mut atoms = rep.atoms().to_vec();
            atoms.reverse();
            let rev = ShallowRep::new(rep.input_dim(), rep.activation(), atoms).unwrap();
            prop_assert!((rev.rep_norm() - rep.rep_norm()).abs() <= 1e-12 * (1.0 + rep.rep_norm()));
            prop_assert_eq!(rep.rep_norm(), rep.norm_cert());
        }

        #[test]
        fn evaluation_is_additive(a in arb_rep(6), b in arb_rep(6), seed in prop::collection::vec(-3.0..3.0f64, 3)) {
            prop_assume!(a.input_dim() == b.input_dim());
            let x = &seed[..a.input_dim()];
            let sum = a.concat(&b).unwrap();
            let lhs = sum.eval(x).unwrap();
            let rhs = a.eval(x).unwrap() + b.eval(x).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + sum.norm_cert() * 4.0));
        }
    }
}
