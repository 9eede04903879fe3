//! Activation functions and their norm conventions.

use crate::scalar::Scalar;
use std::fmt;
use std::str::FromStr;

/// How much a neuron's parameters weigh in the path norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormConvention {
    /// `|a| (|w| + |b|)`: unbounded activations, where the bias shifts values.
    Relu,
    /// `|a| (|w| + 1)`: activations with finite limits at ±∞.
    Bounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Smoothness {
    PiecewiseLinear,
    SmoothBounded,
    SmoothUnbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Activation {
    Relu,
    Tanh,
    Softplus,
}

impl Activation {
    pub const ALL: [Activation; 3] = [Activation::Relu, Activation::Tanh, Activation::Softplus];

    pub fn name(self) -> &'static str {
        match self {
            Activation::Relu => "relu",
            Activation::Tanh => "tanh",
            Activation::Softplus => "softplus",
        }
    }

    pub fn smoothness(self) -> Smoothness {
        match self {
            Activation::Relu => Smoothness::PiecewiseLinear,
            Activation::Tanh => Smoothness::SmoothBounded,
            Activation::Softplus => Smoothness::SmoothUnbounded,
        }
    }

    /// Softplus grows linearly, so it is weighed like ReLU.
    pub fn convention(self) -> NormConvention {
        match self {
            Activation::Tanh => NormConvention::Bounded,
            Activation::Relu | Activation::Softplus => NormConvention::Relu,
        }
    }

    pub fn is_bounded(self) -> bool {
        self.convention() == NormConvention::Bounded
    }

    /// Weight factor of one neuron: `|w| + |b|` or `|w| + 1`.
    #[inline]
    pub fn weight_factor<T: Scalar>(self, w_norm: T, b: T) -> T {
        match self.convention() {
            NormConvention::Relu => w_norm + b.abs(),
            NormConvention::Bounded => w_norm + T::one(),
        }
    }

    #[inline]
    pub fn eval<T: Scalar>(self, z: T) -> T {
        match self {
            Activation::Relu => {
                if z > T::zero() {
                    z
                } else {
                    T::zero()
                }
            }
            Activation::Tanh => z.tanh(),
            // log(1 + e^z), stable for both signs
            Activation::Softplus => z.max(T::zero()) + (-z.abs()).exp().ln_1p(),
        }
    }

    #[inline]
    pub fn deriv<T: Scalar>(self, z: T) -> T {
        match self {
            Activation::Relu => {
                if z > T::zero() {
                    T::one()
                } else {
                    T::zero()
                }
            }
            Activation::Tanh => {
                let t = z.tanh();
                T::one() - t * t
            }
            Activation::Softplus => logistic(z),
        }
    }

    /// Second derivative. `None` for ReLU, whose σ'' is a Dirac mass.
    #[inline]
    pub fn deriv2<T: Scalar>(self, z: T) -> Option<T> {
        match self {
            Activation::Relu => None,
            Activation::Tanh => {
                let t = z.tanh();
                Some(-T::c(2.0) * t * (T::one() - t * t))
            }
            Activation::Softplus => {
                let s = logistic(z);
                Some(s * (T::one() - s))
            }
        }
    }

    /// Limits at -∞ and +∞ when finite.
    pub fn limits(self) -> Option<(f64, f64)> {
        match self {
            Activation::Tanh => Some((-1.0, 1.0)),
            _ => None,
        }
    }
}

#[inline]
fn logistic<T: Scalar>(z: T) -> T {
    if z >= T::zero() {
        T::one() / (T::one() + (-z).exp())
    } else {
        let e = z.exp();
        e / (T::one() + e)
    }
}

impl fmt::Display for Activation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Activation {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "relu" => Ok(Activation::Relu),
            "tanh" => Ok(Activation::Tanh),
            "softplus" => Ok(Activation::Softplus),
            other => Err(crate::Error::Format(format!("unknown activation {other:?}"))),
        }
    }
}
