//! The U-shaped domain `(0,1)×(0,3) ∪ (2,3)×(0,3) ∪ (0,3)×(0,1)` and the
//! function `σ(x₂−1)` on the left part, `0` on the right.

use crate::error::{CounterexampleError, Result};
use barron_core::{Activation, Atom, ShallowRep};

fn open(a: f64, lo: f64, hi: f64) -> bool {
    a > lo && a < hi
}

pub fn in_ushape(x: [f64; 2]) -> bool {
    (open(x[0], 0.0, 1.0) && open(x[1], 0.0, 3.0)) || (open(x[0], 2.0, 3.0) && open(x[1], 0.0, 3.0)) || (open(x[0], 0.0, 3.0) && open(x[1], 0.0, 1.0))
}

pub fn in_u1(x: [f64; 2]) -> bool {
    in_ushape(x) && x[0] < 2.0
}

pub fn in_u2(x: [f64; 2]) -> bool {
    in_ushape(x) && x[0] > 1.0
}

pub fn ushape_eval(x: [f64; 2]) -> Result<f64> {
    if !in_ushape(x) {
        return Err(CounterexampleError::OutsideDomain(format!("{x:?} is not in the U-shaped domain")));
    }
    Ok(if x[0] < 1.5 { (x[1] - 1.0).max(0.0) } else { 0.0 })
}

/// `σ(x₂ − 1)`, equal to the function on `U₁ = {x ∈ U : x₁ < 2}`.
pub fn u1_rep() -> ShallowRep<f64> {
    ShallowRep::new(2, Activation::Relu, vec![Atom::new(1.0, vec![0.0, 1.0], -1.0)]).expect("valid atom")
}

/// The empty network, equal to the function on `U₂ = {x ∈ U : x₁ > 1}`.
pub fn u2_rep() -> ShallowRep<f64> {
    ShallowRep::zero(2, Activation::Relu)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn probes() {
        assert_eq!(ushape_eval([0.5, 2.0]).unwrap(), 1.0);
        assert_eq!(ushape_eval([2.5, 2.0]).unwrap(), 0.0);
        assert_eq!(ushape_eval([1.2, 0.5]).unwrap(), 0.0);
        assert!(ushape_eval([1.5, 2.0]).is_err());
    }

    #[test]
    fn local_reps_match_exactly() {
        let (r1, r2) = (u1_rep(), u2_rep());
        for i in 1..60 {
            for j in 1..60 {
                let x = [i as f64 * 0.05, j as f64 * 0.05];
                if in_u1(x) {
                    assert_eq!(r1.eval(&x).unwrap(), ushape_eval(x).unwrap());
                }
                if in_u2(x) {
                    assert_eq!(r2.eval(&x).unwrap(), ushape_eval(x).unwrap());
                }
            }
        }
    }
}
