//! Tree-like networks: chains of vector-valued shallow blocks.
//!
//! Block `k` maps `ℝ^{n_{k−1}} → ℝ^{n_k}`, each output being a shallow
//! network of the previous block's outputs. The certificate is
//! `Π_k max_j ‖block_k output_j‖`, which is what the composition estimate
//! `‖f∘g‖ ≤ maxᵢ ‖gᵢ‖ ‖f‖` yields when applied block by block.

use crate::activation::Activation;
use crate::error::{Error, Result};
use crate::profile::{profile_to_atoms, Profile1D};
use crate::scalar::Scalar;
use crate::shallow::{Atom, ShallowRep};

/// Input weights of one neuron. Wide blocks whose neurons read a single
/// coordinate use the sparse form.
#[derive(Debug, Clone, PartialEq)]
pub enum Weights<T> {
    Dense(Vec<T>),
    Sparse(Vec<(usize, T)>),
}

impl<T: Scalar> Weights<T> {
    #[inline]
    fn dot(&self, z: &[T]) -> T {
        match self {
            Weights::Dense(w) => w.iter().zip(z).fold(T::zero(), |acc, (&a, &b)| acc + a * b),
            Weights::Sparse(w) => w.iter().fold(T::zero(), |acc, &(i, v)| acc + v * z[i]),
        }
    }

    pub fn norm(&self) -> T {
        let sq = match self {
            Weights::Dense(w) => w.iter().fold(T::zero(), |acc, &v| acc + v * v),
            Weights::Sparse(w) => w.iter().fold(T::zero(), |acc, &(_, v)| acc + v * v),
        };
        sq.sqrt()
    }

    fn is_zero(&self) -> bool {
        match self {
            Weights::Dense(w) => w.iter().all(|v| v.is_zero()),
            Weights::Sparse(w) => w.iter().all(|(_, v)| v.is_zero()),
        }
    }

    pub fn to_dense(&self, dim: usize) -> Vec<T> {
        match self {
            Weights::Dense(w) => w.clone(),
            Weights::Sparse(w) => {
                let mut out = vec![T::zero(); dim];
                for &(i, v) in w {
                    out[i] += v;
                }
                out
            }
        }
    }

    /// Reindexes into a wider input whose coordinates start at `offset`.
    fn shifted(&self, offset: usize, new_dim: usize) -> Self {
        match self {
            Weights::Dense(w) => {
                let mut out = vec![T::zero(); new_dim];
                out[offset..offset + w.len()].copy_from_slice(w);
                Weights::Dense(out)
            }
            Weights::Sparse(w) => Weights::Sparse(w.iter().map(|&(i, v)| (i + offset, v)).collect()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Neuron<T> {
    pub a: T,
    pub w: Weights<T>,
    pub b: T,
}

impl<T: Scalar> Neuron<T> {
    pub fn dense(a: T, w: Vec<T>, b: T) -> Self {
        Self { a, w: Weights::Dense(w), b }
    }

    pub fn sparse(a: T, w: Vec<(usize, T)>, b: T) -> Self {
        Self { a, w: Weights::Sparse(w), b }
    }

    fn path_weight(&self, act: Activation) -> T {
        self.a.abs() * act.weight_factor(self.w.norm(), self.b)
    }
}

impl<T: Scalar> From<Atom<T>> for Neuron<T> {
    fn from(at: Atom<T>) -> Self {
        Neuron::dense(at.a, at.w, at.b)
    }
}

/// One vector-valued shallow layer.
#[derive(Debug, Clone, PartialEq)]
pub struct Block<T> {
    input_dim: usize,
    activation: Activation,
    outputs: Vec<Vec<Neuron<T>>>,
}

impl<T: Scalar> Block<T> {
    pub fn new(input_dim: usize, activation: Activation, outputs: Vec<Vec<Neuron<T>>>) -> Result<Self> {
        if input_dim == 0 || outputs.is_empty() {
            return Err(Error::InvalidArgument("a block needs positive input and output dimensions".into()));
        }
        for (j, out) in outputs.iter().enumerate() {
            for (i, n) in out.iter().enumerate() {
                let ok_dim = match &n.w {
                    Weights::Dense(w) => w.len() == input_dim,
                    Weights::Sparse(w) => w.iter().all(|&(k, _)| k < input_dim),
                };
                if !ok_dim {
                    return Err(Error::InvalidAtom(format!("output {j}, neuron {i}: weights do not fit input dimension {input_dim}")));
                }
                let finite = n.a.is_finite()
                    && n.b.is_finite()
                    && match &n.w {
                        Weights::Dense(w) => w.iter().all(|v| v.is_finite()),
                        Weights::Sparse(w) => w.iter().all(|(_, v)| v.is_finite()),
                    };
                if !finite {
                    return Err(Error::NonFinite(format!("output {j}, neuron {i}")));
                }
                if !activation.is_bounded() && n.w.is_zero() {
                    return Err(Error::InvalidAtom(format!("output {j}, neuron {i}: zero direction")));
                }
            }
        }
        Ok(Self { input_dim, activation, outputs })
    }

    /// Stacks scalar networks over a common input into one block.
    pub fn from_shallow(reps: &[ShallowRep<T>]) -> Result<Self> {
        let first = reps.first().ok_or(Error::Empty)?;
        let outputs = reps
            .iter()
            .map(|r| {
                if r.input_dim() != first.input_dim() {
                    return Err(Error::DimensionMismatch { expected: first.input_dim(), got: r.input_dim() });
                }
                if r.activation() != first.activation() {
                    return Err(Error::InvalidArgument("mixed activations in one block".into()));
                }
                Ok(r.atoms().iter().cloned().map(Neuron::from).collect())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { input_dim: first.input_dim(), activation: first.activation(), outputs })
    }

    /// `zᵢ = σ(zᵢ) − σ(−zᵢ)` per coordinate. Exact for ReLU and softplus.
    pub fn identity(dim: usize, activation: Activation) -> Result<Self> {
        if activation.is_bounded() {
            return Err(Error::UnsupportedActivation(activation.name(), "no exact identity block".into()));
        }
        let outputs = (0..dim)
            .map(|i| vec![Neuron::sparse(T::one(), vec![(i, T::one())], T::zero()), Neuron::sparse(-T::one(), vec![(i, -T::one())], T::zero())])
            .collect();
        Self::new(dim, activation, outputs)
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.outputs.len()
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }

    pub fn outputs(&self) -> &[Vec<Neuron<T>>] {
        &self.outputs
    }

    pub fn neuron_count(&self) -> usize {
        self.outputs.iter().map(Vec::len).sum()
    }

    /// Path norm of every output.
    pub fn output_norms(&self) -> Vec<T> {
        self.outputs
            .iter()
            .map(|out| out.iter().fold(T::zero(), |acc, n| acc + n.path_weight(self.activation)))
            .collect()
    }

    pub fn cert(&self) -> T {
        self.output_norms().into_iter().fold(T::zero(), T::max)
    }

    fn forward(&self, z: &[T], out: &mut Vec<T>) {
        out.clear();
        let act = self.activation;
        out.extend(self.outputs.iter().map(|neurons| neurons.iter().fold(T::zero(), |acc, n| acc + n.a * act.eval(n.w.dot(z) + n.b))));
    }

    /// Output `j` as a shallow network (densifies sparse weights).
    pub fn output_as_shallow(&self, j: usize) -> Result<ShallowRep<T>> {
        let out = self.outputs.get(j).ok_or_else(|| Error::InvalidArgument(format!("block has no output {j}")))?;
        let atoms = out.iter().map(|n| Atom::new(n.a, n.w.to_dense(self.input_dim), n.b)).collect();
        ShallowRep::new(self.input_dim, self.activation, atoms)
    }
}

/// A chain of blocks with its product-form certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct DeepRep<T> {
    input_dim: usize,
    blocks: Vec<Block<T>>,
    norm_cert: T,
}

impl<T: Scalar> DeepRep<T> {
    pub fn new(input_dim: usize, blocks: Vec<Block<T>>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::Empty);
        }
        let mut dim = input_dim;
        for b in &blocks {
            if b.input_dim != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: b.input_dim });
            }
            dim = b.output_dim();
        }
        let norm_cert = blocks.iter().fold(T::one(), |acc, b| acc * b.cert());
        Ok(Self { input_dim, blocks, norm_cert })
    }

    pub fn from_shallow(rep: &ShallowRep<T>) -> Self {
        let block = Block::from_shallow(std::slice::from_ref(rep)).expect("single valid rep");
        Self::new(rep.input_dim(), vec![block]).expect("single block chains")
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.blocks.last().map_or(0, Block::output_dim)
    }

    pub fn depth(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Block<T>] {
        &self.blocks
    }

    pub fn norm_cert(&self) -> T {
        self.norm_cert
    }

    pub fn block_certs(&self) -> Vec<T> {
        self.blocks.iter().map(Block::cert).collect()
    }

    pub fn eval(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.input_dim {
            return Err(Error::DimensionMismatch { expected: self.input_dim, got: x.len() });
        }
        let mut cur = x.to_vec();
        let mut next = Vec::new();
        for b in &self.blocks {
            b.forward(&cur, &mut next);
            std::mem::swap(&mut cur, &mut next);
        }
        Ok(cur)
    }

    /// Evaluates a network with a single output.
    pub fn eval_scalar(&self, x: &[T]) -> Result<T> {
        if self.output_dim() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, got: self.output_dim() });
        }
        Ok(self.eval(x)?[0])
    }
}

/// `outer ∘ inner`: appends `outer` as a new final block.
pub fn compose<T: Scalar>(outer: &ShallowRep<T>, inner: &DeepRep<T>) -> Result<DeepRep<T>> {
    if outer.input_dim() != inner.output_dim() {
        return Err(Error::DimensionMismatch { expected: inner.output_dim(), got: outer.input_dim() });
    }
    let mut blocks = inner.blocks.clone();
    blocks.push(Block::from_shallow(std::slice::from_ref(outer))?);
    DeepRep::new(inner.input_dim, blocks)
}

/// Upper bound for `|f(x)|` on the box `[−R, R]^d`, propagated block by
/// block with `|σ(z)| ≤ |z|` (ReLU), `≤ |z| + log 2` (softplus), `≤ 1` (tanh).
pub fn range_radius<T: Scalar>(f: &DeepRep<T>, box_radius: T) -> Result<T> {
    if !(box_radius >= T::zero() && box_radius.is_finite()) {
        return Err(Error::InvalidArgument("box radius must be finite and nonnegative".into()));
    }
    let mut bounds = vec![box_radius; f.input_dim];
    for b in &f.blocks {
        let zn = bounds.iter().fold(T::zero(), |acc, &v| acc + v * v).sqrt();
        bounds = b
            .outputs
            .iter()
            .map(|out| {
                out.iter().fold(T::zero(), |acc, n| {
                    let z = n.w.norm() * zn + n.b.abs();
                    let s = match b.activation {
                        Activation::Relu => z,
                        Activation::Softplus => z + T::c(std::f64::consts::LN_2),
                        Activation::Tanh => T::one(),
                    };
                    acc + n.a.abs() * s
                })
            })
            .collect();
    }
    let m = bounds.iter().fold(T::zero(), |acc, &v| acc.max(v));
    if m.is_finite() {
        Ok(m)
    } else {
        Err(Error::UnboundedRange)
    }
}

/// Product `f·g` on `[−R, R]^d` by polarization,
/// `fg = ¼[(f+g)² − (f−g)²]`, with `s ↦ s²` replaced by its profile network
/// on `[−2M, 2M]` (`M` the certified range radius). Depth is
/// `max(depth f, depth g) + 1`; the shorter network is padded with identity
/// blocks. Sup error is at most `(4M/n_quad)²/8`.
pub fn product_rep<T: Scalar>(f: &DeepRep<T>, g: &DeepRep<T>, box_radius: T, n_quad: usize) -> Result<DeepRep<T>> {
    if f.input_dim != g.input_dim {
        return Err(Error::DimensionMismatch { expected: f.input_dim, got: g.input_dim });
    }
    if f.output_dim() != 1 || g.output_dim() != 1 {
        return Err(Error::InvalidArgument("product needs scalar networks".into()));
    }
    let act = f.blocks[0].activation;
    if f.blocks.iter().chain(&g.blocks).any(|b| b.activation != act) || act.is_bounded() {
        return Err(Error::UnsupportedActivation(act.name(), "product needs one unbounded activation throughout".into()));
    }
    let m = range_radius(f, box_radius)?.max(range_radius(g, box_radius)?);
    let zero_factor = f.blocks.last().unwrap().outputs[0].is_empty() || g.blocks.last().unwrap().outputs[0].is_empty();

    let depth = f.depth().max(g.depth());
    let pad = |net: &DeepRep<T>| -> Result<Vec<Block<T>>> {
        let mut blocks = net.blocks.clone();
        while blocks.len() < depth {
            blocks.push(Block::identity(1, act)?);
        }
        Ok(blocks)
    };
    let (fb, gb) = (pad(f)?, pad(g)?);

    let mut blocks = Vec::with_capacity(depth + 1);
    for (k, (bf, bg)) in fb.iter().zip(&gb).enumerate() {
        let (input_dim, offset) = if k == 0 { (f.input_dim, 0) } else { (bf.input_dim + bg.input_dim, bf.input_dim) };
        let place = |n: &Neuron<T>, off: usize| -> Neuron<T> {
            if k == 0 {
                n.clone()
            } else {
                Neuron { a: n.a, w: n.w.shifted(off, input_dim), b: n.b }
            }
        };
        let mut outputs: Vec<Vec<Neuron<T>>> = bf.outputs.iter().map(|o| o.iter().map(|n| place(n, 0)).collect()).collect();
        outputs.extend(bg.outputs.iter().map(|o| o.iter().map(|n| place(n, offset)).collect()));
        blocks.push(Block::new(input_dim, act, outputs)?);
    }

    let mut last = Vec::new();
    if !zero_factor && m > T::zero() {
        let two = T::c(2.0);
        let sq = Profile1D::new(-two * m, two * m, |s: T| s * s, |_| two)?;
        let prof = profile_to_atoms(&sq, Activation::Relu, n_quad)?.rep;
        let quarter = T::c(0.25);
        for at in prof.atoms() {
            let om = at.w[0];
            last.push(Neuron::dense(quarter * at.a, vec![om, om], at.b));
            last.push(Neuron::dense(-quarter * at.a, vec![om, -om], at.b));
        }
    }
    blocks.push(Block::new(2, act, vec![last])?);
    DeepRep::new(f.input_dim, blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{affine_rep, constant_rep};

    fn relu1(a: f64, w: f64, b: f64) -> Neuron<f64> {
        Neuron::dense(a, vec![w], b)
    }

    #[test]
    fn depth_one_equals_shallow() {
        let rep = ShallowRep::new(2, Activation::Relu, vec![Atom::new(2.0, vec![3.0, 4.0], 1.0), Atom::new(-1.0, vec![1.0, 0.0], 0.5)]).unwrap();
        let deep = DeepRep::from_shallow(&rep);
        for x in [[1.0f64, 1.0], [2.0, -5.0], [-0.3, 0.7]] {
            assert_eq!(deep.eval_scalar(&x).unwrap().to_bits(), rep.eval(&x).unwrap().to_bits());
        }
        assert_eq!(deep.norm_cert(), rep.norm_cert());
    }

    #[test]
    fn nested_relu() {
        let b1 = Block::new(1, Activation::Relu, vec![vec![relu1(1.0, 1.0, 0.0)]]).unwrap();
        let b2 = Block::new(1, Activation::Relu, vec![vec![relu1(1.0, 1.0, 0.0)]]).unwrap();
        let net = DeepRep::new(1, vec![b1, b2]).unwrap();
        assert_eq!(net.eval_scalar(&[1.0]).unwrap(), 1.0);
        assert_eq!(net.depth(), 2);
    }

    #[test]
    fn chaining_is_checked() {
        let b1 = Block::new(1, Activation::Relu, vec![vec![relu1(1.0, 1.0, 0.0)], vec![relu1(1.0, -1.0, 0.0)]]).unwrap();
        let b2 = Block::new(1, Activation::Relu, vec![vec![relu1(1.0, 1.0, 0.0)]]).unwrap();
        assert!(matches!(DeepRep::new(1, vec![b1, b2]), Err(Error::DimensionMismatch { expected: 2, got: 1 })));
        assert!(matches!(Block::<f64>::new(2, Activation::Relu, vec![vec![Neuron::sparse(1.0, vec![(2, 1.0)], 0.0)]]), Err(Error::InvalidAtom(_))));
    }

    #[test]
    fn compose_with_identity_pair() {
        let inner = DeepRep::from_shallow(&ShallowRep::new(2, Activation::Relu, vec![Atom::new(1.5, vec![1.0, -2.0], 0.3)]).unwrap());
        let id = ShallowRep::new(1, Activation::Relu, vec![Atom::new(1.0, vec![1.0], 0.0), Atom::new(-1.0, vec![-1.0], 0.0)]).unwrap();
        let c = compose(&id, &inner).unwrap();
        assert_eq!(c.depth(), 2);
        for x in [[0.1, 0.2], [3.0, 0.0], [-1.0, -1.0]] {
            assert_eq!(c.eval_scalar(&x).unwrap(), inner.eval_scalar(&x).unwrap());
        }
        assert!(c.norm_cert() <= inner.norm_cert() * id.norm_cert());
    }

    #[test]
    fn product_of_coordinates() {
        let x1 = DeepRep::from_shallow(&affine_rep(Activation::Relu, &[1.0], 1.0, 0.0, 1.0).unwrap());
        let p = product_rep(&x1, &x1, 1.0, 512).unwrap();
        assert_eq!(p.depth(), 2);
        let m = range_radius(&x1, 1.0).unwrap();
        let tol = (4.0 * m / 512.0f64).powi(2) / 8.0;
        let err = (0..=1000)
            .map(|i| -1.0 + 2.0 * i as f64 / 1000.0)
            .map(|s| (p.eval_scalar(&[s]).unwrap() - s * s).abs())
            .fold(0.0, f64::max);
        assert!(err <= tol * (1.0 + 1e-9), "{err} > {tol}");
    }

    #[test]
    fn product_with_zero_is_exact() {
        let zero = DeepRep::from_shallow(&ShallowRep::zero(2, Activation::Relu));
        let g = DeepRep::from_shallow(&constant_rep(Activation::Relu, 2, 3.0).unwrap());
        let p = product_rep(&zero, &g, 2.0, 64).unwrap();
        for x in [[0.0, 0.0], [1.0, -2.0], [2.0, 2.0]] {
            assert_eq!(p.eval_scalar(&x).unwrap(), 0.0);
        }
    }

    #[test]
    fn product_of_constants_with_padding() {
        let f = DeepRep::from_shallow(&constant_rep(Activation::Relu, 2, 2.0).unwrap());
        let inner = DeepRep::from_shallow(&constant_rep(Activation::Relu, 2, 3.0).unwrap());
        let id = ShallowRep::new(1, Activation::Relu, vec![Atom::new(1.0, vec![1.0], 0.0), Atom::new(-1.0, vec![-1.0], 0.0)]).unwrap();
        let g = compose(&id, &inner).unwrap();
        let p = product_rep(&f, &g, 1.0, 512).unwrap();
        assert_eq!(p.depth(), 3);
        for x in [[0.0f64, 0.0], [1.0, -1.0], [0.5, 0.25]] {
            assert!((p.eval_scalar(&x).unwrap() - 6.0).abs() < 1e-2);
        }
    }

    #[test]
    fn sparse_and_dense_agree() {
        let d = Block::new(3, Activation::Relu, vec![vec![Neuron::dense(2.0, vec![0.0, -1.0, 0.5], 0.1)]]).unwrap();
        let s = Block::new(3, Activation::Relu, vec![vec![Neuron::sparse(2.0, vec![(1, -1.0), (2, 0.5)], 0.1)]]).unwrap();
        let (dn, sn) = (DeepRep::new(3, vec![d]).unwrap(), DeepRep::new(3, vec![s]).unwrap());
        assert_eq!(dn.norm_cert(), sn.norm_cert());
        let x = [0.3, -2.0, 1.0];
        assert_eq!(dn.eval_scalar(&x).unwrap(), sn.eval_scalar(&x).unwrap());
    }
}
