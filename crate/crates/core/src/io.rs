//! The `barron-net/1` text format.
//!
//! ```text
//! {"format":"barron-net/1","kind":"shallow","activation":"relu","input_dim":2,
//!  "atoms":[{"a":1.0e0,"w":[1.0e0,0.0e0],"b":0.0e0}]}
//! {"format":"barron-net/1","kind":"deep","input_dim":2,
//!  "blocks":[{"input_dim":2,"output_dim":1,"activation":"relu","outputs":[[...]]}]}
//! ```
//!
//! Numbers carry 17 significant digits, so a write/read round trip is
//! bit-identical. In deep blocks a weight vector may be sparse:
//! `"w":{"idx":[3],"val":[2.0e0]}`.

use crate::activation::Activation;
use crate::deep::{Block, DeepRep, Neuron, Weights};
use crate::error::{Error, Result};
use crate::shallow::{Atom, ShallowRep};
use serde_json::Value;
use std::fmt::Write as _;
use std::path::Path;

pub const FORMAT: &str = "barron-net/1";

#[derive(Debug, Clone, PartialEq)]
pub enum Net {
    Shallow(ShallowRep<f64>),
    Deep(DeepRep<f64>),
}

impl Net {
    pub fn input_dim(&self) -> usize {
        match self {
            Net::Shallow(r) => r.input_dim(),
            Net::Deep(r) => r.input_dim(),
        }
    }

    pub fn norm_cert(&self) -> f64 {
        match self {
            Net::Shallow(r) => r.norm_cert(),
            Net::Deep(r) => r.norm_cert(),
        }
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        match self {
            Net::Shallow(r) => r.eval(x),
            Net::Deep(r) => r.eval_scalar(x),
        }
    }

    pub fn into_shallow(self) -> Result<ShallowRep<f64>> {
        match self {
            Net::Shallow(r) => Ok(r),
            Net::Deep(_) => Err(Error::Format("expected a shallow network".into())),
        }
    }
}

fn num(out: &mut String, v: f64) {
    write!(out, "{v:.16e}").unwrap();
}

fn num_list(out: &mut String, vs: impl Iterator<Item = f64>) {
    out.push('[');
    for (i, v) in vs.enumerate() {
        if i > 0 {
            out.push(',');
        }
        num(out, v);
    }
    out.push(']');
}

fn atom_json(out: &mut String, a: f64, w: &Weights<f64>, b: f64) {
    out.push_str("{\"a\":");
    num(out, a);
    out.push_str(",\"w\":");
    match w {
        Weights::Dense(w) => num_list(out, w.iter().copied()),
        Weights::Sparse(w) => {
            out.push_str("{\"idx\":[");
            for (i, (k, _)) in w.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write!(out, "{k}").unwrap();
            }
            out.push_str("],\"val\":");
            num_list(out, w.iter().map(|(_, v)| *v));
            out.push('}');
        }
    }
    out.push_str(",\"b\":");
    num(out, b);
    out.push('}');
}

pub fn shallow_to_string(rep: &ShallowRep<f64>) -> String {
    let mut out = String::new();
    write!(out, "{{\"format\":\"{FORMAT}\",\"kind\":\"shallow\",\"activation\":\"{}\",\"input_dim\":{},\"atoms\":[", rep.activation(), rep.input_dim()).unwrap();
    for (i, at) in rep.atoms().iter().enumerate() {
        out.push_str(if i > 0 { ",\n" } else { "\n" });
        atom_json(&mut out, at.a, &Weights::Dense(at.w.clone()), at.b);
    }
    out.push_str("\n]}\n");
    out
}

pub fn deep_to_string(net: &DeepRep<f64>) -> String {
    let mut out = String::new();
    write!(out, "{{\"format\":\"{FORMAT}\",\"kind\":\"deep\",\"input_dim\":{},\"blocks\":[", net.input_dim()).unwrap();
    for (k, block) in net.blocks().iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        write!(out, "\n{{\"input_dim\":{},\"output_dim\":{},\"activation\":\"{}\",\"outputs\":[", block.input_dim(), block.output_dim(), block.activation()).unwrap();
        for (j, neurons) in block.outputs().iter().enumerate() {
            out.push_str(if j > 0 { ",\n[" } else { "\n[" });
            for (i, n) in neurons.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                atom_json(&mut out, n.a, &n.w, n.b);
            }
            out.push(']');
        }
        out.push_str("]}");
    }
    out.push_str("\n]}\n");
    out
}

pub fn net_to_string(net: &Net) -> String {
    match net {
        Net::Shallow(r) => shallow_to_string(r),
        Net::Deep(r) => deep_to_string(r),
    }
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Format(format!("missing field {key:?}")))
}

fn as_f64(v: &Value, what: &str) -> Result<f64> {
    let x = v.as_f64().ok_or_else(|| Error::Format(format!("{what} is not a number")))?;
    if !x.is_finite() {
        return Err(Error::NonFinite(what.into()));
    }
    Ok(x)
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| Error::Format(format!("{what} is not a nonnegative integer")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::Format(format!("{what} is not an array")))
}

fn parse_atom(v: &Value, ctx: &str) -> Result<(f64, Weights<f64>, f64)> {
    let a = as_f64(field(v, "a")?, &format!("{ctx}.a"))?;
    let b = as_f64(field(v, "b")?, &format!("{ctx}.b"))?;
    let wv = field(v, "w")?;
    let w = if let Some(arr) = wv.as_array() {
        Weights::Dense(arr.iter().map(|x| as_f64(x, &format!("{ctx}.w"))).collect::<Result<_>>()?)
    } else {
        let idx = as_array(field(wv, "idx")?, "idx")?;
        let val = as_array(field(wv, "val")?, "val")?;
        if idx.len() != val.len() {
            return Err(Error::Format(format!("{ctx}: idx and val differ in length")));
        }
        Weights::Sparse(idx.iter().zip(val).map(|(i, x)| Ok((as_usize(i, "idx")?, as_f64(x, &format!("{ctx}.w"))?))).collect::<Result<_>>()?)
    };
    Ok((a, w, b))
}

fn parse_activation(v: &Value) -> Result<Activation> {
    v.as_str().ok_or_else(|| Error::Format("activation is not a string".into()))?.parse()
}

pub fn net_from_str(text: &str) -> Result<Net> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    let format = field(&v, "format")?.as_str().ok_or_else(|| Error::Format("format is not a string".into()))?;
    if format != FORMAT {
        return Err(Error::Version(format.to_string()));
    }
    let input_dim = as_usize(field(&v, "input_dim")?, "input_dim")?;
    match field(&v, "kind")?.as_str() {
        Some("shallow") => {
            let act = parse_activation(field(&v, "activation")?)?;
            let atoms = as_array(field(&v, "atoms")?, "atoms")?
                .iter()
                .enumerate()
                .map(|(i, x)| {
                    let (a, w, b) = parse_atom(x, &format!("atom {i}"))?;
                    match w {
                        Weights::Dense(w) => {
                            if w.len() != input_dim {
                                return Err(Error::DimensionMismatch { expected: input_dim, got: w.len() });
                            }
                            Ok(Atom::new(a, w, b))
                        }
                        Weights::Sparse(_) => Err(Error::Format(format!("atom {i}: shallow atoms need dense weights"))),
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Net::Shallow(ShallowRep::new(input_dim, act, atoms)?))
        }
        Some("deep") => {
            let blocks = as_array(field(&v, "blocks")?, "blocks")?
                .iter()
                .enumerate()
                .map(|(k, bv)| {
                    let act = parse_activation(field(bv, "activation")?)?;
                    let bin = as_usize(field(bv, "input_dim")?, "block input_dim")?;
                    let outs = as_array(field(bv, "outputs")?, "outputs")?;
                    let declared = as_usize(field(bv, "output_dim")?, "output_dim")?;
                    if declared != outs.len() {
                        return Err(Error::DimensionMismatch { expected: declared, got: outs.len() });
                    }
                    let outputs = outs
                        .iter()
                        .map(|o| {
                            as_array(o, "output")?
                                .iter()
                                .map(|x| {
                                    let (a, w, b) = parse_atom(x, &format!("block {k}"))?;
                                    Ok(Neuron { a, w, b })
                                })
                                .collect::<Result<Vec<_>>>()
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Block::new(bin, act, outputs)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Net::Deep(DeepRep::new(input_dim, blocks)?))
        }
        other => Err(Error::Format(format!("unknown kind {other:?}"))),
    }
}

pub fn read_net(path: impl AsRef<Path>) -> Result<Net> {
    net_from_str(&std::fs::read_to_string(path)?)
}

pub fn write_net(path: impl AsRef<Path>, net: &Net) -> Result<()> {
    std::fs::write(path, net_to_string(net))?;
    Ok(())
}
