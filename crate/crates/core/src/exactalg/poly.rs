//! Sparse multivariate Laurent polynomials with big-integer coefficients.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::field::{Fp, PrimeField};
use crate::error::{Error, Result};
use crate::tree::{Arc, Edge, Tree};

pub type VarId = u32;

/// Interned variable names with dense ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VarRegistry {
    names: Vec<String>,
    index: HashMap<String, VarId>,
}

impl VarRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the id of `name`, registering it if new.
    pub fn intern(&mut self, name: &str) -> VarId {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = self.names.len() as VarId;
        self.names.push(name.to_owned());
        self.index.insert(name.to_owned(), id);
        id
    }

    pub fn id(&self, name: &str) -> Option<VarId> {
        self.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<VarId> {
        self.id(name)
            .ok_or_else(|| Error::MissingVariable(name.to_owned()))
    }

    pub fn name(&self, id: VarId) -> Option<&str> {
        self.names.get(id as usize).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// The standard variable set of a tree.
    ///
    /// Registration order: `x` on positive arcs (the negative arc uses the
    /// inverse), then `y`, `z`, `beta` on every arc, `alpha` per edge, and `q`.
    /// Arcs and edges are taken in lexicographic order.
    pub fn for_tree(tree: &Tree) -> Self {
        let mut reg = VarRegistry::new();
        let arcs = tree.arcs();
        for e in tree.edges() {
            reg.intern(&arc_var("x", e.positive()));
        }
        for family in ["y", "z", "beta"] {
            for &a in &arcs {
                reg.intern(&arc_var(family, a));
            }
        }
        for &e in tree.edges() {
            reg.intern(&edge_var("alpha", e));
        }
        reg.intern("q");
        reg
    }
}

pub fn arc_var(family: &str, a: Arc) -> String {
    format!("{family}[{},{}]", a.tail, a.head)
}

pub fn edge_var(family: &str, e: Edge) -> String {
    format!("{family}[{},{}]", e.lo, e.hi)
}

/// A Laurent monomial: sorted `(var, exponent)` pairs with nonzero exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentMonomial(Vec<(VarId, i32)>);

impl LaurentMonomial {
    pub fn one() -> Self {
        LaurentMonomial(Vec::new())
    }

    pub fn var(id: VarId, exp: i32) -> Self {
        if exp == 0 {
            Self::one()
        } else {
            LaurentMonomial(vec![(id, exp)])
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (VarId, i32)>) -> Self {
        let mut acc: BTreeMap<VarId, i32> = BTreeMap::new();
        for (v, e) in pairs {
            *acc.entry(v).or_default() += e;
        }
        LaurentMonomial(acc.into_iter().filter(|&(_, e)| e != 0).collect())
    }

    pub fn pairs(&self) -> &[(VarId, i32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().map(|&(_, e)| e as i64).sum()
    }

    pub fn exponent(&self, v: VarId) -> i32 {
        self.0
            .binary_search_by_key(&v, |&(id, _)| id)
            .map(|k| self.0[k].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &LaurentMonomial) -> LaurentMonomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let e = a[i].1 + b[j].1;
                    if e != 0 {
                        out.push((a[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        LaurentMonomial(out)
    }

    pub fn inverse(&self) -> LaurentMonomial {
        LaurentMonomial(self.0.iter().map(|&(v, e)| (v, -e)).collect())
    }
}

impl Ord for LaurentMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for LaurentMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Terms sorted by strictly increasing monomial, no zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    terms: Vec<(LaurentMonomial, BigInt)>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::term(LaurentMonomial::one(), c.into())
    }

    pub fn term(m: LaurentMonomial, c: BigInt) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            MultiPoly { terms: vec![(m, c)] }
        }
    }

    pub fn var(id: VarId) -> Self {
        Self::var_pow(id, 1)
    }

    pub fn var_pow(id: VarId, exp: i32) -> Self {
        Self::term(LaurentMonomial::var(id, exp), BigInt::one())
    }

    fn from_map(map: BTreeMap<LaurentMonomial, BigInt>) -> Self {
        MultiPoly {
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn terms(&self) -> &[(LaurentMonomial, BigInt)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// The constant value, if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.as_slice() {
            [] => Some(BigInt::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &a[i].1 + &b[j].1;
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        MultiPoly { terms: out }
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let mut acc: BTreeMap<LaurentMonomial, BigInt> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                *acc.entry(ma.mul(mb)).or_default() += ca * cb;
            }
        }
        Self::from_map(acc)
    }

    pub fn scale(&self, k: &BigInt) -> MultiPoly {
        if k.is_zero() {
            return Self::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> MultiPoly {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `a ⊙ b = a + b + (q-1)ab`.
    pub fn qsum(&self, other: &MultiPoly, q: VarId) -> MultiPoly {
        let qm1 = MultiPoly::var(q).sub(&MultiPoly::one());
        self.add(other).add(&qm1.mul(&self.mul(other)))
    }

    /// The inverse of a single monomial term with coefficient ±1.
    pub fn monomial_inverse(&self) -> Option<MultiPoly> {
        match self.terms.as_slice() {
            [(m, c)] if c.abs().is_one() => Some(Self::term(m.inverse(), c.clone())),
            _ => None,
        }
    }

    /// Substitutes `value` for `var`. Negative powers of `var` require
    /// `value` to be an invertible monomial.
    pub fn substitute(&self, var: VarId, value: &MultiPoly) -> Result<MultiPoly> {
        let inverse = value.monomial_inverse();
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            let rest = LaurentMonomial(m.0.iter().copied().filter(|&(v, _)| v != var).collect());
            let factor = if e >= 0 {
                value.pow(e as u32)
            } else {
                let inv = inverse.as_ref().ok_or_else(|| {
                    Error::Evaluation(format!(
                        "variable {var} appears with exponent {e} but its value is not invertible"
                    ))
                })?;
                inv.pow(e.unsigned_abs())
            };
            out = out.add(&factor.mul(&MultiPoly::term(rest, c.clone())));
        }
        Ok(out)
    }

    pub fn variables(&self) -> Vec<VarId> {
        let mut vs: Vec<VarId> = self
            .terms
            .iter()
            .flat_map(|(m, _)| m.0.iter().map(|&(v, _)| v))
            .collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// Evaluates in `field`, pulling variable values from `lookup`.
    pub fn eval<F>(&self, field: PrimeField, lookup: F) -> Result<Fp>
    where
        F: Fn(VarId) -> Option<Fp>,
    {
        let mut cache: HashMap<VarId, (Fp, Option<Fp>)> = HashMap::new();
        let mut total = field.zero();
        for (m, c) in &self.terms {
            let mut t = field.from_bigint(c);
            for &(v, e) in &m.0 {
                if !cache.contains_key(&v) {
                    let x = lookup(v).ok_or_else(|| Error::MissingVariable(format!("#{v}")))?;
                    cache.insert(v, (x, x.inverse()));
                }
                let (x, inv) = cache[&v];
                let base = if e > 0 {
                    x
                } else {
                    inv.ok_or_else(|| {
                        Error::Evaluation(format!("variable #{v} is zero but appears inverted"))
                    })?
                };
                t = t.mul(base.pow(e.unsigned_abs() as u64));
            }
            total = total.add(t);
        }
        Ok(total)
    }

    pub fn eval_map(&self, field: PrimeField, values: &HashMap<VarId, Fp>) -> Result<Fp> {
        self.eval(field, |v| values.get(&v).copied())
    }

    /// Renders with registry names, highest monomial first.
    pub fn display_with<'a>(&'a self, reg: &'a VarRegistry) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, reg: Some(reg) }
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a MultiPoly,
    reg: Option<&'a VarRegistry>,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.poly.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = c.abs();
            let mut factors = Vec::new();
            if !mag.is_one() || m.is_one() {
                factors.push(mag.to_string());
            }
            for &(v, e) in &m.0 {
                let name = self
                    .reg
                    .and_then(|r| r.name(v))
                    .map(str::to_owned)
                    .unwrap_or_else(|| format!("v{v}"));
                if e == 1 {
                    factors.push(name);
                } else {
                    factors.push(format!("{name}^{e}"));
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        PolyDisplay { poly: self, reg: None }.fmt(f)
    }
}

impl From<i64> for MultiPoly {
    fn from(c: i64) -> Self {
        MultiPoly::constant(c)
    }
}
