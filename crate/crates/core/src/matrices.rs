//! Distance matrices and their weighted and q-deformed variants.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use rand::Rng;

use crate::error::{Error, Result};
use crate::exactalg::{arc_var, edge_var, Fp, MultiPoly, PrimeField, Scalar, VarId, VarRegistry};
use crate::tree::{Arc, Edge, MarkedPath, Tree};

/// Per-arc `x, y, z, beta`, per-edge `alpha`, and an optional `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightAssignment<S> {
    one: S,
    pub x: BTreeMap<Arc, S>,
    pub y: BTreeMap<Arc, S>,
    pub z: BTreeMap<Arc, S>,
    pub beta: BTreeMap<Arc, S>,
    pub alpha: BTreeMap<Edge, S>,
    pub q: Option<S>,
}

fn lookup<'a, K: Ord + Copy + std::fmt::Display, S>(
    map: &'a BTreeMap<K, S>,
    family: &str,
    key: K,
) -> Result<&'a S> {
    map.get(&key)
        .ok_or_else(|| Error::MissingVariable(format!("{family}[{key}]")))
}

impl<S: Scalar> WeightAssignment<S> {
    /// Every variable set to `value`.
    pub fn uniform(tree: &Tree, value: S) -> Self {
        let arcs = tree.arcs();
        let per_arc = || arcs.iter().map(|&a| (a, value.clone())).collect::<BTreeMap<_, _>>();
        WeightAssignment {
            one: value.one_like(),
            x: per_arc(),
            y: per_arc(),
            z: per_arc(),
            beta: per_arc(),
            alpha: tree.edges().iter().map(|&e| (e, value.clone())).collect(),
            q: Some(value.clone()),
        }
    }

    pub fn one(&self) -> &S {
        &self.one
    }

    pub fn x(&self, a: Arc) -> Result<&S> {
        lookup(&self.x, "x", a)
    }

    pub fn y(&self, a: Arc) -> Result<&S> {
        lookup(&self.y, "y", a)
    }

    pub fn z(&self, a: Arc) -> Result<&S> {
        lookup(&self.z, "z", a)
    }

    pub fn beta(&self, a: Arc) -> Result<&S> {
        lookup(&self.beta, "beta", a)
    }

    pub fn alpha(&self, e: Edge) -> Result<&S> {
        lookup(&self.alpha, "alpha", e)
    }

    pub fn q(&self) -> Result<&S> {
        self.q.as_ref().ok_or_else(|| Error::MissingVariable("q".into()))
    }

    /// Replaces `y` by `alpha(z - x)` on every arc.
    pub fn with_indep_y(mut self) -> Result<Self> {
        let arcs: Vec<Arc> = self.z.keys().copied().collect();
        for a in arcs {
            let y = self.alpha(a.edge())?.times(&self.z(a)?.minus(self.x(a)?));
            self.y.insert(a, y);
        }
        Ok(self)
    }

    /// Sets `x` to one on every arc.
    pub fn with_unit_x(mut self) -> Self {
        let one = self.one.clone();
        for v in self.x.values_mut() {
            *v = one.clone();
        }
        self
    }

    /// `x(γ) x(γ⁻) = 1` on every arc.
    pub fn check_reciprocal(&self) -> Result<()> {
        for (&a, v) in &self.x {
            let back = self.x(a.reverse())?;
            if !v.times(back).is_unity() {
                return Err(Error::Constraint(format!("x[{a}] x[{}] != 1", a.reverse())));
            }
        }
        Ok(())
    }

    /// `y(γ) = alpha(γ⁰)(z(γ) - x(γ))` on every arc.
    pub fn check_indep(&self) -> Result<()> {
        self.check_reciprocal()?;
        for (&a, y) in &self.y {
            let expect = self.alpha(a.edge())?.times(&self.z(a)?.minus(self.x(a)?));
            if *y != expect {
                return Err(Error::Constraint(format!("y[{a}] != alpha(z - x)")));
            }
        }
        Ok(())
    }

    pub fn check_unit_x(&self) -> Result<()> {
        match self.x.iter().find(|(_, v)| !v.is_unity()) {
            Some((a, _)) => Err(Error::Constraint(format!("x[{a}] != 1"))),
            None => Ok(()),
        }
    }
}

impl WeightAssignment<MultiPoly> {
    /// The generic symbolic assignment: each variable is its registry entry,
    /// and `x` on a negative arc is the inverse of `x` on the positive one.
    pub fn symbolic(tree: &Tree, reg: &VarRegistry) -> Result<Self> {
        let mut w = WeightAssignment::uniform(tree, MultiPoly::one());
        for e in tree.edges() {
            let id = reg.require(&arc_var("x", e.positive()))?;
            w.x.insert(e.positive(), MultiPoly::var(id));
            w.x.insert(e.negative(), MultiPoly::var_pow(id, -1));
            w.alpha.insert(*e, MultiPoly::var(reg.require(&edge_var("alpha", *e))?));
        }
        for a in tree.arcs() {
            w.y.insert(a, MultiPoly::var(reg.require(&arc_var("y", a))?));
            w.z.insert(a, MultiPoly::var(reg.require(&arc_var("z", a))?));
            w.beta.insert(a, MultiPoly::var(reg.require(&arc_var("beta", a))?));
        }
        w.q = Some(MultiPoly::var(reg.require("q")?));
        Ok(w)
    }
}

impl WeightAssignment<Fp> {
    /// Uniformly random nonzero values; `x` is reciprocal by construction.
    pub fn random_field<R: Rng + ?Sized>(tree: &Tree, field: PrimeField, rng: &mut R) -> Self {
        let mut w = WeightAssignment::uniform(tree, field.one());
        for e in tree.edges() {
            let x = field.random_nonzero(rng);
            w.x.insert(e.positive(), x);
            w.x.insert(e.negative(), x.inverse().expect("nonzero"));
            w.alpha.insert(*e, field.random_nonzero(rng));
        }
        for a in tree.arcs() {
            w.y.insert(a, field.random_nonzero(rng));
            w.z.insert(a, field.random_nonzero(rng));
            w.beta.insert(a, field.random_nonzero(rng));
        }
        w.q = Some(field.random_nonzero(rng));
        w
    }

    /// Values keyed by registry id, for evaluating symbolic expressions.
    pub fn var_values(&self, reg: &VarRegistry) -> HashMap<VarId, Fp> {
        let mut out = HashMap::new();
        let mut put = |name: String, v: &Fp| {
            if let Some(id) = reg.id(&name) {
                out.insert(id, *v);
            }
        };
        for (&a, v) in &self.x {
            if a.is_positive() {
                put(arc_var("x", a), v);
            }
        }
        for (family, map) in [("y", &self.y), ("z", &self.z), ("beta", &self.beta)] {
            for (&a, v) in map {
                put(arc_var(family, a), v);
            }
        }
        for (&e, v) in &self.alpha {
            put(edge_var("alpha", e), v);
        }
        if let Some(q) = &self.q {
            put("q".into(), q);
        }
        out
    }
}

/// `x` over the tail, `y` on the marked step, `z` over the head.
pub fn weight_of_marked_path<S: Scalar>(mp: &MarkedPath, w: &WeightAssignment<S>) -> Result<S> {
    let mut acc = w.y(mp.body())?.clone();
    for a in mp.tail() {
        acc = acc.times(w.x(a)?);
    }
    for a in mp.head() {
        acc = acc.times(w.z(a)?);
    }
    Ok(acc)
}

pub fn distance_matrix(tree: &Tree) -> Vec<Vec<BigInt>> {
    let n = tree.n();
    (1..=n)
        .map(|i| {
            (1..=n)
                .map(|j| BigInt::from(tree.distance(i, j).expect("vertices in range")))
                .collect()
        })
        .collect()
}

fn q_integer<S: Scalar>(q: &S, d: usize) -> S {
    let mut acc = q.zero_like();
    let mut power = q.one_like();
    for _ in 0..d {
        acc = acc.plus(&power);
        power = power.times(q);
    }
    acc
}

/// Entries `[d(i,j)]_q = 1 + q + ... + q^(d-1)`.
pub fn q_distance_matrix(tree: &Tree, reg: &VarRegistry) -> Result<Vec<Vec<MultiPoly>>> {
    let q = MultiPoly::var(reg.require("q")?);
    q_distance_matrix_at(tree, &q)
}

/// [`q_distance_matrix`] with `q` specialized to a value.
pub fn q_distance_matrix_at<S: Scalar>(tree: &Tree, q: &S) -> Result<Vec<Vec<S>>> {
    let n = tree.n();
    let mut out = vec![vec![q.zero_like(); n]; n];
    for i in 1..=n {
        for j in 1..=n {
            out[i - 1][j - 1] = q_integer(q, tree.distance(i, j)?);
        }
    }
    Ok(out)
}

fn build_matrix<S, F>(tree: &Tree, zero: &S, mut entry: F) -> Result<Vec<Vec<S>>>
where
    S: Scalar,
    F: FnMut(&MarkedPath) -> Result<S>,
{
    let n = tree.n();
    let mut out = vec![vec![zero.clone(); n]; n];
    for i in 1..=n {
        for j in 1..=n {
            if i == j {
                continue;
            }
            let path = tree.path_between(i, j)?;
            let mut acc = zero.clone();
            for p in 0..path.len() {
                let mp = MarkedPath::new(path.clone(), p)?;
                acc = acc.plus(&entry(&mp)?);
            }
            out[i - 1][j - 1] = acc;
        }
    }
    Ok(out)
}

/// `d'(i,j)`: the sum of marked-path weights over the markings of `P(i,j)`.
pub fn weighted_distance_matrix<S: Scalar>(tree: &Tree, w: &WeightAssignment<S>) -> Result<Vec<Vec<S>>> {
    let zero = w.one().zero_like();
    build_matrix(tree, &zero, |mp| weight_of_marked_path(mp, w))
}

/// The weighted matrix with `y = alpha(z - x)`; the stored `y` is ignored.
pub fn indep_matrix<S: Scalar>(tree: &Tree, w: &WeightAssignment<S>) -> Result<Vec<Vec<S>>> {
    w.check_reciprocal()?;
    let w = w.clone().with_indep_y()?;
    weighted_distance_matrix(tree, &w)
}

/// Entries `sum over marks of alpha(z_γ - 1) * prod of z over the head`.
pub fn ck_matrix<S: Scalar>(tree: &Tree, w: &WeightAssignment<S>) -> Result<Vec<Vec<S>>> {
    w.check_unit_x()?;
    let one = w.one().clone();
    build_matrix(tree, &one.zero_like(), |mp| {
        let g = mp.body();
        let mut acc = w.alpha(g.edge())?.times(&w.z(g)?.minus(&one));
        for a in mp.head() {
            acc = acc.times(w.z(a)?);
        }
        Ok(acc)
    })
}

/// Entries `beta ⊙ beta ⊙ ...` folded along `P(i,j)`.
pub fn qsum_matrix(tree: &Tree, reg: &VarRegistry) -> Result<Vec<Vec<MultiPoly>>> {
    let q = reg.require("q")?;
    let n = tree.n();
    let mut out = vec![vec![MultiPoly::zero(); n]; n];
    for i in 1..=n {
        for j in 1..=n {
            let mut acc = MultiPoly::zero();
            for a in tree.path_between(i, j)?.steps() {
                let b = MultiPoly::var(reg.require(&arc_var("beta", a))?);
                acc = acc.qsum(&b, q);
            }
            out[i - 1][j - 1] = acc;
        }
    }
    Ok(out)
}

/// Field version of [`qsum_matrix`], reading `beta` and `q` from `w`.
pub fn qsum_matrix_with<S: Scalar>(tree: &Tree, w: &WeightAssignment<S>) -> Result<Vec<Vec<S>>> {
    let one = w.one().clone();
    let qm1 = w.q()?.minus(&one);
    let n = tree.n();
    let mut out = vec![vec![one.zero_like(); n]; n];
    for i in 1..=n {
        for j in 1..=n {
            let mut acc = one.zero_like();
            for a in tree.path_between(i, j)?.steps() {
                let b = w.beta(a)?;
                acc = acc.plus(b).plus(&qm1.times(&acc.times(b)));
            }
            out[i - 1][j - 1] = acc;
        }
    }
    Ok(out)
}
