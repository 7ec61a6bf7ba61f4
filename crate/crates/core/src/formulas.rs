//! Closed-form right-hand sides of the determinant identities and a
//! randomized identity checker.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{det_gauss_field, Fp, MultiPoly, PrimeField, Scalar, VarId, VarRegistry};
use crate::matrices::{
    ck_matrix, distance_matrix, indep_matrix, q_distance_matrix_at, qsum_matrix_with, weighted_distance_matrix,
    WeightAssignment,
};
use crate::tree::{Edge, Tree};

/// `(-1)^(n-1) (n-1) 2^(n-2)`, and `0` for `n = 1`.
pub fn graham_pollak_value(n: usize) -> BigInt {
    if n < 2 {
        return BigInt::from(0);
    }
    let v = BigInt::from(n - 1) << (n - 2);
    if n % 2 == 0 {
        -v
    } else {
        v
    }
}

/// `(-1)^(n-1) (n-1) (1+q)^(n-2)` at a given `q`.
pub fn q_gp_value_at<S: Scalar>(n: usize, q: &S) -> Result<S> {
    if n < 2 {
        return Err(Error::Guard {
            op: "q_gp_value",
            got: n,
            range: "n >= 2",
        });
    }
    let base = q.one_like().plus(q);
    let mut acc = q.int_like((n - 1) as i64);
    for _ in 0..n - 2 {
        acc = acc.times(&base);
    }
    Ok(if n % 2 == 0 { acc.negated() } else { acc })
}

/// The q-analogue as a polynomial in the variable `q`.
pub fn q_gp_value(n: usize, q: VarId) -> Result<MultiPoly> {
    q_gp_value_at(n, &MultiPoly::var(q))
}

fn signed<S: Scalar>(n: usize, v: S) -> S {
    if n % 2 == 0 {
        v.negated()
    } else {
        v
    }
}

/// `(-1)^(n-1) Σ_e y_ab y_ba ∏_{(i,j) ∈ U(e)} (y_ji x_ij + y_ij z_ji)`.
pub fn emmanuel_rhs<S: Scalar>(tree: &Tree, w: &WeightAssignment<S>) -> Result<S> {
    w.check_reciprocal()?;
    let mut total = w.one().zero_like();
    for &e in tree.edges() {
        let (ab, ba) = (e.positive(), e.negative());
        let mut term = w.y(ab)?.times(w.y(ba)?);
        for g in tree.arcs_toward_edge(e)? {
            let back = g.reverse();
            let factor = w.y(back)?.times(w.x(g)?).plus(&w.y(g)?.times(w.z(back)?));
            term = term.times(&factor);
        }
        total = total.plus(&term);
    }
    Ok(signed(tree.n(), total))
}

/// `(-1)^(n-1) Σ_e α_e² (z_e+ - x_e)(z_e- - x_e⁻¹) ∏_{f≠e} α_f (z_f+ z_f- - 1)`.
///
/// Reads `alpha`, `x` and `z`; `y` is not consulted.
pub fn indep_rhs<S: Scalar>(tree: &Tree, w: &WeightAssignment<S>) -> Result<S> {
    w.check_reciprocal()?;
    edge_sum(tree, w, |e| {
        let (p, m) = (e.positive(), e.negative());
        Ok(w.z(p)?.minus(w.x(p)?).times(&w.z(m)?.minus(w.x(m)?)))
    })
}

/// [`indep_rhs`] at `x ≡ 1`, written without division.
pub fn ck_rhs<S: Scalar>(tree: &Tree, w: &WeightAssignment<S>) -> Result<S> {
    w.check_unit_x()?;
    let one = w.one().clone();
    edge_sum(tree, w, |e| {
        Ok(w.z(e.positive())?.minus(&one).times(&w.z(e.negative())?.minus(&one)))
    })
}

/// `(-1)^(n-1) Σ_e α_e² g(e) ∏_{f≠e} α_f (z_f+ z_f- - 1)`.
fn edge_sum<S, G>(tree: &Tree, w: &WeightAssignment<S>, g: G) -> Result<S>
where
    S: Scalar,
    G: Fn(Edge) -> Result<S>,
{
    let one = w.one().clone();
    let mut others = BTreeMap::new();
    for &f in tree.edges() {
        let v = w.alpha(f)?.times(&w.z(f.positive())?.times(w.z(f.negative())?).minus(&one));
        others.insert(f, v);
    }
    let mut total = one.zero_like();
    for &e in tree.edges() {
        let a = w.alpha(e)?;
        let mut term = a.times(a).times(&g(e)?);
        for (f, v) in &others {
            if *f != e {
                term = term.times(v);
            }
        }
        total = total.plus(&term);
    }
    Ok(signed(tree.n(), total))
}

/// `a ⊙ b = a + b + (q - 1) a b`.
pub fn q_circle<S: Scalar>(a: &S, b: &S, q: &S) -> S {
    let qm1 = q.minus(&q.one_like());
    a.plus(b).plus(&qm1.times(&a.times(b)))
}

/// `(-1)^(n-1) Σ_e β_e+ β_e- ∏_{f≠e} (β_f+ ⊙ β_f-)`.
pub fn qsum_rhs<S: Scalar>(tree: &Tree, w: &WeightAssignment<S>) -> Result<S> {
    let q = w.q()?;
    let mut total = w.one().zero_like();
    for &e in tree.edges() {
        let mut term = w.beta(e.positive())?.times(w.beta(e.negative())?);
        for &f in tree.edges().iter().filter(|&&f| f != e) {
            term = term.times(&q_circle(w.beta(f.positive())?, w.beta(f.negative())?, q));
        }
        total = total.plus(&term);
    }
    Ok(signed(tree.n(), total))
}

/// [`qsum_rhs`] in the registry variables.
pub fn qsum_rhs_symbolic(tree: &Tree, reg: &VarRegistry) -> Result<MultiPoly> {
    qsum_rhs(tree, &WeightAssignment::symbolic(tree, reg)?)
}

/// The identities checked by [`verify_identity`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Identity {
    GrahamPollak,
    QAnalogue,
    Emmanuel,
    Indep,
    Ck,
    Qsum,
}

impl Identity {
    pub const ALL: [Identity; 6] = [
        Identity::GrahamPollak,
        Identity::QAnalogue,
        Identity::Emmanuel,
        Identity::Indep,
        Identity::Ck,
        Identity::Qsum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::GrahamPollak => "gp",
            Identity::QAnalogue => "q",
            Identity::Emmanuel => "emmanuel",
            Identity::Indep => "indep",
            Identity::Ck => "ck",
            Identity::Qsum => "qsum",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Identity::ALL
            .into_iter()
            .find(|i| i.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown identity {s:?}")))
    }

    /// Imposes the constraints of this identity on a random assignment.
    pub fn prepare(self, w: WeightAssignment<Fp>) -> Result<WeightAssignment<Fp>> {
        match self {
            Identity::Indep => w.with_indep_y(),
            Identity::Ck => w.with_unit_x().with_indep_y(),
            _ => Ok(w),
        }
    }

    /// `det` of the matrix side.
    pub fn lhs(self, tree: &Tree, w: &WeightAssignment<Fp>, field: PrimeField) -> Result<Fp> {
        let m = match self {
            Identity::GrahamPollak => distance_matrix(tree)
                .iter()
                .map(|row| row.iter().map(|v| field.from_bigint(v)).collect())
                .collect(),
            Identity::QAnalogue => q_distance_matrix_at(tree, w.q()?)?,
            Identity::Emmanuel => weighted_distance_matrix(tree, w)?,
            Identity::Indep => indep_matrix(tree, w)?,
            Identity::Ck => ck_matrix(tree, w)?,
            Identity::Qsum => qsum_matrix_with(tree, w)?,
        };
        det_gauss_field(&m, field)
    }

    /// The closed form.
    pub fn rhs(self, tree: &Tree, w: &WeightAssignment<Fp>, field: PrimeField) -> Result<Fp> {
        match self {
            Identity::GrahamPollak => Ok(field.from_bigint(&graham_pollak_value(tree.n()))),
            Identity::QAnalogue => {
                if tree.n() < 2 {
                    Ok(field.zero())
                } else {
                    q_gp_value_at(tree.n(), w.q()?)
                }
            }
            Identity::Emmanuel => emmanuel_rhs(tree, w),
            Identity::Indep => indep_rhs(tree, w),
            Identity::Ck => ck_rhs(tree, w),
            Identity::Qsum => qsum_rhs(tree, w),
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub trial: usize,
    pub lhs: u64,
    pub rhs: u64,
    pub assignment: BTreeMap<String, u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub tree: String,
    pub n: usize,
    pub trials: usize,
    pub passes: usize,
    pub failures: Vec<Failure>,
}

impl IdentityReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.passes == self.trials
    }
}

/// Seed of trial `t`, split from the run seed.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    seed ^ (trial as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

const MAX_RETRIES: usize = 8;

/// Compares `lhs` and `rhs` at `trials` random points of `field`.
///
/// Each trial draws a fresh assignment with nonzero values and reciprocal
/// `x`, passes it through `prepare`, and redraws on evaluation errors.
pub fn verify_identity<P, L, R>(
    tree: &Tree,
    name: &str,
    field: PrimeField,
    trials: usize,
    seed: u64,
    prepare: P,
    lhs: L,
    rhs: R,
) -> Result<IdentityReport>
where
    P: Fn(WeightAssignment<Fp>) -> Result<WeightAssignment<Fp>>,
    L: Fn(&WeightAssignment<Fp>) -> Result<Fp>,
    R: Fn(&WeightAssignment<Fp>) -> Result<Fp>,
{
    let reg = VarRegistry::for_tree(tree);
    let mut report = IdentityReport {
        identity: name.to_owned(),
        tree: tree.to_string(),
        n: tree.n(),
        trials,
        passes: 0,
        failures: Vec::new(),
    };
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, t));
        let mut outcome = None;
        for _ in 0..MAX_RETRIES {
            let w = prepare(WeightAssignment::random_field(tree, field, &mut rng))?;
            match (lhs(&w), rhs(&w)) {
                (Ok(l), Ok(r)) => {
                    outcome = Some((w, l, r));
                    break;
                }
                (Err(Error::Evaluation(_)), _) | (_, Err(Error::Evaluation(_))) => continue,
                (Err(e), _) | (_, Err(e)) => return Err(e),
            }
        }
        let (w, l, r) = outcome.ok_or_else(|| Error::Evaluation(format!("trial {t}: no usable assignment")))?;
        if l == r {
            report.passes += 1;
        } else {
            let values = w.var_values(&reg);
            let assignment = values
                .iter()
                .filter_map(|(&id, v)| Some((reg.name(id)?.to_owned(), v.value())))
                .collect();
            report.failures.push(Failure {
                trial: t,
                lhs: l.value(),
                rhs: r.value(),
                assignment,
            });
        }
    }
    Ok(report)
}

/// [`verify_identity`] for a named identity; `corrupt` negates the closed
/// form.
pub fn verify_named(
    tree: &Tree,
    identity: Identity,
    field: PrimeField,
    trials: usize,
    seed: u64,
    corrupt: bool,
) -> Result<IdentityReport> {
    verify_identity(
        tree,
        identity.name(),
        field,
        trials,
        seed,
        |w| identity.prepare(w),
        |w| identity.lhs(tree, w, field),
        |w| {
            let r = identity.rhs(tree, w, field)?;
            Ok(if corrupt { r.neg().add(field.one()) } else { r })
        },
    )
}
