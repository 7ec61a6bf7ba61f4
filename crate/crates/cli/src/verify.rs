//! Batch verification behind `arborflow verify`.

use clap::ValueEnum;
use serde::Serialize;

use arborflow::catalysts::{arrowflow_partition, cycle_type, permutation_sign, signed_class_sum, unital_arrowflows};
use arborflow::exactalg::{det_bareiss_int, PrimeField};
use arborflow::formulas::{graham_pollak_value, trial_seed, verify_named, Identity, IdentityReport};
use arborflow::matrices::distance_matrix;
use arborflow::route_map::{build_route_map, canonical_nip, PathFamily, RouteMap, MAX_FAMILY_ENUM_N};
use arborflow::{Error, Tree};

use crate::error::CliError;

pub const SCHEMA: &str = "arborflow/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    Gp,
    Q,
    SumOnClass,
    Lifting,
    Nip,
    Emmanuel,
    Indep,
    Ck,
    Qsum,
}

impl Target {
    fn identity(self) -> Option<Identity> {
        match self {
            Target::Q => Some(Identity::QAnalogue),
            Target::Emmanuel => Some(Identity::Emmanuel),
            Target::Indep => Some(Identity::Indep),
            Target::Ck => Some(Identity::Ck),
            Target::Qsum => Some(Identity::Qsum),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub trials: usize,
    pub seed: u64,
    pub field: PrimeField,
    /// Negative control: perturb the expected side or the network.
    pub corrupt: bool,
}

#[derive(Debug, Serialize)]
pub struct TreeResult {
    pub tree: String,
    pub n: usize,
    pub ok: bool,
    pub checks: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<IdentityReport>,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub schema: &'static str,
    pub target: Target,
    pub seed: u64,
    pub prime: u64,
    pub trials: usize,
    pub ok: bool,
    pub trees: usize,
    pub failed: usize,
    pub results: Vec<TreeResult>,
}

struct Tally {
    checks: usize,
    witness: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { checks: 0, witness: None }
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    fn finish(self, tree: &Tree) -> TreeResult {
        TreeResult {
            tree: tree.to_string(),
            n: tree.n(),
            ok: self.witness.is_none(),
            checks: self.checks,
            witness: self.witness,
            report: None,
        }
    }
}

/// Keeps guard errors fatal and turns other errors into witnesses.
fn soft<T>(r: arborflow::Result<T>, tally: &mut Tally, context: impl FnOnce() -> String) -> Result<Option<T>, CliError> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(e @ Error::Guard { .. }) => Err(e.into()),
        Err(e) => {
            tally.check(false, || format!("{}: {e}", context()));
            Ok(None)
        }
    }
}

fn route_map(tree: &Tree, a: &arborflow::catalysts::Arrowflow, corrupt: bool) -> arborflow::Result<RouteMap> {
    let rm = build_route_map(tree, a)?;
    if corrupt {
        rm.without_bridge(0)
    } else {
        Ok(rm)
    }
}

fn verify_gp(tree: &Tree, opts: &VerifyOptions) -> Result<TreeResult, CliError> {
    let det = det_bareiss_int(&distance_matrix(tree))?;
    let mut expect = graham_pollak_value(tree.n());
    if opts.corrupt {
        expect += 1;
    }
    let mut t = Tally::new();
    t.check(det == expect, || format!("det = {det}, closed form = {expect}"));
    Ok(t.finish(tree))
}

fn verify_sum_on_class(tree: &Tree, opts: &VerifyOptions) -> Result<TreeResult, CliError> {
    let n = tree.n();
    let mut unit: i64 = if n % 2 == 1 { 1 } else { -1 };
    if opts.corrupt {
        unit = -unit;
    }
    let mut t = Tally::new();
    let mut unital = 0usize;
    for (a, class) in arrowflow_partition(tree)? {
        let c = a.classify(tree);
        let s = signed_class_sum(&class);
        let expect = if c.is_unital() { unit } else { 0 };
        unital += c.is_unital() as usize;
        t.check(s == expect, || format!("class {a} ({}) sums to {s}, expected {expect}", c.kind()));
    }
    let want = if n >= 2 { (n - 1) << (n - 2) } else { 0 };
    t.check(unital == want, || format!("{unital} unital classes, expected {want}"));
    Ok(t.finish(tree))
}

fn verify_lifting(tree: &Tree, opts: &VerifyOptions) -> Result<TreeResult, CliError> {
    let mut t = Tally::new();
    for (a, class) in arrowflow_partition(tree)? {
        if !a.classify(tree).is_unital() {
            continue;
        }
        let Some(rm) = soft(route_map(tree, &a, opts.corrupt), &mut t, || format!("route map of {a}"))? else {
            continue;
        };
        if tree.n() <= MAX_FAMILY_ENUM_N {
            let Some(full) = soft(rm.enumerate_full_families(), &mut t, || format!("families of {a}"))? else {
                continue;
            };
            t.check(full.len() == class.len(), || {
                format!("{a}: {} full families, {} catalysts", full.len(), class.len())
            });
        }
        for k in &class {
            let Some(fam) = soft(rm.lift_catalyst(k), &mut t, || format!("lift of {k}"))? else {
                continue;
            };
            let back = soft(rm.project_family(&fam), &mut t, || format!("projection of lift of {k}"))?;
            t.check(back.as_ref() == Some(k), || format!("project(lift({k})) differs"));
            t.check(fam.sign(rm.network())? == k.sign(), || format!("sign of lift of {k}"));
        }
    }
    Ok(t.finish(tree))
}

fn verify_nip(tree: &Tree, opts: &VerifyOptions) -> Result<TreeResult, CliError> {
    let n = tree.n();
    let mut t = Tally::new();
    for a in unital_arrowflows(tree) {
        let Some(rm) = soft(route_map(tree, &a, opts.corrupt), &mut t, || format!("route map of {a}"))? else {
            continue;
        };
        let Some(star) = soft(canonical_nip(&rm), &mut t, || format!("canonical family of {a}"))? else {
            continue;
        };
        let perm = star.permutation(rm.network())?;
        let want = if n % 2 == 1 { 1 } else { -1 };
        t.check(star.is_non_intersecting(), || format!("{a}: canonical family intersects"));
        t.check(star.is_full(rm.network()), || format!("{a}: canonical family is not full"));
        t.check(cycle_type(&perm) == vec![n], || format!("{a}: permutation {perm:?} is not an n-cycle"));
        t.check(permutation_sign(&perm) == want, || format!("{a}: sign of {perm:?}"));
        if n <= 4 {
            let nips = rm
                .enumerate_full_families()?
                .into_iter()
                .filter(PathFamily::is_non_intersecting)
                .count();
            t.check(nips == 1, || format!("{a}: {nips} non-intersecting full families"));
        }
    }
    Ok(t.finish(tree))
}

fn verify_identity(tree: &Tree, id: Identity, opts: &VerifyOptions, seed: u64) -> Result<TreeResult, CliError> {
    let r = verify_named(tree, id, opts.field, opts.trials, seed, opts.corrupt)?;
    let witness = r
        .failures
        .first()
        .map(|f| format!("trial {}: det = {}, closed form = {}", f.trial, f.lhs, f.rhs));
    Ok(TreeResult {
        tree: tree.to_string(),
        n: tree.n(),
        ok: r.ok(),
        checks: r.trials,
        witness,
        report: Some(r),
    })
}

pub fn verify(target: Target, trees: &[Tree], opts: &VerifyOptions) -> Result<VerifyReport, CliError> {
    let mut results = Vec::with_capacity(trees.len());
    for (k, tree) in trees.iter().enumerate() {
        let r = match (target, target.identity()) {
            (_, Some(id)) => verify_identity(tree, id, opts, trial_seed(opts.seed, k))?,
            (Target::Gp, _) => verify_gp(tree, opts)?,
            (Target::SumOnClass, _) => verify_sum_on_class(tree, opts)?,
            (Target::Lifting, _) => verify_lifting(tree, opts)?,
            (Target::Nip, _) => verify_nip(tree, opts)?,
            _ => unreachable!("identity targets handled above"),
        };
        results.push(r);
    }
    let failed = results.iter().filter(|r| !r.ok).count();
    Ok(VerifyReport {
        schema: SCHEMA,
        target,
        seed: opts.seed,
        prime: opts.field.modulus(),
        trials: opts.trials,
        ok: failed == 0,
        trees: results.len(),
        failed,
        results,
    })
}
