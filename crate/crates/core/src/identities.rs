//! Exact verification of the model's identities at seeded rational points.
//!
//! Every check compares a lattice quantity with a closed form evaluated by
//! [`crate::symfunc`] or by the formula helpers here, never by the lattice.

use itertools::Itertools;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{precondition, Result};
use crate::lattice::{
    apply_b_sequence, brute_force_wavefunction, dual_wavefunction, dwbp, positions_to_state, wavefunction_vector,
    StateVector,
};
use crate::scalar::{degree, interpolate_univariate, sample_param_point, Kind, ParamPoint, Scalar};
use crate::symfunc::{
    hat_partition, o_expanded_sum, o_lambda, positions_to_partition, prefactor, sp_expanded_sum, sp_lambda,
    weyl_denominator, weyl_denominator_direct, Partition, Sign, SymParams,
};
use crate::vertex::{check_reflection, check_rll, check_yang_baxter_general, l_delta, l_gamma, rll_scalar_relation, Mutation};

/// The first counterexample found by a verifier.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub seed: u64,
    pub inputs: Value,
    pub lhs: Option<Scalar>,
    pub rhs: Option<Scalar>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub identity_id: String,
    #[serde(rename = "passed")]
    pub all_passed: bool,
    pub instances: usize,
    #[serde(rename = "seeds")]
    pub seeds_tested: Vec<u64>,
    #[serde(rename = "failure")]
    pub first_failure: Option<Failure>,
}

impl VerificationReport {
    /// Combine reports of one identity collected over several runs.
    pub fn merge(identity_id: &str, reports: impl IntoIterator<Item = VerificationReport>) -> VerificationReport {
        let mut out = VerificationReport {
            identity_id: identity_id.to_string(),
            all_passed: true,
            instances: 0,
            seeds_tested: Vec::new(),
            first_failure: None,
        };
        for r in reports {
            out.instances += r.instances;
            for s in r.seeds_tested {
                if !out.seeds_tested.contains(&s) {
                    out.seeds_tested.push(s);
                }
            }
            if out.first_failure.is_none() {
                out.first_failure = r.first_failure;
            }
        }
        out.all_passed = out.first_failure.is_none();
        out
    }
}

struct Recorder {
    id: String,
    seed: u64,
    instances: usize,
    failure: Option<Failure>,
}

impl Recorder {
    fn new(id: impl Into<String>, seed: u64) -> Self {
        Recorder { id: id.into(), seed, instances: 0, failure: None }
    }

    fn compare(&mut self, inputs: impl FnOnce() -> Value, lhs: Result<Scalar>, rhs: Result<Scalar>) {
        self.instances += 1;
        if self.failure.is_some() {
            return;
        }
        match (lhs, rhs) {
            (Ok(l), Ok(r)) if l == r => {}
            (Ok(l), Ok(r)) => {
                self.failure = Some(Failure { seed: self.seed, inputs: inputs(), lhs: Some(l), rhs: Some(r), error: None })
            }
            (l, r) => {
                let error = [l.as_ref().err(), r.as_ref().err()].into_iter().flatten().map(|e| e.to_string()).join("; ");
                self.failure = Some(Failure {
                    seed: self.seed,
                    inputs: inputs(),
                    lhs: l.ok(),
                    rhs: r.ok(),
                    error: Some(error),
                })
            }
        }
    }

    fn holds(&mut self, inputs: impl FnOnce() -> Value, ok: Result<bool>) {
        let (l, r) = match ok {
            Ok(true) => (Ok(Scalar::one()), Ok(Scalar::one())),
            Ok(false) => (Ok(Scalar::zero()), Ok(Scalar::one())),
            Err(e) => (Err(e.clone()), Err(e)),
        };
        self.compare(inputs, l, r);
    }

    fn error(&mut self, inputs: Value, e: crate::error::Error) {
        self.compare(|| inputs, Err(e.clone()), Err(e));
    }

    fn finish(self) -> VerificationReport {
        VerificationReport {
            identity_id: self.id,
            all_passed: self.failure.is_none(),
            instances: self.instances,
            seeds_tested: vec![self.seed],
            first_failure: self.failure,
        }
    }
}

fn kind_suffix(kind: Kind, dual: bool) -> String {
    format!("{kind}{}", if dual { "/dual" } else { "" })
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// A sub-seed depending on the base seed and an instance label.
fn instance_seed(seed: u64, label: &str) -> u64 {
    let h = label.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3));
    splitmix(seed ^ splitmix(h))
}

const RESAMPLE_LIMIT: u64 = 100;

/// Points are sampled with numerators and denominators up to this bound.
pub const DEFAULT_BOUNDS: u32 = 20;

/// Configurable verifier; the `verify_*` free functions use the default.
#[derive(Clone, Debug)]
pub struct Verifier {
    pub bounds: u32,
    pub mutation: Option<Mutation>,
}

impl Default for Verifier {
    fn default() -> Self {
        Verifier { bounds: DEFAULT_BOUNDS, mutation: None }
    }
}

/// Products indexed over an inclusive range; empty ranges give 1.
fn prod(range: impl Iterator<Item = usize>, f: impl Fn(usize) -> Scalar) -> Scalar {
    range.map(f).product()
}

fn try_prod(range: impl Iterator<Item = usize>, f: impl Fn(usize) -> Result<Scalar>) -> Result<Scalar> {
    let mut acc = Scalar::one();
    for j in range {
        acc *= f(j)?;
    }
    Ok(acc)
}

fn brace(point: &ParamPoint, j: usize, z: &Scalar) -> Scalar {
    let (a, g) = (&point.alpha[j], &point.gamma[j]);
    a + (1 - a * g) * z
}

fn dual_brace(point: &ParamPoint, j: usize, y: &Scalar) -> Scalar {
    let (a, g) = (&point.alpha[j], &point.gamma[j]);
    -a + (1 - a * g) * y
}

/// Type I and II symmetric-function parameters of a point.
pub fn sym_params(kind: Kind, point: &ParamPoint) -> SymParams {
    match kind {
        Kind::I => SymParams { alpha: point.alpha.clone(), gamma: point.gamma.clone(), base: 0 },
        Kind::II => SymParams { alpha: point.alpha[1..].to_vec(), gamma: point.gamma[1..].to_vec(), base: 1 },
    }
}

/// Closed form of the one-particle wavefunction.
pub fn one_particle_closed_form(kind: Kind, point: &ParamPoint, x1: usize) -> Result<Scalar> {
    let m = point.m;
    let z = &point.z[0];
    let t = &point.t;
    let start = match kind {
        Kind::I => 0,
        Kind::II => 1,
    };
    let mut sum = Scalar::zero();
    for tau in [1i64, -1] {
        let zt = z.pow(tau)?;
        let zti = z.pow(-tau)?;
        let mut term = prod(start..x1, |j| brace(point, j, &zt))
            * prod(x1 + 1..=m, |j| 1 - &point.gamma[j] * &zt)
            * prod(1..=m, |j| 1 - &point.gamma[j] * &zti);
        if kind == Kind::II {
            term *= &zt + point.u()?;
        }
        if tau == 1 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let lead = match kind {
        Kind::I => 1 + t * z.square(),
        Kind::II => point.w.as_ref().expect("type II point")[0].clone() * (1 - point.u()? * z),
    };
    (lead * sum).checked_div(&(z.square() - 1))
}

/// Closed form of the one-particle dual wavefunction.
pub fn one_particle_dual_closed_form(kind: Kind, point: &ParamPoint, hole: usize) -> Result<Scalar> {
    let m = point.m;
    let z = &point.z[0];
    let t = &point.t;
    let y = t * z;
    let start = match kind {
        Kind::I => 0,
        Kind::II => 1,
    };
    let mut sum = Scalar::zero();
    for tau in [1i64, -1] {
        let yt = y.pow(tau)?;
        let yti = y.pow(-tau)?;
        let mut term = prod(start..hole, |j| dual_brace(point, j, &yt))
            * prod(hole + 1..=m, |j| 1 + &point.gamma[j] * &yt)
            * prod(1..=m, |j| 1 + &point.gamma[j] * &yti);
        if kind == Kind::II {
            term *= &yt - point.u()?;
        }
        if tau == 1 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let lead = match kind {
        Kind::I => 1 + t * z.square(),
        Kind::II => point.w.as_ref().expect("type II point")[0].clone() * (1 - point.u()? * z),
    };
    (t.pow(m as i64)? * lead * sum).checked_div(&(y.square() - 1))
}

/// Both sides of the telescoping identity at `x₁`.
pub fn telescoping_sides(z: &Scalar, point: &ParamPoint, x1: usize) -> Result<(Scalar, Scalar)> {
    let zinv = z.inv()?;
    let mut sum = Scalar::zero();
    for j in 1..x1 {
        sum += prod(1..j, |k| brace(point, k, &zinv) * (1 - &point.gamma[k] * z))
            * prod(j + 1..x1, |k| brace(point, k, z) * (1 - &point.gamma[k] * &zinv));
    }
    let lhs = (z - &zinv) * sum;
    let rhs = prod(1..x1, |k| brace(point, k, z) * (1 - &point.gamma[k] * &zinv))
        - prod(1..x1, |k| brace(point, k, &zinv) * (1 - &point.gamma[k] * z));
    Ok((lhs, rhs))
}

/// The fully factorized domain-wall partition function.
pub fn dwbp_closed_form(kind: Kind, point: &ParamPoint) -> Result<Scalar> {
    let m = point.m;
    let (a, g) = (&point.alpha, &point.gamma);
    let start = match kind {
        Kind::I => 0,
        Kind::II => 1,
    };
    let cross = (start..=m).tuple_combinations().map(|(j, k)| 1 + &a[j] * (&g[k] - &g[j])).product::<Scalar>()
        * (1..=m).tuple_combinations().map(|(j, k)| 1 - &g[j] * &g[k]).product::<Scalar>();
    Ok(match kind {
        Kind::I => prefactor(Kind::I, &point.z, &point.t)? * cross,
        Kind::II => {
            let u = point.u()?;
            prefactor(Kind::II, point.spectral(Kind::II)?, u)? * prod(1..=m, |j| 1 + u * &g[j]) * cross
        }
    })
}

/// No site factor `1 + α_j(γ_k - γ_j)`, `1 - γ_jγ_k` (or `1 + uγ_j` for
/// type II) with `j, k < M` vanishes, so the degree in `γ_M` is exact.
fn generic_sites(kind: Kind, point: &ParamPoint) -> bool {
    let (a, g) = (&point.alpha, &point.gamma);
    let start = match kind {
        Kind::I => 0,
        Kind::II => 1,
    };
    let m = point.m;
    (start..m).tuple_combinations().all(|(j, k)| !(1 + &a[j] * (&g[k] - &g[j])).is_zero())
        && (1..m).tuple_combinations().all(|(j, k)| !(1 - &g[j] * &g[k]).is_zero())
        && (kind == Kind::I || point.u.as_ref().is_some_and(|u| (1..m).all(|j| !(1 + u * &g[j]).is_zero())))
}

fn point_json(point: &ParamPoint) -> Value {
    serde_json::to_value(point).unwrap_or(Value::Null)
}

/// `Φ` or `Φ̄` for each position list.
fn lattice_values(kind: Kind, dual: bool, point: &ParamPoint, lists: &[Vec<usize>]) -> Result<Vec<Scalar>> {
    if dual {
        lists.iter().map(|x| dual_wavefunction(kind, point, x)).collect()
    } else {
        let v = wavefunction_vector(kind, point)?;
        lists.iter().map(|x| Ok(v.get(positions_to_state(x, point.m)?).clone())).collect()
    }
}

fn lattice_value(kind: Kind, dual: bool, point: &ParamPoint, x: &[usize]) -> Result<Scalar> {
    Ok(lattice_values(kind, dual, point, &[x.to_vec()])?.remove(0))
}

fn position_lists(m: usize, n: usize) -> Vec<Vec<usize>> {
    (1..=m).combinations(n).collect()
}

/// The inversion under which `Φ / prefactor` is invariant: `z_i -> 1/z_i`
/// for wavefunctions. Dual wavefunctions are functions of `t z`, so their
/// inversion is `z_i -> 1/(t² z_i)`, i.e. `w_i -> 1/(t w_i)` for type II.
pub fn invert_spectral(kind: Kind, dual: bool, point: &ParamPoint, i: usize) -> Result<ParamPoint> {
    let mut xs = point.spectral(kind)?.to_vec();
    let scale = match (dual, kind) {
        (false, _) => Scalar::one(),
        (true, Kind::I) => point.t.square(),
        (true, Kind::II) => point.t.clone(),
    };
    xs[i] = (&xs[i] * scale).inv()?;
    Ok(point.with_spectral(kind, xs))
}

fn kind_prefactor(kind: Kind, point: &ParamPoint) -> Result<Scalar> {
    match kind {
        Kind::I => prefactor(Kind::I, &point.z, &point.t),
        Kind::II => prefactor(Kind::II, point.spectral(Kind::II)?, point.u()?),
    }
}

/// Both sides of the recursion at the frozen `γ_M` for `x_N = M`.
///
/// Wavefunctions freeze `γ_M = z_N`; duals freeze `γ_M = -1/(t z_N)` and,
/// when `reversed`, evaluate both sides with spectral order `z_N, …, z_1`.
/// The right side is the stated factor times the value on `M - 1` sites
/// with the first `N - 1` spectral parameters.
pub fn recursion_sides(kind: Kind, dual: bool, point: &ParamPoint, x: &[usize], reversed: bool) -> Result<(Scalar, Scalar)> {
    let (m, n) = (point.m, point.n);
    if n == 0 || x.len() != n || x.last() != Some(&m) {
        return precondition("the recursion needs N >= 1 and x_N = M");
    }
    let t = &point.t;
    let j0 = match kind {
        Kind::I => 0,
        Kind::II => 1,
    };
    let zs = &point.z;
    let zn = &zs[n - 1];
    let zninv = zn.inv()?;
    let small = point.truncated(m - 1, n - 1);
    let site = |j: usize| (&point.alpha[j], &point.gamma[j]);
    if !dual {
        let lhs = lattice_value(kind, false, &point.with_gamma(m, zn.clone()), x)?;
        let mut factor = prod(0..n, |j| t * zn * &zs[j] + 1)
            * try_prod(0..n - 1, |j| Ok(t + zn.checked_div(&zs[j])?))?
            * prod(j0..m, |j| {
                let (a, g) = site(j);
                (1 - a * g) * &zninv + a
            })
            * prod(1..m, |j| 1 - &point.gamma[j] * zn);
        if kind == Kind::II {
            factor *= point.w.as_ref().expect("type II point")[n - 1].inv()?;
        }
        return Ok((lhs, factor * lattice_value(kind, false, &small, &x[..n - 1])?));
    }
    let order = |p: &ParamPoint| -> Result<ParamPoint> {
        if !reversed {
            return Ok(p.clone());
        }
        let rev: Vec<Scalar> = p.spectral(kind)?.iter().rev().cloned().collect();
        Ok(p.with_spectral(kind, rev))
    };
    let tzn = t * zn;
    let frozen = order(&point.with_gamma(m, -tzn.inv()?))?;
    let lhs = lattice_value(kind, true, &frozen, x)?;
    let mut factor = try_prod(0..n, |j| Ok(1 + (&tzn * &zs[j]).inv()?))?
        * try_prod(0..n - 1, |j| Ok(1 + zs[j].checked_div(&tzn)?))?
        * prod(j0..m, |j| {
            let (a, g) = site(j);
            t * (1 - a * g) * zn - a
        })
        * prod(1..m, |j| t + &point.gamma[j] * &zninv);
    if kind == Kind::II {
        factor *= -(point.u()? * &point.w.as_ref().expect("type II point")[n - 1]);
    }
    Ok((lhs, factor * lattice_value(kind, true, &order(&small)?, &x[..n - 1])?))
}

/// Factor times the `M - 1` site value, for `x_N != M`.
pub fn factorization_rhs(kind: Kind, dual: bool, point: &ParamPoint, x: &[usize]) -> Result<Scalar> {
    let (m, n) = (point.m, point.n);
    let t = &point.t;
    let gm = &point.gamma[m];
    let factor = try_prod(0..n, |j| {
        let z = &point.z[j];
        let zinv = z.inv()?;
        Ok(if dual {
            (1 + t * gm * z) * (t + gm * &zinv)
        } else {
            (1 - gm * z) * (1 - gm * &zinv)
        })
    })?;
    Ok(factor * lattice_value(kind, dual, &point.truncated(m - 1, n), x)?)
}

impl Verifier {
    pub fn with_mutation(mutation: Option<Mutation>) -> Self {
        Verifier { mutation, ..Verifier::default() }
    }

    /// Sample a point for `label`, resampling at `seed + offset` until `accept` holds.
    fn point(
        &self,
        seed: u64,
        label: &str,
        m: usize,
        n: usize,
        kind: Kind,
        accept: impl Fn(&ParamPoint) -> bool,
    ) -> Result<ParamPoint> {
        let base = instance_seed(seed, label);
        for offset in 0..RESAMPLE_LIMIT {
            let p = sample_param_point(base.wrapping_add(offset), m, n, kind, self.bounds)?;
            if accept(&p) {
                return Ok(p.with_mutation(self.mutation));
            }
        }
        precondition(format!("no admissible point for {label}"))
    }

    pub fn telescoping_lemma(&self, seed: u64, max_x1: usize) -> VerificationReport {
        let mut rec = Recorder::new("telescoping-lemma", seed);
        let point = match self.point(seed, "telescoping", max_x1.max(1), 1, Kind::I, |_| true) {
            Ok(p) => p,
            Err(e) => {
                rec.error(json!({ "max_x1": max_x1 }), e);
                return rec.finish();
            }
        };
        for x1 in 1..=max_x1 {
            let sides = telescoping_sides(&point.z[0], &point, x1);
            let (l, r) = match sides {
                Ok((l, r)) => (Ok(l), Ok(r)),
                Err(e) => (Err(e.clone()), Err(e)),
            };
            rec.compare(|| json!({ "x1": x1, "point": point_json(&point) }), l, r);
        }
        rec.finish()
    }

    pub fn one_particle(&self, kind: Kind, dual: bool, seed: u64, m: usize) -> VerificationReport {
        let id = format!("one-particle/{}", kind_suffix(kind, dual));
        let mut rec = Recorder::new(&id, seed);
        let label = format!("{id}/{m}");
        let accept = |p: &ParamPoint| {
            let y = if dual { &p.t * &p.z[0] } else { p.z[0].clone() };
            y.square() != Scalar::one()
        };
        let point = match self.point(seed, &label, m, 1, kind, accept) {
            Ok(p) => p,
            Err(e) => {
                rec.error(json!({ "M": m }), e);
                return rec.finish();
            }
        };
        let lists: Vec<Vec<usize>> = (1..=m).map(|x| vec![x]).collect();
        match lattice_values(kind, dual, &point, &lists) {
            Ok(values) => {
                for (x, lhs) in lists.iter().zip(values) {
                    let rhs = if dual {
                        one_particle_dual_closed_form(kind, &point, x[0])
                    } else {
                        one_particle_closed_form(kind, &point, x[0])
                    };
                    rec.compare(|| json!({ "M": m, "x1": x[0], "point": point_json(&point) }), Ok(lhs), rhs);
                }
            }
            Err(e) => rec.error(json!({ "M": m, "point": point_json(&point) }), e),
        }
        rec.finish()
    }

    pub fn ik_properties(&self, kind: Kind, dual: bool, seed: u64, m: usize, n: usize) -> VerificationReport {
        let id = format!("izergin-korepin/{}", kind_suffix(kind, dual));
        let mut rec = Recorder::new(&id, seed);
        let label = format!("{id}/{m}/{n}");
        let point = match self.point(seed, &label, m, n, kind, |p| generic_sites(kind, p)) {
            Ok(p) => p,
            Err(e) => {
                rec.error(json!({ "M": m, "N": n }), e);
                return rec.finish();
            }
        };
        if let Err(e) = self.ik_checks(&mut rec, kind, dual, &point) {
            rec.error(json!({ "M": m, "N": n, "point": point_json(&point) }), e);
        }
        rec.finish()
    }

    fn ik_checks(&self, rec: &mut Recorder, kind: Kind, dual: bool, point: &ParamPoint) -> Result<()> {
        let (m, n) = (point.m, point.n);
        let lists = position_lists(m, n);
        let base = lattice_values(kind, dual, point, &lists)?;
        let pref = kind_prefactor(kind, point)?;
        let inputs = |check: &str, x: &[usize]| json!({ "check": check, "M": m, "N": n, "positions": x, "point": point_json(point) });

        // (1) degree 2N-1 in γ_M when the last particle (hole) sits at site M.
        for x in lists.iter().filter(|x| x.last() == Some(&m)) {
            let mut samples = Vec::new();
            for k in 0..=(2 * n) as i64 {
                let g = Scalar::from(k);
                samples.push((g.clone(), lattice_value(kind, dual, &point.with_gamma(m, g), x)?));
            }
            let coeffs = interpolate_univariate(&samples)?;
            let deg = degree(&coeffs).map_or(-1, |d| d as i64);
            rec.compare(|| inputs("degree", x), Ok(Scalar::from(deg)), Ok(Scalar::from(2 * n as i64 - 1)));
        }

        // (2) Φ / prefactor is symmetric and invariant under the inversion.
        let mut transformed = Vec::new();
        for perm in (0..n).permutations(n).skip(1) {
            let xs = point.spectral(kind)?;
            transformed.push(("permutation", point.with_spectral(kind, perm.iter().map(|&i| xs[i].clone()).collect())));
        }
        for i in 0..n {
            transformed.push(("inversion", invert_spectral(kind, dual, point, i)?));
        }
        for (check, q) in &transformed {
            let values = lattice_values(kind, dual, q, &lists)?;
            let qpref = kind_prefactor(kind, q)?;
            for ((x, v0), v1) in lists.iter().zip(&base).zip(values) {
                rec.compare(|| inputs(check, x), Ok(v1 * &pref), Ok(v0 * &qpref));
            }
        }

        // (3) recursion at the frozen value of γ_M, factorization otherwise.
        for (x, v0) in lists.iter().zip(&base) {
            if x.last() == Some(&m) {
                let (lhs, rhs) = recursion_sides(kind, dual, point, x, true)?;
                rec.compare(|| inputs("recursion", x), Ok(lhs), Ok(rhs));
            } else {
                let rhs = factorization_rhs(kind, dual, point, x)?;
                rec.compare(|| inputs("factorization", x), Ok(v0.clone()), Ok(rhs));
            }
        }
        Ok(())
    }

    pub fn main_correspondence(&self, kind: Kind, dual: bool, seed: u64, m: usize, n: usize) -> VerificationReport {
        let id = format!("main-correspondence/{}", kind_suffix(kind, dual));
        let mut rec = Recorder::new(&id, seed);
        let label = format!("{id}/{m}/{n}");
        let accept = |p: &ParamPoint| {
            if !dual {
                return true;
            }
            let tz: Vec<Scalar> = p.z.iter().map(|z| &p.t * z).collect();
            weyl_denominator(&tz).is_ok_and(|d| !d.is_zero())
        };
        let point = match self.point(seed, &label, m, n, kind, accept) {
            Ok(p) => p,
            Err(e) => {
                rec.error(json!({ "M": m, "N": n }), e);
                return rec.finish();
            }
        };
        let lists = position_lists(m, n);
        let values = match lattice_values(kind, dual, &point, &lists) {
            Ok(v) => v,
            Err(e) => {
                rec.error(json!({ "M": m, "N": n, "point": point_json(&point) }), e);
                return rec.finish();
            }
        };
        for (x, lhs) in lists.iter().zip(values) {
            let rhs = correspondence_rhs(kind, dual, &point, x);
            rec.compare(|| json!({ "M": m, "N": n, "positions": x, "point": point_json(&point) }), Ok(lhs), rhs);
        }
        rec.finish()
    }

    pub fn dwbp_factorization(&self, kind: Kind, seed: u64, m: usize) -> VerificationReport {
        let id = format!("dwbp-factorization/{kind}");
        let mut rec = Recorder::new(&id, seed);
        match self.point(seed, &format!("{id}/{m}"), m, m, kind, |_| true) {
            Ok(point) => rec.compare(
                || json!({ "M": m, "point": point_json(&point) }),
                dwbp(kind, &point),
                dwbp_closed_form(kind, &point),
            ),
            Err(e) => rec.error(json!({ "M": m }), e),
        }
        rec.finish()
    }

    pub fn dual_cauchy(&self, kind: Kind, seed: u64, n: usize, m: usize) -> VerificationReport {
        let id = format!("dual-cauchy/{kind}");
        let mut rec = Recorder::new(&id, seed);
        let l = n + m;
        match self.point(seed, &format!("{id}/{n}/{m}"), l, l, kind, |_| true) {
            Ok(point) => {
                let (lhs, rhs) = match dual_cauchy_sides(kind, &point, n, m) {
                    Ok((a, b)) => (Ok(a), Ok(b)),
                    Err(e) => (Err(e.clone()), Err(e)),
                };
                rec.compare(|| json!({ "N": n, "M": m, "point": point_json(&point) }), lhs, rhs);
            }
            Err(e) => rec.error(json!({ "N": n, "M": m }), e),
        }
        rec.finish()
    }

    pub fn b_commutation(&self, kind: Kind, seed: u64, m: usize) -> VerificationReport {
        let id = format!("b-exchange/{kind}");
        let mut rec = Recorder::new(&id, seed);
        let label = format!("{id}/{m}");
        let accept = |p: &ParamPoint| !(&p.z[0] + &p.t * &p.z[1]).is_zero() && !(&p.z[1] + &p.t * &p.z[0]).is_zero();
        let point = match self.point(seed, &label, m, 2, kind, accept) {
            Ok(p) => p,
            Err(e) => {
                rec.error(json!({ "M": m }), e);
                return rec.finish();
            }
        };
        let mut rng = ChaCha8Rng::seed_from_u64(instance_seed(seed, &format!("{label}/vector")));
        let amps = (0..1usize << m).map(|_| Scalar::sample(&mut rng, self.bounds)).collect();
        let v = StateVector::from_amplitudes(m, amps).expect("length 2^M");
        let result = (|| {
            let xs = point.spectral(kind)?;
            let ij = apply_b_sequence(kind, &[xs[0].clone(), xs[1].clone()], &point, &v)?;
            let ji = apply_b_sequence(kind, &[xs[1].clone(), xs[0].clone()], &point, &v)?;
            let (zi, zj) = (&point.z[0], &point.z[1]);
            Ok((ij.scale(&(zi + &point.t * zj)), ji.scale(&(zj + &point.t * zi))))
        })();
        match result {
            Ok((lhs, rhs)) => {
                for (s, (a, b)) in lhs.amplitudes().iter().zip(rhs.amplitudes()).enumerate() {
                    rec.compare(|| json!({ "M": m, "component": s, "point": point_json(&point) }), Ok(a.clone()), Ok(b.clone()));
                }
            }
            Err(e) => rec.error(json!({ "M": m, "point": point_json(&point) }), e),
        }
        rec.finish()
    }

    /// Streaming wavefunction against the Kronecker-product engine.
    pub fn oracle_brute_force(&self, seed: u64, count: usize, max_m: usize, max_n: usize) -> VerificationReport {
        let mut rec = Recorder::new("oracle/brute-force", seed);
        let mut rng = ChaCha8Rng::seed_from_u64(instance_seed(seed, "oracle/brute-force"));
        for i in 0..count {
            use rand::Rng;
            let m = rng.random_range(1..=max_m.max(1));
            let n = rng.random_range(1..=m.min(max_n.max(1)));
            let kind = if i % 2 == 0 { Kind::I } else { Kind::II };
            let mut pos: Vec<usize> = rand::seq::index::sample(&mut rng, m, n).into_iter().map(|x| x + 1).collect();
            pos.sort_unstable();
            match self.point(seed, &format!("oracle/brute-force/{i}"), m, n, kind, |_| true) {
                Ok(point) => rec.compare(
                    || json!({ "kind": kind, "positions": pos, "point": point_json(&point) }),
                    crate::lattice::wavefunction(kind, &point, &pos),
                    brute_force_wavefunction(kind, &point, &pos),
                ),
                Err(e) => rec.error(json!({ "instance": i }), e),
            }
        }
        rec.finish()
    }

    /// Determinant path against the `(σ, τ)` expansion, for `sp` and both `o^±`.
    pub fn oracle_expanded_sum(&self, seed: u64, count: usize, max_n: usize) -> VerificationReport {
        let mut rec = Recorder::new("oracle/expanded-sum", seed);
        let mut rng = ChaCha8Rng::seed_from_u64(instance_seed(seed, "oracle/expanded-sum"));
        for i in 0..count {
            use rand::Rng;
            let n = rng.random_range(1..=max_n.max(1));
            let mut parts: Vec<usize> = (0..n).map(|_| rng.random_range(0..=3)).collect();
            parts.sort_unstable_by(|a, b| b.cmp(a));
            let lambda = Partition::new(parts).expect("sorted");
            let top = lambda.parts()[0] + n + rng.random_range(0..=1);
            let kind = if i % 2 == 0 { Kind::I } else { Kind::II };
            let point = match self.point(seed, &format!("oracle/expanded-sum/{i}"), top, n, kind, |_| true) {
                Ok(p) => p,
                Err(e) => {
                    rec.error(json!({ "instance": i }), e);
                    continue;
                }
            };
            let inputs = || json!({ "kind": kind, "lambda": lambda, "point": point_json(&point) });
            let params = sym_params(kind, &point);
            match kind {
                Kind::I => rec.compare(inputs, sp_lambda(&point.z, &params, &lambda), sp_expanded_sum(&point.z, &params, &lambda)),
                Kind::II => {
                    let u = point.u.clone().expect("type II point");
                    for sign in [Sign::Plus, Sign::Minus] {
                        rec.compare(
                            inputs,
                            o_lambda(&point.z, &u, &params, &lambda, sign),
                            o_expanded_sum(&point.z, &u, &params, &lambda, sign),
                        );
                    }
                }
            }
        }
        rec.finish()
    }

    /// Factorized Weyl denominator against the explicit determinant.
    pub fn oracle_weyl(&self, seed: u64, count: usize, max_n: usize) -> VerificationReport {
        let mut rec = Recorder::new("oracle/weyl-denominator", seed);
        for i in 0..count {
            let n = 1 + i % max_n.max(1);
            match self.point(seed, &format!("oracle/weyl/{i}"), 1, n, Kind::I, |_| true) {
                Ok(point) => rec.compare(
                    || json!({ "z": point.z }),
                    weyl_denominator(&point.z),
                    weyl_denominator_direct(&point.z),
                ),
                Err(e) => rec.error(json!({ "instance": i }), e),
            }
        }
        rec.finish()
    }
}

/// Right-hand side of the wavefunction / symmetric function correspondence.
pub fn correspondence_rhs(kind: Kind, dual: bool, point: &ParamPoint, positions: &[usize]) -> Result<Scalar> {
    let (m, n) = (point.m, point.n);
    let lambda = positions_to_partition(positions)?;
    let params = sym_params(kind, point);
    let pref = kind_prefactor(kind, point)?;
    if !dual {
        return Ok(pref
            * match kind {
                Kind::I => sp_lambda(&point.z, &params, &lambda)?,
                Kind::II => o_lambda(&point.z, point.u()?, &params, &lambda, Sign::Plus)?,
            });
    }
    let t = &point.t;
    let tz: Vec<Scalar> = point.z.iter().map(|z| t * z).collect();
    let neg = params.negated();
    let sym = match kind {
        Kind::I => sp_lambda(&tz, &neg, &lambda)?,
        Kind::II => o_lambda(&tz, point.u()?, &neg, &lambda, Sign::Minus)?,
    };
    Ok(t.pow((n * (m - n)) as i64)? * pref * sym)
}

/// Both sides of the dual Cauchy identity, with `x = z₁..z_N`,
/// `y = z_{N+1}..z_{N+M}` and the point's site parameters as the
/// length-`N+M` parameter sets.
pub fn dual_cauchy_sides(kind: Kind, point: &ParamPoint, n: usize, m: usize) -> Result<(Scalar, Scalar)> {
    let l = n + m;
    if point.m != l || point.z.len() != l {
        return precondition("dual Cauchy needs N+M sites and N+M spectral parameters");
    }
    let (xs, ys) = point.z.split_at(n);
    let params = sym_params(kind, point);
    let neg = params.negated();
    let mut lhs = Scalar::zero();
    for lambda in Partition::in_box(n, m) {
        let hat = hat_partition(&lambda, m)?;
        lhs += match kind {
            Kind::I => sp_lambda(xs, &params, &lambda)? * sp_lambda(ys, &neg, &hat)?,
            Kind::II => {
                let u = point.u()?;
                o_lambda(xs, u, &params, &lambda, Sign::Plus)? * o_lambda(ys, u, &neg, &hat, Sign::Minus)?
            }
        };
    }
    let (a, g) = (&point.alpha, &point.gamma);
    let start = match kind {
        Kind::I => 0,
        Kind::II => 1,
    };
    let mut rhs = try_prod(0..m, |k| ys[k].pow(-(n as i64)))?;
    for x in xs {
        let xinv = x.inv()?;
        for y in ys {
            rhs *= (1 + x * y) * (1 + &xinv * y);
        }
    }
    rhs *= (start..=l).tuple_combinations().map(|(j, k)| 1 + &a[j] * (&g[k] - &g[j])).product::<Scalar>();
    rhs *= (1..=l).tuple_combinations().map(|(j, k)| 1 - &g[j] * &g[k]).product::<Scalar>();
    if kind == Kind::II {
        let u = point.u()?;
        rhs *= prod(1..=l, |j| 1 + u * &g[j]);
    }
    Ok((lhs, rhs))
}

/// Local relations at `count` seeded points: general Yang-Baxter, RLL, the
/// scalar RLL identity, free-fermion structure of both L-operators, and the
/// calibrated reflection relation for both K-matrices.
pub fn verify_local_relations(seed: u64, count: usize) -> Vec<VerificationReport> {
    let verifier = Verifier::default();
    let mut ybe = Recorder::new("local/yang-baxter", seed);
    let mut rll = Recorder::new("local/rll", seed);
    let mut scalar = Recorder::new("local/rll-scalar", seed);
    let mut ff = Recorder::new("local/free-fermion", seed);
    let mut refl1 = Recorder::new("local/reflection/I", seed);
    let mut refl0 = Recorder::new("local/reflection/I-trivial-boundary", seed);
    let mut refl2 = Recorder::new("local/reflection/II", seed);
    for i in 0..count {
        let label = format!("local/{i}");
        let p1 = match verifier.point(seed, &label, 1, 2, Kind::I, |_| true) {
            Ok(p) => p,
            Err(e) => {
                ybe.error(json!({ "instance": i }), e);
                continue;
            }
        };
        let p2 = match verifier.point(seed, &label, 1, 2, Kind::II, |_| true) {
            Ok(p) => p,
            Err(e) => {
                refl2.error(json!({ "instance": i }), e);
                continue;
            }
        };
        let (z1, z2, t) = (&p1.z[0], &p1.z[1], &p1.t);
        let (a, g) = (&p1.alpha[1], &p1.gamma[1]);
        let (pp1, pp2) = (&p1.alpha[0], &p2.alpha[1]);
        let inputs = || json!({ "point": point_json(&p1) });
        ybe.holds(inputs, check_yang_baxter_general(z1, z2, pp1, pp2));
        rll.holds(inputs, check_rll(z1, z2, t, a, g));
        scalar.holds(inputs, Ok(rll_scalar_relation(z1, z2, t, a, g)));
        for l in [l_gamma(z1, t, a, g), l_delta(z1, t, a, g)] {
            ff.holds(inputs, Ok(l.has_six_vertex_support() && l.satisfies_free_fermion()));
        }
        refl1.holds(inputs, check_reflection(Kind::I, &p1, z1, z2));
        let mut p0 = p1.clone();
        p0.alpha[0] = Scalar::zero();
        p0.gamma[0] = Scalar::zero();
        refl0.holds(|| json!({ "point": point_json(&p0) }), check_reflection(Kind::I, &p0, z1, z2));
        let w = p2.w.clone().expect("type II point");
        refl2.holds(|| json!({ "point": point_json(&p2) }), check_reflection(Kind::II, &p2, &w[0], &w[1]));
    }
    [ybe, rll, scalar, ff, refl1, refl0, refl2].into_iter().map(Recorder::finish).collect()
}

pub fn verify_telescoping_lemma(seed: u64, max_x1: usize) -> VerificationReport {
    Verifier::default().telescoping_lemma(seed, max_x1)
}

pub fn verify_one_particle(kind: Kind, dual: bool, seed: u64, m: usize) -> VerificationReport {
    Verifier::default().one_particle(kind, dual, seed, m)
}

pub fn verify_ik_properties(kind: Kind, dual: bool, seed: u64, m: usize, n: usize) -> VerificationReport {
    Verifier::default().ik_properties(kind, dual, seed, m, n)
}

pub fn verify_main_correspondence(kind: Kind, dual: bool, seed: u64, m: usize, n: usize) -> VerificationReport {
    Verifier::default().main_correspondence(kind, dual, seed, m, n)
}

pub fn verify_dwbp_factorization(kind: Kind, seed: u64, m: usize) -> VerificationReport {
    Verifier::default().dwbp_factorization(kind, seed, m)
}

pub fn verify_dual_cauchy(kind: Kind, seed: u64, n: usize, m: usize) -> VerificationReport {
    Verifier::default().dual_cauchy(kind, seed, n, m)
}

pub fn verify_b_commutation(kind: Kind, seed: u64, m: usize) -> VerificationReport {
    Verifier::default().b_commutation(kind, seed, m)
}

/// Grid limits for [`verify_all`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Budget {
    #[serde(rename = "max_M")]
    pub max_m: usize,
    #[serde(rename = "max_N")]
    pub max_n: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_m: 5, max_n: 3 }
    }
}

/// One identity of the suite, runnable independently of the others.
pub struct SuiteTask {
    pub identity_id: String,
    run: Box<dyn Fn() -> Vec<VerificationReport> + Send + Sync>,
}

impl SuiteTask {
    fn new(id: impl Into<String>, run: impl Fn() -> Vec<VerificationReport> + Send + Sync + 'static) -> Self {
        SuiteTask { identity_id: id.into(), run: Box::new(run) }
    }

    pub fn run(&self) -> Vec<VerificationReport> {
        (self.run)()
    }
}

fn seeds(seed: u64, count: u64) -> impl Iterator<Item = u64> {
    (0..count).map(move |i| seed.wrapping_add(i))
}

/// Every identity with the number of seeds each uses.
pub fn suite(seed: u64, budget: Budget, mutation: Option<Mutation>) -> Vec<SuiteTask> {
    let v = Verifier::with_mutation(mutation);
    let Budget { max_m, max_n } = budget;
    let mut tasks = Vec::new();
    tasks.push(SuiteTask::new("local", move || verify_local_relations(seed, 50)));
    {
        let v = v.clone();
        tasks.push(SuiteTask::new("telescoping-lemma", move || {
            vec![VerificationReport::merge("telescoping-lemma", seeds(seed, 5).map(|s| v.telescoping_lemma(s, 10)))]
        }));
    }
    for kind in [Kind::I, Kind::II] {
        for dual in [false, true] {
            let suffix = kind_suffix(kind, dual);
            let vv = v.clone();
            let id = format!("one-particle/{suffix}");
            tasks.push(SuiteTask::new(id.clone(), move || {
                let reports = seeds(seed, 5).flat_map(|s| (1..=max_m).map(move |m| (s, m))).map(|(s, m)| vv.one_particle(kind, dual, s, m));
                vec![VerificationReport::merge(&id, reports.collect::<Vec<_>>())]
            }));
            let vv = v.clone();
            let id = format!("izergin-korepin/{suffix}");
            tasks.push(SuiteTask::new(id.clone(), move || {
                let mut reports = Vec::new();
                for s in seeds(seed, 3) {
                    for m in 1..=max_m {
                        for n in 1..=m.min(max_n) {
                            reports.push(vv.ik_properties(kind, dual, s, m, n));
                        }
                    }
                }
                vec![VerificationReport::merge(&id, reports)]
            }));
            let vv = v.clone();
            let id = format!("main-correspondence/{suffix}");
            tasks.push(SuiteTask::new(id.clone(), move || {
                let mut reports = Vec::new();
                for s in seeds(seed, 3) {
                    for m in 1..=max_m {
                        for n in 1..=m.min(max_n) {
                            reports.push(vv.main_correspondence(kind, dual, s, m, n));
                        }
                    }
                }
                vec![VerificationReport::merge(&id, reports)]
            }));
        }
        let vv = v.clone();
        let id = format!("dwbp-factorization/{kind}");
        tasks.push(SuiteTask::new(id.clone(), move || {
            let reports = seeds(seed, 5).flat_map(|s| (1..=max_m).map(move |m| (s, m))).map(|(s, m)| vv.dwbp_factorization(kind, s, m));
            vec![VerificationReport::merge(&id, reports.collect::<Vec<_>>())]
        }));
        let vv = v.clone();
        let id = format!("dual-cauchy/{kind}");
        tasks.push(SuiteTask::new(id.clone(), move || {
            let mut reports = Vec::new();
            for s in seeds(seed, 3) {
                for n in 1..=max_n {
                    for m in 1..=max_m {
                        if n + m <= max_m + 1 {
                            reports.push(vv.dual_cauchy(kind, s, n, m));
                        }
                    }
                }
            }
            vec![VerificationReport::merge(&id, reports)]
        }));
        let vv = v.clone();
        let id = format!("b-exchange/{kind}");
        tasks.push(SuiteTask::new(id.clone(), move || {
            let reports = seeds(seed, 5).flat_map(|s| (1..=max_m).map(move |m| (s, m))).map(|(s, m)| vv.b_commutation(kind, s, m));
            vec![VerificationReport::merge(&id, reports.collect::<Vec<_>>())]
        }));
    }
    let vv = v.clone();
    tasks.push(SuiteTask::new("oracle/brute-force", move || vec![vv.oracle_brute_force(seed, 50, max_m.min(5), max_n.min(3))]));
    let vv = v.clone();
    tasks.push(SuiteTask::new("oracle/expanded-sum", move || vec![vv.oracle_expanded_sum(seed, 50, max_n.min(3))]));
    tasks.push(SuiteTask::new("oracle/weyl-denominator", move || vec![v.oracle_weyl(seed, 20, 4)]));
    tasks
}

/// Sort reports canonically by identity id.
pub fn canonical_order(mut reports: Vec<VerificationReport>) -> Vec<VerificationReport> {
    reports.sort_by(|a, b| a.identity_id.cmp(&b.identity_id));
    reports
}

/// Run the whole suite sequentially.
pub fn verify_all(seed: u64, budget: Budget) -> Vec<VerificationReport> {
    verify_all_with(seed, budget, None)
}

pub fn verify_all_with(seed: u64, budget: Budget, mutation: Option<Mutation>) -> Vec<VerificationReport> {
    canonical_order(suite(seed, budget, mutation).iter().flat_map(SuiteTask::run).collect())
}

/// Identity ids and one-line descriptions.
pub fn catalogue() -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = vec![
        ("local/yang-baxter".into(), "Yang-Baxter relation of the general free-fermionic R-matrix".into()),
        ("local/rll".into(), "RLL relation between R(z1/z2, t) and the type Gamma L-operator".into()),
        ("local/rll-scalar".into(), "scalar identity t z_i + z_k underlying the RLL relation".into()),
        ("local/free-fermion".into(), "six-vertex support and free-fermion condition of both L-operators".into()),
        ("local/reflection/I".into(), "reflection relation for the type I K-matrix".into()),
        ("local/reflection/I-trivial-boundary".into(), "reflection relation for the type I K-matrix at alpha_0 = gamma_0 = 0".into()),
        ("local/reflection/II".into(), "reflection relation for the type II K-matrix".into()),
        ("telescoping-lemma".into(), "telescoping identity behind the one-particle formulas".into()),
        ("oracle/brute-force".into(), "streaming wavefunction equals Kronecker-product assembly".into()),
        ("oracle/expanded-sum".into(), "determinant and (sigma, tau) expansion of sp and o agree".into()),
        ("oracle/weyl-denominator".into(), "factorized and determinantal Weyl denominators agree".into()),
    ];
    for kind in [Kind::I, Kind::II] {
        for dual in [false, true] {
            let suffix = kind_suffix(kind, dual);
            let what = if dual { "dual wavefunction" } else { "wavefunction" };
            let sym = match (kind, dual) {
                (Kind::I, _) => "generalized symplectic Schur function",
                (Kind::II, false) => "generalized Whittaker function o+",
                (Kind::II, true) => "generalized Whittaker function o-",
            };
            out.push((format!("one-particle/{suffix}"), format!("type {kind} one-particle {what} closed form")));
            out.push((
                format!("izergin-korepin/{suffix}"),
                format!("type {kind} {what}: degree, symmetry, recursion and factorization in gamma_M"),
            ));
            out.push((format!("main-correspondence/{suffix}"), format!("type {kind} {what} equals prefactor times {sym}")));
        }
        out.push((format!("dwbp-factorization/{kind}"), format!("type {kind} domain-wall partition function factorizes")));
        out.push((format!("dual-cauchy/{kind}"), format!("type {kind} dual Cauchy formula")));
        out.push((format!("b-exchange/{kind}"), format!("type {kind} double-row B-operator exchange relation")));
    }
    out.sort();
    out
}
